//! Node-level attribute panel and the directed nomination network.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::roster::{Roster, SampleId};

/// Per-node attribute values aligned with a roster. `None` is missing data.
/// Attribute order is insertion order, so output tables are stable.
#[derive(Clone, Debug, PartialEq)]
pub struct NodePanel {
    roster: Roster,
    numeric: Vec<(String, Vec<Option<f64>>)>,
    categorical: Vec<(String, Vec<Option<String>>)>,
}

impl NodePanel {
    pub fn new(roster: Roster) -> Self {
        Self {
            roster,
            numeric: Vec::new(),
            categorical: Vec::new(),
        }
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn n(&self) -> usize {
        self.roster.len()
    }

    pub fn add_numeric(&mut self, name: impl Into<String>, values: Vec<Option<f64>>) -> Result<()> {
        if values.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: values.len(),
            });
        }
        self.numeric.push((name.into(), values));
        Ok(())
    }

    pub fn add_categorical(
        &mut self,
        name: impl Into<String>,
        values: Vec<Option<String>>,
    ) -> Result<()> {
        if values.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: values.len(),
            });
        }
        self.categorical.push((name.into(), values));
        Ok(())
    }

    pub fn numeric(&self, name: &str) -> Option<&[Option<f64>]> {
        self.numeric
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn categorical(&self, name: &str) -> Option<&[Option<String>]> {
        self.categorical
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn has_attribute(&self, name: &str) -> bool {
        self.numeric(name).is_some() || self.categorical(name).is_some()
    }

    pub fn numeric_names(&self) -> impl Iterator<Item = &str> {
        self.numeric.iter().map(|(n, _)| n.as_str())
    }

    pub fn categorical_names(&self) -> impl Iterator<Item = &str> {
        self.categorical.iter().map(|(n, _)| n.as_str())
    }

    /// Numeric attribute or a typed error telling the caller what went wrong.
    pub fn require_numeric(&self, name: &str) -> Result<&[Option<f64>]> {
        match self.numeric(name) {
            Some(v) => Ok(v),
            None if self.categorical(name).is_some() => Err(Error::AttributeType {
                attr: name.into(),
                expected: "numeric",
            }),
            None => Err(Error::UnknownAttribute(name.into())),
        }
    }

    pub fn require_categorical(&self, name: &str) -> Result<&[Option<String>]> {
        match self.categorical(name) {
            Some(v) => Ok(v),
            None if self.numeric(name).is_some() => Err(Error::AttributeType {
                attr: name.into(),
                expected: "categorical",
            }),
            None => Err(Error::UnknownAttribute(name.into())),
        }
    }

    /// Distinct observed levels of a categorical attribute.
    pub fn levels(&self, name: &str) -> Result<BTreeSet<&str>> {
        let vals = self.require_categorical(name)?;
        Ok(vals
            .iter()
            .filter_map(|v| v.as_deref())
            .collect::<BTreeSet<_>>())
    }

    /// Panel restricted to the nodes of one sample (roster order preserved).
    pub fn restrict_to_sample(&self, sample: &SampleId) -> Result<NodePanel> {
        let keep = self.roster.sample_members(sample);
        if keep.is_empty() {
            return Err(Error::UnknownSample(sample.as_str().into()));
        }
        Ok(self.restrict(&keep))
    }

    pub fn restrict(&self, keep: &[usize]) -> NodePanel {
        let roster = self.roster.restrict(keep);
        let numeric = self
            .numeric
            .iter()
            .map(|(n, v)| (n.clone(), keep.iter().map(|&i| v[i]).collect()))
            .collect();
        let categorical = self
            .categorical
            .iter()
            .map(|(n, v)| (n.clone(), keep.iter().map(|&i| v[i].clone()).collect()))
            .collect();
        NodePanel {
            roster,
            numeric,
            categorical,
        }
    }
}

/// Directed nomination ties from a roster-aligned survey.
///
/// A row (ego) is interpretable only when the ego responded to the survey:
/// for a respondent, an absent tie is a true zero; for a non-respondent the
/// whole out-row is missing. Adding a nomination marks the ego as a
/// respondent, since naming someone is itself a response.
#[derive(Clone, Debug, PartialEq)]
pub struct NominationNetwork {
    label: String,
    n: usize,
    ties: Vec<bool>,
    respondent: Vec<bool>,
}

impl NominationNetwork {
    pub fn new(n: usize, label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            n,
            ties: vec![false; n * n],
            respondent: vec![false; n],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mark_respondent(&mut self, i: usize) {
        self.respondent[i] = true;
    }

    pub fn is_respondent(&self, i: usize) -> bool {
        self.respondent[i]
    }

    pub fn respondent_count(&self) -> usize {
        self.respondent.iter().filter(|&&r| r).count()
    }

    pub fn add_nomination(&mut self, ego: usize, alter: usize) -> Result<()> {
        if ego == alter {
            return Err(Error::InvalidEvent("self-nomination".into()));
        }
        self.ties[ego * self.n + alter] = true;
        self.respondent[ego] = true;
        Ok(())
    }

    /// Directed tie ego -> alter. `None` when the ego did not respond
    /// (or on the diagonal, where the question is undefined).
    pub fn nominated(&self, ego: usize, alter: usize) -> Option<bool> {
        if ego == alter || !self.respondent[ego] {
            None
        } else {
            Some(self.ties[ego * self.n + alter])
        }
    }

    pub fn tie_count(&self) -> usize {
        self.ties.iter().filter(|&&t| t).count()
    }

    /// All (ego, alter) pairs with a tie, row-major order.
    pub fn ties(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.ties
            .iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(move |(k, _)| (k / n, k % n))
    }

    pub fn restrict(&self, keep: &[usize]) -> NominationNetwork {
        let mut out = NominationNetwork::new(keep.len(), self.label.clone());
        for (a, &i) in keep.iter().enumerate() {
            if self.respondent[i] {
                out.respondent[a] = true;
            }
            for (b, &j) in keep.iter().enumerate() {
                if a != b && self.ties[i * self.n + j] {
                    out.ties[a * keep.len() + b] = true;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roster3() -> Roster {
        let mut r = Roster::new();
        for n in ["a", "b", "c"] {
            r.insert(n.into(), "one".into()).unwrap();
        }
        r
    }

    #[test]
    fn panel_rejects_misaligned_columns() {
        let mut p = NodePanel::new(roster3());
        assert!(p.add_numeric("x", vec![Some(1.0)]).is_err());
        p.add_numeric("x", vec![Some(1.0), None, Some(3.0)]).unwrap();
        assert_eq!(p.numeric("x").unwrap()[1], None);
    }

    #[test]
    fn attribute_type_errors_are_specific() {
        let mut p = NodePanel::new(roster3());
        p.add_categorical("g", vec![Some("f".into()), Some("m".into()), None])
            .unwrap();
        assert_eq!(
            p.require_numeric("g"),
            Err(Error::AttributeType {
                attr: "g".into(),
                expected: "numeric"
            })
        );
        assert_eq!(p.require_numeric("zz"), Err(Error::UnknownAttribute("zz".into())));
        assert_eq!(p.levels("g").unwrap().len(), 2);
    }

    #[test]
    fn nonrespondent_rows_are_missing_not_zero() {
        let mut net = NominationNetwork::new(3, "friendship");
        net.mark_respondent(0);
        net.add_nomination(0, 1).unwrap();
        assert_eq!(net.nominated(0, 2), Some(false));
        assert_eq!(net.nominated(1, 0), None);
        assert_eq!(net.nominated(0, 1), Some(true));
        assert_eq!(net.tie_count(), 1);
    }

    #[test]
    fn nominating_marks_ego_as_respondent() {
        let mut net = NominationNetwork::new(3, "friendship");
        net.add_nomination(2, 0).unwrap();
        assert!(net.is_respondent(2));
        assert!(!net.is_respondent(0));
    }
}

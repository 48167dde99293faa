//! Dyadic covariate builders: node attributes and nomination ties projected
//! onto symmetric matrices.
//!
//! Missingness rule, used consistently below: a cell is present exactly when
//! the observed inputs already determine its value, and masked otherwise.
//! For numeric builders this means both attribute values must be present;
//! for dummy and tie builders a single observed side can be enough (one
//! "female" settles any(gender=female) regardless of the partner).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)] // Float's methods are inherent on f64 with std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::DyadicMatrix;
use crate::panel::{NodePanel, NominationNetwork};
use crate::roster::{Roster, SampleId};

fn numeric_pairwise(
    panel: &NodePanel,
    attr: &str,
    label: String,
    mut f: impl FnMut(f64, f64) -> f64,
) -> Result<DyadicMatrix> {
    let vals = panel.require_numeric(attr)?;
    if vals.iter().all(|v| v.is_none()) {
        return Err(Error::AllMissing(attr.into()));
    }
    let mut m = DyadicMatrix::masked(panel.n(), label);
    for i in 0..panel.n() {
        for j in i + 1..panel.n() {
            if let (Some(vi), Some(vj)) = (vals[i], vals[j]) {
                m.set(i, j, f(vi, vj));
            }
        }
    }
    Ok(m)
}

/// Dyad score = mean of the two node values.
pub fn mean_matrix(panel: &NodePanel, attr: &str) -> Result<DyadicMatrix> {
    numeric_pairwise(panel, attr, format!("mean({attr})"), |a, b| (a + b) / 2.0)
}

/// Mean of the two values after centering each node on its own sample's
/// attribute mean (computed over non-missing values of that sample).
pub fn centered_mean_matrix(panel: &NodePanel, attr: &str) -> Result<DyadicMatrix> {
    let vals = panel.require_numeric(attr)?;
    if vals.iter().all(|v| v.is_none()) {
        return Err(Error::AllMissing(attr.into()));
    }
    let roster = panel.roster();
    let mut centers = Vec::with_capacity(panel.n());
    let groups = roster.groups();
    let mut group_mean = Vec::with_capacity(groups.len());
    for members in &groups {
        let xs: Vec<f64> = members.iter().filter_map(|&i| vals[i]).collect();
        group_mean.push(if xs.is_empty() {
            None
        } else {
            Some(crate::stats::mean(&xs))
        });
    }
    for i in 0..panel.n() {
        let g = groups.iter().position(|m| m.contains(&i)).unwrap();
        centers.push(group_mean[g]);
    }

    let mut m = DyadicMatrix::masked(panel.n(), format!("centered_mean({attr})"));
    for i in 0..panel.n() {
        for j in i + 1..panel.n() {
            if let (Some(vi), Some(vj), Some(ci), Some(cj)) =
                (vals[i], vals[j], centers[i], centers[j])
            {
                m.set(i, j, ((vi - ci) + (vj - cj)) / 2.0);
            }
        }
    }
    Ok(m)
}

/// Dyad score = negative absolute difference; 0 is maximal similarity.
pub fn similarity_matrix(panel: &NodePanel, attr: &str) -> Result<DyadicMatrix> {
    numeric_pairwise(panel, attr, format!("similarity({attr})"), |a, b| {
        -(a - b).abs()
    })
}

fn check_level(panel: &NodePanel, attr: &str, level: &str) -> Result<()> {
    if !panel.levels(attr)?.contains(level) {
        return Err(Error::UnknownLevel {
            attr: attr.into(),
            level: level.into(),
        });
    }
    Ok(())
}

/// 1 when at least one of the two nodes has the level, 0 when neither does.
pub fn dummy_any(panel: &NodePanel, attr: &str, level: &str) -> Result<DyadicMatrix> {
    check_level(panel, attr, level)?;
    let vals = panel.require_categorical(attr)?;
    let mut m = DyadicMatrix::masked(panel.n(), format!("any({attr}={level})"));
    for i in 0..panel.n() {
        for j in i + 1..panel.n() {
            let a = vals[i].as_deref().map(|v| v == level);
            let b = vals[j].as_deref().map(|v| v == level);
            let cell = match (a, b) {
                (Some(true), _) | (_, Some(true)) => Some(1.0),
                (Some(false), Some(false)) => Some(0.0),
                _ => None,
            };
            if let Some(v) = cell {
                m.set(i, j, v);
            }
        }
    }
    Ok(m)
}

/// 1 when both nodes have the level, 0 when at least one does not.
pub fn dummy_both(panel: &NodePanel, attr: &str, level: &str) -> Result<DyadicMatrix> {
    check_level(panel, attr, level)?;
    let vals = panel.require_categorical(attr)?;
    let mut m = DyadicMatrix::masked(panel.n(), format!("both({attr}={level})"));
    for i in 0..panel.n() {
        for j in i + 1..panel.n() {
            let a = vals[i].as_deref().map(|v| v == level);
            let b = vals[j].as_deref().map(|v| v == level);
            let cell = match (a, b) {
                (Some(false), _) | (_, Some(false)) => Some(0.0),
                (Some(true), Some(true)) => Some(1.0),
                _ => None,
            };
            if let Some(v) = cell {
                m.set(i, j, v);
            }
        }
    }
    Ok(m)
}

/// 1 when exactly one of the two nodes has the level.
pub fn dummy_one(panel: &NodePanel, attr: &str, level: &str) -> Result<DyadicMatrix> {
    check_level(panel, attr, level)?;
    let vals = panel.require_categorical(attr)?;
    let mut m = DyadicMatrix::masked(panel.n(), format!("one({attr}={level})"));
    for i in 0..panel.n() {
        for j in i + 1..panel.n() {
            if let (Some(a), Some(b)) = (vals[i].as_deref(), vals[j].as_deref()) {
                m.set(i, j, if (a == level) != (b == level) { 1.0 } else { 0.0 });
            }
        }
    }
    Ok(m)
}

/// 1 when the two nodes share the same level of the attribute.
pub fn dummy_same(panel: &NodePanel, attr: &str) -> Result<DyadicMatrix> {
    let vals = panel.require_categorical(attr)?;
    let mut m = DyadicMatrix::masked(panel.n(), format!("same({attr})"));
    for i in 0..panel.n() {
        for j in i + 1..panel.n() {
            if let (Some(a), Some(b)) = (vals[i].as_deref(), vals[j].as_deref()) {
                m.set(i, j, if a == b { 1.0 } else { 0.0 });
            }
        }
    }
    Ok(m)
}

/// 1 when both nodes belong to `sample`, 0 otherwise. Complete by design.
pub fn sample_dummy(roster: &Roster, sample: &SampleId) -> Result<DyadicMatrix> {
    if roster.sample_members(sample).is_empty() {
        return Err(Error::UnknownSample(sample.as_str().into()));
    }
    let mut m = DyadicMatrix::zeros(roster.len(), format!("sample({sample})"));
    for (i, j) in (0..roster.len())
        .flat_map(|i| (i + 1..roster.len()).map(move |j| (i, j)))
    {
        if roster.sample(i) == sample && roster.sample(j) == sample {
            m.set(i, j, 1.0);
        }
    }
    Ok(m)
}

/// Symmetrizes directed ties with OR: tied when either side nominates.
/// A cell is present when the observed directions determine the outcome:
/// one observed "yes" is enough for 1, but 0 needs both sides observed.
pub fn symmetrize_or(net: &NominationNetwork) -> DyadicMatrix {
    let mut m = DyadicMatrix::masked(net.n(), format!("or({})", net.label()));
    for i in 0..net.n() {
        for j in i + 1..net.n() {
            let ij = net.nominated(i, j);
            let ji = net.nominated(j, i);
            let cell = match (ij, ji) {
                (Some(true), _) | (_, Some(true)) => Some(1.0),
                (Some(false), Some(false)) => Some(0.0),
                _ => None,
            };
            if let Some(v) = cell {
                m.set(i, j, v);
            }
        }
    }
    m
}

/// 1 when both directions nominate. One observed "no" settles the 0.
pub fn mutual_matrix(net: &NominationNetwork) -> DyadicMatrix {
    let mut m = DyadicMatrix::masked(net.n(), format!("mutual({})", net.label()));
    for i in 0..net.n() {
        for j in i + 1..net.n() {
            let ij = net.nominated(i, j);
            let ji = net.nominated(j, i);
            let cell = match (ij, ji) {
                (Some(false), _) | (_, Some(false)) => Some(0.0),
                (Some(true), Some(true)) => Some(1.0),
                _ => None,
            };
            if let Some(v) = cell {
                m.set(i, j, v);
            }
        }
    }
    m
}

/// 1 when exactly one direction nominates; needs both directions observed.
pub fn asymmetric_matrix(net: &NominationNetwork) -> DyadicMatrix {
    let mut m = DyadicMatrix::masked(net.n(), format!("asymmetric({})", net.label()));
    for i in 0..net.n() {
        for j in i + 1..net.n() {
            if let (Some(ij), Some(ji)) = (net.nominated(i, j), net.nominated(j, i)) {
                m.set(i, j, if ij != ji { 1.0 } else { 0.0 });
            }
        }
    }
    m
}

/// Cell-wise product; masked where either factor is masked.
pub fn product_matrix(a: &DyadicMatrix, b: &DyadicMatrix) -> Result<DyadicMatrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let mut m = DyadicMatrix::masked(a.n(), format!("product({},{})", a.label(), b.label()));
    for i in 0..a.n() {
        for j in i + 1..a.n() {
            if let (Some(x), Some(y)) = (a.get(i, j), b.get(i, j)) {
                m.set(i, j, x * y);
            }
        }
    }
    Ok(m)
}

/// ln(x + offset) on every present cell; the whole transform fails if any
/// present cell has x + offset <= 0.
pub fn log_transform(m: &DyadicMatrix, offset: f64) -> Result<DyadicMatrix> {
    let mut out = m.clone();
    for i in 0..m.n() {
        for j in 0..m.n() {
            if i == j || m.is_masked(i, j) {
                continue;
            }
            let v = m.value(i, j) + offset;
            if v <= 0.0 {
                return Err(Error::LogDomain {
                    value: m.value(i, j),
                    offset,
                });
            }
        }
    }
    out.map_values(|v| (v + offset).ln());
    out.set_label(format!("log({}+{})", m.label(), offset));
    Ok(out)
}

/// Items a 20-item self-report scale expects, each scored 0..=3.
pub const SCALE_ITEMS: usize = 20;

/// Sums a 20-item scale without imputation: any missing item makes the
/// total missing. Item values outside {0, 1, 2, 3} are rejected.
pub fn scale_score(items: &[Option<f64>]) -> Result<Option<f64>> {
    if items.len() != SCALE_ITEMS {
        return Err(Error::ScaleItemCount {
            expected: SCALE_ITEMS,
            found: items.len(),
        });
    }
    let mut sum = 0.0;
    for (k, item) in items.iter().enumerate() {
        match item {
            None => return Ok(None),
            Some(v) => {
                if !(0.0..=3.0).contains(v) || v.fract() != 0.0 {
                    return Err(Error::ScaleItemRange { index: k, value: *v });
                }
                sum += v;
            }
        }
    }
    Ok(Some(sum))
}

/// Internal-consistency coefficient k/(k-1) * (1 - sum(item var) / var(sum))
/// over complete respondent rows (respondents x items).
pub fn cronbach_alpha(rows: &[Vec<f64>]) -> Result<f64> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::InsufficientData("need at least 2 respondents".into()));
    }
    let k = rows[0].len();
    if k < 2 {
        return Err(Error::InsufficientData("need at least 2 items".into()));
    }
    if rows.iter().any(|r| r.len() != k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: rows.iter().map(|r| r.len()).find(|&l| l != k).unwrap(),
        });
    }
    let mut item_var_sum = 0.0;
    for item in 0..k {
        let col: Vec<f64> = rows.iter().map(|r| r[item]).collect();
        let v = crate::stats::sample_variance(&col);
        if v <= 0.0 {
            return Err(Error::ZeroVariance(format!("item {item}")));
        }
        item_var_sum += v;
    }
    let sums: Vec<f64> = rows.iter().map(|r| r.iter().sum()).collect();
    let total_var = crate::stats::sample_variance(&sums);
    if total_var <= 0.0 {
        return Err(Error::ZeroVariance("scale total".into()));
    }
    let kf = k as f64;
    Ok(kf / (kf - 1.0) * (1.0 - item_var_sum / total_var))
}

/// Dyads surviving listwise deletion, with the candidate count for context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadSelection {
    /// Included dyads (i < j), row order of the eventual design matrix.
    pub dyads: Vec<(usize, usize)>,
    /// Within-sample dyads that were candidates before deletion.
    pub candidates: usize,
}

impl DyadSelection {
    pub fn included(&self) -> usize {
        self.dyads.len()
    }

    pub fn excluded(&self) -> usize {
        self.candidates - self.dyads.len()
    }
}

/// Keeps the within-sample dyads that are present in every matrix.
/// Cross-sample pairs are never candidates.
pub fn listwise_delete(
    matrices: &[&DyadicMatrix],
    roster: &Roster,
) -> Result<DyadSelection> {
    for m in matrices {
        if m.n() != roster.len() {
            return Err(Error::DimensionMismatch {
                expected: roster.len(),
                found: m.n(),
            });
        }
    }
    let mut dyads = Vec::new();
    let mut candidates = 0;
    for i in 0..roster.len() {
        for j in i + 1..roster.len() {
            if !roster.same_sample(i, j) {
                continue;
            }
            candidates += 1;
            if matrices.iter().all(|m| !m.is_masked(i, j)) {
                dyads.push((i, j));
            }
        }
    }
    Ok(DyadSelection { dyads, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roster::Roster;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two_sample_panel() -> NodePanel {
        let mut r = Roster::new();
        for (n, s) in [
            ("a", "one"),
            ("b", "one"),
            ("c", "one"),
            ("x", "two"),
            ("y", "two"),
        ] {
            r.insert(n.into(), s.into()).unwrap();
        }
        let mut p = NodePanel::new(r);
        p.add_numeric(
            "dep",
            alloc::vec![Some(4.0), Some(6.0), None, Some(10.0), Some(20.0)],
        )
        .unwrap();
        p.add_categorical(
            "gender",
            alloc::vec![
                Some("female".into()),
                Some("male".into()),
                None,
                Some("female".into()),
                Some("female".into()),
            ],
        )
        .unwrap();
        p
    }

    #[test]
    fn mean_and_similarity_cells() {
        let p = two_sample_panel();
        let mean = mean_matrix(&p, "dep").unwrap();
        assert_eq!(mean.get(0, 1), Some(5.0));
        assert_eq!(mean.get(0, 2), None); // partner missing
        assert_eq!(mean.get(3, 4), Some(15.0));
        assert_eq!(mean.label(), "mean(dep)");

        let sim = similarity_matrix(&p, "dep").unwrap();
        assert_eq!(sim.get(0, 1), Some(-2.0));
        assert_eq!(sim.get(3, 4), Some(-10.0));
        // Equal values are maximally similar.
        let mut r = Roster::new();
        r.insert("u".into(), "one".into()).unwrap();
        r.insert("v".into(), "one".into()).unwrap();
        let mut q = NodePanel::new(r);
        q.add_numeric("dep", alloc::vec![Some(7.0), Some(7.0)]).unwrap();
        assert_eq!(similarity_matrix(&q, "dep").unwrap().get(0, 1), Some(0.0));
    }

    #[test]
    fn numeric_builders_reject_all_missing_and_wrong_type() {
        let mut r = Roster::new();
        r.insert("a".into(), "one".into()).unwrap();
        r.insert("b".into(), "one".into()).unwrap();
        let mut p = NodePanel::new(r);
        p.add_numeric("empty", alloc::vec![None, None]).unwrap();
        assert_eq!(
            mean_matrix(&p, "empty"),
            Err(Error::AllMissing("empty".into()))
        );
        assert!(matches!(
            mean_matrix(&p, "nope"),
            Err(Error::UnknownAttribute(_))
        ));
    }

    #[test]
    fn centered_mean_centers_within_each_sample() {
        let p = two_sample_panel();
        // Sample one mean over {4, 6} = 5; sample two mean over {10, 20} = 15.
        let m = centered_mean_matrix(&p, "dep").unwrap();
        assert_eq!(m.get(0, 1), Some(0.0)); // (-1 + 1) / 2
        assert_eq!(m.get(3, 4), Some(0.0)); // (-5 + 5) / 2
        // Cross-sample cell uses each node's own center: (4-5 + 20-15)/2 = 2.
        assert_eq!(m.get(0, 4), Some(2.0));
        // A constant attribute centers to an all-zero matrix.
        let mut r = Roster::new();
        r.insert("u".into(), "one".into()).unwrap();
        r.insert("v".into(), "one".into()).unwrap();
        let mut q = NodePanel::new(r);
        q.add_numeric("c", alloc::vec![Some(3.0), Some(3.0)]).unwrap();
        assert_eq!(centered_mean_matrix(&q, "c").unwrap().get(0, 1), Some(0.0));
    }

    #[test]
    fn dummy_cells_follow_determinability() {
        let p = two_sample_panel();
        let any = dummy_any(&p, "gender", "female").unwrap();
        assert_eq!(any.get(0, 1), Some(1.0));
        assert_eq!(any.get(0, 2), Some(1.0)); // one female settles it
        assert_eq!(any.get(1, 2), None); // male + missing undetermined
        let both = dummy_both(&p, "gender", "female").unwrap();
        assert_eq!(both.get(0, 1), Some(0.0));
        assert_eq!(both.get(1, 2), Some(0.0)); // one male settles the 0
        assert_eq!(both.get(0, 2), None);
        assert_eq!(both.get(3, 4), Some(1.0));
        let one = dummy_one(&p, "gender", "female").unwrap();
        assert_eq!(one.get(0, 1), Some(1.0));
        assert_eq!(one.get(3, 4), Some(0.0));
        assert_eq!(one.get(0, 2), None);
        let same = dummy_same(&p, "gender").unwrap();
        assert_eq!(same.get(0, 1), Some(0.0));
        assert_eq!(same.get(3, 4), Some(1.0));
        assert_eq!(same.get(0, 2), None);
    }

    #[test]
    fn dummy_level_must_exist() {
        let p = two_sample_panel();
        assert_eq!(
            dummy_any(&p, "gender", "other"),
            Err(Error::UnknownLevel {
                attr: "gender".into(),
                level: "other".into()
            })
        );
    }

    #[test]
    fn sample_dummy_marks_one_block() {
        let p = two_sample_panel();
        let m = sample_dummy(p.roster(), &"two".into()).unwrap();
        assert_eq!(m.get(3, 4), Some(1.0));
        assert_eq!(m.get(0, 1), Some(0.0));
        assert_eq!(m.get(0, 3), Some(0.0));
        assert!(sample_dummy(p.roster(), &"three".into()).is_err());
    }

    #[test]
    fn tie_builders_follow_the_missing_direction_table() {
        // Nodes: 0 and 1 respond, 2 does not.
        let mut net = NominationNetwork::new(3, "friendship");
        net.mark_respondent(0);
        net.mark_respondent(1);
        net.add_nomination(0, 1).unwrap();
        net.add_nomination(0, 2).unwrap();
        // 1 nominates nobody; 2's row is missing.

        let or = symmetrize_or(&net);
        assert_eq!(or.get(0, 1), Some(1.0)); // observed yes
        assert_eq!(or.get(0, 2), Some(1.0)); // one yes settles it
        assert_eq!(or.get(1, 2), None); // observed no + missing

        let mutual = mutual_matrix(&net);
        assert_eq!(mutual.get(0, 1), Some(0.0)); // 1 did not reciprocate
        assert_eq!(mutual.get(0, 2), None); // yes + missing undetermined
        assert_eq!(mutual.get(1, 2), Some(0.0)); // observed no settles it

        let asym = asymmetric_matrix(&net);
        assert_eq!(asym.get(0, 1), Some(1.0));
        assert_eq!(asym.get(0, 2), None);
        assert_eq!(asym.get(1, 2), None);

        // Reciprocated tie: mutual 1, asymmetric 0.
        net.add_nomination(1, 0).unwrap();
        assert_eq!(mutual_matrix(&net).get(0, 1), Some(1.0));
        assert_eq!(asymmetric_matrix(&net).get(0, 1), Some(0.0));
    }

    #[test]
    fn or_tie_counts_match_directed_counts() {
        // 107 directed ties built as 39 mutual pairs + 29 one-way ties
        // collapse to 68 undirected ties under OR.
        let n = 50;
        let mut net = NominationNetwork::new(n, "friendship");
        for i in 0..n {
            net.mark_respondent(i);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        // deterministic shuffle
        for k in (1..pairs.len()).rev() {
            let swap = rng.random_range(0..=k);
            pairs.swap(k, swap);
        }
        for &(i, j) in pairs.iter().take(39) {
            net.add_nomination(i, j).unwrap();
            net.add_nomination(j, i).unwrap();
        }
        for &(i, j) in pairs.iter().skip(39).take(29) {
            net.add_nomination(i, j).unwrap();
        }
        assert_eq!(net.tie_count(), 39 * 2 + 29);
        let or = symmetrize_or(&net);
        let ties: f64 = or.unmasked_dyads().map(|(i, j)| or.value(i, j)).sum();
        assert_eq!(ties, 68.0);
        let mutual = mutual_matrix(&net);
        let m: f64 = mutual.unmasked_dyads().map(|(i, j)| mutual.value(i, j)).sum();
        assert_eq!(m, 39.0);
        let asym = asymmetric_matrix(&net);
        let a: f64 = asym.unmasked_dyads().map(|(i, j)| asym.value(i, j)).sum();
        assert_eq!(a, 29.0);
    }

    #[test]
    fn product_masks_union_and_multiplies() {
        let p = two_sample_panel();
        let mean = mean_matrix(&p, "dep").unwrap();
        let sim = similarity_matrix(&p, "dep").unwrap();
        let prod = product_matrix(&mean, &sim).unwrap();
        assert_eq!(prod.get(0, 1), Some(-10.0)); // 5 * -2
        assert_eq!(prod.get(0, 2), None);
        assert_eq!(prod.label(), "product(mean(dep),similarity(dep))");
    }

    #[test]
    fn log_transform_shifts_and_guards_domain() {
        let mut m = DyadicMatrix::zeros(2, "durations");
        m.set(0, 1, 0.0);
        let t = log_transform(&m, 1.0).unwrap();
        assert_eq!(t.get(0, 1), Some(0.0)); // ln(0 + 1)
        let mut neg = DyadicMatrix::zeros(2, "x");
        neg.set(0, 1, -1.0);
        assert_eq!(
            log_transform(&neg, 1.0),
            Err(Error::LogDomain {
                value: -1.0,
                offset: 1.0
            })
        );
        // Masked cells do not participate in the domain check.
        let mut holes = DyadicMatrix::zeros(3, "x");
        holes.set(0, 1, 5.0);
        holes.set(0, 2, -9.0);
        holes.mask(0, 2);
        assert!(log_transform(&holes, 1.0).is_ok());
    }

    #[test]
    fn scale_score_sums_or_propagates_missing() {
        let mut items = alloc::vec![Some(1.0); SCALE_ITEMS];
        items[3] = Some(3.0);
        assert_eq!(scale_score(&items).unwrap(), Some(22.0));
        items[10] = None;
        assert_eq!(scale_score(&items).unwrap(), None);
        items[10] = Some(4.0);
        assert!(matches!(
            scale_score(&items),
            Err(Error::ScaleItemRange { index: 10, .. })
        ));
        assert!(matches!(
            scale_score(&items[..5]),
            Err(Error::ScaleItemCount { .. })
        ));
    }

    #[test]
    fn alpha_of_perfectly_correlated_items_is_one() {
        let rows = alloc::vec![
            alloc::vec![1.0, 2.0],
            alloc::vec![2.0, 3.0],
            alloc::vec![3.0, 4.0],
        ];
        assert!((cronbach_alpha(&rows).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_hand_computed_case() {
        // Item variances 5/3 each, total variance 16/3:
        // alpha = 2 * (1 - (10/3)/(16/3)) = 0.75.
        let rows = alloc::vec![
            alloc::vec![1.0, 2.0],
            alloc::vec![2.0, 1.0],
            alloc::vec![3.0, 4.0],
            alloc::vec![4.0, 3.0],
        ];
        assert!((cronbach_alpha(&rows).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn alpha_of_independent_items_is_near_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rows: Vec<Vec<f64>> = (0..10_000)
            .map(|_| (0..4).map(|_| rng.random_range(0..100) as f64).collect())
            .collect();
        let a = cronbach_alpha(&rows).unwrap();
        assert!(a.abs() < 0.05, "alpha = {a}");
    }

    #[test]
    fn alpha_rejects_degenerate_input() {
        assert!(cronbach_alpha(&[alloc::vec![1.0, 2.0]]).is_err());
        let constant = alloc::vec![alloc::vec![1.0, 5.0], alloc::vec![1.0, 6.0]];
        assert_eq!(
            cronbach_alpha(&constant),
            Err(Error::ZeroVariance("item 0".into()))
        );
    }

    #[test]
    fn listwise_keeps_complete_within_sample_dyads() {
        let p = two_sample_panel();
        let mean = mean_matrix(&p, "dep").unwrap();
        let sel = listwise_delete(&[&mean], p.roster()).unwrap();
        // Candidates: C(3,2) + C(2,2) = 4; node "c" has missing dep.
        assert_eq!(sel.candidates, 4);
        assert_eq!(sel.dyads, alloc::vec![(0, 1), (3, 4)]);
        assert_eq!(sel.included(), 2);
        assert_eq!(sel.excluded(), 2);
    }

    #[test]
    fn listwise_with_no_matrices_keeps_all_candidates() {
        let p = two_sample_panel();
        let sel = listwise_delete(&[], p.roster()).unwrap();
        assert_eq!(sel.included(), 4);
    }
}

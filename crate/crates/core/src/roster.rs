//! Node and sample identity.
//!
//! A [`Roster`] assigns a dense index to every node and records which sample
//! the node belongs to. Node ids must be unique across the whole roster, not
//! just within a sample; everything downstream (matrices, permutations)
//! addresses nodes by roster index.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

id_type!(NodeId);
id_type!(SampleId);

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Roster {
    ids: Vec<NodeId>,
    samples: Vec<SampleId>,
    lookup: BTreeMap<NodeId, usize>,
}

impl Roster {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a node, or returns the existing index when the id is already
    /// present with the same sample. The same id under a different sample is
    /// an error: ids are globally unique.
    pub fn insert(&mut self, node: NodeId, sample: SampleId) -> Result<usize> {
        if let Some(&idx) = self.lookup.get(&node) {
            if self.samples[idx] != sample {
                return Err(Error::DuplicateNode(node.0));
            }
            return Ok(idx);
        }
        let idx = self.ids.len();
        self.lookup.insert(node.clone(), idx);
        self.ids.push(node);
        self.samples.push(sample);
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, node: &NodeId) -> Option<usize> {
        self.lookup.get(node).copied()
    }

    pub fn node(&self, idx: usize) -> &NodeId {
        &self.ids[idx]
    }

    pub fn sample(&self, idx: usize) -> &SampleId {
        &self.samples[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &NodeId, &SampleId)> {
        self.ids
            .iter()
            .zip(self.samples.iter())
            .enumerate()
            .map(|(i, (n, s))| (i, n, s))
    }

    /// Distinct sample ids in order of first appearance.
    pub fn sample_ids(&self) -> Vec<&SampleId> {
        let mut seen = Vec::new();
        for s in &self.samples {
            if !seen.contains(&s) {
                seen.push(s);
            }
        }
        seen
    }

    /// Node indices grouped by sample, groups ordered by first appearance.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let order = self.sample_ids();
        let mut groups: Vec<Vec<usize>> = order.iter().map(|_| Vec::new()).collect();
        for (i, s) in self.samples.iter().enumerate() {
            let g = order.iter().position(|o| *o == s).unwrap();
            groups[g].push(i);
        }
        groups
    }

    /// True when both nodes belong to the same sample.
    pub fn same_sample(&self, i: usize, j: usize) -> bool {
        self.samples[i] == self.samples[j]
    }

    pub fn sample_members(&self, sample: &SampleId) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.samples[i] == *sample)
            .collect()
    }

    /// New roster containing only `keep`, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Roster {
        let mut out = Roster::new();
        for &i in keep {
            out.insert(self.ids[i].clone(), self.samples[i].clone())
                .expect("restriction of a valid roster stays valid");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_is_idempotent_within_sample() {
        let mut r = Roster::new();
        let a = r.insert("a".into(), "one".into()).unwrap();
        let b = r.insert("b".into(), "one".into()).unwrap();
        assert_eq!(r.insert("a".into(), "one".into()).unwrap(), a);
        assert_eq!((a, b), (0, 1));
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn same_id_in_two_samples_is_rejected() {
        let mut r = Roster::new();
        r.insert("a".into(), "one".into()).unwrap();
        assert_eq!(
            r.insert("a".into(), "two".into()),
            Err(Error::DuplicateNode("a".into()))
        );
    }

    #[test]
    fn groups_follow_first_appearance() {
        let mut r = Roster::new();
        for (n, s) in [("a", "one"), ("x", "two"), ("b", "one"), ("y", "two")] {
            r.insert(n.into(), s.into()).unwrap();
        }
        assert_eq!(r.groups(), vec![vec![0, 2], vec![1, 3]]);
        assert!(r.same_sample(0, 2));
        assert!(!r.same_sample(0, 1));
    }
}

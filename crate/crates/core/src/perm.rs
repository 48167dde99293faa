//! Node relabelings and the replicate RNG scheme.
//!
//! A permutation relabels nodes; applying it to a dyadic matrix moves value
//! and mask together: `out(i, j) = in(p(i), p(j))`. The multi-sample variant
//! relabels each sample's block independently, so no node ever crosses a
//! sample boundary.
//!
//! Replicate RNGs are derived as (master seed, replicate index) -> an
//! independent ChaCha stream. Replicate r's draws depend on nothing else,
//! which makes results identical no matter how replicates are scheduled
//! across threads.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::DyadicMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodePermutation(Vec<usize>);

impl NodePermutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Validates that `map` is a bijection on 0..n.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation);
            }
            seen[v] = true;
        }
        Ok(Self(map))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn map(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Applies the relabeling to rows and columns at once.
pub fn relabel(m: &DyadicMatrix, perm: &NodePermutation) -> Result<DyadicMatrix> {
    if perm.len() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            found: perm.len(),
        });
    }
    let mut out = m.clone();
    for i in 0..m.n() {
        for j in 0..m.n() {
            if i == j {
                continue;
            }
            let (pi, pj) = (perm.map(i), perm.map(j));
            let k = i * m.n() + j;
            out.values[k] = m.values[pi * m.n() + pj];
            out.missing[k] = m.missing[pi * m.n() + pj];
        }
    }
    Ok(out)
}

pub(crate) fn shuffle<T>(xs: &mut [T], rng: &mut impl Rng) {
    // Fisher-Yates, high to low.
    for k in (1..xs.len()).rev() {
        let swap = rng.random_range(0..=k);
        xs.swap(k, swap);
    }
}

/// Uniform random relabeling of all n nodes.
pub fn random_permutation(n: usize, rng: &mut impl Rng) -> NodePermutation {
    let mut map: Vec<usize> = (0..n).collect();
    shuffle(&mut map, rng);
    NodePermutation(map)
}

/// Independent uniform relabeling inside each group; with one group this is
/// exactly [`random_permutation`]. `groups` must partition 0..n.
pub fn grouped_permutation(
    groups: &[Vec<usize>],
    n: usize,
    rng: &mut impl Rng,
) -> Result<NodePermutation> {
    let mut map: Vec<usize> = (0..n).collect();
    let mut covered = vec![false; n];
    for members in groups {
        let mut targets = members.clone();
        shuffle(&mut targets, rng);
        for (&src, &dst) in members.iter().zip(&targets) {
            if src >= n || covered[src] {
                return Err(Error::InvalidPermutation);
            }
            covered[src] = true;
            map[src] = dst;
        }
    }
    if !covered.iter().all(|&c| c) {
        return Err(Error::InvalidPermutation);
    }
    NodePermutation::new(map)
}

/// RNG for one replicate: same master seed, per-replicate ChaCha stream.
pub fn replicate_rng(master_seed: u64, replicate: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    // Stream 0 is left for callers that draw outside the replicate loop.
    rng.set_stream(replicate as u64 + 1);
    rng
}

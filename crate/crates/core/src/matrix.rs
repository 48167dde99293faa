//! Square node-by-node matrices with a missingness mask.
//!
//! The diagonal is always masked: a dyad is a pair of distinct nodes.
//! Symmetric matrices keep `value(i, j) == value(j, i)` by construction;
//! `set` writes both cells.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq)]
pub struct DyadicMatrix {
    pub(crate) n: usize,
    pub(crate) values: Vec<f64>,
    pub(crate) missing: Vec<bool>,
    pub(crate) symmetric: bool,
    pub(crate) label: String,
}

impl DyadicMatrix {
    /// Symmetric matrix with every off-diagonal cell present and zero.
    pub fn zeros(n: usize, label: impl Into<String>) -> Self {
        let mut missing = vec![false; n * n];
        for i in 0..n {
            missing[i * n + i] = true;
        }
        Self {
            n,
            values: vec![0.0; n * n],
            missing,
            symmetric: true,
            label: label.into(),
        }
    }

    /// Symmetric matrix with every cell masked; builders fill it in.
    pub fn masked(n: usize, label: impl Into<String>) -> Self {
        Self {
            n,
            values: vec![0.0; n * n],
            missing: vec![true; n * n],
            symmetric: true,
            label: label.into(),
        }
    }

    /// Directed variant of [`DyadicMatrix::zeros`]; `set` writes one cell.
    pub fn directed_zeros(n: usize, label: impl Into<String>) -> Self {
        let mut m = Self::zeros(n, label);
        m.symmetric = false;
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        i * self.n + j
    }

    /// Cell value, or `None` when the cell is masked.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let k = self.idx(i, j);
        if self.missing[k] {
            None
        } else {
            Some(self.values[k])
        }
    }

    /// Raw cell value ignoring the mask. Callers must know the cell is live.
    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.idx(i, j)]
    }

    #[inline]
    pub fn is_masked(&self, i: usize, j: usize) -> bool {
        self.missing[self.idx(i, j)]
    }

    /// Writes and unmasks a cell; mirrors to `(j, i)` when symmetric.
    /// Diagonal writes are ignored.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        if i == j {
            return;
        }
        let k = self.idx(i, j);
        self.values[k] = v;
        self.missing[k] = false;
        if self.symmetric {
            let k = self.idx(j, i);
            self.values[k] = v;
            self.missing[k] = false;
        }
    }

    pub fn add(&mut self, i: usize, j: usize, delta: f64) {
        if i == j {
            return;
        }
        let cur = self.value(i, j);
        self.set(i, j, cur + delta);
    }

    /// Masks a cell (and its mirror when symmetric).
    pub fn mask(&mut self, i: usize, j: usize) {
        let k = self.idx(i, j);
        self.missing[k] = true;
        if self.symmetric {
            let k = self.idx(j, i);
            self.missing[k] = true;
        }
    }

    /// Unordered dyads `(i, j)` with `i < j`.
    pub fn dyads(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    /// Unordered dyads whose cell is present.
    pub fn unmasked_dyads(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.dyads().filter(|&(i, j)| !self.is_masked(i, j))
    }

    /// Applies `f` to every unmasked cell value.
    pub fn map_values(&mut self, mut f: impl FnMut(f64) -> f64) {
        for k in 0..self.values.len() {
            if !self.missing[k] {
                self.values[k] = f(self.values[k]);
            }
        }
    }

    /// Multiplies every unmasked cell by `factor`.
    pub fn scale(&mut self, factor: f64) {
        self.map_values(|v| v * factor);
    }

    /// Submatrix over `keep` (new index k maps to old index keep[k]).
    pub fn restrict(&self, keep: &[usize]) -> DyadicMatrix {
        let n = keep.len();
        let mut out = DyadicMatrix {
            n,
            values: vec![0.0; n * n],
            missing: vec![true; n * n],
            symmetric: self.symmetric,
            label: self.label.clone(),
        };
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if a == b {
                    continue;
                }
                let src = self.idx(i, j);
                let dst = out.idx(a, b);
                out.values[dst] = self.values[src];
                out.missing[dst] = self.missing[src];
            }
        }
        out
    }
}

//! Permutation inference for dyadic regression.
//!
//! The observed coefficients come from a single OLS fit over the vectorized
//! dyads. Inference relabels the nodes of the dependent matrix (each
//! sample's block independently), refits against the fixed design, and reads
//! percent-rank p-values off the replicate distribution. Because the design
//! never changes, its QR factorization is computed once and each replicate
//! costs one matrix-free solve.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[allow(unused_imports)] // Float's methods are inherent on f64 with std
use num_traits::Float;

use crate::builders::{listwise_delete, log_transform, DyadSelection};
use crate::error::{Error, Result};
use crate::matrix::DyadicMatrix;
use crate::ols::{DesignMatrix, LeastSquares, OlsFit};
use crate::panel::{NodePanel, NominationNetwork};
use crate::perm::{grouped_permutation, replicate_rng};
use crate::stats;
use crate::terms::TermExpr;

/// Dependent-matrix transform, applied once before any permutation.
/// Transforming first and relabeling after is identical to relabeling first:
/// the transform is cell-wise, so the two operations commute.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Transform {
    None,
    /// ln(x + offset) on every present cell.
    Log { offset: f64 },
}

impl Transform {
    /// Accepts `none`, `log` (offset 1), or `log:<offset>`.
    pub fn parse(s: &str) -> Result<Transform> {
        let s = s.trim();
        if s == "none" {
            return Ok(Transform::None);
        }
        if s == "log" {
            return Ok(Transform::Log { offset: 1.0 });
        }
        if let Some(rest) = s.strip_prefix("log:") {
            let offset: f64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad transform offset '{rest}'")))?;
            if !offset.is_finite() {
                return Err(Error::InvalidSpec(format!("bad transform offset '{rest}'")));
            }
            return Ok(Transform::Log { offset });
        }
        Err(Error::InvalidSpec(format!("unknown transform '{s}'")))
    }

    pub fn apply(&self, m: &DyadicMatrix) -> Result<DyadicMatrix> {
        match self {
            Transform::None => Ok(m.clone()),
            Transform::Log { offset } => log_transform(m, *offset),
        }
    }

    /// Applies the transform to a single present value.
    pub fn value(&self, v: f64) -> Result<f64> {
        match self {
            Transform::None => Ok(v),
            Transform::Log { offset } => {
                let shifted = v + offset;
                if shifted > 0.0 {
                    Ok(shifted.ln())
                } else {
                    Err(Error::LogDomain {
                        value: v,
                        offset: *offset,
                    })
                }
            }
        }
    }
}

impl core::fmt::Display for Transform {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Transform::None => f.write_str("none"),
            Transform::Log { offset } => write!(f, "log:{offset}"),
        }
    }
}

/// A full model specification: dependent matrix label, terms, replicate
/// count, master seed, and dependent transform.
#[derive(Clone, Debug, PartialEq)]
pub struct QapModelSpec {
    pub dependent: String,
    pub terms: Vec<TermExpr>,
    pub permutations: u32,
    pub seed: u64,
    pub transform: Transform,
}

pub const DEFAULT_PERMUTATIONS: u32 = 5000;

impl QapModelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.permutations == 0 {
            return Err(Error::InvalidSpec("permutations must be >= 1".into()));
        }
        if self.terms.is_empty() {
            return Err(Error::InvalidSpec("at least one term is required".into()));
        }
        let mut labels: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        labels.sort();
        for w in labels.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidSpec(format!("duplicate term {}", w[0])));
            }
        }
        Ok(())
    }
}

/// Upper- and lower-tail percent ranks of an observed value within its
/// replicate distribution, with the +1 correction that keeps p in (0, 1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PercentRank {
    pub p_upper: f64,
    pub p_lower: f64,
}

pub fn percent_rank(observed: f64, replicates: &[f64]) -> PercentRank {
    let total = replicates.len() as f64;
    let ge = replicates.iter().filter(|&&r| r >= observed).count() as f64;
    let le = replicates.iter().filter(|&&r| r <= observed).count() as f64;
    PercentRank {
        p_upper: (ge + 1.0) / (total + 1.0),
        p_lower: (le + 1.0) / (total + 1.0),
    }
}

impl PercentRank {
    /// One-tailed p in the direction of the observed sign.
    pub fn p_one(&self, observed: f64) -> f64 {
        if observed >= 0.0 {
            self.p_upper
        } else {
            self.p_lower
        }
    }

    /// Two-sided p: twice the smaller tail, capped at 1.
    pub fn p_two(&self) -> f64 {
        (2.0 * self.p_upper.min(self.p_lower)).min(1.0)
    }
}

/// Per-term inference summary.
#[derive(Clone, Debug, PartialEq)]
pub struct TermFit {
    pub term: String,
    pub estimate: f64,
    pub p_one: f64,
    pub p_two: f64,
    /// Mean of the replicate estimates (the null expectation).
    pub e_est: f64,
    pub pct_2_5: f64,
    pub pct_97_5: f64,
}

/// Fitted model: per-term rows (intercept first) plus fit summaries.
#[derive(Clone, Debug, PartialEq)]
pub struct QapFit {
    pub terms: Vec<TermFit>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub resid_skewness: f64,
    pub n_dyads: usize,
    pub candidate_dyads: usize,
    pub permutations: u32,
    pub seed: u64,
    pub failed_replicates: u32,
}

/// Stacks matrices into design columns over the selected dyads.
/// Every matrix must be symmetric and cover every selected dyad.
pub fn vectorize(
    matrices: &[&DyadicMatrix],
    selection: &DyadSelection,
) -> Result<Vec<Vec<f64>>> {
    let mut cols = Vec::with_capacity(matrices.len());
    for m in matrices {
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric(m.label().into()));
        }
        let mut col = Vec::with_capacity(selection.dyads.len());
        for &(i, j) in &selection.dyads {
            match m.get(i, j) {
                Some(v) => col.push(v),
                None => {
                    return Err(Error::InvalidSpec(format!(
                        "matrix '{}' is masked on a selected dyad",
                        m.label()
                    )))
                }
            }
        }
        cols.push(col);
    }
    Ok(cols)
}

/// A prepared fit: factorized design plus everything a replicate needs.
/// Replicates are pure functions of (problem, replicate index), so they can
/// run in any order, on any thread, with identical results.
pub struct QapProblem {
    ls: LeastSquares,
    observed: OlsFit,
    y_matrix: DyadicMatrix,
    dyads: Vec<(usize, usize)>,
    groups: Vec<Vec<usize>>,
    n_nodes: usize,
    candidates: usize,
    permutations: u32,
    seed: u64,
}

impl QapProblem {
    pub fn prepare(
        spec: &QapModelSpec,
        panel: &NodePanel,
        network: Option<&NominationNetwork>,
        dependent: &DyadicMatrix,
    ) -> Result<Self> {
        spec.validate()?;
        let n = panel.n();
        if dependent.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: dependent.n(),
            });
        }

        let term_matrices: Vec<DyadicMatrix> = spec
            .terms
            .iter()
            .map(|t| t.evaluate(panel, network))
            .collect::<Result<_>>()?;

        let mut all: Vec<&DyadicMatrix> = Vec::with_capacity(term_matrices.len() + 1);
        all.push(dependent);
        all.extend(term_matrices.iter());
        let selection = listwise_delete(&all, panel.roster())?;
        if selection.dyads.is_empty() {
            return Err(Error::EmptySelection);
        }

        // Relabeling swaps dependent cells freely inside each sample block,
        // so the block must be complete — and transformable — wherever it
        // contributes dyads. Cells outside contributing blocks can never be
        // reached by a relabeling of an included dyad, so they stay masked
        // and are exempt from the transform's domain check.
        let groups = panel.roster().groups();
        let mut y_matrix = DyadicMatrix::masked(n, dependent.label());
        for members in &groups {
            let contributes = selection
                .dyads
                .iter()
                .any(|&(i, _)| members.contains(&i));
            if !contributes {
                continue;
            }
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    match dependent.get(i, j) {
                        None => {
                            return Err(Error::IncompleteDependent(
                                dependent.label().into(),
                            ))
                        }
                        Some(v) => y_matrix.set(i, j, spec.transform.value(v)?),
                    }
                }
            }
        }

        let cols = vectorize(&all[1..], &selection)?;
        let y: Vec<f64> = selection
            .dyads
            .iter()
            .map(|&(i, j)| y_matrix.value(i, j))
            .collect();
        let labels: Vec<String> = spec.terms.iter().map(|t| t.to_string()).collect();
        let design = DesignMatrix::with_intercept(labels, cols, selection.dyads.len())?;
        let ls = LeastSquares::factorize(&design)?;
        let observed = ls.fit(&design, &y)?;

        Ok(Self {
            ls,
            observed,
            y_matrix,
            dyads: selection.dyads,
            groups,
            n_nodes: n,
            candidates: selection.candidates,
            permutations: spec.permutations,
            seed: spec.seed,
        })
    }

    pub fn permutations(&self) -> u32 {
        self.permutations
    }

    pub fn observed(&self) -> &OlsFit {
        &self.observed
    }

    pub fn n_dyads(&self) -> usize {
        self.dyads.len()
    }

    pub fn labels(&self) -> &[String] {
        self.ls.labels()
    }

    /// Runs replicate `r`: relabel, rebuild the dependent vector, resolve.
    /// `None` marks a failed replicate (non-finite solution); failures are
    /// tolerated up to the threshold enforced by [`QapProblem::finish`].
    pub fn replicate(&self, r: u32) -> Option<Vec<f64>> {
        let mut rng = replicate_rng(self.seed, r);
        let perm = grouped_permutation(&self.groups, self.n_nodes, &mut rng).ok()?;
        let y_star: Vec<f64> = self
            .dyads
            .iter()
            .map(|&(i, j)| self.y_matrix.value(perm.map(i), perm.map(j)))
            .collect();
        let beta = self.ls.solve(&y_star);
        if beta.iter().all(|b| b.is_finite()) {
            Some(beta)
        } else {
            None
        }
    }

    /// Combines replicate coefficient vectors (indexed by replicate) into
    /// the final fit. Aborts when more than 1% of replicates failed.
    pub fn finish(&self, replicates: &[Option<Vec<f64>>]) -> Result<QapFit> {
        if replicates.len() != self.permutations as usize {
            return Err(Error::DimensionMismatch {
                expected: self.permutations as usize,
                found: replicates.len(),
            });
        }
        let failed = replicates.iter().filter(|r| r.is_none()).count() as u32;
        if failed as u64 * 100 > self.permutations as u64 {
            return Err(Error::FailedReplicates {
                failed,
                total: self.permutations,
            });
        }

        let labels = self.ls.labels();
        let mut terms = Vec::with_capacity(labels.len());
        for (k, label) in labels.iter().enumerate() {
            let series: Vec<f64> = replicates
                .iter()
                .filter_map(|r| r.as_ref().map(|beta| beta[k]))
                .collect();
            let observed = self.observed.coefficients[k];
            let rank = percent_rank(observed, &series);
            let mut sorted = series.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite estimates"));
            terms.push(TermFit {
                term: label.clone(),
                estimate: observed,
                p_one: rank.p_one(observed),
                p_two: rank.p_two(),
                e_est: stats::mean(&series),
                pct_2_5: stats::percentile_sorted(&sorted, 0.025),
                pct_97_5: stats::percentile_sorted(&sorted, 0.975),
            });
        }
        Ok(QapFit {
            terms,
            r_squared: self.observed.r_squared,
            adj_r_squared: self.observed.adj_r_squared,
            resid_skewness: self.observed.resid_skewness,
            n_dyads: self.dyads.len(),
            candidate_dyads: self.candidates,
            permutations: self.permutations,
            seed: self.seed,
            failed_replicates: failed,
        })
    }

    /// Serial fit: every replicate in order, then finish.
    pub fn fit(&self) -> Result<QapFit> {
        let replicates: Vec<Option<Vec<f64>>> =
            (0..self.permutations).map(|r| self.replicate(r)).collect();
        self.finish(&replicates)
    }
}

/// Convenience wrapper: prepare and fit in one call.
pub fn qap_fit(
    spec: &QapModelSpec,
    panel: &NodePanel,
    network: Option<&NominationNetwork>,
    dependent: &DyadicMatrix,
) -> Result<QapFit> {
    QapProblem::prepare(spec, panel, network, dependent)?.fit()
}

/// Node-level permutation test for a correlation between two attribute
/// vectors: shuffle one vector, recompute r, read percent-rank p-values.
#[derive(Clone, Debug, PartialEq)]
pub struct PermCorrelation {
    pub r: f64,
    pub p_one: f64,
    pub p_two: f64,
    pub n: usize,
    pub permutations: u32,
}

pub fn node_permutation_correlation(
    x: &[Option<f64>],
    y: &[Option<f64>],
    permutations: u32,
    seed: u64,
) -> Result<PermCorrelation> {
    if permutations == 0 {
        return Err(Error::InvalidSpec("permutations must be >= 1".into()));
    }
    let (xs, ys) = stats::pairwise_complete(x, y);
    if xs.len() < 3 {
        return Err(Error::InsufficientData(
            "need at least 3 complete pairs".into(),
        ));
    }
    let r_obs = stats::pearson(&xs, &ys)
        .ok_or_else(|| Error::ZeroVariance("correlation input".into()))?;
    let mut series = Vec::with_capacity(permutations as usize);
    let mut shuffled = ys.clone();
    for rep in 0..permutations {
        let mut rng = replicate_rng(seed, rep);
        crate::perm::shuffle(&mut shuffled, &mut rng);
        // Shuffling preserves the value multiset, so variance survives and
        // pearson stays defined.
        series.push(stats::pearson(&xs, &shuffled).expect("variance preserved"));
        shuffled.copy_from_slice(&ys);
    }
    let rank = percent_rank(r_obs, &series);
    Ok(PermCorrelation {
        r: r_obs,
        p_one: rank.p_one(r_obs),
        p_two: rank.p_two(),
        n: xs.len(),
        permutations,
    })
}

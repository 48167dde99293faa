//! Ordinary least squares via Householder QR.
//!
//! The factorization is computed once per design and reused across many
//! right-hand sides; `solve` costs O(n * m) per call, which is what makes
//! large permutation replicate counts cheap (the design never changes, only
//! the dependent vector does).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // Float's methods are inherent on f64 with std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::stats;

/// Column-major design matrix. Column 0 is the intercept by convention of
/// [`DesignMatrix::with_intercept`]; labels name every column.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignMatrix {
    n: usize,
    labels: Vec<String>,
    cols: Vec<Vec<f64>>,
}

impl DesignMatrix {
    /// Design with a leading all-ones intercept column.
    pub fn with_intercept(labels: Vec<String>, cols: Vec<Vec<f64>>, n: usize) -> Result<Self> {
        let mut all_labels = vec![String::from("intercept")];
        all_labels.extend(labels);
        let mut all_cols = vec![vec![1.0; n]];
        all_cols.extend(cols);
        Self::from_columns(all_labels, all_cols)
    }

    pub fn from_columns(labels: Vec<String>, cols: Vec<Vec<f64>>) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::InsufficientData("design has no columns".into()));
        }
        if labels.len() != cols.len() {
            return Err(Error::DimensionMismatch {
                expected: cols.len(),
                found: labels.len(),
            });
        }
        let n = cols[0].len();
        for c in &cols {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
        }
        Ok(Self { n, labels, cols })
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> usize {
        self.cols.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn column(&self, k: usize) -> &[f64] {
        &self.cols[k]
    }

    /// X * beta.
    pub fn predict(&self, beta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (c, b) in self.cols.iter().zip(beta) {
            for (o, x) in out.iter_mut().zip(c) {
                *o += b * x;
            }
        }
        out
    }
}

/// Householder QR of a design matrix, reusable across right-hand sides.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    n: usize,
    m: usize,
    /// Column-major storage: upper triangle holds R (diagonal in `r_diag`),
    /// the part at and below the diagonal holds the Householder vectors.
    qr: Vec<Vec<f64>>,
    r_diag: Vec<f64>,
    vtv: Vec<f64>,
    labels: Vec<String>,
}

impl LeastSquares {
    /// Factorizes the design. Requires more rows than columns and full
    /// column rank; collinear columns are reported by label.
    pub fn factorize(design: &DesignMatrix) -> Result<Self> {
        let n = design.rows();
        let m = design.columns();
        if n <= m {
            return Err(Error::InsufficientData(alloc::format!(
                "{n} rows cannot identify {m} coefficients plus residual variance"
            )));
        }
        let mut qr: Vec<Vec<f64>> = design.cols.clone();
        let mut r_diag = vec![0.0; m];
        let mut vtv = vec![0.0; m];

        let max_norm = qr
            .iter()
            .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0f64, f64::max);
        let tol = 1e-10 * max_norm.max(1.0);

        let mut deficient: Vec<String> = Vec::new();
        for k in 0..m {
            let sigma = qr[k][k..].iter().map(|x| x * x).sum::<f64>().sqrt();
            if sigma <= tol {
                deficient.push(design.labels[k].clone());
                // Neutral reflection keeps later columns diagnosable.
                r_diag[k] = 0.0;
                vtv[k] = 0.0;
                continue;
            }
            let alpha = if qr[k][k] > 0.0 { -sigma } else { sigma };
            qr[k][k] -= alpha; // v = x - alpha * e1, stored in place
            let v_dot = qr[k][k..].iter().map(|x| x * x).sum::<f64>();
            r_diag[k] = alpha;
            vtv[k] = v_dot;
            let (reflected, rest) = qr.split_at_mut(k + 1);
            let v = &reflected[k][k..];
            for col in rest.iter_mut() {
                let w: f64 = v.iter().zip(&col[k..]).map(|(a, b)| a * b).sum();
                let scale = 2.0 * w / v_dot;
                for (x, vi) in col[k..].iter_mut().zip(v) {
                    *x -= scale * vi;
                }
            }
        }
        if !deficient.is_empty() {
            return Err(Error::RankDeficient(deficient));
        }
        Ok(Self {
            n,
            m,
            qr,
            r_diag,
            vtv,
            labels: design.labels.clone(),
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Coefficients minimizing ||y - X beta||, O(n * m).
    pub fn solve(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.n);
        let mut z = y.to_vec();
        for k in 0..self.m {
            if self.vtv[k] == 0.0 {
                continue;
            }
            let v = &self.qr[k][k..];
            let w: f64 = v.iter().zip(&z[k..]).map(|(a, b)| a * b).sum();
            let scale = 2.0 * w / self.vtv[k];
            for (zi, vi) in z[k..].iter_mut().zip(v) {
                *zi -= scale * vi;
            }
        }
        // Back-substitution on R.
        let mut beta = vec![0.0; self.m];
        for k in (0..self.m).rev() {
            let mut acc = z[k];
            for (col, b) in self.qr[k + 1..].iter().zip(&beta[k + 1..]) {
                acc -= col[k] * b;
            }
            beta[k] = acc / self.r_diag[k];
        }
        beta
    }

    /// Full fit with residual summaries for one dependent vector.
    pub fn fit(&self, design: &DesignMatrix, y: &[f64]) -> Result<OlsFit> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: y.len(),
            });
        }
        let coefficients = self.solve(y);
        if coefficients.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite("least-squares solution".into()));
        }
        let fitted = design.predict(&coefficients);
        let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
        let ss_res: f64 = residuals.iter().map(|e| e * e).sum();
        let y_mean = stats::mean(y);
        let ss_tot: f64 = y.iter().map(|v| (v - y_mean) * (v - y_mean)).sum();
        let r_squared = if ss_tot > 0.0 {
            (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let nf = self.n as f64;
        let pf = (self.m - 1) as f64; // predictors excluding the intercept
        let adj_r_squared = 1.0 - (1.0 - r_squared) * (nf - 1.0) / (nf - pf - 1.0);
        let resid_skewness = stats::skewness(&residuals);
        Ok(OlsFit {
            coefficients,
            residuals,
            r_squared,
            adj_r_squared,
            resid_skewness,
            n: self.n,
            predictors: self.m - 1,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OlsFit {
    /// Intercept first, then one coefficient per design column.
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub resid_skewness: f64,
    pub n: usize,
    /// Number of columns excluding the intercept.
    pub predictors: usize,
}

/// One-shot convenience: factorize and fit.
pub fn ols_fit(design: &DesignMatrix, y: &[f64]) -> Result<OlsFit> {
    LeastSquares::factorize(design)?.fit(design, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Reference solver: explicit normal equations X'X b = X'y by Gaussian
    /// elimination with partial pivoting. Slower and less stable than QR,
    /// but completely independent of it.
    #[allow(clippy::needless_range_loop)] // row elimination reads two rows at once
    fn normal_equations(cols: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
        let m = cols.len();
        let mut a = vec![vec![0.0; m + 1]; m];
        for r in 0..m {
            for c in 0..m {
                a[r][c] = cols[r].iter().zip(&cols[c]).map(|(p, q)| p * q).sum();
            }
            a[r][m] = cols[r].iter().zip(y).map(|(p, q)| p * q).sum();
        }
        for piv in 0..m {
            let best = (piv..m).max_by(|&p, &q| {
                a[p][piv].abs().partial_cmp(&a[q][piv].abs()).unwrap()
            });
            a.swap(piv, best.unwrap());
            for r in 0..m {
                if r == piv {
                    continue;
                }
                let f = a[r][piv] / a[piv][piv];
                for c in piv..=m {
                    a[r][c] -= f * a[piv][c];
                }
            }
        }
        (0..m).map(|r| a[r][m] / a[r][r]).collect()
    }

    fn design_and_y(seed: u64, n: usize, m: usize) -> (DesignMatrix, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.random_range(-5.0..5.0)).collect())
            .collect();
        let labels = (0..m).map(|k| alloc::format!("x{k}")).collect();
        let d = DesignMatrix::with_intercept(labels, cols, n).unwrap();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        (d, y)
    }

    #[test]
    fn qr_matches_normal_equations_oracle() {
        for seed in 0..6u64 {
            let (d, y) = design_and_y(seed, 60, 4);
            let fit = ols_fit(&d, &y).unwrap();
            let oracle = normal_equations(&d.cols, &y);
            for (a, b) in fit.coefficients.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn exact_interpolation_recovers_coefficients() {
        let (d, _) = design_and_y(3, 100, 3);
        let truth = [2.5, -0.5, 0.25, 1.5];
        let y = d.predict(&truth);
        let fit = ols_fit(&d, &y).unwrap();
        for (a, b) in fit.coefficients.iter().zip(&truth) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert!(fit.residuals.iter().all(|e| e.abs() < 1e-9));
    }

    #[test]
    fn hand_computed_simple_regression() {
        // y = 1 + 2x fit to exact points.
        let d = DesignMatrix::with_intercept(
            vec!["x".into()],
            vec![vec![0.0, 1.0, 2.0, 3.0]],
            4,
        )
        .unwrap();
        let fit = ols_fit(&d, &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn r_squared_definitions() {
        // Known decomposition: x = [1..6], y with noise; compare against
        // the direct 1 - SSR/SST computation.
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = [2.1, 3.9, 6.2, 7.8, 10.1, 11.9];
        let d = DesignMatrix::with_intercept(vec!["x".into()], vec![x], 6).unwrap();
        let fit = ols_fit(&d, &y).unwrap();
        let ss_res: f64 = fit.residuals.iter().map(|e| e * e).sum();
        let my = stats::mean(&y);
        let ss_tot: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
        assert!((fit.r_squared - (1.0 - ss_res / ss_tot)).abs() < 1e-12);
        let (nf, pf) = (6.0, 1.0);
        let adj = 1.0 - (1.0 - fit.r_squared) * (nf - 1.0) / (nf - pf - 1.0);
        assert!((fit.adj_r_squared - adj).abs() < 1e-12);
        assert!(fit.adj_r_squared < fit.r_squared);
    }

    #[test]
    fn residual_skewness_is_reported() {
        let x = vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        // One large positive outlier skews the residuals right (part of it
        // is soaked up by the slope, so the skew is moderate, not huge).
        let y = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 30.0];
        let d = DesignMatrix::with_intercept(vec!["x".into()], vec![x], 8).unwrap();
        let fit = ols_fit(&d, &y).unwrap();
        assert!(fit.resid_skewness > 0.5, "skew = {}", fit.resid_skewness);
        assert!((fit.resid_skewness - stats::skewness(&fit.residuals)).abs() < 1e-12);
    }

    #[test]
    fn duplicate_column_is_reported_as_collinear() {
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let d = DesignMatrix::with_intercept(
            vec!["x".into(), "x_copy".into()],
            vec![x.clone(), x],
            5,
        )
        .unwrap();
        match ols_fit(&d, &[1.0, 2.0, 3.0, 4.0, 5.0]) {
            Err(Error::RankDeficient(terms)) => {
                assert_eq!(terms, vec![String::from("x_copy")]);
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn linear_combination_is_reported_as_collinear() {
        let a = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let b = vec![2.0, 1.0, 0.0, 1.0, 2.0, 3.0];
        let c: Vec<f64> = a.iter().zip(&b).map(|(p, q)| 0.5 * p - 2.0 * q).collect();
        let d = DesignMatrix::with_intercept(
            vec!["a".into(), "b".into(), "c".into()],
            vec![a, b, c],
            6,
        )
        .unwrap();
        assert!(matches!(
            ols_fit(&d, &[0.0; 6]),
            Err(Error::RankDeficient(t)) if t == vec![String::from("c")]
        ));
    }

    #[test]
    fn needs_more_rows_than_columns() {
        let d = DesignMatrix::with_intercept(
            vec!["a".into(), "b".into()],
            vec![vec![1.0, 2.0, 3.0], vec![0.0, 1.0, 0.5]],
            3,
        )
        .unwrap();
        assert!(matches!(
            ols_fit(&d, &[1.0, 2.0, 3.0]),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn solve_reuses_factorization_across_rhs() {
        let (d, _) = design_and_y(9, 40, 3);
        let ls = LeastSquares::factorize(&d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..5 {
            let y: Vec<f64> = (0..40).map(|_| rng.random_range(-1.0..1.0)).collect();
            let fast = ls.solve(&y);
            let slow = normal_equations(&d.cols, &y);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }
}

//! Expected-duration surface over pairs of attribute scores.
//!
//! Given fitted coefficients for mean, similarity, and their product, the
//! predicted (log-scale) outcome for a score pair (v_i, v_j) is
//!
//! ```text
//! eta = b0 + b1 * (v_i + v_j)/2 + b2 * -|v_i - v_j| + b3 * mean * -|diff|
//! ```
//!
//! and the surface reports exp(eta). With b2 + b3 * mean < 0, moving apart
//! from v_i == v_j lowers the prediction: the diagonal is the ridge.

use alloc::vec::Vec;

#[allow(unused_imports)] // Float's methods are inherent on f64 with std
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelectionCoefficients {
    pub intercept: f64,
    pub mean: f64,
    pub similarity: f64,
    pub interaction: f64,
}

/// exp(eta) for one score pair.
pub fn selection_cell(v_i: f64, v_j: f64, c: &SelectionCoefficients) -> Result<f64> {
    let mean = (v_i + v_j) / 2.0;
    let sim = -(v_i - v_j).abs();
    let eta = c.intercept + c.mean * mean + c.similarity * sim + c.interaction * mean * sim;
    let out = eta.exp();
    if !out.is_finite() {
        return Err(Error::NonFinite("selection surface".into()));
    }
    Ok(out)
}

/// Derivative of eta in the "apart" direction at a given pair mean; negative
/// values mean similarity is rewarded there.
pub fn apart_slope(c: &SelectionCoefficients, mean: f64) -> f64 {
    -(c.similarity + c.interaction * mean)
}

/// Dense surface over the integer score grid [lo, hi] x [lo, hi].
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionGrid {
    pub lo: i64,
    pub hi: i64,
    pub coefficients: SelectionCoefficients,
    cells: Vec<f64>,
}

impl SelectionGrid {
    pub fn side(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    /// Value at integer scores (v_i, v_j); both must lie in [lo, hi].
    pub fn cell(&self, v_i: i64, v_j: i64) -> f64 {
        let side = self.side();
        let r = (v_i - self.lo) as usize;
        let c = (v_j - self.lo) as usize;
        self.cells[r * side + c]
    }

    pub fn scores(&self) -> impl Iterator<Item = i64> + '_ {
        self.lo..=self.hi
    }
}

pub fn selection_grid(
    lo: i64,
    hi: i64,
    coefficients: SelectionCoefficients,
) -> Result<SelectionGrid> {
    if lo > hi {
        return Err(Error::InvalidConfig(alloc::format!(
            "empty score range [{lo}, {hi}]"
        )));
    }
    let side = (hi - lo + 1) as usize;
    let mut cells = Vec::with_capacity(side * side);
    for v_i in lo..=hi {
        for v_j in lo..=hi {
            cells.push(selection_cell(v_i as f64, v_j as f64, &coefficients)?);
        }
    }
    Ok(SelectionGrid {
        lo,
        hi,
        coefficients,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_coefficients() -> SelectionCoefficients {
        SelectionCoefficients {
            intercept: 2.504,
            mean: -0.059,
            similarity: 0.047,
            interaction: -0.004,
        }
    }

    #[test]
    fn cell_is_exp_of_the_linear_predictor() {
        let c = reference_coefficients();
        // Hand-expanded: eta(5, 5) = 2.504 - 0.059 * 5 = 2.209.
        let v = selection_cell(5.0, 5.0, &c).unwrap();
        assert!((v - (2.209f64).exp()).abs() < 1e-12);
        // Diagonal kills the similarity and interaction terms entirely.
        let w = selection_cell(20.0, 20.0, &c).unwrap();
        assert!((w - (2.504f64 - 0.059 * 20.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn symmetry_in_the_two_scores() {
        let c = reference_coefficients();
        for (a, b) in [(4.0, 16.0), (0.0, 36.0), (7.0, 2.0)] {
            let x = selection_cell(a, b, &c).unwrap();
            let y = selection_cell(b, a, &c).unwrap();
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn moving_apart_lowers_the_surface_when_slope_is_negative() {
        let c = reference_coefficients();
        // At any mean in [0, 36], 0.047 - 0.004 * mean can flip sign;
        // check monotonicity only where the slope says so.
        for mean in [0.0, 5.0, 10.0, 18.0, 30.0] {
            let apart = apart_slope(&c, mean);
            let near = selection_cell(mean - 1.0, mean + 1.0, &c).unwrap();
            let far = selection_cell(mean - 4.0, mean + 4.0, &c).unwrap();
            if apart < 0.0 {
                assert!(far < near, "mean {mean}: expected decay away from diagonal");
            } else {
                assert!(far >= near, "mean {mean}: expected growth away from diagonal");
            }
        }
    }

    #[test]
    fn grid_layout_and_bounds() {
        let c = reference_coefficients();
        let g = selection_grid(0, 36, c).unwrap();
        assert_eq!(g.side(), 37);
        assert_eq!(g.cell(5, 5), selection_cell(5.0, 5.0, &c).unwrap());
        assert_eq!(g.cell(4, 16), selection_cell(4.0, 16.0, &c).unwrap());
        assert!(selection_grid(3, 2, c).is_err());
        // Single-point range is legal.
        assert_eq!(selection_grid(7, 7, c).unwrap().side(), 1);
    }

    #[test]
    fn overflowing_coefficients_are_caught() {
        let c = SelectionCoefficients {
            intercept: 1000.0,
            mean: 0.0,
            similarity: 0.0,
            interaction: 0.0,
        };
        assert!(matches!(
            selection_cell(0.0, 0.0, &c),
            Err(Error::NonFinite(_))
        ));
    }
}

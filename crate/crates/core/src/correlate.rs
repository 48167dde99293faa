//! Pairwise correlation tables over node-level variables.
//!
//! Each pair uses pairwise-complete observations. Pearson is the default;
//! a pair falls back to Spearman when either variable is flagged for ranks
//! (binary and ordinal codes). Stars follow the classical t-test on r.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::stats;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrMethod {
    Pearson,
    Spearman,
}

/// Rank-based treatment for variables with at most two distinct values.
pub fn suggest_method(values: &[Option<f64>]) -> CorrMethod {
    let mut distinct: Vec<f64> = Vec::new();
    for v in values.iter().flatten() {
        if !distinct.contains(v) {
            distinct.push(*v);
            if distinct.len() > 2 {
                return CorrMethod::Pearson;
            }
        }
    }
    CorrMethod::Spearman
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrVariable {
    pub name: String,
    pub values: Vec<Option<f64>>,
    pub method: CorrMethod,
}

impl CorrVariable {
    pub fn auto(name: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        let method = suggest_method(&values);
        Self {
            name: name.into(),
            values,
            method,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrCell {
    pub r: f64,
    pub p: f64,
    pub n: usize,
    pub method: CorrMethod,
}

/// Symmetric table; `None` cells had too little overlapping data.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTable {
    pub names: Vec<String>,
    pub methods: Vec<CorrMethod>,
    pub cells: Vec<Vec<Option<CorrCell>>>,
}

impl CorrelationTable {
    pub fn cell(&self, i: usize, j: usize) -> Option<&CorrCell> {
        self.cells[i][j].as_ref()
    }
}

pub fn correlation_table(vars: &[CorrVariable]) -> Result<CorrelationTable> {
    if vars.len() < 2 {
        return Err(Error::InsufficientData("need at least 2 variables".into()));
    }
    let n = vars[0].values.len();
    for v in vars {
        if v.values.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.values.len(),
            });
        }
    }
    let k = vars.len();
    let mut cells: Vec<Vec<Option<CorrCell>>> = alloc::vec![alloc::vec![None; k]; k];
    for i in 0..k {
        for j in i..k {
            let method = if vars[i].method == CorrMethod::Spearman
                || vars[j].method == CorrMethod::Spearman
            {
                CorrMethod::Spearman
            } else {
                CorrMethod::Pearson
            };
            let (xs, ys) = stats::pairwise_complete(&vars[i].values, &vars[j].values);
            let cell = if xs.len() < 3 {
                None
            } else {
                let r = match method {
                    CorrMethod::Pearson => stats::pearson(&xs, &ys),
                    CorrMethod::Spearman => stats::spearman(&xs, &ys),
                };
                r.map(|r| CorrCell {
                    r,
                    p: stats::correlation_t_p(r, xs.len()),
                    n: xs.len(),
                    method,
                })
            };
            cells[i][j] = cell;
            cells[j][i] = cell;
        }
    }
    Ok(CorrelationTable {
        names: vars.iter().map(|v| v.name.clone()).collect(),
        methods: vars.iter().map(|v| v.method).collect(),
        cells,
    })
}

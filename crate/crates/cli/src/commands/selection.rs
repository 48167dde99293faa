//! `dyadnet selection`: evaluate a fitted model as a selection surface over
//! an integer score grid.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use dyadnet_core::selection::{selection_grid, SelectionCoefficients};

use crate::{fmt, io};

#[derive(Args, Debug)]
pub struct SelectionArgs {
    /// Four comma-separated coefficients: intercept, score mean, score
    /// similarity, mean-by-similarity interaction
    /// (e.g. `2.504,-0.059,0.047,-0.004`).
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,

    /// Inclusive integer score range, `lo:hi`.
    #[arg(long, default_value = "0:36", allow_hyphen_values = true)]
    pub range: String,

    /// Output path for the grid CSV.
    #[arg(long, default_value = "selection.csv")]
    pub out: PathBuf,

    /// Optional raster heat map (binary PPM, yellow = low, dark red = high).
    #[arg(long)]
    pub ppm: Option<PathBuf>,
}

fn parse_coeffs(s: &str) -> Result<SelectionCoefficients> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        bail!("--coeffs needs exactly four comma-separated numbers, got {}", parts.len());
    }
    let mut values = [0.0f64; 4];
    for (v, p) in values.iter_mut().zip(&parts) {
        *v = p.parse().with_context(|| format!("bad coefficient '{p}'"))?;
        if !v.is_finite() {
            bail!("non-finite coefficient '{p}'");
        }
    }
    Ok(SelectionCoefficients {
        intercept: values[0],
        mean: values[1],
        similarity: values[2],
        interaction: values[3],
    })
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let Some((lo, hi)) = s.split_once(':') else {
        bail!("--range must be `lo:hi`, got '{s}'");
    };
    let lo: i64 = lo.trim().parse().with_context(|| format!("bad range bound '{lo}'"))?;
    let hi: i64 = hi.trim().parse().with_context(|| format!("bad range bound '{hi}'"))?;
    if lo > hi {
        bail!("empty score range {lo}:{hi}");
    }
    Ok((lo, hi))
}

pub fn run(args: SelectionArgs) -> Result<()> {
    let coefficients = parse_coeffs(&args.coeffs)?;
    let (lo, hi) = parse_range(&args.range)?;
    let grid = selection_grid(lo, hi, coefficients)?;

    let provenance = fmt::provenance(
        "selection",
        &[
            ("coeffs", args.coeffs.replace(' ', "")),
            ("range", format!("{lo}:{hi}")),
        ],
    );
    io::write_grid(&io::resolve(&args.out), &grid, &provenance)?;
    if let Some(ppm) = &args.ppm {
        io::write_grid_ppm(&io::resolve(ppm), &grid)?;
    }
    Ok(())
}

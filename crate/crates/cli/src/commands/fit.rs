//! `dyadnet fit`: permutation regression of a dyadic dependent matrix on
//! node-attribute and network terms.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use dyadnet_core::qap::{QapModelSpec, QapProblem, Transform, DEFAULT_PERMUTATIONS};
use dyadnet_core::terms::TermExpr;
use dyadnet_core::{NominationNetwork, SampleId};
use serde::Deserialize;

use crate::{fmt, io, parallel};

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Model file (JSON): `dependent`, `terms`, and optional
    /// `permutations`, `seed`, `transform`.
    #[arg(long)]
    pub model: PathBuf,

    /// Dyadic dependent matrix (written by `ingest`).
    #[arg(long)]
    pub durations: PathBuf,

    /// Attribute table; defines the node set.
    #[arg(long)]
    pub attributes: PathBuf,

    /// Directed nominations (`sample_id,ego,alter`); required when any term
    /// references a network.
    #[arg(long)]
    pub nominations: Option<PathBuf>,

    /// Respondent list (`sample_id,node_id`); absent means every node
    /// responded, so unnominated pairs are true zeros.
    #[arg(long)]
    pub respondents: Option<PathBuf>,

    /// Override the model file's permutation count.
    #[arg(long)]
    pub permutations: Option<u32>,

    /// Override the model file's master seed.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Override the dependent transform: `none`, `log`, or `log:<offset>`.
    #[arg(long)]
    pub transform: Option<String>,

    /// Restrict the fit to one sample's dyad block; constant sample terms
    /// are dropped with a note.
    #[arg(long)]
    pub per_sample: Option<String>,

    /// Output path; a `.json` extension selects JSON, anything else CSV.
    #[arg(long, default_value = "results.csv")]
    pub out: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    dependent: String,
    terms: Vec<String>,
    #[serde(default)]
    permutations: Option<u32>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    transform: Option<String>,
}

fn read_model(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: bad model file", path.display()))
}

pub fn run(args: FitArgs) -> Result<()> {
    let model_path = io::resolve(&args.model);
    let model = read_model(&model_path)?;

    // Command-line flags win over model-file values.
    let permutations = args
        .permutations
        .or(model.permutations)
        .unwrap_or(DEFAULT_PERMUTATIONS);
    let seed = args.seed.or(model.seed).unwrap_or(0);
    let transform = match args.transform.as_deref().or(model.transform.as_deref()) {
        Some(s) => Transform::parse(s)?,
        None => Transform::Log { offset: 1.0 },
    };

    let mut terms = Vec::with_capacity(model.terms.len());
    for t in &model.terms {
        let expr: TermExpr = t
            .parse()
            .with_context(|| format!("{}: term '{t}'", model_path.display()))?;
        terms.push(expr);
    }

    let mut panel = io::read_attributes(&io::resolve(&args.attributes))?;
    let (file_roster, raw_matrix) = io::read_matrix(&io::resolve(&args.durations), &model.dependent)?;
    let mut dependent =
        io::align_matrix(&file_roster, &raw_matrix, panel.roster(), &model.dependent)?;

    // A network file is needed exactly when some term references a network.
    let refs: BTreeSet<&str> = terms.iter().flat_map(|t| t.network_refs()).collect();
    if refs.len() > 1 {
        bail!(
            "terms reference {} different networks ({}); only one nominations file is supported",
            refs.len(),
            refs.iter().copied().collect::<Vec<_>>().join(", ")
        );
    }
    let mut network: Option<NominationNetwork> = match refs.iter().next() {
        Some(label) => {
            let Some(nom_path) = &args.nominations else {
                bail!("terms reference network '{label}' but --nominations was not given");
            };
            let pairs = io::read_nominations(&io::resolve(nom_path), panel.roster())?;
            let respondents = match &args.respondents {
                Some(p) => Some(io::read_respondents(&io::resolve(p), panel.roster())?),
                None => None,
            };
            Some(io::build_network(
                panel.roster(),
                label,
                &pairs,
                respondents.as_deref(),
            )?)
        }
        None => None,
    };

    if let Some(sample) = &args.per_sample {
        let sample = SampleId::new(sample.as_str());
        let members = panel.roster().sample_members(&sample);
        if members.is_empty() {
            bail!("unknown sample '{sample}'");
        }
        let kept: Vec<TermExpr> = terms
            .iter()
            .filter(|t| {
                if t.references_sample() {
                    eprintln!("note: dropping constant term {t} in per-sample fit");
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        if kept.is_empty() {
            bail!("no terms left after dropping sample terms");
        }
        terms = kept;
        panel = panel.restrict(&members);
        dependent = dependent.restrict(&members);
        network = network.map(|n| n.restrict(&members));
    }

    let spec = QapModelSpec {
        dependent: model.dependent.clone(),
        terms,
        permutations,
        seed,
        transform,
    };
    let problem = QapProblem::prepare(&spec, &panel, network.as_ref(), &dependent)?;
    let replicates = parallel::run_replicates(&problem);
    let fit = problem.finish(&replicates)?;

    let per_sample_desc = args.per_sample.clone().unwrap_or_else(|| "all".to_string());
    let out = io::resolve(&args.out);
    if out.extension().and_then(|e| e.to_str()) == Some("json") {
        io::write_results_json(
            &out,
            &fit,
            &[
                ("command", "fit".into()),
                ("model", args.model.display().to_string().into()),
                ("dependent", model.dependent.clone().into()),
                ("transform", transform.to_string().into()),
                ("per_sample", per_sample_desc.into()),
            ],
        )?;
    } else {
        let provenance = fmt::provenance(
            "fit",
            &[
                ("model", args.model.display().to_string()),
                ("dependent", model.dependent.clone()),
                ("transform", transform.to_string()),
                ("per_sample", per_sample_desc),
                ("permutations", fit.permutations.to_string()),
                ("seed", fit.seed.to_string()),
            ],
        );
        io::write_results_csv(&out, &fit, &provenance)?;
    }
    Ok(())
}

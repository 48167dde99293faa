//! `dyadnet descriptives`: node-level summary statistics and a correlation
//! table over attributes, scale scores, and interaction exposure aggregates.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use dyadnet_core::builders::{cronbach_alpha, scale_score};
use dyadnet_core::correlate::{correlation_table, CorrMethod, CorrVariable};
use dyadnet_core::qap::node_permutation_correlation;
use dyadnet_core::stats;
use std::io::Write as _;

use crate::commands::{load_contacts, GapPolicyArg, GroupRuleArg};
use crate::pipeline::{self, IngestOptions};
use crate::{fmt, io};

#[derive(Args, Debug)]
pub struct DescriptivesArgs {
    /// Contact stream CSV.
    #[arg(long)]
    pub contacts: PathBuf,

    /// Attribute table.
    #[arg(long)]
    pub attributes: PathBuf,

    /// Merge fragments separated by at most this many seconds.
    #[arg(long, default_value_t = 75)]
    pub merge_gap: u64,

    /// Disable merging entirely.
    #[arg(long)]
    pub no_merge: bool,

    /// How a merged event contributes duration.
    #[arg(long, value_enum, default_value_t = GapPolicyArg::Span)]
    pub gap_policy: GapPolicyArg,

    /// What counts as a group when splitting per-node exposure.
    #[arg(long, value_enum, default_value_t = GroupRuleArg::Components)]
    pub group_rule: GroupRuleArg,

    /// Observation window override in seconds.
    #[arg(long)]
    pub window: Option<u64>,

    /// Warn and skip malformed contact rows instead of failing.
    #[arg(long)]
    pub skip_bad_rows: bool,

    /// Sum a 20-item scale from columns sharing a prefix, e.g.
    /// `--scale depression=cesd_` sums cesd_1 through cesd_20.
    #[arg(long)]
    pub scale: Option<String>,

    /// Node-permutation test for one variable pair, named as `x,y`.
    #[arg(long)]
    pub perm_test: Option<String>,

    /// Replicates for the permutation test.
    #[arg(long, default_value_t = 5000)]
    pub permutations: u32,

    /// Master seed for the permutation test.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output path for the table.
    #[arg(long, default_value = "descriptives.csv")]
    pub out: PathBuf,
}

/// Numeric columns `<prefix><k>` sorted by the integer suffix `k`.
fn scale_items(panel: &dyadnet_core::NodePanel, prefix: &str) -> Vec<(u64, String)> {
    let mut items: Vec<(u64, String)> = panel
        .numeric_names()
        .filter_map(|name| {
            let suffix = name.strip_prefix(prefix)?;
            suffix.parse::<u64>().ok().map(|k| (k, name.to_string()))
        })
        .collect();
    items.sort();
    items
}

pub fn run(args: DescriptivesArgs) -> Result<()> {
    let loaded = load_contacts(&args.contacts, Some(&args.attributes), args.skip_bad_rows)?;
    let panel = loaded.panel.as_ref().expect("attributes are required here");
    let opts = IngestOptions {
        merge_gap: (!args.no_merge).then_some(args.merge_gap),
        gap_policy: args.gap_policy.into(),
        group_rule: args.group_rule.into(),
        window: args.window,
        normalize: true,
    };
    let ingest = pipeline::run(&loaded.events, &loaded.roster, &opts)?;
    let n = loaded.roster.len();

    let mut vars: Vec<CorrVariable> = Vec::new();
    let mut comments: Vec<String> = Vec::new();

    for name in panel.numeric_names() {
        let values = panel.numeric(name).expect("listed").to_vec();
        vars.push(CorrVariable::auto(name, values));
    }

    if let Some(spec) = &args.scale {
        let Some((name, prefix)) = spec.split_once('=') else {
            bail!("--scale must be `name=column_prefix`, got '{spec}'");
        };
        let items = scale_items(panel, prefix);
        let columns: Vec<&[Option<f64>]> = items
            .iter()
            .map(|(_, col)| panel.numeric(col).expect("listed"))
            .collect();
        let mut scores = Vec::with_capacity(n);
        for i in 0..n {
            let row: Vec<Option<f64>> = columns.iter().map(|c| c[i]).collect();
            scores.push(scale_score(&row).with_context(|| {
                format!("scale '{name}': {} item column(s) match '{prefix}'", items.len())
            })?);
        }
        let complete: Vec<Vec<f64>> = (0..n)
            .filter_map(|i| {
                columns
                    .iter()
                    .map(|c| c[i])
                    .collect::<Option<Vec<f64>>>()
            })
            .collect();
        let alpha = cronbach_alpha(&complete)?;
        comments.push(format!(
            "# scale name={name} prefix={prefix} items={} complete={} alpha={}",
            items.len(),
            complete.len(),
            fmt::fixed6(alpha)
        ));
        vars.push(CorrVariable::auto(name, scores));
    }

    for name in panel.categorical_names() {
        let levels = panel.levels(name)?;
        if levels.len() != 2 {
            if levels.len() > 2 {
                eprintln!(
                    "note: skipping categorical '{name}' with {} levels in the correlation table",
                    levels.len()
                );
            }
            continue;
        }
        let level = levels.iter().next().expect("two levels").to_string();
        let values: Vec<Option<f64>> = panel
            .categorical(name)
            .expect("listed")
            .iter()
            .map(|c| c.as_ref().map(|v| if *v == level { 1.0 } else { 0.0 }))
            .collect();
        vars.push(CorrVariable::auto(format!("{name}={level}"), values));
    }

    // Hourly exposure aggregates; nodes in samples without any events have
    // no observation window, so their rates are missing rather than zero.
    let window_by_sample: BTreeMap<&str, u64> = ingest
        .windows
        .iter()
        .map(|(s, w)| (s.as_str(), *w))
        .collect();
    let mut dyadic = vec![None; n];
    let mut group = vec![None; n];
    let mut total = vec![None; n];
    let mut ratio = vec![None; n];
    for e in &ingest.exposures {
        let i = loaded
            .roster
            .index_of(&e.node)
            .expect("exposures cover the roster");
        let hours = window_by_sample
            .get(loaded.roster.sample(i).as_str())
            .map(|w| *w as f64 / 3600.0);
        if let Some(hours) = hours {
            dyadic[i] = Some(e.seconds_dyadic as f64 / hours);
            group[i] = Some(e.seconds_group as f64 / hours);
            total[i] = Some(e.seconds_total() as f64 / hours);
        }
        ratio[i] = e.ratio_dyadic();
    }
    vars.push(CorrVariable::auto("dyadic_s_per_h", dyadic));
    vars.push(CorrVariable::auto("group_s_per_h", group));
    vars.push(CorrVariable::auto("total_s_per_h", total));
    vars.push(CorrVariable::auto("ratio_dyadic", ratio));

    if let Some(pair) = &args.perm_test {
        let Some((x_name, y_name)) = pair.split_once(',') else {
            bail!("--perm-test must be `x,y`, got '{pair}'");
        };
        let find = |name: &str| {
            vars.iter()
                .find(|v| v.name == name.trim())
                .ok_or_else(|| anyhow::anyhow!("no variable named '{}'", name.trim()))
        };
        let x = find(x_name)?;
        let y = find(y_name)?;
        let test = node_permutation_correlation(&x.values, &y.values, args.permutations, args.seed)?;
        comments.push(format!(
            "# perm_test x={} y={} r={} p_one={} p_two={} n={} permutations={} seed={}",
            x.name,
            y.name,
            fmt::fixed6(test.r),
            fmt::fixed6(test.p_one),
            fmt::fixed6(test.p_two),
            test.n,
            test.permutations,
            args.seed
        ));
    }

    let table = correlation_table(&vars)?;

    let merge_desc = if args.no_merge {
        "off".to_string()
    } else {
        args.merge_gap.to_string()
    };
    let provenance = fmt::provenance(
        "descriptives",
        &[
            ("contacts", args.contacts.display().to_string()),
            ("attributes", args.attributes.display().to_string()),
            ("merge_gap", merge_desc),
            ("gap_policy", args.gap_policy.name().to_string()),
            ("group_rule", args.group_rule.name().to_string()),
            ("windows", io::window_pairs(&ingest.windows)),
        ],
    );

    let out = io::resolve(&args.out);
    let mut w = std::io::BufWriter::new(
        std::fs::File::create(&out).with_context(|| format!("cannot create {}", out.display()))?,
    );
    writeln!(w, "{provenance}")?;
    for c in &comments {
        writeln!(w, "{c}")?;
    }
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec![
        "variable".to_string(),
        "method".to_string(),
        "mean".to_string(),
        "sd".to_string(),
        "n".to_string(),
    ];
    header.extend(table.names.iter().cloned());
    wtr.write_record(&header)?;
    for (i, name) in table.names.iter().enumerate() {
        let observed: Vec<f64> = vars[i].values.iter().flatten().copied().collect();
        let method = match table.methods[i] {
            CorrMethod::Pearson => "pearson",
            CorrMethod::Spearman => "spearman",
        };
        let mut row = vec![
            name.clone(),
            method.to_string(),
            fmt::fixed6(stats::mean(&observed)),
            fmt::fixed6(stats::sample_sd(&observed)),
            observed.len().to_string(),
        ];
        // Lower triangle only: the table is symmetric.
        for j in 0..table.names.len() {
            if j < i {
                row.push(match table.cell(i, j) {
                    Some(c) => format!("{:.3}{}", c.r, stats::stars(c.p)),
                    None => String::new(),
                });
            } else {
                row.push(String::new());
            }
        }
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

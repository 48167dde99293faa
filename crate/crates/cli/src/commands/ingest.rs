//! `dyadnet ingest`: contact stream in, dyadic duration matrix plus per-node
//! exposure report out.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use crate::commands::{load_contacts, GapPolicyArg, GroupRuleArg};
use crate::pipeline::{self, IngestOptions};
use crate::{fmt, io};

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// Contact stream CSV (`sample_id,node_a,node_b,t_start,t_end`).
    #[arg(long)]
    pub contacts: PathBuf,

    /// Attribute table; defines the node order of the output matrix.
    /// Without it the roster is taken from the contact stream.
    #[arg(long)]
    pub attributes: Option<PathBuf>,

    /// Merge fragments of the same dyad separated by at most this many
    /// seconds.
    #[arg(long, default_value_t = 75)]
    pub merge_gap: u64,

    /// Disable merging entirely; every fragment counts as its own event.
    #[arg(long)]
    pub no_merge: bool,

    /// How a merged event contributes duration.
    #[arg(long, value_enum, default_value_t = GapPolicyArg::Span)]
    pub gap_policy: GapPolicyArg,

    /// What counts as a group when splitting per-node exposure.
    #[arg(long, value_enum, default_value_t = GroupRuleArg::Components)]
    pub group_rule: GroupRuleArg,

    /// Observation window override in seconds; by default each sample uses
    /// its own first-start-to-last-end span.
    #[arg(long)]
    pub window: Option<u64>,

    /// Keep raw summed seconds instead of seconds per hour of observation.
    #[arg(long)]
    pub no_normalize: bool,

    /// Warn and skip malformed contact rows instead of failing.
    #[arg(long)]
    pub skip_bad_rows: bool,

    /// Output path for the dyadic duration matrix.
    #[arg(long, default_value = "durations.csv")]
    pub out_matrix: PathBuf,

    /// Output path for the per-node exposure report.
    #[arg(long, default_value = "exposure.csv")]
    pub out_exposure: PathBuf,

    /// Optional output path for the co-presence segment timeline.
    #[arg(long)]
    pub out_segments: Option<PathBuf>,
}

pub fn run(args: IngestArgs) -> Result<()> {
    let loaded = load_contacts(&args.contacts, args.attributes.as_deref(), args.skip_bad_rows)?;
    let opts = IngestOptions {
        merge_gap: (!args.no_merge).then_some(args.merge_gap),
        gap_policy: args.gap_policy.into(),
        group_rule: args.group_rule.into(),
        window: args.window,
        normalize: !args.no_normalize,
    };
    let out = pipeline::run(&loaded.events, &loaded.roster, &opts)?;

    let merge_desc = if args.no_merge {
        "off".to_string()
    } else {
        args.merge_gap.to_string()
    };
    let window_desc = args
        .window
        .map(|w| w.to_string())
        .unwrap_or_else(|| "auto".to_string());
    let provenance = fmt::provenance(
        "ingest",
        &[
            ("contacts", args.contacts.display().to_string()),
            ("merge_gap", merge_desc),
            ("gap_policy", args.gap_policy.name().to_string()),
            ("group_rule", args.group_rule.name().to_string()),
            ("window", window_desc),
            (
                "normalize",
                if args.no_normalize { "none" } else { "per_hour" }.to_string(),
            ),
            ("events", out.raw_events.to_string()),
            ("merged_events", out.merged_events.to_string()),
            ("windows", io::window_pairs(&out.windows)),
        ],
    );

    io::write_matrix(
        &io::resolve(&args.out_matrix),
        &out.durations,
        &loaded.roster,
        &provenance,
    )?;
    io::write_exposure(&io::resolve(&args.out_exposure), &out.exposures, &provenance)?;
    if let Some(path) = &args.out_segments {
        io::write_segments(&io::resolve(path), &out.segments, &loaded.roster, &provenance)?;
    }
    Ok(())
}

//! Shared contact-processing pipeline: merge, aggregate, normalize, and
//! classify co-presence. Both `ingest` and `descriptives` run this.

use anyhow::{bail, Result};
use dyadnet_core::contacts::{
    self, ContactEvent, CopresenceSegment, GapPolicy, GroupRule, NodeExposure,
};
use dyadnet_core::{DyadicMatrix, Roster, SampleId};

pub struct IngestOptions {
    /// Merge fragments separated by at most this many seconds; `None`
    /// disables merging entirely.
    pub merge_gap: Option<u64>,
    /// Whether a merged event contributes its full span or only the covered
    /// sub-durations.
    pub gap_policy: GapPolicy,
    /// What counts as a group when classifying co-presence.
    pub group_rule: GroupRule,
    /// Global observation-window override in seconds; by default each sample
    /// uses its own first-start-to-last-end span.
    pub window: Option<u64>,
    /// Convert summed seconds to seconds per hour of observation.
    pub normalize: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            merge_gap: Some(75),
            gap_policy: GapPolicy::Span,
            group_rule: GroupRule::Components,
            window: None,
            normalize: true,
        }
    }
}

pub struct IngestOutput {
    /// Dyadic totals, per hour when normalization is on, raw seconds
    /// otherwise.
    pub durations: DyadicMatrix,
    /// Observation window per sample, in seconds.
    pub windows: Vec<(SampleId, u64)>,
    pub segments: Vec<CopresenceSegment>,
    pub exposures: Vec<NodeExposure>,
    pub raw_events: usize,
    pub merged_events: usize,
}

/// Per-sample observation windows: the override when given, otherwise each
/// sample's own span. Samples without any events get no window.
fn observation_windows(
    events: &[ContactEvent],
    roster: &Roster,
    global: Option<u64>,
) -> Result<Vec<(SampleId, u64)>> {
    let mut windows = Vec::new();
    for sample in roster.sample_ids() {
        if let Some(w) = global {
            windows.push((sample.clone(), w));
            continue;
        }
        let in_sample: Vec<ContactEvent> = events
            .iter()
            .filter(|e| e.sample() == sample)
            .cloned()
            .collect();
        if let Some((start, end)) = contacts::observation_span(&in_sample) {
            windows.push((sample.clone(), end - start));
        }
    }
    if windows.iter().any(|(_, w)| *w == 0) {
        bail!("observation window of zero seconds");
    }
    Ok(windows)
}

pub fn run(events: &[ContactEvent], roster: &Roster, opts: &IngestOptions) -> Result<IngestOutput> {
    let (seconds, copresence_input, merged_events) = match opts.merge_gap {
        Some(gap) => {
            let merged = contacts::merge_events(events, gap);
            let seconds = contacts::aggregate_merged(&merged, opts.gap_policy, roster)?;
            let spans: Vec<ContactEvent> = merged.iter().map(|m| m.span.clone()).collect();
            let count = spans.len();
            (seconds, spans, count)
        }
        None => {
            let seconds = contacts::aggregate_events(events, roster)?;
            (seconds, events.to_vec(), events.len())
        }
    };

    let windows = observation_windows(events, roster, opts.window)?;
    let durations = if opts.normalize {
        contacts::normalize_per_hour_by_sample(&seconds, roster, &windows)?
    } else {
        seconds
    };

    let (segments, exposures) =
        contacts::classify_copresence(&copresence_input, roster, opts.group_rule)?;

    Ok(IngestOutput {
        durations,
        windows,
        segments,
        exposures,
        raw_events: events.len(),
        merged_events,
    })
}

//! Contact streams: validated events, the merge rule, duration aggregation,
//! and per-node co-presence exposure.
//!
//! Time is integer seconds on a per-sample clock and intervals are half-open:
//! an event `[start, end)` covers `end - start` seconds. All entry points
//! sort internally, so results never depend on input order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::DyadicMatrix;
use crate::roster::{NodeId, Roster, SampleId};

/// One proximity event between two distinct nodes of the same sample.
/// The dyad is stored in canonical order (`a < b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactEvent {
    sample: SampleId,
    a: NodeId,
    b: NodeId,
    start: u64,
    end: u64,
}

impl ContactEvent {
    pub fn new(
        sample: SampleId,
        a: NodeId,
        b: NodeId,
        start: u64,
        end: u64,
    ) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidEvent(alloc::format!(
                "self-contact for node '{a}'"
            )));
        }
        if start >= end {
            return Err(Error::InvalidEvent(alloc::format!(
                "interval [{start}, {end}) is empty"
            )));
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Ok(Self { sample, a, b, start, end })
    }

    pub fn sample(&self) -> &SampleId {
        &self.sample
    }

    pub fn a(&self) -> &NodeId {
        &self.a
    }

    pub fn b(&self) -> &NodeId {
        &self.b
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.end
    }

    pub fn duration(&self) -> u64 {
        self.end - self.start
    }

    fn dyad_key(&self) -> (&SampleId, &NodeId, &NodeId) {
        (&self.sample, &self.a, &self.b)
    }
}

/// How a merged event reports its duration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapPolicy {
    /// First start to last end, bridged silences included.
    Span,
    /// Union of the source intervals only.
    Covered,
}

/// Result of fusing same-dyad events separated by at most the gap threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct MergedEvent {
    pub span: ContactEvent,
    /// Seconds actually covered by the source intervals.
    pub covered: u64,
    pub merged_from: u32,
}

impl MergedEvent {
    pub fn duration(&self, policy: GapPolicy) -> u64 {
        match policy {
            GapPolicy::Span => self.span.duration(),
            GapPolicy::Covered => self.covered,
        }
    }
}

/// Fuses successive events of the same dyad whose silence is `<= gap`
/// seconds (a silence of exactly `gap` still merges). Output is sorted by
/// (sample, dyad, start) and any two output events of the same dyad are
/// separated by more than `gap`.
pub fn merge_events(events: &[ContactEvent], gap: u64) -> Vec<MergedEvent> {
    let mut order: Vec<usize> = (0..events.len()).collect();
    order.sort_by(|&p, &q| {
        let ep = &events[p];
        let eq = &events[q];
        ep.dyad_key()
            .cmp(&eq.dyad_key())
            .then(ep.start.cmp(&eq.start))
            .then(ep.end.cmp(&eq.end))
    });

    let mut out: Vec<MergedEvent> = Vec::new();
    let mut cur: Option<(MergedEvent, u64)> = None; // (accumulator, union frontier)
    for &k in &order {
        let e = &events[k];
        match cur.as_mut() {
            Some((acc, frontier))
                if acc.span.dyad_key() == e.dyad_key()
                    && e.start <= acc.span.end + gap =>
            {
                if e.end > *frontier {
                    acc.covered += e.end - e.start.max(*frontier);
                    *frontier = e.end;
                }
                acc.span.end = acc.span.end.max(e.end);
                acc.merged_from += 1;
            }
            _ => {
                if let Some((done, _)) = cur.take() {
                    out.push(done);
                }
                cur = Some((
                    MergedEvent {
                        span: e.clone(),
                        covered: e.duration(),
                        merged_from: 1,
                    },
                    e.end,
                ));
            }
        }
    }
    if let Some((done, _)) = cur {
        out.push(done);
    }
    out
}

fn resolve_dyad(e: &ContactEvent, roster: &Roster) -> Result<(usize, usize)> {
    let i = roster
        .index_of(&e.a)
        .ok_or_else(|| Error::UnknownNode(e.a.as_str().into()))?;
    let j = roster
        .index_of(&e.b)
        .ok_or_else(|| Error::UnknownNode(e.b.as_str().into()))?;
    if roster.sample(i) != &e.sample || roster.sample(j) != &e.sample {
        return Err(Error::InvalidEvent(alloc::format!(
            "event for dyad ({}, {}) is recorded under sample '{}'",
            e.a, e.b, e.sample
        )));
    }
    Ok((i, j))
}

/// Sums raw event durations into a symmetric duration matrix (seconds).
pub fn aggregate_events(events: &[ContactEvent], roster: &Roster) -> Result<DyadicMatrix> {
    let mut m = DyadicMatrix::zeros(roster.len(), "durations");
    for e in events {
        let (i, j) = resolve_dyad(e, roster)?;
        m.add(i, j, e.duration() as f64);
    }
    Ok(m)
}

/// Sums merged event durations under the chosen gap policy.
pub fn aggregate_merged(
    merged: &[MergedEvent],
    policy: GapPolicy,
    roster: &Roster,
) -> Result<DyadicMatrix> {
    let mut m = DyadicMatrix::zeros(roster.len(), "durations");
    for me in merged {
        let (i, j) = resolve_dyad(&me.span, roster)?;
        m.add(i, j, me.duration(policy) as f64);
    }
    Ok(m)
}

/// `[min start, max end]` over the given events, or `None` when empty.
pub fn observation_span(events: &[ContactEvent]) -> Option<(u64, u64)> {
    let start = events.iter().map(|e| e.start).min()?;
    let end = events.iter().map(|e| e.end).max()?;
    Some((start, end))
}

/// Rescales seconds to an hourly rate over a single observation window.
pub fn normalize_per_hour(m: &DyadicMatrix, window_seconds: u64) -> Result<DyadicMatrix> {
    if window_seconds == 0 {
        return Err(Error::InvalidWindow);
    }
    let mut out = m.clone();
    out.map_values(|v| v * 3600.0 / window_seconds as f64);
    Ok(out)
}

/// Rescales each sample's block by that sample's own observation window.
/// Samples absent from `windows` must have all-zero blocks. Cells joining
/// two samples are left untouched (they carry no observed seconds).
pub fn normalize_per_hour_by_sample(
    m: &DyadicMatrix,
    roster: &Roster,
    windows: &[(SampleId, u64)],
) -> Result<DyadicMatrix> {
    if m.n() != roster.len() {
        return Err(Error::DimensionMismatch {
            expected: roster.len(),
            found: m.n(),
        });
    }
    let lookup: BTreeMap<&SampleId, u64> = windows.iter().map(|(s, w)| (s, *w)).collect();
    let mut out = m.clone();
    for (i, j) in m.dyads() {
        if m.is_masked(i, j) || !roster.same_sample(i, j) {
            continue;
        }
        match lookup.get(roster.sample(i)) {
            Some(0) => return Err(Error::InvalidWindow),
            Some(&w) => out.set(i, j, m.value(i, j) * 3600.0 / w as f64),
            None if m.value(i, j) == 0.0 => {}
            None => {
                return Err(Error::InvalidWindow);
            }
        }
    }
    Ok(out)
}

/// How simultaneous contacts are split into two-party vs group time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupRule {
    /// A node is in group interaction when its connected component in the
    /// instantaneous contact graph has three or more members.
    Components,
    /// A node is in group interaction only when it closes a triangle with
    /// two of its current contacts.
    Triangles,
}

/// One maximal interval during which the instantaneous contact graph of a
/// sample is unchanged. Components are roster indices, each sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct CopresenceSegment {
    pub sample: SampleId,
    pub start: u64,
    pub end: u64,
    pub components: Vec<Vec<usize>>,
}

/// Seconds of two-party and group interaction accumulated by one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeExposure {
    pub node: NodeId,
    pub seconds_dyadic: u64,
    pub seconds_group: u64,
}

impl NodeExposure {
    pub fn seconds_total(&self) -> u64 {
        self.seconds_dyadic + self.seconds_group
    }

    /// Share of contact time spent one-on-one; undefined without contact.
    pub fn ratio_dyadic(&self) -> Option<f64> {
        let total = self.seconds_total();
        if total == 0 {
            None
        } else {
            Some(self.seconds_dyadic as f64 / total as f64)
        }
    }
}

/// Partitions each sample's timeline at event boundaries, decomposes every
/// segment's contact graph, and accumulates per-node exposure. Exposures
/// cover every roster node (zeros for nodes without contact); segments are
/// emitted only where at least one contact is active, ordered by
/// (sample, start).
pub fn classify_copresence(
    events: &[ContactEvent],
    roster: &Roster,
    rule: GroupRule,
) -> Result<(Vec<CopresenceSegment>, Vec<NodeExposure>)> {
    let mut dyadic = vec![0u64; roster.len()];
    let mut group = vec![0u64; roster.len()];
    let mut segments = Vec::new();

    let mut by_sample: BTreeMap<&SampleId, Vec<(usize, usize, u64, u64)>> = BTreeMap::new();
    for e in events {
        let (i, j) = resolve_dyad(e, roster)?;
        by_sample
            .entry(&e.sample)
            .or_default()
            .push((i, j, e.start, e.end));
    }

    for (sample, evs) in by_sample {
        let mut boundaries = BTreeSet::new();
        for &(_, _, s, e) in &evs {
            boundaries.insert(s);
            boundaries.insert(e);
        }
        let boundaries: Vec<u64> = boundaries.into_iter().collect();

        let mut by_start: Vec<usize> = (0..evs.len()).collect();
        by_start.sort_by_key(|&k| evs[k].2);
        let mut by_end: Vec<usize> = (0..evs.len()).collect();
        by_end.sort_by_key(|&k| evs[k].3);

        let mut active: BTreeSet<usize> = BTreeSet::new();
        let (mut p_add, mut p_rem) = (0usize, 0usize);

        for w in boundaries.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            while p_rem < by_end.len() && evs[by_end[p_rem]].3 <= t0 {
                active.remove(&by_end[p_rem]);
                p_rem += 1;
            }
            while p_add < by_start.len() && evs[by_start[p_add]].2 <= t0 {
                active.insert(by_start[p_add]);
                p_add += 1;
            }
            if active.is_empty() {
                continue;
            }

            // Adjacency of the instantaneous contact graph.
            let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for &k in &active {
                let (i, j, _, _) = evs[k];
                adj.entry(i).or_default().insert(j);
                adj.entry(j).or_default().insert(i);
            }

            let components = connected_components(&adj);
            let len = t1 - t0;
            for comp in &components {
                for &v in comp {
                    let in_group = match rule {
                        GroupRule::Components => comp.len() >= 3,
                        GroupRule::Triangles => in_triangle(v, &adj),
                    };
                    if in_group {
                        group[v] += len;
                    } else {
                        dyadic[v] += len;
                    }
                }
            }
            segments.push(CopresenceSegment {
                sample: sample.clone(),
                start: t0,
                end: t1,
                components,
            });
        }
    }

    let exposures = (0..roster.len())
        .map(|i| NodeExposure {
            node: roster.node(i).clone(),
            seconds_dyadic: dyadic[i],
            seconds_group: group[i],
        })
        .collect();
    Ok((segments, exposures))
}

fn connected_components(adj: &BTreeMap<usize, BTreeSet<usize>>) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in adj.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &u in &adj[&v] {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn in_triangle(v: usize, adj: &BTreeMap<usize, BTreeSet<usize>>) -> bool {
    let nbrs = &adj[&v];
    for &u in nbrs {
        for &w in nbrs {
            if u < w && adj[&u].contains(&w) {
                return true;
            }
        }
    }
    false
}

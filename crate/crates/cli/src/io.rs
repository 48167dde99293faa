//! File formats: attribute/contact/nomination readers, matrix round-trip,
//! and the report writers. All CSV outputs start with `#`-prefixed header
//! comments (provenance first), which every reader here skips.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use dyadnet_core::contacts::{ContactEvent, CopresenceSegment, NodeExposure};
use dyadnet_core::qap::QapFit;
use dyadnet_core::selection::SelectionGrid;
use dyadnet_core::{DyadicMatrix, NodeId, NodePanel, NominationNetwork, Roster, SampleId};

use crate::fmt;

/// Resolves a relative path against `DYADNET_DATA_DIR` when that variable is
/// set and non-empty; absolute paths and the unset case pass through.
pub fn resolve(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("DYADNET_DATA_DIR") {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn open_reader(path: &Path) -> Result<csv::Reader<File>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))
}

fn create_writer(path: &Path) -> Result<BufWriter<File>> {
    let file =
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

// ---------------------------------------------------------------------------
// Attributes
// ---------------------------------------------------------------------------

/// Reads the attributes table (`node_id,sample_id,<attr>...`). An empty cell
/// is a missing value. A column is numeric when every non-empty cell parses
/// as a finite number, categorical otherwise; all-empty columns count as
/// numeric.
pub fn read_attributes(path: &Path) -> Result<NodePanel> {
    let mut rdr = open_reader(path)?;
    let headers = rdr.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "node_id" || &headers[1] != "sample_id" {
        bail!(
            "{}: header must start with node_id,sample_id",
            path.display()
        );
    }
    let attr_names: Vec<String> = headers.iter().skip(2).map(str::to_string).collect();
    {
        let mut seen = BTreeSet::new();
        for name in &attr_names {
            if !seen.insert(name.as_str()) {
                bail!("{}: duplicate attribute column '{name}'", path.display());
            }
        }
    }

    let mut rows: Vec<(String, String, Vec<Option<String>>)> = Vec::new();
    let mut seen_nodes = BTreeSet::new();
    for record in rdr.records() {
        let record = record?;
        let line = record_line(&record);
        if record.len() != headers.len() {
            bail!(
                "{}: line {line}: expected {} fields, found {}",
                path.display(),
                headers.len(),
                record.len()
            );
        }
        let node = record[0].to_string();
        let sample = record[1].to_string();
        if node.is_empty() || sample.is_empty() {
            bail!("{}: line {line}: empty node_id or sample_id", path.display());
        }
        if !seen_nodes.insert(node.clone()) {
            bail!("{}: line {line}: duplicate node id '{node}'", path.display());
        }
        let cells = record
            .iter()
            .skip(2)
            .map(|s| if s.is_empty() { None } else { Some(s.to_string()) })
            .collect();
        rows.push((node, sample, cells));
    }

    let mut roster = Roster::new();
    for (node, sample, _) in &rows {
        roster
            .insert(NodeId::new(node.as_str()), SampleId::new(sample.as_str()))
            .with_context(|| format!("{}: node '{node}'", path.display()))?;
    }
    let mut panel = NodePanel::new(roster);
    for (k, name) in attr_names.iter().enumerate() {
        let column: Vec<Option<&String>> = rows.iter().map(|r| r.2[k].as_ref()).collect();
        let numeric = column
            .iter()
            .flatten()
            .all(|s| s.parse::<f64>().map(|v| v.is_finite()).unwrap_or(false));
        if numeric {
            let values = column
                .iter()
                .map(|c| c.map(|s| s.parse::<f64>().expect("checked above")))
                .collect();
            panel.add_numeric(name.clone(), values)?;
        } else {
            let values = column.iter().map(|c| c.cloned()).collect();
            panel.add_categorical(name.clone(), values)?;
        }
    }
    Ok(panel)
}

// ---------------------------------------------------------------------------
// Contacts
// ---------------------------------------------------------------------------

pub struct ContactsRead {
    pub events: Vec<ContactEvent>,
    /// `(line, message)` per rejected row.
    pub row_errors: Vec<(u64, String)>,
    /// Exact duplicate rows dropped.
    pub duplicates: usize,
}

const CONTACT_HEADER: [&str; 5] = ["sample_id", "node_a", "node_b", "t_start", "t_end"];

fn check_contact_header(path: &Path, headers: &csv::StringRecord) -> Result<()> {
    if headers.len() != 5 || headers.iter().zip(CONTACT_HEADER).any(|(a, b)| a != b) {
        bail!(
            "{}: header must be {}",
            path.display(),
            CONTACT_HEADER.join(",")
        );
    }
    Ok(())
}

/// Parses the contact stream against a known roster. Malformed rows become
/// `row_errors` (with line numbers) rather than aborting the scan; exact
/// duplicate events are dropped and counted.
pub fn read_contacts(path: &Path, roster: &Roster) -> Result<ContactsRead> {
    let mut rdr = open_reader(path)?;
    check_contact_header(path, rdr.headers()?)?;

    let mut events = Vec::new();
    let mut row_errors = Vec::new();
    let mut duplicates = 0usize;
    let mut seen: BTreeSet<(String, String, String, u64, u64)> = BTreeSet::new();
    for record in rdr.records() {
        let record = record?;
        let line = record_line(&record);
        if record.len() != 5 {
            row_errors.push((line, format!("expected 5 fields, found {}", record.len())));
            continue;
        }
        let sample = SampleId::new(&record[0]);
        let a = NodeId::new(&record[1]);
        let b = NodeId::new(&record[2]);
        let times: std::result::Result<Vec<u64>, _> =
            [&record[3], &record[4]].iter().map(|s| s.parse()).collect();
        let Ok(times) = times else {
            row_errors.push((
                line,
                format!(
                    "timestamps must be nonnegative integer seconds, got '{}','{}'",
                    &record[3], &record[4]
                ),
            ));
            continue;
        };
        let mut unknown = false;
        for id in [&a, &b] {
            match roster.index_of(id) {
                None => {
                    row_errors.push((line, format!("unknown node id '{id}'")));
                    unknown = true;
                }
                Some(idx) if roster.sample(idx) != &sample => {
                    row_errors.push((
                        line,
                        format!(
                            "node '{id}' belongs to sample '{}', not '{sample}'",
                            roster.sample(idx)
                        ),
                    ));
                    unknown = true;
                }
                Some(_) => {}
            }
        }
        if unknown {
            continue;
        }
        match ContactEvent::new(sample, a, b, times[0], times[1]) {
            Ok(event) => {
                let key = (
                    event.sample().to_string(),
                    event.a().to_string(),
                    event.b().to_string(),
                    event.start(),
                    event.end(),
                );
                if seen.insert(key) {
                    events.push(event);
                } else {
                    duplicates += 1;
                }
            }
            Err(e) => row_errors.push((line, e.to_string())),
        }
    }
    Ok(ContactsRead {
        events,
        row_errors,
        duplicates,
    })
}

/// Builds a roster from the contact stream itself (first-appearance order),
/// for running ingest without an attributes file.
pub fn roster_from_contacts(path: &Path) -> Result<Roster> {
    let mut rdr = open_reader(path)?;
    check_contact_header(path, rdr.headers()?)?;
    let mut roster = Roster::new();
    for record in rdr.records() {
        let record = record?;
        if record.len() != 5 {
            continue; // the event pass reports malformed rows
        }
        let sample = SampleId::new(&record[0]);
        for field in [&record[1], &record[2]] {
            if field.is_empty() {
                continue;
            }
            let node = NodeId::new(field);
            if let Some(idx) = roster.index_of(&node) {
                if roster.sample(idx) != &sample {
                    bail!(
                        "{}: line {}: node '{node}' appears in two samples",
                        path.display(),
                        record_line(&record)
                    );
                }
            } else {
                roster.insert(node, sample.clone())?;
            }
        }
    }
    Ok(roster)
}

// ---------------------------------------------------------------------------
// Nominations and respondents
// ---------------------------------------------------------------------------

/// Reads directed nominations (`sample_id,ego,alter`) as roster index pairs.
/// Unknown ids and sample mismatches are hard errors: a nomination against
/// an unknown node cannot be reconciled with the panel.
pub fn read_nominations(path: &Path, roster: &Roster) -> Result<Vec<(usize, usize)>> {
    let mut rdr = open_reader(path)?;
    let headers = rdr.headers()?.clone();
    if headers.len() != 3
        || &headers[0] != "sample_id"
        || &headers[1] != "ego"
        || &headers[2] != "alter"
    {
        bail!("{}: header must be sample_id,ego,alter", path.display());
    }
    let mut pairs = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record_line(&record);
        let sample = SampleId::new(&record[0]);
        let mut idx = [0usize; 2];
        for (k, field) in [&record[1], &record[2]].into_iter().enumerate() {
            let node = NodeId::new(field);
            let Some(i) = roster.index_of(&node) else {
                bail!("{}: line {line}: unknown node id '{node}'", path.display());
            };
            if roster.sample(i) != &sample {
                bail!(
                    "{}: line {line}: node '{node}' belongs to sample '{}', not '{sample}'",
                    path.display(),
                    roster.sample(i)
                );
            }
            idx[k] = i;
        }
        if idx[0] == idx[1] {
            bail!("{}: line {line}: self-nomination", path.display());
        }
        pairs.push((idx[0], idx[1]));
    }
    Ok(pairs)
}

/// Reads the respondents list (`sample_id,node_id`) as roster indices.
pub fn read_respondents(path: &Path, roster: &Roster) -> Result<Vec<usize>> {
    let mut rdr = open_reader(path)?;
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "sample_id" || &headers[1] != "node_id" {
        bail!("{}: header must be sample_id,node_id", path.display());
    }
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record_line(&record);
        let sample = SampleId::new(&record[0]);
        let node = NodeId::new(&record[1]);
        let Some(i) = roster.index_of(&node) else {
            bail!("{}: line {line}: unknown node id '{node}'", path.display());
        };
        if roster.sample(i) != &sample {
            bail!(
                "{}: line {line}: node '{node}' belongs to sample '{}', not '{sample}'",
                path.display(),
                roster.sample(i)
            );
        }
        out.push(i);
    }
    Ok(out)
}

/// Assembles the nomination network. Without a respondents list every node
/// counts as a respondent (all zeros are then true zeros); with one, a
/// nomination by a non-listed ego is an inconsistency error.
pub fn build_network(
    roster: &Roster,
    label: &str,
    nominations: &[(usize, usize)],
    respondents: Option<&[usize]>,
) -> Result<NominationNetwork> {
    let mut net = NominationNetwork::new(roster.len(), label);
    match respondents {
        Some(list) => {
            for &i in list {
                net.mark_respondent(i);
            }
            for &(ego, alter) in nominations {
                if !net.is_respondent(ego) {
                    bail!(
                        "node '{}' nominates but is not in the respondents list",
                        roster.node(ego)
                    );
                }
                net.add_nomination(ego, alter)?;
            }
        }
        None => {
            for i in 0..roster.len() {
                net.mark_respondent(i);
            }
            for &(ego, alter) in nominations {
                net.add_nomination(ego, alter)?;
            }
        }
    }
    Ok(net)
}

// ---------------------------------------------------------------------------
// Dyadic matrix round-trip
// ---------------------------------------------------------------------------

/// Writes a symmetric matrix as a square CSV: `node_id,sample_id` columns
/// followed by one column per node. Empty cells are masked; the diagonal is
/// always written empty. Values use the shortest round-trip decimal form.
pub fn write_matrix(
    path: &Path,
    matrix: &DyadicMatrix,
    roster: &Roster,
    provenance: &str,
) -> Result<()> {
    let n = roster.len();
    anyhow::ensure!(matrix.n() == n, "matrix size differs from roster size");
    anyhow::ensure!(matrix.is_symmetric(), "matrix files store symmetric matrices");
    let mut w = create_writer(path)?;
    writeln!(w, "{provenance}")?;
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["node_id".to_string(), "sample_id".to_string()];
    header.extend((0..n).map(|j| roster.node(j).to_string()));
    wtr.write_record(&header)?;
    for i in 0..n {
        let mut row = vec![roster.node(i).to_string(), roster.sample(i).to_string()];
        for j in 0..n {
            row.push(match matrix.get(i, j) {
                Some(v) => format!("{v}"),
                None => String::new(),
            });
        }
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a matrix file back into its own roster plus values.
pub fn read_matrix(path: &Path, label: &str) -> Result<(Roster, DyadicMatrix)> {
    let mut rdr = open_reader(path)?;
    let headers = rdr.headers()?.clone();
    if headers.len() < 3 || &headers[0] != "node_id" || &headers[1] != "sample_id" {
        bail!(
            "{}: header must be node_id,sample_id,<node ids>",
            path.display()
        );
    }
    let col_ids: Vec<String> = headers.iter().skip(2).map(str::to_string).collect();
    let n = col_ids.len();

    let mut roster = Roster::new();
    let mut cells: Vec<Vec<Option<f64>>> = Vec::with_capacity(n);
    for record in rdr.records() {
        let record = record?;
        let line = record_line(&record);
        if record.len() != n + 2 {
            bail!(
                "{}: line {line}: expected {} fields, found {}",
                path.display(),
                n + 2,
                record.len()
            );
        }
        let row_idx = cells.len();
        if row_idx >= n {
            bail!("{}: more rows than header columns", path.display());
        }
        if record[0] != *col_ids[row_idx] {
            bail!(
                "{}: line {line}: row order must match header order ('{}' vs '{}')",
                path.display(),
                &record[0],
                col_ids[row_idx]
            );
        }
        roster.insert(NodeId::new(&record[0]), SampleId::new(&record[1]))?;
        let mut row = Vec::with_capacity(n);
        for (j, cell) in record.iter().skip(2).enumerate() {
            if cell.is_empty() {
                row.push(None);
            } else {
                let v: f64 = cell.parse().with_context(|| {
                    format!("{}: line {line}: bad number '{cell}'", path.display())
                })?;
                if !v.is_finite() {
                    bail!("{}: line {line}: non-finite cell", path.display());
                }
                if j == row_idx {
                    bail!("{}: line {line}: diagonal cell must be empty", path.display());
                }
                row.push(Some(v));
            }
        }
        cells.push(row);
    }
    if cells.len() != n {
        bail!(
            "{}: {} data rows for {} header columns",
            path.display(),
            cells.len(),
            n
        );
    }

    let mut matrix = DyadicMatrix::masked(n, label);
    for i in 0..n {
        for j in i + 1..n {
            if cells[i][j] != cells[j][i] {
                bail!(
                    "{}: asymmetric cells for '{}'/'{}'",
                    path.display(),
                    col_ids[i],
                    col_ids[j]
                );
            }
            if let Some(v) = cells[i][j] {
                matrix.set(i, j, v);
            }
        }
    }
    Ok((roster, matrix))
}

/// Reorders a matrix read from disk onto the panel's roster. Both sides
/// must hold exactly the same nodes with the same sample assignment.
pub fn align_matrix(
    file_roster: &Roster,
    matrix: &DyadicMatrix,
    target: &Roster,
    label: &str,
) -> Result<DyadicMatrix> {
    anyhow::ensure!(
        file_roster.len() == target.len(),
        "matrix file covers {} nodes, the attribute table {}",
        file_roster.len(),
        target.len()
    );
    let mut map = Vec::with_capacity(target.len());
    for (idx, node, sample) in target.iter() {
        let Some(src) = file_roster.index_of(node) else {
            bail!("node '{node}' is missing from the matrix file");
        };
        if file_roster.sample(src) != sample {
            bail!(
                "node '{node}' is in sample '{}' in the matrix file but '{sample}' in the panel",
                file_roster.sample(src)
            );
        }
        debug_assert_eq!(idx, map.len());
        map.push(src);
    }
    let mut out = DyadicMatrix::masked(target.len(), label);
    for i in 0..target.len() {
        for j in i + 1..target.len() {
            if let Some(v) = matrix.get(map[i], map[j]) {
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Per-node exposure report; the ratio field is empty when the node has no
/// contact time at all.
pub fn write_exposure(
    path: &Path,
    exposures: &[NodeExposure],
    provenance: &str,
) -> Result<()> {
    let mut w = create_writer(path)?;
    writeln!(w, "{provenance}")?;
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "node_id",
        "seconds_dyadic",
        "seconds_group",
        "seconds_total",
        "ratio_dyadic",
    ])?;
    for e in exposures {
        wtr.write_record([
            e.node.to_string(),
            e.seconds_dyadic.to_string(),
            e.seconds_group.to_string(),
            e.seconds_total().to_string(),
            e.ratio_dyadic().map(fmt::fixed6).unwrap_or_default(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Co-presence segments with their connected components; members of each
/// component are joined by `|`, components by spaces.
pub fn write_segments(
    path: &Path,
    segments: &[CopresenceSegment],
    roster: &Roster,
    provenance: &str,
) -> Result<()> {
    let mut w = create_writer(path)?;
    writeln!(w, "{provenance}")?;
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["sample_id", "t_start", "t_end", "components"])?;
    for s in segments {
        let components = s
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&i| roster.node(i).to_string())
                    .collect::<Vec<_>>()
                    .join("|")
            })
            .collect::<Vec<_>>()
            .join(" ");
        wtr.write_record([
            s.sample.to_string(),
            s.start.to_string(),
            s.end.to_string(),
            components,
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

fn model_comment(fit: &QapFit) -> String {
    format!(
        "# model: r2={} adj_r2={} resid_skewness={} n_dyads={} candidate_dyads={} permutations={} seed={} failed_replicates={}",
        fmt::fixed6(fit.r_squared),
        fmt::fixed6(fit.adj_r_squared),
        fmt::fixed6(fit.resid_skewness),
        fit.n_dyads,
        fit.candidate_dyads,
        fit.permutations,
        fit.seed,
        fit.failed_replicates
    )
}

/// Results table: one row per term (intercept first), model summary as a
/// comment line.
pub fn write_results_csv(path: &Path, fit: &QapFit, provenance: &str) -> Result<()> {
    let mut w = create_writer(path)?;
    writeln!(w, "{provenance}")?;
    writeln!(w, "{}", model_comment(fit))?;
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "term",
        "estimate",
        "p_one",
        "p_two",
        "e_est",
        "pct_2_5",
        "pct_97_5",
    ])?;
    for t in &fit.terms {
        wtr.write_record([
            t.term.clone(),
            fmt::fixed6(t.estimate),
            fmt::fixed6(t.p_one),
            fmt::fixed6(t.p_two),
            fmt::fixed6(t.e_est),
            fmt::fixed6(t.pct_2_5),
            fmt::fixed6(t.pct_97_5),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// The same results as JSON, with the effective configuration under `meta`.
pub fn write_results_json(
    path: &Path,
    fit: &QapFit,
    meta: &[(&str, serde_json::Value)],
) -> Result<()> {
    let meta_obj: serde_json::Map<String, serde_json::Value> = meta
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    let doc = serde_json::json!({
        "tool": format!("dyadnet v{}", env!("CARGO_PKG_VERSION")),
        "meta": meta_obj,
        "model": {
            "r2": fit.r_squared,
            "adj_r2": fit.adj_r_squared,
            "resid_skewness": fit.resid_skewness,
            "n_dyads": fit.n_dyads,
            "candidate_dyads": fit.candidate_dyads,
            "permutations": fit.permutations,
            "seed": fit.seed,
            "failed_replicates": fit.failed_replicates,
        },
        "terms": fit.terms.iter().map(|t| serde_json::json!({
            "term": t.term,
            "estimate": t.estimate,
            "p_one": t.p_one,
            "p_two": t.p_two,
            "e_est": t.e_est,
            "pct_2_5": t.pct_2_5,
            "pct_97_5": t.pct_97_5,
        })).collect::<Vec<_>>(),
    });
    let mut w = create_writer(path)?;
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    Ok(())
}

/// Selection grid as CSV: first row and column carry the integer scores,
/// cells are fitted seconds per hour with four significant digits.
pub fn write_grid(path: &Path, grid: &SelectionGrid, provenance: &str) -> Result<()> {
    let mut w = create_writer(path)?;
    writeln!(w, "{provenance}")?;
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec![String::new()];
    header.extend(grid.scores().map(|v| v.to_string()));
    wtr.write_record(&header)?;
    for vi in grid.scores() {
        let mut row = vec![vi.to_string()];
        row.extend(grid.scores().map(|vj| fmt::significant(grid.cell(vi, vj), 4)));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Optional raster companion to the grid CSV: binary PPM, one pixel per
/// cell, yellow (low) to dark red (high).
pub fn write_grid_ppm(path: &Path, grid: &SelectionGrid) -> Result<()> {
    let side = grid.side();
    let scores: Vec<i64> = grid.scores().collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &vi in &scores {
        for &vj in &scores {
            let v = grid.cell(vi, vj);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut w = create_writer(path)?;
    write!(w, "P6\n{side} {side}\n255\n")?;
    const YELLOW: [f64; 3] = [255.0, 255.0, 0.0];
    const DARK_RED: [f64; 3] = [139.0, 0.0, 0.0];
    let mut pixels = Vec::with_capacity(side * side * 3);
    for &vi in &scores {
        for &vj in &scores {
            let t = (grid.cell(vi, vj) - lo) / span;
            for c in 0..3 {
                pixels.push((YELLOW[c] + t * (DARK_RED[c] - YELLOW[c])).round() as u8);
            }
        }
    }
    w.write_all(&pixels)?;
    Ok(())
}

/// Writes the synthetic panel back out in the attributes file format.
pub fn write_attributes(path: &Path, panel: &NodePanel, provenance: &str) -> Result<()> {
    let roster = panel.roster();
    let numeric: Vec<&str> = panel.numeric_names().collect();
    let categorical: Vec<&str> = panel.categorical_names().collect();
    let mut w = create_writer(path)?;
    writeln!(w, "{provenance}")?;
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["node_id", "sample_id"];
    header.extend(&numeric);
    header.extend(&categorical);
    wtr.write_record(&header)?;
    for (i, node, sample) in roster.iter() {
        let mut row = vec![node.to_string(), sample.to_string()];
        for name in &numeric {
            row.push(
                panel.numeric(name).expect("listed")[i]
                    .map(|v| format!("{v}"))
                    .unwrap_or_default(),
            );
        }
        for name in &categorical {
            row.push(
                panel.categorical(name).expect("listed")[i]
                    .clone()
                    .unwrap_or_default(),
            );
        }
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes directed nominations in the nominations file format.
pub fn write_nominations(
    path: &Path,
    network: &NominationNetwork,
    roster: &Roster,
    provenance: &str,
) -> Result<()> {
    let mut w = create_writer(path)?;
    writeln!(w, "{provenance}")?;
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["sample_id", "ego", "alter"])?;
    for (ego, alter) in network.ties() {
        wtr.write_record([
            roster.sample(ego).to_string(),
            roster.node(ego).to_string(),
            roster.node(alter).to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes the respondent list in the respondents file format.
pub fn write_respondents(
    path: &Path,
    network: &NominationNetwork,
    roster: &Roster,
    provenance: &str,
) -> Result<()> {
    let mut w = create_writer(path)?;
    writeln!(w, "{provenance}")?;
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["sample_id", "node_id"])?;
    for (i, node, sample) in roster.iter() {
        if network.is_respondent(i) {
            wtr.write_record([sample.to_string(), node.to_string()])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Writes a contact stream in the contacts file format.
pub fn write_contacts(path: &Path, events: &[ContactEvent], provenance: &str) -> Result<()> {
    let mut w = create_writer(path)?;
    writeln!(w, "{provenance}")?;
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(CONTACT_HEADER)?;
    for e in events {
        wtr.write_record([
            e.sample().to_string(),
            e.a().to_string(),
            e.b().to_string(),
            e.start().to_string(),
            e.end().to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Per-sample observation windows, derived or overridden, echoed for
/// provenance and reuse.
pub fn window_pairs(windows: &[(SampleId, u64)]) -> String {
    windows
        .iter()
        .map(|(s, w)| format!("{s}:{w}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub mod descriptives;
pub mod fit;
pub mod ingest;
pub mod selection;
pub mod synth;

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Result};
use clap::ValueEnum;
use dyadnet_core::contacts::{ContactEvent, GapPolicy, GroupRule};
use dyadnet_core::{NodePanel, Roster};

use crate::io::{self, ContactsRead};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GapPolicyArg {
    /// Count a merged event by its full first-start-to-last-end span.
    Span,
    /// Count only the seconds actually covered by its fragments.
    Covered,
}

impl From<GapPolicyArg> for GapPolicy {
    fn from(v: GapPolicyArg) -> GapPolicy {
        match v {
            GapPolicyArg::Span => GapPolicy::Span,
            GapPolicyArg::Covered => GapPolicy::Covered,
        }
    }
}

impl GapPolicyArg {
    pub fn name(self) -> &'static str {
        match self {
            GapPolicyArg::Span => "span",
            GapPolicyArg::Covered => "covered",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupRuleArg {
    /// A group is a connected co-presence component of three or more nodes.
    Components,
    /// A group additionally requires every member to sit in a triangle.
    Triangles,
}

impl From<GroupRuleArg> for GroupRule {
    fn from(v: GroupRuleArg) -> GroupRule {
        match v {
            GroupRuleArg::Components => GroupRule::Components,
            GroupRuleArg::Triangles => GroupRule::Triangles,
        }
    }
}

impl GroupRuleArg {
    pub fn name(self) -> &'static str {
        match self {
            GroupRuleArg::Components => "components",
            GroupRuleArg::Triangles => "triangles",
        }
    }
}

pub(crate) struct LoadedContacts {
    /// Present when an attributes file was given.
    pub panel: Option<NodePanel>,
    pub roster: Roster,
    pub events: Vec<ContactEvent>,
}

/// Loads the roster (from the attribute table when given, otherwise from the
/// contact stream itself) and then the contact events against it. Malformed
/// rows fail the command unless `skip_bad_rows` downgrades them to warnings.
pub(crate) fn load_contacts(
    contacts: &Path,
    attributes: Option<&Path>,
    skip_bad_rows: bool,
) -> Result<LoadedContacts> {
    let contacts = io::resolve(contacts);
    let panel = match attributes {
        Some(p) => Some(io::read_attributes(&io::resolve(p))?),
        None => None,
    };
    let roster = match &panel {
        Some(panel) => panel.roster().clone(),
        None => io::roster_from_contacts(&contacts)?,
    };
    let read = io::read_contacts(&contacts, &roster)?;
    report_row_errors(&contacts, &read, skip_bad_rows)?;
    Ok(LoadedContacts {
        panel,
        roster,
        events: read.events,
    })
}

fn report_row_errors(path: &Path, read: &ContactsRead, skip: bool) -> Result<()> {
    if read.duplicates > 0 {
        eprintln!(
            "warning: {}: dropped {} exact duplicate contact row(s)",
            path.display(),
            read.duplicates
        );
    }
    if read.row_errors.is_empty() {
        return Ok(());
    }
    if skip {
        for (line, msg) in &read.row_errors {
            eprintln!("warning: {}: line {line}: {msg} (row skipped)", path.display());
        }
        return Ok(());
    }
    let mut listing = String::new();
    for (line, msg) in read.row_errors.iter().take(20) {
        let _ = writeln!(listing, "  line {line}: {msg}");
    }
    if read.row_errors.len() > 20 {
        let _ = writeln!(listing, "  ... and {} more", read.row_errors.len() - 20);
    }
    bail!(
        "{}: {} malformed contact row(s) (pass --skip-bad-rows to tolerate):\n{listing}",
        path.display(),
        read.row_errors.len()
    );
}

//! Seeding a store from roster, co-authorship and floor plan files.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::{self, File};
use std::path::Path;

use atlas_core::graph::OfficeLocation;
use atlas_core::{NewPerson, PersonId};
use atlas_service::{Atlas, FloorPlan};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const COAUTHOR_LINK: &str = "coauthor";

/// One roster line. Blank optional cells read as absent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RosterRow {
    pub external_id: String,
    pub display_name: String,
    pub group: String,
    pub floor_id: Option<String>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub avatar_ref: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub a_external_id: String,
    pub b_external_id: String,
}

/// Floor plan manifest: `{"floors": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloorManifest {
    pub floors: Vec<FloorPlan>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ImportReport {
    pub created: usize,
    pub warnings: Vec<String>,
}

fn blank(cell: &Option<String>) -> bool {
    cell.as_deref().is_none_or(|s| s.trim().is_empty())
}

fn row_error(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Row {
        file: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads a CSV file into typed rows, keeping each row's line number.
fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<(u64, T)>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .deserialize(Some(&headers))
            .map_err(|e| row_error(path, line, e.to_string()))?;
        rows.push((line, row));
    }
    Ok(rows)
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let line = e.position().map(|p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        kind => {
            let message = format!("{kind:?}");
            match line {
                Some(line) => row_error(path, line, message),
                None => CliError::Invalid(format!("{}: {message}", path.display())),
            }
        }
    }
}

/// Checks one roster row and turns it into a person entry.
fn roster_entry(path: &Path, line: u64, row: RosterRow) -> Result<NewPerson, CliError> {
    if row.external_id.is_empty() {
        return Err(row_error(path, line, "external_id is empty"));
    }
    if row.display_name.is_empty() {
        return Err(row_error(path, line, "display_name is empty"));
    }
    let office = match (blank(&row.floor_id), row.x, row.y) {
        (true, None, None) => None,
        (false, Some(x), Some(y)) => Some(OfficeLocation {
            floor_id: row.floor_id.unwrap_or_default().trim().to_string(),
            x,
            y,
        }),
        _ => return Err(row_error(path, line, "floor_id, x and y must be given together or not at all")),
    };
    Ok(NewPerson {
        display_name: row.display_name,
        group: row.group,
        avatar_ref: row.avatar_ref.filter(|s| !s.trim().is_empty()),
        office,
        external_id: Some(row.external_id),
    })
}

/// Imports a roster file. Rows repeating an external id already seen (in the
/// file or the store) are skipped with a warning; any invalid row aborts the
/// whole import.
pub fn import_roster(atlas: &Atlas, path: &Path) -> Result<ImportReport, CliError> {
    let rows: Vec<(u64, RosterRow)> = read_rows(path)?;
    let mut seen: HashSet<String> = atlas
        .state()
        .graph
        .people()
        .filter_map(|p| p.external_id.clone())
        .collect();
    let mut report = ImportReport::default();
    let mut entries = Vec::new();
    for (line, row) in rows {
        let entry = roster_entry(path, line, row)?;
        let ext = entry.external_id.clone().unwrap_or_default();
        if !seen.insert(ext.clone()) {
            report
                .warnings
                .push(format!("{}:{line}: duplicate external_id {ext:?}, row skipped", path.display()));
            continue;
        }
        entries.push(entry);
    }
    let (ids, cleared) = atlas.import_people(entries)?;
    report.created = ids.len();
    report.warnings.extend(cleared_warnings(atlas, &cleared));
    Ok(report)
}

fn cleared_warnings(atlas: &Atlas, cleared: &[PersonId]) -> Vec<String> {
    let state = atlas.state();
    cleared
        .iter()
        .map(|&id| {
            let name = state.graph.person(id).map_or("?", |p| p.display_name.as_str());
            format!("{name} (id {id}): office is not on a known floor, cleared")
        })
        .collect()
}

/// Imports co-authorship pairs as system links, both ends unconfirmed.
/// Pairs already linked (in the store or earlier in the file) are skipped.
pub fn import_edges(atlas: &Atlas, path: &Path) -> Result<ImportReport, CliError> {
    let rows: Vec<(u64, EdgeRow)> = read_rows(path)?;
    let state = atlas.state();
    let by_external: HashMap<&str, PersonId> = state
        .graph
        .people()
        .filter_map(|p| p.external_id.as_deref().map(|e| (e, p.id)))
        .collect();
    let resolve = |line: u64, ext: &str| {
        by_external
            .get(ext)
            .copied()
            .ok_or_else(|| row_error(path, line, format!("unknown external_id {ext:?}")))
    };
    let mut report = ImportReport::default();
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, row) in rows {
        let a = resolve(line, &row.a_external_id)?;
        let b = resolve(line, &row.b_external_id)?;
        if a == b {
            return Err(row_error(path, line, format!("{:?} paired with itself", row.a_external_id)));
        }
        let key = (a.min(b), a.max(b));
        if state.graph.link_between(a, b).is_some() || !seen.insert(key) {
            report.warnings.push(format!(
                "{}:{line}: duplicate pair {:?}-{:?}, skipped",
                path.display(),
                row.a_external_id,
                row.b_external_id
            ));
            continue;
        }
        pairs.push((a, b));
    }
    report.created = atlas.import_links(&pairs, COAUTHOR_LINK)?.len();
    Ok(report)
}

/// Stores the floors of a manifest. People whose office no longer fits a
/// floor have it cleared, with a warning each.
pub fn import_floors(atlas: &Atlas, path: &Path) -> Result<ImportReport, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let manifest: FloorManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let mut ids = HashSet::new();
    for f in &manifest.floors {
        if !ids.insert(f.floor_id.as_str()) {
            return Err(CliError::Invalid(format!(
                "{}: floor {:?} listed twice",
                path.display(),
                f.floor_id
            )));
        }
    }
    let result = atlas.import_floors(manifest.floors)?;
    Ok(ImportReport {
        created: result.floors,
        warnings: cleared_warnings(atlas, &result.cleared),
    })
}

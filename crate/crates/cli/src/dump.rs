//! Writing the store back out in the import formats.

use std::collections::HashMap;
use std::fs::{self, File};
use std::path::Path;

use atlas_core::{AtlasGraph, Person, PersonId};

use crate::error::CliError;
use crate::import::{EdgeRow, RosterRow};

pub const ROSTER_FILE: &str = "roster.csv";
pub const EDGES_FILE: &str = "edges.csv";

/// External id used in dumps; people entered by hand get `#<id>`.
pub fn external_key(person: &Person) -> String {
    person.external_id.clone().unwrap_or_else(|| format!("#{}", person.id))
}

pub fn roster_rows(graph: &AtlasGraph) -> Vec<RosterRow> {
    canonical_roster(
        graph
            .people()
            .map(|p| RosterRow {
                external_id: external_key(p),
                display_name: p.display_name.clone(),
                group: p.group.clone(),
                floor_id: p.office.as_ref().map(|o| o.floor_id.clone()),
                x: p.office.as_ref().map(|o| o.x),
                y: p.office.as_ref().map(|o| o.y),
                avatar_ref: p.avatar_ref.clone(),
            })
            .collect(),
    )
}

/// Every live link as an external id pair.
pub fn edge_rows(graph: &AtlasGraph) -> Vec<EdgeRow> {
    let keys: HashMap<PersonId, String> = graph.people().map(|p| (p.id, external_key(p))).collect();
    canonical_edges(
        graph
            .links()
            .map(|l| EdgeRow {
                a_external_id: keys[&l.a].clone(),
                b_external_id: keys[&l.b].clone(),
            })
            .collect(),
    )
}

/// Sorted by external id, blank optional cells as absent.
pub fn canonical_roster(mut rows: Vec<RosterRow>) -> Vec<RosterRow> {
    for r in &mut rows {
        for cell in [&mut r.floor_id, &mut r.avatar_ref] {
            if cell.as_deref().is_some_and(|s| s.trim().is_empty()) {
                *cell = None;
            }
        }
    }
    rows.sort_by(|a, b| a.external_id.cmp(&b.external_id));
    rows
}

/// Each pair ordered, duplicates dropped, sorted.
pub fn canonical_edges(rows: Vec<EdgeRow>) -> Vec<EdgeRow> {
    let mut pairs: Vec<(String, String)> = rows
        .into_iter()
        .map(|r| {
            if r.a_external_id <= r.b_external_id {
                (r.a_external_id, r.b_external_id)
            } else {
                (r.b_external_id, r.a_external_id)
            }
        })
        .collect();
    pairs.sort();
    pairs.dedup();
    pairs
        .into_iter()
        .map(|(a_external_id, b_external_id)| EdgeRow {
            a_external_id,
            b_external_id,
        })
        .collect()
}

fn write_csv<T: serde::Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    let fail = |e: csv::Error| CliError::io(path, std::io::Error::other(e));
    writer.write_record(header).map_err(fail)?;
    for row in rows {
        writer.serialize(row).map_err(fail)?;
    }
    writer.flush().map_err(|e| CliError::io(path, e))
}

/// Writes `roster.csv` and `edges.csv` into `dir`.
pub fn dump(graph: &AtlasGraph, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    write_csv(
        &dir.join(ROSTER_FILE),
        &roster_rows(graph),
        &["external_id", "display_name", "group", "floor_id", "x", "y", "avatar_ref"],
    )?;
    write_csv(&dir.join(EDGES_FILE), &edge_rows(graph), &["a_external_id", "b_external_id"])
}

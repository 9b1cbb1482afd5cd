//! On-disk persistence: a newline-delimited JSON log plus a periodic snapshot.
//!
//! The log is never rewritten. A snapshot records the state after log record
//! `seq`; restoring loads it and replays the records after it.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::AtlasError;
use crate::events::LogRecord;
use crate::state::State;

pub const LOG_FILE: &str = "events.ndjson";
pub const SNAPSHOT_FILE: &str = "snapshot.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLine {
    pub seq: u64,
    pub entry: LogRecord,
}

#[derive(Serialize, Deserialize)]
pub struct Snapshot {
    pub seq: u64,
    pub state: State,
}

/// Appends records durably to the log file of a store directory.
#[derive(Debug)]
pub struct LogWriter {
    file: File,
    sync: bool,
}

impl LogWriter {
    pub fn open(dir: &Path, sync: bool) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let file = OpenOptions::new().create(true).append(true).open(dir.join(LOG_FILE))?;
        Ok(LogWriter { file, sync })
    }

    /// Writes all lines with one write call, then flushes them to disk.
    pub fn append(&mut self, lines: &[LogLine]) -> io::Result<()> {
        let mut buf = Vec::new();
        for line in lines {
            serde_json::to_writer(&mut buf, line).map_err(io::Error::other)?;
            buf.push(b'\n');
        }
        self.file.write_all(&buf)?;
        if self.sync {
            self.file.sync_data()?;
        }
        Ok(())
    }
}

/// Parses a whole log, checking that sequence numbers run 1, 2, 3, ...
///
/// A final line without its newline is reported as a truncated record.
pub fn parse_log(bytes: &[u8]) -> Result<Vec<LogLine>, AtlasError> {
    let mut out = Vec::new();
    let mut offset = 0usize;
    while offset < bytes.len() {
        let rest = &bytes[offset..];
        let Some(len) = rest.iter().position(|&b| b == b'\n') else {
            return Err(AtlasError::CorruptLog {
                offset: offset as u64,
                reason: format!("truncated record ({} bytes without newline)", rest.len()),
            });
        };
        let raw = &rest[..len];
        if !raw.iter().all(u8::is_ascii_whitespace) {
            let line: LogLine = serde_json::from_slice(raw).map_err(|e| AtlasError::CorruptLog {
                offset: offset as u64,
                reason: e.to_string(),
            })?;
            let expected = out.len() as u64 + 1;
            if line.seq != expected {
                return Err(AtlasError::CorruptLog {
                    offset: offset as u64,
                    reason: format!("sequence number {} where {expected} was expected", line.seq),
                });
            }
            out.push(line);
        }
        offset += len + 1;
    }
    Ok(out)
}

pub fn read_log(dir: &Path) -> Result<Vec<LogLine>, AtlasError> {
    match fs::read(dir.join(LOG_FILE)) {
        Ok(bytes) => parse_log(&bytes),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(e) => Err(e.into()),
    }
}

pub fn read_snapshot(dir: &Path) -> Result<Option<Snapshot>, AtlasError> {
    match fs::read(dir.join(SNAPSHOT_FILE)) {
        Ok(bytes) => serde_json::from_slice(&bytes)
            .map(Some)
            .map_err(|e| AtlasError::CorruptSnapshot(e.to_string())),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Replaces the snapshot atomically (write to a temporary file, then rename).
pub fn write_snapshot(dir: &Path, seq: u64, state: &State) -> Result<(), AtlasError> {
    #[derive(Serialize)]
    struct SnapshotRef<'a> {
        seq: u64,
        state: &'a State,
    }
    let tmp: PathBuf = dir.join(format!("{SNAPSHOT_FILE}.tmp"));
    let bytes = serde_json::to_vec(&SnapshotRef { seq, state }).map_err(io::Error::other)?;
    {
        let mut f = File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, dir.join(SNAPSHOT_FILE))?;
    Ok(())
}

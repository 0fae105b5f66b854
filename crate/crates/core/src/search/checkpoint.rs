//! Append-only search checkpoint: header `trinoforge-ckpt 1 r=<r>`, then
//! one line per decided s (`<s> P`, `<s> R <d>`, `<s> W`), appended in
//! completion order and flushed per line so a crash loses at most the
//! line being written. A torn or corrupt trailing line is dropped with a
//! warning on reload; corruption anywhere else is an error.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: &str = "trinoforge-ckpt";
pub const CHECKPOINT_VERSION: u64 = 1;

/// Decided status of one s.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SStatus {
    Primitive,
    Reducible { d: u64 },
    RuledOut,
}

impl SStatus {
    fn encode(&self, s: u64) -> String {
        match self {
            SStatus::Primitive => format!("{s} P"),
            SStatus::Reducible { d } => format!("{s} R {d}"),
            SStatus::RuledOut => format!("{s} W"),
        }
    }

    fn decode(line: &str) -> Option<(u64, SStatus)> {
        let mut fields = line.split(' ');
        let s: u64 = fields.next()?.parse().ok()?;
        let status = match (fields.next()?, fields.next()) {
            ("P", None) => SStatus::Primitive,
            ("W", None) => SStatus::RuledOut,
            ("R", Some(d)) => SStatus::Reducible {
                d: d.parse().ok()?,
            },
            _ => return None,
        };
        if matches!(status, SStatus::Reducible { .. }) && fields.next().is_some() {
            return None;
        }
        Some((s, status))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StatusCounts {
    pub primitive: u64,
    pub reducible: u64,
    pub ruled_out: u64,
}

impl StatusCounts {
    pub fn total(&self) -> u64 {
        self.primitive + self.reducible + self.ruled_out
    }
}

/// Per-s progress ledger for one degree r. Statuses only accumulate;
/// recording a conflicting status for an already-decided s is an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchCheckpoint {
    r: u64,
    statuses: BTreeMap<u64, SStatus>,
}

impl SearchCheckpoint {
    pub fn new(r: u64) -> SearchCheckpoint {
        SearchCheckpoint {
            r,
            statuses: BTreeMap::new(),
        }
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn get(&self, s: u64) -> Option<SStatus> {
        self.statuses.get(&s).copied()
    }

    pub fn decided(&self) -> u64 {
        self.statuses.len() as u64
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, SStatus)> + '_ {
        self.statuses.iter().map(|(&s, &st)| (s, st))
    }

    /// Every s with status P, ascending.
    pub fn primitives(&self) -> Vec<u64> {
        self.statuses
            .iter()
            .filter(|(_, st)| matches!(st, SStatus::Primitive))
            .map(|(&s, _)| s)
            .collect()
    }

    pub fn counts(&self) -> StatusCounts {
        let mut c = StatusCounts::default();
        for st in self.statuses.values() {
            match st {
                SStatus::Primitive => c.primitive += 1,
                SStatus::Reducible { .. } => c.reducible += 1,
                SStatus::RuledOut => c.ruled_out += 1,
            }
        }
        c
    }

    /// True once every s in [1, r/2] is decided.
    pub fn is_complete(&self) -> bool {
        self.decided() == self.r / 2
    }

    pub fn record(&mut self, s: u64, status: SStatus) -> Result<()> {
        if s == 0 || 2 * s > self.r {
            return Err(Error::Checkpoint(format!(
                "s = {s} outside [1, {}]",
                self.r / 2
            )));
        }
        match self.statuses.insert(s, status) {
            None => Ok(()),
            Some(prev) if prev == status => Ok(()),
            Some(prev) => Err(Error::Checkpoint(format!(
                "conflicting status for s = {s}: had {prev:?}, got {status:?}"
            ))),
        }
    }
}

fn header(r: u64) -> String {
    format!("{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION} r={r}")
}

fn parse_header(line: &str) -> Result<u64> {
    let bad = |msg: &str| Error::Checkpoint(format!("bad header {line:?}: {msg}"));
    let mut fields = line.split(' ');
    if fields.next() != Some(CHECKPOINT_MAGIC) {
        return Err(bad("wrong magic"));
    }
    let version: u64 = fields
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad("missing version"))?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::Checkpoint(format!(
            "version mismatch: file has {version}, this build reads {CHECKPOINT_VERSION}"
        )));
    }
    let r = fields
        .next()
        .and_then(|f| f.strip_prefix("r="))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad("missing r"))?;
    if fields.next().is_some() {
        return Err(bad("trailing fields"));
    }
    Ok(r)
}

/// Reload a checkpoint file. The final line is treated leniently (torn
/// writes happen); anything else malformed is corruption.
pub fn read_checkpoint(path: &Path) -> Result<SearchCheckpoint> {
    let content = std::fs::read_to_string(path)?;
    let mut lines: Vec<&str> = content.split('\n').collect();
    // split leaves one empty tail element when the file ends in '\n'
    let clean_tail = lines.last() == Some(&"");
    if clean_tail {
        lines.pop();
    }
    if lines.is_empty() {
        return Err(Error::Checkpoint("empty checkpoint file".into()));
    }
    if !clean_tail && lines.len() == 1 {
        return Err(Error::Checkpoint("torn header".into()));
    }
    let r = parse_header(lines[0])?;
    let mut ckpt = SearchCheckpoint::new(r);
    let last = lines.len() - 1;
    for (idx, line) in lines.iter().enumerate().skip(1) {
        match SStatus::decode(line) {
            Some((s, status)) => ckpt.record(s, status)?,
            None if idx == last => {
                log::warn!(
                    "checkpoint {}: dropping torn trailing line {:?}",
                    path.display(),
                    line
                );
            }
            None => {
                return Err(Error::Checkpoint(format!(
                    "corrupt line {} in {}: {line:?}",
                    idx + 1,
                    path.display()
                )))
            }
        }
    }
    Ok(ckpt)
}

/// Appends status lines, flushing each one.
pub struct CheckpointWriter {
    file: File,
}

impl CheckpointWriter {
    /// Open for appending, writing the header first when the file is new.
    /// `expected_r` guards against resuming the wrong search.
    pub fn open(path: &Path, expected_r: u64) -> Result<(CheckpointWriter, SearchCheckpoint)> {
        let state = if path.exists() {
            let state = read_checkpoint(path)?;
            if state.r() != expected_r {
                return Err(Error::CheckpointMismatch {
                    found: state.r(),
                    wanted: expected_r,
                });
            }
            state
        } else {
            let mut file = File::create(path)?;
            writeln!(file, "{}", header(expected_r))?;
            file.sync_data()?;
            SearchCheckpoint::new(expected_r)
        };
        let file = OpenOptions::new().append(true).open(path)?;
        Ok((CheckpointWriter { file }, state))
    }

    pub fn append(&mut self, s: u64, status: SStatus) -> Result<()> {
        writeln!(self.file, "{}", status.encode(s))?;
        self.file.flush()?;
        Ok(())
    }
}

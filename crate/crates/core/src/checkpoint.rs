//! Line-oriented JSON checkpoints.
//!
//! A checkpoint file is a sequence of flush groups. Each group is one or
//! more record lines followed by a checksum line holding the SHA-256 of the
//! group's record lines joined by `\n`. The first group carries the header.
//!
//! ```text
//! {"type":"header",...}
//! {"type":"checksum","sha256":"…","records":1}
//! {"type":"chunk",...}
//! {"type":"checksum","sha256":"…","records":1}
//! ```

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::harness::{CampaignKind, ChunkRecord, MethodMode};

pub const CHECKPOINT_VERSION: u32 = 1;

/// Identifies the campaign a checkpoint belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub version: u32,
    pub kind: CampaignKind,
    pub start_index: u64,
    pub count: u64,
    pub mode: MethodMode,
    pub chain: bool,
    pub checkpoint_every: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Line {
    Header(CheckpointHeader),
    Chunk(ChunkRecord),
    Checksum { sha256: String, records: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub header: CheckpointHeader,
    pub chunks: Vec<ChunkRecord>,
}

fn digest(lines: &[&str]) -> String {
    let mut h = Sha256::new();
    for (i, l) in lines.iter().enumerate() {
        if i > 0 {
            h.update(b"\n");
        }
        h.update(l.as_bytes());
    }
    hex::encode(h.finalize())
}

fn corrupt(line: usize, reason: impl Into<String>) -> Error {
    Error::CorruptCheckpoint {
        line,
        reason: reason.into(),
    }
}

impl Checkpoint {
    /// Parses and verifies checkpoint text. Returns `None` for empty input.
    pub fn parse(text: &str) -> Result<Option<Checkpoint>> {
        let mut header: Option<CheckpointHeader> = None;
        let mut chunks = Vec::new();
        let mut pending: Vec<(usize, &str, Line)> = Vec::new();
        let mut last_line = 0;

        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            last_line = line_no;
            if raw.trim().is_empty() {
                return Err(corrupt(line_no, "blank line"));
            }
            let parsed: Line =
                serde_json::from_str(raw).map_err(|e| corrupt(line_no, e.to_string()))?;
            match parsed {
                Line::Checksum { sha256, records } => {
                    if pending.is_empty() || records != pending.len() {
                        return Err(corrupt(
                            line_no,
                            format!(
                                "checksum covers {records} records, group has {}",
                                pending.len()
                            ),
                        ));
                    }
                    let bodies: Vec<&str> = pending.iter().map(|(_, s, _)| *s).collect();
                    if digest(&bodies) != sha256 {
                        return Err(corrupt(line_no, "checksum mismatch"));
                    }
                    for (at, _, rec) in pending.drain(..) {
                        match rec {
                            Line::Header(h) => {
                                if header.is_some() || at != 1 {
                                    return Err(corrupt(at, "header must be the first line"));
                                }
                                if h.version != CHECKPOINT_VERSION {
                                    return Err(corrupt(
                                        at,
                                        format!("unsupported version {}", h.version),
                                    ));
                                }
                                header = Some(h);
                            }
                            Line::Chunk(c) => {
                                if header.is_none() {
                                    return Err(corrupt(at, "chunk before header"));
                                }
                                chunks.push(c);
                            }
                            Line::Checksum { .. } => unreachable!(),
                        }
                    }
                }
                other => pending.push((line_no, raw, other)),
            }
        }
        if let Some((at, _, _)) = pending.first() {
            return Err(corrupt(*at, "records without a trailing checksum"));
        }
        match header {
            Some(header) => Ok(Some(Checkpoint { header, chunks })),
            None if last_line == 0 => Ok(None),
            None => Err(corrupt(1, "missing header")),
        }
    }

    pub fn load(path: &Path) -> Result<Option<Checkpoint>> {
        match std::fs::read_to_string(path) {
            Ok(text) => Checkpoint::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

/// Appends flush groups to a checkpoint file.
#[derive(Debug)]
pub struct CheckpointWriter {
    path: PathBuf,
    file: File,
}

impl CheckpointWriter {
    /// Opens for appending; writes the header group when the file is new or empty.
    pub fn open(path: &Path, header: &CheckpointHeader) -> Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let fresh = file.metadata()?.len() == 0;
        let mut w = CheckpointWriter {
            path: path.to_path_buf(),
            file,
        };
        if fresh {
            w.flush_group(&[Line::Header(header.clone())])?;
        }
        Ok(w)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append_chunk(&mut self, chunk: &ChunkRecord) -> Result<()> {
        self.flush_group(&[Line::Chunk(chunk.clone())])
    }

    fn flush_group(&mut self, records: &[Line]) -> Result<()> {
        let bodies = records
            .iter()
            .map(serde_json::to_string)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let refs: Vec<&str> = bodies.iter().map(String::as_str).collect();
        let sum = Line::Checksum {
            sha256: digest(&refs),
            records: bodies.len(),
        };
        let mut out = BufWriter::new(&mut self.file);
        for b in &bodies {
            writeln!(out, "{b}")?;
        }
        writeln!(out, "{}", serde_json::to_string(&sum)?)?;
        out.flush()?;
        drop(out);
        self.file.sync_data()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> CheckpointHeader {
        CheckpointHeader {
            version: CHECKPOINT_VERSION,
            kind: CampaignKind::NextPrime,
            start_index: 3,
            count: 10,
            mode: MethodMode::Faithful,
            chain: false,
            checkpoint_every: 5,
        }
    }

    fn chunk(first: u64) -> ChunkRecord {
        ChunkRecord {
            first_index: first,
            count: 5,
            ..Default::default()
        }
    }

    fn write_sample(dir: &Path) -> PathBuf {
        let path = dir.join("ck.jsonl");
        let mut w = CheckpointWriter::open(&path, &header()).unwrap();
        w.append_chunk(&chunk(3)).unwrap();
        w.append_chunk(&chunk(8)).unwrap();
        path
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_sample(dir.path());
        let ck = Checkpoint::load(&path).unwrap().unwrap();
        assert_eq!(ck.header, header());
        assert_eq!(ck.chunks, vec![chunk(3), chunk(8)]);
        // reopening does not duplicate the header
        CheckpointWriter::open(&path, &header()).unwrap();
        assert_eq!(Checkpoint::load(&path).unwrap().unwrap().chunks.len(), 2);
    }

    #[test]
    fn empty_and_missing_are_clean() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(Checkpoint::load(&dir.path().join("nope")).unwrap(), None);
        assert_eq!(Checkpoint::parse("").unwrap(), None);
    }

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_sample(dir.path());
        let text = std::fs::read_to_string(&path).unwrap();

        let flipped = text.replacen("\"first_index\":8", "\"first_index\":9", 1);
        assert!(matches!(
            Checkpoint::parse(&flipped),
            Err(Error::CorruptCheckpoint { line: 6, .. })
        ));

        let truncated: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            Checkpoint::parse(&truncated),
            Err(Error::CorruptCheckpoint { line: 5, .. })
        ));

        let garbage = format!("{text}not json\n");
        assert!(matches!(
            Checkpoint::parse(&garbage),
            Err(Error::CorruptCheckpoint { .. })
        ));

        let headless: String = text.lines().skip(2).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            Checkpoint::parse(&headless),
            Err(Error::CorruptCheckpoint { .. })
        ));
    }
}

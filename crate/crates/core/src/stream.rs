//! Edge updates, batches and the update-stream text format.
//!
//! An update stream is a sequence of lines `('+'|'-') u v [ts]`. Missing
//! timestamps default to the line's position among update lines.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UpdateKind {
    Insert,
    Delete,
}

impl UpdateKind {
    pub fn sign(self) -> char {
        match self {
            UpdateKind::Insert => '+',
            UpdateKind::Delete => '-',
        }
    }
}

/// A timestamped insertion or deletion of one undirected edge.
///
/// Endpoints are always stored canonically (`u < v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeUpdate {
    u: VertexId,
    v: VertexId,
    pub kind: UpdateKind,
    pub timestamp: u64,
}

impl EdgeUpdate {
    pub fn new(u: VertexId, v: VertexId, kind: UpdateKind, timestamp: u64) -> Result<Self> {
        if u == v {
            return Err(Error::Parameter(format!("self-loop on vertex {u}")));
        }
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        Ok(Self {
            u,
            v,
            kind,
            timestamp,
        })
    }

    /// Panics on a self-loop; for tests and generators that already exclude them.
    pub fn insert(u: VertexId, v: VertexId, timestamp: u64) -> Self {
        Self::new(u, v, UpdateKind::Insert, timestamp).expect("self-loop")
    }

    pub fn delete(u: VertexId, v: VertexId, timestamp: u64) -> Self {
        Self::new(u, v, UpdateKind::Delete, timestamp).expect("self-loop")
    }

    pub fn u(&self) -> VertexId {
        self.u
    }

    pub fn v(&self) -> VertexId {
        self.v
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey::new(self.u, self.v)
    }

    pub fn is_insert(&self) -> bool {
        self.kind == UpdateKind::Insert
    }
}

impl fmt::Display for EdgeUpdate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.kind.sign(),
            self.u,
            self.v,
            self.timestamp
        )
    }
}

/// An ordered collection of updates applied together.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Batch {
    updates: Vec<EdgeUpdate>,
}

impl Batch {
    pub fn new(updates: Vec<EdgeUpdate>) -> Self {
        Self { updates }
    }

    pub fn updates(&self) -> &[EdgeUpdate] {
        &self.updates
    }

    pub fn into_updates(self) -> Vec<EdgeUpdate> {
        self.updates
    }

    pub fn len(&self) -> usize {
        self.updates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.updates.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EdgeUpdate> {
        self.updates.iter()
    }

    /// Splits into (insertions, deletions), preserving order.
    pub fn split(&self) -> (Vec<EdgeUpdate>, Vec<EdgeUpdate>) {
        self.updates.iter().partition(|u| u.is_insert())
    }

    /// Fails if two updates share a canonical edge key.
    pub fn ensure_normalized(&self) -> Result<()> {
        let mut keys: Vec<EdgeKey> = self.updates.iter().map(EdgeUpdate::key).collect();
        keys.par_sort_unstable();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Contract(format!(
                "batch not normalized: edge {} appears more than once",
                w[0]
            )));
        }
        Ok(())
    }
}

impl From<Vec<EdgeUpdate>> for Batch {
    fn from(updates: Vec<EdgeUpdate>) -> Self {
        Self::new(updates)
    }
}

impl<'a> IntoIterator for &'a Batch {
    type Item = &'a EdgeUpdate;
    type IntoIter = std::slice::Iter<'a, EdgeUpdate>;

    fn into_iter(self) -> Self::IntoIter {
        self.updates.iter()
    }
}

/// Keeps only the chronologically last update per edge; survivors are
/// returned in timestamp order. Ties on the timestamp go to the later
/// position in the input.
pub fn normalize_batch(batch: &Batch) -> Batch {
    let mut indexed: Vec<(EdgeKey, u64, usize)> = batch
        .updates
        .iter()
        .enumerate()
        .map(|(i, u)| (u.key(), u.timestamp, i))
        .collect();
    indexed.par_sort_unstable();

    let mut survivors: Vec<(u64, usize)> = Vec::with_capacity(indexed.len());
    for (i, entry) in indexed.iter().enumerate() {
        let last_of_key = indexed.get(i + 1).is_none_or(|next| next.0 != entry.0);
        if last_of_key {
            survivors.push((entry.1, entry.2));
        }
    }
    survivors.par_sort_unstable();
    Batch::new(
        survivors
            .into_iter()
            .map(|(_, i)| batch.updates[i])
            .collect(),
    )
}

/// Parses `('+'|'-') u v [ts]` lines. Blank lines and `#` comments are skipped.
pub fn parse_update_stream(text: &str) -> Result<Vec<EdgeUpdate>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = lineno + 1;
        let mut fields = line.split_whitespace();
        let kind = match fields.next() {
            Some("+") => UpdateKind::Insert,
            Some("-") => UpdateKind::Delete,
            Some(other) => {
                return Err(Error::parse(
                    lineno,
                    format!("unknown update sign '{other}'"),
                ))
            }
            None => unreachable!(),
        };
        let mut next_int = |what: &str| -> Result<Option<u64>> {
            match fields.next() {
                None => Ok(None),
                Some(tok) => tok
                    .parse::<u64>()
                    .map(Some)
                    .map_err(|_| Error::parse(lineno, format!("bad {what} '{tok}'"))),
            }
        };
        let u = next_int("vertex")?.ok_or_else(|| Error::parse(lineno, "missing vertex"))?;
        let v = next_int("vertex")?.ok_or_else(|| Error::parse(lineno, "missing vertex"))?;
        let ts = next_int("timestamp")?.unwrap_or(out.len() as u64);
        if fields.next().is_some() {
            return Err(Error::parse(lineno, "trailing fields"));
        }
        let u = to_vertex(u, lineno)?;
        let v = to_vertex(v, lineno)?;
        let update = EdgeUpdate::new(u, v, kind, ts)
            .map_err(|_| Error::parse(lineno, format!("self-loop on vertex {u}")))?;
        out.push(update);
    }
    Ok(out)
}

pub(crate) fn to_vertex(raw: u64, line: usize) -> Result<VertexId> {
    VertexId::try_from(raw)
        .ok()
        .filter(|&v| v < VertexId::MAX)
        .ok_or_else(|| Error::parse(line, format!("vertex id {raw} out of range")))
}

pub fn write_update_stream<W: Write>(mut out: W, updates: &[EdgeUpdate]) -> io::Result<()> {
    for u in updates {
        writeln!(out, "{u}")?;
    }
    out.flush()
}

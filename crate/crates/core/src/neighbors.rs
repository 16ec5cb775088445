//! Per-vertex neighbor containers with a per-edge state mark.
//!
//! Small neighborhoods live in an unsorted flat array. Once a vertex reaches
//! [`FLAT_LIMIT`] neighbors the container switches to an open-addressing
//! table with linear probing and tombstone deletion.

use crate::graph::VertexId;

pub const FLAT_LIMIT: usize = 128;
const SHRINK_TO_FLAT: usize = FLAT_LIMIT / 2;

const EMPTY: VertexId = VertexId::MAX;
const TOMBSTONE: VertexId = VertexId::MAX - 1;

/// Mark carried by an edge while a batch is being applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum EdgeState {
    Old = 0,
    Inserted = 1,
    Deleted = 2,
}

#[derive(Debug, Clone)]
pub enum NeighborTable {
    Flat(Vec<(VertexId, EdgeState)>),
    Hashed(OpenTable),
}

impl Default for NeighborTable {
    fn default() -> Self {
        NeighborTable::Flat(Vec::new())
    }
}

impl NeighborTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from neighbors known to be distinct.
    pub fn from_distinct(neighbors: &[VertexId], state: EdgeState) -> Self {
        if neighbors.len() < FLAT_LIMIT {
            return NeighborTable::Flat(neighbors.iter().map(|&v| (v, state)).collect());
        }
        let mut t = OpenTable::with_capacity(neighbors.len() * 4);
        for &v in neighbors {
            t.insert(v, state);
        }
        NeighborTable::Hashed(t)
    }

    pub fn len(&self) -> usize {
        match self {
            NeighborTable::Flat(v) => v.len(),
            NeighborTable::Hashed(t) => t.len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, v: VertexId) -> Option<EdgeState> {
        match self {
            NeighborTable::Flat(items) => items.iter().find(|e| e.0 == v).map(|e| e.1),
            NeighborTable::Hashed(t) => t.find(v).map(|i| t.slots[i].1),
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.get(v).is_some()
    }

    /// Inserts or overwrites; returns the previous state.
    pub fn insert(&mut self, v: VertexId, state: EdgeState) -> Option<EdgeState> {
        debug_assert!(v < TOMBSTONE);
        match self {
            NeighborTable::Flat(items) => {
                if let Some(e) = items.iter_mut().find(|e| e.0 == v) {
                    return Some(std::mem::replace(&mut e.1, state));
                }
                if items.len() + 1 >= FLAT_LIMIT {
                    let mut t = OpenTable::with_capacity(FLAT_LIMIT * 4);
                    for &(x, s) in items.iter() {
                        t.insert(x, s);
                    }
                    t.insert(v, state);
                    *self = NeighborTable::Hashed(t);
                } else {
                    items.push((v, state));
                }
                None
            }
            NeighborTable::Hashed(t) => t.insert(v, state),
        }
    }

    /// Changes the state of an existing entry; returns false if absent.
    pub fn set_state(&mut self, v: VertexId, state: EdgeState) -> bool {
        match self {
            NeighborTable::Flat(items) => match items.iter_mut().find(|e| e.0 == v) {
                Some(e) => {
                    e.1 = state;
                    true
                }
                None => false,
            },
            NeighborTable::Hashed(t) => match t.find(v) {
                Some(i) => {
                    t.slots[i].1 = state;
                    true
                }
                None => false,
            },
        }
    }

    pub fn remove(&mut self, v: VertexId) -> Option<EdgeState> {
        match self {
            NeighborTable::Flat(items) => {
                let pos = items.iter().position(|e| e.0 == v)?;
                Some(items.swap_remove(pos).1)
            }
            NeighborTable::Hashed(t) => {
                let old = t.remove(v)?;
                if t.len < SHRINK_TO_FLAT {
                    *self = NeighborTable::Flat(t.iter().collect());
                } else if t.len * 8 < t.slots.len() {
                    t.rehash(t.len * 4);
                }
                Some(old)
            }
        }
    }

    pub fn iter(&self) -> NeighborIter<'_> {
        match self {
            NeighborTable::Flat(items) => NeighborIter::Flat(items.iter()),
            NeighborTable::Hashed(t) => NeighborIter::Hashed(t.slots.iter()),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.iter().map(|e| e.0)
    }

    pub fn is_hashed(&self) -> bool {
        matches!(self, NeighborTable::Hashed(_))
    }
}

pub enum NeighborIter<'a> {
    Flat(std::slice::Iter<'a, (VertexId, EdgeState)>),
    Hashed(std::slice::Iter<'a, (VertexId, EdgeState)>),
}

impl Iterator for NeighborIter<'_> {
    type Item = (VertexId, EdgeState);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        match self {
            NeighborIter::Flat(it) => it.next().copied(),
            NeighborIter::Hashed(it) => it.find(|e| e.0 < TOMBSTONE).copied(),
        }
    }
}

/// Linear-probing table; load (live + tombstones) is kept at or below 1/2.
#[derive(Debug, Clone)]
pub struct OpenTable {
    slots: Vec<(VertexId, EdgeState)>,
    len: usize,
    tombstones: usize,
}

impl OpenTable {
    fn with_capacity(cap: usize) -> Self {
        let cap = cap.next_power_of_two().max(8);
        Self {
            slots: vec![(EMPTY, EdgeState::Old); cap],
            len: 0,
            tombstones: 0,
        }
    }

    #[inline]
    fn home(&self, v: VertexId) -> usize {
        // Fibonacci hashing onto the power-of-two table
        let h = (v as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        (h >> (64 - self.slots.len().trailing_zeros())) as usize
    }

    fn find(&self, v: VertexId) -> Option<usize> {
        let mask = self.slots.len() - 1;
        let mut i = self.home(v);
        loop {
            match self.slots[i].0 {
                EMPTY => return None,
                x if x == v => return Some(i),
                _ => i = (i + 1) & mask,
            }
        }
    }

    fn insert(&mut self, v: VertexId, state: EdgeState) -> Option<EdgeState> {
        if let Some(i) = self.find(v) {
            return Some(std::mem::replace(&mut self.slots[i].1, state));
        }
        if (self.len + self.tombstones + 1) * 2 > self.slots.len() {
            let want = ((self.len + 1) * 4).max(self.slots.len());
            self.rehash(want);
        }
        let mask = self.slots.len() - 1;
        let mut i = self.home(v);
        while self.slots[i].0 < TOMBSTONE {
            i = (i + 1) & mask;
        }
        if self.slots[i].0 == TOMBSTONE {
            self.tombstones -= 1;
        }
        self.slots[i] = (v, state);
        self.len += 1;
        None
    }

    fn remove(&mut self, v: VertexId) -> Option<EdgeState> {
        let i = self.find(v)?;
        let old = self.slots[i].1;
        self.slots[i].0 = TOMBSTONE;
        self.len -= 1;
        self.tombstones += 1;
        Some(old)
    }

    fn rehash(&mut self, cap: usize) {
        let old = std::mem::replace(self, Self::with_capacity(cap));
        for (v, s) in old.iter() {
            self.insert(v, s);
        }
    }

    fn iter(&self) -> impl Iterator<Item = (VertexId, EdgeState)> + '_ {
        self.slots.iter().filter(|e| e.0 < TOMBSTONE).copied()
    }
}

use std::collections::BTreeMap;

use crate::interval::{Coord, SegId, Segment};
use crate::metrics::{QueryTrace, TreeStats};

use super::{BaselineError, Skeleton, Slab};

/// Upper limit on materialized unit slabs.
const MAX_LEAVES: u64 = 1 << 22;

/// Dynamic segment tree over a fixed integer range `[lo, hi]`, fully
/// materialized over unit slabs. Segments can come and go, but only inside
/// the range chosen at construction; the skeleton never changes.
#[derive(Debug, Clone)]
pub struct DstTree {
    lo: Coord,
    hi: Coord,
    pub(super) skeleton: Skeleton,
    segments: BTreeMap<SegId, Segment<Coord>>,
}

impl DstTree {
    pub fn new(lo: Coord, hi: Coord) -> Result<Self, BaselineError> {
        if lo >= hi {
            return Err(BaselineError::EmptyRange { lo, hi });
        }
        let leaves = hi.abs_diff(lo);
        if leaves > MAX_LEAVES {
            return Err(BaselineError::TooLarge {
                lo,
                hi,
                leaves,
                max: MAX_LEAVES,
            });
        }
        let slabs: Vec<Slab> = (lo..hi)
            .map(|x| Slab {
                lo: Some(x),
                hi: Some(x + 1),
            })
            .collect();
        Ok(Self {
            lo,
            hi,
            skeleton: Skeleton::build(&slabs),
            segments: BTreeMap::new(),
        })
    }

    pub fn range(&self) -> (Coord, Coord) {
        (self.lo, self.hi)
    }

    /// Number of unit slabs, `hi - lo`.
    pub fn leaf_count(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn insert(&mut self, seg: Segment<Coord>) -> Result<(), BaselineError> {
        if seg.lo() < self.lo || seg.hi() > self.hi {
            return Err(BaselineError::RangeExceeded {
                seg_lo: seg.lo(),
                seg_hi: seg.hi(),
                lo: self.lo,
                hi: self.hi,
            });
        }
        if self.segments.contains_key(&seg.id()) {
            return Err(BaselineError::DuplicateId(seg.id()));
        }
        self.skeleton.add(&seg);
        self.segments.insert(seg.id(), seg);
        Ok(())
    }

    /// Removes the id from its canonical nodes. The skeleton is not pruned.
    pub fn delete(&mut self, id: SegId) -> bool {
        match self.segments.remove(&id) {
            Some(seg) => {
                self.skeleton.remove(&seg);
                true
            }
            None => false,
        }
    }

    pub fn segment(&self, id: SegId) -> Option<&Segment<Coord>> {
        self.segments.get(&id)
    }

    pub fn stab(&self, x: Coord) -> QueryTrace {
        self.skeleton.stab(x)
    }

    pub fn stats(&self) -> TreeStats {
        self.skeleton.stats(self.segments.len())
    }

    pub fn check_canonical(&self) -> Result<(), String> {
        self.skeleton.check_canonical(self.segments.values())
    }
}

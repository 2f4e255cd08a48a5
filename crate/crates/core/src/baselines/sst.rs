use crate::interval::{Coord, Segment};
use crate::metrics::{QueryTrace, TreeStats};

use super::{BaselineError, Skeleton, Slab};

/// Static segment tree: built once over the elementary slabs of a fixed
/// segment set, including the two unbounded outer slabs.
#[derive(Debug, Clone)]
pub struct SstTree {
    skeleton: Skeleton,
    segments: Vec<Segment<Coord>>,
}

impl SstTree {
    pub fn build(segments: &[Segment<Coord>]) -> Result<Self, BaselineError> {
        if segments.is_empty() {
            return Err(BaselineError::NoSegments);
        }
        let mut ends: Vec<Coord> = segments.iter().flat_map(|s| [s.lo(), s.hi()]).collect();
        ends.sort_unstable();
        ends.dedup();

        let mut leaves = Vec::with_capacity(ends.len() + 1);
        leaves.push(Slab {
            lo: None,
            hi: Some(ends[0]),
        });
        leaves.extend(ends.windows(2).map(|w| Slab {
            lo: Some(w[0]),
            hi: Some(w[1]),
        }));
        leaves.push(Slab {
            lo: ends.last().copied(),
            hi: None,
        });

        let mut skeleton = Skeleton::build(&leaves);
        for seg in segments {
            skeleton.add(seg);
        }
        Ok(Self {
            skeleton,
            segments: segments.to_vec(),
        })
    }

    pub fn stab(&self, x: Coord) -> QueryTrace {
        self.skeleton.stab(x)
    }

    pub fn stats(&self) -> TreeStats {
        self.skeleton.stats(self.segments.len())
    }

    pub fn leaf_count(&self) -> usize {
        self.skeleton.nodes.len().div_ceil(2)
    }

    pub fn check_canonical(&self) -> Result<(), String> {
        self.skeleton.check_canonical(self.segments.iter())
    }
}

//! Standard segment trees used as comparison baselines.
//!
//! Both are a balanced binary skeleton over elementary slabs. A segment is
//! recorded on its canonical cover: the maximal nodes whose slab lies inside
//! it. A stabbing query walks every node whose closed slab holds the point,
//! so a point on a slab boundary descends into both neighbouring leaves.

mod dst;
mod sst;

pub use dst::DstTree;
pub use sst::SstTree;

use thiserror::Error;

use crate::interval::{Coord, IdSet, SegId, Segment};
use crate::metrics::{QueryTrace, TreeStats};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaselineError {
    #[error("a static segment tree needs at least one segment")]
    NoSegments,
    #[error("tree range [{lo}, {hi}] is empty")]
    EmptyRange { lo: Coord, hi: Coord },
    #[error("tree range [{lo}, {hi}] needs {leaves} leaves, more than the supported {max}")]
    TooLarge {
        lo: Coord,
        hi: Coord,
        leaves: u64,
        max: u64,
    },
    #[error("range exceeded: segment [{seg_lo}, {seg_hi}] lies outside tree range [{lo}, {hi}]")]
    RangeExceeded {
        seg_lo: Coord,
        seg_hi: Coord,
        lo: Coord,
        hi: Coord,
    },
    #[error("segment id {0} is already stored")]
    DuplicateId(SegId),
}

/// Slab end; `None` on the low side is −∞, on the high side +∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Slab {
    lo: Option<Coord>,
    hi: Option<Coord>,
}

impl Slab {
    fn contains(&self, x: Coord) -> bool {
        self.lo.is_none_or(|l| l <= x) && self.hi.is_none_or(|h| x <= h)
    }

    fn inside(&self, seg: &Segment<Coord>) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if seg.lo() <= l && h <= seg.hi())
    }

    fn meets_interior(&self, seg: &Segment<Coord>) -> bool {
        self.lo.is_none_or(|l| l < seg.hi()) && self.hi.is_none_or(|h| h > seg.lo())
    }
}

#[derive(Debug, Clone)]
struct SlabNode {
    slab: Slab,
    children: Option<(usize, usize)>,
    list: IdSet,
}

/// Balanced skeleton over a fixed slab sequence.
#[derive(Debug, Clone)]
struct Skeleton {
    nodes: Vec<SlabNode>,
    root: usize,
    height: i32,
}

impl Skeleton {
    fn build(leaves: &[Slab]) -> Self {
        debug_assert!(!leaves.is_empty());
        let mut nodes = Vec::with_capacity(2 * leaves.len());
        let (root, height) = Self::build_range(&mut nodes, leaves, 0, leaves.len() - 1);
        Self { nodes, root, height }
    }

    /// Builds over `leaves[lo..=hi]`, left half `[lo, mid]`.
    fn build_range(nodes: &mut Vec<SlabNode>, leaves: &[Slab], lo: usize, hi: usize) -> (usize, i32) {
        if lo == hi {
            nodes.push(SlabNode {
                slab: leaves[lo],
                children: None,
                list: IdSet::new(),
            });
            return (nodes.len() - 1, 0);
        }
        let mid = (lo + hi) / 2;
        let (l, lh) = Self::build_range(nodes, leaves, lo, mid);
        let (r, rh) = Self::build_range(nodes, leaves, mid + 1, hi);
        nodes.push(SlabNode {
            slab: Slab {
                lo: leaves[lo].lo,
                hi: leaves[hi].hi,
            },
            children: Some((l, r)),
            list: IdSet::new(),
        });
        (nodes.len() - 1, 1 + lh.max(rh))
    }

    fn canonical_cover(&self, seg: &Segment<Coord>) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(at) = stack.pop() {
            let n = &self.nodes[at];
            if n.slab.inside(seg) {
                out.push(at);
            } else if let Some((l, r)) = n.children {
                for c in [r, l] {
                    if self.nodes[c].slab.meets_interior(seg) {
                        stack.push(c);
                    }
                }
            }
        }
        out
    }

    fn add(&mut self, seg: &Segment<Coord>) {
        for at in self.canonical_cover(seg) {
            self.nodes[at].list.insert(seg.id());
        }
    }

    fn remove(&mut self, seg: &Segment<Coord>) {
        for at in self.canonical_cover(seg) {
            self.nodes[at].list.remove(&seg.id());
        }
    }

    fn stab(&self, x: Coord) -> QueryTrace {
        let mut trace = QueryTrace {
            nodes_visited: 1,
            ..QueryTrace::default()
        };
        if !self.nodes[self.root].slab.contains(x) {
            return trace;
        }
        trace.nodes_visited = 0;
        let mut stack = vec![self.root];
        while let Some(at) = stack.pop() {
            let n = &self.nodes[at];
            trace.nodes_visited += 1;
            if !n.list.is_empty() {
                trace.nodes_emitted += 1;
                trace.output_segments.extend(n.list.iter().copied());
            }
            if let Some((l, r)) = n.children {
                for c in [r, l] {
                    if self.nodes[c].slab.contains(x) {
                        stack.push(c);
                    }
                }
            }
        }
        trace
    }

    fn stats(&self, segment_count: usize) -> TreeStats {
        TreeStats {
            node_count: self.nodes.len(),
            height: self.height,
            cumulative_list_size: self.nodes.iter().map(|n| n.list.len()).sum(),
            segment_count,
        }
    }

    /// Lists equal the canonical covers of `segments`, and no id sits on a
    /// node and one of its ancestors.
    fn check_canonical<'a>(&self, segments: impl Iterator<Item = &'a Segment<Coord>>) -> Result<(), String> {
        let mut expected = vec![IdSet::new(); self.nodes.len()];
        for seg in segments {
            for at in self.canonical_cover(seg) {
                expected[at].insert(seg.id());
            }
        }
        for (at, (node, want)) in self.nodes.iter().zip(&expected).enumerate() {
            if &node.list != want {
                return Err(format!("node {at} lists {:?}, canonical cover gives {:?}", node.list, want));
            }
        }
        let mut stack = vec![(self.root, IdSet::new())];
        while let Some((at, above)) = stack.pop() {
            let n = &self.nodes[at];
            if let Some(id) = n.list.intersection(&above).next() {
                return Err(format!("segment {id} appears on node {at} and an ancestor"));
            }
            if let Some((l, r)) = n.children {
                let mut below = above;
                below.extend(n.list.iter().copied());
                stack.push((l, below.clone()));
                stack.push((r, below));
            }
        }
        Ok(())
    }
}

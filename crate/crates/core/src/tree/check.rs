use std::fmt;

use thiserror::Error;

use crate::interval::{Point, SegId};

use super::{BitsTree, NodeRef};

/// First structural or semantic defect found by [`BitsTree::check_invariants`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantViolation {
    #[error("node {0:?} is reachable twice or forms a cycle")]
    Cycle(NodeRef),
    #[error("node {node:?} has parent link {found:?}, expected {expected:?}")]
    ParentLink {
        node: NodeRef,
        expected: NodeRef,
        found: NodeRef,
    },
    #[error("{which} thread of node {node:?} targets {found:?}, expected {expected:?}")]
    Thread {
        node: NodeRef,
        which: &'static str,
        expected: NodeRef,
        found: NodeRef,
    },
    #[error("inorder ranges out of order at node {0:?}")]
    Unsorted(NodeRef),
    #[error("thread walk visits {walked} nodes, structure holds {structural}")]
    WalkMismatch { walked: usize, structural: usize },
    #[error("stored height of node {node:?} is {stored}, actual {actual}")]
    Height {
        node: NodeRef,
        stored: u32,
        actual: u32,
    },
    #[error("node {node:?} has balance {balance}")]
    Unbalanced { node: NodeRef, balance: i64 },
    #[error("node {0:?} has an empty list")]
    EmptyList(NodeRef),
    #[error("node count is {recorded}, tree holds {actual}")]
    NodeCount { recorded: usize, actual: usize },
    #[error("segment {0} is not tiled by consecutive nodes listing it")]
    Coverage(SegId),
    #[error("node lists hold {listed} entries, stored segments account for {expected}")]
    ExtraEntries { listed: usize, expected: usize },
}

struct Shape {
    height: u32,
}

impl<C: Point> BitsTree<C> {
    /// Verifies every structural property of the tree and that node lists
    /// agree with the stored segments. Never mutates.
    pub fn check_invariants(&self) -> Result<(), InvariantViolation> {
        let mut order = Vec::with_capacity(self.node_count);
        let mut seen = vec![false; self.nodes.len()];
        if !self.root.is_head() {
            self.check_subtree(self.root, NodeRef::HEAD, &mut order, &mut seen)?;
        }
        if order.len() != self.node_count {
            return Err(InvariantViolation::NodeCount {
                recorded: self.node_count,
                actual: order.len(),
            });
        }

        // threads against the structural inorder sequence
        for (i, &at) in order.iter().enumerate() {
            let n = self.node(at);
            let pred = if i == 0 { NodeRef::HEAD } else { order[i - 1] };
            let succ = order.get(i + 1).copied().unwrap_or(NodeRef::HEAD);
            if n.left_thread && n.left != pred {
                return Err(InvariantViolation::Thread {
                    node: at,
                    which: "left",
                    expected: pred,
                    found: n.left,
                });
            }
            if n.right_thread && n.right != succ {
                return Err(InvariantViolation::Thread {
                    node: at,
                    which: "right",
                    expected: succ,
                    found: n.right,
                });
            }
            if i > 0 && self.node(pred).range.hi() > n.range.lo() {
                return Err(InvariantViolation::Unsorted(at));
            }
            if n.list.is_empty() {
                return Err(InvariantViolation::EmptyList(at));
            }
        }

        let walked = self.iter().take(order.len() + 1).count();
        if walked != order.len() {
            return Err(InvariantViolation::WalkMismatch {
                walked,
                structural: order.len(),
            });
        }

        self.check_coverage(&order)
    }

    fn check_subtree(
        &self,
        at: NodeRef,
        parent: NodeRef,
        order: &mut Vec<NodeRef>,
        seen: &mut [bool],
    ) -> Result<Shape, InvariantViolation> {
        if std::mem::replace(&mut seen[at.slot()], true) {
            return Err(InvariantViolation::Cycle(at));
        }
        let n = self.node(at);
        if n.parent != parent {
            return Err(InvariantViolation::ParentLink {
                node: at,
                expected: parent,
                found: n.parent,
            });
        }
        let left = match self.left_child(at) {
            Some(l) => self.check_subtree(l, at, order, seen)?.height,
            None => 0,
        };
        order.push(at);
        let right = match self.right_child(at) {
            Some(r) => self.check_subtree(r, at, order, seen)?.height,
            None => 0,
        };
        let actual = 1 + left.max(right);
        if n.height != actual {
            return Err(InvariantViolation::Height {
                node: at,
                stored: n.height,
                actual,
            });
        }
        let balance = right as i64 - left as i64;
        if balance.abs() > 1 {
            return Err(InvariantViolation::Unbalanced { node: at, balance });
        }
        Ok(Shape { height: actual })
    }

    /// Each stored segment must be tiled, without gaps, by consecutive nodes
    /// that all list it, and no list may hold anything else.
    fn check_coverage(&self, order: &[NodeRef]) -> Result<(), InvariantViolation> {
        let mut expected = 0usize;
        for seg in self.segments.values() {
            let start = order.partition_point(|&at| self.node(at).range.lo() < seg.lo());
            let mut cursor = seg.lo();
            let mut i = start;
            while cursor < seg.hi() {
                let Some(&at) = order.get(i) else {
                    return Err(InvariantViolation::Coverage(seg.id()));
                };
                let n = self.node(at);
                if n.range.lo() != cursor || n.range.hi() > seg.hi() || !n.list.contains(&seg.id()) {
                    return Err(InvariantViolation::Coverage(seg.id()));
                }
                cursor = n.range.hi();
                expected += 1;
                i += 1;
            }
        }
        let listed: usize = order.iter().map(|&at| self.node(at).list.len()).sum();
        if listed != expected {
            return Err(InvariantViolation::ExtraEntries { listed, expected });
        }
        Ok(())
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_head() {
            f.write_str("HEAD")
        } else {
            write!(f, "n{}", self.0)
        }
    }
}

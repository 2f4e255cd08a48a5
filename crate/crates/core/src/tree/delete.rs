use crate::interval::{Point, SegId, Segment};

use super::{BitsTree, NodeRef, TreeError};

impl<C: Point> BitsTree<C> {
    /// Removes a stored segment. Returns `Ok(false)` when the id is not
    /// stored; a stored id given with different endpoints is an error.
    ///
    /// The walk starts at the node beginning at the segment's lower end and
    /// follows successors up to the node ending at its upper end. Each node
    /// drops the id; an emptied node is unlinked, and a node whose list now
    /// equals its predecessor's is merged into it. The last node is finally
    /// compared with its successor.
    pub fn delete(&mut self, seg: &Segment<C>) -> Result<bool, TreeError> {
        match self.segments.get(&seg.id()) {
            None => return Ok(false),
            Some(stored) if stored.range() != seg.range() => {
                return Err(TreeError::EndpointMismatch {
                    id: seg.id(),
                    stored: format!("{:?}", stored.range()),
                    given: format!("{:?}", seg.range()),
                })
            }
            Some(_) => {}
        }
        let Some(start) = self.locate_start(seg.lo()) else {
            return Ok(false);
        };
        if !self.node(start).list.contains(&seg.id()) {
            return Ok(false);
        }
        self.segments.remove(&seg.id());

        let id = seg.id();
        let end = seg.hi();
        let mut at = start;
        let last = loop {
            let reached_end = self.node(at).range.hi() >= end;
            let removed = self.node_mut(at).list.remove(&id);
            debug_assert!(removed, "segment missing from a node it covers");

            let next = self.successor(at);
            let survivor = if self.node(at).list.is_empty() {
                self.unlink_empty(at);
                None
            } else {
                let pred = self.predecessor(at);
                if self.mergeable(pred, at) {
                    Some(self.merge_adjacent(pred, at))
                } else {
                    Some(at)
                }
            };

            if reached_end {
                break survivor;
            }
            at = match survivor {
                Some(s) => self.successor(s),
                None => next,
            };
            if at.is_head() {
                break None;
            }
        };

        if let Some(w) = last {
            let succ = self.successor(w);
            if self.mergeable(w, succ) {
                self.merge_adjacent(w, succ);
            }
        }
        Ok(true)
    }

    /// Removes the segment stored under `id`, if any.
    pub fn delete_id(&mut self, id: SegId) -> bool {
        match self.segments.get(&id).copied() {
            Some(seg) => self.delete(&seg).expect("stored endpoints always match"),
            None => false,
        }
    }

    /// The node whose range starts exactly at `lo`.
    fn locate_start(&self, lo: C) -> Option<NodeRef> {
        let mut at = self.root;
        while !at.is_head() {
            let n = self.node(at);
            if n.range.lo() == lo {
                return Some(at);
            }
            if n.range.hi() <= lo {
                if n.right_thread {
                    return None;
                }
                at = n.right;
            } else if lo < n.range.lo() {
                if n.left_thread {
                    return None;
                }
                at = n.left;
            } else {
                // lo falls strictly inside this range: no boundary there
                return None;
            }
        }
        None
    }

    fn mergeable(&self, pred: NodeRef, node: NodeRef) -> bool {
        if pred.is_head() || node.is_head() {
            return false;
        }
        let (a, b) = (self.node(pred), self.node(node));
        a.range.hi() == b.range.lo() && a.list == b.list
    }

    /// Merges two adjacent nodes with equal lists into one covering both
    /// ranges. The node that lacks the facing child is the one unlinked.
    /// Returns the surviving handle.
    fn merge_adjacent(&mut self, pred: NodeRef, node: NodeRef) -> NodeRef {
        let (lo, hi) = (self.node(pred).range.lo(), self.node(node).range.hi());
        if self.node(node).left_thread {
            self.node_mut(pred).range.set_hi(hi);
            self.remove_node(node);
            pred
        } else {
            // pred is the rightmost node of node's left subtree
            debug_assert!(self.node(pred).right_thread);
            self.node_mut(node).range.set_lo(lo);
            self.remove_node(pred);
            node
        }
    }

    /// Drops a node whose list became empty. A node with two children takes
    /// over its predecessor's contents and the predecessor is unlinked
    /// instead.
    fn unlink_empty(&mut self, at: NodeRef) {
        let n = self.node(at);
        if !n.left_thread && !n.right_thread {
            let pred = self.rightmost(n.left);
            let (range, list) = {
                let p = self.node_mut(pred);
                (p.range, std::mem::take(&mut p.list))
            };
            let n = self.node_mut(at);
            n.range = range;
            n.list = list;
            self.remove_node(pred);
        } else {
            self.remove_node(at);
        }
    }
}

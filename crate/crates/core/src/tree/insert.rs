use crate::interval::{partition, IdSet, Point, Range, Segment};

use super::{BitsTree, NodeRef, TreeError};

/// Where the first search for a new segment ended.
enum Landing {
    /// A node whose range overlaps the segment's interior.
    Overlap(NodeRef),
    /// No overlap anywhere: an empty slot between two inorder neighbours.
    Gap { pred: NodeRef, succ: NodeRef },
}

impl<C: Point> BitsTree<C> {
    /// Stores a segment.
    ///
    /// The search descends from the root until it meets a node whose range
    /// overlaps the segment. That node keeps the intersection and gains the
    /// segment; the leftover pieces continue towards the inorder predecessor
    /// and successor, splitting further nodes or filling gaps with new nodes.
    /// A segment overlapping nothing becomes a single new node.
    pub fn insert(&mut self, seg: Segment<C>) -> Result<(), TreeError> {
        if self.segments.contains_key(&seg.id()) {
            return Err(TreeError::DuplicateId(seg.id()));
        }
        self.segments.insert(seg.id(), seg);

        let range = seg.range();
        let own: IdSet = [seg.id()].into_iter().collect();
        match self.land(&range) {
            Landing::Gap { pred, succ } => {
                self.attach_between(pred, succ, range, own);
            }
            Landing::Overlap(v) => {
                let split = {
                    let n = self.node(v);
                    partition(&range, &own, &n.range, &n.list)?
                };
                {
                    let n = self.node_mut(v);
                    n.range = split.center;
                    n.list = split.center_list;
                }
                if let Some(left) = split.left {
                    self.spread_left(left, split.left_list, v);
                }
                if let Some(right) = split.right {
                    self.spread_right(right, split.right_list, v);
                }
            }
        }
        Ok(())
    }

    fn land(&self, range: &Range<C>) -> Landing {
        let mut at = self.root;
        if at.is_head() {
            return Landing::Gap {
                pred: NodeRef::HEAD,
                succ: NodeRef::HEAD,
            };
        }
        loop {
            let n = self.node(at);
            if n.range.overlaps(range) {
                return Landing::Overlap(at);
            }
            if range.hi() <= n.range.lo() {
                if n.left_thread {
                    return Landing::Gap { pred: n.left, succ: at };
                }
                at = n.left;
            } else {
                if n.right_thread {
                    return Landing::Gap { pred: at, succ: n.right };
                }
                at = n.right;
            }
        }
    }

    /// Inserts `piece`, which ends at or before the start of `anchor`, by
    /// working leftwards through `anchor`'s predecessors.
    ///
    /// Follows the recursive order of the classic formulation: a node's
    /// left remainder is fully placed before the gap on its right is filled,
    /// so gap nodes are created innermost-last.
    fn spread_left(&mut self, mut piece: Range<C>, mut list: IdSet, mut anchor: NodeRef) {
        let mut gaps = Vec::new();
        loop {
            let u = self.predecessor(anchor);
            if u.is_head() || self.node(u).range.hi() <= piece.lo() {
                self.attach_between(u, anchor, piece, list);
                break;
            }
            let split = {
                let n = self.node(u);
                partition(&piece, &list, &n.range, &n.list).expect("predecessor overlaps the piece")
            };
            {
                let n = self.node_mut(u);
                n.range = split.center;
                n.list = split.center_list;
            }
            if let Some(gap) = split.right {
                gaps.push((u, anchor, gap, split.right_list));
            }
            match split.left {
                Some(rest) => {
                    piece = rest;
                    list = split.left_list;
                    anchor = u;
                }
                None => break,
            }
        }
        for (pred, succ, gap, list) in gaps.into_iter().rev() {
            self.attach_between(pred, succ, gap, list);
        }
    }

    /// Mirror of [`Self::spread_left`] for a piece starting at or after the
    /// end of `anchor`.
    fn spread_right(&mut self, mut piece: Range<C>, mut list: IdSet, mut anchor: NodeRef) {
        let mut gaps = Vec::new();
        loop {
            let u = self.successor(anchor);
            if u.is_head() || piece.hi() <= self.node(u).range.lo() {
                self.attach_between(anchor, u, piece, list);
                break;
            }
            let split = {
                let n = self.node(u);
                partition(&piece, &list, &n.range, &n.list).expect("successor overlaps the piece")
            };
            {
                let n = self.node_mut(u);
                n.range = split.center;
                n.list = split.center_list;
            }
            if let Some(gap) = split.left {
                gaps.push((anchor, u, gap, split.left_list));
            }
            match split.right {
                Some(rest) => {
                    piece = rest;
                    list = split.right_list;
                    anchor = u;
                }
                None => break,
            }
        }
        for (pred, succ, gap, list) in gaps.into_iter().rev() {
            self.attach_between(pred, succ, gap, list);
        }
    }
}

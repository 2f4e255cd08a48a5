use crate::interval::{IdSet, Point, Range, Segment};

use super::{BitsTree, Node, NodeRef, TreeError};

impl<C: Point> BitsTree<C> {
    /// Assembles a tree with a prescribed shape, e.g. to reproduce a
    /// drawing. `preorder` lists the node ranges in preorder; each node's
    /// list is derived from `segments`. The result must satisfy every
    /// invariant (balance included) or the layout is rejected.
    pub fn from_layout(
        segments: impl IntoIterator<Item = Segment<C>>,
        preorder: &[Range<C>],
    ) -> Result<Self, TreeError> {
        let mut tree = Self::new();
        for seg in segments {
            if tree.segments.insert(seg.id(), seg).is_some() {
                return Err(TreeError::DuplicateId(seg.id()));
            }
        }
        for range in preorder {
            let list: IdSet = tree
                .segments
                .values()
                .filter(|s| s.range().covers(range))
                .map(|s| s.id())
                .collect();
            tree.place_unbalanced(*range, list)?;
        }
        // heights bottom-up: reverse preorder visits children before parents
        let order: Vec<NodeRef> = (1..=tree.nodes.len() as u32).map(NodeRef).rev().collect();
        for at in order {
            tree.update_height(at);
        }
        tree.check_invariants()
            .map_err(|v| TreeError::Layout(v.to_string()))?;
        Ok(tree)
    }

    /// Plain search-tree insertion of a node, no rebalancing.
    fn place_unbalanced(&mut self, range: Range<C>, list: IdSet) -> Result<(), TreeError> {
        let mut at = self.root;
        if at.is_head() {
            self.attach_raw(NodeRef::HEAD, NodeRef::HEAD, NodeRef::HEAD, range, list);
            return Ok(());
        }
        loop {
            let n = self.node(at);
            if n.range.overlaps(&range) {
                return Err(TreeError::Layout(format!("{range:?} overlaps {:?}", n.range)));
            }
            if range.hi() <= n.range.lo() {
                if n.left_thread {
                    let pred = n.left;
                    self.attach_raw(at, pred, at, range, list);
                    return Ok(());
                }
                at = n.left;
            } else {
                if n.right_thread {
                    let succ = n.right;
                    self.attach_raw(at, at, succ, range, list);
                    return Ok(());
                }
                at = n.right;
            }
        }
    }

    fn attach_raw(&mut self, parent: NodeRef, pred: NodeRef, succ: NodeRef, range: Range<C>, list: IdSet) {
        let at = self.alloc(Node {
            range,
            list,
            left: pred,
            right: succ,
            left_thread: true,
            right_thread: true,
            parent,
            height: 1,
        });
        if parent.is_head() {
            self.root = at;
        } else if parent == succ {
            let p = self.node_mut(parent);
            p.left = at;
            p.left_thread = false;
        } else {
            let p = self.node_mut(parent);
            p.right = at;
            p.right_thread = false;
        }
    }
}

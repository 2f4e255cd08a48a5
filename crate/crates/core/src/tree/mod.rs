//! The balanced inorder-threaded segment tree.
//!
//! Every node owns a range and the ids of the segments covering that range.
//! Ranges of different nodes never overlap except at endpoints and appear in
//! ascending order along the inorder sequence, so a stabbing query ends in a
//! single node (plus at most one neighbour when the point sits on a shared
//! boundary).
//!
//! Nodes live in an arena and address each other through [`NodeRef`]
//! handles. An empty child slot is never null: it is a *thread* to the
//! inorder predecessor (left slot) or successor (right slot), and the first
//! and last nodes thread to the dummy node [`NodeRef::HEAD`]. Rotations move
//! real children only, so thread targets never change when the tree is
//! rebalanced.

mod check;
mod delete;
mod insert;
mod layout;
mod query;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::interval::{IdSet, IntervalError, Point, Range, SegId, Segment};
use crate::metrics::TreeStats;

pub use check::InvariantViolation;

/// Handle to a node of one tree's arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef(u32);

impl NodeRef {
    /// The dummy node: empty range, empty list.
    pub const HEAD: NodeRef = NodeRef(0);

    pub fn is_head(self) -> bool {
        self == Self::HEAD
    }

    fn slot(self) -> usize {
        debug_assert!(!self.is_head());
        (self.0 - 1) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("segment id {0} is already stored")]
    DuplicateId(SegId),
    #[error("segment id {id} is stored as {stored} but was given as {given}")]
    EndpointMismatch {
        id: SegId,
        stored: String,
        given: String,
    },
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("layout rejected: {0}")]
    Layout(String),
}

#[derive(Debug, Clone)]
struct Node<C> {
    range: Range<C>,
    list: IdSet,
    left: NodeRef,
    right: NodeRef,
    left_thread: bool,
    right_thread: bool,
    parent: NodeRef,
    /// Node count of the longest downward path; a leaf has height 1.
    height: u32,
}

/// The four AVL restructurings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationKind {
    LeftLeft,
    RightRight,
    LeftRight,
    RightLeft,
}

/// One rebalancing event, with the inorder `(range, list)` sequence taken
/// right before and right after it.
#[derive(Debug, Clone)]
pub struct RotationRecord<C> {
    pub kind: RotationKind,
    /// Range of the node found out of balance.
    pub pivot: Range<C>,
    pub before: Vec<(Range<C>, IdSet)>,
    pub after: Vec<(Range<C>, IdSet)>,
}

/// Read-only view of a node handed out by iteration.
#[derive(Debug, Clone, Copy)]
pub struct NodeView<'a, C> {
    pub handle: NodeRef,
    pub range: &'a Range<C>,
    pub list: &'a IdSet,
}

/// Height-balanced, two-way inorder-threaded segment tree.
///
/// One writer at a time; concurrent readers are fine when no write is in
/// progress (the type is `Send + Sync` and has no interior mutability).
#[derive(Debug, Clone)]
pub struct BitsTree<C> {
    nodes: Vec<Node<C>>,
    free: Vec<NodeRef>,
    root: NodeRef,
    node_count: usize,
    segments: BTreeMap<SegId, Segment<C>>,
    audit: Option<Vec<RotationRecord<C>>>,
    rotations: usize,
}

impl<C: Point> Default for BitsTree<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Point> BitsTree<C> {
    /// An empty tree holding only the dummy node.
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            free: Vec::new(),
            root: NodeRef::HEAD,
            node_count: 0,
            segments: BTreeMap::new(),
            audit: None,
            rotations: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_head()
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// Root handle, or `HEAD` for an empty tree.
    pub fn root(&self) -> NodeRef {
        self.root
    }

    pub fn segment(&self, id: SegId) -> Option<&Segment<C>> {
        self.segments.get(&id)
    }

    pub fn segments(&self) -> impl Iterator<Item = &Segment<C>> + '_ {
        self.segments.values()
    }

    /// Range of a node; `None` for the dummy node.
    pub fn range(&self, at: NodeRef) -> Option<&Range<C>> {
        (!at.is_head()).then(|| &self.node(at).range)
    }

    /// List of a node; the dummy node's list is empty.
    pub fn list(&self, at: NodeRef) -> Option<&IdSet> {
        (!at.is_head()).then(|| &self.node(at).list)
    }

    /// Real left child, if any.
    pub fn left_child(&self, at: NodeRef) -> Option<NodeRef> {
        let n = self.node(at);
        (!n.left_thread).then_some(n.left)
    }

    /// Real right child, if any.
    pub fn right_child(&self, at: NodeRef) -> Option<NodeRef> {
        let n = self.node(at);
        (!n.right_thread).then_some(n.right)
    }

    /// Total number of single rotations performed so far.
    pub fn rotation_count(&self) -> usize {
        self.rotations
    }

    /// Starts recording every rebalancing event with inorder snapshots.
    /// Snapshots cost O(n) per event; meant for tests and audits.
    pub fn enable_rotation_audit(&mut self) {
        self.audit.get_or_insert_with(Vec::new);
    }

    pub fn drain_rotation_log(&mut self) -> Vec<RotationRecord<C>> {
        self.audit.as_mut().map(std::mem::take).unwrap_or_default()
    }

    /// Inorder predecessor; `HEAD` before the first node. The predecessor of
    /// `HEAD` is the last node.
    pub fn predecessor(&self, at: NodeRef) -> NodeRef {
        if at.is_head() {
            return self.last();
        }
        let n = self.node(at);
        if n.left_thread {
            n.left
        } else {
            self.rightmost(n.left)
        }
    }

    /// Inorder successor; `HEAD` after the last node. The successor of
    /// `HEAD` is the first node.
    pub fn successor(&self, at: NodeRef) -> NodeRef {
        if at.is_head() {
            return self.first();
        }
        let n = self.node(at);
        if n.right_thread {
            n.right
        } else {
            self.leftmost(n.right)
        }
    }

    pub fn first(&self) -> NodeRef {
        if self.root.is_head() {
            NodeRef::HEAD
        } else {
            self.leftmost(self.root)
        }
    }

    pub fn last(&self) -> NodeRef {
        if self.root.is_head() {
            NodeRef::HEAD
        } else {
            self.rightmost(self.root)
        }
    }

    /// Inorder walk along successor threads; no stack involved.
    pub fn iter(&self) -> Inorder<'_, C> {
        Inorder {
            tree: self,
            next: self.first(),
        }
    }

    /// The inorder `(range, list)` sequence.
    pub fn inorder(&self) -> Vec<(Range<C>, IdSet)> {
        self.iter().map(|v| (*v.range, v.list.clone())).collect()
    }

    pub fn stats(&self) -> TreeStats {
        TreeStats {
            node_count: self.node_count,
            height: self.height_of(self.root) as i32 - 1,
            cumulative_list_size: self.iter().map(|v| v.list.len()).sum(),
            segment_count: self.segments.len(),
        }
    }

    /// Height in edges of the subtree under `at`; `-1` for `HEAD`.
    pub fn subtree_height(&self, at: NodeRef) -> i32 {
        self.height_of(at) as i32 - 1
    }

    // ---- arena ---------------------------------------------------------

    fn node(&self, at: NodeRef) -> &Node<C> {
        &self.nodes[at.slot()]
    }

    fn node_mut(&mut self, at: NodeRef) -> &mut Node<C> {
        &mut self.nodes[at.slot()]
    }

    fn alloc(&mut self, node: Node<C>) -> NodeRef {
        self.node_count += 1;
        if let Some(at) = self.free.pop() {
            *self.node_mut(at) = node;
            at
        } else {
            self.nodes.push(node);
            NodeRef(self.nodes.len() as u32)
        }
    }

    fn release(&mut self, at: NodeRef) {
        self.node_count -= 1;
        let n = self.node_mut(at);
        n.list.clear();
        self.free.push(at);
    }

    fn leftmost(&self, mut at: NodeRef) -> NodeRef {
        while let Some(l) = self.left_child(at) {
            at = l;
        }
        at
    }

    fn rightmost(&self, mut at: NodeRef) -> NodeRef {
        while let Some(r) = self.right_child(at) {
            at = r;
        }
        at
    }

    fn height_of(&self, at: NodeRef) -> u32 {
        if at.is_head() {
            0
        } else {
            self.node(at).height
        }
    }

    fn child_height(&self, child: Option<NodeRef>) -> u32 {
        child.map_or(0, |c| self.node(c).height)
    }

    fn balance_of(&self, at: NodeRef) -> i64 {
        self.child_height(self.right_child(at)) as i64 - self.child_height(self.left_child(at)) as i64
    }

    fn update_height(&mut self, at: NodeRef) {
        let h = 1 + self
            .child_height(self.left_child(at))
            .max(self.child_height(self.right_child(at)));
        self.node_mut(at).height = h;
    }

    /// Points `parent`'s slot that held `old` at `new` (or the root).
    fn replace_child(&mut self, parent: NodeRef, old: NodeRef, new: NodeRef) {
        if parent.is_head() {
            self.root = new;
            return;
        }
        let p = self.node_mut(parent);
        if !p.left_thread && p.left == old {
            p.left = new;
        } else {
            debug_assert!(!p.right_thread && p.right == old);
            p.right = new;
        }
    }

    // ---- rotations -----------------------------------------------------

    fn rotate_right(&mut self, z: NodeRef) {
        let y = self.left_child(z).expect("right rotation needs a left child");
        match self.right_child(y) {
            Some(t) => {
                self.node_mut(z).left = t;
                self.node_mut(t).parent = z;
            }
            None => {
                // y's successor thread pointed at z; z's predecessor is now y.
                let zn = self.node_mut(z);
                zn.left = y;
                zn.left_thread = true;
            }
        }
        let zp = self.node(z).parent;
        {
            let yn = self.node_mut(y);
            yn.right = z;
            yn.right_thread = false;
            yn.parent = zp;
        }
        self.replace_child(zp, z, y);
        self.node_mut(z).parent = y;
        self.update_height(z);
        self.update_height(y);
        self.rotations += 1;
    }

    fn rotate_left(&mut self, z: NodeRef) {
        let y = self.right_child(z).expect("left rotation needs a right child");
        match self.left_child(y) {
            Some(t) => {
                self.node_mut(z).right = t;
                self.node_mut(t).parent = z;
            }
            None => {
                let zn = self.node_mut(z);
                zn.right = y;
                zn.right_thread = true;
            }
        }
        let zp = self.node(z).parent;
        {
            let yn = self.node_mut(y);
            yn.left = z;
            yn.left_thread = false;
            yn.parent = zp;
        }
        self.replace_child(zp, z, y);
        self.node_mut(z).parent = y;
        self.update_height(z);
        self.update_height(y);
        self.rotations += 1;
    }

    /// Restores heights and AVL balance on the path from `from` to the root.
    fn rebalance_from(&mut self, from: NodeRef) {
        let mut at = from;
        while !at.is_head() {
            let parent = self.node(at).parent;
            self.update_height(at);
            let balance = self.balance_of(at);
            let kind = if balance < -1 {
                let y = self.left_child(at).expect("left-heavy node has a left child");
                Some(if self.balance_of(y) > 0 {
                    RotationKind::LeftRight
                } else {
                    RotationKind::LeftLeft
                })
            } else if balance > 1 {
                let y = self.right_child(at).expect("right-heavy node has a right child");
                Some(if self.balance_of(y) < 0 {
                    RotationKind::RightLeft
                } else {
                    RotationKind::RightRight
                })
            } else {
                None
            };
            if let Some(kind) = kind {
                self.restructure(at, kind);
            }
            at = parent;
        }
    }

    fn restructure(&mut self, at: NodeRef, kind: RotationKind) {
        let before = self.audit.is_some().then(|| self.inorder());
        let pivot = self.node(at).range;
        match kind {
            RotationKind::LeftLeft => self.rotate_right(at),
            RotationKind::RightRight => self.rotate_left(at),
            RotationKind::LeftRight => {
                let y = self.left_child(at).unwrap();
                self.rotate_left(y);
                self.rotate_right(at);
            }
            RotationKind::RightLeft => {
                let y = self.right_child(at).unwrap();
                self.rotate_right(y);
                self.rotate_left(at);
            }
        }
        if let Some(before) = before {
            let after = self.inorder();
            if let Some(log) = self.audit.as_mut() {
                log.push(RotationRecord {
                    kind,
                    pivot,
                    before,
                    after,
                });
            }
        }
    }

    // ---- structural edits ----------------------------------------------

    /// Creates a node for `range` between the inorder neighbours `pred` and
    /// `succ` (either may be `HEAD`), splices its threads and rebalances.
    fn attach_between(&mut self, pred: NodeRef, succ: NodeRef, range: Range<C>, list: IdSet) -> NodeRef {
        let mut node = Node {
            range,
            list,
            left: pred,
            right: succ,
            left_thread: true,
            right_thread: true,
            parent: NodeRef::HEAD,
            height: 1,
        };
        if self.root.is_head() {
            let at = self.alloc(node);
            self.root = at;
            return at;
        }
        let parent = if !pred.is_head() && self.node(pred).right_thread {
            debug_assert_eq!(self.node(pred).right, succ);
            pred
        } else {
            debug_assert!(!succ.is_head() && self.node(succ).left_thread);
            debug_assert_eq!(self.node(succ).left, pred);
            succ
        };
        node.parent = parent;
        let at = self.alloc(node);
        let p = self.node_mut(parent);
        if parent == pred {
            p.right = at;
            p.right_thread = false;
        } else {
            p.left = at;
            p.left_thread = false;
        }
        self.rebalance_from(parent);
        at
    }

    /// Unlinks a node with at most one real child and rebalances.
    fn remove_node(&mut self, x: NodeRef) {
        let (left, right, parent) = {
            let n = self.node(x);
            (self.left_child(x), self.right_child(x), n.parent)
        };
        let (pred_thread, succ_thread) = {
            let n = self.node(x);
            (n.left, n.right)
        };
        match (left, right) {
            (None, None) => {
                if parent.is_head() {
                    self.root = NodeRef::HEAD;
                } else {
                    let p = self.node_mut(parent);
                    if !p.left_thread && p.left == x {
                        p.left = pred_thread;
                        p.left_thread = true;
                    } else {
                        p.right = succ_thread;
                        p.right_thread = true;
                    }
                }
            }
            (Some(c), None) => {
                // The predecessor (rightmost under c) threaded to x.
                let r = self.rightmost(c);
                self.node_mut(r).right = succ_thread;
                self.node_mut(c).parent = parent;
                self.replace_child(parent, x, c);
            }
            (None, Some(c)) => {
                let l = self.leftmost(c);
                self.node_mut(l).left = pred_thread;
                self.node_mut(c).parent = parent;
                self.replace_child(parent, x, c);
            }
            (Some(_), Some(_)) => unreachable!("remove_node called on a node with two children"),
        }
        self.release(x);
        self.rebalance_from(parent);
    }
}

/// Inorder iterator following successor threads.
pub struct Inorder<'a, C> {
    tree: &'a BitsTree<C>,
    next: NodeRef,
}

impl<'a, C: Point> Iterator for Inorder<'a, C> {
    type Item = NodeView<'a, C>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next.is_head() {
            return None;
        }
        let at = self.next;
        let n = self.tree.node(at);
        self.next = self.tree.successor(at);
        Some(NodeView {
            handle: at,
            range: &n.range,
            list: &n.list,
        })
    }
}

#[cfg(test)]
mod tests;

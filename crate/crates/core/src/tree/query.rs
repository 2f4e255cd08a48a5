use crate::interval::{Point, Range};
use crate::metrics::QueryTrace;

use super::{BitsTree, NodeRef};

impl<C: Point> BitsTree<C> {
    fn emit(&self, at: NodeRef, trace: &mut QueryTrace) {
        trace.nodes_emitted += 1;
        trace.output_segments.extend(self.node(at).list.iter().copied());
    }

    /// All segments `s` with `s.lo <= x <= s.hi`.
    ///
    /// Binary search for the node whose range holds `x` (treating ranges as
    /// half-open while searching). When `x` is that node's lower end, or the
    /// search falls off to the right of a gap, one extra access to the
    /// inorder predecessor picks up the neighbour ending at `x`.
    pub fn stab(&self, x: C) -> QueryTrace {
        let mut trace = QueryTrace::default();
        let mut at = self.root;
        while !at.is_head() {
            trace.nodes_visited += 1;
            let n = self.node(at);
            if x < n.range.lo() {
                if n.left_thread {
                    // fell off into the gap before `at`
                    self.stab_predecessor(n.left, x, &mut trace);
                    return trace;
                }
                at = n.left;
            } else if x >= n.range.hi() {
                if n.right_thread {
                    if n.range.hi() == x {
                        self.emit(at, &mut trace);
                    }
                    return trace;
                }
                at = n.right;
            } else {
                self.emit(at, &mut trace);
                if x == n.range.lo() {
                    self.stab_predecessor(self.predecessor(at), x, &mut trace);
                }
                return trace;
            }
        }
        trace
    }

    fn stab_predecessor(&self, pred: NodeRef, x: C, trace: &mut QueryTrace) {
        if pred.is_head() {
            return;
        }
        trace.nodes_visited += 1;
        if self.node(pred).range.hi() == x {
            self.emit(pred, trace);
        }
    }

    /// All segments whose closed intersection with `q` is non-empty.
    ///
    /// Finds the first node ending at or after `q.lo`, then walks successor
    /// links while nodes still start at or before `q.hi`. Every successor
    /// access counts as one visit.
    pub fn range_query(&self, q: &Range<C>) -> QueryTrace {
        let mut trace = QueryTrace::default();
        let mut first = NodeRef::HEAD;
        let mut at = self.root;
        while !at.is_head() {
            trace.nodes_visited += 1;
            let n = self.node(at);
            if n.range.hi() >= q.lo() {
                first = at;
                if n.left_thread {
                    break;
                }
                at = n.left;
            } else {
                if n.right_thread {
                    break;
                }
                at = n.right;
            }
        }
        if first.is_head() || self.node(first).range.lo() > q.hi() {
            return trace;
        }
        let mut at = first;
        loop {
            self.emit(at, &mut trace);
            if self.node(at).range.hi() > q.hi() {
                break;
            }
            let next = self.successor(at);
            if next.is_head() {
                break;
            }
            trace.nodes_visited += 1;
            if self.node(next).range.lo() > q.hi() {
                break;
            }
            at = next;
        }
        trace
    }
}

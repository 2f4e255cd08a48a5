//! Counters shared by every tree in the crate so their sizes and query costs
//! can be compared side by side.

use crate::interval::IdSet;

/// Size metrics of a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TreeStats {
    pub node_count: usize,
    /// Longest root-to-node path in edges; `-1` for an empty tree.
    pub height: i32,
    /// Total number of (node, segment id) entries over all node lists.
    pub cumulative_list_size: usize,
    pub segment_count: usize,
}

/// Outcome of a stabbing or range query together with its cost.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QueryTrace {
    /// Nodes touched while searching plus nodes reached to emit output.
    pub nodes_visited: usize,
    /// Number of distinct nodes whose list contributed to the answer.
    pub nodes_emitted: usize,
    pub output_segments: IdSet,
}

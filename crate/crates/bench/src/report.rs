use std::io::{self, Write};

use bitstree::TreeStats;
use serde::Serialize;

/// Writes `record` as one JSON object on its own line.
pub fn emit<W: Write, T: Serialize>(out: &mut W, record: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, record)?;
    out.write_all(b"\n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StatsRow {
    pub node_count: usize,
    pub height: i32,
    pub cumulative_list_size: usize,
    pub segment_count: usize,
}

impl From<TreeStats> for StatsRow {
    fn from(s: TreeStats) -> Self {
        Self {
            node_count: s.node_count,
            height: s.height,
            cumulative_list_size: s.cumulative_list_size,
            segment_count: s.segment_count,
        }
    }
}

/// One checked inequality or equality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub name: String,
    pub value: f64,
    pub relation: &'static str,
    pub limit: f64,
    pub pass: bool,
}

impl BoundRow {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self::new(name, value, "<=", limit, value <= limit)
    }

    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self::new(name, value, "<", limit, value < limit)
    }

    pub fn equal(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self::new(name, value, "==", limit, value == limit)
    }

    fn new(name: impl Into<String>, value: f64, relation: &'static str, limit: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            relation,
            limit,
            pass,
        }
    }
}

/// `1.441 * ceil(log2(nodes)) + 1`, the strict height limit for a tree of
/// `nodes` nodes.
pub fn height_limit(nodes: usize) -> f64 {
    1.441 * (nodes.max(1) as f64).log2().ceil() + 1.0
}

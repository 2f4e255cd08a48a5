//! Randomized sweep over the size and height bounds of all three trees.

use std::io::{self, Write};

use bitstree::{BitsTree, Coord, DstTree, Segment, SstTree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::report::{emit, height_limit};
use crate::workload::{nested_set, random_set, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsConfig {
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub window: Window,
}

/// Aggregate over all random trials of one set size.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SizeRow {
    pub n: usize,
    pub trials: usize,
    pub max_nodes: usize,
    pub node_limit: usize,
    pub max_cumulative: usize,
    pub cumulative_limit: usize,
    pub max_height: i32,
    /// Smallest `limit - height` seen, where `limit` is the strict height
    /// bound for that tree's node count.
    pub min_height_margin: f64,
    pub max_sst_nodes: usize,
    pub sst_limit: usize,
    /// Trials whose 2n endpoints were pairwise distinct; SST size must then
    /// equal `sst_limit`.
    pub distinct_trials: usize,
    pub dst_checked: usize,
    pub violations: Vec<String>,
}

/// The nested set `[n-i, n+i]`, which reaches the cumulative list bound.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct NestedRow {
    pub n: usize,
    pub nodes: usize,
    pub cumulative: usize,
    pub cumulative_limit: usize,
    pub height: i32,
    pub violations: Vec<String>,
}

/// Checks one segment set against every bound, appending violations.
fn check_set(segs: &[Segment<Coord>], violations: &mut Vec<String>) -> (bitstree::TreeStats, usize, bool) {
    let n = segs.len();
    let mut bits = BitsTree::new();
    for s in segs {
        if let Err(e) = bits.insert(*s) {
            violations.push(format!("insert {}: {e}", s.id()));
        }
    }
    if let Err(v) = bits.check_invariants() {
        violations.push(format!("invariant: {v}"));
    }
    let b = bits.stats();
    if b.node_count > 2 * n - 1 {
        violations.push(format!("{} nodes > 2n-1 = {}", b.node_count, 2 * n - 1));
    }
    if b.cumulative_list_size > n * n {
        violations.push(format!("cumulative list size {} > n^2 = {}", b.cumulative_list_size, n * n));
    }
    if b.height as f64 >= height_limit(b.node_count) {
        violations.push(format!("height {} not below {:.3}", b.height, height_limit(b.node_count)));
    }

    let sst = SstTree::build(segs).expect("non-empty set").stats().node_count;
    let mut ends: Vec<Coord> = segs.iter().flat_map(|s| [s.lo(), s.hi()]).collect();
    ends.sort_unstable();
    ends.dedup();
    let distinct = ends.len() == 2 * n;
    if sst > 4 * n + 1 {
        violations.push(format!("sst {sst} nodes > 4n+1 = {}", 4 * n + 1));
    }
    if distinct && sst != 4 * n + 1 {
        violations.push(format!("sst {sst} nodes != 4n+1 = {} with distinct endpoints", 4 * n + 1));
    }

    let (lo, hi) = (ends[0], ends[ends.len() - 1]);
    let mut dst = DstTree::new(lo, hi).expect("span of a non-empty set");
    for s in segs {
        dst.insert(*s).expect("segments lie within their own span");
    }
    let want = 2 * (hi - lo) as usize - 1;
    if dst.stats().node_count != want {
        violations.push(format!("dst {} nodes != 2(n2-n1)-1 = {want}", dst.stats().node_count));
    }
    (b, sst, distinct)
}

pub fn size_row(cfg: &BoundsConfig, n: usize) -> SizeRow {
    let mut row = SizeRow {
        n,
        trials: cfg.trials,
        node_limit: 2 * n - 1,
        cumulative_limit: n * n,
        sst_limit: 4 * n + 1,
        min_height_margin: f64::INFINITY,
        ..SizeRow::default()
    };
    for trial in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(((n as u64) << 32) | trial as u64);
        let segs = random_set(&mut rng, cfg.window, n);
        let mut violations = Vec::new();
        let (b, sst, distinct) = check_set(&segs, &mut violations);
        row.max_nodes = row.max_nodes.max(b.node_count);
        row.max_cumulative = row.max_cumulative.max(b.cumulative_list_size);
        row.max_height = row.max_height.max(b.height);
        row.min_height_margin = row.min_height_margin.min(height_limit(b.node_count) - b.height as f64);
        row.max_sst_nodes = row.max_sst_nodes.max(sst);
        row.distinct_trials += usize::from(distinct);
        row.dst_checked += 1;
        row.violations
            .extend(violations.into_iter().map(|v| format!("trial {trial}: {v}")));
    }
    row
}

pub fn nested_row(n: usize) -> NestedRow {
    let segs = nested_set(n);
    let mut violations = Vec::new();
    let (b, _, _) = check_set(&segs, &mut violations);
    NestedRow {
        n,
        nodes: b.node_count,
        cumulative: b.cumulative_list_size,
        cumulative_limit: n * n,
        height: b.height,
        violations,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BoundsSummary {
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub sets_checked: usize,
    pub violations: usize,
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record<'a> {
    BoundsHeader {
        n_max: usize,
        trials: usize,
        seed: u64,
        workload: String,
    },
    Random(&'a SizeRow),
    Nested(&'a NestedRow),
    BoundsSummary(&'a BoundsSummary),
}

/// Sweeps `n = 1..=n_max`, writing a random-trial row and a nested-set row
/// per size followed by a summary.
pub fn cmd_bounds<W: Write>(cfg: &BoundsConfig, out: &mut W) -> io::Result<BoundsSummary> {
    emit(
        out,
        &Record::BoundsHeader {
            n_max: cfg.n_max,
            trials: cfg.trials,
            seed: cfg.seed,
            workload: cfg.window.describe(),
        },
    )?;
    let mut summary = BoundsSummary {
        n_max: cfg.n_max,
        trials: cfg.trials,
        seed: cfg.seed,
        ..BoundsSummary::default()
    };
    for n in 1..=cfg.n_max {
        let random = size_row(cfg, n);
        let nested = nested_row(n);
        summary.sets_checked += cfg.trials + 1;
        summary.violations += random.violations.len() + nested.violations.len();
        emit(out, &Record::Random(&random))?;
        emit(out, &Record::Nested(&nested))?;
    }
    emit(out, &Record::BoundsSummary(&summary))?;
    Ok(summary)
}

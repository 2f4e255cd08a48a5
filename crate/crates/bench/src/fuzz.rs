//! Differential fuzzing of [`BitsTree`] against [`SegmentBag`].
//!
//! A seeded generator produces a concrete op sequence; the replayer applies
//! it to both structures and stops at the first failure. Failing sequences
//! are shrunk by greedy chunk removal and written out as a script.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;

use bitstree::{BitsTree, Coord, Range, SegId, Segment, SegmentBag};
use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::report::emit;
use crate::workload::Window;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuzzOp {
    Insert(Segment<Coord>),
    Delete(SegId),
    Stab(Coord),
    Range(Coord, Coord),
}

impl fmt::Display for FuzzOp {
    /// Script syntax, so a reproducer can be replayed with `run`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuzzOp::Insert(s) => write!(f, "insert s{} {} {}", s.id().0, s.lo(), s.hi()),
            FuzzOp::Delete(id) => write!(f, "delete s{}", id.0),
            FuzzOp::Stab(x) => write!(f, "stab {x}"),
            FuzzOp::Range(lo, hi) => write!(f, "range {lo} {hi}"),
        }
    }
}

/// Relative weights of the four op kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mix {
    pub insert: u32,
    pub delete: u32,
    pub stab: u32,
    pub range: u32,
}

impl Default for Mix {
    fn default() -> Self {
        Self {
            insert: 25,
            delete: 25,
            stab: 25,
            range: 25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub ops: usize,
    pub window: Window,
    pub mix: Mix,
}

impl FuzzConfig {
    pub fn new(seed: u64, ops: usize) -> Self {
        Self {
            seed,
            ops,
            window: Window::default(),
            mix: Mix::default(),
        }
    }
}

/// Generates the op sequence for `cfg`. Deletes pick uniformly among the
/// ids live at that point; with nothing live they name a fresh id, which
/// both structures must reject.
pub fn generate(cfg: &FuzzConfig) -> Vec<FuzzOp> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut live = std::collections::BTreeSet::new();
    let mut next = 0u64;
    let m = cfg.mix;
    let total = m.insert + m.delete + m.stab + m.range;
    assert!(total > 0, "op mix has no weight");
    let w = cfg.window;
    (0..cfg.ops)
        .map(|_| {
            let roll = rng.gen_range(0..total);
            if roll < m.insert {
                let seg = w.segment(&mut rng, SegId(next));
                next += 1;
                live.insert(seg.id());
                FuzzOp::Insert(seg)
            } else if roll < m.insert + m.delete {
                match live.iter().copied().choose(&mut rng) {
                    Some(id) => {
                        live.remove(&id);
                        FuzzOp::Delete(id)
                    }
                    None => {
                        next += 1;
                        FuzzOp::Delete(SegId(next - 1))
                    }
                }
            } else if roll < m.insert + m.delete + m.stab {
                FuzzOp::Stab(rng.gen_range(w.lo - 1..=w.hi + 1))
            } else {
                let (lo, hi) = w.span(&mut rng);
                FuzzOp::Range(lo, hi)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// Query output or delete outcome differs from the oracle.
    Divergence,
    /// `check_invariants` rejected the tree after a mutation.
    Invariant,
    /// A rotation changed the inorder (range, list) sequence.
    Rotation,
    /// A range query visited more than height + touched nodes + 2.
    RangeWalk,
    /// A stabbing query visited more than height + 2 nodes.
    StabCost,
    /// The tree returned an error for a valid operation.
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    /// Index of the offending op.
    pub step: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub inserts: usize,
    pub deletes: usize,
    pub stabs: usize,
    pub ranges: usize,
    pub invariant_checks: usize,
    pub rotations: usize,
    pub max_live: usize,
    pub max_nodes: usize,
    /// Largest observed `visits - (height + touched)` over range queries.
    pub max_range_slack: i64,
}

/// Applies `ops` to a fresh tree and oracle, returning what was exercised
/// and the first failure, if any.
pub fn replay(ops: &[FuzzOp]) -> (Tally, Option<Failure>) {
    let mut tree = BitsTree::new();
    tree.enable_rotation_audit();
    let mut bag = SegmentBag::new();
    let mut tally = Tally {
        max_range_slack: i64::MIN,
        ..Tally::default()
    };
    for (step, op) in ops.iter().enumerate() {
        let fail = |kind, detail: String| Failure { kind, step, detail };
        match *op {
            FuzzOp::Insert(seg) => {
                tally.inserts += 1;
                bag.insert(seg);
                if let Err(e) = tree.insert(seg) {
                    return (tally, Some(fail(FailureKind::Error, format!("{op}: {e}"))));
                }
            }
            FuzzOp::Delete(id) => {
                tally.deletes += 1;
                let expected = bag.remove(id);
                let got = match expected {
                    Some(seg) => tree.delete(&seg),
                    None => Ok(tree.delete_id(id)),
                };
                match got {
                    Err(e) => return (tally, Some(fail(FailureKind::Error, format!("{op}: {e}")))),
                    Ok(found) if found != expected.is_some() => {
                        let detail = format!("{op}: tree reported {found}, oracle {}", expected.is_some());
                        return (tally, Some(fail(FailureKind::Divergence, detail)));
                    }
                    Ok(_) => {}
                }
            }
            FuzzOp::Stab(x) => {
                tally.stabs += 1;
                let t = tree.stab(x);
                let want = bag.stab(x);
                if t.output_segments != want {
                    let detail = format!("{op}: tree {:?}, oracle {:?}", t.output_segments, want);
                    return (tally, Some(fail(FailureKind::Divergence, detail)));
                }
                let h = tree.stats().height as i64;
                if t.nodes_visited as i64 > h + 2 {
                    let detail = format!("{op}: {} visits at height {h}", t.nodes_visited);
                    return (tally, Some(fail(FailureKind::StabCost, detail)));
                }
            }
            FuzzOp::Range(lo, hi) => {
                tally.ranges += 1;
                let q = Range::new(lo, hi).expect("generated ranges are non-empty");
                let t = tree.range_query(&q);
                let want = bag.range(&q);
                if t.output_segments != want {
                    let detail = format!("{op}: tree {:?}, oracle {:?}", t.output_segments, want);
                    return (tally, Some(fail(FailureKind::Divergence, detail)));
                }
                let h = tree.stats().height as i64;
                let touched = tree.iter().filter(|n| n.range.touches(&q)).count() as i64;
                let slack = t.nodes_visited as i64 - (h + touched);
                tally.max_range_slack = tally.max_range_slack.max(slack);
                if slack > 2 {
                    let detail = format!(
                        "{op}: {} visits, height {h}, {touched} nodes touch the query",
                        t.nodes_visited
                    );
                    return (tally, Some(fail(FailureKind::RangeWalk, detail)));
                }
            }
        }
        if matches!(op, FuzzOp::Insert(_) | FuzzOp::Delete(_)) {
            tally.invariant_checks += 1;
            if let Err(v) = tree.check_invariants() {
                return (tally, Some(fail(FailureKind::Invariant, format!("after {op}: {v}"))));
            }
            for rec in tree.drain_rotation_log() {
                tally.rotations += 1;
                if rec.before != rec.after {
                    let detail = format!("{op}: {:?} rotation at {} reordered the inorder sequence", rec.kind, rec.pivot);
                    return (tally, Some(fail(FailureKind::Rotation, detail)));
                }
            }
            tally.max_live = tally.max_live.max(bag.len());
            tally.max_nodes = tally.max_nodes.max(tree.node_count());
        }
    }
    if tally.ranges == 0 {
        tally.max_range_slack = 0;
    }
    (tally, None)
}

/// Greedily removes chunks of `ops` (halving the chunk size down to single
/// ops) while the sequence still fails in the same way.
pub fn shrink(ops: &[FuzzOp], kind: FailureKind) -> Vec<FuzzOp> {
    match replay(ops).1 {
        // everything after the failing op is irrelevant
        Some(f) => minimise(&ops[..=f.step], |c| {
            matches!(replay(c).1, Some(f) if f.kind == kind)
        }),
        None => ops.to_vec(),
    }
}

fn minimise<T: Clone>(items: &[T], still_fails: impl Fn(&[T]) -> bool) -> Vec<T> {
    let mut cur = items.to_vec();
    let mut chunk = (cur.len() / 2).max(1);
    loop {
        let mut i = 0;
        let mut progress = false;
        while i < cur.len() {
            let end = (i + chunk).min(cur.len());
            let mut candidate = cur[..i].to_vec();
            candidate.extend_from_slice(&cur[end..]);
            if !candidate.is_empty() && still_fails(&candidate) {
                cur = candidate;
                progress = true;
            } else {
                i = end;
            }
        }
        if !progress {
            if chunk == 1 {
                return cur;
            }
            chunk = (chunk / 2).max(1);
        }
    }
}

/// Renders a shrunk sequence as a script that `run --check` accepts.
pub fn reproducer_script(cfg: &FuzzConfig, failure: &Failure, ops: &[FuzzOp]) -> String {
    let mut out = format!(
        "# fuzz reproducer: seed {}, {} ops shrunk to {}\n# {:?}: {}\n",
        cfg.seed,
        cfg.ops,
        ops.len(),
        failure.kind,
        failure.detail
    );
    for op in ops {
        out.push_str(&op.to_string());
        out.push('\n');
    }
    out.push_str("check\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzOutcome {
    pub seed: u64,
    pub ops: usize,
    pub tally: Tally,
    pub failure: Option<Failure>,
    /// Shrunk failing sequence.
    #[serde(skip)]
    pub minimal: Vec<FuzzOp>,
}

impl FuzzOutcome {
    pub fn divergences(&self) -> usize {
        self.count(FailureKind::Divergence)
    }

    pub fn count(&self, kind: FailureKind) -> usize {
        usize::from(matches!(&self.failure, Some(f) if f.kind == kind))
    }
}

pub fn fuzz(cfg: &FuzzConfig) -> FuzzOutcome {
    let ops = generate(cfg);
    let (tally, failure) = replay(&ops);
    let minimal = match &failure {
        Some(f) => shrink(&ops, f.kind),
        None => Vec::new(),
    };
    FuzzOutcome {
        seed: cfg.seed,
        ops: cfg.ops,
        tally,
        failure,
        minimal,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub seeds: usize,
    pub ops_per_seed: usize,
    pub divergences: usize,
    pub invariant_failures: usize,
    pub rotation_violations: usize,
    pub range_walk_violations: usize,
    pub stab_cost_violations: usize,
    pub errors: usize,
    pub rotations: usize,
    /// Written reproducer scripts.
    pub reproducers: Vec<String>,
}

impl FuzzSummary {
    pub fn failures(&self) -> usize {
        self.divergences
            + self.invariant_failures
            + self.rotation_violations
            + self.range_walk_violations
            + self.stab_cost_violations
            + self.errors
    }

    /// One-line human summary, e.g. `10 seeds x 10000 ops: 0 divergences`.
    pub fn verdict(&self) -> String {
        let mut s = format!(
            "{} seeds x {} ops: {} divergences",
            self.seeds, self.ops_per_seed, self.divergences
        );
        let others = self.failures() - self.divergences;
        if others > 0 {
            s.push_str(&format!(", {others} other failures"));
        }
        s
    }
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record<'a> {
    #[serde(rename = "fuzz_header")]
    Header {
        seeds: (u64, u64),
        ops: usize,
        window: Window,
        mix: Mix,
        workload: String,
        deletes: &'static str,
    },
    #[serde(rename = "fuzz_seed")]
    Seed {
        #[serde(flatten)]
        outcome: &'a FuzzOutcome,
        #[serde(skip_serializing_if = "Option::is_none")]
        reproducer: Option<String>,
    },
    #[serde(rename = "fuzz_summary")]
    Summary {
        #[serde(flatten)]
        summary: &'a FuzzSummary,
        verdict: String,
    },
}

/// Fuzzes seeds `base.seed .. base.seed + seeds`. A failing seed's shrunk
/// reproducer goes to `repro_dir/fuzz-repro-<seed>.txt`.
pub fn cmd_fuzz<W: Write>(
    base: &FuzzConfig,
    seeds: usize,
    repro_dir: &Path,
    out: &mut W,
) -> io::Result<FuzzSummary> {
    let first = base.seed;
    emit(
        out,
        &Record::Header {
            seeds: (first, first + seeds.saturating_sub(1) as u64),
            ops: base.ops,
            window: base.window,
            mix: base.mix,
            workload: base.window.describe(),
            deletes: "uniform over live ids; a fresh id when none are live",
        },
    )?;
    let mut summary = FuzzSummary {
        seeds,
        ops_per_seed: base.ops,
        ..FuzzSummary::default()
    };
    for k in 0..seeds as u64 {
        let cfg = FuzzConfig {
            seed: first + k,
            ..*base
        };
        let outcome = fuzz(&cfg);
        summary.rotations += outcome.tally.rotations;
        let mut reproducer = None;
        if let Some(f) = &outcome.failure {
            match f.kind {
                FailureKind::Divergence => summary.divergences += 1,
                FailureKind::Invariant => summary.invariant_failures += 1,
                FailureKind::Rotation => summary.rotation_violations += 1,
                FailureKind::RangeWalk => summary.range_walk_violations += 1,
                FailureKind::StabCost => summary.stab_cost_violations += 1,
                FailureKind::Error => summary.errors += 1,
            }
            let path = repro_dir.join(format!("fuzz-repro-{}.txt", cfg.seed));
            std::fs::write(&path, reproducer_script(&cfg, f, &outcome.minimal))?;
            let shown = path.display().to_string();
            summary.reproducers.push(shown.clone());
            reproducer = Some(shown);
        }
        emit(out, &Record::Seed { outcome: &outcome, reproducer })?;
    }
    emit(
        out,
        &Record::Summary {
            summary: &summary,
            verdict: summary.verdict(),
        },
    )?;
    Ok(summary)
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! reach the terminal.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bits_bench::bounds::{cmd_bounds, BoundsConfig};
use bits_bench::compare::compare;
use bits_bench::fuzz::{cmd_fuzz, FuzzConfig, FuzzSummary};
use bits_bench::input::parse_segments;
use bits_bench::run::Structure;
use bits_bench::workload::Window;
use bitstree::{BitsTree, IdSet, Range, RotationKind, SegId, Segment};

const A: SegId = SegId(1);
const B: SegId = SegId(2);
const C: SegId = SegId(3);
const D: SegId = SegId(4);

type Outcome = Result<String, String>;

fn r(lo: i64, hi: i64) -> Range<i64> {
    Range::new(lo, hi).unwrap()
}

fn ids(v: &[SegId]) -> IdSet {
    v.iter().copied().collect()
}

fn table_segments() -> Vec<Segment<i64>> {
    vec![
        Segment::new(A, 5, 12).unwrap(),
        Segment::new(B, 10, 15).unwrap(),
        Segment::new(C, 18, 21).unwrap(),
    ]
}

/// The four-node tree as drawn, with [12,15] at the root and [10,12] as the
/// right child of [5,10].
fn drawn_tree() -> BitsTree<i64> {
    BitsTree::from_layout(table_segments(), &[r(12, 15), r(5, 10), r(10, 12), r(18, 21)]).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let segs = parse_segments("a 5 12\nb 10 15\nc 18 21\n").map_err(|e| e.to_string())?;
    let report = compare(&segs, Some((5, 21))).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let row = |s| {
        let x = report.get(s);
        (x.stats.node_count, x.stats.cumulative_list_size, x.stats.height)
    };
    let got = [row(Structure::Bits), row(Structure::Sst), row(Structure::Dst)];
    ensure(got == [(4, 5, 2), (13, 4, 3), (31, 8, 4)], || {
        format!("(nodes, list size, height) for bits/sst/dst = {got:?}")
    })?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("nodes 4/13/31, list sizes 5/4/8, heights 2/3/4 in {elapsed:.1?}"))
}

fn worked_insertion() -> Outcome {
    let mut t = drawn_tree();
    t.enable_rotation_audit();
    t.insert(Segment::new(D, 2, 7).unwrap()).map_err(|e| e.to_string())?;
    t.check_invariants().map_err(|v| v.to_string())?;
    let want = vec![
        (r(2, 5), ids(&[D])),
        (r(5, 7), ids(&[A, D])),
        (r(7, 10), ids(&[A])),
        (r(10, 12), ids(&[A, B])),
        (r(12, 15), ids(&[B])),
        (r(18, 21), ids(&[C])),
    ];
    let got = t.inorder();
    ensure(got == want, || format!("inorder {got:?}"))?;
    let kinds: Vec<RotationKind> = t.drain_rotation_log().iter().map(|r| r.kind).collect();
    ensure(kinds == [RotationKind::LeftRight], || format!("rotations {kinds:?}"))?;
    Ok("six inorder nodes with expected lists; one left-right rotation".into())
}

fn worked_deletion() -> Outcome {
    let mut t = drawn_tree();
    t.insert(Segment::new(D, 2, 7).unwrap()).map_err(|e| e.to_string())?;
    let found = t.delete(&Segment::new(A, 5, 12).unwrap()).map_err(|e| e.to_string())?;
    ensure(found, || "a not found".into())?;
    t.check_invariants().map_err(|v| v.to_string())?;
    let want = vec![(r(2, 7), ids(&[D])), (r(10, 15), ids(&[B])), (r(18, 21), ids(&[C]))];
    let got = t.inorder();
    ensure(got == want, || format!("inorder {got:?}"))?;
    Ok("[2,7]:{d} [10,15]:{b} [18,21]:{c}".into())
}

fn stab_maxima() -> Outcome {
    let segs = parse_segments("a 5 12\nb 10 15\nc 18 21\n").map_err(|e| e.to_string())?;
    let report = compare(&segs, Some((5, 21))).map_err(|e| e.to_string())?;
    let got = |s| (report.get(s).max_stab_visits, report.get(s).max_stab_at);
    let (sst, dst, bits) = (got(Structure::Sst), got(Structure::Dst), got(Structure::Bits));
    ensure(sst == (7, 15) && dst == (9, 13) && bits.0 == 4, || {
        format!("(visits, at) sst {sst:?}, dst {dst:?}, bits {bits:?}")
    })?;
    ensure(
        report.structures.iter().all(|s| s.stab_mismatches == 0),
        || "a stabbing answer disagreed with the oracle".into(),
    )?;
    Ok(format!("sst 7 at x=15, dst 9 at x=13, bits 4 at x={}", bits.1))
}

fn fuzz_corpus() -> (FuzzSummary, Duration) {
    let dir = std::env::temp_dir();
    let start = Instant::now();
    let summary = cmd_fuzz(&FuzzConfig::new(1, 10_000), 10, &dir, &mut std::io::sink()).expect("report sink");
    (summary, start.elapsed())
}

fn differential_fuzz(s: &FuzzSummary, elapsed: Duration) -> Outcome {
    ensure(s.divergences == 0 && s.invariant_failures == 0 && s.errors == 0, || {
        format!("{}; reproducers {:?}", s.verdict(), s.reproducers)
    })?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{}, 0 invariant failures, {elapsed:.1?}", s.verdict()))
}

fn rotation_transparency(s: &FuzzSummary) -> Outcome {
    ensure(s.rotation_violations == 0, || format!("{} violating seeds", s.rotation_violations))?;
    ensure(s.rotations > 0, || "corpus triggered no rotations".into())?;
    Ok(format!("{} rotation events, inorder unchanged by each", s.rotations))
}

fn range_walk_cost(s: &FuzzSummary) -> Outcome {
    ensure(s.range_walk_violations == 0, || format!("{} violating seeds", s.range_walk_violations))?;
    Ok("every range query within height + touched nodes + 2 visits".into())
}

fn bound_sweep() -> Outcome {
    let cfg = BoundsConfig {
        n_max: 200,
        trials: 20,
        seed: 1,
        window: Window::default(),
    };
    let mut out = Vec::new();
    let summary = cmd_bounds(&cfg, &mut out).map_err(|e| e.to_string())?;
    if summary.violations > 0 {
        let text = String::from_utf8_lossy(&out);
        let first = text.lines().find(|l| !l.contains("\"violations\":[]")).unwrap_or("");
        return Err(format!("{} violations, first: {first}", summary.violations));
    }
    Ok(format!("{} segment sets, 0 violations", summary.sets_checked))
}

fn main() -> ExitCode {
    let (fuzz, fuzz_time) = fuzz_corpus();
    let results: Vec<(&str, Outcome)> = vec![
        ("table reproduction", table_reproduction()),
        ("worked insertion", worked_insertion()),
        ("worked deletion", worked_deletion()),
        ("stabbing-cost maxima", stab_maxima()),
        ("differential fuzz", differential_fuzz(&fuzz, fuzz_time)),
        ("bound sweep", bound_sweep()),
        ("rotation transparency", rotation_transparency(&fuzz)),
        ("range-query walk cost", range_walk_cost(&fuzz)),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

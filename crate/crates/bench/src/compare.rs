//! Side-by-side size and stabbing-cost comparison of the three trees.

use std::io::{self, Write};

use bitstree::{BitsTree, Coord, DstTree, QueryTrace, Segment, SegmentBag, SstTree};
use serde::Serialize;

use crate::input::{Names, NamedSegment};
use crate::report::{emit, height_limit, BoundRow, StatsRow};
use crate::run::Structure;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub structure: Structure,
    #[serde(flatten)]
    pub stats: StatsRow,
    /// Largest stabbing cost over every integer point in the probe span.
    pub max_stab_visits: usize,
    /// Smallest point attaining `max_stab_visits`.
    pub max_stab_at: Coord,
    /// Points where the answer differed from the brute-force oracle.
    pub stab_mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub segments: usize,
    pub probe: (Coord, Coord),
    pub dst_range: (Coord, Coord),
    pub structures: Vec<StructureReport>,
    pub bounds: Vec<BoundRow>,
}

impl CompareReport {
    pub fn get(&self, s: Structure) -> &StructureReport {
        self.structures.iter().find(|r| r.structure == s).expect("every structure is reported")
    }

    pub fn passed(&self) -> bool {
        self.structures.iter().all(|r| r.stab_mismatches == 0) && self.bounds.iter().all(|b| b.pass)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error("compare needs at least one segment")]
    NoSegments,
    #[error("{0}")]
    Baseline(#[from] bitstree::BaselineError),
    #[error("{0}")]
    Tree(#[from] bitstree::TreeError),
}

fn profile(
    structure: Structure,
    stats: bitstree::TreeStats,
    probe: (Coord, Coord),
    bag: &SegmentBag<Coord>,
    stab: impl Fn(Coord) -> QueryTrace,
) -> StructureReport {
    let mut best = (0, probe.0);
    let mut mismatches = 0;
    for x in probe.0..=probe.1 {
        let t = stab(x);
        if t.nodes_visited > best.0 {
            best = (t.nodes_visited, x);
        }
        mismatches += usize::from(t.output_segments != bag.stab(x));
    }
    StructureReport {
        structure,
        stats: stats.into(),
        max_stab_visits: best.0,
        max_stab_at: best.1,
        stab_mismatches: mismatches,
    }
}

/// Builds BITS (by insertion in file order), SST and DST over `segments` and
/// profiles each one. Stabbing costs are probed at every integer from one
/// below the smallest endpoint to one above the largest.
pub fn compare(segments: &[NamedSegment], dst_range: Option<(Coord, Coord)>) -> Result<CompareReport, CompareError> {
    let mut names = Names::default();
    let segs: Vec<Segment<Coord>> = segments
        .iter()
        .map(|s| Segment::new(names.intern(&s.name), s.lo, s.hi).expect("parser rejects empty intervals"))
        .collect();
    let lo = segs.iter().map(|s| s.lo()).min().ok_or(CompareError::NoSegments)?;
    let hi = segs.iter().map(|s| s.hi()).max().ok_or(CompareError::NoSegments)?;
    let (d_lo, d_hi) = dst_range.unwrap_or((lo, hi));
    let probe = (lo - 1, hi + 1);

    let mut bits = BitsTree::new();
    for s in &segs {
        bits.insert(*s)?;
    }
    let sst = SstTree::build(&segs)?;
    let mut dst = DstTree::new(d_lo, d_hi)?;
    for s in &segs {
        dst.insert(*s)?;
    }
    let bag: SegmentBag<Coord> = segs.iter().copied().collect();

    let structures = vec![
        profile(Structure::Bits, bits.stats(), probe, &bag, |x| bits.stab(x)),
        profile(Structure::Sst, sst.stats(), probe, &bag, |x| sst.stab(x)),
        profile(Structure::Dst, dst.stats(), probe, &bag, |x| dst.stab(x)),
    ];

    let n = segs.len() as f64;
    let b = bits.stats();
    let mut bounds = vec![
        BoundRow::at_most("bits nodes <= 2n-1", b.node_count as f64, 2.0 * n - 1.0),
        BoundRow::at_most("bits cumulative list size <= n^2", b.cumulative_list_size as f64, n * n),
        BoundRow::below("bits height < 1.441*ceil(log2 nodes)+1", b.height as f64, height_limit(b.node_count)),
        BoundRow::at_most(
            "bits stab visits <= height+2",
            structures[0].max_stab_visits as f64,
            b.height as f64 + 2.0,
        ),
        BoundRow::at_most("sst nodes <= 4n+1", sst.stats().node_count as f64, 4.0 * n + 1.0),
        BoundRow::equal(
            "dst nodes == 2(n2-n1)-1",
            dst.stats().node_count as f64,
            2.0 * (d_hi - d_lo) as f64 - 1.0,
        ),
    ];
    let mut ends: Vec<Coord> = segs.iter().flat_map(|s| [s.lo(), s.hi()]).collect();
    ends.sort_unstable();
    ends.dedup();
    if ends.len() == 2 * segs.len() {
        bounds.push(BoundRow::equal(
            "sst nodes == 4n+1 (distinct endpoints)",
            sst.stats().node_count as f64,
            4.0 * n + 1.0,
        ));
    }
    Ok(CompareReport {
        segments: segs.len(),
        probe,
        dst_range: (d_lo, d_hi),
        structures,
        bounds,
    })
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record<'a> {
    Compare {
        segments: usize,
        probe: (Coord, Coord),
        dst_range: (Coord, Coord),
    },
    Structure(&'a StructureReport),
    Bound(&'a BoundRow),
    Verdict { pass: bool },
}

pub fn write_report<W: Write>(report: &CompareReport, out: &mut W) -> io::Result<()> {
    emit(
        out,
        &Record::Compare {
            segments: report.segments,
            probe: report.probe,
            dst_range: report.dst_range,
        },
    )?;
    for s in &report.structures {
        emit(out, &Record::Structure(s))?;
    }
    for b in &report.bounds {
        emit(out, &Record::Bound(b))?;
    }
    emit(out, &Record::Verdict { pass: report.passed() })
}

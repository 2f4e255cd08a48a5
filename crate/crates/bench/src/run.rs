//! Script replay against one or more structures.

use std::io::{self, Write};

use bitstree::{BitsTree, Coord, DstTree, QueryTrace, Range, Segment, SstTree};
use serde::Serialize;

use crate::input::{Names, NamedSegment, ScriptLine, ScriptOp};
use crate::report::{emit, StatsRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Bits,
    Sst,
    Dst,
}

impl Structure {
    pub const ALL: [Structure; 3] = [Structure::Bits, Structure::Sst, Structure::Dst];
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub structures: Vec<Structure>,
    /// Fixed DST range; defaults to the span of the loaded segments.
    pub dst_range: Option<(Coord, Coord)>,
    /// Check invariants after every mutation.
    pub check: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub ops: usize,
    pub checks: usize,
    pub invariant_failures: usize,
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record<'a> {
    Load {
        structure: Structure,
        segments: usize,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        rejected: Vec<Rejected>,
        #[serde(skip_serializing_if = "Option::is_none")]
        range: Option<(Coord, Coord)>,
        #[serde(skip_serializing_if = "Option::is_none")]
        unavailable: Option<String>,
    },
    Insert {
        line: usize,
        structure: Structure,
        id: &'a str,
        ok: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
    },
    Delete {
        line: usize,
        structure: Structure,
        id: &'a str,
        found: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
    },
    Stab {
        line: usize,
        structure: Structure,
        x: Coord,
        segments: Vec<String>,
        nodes_visited: usize,
        nodes_emitted: usize,
    },
    Range {
        line: usize,
        structure: Structure,
        lo: Coord,
        hi: Coord,
        segments: Vec<String>,
        nodes_visited: usize,
        nodes_emitted: usize,
    },
    Stats {
        line: usize,
        structure: Structure,
        #[serde(flatten)]
        stats: StatsRow,
    },
    Check {
        line: usize,
        structure: Structure,
        ok: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        violation: Option<String>,
    },
    Skipped {
        line: usize,
        structure: Structure,
        op: String,
        reason: &'static str,
    },
    Summary(RunSummary),
}

#[derive(Serialize)]
struct Rejected {
    id: String,
    error: String,
}

enum Target {
    Bits(BitsTree<Coord>),
    Sst(SstTree),
    Dst(DstTree),
}

struct Slot {
    structure: Structure,
    /// `None` when the structure could not be built for this input.
    target: Option<Target>,
}

fn segment(names: &mut Names, s: &NamedSegment) -> Segment<Coord> {
    Segment::new(names.intern(&s.name), s.lo, s.hi).expect("parser rejects empty intervals")
}

fn load(
    structure: Structure,
    initial: &[Segment<Coord>],
    names: &Names,
    opts: &RunOptions,
) -> (Slot, Record<'static>) {
    let mut rejected = Vec::new();
    let mut range = None;
    let target = match structure {
        Structure::Bits => {
            let mut t = BitsTree::new();
            for s in initial {
                if let Err(e) = t.insert(*s) {
                    rejected.push(Rejected {
                        id: names.name(s.id()).to_string(),
                        error: e.to_string(),
                    });
                }
            }
            Ok(Target::Bits(t))
        }
        Structure::Sst => SstTree::build(initial).map(Target::Sst).map_err(|e| e.to_string()),
        Structure::Dst => {
            let span = opts.dst_range.or_else(|| {
                let lo = initial.iter().map(|s| s.lo()).min()?;
                let hi = initial.iter().map(|s| s.hi()).max()?;
                Some((lo, hi))
            });
            range = span;
            match span {
                None => Err("no segments to derive a range from; pass --dst-range".to_string()),
                Some((lo, hi)) => DstTree::new(lo, hi).map_err(|e| e.to_string()).map(|mut t| {
                    for s in initial {
                        if let Err(e) = t.insert(*s) {
                            rejected.push(Rejected {
                                id: names.name(s.id()).to_string(),
                                error: e.to_string(),
                            });
                        }
                    }
                    Target::Dst(t)
                }),
            }
        }
    };
    let (target, unavailable) = match target {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e)),
    };
    let segments = initial.len() - rejected.len();
    let record = Record::Load {
        structure,
        segments: if target.is_some() { segments } else { 0 },
        rejected,
        range,
        unavailable,
    };
    (Slot { structure, target }, record)
}

fn query_record<'a>(line: usize, structure: Structure, op: &ScriptOp, t: QueryTrace, names: &Names) -> Record<'a> {
    let segments = names.render(&t.output_segments);
    match *op {
        ScriptOp::Stab(x) => Record::Stab {
            line,
            structure,
            x,
            segments,
            nodes_visited: t.nodes_visited,
            nodes_emitted: t.nodes_emitted,
        },
        ScriptOp::Range(lo, hi) => Record::Range {
            line,
            structure,
            lo,
            hi,
            segments,
            nodes_visited: t.nodes_visited,
            nodes_emitted: t.nodes_emitted,
        },
        _ => unreachable!("only queries produce traces"),
    }
}

fn check(target: &Target) -> Result<(), String> {
    match target {
        Target::Bits(t) => t.check_invariants().map_err(|v| v.to_string()),
        Target::Sst(t) => t.check_canonical(),
        Target::Dst(t) => t.check_canonical(),
    }
}

/// Replays `script` after loading `segments` into every selected structure,
/// writing one record per line to `out`.
pub fn cmd_run<W: Write>(
    segments: &[NamedSegment],
    script: &[ScriptLine],
    opts: &RunOptions,
    out: &mut W,
) -> io::Result<RunSummary> {
    let mut names = Names::default();
    let initial: Vec<Segment<Coord>> = segments.iter().map(|s| segment(&mut names, s)).collect();
    let mut structures = opts.structures.clone();
    structures.sort();
    structures.dedup();

    let mut slots = Vec::new();
    for s in structures {
        let (slot, record) = load(s, &initial, &names, opts);
        emit(out, &record)?;
        slots.push(slot);
    }

    let mut summary = RunSummary::default();
    for ScriptLine { line, op } in script {
        let line = *line;
        summary.ops += 1;
        let seg = match op {
            ScriptOp::Insert(s) => Some(segment(&mut names, s)),
            _ => None,
        };
        for slot in &mut slots {
            let structure = slot.structure;
            let Some(target) = slot.target.as_mut() else {
                let reason = "structure unavailable for this input";
                emit(out, &Record::Skipped { line, structure, op: op.to_string(), reason })?;
                continue;
            };
            let mutated = match (op, &mut *target) {
                (ScriptOp::Insert(s), Target::Bits(t)) => {
                    let r = t.insert(seg.unwrap());
                    emit(out, &Record::Insert { line, structure, id: &s.name, ok: r.is_ok(), error: r.err().map(|e| e.to_string()) })?;
                    true
                }
                (ScriptOp::Insert(s), Target::Dst(t)) => {
                    let r = t.insert(seg.unwrap());
                    emit(out, &Record::Insert { line, structure, id: &s.name, ok: r.is_ok(), error: r.err().map(|e| e.to_string()) })?;
                    true
                }
                (ScriptOp::Delete(name), Target::Bits(t)) => {
                    let found = names.get(name).is_some_and(|id| t.delete_id(id));
                    emit(out, &Record::Delete { line, structure, id: name, found, error: None })?;
                    true
                }
                (ScriptOp::Delete(name), Target::Dst(t)) => {
                    let found = names.get(name).is_some_and(|id| t.delete(id));
                    emit(out, &Record::Delete { line, structure, id: name, found, error: None })?;
                    true
                }
                (ScriptOp::Insert(_) | ScriptOp::Delete(_), Target::Sst(_)) => {
                    let reason = "static structure; mutation ignored";
                    emit(out, &Record::Skipped { line, structure, op: op.to_string(), reason })?;
                    false
                }
                (ScriptOp::Stab(x), t) => {
                    let trace = match t {
                        Target::Bits(t) => t.stab(*x),
                        Target::Sst(t) => t.stab(*x),
                        Target::Dst(t) => t.stab(*x),
                    };
                    emit(out, &query_record(line, structure, op, trace, &names))?;
                    false
                }
                (ScriptOp::Range(lo, hi), Target::Bits(t)) => {
                    let q = Range::new(*lo, *hi).expect("parser rejects empty ranges");
                    emit(out, &query_record(line, structure, op, t.range_query(&q), &names))?;
                    false
                }
                (ScriptOp::Range(..), _) => {
                    let reason = "range queries are only supported by bits";
                    emit(out, &Record::Skipped { line, structure, op: op.to_string(), reason })?;
                    false
                }
                (ScriptOp::Stats, t) => {
                    let stats = match t {
                        Target::Bits(t) => t.stats(),
                        Target::Sst(t) => t.stats(),
                        Target::Dst(t) => t.stats(),
                    };
                    emit(out, &Record::Stats { line, structure, stats: stats.into() })?;
                    false
                }
                (ScriptOp::Check, t) => {
                    summary.checks += 1;
                    let r = check(t);
                    summary.invariant_failures += usize::from(r.is_err());
                    emit(out, &Record::Check { line, structure, ok: r.is_ok(), violation: r.err() })?;
                    false
                }
            };
            if mutated && opts.check {
                summary.checks += 1;
                if let Err(v) = check(target) {
                    summary.invariant_failures += 1;
                    emit(out, &Record::Check { line, structure, ok: false, violation: Some(v) })?;
                }
            }
        }
    }
    emit(out, &Record::Summary(summary))?;
    Ok(summary)
}

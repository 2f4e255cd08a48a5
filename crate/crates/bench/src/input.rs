//! Segment and script file formats.
//!
//! Segment file: one `<id> <lo> <hi>` record per line. Script file: one of
//! `insert <id> <lo> <hi>`, `delete <id>`, `stab <x>`, `range <lo> <hi>`,
//! `stats`, `check` per line. Both accept blank lines and `#` comments.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use bitstree::{Coord, SegId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A segment as written in a segment file or insert command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSegment {
    pub name: String,
    pub lo: Coord,
    pub hi: Coord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptOp {
    Insert(NamedSegment),
    Delete(String),
    Stab(Coord),
    Range(Coord, Coord),
    Stats,
    Check,
}

impl fmt::Display for ScriptOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptOp::Insert(s) => write!(f, "insert {} {} {}", s.name, s.lo, s.hi),
            ScriptOp::Delete(name) => write!(f, "delete {name}"),
            ScriptOp::Stab(x) => write!(f, "stab {x}"),
            ScriptOp::Range(lo, hi) => write!(f, "range {lo} {hi}"),
            ScriptOp::Stats => f.write_str("stats"),
            ScriptOp::Check => f.write_str("check"),
        }
    }
}

/// A script line together with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptLine {
    pub line: usize,
    pub op: ScriptOp,
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn coord(line: usize, field: &str) -> Result<Coord, InputError> {
    field.parse().map_err(|_| InputError::Parse {
        line,
        message: format!("expected an integer coordinate, found `{field}`"),
    })
}

fn endpoints(line: usize, lo: &str, hi: &str) -> Result<(Coord, Coord), InputError> {
    let (lo, hi) = (coord(line, lo)?, coord(line, hi)?);
    if lo >= hi {
        return Err(InputError::Parse {
            line,
            message: format!("empty interval [{lo}, {hi}]: lower end must be below upper end"),
        });
    }
    Ok((lo, hi))
}

fn arity(line: usize, fields: &[&str], want: usize, usage: &str) -> Result<(), InputError> {
    if fields.len() == want {
        Ok(())
    } else {
        Err(InputError::Parse {
            line,
            message: format!("expected `{usage}`"),
        })
    }
}

pub fn parse_segments(text: &str) -> Result<Vec<NamedSegment>, InputError> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for (line, f) in records(text) {
        arity(line, &f, 3, "<id> <lo> <hi>")?;
        let (lo, hi) = endpoints(line, f[1], f[2])?;
        if let Some(first) = seen.insert(f[0].to_string(), line) {
            return Err(InputError::Parse {
                line,
                message: format!("segment id `{}` already defined on line {first}", f[0]),
            });
        }
        out.push(NamedSegment {
            name: f[0].to_string(),
            lo,
            hi,
        });
    }
    Ok(out)
}

pub fn parse_script(text: &str) -> Result<Vec<ScriptLine>, InputError> {
    records(text)
        .map(|(line, f)| {
            let op = match f[0] {
                "insert" => {
                    arity(line, &f, 4, "insert <id> <lo> <hi>")?;
                    let (lo, hi) = endpoints(line, f[2], f[3])?;
                    ScriptOp::Insert(NamedSegment {
                        name: f[1].to_string(),
                        lo,
                        hi,
                    })
                }
                "delete" => {
                    arity(line, &f, 2, "delete <id>")?;
                    ScriptOp::Delete(f[1].to_string())
                }
                "stab" => {
                    arity(line, &f, 2, "stab <x>")?;
                    ScriptOp::Stab(coord(line, f[1])?)
                }
                "range" => {
                    arity(line, &f, 3, "range <lo> <hi>")?;
                    let (lo, hi) = endpoints(line, f[1], f[2])?;
                    ScriptOp::Range(lo, hi)
                }
                "stats" => {
                    arity(line, &f, 1, "stats")?;
                    ScriptOp::Stats
                }
                "check" => {
                    arity(line, &f, 1, "check")?;
                    ScriptOp::Check
                }
                other => {
                    return Err(InputError::Parse {
                        line,
                        message: format!("unknown command `{other}`"),
                    })
                }
            };
            Ok(ScriptLine { line, op })
        })
        .collect()
}

pub fn load_segments(path: &Path) -> Result<Vec<NamedSegment>, InputError> {
    parse_segments(&read(path)?)
}

pub fn load_script(path: &Path) -> Result<Vec<ScriptLine>, InputError> {
    parse_script(&read(path)?)
}

/// Bidirectional mapping between textual segment names and ids.
#[derive(Debug, Default, Clone)]
pub struct Names {
    ids: HashMap<String, SegId>,
    names: Vec<String>,
}

impl Names {
    pub fn intern(&mut self, name: &str) -> SegId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = SegId(self.names.len() as u64);
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<SegId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: SegId) -> &str {
        &self.names[id.0 as usize]
    }

    /// Names of `ids`, sorted.
    pub fn render<'a>(&self, ids: impl IntoIterator<Item = &'a SegId>) -> Vec<String> {
        let mut out: Vec<String> = ids.into_iter().map(|&id| self.name(id).to_string()).collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_file_with_comments() {
        let text = "# table\na 5 12\n\nb 10 15   # overlapping\nc 18 21\n";
        let segs = parse_segments(text).unwrap();
        assert_eq!(segs.len(), 3);
        assert_eq!(
            segs[1],
            NamedSegment {
                name: "b".into(),
                lo: 10,
                hi: 15
            }
        );
    }

    #[test]
    fn segment_file_errors_carry_line_numbers() {
        let err = parse_segments("a 1 2\nb 3 3\n").unwrap_err();
        assert!(matches!(err, InputError::Parse { line: 2, .. }), "{err}");
        let err = parse_segments("a 1 2\n\na x 4\n").unwrap_err();
        assert!(matches!(err, InputError::Parse { line: 3, .. }), "{err}");
        let err = parse_segments("a 1 2\na 3 4\n").unwrap_err();
        assert!(matches!(err, InputError::Parse { line: 2, .. }), "{err}");
        let err = parse_segments("a 1\n").unwrap_err();
        assert!(matches!(err, InputError::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn script_commands() {
        let text = "insert d 2 7\ndelete a\nstab 11\nrange 15 18\nstats\ncheck\n";
        let ops: Vec<ScriptOp> = parse_script(text).unwrap().into_iter().map(|l| l.op).collect();
        assert_eq!(
            ops,
            vec![
                ScriptOp::Insert(NamedSegment {
                    name: "d".into(),
                    lo: 2,
                    hi: 7
                }),
                ScriptOp::Delete("a".into()),
                ScriptOp::Stab(11),
                ScriptOp::Range(15, 18),
                ScriptOp::Stats,
                ScriptOp::Check,
            ]
        );
        // rendering round-trips
        let rendered: String = ops.iter().map(|o| format!("{o}\n")).collect();
        let again: Vec<ScriptOp> = parse_script(&rendered).unwrap().into_iter().map(|l| l.op).collect();
        assert_eq!(again, ops);
    }

    #[test]
    fn script_errors() {
        assert!(matches!(
            parse_script("stab 1\nfrobnicate\n"),
            Err(InputError::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_script("range 4 4\n"), Err(InputError::Parse { line: 1, .. })));
        assert!(matches!(parse_script("stats now\n"), Err(InputError::Parse { line: 1, .. })));
    }

    #[test]
    fn names_are_stable() {
        let mut n = Names::default();
        let a = n.intern("a");
        let b = n.intern("b");
        assert_eq!(n.intern("a"), a);
        assert_eq!(n.name(b), "b");
        assert_eq!(n.render(&[b, a]), vec!["a", "b"]);
        assert_eq!(n.get("zz"), None);
    }
}

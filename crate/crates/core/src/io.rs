//! Set files.
//!
//! JSON: `{"moduli": [n1, ..., nd], "points": [[c1, ..., cd], ...]}`.
//!
//! Text: a `moduli: n1 ... nd` header, then `d` rows of residues; each column
//! is one element. `#` starts a comment.
//!
//! ```text
//! moduli: 24 24 24
//! 0 10 20  1 21 14
//! 0 22  3 20  2  7
//! 0 22 23 18  4 11
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Group, PointSet};

#[derive(Serialize, Deserialize)]
struct SetFile {
    moduli: Vec<i64>,
    points: Vec<Vec<i64>>,
}

/// Parses either format; `group` supplies the moduli when a text file has no header.
pub fn parse_set(text: &str, group: Option<&Group>) -> Result<PointSet> {
    if text.trim_start().starts_with('{') {
        parse_json(text, group)
    } else {
        parse_text(text, group)
    }
}

fn parse_json(text: &str, group: Option<&Group>) -> Result<PointSet> {
    let f: SetFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let g = Group::from_signed(&f.moduli)?;
    if let Some(expected) = group {
        expected.ensure_same(&g)?;
    }
    for (i, p) in f.points.iter().enumerate() {
        if p.len() != g.rank() {
            return Err(Error::Parse {
                line: 0,
                column: 0,
                message: format!("point #{} has {} coordinates, expected {}", i + 1, p.len(), g.rank()),
            });
        }
    }
    PointSet::from_coords(&g, &f.points)
}

fn parse_text(text: &str, group: Option<&Group>) -> Result<PointSet> {
    let mut moduli: Option<(Vec<i64>, usize)> = None;
    let mut rows: Vec<(usize, Vec<i64>)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let (body, offset) = match line.trim_start().strip_prefix("moduli:") {
            Some(rest) => {
                if moduli.is_some() || !rows.is_empty() {
                    return Err(Error::Parse { line: line_no, column: 1, message: "misplaced header".into() });
                }
                (rest, line.len() - rest.len())
            }
            None => (line, 0),
        };
        let mut values = Vec::new();
        let mut pos = 0;
        for tok in body.split_whitespace() {
            let at = body[pos..].find(tok).map_or(pos, |o| pos + o);
            pos = at + tok.len();
            values.push(tok.parse::<i64>().map_err(|_| Error::Parse {
                line: line_no,
                column: offset + at + 1,
                message: format!("not an integer: {tok}"),
            })?);
        }
        if offset > 0 {
            moduli = Some((values, line_no));
        } else {
            if let Some((_, first)) = rows.first() {
                if first.len() != values.len() {
                    return Err(Error::Parse {
                        line: line_no,
                        column: 1,
                        message: format!("row has {} entries, expected {}", values.len(), first.len()),
                    });
                }
            }
            rows.push((line_no, values));
        }
    }
    let g = match (&moduli, group) {
        (Some((m, line)), given) => {
            let g = Group::from_signed(m).map_err(|e| Error::Parse { line: *line, column: 1, message: e.to_string() })?;
            if let Some(expected) = given {
                expected.ensure_same(&g)?;
            }
            g
        }
        (None, Some(g)) => g.clone(),
        (None, None) => {
            return Err(Error::Parse { line: 1, column: 1, message: "missing `moduli:` header".into() });
        }
    };
    if rows.len() != g.rank() {
        let line = rows.last().map_or(1, |(l, _)| *l);
        return Err(Error::Parse {
            line,
            column: 1,
            message: format!("{} coordinate rows for a rank-{} group", rows.len(), g.rank()),
        });
    }
    let values: Vec<Vec<i64>> = rows.into_iter().map(|(_, r)| r).collect();
    PointSet::from_columns(&g, &values)
}

/// Reads a set file; I/O failures become [`Error::Io`] naming the path.
pub fn read_set(path: &Path, group: Option<&Group>) -> Result<PointSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_set(&text, group).map_err(|e| match e {
        Error::Parse { line, column, message } => {
            Error::Parse { line, column, message: format!("{}: {message}", path.display()) }
        }
        other => other,
    })
}

/// Every `.json` or `.txt` file in a directory, in file-name order.
pub fn read_set_dir(dir: &Path, group: Option<&Group>) -> Result<Vec<(PathBuf, PointSet)>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("json" | "txt")))
        .collect();
    paths.sort();
    paths.into_iter().map(|p| read_set(&p, group).map(|s| (p, s))).collect()
}

pub fn set_to_json(set: &PointSet) -> String {
    let f = SetFile {
        moduli: set.group().moduli().iter().map(|&m| m as i64).collect(),
        points: set.coords_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect(),
    };
    serde_json::to_string(&f).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let g = Group::new(&[4, 6]).unwrap();
        let s = PointSet::from_coords(&g, &[[0, 0], [1, 5], [3, 2]]).unwrap();
        assert_eq!(parse_set(&set_to_json(&s), None).unwrap(), s);
        assert_eq!(parse_set(&set_to_json(&s), Some(&g)).unwrap(), s);
        assert!(parse_set(&set_to_json(&s), Some(&Group::cyclic(24).unwrap())).is_err());
    }

    #[test]
    fn text_format() {
        let text = "# appendix tile\nmoduli: 6 6\n0 1 0 2\n0 0 1 2\n";
        let s = parse_set(text, None).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.contains(s.group().reduce(&[2, 2]).unwrap()));
        let bare = "0 1 0\n0 0 1\n";
        assert!(parse_set(bare, None).is_err());
        assert_eq!(parse_set(bare, Some(&Group::new(&[6, 6]).unwrap())).unwrap().len(), 3);
    }

    #[test]
    fn errors_have_positions() {
        match parse_set("moduli: 6 6\n0 1\n0 x\n", None) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
        match parse_set("moduli: 6 q\n", None) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 11)),
            other => panic!("{other:?}"),
        }
        match parse_set("{\"moduli\": [6],\n \"points\": [[0], [1,]]}", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_set("moduli: 6 6\n0 1\n", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_set("moduli: 0\n0\n", None), Err(Error::Parse { .. })));
    }
}

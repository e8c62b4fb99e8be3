//! Loader for the built-in matrices in `data/matrices.txt`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{Group, PointSet};

const BUILTIN: &str = include_str!("../../data/matrices.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Columns are group elements.
    Columns,
    /// Rows are (dual) group elements.
    Rows,
    Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub name: String,
    pub layout: Layout,
    pub scale: i64,
    pub denominator: i64,
    pub modulus: Option<u32>,
    /// Entries as written, before `scale`.
    pub raw: Vec<Vec<i64>>,
    pub sha256: String,
}

impl Matrix {
    /// Entries with `scale` applied (numerators when `denominator > 1`).
    pub fn values(&self) -> Vec<Vec<i64>> {
        self.raw.iter().map(|r| r.iter().map(|&x| x * self.scale).collect()).collect()
    }

    pub fn rows(&self) -> usize {
        self.raw.len()
    }

    pub fn cols(&self) -> usize {
        self.raw.first().map_or(0, Vec::len)
    }

    /// The point set in `Z_modulus^d` described by this matrix.
    pub fn point_set(&self) -> Result<PointSet> {
        let m = self.modulus.ok_or_else(|| Error::Data(format!("{} has no modulus", self.name)))?;
        let values = self.values();
        match self.layout {
            Layout::Columns => PointSet::from_columns(&Group::uniform(m, self.rows())?, &values),
            Layout::Rows => PointSet::from_coords(&Group::uniform(m, self.cols())?, &values),
            Layout::Matrix => Err(Error::Data(format!("{} is not a point set", self.name))),
        }
    }
}

fn checksum(rows: &[&str]) -> String {
    hex::encode(Sha256::digest(rows.join("\n").as_bytes()))
}

/// Parses the block format and checks every checksum.
pub fn parse(text: &str) -> Result<Vec<Matrix>> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((no, line)) = lines.next() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        if words.next() != Some("matrix") {
            return Err(Error::Parse { line: no + 1, column: 1, message: "expected `matrix`".into() });
        }
        let name = words
            .next()
            .ok_or_else(|| Error::Parse { line: no + 1, column: 8, message: "missing name".into() })?
            .to_string();
        let mut m = Matrix {
            name,
            layout: Layout::Matrix,
            scale: 1,
            denominator: 1,
            modulus: None,
            raw: Vec::new(),
            sha256: String::new(),
        };
        for kv in words {
            let bad = |msg: &str| Error::Parse { line: no + 1, column: 1, message: format!("{kv}: {msg}") };
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match k {
                "layout" => {
                    m.layout = match v {
                        "columns" => Layout::Columns,
                        "rows" => Layout::Rows,
                        "matrix" => Layout::Matrix,
                        _ => return Err(bad("unknown layout")),
                    }
                }
                "scale" => m.scale = v.parse().map_err(|_| bad("bad integer"))?,
                "denominator" => m.denominator = v.parse().map_err(|_| bad("bad integer"))?,
                "modulus" => m.modulus = Some(v.parse().map_err(|_| bad("bad integer"))?),
                "sha256" => m.sha256 = v.to_string(),
                _ => return Err(bad("unknown key")),
            }
        }
        let mut body = Vec::new();
        loop {
            let Some((rno, row)) = lines.next() else {
                return Err(Error::Data(format!("{}: missing `end`", m.name)));
            };
            let row = row.trim();
            if row == "end" {
                break;
            }
            let mut entries = Vec::new();
            let mut col = 1;
            for tok in row.split_whitespace() {
                let column = row[col - 1..].find(tok).map_or(col, |o| col + o);
                entries.push(tok.parse::<i64>().map_err(|_| Error::Parse {
                    line: rno + 1,
                    column,
                    message: format!("not an integer: {tok}"),
                })?);
                col = column + tok.len();
            }
            if let Some(first) = m.raw.first() {
                if first.len() != entries.len() {
                    return Err(Error::Parse { line: rno + 1, column: 1, message: "ragged row".into() });
                }
            }
            m.raw.push(entries);
            body.push(row);
        }
        let actual = checksum(&body);
        if actual != m.sha256 {
            return Err(Error::Data(format!("{}: checksum mismatch ({actual})", m.name)));
        }
        out.push(m);
    }
    Ok(out)
}

pub struct Data {
    matrices: BTreeMap<String, Matrix>,
}

impl Data {
    pub fn get(&self, name: &str) -> Result<&Matrix> {
        self.matrices.get(name).ok_or_else(|| Error::Data(format!("no built-in matrix {name}")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.matrices.keys().map(String::as_str)
    }

    /// Checksums of the named matrices, for transcripts.
    pub fn checksums(&self, names: &[&str]) -> Result<BTreeMap<String, String>> {
        names.iter().map(|&n| Ok((n.to_string(), self.get(n)?.sha256.clone()))).collect()
    }
}

/// The built-in data, parsed and verified once.
pub fn builtin() -> Result<&'static Data> {
    static DATA: OnceLock<std::result::Result<Data, String>> = OnceLock::new();
    DATA.get_or_init(|| {
        parse(BUILTIN)
            .map(|ms| Data { matrices: ms.into_iter().map(|m| (m.name.clone(), m)).collect() })
            .map_err(|e| e.to_string())
    })
    .as_ref()
    .map_err(|e| Error::Data(e.clone()))
}

//! Exhaustive scans over subsets of small cyclic groups.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Group, PointSet};
use crate::par;
use crate::spectral::{find_spectrum, no_universal_spectrum_certificate, SearchOutcome, UscVerdict};
use crate::tiling::{enumerate_complements, tiles_group};

/// Largest `n` accepted by the scans unless the caller raises it.
pub const DEFAULT_SCAN_BOUND: u32 = 14;

/// Subsets of `Z_n` containing 0 that are their own least translate containing 0.
pub fn canonical_subsets(n: u32) -> Result<Vec<PointSet>> {
    let g = Group::cyclic(n)?;
    let n = n as usize;
    if n > 30 {
        return Err(Error::SearchBound(format!("2^{} subsets", n - 1)));
    }
    let masks: Vec<u64> = (0..1u64 << (n - 1)).collect();
    let sets = par::map(&masks, |&m| {
        let s = PointSet::new(&g, std::iter::once(0).chain((1..n).filter(|&i| m >> (i - 1) & 1 == 1)));
        (s.canonical_translate() == s).then_some(s)
    });
    Ok(sets.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: u32,
    pub classes: usize,
    pub tiles: usize,
    pub spectral: usize,
    pub discrepancies: Vec<Vec<usize>>,
    pub inconclusive: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FugledeScan {
    pub rows: Vec<ScanRow>,
}

impl FugledeScan {
    pub fn discrepancies(&self) -> usize {
        self.rows.iter().map(|r| r.discrepancies.len()).sum()
    }

    pub fn inconclusive(&self) -> usize {
        self.rows.iter().map(|r| r.inconclusive.len()).sum()
    }
}

fn indices(s: &PointSet) -> Vec<usize> {
    s.indices().to_vec()
}

/// Tile and spectral verdicts for every translation class of subsets of `Z_n`,
/// `n <= n_max`. Both are decided by exhaustive search.
pub fn fuglede_scan(n_max: u32, bound: u32, budget: u64) -> Result<FugledeScan> {
    if n_max > bound {
        return Err(Error::SearchBound(format!("n_max {n_max} exceeds the bound {bound}")));
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let sets = canonical_subsets(n)?;
        let verdicts = par::map(&sets, |s| -> Result<(bool, SearchOutcome<PointSet>)> {
            Ok((tiles_group(s)?.is_some(), find_spectrum(s, budget)?.outcome))
        });
        let mut row =
            ScanRow { n, classes: sets.len(), tiles: 0, spectral: 0, discrepancies: vec![], inconclusive: vec![] };
        for (s, v) in sets.iter().zip(verdicts) {
            let (tile, spectral) = v?;
            row.tiles += tile as usize;
            match spectral {
                SearchOutcome::Found(_) => row.spectral += 1,
                SearchOutcome::NoneExists => {}
                SearchOutcome::Inconclusive => {
                    row.inconclusive.push(indices(s));
                    continue;
                }
            }
            if tile != matches!(spectral, SearchOutcome::Found(_)) {
                row.discrepancies.push(indices(s));
            }
        }
        rows.push(row);
    }
    Ok(FugledeScan { rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum UniversalRow {
    Universal { tile: Vec<usize>, complements: usize, spectrum: Vec<usize> },
    NoUniversal { tile: Vec<usize>, complements: usize, common_zero_set: Vec<usize> },
    Inconclusive { tile: Vec<usize>, complements: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniversalScan {
    pub n: u32,
    pub size: usize,
    pub rows: Vec<UniversalRow>,
}

impl UniversalScan {
    pub fn count(&self, f: impl Fn(&UniversalRow) -> bool) -> usize {
        self.rows.iter().filter(|r| f(r)).count()
    }
}

/// For every tile of `Z_n` of the given size (up to translation): all its
/// complements, then an exhaustive search for a common spectrum.
pub fn universal_scan(n: u32, size: usize, limit: usize, budget: u64, bound: u32) -> Result<UniversalScan> {
    if n > bound {
        return Err(Error::SearchBound(format!("n {n} exceeds the bound {bound}")));
    }
    if size == 0 || n as usize % size != 0 {
        return Err(Error::SizeDoesNotDivide { tile: size, group: n as usize });
    }
    let sets: Vec<PointSet> = canonical_subsets(n)?.into_iter().filter(|s| s.len() == size).collect();
    let rows = par::map(&sets, |t| -> Result<Option<UniversalRow>> {
        let e = enumerate_complements(t, limit)?;
        let tile = indices(t);
        let complements = e.complements.len();
        if complements == 0 {
            return Ok(None);
        }
        if !e.exhausted {
            return Ok(Some(UniversalRow::Inconclusive { tile, complements, reason: "complement limit".into() }));
        }
        Ok(Some(match no_universal_spectrum_certificate(t, &e.complements, budget)? {
            UscVerdict::CandidateFound(s) => UniversalRow::Universal { tile, complements, spectrum: indices(&s) },
            UscVerdict::Certified(_) => {
                let mut common = crate::cyclotomic::zero_set(&e.complements[0])?.members;
                for c in &e.complements[1..] {
                    common = common.intersection(&crate::cyclotomic::zero_set(c)?.members)?;
                }
                UniversalRow::NoUniversal { tile, complements, common_zero_set: indices(&common) }
            }
            UscVerdict::Inconclusive { nodes } => {
                UniversalRow::Inconclusive { tile, complements, reason: format!("clique budget ({nodes} nodes)") }
            }
        }))
    });
    let rows = rows.into_iter().filter_map(|r| r.transpose()).collect::<Result<Vec<_>>>()?;
    Ok(UniversalScan { n, size, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_counts() {
        // necklace-like classes of subsets containing 0 up to translation
        assert_eq!(canonical_subsets(1).unwrap().len(), 1);
        assert_eq!(canonical_subsets(4).unwrap().len(), 5);
    }

    #[test]
    fn small_scan_has_no_discrepancies() {
        let s = fuglede_scan(8, DEFAULT_SCAN_BOUND, 1_000_000).unwrap();
        assert_eq!(s.discrepancies(), 0);
        assert_eq!(s.inconclusive(), 0);
        assert!(fuglede_scan(15, DEFAULT_SCAN_BOUND, 10).is_err());
    }

    #[test]
    fn universal_examples() {
        let u = universal_scan(6, 2, 1000, 1_000_000, DEFAULT_SCAN_BOUND).unwrap();
        assert!(!u.rows.is_empty());
        assert!(u.rows.iter().all(|r| matches!(r, UniversalRow::Universal { .. })));
        let u = universal_scan(4, 4, 1000, 1_000_000, DEFAULT_SCAN_BOUND).unwrap();
        assert_eq!(u.rows, vec![UniversalRow::Universal { tile: vec![0, 1, 2, 3], complements: 1, spectrum: vec![0] }]);
        assert!(universal_scan(6, 4, 10, 10, DEFAULT_SCAN_BOUND).is_err());
    }
}

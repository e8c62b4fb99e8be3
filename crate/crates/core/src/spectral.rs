//! Spectra, universal spectra and the Lagarias–Szabó sufficient condition.
//!
//! In a finite group, `Λ` is a spectrum of `T` iff `|Λ| = |T|` and
//! `Λ - Λ ⊂ Z_T ∪ {0}`; that combinatorial form is the definition used here.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::clique::{cayley_clique, CliqueOutcome};
use crate::cyclotomic::{zero_set, CharacterSums, CyclotomicInteger};
use crate::error::{Error, Result};
use crate::group::{difference_set, PointSet};
use crate::tiling::{divisibility_obstruction, enumerate_complements, is_tiling_pair, CheckMode, TilingVerdict};

/// Default node budget for clique searches.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumCertificate {
    pub set: PointSet,
    pub candidate: PointSet,
    pub accepted: bool,
    pub size_matches: bool,
    /// Nonzero differences of the candidate outside `Z_T`, ascending.
    pub violations: Vec<usize>,
}

pub fn is_spectrum(t: &PointSet, lambda: &PointSet) -> Result<SpectrumCertificate> {
    t.group().ensure_same(lambda.group())?;
    if t.is_empty() || lambda.is_empty() {
        return Err(Error::EmptySet);
    }
    let size_matches = t.len() == lambda.len();
    let sums = CharacterSums::new(t);
    let violations: Vec<usize> =
        difference_set(lambda)?.iter().filter(|&d| d != 0 && !sums.vanishes_at(d)).collect();
    Ok(SpectrumCertificate {
        set: t.clone(),
        candidate: lambda.clone(),
        accepted: size_matches && violations.is_empty(),
        size_matches,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// Exhaustive search proved there is none.
    NoneExists,
    /// Budget ran out.
    Inconclusive,
}

impl<T> SearchOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found(x) => Some(x),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport<T> {
    pub outcome: SearchOutcome<T>,
    pub nodes: u64,
}

fn clique_to_search(
    t: &PointSet,
    connection: &FixedBitSet,
    target: usize,
    budget: u64,
) -> SearchReport<PointSet> {
    let g = t.group();
    let report = cayley_clique(g, connection, target, budget);
    let outcome = match report.outcome {
        CliqueOutcome::Found(c) => SearchOutcome::Found(PointSet::new(g, c)),
        CliqueOutcome::Exhausted => SearchOutcome::NoneExists,
        CliqueOutcome::Inconclusive => SearchOutcome::Inconclusive,
    };
    SearchReport { outcome, nodes: report.nodes }
}

/// Spectrum search: a clique of size `|T|` through 0 in `Cay(G^, Z_T)`.
pub fn find_spectrum(t: &PointSet, budget: u64) -> Result<SearchReport<PointSet>> {
    let z = zero_set(t)?;
    Ok(clique_to_search(t, &z.members.membership(), t.len(), budget))
}

/// A set `S` with `|S| = |G|/|T|` and `S - S ⊂ Z_T^c`, which is then both a
/// universal spectrum and a universal tiling complement of `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagariasSzaboCertificate {
    pub tile: PointSet,
    pub set: PointSet,
    pub transcript: Vec<String>,
}

pub fn lagarias_szabo_search(t: &PointSet, budget: u64) -> Result<SearchReport<LagariasSzaboCertificate>> {
    let g = t.group();
    if t.is_empty() {
        return Err(Error::EmptySet);
    }
    if g.order() % t.len() != 0 {
        return Err(Error::SizeDoesNotDivide { tile: t.len(), group: g.order() });
    }
    let z = zero_set(t)?;
    let mut conn = z.complement().membership();
    conn.set(0, false);
    let target = g.order() / t.len();
    let report = clique_to_search(t, &conn, target, budget);
    let outcome = match report.outcome {
        SearchOutcome::Found(s) => {
            // re-check the defining property directly
            let sums = CharacterSums::new(t);
            if !difference_set(&s)?.iter().all(|d| d == 0 || !sums.vanishes_at(d)) {
                return Err(Error::Verification("S - S meets Z_T".into()));
            }
            SearchOutcome::Found(LagariasSzaboCertificate {
                tile: t.clone(),
                transcript: vec![
                    format!("|S| = |G|/|T| = {target}"),
                    "S - S ⊂ Z_T^c".into(),
                    "universal spectrum: Z_T ∪ Z_T' = G^ \\ {0} for every complement T', so S - S \\ {0} ⊂ Z_T'".into(),
                    "universal tiling complement: every spectrum L has L - L ⊂ Z_T ∪ {0}, so (L - L) ∩ (S - S) = {0} and L + S = G^".into(),
                ],
                set: s,
            })
        }
        SearchOutcome::NoneExists => SearchOutcome::NoneExists,
        SearchOutcome::Inconclusive => SearchOutcome::Inconclusive,
    };
    Ok(SearchReport { outcome, nodes: report.nodes })
}

/// Proof that no Lagarias–Szabó set exists for `T`: such an `S` would tile the
/// dual with a spectrum `L` of `T`, but `L` carries a divisibility obstruction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityCertificate {
    pub tile: Vec<Vec<u32>>,
    pub spectrum: Vec<Vec<u32>>,
    pub subgroup_order: usize,
    pub spectrum_size: usize,
    pub transcript: Vec<String>,
}

pub fn no_lagarias_szabo_via_duality(t: &PointSet, l: &PointSet) -> Result<DualityCertificate> {
    let spec = is_spectrum(t, l)?;
    if !spec.accepted {
        return Err(Error::Precondition("candidate is not a spectrum of the tile".into()));
    }
    let Some(h) = divisibility_obstruction(l)? else {
        return Err(Error::Precondition(
            "the spectrum has no divisibility obstruction; it may tile the dual".into(),
        ));
    };
    Ok(DualityCertificate {
        tile: t.coords_rows(),
        spectrum: l.coords_rows(),
        subgroup_order: h.order(),
        spectrum_size: l.len(),
        transcript: vec![
            format!("L is a spectrum of T (|L| = {}, L - L ⊂ Z_T ∪ {{0}})", l.len()),
            format!(
                "a translate of L lies in a subgroup H of order {} and {} ∤ {}, so L does not tile H",
                h.order(),
                l.len(),
                h.order()
            ),
            "assumed lemma: a set inside a subgroup H tiles the group only if it tiles H".into(),
            "any S with |S| = |G|/|T| and S - S ⊂ Z_T^c would satisfy (L - L) ∩ (S - S) = {0}, hence L + S = G^".into(),
            "contradiction: no such S exists".into(),
        ],
    })
}

/// Common zero-set of a list of complements, the witness set outside it and
/// the exact character matrix on the witnesses.
#[derive(Clone, Debug)]
pub struct WitnessTable {
    pub tile: PointSet,
    pub complements: Vec<PointSet>,
    /// `D = ∩_j Z_{T'_j}`.
    pub common_zero_set: PointSet,
    /// `W = G^ \ (D ∪ {0})`, ascending; row `i` of the matrix is `witnesses[i]`.
    pub witnesses: Vec<usize>,
    /// Flattened histograms: entry `(i, j)` is `sum_e counts[e] zeta_N^e`.
    counts: Vec<u32>,
    order: u64,
}

impl WitnessTable {
    pub fn rows(&self) -> usize {
        self.witnesses.len()
    }

    pub fn columns(&self) -> usize {
        self.complements.len()
    }

    fn histogram(&self, row: usize, col: usize) -> &[u32] {
        let n = self.order as usize;
        let start = (row * self.columns() + col) * n;
        &self.counts[start..start + n]
    }

    /// `A[row][col] = chi_{T'_col}(witnesses[row])`.
    pub fn entry(&self, row: usize, col: usize) -> CyclotomicInteger {
        let h: Vec<i64> = self.histogram(row, col).iter().map(|&c| c as i64).collect();
        CyclotomicInteger::from_coeffs(self.order, &h)
    }

    /// `sum_j k_j A[row][j]`.
    pub fn weighted_row_sum(&self, row: usize, k: &[u64]) -> CyclotomicInteger {
        let n = self.order as usize;
        let mut acc = vec![0i64; n];
        for (col, &kj) in k.iter().enumerate() {
            for (e, &c) in self.histogram(row, col).iter().enumerate() {
                acc[e] += kj as i64 * c as i64;
            }
        }
        CyclotomicInteger::from_coeffs(self.order, &acc)
    }

    pub(crate) fn weighted_row_vanishes(&self, row: usize, k: &[u64]) -> bool {
        let n = self.order as usize;
        let mut acc = vec![0i64; n];
        for (col, &kj) in k.iter().enumerate().filter(|(_, &kj)| kj != 0) {
            for (e, &c) in self.histogram(row, col).iter().enumerate() {
                acc[e] += kj as i64 * c as i64;
            }
        }
        crate::cyclotomic::counts_vanish(&acc)
    }

    /// Every row has a nonzero entry, checked exactly.
    pub fn rows_nonvanishing(&self) -> bool {
        (0..self.rows()).all(|r| (0..self.columns()).any(|c| !self.entry(r, c).is_zero()))
    }

    pub fn row_of(&self, v: usize) -> Option<usize> {
        self.witnesses.binary_search(&v).ok()
    }
}

pub fn build_witness_table(t: &PointSet, complements: &[PointSet]) -> Result<WitnessTable> {
    let g = t.group();
    if complements.is_empty() {
        return Err(Error::Precondition("at least one complement is required".into()));
    }
    for (j, c) in complements.iter().enumerate() {
        if let TilingVerdict::Refuted(r) = is_tiling_pair(t, c, CheckMode::Fast)? {
            return Err(Error::Precondition(format!("complement #{j} fails: {r}")));
        }
    }
    let sums: Vec<CharacterSums> = complements.iter().map(CharacterSums::new).collect();
    let n = g.exponent() as usize;
    // rows for every nonzero dual; keep those outside D
    let rows = crate::par::map_range(1..g.order(), |v| {
        let hists: Vec<Vec<i64>> = sums.iter().map(|s| s.histogram(v)).collect();
        let in_d = hists.iter().all(|h| crate::cyclotomic::counts_vanish(h));
        (v, in_d, if in_d { Vec::new() } else { hists })
    });
    let mut d = vec![];
    let mut witnesses = vec![];
    let mut counts = Vec::new();
    for (v, in_d, hists) in rows {
        if in_d {
            d.push(v);
        } else {
            witnesses.push(v);
            for h in hists {
                debug_assert_eq!(h.len(), n);
                counts.extend(h.iter().map(|&c| c as u32));
            }
        }
    }
    Ok(WitnessTable {
        tile: t.clone(),
        complements: complements.to_vec(),
        common_zero_set: PointSet::new(g, d),
        witnesses,
        counts,
        order: g.exponent(),
    })
}

/// How the absence of a universal spectrum was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UscRoute {
    /// No clique of size `|G|/|T|` in `Cay(G^, D)`, searched exhaustively.
    CliqueExhaustion { nodes: u64 },
    /// `L` is a spectrum of `T`, each `v ∈ L - L \ {0}` lies outside `Z_{T'}` for a
    /// listed complement, and `L` does not tile. A universal spectrum `S` would
    /// give `(S - S) ∩ (L - L) = {0}`, i.e. a tiling `S + L` of the dual.
    SpectrumDuality { spectrum: PointSet, witnesses: Vec<(usize, usize)>, obstruction_order: usize },
}

/// `T` has no universal spectrum. Records the exact complement sub-list used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoUniversalSpectrum {
    tile: PointSet,
    complements: Vec<PointSet>,
    route: UscRoute,
}

impl NoUniversalSpectrum {
    pub(crate) fn new(tile: PointSet, complements: Vec<PointSet>, route: UscRoute) -> Self {
        NoUniversalSpectrum { tile, complements, route }
    }

    pub fn tile(&self) -> &PointSet {
        &self.tile
    }

    pub fn complements(&self) -> &[PointSet] {
        &self.complements
    }

    pub fn route(&self) -> &UscRoute {
        &self.route
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UscVerdict {
    Certified(NoUniversalSpectrum),
    /// A spectrum of every listed complement. It is a universal spectrum only if
    /// the list contains every complement.
    CandidateFound(PointSet),
    Inconclusive { nodes: u64 },
}

pub fn no_universal_spectrum_certificate(
    t: &PointSet,
    complements: &[PointSet],
    budget: u64,
) -> Result<UscVerdict> {
    let g = t.group();
    if complements.is_empty() {
        return Err(Error::Precondition("at least one complement is required".into()));
    }
    if g.order() % t.len() != 0 {
        return Err(Error::SizeDoesNotDivide { tile: t.len(), group: g.order() });
    }
    let mut common: Option<FixedBitSet> = None;
    for (j, c) in complements.iter().enumerate() {
        if let TilingVerdict::Refuted(r) = is_tiling_pair(t, c, CheckMode::Fast)? {
            return Err(Error::Precondition(format!("complement #{j} fails: {r}")));
        }
        let z = zero_set(c)?.members.membership();
        common = Some(match common {
            None => z,
            Some(mut acc) => {
                acc.intersect_with(&z);
                acc
            }
        });
    }
    let common = common.expect("nonempty list");
    let report = clique_to_search(t, &common, g.order() / t.len(), budget);
    Ok(match report.outcome {
        SearchOutcome::Found(s) => UscVerdict::CandidateFound(s),
        SearchOutcome::NoneExists => UscVerdict::Certified(NoUniversalSpectrum::new(
            t.clone(),
            complements.to_vec(),
            UscRoute::CliqueExhaustion { nodes: report.nodes },
        )),
        SearchOutcome::Inconclusive => UscVerdict::Inconclusive { nodes: report.nodes },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniversalVerdict {
    /// `S` is a spectrum of every complement (the enumeration was complete).
    Universal { complements_checked: usize },
    NotUniversal { complement: PointSet, violations: Vec<usize> },
    /// The enumeration limit was reached before the list was complete.
    Inconclusive { complements_checked: usize },
}

/// Complements containing 0 suffice: `Z_{T' + c} = Z_{T'}`.
pub fn universal_spectrum_check_exhaustive(t: &PointSet, s: &PointSet, limit: usize) -> Result<UniversalVerdict> {
    let g = t.group();
    t.group().ensure_same(s.group())?;
    if t.is_empty() || g.order() % t.len() != 0 || s.len() * t.len() != g.order() {
        return Err(Error::Precondition("|S| must equal |G|/|T|".into()));
    }
    let e = enumerate_complements(t, limit)?;
    for c in &e.complements {
        let cert = is_spectrum(c, s)?;
        if !cert.accepted {
            return Ok(UniversalVerdict::NotUniversal { complement: c.clone(), violations: cert.violations });
        }
    }
    Ok(if e.exhausted {
        UniversalVerdict::Universal { complements_checked: e.complements.len() }
    } else {
        UniversalVerdict::Inconclusive { complements_checked: e.complements.len() }
    })
}

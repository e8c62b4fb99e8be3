//! Layered tiles in `G x Z_p` built from several complements of one tile.
//!
//! With complements `T'_1..T'_m` of `T` stacked `k_i` times each,
//! `R = ∪_j (z_j + T'_{σ_j})` tiles `G x Z_p` with `T x {0}`. On duals with last
//! coordinate 0 the layers collapse: `chi_R(v, 0) = sum_i k_i chi_{T'_i}(v)`.

use num_integer::Integer;
use serde::Serialize;

use crate::cyclotomic::{CharacterSums, CyclotomicInteger};
use crate::error::{Error, Result};
use crate::group::{Group, PointSet};
use crate::par;
use crate::spectral::{NoUniversalSpectrum, WitnessTable};
use crate::tiling::{is_tiling_pair, CheckMode, TilingVerdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredTileSpec {
    pub tile: PointSet,
    pub complements: Vec<PointSet>,
    pub k: Vec<u64>,
}

impl LayeredTileSpec {
    pub fn new(tile: &PointSet, complements: &[PointSet], k: &[u64]) -> Result<Self> {
        if complements.is_empty() || complements.len() != k.len() {
            return Err(Error::Precondition(format!(
                "{} complements against {} multiplicities",
                complements.len(),
                k.len()
            )));
        }
        for c in complements {
            tile.group().ensure_same(c.group())?;
        }
        let spec = LayeredTileSpec { tile: tile.clone(), complements: complements.to_vec(), k: k.to_vec() };
        let p = spec.layers();
        if p == 0 || p > u32::MAX as u64 {
            return Err(Error::Precondition(format!("layer count {p} out of range")));
        }
        if !tile.group().moduli().iter().any(|&n| p.gcd(&(n as u64)) == 1) {
            return Err(Error::Precondition(format!("layer count {p} shares a factor with every modulus")));
        }
        Ok(spec)
    }

    pub fn base(&self) -> &Group {
        self.tile.group()
    }

    /// `p = sum k_i`.
    pub fn layers(&self) -> u64 {
        self.k.iter().sum()
    }

    /// `σ_1 <= ... <= σ_p`, each `i` repeated `k_i` times (0-based).
    pub fn assignment(&self) -> Vec<usize> {
        self.k.iter().enumerate().flat_map(|(i, &ki)| std::iter::repeat(i).take(ki as usize)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredTile {
    pub group: Group,
    /// `T x {0}`.
    pub extended_tile: PointSet,
    pub set: PointSet,
}

/// Builds `R` and re-verifies that `T x {0}` is a complement of it.
pub fn build_layered_tile(spec: &LayeredTileSpec) -> Result<LayeredTile> {
    let base = spec.base();
    for (i, c) in spec.complements.iter().enumerate() {
        if let TilingVerdict::Refuted(r) = is_tiling_pair(&spec.tile, c, CheckMode::Fast)? {
            return Err(Error::Precondition(format!("complement #{} fails: {r}", i + 1)));
        }
    }
    let p = spec.layers() as u32;
    let group = base.extend(p)?;
    let lift = |x: usize, layer: u32| x * p as usize + layer as usize;
    let extended_tile = PointSet::new(&group, spec.tile.iter().map(|t| lift(t, 0)));
    let mut pts = Vec::new();
    for (j, &s) in spec.assignment().iter().enumerate() {
        pts.extend(spec.complements[s].iter().map(|x| lift(x, j as u32)));
    }
    let set = PointSet::new(&group, pts);
    match is_tiling_pair(&set, &extended_tile, CheckMode::Fast)? {
        TilingVerdict::Accepted(_) => Ok(LayeredTile { group, extended_tile, set }),
        TilingVerdict::Refuted(r) => Err(Error::Verification(format!("layered set does not tile: {r}"))),
    }
}

/// Default cap on `sum k_i` in [`choose_k_vector`].
pub const DEFAULT_K_BOUND: u64 = 64;

/// Least `k` (by total, then lexicographically) with every weighted row sum of
/// the table nonzero and `sum k_i` coprime to every modulus.
pub fn choose_k_vector(table: &WitnessTable, moduli: &[u32], bound: u64) -> Result<Vec<u64>> {
    let m = table.columns();
    if m == 0 {
        return Err(Error::Precondition("empty witness table".into()));
    }
    if !table.rows_nonvanishing() {
        return Err(Error::Precondition("a witness row vanishes identically".into()));
    }
    for total in 1..=bound {
        if moduli.iter().any(|&n| total.gcd(&(n as u64)) != 1) {
            continue;
        }
        let mut k = vec![0u64; m];
        k[m - 1] = total;
        loop {
            if par::all_range(0..table.rows(), |r| !table.weighted_row_vanishes(r, &k)) {
                return Ok(k);
            }
            if !next_composition(&mut k) {
                break;
            }
        }
    }
    Err(Error::SearchBound(format!("no multiplicity vector with total <= {bound}")))
}

/// Next composition with the same total in lexicographic order.
fn next_composition(k: &mut [u64]) -> bool {
    let m = k.len();
    // rightmost position i < m-1 that can grow by taking from the tail
    for i in (0..m - 1).rev() {
        let tail_sum: u64 = k[i + 1..].iter().sum();
        if tail_sum > 0 {
            k[i] += 1;
            let remaining = tail_sum - 1;
            for x in k[i + 1..].iter_mut() {
                *x = 0;
            }
            k[m - 1] = remaining;
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredCertificate {
    pub base_moduli: Vec<u32>,
    pub k: Vec<u64>,
    pub layers: u64,
    pub set_size: usize,
    pub witnesses_checked: usize,
    pub transcript: Vec<String>,
}

/// `chi_R(v, 0) = sum_i k_i chi_{T'_i}(v)` for every `v` in the base group,
/// compared exactly. Returns the number of duals checked.
pub fn verify_layer_sum_identity(spec: &LayeredTileSpec, r: &LayeredTile) -> Result<usize> {
    let base = spec.base();
    let p = spec.layers() as usize;
    let big = r.group.exponent();
    let rs = CharacterSums::new(&r.set);
    let parts: Vec<CharacterSums> = spec.complements.iter().map(CharacterSums::new).collect();
    let bad = par::filter_range(0..base.order(), |v| {
        let mut sum = CyclotomicInteger::zero(base.exponent());
        for (s, &ki) in parts.iter().zip(&spec.k) {
            sum = sum + s.value_at(v).scale(ki as i64);
        }
        let direct = rs.value_at(v * p);
        sum.lift_to(big).map_or(true, |s| s != direct)
    });
    match bad.first() {
        None => Ok(base.order()),
        Some(&v) => Err(Error::Verification(format!("layer identity fails at {}", spec.tile.fmt_point(v)))),
    }
}

/// Non-spectrality of `R`: for every witness `v` (outside the common zero-set)
/// `chi_R(v, 0) = sum_i k_i chi_{T'_i}(v) != 0`. Requires a certificate that `T`
/// has no spectrum common to the same complements; by pigeonhole a spectrum of
/// `R` would then yield one.
pub fn verify_layered_nonspectral(
    spec: &LayeredTileSpec,
    table: &WitnessTable,
    usc: &NoUniversalSpectrum,
) -> Result<LayeredCertificate> {
    if usc.tile() != &spec.tile || usc.complements() != spec.complements.as_slice() {
        return Err(Error::Precondition("certificate was issued for a different tile or complement list".into()));
    }
    if table.tile != spec.tile || table.complements != spec.complements {
        return Err(Error::Precondition("witness table does not match the layered spec".into()));
    }
    let r = build_layered_tile(spec)?;
    let p = spec.layers() as usize;
    let big = r.group.exponent();
    let rs = CharacterSums::new(&r.set);
    let failures = par::filter_range(0..table.rows(), |row| {
        let sum = table.weighted_row_sum(row, &spec.k);
        let direct = rs.value_at(table.witnesses[row] * p);
        sum.is_zero() || sum.lift_to(big).map_or(true, |s| s != direct)
    });
    if let Some(&row) = failures.first() {
        return Err(Error::Verification(format!(
            "witness {} fails",
            spec.tile.fmt_point(table.witnesses[row])
        )));
    }
    Ok(LayeredCertificate {
        base_moduli: spec.base().moduli().to_vec(),
        k: spec.k.clone(),
        layers: spec.layers(),
        set_size: r.set.len(),
        witnesses_checked: table.rows(),
        transcript: vec![
            format!("R tiles G x Z_{} with T x {{0}}", spec.layers()),
            format!("sum k_i chi_T'_i(v) != 0 for all {} witnesses, equal to chi_R(v, 0)", table.rows()),
            "T has no spectrum common to the listed complements (certificate supplied)".into(),
            "applied lemma (pigeonhole): a spectrum of R would restrict to such a common spectrum".into(),
            "R is not spectral".into(),
        ],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredReport {
    pub base_moduli: Vec<u32>,
    pub tile: Vec<Vec<u32>>,
    pub complements: usize,
    pub witnesses: usize,
    pub k: Vec<u64>,
    pub layers: u64,
    pub set_size: usize,
    pub tiles: bool,
    pub identity_duals: usize,
    /// Issued when `T` has no spectrum common to the complements.
    pub nonspectral: Option<LayeredCertificate>,
    /// A spectrum common to all listed complements, when one exists.
    pub common_spectrum: Option<Vec<Vec<u32>>>,
    pub note: String,
}

/// Witness table, multiplicities, the layered tile and its identities; a
/// non-spectrality certificate when `T` has no common spectrum for the list.
/// `usc` skips the clique search when such a certificate is already at hand.
pub fn layered_pipeline(
    tile: &PointSet,
    complements: &[PointSet],
    usc: Option<&NoUniversalSpectrum>,
    budget: u64,
    k_bound: u64,
) -> Result<LayeredReport> {
    let table = crate::spectral::build_witness_table(tile, complements)?;
    let moduli = tile.group().moduli().to_vec();
    let k = choose_k_vector(&table, &moduli, k_bound)?;
    let spec = LayeredTileSpec::new(tile, complements, &k)?;
    let r = build_layered_tile(&spec)?;
    let identity_duals = verify_layer_sum_identity(&spec, &r)?;
    let mut report = LayeredReport {
        base_moduli: moduli,
        tile: tile.coords_rows(),
        complements: complements.len(),
        witnesses: table.rows(),
        k: k.clone(),
        layers: spec.layers(),
        set_size: r.set.len(),
        tiles: true,
        identity_duals,
        nonspectral: None,
        common_spectrum: None,
        note: String::new(),
    };
    let owned;
    let usc = match usc {
        Some(c) => Some(c),
        None => match crate::spectral::no_universal_spectrum_certificate(tile, complements, budget)? {
            crate::spectral::UscVerdict::Certified(c) => {
                owned = c;
                Some(&owned)
            }
            crate::spectral::UscVerdict::CandidateFound(s) => {
                report.common_spectrum = Some(s.coords_rows());
                report.note = "the complements share a spectrum; no non-spectrality claim".into();
                None
            }
            crate::spectral::UscVerdict::Inconclusive { nodes } => {
                report.note = format!("common-spectrum search inconclusive after {nodes} nodes");
                None
            }
        },
    };
    if let Some(c) = usc {
        report.nonspectral = Some(verify_layered_nonspectral(&spec, &table, c)?);
        report.note = "R is not spectral".into();
    }
    Ok(report)
}

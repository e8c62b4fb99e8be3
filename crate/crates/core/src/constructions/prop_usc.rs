//! The 3-dimensional tile in `Z_24^3` without a universal spectrum.
//!
//! `24K = LT (mod 24)` makes `L` a spectrum of `T`. For every ordered pair of
//! rows of `L`, `v = l_i - l_j` is shown to lie outside the zero-set of some
//! complement `T'` of `T`, where `T' = phi^{-1}(C)` for a homomorphism
//! `phi(x) = <y, x> mod 24` that maps `T` onto a tile of `Z_24`. A universal
//! spectrum `S` would then satisfy `(S - S) ∩ (L - L) = {0}`, so `S + L` would
//! tile the dual; but a translate of `L` sits in a subgroup of order 512.

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::data;
use crate::cyclotomic::{fourier_coefficient, CyclotomicInteger};
use crate::error::{Error, Result};
use crate::group::{Group, PointSet};
use crate::par;
use crate::spectral::{is_spectrum, NoUniversalSpectrum, UscRoute};
use crate::tiling::{divisibility_obstruction, is_tiling_pair, pullback_complement, CheckMode, GroupHomomorphism};

/// Rational matrix `entries / denominator` whose entrywise `exp(2 pi i .)` is
/// a complex Hadamard matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogHadamardMatrix {
    pub denominator: u64,
    pub entries: Vec<Vec<i64>>,
}

impl LogHadamardMatrix {
    pub fn new(denominator: u64, entries: Vec<Vec<i64>>) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidModulus(0));
        }
        if entries.iter().any(|r| r.len() != entries.len()) {
            return Err(Error::Shape("log-Hadamard matrix must be square".into()));
        }
        Ok(LogHadamardMatrix { denominator, entries })
    }

    pub fn builtin() -> Result<Self> {
        let k = data::builtin()?.get("K")?;
        Self::new(k.denominator as u64, k.values())
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HadamardVerdict {
    pub pairs_checked: usize,
    /// Row pairs `(r, s)`, 1-based, whose inner product is nonzero.
    pub failures: Vec<(usize, usize)>,
}

impl HadamardVerdict {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_log_hadamard(k: &LogHadamardMatrix) -> HadamardVerdict {
    let n = k.size();
    let d = k.denominator;
    let mut pairs_checked = 0;
    let mut failures = Vec::new();
    for r in 0..n {
        for s in r + 1..n {
            pairs_checked += 1;
            let exps = k.entries[r].iter().zip(&k.entries[s]).map(|(a, b)| a - b);
            if !CyclotomicInteger::sum_of_roots(d, exps).is_zero() {
                failures.push((r + 1, s + 1));
            }
        }
    }
    HadamardVerdict { pairs_checked, failures }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionVerdict {
    /// Entries `(i, j)`, 1-based, where `(L T)_{ij} != modulus * K_{ij}`.
    pub mismatches: Vec<(usize, usize)>,
}

impl DecompositionVerdict {
    pub fn accepted(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `L T ≡ modulus * K (mod modulus)` entrywise; `T` has the elements as columns.
pub fn verify_decomposition(
    l: &[Vec<i64>],
    t: &[Vec<i64>],
    k: &LogHadamardMatrix,
    modulus: i64,
) -> Result<DecompositionVerdict> {
    let inner = t.len();
    let cols = t.first().map_or(0, Vec::len);
    if l.iter().any(|r| r.len() != inner)
        || t.iter().any(|r| r.len() != cols)
        || l.len() != k.size()
        || cols != k.size()
    {
        return Err(Error::Shape(format!(
            "{}x{} times {}x{} against {}x{}",
            l.len(),
            l.first().map_or(0, Vec::len),
            inner,
            cols,
            k.size(),
            k.size()
        )));
    }
    if modulus <= 0 || modulus % k.denominator as i64 != 0 {
        return Err(Error::InvalidModulus(modulus));
    }
    let factor = modulus / k.denominator as i64;
    let mut mismatches = Vec::new();
    for (i, lrow) in l.iter().enumerate() {
        for j in 0..cols {
            let lt: i64 = (0..inner).map(|r| lrow[r] * t[r][j]).sum();
            if (lt - factor * k.entries[i][j]).rem_euclid(modulus) != 0 {
                mismatches.push((i + 1, j + 1));
            }
        }
    }
    Ok(DecompositionVerdict { mismatches })
}

fn difference_row(k: &LogHadamardMatrix, i: usize, j: usize) -> Vec<i64> {
    let d = k.denominator as i64;
    k.entries[i].iter().zip(&k.entries[j]).map(|(a, b)| (a - b).rem_euclid(d)).collect()
}

/// Distinct nonzero row differences of `K` (numerators mod the denominator),
/// in lexicographic order.
pub fn build_k_difference_rows(k: &LogHadamardMatrix) -> Vec<Vec<i64>> {
    let n = k.size();
    let mut rows: Vec<Vec<i64>> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| difference_row(k, i, j))
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    rows.sort();
    rows.dedup();
    rows
}

/// Rank of an integer matrix over `Z_p`, `p` prime.
pub fn rank_mod(rows: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = inverse_mod(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for cc in 0..cols {
                    m[r][cc] = (m[r][cc] - f * m[rank][cc]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn inverse_mod(a: i64, p: i64) -> i64 {
    (1..p).find(|&x| a * x % p == 1).expect("nonzero residue mod a prime")
}

/// Solves `x A ≡ b (mod p)` for a row vector `x`, free variables set to 0.
fn solve_left_mod(a: &[Vec<i64>], b: &[i64], p: i64) -> Option<Vec<i64>> {
    let unknowns = a.len();
    // equations: column c of A gives sum_r x_r A[r][c] = b[c]
    let mut m: Vec<Vec<i64>> = (0..b.len())
        .map(|c| {
            let mut eq: Vec<i64> = (0..unknowns).map(|r| a[r][c].rem_euclid(p)).collect();
            eq.push(b[c].rem_euclid(p));
            eq
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..unknowns {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = inverse_mod(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for cc in 0..=unknowns {
                    m[r][cc] = (m[r][cc] - f * m[rank][cc]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if m[rank..].iter().any(|eq| eq[unknowns] != 0) {
        return None;
    }
    let mut x = vec![0; unknowns];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][unknowns];
    }
    Some(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PMatrixReport {
    pub congruent: bool,
    /// Per row of `P`: the names of the cyclic complements it tiles `Z_24` with.
    pub complements: Vec<Vec<String>>,
    pub rank_mod3: usize,
    pub generators_rank_mod3: usize,
}

impl PMatrixReport {
    pub fn accepted(&self) -> bool {
        self.congruent
            && self.complements.iter().all(|c| !c.is_empty())
            && self.rank_mod3 == 3
            && self.generators_rank_mod3 == 3
    }
}

/// Cyclic tiles and their candidate complements.
fn cyclic_set(modulus: u32, pts: &[i64]) -> Result<PointSet> {
    let g = Group::cyclic(modulus)?;
    PointSet::from_coords(&g, &pts.iter().map(|&x| [x]).collect::<Vec<_>>())
}

/// `P ≡ K - K (mod 8)`, every row tiles `Z_24` with one of the given
/// complements, and rows 1, 2, 4 span the rows mod 3 with rank 3.
pub fn verify_p_matrix(
    p: &[Vec<i64>],
    kk: &[Vec<i64>],
    denominator: i64,
    modulus: u32,
    named: &[(String, Vec<i64>)],
) -> Result<PMatrixReport> {
    if p.len() != kk.len() || p.len() < 4 {
        return Err(Error::Shape(format!("P has {} rows, K - K has {}", p.len(), kk.len())));
    }
    let congruent = p
        .iter()
        .zip(kk)
        .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).rem_euclid(denominator) == 0));
    let mut complements = Vec::with_capacity(p.len());
    for row in p {
        let tile = cyclic_set(modulus, row)?;
        let mut fits = Vec::new();
        for (name, c) in named {
            let c = cyclic_set(modulus, c)?;
            if tile.len() == row.len() && is_tiling_pair(&tile, &c, CheckMode::Audit)?.is_accepted() {
                fits.push(name.clone());
            }
        }
        complements.push(fits);
    }
    let rank_mod3 = rank_mod(p, 3);
    let gens = [p[0].clone(), p[1].clone(), p[3].clone()];
    let generators_rank_mod3 = if rank_mod3 == 3 { rank_mod(&gens, 3) } else { 0 };
    Ok(PMatrixReport { congruent, complements, rank_mod3, generators_rank_mod3 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YSolution {
    pub mod3: Vec<i64>,
    pub mod8: Vec<i64>,
    pub y: Vec<i64>,
}

/// `y` with `y T ≡ p (mod 24)` and `3y ≡ v (mod 24)`: the mod-3 part solves
/// `y T ≡ p (mod 3)`, the mod-8 part is `v / 3`, combined by CRT.
pub fn solve_y(v: &[i64], p_row: &[i64], t: &[Vec<i64>]) -> Result<YSolution> {
    if v.len() != t.len() || t.iter().any(|r| r.len() != p_row.len()) {
        return Err(Error::Shape("v, p and T are not conformable".into()));
    }
    let mod3 = solve_left_mod(t, p_row, 3)
        .ok_or_else(|| Error::Unsolvable(format!("y T = {p_row:?} has no solution mod 3")))?;
    let mod8 = v
        .iter()
        .map(|&x| {
            let x = x.rem_euclid(24);
            if x % 3 == 0 {
                Ok((x / 3) % 8)
            } else {
                Err(Error::Unsolvable(format!("{v:?} is not divisible by 3")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    // 16 ≡ 1 (mod 3), 0 (mod 8); 9 ≡ 0 (mod 3), 1 (mod 8)
    let y: Vec<i64> = mod3.iter().zip(&mod8).map(|(a, b)| (16 * a + 9 * b) % 24).collect();
    for (c, &pc) in p_row.iter().enumerate() {
        let yt: i64 = y.iter().zip(t).map(|(yi, row)| yi * row[c]).sum();
        if (yt - pc).rem_euclid(24) != 0 {
            return Err(Error::Verification(format!("y T != p at column {}", c + 1)));
        }
    }
    if y.iter().zip(v).any(|(yi, vi)| (3 * yi - vi).rem_euclid(24) != 0) {
        return Err(Error::Verification("3y != v".into()));
    }
    Ok(YSolution { mod3, mod8, y })
}

/// Matrices the pipeline runs on; [`PropUscInputs::builtin`] loads the
/// transcribed ones.
#[derive(Clone, Debug)]
pub struct PropUscInputs {
    pub k: LogHadamardMatrix,
    pub t1: Vec<Vec<i64>>,
    pub l: Vec<Vec<i64>>,
    pub t: Vec<Vec<i64>>,
    pub k_minus_k: Vec<Vec<i64>>,
    pub p: Vec<Vec<i64>>,
    pub cyclic_complements: Vec<(String, Vec<i64>)>,
}

pub const PROP_USC_MATRICES: [&str; 8] = ["K", "T1", "L", "T", "K_MINUS_K", "P", "C1", "C2"];

impl PropUscInputs {
    pub fn builtin() -> Result<Self> {
        let d = data::builtin()?;
        let row = |n: &str| -> Result<Vec<i64>> { Ok(d.get(n)?.values()[0].clone()) };
        Ok(PropUscInputs {
            k: LogHadamardMatrix::builtin()?,
            t1: d.get("T1")?.values(),
            l: d.get("L")?.values(),
            t: d.get("T")?.values(),
            k_minus_k: d.get("K_MINUS_K")?.values(),
            p: d.get("P")?.values(),
            cyclic_complements: vec![("C1".into(), row("C1")?), ("C2".into(), row("C2")?)],
        })
    }
}

pub const MODULUS: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    /// 1-based rows of `L`.
    pub i: usize,
    pub j: usize,
    pub v: Vec<i64>,
    /// 1-based row of `K - K` (and of `P`).
    pub difference_row: usize,
    pub p_row: Vec<i64>,
    pub y: YSolution,
    pub cyclic_complement: String,
    pub surjective: bool,
    pub injective: bool,
    pub complement_size: usize,
    pub complement_sha256: String,
    pub audited: bool,
    pub fourier_value: String,
    pub expected_value: String,
    /// The value as `multiplier * sum_{c in C} rho^c` with `rho = zeta_8`.
    pub multiplier: usize,
    pub rho_exponents: Vec<u32>,
    pub rho_form: String,
    pub nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropUscCertificate {
    pub hadamard: HadamardVerdict,
    pub decomposition_t1: DecompositionVerdict,
    pub decomposition_t: DecompositionVerdict,
    pub spectrum_t1: bool,
    pub spectrum_t: bool,
    pub difference_rows: usize,
    pub p_matrix: PMatrixReport,
    pub rows_covered: usize,
    pub pairs: Vec<PairRecord>,
    pub spectrum_size: usize,
    pub obstruction_order: usize,
    pub transcript: Vec<String>,
}

pub struct PropUsc {
    pub certificate: PropUscCertificate,
    pub no_universal_spectrum: NoUniversalSpectrum,
}

fn refuse(step: &str, detail: impl std::fmt::Display) -> Error {
    Error::Verification(format!("{step}: {detail}"))
}

fn set_digest(s: &PointSet) -> String {
    let mut h = Sha256::new();
    for p in s.iter() {
        h.update((p as u64).to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn pair_record(
    inputs: &PropUscInputs,
    g: &Group,
    tile: &PointSet,
    kk_index: usize,
    (i, j): (usize, usize),
) -> Result<(PairRecord, PointSet)> {
    let n = MODULUS as i64;
    let v: Vec<i64> = inputs.l[i].iter().zip(&inputs.l[j]).map(|(a, b)| (a - b).rem_euclid(n)).collect();
    let p_row = inputs.p[kk_index].clone();
    let y = solve_y(&v, &p_row, &inputs.t)?;
    let phi = GroupHomomorphism::new(g, &y.y, MODULUS as u64)?;
    let surjective = phi.is_surjective();
    let injective = phi.is_injective_on(tile);
    if !surjective || !injective {
        return Err(refuse("homomorphism", format!("y = {:?}: surjective {surjective}, injective {injective}", y.y)));
    }
    let image = phi.image_of(tile)?;
    let mut chosen = None;
    for (name, c) in &inputs.cyclic_complements {
        let c = cyclic_set(MODULUS, c)?;
        if is_tiling_pair(&image, &c, CheckMode::Fast)?.is_accepted() {
            chosen = Some((name.clone(), c));
            break;
        }
    }
    let (name, c) = chosen.ok_or_else(|| refuse("cyclic complement", format!("{:?} tiles with none", p_row)))?;
    let pb = pullback_complement(tile, &phi, &c)?;
    let vi = g.reduce(&v)?;
    let value = fourier_coefficient(&pb.complement, vi)?;
    let rho: Vec<i64> = c.iter().map(|k| 3 * k as i64).collect();
    let expected = CyclotomicInteger::sum_of_roots(MODULUS as u64, rho).scale(phi.kernel_order() as i64);
    if value != expected {
        return Err(refuse("fourier value", format!("pair ({}, {}): {value} != {expected}", i + 1, j + 1)));
    }
    if value.is_zero() {
        return Err(refuse("fourier value", format!("pair ({}, {}) vanishes", i + 1, j + 1)));
    }
    let record = PairRecord {
        i: i + 1,
        j: j + 1,
        v,
        difference_row: kk_index + 1,
        p_row,
        y,
        cyclic_complement: name,
        surjective,
        injective,
        complement_size: pb.complement.len(),
        complement_sha256: set_digest(&pb.complement),
        audited: pb.certificate.audited,
        fourier_value: value.to_string(),
        expected_value: expected.to_string(),
        multiplier: phi.kernel_order(),
        rho_exponents: c.iter().map(|k| k as u32).collect(),
        rho_form: format!(
            "{}*({})",
            phi.kernel_order(),
            c.iter().map(|k| format!("ρ^{k}")).collect::<Vec<_>>().join("+")
        ),
        nonzero: true,
    };
    Ok((record, pb.complement))
}

pub fn verify_prop_usc() -> Result<PropUsc> {
    verify_prop_usc_with(&PropUscInputs::builtin()?)
}

/// Runs every step; the first failing step refuses the certificate.
pub fn verify_prop_usc_with(inputs: &PropUscInputs) -> Result<PropUsc> {
    let g = Group::uniform(MODULUS, 3)?;
    let n = MODULUS as i64;
    let hadamard = verify_log_hadamard(&inputs.k);
    if !hadamard.accepted() {
        return Err(refuse("log-Hadamard", format!("{:?}", hadamard.failures)));
    }
    let decomposition_t1 = verify_decomposition(&inputs.l, &inputs.t1, &inputs.k, n)?;
    let decomposition_t = verify_decomposition(&inputs.l, &inputs.t, &inputs.k, n)?;
    if !decomposition_t1.accepted() || !decomposition_t.accepted() {
        return Err(refuse("24K = LT", format!("{:?} {:?}", decomposition_t1.mismatches, decomposition_t.mismatches)));
    }
    let tile = PointSet::from_columns(&g, &inputs.t)?;
    let tile1 = PointSet::from_columns(&g, &inputs.t1)?;
    let l = PointSet::from_coords(&g, &inputs.l)?;
    if tile.len() != inputs.k.size() || l.len() != inputs.k.size() {
        return Err(refuse("sets", "T or L has repeated elements"));
    }
    let spectrum_t1 = is_spectrum(&tile1, &l)?.accepted;
    let spectrum_t = is_spectrum(&tile, &l)?.accepted;
    if !spectrum_t || !spectrum_t1 {
        return Err(refuse("spectrum", format!("T1: {spectrum_t1}, T: {spectrum_t}")));
    }
    let kk = build_k_difference_rows(&inputs.k);
    if kk != inputs.k_minus_k {
        return Err(refuse("K - K", "computed differences differ from the listed matrix"));
    }
    let p_matrix =
        verify_p_matrix(&inputs.p, &kk, inputs.k.denominator as i64, MODULUS, &inputs.cyclic_complements)?;
    if !p_matrix.accepted() {
        return Err(refuse("P", format!("{p_matrix:?}")));
    }

    let m = inputs.k.size();
    let pairs: Vec<(usize, usize)> =
        (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut rows = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let d = difference_row(&inputs.k, i, j);
        rows.push(kk.binary_search(&d).map_err(|_| refuse("K - K", format!("difference of rows {i},{j} missing")))?);
    }
    let mut covered = rows.clone();
    covered.sort_unstable();
    covered.dedup();
    if covered.len() != kk.len() {
        return Err(refuse("K - K", format!("row pairs reach {} of {} rows", covered.len(), kk.len())));
    }

    let results = par::map_range(0..pairs.len(), |x| pair_record(inputs, &g, &tile, rows[x], pairs[x]));
    let mut records = Vec::with_capacity(pairs.len());
    let mut complements = Vec::with_capacity(pairs.len());
    let mut witnesses = Vec::with_capacity(pairs.len());
    for (x, r) in results.into_iter().enumerate() {
        let (record, complement) = r?;
        let v = g.reduce(&record.v)?;
        witnesses.push((v, x));
        records.push(record);
        complements.push(complement);
    }

    let h = divisibility_obstruction(&l)?
        .ok_or_else(|| refuse("obstruction", "L - min L generates a subgroup whose order |L| divides"))?;
    let transcript = vec![
        format!("K is log-Hadamard ({} row pairs)", hadamard.pairs_checked),
        "24K = L T1 = L T (mod 24), so L is a spectrum of T1 and of T".into(),
        format!("{} distinct nonzero row differences of K, each reached by a pair of rows of L", kk.len()),
        format!("{} ordered pairs: v = l_i - l_j is outside the zero-set of a complement phi^-1(C)", records.len()),
        "a universal spectrum S would have (S - S) ∩ (L - L) = {0}, so S + L would tile the dual".into(),
        format!("L - min L lies in a subgroup of order {} and {} ∤ {}", h.order(), l.len(), h.order()),
        "assumed lemma: a set inside a subgroup H tiles the group only if it tiles H".into(),
        "T has no universal spectrum".into(),
    ];
    let route = UscRoute::SpectrumDuality { spectrum: l.clone(), witnesses, obstruction_order: h.order() };
    Ok(PropUsc {
        certificate: PropUscCertificate {
            hadamard,
            decomposition_t1,
            decomposition_t,
            spectrum_t1,
            spectrum_t,
            difference_rows: kk.len(),
            p_matrix,
            rows_covered: covered.len(),
            pairs: records,
            spectrum_size: l.len(),
            obstruction_order: h.order(),
            transcript,
        },
        no_universal_spectrum: NoUniversalSpectrum::new(tile, complements, route),
    })
}

//! Tiling pairs, complement enumeration and homomorphism pullbacks.
//!
//! `T'` is a tiling complement of `T` in `G` iff `|T| |T'| = |G|` and either
//!
//! * `(T - T) ∩ (T' - T') = {0}` (difference-set criterion), or
//! * `Z_T ∪ Z_{T'} = G^ \ {0}` (Fourier criterion).
//!
//! The first is used for decisions; the second is an audit that must agree.

use std::fmt;

use serde::Serialize;

use crate::cyclotomic::{gcd_all, CharacterSums};
use crate::error::{Error, Result};
use crate::group::{difference_set, smallest_containing_subgroup, Group, PointSet, Subgroup};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    DifferenceSet,
    Fourier,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// Difference-set criterion only.
    Fast,
    /// Both criteria; a disagreement is reported as [`Error::CriteriaDisagreement`].
    #[default]
    Audit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingCertificate {
    pub tile: PointSet,
    pub complement: PointSet,
    pub criterion: Criterion,
    pub audited: bool,
    pub transcript: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TilingRefutation {
    SizeMismatch { tile: usize, complement: usize, group: usize },
    /// A nonzero element of `(T - T) ∩ (T' - T')`.
    Overlap { difference: usize },
}

impl fmt::Display for TilingRefutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TilingRefutation::SizeMismatch { tile, complement, group } => {
                write!(f, "size mismatch: {tile} * {complement} != {group}")
            }
            TilingRefutation::Overlap { difference } => {
                write!(f, "nonzero common difference (index {difference})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TilingVerdict {
    Accepted(TilingCertificate),
    Refuted(TilingRefutation),
}

impl TilingVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, TilingVerdict::Accepted(_))
    }
}

/// A common nonzero difference of `a` and `b`, if any.
fn common_difference(a: &PointSet, b: &PointSet) -> Option<usize> {
    // iterate over the differences of the smaller set
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let g = small.group();
    let diffs = difference_set(small).ok()?;
    let members = large.membership();
    let large_pts = large.indices();
    let found = diffs.iter().filter(|&d| d != 0).find(|&d| large_pts.iter().any(|&x| members.contains(g.add(x, d))));
    found
}

/// The Fourier tiling condition, size condition included.
pub fn fourier_tiling_condition(t: &PointSet, tp: &PointSet) -> Result<bool> {
    t.group().ensure_same(tp.group())?;
    let g = t.group();
    if t.len() * tp.len() != g.order() {
        return Ok(false);
    }
    let (small, large) = if t.len() <= tp.len() { (t, tp) } else { (tp, t) };
    let small_sums = CharacterSums::new(small);
    let large_sums = CharacterSums::new(large);
    let duals: Vec<usize> = (1..g.order()).collect();
    Ok(par::all(&duals, |&v| small_sums.vanishes_at(v) || large_sums.vanishes_at(v)))
}

pub fn is_tiling_pair(t: &PointSet, tp: &PointSet, mode: CheckMode) -> Result<TilingVerdict> {
    t.group().ensure_same(tp.group())?;
    let g = t.group();
    let mut transcript = Vec::new();
    let verdict = if t.len() * tp.len() != g.order() {
        TilingVerdict::Refuted(TilingRefutation::SizeMismatch {
            tile: t.len(),
            complement: tp.len(),
            group: g.order(),
        })
    } else if let Some(d) = common_difference(t, tp) {
        TilingVerdict::Refuted(TilingRefutation::Overlap { difference: d })
    } else {
        transcript.push(format!("|T| * |T'| = {} * {} = |G|", t.len(), tp.len()));
        transcript.push("(T - T) ∩ (T' - T') = {0}".to_string());
        TilingVerdict::Accepted(TilingCertificate {
            tile: t.clone(),
            complement: tp.clone(),
            criterion: Criterion::DifferenceSet,
            audited: false,
            transcript,
        })
    };
    if mode == CheckMode::Fast {
        return Ok(verdict);
    }
    let fourier = fourier_tiling_condition(t, tp)?;
    if fourier != verdict.is_accepted() {
        return Err(Error::CriteriaDisagreement { difference_set: verdict.is_accepted(), fourier });
    }
    Ok(match verdict {
        TilingVerdict::Accepted(mut cert) => {
            cert.audited = true;
            cert.transcript.push("audit: Z_T ∪ Z_T' = G^ \\ {0}".to_string());
            TilingVerdict::Accepted(cert)
        }
        refuted => refuted,
    })
}

/// Result of a bounded enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub complements: Vec<PointSet>,
    /// True when the search tree was fully explored, i.e. the list is complete.
    pub exhausted: bool,
}

/// Which uncovered element the complement search branches on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branching {
    /// The least uncovered element.
    #[default]
    LeastElement,
    /// The uncovered element with the fewest placements, ties to the least.
    /// Far faster on large groups; complements come out in a different order.
    FewestCandidates,
}

/// Exact-cover search for complements containing 0.
struct CoverSearch<'a> {
    group: &'a Group,
    branching: Branching,
    tile: Vec<usize>,
    /// `plus[i * order + x] = x + tile[i]` when small enough to tabulate.
    plus: Option<Vec<u32>>,
}

struct Frame {
    point: usize,
    candidates: Vec<usize>,
    next: usize,
    placed: Option<usize>,
}

impl<'a> CoverSearch<'a> {
    fn new(group: &'a Group, tile: &PointSet, branching: Branching) -> Self {
        let tile: Vec<usize> = tile.iter().collect();
        let n = group.order();
        let plus = (n * tile.len() <= 1 << 26).then(|| {
            let mut table = Vec::with_capacity(n * tile.len());
            for &t in &tile {
                table.extend((0..n).map(|x| group.add(x, t) as u32));
            }
            table
        });
        CoverSearch { group, branching, tile, plus }
    }

    fn shift(&self, i: usize, x: usize) -> usize {
        match &self.plus {
            Some(table) => table[i * self.group.order() + x] as usize,
            None => self.group.add(x, self.tile[i]),
        }
    }

    fn fits(&self, c: usize, covered: &[bool]) -> bool {
        (0..self.tile.len()).all(|i| !covered[self.shift(i, c)])
    }

    fn set(&self, c: usize, covered: &mut [bool], value: bool) {
        for i in 0..self.tile.len() {
            covered[self.shift(i, c)] = value;
        }
    }

    /// Placements covering `point`, ascending.
    fn candidates(&self, point: usize, covered: &[bool]) -> Vec<usize> {
        let mut c: Vec<usize> = self
            .tile
            .iter()
            .map(|&t| self.group.sub(point, t))
            .filter(|&c| self.fits(c, covered))
            .collect();
        c.sort_unstable();
        c
    }

    /// Next branching point and its placements, or `None` when all is covered.
    fn choose(&self, covered: &[bool], cursor: usize) -> Option<(usize, Vec<usize>)> {
        let n = self.group.order();
        match self.branching {
            Branching::LeastElement => {
                (cursor..n).find(|&x| !covered[x]).map(|p| (p, self.candidates(p, covered)))
            }
            Branching::FewestCandidates => {
                let mut best: Option<(usize, Vec<usize>)> = None;
                for x in (0..n).filter(|&x| !covered[x]) {
                    let c = self.candidates(x, covered);
                    if c.len() <= 1 {
                        return Some((x, c));
                    }
                    if best.as_ref().map_or(true, |(_, b)| c.len() < b.len()) {
                        best = Some((x, c));
                    }
                }
                best
            }
        }
    }

    /// Depth-first search below the given placements, stopping after `cap` solutions.
    /// Returns the solutions and whether the subtree was exhausted.
    fn run(&self, prefix: &[usize], cap: usize) -> (Vec<PointSet>, bool) {
        let n = self.group.order();
        let mut covered = vec![false; n];
        for &c in prefix {
            if !self.fits(c, &covered) {
                return (Vec::new(), true);
            }
            self.set(c, &mut covered, true);
        }
        let mut found = Vec::new();
        let mut stack: Vec<Frame> = Vec::new();
        let mut cursor = 0;
        loop {
            match self.choose(&covered, cursor) {
                None => {
                    let pts = prefix.iter().copied().chain(stack.iter().filter_map(|f| f.placed));
                    found.push(PointSet::new(self.group, pts));
                    if found.len() >= cap {
                        return (found, false);
                    }
                }
                Some((point, candidates)) => {
                    stack.push(Frame { point, candidates, next: 0, placed: None });
                }
            }
            // advance to the next untried placement
            loop {
                let Some(top) = stack.last_mut() else {
                    return (found, true);
                };
                if let Some(c) = top.placed.take() {
                    self.set(c, &mut covered, false);
                }
                if top.next < top.candidates.len() {
                    let c = top.candidates[top.next];
                    top.next += 1;
                    self.set(c, &mut covered, true);
                    top.placed = Some(c);
                    cursor = top.point + 1;
                    break;
                }
                stack.pop();
            }
        }
    }
}

/// Tiling complements of `T` that contain 0, in deterministic search order
/// (branch on the least uncovered element, placements ascending).
pub fn enumerate_complements(t: &PointSet, limit: usize) -> Result<Enumeration> {
    enumerate_complements_with(t, limit, Branching::LeastElement)
}

pub fn enumerate_complements_with(t: &PointSet, limit: usize, branching: Branching) -> Result<Enumeration> {
    let g = t.group();
    if t.is_empty() {
        return Err(Error::EmptySet);
    }
    if g.order() % t.len() != 0 {
        return Err(Error::SizeDoesNotDivide { tile: t.len(), group: g.order() });
    }
    let search = CoverSearch::new(g, t, branching);
    let cap = limit.saturating_add(1);
    let mut covered = vec![false; g.order()];
    search.set(0, &mut covered, true);
    let (mut complements, exhausted) = match search.choose(&covered, 0) {
        None => (vec![PointSet::singleton(g, 0)], true),
        Some((_, branches)) => {
            // fan out over the first branching point; merge in branch order
            let results = par::map(&branches, |&c| search.run(&[0, c], cap));
            let mut all = Vec::new();
            let mut exhausted = true;
            for (sols, done) in results {
                exhausted &= done;
                all.extend(sols);
                if all.len() >= cap {
                    break;
                }
            }
            (all, exhausted)
        }
    };
    let exhausted = exhausted && complements.len() <= limit;
    complements.truncate(limit);
    Ok(Enumeration { complements, exhausted })
}

/// Sequential variant of [`enumerate_complements`] (no fan-out), for comparison.
pub fn enumerate_complements_sequential(t: &PointSet, limit: usize) -> Result<Enumeration> {
    let g = t.group();
    if t.is_empty() {
        return Err(Error::EmptySet);
    }
    if g.order() % t.len() != 0 {
        return Err(Error::SizeDoesNotDivide { tile: t.len(), group: g.order() });
    }
    let (mut complements, done) = CoverSearch::new(g, t, Branching::LeastElement).run(&[0], limit.saturating_add(1));
    let exhausted = done && complements.len() <= limit;
    complements.truncate(limit);
    Ok(Enumeration { complements, exhausted })
}

/// First complement of `T`, or `None` when exhaustive search proves there is none.
pub fn tiles_group(t: &PointSet) -> Result<Option<PointSet>> {
    if t.is_empty() {
        return Ok(None);
    }
    match enumerate_complements_with(t, 1, Branching::FewestCandidates) {
        Ok(e) => Ok(e.complements.into_iter().next()),
        Err(Error::SizeDoesNotDivide { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `x -> sum_j y_j x_j (N / n_j) mod m` from a group onto the cyclic group `Z_m`,
/// `m | N`. For `Z_n^d` with `m = n` this is `<y, x> mod n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHomomorphism {
    source: Group,
    coefficient: usize,
    target: u64,
}

impl GroupHomomorphism {
    pub fn new(source: &Group, y: &[i64], target: u64) -> Result<Self> {
        if target == 0 || source.exponent() % target != 0 {
            return Err(Error::BadHomomorphismTarget { target, exponent: source.exponent() });
        }
        let coefficient = source.reduce(y)?;
        Ok(GroupHomomorphism { source: source.clone(), coefficient, target })
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target_modulus(&self) -> u64 {
        self.target
    }

    pub fn target_group(&self) -> Result<Group> {
        let m = u32::try_from(self.target).map_err(|_| Error::InvalidModulus(self.target as i64))?;
        Group::cyclic(m)
    }

    pub fn coefficients(&self) -> Vec<u32> {
        self.source.coords(self.coefficient)
    }

    pub fn apply(&self, x: usize) -> u64 {
        self.source.pairing_exponent(self.coefficient, x) % self.target
    }

    pub fn image_of(&self, set: &PointSet) -> Result<PointSet> {
        self.source.ensure_same(set.group())?;
        let h = self.target_group()?;
        Ok(PointSet::new(&h, set.iter().map(|x| self.apply(x) as usize)))
    }

    pub fn is_injective_on(&self, set: &PointSet) -> bool {
        let mut seen: Vec<u64> = set.iter().map(|x| self.apply(x)).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Size of the image subgroup of `Z_m`.
    pub fn image_order(&self) -> u64 {
        let y = self.source.coords(self.coefficient);
        let gens = y.iter().zip(self.source.weights()).map(|(&c, &w)| c as u64 * w % self.target);
        self.target / gcd_all(gens, self.target)
    }

    pub fn is_surjective(&self) -> bool {
        self.image_order() == self.target
    }

    pub fn kernel_order(&self) -> usize {
        self.source.order() / self.image_order() as usize
    }

    /// `phi^{-1}(C)` for `C ⊂ Z_m`.
    pub fn preimage(&self, c: &PointSet) -> Result<PointSet> {
        self.target_group()?.ensure_same(c.group())?;
        let pts = par::filter_range(0..self.source.order(), |x| c.contains(self.apply(x) as usize));
        Ok(PointSet::new(&self.source, pts))
    }
}

/// Homomorphism surjectivity onto `Z_m`.
pub fn is_surjective(phi: &GroupHomomorphism) -> bool {
    phi.is_surjective()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub complement: PointSet,
    pub certificate: TilingCertificate,
}

/// A complement of `T` obtained as `phi^{-1}(C)` where `C` complements `phi(T)`
/// in `Z_m` and `phi` is injective on `T`. The result is re-verified with both
/// tiling criteria before it is returned.
pub fn pullback_complement(t: &PointSet, phi: &GroupHomomorphism, c: &PointSet) -> Result<Pullback> {
    phi.source().ensure_same(t.group())?;
    if !phi.is_injective_on(t) {
        return Err(Error::NotInjective(format!("{:?}", phi.coefficients())));
    }
    let image = phi.image_of(t)?;
    match is_tiling_pair(&image, c, CheckMode::Audit)? {
        TilingVerdict::Accepted(_) => {}
        TilingVerdict::Refuted(r) => {
            return Err(Error::NotATilingPair(format!("{image:?}, {c:?}: {r}")));
        }
    }
    let complement = phi.preimage(c)?;
    match is_tiling_pair(t, &complement, CheckMode::Audit)? {
        TilingVerdict::Accepted(certificate) => Ok(Pullback { complement, certificate }),
        TilingVerdict::Refuted(r) => {
            Err(Error::Verification(format!("pullback is not a complement: {r}")))
        }
    }
}

/// A subgroup `H` containing a translate of `L` with `|L| ∤ |H|`, if there is one.
///
/// `H_0 = <L - min L>` lies inside every subgroup containing a translate of `L`,
/// and `|H_0|` divides the order of each of them, so `H_0` is the only candidate
/// that needs checking. A set lying in `H` tiles `G` only if it tiles `H`, which
/// requires `|L|` to divide `|H|`.
pub fn divisibility_obstruction(l: &PointSet) -> Result<Option<Subgroup>> {
    let h = smallest_containing_subgroup(l)?;
    Ok((h.order() % l.len() != 0).then_some(h))
}

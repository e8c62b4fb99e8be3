//! Finite abelian groups `Z_{n_1} x ... x Z_{n_d}`, point sets and subgroups.
//!
//! Elements are addressed by their mixed-radix index with the first coordinate
//! most significant, so comparing indices is the same as comparing coordinate
//! vectors lexicographically. The dual group shares the presentation: a dual
//! element `v` acts on `x` by `zeta_N^{sum_j v_j x_j (N / n_j)}` with `N` the
//! exponent of the group.

use std::fmt;

use fixedbitset::FixedBitSet;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest group order the library will materialize.
pub const MAX_GROUP_ORDER: usize = 10_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Group {
    moduli: Vec<u32>,
    strides: Vec<usize>,
    weights: Vec<u64>,
    exponent: u64,
    order: usize,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group{:?}", self.moduli)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("Z_{n}")).collect();
        if parts.is_empty() {
            write!(f, "{{0}}")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl Group {
    pub fn new(moduli: &[u32]) -> Result<Self> {
        let mut order: u128 = 1;
        let mut exponent: u64 = 1;
        for &n in moduli {
            if n == 0 {
                return Err(Error::InvalidModulus(0));
            }
            order *= n as u128;
            if order > MAX_GROUP_ORDER as u128 {
                return Err(Error::GroupTooLarge { order, bound: MAX_GROUP_ORDER });
            }
            exponent = exponent.lcm(&(n as u64));
        }
        let order = order as usize;
        let mut strides = vec![1usize; moduli.len()];
        for j in (0..moduli.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * moduli[j + 1] as usize;
        }
        let weights = moduli.iter().map(|&n| exponent / n as u64).collect();
        Ok(Group { moduli: moduli.to_vec(), strides, weights, exponent, order })
    }

    /// Like [`Group::new`] but accepts signed input, as read from files.
    pub fn from_signed(moduli: &[i64]) -> Result<Self> {
        let mut m = Vec::with_capacity(moduli.len());
        for &n in moduli {
            if n < 1 || n > u32::MAX as i64 {
                return Err(Error::InvalidModulus(n));
            }
            m.push(n as u32);
        }
        Group::new(&m)
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Group::new(&[n])
    }

    /// `Z_n^d`.
    pub fn uniform(n: u32, d: usize) -> Result<Self> {
        Group::new(&vec![n; d])
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `N = lcm(n_1, ..., n_d)`, the order of the roots of unity in every character value.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `N / n_j` for each coordinate.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// `self x Z_p`, with the new coordinate appended last.
    pub fn extend(&self, p: u32) -> Result<Group> {
        let mut m = self.moduli.clone();
        m.push(p);
        Group::new(&m)
    }

    pub fn ensure_same(&self, other: &Group) -> Result<()> {
        if self.moduli == other.moduli {
            Ok(())
        } else {
            Err(Error::GroupMismatch { left: self.moduli.clone(), right: other.moduli.clone() })
        }
    }

    pub fn zero(&self) -> usize {
        0
    }

    /// Index of already-reduced coordinates.
    pub fn encode(&self, coords: &[u32]) -> usize {
        debug_assert_eq!(coords.len(), self.rank());
        coords.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    /// Index of arbitrary integer coordinates, reduced modulo each `n_j`.
    pub fn reduce(&self, coords: &[i64]) -> Result<usize> {
        if coords.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: coords.len() });
        }
        Ok(coords
            .iter()
            .zip(&self.moduli)
            .zip(&self.strides)
            .map(|((&c, &n), &s)| c.rem_euclid(n as i64) as usize * s)
            .sum())
    }

    pub fn coords(&self, idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.rank()];
        self.write_coords(idx, &mut out);
        out
    }

    pub fn write_coords(&self, idx: usize, out: &mut [u32]) {
        let mut rest = idx;
        for j in (0..self.rank()).rev() {
            let n = self.moduli[j] as usize;
            out[j] = (rest % n) as u32;
            rest /= n;
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for j in (0..self.rank()).rev() {
            let n = self.moduli[j] as usize;
            let s = (a % n + b % n) % n;
            out += s * self.strides[j];
            a /= n;
            b /= n;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        for j in (0..self.rank()).rev() {
            let n = self.moduli[j] as usize;
            let c = a % n;
            out += ((n - c) % n) * self.strides[j];
            a /= n;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `k * a`.
    pub fn scale(&self, k: i64, a: usize) -> usize {
        let c = self.coords(a);
        let scaled: Vec<i64> = c.iter().map(|&x| x as i64 * k).collect();
        self.reduce(&scaled).expect("rank matches")
    }

    /// Order of the element `a` (smallest `k >= 1` with `k a = 0`).
    pub fn element_order(&self, a: usize) -> u64 {
        self.coords(a)
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &n)| n as u64 / (c as u64).gcd(&(n as u64)))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// `sum_j v_j x_j (N / n_j) mod N`, the exponent of `zeta_N` in the character value.
    pub fn pairing_exponent(&self, v: usize, x: usize) -> u64 {
        let (mut v, mut x) = (v, x);
        let mut acc = 0u64;
        for j in (0..self.rank()).rev() {
            let n = self.moduli[j] as usize;
            let term = (v % n) as u64 * (x % n) as u64 % self.exponent;
            acc = (acc + term * self.weights[j]) % self.exponent;
            v /= n;
            x /= n;
        }
        acc
    }

    /// Element-level pairing with presentation check.
    pub fn pairing(&self, v: &GroupElement, x: &GroupElement) -> Result<u64> {
        let v = self.index_of(v)?;
        let x = self.index_of(x)?;
        Ok(self.pairing_exponent(v, x))
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        let idx = self.reduce(coords)?;
        Ok(GroupElement { coords: self.coords(idx) })
    }

    pub fn index_of(&self, e: &GroupElement) -> Result<usize> {
        if e.coords.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: e.coords.len() });
        }
        if e.coords.iter().zip(&self.moduli).any(|(&c, &n)| c >= n) {
            return Err(Error::Precondition(format!("{e} is not reduced in {self}")));
        }
        Ok(self.encode(&e.coords))
    }

    /// The whole group as a point set.
    pub fn all(&self) -> PointSet {
        PointSet { group: self.clone(), points: (0..self.order).collect() }
    }
}

/// A reduced coordinate vector. Which group it lives in is tracked by the
/// operation receiving it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub coords: Vec<u32>,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A finite subset of a group, kept sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    group: Group,
    points: Vec<usize>,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|&p| self.fmt_point(p)).collect();
        write!(f, "{{{}}} in {}", parts.join(", "), self.group)
    }
}

impl PointSet {
    pub fn new(group: &Group, points: impl IntoIterator<Item = usize>) -> PointSet {
        let mut points: Vec<usize> = points.into_iter().collect();
        debug_assert!(points.iter().all(|&p| p < group.order()));
        points.sort_unstable();
        points.dedup();
        PointSet { group: group.clone(), points }
    }

    pub fn empty(group: &Group) -> PointSet {
        PointSet { group: group.clone(), points: Vec::new() }
    }

    pub fn singleton(group: &Group, p: usize) -> PointSet {
        PointSet { group: group.clone(), points: vec![p] }
    }

    /// From integer coordinate rows, one row per element.
    pub fn from_coords<R: AsRef<[i64]>>(group: &Group, rows: &[R]) -> Result<PointSet> {
        let mut pts = Vec::with_capacity(rows.len());
        for r in rows {
            pts.push(group.reduce(r.as_ref())?);
        }
        Ok(PointSet::new(group, pts))
    }

    /// From a `d x m` matrix whose columns are the elements.
    pub fn from_columns<R: AsRef<[i64]>>(group: &Group, rows: &[R]) -> Result<PointSet> {
        if rows.len() != group.rank() {
            return Err(Error::RankMismatch { expected: group.rank(), got: rows.len() });
        }
        let width = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if rows.iter().any(|r| r.as_ref().len() != width) {
            return Err(Error::Shape("ragged matrix".into()));
        }
        let cols: Vec<Vec<i64>> =
            (0..width).map(|c| rows.iter().map(|r| r.as_ref()[c]).collect()).collect();
        PointSet::from_coords(group, &cols)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.points.iter().copied()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn min(&self) -> Option<usize> {
        self.points.first().copied()
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.points.iter().map(|&p| GroupElement { coords: self.group.coords(p) }).collect()
    }

    pub fn coords_rows(&self) -> Vec<Vec<u32>> {
        self.points.iter().map(|&p| self.group.coords(p)).collect()
    }

    pub fn membership(&self) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.group.order());
        for &p in &self.points {
            bits.insert(p);
        }
        bits
    }

    pub fn from_membership(group: &Group, bits: &FixedBitSet) -> PointSet {
        PointSet { group: group.clone(), points: bits.ones().collect() }
    }

    pub fn translate(&self, c: usize) -> PointSet {
        PointSet::new(&self.group, self.points.iter().map(|&p| self.group.add(p, c)))
    }

    pub fn negate(&self) -> PointSet {
        PointSet::new(&self.group, self.points.iter().map(|&p| self.group.neg(p)))
    }

    /// Translate so that the smallest point becomes 0.
    pub fn normalized(&self) -> PointSet {
        match self.min() {
            Some(m) => self.translate(self.group.neg(m)),
            None => self.clone(),
        }
    }

    /// Lexicographically least translate containing 0.
    pub fn canonical_translate(&self) -> PointSet {
        self.points
            .iter()
            .map(|&t| self.translate(self.group.neg(t)))
            .min_by(|a, b| a.points.cmp(&b.points))
            .unwrap_or_else(|| self.clone())
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.group.ensure_same(&other.group)?;
        Ok(PointSet::new(&self.group, self.iter().chain(other.iter())))
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.group.ensure_same(&other.group)?;
        Ok(PointSet::new(&self.group, self.iter().filter(|&p| other.contains(p))))
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.group == other.group && self.iter().all(|p| other.contains(p))
    }

    /// `A + B`, as a set (multiplicities dropped).
    pub fn sumset(&self, other: &PointSet) -> Result<PointSet> {
        self.group.ensure_same(&other.group)?;
        let g = &self.group;
        Ok(PointSet::new(g, self.iter().flat_map(|a| other.iter().map(move |b| g.add(a, b)))))
    }

    pub fn fmt_point(&self, p: usize) -> String {
        GroupElement { coords: self.group.coords(p) }.to_string()
    }

    /// Image under a coordinate embedding into another group, each coordinate
    /// taken as its representative in `[0, n_j)`.
    pub fn embed(&self, target: &Group, pad: usize) -> Result<PointSet> {
        if target.rank() != self.group.rank() + pad {
            return Err(Error::RankMismatch { expected: target.rank(), got: self.group.rank() + pad });
        }
        let mut pts = Vec::with_capacity(self.len());
        for p in self.iter() {
            let mut c: Vec<i64> = self.group.coords(p).iter().map(|&x| x as i64).collect();
            c.extend(std::iter::repeat(0).take(pad));
            pts.push(target.reduce(&c)?);
        }
        Ok(PointSet::new(target, pts))
    }
}

/// `{a - a' : a, a' in A}`.
pub fn difference_set(a: &PointSet) -> Result<PointSet> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let g = a.group();
    Ok(PointSet::new(g, a.iter().flat_map(|x| a.iter().map(move |y| g.sub(x, y)))))
}

/// A subgroup given by generators together with its materialized elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<usize>,
    pub elements: PointSet,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn group(&self) -> &Group {
        self.elements.group()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.elements.contains(p)
    }
}

/// Smallest subgroup containing `gens`, by breadth-first closure.
pub fn subgroup_generated(group: &Group, gens: &[usize]) -> Subgroup {
    let mut seen = FixedBitSet::with_capacity(group.order());
    let mut queue = vec![0usize];
    seen.insert(0);
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &g in gens {
            let y = group.add(x, g);
            if !seen.contains(y) {
                seen.insert(y);
                queue.push(y);
            }
        }
    }
    Subgroup { generators: gens.to_vec(), elements: PointSet::from_membership(group, &seen) }
}

/// The subgroup generated by `A - min(A)`. Every subgroup containing a translate
/// of `A` contains this one, so its order divides theirs.
pub fn smallest_containing_subgroup(a: &PointSet) -> Result<Subgroup> {
    let base = a.min().ok_or(Error::EmptySet)?;
    let g = a.group();
    let gens: Vec<usize> = a.iter().filter(|&x| x != base).map(|x| g.sub(x, base)).collect();
    Ok(subgroup_generated(g, &gens))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        let g = Group::uniform(24, 3).unwrap();
        let v = g.reduce(&[3, 0, 0]).unwrap();
        let x = g.reduce(&[1, 4, 2]).unwrap();
        assert_eq!(g.pairing_exponent(v, x), 3);
        for x in 0..g.order() {
            assert_eq!(g.pairing_exponent(0, x), 0);
        }
        let h = Group::uniform(6, 4).unwrap();
        let v = h.element(&[2, 2, 4, 4]).unwrap();
        let x = h.element(&[3, 4, 4, 4]).unwrap();
        assert_eq!(h.pairing(&v, &x).unwrap(), 4);
    }

    #[test]
    fn pairing_rejects_foreign_elements() {
        let g = Group::uniform(6, 4).unwrap();
        let e = GroupElement { coords: vec![1, 2, 3] };
        assert!(g.pairing(&e, &e).is_err());
    }

    #[test]
    fn mixed_moduli_weights() {
        let g = Group::new(&[2, 3, 4]).unwrap();
        assert_eq!(g.exponent(), 12);
        assert_eq!(g.weights(), &[6, 4, 3]);
        assert_eq!(g.order(), 24);
        let v = g.reduce(&[1, 1, 1]).unwrap();
        let x = g.reduce(&[1, 2, 3]).unwrap();
        // 6 + 8 + 9 = 23 = 11 mod 12
        assert_eq!(g.pairing_exponent(v, x), 11);
    }

    #[test]
    fn index_order_is_lexicographic() {
        let g = Group::new(&[3, 5]).unwrap();
        let mut prev: Option<Vec<u32>> = None;
        for i in 0..g.order() {
            let c = g.coords(i);
            if let Some(p) = prev {
                assert!(p < c);
            }
            assert_eq!(g.encode(&c), i);
            prev = Some(c);
        }
    }

    #[test]
    fn difference_set_examples() {
        let z1 = Group::cyclic(1).unwrap();
        assert_eq!(difference_set(&PointSet::new(&z1, [0])).unwrap().indices(), &[0]);
        let z6 = Group::cyclic(6).unwrap();
        assert_eq!(difference_set(&PointSet::new(&z6, [0, 3])).unwrap().indices(), &[0, 3]);
        let z24 = Group::cyclic(24).unwrap();
        let c1 = PointSet::new(&z24, [0, 3, 6, 9]);
        // brute force: all pairwise differences mod 24
        let mut expected: Vec<usize> = Vec::new();
        for a in [0i64, 3, 6, 9] {
            for b in [0i64, 3, 6, 9] {
                expected.push((a - b).rem_euclid(24) as usize);
            }
        }
        expected.sort_unstable();
        expected.dedup();
        assert_eq!(expected, vec![0, 3, 6, 9, 15, 18, 21]);
        assert_eq!(difference_set(&c1).unwrap().indices(), expected.as_slice());
        assert_eq!(difference_set(&PointSet::empty(&z6)), Err(Error::EmptySet));
    }

    #[test]
    fn subgroup_examples() {
        let g = Group::uniform(24, 3).unwrap();
        let gens: Vec<usize> =
            [[3, 0, 0], [0, 3, 0], [0, 0, 3]].iter().map(|c| g.reduce(c).unwrap()).collect();
        assert_eq!(subgroup_generated(&g, &gens).order(), 512);
        let h = Group::uniform(6, 4).unwrap();
        let gens: Vec<usize> = (0..4)
            .map(|j| {
                let mut c = [0i64; 4];
                c[j] = 2;
                h.reduce(&c).unwrap()
            })
            .collect();
        assert_eq!(subgroup_generated(&h, &gens).order(), 81);
        assert_eq!(subgroup_generated(&h, &[]).elements.indices(), &[0]);
        let single = PointSet::new(&h, [17]);
        assert_eq!(smallest_containing_subgroup(&single).unwrap().order(), 1);
    }

    #[test]
    fn rejects_bad_groups() {
        assert_eq!(Group::new(&[3, 0]), Err(Error::InvalidModulus(0)));
        assert!(matches!(Group::uniform(100, 4), Err(Error::GroupTooLarge { .. })));
        assert!(Group::from_signed(&[-2]).is_err());
    }

    #[test]
    fn element_orders() {
        let g = Group::uniform(6, 4).unwrap();
        let x = g.reduce(&[3, 4, 4, 4]).unwrap();
        assert_eq!(g.element_order(x), 6);
        assert_eq!(g.scale(6, x), 0);
        assert_eq!(g.element_order(0), 1);
    }

    #[test]
    fn canonical_translate_contains_zero() {
        let g = Group::cyclic(8).unwrap();
        let s = PointSet::new(&g, [3, 5, 6]);
        let c = s.canonical_translate();
        assert!(c.contains(0));
        // translates by -3, -5, -6: {0,2,3}, {0,1,6}, {0,5,7}
        assert_eq!(c.indices(), &[0, 1, 6]);
    }
}

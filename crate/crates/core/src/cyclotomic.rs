//! Exact sums of roots of unity and Fourier zero-sets.
//!
//! A [`CyclotomicInteger`] is `sum_k c_k zeta_N^k` with integer coefficients.
//! It vanishes exactly when its coefficient polynomial is divisible by the
//! cyclotomic polynomial `Phi_N`, which is how every zero verdict in the crate
//! is decided. Floating point is only used for [`CyclotomicInteger::complex_estimate`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{Group, PointSet};
use crate::par;

struct CyclotomicPolynomial {
    coeffs: Vec<BigInt>,
    small: Option<Vec<i64>>,
}

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<CyclotomicPolynomial>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CyclotomicPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn phi(n: u64) -> Arc<CyclotomicPolynomial> {
    if let Some(p) = phi_cache().read().expect("phi cache poisoned").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = exact_div(&num, &phi(d).coeffs);
        }
    }
    let small = num.iter().map(|c| c.to_i64()).collect::<Option<Vec<i64>>>();
    let entry = Arc::new(CyclotomicPolynomial { coeffs: num, small });
    phi_cache().write().expect("phi cache poisoned").entry(n).or_insert(entry).clone()
}

/// The coefficients of `Phi_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "Phi_0 is undefined");
    phi(n).coeffs.clone()
}

/// Exact quotient of `num` by the monic polynomial `den`.
fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// Remainder of `p` modulo the monic `Phi` in place, big-integer route.
fn reduce_big(p: &mut [BigInt], phi: &[BigInt]) {
    let deg = phi.len() - 1;
    for top in (deg..p.len()).rev() {
        let c = std::mem::take(&mut p[top]);
        if c.is_zero() {
            continue;
        }
        for (i, f) in phi.iter().enumerate().take(deg) {
            p[top - deg + i] -= &c * f;
        }
    }
}

/// Machine-integer remainder; `None` on overflow.
fn reduce_small(p: &mut [i128], phi: &[i64]) -> Option<()> {
    let deg = phi.len() - 1;
    for top in (deg..p.len()).rev() {
        let c = std::mem::replace(&mut p[top], 0);
        if c == 0 {
            continue;
        }
        for (i, &f) in phi.iter().enumerate().take(deg) {
            let slot = &mut p[top - deg + i];
            *slot = slot.checked_sub(c.checked_mul(f as i128)?)?;
        }
    }
    Some(())
}

/// Whether `sum_k counts[k] zeta_N^k` vanishes, where `N = counts.len()`.
pub fn counts_vanish(counts: &[i64]) -> bool {
    let n = counts.len() as u64;
    let poly = phi(n);
    if let Some(small) = &poly.small {
        let mut p: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
        if reduce_small(&mut p, small).is_some() {
            return p.iter().all(|&c| c == 0);
        }
    }
    let mut p: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
    reduce_big(&mut p, &poly.coeffs);
    p.iter().all(Zero::is_zero)
}

/// `sum_{k < N} coeffs[k] zeta_N^k`.
#[derive(Clone)]
pub struct CyclotomicInteger {
    order: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInteger {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1, "root order must be positive");
        CyclotomicInteger { order, coeffs: vec![BigInt::zero(); order as usize] }
    }

    pub fn from_integer(order: u64, value: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = value.into();
        z
    }

    /// `zeta_N^k`.
    pub fn root(order: u64, k: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[k.rem_euclid(order as i64) as usize] = BigInt::one();
        z
    }

    /// Coefficient vector of length at most `order`; exponents wrap modulo `order`.
    pub fn from_coeffs(order: u64, coeffs: &[i64]) -> Self {
        let mut z = Self::zero(order);
        for (k, &c) in coeffs.iter().enumerate() {
            z.coeffs[k % order as usize] += c;
        }
        z
    }

    /// `sum_e zeta_N^e` over the given exponents, with multiplicity.
    pub fn sum_of_roots(order: u64, exponents: impl IntoIterator<Item = i64>) -> Self {
        let mut z = Self::zero(order);
        for e in exponents {
            z.coeffs[e.rem_euclid(order as i64) as usize] += 1;
        }
        z
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Reinterpret in `zeta_M` with `N | M` via `zeta_N = zeta_M^{M/N}`.
    pub fn lift_to(&self, order: u64) -> Result<Self> {
        if order % self.order != 0 {
            return Err(Error::Precondition(format!(
                "cannot embed zeta_{} into zeta_{}",
                self.order, order
            )));
        }
        let step = (order / self.order) as usize;
        let mut z = Self::zero(order);
        for (k, c) in self.coeffs.iter().enumerate() {
            z.coeffs[k * step] = c.clone();
        }
        Ok(z)
    }

    /// Canonical form: the remainder modulo `Phi_N`, padded back to length `N`.
    pub fn reduce(&self) -> Self {
        let mut p = self.coeffs.clone();
        reduce_big(&mut p, &phi(self.order).coeffs);
        CyclotomicInteger { order: self.order, coeffs: p }
    }

    pub fn is_zero(&self) -> bool {
        self.reduce().coeffs.iter().all(Zero::is_zero)
    }

    /// Whether the value is a rational integer, and which.
    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.reduce();
        r.coeffs[1..].iter().all(Zero::is_zero).then(|| r.coeffs[0].clone())
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        CyclotomicInteger { order: self.order, coeffs: self.coeffs.iter().map(|c| c * &k).collect() }
    }

    /// Floating-point value, for display only.
    pub fn complex_estimate(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order, other.order, "mixing roots of unity of different orders");
    }
}

impl PartialEq for CyclotomicInteger {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && (self - other).is_zero()
    }
}

impl Eq for CyclotomicInteger {}

impl fmt::Debug for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match (k, mag.is_one()) {
                (0, _) => mag.to_string(),
                (_, true) => format!("z{}^{}", self.order, k),
                _ => format!("{}*z{}^{}", mag, self.order, k),
            };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (sign, body)) in terms.iter().enumerate() {
            match (i, *sign) {
                (0, "+") => write!(f, "{body}")?,
                (0, _) => write!(f, "-{body}")?,
                _ => write!(f, " {sign} {body}")?,
            }
        }
        Ok(())
    }
}

impl Add for &CyclotomicInteger {
    type Output = CyclotomicInteger;
    fn add(self, rhs: Self) -> CyclotomicInteger {
        self.check_order(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicInteger { order: self.order, coeffs }
    }
}

impl Sub for &CyclotomicInteger {
    type Output = CyclotomicInteger;
    fn sub(self, rhs: Self) -> CyclotomicInteger {
        self.check_order(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicInteger { order: self.order, coeffs }
    }
}

impl Neg for &CyclotomicInteger {
    type Output = CyclotomicInteger;
    fn neg(self) -> CyclotomicInteger {
        CyclotomicInteger { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CyclotomicInteger {
    type Output = CyclotomicInteger;
    fn mul(self, rhs: Self) -> CyclotomicInteger {
        self.check_order(rhs);
        let n = self.order as usize;
        let mut out = CyclotomicInteger::zero(self.order);
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out.coeffs[(i + j) % n] += a * b;
            }
        }
        out
    }
}

impl Add for CyclotomicInteger {
    type Output = CyclotomicInteger;
    fn add(self, rhs: Self) -> CyclotomicInteger {
        &self + &rhs
    }
}

impl Mul for CyclotomicInteger {
    type Output = CyclotomicInteger;
    fn mul(self, rhs: Self) -> CyclotomicInteger {
        &self * &rhs
    }
}

/// Precomputed data for evaluating `chi_T(v) = sum_{t in T} zeta_N^{<v,t>}`
/// at many duals `v`.
pub struct CharacterSums {
    group: Group,
    weighted: Vec<u64>,
    len: usize,
}

impl CharacterSums {
    pub fn new(set: &PointSet) -> Self {
        let g = set.group();
        let d = g.rank();
        let mut weighted = Vec::with_capacity(set.len() * d);
        let mut buf = vec![0u32; d];
        for t in set.iter() {
            g.write_coords(t, &mut buf);
            weighted.extend(buf.iter().zip(g.weights()).map(|(&c, &w)| c as u64 * w));
        }
        CharacterSums { group: g.clone(), weighted, len: set.len() }
    }

    /// Multiplicity of each exponent `e` in `chi_T(v) = sum_e counts[e] zeta_N^e`.
    pub fn histogram(&self, v: usize) -> Vec<i64> {
        let g = &self.group;
        let n = g.exponent();
        let d = g.rank();
        let vc = g.coords(v);
        let mut counts = vec![0i64; n as usize];
        if d == 0 {
            counts[0] = self.len as i64;
            return counts;
        }
        for chunk in self.weighted.chunks_exact(d) {
            let e = chunk.iter().zip(&vc).fold(0u64, |acc, (&tw, &vj)| (acc + tw * vj as u64) % n);
            counts[e as usize] += 1;
        }
        counts
    }

    pub fn vanishes_at(&self, v: usize) -> bool {
        counts_vanish(&self.histogram(v))
    }

    pub fn value_at(&self, v: usize) -> CyclotomicInteger {
        let h = self.histogram(v);
        CyclotomicInteger::from_coeffs(self.group.exponent(), &h)
    }
}

/// `chi_T(v)` exactly.
pub fn fourier_coefficient(t: &PointSet, v: usize) -> Result<CyclotomicInteger> {
    if t.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(CharacterSums::new(t).value_at(v))
}

/// `Z_T = {v : chi_T(v) = 0}` inside the dual group (same presentation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSet {
    pub members: PointSet,
}

impl ZeroSet {
    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Z^c = dual \ Z` (this includes 0).
    pub fn complement(&self) -> PointSet {
        let g = self.members.group();
        let mut bits = self.members.membership();
        bits.toggle_range(..);
        PointSet::from_membership(g, &bits)
    }
}

pub fn zero_set(t: &PointSet) -> Result<ZeroSet> {
    if t.is_empty() {
        return Err(Error::EmptySet);
    }
    let sums = CharacterSums::new(t);
    let g = t.group();
    let members = par::filter_range(0..g.order(), |v| sums.vanishes_at(v));
    Ok(ZeroSet { members: PointSet::new(g, members) })
}

/// Greatest common divisor helper shared by homomorphism code.
pub(crate) fn gcd_all(values: impl IntoIterator<Item = u64>, start: u64) -> u64 {
    values.into_iter().fold(start, |acc, v| acc.gcd(&v))
}

//! Brute-force oracles that share no code with the library's search cores.
//! Also pulled into the CLI acceptance target by path.

#![allow(dead_code)]

use fuglede_core::{Group, PointSet};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// `T + T'` hits every element exactly once.
pub fn tiles_by_counting(t: &PointSet, tp: &PointSet) -> bool {
    let g = t.group();
    let mut hits = vec![0u32; g.order()];
    for a in t.iter() {
        for b in tp.iter() {
            hits[add(g, a, b)] += 1;
        }
    }
    hits.iter().all(|&h| h == 1)
}

fn add(g: &Group, a: usize, b: usize) -> usize {
    let (ca, cb) = (g.coords(a), g.coords(b));
    let c: Vec<u32> = ca.iter().zip(&cb).zip(g.moduli()).map(|((x, y), n)| (x + y) % n).collect();
    g.encode(&c)
}

/// All `k`-subsets of `0..n` that contain 0, ascending.
pub fn subsets_with_zero(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    go(1, n, k, &mut vec![0], &mut out);
    out
}

/// Complements of a cyclic tile containing 0, by scanning every subset.
pub fn complements_by_scan(t: &PointSet) -> Vec<PointSet> {
    let g = t.group();
    let n = g.order();
    if n % t.len() != 0 {
        return vec![];
    }
    subsets_with_zero(n, n / t.len())
        .into_iter()
        .map(|s| PointSet::new(g, s))
        .filter(|s| tiles_by_counting(t, s))
        .collect()
}

/// `|sum_{x in T} e^{2 pi i <v, x>}| < 1e-9`, by floating point.
pub fn vanishes_numerically(t: &PointSet, v: usize) -> bool {
    let g = t.group();
    let cv = g.coords(v);
    let (mut re, mut im) = (0f64, 0f64);
    for x in t.iter() {
        let cx = g.coords(x);
        let turns: f64 = cv.iter().zip(&cx).zip(g.moduli()).map(|((a, b), n)| (a * b) as f64 / *n as f64).sum();
        let angle = std::f64::consts::TAU * turns;
        re += angle.cos();
        im += angle.sin();
    }
    re.hypot(im) < 1e-9
}

/// Whether a cyclic set has a spectrum, by scanning every candidate through 0.
pub fn has_spectrum_by_scan(t: &PointSet) -> bool {
    let g = t.group();
    let n = g.order();
    let zero: Vec<bool> = (0..n).map(|v| v != 0 && vanishes_numerically(t, v)).collect();
    subsets_with_zero(n, t.len())
        .iter()
        .any(|s| s.iter().all(|&a| s.iter().all(|&b| a == b || zero[(a + n - b) % n])))
}

/// Canonical translates (least translate containing 0) of subsets of `Z_n`.
pub fn cyclic_classes(n: u32) -> Vec<PointSet> {
    let g = Group::cyclic(n).unwrap();
    let n = n as usize;
    let mut out = Vec::new();
    for mask in 0u32..1 << (n - 1) {
        let pts: Vec<usize> = std::iter::once(0).chain((1..n).filter(|i| mask >> (i - 1) & 1 == 1)).collect();
        let least = (0..n)
            .filter(|c| pts.contains(c))
            .map(|c| {
                let mut s: Vec<usize> = pts.iter().map(|&p| (p + n - c) % n).collect();
                s.sort();
                s
            })
            .min()
            .unwrap();
        if least == pts {
            out.push(PointSet::new(&g, pts));
        }
    }
    out
}

pub fn random_group(rng: &mut StdRng, max_order: usize) -> Group {
    loop {
        let rank = rng.gen_range(1..=3);
        let moduli: Vec<u32> = (0..rank).map(|_| rng.gen_range(1..=12)).collect();
        if moduli.iter().map(|&m| m as usize).product::<usize>() <= max_order {
            return Group::new(&moduli).unwrap();
        }
    }
}

fn random_subset(rng: &mut StdRng, g: &Group, k: usize) -> PointSet {
    let mut all: Vec<usize> = (0..g.order()).collect();
    all.shuffle(rng);
    PointSet::new(g, all.into_iter().take(k))
}

/// A pair of sizes multiplying to `|G|`. About half are genuine tilings: a
/// random transversal of the cosets of a cyclic subgroup, paired with it.
pub fn random_pair(rng: &mut StdRng, max_order: usize) -> (PointSet, PointSet) {
    let g = random_group(rng, max_order);
    let n = g.order();
    let pair = if rng.gen_bool(0.5) {
        let h_gen = rng.gen_range(0..n);
        let mut h = vec![0usize];
        let mut x = h_gen;
        while x != 0 {
            h.push(x);
            x = add(&g, x, h_gen);
        }
        let h = PointSet::new(&g, h);
        let mut seen = vec![false; n];
        let mut reps = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        for a in order {
            if !seen[a] {
                reps.push(a);
                for b in h.iter() {
                    seen[add(&g, a, b)] = true;
                }
            }
        }
        (PointSet::new(&g, reps), h)
    } else {
        let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let a = *divisors.choose(rng).unwrap();
        (random_subset(rng, &g, a), random_subset(rng, &g, n / a))
    };
    if rng.gen_bool(0.5) {
        (pair.1, pair.0)
    } else {
        pair
    }
}

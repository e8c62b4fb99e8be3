//! Grid lift of a set in `Z_{n_1} x ... x Z_{n_d}` to the box `Z_{kn_1} x ... x Z_{kn_d}`.

use crate::error::{Error, Result};
use crate::group::{Group, PointSet};
use crate::tiling::{is_tiling_pair, CheckMode, TilingVerdict};

/// `B(k) = A + {0, n_1, ..., (k-1) n_1} x ... x {0, n_d, ..., (k-1) n_d}`, with
/// each coordinate of `A` taken in `[0, n_j)`.
pub fn grid_lift(a: &PointSet, k: u32) -> Result<PointSet> {
    if k == 0 {
        return Err(Error::Precondition("lift factor must be at least 1".into()));
    }
    let g = a.group();
    let moduli: Vec<u32> = g
        .moduli()
        .iter()
        .map(|&n| n.checked_mul(k).ok_or(Error::InvalidModulus(n as i64 * k as i64)))
        .collect::<Result<_>>()?;
    let big = Group::new(&moduli)?;
    let d = g.rank();
    let mut pts = Vec::with_capacity(a.len() * (k as usize).pow(d as u32));
    let mut shift = vec![0u32; d];
    for p in a.iter() {
        let base = g.coords(p);
        shift.iter_mut().for_each(|s| *s = 0);
        loop {
            let c: Vec<u32> = base.iter().zip(&shift).zip(g.moduli()).map(|((&x, &m), &n)| x + m * n).collect();
            pts.push(big.encode(&c));
            // odometer over {0..k}^d
            let mut j = d;
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                shift[j] += 1;
                if shift[j] < k {
                    break;
                }
                shift[j] = 0;
            }
            if shift.iter().all(|&s| s == 0) {
                break;
            }
        }
    }
    Ok(PointSet::new(&big, pts))
}

/// Lifts `A` and re-verifies that the embedded complement `A'` (coordinates in
/// `[0, n_j)`) tiles the box with it.
pub fn grid_lift_tiling(a: &PointSet, complement: &PointSet, k: u32) -> Result<(PointSet, PointSet)> {
    a.group().ensure_same(complement.group())?;
    if !is_tiling_pair(a, complement, CheckMode::Fast)?.is_accepted() {
        return Err(Error::NotATilingPair("the base pair does not tile".into()));
    }
    let b = grid_lift(a, k)?;
    let c = complement.embed(b.group(), 0)?;
    match is_tiling_pair(&b, &c, CheckMode::Fast)? {
        TilingVerdict::Accepted(_) => Ok((b, c)),
        TilingVerdict::Refuted(r) => Err(Error::Verification(format!("lifted pair does not tile: {r}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_examples() {
        let z2 = Group::cyclic(2).unwrap();
        let a = PointSet::singleton(&z2, 0);
        assert_eq!(grid_lift(&a, 1).unwrap(), a);
        let b = grid_lift(&a, 2).unwrap();
        assert_eq!(b.group().moduli(), &[4]);
        assert_eq!(b.indices(), &[0, 2]);
        assert!(grid_lift(&a, 0).is_err());
    }

    #[test]
    fn lift_preserves_tiling() {
        let g = Group::new(&[4, 6]).unwrap();
        let a = PointSet::from_coords(&g, &[[0, 0], [1, 3]]).unwrap();
        let c = crate::tiling::tiles_group(&a).unwrap().unwrap();
        for k in 1..=3 {
            let (b, _) = grid_lift_tiling(&a, &c, k).unwrap();
            assert_eq!(b.len(), a.len() * (k * k) as usize);
        }
    }
}

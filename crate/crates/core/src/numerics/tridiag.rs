use rug::{Assign, Float};

use super::context::{BigReal, PrecisionContext};
use crate::error::{Error, Result};

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly
/// below `x` (Sturm count via the LDL^T pivots).
fn count_below(diag: &[BigReal], offdiag_sq: &[BigReal], x: &BigReal, tiny: &BigReal, bits: u32) -> usize {
    let mut count = 0;
    let mut q = Float::with_val(bits, &diag[0] - x);
    for i in 0..diag.len() {
        if i > 0 {
            let ratio = Float::with_val(bits, &offdiag_sq[i - 1] / &q);
            q = Float::with_val(bits, &diag[i] - x);
            q -= ratio;
        }
        if q.is_zero() {
            q.assign(tiny);
        }
        if q.is_sign_negative() {
            count += 1;
        }
    }
    count
}

/// Ascending eigenvalues of the symmetric tridiagonal matrix with the
/// given diagonal and (positive) off-diagonal, by Sturm-sequence bisection
/// to an absolute width of `10^(10 - digits)`.
pub fn tridiag_eigenvalues(
    diag: &[BigReal],
    offdiag: &[BigReal],
    ctx: &PrecisionContext,
) -> Result<Vec<BigReal>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if offdiag.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, found: offdiag.len() });
    }
    if let Some(index) = offdiag.iter().position(|e| !(*e > 0)) {
        return Err(Error::NonPositiveOffdiagonal { index });
    }
    let bits = ctx.bits();
    let diag: Vec<BigReal> = diag.iter().map(|d| ctx.round(d)).collect();
    let offdiag_sq: Vec<BigReal> = offdiag.iter().map(|e| Float::with_val(bits, e.square_ref())).collect();

    // Gershgorin enclosure.
    let mut lo = ctx.round(&diag[0]);
    let mut hi = ctx.round(&diag[0]);
    for i in 0..n {
        let mut radius = ctx.zero();
        if i > 0 {
            radius += &offdiag[i - 1];
        }
        if i + 1 < n {
            radius += &offdiag[i];
        }
        let l = Float::with_val(bits, &diag[i] - &radius);
        let h = Float::with_val(bits, &diag[i] + &radius);
        if l < lo {
            lo = l;
        }
        if h > hi {
            hi = h;
        }
    }

    let tol = ctx.resolution(10);
    // Replaces an exactly vanishing pivot.
    let scale = Float::with_val(bits, lo.as_abs().clone() + &*hi.as_abs()) + 1u32;
    let tiny = ctx.resolution(-(ctx.digits() as i32)) * scale;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // Smallest x with count_below(x) > k, bracketed in (a, b].
        let mut a = lo.clone();
        if let Some(prev) = out.last() {
            a = Float::with_val(bits, prev);
        }
        let mut b = hi.clone();
        while Float::with_val(bits, &b - &a) > tol {
            let mid = Float::with_val(bits, &a + &b) / 2u32;
            if count_below(&diag, &offdiag_sq, &mid, &tiny, bits) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(Float::with_val(bits, &a + &b) / 2u32);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    fn close(a: &BigReal, b: &BigReal, c: &PrecisionContext) -> bool {
        Float::with_val(c.bits(), a - b).abs() < c.resolution(11)
    }

    #[test]
    fn one_by_one() {
        let c = ctx();
        let half = c.one() / 2u32;
        let ev = tridiag_eigenvalues(std::slice::from_ref(&half), &[], &c).unwrap();
        assert_eq!(ev.len(), 1);
        assert!(close(&ev[0], &half, &c));
    }

    #[test]
    fn two_by_two_symmetric() {
        let c = ctx();
        let ev = tridiag_eigenvalues(&[c.zero(), c.zero()], &[c.one()], &c).unwrap();
        assert!(close(&ev[0], &c.from_i64(-1), &c));
        assert!(close(&ev[1], &c.one(), &c));
    }

    #[test]
    fn uniform_measure_degree_two() {
        // Shifted Legendre on [0,1]: b = 1/2, a_1^2 = 1/12.
        let c = ctx();
        let half = c.one() / 2u32;
        let a1 = (c.one() / 12u32).sqrt();
        let ev = tridiag_eigenvalues(&[half.clone(), half.clone()], &[a1], &c).unwrap();
        let delta = c.one() / (c.from_i64(3).sqrt() * 2u32);
        assert!(close(&ev[0], &Float::with_val(c.bits(), &half - &delta), &c));
        assert!(close(&ev[1], &Float::with_val(c.bits(), &half + &delta), &c));
    }

    #[test]
    fn rejects_bad_offdiagonal() {
        let c = ctx();
        assert!(matches!(
            tridiag_eigenvalues(&[c.zero(), c.zero()], &[c.zero()], &c),
            Err(Error::NonPositiveOffdiagonal { index: 0 })
        ));
        assert!(matches!(
            tridiag_eigenvalues(&[c.zero(), c.zero()], &[], &c),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn free_jacobi_matrix_cosines() {
        // diag 0, offdiag 1: eigenvalues 2 cos(k pi / (n + 1)).
        let c = ctx();
        let n = 7;
        let ev = tridiag_eigenvalues(&vec![c.zero(); n], &vec![c.one(); n - 1], &c).unwrap();
        let pi = Float::with_val(c.bits(), rug::float::Constant::Pi);
        for (i, v) in ev.iter().enumerate() {
            let k = (n - i) as u32;
            let expect = (Float::with_val(c.bits(), &pi * k) / (n as u32 + 1)).cos() * 2u32;
            assert!(close(v, &expect, &c), "{i}");
        }
        assert!(ev.windows(2).all(|w| w[0] < w[1]));
    }
}

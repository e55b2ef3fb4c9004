//! Dense Gaussian elimination and condition numbers in working precision.
//!
//! Elimination uses partial pivoting on the largest magnitude in the
//! column; ties go to the lowest row index so the factorization is a pure
//! function of its input.

use rug::Float;

use super::context::{BigReal, PrecisionContext};
use crate::error::{Error, Result};

/// Square matrix of working-precision reals, stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: Vec<Vec<BigReal>>,
}

impl DenseMatrix {
    pub fn from_rows(rows: Vec<Vec<BigReal>>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
        }
        Ok(Self { rows })
    }

    pub fn identity(n: usize, ctx: &PrecisionContext) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect())
            .collect();
        Self { rows }
    }

    /// Builds an `n x n` matrix from an entry function.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigReal) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigReal>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<BigReal>> {
        self.rows
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self, ctx: &PrecisionContext) -> BigReal {
        let mut best = ctx.zero();
        for row in &self.rows {
            let mut sum = ctx.zero();
            for v in row {
                sum += &*v.as_abs();
            }
            if sum > best {
                best = sum;
            }
        }
        best
    }

    fn column_max_abs(&self, j: usize, ctx: &PrecisionContext) -> BigReal {
        let mut best = ctx.zero();
        for v in self.rows.iter().map(|row| &row[j]) {
            if *v.as_abs() > best {
                best = ctx.round(&v.as_abs());
            }
        }
        best
    }

    pub fn mul_vec(&self, x: &[BigReal], ctx: &PrecisionContext) -> Result<Vec<BigReal>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                let mut acc = ctx.zero();
                for (a, b) in row.iter().zip(x) {
                    acc += a * b;
                }
                acc
            })
            .collect())
    }

    pub fn scaled(&self, c: &BigReal, ctx: &PrecisionContext) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|v| Float::with_val(ctx.bits(), v * c)).collect())
            .collect();
        Self { rows }
    }
}

/// `P A = L U` with unit-diagonal `L` stored below the diagonal of `lu`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: Vec<Vec<BigReal>>,
    /// Row `i` of the factored matrix is row `perm[i]` of the input.
    perm: Vec<usize>,
    ctx: PrecisionContext,
}

impl LuFactors {
    /// Factors `a`. A pivot smaller than `10^(5 - digits)` times the largest
    /// input entry of its column is treated as zero; the moment systems mix
    /// columns of very different magnitude.
    pub fn factor(a: &DenseMatrix, ctx: &PrecisionContext) -> Result<Self> {
        let n = a.dim();
        let mut lu: Vec<Vec<BigReal>> = a
            .rows
            .iter()
            .map(|row| row.iter().map(|v| ctx.round(v)).collect())
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let mut pivot_row = k;
            for i in (k + 1)..n {
                if lu[i][k].cmp_abs(&lu[pivot_row][k]) == Some(std::cmp::Ordering::Greater) {
                    pivot_row = i;
                }
            }
            let threshold = ctx.resolution(5) * a.column_max_abs(k, ctx);
            if *lu[pivot_row][k].as_abs() <= threshold {
                return Err(Error::SingularMatrix { column: k });
            }
            if pivot_row != k {
                lu.swap(pivot_row, k);
                perm.swap(pivot_row, k);
            }

            let (top, bottom) = lu.split_at_mut(k + 1);
            let pivot = &top[k];
            for row in bottom.iter_mut() {
                if row[k].is_zero() {
                    continue;
                }
                row[k] /= &pivot[k];
                let (head, tail) = row.split_at_mut(k + 1);
                let factor = &head[k];
                for (dst, src) in tail.iter_mut().zip(&pivot[k + 1..]) {
                    *dst -= factor * src;
                }
            }
        }

        Ok(Self { lu, perm, ctx: *ctx })
    }

    pub fn dim(&self) -> usize {
        self.lu.len()
    }

    pub fn solve(&self, rhs: &[BigReal]) -> Result<Vec<BigReal>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rhs.len() });
        }
        let y: Vec<BigReal> = self.perm.iter().map(|&p| self.ctx.round(&rhs[p])).collect();
        Ok(self.substitute(y, 0))
    }

    /// Forward then back substitution on an already permuted right-hand
    /// side whose entries before `first_nonzero` vanish.
    fn substitute(&self, mut y: Vec<BigReal>, first_nonzero: usize) -> Vec<BigReal> {
        let n = self.dim();
        for i in (first_nonzero + 1)..n {
            let (done, rest) = y.split_at_mut(i);
            let acc = &mut rest[0];
            for (l, v) in self.lu[i][first_nonzero..i].iter().zip(&done[first_nonzero..]) {
                *acc -= l * v;
            }
        }
        for i in (0..n).rev() {
            let (head, solved) = y.split_at_mut(i + 1);
            let acc = &mut head[i];
            for (u, v) in self.lu[i][i + 1..].iter().zip(solved.iter()) {
                *acc -= u * v;
            }
            *acc /= &self.lu[i][i];
        }
        y
    }

    /// Explicit inverse, one substitution per unit column.
    pub fn inverse(&self) -> DenseMatrix {
        let n = self.dim();
        let mut inv_rows = vec![Vec::with_capacity(n); n];
        let mut position = vec![0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            position[p] = i;
        }
        for col in 0..n {
            let start = position[col];
            let mut y = vec![self.ctx.zero(); n];
            y[start] = self.ctx.one();
            let x = self.substitute(y, start);
            for (row, v) in inv_rows.iter_mut().zip(x) {
                row.push(v);
            }
        }
        DenseMatrix { rows: inv_rows }
    }
}

/// Solves `a x = rhs` by Gaussian elimination with partial pivoting.
pub fn solve_dense(a: &DenseMatrix, rhs: &[BigReal], ctx: &PrecisionContext) -> Result<Vec<BigReal>> {
    if rhs.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: rhs.len() });
    }
    LuFactors::factor(a, ctx)?.solve(rhs)
}

/// `||A||_inf * ||A^-1||_inf` with the inverse formed explicitly.
pub fn cond_inf(a: &DenseMatrix, ctx: &PrecisionContext) -> Result<BigReal> {
    let inverse = LuFactors::factor(a, ctx)?.inverse();
    Ok(a.norm_inf(ctx) * inverse.norm_inf(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn mat(c: &PrecisionContext, rows: &[&[i64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| c.from_i64(v)).collect()).collect())
            .unwrap()
    }

    fn vec_of(c: &PrecisionContext, v: &[f64]) -> Vec<BigReal> {
        v.iter().map(|&x| Float::with_val(c.bits(), x)).collect()
    }

    #[test]
    fn identity_solve() {
        let c = ctx(30);
        let x = solve_dense(&DenseMatrix::identity(3, &c), &vec_of(&c, &[1.0, 2.0, 3.0]), &c).unwrap();
        assert_eq!(x, vec_of(&c, &[1.0, 2.0, 3.0]));
    }

    #[test]
    fn diagonal_solve() {
        let c = ctx(30);
        let a = mat(&c, &[&[2, 0], &[0, 4]]);
        let x = solve_dense(&a, &vec_of(&c, &[2.0, 2.0]), &c).unwrap();
        assert_eq!(x, vec_of(&c, &[1.0, 0.5]));
    }

    /// Exact rational Gauss-Jordan elimination; independent of the float path.
    fn rational_solve(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Vec<Rational> {
        let n = b.len();
        let mut m: Vec<Vec<Rational>> = a
            .into_iter()
            .zip(b)
            .map(|(mut row, r)| {
                row.push(r);
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&i| m[i][k] != 0).unwrap();
            m.swap(k, p);
            let piv = m[k][k].clone();
            for v in m[k].iter_mut() {
                *v /= &piv;
            }
            for i in 0..n {
                if i != k {
                    let f = m[i][k].clone();
                    for j in 0..=n {
                        let t = Rational::from(&f * &m[k][j]);
                        m[i][j] -= t;
                    }
                }
            }
        }
        m.into_iter().map(|row| row[n].clone()).collect()
    }

    #[test]
    fn hilbert_matches_exact_elimination() {
        let c = ctx(50);
        let n = 3;
        let h = |i: usize, j: usize| Rational::from((1, (i + j + 1) as u32));
        let exact_a: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| h(i, j)).collect()).collect();
        let exact_b: Vec<Rational> = exact_a.iter().map(|r| r.iter().sum()).collect();
        let expected = rational_solve(exact_a.clone(), exact_b.clone());
        assert!(expected.iter().all(|v| *v == 1));

        let a = DenseMatrix::from_fn(n, |i, j| c.from_rational(&h(i, j)));
        let b: Vec<BigReal> = exact_b.iter().map(|v| c.from_rational(v)).collect();
        let x = solve_dense(&a, &b, &c).unwrap();
        let tol = c.resolution(3);
        for (xi, ei) in x.iter().zip(&expected) {
            assert!(Float::with_val(c.bits(), xi - c.from_rational(ei)).abs() < tol);
        }
    }

    #[test]
    fn singular_and_mismatch() {
        let c = ctx(20);
        let a = mat(&c, &[&[1, 2], &[2, 4]]);
        assert!(matches!(
            solve_dense(&a, &vec_of(&c, &[1.0, 1.0]), &c),
            Err(Error::SingularMatrix { column: 1 })
        ));
        let zero = mat(&c, &[&[0, 0], &[0, 0]]);
        assert!(matches!(cond_inf(&zero, &c), Err(Error::SingularMatrix { .. })));
        let i2 = DenseMatrix::identity(2, &c);
        assert!(matches!(
            solve_dense(&i2, &vec_of(&c, &[1.0]), &c),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
        assert!(DenseMatrix::from_rows(vec![vec![c.one(), c.one()]]).is_err());
    }

    #[test]
    fn pivot_tie_breaks_to_lowest_row() {
        let c = ctx(20);
        // Column 0 has equal magnitudes in rows 1 and 2.
        let a = mat(&c, &[&[1, 1, 0], &[-3, 0, 1], &[3, 2, 2]]);
        let lu = LuFactors::factor(&a, &c).unwrap();
        assert_eq!(lu.perm[0], 1);
    }

    #[test]
    fn condition_numbers() {
        let c = ctx(30);
        assert_eq!(cond_inf(&DenseMatrix::identity(5, &c), &c).unwrap(), 1);
        let d = mat(&c, &[&[1, 0], &[0, 10]]);
        assert_eq!(cond_inf(&d, &c).unwrap(), 10);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let c = ctx(40);
        let a = mat(&c, &[&[4, -2, 1], &[3, 6, -4], &[2, 1, 8]]);
        let inv = LuFactors::factor(&a, &c).unwrap().inverse();
        let tol = c.resolution(3);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = c.zero();
                for k in 0..3 {
                    acc += inv.get(i, k) * a.get(k, j);
                }
                let target = if i == j { 1 } else { 0 };
                assert!(Float::with_val(c.bits(), acc - target).abs() < tol);
            }
        }
    }
}

//! Exact linear algebra: rational matrices with rref/kernel, fraction-free
//! (Bareiss) determinants of integer matrices, characteristic polynomials,
//! bounded integer root extraction, and an incremental integer row reducer
//! for rank and consistency of large 0/1 systems.
//!
//! No floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat_from_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Dense matrix over exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    a: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            a: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let a = (0..rows * cols)
            .map(|k| f(k / cols, k % cols))
            .collect();
        RatMat { rows, cols, a }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &RatMat) -> RatMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = RatMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = &self[(i, k)];
                if v.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = v * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() {
                        s += &self[(i, j)] * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Rat::is_zero)
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].recip();
            for j in col..self.cols {
                let v = &self[(row, j)] * &inv;
                self[(row, j)] = v;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..self.cols {
                        let v = &self[(r, j)] - &factor * &self[(row, j)];
                        self[(r, j)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space, one Vec per basis vector.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[(r, f)].clone();
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.a[i * self.cols + j]
    }
}

/// Dense matrix over arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    a: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            a: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        let a = (0..rows * cols)
            .map(|k| f(k / cols, k % cols))
            .collect();
        IntMat { rows, cols, a }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = &self[(i, k)];
                if v.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = v * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat::from_fn(self.rows, self.cols, |i, j| {
            Rat::from_integer(self[(i, j)].clone())
        })
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.a[i * self.cols + j]
    }
}

/// Determinant by fraction-free Bareiss elimination. Exact; every interior
/// division is known to leave no remainder.
pub fn bareiss_det(m: &IntMat) -> BigInt {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut w = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if w[(k, k)].is_zero() {
            match (k + 1..n).find(|&r| !w[(r, k)].is_zero()) {
                Some(r) => {
                    for c in 0..n {
                        let tmp = w[(k, c)].clone();
                        w[(k, c)] = w[(r, c)].clone();
                        w[(r, c)] = tmp;
                    }
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &w[(i, j)] * &w[(k, k)] - &w[(i, k)] * &w[(k, j)];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division not exact");
                w[(i, j)] = q;
            }
            w[(i, k)] = BigInt::zero();
        }
        prev = w[(k, k)].clone();
    }
    sign * w[(n - 1, n - 1)].clone()
}

/// Characteristic polynomial det(xI − B) of a square integer matrix,
/// coefficients low → high, monic. Evaluates the determinant fraction-free
/// at deg+1 integer points and interpolates exactly.
pub fn char_poly(m: &IntMat) -> Vec<BigInt> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let points: Vec<BigInt> = (0..=n as i64).map(BigInt::from).collect();
    let values: Vec<BigInt> = points
        .iter()
        .map(|x| {
            let shifted = IntMat::from_fn(n, n, |i, j| {
                if i == j {
                    x - &m[(i, j)]
                } else {
                    -&m[(i, j)]
                }
            });
            bareiss_det(&shifted)
        })
        .collect();
    // Newton divided differences over Q, then expansion to coefficients.
    let mut dd: Vec<Rat> = values
        .iter()
        .map(|v| Rat::from_integer(v.clone()))
        .collect();
    for level in 1..dd.len() {
        for i in (level..dd.len()).rev() {
            let denom = Rat::from_integer(&points[i] - &points[i - level]);
            dd[i] = (&dd[i] - &dd[i - 1]) / denom;
        }
    }
    let mut coeffs = vec![Rat::zero(); n + 1];
    // newton form: Σ dd[k] ∏_{t<k} (x − points[t])
    let mut basis = vec![Rat::zero(); n + 1];
    basis[0] = Rat::one();
    let mut deg = 0usize;
    for (k, d) in dd.iter().enumerate() {
        for (c, b) in coeffs.iter_mut().zip(basis.iter()) {
            *c += d * b;
        }
        if k < n {
            // basis *= (x − points[k])
            let p = Rat::from_integer(points[k].clone());
            for t in (1..=deg + 1).rev() {
                let lower = basis[t - 1].clone();
                basis[t] = &basis[t] * (-&p) + lower;
            }
            basis[0] = &basis[0] * (-&p);
            deg += 1;
        }
    }
    let out: Vec<BigInt> = coeffs
        .iter()
        .map(|c| {
            assert!(c.is_integer(), "characteristic polynomial not integral");
            c.to_integer()
        })
        .collect();
    assert!(out[n].is_one(), "characteristic polynomial not monic");
    out
}

pub fn eval_poly(poly: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_poly_wrapping(poly_mod: &[u64], x: u64) -> u64 {
    let mut acc = 0u64;
    for c in poly_mod.iter().rev() {
        acc = acc.wrapping_mul(x).wrapping_add(*c);
    }
    acc
}

/// All integer roots of a monic integer polynomial lying in [−bound, bound],
/// with multiplicities. Returns an error if the polynomial does not factor
/// completely over ℤ within the bound.
pub fn integer_roots_within(poly: &[BigInt], bound: u64) -> Result<Vec<(BigInt, usize)>> {
    let mut p: Vec<BigInt> = poly.to_vec();
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    // Candidates are screened by a wrapping (mod 2^64) Horner pass first;
    // only survivors get the exact BigInt evaluation.
    let wrap = |v: &BigInt| -> u64 {
        let m = v.mod_floor(&(BigInt::one() << 64u32));
        m.to_u64_digits().1.first().copied().unwrap_or(0)
    };
    let mut pm: Vec<u64> = p.iter().map(wrap).collect();
    let mut roots: Vec<(BigInt, usize)> = Vec::new();
    let lo = -(bound as i64);
    let hi = bound as i64;
    let mut candidate = lo;
    while candidate <= hi && p.len() > 1 {
        if eval_poly_wrapping(&pm, candidate as u64) == 0 {
            let big = BigInt::from(candidate);
            if eval_poly(&p, &big).is_zero() {
                let mut mult = 0usize;
                while p.len() > 1 && eval_poly(&p, &big).is_zero() {
                    p = synthetic_divide(&p, &big);
                    mult += 1;
                }
                pm = p.iter().map(wrap).collect();
                roots.push((big, mult));
            }
        }
        candidate += 1;
    }
    if p.len() > 1 {
        return Err(Error::NonIntegerEigenvalue(format!(
            "residual factor of degree {} after removing integer roots in [-{bound}, {bound}]",
            p.len() - 1
        )));
    }
    Ok(roots)
}

/// Exact division of a polynomial by (x − root); the remainder must vanish.
fn synthetic_divide(poly: &[BigInt], root: &BigInt) -> Vec<BigInt> {
    let n = poly.len() - 1;
    let mut out = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for k in (0..n).rev() {
        carry = &poly[k + 1] + root * &carry;
        out[k] = carry.clone();
    }
    debug_assert!((&poly[0] + root * &out[0]).is_zero(), "nonzero remainder");
    out
}

/// Incremental exact row reduction of an integer system, used for ranks of
/// large 0/1 matrices and for consistency of M·h = z. Rows are kept as
/// gcd-normalized integer vectors; an optional augmented column rides along.
pub struct IntRowReducer {
    cols: usize,
    augmented: bool,
    /// (pivot column, reduced row incl. augmented entry when present)
    pivots: Vec<(usize, Vec<BigInt>)>,
    inconsistent: bool,
}

impl IntRowReducer {
    pub fn new(cols: usize, augmented: bool) -> Self {
        IntRowReducer {
            cols,
            augmented,
            pivots: Vec::new(),
            inconsistent: false,
        }
    }

    /// Width of stored rows (cols + 1 when augmented).
    fn width(&self) -> usize {
        self.cols + usize::from(self.augmented)
    }

    /// Reduces and inserts a row. Returns true if the row rank grew.
    pub fn insert(&mut self, mut row: Vec<BigInt>) -> bool {
        assert_eq!(row.len(), self.width());
        for (pcol, prow) in &self.pivots {
            if row[*pcol].is_zero() {
                continue;
            }
            let a = prow[*pcol].clone();
            let b = row[*pcol].clone();
            for j in 0..self.width() {
                row[j] = &row[j] * &a - &prow[j] * &b;
            }
            normalize_row(&mut row);
        }
        match row[..self.cols].iter().position(|v| !v.is_zero()) {
            Some(col) => {
                normalize_row(&mut row);
                self.pivots.push((col, row));
                self.pivots.sort_by_key(|(c, _)| *c);
                true
            }
            None => {
                if self.augmented && !row[self.cols].is_zero() {
                    self.inconsistent = true;
                }
                false
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// One exact solution of the reduced system with free variables at 0.
    /// Only meaningful for augmented reducers on consistent systems.
    pub fn particular_solution(&self) -> Option<Vec<Rat>> {
        if !self.augmented || self.inconsistent {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (pcol, row) in self.pivots.iter().rev() {
            let mut rhs = Rat::from_integer(row[self.cols].clone());
            for j in pcol + 1..self.cols {
                if !row[j].is_zero() {
                    rhs -= Rat::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[*pcol] = rhs / Rat::from_integer(row[*pcol].clone());
        }
        Some(x)
    }
}

fn normalize_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        *v = &*v / &g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_mat(rows: &[&[i64]]) -> IntMat {
        IntMat::from_fn(rows.len(), rows[0].len(), |i, j| BigInt::from(rows[i][j]))
    }

    #[test]
    fn bareiss_det_small() {
        assert_eq!(bareiss_det(&int_mat(&[&[2]])), BigInt::from(2));
        assert_eq!(
            bareiss_det(&int_mat(&[&[1, 2], &[3, 4]])),
            BigInt::from(-2)
        );
        // Needs a row swap.
        assert_eq!(
            bareiss_det(&int_mat(&[&[0, 1], &[1, 0]])),
            BigInt::from(-1)
        );
        assert_eq!(
            bareiss_det(&int_mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])),
            BigInt::zero()
        );
        assert_eq!(
            bareiss_det(&int_mat(&[&[2, 0, 1], &[1, 3, 2], &[0, 1, 4]])),
            BigInt::from(21)
        );
    }

    #[test]
    fn char_poly_known() {
        // [[2,1],[1,2]]: (x−1)(x−3) = x² − 4x + 3.
        let p = char_poly(&int_mat(&[&[2, 1], &[1, 2]]));
        assert_eq!(p, vec![BigInt::from(3), BigInt::from(-4), BigInt::from(1)]);
        // companion of x^3 - 2x - 5
        let c = int_mat(&[&[0, 0, 5], &[1, 0, 2], &[0, 1, 0]]);
        let p = char_poly(&c);
        assert_eq!(
            p,
            vec![
                BigInt::from(-5),
                BigInt::from(-2),
                BigInt::from(0),
                BigInt::from(1)
            ]
        );
    }

    #[test]
    fn integer_roots_with_multiplicity() {
        // (x−1)²(x+3) = x³ + x² − 5x + 3
        let poly = vec![
            BigInt::from(3),
            BigInt::from(-5),
            BigInt::from(1),
            BigInt::from(1),
        ];
        let roots = integer_roots_within(&poly, 10).unwrap();
        assert_eq!(
            roots,
            vec![(BigInt::from(-3), 1), (BigInt::from(1), 2)]
        );
        // x² + 1 has no integer roots.
        let poly = vec![BigInt::one(), BigInt::zero(), BigInt::one()];
        assert!(integer_roots_within(&poly, 10).is_err());
    }

    #[test]
    fn rref_kernel_solve() {
        let m = RatMat::from_fn(2, 3, |i, j| rat_from_int([[1, 2, 3], [2, 4, 6]][i][j]));
        assert_eq!(m.rank(), 1);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let img = m.mul_vec(v);
            assert!(img.iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn row_reducer_rank_and_solution() {
        let mut red = IntRowReducer::new(2, true);
        // x + y = 3; 2x + 2y = 6 (dependent); x − y = 1.
        red.insert(vec![BigInt::from(1), BigInt::from(1), BigInt::from(3)]);
        red.insert(vec![BigInt::from(2), BigInt::from(2), BigInt::from(6)]);
        red.insert(vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(red.rank(), 2);
        assert!(!red.inconsistent());
        let x = red.particular_solution().unwrap();
        assert_eq!(x[0], rat_from_int(2));
        assert_eq!(x[1], rat_from_int(1));

        let mut bad = IntRowReducer::new(2, true);
        bad.insert(vec![BigInt::from(1), BigInt::from(1), BigInt::from(3)]);
        bad.insert(vec![BigInt::from(1), BigInt::from(1), BigInt::from(4)]);
        assert!(bad.inconsistent());
    }
}

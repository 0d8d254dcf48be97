//! Dense matrices over arbitrary-precision integers: Smith normal form with
//! transforms, Hermite form, kernels, determinants, and row-lattice
//! arithmetic (saturation, intersection, index, membership).
//!
//! Conventions: vectors are rows, sublattices are row spans, and linear maps
//! act on the right (`y = x * m`).

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn bi(v: i64) -> BigInt {
    BigInt::from(v)
}

#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = IMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        IMat::from_fn(r, c, |i, j| bi(rows[i][j]))
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = IMat::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> IMat {
        IMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] += t;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, c: &BigInt) -> IMat {
        IMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn neg(&self) -> IMat {
        IMat::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn vstack(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.cols);
        let mut m = IMat::zeros(self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                m[(self.rows + i, j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn submatrix_rows(&self, from: usize, to: usize) -> IMat {
        IMat::from_fn(to - from, self.cols, |i, j| self[(from + i, j)].clone())
    }

    pub fn submatrix_cols(&self, from: usize, to: usize) -> IMat {
        IMat::from_fn(self.rows, to - from, |i, j| self[(i, from + j)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn row_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self[(src, j)] * c;
            self[(dst, j)] += t;
        }
    }

    /// col[dst] += c * col[src]
    fn col_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self[(i, src)] * c;
            self[(i, dst)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `s = u * a * v` with unimodular `u`, `v`; `vinv` is the
/// inverse of `v`. Diagonal entries are nonnegative with `s[i] | s[i+1]`.
pub struct Snf {
    pub s: IMat,
    pub u: IMat,
    pub v: IMat,
    pub vinv: IMat,
    pub rank: usize,
    pub divisors: Vec<BigInt>,
}

pub fn snf(a: &IMat) -> Snf {
    let m = a.rows();
    let n = a.cols();
    let mut s = a.clone();
    let mut u = IMat::identity(m);
    let mut v = IMat::identity(n);
    let mut vinv = IMat::identity(n);

    // col[dst] += c * col[src] on s and v; inverse op on vinv rows.
    macro_rules! colop {
        ($dst:expr, $src:expr, $c:expr) => {{
            let c: BigInt = $c;
            s.col_add($dst, $src, &c);
            v.col_add($dst, $src, &c);
            vinv.row_add($src, $dst, &(-&c));
        }};
    }
    macro_rules! rowop {
        ($dst:expr, $src:expr, $c:expr) => {{
            let c: BigInt = $c;
            s.row_add($dst, $src, &c);
            u.row_add($dst, $src, &c);
        }};
    }

    let mut t = 0;
    'outer: while t < m.min(n) {
        loop {
            // minimal nonzero entry in s[t.., t..]
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !s[(i, j)].is_zero()
                        && pivot
                            .map(|(pi, pj)| s[(i, j)].abs() < s[(pi, pj)].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break 'outer };
            if pi != t {
                s.swap_rows(pi, t);
                u.swap_rows(pi, t);
            }
            if pj != t {
                s.swap_cols(pj, t);
                v.swap_cols(pj, t);
                vinv.swap_rows(pj, t);
            }

            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = &s[(i, t)] / &s[(t, t)];
                rowop!(i, t, -q);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = &s[(t, j)] / &s[(t, t)];
                colop!(j, t, -q);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let mut fixed = true;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&s[(i, j)] % &s[(t, t)]).is_zero() {
                        rowop!(t, i, BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let rank = (0..m.min(n)).take_while(|&i| !s[(i, i)].is_zero()).count();
    let divisors = (0..rank).map(|i| s[(i, i)].clone()).collect();
    Snf {
        s,
        u,
        v,
        vinv,
        rank,
        divisors,
    }
}

/// Basis of `{ x : x * a = 0 }` as rows; saturated by construction.
pub fn row_kernel(a: &IMat) -> IMat {
    let f = snf(a);
    f.u.submatrix_rows(f.rank, a.rows())
}

pub fn rank(a: &IMat) -> usize {
    snf(a).rank
}

/// Solves `x * a = b` row-wise over the integers, if possible.
pub fn solve_left(a: &IMat, b: &IMat) -> Option<IMat> {
    assert_eq!(a.cols(), b.cols());
    let f = snf(a);
    let w = b.mul(&f.v);
    let mut z = IMat::zeros(b.rows(), a.rows());
    for r in 0..b.rows() {
        for j in 0..a.cols() {
            if j < f.rank {
                let (q, rem) = num_integer::Integer::div_rem(&w[(r, j)], &f.s[(j, j)]);
                if !rem.is_zero() {
                    return None;
                }
                z[(r, j)] = q;
            } else if !w[(r, j)].is_zero() {
                return None;
            }
        }
    }
    Some(z.submatrix_cols(0, a.rows()).mul(&f.u))
}

/// Smallest saturated sublattice containing the row span of `a`.
pub fn saturation(a: &IMat) -> IMat {
    let f = snf(a);
    f.vinv.submatrix_rows(0, f.rank)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &IMat) -> BigInt {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(i, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                m[(i, j)] = &t / &prev;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * m[(n - 1, n - 1)].clone()
}

/// Canonical row Hermite normal form: pivots positive, entries above a pivot
/// reduced into `[0, pivot)`, zero rows dropped. Two row lattices are equal
/// iff their Hermite forms are equal.
pub fn row_hnf(a: &IMat) -> IMat {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let mut piv: Option<usize> = None;
            for i in r..m {
                if !h[(i, c)].is_zero()
                    && piv
                        .map(|p| h[(i, c)].abs() < h[(p, c)].abs())
                        .unwrap_or(true)
                {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            h.swap_rows(p, r);
            let mut clean = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = &h[(i, c)] / &h[(r, c)];
                h.row_add(i, r, &(-q));
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
        }
        for i in 0..r {
            let q = num_integer::Integer::div_floor(&h[(i, c)], &h[(r, c)]);
            h.row_add(i, r, &(-q));
        }
        r += 1;
    }
    h.submatrix_rows(0, r)
}

pub fn lattice_eq(a: &IMat, b: &IMat) -> bool {
    assert_eq!(a.cols(), b.cols());
    row_hnf(a) == row_hnf(b)
}

/// Whether every row of `sub` lies in the row lattice of `sup`.
pub fn lattice_contains(sup: &IMat, sub: &IMat) -> bool {
    solve_left(sup, sub).is_some()
}

/// Basis of the intersection of two row lattices given by generating sets.
pub fn lattice_intersection(a: &IMat, b: &IMat) -> IMat {
    assert_eq!(a.cols(), b.cols());
    let stacked = a.vstack(b);
    let k = row_kernel(&stacked);
    // rows (x | y) with x*a + y*b = 0; the intersection is generated by x*a
    let x = k.submatrix_cols(0, a.rows());
    row_hnf(&x.mul(a))
}

/// Index `[sup : sub]` of lattices of equal rank, `sub` expressed in the
/// ambient coordinates; requires `sub ⊆ sup`.
pub fn lattice_index(sup: &IMat, sub: &IMat) -> Result<BigInt> {
    let c = solve_left(sup, sub)
        .ok_or_else(|| Error::Internal("lattice_index: not a sublattice".into()))?;
    if c.rows() != c.cols() {
        return Err(Error::Internal("lattice_index: rank mismatch".into()));
    }
    let d = det(&c);
    if d.is_zero() {
        return Err(Error::Internal(
            "lattice_index: sublattice has smaller rank".into(),
        ));
    }
    Ok(d.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unimodular(m: &IMat) -> bool {
        det(m).abs() == BigInt::one()
    }

    #[test]
    fn snf_reconstructs() {
        let a = IMat::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let f = snf(&a);
        assert_eq!(f.u.mul(&a).mul(&f.v), f.s);
        assert!(unimodular(&f.u));
        assert!(unimodular(&f.v));
        assert_eq!(f.v.mul(&f.vinv), IMat::identity(3));
        for w in f.divisors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        // |det| = 624, entry gcd 2, minor gcd 4
        assert_eq!(f.divisors, vec![bi(2), bi(2), bi(156)]);
    }

    #[test]
    fn kernel_and_solve() {
        let a = IMat::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = row_kernel(&a);
        assert_eq!(k.rows(), 1);
        assert!(k.mul(&a).is_zero());

        let b = IMat::from_i64(&[&[3, 6, 9]]);
        let x = solve_left(&a, &b).unwrap();
        assert_eq!(x.mul(&a), b);
        let c = IMat::from_i64(&[&[1, 0, 0]]);
        assert!(solve_left(&a, &c).is_none());
    }

    #[test]
    fn saturation_examples() {
        // span{2 e1} in Z^2 saturates to span{e1}
        let a = IMat::from_i64(&[&[2, 0]]);
        let s = saturation(&a);
        assert!(lattice_eq(&s, &IMat::from_i64(&[&[1, 0]])));
        // already saturated input is unchanged as a lattice
        let b = IMat::from_i64(&[&[1, 2], &[0, 1]]);
        assert!(lattice_eq(&saturation(&b), &b));
    }

    #[test]
    fn dets() {
        assert_eq!(det(&IMat::identity(4)), BigInt::one());
        let a = IMat::from_i64(&[&[0, 1], &[-1, 0]]);
        assert_eq!(det(&a), bi(1));
        let b = IMat::from_i64(&[&[2, 3], &[4, 5]]);
        assert_eq!(det(&b), bi(-2));
        assert_eq!(det(&IMat::zeros(0, 0)), BigInt::one());
    }

    #[test]
    fn hnf_canonical() {
        let a = IMat::from_i64(&[&[2, 1], &[1, 2]]);
        let b = IMat::from_i64(&[&[3, 3], &[1, 2]]);
        assert!(lattice_eq(&a, &b));
        let c = IMat::from_i64(&[&[1, 0], &[0, 3]]);
        assert!(!lattice_eq(&a, &c));
    }

    #[test]
    fn intersection_and_index() {
        let a = IMat::from_i64(&[&[2, 0]]);
        let b = IMat::from_i64(&[&[3, 0]]);
        let i = lattice_intersection(&a, &b);
        assert!(lattice_eq(&i, &IMat::from_i64(&[&[6, 0]])));

        let sup = IMat::identity(2);
        let sub = IMat::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(lattice_index(&sup, &sub).unwrap(), bi(6));
        assert!(lattice_contains(&sup, &sub));
        assert!(!lattice_contains(&sub, &sup));
    }
}

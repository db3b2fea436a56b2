//! Dense arbitrary-precision integer matrices and their Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense integer matrix in row-major order. Entries are arbitrary
/// precision; there are no overflow semantics anywhere in the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += self.get(i, k) * other.get(k, j);
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
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

    /// row(dst) += q * row(src)
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col(dst) += q * col(src)
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + q * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Exact determinant of a square matrix (fraction-free Bareiss).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }
}

/// Result of a Smith normal form computation: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal, nonnegative, `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries, including trailing zeros up to `min(rows, cols)`.
    pub fn diag(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero invariant factors (the rank of the matrix).
    pub fn rank(&self) -> usize {
        self.diag().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form. Pivot selection is deterministic: smallest absolute
/// value among nonzero candidates, ties broken by lowest row index and then
/// lowest column index.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let steps = rows.min(cols);
    for t in 0..steps {
        'pivot: loop {
            // Deterministic pivot: (|value|, row, col) minimal over the block.
            let mut best: Option<(BigInt, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let val = d.get(i, j);
                    if val.is_zero() {
                        continue;
                    }
                    let a = val.abs();
                    let better = match &best {
                        None => true,
                        Some((ba, _, _)) => a < *ba,
                    };
                    if better {
                        best = Some((a, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                // Remaining block is zero; we are done entirely.
                return normalize_signs(Snf { u, d, v });
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if !d.get(i, t).is_zero() {
                    let q = -d.get(i, t).div_floor(d.get(t, t));
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !d.get(t, j).is_zero() {
                    let q = -d.get(t, j).div_floor(d.get(t, t));
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            // Divisibility: d[t][t] must divide the rest of the block.
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !d.get(i, j).mod_floor(d.get(t, t)).is_zero() {
                        let one = BigInt::one();
                        d.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                        continue 'pivot;
                    }
                }
            }
            break;
        }
    }
    normalize_signs(Snf { u, d, v })
}

fn normalize_signs(mut s: Snf) -> Snf {
    for t in 0..s.d.rows().min(s.d.cols()) {
        if s.d.get(t, t).is_negative() {
            s.d.negate_row(t);
            s.u.negate_row(t);
        }
    }
    s
}

/// Basis of the integer kernel of `m`, returned as matrix columns.
pub fn kernel_columns(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let n = m.cols();
    IntMatrix::from_fn(n, n - r, |i, j| snf.v.get(i, r + j).clone())
}

/// Solves `m * x = b` over the integers, if a solution exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), b.len());
    let snf = smith_normal_form(m);
    let c = snf.u.mul_vec(b);
    let diag = snf.diag();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        match diag.get(i) {
            Some(di) if !di.is_zero() => {
                let (q, r) = ci.div_rem(di);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            _ => {
                if !ci.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Does the integer column span of `a` contain every column of `b`?
pub fn span_contains(a: &IntMatrix, b: &IntMatrix) -> bool {
    assert_eq!(a.rows(), b.rows());
    (0..b.cols()).all(|j| solve_integer(a, &b.col(j)).is_some())
}

/// Equality of integer column spans, via mutual inclusion.
pub fn same_span(a: &IntMatrix, b: &IntMatrix) -> bool {
    span_contains(a, b) && span_contains(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    fn check_snf(mat: &IntMatrix) -> Snf {
        let s = smith_normal_form(mat);
        assert_eq!(s.u.mul(mat).mul(&s.v), s.d, "u*m*v != d");
        assert_eq!(s.u.determinant().abs().to_i64(), Some(1));
        assert_eq!(s.v.determinant().abs().to_i64(), Some(1));
        let diag = s.diag();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].mod_floor(&w[0]).is_zero(), "divisibility chain");
            } else {
                assert!(w[1].is_zero(), "zero before nonzero on the diagonal");
            }
        }
        for (i, x) in diag.iter().enumerate() {
            assert!(!x.is_negative(), "negative diagonal at {i}");
        }
        // Off-diagonal zero.
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn snf_identity() {
        let s = check_snf(&IntMatrix::identity(2));
        assert!(s.u.is_identity());
        assert!(s.d.is_identity());
        assert!(s.v.is_identity());
    }

    #[test]
    fn snf_diag_2_3() {
        let s = check_snf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diag(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_row_minus2_3() {
        let s = check_snf(&m(&[&[-2, 3]]));
        assert_eq!(s.diag(), vec![BigInt::from(1)]);
        assert_eq!(s.d.get(0, 1), &BigInt::zero());
    }

    #[test]
    fn kernel_of_row() {
        let k = kernel_columns(&m(&[&[1, -2]]));
        assert_eq!(k.cols(), 1);
        let v = k.col(0);
        // (2, 1) up to sign
        let s = if v[0].is_negative() { -1 } else { 1 };
        assert_eq!(v[0].to_i64(), Some(2 * s));
        assert_eq!(v[1].to_i64(), Some(s));
    }

    #[test]
    fn solve_and_span() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert!(solve_integer(&a, &[BigInt::from(4), BigInt::from(9)]).is_some());
        assert!(solve_integer(&a, &[BigInt::from(1), BigInt::from(0)]).is_none());
        let b = m(&[&[2, 0], &[0, 6]]);
        assert!(span_contains(&a, &b));
        assert!(!span_contains(&b, &a));
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[1, 2], &[3, 4]]).determinant().to_i64(), Some(-2));
        assert_eq!(
            m(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]])
                .determinant()
                .to_i64(),
            Some(5)
        );
    }
}

//! Exact rational vectors, linear solves, and dual bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ExactlinError;

/// An arbitrary-precision rational. `num_rational` keeps values in lowest
/// terms automatically, which is the invariant every module relies on.
pub type Rat = num_rational::BigRational;

pub type RatVector = Vec<Rat>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fractional part in `[0, 1)`: `x - floor(x)`.
pub fn frac_part(x: &Rat) -> Rat {
    x - x.floor()
}

pub fn is_integer(x: &Rat) -> bool {
    x.is_integer()
}

pub fn to_rat_vec(v: &[BigInt]) -> RatVector {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn scale(v: &[Rat], c: &Rat) -> RatVector {
    v.iter().map(|x| x * c).collect()
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> RatVector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> RatVector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn zero_vec(n: usize) -> RatVector {
    vec![Rat::zero(); n]
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Scales a nonzero rational vector to a primitive integer vector (content 1)
/// pointing in the same direction.
pub fn primitive_direction(v: &[Rat]) -> Vec<BigInt> {
    assert!(!is_zero_vec(v), "primitive direction of zero");
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let gcd = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter().map(|x| x / &gcd).collect()
}

/// Rank of a list of rational row vectors.
pub fn rank(rows: &[RatVector]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].len();
    let mut work: Vec<RatVector> = rows.to_vec();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..work.len()).find(|&i| !work[i][col].is_zero()) else {
            continue;
        };
        work.swap(r, p);
        let pivot = work[r][col].clone();
        for i in 0..work.len() {
            if i != r && !work[i][col].is_zero() {
                let f = &work[i][col] / &pivot;
                for j in col..n {
                    work[i][j] = &work[i][j] - &f * &work[r][j];
                }
            }
        }
        r += 1;
        if r == work.len() {
            break;
        }
    }
    r
}

/// Solves `A x = b` where the columns of `A` are given as vectors. Returns
/// `None` when the system is inconsistent. Panics if the solution is not
/// unique (the callers always pass linearly independent columns).
pub fn solve_in_columns(columns: &[RatVector], b: &[Rat]) -> Option<RatVector> {
    let ncols = columns.len();
    if ncols == 0 {
        return if is_zero_vec(b) { Some(vec![]) } else { None };
    }
    let nrows = columns[0].len();
    assert!(columns.iter().all(|c| c.len() == nrows));
    assert_eq!(b.len(), nrows);
    // Augmented matrix [A | b], Gauss-Jordan.
    let mut aug: Vec<RatVector> = (0..nrows)
        .map(|i| {
            let mut row: RatVector = columns.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let pv = aug[r][col].clone();
        for j in col..=ncols {
            aug[r][j] = &aug[r][j] / &pv;
        }
        for i in 0..nrows {
            if i != r && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in col..=ncols {
                    aug[i][j] = &aug[i][j] - &f * &aug[r][j];
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == nrows {
            break;
        }
    }
    // Consistency: no row of the form (0 ... 0 | nonzero).
    for row in aug.iter().skip(r) {
        if row[..ncols].iter().all(Zero::is_zero) && !row[ncols].is_zero() {
            return None;
        }
    }
    assert_eq!(pivots.len(), ncols, "solve_in_columns: dependent columns");
    let mut x = zero_vec(ncols);
    for (ri, &col) in pivots.iter().enumerate() {
        x[col] = aug[ri][ncols].clone();
    }
    Some(x)
}

/// Inverse of a square rational matrix given by rows.
pub fn invert(rows: &[RatVector]) -> Option<Vec<RatVector>> {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "not square");
    let mut aug: Vec<RatVector> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(col, p);
        let pv = aug[col][col].clone();
        for j in 0..2 * n {
            aug[col][j] = &aug[col][j] / &pv;
        }
        for i in 0..n {
            if i != col && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..2 * n {
                    aug[i][j] = &aug[i][j] - &f * &aug[col][j];
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Dual basis of a Q-basis: returns `u_i` with `u_i . v_k = delta_ik`.
pub fn dual_basis_solve(vectors: &[RatVector]) -> Result<Vec<RatVector>, ExactlinError> {
    let n = vectors.len();
    if n == 0 {
        return Ok(vec![]);
    }
    if vectors.iter().any(|v| v.len() != n) {
        return Err(ExactlinError::SingularInput);
    }
    // u_i is row i of the inverse of the matrix whose columns are v_k.
    let rows: Vec<RatVector> = (0..n)
        .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
        .collect();
    invert(&rows).ok_or(ExactlinError::SingularInput)
}

/// Renders a rational as `p` or `p/q` with `q > 0`.
pub fn render_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn render_rat_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(render_rat).collect();
    format!("({})", parts.join(","))
}

/// Parses `p` or `p/q` (q > 0 after normalization; `q = 0` is rejected).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().ok()?;
        let den: BigInt = q.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Rat::new(num, den))
    } else {
        let num: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(num))
    }
}

/// Ceiling of a rational as a BigInt.
pub fn ceil_int(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

pub fn floor_int(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

pub fn sign(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

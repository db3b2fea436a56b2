//! Bounded lattice-point enumeration and extreme rays of pointed cones,
//! all in exact rational arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ratmat::{
    ceil_int, dot, floor_int, is_zero_vec, primitive_direction, rank, zero_vec, Rat, RatVector,
};
use super::ExactlinError;

/// A rational affine inequality `coeffs . x <= bound`.
#[derive(Clone, Debug)]
pub struct AffineIneq {
    pub coeffs: RatVector,
    pub bound: Rat,
}

impl AffineIneq {
    pub fn le(coeffs: RatVector, bound: Rat) -> Self {
        AffineIneq { coeffs, bound }
    }

    /// `coeffs . x >= bound`, stored as `-coeffs . x <= -bound`.
    pub fn ge(coeffs: RatVector, bound: Rat) -> Self {
        AffineIneq {
            coeffs: coeffs.iter().map(|c| -c).collect(),
            bound: -bound,
        }
    }
}

/// Fourier-Motzkin elimination of the last variable of a system in `dim`
/// variables. Constant constraints (all coefficients zero) are kept.
fn eliminate_last(system: &[AffineIneq], dim: usize) -> Vec<AffineIneq> {
    let mut zero_rows = Vec::new();
    let mut pos = Vec::new(); // coefficient of x_dim-1 positive: upper bounds
    let mut neg = Vec::new();
    for c in system {
        let a = &c.coeffs[dim - 1];
        if a.is_zero() {
            zero_rows.push(AffineIneq {
                coeffs: c.coeffs[..dim - 1].to_vec(),
                bound: c.bound.clone(),
            });
        } else if a.is_positive() {
            pos.push(c);
        } else {
            neg.push(c);
        }
    }
    let mut out = zero_rows;
    for p in &pos {
        for n in &neg {
            // p: a x <= b (a > 0), n: a' x <= b' (a' < 0).
            // Combine to drop x: (b - rest_p)/a >= x >= (b' - rest_n)/a'.
            let ap = &p.coeffs[dim - 1];
            let an = &n.coeffs[dim - 1];
            let mut coeffs = Vec::with_capacity(dim - 1);
            for i in 0..dim - 1 {
                coeffs.push(&p.coeffs[i] / ap - &n.coeffs[i] / an);
            }
            let bound = &p.bound / ap - &n.bound / an;
            out.push(AffineIneq { coeffs, bound });
        }
    }
    out
}

/// Integer interval admitted by a one-variable slice of `system` at level
/// `k` (0-based), after fixing the prefix `x_0 .. x_(k-1)`.
/// Returns `None` when infeasible.
fn level_bounds(system: &[AffineIneq], prefix: &[Rat], k: usize) -> Option<(BigInt, BigInt)> {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for c in system {
        let a = &c.coeffs[k];
        let rest: Rat = (0..k).map(|i| &c.coeffs[i] * &prefix[i]).sum();
        if a.is_zero() {
            if rest > c.bound {
                return None;
            }
            continue;
        }
        let r = (&c.bound - rest) / a;
        if a.is_positive() {
            hi = Some(match hi {
                None => r,
                Some(h) => h.min(r),
            });
        } else {
            lo = Some(match lo {
                None => r,
                Some(l) => l.max(r),
            });
        }
    }
    // Boundedness was checked globally; a missing bound here can only occur
    // for infeasible prefixes of degenerate systems.
    let (lo, hi) = (lo?, hi?);
    let lo_i = ceil_int(&lo);
    let hi_i = floor_int(&hi);
    if lo_i > hi_i {
        None
    } else {
        Some((lo_i, hi_i))
    }
}

/// Enumerates every integer point of a bounded rational polyhedron, sorted
/// lexicographically with no duplicates.
pub fn enumerate_lattice_points(
    dim: usize,
    constraints: &[AffineIneq],
) -> Result<Vec<Vec<BigInt>>, ExactlinError> {
    for c in constraints {
        assert_eq!(c.coeffs.len(), dim, "constraint arity mismatch");
    }
    if dim == 0 {
        let feasible = constraints.iter().all(|c| !c.bound.is_negative());
        return Ok(if feasible { vec![vec![]] } else { vec![] });
    }
    // Boundedness: the recession cone {x : coeffs . x <= 0} must be trivial.
    let recession: Vec<RatVector> = constraints
        .iter()
        .map(|c| c.coeffs.iter().map(|a| -a).collect())
        .collect();
    let rays = extreme_rays(dim, &recession)?;
    if let Some(r) = rays.first() {
        let coord = r.iter().position(|x| !x.is_zero()).unwrap_or(0);
        return Err(ExactlinError::UnboundedRegion { coordinate: coord });
    }

    // Chain of Fourier-Motzkin projections: systems[k] constrains x_0..x_k.
    let mut systems: Vec<Vec<AffineIneq>> = vec![constraints.to_vec()];
    for k in (1..dim).rev() {
        let prev = systems.last().unwrap();
        systems.push(eliminate_last(prev, k + 1));
    }
    systems.reverse(); // systems[k] has k+1 variables

    let mut out = Vec::new();
    let mut prefix: Vec<Rat> = Vec::new();
    enumerate_rec(&systems, dim, &mut prefix, &mut out);
    Ok(out)
}

fn enumerate_rec(
    systems: &[Vec<AffineIneq>],
    dim: usize,
    prefix: &mut Vec<Rat>,
    out: &mut Vec<Vec<BigInt>>,
) {
    let k = prefix.len();
    let Some((lo, hi)) = level_bounds(&systems[k], prefix, k) else {
        return;
    };
    let mut x = lo;
    while x <= hi {
        prefix.push(Rat::from_integer(x.clone()));
        if k + 1 == dim {
            out.push(
                prefix
                    .iter()
                    .map(|r| r.to_integer())
                    .collect::<Vec<BigInt>>(),
            );
        } else {
            enumerate_rec(systems, dim, prefix, out);
        }
        prefix.pop();
        x += 1;
    }
}

/// Extreme rays of the pointed polyhedral cone `{x : row . x >= 0 for all
/// rows}` in `Q^dim`, as primitive integer directions sorted
/// lexicographically.
///
/// Every extreme ray of a pointed cone spans the nullspace of some
/// rank-(dim-1) subset of its constraints, so enumerating those subsets and
/// filtering by feasibility is exact at desk scale.
/// Returns `NotPointed` if a feasible line is detected.
pub fn extreme_rays(dim: usize, rows: &[RatVector]) -> Result<Vec<Vec<BigInt>>, ExactlinError> {
    if dim == 0 {
        return Ok(vec![]);
    }
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    let mut subset = Vec::new();
    let mut result = Ok(());
    enumerate_subsets(rows.len(), dim - 1, 0, &mut subset, &mut |idx| {
        let chosen: Vec<RatVector> = idx.iter().map(|&i| rows[i].clone()).collect();
        if rank(&chosen) != dim - 1 {
            return;
        }
        let Some(v) = nullspace_direction(dim, &chosen) else {
            return;
        };
        let forward = rows.iter().all(|r| !dot(r, &v).is_negative());
        let neg: RatVector = v.iter().map(|x| -x).collect();
        let backward = rows.iter().all(|r| !dot(r, &neg).is_negative());
        if forward && backward {
            result = Err(ExactlinError::NotPointed);
            return;
        }
        let dir = if forward {
            v
        } else if backward {
            neg
        } else {
            return;
        };
        let prim = primitive_direction(&dir);
        if !found.contains(&prim) {
            found.push(prim);
        }
    });
    result?;
    found.sort();
    Ok(found)
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    start: usize,
    cur: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..n {
        cur.push(i);
        enumerate_subsets(n, k, i + 1, cur, f);
        cur.pop();
    }
}

/// A nonzero solution of `rows . x = 0` when the nullspace is exactly one
/// dimensional; `None` otherwise.
fn nullspace_direction(dim: usize, rows: &[RatVector]) -> Option<RatVector> {
    let mut work: Vec<RatVector> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        let Some(p) = (r..work.len()).find(|&i| !work[i][col].is_zero()) else {
            continue;
        };
        work.swap(r, p);
        let pv = work[r][col].clone();
        for j in 0..dim {
            work[r][j] = &work[r][j] / &pv;
        }
        for i in 0..work.len() {
            if i != r && !work[i][col].is_zero() {
                let f = work[i][col].clone();
                for j in 0..dim {
                    work[i][j] = &work[i][j] - &f * &work[r][j];
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if r != dim - 1 {
        return None;
    }
    let free_col = (0..dim).find(|c| !pivots.contains(c))?;
    let mut v = zero_vec(dim);
    v[free_col] = Rat::one();
    for (ri, &pc) in pivots.iter().enumerate() {
        v[pc] = -work[ri][free_col].clone();
    }
    if is_zero_vec(&v) {
        None
    } else {
        Some(v)
    }
}

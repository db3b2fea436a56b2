//! Extreme rays of the Mori cone `NE = sum_sigma C_sigma_dual`, where
//! `C_sigma_dual = { d in L tensor R : d_i >= 0 for i not in sigma }`.
//!
//! Each per-cone dual cone is enumerated in kernel coordinates; the union
//! of rays is then reduced to the extreme rays of the sum by a round trip
//! through the facet description.

use num_bigint::BigInt;

use crate::exactlin::{extreme_rays, primitive_direction, to_rat_vec, Rat, RatVector};

use super::{FanError, StackyFan};

pub(super) fn mori_generators(fan: &StackyFan) -> Result<Vec<Vec<BigInt>>, FanError> {
    let l = fan.picard_rank();
    if l == 0 {
        return Ok(vec![]);
    }
    let k = fan.kernel_matrix();
    let n = fan.n_rays();
    // Row i of K as a rational covector on kernel coordinates: the pairing
    // D_i . d for d = K y is just coordinate i of K y.
    let coord_row = |i: usize| -> RatVector {
        (0..l)
            .map(|j| Rat::from_integer(k.get(i, j).clone()))
            .collect()
    };
    let mut union: Vec<Vec<BigInt>> = Vec::new();
    for cone in fan.max_cones() {
        let rows: Vec<RatVector> = (0..n)
            .filter(|i| !cone.contains(i))
            .map(coord_row)
            .collect();
        let rays = extreme_rays(l, &rows).map_err(|_| FanError::MoriNotPointed)?;
        for y in rays {
            if !union.contains(&y) {
                union.push(y);
            }
        }
    }
    if union.is_empty() {
        return Ok(vec![]);
    }
    // Reduce the union to extreme rays of its conic hull: facets first,
    // then rays of the facet system.
    let ray_rows: Vec<RatVector> = union.iter().map(|y| to_rat_vec(y)).collect();
    let reduced = if union.len() == 1 {
        union
    } else {
        let facets = extreme_rays(l, &ray_rows).map_err(|_| FanError::MoriNotPointed)?;
        let facet_rows: Vec<RatVector> = facets.iter().map(|f| to_rat_vec(f)).collect();
        extreme_rays(l, &facet_rows).map_err(|_| FanError::MoriNotPointed)?
    };
    // Map back to Q^n coordinates and normalize to primitive vectors.
    let mut out: Vec<Vec<BigInt>> = reduced
        .iter()
        .map(|y| {
            let d: Vec<BigInt> = (0..n)
                .map(|i| {
                    (0..l)
                        .map(|j| k.get(i, j) * &y[j])
                        .sum::<BigInt>()
                })
                .collect();
            primitive_direction(&to_rat_vec(&d))
        })
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::builders::{affine_quotient, football, product, weighted_projective};
    use crate::exactlin::{rat_int, to_rat_vec};
    use num_bigint::BigInt;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn p1_single_ray() {
        let fan = weighted_projective(&[1, 1]).unwrap();
        assert_eq!(fan.mori_generators().unwrap(), vec![vec![bi(1), bi(1)]]);
    }

    #[test]
    fn p12_single_ray() {
        let fan = weighted_projective(&[1, 2]).unwrap();
        assert_eq!(fan.mori_generators().unwrap(), vec![vec![bi(2), bi(1)]]);
    }

    #[test]
    fn football_ray_from_kernel() {
        let fan = football(2, 3).unwrap();
        assert_eq!(fan.mori_generators().unwrap(), vec![vec![bi(3), bi(2)]]);
    }

    #[test]
    fn p1xp1_two_rays() {
        let a = weighted_projective(&[1, 1]).unwrap();
        let b = weighted_projective(&[1, 1]).unwrap();
        let fan = product(&a, &b).unwrap();
        let gens = fan.mori_generators().unwrap();
        assert_eq!(
            gens,
            vec![
                vec![bi(0), bi(0), bi(1), bi(1)],
                vec![bi(1), bi(1), bi(0), bi(0)],
            ]
        );
    }

    #[test]
    fn affine_quotient_empty() {
        let fan = affine_quotient(vec![vec![bi(1), bi(0)], vec![bi(1), bi(3)]]).unwrap();
        assert!(fan.mori_generators().unwrap().is_empty());
        // Vacuously Kahler.
        assert!(fan.check_kahler(&[rat_int(0), rat_int(0)]));
    }

    #[test]
    fn kahler_checks() {
        let fan = weighted_projective(&[1, 1]).unwrap();
        assert!(fan.check_kahler(&[rat_int(1), rat_int(0)]));
        assert!(!fan.check_kahler(&[rat_int(1), rat_int(-1)]));
        let gens = fan.mori_generators().unwrap();
        assert_eq!(
            crate::exactlin::dot(&[rat_int(1), rat_int(0)], &to_rat_vec(&gens[0])),
            rat_int(1)
        );
    }
}

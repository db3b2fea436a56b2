//! Canonical example fans: weighted projective stacks, footballs, affine
//! quotients, and products.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exactlin::{
    cokernel_full, smith_normal_form, solve_in_columns, to_rat_vec, FgAbelianGroup, IntMatrix,
    LatticeMap, Rat, RatVector,
};

use super::{FanError, StackyFan};

/// The weighted projective stack `P(w_0, ..., w_n)` for coprime positive
/// weights, built on the lattice generated by the standard basis together
/// with `-(sum w_i e_i)/w_0`. Rays come out as `e_1, ..., e_n` and that last
/// vector when `w_0 = 1`; the fan sequence kernel is `Z (w_1,...,w_n,w_0)`.
pub fn weighted_projective(weights: &[i64]) -> Result<StackyFan, FanError> {
    if weights.len() < 2 {
        return Err(FanError::InvalidWeights(
            "need at least two weights".to_string(),
        ));
    }
    if weights.iter().any(|&w| w <= 0) {
        return Err(FanError::InvalidWeights(
            "weights must be positive".to_string(),
        ));
    }
    let gcd = weights
        .iter()
        .fold(BigInt::zero(), |acc, &w| acc.gcd(&BigInt::from(w)));
    if !gcd.is_one() {
        return Err(FanError::InvalidWeights(
            "weights must be coprime (gerbes are not supported)".to_string(),
        ));
    }
    let d = weights.len() - 1;
    let w0 = BigInt::from(weights[0]);
    // v = -(w_1 e_1 + ... + w_d e_d)/w_0 in Q^d.
    let v: RatVector = (1..=d)
        .map(|i| Rat::new(BigInt::from(-weights[i]), w0.clone()))
        .collect();
    let mut rays_q: Vec<RatVector> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect();
    rays_q.push(v);

    let rays: Vec<Vec<BigInt>> = if w0.is_one() {
        rays_q
            .iter()
            .map(|r| r.iter().map(|x| x.to_integer()).collect())
            .collect()
    } else {
        // Basis of the lattice Z^d + Z v: scale by w_0 and take the column
        // span's Smith basis, then re-express the rays.
        let gens = IntMatrix::from_fn(d, d + 1, |i, j| {
            (&rays_q[j][i] * Rat::from_integer(w0.clone())).to_integer()
        });
        let snf = smith_normal_form(&gens);
        assert_eq!(snf.rank(), d, "lattice generators span");
        let u_rows: Vec<RatVector> = (0..d).map(|i| to_rat_vec(&snf.u.row(i))).collect();
        let u_inv = crate::exactlin::invert(&u_rows).expect("unimodular");
        // Basis columns: U^-1 e_i * d_i / w_0.
        let basis: Vec<RatVector> = (0..d)
            .map(|i| {
                let di = Rat::from_integer(snf.d.get(i, i).clone());
                (0..d)
                    .map(|r| &u_inv[r][i] * &di / Rat::from_integer(w0.clone()))
                    .collect()
            })
            .collect();
        rays_q
            .iter()
            .map(|r| {
                let coords =
                    solve_in_columns(&basis, r).expect("ray lies in the lattice span");
                coords
                    .iter()
                    .map(|c| {
                        assert!(c.is_integer(), "ray not integral in lattice basis");
                        c.to_integer()
                    })
                    .collect()
            })
            .collect()
    };

    let cones: Vec<Vec<usize>> = (0..=d)
        .map(|skip| (0..=d).filter(|&i| i != skip).collect())
        .collect();
    StackyFan::new(FgAbelianGroup::free(d), rays, cones)
}

/// The football `P_(r1, r2)`: `N = Z`, rays `(-r1, r2)`.
pub fn football(r1: i64, r2: i64) -> Result<StackyFan, FanError> {
    if r1 <= 0 || r2 <= 0 {
        return Err(FanError::InvalidWeights(
            "football orders must be positive".to_string(),
        ));
    }
    StackyFan::new(
        FgAbelianGroup::free(1),
        vec![vec![BigInt::from(-r1)], vec![BigInt::from(r2)]],
        vec![vec![0], vec![1]],
    )
}

/// An affine quotient: a free lattice of rank equal to the ray length, with
/// a single top-dimensional cone spanned by the given rays.
pub fn affine_quotient(rays: Vec<Vec<BigInt>>) -> Result<StackyFan, FanError> {
    let d = rays.len();
    if d == 0 || rays.iter().any(|r| r.len() != d) {
        return Err(FanError::InvalidWeights(
            "affine quotient needs d rays of length d".to_string(),
        ));
    }
    let cone: Vec<usize> = (0..d).collect();
    StackyFan::new(FgAbelianGroup::free(d), rays, vec![cone])
}

/// Product fan: block-diagonal data on the direct sum of the groups.
pub fn product(a: &StackyFan, b: &StackyFan) -> Result<StackyFan, FanError> {
    let dim_a = a.group().dim();
    let dim_b = b.group().dim();
    // Present the direct sum and renormalize to canonical invariant factors.
    let ka = a.group().torsion().len();
    let kb = b.group().torsion().len();
    let pres = IntMatrix::from_fn(dim_a + dim_b, ka + kb, |i, j| {
        if j < ka {
            if i < dim_a {
                a.group().presentation().get(i, j).clone()
            } else {
                BigInt::zero()
            }
        } else if i >= dim_a {
            b.group().presentation().get(i - dim_a, j - ka).clone()
        } else {
            BigInt::zero()
        }
    });
    let pres_map = LatticeMap::from_free(
        FgAbelianGroup::free(dim_a + dim_b),
        (0..pres.cols()).map(|j| pres.col(j)).collect(),
    );
    let coker = cokernel_full(&pres_map);
    let embed = |elem: &[BigInt], from_a: bool| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); dim_a + dim_b];
        if from_a {
            v[..elem.len()].clone_from_slice(elem);
        } else {
            v[dim_a..dim_a + elem.len()].clone_from_slice(elem);
        }
        coker.proj.apply(&v)
    };
    let mut rays: Vec<Vec<BigInt>> = a.rays().iter().map(|r| embed(r, true)).collect();
    rays.extend(b.rays().iter().map(|r| embed(r, false)));
    let na = a.n_rays();
    let mut cones = Vec::new();
    for ca in a.max_cones() {
        for cb in b.max_cones() {
            let mut c = ca.clone();
            c.extend(cb.iter().map(|&i| i + na));
            cones.push(c);
        }
    }
    StackyFan::new(coker.group, rays, cones)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn wp_12() {
        let fan = weighted_projective(&[1, 2]).unwrap();
        assert_eq!(fan.rays(), &[vec![bi(1)], vec![bi(-2)]]);
        let k = fan.kernel_matrix();
        assert_eq!(k.cols(), 1);
        let mut v = k.col(0);
        if v[0] < bi(0) {
            v = v.iter().map(|x| -x).collect();
        }
        assert_eq!(v, vec![bi(2), bi(1)]);
    }

    #[test]
    fn wp_112_is_p112() {
        let fan = weighted_projective(&[1, 1, 2]).unwrap();
        assert_eq!(
            fan.rays(),
            &[
                vec![bi(1), bi(0)],
                vec![bi(0), bi(1)],
                vec![bi(-1), bi(-2)]
            ]
        );
        assert_eq!(fan.adjacent_pairs().len(), 6); // 3 unordered walls
    }

    #[test]
    fn wp_degenerate_rejected() {
        assert!(matches!(
            weighted_projective(&[1]),
            Err(FanError::InvalidWeights(_))
        ));
        assert!(matches!(
            weighted_projective(&[1, 0]),
            Err(FanError::InvalidWeights(_))
        ));
        assert!(matches!(
            weighted_projective(&[2, 2]),
            Err(FanError::InvalidWeights(_))
        ));
    }

    #[test]
    fn wp_w0_bigger() {
        // P(2,1): same stack as P(1,2) with roles of the points swapped.
        // The computed lattice basis of Z + Z(-1/2) is -1/2, so the rays
        // land on (-2, 1).
        let fan = weighted_projective(&[2, 1]).unwrap();
        assert_eq!(fan.rays(), &[vec![bi(-2)], vec![bi(1)]]);
        let b = fan.box_elements(&[0], false).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].fracs[0], rat(1, 2));
    }

    #[test]
    fn football_23() {
        let fan = football(2, 3).unwrap();
        assert_eq!(fan.rays(), &[vec![bi(-2)], vec![bi(3)]]);
        let mut v = fan.kernel_matrix().col(0);
        if v[0] < bi(0) {
            v = v.iter().map(|x| -x).collect();
        }
        assert_eq!(v, vec![bi(3), bi(2)]);
    }

    #[test]
    fn p1_walls() {
        let fan = weighted_projective(&[1, 1]).unwrap();
        let walls = fan.adjacent_pairs();
        assert_eq!(walls.len(), 2);
        assert_eq!(walls[0].sigma, 0);
        assert_eq!(walls[0].sigma_p, 1);
        // cones sorted: [0] and [1]; wall j = 0, j' = 1.
        assert_eq!(walls[0].j, 0);
        assert_eq!(walls[0].j_p, 1);
    }

    #[test]
    fn affine_no_walls() {
        let fan = affine_quotient(vec![vec![bi(1), bi(0)], vec![bi(1), bi(3)]]).unwrap();
        assert!(fan.adjacent_pairs().is_empty());
        assert_eq!(fan.box_all().len(), 3);
    }

    #[test]
    fn product_p1_p1() {
        let p1 = weighted_projective(&[1, 1]).unwrap();
        let fan = product(&p1, &p1).unwrap();
        assert_eq!(fan.n_rays(), 4);
        assert_eq!(fan.max_cones().len(), 4);
        assert_eq!(fan.dim(), 2);
        assert_eq!(
            fan.rays(),
            &[
                vec![bi(1), bi(0)],
                vec![bi(-1), bi(0)],
                vec![bi(0), bi(1)],
                vec![bi(0), bi(-1)],
            ]
        );
    }

    #[test]
    fn weights_examples() {
        let p1 = weighted_projective(&[1, 1]).unwrap();
        // sigma_1 = {0}: u_1 = x, u_2 = 0.
        let w = fan_weight(&p1, 0);
        assert_eq!(w.weight(0), &vec![rat(1, 1)]);
        assert_eq!(w.weight(1), &vec![rat(0, 1)]);

        let p12 = weighted_projective(&[1, 2]).unwrap();
        // sigma_2 = {1} (ray -2): u_2 = -x/2.
        let w2 = fan_weight(&p12, 1);
        assert_eq!(w2.weight(1), &vec![rat(-1, 2)]);
        assert_eq!(w2.weight(0), &vec![rat(0, 1)]);
    }

    fn fan_weight(fan: &StackyFan, idx: usize) -> &crate::fan::WeightSystem {
        fan.fixed_point_weights(idx)
    }

    #[test]
    fn fan_sequence_exactness() {
        // rho composed with the kernel inclusion vanishes, and
        // rank L = n - d, for every builder output.
        let p1 = weighted_projective(&[1, 1]).unwrap();
        let fans = [
            weighted_projective(&[1, 2]).unwrap(),
            weighted_projective(&[1, 1, 2]).unwrap(),
            football(2, 3).unwrap(),
            football(1, 1).unwrap(),
            affine_quotient(vec![vec![bi(1), bi(0)], vec![bi(1), bi(3)]]).unwrap(),
            product(&p1, &p1).unwrap(),
        ];
        for fan in fans.iter().chain(std::iter::once(&p1)) {
            let k = fan.kernel_matrix();
            assert_eq!(k.cols(), fan.n_rays() - fan.dim());
            for j in 0..k.cols() {
                let col = k.col(j);
                let mut acc = fan.group().zero();
                for (i, coeff) in col.iter().enumerate() {
                    acc = fan.group().add(&acc, &fan.group().smul(coeff, fan.ray(i)));
                }
                assert!(fan.group().is_zero(&acc), "rho . kernel != 0");
            }
        }
    }

    #[test]
    fn box_count_matches_torsion_order() {
        // |Box(sigma)| equals the torsion order of N(sigma), for every
        // face of every example fan.
        let fans = [
            weighted_projective(&[1, 1]).unwrap(),
            weighted_projective(&[1, 2]).unwrap(),
            weighted_projective(&[1, 1, 2]).unwrap(),
            football(2, 3).unwrap(),
            affine_quotient(vec![vec![bi(1), bi(0)], vec![bi(1), bi(3)]]).unwrap(),
        ];
        for fan in &fans {
            for face in fan.faces() {
                let quot = fan.quotient(face);
                let torsion_order: BigInt = quot.group.torsion().iter().product();
                let boxes = fan.box_elements(face, true).unwrap();
                assert_eq!(
                    BigInt::from(boxes.len()),
                    torsion_order,
                    "face {face:?}"
                );
            }
        }
    }

    #[test]
    fn weight_duality() {
        for fan in [
            weighted_projective(&[1, 1, 2]).unwrap(),
            football(2, 3).unwrap(),
        ] {
            for (idx, cone) in fan.max_cones().iter().enumerate() {
                let ws = fan.fixed_point_weights(idx);
                for &i in cone {
                    for &k in cone {
                        let v = ws.pair(i, fan.ray_q(k));
                        assert_eq!(v, rat(if i == k { 1 } else { 0 }, 1));
                    }
                }
            }
        }
    }
}

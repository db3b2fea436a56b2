//! Box element enumeration.
//!
//! Box elements over a cone are in bijection with the torsion subgroup of
//! `N(sigma) = N / sum_(i in sigma) Z rho_i`: each torsion class is lifted
//! to `N` and the lift is normalized by subtracting `floor(a_i) rho_i` so
//! that every fractional coordinate lands in `[0, 1)`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactlin::{floor_int, frac_part, sub_vec, to_rat_vec, Rat};

use super::{BoxElement, StackyFan};

pub(super) fn enumerate_boxes(fan: &StackyFan) -> Vec<BoxElement> {
    let mut out: Vec<BoxElement> = vec![fan.zero_box()];
    for cone in fan.max_cones() {
        for b in boxes_of_cone(fan, cone) {
            if !out.iter().any(|x| x.element == b.element) {
                out.push(b);
            }
        }
    }
    out.sort_by(|a, b| (&a.age, &a.element).cmp(&(&b.age, &b.element)));
    out
}

fn boxes_of_cone(fan: &StackyFan, cone: &[usize]) -> Vec<BoxElement> {
    let group = fan.group();
    let quot = fan.quotient(cone);
    let mut out = Vec::new();
    // Torsion classes: zero free part, all torsion coordinate tuples.
    let tor = crate::exactlin::FgAbelianGroup::new(0, quot.group.torsion().to_vec())
        .expect("invariant factors of a quotient");
    for tor_coords in tor.elements() {
        let mut class = vec![BigInt::zero(); quot.group.rank()];
        class.extend(tor_coords);
        if quot.group.is_zero(&class) {
            continue; // zero is reported once, as the fan's zero box
        }
        let lift = group.reduce(&quot.section.mul_vec(&class));
        debug_assert_eq!(quot.proj.apply(&lift), class);
        // Fractional normalization: express the free part over the cone.
        let free = group.free_part(&lift);
        let coeffs = fan
            .express_in_cone(cone, &free)
            .expect("torsion class lies in the cone span");
        let mut element = lift;
        let mut fracs = vec![Rat::zero(); fan.n_rays()];
        for (k, &i) in cone.iter().enumerate() {
            let fl = floor_int(&coeffs[k]);
            element = group.add(&element, &group.smul(&-fl, fan.ray(i)));
            fracs[i] = frac_part(&coeffs[k]);
        }
        let minimal: Vec<usize> = cone
            .iter()
            .copied()
            .filter(|&i| !fracs[i].is_zero())
            .collect();
        // Consistency: the free part really is sum b_i ray_q_i.
        let mut acc = vec![Rat::zero(); fan.dim()];
        for &i in &minimal {
            for k in 0..fan.dim() {
                acc[k] += &fracs[i] * &fan.ray_q(i)[k];
            }
        }
        debug_assert!(crate::exactlin::is_zero_vec(&sub_vec(
            &acc,
            &to_rat_vec(&element[..fan.dim()])
        )));
        let age: Rat = fracs.iter().sum();
        out.push(BoxElement {
            element,
            cone: minimal,
            fracs,
            age,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::builders::{football, weighted_projective};
    use crate::exactlin::{order_in_cokernel, rat, LatticeMap};
    use num_bigint::BigInt;

    #[test]
    fn p1_only_zero() {
        let fan = weighted_projective(&[1, 1]).unwrap();
        assert_eq!(fan.box_all().len(), 1);
        assert!(fan.box_all()[0].is_zero());
        for cone in [vec![0usize], vec![1usize]] {
            let bs = fan.box_elements(&cone, true).unwrap();
            assert_eq!(bs.len(), 1);
            assert!(bs[0].is_zero());
            assert!(fan.box_elements(&cone, false).unwrap().is_empty());
        }
    }

    #[test]
    fn p12_box() {
        let fan = weighted_projective(&[1, 2]).unwrap();
        // rays (1, -2); sigma = {1} carries one nonzero element b = -1 with
        // b_2 = 1/2, age 1/2.
        let bs = fan.box_elements(&[1], false).unwrap();
        assert_eq!(bs.len(), 1);
        let b = &bs[0];
        assert_eq!(b.element, vec![BigInt::from(-1)]);
        assert_eq!(b.fracs[1], rat(1, 2));
        assert_eq!(b.age, rat(1, 2));
        // With faces included, zero is listed too.
        assert_eq!(fan.box_elements(&[1], true).unwrap().len(), 2);
        // Oracle: |Box(sigma)| = torsion order of N / Z rho_2.
        let f = LatticeMap::from_free(fan.group().clone(), vec![fan.ray(1).to_vec()]);
        let (coker, _) = crate::exactlin::cokernel(&f);
        assert_eq!(coker.order(), Some(BigInt::from(2)));
        // Involution fixes it: 1 - 1/2 = 1/2.
        let inv = fan.box_involution(b);
        assert_eq!(&inv, b);
    }

    #[test]
    fn football23_boxes() {
        let fan = football(2, 3).unwrap();
        // Box(sigma_1): one nonzero element of order 2; Box(sigma_2): two of
        // order 3; four in total including zero.
        let b1 = fan.box_elements(&[0], false).unwrap();
        let b2 = fan.box_elements(&[1], false).unwrap();
        assert_eq!(b1.len(), 1);
        assert_eq!(b2.len(), 2);
        assert_eq!(fan.box_all().len(), 4);
        let ages: Vec<_> = fan.box_all().iter().map(|b| b.age.clone()).collect();
        assert_eq!(ages, vec![rat(0, 1), rat(1, 3), rat(1, 2), rat(2, 3)]);
        // Orders in N / Z rho_i.
        let f0 = LatticeMap::from_free(fan.group().clone(), vec![fan.ray(0).to_vec()]);
        assert_eq!(
            order_in_cokernel(&f0, &b1[0].element),
            Some(BigInt::from(2))
        );
        let f1 = LatticeMap::from_free(fan.group().clone(), vec![fan.ray(1).to_vec()]);
        assert_eq!(
            order_in_cokernel(&f1, &b2[0].element),
            Some(BigInt::from(3))
        );
        // Involution swaps the order-3 elements: 1/3 <-> 2/3.
        assert_eq!(b2[0].age, rat(1, 3));
        let inv = fan.box_involution(&b2[0]);
        assert_eq!(inv.age, rat(2, 3));
        assert_eq!(inv.fracs[1], rat(2, 3));
        assert_eq!(fan.box_involution(&inv), b2[0]);
    }

    #[test]
    fn age_involution_identity() {
        for fan in [
            weighted_projective(&[1, 2]).unwrap(),
            weighted_projective(&[1, 1, 2]).unwrap(),
            football(2, 3).unwrap(),
        ] {
            for b in fan.box_all() {
                let inv = fan.box_involution(b);
                let support = b
                    .fracs
                    .iter()
                    .filter(|f| !num_traits::Zero::is_zero(*f))
                    .count();
                assert_eq!(&b.age + &inv.age, rat(support as i64, 1));
            }
        }
    }

    #[test]
    fn unknown_cone_rejected() {
        let fan = weighted_projective(&[1, 2]).unwrap();
        assert!(fan.box_elements(&[0, 1], true).is_err());
    }
}

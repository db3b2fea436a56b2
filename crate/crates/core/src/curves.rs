//! Combinatorics of representable toric maps from footballs into the stack:
//! classification over 1-dimensional lattices, wall curves `l(c, sigma, j)`,
//! box transport across walls, and bounded degree enumeration.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exactlin::{
    dot, floor_int, frac_part, kernel_basis, order_in_cokernel, to_rat_vec, FgAbelianGroup,
    LatticeMap, Rat, RatVector,
};
use crate::fan::{BoxElement, StackyFan, Wall};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("fractional part of c does not match the box element")]
    FractionalPartMismatch,
    #[error("degree is not admissible: {0}")]
    NotAdmissible(String),
    #[error("box element does not belong to the cone")]
    BoxNotInCone,
    #[error("classification requires a rank-1 lattice")]
    NotOneDimensional,
    #[error("relation is not the minimal positive one")]
    NotMinimalRelation,
}

/// A representable toric map across the wall `sigma | sigma'`, recorded by
/// its combinatorial data: the defining relation coefficients, the degree
/// in `L tensor Q` (as a vector in `Q^n`), and the transported box data.
#[derive(Debug, Clone)]
pub struct WallCurve {
    pub sigma: usize,
    pub sigma_p: usize,
    pub j: usize,
    pub j_p: usize,
    /// `c = D_j . l`, positive with `<c> = b_hat_j`.
    pub c: Rat,
    /// `c' = D_j' . l`.
    pub c_p: Rat,
    /// `c_i = D_i . l` for `i` in the wall `sigma cap sigma'`.
    pub c_wall: Vec<(usize, Rat)>,
    /// `l(c, sigma, j)` in the `Q^n` coordinates of `L tensor Q`.
    pub degree: RatVector,
    /// Box element at the `sigma` end (the map restricts to `b_hat` at 0).
    pub b: BoxElement,
    /// Box element at the `sigma'` end (restriction at infinity).
    pub b_p: BoxElement,
    /// `q' = floor(c')`.
    pub q_p: BigInt,
    /// Orders of the isotropy groups at 0 and infinity.
    pub r1: BigInt,
    pub r2: BigInt,
}

/// Builds the wall curve determined by `(sigma, sigma', b, c)` with
/// `<c> = b_hat_j`: solves the unique relation
/// `c rho_j + sum c_i rho_i + c' rho_j' = 0` over the `sigma'` ray basis and
/// transports the box element by reduction modulo the wall sublattice.
pub fn curve_from_c(
    fan: &StackyFan,
    wall: &Wall,
    b: &BoxElement,
    c: &Rat,
) -> Result<WallCurve, CurveError> {
    let sigma = fan.max_cone(wall.sigma);
    let sigma_p = fan.max_cone(wall.sigma_p);
    if !b.cone.iter().all(|i| sigma.contains(i)) {
        return Err(CurveError::BoxNotInCone);
    }
    let b_hat = fan.box_involution(b);
    if !c.is_positive() || frac_part(c) != b_hat.fracs[wall.j] {
        return Err(CurveError::FractionalPartMismatch);
    }
    // -c rho_j expressed in the sigma' basis via its dual weights.
    let ws_p = fan.fixed_point_weights(wall.sigma_p);
    let rho_j = fan.ray_q(wall.j);
    let mut degree = vec![Rat::zero(); fan.n_rays()];
    degree[wall.j] = c.clone();
    let mut c_wall = Vec::new();
    let mut c_p = Rat::zero();
    for &i in sigma_p {
        let t = -(c * &ws_p.pair(i, rho_j));
        if i == wall.j_p {
            c_p = t;
        } else {
            degree[i] = t.clone();
            c_wall.push((i, t));
        }
    }
    degree[wall.j_p] = c_p.clone();
    // Pairing consistency: sum l_i rho_i = 0 in N tensor Q.
    for k in 0..fan.dim() {
        let s: Rat = (0..fan.n_rays())
            .map(|i| &degree[i] * &fan.ray_q(i)[k])
            .sum();
        assert!(s.is_zero(), "degree is not a relation");
    }
    if c_p.is_negative() {
        return Err(CurveError::NotAdmissible(format!(
            "c' = {c_p} is negative; support is not convex at the wall"
        )));
    }

    // Transport: the unique b' in Box(sigma') and q' >= 0 with
    // b_hat + floor(c) rho_j + q' rho_j' + b' = 0 modulo the wall lattice.
    let wall_rays: Vec<usize> = c_wall.iter().map(|&(i, _)| i).collect();
    let quot = fan.quotient(&wall_rays);
    let group = fan.group();
    let mut shift = group.smul(&floor_int(c), fan.ray(wall.j));
    shift = group.add(&b_hat.element, &shift);
    let target = quot.proj.apply(&group.neg(&shift));
    let rho_jp_class = quot.proj.apply(fan.ray(wall.j_p));
    // The quotient has free rank 1 and rho_j' has nonzero image, which
    // pins q' over Q for each candidate b'.
    let free_idx = (0..quot.group.rank())
        .find(|&k| !rho_jp_class[k].is_zero())
        .expect("rho_j' maps to a rank-1 quotient with nonzero free part");
    let candidates = fan.box_elements(sigma_p, true).expect("sigma' is a cone");
    let mut matches = Vec::new();
    for cand in &candidates {
        let cand_class = quot.proj.apply(&cand.element);
        let q_num = Rat::new(
            &target[free_idx] - &cand_class[free_idx],
            rho_jp_class[free_idx].clone(),
        );
        if !q_num.is_integer() || q_num.is_negative() {
            continue;
        }
        let q = q_num.to_integer();
        let lhs = quot
            .group
            .add(&cand_class, &quot.group.smul(&q, &rho_jp_class));
        if lhs == target {
            matches.push((cand.clone(), q));
        }
    }
    assert_eq!(matches.len(), 1, "box transport must have a unique solution");
    let (b_p, q_p) = matches.pop().unwrap();
    // Derived identities: q' = floor(c') and <c'> = b'_(j').
    assert_eq!(q_p, floor_int(&c_p), "q' = floor(c')");
    assert_eq!(frac_part(&c_p), b_p.fracs[wall.j_p], "<c'> = b'_(j')");

    // Isotropy orders of the restrictions at 0 and infinity: the orders of
    // the box classes in the local groups N(sigma) and N(sigma').
    let quot_sigma = fan.quotient(sigma);
    let r1 = quot_sigma
        .group
        .element_order(&quot_sigma.proj.apply(&b_hat.element))
        .expect("N(sigma) is finite");
    let quot_sigma_p = fan.quotient(sigma_p);
    let r2 = quot_sigma_p
        .group
        .element_order(&quot_sigma_p.proj.apply(&b_p.element))
        .expect("N(sigma') is finite");

    Ok(WallCurve {
        sigma: wall.sigma,
        sigma_p: wall.sigma_p,
        j: wall.j,
        j_p: wall.j_p,
        c: c.clone(),
        c_p,
        c_wall,
        degree,
        b: b.clone(),
        b_p,
        q_p,
        r1,
        r2,
    })
}

/// Smallest admissible `c > 0` for the box element `b` across `wall`:
/// `b_hat_j` when that fraction is nonzero, else 1.
pub fn minimal_c(fan: &StackyFan, wall: &Wall, b: &BoxElement) -> Rat {
    let f = fan.box_involution(b).fracs[wall.j].clone();
    if f.is_zero() {
        Rat::from_integer(1.into())
    } else {
        f
    }
}

/// All wall curves from `(sigma, b)` to `(sigma', b')` with
/// `omega . l <= cutoff`; `c` runs over the admissible arithmetic
/// progression with step 1.
pub fn enumerate_wall_degrees(
    fan: &StackyFan,
    wall: &Wall,
    b: &BoxElement,
    b_p: &BoxElement,
    omega: &[Rat],
    cutoff: &Rat,
) -> Vec<WallCurve> {
    let mut out = Vec::new();
    let mut c = minimal_c(fan, wall, b);
    loop {
        let curve = curve_from_c(fan, wall, b, &c).expect("admissible c");
        let deg = dot(omega, &curve.degree);
        assert!(
            deg.is_positive(),
            "Kahler class must be positive on curve degrees"
        );
        if &deg > cutoff {
            break;
        }
        if curve.b_p.element == b_p.element {
            out.push(curve);
        }
        c += Rat::from_integer(1.into());
    }
    out
}

/// Classification data for maps into a stack over a rank-1 lattice.
#[derive(Debug, Clone)]
pub struct OneDimClassification {
    pub r1: BigInt,
    pub r2: BigInt,
    pub q1: BigInt,
    pub q2: BigInt,
    pub f1: Rat,
    pub f2: Rat,
    pub b2: Vec<BigInt>,
}

/// Relates the data `(b_1, l)` of a representable map to `(q_1, q_2, f_1,
/// f_2, b_2, r_1, r_2)` over a complete 1-dimensional fan with rays
/// `rho_1, rho_2` and minimal relation `w_2 rho_1 + w_1 rho_2 = 0`.
pub fn classify_1d(
    group: &FgAbelianGroup,
    rho_1: &[BigInt],
    rho_2: &[BigInt],
    w_1: i64,
    w_2: i64,
    b_1: &[BigInt],
    l: &Rat,
) -> Result<OneDimClassification, CurveError> {
    if group.rank() != 1 {
        return Err(CurveError::NotOneDimensional);
    }
    if w_1 <= 0 || w_2 <= 0 || !l.is_positive() {
        return Err(CurveError::NotAdmissible(
            "w_1, w_2 and l must be positive".to_string(),
        ));
    }
    let w_1b = BigInt::from(w_1);
    let w_2b = BigInt::from(w_2);
    // w_2 rho_1 + w_1 rho_2 = 0 in N, and it generates the kernel.
    let rel = group.add(&group.smul(&w_2b, rho_1), &group.smul(&w_1b, rho_2));
    if !group.is_zero(&rel) {
        return Err(CurveError::NotMinimalRelation);
    }
    let rho_map = LatticeMap::from_free(group.clone(), vec![rho_1.to_vec(), rho_2.to_vec()]);
    let ker = kernel_basis(&rho_map).expect("free source");
    if ker.cols() != 1 {
        return Err(CurveError::NotMinimalRelation);
    }
    let kv = ker.col(0);
    let matches_pm = (kv[0] == w_2b && kv[1] == w_1b) || (kv[0] == -&w_2b && kv[1] == -&w_1b);
    if !matches_pm {
        return Err(CurveError::NotMinimalRelation);
    }

    // f_1 from b_1_bar = f_1 rho_1_bar.
    let rho1_free = to_rat_vec(rho_1)[0].clone();
    let b1_free = group.free_part(b_1)[0].clone();
    let f_1 = &b1_free / &rho1_free;
    if f_1.is_negative() || f_1 >= Rat::from_integer(1.into()) {
        return Err(CurveError::NotAdmissible(
            "b_1 is not a box element over rho_1".to_string(),
        ));
    }
    let lw2 = l * Rat::from_integer(w_2b.clone());
    let lw1 = l * Rat::from_integer(w_1b.clone());
    if frac_part(&lw2) != f_1 {
        return Err(CurveError::NotAdmissible(format!(
            "<l w_2> = {} but f_1 = {}",
            frac_part(&lw2),
            f_1
        )));
    }
    let q_1 = floor_int(&lw2);
    let q_2 = floor_int(&lw1);
    let f_2 = frac_part(&lw1);
    if (&lw2 - &f_1).is_negative() {
        return Err(CurveError::NotAdmissible(
            "w_2 l - f_1 must be a nonnegative integer".to_string(),
        ));
    }
    // b_2 from q_1 rho_1 + q_2 rho_2 + b_1 + b_2 = 0 in N.
    let mut acc = group.smul(&q_1, rho_1);
    acc = group.add(&acc, &group.smul(&q_2, rho_2));
    acc = group.add(&acc, b_1);
    let b_2 = group.neg(&acc);
    // Consistency: b_2_bar = f_2 rho_2_bar.
    let rho2_free = to_rat_vec(rho_2)[0].clone();
    debug_assert_eq!(group.free_part(&b_2)[0], &f_2 * &rho2_free);

    let m1 = LatticeMap::from_free(group.clone(), vec![rho_1.to_vec()]);
    let r1 = order_in_cokernel(&m1, b_1).expect("finite order");
    let m2 = LatticeMap::from_free(group.clone(), vec![rho_2.to_vec()]);
    let r2 = order_in_cokernel(&m2, &b_2).expect("finite order");
    Ok(OneDimClassification {
        r1,
        r2,
        q1: q_1,
        q2: q_2,
        f1: f_1,
        f2: f_2,
        b2: b_2,
    })
}

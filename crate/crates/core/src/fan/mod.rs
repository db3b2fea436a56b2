//! Stacky fans: the data model, validation, box elements and ages,
//! fixed-point weights, wall adjacency, Mori cones, and example builders.

mod boxes;
mod builders;
mod mori;
mod validate;

pub use builders::{affine_quotient, football, product, weighted_projective};
pub use validate::{validate_stacky_data, Check, ValidationReport};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exactlin::{
    cokernel_full, dual_basis_solve, dot, frac_part, kernel_basis, solve_in_columns, to_rat_vec,
    Cokernel, FgAbelianGroup, IntMatrix, LatticeMap, Rat, RatVector,
};

#[derive(Debug, Clone, Error)]
pub enum FanError {
    #[error("invalid stacky fan:\n{0}")]
    Invalid(ValidationReport),
    #[error("unknown cone {0:?}")]
    UnknownCone(Vec<usize>),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("mori cone is not strictly convex")]
    MoriNotPointed,
}

/// An element `b` of `N` together with its minimal cone, fractional
/// coordinates `b_i` over that cone, and age.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxElement {
    /// Canonical representation of `b` in `N`.
    pub element: Vec<BigInt>,
    /// Minimal cone `sigma(b)` as sorted ray indices; empty for zero.
    pub cone: Vec<usize>,
    /// Fractional coordinates, length `n`; `b_i = 0` off the minimal cone.
    pub fracs: Vec<Rat>,
    /// `sum_i b_i`.
    pub age: Rat,
}

impl BoxElement {
    /// The zero box element. A pure-torsion element also has an empty
    /// minimal cone but is not zero.
    pub fn is_zero(&self) -> bool {
        self.element.iter().all(Zero::is_zero)
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.element.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

/// Torus weights at the fixed point of a top-dimensional cone: `u_i(sigma)`
/// is the dual basis to the cone's rays, zero off the cone. Each weight is a
/// rational covector in the equivariant parameters `x1..xd`.
#[derive(Debug, Clone)]
pub struct WeightSystem {
    pub cone_index: usize,
    /// Length `n` list; entry `i` is `u_i(sigma)` as a covector of length `d`.
    pub weights: Vec<RatVector>,
}

impl WeightSystem {
    pub fn weight(&self, i: usize) -> &RatVector {
        &self.weights[i]
    }

    /// `u_i(sigma)` applied to a rational vector.
    pub fn pair(&self, i: usize, v: &[Rat]) -> Rat {
        dot(&self.weights[i], v)
    }
}

/// An ordered adjacency `sigma | sigma'` along a shared codimension-1 face:
/// `j` is the ray of `sigma` off the wall, `j'` the ray of `sigma'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub sigma: usize,
    pub sigma_p: usize,
    pub j: usize,
    pub j_p: usize,
}

/// A validated stacky fan `(N, Sigma, rho)` with cached combinatorics.
#[derive(Debug, Clone)]
pub struct StackyFan {
    group: FgAbelianGroup,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Vec<usize>>,
    ray_q: Vec<RatVector>,
    faces: Vec<Vec<usize>>,
    anticones: Vec<Vec<usize>>,
    kernel: IntMatrix,
    weights: Vec<WeightSystem>,
    walls: Vec<Wall>,
    boxes: Vec<BoxElement>,
}

impl StackyFan {
    /// Validates the data and builds the fan with all caches. The
    /// validation report is returned inside `FanError::Invalid` on failure.
    pub fn new(
        group: FgAbelianGroup,
        rays: Vec<Vec<BigInt>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Self, FanError> {
        let report = validate_stacky_data(&group, &rays, &max_cones);
        if !report.is_valid() {
            return Err(FanError::Invalid(report));
        }
        let rays: Vec<Vec<BigInt>> = rays.iter().map(|r| group.reduce(r)).collect();
        let mut max_cones: Vec<Vec<usize>> = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        max_cones.sort();
        let d = group.rank();
        let ray_q: Vec<RatVector> = rays.iter().map(|r| to_rat_vec(&r[..d])).collect();

        // All faces: subsets of max cones (simplicial), deduplicated.
        let mut faces: Vec<Vec<usize>> = vec![vec![]];
        for cone in &max_cones {
            for mask in 1u64..(1 << cone.len()) {
                let face: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &i)| i)
                    .collect();
                if !faces.contains(&face) {
                    faces.push(face);
                }
            }
        }
        faces.sort();

        let n = rays.len();
        let mut anticones: Vec<Vec<usize>> = Vec::new();
        for mask in 0u64..(1 << n) {
            let anti: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let complement: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
            if faces.contains(&complement) {
                anticones.push(anti);
            }
        }

        let rho = LatticeMap::from_free(group.clone(), rays.clone());
        let kernel = kernel_basis(&rho).expect("free source");

        let weights = max_cones
            .iter()
            .enumerate()
            .map(|(idx, cone)| {
                let basis: Vec<RatVector> = cone.iter().map(|&i| ray_q[i].clone()).collect();
                let dual = dual_basis_solve(&basis).expect("simplicial top cone");
                let mut ws = vec![vec![Rat::zero(); d]; n];
                for (k, &i) in cone.iter().enumerate() {
                    ws[i] = dual[k].clone();
                }
                WeightSystem {
                    cone_index: idx,
                    weights: ws,
                }
            })
            .collect();

        let walls = validate::find_walls(&max_cones);
        let mut fan = StackyFan {
            group,
            rays,
            max_cones,
            ray_q,
            faces,
            anticones,
            kernel,
            weights,
            walls,
            boxes: vec![],
        };
        fan.boxes = boxes::enumerate_boxes(&fan);
        Ok(fan)
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    /// Free rank of `N`; the number of equivariant parameters.
    pub fn dim(&self) -> usize {
        self.group.rank()
    }

    pub fn ray(&self, i: usize) -> &[BigInt] {
        &self.rays[i]
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    /// `rho_bar_i` in `N tensor Q = Q^d`.
    pub fn ray_q(&self, i: usize) -> &RatVector {
        &self.ray_q[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn max_cone(&self, idx: usize) -> &[usize] {
        &self.max_cones[idx]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn is_face(&self, cone: &[usize]) -> bool {
        let mut c = cone.to_vec();
        c.sort_unstable();
        self.faces.contains(&c)
    }

    pub fn anticones(&self) -> &[Vec<usize>] {
        &self.anticones
    }

    /// Basis of `L = ker(rho)` as matrix columns (`n x l`).
    pub fn kernel_matrix(&self) -> &IntMatrix {
        &self.kernel
    }

    /// Rank of the kernel lattice `L`.
    pub fn picard_rank(&self) -> usize {
        self.kernel.cols()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_stacky_data(&self.group, &self.rays, &self.max_cones)
    }

    /// Dual-basis weight system of a top-dimensional cone.
    pub fn fixed_point_weights(&self, cone_index: usize) -> &WeightSystem {
        &self.weights[cone_index]
    }

    /// All ordered adjacencies `sigma | sigma'`.
    pub fn adjacent_pairs(&self) -> &[Wall] {
        &self.walls
    }

    pub fn wall_between(&self, sigma: usize, sigma_p: usize) -> Option<&Wall> {
        self.walls
            .iter()
            .find(|w| w.sigma == sigma && w.sigma_p == sigma_p)
    }

    /// Quotient `N(sigma) = N / sum_(i in cone) Z rho_i` with projection
    /// and an integral section.
    pub fn quotient(&self, cone: &[usize]) -> Cokernel {
        let cols: Vec<Vec<BigInt>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        let f = LatticeMap::from_free(self.group.clone(), cols);
        cokernel_full(&f)
    }

    /// All box elements of the fan, sorted by (age, element).
    pub fn box_all(&self) -> &[BoxElement] {
        &self.boxes
    }

    pub fn zero_box(&self) -> BoxElement {
        BoxElement {
            element: self.group.zero(),
            cone: vec![],
            fracs: vec![Rat::zero(); self.n_rays()],
            age: Rat::zero(),
        }
    }

    pub fn box_of_element(&self, element: &[BigInt]) -> Option<&BoxElement> {
        let canon = self.group.reduce(element);
        self.boxes.iter().find(|b| b.element == canon)
    }

    /// Box elements attached to a cone: with `include_faces`, all `b` whose
    /// minimal cone is a face of `cone` (the set in bijection with the
    /// torsion of `N(sigma)`); without, only those with minimal cone equal
    /// to `cone`.
    pub fn box_elements(
        &self,
        cone: &[usize],
        include_faces: bool,
    ) -> Result<Vec<BoxElement>, FanError> {
        let mut c = cone.to_vec();
        c.sort_unstable();
        if !self.faces.contains(&c) {
            return Err(FanError::UnknownCone(c));
        }
        Ok(self
            .boxes
            .iter()
            .filter(|b| {
                if include_faces {
                    b.cone.iter().all(|i| c.contains(i))
                } else {
                    b.cone == c
                }
            })
            .cloned()
            .collect())
    }

    /// The involution `b -> b_hat` with `b_hat_i = <-b_i>`; fixes the
    /// minimal cone.
    pub fn box_involution(&self, b: &BoxElement) -> BoxElement {
        if b.is_zero() {
            return self.zero_box();
        }
        // b_hat = sum_(i in cone) rho_i - b in N.
        let mut acc = self.group.neg(&b.element);
        for &i in &b.cone {
            acc = self.group.add(&acc, &self.rays[i]);
        }
        let out = self
            .box_of_element(&acc)
            .expect("involution stays in Box")
            .clone();
        debug_assert_eq!(out.cone, b.cone);
        for i in 0..self.n_rays() {
            let expect = frac_part(&(-&b.fracs[i]));
            debug_assert_eq!(out.fracs[i], expect);
        }
        out
    }

    /// Solves `v = sum_(i in cone) a_i ray_q_i` over Q; `None` if `v` is not
    /// in the span. Coefficients are unique because cones are simplicial.
    pub fn express_in_cone(&self, cone: &[usize], v: &[Rat]) -> Option<RatVector> {
        let cols: Vec<RatVector> = cone.iter().map(|&i| self.ray_q[i].clone()).collect();
        solve_in_columns(&cols, v)
    }

    /// The minimal cone of the fan containing a point of the support, or
    /// `None` if the point lies outside the support. The zero vector yields
    /// the empty cone.
    pub fn minimal_cone_of(&self, v: &[Rat]) -> Option<Vec<usize>> {
        if v.iter().all(Zero::is_zero) {
            return Some(vec![]);
        }
        for face in &self.faces {
            if face.is_empty() {
                continue;
            }
            if let Some(coeffs) = self.express_in_cone(face, v) {
                if coeffs.iter().all(|c| c > &Rat::zero()) {
                    return Some(face.clone());
                }
            }
        }
        None
    }

    /// Extreme rays of the Mori cone `NE = sum_sigma C_sigma_dual`, as
    /// primitive integer vectors in the `Q^n` coordinates of `L tensor Q`.
    pub fn mori_generators(&self) -> Result<Vec<Vec<BigInt>>, FanError> {
        mori::mori_generators(self)
    }

    /// Is `omega . g > 0` for every Mori generator `g`? Vacuously true when
    /// the Mori cone is trivial; false when it is not strictly convex.
    pub fn check_kahler(&self, omega: &[Rat]) -> bool {
        assert_eq!(omega.len(), self.n_rays());
        match self.mori_generators() {
            Ok(gens) => gens
                .iter()
                .all(|g| dot(omega, &to_rat_vec(g)) > Rat::zero()),
            Err(_) => false,
        }
    }
}

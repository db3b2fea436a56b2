//! Finitely generated abelian groups as cokernels of integer matrices,
//! homomorphisms between them, and Gale duality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::intmat::{kernel_columns, smith_normal_form, IntMatrix};
use super::ratmat::{rank, to_rat_vec, Rat, RatVector};
use super::ExactlinError;

/// A finitely generated abelian group `Z^rank + Z/m_1 + ... + Z/m_k` with
/// invariant factors `m_1 | m_2 | ... | m_k`, each at least 2.
///
/// Elements are vectors of length `rank + k`: free coordinates first, then
/// torsion coordinates reduced to `[0, m_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self, ExactlinError> {
        for w in torsion.windows(2) {
            if !w[1].mod_floor(&w[0]).is_zero() {
                return Err(ExactlinError::BadInvariantFactors);
            }
        }
        if torsion.iter().any(|m| m < &BigInt::from(2)) {
            return Err(ExactlinError::BadInvariantFactors);
        }
        Ok(FgAbelianGroup { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            torsion: vec![],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Length of element representation vectors.
    pub fn dim(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of elements of a finite group.
    pub fn order(&self) -> Option<BigInt> {
        if self.is_finite() {
            Some(self.torsion.iter().product())
        } else {
            None
        }
    }

    /// Presentation matrix whose cokernel is the group: the map
    /// `Z^k -> Z^(rank+k)` sending `e_i` to `m_i * e_(rank+i)`.
    pub fn presentation(&self) -> IntMatrix {
        let k = self.torsion.len();
        IntMatrix::from_fn(self.dim(), k, |i, j| {
            if i == self.rank + j {
                self.torsion[j].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.dim()]
    }

    /// Canonical representative: torsion coordinates reduced to `[0, m_i)`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim(), "element length mismatch");
        let mut out = v.to_vec();
        for (i, m) in self.torsion.iter().enumerate() {
            out[self.rank + i] = out[self.rank + i].mod_floor(m);
        }
        out
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let sum: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&sum)
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let n: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&n)
    }

    pub fn smul(&self, c: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| c * x).collect();
        self.reduce(&s)
    }

    pub fn is_zero(&self, a: &[BigInt]) -> bool {
        self.reduce(a).iter().all(Zero::is_zero)
    }

    /// Image in the free part `N/N_tor`, as a rational vector of length `rank`.
    pub fn free_part(&self, a: &[BigInt]) -> RatVector {
        to_rat_vec(&a[..self.rank])
    }

    /// Order of an element; `None` means infinite order.
    pub fn element_order(&self, a: &[BigInt]) -> Option<BigInt> {
        let a = self.reduce(a);
        if a[..self.rank].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut ord = BigInt::one();
        for (i, m) in self.torsion.iter().enumerate() {
            let x = &a[self.rank + i];
            if x.is_zero() {
                continue;
            }
            let o = m / x.gcd(m);
            ord = ord.lcm(&o);
        }
        Some(ord)
    }

    /// All elements of a finite group, lexicographically by coordinates.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        assert!(self.is_finite(), "elements() of an infinite group");
        let mut out = vec![vec![]];
        for m in &self.torsion {
            let mut next = Vec::new();
            for prefix in &out {
                let mut x = BigInt::zero();
                while &x < m {
                    let mut e = prefix.clone();
                    e.push(x.clone());
                    next.push(e);
                    x += 1;
                }
            }
            out = next;
        }
        out
    }
}

/// A homomorphism between finitely generated abelian groups, given by an
/// integer matrix acting on element representations.
#[derive(Clone, Debug)]
pub struct LatticeMap {
    pub source: FgAbelianGroup,
    pub target: FgAbelianGroup,
    pub matrix: IntMatrix,
}

impl LatticeMap {
    /// Builds a map and checks that it is well defined on torsion: for each
    /// source torsion generator of order `m`, `m` times its image must
    /// vanish in the target.
    pub fn new(
        source: FgAbelianGroup,
        target: FgAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self, ExactlinError> {
        assert_eq!(matrix.rows(), target.dim());
        assert_eq!(matrix.cols(), source.dim());
        for (j, m) in source.torsion().iter().enumerate() {
            let col = matrix.col(source.rank() + j);
            let scaled: Vec<BigInt> = col.iter().map(|x| m * x).collect();
            if !target.is_zero(&scaled) {
                return Err(ExactlinError::NotWellDefinedOnTorsion);
            }
        }
        Ok(LatticeMap {
            source,
            target,
            matrix,
        })
    }

    pub fn from_free(target: FgAbelianGroup, columns: Vec<Vec<BigInt>>) -> Self {
        let n = columns.len();
        let matrix = IntMatrix::from_fn(target.dim(), n, |i, j| columns[j][i].clone());
        LatticeMap {
            source: FgAbelianGroup::free(n),
            target,
            matrix,
        }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(v))
    }

    pub fn is_zero_map(&self) -> bool {
        (0..self.source.dim()).all(|j| self.target.is_zero(&self.matrix.col(j)))
    }
}

/// Kernel of a map from a free group, as columns forming a lattice basis.
///
/// The kernel of a map into a group with torsion is computed by lifting to a
/// free presentation: `v` is in the kernel iff `M v` lies in the image of the
/// target's presentation matrix.
pub fn kernel_basis(f: &LatticeMap) -> Result<IntMatrix, ExactlinError> {
    if !f.source.torsion().is_empty() {
        return Err(ExactlinError::SourceNotFree);
    }
    let n = f.source.dim();
    let pres = f.target.presentation();
    let stacked = f.matrix.hstack(&pres);
    let full_kernel = kernel_columns(&stacked);
    // The presentation is injective, so projecting to the first n
    // coordinates is injective on the kernel and its image is ker(f).
    Ok(IntMatrix::from_fn(n, full_kernel.cols(), |i, j| {
        full_kernel.get(i, j).clone()
    }))
}

/// A cokernel in invariant-factor form: the quotient group, the projection
/// from the target, and an integer section of the projection (lifts
/// canonical class vectors back to the target).
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FgAbelianGroup,
    pub proj: LatticeMap,
    pub section: IntMatrix,
}

/// Cokernel `target / im(f)`, returned in invariant-factor form together
/// with the projection map from the target.
pub fn cokernel(f: &LatticeMap) -> (FgAbelianGroup, LatticeMap) {
    let c = cokernel_full(f);
    (c.group, c.proj)
}

pub fn cokernel_full(f: &LatticeMap) -> Cokernel {
    let t = f.target.dim();
    let stacked = f.matrix.hstack(&f.target.presentation());
    let snf = smith_normal_form(&stacked);
    let diag = snf.diag();
    // Coordinates of U*x: d_i = 0 or beyond the diagonal -> free;
    // d_i >= 2 -> torsion Z/d_i; d_i = 1 -> dropped.
    let mut free_rows = Vec::new();
    let mut tor_rows = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..t {
        match diag.get(i) {
            Some(d) if d.is_one() => {}
            Some(d) if !d.is_zero() => {
                tor_rows.push(i);
                torsion.push(d.clone());
            }
            _ => free_rows.push(i),
        }
    }
    let group = FgAbelianGroup::new(free_rows.len(), torsion)
        .expect("smith normal form yields a divisibility chain");
    let order: Vec<usize> = free_rows.iter().chain(tor_rows.iter()).copied().collect();
    let proj_matrix = IntMatrix::from_fn(order.len(), t, |i, j| snf.u.get(order[i], j).clone());
    let proj = LatticeMap::new(f.target.clone(), group.clone(), proj_matrix)
        .expect("cokernel projection is well defined");
    // Section: columns are U^(-1) e_(order[i]); U is unimodular so its
    // inverse is integral.
    let u_rows: Vec<Vec<Rat>> = (0..t).map(|i| to_rat_vec(&snf.u.row(i))).collect();
    let u_inv = super::ratmat::invert(&u_rows).expect("unimodular matrix");
    let section = IntMatrix::from_fn(t, order.len(), |i, j| {
        let v = &u_inv[i][order[j]];
        debug_assert!(v.is_integer());
        v.to_integer()
    });
    Cokernel {
        group,
        proj,
        section,
    }
}

/// Gale dual of a map `rho: Z^n -> N` with finite cokernel.
///
/// Presents `N` as `coker(Q)`, lifts `rho` to the presentation lattice, and
/// takes the cokernel of the stacked transpose `[rho~ | Q]^T`. Exactness of
/// the divisor sequence at `(Z^n)^*` is enforced by property tests.
pub fn gale_dual(rho: &LatticeMap) -> Result<(FgAbelianGroup, LatticeMap), ExactlinError> {
    if !rho.source.torsion().is_empty() {
        return Err(ExactlinError::SourceNotFree);
    }
    let n = rho.source.dim();
    let target = &rho.target;
    // Finite cokernel iff rho tensor Q is surjective onto the free part.
    let ray_rows: Vec<RatVector> = (0..n)
        .map(|j| to_rat_vec(&rho.matrix.col(j)[..target.rank()]))
        .collect();
    if rank(&ray_rows) != target.rank() {
        return Err(ExactlinError::InfiniteCokernel);
    }
    let pres = target.presentation();
    let stacked = rho.matrix.hstack(&pres); // t x (n + s)
    // Dualize: (Z^t)^* -> (Z^(n+s))^*, matrix = stacked transpose.
    let dual_map = LatticeMap::from_free(
        FgAbelianGroup::free(stacked.cols()),
        (0..stacked.rows())
            .map(|i| stacked.row(i))
            .collect::<Vec<_>>(),
    );
    debug_assert_eq!(dual_map.matrix, stacked.transpose());
    let (ldual, proj) = cokernel(&dual_map);
    // rho_dual is the composite (Z^n)^* -> (Z^(n+s))^* -> L_dual.
    let rho_dual_matrix = IntMatrix::from_fn(ldual.dim(), n, |i, j| proj.matrix.get(i, j).clone());
    let rho_dual = LatticeMap::new(FgAbelianGroup::free(n), ldual.clone(), rho_dual_matrix)
        .expect("free source");
    Ok((ldual, rho_dual))
}

/// The integer matrix whose columns generate `ker(rho_dual)` inside `(Z^n)^*`;
/// used by exactness tests against the image of `N^*`.
pub fn dual_kernel_generators(rho_dual: &LatticeMap) -> IntMatrix {
    kernel_basis(rho_dual).expect("rho_dual has free source")
}

/// Image of `N^* -> (Z^n)^*` for `rho: Z^n -> N`: row `i` of the free part of
/// the ray matrix becomes a generator column.
pub fn nstar_image(rho: &LatticeMap) -> IntMatrix {
    let n = rho.source.dim();
    let d = rho.target.rank();
    IntMatrix::from_fn(n, d, |i, j| rho.matrix.get(j, i).clone())
}

/// Pairing helper used by fan code: rational columns of a map's matrix
/// restricted to the free part of the target.
pub fn free_columns(map: &LatticeMap) -> Vec<RatVector> {
    (0..map.source.dim())
        .map(|j| to_rat_vec(&map.matrix.col(j)[..map.target.rank()]))
        .collect()
}

/// Order of `v`'s class in `coker(f)`; `None` means infinite.
pub fn order_in_cokernel(f: &LatticeMap, v: &[BigInt]) -> Option<BigInt> {
    let (group, proj) = cokernel(f);
    group.element_order(&proj.apply(v))
}

pub fn rat_is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, ToPrimitive};

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn free_map(target_rank: usize, cols: &[&[i64]]) -> LatticeMap {
        LatticeMap::from_free(
            FgAbelianGroup::free(target_rank),
            cols.iter()
                .map(|c| c.iter().map(|&x| bi(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn group_invariants() {
        assert!(FgAbelianGroup::new(1, vec![bi(2), bi(6)]).is_ok());
        assert!(FgAbelianGroup::new(0, vec![bi(2), bi(3)]).is_err());
        assert!(FgAbelianGroup::new(0, vec![bi(1)]).is_err());
    }

    #[test]
    fn element_arithmetic() {
        let g = FgAbelianGroup::new(1, vec![bi(3)]).unwrap();
        let a = vec![bi(2), bi(2)];
        let b = vec![bi(-1), bi(2)];
        assert_eq!(g.add(&a, &b), vec![bi(1), bi(1)]);
        assert_eq!(g.neg(&a), vec![bi(-2), bi(1)]);
        assert_eq!(g.element_order(&[bi(0), bi(2)]), Some(bi(3)));
        assert_eq!(g.element_order(&[bi(1), bi(0)]), None);
    }

    #[test]
    fn kernel_p12() {
        // rho = [1, -2]: Z^2 -> Z, stack P(1,2).
        let f = free_map(1, &[&[1], &[-2]]);
        let k = kernel_basis(&f).unwrap();
        assert_eq!(k.cols(), 1);
        let mut v = k.col(0);
        if v[0] < bi(0) {
            v = v.iter().map(|x| -x).collect();
        }
        assert_eq!(v, vec![bi(2), bi(1)]);
    }

    #[test]
    fn kernel_football() {
        // rho = [-2, 3]: the football F(2,3); basis (3, 2).
        let f = free_map(1, &[&[-2], &[3]]);
        let k = kernel_basis(&f).unwrap();
        let mut v = k.col(0);
        if v[0] < bi(0) {
            v = v.iter().map(|x| -x).collect();
        }
        assert_eq!(v, vec![bi(3), bi(2)]);
    }

    #[test]
    fn kernel_identity_empty() {
        let f = free_map(1, &[&[1]]);
        assert_eq!(kernel_basis(&f).unwrap().cols(), 0);
    }

    #[test]
    fn kernel_into_torsion() {
        // Z -> Z/2, x -> x mod 2: kernel = 2Z.
        let g = FgAbelianGroup::new(0, vec![bi(2)]).unwrap();
        let f = LatticeMap::new(FgAbelianGroup::free(1), g, IntMatrix::from_rows(vec![vec![bi(1)]]))
            .unwrap();
        let k = kernel_basis(&f).unwrap();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0)[0].abs().to_i64(), Some(2));
    }

    #[test]
    fn cokernel_examples() {
        // [2]: Z -> Z has cokernel Z/2.
        let (g, proj) = cokernel(&free_map(1, &[&[2]]));
        assert_eq!(g.rank(), 0);
        assert_eq!(g.torsion(), &[bi(2)]);
        // inclusion then projection is zero
        assert!(g.is_zero(&proj.apply(&[bi(2)])));
        assert!(!g.is_zero(&proj.apply(&[bi(1)])));

        // [1, -2]: Z^2 -> Z surjective, trivial cokernel.
        let (g2, _) = cokernel(&free_map(1, &[&[1], &[-2]]));
        assert!(g2.is_trivial());

        // empty map into Z: cokernel Z.
        let (g3, proj3) = cokernel(&free_map(1, &[]));
        assert_eq!(g3.rank(), 1);
        assert!(g3.torsion().is_empty());
        assert_eq!(proj3.apply(&[bi(5)]).len(), 1);
    }

    #[test]
    fn gale_dual_p1() {
        let rho = free_map(1, &[&[1], &[-1]]);
        let (ldual, rho_dual) = gale_dual(&rho).unwrap();
        assert_eq!(ldual.rank(), 1);
        assert!(ldual.torsion().is_empty());
        let a = rho_dual.apply(&[bi(1), bi(0)]);
        let b = rho_dual.apply(&[bi(0), bi(1)]);
        assert_eq!(a, b);
        assert_eq!(a[0].abs(), bi(1));
        // Exactness at (Z^2)^*.
        let ker = dual_kernel_generators(&rho_dual);
        let image = nstar_image(&rho);
        assert!(super::super::intmat::same_span(&ker, &image));
    }

    #[test]
    fn gale_dual_p12() {
        let rho = free_map(1, &[&[1], &[-2]]);
        let (ldual, rho_dual) = gale_dual(&rho).unwrap();
        assert_eq!(ldual.rank(), 1);
        assert!(ldual.torsion().is_empty());
        let a = rho_dual.apply(&[bi(1), bi(0)]);
        let b = rho_dual.apply(&[bi(0), bi(1)]);
        // up to unimodular change: a = 2g, b = g with g a generator
        assert_eq!(b[0].abs(), bi(1));
        assert_eq!(a, ldual.smul(&bi(2), &b));
        let ker = dual_kernel_generators(&rho_dual);
        assert!(super::super::intmat::same_span(&ker, &nstar_image(&rho)));
    }

    #[test]
    fn gale_dual_identity_trivial() {
        let rho = free_map(1, &[&[1]]);
        let (ldual, _) = gale_dual(&rho).unwrap();
        assert!(ldual.is_trivial());
    }

    #[test]
    fn gale_dual_infinite_cokernel() {
        let rho = free_map(2, &[&[1, 0]]);
        assert!(matches!(
            gale_dual(&rho),
            Err(ExactlinError::InfiniteCokernel)
        ));
    }

    #[test]
    fn cokernel_section_lifts() {
        // Z -> Z^2, 1 -> (2, 0): cokernel Z + Z/2.
        let f = free_map(2, &[&[2, 0]]);
        let c = cokernel_full(&f);
        assert_eq!(c.group.rank(), 1);
        assert_eq!(c.group.torsion(), &[bi(2)]);
        for class in [vec![bi(0), bi(0)], vec![bi(0), bi(1)], vec![bi(3), bi(1)]] {
            let lift = c.section.mul_vec(&class);
            assert_eq!(c.proj.apply(&lift), c.group.reduce(&class));
        }
    }

    #[test]
    fn finite_elements() {
        let g = FgAbelianGroup::new(0, vec![bi(2), bi(4)]).unwrap();
        assert_eq!(g.elements().len(), 8);
        assert_eq!(g.order(), Some(bi(8)));
    }
}

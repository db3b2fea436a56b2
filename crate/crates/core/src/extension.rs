//! S-extension bookkeeping: the extended lattice `L^S`, the rational
//! splitting `mu`, the reduction function `v^S`, and enumeration of the
//! extended degree sets up to an omega-degree cutoff.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::curves::WallCurve;
use crate::exactlin::{
    ceil_int, dot, enumerate_lattice_points, frac_part, AffineIneq, Rat, RatVector,
};
use crate::fan::{BoxElement, StackyFan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtError {
    #[error("extension element {0} lies outside the fan support")]
    OutsideSupport(usize),
    #[error("vector is not in Lambda^S: {0}")]
    NotInLambdaS(String),
    #[error("omega is not a Kahler class")]
    InvalidKahler,
    #[error("box data incompatible with the shift: {0}")]
    IncompatibleBoxData(String),
}

/// Per-element data of an S-extension: the minimal cone of `s_bar_j`, the
/// positive coefficients expressing it over that cone, the order `r_j`, and
/// the splitting image `mu(e_j)`.
#[derive(Debug, Clone)]
pub struct SInfo {
    pub min_cone: Vec<usize>,
    /// `(i, s_ji)` with `s_ji > 0`, for `i` in the minimal cone.
    pub coeffs: Vec<(usize, Rat)>,
    /// Order of `s_j` in `N / sum_(i in min_cone) Z rho_i`.
    pub order: BigInt,
    /// `mu(e_j) = e_(n+j) - sum s_ji e_i` in `Q^(n+m)`.
    pub mu: RatVector,
}

/// An S-extension of a stacky fan: elements `s_j` of `N` whose images lie
/// in the fan support, with the splitting data cached.
#[derive(Debug, Clone)]
pub struct SExtension {
    s_elems: Vec<Vec<BigInt>>,
    info: Vec<SInfo>,
}

impl SExtension {
    pub fn new(fan: &StackyFan, s_elems: Vec<Vec<BigInt>>) -> Result<Self, ExtError> {
        let n = fan.n_rays();
        let m = s_elems.len();
        let mut info = Vec::with_capacity(m);
        let s_elems: Vec<Vec<BigInt>> =
            s_elems.iter().map(|s| fan.group().reduce(s)).collect();
        for (j, s) in s_elems.iter().enumerate() {
            let s_bar = fan.group().free_part(s);
            let min_cone = fan
                .minimal_cone_of(&s_bar)
                .ok_or(ExtError::OutsideSupport(j))?;
            let coeffs_vec = fan
                .express_in_cone(&min_cone, &s_bar)
                .expect("minimal cone contains the point");
            let coeffs: Vec<(usize, Rat)> = min_cone
                .iter()
                .cloned()
                .zip(coeffs_vec.iter().cloned())
                .collect();
            let quot = fan.quotient(&min_cone);
            let order = quot
                .group
                .element_order(&quot.proj.apply(s))
                .expect("s_bar lies in the cone span, so the class is torsion");
            // r_j s_ji is integral.
            for (_, c) in &coeffs {
                debug_assert!((c * Rat::from_integer(order.clone())).is_integer());
            }
            let mut mu = vec![Rat::zero(); n + m];
            mu[n + j] = Rat::one();
            for (i, c) in &coeffs {
                mu[*i] = -c.clone();
            }
            info.push(SInfo {
                min_cone,
                coeffs,
                order,
                mu,
            });
        }
        Ok(SExtension { s_elems, info })
    }

    pub fn empty() -> Self {
        SExtension {
            s_elems: vec![],
            info: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.s_elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_elems.is_empty()
    }

    pub fn element(&self, j: usize) -> &[BigInt] {
        &self.s_elems[j]
    }

    pub fn elements(&self) -> &[Vec<BigInt>] {
        &self.s_elems
    }

    pub fn info(&self, j: usize) -> &SInfo {
        &self.info[j]
    }

    /// `s_bar_j` in `Q^d`.
    pub fn s_bar(&self, fan: &StackyFan, j: usize) -> RatVector {
        fan.group().free_part(&self.s_elems[j])
    }

    /// Splits `lambda = iota(d) + mu(k)`: returns `(d, k)` with `d` in the
    /// `Q^n` coordinates of `L tensor Q` and `k = (lambda_(n+j))_j`.
    pub fn split(&self, fan: &StackyFan, lambda: &[Rat]) -> Option<(RatVector, Vec<BigInt>)> {
        let n = fan.n_rays();
        let m = self.len();
        assert_eq!(lambda.len(), n + m);
        let mut k = Vec::with_capacity(m);
        for j in 0..m {
            if !lambda[n + j].is_integer() {
                return None;
            }
            k.push(lambda[n + j].to_integer());
        }
        let mut d = lambda[..n].to_vec();
        for (j, kj) in k.iter().enumerate() {
            let kj_rat = Rat::from_integer(kj.clone());
            for (i, c) in &self.info[j].coeffs {
                d[*i] = &d[*i] + &kj_rat * c;
            }
        }
        Some((d, k))
    }
}

/// An element of the extended degree lattice with its splitting, box label,
/// and omega-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtDegree {
    /// The full vector in `Q^(n+m)`.
    pub lambda: RatVector,
    /// `d` part under the splitting, in `Q^n`.
    pub d_part: RatVector,
    /// `k` part: nonnegative integers of length `m`.
    pub k_part: Vec<BigInt>,
    /// `v^S(lambda)`.
    pub box_elem: BoxElement,
    /// `omega . d + sum k_j`.
    pub omega_degree: Rat,
}

/// The reduction function `v^S`: membership in `Lambda^S` is checked, then
/// `v^S(lambda) = sum ceil(lambda_i) rho_i + sum ceil(lambda_(n+j)) s_j`
/// is reduced to its box representative.
pub fn reduction(
    fan: &StackyFan,
    ext: &SExtension,
    lambda: &[Rat],
) -> Result<BoxElement, ExtError> {
    let n = fan.n_rays();
    let m = ext.len();
    if lambda.len() != n + m {
        return Err(ExtError::NotInLambdaS(format!(
            "length {} != {}",
            lambda.len(),
            n + m
        )));
    }
    for j in 0..m {
        if !lambda[n + j].is_integer() {
            return Err(ExtError::NotInLambdaS(format!(
                "extended coordinate {j} is not an integer"
            )));
        }
    }
    // lambda lies in ker(rho^S tensor Q).
    for t in 0..fan.dim() {
        let mut acc: Rat = (0..n).map(|i| &lambda[i] * &fan.ray_q(i)[t]).sum();
        for j in 0..m {
            acc += &lambda[n + j] * &ext.s_bar(fan, j)[t];
        }
        if !acc.is_zero() {
            return Err(ExtError::NotInLambdaS(
                "vector is not a rational relation of the extended rays".to_string(),
            ));
        }
    }
    // Fractional support spans a cone.
    let support: Vec<usize> = (0..n).filter(|&i| !lambda[i].is_integer()).collect();
    if !fan.is_face(&support) {
        return Err(ExtError::NotInLambdaS(format!(
            "fractional support {support:?} is not a cone"
        )));
    }
    let group = fan.group();
    let mut v = group.zero();
    for i in 0..n {
        v = group.add(&v, &group.smul(&ceil_int(&lambda[i]), fan.ray(i)));
    }
    for j in 0..m {
        v = group.add(&v, &group.smul(&ceil_int(&lambda[n + j]), ext.element(j)));
    }
    let b = fan
        .box_of_element(&v)
        .ok_or_else(|| ExtError::NotInLambdaS("reduction is not a box element".to_string()))?
        .clone();
    // v^S(lambda)_i = <-lambda_i>.
    for i in 0..n {
        debug_assert_eq!(b.fracs[i], frac_part(&-&lambda[i]));
    }
    Ok(b)
}

/// The unit degree vectors of the per-cone parameterization: for each index
/// `i0` outside the top cone, the vector `e_(i0) - sum_j a_(i0 j) e_j` with
/// `a_(i0 j) = u_j(sigma)(image of slot i0)`.
pub fn cone_units(fan: &StackyFan, ext: &SExtension, sigma: usize) -> Vec<(usize, RatVector)> {
    let n = fan.n_rays();
    let m = ext.len();
    let cone = fan.max_cone(sigma);
    let ws = fan.fixed_point_weights(sigma);
    let mut units = Vec::new();
    for i0 in 0..n + m {
        if i0 < n && cone.contains(&i0) {
            continue;
        }
        let image: RatVector = if i0 < n {
            fan.ray_q(i0).clone()
        } else {
            ext.s_bar(fan, i0 - n)
        };
        let mut unit = vec![Rat::zero(); n + m];
        unit[i0] = Rat::one();
        for &j in cone {
            unit[j] = -ws.pair(j, &image);
        }
        units.push((i0, unit));
    }
    units
}

/// Enumerates the extended degrees supported on a top cone: nonnegative
/// integer combinations of the cone units with omega-degree at most
/// `cutoff`, sorted by (omega-degree, lambda).
pub fn enumerate_for_cone(
    fan: &StackyFan,
    ext: &SExtension,
    sigma: usize,
    omega: &[Rat],
    cutoff: &Rat,
) -> Result<Vec<ExtDegree>, ExtError> {
    let n = fan.n_rays();
    let m = ext.len();
    let units = cone_units(fan, ext, sigma);
    let ell = units.len();
    debug_assert_eq!(ell, n + m - fan.dim());
    // Degree coefficient of each unit; strictly positive for a Kahler class.
    let mut degs = Vec::with_capacity(ell);
    for (_, unit) in &units {
        let (d, k) = ext.split(fan, unit).expect("unit has integer k part");
        let mut deg = dot(omega, &d);
        for kj in &k {
            deg += Rat::from_integer(kj.clone());
        }
        if !deg.is_positive() {
            return Err(ExtError::InvalidKahler);
        }
        degs.push(deg);
    }
    let mut constraints: Vec<AffineIneq> = (0..ell)
        .map(|i| {
            let mut coeffs = vec![Rat::zero(); ell];
            coeffs[i] = Rat::one();
            AffineIneq::ge(coeffs, Rat::zero())
        })
        .collect();
    constraints.push(AffineIneq::le(degs.clone(), cutoff.clone()));
    let tuples = enumerate_lattice_points(ell, &constraints)
        .expect("simplex constraints are bounded");
    let mut out = Vec::with_capacity(tuples.len());
    for t in tuples {
        let mut lambda = vec![Rat::zero(); n + m];
        for (idx, (_, unit)) in units.iter().enumerate() {
            let c = Rat::from_integer(t[idx].clone());
            for p in 0..n + m {
                lambda[p] = &lambda[p] + &c * &unit[p];
            }
        }
        out.push(build_ext_degree(fan, ext, omega, lambda)?);
    }
    out.sort_by(|a, b| (&a.omega_degree, &a.lambda).cmp(&(&b.omega_degree, &b.lambda)));
    Ok(out)
}

fn build_ext_degree(
    fan: &StackyFan,
    ext: &SExtension,
    omega: &[Rat],
    lambda: RatVector,
) -> Result<ExtDegree, ExtError> {
    let (d_part, k_part) = ext
        .split(fan, &lambda)
        .ok_or_else(|| ExtError::NotInLambdaS("non-integral k part".to_string()))?;
    if k_part.iter().any(|k| k.is_negative()) {
        return Err(ExtError::NotInLambdaS("negative k part".to_string()));
    }
    let box_elem = reduction(fan, ext, &lambda)?;
    let mut omega_degree = dot(omega, &d_part);
    for kj in &k_part {
        omega_degree += Rat::from_integer(kj.clone());
    }
    // Splitting identity: iota(d) + mu(k) = lambda.
    #[cfg(debug_assertions)]
    {
        let n = fan.n_rays();
        let mut recomposed = vec![Rat::zero(); lambda.len()];
        recomposed[..n].clone_from_slice(&d_part);
        for (j, kj) in k_part.iter().enumerate() {
            let kj_rat = Rat::from_integer(kj.clone());
            for p in 0..lambda.len() {
                recomposed[p] = &recomposed[p] + &kj_rat * &ext.info(j).mu[p];
            }
        }
        debug_assert_eq!(recomposed, lambda);
    }
    Ok(ExtDegree {
        lambda,
        d_part,
        k_part,
        box_elem,
        omega_degree,
    })
}

/// Union of the per-cone enumerations, deduplicated by the exact vector and
/// grouped by box element.
pub fn enumerate_lambda(
    fan: &StackyFan,
    ext: &SExtension,
    omega: &[Rat],
    cutoff: &Rat,
) -> Result<std::collections::BTreeMap<Vec<BigInt>, Vec<ExtDegree>>, ExtError> {
    if !fan.check_kahler(omega) {
        return Err(ExtError::InvalidKahler);
    }
    let mut seen: std::collections::BTreeSet<RatVector> = Default::default();
    let mut grouped: std::collections::BTreeMap<Vec<BigInt>, Vec<ExtDegree>> = Default::default();
    for sigma in 0..fan.max_cones().len() {
        for deg in enumerate_for_cone(fan, ext, sigma, omega, cutoff)? {
            if seen.insert(deg.lambda.clone()) {
                grouped
                    .entry(deg.box_elem.element.clone())
                    .or_default()
                    .push(deg);
            }
        }
    }
    for group in grouped.values_mut() {
        group.sort_by(|a, b| (&a.omega_degree, &a.lambda).cmp(&(&b.omega_degree, &b.lambda)));
    }
    Ok(grouped)
}

/// The degree-shift map `lambda' -> lambda' + l(c, sigma, j)`: sends the
/// enumeration of `Lambda^S_(b')` into `Lambda^S_b` for the wall curve's
/// box pair. The inverse is subtraction.
pub fn shift_lambda(
    fan: &StackyFan,
    ext: &SExtension,
    omega: &[Rat],
    lambda_p: &ExtDegree,
    curve: &WallCurve,
) -> Result<ExtDegree, ExtError> {
    if lambda_p.box_elem.element != curve.b_p.element {
        return Err(ExtError::IncompatibleBoxData(format!(
            "lambda' reduces to {} but the curve ends at {}",
            lambda_p.box_elem.label(),
            curve.b_p.label()
        )));
    }
    let n = fan.n_rays();
    let mut lambda = lambda_p.lambda.clone();
    for i in 0..n {
        lambda[i] = &lambda[i] + &curve.degree[i];
    }
    let shifted = build_ext_degree(fan, ext, omega, lambda)
        .map_err(|e| ExtError::IncompatibleBoxData(e.to_string()))?;
    if shifted.box_elem.element != curve.b.element {
        return Err(ExtError::IncompatibleBoxData(format!(
            "shift lands on {} instead of {}",
            shifted.box_elem.label(),
            curve.b.label()
        )));
    }
    Ok(shifted)
}

//! The S-extended equivariant I-function at `t = 0`, restricted to torus
//! fixed points, as truncated series of factored expressions; the
//! J-function of a finite-group classifying stack; and the q-parameterized
//! restriction form used as an independent cross-check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactlin::{
    dot, enumerate_lattice_points, frac_part, render_rat_vec, AffineIneq, FgAbelianGroup, Rat,
    RatVector,
};
use crate::extension::{cone_units, enumerate_for_cone, ExtDegree, ExtError, SExtension};
use crate::fan::{BoxElement, StackyFan};
use crate::linform::FactoredExpr;
use crate::parallel::ordered_map;

/// Key of a series coefficient: box label, curve degree in `Q^n`, and
/// extended exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeriesKey {
    pub box_elem: Vec<BigInt>,
    pub d: RatVector,
    pub k: Vec<BigInt>,
}

/// A truncated fixed-point restriction of the extended I-function: a map
/// from keys to factored-expression coefficients.
#[derive(Debug, Clone)]
pub struct ISeries {
    pub sigma: usize,
    pub omega: RatVector,
    pub cutoff: Rat,
    pub coeffs: BTreeMap<SeriesKey, FactoredExpr>,
}

impl ISeries {
    pub fn get(&self, key: &SeriesKey) -> Option<&FactoredExpr> {
        self.coeffs.get(key)
    }

    /// Omega-degree of a key: `omega . d + sum k`.
    pub fn key_degree(&self, key: &SeriesKey) -> Rat {
        let mut deg = dot(&self.omega, &key.d);
        for kj in &key.k {
            deg += Rat::from_integer(kj.clone());
        }
        deg
    }

    /// Keys sorted by (omega-degree, d, k, box), the canonical output order.
    pub fn sorted_keys(&self) -> Vec<&SeriesKey> {
        let mut keys: Vec<&SeriesKey> = self.coeffs.keys().collect();
        keys.sort_by(|a, b| {
            let da = self.key_degree(a);
            let db = self.key_degree(b);
            (da, &a.d, &a.k, &a.box_elem).cmp(&(db, &b.d, &b.k, &b.box_elem))
        });
        keys
    }

    /// Canonical text rendering, one line per key.
    pub fn render_lines(&self) -> Vec<String> {
        self.sorted_keys()
            .into_iter()
            .map(|key| {
                let d_txt = render_rat_vec(&key.d);
                let k_parts: Vec<String> = key.k.iter().map(|x| x.to_string()).collect();
                let b_parts: Vec<String> =
                    key.box_elem.iter().map(|x| x.to_string()).collect();
                format!(
                    "I[{}][b=[{}]] Q^{} x^({}) : {}",
                    self.sigma,
                    b_parts.join(","),
                    d_txt,
                    k_parts.join(","),
                    self.coeffs[key].render()
                )
            })
            .collect()
    }
}

/// Appends to `expr` the telescoped ratio of the two half-infinite products
/// `prod_(a <= upper_num, <a> = f) (u + a z)` over
/// `prod_(a <= upper_den, <a> = f) (u + a z)`.
/// Returns the signed number of materialized factors, or `None` when a zero
/// factor appears in the numerator (the whole expression vanishes).
fn telescoped_ratio(
    expr: &mut FactoredExpr,
    u: &[Rat],
    upper_num: &Rat,
    upper_den: &Rat,
) -> Option<i64> {
    debug_assert_eq!(frac_part(upper_num), frac_part(upper_den));
    let one = Rat::one();
    let mut signed = 0i64;
    if upper_den > upper_num {
        // Extra denominator factors: a in (upper_num, upper_den].
        let mut a = upper_den.clone();
        while &a > upper_num {
            expr.mul_raw_factor(u, &a, -1).expect("a != 0 in denominator range or u != 0");
            signed -= 1;
            a = &a - &one;
        }
    } else if upper_num > upper_den {
        // Extra numerator factors: a in (upper_den, upper_num].
        let mut a = upper_num.clone();
        while &a > upper_den {
            if a.is_zero() && u.iter().all(Zero::is_zero) {
                return None;
            }
            expr.mul_raw_factor(u, &a, 1).expect("nonzero factor");
            signed += 1;
            a = &a - &one;
        }
    }
    Some(signed)
}

/// Upper end of the numerator range for fractional part `f`:
/// `max { a <= 0 : <a> = f }`.
fn numerator_upper(f: &Rat) -> Rat {
    if f.is_zero() {
        Rat::zero()
    } else {
        f - Rat::one()
    }
}

/// The I-function coefficient of one enumerated degree, as a factored
/// product of linear forms times `z`. Vanishing numerators yield the zero
/// expression; empty products are 1.
pub fn icoeff(fan: &StackyFan, ext: &SExtension, sigma: usize, lam: &ExtDegree) -> FactoredExpr {
    let n = fan.n_rays();
    let m = ext.len();
    let d = fan.dim();
    let cone = fan.max_cone(sigma);
    let ws = fan.fixed_point_weights(sigma);
    let zero_u = vec![Rat::zero(); d];
    let mut expr = FactoredExpr::one();
    expr.mul_raw_factor(&zero_u, &Rat::one(), 1).expect("z");
    let mut signed = 0i64;
    for i in 0..n + m {
        let li = &lam.lambda[i];
        let in_cone = i < n && cone.contains(&i);
        let u: &[Rat] = if in_cone { ws.weight(i) } else { &zero_u };
        let f = frac_part(li);
        debug_assert!(in_cone || f.is_zero(), "off-cone coordinates are integral");
        let upper_num = numerator_upper(&f);
        match telescoped_ratio(&mut expr, u, &upper_num, li) {
            Some(s) => signed += s,
            None => return FactoredExpr::zero(),
        }
    }
    // Structural homogeneity: total degree = 1 + (numerator factors)
    // - (denominator factors), including the leading z.
    assert_eq!(expr.total_degree(), 1 + signed, "homogeneity bookkeeping");
    expr
}

/// The truncated I-function restricted to the fixed point of `sigma`:
/// coefficient at key `(v^S(lambda), d, k)` equals `icoeff` for each
/// enumerated degree. Distinct degrees never collide on keys.
pub fn iseries(
    fan: &StackyFan,
    ext: &SExtension,
    sigma: usize,
    omega: &[Rat],
    cutoff: &Rat,
    jobs: usize,
) -> Result<ISeries, ExtError> {
    let lams = enumerate_for_cone(fan, ext, sigma, omega, cutoff)?;
    let computed = ordered_map(lams, jobs, |lam| {
        let key = SeriesKey {
            box_elem: lam.box_elem.element.clone(),
            d: lam.d_part.clone(),
            k: lam.k_part.clone(),
        };
        (key, icoeff(fan, ext, sigma, lam))
    });
    let mut coeffs = BTreeMap::new();
    for (key, expr) in computed {
        if expr.is_zero() {
            continue;
        }
        let clash = coeffs.insert(key, expr);
        assert!(clash.is_none(), "distinct degrees collide on a series key");
    }
    Ok(ISeries {
        sigma,
        omega: omega.to_vec(),
        cutoff: cutoff.clone(),
        coeffs,
    })
}

/// One J-function coefficient of the classifying stack of a finite group:
/// for exponents `lambda`, the scalar `-z prod 1/(lambda_i! (-z)^lambda_i)`
/// supported on the label `sum lambda_i b^i`.
#[derive(Debug, Clone)]
pub struct JCoefficient {
    pub exponents: Vec<BigInt>,
    pub label: Vec<BigInt>,
    pub value: FactoredExpr,
}

/// The J-function of `BG` for a finite group `G`, truncated to total
/// exponent degree `cutoff`. `gens` are the labels `b^i` in `G`.
pub fn jfun_bg(
    group: &FgAbelianGroup,
    gens: &[Vec<BigInt>],
    cutoff: usize,
    vars: usize,
) -> Vec<JCoefficient> {
    assert!(group.is_finite(), "jfun_bg needs a finite group");
    let zero_u = vec![Rat::zero(); vars];
    let ell = gens.len();
    let mut constraints: Vec<AffineIneq> = (0..ell)
        .map(|i| {
            let mut coeffs = vec![Rat::zero(); ell];
            coeffs[i] = Rat::one();
            AffineIneq::ge(coeffs, Rat::zero())
        })
        .collect();
    constraints.push(AffineIneq::le(
        vec![Rat::one(); ell],
        Rat::from_integer(BigInt::from(cutoff)),
    ));
    let tuples = enumerate_lattice_points(ell, &constraints).expect("bounded simplex");
    tuples
        .into_iter()
        .map(|lam| {
            let total: BigInt = lam.iter().sum();
            let mut fact = BigInt::one();
            for li in &lam {
                let mut x = BigInt::one();
                while x <= *li {
                    fact *= &x;
                    x += 1;
                }
            }
            // -z * prod (-z)^(-lambda_i) / lambda_i!
            //   = -(-1)^(sum lambda) / (prod lambda_i!) * z^(1 - sum lambda).
            let sign = if total.is_even() {
                -Rat::one()
            } else {
                Rat::one()
            };
            let scalar = sign / Rat::from_integer(fact);
            let mut value = FactoredExpr::from_scalar(scalar);
            let z_exp = 1 - i64::try_from(&total).expect("small exponent");
            if z_exp != 0 {
                value
                    .mul_raw_factor(&zero_u, &Rat::one(), z_exp)
                    .expect("z factor");
            }
            let mut label = group.zero();
            for (i, li) in lam.iter().enumerate() {
                label = group.add(&label, &group.smul(li, &gens[i]));
            }
            JCoefficient {
                exponents: lam,
                label,
                value,
            }
        })
        .collect()
}

/// Optional perturbation of a single `a_(ij)` coefficient, used as a
/// negative control by the verification suite.
#[derive(Debug, Clone, Default)]
pub struct APerturbation {
    /// (slot index outside the cone, ray index in the cone, delta).
    pub tweak: Option<(usize, usize, Rat)>,
}

/// The same series computed through the q-parameterization: enumerate
/// nonnegative off-cone exponents, recover the on-cone coordinates from the
/// linear relation `lambda_j = -sum a_(ij) lambda_i`, and label the box by
/// the generator sum in `N(sigma)`. Keys are translated back to `(d, k)`
/// through the splitting.
pub fn iseries_restriction_form(
    fan: &StackyFan,
    ext: &SExtension,
    sigma: usize,
    omega: &[Rat],
    cutoff: &Rat,
    jobs: usize,
    perturb: &APerturbation,
) -> Result<ISeries, ExtError> {
    let n = fan.n_rays();
    let m = ext.len();
    let d = fan.dim();
    let cone = fan.max_cone(sigma).to_vec();
    let ws = fan.fixed_point_weights(sigma);
    // a_(ij) for off-cone slots, recomputed here from the ray images.
    let units = cone_units(fan, ext, sigma);
    let off_slots: Vec<usize> = units.iter().map(|(i, _)| *i).collect();
    let mut a: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
    for &i0 in &off_slots {
        let image: RatVector = if i0 < n {
            fan.ray_q(i0).clone()
        } else {
            ext.s_bar(fan, i0 - n)
        };
        for &j in &cone {
            let mut val = ws.pair(j, &image);
            if let Some((pi, pj, delta)) = &perturb.tweak {
                if *pi == i0 && *pj == j {
                    val += delta;
                }
            }
            a.insert((i0, j), val);
        }
    }
    // Quotient group and generator classes for the box labels.
    let quot = fan.quotient(&cone);
    assert!(quot.group.is_finite(), "N(sigma) is finite for a top cone");
    let mut class_to_box: BTreeMap<Vec<BigInt>, BoxElement> = BTreeMap::new();
    for b in fan.box_elements(&cone, true).expect("top cone") {
        class_to_box.insert(quot.proj.apply(&b.element), b);
    }
    let gen_class: BTreeMap<usize, Vec<BigInt>> = off_slots
        .iter()
        .map(|&i0| {
            let elem: Vec<BigInt> = if i0 < n {
                fan.ray(i0).to_vec()
            } else {
                ext.element(i0 - n).to_vec()
            };
            (i0, quot.proj.apply(&elem))
        })
        .collect();

    // Tuple enumeration with the same omega-degree bound as the direct
    // route; the degree of each unit comes from the splitting.
    let ell = off_slots.len();
    let mut degs = Vec::with_capacity(ell);
    for (_, unit) in &units {
        let (dp, kp) = ext.split(fan, unit).expect("integer k part");
        let mut deg = dot(omega, &dp);
        for kj in &kp {
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
    constraints.push(AffineIneq::le(degs, cutoff.clone()));
    let tuples = enumerate_lattice_points(ell, &constraints).expect("bounded simplex");

    let zero_u = vec![Rat::zero(); d];
    let computed = ordered_map(tuples, jobs, |tuple| {
        // Full lambda vector (true coefficients for the key).
        let mut lambda = vec![Rat::zero(); n + m];
        for (idx, &i0) in off_slots.iter().enumerate() {
            lambda[i0] = Rat::from_integer(tuple[idx].clone());
        }
        // The summand of the restriction form at +z.
        let mut expr = FactoredExpr::one();
        expr.mul_raw_factor(&zero_u, &Rat::one(), 1).expect("z");
        let mut vanished = false;
        for (idx, _i0) in off_slots.iter().enumerate() {
            // 1 / (lambda_i! z^lambda_i).
            let li = &tuple[idx];
            let mut fact = BigInt::one();
            let mut x = BigInt::one();
            while x <= *li {
                fact *= &x;
                x += 1;
            }
            expr = expr.mul_scalar(&(Rat::one() / Rat::from_integer(fact)));
            let z_exp = -i64::try_from(li).expect("small exponent");
            if z_exp != 0 {
                expr.mul_raw_factor(&zero_u, &Rat::one(), z_exp)
                    .expect("z power");
            }
        }
        // On-cone factors via lambda_j = -sum a_(ij) lambda_i.
        for &j in &cone {
            let mut lj = Rat::zero();
            for (idx, &i0) in off_slots.iter().enumerate() {
                lj -= Rat::from_integer(tuple[idx].clone()) * &a[&(i0, j)];
            }
            lambda[j] = lj.clone();
            let f = frac_part(&lj);
            let upper_num = numerator_upper(&f);
            if telescoped_ratio(&mut expr, ws.weight(j), &upper_num, &lj).is_none() {
                vanished = true;
                break;
            }
        }
        // Box label through N(sigma).
        let mut class = quot.group.zero();
        for (idx, &i0) in off_slots.iter().enumerate() {
            class = quot
                .group
                .add(&class, &quot.group.smul(&tuple[idx], &gen_class[&i0]));
        }
        let box_elem = class_to_box
            .get(&class)
            .expect("generator sums stay inside Box(sigma)")
            .clone();
        // Key (d, k) from the splitting of the unperturbed lambda.
        let mut true_lambda = lambda.clone();
        if perturb.tweak.is_some() {
            // Recompute the true on-cone coordinates for the key.
            for &j in &cone {
                let mut lj = Rat::zero();
                for (idx, &i0) in off_slots.iter().enumerate() {
                    let image: RatVector = if i0 < n {
                        fan.ray_q(i0).clone()
                    } else {
                        ext.s_bar(fan, i0 - n)
                    };
                    lj -= Rat::from_integer(tuple[idx].clone()) * ws.pair(j, &image);
                }
                true_lambda[j] = lj;
            }
        }
        let (dp, kp) = ext.split(fan, &true_lambda).expect("integer k part");
        let key = SeriesKey {
            box_elem: box_elem.element,
            d: dp,
            k: kp,
        };
        (key, if vanished { FactoredExpr::zero() } else { expr })
    });
    let mut coeffs = BTreeMap::new();
    for (key, expr) in computed {
        if expr.is_zero() {
            continue;
        }
        let clash = coeffs.insert(key, expr);
        assert!(clash.is_none(), "distinct tuples collide on a series key");
    }
    Ok(ISeries {
        sigma,
        omega: omega.to_vec(),
        cutoff: cutoff.clone(),
        coeffs,
    })
}

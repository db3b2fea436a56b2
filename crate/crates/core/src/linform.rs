//! Exact arithmetic for factored expressions: a rational scalar times a
//! multiset of Q-linear forms in the equivariant parameters `x1..xd` and `z`,
//! with integer exponents.
//!
//! Every I-function coefficient and every recursion coefficient is a pure
//! product of linear forms, so this representation is closed under all the
//! operations the verification needs (products, quotients, substitution of
//! `z`, residues at simple poles) and stays exact with no polynomial GCDs.
//! Sums are deliberately not supported.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlin::{render_rat, Rat, RatVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinformError {
    #[error("zero linear form supplied as a factor")]
    ZeroFactor,
    #[error("division by the zero expression")]
    DivisionByZeroExpr,
    #[error("substitution annihilates a denominator factor")]
    PoleHit,
    #[error("pole is not simple (order {order})")]
    NotSimplePole { order: i64 },
    #[error("evaluation point lies on a pole")]
    EvalPole,
}

/// A canonicalized linear form `a1*x1 + ... + ad*xd + c*z`: integer
/// coefficients, coprime, first nonzero coefficient (in reading order
/// `x1..xd, z`) positive. The scale extracted during canonicalization is
/// pushed into the owning expression's scalar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinForm {
    chi: Vec<BigInt>,
    z: BigInt,
}

impl LinForm {
    /// Canonicalizes rational coefficients. Returns the canonical form and
    /// the rational scale such that `input = scale * canonical`; `None` for
    /// the zero form.
    pub fn canonicalize(chi: &[Rat], z: &Rat) -> Option<(LinForm, Rat)> {
        let mut coeffs: Vec<Rat> = chi.to_vec();
        coeffs.push(z.clone());
        let first = coeffs.iter().find(|c| !c.is_zero())?;
        // Clear denominators, divide by content, orient by first coefficient.
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * &lcm / c.denom()).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let sign = if first.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let unit = &gcd * &sign;
        let canon: Vec<BigInt> = ints.iter().map(|x| x / &unit).collect();
        let scale = Rat::new(unit, lcm);
        let (z_c, chi_c) = (canon[canon.len() - 1].clone(), canon[..canon.len() - 1].to_vec());
        Some((LinForm { chi: chi_c, z: z_c }, scale))
    }

    pub fn pure_z(vars: usize) -> LinForm {
        LinForm {
            chi: vec![BigInt::zero(); vars],
            z: BigInt::one(),
        }
    }

    pub fn chi_coeffs(&self) -> &[BigInt] {
        &self.chi
    }

    pub fn z_coeff(&self) -> &BigInt {
        &self.z
    }

    pub fn vars(&self) -> usize {
        self.chi.len()
    }

    pub fn involves_z(&self) -> bool {
        !self.z.is_zero()
    }

    pub fn is_pure_z(&self) -> bool {
        self.involves_z() && self.chi.iter().all(Zero::is_zero)
    }

    pub fn chi_part_rat(&self) -> RatVector {
        self.chi.iter().map(|c| Rat::from_integer(c.clone())).collect()
    }

    pub fn eval(&self, chi: &[Rat], z: &Rat) -> Rat {
        assert_eq!(chi.len(), self.chi.len());
        let mut acc: Rat = self
            .chi
            .iter()
            .zip(chi)
            .map(|(c, v)| Rat::from_integer(c.clone()) * v)
            .sum();
        acc += Rat::from_integer(self.z.clone()) * z;
        acc
    }

    /// Renders as `a1*x1 + ... + c*z`, omitting zero terms.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.chi.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("{}*x{}", c, i + 1));
            }
        }
        if !self.z.is_zero() {
            parts.push(format!("{}*z", self.z));
        }
        parts.join(" + ")
    }
}

// Canonical ordering: by z-coefficient, then chi coefficients
// lexicographically. Used for deterministic printing and golden files.
impl Ord for LinForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.z, &self.chi).cmp(&(&other.z, &other.chi))
    }
}

impl PartialOrd for LinForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A rational scalar times a multiset of canonical linear forms with integer
/// exponents (positive = numerator, negative = denominator).
///
/// The zero expression is represented distinctly as scalar 0 with no
/// factors; otherwise the scalar is nonzero and no stored exponent is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredExpr {
    scalar: Rat,
    factors: BTreeMap<LinForm, i64>,
}

impl FactoredExpr {
    pub fn one() -> Self {
        FactoredExpr {
            scalar: Rat::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        FactoredExpr {
            scalar: Rat::zero(),
            factors: BTreeMap::new(),
        }
    }

    pub fn from_scalar(q: Rat) -> Self {
        if q.is_zero() {
            Self::zero()
        } else {
            FactoredExpr {
                scalar: q,
                factors: BTreeMap::new(),
            }
        }
    }

    /// Normalizes a raw scalar and factor list (rational coefficients per
    /// form). Rejects zero forms.
    pub fn normalize(
        scalar: Rat,
        raw_factors: &[(RatVector, Rat, i64)],
    ) -> Result<Self, LinformError> {
        let mut out = FactoredExpr {
            scalar,
            factors: BTreeMap::new(),
        };
        for (chi, z, exp) in raw_factors {
            let (form, scale) = LinForm::canonicalize(chi, z).ok_or(LinformError::ZeroFactor)?;
            out.push_canonical(form, scale, *exp);
        }
        if out.scalar.is_zero() {
            return Ok(Self::zero());
        }
        out.factors.retain(|_, e| *e != 0);
        Ok(out)
    }

    fn push_canonical(&mut self, form: LinForm, scale: Rat, exp: i64) {
        if exp == 0 {
            return;
        }
        let mut p = Rat::one();
        let a = if exp > 0 { exp } else { -exp } as u32;
        let base = scale;
        for _ in 0..a {
            p *= &base;
        }
        if exp > 0 {
            self.scalar *= p;
        } else {
            self.scalar /= p;
        }
        *self.factors.entry(form).or_insert(0) += exp;
    }

    /// Multiplies in a single factor with rational coefficients.
    pub fn mul_raw_factor(&mut self, chi: &[Rat], z: &Rat, exp: i64) -> Result<(), LinformError> {
        if self.is_zero() {
            return Ok(());
        }
        let (form, scale) = LinForm::canonicalize(chi, z).ok_or(LinformError::ZeroFactor)?;
        self.push_canonical(form, scale, exp);
        self.factors.retain(|_, e| *e != 0);
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn scalar(&self) -> &Rat {
        &self.scalar
    }

    pub fn factors(&self) -> impl Iterator<Item = (&LinForm, i64)> {
        self.factors.iter().map(|(f, &e)| (f, e))
    }

    pub fn exponent_of(&self, form: &LinForm) -> i64 {
        self.factors.get(form).copied().unwrap_or(0)
    }

    /// Sum of exponents: the homogeneous degree of the expression in
    /// `(x1..xd, z)`.
    pub fn total_degree(&self) -> i64 {
        self.factors.values().sum()
    }

    pub fn mul_scalar(&self, q: &Rat) -> FactoredExpr {
        if q.is_zero() || self.is_zero() {
            return Self::zero();
        }
        FactoredExpr {
            scalar: &self.scalar * q,
            factors: self.factors.clone(),
        }
    }

    pub fn mul(&self, other: &FactoredExpr) -> FactoredExpr {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut factors = self.factors.clone();
        for (f, e) in &other.factors {
            *factors.entry(f.clone()).or_insert(0) += e;
        }
        factors.retain(|_, e| *e != 0);
        FactoredExpr {
            scalar: &self.scalar * &other.scalar,
            factors,
        }
    }

    pub fn div(&self, other: &FactoredExpr) -> Result<FactoredExpr, LinformError> {
        if other.is_zero() {
            return Err(LinformError::DivisionByZeroExpr);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut factors = self.factors.clone();
        for (f, e) in &other.factors {
            *factors.entry(f.clone()).or_insert(0) -= e;
        }
        factors.retain(|_, e| *e != 0);
        Ok(FactoredExpr {
            scalar: &self.scalar / &other.scalar,
            factors,
        })
    }

    /// Substitutes `z -> target` where `target` is a linear form in the
    /// `x` variables only (given by its rational coefficients).
    pub fn substitute_z(&self, target: &[Rat]) -> Result<FactoredExpr, LinformError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let vars = target.len();
        let mut out = Self::from_scalar(self.scalar.clone());
        for (form, &exp) in &self.factors {
            assert_eq!(form.vars(), vars, "variable count mismatch");
            let zc = Rat::from_integer(form.z_coeff().clone());
            let chi: RatVector = form
                .chi
                .iter()
                .zip(target)
                .map(|(c, t)| Rat::from_integer(c.clone()) + &zc * t)
                .collect();
            match LinForm::canonicalize(&chi, &Rat::zero()) {
                Some((f, scale)) => out.push_canonical(f, scale, exp),
                None => {
                    if exp < 0 {
                        return Err(LinformError::PoleHit);
                    }
                    return Ok(Self::zero());
                }
            }
        }
        out.factors.retain(|_, e| *e != 0);
        Ok(out)
    }

    /// Substitutes `z -> -z` (flips the sign of every z coefficient).
    pub fn negate_z(&self) -> FactoredExpr {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = Self::from_scalar(self.scalar.clone());
        for (form, &exp) in &self.factors {
            let chi = form.chi_part_rat();
            let z = -Rat::from_integer(form.z_coeff().clone());
            let (f, scale) = LinForm::canonicalize(&chi, &z).expect("nonzero form stays nonzero");
            out.push_canonical(f, scale, exp);
        }
        out.factors.retain(|_, e| *e != 0);
        out
    }

    /// Residue at the simple pole `u + c*z = 0` (that is, at `z = -u/c`),
    /// where `u` is a linear form in `x` only and `c > 0`:
    /// `Res e dz = (1/c) * (e * (u + c z))|_{z = -u/c}`.
    ///
    /// Returns the zero expression when the pole does not divide the
    /// denominator; `NotSimplePole` when it divides with order >= 2.
    pub fn residue_at(&self, u: &[Rat], c: &Rat) -> Result<FactoredExpr, LinformError> {
        assert!(c.is_positive(), "pole shape requires c > 0");
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (form, scale) = LinForm::canonicalize(u, c).ok_or(LinformError::ZeroFactor)?;
        let exp = self.exponent_of(&form);
        if exp >= 0 {
            return Ok(Self::zero());
        }
        if exp < -1 {
            return Err(LinformError::NotSimplePole { order: -exp });
        }
        // e = g * scale / (u + c z) with g = e with the factor removed.
        let mut g = self.clone();
        g.factors.remove(&form);
        let point: RatVector = u.iter().map(|x| -x / c).collect();
        let result = g.substitute_z(&point)?;
        Ok(result.mul_scalar(&(&scale / c)))
    }

    /// Exact evaluation at rational values of `x` and `z`.
    pub fn eval(&self, chi: &[Rat], z: &Rat) -> Result<Rat, LinformError> {
        if self.is_zero() {
            return Ok(Rat::zero());
        }
        // Check denominators first so numerator zeros cannot mask a pole.
        for (form, &exp) in &self.factors {
            if exp < 0 && form.eval(chi, z).is_zero() {
                return Err(LinformError::EvalPole);
            }
        }
        let mut acc = self.scalar.clone();
        for (form, &exp) in &self.factors {
            let v = form.eval(chi, z);
            if v.is_zero() {
                return Ok(Rat::zero());
            }
            let a = exp.unsigned_abs();
            let mut p = Rat::one();
            for _ in 0..a {
                p *= &v;
            }
            if exp > 0 {
                acc *= p;
            } else {
                acc /= p;
            }
        }
        Ok(acc)
    }

    /// Denominator factors involving `z`, with their pole orders. The pure
    /// `z` factor is flagged as the pole at `z = 0`.
    pub fn classify_poles(&self) -> Vec<PoleInfo> {
        self.factors
            .iter()
            .filter(|(f, &e)| e < 0 && f.involves_z())
            .map(|(f, &e)| PoleInfo {
                form: f.clone(),
                order: -e,
                at_z_zero: f.is_pure_z(),
            })
            .collect()
    }

    /// Canonical text rendering `p/q * (a1*x1 + ... + c*z)^e * ...` with
    /// factors in canonical sorted order.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = render_rat(&self.scalar);
        for (form, &exp) in &self.factors {
            s.push_str(&format!(" * ({})^{}", form.render(), exp));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleInfo {
    pub form: LinForm,
    pub order: i64,
    pub at_z_zero: bool,
}

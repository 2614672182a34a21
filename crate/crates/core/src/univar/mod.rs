//! Complete factorization of univariate polynomials over Q into monic
//! irreducibles with multiplicities, and number-field construction from
//! irreducible factors.
//!
//! The route is classical: content and primitive part, Yun squarefree
//! decomposition, Berlekamp factorization modulo a deterministically chosen
//! small prime, quadratic Hensel lifting, and subset recombination against
//! a Mignotte bound. Fully exact and deterministic.

mod modp;
mod zassenhaus;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::densepoly::{divmod_univar, gcd_univar, make_monic, DensePoly};
use crate::field::{FieldError, NumberField, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnivarError {
    ZeroInput,
    NotUnivariate,
    NotMonic,
    Internal(String),
}

impl fmt::Display for UnivarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnivarError::ZeroInput => write!(f, "zero polynomial"),
            UnivarError::NotUnivariate => write!(f, "expected a univariate polynomial"),
            UnivarError::NotMonic => write!(f, "expected a monic polynomial"),
            UnivarError::Internal(m) => write!(f, "{m}"),
        }
    }
}

/// sigma * prod F_i^{e_i} with F_i monic irreducible over Q, pairwise
/// distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivarFactorization {
    pub content: Rational,
    pub factors: Vec<(DensePoly<Rational>, u32)>,
}

impl UnivarFactorization {
    /// Multiplies the factorization back out.
    pub fn reconstruct(&self) -> DensePoly<Rational> {
        let mut acc = DensePoly::constant(1, self.content.clone());
        for (f, e) in &self.factors {
            acc = acc.mul(&f.pow(*e));
        }
        acc
    }
}

/// Yun's squarefree decomposition: p = lc * prod part_i^i with the parts
/// monic, squarefree and pairwise coprime. Parts of degree zero are
/// omitted.
pub fn squarefree_decompose(
    p: &DensePoly<Rational>,
) -> Result<Vec<(DensePoly<Rational>, u32)>, UnivarError> {
    if p.nvars() != 1 {
        return Err(UnivarError::NotUnivariate);
    }
    if p.is_zero() {
        return Err(UnivarError::ZeroInput);
    }
    let f = make_monic(p);
    if f.degree_in(0) == 0 {
        return Ok(vec![]);
    }
    let fd = f.derivative(0);
    let g = gcd_univar(&f, &fd).map_err(|e| UnivarError::Internal(alloc::format!("{e}")))?;
    let mut w = exact_div(&f, &g)?;
    let mut y = exact_div(&fd, &g)?;
    let mut out = Vec::new();
    let mut i = 1u32;
    loop {
        let z = y.sub(&w.derivative(0));
        if w.degree_in(0) == 0 {
            break;
        }
        let gi = gcd_univar(&w, &z).map_err(|e| UnivarError::Internal(alloc::format!("{e}")))?;
        if gi.degree_in(0) > 0 {
            out.push((gi.clone(), i));
        }
        w = exact_div(&w, &gi)?;
        y = exact_div(&z, &gi)?;
        i += 1;
    }
    Ok(out)
}

fn exact_div(
    a: &DensePoly<Rational>,
    b: &DensePoly<Rational>,
) -> Result<DensePoly<Rational>, UnivarError> {
    let (q, r) =
        divmod_univar(a, b).map_err(|e| UnivarError::Internal(alloc::format!("{e}")))?;
    if !r.is_zero() {
        return Err(UnivarError::Internal("inexact division in Yun".into()));
    }
    Ok(q)
}

/// Complete irreducible factorization over Q. The content sigma is the
/// leading coefficient of the input; every factor is monic.
pub fn factor_rational(p: &DensePoly<Rational>) -> Result<UnivarFactorization, UnivarError> {
    if p.nvars() != 1 {
        return Err(UnivarError::NotUnivariate);
    }
    if p.is_zero() {
        return Err(UnivarError::ZeroInput);
    }
    let d = p.degree_in(0);
    let sigma = p
        .coeff(&[d])
        .cloned()
        .expect("leading coefficient of a nonzero polynomial");
    if d == 0 {
        return Ok(UnivarFactorization {
            content: sigma,
            factors: vec![],
        });
    }
    let squarefree = squarefree_decompose(p)?;
    let mut factors: Vec<(DensePoly<Rational>, u32)> = Vec::new();
    for (part, mult) in squarefree {
        for irreducible in factor_squarefree_monic(&part)? {
            factors.push((irreducible, mult));
        }
    }
    // Canonical order: by degree, then by coefficient sequence.
    factors.sort_by(|(a, _), (b, _)| {
        a.degree_in(0)
            .cmp(&b.degree_in(0))
            .then_with(|| a.univar_coeffs().cmp(&b.univar_coeffs()))
    });
    Ok(UnivarFactorization {
        content: sigma,
        factors,
    })
}

/// Monic irreducible factors of a monic squarefree rational polynomial.
fn factor_squarefree_monic(
    p: &DensePoly<Rational>,
) -> Result<Vec<DensePoly<Rational>>, UnivarError> {
    let d = p.degree_in(0);
    if d == 0 {
        return Ok(vec![]);
    }
    if d == 1 {
        return Ok(vec![p.clone()]);
    }
    // Clear denominators to a primitive integer polynomial.
    let coeffs = p.univar_coeffs();
    let mut denom_lcm = BigInt::one();
    for c in &coeffs {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            scaled
        })
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if content.is_zero() {
        content = BigInt::one();
    }
    if ints.last().unwrap().is_negative() {
        content = -content;
    }
    let primitive: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
    let factors = zassenhaus::factor_squarefree_primitive(&primitive);
    Ok(factors
        .into_iter()
        .map(|f| {
            let rat: Vec<Rational> = f.iter().map(|c| Rational::from_bigint(c.clone())).collect();
            make_monic(&DensePoly::univar_from_coeffs(&rat))
        })
        .collect())
}

/// Builds K = Q[u]/(F(u)) from a monic irreducible factor produced by the
/// factorizer; irreducibility is not re-checked.
pub fn make_extension(f: &DensePoly<Rational>) -> Result<Arc<NumberField>, UnivarError> {
    if f.nvars() != 1 {
        return Err(UnivarError::NotUnivariate);
    }
    if f.is_zero() {
        return Err(UnivarError::ZeroInput);
    }
    let d = f.degree_in(0);
    if f.coeff(&[d]) != Some(&Rational::one()) {
        return Err(UnivarError::NotMonic);
    }
    NumberField::new_unchecked(f.univar_coeffs()).map_err(|e: FieldError| match e {
        FieldError::Parse(m) => UnivarError::Internal(m),
        other => UnivarError::Internal(alloc::format!("{other}")),
    })
}

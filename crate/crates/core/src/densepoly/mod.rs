//! Brute-force oracle algebra on explicit polynomials.
//!
//! Terms are kept in a map from exponent vector to nonzero coefficient.
//! Everything here exists to verify the circuit-level constructions on
//! small instances, so the arithmetic is straightforward and the expansion
//! entry points are capped.

mod expand;
mod resultant;
mod univar_ops;

pub use expand::{
    expand, expand_capped, expand_single, expand_truncated, restrict_univar, ExpandCaps,
};
pub use resultant::{sylvester_resultant, SylvesterMatrix};
pub use univar_ops::{divmod_in_var, divmod_univar, gcd_univar, make_monic};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Field, Rational};

/// Errors from oracle-level polynomial arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    ZeroDivisor,
    BothZero,
    LeadingCoefficientNotInvertible,
    CapExceeded(String),
    DivGatePresent,
    Arity,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ZeroDivisor => write!(f, "division by the zero polynomial"),
            PolyError::BothZero => write!(f, "gcd of two zero polynomials"),
            PolyError::LeadingCoefficientNotInvertible => {
                write!(f, "leading coefficient is not an invertible constant")
            }
            PolyError::CapExceeded(m) => write!(f, "oracle cap exceeded: {m}"),
            PolyError::DivGatePresent => write!(f, "division gate present"),
            PolyError::Arity => write!(f, "mismatched variable counts"),
        }
    }
}

/// Explicit multivariate polynomial: exponent vector -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct DensePoly<F: Field> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> DensePoly<F> {
    pub fn zero(nvars: usize) -> Self {
        DensePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: F) -> Self {
        let mut p = Self::zero(nvars);
        if !value.is_zero() {
            p.terms.insert(vec![0; nvars], value);
        }
        p
    }

    pub fn one(nvars: usize, ctx: &F::Context) -> Self {
        Self::constant(nvars, F::one(ctx))
    }

    pub fn var(nvars: usize, index: usize, ctx: &F::Context) -> Self {
        let mut expo = vec![0u32; nvars];
        expo[index] = 1;
        Self::monomial(nvars, expo, F::one(ctx))
    }

    pub fn monomial(nvars: usize, expo: Vec<u32>, coeff: F) -> Self {
        assert_eq!(expo.len(), nvars);
        let mut p = Self::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(expo, coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn coeff(&self, expo: &[u32]) -> Option<&F> {
        self.terms.get(expo)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    fn insert_term(&mut self, expo: Vec<u32>, coeff: F) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(expo) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let expo: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_term(expo, c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_scalar(&self, k: &F) -> Self {
        let mut out = Self::zero(self.nvars);
        if k.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.mul(k));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let ctx = self.any_ctx();
        let mut acc = Self::one(self.nvars, &ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Drops every term of total degree above `k`.
    pub fn truncate_total_degree(&self, k: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() <= k {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Homogeneous component of total degree exactly `k`.
    pub fn hom_component(&self, k: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == k {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars);
        let ctx = self
            .terms
            .values()
            .next()
            .map(|v| v.context())
            .or_else(|| point.first().map(|p| p.context()))
            .expect("zero polynomial in zero variables has no context");
        let mut acc = F::zero(&ctx);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &pow) in point.iter().zip(e.iter()) {
                for _ in 0..pow {
                    term = term.mul(x);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Substitutes `value` for variable `var`, keeping the variable count.
    pub fn eval_var(&self, var: usize, value: &F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            for _ in 0..e[var] {
                coeff = coeff.mul(value);
            }
            let mut expo = e.clone();
            expo[var] = 0;
            out.insert_term(expo, coeff);
        }
        out
    }

    /// Coefficient of `var^k`, as a polynomial in the remaining variables
    /// (the variable count is preserved; `var` no longer occurs).
    pub fn coeff_of_var_power(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut expo = e.clone();
                expo[var] = 0;
                out.terms.insert(expo, c.clone());
            }
        }
        out
    }

    /// Coefficient vector in `var`, constant term first.
    pub fn coeff_vec_in_var(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var);
        (0..=d).map(|k| self.coeff_of_var_power(var, k)).collect()
    }

    /// Formal derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut expo = e.clone();
            expo[var] -= 1;
            let k = F::from_rational(&c.context(), &Rational::from_int(e[var] as i64));
            out.insert_term(expo, c.mul(&k));
        }
        out
    }

    /// Leading coefficient in `var` (zero polynomial for the zero input).
    pub fn leading_coeff_in_var(&self, var: usize) -> Self {
        self.coeff_of_var_power(var, self.degree_in(var))
    }

    /// Context of some coefficient; falls back on the rational embedding
    /// only being available through an explicit context elsewhere, so zero
    /// polynomials may not call this.
    fn any_ctx(&self) -> F::Context {
        self.terms
            .values()
            .next()
            .expect("context of a zero polynomial is unavailable; pass one explicitly")
            .context()
    }

    /// As `any_ctx` but safe for zero polynomials given a fallback.
    pub fn ctx_or(&self, fallback: &F::Context) -> F::Context {
        self.terms
            .values()
            .next()
            .map(|v| v.context())
            .unwrap_or_else(|| fallback.clone())
    }

    /// Maps coefficients into another field.
    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> DensePoly<G> {
        let mut out = DensePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let g = f(c);
            if !g.is_zero() {
                out.terms.insert(e.clone(), g);
            }
        }
        out
    }

    /// Canonical graded-lex rendering used in golden files: terms sorted by
    /// total degree, then lexicographically by exponent vector.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| a.cmp(b)).reverse()
        });
        let mut out = String::new();
        for (i, e) in keys.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let c = &self.terms[*e];
            out.push_str(&alloc::format!("{c}"));
            for (v, &pow) in e.iter().enumerate() {
                if pow == 0 {
                    continue;
                }
                out.push_str(&alloc::format!(" x{v}"));
                if pow > 1 {
                    out.push_str(&alloc::format!("^{pow}"));
                }
            }
        }
        out
    }
}

impl<F: Field> fmt::Debug for DensePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

impl DensePoly<Rational> {
    /// Univariate helper: builds from rational coefficients, constant first.
    pub fn univar_from_coeffs(coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(1);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(vec![i as u32], c.clone());
            }
        }
        p
    }

    pub fn univar_coeffs(&self) -> Vec<Rational> {
        assert_eq!(self.nvars, 1);
        let d = self.degree_in(0);
        let mut out = vec![Rational::zero(); d as usize + 1];
        for (e, c) in &self.terms {
            out[e[0] as usize] = c.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize, n: usize) -> DensePoly<Rational> {
        DensePoly::var(n, i, &())
    }

    #[test]
    fn arithmetic_merges_terms() {
        let p = x(0, 2).mul(&x(1, 2));
        let two_xy = p.add(&p);
        assert_eq!(two_xy.num_terms(), 1);
        assert_eq!(
            two_xy.coeff(&[1, 1]).unwrap(),
            &Rational::from_int(2)
        );
        let zero = two_xy.sub(&two_xy);
        assert!(zero.is_zero());
    }

    #[test]
    fn canonical_string_is_graded_lex() {
        // (x0 + 1)^2 = x0^2 + 2 x0 + 1
        let p = x(0, 1)
            .add(&DensePoly::one(1, &()))
            .pow(2);
        assert_eq!(p.to_canonical_string(), "1 x0^2 + 2 x0 + 1");
    }

    #[test]
    fn derivative_and_eval() {
        // d/dx0 (x0^3 + x0 x1) = 3 x0^2 + x1
        let p = x(0, 2).pow(3).add(&x(0, 2).mul(&x(1, 2)));
        let d = p.derivative(0);
        let v = d.evaluate(&[Rational::from_int(2), Rational::from_int(5)]);
        assert_eq!(v, Rational::from_int(17));
    }
}

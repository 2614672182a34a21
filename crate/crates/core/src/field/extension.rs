use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Field, FieldError, Rational};

/// A simple extension K = Q[u]/(A(u)) with A monic irreducible.
///
/// Irreducibility is not re-checked here: the only construction path in the
/// pipeline is `univar::make_extension`, which receives factors straight
/// from the univariate factorizer. `NumberField::new_unchecked` exists for
/// tests and for parsing serialized circuits, whose headers were produced
/// by the same pipeline.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct NumberField {
    /// Coefficients of A(u), constant term first; last entry is 1.
    modulus: Vec<Rational>,
}

impl NumberField {
    /// Builds K = Q[u]/(A(u)) from monic `modulus` (constant term first).
    pub fn new_unchecked(modulus: Vec<Rational>) -> Result<Arc<Self>, FieldError> {
        let trimmed = poly_trim(modulus);
        if trimmed.len() < 2 {
            return Err(FieldError::Parse("modulus must have degree >= 1".into()));
        }
        if trimmed.last().unwrap() != &Rational::one() {
            return Err(FieldError::Parse("modulus must be monic".into()));
        }
        Ok(Arc::new(NumberField { modulus: trimmed }))
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Coefficients of A(u), constant term first, length `degree() + 1`.
    pub fn modulus(&self) -> &[Rational] {
        &self.modulus
    }

    pub fn zero_elem(self: &Arc<Self>) -> NumberFieldElem {
        NumberFieldElem {
            coeffs: vec![Rational::zero(); self.degree()],
            parent: Arc::clone(self),
        }
    }

    pub fn from_rational(self: &Arc<Self>, r: &Rational) -> NumberFieldElem {
        let mut coeffs = vec![Rational::zero(); self.degree()];
        coeffs[0] = r.clone();
        NumberFieldElem {
            coeffs,
            parent: Arc::clone(self),
        }
    }

    /// The element u itself (the adjoined root).
    pub fn generator(self: &Arc<Self>) -> NumberFieldElem {
        let mut coeffs = vec![Rational::zero(); self.degree()];
        if self.degree() == 1 {
            // Degree-1 field: u is the rational root -modulus[0].
            coeffs[0] = -&self.modulus[0];
        } else {
            coeffs[1] = Rational::one();
        }
        NumberFieldElem {
            coeffs,
            parent: Arc::clone(self),
        }
    }

    /// Builds an element from coefficients of u^0 .. u^{r-1}; shorter input
    /// is zero-padded, longer input is reduced modulo A.
    pub fn element(self: &Arc<Self>, coeffs: Vec<Rational>) -> NumberFieldElem {
        let reduced = poly_rem(coeffs, &self.modulus);
        let mut c = reduced;
        c.resize(self.degree(), Rational::zero());
        NumberFieldElem {
            coeffs: c,
            parent: Arc::clone(self),
        }
    }

    /// Renders A(u) in expanded monomial form, e.g. `u^2 - 2`.
    pub fn modulus_string(&self) -> String {
        poly_to_string(&self.modulus)
    }
}

/// Operation selector for the checked arithmetic entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfOp {
    Add,
    Sub,
    Mul,
}

/// An element of K, canonical (reduced mod A), with a handle on its parent.
#[derive(Clone, Debug)]
pub struct NumberFieldElem {
    coeffs: Vec<Rational>,
    parent: Arc<NumberField>,
}

impl NumberFieldElem {
    pub fn parent(&self) -> &Arc<NumberField> {
        &self.parent
    }

    /// Coefficients of u^0 .. u^{r-1}.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn same_parent(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent
    }

    /// If the element lies in the image of Q, returns the rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| Field::is_zero(c)) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}

impl PartialEq for NumberFieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.same_parent(other) && self.coeffs == other.coeffs
    }
}

impl Eq for NumberFieldElem {}

impl PartialOrd for NumberFieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NumberFieldElem {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.parent
            .modulus
            .cmp(&other.parent.modulus)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for NumberFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Exact arithmetic in K reduced mod A(u). Errors on mismatched parents.
pub fn nf_arith(
    a: &NumberFieldElem,
    b: &NumberFieldElem,
    op: NfOp,
) -> Result<NumberFieldElem, FieldError> {
    if !a.same_parent(b) {
        return Err(FieldError::MismatchedParents);
    }
    Ok(match op {
        NfOp::Add => Field::add(a, b),
        NfOp::Sub => Field::sub(a, b),
        NfOp::Mul => Field::mul(a, b),
    })
}

/// Inverse in K via the extended Euclidean algorithm over Q[u].
pub fn nf_inverse(a: &NumberFieldElem) -> Result<NumberFieldElem, FieldError> {
    a.inverse()
}

impl Field for NumberFieldElem {
    type Context = Arc<NumberField>;

    fn context(&self) -> Arc<NumberField> {
        Arc::clone(&self.parent)
    }

    fn zero(ctx: &Arc<NumberField>) -> Self {
        ctx.zero_elem()
    }

    fn one(ctx: &Arc<NumberField>) -> Self {
        ctx.from_rational(&Rational::one())
    }

    fn from_rational(ctx: &Arc<NumberField>, r: &Rational) -> Self {
        ctx.from_rational(r)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Field::is_zero)
    }

    fn add(&self, other: &Self) -> Self {
        assert!(self.same_parent(other), "mismatched parent fields");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        NumberFieldElem {
            coeffs,
            parent: Arc::clone(&self.parent),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        assert!(self.same_parent(other), "mismatched parent fields");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        NumberFieldElem {
            coeffs,
            parent: Arc::clone(&self.parent),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        assert!(self.same_parent(other), "mismatched parent fields");
        let r = self.parent.degree();
        let mut prod = vec![Rational::zero(); 2 * r - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Field::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if Field::is_zero(b) {
                    continue;
                }
                prod[i + j] = &prod[i + j] + &(a * b);
            }
        }
        let mut coeffs = poly_rem(prod, &self.parent.modulus);
        coeffs.resize(r, Rational::zero());
        NumberFieldElem {
            coeffs,
            parent: Arc::clone(&self.parent),
        }
    }

    fn neg(&self) -> Self {
        NumberFieldElem {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            parent: Arc::clone(&self.parent),
        }
    }

    fn inverse(&self) -> Result<Self, FieldError> {
        if Field::is_zero(self) {
            return Err(FieldError::NotInvertible);
        }
        // Extended Euclid on (a, A): s*a + t*A = gcd = const, so a^-1 = s/const.
        let a = poly_trim(self.coeffs.clone());
        let (g, s) = poly_ext_gcd(&a, &self.parent.modulus);
        if g.len() != 1 {
            // A irreducible makes this unreachable for nonzero a.
            return Err(FieldError::NotInvertible);
        }
        let inv_g = g[0].recip()?;
        let scaled: Vec<Rational> = s.iter().map(|c| c * &inv_g).collect();
        let mut coeffs = poly_rem(scaled, &self.parent.modulus);
        coeffs.resize(self.parent.degree(), Rational::zero());
        Ok(NumberFieldElem {
            coeffs,
            parent: Arc::clone(&self.parent),
        })
    }

    fn desc_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.desc_bits()).sum()
    }
}

// --- small univariate helpers over Q (coefficients constant-term first) ---

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && Field::is_zero(p.last().unwrap()) {
        p.pop();
    }
    if p.is_empty() {
        p.push(Rational::zero());
    }
    p
}

fn poly_is_zero(p: &[Rational]) -> bool {
    p.iter().all(Field::is_zero)
}

/// Remainder of `p` modulo monic-leading `m`.
fn poly_rem(p: Vec<Rational>, m: &[Rational]) -> Vec<Rational> {
    let mut r = poly_trim(p);
    let dm = m.len() - 1;
    let lead = m.last().unwrap();
    while r.len() - 1 >= dm && !poly_is_zero(&r) {
        let shift = r.len() - 1 - dm;
        let factor = r.last().unwrap() / lead;
        for (i, mc) in m.iter().enumerate() {
            let idx = i + shift;
            r[idx] = &r[idx] - &(&factor * mc);
        }
        r = poly_trim(r);
        if r.len() == 1 && Field::is_zero(&r[0]) {
            break;
        }
    }
    r
}

/// Returns (gcd, s) with s*a ≡ gcd (mod b); gcd is trimmed, not normalized.
fn poly_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0 = poly_trim(a.to_vec());
    let mut r1 = poly_trim(b.to_vec());
    let mut s0 = vec![Rational::one()];
    let mut s1 = vec![Rational::zero()];
    while !poly_is_zero(&r1) {
        let (q, rem) = poly_divmod(&r0, &r1);
        let s_next = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s_next;
    }
    (r0, s0)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    let mut rem = poly_trim(a.to_vec());
    if rem.len() - 1 < db || poly_is_zero(&rem) {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() - 1 >= db && !poly_is_zero(&rem) {
        let shift = rem.len() - 1 - db;
        let factor = rem.last().unwrap() / lead;
        quot[shift] = factor.clone();
        for (i, bc) in b.iter().enumerate() {
            let idx = i + shift;
            rem[idx] = &rem[idx] - &(&factor * bc);
        }
        rem = poly_trim(rem);
        if rem.len() == 1 && Field::is_zero(&rem[0]) {
            break;
        }
    }
    (poly_trim(quot), rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ac) in a.iter().enumerate() {
        if Field::is_zero(ac) {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(ac * bc);
        }
    }
    poly_trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = out[i].add(c);
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] - c;
    }
    poly_trim(out)
}

/// Expanded monomial rendering of a u-polynomial, highest power first.
fn poly_to_string(p: &[Rational]) -> String {
    let mut out = String::new();
    for (e, c) in p.iter().enumerate().rev() {
        if Field::is_zero(c) {
            continue;
        }
        let neg = c < &Rational::zero();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push_str("-");
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coeff_part = if mag == Rational::one() && e > 0 {
            String::new()
        } else {
            format!("{mag}")
        };
        let var_part = match e {
            0 => String::new(),
            1 => "u".to_string(),
            _ => format!("u^{e}"),
        };
        match (coeff_part.is_empty(), var_part.is_empty()) {
            (true, _) => out.push_str(&var_part),
            (false, true) => out.push_str(&coeff_part),
            (false, false) => {
                out.push_str(&coeff_part);
                out.push('*');
                out.push_str(&var_part);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses the expanded monomial rendering produced by `modulus_string`.
pub fn parse_u_poly(s: &str) -> Result<Vec<Rational>, FieldError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(FieldError::Parse("empty polynomial".into()));
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut sign = false;
    let mut chars = s.chars().peekable();
    // Leading sign.
    if let Some('-') = chars.peek() {
        sign = true;
        chars.next();
    }
    while let Some(c) = chars.next() {
        if c == ' ' {
            match (chars.next(), chars.next()) {
                (Some(op @ ('+' | '-')), Some(' ')) => {
                    terms.push((sign, core::mem::take(&mut current)));
                    sign = op == '-';
                }
                _ => return Err(FieldError::Parse(s.to_string())),
            }
        } else {
            current.push(c);
        }
    }
    terms.push((sign, current));

    let mut coeffs: Vec<Rational> = Vec::new();
    for (neg, term) in terms {
        let term = term.trim();
        let (coeff_str, exp) = match term.split_once('u') {
            None => (term, 0usize),
            Some((c, rest)) => {
                let exp = if rest.is_empty() {
                    1
                } else {
                    let rest = rest
                        .strip_prefix('^')
                        .ok_or_else(|| FieldError::Parse(term.to_string()))?;
                    rest.parse::<usize>()
                        .map_err(|_| FieldError::Parse(term.to_string()))?
                };
                (c.trim_end_matches('*').trim(), exp)
            }
        };
        let mut coeff = if coeff_str.is_empty() {
            Rational::one()
        } else {
            Rational::parse(coeff_str)?
        };
        if neg {
            coeff = -&coeff;
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, Rational::zero());
        }
        coeffs[exp] = &coeffs[exp] + &coeff;
    }
    Ok(coeffs)
}

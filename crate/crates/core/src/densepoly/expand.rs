use alloc::format;
use alloc::vec::Vec;

use super::{DensePoly, PolyError};
use crate::circuit::{Circuit, Node};
use crate::field::Field;

/// Caps protecting the dense oracle from blowing up. The oracle exists for
/// desk-scale verification only; exceeding a cap is an explicit error, not
/// a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpandCaps {
    pub max_nvars: usize,
    pub max_total_degree: u32,
    pub max_terms: usize,
}

impl Default for ExpandCaps {
    fn default() -> Self {
        ExpandCaps {
            max_nvars: 4,
            max_total_degree: 12,
            max_terms: 100_000,
        }
    }
}

/// Exact dense form of a division-free circuit under the default caps.
pub fn expand<F: Field>(c: &Circuit<F>, degree_cap: u32) -> Result<Vec<DensePoly<F>>, PolyError> {
    let caps = ExpandCaps {
        max_total_degree: degree_cap,
        ..ExpandCaps::default()
    };
    expand_capped(c, &caps)
}

/// Exact dense form of every output of a division-free circuit.
pub fn expand_capped<F: Field>(
    c: &Circuit<F>,
    caps: &ExpandCaps,
) -> Result<Vec<DensePoly<F>>, PolyError> {
    expand_impl(c, caps, None)
}

/// Dense form truncated to total degree <= `k` at every gate. Exact for
/// the components of degree <= k even when the full polynomial is huge.
pub fn expand_truncated<F: Field>(
    c: &Circuit<F>,
    k: u32,
    caps: &ExpandCaps,
) -> Result<Vec<DensePoly<F>>, PolyError> {
    expand_impl(c, caps, Some(k))
}

fn expand_impl<F: Field>(
    c: &Circuit<F>,
    caps: &ExpandCaps,
    truncate: Option<u32>,
) -> Result<Vec<DensePoly<F>>, PolyError> {
    let n = c.nvars() as usize;
    if n > caps.max_nvars {
        return Err(PolyError::CapExceeded(format!(
            "{n} variables exceeds cap {}",
            caps.max_nvars
        )));
    }
    let mut values: Vec<DensePoly<F>> = Vec::with_capacity(c.nodes().len());
    for node in c.nodes() {
        let mut v = match node {
            Node::Var(i) => DensePoly::var(n, *i as usize, c.ctx()),
            Node::Const(k) => DensePoly::constant(n, k.clone()),
            Node::Add(l, r) => values[*l as usize].add(&values[*r as usize]),
            Node::Sub(l, r) => values[*l as usize].sub(&values[*r as usize]),
            Node::Mul(l, r) => values[*l as usize].mul(&values[*r as usize]),
            Node::Div(_, _) => return Err(PolyError::DivGatePresent),
        };
        if let Some(k) = truncate {
            v = v.truncate_total_degree(k);
        }
        if truncate.is_none() && v.total_degree() > caps.max_total_degree {
            return Err(PolyError::CapExceeded(format!(
                "degree {} exceeds cap {}",
                v.total_degree(),
                caps.max_total_degree
            )));
        }
        if v.num_terms() > caps.max_terms {
            return Err(PolyError::CapExceeded(format!(
                "{} terms exceeds cap {}",
                v.num_terms(),
                caps.max_terms
            )));
        }
        values.push(v);
    }
    Ok(c.outputs()
        .iter()
        .map(|&o| values[o as usize].clone())
        .collect())
}

/// Single-output convenience wrapper.
pub fn expand_single<F: Field>(c: &Circuit<F>, degree_cap: u32) -> Result<DensePoly<F>, PolyError> {
    let mut v = expand(c, degree_cap)?;
    if v.len() != 1 {
        return Err(PolyError::Arity);
    }
    Ok(v.pop().unwrap())
}

/// Restriction of a division-free circuit to a univariate in `var`: every
/// other variable is pinned to `point[i]` (the entry at `var` is ignored).
/// Evaluation runs directly in dense univariate arithmetic.
pub fn restrict_univar<F: Field>(
    c: &Circuit<F>,
    var: u32,
    point: &[F],
) -> Result<DensePoly<F>, PolyError> {
    if point.len() != c.nvars() as usize {
        return Err(PolyError::Arity);
    }
    let root = c.single_output().map_err(|_| PolyError::Arity)?;
    let ctx = c.ctx();
    let mut values: Vec<DensePoly<F>> = Vec::with_capacity(c.nodes().len());
    for node in c.nodes() {
        let v = match node {
            Node::Var(i) if *i == var => DensePoly::var(1, 0, ctx),
            Node::Var(i) => DensePoly::constant(1, point[*i as usize].clone()),
            Node::Const(k) => DensePoly::constant(1, k.clone()),
            Node::Add(l, r) => values[*l as usize].add(&values[*r as usize]),
            Node::Sub(l, r) => values[*l as usize].sub(&values[*r as usize]),
            Node::Mul(l, r) => values[*l as usize].mul(&values[*r as usize]),
            Node::Div(_, _) => return Err(PolyError::DivGatePresent),
        };
        values.push(v);
    }
    Ok(values[root as usize].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::field::Rational;

    #[test]
    fn expands_square() {
        // (x0 + 1)^2 -> {x0^2: 1, x0: 2, 1: 1}
        let mut b = CircuitBuilder::<Rational>::new((), 1);
        let x = b.var(0);
        let one = b.one();
        let s = b.add(x, one);
        let sq = b.mul(s, s);
        let c = b.finish_single(sq);
        let p = expand_single(&c, 8).unwrap();
        assert_eq!(p.coeff(&[2]), Some(&Rational::one()));
        assert_eq!(p.coeff(&[1]), Some(&Rational::from_int(2)));
        assert_eq!(p.coeff(&[0]), Some(&Rational::one()));
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn zero_constant_is_empty() {
        let mut b = CircuitBuilder::<Rational>::new((), 1);
        let z = b.zero();
        let c = b.finish_single(z);
        assert!(expand_single(&c, 4).unwrap().is_zero());
    }

    #[test]
    fn term_merge_across_shared_nodes() {
        // x0 x1 + x0 x1 -> {x0 x1: 2}
        let mut b = CircuitBuilder::<Rational>::new((), 2);
        let x0 = b.var(0);
        let x1 = b.var(1);
        let m = b.mul(x0, x1);
        let s = b.add(m, m);
        let c = b.finish_single(s);
        let p = expand_single(&c, 4).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coeff(&[1, 1]), Some(&Rational::from_int(2)));
    }

    #[test]
    fn caps_are_enforced() {
        let mut b = CircuitBuilder::<Rational>::new((), 1);
        let x = b.var(0);
        let p = b.pow(x, 16);
        let c = b.finish_single(p);
        assert!(matches!(expand_single(&c, 8), Err(PolyError::CapExceeded(_))));

        let mut b = CircuitBuilder::<Rational>::new((), 1);
        let x = b.var(0);
        let one = b.one();
        let d = b.div(one, x);
        let c = b.finish_single(d);
        assert!(matches!(expand_single(&c, 8), Err(PolyError::DivGatePresent)));
    }

    #[test]
    fn truncated_expansion_matches_low_degrees() {
        // (1 + x)^6 truncated at 2: 1 + 6x + 15x^2
        let mut b = CircuitBuilder::<Rational>::new((), 1);
        let x = b.var(0);
        let one = b.one();
        let s = b.add(one, x);
        let p = b.pow(s, 6);
        let c = b.finish_single(p);
        let t = expand_truncated(&c, 2, &ExpandCaps::default()).unwrap();
        let p = &t[0];
        assert_eq!(p.coeff(&[0]), Some(&Rational::one()));
        assert_eq!(p.coeff(&[1]), Some(&Rational::from_int(6)));
        assert_eq!(p.coeff(&[2]), Some(&Rational::from_int(15)));
        assert_eq!(p.num_terms(), 3);
    }
}

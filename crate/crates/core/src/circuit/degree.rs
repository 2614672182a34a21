use alloc::vec::Vec;

use super::{Circuit, Node};
use crate::field::Field;

/// Syntactic degree bound of a circuit viewed as num/den pairs.
/// Division-free circuits have `den = 0`. Values saturate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeBound {
    pub num: u64,
    pub den: u64,
}

impl DegreeBound {
    /// The bound for a division-free circuit; panics on a Div bound.
    pub fn polynomial(&self) -> u64 {
        debug_assert_eq!(self.den, 0, "degree bound taken over a division circuit");
        self.num
    }
}

fn leaf(deg: u64) -> DegreeBound {
    DegreeBound { num: deg, den: 0 }
}

fn addsub(a: DegreeBound, b: DegreeBound) -> DegreeBound {
    DegreeBound {
        num: (a.num.saturating_add(b.den)).max(b.num.saturating_add(a.den)),
        den: a.den.saturating_add(b.den),
    }
}

fn mul(a: DegreeBound, b: DegreeBound) -> DegreeBound {
    DegreeBound {
        num: a.num.saturating_add(b.num),
        den: a.den.saturating_add(b.den),
    }
}

fn div(a: DegreeBound, b: DegreeBound) -> DegreeBound {
    DegreeBound {
        num: a.num.saturating_add(b.den),
        den: a.den.saturating_add(b.num),
    }
}

/// Per-node total-degree bounds via standard numerator/denominator
/// propagation, maximized over outputs.
pub fn formal_degree<F: Field>(c: &Circuit<F>) -> DegreeBound {
    formal_degree_by(c, |_| 1)
}

/// Degree bound counting only variable `var` (degree in one variable).
pub fn formal_degree_in_var<F: Field>(c: &Circuit<F>, var: u32) -> DegreeBound {
    formal_degree_by(c, |v| if v == var { 1 } else { 0 })
}

fn formal_degree_by<F: Field>(c: &Circuit<F>, var_deg: impl Fn(u32) -> u64) -> DegreeBound {
    let mut bounds: Vec<DegreeBound> = Vec::with_capacity(c.nodes().len());
    for node in c.nodes() {
        let b = match node {
            Node::Var(v) => leaf(var_deg(*v)),
            Node::Const(_) => leaf(0),
            Node::Add(l, r) | Node::Sub(l, r) => {
                addsub(bounds[*l as usize], bounds[*r as usize])
            }
            Node::Mul(l, r) => mul(bounds[*l as usize], bounds[*r as usize]),
            Node::Div(l, r) => div(bounds[*l as usize], bounds[*r as usize]),
        };
        bounds.push(b);
    }
    let mut out = leaf(0);
    for &o in c.outputs() {
        let b = bounds[o as usize];
        out.num = out.num.max(b.num);
        out.den = out.den.max(b.den);
    }
    out
}

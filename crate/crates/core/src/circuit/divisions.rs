use alloc::vec::Vec;

use super::{Circuit, CircuitBuilder, CircuitError, Node, NodeId};
use crate::field::Field;

/// Division elimination: rewrites a single-output circuit as a pair of
/// division-free circuits with `c = num/den` as rational functions. Each
/// gate is tracked as a (numerator, denominator) pair; `den = 1` is kept
/// implicit so division-free regions do not grow at all.
///
/// Whether `den` is the zero polynomial is not checked here.
pub fn eliminate_divisions<F: Field>(
    c: &Circuit<F>,
) -> Result<(Circuit<F>, Circuit<F>), CircuitError> {
    let combined = eliminate_divisions_combined(c)?;
    let num = combined.restrict_to_output(0);
    let den = combined.restrict_to_output(1);
    Ok((num, den))
}

/// As `eliminate_divisions`, but returns one circuit with outputs
/// `[num, den]` sharing their common subgraph.
pub fn eliminate_divisions_combined<F: Field>(c: &Circuit<F>) -> Result<Circuit<F>, CircuitError> {
    let root = c.single_output()?;
    let mut b = CircuitBuilder::new(c.ctx().clone(), c.nvars()).with_yvar(c.yvar());
    // (num, den) with None meaning the implicit denominator 1.
    let mut pairs: Vec<(NodeId, Option<NodeId>)> = Vec::with_capacity(c.nodes().len());
    for node in c.nodes() {
        let pair = match node {
            Node::Var(v) => (b.var(*v), None),
            Node::Const(k) => (b.constant(k.clone()), None),
            Node::Add(l, r) => combine_linear(&mut b, pairs[*l as usize], pairs[*r as usize], false),
            Node::Sub(l, r) => combine_linear(&mut b, pairs[*l as usize], pairs[*r as usize], true),
            Node::Mul(l, r) => {
                let (ln, ld) = pairs[*l as usize];
                let (rn, rd) = pairs[*r as usize];
                (b.mul(ln, rn), mul_dens(&mut b, ld, rd))
            }
            Node::Div(l, r) => {
                let (ln, ld) = pairs[*l as usize];
                let (rn, rd) = pairs[*r as usize];
                let num = match rd {
                    None => ln,
                    Some(rd) => b.mul(ln, rd),
                };
                let den = match ld {
                    None => rn,
                    Some(ld) => b.mul(ld, rn),
                };
                (num, Some(den))
            }
        };
        pairs.push(pair);
    }
    let (num, den) = pairs[root as usize];
    let den = den.unwrap_or_else(|| b.one());
    Ok(b.finish(alloc::vec![num, den]).with_yvar(c.yvar()))
}

fn mul_dens<F: Field>(
    b: &mut CircuitBuilder<F>,
    l: Option<NodeId>,
    r: Option<NodeId>,
) -> Option<NodeId> {
    match (l, r) {
        (None, None) => None,
        (Some(d), None) | (None, Some(d)) => Some(d),
        (Some(a), Some(c)) => Some(b.mul(a, c)),
    }
}

fn combine_linear<F: Field>(
    b: &mut CircuitBuilder<F>,
    (ln, ld): (NodeId, Option<NodeId>),
    (rn, rd): (NodeId, Option<NodeId>),
    subtract: bool,
) -> (NodeId, Option<NodeId>) {
    let left = match rd {
        None => ln,
        Some(rd) => b.mul(ln, rd),
    };
    let right = match ld {
        None => rn,
        Some(ld) => b.mul(rn, ld),
    };
    let num = if subtract {
        b.sub(left, right)
    } else {
        b.add(left, right)
    };
    (num, mul_dens(b, ld, rd))
}

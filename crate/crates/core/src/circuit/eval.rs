use alloc::vec::Vec;

use super::{Circuit, CircuitError, Node, NodeId};
use crate::field::Field;

/// Evaluates every output exactly at `point`. A division gate whose
/// denominator evaluates to zero aborts with the offending gate id.
pub fn evaluate<F: Field>(c: &Circuit<F>, point: &[F]) -> Result<Vec<F>, CircuitError> {
    if point.len() != c.nvars() as usize {
        return Err(CircuitError::WrongArity {
            expected: c.nvars(),
            got: point.len() as u32,
        });
    }
    let mut values: Vec<F> = Vec::with_capacity(c.nodes().len());
    for (i, node) in c.nodes().iter().enumerate() {
        let v = match node {
            Node::Var(idx) => point[*idx as usize].clone(),
            Node::Const(k) => k.clone(),
            Node::Add(l, r) => values[*l as usize].add(&values[*r as usize]),
            Node::Sub(l, r) => values[*l as usize].sub(&values[*r as usize]),
            Node::Mul(l, r) => values[*l as usize].mul(&values[*r as usize]),
            Node::Div(l, r) => {
                let den = &values[*r as usize];
                if den.is_zero() {
                    return Err(CircuitError::DivisionByZero { gate: i as NodeId });
                }
                values[*l as usize].mul(&den.inverse().expect("nonzero denominator"))
            }
        };
        values.push(v);
    }
    Ok(c.outputs().iter().map(|&o| values[o as usize].clone()).collect())
}

/// Evaluates the single output of `c` at `point`.
pub fn evaluate_single<F: Field>(c: &Circuit<F>, point: &[F]) -> Result<F, CircuitError> {
    c.single_output()?;
    Ok(evaluate(c, point)?.pop().unwrap())
}

/// Per-node evaluation where zero denominators poison only the nodes that
/// depend on them. Used by the verification pass to inspect denominator
/// subcircuits even when sibling gates blow up.
pub fn evaluate_trace<F: Field>(c: &Circuit<F>, point: &[F]) -> Result<Vec<Option<F>>, CircuitError> {
    if point.len() != c.nvars() as usize {
        return Err(CircuitError::WrongArity {
            expected: c.nvars(),
            got: point.len() as u32,
        });
    }
    let mut values: Vec<Option<F>> = Vec::with_capacity(c.nodes().len());
    for node in c.nodes() {
        let v = match node {
            Node::Var(idx) => Some(point[*idx as usize].clone()),
            Node::Const(k) => Some(k.clone()),
            Node::Add(l, r) => binop(&values, *l, *r, |a, b| a.add(b)),
            Node::Sub(l, r) => binop(&values, *l, *r, |a, b| a.sub(b)),
            Node::Mul(l, r) => binop(&values, *l, *r, |a, b| a.mul(b)),
            Node::Div(l, r) => match (&values[*l as usize], &values[*r as usize]) {
                (Some(a), Some(b)) if !b.is_zero() => {
                    Some(a.mul(&b.inverse().expect("nonzero denominator")))
                }
                _ => None,
            },
        };
        values.push(v);
    }
    Ok(values)
}

fn binop<F: Field>(
    values: &[Option<F>],
    l: NodeId,
    r: NodeId,
    op: impl Fn(&F, &F) -> F,
) -> Option<F> {
    match (&values[l as usize], &values[r as usize]) {
        (Some(a), Some(b)) => Some(op(a, b)),
        _ => None,
    }
}

use alloc::vec::Vec;

use super::{Circuit, CircuitBuilder, CircuitError, Node, NodeId};
use crate::field::Field;

/// Circuits for the homogeneous components Hom_0 .. Hom_k of a
/// division-free circuit's single output, built into `b` by structural
/// decomposition of the DAG. `None` entries are identically zero.
///
/// Components of degree greater than `k` are discarded throughout, so the
/// construction stays polynomial in `k` and the DAG size even when the
/// computed polynomial has enormous degree (Newton approximants do).
/// Entries that are kept are exact: Hom_l of a product depends only on
/// components of degree at most l of its factors.
pub fn hom_table<F: Field>(
    b: &mut CircuitBuilder<F>,
    c: &Circuit<F>,
    k: usize,
) -> Result<Vec<Option<NodeId>>, CircuitError> {
    let root = c.single_output()?;
    assert_eq!(b.ctx(), c.ctx(), "builder and circuit contexts must agree");
    assert!(b.nvars() >= c.nvars(), "builder must cover the circuit's variables");
    let mut table: Vec<Vec<Option<NodeId>>> = Vec::with_capacity(c.nodes().len());
    for (i, node) in c.nodes().iter().enumerate() {
        let mut comps = alloc::vec![None; k + 1];
        match node {
            Node::Var(v) => {
                if k >= 1 {
                    comps[1] = Some(b.var(*v));
                }
            }
            Node::Const(val) => {
                if !val.is_zero() {
                    comps[0] = Some(b.constant(val.clone()));
                }
            }
            Node::Add(l, r) | Node::Sub(l, r) => {
                let subtract = matches!(node, Node::Sub(_, _));
                for deg in 0..=k {
                    let lv = table[*l as usize][deg];
                    let rv = table[*r as usize][deg];
                    comps[deg] = match (lv, rv) {
                        (None, None) => None,
                        (Some(a), None) => Some(a),
                        (None, Some(bb)) => {
                            if subtract {
                                let zero = b.zero();
                                Some(b.sub(zero, bb))
                            } else {
                                Some(bb)
                            }
                        }
                        (Some(a), Some(bb)) => Some(if subtract {
                            b.sub(a, bb)
                        } else {
                            b.add(a, bb)
                        }),
                    };
                }
            }
            Node::Mul(l, r) => {
                for deg in 0..=k {
                    let mut terms = Vec::new();
                    for a in 0..=deg {
                        if let (Some(lv), Some(rv)) =
                            (table[*l as usize][a], table[*r as usize][deg - a])
                        {
                            terms.push(b.mul(lv, rv));
                        }
                    }
                    comps[deg] = if terms.is_empty() {
                        None
                    } else {
                        Some(b.add_many(&terms))
                    };
                }
            }
            Node::Div(_, _) => {
                return Err(CircuitError::DivGatePresent { gate: i as NodeId });
            }
        }
        table.push(comps);
    }
    Ok(table[root as usize].clone())
}

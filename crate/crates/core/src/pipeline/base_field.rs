use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{
    eliminate_divisions_combined, map_constants, Circuit, CircuitBuilder, CircuitError, Node,
    NodeId,
};
use crate::field::{NumberField, NumberFieldElem, Rational};
use crate::minpoly::det_circuit;

/// Converts a single-output circuit over K = Q[u]/(A(u)) that computes a
/// polynomial in Q[x] into a circuit over Q (divisions allowed).
///
/// Route: eliminate divisions to a division-free (num, den) pair over K;
/// rewrite each as r coordinate circuits over Q in the power basis of u by
/// structural decomposition with reduction mod A at every product; invert
/// den's coordinate vector through the r x r multiplication matrix via
/// Cramer determinant circuits; take the u^0 coordinate of num times the
/// inverse. Degree-1 extensions short-circuit to substituting the rational
/// root for u.
///
/// Whether the computed value really lies in Q[x] is the caller's
/// responsibility; if not, the result computes the u^0 coordinate only.
pub fn to_base_field(c: &Circuit<NumberFieldElem>) -> Result<Circuit<Rational>, CircuitError> {
    c.single_output()?;
    let parent = c.ctx();
    let r = parent.degree();
    if r == 1 {
        // u is rational; substitute it everywhere.
        return Ok(map_constants(c, (), |k| {
            k.as_rational().expect("degree-1 field elements are rational")
        }));
    }
    let combined = eliminate_divisions_combined(c)?;
    let red = reduction_table(parent);

    let mut b = CircuitBuilder::<Rational>::new((), c.nvars());
    let coords = coordinate_decompose(&mut b, &combined, parent, &red)?;
    let num_coords = &coords[combined.outputs()[0] as usize];
    let den_coords = &coords[combined.outputs()[1] as usize];

    // Multiplication-by-den matrix in the power basis: column j is the
    // coordinate vector of den * u^j.
    let zero = b.zero();
    let mut m = vec![vec![zero; r]; r];
    for j in 0..r {
        // den * u^j: coordinates sum_a den_a * red[a + j]
        for (a, d) in den_coords.iter().enumerate() {
            let Some(d) = d else { continue };
            for s in 0..r {
                let coeff = &red[a + j][s];
                if coeff == &Rational::zero() {
                    continue;
                }
                let cn = b.rat(coeff);
                let term = b.mul(cn, *d);
                let prev = m[s][j];
                m[s][j] = b.add(prev, term);
            }
        }
    }
    let det = det_circuit(&mut b, &m);
    // Column determinants against e_0 give the numerators of the inverse
    // coordinates b_j.
    let one = b.one();
    let mut inv_nums: Vec<NodeId> = Vec::with_capacity(r);
    for j in 0..r {
        let mut replaced = m.clone();
        for (s, row) in replaced.iter_mut().enumerate() {
            row[j] = if s == 0 { one } else { zero };
        }
        inv_nums.push(det_circuit(&mut b, &replaced));
    }
    // u^0 coordinate of num * inv(den): sum_{a,j} num_a inv_j red[a+j][0],
    // all over the shared determinant denominator.
    let mut terms: Vec<NodeId> = Vec::new();
    for (a, n) in num_coords.iter().enumerate() {
        let Some(n) = n else { continue };
        for (j, inv) in inv_nums.iter().enumerate() {
            let coeff = &red[a + j][0];
            if coeff == &Rational::zero() {
                continue;
            }
            let cn = b.rat(coeff);
            let prod = b.mul(*n, *inv);
            terms.push(b.mul(cn, prod));
        }
    }
    let total = b.add_many(&terms);
    let out = b.div(total, det);
    let full = b.finish_single(out);
    Ok(full.restrict_to_output(0).with_yvar(c.yvar()))
}

/// red[t] = coordinates of u^t in the power basis, t = 0 .. 2r - 2.
fn reduction_table(parent: &Arc<NumberField>) -> Vec<Vec<Rational>> {
    let r = parent.degree();
    let modulus = parent.modulus();
    let mut red: Vec<Vec<Rational>> = Vec::with_capacity(2 * r - 1);
    for t in 0..r {
        let mut e = vec![Rational::zero(); r];
        e[t] = Rational::one();
        red.push(e);
    }
    for t in r..=(2 * r - 2) {
        // u^t = u * u^{t-1}; shift then reduce the overflow coordinate.
        let prev = red[t - 1].clone();
        let mut next = vec![Rational::zero(); r];
        for s in 1..r {
            next[s] = prev[s - 1].clone();
        }
        let overflow = prev[r - 1].clone();
        if overflow != Rational::zero() {
            // u^r = -sum_{s<r} A_s u^s
            for s in 0..r {
                let delta = &overflow * &modulus[s];
                next[s] = &next[s] - &delta;
            }
        }
        red.push(next);
    }
    red
}

/// Per-node coordinate vectors over Q (None = zero coordinate), for a
/// division-free circuit over K.
fn coordinate_decompose(
    b: &mut CircuitBuilder<Rational>,
    c: &Circuit<NumberFieldElem>,
    parent: &Arc<NumberField>,
    red: &[Vec<Rational>],
) -> Result<Vec<Vec<Option<NodeId>>>, CircuitError> {
    let r = parent.degree();
    let mut coords: Vec<Vec<Option<NodeId>>> = Vec::with_capacity(c.nodes().len());
    for (idx, node) in c.nodes().iter().enumerate() {
        let v: Vec<Option<NodeId>> = match node {
            Node::Var(i) => {
                let mut v = vec![None; r];
                v[0] = Some(b.var(*i));
                v
            }
            Node::Const(k) => k
                .coeffs()
                .iter()
                .map(|coef| {
                    if coef == &Rational::zero() {
                        None
                    } else {
                        Some(b.rat(coef))
                    }
                })
                .collect(),
            Node::Add(l, rr) | Node::Sub(l, rr) => {
                let subtract = matches!(node, Node::Sub(_, _));
                let lv = coords[*l as usize].clone();
                let rv = coords[*rr as usize].clone();
                lv.iter()
                    .zip(&rv)
                    .map(|(a, bb)| match (a, bb) {
                        (None, None) => None,
                        (Some(x), None) => Some(*x),
                        (None, Some(y)) => Some(if subtract {
                            let z = b.zero();
                            b.sub(z, *y)
                        } else {
                            *y
                        }),
                        (Some(x), Some(y)) => Some(if subtract { b.sub(*x, *y) } else { b.add(*x, *y) }),
                    })
                    .collect()
            }
            Node::Mul(l, rr) => {
                let lv = coords[*l as usize].clone();
                let rv = coords[*rr as usize].clone();
                // Convolution in u followed by reduction mod A.
                let mut acc: Vec<Vec<NodeId>> = vec![Vec::new(); r];
                for (a, x) in lv.iter().enumerate() {
                    let Some(x) = x else { continue };
                    for (bb, y) in rv.iter().enumerate() {
                        let Some(y) = y else { continue };
                        let prod = b.mul(*x, *y);
                        for s in 0..r {
                            let coeff = &red[a + bb][s];
                            if coeff == &Rational::zero() {
                                continue;
                            }
                            let term = if coeff == &Rational::one() {
                                prod
                            } else {
                                let cn = b.rat(coeff);
                                b.mul(cn, prod)
                            };
                            acc[s].push(term);
                        }
                    }
                }
                acc.into_iter()
                    .map(|terms| {
                        if terms.is_empty() {
                            None
                        } else {
                            Some(b.add_many(&terms))
                        }
                    })
                    .collect()
            }
            Node::Div(_, _) => {
                return Err(CircuitError::DivGatePresent { gate: idx as NodeId })
            }
        };
        coords.push(v);
    }
    Ok(coords)
}

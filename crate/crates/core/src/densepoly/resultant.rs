use alloc::vec::Vec;

use super::{DensePoly, PolyError};
use crate::field::Field;

/// The (D+d) x (D+d) Sylvester matrix of g (degree d in `var`) and h
/// (degree D in `var`): d rows of h's coefficient vector above D rows of
/// g's, each block shifted one column per row.
pub struct SylvesterMatrix<F: Field> {
    pub entries: Vec<Vec<DensePoly<F>>>,
}

impl<F: Field> SylvesterMatrix<F> {
    pub fn build(
        g: &DensePoly<F>,
        h: &DensePoly<F>,
        var: usize,
    ) -> Result<Self, PolyError> {
        if g.is_zero() || h.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        let n = g.nvars();
        assert_eq!(n, h.nvars());
        let d = g.degree_in(var) as usize;
        let dd = h.degree_in(var) as usize;
        let size = d + dd;
        let gc = g.coeff_vec_in_var(var);
        let hc = h.coeff_vec_in_var(var);
        let zero = DensePoly::zero(n);
        let mut entries = alloc::vec![alloc::vec![zero; size]; size];
        for row in 0..d {
            for (k, coeff) in hc.iter().enumerate() {
                entries[row][row + k] = coeff.clone();
            }
        }
        for row in 0..dd {
            for (k, coeff) in gc.iter().enumerate() {
                entries[d + row][row + k] = coeff.clone();
            }
        }
        Ok(SylvesterMatrix { entries })
    }

    /// Exact determinant: fraction-free Bareiss elimination when every
    /// entry is a constant, cofactor expansion over the polynomial ring
    /// otherwise (matrices here stay small).
    pub fn determinant(&self) -> DensePoly<F> {
        let size = self.entries.len();
        if size == 0 {
            // Empty matrix: both inputs constant in var; resultant is 1.
            unreachable!("sylvester matrix of constants is not built");
        }
        let all_const = self
            .entries
            .iter()
            .flatten()
            .all(|p| p.is_constant());
        if all_const {
            let n = self.entries[0][0].nvars();
            let ctx = self
                .entries
                .iter()
                .flatten()
                .find_map(|p| p.terms().next().map(|(_, c)| c.context()));
            let ctx = match ctx {
                Some(c) => c,
                None => return DensePoly::zero(n), // all-zero matrix
            };
            let scalars: Vec<Vec<F>> = self
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|p| {
                            p.terms()
                                .next()
                                .map(|(_, c)| c.clone())
                                .unwrap_or_else(|| F::zero(&ctx))
                        })
                        .collect()
                })
                .collect();
            let det = bareiss_det(scalars, &ctx);
            DensePoly::constant(n, det)
        } else {
            cofactor_det(&self.entries)
        }
    }
}

/// Resultant of g and h with respect to `var`, exactly as the Sylvester
/// determinant in the layout above. Errors on zero inputs.
///
/// When both inputs are constant in `var` the matrix is empty and the
/// resultant is 1 by convention.
pub fn sylvester_resultant<F: Field>(
    g: &DensePoly<F>,
    h: &DensePoly<F>,
    var: usize,
) -> Result<DensePoly<F>, PolyError> {
    if g.is_zero() || h.is_zero() {
        return Err(PolyError::ZeroDivisor);
    }
    if g.degree_in(var) == 0 && h.degree_in(var) == 0 {
        let ctx = g
            .terms()
            .next()
            .map(|(_, c)| c.context())
            .expect("nonzero polynomial");
        return Ok(DensePoly::one(g.nvars(), &ctx));
    }
    Ok(SylvesterMatrix::build(g, h, var)?.determinant())
}

/// Fraction-free Gaussian elimination; exact over any field.
fn bareiss_det<F: Field>(mut m: Vec<Vec<F>>, ctx: &F::Context) -> F {
    let n = m.len();
    if n == 0 {
        return F::one(ctx);
    }
    let mut sign_flip = false;
    let mut prev = F::one(ctx);
    for i in 0..n.saturating_sub(1) {
        if m[i][i].is_zero() {
            match (i + 1..n).find(|&r| !m[r][i].is_zero()) {
                Some(r) => {
                    m.swap(i, r);
                    sign_flip = !sign_flip;
                }
                None => return F::zero(ctx),
            }
        }
        for j in i + 1..n {
            for k in i + 1..n {
                let num = m[i][i].mul(&m[j][k]).sub(&m[j][i].mul(&m[i][k]));
                m[j][k] = num
                    .div(&prev)
                    .expect("bareiss pivot divides exactly");
            }
        }
        prev = m[i][i].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

/// Cofactor expansion along the first row, over the polynomial ring.
fn cofactor_det<F: Field>(m: &[Vec<DensePoly<F>>]) -> DensePoly<F> {
    let n = m.len();
    let nv = m[0][0].nvars();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = DensePoly::zero(nv);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<DensePoly<F>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let sub = cofactor_det(&minor);
        let term = m[0][col].mul(&sub);
        acc = if col % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

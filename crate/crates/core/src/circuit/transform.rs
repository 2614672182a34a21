use alloc::vec::Vec;

use super::{Circuit, CircuitBuilder, CircuitError, Node, NodeId};
use crate::field::{Field, Rational};

/// One affine image `constant + sum coeff_i * var_i` over the target
/// variable set.
#[derive(Clone, Debug)]
pub struct AffineForm<F> {
    pub constant: F,
    pub terms: Vec<(u32, F)>,
}

impl<F: Field> AffineForm<F> {
    pub fn constant(value: F) -> Self {
        AffineForm {
            constant: value,
            terms: Vec::new(),
        }
    }

    pub fn var(ctx: &F::Context, index: u32) -> Self {
        AffineForm {
            constant: F::zero(ctx),
            terms: alloc::vec![(index, F::one(ctx))],
        }
    }

    /// `var_index + shift`
    pub fn shifted_var(ctx: &F::Context, index: u32, shift: F) -> Self {
        AffineForm {
            constant: shift,
            terms: alloc::vec![(index, F::one(ctx))],
        }
    }
}

/// Per-variable affine substitution into a possibly enlarged variable set.
#[derive(Clone, Debug)]
pub struct AffineMap<F> {
    pub new_nvars: u32,
    pub new_yvar: Option<u32>,
    /// `images[i]` is the form substituted for old variable i.
    pub images: Vec<AffineForm<F>>,
}

impl<F: Field> AffineMap<F> {
    /// The identity on `nvars` variables.
    pub fn identity(ctx: &F::Context, nvars: u32) -> Self {
        AffineMap {
            new_nvars: nvars,
            new_yvar: None,
            images: (0..nvars).map(|i| AffineForm::var(ctx, i)).collect(),
        }
    }

    /// x_i -> x_i + a_i (same variable set).
    pub fn shift(ctx: &F::Context, shifts: &[F]) -> Self {
        AffineMap {
            new_nvars: shifts.len() as u32,
            new_yvar: None,
            images: shifts
                .iter()
                .enumerate()
                .map(|(i, a)| AffineForm::shifted_var(ctx, i as u32, a.clone()))
                .collect(),
        }
    }

    /// x_i -> x_i + alpha_i * y with y a fresh last variable.
    pub fn adjoin_y(ctx: &F::Context, alpha: &[F]) -> Self {
        let n = alpha.len() as u32;
        AffineMap {
            new_nvars: n + 1,
            new_yvar: Some(n),
            images: alpha
                .iter()
                .enumerate()
                .map(|(i, a)| AffineForm {
                    constant: F::zero(ctx),
                    terms: alloc::vec![(i as u32, F::one(ctx)), (n, a.clone())],
                })
                .collect(),
        }
    }
}

/// Substitutes the affine `images` for the circuit's variables.
/// The result computes `c` composed with the map; size grows by O(n) per
/// variable leaf.
pub fn substitute_affine<F: Field>(c: &Circuit<F>, map: &AffineMap<F>) -> Circuit<F> {
    assert_eq!(map.images.len(), c.nvars() as usize, "one image per variable");
    let mut b = CircuitBuilder::new(c.ctx().clone(), map.new_nvars);
    let mut var_images = Vec::with_capacity(map.images.len());
    for form in &map.images {
        let mut acc = if form.constant.is_zero() && !form.terms.is_empty() {
            None
        } else {
            Some(b.constant(form.constant.clone()))
        };
        for (v, coeff) in &form.terms {
            let var = b.var(*v);
            let term = if coeff.is_one() {
                var
            } else {
                let k = b.constant(coeff.clone());
                b.mul(k, var)
            };
            acc = Some(match acc {
                None => term,
                Some(a) => b.add(a, term),
            });
        }
        var_images.push(acc.expect("affine form has at least a constant"));
    }
    let node_map = b.import_subst(c, &var_images);
    let outputs = c.outputs().iter().map(|&o| node_map[o as usize]).collect();
    b.finish(outputs).with_yvar(map.new_yvar)
}

/// Multiplies every output by the nonzero constant `gamma`.
pub fn scale<F: Field>(c: &Circuit<F>, gamma: &F) -> Result<Circuit<F>, CircuitError> {
    if gamma.is_zero() {
        return Err(CircuitError::ScaleByZero);
    }
    let (mut b, map) = super::builder_from(c);
    let g = b.constant(gamma.clone());
    let outputs = c
        .outputs()
        .iter()
        .map(|&o| b.mul(g, map[o as usize]))
        .collect();
    Ok(b.finish(outputs).with_yvar(c.yvar()))
}

/// Pins variable `index` to `value` (the variable set is unchanged; the
/// variable simply no longer occurs).
pub fn set_var<F: Field>(c: &Circuit<F>, index: u32, value: F) -> Result<Circuit<F>, CircuitError> {
    if index >= c.nvars() {
        return Err(CircuitError::BadVariable { index });
    }
    let mut b = CircuitBuilder::new(c.ctx().clone(), c.nvars());
    let images: Vec<NodeId> = (0..c.nvars())
        .map(|i| {
            if i == index {
                b.constant(value.clone())
            } else {
                b.var(i)
            }
        })
        .collect();
    let node_map = b.import_subst(c, &images);
    let outputs = c.outputs().iter().map(|&o| node_map[o as usize]).collect();
    let yvar = if c.yvar() == Some(index) { None } else { c.yvar() };
    Ok(b.finish(outputs).with_yvar(yvar))
}

/// Shrinks the variable set to `new_nvars`; fails if a dropped variable
/// still occurs.
pub fn truncate_vars<F: Field>(c: &Circuit<F>, new_nvars: u32) -> Result<Circuit<F>, CircuitError> {
    for node in c.nodes() {
        if let Node::Var(v) = node {
            if *v >= new_nvars {
                return Err(CircuitError::BadVariable { index: *v });
            }
        }
    }
    let mut b = CircuitBuilder::new(c.ctx().clone(), new_nvars);
    let images: Vec<NodeId> = (0..c.nvars())
        .map(|i| if i < new_nvars { b.var(i) } else { NodeId::MAX })
        .collect();
    let node_map = b.import_subst(c, &images);
    let outputs = c.outputs().iter().map(|&o| node_map[o as usize]).collect();
    let yvar = c.yvar().filter(|&y| y < new_nvars);
    Ok(b.finish(outputs).with_yvar(yvar))
}

/// Rebuilds the circuit over another field by mapping every constant.
pub fn map_constants<F: Field, G: Field>(
    c: &Circuit<F>,
    ctx: G::Context,
    f: impl Fn(&F) -> G,
) -> Circuit<G> {
    let mut b = CircuitBuilder::<G>::new(ctx, c.nvars());
    let mut map: Vec<NodeId> = Vec::with_capacity(c.nodes().len());
    for node in c.nodes() {
        let id = match node {
            Node::Var(v) => b.var(*v),
            Node::Const(k) => {
                let g = f(k);
                b.constant(g)
            }
            Node::Add(l, r) => {
                let (l, r) = (map[*l as usize], map[*r as usize]);
                b.add(l, r)
            }
            Node::Sub(l, r) => {
                let (l, r) = (map[*l as usize], map[*r as usize]);
                b.sub(l, r)
            }
            Node::Mul(l, r) => {
                let (l, r) = (map[*l as usize], map[*r as usize]);
                b.mul(l, r)
            }
            Node::Div(l, r) => {
                let (l, r) = (map[*l as usize], map[*r as usize]);
                b.div(l, r)
            }
        };
        map.push(id);
    }
    let outputs = c.outputs().iter().map(|&o| map[o as usize]).collect();
    b.finish(outputs).with_yvar(c.yvar())
}

/// Embeds a circuit over Q into an extension field's constant domain.
pub fn embed_rational<G: Field>(c: &Circuit<Rational>, ctx: G::Context) -> Circuit<G> {
    map_constants(c, ctx.clone(), |r| G::from_rational(&ctx, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{evaluate_single, CircuitBuilder};

    fn sq_circuit() -> Circuit<Rational> {
        let mut b = CircuitBuilder::<Rational>::new((), 1);
        let x = b.var(0);
        let sq = b.mul(x, x);
        b.finish_single(sq)
    }

    #[test]
    fn shift_matches_expansion() {
        // x^2 with x -> x + 1 computes x^2 + 2x + 1
        let c = sq_circuit();
        let map = AffineMap::shift(&(), &[Rational::one()]);
        let shifted = substitute_affine(&c, &map);
        for t in -3..4 {
            let p = Rational::from_int(t);
            let got = evaluate_single(&shifted, core::slice::from_ref(&p)).unwrap();
            let expect = Rational::from_int((t + 1) * (t + 1));
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn adjoin_y_expands_product() {
        // x0*x1 with x_i -> x_i + y: coefficient of y^2 is 1
        let mut b = CircuitBuilder::<Rational>::new((), 2);
        let x0 = b.var(0);
        let x1 = b.var(1);
        let m = b.mul(x0, x1);
        let c = b.finish_single(m);
        let map = AffineMap::adjoin_y(&(), &[Rational::one(), Rational::one()]);
        let cy = substitute_affine(&c, &map);
        assert_eq!(cy.nvars(), 3);
        assert_eq!(cy.yvar(), Some(2));
        // (x0+y)(x1+y) at (2, 3, 5) = 7*8 = 56
        let v = evaluate_single(
            &cy,
            &[Rational::from_int(2), Rational::from_int(3), Rational::from_int(5)],
        )
        .unwrap();
        assert_eq!(v, Rational::from_int(56));
    }

    #[test]
    fn identity_map_preserves_value() {
        let c = sq_circuit();
        let map = AffineMap::identity(&(), 1);
        let c2 = substitute_affine(&c, &map);
        let p = [Rational::from_int(7)];
        assert_eq!(
            evaluate_single(&c, &p).unwrap(),
            evaluate_single(&c2, &p).unwrap()
        );
    }

    #[test]
    fn scale_and_set_var() {
        // scale(x+1, 2) = 2x+2
        let mut b = CircuitBuilder::<Rational>::new((), 1);
        let x = b.var(0);
        let one = b.one();
        let s = b.add(x, one);
        let c = b.finish_single(s);
        let doubled = scale(&c, &Rational::from_int(2)).unwrap();
        let v = evaluate_single(&doubled, &[Rational::from_int(4)]).unwrap();
        assert_eq!(v, Rational::from_int(10));
        assert!(scale(&c, &Rational::zero()).is_err());

        // set_var(x0*y + 3, y, 0) = 3
        let mut b = CircuitBuilder::<Rational>::new((), 2).with_yvar(Some(1));
        let x = b.var(0);
        let y = b.var(1);
        let m = b.mul(x, y);
        let three = b.int(3);
        let s = b.add(m, three);
        let c = b.finish_single(s).with_yvar(Some(1));
        let pinned = set_var(&c, 1, Rational::zero()).unwrap();
        assert_eq!(pinned.yvar(), None);
        let v = evaluate_single(&pinned, &[Rational::from_int(9), Rational::from_int(99)]).unwrap();
        assert_eq!(v, Rational::from_int(3));
    }

    #[test]
    fn set_var_keeps_divisions() {
        // (y^2 - x)/x with y := 0 evaluates to -1 off x = 0
        let mut b = CircuitBuilder::<Rational>::new((), 2);
        let x = b.var(0);
        let y = b.var(1);
        let y2 = b.mul(y, y);
        let num = b.sub(y2, x);
        let d = b.div(num, x);
        let c = b.finish_single(d);
        let pinned = set_var(&c, 1, Rational::zero()).unwrap();
        assert!(!pinned.is_division_free());
        let v = evaluate_single(&pinned, &[Rational::from_int(5), Rational::zero()]).unwrap();
        assert_eq!(v, Rational::from_int(-1));
        assert!(evaluate_single(&pinned, &[Rational::zero(), Rational::zero()]).is_err());
    }
}

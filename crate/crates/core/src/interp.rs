//! Interpolation-based circuit-to-circuit transforms: coefficient
//! extraction in one variable, homogeneous components and truncations, and
//! higher y-derivatives.
//!
//! A plan fixes sample points 0..D and the exact recombination weights
//! solved from the Vandermonde system; applying a plan instantiates the
//! input circuit once per sample point and takes the weighted sum.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Circuit, CircuitBuilder, CircuitError, NodeId};
use crate::field::{Field, Rational};

/// Sample points and recombination weights for degrees up to `degree`.
///
/// `weights[r][j]` is the coefficient of the value at point j when
/// recovering the degree-r coefficient: f_r = sum_j weights[r][j] f(a_j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpPlan {
    degree: usize,
    points: Vec<Rational>,
    weights: Vec<Vec<Rational>>,
}

impl InterpPlan {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn weights(&self, r: usize) -> &[Rational] {
        &self.weights[r]
    }
}

/// Builds the plan on points 0, 1, ..., D. Weight row r is the vector of
/// degree-r coefficients of the Lagrange basis polynomials, so applying the
/// plan to the monomial basis reproduces the identity exactly; this is
/// checked at construction.
pub fn make_plan(degree: usize) -> Arc<InterpPlan> {
    let points: Vec<Rational> = (0..=degree as i64).map(Rational::from_int).collect();
    let mut weights = vec![vec![Rational::zero(); degree + 1]; degree + 1];
    for (j, a_j) in points.iter().enumerate() {
        // Lagrange basis L_j = prod_{i != j} (x - a_i) / (a_j - a_i)
        let mut num = vec![Rational::one()]; // polynomial, constant first
        let mut denom = Rational::one();
        for (i, a_i) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            num = poly_mul_linear(&num, a_i);
            denom = &denom * &(a_j - a_i);
        }
        let inv = denom.recip().expect("distinct points");
        for (r, c) in num.iter().enumerate() {
            weights[r][j] = c * &inv;
        }
    }
    let plan = InterpPlan {
        degree,
        points,
        weights,
    };
    debug_assert!(plan_reconstructs_basis(&plan));
    Arc::new(plan)
}

/// Multiplies polynomial `p` (constant-first) by (x - root).
fn poly_mul_linear(p: &[Rational], root: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] = &out[i + 1] + c;
        out[i] = &out[i] - &(c * root);
    }
    out
}

/// Defining property: the plan applied to the basis {1, x, ..., x^D} gives
/// the identity matrix.
pub fn plan_reconstructs_basis(plan: &InterpPlan) -> bool {
    for r in 0..=plan.degree {
        for m in 0..=plan.degree {
            let mut acc = Rational::zero();
            for (j, a_j) in plan.points.iter().enumerate() {
                acc = &acc + &(&plan.weights[r][j] * &a_j.pow(m as u32));
            }
            let expect = if r == m {
                Rational::one()
            } else {
                Rational::zero()
            };
            if acc != expect {
                return false;
            }
        }
    }
    true
}

/// Write-once-per-degree cache of plans; the pipeline reuses the same
/// degrees many times.
#[derive(Default)]
pub struct PlanCache {
    plans: BTreeMap<usize, Arc<InterpPlan>>,
}

impl PlanCache {
    pub fn new() -> Self {
        PlanCache::default()
    }

    pub fn plan(&mut self, degree: usize) -> Arc<InterpPlan> {
        self.plans
            .entry(degree)
            .or_insert_with(|| make_plan(degree))
            .clone()
    }
}

/// Instantiates `c` once per plan point with variable `var` pinned to the
/// point, then recombines with the given weight rows. Returns one node per
/// weight row, all sharing the instantiations.
fn apply_plan_pin_var<F: Field>(
    b: &mut CircuitBuilder<F>,
    c: &Circuit<F>,
    var: u32,
    plan: &InterpPlan,
    weight_rows: &[&[Rational]],
) -> Result<Vec<NodeId>, CircuitError> {
    let root = c.single_output()?;
    let mut instantiations = Vec::with_capacity(plan.points.len());
    for alpha in &plan.points {
        let images: Vec<NodeId> = (0..c.nvars())
            .map(|i| if i == var { b.rat(alpha) } else { b.var(i) })
            .collect();
        let map = b.import_subst(c, &images);
        instantiations.push(map[root as usize]);
    }
    Ok(recombine(b, &instantiations, weight_rows))
}

/// As above but scaling every variable by the point: c(alpha_j * x).
fn apply_plan_scale_vars<F: Field>(
    b: &mut CircuitBuilder<F>,
    c: &Circuit<F>,
    plan: &InterpPlan,
    weight_rows: &[&[Rational]],
) -> Result<Vec<NodeId>, CircuitError> {
    let root = c.single_output()?;
    let mut instantiations = Vec::with_capacity(plan.points.len());
    for alpha in &plan.points {
        let alpha_node = b.rat(alpha);
        let images: Vec<NodeId> = (0..c.nvars())
            .map(|i| {
                let v = b.var(i);
                b.mul(alpha_node, v)
            })
            .collect();
        let map = b.import_subst(c, &images);
        instantiations.push(map[root as usize]);
    }
    Ok(recombine(b, &instantiations, weight_rows))
}

fn recombine<F: Field>(
    b: &mut CircuitBuilder<F>,
    values: &[NodeId],
    weight_rows: &[&[Rational]],
) -> Vec<NodeId> {
    weight_rows
        .iter()
        .map(|row| {
            let mut terms = Vec::new();
            for (j, w) in row.iter().enumerate() {
                if w == &Rational::zero() {
                    continue;
                }
                let wn = b.rat(w);
                terms.push(b.mul(wn, values[j]));
            }
            b.add_many(&terms)
        })
        .collect()
}

/// Circuit for the coefficient of `var^r`, in the remaining variables.
/// Requires r <= plan degree >= degree of c in `var`.
pub fn coefficient_of<F: Field>(
    c: &Circuit<F>,
    var: u32,
    r: usize,
    plan: &InterpPlan,
) -> Result<Circuit<F>, CircuitError> {
    if r > plan.degree {
        return Err(CircuitError::CapExceeded(alloc::format!(
            "coefficient index {r} exceeds plan degree {}",
            plan.degree
        )));
    }
    let mut b = CircuitBuilder::new(c.ctx().clone(), c.nvars());
    let out = apply_plan_pin_var(&mut b, c, var, plan, &[plan.weights(r)])?[0];
    Ok(b.finish_single(out).with_yvar(c.yvar()))
}

/// Circuit for Hom_i(c), the total-degree-i homogeneous component.
pub fn hom_component<F: Field>(
    c: &Circuit<F>,
    i: usize,
    plan: &InterpPlan,
) -> Result<Circuit<F>, CircuitError> {
    if i > plan.degree {
        return Err(CircuitError::CapExceeded(alloc::format!(
            "component {i} exceeds plan degree {}",
            plan.degree
        )));
    }
    let mut b = CircuitBuilder::new(c.ctx().clone(), c.nvars());
    let out = apply_plan_scale_vars(&mut b, c, plan, &[plan.weights(i)])?[0];
    Ok(b.finish_single(out).with_yvar(c.yvar()))
}

/// Circuit for Hom_{<= k}(c). One pass with the weight rows 0..=k summed,
/// so the cost matches a single component.
pub fn hom_truncate<F: Field>(
    c: &Circuit<F>,
    k: usize,
    plan: &InterpPlan,
) -> Result<Circuit<F>, CircuitError> {
    if k > plan.degree {
        return Err(CircuitError::CapExceeded(alloc::format!(
            "truncation {k} exceeds plan degree {}",
            plan.degree
        )));
    }
    let mut combined = vec![Rational::zero(); plan.degree + 1];
    for r in 0..=k {
        for (j, w) in plan.weights(r).iter().enumerate() {
            combined[j] = &combined[j] + w;
        }
    }
    let mut b = CircuitBuilder::new(c.ctx().clone(), c.nvars());
    let out = apply_plan_scale_vars(&mut b, c, plan, &[&combined])?[0];
    Ok(b.finish_single(out).with_yvar(c.yvar()))
}

/// Truncation in one variable: sum_{r <= t} var^r * coeff_r(c), realized
/// with one batch of plan instantiations and a shared power chain.
pub fn truncate_in_var<F: Field>(
    c: &Circuit<F>,
    var: u32,
    t: usize,
    plan: &InterpPlan,
) -> Result<Circuit<F>, CircuitError> {
    if t > plan.degree {
        return Err(CircuitError::CapExceeded(alloc::format!(
            "truncation {t} exceeds plan degree {}",
            plan.degree
        )));
    }
    let mut b = CircuitBuilder::new(c.ctx().clone(), c.nvars());
    let rows: Vec<&[Rational]> = (0..=t).map(|r| plan.weights(r)).collect();
    let coeff_nodes = apply_plan_pin_var(&mut b, c, var, plan, &rows)?;
    let vnode = b.var(var);
    let mut terms = Vec::with_capacity(coeff_nodes.len());
    let mut v_pow: Option<NodeId> = None;
    for (i, &cn) in coeff_nodes.iter().enumerate() {
        let term = if i == 0 {
            cn
        } else {
            let vp = match v_pow {
                None => vnode,
                Some(p) => b.mul(p, vnode),
            };
            v_pow = Some(vp);
            b.mul(cn, vp)
        };
        terms.push(term);
    }
    let out = b.add_many(&terms);
    Ok(b.finish_single(out).with_yvar(c.yvar()))
}

/// Circuit for the r-th partial derivative with respect to the circuit's
/// y variable (or an explicit variable), via coefficient extraction and
/// recombination with falling-factorial weights:
/// d^r f / dy^r = sum_i (i+r)!/i! * f_{i+r} * y^i.
pub fn partial_derivative<F: Field>(
    c: &Circuit<F>,
    var: u32,
    r: usize,
    plan: &InterpPlan,
) -> Result<Circuit<F>, CircuitError> {
    let d = plan.degree;
    let mut b = CircuitBuilder::new(c.ctx().clone(), c.nvars());
    if r > d {
        // Derivative order beyond the degree bound: identically zero.
        let z = b.zero();
        return Ok(b.finish_single(z).with_yvar(c.yvar()));
    }
    // Weight rows for the coefficients f_r .. f_d, scaled by (i+r)!/i!.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..=(d - r) {
        let mut ff = Rational::one();
        for t in (i + 1)..=(i + r) {
            ff = &ff * &Rational::from_int(t as i64);
        }
        let row: Vec<Rational> = plan
            .weights(i + r)
            .iter()
            .map(|w| w * &ff)
            .collect();
        rows.push(row);
    }
    let row_refs: Vec<&[Rational]> = rows.iter().map(|r| r.as_slice()).collect();
    let coeff_nodes = apply_plan_pin_var(&mut b, c, var, plan, &row_refs)?;
    // Recombine: sum_i coeff_i * y^i with a shared power chain.
    let yv = b.var(var);
    let mut terms = Vec::with_capacity(coeff_nodes.len());
    let mut y_pow: Option<NodeId> = None;
    for (i, &cn) in coeff_nodes.iter().enumerate() {
        let term = if i == 0 {
            cn
        } else {
            let yp = match y_pow {
                None => yv,
                Some(p) => b.mul(p, yv),
            };
            y_pow = Some(yp);
            b.mul(cn, yp)
        };
        terms.push(term);
    }
    let out = b.add_many(&terms);
    Ok(b.finish_single(out).with_yvar(c.yvar()))
}

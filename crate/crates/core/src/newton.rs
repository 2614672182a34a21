//! Newton-iteration construction of approximate-root circuits over a
//! field: Phi_0 = u, Phi_{j+1} = Phi_j - F(x, Phi_j) / slope with the
//! scalar slope dF/dy(0, u) inverted once and embedded as a constant.
//!
//! `lift` produces the recursion's circuit verbatim (no truncation; DAG
//! sharing keeps the growth additive per step). `hom_lift` tracks the
//! homogeneous components of the same polynomial up to a fixed order,
//! which is what minimal-polynomial recovery consumes.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::{Circuit, CircuitBuilder, CircuitError, NodeId};
use crate::densepoly::{self, DensePoly, ExpandCaps, PolyError};
use crate::field::Field;
use crate::interp::{self, PlanCache};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NewtonError {
    /// F(0, u) != 0 or the slope vanishes.
    BadStart,
    /// No distinguished y variable on the input circuit.
    NoYVar,
    Circuit(CircuitError),
    Oracle(PolyError),
    Internal(String),
}

impl fmt::Display for NewtonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NewtonError::BadStart => write!(f, "not a simple root: F(0,u) = 0 and slope != 0 required"),
            NewtonError::NoYVar => write!(f, "circuit has no designated y variable"),
            NewtonError::Circuit(e) => write!(f, "{e}"),
            NewtonError::Oracle(e) => write!(f, "{e}"),
            NewtonError::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl From<CircuitError> for NewtonError {
    fn from(e: CircuitError) -> Self {
        NewtonError::Circuit(e)
    }
}

impl From<PolyError> for NewtonError {
    fn from(e: PolyError) -> Self {
        NewtonError::Oracle(e)
    }
}

/// A completed lift: the approximate-root circuit plus the data that
/// produced it.
pub struct LiftState<F: Field> {
    pub f: Circuit<F>,
    pub u: F,
    pub inv_slope: F,
    pub k: usize,
    /// Circuit in the x variables only (the y variable is unused).
    pub phi: Circuit<F>,
}

/// F(0, y) as a dense univariate in y.
pub fn univariate_at_origin<F: Field>(f: &Circuit<F>) -> Result<DensePoly<F>, NewtonError> {
    let y = f.yvar().ok_or(NewtonError::NoYVar)?;
    let ctx = f.ctx();
    let zeros: Vec<F> = (0..f.nvars()).map(|_| F::zero(ctx)).collect();
    Ok(densepoly::restrict_univar(f, y, &zeros)?)
}

/// The Newton slope dF/dy(0, u), computed on the dense restriction.
pub fn slope_at<F: Field>(f: &Circuit<F>, u: &F) -> Result<F, NewtonError> {
    let p = univariate_at_origin(f)?;
    Ok(p.derivative(0).evaluate(core::slice::from_ref(u)))
}

/// True iff F(0, u) = 0 and dF/dy(0, u) != 0, both evaluated exactly.
pub fn check_start<F: Field>(f: &Circuit<F>, u: &F) -> Result<bool, NewtonError> {
    let p = univariate_at_origin(f)?;
    let value = p.evaluate(core::slice::from_ref(u));
    if !value.is_zero() {
        return Ok(false);
    }
    let slope = p.derivative(0).evaluate(core::slice::from_ref(u));
    Ok(!slope.is_zero())
}

/// Runs `k` recursion steps, returning the untruncated Phi_k circuit.
/// Each step instantiates F's DAG once with y wired to the previous
/// approximant, so the size grows additively by O(size F).
pub fn lift<F: Field>(f: &Circuit<F>, u: &F, k: usize) -> Result<LiftState<F>, NewtonError> {
    if !check_start(f, u)? {
        return Err(NewtonError::BadStart);
    }
    let y = f.yvar().ok_or(NewtonError::NoYVar)?;
    let froot = f.single_output()?;
    let slope = slope_at(f, u)?;
    let inv_slope = slope.inverse().expect("nonzero slope");

    let mut b = CircuitBuilder::<F>::new(f.ctx().clone(), f.nvars());
    let mut phi = b.constant(u.clone());
    let inv = b.constant(inv_slope.clone());
    for _ in 0..k {
        let images: Vec<NodeId> = (0..f.nvars())
            .map(|i| if i == y { phi } else { b.var(i) })
            .collect();
        let map = b.import_subst(f, &images);
        let value = map[froot as usize];
        let correction = b.mul(value, inv);
        phi = b.sub(phi, correction);
    }
    let phi_circuit = b.finish_single(phi);
    Ok(LiftState {
        f: f.clone(),
        u: u.clone(),
        inv_slope,
        k,
        phi: phi_circuit,
    })
}

/// Oracle check that F(x, Phi) vanishes modulo total degree k: composes
/// the circuits and expands with truncation at k, then tests the result
/// for zero. Exact; errors if the dense caps are exceeded.
pub fn residual_check<F: Field>(
    f: &Circuit<F>,
    phi: &Circuit<F>,
    k: usize,
    caps: &ExpandCaps,
) -> Result<bool, NewtonError> {
    let y = f.yvar().ok_or(NewtonError::NoYVar)?;
    let froot = f.single_output()?;
    let phiroot = phi.single_output()?;
    let mut b = CircuitBuilder::<F>::new(f.ctx().clone(), f.nvars());
    let phimap = b.import(phi);
    let phinode = phimap[phiroot as usize];
    let images: Vec<NodeId> = (0..f.nvars())
        .map(|i| if i == y { phinode } else { b.var(i) })
        .collect();
    let fmap = b.import_subst(f, &images);
    let composed = b.finish_single(fmap[froot as usize]);
    let truncated = densepoly::expand_truncated(&composed, k as u32, caps)?;
    Ok(truncated[0].is_zero())
}

/// Homogeneous components Hom_0..Hom_k of Phi_k, maintained directly
/// through the recursion. The builder accumulates every component circuit;
/// unchanged components are reused, and components of order at most j are
/// final after step j because each correction lies in <x>^{j+1}.
pub struct HomLift<F: Field> {
    pub builder: CircuitBuilder<F>,
    /// Hom components of Phi_k; None entries are identically zero.
    pub components: Vec<Option<NodeId>>,
    pub u: F,
    pub inv_slope: F,
    pub k: usize,
}

pub fn hom_lift<F: Field>(
    f: &Circuit<F>,
    u: &F,
    k: usize,
    ydeg: usize,
    cache: &mut PlanCache,
) -> Result<HomLift<F>, NewtonError> {
    if !check_start(f, u)? {
        return Err(NewtonError::BadStart);
    }
    let y = f.yvar().ok_or(NewtonError::NoYVar)?;
    let slope = slope_at(f, u)?;
    let inv_slope = slope.inverse().expect("nonzero slope");

    let mut b = CircuitBuilder::<F>::new(f.ctx().clone(), f.nvars());

    // Hom tables of the y-coefficients of F: coeff_table[i][a] is the
    // degree-a component of the coefficient of y^i.
    let plan = cache.plan(ydeg);
    let mut coeff_table: Vec<Vec<Option<NodeId>>> = Vec::with_capacity(ydeg + 1);
    for i in 0..=ydeg {
        let ci = interp::coefficient_of(f, y, i, &plan)?;
        let comps = crate::circuit::hom_table(&mut b, &ci, k)?;
        coeff_table.push(comps);
    }

    let inv = b.constant(inv_slope.clone());
    let mut phi: Vec<Option<NodeId>> = vec![None; k + 1];
    phi[0] = Some(b.constant(u.clone()));

    for step in 0..k {
        // Powers of the current approximant, truncated at k.
        let powers = power_tables(&mut b, &phi, ydeg, k);
        // Components of F(x, Phi), orders step+1..k only; lower orders
        // vanish identically by the recursion invariant.
        for ell in (step + 1)..=k {
            let mut terms: Vec<NodeId> = Vec::new();
            for i in 0..=ydeg {
                for a in 0..=ell {
                    if let (Some(c), Some(p)) = (coeff_table[i][a], powers[i][ell - a]) {
                        terms.push(b.mul(c, p));
                    }
                }
            }
            if terms.is_empty() {
                continue;
            }
            let r = b.add_many(&terms);
            let corr = b.mul(inv, r);
            phi[ell] = Some(match phi[ell] {
                None => {
                    let z = b.zero();
                    b.sub(z, corr)
                }
                Some(prev) => b.sub(prev, corr),
            });
        }
    }
    Ok(HomLift {
        builder: b,
        components: phi,
        u: u.clone(),
        inv_slope,
        k,
    })
}

/// powers[i][l] = Hom_l(phi^i) for i = 0..=max_pow, l = 0..=k, by repeated
/// truncated convolution. Shared entries deduplicate in the builder.
pub fn power_tables<F: Field>(
    b: &mut CircuitBuilder<F>,
    phi: &[Option<NodeId>],
    max_pow: usize,
    k: usize,
) -> Vec<Vec<Option<NodeId>>> {
    let mut powers: Vec<Vec<Option<NodeId>>> = Vec::with_capacity(max_pow + 1);
    let mut base = vec![None; k + 1];
    base[0] = Some(b.one());
    powers.push(base);
    for i in 1..=max_pow {
        let prev = &powers[i - 1];
        let mut next: Vec<Option<NodeId>> = vec![None; k + 1];
        #[allow(clippy::needless_range_loop)]
        for ell in 0..=k {
            let mut terms: Vec<NodeId> = Vec::new();
            for a in 0..=ell {
                if let (Some(x), Some(yv)) = (prev[a], phi[ell - a]) {
                    terms.push(b.mul(x, yv));
                }
            }
            if !terms.is_empty() {
                next[ell] = Some(b.add_many(&terms));
            }
        }
        powers.push(next);
    }
    powers
}

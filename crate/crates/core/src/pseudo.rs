//! Pseudo-quotients, the divisibility-to-identity-testing reduction, S_f,
//! and the pseudo-resultant as a numerator/denominator circuit pair.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::{
    evaluate_single, formal_degree, formal_degree_in_var, substitute_affine, AffineMap, Circuit,
    CircuitBuilder, CircuitError, NodeId,
};
use crate::field::{Field, Rational};
use crate::hitting::{Generator, HittingError, HittingSetSpec};
use crate::interp::{self, PlanCache};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PseudoError {
    /// g evaluates to zero at the requested center.
    BadCenter,
    /// No valid center found in the hitting stream.
    NoCenter,
    /// Degree bounds out of order (D < d).
    DegreeOrder { big: u64, small: u64 },
    /// g has identically zero constant y-coefficient; shift first.
    ZeroConstantCoefficient,
    Circuit(CircuitError),
    Hitting(HittingError),
    /// The identity test could not be completed definitively.
    Indefinite(String),
}

impl fmt::Display for PseudoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PseudoError::BadCenter => write!(f, "bad center: g vanishes there"),
            PseudoError::NoCenter => write!(f, "no valid center found in the hitting set"),
            PseudoError::DegreeOrder { big, small } => {
                write!(f, "degree bound {big} below divisor degree {small}")
            }
            PseudoError::ZeroConstantCoefficient => {
                write!(f, "g has zero constant y-coefficient; shift first")
            }
            PseudoError::Circuit(e) => write!(f, "{e}"),
            PseudoError::Hitting(e) => write!(f, "{e}"),
            PseudoError::Indefinite(m) => write!(f, "{m}"),
        }
    }
}

impl From<CircuitError> for PseudoError {
    fn from(e: CircuitError) -> Self {
        PseudoError::Circuit(e)
    }
}

impl From<HittingError> for PseudoError {
    fn from(e: HittingError) -> Self {
        PseudoError::Hitting(e)
    }
}

/// Deterministic polynomial identity testing on division-free circuits by
/// exhausting a degree-bounded grid (exact) or sampling a seeded stream
/// (definitive only for the nonzero verdict).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PitOracle {
    pub generator: Generator,
    pub grid_cap: u64,
}

impl Default for PitOracle {
    fn default() -> Self {
        PitOracle {
            generator: Generator::Grid,
            grid_cap: crate::hitting::DEFAULT_GRID_CAP,
        }
    }
}

impl PitOracle {
    pub fn seeded(seed: u64, count: u64) -> Self {
        PitOracle {
            generator: Generator::SeededRandom { seed, count },
            grid_cap: crate::hitting::DEFAULT_GRID_CAP,
        }
    }

    /// True iff the single-output division-free circuit computes the zero
    /// polynomial, per this oracle's point stream.
    pub fn is_zero<F: Field>(&self, c: &Circuit<F>) -> Result<bool, PseudoError> {
        let bound = formal_degree(c);
        if bound.den != 0 {
            return Err(PseudoError::Indefinite(
                "identity test requires a division-free circuit".into(),
            ));
        }
        let mut spec = HittingSetSpec::grid(c.nvars().max(1), bound.num);
        spec.grid_cap = self.grid_cap;
        spec.generator = self.generator;
        let stream = spec.points()?;
        let ctx = c.ctx().clone();
        for point in stream {
            let embedded: Vec<F> = point
                .iter()
                .take(c.nvars() as usize)
                .map(|r| F::from_rational(&ctx, r))
                .collect();
            let v = evaluate_single(c, &embedded)?;
            if !v.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The pseudo-quotient circuit with its construction metadata.
#[derive(Clone)]
pub struct PseudoQuotient<F: Field> {
    pub circuit: Circuit<F>,
    /// Degree bound used for the dividend.
    pub big_d: u64,
    /// Degree bound used for the divisor.
    pub small_d: u64,
    /// g evaluated at the center.
    pub beta: F,
    pub center: Vec<F>,
}

/// Pseudo-quotient of f and g around `center`, built from the truncated
/// geometric sum: Hom_{<= T}[(f/beta)(1 + gt + ... + gt^T)] with
/// gt = 1 - g/beta, all after shifting the center to the origin, then
/// shifted back. T = D - d from the provided or formal degree bounds.
///
/// When g divides f the result is exactly f/g for any T at least
/// deg f - deg g, so formal (over-)estimates are safe.
pub fn pseudo_quotient<F: Field>(
    f: &Circuit<F>,
    g: &Circuit<F>,
    center: &[F],
    degrees: Option<(u64, u64)>,
    cache: &mut PlanCache,
) -> Result<PseudoQuotient<F>, PseudoError> {
    let beta = evaluate_single(g, center)?;
    if beta.is_zero() {
        return Err(PseudoError::BadCenter);
    }
    let (big_d, small_d) = match degrees {
        Some(pair) => pair,
        None => (
            formal_degree(f).polynomial(),
            formal_degree(g).polynomial(),
        ),
    };
    if big_d < small_d {
        return Err(PseudoError::DegreeOrder {
            big: big_d,
            small: small_d,
        });
    }
    let t = (big_d - small_d) as usize;

    // Shift the center to the origin.
    let ctx = f.ctx().clone();
    let shift = AffineMap::shift(&ctx, center);
    let f_shifted = substitute_affine(f, &shift);
    let g_shifted = substitute_affine(g, &shift);

    // W = (f/beta) * sum_{i=0}^{T} (1 - g/beta)^i
    let mut b = CircuitBuilder::<F>::new(ctx.clone(), f.nvars());
    let fmap = b.import(&f_shifted);
    let gmap = b.import(&g_shifted);
    let froot = fmap[f_shifted.single_output()? as usize];
    let groot = gmap[g_shifted.single_output()? as usize];
    let beta_inv = b.constant(beta.inverse().expect("nonzero beta"));
    let one = b.one();
    let g_over_beta = b.mul(groot, beta_inv);
    let gt = b.sub(one, g_over_beta);
    let mut powers = Vec::with_capacity(t + 1);
    let mut acc = one;
    powers.push(acc);
    for _ in 0..t {
        acc = b.mul(acc, gt);
        powers.push(acc);
    }
    let series = b.add_many(&powers);
    let f_over_beta = b.mul(froot, beta_inv);
    let w = b.mul(f_over_beta, series);
    let w_circuit = b.finish_single(w);

    // Exact truncation needs a plan covering the formal degree of W.
    let plan_degree = formal_degree(&w_circuit).polynomial();
    let plan = cache.plan(plan_degree as usize);
    let truncated = interp::hom_truncate(&w_circuit, t, &plan)?;

    // Shift back.
    let neg_center: Vec<F> = center.iter().map(|a| a.neg()).collect();
    let unshift = AffineMap::shift(&ctx, &neg_center);
    let q = substitute_affine(&truncated, &unshift);
    Ok(PseudoQuotient {
        circuit: q,
        big_d,
        small_d,
        beta,
        center: center.to_vec(),
    })
}

/// The residual f - Q*g as a single circuit.
pub fn residual<F: Field>(
    f: &Circuit<F>,
    g: &Circuit<F>,
    q: &PseudoQuotient<F>,
) -> Result<Circuit<F>, PseudoError> {
    let mut b = CircuitBuilder::<F>::new(f.ctx().clone(), f.nvars());
    let froot = {
        let m = b.import(f);
        m[f.single_output()? as usize]
    };
    let groot = {
        let m = b.import(g);
        m[g.single_output()? as usize]
    };
    let qroot = {
        let m = b.import(&q.circuit);
        m[q.circuit.single_output()? as usize]
    };
    let qg = b.mul(qroot, groot);
    let r = b.sub(froot, qg);
    Ok(b.finish_single(r))
}

/// Divisibility via the pseudo-quotient reduction: g | f iff the residual
/// f - Q*g is identically zero. The center is searched in a grid stream
/// for g when not supplied.
pub fn divides<F: Field>(
    f: &Circuit<F>,
    g: &Circuit<F>,
    center: Option<&[F]>,
    pit: &PitOracle,
    cache: &mut PlanCache,
) -> Result<bool, PseudoError> {
    let owned_center: Vec<F>;
    let center = match center {
        Some(c) => c,
        None => {
            owned_center = find_center(g)?;
            &owned_center
        }
    };
    let q = pseudo_quotient(f, g, center, None, cache)?;
    let r = residual(f, g, &q)?;
    pit.is_zero(&r)
}

/// First point of g's degree-bound grid where g does not vanish.
pub fn find_center<F: Field>(g: &Circuit<F>) -> Result<Vec<F>, PseudoError> {
    let bound = formal_degree(g).polynomial();
    let spec = HittingSetSpec::grid(g.nvars().max(1), bound);
    let ctx = g.ctx().clone();
    for point in spec.stream_lazy() {
        let embedded: Vec<F> = point
            .iter()
            .take(g.nvars() as usize)
            .map(|r| F::from_rational(&ctx, r))
            .collect();
        if !evaluate_single(g, &embedded)?.is_zero() {
            return Ok(embedded);
        }
    }
    Err(PseudoError::NoCenter)
}

/// S_f = (d f / d y)^2.
pub fn s_f<F: Field>(
    f: &Circuit<F>,
    ydeg: u64,
    cache: &mut PlanCache,
) -> Result<Circuit<F>, PseudoError> {
    let y = f
        .yvar()
        .ok_or(PseudoError::Circuit(CircuitError::BadVariable { index: u32::MAX }))?;
    let plan = cache.plan(ydeg as usize);
    let df = interp::partial_derivative(f, y, 1, &plan)?;
    let mut b = CircuitBuilder::<F>::new(f.ctx().clone(), f.nvars());
    let m = b.import(&df);
    let root = m[df.single_output()? as usize];
    let sq = b.mul(root, root);
    Ok(b.finish_single(sq).with_yvar(f.yvar()))
}

/// Pseudo-resultant of f and g as the explicit pair (num, den):
/// R = S_f - Q*g where Q is the pseudo-quotient of S_f and g viewed as
/// univariates in y over the rational functions in x. Stored as
/// num = den*S_f - Q_num*g and den = g0^{T+1} with g0 the constant
/// y-coefficient of g and T = deg_y(S_f) - d.
pub struct PseudoResultant<F: Field> {
    pub num: Circuit<F>,
    pub den: Circuit<F>,
    /// y-degree of f.
    pub big_d: u64,
    /// y-degree of g.
    pub small_d: u64,
    /// Truncation order deg_y(S_f) - d actually used.
    pub truncation: u64,
}

impl<F: Field> PseudoResultant<F> {
    /// num * den as one division-free circuit, the object hit by points.
    pub fn product_circuit(&self) -> Circuit<F> {
        let mut b = CircuitBuilder::<F>::new(self.num.ctx().clone(), self.num.nvars());
        let nroot = {
            let m = b.import(&self.num);
            m[self.num.outputs()[0] as usize]
        };
        let droot = {
            let m = b.import(&self.den);
            m[self.den.outputs()[0] as usize]
        };
        let p = b.mul(nroot, droot);
        b.finish_single(p)
    }
}

/// Builds the pseudo-resultant pair for f, g monic in y with exact
/// y-degrees `deg_f_y >= 1` and `deg_g_y >= 1`.
///
/// The truncation order is deg_y(S_f) - d = (2 deg_f_y - 2) - d, the order
/// that makes Q the pseudo-quotient of S_f itself; with it, num vanishes
/// identically exactly when g divides S_f (in particular on planted
/// multiplicity >= 2 inputs), and den = g0^{T+1}.
pub fn pseudo_resultant<F: Field>(
    f: &Circuit<F>,
    g: &Circuit<F>,
    deg_f_y: u64,
    deg_g_y: u64,
    pit: &PitOracle,
    cache: &mut PlanCache,
) -> Result<PseudoResultant<F>, PseudoError> {
    let y = f
        .yvar()
        .ok_or(PseudoError::Circuit(CircuitError::BadVariable { index: u32::MAX }))?;
    let s = s_f(f, deg_f_y, cache)?;
    let s_ydeg = 2 * deg_f_y.saturating_sub(1);

    // g0: constant y-coefficient of g.
    let gplan = cache.plan(formal_degree_in_var(g, y).polynomial() as usize);
    let g0 = interp::coefficient_of(g, y, 0, &gplan)?;
    if pit.is_zero(&g0)? {
        return Err(PseudoError::ZeroConstantCoefficient);
    }

    let ctx = f.ctx().clone();
    if s_ydeg < deg_g_y {
        // Dividend already below the divisor: Q = 0, R = S_f, den = 1.
        let mut b = CircuitBuilder::<F>::new(ctx, f.nvars());
        let sroot = {
            let m = b.import(&s);
            m[s.single_output()? as usize]
        };
        let one = b.one();
        let combined = b.finish(alloc::vec![sroot, one]).with_yvar(f.yvar());
        return Ok(PseudoResultant {
            num: combined.restrict_to_output(0),
            den: combined.restrict_to_output(1),
            big_d: deg_f_y,
            small_d: deg_g_y,
            truncation: 0,
        });
    }
    let t = (s_ydeg - deg_g_y) as usize;

    // E = sum_{i=0}^{T} g0^{T-i} (g0 - g)^i ; W = S_f * E
    let mut b = CircuitBuilder::<F>::new(ctx.clone(), f.nvars());
    let sroot = {
        let m = b.import(&s);
        m[s.single_output()? as usize]
    };
    let groot = {
        let m = b.import(g);
        m[g.single_output()? as usize]
    };
    let g0root = {
        let m = b.import(&g0);
        m[g0.single_output()? as usize]
    };
    let diff = b.sub(g0root, groot);
    // Power chains for g0^j and (g0 - g)^i.
    let mut g0_pows: Vec<NodeId> = Vec::with_capacity(t + 1);
    let mut diff_pows: Vec<NodeId> = Vec::with_capacity(t + 1);
    let one = b.one();
    g0_pows.push(one);
    diff_pows.push(one);
    for i in 1..=t {
        let prev_g0 = g0_pows[i - 1];
        g0_pows.push(b.mul(prev_g0, g0root));
        let prev_diff = diff_pows[i - 1];
        diff_pows.push(b.mul(prev_diff, diff));
    }
    let terms: Vec<NodeId> = (0..=t)
        .map(|i| b.mul(g0_pows[t - i], diff_pows[i]))
        .collect();
    let series = b.add_many(&terms);
    let w = b.mul(sroot, series);
    let w_circuit = b
        .snapshot(alloc::vec![w])
        .with_yvar(f.yvar());

    // Q_num = truncation of W to y-degree <= T (coefficient extraction in
    // y only; x stays symbolic).
    let w_ydeg = formal_degree_in_var(&w_circuit, y).polynomial();
    let yplan = cache.plan(w_ydeg as usize);
    let q_num = interp::truncate_in_var(&w_circuit, y, t, &yplan)?;

    // den = g0^{T+1}; num = den*S_f - Q_num*g
    let mut b2 = CircuitBuilder::<F>::new(ctx, f.nvars());
    let sroot = {
        let m = b2.import(&s);
        m[s.single_output()? as usize]
    };
    let groot = {
        let m = b2.import(g);
        m[g.single_output()? as usize]
    };
    let g0root = {
        let m = b2.import(&g0);
        m[g0.single_output()? as usize]
    };
    let qroot = {
        let m = b2.import(&q_num);
        m[q_num.single_output()? as usize]
    };
    let den = b2.pow(g0root, (t + 1) as u32);
    let ds = b2.mul(den, sroot);
    let qg = b2.mul(qroot, groot);
    let num = b2.sub(ds, qg);
    let combined = b2.finish(alloc::vec![num, den]).with_yvar(f.yvar());
    Ok(PseudoResultant {
        num: combined.restrict_to_output(0).with_yvar(f.yvar()),
        den: combined.restrict_to_output(1),
        big_d: deg_f_y,
        small_d: deg_g_y,
        truncation: t as u64,
    })
}

/// Dense-side pseudo-resultant of univariate f(y), g(y), used as the
/// from-scratch oracle for substitution commutation: returns (num, den)
/// coefficient vectors with num = den*S_f - Q_num*g computed directly on
/// dense polynomials with the same truncation convention.
pub fn dense_pseudo_resultant_univar(
    f: &crate::densepoly::DensePoly<Rational>,
    g: &crate::densepoly::DensePoly<Rational>,
) -> Option<(
    crate::densepoly::DensePoly<Rational>,
    Rational,
)> {
    use crate::densepoly::DensePoly;
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let df = f.derivative(0);
    let s = df.mul(&df);
    let s_deg = s.degree_in(0);
    let d = g.degree_in(0);
    let g0 = g.coeff(&[0]).cloned().unwrap_or_else(Rational::zero);
    if g0 == Rational::zero() {
        return None;
    }
    if s_deg < d {
        return Some((s, Rational::one()));
    }
    let t = s_deg - d;
    let g0_poly = DensePoly::constant(1, g0.clone());
    let diff = g0_poly.sub(g);
    let mut series = DensePoly::zero(1);
    for i in 0..=t {
        let term = DensePoly::constant(1, g0.pow(t - i)).mul(&diff.pow(i));
        series = series.add(&term);
    }
    let w = s.mul(&series);
    // Truncate to y-degree <= t.
    let mut q_num = DensePoly::zero(1);
    for k in 0..=t {
        let c = w.coeff_of_var_power(0, k);
        let mono = DensePoly::monomial(1, alloc::vec![k], Rational::one());
        q_num = q_num.add(&c.mul(&mono));
    }
    let den = g0.pow(t + 1);
    let num = DensePoly::constant(1, den.clone())
        .mul(&s)
        .sub(&q_num.mul(g));
    Some((num, den))
}

//! Orchestration of the candidate-factor search: monicization along a
//! hitting direction, derivative and degree loops, per-root Newton lifting
//! and minimal-polynomial recovery, shift undo, y-elimination, and
//! base-field conversion.
//!
//! Errors inside one (point, root) pair are recorded and skipped; they
//! never abort a run. Output order is the deterministic loop order
//! (derivative index, degree guess, point, root), so reruns agree byte for
//! byte after serialization.

mod base_field;

pub use base_field::to_base_field;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::{
    formal_degree, scale, set_var, substitute_affine, truncate_vars, AffineMap, Circuit,
    CircuitError, NodeId,
};
use crate::densepoly::{restrict_univar, DensePoly, PolyError};
use crate::field::{Field, NumberFieldElem, Rational};
use crate::hitting::{project, Generator, HittingSetSpec};
use crate::interp::{self, PlanCache};
use crate::minpoly::{self, MinPolyError};
use crate::newton::{self, NewtonError};
use crate::univar::{self, UnivarError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineError {
    ZeroInput,
    DivisionGates,
    NotMonic(String),
    NoMonicWitness,
    Circuit(CircuitError),
    Oracle(PolyError),
    Univar(UnivarError),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::ZeroInput => write!(f, "input circuit computes the zero polynomial"),
            PipelineError::DivisionGates => write!(f, "input circuit must be division-free"),
            PipelineError::NotMonic(m) => write!(f, "not monic in y: {m}"),
            PipelineError::NoMonicWitness => {
                write!(f, "hitting stream exhausted without a monicizing direction")
            }
            PipelineError::Circuit(e) => write!(f, "{e}"),
            PipelineError::Oracle(e) => write!(f, "{e}"),
            PipelineError::Univar(e) => write!(f, "{e}"),
        }
    }
}

impl From<CircuitError> for PipelineError {
    fn from(e: CircuitError) -> Self {
        PipelineError::Circuit(e)
    }
}

impl From<PolyError> for PipelineError {
    fn from(e: PolyError) -> Self {
        PipelineError::Oracle(e)
    }
}

impl From<UnivarError> for PipelineError {
    fn from(e: UnivarError) -> Self {
        PipelineError::Univar(e)
    }
}

/// Point-loop termination policy. `Off` processes the whole stream (the
/// stream cap then applies). `On` stops a (derivative, degree) combination
/// after the first point whose origin restriction is squarefree (such a
/// point serves every multiplicity-one factor at once), or after
/// `max_productive` candidate-producing points, or unconditionally after
/// `max_points`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EarlyStop {
    Off,
    On {
        max_productive: usize,
        max_points: usize,
    },
}

impl EarlyStop {
    pub fn default_on() -> Self {
        EarlyStop::On {
            max_productive: 2,
            max_points: 8,
        }
    }
}

/// Which lift order / x-degree bound the recovery uses.
///
/// `FactorBound` exploits that monic factors of the monicized input have
/// total degree equal to their y-degree d, so x-degrees are bounded by d
/// and k = 2d^2 meets the uniqueness requirement. `PaperSquare` uses the
/// pseudocode's k = 2D^2 with x-degree bound D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KPolicy {
    FactorBound,
    PaperSquare,
}

impl KPolicy {
    fn parameters(&self, d: u32, total_degree: u32) -> (u32, u32) {
        match self {
            KPolicy::FactorBound => (d, 2 * d * d),
            KPolicy::PaperSquare => (total_degree, 2 * total_degree * total_degree),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Size parameter m for the factors of interest; sizes hitting-set
    /// specs, inert for grid streams.
    pub size_bound: u64,
    /// Total-degree override; derived by descent from the formal bound
    /// when absent.
    pub degree: Option<u32>,
    pub hitting: Generator,
    pub grid_cap: u64,
    pub early_stop: EarlyStop,
    pub k_policy: KPolicy,
    /// Also try degree guess d = D (the input itself irreducible).
    pub include_full_degree: bool,
    /// Skip (root, degree-guess) pairs no monic degree-d factor could
    /// produce, judged from the origin factorization.
    pub degree_filter: bool,
    /// Optional cap on the degree-guess loop; guesses above the cap only
    /// ever produce spurious entries when every factor of interest is
    /// known to be smaller, and their circuits grow like d^8.
    pub max_degree_guess: Option<u32>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            size_bound: 64,
            degree: None,
            hitting: Generator::Grid,
            grid_cap: crate::hitting::DEFAULT_GRID_CAP,
            early_stop: EarlyStop::default_on(),
            k_policy: KPolicy::FactorBound,
            include_full_degree: false,
            degree_filter: true,
            max_degree_guess: None,
        }
    }
}

/// Everything needed to replay one candidate's construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Provenance {
    pub deriv_index: u32,
    pub degree_guess: u32,
    /// Shift point a (length n).
    pub center: Vec<Rational>,
    /// Monic irreducible root polynomial F_j (coefficients, constant
    /// first) whose root u seeded the lift.
    pub root_poly: Vec<Rational>,
    pub k: u32,
    pub xdeg: u32,
}

#[derive(Debug, Clone)]
pub struct FactorCandidate {
    /// Circuit over Q in the original variables; divisions allowed.
    pub circuit: Circuit<Rational>,
    pub provenance: Provenance,
    pub converted_from_extension: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkipRecord {
    pub deriv_index: u32,
    pub degree_guess: u32,
    pub center: Vec<Rational>,
    pub root_poly: Option<Vec<Rational>>,
    pub reason: String,
}

/// One full run: the unpruned candidate list plus its provenance trail.
pub struct PipelineRun {
    pub candidates: Vec<FactorCandidate>,
    pub skips: Vec<SkipRecord>,
    /// Monicization direction and scaling.
    pub alpha: Vec<Rational>,
    pub gamma: Rational,
    /// Certified total degree of the input.
    pub degree: u32,
    pub config: PipelineConfig,
    /// (label, value) size measurements, deterministic.
    pub measurements: Vec<(String, u64)>,
}

/// Hom_D(f)(alpha) read off the univariate restriction f(alpha * t).
fn direction_coefficient(
    f: &Circuit<Rational>,
    alpha: &[Rational],
    degree: u32,
) -> Result<Rational, PipelineError> {
    use crate::circuit::AffineForm;
    let images = alpha
        .iter()
        .map(|a| crate::circuit::AffineForm {
            constant: Rational::zero(),
            terms: vec![(0u32, a.clone())],
        })
        .collect::<Vec<AffineForm<Rational>>>();
    let map = AffineMap {
        new_nvars: 1,
        new_yvar: None,
        images,
    };
    let restricted = substitute_affine(f, &map);
    let dense = restrict_univar(&restricted, 0, &[Rational::zero()])?;
    Ok(dense
        .coeff(&[degree])
        .cloned()
        .unwrap_or_else(Rational::zero))
}

/// Largest D with Hom_D(f) not identically zero, certified by grid search
/// per candidate degree, descending from the formal bound.
pub fn effective_degree(f: &Circuit<Rational>) -> Result<u32, PipelineError> {
    let bound = formal_degree(f);
    if bound.den != 0 {
        return Err(PipelineError::DivisionGates);
    }
    let mut d = bound.num as u32;
    while d > 0 {
        if monic_witness(f, d)?.is_some() {
            return Ok(d);
        }
        d -= 1;
    }
    // Degree 0: nonzero constant or identically zero.
    let zeros: Vec<Rational> = (0..f.nvars()).map(|_| Rational::zero()).collect();
    let v = crate::circuit::evaluate_single(f, &zeros)?;
    if v.is_zero() {
        Err(PipelineError::ZeroInput)
    } else {
        Ok(0)
    }
}

/// First direction alpha in the degree-D grid with Hom_D(f)(alpha) != 0.
fn monic_witness(
    f: &Circuit<Rational>,
    degree: u32,
) -> Result<Option<(Vec<Rational>, Rational)>, PipelineError> {
    let spec = HittingSetSpec::grid(f.nvars().max(1), degree as u64);
    for alpha in spec.stream_lazy() {
        let gamma = direction_coefficient(f, &alpha, degree)?;
        if !gamma.is_zero() {
            return Ok(Some((alpha, gamma)));
        }
    }
    Ok(None)
}

/// Makes f monic in a fresh last variable y: finds alpha in the hitting
/// stream with Hom_D(f)(alpha) != 0 and returns
/// (f(x + alpha y)/gamma, alpha, gamma).
pub fn monicize(
    f: &Circuit<Rational>,
    degree: u32,
    hs: &HittingSetSpec,
) -> Result<(Circuit<Rational>, Vec<Rational>, Rational), PipelineError> {
    for alpha in hs.stream_lazy() {
        let gamma = direction_coefficient(f, &alpha, degree)?;
        if gamma.is_zero() {
            continue;
        }
        let map = AffineMap::adjoin_y(&(), &alpha);
        let tilted = substitute_affine(f, &map);
        let inv = gamma.recip().expect("nonzero gamma");
        let monic = scale(&tilted, &inv)?;
        return Ok((monic, alpha, gamma));
    }
    Err(PipelineError::NoMonicWitness)
}

/// The i-th y-derivative of a monic-in-y circuit, rescaled monic. The
/// leading coefficient of the derivative is the falling factorial
/// D(D-1)...(D-i+1).
pub fn monic_derivative(
    f_monic: &Circuit<Rational>,
    yvar: u32,
    ydeg: u32,
    i: u32,
    cache: &mut PlanCache,
) -> Result<Circuit<Rational>, PipelineError> {
    if i == 0 {
        return Ok(f_monic.clone());
    }
    let plan = cache.plan(ydeg as usize);
    let derived = interp::partial_derivative(f_monic, yvar, i as usize, &plan)?;
    let mut ff = Rational::one();
    for t in 0..i {
        ff = &ff * &Rational::from_int((ydeg - t) as i64);
    }
    let inv = ff.recip().expect("nonzero falling factorial");
    Ok(scale(&derived, &inv)?.with_yvar(Some(yvar)))
}

/// Subset-sum filter: can a monic factor of y-degree `guess` containing
/// `root_deg` exist, given the multiset of irreducible origin-factor
/// degrees (with this root's copy removed)?
fn degree_feasible(guess: u32, root_deg: u32, other_degrees: &[u32]) -> bool {
    if guess < root_deg {
        return false;
    }
    let target = (guess - root_deg) as usize;
    let mut reachable = vec![false; target + 1];
    reachable[0] = true;
    for &d in other_degrees {
        let d = d as usize;
        if d == 0 || d > target {
            continue;
        }
        for t in (d..=target).rev() {
            if reachable[t - d] {
                reachable[t] = true;
            }
        }
    }
    reachable[target]
}

/// One candidate circuit before y-elimination and conversion back to Q.
#[derive(Clone, Debug)]
pub enum RawCircuit {
    Rational(Circuit<Rational>),
    Extension(Circuit<NumberFieldElem>),
}

/// Output of the multiplicity-one search: the candidate in its lift field
/// with the y variable still present (the shift x -> x - a is undone).
#[derive(Clone, Debug)]
pub struct RawFactorCandidate {
    pub circuit: RawCircuit,
    pub provenance: Provenance,
}

impl RawFactorCandidate {
    /// Sets y = 0, drops the y variable, and converts extension-field
    /// circuits syntactically to Q. Returns the flag recording whether a
    /// conversion happened.
    pub fn finalize(
        &self,
        yvar: u32,
        keep_nvars: u32,
    ) -> Result<(Circuit<Rational>, bool), PipelineError> {
        match &self.circuit {
            RawCircuit::Rational(c) => {
                let pinned = set_var(c, yvar, Rational::zero())?;
                Ok((truncate_vars(&pinned, keep_nvars)?, false))
            }
            RawCircuit::Extension(c) => {
                let zero = c.ctx().zero_elem();
                let pinned = set_var(c, yvar, zero)?;
                let dropped = truncate_vars(&pinned, keep_nvars)?;
                Ok((to_base_field(&dropped)?, true))
            }
        }
    }

    /// Conversion to Q with the y variable kept (the shape the
    /// multiplicity-one search itself reports).
    pub fn to_rational_with_y(&self) -> Result<(Circuit<Rational>, bool), PipelineError> {
        match &self.circuit {
            RawCircuit::Rational(c) => Ok((c.clone(), false)),
            RawCircuit::Extension(c) => Ok((to_base_field(c)?, true)),
        }
    }
}

/// Candidate factors of multiplicity one and y-degree `d` of a circuit
/// monic in its designated y variable, per the point/root/lift/recover
/// loop. `ydeg` is the exact y-degree (= total degree of the monicized
/// input).
pub fn candidates_mult_one(
    f_monic: &Circuit<Rational>,
    d: u32,
    ydeg: u32,
    config: &PipelineConfig,
    cache: &mut PlanCache,
) -> Result<(Vec<RawFactorCandidate>, Vec<SkipRecord>), PipelineError> {
    let yvar = f_monic
        .yvar()
        .ok_or_else(|| PipelineError::NotMonic("no designated y variable".into()))?;
    let n = f_monic.nvars() - 1;
    debug_assert_eq!(yvar, n, "pipeline circuits keep y as the last variable");

    let mut candidates = Vec::new();
    let mut skips = Vec::new();

    // Point stream: (n+1)-variate spec projected onto the first n
    // coordinates, per the construction the hitting module provides.
    let degree_bound = 5 * (ydeg as u64) * (ydeg as u64);
    let mut spec = HittingSetSpec::grid(n + 1, degree_bound);
    spec.generator = config.hitting;
    spec.size_bound = 11 * config.size_bound * (ydeg as u64).pow(5).max(1);
    spec.grid_cap = config.grid_cap;
    let stream: alloc::boxed::Box<dyn Iterator<Item = Vec<Rational>>> = match config.early_stop {
        EarlyStop::Off => alloc::boxed::Box::new(project(spec.points().map_err(
            |e| PipelineError::Circuit(CircuitError::CapExceeded(format!("{e}"))),
        )?, n as usize)),
        EarlyStop::On { .. } => alloc::boxed::Box::new(project(spec.stream_lazy(), n as usize)),
    };

    let (max_productive, max_points) = match config.early_stop {
        EarlyStop::Off => (usize::MAX, usize::MAX),
        EarlyStop::On {
            max_productive,
            max_points,
        } => (max_productive, max_points),
    };

    let mut productive_points = 0usize;
    let mut points_seen = 0usize;
    for a in stream {
        if points_seen >= max_points || productive_points >= max_productive {
            break;
        }
        points_seen += 1;

        // F(x, y) = f(x + a, y)
        let mut shifts: Vec<Rational> = a.clone();
        shifts.push(Rational::zero());
        let map = AffineMap::shift(&(), &shifts);
        let shifted = substitute_affine(f_monic, &map).with_yvar(Some(yvar));

        let origin = newton::univariate_at_origin(&shifted).map_err(newton_to_pipeline)?;
        debug_assert_eq!(origin.degree_in(0), ydeg, "monic input keeps its y-degree");
        let factorization = univar::factor_rational(&origin)?;
        let squarefree = factorization.factors.iter().all(|(_, e)| *e == 1);

        let mut produced_here = 0usize;
        for (root_poly, mult) in &factorization.factors {
            if *mult != 1 {
                continue;
            }
            let root_deg = root_poly.degree_in(0);
            if config.degree_filter {
                let mut others: Vec<u32> = Vec::new();
                for (g, e) in &factorization.factors {
                    let copies = if g == root_poly { *e - 1 } else { *e };
                    for _ in 0..copies {
                        others.push(g.degree_in(0));
                    }
                }
                if !degree_feasible(d, root_deg, &others) {
                    continue;
                }
            }
            let (xdeg, k) = config.k_policy.parameters(d, ydeg);
            let prov = Provenance {
                deriv_index: u32::MAX, // filled by the caller
                degree_guess: d,
                center: a.clone(),
                root_poly: root_poly.univar_coeffs(),
                k,
                xdeg,
            };
            match lift_and_recover(&shifted, root_poly, d, xdeg, k, ydeg, cache) {
                Ok(raw) => {
                    // Undo the shift: x -> x - a (y untouched).
                    let mut unshift: Vec<Rational> = a.iter().map(|v| -v).collect();
                    unshift.push(Rational::zero());
                    let back = match raw {
                        RawCircuit::Rational(c) => {
                            let m = AffineMap::shift(&(), &unshift);
                            RawCircuit::Rational(substitute_affine(&c, &m).with_yvar(Some(yvar)))
                        }
                        RawCircuit::Extension(c) => {
                            let ctx = c.ctx().clone();
                            let shifts: Vec<NumberFieldElem> =
                                unshift.iter().map(|r| ctx.from_rational(r)).collect();
                            let m = AffineMap::shift(&ctx, &shifts);
                            RawCircuit::Extension(substitute_affine(&c, &m).with_yvar(Some(yvar)))
                        }
                    };
                    candidates.push(RawFactorCandidate {
                        circuit: back,
                        provenance: prov,
                    });
                    produced_here += 1;
                }
                Err(reason) => skips.push(SkipRecord {
                    deriv_index: u32::MAX,
                    degree_guess: d,
                    center: a.clone(),
                    root_poly: Some(root_poly.univar_coeffs()),
                    reason,
                }),
            }
        }
        if produced_here > 0 {
            productive_points += 1;
        }
        if squarefree && matches!(config.early_stop, EarlyStop::On { .. }) {
            // A squarefree origin already serves every multiplicity-one
            // factor at this derivative level.
            break;
        }
    }
    Ok((candidates, skips))
}

fn newton_to_pipeline(e: NewtonError) -> PipelineError {
    match e {
        NewtonError::Circuit(c) => PipelineError::Circuit(c),
        NewtonError::Oracle(o) => PipelineError::Oracle(o),
        other => PipelineError::NotMonic(format!("{other}")),
    }
}

/// Lift at the root of `root_poly` and recover a degree-d monic candidate.
/// Errors come back as skip reasons.
fn lift_and_recover(
    shifted: &Circuit<Rational>,
    root_poly: &DensePoly<Rational>,
    d: u32,
    xdeg: u32,
    k: u32,
    ydeg: u32,
    cache: &mut PlanCache,
) -> Result<RawCircuit, String> {
    let yvar = shifted.yvar().expect("y designated");
    if root_poly.degree_in(0) == 1 {
        // Rational root: u = -c0.
        let c0 = root_poly
            .coeff(&[0])
            .cloned()
            .unwrap_or_else(Rational::zero);
        let u = -&c0;
        let assembled = lift_recover_in::<Rational>(shifted, &u, d, xdeg, k, ydeg, yvar, cache)?;
        Ok(RawCircuit::Rational(assembled))
    } else {
        let field = univar::make_extension(root_poly).map_err(|e| e.to_string())?;
        let embedded = crate::circuit::embed_rational::<NumberFieldElem>(
            shifted,
            Arc::clone(&field),
        )
        .with_yvar(Some(yvar));
        let u = field.generator();
        let assembled =
            lift_recover_in::<NumberFieldElem>(&embedded, &u, d, xdeg, k, ydeg, yvar, cache)?;
        Ok(RawCircuit::Extension(assembled))
    }
}

#[allow(clippy::too_many_arguments)]
fn lift_recover_in<F: Field>(
    f: &Circuit<F>,
    u: &F,
    d: u32,
    xdeg: u32,
    k: u32,
    ydeg: u32,
    yvar: u32,
    cache: &mut PlanCache,
) -> Result<Circuit<F>, String> {
    if !newton::check_start(f, u).map_err(|e| e.to_string())? {
        return Err("slope vanishes at the starting root".to_string());
    }
    let mut lift = newton::hom_lift(f, u, k as usize, ydeg as usize, cache)
        .map_err(|e| e.to_string())?;
    let ids = minpoly::recover_from_components(
        &mut lift.builder,
        &lift.components,
        d as usize,
        xdeg as usize,
        k as usize,
    )
    .map_err(|e: MinPolyError| e.to_string())?;
    // Assemble (den*y^d + sum nums[i] y^i) / den in the lift builder.
    let b = &mut lift.builder;
    let y = b.var(yvar);
    let mut terms: Vec<NodeId> = Vec::with_capacity(d as usize + 1);
    let mut ypow = b.one();
    for &num in &ids.nums {
        let t = b.mul(num, ypow);
        terms.push(t);
        ypow = b.mul(ypow, y);
    }
    let top = b.mul(ids.den, ypow);
    terms.push(top);
    let total = b.add_many(&terms);
    let out = b.div(total, ids.den);
    let full = lift.builder.finish_single(out);
    // Drop construction scaffolding unreachable from the output.
    Ok(full.restrict_to_output(0).with_yvar(Some(yvar)))
}

/// The full search: monicize, iterate derivative indices and degree
/// guesses, set y = 0 in every candidate, convert extension-field
/// candidates to Q, and return the deduplicated list with its provenance.
pub fn candidates_all(
    f: &Circuit<Rational>,
    config: &PipelineConfig,
) -> Result<PipelineRun, PipelineError> {
    if !f.is_division_free() {
        return Err(PipelineError::DivisionGates);
    }
    f.single_output()?;
    let mut cache = PlanCache::new();

    let degree = match config.degree {
        Some(d) => d,
        None => effective_degree(f)?,
    };
    if degree == 0 {
        return Ok(PipelineRun {
            candidates: vec![],
            skips: vec![],
            alpha: vec![],
            gamma: Rational::one(),
            degree,
            config: config.clone(),
            measurements: vec![("candidates".into(), 0)],
        });
    }
    let mut hs = HittingSetSpec::grid(f.nvars(), degree as u64);
    hs.generator = config.hitting;
    hs.size_bound = config.size_bound * (degree as u64).pow(3).max(1);
    let (monic, alpha, gamma) = monicize(f, degree, &hs)?;
    let yvar = monic.yvar().expect("monicize designates y");
    let n = f.nvars();

    let mut all = Vec::new();
    let mut skips = Vec::new();
    for i in 0..degree {
        let ydeg_i = degree - i;
        if ydeg_i == 0 {
            break;
        }
        let f_i = monic_derivative(&monic, yvar, degree, i, &mut cache)?;
        let mut d_top = if config.include_full_degree {
            ydeg_i
        } else {
            ydeg_i.saturating_sub(1)
        };
        if let Some(cap) = config.max_degree_guess {
            d_top = d_top.min(cap);
        }
        for d in 1..=d_top {
            let (cands, skipped) = candidates_mult_one(&f_i, d, ydeg_i, config, &mut cache)?;
            for mut raw in cands {
                raw.provenance.deriv_index = i;
                let (circuit, converted) = raw.finalize(yvar, n)?;
                all.push(FactorCandidate {
                    circuit,
                    provenance: raw.provenance,
                    converted_from_extension: converted,
                });
            }
            for mut s in skipped {
                s.deriv_index = i;
                skips.push(s);
            }
        }
    }

    // Dedup by provenance (loop order makes duplicates impossible, but the
    // contract is by-provenance, never semantic).
    let mut seen = alloc::collections::BTreeSet::new();
    let mut unique = Vec::with_capacity(all.len());
    for c in all {
        if seen.insert(c.provenance.clone()) {
            unique.push(c);
        }
    }

    let mut measurements: Vec<(String, u64)> = Vec::new();
    measurements.push(("candidates".into(), unique.len() as u64));
    measurements.push(("skips".into(), skips.len() as u64));
    let total_size: u64 = unique.iter().map(|c| c.circuit.stats().size).sum();
    measurements.push(("total-candidate-size".into(), total_size));
    let max_size: u64 = unique
        .iter()
        .map(|c| c.circuit.stats().size)
        .max()
        .unwrap_or(0);
    measurements.push(("max-candidate-size".into(), max_size));

    Ok(PipelineRun {
        candidates: unique,
        skips,
        alpha,
        gamma,
        degree,
        config: config.clone(),
        measurements,
    })
}

/// Reconstructs one candidate circuit from run-level data plus its
/// provenance, following exactly the construction path of
/// `candidates_all`. Byte-identical replay is the determinism contract.
pub fn replay_candidate(
    f: &Circuit<Rational>,
    alpha: &[Rational],
    gamma: &Rational,
    degree: u32,
    prov: &Provenance,
) -> Result<Circuit<Rational>, PipelineError> {
    let mut cache = PlanCache::new();
    let map = AffineMap::adjoin_y(&(), alpha);
    let tilted = substitute_affine(f, &map);
    let inv = gamma.recip().expect("nonzero gamma");
    let monic = scale(&tilted, &inv)?;
    let yvar = monic.yvar().expect("y designated");
    let ydeg_i = degree - prov.deriv_index;
    let f_i = monic_derivative(&monic, yvar, degree, prov.deriv_index, &mut cache)?;

    let mut shifts: Vec<Rational> = prov.center.clone();
    shifts.push(Rational::zero());
    let shift_map = AffineMap::shift(&(), &shifts);
    let shifted = substitute_affine(&f_i, &shift_map).with_yvar(Some(yvar));

    let root_poly = DensePoly::univar_from_coeffs(&prov.root_poly);
    let raw = lift_and_recover(
        &shifted,
        &root_poly,
        prov.degree_guess,
        prov.xdeg,
        prov.k,
        ydeg_i,
        &mut cache,
    )
    .map_err(PipelineError::NotMonic)?;
    let mut unshift: Vec<Rational> = prov.center.iter().map(|v| -v).collect();
    unshift.push(Rational::zero());
    let back = match raw {
        RawCircuit::Rational(c) => {
            let m = AffineMap::shift(&(), &unshift);
            RawCircuit::Rational(substitute_affine(&c, &m).with_yvar(Some(yvar)))
        }
        RawCircuit::Extension(c) => {
            let ctx = c.ctx().clone();
            let shifts: Vec<NumberFieldElem> =
                unshift.iter().map(|r| ctx.from_rational(r)).collect();
            let m = AffineMap::shift(&ctx, &shifts);
            RawCircuit::Extension(substitute_affine(&c, &m).with_yvar(Some(yvar)))
        }
    };
    let raw_candidate = RawFactorCandidate {
        circuit: back,
        provenance: prov.clone(),
    };
    Ok(raw_candidate.finalize(yvar, f.nvars())?.0)
}

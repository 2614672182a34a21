//! Deterministic instance generators for the acceptance suite. Every
//! planted object carries its own certificate: irreducibility comes from
//! families where it is provable by elementary criteria (degree-one,
//! odd-degree non-squares, no-root cubics, Eisenstein), never from the
//! code under test.

use std::sync::Arc;

use circfactor_core::circuit::{Circuit, CircuitBuilder, NodeId};
use circfactor_core::densepoly::{divmod_in_var, DensePoly};
use circfactor_core::field::{Field, NumberField, NumberFieldElem, Rational};
use circfactor_core::rng::DetRng;

/// Random sparse polynomial of total degree <= `deg` in `n` variables.
/// With `nonzero_const`, the constant term is forced nonzero.
pub fn random_dense(
    rng: &mut DetRng,
    n: usize,
    deg: u32,
    coeff_bound: i64,
    nonzero_const: bool,
) -> DensePoly<Rational> {
    let mut p = DensePoly::zero(n);
    let terms = 2 + rng.below(4) as usize;
    for _ in 0..terms {
        let mut expo = vec![0u32; n];
        let mut budget = deg;
        for e in expo.iter_mut() {
            let take = rng.below(budget as u64 + 1) as u32;
            *e = take;
            budget -= take;
        }
        let c = rng.small_int(coeff_bound);
        if c != 0 {
            p = p.add(&DensePoly::monomial(n, expo, Rational::from_int(c)));
        }
    }
    // Guarantee the stated degree bound is within reach but never exceeded.
    if nonzero_const {
        let existing = p.coeff(&vec![0; n]).cloned();
        if existing.is_none() {
            let c = rng.small_nonzero_int(coeff_bound);
            p = p.add(&DensePoly::constant(n, Rational::from_int(c)));
        }
    }
    p
}

/// Univariate with exact degree `deg` and small coefficients.
pub fn random_univar(rng: &mut DetRng, deg: u32, coeff_bound: i64) -> DensePoly<Rational> {
    let mut coeffs = vec![Rational::zero(); deg as usize + 1];
    for c in coeffs.iter_mut().take(deg as usize) {
        *c = Rational::from_int(rng.small_int(coeff_bound));
    }
    coeffs[deg as usize] = Rational::from_int(rng.small_nonzero_int(coeff_bound));
    DensePoly::univar_from_coeffs(&coeffs)
}

/// Builds a circuit computing exactly this polynomial, with formal degree
/// equal to the true total degree (monomials via power chains, balanced
/// sum).
pub fn dense_to_circuit(p: &DensePoly<Rational>) -> Circuit<Rational> {
    let n = p.nvars();
    let mut b = CircuitBuilder::<Rational>::new((), n as u32);
    let mut terms: Vec<NodeId> = Vec::new();
    for (expo, coeff) in p.terms() {
        let mut node = b.rat(coeff);
        for (v, &e) in expo.iter().enumerate() {
            if e > 0 {
                let var = b.var(v as u32);
                let pw = b.pow(var, e);
                node = b.mul(node, pw);
            }
        }
        terms.push(node);
    }
    let out = b.add_many(&terms);
    b.finish_single(out)
}

/// As `dense_to_circuit` with the last variable designated y.
pub fn dense_to_circuit_y(p: &DensePoly<Rational>) -> Circuit<Rational> {
    let n = p.nvars() as u32;
    dense_to_circuit(p).with_yvar(Some(n - 1))
}

/// Pins all variables except the last to `a`, returning a univariate in
/// the old last variable.
pub trait DenseEvalVars {
    fn eval_vars(&self, a: &[Rational]) -> DensePoly<Rational>;
}

impl DenseEvalVars for DensePoly<Rational> {
    fn eval_vars(&self, a: &[Rational]) -> DensePoly<Rational> {
        let n = self.nvars();
        assert_eq!(a.len(), n - 1);
        let mut cur = self.clone();
        for (v, value) in a.iter().enumerate() {
            cur = cur.eval_var(v, value);
        }
        // Project onto the last variable.
        let mut out = DensePoly::zero(1);
        for (expo, coeff) in cur.terms() {
            out = out.add(&DensePoly::monomial(
                1,
                vec![expo[n - 1]],
                coeff.clone(),
            ));
        }
        out
    }
}

/// All points of {0..bound}^n in lexicographic order.
pub fn grid_points(n: usize, bound: i64) -> Vec<Vec<Rational>>
{
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..=bound {
                let mut p = prefix.clone();
                p.push(Rational::from_int(v));
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// A planted f = g^m * h instance, monic in the last variable y, with g
/// certified irreducible and not dividing h.
pub struct ResultantInstance {
    pub f_circ: Circuit<Rational>,
    pub g_circ: Circuit<Rational>,
    pub f_dense: DensePoly<Rational>,
    pub g_dense: DensePoly<Rational>,
    pub h_dense: DensePoly<Rational>,
    pub deg_f: u64,
    pub deg_g: u64,
}

/// Monic-in-y irreducible with its certificate baked into the family:
/// y + p (degree one), y^2 - w with w of odd total degree or a non-square
/// constant, y^3 - w with deg w in {1, 2}.
fn planted_irreducible_y(rng: &mut DetRng, nx: usize) -> Option<DensePoly<Rational>> {
    let n = nx + 1;
    let yvar = nx;
    let y = DensePoly::<Rational>::var(n, yvar, &());
    match rng.below(3) {
        0 => {
            // y + p(x), p != 0
            let pd = 1 + rng.below(2) as u32;
            let p = embed_x(&random_dense(rng, nx, pd, 4, false), n);
            if p.is_zero() {
                return None;
            }
            Some(y.add(&p))
        }
        1 => {
            // y^2 - w
            let w = if rng.below(2) == 0 {
                // odd total degree: exact degree 1 or 3 in the x block
                let d = if rng.below(2) == 0 { 1 } else { 3 };
                let mut w = embed_x(&random_dense(rng, nx, d, 3, false), n);
                // force a term of exact odd degree d so the total degree
                // really is odd
                if w.total_degree() != d {
                    let mut expo = vec![0u32; n];
                    expo[0] = d;
                    w = w.add(&DensePoly::monomial(n, expo, Rational::one()));
                }
                if w.total_degree() % 2 == 0 || w.is_zero() {
                    return None;
                }
                w
            } else {
                let c = [2i64, 3, 5, 6, 7, -1, -2, -5][rng.below(8) as usize];
                DensePoly::constant(n, Rational::from_int(c))
            };
            Some(y.pow(2).sub(&w))
        }
        _ => {
            // y^3 - w, deg w in {1, 2}, w != 0
            let d = 1 + rng.below(2) as u32;
            let mut w = embed_x(&random_dense(rng, nx, d, 3, false), n);
            if w.total_degree() != d {
                let mut expo = vec![0u32; n];
                expo[0] = d;
                w = w.add(&DensePoly::monomial(n, expo, Rational::one()));
            }
            if w.is_zero() {
                return None;
            }
            Some(y.pow(3).sub(&w))
        }
    }
}

/// Lifts an x-only polynomial into the (x, y) variable block.
fn embed_x(p: &DensePoly<Rational>, n: usize) -> DensePoly<Rational> {
    let mut out = DensePoly::zero(n);
    for (expo, coeff) in p.terms() {
        let mut e = expo.clone();
        e.resize(n, 0);
        out = out.add(&DensePoly::monomial(n, e, coeff.clone()));
    }
    out
}

/// Random monic-in-y cofactor of y-degree 0..=2 (no structure required).
fn random_monic_cofactor(rng: &mut DetRng, nx: usize, max_ydeg: u32) -> DensePoly<Rational> {
    let n = nx + 1;
    let y = DensePoly::<Rational>::var(n, nx, &());
    let d = rng.below(max_ydeg as u64 + 1) as u32;
    let mut h = y.pow(d);
    for i in 0..d {
        let cd = 1 + rng.below(2) as u32;
        let c = embed_x(&random_dense(rng, nx, cd, 3, false), n);
        h = h.add(&c.mul(&y.pow(i)));
    }
    h
}

pub fn plant_resultant_instance(rng: &mut DetRng, squared: bool) -> Option<ResultantInstance> {
    let nx = 1 + rng.below(2) as usize; // 1 or 2 x-variables
    let n = nx + 1;
    let g = planted_irreducible_y(rng, nx)?;
    let dg = g.degree_in(nx);
    // Keep the dense oracle comfortable.
    let max_h = if squared { 1 } else { (5 - if squared { 2 * dg } else { dg }).min(2) };
    let h = random_monic_cofactor(rng, nx, max_h);
    // g0 must be a nonzero polynomial (constant y-coefficient).
    if g.coeff_of_var_power(nx, 0).is_zero() {
        return None;
    }
    // g must not divide h (automatic when deg_y h < deg_y g and h != 0).
    if h.is_zero() {
        return None;
    }
    if h.degree_in(nx) >= dg {
        let (_, r) = divmod_in_var(&h, &g, nx).ok()?;
        if r.is_zero() {
            return None;
        }
    }
    let f = if squared { g.mul(&g).mul(&h) } else { g.mul(&h) };
    let deg_f = f.degree_in(nx) as u64;
    if deg_f > 6 || f.total_degree() > 9 {
        return None;
    }
    Some(ResultantInstance {
        f_circ: dense_to_circuit_y(&f),
        g_circ: dense_to_circuit_y(&g),
        f_dense: f,
        g_dense: g.clone(),
        h_dense: h,
        deg_f,
        deg_g: dg as u64,
    })
}

/// Planted univariate product with certified-irreducible monic factors.
pub struct PlantedUnivar {
    pub product: DensePoly<Rational>,
    pub content: Rational,
    pub factors: Vec<(DensePoly<Rational>, u32)>,
}

fn is_rational_square(r: &Rational) -> bool {
    if r < &Rational::zero() {
        return false;
    }
    let n = r.numer().clone();
    let d = r.denom().clone();
    let sn = n.sqrt();
    let sd = d.sqrt();
    &sn * &sn == n && &sd * &sd == d
}

/// Monic irreducible univariate of degree 1..=4 with an elementary
/// certificate.
fn planted_irreducible_univar(rng: &mut DetRng) -> Option<DensePoly<Rational>> {
    let y = DensePoly::<Rational>::var(1, 0, &());
    match rng.below(4) {
        0 => {
            // y + a
            let a = Rational::from_int(rng.small_int(6));
            Some(y.add(&DensePoly::constant(1, a)))
        }
        1 => {
            // quadratic with non-square discriminant
            let a = Rational::from_int(rng.small_int(4));
            let b = Rational::from_int(rng.small_int(6));
            let disc = &(&a * &a) - &(&Rational::from_int(4) * &b);
            if is_rational_square(&disc) {
                return None;
            }
            Some(
                y.pow(2)
                    .add(&y.mul_scalar(&a))
                    .add(&DensePoly::constant(1, b)),
            )
        }
        2 => {
            // monic integer cubic with no rational root (exhaustive root
            // check over divisors of the constant term)
            let a = rng.small_int(3);
            let b = rng.small_int(3);
            let c = rng.small_nonzero_int(6);
            let p = DensePoly::univar_from_coeffs(&[
                Rational::from_int(c),
                Rational::from_int(b),
                Rational::from_int(a),
                Rational::one(),
            ]);
            let mut d = 1i64;
            while d * d <= c.abs() {
                if c % d == 0 {
                    for cand in [d, -d, c / d, -(c / d)] {
                        let v = p.evaluate(&[Rational::from_int(cand)]);
                        if v == Rational::zero() {
                            return None;
                        }
                    }
                }
                d += 1;
            }
            Some(p)
        }
        _ => {
            // Eisenstein at p for degree 2..=4
            let pr = [2i64, 3, 5][rng.below(3) as usize];
            let d = 2 + rng.below(3) as usize;
            let mut coeffs = vec![Rational::zero(); d + 1];
            coeffs[d] = Rational::one();
            for c in coeffs.iter_mut().take(d).skip(1) {
                *c = Rational::from_int(pr * rng.small_int(3));
            }
            // constant: p * t with t not divisible by p
            let mut t = rng.small_nonzero_int(5);
            if t % pr == 0 {
                t += 1;
            }
            coeffs[0] = Rational::from_int(pr * t);
            Some(DensePoly::univar_from_coeffs(&coeffs))
        }
    }
}

pub fn plant_univar_product(rng: &mut DetRng) -> PlantedUnivar {
    loop {
        let count = 1 + rng.below(3) as usize;
        let mut factors: Vec<(DensePoly<Rational>, u32)> = Vec::new();
        let mut total = 0u32;
        for _ in 0..count {
            let Some(f) = planted_irreducible_univar(rng) else {
                continue;
            };
            if factors.iter().any(|(g, _)| g == &f) {
                continue;
            }
            let e = 1 + rng.below(2) as u32;
            let d = f.degree_in(0);
            if total + e * d > 10 {
                continue;
            }
            total += e * d;
            factors.push((f, e));
        }
        if factors.is_empty() {
            continue;
        }
        let content = {
            let mut c = Rational::from_int(rng.small_nonzero_int(6));
            let den = 1 + rng.below(3) as i64;
            c = &c * &Rational::new(1.into(), den.into()).unwrap();
            c
        };
        let mut product = DensePoly::constant(1, content.clone());
        for (f, e) in &factors {
            product = product.mul(&f.pow(*e));
        }
        factors.sort_by(|(a, _), (b, _)| {
            a.degree_in(0)
                .cmp(&b.degree_in(0))
                .then_with(|| a.univar_coeffs().cmp(&b.univar_coeffs()))
        });
        return PlantedUnivar {
            product,
            content,
            factors,
        };
    }
}

/// Division-free random circuit over K followed by the norm trick: the
/// result computes A * sigma(A) (+ rational junk), a Q[x]-valued circuit
/// that genuinely uses u. Moduli are u^2 - m, where sigma(a + bu) = a - bu.
pub fn random_norm_circuit(
    rng: &mut DetRng,
    nf: &Arc<NumberField>,
    nvars: u32,
) -> Circuit<NumberFieldElem> {
    let mut b = CircuitBuilder::<NumberFieldElem>::new(Arc::clone(nf), nvars);
    // Random small division-free K-circuit A.
    let mut pool: Vec<NodeId> = (0..nvars).map(|i| b.var(i)).collect();
    pool.push(b.constant(nf.generator()));
    pool.push(b.rat(&Rational::from_int(rng.small_int(4))));
    for _ in 0..(3 + rng.below(4)) {
        let l = pool[rng.below(pool.len() as u64) as usize];
        let r = pool[rng.below(pool.len() as u64) as usize];
        let node = match rng.below(3) {
            0 => b.add(l, r),
            1 => b.sub(l, r),
            _ => b.mul(l, r),
        };
        pool.push(node);
    }
    let a_root = *pool.last().unwrap();
    let a_circ = b.clone_finish(a_root);
    // sigma(A): conjugate every constant.
    let conj = circfactor_core::circuit::map_constants(&a_circ, Arc::clone(nf), |k| {
        let coeffs = k.coeffs();
        nf.element(vec![coeffs[0].clone(), -&coeffs[1]])
    });
    let conj_map = b.import(&conj);
    let conj_root = conj_map[conj.outputs()[0] as usize];
    let norm = b.mul(a_root, conj_root);
    // Plus an embedded rational polynomial.
    let x0 = b.var(0);
    let c = b.rat(&Rational::from_int(rng.small_int(5)));
    let extra = b.mul(c, x0);
    let mut out = b.add(norm, extra);
    if rng.below(3) == 0 {
        // Exercise the division-elimination path with a unit ratio.
        let one = b.one();
        let shifted = b.add(norm, one);
        let ratio = b.div(shifted, shifted);
        out = b.mul(out, ratio);
    }
    b.finish_single(out)
}

/// Planted Newton instance over Q: F(x, y) = A(y) + (x-dependent terms of
/// lower y-degree) with A = (y - u) * C(y), C(u) != 0, so u is a simple
/// root of F(0, y).
pub fn plant_newton_rational(rng: &mut DetRng) -> Option<(Circuit<Rational>, Rational)> {
    let nx = 1 + rng.below(2) as usize;
    let n = nx + 1;
    let yvar = nx;
    let y = DensePoly::<Rational>::var(n, yvar, &());
    let u = Rational::from_int(rng.small_int(3));
    let deg_a = 2 + rng.below(3) as u32; // 2..=4
    let mut a = y.sub(&DensePoly::constant(n, u.clone()));
    for _ in 1..deg_a {
        // distinct-from-u roots keep the slope nonzero
        let mut r = Rational::from_int(rng.small_int(4));
        if r == u {
            r = &r + &Rational::one();
        }
        a = a.mul(&y.sub(&DensePoly::constant(n, r)));
    }
    // x-dependent tail with y-degree < deg_a and positive x-degree.
    let mut tail = DensePoly::zero(n);
    for _ in 0..(1 + rng.below(3)) {
        let mut expo = vec![0u32; n];
        expo[rng.below(nx as u64) as usize] = 1 + rng.below(2) as u32;
        expo[yvar] = rng.below(deg_a as u64) as u32;
        let c = rng.small_int(3);
        if c != 0 {
            tail = tail.add(&DensePoly::monomial(n, expo, Rational::from_int(c)));
        }
    }
    let f = a.add(&tail);
    if f.degree_in(yvar) != deg_a {
        return None;
    }
    Some((dense_to_circuit_y(&f), u))
}

/// Planted Newton instance over a quadratic extension: F = q(y) + x-tail
/// with q the field's defining polynomial, so the generator u is a simple
/// root of F(0, y).
pub fn plant_newton_extension(
    rng: &mut DetRng,
) -> Option<(Circuit<NumberFieldElem>, NumberFieldElem)> {
    let (c0, c1) = [
        (-2i64, 0i64), // u^2 - 2
        (-3, 0),       // u^2 - 3
        (1, 0),        // u^2 + 1
        (-1, -1),      // u^2 - u - 1
        (2, -2),       // u^2 - 2u + 2
    ][rng.below(5) as usize];
    let nf = NumberField::new_unchecked(vec![
        Rational::from_int(c0),
        Rational::from_int(c1),
        Rational::one(),
    ])
    .unwrap();
    let nx = 1 + rng.below(2) as usize;
    let n = nx + 1;
    let yvar = nx;
    let y = DensePoly::<Rational>::var(n, yvar, &());
    let q = y
        .pow(2)
        .add(&y.mul_scalar(&Rational::from_int(c1)))
        .add(&DensePoly::constant(n, Rational::from_int(c0)));
    let mut tail = DensePoly::zero(n);
    for _ in 0..(1 + rng.below(2)) {
        let mut expo = vec![0u32; n];
        expo[rng.below(nx as u64) as usize] = 1 + rng.below(2) as u32;
        expo[yvar] = rng.below(2) as u32;
        let c = rng.small_int(3);
        if c != 0 {
            tail = tail.add(&DensePoly::monomial(n, expo, Rational::from_int(c)));
        }
    }
    let f = q.add(&tail);
    if f.degree_in(yvar) != 2 {
        return None;
    }
    let fq = dense_to_circuit_y(&f);
    let fk = circfactor_core::circuit::embed_rational::<NumberFieldElem>(&fq, Arc::clone(&nf))
        .with_yvar(Some(yvar as u32));
    Some((fk, nf.generator()))
}

/// A planted monic irreducible G with a known simple rational starting
/// root for the lift, plus its exact degrees.
pub struct MinPolyInstance {
    pub g_circ: Circuit<Rational>,
    pub g_dense: DensePoly<Rational>,
    pub u: Rational,
    /// y-degree d (1..=3).
    pub d: u32,
    /// x-degree bound D (1..=2).
    pub big_d: u32,
}

pub fn plant_minpoly_instance(rng: &mut DetRng) -> Option<MinPolyInstance> {
    let d = 1 + rng.below(3) as u32;
    // Cubic instances stay univariate in x so the negative-direction dense
    // checks stay cheap.
    let nx = if d >= 3 { 1 } else { 1 + rng.below(2) as usize };
    let n = nx + 1;
    let yvar = nx;
    let y = DensePoly::<Rational>::var(n, yvar, &());
    let x0 = DensePoly::<Rational>::var(n, 0, &());
    match d {
        1 => {
            // G = y + p(x), deg p in 1..=2
            let pd = 1 + rng.below(2) as u32;
            let p = embed_x(&random_dense(rng, nx, pd, 4, false), n);
            if p.is_zero() || p.total_degree() == 0 {
                return None;
            }
            let big_d = p.total_degree();
            let g = y.add(&p);
            let u = -&p.eval_all_zero();
            Some(MinPolyInstance {
                g_circ: dense_to_circuit_y(&g),
                g_dense: g,
                u,
                d,
                big_d,
            })
        }
        2 => {
            // G = y^2 - w with w(0) = s^2 a nonzero square and w certified
            // non-square: either deg 1, or x^2 + bx + s^2 with b != +-2s.
            let s = 1 + rng.below(3) as i64;
            let w = if rng.below(2) == 0 {
                let a = rng.small_nonzero_int(4);
                x0.mul_scalar(&Rational::from_int(a))
                    .add(&DensePoly::constant(n, Rational::from_int(s * s)))
            } else {
                let mut b = rng.small_int(4);
                if b == 2 * s || b == -2 * s {
                    b += 1;
                }
                x0.pow(2)
                    .add(&x0.mul_scalar(&Rational::from_int(b)))
                    .add(&DensePoly::constant(n, Rational::from_int(s * s)))
            };
            let big_d = w.total_degree();
            let g = y.pow(2).sub(&w);
            Some(MinPolyInstance {
                g_circ: dense_to_circuit_y(&g),
                g_dense: g,
                u: Rational::from_int(s),
                d,
                big_d,
            })
        }
        _ => {
            // G = y^3 - w with w(0) = 1 (so u = 1) and deg w in {1, 2}.
            let wd = 1 + rng.below(2) as u32;
            let w = if wd == 1 {
                let a = rng.small_nonzero_int(4);
                x0.mul_scalar(&Rational::from_int(a))
                    .add(&DensePoly::constant(n, Rational::one()))
            } else {
                let b = rng.small_int(3);
                x0.pow(2)
                    .add(&x0.mul_scalar(&Rational::from_int(b)))
                    .add(&DensePoly::constant(n, Rational::one()))
            };
            let big_d = w.total_degree();
            let g = y.pow(3).sub(&w);
            Some(MinPolyInstance {
                g_circ: dense_to_circuit_y(&g),
                g_dense: g,
                u: Rational::one(),
                d,
                big_d,
            })
        }
    }
}

/// Evaluation at the all-zeros point.
pub trait EvalAllZero {
    fn eval_all_zero(&self) -> Rational;
}

impl EvalAllZero for DensePoly<Rational> {
    fn eval_all_zero(&self) -> Rational {
        self.coeff(&vec![0; self.nvars()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

/// A planted pipeline input: product of certified-irreducible sparse
/// factors with multiplicities.
pub struct PipelineInstance {
    pub f: Circuit<Rational>,
    /// (dense factor, multiplicity, total degree)
    pub factors: Vec<(DensePoly<Rational>, u32, u32)>,
    pub nvars: usize,
}

/// Certified-irreducible sparse multivariate factor of the target degree:
/// degree 1 = affine-linear; degree 2..3 = v + p(other vars) (linear in
/// one variable with unit content) or x0*x1 + c.
fn planted_pipeline_factor(
    rng: &mut DetRng,
    n: usize,
    degree: u32,
) -> Option<DensePoly<Rational>> {
    match degree {
        1 => {
            let mut p = DensePoly::zero(n);
            for v in 0..n {
                let c = rng.small_int(3);
                if c != 0 {
                    p = p.add(&DensePoly::var(n, v, &()).mul_scalar(&Rational::from_int(c)));
                }
            }
            let c = rng.small_int(4);
            p = p.add(&DensePoly::constant(n, Rational::from_int(c)));
            if p.total_degree() != 1 {
                return None;
            }
            Some(p)
        }
        2 if n >= 2 && rng.below(2) == 0 => {
            // x_i * x_j + c, c != 0: irreducible for nonzero c.
            let i = rng.below(n as u64) as usize;
            let mut j = rng.below(n as u64) as usize;
            if i == j {
                j = (j + 1) % n;
            }
            let c = rng.small_nonzero_int(5);
            Some(
                DensePoly::var(n, i, &())
                    .mul(&DensePoly::var(n, j, &()))
                    .add(&DensePoly::constant(n, Rational::from_int(c))),
            )
        }
        d @ 2..=3 => {
            // v + p(others), deg p = d: linear in v with unit content.
            let v = rng.below(n as u64) as usize;
            let mut p = DensePoly::zero(n);
            for _ in 0..(1 + rng.below(2)) {
                let mut expo = vec![0u32; n];
                let mut budget = d;
                for (w, e) in expo.iter_mut().enumerate() {
                    if w == v {
                        continue;
                    }
                    let take = rng.below(budget as u64 + 1) as u32;
                    *e = take;
                    budget -= take;
                }
                let c = rng.small_int(3);
                if c != 0 {
                    p = p.add(&DensePoly::monomial(n, expo, Rational::from_int(c)));
                }
            }
            // Force an exact-degree-d monomial avoiding v.
            if p.total_degree() != d {
                let mut expo = vec![0u32; n];
                let w = (v + 1) % n;
                expo[w] = d;
                p = p.add(&DensePoly::monomial(n, expo, Rational::one()));
            }
            if p.total_degree() != d {
                return None;
            }
            Some(DensePoly::var(n, v, &()).add(&p))
        }
        _ => None,
    }
}

/// Factor-degree/multiplicity patterns with sum deg*mult <= 6, leaning on
/// cheap shapes but covering degree-6 totals, squares, and 3-variable
/// inputs.
const PIPELINE_PATTERNS: &[&[(u32, u32)]] = &[
    &[(1, 1), (1, 1)],
    &[(2, 1), (1, 1)],
    &[(2, 1)],
    &[(3, 1)],
    &[(2, 1), (2, 1)],
    &[(3, 1), (1, 1)],
    &[(1, 2), (1, 1)],
    &[(2, 2)],
    &[(1, 2), (2, 1)],
    &[(3, 1), (2, 1)],
    &[(2, 2), (1, 1)],
    &[(1, 1), (1, 1), (1, 1)],
    &[(2, 1), (1, 1), (1, 1)],
    &[(2, 2), (2, 1)],
    &[(2, 1), (2, 1), (1, 1)],
    &[(3, 1), (3, 1)],
    &[(2, 1), (2, 1), (2, 1)],
    &[(1, 2), (1, 2), (1, 1)],
];

pub fn plant_pipeline_instance(rng: &mut DetRng, index: usize) -> Option<PipelineInstance> {
    let pattern = PIPELINE_PATTERNS[index % PIPELINE_PATTERNS.len()];
    let n = 2 + (rng.below(3) == 0) as usize; // mostly 2 vars, some 3
    let mut factors: Vec<(DensePoly<Rational>, u32, u32)> = Vec::new();
    for &(deg, mult) in pattern {
        let f = planted_pipeline_factor(rng, n, deg)?;
        // non-associate to everything planted so far
        let f_monicized = normalize_leading(&f);
        for (g, _, _) in &factors {
            if normalize_leading(g) == f_monicized {
                return None;
            }
        }
        factors.push((f, mult, deg));
    }
    // Build the input circuit as the product of factor circuits.
    use circfactor_core::circuit::CircuitBuilder;
    let mut b = CircuitBuilder::<Rational>::new((), n as u32);
    let mut prod: Option<NodeId> = None;
    for (f, mult, _) in &factors {
        let fc = dense_to_circuit(f);
        let map = b.import(&fc);
        let root = map[fc.outputs()[0] as usize];
        for _ in 0..*mult {
            prod = Some(match prod {
                None => root,
                Some(p) => b.mul(p, root),
            });
        }
    }
    let out = prod?;
    Some(PipelineInstance {
        f: b.finish_single(out),
        factors,
        nvars: n,
    })
}

/// Scales so the graded-lex leading coefficient is 1 (associate classes
/// compare equal).
pub fn normalize_leading(p: &DensePoly<Rational>) -> DensePoly<Rational> {
    let Some((_, lc)) = p
        .terms()
        .max_by(|(e1, _), (e2, _)| {
            let d1: u32 = e1.iter().sum();
            let d2: u32 = e2.iter().sum();
            d1.cmp(&d2).then_with(|| e1.cmp(e2))
        })
    else {
        return p.clone();
    };
    p.mul_scalar(&lc.recip().unwrap())
}

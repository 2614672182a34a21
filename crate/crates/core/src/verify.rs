//! Heuristic, clearly labeled validation of candidate circuits. Refuted
//! statuses rest on exact arithmetic disagreements and are certain;
//! "well-defined" witnesses are certain too. Only the ill-defined and
//! inconclusive directions are probabilistic, and every draw comes from an
//! explicit (seed, stream) pair, so reports are reproducible.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::{eliminate_divisions, evaluate_single, evaluate_trace, Circuit, Node};
use crate::densepoly::{divmod_univar, restrict_univar, DensePoly};
use crate::field::{Field, Rational};
use crate::rng::DetRng;

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    /// Exact evidence that the candidate divides / equals the reference.
    VerifiedFactor,
    /// Pointwise equal on every trial.
    Verified,
    /// Constant nonzero ratio across every informative trial.
    VerifiedUpToScalar(String),
    /// Exact disagreement found; certain.
    Refuted,
    /// Some division subcircuit vanished at every trial point.
    IllDefinedProbable,
    /// Trials passed but no exact confirmation was within reach.
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::VerifiedFactor => write!(f, "verified-factor"),
            Status::Verified => write!(f, "verified"),
            Status::VerifiedUpToScalar(r) => write!(f, "verified-up-to-scalar({r})"),
            Status::Refuted => write!(f, "refuted"),
            Status::IllDefinedProbable => write!(f, "ill-defined-probable"),
            Status::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Per-candidate report entry plus the evidence that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyEntry {
    pub candidate_index: usize,
    pub status: Status,
    pub points_used: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: u64,
    pub entries: Vec<VerifyEntry>,
}

/// Searches, per division gate, for a point where that gate's denominator
/// subcircuit evaluates nonzero. A found witness is a proof of
/// well-definedness for that gate; gates with no witness in `trials`
/// points make the whole circuit ill-defined-probable.
pub fn probable_well_defined<F: Field>(c: &Circuit<F>, seed: u64, trials: u64) -> Status {
    let div_gates: Vec<(usize, u32)> = c
        .nodes()
        .iter()
        .enumerate()
        .filter_map(|(i, n)| match n {
            Node::Div(_, r) => Some((i, *r)),
            _ => None,
        })
        .collect();
    if div_gates.is_empty() {
        return Status::Verified;
    }
    let mut witnessed = alloc::vec![false; div_gates.len()];
    let mut rng = DetRng::split(seed, 0);
    let ctx = c.ctx().clone();
    for _ in 0..trials {
        if witnessed.iter().all(|&w| w) {
            break;
        }
        let point: Vec<F> = (0..c.nvars())
            .map(|_| F::from_rational(&ctx, &Rational::from_int(rng.small_int(16))))
            .collect();
        let Ok(trace) = evaluate_trace(c, &point) else {
            continue;
        };
        for (slot, (_, den)) in div_gates.iter().enumerate() {
            if witnessed[slot] {
                continue;
            }
            if let Some(v) = &trace[*den as usize] {
                if !v.is_zero() {
                    witnessed[slot] = true;
                }
            }
        }
    }
    if witnessed.iter().all(|&w| w) {
        Status::Verified
    } else {
        Status::IllDefinedProbable
    }
}

/// Restriction of a single-output circuit to the line p + t v, as a dense
/// univariate in t. The circuit must be division-free.
fn line_restriction<F: Field>(
    c: &Circuit<F>,
    p: &[F],
    v: &[F],
) -> Result<DensePoly<F>, crate::densepoly::PolyError> {
    use crate::circuit::{substitute_affine, AffineForm, AffineMap};
    let ctx = c.ctx().clone();
    let images = (0..c.nvars() as usize)
        .map(|i| AffineForm {
            constant: p[i].clone(),
            terms: alloc::vec![(0u32, v[i].clone())],
        })
        .collect();
    let map = AffineMap {
        new_nvars: 1,
        new_yvar: None,
        images,
    };
    let restricted = substitute_affine(c, &map);
    restrict_univar(&restricted, 0, &[F::zero(&ctx)])
}

/// Divisibility check by exact univariate division on random line
/// restrictions: refutations are certain; `trials` successes yield
/// verified-factor when an exact dense check also fits under the oracle
/// caps, inconclusive otherwise.
pub fn probable_divides<F: Field>(
    f: &Circuit<F>,
    cand: &Circuit<F>,
    seed: u64,
    trials: u64,
) -> Status {
    let Ok((num, den)) = eliminate_divisions(cand) else {
        return Status::Inconclusive;
    };
    let ctx = f.ctx().clone();
    let mut rng = DetRng::split(seed, 1);
    let mut points_done = 0u64;
    let mut resamples = 0u32;
    while points_done < trials {
        if resamples > 8 * trials as u32 + 64 {
            return Status::Inconclusive;
        }
        resamples += 1;
        let p: Vec<F> = (0..f.nvars())
            .map(|_| F::from_rational(&ctx, &Rational::from_int(rng.small_int(32))))
            .collect();
        let v: Vec<F> = (0..f.nvars())
            .map(|_| F::from_rational(&ctx, &Rational::from_int(rng.small_nonzero_int(16))))
            .collect();
        let Ok(f_line) = line_restriction(f, &p, &v) else {
            return Status::Inconclusive;
        };
        let (Ok(num_line), Ok(den_line)) =
            (line_restriction(&num, &p, &v), line_restriction(&den, &p, &v))
        else {
            return Status::Inconclusive;
        };
        if den_line.is_zero() {
            // Denominator vanished on the whole line; resample.
            continue;
        }
        let Ok((cand_line, rem)) = divmod_univar(&num_line, &den_line) else {
            continue;
        };
        if !rem.is_zero() {
            // The candidate is not even a polynomial along this line.
            return Status::Refuted;
        }
        if cand_line.is_zero() {
            continue;
        }
        match divmod_univar(&f_line, &cand_line) {
            Ok((_, rem)) if rem.is_zero() => {
                points_done += 1;
            }
            Ok(_) => return Status::Refuted,
            Err(_) => {
                // Leading coefficient not invertible along this line.
                continue;
            }
        }
    }
    Status::Inconclusive
}

/// As `probable_divides`, with a final exact dense confirmation attempt.
pub fn probable_divides_exact<F: Field>(
    f: &Circuit<F>,
    cand: &Circuit<F>,
    seed: u64,
    trials: u64,
    caps: &crate::densepoly::ExpandCaps,
) -> Status {
    match probable_divides(f, cand, seed, trials) {
        Status::Inconclusive => {}
        other => return other,
    }
    // Exact dense route: expand num/den of the candidate and f, divide.
    let Ok((num, den)) = eliminate_divisions(cand) else {
        return Status::Inconclusive;
    };
    let dense = (
        crate::densepoly::expand_capped(f, caps),
        crate::densepoly::expand_capped(&num, caps),
        crate::densepoly::expand_capped(&den, caps),
    );
    let (Ok(fd), Ok(nd), Ok(dd)) = dense else {
        return Status::Inconclusive;
    };
    let (fd, nd, dd) = (&fd[0], &nd[0], &dd[0]);
    if dd.is_zero() {
        return Status::IllDefinedProbable;
    }
    // cand as a polynomial: divide nd by dd in some variable; fall back to
    // inconclusive when the division is not exact in any single variable.
    for var in 0..fd.nvars() {
        if dd.degree_in(var) == 0 && !dd.is_constant() {
            continue;
        }
        if let Ok((q, r)) = crate::densepoly::divmod_in_var(nd, dd, var) {
            if r.is_zero() {
                return match crate::densepoly::divmod_in_var(fd, &q, var_of(&q, var)) {
                    Ok((_, r2)) if r2.is_zero() => Status::VerifiedFactor,
                    Ok(_) => Status::Refuted,
                    Err(_) => Status::Inconclusive,
                };
            }
        }
    }
    Status::Inconclusive
}

fn var_of<F: Field>(p: &DensePoly<F>, preferred: usize) -> usize {
    if p.degree_in(preferred) > 0 {
        return preferred;
    }
    (0..p.nvars()).find(|&v| p.degree_in(v) > 0).unwrap_or(preferred)
}

/// Pointwise comparison: `Verified` when equal at every trial point,
/// `VerifiedUpToScalar` when the ratio is the same nonzero constant at
/// every informative point, `Refuted` on any exact disagreement.
pub fn probable_equal<F: Field>(a: &Circuit<F>, b: &Circuit<F>, seed: u64, trials: u64) -> Status {
    if a.nvars() != b.nvars() {
        return Status::Refuted;
    }
    let ctx = a.ctx().clone();
    let mut rng = DetRng::split(seed, 2);
    let mut ratio: Option<F> = None;
    let mut all_equal = true;
    let mut informative = 0u64;
    let mut attempts = 0u64;
    while informative < trials && attempts < 8 * trials + 64 {
        attempts += 1;
        let point: Vec<F> = (0..a.nvars())
            .map(|_| F::from_rational(&ctx, &Rational::from_int(rng.small_int(16))))
            .collect();
        let (Ok(va), Ok(vb)) = (evaluate_single(a, &point), evaluate_single(b, &point)) else {
            continue; // denominator hit; resample
        };
        match (va.is_zero(), vb.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => return Status::Refuted,
            (false, false) => {}
        }
        informative += 1;
        if va != vb {
            all_equal = false;
        }
        let r = va.mul(&vb.inverse().expect("nonzero"));
        match &ratio {
            None => ratio = Some(r),
            Some(prev) if *prev == r => {}
            Some(_) => return Status::Refuted,
        }
    }
    if informative == 0 {
        return Status::Inconclusive;
    }
    if all_equal {
        Status::Verified
    } else {
        Status::VerifiedUpToScalar(alloc::format!("{}", ratio.expect("seen informative point")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    fn qb(n: u32) -> CircuitBuilder<Rational> {
        CircuitBuilder::new((), n)
    }

    #[test]
    fn well_definedness() {
        // x / (x - x): denominator identically zero
        let mut b = qb(1);
        let x = b.var(0);
        let z = b.sub(x, x);
        let d = b.div(x, z);
        let c = b.finish_single(d);
        assert_eq!(probable_well_defined(&c, 1, 16), Status::IllDefinedProbable);

        // 1/x: witness exists
        let mut b = qb(1);
        let x = b.var(0);
        let one = b.one();
        let d = b.div(one, x);
        let c = b.finish_single(d);
        assert_eq!(probable_well_defined(&c, 1, 16), Status::Verified);

        // division-free: vacuously fine
        let mut b = qb(1);
        let x = b.var(0);
        let s = b.mul(x, x);
        let c = b.finish_single(s);
        assert_eq!(probable_well_defined(&c, 1, 4), Status::Verified);
    }

    #[test]
    fn divides_detection() {
        // f = (x0+1)^2, cand = x0+1 -> verified-factor (dense confirmation)
        let mut b = qb(1);
        let x = b.var(0);
        let one = b.one();
        let s = b.add(x, one);
        let sq = b.mul(s, s);
        let f = b.clone_finish(sq);
        let cand = b.clone_finish(s);
        let caps = crate::densepoly::ExpandCaps::default();
        assert_eq!(
            probable_divides_exact(&f, &cand, 3, 6, &caps),
            Status::VerifiedFactor
        );

        // f = x0^2 + 1, cand = x0 + 1 -> refuted
        let sq2 = b.mul(x, x);
        let f2n = b.add(sq2, one);
        let f2 = b.clone_finish(f2n);
        assert_eq!(probable_divides(&f2, &cand, 3, 6), Status::Refuted);
    }

    #[test]
    fn equality_modes() {
        let mut b = qb(2);
        let x = b.var(0);
        let y = b.var(1);
        let s = b.add(x, y);
        let a = b.clone_finish(s);
        assert_eq!(probable_equal(&a, &a, 5, 8), Status::Verified);

        // 2(x+y) is scalar-equivalent
        let two = b.int(2);
        let d = b.mul(two, s);
        let doubled = b.clone_finish(d);
        assert_eq!(
            probable_equal(&a, &doubled, 5, 8),
            Status::VerifiedUpToScalar("1/2".into())
        );

        // x + y vs x + y + x0 differs
        let shifted = b.add(s, x);
        let other = b.clone_finish(shifted);
        assert_eq!(probable_equal(&a, &other, 5, 8), Status::Refuted);
    }
}

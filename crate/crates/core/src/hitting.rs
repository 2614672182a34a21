//! Deterministic point streams hitting every nonzero polynomial within
//! declared (nvars, degree) parameters.
//!
//! The grid backend enumerates {0, 1, ..., degree_bound}^nvars in
//! lexicographic order; a product grid with more than `degree` values per
//! coordinate hits every nonzero polynomial of per-variable degree at most
//! `degree`, which covers total degree too. The seeded backend draws the
//! same coordinate range from an explicitly seeded ChaCha stream and trades
//! the worst-case guarantee for cardinality control.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_core::{RngCore, SeedableRng};

use crate::field::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Grid,
    SeededRandom { seed: u64, count: u64 },
}

/// Declarative description of a hitting set. `size_bound` and
/// `depth_bound` describe the circuit class the stream is meant to hit;
/// the grid guarantee depends only on `degree_bound`, so they are recorded
/// but inert.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetSpec {
    pub nvars: u32,
    pub degree_bound: u64,
    pub size_bound: u64,
    pub depth_bound: u64,
    pub generator: Generator,
    /// Materialization guard for grid mode.
    pub grid_cap: u64,
}

pub const DEFAULT_GRID_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HittingError {
    GridTooLarge { cardinality: Option<u64>, cap: u64 },
    Empty(String),
}

impl fmt::Display for HittingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HittingError::GridTooLarge { cardinality, cap } => {
                let c = cardinality
                    .map(|c| format!("{c}"))
                    .unwrap_or_else(|| "overflow".into());
                write!(
                    f,
                    "grid cardinality {c} above cap {cap}; use the seeded-random generator"
                )
            }
            HittingError::Empty(what) => write!(f, "hitting stream exhausted: {what}"),
        }
    }
}

impl HittingSetSpec {
    pub fn grid(nvars: u32, degree_bound: u64) -> Self {
        HittingSetSpec {
            nvars,
            degree_bound,
            size_bound: 0,
            depth_bound: 0,
            generator: Generator::Grid,
            grid_cap: DEFAULT_GRID_CAP,
        }
    }

    pub fn seeded(nvars: u32, degree_bound: u64, seed: u64, count: u64) -> Self {
        HittingSetSpec {
            nvars,
            degree_bound,
            size_bound: 0,
            depth_bound: 0,
            generator: Generator::SeededRandom { seed, count },
            grid_cap: DEFAULT_GRID_CAP,
        }
    }

    /// Number of points in the stream, when it fits in a u64.
    pub fn cardinality(&self) -> Option<u64> {
        match self.generator {
            Generator::SeededRandom { count, .. } => Some(count),
            Generator::Grid => {
                let per_var = self.degree_bound.checked_add(1)?;
                let mut acc: u64 = 1;
                for _ in 0..self.nvars {
                    acc = acc.checked_mul(per_var)?;
                }
                Some(acc)
            }
        }
    }

    /// Deterministic point stream; in grid mode the cardinality guard
    /// applies (consumers that stop early use `stream_lazy`).
    pub fn points(&self) -> Result<PointStream, HittingError> {
        if matches!(self.generator, Generator::Grid) {
            match self.cardinality() {
                Some(c) if c <= self.grid_cap => {}
                c => {
                    return Err(HittingError::GridTooLarge {
                        cardinality: c,
                        cap: self.grid_cap,
                    })
                }
            }
        }
        Ok(self.stream_lazy())
    }

    /// The same stream without the cardinality guard, for consumers that
    /// pull lazily and stop early.
    pub fn stream_lazy(&self) -> PointStream {
        match self.generator {
            Generator::Grid => PointStream::Grid {
                nvars: self.nvars as usize,
                bound: self.degree_bound,
                next: Some(vec![0; self.nvars as usize]),
            },
            Generator::SeededRandom { seed, count } => PointStream::Seeded {
                rng: rand_chacha::ChaCha20Rng::seed_from_u64(seed),
                nvars: self.nvars as usize,
                bound: self.degree_bound,
                remaining: count,
            },
        }
    }
}

/// Pull-based restartable stream of rational points.
#[derive(Clone)]
pub enum PointStream {
    Grid {
        nvars: usize,
        bound: u64,
        next: Option<Vec<u64>>,
    },
    Seeded {
        rng: rand_chacha::ChaCha20Rng,
        nvars: usize,
        bound: u64,
        remaining: u64,
    },
}

impl Iterator for PointStream {
    type Item = Vec<Rational>;

    fn next(&mut self) -> Option<Vec<Rational>> {
        match self {
            PointStream::Grid { nvars, bound, next } => {
                let current = next.take()?;
                let point = current
                    .iter()
                    .map(|&v| Rational::from_int(v as i64))
                    .collect();
                // Odometer increment, last coordinate fastest.
                let mut succ = current;
                for i in (0..*nvars).rev() {
                    if succ[i] < *bound {
                        succ[i] += 1;
                        *next = Some(succ);
                        return Some(point);
                    }
                    succ[i] = 0;
                }
                *next = None;
                Some(point)
            }
            PointStream::Seeded {
                rng,
                nvars,
                bound,
                remaining,
            } => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                let point = (0..*nvars)
                    .map(|_| {
                        let v = uniform_below(rng, *bound + 1);
                        Rational::from_int(v as i64)
                    })
                    .collect();
                Some(point)
            }
        }
    }
}

/// Rejection-free enough for the small bounds used here; deterministic.
fn uniform_below(rng: &mut rand_chacha::ChaCha20Rng, n: u64) -> u64 {
    debug_assert!(n > 0);
    rng.next_u64() % n
}

/// Coordinate-wise truncation to the first `first_n` coordinates, with
/// duplicates removed and first-occurrence order preserved.
pub fn project(
    stream: impl Iterator<Item = Vec<Rational>>,
    first_n: usize,
) -> impl Iterator<Item = Vec<Rational>> {
    let mut seen: alloc::collections::BTreeSet<Vec<Rational>> = alloc::collections::BTreeSet::new();
    stream.filter_map(move |p| {
        let mut q = p;
        q.truncate(first_n);
        if seen.insert(q.clone()) {
            Some(q)
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn ints(points: &[Vec<Rational>]) -> Vec<Vec<i64>> {
        points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|r| {
                        assert!(r.is_integer());
                        // small test values
                        let s = alloc::string::ToString::to_string(r);
                        s.parse::<i64>().unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn one_var_grid() {
        let spec = HittingSetSpec::grid(1, 2);
        let pts: Vec<_> = spec.points().unwrap().collect();
        assert_eq!(ints(&pts), alloc::vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn two_var_grid_lex_order() {
        let spec = HittingSetSpec::grid(2, 1);
        let pts: Vec<_> = spec.points().unwrap().collect();
        assert_eq!(
            ints(&pts),
            alloc::vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn grid_hits_simple_nonzero() {
        // x0 x1 - 1 is nonzero at (1, 1)
        let spec = HittingSetSpec::grid(2, 1);
        let hit = spec.points().unwrap().any(|p| {
            let prod = &p[0] * &p[1];
            &prod - &Rational::one() != Rational::zero()
        });
        assert!(hit);
    }

    #[test]
    fn projection_dedups_preserving_order() {
        let spec = HittingSetSpec::grid(2, 1);
        let projected: Vec<_> = project(spec.points().unwrap(), 1).collect();
        assert_eq!(ints(&projected), alloc::vec![vec![0], vec![1]]);

        // project to all coords is the identity
        let full: Vec<_> = project(spec.points().unwrap(), 2).collect();
        assert_eq!(full.len(), 4);

        // explicit duplicate collapse
        let pts = alloc::vec![
            alloc::vec![Rational::zero(), Rational::from_int(5)],
            alloc::vec![Rational::from_int(1), Rational::from_int(5)],
        ];
        let projected: Vec<_> = project(pts.into_iter(), 1).collect();
        assert_eq!(ints(&projected), alloc::vec![vec![0], vec![1]]);
    }

    #[test]
    fn cap_guard_advises_seeded() {
        let mut spec = HittingSetSpec::grid(4, 1000);
        spec.grid_cap = 1000;
        match spec.points() {
            Err(HittingError::GridTooLarge { .. }) => {}
            other => panic!("expected cap error, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn seeded_streams_are_reproducible() {
        let spec = HittingSetSpec::seeded(3, 10, 42, 20);
        let a: Vec<_> = spec.points().unwrap().collect();
        let b: Vec<_> = spec.points().unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
    }

    #[test]
    fn grid_streams_restart_identically() {
        let spec = HittingSetSpec::grid(3, 2);
        let a: Vec<_> = spec.points().unwrap().collect();
        let b: Vec<_> = spec.points().unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 27);
    }
}

//! circfactor: exact candidate-factor lists for algebraic circuits over Q.
//!
//! Exit codes: 0 success; `divides` uses 0 = divides, 1 = does not divide,
//! 2 = error; every other command uses 2 for errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use circfactor_cli::format::{parse_circuit, parse_root_file, serialize_circuit, AnyCircuit, RootSpec};
use circfactor_cli::manifest::{manifest_candidate_files, manifest_input_file, render_verify_report};
use circfactor_cli::runner::{run_candidates, RunOptions};
use circfactor_core::circuit::{formal_degree, formal_degree_in_var, Circuit};
use circfactor_core::densepoly::{expand_capped, ExpandCaps};
use circfactor_core::field::Rational;
use circfactor_core::hitting::Generator;
use circfactor_core::interp::PlanCache;
use circfactor_core::pipeline::{EarlyStop, KPolicy, PipelineConfig};
use circfactor_core::pseudo::{self, PitOracle};
use circfactor_core::verify::{self, VerifyEntry, VerifyReport};

#[derive(Parser)]
#[command(name = "circfactor", version, about = "candidate irreducible factors of algebraic circuits over Q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Args)]
struct HittingOpt {
    /// Point stream: `grid` or `seeded:<seed>:<count>`.
    #[arg(long, default_value = "grid")]
    hitting: String,
}

impl HittingOpt {
    fn generator(&self) -> Result<Generator> {
        if self.hitting == "grid" {
            return Ok(Generator::Grid);
        }
        if let Some(rest) = self.hitting.strip_prefix("seeded:") {
            let mut it = rest.split(':');
            let seed = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| anyhow!("bad seed in --hitting"))?;
            let count = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| anyhow!("bad count in --hitting"))?;
            return Ok(Generator::SeededRandom { seed, count });
        }
        bail!("--hitting must be `grid` or `seeded:<seed>:<count>`")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full search for candidate irreducible factors, into a run directory.
    Candidates {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        size_bound: u64,
        /// Total-degree override (certified by descent when omitted).
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        hitting: HittingOpt,
        #[arg(long)]
        out: PathBuf,
        /// `off` or `on:<max_productive>:<max_points>`.
        #[arg(long, default_value = "on:2:8")]
        early_stop: String,
        /// `factor-bound` (k = 2d^2) or `paper-square` (k = 2D^2).
        #[arg(long, default_value = "factor-bound")]
        k_policy: String,
        /// Also try degree guess d = D.
        #[arg(long)]
        include_full_degree: bool,
        /// Disable the origin-factorization degree feasibility filter.
        #[arg(long)]
        no_degree_filter: bool,
        /// Cap on the degree-guess loop (omitted = the full 1..D-1 range).
        #[arg(long)]
        max_degree_guess: Option<u32>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Candidate multiplicity-one factors of one y-degree; the input must
    /// be monic in its designated y variable.
    MultOne {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ydeg: u32,
        #[arg(long, default_value_t = 64)]
        size_bound: u64,
        #[command(flatten)]
        hitting: HittingOpt,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "on:2:8")]
        early_stop: String,
        #[arg(long, default_value = "factor-bound")]
        k_policy: String,
    },
    /// Does g divide f? Exit 0 yes, 1 no, 2 error.
    Divides {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[command(flatten)]
        hitting: HittingOpt,
    },
    /// Pseudo-resultant of f and g as a (num, den) circuit pair.
    Pseudores {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        /// Output stem: writes <out>.num.circ, <out>.den.circ, <out>.meta.
        #[arg(long)]
        out: PathBuf,
    },
    /// Newton lift: approximate-root circuit from F and a starting root.
    Newton {
        #[arg(long)]
        f: PathBuf,
        /// Root file (`field ...` + `root ...` lines).
        #[arg(long)]
        root: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Minimal-polynomial recovery from an approximate-root circuit.
    Minpoly {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        ydeg: u32,
        #[arg(long)]
        xdeg: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dense expansion of a division-free circuit, to standard output.
    Expand {
        #[arg(long)]
        input: PathBuf,
    },
    /// Heuristic verification of a run's candidates; appends to the
    /// manifest.
    Verify {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        trials: u64,
    },
}

fn parse_early_stop(s: &str) -> Result<EarlyStop> {
    if s == "off" {
        return Ok(EarlyStop::Off);
    }
    if let Some(rest) = s.strip_prefix("on:") {
        let mut it = rest.split(':');
        let max_productive = it
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| anyhow!("bad --early-stop"))?;
        let max_points = it
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| anyhow!("bad --early-stop"))?;
        return Ok(EarlyStop::On {
            max_productive,
            max_points,
        });
    }
    bail!("--early-stop must be `off` or `on:<max_productive>:<max_points>`")
}

fn parse_k_policy(s: &str) -> Result<KPolicy> {
    match s {
        "factor-bound" => Ok(KPolicy::FactorBound),
        "paper-square" => Ok(KPolicy::PaperSquare),
        _ => bail!("--k-policy must be `factor-bound` or `paper-square`"),
    }
}

fn load_q_circuit(path: &PathBuf) -> Result<Circuit<Rational>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = parse_circuit(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    parsed.expect_q().map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_any_circuit(path: &PathBuf) -> Result<AnyCircuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_circuit(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Candidates {
            input,
            size_bound,
            degree,
            hitting,
            out,
            early_stop,
            k_policy,
            include_full_degree,
            no_degree_filter,
            max_degree_guess,
            jobs,
        } => {
            let f = load_q_circuit(&input)?;
            let config = PipelineConfig {
                size_bound,
                degree,
                hitting: hitting.generator()?,
                early_stop: parse_early_stop(&early_stop)?,
                k_policy: parse_k_policy(&k_policy)?,
                include_full_degree,
                degree_filter: !no_degree_filter,
                max_degree_guess,
                ..PipelineConfig::default()
            };
            let opts = RunOptions { config, jobs };
            let manifest = run_candidates(&f, &opts, &out)?;
            let n = manifest.lines().filter(|l| l.starts_with("candidate ")).count();
            eprintln!("wrote {} candidates to {}", n, out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::MultOne {
            input,
            ydeg,
            size_bound,
            hitting,
            out,
            early_stop,
            k_policy,
        } => {
            let f = load_q_circuit(&input)?;
            let Some(yvar) = f.yvar() else {
                eprintln!("error: input has no designated y variable (yvar header)");
                return Ok(ExitCode::from(2));
            };
            // Monicity check: leading y-coefficient identically 1.
            let ytotal = formal_degree_in_var(&f, yvar);
            if ytotal.den != 0 || !is_monic_in_y(&f, yvar, ydeg)? {
                eprintln!("error: input is not monic of y-degree {ydeg}");
                return Ok(ExitCode::from(2));
            }
            let config = PipelineConfig {
                size_bound,
                hitting: hitting.generator()?,
                early_stop: parse_early_stop(&early_stop)?,
                k_policy: parse_k_policy(&k_policy)?,
                ..PipelineConfig::default()
            };
            fs::create_dir_all(&out)?;
            let mut cache = PlanCache::new();
            let mut all = Vec::new();
            for d in 1..ydeg.max(1) {
                let (mut cands, _skips) =
                    circfactor_core::pipeline::candidates_mult_one(&f, d, ydeg, &config, &mut cache)
                        .map_err(|e| anyhow!("{e}"))?;
                for c in &mut cands {
                    c.provenance.deriv_index = 0;
                }
                all.extend(cands);
            }
            // The multiplicity-one search reports its candidates with the
            // y variable kept; extension circuits convert syntactically.
            for (i, c) in all.iter().enumerate() {
                let (circuit, _) = c.to_rational_with_y().map_err(|e| anyhow!("{e}"))?;
                let text = serialize_circuit(&AnyCircuit::Q(circuit));
                fs::write(out.join(format!("candidate_{i}.circ")), text)?;
            }
            eprintln!("wrote {} candidates to {}", all.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Divides { f, g, hitting } => {
            let fc = load_q_circuit(&f)?;
            let gc = load_q_circuit(&g)?;
            let pit = PitOracle {
                generator: hitting.generator()?,
                ..PitOracle::default()
            };
            let mut cache = PlanCache::new();
            match pseudo::divides(&fc, &gc, None, &pit, &mut cache) {
                Ok(true) => Ok(ExitCode::SUCCESS),
                Ok(false) => Ok(ExitCode::from(1)),
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Pseudores { f, g, out } => {
            let fc = load_q_circuit(&f)?;
            let gc = load_q_circuit(&g)?;
            let yvar = fc
                .yvar()
                .ok_or_else(|| anyhow!("f has no designated y variable"))?;
            let _ = yvar;
            let mut cache = PlanCache::new();
            let pit = PitOracle::default();
            let deg_f = true_y_degree(&fc)?;
            let deg_g = true_y_degree(&gc)?;
            let pr = pseudo::pseudo_resultant(&fc, &gc, deg_f, deg_g, &pit, &mut cache)
                .map_err(|e| anyhow!("{e}"))?;
            let num_path = out.with_extension("num.circ");
            let den_path = out.with_extension("den.circ");
            let meta_path = out.with_extension("meta");
            fs::write(&num_path, serialize_circuit(&AnyCircuit::Q(pr.num.clone())))?;
            fs::write(&den_path, serialize_circuit(&AnyCircuit::Q(pr.den.clone())))?;
            fs::write(
                &meta_path,
                format!(
                    "pseudo-resultant v1\nD {}\nd {}\ntruncation {}\n",
                    pr.big_d, pr.small_d, pr.truncation
                ),
            )?;
            eprintln!(
                "wrote {}, {}, {}",
                num_path.display(),
                den_path.display(),
                meta_path.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Newton { f, root, k, out } => {
            let circ = load_any_circuit(&f)?;
            let root_text = fs::read_to_string(&root)?;
            let spec = parse_root_file(&root_text).map_err(|e| anyhow!("{e}"))?;
            let phi = match (circ, spec) {
                (AnyCircuit::Q(c), RootSpec::Q(u)) => {
                    let state = circfactor_core::newton::lift(&c, &u, k as usize)
                        .map_err(|e| anyhow!("{e}"))?;
                    AnyCircuit::Q(state.phi)
                }
                (AnyCircuit::Q(c), RootSpec::Ext(nf, u)) => {
                    let embedded = circfactor_core::circuit::embed_rational::<
                        circfactor_core::field::NumberFieldElem,
                    >(&c, nf)
                    .with_yvar(c.yvar());
                    let state = circfactor_core::newton::lift(&embedded, &u, k as usize)
                        .map_err(|e| anyhow!("{e}"))?;
                    AnyCircuit::Ext(state.phi)
                }
                (AnyCircuit::Ext(c), RootSpec::Ext(nf, u)) => {
                    if c.ctx() != &nf {
                        bail!("root field does not match the circuit's field");
                    }
                    let state = circfactor_core::newton::lift(&c, &u, k as usize)
                        .map_err(|e| anyhow!("{e}"))?;
                    AnyCircuit::Ext(state.phi)
                }
                (AnyCircuit::Ext(_), RootSpec::Q(_)) => {
                    bail!("circuit is over an extension; give the root in that field")
                }
            };
            fs::write(&out, serialize_circuit(&phi))?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Minpoly {
            phi,
            ydeg,
            xdeg,
            k,
            out,
        } => {
            let parsed = load_any_circuit(&phi)?;
            let (circuit_text, meta) = match parsed {
                AnyCircuit::Q(c) => {
                    let rec =
                        circfactor_core::minpoly::recover(&c, ydeg as usize, xdeg as usize, k as usize)
                            .map_err(|e| anyhow!("{e}"))?;
                    let two = minpoly_two_output(&rec)?;
                    (
                        serialize_circuit(&AnyCircuit::Q(two)),
                        format!("minpoly v1\nd {ydeg}\nD {xdeg}\nk {k}\n"),
                    )
                }
                AnyCircuit::Ext(c) => {
                    let rec =
                        circfactor_core::minpoly::recover(&c, ydeg as usize, xdeg as usize, k as usize)
                            .map_err(|e| anyhow!("{e}"))?;
                    let two = minpoly_two_output(&rec)?;
                    (
                        serialize_circuit(&AnyCircuit::Ext(two)),
                        format!("minpoly v1\nd {ydeg}\nD {xdeg}\nk {k}\n"),
                    )
                }
            };
            fs::write(&out, circuit_text)?;
            fs::write(out.with_extension("meta"), meta)?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Expand { input } => {
            let parsed = load_any_circuit(&input)?;
            let caps = ExpandCaps::default();
            match parsed {
                AnyCircuit::Q(c) => {
                    let polys = expand_capped(&c, &caps).map_err(|e| anyhow!("{e}"))?;
                    for p in polys {
                        println!("{}", p.to_canonical_string());
                    }
                }
                AnyCircuit::Ext(c) => {
                    let polys = expand_capped(&c, &caps).map_err(|e| anyhow!("{e}"))?;
                    for p in polys {
                        println!("{}", p.to_canonical_string());
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            manifest,
            seed,
            trials,
        } => {
            let dir = manifest
                .parent()
                .ok_or_else(|| anyhow!("manifest path has no parent directory"))?;
            let text = fs::read_to_string(&manifest)?;
            if text.contains("\nverify-report ") || text.starts_with("verify-report ") {
                bail!("manifest already contains a verify report; manifests are append-only per run");
            }
            let input_file = manifest_input_file(&text)
                .ok_or_else(|| anyhow!("manifest lacks input-file record"))?;
            let input = load_q_circuit(&dir.join(&input_file))?;
            let files = manifest_candidate_files(&text);
            let mut entries = Vec::with_capacity(files.len());
            for (i, name) in files.iter().enumerate() {
                let cand = load_q_circuit(&dir.join(name))?;
                let wd = verify::probable_well_defined(&cand, seed, trials);
                let status = match wd {
                    verify::Status::Verified => verify::probable_divides_exact(
                        &input,
                        &cand,
                        seed,
                        trials,
                        &ExpandCaps::default(),
                    ),
                    other => other,
                };
                entries.push(VerifyEntry {
                    candidate_index: i,
                    status,
                    points_used: trials,
                });
            }
            let report = VerifyReport {
                seed,
                trials,
                entries,
            };
            let rendered = render_verify_report(&report);
            let mut appended = text;
            appended.push_str(&rendered);
            fs::write(&manifest, appended)?;
            eprintln!("appended verify report to {}", manifest.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Two-output serialization of a recovered minimal polynomial:
/// numerator (den*y^d + sum num_i y^i) and den, sharing their subgraph.
fn minpoly_two_output<F: circfactor_core::field::Field>(
    rec: &circfactor_core::minpoly::RecoveredMinPoly<F>,
) -> Result<Circuit<F>> {
    use circfactor_core::circuit::CircuitBuilder;
    let yvar = rec
        .circuit
        .yvar()
        .unwrap_or(rec.circuit.nvars().saturating_sub(1));
    let mut b = CircuitBuilder::<F>::new(rec.circuit.ctx().clone(), rec.circuit.nvars());
    let map = b.import(&rec.circuit);
    let nums: Vec<_> = (0..rec.d)
        .map(|i| map[rec.circuit.outputs()[i] as usize])
        .collect();
    let den = map[rec.circuit.outputs()[rec.d] as usize];
    let y = b.var(yvar);
    let mut terms = Vec::with_capacity(rec.d + 1);
    let mut ypow = b.one();
    for &num in &nums {
        let t = b.mul(num, ypow);
        terms.push(t);
        ypow = b.mul(ypow, y);
    }
    let top = b.mul(den, ypow);
    terms.push(top);
    let total = b.add_many(&terms);
    Ok(b.finish(vec![total, den]).with_yvar(Some(yvar)))
}

fn is_monic_in_y(f: &Circuit<Rational>, yvar: u32, ydeg: u32) -> Result<bool> {
    let mut cache = PlanCache::new();
    let bound = formal_degree_in_var(f, yvar);
    if bound.den != 0 {
        return Ok(false);
    }
    let plan = cache.plan(bound.num.max(ydeg as u64) as usize);
    let top = circfactor_core::interp::coefficient_of(f, yvar, ydeg as usize, &plan)
        .map_err(|e| anyhow!("{e}"))?;
    // top ≡ 1 iff top - 1 ≡ 0.
    let diff = {
        use circfactor_core::circuit::CircuitBuilder;
        let mut b = CircuitBuilder::<Rational>::new((), f.nvars());
        let m = b.import(&top);
        let root = m[top.outputs()[0] as usize];
        let one = b.one();
        let d = b.sub(root, one);
        b.finish_single(d)
    };
    let pit = PitOracle::default();
    pseudo::PitOracle::is_zero(&pit, &diff)
        .map_err(|e| anyhow!("{e}"))
        .map(|z| z)
}

/// Exact y-degree by descent: largest r with a nonzero y^r coefficient.
fn true_y_degree(f: &Circuit<Rational>) -> Result<u64> {
    let yvar = f
        .yvar()
        .ok_or_else(|| anyhow!("circuit has no designated y variable"))?;
    let mut cache = PlanCache::new();
    let bound = formal_degree_in_var(f, yvar);
    if bound.den != 0 {
        bail!("division gates present");
    }
    let total = formal_degree(f);
    let _ = total;
    let plan = cache.plan(bound.num as usize);
    let pit = PitOracle::default();
    for r in (0..=bound.num).rev() {
        let c = circfactor_core::interp::coefficient_of(f, yvar, r as usize, &plan)
            .map_err(|e| anyhow!("{e}"))?;
        if !pit.is_zero(&c).map_err(|e| anyhow!("{e}"))? {
            return Ok(r);
        }
    }
    bail!("zero circuit")
}

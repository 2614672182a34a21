//! Run orchestration: executes a pipeline search and lays the results out
//! in a run directory (input copy, manifest, candidate circuit files,
//! timing sidecar). Manifests are append-only: a directory that already
//! holds one refuses a rerun.

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};

use circfactor_core::circuit::Circuit;
use circfactor_core::field::Rational;
use circfactor_core::interp::PlanCache;
use circfactor_core::pipeline::{
    self, candidates_mult_one, effective_degree, monicize, FactorCandidate, PipelineConfig,
    PipelineRun, RawFactorCandidate, SkipRecord,
};

use crate::format::{serialize_circuit, AnyCircuit};
use crate::manifest::render_manifest;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub config: PipelineConfig,
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            config: PipelineConfig::default(),
            jobs: 1,
        }
    }
}

pub fn sha256_hex(data: &str) -> String {
    let mut h = Sha256::new();
    h.update(data.as_bytes());
    hex::encode(h.finalize())
}

/// Runs the full search and writes the run directory. Returns the
/// rendered manifest text.
pub fn run_candidates(
    input: &Circuit<Rational>,
    opts: &RunOptions,
    out_dir: &Path,
) -> Result<String> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating run directory {}", out_dir.display()))?;
    let manifest_path = out_dir.join("manifest");
    if manifest_path.exists() {
        bail!(
            "manifest already exists at {}; reruns require a fresh directory",
            manifest_path.display()
        );
    }

    let started = Instant::now();
    let run = if opts.jobs > 1 {
        candidates_all_parallel(input, &opts.config, opts.jobs)
            .map_err(|e| anyhow::anyhow!("{e}"))?
    } else {
        pipeline::candidates_all(input, &opts.config).map_err(|e| anyhow::anyhow!("{e}"))?
    };
    let elapsed = started.elapsed();

    let input_text = serialize_circuit(&AnyCircuit::Q(input.clone()));
    let input_hash = sha256_hex(&input_text);
    fs::write(out_dir.join("input.circ"), &input_text)?;

    let mut candidate_files = Vec::with_capacity(run.candidates.len());
    for (i, c) in run.candidates.iter().enumerate() {
        let name = format!("candidate_{i}.circ");
        let text = serialize_circuit(&AnyCircuit::Q(c.circuit.clone()));
        fs::write(out_dir.join(&name), text)?;
        candidate_files.push(name);
    }

    let manifest = render_manifest(&run, &input_hash, "input.circ", &candidate_files);
    fs::write(&manifest_path, &manifest)?;
    // Wall-clock timings stay out of the manifest so reruns compare
    // byte-for-byte.
    let timing = format!("candidates-wall-ms {}\n", elapsed.as_millis());
    fs::write(out_dir.join("timings.txt"), timing)?;
    Ok(manifest)
}

/// Deterministic-merge parallel variant of `candidates_all`: the
/// (derivative index, degree guess) combinations run on `jobs` threads and
/// the results are stitched back in loop order.
pub fn candidates_all_parallel(
    f: &Circuit<Rational>,
    config: &PipelineConfig,
    jobs: usize,
) -> Result<PipelineRun, pipeline::PipelineError> {
    use circfactor_core::hitting::HittingSetSpec;

    if !f.is_division_free() {
        return Err(pipeline::PipelineError::DivisionGates);
    }
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
    let (monic, alpha, gamma) = monicize(f, degree, &hs)?;
    let yvar = monic.yvar().expect("monicize designates y");
    let n = f.nvars();

    // Work list in deterministic order.
    let mut combos: Vec<(u32, u32, Circuit<Rational>, u32)> = Vec::new();
    for i in 0..degree {
        let ydeg_i = degree - i;
        let f_i = pipeline::monic_derivative(&monic, yvar, degree, i, &mut cache)?;
        let mut d_top = if config.include_full_degree {
            ydeg_i
        } else {
            ydeg_i.saturating_sub(1)
        };
        if let Some(cap) = config.max_degree_guess {
            d_top = d_top.min(cap);
        }
        for d in 1..=d_top {
            combos.push((i, d, f_i.clone(), ydeg_i));
        }
    }

    type ComboOut = (Vec<RawFactorCandidate>, Vec<SkipRecord>);
    let mut results: Vec<Option<Result<ComboOut, pipeline::PipelineError>>> =
        (0..combos.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results_mx = std::sync::Mutex::new(&mut results);
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1) {
            scope.spawn(|| {
                let mut local_cache = PlanCache::new();
                loop {
                    let idx = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if idx >= combos.len() {
                        break;
                    }
                    let (i, d, ref f_i, ydeg_i) = combos[idx];
                    let out = candidates_mult_one(f_i, d, ydeg_i, config, &mut local_cache).map(
                        |(mut cands, mut skips)| {
                            for c in &mut cands {
                                c.provenance.deriv_index = i;
                            }
                            for s in &mut skips {
                                s.deriv_index = i;
                            }
                            (cands, skips)
                        },
                    );
                    results_mx.lock().unwrap()[idx] = Some(out);
                }
            });
        }
    });

    let mut all = Vec::new();
    let mut skips = Vec::new();
    for slot in results {
        let (cands, skipped) = slot.expect("combo completed")?;
        for raw in cands {
            let (circuit, converted) = raw.finalize(yvar, n)?;
            all.push(FactorCandidate {
                circuit,
                provenance: raw.provenance,
                converted_from_extension: converted,
            });
        }
        skips.extend(skipped);
    }

    let mut seen = std::collections::BTreeSet::new();
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

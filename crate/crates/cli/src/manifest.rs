//! The run manifest: one structured text file with a stable field order.
//! Two runs with the same inputs and flags must produce byte-identical
//! manifests, so nothing time- or machine-dependent goes in here; wall
//! clock readings live in a sidecar.

use std::fmt::Write as _;

use circfactor_core::field::Rational;
use circfactor_core::hitting::Generator;
use circfactor_core::pipeline::{EarlyStop, KPolicy, PipelineRun};
use circfactor_core::verify::VerifyReport;

pub fn hitting_string(g: &Generator) -> String {
    match g {
        Generator::Grid => "grid".into(),
        Generator::SeededRandom { seed, count } => format!("seeded:{seed}:{count}"),
    }
}

pub fn early_stop_string(e: &EarlyStop) -> String {
    match e {
        EarlyStop::Off => "off".into(),
        EarlyStop::On {
            max_productive,
            max_points,
        } => format!("on:{max_productive}:{max_points}"),
    }
}

pub fn k_policy_string(k: &KPolicy) -> String {
    match k {
        KPolicy::FactorBound => "factor-bound".into(),
        KPolicy::PaperSquare => "paper-square".into(),
    }
}

fn rationals_csv(rs: &[Rational]) -> String {
    let parts: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(",")
    }
}

/// Renders the full manifest for a completed run. `input_hash` is the
/// sha256 of the serialized input circuit; `candidate_files` pairs with
/// `run.candidates` by index.
pub fn render_manifest(
    run: &PipelineRun,
    input_hash: &str,
    input_file: &str,
    candidate_files: &[String],
) -> String {
    assert_eq!(candidate_files.len(), run.candidates.len());
    let mut out = String::new();
    out.push_str("manifest v1\n");
    let _ = writeln!(out, "input-file {input_file}");
    let _ = writeln!(out, "input-hash sha256:{input_hash}");
    let _ = writeln!(out, "degree {}", run.degree);
    let _ = writeln!(out, "param size-bound {}", run.config.size_bound);
    let _ = writeln!(out, "param hitting {}", hitting_string(&run.config.hitting));
    let _ = writeln!(
        out,
        "param early-stop {}",
        early_stop_string(&run.config.early_stop)
    );
    let _ = writeln!(out, "param k-policy {}", k_policy_string(&run.config.k_policy));
    let _ = writeln!(
        out,
        "param include-full-degree {}",
        run.config.include_full_degree
    );
    let _ = writeln!(out, "param degree-filter {}", run.config.degree_filter);
    match run.config.max_degree_guess {
        Some(cap) => {
            let _ = writeln!(out, "param max-degree-guess {cap}");
        }
        None => {
            let _ = writeln!(out, "param max-degree-guess none");
        }
    }
    let _ = writeln!(out, "monic-alpha {}", rationals_csv(&run.alpha));
    let _ = writeln!(out, "monic-gamma {}", run.gamma);
    for (i, (c, file)) in run.candidates.iter().zip(candidate_files).enumerate() {
        let p = &c.provenance;
        let _ = writeln!(
            out,
            "candidate {i} file {file} deriv {} degree {} center {} root {} k {} xdeg {} ext {}",
            p.deriv_index,
            p.degree_guess,
            rationals_csv(&p.center),
            rationals_csv(&p.root_poly),
            p.k,
            p.xdeg,
            c.converted_from_extension
        );
    }
    for s in &run.skips {
        let root = s
            .root_poly
            .as_deref()
            .map(rationals_csv)
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "skip deriv {} degree {} center {} root {} reason {}",
            s.deriv_index,
            s.degree_guess,
            rationals_csv(&s.center),
            root,
            s.reason
        );
    }
    for (label, value) in &run.measurements {
        let _ = writeln!(out, "measure {label} {value}");
    }
    out.push_str("end\n");
    out
}

/// Renders a verify report for appending to an existing manifest.
pub fn render_verify_report(report: &VerifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "verify-report seed {} trials {}",
        report.seed, report.trials
    );
    for e in &report.entries {
        let _ = writeln!(
            out,
            "verify {} status {} points {}",
            e.candidate_index, e.status, e.points_used
        );
    }
    out.push_str("verify-end\n");
    out
}

/// Pulls `candidate <i> file <name> ...` records back out of a manifest.
pub fn manifest_candidate_files(manifest: &str) -> Vec<String> {
    manifest
        .lines()
        .filter_map(|l| {
            let toks: Vec<&str> = l.split(' ').collect();
            match toks.as_slice() {
                ["candidate", _, "file", name, ..] => Some((*name).to_string()),
                _ => None,
            }
        })
        .collect()
}

/// The input file recorded in a manifest.
pub fn manifest_input_file(manifest: &str) -> Option<String> {
    manifest
        .lines()
        .find_map(|l| l.strip_prefix("input-file ").map(|s| s.to_string()))
}

//! `qmarg`: JSON-in, JSON-out workflows over marginal spectra of pure
//! multi-qubit states.
//!
//! Exit codes: 0 = success/feasible, 1 = infeasible or violation found,
//! 2 = invalid input. Reports go to stdout with sorted keys so equal runs
//! are byte-identical.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qmarginals::certify::necessity_certificate;
use qmarginals::explorer::{default_pairs, qudit_polygon_check, search_mixed4, SearchConfig};
use qmarginals::io;
use qmarginals::statevec::DensityMatrix;
use qmarginals::{check_polygon, synth_density, synth_spectrum, Error, PureState, Spectrum};

#[derive(Parser)]
#[command(
    name = "qmarg",
    version,
    about = "Feasibility, synthesis, and verification of one-qubit marginal spectra of pure states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide feasibility of a spectrum file via the polygon inequalities.
    Check {
        /// JSON file {"lambdas": [...]}
        spectrum: PathBuf,
        /// One-sided feasibility tolerance.
        #[arg(long, default_value_t = qmarginals::tol::DEFAULT_POLYGON_EPS)]
        eps: f64,
    },
    /// Synthesize a pure state realizing a spectrum.
    Synth {
        spectrum: PathBuf,
        /// Where to write the state file.
        #[arg(long)]
        out: PathBuf,
        /// Optional recursion-trace report file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Synthesize a pure state matching full one-qubit density targets.
    SynthRho {
        /// JSON file {"rhos": [2x2 matrices as [re, im] pairs]}
        targets: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reduced density matrices of a state file.
    Reduce {
        state: PathBuf,
        /// Single qubit to reduce to (1-based).
        #[arg(long, conflicts_with = "subset")]
        qubit: Option<usize>,
        /// Comma-separated subset, e.g. --subset 1,2.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
    },
    /// Haar-sample states and check every one-qubit spectrum.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        /// Also run the full inequality-chain certificate on every state
        /// and qubit.
        #[arg(long)]
        certify: bool,
    },
    /// Run the inequality-chain certificate on a state file.
    Certify {
        state: PathBuf,
        /// Single qubit to certify (default: all).
        #[arg(long)]
        qubit: Option<usize>,
    },
    /// Multi-restart search for a four-qubit state whose pair marginals
    /// are all totally mixed (expected to stay strictly positive).
    SearchMixed {
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        /// Comma-separated pairs like 1-2,1-3,1-4.
        #[arg(long)]
        pairs: Option<String>,
        /// Where to write the best state found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generalized polygon check for a qudit state file.
    QuditCheck {
        state: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, code) = match run(cli.command) {
        Ok(pair) => pair,
        Err(err) => {
            let code = match err {
                Error::Infeasible { .. } | Error::TheoremViolation { .. } => 1u8,
                _ => 2u8,
            };
            (json!({ "error": err.to_string() }), code)
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    ExitCode::from(code)
}

type Outcome = Result<(Value, u8), Error>;

fn run(command: Command) -> Outcome {
    match command {
        Command::Check { spectrum, eps } => cmd_check(&spectrum, eps),
        Command::Synth {
            spectrum,
            out,
            trace,
        } => cmd_synth(&spectrum, &out, trace.as_deref()),
        Command::SynthRho { targets, out } => cmd_synth_rho(&targets, &out),
        Command::Reduce {
            state,
            qubit,
            subset,
        } => cmd_reduce(&state, qubit, subset),
        Command::Sample {
            n,
            count,
            seed,
            certify,
        } => cmd_sample(n, count, seed, certify),
        Command::Certify { state, qubit } => cmd_certify(&state, qubit),
        Command::SearchMixed {
            restarts,
            seed,
            max_iters,
            pairs,
            out,
        } => cmd_search_mixed(restarts, seed, max_iters, pairs.as_deref(), out.as_deref()),
        Command::QuditCheck { state, eps } => cmd_qudit_check(&state, eps),
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidConfig {
        reason: format!("cannot read {}: {e}", path.display()),
    })
}

fn write_json(path: &Path, value: &Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).expect("value serializes");
    std::fs::write(path, text + "\n").map_err(|e| Error::InvalidConfig {
        reason: format!("cannot write {}: {e}", path.display()),
    })
}

fn density_to_json(dm: &DensityMatrix) -> Value {
    let dim = dm.dim();
    let rows: Vec<Vec<[f64; 2]>> = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| [dm.entry(r, c).re, dm.entry(r, c).im])
                .collect()
        })
        .collect();
    json!(rows)
}

fn spectrum_of(state: &PureState) -> Result<Spectrum, Error> {
    let lambdas: Vec<f64> = (1..=state.n())
        .map(|k| Ok(state.reduce_one_qubit(k)?.eig2().lambda_small))
        .collect::<Result<_, Error>>()?;
    Spectrum::new(lambdas)
}

fn cmd_check(path: &Path, eps: f64) -> Outcome {
    let spec = io::spectrum_from_str(&read_file(path)?)?;
    let report = check_polygon(&spec, eps);
    let code = u8::from(!report.feasible);
    Ok((io::to_sorted_json(&report), code))
}

fn cmd_synth(path: &Path, out: &Path, trace: Option<&Path>) -> Outcome {
    let spec = io::spectrum_from_str(&read_file(path)?)?;
    let result = synth_spectrum(&spec)?;
    write_json(out, &io::state_to_json(&result.state))?;
    if let Some(trace_path) = trace {
        write_json(
            trace_path,
            &json!({ "levels": io::to_sorted_json(&result.trace) }),
        )?;
    }
    let max_error = spec
        .lambdas()
        .iter()
        .zip(result.achieved.lambdas())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    let report = json!({
        "requested": spec.lambdas(),
        "achieved": result.achieved.lambdas(),
        "max_error": max_error,
        "state_file": out.display().to_string(),
        "trace_levels": result.trace.len(),
    });
    Ok((report, 0))
}

fn cmd_synth_rho(path: &Path, out: &Path) -> Outcome {
    let targets = io::density_targets_from_str(&read_file(path)?)?;
    let state = synth_density(&targets)?;
    write_json(out, &io::state_to_json(&state))?;
    let mut deviations = Vec::with_capacity(targets.len());
    for (k, target) in targets.iter().enumerate() {
        let got = state.reduce_one_qubit(k + 1)?;
        deviations.push(got.max_entry_distance(target));
    }
    let report = json!({
        "marginal_deviations": deviations,
        "max_deviation": deviations.iter().copied().fold(0.0f64, f64::max),
        "state_file": out.display().to_string(),
    });
    Ok((report, 0))
}

fn cmd_reduce(path: &Path, qubit: Option<usize>, subset: Option<Vec<usize>>) -> Outcome {
    let state = io::state_from_str(&read_file(path)?)?;
    let report = if let Some(k) = qubit {
        let rho = state.reduce_one_qubit(k)?;
        let e = rho.eig2();
        let dm = state.reduce_subset(&[k])?;
        json!({
            "qubit": k,
            "rho": density_to_json(&dm),
            "eigenvalues": [e.lambda_small, e.lambda_large],
            "degenerate": e.degenerate,
        })
    } else if let Some(subset) = subset {
        let dm = state.reduce_subset(&subset)?;
        json!({
            "subset": subset,
            "rho": density_to_json(&dm),
            "eigenvalues": dm.eigenvalues(),
        })
    } else {
        let spec = spectrum_of(&state)?;
        let mut rhos = Vec::new();
        for k in 1..=state.n() {
            rhos.push(density_to_json(&state.reduce_subset(&[k])?));
        }
        json!({
            "spectrum": spec.lambdas(),
            "rhos": rhos,
        })
    };
    Ok((report, 0))
}

fn cmd_sample(n: usize, count: usize, seed: u64, certify: bool) -> Outcome {
    let mut min_slack = f64::INFINITY;
    let mut worst_seed = seed;
    let mut certified = 0usize;
    for i in 0..count {
        let state_seed = seed.wrapping_add(i as u64);
        let state = PureState::haar(n, state_seed)?;
        let report = check_polygon(&spectrum_of(&state)?, 0.0);
        if report.min_slack < min_slack {
            min_slack = report.min_slack;
            worst_seed = state_seed;
        }
        if certify {
            for k in 1..=n {
                necessity_certificate(&state, k)?;
                certified += 1;
            }
        }
    }
    let all_ok = min_slack >= -1e-12;
    let report = json!({
        "n": n,
        "count": count,
        "seed": seed,
        "min_slack": min_slack,
        "worst_seed": worst_seed,
        "all_feasible": all_ok,
        "certificates_checked": certified,
    });
    Ok((report, u8::from(!all_ok)))
}

fn cmd_certify(path: &Path, qubit: Option<usize>) -> Outcome {
    let state = io::state_from_str(&read_file(path)?)?;
    let qubits: Vec<usize> = match qubit {
        Some(k) => vec![k],
        None => (1..=state.n()).collect(),
    };
    let mut reports = Vec::new();
    for k in qubits {
        reports.push(io::to_sorted_json(&necessity_certificate(&state, k)?));
    }
    Ok((json!({ "certificates": reports }), 0))
}

fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>, Error> {
    text.split(',')
        .map(|chunk| {
            let mut it = chunk.trim().split('-');
            let a = it.next().and_then(|x| x.parse::<usize>().ok());
            let b = it.next().and_then(|x| x.parse::<usize>().ok());
            match (a, b, it.next()) {
                (Some(a), Some(b), None) => Ok((a, b)),
                _ => Err(Error::InvalidConfig {
                    reason: format!("cannot parse pair '{chunk}'; expected like 1-2"),
                }),
            }
        })
        .collect()
}

fn cmd_search_mixed(
    restarts: usize,
    seed: u64,
    max_iters: usize,
    pairs: Option<&str>,
    out: Option<&Path>,
) -> Outcome {
    let pairs = match pairs {
        Some(text) => parse_pairs(text)?,
        None => default_pairs(),
    };
    let config = SearchConfig {
        restarts,
        max_iters,
        seed,
        pairs,
        ..Default::default()
    };
    let result = search_mixed4(&config)?;
    if let Some(path) = out {
        write_json(path, &io::state_to_json(&result.best_state))?;
    }
    let report = json!({
        "best_objective": result.best_objective,
        "objective": result.objective,
        "restarts": restarts,
        "per_restart": io::to_sorted_json(&result.per_restart),
        "best_state_file": out.map(|p| p.display().to_string()),
    });
    Ok((report, 0))
}

fn cmd_qudit_check(path: &Path, eps: f64) -> Outcome {
    let state = io::qudit_state_from_str(&read_file(path)?)?;
    let report = qudit_polygon_check(&state, eps);
    let code = u8::from(!report.satisfied);
    Ok((io::to_sorted_json(&report), code))
}

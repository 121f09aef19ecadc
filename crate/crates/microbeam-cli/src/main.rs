//! Command-line entry point exposing the verification workflows with
//! machine-readable output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/config error.

mod config;
mod output;
mod verify;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::{OutputFormat, RunConfig, SCHEMA_VERSION};
use microbeam::observability::{classify, observability_constants, OperatorId};
use microbeam::quadrature::QuadConfig;
use microbeam::simulate::{energy_trace, output_series, random_state, ModalState};
use microbeam::spectrum::{
    a_of_lambda, char_det, compute_spectrum_with, SpectralBasis, SpectrumParams,
};
use output::{write_text, Sink};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "microbeam",
    version,
    about = "Spectral analysis and boundary-observability verification for a strain-gradient cantilever",
    after_help = "A JSON config file (--config or MICROBEAM_CONFIG) supplies defaults; explicit flags win."
)]
struct Cli {
    /// JSON config file merged under explicit flags
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the six characteristic-polynomial roots at one (zeta, lambda)
    Charpoly {
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long)]
        lambda: f64,
    },
    /// Compute the first N eigenvalues with asymptotic-seed diagnostics
    Spectrum {
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum)]
        output: Option<OutputFormat>,
        #[arg(long, value_name = "FILE")]
        output_path: Option<PathBuf>,
    },
    /// Sample one eigenfunction: CSV columns x, phi, phi_xx, phi_xxx
    Modes {
        #[arg(long)]
        zeta: Option<f64>,
        /// Mode ordinal (1-based)
        #[arg(long)]
        n: Option<usize>,
        /// Number of uniform sample points on [0, 1]
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long, value_enum)]
        output: Option<OutputFormat>,
        #[arg(long, value_name = "FILE")]
        output_path: Option<PathBuf>,
    },
    /// Observation values |C psi_k| over the basis plus the classification
    Observe {
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        operator: OperatorArg,
        #[arg(long, value_enum)]
        output: Option<OutputFormat>,
        #[arg(long, value_name = "FILE")]
        output_path: Option<PathBuf>,
    },
    /// Observability constants of the time-domain estimate
    Constants {
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long = "T")]
        horizon: Option<f64>,
    },
    /// Zero-input modal simulation: CSV columns t, y, E
    Simulate {
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "T")]
        horizon: Option<f64>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        /// Initial state: `random:SEED` or a JSON file with {"a": [...], "b": [...]}
        #[arg(long, default_value = "random:0")]
        state: String,
        #[arg(long, value_enum)]
        output: Option<OutputFormat>,
        #[arg(long, value_name = "FILE")]
        output_path: Option<PathBuf>,
    },
    /// Verification workflows (exit 1 when a check fails)
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum OperatorArg {
    C1,
    C2,
    C3,
}

impl From<OperatorArg> for OperatorId {
    fn from(v: OperatorArg) -> Self {
        match v {
            OperatorArg::C1 => OperatorId::C1,
            OperatorArg::C2 => OperatorId::C2,
            OperatorArg::C3 => OperatorId::C3,
        }
    }
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Eigenfunction integral identities and boundary bounds
    Identities {
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_name = "FILE")]
        output_path: Option<PathBuf>,
    },
    /// Two-sided observability estimate on random unit-energy states
    Observability {
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "T")]
        horizon: Option<f64>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "FILE")]
        output_path: Option<PathBuf>,
    },
    /// Full check battery: orthonormality, identities, observation bounds,
    /// gap growth, multiplier identity, observability sandwich
    All {
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "T")]
        horizon: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "FILE")]
        output_path: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn build_basis(cfg: &RunConfig) -> Result<SpectralBasis<f64>> {
    let mut params = SpectrumParams::new(cfg.zeta, cfg.n_modes);
    params.tol = cfg.tol;
    params.quadrature = QuadConfig {
        panels: cfg.quadrature.panels,
        nodes_per_panel: cfg.quadrature.nodes,
    };
    compute_spectrum_with(&params).context("computing spectrum")
}

fn run(cli: Cli) -> Result<i32> {
    let base = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Charpoly { zeta, lambda } => {
            let mut cfg = base;
            if let Some(z) = zeta {
                cfg.zeta = z;
            }
            cfg.validate()?;
            cmd_charpoly(&cfg, lambda)
        }
        Command::Spectrum {
            zeta,
            n,
            tol,
            output,
            output_path,
        } => {
            let cfg = resolve(base, zeta, n, tol, None, None, output, output_path)?;
            cmd_spectrum(&cfg)
        }
        Command::Modes {
            zeta,
            n,
            grid,
            output,
            output_path,
        } => {
            let mode_n = n.unwrap_or(1);
            let mut cfg = resolve(base, zeta, None, None, None, None, output, output_path)?;
            cfg.n_modes = cfg.n_modes.max(mode_n);
            cmd_modes(&cfg, mode_n, grid)
        }
        Command::Observe {
            zeta,
            n,
            operator,
            output,
            output_path,
        } => {
            let cfg = resolve(base, zeta, n, None, None, None, output, output_path)?;
            cmd_observe(&cfg, operator.into())
        }
        Command::Constants { zeta, horizon } => {
            let cfg = resolve(base, zeta, None, None, horizon, None, None, None)?;
            cmd_constants(&cfg)
        }
        Command::Simulate {
            zeta,
            n,
            horizon,
            samples,
            state,
            output,
            output_path,
        } => {
            let cfg = resolve(base, zeta, n, None, horizon, None, output, output_path)?;
            cmd_simulate(&cfg, samples, &state)
        }
        Command::Verify { what } => match what {
            VerifyCommand::Identities {
                zeta,
                n,
                output_path,
            } => {
                let cfg = resolve(base, zeta, n, None, None, None, None, output_path)?;
                verify::identities(&cfg)
            }
            VerifyCommand::Observability {
                zeta,
                n,
                horizon,
                trials,
                seed,
                output_path,
            } => {
                let cfg = resolve(base, zeta, n, None, horizon, seed, None, output_path)?;
                verify::observability(&cfg, trials)
            }
            VerifyCommand::All {
                zeta,
                n,
                horizon,
                seed,
                output_path,
            } => {
                let cfg = resolve(base, zeta, n, None, horizon, seed, None, output_path)?;
                verify::all(&cfg)
            }
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn resolve(
    mut cfg: RunConfig,
    zeta: Option<f64>,
    n: Option<usize>,
    tol: Option<f64>,
    horizon: Option<f64>,
    seed: Option<u64>,
    output: Option<OutputFormat>,
    output_path: Option<PathBuf>,
) -> Result<RunConfig> {
    if let Some(v) = zeta {
        cfg.zeta = v;
    }
    if let Some(v) = n {
        cfg.n_modes = v;
    }
    if let Some(v) = tol {
        cfg.tol = v;
    }
    if let Some(v) = horizon {
        cfg.horizon = v;
    }
    if let Some(v) = seed {
        cfg.seed = v;
    }
    if let Some(v) = output {
        cfg.output_format = v;
    }
    if let Some(v) = output_path {
        cfg.output_path = Some(v);
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct ComplexOut {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct CharpolyOut {
    schema: u32,
    zeta: f64,
    lambda: f64,
    /// Roots in the order [s1, -s1, s2, -s2, s3, -s3].
    roots: Vec<ComplexOut>,
    max_relative_residual: f64,
    /// Indicator value and log-scale of the boundary determinant, when the
    /// fundamental set is non-degenerate at this lambda.
    determinant: Option<DetOut>,
}

#[derive(Serialize)]
struct DetOut {
    indicator: f64,
    log_scale: f64,
}

fn cmd_charpoly(cfg: &RunConfig, lambda: f64) -> Result<i32> {
    let roots = microbeam::charpoly::roots(cfg.zeta, lambda)?;
    let det = char_det(cfg.zeta, lambda).ok().map(|d| DetOut {
        indicator: d.indicator,
        log_scale: d.log_scale,
    });
    let out = CharpolyOut {
        schema: SCHEMA_VERSION,
        zeta: cfg.zeta,
        lambda,
        roots: roots
            .all_six()
            .iter()
            .map(|z| ComplexOut { re: z.re, im: z.im })
            .collect(),
        max_relative_residual: roots.max_relative_residual(),
        determinant: det,
    };
    write_text(&Sink::stdout(), &output::to_json(&out)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct SpectrumOut {
    schema: u32,
    zeta: f64,
    modes: Vec<SpectrumMode>,
}

#[derive(Serialize)]
struct SpectrumMode {
    n: usize,
    lambda: f64,
    a: f64,
    seed_error: f64,
}

fn spectrum_rows(basis: &SpectralBasis<f64>) -> Vec<SpectrumMode> {
    basis
        .modes()
        .iter()
        .zip(basis.seed_errors())
        .map(|(m, se)| SpectrumMode {
            n: m.n,
            lambda: m.lambda,
            a: a_of_lambda(basis.zeta(), m.lambda).unwrap_or(f64::NAN),
            seed_error: *se,
        })
        .collect()
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<i32> {
    let basis = build_basis(cfg)?;
    let rows = spectrum_rows(&basis);
    let sink = Sink::from_config(cfg);
    match cfg.output_format {
        OutputFormat::Json => {
            let out = SpectrumOut {
                schema: SCHEMA_VERSION,
                zeta: cfg.zeta,
                modes: rows,
            };
            write_text(&sink, &output::to_json(&out)?)?;
        }
        OutputFormat::Csv => {
            let mut text = String::from("n,lambda,a,seed_error\n");
            for r in rows {
                text.push_str(&format!(
                    "{},{:.12e},{:.12e},{:.6e}\n",
                    r.n, r.lambda, r.a, r.seed_error
                ));
            }
            write_text(&sink, &text)?;
        }
    }
    Ok(0)
}

fn cmd_modes(cfg: &RunConfig, n: usize, grid: usize) -> Result<i32> {
    anyhow::ensure!(grid >= 2, "grid must have at least 2 points");
    let basis = build_basis(cfg)?;
    let mode = basis.mode(n)?;
    let sink = Sink::from_config(cfg);
    let mut text = String::from("x,phi,phi_xx,phi_xxx\n");
    for i in 0..grid {
        let x = i as f64 / (grid - 1) as f64;
        text.push_str(&format!(
            "{:.8},{:.12e},{:.12e},{:.12e}\n",
            x,
            mode.evaluate(x, 0)?,
            mode.evaluate(x, 2)?,
            mode.evaluate(x, 3)?
        ));
    }
    write_text(&sink, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct ObserveOut {
    schema: u32,
    zeta: f64,
    n_modes: usize,
    report: microbeam::observability::ObservationReport<f64>,
}

fn cmd_observe(cfg: &RunConfig, operator: OperatorId) -> Result<i32> {
    let basis = build_basis(cfg)?;
    let report = classify(&basis, operator)?;
    let out = ObserveOut {
        schema: SCHEMA_VERSION,
        zeta: cfg.zeta,
        n_modes: cfg.n_modes,
        report,
    };
    write_text(&Sink::from_config(cfg), &output::to_json(&out)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct ConstantsOut {
    schema: u32,
    zeta: f64,
    #[serde(rename = "T")]
    horizon: f64,
    threshold: f64,
    lower: f64,
    upper: f64,
    lower_is_positive: bool,
    note: Option<&'static str>,
}

fn cmd_constants(cfg: &RunConfig) -> Result<i32> {
    let c = observability_constants(cfg.zeta, cfg.horizon);
    let out = ConstantsOut {
        schema: SCHEMA_VERSION,
        zeta: cfg.zeta,
        horizon: cfg.horizon,
        threshold: c.threshold,
        lower: c.lower,
        upper: c.upper,
        lower_is_positive: c.lower_is_positive,
        note: (!c.lower_is_positive)
            .then_some("no exact-observability guarantee at this T: horizon below threshold"),
    };
    write_text(&Sink::stdout(), &output::to_json(&out)?)?;
    Ok(0)
}

#[derive(serde::Deserialize)]
struct StateFile {
    a: Vec<f64>,
    b: Vec<f64>,
}

fn cmd_simulate(cfg: &RunConfig, samples: usize, state_spec: &str) -> Result<i32> {
    anyhow::ensure!(samples >= 2, "need at least 2 samples");
    let basis = build_basis(cfg)?;
    let state: ModalState<f64> = if let Some(seed) = state_spec.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .context("parsing seed in --state random:SEED")?;
        random_state(&basis, basis.len(), seed)?
    } else {
        let text = std::fs::read_to_string(state_spec)
            .with_context(|| format!("reading state file {state_spec}"))?;
        let parsed: StateFile = serde_json::from_str(&text).context("parsing state file")?;
        anyhow::ensure!(
            parsed.a.len() == basis.len() && parsed.b.len() == basis.len(),
            "state file must carry {} coefficients per field",
            basis.len()
        );
        ModalState::from_coefficients(&basis, parsed.a, parsed.b)?
    };
    let series = output_series(&state, cfg.horizon, samples)?;
    let trace = energy_trace(&state, &series.times)?;
    let sink = Sink::from_config(cfg);
    match cfg.output_format {
        OutputFormat::Csv => {
            let mut text = String::from("t,y,E\n");
            for (i, t) in series.times.iter().enumerate() {
                text.push_str(&format!(
                    "{:.8},{:.12e},{:.12e}\n",
                    t, series.y[i], trace[i].quadrature.total
                ));
            }
            write_text(&sink, &text)?;
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct SimOut {
                schema: u32,
                zeta: f64,
                #[serde(rename = "T")]
                horizon: f64,
                /// Initial energies in the { K, U, E } wire shape.
                initial_energy: microbeam::model::EnergySnapshot<f64>,
                integral_y2: f64,
                times: Vec<f64>,
                y: Vec<f64>,
                energy_trace: Vec<f64>,
            }
            let out = SimOut {
                schema: SCHEMA_VERSION,
                zeta: cfg.zeta,
                horizon: cfg.horizon,
                initial_energy: trace[0].quadrature,
                integral_y2: series.integral_y2,
                times: series.times.clone(),
                y: series.y.clone(),
                energy_trace: trace.iter().map(|p| p.quadrature.total).collect(),
            };
            write_text(&sink, &output::to_json(&out)?)?;
        }
    }
    Ok(0)
}

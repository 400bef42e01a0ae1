//! Command-line front end: one subcommand per analysis module, deterministic
//! CSV/JSON output, machine-readable errors on stderr.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use gaplab::balance::{
    classify_phase, default_window_scan, ell_threshold, falloff_window_check, BalanceParams,
    ToyOracle, Verdict, DEFAULT_S_MAX,
};
use gaplab::error::{Error, Result};
use gaplab::history::{ancilla_guard_overlap, feynman_kitaev, CircuitSpec, PenaltySpec};
use gaplab::marker::{marker_segment_energy, perturbed_path_laplacian, pinning_root_bracket};
use gaplab::qpe::sim::{qpe_approx_sim, qpe_exact_sim};
use gaplab::qpe::{encode_unary, qpe_weights};
use gaplab::report::{Format, Report, Value};
use gaplab::spectra::eigen_spectrum;
use gaplab::tiles::checkerboard::{
    augmented_checkerboard_tileset, audit_markers, checkerboard_tileset, AugmentedMode, Finding,
};
use gaplab::tiles::enumerate::enumerate_min_tilings;
use gaplab::tiles::{TileSet, Tiling};

#[derive(Parser)]
#[command(name = "gaplab", version, about = "Numerical toolkit for tiling, phase-estimation and history-state spectral checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: String,
}

impl OutputOpts {
    fn emit(&self, report: &Report) -> Result<()> {
        let format: Format = self.format.parse()?;
        match &self.out {
            Some(path) => report.write(path, format),
            None => {
                print!("{}", report.render(format));
                Ok(())
            }
        }
    }
}

/// Node budget: flag, then environment, then default.
fn budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("GAPLAB_BUDGET")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(200_000_000)
}

#[derive(Subcommand)]
enum Command {
    /// Tiling enumeration and marker audits.
    Tiles {
        #[command(subcommand)]
        command: TilesCommand,
    },
    /// Pinned-path matrix bounds and segment energies.
    Marker {
        #[command(subcommand)]
        command: MarkerCommand,
    },
    /// Phase-estimation simulation and gate synthesis.
    Qpe {
        #[command(subcommand)]
        command: QpeCommand,
    },
    /// History-state Hamiltonian diagnostics.
    History {
        #[command(subcommand)]
        command: HistoryCommand,
    },
    /// Bound bookkeeping for the bonus/penalty competition.
    Balance {
        #[command(subcommand)]
        command: BalanceCommand,
    },
    /// Phase-diagram sweeps over encoded parameters.
    PhaseDiagram {
        #[command(subcommand)]
        command: PhaseDiagramCommand,
    },
}

#[derive(Subcommand)]
enum TilesCommand {
    /// Enumerate minimum-score tilings of an L-by-L grid.
    Enumerate {
        /// Side length.
        #[arg(long)]
        l: usize,
        /// Built-in tile set: constrained, plain, marked-semantic, marked-full.
        #[arg(long, default_value = "constrained")]
        set: String,
        /// Search node budget.
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Audit marker placement in a tiling loaded from a config file.
    Audit {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Subcommand)]
enum MarkerCommand {
    /// Minimum-eigenvalue bounds for the pinned path matrix over a size range.
    Bounds {
        /// Size range, e.g. 2..8 (inclusive).
        #[arg(long)]
        w: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Ground energy of the shifted segment operator.
    Segment {
        #[arg(long)]
        f: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Subcommand)]
enum QpeCommand {
    /// Statevector phase estimation for the unary-encoded phase.
    Simulate {
        #[arg(long)]
        eta: u32,
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Synthesize the controlled-phase rotations and report the deviation.
    Sk {
        #[arg(long)]
        eta: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        epsilon: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Subcommand)]
enum HistoryCommand {
    /// Diagonalize the propagation operator for a circuit config.
    Diag {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Guarded-output overlap formula and its parameters.
    Guard {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Subcommand)]
enum BalanceCommand {
    /// Falloff-window check over the default size scan.
    Window {
        /// Falloff constant.
        #[arg(long, default_value_t = 1)]
        c: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Classify a single encoded value.
    Classify {
        #[arg(long)]
        phi_prime: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Subcommand)]
enum PhaseDiagramCommand {
    /// Sweep the classifier across encoded intervals from a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
}

/// Config for `tiles audit`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AuditConfig {
    schema: String,
    tileset: TileSet,
    tiling: Tiling,
}

/// Config for `history diag`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagConfig {
    schema: String,
    circuit: CircuitSpec,
}

/// Config for `phase-diagram sweep`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepConfig {
    schema: String,
    eta_min: u32,
    eta_max: u32,
    /// Sample count inside each certified interval.
    samples_per_interval: u32,
    /// Toy halting oracle: "even-eta" or "always" or "never".
    oracle: String,
    /// Space within which the toy oracle's machine halts.
    #[serde(default)]
    oracle_space: Option<u64>,
    #[serde(default)]
    s_max: Option<u64>,
}

fn check_schema(got: &str, want: &str) -> Result<()> {
    if got != want {
        return Err(Error::invalid(format!(
            "config schema `{got}` unsupported; expected `{want}`"
        )));
    }
    Ok(())
}

fn load_config<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn builtin_tileset(name: &str) -> Result<TileSet> {
    Ok(match name {
        "constrained" => checkerboard_tileset(true),
        "plain" => checkerboard_tileset(false),
        "marked-semantic" => augmented_checkerboard_tileset(AugmentedMode::Semantic),
        "marked-full" => augmented_checkerboard_tileset(AugmentedMode::Full),
        other => return Err(Error::invalid(format!("unknown tile set `{other}`"))),
    })
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::invalid("range must look like 2..8"))?;
    let lo: usize = a.parse().map_err(|_| Error::invalid("bad range start"))?;
    let hi: usize = b.parse().map_err(|_| Error::invalid("bad range end"))?;
    if lo == 0 || hi < lo {
        return Err(Error::invalid("range must be nonempty and start at 1"));
    }
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Tiles { command } => match command {
            TilesCommand::Enumerate {
                l,
                set,
                budget: b,
                output,
            } => {
                let ts = builtin_tileset(&set)?;
                let r = enumerate_min_tilings(&ts, l, budget(b))?;
                let mut report = Report::new(&["l", "set", "min_score", "degeneracy", "nodes"]);
                report.push(vec![
                    Value::UInt(l as u64),
                    set.as_str().into(),
                    Value::Int(r.min_score),
                    Value::UInt(r.tilings.len() as u64),
                    Value::UInt(r.nodes),
                ]);
                output.emit(&report)
            }
            TilesCommand::Audit { config, output } => {
                let cfg: AuditConfig = load_config(&config)?;
                check_schema(&cfg.schema, "tiles-audit-v1")?;
                let findings = audit_markers(&cfg.tileset, &cfg.tiling)?;
                let mut report =
                    Report::new(&["kind", "corner_u", "corner_v", "length", "marker_at", "penalty"]);
                for f in findings {
                    match f {
                        Finding::Intact {
                            corner,
                            length,
                            marker_at,
                        } => report.push(vec![
                            "intact".into(),
                            Value::UInt(corner.0 as u64),
                            Value::UInt(corner.1 as u64),
                            Value::UInt(length as u64),
                            marker_at.map(|m| m as u64).into(),
                            Value::Empty,
                        ]),
                        Finding::Broken {
                            corner,
                            penalty_at,
                            penalty,
                        } => report.push(vec![
                            "broken".into(),
                            Value::UInt(corner.0 as u64),
                            Value::UInt(corner.1 as u64),
                            Value::Empty,
                            Value::UInt(penalty_at.0 as u64),
                            Value::Int(penalty),
                        ]),
                    }
                }
                output.emit(&report)
            }
        },
        Command::Marker { command } => match command {
            MarkerCommand::Bounds { w, output } => {
                let (lo, hi) = parse_range(&w)?;
                let mut report = Report::new(&["w", "lower", "lambda_min", "upper", "ok"]);
                for w in lo..=hi {
                    let h = perturbed_path_laplacian(w);
                    let lambda = eigen_spectrum(&h, Some(1))?.min();
                    let (lower, upper) = pinning_root_bracket(w);
                    let ok = lower <= lambda && lambda <= upper;
                    report.push(vec![
                        Value::UInt(w as u64),
                        Value::Float(lower),
                        Value::Float(lambda),
                        Value::Float(upper),
                        if ok { "true" } else { "false" }.into(),
                    ]);
                }
                output.emit(&report)
            }
            MarkerCommand::Segment { f, output } => {
                let energy = marker_segment_energy(f)?;
                let mut report = Report::new(&["f", "energy"]);
                report.push(vec![Value::UInt(f as u64), Value::Float(energy)]);
                output.emit(&report)
            }
        },
        Command::Qpe { command } => match command {
            QpeCommand::Simulate { eta, t, output } => {
                let phi = encode_unary(eta)?;
                let weights = qpe_weights(phi, t);
                let sim = qpe_exact_sim(phi, t)?;
                let beta0 = weights[0].norm();
                let mut report =
                    Report::new(&["eta", "t", "phi", "beta0", "beta0_simulated", "bound"]);
                report.push(vec![
                    Value::UInt(eta as u64),
                    Value::UInt(t as u64),
                    Value::Float(phi),
                    Value::Float(beta0),
                    Value::Float(sim.overlap_with_basis(0).sqrt()),
                    Value::Float(0.5),
                ]);
                output.emit(&report)
            }
            QpeCommand::Sk {
                eta,
                t,
                epsilon,
                output,
            } => {
                let phi = encode_unary(eta)?;
                let exact = qpe_exact_sim(phi, t)?;
                let (approx, bound) = qpe_approx_sim(phi, t, epsilon)?;
                let mut report =
                    Report::new(&["eta", "t", "epsilon", "state_deviation", "bound"]);
                report.push(vec![
                    Value::UInt(eta as u64),
                    Value::UInt(t as u64),
                    Value::Float(epsilon),
                    Value::Float(exact.distance(&approx)),
                    Value::Float(bound),
                ]);
                output.emit(&report)
            }
        },
        Command::History { command } => match command {
            HistoryCommand::Diag { config, output } => {
                let cfg: DiagConfig = load_config(&config)?;
                check_schema(&cfg.schema, "history-diag-v1")?;
                let h = feynman_kitaev(&cfg.circuit, &PenaltySpec::none())?;
                let spec = eigen_spectrum(&h, None)?;
                let mut report = Report::new(&["n_qubits", "t_steps", "dim", "lambda_min"]);
                report.push(vec![
                    Value::UInt(cfg.circuit.n_qubits as u64),
                    Value::UInt(cfg.circuit.gates.len() as u64),
                    Value::UInt(h.dim() as u64),
                    Value::Float(spec.min()),
                ]);
                output.emit(&report)
            }
            HistoryCommand::Guard { alpha, eps, output } => {
                let overlap = ancilla_guard_overlap(alpha, eps)?;
                let formula = 0.75 * (1.0 - alpha * alpha * eps * eps);
                let mut report = Report::new(&["alpha", "eps", "overlap", "formula"]);
                report.push(vec![
                    Value::Float(alpha),
                    Value::Float(eps),
                    Value::Float(overlap),
                    Value::Float(formula),
                ]);
                output.emit(&report)
            }
        },
        Command::Balance { command } => match command {
            BalanceCommand::Window { c, output } => {
                let params = BalanceParams::default();
                let ls = default_window_scan();
                let w = falloff_window_check(c, &ls, &params)?;
                let mut report = Report::new(&[
                    "l",
                    "ell_threshold",
                    "bonus_log2",
                    "nonhalt_lower_log2",
                    "halt_upper_log2",
                    "ok",
                ]);
                for e in &w.entries {
                    report.push(vec![
                        Value::UInt(e.l),
                        Value::UInt(ell_threshold(e.l)),
                        Value::Float(e.bonus_log2),
                        Value::Float(e.nonhalt_lower_log2),
                        Value::Float(e.halt_upper_log2),
                        if e.ok() { "true" } else { "false" }.into(),
                    ]);
                }
                output.emit(&report)
            }
            BalanceCommand::Classify { phi_prime, output } => {
                let params = BalanceParams::default();
                let v = classify_phase(phi_prime, &params, DEFAULT_S_MAX)?;
                let mut report =
                    Report::new(&["phi_prime", "verdict", "eta", "ell_star", "witness_w"]);
                report.push(vec![
                    Value::Float(phi_prime),
                    verdict_text(v.verdict).into(),
                    v.eta.map(|x| x as u64).into(),
                    v.ell_star.map(|x| x as u64).into(),
                    v.witness_w.into(),
                ]);
                output.emit(&report)
            }
        },
        Command::PhaseDiagram { command } => match command {
            PhaseDiagramCommand::Sweep { config, output } => {
                let cfg: SweepConfig = load_config(&config)?;
                check_schema(&cfg.schema, "phase-sweep-v1")?;
                let report = run_sweep(&cfg)?;
                output.emit(&report)
            }
        },
    }
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Gapped => "gapped",
        Verdict::Gapless => "gapless",
        Verdict::OutsideCertifiedInterval => "outside-certified-interval",
    }
}

fn sweep_oracle(name: &str, space: u64) -> Result<ToyOracle> {
    Ok(match name {
        "even-eta" => ToyOracle::EvenEta { space },
        "always" => ToyOracle::Always { space },
        "never" => ToyOracle::Never,
        other => return Err(Error::invalid(format!("unknown oracle `{other}`"))),
    })
}

fn run_sweep(cfg: &SweepConfig) -> Result<Report> {
    if cfg.eta_min < 1 || cfg.eta_max < cfg.eta_min {
        return Err(Error::invalid("eta range must be nonempty and start at 1"));
    }
    if cfg.samples_per_interval == 0 {
        return Err(Error::invalid("need at least one sample per interval"));
    }
    let params = BalanceParams {
        oracle: sweep_oracle(&cfg.oracle, cfg.oracle_space.unwrap_or(64))?,
        ..BalanceParams::default()
    };
    let s_max = cfg.s_max.unwrap_or(DEFAULT_S_MAX);
    let mut report = Report::new(&[
        "eta",
        "phi_prime",
        "verdict",
        "ell_star",
        "witness_w",
        "edge_log2",
        "pen_log2",
    ]);
    let mut verdicts_by_eta: Vec<BTreeSet<&'static str>> = Vec::new();
    for eta in cfg.eta_min..=cfg.eta_max {
        let mut seen = BTreeSet::new();
        for k in 0..cfg.samples_per_interval {
            // Samples inside the certified interval [2^{-eta}, 2^{-eta}(1+2^{-ell*})).
            let v0 = classify_phase(2.0f64.powi(-(eta as i32)), &params, s_max)?;
            let ell = v0.ell_star.unwrap_or(1);
            let lo = 2.0f64.powi(-(eta as i32));
            let width = 2.0f64.powi(-((eta + ell) as i32));
            let phi = lo + width * (k as f64) / (cfg.samples_per_interval as f64);
            let v = classify_phase(phi, &params, s_max)?;
            seen.insert(verdict_text(v.verdict));
            report.push(vec![
                Value::UInt(eta as u64),
                Value::Float(phi),
                verdict_text(v.verdict).into(),
                v.ell_star.map(|x| x as u64).into(),
                v.witness_w.into(),
                v.edge_log2.into(),
                v.pen_log2.into(),
            ]);
        }
        verdicts_by_eta.push(seen);
    }
    for (i, seen) in verdicts_by_eta.iter().enumerate() {
        if seen.len() != 1 {
            return Err(Error::invalid(format!(
                "verdict not constant on interval eta={}",
                cfg.eta_min + i as u32
            )));
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let payload = serde_json::json!({
                "error": e.to_string(),
                "kind": error_kind(&e),
            });
            eprintln!("{payload}");
            ExitCode::from(2)
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Validation(_) => "validation",
        Error::NotHermitian { .. } => "validation",
        Error::Budget { .. } => "resource",
        Error::EnumerationBudget { .. } => "resource",
        Error::NoConvergence { .. } => "numeric",
        Error::SynthesisShortfall { .. } => "numeric",
        Error::Io(_) => "io",
        Error::Json(_) => "config",
    }
}

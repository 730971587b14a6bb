//! `sodacan` — reproducible boundary-regularity reports for the p-parabolic
//! equation on soda can domains.
//!
//! Subcommands: `classify`, `barrier-check`, `wiener`, `solve`,
//! `table-audit`. Every run that produces files also writes a manifest with
//! the full parameter set, so reruns are byte-reproducible (deterministic
//! grids, fixed sampling sequences, floats printed with 17 significant
//! digits).
//!
//! Exit codes: 0 = success / all checks passed, 1 = a verdict or audit
//! check failed, 2 = usage or parameter error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sodacan::barriers::{
    build_barenblatt_barrier, build_irregularity_supersolution, build_radial_ode_barrier,
    kappa_threshold, power_barrier_min_j, verify_barrier, vtilde_delta, BarrierReport,
    KappaBarrier, SamplerConfig,
};
use sodacan::classifier::{classify, table_audit};
use sodacan::geometry::{DomainSpec, Params, SpaceTimePoint};
use sodacan::solver::{regularity_probe, solve, DataProfile, ProbeVerdict, SolveConfig};
use sodacan::wiener::{wiener_partial_sums, WienerVerdict};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "sodacan", version, about, propagate_version = true)]
struct Cli {
    /// JSON file supplying default parameter values; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the regularity verdict for the origin of Θ_{l,θ} as JSON.
    Classify(ParamArgs),
    /// Build a barrier construction and verify the barrier predicates.
    BarrierCheck(BarrierArgs),
    /// Wiener-series capacity evidence for the heat equation (p = 2).
    Wiener(WienerArgs),
    /// Moving-boundary regularity probe over a resolution ladder.
    Solve(SolveArgs),
    /// Audit the classifier against the verdict tables.
    TableAudit(OutArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    l: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
}

#[derive(Args)]
struct BarrierArgs {
    /// Which construction to build and check.
    construction: Construction,
    #[command(flatten)]
    params: ParamArgs,
    /// κ for the kappa construction (default κ̃/2).
    #[arg(long)]
    kappa: Option<f64>,
    /// Forcing level j for the radial ODE construction.
    #[arg(long)]
    j: Option<f64>,
    /// ε for the Barenblatt construction.
    #[arg(long)]
    epsilon: Option<f64>,
    /// δ for the pasted construction.
    #[arg(long)]
    delta: Option<f64>,
    /// Interior sample budget for the verification cloud.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value = "sodacan-out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Construction {
    Power,
    Kappa,
    RadialOde,
    Irregularity,
    Barenblatt,
    Pasted,
}

#[derive(Args)]
struct WienerArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long, default_value = "sodacan-out")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Boundary data profile.
    #[arg(long, value_enum, default_value = "linear")]
    profile: ProfileKind,
    /// Constant value for the constant profile.
    #[arg(long)]
    value: Option<f64>,
    /// Comma-separated resolution ladder, e.g. 128,256.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<usize>>,
    #[arg(long)]
    probe_radius: Option<f64>,
    #[arg(long, default_value = "sodacan-out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileKind {
    Constant,
    Linear,
    /// The admissible small-data oscillation bound, scaled by 0.9.
    Bound,
    /// Fast-diffusion supersolution data for the irregular regime.
    Irregularity,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, default_value = "sodacan-out")]
    out: PathBuf,
}

/// Manifest written next to every file-producing run.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: serde_json::Value,
    version: &'static str,
    outputs: Vec<String>,
    duration_ms: u128,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SODACAN_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let config = match load_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        Command::Classify(args) => cmd_classify(&args, &config),
        Command::BarrierCheck(args) => cmd_barrier_check(&args, &config),
        Command::Wiener(args) => cmd_wiener(&args, &config),
        Command::Solve(args) => cmd_solve(&args, &config),
        Command::TableAudit(args) => cmd_table_audit(&args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<serde_json::Value, String> {
    match path {
        None => Ok(serde_json::Value::Null),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("bad config JSON: {e}"))
        }
    }
}

fn cfg_f64(config: &serde_json::Value, key: &str) -> Option<f64> {
    config.get(key).and_then(|v| v.as_f64())
}

fn cfg_usize(config: &serde_json::Value, key: &str) -> Option<usize> {
    config.get(key).and_then(|v| v.as_u64()).map(|v| v as usize)
}

fn resolve_params(args: &ParamArgs, config: &serde_json::Value) -> Result<Params, String> {
    let n = args.n.or(cfg_usize(config, "n")).ok_or("missing --n")?;
    let p = args.p.or(cfg_f64(config, "p")).ok_or("missing --p")?;
    let l = args.l.or(cfg_f64(config, "l")).ok_or("missing --l")?;
    let theta = args.theta.or(cfg_f64(config, "theta")).unwrap_or(1.0);
    Params::new(n, p, l, theta).map_err(|e| e.to_string())
}

fn write_outputs(
    out_dir: &Path,
    command: &str,
    parameters: serde_json::Value,
    files: Vec<(String, String)>,
    started: Instant,
) -> Result<(), String> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;
    let mut outputs = Vec::new();
    for (name, content) in files {
        let path = out_dir.join(&name);
        std::fs::write(&path, content).map_err(|e| format!("cannot write {name}: {e}"))?;
        outputs.push(path.display().to_string());
    }
    let manifest = RunManifest {
        command: command.to_string(),
        parameters,
        version: env!("CARGO_PKG_VERSION"),
        outputs,
        duration_ms: started.elapsed().as_millis(),
    };
    let path = out_dir.join(format!("{command}-manifest.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap())
        .map_err(|e| format!("cannot write manifest: {e}"))?;
    Ok(())
}

fn cmd_classify(args: &ParamArgs, config: &serde_json::Value) -> Result<bool, String> {
    let params = resolve_params(args, config)?;
    let c = classify(params.n, params.p, params.l, params.theta).map_err(|e| e.to_string())?;
    println!("{}", c.to_json());
    Ok(true)
}

fn residual_csv(report: &BarrierReport) -> String {
    let mut csv = String::from("r,t,residual\n");
    for (r, t, v) in &report.residual_samples {
        csv.push_str(&format!("{r:.16e},{t:.16e},{v:.16e}\n"));
    }
    csv
}

fn cmd_barrier_check(args: &BarrierArgs, config: &serde_json::Value) -> Result<bool, String> {
    let started = Instant::now();
    let params = resolve_params(&args.params, config)?;
    let sampler = SamplerConfig {
        interior_points: args.samples.or(cfg_usize(config, "samples")).unwrap_or(1000),
        ..SamplerConfig::default()
    };
    let origin = SpaceTimePoint::radial(params.n, 0.0, 0.0);

    // construction-specific candidate, domain, certificates and pass criterion
    let (label, report, certificates, pass) = match args.construction {
        Construction::Power => {
            let (_, barrier) = power_barrier_min_j(&params).map_err(|e| e.to_string())?;
            let domain = DomainSpec::soda_can(params);
            let report = verify_barrier(&barrier.candidate(), &domain, &origin, params.p, &sampler);
            let pass = report.pass;
            ("power", report, serde_json::to_value(barrier).unwrap(), pass)
        }
        Construction::Kappa => {
            let kt = kappa_threshold(&params).map_err(|e| e.to_string())?;
            let kappa = args.kappa.or(cfg_f64(config, "kappa")).unwrap_or(0.5 * kt);
            if !(kappa > 0.0 && kappa < kt) {
                return Err(format!("kappa must lie in (0, {kt}), got {kappa}"));
            }
            let v = KappaBarrier::new(kappa, params.p, params.n).map_err(|e| e.to_string())?;
            let domain = DomainSpec::soda_can(params);
            let report = verify_barrier(&v.candidate(), &domain, &origin, params.p, &sampler);
            let pass = report.pass;
            let certs = serde_json::json!({ "kappa": kappa, "kappa_threshold": kt });
            ("kappa", report, certs, pass)
        }
        Construction::RadialOde => {
            let j = args.j.or(cfg_f64(config, "j")).unwrap_or(2.0);
            let barrier =
                build_radial_ode_barrier(params.n, params.p, j).map_err(|e| e.to_string())?;
            let domain = DomainSpec::punctured_cylinder(params.n, 1.0, params.theta)
                .map_err(|e| e.to_string())?;
            let report = verify_barrier(&barrier.candidate(), &domain, &origin, params.p, &sampler);
            let pass = report.pass;
            ("radial_ode", report, serde_json::to_value(barrier).unwrap(), pass)
        }
        Construction::Irregularity => {
            let s = build_irregularity_supersolution(params.n, params.p, params.l)
                .map_err(|e| e.to_string())?;
            let domain = DomainSpec::soda_can(Params::new(params.n, params.p, params.l, 1.0).unwrap());
            let report = verify_barrier(&s.candidate(), &domain, &origin, params.p, &sampler);
            // a supersolution vanishing on the top face: the residual check
            // must pass while positivity must fail at level ~0
            let pass = report.residual.pass && report.positivity.min_value.abs() < 1e-9;
            ("irregularity", report, serde_json::to_value(s).unwrap(), pass)
        }
        Construction::Barenblatt => {
            let eps = args.epsilon.or(cfg_f64(config, "epsilon")).unwrap_or(0.5);
            let barrier = build_barenblatt_barrier(params.n, params.p, params.l, eps)
                .map_err(|e| e.to_string())?;
            let pasted = barrier.pasted().map_err(|e| e.to_string())?;
            let domain = DomainSpec::soda_can(
                Params::new(params.n, params.p, params.l, barrier.theta0).unwrap(),
            );
            let report = verify_barrier(&pasted.candidate(), &domain, &origin, params.p, &sampler);
            let pass = report.pass;
            let mut certs = serde_json::to_value(&barrier).unwrap();
            certs["interface_margin"] = pasted.interface_margin.into();
            ("barenblatt", report, certs, pass)
        }
        Construction::Pasted => {
            let delta = args.delta.or(cfg_f64(config, "delta")).unwrap_or(0.5);
            let pasted = vtilde_delta(&params, delta).map_err(|e| e.to_string())?;
            let domain = DomainSpec::soda_can(params);
            let report = verify_barrier(&pasted.candidate(), &domain, &origin, params.p, &sampler);
            let pass = report.pass;
            let certs = serde_json::json!({
                "delta": delta,
                "cap_value": pasted.cap_value,
                "interface_margin": pasted.interface_margin,
            });
            ("pasted", report, certs, pass)
        }
    };

    let json = serde_json::to_string_pretty(&serde_json::json!({
        "construction": label,
        "parameters": { "n": params.n, "p": params.p, "l": params.l, "theta": params.theta },
        "certificates": certificates,
        "report": report,
    }))
    .unwrap();
    let csv = residual_csv(&report);
    write_outputs(
        &args.out,
        &format!("barrier-check-{label}"),
        serde_json::json!({
            "construction": label,
            "n": params.n, "p": params.p, "l": params.l, "theta": params.theta,
            "pass": pass,
        }),
        vec![
            (format!("barrier-{label}.json"), json),
            (format!("barrier-{label}-residuals.csv"), csv),
        ],
        started,
    )?;
    println!(
        "{}",
        serde_json::json!({ "construction": label, "pass": pass })
    );
    Ok(pass)
}

fn cmd_wiener(args: &WienerArgs, config: &serde_json::Value) -> Result<bool, String> {
    let started = Instant::now();
    let n = args.params.n.or(cfg_usize(config, "n")).ok_or("missing --n")?;
    let l = args.params.l.or(cfg_f64(config, "l")).ok_or("missing --l")?;
    let theta = args.params.theta.or(cfg_f64(config, "theta")).unwrap_or(1.0);
    let kmax = args.kmax.or(cfg_usize(config, "kmax").map(|v| v as u32)).unwrap_or(40);
    let params = Params::new(n, 2.0, l, theta).map_err(|e| e.to_string())?;
    let domain = DomainSpec::soda_can(params);
    let report = wiener_partial_sums(&domain, kmax).map_err(|e| e.to_string())?;
    let decided = !matches!(report.verdict, WienerVerdict::Inconclusive);

    let json = serde_json::to_string_pretty(&report).unwrap();
    let csv = report.to_csv();
    write_outputs(
        &args.out,
        "wiener",
        serde_json::json!({ "n": n, "l": l, "theta": theta, "kmax": kmax }),
        vec![
            ("wiener.json".to_string(), json),
            ("wiener.csv".to_string(), csv),
        ],
        started,
    )?;
    println!("{}", serde_json::to_string(&report.verdict).unwrap());
    Ok(decided)
}

fn cmd_solve(args: &SolveArgs, config: &serde_json::Value) -> Result<bool, String> {
    let started = Instant::now();
    let params = resolve_params(&args.params, config)?;
    let data = match args.profile {
        ProfileKind::Constant => DataProfile::Constant {
            value: args.value.or(cfg_f64(config, "value")).unwrap_or(1.0),
        },
        ProfileKind::Linear => DataProfile::Linear,
        ProfileKind::Bound => DataProfile::SmallDataBound {
            delta: 1.0,
            scale: 0.9,
        },
        ProfileKind::Irregularity => {
            DataProfile::irregularity(&params).map_err(|e| e.to_string())?
        }
    };
    let ladder = args
        .grid
        .clone()
        .unwrap_or_else(|| vec![128, 256]);
    let report = regularity_probe(&params, &data, &ladder).map_err(|e| e.to_string())?;
    let decided = report.verdict != ProbeVerdict::Inconclusive;

    // trace CSV from the finest run
    let mut cfg = SolveConfig::moving_can(params, data, *ladder.last().unwrap());
    if let Some(r) = args.probe_radius.or(cfg_f64(config, "probe_radius")) {
        cfg.probe_radius = r;
    }
    let result = solve(&cfg).map_err(|e| e.to_string())?;

    write_outputs(
        &args.out,
        "solve",
        serde_json::to_value(&cfg).unwrap(),
        vec![
            (
                "probe.json".to_string(),
                serde_json::to_string_pretty(&report).unwrap(),
            ),
            ("trace.csv".to_string(), result.to_csv()),
        ],
        started,
    )?;
    println!(
        "{}",
        serde_json::json!({ "verdict": report.verdict, "gaps": report.gaps })
    );
    Ok(decided)
}

fn cmd_table_audit(args: &OutArgs) -> Result<bool, String> {
    let started = Instant::now();
    let report = table_audit();
    let pass = report.pass();
    write_outputs(
        &args.out,
        "table-audit",
        serde_json::json!({}),
        vec![(
            "table-audit.json".to_string(),
            serde_json::to_string_pretty(&report).unwrap(),
        )],
        started,
    )?;
    println!(
        "{}",
        serde_json::json!({
            "cells_checked": report.cells_checked,
            "mismatches": report.mismatches.len(),
            "pass": pass,
        })
    );
    Ok(pass)
}

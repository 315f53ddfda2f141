//! `rotnum`: rotation numbers of circle maps, random matrix products and
//! sampled linear cocycles, with reproducible seeded studies emitting
//! plot-ready CSV tables and JSON provenance sidecars.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rotnum_core::*;

use config::StudyConfig;
use report::{emit, fmt, ResultRecord, Table};

#[derive(Parser)]
#[command(
    name = "rotnum",
    version,
    about = "Rotation numbers of circle homeomorphisms, random matrix products and sampled cocycles"
)]
struct Cli {
    /// TOML config file; command-line flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Base seed for all randomness
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker thread cap (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output path for the table (stdout when omitted); a <path>.json
    /// provenance sidecar is written alongside
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,

    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the study subcommands; every field mirrors a config key.
#[derive(Args, Default)]
struct StudyFlags {
    /// Cocycle kind: noisy-rotation | det | sde | switching | modulated
    #[arg(long)]
    kind: Option<String>,
    /// Drift / coefficient matrix, row-major a11,a12,a21,a22
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Option<Vec<f64>>,
    /// Diffusion (or secondary) coefficient matrix; repeatable
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, action = clap::ArgAction::Append)]
    b: Option<Vec<f64>>,
    /// Switching period of the periodic driver
    #[arg(long)]
    period: Option<f64>,
    /// Modulation frequency of the smooth driver
    #[arg(long)]
    freq: Option<f64>,
    /// Sampling window length T
    #[arg(long = "T", visible_alias = "t")]
    t: Option<f64>,
    /// Decreasing grid of window lengths, comma separated
    #[arg(long = "T-grid", visible_alias = "t-grid", value_delimiter = ',')]
    t_grid: Option<Vec<f64>>,
    /// Iterations / samples
    #[arg(long)]
    n: Option<u64>,
    /// Windows at the finest grid T
    #[arg(long)]
    windows: Option<u64>,
    /// Monte Carlo replicas
    #[arg(long)]
    replicas: Option<u32>,
    /// Integration step
    #[arg(long)]
    dt: Option<f64>,
    /// Histogram bin count
    #[arg(long)]
    bins: Option<usize>,
    /// Crossing-count grid divider: fine_dt = T / fine-div
    #[arg(long = "fine-div")]
    fine_div: Option<u64>,
    /// Initial circle point (turns)
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    /// Initial direction (turns)
    #[arg(long, allow_hyphen_values = true)]
    s0: Option<f64>,
}

impl StudyFlags {
    fn into_config(self) -> Result<StudyConfig> {
        let b = match self.b {
            None => None,
            Some(flat) => {
                if flat.len() % 4 != 0 {
                    bail!("--b expects groups of 4 entries");
                }
                Some(flat.chunks(4).map(|c| [c[0], c[1], c[2], c[3]]).collect())
            }
        };
        let a = match self.a {
            None => None,
            Some(v) => Some(four(&v, "--a")?),
        };
        Ok(StudyConfig {
            kind: self.kind,
            a,
            b,
            period: self.period,
            freq: self.freq,
            t: self.t,
            t_grid: self.t_grid,
            n: self.n,
            windows: self.windows,
            replicas: self.replicas,
            dt: self.dt,
            bins: self.bins,
            fine_div: self.fine_div,
            x0: self.x0,
            s0: self.s0,
            ..Default::default()
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Rotation number of a single circle homeomorphism
    Homeo {
        /// Family: rigid (uses --angle) or arnold (uses --omega, --k)
        #[arg(long)]
        family: Option<String>,
        /// Rotation angle (turns) of the rigid family
        #[arg(long, allow_hyphen_values = true)]
        angle: Option<f64>,
        /// Drift of the arnold family F(x) = x + omega + k sin(2 pi x)
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<f64>,
        /// Nonlinearity of the arnold family (|k| < 1/(2 pi))
        #[arg(long, allow_hyphen_values = true)]
        k: Option<f64>,
        #[command(flatten)]
        study: StudyFlags,
    },
    /// Eigenvalue and iterative rotation number of one matrix
    Matrix {
        /// Matrix entries, row-major a11,a12,a21,a22
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        entries: Vec<f64>,
        #[command(flatten)]
        study: StudyFlags,
    },
    /// Rotation number of a product of random matrices
    Product {
        /// Ensemble: rotations (--lo, --hi) | triangular (--p-neg) | constant (--entries)
        #[arg(long)]
        ensemble: Option<String>,
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
        #[arg(long = "p-neg")]
        p_neg: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        entries: Option<Vec<f64>>,
        /// Emit the stationary occupation measure instead of the estimate
        #[arg(long)]
        measure: bool,
        #[command(flatten)]
        study: StudyFlags,
    },
    /// Integrate one continuous cocycle trajectory (plot-ready t, alpha, s)
    Cocycle {
        #[command(flatten)]
        study: StudyFlags,
    },
    /// Sampled rotation number rho_T / T over a decreasing T grid
    SampleStudy {
        #[command(flatten)]
        study: StudyFlags,
    },
    /// Deterministic sampling: exactness below the Nyquist rate
    Nyquist {
        #[command(flatten)]
        study: StudyFlags,
    },
    /// Distribution of the sampled displacement beta_1^T
    BetaDist {
        #[command(flatten)]
        study: StudyFlags,
    },
    /// Antipode-crossing counts and the wrap decomposition check
    Winding {
        #[command(flatten)]
        study: StudyFlags,
    },
    /// Run a built-in example study and check it against its expected value
    Example {
        /// Example id (1..4)
        #[arg(long)]
        id: u32,
        #[arg(long = "p-neg")]
        p_neg: Option<f64>,
        #[command(flatten)]
        study: StudyFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let numeric = e
                .downcast_ref::<CoreError>()
                .map(|c| matches!(c, CoreError::StepFloorReached { .. }))
                .unwrap_or(false);
            ExitCode::from(if numeric { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let file_cfg = match &cli.config {
        Some(p) => StudyConfig::load(p)?,
        None => StudyConfig::default(),
    };
    let global = StudyConfig {
        seed: cli.seed,
        workers: cli.workers,
        out: cli.out.clone(),
        format: cli.format.clone(),
        ..Default::default()
    };
    let merge = |flags: StudyConfig| -> StudyConfig {
        file_cfg.clone().merged_with(&flags).merged_with(&global)
    };

    match cli.command {
        Command::Homeo { family, angle, omega, k, study } => {
            let mut flags = study.into_config()?;
            flags.family = family;
            flags.angle = angle;
            flags.omega = omega;
            flags.k = k;
            let cfg = merge(flags);
            init_workers(&cfg);
            cmd_homeo(&cfg)
        }
        Command::Matrix { entries, study } => {
            let mut flags = study.into_config()?;
            flags.entries = Some(four(&entries, "--entries")?);
            let cfg = merge(flags);
            init_workers(&cfg);
            cmd_matrix(&cfg)
        }
        Command::Product { ensemble, lo, hi, p_neg, entries, measure, study } => {
            let mut flags = study.into_config()?;
            flags.ensemble = ensemble;
            flags.lo = lo;
            flags.hi = hi;
            flags.p_neg = p_neg;
            if let Some(v) = entries {
                flags.entries = Some(four(&v, "--entries")?);
            }
            let cfg = merge(flags);
            init_workers(&cfg);
            cmd_product(&cfg, measure)
        }
        Command::Cocycle { study } => {
            let cfg = merge(study.into_config()?);
            init_workers(&cfg);
            cmd_cocycle(&cfg)
        }
        Command::SampleStudy { study } => {
            let cfg = merge(study.into_config()?);
            init_workers(&cfg);
            cmd_sample_study(&cfg)
        }
        Command::Nyquist { study } => {
            let cfg = merge(study.into_config()?);
            init_workers(&cfg);
            cmd_nyquist(&cfg)
        }
        Command::BetaDist { study } => {
            let cfg = merge(study.into_config()?);
            init_workers(&cfg);
            cmd_beta_dist(&cfg)
        }
        Command::Winding { study } => {
            let cfg = merge(study.into_config()?);
            init_workers(&cfg);
            cmd_winding(&cfg)
        }
        Command::Example { id, p_neg, study } => {
            let mut flags = study.into_config()?;
            flags.p_neg = p_neg;
            let cfg = merge(flags);
            init_workers(&cfg);
            cmd_example(&cfg, id)
        }
    }
}

fn init_workers(cfg: &StudyConfig) {
    if let Some(w) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build_global()
            .ok();
    }
}

fn coeff(v: [f64; 4]) -> Coeff2 {
    Coeff2::new(v[0], v[1], v[2], v[3])
}

fn four(v: &[f64], what: &str) -> Result<[f64; 4]> {
    if v.len() != 4 {
        bail!("{what} expects 4 comma-separated entries (row-major), got {}", v.len());
    }
    Ok([v[0], v[1], v[2], v[3]])
}

fn cocycle_from(cfg: &StudyConfig) -> Result<CocycleSpec> {
    let kind = cfg.kind.as_deref().unwrap_or("noisy-rotation");
    let a = cfg.a.map(coeff);
    let bs: Vec<Coeff2> = cfg.b.as_deref().unwrap_or(&[]).iter().map(|&v| coeff(v)).collect();
    match kind {
        "noisy-rotation" => Ok(CocycleSpec::noisy_rotation()),
        "det" => Ok(CocycleSpec::deterministic(
            a.ok_or_else(|| anyhow!("kind 'det' needs --a"))?,
        )),
        "sde" => {
            let a = a.ok_or_else(|| anyhow!("kind 'sde' needs --a"))?;
            if bs.is_empty() {
                bail!("kind 'sde' needs at least one --b");
            }
            Ok(CocycleSpec::sde(a, bs)?)
        }
        "switching" => {
            let mut coeffs = Vec::new();
            if let Some(a) = a {
                coeffs.push(a);
            }
            coeffs.extend(bs);
            if coeffs.is_empty() {
                bail!("kind 'switching' needs --a (and optional --b) coefficients");
            }
            Ok(CocycleSpec::real_noise(RealNoiseDriver::PeriodicSwitch {
                period: cfg.period.unwrap_or(1.0),
                coeffs,
            }))
        }
        "modulated" => {
            let base = a.ok_or_else(|| anyhow!("kind 'modulated' needs --a as the base"))?;
            let amplitude = bs
                .first()
                .copied()
                .ok_or_else(|| anyhow!("kind 'modulated' needs --b as the amplitude"))?;
            Ok(CocycleSpec::real_noise(RealNoiseDriver::Modulated {
                base,
                amplitude,
                freq: cfg.freq.unwrap_or(1.0),
            }))
        }
        other => bail!("unknown cocycle kind '{other}'"),
    }
}

fn homeo_from(cfg: &StudyConfig) -> Result<(CircleHomeo, String)> {
    let family = cfg.family.as_deref().unwrap_or("arnold");
    match family {
        "rigid" => {
            let angle = cfg.angle.unwrap_or(0.25);
            Ok((CircleHomeo::rotation(angle), format!("rigid({angle})")))
        }
        "arnold" => {
            let omega = cfg.omega.unwrap_or(0.3);
            let k = cfg.k.unwrap_or(0.05);
            let lift = Lift::from_fn(move |x| x + omega + k * (std::f64::consts::TAU * x).sin())
                .context("arnold family parameters do not give a homeomorphism")?;
            Ok((CircleHomeo::new(lift), format!("arnold({omega};{k})")))
        }
        other => bail!("unknown family '{other}' (expected rigid | arnold)"),
    }
}

fn cmd_homeo(cfg: &StudyConfig) -> Result<bool> {
    let (f, label) = homeo_from(cfg)?;
    let n = cfg.n.unwrap_or(1_000_000);
    let x0 = cfg.x0.unwrap_or(0.0);
    let seed = cfg.seed.unwrap_or(0);

    let classical = classical_rotation_number(&f, n, x0);
    let orbit_n = n.min(1_000_000);
    let mut images = Vec::with_capacity(orbit_n as usize);
    let mut p = wrap1(x0);
    for _ in 0..orbit_n {
        p = f.apply(p);
        images.push(p);
    }
    let orbit = orbit_rotation_number(&ordered_lifted_orbit(&images, x0))?;

    let mut table = Table::new(vec!["family", "n", "x0", "estimator", "rho", "truncation"]);
    table.push(vec![
        label.clone(),
        n.to_string(),
        fmt(x0),
        "classical".into(),
        fmt(classical.value.value()),
        fmt(classical.truncation_bound),
    ]);
    table.push(vec![
        label.clone(),
        orbit.n.to_string(),
        fmt(x0),
        "ordered-orbit".into(),
        fmt(orbit.value.value()),
        fmt(orbit.truncation_bound),
    ]);
    let mut record = ResultRecord::new(
        "homeo",
        serde_json::json!({"family": label, "n": n, "x0": x0}),
        seed,
    );
    record.summary = serde_json::json!({"rho": classical.value.value()});
    emit(cfg.out.as_deref(), cfg.format.as_deref().unwrap_or("csv"), &table, &record.with_config(cfg))?;
    Ok(true)
}

fn cmd_matrix(cfg: &StudyConfig) -> Result<bool> {
    let e = cfg.entries.ok_or_else(|| anyhow!("matrix needs --entries"))?;
    let g = Mat2::new(e[0], e[1], e[2], e[3])?;
    let rho = eigen_rotation_number(&g).value();
    let mut table = Table::new(vec!["a11", "a12", "a21", "a22", "estimator", "n", "rho"]);
    table.push(vec![
        fmt(e[0]),
        fmt(e[1]),
        fmt(e[2]),
        fmt(e[3]),
        "eigenvalue".into(),
        String::new(),
        fmt(rho),
    ]);
    if let Some(n) = cfg.n {
        let est = matrix_rotation_number(&g, n, cfg.x0.unwrap_or(0.0));
        table.push(vec![
            fmt(e[0]),
            fmt(e[1]),
            fmt(e[2]),
            fmt(e[3]),
            "iterative".into(),
            n.to_string(),
            fmt(est.value.value()),
        ]);
    }
    let mut record = ResultRecord::new(
        "matrix",
        serde_json::json!({"entries": e, "n": cfg.n}),
        cfg.seed.unwrap_or(0),
    );
    record.summary = serde_json::json!({"rho": rho});
    emit(cfg.out.as_deref(), cfg.format.as_deref().unwrap_or("csv"), &table, &record.with_config(cfg))?;
    Ok(true)
}

enum Ensemble {
    Rotations(IidRotations),
    Triangular(IidTriangular),
    Constant(ConstantMatrix),
}

fn ensemble_from(cfg: &StudyConfig, seed: u64) -> Result<(Ensemble, String)> {
    let name = cfg.ensemble.as_deref().unwrap_or("rotations");
    match name {
        "rotations" => {
            let lo = cfg.lo.unwrap_or(0.05);
            let hi = cfg.hi.unwrap_or(0.35);
            Ok((
                Ensemble::Rotations(IidRotations::new(lo, hi, seed)),
                format!("rotations[{lo};{hi}]"),
            ))
        }
        "triangular" => {
            let p = cfg.p_neg.unwrap_or(0.5);
            Ok((
                Ensemble::Triangular(IidTriangular::new(p, seed)?),
                format!("triangular(p={p})"),
            ))
        }
        "constant" => {
            let e = cfg.entries.ok_or_else(|| anyhow!("constant ensemble needs --entries"))?;
            Ok((
                Ensemble::Constant(ConstantMatrix(Mat2::new(e[0], e[1], e[2], e[3])?)),
                "constant".into(),
            ))
        }
        other => bail!("unknown ensemble '{other}'"),
    }
}

fn cmd_product(cfg: &StudyConfig, measure: bool) -> Result<bool> {
    let seed = cfg.seed.unwrap_or(0);
    let n = cfg.n.unwrap_or(100_000);
    let replicas = cfg.replicas.unwrap_or(16);
    let bins = cfg.bins.unwrap_or(1024);
    let x0 = cfg.x0.unwrap_or(0.0);
    let (ensemble, label) = ensemble_from(cfg, seed)?;

    if measure {
        let m = match ensemble {
            Ensemble::Rotations(mut s) => stationary_measure_estimate(&mut s, n, seed, bins, x0),
            Ensemble::Triangular(mut s) => stationary_measure_estimate(&mut s, n, seed, bins, x0),
            Ensemble::Constant(mut s) => stationary_measure_estimate(&mut s, n, seed, bins, x0),
        };
        let table = histogram_table(&m);
        let mut record = ResultRecord::new(
            "product-measure",
            serde_json::json!({"ensemble": label, "n": n, "bins": bins, "x0": x0}),
            seed,
        );
        record.summary = serde_json::json!({"sup_uniform_deviation": m.sup_uniform_deviation()});
        emit(cfg.out.as_deref(), cfg.format.as_deref().unwrap_or("csv"), &table, &record.with_config(cfg))?;
        return Ok(true);
    }

    let est = match ensemble {
        Ensemble::Rotations(s) => product_rotation_number(&s, n, replicas, seed, x0),
        Ensemble::Triangular(s) => product_rotation_number(&s, n, replicas, seed, x0),
        Ensemble::Constant(s) => product_rotation_number(&s, n, replicas, seed, x0),
    };
    let mut table = Table::new(vec!["ensemble", "n", "replicas", "rho", "stderr", "truncation"]);
    table.push(vec![
        label.clone(),
        n.to_string(),
        replicas.to_string(),
        fmt(est.value.value()),
        fmt(est.stderr),
        fmt(est.truncation_bound),
    ]);
    let mut record = ResultRecord::new(
        "product",
        serde_json::json!({"ensemble": label, "n": n, "replicas": replicas, "x0": x0}),
        seed,
    );
    record.summary = serde_json::json!({"rho": est.value.value(), "stderr": est.stderr});
    emit(cfg.out.as_deref(), cfg.format.as_deref().unwrap_or("csv"), &table, &record.with_config(cfg))?;
    Ok(true)
}

fn histogram_table(m: &EmpiricalMeasure) -> Table {
    let mut table = Table::new(vec!["bin_left", "bin_right", "mass"]);
    let w = m.bin_width();
    for (i, mass) in m.masses().iter().enumerate() {
        let left = m.bin_left(i);
        table.push(vec![fmt(left), fmt(left + w), fmt(*mass)]);
    }
    table
}

fn direction(turns: f64) -> [f64; 2] {
    let (s, c) = (std::f64::consts::TAU * turns).sin_cos();
    [c, s]
}

fn cmd_cocycle(cfg: &StudyConfig) -> Result<bool> {
    let spec = cocycle_from(cfg)?;
    let t_final = cfg.t.unwrap_or(10.0);
    let dt = cfg.dt.unwrap_or(1e-3);
    let seed = cfg.seed.unwrap_or(0);
    let traj = integrate(&spec, t_final, dt, seed, direction(cfg.s0.unwrap_or(0.0)))?;
    let est = continuous_rotation_number(&traj)?;

    // plot-ready trajectory, subsampled to at most ~10k rows
    let stride = (traj.times.len() / 10_000).max(1);
    let mut table = Table::new(vec!["t", "alpha", "s1", "s2"]);
    for i in (0..traj.times.len()).step_by(stride) {
        table.push(vec![
            fmt(traj.times[i]),
            fmt(traj.alpha[i]),
            fmt(traj.s[i][0]),
            fmt(traj.s[i][1]),
        ]);
    }
    let mut record = ResultRecord::new(
        "cocycle",
        serde_json::json!({
            "kind": cfg.kind.clone().unwrap_or_else(|| "noisy-rotation".into()),
            "T": t_final, "dt": dt, "s0": cfg.s0.unwrap_or(0.0)
        }),
        seed,
    );
    record.summary = serde_json::json!({
        "rho": est.value.value(), "raw_rate": est.raw_rate, "alpha_end": traj.alpha.last(),
    });
    emit(cfg.out.as_deref(), cfg.format.as_deref().unwrap_or("csv"), &table, &record.with_config(cfg))?;
    eprintln!("rho = {} turns/time over T = {t_final}", est.raw_rate);
    Ok(true)
}

fn cmd_sample_study(cfg: &StudyConfig) -> Result<bool> {
    let study = SamplingStudy {
        spec: cocycle_from(cfg)?,
        t_grid: cfg.t_grid.clone().unwrap_or_else(|| vec![0.5, 0.25, 0.1, 0.05, 0.02]),
        windows: cfg.windows.unwrap_or(10_000),
        replicas: cfg.replicas.unwrap_or(8),
        seed: cfg.seed.unwrap_or(0),
        dt: cfg.dt.unwrap_or(1e-3),
        s0: direction(cfg.s0.unwrap_or(0.0)),
    };
    let tbl = convergence_study(&study)?;
    let mut table = Table::new(vec!["T", "rho_over_T", "stderr", "windows"]);
    for row in &tbl.rows {
        table.push(vec![
            fmt(row.t),
            fmt(row.rho_over_t),
            fmt(row.stderr),
            row.windows.to_string(),
        ]);
    }
    let mut record = ResultRecord::new(
        "sample-study",
        serde_json::json!({
            "kind": cfg.kind.clone().unwrap_or_else(|| "noisy-rotation".into()),
            "t_grid": study.t_grid, "windows": study.windows,
            "replicas": study.replicas, "dt": study.dt,
        }),
        study.seed,
    );
    record.summary = serde_json::json!({
        "rho_continuous": tbl.rho_continuous,
        "rho_continuous_stderr": tbl.rho_continuous_stderr,
        "monotone_approach": tbl.monotone_approach,
    });
    emit(cfg.out.as_deref(), cfg.format.as_deref().unwrap_or("csv"), &table, &record.with_config(cfg))?;
    Ok(true)
}

fn cmd_nyquist(cfg: &StudyConfig) -> Result<bool> {
    let a = coeff(cfg.a.ok_or_else(|| anyhow!("nyquist needs --a"))?);
    let t = cfg.t.ok_or_else(|| anyhow!("nyquist needs --T"))?;
    let r = nyquist_check(&a, t)?;
    let mut table = Table::new(vec!["T", "exact", "rho_T_over_T", "rho_cont"]);
    table.push(vec![fmt(t), r.exact.to_string(), fmt(r.rho_t_over_t), fmt(r.rho_cont)]);
    let mut record = ResultRecord::new(
        "nyquist",
        serde_json::json!({"a": cfg.a, "T": t}),
        cfg.seed.unwrap_or(0),
    );
    record.summary = serde_json::json!({"exact": r.exact});
    emit(cfg.out.as_deref(), cfg.format.as_deref().unwrap_or("csv"), &table, &record.with_config(cfg))?;
    Ok(true)
}

fn cmd_beta_dist(cfg: &StudyConfig) -> Result<bool> {
    let spec = cocycle_from(cfg)?;
    let t = cfg.t.unwrap_or(0.25);
    let n = cfg.n.unwrap_or(100_000);
    let dt = cfg.dt.unwrap_or(1e-3);
    let bins = cfg.bins.unwrap_or(1024);
    let seed = cfg.seed.unwrap_or(0);
    let study = beta_t_samples(&spec, t, n, seed, direction(cfg.s0.unwrap_or(0.0)), dt, bins)?;
    let table = histogram_table(&study.histogram);
    let is_noisy_rotation = cfg.kind.as_deref().unwrap_or("noisy-rotation") == "noisy-rotation";
    let quadrature = is_noisy_rotation.then(|| wrapped_gaussian_mean(t, t));
    let mut record = ResultRecord::new(
        "beta-dist",
        serde_json::json!({
            "kind": cfg.kind.clone().unwrap_or_else(|| "noisy-rotation".into()),
            "T": t, "n": n, "dt": dt, "bins": bins
        }),
        seed,
    );
    record.summary = serde_json::json!({
        "mean": study.mean,
        "stderr": study.stderr,
        "wrapped_gaussian_quadrature": quadrature,
    });
    emit(cfg.out.as_deref(), cfg.format.as_deref().unwrap_or("csv"), &table, &record.with_config(cfg))?;
    eprintln!(
        "E[beta_T] = {} +/- {}{}",
        study.mean,
        study.stderr,
        quadrature.map(|q| format!(" (quadrature {q})")).unwrap_or_default()
    );
    Ok(true)
}

fn cmd_winding(cfg: &StudyConfig) -> Result<bool> {
    let spec = cocycle_from(cfg)?;
    let grid = cfg.t_grid.clone().unwrap_or_else(|| vec![0.25, 0.1, 0.05, 0.02]);
    let n = cfg.n.unwrap_or(10_000);
    let fine_div = cfg.fine_div.unwrap_or(256);
    let seed = cfg.seed.unwrap_or(0);
    let s0 = direction(cfg.s0.unwrap_or(0.0));
    let mut table = Table::new(vec![
        "T",
        "n_samples",
        "e_plus_over_t",
        "e_minus_over_t",
        "integer_defects",
        "max_angle_defect",
    ]);
    for &t in &grid {
        let fine_dt = t / fine_div as f64;
        let study = winding_counts(&spec, t, n, fine_dt, seed, s0)?;
        let check = erratum_identity_check(&spec, t, n, seed, fine_dt, s0)?;
        table.push(vec![
            fmt(t),
            n.to_string(),
            fmt(study.e_plus_over_t),
            fmt(study.e_minus_over_t),
            check.integer_defects.to_string(),
            fmt(check.max_angle_defect),
        ]);
    }
    let record = ResultRecord::new(
        "winding",
        serde_json::json!({"t_grid": grid, "n": n, "fine_div": fine_div}),
        seed,
    );
    emit(cfg.out.as_deref(), cfg.format.as_deref().unwrap_or("csv"), &table, &record.with_config(cfg))?;
    Ok(true)
}

fn cmd_example(cfg: &StudyConfig, id: u32) -> Result<bool> {
    let seed = cfg.seed.unwrap_or(0);
    let mut table = Table::new(vec!["quantity", "value", "expected", "tolerance", "pass"]);
    let mut all_ok = true;
    let check = |table: &mut Table, all_ok: &mut bool, name: &str, value: f64, expected: f64, tol: f64| {
        let ok = (value - expected).abs() <= tol;
        *all_ok &= ok;
        table.push(vec![name.into(), fmt(value), fmt(expected), fmt(tol), ok.to_string()]);
    };

    match id {
        1 => {
            let mut cycle = piecewise_four_cycle()?;
            let first = compose_rotation_number(&mut cycle, 400, 0.0);
            check(&mut table, &mut all_ok, "rho_first", first.value.value(), 0.0, 0.0);
            let mut cycle = piecewise_four_cycle()?;
            let second = pointwise_rotation(&mut cycle, 100, 0.125)?;
            check(&mut table, &mut all_ok, "rot_second_at_1_8", second.value.value(), 0.25, 0.0);
            let mut cycle = piecewise_four_cycle()?;
            let at0 = pointwise_rotation(&mut cycle, 100, 0.0)?;
            check(&mut table, &mut all_ok, "rot_second_at_0", at0.value.value(), 0.0, 0.0);
        }
        2 => {
            let lo = cfg.lo.unwrap_or(0.05);
            let hi = cfg.hi.unwrap_or(0.35);
            let n = cfg.n.unwrap_or(200_000);
            let replicas = cfg.replicas.unwrap_or(16);
            let sampler = IidRotations::new(lo, hi, seed);
            let est = product_rotation_number(&sampler, n / replicas as u64, replicas, seed, 0.0);
            check(
                &mut table,
                &mut all_ok,
                "rho_vs_mean_angle",
                est.value.value(),
                (lo + hi) / 2.0,
                3.0 * est.stderr,
            );
        }
        3 => {
            let p = cfg.p_neg.unwrap_or(0.5);
            let n = cfg.n.unwrap_or(200_000);
            let replicas = cfg.replicas.unwrap_or(16);
            let sampler = IidTriangular::new(p, seed)?;
            let est = product_rotation_number(&sampler, n / replicas as u64, replicas, seed, 0.0);
            check(&mut table, &mut all_ok, "rho_vs_half_p", est.value.value(), p / 2.0, 3.0 * est.stderr);
        }
        4 => {
            let dt = cfg.dt.unwrap_or(2.5e-4);
            let study = SamplingStudy {
                spec: CocycleSpec::noisy_rotation(),
                t_grid: cfg.t_grid.clone().unwrap_or_else(|| vec![0.5, 0.25, 0.1, 0.05, 0.02]),
                windows: cfg.windows.unwrap_or(20_000),
                replicas: cfg.replicas.unwrap_or(8),
                seed,
                dt,
                s0: [1.0, 0.0],
            };
            let tbl = convergence_study(&study)?;
            for row in &tbl.rows {
                // Heun mean bias is ~(2 pi)^2 dt / 2 per unit time
                check(
                    &mut table,
                    &mut all_ok,
                    &format!("rho_T_over_T[{}]", row.t),
                    row.rho_over_t,
                    wrapped_gaussian_mean(row.t, row.t) / row.t,
                    4.0 * row.stderr + 40.0 * dt,
                );
            }
            let last = tbl.rows.last().unwrap();
            check(
                &mut table,
                &mut all_ok,
                "final_approach_to_1",
                last.rho_over_t,
                1.0,
                0.02 + 3.0 * last.stderr,
            );
            let n = cfg.n.unwrap_or(20_000);
            for &t in &[0.1, 0.02] {
                let beta = beta_t_samples(
                    &CocycleSpec::noisy_rotation(),
                    t,
                    n,
                    seed,
                    [1.0, 0.0],
                    dt,
                    cfg.bins.unwrap_or(1024),
                )?;
                check(
                    &mut table,
                    &mut all_ok,
                    &format!("mean_beta[{t}]"),
                    beta.mean,
                    wrapped_gaussian_mean(t, t),
                    4.0 * beta.stderr + 20.0 * t * dt,
                );
            }
        }
        other => bail!("unknown example id {other} (expected 1..4)"),
    }

    let mut record = ResultRecord::new("example", serde_json::json!({"id": id}), seed);
    record.summary = serde_json::json!({"pass": all_ok});
    emit(cfg.out.as_deref(), cfg.format.as_deref().unwrap_or("csv"), &table, &record.with_config(cfg))?;
    if !all_ok {
        eprintln!("example {id}: tolerance failure (see table)");
    }
    Ok(all_ok)
}

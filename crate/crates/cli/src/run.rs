//! Experiment execution: resolve configs, run estimators, write records,
//! summaries and plot data with bit-stable formatting.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use loglaw_core::dynamics::{PhasePoint, System, TimeKind};
use loglaw_core::error::Error as CoreError;
use loglaw_core::estimators::{
    self, correlation_curve, fit_from_records, section_check, HitRecord, Observable,
    RadiusSchedule, TMaxRule,
};
use loglaw_core::geom::torus::wrap_unit;
use loglaw_core::hyperbolic::TranslateCache;
use loglaw_core::rng::RngStream;
use loglaw_core::systems::Rotation;
use loglaw_core::targets::TargetFamily;

use crate::config::{
    parse_config, resolve_schedule, resolve_system, resolve_t_max, resolve_target, ConfigError,
    ConfigFile, ExperimentConfig, ResolvedSystem,
};

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Core(CoreError),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Core(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl RunError {
    /// Distinct exit codes: 2 config, 3 sampling, 4 insufficient data,
    /// 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Core(CoreError::SamplingFailure { .. }) => 3,
            RunError::Core(CoreError::InsufficientData(_)) => 4,
            _ => 1,
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}
impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        RunError::Core(e)
    }
}
impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out_dir: Option<String>,
    pub experiment: Option<String>,
}

/// Load, validate and run a config file. Progress goes to stderr; files
/// land in the output directory.
pub fn run_config_file(path: &Path, overrides: &Overrides) -> Result<(), RunError> {
    let text = fs::read_to_string(path)?;
    let mut cfg = parse_config(&text)?;
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(w) = overrides.workers {
        cfg.workers = Some(w);
    }
    if let Some(dir) = &overrides.out_dir {
        cfg.output_dir = dir.clone();
    }
    if let Some(name) = &overrides.experiment {
        let total = cfg.experiments.len();
        cfg.experiments.retain(|e| &e.name == name);
        if cfg.experiments.is_empty() {
            return Err(ConfigError {
                key: "--experiment".into(),
                message: format!("no experiment named `{name}` among {total} configured"),
            }
            .into());
        }
    }
    run_config(&cfg)
}

/// Validate a config without running it (exit code semantics as `run`).
pub fn validate_config_file(path: &Path) -> Result<String, RunError> {
    let text = fs::read_to_string(path)?;
    let cfg = parse_config(&text)?;
    let mut lines = Vec::new();
    for exp in &cfg.experiments {
        let resolved = resolve_system(&exp.system)?;
        validate_experiment(exp, &resolved)?;
        lines.push(format!(
            "{}: kind={} system={} ok",
            exp.name,
            exp.kind,
            resolved.system.name()
        ));
    }
    Ok(lines.join("\n"))
}

fn validate_experiment(exp: &ExperimentConfig, resolved: &ResolvedSystem) -> Result<(), RunError> {
    match exp.kind.as_str() {
        "hitting-exponent" | "cylinder-dimension" | "section-check" => {
            let schedule = resolve_schedule(&exp.schedule)?;
            if exp.target.is_none() && exp.kind != "section-check" {
                return Err(ConfigError {
                    key: "target".into(),
                    message: "this experiment needs a target".into(),
                }
                .into());
            }
            if let Some(t) = &exp.target {
                let _ = resolve_target(t, resolved, schedule.l_values[0])?;
            }
            Ok(())
        }
        "correlation" => {
            let name = exp.observable.as_deref().unwrap_or("tri-x");
            if Observable::by_name(name).is_none() {
                return Err(ConfigError {
                    key: "observable".into(),
                    message: format!("unknown observable `{name}`"),
                }
                .into());
            }
            Ok(())
        }
        "excursion" | "cusp-excursion" => {
            if resolved.domain.is_none() {
                return Err(ConfigError {
                    key: "system.name".into(),
                    message: format!("{} needs a hyperbolic system", exp.kind),
                }
                .into());
            }
            Ok(())
        }
        other => Err(ConfigError {
            key: "kind".into(),
            message: format!("unknown experiment kind `{other}`"),
        }
        .into()),
    }
}

pub fn run_config(cfg: &ConfigFile) -> Result<(), RunError> {
    let workers = effective_workers(cfg.workers);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| RunError::Io(std::io::Error::other(format!("thread pool: {e}"))))?;
    fs::create_dir_all(&cfg.output_dir)?;
    eprintln!(
        "running {} experiment(s) with seed {} on {} worker(s) into {}",
        cfg.experiments.len(),
        cfg.seed,
        workers,
        cfg.output_dir
    );
    pool.install(|| {
        for (idx, exp) in cfg.experiments.iter().enumerate() {
            let t0 = Instant::now();
            eprintln!("[{}] {} ({})", idx, exp.name, exp.kind);
            run_experiment(cfg, exp, idx as u64)?;
            eprintln!(
                "[{}] {} done in {:.2}s",
                idx,
                exp.name,
                t0.elapsed().as_secs_f64()
            );
        }
        Ok(())
    })
}

/// Worker-count precedence: config/flag, then LOGLAW_WORKERS, then all
/// available cores. Results never depend on it.
pub fn effective_workers(configured: Option<usize>) -> usize {
    if let Some(w) = configured {
        if w > 0 {
            return w;
        }
    }
    if let Ok(env) = std::env::var("LOGLAW_WORKERS") {
        if let Ok(w) = env.parse::<usize>() {
            if w > 0 {
                return w;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn run_experiment(cfg: &ConfigFile, exp: &ExperimentConfig, index: u64) -> Result<(), RunError> {
    let resolved = resolve_system(&exp.system)?;
    validate_experiment(exp, &resolved)?;
    let stream_base = exp.seed_offset.unwrap_or(index << 32);
    let t0 = Instant::now();
    let out = OutputPaths::new(&cfg.output_dir, &exp.name);

    let (summary, warnings) = match exp.kind.as_str() {
        "hitting-exponent" => run_hitting(cfg, exp, &resolved, stream_base, &out)?,
        "cylinder-dimension" => run_cylinder(cfg, exp, &resolved, stream_base, &out)?,
        "correlation" => run_correlation(cfg, exp, &resolved, stream_base, &out)?,
        "section-check" => run_section(cfg, exp, &resolved, stream_base, &out)?,
        "excursion" => run_excursion(cfg, exp, &resolved, stream_base, &out, false)?,
        "cusp-excursion" => run_excursion(cfg, exp, &resolved, stream_base, &out, true)?,
        other => {
            return Err(ConfigError {
                key: "kind".into(),
                message: format!("unknown experiment kind `{other}`"),
            }
            .into())
        }
    };

    let manifest = json!({
        "name": exp.name,
        "kind": exp.kind,
        "code_version": env!("CARGO_PKG_VERSION"),
        "seed": cfg.seed,
        "stream_base": stream_base,
        "config": exp,
        "wall_time_s": t0.elapsed().as_secs_f64(),
        "summary": summary,
        "warnings": warnings,
    });
    fs::write(
        &out.summary,
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    Ok(())
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> Self {
        RunError::Io(std::io::Error::other(e))
    }
}

struct OutputPaths {
    records: PathBuf,
    summary: PathBuf,
    plot: PathBuf,
}

impl OutputPaths {
    fn new(dir: &str, name: &str) -> Self {
        let base = Path::new(dir);
        OutputPaths {
            records: base.join(format!("{name}.records.csv")),
            summary: base.join(format!("{name}.summary.json")),
            plot: base.join(format!("{name}.plot.csv")),
        }
    }
}

/// Line-buffered CSV writer: every row is flushed whole, so an
/// interrupted run leaves only complete rows behind.
struct CsvWriter {
    inner: BufWriter<fs::File>,
}

impl CsvWriter {
    fn create(path: &Path, header: &str) -> Result<Self, RunError> {
        let file = fs::File::create(path)?;
        let mut w = CsvWriter {
            inner: BufWriter::new(file),
        };
        w.row(header)?;
        Ok(w)
    }

    fn row(&mut self, line: &str) -> Result<(), RunError> {
        self.inner.write_all(line.as_bytes())?;
        self.inner.write_all(b"\n")?;
        self.inner.flush()?;
        Ok(())
    }
}

/// Shortest-round-trip decimal formatting: bit-stable and locale-free.
fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x}")
    }
}

fn default_rule(
    exp: &ExperimentConfig,
    resolved: &ResolvedSystem,
    target: &TargetFamily,
    schedule: &RadiusSchedule,
    seed: u64,
    stream_base: u64,
) -> Result<TMaxRule, RunError> {
    if exp.t_max.is_some() {
        return Ok(resolve_t_max(&exp.t_max, TMaxRule::Fixed(0.0))?);
    }
    // Budget rule t_max(l) = 100 l^{-d} with d from a coarse
    // conditional-dimension pre-pass over the three largest radii.
    let sys = resolved.system.as_ref();
    let eps_grid = match sys.time_kind() {
        TimeKind::Map => vec![1.0, 2.0, 3.0],
        TimeKind::Flow => vec![0.1, 0.2, 0.4],
    };
    let l_grid: Vec<f64> = schedule.l_values.iter().take(3).cloned().collect();
    let rng = RngStream::new(seed, stream_base ^ 0xd1e5_a0ff);
    let pre = estimators::conditional_dimension(sys, target, &eps_grid, &l_grid, 20_000, &rng)?;
    let d = pre.d.clamp(0.5, 4.0);
    eprintln!("  t_max rule: 100 * l^-{d:.3} (pre-pass dimension estimate)");
    Ok(TMaxRule::PowerLaw {
        coeff: 100.0,
        exponent: d,
    })
}

fn run_hitting(
    cfg: &ConfigFile,
    exp: &ExperimentConfig,
    resolved: &ResolvedSystem,
    stream_base: u64,
    out: &OutputPaths,
) -> Result<(serde_json::Value, Vec<String>), RunError> {
    let schedule = resolve_schedule(&exp.schedule)?;
    let ensemble = exp.ensemble.unwrap_or(100);
    let target_spec = exp.target.as_ref().ok_or_else(|| ConfigError {
        key: "target".into(),
        message: "hitting-exponent needs a target".into(),
    })?;

    let adversarial = target_spec.placement.as_deref() == Some("adversarial");
    let records: Vec<HitRecord> = if adversarial {
        let rotation = resolved.rotation.as_ref().ok_or_else(|| ConfigError {
            key: "target.placement".into(),
            message: "adversarial placement needs a rotation system".into(),
        })?;
        let rule = resolve_t_max(&exp.t_max, TMaxRule::Fixed(2e8))?;
        adversarial_rotation_hits(rotation, &schedule, ensemble, &rule, cfg.seed, stream_base)?
    } else {
        let target = resolve_target(target_spec, resolved, schedule.l_values[0])?;
        let rule = default_rule(exp, resolved, &target, &schedule, cfg.seed, stream_base)?;
        estimators::collect_hits(
            resolved.system.as_ref(),
            &target,
            &schedule,
            ensemble,
            &rule,
            cfg.seed,
            stream_base,
        )?
    };

    let mut w = CsvWriter::create(&out.records, "trajectory_id,l,tau,censored")?;
    for r in &records {
        w.row(&format!(
            "{},{},{},{}",
            r.trajectory_id,
            fmt(r.l),
            fmt(r.tau),
            r.censored as u8
        ))?;
    }

    // Summary (records are already on disk if this fails).
    let fit = fit_from_records(&schedule, &records)?;
    let mut plot = CsvWriter::create(&out.plot, "series,x,y")?;
    for rs in &fit.per_radius {
        if !rs.dropped {
            plot.row(&format!(
                "median-log-tau,{},{}",
                fmt(-rs.l.ln()),
                fmt(rs.median_log_tau)
            ))?;
        }
    }
    // Per-radius ratio log tau / -log l (the per-radius law diagnostic).
    let per_radius_ratio: Vec<serde_json::Value> = fit
        .per_radius
        .iter()
        .map(|rs| {
            json!({
                "l": rs.l,
                "ratio": rs.median_log_tau / -rs.l.ln(),
                "censored": rs.censored,
                "total": rs.total,
            })
        })
        .collect();
    let summary = json!({
        "exponent": fit,
        "per_radius_ratio": per_radius_ratio,
        "adversarial": adversarial,
    });
    Ok((summary, fit.warnings.clone()))
}

/// Worst-case hitting runs for the Liouville rotation: the target center
/// sits just under the next convergent-cluster base, where the one-sided
/// sweep takes ~(1 - 2 l q4) q5-like times to arrive. Centers are derived
/// per radius from the convergents; the measurement itself is a plain
/// orbit simulation.
fn adversarial_rotation_hits(
    rotation: &Rotation,
    schedule: &RadiusSchedule,
    ensemble: usize,
    rule: &TMaxRule,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<HitRecord>, RunError> {
    use rayon::prelude::*;
    let conv = rotation.convergents().ok_or_else(|| ConfigError {
        key: "target.placement".into(),
        message: "adversarial placement needs the liouville rotation".into(),
    })?;
    // Work at the deepest convergent level whose cluster gap exceeds the
    // largest radius: gap 1/q_k > 2 l_max.
    let l_max = schedule.l_values[0];
    let mut level = 0;
    for (k, &q) in conv.q.iter().enumerate() {
        if (q as f64) < 0.5 / l_max {
            level = k;
        }
    }
    if level + 1 >= conv.q.len() {
        return Err(ConfigError {
            key: "schedule".into(),
            message: "radii too small for the convergent depth".into(),
        }
        .into());
    }
    let q_k = conv.q[level] as f64;
    let alpha = rotation.alpha();
    let p_k = conv.p[level] as f64;
    // One-sided sweep speed of the convergent clusters.
    let sweep = (alpha - p_k / q_k).abs();

    let per_traj: Vec<Result<Vec<HitRecord>, RunError>> = (0..ensemble as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, stream_base + i);
            let x0 = rotation.sample_invariant(&mut rng)?;
            let x0v = x0.as_coords()?.as_slice()[0];
            let mut recs = Vec::with_capacity(schedule.l_values.len());
            for &l in &schedule.l_values {
                // Center just below the next cluster base.
                let delta = 10.0 * q_k * sweep;
                let c = wrap_unit(x0v + 1.0 / q_k - l - delta);
                let target = TargetFamily::torus_ball(&[c]).map_err(RunError::from)?;
                let t_max = rule.t_max(l, TimeKind::Map);
                let (tau, censored) = estimators::hitting_time(
                    rotation,
                    &PhasePoint::coords(&[x0v]),
                    &target,
                    l,
                    t_max,
                )?;
                recs.push(HitRecord {
                    trajectory_id: i,
                    l,
                    tau,
                    censored,
                });
            }
            Ok(recs)
        })
        .collect();
    let mut records = Vec::new();
    for r in per_traj {
        records.extend(r?);
    }
    Ok(records)
}

fn run_cylinder(
    cfg: &ConfigFile,
    exp: &ExperimentConfig,
    resolved: &ResolvedSystem,
    stream_base: u64,
    out: &OutputPaths,
) -> Result<(serde_json::Value, Vec<String>), RunError> {
    let schedule = resolve_schedule(&exp.schedule)?;
    let target_spec = exp.target.as_ref().ok_or_else(|| ConfigError {
        key: "target".into(),
        message: "cylinder-dimension needs a target".into(),
    })?;
    let target = resolve_target(target_spec, resolved, schedule.l_values[0])?;
    let eps_grid = exp
        .eps_grid
        .clone()
        .unwrap_or_else(|| match resolved.system.time_kind() {
            TimeKind::Map => vec![1.0, 2.0, 3.0],
            TimeKind::Flow => vec![0.05, 0.1, 0.2],
        });
    let n = exp.samples.unwrap_or(200_000);
    let rng = RngStream::new(cfg.seed, stream_base);
    let dim = estimators::conditional_dimension(
        resolved.system.as_ref(),
        &target,
        &eps_grid,
        &schedule.l_values,
        n,
        &rng,
    )?;

    let mut w = CsvWriter::create(&out.records, "epsilon,l,mu_hat,stderr,n,hits")?;
    for es in &dim.per_epsilon {
        for c in &es.estimates {
            w.row(&format!(
                "{},{},{},{},{},{}",
                fmt(c.epsilon),
                fmt(c.l),
                fmt(c.mu_hat),
                fmt(c.stderr),
                c.n,
                c.hits
            ))?;
        }
    }
    let mut plot = CsvWriter::create(&out.plot, "series,x,y")?;
    for es in &dim.per_epsilon {
        for c in &es.estimates {
            if c.mu_hat > 0.0 {
                plot.row(&format!(
                    "eps-{},{},{}",
                    fmt(es.epsilon),
                    fmt(c.l.ln()),
                    fmt(c.mu_hat.ln())
                ))?;
            }
        }
    }
    let summary = serde_json::to_value(&dim)?;
    Ok((summary, vec![]))
}

fn run_correlation(
    cfg: &ConfigFile,
    exp: &ExperimentConfig,
    resolved: &ResolvedSystem,
    stream_base: u64,
    out: &OutputPaths,
) -> Result<(serde_json::Value, Vec<String>), RunError> {
    let name = exp.observable.as_deref().unwrap_or("tri-x");
    let obs = Observable::by_name(name).ok_or_else(|| ConfigError {
        key: "observable".into(),
        message: format!("unknown observable `{name}`"),
    })?;
    let t_grid = exp
        .t_grid
        .clone()
        .unwrap_or_else(|| (0..16).map(|k| k as f64).collect());
    let n = exp.samples.unwrap_or(200_000);
    let rng = RngStream::new(cfg.seed, stream_base);
    let curve = correlation_curve(resolved.system.as_ref(), &obs, &obs, &t_grid, n, &rng)?;

    let mut w = CsvWriter::create(&out.records, "t,c,noise_floor")?;
    for j in 0..curve.t_grid.len() {
        w.row(&format!(
            "{},{},{}",
            fmt(curve.t_grid[j]),
            fmt(curve.values[j]),
            fmt(curve.noise_floor[j])
        ))?;
    }
    let mut plot = CsvWriter::create(&out.plot, "series,x,y")?;
    for j in 0..curve.t_grid.len() {
        if curve.values[j].abs() > 0.0 {
            plot.row(&format!(
                "log-abs-c,{},{}",
                fmt(curve.t_grid[j]),
                fmt(curve.values[j].abs().ln())
            ))?;
        }
    }
    let summary = serde_json::to_value(&curve)?;
    Ok((summary, vec![]))
}

fn run_section(
    cfg: &ConfigFile,
    exp: &ExperimentConfig,
    resolved: &ResolvedSystem,
    stream_base: u64,
    out: &OutputPaths,
) -> Result<(serde_json::Value, Vec<String>), RunError> {
    let flow = resolved.suspension.as_ref().ok_or_else(|| ConfigError {
        key: "system.name".into(),
        message: "section-check needs a suspension system".into(),
    })?;
    let schedule = resolve_schedule(&exp.schedule)?;
    let ensemble = exp.ensemble.unwrap_or(100);
    let center: Vec<f64> = exp
        .target
        .as_ref()
        .map(|t| t.center.clone())
        .unwrap_or_else(|| vec![0.3; flow.base().dimension()]);
    let rule = resolve_t_max(
        &exp.t_max,
        TMaxRule::PowerLaw {
            coeff: 100.0,
            exponent: flow.base().dimension() as f64,
        },
    )?;
    let report = section_check(
        flow,
        &center,
        &schedule,
        ensemble,
        &rule,
        cfg.seed,
        stream_base,
    )?;

    let mut w = CsvWriter::create(
        &out.records,
        "r,total,censored,median_log_tau_flow,median_log_tau_section,median_ratio",
    )?;
    for rr in &report.per_radius {
        w.row(&format!(
            "{},{},{},{},{},{}",
            fmt(rr.r),
            rr.total,
            rr.censored,
            fmt(rr.median_log_tau_flow),
            fmt(rr.median_log_tau_section),
            fmt(rr.median_ratio)
        ))?;
    }
    let mut plot = CsvWriter::create(&out.plot, "series,x,y")?;
    for rr in &report.per_radius {
        if !rr.dropped {
            plot.row(&format!(
                "flow,{},{}",
                fmt(-rr.r.ln()),
                fmt(rr.median_log_tau_flow)
            ))?;
            plot.row(&format!(
                "section,{},{}",
                fmt(-rr.r.ln()),
                fmt(rr.median_log_tau_section)
            ))?;
        }
    }
    let warnings = report.warnings.clone();
    let summary = serde_json::to_value(&report)?;
    Ok((summary, warnings))
}

fn run_excursion(
    cfg: &ConfigFile,
    exp: &ExperimentConfig,
    resolved: &ResolvedSystem,
    stream_base: u64,
    out: &OutputPaths,
    cusp: bool,
) -> Result<(serde_json::Value, Vec<String>), RunError> {
    use rayon::prelude::*;
    let domain = resolved.domain.as_ref().ok_or_else(|| ConfigError {
        key: "system.name".into(),
        message: "excursion experiments need a hyperbolic system".into(),
    })?;
    let center = exp
        .target
        .as_ref()
        .map(|t| t.center.clone())
        .unwrap_or_else(|| match resolved.system.name() {
            "modular" => vec![0.0, 2.0],
            _ => vec![0.15, 1.2],
        });
    let center_u = crate::config::resolve_target(
        &crate::config::TargetSpec {
            kind: "ball".into(),
            center: center.clone(),
            placement: None,
        },
        resolved,
        0.5,
    )?;
    // Excursions need a deep cache: the running min is exact while it
    // stays within the coverage, which spans the whole compact domain.
    let cache = match (&center_u, cusp) {
        (TargetFamily::HypBall { cache, .. }, true) => cache.clone(),
        (TargetFamily::HypBall { cache, .. }, false) => {
            let deep = TranslateCache::build(domain, cache.center(), 3.1)?;
            std::sync::Arc::new(deep)
        }
        _ => unreachable!("resolve_target returned a non-hyperbolic ball"),
    };
    let t_grid = exp
        .t_grid
        .clone()
        .unwrap_or_else(|| (1..=6).map(|k| 10f64.powi(k)).collect());
    let ensemble = exp.ensemble.unwrap_or(50);

    let rows: Vec<Result<Vec<String>, RunError>> = (0..ensemble as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(cfg.seed, stream_base + i);
            let u0 = loglaw_core::hyperbolic::liouville_sample(domain, &mut rng)?;
            let mut lines = Vec::with_capacity(t_grid.len());
            if cusp {
                let c = estimators::cusp_excursion(domain, &cache, i, &u0, &t_grid)?;
                for p in &c.points {
                    lines.push(format!("{},{},{},{}", i, fmt(p.t), fmt(p.d), fmt(p.ratio)));
                }
            } else {
                let c = estimators::excursion_curve(domain, &cache, i, &u0, &t_grid)?;
                for p in &c.points {
                    lines.push(format!("{},{},{},{}", i, fmt(p.t), fmt(p.d), fmt(p.ratio)));
                }
            }
            Ok(lines)
        })
        .collect();

    let mut w = CsvWriter::create(&out.records, "trajectory_id,t,d,ratio")?;
    let mut final_ratios = Vec::new();
    for r in rows {
        let lines = r?;
        if let Some(last) = lines.last() {
            if let Some(v) = last.rsplit(',').next().and_then(|s| s.parse::<f64>().ok()) {
                final_ratios.push(v);
            }
        }
        for line in lines {
            w.row(&line)?;
        }
    }
    final_ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median_final = if final_ratios.is_empty() {
        f64::NAN
    } else {
        final_ratios[final_ratios.len() / 2]
    };
    let in_band = final_ratios
        .iter()
        .filter(|&&r| (0.8..=1.2).contains(&r))
        .count();

    let mut plot = CsvWriter::create(&out.plot, "series,x,y")?;
    plot.row(&format!(
        "median-final-ratio,{},{}",
        fmt(1.0),
        fmt(median_final)
    ))?;
    let summary = json!({
        "median_final_ratio": median_final,
        "ensemble": ensemble,
        "final_ratio_in_band_0p8_1p2": in_band,
        "t_grid": t_grid,
    });
    Ok((summary, vec![]))
}

//! Reproducible experiment driver.
//!
//! An [`ExperimentConfig`] fully determines the bytes written: every output
//! file starts with `# qwalk-format 1 config-sha256 <hex>` and floats are
//! printed with 17 significant digits. Ensembles run seeds `s, s+1, …, s+N−1`
//! on a worker pool. Each member writes its own files and aggregation runs
//! afterwards in seed order.
//!
//! Layout of a walk experiment:
//!
//! ```text
//! <out>/summary.csv, summary.json
//! <out>/<group>/aggregate.csv                 t,sigma_mean,sigma_median,entropy_mean,entropy_median
//! <out>/<group>/seed-<s>/trajectory.csv       t,sigma,entropy
//! <out>/<group>/seed-<s>/distribution.csv     t,x,prob  or  t,x,y,prob
//! ```
//!
//! A group is one disorder kind at one fraction, labelled `uniform` or
//! `<kind>-<fraction>`. Uniform groups are deterministic and run a single seed.

pub mod config;
mod output;
pub mod presets;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::disorder::{build_schedule, build_schedule_2d, DisorderKind};
use crate::dispersion::{dispersion_sweep, velocity_and_spread, write_sweep_csv};
use crate::evolve1d::{run_1d, RecordFlags};
use crate::evolve2d::run_2d;
use crate::{Error, Result, NORM_TOLERANCE};

pub use config::{ExperimentConfig, ExperimentKind, FORMAT_VERSION};
use output::{float, mean, median, opt, variance, Csv};

/// Per-invocation settings that do not change the outputs.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub overwrite: bool,
    /// Worker threads; `None` lets the pool decide.
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupSummary {
    pub label: String,
    pub kind: DisorderKind,
    pub fraction: f64,
    pub seeds: Vec<u64>,
    pub sigma_final_mean: Option<f64>,
    pub sigma_final_median: Option<f64>,
    pub entropy_final_mean: Option<f64>,
    pub entropy_final_median: Option<f64>,
    pub max_norm_drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VelocitySummary {
    pub label: String,
    pub kind: DisorderKind,
    pub fraction: f64,
    pub t: usize,
    pub seeds: usize,
    pub v_g_mean: f64,
    pub v_g_median_abs: f64,
    pub v_g_variance: f64,
    pub spread_median_abs: f64,
    pub skipped: usize,
    pub evanescent: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub qwalk_format: u32,
    pub config_sha256: String,
    pub experiment: ExperimentKind,
    #[serde(skip)]
    pub output_dir: PathBuf,
    #[serde(skip)]
    pub files: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<GroupSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub velocities: Vec<VelocitySummary>,
}

#[derive(Clone, Debug)]
struct Group {
    label: String,
    kind: DisorderKind,
    fraction: f64,
    seeds: Vec<u64>,
}

fn groups(cfg: &ExperimentConfig) -> Vec<Group> {
    let ensemble: Vec<u64> = (0..cfg.ensemble as u64).map(|i| cfg.seed.wrapping_add(i)).collect();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for &kind in &cfg.disorder.kinds {
        if kind == DisorderKind::Uniform {
            if seen.insert("uniform".to_string()) {
                out.push(Group {
                    label: "uniform".into(),
                    kind,
                    fraction: 0.0,
                    seeds: vec![cfg.seed],
                });
            }
            continue;
        }
        for &fraction in &cfg.disorder.fractions {
            let label = format!("{}-{fraction:.2}", kind.label());
            if seen.insert(label.clone()) {
                out.push(Group {
                    label,
                    kind,
                    fraction,
                    seeds: ensemble.clone(),
                });
            }
        }
    }
    out
}

/// Scalar series of one ensemble member.
struct Member {
    sigmas: Vec<Option<f64>>,
    entropies: Vec<Option<f64>>,
    drift: f64,
}

fn check_drift(drift: f64, steps: usize, what: &str) -> Result<()> {
    let tolerance = NORM_TOLERANCE * (steps as f64 / 200.0).max(1.0);
    if drift > tolerance {
        return Err(Error::Invariant(format!("{what}: norm drift {drift:e} exceeds {tolerance:e}")));
    }
    Ok(())
}

// Numerical failures during evolution are invariant violations, not input errors.
fn as_invariant(e: Error) -> Error {
    match e {
        Error::Domain(m) => Error::Invariant(m),
        other => other,
    }
}

fn distribution_steps(cfg: &ExperimentConfig) -> BTreeSet<usize> {
    match &cfg.record.distribution_steps {
        Some(steps) => steps.iter().copied().collect(),
        None => BTreeSet::from([cfg.steps]),
    }
}

fn run_member(cfg: &ExperimentConfig, group: &Group, seed: u64, dir: &Path, hash: &str) -> Result<(Member, Vec<PathBuf>)> {
    let flags = RecordFlags {
        distribution: cfg.record.distribution,
        sigma: cfg.record.sigma,
        entropy: cfg.record.entropy,
    };
    let wanted = distribution_steps(cfg);
    let what = format!("{} seed {seed}", group.label);
    let mut files = Vec::new();
    let mut dist = Csv::new(
        hash,
        if cfg.experiment == ExperimentKind::Walk2d { "t,x,y,prob" } else { "t,x,prob" },
    );
    let member = if cfg.experiment == ExperimentKind::Walk2d {
        let schedule = build_schedule_2d(&cfg.schedule_2d_spec(group.kind, group.fraction, seed))?;
        let tr = run_2d(&cfg.initial, &schedule, cfg.steps, flags).map_err(as_invariant)?;
        for r in tr.records.iter().filter(|r| wanted.contains(&r.t)) {
            if let Some(d) = &r.distribution {
                for (x, y, p) in d.iter().filter(|&(_, _, p)| p != 0.0) {
                    dist.row(&[r.t.to_string(), x.to_string(), y.to_string(), float(p)]);
                }
            }
        }
        Member {
            sigmas: tr.records.iter().map(|r| r.sigma).collect(),
            entropies: tr.records.iter().map(|r| r.entropy).collect(),
            drift: tr.max_norm_drift(),
        }
    } else {
        let schedule = build_schedule(&cfg.schedule_spec(group.kind, group.fraction, seed))?;
        let tr = run_1d(&cfg.initial, &schedule, cfg.steps, flags).map_err(as_invariant)?;
        for r in tr.records.iter().filter(|r| wanted.contains(&r.t)) {
            if let Some(d) = &r.distribution {
                for (x, p) in d.iter() {
                    dist.row(&[r.t.to_string(), x.to_string(), float(p)]);
                }
            }
        }
        Member {
            sigmas: tr.records.iter().map(|r| r.sigma).collect(),
            entropies: tr.records.iter().map(|r| r.entropy).collect(),
            drift: tr.max_norm_drift(),
        }
    };
    check_drift(member.drift, cfg.steps, &what)?;

    let seed_dir = dir.join(&group.label).join(format!("seed-{seed}"));
    let mut traj = Csv::new(hash, "t,sigma,entropy");
    for (t, (s, e)) in member.sigmas.iter().zip(&member.entropies).enumerate() {
        traj.row(&[t.to_string(), opt(*s), opt(*e)]);
    }
    files.push(traj.save(&seed_dir.join("trajectory.csv"))?);
    if cfg.record.distribution {
        files.push(dist.save(&seed_dir.join("distribution.csv"))?);
    }
    Ok((member, files))
}

fn column(members: &[&Member], t: usize, pick: fn(&Member) -> &Vec<Option<f64>>) -> Vec<f64> {
    members.iter().filter_map(|m| pick(m)[t]).collect()
}

fn run_walks(cfg: &ExperimentConfig, dir: &Path, hash: &str, pool: &rayon::ThreadPool) -> Result<(Vec<GroupSummary>, Vec<PathBuf>)> {
    let groups = groups(cfg);
    let tasks: Vec<(usize, u64)> = groups
        .iter()
        .enumerate()
        .flat_map(|(g, group)| group.seeds.iter().map(move |&s| (g, s)))
        .collect();
    let results: Vec<(Member, Vec<PathBuf>)> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(g, seed)| run_member(cfg, &groups[g], seed, dir, hash))
            .collect::<Result<_>>()
    })?;

    let mut files: Vec<PathBuf> = Vec::new();
    let mut summaries = Vec::new();
    let mut summary_csv = Csv::new(
        hash,
        "label,kind,fraction,seeds,sigma_final_mean,sigma_final_median,entropy_final_mean,entropy_final_median,max_norm_drift",
    );
    for (g, group) in groups.iter().enumerate() {
        let members: Vec<&Member> = tasks
            .iter()
            .zip(&results)
            .filter(|((tg, _), _)| *tg == g)
            .map(|(_, (m, f))| {
                files.extend(f.iter().cloned());
                m
            })
            .collect();
        let mut agg = Csv::new(hash, "t,sigma_mean,sigma_median,entropy_mean,entropy_median");
        for t in 0..=cfg.steps {
            let s = column(&members, t, |m| &m.sigmas);
            let e = column(&members, t, |m| &m.entropies);
            agg.row(&[t.to_string(), opt(mean(&s)), opt(median(&s)), opt(mean(&e)), opt(median(&e))]);
        }
        files.push(agg.save(&dir.join(&group.label).join("aggregate.csv"))?);
        let s = column(&members, cfg.steps, |m| &m.sigmas);
        let e = column(&members, cfg.steps, |m| &m.entropies);
        let summary = GroupSummary {
            label: group.label.clone(),
            kind: group.kind,
            fraction: group.fraction,
            seeds: group.seeds.clone(),
            sigma_final_mean: mean(&s),
            sigma_final_median: median(&s),
            entropy_final_mean: mean(&e),
            entropy_final_median: median(&e),
            max_norm_drift: members.iter().map(|m| m.drift).fold(0.0, f64::max),
        };
        summary_csv.row(&[
            summary.label.clone(),
            summary.kind.label().into(),
            float(summary.fraction),
            summary.seeds.len().to_string(),
            opt(summary.sigma_final_mean),
            opt(summary.sigma_final_median),
            opt(summary.entropy_final_mean),
            opt(summary.entropy_final_median),
            float(summary.max_norm_drift),
        ]);
        summaries.push(summary);
    }
    files.push(summary_csv.save(&dir.join("summary.csv"))?);
    Ok((summaries, files))
}

struct VelocityRow {
    t: usize,
    value: f64,
    spread: f64,
    skipped: usize,
    evanescent: usize,
}

fn run_velocities(cfg: &ExperimentConfig, dir: &Path, hash: &str, pool: &rayon::ThreadPool) -> Result<(Vec<VelocitySummary>, Vec<PathBuf>)> {
    let groups = groups(cfg);
    let tasks: Vec<(usize, u64)> = groups
        .iter()
        .enumerate()
        .flat_map(|(g, group)| group.seeds.iter().map(move |&s| (g, s)))
        .collect();
    let k = cfg.velocity.k;
    let component = cfg.velocity.component.into();
    let rows: Vec<Vec<VelocityRow>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(g, seed)| -> Result<Vec<VelocityRow>> {
                let group = &groups[g];
                let schedule = build_schedule(&cfg.schedule_spec(group.kind, group.fraction, seed))?;
                cfg.velocity
                    .times
                    .iter()
                    .map(|&t| {
                        let (e, spread) = velocity_and_spread(&schedule, k, t, component)?;
                        Ok(VelocityRow {
                            t,
                            value: e.value,
                            spread,
                            skipped: e.skipped,
                            evanescent: e.evanescent,
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()
    })?;

    let mut csv = Csv::new(hash, "label,kind,fraction,seed,t,v_g,spread,skipped,evanescent");
    for (&(g, seed), member) in tasks.iter().zip(&rows) {
        let group = &groups[g];
        for r in member {
            csv.row(&[
                group.label.clone(),
                group.kind.label().into(),
                float(group.fraction),
                seed.to_string(),
                r.t.to_string(),
                float(r.value),
                float(r.spread),
                r.skipped.to_string(),
                r.evanescent.to_string(),
            ]);
        }
    }
    let mut files = vec![csv.save(&dir.join("velocity.csv"))?];

    let mut summaries = Vec::new();
    let mut summary_csv = Csv::new(
        hash,
        "label,kind,fraction,t,seeds,v_g_mean,v_g_median_abs,v_g_variance,spread_median_abs,skipped,evanescent",
    );
    for (g, group) in groups.iter().enumerate() {
        let members: Vec<&Vec<VelocityRow>> = tasks
            .iter()
            .zip(&rows)
            .filter(|((tg, _), _)| *tg == g)
            .map(|(_, r)| r)
            .collect();
        for (i, &t) in cfg.velocity.times.iter().enumerate() {
            let at: Vec<&VelocityRow> = members.iter().map(|m| &m[i]).collect();
            let values: Vec<f64> = at.iter().map(|r| r.value).collect();
            let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
            let spreads: Vec<f64> = at.iter().map(|r| r.spread.abs()).collect();
            let summary = VelocitySummary {
                label: group.label.clone(),
                kind: group.kind,
                fraction: group.fraction,
                t,
                seeds: at.len(),
                v_g_mean: mean(&values).unwrap_or(0.0),
                v_g_median_abs: median(&abs).unwrap_or(0.0),
                v_g_variance: variance(&values).unwrap_or(0.0),
                spread_median_abs: median(&spreads).unwrap_or(0.0),
                skipped: at.iter().map(|r| r.skipped).sum(),
                evanescent: at.iter().map(|r| r.evanescent).sum(),
            };
            summary_csv.row(&[
                summary.label.clone(),
                summary.kind.label().into(),
                float(summary.fraction),
                t.to_string(),
                summary.seeds.to_string(),
                float(summary.v_g_mean),
                float(summary.v_g_median_abs),
                float(summary.v_g_variance),
                float(summary.spread_median_abs),
                summary.skipped.to_string(),
                summary.evanescent.to_string(),
            ]);
            summaries.push(summary);
        }
    }
    files.push(summary_csv.save(&dir.join("summary.csv"))?);
    Ok((summaries, files))
}

fn run_sweep(cfg: &ExperimentConfig, dir: &Path, hash: &str) -> Result<Vec<PathBuf>> {
    let rows = dispersion_sweep(&cfg.sweep.k.values(), &cfg.sweep.theta.values(), &cfg.sweep.phi.values())?;
    let mut bytes = output::header(hash).into_bytes();
    write_sweep_csv(&mut bytes, &rows)?;
    Ok(vec![output::save(&dir.join("dispersion.csv"), &bytes)?])
}

fn prepare_output(dir: &Path, overwrite: bool) -> Result<()> {
    if dir.exists() {
        let occupied = !dir.is_dir() || std::fs::read_dir(dir)?.next().is_some();
        if occupied && !overwrite {
            return Err(Error::OutputExists(dir.display().to_string()));
        }
    }
    std::fs::create_dir_all(dir)?;
    Ok(())
}

/// Runs `cfg` and writes its outputs. The config is validated first.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary> {
    cfg.validate()?;
    let dir = opts.out.clone().unwrap_or_else(|| cfg.output_dir());
    prepare_output(&dir, opts.overwrite)?;
    let hash = cfg.hash();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.workers {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;

    let mut summary = RunSummary {
        qwalk_format: FORMAT_VERSION,
        config_sha256: hash.clone(),
        experiment: cfg.experiment,
        output_dir: dir.clone(),
        files: Vec::new(),
        groups: Vec::new(),
        velocities: Vec::new(),
    };
    match cfg.experiment {
        ExperimentKind::Walk1d | ExperimentKind::Walk2d => {
            let (groups, files) = run_walks(cfg, &dir, &hash, &pool)?;
            summary.groups = groups;
            summary.files = files;
        }
        ExperimentKind::VgEffective => {
            let (velocities, files) = run_velocities(cfg, &dir, &hash, &pool)?;
            summary.velocities = velocities;
            summary.files = files;
        }
        ExperimentKind::DispersionSweep => summary.files = run_sweep(cfg, &dir, &hash)?,
    }
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    summary.files.push(output::save(&dir.join("summary.json"), json.as_bytes())?);
    Ok(summary)
}

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{NormSpace, RunConfig};
use super::manifest::{config_hash, Manifest, MemberStatus};
use super::recipes::recipes;
use super::registry::Registry;
use super::sweep::{run_sweep, sweep_grid, write_sweep};
use crate::besov::{
    anisotropic_norm, besov_norm, bshs_aniso_ratio, bshs_ratio, injection_ratio, lebesgue_norm, sobolev_norm,
    write_norm_report, NormRow,
};
use crate::dispersion::{measure_decay_exponents, write_fit_json, write_oracle_csv, FrequencyProfile, OracleSettings};
use crate::error::{Error, Result};
use crate::limit::step_count;
use crate::rotating::{assemble_ill_prepared, step_mhd_eps, MhdState};
use crate::spectral::random::random_solenoidal;
use crate::spectral::{write_checkpoint, DIV_TOL};
use crate::verdict::Verdict;

/// Energy balance tolerance of a single run.
pub const BALANCE_TOL: f64 = 1e-6;

pub const VERDICTS_FILE: &str = "verdicts.json";

pub const INDEX_COLUMNS: [&str; 5] = ["t", "energy", "dissipation", "div_residual", "manifest_hash"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub name: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Outcome {
    pub kind: String,
    pub manifest_hash: String,
    pub verdicts: Vec<NamedVerdict>,
    pub outputs: Vec<PathBuf>,
}

impl Outcome {
    pub fn any_fail(&self) -> bool {
        self.verdicts.iter().any(|v| v.verdict == Verdict::Fail)
    }
}

pub struct Context {
    pub out_dir: PathBuf,
    pub jobs: usize,
}

pub trait Experiment: Send + Sync {
    fn run(&self, cfg: &RunConfig, ctx: &Context) -> Result<Outcome>;
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn finish(cfg: &RunConfig, ctx: &Context, verdicts: Vec<NamedVerdict>, mut outputs: Vec<PathBuf>) -> Result<Outcome> {
    let outcome = Outcome { kind: cfg.experiment.clone(), manifest_hash: config_hash(cfg), verdicts, outputs: Vec::new() };
    let path = ctx.out_dir.join(VERDICTS_FILE);
    let text = serde_json::to_string_pretty(&outcome)? + "\n";
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    outputs.push(path);
    Ok(Outcome { outputs, ..outcome })
}

fn named(name: impl Into<String>, verdict: Verdict) -> NamedVerdict {
    NamedVerdict { name: name.into(), verdict }
}

pub struct SweepExperiment;

impl Experiment for SweepExperiment {
    fn run(&self, cfg: &RunConfig, ctx: &Context) -> Result<Outcome> {
        let report = run_sweep(cfg, ctx.jobs)?;
        let outputs = write_sweep(cfg, &report, &ctx.out_dir)?;
        let verdicts = report.summaries.iter().map(|s| named(s.norm_id.clone(), s.verdict)).collect();
        finish(cfg, ctx, verdicts, outputs)
    }
}

pub struct DispersionExperiment;

impl Experiment for DispersionExperiment {
    fn run(&self, cfg: &RunConfig, ctx: &Context) -> Result<Outcome> {
        cfg.validate()?;
        let profile = FrequencyProfile { modulation: cfg.disp_modulation, ..FrequencyProfile::default() };
        let settings = OracleSettings { refinement: cfg.disp_refinement, ..OracleSettings::default() };
        let fits = measure_decay_exponents(&profile, cfg.t_end, &cfg.eps_list, cfg.nu, &cfg.disp_norms, &settings)?;
        create_dir(&ctx.out_dir)?;
        let hash = config_hash(cfg);
        let csv = ctx.out_dir.join("oracle.csv");
        let json = ctx.out_dir.join("fit.json");
        let manifest = ctx.out_dir.join("manifest.json");
        write_oracle_csv(&csv, &fits, &hash)?;
        write_fit_json(&json, &fits, &hash)?;
        let mut m = Manifest::new(cfg);
        m.outputs = vec!["oracle.csv".into(), "fit.json".into()];
        m.write(&manifest)?;
        let verdicts = fits.iter().map(|f| named(f.norm.label(), f.verdict)).collect();
        finish(cfg, ctx, verdicts, vec![csv, json, manifest])
    }
}

pub struct BesovBench;

impl Experiment for BesovBench {
    fn run(&self, cfg: &RunConfig, ctx: &Context) -> Result<Outcome> {
        cfg.validate()?;
        let grid = sweep_grid(cfg)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        // top of the last fully resolved dyadic block
        let kmax = (*grid.dims().iter().min().unwrap() as f64 / 6.0).max(1.5);
        let f = random_solenoidal(&grid, 1.0, kmax, -1.0, &mut rng);
        let mut rows = Vec::new();
        let mut resolved = true;
        for n in &cfg.norms {
            let (value, share) = match n.space {
                NormSpace::Lebesgue => (lebesgue_norm(&f, n.p), 0.0),
                NormSpace::Sobolev => (sobolev_norm(&f, n.s), 0.0),
                NormSpace::Besov => match besov_norm(&f, n.s, n.p, n.r) {
                    Ok(v) => (v.value, v.truncation_share),
                    Err(Error::Unresolved { share }) => {
                        resolved = false;
                        (f64::NAN, share)
                    }
                    Err(e) => return Err(e),
                },
            };
            rows.push(NormRow { quantity: n.id(), s: n.s, p: n.p, r: n.r, a: f64::NAN, value, truncation_share: share });
        }
        let inf = f64::INFINITY;
        let row = |quantity: &str, s: f64, p: f64, r: f64, value: f64| NormRow {
            quantity: quantity.into(),
            s,
            p,
            r,
            a: f64::NAN,
            value,
            truncation_share: 0.0,
        };
        rows.push(row("anisotropic:inf:2", 0.0, inf, 2.0, anisotropic_norm(&f, inf, 2.0)?));
        let ratios = [
            ("bshs_ratio:0.5:0.5:0.5", 0.5, 2.0, 1.0, bshs_ratio(&f, 0.5, 0.5, 0.5)?),
            ("bshs_aniso_ratio:0.5:0.5", 1.0, inf, 2.0, bshs_aniso_ratio(&f, 0.5, 0.5)?),
            ("injection_ratio:4", 0.0, 4.0, 2.0, injection_ratio(&f, 4.0)?),
            ("injection_ratio:inf", 0.0, inf, 1.0, injection_ratio(&f, inf)?),
        ];
        let mut finite = true;
        for (name, s, p, r, v) in ratios {
            let v = v.unwrap_or(f64::NAN);
            finite &= v.is_finite() && v > 0.0;
            rows.push(row(name, s, p, r, v));
        }
        create_dir(&ctx.out_dir)?;
        let csv = ctx.out_dir.join("norm_report.csv");
        write_norm_report(&csv, &rows, &config_hash(cfg))?;
        let manifest = ctx.out_dir.join("manifest.json");
        let mut m = Manifest::new(cfg);
        m.outputs = vec!["norm_report.csv".into()];
        m.write(&manifest)?;
        let verdicts = vec![
            named("ratios_finite", if finite { Verdict::Pass } else { Verdict::Fail }),
            named("besov_resolved", if resolved { Verdict::Pass } else { Verdict::Inconclusive }),
        ];
        finish(cfg, ctx, verdicts, vec![csv, manifest])
    }
}

/// One solve of the rotating system at the first `eps` of the list.
pub struct SingleRun;

impl Experiment for SingleRun {
    fn run(&self, cfg: &RunConfig, ctx: &Context) -> Result<Outcome> {
        cfg.validate()?;
        let grid = sweep_grid(cfg)?;
        let eps = cfg.eps_list[0];
        let data = recipes().get(&cfg.recipe)?.build(cfg, &grid)?;
        let mut state: MhdState = assemble_ill_prepared(&data, eps, cfg.nu, cfg.nu_prime)?;
        let (steps, dt) = step_count(cfg.t_end, cfg.dt)?;
        let hash = config_hash(cfg);
        create_dir(&ctx.out_dir)?;
        let ckpt_dir = ctx.out_dir.join("checkpoints");
        let mut outputs = Vec::new();
        let mut ckpts = Vec::new();
        let mut save = |n: usize, s: &MhdState| -> Result<()> {
            if cfg.checkpoint_every > 0 && (n % cfg.checkpoint_every == 0 || n == steps) {
                create_dir(&ckpt_dir)?;
                let name = format!("ckpt_{n:06}.bin");
                write_checkpoint(&ckpt_dir.join(&name), &s.packed())?;
                ckpts.push(format!("checkpoints/{name}"));
            }
            Ok(())
        };
        let mut index = vec![(state.t, state.energy(), state.dissipation(), state.div_residual())];
        save(0, &state)?;
        let mut status = MemberStatus { eps, status: "ok".into(), steps, dt, message: String::new() };
        for n in 1..=steps {
            match step_mhd_eps(&state, dt) {
                Ok(mut s) => {
                    s.t = n as f64 * dt;
                    state = s;
                }
                Err(e) => {
                    status.status = "failed".into();
                    status.message = e.to_string();
                    status.steps = n - 1;
                    break;
                }
            }
            index.push((state.t, state.energy(), state.dissipation(), state.div_residual()));
            save(n, &state)?;
        }
        let csv_path = ctx.out_dir.join("index.csv");
        let mut w = csv::Writer::from_path(&csv_path)?;
        w.write_record(INDEX_COLUMNS)?;
        for (t, e, d, r) in &index {
            w.write_record([format!("{t:.12e}"), format!("{e:.12e}"), format!("{d:.12e}"), format!("{r:.12e}"), hash.clone()])?;
        }
        w.flush().map_err(|e| Error::io(&csv_path, e))?;
        outputs.push(csv_path);

        let e0 = index[0].1;
        let mut integral = 0.0;
        let mut balance: f64 = 0.0;
        for w in index.windows(2) {
            integral += 0.5 * (w[1].0 - w[0].0) * (w[1].2 + w[0].2);
            if e0 > 0.0 {
                balance = balance.max((w[1].1 + integral - e0).abs() / e0);
            }
        }
        let div = index.iter().map(|r| r.3).fold(0.0, f64::max);
        let failed = status.status != "ok";
        let manifest = ctx.out_dir.join("manifest.json");
        let mut m = Manifest::new(cfg);
        m.members = vec![status];
        m.outputs = std::iter::once("index.csv".to_string()).chain(ckpts).collect();
        m.write(&manifest)?;
        outputs.push(manifest);
        let verdicts = if failed {
            vec![named("run", Verdict::Fail)]
        } else {
            vec![
                named("energy_balance", if balance <= BALANCE_TOL { Verdict::Pass } else { Verdict::Fail }),
                named("divergence", if div <= DIV_TOL { Verdict::Pass } else { Verdict::Fail }),
            ]
        };
        finish(cfg, ctx, verdicts, outputs)
    }
}

pub fn experiments() -> Registry<dyn Experiment> {
    let mut r: Registry<dyn Experiment> = Registry::new("experiment");
    let entries: [(&str, Box<dyn Experiment>); 4] = [
        ("sweep", Box::new(SweepExperiment)),
        ("dispersion", Box::new(DispersionExperiment)),
        ("besov-bench", Box::new(BesovBench)),
        ("single-run", Box::new(SingleRun)),
    ];
    for (name, e) in entries {
        r.register(name, e).expect("distinct names");
    }
    r
}

/// Runs the experiment named by `cfg.experiment`.
pub fn run_experiment(cfg: &RunConfig, ctx: &Context) -> Result<Outcome> {
    experiments().get(&cfg.experiment)?.run(cfg, ctx)
}

/// Collects the verdict files found in `dir` and its immediate subdirectories.
pub fn collect_outcomes(dir: &Path) -> Result<Vec<Outcome>> {
    let read_dir = |d: &Path| std::fs::read_dir(d).map_err(|e| Error::io(d, e));
    let mut candidates = vec![dir.join(VERDICTS_FILE)];
    for entry in read_dir(dir)? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if entry.path().is_dir() {
            candidates.push(entry.path().join(VERDICTS_FILE));
        }
    }
    candidates.sort();
    let mut out = Vec::new();
    for path in candidates.into_iter().filter(|p| p.is_file()) {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        out.push(serde_json::from_str(&text)?);
    }
    if out.is_empty() {
        return Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no run outputs found"),
        ));
    }
    Ok(out)
}

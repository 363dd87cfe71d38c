use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::axisym::{OracleSettings, Snapshot};
use super::gauss_rule;
use super::profile::FrequencyProfile;
use crate::error::{Error, Result};
use crate::verdict::{ols, Verdict};

/// Spatial norm of the free wave.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "space", content = "index")]
pub enum SpaceNorm {
    /// `L^r(R^3)`
    Lebesgue(f64),
    /// `L^m_h L^2_v`
    Anisotropic(f64),
}

/// How time enters the measured norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeMode {
    /// The spatial norm at `t`.
    Fixed,
    /// `L^p(0, t)` with the largest time exponent of the Strichartz family:
    /// `p = 2/(1 - 2/r)` isotropic, `p = 4/(1 - 2/m)` anisotropic.
    Endpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRequest {
    pub norm: SpaceNorm,
    pub time: TimeMode,
}

impl NormRequest {
    pub fn index(&self) -> f64 {
        match self.norm {
            SpaceNorm::Lebesgue(r) | SpaceNorm::Anisotropic(r) => r,
        }
    }

    /// `(1/2)(1 - 2/r)` or `(1/4)(1 - 2/m)`.
    pub fn predicted_exponent(&self) -> f64 {
        match self.norm {
            SpaceNorm::Lebesgue(r) => 0.5 * (1.0 - 2.0 / r),
            SpaceNorm::Anisotropic(m) => 0.25 * (1.0 - 2.0 / m),
        }
    }

    pub fn time_exponent(&self) -> f64 {
        match self.time {
            TimeMode::Fixed => f64::INFINITY,
            TimeMode::Endpoint => 1.0 / self.predicted_exponent(),
        }
    }

    /// Accepted slope error.
    pub fn tolerance(&self) -> f64 {
        match self.norm {
            SpaceNorm::Lebesgue(r) if r == 2.0 => 0.02,
            SpaceNorm::Anisotropic(_) => 0.07,
            SpaceNorm::Lebesgue(_) => 0.10,
        }
    }

    pub fn label(&self) -> String {
        let space = match self.norm {
            SpaceNorm::Lebesgue(_) => "lebesgue",
            SpaceNorm::Anisotropic(_) => "anisotropic",
        };
        let time = match self.time {
            TimeMode::Fixed => "fixed",
            TimeMode::Endpoint => "endpoint",
        };
        format!("{space}_{time}")
    }

    fn validate(&self) -> Result<()> {
        let i = self.index();
        let ok = match self.norm {
            SpaceNorm::Lebesgue(r) => r >= 2.0,
            SpaceNorm::Anisotropic(m) => m > 2.0,
        };
        if !ok || i.is_nan() {
            return Err(Error::Invalid(format!("unsupported norm index {i} for {}", self.label())));
        }
        Ok(())
    }

    fn spatial(&self, snap: &Snapshot, exact_l2: f64) -> (f64, f64) {
        match self.norm {
            SpaceNorm::Lebesgue(r) => snap.lebesgue(r, Some(exact_l2)),
            SpaceNorm::Anisotropic(m) => snap.anisotropic(m),
        }
    }
}

/// One line of the oracle CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRow {
    pub eps: f64,
    pub t: f64,
    pub norm_type: String,
    pub r_or_m: f64,
    pub value: f64,
    pub tail_bound: f64,
    pub nodes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    pub norm: NormRequest,
    pub predicted_exponent: f64,
    pub fitted_slope: f64,
    pub r_squared: f64,
    pub verdict: Verdict,
    /// Largest relative change of a value under node doubling.
    pub doubling_change: f64,
    pub tolerance: f64,
    pub rows: Vec<OracleRow>,
}

/// Times of the composite Gauss rule on `[0, t]`, with panels geometric in `t/eps`.
pub fn time_rule(t: f64, eps: f64, per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let tau_max = t / eps;
    let mut edges = vec![0.0];
    let mut e = 1.0;
    while e < tau_max {
        edges.push(e);
        e *= 2.0;
    }
    edges.push(tau_max);
    let (mut nodes, mut weights) = (Vec::new(), Vec::new());
    for w in edges.windows(2) {
        let (x, wt) = gauss_rule(per_panel, w[0], w[1]);
        nodes.extend(x.iter().map(|tau| tau * eps));
        weights.extend(wt.iter().map(|w| w * eps));
    }
    (nodes, weights)
}

/// Values of all requested norms at one `eps`: `(value, tail, nodes)` per request.
fn evaluate(
    profile: &FrequencyProfile,
    t: f64,
    eps: f64,
    nu: f64,
    norms: &[NormRequest],
    settings: &OracleSettings,
) -> Result<Vec<(f64, f64, usize)>> {
    let need_fixed = norms.iter().any(|n| n.time == TimeMode::Fixed);
    let need_path = norms.iter().any(|n| n.time == TimeMode::Endpoint);
    let mut out = vec![(0.0, 0.0, 0); norms.len()];
    if need_fixed {
        let snap = Snapshot::new(profile, t, eps, nu, settings)?;
        let exact = profile.l2_sqr(nu, t).sqrt();
        for (o, n) in out.iter_mut().zip(norms) {
            if n.time == TimeMode::Fixed {
                let (v, tail) = n.spatial(&snap, exact);
                *o = (v, tail, snap.nodes());
            }
        }
    }
    if need_path {
        let (times, weights) = time_rule(t, eps, settings.time_nodes);
        let mut acc = vec![(0.0, 0.0, 0usize); norms.len()];
        let mut sup = vec![(0.0f64, 0.0f64); norms.len()];
        let mut first = true;
        for (&s, &w) in std::iter::once(&0.0).chain(&times).zip(std::iter::once(&0.0).chain(&weights)) {
            let snap = Snapshot::new(profile, s, eps, nu, settings)?;
            let exact = profile.l2_sqr(nu, s).sqrt();
            for (k, n) in norms.iter().enumerate() {
                if n.time != TimeMode::Endpoint {
                    continue;
                }
                let p = n.time_exponent();
                if p.is_infinite() {
                    let (v, tail) = n.spatial(&snap, exact);
                    sup[k] = (sup[k].0.max(v), sup[k].1.max(tail));
                } else if !first {
                    let (v, tail) = n.spatial(&snap, exact);
                    acc[k].0 += w * v.powf(p);
                    acc[k].1 += w * tail.powf(p);
                }
                acc[k].2 += snap.nodes();
            }
            first = false;
        }
        for (k, n) in norms.iter().enumerate() {
            if n.time == TimeMode::Endpoint {
                let p = n.time_exponent();
                out[k] = if p.is_infinite() {
                    (sup[k].0, sup[k].1, acc[k].2)
                } else {
                    (acc[k].0.powf(1.0 / p), acc[k].1.powf(1.0 / p), acc[k].2)
                };
            }
        }
    }
    Ok(out)
}

/// Checks shared by every measurement.
pub fn validate_measurement(profile: &FrequencyProfile, t: f64, eps_list: &[f64], nu: f64) -> Result<()> {
    profile.validate()?;
    if eps_list.len() < 4 {
        return Err(Error::Invalid(format!("need at least 4 eps values, got {}", eps_list.len())));
    }
    if eps_list.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Invalid("eps values must be positive".into()));
    }
    let (lo, hi) = eps_list.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
    if hi / lo < 10.0 * (1.0 - 1e-9) {
        return Err(Error::Invalid(format!("eps values span {:.3} decades, need one", (hi / lo).log10())));
    }
    if nu * t * profile.r2 * profile.r2 > 1.0 {
        return Err(Error::Invalid(format!(
            "heat factor dominates: nu t r2^2 = {:.3} > 1",
            nu * t * profile.r2 * profile.r2
        )));
    }
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("t must be positive, got {t}")));
    }
    Ok(())
}

/// Slopes of `log(norm)` against `log(eps)` at fixed `t`, with node-doubling checks.
pub fn measure_decay_exponents(
    profile: &FrequencyProfile,
    t: f64,
    eps_list: &[f64],
    nu: f64,
    norms: &[NormRequest],
    settings: &OracleSettings,
) -> Result<Vec<DecayFit>> {
    validate_measurement(profile, t, eps_list, nu)?;
    for n in norms {
        n.validate()?;
    }
    let fine = settings.doubled();
    let mut per_eps = Vec::new();
    for &eps in eps_list {
        let coarse = evaluate(profile, t, eps, nu, norms, settings)?;
        let refined = evaluate(profile, t, eps, nu, norms, &fine)?;
        log::info!("oracle eps={eps:.4e} done");
        per_eps.push((eps, coarse, refined));
    }
    let mut fits = Vec::new();
    for (k, n) in norms.iter().enumerate() {
        let mut rows = Vec::new();
        let mut change: f64 = 0.0;
        for (eps, coarse, refined) in &per_eps {
            let (v, tail, nodes) = refined[k];
            change = change.max((v - coarse[k].0).abs() / v.abs().max(f64::MIN_POSITIVE));
            rows.push(OracleRow {
                eps: *eps,
                t,
                norm_type: n.label(),
                r_or_m: n.index(),
                value: v,
                tail_bound: tail,
                nodes,
            });
        }
        let x: Vec<f64> = rows.iter().map(|r| r.eps.ln()).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.value.ln()).collect();
        let (slope, _, r2) = ols(&x, &y);
        let predicted = n.predicted_exponent();
        let tolerance = n.tolerance();
        // a flat law has no variance to explain; judge it by its spread instead
        let fit_ok = if predicted == 0.0 {
            let my = y.iter().sum::<f64>() / y.len() as f64;
            let spread = y.iter().map(|v| (v - my).abs()).fold(0.0, f64::max);
            let span = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - x.iter().cloned().fold(f64::INFINITY, f64::min);
            spread <= 0.5 * tolerance * span
        } else {
            r2 >= 0.95
        };
        let verdict = if !fit_ok || change >= 1e-4 {
            Verdict::Inconclusive
        } else if (slope - predicted).abs() <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        fits.push(DecayFit {
            norm: *n,
            predicted_exponent: predicted,
            fitted_slope: slope,
            r_squared: r2,
            verdict,
            doubling_change: change,
            tolerance,
            rows,
        });
    }
    Ok(fits)
}

pub fn measure_decay_exponent(
    profile: &FrequencyProfile,
    t: f64,
    eps_list: &[f64],
    nu: f64,
    norm: NormRequest,
    settings: &OracleSettings,
) -> Result<DecayFit> {
    Ok(measure_decay_exponents(profile, t, eps_list, nu, &[norm], settings)?.remove(0))
}

pub const ORACLE_COLUMNS: [&str; 8] = ["eps", "t", "norm_type", "r_or_m", "value", "tail_bound", "nodes", "manifest_hash"];

pub fn write_oracle_csv(path: &Path, fits: &[DecayFit], manifest_hash: &str) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(ORACLE_COLUMNS)?;
    for f in fits {
        for r in &f.rows {
            w.write_record([
                format!("{:.12e}", r.eps),
                format!("{:.12e}", r.t),
                r.norm_type.clone(),
                fmt_index(r.r_or_m),
                format!("{:.12e}", r.value),
                format!("{:.12e}", r.tail_bound),
                r.nodes.to_string(),
                manifest_hash.to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn fmt_index(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x}")
    }
}

#[derive(Serialize)]
struct FitJson<'a> {
    norm_type: String,
    r_or_m: String,
    predicted_exponent: f64,
    fitted_slope: f64,
    r_squared: f64,
    verdict: Verdict,
    doubling_change: f64,
    tolerance: f64,
    manifest_hash: &'a str,
}

/// Keys of each `fit.json` entry, in order.
pub const FIT_FIELDS: [&str; 9] = [
    "norm_type",
    "r_or_m",
    "predicted_exponent",
    "fitted_slope",
    "r_squared",
    "verdict",
    "doubling_change",
    "tolerance",
    "manifest_hash",
];

pub fn write_fit_json(path: &Path, fits: &[DecayFit], manifest_hash: &str) -> Result<()> {
    let body: Vec<FitJson> = fits
        .iter()
        .map(|f| FitJson {
            norm_type: f.norm.label(),
            r_or_m: fmt_index(f.norm.index()),
            predicted_exponent: f.predicted_exponent,
            fitted_slope: f.fitted_slope,
            r_squared: f.r_squared,
            verdict: f.verdict,
            doubling_change: f.doubling_change,
            tolerance: f.tolerance,
            manifest_hash,
        })
        .collect();
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    serde_json::to_writer_pretty(&mut file, &body)?;
    writeln!(file).map_err(|e| Error::io(path, e))
}

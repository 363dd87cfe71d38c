use crate::besov::{time_norm, StateTrajectory};
use crate::error::{Error, Result};

/// Admissible `(sigma, p)` for the transported-field integrability estimate with regularity `delta`.
///
/// * `sigma in [0, 1/2 + delta]`: `p in [2/sigma, inf]`
/// * `sigma in (1/2 + delta, 1]`: `p in [2/sigma, 2/(sigma - 1/2 - delta)]`
/// * `sigma in (1, 3/2 + delta]`: `p in [2, 2/(sigma - 1/2 - delta)]`
pub fn admissibility(sigma: f64, p: f64, delta: f64) -> Result<()> {
    let reject = |bound: String| Err(Error::Inadmissible { sigma, p, bound });
    if !(delta > 0.0) {
        return Err(Error::Invalid(format!("delta must be positive, got {delta}")));
    }
    if !(p >= 1.0) {
        return reject("p must lie in [1, inf]".into());
    }
    let knee = 0.5 + delta;
    if sigma < 0.0 || sigma > 1.5 + delta {
        return reject(format!("sigma must lie in [0, {}]", 1.5 + delta));
    }
    let lower = if sigma <= 1.0 { 2.0 / sigma } else { 2.0 };
    let upper = if sigma <= knee { f64::INFINITY } else { 2.0 / (sigma - knee) };
    if p < lower {
        return reject(format!("p >= {lower}"));
    }
    if p > upper {
        return reject(format!("p <= {upper}"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrabilityReport {
    pub sigma: f64,
    pub p: f64,
    /// `||c||_{L^p(0,T; Hdot^sigma)}`
    pub norm: f64,
    /// `norm / ||c0||_{H^{1/2+delta}}`
    pub ratio: f64,
}

/// Samples `||c||_{L^p_t Hdot^sigma}` on the stored horizon after the admissibility check.
pub fn sample_ce_integrability(
    traj: &StateTrajectory,
    sigma: f64,
    p: f64,
    delta: f64,
) -> Result<IntegrabilityReport> {
    admissibility(sigma, p, delta)?;
    let first = traj.states().first().ok_or(Error::EmptyTrajectory)?;
    let series: Vec<f64> = traj.states().iter().map(|c| c.sobolev_sqr(sigma).sqrt()).collect();
    let norm = time_norm(traj.times(), &series, p);
    let c0 = (first.norm_sqr() + first.sobolev_sqr(0.5 + delta)).sqrt();
    let ratio = if c0 > 0.0 { norm / c0 } else { 0.0 };
    Ok(IntegrabilityReport { sigma, p, norm, ratio })
}

use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// Time samples of a field on one grid.
#[derive(Clone, Debug, Default)]
pub struct StateTrajectory {
    times: Vec<f64>,
    states: Vec<SpectralField>,
}

impl StateTrajectory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(times: Vec<f64>, states: Vec<SpectralField>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::Invalid("times and states differ in length".into()));
        }
        let mut t = StateTrajectory::new();
        for (time, s) in times.into_iter().zip(states) {
            t.push(time, s)?;
        }
        Ok(t)
    }

    pub fn push(&mut self, t: f64, state: SpectralField) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(Error::Invalid(format!("times must increase ({t} after {last})")));
            }
            if state.grid() != self.states[0].grid() {
                return Err(Error::GridMismatch("trajectory states must share one grid".into()));
            }
        }
        self.times.push(t);
        self.states.push(state);
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SpectralField] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&SpectralField> {
        self.states.last()
    }

    /// Linear interpolation in time; exact at sample instants.
    pub fn at(&self, t: f64) -> Result<SpectralField> {
        let (first, last) = match (self.times.first(), self.times.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Error::EmptyTrajectory),
        };
        let tol = 1e-9 * (1.0 + last.abs());
        if t < first - tol || t > last + tol {
            return Err(Error::TrajectoryGap { t, last });
        }
        let i = self.times.partition_point(|&s| s < t - tol);
        if i < self.times.len() && (self.times[i] - t).abs() <= tol {
            return Ok(self.states[i].clone());
        }
        let (a, b) = (i - 1, i);
        let w = (t - self.times[a]) / (self.times[b] - self.times[a]);
        self.states[a].scale(1.0 - w).axpy(w, &self.states[b])
    }

    /// Applies `f` to every state.
    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> StateTrajectory {
        StateTrajectory { times: self.times.clone(), states: self.states.iter().map(f).collect() }
    }

    /// Pairwise combination of two trajectories on the same time grid.
    pub fn zip_with(
        &self,
        other: &StateTrajectory,
        f: impl Fn(&SpectralField, &SpectralField) -> Result<SpectralField>,
    ) -> Result<StateTrajectory> {
        same_times(&self.times, &other.times)?;
        let states = self.states.iter().zip(&other.states).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(StateTrajectory { times: self.times.clone(), states })
    }
}

pub(crate) fn same_times(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| (x - y).abs() > 1e-12 * (1.0 + x.abs())) {
        return Err(Error::TimeGrid(format!("{} vs {} samples", a.len(), b.len())));
    }
    Ok(())
}

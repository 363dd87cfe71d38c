//! Integrating-factor Heun step shared by all solvers.
//!
//! For `dU/dt = L U + N(U)` with exact propagator `E(dt) = exp(dt L)`:
//!
//! ```text
//! k1 = N(U_n)
//! U* = E (U_n + dt k1)
//! U_{n+1} = E (U_n + dt/2 k1) + dt/2 N(U*)
//! ```

use crate::error::Result;
use crate::spectral::SpectralField;

pub fn if_heun_step<E, N>(u: &SpectralField, dt: f64, propagate: E, rhs: N) -> Result<SpectralField>
where
    E: Fn(&SpectralField) -> Result<SpectralField>,
    N: Fn(&SpectralField, f64) -> Result<SpectralField>,
{
    let k1 = rhs(u, 0.0)?;
    let pred = propagate(&u.axpy(dt, &k1)?)?;
    let k2 = rhs(&pred, dt)?;
    propagate(&u.axpy(0.5 * dt, &k1)?)?.axpy(0.5 * dt, &k2)
}

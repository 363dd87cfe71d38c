use serde::Serialize;

use crate::besov::{sobolev_norm, StateTrajectory};
use crate::error::{Error, Result};
use crate::spectral::{advect, extend_planar, leray_project, SpectralField};

/// Regularities at which every term is measured.
pub const BUDGET_REGULARITIES: [f64; 2] = [0.0, 0.5];

/// Trajectories needed by the budget; all share one time grid.
#[derive(Clone, Copy, Debug, Default)]
pub struct BudgetInputs<'a> {
    pub u: Option<&'a StateTrajectory>,
    pub b: Option<&'a StateTrajectory>,
    pub u_tilde: Option<&'a StateTrajectory>,
    pub b_tilde: Option<&'a StateTrajectory>,
    pub c: Option<&'a StateTrajectory>,
    pub w: Option<&'a StateTrajectory>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermBudget {
    pub t: f64,
    /// `[||F_i||_{Hdot^0}, ||F_i||_{Hdot^1/2}]`, `i = 1..13`
    pub f_terms: Vec<[f64; 2]>,
    /// `[||G_i||_{Hdot^0}, ||G_i||_{Hdot^1/2}]`, `i = 1..14`
    pub g_terms: Vec<[f64; 2]>,
    /// Relative L2 gap between the summed F terms and the assembled momentum right-hand side.
    pub f_closure: f64,
    pub g_closure: f64,
    /// 1-based index of the largest G term in `Hdot^0`.
    pub largest_g: usize,
}

fn need<'a>(x: Option<&'a StateTrajectory>, name: &str) -> Result<&'a StateTrajectory> {
    x.ok_or_else(|| Error::Missing(name.into()))
}

fn norms(f: &SpectralField) -> [f64; 2] {
    BUDGET_REGULARITIES.map(|s| sobolev_norm(f, s))
}

fn closure(sum: &SpectralField, assembled: &SpectralField) -> f64 {
    let gap = sum.sub(assembled).unwrap().l2_norm();
    let scale = assembled.l2_norm();
    if scale == 0.0 {
        gap
    } else {
        gap / scale
    }
}

fn sum(fields: &[SpectralField]) -> SpectralField {
    fields.iter().skip(1).fold(fields[0].clone(), |acc, f| acc.add(f).unwrap())
}

/// Norms of the terms driving `delta = u - u~ - W` and `d = b - b~ - c` at sample time `t`.
pub fn perturbation_budget(inputs: &BudgetInputs, t: f64) -> Result<TermBudget> {
    let u_tr = need(inputs.u, "u")?;
    let b_tr = need(inputs.b, "b")?;
    let ut_tr = need(inputs.u_tilde, "u_tilde")?;
    let bt_tr = need(inputs.b_tilde, "b_tilde")?;
    let c_tr = need(inputs.c, "c")?;
    let w_tr = need(inputs.w, "W")?;
    for other in [b_tr, ut_tr, bt_tr, c_tr, w_tr] {
        crate::besov::same_time_grid(u_tr, other)?;
    }
    let u = u_tr.at(t)?;
    let b = b_tr.at(t)?;
    let grid = u.grid().clone();
    let ut = extend_planar(&ut_tr.at(t)?, &grid)?;
    let bt = extend_planar(&bt_tr.at(t)?, &grid)?;
    let c = c_tr.at(t)?;
    let w = w_tr.at(t)?;
    let dl = u.sub(&ut)?.sub(&w)?;
    let d = b.sub(&bt)?.sub(&c)?;
    let a = |f: &SpectralField, g: &SpectralField| advect(f, g).unwrap();
    let p = |f: SpectralField| leray_project(&f);

    let f_fields = vec![
        p(a(&dl, &dl)).scale(-1.0),
        p(a(&dl, &w)).scale(-1.0),
        p(a(&w, &dl)).scale(-1.0),
        p(a(&w, &w)).scale(-1.0),
        p(a(&dl, &ut)).scale(-1.0),
        p(a(&w, &ut)).scale(-1.0),
        p(a(&ut, &dl)).scale(-1.0),
        p(a(&ut, &w)).scale(-1.0),
        p(a(&d, &d)),
        p(a(&d, &bt)),
        p(a(&d, &c)),
        p(a(&bt, &d)),
        p(a(&c, &d)),
    ];
    let g_fields = vec![
        a(&dl, &d).scale(-1.0),
        a(&w, &d).scale(-1.0),
        a(&d, &dl),
        a(&d, &w),
        a(&ut, &d).scale(-1.0),
        a(&d, &ut),
        a(&dl, &bt).scale(-1.0),
        a(&dl, &c).scale(-1.0),
        a(&w, &bt).scale(-1.0),
        a(&w, &c).scale(-1.0),
        a(&bt, &dl),
        a(&c, &dl),
        a(&bt, &w),
        a(&c, &w),
    ];

    // assembled from the full fields
    let forcing = a(&bt, &c).add(&a(&c, &bt))?.add(&a(&c, &c))?;
    let mom = p(a(&u, &u).sub(&a(&b, &b))?)
        .scale(-1.0)
        .add(&p(a(&ut, &ut).sub(&a(&bt, &bt))?))?
        .sub(&p(forcing))?;
    let ind = a(&u, &b)
        .sub(&a(&b, &u))?
        .scale(-1.0)
        .add(&a(&ut, &bt).sub(&a(&bt, &ut))?)?
        .add(&a(&ut, &c).sub(&a(&c, &ut))?)?;

    let g_terms: Vec<[f64; 2]> = g_fields.iter().map(norms).collect();
    let largest_g = g_terms
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, n)| if n[0] > best.1 { (i, n[0]) } else { best })
        .0
        + 1;
    Ok(TermBudget {
        t,
        f_terms: f_fields.iter().map(norms).collect(),
        f_closure: closure(&sum(&f_fields), &mom),
        g_closure: closure(&sum(&g_fields), &ind),
        g_terms,
        largest_g,
    })
}

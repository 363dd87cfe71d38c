mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use common::*;
use rotmhd::besov::*;
use rotmhd::dispersion::*;
use rotmhd::harness::*;
use rotmhd::limit::*;
use rotmhd::rotating::*;
use rotmhd::spectral::random::{random_field, random_solenoidal};
use rotmhd::spectral::*;
use rotmhd::verdict::Verdict;
use rotmhd::{Error, Result};

type Check = Result<(bool, String)>;

fn line(name: &str, outcome: Check) -> bool {
    let (ok, text) = match outcome {
        Ok((ok, detail)) => (ok, format!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" })),
        Err(e) => (false, format!("FAIL {name}: error: {e}")),
    };
    // written to the handle directly so the line survives output capture
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}").unwrap();
    out.flush().unwrap();
    ok
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
    a.sub(b).unwrap().l2_norm() / b.l2_norm().max(f64::MIN_POSITIVE)
}

fn structural() -> Check {
    let g = Grid::cube(16, 2.0 * PI)?;
    let mut r = rng(1);
    let (f, h) = (random_field(&g, 3, 1.0, 5.0, -1.0, &mut r), random_field(&g, 3, 1.0, 5.0, -1.0, &mut r));
    let pf = leray_project(&f);
    let idem = rel(&leray_project(&pf), &pf);
    let adj = (pf.inner(&h) - f.inner(&leray_project(&h))).abs() / (f.l2_norm() * h.l2_norm());

    let g2 = planar_grid(16);
    let g3 = g2.extend(8, 2.0 * PI)?;
    let u = extend_planar(&planar_data(&g2, 1, 1.0), &g3)?.add(&bulk_data(&g3, 2, 0.3))?;
    let b = extend_planar(&planar_data(&g2, 3, 0.5), &g3)?.add(&bulk_data(&g3, 4, 0.3))?;
    let run = run_mhd(MhdState::new(u, b, 0.05, 0.05, 0.05)?, 0.1, 1e-3, 1).map_err(|f| f.error)?;
    let div = run.diagnostics.iter().map(|d| d.div_residual).fold(0.0, f64::max);

    let v = random_solenoidal(&g, 1.0, 5.0, -1.0, &mut r);
    let two = coriolis_heat_propagate(&coriolis_heat_propagate(&v, 0.3, 0.05, 0.02)?, 0.4, 0.05, 0.02)?;
    let semi = rel(&two, &coriolis_heat_propagate(&v, 0.7, 0.05, 0.02)?);

    let ok = idem <= 1e-12 && adj <= 1e-12 && div <= 1e-10 && semi <= 1e-12 && run.diagnostics.len() == 101;
    Ok((ok, format!("idempotence {idem:.1e}, adjointness {adj:.1e}, div over 100 steps {div:.1e}, semigroup {semi:.1e}")))
}

fn energy() -> Check {
    let g2 = planar_grid(16);
    let g3 = g2.extend(8, 2.0 * PI)?;
    let u = extend_planar(&planar_data(&g2, 1, 1.0), &g3)?.add(&bulk_data(&g3, 2, 0.3))?;
    let b = extend_planar(&planar_data(&g2, 3, 0.5), &g3)?.add(&bulk_data(&g3, 4, 0.3))?;
    let run = run_mhd(MhdState::new(u, b, 0.1, 0.05, 0.05)?, 0.5, 2e-3, 1).map_err(|f| f.error)?;
    let mhd = energy_balance_residual(&run.diagnostics);

    let planar = solve_2dmhd3(&planar_data(&g2, 1, 1.0), &planar_data(&g2, 2, 0.5), 0.05, 0.05, 1.0, 1e-3)?;
    let two_d = energy_inequality(&planar).balance_residual;

    let v = bulk_data(&g3, 5, 1.0);
    let prop = (coriolis_heat_propagate(&v, 3.7, 0.01, 0.0)?.l2_norm() - v.l2_norm()).abs() / v.l2_norm();

    let ok = mhd <= 1e-6 && two_d <= 1e-6 && prop <= 1e-12;
    Ok((ok, format!("3D balance {mhd:.1e}, 2D balance {two_d:.1e}, inviscid propagator {prop:.1e}")))
}

fn invariance() -> Check {
    let g2 = planar_grid(32);
    let g3 = g2.extend(8, 2.0 * PI)?;
    let (u0, b0) = (planar_data(&g2, 1, 1.0), planar_data(&g2, 2, 0.5));
    let limit = solve_2dmhd3(&u0, &b0, 0.05, 0.05, 0.2, 1e-3)?;
    let mut gaps = Vec::new();
    for eps in [1.0, 0.1, 0.01] {
        let s = MhdState::new(extend_planar(&u0, &g3)?, extend_planar(&b0, &g3)?, eps, 0.05, 0.05)?;
        let run = run_mhd(s, 0.2, 1e-3, 1).map_err(|f| f.error)?;
        let mut gap: f64 = 0.0;
        for (a, b) in run.trajectory.states().iter().zip(limit.trajectory.states()) {
            gap = gap.max(rel(a, &extend_planar(b, &g3)?));
        }
        gaps.push(gap);
    }
    let worst = gaps.iter().cloned().fold(0.0, f64::max);
    Ok((worst <= 1e-8, format!("sup_t gaps {:.1e} / {:.1e} / {:.1e} for eps 1, 0.1, 0.01", gaps[0], gaps[1], gaps[2])))
}

fn dispersion() -> Check {
    let eps: Vec<f64> = (0..5).map(|i| 0.1 * 10f64.powf(-(i as f64) / 4.0)).collect();
    let inf = f64::INFINITY;
    let requests = [
        NormRequest { norm: SpaceNorm::Lebesgue(2.0), time: TimeMode::Fixed },
        NormRequest { norm: SpaceNorm::Lebesgue(inf), time: TimeMode::Endpoint },
        NormRequest { norm: SpaceNorm::Anisotropic(inf), time: TimeMode::Endpoint },
        NormRequest { norm: SpaceNorm::Lebesgue(inf), time: TimeMode::Fixed },
        NormRequest { norm: SpaceNorm::Anisotropic(inf), time: TimeMode::Fixed },
    ];
    let start = std::time::Instant::now();
    let fits = measure_decay_exponents(&FrequencyProfile::default(), 1.0, &eps, 0.005, &requests, &OracleSettings::default())?;
    let judged = &fits[..3];
    let ok = judged.iter().all(|f| f.verdict == Verdict::Pass);
    let detail: Vec<String> = fits
        .iter()
        .map(|f| {
            format!(
                "{}:{} slope {:.3} (want {:.2}+-{:.2}, {}, doubling {:.0e})",
                f.norm.label(),
                f.norm.index(),
                f.fitted_slope,
                f.predicted_exponent,
                f.tolerance,
                f.verdict,
                f.doubling_change
            )
        })
        .collect();
    Ok((ok, format!("{}; {:.0}s", detail.join("; "), start.elapsed().as_secs_f64())))
}

fn rate_algebra() -> Check {
    let e = |r: f64| rate_exponents(r);
    let hand = [
        (e(3.0)?.m, 1.0 / 14.0),
        (e(3.0)?.delta, 5.0 / 28.0),
        (e(4.0)?.alpha, 2.0),
        (e(2.5)?.beta, 2.0),
        (e(6.0)?.m, 0.0),
    ];
    let hand_err = hand.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    // m at 6 from below: linear in the gap with slope 1/84
    let limit = [1e-4, 1e-6, 1e-9].iter().map(|h| Ok((e(6.0 - h)?.m - h / 84.0).abs() / h)).collect::<Result<Vec<f64>>>()?;
    let limit_err = limit.into_iter().fold(0.0, f64::max);
    // breakpoints: delta and m switch at 5/2, theta and alpha at 10/3, theta' and beta at 5
    let mut jump: f64 = 0.0;
    for r in [2.5, 10.0 / 3.0, 5.0] {
        let (a, b) = (e(r - 1e-9)?, e(r + 1e-9)?);
        for (x, y) in [(a.alpha, b.alpha), (a.beta, b.beta), (a.delta, b.delta), (a.m, b.m), (a.theta, b.theta), (a.theta_prime, b.theta_prime)] {
            jump = jump.max((x - y).abs());
        }
    }
    let grid: Vec<RateExponents> = (0..1000).map(|i| e(2.1 + 3.9 * i as f64 / 999.0)).collect::<Result<_>>()?;
    let mut step: f64 = 0.0;
    for w in grid.windows(2) {
        for (x, y) in [(w[0].alpha, w[1].alpha), (w[0].beta, w[1].beta), (w[0].delta, w[1].delta), (w[0].m, w[1].m)] {
            step = step.max((x - y).abs() / x.abs().max(1.0));
        }
    }
    let ok = hand_err == 0.0 && limit_err <= 1e-6 && jump <= 1e-7 && step < 0.05;
    Ok((ok, format!("hand values off by {hand_err:.1e}, left limit at 6 off by {limit_err:.1e}, breakpoint jump {jump:.1e}, largest relative grid step {step:.3}")))
}

fn convergence_sweep() -> Check {
    let cfg = RunConfig::load(&configs().join("sweep.cfg"))?;
    let report = run_sweep(&cfg, 1)?;
    let mut ok = report.members.iter().all(|m| m.status == "ok");
    let mut parts = Vec::new();
    for s in &report.summaries {
        let want = if s.norm_id == D_NORM_ID { Verdict::Pass } else { Verdict::Trend };
        ok &= s.verdict == want;
        parts.push(format!("{} {} (slope {:.2})", s.norm_id, s.verdict, s.fitted_slope));
    }
    let d_max = report.values(D_NORM_ID).iter().map(|v| v.1).fold(0.0, f64::max);
    Ok((ok, format!("{}; max D {d_max:.2} vs frozen {}", parts.join(", "), report.d0)))
}

fn worst_ratio(fields: &[SpectralField], f: impl Fn(&SpectralField) -> Result<Option<f64>>) -> Result<f64> {
    let mut m: f64 = 0.0;
    for x in fields {
        m = m.max(f(x)?.unwrap_or(0.0));
    }
    Ok(m)
}

fn besov_machinery() -> Check {
    let g = Grid::cube(32, 2.0 * PI)?;
    let lad = DyadicLadder::for_grid(&g);
    let masks: Vec<Vec<f64>> = lad.j_range().map(|j| lad.mask(j)).collect();
    let unity = (1..g.len()).map(|i| (masks.iter().map(|m| m[i]).sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
    let f = random_solenoidal(&g, 1.0, 10.0, -1.0, &mut rng(3));
    let mut sum = SpectralField::zeros(&g, 3);
    for j in lad.j_range() {
        sum = sum.add(&lad.block(&f, j))?;
    }
    let recon = rel(&sum, &f);

    let g16 = Grid::cube(16, 2.0 * PI)?;
    let mut ordered = 0;
    for seed in 0..50 {
        let mut r = rng(seed);
        let mut traj = StateTrajectory::new();
        for k in 0..6 {
            traj.push(k as f64 * 0.1, random_field(&g16, 1, 1.0, 3.0, -1.0, &mut r).scale(1.0 + k as f64))?;
        }
        let above = lebesgue_besov_norm(&traj, 4.0, 0.5, 2.0, 2.0)? <= chemin_lerner_norm(&traj, 4.0, 0.5, 2.0, 2.0)? * (1.0 + 1e-12);
        let below = chemin_lerner_norm(&traj, 1.0, 0.5, 2.0, 2.0)? <= lebesgue_besov_norm(&traj, 1.0, 0.5, 2.0, 2.0)? * (1.0 + 1e-12);
        ordered += usize::from(above && below);
    }

    let g64 = g.refined(2)?;
    let coarse: Vec<SpectralField> = (0..20).map(|s| random_solenoidal(&g, 1.0, 5.0, -1.0, &mut rng(100 + s))).collect();
    let fine: Vec<SpectralField> = coarse.iter().map(|c| rotmhd::besov::resample(c, &g64)).collect::<Result<_>>()?;
    let iso = |x: &SpectralField| bshs_ratio(x, 0.5, 0.5, 0.5);
    let aniso = |x: &SpectralField| bshs_aniso_ratio(x, 0.5, 0.5);
    let iso_change = (worst_ratio(&fine, iso)? / worst_ratio(&coarse, iso)? - 1.0).abs();
    let aniso_change = (worst_ratio(&fine, aniso)? / worst_ratio(&coarse, aniso)? - 1.0).abs();

    let g2 = Grid::square(32, 2.0 * PI)?;
    let c = random_solenoidal(&g, 1.0, 10.0, -1.0, &mut rng(11));
    let bt = random_solenoidal(&g2, 1.0, 10.0, -1.0, &mut rng(12));
    let mut leak: f64 = 0.0;
    for q in 0..4 {
        let [lh, hl, rem] = paraproduct_block(&c, &bt, 4, q)?;
        leak = leak
            .max(annulus_leakage(&lh, q, 1.0 / 12.0, 10.0 / 3.0))
            .max(annulus_leakage(&hl, q, 1.0 / 12.0, 10.0 / 3.0))
            .max(ball_leakage(&rem, q, 46.0));
    }
    let refused = matches!(paraproduct_2d3d(&c, &bt, 1), Err(Error::SupportLemmaVoid(1)));
    let j1_leak = (1..4)
        .map(|q| paraproduct_block(&c, &bt, 1, q).map(|p| annulus_leakage(&p[1], q, 1.0 / 3.0, 11.0 / 4.0)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let ok = unity <= 1e-10
        && recon <= 1e-10
        && ordered == 50
        && iso_change <= 0.2
        && aniso_change <= 0.2
        && leak <= 1e-10
        && refused
        && j1_leak > 1e-8;
    Ok((
        ok,
        format!(
            "unity {unity:.1e}, reconstruction {recon:.1e}, ordering {ordered}/50, ratio maxima change under doubling {:.1}% / {:.1}%, j0=4 leakage {leak:.1e}, j0=1 refused {refused} with leakage {j1_leak:.1e}",
            100.0 * iso_change,
            100.0 * aniso_change
        ),
    ))
}

/// The three-case table written out by hand.
fn table(sigma: f64, p: f64, delta: f64) -> bool {
    let knee = 0.5 + delta;
    if sigma <= knee {
        sigma > 0.0 && p >= 2.0 / sigma
    } else if sigma <= 1.0 {
        p >= 2.0 / sigma && p <= 2.0 / (sigma - knee)
    } else if sigma <= 1.5 + delta {
        p >= 2.0 && p <= 2.0 / (sigma - knee)
    } else {
        false
    }
}

fn admissibility_table() -> Check {
    let inf = f64::INFINITY;
    let pairs = [(0.3, 7.0), (0.3, inf), (0.3, 6.0), (0.65, 3.2), (0.7, 20.0), (0.9, 2.5), (1.2, 2.0), (1.2, 4.0), (1.7, 2.0)];
    let mut agree = 0;
    let mut accepted = Vec::new();
    for delta in [0.1, 1.0 / 6.0] {
        for &(sigma, p) in &pairs {
            let got = admissibility(sigma, p, delta).is_ok();
            agree += usize::from(got == table(sigma, p, delta));
            if got {
                accepted.push((sigma, p, delta));
            }
        }
    }

    let g2 = planar_grid(16);
    let g3 = g2.extend(8, 2.0 * PI)?;
    let planar = solve_2dmhd3(&planar_data(&g2, 1, 1.0), &planar_data(&g2, 2, 0.5), 0.05, 0.05, 0.5, 2e-3)?;
    let mut spread: f64 = 1.0;
    let mut finite = true;
    let mut largest: f64 = 0.0;
    for &(sigma, p, delta) in &accepted {
        let data = IllPreparedData {
            planar_u0: planar_data(&g2, 1, 1.0),
            planar_b0: planar_data(&g2, 2, 0.5),
            bulk_v0: bulk_data(&g3, 3, 0.3),
            bulk_c0: shell_field(&g3, 0.3, 1, 3),
            gamma: 0.4 * delta,
            delta,
            strong: Some(StrongScaling { c0: 1.0, k0: 1.0 }),
        };
        let mut ratios = Vec::new();
        for eps in [0.2, 0.1, 0.05, 0.025] {
            let (_, c0) = data.bulk_at(eps)?;
            let c = solve_transported_magnetic(&c0, &planar.velocity(), 0.05, 0.5, 2e-3)?;
            let rep = sample_ce_integrability(&c.trajectory, sigma, p, delta)?;
            finite &= rep.norm.is_finite() && rep.ratio.is_finite();
            ratios.push(rep.ratio);
        }
        let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
        spread = spread.max(hi / lo);
        largest = largest.max(hi);
    }
    let total = 2 * pairs.len();
    let ok = agree == total && finite && spread <= 1.0 + 1e-8;
    Ok((
        ok,
        format!(
            "table agreement {agree}/{total}, {} accepted pairs, largest ratio {largest:.3}, ratio spread across the sweep {:.1e}",
            accepted.len(),
            spread - 1.0
        ),
    ))
}

fn determinism() -> Check {
    let cfg = RunConfig::parse(
        "grid.n = 8, 8, 4\nsweep.eps_list = 0.2, 0.1, 0.05\ndata.v_amp = 0.3\ntime.T = 0.1\ntime.dt = 0.005\ntime.samples = 10\nseed = 11\n",
    )?;
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_sweep(&cfg, &run_sweep(&cfg, 1)?, a.path())?;
    write_sweep(&cfg, &run_sweep(&cfg, 2)?, b.path())?;
    let read = |d: &std::path::Path| std::fs::read(d.join("sweep_report.csv")).map_err(|e| Error::io(d, e));
    let same = read(a.path())? == read(b.path())?;
    Ok((same, format!("sweep_report.csv byte-identical across repeats (1 and 2 workers): {same}")))
}

#[test]
fn acceptance() {
    let results = [
        line("structural exactness", structural()),
        line("energy identities", energy()),
        line("2D invariance", invariance()),
        line("rate algebra", rate_algebra()),
        line("Besov machinery", besov_machinery()),
        line("transported-field admissibility", admissibility_table()),
        line("determinism", determinism()),
        line("convergence sweep (TREND)", convergence_sweep()),
        line("dispersion exponents", dispersion()),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    writeln!(std::io::stdout().lock(), "{passed}/{} criteria met", results.len()).unwrap();
}

use std::f64::consts::PI;

use num_complex::Complex64;
use rotmhd::dispersion::*;
use rotmhd::spectral::Grid;
use rotmhd::Error;

fn mag(v: [Complex64; 3]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn rate_exponents_hand_values() {
    let e3 = rate_exponents(3.0).unwrap();
    assert!((e3.m - 1.0 / 14.0).abs() < 1e-15);
    assert!((e3.delta - 5.0 / 28.0).abs() < 1e-15);
    assert!((e3.alpha - 12.0 / 5.0).abs() < 1e-15);
    assert!((e3.beta - 1.5).abs() < 1e-15);
    assert_eq!(e3.theta, 1.0);
    let e4 = rate_exponents(4.0).unwrap();
    assert!((e4.m - 1.0 / 28.0).abs() < 1e-15);
    assert!((e4.delta - 5.0 / 56.0).abs() < 1e-15);
    assert_eq!(e4.alpha, 2.0);
    assert_eq!(e4.theta, 0.5);
    assert!((rate_exponents(2.5).unwrap().beta - 2.0).abs() < 1e-15);
}

#[test]
fn rate_exponents_domain() {
    for r in [2.0, 1.0, 6.0 + 1e-9, f64::NAN, f64::INFINITY] {
        assert!(matches!(rate_exponents(r), Err(Error::Exponents(_))), "r = {r}");
    }
    let e6 = rate_exponents(6.0).unwrap();
    assert_eq!(e6.m, 0.0);
    assert!(e6.delta >= 0.0);
}

#[test]
fn rate_exponents_continuous_and_signed() {
    let n = 1000;
    let rs: Vec<f64> = (0..=n).map(|i| 2.1 + 3.9 * i as f64 / n as f64).collect();
    let mut prev: Option<RateExponents> = None;
    for &r in &rs {
        let e = rate_exponents(r).unwrap();
        if r < 6.0 {
            assert!(e.m > 0.0);
        }
        assert!(e.delta >= 0.0);
        assert!(e.alpha >= 2.0 && e.beta >= 1.0 && e.beta < 4.0);
        if let Some(p) = prev {
            // step 3.9e-3: a jump would show up as an O(1) relative change
            for (a, b) in [(p.alpha, e.alpha), (p.beta, e.beta), (p.m, e.m), (p.delta, e.delta)] {
                assert!((a - b).abs() < 0.05 * a.abs().max(1.0), "jump near r = {r}");
            }
        }
        prev = Some(e);
    }
    let near = |r: f64| rate_exponents(r).unwrap().m;
    assert!(near(2.0 + 1e-9) < 1e-8 && near(6.0 - 1e-9) < 1e-8);
    assert!(rate_exponents(2.0 + 1e-6).unwrap().alpha > 1e5);
}

#[test]
fn strong_rate_bounds() {
    assert!((strong_rate_exponent(0.1, 0.0).unwrap() - 0.05 / 18.0).abs() < 1e-15);
    assert!(strong_rate_exponent(0.2, 0.0).is_err());
    assert!(strong_rate_exponent(0.1, 0.05).is_err());
}

#[test]
fn eigenprojectors_complete_and_orthogonal() {
    for xi in [[1.0, 0.5, -0.3], [0.2, -1.1, 2.0], [-0.7, 0.0, 0.1]] {
        let (p, m) = eigenprojectors(xi);
        let rho2: f64 = xi.iter().map(|x| x * x).sum();
        for i in 0..3 {
            for j in 0..3 {
                let leray = if i == j { 1.0 } else { 0.0 } - xi[i] * xi[j] / rho2;
                assert!((p[i][j] + m[i][j] - Complex64::new(leray, 0.0)).norm() < 1e-12);
                let mut pm = Complex64::default();
                let mut pp = Complex64::default();
                for k in 0..3 {
                    pm += p[i][k] * m[k][j];
                    pp += p[i][k] * p[k][j];
                }
                assert!(pm.norm() < 1e-12);
                assert!((pp - p[i][j]).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn profile_is_solenoidal_and_supported() {
    for modulation in [Modulation::Toroidal, Modulation::Poloidal] {
        let p = FrequencyProfile { modulation, ..FrequencyProfile::default() };
        for xi in [[0.3, 0.9, 0.2], [1.5, -0.4, 1.0], [0.1, 0.1, 2.0]] {
            let v = p.value(xi);
            let div: Complex64 = (0..3).map(|c| v[c] * xi[c]).sum();
            assert!(div.norm() < 1e-12);
        }
        assert_eq!(mag(p.value([0.5, 0.0, 0.0])), 0.0);
        assert_eq!(mag(p.value([3.0, 0.0, 0.0])), 0.0);
    }
}

#[test]
fn under_resolved_quadrature_is_refused() {
    let p = FrequencyProfile::default();
    match semigroup_point_eval(&p, 1.0, 1e-3, 0.0, [0.0; 3]) {
        Err(Error::UnderResolved { required, have, .. }) => assert!(required > have),
        other => panic!("expected refusal, got {other:?}"),
    }
}

/// At `t = 0` both quadratures reproduce the inverse transform of the datum, here taken
/// from a dense FFT of the profile sampled on a large box.
#[test]
fn initial_value_matches_dense_fft() {
    let p = FrequencyProfile::default();
    let l = 32.0 * PI;
    let grid = Grid::cube(128, l).unwrap();
    let f = sample_on_box(&p, &grid).unwrap();
    let phys = f.physical();
    // vertical images of the axisymmetric transform sit 2e-7 off at the default margin
    let settings = OracleSettings { margin: 24.0, ..OracleSettings::default() };
    // the 1/|box| in the samples turns the mode sum into a Riemann sum of the inverse transform
    for (i, j, k) in [(0, 0, 0), (1, 0, 0), (2, 3, 1), (0, 0, 2)] {
        let idx = grid.index(i, j, k);
        let x = [grid.coordinate(0, i), grid.coordinate(1, j), grid.coordinate(2, k)];
        let fft: Vec<f64> = (0..3).map(|c| phys[c][idx]).collect();
        let sph = semigroup_point_eval(&p, 0.0, 1.0, 0.0, x).unwrap();
        let axi = axisymmetric_point_eval(&p, 0.0, 1.0, 0.0, x, &settings).unwrap();
        let norm = fft.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-3);
        for c in 0..3 {
            assert!(sph[c].im.abs() < 1e-10 && axi[c].im.abs() < 1e-10);
            assert!((sph[c].re - fft[c]).abs() < 1e-6 * norm, "spherical {x:?} c={c}: {} vs {}", sph[c].re, fft[c]);
            assert!((axi[c].re - fft[c]).abs() < 1e-6 * norm, "axisymmetric {x:?} c={c}: {} vs {}", axi[c].re, fft[c]);
        }
    }
}

#[test]
fn spherical_and_axisymmetric_agree() {
    let p = FrequencyProfile {
        nodes: SphericalNodes { radial: 48, polar: 160, azimuthal: 96 },
        ..FrequencyProfile::default()
    };
    let settings = OracleSettings::default();
    for (t, eps, x) in [(1.0, 0.2, [1.0, -2.0, 0.5]), (0.5, 0.1, [3.0, 1.0, -2.0])] {
        let a = semigroup_point_eval(&p, t, eps, 0.01, x).unwrap();
        let b = axisymmetric_point_eval(&p, t, eps, 0.01, x, &settings).unwrap();
        let scale = mag(a).max(1e-3);
        for c in 0..3 {
            assert!((a[c] - b[c]).norm() < 1e-6 * scale, "t={t} eps={eps} c={c}: {} vs {}", a[c], b[c]);
        }
    }
}

/// `(2 pi)^-3 int |v0_hat|`, the largest amplitude any phase pattern can produce.
fn transform_l1(p: &FrequencyProfile) -> f64 {
    let (rn, rw) = gauss_rule(64, p.r1, p.r2);
    let (mn, mw) = gauss_rule(64, -1.0, 1.0);
    let mut acc = 0.0;
    for (&rho, &wr) in rn.iter().zip(&rw) {
        for (&mu, &wm) in mn.iter().zip(&mw) {
            let s = (1.0 - mu * mu).sqrt();
            // axisymmetric modulus: the azimuth integral is a factor 2 pi
            acc += wr * wm * rho * rho * 2.0 * PI * mag(p.value([rho * s, 0.0, rho * mu]));
        }
    }
    acc / (2.0 * PI).powi(3)
}

#[test]
fn heat_factor_bounds_amplitude() {
    let p = FrequencyProfile::default();
    let settings = OracleSettings::default();
    let (t, eps, nu) = (0.5, 0.2, 2.0);
    let bound = (-nu * t * p.r1 * p.r1).exp() * transform_l1(&p);
    let snap = Snapshot::new(&p, t, eps, nu, &settings).unwrap();
    let (sup, _) = snap.lebesgue(f64::INFINITY, None);
    assert!(sup <= bound, "{sup} > {bound}");
    for x in [[0.0, 0.0, 0.0], [1.0, 0.5, -0.5], [2.0, -1.0, 3.0]] {
        let v = mag(semigroup_point_eval(&p, t, eps, nu, x).unwrap());
        assert!(v <= bound, "{v} > {bound} at {x:?}");
    }
}

#[test]
fn l2_norm_matches_parseval() {
    let p = FrequencyProfile::default();
    let settings = OracleSettings::default();
    for (t, eps) in [(0.0, 0.1), (1.0, 0.1), (1.0, 0.03)] {
        let snap = Snapshot::new(&p, t, eps, 0.01, &settings).unwrap();
        let exact = p.l2_sqr(0.01, t).sqrt();
        let (v, tail) = snap.lebesgue(2.0, Some(exact));
        assert!(v <= exact * (1.0 + 1e-6), "t={t} eps={eps}: {v} vs {exact}");
        assert!(exact - v < 1e-3 * exact, "t={t} eps={eps}: {v} vs {exact}");
        assert!((v * v + tail * tail - exact * exact).abs() < 1e-12);
    }
}

#[test]
fn box_semigroup_matches_oracle_at_short_times() {
    let p = FrequencyProfile::default();
    let grid = Grid::cube(64, 16.0 * PI).unwrap();
    let settings = OracleSettings::default();
    for (t, eps) in [(0.0, 1.0), (0.2, 0.2), (0.5, 0.25)] {
        let c = box_crosscheck(&p, &grid, t, eps, 0.01, &settings).unwrap();
        assert!(c.relative_gap < 0.01, "t={t} eps={eps}: {c:?}");
    }
}

#[test]
fn measurement_preconditions() {
    let p = FrequencyProfile::default();
    let short = [0.1, 0.05, 0.02];
    assert!(validate_measurement(&p, 1.0, &short, 0.0).is_err());
    let narrow = [0.1, 0.08, 0.06, 0.04];
    assert!(validate_measurement(&p, 1.0, &narrow, 0.0).is_err());
    let good = [0.1, 0.05, 0.02, 0.01];
    assert!(validate_measurement(&p, 1.0, &good, 0.0).is_ok());
    // heat factor dominating
    assert!(validate_measurement(&p, 1.0, &good, 1.0).is_err());
}

#[test]
fn time_rule_integrates_polynomials_and_decay() {
    let (x, w) = time_rule(2.0, 0.1, 6);
    let int: f64 = x.iter().zip(&w).map(|(t, w)| w * t * t).sum();
    assert!((int - 8.0 / 3.0).abs() < 1e-12);
    let tau: f64 = x.iter().zip(&w).map(|(t, w)| w / (1.0 + t / 0.1).powi(2)).sum();
    let exact = 0.1 * (1.0 - 1.0 / 21.0);
    assert!((tau - exact).abs() < 1e-8);
}

#[test]
fn reports_written() {
    let p = FrequencyProfile::default();
    let eps = [0.4, 0.2, 0.1, 0.04];
    let norms = [NormRequest { norm: SpaceNorm::Lebesgue(2.0), time: TimeMode::Fixed }];
    let fits = measure_decay_exponents(&p, 0.2, &eps, 0.01, &norms, &OracleSettings::default()).unwrap();
    assert_eq!(fits[0].rows.len(), 4);
    assert!(fits[0].fitted_slope.abs() < 0.02);
    let dir = tempfile::tempdir().unwrap();
    write_oracle_csv(&dir.path().join("oracle.csv"), &fits, "abc").unwrap();
    write_fit_json(&dir.path().join("fit.json"), &fits, "abc").unwrap();
    let csv = std::fs::read_to_string(dir.path().join("oracle.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), ORACLE_COLUMNS.join(","));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",abc")));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("fit.json")).unwrap()).unwrap();
    let entry = json.as_array().unwrap()[0].as_object().unwrap();
    let mut keys: Vec<&str> = entry.keys().map(String::as_str).collect();
    let mut want = FIT_FIELDS.to_vec();
    keys.sort();
    want.sort();
    assert_eq!(keys, want);
}

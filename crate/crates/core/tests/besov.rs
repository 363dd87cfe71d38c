mod common;

use common::rng;
use proptest::prelude::*;
use rotmhd::besov::*;
use rotmhd::spectral::random::{random_field, random_solenoidal};
use rotmhd::spectral::{Grid, SpectralField};
use rotmhd::Error;
use std::f64::consts::PI;

fn cube(n: usize) -> Grid {
    Grid::cube(n, 2.0 * PI).unwrap()
}

#[test]
fn cutoffs_shape() {
    assert_eq!(chi(0.0), 1.0);
    assert_eq!(chi(CHI_INNER), 1.0);
    assert_eq!(chi(CHI_OUTER), 0.0);
    assert_eq!(phi(0.74), 0.0);
    assert_eq!(phi(8.0 / 3.0 + 1e-12), 0.0);
    let mut prev = 1.0;
    for i in 0..200 {
        let v = chi(i as f64 / 100.0);
        assert!(v <= prev);
        prev = v;
    }
}

#[test]
fn partition_of_unity() {
    for r in [0.01, 0.3, 1.0, 1.7, 5.0, 123.4, 3.0e4] {
        let s: f64 = (-20..=20).map(|j| phi(r * 2f64.powi(-j))).sum();
        assert!((s - 1.0).abs() <= 1e-10, "r = {r}: {s}");
    }
    let lad = DyadicLadder::for_grid(&cube(32));
    let masks: Vec<Vec<f64>> = lad.j_range().map(|j| lad.mask(j)).collect();
    for idx in 1..lad.grid().len() {
        let s: f64 = masks.iter().map(|m| m[idx]).sum();
        assert!((s - 1.0).abs() <= 1e-10, "mode {idx}: {s}");
    }
}

#[test]
fn blocks_reconstruct_the_field() {
    let g = cube(32);
    let f = random_solenoidal(&g, 1.0, 15.0, -1.0, &mut rng(3));
    let lad = DyadicLadder::for_grid(&g);
    let mut sum = SpectralField::zeros(&g, 3);
    for j in lad.j_range() {
        sum = sum.add(&lad.block(&f, j)).unwrap();
    }
    assert!(sum.sub(&f).unwrap().l2_norm() <= 1e-10 * f.l2_norm());
}

#[test]
fn besov_2_2_equals_sobolev_up_to_constant() {
    // phi^2 sums to between 1/2 and 1, and 2^{js} / |k|^s lies in [(3/8)^|s|, (4/3)^|s|] on block j
    let g = cube(32);
    for seed in 0..5 {
        let f = random_solenoidal(&g, 1.0, 6.0, -1.0, &mut rng(seed));
        for s in [-0.5, 0.0, 0.7] {
            let b = besov_norm(&f, s, 2.0, 2.0).unwrap().value;
            let h = sobolev_norm(&f, s);
            let (hi, lo) = ((4.0f64 / 3.0).powf(s.abs()), (3.0f64 / 8.0).powf(s.abs()) / 2f64.sqrt());
            assert!(b <= h * hi * (1.0 + 1e-12) && b >= h * lo * (1.0 - 1e-12), "s={s}: {b} vs {h}");
        }
    }
}

#[test]
fn lebesgue_norm_of_a_mode() {
    let g = cube(16);
    let n = g.len();
    let data: Vec<f64> = (0..n)
        .map(|i| {
            let [a, _, _] = g.unindex(i);
            (g.coordinate(0, a)).cos()
        })
        .collect();
    let f = SpectralField::from_physical(&g, &[data]).unwrap();
    let vol = g.volume();
    assert!((lebesgue_norm(&f, 2.0) - (vol / 2.0).sqrt()).abs() < 1e-10);
    assert!((lebesgue_norm(&f, f64::INFINITY) - 1.0).abs() < 1e-12);
    // int cos^4 = 3/8 vol
    assert!((lebesgue_norm(&f, 4.0) - (0.375 * vol).powf(0.25)).abs() < 1e-10);
    // x3-constant: L^inf_h L^2_v = sqrt(2 pi)
    assert!((anisotropic_norm(&f, f64::INFINITY, 2.0).unwrap() - (2.0 * PI).sqrt()).abs() < 1e-10);
}

#[test]
fn half_box_norm_is_local() {
    let g = cube(16);
    let inside = (0..g.len())
        .map(|i| {
            let [a, b, c] = g.unindex(i);
            let central = |k: usize| (4..12).contains(&k);
            if central(a) && central(b) && central(c) {
                1.0
            } else {
                0.0
            }
        })
        .collect::<Vec<f64>>();
    let f = SpectralField::from_physical(&g, &[inside]).unwrap();
    let quarter = g.volume() / 8.0;
    assert!((half_box_norm(&f, 2.0) - quarter.sqrt()).abs() < 1e-10);
    assert!((half_box_norm(&f, 2.0) - lebesgue_norm(&f, 2.0)).abs() < 1e-10);
}

#[test]
fn truncation_is_reported() {
    let g = cube(16);
    let f = random_field(&g, 1, 7.0, 8.0, 0.0, &mut rng(1));
    match besov_norm(&f, 0.0, 2.0, 2.0) {
        Err(Error::Unresolved { share }) => assert!(share > MAX_TRUNCATION_SHARE),
        Ok(v) => assert!(v.truncation_share <= MAX_TRUNCATION_SHARE),
        Err(e) => panic!("{e}"),
    }
    assert!(besov_norm(&f, 0.0, 0.5, 2.0).is_err());
}

fn random_trajectory(seed: u64, n: usize) -> StateTrajectory {
    let g = cube(16);
    let mut r = rng(seed);
    let mut traj = StateTrajectory::new();
    for k in 0..n {
        let f = random_field(&g, 1, 1.0, 3.0, -1.0, &mut r);
        traj.push(k as f64 * 0.1, f.scale(1.0 + k as f64)).unwrap();
    }
    traj
}

#[test]
fn chemin_lerner_ordering() {
    for seed in 0..50 {
        let traj = random_trajectory(seed, 6);
        // a >= c: plain norm below the Chemin-Lerner norm; a <= c: above
        let (a, c) = (4.0, 2.0);
        let cl = chemin_lerner_norm(&traj, a, 0.5, 2.0, c).unwrap();
        let lb = lebesgue_besov_norm(&traj, a, 0.5, 2.0, c).unwrap();
        assert!(lb <= cl * (1.0 + 1e-12), "seed {seed}: {lb} > {cl}");
        let (a, c) = (1.0, 2.0);
        let cl = chemin_lerner_norm(&traj, a, 0.5, 2.0, c).unwrap();
        let lb = lebesgue_besov_norm(&traj, a, 0.5, 2.0, c).unwrap();
        assert!(cl <= lb * (1.0 + 1e-12), "seed {seed}: {cl} > {lb}");
        let eq = (chemin_lerner_norm(&traj, 2.0, 0.0, 2.0, 2.0).unwrap()
            - lebesgue_besov_norm(&traj, 2.0, 0.0, 2.0, 2.0).unwrap())
        .abs();
        assert!(eq < 1e-10);
    }
}

#[test]
fn time_norm_of_constant_and_linear() {
    let t: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
    let ones = vec![2.0; 11];
    assert!((time_norm(&t, &ones, 2.0) - 2.0).abs() < 1e-14);
    assert_eq!(time_norm(&t, &ones, f64::INFINITY), 2.0);
    assert!((time_norm(&t, &t, 1.0) - 0.5).abs() < 1e-14);
}

fn shell(g: &Grid, seed: u64, k: f64) -> SpectralField {
    random_field(g, 1, k, 1.5 * k, 0.0, &mut rng(seed))
}

#[test]
fn interpolation_ratios_are_bounded() {
    let g = cube(32);
    for seed in 0..10 {
        for f in [shell(&g, seed, 2.0), shell(&g, seed, 4.0), random_field(&g, 1, 1.0, 6.0, -1.5, &mut rng(seed))] {
            let r = bshs_ratio(&f, 0.5, 0.5, 0.5).unwrap().unwrap();
            assert!(r > 0.1 && r < 10.0, "{r}");
            let a = bshs_aniso_ratio(&f, 0.5, 0.5).unwrap().unwrap();
            assert!(a > 0.0 && a.is_finite());
            let i = injection_ratio(&f, 4.0).unwrap().unwrap();
            assert!(i > 0.0 && i < 10.0);
        }
    }
    assert!(bshs_ratio(&SpectralField::zeros(&g, 1), 0.5, 0.5, 0.5).unwrap().is_none());
    assert!(bshs_ratio(&shell(&g, 1, 2.0), 0.5, 0.0, 0.5).is_err());
}

#[test]
fn product_law_ratios() {
    let g3 = cube(16);
    let g2 = Grid::square(16, 2.0 * PI).unwrap();
    let u = random_field(&g3, 1, 1.0, 5.0, -1.0, &mut rng(1));
    let v = random_field(&g3, 1, 1.0, 5.0, -1.0, &mut rng(2));
    let r = product_law_ratio(&u, &v, 0.5, 0.5, ProductMode::Isotropic).unwrap().unwrap();
    assert!(r > 0.0 && r.is_finite());
    let w = random_field(&g2, 1, 1.0, 5.0, -1.0, &mut rng(3));
    let r = product_law_ratio(&w, &v, 0.5, 0.25, ProductMode::Planar3d).unwrap().unwrap();
    assert!(r > 0.0 && r.is_finite());
    assert!(matches!(product_law_ratio(&u, &v, 1.6, 0.5, ProductMode::Isotropic), Err(Error::Exponents(_))));
    assert!(matches!(product_law_ratio(&u, &v, 0.5, 0.5, ProductMode::Planar3d), Err(Error::GridMismatch(_))));
}

fn paraproduct_inputs() -> (SpectralField, SpectralField) {
    let g3 = cube(32);
    let g2 = Grid::square(32, 2.0 * PI).unwrap();
    let c = random_solenoidal(&g3, 1.0, 10.0, -1.0, &mut rng(11));
    let b = random_solenoidal(&g2, 1.0, 10.0, -1.0, &mut rng(12));
    (c, b)
}

#[test]
fn paraproduct_sums_to_the_product() {
    let (c, b) = paraproduct_inputs();
    let parts = paraproduct_2d3d(&c, &b, 4).unwrap();
    assert!(parts.closure_error() < 1e-10, "{}", parts.closure_error());
    assert!(matches!(paraproduct_2d3d(&c, &b, 1), Err(Error::SupportLemmaVoid(1))));
}

#[test]
fn paraproduct_supports() {
    let (c, b) = paraproduct_inputs();
    for q in 0..4 {
        let [lh, hl, rem] = paraproduct_block(&c, &b, 4, q).unwrap();
        assert!(annulus_leakage(&lh, q, 1.0 / 12.0, 10.0 / 3.0) <= 1e-10);
        assert!(annulus_leakage(&hl, q, 1.0 / 12.0, 10.0 / 3.0) <= 1e-10);
        assert!(annulus_leakage(&hl, q, 1.0 / 3.0, 11.0 / 4.0) <= 1e-10);
        assert!(ball_leakage(&rem, q, 46.0) <= 1e-10);
    }
    // with j0 = 1 the low frequencies of grad b~ reach down to 2^q/12
    let worst = (1..4)
        .map(|q| annulus_leakage(&paraproduct_block(&c, &b, 1, q).unwrap()[1], q, 1.0 / 3.0, 11.0 / 4.0))
        .fold(0.0, f64::max);
    assert!(worst > 1e-8, "{worst}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norms_are_homogeneous(seed in any::<u64>(), lambda in 0.1f64..10.0, p in 1.0f64..8.0) {
        let g = cube(16);
        let f = random_field(&g, 1, 1.0, 3.0, -1.0, &mut rng(seed));
        let fl = f.scale(lambda);
        let l = lebesgue_norm(&f, p);
        prop_assert!((lebesgue_norm(&fl, p) - lambda * l).abs() <= 1e-10 * lambda * l);
        let b = besov_norm(&f, 0.3, p, 2.0).unwrap().value;
        prop_assert!((besov_norm(&fl, 0.3, p, 2.0).unwrap().value - lambda * b).abs() <= 1e-10 * lambda * b);
    }

    #[test]
    fn lebesgue_triangle_and_nesting(seed in any::<u64>(), p in 1.0f64..8.0) {
        let g = cube(16);
        let f = random_field(&g, 1, 1.0, 3.0, -1.0, &mut rng(seed));
        let h = random_field(&g, 1, 1.0, 3.0, -1.0, &mut rng(seed ^ 0x5555));
        let sum = lebesgue_norm(&f.add(&h).unwrap(), p);
        prop_assert!(sum <= (lebesgue_norm(&f, p) + lebesgue_norm(&h, p)) * (1.0 + 1e-12));
        // besov index r: l^1 above l^2 above l^inf
        let b1 = besov_norm(&f, 0.0, p, 1.0).unwrap().value;
        let b2 = besov_norm(&f, 0.0, p, 2.0).unwrap().value;
        let bi = besov_norm(&f, 0.0, p, f64::INFINITY).unwrap().value;
        prop_assert!(bi <= b2 * (1.0 + 1e-12) && b2 <= b1 * (1.0 + 1e-12));
    }
}

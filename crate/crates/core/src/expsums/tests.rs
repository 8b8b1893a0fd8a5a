use super::*;
use crate::numeric::smooth::Plateau;
use crate::regvar::{RationalExponent, RegVarFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h(p: u64, q: u64) -> RegVarFunction {
    RegVarFunction::pure_power(RationalExponent::new(p, q).unwrap()).unwrap()
}

#[test]
fn g_at_zero_counts_the_floor_set() {
    let f = h(21, 20);
    let n = f.floor_set(1000).unwrap().elements().iter().filter(|&&x| x >= 1).count();
    assert!((g_sum(&f, 1000, 0.0).unwrap().re - n as f64).abs() < 1e-9);
}

#[test]
fn identity_sums_are_geometric() {
    let id = RegVarFunction::identity();
    assert!((f_sum(&id, 500, 0.0).unwrap().re - 500.0).abs() < 1e-10);
    for &t in &[0.1, 0.3333, -0.27, 0.5] {
        let l = 500i64;
        let closed = phase::e(t) * (phase::e_mul(l, t) - 1.0) / (phase::e(t) - 1.0);
        assert!((f_sum(&id, 500, t).unwrap() - closed).norm() < 1e-9);
    }
}

#[test]
fn conjugate_symmetry() {
    let f = h(11, 10);
    for &t in &[0.01, 0.2, 0.4999] {
        let a = f_sum(&f, 3000, t).unwrap();
        let b = f_sum(&f, 3000, -t).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1.0));
        let a = g_sum(&f, 3000, t).unwrap();
        let b = g_sum(&f, 3000, -t).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1.0));
    }
}

#[test]
fn grid_matches_direct_and_plancherel() {
    let f = h(21, 20);
    let lambda = 2000;
    let b = g_coefficients(&f, lambda).unwrap();
    let grid = TGrid::new(16 * lambda as usize).unwrap();
    let vals = grid_values(&b, &grid).unwrap();
    for j in [0usize, 17, 9999, grid.resolution] {
        let d = g_sum(&f, lambda, grid.node(j)).unwrap();
        assert!((vals[j] - d).norm() < 1e-8);
    }
    let count: f64 = b.iter().sum();
    assert!((grid_l2(&vals, grid.resolution) - count).abs() < 0.01 * count);
}

#[test]
fn identity_gap_is_boundary_only() {
    let id = RegVarFunction::identity();
    let spec = ExpSumBoundSpec::new(1.0, 0.1).unwrap();
    let g = fg_gap(&id, 1024, &default_grid(1024), &spec).unwrap();
    assert!(g.sup <= id.n0() as f64 + 1e-9);
}

#[test]
fn chi_admissibility() {
    let c = 21.0 / 20.0;
    let chi = ExpSumBoundSpec::default_chi(c);
    assert!((chi - 0.151904761904762).abs() < 1e-12);
    assert!(ExpSumBoundSpec::new(c, chi).is_ok());
    assert!(ExpSumBoundSpec::new(c, 0.2).is_err());
    assert!(ExpSumBoundSpec::new(c, -0.01).is_err());
    let s = ExpSumBoundSpec::new(1.2, 0.01).unwrap();
    assert!((s.kappa + 0.375).abs() < 1e-15);
}

#[test]
fn fg_gap_fixture() {
    let f = h(21, 20);
    let d = f_sum(&f, 4096, 1.0 / 3.0).unwrap() - g_sum(&f, 4096, 1.0 / 3.0).unwrap();
    assert!((d.norm() - FG_FIXTURE).abs() < 1e-9, "{}", d.norm());
}

const FG_FIXTURE: f64 = 69.80947602698353;

#[test]
fn trivial_u_and_v() {
    assert!((u_sum(100, 180, 0.0, 0.0, 1.5).value - 81.0).abs() < 1e-9);
    assert!((v_sum(100, 180, 1.0, 1.5).value - 81.0).abs() < 1e-12);
    let p = 1 << 12;
    let u = u_sum(p, 2 * p, 0.3, 0.0, 1.5);
    assert!(u.value <= 10.0 * ((p as f64).powf(0.75) * 0.55 + (p as f64).powf(0.25) * 1.83));
}

#[test]
fn pi_sum_at_zero_is_a_riemann_sum() {
    let g = Plateau::new(1.0, 2.0);
    let c = RationalExponent::new(21, 20).unwrap();
    let s = 5000.0;
    let v = pi_sum(&g, 0.0, s, 0.0, c);
    let scale = s.powf(20.0 / 21.0);
    // integral of the plateau bump is plateau + support by symmetry of the step
    let integral = 3.0;
    assert!((v.re - scale * integral).abs() < 4.0);
    let alt = pi_sum(&g, 0.0, s, 0.5, c);
    let total: f64 = (-(2.0 * scale) as i64..=(2.0 * scale) as i64).map(|n| g.eval(n as f64 / scale)).sum();
    assert!(alt.norm() <= total);
}

#[test]
fn vdc_quadratic_and_power_phases() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = VdcConfig::default();
    for _ in 0..20 {
        let alpha: f64 = rng.random_range(1e-4..0.5);
        let n = rng.random_range(10..3000);
        let r = vdc_check(&QuadraticPhase { alpha, beta: 0.0 }, 1, n, 2.0 * alpha, 1.0, &cfg).unwrap();
        assert!(r.pass, "{alpha} {n} {r:?}");
    }
    let p = 500i64;
    let ph = PowerPhase { m: 0.37, c: 1.5 };
    let eta = ph.second(2.0 * p as f64).abs();
    let r = ph.second(p as f64).abs() / eta;
    assert!(vdc_check(&ph, p, 2 * p, eta, r, &cfg).unwrap().pass);
}

#[test]
fn vdc_rejects_flat_phase() {
    let flat = FnPhase { f: |_k: i64| 0.0, f2: |_x: f64| 0.0 };
    assert!(matches!(
        vdc_check(&flat, 1, 100, 0.0, 1.0, &VdcConfig::default()),
        Err(crate::Error::Sandwich(_))
    ));
    assert!(vdc_check(&flat, 1, 100, 0.1, 1.0, &VdcConfig::default()).is_err());
}

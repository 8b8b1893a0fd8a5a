use super::*;
use crate::oracles;
use std::f64::consts::PI;

const CS: [f64; 4] = [21.0 / 20.0, 11.0 / 10.0, 1.5, 2.0];

#[test]
fn closed_form_mass() {
    assert!((surface_mass(2.0) - 4.0 * PI).abs() < 1e-12);
    assert!((surface_mass(1.0) - 4.0).abs() < 1e-12);
    let c = 21.0 / 20.0;
    let g = 20.0 / 21.0;
    let expected = 8.0 * oracles::gamma_hp_f64(g).powi(3) / (c * c * oracles::gamma_hp_f64(3.0 * g));
    assert!((surface_mass(c) - expected).abs() < 1e-12 * expected);
    assert!((ball_volume(2.0) - 4.0 * PI / 3.0).abs() < 1e-12);
}

#[test]
fn quadrature_reproduces_mass() {
    for c in CS {
        let est = surface_integral(c, QuadSpec::default(), |_| 1.0).unwrap();
        let m = surface_mass(c);
        assert!((est.value - m).abs() < 1e-9 * m, "c={c} {est:?}");
        assert!(est.converged);
    }
}

#[test]
fn odd_functions_vanish_and_symmetry_holds() {
    let q = SurfaceQuadrature::new(1.1, QuadSpec::default()).unwrap();
    assert!(q.integrate(|x| x[2]).abs() < 1e-13);
    let f = |x: [f64; 3]| (x[0] + 2.0 * x[1] * x[1] - 0.3 * x[2]).exp() * (1.0 + x[0] * x[2]);
    let base = q.integrate(f);
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for p in perms {
        for k in 0..8 {
            let sg = [1.0 - 2.0 * (k & 1) as f64, 1.0 - 2.0 * ((k >> 1) & 1) as f64, 1.0 - 2.0 * ((k >> 2) & 1) as f64];
            let v = q.integrate(|x| f([sg[0] * x[p[0]], sg[1] * x[p[1]], sg[2] * x[p[2]]]));
            assert!((v - base).abs() < 1e-10 * base.abs(), "{p:?} {k}: {}", v - base);
        }
    }
}

#[test]
fn polar_identity_on_gaussian() {
    for c in [2.0, 21.0 / 20.0] {
        let q = SurfaceQuadrature::new(c, QuadSpec { rho_panels: 4, s_panels: 4, ..QuadSpec::default() }).unwrap();
        let g = |x: [f64; 3]| (-PI * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp();
        let r = polar_check(g, 6.0, 12.0, &q).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-8);
        assert!(r.relerr < 1e-6, "{r:?}");
    }
}

#[test]
fn fourier_transform_of_round_sphere() {
    let q = SurfaceQuadrature::new(2.0, QuadSpec::for_frequency([5.0, 5.0, 5.0])).unwrap();
    assert!((fourier_mu([0.0; 3], &q).unwrap() - 4.0 * PI).abs() < 1e-10);
    for r in [1.0, 2.0, 5.0] {
        for d in random_directions(4, 3) {
            let v = fourier_mu(d.map(|x| x * r), &q).unwrap();
            assert!((v - oracles::classical_sphere_ft(r).value).abs() < 1e-8, "{r}: {v}");
        }
    }
    let coarse = SurfaceQuadrature::new(2.0, QuadSpec::default()).unwrap();
    assert!(fourier_mu([100.0, 0.0, 0.0], &coarse).is_err());
}

#[test]
fn gradient_matches_radial_derivative() {
    let r: f64 = 2.3;
    let g = fourier_grad(2.0, [0.0, 0.0, r]).unwrap();
    let tau = 2.0 * PI;
    let d = 2.0 * (tau * (tau * r).cos() * r - (tau * r).sin()) / (r * r);
    assert!((g[2] - d).abs() < 1e-5, "{} {d}", g[2]);
    assert!(g[0].abs() < 1e-6);
}

#[test]
fn incomplete_beta_table() {
    for g in [0.5, 20.0 / 21.0, 2.0 / 3.0] {
        let ib = IncBeta::new(g);
        for s in [1e-9, 0.01, 0.3, 0.5, 0.77, 0.999] {
            let v = ib.eval(s, 1.0 - s);
            let w = crate::numeric::special::beta_reg(g, g, s);
            assert!((v - w).abs() < 1e-13, "{g} {s} {v} {w}");
        }
    }
}

#[test]
fn archimedes_caps() {
    let s = CapSolver::new(2.0, [0.0, 0.0, 1.0]).unwrap();
    for a in [0.1, 0.5, 0.9] {
        assert!((s.nu(a) - (1.0 - a) / 2.0).abs() < 1e-10, "{a}: {}", s.nu(a));
    }
    let d = random_directions(1, 11)[0];
    let s = CapSolver::new(2.0, d).unwrap();
    assert!((s.nu(0.37) - 0.315).abs() < 1e-10);
    assert!((s.nu(-0.37) - 0.685).abs() < 1e-10);
}

#[test]
fn cap_limits_and_monotonicity() {
    for c in [21.0 / 20.0, 1.5] {
        for d in random_directions(3, 5) {
            let s = CapSolver::new(c, d).unwrap();
            let half = s.nu(1e-12);
            let mirrored = CapSolver::new(c, d.map(|x| -x)).unwrap().nu(1e-12);
            assert!((half + mirrored - 1.0).abs() < 1e-9);
            assert_eq!(s.nu(1.01), 0.0);
            assert_eq!(s.nu(s.a_max() + 1e-9), 0.0);
            let mut prev = 1.0;
            for i in 0..50 {
                let v = s.nu(i as f64 / 50.0);
                assert!(v <= prev + 1e-12);
                prev = v;
            }
        }
        let s = CapSolver::new(c, [0.0, 0.0, 1.0]).unwrap();
        assert!((s.nu(1e-13) - 0.5).abs() < 1e-9);
    }
}

#[test]
fn cap_matches_surface_quadrature() {
    let c = 21.0 / 20.0;
    let d = random_directions(2, 9)[1];
    let s = CapSolver::new(c, d).unwrap();
    let q = SurfaceQuadrature::new(c, QuadSpec { rho_panels: 64, s_panels: 64, ..QuadSpec::default() }).unwrap();
    let delta = 0.02;
    let a = 0.3;
    // smoothed indicator integrated directly on the surface
    let direct = q.integrate(|x| {
        let v = x[0] * d[0] + x[1] * d[1] + x[2] * d[2];
        crate::numeric::smooth::mollifier_cdf((v - a) / delta)
    }) / surface_mass(c);
    let via = smoothed_cap(|b| s.nu(b), a + delta, delta, true);
    assert!((direct - via).abs() < 1e-6, "{direct} {via}");
}

#[test]
fn smoothed_caps_sandwich() {
    let c = 21.0 / 20.0;
    let d = random_directions(1, 2)[0];
    let s = CapSolver::new(c, d).unwrap();
    let a = 0.25;
    let sharp = s.nu(a);
    for k in 3..8 {
        let delta = 0.5f64.powi(k);
        let lo = smoothed_cap(|b| s.nu(b), a, delta, false);
        let hi = smoothed_cap(|b| s.nu(b), a, delta, true);
        assert!(lo <= sharp && sharp <= hi);
        assert!(hi - lo <= 2.0 * delta.sqrt());
    }
}

#[test]
fn profile_interpolates() {
    let s = CapSolver::new(21.0 / 20.0, random_directions(1, 4)[0]).unwrap();
    let p = CapProfile::build(&s, 0.0, s.a_max(), 256, 8).unwrap();
    assert!(p.midpoint_error < 1e-5, "{}", p.midpoint_error);
}

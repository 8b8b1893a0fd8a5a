use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::counting::{sphere_counts, CountMethod, SphereLattice};
use crate::oracles;
use crate::regvar::RationalExponent;
use crate::surface::{fourier_mu, surface_mass, QuadSpec, SurfaceQuadrature};

fn exp2120() -> RationalExponent {
    RationalExponent::new(21, 20).unwrap()
}

fn psi_hat() -> Arc<PsiTransform> {
    static P: OnceLock<Arc<PsiTransform>> = OnceLock::new();
    P.get_or_init(|| Arc::new(PsiTransform::new(BumpConfig::new(1.05).unwrap().psi).unwrap())).clone()
}

#[test]
fn bumps_satisfy_constraints() {
    for c in [1.05, 1.5, 2.0] {
        BumpConfig::new(c).unwrap().verify(20_000).unwrap();
    }
    assert!(BumpConfig::new(1.0).is_err());
}

#[test]
fn psi_transform_table() {
    let p = psi_hat();
    assert!(p.tail_bound() < TAIL_TARGET);
    assert!(p.interp_error < 1e-8, "{}", p.interp_error);
    let b = BumpConfig::new(1.05).unwrap();
    // psi^(0) = int psi
    let gl = crate::numeric::gl::GaussLegendre::new(40);
    let mass = 2.0 * (b.psi.plateau + gl.integrate(b.psi.plateau, b.psi.support, |t| b.psi(t)));
    assert!((p.eval(0.0) - mass).abs() < 1e-12);
    assert_eq!(p.eval(p.t_max + 1.0), 0.0);
    assert_eq!(p.eval(-3.7), p.eval(3.7));
}

#[test]
fn partition_identity_on_window_and_box() {
    let p = psi_hat();
    let b = BumpConfig::new(1.05).unwrap();
    let split = ArcSplit::new(200, exp2120(), b, p.clone()).unwrap();
    assert!(split.partition_defect() <= 1e-6);
    let split = ArcSplit::new(50, exp2120(), b, p).unwrap();
    let f = kernel_field(&split, [-45, -45, -45], [45, 45, 45]).unwrap();
    assert!(f.partition_max <= 1e-6);
    let lat = SphereLattice::new(exp2120(), 1000).unwrap();
    let mut on = 0;
    let mut i = 0;
    for a in -45..=45i64 {
        for bb in -45..=45i64 {
            for d in -45..=45i64 {
                let member = lat.floor_of(a).unwrap() + lat.floor_of(bb).unwrap() + lat.floor_of(d).unwrap() == 50;
                assert_eq!(f.values[i].sigma, member as u8 as f64);
                on += member as u64;
                i += 1;
            }
        }
    }
    assert_eq!(on, lat.count(50));
}

#[test]
fn kernels_vanish_outside_window() {
    let split = ArcSplit::new(50, exp2120(), BumpConfig::new(1.05).unwrap(), psi_hat()).unwrap();
    let w = split.half_width();
    for x in [[w + 1, 0, 0], [0, -w - 5, 3], [w + 100, w + 100, w + 100]] {
        let v = split.values(x);
        assert_eq!((v.sigma, v.major, v.minor), (0.0, 0.0, 0.0));
    }
}

#[test]
fn field_dump_layout() {
    let split = ArcSplit::new(50, exp2120(), BumpConfig::new(1.05).unwrap(), psi_hat()).unwrap();
    let f = kernel_field(&split, [-1, -2, -3], [1, 2, 3]).unwrap();
    let mut buf = Vec::new();
    f.write_binary(KernelId::Major, 21, 20, &mut buf).unwrap();
    let header = 8 + 8 + 4 + 4 + 6 * 8 + 4;
    assert_eq!(buf.len(), header + 3 * 5 * 7 * 8);
    assert_eq!(&buf[..8], FIELD_MAGIC);
    assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()), 50);
    let last = f64::from_le_bytes(buf[buf.len() - 8..].try_into().unwrap());
    assert_eq!(last, split.values([1, 2, 3]).major);
}

#[test]
fn k_mass_is_stable() {
    let limit = |c: f64| surface_mass(c) / c * 2.0 * (std::f64::consts::PI / 10.0) / (std::f64::consts::PI / 10.0).sin();
    for c in [1.05, 2.0] {
        let big = k_mass(c, 1e8);
        assert!((big / limit(c) - 1.0).abs() < 1e-3, "{c} {big} {}", limit(c));
        for k in 5..=12 {
            let m = k_mass(c, (1u64 << k) as f64);
            assert!(m > 0.5 * limit(c) && m < 2.0 * limit(c));
        }
    }
}

#[test]
fn domination_ratio_reports_level() {
    let split = ArcSplit::new(64, exp2120(), BumpConfig::new(1.05).unwrap(), psi_hat()).unwrap();
    let counts = sphere_counts(exp2120(), 256, CountMethod::Enum).unwrap();
    let d = domination(&split, &counts.counts).unwrap();
    assert!(d.ratio_lower > 0.0 && d.ratio_lower <= d.ratio_upper);
    let short = &counts.counts[..100];
    assert!(domination(&split, short).is_err());
}

#[test]
fn omega_comparison_is_symmetric_at_zero_shift() {
    let o = omega_comparison(1.05, 1 << 12, 2000, 1);
    assert!(o.min_ratio <= 1.0 && o.max_ratio >= 1.0);
    assert!(o.constant() >= 1.0);
    assert_eq!(omega(1.05, 100.0, [0.0, 0.0, 100f64.powf(1.0 / 1.05)]), 1.0 / (1.0 + (100f64.powf(kappa(1.05)) * 0.0).powi(10)));
}

fn lattice() -> SphereLattice {
    SphereLattice::new(exp2120(), 300).unwrap()
}

#[test]
fn averaging_delta_and_ones() {
    let lat = lattice();
    let one = Complex64::new(1.0, 0.0);
    let delta: LatticeFn = [([0, 0, 0], one)].into_iter().collect();
    let m = discrete_average(&lat, &delta, 120).unwrap();
    let r = lat.count(120) as f64;
    assert_eq!(m.len() as f64, r);
    for (x, v) in &m {
        assert_eq!(lat.floor_of(x[0]).unwrap() + lat.floor_of(x[1]).unwrap() + lat.floor_of(x[2]).unwrap(), 120);
        assert_eq!(*v, one / r);
    }
    // ones on a box; the safe interior sees only ones
    let mut f = LatticeFn::new();
    for a in -150..=150 {
        for b in -1..=1 {
            for d in -1..=1 {
                f.insert([a, b, d], one);
            }
        }
    }
    let m = discrete_average(&lat, &f, 20).unwrap();
    let l1_in: f64 = f.values().map(|v| v.norm()).sum();
    let l1_out: f64 = m.values().map(|v| v.norm()).sum();
    assert!((l1_in - l1_out).abs() < 1e-9 * l1_in);
    assert!(m.values().all(|v| v.re >= 0.0));
    assert!(matches!(discrete_average(&lat, &delta, 301), Err(crate::Error::Horizon(_))));
}

#[test]
fn maximal_profile_and_lacunary() {
    let lat = SphereLattice::new(RationalExponent::new(2, 1).unwrap(), 64).unwrap();
    let delta: LatticeFn = [([0, 0, 0], Complex64::new(1.0, 0.0))].into_iter().collect();
    let p = maximal_profile(&lat, &delta, &[1, 2, 7, 9]).unwrap();
    assert_eq!(p.skipped, vec![7]);
    assert_eq!(p.values[&[1, 0, 0]], 1.0 / 6.0);
    assert_eq!(lacunary(&[1, 2, 3, 4, 6, 9, 13, 20], 1.5), vec![1, 2, 3, 6, 9, 20]);
}

#[test]
fn continuous_average_identities() {
    let spec = QuadSpec::default();
    let c = 1.05;
    let one = continuous_average(c, |_| Complex64::new(1.0, 0.0), [0.3, 0.1, -2.0], 1.7, spec).unwrap();
    assert!((one.re - surface_mass(c)).abs() < 1e-9 * surface_mass(c) && one.im.abs() < 1e-12);
    let xi = [0.7, -0.4, 0.25];
    let x = [0.2, 0.5, -0.1];
    let t = 1.3;
    let wave = |y: [f64; 3]| crate::numeric::phase::e(y[0] * xi[0] + y[1] * xi[1] + y[2] * xi[2]);
    let a = continuous_average(c, wave, x, t, spec).unwrap();
    let q = SurfaceQuadrature::new(c, spec).unwrap();
    let expect = wave(x) * fourier_mu([t * xi[0], t * xi[1], t * xi[2]], &q).unwrap();
    assert!((a - expect).norm() < 1e-10);
    let gauss = |y: [f64; 3]| Complex64::new((-(y[0] * y[0] + y[1] * y[1] + y[2] * y[2])).exp(), 0.0);
    let x = [0.3, -0.2, 0.6];
    let xn = (0.09f64 + 0.04 + 0.36).sqrt();
    let g = continuous_average(2.0, gauss, x, 0.8, spec).unwrap();
    assert!((g.re - oracles::gaussian_sphere_mean(xn, 0.8).value).abs() < 1e-5);
    assert!(continuous_average(c, gauss, x, 0.0, spec).is_err());
}

#[test]
fn torus_multipliers() {
    let lat = lattice();
    let lambdas: Vec<u64> = (1..=300).collect();
    let zero = torus_ergodic_run(&lat, golden_vector(), [0, 0, 0], &lambdas).unwrap();
    assert!(zero.rows.iter().all(|r| r.2 == 1.0));
    // m theta = (1/2, 0, 0): (1/r) sum (-1)^{n1}
    let half = torus_ergodic_run(&lat, [0.25, 0.3, 0.7], [2, 0, 0], &lambdas).unwrap();
    for &(l, r, v) in &half.rows {
        let pts = lat.points(l);
        let s: i64 = pts.iter().map(|p| if p[0] % 2 == 0 { 1 } else { -1 }).sum();
        assert_eq!(pts.len() as u64, r);
        assert!((v - s as f64 / r as f64).abs() < 1e-12);
    }
    let g = torus_ergodic_run(&lat, golden_vector(), [1, 1, 1], &lambdas).unwrap();
    assert!(g.rows.iter().all(|r| r.2.abs() <= 1.0 + 1e-12));
}

#[test]
fn variation_basics() {
    assert_eq!(variation_seminorm(&[2.0; 7], 2.0).unwrap(), 0.0);
    let mono: Vec<f64> = (0..10).map(|i| (i * i) as f64).collect();
    assert_eq!(variation_seminorm(&mono, 1.0).unwrap(), 81.0);
    assert!((variation_seminorm(&mono, 3.0).unwrap() - 81.0).abs() < 1e-12);
    assert!(variation_seminorm(&mono, 0.5).is_err());
    let z: Vec<Complex64> = mono.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    assert!((variation_seminorm_complex(&z, 2.0).unwrap() - 81.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn variation_matches_exhaustive_search(a in prop::collection::vec(-3.0f64..3.0, 0..11), r in 1.0f64..4.0) {
        let dp = variation_seminorm(&a, r).unwrap();
        let brute = oracles::brute_variation(&a, r).unwrap().value;
        prop_assert!((dp - brute).abs() <= 1e-12 * brute.max(1.0));
    }
}

#[test]
fn minor_profile_skips_empty_spheres() {
    let c = RationalExponent::new(2, 1).unwrap();
    let bumps = BumpConfig::new(2.0).unwrap();
    let ph = Arc::new(PsiTransform::new(bumps.psi).unwrap());
    let p = minor_arc_profile(c, &[4, 8], 1, Some(ph)).unwrap();
    assert!(p.skipped.contains(&7));
    assert!(p.rows.iter().all(|r| r.triangle_ok));
}

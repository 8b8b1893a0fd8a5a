use proptest::prelude::*;

use super::*;
use crate::counting::{sphere_counts, CountMethod, SphereLattice};
use crate::oracles;
use crate::regvar::RationalExponent;
use crate::surface::{random_directions, CapSolver};

fn lattice(p: u64, q: u64, horizon: u64) -> SphereLattice {
    SphereLattice::new(RationalExponent::new(p, q).unwrap(), horizon).unwrap()
}

#[test]
fn unit_vectors_for_euclidean_lambda_one() {
    let lat = lattice(2, 1, 8);
    let cloud = project(&lat, 1).unwrap();
    let mut pts = cloud.points().unwrap();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(pts.len(), 6);
    for p in &pts {
        assert_eq!(p.iter().map(|v| v.abs()).sum::<f64>(), 1.0);
    }
    assert_eq!(cloud.verify().unwrap(), 0.0);
    assert!(matches!(project(&lat, 0), Err(Error::Domain(_))));
    assert!(matches!(project(&lat, 7), Err(Error::EmptySphere(7))));
}

#[test]
fn cloud_matches_count_table() {
    let c = RationalExponent::new(21, 20).unwrap();
    let lat = SphereLattice::new(c, 100).unwrap();
    let table = sphere_counts(c, 100, CountMethod::Enum).unwrap();
    let cloud = project(&lat, 100).unwrap();
    assert_eq!(cloud.count(), table.get(100).unwrap());
    assert_eq!(cloud.points().unwrap().len() as u64, cloud.count());
    assert!(cloud.verify().unwrap() < 3.0 / 100.0);
}

#[test]
fn constant_and_odd_functions_are_exact() {
    let lat = lattice(21, 20, 500);
    let cloud = project(&lat, 500).unwrap();
    let w = weyl_sum(&cloud, &TestFn::Constant(1.0)).unwrap();
    assert_eq!((w.value, w.limit, w.gap), (1.0, 1.0, 0.0));
    let w = weyl_sum(&cloud, &TestFn::Monomial([1, 0, 0])).unwrap();
    assert_eq!((w.value, w.limit), (0.0, 0.0));
    // direct sum of an odd function cancels in pairs
    let s: f64 = cloud.points().unwrap().iter().map(|p| p[0] * p[1] * p[1]).sum();
    assert!(s.abs() < 1e-9);
}

#[test]
fn even_monomial_converges() {
    let lat = lattice(3, 2, 4000);
    let cloud = project(&lat, 4000).unwrap();
    let w = weyl_sum(&cloud, &TestFn::Monomial([2, 0, 0])).unwrap();
    let direct: f64 = cloud.points().unwrap().iter().map(|p| p[0] * p[0]).sum::<f64>() / cloud.count() as f64;
    assert!((w.value - direct).abs() < 1e-12);
    assert!(w.gap < 0.02, "{w:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn factorized_trig_sum_matches_direct(m in prop::array::uniform3(-4i64..5), lambda in 20u64..300) {
        let lat = lattice(11, 10, 300);
        let Ok(cloud) = project(&lat, lambda) else { return Ok(()) };
        let phi = TestFn::Trig(m);
        let v = cloud_average(&cloud, &phi);
        let direct: f64 = cloud.points().unwrap().iter().map(|p| phi.eval(*p)).sum::<f64>() / cloud.count() as f64;
        prop_assert!((v - direct).abs() < 1e-10);
    }
}

#[test]
fn euclidean_scan_against_archimedes() {
    let lat = lattice(2, 1, 1);
    let cloud = project(&lat, 1).unwrap();
    let scan = discrepancy_exact(&cloud, [0.0, 0.0, 1.0], |a: f64| (1.0 - a).max(0.0) / 2.0).unwrap();
    assert_eq!(scan.jumps, vec![1.0]);
    assert_eq!(scan.counts, vec![1]);
    assert_eq!(scan.strict, vec![0]);
    // D(a) = 1 - 3 (1 - a) on (0, 1]; the sup is the a -> 0+ limit
    assert_eq!(scan.result.d, 2.0);
    assert_eq!(scan.result.argmax, 0.0);
}

#[test]
fn full_scan_matches_brute_force() {
    let lat = lattice(21, 20, 10);
    let cloud = project(&lat, 10).unwrap();
    let xi = [0.0, 0.0, 1.0];
    let solver = CapSolver::new(1.05, xi).unwrap();
    let nu = |a: f64| solver.nu(a);
    let scan = discrepancy_exact(&cloud, xi, nu).unwrap();
    let brute = oracles::brute_discrepancy(21, 20, 10, xi, &nu).unwrap().value;
    assert_eq!(scan.jumps, brute.jumps);
    assert_eq!(scan.counts, brute.counts);
    assert_eq!(scan.result.r, brute.r);
    assert!((scan.result.d - brute.sup).abs() < 1e-9);
    assert!(scan.result.normalized <= 1.0);
}

#[test]
fn sup_is_attained_on_the_jump_grid() {
    let lat = lattice(21, 20, 300);
    let cloud = project(&lat, 300).unwrap();
    let xi = random_directions(1, 11)[0];
    let table = CapTable::new(1.05, xi, 128).unwrap();
    let scan = discrepancy_exact(&cloud, xi, |a| table.nu(a)).unwrap();
    let pts = cloud.points().unwrap();
    let r = cloud.count() as f64;
    for k in 0..10 {
        let a = 0.001 + 0.1 * k as f64 + 0.0371;
        let n = pts.iter().filter(|p| p[0] * xi[0] + p[1] * xi[1] + p[2] * xi[2] >= a).count() as f64;
        assert!((n - r * table.nu(a)).abs() <= scan.result.d + 1e-9);
    }
    // reflection: caps in direction -xi see the mirrored cloud
    let neg = [-xi[0], -xi[1], -xi[2]];
    let back = discrepancy_exact(&cloud, neg, |a| table.nu(a)).unwrap();
    assert!((back.result.d - scan.result.d).abs() < 1e-9);
    // cap sizes beyond the cloud see nothing
    assert_eq!(pts.iter().filter(|p| p[0] * xi[0] + p[1] * xi[1] + p[2] * xi[2] >= 2.0).count(), 0);
}

#[test]
fn histogram_brackets_the_exact_sup() {
    let lat = lattice(21, 20, 3000);
    let dirs = random_directions(3, 5);
    let tables: Vec<CapTable> = dirs.iter().map(|&xi| CapTable::new(1.05, xi, 128).unwrap()).collect();
    let mut axis = tables.clone();
    axis.push(CapTable::new(1.05, [0.0, 1.0, 0.0], 128).unwrap());
    for lambda in [1000, 3000] {
        let binned = discrepancy_binned(&lat, lambda, &axis, 4096).unwrap();
        let cloud = project(&lat, lambda).unwrap();
        assert_eq!(binned.r, cloud.count());
        for (t, b) in axis.iter().zip(&binned.rows) {
            let exact = discrepancy_exact(&cloud, t.xi, |a| t.nu(a)).unwrap().result.d;
            assert!(b.lower <= exact + 1e-6 && exact <= b.upper + 1e-6, "{lambda} {b:?} exact {exact}");
            assert!((b.upper - b.lower) / (binned.r as f64) < 0.01);
        }
    }
}

#[test]
fn smoothed_cap_gap_is_controlled_by_discrepancy() {
    let lat = lattice(21, 20, 2000);
    let cloud = project(&lat, 2000).unwrap();
    let xi = random_directions(1, 3)[0];
    let table = CapTable::new(1.05, xi, 128).unwrap();
    let d = discrepancy_exact(&cloud, xi, |a| table.nu(a)).unwrap().result;
    for upper in [true, false] {
        let phi = TestFn::SmoothCap { xi, a: 0.3, delta: 0.05, upper };
        let w = weyl_sum(&cloud, &phi).unwrap();
        assert!(w.gap <= d.normalized + table.profile.midpoint_error + 1e-9, "{w:?} vs {}", d.normalized);
    }
}

#[test]
fn decay_report_shape() {
    let c = RationalExponent::new(21, 20).unwrap();
    let rep = discrepancy_decay(c, &[64, 128, 256], 2, 9, DecayConfig { bins: 1024, profile_intervals: 64, exact_limit: 100_000 }).unwrap();
    assert_eq!(rep.rows.len(), 3);
    assert_eq!(rep.rows.iter().map(|r| r.exact).collect::<Vec<_>>(), vec![true, true, false]);
    for row in &rep.rows {
        assert!(row.max_normalized <= 1.0 && row.mean_d <= row.max_d);
    }
    assert!(rep.slope_normalized.is_finite());
    assert!((rep.target + (9.0 - 8.4) / 5.25).abs() < 1e-15);
}

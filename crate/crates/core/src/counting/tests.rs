use super::*;
use crate::oracles;
use crate::regvar::{RationalExponent, RegVarFunction};

fn ce(p: u64, q: u64) -> RationalExponent {
    RationalExponent::new(p, q).unwrap()
}

#[test]
fn stars_and_bars_for_identity() {
    let id = RegVarFunction::identity();
    for m in [CountMethod::Enum, CountMethod::fft(), CountMethod::Ntt] {
        let t = count_positive_range(&[&id, &id, &id], 300, m).unwrap();
        for l in 3..=300u64 {
            assert_eq!(t.counts[l as usize], (l - 1) * (l - 2) / 2);
        }
    }
}

#[test]
fn squares_small_examples() {
    let sq = RegVarFunction::pure_power(ce(2, 1)).unwrap();
    let t = count_positive_range(&[&sq, &sq, &sq], 50, CountMethod::Enum).unwrap();
    assert_eq!(t.counts[6], 3);
    let z = sphere_counts(ce(2, 1), 100, CountMethod::fft()).unwrap();
    assert_eq!(z.counts[4], 6);
    assert_eq!(z.counts[7], 0);
    assert_eq!(z.counts[0], 1);
    let z = sphere_counts(ce(21, 20), 10, CountMethod::fft()).unwrap();
    assert_eq!(z.counts[0], 1);
}

#[test]
fn methods_agree_with_brute_force() {
    for c in [ce(21, 20), ce(3, 2), ce(2, 1)] {
        let brute = oracles::brute_count_table(c.p(), c.q(), 400).unwrap().value;
        for m in [CountMethod::Enum, CountMethod::fft(), CountMethod::Ntt] {
            let t = sphere_counts(c, 400, m).unwrap();
            assert_eq!(t.counts, brute, "c={c} method={m:?}");
        }
    }
}

#[test]
fn single_lambda_membership_count() {
    let h = RegVarFunction::pure_power(ce(21, 20)).unwrap();
    let t = count_positive_range(&[&h, &h, &h], 200, CountMethod::Enum).unwrap();
    for l in [3u64, 10, 57, 200] {
        assert_eq!(count_positive_at([&h, &h, &h], l).unwrap(), t.counts[l as usize]);
    }
}

#[test]
fn mass_conservation_against_ball_enumeration() {
    let c = ce(11, 10);
    let horizon = 500;
    let z = sphere_counts(c, horizon, CountMethod::fft()).unwrap();
    let fl: Vec<u64> = (0..400).map(|x| oracles::naive_floor_pow(x, 11, 10)).collect();
    let mut ball: u128 = 0;
    for a in -399i64..=399 {
        for b in -399i64..=399 {
            let s = fl[a.unsigned_abs() as usize] + fl[b.unsigned_abs() as usize];
            if s > horizon {
                continue;
            }
            for d in -399i64..=399 {
                if s + fl[d.unsigned_abs() as usize] <= horizon {
                    ball += 1;
                }
            }
        }
    }
    assert_eq!(z.total(), ball);
}

#[test]
fn lattice_enumeration_matches_table() {
    let c = ce(21, 20);
    let lat = SphereLattice::new(c, 600).unwrap();
    let z = sphere_counts(c, 600, CountMethod::fft()).unwrap();
    for l in [0u64, 1, 2, 100, 599, 600] {
        assert_eq!(lat.count(l), z.counts[l as usize]);
    }
    let pts = lat.points(37);
    assert_eq!(pts.len() as u64, z.counts[37]);
}

#[test]
fn margin_violation_is_reported_without_fallback() {
    let a = vec![(1u64 << 24) + 1; 4096];
    let r = convolve_counts(&a, &a, 8191, false);
    assert!(matches!(r, Err(crate::Error::MarginViolation { .. })));
    let (v, m) = convolve_counts(&a, &a, 8191, true).unwrap();
    assert_eq!(m, Method::Ntt);
    assert_eq!(v[4095], 4096 * ((1u64 << 24) + 1).pow(2));
    assert_eq!(v[0], ((1u64 << 24) + 1).pow(2));
}

#[test]
fn main_terms() {
    assert!((main_term_c(1.0, 10.0) - 400.0).abs() < 1e-9);
    let id = RegVarFunction::identity();
    let spec = AsymptoticSpec::uniform(id.clone());
    assert!((spec.main_term_3(10.0).unwrap() - 50.0).abs() < 1e-12);
    assert_eq!(j2(&id, &id, 100).unwrap(), 99.0);
    assert_eq!(j3(&id, &id, &id, 100).unwrap(), 99.0 * 98.0 / 2.0);
    let g = 20.0 / 21.0;
    let expected = 8.0 * oracles::gamma_hp_f64(1.0 + g).powi(3) / oracles::gamma_hp_f64(3.0 * g)
        * 1e5f64.powf(3.0 * g - 1.0);
    assert!((main_term_c(21.0 / 20.0, 1e5) - expected).abs() <= 1e-12 * expected);
    assert!(AsymptoticSpec::uniform(RegVarFunction::pure_power(ce(21, 20)).unwrap()).condition_holds());
    assert!(!AsymptoticSpec::uniform(RegVarFunction::pure_power(ce(3, 2)).unwrap()).condition_holds());
}

#[test]
fn j2_is_symmetric_and_j3_matches_direct_sum() {
    let a = RegVarFunction::pure_power(ce(21, 20)).unwrap();
    let b = RegVarFunction::pure_power(ce(11, 10)).unwrap();
    let l = 777;
    assert!((j2(&a, &b, l).unwrap() - j2(&b, &a, l).unwrap()).abs() < 1e-10);
    let mut direct = 0.0;
    for n1 in 1..=l - 2 {
        for n2 in 1..=l - n1 - 1 {
            direct += a.phi_prime(n1 as f64) * b.phi_prime(n2 as f64) * a.phi_prime((l - n1 - n2) as f64);
        }
    }
    let v = j3(&a, &b, &a, l).unwrap();
    assert!((v - direct).abs() < 1e-9 * direct);
    // The FFT path for long tables agrees with the direct path.
    let big = j2_table(&a, &b, 5000).unwrap();
    assert!((big[5000] - j2(&a, &b, 5000).unwrap()).abs() < 1e-9 * big[5000]);
}

#[test]
fn beta_constant_matches_integral() {
    use crate::numeric::gl::{Grading, Rule1d};
    use crate::numeric::special::gamma;
    let (g1, g2) = (20.0 / 21.0, 10.0 / 11.0);
    let rule = Rule1d::graded(0.0, 1.0, Grading::new(16, 16));
    let v = rule.integrate(|x| x.powf(g1 - 1.0) * (1.0 - x).powf(g2 - 1.0));
    let k = gamma(g1) * gamma(g2) / gamma(g1 + g2);
    assert!((v - k).abs() < 1e-8 * k);
}

#[test]
fn first_full_radius_examples() {
    let id = RegVarFunction::identity();
    let t1 = count_positive_range(&[&id], 50, CountMethod::Enum).unwrap();
    let t2 = count_positive_range(&[&id, &id], 50, CountMethod::Enum).unwrap();
    let t3 = count_positive_range(&[&id, &id, &id], 50, CountMethod::Enum).unwrap();
    let z = decompose_signs(&t1, &t2, &t3).unwrap();
    assert_eq!(first_full_radius(&z), 0);
    let z2 = sphere_counts(ce(2, 1), 100, CountMethod::fft()).unwrap();
    assert_eq!(first_full_radius(&z2), 96);
}

#[test]
fn horizon_checks() {
    let h = RegVarFunction::pure_power(ce(21, 20)).unwrap();
    assert!(count_positive_range(&[&h, &h, &h], 2, CountMethod::Enum).is_err());
    assert!(sphere_counts(ce(21, 20), 0, CountMethod::fft()).is_err());
}

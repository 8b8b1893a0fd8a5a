//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints a verdict line whether it passes or not.
//!
//! `cargo test -p csphere-core --test acceptance -- 3 7` runs criteria 3 and 7.

use csphere_core::averages::{
    domination, golden_vector, k_mass, omega_comparison, torus_ergodic_run, variation_seminorm, ArcSplit,
    BumpConfig, PsiTransform,
};
use csphere_core::counting::{
    asymptotic_report, first_full_radius, CountTable, j2, j2_table, sphere_counts, AsymptoticSpec, CountMethod, SphereLattice,
};
use csphere_core::equidist::{discrepancy_decay, discrepancy_exact, project, weyl_sum, DecayConfig, TestFn};
use csphere_core::expsums::{fg_decay, vdc_check, ExpSumBoundSpec, Phase, PowerPhase, QuadraticPhase, VdcConfig};
use csphere_core::numeric::regress::loglog_slope;
use csphere_core::oracles;
use csphere_core::regvar::{RationalExponent, RegVarFunction};
use csphere_core::surface::{
    decay_profile, polar_check, random_directions, surface_integral, CapSolver, QuadSpec, SurfaceQuadrature,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn exp(p: u64, q: u64) -> RationalExponent {
    RationalExponent::new(p, q).unwrap()
}

const C_2120: f64 = 21.0 / 20.0;

fn exact_count_equivalence() -> Verdict {
    let horizon = 2000;
    let mut notes = Vec::new();
    let mut ok = true;
    for (p, q) in [(21, 20), (11, 10), (3, 2), (2, 1)] {
        let c = exp(p, q);
        let en = sphere_counts(c, horizon, CountMethod::Enum).unwrap();
        let ff = sphere_counts(c, horizon, CountMethod::Fft { fallback: true }).unwrap();
        let brute = oracles::brute_count_table(p as u32, q as u32, horizon).unwrap().value;
        let same = en.counts == brute && ff.counts == brute;
        ok &= same;
        notes.push(format!("{c}:{}", if same { "equal" } else { "DIFFER" }));
    }
    verdict(ok, notes.join(" "))
}

fn euclidean_sanity() -> Verdict {
    let horizon = 10_000u64;
    let table = sphere_counts(exp(2, 1), horizon, CountMethod::Fft { fallback: true }).unwrap();
    let brute = oracles::brute_count_table(2, 1, horizon).unwrap().value;
    let excluded = |mut n: u64| {
        if n == 0 {
            return false;
        }
        while n % 4 == 0 {
            n /= 4;
        }
        n % 8 == 7
    };
    let mut bad = Vec::new();
    for l in 1..=horizon {
        let r = table.counts[l as usize];
        if r != brute[l as usize] || (r == 0) != excluded(l) {
            bad.push(l);
        }
    }
    let powers: Vec<u64> = (0..=6).map(|m| table.counts[4usize.pow(m)]).collect();
    let ok = bad.is_empty() && powers.iter().all(|&r| r == 6);
    verdict(ok, format!("{} mismatches, r(4^m) for m<=6 = {powers:?}", bad.len()))
}

fn gamma_hp(x: f64) -> f64 {
    csphere_core::numeric::hp::to_f64(&oracles::gamma_hp(x, 256).unwrap().value)
}

fn sci(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ")
}

struct Asym {
    table: CountTable,
    verdict: Verdict,
}

fn asymptotics() -> Asym {
    let horizon = 100_000u64;
    let c = C_2120;
    let table = sphere_counts(exp(21, 20), horizon, CountMethod::Fft { fallback: true }).unwrap();
    let rep = asymptotic_report(&table, c).unwrap();
    let volume = (2.0 * gamma_hp(1.0 + 1.0 / c)).powi(3) / gamma_hp(1.0 + 3.0 / c) * (horizon as f64).powf(3.0 / c);
    let cum_err = (rep.cumulative as f64 - volume).abs() / volume;
    let high: Vec<_> = rep.windows.iter().filter(|w| w.lo >= 1 << 14).collect();
    let worst = high.iter().map(|w| w.deviation).fold(0.0, f64::max);
    let top: Vec<f64> = rep.windows[rep.windows.len() - 4..].iter().map(|w| w.deviation).collect();
    let monotone = top.windows(2).all(|w| w[1] <= w[0]);
    let ok = cum_err <= 0.02 && worst <= 0.10 && !high.is_empty() && monotone;
    let detail = format!(
        "cumulative relerr {cum_err:.3e} (<= 0.02), worst window deviation above 2^14 {worst:.3e} (<= 0.10), \
         top-4 deviations [{}] non-increasing: {monotone}",
        sci(&top)
    );
    Asym { table, verdict: verdict(ok, detail) }
}

fn nonemptiness(table: &CountTable) -> Verdict {
    let counts = &table.counts;
    let start = first_full_radius(table);
    let lat = SphereLattice::new(exp(21, 20), 100_000).unwrap();
    let empty: Vec<u64> = (start.max(1)..=100_000).filter(|&l| counts[l as usize] == 0).collect();
    // spot-check the table against direct enumeration
    let spot = (start.max(1)..=20_000).step_by(997).all(|l| lat.count(l) == counts[l as usize]);
    verdict(
        empty.is_empty() && spot,
        format!("lambda(c) lower bound {start}, empty spheres in [{start}, 1e5]: {}, spot recount ok: {spot}", empty.len()),
    )
}

fn j2_asymptotic() -> Verdict {
    let c = exp(21, 20);
    let h = RegVarFunction::pure_power(c).unwrap();
    let spec = AsymptoticSpec::uniform(h.clone());
    let table = j2_table(&h, &h, 1 << 20).unwrap();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 10..=20 {
        let l = 1u64 << k;
        xs.push(l as f64);
        ys.push((table[l as usize] / spec.main_term_2(l as f64).unwrap() - 1.0).abs());
    }
    let slope = loglog_slope(&xs, &ys);
    let bound = -c.gamma() + 0.05;
    let id = RegVarFunction::identity();
    let catalog = [10u64, 100, 1000, 10_000].iter().all(|&l| {
        let v = j2(&id, &id, l).unwrap();
        let main = AsymptoticSpec::uniform(id.clone()).main_term_2(l as f64).unwrap();
        v == (l - 1) as f64 && (v - main).abs() <= 1.0 + 1e-9
    });
    verdict(
        slope <= bound && catalog,
        format!("slope {slope:.4} (<= {bound:.4}), c=1 gives lambda-1 vs lambda: {catalog}"),
    )
}

fn fg_gap_decay() -> Verdict {
    let c = exp(21, 20);
    let h = RegVarFunction::pure_power(c).unwrap();
    let chi = (1.0 - 4.0 * (1.0 - c.gamma())) / 5.0 - 0.01;
    let spec = ExpSumBoundSpec::new(c.c(), chi).unwrap();
    let exps: Vec<u32> = (6..=16).collect();
    let d = fg_decay(&h, &exps, &spec, 4).unwrap();
    let bound = c.gamma() - chi + 0.03;
    verdict(
        d.slope <= bound && d.constant_spread <= 4.0,
        format!("slope {:.4} (<= {bound:.4}), fitted constant spread {:.3} (<= 4)", d.slope, d.constant_spread),
    )
}

fn surface_mass() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for c in [C_2120, 1.1, 1.5, 2.0] {
        let est = surface_integral(c, QuadSpec::default(), |_| 1.0).unwrap();
        let closed = 8.0 * gamma_hp(1.0 / c).powi(3) / (c * c * gamma_hp(3.0 / c));
        let rel = (est.value - closed).abs() / closed;
        ok &= rel <= 1e-6;
        if c == 2.0 {
            ok &= (closed - 4.0 * PI).abs() <= 1e-12 && (est.value - 4.0 * PI).abs() <= 1e-6 * 4.0 * PI;
        }
        notes.push(format!("c={c}: {rel:.1e}"));
    }
    let q = SurfaceQuadrature::new(C_2120, QuadSpec { rho_panels: 4, s_panels: 4, ..QuadSpec::default() }).unwrap();
    let g = |x: [f64; 3]| (-PI * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp();
    let polar = polar_check(g, 6.0, 12.0, &q).unwrap();
    ok &= polar.relerr <= 1e-4;
    verdict(ok, format!("mass relerr {}; polar relerr {:.1e} (<= 1e-4)", notes.join(", "), polar.relerr))
}

fn fourier_decay() -> Verdict {
    let radii: Vec<f64> = (1..=8).map(|k| (1u64 << k) as f64).collect();
    let rows = decay_profile(C_2120, &radii, 64, 2024, false).unwrap();
    let early = rows.iter().filter(|r| r.radius <= 8.0).map(|r| r.max_scaled_abs).fold(0.0, f64::max);
    let all = rows.iter().map(|r| r.max_scaled_abs).fold(0.0, f64::max);
    let shells: Vec<String> = rows.iter().map(|r| format!("{}:{:.3}", r.radius, r.max_scaled_abs)).collect();
    let q = SurfaceQuadrature::new(2.0, QuadSpec::for_frequency([5.0, 5.0, 5.0])).unwrap();
    let mut euclid = 0.0f64;
    for r in [1.0, 2.0, 5.0] {
        for d in random_directions(8, 5) {
            let v = csphere_core::surface::fourier_mu(d.map(|x| x * r), &q).unwrap();
            euclid = euclid.max((v - oracles::classical_sphere_ft(r).value).abs());
        }
    }
    verdict(
        all <= 2.0 * early && euclid <= 1e-5,
        format!(
            "max R|Fmu| {all:.3} vs 2 x {early:.3} over R<=8; shells [{}]; c=2 error {euclid:.1e} (<= 1e-5)",
            shells.join(" ")
        ),
    )
}

fn psi_hat(b: &BumpConfig) -> Arc<PsiTransform> {
    Arc::new(PsiTransform::new(b.psi).unwrap())
}

fn partition_identity() -> Verdict {
    let b = BumpConfig::new(C_2120).unwrap();
    let ph = psi_hat(&b);
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for l in [50u64, 200, 500] {
        let split = ArcSplit::new(l, exp(21, 20), b, ph.clone()).unwrap();
        let d = split.partition_defect();
        worst = worst.max(d);
        notes.push(format!("{l}:{d:.1e}"));
    }
    verdict(worst <= 1e-6, format!("max defect {} (<= 1e-6)", notes.join(" ")))
}

fn kernel_comparisons() -> Verdict {
    let b = BumpConfig::new(C_2120).unwrap();
    let ph = psi_hat(&b);
    let counts = sphere_counts(exp(21, 20), 4 << 12, CountMethod::Fft { fallback: true }).unwrap().counts;
    let (mut dom, mut mass_ok, mut omega) = (0.0f64, true, 0.0f64);
    let mut rows = Vec::new();
    for k in 5..=12 {
        let l = 1u64 << k;
        let split = ArcSplit::new(l, exp(21, 20), b, ph.clone()).unwrap();
        let d = domination(&split, &counts).unwrap();
        let m = k_mass(C_2120, l as f64);
        let o = omega_comparison(C_2120, l, 100_000, 7).constant();
        dom = dom.max(d.ratio_upper);
        mass_ok &= (1.0 / 20.0..=20.0).contains(&m);
        omega = omega.max(o);
        rows.push(format!("{l}: C={:.2e} mass={m:.3} omega={o:.1}", d.ratio_upper));
    }
    verdict(
        dom <= 100.0 && mass_ok && omega <= 50.0,
        format!(
            "domination C {dom:.3e} (<= 100), mass in [1/20, 20]: {mass_ok}, omega ratio {omega:.1} (<= 50); {}",
            rows.join("; ")
        ),
    )
}

fn discrepancy() -> Verdict {
    let c = exp(21, 20);
    let lambdas: Vec<u64> = (7..=17).map(|k| 1u64 << k).collect();
    let rep = discrepancy_decay(c, &lambdas, 16, 2024, DecayConfig::default()).unwrap();
    let means: Vec<String> = rep.rows.iter().map(|r| format!("{}:{:.2e}", r.lambda, r.mean_normalized)).collect();
    let lat = SphereLattice::new(c, 10).unwrap();
    let cloud = project(&lat, 10).unwrap();
    let xi = [0.0, 0.0, 1.0];
    let solver = CapSolver::new(C_2120, xi).unwrap();
    let nu = |a: f64| solver.nu(a);
    let scan = discrepancy_exact(&cloud, xi, nu).unwrap();
    let brute = oracles::brute_discrepancy(21, 20, 10, xi, &nu).unwrap().value;
    let small = scan.jumps == brute.jumps && scan.counts == brute.counts && scan.result.r == brute.r;
    verdict(
        rep.slope_normalized <= -0.03 && small && rep.skipped.is_empty(),
        format!(
            "slope of mean D/r {:.4} (<= -0.03) [{}]; lambda=10 scan equals brute force: {small}",
            rep.slope_normalized,
            means.join(" ")
        ),
    )
}

fn equidistribution() -> Verdict {
    let c = exp(21, 20);
    let lat = SphereLattice::new(c, 100_000).unwrap();
    let trig = TestFn::Trig([1, 2, 3]);
    let gap = |l: u64| weyl_sum(&project(&lat, l).unwrap(), &trig).unwrap().gap;
    let ones = [1000u64, 10_000, 100_000]
        .iter()
        .map(|&l| weyl_sum(&project(&lat, l).unwrap(), &TestFn::Constant(1.0)).unwrap().gap)
        .fold(0.0f64, f64::max);
    let decades: Vec<f64> = [1000u64, 10_000, 100_000].iter().map(|&l| gap(l)).collect();
    let dy: Vec<u64> = (10..=16).map(|k| 1u64 << k).collect();
    let dg: Vec<f64> = dy.iter().map(|&l| gap(l)).collect();
    let slope = loglog_slope(&dy.iter().map(|&l| l as f64).collect::<Vec<_>>(), &dg);
    let decreasing = decades.windows(2).all(|w| w[1] < w[0]);
    verdict(
        ones == 0.0 && decades[2] <= 0.05 && decreasing && slope < 0.0,
        format!(
            "constant gap {ones:e} (== 0); trig gaps at 1e3,1e4,1e5 [{}] (last <= 0.05, decreasing: {decreasing}); \
             dyadic slope {slope:.3} (< 0)",
            sci(&decades)
        ),
    )
}

fn ergodic_multiplier() -> Verdict {
    let lat = SphereLattice::new(exp(21, 20), 20_000).unwrap();
    let theta = golden_vector();
    let zero = torus_ergodic_run(&lat, [0.5, 0.25, 0.125], [0, 0, 0], &[10, 100, 1000, 10_000]).unwrap();
    let exact = zero.rows.iter().all(|r| r.2 == 1.0);
    let at = torus_ergodic_run(&lat, theta, [1, 1, 1], &[10_000]).unwrap().rows[0].2.abs();
    let dy: Vec<u64> = (10..=14).map(|k| 1u64 << k).collect();
    let run = torus_ergodic_run(&lat, theta, [1, 1, 1], &dy).unwrap();
    let xs: Vec<f64> = run.rows.iter().map(|r| r.0 as f64).collect();
    let ys: Vec<f64> = run.rows.iter().map(|r| r.2.abs()).collect();
    let slope = loglog_slope(&xs, &ys);
    verdict(
        exact && at <= 0.1 && slope < 0.0 && run.skipped.is_empty(),
        format!("m.theta=0 gives 1 exactly: {exact}; |multiplier| at 1e4 {at:.2e} (<= 0.1); dyadic slope {slope:.3} (< 0)"),
    )
}

fn van_der_corput() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let cfg = VdcConfig { c0: 10.0, ..VdcConfig::default() };
    let mut fails = 0;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let rep = if i % 2 == 0 {
            let alpha: f64 = rng.random_range(1e-5..0.5);
            let beta: f64 = rng.random();
            let lo: i64 = rng.random_range(-5000..5000);
            let len: i64 = rng.random_range(1..5000);
            vdc_check(&QuadraticPhase { alpha, beta }, lo, lo + len, 2.0 * alpha, 1.0, &cfg)
        } else {
            let c: f64 = rng.random_range(1.05..3.0);
            let m: f64 = rng.random_range(1e-3..10.0);
            let lo: i64 = rng.random_range(1..5000);
            let hi: i64 = rng.random_range(lo + 1..=(2 * lo).clamp(lo + 1, 10_000));
            let ph = PowerPhase { m, c };
            let (a, b) = (ph.second(lo as f64).abs(), ph.second(hi as f64).abs());
            let eta = a.min(b);
            vdc_check(&ph, lo, hi, eta, a.max(b) / eta, &cfg)
        }
        .unwrap();
        worst = worst.max(rep.lhs / rep.rhs);
        fails += usize::from(!rep.pass);
    }
    verdict(fails == 0, format!("{fails} of 100 phases violate the bound, worst lhs/rhs {worst:.3}"))
}

fn variation_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=10);
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = if rng.random_bool(0.25) { rng.random_range(1..=4) as f64 } else { rng.random_range(1.0..6.0) };
        let dp = variation_seminorm(&a, r).unwrap();
        let brute = oracles::brute_variation(&a, r).unwrap().value;
        worst = worst.max((dp - brute).abs() / brute.max(1e-300));
    }
    verdict(worst <= 1e-12, format!("max relative difference {worst:.1e} (<= 1e-12) over 200 sequences"))
}

type Criterion = (u32, &'static str, Duration, fn(&mut Option<CountTable>) -> Verdict);

fn main() {
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let list: Vec<Criterion> = vec![
        (1, "exact-count equivalence", Duration::from_secs(120), |_| exact_count_equivalence()),
        (2, "euclidean sanity", Duration::from_secs(60), |_| euclidean_sanity()),
        (3, "cumulative and windowed asymptotics", Duration::from_secs(300), |store| {
            let a = asymptotics();
            *store = Some(a.table);
            a.verdict
        }),
        (4, "nonemptiness above lambda(c)", Duration::from_secs(300), |store| {
            let table = store.get_or_insert_with(|| sphere_counts(exp(21, 20), 100_000, CountMethod::Fft { fallback: true }).unwrap());
            nonemptiness(table)
        }),
        (5, "two-term convolution asymptotic", Duration::from_secs(120), |_| j2_asymptotic()),
        (6, "F - G gap decay", Duration::from_secs(300), |_| fg_gap_decay()),
        (7, "surface mass and polar identity", Duration::from_secs(60), |_| surface_mass()),
        (8, "fourier decay of the surface measure", Duration::from_secs(600), |_| fourier_decay()),
        (9, "major/minor partition identity", Duration::from_secs(180), |_| partition_identity()),
        (10, "kernel comparisons", Duration::from_secs(180), |_| kernel_comparisons()),
        (11, "cap discrepancy decay", Duration::from_secs(600), |_| discrepancy()),
        (12, "weyl sums", Duration::from_secs(600), |_| equidistribution()),
        (13, "torus ergodic multiplier", Duration::from_secs(120), |_| ergodic_multiplier()),
        (14, "van der corput bound", Duration::from_secs(60), |_| van_der_corput()),
        (15, "variation seminorm oracle", Duration::from_secs(60), |_| variation_oracle()),
    ];
    let mut store = None;
    let mut failed = Vec::new();
    for (id, name, budget, run) in list {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let v = run(&mut store);
        let el = t.elapsed();
        let timely = el <= budget;
        let pass = v.pass && timely;
        println!(
            "criterion {id:>2} {} {name}: {} [{:.1}s, budget {}s{}]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            el.as_secs_f64(),
            budget.as_secs(),
            if timely { "" } else { ", over budget" }
        );
        if !pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

use crate::args::{ExpsumArgs, PhaseKind, VdcArgs};
use crate::ctx::{f, function, rational_class, usage, Ctx, Outcome};
use csphere_core::expsums::{
    default_grid, f_coefficients, fg_gap, g_coefficients, grid_l2, grid_values, vdc_check, ExpSumBoundSpec, FgGap,
    Phase, PowerPhase, QuadraticPhase, TGrid, VdcConfig, VdcReport,
};
use csphere_core::numeric::regress::loglog_slope;
use csphere_core::regvar::RegVarFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn gap_row(g: &FgGap) -> Vec<String> {
    vec![
        g.lambda.to_string(),
        f(g.sup),
        f(g.argmax),
        f(g.bound),
        f(g.fitted),
        f(g.lipschitz_slack),
        g.resolution.to_string(),
    ]
}

const GAP_HEADER: [&str; 7] = ["lambda", "sup", "argmax", "bound", "fitted", "lipschitz_slack", "resolution"];

pub fn expsum(a: &ExpsumArgs, ctx: &mut Ctx) -> Outcome<String> {
    let h: RegVarFunction = match (&a.fun, &a.c) {
        (Some(s), _) => function(s)?,
        (None, Some(c)) => RegVarFunction::pure_power(rational_class(c)?)?,
        (None, None) => return usage("--fn or --c is required"),
    };
    let c = h.exponent().c();
    let chi = a.chi.unwrap_or_else(|| ExpSumBoundSpec::default_chi(c));
    let spec = ExpSumBoundSpec::new(c, chi)?;
    ctx.derive("function", h.descriptor());
    ctx.derive("chi", chi);
    ctx.derive("kappa", spec.kappa);
    let grid_for = |lambda: u64, res: Option<usize>| -> TGrid {
        let g = match res {
            Some(r) => TGrid { resolution: r, minor_cutoff: None },
            None => default_grid(lambda),
        };
        if a.minor {
            g.minor(spec.minor_cutoff(lambda as f64))
        } else {
            g
        }
    };
    if let Some(lambda) = a.lambda {
        let grid = grid_for(lambda, a.resolution);
        ctx.derive("resolution", grid.resolution);
        let gap = fg_gap(&h, lambda, &grid, &spec)?;
        let fa = f_coefficients(&h, lambda)?;
        let gb = g_coefficients(&h, lambda)?;
        let d: Vec<f64> = fa.iter().zip(&gb).map(|(x, y)| x - y).collect();
        let vals = grid_values(&d, &grid)?;
        ctx.csv(
            "expsum.csv",
            &["t", "re", "im", "abs"],
            vals.iter()
                .enumerate()
                .filter(|(j, _)| grid.keeps(grid.node(*j)))
                .map(|(j, v)| vec![f(grid.node(j)), f(v.re), f(v.im), f(v.norm())]),
        )?;
        let summary = json!({
            "lambda": lambda, "sup": gap.sup, "argmax": gap.argmax, "bound": gap.bound,
            "fitted": gap.fitted, "lipschitz_slack": gap.lipschitz_slack,
        });
        ctx.json("expsum.json", &summary)?;
        if ctx.check {
            let l2 = grid_l2(&vals, grid.resolution);
            let direct: f64 = d.iter().map(|x| x * x).sum();
            ctx.expect((l2 - direct).abs() <= 1e-9 * direct.max(1.0), format!("Plancherel defect {l2} vs {direct}"));
            ctx.expect(gap.lipschitz_slack.is_finite(), "non-finite Lipschitz slack");
        }
        return Ok(format!(
            "expsum: lambda {lambda} sup |F-G| {:.6e} at t = {:.6} fitted constant {:.4}",
            gap.sup, gap.argmax, gap.fitted
        ));
    }
    let (Some(k0), Some(k1)) = (a.kmin, a.kmax) else {
        return usage("give --lambda or --kmin/--kmax");
    };
    if k1 < k0 || k1 > 30 {
        return usage("need kmin <= kmax <= 30");
    }
    let mut rows = Vec::new();
    for k in k0..=k1 {
        let lambda = 1u64 << k;
        if lambda < h.n0() {
            continue;
        }
        rows.push(fg_gap(&h, lambda, &grid_for(lambda, None), &spec)?);
    }
    if rows.len() < 2 {
        return usage("fewer than two usable lambda values in the range");
    }
    let slope = loglog_slope(
        &rows.iter().map(|r| r.lambda as f64).collect::<Vec<_>>(),
        &rows.iter().map(|r| r.sup).collect::<Vec<_>>(),
    );
    let tail = &rows[rows.len().saturating_sub(a.window.max(1))..];
    let hi = tail.iter().map(|r| r.fitted).fold(0.0, f64::max);
    let lo = tail.iter().map(|r| r.fitted).fold(f64::INFINITY, f64::min);
    let target = 1.0 / c - chi;
    ctx.csv("expsum_decay.csv", &GAP_HEADER, rows.iter().map(gap_row))?;
    let summary = json!({ "slope": slope, "target_slope": target, "constant_spread": hi / lo });
    ctx.json("expsum_decay.json", &summary)?;
    ctx.derive("summary", &summary);
    if ctx.check {
        ctx.expect(rows.iter().all(|r| r.sup.is_finite() && r.bound > 0.0), "non-finite gap");
    }
    Ok(format!("expsum: slope {slope:.4} (target {target:.4}) fitted constant spread {:.3}", hi / lo))
}

struct VdcCase {
    kind: &'static str,
    p1: f64,
    p2: f64,
    lo: i64,
    hi: i64,
    eta: f64,
    r: f64,
    report: VdcReport,
}

fn run_power(m: f64, power: f64, lo: i64, hi: i64, eta: Option<f64>, r: Option<f64>, cfg: &VdcConfig) -> Outcome<VdcCase> {
    if lo < 1 {
        return usage("power phases need lo >= 1");
    }
    let ph = PowerPhase { m, c: power };
    let (s0, s1) = (ph.second(lo as f64).abs(), ph.second(hi as f64).abs());
    let eta = eta.unwrap_or(s0.min(s1));
    let r = r.unwrap_or(s0.max(s1) / eta);
    let report = vdc_check(&ph, lo, hi, eta, r, cfg)?;
    Ok(VdcCase { kind: "power", p1: m, p2: power, lo, hi, eta, r, report })
}

fn run_quadratic(alpha: f64, beta: f64, lo: i64, hi: i64, eta: Option<f64>, r: Option<f64>, cfg: &VdcConfig) -> Outcome<VdcCase> {
    let eta = eta.unwrap_or(2.0 * alpha.abs());
    let r = r.unwrap_or(1.0);
    let report = vdc_check(&QuadraticPhase { alpha, beta }, lo, hi, eta, r, cfg)?;
    Ok(VdcCase { kind: "quadratic", p1: alpha, p2: beta, lo, hi, eta, r, report })
}

pub fn vdc(a: &VdcArgs, ctx: &mut Ctx) -> Outcome<String> {
    let cfg = VdcConfig { c0: a.c0, ..VdcConfig::default() };
    let mut cases = Vec::new();
    if let Some(n) = a.random {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        for i in 0..n {
            if i % 2 == 0 {
                let alpha: f64 = rng.random_range(1e-5..0.5);
                let beta: f64 = rng.random();
                let lo: i64 = rng.random_range(-5000..5000);
                let len: i64 = rng.random_range(1..5000);
                cases.push(run_quadratic(alpha, beta, lo, lo + len, None, None, &cfg)?);
            } else {
                let power: f64 = rng.random_range(1.05..3.0);
                let m: f64 = rng.random_range(1e-3..10.0);
                let lo: i64 = rng.random_range(1..5000);
                let hi: i64 = rng.random_range(lo + 1..=(2 * lo).clamp(lo + 1, 10_000));
                cases.push(run_power(m, power, lo, hi, None, None, &cfg)?);
            }
        }
    } else {
        let (Some(lo), Some(hi)) = (a.lo, a.hi) else { return usage("--lo and --hi are required") };
        match a.phase {
            Some(PhaseKind::Quadratic) => {
                let Some(alpha) = a.alpha else { return usage("--alpha is required") };
                cases.push(run_quadratic(alpha, a.beta, lo, hi, a.eta, a.r, &cfg)?);
            }
            Some(PhaseKind::Power) => {
                let (Some(m), Some(p)) = (a.m, a.power) else { return usage("--m and --power are required") };
                cases.push(run_power(m, p, lo, hi, a.eta, a.r, &cfg)?);
            }
            None => return usage("--phase or --random is required"),
        }
    }
    ctx.csv(
        "vdc.csv",
        &["kind", "p1", "p2", "lo", "hi", "eta", "r", "lhs", "rhs", "pass"],
        cases.iter().map(|c| {
            vec![
                c.kind.to_string(),
                f(c.p1),
                f(c.p2),
                c.lo.to_string(),
                c.hi.to_string(),
                f(c.eta),
                f(c.r),
                f(c.report.lhs),
                f(c.report.rhs),
                c.report.pass.to_string(),
            ]
        }),
    )?;
    let fails = cases.iter().filter(|c| !c.report.pass).count();
    let worst = cases.iter().map(|c| c.report.lhs / c.report.rhs).fold(0.0, f64::max);
    if ctx.check {
        ctx.expect(fails == 0, format!("{fails} phases violate the bound"));
    }
    Ok(format!("vdc: {} phases, {fails} violations, worst lhs/rhs {worst:.4}", cases.len()))
}

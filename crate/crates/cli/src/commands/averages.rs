use crate::args::{AverageArgs, ErgodicArgs, KernelArg, KernelsArgs, MinorArgs, VariationArgs};
use crate::ctx::{f, rational_class, triple, usage, Ctx, Failure, Outcome};
use csphere_core::averages::{
    discrete_average, domination, golden_vector, k_mass, kernel_field, kernel_norms, lacunary, maximal_profile,
    minor_arc_profile, omega_comparison, torus_ergodic_run, variation_seminorm, variation_seminorm_complex, ArcSplit,
    BumpConfig, KernelId, LatticeFn, PsiTransform,
};
use csphere_core::counting::{sphere_counts, CountMethod, SphereLattice};
use csphere_core::oracles;
use num_complex::Complex64;
use serde_json::json;
use std::sync::Arc;

fn opt(v: Option<f64>) -> String {
    v.map(f).unwrap_or_default()
}

fn kernel_id(k: KernelArg) -> KernelId {
    match k {
        KernelArg::Sigma => KernelId::Sigma,
        KernelArg::Major => KernelId::Major,
        KernelArg::Minor => KernelId::Minor,
        KernelArg::Omega => KernelId::Omega,
        KernelArg::K => KernelId::K,
    }
}

pub fn kernels(a: &KernelsArgs, ctx: &mut Ctx) -> Outcome<String> {
    let c = rational_class(&a.c)?;
    let cf = c.c();
    if c.is_one() {
        return usage("kernels need c > 1");
    }
    let bumps = BumpConfig::new(cf)?;
    let psi_hat = Arc::new(PsiTransform::new(bumps.psi)?);
    ctx.derive("c", c.to_string());
    ctx.derive("bumps", bumps);
    ctx.derive("psi_transform", json!({ "t_max": psi_hat.t_max, "step": psi_hat.step, "tail": psi_hat.tail_bound() }));
    if a.lambda.iter().any(|&l| l < 1) {
        return usage("lambda values must be positive");
    }
    let lmax = *a.lambda.iter().max().unwrap();
    let counts = if a.domination {
        Some(sphere_counts(c, 4 * lmax, CountMethod::fft())?.counts)
    } else {
        None
    };
    let ids: Vec<KernelId> = if a.kernel.is_empty() {
        KernelId::ALL.to_vec()
    } else {
        a.kernel.iter().map(|&k| kernel_id(k)).collect()
    };
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for &l in &a.lambda {
        let split = ArcSplit::new(l, c, bumps, psi_hat.clone())?;
        let defect = split.partition_defect();
        worst = worst.max(defect);
        let norms = kernel_norms(&split);
        let dom = counts.as_ref().map(|cs| domination(&split, cs)).transpose()?;
        let om = (a.omega_samples > 0).then(|| omega_comparison(cf, l, a.omega_samples, a.seed).constant());
        rows.push(vec![
            l.to_string(),
            f(split.kappa),
            f(defect),
            f(k_mass(cf, l as f64)),
            f(norms.sigma),
            f(norms.major),
            f(norms.minor),
            opt(dom.as_ref().map(|d| d.ratio_lower)),
            opt(dom.as_ref().map(|d| d.ratio_upper)),
            opt(om),
        ]);
        if let Some(b) = &a.field_box {
            if b.len() != 6 {
                return usage("--box needs six integers x0,y0,z0,x1,y1,z1");
            }
            let field = kernel_field(&split, [b[0], b[1], b[2]], [b[3], b[4], b[5]])?;
            if ctx.check {
                ctx.expect(field.partition_max <= 1e-6, format!("partition defect {:e} on the box", field.partition_max));
            }
            for &id in &ids {
                let mut buf = Vec::new();
                field.write_binary(id, c.p(), c.q(), &mut buf)?;
                ctx.binary(&format!("kernel_{}_{l}.bin", id.name()), &buf)?;
            }
        }
        if ctx.check {
            ctx.expect(defect <= 1e-6, format!("partition defect {defect:e} at lambda {l}"));
        }
    }
    ctx.csv(
        "kernels.csv",
        &[
            "lambda", "kappa", "partition_defect", "k_mass", "norm_sigma", "norm_major", "norm_minor",
            "domination_lower", "domination_upper", "omega_constant",
        ],
        rows,
    )?;
    Ok(format!("kernels: c {c} {} lambdas, max partition defect {worst:.3e}", a.lambda.len()))
}

fn parse_point(s: &str) -> Outcome<[i64; 3]> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad point {s:?}"))))
        .collect::<Outcome<_>>()?;
    triple(&v, "--point")
}

pub fn average(a: &AverageArgs, ctx: &mut Ctx) -> Outcome<String> {
    let c = crate::ctx::rational(&a.c)?;
    let mut fun = LatticeFn::new();
    for p in &a.point {
        *fun.entry(parse_point(p)?).or_default() += Complex64::new(1.0, 0.0);
    }
    let mut lambdas = a.lambda.clone();
    lambdas.sort_unstable();
    lambdas.dedup();
    if let Some(r) = a.lacunary {
        if !(r > 1.0) {
            return usage("--lacunary ratio must exceed 1");
        }
        lambdas = lacunary(&lambdas, r);
    }
    let lat = SphereLattice::new(c, *lambdas.last().unwrap())?;
    let prof = maximal_profile(&lat, &fun, &lambdas)?;
    ctx.derive("lambdas", &prof.lambdas);
    ctx.derive("skipped", &prof.skipped);
    ctx.csv(
        "average.csv",
        &["x1", "x2", "x3", "maximal"],
        prof.values.iter().map(|(x, v)| vec![x[0].to_string(), x[1].to_string(), x[2].to_string(), f(*v)]),
    )?;
    if ctx.check {
        let mass: f64 = fun.values().map(|v| v.re).sum();
        for &l in &prof.lambdas {
            let m = discrete_average(&lat, &fun, l)?;
            let total: f64 = m.values().map(|v| v.re).sum();
            ctx.expect((total - mass).abs() <= 1e-9 * mass.max(1.0), format!("l1 mass not preserved at {l}"));
            ctx.expect(m.values().all(|v| v.re >= 0.0 && v.im == 0.0), format!("negative average at {l}"));
        }
    }
    let peak = prof.values.values().copied().fold(0.0, f64::max);
    Ok(format!(
        "average: c {c} {} lambdas ({} skipped), support {}, max {peak:.6e}",
        prof.lambdas.len(),
        prof.skipped.len(),
        prof.values.len()
    ))
}

pub fn ergodic(a: &ErgodicArgs, ctx: &mut Ctx) -> Outcome<String> {
    let c = crate::ctx::rational(&a.c)?;
    let theta = if a.theta == "golden" {
        golden_vector()
    } else {
        let v: Vec<f64> = a
            .theta
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("bad theta {:?}", a.theta))))
            .collect::<Outcome<_>>()?;
        triple(&v, "--theta")?
    };
    let m = triple(&a.m, "--m")?;
    let lat = SphereLattice::new(c, *a.lambda.iter().max().unwrap())?;
    let run = torus_ergodic_run(&lat, theta, m, &a.lambda)?;
    ctx.derive("theta", theta);
    ctx.derive("alpha", run.alpha);
    ctx.derive("skipped", &run.skipped);
    ctx.csv(
        "ergodic.csv",
        &["lambda", "r", "multiplier"],
        run.rows.iter().map(|(l, r, v)| vec![l.to_string(), r.to_string(), f(*v)]),
    )?;
    if ctx.check {
        ctx.expect(run.rows.iter().all(|r| r.2.abs() <= 1.0 + 1e-12), "multiplier exceeds 1");
        let zero = torus_ergodic_run(&lat, theta, [0, 0, 0], &a.lambda)?;
        ctx.expect(zero.rows.iter().all(|r| r.2 == 1.0), "trivial character does not give 1");
    }
    let last = run.rows.last().map(|r| r.2).unwrap_or(f64::NAN);
    Ok(format!("ergodic: c {c} theta {theta:?} m {m:?} {} rows, last multiplier {last:.6e}", run.rows.len()))
}

pub fn variation(a: &VariationArgs, ctx: &mut Ctx) -> Outcome<String> {
    if !(a.r >= 1.0) {
        return usage("--r must be at least 1");
    }
    let seq: Vec<Complex64> = match (&a.values, &a.input) {
        (Some(v), _) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p)?;
            let mut out = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let v: Vec<f64> = line
                    .split(|ch: char| ch.is_whitespace() || ch == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<f64>().map_err(|_| Failure::Usage(format!("line {}: bad number", i + 1))))
                    .collect::<Outcome<_>>()?;
                match v[..] {
                    [re] => out.push(Complex64::new(re, 0.0)),
                    [re, im] => out.push(Complex64::new(re, im)),
                    _ => return usage(format!("line {}: expected one or two numbers", i + 1)),
                }
            }
            out
        }
        (None, None) => return usage("give --values or --input"),
    };
    let real = seq.iter().all(|z| z.im == 0.0);
    let value = if real {
        variation_seminorm(&seq.iter().map(|z| z.re).collect::<Vec<_>>(), a.r)?
    } else {
        variation_seminorm_complex(&seq, a.r)?
    };
    let summary = json!({ "n": seq.len(), "r": a.r, "complex": !real, "value": value });
    ctx.json("variation.json", &summary)?;
    if a.oracle {
        if !real {
            return usage("--oracle handles real sequences only");
        }
        let b = oracles::brute_variation(&seq.iter().map(|z| z.re).collect::<Vec<_>>(), a.r)?.value;
        ctx.expect((b - value).abs() <= 1e-12 * b.max(1.0), format!("exhaustive search gives {b}"));
    }
    if ctx.check {
        let sup = seq.iter().flat_map(|x| seq.iter().map(move |y| (x - y).norm())).fold(0.0, f64::max);
        ctx.expect(value + 1e-12 >= sup, "V^r below the largest single jump");
    }
    Ok(format!("variation: n {} r {} value {value:.17e}", seq.len(), a.r))
}

pub fn minor(a: &MinorArgs, ctx: &mut Ctx) -> Outcome<String> {
    let c = rational_class(&a.c)?;
    if c.is_one() {
        return usage("the minor-arc profile needs c > 1");
    }
    if a.stride == 0 {
        return usage("--stride must be positive");
    }
    let prof = minor_arc_profile(c, &a.n, a.stride, None)?;
    ctx.csv(
        "minor.csv",
        &["n", "value", "argmax", "bound", "triangle_ok"],
        prof.rows.iter().map(|r| vec![r.n.to_string(), f(r.value), r.argmax.to_string(), f(r.bound), r.triangle_ok.to_string()]),
    )?;
    let summary = json!({ "slope": prof.slope, "target_slope": prof.target_slope, "fitted": prof.fitted, "skipped": prof.skipped });
    ctx.derive("summary", &summary);
    ctx.json("minor.json", &summary)?;
    if ctx.check {
        ctx.expect(prof.rows.iter().all(|r| r.triangle_ok), "triangle inequality violated");
    }
    Ok(format!("minor: c {c} {} rows, slope {:.4} (target {:.4})", prof.rows.len(), prof.slope, prof.target_slope))
}

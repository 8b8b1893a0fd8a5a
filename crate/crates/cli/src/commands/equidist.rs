use crate::args::{DiscArgs, ProjectArgs, WeylArgs};
use crate::ctx::{f, rational, rational_class, triple, unit, usage, Ctx, Failure, Outcome};
use csphere_core::counting::SphereLattice;
use csphere_core::equidist::{
    discrepancy_decay_dirs, discrepancy_exact, project, weyl_sum, CapTable, DecayConfig, TestFn, MAX_MATERIALIZE,
};
use csphere_core::oracles;
use csphere_core::surface::random_directions;
use csphere_core::Error;
use serde_json::json;

pub fn project_cmd(a: &ProjectArgs, ctx: &mut Ctx) -> Outcome<String> {
    let c = rational(&a.c)?;
    if a.lambda < 1 {
        return usage("--lambda must be at least 1");
    }
    let lat = SphereLattice::new(c, a.lambda)?;
    let cloud = project(&lat, a.lambda)?;
    if cloud.count() > MAX_MATERIALIZE {
        return Err(Failure::Compute(format!("cloud of {} points is too large to write", cloud.count())));
    }
    let dev = cloud.verify()?;
    let s = cloud.scale();
    let mut pts = lat.points(a.lambda);
    pts.sort();
    ctx.derive("c", c.to_string());
    ctx.derive("scale", s);
    ctx.csv(
        "points.csv",
        &["x1", "x2", "x3", "y1", "y2", "y3"],
        pts.iter().map(|p| {
            let mut v: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            v.extend(p.iter().map(|&x| f(x as f64 * s)));
            v
        }),
    )?;
    if ctx.check {
        let tol = 3.0 / a.lambda as f64;
        ctx.expect(dev <= tol, format!("max ||y|_c^c - 1| = {dev:e} above {tol:e}"));
        ctx.expect(pts.len() as u64 == cloud.count(), "point list and count differ");
    }
    if a.oracle {
        let mut brute = oracles::brute_cloud(c.p(), c.q(), a.lambda)?.value;
        brute.sort();
        ctx.expect(brute == pts, "brute-force cloud differs");
    }
    Ok(format!("project: c {c} lambda {} points {} max ||y|_c^c - 1| {dev:.3e}", a.lambda, cloud.count()))
}

fn test_fn(s: &str) -> Outcome<TestFn> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| Failure::Usage(format!("bad test function {s:?}")))?;
    let ints = |t: &str| -> Outcome<Vec<i64>> {
        t.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad integer in {s:?}")))).collect()
    };
    match kind {
        "const" => rest
            .trim()
            .parse::<f64>()
            .map(TestFn::Constant)
            .map_err(|_| Failure::Usage(format!("bad constant in {s:?}"))),
        "trig" => Ok(TestFn::Trig(triple(&ints(rest)?, "trig")?)),
        "mono" => {
            let k = triple(&ints(rest)?, "mono")?;
            if k.iter().any(|&e| e < 0) {
                return usage("monomial exponents must be nonnegative");
            }
            Ok(TestFn::Monomial(k.map(|e| e as u32)))
        }
        _ => usage(format!("unknown test function kind {kind:?} (const, trig, mono)")),
    }
}

pub fn weyl(a: &WeylArgs, ctx: &mut Ctx) -> Outcome<String> {
    let c = rational(&a.c)?;
    let phi = test_fn(&a.test)?;
    let horizon = *a.lambda.iter().max().unwrap();
    let lat = SphereLattice::new(c, horizon)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &l in &a.lambda {
        let cloud = match project(&lat, l) {
            Ok(cl) => cl,
            Err(Error::EmptySphere(_)) => {
                skipped.push(l);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let w = weyl_sum(&cloud, &phi)?;
        if ctx.check {
            let one = weyl_sum(&cloud, &TestFn::Constant(1.0))?;
            ctx.expect(one.gap == 0.0, format!("constant function gap {} at {l}", one.gap));
        }
        rows.push((l, cloud.count(), w));
    }
    ctx.derive("skipped", &skipped);
    ctx.csv(
        "weyl.csv",
        &["lambda", "r", "value", "limit", "gap"],
        rows.iter().map(|(l, r, w)| vec![l.to_string(), r.to_string(), f(w.value), f(w.limit), f(w.gap)]),
    )?;
    let last = rows.last().map(|r| r.2.gap).unwrap_or(f64::NAN);
    Ok(format!("weyl: c {c} {} rows ({} skipped), last gap {last:.6e}", rows.len(), skipped.len()))
}

fn read_directions(path: &std::path::Path) -> Outcome<Vec<[f64; 3]>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| Failure::Usage(format!("line {}: bad number {t:?}", i + 1))))
            .collect::<Outcome<_>>()?;
        out.push(unit(&v, &format!("direction on line {}", i + 1))?);
    }
    if out.is_empty() {
        return usage("direction file is empty");
    }
    Ok(out)
}

pub fn disc(a: &DiscArgs, ctx: &mut Ctx) -> Outcome<String> {
    let c = rational_class(&a.c)?;
    let dirs = match &a.directions {
        Some(p) => read_directions(p)?,
        None => random_directions(a.dirs, a.seed),
    };
    let cfg = DecayConfig { bins: a.bins, profile_intervals: a.profile_intervals, exact_limit: a.exact_limit };
    let rep = discrepancy_decay_dirs(c, &a.lambda, &dirs, a.seed, cfg)?;
    let mut rows = Vec::new();
    for row in &rep.rows {
        for (k, xi) in dirs.iter().enumerate() {
            rows.push(vec![
                row.lambda.to_string(),
                f(xi[0]),
                f(xi[1]),
                f(xi[2]),
                f(row.d[k]),
                f(row.argmax[k]),
                f(row.d[k] / row.r as f64),
                f(row.upper[k]),
                row.exact.to_string(),
            ]);
        }
    }
    ctx.csv(
        "disc.csv",
        &["lambda", "xi1", "xi2", "xi3", "D", "argmax_a", "normalized", "upper", "exact"],
        rows,
    )?;
    let summary = json!({
        "c": rep.c, "seed": rep.seed, "directions": dirs.len(), "skipped": rep.skipped,
        "slope_normalized": rep.slope_normalized, "slope_scaled": rep.slope_scaled,
        "target": rep.target, "profile_error": rep.profile_error,
        "mean_normalized": rep.rows.iter().map(|r| (r.lambda, r.mean_normalized)).collect::<Vec<_>>(),
    });
    ctx.derive("summary", &summary);
    ctx.json("disc.json", &summary)?;
    if ctx.check {
        for row in &rep.rows {
            ctx.expect(
                row.d.iter().zip(&row.upper).all(|(l, u)| l <= u && *l <= row.r as f64),
                format!("bracket inverted at lambda {}", row.lambda),
            );
        }
    }
    if a.oracle {
        let lat = SphereLattice::new(c, *a.lambda.iter().max().unwrap())?;
        for &l in a.lambda.iter().filter(|&&l| l <= 2000) {
            let Ok(cloud) = project(&lat, l) else { continue };
            let xi = dirs[0];
            let table = CapTable::new(c.c(), xi, a.profile_intervals)?;
            let nu = |t: f64| table.nu(t);
            let scan = discrepancy_exact(&cloud, xi, nu)?;
            let brute = oracles::brute_discrepancy(c.p(), c.q(), l, xi, &nu)?.value;
            ctx.expect(
                scan.jumps == brute.jumps && scan.counts == brute.counts,
                format!("jump scan differs from brute force at lambda {l}"),
            );
        }
    }
    Ok(format!(
        "disc: c {c} {} lambdas x {} directions, slope of mean D/r {:.4}",
        rep.rows.len(),
        dirs.len(),
        rep.slope_normalized
    ))
}

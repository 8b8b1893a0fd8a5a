use crate::args::{AsymArgs, CountArgs, JfunArgs, MethodArg};
use crate::ctx::{f, function, rational, usage, Ctx, Outcome};
use csphere_core::counting::{
    asymptotic_report, count_positive_range, first_full_radius, j2_table, j3, sphere_counts, AsymptoticSpec,
    CountMethod, CountTable,
};
use csphere_core::numeric::regress::loglog_slope;
use csphere_core::oracles;
use csphere_core::regvar::RegVarFunction;
use serde_json::json;

fn method(m: MethodArg) -> CountMethod {
    match m {
        MethodArg::Enum => CountMethod::Enum,
        MethodArg::Fft => CountMethod::fft(),
    }
}

fn functions(specs: &[String], max: usize) -> Outcome<Vec<RegVarFunction>> {
    if specs.is_empty() || specs.len() > max {
        return usage(format!("between 1 and {max} --fn specs expected"));
    }
    specs.iter().map(|s| function(s)).collect()
}

fn table_meta(t: &CountTable) -> serde_json::Value {
    json!({
        "horizon": t.horizon,
        "method": t.method.tag(),
        "domain": format!("{:?}", t.domain),
        "functions": t.functions,
        "n0": t.n0,
        "arity": t.arity,
    })
}

fn legendre_excluded(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % 4 == 0 {
        n /= 4;
    }
    n % 8 == 7
}

pub fn count(a: &CountArgs, ctx: &mut Ctx) -> Outcome<String> {
    if a.lmax < 1 {
        return usage("--lmax must be at least 1");
    }
    let table = match &a.c {
        Some(c) => {
            let c = rational(c)?;
            ctx.derive("c", c.to_string());
            sphere_counts(c, a.lmax, method(a.method))?
        }
        None => {
            let hs = functions(&a.fun, 3)?;
            let refs: Vec<&RegVarFunction> = hs.iter().collect();
            count_positive_range(&refs, a.lmax, method(a.method))?
        }
    };
    ctx.derive("table", table_meta(&table));
    ctx.csv(
        "counts.csv",
        &["lambda", "count"],
        table.counts.iter().enumerate().map(|(l, r)| vec![l.to_string(), r.to_string()]),
    )?;
    ctx.json("counts.json", &table_meta(&table))?;

    let c = a.c.as_deref().map(rational).transpose()?;
    if a.check_legendre {
        match c {
            Some(c) if c.p() == 2 && c.q() == 1 => {}
            _ => return usage("--check-legendre needs --c 2"),
        }
        let bad: Vec<u64> = (1..=a.lmax)
            .filter(|&l| (table.counts[l as usize] == 0) != legendre_excluded(l))
            .collect();
        ctx.expect(bad.is_empty(), format!("zero pattern differs from 4^m(8n+7) at {bad:?}"));
        let mut m = 1u64;
        while m <= a.lmax {
            ctx.expect(table.counts[m as usize] == 6, format!("r(4^k) = {} at {m}", table.counts[m as usize]));
            m *= 4;
        }
    }
    if ctx.check {
        ctx.expect(table.counts[0] == if c.is_some() { 1 } else { 0 }, "r(0) is wrong");
        if a.lmax <= 200_000 {
            let other = match a.method {
                MethodArg::Enum => MethodArg::Fft,
                MethodArg::Fft => MethodArg::Enum,
            };
            if let Some(c) = c {
                if a.lmax <= 20_000 || other == MethodArg::Fft {
                    let alt = sphere_counts(c, a.lmax, method(other))?;
                    ctx.expect(alt.same_counts(&table), "enum and fft tables differ");
                }
            }
        }
    }
    if a.oracle {
        let Some(c) = c else { return usage("--oracle needs --c") };
        let brute = oracles::brute_count_table(c.p(), c.q(), a.lmax)?.value;
        ctx.expect(brute == table.counts, "brute-force table differs");
    }
    let total = table.total();
    Ok(format!(
        "count: horizon {} method {} total {} first full radius >= {}",
        table.horizon,
        table.method.tag(),
        total,
        first_full_radius(&table)
    ))
}

pub fn asym(a: &AsymArgs, ctx: &mut Ctx) -> Outcome<String> {
    if a.lmax < 2 {
        return usage("--lmax must be at least 2");
    }
    if let Some(cs) = &a.c {
        let c = rational(cs)?;
        let table = sphere_counts(c, a.lmax, method(a.method))?;
        let rep = asymptotic_report(&table, c.c())?;
        let meta = json!({
            "c": c.to_string(),
            "table": table_meta(&table),
            "cumulative": rep.cumulative.to_string(),
            "ball_volume": rep.ball_volume,
            "cumulative_relerr": rep.cumulative_relerr,
            "first_full_radius": first_full_radius(&table),
        });
        ctx.derive("summary", &meta);
        ctx.csv(
            "asym.csv",
            &["lambda", "count", "main_term", "ratio"],
            rep.rows.iter().map(|r| vec![r.lambda.to_string(), r.count.to_string(), f(r.main_term), f(r.ratio)]),
        )?;
        ctx.csv(
            "windows.csv",
            &["k", "lo", "hi", "mean_ratio", "deviation"],
            rep.windows.iter().map(|w| {
                vec![w.k.to_string(), w.lo.to_string(), w.hi.to_string(), f(w.mean_ratio), f(w.deviation)]
            }),
        )?;
        ctx.json("asym.json", &meta)?;
        if ctx.check {
            let sum: u128 = table.counts[1..].iter().map(|&r| r as u128).sum::<u128>() + 1;
            ctx.expect(sum == rep.cumulative, "cumulative count differs from the table sum");
            ctx.expect(rep.rows.iter().all(|r| r.ratio.is_finite() && r.main_term > 0.0), "non-finite ratio");
        }
        let last = rep.windows.last().map(|w| w.deviation).unwrap_or(f64::NAN);
        return Ok(format!(
            "asym: c {c} horizon {} cumulative relerr {:.3e} last window deviation {last:.3e}",
            a.lmax, rep.cumulative_relerr
        ));
    }
    let hs = functions(&a.fun, 3)?;
    if hs.len() != 3 {
        return usage("asym with --fn needs three functions");
    }
    let refs: Vec<&RegVarFunction> = hs.iter().collect();
    let table = count_positive_range(&refs, a.lmax, method(a.method))?;
    let spec = AsymptoticSpec::new([hs[0].clone(), hs[1].clone(), hs[2].clone()]);
    let start = hs.iter().map(|h| h.n0()).sum::<u64>().max(1);
    let mut rows = Vec::new();
    for l in start..=a.lmax {
        let m = spec.main_term_3(l as f64)?;
        rows.push((l, table.counts[l as usize], m));
    }
    let condition = spec.condition_holds();
    let meta = json!({ "table": table_meta(&table), "condition_holds": condition });
    ctx.derive("summary", &meta);
    ctx.csv(
        "asym.csv",
        &["lambda", "count", "main_term", "ratio"],
        rows.iter().map(|&(l, r, m)| vec![l.to_string(), r.to_string(), f(m), f(r as f64 / m)]),
    )?;
    ctx.json("asym.json", &meta)?;
    let last = rows.last().map(|&(_, r, m)| r as f64 / m).unwrap_or(f64::NAN);
    Ok(format!("asym: three functions horizon {} condition holds {condition} last ratio {last:.6}", a.lmax))
}

pub fn jfun(a: &JfunArgs, ctx: &mut Ctx) -> Outcome<String> {
    let hs = functions(&a.fun, 3)?;
    let (h1, h2) = (&hs[0], hs.get(1).unwrap_or(&hs[0]));
    let start = h1.n0() + h2.n0();
    if a.lmax < start {
        return usage(format!("--lmax below N0_1 + N0_2 = {start}"));
    }
    let table = j2_table(h1, h2, a.lmax)?;
    let spec = AsymptoticSpec::new([h1.clone(), h2.clone(), hs.get(2).unwrap_or(h1).clone()]);
    let mut rows = Vec::new();
    for l in start.max(1)..=a.lmax {
        let m = spec.main_term_2(l as f64)?;
        rows.push((l, table[l as usize], m));
    }
    ctx.csv(
        "jfun.csv",
        &["lambda", "j2", "main_term", "ratio"],
        rows.iter().map(|&(l, j, m)| vec![l.to_string(), f(j), f(m), f(j / m)]),
    )?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut k = 1u64;
    while k <= a.lmax {
        if k >= start.max(2) {
            let (_, j, m) = rows[(k - start.max(1)) as usize];
            let e = (j / m - 1.0).abs();
            if e > 0.0 {
                xs.push(k as f64);
                ys.push(e);
            }
        }
        k *= 2;
    }
    let slope = if xs.len() >= 2 { loglog_slope(&xs, &ys) } else { f64::NAN };
    let mut summary = json!({ "dyadic_error_slope": slope, "functions": hs.iter().map(|h| h.descriptor()).collect::<Vec<_>>() });
    if hs.len() == 3 {
        let v = j3(&hs[0], &hs[1], &hs[2], a.lmax)?;
        let m = spec.main_term_3(a.lmax as f64)?;
        summary["j3"] = json!({ "lambda": a.lmax, "value": v, "main_term": m });
    }
    ctx.derive("summary", &summary);
    ctx.json("jfun.json", &summary)?;
    if ctx.check {
        let identity = |h: &RegVarFunction| h.is_exact_power() && h.exponent().is_one();
        if identity(h1) && identity(h2) {
            ctx.expect(
                rows.iter().all(|&(l, j, _)| j == (l - 1) as f64),
                "j2 of the identity differs from lambda - 1",
            );
        }
        ctx.expect(rows.iter().all(|r| r.1.is_finite() && r.1 >= 0.0), "negative or non-finite j2");
    }
    Ok(format!("jfun: horizon {} dyadic slope of |j2/main - 1| {slope:.4}", a.lmax))
}

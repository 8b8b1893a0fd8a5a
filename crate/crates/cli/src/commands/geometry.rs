use crate::args::{CapArgs, FourierArgs, SurfaceArgs};
use crate::ctx::{f, real_exponent, triple, unit, usage, Ctx, Outcome};
use csphere_core::numeric::hp::to_f64;
use csphere_core::oracles;
use csphere_core::surface::{
    decay_profile, fourier_mu_auto, polar_check, smoothed_cap, surface_integral, surface_mass, CapSolver, QuadSpec,
    SurfaceQuadrature,
};
use serde_json::json;
use std::f64::consts::PI;

fn spec_for(nq: usize) -> Outcome<QuadSpec> {
    let d = QuadSpec::default();
    if nq == 0 || nq % d.order != 0 {
        return usage(format!("--nq must be a positive multiple of {}", d.order));
    }
    Ok(QuadSpec { rho_panels: nq / d.order, s_panels: nq / d.order, ..d })
}

pub fn surface(a: &SurfaceArgs, ctx: &mut Ctx) -> Outcome<String> {
    let c = real_exponent(&a.c)?;
    let spec = spec_for(a.nq)?;
    ctx.derive("c", c);
    ctx.derive("quad_spec", spec);
    if !a.mass && !a.polar {
        return usage("choose --mass and/or --polar");
    }
    let mut parts = Vec::new();
    let mut summary = json!({ "c": c, "nq": a.nq });
    if a.mass {
        let est = surface_integral(c, spec, |_| 1.0)?;
        let closed = if a.oracle {
            let g = |x: f64| to_f64(&oracles::gamma_hp(x, 256).unwrap().value);
            8.0 * g(1.0 / c).powi(3) / (c * c * g(3.0 / c))
        } else {
            surface_mass(c)
        };
        let dev = (est.value - closed).abs() / closed;
        summary["mass"] = json!({
            "quadrature": est.value, "closed_form": closed, "deviation": dev,
            "richardson_error": est.error, "converged": est.converged,
        });
        if ctx.check {
            ctx.expect(dev <= 1e-6, format!("mass deviation {dev:e} above 1e-6"));
            if c == 2.0 {
                ctx.expect((est.value - 4.0 * PI).abs() <= 1e-6 * 4.0 * PI, "c = 2 mass differs from 4 pi");
            }
        }
        parts.push(format!("mass {} closed form {} deviation {dev:.3e}", est.value, closed));
    }
    if a.polar {
        let q = SurfaceQuadrature::new(c, spec)?;
        let g = |x: [f64; 3]| (-PI * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp();
        let p = polar_check(g, 6.0, 12.0, &q)?;
        summary["polar"] = json!({ "cartesian": p.lhs, "polar": p.rhs, "relerr": p.relerr });
        if ctx.check {
            ctx.expect(p.relerr <= 1e-4, format!("polar identity relerr {:e}", p.relerr));
        }
        parts.push(format!("polar relerr {:.3e}", p.relerr));
    }
    ctx.json("surface.json", &summary)?;
    Ok(format!("surface: c {c} {}", parts.join(", ")))
}

pub fn fourier(a: &FourierArgs, ctx: &mut Ctx) -> Outcome<String> {
    let c = real_exponent(&a.c)?;
    ctx.derive("c", c);
    if let Some(xi) = &a.xi {
        let xi = triple(xi, "--xi")?;
        let v = fourier_mu_auto(c, xi)?;
        let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let mut summary = json!({ "xi": xi, "value": v, "spec": QuadSpec::for_frequency(xi) });
        if a.oracle || ctx.check {
            if c == 2.0 {
                let o = oracles::classical_sphere_ft(r).value;
                summary["classical"] = json!(o);
                ctx.expect((v - o).abs() <= 1e-5, format!("classical closed form {o} vs {v}"));
            } else if a.oracle {
                return usage("--oracle compares against the round sphere and needs --c 2");
            }
        }
        if ctx.check {
            let back = fourier_mu_auto(c, xi.map(|t| -t))?;
            ctx.expect((back - v).abs() <= 1e-10 * v.abs().max(1.0), "transform is not even");
            ctx.expect(v.abs() <= surface_mass(c) * (1.0 + 1e-9), "transform exceeds the mass");
        }
        ctx.json("fourier.json", &summary)?;
        return Ok(format!("fourier: c {c} xi {xi:?} value {v:.12e}"));
    }
    let Some(radii) = &a.radii else { return usage("give --xi or --radii") };
    if radii.iter().any(|r| !(*r > 0.0)) || a.samples == 0 {
        return usage("radii must be positive and --samples nonzero");
    }
    let rows = decay_profile(c, radii, a.samples, a.seed, a.gradient)?;
    let mut header = vec!["R", "max_scaled_abs", "argmax_direction"];
    if a.gradient {
        header.push("max_scaled_grad");
    }
    ctx.csv(
        "fourier.csv",
        &header,
        rows.iter().map(|r| {
            let d = r.argmax_direction;
            let mut v = vec![f(r.radius), f(r.max_scaled_abs), format!("{} {} {}", f(d[0]), f(d[1]), f(d[2]))];
            if let Some(g) = r.max_scaled_grad {
                v.push(f(g));
            }
            v
        }),
    )?;
    if ctx.check {
        ctx.expect(rows.iter().all(|r| r.max_scaled_abs.is_finite()), "non-finite shell maximum");
    }
    let peak = rows.iter().map(|r| r.max_scaled_abs).fold(0.0, f64::max);
    Ok(format!("fourier: c {c} {} shells, {} directions, max R|F mu| {peak:.6}", rows.len(), a.samples))
}

pub fn cap(a: &CapArgs, ctx: &mut Ctx) -> Outcome<String> {
    let c = real_exponent(&a.c)?;
    let xi = unit(&a.xi, "--xi")?;
    let solver = CapSolver::new(c, xi)?;
    let amax = solver.a_max();
    ctx.derive("c", c);
    ctx.derive("xi", xi);
    ctx.derive("a_max", amax);
    let thresholds: Vec<f64> = match (&a.a, a.grid) {
        (Some(v), _) => v.clone(),
        (None, Some(n)) if n >= 1 => (0..=n).map(|k| amax * k as f64 / n as f64).collect(),
        _ => return usage("give --a or --grid N (N >= 1)"),
    };
    if let Some(d) = a.delta {
        if !(d > 0.0) {
            return usage("--delta must be positive");
        }
    }
    let vals: Vec<f64> = thresholds
        .iter()
        .map(|&t| match a.delta {
            Some(d) => smoothed_cap(|s| solver.nu(s), t, d, a.upper),
            None => solver.nu(t),
        })
        .collect();
    ctx.csv("cap.csv", &["a", "nu"], thresholds.iter().zip(&vals).map(|(t, v)| vec![f(*t), f(*v)]))?;
    if ctx.check {
        ctx.expect(vals.iter().all(|v| (-1e-12..=1.0 + 1e-12).contains(v)), "nu outside [0, 1]");
        let mut idx: Vec<usize> = (0..thresholds.len()).collect();
        idx.sort_by(|&i, &j| thresholds[i].total_cmp(&thresholds[j]));
        ctx.expect(idx.windows(2).all(|w| vals[w[1]] <= vals[w[0]] + 1e-12), "nu is not non-increasing in a");
    }
    Ok(format!("cap: c {c} xi {xi:?} a_max {amax:.12} {} thresholds", thresholds.len()))
}

//! C-infinity building blocks: the exp(-1/u) smooth step, plateau bumps and
//! the normalized mollifier exp(-1/(1-u^2)).

use super::gl::GaussLegendre;
use std::sync::OnceLock;

#[inline]
fn f(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// Smooth step: 0 for u <= 0, 1 for u >= 1, C-infinity in between.
#[inline]
pub fn step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = f(u);
        a / (a + f(1.0 - u))
    }
}

/// Derivative of `step`.
pub fn step_deriv(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let a = f(u);
    let b = f(1.0 - u);
    let da = a / (u * u);
    let db = -b / ((1.0 - u) * (1.0 - u));
    (da * (a + b) - a * (da + db)) / ((a + b) * (a + b))
}

/// Even plateau bump: 1 on |x| <= plateau, 0 on |x| >= support.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Plateau {
    pub plateau: f64,
    pub support: f64,
}

impl Plateau {
    pub fn new(plateau: f64, support: f64) -> Self {
        assert!(0.0 <= plateau && plateau < support, "plateau must lie inside the support");
        Plateau { plateau, support }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax <= self.plateau {
            1.0
        } else if ax >= self.support {
            0.0
        } else {
            step((self.support - ax) / (self.support - self.plateau))
        }
    }

    pub fn width(&self) -> f64 {
        self.support - self.plateau
    }
}

/// Unnormalized mollifier profile on (-1, 1).
#[inline]
pub fn mollifier_raw(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

const CDF_PANELS: usize = 512;

struct MollifierTable {
    norm: f64,
    cum: Vec<f64>,
    gl: GaussLegendre,
}

fn table() -> &'static MollifierTable {
    static T: OnceLock<MollifierTable> = OnceLock::new();
    T.get_or_init(|| {
        let gl = GaussLegendre::new(20);
        let h = 2.0 / CDF_PANELS as f64;
        let mut cum = vec![0.0; CDF_PANELS + 1];
        for i in 0..CDF_PANELS {
            let a = -1.0 + i as f64 * h;
            cum[i + 1] = cum[i] + gl.integrate(a, a + h, mollifier_raw);
        }
        let norm = cum[CDF_PANELS];
        MollifierTable { norm, cum, gl }
    })
}

/// Normalized mollifier phi with integral one, supported in [-1, 1].
pub fn mollifier(u: f64) -> f64 {
    mollifier_raw(u) / table().norm
}

/// Integral of the normalized mollifier over (-inf, z].
pub fn mollifier_cdf(z: f64) -> f64 {
    if z <= -1.0 {
        return 0.0;
    }
    if z >= 1.0 {
        return 1.0;
    }
    let t = table();
    let h = 2.0 / CDF_PANELS as f64;
    let i = (((z + 1.0) / h).floor() as usize).min(CDF_PANELS - 1);
    let a = -1.0 + i as f64 * h;
    (t.cum[i] + t.gl.integrate(a, z, mollifier_raw)) / t.norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_is_monotone_and_symmetric() {
        let mut prev = 0.0;
        for i in 0..=100 {
            let u = i as f64 / 100.0;
            let s = step(u);
            assert!(s >= prev);
            assert!((s + step(1.0 - u) - 1.0).abs() < 1e-15);
            prev = s;
        }
        let h = 1e-6;
        let fd = (step(0.3 + h) - step(0.3 - h)) / (2.0 * h);
        assert!((fd - step_deriv(0.3)).abs() < 1e-6);
    }

    #[test]
    fn mollifier_is_a_probability_density() {
        assert!((mollifier_cdf(1.0) - 1.0).abs() < 1e-15);
        assert!((mollifier_cdf(0.0) - 0.5).abs() < 1e-13);
        let b = Plateau::new(1.0, 2.0);
        assert_eq!(b.eval(0.9), 1.0);
        assert_eq!(b.eval(2.5), 0.0);
        assert!((b.eval(1.5) - 0.5).abs() < 1e-15);
    }
}

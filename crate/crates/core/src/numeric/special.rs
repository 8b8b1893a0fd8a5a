//! Gamma and beta functions (statrs) plus the symmetric regularized
//! incomplete beta used by cap measures.

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

pub fn beta(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// Regularized incomplete beta I_x(a, b).
pub fn beta_reg(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        statrs::function::beta::beta_reg(a, b, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half() {
        assert!((gamma(0.5).powi(2) - std::f64::consts::PI).abs() < 1e-13);
        assert!((beta(2.0, 3.0) - 1.0 / 12.0).abs() < 1e-15);
        assert!((beta_reg(0.5, 0.5, 0.5) - 0.5).abs() < 1e-14);
    }
}

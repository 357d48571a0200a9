//! Shared quadrature helpers.

use gauss_quad::legendre::GaussLegendre;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

/// A 20-point Gauss-Legendre rule, built once.
pub(crate) fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(20).unwrap()))
}

/// Composite Gauss-Legendre over `panels` equal sub-intervals of [a, b].
pub(crate) fn composite<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, mut f: F) -> f64 {
    let rule = gl20();
    let w = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let lo = a + w * p as f64;
        sum += rule.integrate(lo, lo + w, &mut f);
    }
    sum
}

/// Adaptive double-exponential quadrature with an absolute error target.
/// Intervals whose estimate misses the target are bisected.
pub(crate) fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_err: f64) -> (f64, f64) {
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
        let out = quadrature::integrate(f, a, b, tol);
        if out.error_estimate <= tol || depth == 0 {
            return (out.integral, out.error_estimate);
        }
        let m = 0.5 * (a + b);
        let (l, el) = step(f, a, m, 0.5 * tol, depth - 1);
        let (r, er) = step(f, m, b, 0.5 * tol, depth - 1);
        (l + r, el + er)
    }
    step(&f, a, b, abs_err, 24)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn composite_integrates_smooth_functions() {
        assert_relative_eq!(composite(0.0, 3.0, 4, |x| x.exp()), 3f64.exp() - 1.0, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_integrates_peaked_function() {
        let (v, err) = adaptive(|x| 1.0 / (1e-2 + x * x), -1.0, 1.0, 1e-10);
        assert_relative_eq!(v, 20.0 * 10f64.atan(), max_relative = 1e-9);
        assert!(err < 1e-8);
    }
}

//! Scalar numeric utilities: the standard normal density, 1-D maximization
//! and central finite differences.

use crate::error::{Error, Result};

/// 1/sqrt(2*pi).
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density phi(x) = exp(-x^2/2)/sqrt(2 pi).
pub fn standard_normal_density(x: f64) -> f64 {
    debug_assert!(x.is_finite());
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// log phi(x), useful when phi underflows.
pub fn log_standard_normal_density(x: f64) -> f64 {
    -0.5 * x * x + INV_SQRT_2PI.ln()
}

/// Number of coarse-scan intervals used by [`maximize_1d`].
const COARSE_INTERVALS: usize = 1024;

/// Result of a 1-D maximization.
#[derive(Debug, Clone, Copy)]
pub struct Maximum {
    pub argmax: f64,
    pub value: f64,
}

/// Maximize a continuous function on `[lo, hi]`.
///
/// A coarse scan on 1024 intervals locates every local-maximum bracket
/// (including the endpoints); each bracket is refined by golden-section
/// search to width `tol`, and the best refinement wins. For unimodal `g`
/// the argmax is accurate to `tol`; for multimodal `g` the result is the
/// best of all local refinements.
pub fn maximize_1d(g: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<Maximum> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInterval { lo, hi });
    }
    let n = COARSE_INTERVALS;
    let step = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| lo + i as f64 * step).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();

    let mut best = Maximum {
        argmax: xs[0],
        value: vs[0],
    };
    for (&x, &v) in xs.iter().zip(&vs) {
        if v > best.value {
            best = Maximum { argmax: x, value: v };
        }
    }

    // Refine every interior local maximum plus the two endpoint brackets.
    let mut brackets: Vec<(f64, f64)> = Vec::new();
    for i in 1..n {
        if vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1] {
            brackets.push((xs[i - 1], xs[i + 1]));
        }
    }
    brackets.push((xs[0], xs[1]));
    brackets.push((xs[n - 1], xs[n]));

    for (a, b) in brackets {
        let m = golden_section_max(&g, a, b, tol, lo, hi);
        if m.value > best.value {
            best = m;
        }
    }
    Ok(best)
}

/// Golden-section refinement for a maximum on `[a, b]`, followed by a
/// parabolic-vertex polish. Golden section alone cannot localize a smooth
/// maximum beyond ~sqrt(eps) because nearby values become indistinguishable;
/// fitting a parabola through three spaced samples recovers the argmax to
/// ~1e-10. Probes never leave the global interval `[lo, hi]`.
fn golden_section_max(
    g: &impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
    lo: f64,
    hi: f64,
) -> Maximum {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    let mut iters = 0usize;
    while (b - a).abs() > tol && iters < 200 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = g(x2);
        }
        iters += 1;
    }
    let mid = 0.5 * (a + b);
    let fm = g(mid);
    let mut best = Maximum {
        argmax: mid,
        value: fm,
    };
    if f1 > best.value {
        best = Maximum {
            argmax: x1,
            value: f1,
        };
    }
    if f2 > best.value {
        best = Maximum {
            argmax: x2,
            value: f2,
        };
    }

    let scale = 1.0 + best.argmax.abs();
    for &h_rel in &[1e-3, 1e-5, 1e-6] {
        let h = h_rel * scale;
        let (xl, xr) = (best.argmax - h, best.argmax + h);
        if xl < lo || xr > hi {
            continue;
        }
        let (fl, f0, fr) = (g(xl), g(best.argmax), g(xr));
        let denom = fl - 2.0 * f0 + fr;
        if !(denom < 0.0) {
            continue;
        }
        let v = best.argmax + 0.5 * h * (fl - fr) / denom;
        if v < lo || v > hi || !(v - best.argmax).abs().is_finite() {
            continue;
        }
        let fv = g(v);
        // The vertex is more accurate than value comparison can resolve;
        // accept it on ties.
        if fv >= best.value {
            best = Maximum {
                argmax: v,
                value: fv,
            };
        }
    }
    best
}

/// Central finite difference of even order `order` at `x` with step `h`.
///
/// Uses the binomial stencil sum_j (-1)^j C(order, j) f(x + (order/2 - j) h) / h^order.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, order: usize, h: f64) -> f64 {
    assert!(order >= 1);
    let mut acc = 0.0;
    let half = order as f64 / 2.0;
    let mut binom = 1.0f64;
    for j in 0..=order {
        acc += binom * if j % 2 == 0 { 1.0 } else { -1.0 } * f(x + (half - j as f64) * h);
        binom = binom * (order - j) as f64 / (j + 1) as f64;
    }
    acc / h.powi(order as i32)
}

/// Richardson-extrapolated central difference (one halving step), removing
/// the leading O(h^2) error term.
pub fn central_difference_richardson(
    f: impl Fn(f64) -> f64 + Copy,
    x: f64,
    order: usize,
    h: f64,
) -> f64 {
    let d_h = central_difference(f, x, order, h);
    let d_h2 = central_difference(f, x, order, h / 2.0);
    (4.0 * d_h2 - d_h) / 3.0
}

/// Two-level Richardson extrapolation, removing the O(h^2) and O(h^4)
/// error terms.
pub fn central_difference_richardson2(
    f: impl Fn(f64) -> f64 + Copy,
    x: f64,
    order: usize,
    h: f64,
) -> f64 {
    let r1 = central_difference_richardson(f, x, order, h);
    let r2 = central_difference_richardson(f, x, order, h / 2.0);
    (16.0 * r2 - r1) / 15.0
}

/// log(sum(exp(terms))) guarded against overflow; empty input yields -inf.
pub fn log_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = terms
        .clone()
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Format a float with 12 significant digits, `%.12g`-style (trailing zeros
/// trimmed, scientific notation outside [1e-4, 1e12)).
pub fn fmt_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let ax = x.abs();
    if (1e-4..1e12).contains(&ax) {
        let exp10 = ax.log10().floor() as i32;
        let decimals = (11 - exp10).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_trailing_zeros(&s)
    } else {
        let s = format!("{x:.11e}");
        // normalize exponent form: 1.25000000000e-7 -> 1.25e-07
        let (mant, exp) = s.split_once('e').unwrap();
        let mant = trim_trailing_zeros(mant);
        let exp_val: i32 = exp.parse().unwrap();
        format!("{mant}e{}{:02}", if exp_val < 0 { "-" } else { "+" }, exp_val.abs())
    }
}

fn trim_trailing_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0');
        t.trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn normal_density_values() {
        assert_relative_eq!(standard_normal_density(0.0), 0.3989422804014327, epsilon = 1e-16);
        // direct evaluation of exp(-1/2)/sqrt(2 pi)
        assert_relative_eq!(standard_normal_density(1.0), 0.24197072451914337, epsilon = 1e-16);
        for &x in &[0.3, 1.7, 4.2] {
            assert_eq!(standard_normal_density(x), standard_normal_density(-x));
        }
    }

    #[test]
    fn maximize_quadratic() {
        let m = maximize_1d(|t| -(t - 1.0) * (t - 1.0), 0.0, 2.0, 1e-12).unwrap();
        assert!((m.argmax - 1.0).abs() < 1e-9);
    }

    #[test]
    fn maximize_sine() {
        let m = maximize_1d(f64::sin, 0.0, 10.0, 1e-12).unwrap();
        assert!((m.argmax - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert_relative_eq!(m.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn maximize_log_cosh_ratio() {
        // 2 log cosh(t) / t^2 has sup 1 approached as t -> 0. The log-cosh
        // needs a small-t series or the ratio drowns in cancellation noise.
        let lncosh = |t: f64| {
            if t.abs() < 1e-4 {
                t * t / 2.0 - t.powi(4) / 12.0
            } else {
                t.abs() + (-2.0 * t.abs()).exp().ln_1p() - std::f64::consts::LN_2
            }
        };
        let m = maximize_1d(|t| 2.0 * lncosh(t) / (t * t), 1e-6, 50.0, 1e-12).unwrap();
        assert!(m.value <= 1.0 + 1e-12);
        assert!(m.value >= 1.0 - 1e-9);
    }

    #[test]
    fn maximize_invariant_under_affine_rescale() {
        let g = |t: f64| (t * 0.7).sin() - 0.1 * t;
        let m1 = maximize_1d(g, 0.0, 20.0, 1e-11).unwrap();
        let m2 = maximize_1d(|t| 2.0 * g(t) + 1.0, 0.0, 20.0, 1e-11).unwrap();
        assert!((m1.argmax - m2.argmax).abs() < 1e-8);
    }

    #[test]
    fn invalid_interval_rejected() {
        assert!(matches!(
            maximize_1d(|t| t, 1.0, 1.0, 1e-9),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn central_differences_recover_derivatives() {
        // f = exp: all derivatives 1 at 0.
        let d2 = central_difference_richardson(|x: f64| x.exp(), 0.0, 2, 1e-3);
        assert_relative_eq!(d2, 1.0, epsilon = 1e-9);
        let d4 = central_difference_richardson(|x: f64| x.exp(), 0.0, 4, 1e-2);
        assert_relative_eq!(d4, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn fmt_g12_samples() {
        assert_eq!(fmt_g12(0.0), "0");
        assert_eq!(fmt_g12(1.0), "1");
        assert_eq!(fmt_g12(0.25), "0.25");
        assert_eq!(fmt_g12(3.0), "3");
        assert_eq!(fmt_g12(1e-7), "1e-07");
        assert_eq!(fmt_g12(-2.5e15), "-2.5e+15");
        assert_eq!(fmt_g12(0.3333333333333333), "0.333333333333");
    }
}

//! The quartic family f(t) = exp(-gamma t^2/2)(1 - alpha t^2 + beta t^4):
//! characteristic-function admissibility, strict subgaussianity, the
//! zero-parameterized form, and the closed-form density.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::transform::{TransformHandle, OVERFLOW_EXPONENT};

/// Boundary classification tolerance: points within this distance of a
/// region boundary count as inside (the boundaries are attained).
pub const BOUNDARY_TOL: f64 = 1e-12;

/// beta_0 = (7 + 2 sqrt(10))/36, the corner where the lower admissibility
/// boundary overtakes alpha = sqrt(2 beta).
pub fn beta0() -> f64 {
    (7.0 + 2.0 * 10f64.sqrt()) / 36.0
}

/// a_0 = beta_0^{1/4} (sqrt2 + 1)/sqrt(4 + 2 sqrt2): the largest |w| real
/// part for which the admissible angle reaches the full pi/8.
pub fn a0() -> f64 {
    let s2 = 2f64.sqrt();
    beta0().powf(0.25) * (s2 + 1.0) / (4.0 + 2.0 * s2).sqrt()
}

/// a_max = 2^{-1/4}: beyond it no admissible b exists at all.
pub fn a_max() -> f64 {
    2f64.powf(-0.25)
}

/// The three closed-form region constants bundled for reports.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegionConstants {
    pub beta0: f64,
    pub a0: f64,
    pub a_max: f64,
}

pub fn region_constants() -> RegionConstants {
    RegionConstants {
        beta0: beta0(),
        a0: a0(),
        a_max: a_max(),
    }
}

/// Parameters of f(t) = exp(-gamma t^2/2)(1 - alpha t^2 + beta t^4).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuarticParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl QuarticParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        QuarticParams { alpha, beta, gamma }
    }

    /// Parameters after the t -> t/sqrt(gamma) rescale that normalizes the
    /// Gaussian factor to gamma = 1.
    pub fn rescaled(&self) -> (f64, f64) {
        (self.alpha / self.gamma, self.beta / (self.gamma * self.gamma))
    }

    /// Variance -f''(0) = gamma + 2 alpha.
    pub fn variance(&self) -> f64 {
        self.gamma + 2.0 * self.alpha
    }
}

fn sqrt_clamped(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

/// Lower admissibility boundary 4 beta - 2 sqrt(beta (1 - 2 beta)).
pub fn lower_boundary(beta: f64) -> f64 {
    4.0 * beta - 2.0 * sqrt_clamped(beta * (1.0 - 2.0 * beta))
}

/// Upper boundary of the second region, 4 beta + 2 sqrt(beta (1 - 2 beta)).
pub fn upper_boundary_region2(beta: f64) -> f64 {
    4.0 * beta + 2.0 * sqrt_clamped(beta * (1.0 - 2.0 * beta))
}

/// Characteristic-function admissibility of (alpha, beta) with gamma = 1.
///
/// True iff the pair lies in
///   region A: 0 <= beta <= 1/3,  4b - 2 sqrt(b(1-2b)) <= a <= 3b + 1, or
///   region B: 1/3 <= beta <= 1/2, |a - 4b| <= 2 sqrt(b(1-2b)),
/// boundaries included (tolerance 1e-12).
///
/// ```
/// use subgauss::quartic::{is_characteristic, is_strictly_subgaussian_quartic};
/// assert!(is_characteristic(1.0, 0.0));          // density x^2 phi(x)
/// assert!(!is_characteristic(1.0 + 1e-9, 0.0));  // just outside
/// // on the strictness edge alpha = sqrt(2 beta), zeros at |Arg z| = pi/8
/// let alpha = (2.0f64 / 3.0).sqrt();
/// assert!(is_strictly_subgaussian_quartic(alpha, 1.0 / 3.0));
/// assert!(!is_strictly_subgaussian_quartic(alpha - 1e-9, 1.0 / 3.0));
/// ```
pub fn is_characteristic(alpha: f64, beta: f64) -> bool {
    if !alpha.is_finite() || !beta.is_finite() {
        return false;
    }
    if !(-BOUNDARY_TOL..=0.5 + BOUNDARY_TOL).contains(&beta) {
        return false;
    }
    let b = beta.clamp(0.0, 0.5);
    if b <= 1.0 / 3.0 + BOUNDARY_TOL {
        let lo = lower_boundary(b);
        let hi = 3.0 * b + 1.0;
        if alpha >= lo - BOUNDARY_TOL && alpha <= hi + BOUNDARY_TOL {
            return true;
        }
    }
    if b >= 1.0 / 3.0 - BOUNDARY_TOL {
        let lo = lower_boundary(b);
        let hi = upper_boundary_region2(b);
        if alpha >= lo - BOUNDARY_TOL && alpha <= hi + BOUNDARY_TOL {
            return true;
        }
    }
    false
}

/// Strict subgaussianity of the quartic family: admissible and
/// alpha >= sqrt(2 beta).
pub fn is_strictly_subgaussian_quartic(alpha: f64, beta: f64) -> bool {
    if !is_characteristic(alpha, beta) {
        return false;
    }
    if beta < -BOUNDARY_TOL {
        return false;
    }
    alpha >= sqrt_clamped(2.0 * beta) - BOUNDARY_TOL
}

/// The literal union of the three strict-subgaussian regions (6.4)-(6.6);
/// serves as an independent route for the equivalence test.
pub fn strict_region_literal(alpha: f64, beta: f64) -> bool {
    if !alpha.is_finite() || !beta.is_finite() || beta < -BOUNDARY_TOL {
        return false;
    }
    let b = beta.max(0.0);
    let root = sqrt_clamped(2.0 * b);
    let in_64 = b <= 1.0 / 3.0 + BOUNDARY_TOL
        && alpha >= root - BOUNDARY_TOL
        && alpha <= 3.0 * b + 1.0 + BOUNDARY_TOL;
    let in_65 = (1.0 / 3.0 - BOUNDARY_TOL..=beta0() + BOUNDARY_TOL).contains(&b)
        && alpha >= root - BOUNDARY_TOL
        && alpha <= upper_boundary_region2(b) + BOUNDARY_TOL;
    let in_66 = (beta0() - BOUNDARY_TOL..=0.5 + BOUNDARY_TOL).contains(&b)
        && alpha >= lower_boundary(b) - BOUNDARY_TOL
        && alpha <= upper_boundary_region2(b) + BOUNDARY_TOL;
    in_64 || in_65 || in_66
}

/// Coefficients (c0, c2, c4) of the density
/// p(x) = (c0 + c2 x^2 + c4 x^4) phi(x) for an admissible (alpha, beta).
pub fn quartic_density_coeffs(alpha: f64, beta: f64) -> Result<(f64, f64, f64)> {
    if !is_characteristic(alpha, beta) {
        return Err(Error::NotACharacteristicFunction { alpha, beta });
    }
    Ok((1.0 - alpha + 3.0 * beta, alpha - 6.0 * beta, beta))
}

/// Largest admissible |b| for w = a + bi so that the quartic with zeros at
/// ±1/w, ±1/conj(w) is a strictly subgaussian characteristic function.
///
/// For 0 < a <= a_0 the bound is the pi/8 cone b = a/(sqrt2 + 1); beyond a_0
/// it is the unique root of 2(A+B)^2 - (A+B) sqrt(1 - 2(A+B)^2) = A - B in B,
/// found by bisection (the left side is increasing in B).
pub fn admissible_b_max(a: f64) -> Result<f64> {
    if !(a > 0.0) || a > a_max() + BOUNDARY_TOL {
        return Err(Error::OutOfDomain(a, "(0, 2^{-1/4}]"));
    }
    let s2 = 2f64.sqrt();
    if a <= a0() {
        return Ok(a / (s2 + 1.0));
    }
    let big_a = a * a;
    let hi = (1.0 / s2 - big_a).max(0.0);
    let g = |b_sq: f64| {
        let s = big_a + b_sq;
        2.0 * s * s - s * sqrt_clamped(1.0 - 2.0 * s * s) - (big_a - b_sq)
    };
    let mut lo_b = 0.0f64;
    let mut hi_b = hi;
    if g(hi_b) < 0.0 {
        return Ok(hi_b.sqrt());
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo_b + hi_b);
        if g(mid) <= 0.0 {
            lo_b = mid;
        } else {
            hi_b = mid;
        }
    }
    Ok((0.5 * (lo_b + hi_b)).sqrt())
}

/// Transform handle of the quartic family with given parameters. The
/// parameters must be admissible after the gamma rescale.
pub fn quartic_handle(params: QuarticParams) -> Result<TransformHandle> {
    let (ar, br) = params.rescaled();
    if !is_characteristic(ar, br) {
        return Err(Error::NotACharacteristicFunction { alpha: ar, beta: br });
    }
    let QuarticParams { alpha, beta, gamma } = params;
    let k = move |t: f64| {
        let t2 = t * t;
        0.5 * gamma * t2 + (alpha * t2 + beta * t2 * t2).ln_1p()
    };
    let f = move |z: Complex64| -> Result<Complex64> {
        let w = -0.5 * gamma * z * z;
        if w.re > OVERFLOW_EXPONENT {
            return Err(Error::OverflowGuard(w.re));
        }
        let z2 = z * z;
        Ok(w.exp() * (Complex64::new(1.0, 0.0) - alpha * z2 + beta * z2 * z2))
    };
    TransformHandle::from_parts(params.variance(), true, k, f)
}

/// Quartic family with prescribed zero z (Re z > 0): w = 1/z yields
/// alpha = 2(a^2 - b^2), beta = (a^2 + b^2)^2, variance gamma + 4(a^2 - b^2).
pub fn quartic_from_zero(z: Complex64, gamma: f64) -> Result<(QuarticParams, TransformHandle)> {
    if z.re == 0.0 {
        return Err(Error::ZeroOnImaginaryAxis(format!("{z}")));
    }
    if z.re < 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::OutOfDomain(z.re, "Re(z) > 0"));
    }
    if !(gamma > 0.0) {
        return Err(Error::NegativeGamma(gamma));
    }
    let w = Complex64::new(1.0, 0.0) / z;
    let (a, b) = (w.re, w.im);
    let params = QuarticParams::new(
        2.0 * (a * a - b * b),
        (a * a + b * b) * (a * a + b * b),
        gamma,
    );
    // The handle is a transform of a (possibly signed) measure even outside
    // the admissible region; construct it directly so callers can inspect
    // the inadmissible case too.
    let QuarticParams { alpha, beta, gamma } = params;
    let k = move |t: f64| {
        let t2 = t * t;
        0.5 * gamma * t2 + (alpha * t2 + beta * t2 * t2).ln_1p()
    };
    let f = move |zz: Complex64| -> Result<Complex64> {
        let wexp = -0.5 * gamma * zz * zz;
        if wexp.re > OVERFLOW_EXPONENT {
            return Err(Error::OverflowGuard(wexp.re));
        }
        let z2 = zz * zz;
        Ok(wexp.exp() * (Complex64::new(1.0, 0.0) - alpha * z2 + beta * z2 * z2))
    };
    let handle = TransformHandle::from_parts(params.variance(), true, k, f)?;
    Ok((params, handle))
}

/// Names of the inequality constraints bounding the quartic regions,
/// with signed slack (>= 0 means satisfied). Used by the classify report.
pub fn constraint_slacks(alpha: f64, beta: f64) -> Vec<(&'static str, f64)> {
    let b = beta.clamp(0.0, 0.5);
    let in_first = beta <= 1.0 / 3.0;
    let mut v = vec![
        ("beta>=0", beta),
        ("beta<=1/2", 0.5 - beta),
        (
            if in_first { "6.2-lower" } else { "6.3-lower" },
            alpha - lower_boundary(b),
        ),
        (
            if in_first { "6.2-upper" } else { "6.3-upper" },
            if in_first {
                3.0 * b + 1.0 - alpha
            } else {
                upper_boundary_region2(b) - alpha
            },
        ),
        ("alpha=sqrt(2beta)", alpha - sqrt_clamped(2.0 * beta)),
    ];
    v.sort_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap());
    v
}

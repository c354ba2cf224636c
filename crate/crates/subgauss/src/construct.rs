//! Product distributions with prescribed characteristic-function zeros in
//! the pi/8 cone: X = sum X_n where each X_n is a quartic-family variable
//! whose transform vanishes exactly at ±z_n, ±conj(z_n), with Gaussian
//! coefficients gamma_n = (Lambda - 4) a_n^2 + (Lambda + 4) b_n^2 so that
//! Var(X) = Lambda sum |w_n|^2.

use std::io::Write;

use num_complex::Complex64;

use crate::charfn::ZeroSet;
use crate::error::{Error, Result};
use crate::numerics::fmt_g12;
use crate::quartic::{self, QuarticParams};
use crate::transform::{TransformHandle, OVERFLOW_EXPONENT};

/// Half-angle of the admissible cone.
pub const CONE_ANGLE: f64 = std::f64::consts::PI / 8.0;

/// One factor of the product: the zero, its reciprocal data and the chosen
/// Gaussian coefficient.
#[derive(Debug, Clone)]
pub struct Component {
    pub zero: Complex64,
    pub w: Complex64,
    pub gamma: f64,
    pub params: QuarticParams,
    pub variance: f64,
}

/// The assembled product distribution.
#[derive(Debug, Clone)]
pub struct ProductDistribution {
    pub components: Vec<Component>,
    pub lambda: f64,
    pub total_variance: f64,
}

/// Smallest admissible variance multiplier: 4 + 1/a_0^2 (~5.8307). The
/// worst case b_n = 0 in gamma_n >= a_n^2/a_0^2 forces Lambda - 4 >= 1/a_0^2.
pub fn lambda_min() -> f64 {
    4.0 + 1.0 / (quartic::a0() * quartic::a0())
}

impl ProductDistribution {
    /// Component table as CSV: `n,re_z,im_z,gamma_n,var_n`.
    pub fn write_components_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "n,re_z,im_z,gamma_n,var_n")?;
        for (i, c) in self.components.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{}",
                i + 1,
                fmt_g12(c.zero.re),
                fmt_g12(c.zero.im),
                fmt_g12(c.gamma),
                fmt_g12(c.variance)
            )?;
        }
        Ok(())
    }
}

/// Build the product distribution over a zero set with variance multiplier
/// `lambda >= lambda_min()`.
///
/// Every zero must satisfy |Arg(z)| <= pi/8. The returned handle is the
/// product transform f(z) = prod f_n(z); its variance is
/// lambda * sum |w_n|^2 and each factor is strictly subgaussian.
pub fn build_from_zero_set(
    zeros: &ZeroSet,
    lambda: f64,
) -> Result<(ProductDistribution, TransformHandle)> {
    if zeros.is_empty() {
        return Err(Error::EmptyZeroSet);
    }
    let bound = lambda_min();
    if !(lambda >= bound - 1e-12) {
        return Err(Error::LambdaTooSmall { lambda, bound });
    }
    let tan_cone = CONE_ANGLE.tan();
    let mut components = Vec::with_capacity(zeros.len());
    for d in zeros.data() {
        let angle = d.z.im.abs().atan2(d.z.re);
        if d.z.re <= 0.0 || angle > CONE_ANGLE + 1e-12 {
            return Err(Error::AngleViolation {
                zero: format!("{}", d.z),
                angle,
            });
        }
        let (a, b) = (d.w.re, d.w.im);
        debug_assert!(a > 0.0 && b.abs() <= a * tan_cone * (1.0 + 1e-9));
        let gamma = (lambda - 4.0) * a * a + (lambda + 4.0) * b * b;
        debug_assert!(gamma >= a * a / (quartic::a0() * quartic::a0()) - 1e-12);
        let params = QuarticParams::new(d.alpha, d.beta, gamma);
        let variance = 4.0 * (a * a - b * b) + gamma;
        // Each rescaled factor must be a strictly subgaussian quartic.
        let (ar, br) = params.rescaled();
        if !quartic::is_strictly_subgaussian_quartic(ar, br) {
            return Err(Error::NumericFailure(format!(
                "component at zero {} fails the strict quartic test after rescale",
                d.z
            )));
        }
        components.push(Component {
            zero: d.z,
            w: d.w,
            gamma,
            params,
            variance,
        });
    }
    let total_variance: f64 = components.iter().map(|c| c.variance).sum();
    let dist = ProductDistribution {
        components,
        lambda,
        total_variance,
    };
    let handle = product_handle(&dist)?;
    Ok((dist, handle))
}

fn product_handle(dist: &ProductDistribution) -> Result<TransformHandle> {
    let factors: Vec<(f64, f64, f64)> = dist
        .components
        .iter()
        .map(|c| (c.gamma, c.params.alpha, c.params.beta))
        .collect();
    let gamma_total: f64 = factors.iter().map(|f| f.0).sum();
    let k_factors = factors.clone();
    let k = move |t: f64| {
        let t2 = t * t;
        k_factors
            .iter()
            .map(|&(g, a, b)| 0.5 * g * t2 + (a * t2 + b * t2 * t2).ln_1p())
            .sum()
    };
    let f = move |z: Complex64| -> Result<Complex64> {
        let w = -0.5 * gamma_total * z * z;
        if w.re > OVERFLOW_EXPONENT {
            return Err(Error::OverflowGuard(w.re));
        }
        let z2 = z * z;
        let mut acc = w.exp();
        for &(_, a, b) in &factors {
            acc *= Complex64::new(1.0, 0.0) - a * z2 + b * z2 * z2;
        }
        Ok(acc)
    };
    TransformHandle::from_parts(dist.total_variance, true, k, f)
}

//! Analytic transform handles: paired evaluators for the Laplace transform
//! L(t) = E exp(tX) (kept in log space as K = log L) and the characteristic
//! function f(z) = E exp(izX), together with the declared variance.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::GriddedDensity;
use crate::numerics::log_sum_exp;

/// Exponent (natural-log units) beyond which evaluation reports overflow.
pub const OVERFLOW_EXPONENT: f64 = 700.0;

type LogLaplaceFn = dyn Fn(f64) -> f64 + Send + Sync;
type CharFn = dyn Fn(Complex64) -> Result<Complex64> + Send + Sync;

/// Immutable handle on a distribution's analytic transforms.
///
/// Invariants checked at construction: K(0) = 0, L(t) = L(-t) for symmetric
/// handles, and f(-it) = L(t) at probed real t.
#[derive(Clone)]
pub struct TransformHandle {
    variance: f64,
    symmetric: bool,
    log_laplace: Arc<LogLaplaceFn>,
    char_fn: Arc<CharFn>,
}

impl std::fmt::Debug for TransformHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransformHandle")
            .field("variance", &self.variance)
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

impl TransformHandle {
    /// Assemble a handle from evaluators and validate the construction
    /// invariants (relative tolerance 1e-12 at the probe points).
    pub fn from_parts(
        variance: f64,
        symmetric: bool,
        log_laplace: impl Fn(f64) -> f64 + Send + Sync + 'static,
        char_fn: impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Result<Self> {
        let h = TransformHandle {
            variance,
            symmetric,
            log_laplace: Arc::new(log_laplace),
            char_fn: Arc::new(char_fn),
        };
        h.validate()?;
        Ok(h)
    }

    fn validate(&self) -> Result<()> {
        let k0 = (self.log_laplace)(0.0);
        if k0.abs() > 1e-12 {
            return Err(Error::NumericFailure(format!("K(0) = {k0}, expected 0")));
        }
        if self.symmetric {
            for &t in &[0.25, 0.75, 1.5, 3.0] {
                let kp = (self.log_laplace)(t);
                let km = (self.log_laplace)(-t);
                if (kp - km).abs() > 1e-12 * (1.0 + kp.abs()) {
                    return Err(Error::NumericFailure(format!(
                        "symmetry violated at t = {t}: K({t}) = {kp}, K(-{t}) = {km}"
                    )));
                }
            }
        }
        for &t in &[0.3, 1.1] {
            let l = (self.log_laplace)(t).exp();
            let f = (self.char_fn)(Complex64::new(0.0, -t))?;
            if (f - l).norm() > 1e-12 * (1.0 + l.abs()) {
                return Err(Error::NumericFailure(format!(
                    "f(-it) = {f} disagrees with L({t}) = {l}"
                )));
            }
        }
        Ok(())
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// K(t) = log E exp(tX).
    pub fn log_laplace(&self, t: f64) -> f64 {
        (self.log_laplace)(t)
    }

    /// L(t) = E exp(tX); errors when the value overflows doubles.
    pub fn laplace(&self, t: f64) -> Result<f64> {
        let k = self.log_laplace(t);
        if !k.is_finite() {
            return Err(Error::TransformDiverged(t));
        }
        if k > OVERFLOW_EXPONENT {
            return Err(Error::OverflowGuard(k));
        }
        Ok(k.exp())
    }

    /// f(z) = E exp(izX).
    pub fn char_fn(&self, z: Complex64) -> Result<Complex64> {
        (self.char_fn)(z)
    }

    /// Psi(t) = L(t) exp(-t^2/2), the Gaussian-relative transform.
    pub fn psi(&self, t: f64) -> f64 {
        (self.log_laplace(t) - 0.5 * t * t).exp()
    }

    /// Handle of lambda * X.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::ConfigInvalid(format!("scale lambda = {lambda}")));
        }
        let k = Arc::clone(&self.log_laplace);
        let f = Arc::clone(&self.char_fn);
        TransformHandle::from_parts(
            lambda * lambda * self.variance,
            self.symmetric,
            move |t| k(lambda * t),
            move |z| f(lambda * z),
        )
    }

    /// Synthesize the density by Fourier inversion of f on a symmetric grid
    /// of `n` points with half-width `half`.
    ///
    /// Requires an integrable (decaying) characteristic function; handles of
    /// discrete laws are rejected.
    pub fn density_grid(&self, n: usize, half: f64) -> Result<GriddedDensity> {
        let n = fft::next_pow2(n.max(16));
        let step = 2.0 * half / n as f64;
        let dt = std::f64::consts::TAU / (n as f64 * step);

        // Decay check near the Nyquist frequency.
        let t_edge = dt * (n / 2) as f64;
        for &frac in &[1.0, 0.9, 0.8] {
            let f = self.char_fn(Complex64::new(frac * t_edge, 0.0))?;
            if f.norm() > 1e-10 {
                return Err(Error::NumericFailure(format!(
                    "characteristic function does not decay (|f({:.3})| = {:.3e}); \
                     no density can be synthesized on this grid",
                    frac * t_edge,
                    f.norm()
                )));
            }
        }

        let mut buf: Vec<Complex64> = Vec::with_capacity(n);
        for j in 0..n {
            let k = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
            let t = dt * k as f64;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            buf.push(self.char_fn(Complex64::new(t, 0.0))? * sign);
        }
        fft::forward(&mut buf);
        let scale = 1.0 / (n as f64 * step);
        let values: Vec<f64> = buf.iter().map(|c| (c.re * scale).max(0.0)).collect();
        let mut d = GriddedDensity::new(-half, step, values)?;
        let drift = (d.mass() - 1.0).abs();
        if drift > 1e-6 {
            return Err(Error::NumericFailure(format!(
                "inverted density mass drifts by {drift:.3e}"
            )));
        }
        d.normalize();
        Ok(d)
    }
}

/// exp(w) scaled by a complex coefficient, computed exponent-first so that
/// huge coefficients paired with huge negative exponents stay finite.
pub(crate) fn exp_scaled(coef: Complex64, w: Complex64) -> Result<Complex64> {
    if coef == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mag = coef.norm();
    let total = w.re + mag.ln();
    if total > OVERFLOW_EXPONENT {
        return Err(Error::OverflowGuard(total));
    }
    let unit = coef / mag;
    Ok(unit * Complex64::from_polar(total.exp(), w.im))
}

/// Numeric transform built from a sampled density: K(t) is the trapezoid
/// log-Laplace integral, and `t_trust` bounds the |t| range on which the
/// grid's tail truncation stays below a 1e-9 contribution.
pub struct GridTransform {
    pub handle: TransformHandle,
    pub t_trust: f64,
}

/// Build a numeric handle from a gridded density.
pub fn handle_from_density(d: &GriddedDensity, t_cap: f64) -> Result<GridTransform> {
    let m = d.moments();
    if (m.mass - 1.0).abs() > 1e-6 {
        return Err(Error::NotStandardized(format!("mass = {}", m.mass)));
    }
    let xs: Vec<f64> = (0..d.len()).map(|i| d.x_at(i)).collect();
    let log_w: Vec<f64> = {
        let n = d.len();
        d.values()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                (v * w * d.step()).ln()
            })
            .collect()
    };
    let mean = m.mean;
    let variance = m.variance;
    let symmetric = grid_is_symmetric(d);

    let xs_k = xs.clone();
    let lw_k = log_w.clone();
    // normalize by the discrete mass so K(0) = 0 exactly
    let log_mass = log_sum_exp(log_w.iter().copied());
    let k = move |t: f64| -> f64 {
        log_sum_exp(
            xs_k.iter()
                .zip(&lw_k)
                .map(move |(&x, &lw)| t * (x - mean) + lw)
                .collect::<Vec<_>>()
                .into_iter(),
        ) - log_mass
    };

    let xs_f = xs;
    let lw_f = log_w;
    let f = move |z: Complex64| -> Result<Complex64> {
        // E exp(iz(X - mean)) with the max-exponent factored out.
        let max_e = xs_f
            .iter()
            .zip(&lw_f)
            .map(|(&x, &lw)| -z.im * (x - mean) + lw)
            .fold(f64::NEG_INFINITY, f64::max);
        if max_e > OVERFLOW_EXPONENT {
            return Err(Error::OverflowGuard(max_e));
        }
        if !max_e.is_finite() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &lw) in xs_f.iter().zip(&lw_f) {
            let e = -z.im * (x - mean) + lw - max_e;
            if e > -745.0 {
                acc += Complex64::from_polar(e.exp(), z.re * (x - mean));
            }
        }
        Ok(acc * (max_e - log_mass).exp())
    };

    let handle = TransformHandle::from_parts(variance, symmetric, k, f)?;

    // Trust radius: largest probe t at which the grid-edge integrand stays
    // below 1e-9 of the total.
    let mut t_trust = 0.0f64;
    let edge_ok = |t: f64| {
        let k_t = handle.log_laplace(t);
        let i = if t >= 0.0 { d.len() - 1 } else { 0 };
        let edge = t * (d.x_at(i) - mean) + (d.values()[i] * d.step()).max(f64::MIN_POSITIVE).ln();
        edge < k_t + (1e-9f64).ln()
    };
    let mut t = 0.25;
    while t <= t_cap {
        if edge_ok(t) && edge_ok(-t) {
            t_trust = t;
        } else {
            break;
        }
        t += 0.25;
    }
    Ok(GridTransform { handle, t_trust })
}

fn grid_is_symmetric(d: &GriddedDensity) -> bool {
    if !d.is_symmetric_about_zero() {
        return false;
    }
    let n = d.len();
    let scale = d.values().iter().cloned().fold(0.0, f64::max);
    // values[i] vs values at the mirrored index; skip the unmatched endpoint.
    let offset = if (d.x_min() + d.x_max()).abs() < 1e-9 { 0 } else { 1 };
    for i in offset..n {
        let j = n - 1 - i + offset;
        if j >= n {
            continue;
        }
        if (d.values()[i] - d.values()[j]).abs() > 1e-9 * scale {
            return false;
        }
    }
    true
}

/// Handle of a centered Gaussian with the given variance.
pub fn gaussian_handle(sigma_sq: f64) -> Result<TransformHandle> {
    if sigma_sq < 0.0 {
        return Err(Error::NegativeGamma(sigma_sq));
    }
    TransformHandle::from_parts(
        sigma_sq,
        true,
        move |t| 0.5 * sigma_sq * t * t,
        move |z| {
            let w = -0.5 * sigma_sq * z * z;
            if w.re > OVERFLOW_EXPONENT {
                return Err(Error::OverflowGuard(w.re));
            }
            Ok(w.exp())
        },
    )
}

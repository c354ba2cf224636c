//! Laplace transforms with periodic components: trig-series densities with
//! Psi(t) = 1 - c P(t), sin^m examples, theta/Poisson constructions, and the
//! lattice identities E exp(mhX) = exp((mh)^2/2).
//!
//! Components are represented in rescaled units where the nominal period is
//! 2 pi; the minimal period of the synthesized transform is reported per
//! component (pi for even sin powers).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{default_half_width, GriddedDensity, DEFAULT_GRID_POINTS};
use crate::numerics::standard_normal_density;
use crate::transform::{exp_scaled, TransformHandle};

/// Truncation of lattice sums sum_{|m| <= M} w(t + 2 pi m).
const LATTICE_TERMS: i64 = 20;
/// Truncation of Fourier sums over k.
const FOURIER_TERMS: usize = 40;

/// A trigonometric component P(t) = a_0 + sum_k (a_k cos kt + b_k sin kt)
/// in 2 pi units, entering Psi(t) = 1 - c P(t).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodicComponent {
    /// Cosine coefficients a_0, a_1, ..., a_K.
    pub cos_coeffs: Vec<f64>,
    /// Sine coefficients b_1, ..., b_K.
    pub sin_coeffs: Vec<f64>,
}

impl PeriodicComponent {
    pub fn new(cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Self {
        PeriodicComponent {
            cos_coeffs,
            sin_coeffs,
        }
    }

    fn a(&self, k: usize) -> f64 {
        self.cos_coeffs.get(k).copied().unwrap_or(0.0)
    }

    fn b(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.sin_coeffs.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    fn k_max(&self) -> usize {
        (self.cos_coeffs.len().max(self.sin_coeffs.len() + 1)).saturating_sub(1)
    }

    /// P(t) by direct summation.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = self.a(0);
        for k in 1..=self.k_max() {
            let kt = k as f64 * t;
            acc += self.a(k) * kt.cos() + self.b(k) * kt.sin();
        }
        acc
    }

    /// Minimal period of P: 2 pi / gcd of the active harmonics.
    pub fn minimal_period(&self) -> f64 {
        let mut g: usize = 0;
        for k in 1..=self.k_max() {
            if self.a(k).abs() > 1e-15 || self.b(k).abs() > 1e-15 {
                g = gcd(g, k);
            }
        }
        if g == 0 {
            std::f64::consts::TAU
        } else {
            std::f64::consts::TAU / g as f64
        }
    }

    /// Coefficients scaled by e^{k^2/2}, computed exponent-first so that a
    /// zero coefficient at large k never produces inf * 0.
    pub fn gaussian_weighted_coeffs(&self) -> (Vec<f64>, Vec<f64>) {
        let kmax = self.k_max();
        let weight = |k: usize, v: f64| {
            if v == 0.0 {
                0.0
            } else {
                v.signum() * ((k * k) as f64 / 2.0 + v.abs().ln()).exp()
            }
        };
        let wa = (0..=kmax).map(|k| weight(k, self.a(k))).collect();
        let wb = (1..=kmax).map(|k| weight(k, self.b(k))).collect();
        (wa, wb)
    }

    /// Moment-constraint residuals (P(0), P'(0), P''(0)) in coefficient
    /// form: a_0 + sum a_k, sum k b_k, sum k^2 a_k.
    pub fn moment_residuals(&self) -> (f64, f64, f64) {
        let mut s0 = self.a(0);
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for k in 1..=self.k_max() {
            s0 += self.a(k);
            s1 += k as f64 * self.b(k);
            s2 += (k * k) as f64 * self.a(k);
        }
        (s0, s1, s2)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if a == 0 {
        b
    } else {
        gcd(b % a, a)
    }
}

/// Largest |c| for which the synthesized density is guaranteed nonnegative:
/// c_max = 1 / (|a_0| + sum_k e^{k^2/2} (|a_k| + |b_k|)).
pub fn max_admissible_c(p: &PeriodicComponent) -> Result<f64> {
    let (wa, wb) = p.gaussian_weighted_coeffs();
    let s = wa[0].abs()
        + wa[1..].iter().map(|v| v.abs()).sum::<f64>()
        + wb.iter().map(|v| v.abs()).sum::<f64>();
    if s == 0.0 {
        return Err(Error::AllZeroCoefficients);
    }
    if !s.is_finite() {
        return Ok(0.0);
    }
    Ok(1.0 / s)
}

/// Exact Fourier coefficients of sin^m t (binomial expansion through
/// complex exponentials). Even m produces pure cosine series, odd m pure
/// sine series.
///
/// ```
/// use subgauss::periodic::sin_power_fourier;
/// let p = sin_power_fourier(4); // (3 - 4 cos 2t + cos 4t)/8
/// assert_eq!(p.cos_coeffs, vec![0.375, 0.0, -0.5, 0.0, 0.125]);
/// ```
pub fn sin_power_fourier(m: usize) -> PeriodicComponent {
    assert!(m >= 3, "sin^m components need m >= 3");
    // sin^m t = (2i)^{-m} sum_k C(m,k) (-1)^{m-k} e^{i(2k-m)t}
    let mut coeff: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); m + 1];
    let inv_2i_m =
        Complex64::new(0.0, 0.5).powu(m as u32) * if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    // (1/(2i))^m = (-i/2)^m = (0.5 i)^m * (-1)^m
    let mut binom = 1.0f64;
    for k in 0..=m {
        let sign = if (m - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        let j = 2 * k as i64 - m as i64;
        let c = inv_2i_m * binom * sign;
        if j >= 0 {
            coeff[j as usize] += c;
        } else {
            coeff[(-j) as usize] += c.conj();
        }
        binom = binom * (m - k) as f64 / (k + 1) as f64;
    }
    // coeff[j] now carries e^{ijt} plus the folded conj(e^{-ijt}) part, so
    // a_j + i(-b_j) is read off directly.
    let mut cos_coeffs = vec![0.0; m + 1];
    let mut sin_coeffs = vec![0.0; m];
    cos_coeffs[0] = coeff[0].re;
    for j in 1..=m {
        cos_coeffs[j] = coeff[j].re;
        sin_coeffs[j - 1] = -coeff[j].im;
    }
    PeriodicComponent::new(cos_coeffs, sin_coeffs)
}

/// Result of synthesizing a trig-series density.
pub struct TrigDensity {
    pub density: GriddedDensity,
    pub handle: TransformHandle,
    pub component: PeriodicComponent,
    pub c: f64,
    /// Minimal period h of Psi.
    pub period: f64,
}

/// Synthesize the density p(x) = phi(x) [1 - c (a_0 + sum e^{k^2/2}
/// (a_k cos kx + b_k sin kx))] with transform L(t) = (1 - c P(t)) e^{t^2/2},
/// on the default grid.
pub fn trig_density(p: &PeriodicComponent, c: f64) -> Result<TrigDensity> {
    trig_density_on(p, c, DEFAULT_GRID_POINTS, default_half_width(1.0))
}

/// As [`trig_density`] with explicit grid resolution.
pub fn trig_density_on(
    p: &PeriodicComponent,
    c: f64,
    points: usize,
    half: f64,
) -> Result<TrigDensity> {
    let (m0, m1, m2) = p.moment_residuals();
    let tol = 1e-9;
    if m0.abs() > tol || m1.abs() > tol || m2.abs() > tol {
        return Err(Error::MomentConstraintViolated(format!(
            "a0 + sum a_k = {m0:.3e}, sum k b_k = {m1:.3e}, sum k^2 a_k = {m2:.3e}"
        )));
    }
    let c_max = max_admissible_c(p)?;
    if c.abs() > c_max * (1.0 + 1e-12) {
        return Err(Error::CTooLarge { c, c_max });
    }

    let (wa, wb) = p.gaussian_weighted_coeffs();
    let weighted = move |x: f64| {
        let mut acc = wa[0];
        for (k, &a) in wa.iter().enumerate().skip(1) {
            if a != 0.0 {
                acc += a * (k as f64 * x).cos();
            }
        }
        for (i, &b) in wb.iter().enumerate() {
            if b != 0.0 {
                acc += b * ((i + 1) as f64 * x).sin();
            }
        }
        acc
    };
    let step = 2.0 * half / points as f64;
    let density = GriddedDensity::from_fn(-half, step, points, |x| {
        standard_normal_density(x) * (1.0 - c * weighted(x))
    })?;

    let handle = periodic_handle(p, c)?;

    // Verify the Laplace transform of the synthesized density against the
    // analytic form at a few probe points.
    for &t in &[0.5, 1.5] {
        let numeric = density.integrate(|x| (t * x).exp());
        let analytic = handle.log_laplace(t).exp();
        if (numeric - analytic).abs() > 1e-8 * analytic.abs() {
            return Err(Error::NumericFailure(format!(
                "Laplace mismatch at t = {t}: grid {numeric} vs analytic {analytic}"
            )));
        }
    }
    let m = density.moments();
    if (m.mass - 1.0).abs() > 1e-8 || m.mean.abs() > 1e-8 || (m.variance - 1.0).abs() > 1e-6 {
        return Err(Error::NumericFailure(format!(
            "moments off: mass {} mean {} var {}",
            m.mass, m.mean, m.variance
        )));
    }

    Ok(TrigDensity {
        density,
        handle,
        component: p.clone(),
        c,
        period: p.minimal_period(),
    })
}

/// Transform handle for L(t) = (1 - c P(t)) e^{t^2/2}.
pub fn periodic_handle(p: &PeriodicComponent, c: f64) -> Result<TransformHandle> {
    let symmetric = p.sin_coeffs.iter().all(|&b| b.abs() < 1e-15);
    let pk = p.clone();
    let k = move |t: f64| {
        // ln_1p keeps the tiny periodic correction cancellation-free.
        let u = -c * pk.eval(t);
        0.5 * t * t + if u > -1.0 { u.ln_1p() } else { f64::NEG_INFINITY }
    };
    let pf = p.clone();
    let f = move |z: Complex64| -> Result<Complex64> {
        let neg_half_z2 = -0.5 * z * z;
        let mut acc = exp_scaled(Complex64::new(1.0 - c * pf.a(0), 0.0), neg_half_z2)?;
        for kk in 1..=pf.k_max() {
            let (a, b) = (pf.a(kk), pf.b(kk));
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let kz = kk as f64 * z;
            let plus = Complex64::new(a, b) * 0.5;
            let minus = Complex64::new(a, -b) * 0.5;
            acc -= c * exp_scaled(plus, neg_half_z2 + kz)?;
            acc -= c * exp_scaled(minus, neg_half_z2 - kz)?;
        }
        Ok(acc)
    };
    TransformHandle::from_parts(1.0, symmetric, k, f)
}

/// Gaussian window of scale sigma > 1 entering the theta construction
/// Psi(t) = 1 - c sin^4(t) Q(t), Q(t) = sum_m w(t + 2 pi m).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThetaComponent {
    pub sigma: f64,
}

impl ThetaComponent {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 1.0) {
            return Err(Error::SigmaOutOfRange(sigma));
        }
        Ok(ThetaComponent { sigma })
    }

    /// Window w(t) = exp(-t^2 / 2 sigma^2) / (sigma sqrt(2 pi)).
    pub fn window(&self, t: f64) -> f64 {
        standard_normal_density(t / self.sigma) / self.sigma
    }

    /// Fourier transform hat w(k) = exp(-sigma^2 k^2 / 2).
    pub fn window_hat(&self, k: f64) -> f64 {
        (-0.5 * self.sigma * self.sigma * k * k).exp()
    }

    /// Lattice sum Q(t) = sum_{|m| <= M} w(t + 2 pi m).
    pub fn lattice_q(&self, t: f64) -> f64 {
        (-LATTICE_TERMS..=LATTICE_TERMS)
            .map(|m| self.window(t + std::f64::consts::TAU * m as f64))
            .sum()
    }

    /// Poisson-side Q(t) = (1/2pi) [hat w(0) + 2 sum hat w(k) cos(kt)].
    pub fn fourier_q(&self, t: f64) -> f64 {
        let mut acc = self.window_hat(0.0);
        for k in 1..=FOURIER_TERMS {
            acc += 2.0 * self.window_hat(k as f64) * (k as f64 * t).cos();
        }
        acc / std::f64::consts::TAU
    }
}

/// Psi(t) for the theta construction via the lattice route.
pub fn theta_psi_lattice(t: f64, theta: &ThetaComponent, c: f64) -> f64 {
    1.0 - c * t.sin().powi(4) * theta.lattice_q(t)
}

/// Psi(t) for the theta construction via the Fourier route.
pub fn theta_psi_fourier(t: f64, theta: &ThetaComponent, c: f64) -> f64 {
    1.0 - c * t.sin().powi(4) * theta.fourier_q(t)
}

/// Psi(t) = 1 - c sin^4(t) Q(t), computed both ways and cross-checked to
/// 1e-10 (Poisson summation makes the two routes equal).
pub fn theta_psi(t: f64, theta: &ThetaComponent, c: f64) -> Result<f64> {
    let lattice = theta_psi_lattice(t, theta, c);
    let fourier = theta_psi_fourier(t, theta, c);
    if (lattice - fourier).abs() > 1e-10 {
        return Err(Error::NumericFailure(format!(
            "Poisson mismatch at t = {t}: lattice {lattice} vs fourier {fourier}"
        )));
    }
    Ok(fourier)
}

/// Fourier coefficients of P(t) = sin^4(t) Q(t) for the theta window:
/// 16 pi a_j = 6 hat w(|j|) - 4 hat w(|j-2|) - 4 hat w(j+2)
///           + hat w(|j-4|) + hat w(j+4)   (j >= 1),
/// 16 pi a_0 = 3 hat w(0) - 4 hat w(2) + hat w(4).
pub fn theta_component_fourier(theta: &ThetaComponent, k_max: usize) -> PeriodicComponent {
    let wh = |k: i64| theta.window_hat(k as f64);
    let mut cos_coeffs = vec![0.0; k_max + 1];
    cos_coeffs[0] = (3.0 * wh(0) - 4.0 * wh(2) + wh(4)) / (16.0 * std::f64::consts::PI);
    for j in 1..=k_max as i64 {
        cos_coeffs[j as usize] = (6.0 * wh(j)
            - 4.0 * wh((j - 2).abs())
            - 4.0 * wh(j + 2)
            + wh((j - 4).abs())
            + wh(j + 4))
            / (16.0 * std::f64::consts::PI);
    }
    PeriodicComponent::new(cos_coeffs, vec![])
}

/// Lattice identity report: per-m deviations |L(mh) e^{-(mh)^2/2} - 1| and
/// the Psi-periodicity defect max |Psi(t + h) - Psi(t)| over a probe grid.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub period: f64,
    pub deviations: Vec<f64>,
    pub psi_periodicity_defect: f64,
}

pub fn lattice_identity_check(
    h: &TransformHandle,
    period: f64,
    m_max: usize,
) -> Result<LatticeReport> {
    if !(period > 0.0) {
        return Err(Error::ConfigInvalid(format!("period = {period}")));
    }
    let mut deviations = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let t = m as f64 * period;
        let k = h.log_laplace(t);
        if !k.is_finite() {
            return Err(Error::TransformDiverged(t));
        }
        let log_ratio = k - 0.5 * t * t;
        if log_ratio > 700.0 {
            return Err(Error::OverflowGuard(log_ratio));
        }
        deviations.push((log_ratio.exp() - 1.0).abs());
    }
    let mut defect = 0.0f64;
    let probes = 2001;
    for i in 0..probes {
        let t = -10.0 + 20.0 * i as f64 / (probes - 1) as f64;
        defect = defect.max((h.psi(t + period) - h.psi(t)).abs());
    }
    Ok(LatticeReport {
        period,
        deviations,
        psi_periodicity_defect: defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sin4_coefficients() {
        let p = sin_power_fourier(4);
        assert_relative_eq!(p.a(0), 3.0 / 8.0);
        assert_relative_eq!(p.a(2), -0.5);
        assert_relative_eq!(p.a(4), 1.0 / 8.0);
        assert!(p.a(1).abs() < 1e-15 && p.a(3).abs() < 1e-15);
        assert!(p.sin_coeffs.iter().all(|&b| b.abs() < 1e-15));
        let (m0, m1, m2) = p.moment_residuals();
        assert!(m0.abs() < 1e-15 && m1.abs() < 1e-15 && m2.abs() < 1e-15);
        assert_relative_eq!(p.minimal_period(), std::f64::consts::PI);
    }

    #[test]
    fn sin3_coefficients() {
        let p = sin_power_fourier(3);
        assert_relative_eq!(p.b(1), 0.75);
        assert_relative_eq!(p.b(3), -0.25);
        assert!(p.cos_coeffs.iter().all(|&a| a.abs() < 1e-15));
        let (m0, m1, m2) = p.moment_residuals();
        assert!(m0.abs() < 1e-15 && m1.abs() < 1e-15 && m2.abs() < 1e-15);
    }

    #[test]
    fn sin_power_matches_directly_summed_powers() {
        for m in 3..=8 {
            let p = sin_power_fourier(m);
            for i in 0..40 {
                let t = -3.0 + 0.15 * i as f64;
                assert_relative_eq!(p.eval(t), t.sin().powi(m as i32), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn c_max_for_sin4() {
        let p = sin_power_fourier(4);
        let c = max_admissible_c(&p).unwrap();
        let expect = 1.0 / (3.0 / 8.0 + 2f64.exp() * 0.5 + 8f64.exp() / 8.0);
        assert_relative_eq!(c, expect, epsilon = 1e-15);
        // single-term component
        let single = PeriodicComponent::new(vec![0.0, 1.0], vec![]);
        assert_relative_eq!(
            max_admissible_c(&single).unwrap(),
            (-0.5f64).exp(),
            epsilon = 1e-15
        );
        let zero = PeriodicComponent::new(vec![0.0], vec![]);
        assert!(matches!(
            max_admissible_c(&zero),
            Err(Error::AllZeroCoefficients)
        ));
    }

    #[test]
    fn sin4_density_and_lattice_values() {
        let p = sin_power_fourier(4);
        let c = max_admissible_c(&p).unwrap() / 2.0;
        let td = trig_density(&p, c).unwrap();
        let m = td.density.moments();
        assert!((m.mass - 1.0).abs() < 1e-8);
        assert!(m.mean.abs() < 1e-8);
        assert!((m.variance - 1.0).abs() < 1e-6);
        // L(pi k) = e^{(pi k)^2 / 2}
        for k in 1..=2 {
            let t = std::f64::consts::PI * k as f64;
            let dev = (td.handle.log_laplace(t) - 0.5 * t * t).exp() - 1.0;
            assert!(dev.abs() <= 1e-8, "k = {k}: deviation {dev}");
        }
        assert_relative_eq!(td.period, std::f64::consts::PI);
    }

    #[test]
    fn c_zero_gives_standard_normal() {
        let p = sin_power_fourier(4);
        let td = trig_density(&p, 0.0).unwrap();
        for i in (0..td.density.len()).step_by(97) {
            let x = td.density.x_at(i);
            assert_relative_eq!(
                td.density.values()[i],
                standard_normal_density(x),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn sin3_is_admissible_but_asymmetric() {
        let p = sin_power_fourier(3);
        let c = max_admissible_c(&p).unwrap() / 2.0;
        let td = trig_density(&p, c).unwrap();
        assert!(!td.handle.is_symmetric());
        let m = td.density.moments();
        assert!(m.mean.abs() < 1e-8);
        assert!((m.variance - 1.0).abs() < 1e-6);
        // gamma_3 = -c P'''(0) = -6c: the m = 3 guarantee range is empty,
        // so the third cumulant survives. Cross-check by finite differences.
        let k3 = crate::numerics::central_difference_richardson(
            |t| td.handle.log_laplace(t),
            0.0,
            3,
            1e-3,
        );
        assert_relative_eq!(k3, -6.0 * c, max_relative = 1e-5);
    }

    #[test]
    fn c_too_large_rejected() {
        let p = sin_power_fourier(4);
        let c_max = max_admissible_c(&p).unwrap();
        assert!(matches!(
            trig_density(&p, c_max * 1.01),
            Err(Error::CTooLarge { .. })
        ));
    }

    #[test]
    fn moment_constraint_violation_rejected() {
        // a_1 = 1 alone violates a_0 + sum a_k = 0.
        let p = PeriodicComponent::new(vec![0.0, 1.0], vec![]);
        assert!(matches!(
            trig_density(&p, 1e-3),
            Err(Error::MomentConstraintViolated(_))
        ));
    }

    #[test]
    fn theta_psi_two_routes_agree() {
        let theta = ThetaComponent::new(1.5).unwrap();
        assert_eq!(theta_psi(0.0, &theta, 0.3).unwrap(), 1.0);
        assert_eq!(theta_psi_fourier(std::f64::consts::FRAC_PI_2, &theta, 0.0), 1.0);
        for i in 0..50 {
            let t = -6.0 + 0.24 * i as f64;
            let l = theta_psi_lattice(t, &theta, 0.01);
            let f = theta_psi_fourier(t, &theta, 0.01);
            assert!((l - f).abs() < 1e-10, "t = {t}: {l} vs {f}");
        }
    }

    #[test]
    fn theta_sigma_must_exceed_one() {
        assert!(matches!(
            ThetaComponent::new(1.0),
            Err(Error::SigmaOutOfRange(_))
        ));
    }

    #[test]
    fn theta_fourier_coefficients_match_quadrature() {
        let theta = ThetaComponent::new(1.3).unwrap();
        let p = theta_component_fourier(&theta, 10);
        // numeric Fourier integral of P(t) = sin^4(t) Q(t)
        let n = 20_000;
        for j in 0..=6usize {
            let mut acc = 0.0;
            for i in 0..n {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                let pt = t.sin().powi(4) * theta.lattice_q(t);
                acc += pt * (j as f64 * t).cos();
            }
            let numeric = acc / n as f64 * if j == 0 { 1.0 } else { 2.0 };
            assert_relative_eq!(p.a(j), numeric, epsilon = 1e-12, max_relative = 1e-10);
        }
    }

    #[test]
    fn theta_density_synthesis() {
        let theta = ThetaComponent::new(1.5).unwrap();
        let p = theta_component_fourier(&theta, FOURIER_TERMS);
        let c = max_admissible_c(&p).unwrap() / 2.0;
        let td = trig_density(&p, c).unwrap();
        assert!((td.density.variance() - 1.0).abs() < 1e-6);
        // Psi from the handle agrees with the direct theta formula.
        for &t in &[0.7, 1.9, 3.3] {
            assert_relative_eq!(
                td.handle.psi(t),
                theta_psi(t, &theta, c).unwrap(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn lattice_check_sin4_and_gaussian() {
        let p = sin_power_fourier(4);
        let c = max_admissible_c(&p).unwrap() / 2.0;
        let td = trig_density(&p, c).unwrap();
        let rep = lattice_identity_check(&td.handle, std::f64::consts::PI, 2).unwrap();
        assert!(rep.deviations.iter().all(|d| *d <= 1e-8));
        assert!(rep.psi_periodicity_defect <= 1e-10);

        let g = crate::transform::gaussian_handle(1.0).unwrap();
        let rep = lattice_identity_check(&g, 1.0, 3).unwrap();
        assert!(rep.deviations.iter().all(|d| *d == 0.0));
        assert!(rep.psi_periodicity_defect <= 1e-12);

        // class-L non-Gaussian transform: deviation bounded away from zero
        let (_, h) = crate::charfn::class_l_from_real_zeros(1.0, &[1.0]).unwrap();
        let h1 = h.scaled(1.0 / 3f64.sqrt()).unwrap();
        let rep = lattice_identity_check(&h1, 1.0, 2).unwrap();
        assert!(rep.deviations.iter().all(|d| *d > 1e-3));
    }

    #[test]
    fn psi_capped_at_one_for_nonnegative_p() {
        // P = sin^4 >= 0 and c > 0 admissible force Psi <= 1, the strictness
        // mechanism; equality holds exactly on the lattice points pi k.
        let p = sin_power_fourier(4);
        let c_max = max_admissible_c(&p).unwrap();
        for &c in &[c_max / 2.0, c_max] {
            let h = periodic_handle(&p, c).unwrap();
            for i in 0..=2000 {
                let t = -10.0 + 0.01 * i as f64;
                assert!(h.psi(t) <= 1.0 + 1e-12, "c = {c}, t = {t}");
            }
            assert_relative_eq!(h.psi(std::f64::consts::PI), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn psi_growth_bound() {
        // |Psi(t)| <= e^{h^2/2} e^{h |t|} on the real line, h = pi.
        let p = sin_power_fourier(4);
        let c = max_admissible_c(&p).unwrap() / 2.0;
        let td = trig_density(&p, c).unwrap();
        let h = std::f64::consts::PI;
        for i in 0..200 {
            let t = -10.0 + 0.1 * i as f64;
            let bound = (0.5 * h * h + h * t.abs()).exp();
            assert!(td.handle.psi(t).abs() <= bound, "t = {t}");
        }
    }
}

//! Densities sampled on uniform grids: the numeric substrate for
//! convolutions, divergences and moment checks.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::numerics::{fmt_g12, standard_normal_density};

/// Mass tolerance after normalization.
pub const TOL_MASS: f64 = 1e-8;

/// Relative tolerance for the uniform-spacing check on CSV load.
const TOL_SPACING: f64 = 1e-9;

/// A nonnegative density sampled on a uniform grid, with cached
/// trapezoid-rule mass, mean and variance.
#[derive(Debug, Clone)]
pub struct GriddedDensity {
    x_min: f64,
    step: f64,
    values: Vec<f64>,
    mass: f64,
    mean: f64,
    variance: f64,
}

/// Trapezoid moments of a gridded density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMoments {
    pub mass: f64,
    pub mean: f64,
    pub variance: f64,
}

impl GriddedDensity {
    /// Build from raw samples. Values must be finite and nonnegative,
    /// `step > 0`, and the grid non-empty.
    pub fn new(x_min: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if !(step > 0.0) || !step.is_finite() || !x_min.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "x_min = {x_min}, step = {step}"
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidGrid(format!(
                    "value[{i}] = {v} is negative or non-finite"
                )));
            }
        }
        let mut d = GriddedDensity {
            x_min,
            step,
            values,
            mass: 0.0,
            mean: 0.0,
            variance: 0.0,
        };
        d.refresh_moments();
        Ok(d)
    }

    /// Sample `f` on the `n`-point grid starting at `x_min`; negative
    /// samples are clamped to zero.
    pub fn from_fn(x_min: f64, step: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..n)
            .map(|i| f(x_min + i as f64 * step).max(0.0))
            .collect();
        Self::new(x_min, step, values)
    }

    /// The standard normal sampled on a symmetric grid of `n` points with
    /// half-width `half`. `x = 0` lies on the grid when `n` is even.
    pub fn standard_normal(n: usize, half: f64) -> Result<Self> {
        let step = 2.0 * half / n as f64;
        Self::from_fn(-half, step, n, standard_normal_density)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.step
    }

    pub fn x_max(&self) -> f64 {
        self.x_at(self.values.len() - 1)
    }

    /// Trapezoid integrals of 1, x and (x - mean)^2 against the density.
    pub fn moments(&self) -> GridMoments {
        GridMoments {
            mass: self.mass,
            mean: self.mean,
            variance: self.variance,
        }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Trapezoid integral of `f(x) p(x)` over the grid.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let n = self.values.len();
        let mut acc = 0.0;
        for (i, &v) in self.values.iter().enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += w * f(self.x_at(i)) * v;
        }
        acc * self.step
    }

    /// Raw moment E X^k by trapezoid integration.
    pub fn raw_moment(&self, k: u32) -> f64 {
        self.integrate(|x| x.powi(k as i32))
    }

    /// Rescale so the trapezoid mass is exactly 1.
    pub fn normalize(&mut self) {
        if self.mass > 0.0 {
            let inv = 1.0 / self.mass;
            for v in &mut self.values {
                *v *= inv;
            }
            self.refresh_moments();
        }
    }

    /// Rescale the axis so the variance becomes 1: x -> x/s, p -> s p with
    /// s = sqrt(variance). The transformation is exact on the samples (no
    /// interpolation); the mean must already be 0 and the mass 1.
    pub fn rescaled_to_unit_variance(&self) -> Result<Self> {
        if (self.mass - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidGrid(format!("mass = {}", self.mass)));
        }
        if !(self.variance > 0.0) {
            return Err(Error::InvalidGrid(format!("variance = {}", self.variance)));
        }
        let s = self.variance.sqrt();
        if self.mean.abs() > 1e-6 * s {
            return Err(Error::InvalidGrid(format!(
                "mean = {} is not 0; axis rescaling cannot recenter",
                self.mean
            )));
        }
        let values = self.values.iter().map(|v| v * s).collect();
        Self::new(self.x_min / s, self.step / s, values)
    }

    /// True when the grid is symmetric about 0 (up to the customary missing
    /// right endpoint of even power-of-two grids).
    pub fn is_symmetric_about_zero(&self) -> bool {
        let skew = self.x_min + self.x_max();
        skew.abs() < 1e-9 || (skew + self.step).abs() < 1e-9
    }

    fn refresh_moments(&mut self) {
        let mass = self.integrate(|_| 1.0);
        let m1 = self.integrate(|x| x);
        let mean = if mass != 0.0 { m1 / mass } else { 0.0 };
        let var = self.integrate(|x| (x - mean) * (x - mean)) / if mass != 0.0 { mass } else { 1.0 };
        self.mass = mass;
        self.mean = mean;
        self.variance = var;
    }

    /// Write as CSV with header `x,p`. The axis column is written
    /// round-trip exact (12 significant digits would violate the loader's
    /// own 1e-9 spacing tolerance once |x|/step exceeds a few hundred);
    /// density values carry 12 significant digits.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "x,p")?;
        for (i, &v) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", self.x_at(i), fmt_g12(v))?;
        }
        Ok(())
    }

    /// Load from CSV with header `x,p`. Rows must come in increasing x with
    /// uniform spacing (relative tolerance 1e-9).
    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut xs: Vec<f64> = Vec::new();
        let mut ps: Vec<f64> = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if lineno == 0 && t.starts_with('x') {
                continue;
            }
            let (xs_str, ps_str) = t.split_once(',').ok_or_else(|| {
                Error::InvalidGrid(format!("line {}: expected `x,p`, got {t:?}", lineno + 1))
            })?;
            let x: f64 = xs_str.trim().parse().map_err(|_| {
                Error::InvalidGrid(format!("line {}: bad x value {xs_str:?}", lineno + 1))
            })?;
            let p: f64 = ps_str.trim().parse().map_err(|_| {
                Error::InvalidGrid(format!("line {}: bad p value {ps_str:?}", lineno + 1))
            })?;
            xs.push(x);
            ps.push(p);
        }
        if xs.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if xs.len() == 1 {
            return Err(Error::InvalidGrid("need at least two grid points".into()));
        }
        let step = xs[1] - xs[0];
        if !(step > 0.0) {
            return Err(Error::InvalidGrid("x must be strictly increasing".into()));
        }
        for i in 1..xs.len() {
            let d = xs[i] - xs[i - 1];
            if ((d - step) / step).abs() > TOL_SPACING {
                return Err(Error::InvalidGrid(format!(
                    "non-uniform spacing at row {}: {d} vs {step}",
                    i + 1
                )));
            }
        }
        Self::new(xs[0], step, ps)
    }
}

/// Default grid half-width for a distribution of variance `sigma_sq`:
/// `max(10, 8 sigma)`, where Gaussian tails are below 1e-15.
pub fn default_half_width(sigma_sq: f64) -> f64 {
    (8.0 * sigma_sq.max(0.0).sqrt()).max(10.0)
}

/// Default power-of-two point count (overridable via the CLI).
pub const DEFAULT_GRID_POINTS: usize = 1 << 14;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn normal_moments() {
        let d = GriddedDensity::from_fn(-10.0, 1e-3, 20_001, standard_normal_density).unwrap();
        let m = d.moments();
        assert!((m.mass - 1.0).abs() < 1e-8);
        assert!(m.mean.abs() < 1e-10);
        assert!((m.variance - 1.0).abs() < 1e-6);
    }

    #[test]
    fn x2_phi_has_variance_three() {
        let d = GriddedDensity::from_fn(-12.0, 1e-3, 24_001, |x| {
            x * x * standard_normal_density(x)
        })
        .unwrap();
        let m = d.moments();
        assert!((m.mass - 1.0).abs() < 1e-8);
        assert!((m.variance - 3.0).abs() < 1e-6);
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(matches!(
            GriddedDensity::new(0.0, 1.0, vec![]),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn negative_value_rejected() {
        assert!(GriddedDensity::new(0.0, 1.0, vec![1.0, -0.5]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let d = GriddedDensity::standard_normal(256, 8.0).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let d2 = GriddedDensity::read_csv(&buf[..]).unwrap();
        assert_eq!(d.len(), d2.len());
        assert_relative_eq!(d.x_min(), d2.x_min(), max_relative = 1e-11);
        for (a, b) in d.values().iter().zip(d2.values()) {
            assert_relative_eq!(a, b, max_relative = 1e-11, epsilon = 1e-300);
        }
    }

    #[test]
    fn csv_rejects_nonuniform_spacing() {
        let csv = "x,p\n0,1\n1,1\n2.5,1\n";
        assert!(GriddedDensity::read_csv(csv.as_bytes()).is_err());
    }

    #[test]
    fn normalization_hits_unit_mass() {
        let mut d = GriddedDensity::from_fn(-10.0, 1e-2, 2001, |x| {
            2.7 * standard_normal_density(x)
        })
        .unwrap();
        d.normalize();
        assert!((d.mass() - 1.0).abs() < TOL_MASS);
    }
}

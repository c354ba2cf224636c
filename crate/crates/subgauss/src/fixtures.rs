//! Worked-example corpus (Gaussians, Bernoulli laws and sums, uniforms,
//! polynomial-times-phi densities, quartic pairs, periodic families, cone
//! constructions) plus the JSON handle-spec format the CLI consumes.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charfn::{class_l_from_real_zeros, ZeroSet};
use crate::construct::build_from_zero_set;
use crate::error::{Error, Result};
use crate::grid::{default_half_width, GriddedDensity};
use crate::numerics::standard_normal_density;
use crate::periodic::{
    max_admissible_c, sin_power_fourier, theta_component_fourier, trig_density_on,
    PeriodicComponent, ThetaComponent,
};
use crate::quartic::{quartic_density_coeffs, quartic_handle, QuarticParams};
use crate::transform::{gaussian_handle, TransformHandle, OVERFLOW_EXPONENT};

/// log cosh t, stable for large |t| and free of cancellation near 0.
fn log_cosh(t: f64) -> f64 {
    let a = t.abs();
    if a < 1e-2 {
        let t2 = t * t;
        t2 / 2.0 - t2 * t2 / 12.0 + t2 * t2 * t2 / 45.0
    } else {
        a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
    }
}

/// log(sinh u / u), stable near 0 and for large |u|; equals 0 at u = 0.
fn log_sinhc(u: f64) -> f64 {
    let a = u.abs();
    if a < 1e-2 {
        let u2 = u * u;
        u2 / 6.0 - u2 * u2 / 180.0 + u2 * u2 * u2 / 2835.0
    } else {
        a + (-(-2.0 * a).exp()).ln_1p() - (2.0 * a).ln()
    }
}

/// Centered Bernoulli law p delta_q + q delta_{-p} (mean zero, variance pq).
pub fn bernoulli_centered(p: f64) -> Result<TransformHandle> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfRange(p));
    }
    let q = 1.0 - p;
    let k = move |t: f64| {
        // log(p e^{qt} + q e^{-pt}) via the larger exponent
        let (e1, e2) = (q * t, -p * t);
        let m = e1.max(e2);
        m + (p * (e1 - m).exp() + q * (e2 - m).exp()).ln()
    };
    let f = move |z: Complex64| -> Result<Complex64> {
        let (w1, w2) = (Complex64::i() * q * z, -Complex64::i() * p * z);
        if w1.re.max(w2.re) > OVERFLOW_EXPONENT {
            return Err(Error::OverflowGuard(w1.re.max(w2.re)));
        }
        Ok(p * w1.exp() + q * w2.exp())
    };
    TransformHandle::from_parts(p * q, (p - 0.5).abs() < 1e-15, k, f)
}

/// Symmetric Bernoulli on {-1, +1}: L = cosh, f = cos.
pub fn symmetric_bernoulli() -> Result<TransformHandle> {
    TransformHandle::from_parts(
        1.0,
        true,
        log_cosh,
        |z| {
            if z.im.abs() > OVERFLOW_EXPONENT {
                return Err(Error::OverflowGuard(z.im.abs()));
            }
            Ok(z.cos())
        },
    )
}

/// Weighted Bernoulli sum sum a_n X_n: L = prod cosh(a_n t).
pub fn bernoulli_sum(weights: Vec<f64>) -> Result<TransformHandle> {
    let variance: f64 = weights.iter().map(|a| a * a).sum();
    let wk = weights.clone();
    let k = move |t: f64| wk.iter().map(|a| log_cosh(a * t)).sum();
    let f = move |z: Complex64| -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for &a in &weights {
            if (a * z.im).abs() > OVERFLOW_EXPONENT {
                return Err(Error::OverflowGuard((a * z.im).abs()));
            }
            acc *= (a * z).cos();
        }
        Ok(acc)
    };
    TransformHandle::from_parts(variance, true, k, f)
}

/// Uniform law on [-a, a]: L = sinh(at)/(at), f = sin(az)/(az).
pub fn uniform(a: f64) -> Result<TransformHandle> {
    if !(a > 0.0) {
        return Err(Error::OutOfDomain(a, "a > 0"));
    }
    let k = move |t: f64| log_sinhc(a * t);
    let f = move |z: Complex64| -> Result<Complex64> {
        let az = a * z;
        if az.im.abs() > OVERFLOW_EXPONENT {
            return Err(Error::OverflowGuard(az.im.abs()));
        }
        if az.norm() < 1e-12 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        Ok(az.sin() / az)
    };
    TransformHandle::from_parts(a * a / 3.0, true, k, f)
}

/// Weighted sum of independent uniforms on [-1, 1].
pub fn uniform_sum(weights: Vec<f64>) -> Result<TransformHandle> {
    let variance: f64 = weights.iter().map(|a| a * a / 3.0).sum();
    let wk = weights.clone();
    let k = move |t: f64| wk.iter().map(|a| log_sinhc(a * t)).sum();
    let f = move |z: Complex64| -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for &a in &weights {
            let az = a * z;
            if az.im.abs() > OVERFLOW_EXPONENT {
                return Err(Error::OverflowGuard(az.im.abs()));
            }
            acc *= if az.norm() < 1e-12 {
                Complex64::new(1.0, 0.0)
            } else {
                az.sin() / az
            };
        }
        Ok(acc)
    };
    TransformHandle::from_parts(variance, true, k, f)
}

/// Hermite-polynomial value He_{2d}(i t) / i^{2d}, a positive real for all
/// real t, via the recurrence G_{k+1} = t G_k + k G_{k-1}.
fn hermite_imag_ratio(two_d: usize, t: f64) -> f64 {
    let mut g_prev = 1.0f64; // G_0
    if two_d == 0 {
        return 1.0;
    }
    let mut g = t; // G_1
    for k in 1..two_d {
        let next = t * g + k as f64 * g_prev;
        g_prev = g;
        g = next;
    }
    g
}

fn hermite_poly(two_d: usize, z: Complex64) -> Complex64 {
    let mut h_prev = Complex64::new(1.0, 0.0);
    if two_d == 0 {
        return h_prev;
    }
    let mut h = z;
    for k in 1..two_d {
        let next = z * h - k as f64 * h_prev;
        h_prev = h;
        h = next;
    }
    h
}

/// Law with density x^{2d} phi(x) / (2d-1)!!: variance 2d+1,
/// L(t) = He_{2d}(it) e^{t^2/2} / He_{2d}(0).
pub fn hermite_density_law(d: usize) -> Result<TransformHandle> {
    if d == 0 {
        return gaussian_handle(1.0);
    }
    let two_d = 2 * d;
    let norm = crate::charfn::double_factorial_odd(d); // (2d-1)!!
    let k = move |t: f64| 0.5 * t * t + (hermite_imag_ratio(two_d, t) / norm).ln();
    let he0 = hermite_poly(two_d, Complex64::new(0.0, 0.0));
    let f = move |z: Complex64| -> Result<Complex64> {
        let w = -0.5 * z * z;
        if w.re > OVERFLOW_EXPONENT {
            return Err(Error::OverflowGuard(w.re));
        }
        Ok(hermite_poly(two_d, z) / he0 * w.exp())
    };
    TransformHandle::from_parts((2 * d + 1) as f64, true, k, f)
}

enum DensityKind {
    None,
    Analytic(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    Inversion,
    Custom(Arc<dyn Fn(usize) -> Result<GriddedDensity> + Send + Sync>),
}

/// A built handle together with its density source, if any.
pub struct BuiltHandle {
    pub name: String,
    pub handle: TransformHandle,
    density: DensityKind,
}

impl BuiltHandle {
    pub fn has_density(&self) -> bool {
        !matches!(self.density, DensityKind::None)
    }

    /// Materialize the density on a grid of `points` samples (default
    /// half-width for the handle's variance).
    pub fn density(&self, points: usize) -> Result<GriddedDensity> {
        let half = default_half_width(self.handle.variance());
        match &self.density {
            DensityKind::None => Err(Error::ConfigInvalid(format!(
                "{} has no density (discrete law)",
                self.name
            ))),
            DensityKind::Analytic(f) => {
                let step = 2.0 * half / points as f64;
                let g = Arc::clone(f);
                GriddedDensity::from_fn(-half, step, points, move |x| g(x))
            }
            DensityKind::Inversion => self.handle.density_grid(points, half),
            DensityKind::Custom(f) => f(points),
        }
    }
}

/// Uniform[-sqrt3, sqrt3] sampled so the jumps fall exactly mid-cell
/// (step = sqrt3/(k + 1/2)): the trapezoid mass is then exact and the
/// discrete self-convolution reproduces the triangle density exactly at
/// the nodes.
fn aligned_unit_uniform(points: usize) -> Result<GriddedDensity> {
    let s3 = 3f64.sqrt();
    let k = (points / 16).max(1) as i64;
    let step = s3 / (k as f64 + 0.5);
    let half_idx = points as i64 / 2;
    let c = 1.0 / (2.0 * s3);
    let values: Vec<f64> = (0..points as i64)
        .map(|i| if (i - half_idx).abs() <= k { c } else { 0.0 })
        .collect();
    GriddedDensity::new(-(half_idx as f64) * step, step, values)
}

/// One entry of the example registry.
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    /// Expected `strict` verdict from `verify`.
    pub strict: bool,
    builder: fn() -> Result<BuiltHandle>,
}

impl Fixture {
    pub fn build(&self) -> Result<BuiltHandle> {
        (self.builder)()
    }
}

macro_rules! analytic {
    ($name:expr, $handle:expr, $f:expr) => {
        Ok(BuiltHandle {
            name: $name.to_string(),
            handle: $handle,
            density: DensityKind::Analytic(Arc::new($f)),
        })
    };
}

/// The example corpus.
pub fn registry() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "gaussian",
            description: "standard normal law",
            strict: true,
            builder: || analytic!("gaussian", gaussian_handle(1.0)?, standard_normal_density),
        },
        Fixture {
            name: "bernoulli_symmetric",
            description: "symmetric Bernoulli on {-1, +1} (L = cosh)",
            strict: true,
            builder: || {
                Ok(BuiltHandle {
                    name: "bernoulli_symmetric".into(),
                    handle: symmetric_bernoulli()?,
                    density: DensityKind::None,
                })
            },
        },
        Fixture {
            name: "bernoulli_p07",
            description: "centered Bernoulli(p = 0.7); proxy variance from the Kearns-Saul form",
            strict: false,
            builder: || {
                Ok(BuiltHandle {
                    name: "bernoulli_p07".into(),
                    handle: bernoulli_centered(0.7)?,
                    density: DensityKind::None,
                })
            },
        },
        Fixture {
            name: "bernoulli_sum",
            description: "Bernoulli sum with weights 2^-n (n <= 30)",
            strict: true,
            builder: || {
                let w: Vec<f64> = (1..=30).map(|n| 0.5f64.powi(n)).collect();
                Ok(BuiltHandle {
                    name: "bernoulli_sum".into(),
                    handle: bernoulli_sum(w)?,
                    density: DensityKind::None,
                })
            },
        },
        Fixture {
            name: "uniform",
            description: "uniform on [-sqrt3, sqrt3] (unit variance)",
            strict: true,
            builder: || {
                Ok(BuiltHandle {
                    name: "uniform".into(),
                    handle: uniform(3f64.sqrt())?,
                    density: DensityKind::Custom(Arc::new(aligned_unit_uniform)),
                })
            },
        },
        Fixture {
            name: "uniform_sum",
            description: "sum of uniforms on [-1,1] with weights 1/n (n <= 40)",
            strict: true,
            builder: || {
                let w: Vec<f64> = (1..=40).map(|n| 1.0 / n as f64).collect();
                Ok(BuiltHandle {
                    name: "uniform_sum".into(),
                    handle: uniform_sum(w)?,
                    density: DensityKind::Inversion,
                })
            },
        },
        Fixture {
            name: "example_2_11",
            description: "density x^2 phi(x); class L with gamma = 1, zero at 1 (variance 3)",
            strict: true,
            builder: || {
                let (_, h) = class_l_from_real_zeros(1.0, &[1.0])?;
                analytic!("example_2_11", h, |x: f64| x * x * standard_normal_density(x))
            },
        },
        Fixture {
            name: "example_2_11_unit",
            description: "x^2 phi(x) law rescaled to unit variance",
            strict: true,
            builder: || {
                let (_, h) = class_l_from_real_zeros(1.0, &[1.0])?;
                let s3 = 3f64.sqrt();
                analytic!("example_2_11_unit", h.scaled(1.0 / s3)?, move |x: f64| {
                    3.0 * s3 * x * x * standard_normal_density(s3 * x)
                })
            },
        },
        Fixture {
            name: "hermite_d2",
            description: "density x^4 phi(x)/3 (variance 5; Hermite transform)",
            strict: true,
            builder: || {
                analytic!("hermite_d2", hermite_density_law(2)?, |x: f64| {
                    x.powi(4) * standard_normal_density(x) / 3.0
                })
            },
        },
        Fixture {
            name: "quartic_boundary",
            description: "quartic pair (sqrt(2/3), 1/3): zeros on the pi/8 cone boundary",
            strict: true,
            builder: || {
                let alpha = (2f64 / 3.0).sqrt();
                let params = QuarticParams::new(alpha, 1.0 / 3.0, 1.0);
                let h = quartic_handle(params)?;
                let (c0, c2, c4) = quartic_density_coeffs(alpha, 1.0 / 3.0)?;
                analytic!("quartic_boundary", h, move |x: f64| {
                    (c0 + c2 * x * x + c4 * x.powi(4)) * standard_normal_density(x)
                })
            },
        },
        Fixture {
            name: "quartic_nonstrict",
            description: "quartic pair (0, 0.1): admissible but below alpha = sqrt(2 beta)",
            strict: false,
            builder: || {
                let params = QuarticParams::new(0.0, 0.1, 1.0);
                let h = quartic_handle(params)?;
                let (c0, c2, c4) = quartic_density_coeffs(0.0, 0.1)?;
                analytic!("quartic_nonstrict", h, move |x: f64| {
                    (c0 + c2 * x * x + c4 * x.powi(4)) * standard_normal_density(x)
                })
            },
        },
        Fixture {
            name: "sin4",
            description: "periodic family L = (1 - c sin^4 t) e^{t^2/2}, c = c_max/2",
            strict: true,
            builder: || {
                let p = sin_power_fourier(4);
                let c = max_admissible_c(&p)? / 2.0;
                let td = crate::periodic::trig_density(&p, c)?;
                let comp = p.clone();
                Ok(BuiltHandle {
                    name: "sin4".into(),
                    handle: td.handle,
                    density: DensityKind::Custom(Arc::new(move |points| {
                        Ok(trig_density_on(&comp, c, points, 10.0)?.density)
                    })),
                })
            },
        },
        Fixture {
            name: "sin3",
            description: "asymmetric periodic family from sin^3 (third cumulant survives)",
            strict: false,
            builder: || {
                let p = sin_power_fourier(3);
                let c = max_admissible_c(&p)? / 2.0;
                let td = crate::periodic::trig_density(&p, c)?;
                let comp = p.clone();
                Ok(BuiltHandle {
                    name: "sin3".into(),
                    handle: td.handle,
                    density: DensityKind::Custom(Arc::new(move |points| {
                        Ok(trig_density_on(&comp, c, points, 10.0)?.density)
                    })),
                })
            },
        },
        Fixture {
            name: "theta_1_5",
            description: "theta construction with Gaussian window sigma = 1.5, c = c_max/2",
            strict: true,
            builder: || {
                let theta = ThetaComponent::new(1.5)?;
                let p = theta_component_fourier(&theta, 40);
                let c = max_admissible_c(&p)? / 2.0;
                let td = crate::periodic::trig_density(&p, c)?;
                let comp = p.clone();
                Ok(BuiltHandle {
                    name: "theta_1_5".into(),
                    handle: td.handle,
                    density: DensityKind::Custom(Arc::new(move |points| {
                        Ok(trig_density_on(&comp, c, points, 10.0)?.density)
                    })),
                })
            },
        },
        Fixture {
            name: "construct_two",
            description: "product over zeros {e^{i pi/10}, 2 e^{i pi/16}} with lambda = 6",
            strict: true,
            builder: || {
                let zs = ZeroSet::new(vec![
                    Complex64::from_polar(1.0, std::f64::consts::PI / 10.0),
                    Complex64::from_polar(2.0, std::f64::consts::PI / 16.0),
                ])?;
                let (_, h) = build_from_zero_set(&zs, 6.0)?;
                Ok(BuiltHandle {
                    name: "construct_two".into(),
                    handle: h,
                    density: DensityKind::Inversion,
                })
            },
        },
    ]
}

/// Look up and build a fixture by name.
pub fn fixture(name: &str) -> Result<BuiltHandle> {
    registry()
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::ConfigInvalid(format!("unknown fixture {name:?}")))?
        .build()
}

/// JSON spec for any handle the CLI can consume.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HandleSpec {
    Gaussian {
        variance: f64,
    },
    Bernoulli {
        p: f64,
    },
    ClassL {
        gamma: f64,
        zeros: Vec<f64>,
    },
    Quartic {
        alpha: f64,
        beta: f64,
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
    ZeroSet {
        zeros: Vec<[f64; 2]>,
        lambda: f64,
    },
    SinPower {
        m: usize,
        #[serde(default)]
        c: Option<f64>,
    },
    Theta {
        sigma: f64,
        #[serde(default)]
        c: Option<f64>,
    },
    Coeffs {
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
        #[serde(default)]
        c: Option<f64>,
    },
    Fixture {
        name: String,
    },
}

fn default_gamma() -> f64 {
    1.0
}

fn periodic_built(name: String, p: PeriodicComponent, c: Option<f64>) -> Result<BuiltHandle> {
    let c = match c {
        Some(c) => c,
        None => max_admissible_c(&p)? / 2.0,
    };
    let td = crate::periodic::trig_density(&p, c)?;
    let comp = p.clone();
    Ok(BuiltHandle {
        name,
        handle: td.handle,
        density: DensityKind::Custom(Arc::new(move |points| {
            Ok(trig_density_on(&comp, c, points, 10.0)?.density)
        })),
    })
}

impl HandleSpec {
    pub fn build(&self) -> Result<BuiltHandle> {
        match self {
            HandleSpec::Gaussian { variance } => {
                let v = *variance;
                let s = v.sqrt();
                analytic!("gaussian", gaussian_handle(v)?, move |x: f64| {
                    standard_normal_density(x / s) / s
                })
            }
            HandleSpec::Bernoulli { p } => Ok(BuiltHandle {
                name: format!("bernoulli_{p}"),
                handle: bernoulli_centered(*p)?,
                density: DensityKind::None,
            }),
            HandleSpec::ClassL { gamma, zeros } => {
                let (_, h) = class_l_from_real_zeros(*gamma, zeros)?;
                Ok(BuiltHandle {
                    name: "class_l".into(),
                    handle: h,
                    density: DensityKind::Inversion,
                })
            }
            HandleSpec::Quartic { alpha, beta, gamma } => {
                let params = QuarticParams::new(*alpha, *beta, *gamma);
                let h = quartic_handle(params)?;
                let (ar, br) = params.rescaled();
                let (c0, c2, c4) = quartic_density_coeffs(ar, br)?;
                let s = gamma.sqrt();
                analytic!("quartic", h, move |x: f64| {
                    let y = x / s;
                    (c0 + c2 * y * y + c4 * y.powi(4)) * standard_normal_density(y) / s
                })
            }
            HandleSpec::ZeroSet { zeros, lambda } => {
                let zs = ZeroSet::new(
                    zeros
                        .iter()
                        .map(|&[re, im]| Complex64::new(re, im))
                        .collect(),
                )?;
                let (_, h) = build_from_zero_set(&zs, *lambda)?;
                Ok(BuiltHandle {
                    name: "zero_set_product".into(),
                    handle: h,
                    density: DensityKind::Inversion,
                })
            }
            HandleSpec::SinPower { m, c } => {
                periodic_built(format!("sin{m}"), sin_power_fourier(*m), *c)
            }
            HandleSpec::Theta { sigma, c } => {
                let theta = ThetaComponent::new(*sigma)?;
                periodic_built(
                    format!("theta_{sigma}"),
                    theta_component_fourier(&theta, 40),
                    *c,
                )
            }
            HandleSpec::Coeffs { cos, sin, c } => periodic_built(
                "periodic".into(),
                PeriodicComponent::new(cos.clone(), sin.clone()),
                *c,
            ),
            HandleSpec::Fixture { name } => fixture(name),
        }
    }
}

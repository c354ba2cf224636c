//! Command-line front end: config, dispatch and artifact emission.
//!
//! Exit codes: 0 success, 2 validation error, 3 numeric failure.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::charfn::ZeroSetSpec;
use crate::construct::{build_from_zero_set, lambda_min};
use crate::error::{Error, Result};
use crate::fixtures::{self, BuiltHandle, HandleSpec};
use crate::grid::{GriddedDensity, DEFAULT_GRID_POINTS};
use crate::numerics::fmt_g12;
use crate::periodic::{
    lattice_identity_check, max_admissible_c, sin_power_fourier, theta_component_fourier,
    trig_density_on, PeriodicComponent, ThetaComponent,
};
use crate::quartic::{
    constraint_slacks, is_characteristic, is_strictly_subgaussian_quartic, region_constants,
    QuarticParams,
};
use crate::renyi::{clt_experiment, Alpha};
use crate::transform::handle_from_density;
use crate::verify::{subgauss_report, DEFAULT_T_CAP};

/// Environment variable overriding the default power-of-two grid size.
pub const GRID_POINTS_ENV: &str = "SUBGAUSS_GRID_POINTS";

/// Validated run configuration; unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// One of: classify, build, periodic, verify, clt, fixtures.
    pub command: String,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Input path: zero-set JSON, handle-spec JSON or coefficient JSON.
    #[serde(default)]
    pub input: Option<PathBuf>,
    /// Density CSV path.
    #[serde(default)]
    pub density: Option<PathBuf>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub sin_power: Option<usize>,
    #[serde(default)]
    pub theta_sigma: Option<f64>,
    /// Periodic amplitude: a number, or "auto" for c_max/2.
    #[serde(default)]
    pub c: Option<String>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub ns: Option<Vec<usize>>,
    #[serde(default)]
    pub alphas: Option<Vec<String>>,
    #[serde(default)]
    pub grid_points: Option<usize>,
    #[serde(default)]
    pub t_cap: Option<f64>,
    #[serde(default)]
    pub t0s: Option<Vec<f64>>,
    /// Strictness tolerance override (relative), > 0.
    #[serde(default)]
    pub strict_tol: Option<f64>,
    #[serde(default)]
    pub list: bool,
    #[serde(default)]
    pub write_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let f = fs::File::open(path)?;
        let cfg: RunConfig = serde_json::from_reader(BufReader::new(f))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        const COMMANDS: &[&str] = &["classify", "build", "periodic", "verify", "clt", "fixtures"];
        if !COMMANDS.contains(&self.command.as_str()) {
            return Err(Error::ConfigInvalid(format!(
                "unknown command {:?}",
                self.command
            )));
        }
        for (name, v) in [("t_cap", self.t_cap), ("strict_tol", self.strict_tol)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(Error::ConfigInvalid(format!("{name} must be > 0, got {v}")));
                }
            }
        }
        if let Some(dir) = &self.out_dir {
            fs::create_dir_all(dir)?;
            let probe = dir.join(".write_probe");
            fs::write(&probe, b"")
                .map_err(|e| Error::ConfigInvalid(format!("output dir not writable: {e}")))?;
            let _ = fs::remove_file(&probe);
        }
        Ok(())
    }

    fn grid_points(&self) -> usize {
        self.grid_points
            .or_else(|| {
                std::env::var(GRID_POINTS_ENV)
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(DEFAULT_GRID_POINTS)
    }
}

/// Exit-code classification of errors: 2 for validation, 3 for numerics.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::OverflowGuard(_)
        | Error::GridMomentDiverged { .. }
        | Error::TransformDiverged(_)
        | Error::RatioDiverged { .. }
        | Error::AliasingDetected(_)
        | Error::NumericFailure(_) => 3,
        _ => 2,
    }
}

fn emit(out_dir: &Option<PathBuf>, name: &str, contents: &str, stdout: &mut impl Write) -> Result<()> {
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), contents)?;
            writeln!(stdout, "wrote {}", dir.join(name).display())?;
        }
        None => {
            writeln!(stdout, "{contents}")?;
        }
    }
    Ok(())
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::ConfigInvalid(format!("missing required field {name}")))
}

fn load_built(cfg: &RunConfig) -> Result<BuiltHandle> {
    if let Some(path) = &cfg.input {
        let text = fs::read_to_string(path)?;
        let spec: HandleSpec = serde_json::from_str(&text)?;
        spec.build()
    } else {
        Err(Error::ConfigInvalid("need --spec <handle spec JSON>".into()))
    }
}

/// Run the configured pipeline, writing artifacts under `out_dir` (or to
/// `stdout` when no directory is given).
pub fn dispatch(cfg: &RunConfig, stdout: &mut impl Write) -> Result<()> {
    cfg.validate()?;
    match cfg.command.as_str() {
        "classify" => classify(cfg, stdout),
        "build" => build(cfg, stdout),
        "periodic" => periodic(cfg, stdout),
        "verify" => verify(cfg, stdout),
        "clt" => clt(cfg, stdout),
        "fixtures" => fixtures_cmd(cfg, stdout),
        other => Err(Error::ConfigInvalid(format!("unknown command {other:?}"))),
    }
}

fn classify(cfg: &RunConfig, stdout: &mut impl Write) -> Result<()> {
    let alpha = require(cfg.alpha, "alpha")?;
    let beta = require(cfg.beta, "beta")?;
    let gamma = cfg.gamma.unwrap_or(1.0);
    if !(gamma > 0.0) {
        return Err(Error::ConfigInvalid(format!("gamma must be > 0, got {gamma}")));
    }
    let params = QuarticParams::new(alpha, beta, gamma);
    let (ar, br) = params.rescaled();
    let slacks = constraint_slacks(ar, br);
    let report = json!({
        "alpha": alpha,
        "beta": beta,
        "gamma": gamma,
        "rescaled": {"alpha": ar, "beta": br},
        "is_characteristic": is_characteristic(ar, br),
        "strict": is_strictly_subgaussian_quartic(ar, br),
        "variance": params.variance(),
        "binding_constraint": slacks[0].0,
        "boundary_distance": slacks[0].1.abs(),
        "constraints": slacks.iter().map(|(n, s)| json!({"name": n, "slack": s})).collect::<Vec<_>>(),
        "constants": region_constants(),
    });
    emit(&cfg.out_dir, "classify.json", &pretty(&report)?, stdout)
}

fn build(cfg: &RunConfig, stdout: &mut impl Write) -> Result<()> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::ConfigInvalid("need --zeros <zero-set JSON>".into()))?;
    let lambda = require(cfg.lambda, "lambda")?;
    let text = fs::read_to_string(path)?;
    let spec: ZeroSetSpec = serde_json::from_str(&text)?;
    let zs = spec.to_zero_set()?;
    let (dist, handle) = build_from_zero_set(&zs, lambda)?;
    let mut csv = Vec::new();
    dist.write_components_csv(&mut csv)?;
    emit(&cfg.out_dir, "components.csv", &String::from_utf8(csv).unwrap(), stdout)?;
    let report = json!({
        "lambda": lambda,
        "lambda_min": lambda_min(),
        "lambda_min_note": "derived constraint 4 + 1/a0^2; the printed source constant (~5.83) matches exponent 2",
        "n_components": dist.components.len(),
        "sum_inv_square": zs.inverse_square_sum(),
        "total_variance": dist.total_variance,
        "variance_check": handle.variance(),
    });
    emit(&cfg.out_dir, "build.json", &pretty(&report)?, stdout)
}

fn resolve_c(c: &Option<String>, p: &PeriodicComponent) -> Result<f64> {
    let c_max = max_admissible_c(p)?;
    match c.as_deref() {
        None | Some("auto") => Ok(c_max / 2.0),
        Some(s) => s
            .parse::<f64>()
            .map_err(|_| Error::ConfigInvalid(format!("bad c value {s:?}"))),
    }
}

fn periodic(cfg: &RunConfig, stdout: &mut impl Write) -> Result<()> {
    let component = if let Some(m) = cfg.sin_power {
        sin_power_fourier(m)
    } else if let Some(sigma) = cfg.theta_sigma {
        theta_component_fourier(&ThetaComponent::new(sigma)?, 40)
    } else if let Some(path) = &cfg.input {
        let text = fs::read_to_string(path)?;
        serde_json::from_str::<PeriodicComponent>(&text)?
    } else {
        return Err(Error::ConfigInvalid(
            "need one of --sin-power, --theta-sigma, --coeffs".into(),
        ));
    };
    let c = resolve_c(&cfg.c, &component)?;
    let td = trig_density_on(
        &component,
        c,
        cfg.grid_points(),
        crate::grid::default_half_width(1.0),
    )?;
    let mut csv = Vec::new();
    td.density.write_csv(&mut csv)?;
    emit(&cfg.out_dir, "density.csv", &String::from_utf8(csv).unwrap(), stdout)?;
    let lattice = lattice_identity_check(&td.handle, td.period, 3)?;
    let report = json!({
        "c": c,
        "c_max": max_admissible_c(&component)?,
        "period": td.period,
        "cos_coeffs": component.cos_coeffs,
        "sin_coeffs": component.sin_coeffs,
        "lattice": lattice,
        "moments": {
            "mass": td.density.mass(),
            "mean": td.density.mean(),
            "variance": td.density.variance(),
        },
    });
    emit(&cfg.out_dir, "psi_report.json", &pretty(&report)?, stdout)
}

fn verify(cfg: &RunConfig, stdout: &mut impl Write) -> Result<()> {
    let t_cap = cfg.t_cap.unwrap_or(DEFAULT_T_CAP);
    let default_t0s = vec![0.5, 1.0, 2.0];
    let t0s = cfg.t0s.clone().unwrap_or(default_t0s);
    let mut gamma_band = serde_json::Value::Null;
    let (name, handle, t_trust) = if let Some(path) = &cfg.density {
        let f = fs::File::open(path)?;
        let d = GriddedDensity::read_csv(BufReader::new(f))?;
        let gt = handle_from_density(&d, t_cap)?;
        (
            format!("density:{}", path.display()),
            gt.handle,
            Some(gt.t_trust),
        )
    } else {
        // For class-L specs, also report the gamma band of the mixed
        // representation (informational; never rejected).
        if let Some(path) = &cfg.input {
            if let Ok(HandleSpec::ClassL { gamma, zeros }) =
                serde_json::from_str::<HandleSpec>(&fs::read_to_string(path)?)
            {
                let (model, _) = crate::charfn::class_l_from_real_zeros(gamma, &zeros)?;
                let (lo, hi, ok) = model.mixed_representation_band();
                gamma_band = json!({"lower": lo, "upper": hi, "gamma_within": ok});
            }
        }
        let built = load_built(cfg)?;
        (built.name, built.handle, None)
    };
    let t_cap_eff = match t_trust {
        Some(tt) => t_cap.min(tt),
        None => t_cap,
    };
    let t0s: Vec<f64> = t0s.into_iter().filter(|t| *t < t_cap_eff).collect();
    let mut report = subgauss_report(&handle, t_cap_eff, &t0s)?;
    if let Some(tol) = cfg.strict_tol {
        report.strict =
            report.proxy_variance <= report.variance * (1.0 + tol) + 1e-12;
    }
    let out = json!({
        "input": name,
        "t_cap": t_cap_eff,
        "t_trust": t_trust,
        "gamma_band": gamma_band,
        "report": report,
    });
    emit(&cfg.out_dir, "verify.json", &pretty(&out)?, stdout)
}

fn clt(cfg: &RunConfig, stdout: &mut impl Write) -> Result<()> {
    let ns = cfg
        .ns
        .clone()
        .ok_or_else(|| Error::ConfigInvalid("need --n <list>".into()))?;
    let alphas: Vec<Alpha> = cfg
        .alphas
        .clone()
        .unwrap_or_else(|| vec!["1".into(), "2".into(), "inf".into()])
        .iter()
        .map(|s| Alpha::parse(s))
        .collect::<Result<_>>()?;
    let density = if let Some(path) = &cfg.density {
        let f = fs::File::open(path)?;
        GriddedDensity::read_csv(BufReader::new(f))?
    } else {
        let built = load_built(cfg)?;
        built.density(cfg.grid_points())?
    };
    // The experiment runs on the standardized law; rescale the axis when the
    // input has a different variance (exact on samples, mean must be 0).
    let density = if (density.variance() - 1.0).abs() > 1e-6 {
        density.rescaled_to_unit_variance()?
    } else {
        density
    };
    let exp = clt_experiment(&density, &ns, &alphas)?;
    let mut csv = String::from("n,alpha,D,T_inf\n");
    for r in &exp.reports {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            r.alpha,
            fmt_g12(r.d_alpha),
            fmt_g12(r.t_inf)
        ));
    }
    emit(&cfg.out_dir, "clt.csv", &csv, stdout)?;
    emit(&cfg.out_dir, "rates.json", &pretty(&serde_json::to_value(&exp.rate)?)?, stdout)
}

fn fixtures_cmd(cfg: &RunConfig, stdout: &mut impl Write) -> Result<()> {
    if let Some(dir) = &cfg.write_dir {
        fs::create_dir_all(dir)?;
        for fx in fixtures::registry() {
            let spec = HandleSpec::Fixture {
                name: fx.name.to_string(),
            };
            fs::write(dir.join(format!("{}.json", fx.name)), pretty(&serde_json::to_value(&spec)?)?)?;
        }
        writeln!(stdout, "wrote {} fixture specs to {}", fixtures::registry().len(), dir.display())?;
        return Ok(());
    }
    // default: list
    for fx in fixtures::registry() {
        writeln!(
            stdout,
            "{:24} {:10} {}",
            fx.name,
            if fx.strict { "strict" } else { "non_strict" },
            fx.description
        )?;
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: &str) -> RunConfig {
        RunConfig {
            command: command.into(),
            alpha: None,
            beta: None,
            gamma: None,
            input: None,
            density: None,
            lambda: None,
            sin_power: None,
            theta_sigma: None,
            c: None,
            out_dir: None,
            ns: None,
            alphas: None,
            grid_points: None,
            t_cap: None,
            t0s: None,
            strict_tol: None,
            list: false,
            write_dir: None,
        }
    }

    #[test]
    fn classify_boundary_pair() {
        let mut c = cfg("classify");
        c.alpha = Some(0.8165);
        c.beta = Some(0.3333);
        let mut out = Vec::new();
        dispatch(&c, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["strict"], true);
        assert_eq!(v["binding_constraint"], "alpha=sqrt(2beta)");
    }

    #[test]
    fn unknown_command_rejected() {
        let c = cfg("frobnicate");
        let mut out = Vec::new();
        let err = dispatch(&c, &mut out).unwrap_err();
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn fixtures_listing() {
        let c = cfg("fixtures");
        let mut out = Vec::new();
        dispatch(&c, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("example_2_11"));
        assert!(text.contains("non_strict"));
    }

    #[test]
    fn config_json_rejects_unknown_keys() {
        let r: std::result::Result<RunConfig, _> =
            serde_json::from_str(r#"{"command": "classify", "qux": 1}"#);
        assert!(r.is_err());
    }

    #[test]
    fn exit_codes_split_validation_from_numerics() {
        assert_eq!(exit_code(&Error::ConfigInvalid("x".into())), 2);
        assert_eq!(exit_code(&Error::EmptyZeroSet), 2);
        assert_eq!(exit_code(&Error::CTooLarge { c: 1.0, c_max: 0.1 }), 2);
        assert_eq!(exit_code(&Error::OverflowGuard(800.0)), 3);
        assert_eq!(exit_code(&Error::AliasingDetected(1e-6)), 3);
        assert_eq!(
            exit_code(&Error::RatioDiverged {
                max: 1e7,
                threshold: 1e6
            }),
            3
        );
        assert_eq!(exit_code(&Error::NumericFailure("x".into())), 3);
    }
}

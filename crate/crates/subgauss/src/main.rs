use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use subgauss::cli::{dispatch, exit_code, RunConfig};

#[derive(Parser)]
#[command(
    name = "subgauss",
    about = "Construct, classify and stress-test strictly subgaussian distributions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a quartic pair (alpha, beta): admissibility and strictness.
    Classify {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Build a product distribution from a zero-set JSON file.
    Build {
        /// Zero-set JSON: {"zeros": [[re, im], ...], "gamma": g}
        #[arg(long)]
        zeros: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Synthesize a periodic-component density and its Psi report.
    Periodic {
        #[arg(long, conflicts_with_all = ["theta_sigma", "coeffs"])]
        sin_power: Option<usize>,
        #[arg(long, conflicts_with = "coeffs")]
        theta_sigma: Option<f64>,
        /// JSON file with {"cos_coeffs": [...], "sin_coeffs": [...]}
        #[arg(long)]
        coeffs: Option<PathBuf>,
        /// Amplitude c, or "auto" for c_max/2.
        #[arg(long, default_value = "auto")]
        c: String,
        #[arg(long)]
        grid_points: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Verify strict subgaussianity of a handle spec or a density CSV.
    Verify {
        /// Handle-spec JSON path.
        #[arg(long, conflicts_with = "density")]
        spec: Option<PathBuf>,
        /// Density CSV path (numeric Laplace transform).
        #[arg(long)]
        density: Option<PathBuf>,
        #[arg(long)]
        t_cap: Option<f64>,
        /// Separation thresholds t0 (comma-separated).
        #[arg(long, value_delimiter = ',')]
        t0: Option<Vec<f64>>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the Renyi-divergence CLT experiment.
    Clt {
        #[arg(long, conflicts_with = "density")]
        spec: Option<PathBuf>,
        #[arg(long)]
        density: Option<PathBuf>,
        /// Sample counts, comma-separated and increasing.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Divergence orders (numbers or "inf"), comma-separated.
        #[arg(long, value_delimiter = ',', default_values_t = ["1".to_string(), "2".to_string(), "inf".to_string()])]
        alpha: Vec<String>,
        #[arg(long)]
        grid_points: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// List the worked-example corpus or write its spec files.
    Fixtures {
        #[arg(long)]
        list: bool,
        #[arg(long)]
        write_dir: Option<PathBuf>,
    },
    /// Run from a JSON RunConfig file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn to_config(cmd: Command) -> Result<RunConfig, subgauss::Error> {
    let mut cfg = RunConfig {
        command: String::new(),
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
    };
    match cmd {
        Command::Classify {
            alpha,
            beta,
            gamma,
            out_dir,
        } => {
            cfg.command = "classify".into();
            cfg.alpha = Some(alpha);
            cfg.beta = Some(beta);
            cfg.gamma = Some(gamma);
            cfg.out_dir = out_dir;
        }
        Command::Build {
            zeros,
            lambda,
            out_dir,
        } => {
            cfg.command = "build".into();
            cfg.input = Some(zeros);
            cfg.lambda = Some(lambda);
            cfg.out_dir = out_dir;
        }
        Command::Periodic {
            sin_power,
            theta_sigma,
            coeffs,
            c,
            grid_points,
            out_dir,
        } => {
            cfg.command = "periodic".into();
            cfg.sin_power = sin_power;
            cfg.theta_sigma = theta_sigma;
            cfg.input = coeffs;
            cfg.c = Some(c);
            cfg.grid_points = grid_points;
            cfg.out_dir = out_dir;
        }
        Command::Verify {
            spec,
            density,
            t_cap,
            t0,
            out_dir,
        } => {
            cfg.command = "verify".into();
            cfg.input = spec;
            cfg.density = density;
            cfg.t_cap = t_cap;
            cfg.t0s = t0;
            cfg.out_dir = out_dir;
        }
        Command::Clt {
            spec,
            density,
            n,
            alpha,
            grid_points,
            out_dir,
        } => {
            cfg.command = "clt".into();
            cfg.input = spec;
            cfg.density = density;
            cfg.ns = Some(n);
            cfg.alphas = Some(alpha);
            cfg.grid_points = grid_points;
            cfg.out_dir = out_dir;
        }
        Command::Fixtures { list, write_dir } => {
            cfg.command = "fixtures".into();
            cfg.list = list;
            cfg.write_dir = write_dir;
        }
        Command::Run { config } => {
            return RunConfig::from_json_file(&config);
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match to_config(cli.command) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut stdout = std::io::stdout();
    match dispatch(&cfg, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

//! Argument parsing and dispatch for the `radon` binary.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use radon_core::lorentz::LorentzIndex;
use radon_core::profiles::Profile;
use radon_core::quadrature::Quadrature;
use radon_core::{grassmann, hyperbolic, sphere, GrassmannGeometry, HyperbolicGeometry, SphereGeometry, TransformCurve};

use crate::config::{Scenario, ScenarioConfig};
use crate::report::write_curve;
use crate::scenarios::{run_scenario, RunOptions};
use crate::HarnessError;

#[derive(Debug, Parser)]
#[command(name = "radon", version, about = "Radial Radon-type transforms: curves, norms and verification runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the transform of a radial profile on a uniform grid and write it as CSV.
    Transform(TransformArgs),
    /// Print the Lorentz norm of a profile under the geometry's domain measure.
    Norm(NormArgs),
    /// Run a verification scenario and write its JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryKind {
    Grassmann,
    Hyperbolic,
    Sphere,
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    #[arg(long, value_enum)]
    pub geometry: GeometryKind,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: u32,
    /// Grassmann only.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Profile JSON file (`step` or `table`).
    #[arg(long)]
    pub profile: PathBuf,
    /// Number of grid points.
    #[arg(long)]
    pub grid: usize,
    /// Right end of the grid; defaults to the end of the profile's support.
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long)]
    pub p: f64,
    /// Second index; `inf` for the weak norm.
    #[arg(long, default_value = "1", value_parser = parse_index)]
    pub q: f64,
    #[arg(long)]
    pub profile: PathBuf,
    /// Cells used to quantize a tabulated profile.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub scenario: Scenario,
    /// JSON overrides on top of the scenario defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave out wall-clock time so the report is byte-stable.
    #[arg(long)]
    pub deterministic: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

fn parse_index(s: &str) -> Result<f64, String> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|e| e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn load_profile(path: &Path) -> Result<Profile<f64>, HarnessError> {
    Ok(Profile::from_json(&read(path)?)?)
}

enum Geometry {
    Grassmann(GrassmannGeometry),
    Hyperbolic(HyperbolicGeometry),
    Sphere(SphereGeometry),
}

impl GeometryArgs {
    fn build(&self) -> Result<Geometry, HarnessError> {
        if self.k.is_some() && self.geometry != GeometryKind::Grassmann {
            return Err(HarnessError::Argument("--k applies only to the grassmann geometry".into()));
        }
        Ok(match self.geometry {
            GeometryKind::Grassmann => Geometry::Grassmann(GrassmannGeometry::new(self.n, self.d, self.k.unwrap_or(0))?),
            GeometryKind::Hyperbolic => Geometry::Hyperbolic(HyperbolicGeometry::new(self.n, self.d)?),
            GeometryKind::Sphere => Geometry::Sphere(SphereGeometry::new(self.n, self.d)?),
        })
    }
}

fn uniform_grid(hi: f64, points: usize) -> Result<Vec<f64>, HarnessError> {
    if points < 2 {
        return Err(HarnessError::Argument("--grid needs at least 2 points".into()));
    }
    if !(hi > 0.0 && hi.is_finite()) {
        return Err(HarnessError::Argument(format!("grid end {hi} must be positive and finite")));
    }
    let last = (points - 1) as f64;
    Ok((0..points).map(|i| if i + 1 == points { hi } else { hi * i as f64 / last }).collect())
}

pub fn transform(args: &TransformArgs) -> Result<TransformCurve<f64>, HarnessError> {
    use radon_core::profiles::RadialFunction;
    let geom = args.geometry.build()?;
    let profile = load_profile(&args.profile)?;
    let support = profile.support_upper();
    let s_max = match (&geom, args.s_max) {
        (Geometry::Sphere(_), None) => sphere::THETA_MAX,
        (_, Some(s)) => s,
        (Geometry::Grassmann(_), None) => {
            support.ok_or_else(|| HarnessError::Argument("unbounded profile needs --s-max".into()))?
        }
        (Geometry::Hyperbolic(_), None) => {
            let t = support.ok_or_else(|| HarnessError::Argument("unbounded profile needs --s-max".into()))?;
            hyperbolic::acosh_stable(t)
        }
    };
    let grid = uniform_grid(s_max, args.grid)?;
    let quad = Quadrature::default();
    Ok(match (&geom, &profile) {
        (Geometry::Grassmann(g), Profile::Step(f)) => grassmann::closed_curve(g, f, &grid)?,
        (Geometry::Grassmann(g), f) => grassmann::abel_numeric(g, f, &grid, &quad)?,
        (Geometry::Hyperbolic(g), Profile::Step(f)) => hyperbolic::closed_curve(g, f, &grid)?,
        (Geometry::Hyperbolic(g), f) => hyperbolic::abel_numeric(g, f, &grid, &quad)?,
        (Geometry::Sphere(g), Profile::Step(f)) => sphere::closed_curve(g, f, &grid)?,
        (Geometry::Sphere(g), f) => sphere::abel_numeric(g, f, &grid, &quad)?,
    })
}

pub fn norm(args: &NormArgs) -> Result<f64, HarnessError> {
    let geom = args.geometry.build()?;
    let profile = load_profile(&args.profile)?.to_step(args.grid)?;
    let index = LorentzIndex::new(args.p, args.q)?;
    Ok(match geom {
        Geometry::Grassmann(g) => grassmann::domain_lorentz_norm(&g, &profile, index)?,
        Geometry::Hyperbolic(g) => hyperbolic::hn_lorentz_norm(&profile, &g, index)?,
        Geometry::Sphere(g) => sphere::sphere_lorentz_norm(&profile, &g, index)?,
    })
}

pub fn verify_config(args: &VerifyArgs) -> Result<ScenarioConfig, HarnessError> {
    let mut config = match &args.config {
        Some(path) => ScenarioConfig::from_json_for(args.scenario, &read(path)?)?,
        None => ScenarioConfig::default_for(args.scenario),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.output = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

/// Runs the command; `Ok(false)` means a verification ran and failed.
pub fn run(cli: &Cli) -> Result<bool, HarnessError> {
    match &cli.command {
        Command::Transform(args) => {
            let curve = transform(args)?;
            write_curve(&curve, &args.out)?;
            let flagged = curve.flagged();
            if !flagged.is_empty() {
                eprintln!("warning: {} grid points flagged (non-finite or divergent)", flagged.len());
            }
            Ok(true)
        }
        Command::Norm(args) => {
            println!("{:.17e}", norm(args)?);
            Ok(true)
        }
        Command::Verify(args) => {
            let config = verify_config(args)?;
            let opts = RunOptions { threads: args.threads, deterministic: args.deterministic };
            let report = run_scenario(&config, &opts)?;
            match &config.output {
                Some(path) => report.write(path)?,
                None => print!("{}", report.to_json()),
            }
            for c in report.failed_checks() {
                eprintln!("FAIL {}: {} (threshold {})", c.name, c.value, c.threshold);
            }
            eprintln!("{} {}", config.scenario, if report.pass { "pass" } else { "FAIL" });
            Ok(report.pass)
        }
    }
}

/// Process exit code: 0 on pass, 1 on a failed verification, 2 on error.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

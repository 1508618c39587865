use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use voliso::energy::{catalog, parse_energy_file, CatalogId, CATALOG_NAMES};
use voliso::{Grid, SplitEnergy};

#[derive(Debug, Parser)]
#[command(
    name = "voliso",
    version,
    about = "Rank-one convexity of planar isotropic energies W = h(λ₁/λ₂) + f(λ₁λ₂)",
    after_help = "Exit status: 0 rank-one convex or success, 1 not rank-one convex, \
                  2 inconclusive or marginal, 3 input error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Main-theorem verdict, cross-checked by the necessary battery and conditions A-D.
    Check(CheckArgs),
    /// Recognize special structures with a closed-form verdict.
    Classify(CommonArgs),
    /// Sampled Legendre-Hadamard search on matrices.
    Oracle(OracleArgs),
    /// Cauchy stresses, invertibility and infinitesimal moduli.
    Stress(StressArgs),
    /// Ellipticity map over the singular-value plane.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    /// Built-in energy.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(CATALOG_NAMES),
          required_unless_present = "energy_file", conflicts_with = "energy_file")]
    pub catalog: Option<String>,
    /// Energy file with `name`, `h`, `f` and `params` lines.
    #[arg(long, value_name = "PATH")]
    pub energy_file: Option<PathBuf>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub khat: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
}

impl EnergyArgs {
    fn overrides(&self) -> BTreeMap<String, f64> {
        [
            ("mu", self.mu),
            ("kappa", self.kappa),
            ("k", self.k),
            ("khat", self.khat),
            ("c", self.c),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect()
    }

    pub fn load(&self) -> anyhow::Result<SplitEnergy> {
        let overrides = self.overrides();
        if let Some(path) = &self.energy_file {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            return Ok(parse_energy_file(&text, &overrides)?);
        }
        let name = self
            .catalog
            .as_deref()
            .expect("clap enforces an energy source");
        let e = catalog(CatalogId::from_name(name, &overrides)?)?;
        if let Some(k) = overrides.keys().find(|k| !e.params.contains_key(*k)) {
            bail!("catalog energy `{name}` has no parameter `{k}`");
        }
        Ok(e)
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_points: Option<usize>,
    #[arg(long)]
    pub z_min: Option<f64>,
    #[arg(long)]
    pub z_max: Option<f64>,
    #[arg(long)]
    pub z_points: Option<usize>,
}

impl GridArgs {
    pub fn t_grid(&self, default: Grid) -> anyhow::Result<Grid> {
        axis(self.t_min, self.t_max, self.t_points, default, "t")
    }

    pub fn z_grid(&self, default: Grid) -> anyhow::Result<Grid> {
        axis(self.z_min, self.z_max, self.z_points, default, "z")
    }
}

fn axis(
    lo: Option<f64>,
    hi: Option<f64>,
    points: Option<usize>,
    default: Grid,
    name: &str,
) -> anyhow::Result<Grid> {
    let g = Grid {
        lo: lo.unwrap_or(default.lo),
        hi: hi.unwrap_or(default.hi),
        points: points.unwrap_or(default.points),
        spacing: default.spacing,
    };
    g.validate().with_context(|| format!("{name} grid"))?;
    Ok(g)
}

pub fn positive_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("tolerance must be a positive number".into())
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub energy: EnergyArgs,
    #[arg(long, default_value_t = voliso::criteria::DEFAULT_TOL, value_parser = positive_tol)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Lower end of the window for the infima of t²h″ and z²f″.
    #[arg(long, default_value_t = 1e-6)]
    pub inf_min: f64,
    #[arg(long, default_value_t = 1e6)]
    pub inf_max: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Random refinement samples after the grid phase.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Singular values per axis.
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1e2)]
    pub lambda_max: f64,
}

#[derive(Debug, Args)]
pub struct StressArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Principal stretches λ₁ λ₂.
    #[arg(long, num_args = 2, value_names = ["L1", "L2"], allow_negative_numbers = true)]
    pub at: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Points per axis.
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Linear axes on (0, 15] instead of the log window.
    #[arg(long, conflicts_with_all = ["lambda_min", "lambda_max"])]
    pub linear: bool,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long, default_value_t = voliso::scan::DEFAULT_DIRECTIONS)]
    pub directions: usize,
    #[arg(long, value_name = "PATH")]
    pub out_csv: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out_svg: Option<PathBuf>,
}

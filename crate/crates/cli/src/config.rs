//! Command-line flags shared by every subcommand.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use s2re_core::{Cotangent, MassTriple, PairPotential, Repulsive, ScanOptions, SphereRadius};

#[derive(Debug, Parser)]
#[command(
    name = "s2re",
    version,
    about = "Relative equilibria of three bodies on a sphere under the cotangent potential"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Masses as m1,m2,m3.
    #[arg(long, global = true, value_parser = parse_masses)]
    pub masses: Option<MassTriple>,
    /// Sphere radius R [default: 1, or the value recorded in a verified file].
    #[arg(long, global = true, value_parser = positive)]
    pub radius: Option<f64>,
    /// Pair potential; `verify` falls back to the one recorded in the file.
    #[arg(long, global = true, value_enum)]
    pub potential: Option<PotentialKind>,
    /// Residual bound for accepting and verifying equilibria.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive)]
    pub tol_residual: f64,
    /// Bracket width at which root bisection stops.
    #[arg(long, global = true, default_value_t = 1e-15, value_parser = positive)]
    pub tol_root: f64,
    /// Roots closer than this to a region end are discarded.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive)]
    pub tol_boundary: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form equilibrium with all three bodies on the equator.
    Equator,
    /// All rotators on a rotating meridian with θ2 − θ1 = a.
    Meridian {
        /// θ2 − θ1 in radians, in (0, π).
        #[arg(long)]
        a: f64,
    },
    /// Rotator counts over a grid of (a, ν1, ν2).
    Sweep(SweepArgs),
    /// Re-check the equilibria in a JSON file written by `equator` or `meridian`.
    Verify(VerifyArgs),
    /// Convergence of the reduced equation to Euler's quintic as R grows.
    EulerLimit {
        /// Radii, ascending.
        #[arg(long, value_delimiter = ',', default_values_t = [1e2, 1e3, 1e4])]
        radii: Vec<f64>,
        /// Arc length between bodies 1 and 2, held fixed.
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        r21: f64,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Explicit values of a.
    #[arg(long, value_delimiter = ',', conflicts_with = "a_range")]
    pub a_values: Option<Vec<f64>>,
    /// lo,hi,n: n values of a from lo to hi inclusive.
    #[arg(long, value_parser = parse_range)]
    pub a_range: Option<Range>,
    /// Explicit values used for both ν1 and ν2.
    #[arg(long, value_delimiter = ',', conflicts_with = "nu_range")]
    pub nu_values: Option<Vec<f64>>,
    /// lo,hi,n: n values of ν1 and of ν2.
    #[arg(long, value_parser = parse_range)]
    pub nu_range: Option<Range>,
    /// Space the ν range geometrically.
    #[arg(long)]
    pub nu_log: bool,
    /// Draw this many random points instead of a grid (uses --seed).
    #[arg(long, conflicts_with_all = ["a_values", "a_range", "nu_values", "nu_range"])]
    pub random: Option<usize>,
    /// Samples per region for the root scan.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    /// Rotation rate for equator entries, which hold at any rate.
    #[arg(long, default_value_t = 0.0)]
    pub omega: f64,
    /// Integration steps per period.
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
    /// Bound on the arc drift over one period.
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub tol_drift: f64,
    /// Count drift failures as verification failures.
    #[arg(long)]
    pub require_drift: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Cotangent,
    Repulsive,
}

impl PotentialKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PotentialKind::Cotangent => "cotangent",
            PotentialKind::Repulsive => "repulsive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(s, true).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Range {
    pub fn values(&self, log: bool) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|k| {
                let t = k as f64 / (self.n - 1) as f64;
                if log {
                    self.lo * (self.hi / self.lo).powf(t)
                } else {
                    self.lo + t * (self.hi - self.lo)
                }
            })
            .collect()
    }
}

/// A concrete potential chosen at run time.
pub enum Potential {
    Attractive(Cotangent),
    Repulsive(Repulsive<Cotangent>),
}

impl Potential {
    pub fn new(kind: PotentialKind, radius: SphereRadius) -> Self {
        match kind {
            PotentialKind::Cotangent => Potential::Attractive(Cotangent::new(radius)),
            PotentialKind::Repulsive => Potential::Repulsive(Repulsive(Cotangent::new(radius))),
        }
    }

    pub fn as_dyn(&self) -> &dyn PairPotential {
        match self {
            Potential::Attractive(p) => p,
            Potential::Repulsive(p) => p,
        }
    }
}

impl CommonArgs {
    pub fn masses(&self) -> anyhow::Result<MassTriple> {
        self.masses
            .ok_or_else(|| anyhow::anyhow!("--masses m1,m2,m3 is required"))
    }

    pub fn sphere(&self) -> SphereRadius {
        SphereRadius::new(self.radius.unwrap_or(1.0)).expect("validated by the parser")
    }

    pub fn potential_kind(&self) -> PotentialKind {
        self.potential.unwrap_or(PotentialKind::Cotangent)
    }

    pub fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            root_tol: self.tol_root,
            boundary_exclusion: self.tol_boundary,
            residual_tol: self.tol_residual,
            ..ScanOptions::default()
        }
    }
}

fn parse_masses(s: &str) -> Result<MassTriple, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [m1, m2, m3] => MassTriple::new(m1, m2, m3).map_err(|e| e.to_string()),
        _ => Err(format!("expected three masses, got {}", parts.len())),
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {v}"))
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [lo, hi, n] = parts[..] else {
        return Err("expected lo,hi,n".into());
    };
    let lo: f64 = lo.parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("{hi:?}: {e}"))?;
    let n: usize = n.parse().map_err(|e| format!("{n:?}: {e}"))?;
    if n == 0 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(format!("invalid range {s:?}"));
    }
    Ok(Range { lo, hi, n })
}

/// Default sweep grid when none is given.
pub fn default_a_range() -> Range {
    Range {
        lo: PI / 20.0,
        hi: 19.0 * PI / 20.0,
        n: 10,
    }
}

pub fn default_nu_range() -> Range {
    Range {
        lo: 0.1,
        hi: 10.0,
        n: 10,
    }
}

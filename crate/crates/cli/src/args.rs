use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use quatem::chiral::DEFAULT_STENCIL;
use quatem::geometry::Point;
use quatem::operators::{DEFAULT_CLEARANCE, DEFAULT_EXCLUSION};

/// Default probes for a unit ball; close enough to the centre to satisfy the
/// clearance rule from level 2 on, and off the plane `x₁ = 0`.
pub const DEFAULT_PROBES: [Point; 5] = [
    [0.2, 0.05, -0.1],
    [-0.2, 0.1, 0.05],
    [0.15, -0.1, 0.15],
    [0.25, 0.0, 0.0],
    [-0.2, -0.1, -0.1],
];

#[derive(Parser, Debug)]
#[command(name = "quatem", version, about = "Quaternionic integral operators for chiral electromagnetics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write an icosphere (or ellipsoid) surface mesh in OFF format.
    GenMesh(GenMesh),
    /// Sample an analytic field on mesh or volume quadrature nodes.
    GenField(GenField),
    /// Tabulate Θ_α and Υ_{±α} along a ray.
    KernelProbe(KernelProbe),
    /// Borel-Pompeiu residuals across refinement levels.
    VerifyBp(VerifyBp),
    /// Reconstruct E and H at interior points from boundary traces.
    Reconstruct(Reconstruct),
    /// Test whether boundary traces extend to a chiral Maxwell solution.
    ExtendCheck(ExtendCheck),
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE or RE,IM, got {s:?}")),
    }
}

pub fn parse_point(s: &str) -> Result<Point, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(v).map_err(|_| format!("expected X,Y,Z, got {s:?}"))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Centroid,
    ThreePoint,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Decaying,
    Growing,
}

/// Surface mesh: read from an OFF file or generated as an icosphere.
#[derive(Args, Debug, Clone)]
pub struct MeshArgs {
    /// OFF file; overrides --level/--radius.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Icosphere subdivision level.
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Surface quadrature rule.
    #[arg(long, value_enum, default_value_t = Rule::Centroid)]
    pub rule: Rule,
}

/// Chiral medium constants (normalized units).
#[derive(Args, Debug, Clone)]
pub struct MediumArgs {
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Permittivity as RE or RE,IM.
    #[arg(long, default_value = "1", value_parser = parse_complex)]
    pub epsilon: Complex64,
    /// Permeability as RE or RE,IM.
    #[arg(long, default_value = "1", value_parser = parse_complex)]
    pub mu: Complex64,
    /// Chirality measure (length).
    #[arg(long, default_value_t = 0.25)]
    pub beta: f64,
    /// Square-root branch of the wavenumber.
    #[arg(long, value_enum, default_value_t = BranchArg::Decaying)]
    pub branch: BranchArg,
}

#[derive(Args, Debug)]
pub struct GenMesh {
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Ellipsoid semi-axes A,B,C instead of a sphere.
    #[arg(long, value_parser = parse_point)]
    pub semi_axes: Option<Point>,
    /// Output path (stdout if absent).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Manufactured chiral solution; writes boundary traces.
    Chiral,
    /// ABC Beltrami field with parameter --lambda.
    Abc,
    /// Scalar polynomial x₁.
    ScalarX1,
    /// Vector polynomial x.
    Identity,
    /// Degree-2 polynomial with seeded random coefficients.
    Random,
}

#[derive(Args, Debug)]
#[command(after_help = "\
CSV columns:
  chiral:  triangle,e1_re,e1_im,e2_re,e2_im,e3_re,e3_im,h1_re,h1_im,h2_re,h2_im,h3_re,h3_im
           (one row per surface quadrature node, in node order)
  others:  x,y,z,q0_re,q0_im,q1_re,q1_im,q2_re,q2_im,q3_re,q3_im")]
pub struct GenField {
    #[arg(long, value_enum, default_value_t = Family::Chiral)]
    pub family: Family,
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[command(flatten)]
    pub medium: MediumArgs,
    /// Beltrami parameter as RE or RE,IM.
    #[arg(long, default_value = "1", value_parser = parse_complex)]
    pub lambda: Complex64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Sample on the nodes of a ball volume rule of this level instead of the mesh.
    #[arg(long)]
    pub volume_level: Option<u32>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(after_help = "\
CSV columns: r,theta_re,theta_im,u0_re,u0_im,u1_re,u1_im,u2_re,u2_im,u3_re,u3_im
  where u = Υ_{±α}(r d) for the unit direction d.")]
pub struct KernelProbe {
    #[arg(long, default_value = "1", value_parser = parse_complex)]
    pub alpha: Complex64,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
    #[arg(long, default_value = "1,0,0", value_parser = parse_point)]
    pub direction: Point,
    #[arg(long, default_value_t = 0.1)]
    pub r_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BpField {
    ScalarX1,
    Identity,
    /// Beltrami field annihilated by D ± α.
    Beltrami,
    Random,
}

#[derive(Args, Debug)]
pub struct VerifyBp {
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub levels: Vec<u32>,
    #[arg(long, default_value = "1", value_parser = parse_complex)]
    pub alpha: Complex64,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
    #[arg(long, value_enum, default_value_t = BpField::ScalarX1)]
    pub field: BpField,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Probe point X,Y,Z; repeatable. Defaults to five fixed interior points.
    #[arg(long, value_parser = parse_point)]
    pub probe: Vec<Point>,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = DEFAULT_CLEARANCE)]
    pub clearance: f64,
    #[arg(long, default_value_t = DEFAULT_EXCLUSION)]
    pub exclusion: f64,
    /// Allowed growth between levels when judging monotone decrease.
    #[arg(long, default_value_t = 0.1)]
    pub slack: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Reconstruct {
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[command(flatten)]
    pub medium: MediumArgs,
    /// Trace CSV (see `gen-field --help`).
    #[arg(long)]
    pub traces: PathBuf,
    /// Probe point X,Y,Z; repeatable. Without it, random points are drawn.
    #[arg(long, value_parser = parse_point)]
    pub probe: Vec<Point>,
    #[arg(long, default_value_t = 10)]
    pub probe_count: usize,
    #[arg(long, default_value_t = 0.5)]
    pub probe_radius: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Also report errors against the manufactured solution.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = DEFAULT_CLEARANCE)]
    pub clearance: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Statistic {
    Rms,
    Max,
}

#[derive(Args, Debug)]
pub struct ExtendCheck {
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[command(flatten)]
    pub medium: MediumArgs,
    #[arg(long)]
    pub traces: PathBuf,
    /// Base offset depth; defaults to twice the mesh spacing.
    #[arg(long)]
    pub depth: Option<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_STENCIL)]
    pub stencil: Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = Statistic::Rms)]
    pub statistic: Statistic,
    /// Add random tangential noise of this relative size before checking.
    #[arg(long)]
    pub perturb: Option<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_CLEARANCE)]
    pub clearance: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

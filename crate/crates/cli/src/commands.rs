use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use quatem::chiral::{
    extendibility_residual, perturb_tangential, read_traces_csv, reconstruct_eh, write_traces_csv,
    Branch, ChiralMedium, ExtendibilityConfig, ExtendibilityReport,
};
use quatem::fields::{
    exact_chiral_solution, AbcBeltrami, AnalyticField, ChiralAmplitudes, FieldMetadata,
    PolynomialField,
};
use quatem::geometry::{sample_ball, Point, SurfaceMesh, SurfaceRule, VolumeQuadrature, VolumeScheme};
use quatem::kernels::{theta, upsilon, Sign};
use quatem::operators::{borel_pompeiu, Exclusion, OperatorConfig};
use quatem::ComplexQuaternion;

use crate::args::*;
use crate::Failure;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::GenMesh(a) => gen_mesh(a),
        Command::GenField(a) => gen_field(a),
        Command::KernelProbe(a) => kernel_probe(a),
        Command::VerifyBp(a) => verify_bp(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::ExtendCheck(a) => extend_check(a),
    }
}

/// Writes the artifact to `output` (or stdout) and the summary line to stdout
/// (or stderr when stdout carries the artifact).
fn emit(output: &Option<PathBuf>, artifact: &[u8], summary: &str) -> Result<(), Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, artifact)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            println!("{summary}");
        }
        None => {
            std::io::stdout().write_all(artifact)?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut text = serde_json::to_vec_pretty(value).map_err(|e| Failure::Config(e.to_string()))?;
    text.push(b'\n');
    Ok(text)
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn sign(s: SignArg) -> Sign {
    match s {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    }
}

fn load_mesh(args: &MeshArgs) -> Result<SurfaceMesh, Failure> {
    let rule = match args.rule {
        Rule::Centroid => SurfaceRule::Centroid,
        Rule::ThreePoint => SurfaceRule::ThreePoint,
    };
    let mesh = match &args.mesh {
        Some(path) => SurfaceMesh::read_off(open(path)?, rule)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?,
        None => SurfaceMesh::icosphere(args.radius, args.level)?.with_rule(rule),
    };
    let diagnostics = mesh.checked_normals()?;
    if !diagnostics.orientation_consistent {
        return Err(Failure::Config(format!(
            "mesh orientation is inconsistent at triangles {:?}",
            diagnostics.inconsistent_triangles
        )));
    }
    Ok(mesh)
}

fn make_medium(args: &MediumArgs) -> Result<ChiralMedium, Failure> {
    let branch = match args.branch {
        BranchArg::Decaying => Branch::Decaying,
        BranchArg::Growing => Branch::Growing,
    };
    Ok(ChiralMedium::with_branch(args.omega, args.epsilon, args.mu, args.beta, branch)?)
}

fn gen_mesh(a: GenMesh) -> Result<(), Failure> {
    let mesh = match a.semi_axes {
        Some(axes) => SurfaceMesh::ellipsoid(axes, a.level)?,
        None => SurfaceMesh::icosphere(a.radius, a.level)?,
    };
    let mut buf = Vec::new();
    mesh.write_off(&mut buf)?;
    let summary = format!(
        "gen-mesh: {} vertices, {} triangles, spacing {:.6e}",
        mesh.vertices().len(),
        mesh.triangle_count(),
        mesh.spacing()
    );
    emit(&a.output, &buf, &summary)
}

fn gen_field(a: GenField) -> Result<(), Failure> {
    let mut buf = Vec::new();
    if a.family == Family::Chiral {
        if a.volume_level.is_some() {
            return Err(Failure::Config("the chiral family is sampled on the mesh only".into()));
        }
        let mesh = load_mesh(&a.mesh)?;
        let medium = make_medium(&a.medium)?;
        let solution = exact_chiral_solution(&medium, ChiralAmplitudes::default());
        write_traces_csv(&mesh, &solution.traces(&mesh), &mut buf)?;
        let summary = format!(
            "gen-field: chiral traces on {} nodes (k = {}, alpha1 = {}, alpha2 = {})",
            mesh.nodes().len(),
            medium.k(),
            medium.alpha1(),
            medium.alpha2()
        );
        return emit(&a.output, &buf, &summary);
    }

    let field: Box<dyn AnalyticField> = match a.family {
        Family::Abc => Box::new(AbcBeltrami::with_default_amplitudes(a.lambda)),
        Family::ScalarX1 => Box::new(PolynomialField::scalar_coordinate(0)),
        Family::Identity => Box::new(PolynomialField::identity_vector()),
        Family::Random => Box::new(PolynomialField::random(a.seed)),
        Family::Chiral => unreachable!(),
    };
    let points: Vec<Point> = match a.volume_level {
        Some(level) => VolumeQuadrature::ball(a.mesh.radius, level)?.nodes().to_vec(),
        None => load_mesh(&a.mesh)?.nodes().iter().map(|n| n.point).collect(),
    };
    writeln!(buf, "x,y,z,q0_re,q0_im,q1_re,q1_im,q2_re,q2_im,q3_re,q3_im")?;
    for x in &points {
        write!(buf, "{:e},{:e},{:e}", x[0], x[1], x[2])?;
        for r in field.value(*x).to_reals() {
            write!(buf, ",{r:e}")?;
        }
        writeln!(buf)?;
    }
    let summary = format!("gen-field: {} sampled at {} points", field.metadata().family, points.len());
    emit(&a.output, &buf, &summary)
}

fn kernel_probe(a: KernelProbe) -> Result<(), Failure> {
    let n = (a.direction.iter().map(|d| d * d).sum::<f64>()).sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Failure::Config("direction must be a nonzero vector".into()));
    }
    if !(a.r_min > 0.0 && a.r_max >= a.r_min) || a.samples == 0 {
        return Err(Failure::Config("need 0 < r-min <= r-max and samples > 0".into()));
    }
    let d = a.direction.map(|c| c / n);
    let mut buf = Vec::new();
    writeln!(buf, "r,theta_re,theta_im,u0_re,u0_im,u1_re,u1_im,u2_re,u2_im,u3_re,u3_im")?;
    for i in 0..a.samples {
        let t = if a.samples == 1 { 0.0 } else { i as f64 / (a.samples - 1) as f64 };
        let r = a.r_min + t * (a.r_max - a.r_min);
        let x = d.map(|c| c * r);
        let th = theta(a.alpha, x)?;
        let u = upsilon(a.alpha, sign(a.sign), x)?;
        write!(buf, "{r:e},{:e},{:e}", th.re, th.im)?;
        for v in u.to_reals() {
            write!(buf, ",{v:e}")?;
        }
        writeln!(buf)?;
    }
    let summary = format!("kernel-probe: {} samples for alpha = {}", a.samples, a.alpha);
    emit(&a.output, &buf, &summary)
}

#[derive(Serialize)]
struct BpRow {
    level: u32,
    triangles: usize,
    spacing: f64,
    residuals: Vec<f64>,
    max: f64,
}

#[derive(Serialize)]
struct BpReport {
    schema_version: u32,
    command: &'static str,
    alpha: Complex64,
    sign: Sign,
    radius: f64,
    field: FieldMetadata,
    config: OperatorConfig,
    probes: Vec<Point>,
    rows: Vec<BpRow>,
    decreasing: bool,
}

fn verify_bp(a: VerifyBp) -> Result<(), Failure> {
    if a.levels.is_empty() {
        return Err(Failure::Config("at least one level is required".into()));
    }
    let s = sign(a.sign);
    let field: Box<dyn AnalyticField> = match a.field {
        BpField::ScalarX1 => Box::new(PolynomialField::scalar_coordinate(0)),
        BpField::Identity => Box::new(PolynomialField::identity_vector()),
        // (D ± α)F = (λ ± α)F vanishes for λ = ∓α.
        BpField::Beltrami => Box::new(AbcBeltrami::with_default_amplitudes(-s.apply(a.alpha))),
        BpField::Random => Box::new(PolynomialField::random(a.seed)),
    };
    let probes = if a.probe.is_empty() {
        DEFAULT_PROBES.map(|p| p.map(|c| c * a.radius)).to_vec()
    } else {
        a.probe.clone()
    };
    let config = OperatorConfig {
        clearance: a.clearance,
        exclusion: Exclusion::Relative(a.exclusion),
        ..Default::default()
    };
    let mut rows = Vec::with_capacity(a.levels.len());
    for &level in &a.levels {
        let mesh = SurfaceMesh::icosphere(a.radius, level)?;
        let volume = VolumeScheme::ball(a.radius, level)?;
        let residuals = probes
            .par_iter()
            .map(|&x| {
                borel_pompeiu(field.as_ref(), a.alpha, s, &mesh, &volume, x, &config).map(|r| r.residual)
            })
            .collect::<quatem::Result<Vec<f64>>>()?;
        rows.push(BpRow {
            level,
            triangles: mesh.triangle_count(),
            spacing: mesh.spacing(),
            max: residuals.iter().cloned().fold(0.0, f64::max),
            residuals,
        });
    }
    let decreasing = rows.windows(2).all(|w| w[1].max <= w[0].max * (1.0 + a.slack));
    let report = BpReport {
        schema_version: SCHEMA_VERSION,
        command: "verify-bp",
        alpha: a.alpha,
        sign: s,
        radius: a.radius,
        field: field.metadata(),
        config,
        probes,
        decreasing,
        rows,
    };
    let maxima: Vec<String> = report.rows.iter().map(|r| format!("L{}={:.3e}", r.level, r.max)).collect();
    let summary = format!(
        "verify-bp: {} max residual {} ({})",
        report.field.family,
        maxima.join(" "),
        if decreasing { "decreasing" } else { "NOT decreasing" }
    );
    emit(&a.output, &to_json(&report)?, &summary)?;
    if decreasing {
        Ok(())
    } else {
        Err(Failure::Criterion("residuals do not decrease under refinement".into()))
    }
}

#[derive(Serialize)]
struct ReconstructPoint {
    x: Point,
    e: ComplexQuaternion,
    h: ComplexQuaternion,
    #[serde(skip_serializing_if = "Option::is_none")]
    e_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h_error: Option<f64>,
}

#[derive(Serialize)]
struct ReconstructReport {
    schema_version: u32,
    command: &'static str,
    medium: ChiralMedium,
    triangles: usize,
    spacing: f64,
    points: Vec<ReconstructPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_error: Option<f64>,
}

fn reconstruct(a: Reconstruct) -> Result<(), Failure> {
    let medium = make_medium(&a.medium)?;
    let mesh = load_mesh(&a.mesh)?;
    let traces = read_traces_csv(&mesh, open(&a.traces)?)
        .map_err(|e| Failure::Config(format!("{}: {e}", a.traces.display())))?;
    let probes = if a.probe.is_empty() {
        sample_ball(a.probe_radius, a.probe_count, a.seed)
    } else {
        a.probe.clone()
    };
    let config = OperatorConfig {
        clearance: a.clearance,
        ..Default::default()
    };
    let exact = a
        .exact
        .then(|| exact_chiral_solution(&medium, ChiralAmplitudes::default()));
    let points = probes
        .par_iter()
        .map(|&x| {
            let v = reconstruct_eh(&mesh, &traces, None, &medium, x, &config)?;
            let errors = exact.as_ref().map(|s| {
                let w = s.at(x);
                let rel = |got: ComplexQuaternion, want: quatem::ComplexVector3| {
                    (got - want.embed()).norm() / want.norm().max(1e-300)
                };
                (rel(v.e, w.e), rel(v.h, w.h))
            });
            Ok(ReconstructPoint {
                x,
                e: v.e,
                h: v.h,
                e_error: errors.map(|e| e.0),
                h_error: errors.map(|e| e.1),
            })
        })
        .collect::<quatem::Result<Vec<_>>>()?;
    let max_error = exact.as_ref().map(|_| {
        points
            .iter()
            .map(|p| p.e_error.unwrap_or(0.0).max(p.h_error.unwrap_or(0.0)))
            .fold(0.0, f64::max)
    });
    let report = ReconstructReport {
        schema_version: SCHEMA_VERSION,
        command: "reconstruct",
        medium,
        triangles: mesh.triangle_count(),
        spacing: mesh.spacing(),
        points,
        max_error,
    };
    let summary = match max_error {
        Some(err) => format!("reconstruct: {} points, max relative error {err:.3e}", report.points.len()),
        None => format!("reconstruct: {} points", report.points.len()),
    };
    emit(&a.output, &to_json(&report)?, &summary)
}

#[derive(Serialize)]
struct Perturbation {
    amplitude: f64,
    seed: u64,
}

#[derive(Serialize)]
struct ExtendReport {
    schema_version: u32,
    command: &'static str,
    medium: ChiralMedium,
    triangles: usize,
    spacing: f64,
    perturbation: Option<Perturbation>,
    statistic: &'static str,
    threshold: f64,
    aggregate: f64,
    extendible: bool,
    report: ExtendibilityReport,
}

fn extend_check(a: ExtendCheck) -> Result<(), Failure> {
    let medium = make_medium(&a.medium)?;
    let mesh = load_mesh(&a.mesh)?;
    let mut traces = read_traces_csv(&mesh, open(&a.traces)?)
        .map_err(|e| Failure::Config(format!("{}: {e}", a.traces.display())))?;
    if let Some(amplitude) = a.perturb {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Failure::Config("perturbation must be non-negative".into()));
        }
        traces = perturb_tangential(&mesh, &traces, amplitude, a.seed);
    }
    let config = ExtendibilityConfig {
        depth: a.depth,
        stencil: a.stencil.clone(),
        operator: OperatorConfig {
            clearance: a.clearance,
            ..Default::default()
        },
    };
    let report = extendibility_residual(&mesh, &traces, &medium, &config)?;
    let (statistic, aggregate) = match a.statistic {
        Statistic::Rms => ("rms", report.combined.rms),
        Statistic::Max => ("max", report.combined.max),
    };
    let extendible = aggregate <= a.threshold;
    let out = ExtendReport {
        schema_version: SCHEMA_VERSION,
        command: "extend-check",
        medium,
        triangles: mesh.triangle_count(),
        spacing: mesh.spacing(),
        perturbation: a.perturb.map(|amplitude| Perturbation { amplitude, seed: a.seed }),
        statistic,
        threshold: a.threshold,
        aggregate,
        extendible,
        report,
    };
    let summary = format!(
        "extend-check: {statistic} residual {aggregate:.4e} vs threshold {:.4e}: {}",
        a.threshold,
        if extendible { "extendible" } else { "NOT extendible" }
    );
    emit(&a.output, &to_json(&out)?, &summary)?;
    if extendible {
        Ok(())
    } else {
        Err(Failure::Criterion(format!(
            "aggregate residual {aggregate:.4e} exceeds threshold {:.4e}",
            a.threshold
        )))
    }
}

//! Test of whether boundary data `(e, h)` extend to a source-free solution.
//!
//! For genuine traces the boundary integrals
//! `E(x) = -(1/2)∫_Γ {Υ₁ n (e + ih) + Υ₂ n (e - ih)}` and the matching `H(x)`
//! tend to `e(τ)`, `h(τ)` as `x → τ ∈ Γ` from inside, with vanishing scalar
//! parts. The limit is approximated by evaluating at `τ - m d n(τ)` for a few
//! multiples `m` of a depth `d` and extrapolating polynomially to `d = 0`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::{reconstruct_eh, ChiralMedium, EmField};
use crate::error::{Error, Result};
use crate::geometry::{vec3, Point, SurfaceMesh};
use crate::operators::OperatorConfig;
use crate::quaternion::{Complex, ComplexQuaternion, ComplexVector3};

/// Offset multiples of the depth used for extrapolation.
pub const DEFAULT_STENCIL: [f64; 3] = [1.0, 1.5, 2.0];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtendibilityConfig {
    /// Base depth; `None` means twice the mesh spacing.
    pub depth: Option<f64>,
    /// Multiples of the depth at which the integrals are evaluated.
    pub stencil: Vec<f64>,
    pub operator: OperatorConfig,
}

impl Default for ExtendibilityConfig {
    fn default() -> Self {
        Self {
            depth: None,
            stencil: DEFAULT_STENCIL.to_vec(),
            operator: OperatorConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Aggregate {
    pub max: f64,
    pub rms: f64,
}

impl Aggregate {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let (mut max, mut sum, mut n) = (0.0f64, 0.0, 0usize);
        for v in values {
            max = max.max(v);
            sum += v * v;
            n += 1;
        }
        let rms = if n == 0 { 0.0 } else { (sum / n as f64).sqrt() };
        Self { max, rms }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointResidual {
    pub triangle: usize,
    pub boundary_point: Point,
    pub e: f64,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtendibilityReport {
    pub depth: f64,
    pub stencil: Vec<f64>,
    /// RMS magnitudes of `e` and `h` at the collocation points; residuals are
    /// divided by these (or left absolute when zero).
    pub e_scale: f64,
    pub h_scale: f64,
    pub points: Vec<PointResidual>,
    pub e: Aggregate,
    pub h: Aggregate,
    /// Over the per-point values `sqrt((r_e² + r_h²)/2)`.
    pub combined: Aggregate,
}

/// Lagrange weights that extrapolate samples at `nodes` to zero.
fn extrapolation_weights(nodes: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|i| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &tj)| tj / (tj - nodes[i]))
                .product()
        })
        .collect()
}

/// Trace values at the centroid of triangle `t`: the mean over its nodes.
fn centroid_value(mesh: &SurfaceMesh, traces: &[EmField], t: usize) -> EmField {
    let range = mesh.triangle_nodes(t);
    let n = Complex::new(1.0 / range.len() as f64, 0.0);
    let mut acc: EmField = EmField::default();
    for f in &traces[range] {
        acc.e = acc.e + f.e;
        acc.h = acc.h + f.h;
    }
    EmField {
        e: acc.e * n,
        h: acc.h * n,
    }
}

pub fn extendibility_residual(
    mesh: &SurfaceMesh,
    traces: &[EmField],
    medium: &ChiralMedium,
    config: &ExtendibilityConfig,
) -> Result<ExtendibilityReport> {
    if traces.len() != mesh.nodes().len() {
        return Err(Error::LengthMismatch {
            expected: mesh.nodes().len(),
            found: traces.len(),
        });
    }
    let stencil = &config.stencil;
    let distinct = stencil.iter().enumerate().all(|(i, a)| stencil[..i].iter().all(|b| b != a));
    if stencil.is_empty() || !distinct || stencil.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
        return Err(Error::InvalidParameter(
            "stencil multiples must be distinct, positive and finite".into(),
        ));
    }
    let depth = config.depth.unwrap_or(2.0 * mesh.spacing());
    if !(depth > 0.0 && depth.is_finite()) {
        return Err(Error::InvalidParameter(format!("depth must be positive, got {depth}")));
    }

    let mut offsets = Vec::with_capacity(stencil.len());
    for &m in stencil {
        let points = mesh.interior_offset_points(m * depth)?;
        if let Some(p) = points.iter().find(|p| p.feature_warning) {
            return Err(Error::InvalidParameter(format!(
                "depth {} exceeds the local feature size near triangle {}",
                m * depth,
                p.triangle
            )));
        }
        offsets.push(points);
    }
    let weights = extrapolation_weights(stencil);

    let n = mesh.triangle_count();
    let limits: Vec<(EmField<ComplexQuaternion>, EmField)> = (0..n)
        .into_par_iter()
        .map(|t| {
            let mut limit = EmField {
                e: ComplexQuaternion::ZERO,
                h: ComplexQuaternion::ZERO,
            };
            for (points, &w) in offsets.iter().zip(&weights) {
                let v = reconstruct_eh(mesh, traces, None, medium, points[t].point, &config.operator)?;
                limit.e += v.e * w;
                limit.h += v.h * w;
            }
            Ok((limit, centroid_value(mesh, traces, t)))
        })
        .collect::<Result<_>>()?;

    let rms = |f: fn(&EmField) -> ComplexVector3| {
        (limits.iter().map(|(_, tr)| f(tr).norm().powi(2)).sum::<f64>() / n as f64).sqrt()
    };
    let e_scale = rms(|f| f.e);
    let h_scale = rms(|f| f.h);
    let divide = |x: f64, s: f64| if s > 0.0 { x / s } else { x };

    let points: Vec<PointResidual> = limits
        .iter()
        .enumerate()
        .map(|(t, (limit, trace))| PointResidual {
            triangle: t,
            boundary_point: mesh.centroid(t),
            e: divide((limit.e - trace.e.embed()).norm(), e_scale),
            h: divide((limit.h - trace.h.embed()).norm(), h_scale),
        })
        .collect();

    Ok(ExtendibilityReport {
        depth,
        stencil: stencil.clone(),
        e_scale,
        h_scale,
        e: Aggregate::of(points.iter().map(|p| p.e)),
        h: Aggregate::of(points.iter().map(|p| p.h)),
        combined: Aggregate::of(points.iter().map(|p| ((p.e * p.e + p.h * p.h) / 2.0).sqrt())),
        points,
    })
}

/// Adds to each triangle's `e` and `h` a random tangential vector of
/// Hermitian length `amplitude` times the local trace magnitude.
pub fn perturb_tangential(mesh: &SurfaceMesh, traces: &[EmField], amplitude: f64, seed: u64) -> Vec<EmField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = traces.to_vec();
    for t in 0..mesh.triangle_count() {
        let n = mesh.normal(t);
        let [a, b, _] = mesh.triangles()[t].map(|i| mesh.vertices()[i]);
        let t1 = vec3::normalize(vec3::sub(b, a));
        let t2 = vec3::cross(n, t1);
        let centre = centroid_value(mesh, traces, t);
        let mut draw = || {
            let z: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            let (c1, c2) = (Complex::new(z[0], z[1]), Complex::new(z[2], z[3]));
            let v = ComplexVector3::from_real(t1) * c1 + ComplexVector3::from_real(t2) * c2;
            let norm = v.norm();
            if norm > 0.0 { v * Complex::new(1.0 / norm, 0.0) } else { v }
        };
        let de = draw() * Complex::new(amplitude * centre.e.norm(), 0.0);
        let dh = draw() * Complex::new(amplitude * centre.h.norm(), 0.0);
        for f in &mut out[mesh.triangle_nodes(t)] {
            f.e = f.e + de;
            f.h = f.h + dh;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{exact_chiral_solution, ChiralAmplitudes};
    use crate::quaternion::ONE;

    #[test]
    fn extrapolation_weights_reproduce_quadratics() {
        let w = extrapolation_weights(&DEFAULT_STENCIL);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let p = |t: f64| 2.0 - 3.0 * t + 0.5 * t * t;
        let v: f64 = DEFAULT_STENCIL.iter().zip(&w).map(|(t, w)| w * p(*t)).sum();
        assert!((v - 2.0).abs() < 1e-13);
        assert_eq!(extrapolation_weights(&[1.0]), vec![1.0]);
    }

    #[test]
    fn zero_traces_have_zero_residual() {
        let mesh = SurfaceMesh::icosphere(1.0, 3).unwrap();
        let m = ChiralMedium::new(1.0, ONE, ONE, 0.25).unwrap();
        let traces = vec![EmField::default(); mesh.nodes().len()];
        let r = extendibility_residual(&mesh, &traces, &m, &ExtendibilityConfig::default()).unwrap();
        assert_eq!(r.combined, Aggregate::default());
    }

    #[test]
    fn bad_stencil_or_depth_is_rejected() {
        let mesh = SurfaceMesh::icosphere(1.0, 1).unwrap();
        let m = ChiralMedium::new(1.0, ONE, ONE, 0.25).unwrap();
        let traces = vec![EmField::default(); mesh.nodes().len()];
        let mut cfg = ExtendibilityConfig { stencil: vec![1.0, 1.0], ..Default::default() };
        assert!(extendibility_residual(&mesh, &traces, &m, &cfg).is_err());
        cfg.stencil = vec![1.0];
        cfg.depth = Some(0.8);
        assert!(extendibility_residual(&mesh, &traces, &m, &cfg).is_err());
        cfg.depth = Some(0.01);
        assert!(matches!(
            extendibility_residual(&mesh, &traces, &m, &cfg),
            Err(Error::NearBoundary { .. })
        ));
    }

    #[test]
    fn perturbation_is_tangential_and_seeded() {
        let mesh = SurfaceMesh::icosphere(1.0, 2).unwrap();
        let m = ChiralMedium::new(1.0, ONE, ONE, 0.25).unwrap();
        let traces = exact_chiral_solution(&m, ChiralAmplitudes::default()).traces(&mesh);
        let a = perturb_tangential(&mesh, &traces, 0.1, 42);
        let b = perturb_tangential(&mesh, &traces, 0.1, 42);
        assert_eq!(a, b);
        for t in 0..mesh.triangle_count() {
            let d = a[t].e - traces[t].e;
            let n = mesh.normal_vector(t);
            assert!(d.dot(&n).norm() < 1e-14);
            let rel = d.norm() / traces[t].e.norm();
            assert!((rel - 0.1).abs() < 1e-12);
        }
    }

    #[test]
    fn genuine_traces_beat_perturbed_ones() {
        let mesh = SurfaceMesh::icosphere(1.0, 3).unwrap();
        let m = ChiralMedium::new(1.0, ONE, ONE, 0.25).unwrap();
        let traces = exact_chiral_solution(&m, ChiralAmplitudes::default()).traces(&mesh);
        let cfg = ExtendibilityConfig::default();
        let r0 = extendibility_residual(&mesh, &traces, &m, &cfg).unwrap();
        let noisy = perturb_tangential(&mesh, &traces, 0.1, 42);
        let r1 = extendibility_residual(&mesh, &noisy, &m, &cfg).unwrap();
        assert!(r1.combined.rms > 2.0 * r0.combined.rms, "{} {}", r0.combined.rms, r1.combined.rms);
    }
}

//! Integral representation of `Φ`, `Ψ` and of `E`, `H` inside the domain.
//!
//! ```text
//! Φ(x) = T_{α₁}[rhs_Φ](x) + K_{α₁}[Φ|Γ](x)
//! Ψ(x) = T_{-α₂}[rhs_Ψ](x) + K_{-α₂}[Ψ|Γ](x)
//! ```

use super::{phi_psi_rhs, ChiralMedium, CurrentDensity, EmField, SplitField};
use crate::error::{Error, Result};
use crate::geometry::{Point, SurfaceMesh, VolumeScheme};
use crate::operators::{visit_boundary, visit_volume, OperatorConfig};
use crate::quaternion::{Complex, ComplexQuaternion, I};

/// A current density together with the volume rule used to integrate it.
#[derive(Clone, Copy)]
pub struct Source<'a> {
    pub current: &'a dyn CurrentDensity,
    pub volume: &'a VolumeScheme,
}

fn check_traces<T>(mesh: &SurfaceMesh, traces: &[T]) -> Result<()> {
    let expected = mesh.nodes().len();
    if traces.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: traces.len(),
        });
    }
    Ok(())
}

/// `Φ(x)` and `Ψ(x)` from their boundary traces and the source.
pub fn phi_psi_representation(
    mesh: &SurfaceMesh,
    traces: &[SplitField],
    source: Option<Source<'_>>,
    medium: &ChiralMedium,
    x: Point,
    config: &OperatorConfig,
) -> Result<SplitField<ComplexQuaternion>> {
    check_traces(mesh, traces)?;
    let (k1, k2) = medium.kernels();

    let mut phi = ComplexQuaternion::ZERO;
    let mut psi = ComplexQuaternion::ZERO;
    visit_boundary(mesh, x, config.clearance, |j, z, r, n, w| {
        phi -= k1.eval_at(z, r) * n * traces[j].phi.embed() * w;
        psi -= k2.eval_at(z, r) * n * traces[j].psi.embed() * w;
    })?;

    if let Some(source) = source {
        let q = source.volume.quadrature_at(x)?;
        visit_volume(&q, x, config.exclusion, |j, z, r, w| {
            let rhs = phi_psi_rhs(source.current, medium, q.nodes()[j]);
            phi += k1.eval_at(z, r) * rhs.phi * w;
            psi += k2.eval_at(z, r) * rhs.psi * w;
        })?;
    }
    Ok(SplitField { phi, psi })
}

/// `E(x)` and `H(x)` assembled directly from `e`, `h` and `j`:
///
/// ```text
/// E = (i/2)∫_Ω {Υ₁[j/(1+kβ) - div j/k] - Υ₂[j/(1-kβ) + div j/k]}
///     - (1/2)∫_Γ {(Υ₁ + Υ₂) n e + i(Υ₁ - Υ₂) n h}
/// H = (1/2)∫_Ω {Υ₁[j/(1+kβ) - div j/k] + Υ₂[j/(1-kβ) + div j/k]}
///     - (1/2)∫_Γ {-i(Υ₁ - Υ₂) n e + (Υ₁ + Υ₂) n h}
/// ```
/// with `Υ₁ = Υ_{α₁}` and `Υ₂ = Υ_{-α₂}`.
pub fn reconstruct_eh(
    mesh: &SurfaceMesh,
    traces: &[EmField],
    source: Option<Source<'_>>,
    medium: &ChiralMedium,
    x: Point,
    config: &OperatorConfig,
) -> Result<EmField<ComplexQuaternion>> {
    check_traces(mesh, traces)?;
    let (k1, k2) = medium.kernels();
    let half = Complex::new(0.5, 0.0);

    let mut e = ComplexQuaternion::ZERO;
    let mut h = ComplexQuaternion::ZERO;
    visit_boundary(mesh, x, config.clearance, |j, z, r, n, w| {
        let (u1, u2) = (k1.eval_at(z, r), k2.eval_at(z, r));
        let sum_n = (u1 + u2) * n;
        let diff_n = (u1 - u2) * n;
        let ej = traces[j].e.embed();
        let hj = traces[j].h.embed();
        e -= (sum_n * ej + diff_n * hj * I) * (half * w);
        h -= (sum_n * hj - diff_n * ej * I) * (half * w);
    })?;

    if let Some(source) = source {
        let kb = medium.k() * medium.beta();
        let (c1, c2) = (1.0 / (1.0 + kb), 1.0 / (1.0 - kb));
        let inv_k = 1.0 / medium.k();
        let q = source.volume.quadrature_at(x)?;
        visit_volume(&q, x, config.exclusion, |j, z, r, w| {
            let y = q.nodes()[j];
            let jv = source.current.current(y);
            let div = source.current.divergence(y) * inv_k;
            let a = ComplexQuaternion::from_parts(-div, jv * c1);
            let b = ComplexQuaternion::from_parts(div, jv * c2);
            let (u1, u2) = (k1.eval_at(z, r), k2.eval_at(z, r));
            e += (u1 * a - u2 * b) * (I * half * w);
            h += (u1 * a + u2 * b) * (half * w);
        })?;
    }
    Ok(EmField { e, h })
}

/// `merge ∘ phi_psi_representation ∘ split`.
pub fn reconstruct_eh_via_split(
    mesh: &SurfaceMesh,
    traces: &[EmField],
    source: Option<Source<'_>>,
    medium: &ChiralMedium,
    x: Point,
    config: &OperatorConfig,
) -> Result<EmField<ComplexQuaternion>> {
    let split: Vec<SplitField> = traces.iter().map(|t| t.split()).collect();
    phi_psi_representation(mesh, &split, source, medium, x, config).map(SplitField::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chiral::AffineCurrent;
    use crate::fields::{exact_chiral_solution, ChiralAmplitudes};
    use crate::quaternion::{ComplexVector3, ONE, ZERO};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn rel(a: &EmField<ComplexQuaternion>, b: &EmField<ComplexQuaternion>) -> f64 {
        let num = ((a.e - b.e).norm().powi(2) + (a.h - b.h).norm().powi(2)).sqrt();
        let den = (b.e.norm().powi(2) + b.h.norm().powi(2)).sqrt();
        num / den
    }

    #[test]
    fn zero_data_give_zero() {
        let mesh = SurfaceMesh::icosphere(1.0, 1).unwrap();
        let m = ChiralMedium::new(1.0, ONE, ONE, 0.25).unwrap();
        let traces = vec![EmField::default(); mesh.nodes().len()];
        let cfg = OperatorConfig { clearance: 0.5, ..Default::default() };
        let r = reconstruct_eh(&mesh, &traces, None, &m, [0.0; 3], &cfg).unwrap();
        assert_eq!(r.e, ComplexQuaternion::ZERO);
        assert_eq!(r.h, ComplexQuaternion::ZERO);
    }

    #[test]
    fn exact_traces_reproduce_interior_values() {
        let mesh = SurfaceMesh::icosphere(1.0, 3).unwrap();
        let m = ChiralMedium::new(1.0, ONE, ONE, 0.25).unwrap();
        let sol = exact_chiral_solution(&m, ChiralAmplitudes::default());
        let traces = sol.traces(&mesh);
        let x = [0.2, -0.3, 0.1];
        let got = reconstruct_eh(&mesh, &traces, None, &m, x, &OperatorConfig::default()).unwrap();
        let want = sol.at(x);
        let want = EmField { e: want.e.embed(), h: want.h.embed() };
        assert!(rel(&got, &want) < 0.05, "{}", rel(&got, &want));
    }

    #[test]
    fn both_assemblies_agree_with_sources() {
        let mesh = SurfaceMesh::icosphere(1.0, 2).unwrap();
        let volume = VolumeScheme::ball(1.0, 1).unwrap();
        let m = ChiralMedium::new(1.3, c(1.0, 0.2), ONE, 0.15).unwrap();
        let traces: Vec<EmField> = mesh
            .nodes()
            .iter()
            .map(|n| EmField {
                e: ComplexVector3::new(c(n.point[0], 1.0), ONE, c(0.0, n.point[2])),
                h: ComplexVector3::new(ZERO, c(n.point[1], -0.5), c(2.0, 0.0)),
            })
            .collect();
        let j = AffineCurrent {
            offset: ComplexVector3::new(ONE, c(0.0, 1.0), ZERO),
            gradient: [[c(1.0, 0.5), ZERO, ONE], [ZERO, c(-0.3, 0.0), ZERO], [ONE, ZERO, c(0.0, 2.0)]],
        };
        let source = Source { current: &j, volume: &volume };
        let cfg = OperatorConfig { clearance: 0.5, ..Default::default() };
        for x in [[0.0, 0.0, 0.0], [0.1, 0.2, -0.3]] {
            let a = reconstruct_eh(&mesh, &traces, Some(source), &m, x, &cfg).unwrap();
            let b = reconstruct_eh_via_split(&mesh, &traces, Some(source), &m, x, &cfg).unwrap();
            assert!(rel(&a, &b) < 1e-12, "{}", rel(&a, &b));
        }
    }

    #[test]
    fn representation_is_linear_in_traces() {
        let mesh = SurfaceMesh::icosphere(1.0, 1).unwrap();
        let m = ChiralMedium::new(1.0, ONE, ONE, 0.2).unwrap();
        let n = mesh.nodes().len();
        let a: Vec<SplitField> = (0..n)
            .map(|i| SplitField {
                phi: ComplexVector3::from_real([i as f64, 1.0, 0.0]),
                psi: ComplexVector3::new(ZERO, c(0.0, i as f64), ONE),
            })
            .collect();
        let b: Vec<SplitField> = (0..n)
            .map(|i| SplitField {
                phi: ComplexVector3::new(c(0.5, 0.5), ZERO, c(i as f64, 0.0)),
                psi: ComplexVector3::from_real([1.0, -(i as f64), 2.0]),
            })
            .collect();
        let s = c(0.3, -2.0);
        let ab: Vec<SplitField> = a
            .iter()
            .zip(&b)
            .map(|(a, b)| SplitField { phi: a.phi + b.phi * s, psi: a.psi + b.psi * s })
            .collect();
        let cfg = OperatorConfig { clearance: 0.5, ..Default::default() };
        let x = [0.1, 0.0, 0.1];
        let ra = phi_psi_representation(&mesh, &a, None, &m, x, &cfg).unwrap();
        let rb = phi_psi_representation(&mesh, &b, None, &m, x, &cfg).unwrap();
        let rab = phi_psi_representation(&mesh, &ab, None, &m, x, &cfg).unwrap();
        assert!((rab.phi - ra.phi - rb.phi * s).norm() < 1e-12 * rab.phi.norm());
        assert!((rab.psi - ra.psi - rb.psi * s).norm() < 1e-12 * rab.psi.norm());
    }

    #[test]
    fn trace_length_is_checked() {
        let mesh = SurfaceMesh::icosphere(1.0, 0).unwrap();
        let m = ChiralMedium::new(1.0, ONE, ONE, 0.2).unwrap();
        let err = reconstruct_eh(&mesh, &[EmField::default()], None, &m, [0.0; 3], &OperatorConfig::default());
        assert!(matches!(err, Err(Error::LengthMismatch { expected: 20, found: 1 })));
    }
}

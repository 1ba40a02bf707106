//! Discrete Teodorescu (volume) and Cauchy-type (boundary) operators.
//!
//! ```text
//! T_{±α} f(x) =  ∫_Ω Υ_{±α}(x - y) f(y) dy
//! K_{±α} f(x) = -∫_Γ Υ_{±α}(x - y) n(y) f(y) dΓ_y
//! ```
//!
//! Products are taken in the written order; the algebra is not commutative.
//! For `f ∈ C¹(Ω̄)` and `x ∈ Ω` these satisfy `(K_α + T_α D_α) f = f`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::AnalyticField;
use crate::geometry::{vec3, Point, SurfaceMesh, VolumeQuadrature, VolumeScheme};
use crate::kernels::{Kernel, Sign};
use crate::quaternion::{Complex, ComplexQuaternion};

/// Boundary quadrature needs `dist(x, Γ) >= DEFAULT_CLEARANCE * local spacing`.
pub const DEFAULT_CLEARANCE: f64 = 2.0;
/// Volume nodes closer than this many local spacings to `x` are skipped.
pub const DEFAULT_EXCLUSION: f64 = 0.5;
/// Denominator floor of the relative Borel-Pompeiu residual.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// A density sampled on the quadrature nodes of a surface mesh.
#[derive(Clone, Debug)]
pub struct BoundaryDensity<'a> {
    mesh: &'a SurfaceMesh,
    values: Vec<ComplexQuaternion>,
}

impl<'a> BoundaryDensity<'a> {
    pub fn new(mesh: &'a SurfaceMesh, values: Vec<ComplexQuaternion>) -> Result<Self> {
        check_values(mesh.nodes().len(), &values)?;
        Ok(Self { mesh, values })
    }

    pub fn from_fn<F: Fn(Point) -> ComplexQuaternion>(mesh: &'a SurfaceMesh, f: F) -> Self {
        let values = mesh.nodes().iter().map(|n| f(n.point)).collect();
        Self { mesh, values }
    }

    pub fn mesh(&self) -> &SurfaceMesh {
        self.mesh
    }

    pub fn values(&self) -> &[ComplexQuaternion] {
        &self.values
    }
}

/// A density sampled on the nodes of a volume quadrature.
#[derive(Clone, Debug)]
pub struct VolumeDensity<'a> {
    quadrature: &'a VolumeQuadrature,
    values: Vec<ComplexQuaternion>,
}

impl<'a> VolumeDensity<'a> {
    pub fn new(quadrature: &'a VolumeQuadrature, values: Vec<ComplexQuaternion>) -> Result<Self> {
        check_values(quadrature.len(), &values)?;
        Ok(Self { quadrature, values })
    }

    pub fn from_fn<F: Fn(Point) -> ComplexQuaternion>(
        quadrature: &'a VolumeQuadrature,
        f: F,
    ) -> Self {
        let values = quadrature.nodes().iter().map(|&y| f(y)).collect();
        Self { quadrature, values }
    }

    pub fn quadrature(&self) -> &VolumeQuadrature {
        self.quadrature
    }

    pub fn values(&self) -> &[ComplexQuaternion] {
        &self.values
    }
}

fn check_values(expected: usize, values: &[ComplexQuaternion]) -> Result<()> {
    if values.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: values.len(),
        });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("density value {i} is not finite")));
    }
    Ok(())
}

/// Treatment of volume nodes near the evaluation point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Exclusion {
    /// Every node is used; a node at `x` is an error.
    Disabled,
    /// Skip nodes with `|x - y_j| < c * spacing_j`; the skipped weight is not
    /// redistributed.
    Relative(f64),
}

impl Default for Exclusion {
    fn default() -> Self {
        Exclusion::Relative(DEFAULT_EXCLUSION)
    }
}

/// `T_{±α} f(x)`.
pub fn teodorescu(
    alpha: Complex,
    sign: Sign,
    density: &VolumeDensity<'_>,
    x: Point,
    exclusion: Exclusion,
) -> Result<ComplexQuaternion> {
    teodorescu_with_kernel(&Kernel::upsilon(alpha, sign), density, x, exclusion)
}

/// Volume operator for an arbitrary kernel `-grad Θ_κ + s Θ_κ`.
pub fn teodorescu_with_kernel(
    kernel: &Kernel,
    density: &VolumeDensity<'_>,
    x: Point,
    exclusion: Exclusion,
) -> Result<ComplexQuaternion> {
    let mut acc = ComplexQuaternion::ZERO;
    visit_volume(density.quadrature, x, exclusion, |j, z, r, w| {
        acc += kernel.eval_at(z, r) * density.values[j] * w;
    })?;
    Ok(acc)
}

/// Calls `visit(j, x - y_j, |x - y_j|, w_j)` for every retained volume node.
pub(crate) fn visit_volume<V>(
    q: &VolumeQuadrature,
    x: Point,
    exclusion: Exclusion,
    mut visit: V,
) -> Result<()>
where
    V: FnMut(usize, Point, f64, f64),
{
    for (j, (&y, &w)) in q.nodes().iter().zip(q.weights()).enumerate() {
        let z = vec3::sub(x, y);
        let r = vec3::norm(z);
        match exclusion {
            Exclusion::Relative(c) if r < c * q.local_spacing(j) || r == 0.0 => continue,
            Exclusion::Disabled if r == 0.0 => return Err(Error::CoincidentNode { node: j }),
            _ => {}
        }
        visit(j, z, r, w);
    }
    Ok(())
}

/// `K_{±α} f(x)` at an interior point obeying the clearance rule.
pub fn cauchy_boundary(
    alpha: Complex,
    sign: Sign,
    density: &BoundaryDensity<'_>,
    x: Point,
    clearance: f64,
) -> Result<ComplexQuaternion> {
    cauchy_boundary_with_kernel(&Kernel::upsilon(alpha, sign), density, x, clearance)
}

pub fn cauchy_boundary_with_kernel(
    kernel: &Kernel,
    density: &BoundaryDensity<'_>,
    x: Point,
    clearance: f64,
) -> Result<ComplexQuaternion> {
    let mut acc = ComplexQuaternion::ZERO;
    visit_boundary(density.mesh, x, clearance, |j, z, r, n, w| {
        acc += kernel.eval_at(z, r) * n * density.values[j] * w;
    })?;
    Ok(-acc)
}

/// Checks clearance, then calls `visit(j, x - y_j, |x - y_j|, n_j, a_j)` for
/// every boundary quadrature node.
pub(crate) fn visit_boundary<V>(mesh: &SurfaceMesh, x: Point, clearance: f64, mut visit: V) -> Result<()>
where
    V: FnMut(usize, Point, f64, ComplexQuaternion, f64),
{
    mesh.check_clearance(x, clearance)?;
    for (j, node) in mesh.nodes().iter().enumerate() {
        let z = vec3::sub(x, node.point);
        let r = vec3::norm(z);
        if r == 0.0 {
            return Err(Error::Singularity { distance: r });
        }
        visit(j, z, r, mesh.normal_vector(node.triangle).embed(), node.weight);
    }
    Ok(())
}

/// The three pieces of the Borel-Pompeiu identity at one point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BorelPompeiu {
    pub cauchy: ComplexQuaternion,
    pub teodorescu: ComplexQuaternion,
    pub exact: ComplexQuaternion,
    /// `|K f + T D f - f| / max(|f|, floor)`.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorConfig {
    pub clearance: f64,
    pub exclusion: Exclusion,
    pub floor: f64,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        Self {
            clearance: DEFAULT_CLEARANCE,
            exclusion: Exclusion::default(),
            floor: RESIDUAL_FLOOR,
        }
    }
}

/// Evaluates `K_{±α} f(x) + T_{±α}(D_{±α} f)(x)` against `f(x)`.
///
/// The boundary density is `f` on the mesh nodes; the volume density is the
/// exact `D_{±α} f` on `volume.quadrature_at(x)`.
pub fn borel_pompeiu(
    field: &dyn AnalyticField,
    alpha: Complex,
    sign: Sign,
    mesh: &SurfaceMesh,
    volume: &VolumeScheme,
    x: Point,
    config: &OperatorConfig,
) -> Result<BorelPompeiu> {
    let boundary = BoundaryDensity::from_fn(mesh, |y| field.value(y));
    let cauchy = cauchy_boundary(alpha, sign, &boundary, x, config.clearance)?;
    let quadrature = volume.quadrature_at(x)?;
    let source = VolumeDensity::from_fn(&quadrature, |y| field.d_alpha(alpha, sign, y));
    let teodorescu = teodorescu(alpha, sign, &source, x, config.exclusion)?;
    let exact = field.value(x);
    let residual = (cauchy + teodorescu - exact).norm() / exact.norm().max(config.floor);
    Ok(BorelPompeiu {
        cauchy,
        teodorescu,
        exact,
        residual,
    })
}

pub fn borel_pompeiu_residual(
    field: &dyn AnalyticField,
    alpha: Complex,
    sign: Sign,
    mesh: &SurfaceMesh,
    volume: &VolumeScheme,
    x: Point,
) -> Result<f64> {
    borel_pompeiu(field, alpha, sign, mesh, volume, x, &OperatorConfig::default())
        .map(|bp| bp.residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{AbcBeltrami, PolynomialField};
    use crate::geometry::Pole;
    use crate::quaternion::{ComplexVector3, ONE, ZERO};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn zero_densities_give_zero() {
        let mesh = SurfaceMesh::icosphere(1.0, 2).unwrap();
        let b = BoundaryDensity::new(&mesh, vec![ComplexQuaternion::ZERO; mesh.nodes().len()]).unwrap();
        let k = cauchy_boundary(c(1.0, 0.0), Sign::Plus, &b, [0.1, 0.0, 0.0], 2.0).unwrap();
        assert_eq!(k, ComplexQuaternion::ZERO);

        let q = VolumeQuadrature::ball(1.0, 1).unwrap();
        let v = VolumeDensity::new(&q, vec![ComplexQuaternion::ZERO; q.len()]).unwrap();
        let t = teodorescu(c(1.0, 0.0), Sign::Plus, &v, [0.1, 0.0, 0.0], Exclusion::default()).unwrap();
        assert_eq!(t, ComplexQuaternion::ZERO);
    }

    #[test]
    fn density_length_is_checked() {
        let mesh = SurfaceMesh::icosphere(1.0, 0).unwrap();
        assert!(matches!(
            BoundaryDensity::new(&mesh, vec![ComplexQuaternion::ONE; 3]),
            Err(Error::LengthMismatch { expected: 20, found: 3 })
        ));
        let mut values = vec![ComplexQuaternion::ONE; 20];
        values[3].q2 = c(f64::NAN, 0.0);
        assert!(BoundaryDensity::new(&mesh, values).is_err());
    }

    #[test]
    fn teodorescu_of_constant_vanishes_at_centre_for_laplace_kernel() {
        let q = VolumeQuadrature::ball(1.0, 2).unwrap();
        let v = VolumeDensity::from_fn(&q, |_| ComplexQuaternion::ONE);
        let t = teodorescu(c(0.0, 0.0), Sign::Plus, &v, [0.0; 3], Exclusion::default()).unwrap();
        assert!(t.norm() < 1e-12, "{t}");
    }

    #[test]
    fn coincident_node_without_exclusion_is_an_error() {
        let q = VolumeQuadrature::ball(1.0, 0).unwrap();
        let v = VolumeDensity::from_fn(&q, |_| ComplexQuaternion::ONE);
        let y = q.nodes()[5];
        assert!(matches!(
            teodorescu(c(1.0, 0.0), Sign::Plus, &v, y, Exclusion::Disabled),
            Err(Error::CoincidentNode { node: 5 })
        ));
        assert!(teodorescu(c(1.0, 0.0), Sign::Plus, &v, y, Exclusion::default()).is_ok());
    }

    #[test]
    fn cauchy_integral_of_one_is_one() {
        let mesh = SurfaceMesh::icosphere(1.0, 3).unwrap();
        let b = BoundaryDensity::from_fn(&mesh, |_| ComplexQuaternion::ONE);
        for x in [[0.0; 3], [0.3, -0.2, 0.1], [0.0, 0.5, 0.0]] {
            let k = cauchy_boundary(c(0.0, 0.0), Sign::Plus, &b, x, 2.0).unwrap();
            assert!((k - ComplexQuaternion::ONE).norm() < 0.01, "{x:?}: {k}");
        }
    }

    #[test]
    fn cauchy_rejects_points_near_the_boundary() {
        let mesh = SurfaceMesh::icosphere(1.0, 3).unwrap();
        let b = BoundaryDensity::from_fn(&mesh, |_| ComplexQuaternion::ONE);
        let err = cauchy_boundary(c(1.0, 0.0), Sign::Plus, &b, [0.0, 0.0, 0.9], 2.0).unwrap_err();
        match err {
            Error::NearBoundary { distance, min_distance, .. } => assert!(distance < min_distance),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cauchy_reproduces_monogenic_field() {
        let alpha = c(0.8, 0.0);
        let f = AbcBeltrami::with_default_amplitudes(-alpha);
        let mesh = SurfaceMesh::icosphere(1.0, 3).unwrap();
        let b = BoundaryDensity::from_fn(&mesh, |y| f.value(y));
        let x = [0.2, -0.1, 0.3];
        let k = cauchy_boundary(alpha, Sign::Plus, &b, x, 2.0).unwrap();
        assert!((k - f.value(x)).norm() < 0.01 * f.value(x).norm());
    }

    #[test]
    fn operators_are_linear() {
        let mesh = SurfaceMesh::icosphere(1.0, 1).unwrap();
        let q = VolumeQuadrature::ball(1.0, 1).unwrap();
        let s = c(0.3, -1.2);
        let fa = |y: Point| ComplexQuaternion::new(c(y[0], 1.0), c(y[1], 0.0), ZERO, c(0.0, y[2]));
        let fb = |y: Point| ComplexQuaternion::new(ONE, c(y[2] * y[0], 0.0), c(0.5, y[1]), ZERO);
        let combo = |y: Point| fa(y) + fb(y).scale(s);
        let alpha = c(1.1, 0.2);
        let x = [0.1, 0.05, -0.2];

        let k = |f: &dyn Fn(Point) -> ComplexQuaternion| {
            cauchy_boundary(alpha, Sign::Minus, &BoundaryDensity::from_fn(&mesh, f), x, 0.5).unwrap()
        };
        let lhs = k(&combo);
        let rhs = k(&fa) + k(&fb).scale(s);
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));

        let t = |f: &dyn Fn(Point) -> ComplexQuaternion| {
            teodorescu(alpha, Sign::Plus, &VolumeDensity::from_fn(&q, f), x, Exclusion::default()).unwrap()
        };
        let lhs = t(&combo);
        let rhs = t(&fa) + t(&fb).scale(s);
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn minus_sign_matches_kernel_for_negated_shift() {
        let q = VolumeQuadrature::ball(1.0, 2).unwrap();
        let v = VolumeDensity::from_fn(&q, |y| ComplexVector3::from_real(y).embed() + ComplexQuaternion::ONE);
        let alpha = c(1.0, 0.3);
        let x = [0.2, 0.1, 0.0];
        let a = teodorescu(alpha, Sign::Minus, &v, x, Exclusion::default()).unwrap();
        let b = teodorescu_with_kernel(&Kernel::for_shift(-alpha), &v, x, Exclusion::default()).unwrap();
        assert!((a - b).norm() <= 1e-14 * a.norm());
    }

    #[test]
    fn borel_pompeiu_scalar_polynomial() {
        let alpha = c(1.0, 0.0);
        let f = PolynomialField::scalar_coordinate(0);
        let volume = VolumeScheme::ball(1.0, 3).unwrap();
        let mesh = SurfaceMesh::icosphere(1.0, 3).unwrap();
        let r = borel_pompeiu_residual(&f, alpha, Sign::Plus, &mesh, &volume, [0.3, 0.1, -0.2]).unwrap();
        assert!(r < 2e-2, "{r}");
    }

    #[test]
    fn borel_pompeiu_constant_with_nonzero_alpha() {
        let alpha = c(0.7, 0.2);
        let f = PolynomialField::constant(ComplexQuaternion::new(ONE, ZERO, c(0.0, 2.0), ZERO));
        let x = [0.1, -0.3, 0.2];
        let mut last = f64::INFINITY;
        for level in 3..=5 {
            let volume = VolumeScheme::ball(1.0, level).unwrap();
            let mesh = SurfaceMesh::icosphere(1.0, level).unwrap();
            let r = borel_pompeiu_residual(&f, alpha, Sign::Minus, &mesh, &volume, x).unwrap();
            assert!(r < last * 1.1);
            last = r;
        }
        assert!(last < 5e-3, "{last}");
    }

    #[test]
    fn origin_pole_agrees_at_the_centre() {
        let alpha = c(1.0, 0.0);
        let f = PolynomialField::scalar_coordinate(0);
        let mesh = SurfaceMesh::icosphere(1.0, 3).unwrap();
        let a = VolumeScheme::new(crate::geometry::Ellipsoid::ball(1.0).unwrap(), 3, 8, Pole::Origin).unwrap();
        let b = VolumeScheme::ball(1.0, 3).unwrap();
        let ra = borel_pompeiu(&f, alpha, Sign::Plus, &mesh, &a, [0.0; 3], &OperatorConfig::default()).unwrap();
        let rb = borel_pompeiu(&f, alpha, Sign::Plus, &mesh, &b, [0.0; 3], &OperatorConfig::default()).unwrap();
        assert!((ra.teodorescu - rb.teodorescu).norm() < 1e-14);
    }
}

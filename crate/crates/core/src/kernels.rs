//! Fundamental solutions of the Helmholtz operator and of `D ± α`, plus
//! central-difference versions of the differential operators used to check
//! them.
//!
//! With `Θ_α(x) = -e^{iα|x|} / (4π|x|)` one has `(Δ + α²)Θ_α = δ`, and since
//! `(D + α)(D - α) = D² - α² = -(Δ + α²)` the kernel
//! `Υ_{±α} = -(D ∓ α)Θ_α = -grad Θ_α ± α Θ_α` satisfies `(D ± α)Υ_{±α} = δ`.
//! Its vector part is `Θ_α (x/|x|² - iα x/|x|)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{vec3, Point};
use crate::quaternion::{Complex, ComplexQuaternion, ComplexVector3, I};

/// Default central-difference step, relative to a unit length scale.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Selects `D + α` or `D - α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// `±α`.
    pub fn apply(self, alpha: Complex) -> Complex {
        alpha * self.factor()
    }
}

fn radius(x: Point) -> Result<f64> {
    let r = vec3::norm(x);
    if r == 0.0 || !r.is_finite() {
        return Err(Error::Singularity { distance: r });
    }
    Ok(r)
}

/// Helmholtz fundamental solution `Θ_α(x) = -e^{iα|x|} / (4π|x|)`.
pub fn theta(alpha: Complex, x: Point) -> Result<Complex> {
    let r = radius(x)?;
    Ok(theta_at_radius(alpha, r))
}

#[inline]
fn theta_at_radius(alpha: Complex, r: f64) -> Complex {
    -(I * alpha * r).exp() / (4.0 * PI * r)
}

/// Closed-form `grad Θ_α(x) = Θ_α(x) (iα - 1/|x|) x/|x|`.
pub fn theta_gradient(alpha: Complex, x: Point) -> Result<[Complex; 3]> {
    let r = radius(x)?;
    let radial = theta_at_radius(alpha, r) * (I * alpha - 1.0 / r) / r;
    Ok(x.map(|xi| radial * xi))
}

/// Fundamental solution `Υ_{±α}(x) = -grad Θ_α(x) ± α Θ_α(x)` of `D ± α`.
pub fn upsilon(alpha: Complex, sign: Sign, x: Point) -> Result<ComplexQuaternion> {
    Kernel::upsilon(alpha, sign).eval(x)
}

/// `-grad Θ_κ + s Θ_κ` for a wavenumber `κ` and scalar shift `s`.
///
/// When `κ² = s²` this is a fundamental solution of `D + s`: the kernel
/// `Υ_{±α}` is `κ = α, s = ±α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub wavenumber: Complex,
    pub shift: Complex,
}

impl Kernel {
    pub fn upsilon(alpha: Complex, sign: Sign) -> Self {
        Self {
            wavenumber: alpha,
            shift: sign.apply(alpha),
        }
    }

    /// Fundamental solution of `D + shift` whose Helmholtz factor decays:
    /// the wavenumber is `±shift` with non-negative imaginary part (ties go
    /// to non-negative real part).
    pub fn for_shift(shift: Complex) -> Self {
        let flip = shift.im < 0.0 || (shift.im == 0.0 && shift.re < 0.0);
        Self {
            wavenumber: if flip { -shift } else { shift },
            shift,
        }
    }

    #[inline]
    pub fn eval(&self, x: Point) -> Result<ComplexQuaternion> {
        let r = radius(x)?;
        Ok(self.eval_at(x, r))
    }

    #[inline]
    pub(crate) fn eval_at(&self, x: Point, r: f64) -> ComplexQuaternion {
        let th = theta_at_radius(self.wavenumber, r);
        let radial = th * (1.0 / (r * r) - I * self.wavenumber / r);
        ComplexQuaternion::new(self.shift * th, radial * x[0], radial * x[1], radial * x[2])
    }
}

/// Central-difference partial derivative `∂f/∂x_k`.
pub fn fd_partial<F>(f: &F, x: Point, h: f64, k: usize) -> ComplexQuaternion
where
    F: Fn(Point) -> ComplexQuaternion + ?Sized,
{
    let mut xp = x;
    let mut xm = x;
    xp[k] += h;
    xm[k] -= h;
    (f(xp) - f(xm)) * (0.5 / h)
}

/// Central-difference Moisil-Theodoresco operator `D f = Σ i_k ∂f/∂x_k`,
/// with each `i_k` multiplying from the left.
pub fn fd_moisil_theodoresco<F>(f: &F, x: Point, h: f64) -> ComplexQuaternion
where
    F: Fn(Point) -> ComplexQuaternion + ?Sized,
{
    let units = [ComplexQuaternion::I1, ComplexQuaternion::I2, ComplexQuaternion::I3];
    (0..3).map(|k| units[k] * fd_partial(f, x, h, k)).sum()
}

/// `(D ± α) f` by central differences.
pub fn fd_d_alpha<F>(f: &F, alpha: Complex, sign: Sign, x: Point, h: f64) -> ComplexQuaternion
where
    F: Fn(Point) -> ComplexQuaternion + ?Sized,
{
    fd_moisil_theodoresco(f, x, h) + f(x) * sign.apply(alpha)
}

/// Seven-point Laplacian.
pub fn fd_laplacian<F>(f: &F, x: Point, h: f64) -> ComplexQuaternion
where
    F: Fn(Point) -> ComplexQuaternion + ?Sized,
{
    let center = f(x);
    let mut acc = center * -6.0;
    for k in 0..3 {
        let mut xp = x;
        let mut xm = x;
        xp[k] += h;
        xm[k] -= h;
        acc += f(xp) + f(xm);
    }
    acc * (1.0 / (h * h))
}

/// Curl of the vector part, by central differences.
pub fn fd_curl<F>(f: &F, x: Point, h: f64) -> ComplexVector3
where
    F: Fn(Point) -> ComplexQuaternion + ?Sized,
{
    let d = [0, 1, 2].map(|k| fd_partial(f, x, h, k).vec());
    ComplexVector3::new(d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0])
}

/// Divergence of the vector part, by central differences.
pub fn fd_divergence<F>(f: &F, x: Point, h: f64) -> Complex
where
    F: Fn(Point) -> ComplexQuaternion + ?Sized,
{
    (0..3).map(|k| fd_partial(f, x, h, k).vec()[k]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn theta_laplace_limit_and_periodicity() {
        let t = theta(c(0.0, 0.0), [1.0, 0.0, 0.0]).unwrap();
        assert!((t - c(-1.0 / (4.0 * PI), 0.0)).norm() < 1e-15);
        assert!((t.re + 0.0795775).abs() < 1e-7);

        let alpha = 1.7;
        let r = 2.0 * PI / alpha;
        let t = theta(c(alpha, 0.0), [0.0, r, 0.0]).unwrap();
        assert!((t - c(-alpha / (8.0 * PI * PI), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_point_is_an_error() {
        assert!(matches!(theta(c(1.0, 0.0), [0.0; 3]), Err(Error::Singularity { .. })));
        assert!(upsilon(c(1.0, 0.0), Sign::Plus, [0.0; 3]).is_err());
    }

    #[test]
    fn theta_solves_helmholtz_off_origin() {
        for alpha in [c(1.0, 0.0), c(1.0, 0.3), c(0.0, 2.0)] {
            let x = [0.6, 0.0, 0.8];
            let f = |y: Point| ComplexQuaternion::scalar(theta(alpha, y).unwrap());
            let lap = fd_laplacian(&f, x, 1e-3).q0;
            let th = theta(alpha, x).unwrap();
            let residual = (lap + alpha * alpha * th).norm();
            let scale = th.norm() * (1.0 + alpha.norm_sqr());
            assert!(residual < 1e-5 * scale, "alpha {alpha}: {residual:e}");
        }
    }

    #[test]
    fn theta_is_radially_symmetric() {
        let alpha = c(1.3, 0.2);
        let x = [0.3, -0.7, 0.4];
        let base = theta(alpha, x).unwrap();
        // rotations about the three axes and a mixed one
        let rotations: [[[f64; 3]; 3]; 3] = [
            [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
            [[1.0, 0.0, 0.0], [0.0, 0.6, -0.8], [0.0, 0.8, 0.6]],
            [[0.36, 0.48, -0.8], [-0.8, 0.6, 0.0], [0.48, 0.64, 0.6]],
        ];
        for rot in rotations {
            let y = [0, 1, 2].map(|i| vec3::dot(rot[i], x));
            assert!((theta(alpha, y).unwrap() - base).norm() < 1e-15);
        }
    }

    #[test]
    fn gradient_matches_finite_differences_at_second_order() {
        let alpha = c(0.9, 0.4);
        let x = [0.5, 0.4, -0.6];
        let exact = theta_gradient(alpha, x).unwrap();
        let f = |y: Point| ComplexQuaternion::scalar(theta(alpha, y).unwrap());
        let err = |h: f64| -> f64 {
            (0..3)
                .map(|k| (fd_partial(&f, x, h, k).q0 - exact[k]).norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let (e1, e2) = (err(2e-2), err(1e-2));
        let order = (e1 / e2).log2();
        assert!(order >= 1.9, "observed order {order}");
    }

    #[test]
    fn upsilon_laplace_case() {
        let u = upsilon(c(0.0, 0.0), Sign::Plus, [1.0, 0.0, 0.0]).unwrap();
        let expected = ComplexQuaternion::I1 * (-1.0 / (4.0 * PI));
        assert!((u - expected).norm() < 1e-16);
        // against finite differences of theta
        let f = |y: Point| ComplexQuaternion::scalar(theta(c(0.0, 0.0), y).unwrap());
        let fd = -fd_partial(&f, [1.0, 0.0, 0.0], 1e-4, 0).q0;
        assert!((u.q1 - fd).norm() < 1e-9);
    }

    #[test]
    fn upsilon_annihilated_by_its_operator() {
        for alpha in [c(1.0, 0.0), c(1.0, 0.3), c(0.0, 2.0)] {
            for sign in [Sign::Plus, Sign::Minus] {
                let x = [0.0, 0.6, -0.8];
                let f = |y: Point| upsilon(alpha, sign, y).unwrap();
                let res = fd_d_alpha(&f, alpha, sign, x, 1e-4).norm();
                let scale = f(x).norm() * (alpha.norm() + 1.0);
                assert!(res < 1e-5 * scale, "{alpha} {sign:?}: {res:e}");
            }
        }
    }

    #[test]
    fn upsilon_sign_pair() {
        let alpha = c(0.7, -0.2);
        let x = [0.1, 0.2, 0.3];
        let plus = upsilon(alpha, Sign::Plus, x).unwrap();
        let minus = upsilon(alpha, Sign::Minus, x).unwrap();
        let th = theta(alpha, x).unwrap();
        assert!(((plus - minus).q0 - 2.0 * alpha * th).norm() < 1e-15);
        assert_eq!(plus.vec(), minus.vec());
        assert_eq!(plus.q0, -minus.q0);
    }

    #[test]
    fn decaying_kernel_for_negative_shift() {
        let alpha = c(1.0, 0.3);
        let k = Kernel::for_shift(-alpha);
        assert_eq!(k, Kernel::upsilon(alpha, Sign::Minus));
        let k = Kernel::for_shift(c(-2.0, 0.0));
        assert_eq!(k.wavenumber, c(2.0, 0.0));
    }

    #[test]
    fn fd_moisil_theodoresco_on_linear_fields() {
        let x = [0.3, -0.2, 0.5];
        let scalar = |y: Point| ComplexQuaternion::scalar(c(y[0], 0.0));
        let d = fd_moisil_theodoresco(&scalar, x, 1e-4);
        assert!((d - ComplexQuaternion::I1).norm() < 1e-10);

        let identity = |y: Point| ComplexVector3::from_real(y).embed();
        let d = fd_moisil_theodoresco(&identity, x, 1e-4);
        assert!((d - ComplexQuaternion::ONE * -3.0).norm() < 1e-10);

        let alpha = c(0.0, 0.0);
        assert_eq!(fd_d_alpha(&identity, alpha, Sign::Plus, x, 1e-4), d);
    }

    #[test]
    fn d_squared_is_minus_laplacian() {
        let f = |y: Point| ComplexQuaternion::scalar(c(y[0] * y[0], 0.0));
        let h = 1e-3;
        let d = |y: Point| fd_moisil_theodoresco(&f, y, h);
        let dd = fd_moisil_theodoresco(&d, [0.4, 0.1, -0.3], h);
        assert!((dd - ComplexQuaternion::ONE * -2.0).norm() < 1e-6 * 2.0);
    }
}

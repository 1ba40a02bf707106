//! Time-harmonic Maxwell equations in a chiral (Drude-Born-Fedorov) medium.
//!
//! With normalized fields the system reads
//! `rot E = -ik(H + β rot H)`, `rot H = ik(E + β rot E)`. The combinations
//! `Φ = E + iH` and `Ψ = E - iH` decouple it into
//! `(D + α₁)Φ = (i/k)[α₁ j - div j]` and `(D - α₂)Ψ = -(i/k)[α₂ j + div j]`
//! with `α₁ = k/(1 + kβ)` and `α₂ = k/(1 - kβ)`.

mod extendibility;
mod representation;
mod traces;

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::AnalyticField;
use crate::geometry::Point;
use crate::kernels::{fd_curl, Kernel, Sign};
use crate::quaternion::{Complex, ComplexQuaternion, ComplexVector3, I};

pub use extendibility::{
    extendibility_residual, perturb_tangential, Aggregate, ExtendibilityConfig,
    ExtendibilityReport, PointResidual, DEFAULT_STENCIL,
};
pub use representation::{
    phi_psi_representation, reconstruct_eh, reconstruct_eh_via_split, Source,
};
pub use traces::{read_traces_csv, write_traces_csv, TRACE_CSV_HEADER};

/// Relative tolerance for `|1 ± kβ|`.
pub const RESONANCE_TOLERANCE: f64 = 1e-9;

/// Choice of complex square roots in `k = ω √μ √ε`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `Im k >= 0` (ties: `Re k >= 0`); `√ε` is negated when needed.
    #[default]
    Decaying,
    /// The negation of the decaying branch.
    Growing,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiralMedium {
    omega: f64,
    epsilon: Complex,
    mu: Complex,
    beta: f64,
    branch: Branch,
    sqrt_epsilon: Complex,
    sqrt_mu: Complex,
    k: Complex,
    alpha1: Complex,
    alpha2: Complex,
}

impl ChiralMedium {
    pub fn new(omega: f64, epsilon: Complex, mu: Complex, beta: f64) -> Result<Self> {
        Self::with_branch(omega, epsilon, mu, beta, Branch::default())
    }

    pub fn with_branch(
        omega: f64,
        epsilon: Complex,
        mu: Complex,
        beta: f64,
        branch: Branch,
    ) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("beta must be finite, got {beta}")));
        }
        for (name, v) in [("epsilon", epsilon), ("mu", mu)] {
            if !(v.is_finite() && v != Complex::new(0.0, 0.0)) {
                return Err(Error::InvalidParameter(format!("{name} must be finite and nonzero")));
            }
        }
        let sqrt_mu = mu.sqrt();
        let mut sqrt_epsilon = epsilon.sqrt();
        let mut k = omega * sqrt_mu * sqrt_epsilon;
        let decaying = k.im > 0.0 || (k.im == 0.0 && k.re >= 0.0);
        if decaying != (branch == Branch::Decaying) {
            sqrt_epsilon = -sqrt_epsilon;
            k = -k;
        }
        let kb = k * beta;
        let tolerance = RESONANCE_TOLERANCE * kb.norm().max(1.0);
        for (sign, denom) in [('+', 1.0 + kb), ('-', 1.0 - kb)] {
            if denom.norm() < tolerance {
                return Err(Error::Resonance {
                    sign,
                    magnitude: denom.norm(),
                    tolerance,
                });
            }
        }
        Ok(Self {
            omega,
            epsilon,
            mu,
            beta,
            branch,
            sqrt_epsilon,
            sqrt_mu,
            k,
            alpha1: k / (1.0 + kb),
            alpha2: k / (1.0 - kb),
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn epsilon(&self) -> Complex {
        self.epsilon
    }

    pub fn mu(&self) -> Complex {
        self.mu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn sqrt_epsilon(&self) -> Complex {
        self.sqrt_epsilon
    }

    pub fn sqrt_mu(&self) -> Complex {
        self.sqrt_mu
    }

    /// Wavenumber.
    pub fn k(&self) -> Complex {
        self.k
    }

    pub fn alpha1(&self) -> Complex {
        self.alpha1
    }

    pub fn alpha2(&self) -> Complex {
        self.alpha2
    }

    /// Kernels of the `Φ` and `Ψ` representations: `Υ_{α₁}` and `Υ_{-α₂}`.
    pub fn kernels(&self) -> (Kernel, Kernel) {
        (
            Kernel::upsilon(self.alpha1, Sign::Plus),
            Kernel::upsilon(self.alpha2, Sign::Minus),
        )
    }

    /// Physical fields to normalized ones: `E = Ẽ/√μ`, `H = H̃/√ε`, `j = j̃/√ε`.
    pub fn normalize(
        &self,
        e: ComplexVector3,
        h: ComplexVector3,
        j: ComplexVector3,
    ) -> (EmField, ComplexVector3) {
        let (im, ie) = (1.0 / self.sqrt_mu, 1.0 / self.sqrt_epsilon);
        (EmField { e: e * im, h: h * ie }, j * ie)
    }

    pub fn denormalize(&self, field: EmField, j: ComplexVector3) -> (ComplexVector3, ComplexVector3, ComplexVector3) {
        (
            field.e * self.sqrt_mu,
            field.h * self.sqrt_epsilon,
            j * self.sqrt_epsilon,
        )
    }
}

/// Electric and magnetic values at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct EmField<T = ComplexVector3> {
    pub e: T,
    pub h: T,
}

/// `Φ = E + iH` and `Ψ = E - iH` at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SplitField<T = ComplexVector3> {
    pub phi: T,
    pub psi: T,
}

impl<T> EmField<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Complex, Output = T>,
{
    pub fn split(self) -> SplitField<T> {
        let ih = self.h * I;
        SplitField {
            phi: self.e + ih,
            psi: self.e - ih,
        }
    }

    pub fn from_split(phi: T, psi: T) -> Self {
        SplitField { phi, psi }.merge()
    }
}

impl<T> SplitField<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Complex, Output = T>,
{
    /// `E = (Φ + Ψ)/2`, `H = (Φ - Ψ)/(2i)`.
    pub fn merge(self) -> EmField<T> {
        EmField {
            e: (self.phi + self.psi) * Complex::new(0.5, 0.0),
            h: (self.phi - self.psi) * Complex::new(0.0, -0.5),
        }
    }
}

/// Current density with an analytic divergence.
pub trait CurrentDensity: Send + Sync {
    fn current(&self, x: Point) -> ComplexVector3;
    fn divergence(&self, x: Point) -> Complex;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct NoCurrent;

impl CurrentDensity for NoCurrent {
    fn current(&self, _x: Point) -> ComplexVector3 {
        ComplexVector3::ZERO
    }

    fn divergence(&self, _x: Point) -> Complex {
        Complex::new(0.0, 0.0)
    }
}

/// `j(x) = j₀ + G x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AffineCurrent {
    pub offset: ComplexVector3,
    pub gradient: [[Complex; 3]; 3],
}

impl CurrentDensity for AffineCurrent {
    fn current(&self, x: Point) -> ComplexVector3 {
        let row = |i: usize| -> Complex {
            self.offset[i] + (0..3).map(|k| self.gradient[i][k] * x[k]).sum::<Complex>()
        };
        ComplexVector3::new(row(0), row(1), row(2))
    }

    fn divergence(&self, _x: Point) -> Complex {
        self.gradient[0][0] + self.gradient[1][1] + self.gradient[2][2]
    }
}

/// `ρ/ε = -div j / (ik)`.
pub fn continuity_rho(source: &dyn CurrentDensity, medium: &ChiralMedium, x: Point) -> Complex {
    -source.divergence(x) / (I * medium.k())
}

/// Right-hand sides of the `Φ` and `Ψ` equations at `x`.
pub fn phi_psi_rhs(
    source: &dyn CurrentDensity,
    medium: &ChiralMedium,
    x: Point,
) -> SplitField<ComplexQuaternion> {
    let j = source.current(x);
    let div = source.divergence(x);
    let c = I / medium.k();
    SplitField {
        phi: ComplexQuaternion::from_parts(-div, j * medium.alpha1()) * c,
        psi: ComplexQuaternion::from_parts(div, j * medium.alpha2()) * (-c),
    }
}

/// Finite-difference residuals of the two curl equations at `x`, each
/// relative to the sum of its term magnitudes.
pub fn maxwell_residual(
    e: &dyn AnalyticField,
    h: &dyn AnalyticField,
    medium: &ChiralMedium,
    x: Point,
    step: f64,
) -> (f64, f64) {
    let ef = |y: Point| e.value(y);
    let hf = |y: Point| h.value(y);
    let (ev, hv) = (e.value(x).vec(), h.value(x).vec());
    let (rot_e, rot_h) = (fd_curl(&ef, x, step), fd_curl(&hf, x, step));
    let ik = I * medium.k();
    let beta = Complex::new(medium.beta(), 0.0);
    let kk = medium.k().norm();
    let b = medium.beta().abs();

    let r1 = rot_e + (hv + rot_h * beta) * ik;
    let s1 = rot_e.norm() + kk * (hv.norm() + b * rot_h.norm());
    let r2 = rot_h - (ev + rot_e * beta) * ik;
    let s2 = rot_h.norm() + kk * (ev.norm() + b * rot_e.norm());
    let rel = |r: ComplexVector3, s: f64| if s > 0.0 { r.norm() / s } else { r.norm() };
    (rel(r1, s1), rel(r2, s2))
}

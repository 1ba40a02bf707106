//! Closed-form test fields with exact derivatives.
//!
//! `D f = -div f + grad f₀ + rot f` for `f = f₀ + f`, so every field here
//! reports its exact `D f` alongside its value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chiral::{ChiralMedium, EmField};
use crate::geometry::{Point, SurfaceMesh};
use crate::kernels::Sign;
use crate::quaternion::{Complex, ComplexQuaternion, ComplexVector3, I, ONE, ZERO};

/// Family name and parameters of a field, for reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldMetadata {
    pub family: &'static str,
    pub parameters: Vec<(String, Complex)>,
}

/// A quaternion-valued field with an exact Moisil-Theodoresco derivative.
pub trait AnalyticField: Send + Sync {
    fn value(&self, x: Point) -> ComplexQuaternion;

    /// Exact `D f(x)`.
    fn moisil_theodoresco(&self, x: Point) -> ComplexQuaternion;

    fn metadata(&self) -> FieldMetadata;

    /// Exact `(D ± α) f(x)`.
    fn d_alpha(&self, alpha: Complex, sign: Sign, x: Point) -> ComplexQuaternion {
        self.moisil_theodoresco(x) + self.value(x) * sign.apply(alpha)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AbcAmplitudes {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
}

impl Default for AbcAmplitudes {
    fn default() -> Self {
        Self {
            a: ONE,
            b: Complex::new(0.7, 0.0),
            c: Complex::new(0.3, 0.0),
        }
    }
}

/// Arnold-Beltrami-Childress field
/// `F = (A sin λx₃ + C cos λx₂, B sin λx₁ + A cos λx₃, C sin λx₂ + B cos λx₁)`
/// with `rot F = λF` and `div F = 0` for any complex `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AbcBeltrami {
    pub lambda: Complex,
    pub amplitudes: AbcAmplitudes,
}

impl AbcBeltrami {
    pub fn new(lambda: Complex, amplitudes: AbcAmplitudes) -> Self {
        Self { lambda, amplitudes }
    }

    pub fn with_default_amplitudes(lambda: Complex) -> Self {
        Self::new(lambda, AbcAmplitudes::default())
    }

    pub fn vector(&self, x: Point) -> ComplexVector3 {
        let l = self.lambda;
        let AbcAmplitudes { a, b, c } = self.amplitudes;
        let [x1, x2, x3] = x;
        ComplexVector3::new(
            a * (l * x3).sin() + c * (l * x2).cos(),
            b * (l * x1).sin() + a * (l * x3).cos(),
            c * (l * x2).sin() + b * (l * x1).cos(),
        )
    }

    pub fn curl(&self, x: Point) -> ComplexVector3 {
        self.vector(x) * self.lambda
    }

    pub fn divergence(&self, _x: Point) -> Complex {
        ZERO
    }
}

impl AnalyticField for AbcBeltrami {
    fn value(&self, x: Point) -> ComplexQuaternion {
        self.vector(x).embed()
    }

    fn moisil_theodoresco(&self, x: Point) -> ComplexQuaternion {
        self.curl(x).embed()
    }

    fn metadata(&self) -> FieldMetadata {
        let AbcAmplitudes { a, b, c } = self.amplitudes;
        FieldMetadata {
            family: "abc-beltrami",
            parameters: vec![
                ("lambda".into(), self.lambda),
                ("A".into(), a),
                ("B".into(), b),
                ("C".into(), c),
            ],
        }
    }
}

/// `Σ c_j F_j` over Beltrami fields; `D` acts termwise as `λ_j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BeltramiSum {
    pub terms: Vec<(Complex, AbcBeltrami)>,
}

impl BeltramiSum {
    pub fn vector(&self, x: Point) -> ComplexVector3 {
        self.terms
            .iter()
            .fold(ComplexVector3::ZERO, |acc, (c, f)| acc + f.vector(x) * *c)
    }

    pub fn curl(&self, x: Point) -> ComplexVector3 {
        self.terms
            .iter()
            .fold(ComplexVector3::ZERO, |acc, (c, f)| acc + f.curl(x) * *c)
    }
}

impl AnalyticField for BeltramiSum {
    fn value(&self, x: Point) -> ComplexQuaternion {
        self.vector(x).embed()
    }

    fn moisil_theodoresco(&self, x: Point) -> ComplexQuaternion {
        self.curl(x).embed()
    }

    fn metadata(&self) -> FieldMetadata {
        let mut parameters = Vec::new();
        for (j, (c, f)) in self.terms.iter().enumerate() {
            parameters.push((format!("coefficient[{j}]"), *c));
            for (name, value) in f.metadata().parameters {
                parameters.push((format!("{name}[{j}]"), value));
            }
        }
        FieldMetadata {
            family: "beltrami-sum",
            parameters,
        }
    }
}

/// Quaternion polynomial of degree at most two:
/// `f(x) = c + Σ_k x_k L_k + Σ_{k,l} x_k x_l Q_kl`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolynomialField {
    pub constant: ComplexQuaternion,
    pub linear: [ComplexQuaternion; 3],
    pub quadratic: [[ComplexQuaternion; 3]; 3],
}

impl PolynomialField {
    pub fn new(
        constant: ComplexQuaternion,
        linear: [ComplexQuaternion; 3],
        quadratic: [[ComplexQuaternion; 3]; 3],
    ) -> Self {
        Self {
            constant,
            linear,
            quadratic,
        }
    }

    pub fn constant(c: ComplexQuaternion) -> Self {
        Self::new(c, [ComplexQuaternion::ZERO; 3], [[ComplexQuaternion::ZERO; 3]; 3])
    }

    /// The scalar field `x_k`.
    pub fn scalar_coordinate(k: usize) -> Self {
        let mut f = Self::constant(ComplexQuaternion::ZERO);
        f.linear[k] = ComplexQuaternion::ONE;
        f
    }

    /// The vector field `x`.
    pub fn identity_vector() -> Self {
        let mut f = Self::constant(ComplexQuaternion::ZERO);
        f.linear = [
            ComplexQuaternion::I1,
            ComplexQuaternion::I2,
            ComplexQuaternion::I3,
        ];
        f
    }

    /// Coefficients with real and imaginary parts uniform in `[-1, 1]`.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut q = || {
            ComplexQuaternion::from_reals(std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)))
        };
        let constant = q();
        let linear = [q(), q(), q()];
        let quadratic = [[q(), q(), q()], [q(), q(), q()], [q(), q(), q()]];
        Self::new(constant, linear, quadratic)
    }

    /// `∂f/∂x_m`.
    pub fn partial(&self, m: usize, x: Point) -> ComplexQuaternion {
        (0..3).fold(self.linear[m], |acc, l| {
            acc + (self.quadratic[m][l] + self.quadratic[l][m]) * x[l]
        })
    }

    /// `Δf`, constant for a quadratic.
    pub fn laplacian(&self) -> ComplexQuaternion {
        (0..3).map(|m| self.quadratic[m][m] * 2.0).sum()
    }

    pub fn divergence(&self, x: Point) -> Complex {
        (0..3).map(|m| self.partial(m, x).vec()[m]).sum()
    }

    pub fn curl(&self, x: Point) -> ComplexVector3 {
        let g = [0, 1, 2].map(|m| self.partial(m, x).vec());
        ComplexVector3::new(
            g[1][2] - g[2][1],
            g[2][0] - g[0][2],
            g[0][1] - g[1][0],
        )
    }

    pub fn gradient_scalar(&self, x: Point) -> ComplexVector3 {
        let [a, b, c] = [0, 1, 2].map(|m| self.partial(m, x).sc());
        ComplexVector3::new(a, b, c)
    }
}

impl AnalyticField for PolynomialField {
    fn value(&self, x: Point) -> ComplexQuaternion {
        let mut acc = self.constant;
        for k in 0..3 {
            acc += self.linear[k] * x[k];
            for l in 0..3 {
                acc += self.quadratic[k][l] * (x[k] * x[l]);
            }
        }
        acc
    }

    fn moisil_theodoresco(&self, x: Point) -> ComplexQuaternion {
        ComplexQuaternion::from_parts(
            -self.divergence(x),
            self.gradient_scalar(x) + self.curl(x),
        )
    }

    fn metadata(&self) -> FieldMetadata {
        let mut parameters = Vec::new();
        let mut push = |name: String, q: &ComplexQuaternion| {
            for (j, c) in q.to_array().into_iter().enumerate() {
                parameters.push((format!("{name}.q{j}"), c));
            }
        };
        push("c".into(), &self.constant);
        for k in 0..3 {
            push(format!("L{}", k + 1), &self.linear[k]);
            for l in 0..3 {
                push(format!("Q{}{}", k + 1, l + 1), &self.quadratic[k][l]);
            }
        }
        FieldMetadata {
            family: "polynomial",
            parameters,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ChiralAmplitudes {
    pub phi: AbcAmplitudes,
    pub psi: AbcAmplitudes,
}

/// Source-free solution of the chiral Maxwell system built from
/// `Φ = F(-α₁)` and `Ψ = F(α₂)`: `E = (Φ + Ψ)/2`, `H = (Φ - Ψ)/(2i)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiralSolution {
    pub medium: ChiralMedium,
    pub phi: AbcBeltrami,
    pub psi: AbcBeltrami,
}

pub fn exact_chiral_solution(medium: &ChiralMedium, amplitudes: ChiralAmplitudes) -> ChiralSolution {
    ChiralSolution {
        medium: *medium,
        phi: AbcBeltrami::new(-medium.alpha1(), amplitudes.phi),
        psi: AbcBeltrami::new(medium.alpha2(), amplitudes.psi),
    }
}

impl ChiralSolution {
    pub fn electric(&self) -> BeltramiSum {
        let half = Complex::new(0.5, 0.0);
        BeltramiSum {
            terms: vec![(half, self.phi), (half, self.psi)],
        }
    }

    pub fn magnetic(&self) -> BeltramiSum {
        let c = 1.0 / (2.0 * I);
        BeltramiSum {
            terms: vec![(c, self.phi), (-c, self.psi)],
        }
    }

    pub fn at(&self, x: Point) -> EmField {
        EmField::from_split(self.phi.vector(x), self.psi.vector(x))
    }

    /// `(e, h)` on every quadrature node of `mesh`.
    pub fn traces(&self, mesh: &SurfaceMesh) -> Vec<EmField> {
        mesh.nodes().iter().map(|n| self.at(n.point)).collect()
    }
}

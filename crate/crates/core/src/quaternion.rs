//! Complex quaternions `H(C)`.
//!
//! An element is `q = q0 + q1 i1 + q2 i2 + q3 i3` with complex coefficients.
//! The imaginary unit `i` of `C` commutes with every `i_k`, and the
//! quaternionic units obey `i_k^2 = -1`, `i1 i2 = -i2 i1 = i3`,
//! `i2 i3 = -i3 i2 = i1`, `i3 i1 = -i1 i3 = i2`. The algebra has zero
//! divisors, so no inverse is provided.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
/// The imaginary unit of the coefficient field.
pub const I: Complex = Complex::new(0.0, 1.0);

/// A purely vectorial complex quaternion, identified with a vector in `C^3`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexVector3(pub [Complex; 3]);

impl ComplexVector3 {
    pub const ZERO: Self = Self([ZERO; 3]);

    pub fn new(v1: Complex, v2: Complex, v3: Complex) -> Self {
        Self([v1, v2, v3])
    }

    pub fn from_real(v: [f64; 3]) -> Self {
        Self(v.map(|x| Complex::new(x, 0.0)))
    }

    /// Bilinear (not Hermitian) dot product.
    pub fn dot(&self, other: &Self) -> Complex {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        a1 * b1 + a2 * b2 + a3 * b3
    }

    /// Bilinear cross product.
    pub fn cross(&self, other: &Self) -> Self {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        Self([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self(self.0.map(|v| v * c))
    }

    /// Euclidean norm over the six real components.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn embed(self) -> ComplexQuaternion {
        ComplexQuaternion::from_parts(ZERO, self)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Index<usize> for ComplexVector3 {
    type Output = Complex;
    fn index(&self, k: usize) -> &Complex {
        &self.0[k]
    }
}

impl Add for ComplexVector3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for ComplexVector3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for ComplexVector3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|v| -v))
    }
}

impl Mul<Complex> for ComplexVector3 {
    type Output = Self;
    fn mul(self, c: Complex) -> Self {
        self.scale(c)
    }
}

/// An element of `H(C)`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexQuaternion {
    pub q0: Complex,
    pub q1: Complex,
    pub q2: Complex,
    pub q3: Complex,
}

impl ComplexQuaternion {
    pub const ZERO: Self = Self::new(ZERO, ZERO, ZERO, ZERO);
    pub const ONE: Self = Self::new(ONE, ZERO, ZERO, ZERO);
    pub const I1: Self = Self::new(ZERO, ONE, ZERO, ZERO);
    pub const I2: Self = Self::new(ZERO, ZERO, ONE, ZERO);
    pub const I3: Self = Self::new(ZERO, ZERO, ZERO, ONE);

    /// Basis `[1, i1, i2, i3]`.
    pub const BASIS: [Self; 4] = [Self::ONE, Self::I1, Self::I2, Self::I3];

    pub const fn new(q0: Complex, q1: Complex, q2: Complex, q3: Complex) -> Self {
        Self { q0, q1, q2, q3 }
    }

    pub fn from_array(c: [Complex; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [Complex; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    pub fn scalar(c: Complex) -> Self {
        Self::new(c, ZERO, ZERO, ZERO)
    }

    pub fn from_parts(scalar: Complex, vector: ComplexVector3) -> Self {
        let [v1, v2, v3] = vector.0;
        Self::new(scalar, v1, v2, v3)
    }

    /// `Sc(q) = q0`.
    pub fn sc(&self) -> Complex {
        self.q0
    }

    /// `Vec(q) = q1 i1 + q2 i2 + q3 i3`.
    pub fn vec(&self) -> ComplexVector3 {
        ComplexVector3([self.q1, self.q2, self.q3])
    }

    /// Quaternionic conjugate `Sc(q) - Vec(q)`. Coefficients are not
    /// complex-conjugated.
    pub fn conj(&self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    /// Componentwise complex conjugation of the coefficients.
    pub fn complex_conj(&self) -> Self {
        Self::new(self.q0.conj(), self.q1.conj(), self.q2.conj(), self.q3.conj())
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::new(self.q0 * c, self.q1 * c, self.q2 * c, self.q3 * c)
    }

    /// Euclidean norm over the eight real components.
    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    /// The eight reals `re q0, im q0, ..., re q3, im q3`.
    pub fn to_reals(&self) -> [f64; 8] {
        let c = self.to_array();
        [
            c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im, c[3].re, c[3].im,
        ]
    }

    pub fn from_reals(r: [f64; 8]) -> Self {
        Self::new(
            Complex::new(r[0], r[1]),
            Complex::new(r[2], r[3]),
            Complex::new(r[4], r[5]),
            Complex::new(r[6], r[7]),
        )
    }

    /// Whitespace-separated text form, the eight reals in `to_reals` order.
    pub fn to_text(&self) -> String {
        self.to_reals()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses eight reals separated by whitespace and/or commas.
    pub fn from_text(text: &str) -> Result<Self> {
        let values = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("{s:?}: {e}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let reals: [f64; 8] = values.try_into().map_err(|v: Vec<f64>| Error::LengthMismatch {
            expected: 8,
            found: v.len(),
        })?;
        Ok(Self::from_reals(reals))
    }
}

impl Mul for ComplexQuaternion {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
            a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
            a.q0 * b.q2 + a.q2 * b.q0 + a.q3 * b.q1 - a.q1 * b.q3,
            a.q0 * b.q3 + a.q3 * b.q0 + a.q1 * b.q2 - a.q2 * b.q1,
        )
    }
}

impl Mul<Complex> for ComplexQuaternion {
    type Output = Self;
    fn mul(self, c: Complex) -> Self {
        self.scale(c)
    }
}

impl Mul<ComplexQuaternion> for Complex {
    type Output = ComplexQuaternion;
    fn mul(self, q: ComplexQuaternion) -> ComplexQuaternion {
        q.scale(self)
    }
}

impl Mul<f64> for ComplexQuaternion {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        self.scale(Complex::new(c, 0.0))
    }
}

impl Add for ComplexQuaternion {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Self::new(self.q0 + b.q0, self.q1 + b.q1, self.q2 + b.q2, self.q3 + b.q3)
    }
}

impl AddAssign for ComplexQuaternion {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl Sub for ComplexQuaternion {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Self::new(self.q0 - b.q0, self.q1 - b.q1, self.q2 - b.q2, self.q3 - b.q3)
    }
}

impl SubAssign for ComplexQuaternion {
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl Neg for ComplexQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

impl From<ComplexVector3> for ComplexQuaternion {
    fn from(v: ComplexVector3) -> Self {
        v.embed()
    }
}

impl From<Complex> for ComplexQuaternion {
    fn from(c: Complex) -> Self {
        Self::scalar(c)
    }
}

impl std::iter::Sum for ComplexQuaternion {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::ZERO, |acc, q| acc + q)
    }
}

impl fmt::Display for ComplexQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) + ({})i1 + ({})i2 + ({})i3",
            self.q0, self.q1, self.q2, self.q3
        )
    }
}

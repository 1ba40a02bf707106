use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::vec3::{self, add, scale};
use super::{gauss_legendre, Point, SurfaceMesh};
use crate::error::{Error, Result};

pub const DEFAULT_RADIAL_ORDER: usize = 8;

/// Ellipsoidal domain centred at the origin; a ball when the axes agree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Ellipsoid {
    semi_axes: [f64; 3],
}

impl Ellipsoid {
    pub fn new(semi_axes: [f64; 3]) -> Result<Self> {
        if semi_axes.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "semi-axes must be positive, got {semi_axes:?}"
            )));
        }
        Ok(Self { semi_axes })
    }

    pub fn ball(radius: f64) -> Result<Self> {
        Self::new([radius; 3])
    }

    pub fn semi_axes(&self) -> [f64; 3] {
        self.semi_axes
    }

    pub fn volume(&self) -> f64 {
        let [a, b, c] = self.semi_axes;
        4.0 / 3.0 * std::f64::consts::PI * a * b * c
    }

    /// `sum (x_i / a_i)^2`; below one inside.
    pub fn level_set(&self, x: Point) -> f64 {
        (0..3).map(|i| (x[i] / self.semi_axes[i]).powi(2)).sum()
    }

    pub fn contains(&self, x: Point) -> bool {
        self.level_set(x) < 1.0
    }

    /// Distance along unit direction `d` from interior point `p` to the surface.
    fn exit_distance(&self, p: Point, d: Point) -> f64 {
        let inv2 = self.semi_axes.map(|a| 1.0 / (a * a));
        let a: f64 = (0..3).map(|i| d[i] * d[i] * inv2[i]).sum();
        let b: f64 = (0..3).map(|i| p[i] * d[i] * inv2[i]).sum();
        let c = self.level_set(p) - 1.0;
        (-b + (b * b - a * c).sqrt()) / a
    }

    pub fn surface_mesh(&self, level: u32) -> Result<SurfaceMesh> {
        SurfaceMesh::ellipsoid(self.semi_axes, level)
    }
}

/// Where the radial lines of the product rule meet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Pole {
    /// Fixed at the domain centre.
    Origin,
    /// At each evaluation point, so the `r^2` Jacobian absorbs the kernel
    /// singularity.
    EvaluationPoint,
}

/// Interior nodes and positive weights discretizing the domain.
#[derive(Clone, Debug)]
pub struct VolumeQuadrature {
    nodes: Vec<Point>,
    weights: Vec<f64>,
    domain: Ellipsoid,
    pole: Point,
}

impl VolumeQuadrature {
    /// Origin-centred product rule on a ball: Gauss-Legendre radial order 8
    /// times the directions of an icosphere of the given level.
    pub fn ball(radius: f64, level: u32) -> Result<Self> {
        VolumeScheme::new(Ellipsoid::ball(radius)?, level, DEFAULT_RADIAL_ORDER, Pole::Origin)?
            .quadrature_at([0.0; 3])
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> &Ellipsoid {
        &self.domain
    }

    pub fn pole(&self) -> Point {
        self.pole
    }

    /// Node spacing estimate: cube root of the node's weight.
    pub fn local_spacing(&self, j: usize) -> f64 {
        self.weights[j].cbrt()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<F: Fn(Point) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }

    /// CSV with header `x,y,z,w`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,y,z,w")?;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            writeln!(out, "{},{},{},{}", x[0], x[1], x[2], w)?;
        }
        Ok(())
    }
}

/// Recipe for product rules: radial Gauss-Legendre times icosphere directions.
#[derive(Clone, Debug)]
pub struct VolumeScheme {
    domain: Ellipsoid,
    level: u32,
    radial_order: usize,
    pole: Pole,
    /// Unit directions with solid-angle weights summing to `4 pi`.
    directions: Vec<(Point, f64)>,
    /// Radial nodes on `(0, 1)` with weights including the `s^2` Jacobian.
    radial: Vec<(f64, f64)>,
}

impl VolumeScheme {
    pub fn new(domain: Ellipsoid, level: u32, radial_order: usize, pole: Pole) -> Result<Self> {
        if radial_order == 0 {
            return Err(Error::InvalidParameter("radial order must be positive".into()));
        }
        let sphere = SurfaceMesh::icosphere(1.0, level)?;
        let directions = sphere
            .triangles()
            .iter()
            .map(|tri| {
                let [a, b, c] = tri.map(|i| sphere.vertices()[i]);
                let d = vec3::normalize(add(add(a, b), c));
                (d, vec3::solid_angle(a, b, c))
            })
            .collect();
        let (t, w) = gauss_legendre(radial_order);
        let radial = t
            .iter()
            .zip(&w)
            .map(|(t, w)| {
                let s = 0.5 * (t + 1.0);
                (s, 0.5 * w * s * s)
            })
            .collect();
        Ok(Self {
            domain,
            level,
            radial_order,
            pole,
            directions,
            radial,
        })
    }

    /// Ball of `radius` with the default radial order and the pole at the
    /// evaluation point.
    pub fn ball(radius: f64, level: u32) -> Result<Self> {
        Self::new(Ellipsoid::ball(radius)?, level, DEFAULT_RADIAL_ORDER, Pole::EvaluationPoint)
    }

    pub fn domain(&self) -> &Ellipsoid {
        &self.domain
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn radial_order(&self) -> usize {
        self.radial_order
    }

    pub fn pole(&self) -> Pole {
        self.pole
    }

    /// Quadrature to be used for evaluations at `x`.
    pub fn quadrature_at(&self, x: Point) -> Result<VolumeQuadrature> {
        let pole = match self.pole {
            Pole::Origin => [0.0; 3],
            Pole::EvaluationPoint => x,
        };
        if !self.domain.contains(pole) {
            return Err(Error::InvalidParameter(format!(
                "quadrature pole {pole:?} is not inside the domain"
            )));
        }
        let n = self.directions.len() * self.radial.len();
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for &(s, ws) in &self.radial {
            for &(d, omega) in &self.directions {
                let reach = self.domain.exit_distance(pole, d);
                nodes.push(add(pole, scale(d, s * reach)));
                weights.push(ws * omega * reach.powi(3));
            }
        }
        Ok(VolumeQuadrature {
            nodes,
            weights,
            domain: self.domain,
            pole,
        })
    }
}

/// `count` seeded points uniformly distributed in the ball `|x| < radius`.
pub fn sample_ball(radius: f64, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let x: Point = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        if vec3::dot(x, x) < 1.0 {
            points.push(scale(x, radius));
        }
    }
    points
}

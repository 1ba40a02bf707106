use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::vec3::{self, add, cross, dot, norm, scale, sub};
use super::Point;
use crate::error::{Error, Result};
use crate::quaternion::ComplexVector3;

/// Largest icosphere refinement accepted (20 * 4^8 = 1.3M triangles).
pub const MAX_SPHERE_LEVEL: u32 = 8;

/// Per-triangle quadrature on flat triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum SurfaceRule {
    /// One node at the centroid.
    #[default]
    Centroid,
    /// Symmetric three-node rule, exact for quadratics.
    ThreePoint,
}

impl SurfaceRule {
    fn barycentric(self) -> &'static [[f64; 3]] {
        const CENTROID: [[f64; 3]; 1] = [[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]];
        const THREE: [[f64; 3]; 3] = [
            [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
            [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
            [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
        ];
        match self {
            SurfaceRule::Centroid => &CENTROID,
            SurfaceRule::ThreePoint => &THREE,
        }
    }

    pub fn nodes_per_triangle(self) -> usize {
        self.barycentric().len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureNode {
    pub point: Point,
    pub triangle: usize,
    /// Area weight.
    pub weight: f64,
}

/// A closed triangulated surface with outward normals and a quadrature rule.
///
/// Nodes are stored triangle-major: triangle `t` owns nodes
/// `t * m .. (t + 1) * m` with `m = rule.nodes_per_triangle()`.
#[derive(Clone, Debug)]
pub struct SurfaceMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    normals: Vec<Point>,
    areas: Vec<f64>,
    centroids: Vec<Point>,
    edge_lengths: Vec<f64>,
    rule: SurfaceRule,
    nodes: Vec<QuadratureNode>,
}

/// Divergence-theorem residuals and orientation checks.
#[derive(Clone, Debug, Serialize)]
pub struct MeshDiagnostics {
    pub total_area: f64,
    /// `∫ n dΓ`, zero for a closed surface.
    pub net_normal: Point,
    /// `∫ x·n dΓ`, three times the enclosed volume when normals point outward.
    pub position_flux: f64,
    pub orientation_consistent: bool,
    /// Triangles whose edges mostly run the same way as a neighbour's.
    pub inconsistent_triangles: Vec<usize>,
}

impl MeshDiagnostics {
    pub fn net_normal_norm(&self) -> f64 {
        norm(self.net_normal)
    }
}

/// A collocation point pushed inward from a triangle centroid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OffsetPoint {
    pub triangle: usize,
    pub boundary_point: Point,
    pub point: Point,
    /// Set when the inward offset got closer than `depth` to some other part
    /// of the surface (depth exceeds the local feature size).
    pub feature_warning: bool,
}

impl SurfaceMesh {
    pub fn from_parts(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        rule: SurfaceRule,
    ) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        if let Some(v) = vertices.iter().find(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::InvalidMesh(format!("non-finite vertex {v:?}")));
        }
        let mut normals = Vec::with_capacity(triangles.len());
        let mut areas = Vec::with_capacity(triangles.len());
        let mut centroids = Vec::with_capacity(triangles.len());
        let mut edge_lengths = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} references a vertex beyond {}",
                    vertices.len()
                )));
            }
            let [a, b, c] = tri.map(|i| vertices[i]);
            let n = cross(sub(b, a), sub(c, a));
            let twice_area = norm(n);
            if twice_area <= f64::MIN_POSITIVE {
                return Err(Error::InvalidMesh(format!("triangle {t} is degenerate")));
            }
            normals.push(scale(n, 1.0 / twice_area));
            areas.push(0.5 * twice_area);
            centroids.push(scale(add(add(a, b), c), 1.0 / 3.0));
            edge_lengths.push(
                norm(sub(b, a))
                    .max(norm(sub(c, b)))
                    .max(norm(sub(a, c))),
            );
        }
        let mut mesh = Self {
            vertices,
            triangles,
            normals,
            areas,
            centroids,
            edge_lengths,
            rule,
            nodes: Vec::new(),
        };
        mesh.nodes = mesh.build_nodes();
        Ok(mesh)
    }

    fn build_nodes(&self) -> Vec<QuadratureNode> {
        let bary = self.rule.barycentric();
        let share = 1.0 / bary.len() as f64;
        let mut nodes = Vec::with_capacity(self.triangles.len() * bary.len());
        for (t, tri) in self.triangles.iter().enumerate() {
            let [a, b, c] = tri.map(|i| self.vertices[i]);
            for l in bary {
                nodes.push(QuadratureNode {
                    point: add(add(scale(a, l[0]), scale(b, l[1])), scale(c, l[2])),
                    triangle: t,
                    weight: self.areas[t] * share,
                });
            }
        }
        nodes
    }

    /// Icosphere of `20 * 4^level` triangles with vertices on the sphere.
    pub fn icosphere(radius: f64, level: u32) -> Result<Self> {
        Self::ellipsoid([radius; 3], level)
    }

    /// Icosphere scaled anisotropically onto an ellipsoid with the given semi-axes.
    pub fn ellipsoid(semi_axes: [f64; 3], level: u32) -> Result<Self> {
        if semi_axes.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "semi-axes must be positive, got {semi_axes:?}"
            )));
        }
        let triangles = 20usize.saturating_mul(4usize.saturating_pow(level));
        let limit = 20 * 4usize.pow(MAX_SPHERE_LEVEL);
        if level > MAX_SPHERE_LEVEL {
            return Err(Error::Capacity {
                level,
                triangles,
                limit,
            });
        }
        let (unit_vertices, faces) = unit_icosphere(level);
        let vertices = unit_vertices
            .into_iter()
            .map(|v| [v[0] * semi_axes[0], v[1] * semi_axes[1], v[2] * semi_axes[2]])
            .collect();
        Self::from_parts(vertices, faces, SurfaceRule::Centroid)
    }

    /// Same geometry with another quadrature rule.
    pub fn with_rule(mut self, rule: SurfaceRule) -> Self {
        self.rule = rule;
        self.nodes = self.build_nodes();
        self
    }

    pub fn rule(&self) -> SurfaceRule {
        self.rule
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn nodes(&self) -> &[QuadratureNode] {
        &self.nodes
    }

    /// Node index range owned by triangle `t`.
    pub fn triangle_nodes(&self, t: usize) -> std::ops::Range<usize> {
        let m = self.rule.nodes_per_triangle();
        t * m..(t + 1) * m
    }

    pub fn normal(&self, t: usize) -> Point {
        self.normals[t]
    }

    /// The outward normal as a purely vectorial quaternion.
    pub fn normal_vector(&self, t: usize) -> ComplexVector3 {
        ComplexVector3::from_real(self.normals[t])
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    pub fn centroid(&self, t: usize) -> Point {
        self.centroids[t]
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Longest edge of triangle `t`.
    pub fn local_spacing(&self, t: usize) -> f64 {
        self.edge_lengths[t]
    }

    /// Mesh size `h`: the longest edge in the mesh.
    pub fn spacing(&self) -> f64 {
        self.edge_lengths.iter().cloned().fold(0.0, f64::max)
    }

    /// Distance from `x` to the surface and the nearest triangle.
    pub fn distance_to_surface(&self, x: Point) -> (f64, usize) {
        self.triangles
            .iter()
            .enumerate()
            .map(|(t, tri)| {
                let [a, b, c] = tri.map(|i| self.vertices[i]);
                (vec3::point_triangle_distance(x, a, b, c), t)
            })
            .fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best })
    }

    /// Exclusion-zone rule for boundary quadrature: `x` must lie at least
    /// `factor` local spacings away from the surface (up to rounding).
    pub fn check_clearance(&self, x: Point, factor: f64) -> Result<()> {
        let (distance, t) = self.distance_to_surface(x);
        let min_distance = factor * self.local_spacing(t);
        if distance < min_distance * (1.0 - 1e-9) {
            return Err(Error::NearBoundary {
                point: x,
                distance,
                min_distance,
            });
        }
        Ok(())
    }

    /// Generalized winding number: 1 inside, 0 outside for a closed, outward mesh.
    pub fn winding_number(&self, x: Point) -> f64 {
        let total: f64 = self
            .triangles
            .iter()
            .map(|tri| {
                let [a, b, c] = tri.map(|i| sub(self.vertices[i], x));
                vec3::solid_angle(a, b, c)
            })
            .sum();
        total / (4.0 * std::f64::consts::PI)
    }

    pub fn contains(&self, x: Point) -> bool {
        self.winding_number(x) > 0.5
    }

    /// Volume enclosed by the surface, from signed tetrahedra.
    pub fn enclosed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|tri| {
                let [a, b, c] = tri.map(|i| self.vertices[i]);
                dot(a, cross(b, c)) / 6.0
            })
            .sum()
    }

    /// Topology and divergence-theorem checks.
    pub fn checked_normals(&self) -> Result<MeshDiagnostics> {
        let mut undirected: HashMap<(usize, usize), usize> = HashMap::new();
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                let (i, j) = (tri[k], tri[(k + 1) % 3]);
                *undirected.entry((i.min(j), i.max(j))).or_default() += 1;
                *directed.entry((i, j)).or_default() += 1;
            }
        }
        let mut open: Vec<_> = undirected.iter().filter(|(_, &n)| n != 2).collect();
        if !open.is_empty() {
            open.sort();
            let ((i, j), n) = open[0];
            return Err(Error::Topology(format!(
                "{} edges are not shared by exactly two triangles (first: {i}-{j} used {n} times)",
                open.len()
            )));
        }
        let inconsistent_triangles: Vec<usize> = self
            .triangles
            .iter()
            .enumerate()
            .filter(|(_, tri)| {
                (0..3)
                    .filter(|&k| directed[&(tri[k], tri[(k + 1) % 3])] > 1)
                    .count()
                    >= 2
            })
            .map(|(t, _)| t)
            .collect();
        let orientation_consistent = directed.values().all(|&n| n == 1);

        let mut net_normal = [0.0; 3];
        let mut position_flux = 0.0;
        for t in 0..self.triangles.len() {
            net_normal = add(net_normal, scale(self.normals[t], self.areas[t]));
            position_flux += dot(self.centroids[t], self.normals[t]) * self.areas[t];
        }
        Ok(MeshDiagnostics {
            total_area: self.total_area(),
            net_normal,
            position_flux,
            orientation_consistent,
            inconsistent_triangles,
        })
    }

    /// One point per triangle, `depth` inward from the centroid along `-n`.
    pub fn interior_offset_points(&self, depth: f64) -> Result<Vec<OffsetPoint>> {
        if !(depth > 0.0 && depth.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "offset depth must be positive, got {depth}"
            )));
        }
        Ok((0..self.triangles.len())
            .into_par_iter()
            .map(|t| {
                let tau = self.centroids[t];
                let point = sub(tau, scale(self.normals[t], depth));
                let (distance, _) = self.distance_to_surface(point);
                let feature_warning =
                    distance < depth * (1.0 - 1e-9) || !self.contains(point);
                OffsetPoint {
                    triangle: t,
                    boundary_point: tau,
                    point,
                    feature_warning,
                }
            })
            .collect())
    }
}

/// Unit icosphere, faces oriented outward.
fn unit_icosphere(level: u32) -> (Vec<Point>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Point> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .into_iter()
    .map(vec3::normalize)
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for f in faces.iter_mut() {
        let [a, b, c] = f.map(|i| vertices[i]);
        if dot(cross(sub(b, a), sub(c, a)), add(add(a, b), c)) < 0.0 {
            f.swap(1, 2);
        }
    }
    for _ in 0..level {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |i: usize, j: usize, vertices: &mut Vec<Point>| {
            *midpoints.entry((i.min(j), i.max(j))).or_insert_with(|| {
                let m = vec3::normalize(scale(add(vertices[i], vertices[j]), 0.5));
                vertices.push(m);
                vertices.len() - 1
            })
        };
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (vertices, faces)
}

//! Discrete descriptions of the domain and its boundary.

mod gauss;
mod mesh;
mod off;
mod volume;

pub use gauss::gauss_legendre;
pub use mesh::{
    MeshDiagnostics, OffsetPoint, QuadratureNode, SurfaceMesh, SurfaceRule, MAX_SPHERE_LEVEL,
};
pub use volume::{
    sample_ball, Ellipsoid, Pole, VolumeQuadrature, VolumeScheme, DEFAULT_RADIAL_ORDER,
};

/// A point (or displacement) in `R^3`.
pub type Point = [f64; 3];

pub(crate) mod vec3 {
    use super::Point;

    #[inline]
    pub fn add(a: Point, b: Point) -> Point {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    #[inline]
    pub fn sub(a: Point, b: Point) -> Point {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    #[inline]
    pub fn scale(a: Point, s: f64) -> Point {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    #[inline]
    pub fn dot(a: Point, b: Point) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    #[inline]
    pub fn cross(a: Point, b: Point) -> Point {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    #[inline]
    pub fn norm(a: Point) -> f64 {
        dot(a, a).sqrt()
    }

    pub fn normalize(a: Point) -> Point {
        scale(a, 1.0 / norm(a))
    }

    /// Solid angle subtended at the origin by the triangle `(a, b, c)`,
    /// signed by orientation (Van Oosterom and Strackee).
    pub fn solid_angle(a: Point, b: Point, c: Point) -> f64 {
        let (la, lb, lc) = (norm(a), norm(b), norm(c));
        let numerator = dot(a, cross(b, c));
        let denominator =
            la * lb * lc + dot(a, b) * lc + dot(b, c) * la + dot(c, a) * lb;
        2.0 * numerator.atan2(denominator)
    }

    /// Distance from `p` to the closed triangle `(a, b, c)`.
    pub fn point_triangle_distance(p: Point, a: Point, b: Point, c: Point) -> f64 {
        // Ericson, closest point on triangle by Voronoi regions.
        let ab = sub(b, a);
        let ac = sub(c, a);
        let ap = sub(p, a);
        let d1 = dot(ab, ap);
        let d2 = dot(ac, ap);
        if d1 <= 0.0 && d2 <= 0.0 {
            return norm(ap);
        }
        let bp = sub(p, b);
        let d3 = dot(ab, bp);
        let d4 = dot(ac, bp);
        if d3 >= 0.0 && d4 <= d3 {
            return norm(bp);
        }
        let vc = d1 * d4 - d3 * d2;
        if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
            let v = d1 / (d1 - d3);
            return norm(sub(p, add(a, scale(ab, v))));
        }
        let cp = sub(p, c);
        let d5 = dot(ab, cp);
        let d6 = dot(ac, cp);
        if d6 >= 0.0 && d5 <= d6 {
            return norm(cp);
        }
        let vb = d5 * d2 - d1 * d6;
        if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
            let w = d2 / (d2 - d6);
            return norm(sub(p, add(a, scale(ac, w))));
        }
        let va = d3 * d6 - d5 * d4;
        if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
            let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
            return norm(sub(p, add(b, scale(sub(c, b), w))));
        }
        let denom = 1.0 / (va + vb + vc);
        let v = vb * denom;
        let w = vc * denom;
        norm(sub(p, add(a, add(scale(ab, v), scale(ac, w)))))
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn triangle_distance_regions() {
            let (a, b, c) = ([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
            assert!((point_triangle_distance([0.2, 0.2, 0.5], a, b, c) - 0.5).abs() < 1e-15);
            assert!((point_triangle_distance([-1.0, -1.0, 0.0], a, b, c) - 2f64.sqrt()).abs() < 1e-15);
            assert!((point_triangle_distance([0.5, -2.0, 0.0], a, b, c) - 2.0).abs() < 1e-15);
            assert!((point_triangle_distance([1.0, 1.0, 0.0], a, b, c) - 0.5f64.sqrt()).abs() < 1e-15);
        }

        #[test]
        fn octant_solid_angle() {
            let w = solid_angle([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
            assert!((w - std::f64::consts::PI / 2.0).abs() < 1e-14);
        }
    }
}

//! Geometric kernel: vectors, bisector normals, spherical conversion,
//! specular reflection, tile rotation operators, and ray-rectangle
//! intersection.
//!
//! Everything in this module is pure and stateless; all angles are radians
//! and all lengths are meters.

use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Minimum hit distance along a ray, guarding against self-intersection
/// immediately after a bounce.
pub const HIT_EPS: f64 = 1e-6;

/// Slack on the parametric rectangle coordinates so that hits landing
/// exactly on a shared edge are counted by both rectangles and rays cannot
/// leak through wall seams.
const PARAM_EPS: f64 = 1e-9;

/// Squared norm below which the azimuth of a vector is considered
/// undefined (the vector is on the z-axis).
const AXIS_EPS_SQ: f64 = 1e-18;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    /// The two reference points sit in exactly opposite directions, so the
    /// half-sum of their unit vectors vanishes (grazing limit).
    #[error("degenerate bisector: reference directions are opposite")]
    DegenerateBisector,
    /// A reference point coincides with the surface point.
    #[error("coincident point: reference point equals the surface point")]
    CoincidentPoint,
    /// The zero vector has no direction.
    #[error("zero vector has no spherical representation")]
    ZeroVector,
}

/// 3D Cartesian vector. Positions are in meters; directions are unitless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Vector3 = Vector3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vector3 = Vector3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Vector3 = Vector3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Vector3 = Vector3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vector3) -> Vector3 {
        Vector3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector in the same direction. Returns `None` for the zero vector.
    pub fn normalized(self) -> Option<Vector3> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(self / n)
        }
    }

    pub fn distance(self, other: Vector3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Vector3;
    fn mul(self, s: f64) -> Vector3 {
        Vector3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vector3 {
    type Output = Vector3;
    fn div(self, s: f64) -> Vector3 {
        Vector3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vector3 {
    type Output = Vector3;
    fn neg(self) -> Vector3 {
        Vector3::new(-self.x, -self.y, -self.z)
    }
}

/// Spherical representation of a vector: length, elevation from +z and
/// azimuth in the xy-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalAngles {
    /// Length, >= 0.
    pub r: f64,
    /// Elevation angle from the +z axis, in [0, pi].
    pub theta: f64,
    /// Azimuth angle, in (-pi, pi].
    pub phi: f64,
}

/// Semi-infinite ray with unit direction.
#[derive(Debug, Clone, Copy)]
pub struct Ray {
    pub origin: Vector3,
    pub direction: Vector3,
}

impl Ray {
    pub fn new(origin: Vector3, direction: Vector3) -> Self {
        Self { origin, direction }
    }

    pub fn point_at(&self, t: f64) -> Vector3 {
        self.origin + self.direction * t
    }
}

/// Finite planar rectangle spanned by two orthogonal edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Rect3 {
    pub corner: Vector3,
    pub edge_u: Vector3,
    pub edge_v: Vector3,
    pub material_id: String,
}

impl Rect3 {
    pub fn new(corner: Vector3, edge_u: Vector3, edge_v: Vector3, material_id: impl Into<String>) -> Self {
        Self { corner, edge_u, edge_v, material_id: material_id.into() }
    }

    /// Unit normal, `edge_u x edge_v` normalized.
    pub fn normal(&self) -> Vector3 {
        self.edge_u
            .cross(self.edge_v)
            .normalized()
            .expect("rectangle edges must be non-degenerate")
    }

    pub fn center(&self) -> Vector3 {
        self.corner + self.edge_u * 0.5 + self.edge_v * 0.5
    }

    pub fn area(&self) -> f64 {
        self.edge_u.cross(self.edge_v).norm()
    }
}

/// Result of a ray-rectangle intersection.
#[derive(Debug, Clone, Copy)]
pub struct RectHit {
    /// Distance along the ray, in meters.
    pub t: f64,
    /// World-space hit point.
    pub point: Vector3,
    /// |direction . normal|: cosine of the incidence angle measured from
    /// the surface normal.
    pub cos_incidence: f64,
}

/// Normal that reflects a ray arriving from `b` at surface point `a`
/// toward `c`: the normalized half-sum of the unit vectors from `a`
/// toward `b` and from `a` toward `c`.
pub fn bisector_normal(a: Vector3, b: Vector3, c: Vector3) -> Result<Vector3, GeometryError> {
    let to_b = (b - a).normalized().ok_or(GeometryError::CoincidentPoint)?;
    let to_c = (c - a).normalized().ok_or(GeometryError::CoincidentPoint)?;
    let half_sum = (to_b + to_c) * 0.5;
    if half_sum.norm() <= 1e-12 {
        return Err(GeometryError::DegenerateBisector);
    }
    Ok(half_sum / half_sum.norm())
}

/// Cartesian to spherical conversion.
///
/// The azimuth of a vector on the z-axis is defined as 0, and the azimuth
/// of a vector on the negative x-axis as pi, so the result always lies in
/// (-pi, pi].
pub fn cartesian_to_spherical(v: Vector3) -> Result<SphericalAngles, GeometryError> {
    let r = v.norm();
    if r == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    let theta = (v.z / r).clamp(-1.0, 1.0).acos();
    let rho_sq = v.x * v.x + v.y * v.y;
    let phi = if rho_sq < AXIS_EPS_SQ {
        0.0
    } else if v.y == 0.0 {
        if v.x < 0.0 {
            std::f64::consts::PI
        } else {
            0.0
        }
    } else {
        v.y.signum() * (v.x / rho_sq.sqrt()).clamp(-1.0, 1.0).acos()
    };
    Ok(SphericalAngles { r, theta, phi })
}

/// Inverse of [`cartesian_to_spherical`].
pub fn spherical_to_cartesian(s: SphericalAngles) -> Vector3 {
    let (sin_t, cos_t) = s.theta.sin_cos();
    let (sin_p, cos_p) = s.phi.sin_cos();
    Vector3::new(s.r * sin_t * cos_p, s.r * sin_t * sin_p, s.r * cos_t)
}

/// Unit vector with elevation `theta` and azimuth `phi`.
pub fn unit_from_angles(theta: f64, phi: f64) -> Vector3 {
    spherical_to_cartesian(SphericalAngles { r: 1.0, theta, phi })
}

/// Specular reflection of direction `d` about unit normal `n`:
/// `d - 2 (d.n) n`. The sign of `n` does not matter.
pub fn reflect_direction(d: Vector3, n: Vector3) -> Vector3 {
    d - n * (2.0 * d.dot(n))
}

/// Mirror a point across the plane through `plane_point` with unit
/// normal `n`.
pub fn mirror_point(p: Vector3, plane_point: Vector3, n: Vector3) -> Vector3 {
    p - n * (2.0 * (p - plane_point).dot(n))
}

/// Row-major 3x3 matrix; used for tile rotation operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub rows: [[f64; 3]; 3],
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3 {
        rows: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    pub fn rotation_y(angle: f64) -> Mat3 {
        let (s, c) = angle.sin_cos();
        Mat3 { rows: [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]] }
    }

    pub fn rotation_z(angle: f64) -> Mat3 {
        let (s, c) = angle.sin_cos();
        Mat3 { rows: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]] }
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.rows;
        Mat3 {
            rows: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn apply(&self, v: Vector3) -> Vector3 {
        let m = &self.rows;
        Vector3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn matmul(&self, other: &Mat3) -> Mat3 {
        let a = &self.rows;
        let b = &other.rows;
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Mat3 { rows: out }
    }
}

impl Mul<Vector3> for Mat3 {
    type Output = Vector3;
    fn mul(self, v: Vector3) -> Vector3 {
        self.apply(v)
    }
}

/// Rotation taking a flat tile (normal +z) to the orientation whose normal
/// has elevation `theta` and azimuth `phi`: `Rz(phi) * Ry(theta)`.
///
/// The roll about the tile normal is fixed by this choice so that a given
/// (theta, phi) pair always produces the same corner geometry.
pub fn tile_rotation(theta: f64, phi: f64) -> Mat3 {
    Mat3::rotation_z(phi).matmul(&Mat3::rotation_y(theta))
}

/// Nearest intersection of `ray` with `rect` beyond [`HIT_EPS`], or `None`.
///
/// Hits exactly on the rectangle boundary count as hits, so surfaces that
/// share an edge leave no gap between them.
pub fn ray_rect_intersect(ray: &Ray, rect: &Rect3) -> Option<RectHit> {
    let normal = rect.edge_u.cross(rect.edge_v);
    let scale = normal.norm();
    if scale == 0.0 {
        return None;
    }
    let normal = normal / scale;
    let denom = ray.direction.dot(normal);
    if denom.abs() < 1e-15 {
        return None; // parallel to the plane
    }
    let t = (rect.corner - ray.origin).dot(normal) / denom;
    if t <= HIT_EPS {
        return None;
    }
    let point = ray.point_at(t);
    let rel = point - rect.corner;
    let alpha = rel.dot(rect.edge_u) / rect.edge_u.norm_sq();
    let beta = rel.dot(rect.edge_v) / rect.edge_v.norm_sq();
    if !(-PARAM_EPS..=1.0 + PARAM_EPS).contains(&alpha)
        || !(-PARAM_EPS..=1.0 + PARAM_EPS).contains(&beta)
    {
        return None;
    }
    Some(RectHit { t, point, cos_incidence: denom.abs() })
}

/// Whether the open segment from `a` to `b` is blocked by any of the
/// given rectangles. Endpoints themselves are excluded via [`HIT_EPS`].
pub fn segment_occluded(a: Vector3, b: Vector3, rects: &[Rect3]) -> bool {
    let delta = b - a;
    let len = delta.norm();
    if len <= HIT_EPS {
        return false;
    }
    let ray = Ray::new(a, delta / len);
    rects
        .iter()
        .filter_map(|r| ray_rect_intersect(&ray, r))
        .any(|hit| hit.t < len - HIT_EPS)
}

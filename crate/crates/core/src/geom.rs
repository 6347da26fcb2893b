//! Small fixed-size linear algebra and the angle conventions shared by all charts.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vectors shorter than this are treated as vanishing nodes.
pub const EPS_NODE: f64 = 1e-12;
/// Relative tolerance for the perpendicularity required by [`oriented_angle`].
pub const TAU_PERP: f64 = 1e-8;
/// Tolerance used when comparing angles modulo 2π.
pub const ANGLE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3(pub [f64; 3]);

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3(a)
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.0
    }
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0, 0.0, 0.0]);
    pub const K1: Vec3 = Vec3([1.0, 0.0, 0.0]);
    pub const K2: Vec3 = Vec3([0.0, 1.0, 0.0]);
    pub const K3: Vec3 = Vec3([0.0, 0.0, 1.0]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    /// Unit vector, or `None` when shorter than [`EPS_NODE`].
    pub fn unit(self) -> Option<Vec3> {
        let n = self.norm();
        (n >= EPS_NODE).then(|| self * (1.0 / n))
    }

    pub fn max_abs(self) -> f64 {
        self.0.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// 3×3 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_columns(c1: Vec3, c2: Vec3, c3: Vec3) -> Mat3 {
        Mat3([
            [c1[0], c2[0], c3[0]],
            [c1[1], c2[1], c3[1]],
            [c1[2], c2[2], c3[2]],
        ])
    }

    pub fn column(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Mat3 {
        let a = &self.0;
        Mat3([
            [a[0][0], a[1][0], a[2][0]],
            [a[0][1], a[1][1], a[2][1]],
            [a[0][2], a[1][2], a[2][2]],
        ])
    }

    pub fn det(&self) -> f64 {
        self.column(0).dot(self.column(1).cross(self.column(2)))
    }

    pub fn max_abs_diff(&self, o: &Mat3) -> f64 {
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.0[i][j] - o.0[i][j]).abs());
            }
        }
        m
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(r)
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        let a = &self.0;
        Vec3([
            a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
            a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
            a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
        ])
    }
}

/// Rotation by `iota` about the first axis.
pub fn rot1(iota: f64) -> Mat3 {
    let (s, c) = iota.sin_cos();
    Mat3([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
}

/// Rotation by `h` about the third axis.
pub fn rot3(h: f64) -> Mat3 {
    let (s, c) = h.sin_cos();
    Mat3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

/// ℛ(ψ, ι) = R₃(ψ)·R₁(ι).
pub fn frame_rot(psi: f64, iota: f64) -> Mat3 {
    rot3(psi) * rot1(iota)
}

/// Product of ℛ factors, left to right.
pub fn frame_chain(factors: &[(f64, f64)]) -> Mat3 {
    factors
        .iter()
        .fold(Mat3::IDENTITY, |m, &(psi, iota)| m * frame_rot(psi, iota))
}

/// Orthonormal frame with first axis along `first` and third axis along `third`.
///
/// `first` must already be perpendicular to `third`.
pub fn frame_from_axes(first: Vec3, third: Vec3) -> Option<Mat3> {
    let e1 = first.unit()?;
    let e3 = third.unit()?;
    Some(Mat3::from_columns(e1, e3.cross(e1), e3))
}

/// Reduces an angle to [0, 2π).
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed difference a − b reduced to (−π, π].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Counterclockwise angle from `u` to `v` in the plane oriented by `w`, in [0, 2π).
pub fn oriented_angle(u: Vec3, v: Vec3, w: Vec3) -> Result<f64> {
    let (nu, nv, nw) = (u.norm(), v.norm(), w.norm());
    if nu < EPS_NODE || nv < EPS_NODE || nw < EPS_NODE {
        return Err(Error::DegenerateNode);
    }
    let (u, v, w) = (u * (1.0 / nu), v * (1.0 / nv), w * (1.0 / nw));
    if w.dot(u).abs() > TAU_PERP || w.dot(v).abs() > TAU_PERP {
        return Err(Error::NotCoplanar);
    }
    Ok(wrap_angle(w.dot(u.cross(v)).atan2(u.dot(v))))
}

/// Oriented angle without the perpendicularity test; callers guarantee the geometry.
pub(crate) fn angle_in_plane(u: Vec3, v: Vec3, w: Vec3) -> f64 {
    let w = w * (1.0 / w.norm());
    wrap_angle(w.dot(u.cross(v)).atan2(u.dot(v)))
}

/// Rotation about a horizontal axis written in rectangular variables.
///
/// With ρ(cos θ, sin θ) = (p, −q) and a tilt ι about the axis (cos θ, sin θ, 0),
/// `c` = (1 − cos ι)/(ρ²/2) and `s` = sin ι/ρ stay finite as ρ → 0, so the
/// matrix is a smooth function of (p, q). `sign` = −1 gives the tilt −ι.
pub fn horizontal_rotation(p: f64, q: f64, c: f64, s: f64, sign: f64) -> Mat3 {
    let v = Vec3::new(p, -q, 0.0);
    let w = v * (s * sign);
    let half_c = 0.5 * c;
    let diag = 1.0 - half_c * (p * p + q * q);
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = half_c * v[i] * v[j] + if i == j { diag } else { 0.0 };
        }
    }
    // skew part of w
    m[0][1] -= w[2];
    m[0][2] += w[1];
    m[1][0] += w[2];
    m[1][2] -= w[0];
    m[2][0] -= w[1];
    m[2][1] += w[0];
    Mat3(m)
}

/// Inverts [`horizontal_rotation`] for a rotation taking k³ to the unit vector `t`.
pub fn horizontal_rotation_pq(t: Vec3, s: f64, sign: f64) -> (f64, f64) {
    let w = Vec3::K3.cross(t) * (sign / s);
    (w[0], -w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn rot1_examples() {
        assert_eq!(rot1(0.0), Mat3::IDENTITY);
        assert!(close(rot1(PI / 2.0) * Vec3::K2, Vec3::K3, 1e-16));
        let r = rot1(0.7);
        assert!((r.transpose() * r).max_abs_diff(&Mat3::IDENTITY) <= 1e-15);
    }

    #[test]
    fn rot3_examples() {
        assert_eq!(rot3(0.0), Mat3::IDENTITY);
        assert!(close(rot3(PI / 2.0) * Vec3::K1, Vec3::K2, 1e-16));
        assert!((rot3(0.3) * rot3(1.1)).max_abs_diff(&rot3(1.4)) <= 1e-15);
    }

    #[test]
    fn oriented_angle_examples() {
        let k1 = Vec3::K1;
        assert_eq!(oriented_angle(k1, k1, Vec3::K3).unwrap(), 0.0);
        assert!((oriented_angle(k1, Vec3::K2, Vec3::K3).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((oriented_angle(k1, -k1, Vec3::K3).unwrap() - PI).abs() < 1e-15);
        assert!(matches!(
            oriented_angle(Vec3::ZERO, k1, Vec3::K3),
            Err(Error::DegenerateNode)
        ));
        assert!(matches!(
            oriented_angle(k1, Vec3::K3, Vec3::K3),
            Err(Error::NotCoplanar)
        ));
    }

    #[test]
    fn horizontal_rotation_matches_conjugated_rot1() {
        let (theta, iota): (f64, f64) = (0.83, 0.41);
        let rho: f64 = 0.37;
        let (p, q) = (rho * theta.cos(), -rho * theta.sin());
        let delta = 0.5 * rho * rho;
        let c = (1.0 - iota.cos()) / delta;
        let s = iota.sin() / rho;
        let expect = rot3(theta) * rot1(iota) * rot3(-theta);
        assert!(horizontal_rotation(p, q, c, s, 1.0).max_abs_diff(&expect) < 1e-15);
        let expect_neg = rot3(theta) * rot1(-iota) * rot3(-theta);
        assert!(horizontal_rotation(p, q, c, s, -1.0).max_abs_diff(&expect_neg) < 1e-15);
        let t = expect * Vec3::K3;
        let (pp, qq) = horizontal_rotation_pq(t, s, 1.0);
        assert!((pp - p).abs() < 1e-15 && (qq - q).abs() < 1e-15);
    }

    #[test]
    fn frame_chain_composes() {
        let m = frame_chain(&[(0.2, 0.3), (1.0, -0.4)]);
        let expect = rot3(0.2) * rot1(0.3) * rot3(1.0) * rot1(-0.4);
        assert!(m.max_abs_diff(&expect) < 1e-16);
    }

    #[test]
    fn angle_helpers() {
        assert!((wrap_angle(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert!((angle_diff(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
    }
}

//! Pseudospin rotations on the unit sphere.
//!
//! Rotation angles are left-handed: a rotation through `t` about `n` is the
//! vector map induced by conjugation with `exp(i t n·σ/2)`. Angles live in
//! `[0, 2π)` and the inverse of a rotation through `t` is the rotation through
//! `2π − t`.

use core::ops::{Mul, Neg};

use crate::{wrap_angle, Error, Result, TWO_PI};

/// Tolerance used to validate unit-vector inputs.
pub const UNIT_TOL: f64 = 1e-12;

/// A unit vector in pseudospin space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub const X: UnitVector3 = UnitVector3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: UnitVector3 = UnitVector3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: UnitVector3 = UnitVector3 { x: 0.0, y: 0.0, z: 1.0 };

    /// Checked constructor; the norm must be 1 within [`UNIT_TOL`].
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || (n2 - 1.0).abs() > UNIT_TOL {
            return Err(Error::Domain(alloc::format!(
                "({x}, {y}, {z}) is not a unit vector"
            )));
        }
        Ok(Self { x, y, z })
    }

    /// Normalize an arbitrary non-zero vector.
    pub fn normalize(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = libm::sqrt(x * x + y * y + z * z);
        if n.is_nan() || n <= 0.0 || !n.is_finite() {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        Ok(Self { x: x / n, y: y / n, z: z / n })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &UnitVector3) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Euclidean distance to another unit vector.
    pub fn distance(&self, other: &UnitVector3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        libm::sqrt(dx * dx + dy * dy + dz * dz)
    }

    /// The unit vector `(sin β, 0, cos β)` lying in the x-z plane at polar angle `β`.
    pub fn polar_xz(beta: f64) -> Self {
        Self { x: libm::sin(beta), y: 0.0, z: libm::cos(beta) }
    }
}

impl Neg for UnitVector3 {
    type Output = UnitVector3;

    fn neg(self) -> UnitVector3 {
        UnitVector3 { x: -self.x, y: -self.y, z: -self.z }
    }
}

/// A rotation through `angle` (radians, `[0, 2π)`) about `axis`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisAngle {
    axis: UnitVector3,
    angle: f64,
}

impl AxisAngle {
    /// Any finite angle is accepted and wrapped into `[0, 2π)`.
    pub fn new(axis: UnitVector3, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::Domain("rotation angle must be finite".into()));
        }
        Ok(Self { axis, angle: wrap_angle(angle) })
    }

    pub fn axis(&self) -> UnitVector3 {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// The inverse rotation, `2π − angle` about the same axis.
    pub fn inverse(&self) -> AxisAngle {
        AxisAngle { axis: self.axis, angle: wrap_angle(TWO_PI - self.angle) }
    }

    /// Unit quaternion `(w, x, y, z)` of the equivalent right-handed rotation,
    /// i.e. the rotation through `−angle`.
    pub fn quaternion(&self) -> Quaternion {
        let h = -0.5 * self.angle;
        let s = libm::sin(h);
        Quaternion {
            w: libm::cos(h),
            x: s * self.axis.x,
            y: s * self.axis.y,
            z: s * self.axis.z,
        }
    }
}

/// Hamilton quaternion; only used to compose rotations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn conjugate(&self) -> Quaternion {
        Quaternion { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    /// Apply the (right-handed) rotation `q v q*` to a vector.
    pub fn rotate(&self, v: [f64; 3]) -> [f64; 3] {
        let p = Quaternion { w: 0.0, x: v[0], y: v[1], z: v[2] };
        let r = *self * p * self.conjugate();
        [r.x, r.y, r.z]
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }
}

/// Rotate `v` about `r.axis` through `r.angle` in the left-handed sense.
///
/// Rodrigues' formula with the angle negated; the result is renormalized so
/// repeated application cannot drift off the sphere.
pub fn rotate_vector(v: UnitVector3, r: &AxisAngle) -> UnitVector3 {
    let theta = -r.angle;
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    let k = r.axis;
    let kxv = k.cross(&v);
    let kdv = k.dot(&v);
    let x = v.x * c + kxv[0] * s + k.x * kdv * (1.0 - c);
    let y = v.y * c + kxv[1] * s + k.y * kdv * (1.0 - c);
    let z = v.z * c + kxv[2] * s + k.z * kdv * (1.0 - c);
    let n = libm::sqrt(x * x + y * y + z * z);
    UnitVector3 { x: x / n, y: y / n, z: z / n }
}

/// Apply a list of rotations in order (first element acts first).
pub fn rotate_sequence(v: UnitVector3, rotations: &[AxisAngle]) -> UnitVector3 {
    rotations.iter().fold(v, rotate_vector)
}

/// The axis `2f(f·ẑ) − ẑ`: the image of `ẑ` under a π-rotation about `f`.
///
/// A recoupling matrix of the form `f·σ` turns the pseudospin z-axis into this axis.
pub fn axis_from_reflection(f: UnitVector3) -> UnitVector3 {
    let fz = f.z;
    let x = 2.0 * f.x * fz;
    let y = 2.0 * f.y * fz;
    let z = 2.0 * f.z * fz - 1.0;
    let n = libm::sqrt(x * x + y * y + z * z);
    UnitVector3 { x: x / n, y: y / n, z: z / n }
}

/// Solve `tan(t/2)·tan(t̄/2) = 1/c` for `t̄ ∈ (0, 2π)`.
///
/// `c = ẑ·n̂` is the cosine between the two rotation axes. The constraint is
/// evaluated as `cot(t̄/2) = c·tan(t/2)`, i.e. `t̄/2 = atan2(cos(t/2), c·sin(t/2))`
/// taken in `(0, π)`, so `t = π` gives the finite limit `t̄ → 2π` instead of
/// overflowing.
pub fn three_rotation_companion(c: f64, t: f64) -> Result<f64> {
    if !(c > -1.0 && c < 0.0) {
        return Err(Error::Domain(alloc::format!("axis cosine {c} is not in (-1, 0)")));
    }
    if !(t > 0.0 && t < TWO_PI) {
        return Err(Error::Domain(alloc::format!("angle {t} is not in (0, 2π)")));
    }
    let num = libm::cos(0.5 * t);
    let den = c * libm::sin(0.5 * t);
    let half = if num >= 0.0 { libm::atan2(num, den) } else { libm::atan2(-num, -den) };
    Ok(2.0 * half)
}

/// The angle `arccos(c / (c + sign))` of the two-step cone construction.
///
/// With `sign = +1` the rotations `ẑ` then `n̂` through this angle carry `n̂`
/// onto `ẑ`; with `sign = −1`, rotating about `ẑ` by it and then about `n̂` by
/// its complement carries `n̂` onto `−ẑ`.
pub fn conjugation_angle(c: f64, sign: i8) -> Result<f64> {
    if !(c > -1.0 && c < 0.0) {
        return Err(Error::Domain(alloc::format!("axis cosine {c} is not in (-1, 0)")));
    }
    let denom = match sign {
        1 => c + 1.0,
        -1 => c - 1.0,
        _ => return Err(Error::Domain("sign must be +1 or -1".into())),
    };
    let ratio = c / denom;
    if ratio.abs() > 1.0 {
        return Err(Error::Domain(alloc::format!("|c/(c±1)| = {} > 1", ratio.abs())));
    }
    Ok(libm::acos(ratio))
}

/// The recoupling vector of three spin-1/2 particles, `(√3/2, 0, −1/2)`.
pub fn f1() -> UnitVector3 {
    UnitVector3 { x: libm::sqrt(3.0) / 2.0, y: 0.0, z: -0.5 }
}

/// The recoupling vector for a spin-1 and two spin-1/2 particles, `(√(2/3), 0, −1/√3)`.
pub fn f2() -> UnitVector3 {
    UnitVector3 { x: libm::sqrt(2.0 / 3.0), y: 0.0, z: -1.0 / libm::sqrt(3.0) }
}

/// Rotation axis of a pulse on the unlabelled pair of three spins.
pub fn n1() -> UnitVector3 {
    axis_from_reflection(f1())
}

/// Rotation axis of a three-pulse block seen from the four-spin pseudospin.
pub fn n2() -> UnitVector3 {
    axis_from_reflection(f2())
}

/// `ẑ·n̂₁ = −1/2`.
pub fn n1_cosine() -> f64 {
    n1().z
}

/// `ẑ·n̂₂ = −1/3`.
pub fn n2_cosine() -> f64 {
    n2().z
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use num_complex::Complex64;

    fn close(a: UnitVector3, b: UnitVector3, tol: f64) -> bool {
        a.distance(&b) < tol
    }

    /// Independent route: conjugate v·σ with U = exp(i θ n·σ/2) as 2×2 matrices.
    fn rotate_by_su2(v: UnitVector3, r: &AxisAngle) -> [f64; 3] {
        let (n, th) = (r.axis(), r.angle());
        let (c, s) = (libm::cos(th / 2.0), libm::sin(th / 2.0));
        let i = Complex64::i();
        // U = cos + i sin n·σ
        let u = [
            [Complex64::new(c, 0.0) + i * s * n.z(), i * s * Complex64::new(n.x(), -n.y())],
            [i * s * Complex64::new(n.x(), n.y()), Complex64::new(c, 0.0) - i * s * n.z()],
        ];
        let m = [
            [Complex64::new(v.z(), 0.0), Complex64::new(v.x(), -v.y())],
            [Complex64::new(v.x(), v.y()), Complex64::new(-v.z(), 0.0)],
        ];
        let mut um = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..2 {
                    um[a][b] += u[a][k] * m[k][b];
                }
            }
        }
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..2 {
                    out[a][b] += um[a][k] * u[b][k].conj();
                }
            }
        }
        [out[1][0].re, out[1][0].im, out[0][0].re]
    }

    #[test]
    fn rotation_fixes_its_axis() {
        let r = AxisAngle::new(UnitVector3::Z, 1.234).unwrap();
        assert!(close(rotate_vector(UnitVector3::Z, &r), UnitVector3::Z, 1e-15));
    }

    #[test]
    fn left_handed_quarter_turn() {
        let r = AxisAngle::new(UnitVector3::Z, 0.5 * PI).unwrap();
        let out = rotate_vector(UnitVector3::X, &r);
        assert!(close(out, -UnitVector3::Y, 1e-15), "{out:?}");
    }

    #[test]
    fn rodrigues_matches_su2_conjugation() {
        let v = UnitVector3::normalize(0.3, -0.5, 0.8).unwrap();
        let axis = UnitVector3::normalize(-0.2, 0.7, 0.1).unwrap();
        for k in 0..20 {
            let r = AxisAngle::new(axis, 0.31 * k as f64).unwrap();
            let a = rotate_vector(v, &r).to_array();
            let b = rotate_by_su2(v, &r);
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn n2_is_carried_to_z() {
        let t4 = 2.0 * PI / 3.0;
        let out = rotate_sequence(
            n2(),
            &[AxisAngle::new(UnitVector3::Z, t4).unwrap(), AxisAngle::new(n2(), t4).unwrap()],
        );
        assert!(close(out, UnitVector3::Z, 1e-12), "{out:?}");
    }

    #[test]
    fn reflection_axes() {
        assert!((n1_cosine() + 0.5).abs() < 1e-15);
        assert!((n2_cosine() + 1.0 / 3.0).abs() < 1e-15);
        assert!(close(axis_from_reflection(UnitVector3::Z), UnitVector3::Z, 1e-15));
        // cos⁻¹(−1/2) = 2π/3
        assert!((libm::acos(n1_cosine()) - 2.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn companion_values() {
        let tb = three_rotation_companion(-0.5, 1.91063).unwrap();
        assert!((tb - 4.37255).abs() < 5e-5, "{tb}");
        let tb = three_rotation_companion(-1.0 / 3.0, 2.0 * PI / 3.0).unwrap();
        assert!((tb - 4.0 * PI / 3.0).abs() < 1e-12);
        let t = 1.34004;
        let tb = three_rotation_companion(-0.5, t).unwrap();
        let res = libm::tan(t / 2.0) * libm::tan(tb / 2.0) + 2.0;
        assert!(res.abs() < 1e-9);
    }

    #[test]
    fn companion_domain() {
        assert!(three_rotation_companion(0.5, 1.0).is_err());
        assert!(three_rotation_companion(-1.0, 1.0).is_err());
        assert!(three_rotation_companion(-0.5, 0.0).is_err());
        assert!(three_rotation_companion(-0.5, TWO_PI).is_err());
        // finite limit at t = π
        let tb = three_rotation_companion(-0.5, PI).unwrap();
        assert!((tb - TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn conjugation_angles() {
        let t4 = conjugation_angle(-1.0 / 3.0, 1).unwrap();
        assert!((t4 - 2.0 * PI / 3.0).abs() < 1e-12);
        let t5 = conjugation_angle(-1.0 / 3.0, -1).unwrap();
        assert!((t5 - libm::acos(0.25)).abs() < 1e-12);
        assert!((t5 - 1.31812).abs() < 5e-5);
        let lim = conjugation_angle(-1e-12, 1).unwrap();
        assert!((lim - 0.5 * PI).abs() < 1e-11);
        assert!(conjugation_angle(-0.9, 1).is_err());
        assert!(conjugation_angle(-0.5, 0).is_err());
    }

    #[test]
    fn inverse_is_complement() {
        let r = AxisAngle::new(UnitVector3::X, 1.0).unwrap();
        assert!((r.inverse().angle() - (TWO_PI - 1.0)).abs() < 1e-15);
        let v = UnitVector3::normalize(1.0, 2.0, 3.0).unwrap();
        let back = rotate_vector(rotate_vector(v, &r), &r.inverse());
        assert!(close(back, v, 1e-14));
    }
}

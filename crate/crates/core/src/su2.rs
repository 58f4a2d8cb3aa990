//! Unit quaternions as SU(2) and pure quaternions as its Lie algebra.
//!
//! The quaternion `w + x i + y j + z k` is identified with the matrix
//!
//! ```text
//! [  w + i x    y + i z ]
//! [ -y + i z    w - i x ]
//! ```
//!
//! so the trace of an element is `2w`. A Lie algebra vector `(a, b, c)` is the
//! pure quaternion `a i + b j + c k`; its norm is measured with the inner
//! product `<X, Y> = -Tr(XY)`, which is `sqrt(2)` times the Euclidean norm of
//! `(a, b, c)`. With that normalisation `exp(v) = -I` exactly when the norm of
//! `v` is an odd multiple of `pi * sqrt(2)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, Matrix2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Products accumulated before an element is pushed back onto the unit sphere.
const RENORMALIZE_EVERY: u8 = 16;

/// Elements with trace below `-2 + LOG_REJECT` have no reliable principal logarithm.
pub const LOG_REJECT: f64 = 1e-8;

/// A plain quaternion, not necessarily of unit norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const ONE: Quat = Quat { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const ZERO: Quat = Quat { w: 0.0, x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z }
    }

    pub fn pure(v: [f64; 3]) -> Self {
        Quat::new(0.0, v[0], v[1], v[2])
    }

    pub fn conj(self) -> Self {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn dot(self, o: Quat) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quat::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            Quat::ONE
        } else {
            self.scale(1.0 / n)
        }
    }

    pub fn vector(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        Quat::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        self.scale(-1.0)
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        Quat::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// An element of SU(2), stored as a unit quaternion.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SU2Element {
    q: Quat,
    #[serde(skip)]
    drift: u8,
}

impl PartialEq for SU2Element {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl SU2Element {
    pub const IDENTITY: SU2Element = SU2Element { q: Quat::ONE, drift: 0 };
    pub const MINUS_IDENTITY: SU2Element = SU2Element {
        q: Quat::new(-1.0, 0.0, 0.0, 0.0),
        drift: 0,
    };

    /// Builds an element from arbitrary nonzero coordinates, normalising them.
    pub fn from_quat(q: Quat) -> Self {
        SU2Element { q: q.normalized(), drift: 0 }
    }

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self::from_quat(Quat::new(w, x, y, z))
    }

    /// `+I` for `+1`, `-I` for `-1`.
    pub fn central(sign: i8) -> Self {
        if sign < 0 {
            Self::MINUS_IDENTITY
        } else {
            Self::IDENTITY
        }
    }

    /// Haar-uniform random element.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q = Quat::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let n = q.norm_sq();
            if n > 1e-6 && n <= 1.0 {
                return Self::from_quat(q);
            }
        }
    }

    pub fn quat(&self) -> Quat {
        self.q
    }

    pub fn inverse(&self) -> Self {
        SU2Element { q: self.q.conj(), drift: self.drift }
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.q.w
    }

    /// Euclidean distance between the quaternion coordinates.
    pub fn distance(&self, other: &SU2Element) -> f64 {
        (self.q - other.q).norm()
    }

    pub fn is_central(&self, tol: f64) -> bool {
        self.distance(&Self::IDENTITY) < tol || self.distance(&Self::MINUS_IDENTITY) < tol
    }

    pub fn commutator(&self, other: &SU2Element) -> SU2Element {
        *self * *other * self.inverse() * other.inverse()
    }

    /// `h g h^-1`.
    pub fn conjugate_by(&self, h: &SU2Element) -> SU2Element {
        *h * *self * h.inverse()
    }

    pub fn powi(&self, n: i64) -> SU2Element {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut acc = Self::IDENTITY;
        for _ in 0..n.unsigned_abs() {
            acc = acc * base;
        }
        acc
    }

    pub fn to_matrix(&self) -> Matrix2<Complex<f64>> {
        let Quat { w, x, y, z } = self.q;
        Matrix2::new(
            Complex::new(w, x),
            Complex::new(y, z),
            Complex::new(-y, z),
            Complex::new(w, -x),
        )
    }
}

impl Mul for SU2Element {
    type Output = SU2Element;
    fn mul(self, o: SU2Element) -> SU2Element {
        let q = self.q * o.q;
        let drift = self.drift.max(o.drift) + 1;
        if drift >= RENORMALIZE_EVERY {
            SU2Element { q: q.normalized(), drift: 0 }
        } else {
            SU2Element { q, drift }
        }
    }
}

impl Neg for SU2Element {
    type Output = SU2Element;
    fn neg(self) -> SU2Element {
        SU2Element { q: -self.q, drift: self.drift }
    }
}

impl fmt::Display for SU2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Quat { w, x, y, z } = self.q;
        write!(f, "({w:.6} + {x:.6}i + {y:.6}j + {z:.6}k)")
    }
}

/// A vector of the Lie algebra su(2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su2Vector {
    pub v: [f64; 3],
}

impl Su2Vector {
    pub const ZERO: Su2Vector = Su2Vector { v: [0.0; 3] };

    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Su2Vector { v: [a, b, c] }
    }

    /// Norm for `<X, Y> = -Tr(XY)`.
    pub fn norm(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.euclidean_norm()
    }

    pub fn euclidean_norm(&self) -> f64 {
        (self.v[0] * self.v[0] + self.v[1] * self.v[1] + self.v[2] * self.v[2]).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Su2Vector::new(self.v[0] * s, self.v[1] * s, self.v[2] * s)
    }

    /// The traceless anti-Hermitian matrix of the vector.
    pub fn to_matrix(&self) -> Matrix2<Complex<f64>> {
        let [a, b, c] = self.v;
        Matrix2::new(
            Complex::new(0.0, a),
            Complex::new(b, c),
            Complex::new(-b, c),
            Complex::new(0.0, -a),
        )
    }
}

pub fn exp_su2(v: Su2Vector) -> SU2Element {
    let r = v.euclidean_norm();
    if r < 1e-300 {
        return SU2Element::IDENTITY;
    }
    let s = r.sin() / r;
    SU2Element::from_quat(Quat::new(r.cos(), v.v[0] * s, v.v[1] * s, v.v[2] * s))
}

/// Principal logarithm; the result has norm `alpha * sqrt(2)` with `alpha` in `[0, pi)`.
pub fn log_su2(g: &SU2Element) -> Result<Su2Vector> {
    if g.trace() < -2.0 + LOG_REJECT {
        return Err(Error::Domain(format!(
            "logarithm undefined near -I (trace {:.3e})",
            g.trace()
        )));
    }
    let q = g.quat();
    let im = (q.x * q.x + q.y * q.y + q.z * q.z).sqrt();
    if im < 1e-300 {
        return Ok(Su2Vector::ZERO);
    }
    let alpha = im.atan2(q.w);
    let s = alpha / im;
    Ok(Su2Vector::new(q.x * s, q.y * s, q.z * s))
}

/// Conjugacy invariant used to cluster orbits.
pub fn orbit_signature(g: &SU2Element) -> f64 {
    g.trace()
}

//! Exact rational scalars, points and quadratic polynomials on the plane.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;

use crate::numfmt::rational_to_f64;

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type ExactScalar = BigRational;

pub fn rat(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact value of a finite `f64`.
pub fn from_f64(v: f64) -> Option<ExactScalar> {
    BigRational::from_float(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactPoint {
    pub x0: ExactScalar,
    pub x1: ExactScalar,
}

impl ExactPoint {
    pub fn new(x0: ExactScalar, x1: ExactScalar) -> Self {
        Self { x0, x1 }
    }

    pub fn from_ratios(a: (i64, i64), b: (i64, i64)) -> Self {
        Self::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    pub fn from_f64(x0: f64, x1: f64) -> Option<Self> {
        Some(Self::new(from_f64(x0)?, from_f64(x1)?))
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [rational_to_f64(&self.x0), rational_to_f64(&self.x1)]
    }

    pub fn sub(&self, other: &ExactPoint) -> ExactPoint {
        ExactPoint::new(&self.x0 - &other.x0, &self.x1 - &other.x1)
    }

    pub fn dot(&self, other: &ExactPoint) -> ExactScalar {
        &self.x0 * &other.x0 + &self.x1 * &other.x1
    }

    pub fn norm_sq(&self) -> ExactScalar {
        self.dot(self)
    }
}

impl fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x0, self.x1)
    }
}

/// Symmetric 2x2 matrix `[[a00, a01], [a01, a11]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sym2 {
    pub a00: ExactScalar,
    pub a01: ExactScalar,
    pub a11: ExactScalar,
}

impl Sym2 {
    pub fn identity() -> Self {
        Self { a00: int(1), a01: int(0), a11: int(1) }
    }

    pub fn trace(&self) -> ExactScalar {
        &self.a00 + &self.a11
    }

    pub fn det(&self) -> ExactScalar {
        &self.a00 * &self.a11 - &self.a01 * &self.a01
    }

    pub fn apply(&self, p: &ExactPoint) -> ExactPoint {
        ExactPoint::new(&self.a00 * &p.x0 + &self.a01 * &p.x1, &self.a01 * &p.x0 + &self.a11 * &p.x1)
    }

    pub fn minus_identity(&self) -> Sym2 {
        Sym2 { a00: &self.a00 - int(1), a01: self.a01.clone(), a11: &self.a11 - int(1) }
    }

    /// Exact PSD test for a symmetric 2x2 matrix.
    pub fn is_psd(&self) -> bool {
        !self.a00.is_negative() && !self.a11.is_negative() && !self.det().is_negative()
    }
}

/// `q(z) = 1/2 z^T A z + b^T z + c` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticPiece {
    pub a: Sym2,
    pub b: ExactPoint,
    pub c: ExactScalar,
}

impl QuadraticPiece {
    pub fn zero() -> Self {
        Self { a: Sym2 { a00: int(0), a01: int(0), a11: int(0) }, b: ExactPoint::new(int(0), int(0)), c: int(0) }
    }

    /// `1/2 ||z - center||^2`
    pub fn half_dist_sq(center: &ExactPoint) -> Self {
        Self {
            a: Sym2::identity(),
            b: ExactPoint::new(-center.x0.clone(), -center.x1.clone()),
            c: center.norm_sq() / int(2),
        }
    }

    /// `(n0 z0 + n1 z1 - gamma)^2`
    pub fn affine_sq(n0: &ExactScalar, n1: &ExactScalar, gamma: &ExactScalar) -> Self {
        let two = int(2);
        Self {
            a: Sym2 { a00: &two * n0 * n0, a01: &two * n0 * n1, a11: &two * n1 * n1 },
            b: ExactPoint::new(-(&two * gamma * n0), -(&two * gamma * n1)),
            c: gamma * gamma,
        }
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self { c, ..Self::zero() }
    }

    pub fn scaled(&self, s: &ExactScalar) -> Self {
        Self {
            a: Sym2 { a00: &self.a.a00 * s, a01: &self.a.a01 * s, a11: &self.a.a11 * s },
            b: ExactPoint::new(&self.b.x0 * s, &self.b.x1 * s),
            c: &self.c * s,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            a: Sym2 {
                a00: &self.a.a00 + &other.a.a00,
                a01: &self.a.a01 + &other.a.a01,
                a11: &self.a.a11 + &other.a.a11,
            },
            b: ExactPoint::new(&self.b.x0 + &other.b.x0, &self.b.x1 + &other.b.x1),
            c: &self.c + &other.c,
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&int(-1)))
    }

    pub fn eval(&self, z: &ExactPoint) -> ExactScalar {
        let az = self.a.apply(z);
        az.dot(z) / int(2) + self.b.dot(z) + &self.c
    }

    pub fn grad(&self, z: &ExactPoint) -> ExactPoint {
        let az = self.a.apply(z);
        ExactPoint::new(az.x0 + &self.b.x0, az.x1 + &self.b.x1)
    }

    /// Coefficients `[c0, c1, c2]` of `t -> q(p + t d)`.
    pub fn restrict_to_line(&self, p: &ExactPoint, d: &ExactPoint) -> [ExactScalar; 3] {
        let ad = self.a.apply(d);
        let c2 = ad.dot(d) / int(2);
        let c1 = self.a.apply(p).dot(d) + self.b.dot(d);
        let c0 = self.eval(p);
        [c0, c1, c2]
    }
}

/// Closed (`<=`) or open (`<`) half-plane `<normal, z> <= offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfPlane {
    pub normal: ExactPoint,
    pub offset: ExactScalar,
    pub strict: bool,
}

impl HalfPlane {
    pub fn new(normal: ExactPoint, offset: ExactScalar, strict: bool) -> Self {
        assert!(!(normal.x0.is_zero() && normal.x1.is_zero()), "half-plane normal must be nonzero");
        Self { normal, offset, strict }
    }

    pub fn contains(&self, z: &ExactPoint) -> bool {
        let lhs = self.normal.dot(z);
        if self.strict {
            lhs < self.offset
        } else {
            lhs <= self.offset
        }
    }

    pub fn on_boundary(&self, z: &ExactPoint) -> bool {
        self.normal.dot(z) == self.offset
    }

    /// A point on the boundary line and a direction spanning it.
    pub fn boundary_line(&self) -> (ExactPoint, ExactPoint) {
        let n = &self.normal;
        let scale = &self.offset / n.norm_sq();
        let p = ExactPoint::new(&n.x0 * &scale, &n.x1 * &scale);
        let d = ExactPoint::new(-n.x1.clone(), n.x0.clone());
        (p, d)
    }
}

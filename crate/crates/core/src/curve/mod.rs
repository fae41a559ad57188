//! Exact arithmetic on Weierstrass curves over the rationals.

mod minimal;
mod point;
mod reduction;
mod torsion;

pub use minimal::{is_minimal_at, minimal_model, MinimalModelResult, Transform};
pub use point::CurvePoint;
pub use reduction::{classify_reduction, conductor_norms, ConductorNorms, ReductionKind, ReductionType};
pub use torsion::{torsion_order, torsion_points, TORSION_BOUND};

use crate::arith::{format_rational, ArithError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("singular curve (discriminant is zero)")]
    SingularCurve,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("point ({0}, {1}) is not on the curve")]
    NotOnCurve(String, String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with derived invariants.
#[derive(Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a: [BigRational; 5],
    b2: BigRational,
    b4: BigRational,
    b6: BigRational,
    b8: BigRational,
    c4: BigRational,
    c6: BigRational,
    disc: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl WeierstrassCurve {
    pub fn new(a: [BigRational; 5]) -> Result<WeierstrassCurve, CurveError> {
        let [a1, a2, a3, a4, a6] = &a;
        let b2 = a1 * a1 + q(4) * a2;
        let b4 = q(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + q(4) * a6;
        let b8 = a1 * a1 * a6 + q(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - q(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + q(36) * &b2 * &b4 - q(216) * &b6;
        let disc = -(&b2 * &b2 * &b8) - q(8) * &b4 * &b4 * &b4 - q(27) * &b6 * &b6 + q(9) * &b2 * &b4 * &b6;
        if disc.is_zero() {
            return Err(CurveError::SingularCurve);
        }
        Ok(WeierstrassCurve {
            a,
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            disc,
        })
    }

    pub fn from_ints(a: [i64; 5]) -> Result<WeierstrassCurve, CurveError> {
        WeierstrassCurve::new(a.map(q))
    }

    pub fn ainvs(&self) -> &[BigRational; 5] {
        &self.a
    }
    pub fn a1(&self) -> &BigRational {
        &self.a[0]
    }
    pub fn a2(&self) -> &BigRational {
        &self.a[1]
    }
    pub fn a3(&self) -> &BigRational {
        &self.a[2]
    }
    pub fn a4(&self) -> &BigRational {
        &self.a[3]
    }
    pub fn a6(&self) -> &BigRational {
        &self.a[4]
    }
    pub fn b2(&self) -> &BigRational {
        &self.b2
    }
    pub fn b4(&self) -> &BigRational {
        &self.b4
    }
    pub fn b6(&self) -> &BigRational {
        &self.b6
    }
    pub fn b8(&self) -> &BigRational {
        &self.b8
    }
    pub fn c4(&self) -> &BigRational {
        &self.c4
    }
    pub fn c6(&self) -> &BigRational {
        &self.c6
    }
    pub fn disc(&self) -> &BigRational {
        &self.disc
    }

    /// j = c4^3 / disc.
    pub fn j_invariant(&self) -> BigRational {
        &self.c4 * &self.c4 * &self.c4 / &self.disc
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|x| x.denom().is_one())
    }

    /// Exact on-curve test for an affine point.
    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                let [a1, a2, a3, a4, a6] = &self.a;
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                lhs == rhs
            }
        }
    }

    /// Build an affine point, checking the curve equation.
    pub fn point(&self, x: BigRational, y: BigRational) -> Result<CurvePoint, CurveError> {
        let p = CurvePoint::Affine { x, y };
        if self.contains(&p) {
            Ok(p)
        } else {
            let CurvePoint::Affine { x, y } = p else { unreachable!() };
            Err(CurveError::NotOnCurve(format_rational(&x), format_rational(&y)))
        }
    }

    /// 3x^2 + 2 a2 x + a4 - a1 y (the partial derivative in x).
    pub fn partial_x(&self, x: &BigRational, y: &BigRational) -> BigRational {
        q(3) * x * x + q(2) * self.a2() * x + self.a4() - self.a1() * y
    }

    /// 2y + a1 x + a3 (the partial derivative in y).
    pub fn partial_y(&self, x: &BigRational, y: &BigRational) -> BigRational {
        q(2) * y + self.a1() * x + self.a3()
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: -y - self.a1() * x - self.a3(),
            },
        }
    }

    pub fn add(&self, p: &CurvePoint, r: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, r) {
            (CurvePoint::Infinity, _) => return r.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = &self.a;
        let (lambda, nu) = if x1 == x2 {
            if (y1 + y2 + a1 * x2 + a3).is_zero() {
                return CurvePoint::Infinity;
            }
            let den = q(2) * y1 + a1 * x1 + a3;
            let lambda = (q(3) * x1 * x1 + q(2) * a2 * x1 + a4 - a1 * y1) / &den;
            let nu = (-(x1 * x1 * x1) + a4 * x1 + q(2) * a6 - a3 * y1) / &den;
            (lambda, nu)
        } else {
            let den = x2 - x1;
            let lambda = (y2 - y1) / &den;
            let nu = (y1 * x2 - y2 * x1) / &den;
            (lambda, nu)
        };
        let x3 = &lambda * &lambda + a1 * &lambda - a2 - x1 - x2;
        let y3 = -(&lambda + a1) * &x3 - nu - a3;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn sub(&self, p: &CurvePoint, r: &CurvePoint) -> CurvePoint {
        self.add(p, &self.neg(r))
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add(p, p)
    }

    /// n * P by binary double-and-add.
    pub fn mul(&self, n: i64, p: &CurvePoint) -> CurvePoint {
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.double(&b);
            }
        }
        acc
    }

    /// Σ n_i P_i.
    pub fn combination(&self, coeffs: &[i64], pts: &[CurvePoint]) -> CurvePoint {
        coeffs
            .iter()
            .zip(pts)
            .fold(CurvePoint::Infinity, |acc, (&n, p)| self.add(&acc, &self.mul(n, p)))
    }

    /// Apply a change of coordinates, returning the curve in the new
    /// coordinates.
    pub fn transform(&self, t: &Transform) -> WeierstrassCurve {
        let [a1, a2, a3, a4, a6] = &self.a;
        let Transform { u, r, s, t } = t;
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        let n1 = (a1 + q(2) * s) / u;
        let n2 = (a2 - s * a1 + q(3) * r - s * s) / &u2;
        let n3 = (a3 + r * a1 + q(2) * t) / &u3;
        let n4 = (a4 - s * a3 + q(2) * r * a2 - (t + r * s) * a1 + q(3) * r * r - q(2) * s * t) / &u4;
        let n6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / &u6;
        WeierstrassCurve::new([n1, n2, n3, n4, n6]).expect("isomorphic curve is nonsingular")
    }

    /// Denominator-free integral model is not guaranteed; this only
    /// reports whether all b-invariants are integers.
    pub fn has_integral_b(&self) -> bool {
        [&self.b2, &self.b4, &self.b6, &self.b8]
            .iter()
            .all(|x| x.denom().is_one())
    }

    /// Largest absolute value among numerators/denominators of the
    /// a-invariants, for diagnostics.
    pub fn coefficient_size(&self) -> BigInt {
        self.a
            .iter()
            .flat_map(|x| [x.numer().abs(), x.denom().clone()])
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

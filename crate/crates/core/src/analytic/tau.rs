//! Reduction of tau into the standard fundamental domain of SL2(Z).

use super::{AnalyticError, Complex, ErrReal};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Integer 2x2 matrix [[a, b], [c, d]] acting by (a tau + b)/(c tau + d).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unimodular {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Unimodular {
    pub fn identity() -> Unimodular {
        Unimodular {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn translation(k: &BigInt) -> Unimodular {
        Unimodular {
            b: k.clone(),
            ..Unimodular::identity()
        }
    }

    pub fn inversion() -> Unimodular {
        Unimodular {
            a: BigInt::zero(),
            b: -BigInt::one(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    /// Matrix product self * o (apply o first).
    pub fn compose(&self, o: &Unimodular) -> Unimodular {
        Unimodular {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn inverse(&self) -> Unimodular {
        Unimodular {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    fn ball(v: &BigInt, prec: u32) -> ErrReal {
        ErrReal::from_bigint(v, prec)
    }

    /// c tau + d
    pub fn automorphy(&self, tau: &Complex) -> Complex {
        let p = tau.prec();
        tau.mul_real(&Self::ball(&self.c, p))
            .add(&Complex::from_real(Self::ball(&self.d, p)))
    }

    pub fn act(&self, tau: &Complex) -> Result<Complex, AnalyticError> {
        let p = tau.prec();
        let num = tau
            .mul_real(&Self::ball(&self.a, p))
            .add(&Complex::from_real(Self::ball(&self.b, p)));
        num.div(&self.automorphy(tau))
    }

    pub fn entries_i64(&self) -> Option<[[i64; 2]; 2]> {
        Some([
            [self.a.to_i64()?, self.b.to_i64()?],
            [self.c.to_i64()?, self.d.to_i64()?],
        ])
    }
}

/// A point of the upper half plane with the matrix that produced it.
#[derive(Debug, Clone)]
pub struct TauPoint {
    pub re: ErrReal,
    pub im: ErrReal,
    pub reduced: bool,
    /// Maps the input tau to this one.
    pub unimodular: Unimodular,
}

impl TauPoint {
    pub fn as_complex(&self) -> Complex {
        Complex::new(self.re.clone(), self.im.clone())
    }
}

const MAX_STEPS: usize = 10_000;

/// Moves tau into |Re tau| <= 1/2, |tau| >= 1.
///
/// When |tau| = 1 cannot be decided within the radii the point is already
/// on the boundary arc and counts as reduced; either side gives the same
/// lattice up to the inversion.
pub fn reduce_tau(tau: &Complex) -> Result<TauPoint, AnalyticError> {
    if !tau.im.is_positive() {
        return Err(AnalyticError::BoundaryAmbiguity);
    }
    let p = tau.prec();
    let one = ErrReal::one(p);
    let half = one.mul_pow2(-1);
    let mut z = tau.clone();
    let mut g = Unimodular::identity();
    for _ in 0..MAX_STEPS {
        if z.re.err_f64() > 0.1 || z.im.err_f64() > 0.1 || !z.im.is_positive() {
            return Err(AnalyticError::BoundaryAmbiguity);
        }
        let k = z.re.round_mid();
        if !k.is_zero() {
            let t = Unimodular::translation(&-&k);
            z = Complex::new(z.re.sub(&ErrReal::from_bigint(&k, p)), z.im.clone());
            g = t.compose(&g);
        }
        if z.re.abs().certainly_gt(&half) {
            // |Re| > 1/2 after rounding the midpoint means a huge radius.
            return Err(AnalyticError::BoundaryAmbiguity);
        }
        let n = z.norm_sqr();
        if n.certainly_lt(&one) {
            let s = Unimodular::inversion();
            z = s.act(&z)?;
            g = s.compose(&g);
            continue;
        }
        return Ok(TauPoint {
            re: z.re,
            im: z.im,
            reduced: true,
            unimodular: g,
        });
    }
    Err(AnalyticError::BoundaryAmbiguity)
}

/// tau already in the fundamental domain, as a TauPoint with identity matrix.
pub fn tau_point(re: ErrReal, im: ErrReal) -> Result<TauPoint, AnalyticError> {
    let t = reduce_tau(&Complex::new(re, im))?;
    if t.unimodular != Unimodular::identity() {
        return Err(AnalyticError::BoundaryAmbiguity);
    }
    Ok(t)
}

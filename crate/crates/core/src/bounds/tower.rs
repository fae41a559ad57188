//! Signed magnitudes of the form exp(exp(...exp(top))) and their inverses.

use crate::analytic::ErrReal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

pub const TOWER_PREC: u32 = 192;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("magnitudes cannot be ordered within their radii")]
    IncomparableWithinRadius,
    #[error("value too large to evaluate at level 0")]
    TooLarge,
}

/// sign * M or sign / M with M = exp^level(top) >= 1.
///
/// After normalization top lies in [1, e) at every level. `exact` keeps the
/// rational value when it is small enough to hold.
#[derive(Debug, Clone)]
pub struct TowerMagnitude {
    pub sign: i8,
    pub level: u32,
    pub top: ErrReal,
    /// The value is sign / M rather than sign * M.
    pub reciprocal: bool,
    pub exact: Option<BigRational>,
}

fn e_const(prec: u32) -> ErrReal {
    ErrReal::one(prec).exp().expect("exp 1")
}

fn normalize(mut level: u32, mut top: ErrReal) -> (u32, ErrReal) {
    let e = e_const(top.prec()).mid_f64();
    loop {
        let t = top.mid_f64();
        if t >= e {
            top = top.log().expect("top >= e");
            level += 1;
        } else if level > 0 && t < 1.0 {
            top = top.exp().expect("small argument");
            level -= 1;
        } else {
            return (level, top);
        }
    }
}

impl TowerMagnitude {
    pub fn zero() -> TowerMagnitude {
        TowerMagnitude {
            sign: 0,
            level: 0,
            top: ErrReal::zero(TOWER_PREC),
            reciprocal: false,
            exact: Some(BigRational::zero()),
        }
    }

    /// Exact rational value.
    pub fn from_rational(q: &BigRational) -> TowerMagnitude {
        if q.is_zero() {
            return TowerMagnitude::zero();
        }
        let a = q.abs();
        let reciprocal = a < BigRational::one();
        let m = if reciprocal { a.recip() } else { a };
        let (level, top) = normalize(0, ErrReal::from_rational(&m, TOWER_PREC));
        TowerMagnitude {
            sign: if q.is_negative() { -1 } else { 1 },
            level,
            top,
            reciprocal,
            exact: Some(q.clone()),
        }
    }

    /// Magnitude exp^level(top) before normalization.
    pub fn from_tower(sign: i8, reciprocal: bool, level: u32, top: ErrReal) -> TowerMagnitude {
        let (level, top) = normalize(level, top);
        TowerMagnitude {
            sign,
            level,
            top,
            reciprocal,
            exact: None,
        }
    }

    /// A positive real ball, as a magnitude >= 1 or its inverse.
    pub fn from_real(x: &ErrReal) -> TowerMagnitude {
        if x.is_exact() && x.mid_f64() == 0.0 {
            return TowerMagnitude::zero();
        }
        let sign = if x.mid_f64() < 0.0 { -1 } else { 1 };
        let a = x.abs();
        let reciprocal = a.mid_f64() < 1.0;
        let m = if reciprocal { a.inv().expect("nonzero") } else { a };
        TowerMagnitude::from_tower(sign, reciprocal, 0, m)
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn neg(&self) -> TowerMagnitude {
        let mut t = self.clone();
        t.sign = -t.sign;
        t.exact = t.exact.map(|q| -q);
        t
    }

    /// 1 / self.
    pub fn recip(&self) -> TowerMagnitude {
        assert!(self.sign != 0, "reciprocal of zero");
        if let Some(q) = &self.exact {
            return TowerMagnitude::from_rational(&q.recip());
        }
        let mut t = self.clone();
        t.reciprocal = !t.reciprocal;
        t
    }

    /// log M, where the value is sign * M^(+-1).
    pub fn ln_magnitude(&self) -> Result<ErrReal, BoundsError> {
        if self.sign == 0 {
            return Err(BoundsError::TooLarge);
        }
        if self.level == 0 {
            return Ok(self.top.log().expect("top >= 1"));
        }
        let mut t = self.top.clone();
        for _ in 1..self.level {
            if t.mid_f64() > 1e6 {
                return Err(BoundsError::TooLarge);
            }
            t = t.exp().map_err(|_| BoundsError::TooLarge)?;
        }
        Ok(t)
    }

    /// log10 |value|.
    pub fn log10_abs(&self) -> Result<ErrReal, BoundsError> {
        let ln10 = ErrReal::from_i64(10, TOWER_PREC).log().expect("log 10");
        let l = self.ln_magnitude()?.div(&ln10).expect("nonzero");
        Ok(if self.reciprocal { l.neg() } else { l })
    }

    /// -log(self) for 0 < self < 1, as a magnitude.
    pub fn neg_log(&self) -> TowerMagnitude {
        assert!(self.sign > 0 && self.reciprocal, "-log of a value outside (0, 1)");
        if self.level == 0 {
            return TowerMagnitude::from_real(&self.top.log().expect("top >= 1"));
        }
        TowerMagnitude::from_tower(1, false, self.level - 1, self.top.clone())
    }

    /// self * k, positive k, multiplying the magnitude M by k (or dividing
    /// for reciprocals).
    pub fn scale(&self, k: &BigRational) -> TowerMagnitude {
        assert!(k.is_positive());
        if let Some(q) = &self.exact {
            return TowerMagnitude::from_rational(&(q * k));
        }
        if self.sign == 0 {
            return self.clone();
        }
        let f = if self.reciprocal { k.recip() } else { k.clone() };
        let log_f = ErrReal::from_rational(&f, TOWER_PREC).log().expect("positive");
        // M * f = exp^level(top'), computed at level 2 where log log M is held.
        let Some(ll) = at_level_two(self.level, &self.top) else {
            // log log M is beyond e^1e6, so log f moves the top by far less
            // than one unit in the last place.
            let mut t = self.clone();
            t.top = t.top.add_err(crate::analytic::Mag::pow2(-2 * TOWER_PREC as i64));
            return t;
        };
        let ll = add_to_log(&ll, &log_f);
        let lift_level = 2;
        TowerMagnitude::from_tower(self.sign, self.reciprocal, lift_level, ll)
    }
}

/// log log M for M = exp^level(top), unless it is too large to hold.
fn at_level_two(level: u32, top: &ErrReal) -> Option<ErrReal> {
    let mut l = level;
    let mut t = top.clone();
    while l < 2 {
        t = t.log().expect("top >= 1 after normalization");
        l += 1;
    }
    while l > 2 {
        if t.mid_f64() > 1e6 {
            return None;
        }
        t = t.exp().ok()?;
        l -= 1;
    }
    Some(t)
}

/// log(exp(ll) + delta) for a possibly enormous exp(ll).
fn add_to_log(ll: &ErrReal, delta: &ErrReal) -> ErrReal {
    if ll.mid_f64() < 40.0 {
        return ll.exp().expect("moderate").add(delta).log().expect("positive");
    }
    // log(exp(ll) + delta) = ll + log(1 + delta e^-ll), and the correction
    // is below |delta| e^-ll <= |delta| 2^-floor(ll log2 e).
    let (lo, le) = ll.lower();
    let lo = ErrReal::from_dyadic(lo, le, 64).mid_f64();
    let k = (lo * std::f64::consts::LOG2_E).floor() as i64;
    let bound = delta.abs_upper().mul_pow2(-k);
    ll.add_err(bound)
}

fn cmp_magnitudes(a_level: u32, a_top: &ErrReal, b_level: u32, b_top: &ErrReal) -> Result<Ordering, BoundsError> {
    if a_level > b_level {
        return cmp_magnitudes(b_level, b_top, a_level, a_top).map(Ordering::reverse);
    }
    let mut t = a_top.clone();
    for _ in a_level..b_level {
        if !t.is_positive() {
            if t.certainly_lt(&ErrReal::zero(t.prec())) || t.is_exact() {
                return Ok(Ordering::Less);
            }
            return Err(BoundsError::IncomparableWithinRadius);
        }
        t = t.log().expect("positive");
    }
    if t.mid_dyadic() == b_top.mid_dyadic() && t.rad() == b_top.rad() {
        return Ok(Ordering::Equal);
    }
    if t.certainly_lt(b_top) {
        Ok(Ordering::Less)
    } else if t.certainly_gt(b_top) {
        Ok(Ordering::Greater)
    } else {
        Err(BoundsError::IncomparableWithinRadius)
    }
}

/// Total order on values, exact when both sides are exact rationals and
/// otherwise decided by the tower tops within their radii. Two identical
/// representations compare equal.
pub fn tower_compare(a: &TowerMagnitude, b: &TowerMagnitude) -> Result<Ordering, BoundsError> {
    if a.sign != b.sign {
        return Ok(a.sign.cmp(&b.sign));
    }
    if a.sign == 0 {
        return Ok(Ordering::Equal);
    }
    if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
        return Ok(x.cmp(y));
    }
    // Order of |a| and |b|.
    let abs = match (a.reciprocal, b.reciprocal) {
        (false, true) => Ordering::Greater,
        (true, false) => Ordering::Less,
        (false, false) => cmp_magnitudes(a.level, &a.top, b.level, &b.top)?,
        (true, true) => cmp_magnitudes(b.level, &b.top, a.level, &a.top)?,
    };
    Ok(if a.sign > 0 { abs } else { abs.reverse() })
}

impl fmt::Display for TowerMagnitude {
    /// "+exp^2(1.0412...)" or "+exp^3(1.22...)^-1", 20 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { '-' } else { '+' };
        if self.sign == 0 {
            return write!(f, "+exp^0(0)");
        }
        write!(f, "{s}exp^{}({})", self.level, self.top.mid_to_sci(20))?;
        if self.reciprocal {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// Exact value of b^e when it has at most `max_bits` bits.
pub fn small_power(b: &BigInt, e: &BigInt, max_bits: u64) -> Option<BigInt> {
    let e64: u64 = e.try_into().ok()?;
    if e64.saturating_mul(b.bits()) > max_bits {
        return None;
    }
    Some(num_traits::pow(b.clone(), e64 as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn rational_round_trip_order() {
        let a = TowerMagnitude::from_rational(&rat(1, 17));
        let b = TowerMagnitude::from_rational(&rat(1, 12));
        assert_eq!(tower_compare(&a, &b).unwrap(), Ordering::Less);
        assert!(a.reciprocal && a.level >= 1);
        let z = TowerMagnitude::zero();
        assert_eq!(tower_compare(&z, &a).unwrap(), Ordering::Less);
        assert_eq!(tower_compare(&a.neg(), &z).unwrap(), Ordering::Less);
    }

    #[test]
    fn level_zero_five_equals_level_one_log_five() {
        let p = TOWER_PREC;
        let five = TowerMagnitude::from_real(&ErrReal::from_i64(5, p));
        let lifted = TowerMagnitude::from_tower(1, false, 1, ErrReal::from_i64(5, p).log().unwrap());
        assert_eq!(five.level, 1);
        assert_eq!(tower_compare(&five, &lifted).unwrap(), Ordering::Equal);
    }

    #[test]
    fn normalized_tops() {
        let big = TowerMagnitude::from_tower(1, false, 2, ErrReal::from_i64(1000, TOWER_PREC));
        let e = std::f64::consts::E;
        assert!(big.top.mid_f64() >= 1.0 && big.top.mid_f64() < e);
        assert_eq!(big.level, 4);
        let l = big.ln_magnitude().unwrap();
        assert!((l.log().unwrap().mid_f64() - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn scale_moves_the_right_way() {
        let tiny = TowerMagnitude::from_tower(1, true, 2, ErrReal::from_i64(3, TOWER_PREC));
        assert_eq!(tower_compare(&tiny.scale(&rat(1, 17)), &tiny).unwrap(), Ordering::Less);
        assert_eq!(
            tower_compare(&tiny.scale(&rat(17, 1)), &tiny).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn scale_far_up_the_tower() {
        let big = TowerMagnitude::from_tower(1, false, 2, ErrReal::from_i64(100, TOWER_PREC));
        let s = big.scale(&rat(17, 1));
        assert_eq!(s.level, big.level);
        assert!(s.top.overlaps(&big.top));
        assert!(s.top.err_f64() < 1e-40);
    }
}

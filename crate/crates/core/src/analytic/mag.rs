//! Upward-rounded magnitudes used as error radii.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

const MAG_BITS: u32 = 32;
const MAG_LO: u64 = 1 << (MAG_BITS - 1);
const MAG_HI: u64 = 1 << MAG_BITS;

/// Nonnegative number `m * 2^e` with a 32-bit mantissa. Every operation
/// rounds away from zero, so a `Mag` computed from upper bounds is itself
/// an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mag {
    m: u64,
    e: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0, e: 0 };

    fn norm_up(mut m: u128, mut e: i64) -> Mag {
        if m == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - m.leading_zeros();
        if bits > MAG_BITS {
            let sh = bits - MAG_BITS;
            let lost = m & ((1u128 << sh) - 1);
            m >>= sh;
            e += sh as i64;
            if lost != 0 {
                m += 1;
                if m == MAG_HI as u128 {
                    m >>= 1;
                    e += 1;
                }
            }
        } else if bits < MAG_BITS {
            let sh = MAG_BITS - bits;
            m <<= sh;
            e -= sh as i64;
        }
        Mag { m: m as u64, e }
    }

    fn norm_down(mut m: u128, mut e: i64) -> Mag {
        if m == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - m.leading_zeros();
        if bits > MAG_BITS {
            let sh = bits - MAG_BITS;
            m >>= sh;
            e += sh as i64;
        } else if bits < MAG_BITS {
            let sh = MAG_BITS - bits;
            m <<= sh;
            e -= sh as i64;
        }
        Mag { m: m as u64, e }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0
    }

    /// 2^e.
    pub fn pow2(e: i64) -> Mag {
        Mag {
            m: MAG_LO,
            e: e - (MAG_BITS as i64 - 1),
        }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::norm_up(v as u128, 0)
    }

    /// Smallest Mag >= |v|. Panics on non-finite input.
    pub fn from_f64(v: f64) -> Mag {
        assert!(v.is_finite(), "non-finite magnitude");
        let v = v.abs();
        if v == 0.0 {
            return Mag::ZERO;
        }
        let (m, e) = f64_parts(v);
        Mag::norm_up(m as u128, e)
    }

    /// Upper bound for |man| * 2^exp.
    pub fn from_dyadic_up(man: &BigInt, exp: i64) -> Mag {
        if man.is_zero() {
            return Mag::ZERO;
        }
        let bits = man.bits();
        if bits <= 64 {
            return Mag::norm_up(man.abs().to_u64().unwrap() as u128, exp);
        }
        let sh = bits - 64;
        let top = (man.abs() >> sh).to_u64().unwrap() as u128 + 1;
        Mag::norm_up(top, exp + sh as i64)
    }

    /// Lower bound for |man| * 2^exp.
    pub fn from_dyadic_down(man: &BigInt, exp: i64) -> Mag {
        if man.is_zero() {
            return Mag::ZERO;
        }
        let bits = man.bits();
        if bits <= 64 {
            return Mag::norm_down(man.abs().to_u64().unwrap() as u128, exp);
        }
        let sh = bits - 64;
        let top = (man.abs() >> sh).to_u64().unwrap() as u128;
        Mag::norm_down(top, exp + sh as i64)
    }

    /// Exact dyadic value as (mantissa, exponent).
    pub fn to_dyadic(&self) -> (BigInt, i64) {
        (BigInt::from(self.m), self.e)
    }

    /// Position of the leading bit: 2^(log2_ceil-1) <= self < 2^log2_ceil.
    pub fn log2_ceil(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.e + MAG_BITS as i64
        }
    }

    pub fn add(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = hi.e - lo.e;
        if d > 90 {
            return Mag::norm_up(hi.m as u128 + 1, hi.e);
        }
        let s = ((hi.m as u128) << d) + lo.m as u128;
        Mag::norm_up(s, lo.e)
    }

    pub fn mul(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm_up(self.m as u128 * o.m as u128, self.e + o.e)
    }

    pub fn mul_u64(&self, k: u64) -> Mag {
        self.mul(&Mag::from_u64(k))
    }

    pub fn mul_pow2(&self, k: i64) -> Mag {
        if self.is_zero() {
            return *self;
        }
        Mag {
            m: self.m,
            e: self.e + k,
        }
    }

    /// Upper bound for self / o, where `o` must be a lower bound of the
    /// true divisor. Returns `None` if `o` is zero.
    pub fn div(&self, o: &Mag) -> Option<Mag> {
        if o.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Mag::ZERO);
        }
        let num = (self.m as u128) << 64;
        let q = num / o.m as u128 + 1;
        Some(Mag::norm_up(q, self.e - o.e - 64))
    }

    pub fn max(&self, o: &Mag) -> Mag {
        if self.cmp(o) == Ordering::Less {
            *o
        } else {
            *self
        }
    }

    /// Nearest f64 at or above the value (saturating to infinity).
    pub fn to_f64_up(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.e + (MAG_BITS as i64) < -1000 {
            return f64::MIN_POSITIVE;
        }
        if self.e > 1000 {
            return f64::INFINITY;
        }
        (self.m as f64) * 2f64.powi(self.e as i32)
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        // Normalized mantissas share a bit length, so exponents decide first.
        self.e.cmp(&o.e).then(self.m.cmp(&o.m))
    }
}

/// Decompose a positive finite f64 into an integer mantissa and exponent.
pub(crate) fn f64_parts(v: f64) -> (u64, i64) {
    let bits = v.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_upward() {
        let a = Mag::from_u64((1u64 << 40) + 1);
        assert!(a.to_f64_up() >= ((1u64 << 40) + 1) as f64);
        let third = Mag::from_u64(1).div(&Mag::from_u64(3)).unwrap();
        assert!(third.to_f64_up() >= 1.0 / 3.0);
        assert!(third.mul_u64(3).to_f64_up() >= 1.0);
    }

    #[test]
    fn ordering_and_add() {
        let a = Mag::pow2(-10);
        let b = Mag::pow2(-200);
        assert!(b < a);
        let s = a.add(&b);
        assert!(s > a);
        assert_eq!(Mag::ZERO.add(&a), a);
        assert!(Mag::from_f64(0.1).to_f64_up() >= 0.1);
    }

    #[test]
    fn dyadic_bounds_bracket() {
        let n = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let up = Mag::from_dyadic_up(&n, -50).to_f64_up();
        let down = Mag::from_dyadic_down(&n, -50).to_f64_up();
        let exact = 123456789012345678901234567890f64 * 2f64.powi(-50);
        assert!(down <= exact * (1.0 + 1e-15));
        assert!(up >= exact * (1.0 - 1e-15));
        assert!(down <= up);
    }
}

//! Ball arithmetic: a dyadic midpoint with an upward-rounded radius.
//!
//! Every operation returns a ball that contains the exact result for all
//! inputs inside the operand balls. Midpoints are rounded to the working
//! precision of the operands (the larger of the two) and the rounding
//! error is folded into the radius.

use super::mag::{f64_parts, Mag};
use super::AnalyticError;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// Arbitrary-precision real with a guaranteed absolute error radius.
#[derive(Clone)]
pub struct ErrReal {
    man: BigInt,
    exp: i64,
    rad: Mag,
    prec: u32,
}

type Res = Result<ErrReal, AnalyticError>;

fn dy_align(am: &BigInt, ae: i64, bm: &BigInt, be: i64) -> (BigInt, BigInt, i64) {
    if ae >= be {
        (am << (ae - be) as usize, bm.clone(), be)
    } else {
        (am.clone(), bm << (be - ae) as usize, ae)
    }
}

fn dy_add(am: &BigInt, ae: i64, bm: &BigInt, be: i64) -> (BigInt, i64) {
    if am.is_zero() {
        return (bm.clone(), be);
    }
    if bm.is_zero() {
        return (am.clone(), ae);
    }
    let (a, b, e) = dy_align(am, ae, bm, be);
    (a + b, e)
}

fn dy_cmp(am: &BigInt, ae: i64, bm: &BigInt, be: i64) -> Ordering {
    let (m, _) = dy_add(am, ae, &-bm, be);
    m.sign().cmp(&Sign::NoSign)
}

fn ldexp(x: f64, e: i64) -> f64 {
    let mut v = x;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

fn bigint_to_f64_parts(m: &BigInt) -> (f64, i64) {
    let bits = m.bits();
    if bits <= 1000 {
        (m.to_f64().unwrap(), 0)
    } else {
        let sh = bits - 64;
        ((m >> sh).to_f64().unwrap(), sh as i64)
    }
}

impl ErrReal {
    fn make(man: BigInt, exp: i64, rad: Mag, prec: u32) -> ErrReal {
        let bits = man.bits();
        if bits > prec as u64 {
            let sh = bits - prec as u64;
            let man = man >> sh;
            let exp = exp + sh as i64;
            let rad = rad.add(&Mag::pow2(exp));
            ErrReal { man, exp, rad, prec }
        } else {
            ErrReal { man, exp, rad, prec }
        }
    }

    pub fn zero(prec: u32) -> ErrReal {
        ErrReal {
            man: BigInt::zero(),
            exp: 0,
            rad: Mag::ZERO,
            prec,
        }
    }

    pub fn one(prec: u32) -> ErrReal {
        ErrReal::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> ErrReal {
        ErrReal::make(BigInt::from(v), 0, Mag::ZERO, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> ErrReal {
        ErrReal::make(v.clone(), 0, Mag::ZERO, prec)
    }

    /// man * 2^exp, rounded to `prec` bits.
    pub fn from_dyadic(man: BigInt, exp: i64, prec: u32) -> ErrReal {
        ErrReal::make(man, exp, Mag::ZERO, prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> ErrReal {
        assert!(v.is_finite());
        if v == 0.0 {
            return ErrReal::zero(prec);
        }
        let (m, e) = f64_parts(v.abs());
        let m = if v < 0.0 { -BigInt::from(m) } else { BigInt::from(m) };
        ErrReal::make(m, e, Mag::ZERO, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> ErrReal {
        let n = ErrReal::from_bigint(q.numer(), prec.max(q.numer().bits() as u32 + 1));
        if q.denom().is_one() {
            return n.with_prec(prec);
        }
        let d = ErrReal::from_bigint(q.denom(), prec.max(q.denom().bits() as u32 + 1));
        n.with_prec(prec).div(&d).expect("denominator of a rational is nonzero")
    }

    /// Same value with a different working precision; rounds if lowering.
    pub fn with_prec(&self, prec: u32) -> ErrReal {
        ErrReal::make(self.man.clone(), self.exp, self.rad, prec)
    }

    /// Widen the radius by `e`.
    pub fn add_err(&self, e: Mag) -> ErrReal {
        let mut r = self.clone();
        r.rad = r.rad.add(&e);
        r
    }

    /// Ball with the given midpoint and radius.
    pub fn with_rad(&self, rad: Mag) -> ErrReal {
        let mut r = self.clone();
        r.rad = rad;
        r
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn mid(&self) -> ErrReal {
        self.with_rad(Mag::ZERO)
    }

    pub fn mid_dyadic(&self) -> (BigInt, i64) {
        (self.man.clone(), self.exp)
    }

    pub fn mid_f64(&self) -> f64 {
        if self.man.is_zero() {
            return 0.0;
        }
        let (f, sh) = bigint_to_f64_parts(&self.man);
        ldexp(f, self.exp + sh)
    }

    /// Upper bound for the radius as f64.
    pub fn err_f64(&self) -> f64 {
        self.rad.to_f64_up()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Upper bound for |x| over the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_dyadic_up(&self.man, self.exp).add(&self.rad)
    }

    /// Lower bound for |x| over the ball (zero if the ball straddles 0).
    pub fn abs_lower(&self) -> Mag {
        let (m, e) = self.rad.to_dyadic();
        let (d, de) = dy_add(&self.man.abs(), self.exp, &-m, e);
        if d.sign() == Sign::Plus {
            Mag::from_dyadic_down(&d, de)
        } else {
            Mag::ZERO
        }
    }

    /// Exact lower endpoint as a dyadic.
    pub fn lower(&self) -> (BigInt, i64) {
        let (m, e) = self.rad.to_dyadic();
        dy_add(&self.man, self.exp, &-m, e)
    }

    /// Exact upper endpoint as a dyadic.
    pub fn upper(&self) -> (BigInt, i64) {
        let (m, e) = self.rad.to_dyadic();
        dy_add(&self.man, self.exp, &m, e)
    }

    pub fn is_positive(&self) -> bool {
        let (m, _) = self.lower();
        m.sign() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        let (m, _) = self.upper();
        m.sign() == Sign::Minus
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    /// True if every point of self is below every point of `o`.
    pub fn certainly_lt(&self, o: &ErrReal) -> bool {
        let (am, ae) = self.upper();
        let (bm, be) = o.lower();
        dy_cmp(&am, ae, &bm, be) == Ordering::Less
    }

    pub fn certainly_gt(&self, o: &ErrReal) -> bool {
        o.certainly_lt(self)
    }

    pub fn overlaps(&self, o: &ErrReal) -> bool {
        !self.certainly_lt(o) && !o.certainly_lt(self)
    }

    /// True if the ball `o` lies inside self.
    pub fn contains(&self, o: &ErrReal) -> bool {
        let (al, ale) = self.lower();
        let (au, aue) = self.upper();
        let (bl, ble) = o.lower();
        let (bu, bue) = o.upper();
        dy_cmp(&al, ale, &bl, ble) != Ordering::Greater && dy_cmp(&bu, bue, &au, aue) != Ordering::Greater
    }

    /// True if the exact rational `q` lies in the ball.
    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let scale = |m: &BigInt, e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(m << e as usize)
            } else {
                BigRational::new(m.clone(), BigInt::one() << (-e) as usize)
            }
        };
        let (lm, le) = self.lower();
        let (um, ue) = self.upper();
        scale(&lm, le) <= *q && *q <= scale(&um, ue)
    }

    /// Ball spanning [lo, hi] given as exact dyadics.
    pub fn from_endpoints(lo: (BigInt, i64), hi: (BigInt, i64), prec: u32) -> ErrReal {
        let (s, e) = dy_add(&lo.0, lo.1, &hi.0, hi.1);
        let (d, de) = dy_add(&hi.0, hi.1, &-lo.0, lo.1);
        let rad = Mag::from_dyadic_up(&d, de - 1);
        ErrReal::make(s, e - 1, rad, prec)
    }

    /// Smallest ball containing both.
    pub fn hull(&self, o: &ErrReal) -> ErrReal {
        let (al, ale) = self.lower();
        let (bl, ble) = o.lower();
        let (au, aue) = self.upper();
        let (bu, bue) = o.upper();
        let lo = if dy_cmp(&al, ale, &bl, ble) == Ordering::Less {
            (al, ale)
        } else {
            (bl, ble)
        };
        let hi = if dy_cmp(&au, aue, &bu, bue) == Ordering::Greater {
            (au, aue)
        } else {
            (bu, bue)
        };
        ErrReal::from_endpoints(lo, hi, self.prec.max(o.prec))
    }

    /// Ball containing max(x, y) for x in self, y in o.
    pub fn max(&self, o: &ErrReal) -> ErrReal {
        let (al, ale) = self.lower();
        let (bl, ble) = o.lower();
        let (au, aue) = self.upper();
        let (bu, bue) = o.upper();
        let lo = if dy_cmp(&al, ale, &bl, ble) == Ordering::Greater {
            (al, ale)
        } else {
            (bl, ble)
        };
        let hi = if dy_cmp(&au, aue, &bu, bue) == Ordering::Greater {
            (au, aue)
        } else {
            (bu, bue)
        };
        ErrReal::from_endpoints(lo, hi, self.prec.max(o.prec))
    }

    pub fn min(&self, o: &ErrReal) -> ErrReal {
        self.neg().max(&o.neg()).neg()
    }

    pub fn neg(&self) -> ErrReal {
        ErrReal {
            man: -&self.man,
            exp: self.exp,
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> ErrReal {
        if self.man.sign() == Sign::Minus {
            self.neg()
        } else {
            self.clone()
        }
    }

    fn top_bit(&self) -> i64 {
        self.exp + self.man.bits() as i64
    }

    pub fn add(&self, o: &ErrReal) -> ErrReal {
        let prec = self.prec.max(o.prec);
        if o.man.is_zero() {
            return ErrReal::make(self.man.clone(), self.exp, self.rad.add(&o.rad), prec);
        }
        if self.man.is_zero() {
            return ErrReal::make(o.man.clone(), o.exp, self.rad.add(&o.rad), prec);
        }
        let (ta, tb) = (self.top_bit(), o.top_bit());
        let gap = prec as i64 + 8;
        if tb < ta - gap {
            let r = self.rad.add(&o.abs_upper());
            return ErrReal::make(self.man.clone(), self.exp, r, prec);
        }
        if ta < tb - gap {
            let r = o.rad.add(&self.abs_upper());
            return ErrReal::make(o.man.clone(), o.exp, r, prec);
        }
        let (m, e) = dy_add(&self.man, self.exp, &o.man, o.exp);
        ErrReal::make(m, e, self.rad.add(&o.rad), prec)
    }

    pub fn sub(&self, o: &ErrReal) -> ErrReal {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ErrReal) -> ErrReal {
        let prec = self.prec.max(o.prec);
        let man = &self.man * &o.man;
        let exp = self.exp + o.exp;
        let mut rad = Mag::ZERO;
        if !o.rad.is_zero() {
            rad = rad.add(&Mag::from_dyadic_up(&self.man, self.exp).mul(&o.rad));
        }
        if !self.rad.is_zero() {
            rad = rad.add(&Mag::from_dyadic_up(&o.man, o.exp).mul(&self.rad));
            rad = rad.add(&self.rad.mul(&o.rad));
        }
        ErrReal::make(man, exp, rad, prec)
    }

    pub fn sqr(&self) -> ErrReal {
        self.mul(self)
    }

    pub fn mul_i64(&self, k: i64) -> ErrReal {
        let man = &self.man * k;
        let rad = self.rad.mul_u64(k.unsigned_abs());
        ErrReal::make(man, self.exp, rad, self.prec)
    }

    pub fn mul_bigint(&self, k: &BigInt) -> ErrReal {
        let man = &self.man * k;
        let rad = self.rad.mul(&Mag::from_dyadic_up(k, 0));
        ErrReal::make(man, self.exp, rad, self.prec)
    }

    pub fn mul_pow2(&self, k: i64) -> ErrReal {
        ErrReal {
            man: self.man.clone(),
            exp: self.exp + k,
            rad: self.rad.mul_pow2(k),
            prec: self.prec,
        }
    }

    /// Division by a nonzero machine integer.
    pub fn div_i64(&self, k: i64) -> ErrReal {
        assert!(k != 0, "division by zero");
        let pad = (self.prec as i64 + 2 + 64 - self.man.bits() as i64).max(0) as usize;
        let num = &self.man << pad;
        let q = num.div_floor(&BigInt::from(k));
        let exp = self.exp - pad as i64;
        let rad = self
            .rad
            .div(&Mag::from_u64(k.unsigned_abs()))
            .unwrap()
            .add(&Mag::pow2(exp));
        ErrReal::make(q, exp, rad, self.prec)
    }

    pub fn div(&self, o: &ErrReal) -> Res {
        let prec = self.prec.max(o.prec);
        let (bm, be) = o.rad.to_dyadic();
        let (dm, de) = dy_add(&o.man.abs(), o.exp, &-bm, be);
        if dm.sign() != Sign::Plus {
            return Err(AnalyticError::IntervalContainsZero);
        }
        let denom_lower = Mag::from_dyadic_down(&dm, de);
        if denom_lower.is_zero() {
            return Err(AnalyticError::IntervalContainsZero);
        }
        let s = (prec as i64 + 2 + o.man.bits() as i64 - self.man.bits() as i64).max(0) as usize;
        let num = &self.man << s;
        let q = &num / &o.man;
        let qexp = self.exp - o.exp - s as i64;
        let mut rad = if self.man.is_zero() { Mag::ZERO } else { Mag::pow2(qexp) };
        if !self.rad.is_zero() || !o.rad.is_zero() {
            let qabs = Mag::from_dyadic_up(&q, qexp).add(&Mag::pow2(qexp));
            let numer = self.rad.add(&qabs.mul(&o.rad));
            rad = rad.add(&numer.div(&denom_lower).unwrap());
        }
        Ok(ErrReal::make(q, qexp, rad, prec))
    }

    pub fn inv(&self) -> Res {
        ErrReal::one(self.prec).div(self)
    }

    pub fn sqrt(&self) -> Res {
        if self.man.is_zero() && self.rad.is_zero() {
            return Ok(self.clone());
        }
        if !self.is_positive() {
            return Err(AnalyticError::IntervalContainsZero);
        }
        let prec = self.prec;
        let want = 2 * prec as i64 + 4;
        let mut k = (want - self.man.bits() as i64).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let n = &self.man << k as usize;
        let e2 = (self.exp - k) / 2;
        let r = n.sqrt();
        let mut rad = Mag::pow2(e2);
        if !self.rad.is_zero() {
            let root_lower = Mag::from_dyadic_down(&r, e2);
            rad = rad.add(&self.rad.div(&root_lower).ok_or(AnalyticError::IntervalContainsZero)?);
        }
        Ok(ErrReal::make(r, e2, rad, prec))
    }

    /// Nearest integer to the midpoint.
    pub fn round_mid(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.man << self.exp as usize;
        }
        let sh = (-self.exp) as usize;
        let half = BigInt::one() << (sh - 1);
        (&self.man + half) >> sh
    }

    /// Integer lower bound of the ball.
    pub fn floor_lower(&self) -> BigInt {
        let (m, e) = self.lower();
        if e >= 0 {
            m << e as usize
        } else {
            m >> (-e) as usize
        }
    }

    pub fn pow_u32(&self, n: u32) -> ErrReal {
        let mut acc = ErrReal::one(self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Decimal rendering of the midpoint with `digits` significant digits,
    /// rounded to nearest.
    pub fn mid_to_sci(&self, digits: usize) -> String {
        dyadic_to_sci(&self.man, self.exp, digits, Rounding::Nearest)
    }

    /// Decimal rendering of the radius, rounded up to `digits` digits.
    pub fn err_to_sci(&self, digits: usize) -> String {
        let (m, e) = self.rad.to_dyadic();
        dyadic_to_sci(&m, e, digits, Rounding::Up)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Rounding {
    Nearest,
    Up,
}

fn dyadic_to_sci(man: &BigInt, exp: i64, digits: usize, mode: Rounding) -> String {
    if man.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = man.sign() == Sign::Minus;
    let m = man.abs();
    let log10 = (m.bits() as f64 - 1.0 + exp as f64) * std::f64::consts::LOG10_2;
    let mut k = log10.floor() as i64;
    let ten = BigInt::from(10);
    let lo_bound = num_traits::pow(ten.clone(), digits - 1);
    let hi_bound = &lo_bound * &ten;
    loop {
        let j = digits as i64 - 1 - k;
        let mut num = m.clone();
        let mut den = BigInt::one();
        if j >= 0 {
            num *= num_traits::pow(ten.clone(), j as usize);
        } else {
            den *= num_traits::pow(ten.clone(), (-j) as usize);
        }
        if exp >= 0 {
            num <<= exp as usize;
        } else {
            den <<= (-exp) as usize;
        }
        let (q, r) = num.div_rem(&den);
        let q = match mode {
            Rounding::Up => {
                if r.is_zero() {
                    q
                } else {
                    q + 1
                }
            }
            Rounding::Nearest => {
                if &r * 2 >= den {
                    q + 1
                } else {
                    q
                }
            }
        };
        if q >= hi_bound {
            if q == hi_bound {
                // Rounded into the next decade.
                k += 1;
                let s = format!("1{}", "0".repeat(digits - 1));
                return render(neg, &s, k);
            }
            k += 1;
            continue;
        }
        if q < lo_bound {
            k -= 1;
            continue;
        }
        return render(neg, &q.to_string(), k);
    }
}

fn render(neg: bool, digits: &str, k: i64) -> String {
    let sign = if neg { "-" } else { "" };
    let (head, tail) = digits.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{k}")
    } else {
        format!("{sign}{head}.{tail}e{k}")
    }
}

impl fmt::Debug for ErrReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} +/- {} [{} bits]",
            self.mid_to_sci(20),
            self.err_to_sci(3),
            self.prec
        )
    }
}

impl fmt::Display for ErrReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +/- {}", self.mid_to_sci(20), self.err_to_sci(3))
    }
}

// ---------------------------------------------------------------------
// Elementary functions. Each is evaluated at the exact midpoint with
// guard bits, truncation tails are added explicitly, and the input
// radius is propagated with a Lipschitz-type bound.
// ---------------------------------------------------------------------

thread_local! {
    static PI_CACHE: RefCell<HashMap<u32, ErrReal>> = RefCell::new(HashMap::new());
    static LN2_CACHE: RefCell<HashMap<u32, ErrReal>> = RefCell::new(HashMap::new());
}

/// Largest |x| accepted by exp and sin/cos.
const MAX_ARG_BITS: i64 = 40;

fn atan_inv(n: i64, w: u32) -> ErrReal {
    let p = ErrReal::one(w).div_i64(n);
    let p2 = p.sqr();
    let mut term = p.clone();
    let mut sum = p;
    let eps = Mag::pow2(-(w as i64) - 4);
    let mut k: i64 = 1;
    loop {
        term = term.mul(&p2);
        let t = term.div_i64(2 * k + 1);
        if k % 2 == 1 {
            sum = sum.sub(&t);
        } else {
            sum = sum.add(&t);
        }
        if t.abs_upper() < eps {
            // Alternating with decreasing terms: tail below the last term.
            return sum.add_err(t.abs_upper());
        }
        k += 1;
    }
}

fn atanh_series(z: &ErrReal, w: u32) -> ErrReal {
    let z2 = z.sqr();
    let mut term = z.clone();
    let mut sum = z.clone();
    let eps = Mag::pow2(-(w as i64) - 4);
    let mut k: i64 = 1;
    loop {
        term = term.mul(&z2);
        let t = term.div_i64(2 * k + 1);
        sum = sum.add(&t);
        if term.abs_upper() < eps {
            // |z| <= 1/3: remaining terms sum to at most |term| * z^2/(1-z^2).
            return sum.add_err(term.abs_upper());
        }
        k += 1;
    }
}

impl ErrReal {
    /// pi to `prec` bits (radius below 2^-prec).
    pub fn pi(prec: u32) -> ErrReal {
        if let Some(v) = PI_CACHE.with(|c| c.borrow().get(&prec).cloned()) {
            return v;
        }
        let w = prec + 16;
        let v = atan_inv(5, w)
            .mul_i64(16)
            .sub(&atan_inv(239, w).mul_i64(4))
            .with_prec(prec);
        PI_CACHE.with(|c| c.borrow_mut().insert(prec, v.clone()));
        v
    }

    /// log 2 to `prec` bits.
    pub fn ln2(prec: u32) -> ErrReal {
        if let Some(v) = LN2_CACHE.with(|c| c.borrow().get(&prec).cloned()) {
            return v;
        }
        let w = prec + 16;
        let third = ErrReal::one(w).div_i64(3);
        let v = atanh_series(&third, w).mul_pow2(1).with_prec(prec);
        LN2_CACHE.with(|c| c.borrow_mut().insert(prec, v.clone()));
        v
    }

    pub fn exp(&self) -> Res {
        let r = self.rad;
        if r > Mag::pow2(-1) {
            return Err(AnalyticError::PrecisionExhausted { bits: self.prec });
        }
        let v = exp_point(&self.mid())?;
        if r.is_zero() {
            return Ok(v);
        }
        // |e^(x0+d) - e^x0| <= e^x0 * r * (1 + 2r) for r <= 1/2.
        let grow = r.mul(&Mag::from_u64(1).add(&r.mul_u64(2)));
        let e = v.abs_upper().mul(&grow);
        Ok(v.add_err(e))
    }

    pub fn log(&self) -> Res {
        if !self.is_positive() {
            return Err(AnalyticError::IntervalContainsZero);
        }
        let v = log_point(&self.mid());
        if self.rad.is_zero() {
            return Ok(v);
        }
        // |log x - log x0| <= r / (x0 - r).
        let lower = self.abs_lower();
        let e = self.rad.div(&lower).ok_or(AnalyticError::IntervalContainsZero)?;
        Ok(v.add_err(e))
    }

    /// (sin x, cos x).
    pub fn sin_cos(&self) -> Result<(ErrReal, ErrReal), AnalyticError> {
        let (s, c) = sin_cos_point(&self.mid())?;
        Ok((s.add_err(self.rad), c.add_err(self.rad)))
    }
}

fn exp_point(x: &ErrReal) -> Res {
    let prec = x.prec;
    if x.man.is_zero() {
        return Ok(ErrReal::one(prec));
    }
    let top = x.top_bit();
    if top > MAX_ARG_BITS {
        return Err(AnalyticError::PrecisionExhausted { bits: prec });
    }
    let s = (top + 10).max(0);
    let w = prec + s as u32 + 12;
    let y = x.with_prec(w).mul_pow2(-s);
    let mut sum = ErrReal::one(w);
    let mut term = ErrReal::one(w);
    let eps = Mag::pow2(-(w as i64) - 4);
    let mut k = 1;
    loop {
        term = term.mul(&y).div_i64(k);
        sum = sum.add(&term);
        if term.abs_upper() < eps {
            // |y| < 2^-10 so the tail is below |term|.
            sum = sum.add_err(term.abs_upper());
            break;
        }
        k += 1;
    }
    for _ in 0..s {
        sum = sum.sqr();
    }
    Ok(sum.with_prec(prec))
}

fn log_point(x: &ErrReal) -> ErrReal {
    let prec = x.prec;
    let bits = x.man.bits() as i64;
    let mut e2 = x.exp + bits;
    // f = man / 2^bits lies in [1/2, 1).
    let (lead, _) = bigint_to_f64_parts(&(&x.man >> (bits - 53).max(0) as usize));
    let frac = lead / 2f64.powi(bits.min(53) as i32);
    let mut fexp = -bits;
    if frac < std::f64::consts::FRAC_1_SQRT_2 {
        fexp += 1;
        e2 -= 1;
    }
    let ebits = 64 - e2.unsigned_abs().leading_zeros();
    let w = prec + 16 + ebits;
    let f = ErrReal::from_dyadic(x.man.clone(), fexp, w);
    let one = ErrReal::one(w);
    let z = f.sub(&one).div(&f.add(&one)).expect("f + 1 > 0");
    let mut v = atanh_series(&z, w).mul_pow2(1);
    if e2 != 0 {
        v = v.add(&ErrReal::ln2(w).mul_i64(e2));
    }
    v.with_prec(prec)
}

fn sin_cos_point(x: &ErrReal) -> Result<(ErrReal, ErrReal), AnalyticError> {
    let prec = x.prec;
    if x.man.is_zero() {
        return Ok((ErrReal::zero(prec), ErrReal::one(prec)));
    }
    let top = x.top_bit();
    if top > MAX_ARG_BITS {
        return Err(AnalyticError::PrecisionExhausted { bits: prec });
    }
    let s = (top + 8).max(0);
    let w = prec + 2 * s as u32 + 12;
    let y = x.with_prec(w).mul_pow2(-s);
    let mut sin = y.clone();
    let mut cos = ErrReal::one(w);
    let mut term = y.clone();
    let eps = Mag::pow2(-(w as i64) - 4);
    let mut k: i64 = 2;
    loop {
        term = term.mul(&y).div_i64(k);
        match k % 4 {
            0 => cos = cos.add(&term),
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            _ => sin = sin.sub(&term),
        }
        if term.abs_upper() < eps {
            let t = term.abs_upper();
            sin = sin.add_err(t);
            cos = cos.add_err(t);
            break;
        }
        k += 1;
    }
    let one = ErrReal::one(w);
    for _ in 0..s {
        let s2 = sin.mul(&cos).mul_pow2(1);
        cos = one.sub(&sin.sqr().mul_pow2(1));
        sin = s2;
    }
    Ok((sin.with_prec(prec), cos.with_prec(prec)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn close(a: &ErrReal, v: f64, tol: f64) -> bool {
        (a.mid_f64() - v).abs() <= tol
    }

    #[test]
    fn basic_ops() {
        let a = ErrReal::from_i64(7, 128);
        let b = ErrReal::from_i64(3, 128);
        let q = a.div(&b).unwrap();
        assert!(q.contains_rational(&rat(7, 3)));
        assert!(q.err_f64() < 1e-35);
        let s = q.mul(&b);
        assert!(s.contains_rational(&rat(7, 1)));
        let r = ErrReal::from_i64(2, 200).sqrt().unwrap();
        assert!(close(&r, std::f64::consts::SQRT_2, 1e-15));
        assert!(r.sqr().contains_rational(&rat(2, 1)));
    }

    #[test]
    fn division_by_ball_containing_zero_fails() {
        let z = ErrReal::from_f64(1e-3, 64).add_err(Mag::from_f64(1e-2));
        assert_eq!(
            ErrReal::one(64).div(&z).unwrap_err(),
            AnalyticError::IntervalContainsZero
        );
        assert!(z.log().is_err());
    }

    #[test]
    fn constants() {
        let p = ErrReal::pi(256);
        assert!(close(&p, std::f64::consts::PI, 1e-15));
        assert!(p.rad() <= Mag::pow2(-250));
        let l = ErrReal::ln2(256);
        assert!(close(&l, std::f64::consts::LN_2, 1e-15));
        assert!(l.rad() <= Mag::pow2(-250));
    }

    #[test]
    fn exp_log_values() {
        let e = ErrReal::one(128).exp().unwrap();
        assert!(close(&e, std::f64::consts::E, 1e-15));
        let x = ErrReal::from_f64(-63.5, 128).exp().unwrap();
        assert!((x.mid_f64() / (-63.5f64).exp() - 1.0).abs() < 1e-14);
        let l = ErrReal::from_i64(37, 128).log().unwrap();
        assert!(close(&l, 37f64.ln(), 1e-14));
        let l = ErrReal::from_f64(1e-30, 128).log().unwrap();
        assert!(close(&l, (1e-30f64).ln(), 1e-12));
        let (s, c) = ErrReal::from_f64(2.5, 128).sin_cos().unwrap();
        assert!(close(&s, 2.5f64.sin(), 1e-15));
        assert!(close(&c, 2.5f64.cos(), 1e-15));
    }

    #[test]
    fn sci_rendering() {
        let v = ErrReal::from_i64(-1234, 64);
        assert_eq!(v.mid_to_sci(3), "-1.23e3");
        let q = ErrReal::one(128).div_i64(3);
        assert_eq!(q.mid_to_sci(5), "3.3333e-1");
        assert_eq!(ErrReal::from_i64(999, 64).mid_to_sci(2), "1.0e3");
        let e = ErrReal::zero(64).add_err(Mag::from_f64(1.234e-20));
        let s = e.err_to_sci(3);
        let back: f64 = s.parse().unwrap();
        assert!((1.234e-20..1.25e-20).contains(&back), "{s}");
        assert_eq!(ErrReal::zero(64).err_to_sci(3), "0");
    }

    #[test]
    fn rounding_folds_into_radius() {
        let big = BigInt::parse_bytes(b"123456789012345678901234567890123", 10).unwrap();
        let v = ErrReal::from_bigint(&big, 53);
        assert!(v.err_f64() > 0.0);
        assert!(v.contains_rational(&BigRational::from_integer(big)));
    }

    #[test]
    fn hull_and_max() {
        let a = ErrReal::from_i64(1, 64);
        let b = ErrReal::from_i64(3, 64);
        let h = a.hull(&b);
        assert!(h.contains(&a) && h.contains(&b));
        assert!(close(&h, 2.0, 1e-18));
        let m = a.max(&b);
        assert!(m.contains(&b));
    }
}

//! Canonical height as (1/2) 4^-n h_x(2^n P) in exact integer arithmetic,
//! with Silverman's bound on |h_hat - h_x/2| (Math. Comp. 55 (1990)):
//!
//!   -h(j)/24 - mu - 0.973 <= h_hat(P) - h_x(P)/2 <= mu + 1.07,
//!   mu = log|disc|/12 + h_inf(j)/12 + h_inf(b2/12)/2 + log(2*)/2,
//!
//! where h_inf(t) = log max(1, |t|) and 2* is 2 when b2 != 0, else 1.

use super::HeightError;
use crate::analytic::ErrReal;
use crate::arith::{rat, valuation};
use crate::curve::{CurvePoint, MinimalModelResult};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Result of the doubling limit: the estimate with its certified radius,
/// plus the bit size of the last x-coordinate.
#[derive(Debug, Clone)]
pub struct DoublingOracle {
    pub value: ErrReal,
    pub n_steps: u32,
    pub final_bits: u64,
}

fn log_ball(v: &BigInt, prec: u32) -> ErrReal {
    ErrReal::from_bigint(&v.abs(), prec).log().expect("positive")
}

fn log_max1(q: &BigRational, prec: u32) -> ErrReal {
    if q.abs() <= BigRational::one() {
        return ErrReal::zero(prec);
    }
    let a = ErrReal::from_rational(&q.abs(), prec);
    a.log().expect("greater than one")
}

/// Upper bound B with |h_hat(P) - h_x(P)/2| <= B for every rational point
/// of the minimal model.
pub fn height_difference_bound(min: &MinimalModelResult, prec: u32) -> ErrReal {
    let e = &min.curve;
    let j = e.j_invariant();
    let h_j = {
        let m = std::cmp::max(j.numer().abs(), j.denom().abs());
        if m.is_zero() {
            ErrReal::zero(prec)
        } else {
            log_ball(&m, prec)
        }
    };
    let two_star = if e.b2().is_zero() { 1 } else { 2 };
    let mu = log_ball(&min.disc_min, prec)
        .div_i64(12)
        .add(&log_max1(&j, prec).div_i64(12))
        .add(&log_max1(&(e.b2() / rat(12, 1)), prec).mul_pow2(-1))
        .add(&ErrReal::from_i64(two_star, prec).log().unwrap().mul_pow2(-1));
    let lower = h_j
        .div_i64(24)
        .add(&mu)
        .add(&ErrReal::from_rational(&rat(973, 1000), prec));
    let upper = mu.add(&ErrReal::from_rational(&rat(107, 100), prec));
    lower.max(&upper)
}

/// x(2Q) for x(Q) = a/b, reduced only at the primes that can divide the
/// common factor (2, 3 and the primes of the discriminant).
fn double_x(
    [b2, b4, b6, b8]: [&BigInt; 4],
    a: &BigInt,
    b: &BigInt,
    primes: &[u64],
    big: &[BigUint],
) -> Option<(BigInt, BigInt)> {
    let a2 = a * a;
    let b_2 = b * b;
    let ab = a * b;
    // a^4 - b4 a^2 b^2 - 2 b6 a b^3 - b8 b^4
    let num = &a2 * &a2 - b4 * &a2 * &b_2 - BigInt::from(2) * b6 * &ab * &b_2 - b8 * &b_2 * &b_2;
    // b (4 a^3 + b2 a^2 b + 2 b4 a b^2 + b6 b^3)
    let den = b * (BigInt::from(4) * &a2 * a + b2 * &a2 * b + BigInt::from(2) * b4 * &ab * b + b6 * &b_2 * b);
    if den.is_zero() {
        return None;
    }
    if num.is_zero() {
        return Some((num, BigInt::one()));
    }
    let (mut num, mut den) = (num, den);
    for &p in primes {
        let pb = BigInt::from(p);
        if num.is_multiple_of(&pb) && den.is_multiple_of(&pb) {
            let k = valuation(&num, p).unwrap_or(0).min(valuation(&den, p).unwrap_or(0));
            let pk = pb.pow(k);
            num /= &pk;
            den /= &pk;
        }
    }
    for p in big {
        let pb = BigInt::from(p.clone());
        while num.is_multiple_of(&pb) && den.is_multiple_of(&pb) {
            num /= &pb;
            den /= &pb;
        }
    }
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    Some((num, den))
}

/// (1/2) 4^-n h_x(2^n P) with radius B 4^-n plus rounding. Points whose
/// orbit reaches O return 0 with the same radius.
pub fn canonical_height_doubling_oracle(
    min: &MinimalModelResult,
    p: &CurvePoint,
    n_steps: u32,
) -> Result<DoublingOracle, HeightError> {
    canonical_height_doubling_oracle_within(min, p, n_steps, u64::MAX)
}

/// As `canonical_height_doubling_oracle`, but stops doubling early once
/// the numerator or denominator of x exceeds `max_bits`; `n_steps` of
/// the result is the number of doublings done.
pub fn canonical_height_doubling_oracle_within(
    min: &MinimalModelResult,
    p: &CurvePoint,
    n_steps: u32,
    max_bits: u64,
) -> Result<DoublingOracle, HeightError> {
    let e = &min.curve;
    if !e.contains(p) {
        return Err(HeightError::NotOnCurve);
    }
    let prec = 128;
    let bound = height_difference_bound(min, prec);
    let radius = bound.abs_upper().mul_pow2(-2 * n_steps as i64);
    let zero = DoublingOracle {
        value: ErrReal::zero(prec).add_err(radius),
        n_steps,
        final_bits: 0,
    };
    let x = match p.x() {
        Some(x) => x.clone(),
        None => return Ok(zero),
    };
    let int = |q: &BigRational| q.to_integer();
    let (b2, b4, b6, b8) = (int(e.b2()), int(e.b4()), int(e.b6()), int(e.b8()));
    let mut small: Vec<u64> = vec![2, 3];
    let mut big: Vec<BigUint> = Vec::new();
    for (q, _) in &min.disc_factors {
        match q.to_u64() {
            Some(v) if v > 3 => small.push(v),
            Some(_) => {}
            None => big.push(q.clone()),
        }
    }
    let (mut a, mut b) = (x.numer().clone(), x.denom().clone());
    let mut done = 0;
    while done < n_steps && a.bits().max(b.bits()) <= max_bits {
        match double_x([&b2, &b4, &b6, &b8], &a, &b, &small, &big) {
            Some((na, nb)) => {
                a = na;
                b = nb;
            }
            None => return Ok(zero),
        }
        done += 1;
    }
    let n_steps = done;
    let radius = bound.abs_upper().mul_pow2(-2 * n_steps as i64);
    let top = std::cmp::max(a.abs(), b.abs());
    let hx = log_ball(&top, prec);
    let value = hx.mul_pow2(-1 - 2 * n_steps as i64).add_err(radius);
    Ok(DoublingOracle {
        value,
        n_steps,
        final_bits: top.bits(),
    })
}

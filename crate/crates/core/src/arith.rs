//! Integer and rational helpers shared by the exact modules: p-adic
//! valuations, primality, factorization and `p/q` string handling.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Default trial-division bound before switching to Pollard rho.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("cannot factor {0} within the configured effort")]
    FactorizationFailure(String),
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

/// Effort knobs for [`factor`].
#[derive(Debug, Clone, Copy)]
pub struct FactorConfig {
    pub trial_bound: u64,
    /// Iterations allowed per Pollard rho attempt.
    pub rho_iterations: u64,
    pub rho_attempts: u32,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_iterations: 2_000_000,
            rho_attempts: 16,
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// v_p(n) for nonzero n; `None` for zero.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// v_p(n) for a prime of any size; `None` for zero.
pub fn valuation_big(n: &BigInt, p: &BigUint) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p.clone());
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// v_p of a rational (numerator minus denominator); `None` for zero.
pub fn valuation_rat(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let vn = valuation(x.numer(), p).unwrap() as i64;
    let vd = valuation(x.denom(), p).unwrap() as i64;
    Some(vn - vd)
}

/// Remove all factors of `p` from `n`, returning the exponent removed.
pub fn strip_factor(n: &mut BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return 0;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        *n = q;
        v += 1;
    }
}

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin with the first 13 prime bases. Deterministic below
/// 3.3 * 10^24; a strong probable-prime test above that.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let pb = BigUint::from(p);
        if *n == pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(p: u64) -> bool {
    is_probable_prime(&BigUint::from(p))
}

fn pollard_rho(n: &BigUint, cfg: &FactorConfig) -> Option<BigUint> {
    let one = BigUint::one();
    for attempt in 0..cfg.rho_attempts {
        let c = BigUint::from(attempt as u64 + 1);
        let f = |x: &BigUint| (x * x + &c) % n;
        // Brent's variant with batched gcds.
        let mut y = BigUint::from(2u32 + attempt);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut iters: u64 = 0;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let batch = std::cmp::min(128, r - k);
                for _ in 0..batch {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += batch;
                iters += batch;
            }
            r *= 2;
            if iters > cfg.rho_iterations {
                break;
            }
        }
        if g == *n {
            // Backtrack one step at a time.
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization of |n| as sorted (prime, exponent) pairs.
/// `n = 0` factors as the empty list (callers never pass zero).
pub fn factor(n: &BigInt, cfg: &FactorConfig) -> Result<Vec<(BigUint, u32)>, ArithError> {
    let mut m = n.magnitude().clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if m.is_zero() {
        return Ok(out);
    }
    let mut p: u64 = 2;
    while p <= cfg.trial_bound {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Ok(out);
    }
    let mut stack = vec![m];
    let mut big: Vec<BigUint> = Vec::new();
    while let Some(k) = stack.pop() {
        if k.is_one() {
            continue;
        }
        if is_probable_prime(&k) {
            big.push(k);
            continue;
        }
        let s = k.sqrt();
        if &s * &s == k {
            stack.push(s.clone());
            stack.push(s);
            continue;
        }
        match pollard_rho(&k, cfg) {
            Some(d) => {
                let e = &k / &d;
                stack.push(d);
                stack.push(e);
            }
            None => return Err(ArithError::FactorizationFailure(n.to_string())),
        }
    }
    big.sort();
    for q in big {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out.sort();
    Ok(out)
}

/// Distinct prime divisors of |n|.
pub fn prime_divisors(n: &BigInt, cfg: &FactorConfig) -> Result<Vec<BigUint>, ArithError> {
    Ok(factor(n, cfg)?.into_iter().map(|(p, _)| p).collect())
}

/// Parse `"p/q"`, `"p"` or `"-p/q"` into a reduced rational. Decimal
/// points are rejected so that round-trips stay exact.
pub fn parse_rational(s: &str) -> Result<BigRational, ArithError> {
    let t = s.trim();
    let bad = || ArithError::BadRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Inverse of [`parse_rational`]: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Integer square root of a nonnegative BigInt, `None` if negative or
/// not a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Floor of log2 |n| + 1 (bit length), 0 for zero.
pub fn bit_len(n: &BigInt) -> u64 {
    n.bits()
}

pub fn to_u64(n: &BigUint) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(48), 2), Some(4));
        assert_eq!(valuation(&BigInt::from(-81), 3), Some(4));
        assert_eq!(valuation(&BigInt::from(0), 3), None);
        assert_eq!(valuation_rat(&rat(3, 8), 2), Some(-3));
    }

    #[test]
    fn factor_small_and_rho() {
        let cfg = FactorConfig::default();
        let f = factor(&BigInt::from(-110592), &cfg).unwrap();
        assert_eq!(f, vec![(BigUint::from(2u32), 12), (BigUint::from(3u32), 3)]);
        // Product of two primes above the trial bound forces Pollard rho.
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(1_000_033u64);
        let f = factor(&(&p * &q * &q), &cfg).unwrap();
        assert_eq!(
            f,
            vec![(BigUint::from(1_000_003u64), 1), (BigUint::from(1_000_033u64), 2)]
        );
    }

    #[test]
    fn rho_without_trial_division() {
        let cfg = FactorConfig {
            trial_bound: 10,
            ..FactorConfig::default()
        };
        let n = BigInt::from(37u64 * 4099 * 4099 * 65537);
        let f = factor(&n, &cfg).unwrap();
        assert_eq!(
            f,
            vec![
                (BigUint::from(37u32), 1),
                (BigUint::from(4099u32), 2),
                (BigUint::from(65537u32), 1)
            ]
        );
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(37));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561));
        assert!(is_probable_prime(&BigUint::from(2305843009213693951u64)));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("17").unwrap(), rat(17, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
        assert_eq!(format_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }
}

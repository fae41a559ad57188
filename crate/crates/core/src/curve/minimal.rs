//! Global minimal models over the rationals (Laska, Kraus, Connell).

use super::{CurveError, CurvePoint, WeierstrassCurve};
use crate::arith::{factor, valuation, FactorConfig};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeSet;

/// Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform {
    pub u: BigRational,
    pub r: BigRational,
    pub s: BigRational,
    pub t: BigRational,
}

impl Transform {
    pub fn identity() -> Transform {
        Transform {
            u: BigRational::one(),
            r: BigRational::zero(),
            s: BigRational::zero(),
            t: BigRational::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Transform::identity()
    }

    pub fn inverse(&self) -> Transform {
        let Transform { u, r, s, t } = self;
        let u2 = u * u;
        Transform {
            u: u.recip(),
            r: -r / &u2,
            s: -s / u,
            t: (r * s - t) / (&u2 * u),
        }
    }

    /// The transform equal to applying `self` and then `next`.
    pub fn then(&self, next: &Transform) -> Transform {
        let Transform { u, r, s, t } = self;
        let Transform {
            u: u2,
            r: r2,
            s: s2,
            t: t2,
        } = next;
        let uu = u * u;
        Transform {
            u: u * u2,
            r: r + &uu * r2,
            s: s + u * s2,
            t: t + &uu * s * r2 + &uu * u * t2,
        }
    }

    /// Image of a point of the source curve on the target curve.
    pub fn map_point(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let u2 = &self.u * &self.u;
                let xr = x - &self.r;
                let xn = &xr / &u2;
                let yn = (y - &self.t - &self.s * &xr) / (&u2 * &self.u);
                CurvePoint::Affine { x: xn, y: yn }
            }
        }
    }
}

/// A globally minimal model together with the map from the input curve.
#[derive(Debug, Clone)]
pub struct MinimalModelResult {
    pub curve: WeierstrassCurve,
    pub transform: Transform,
    pub disc_min: BigInt,
    /// Factorization of |disc_min|.
    pub disc_factors: Vec<(BigUint, u32)>,
}

impl MinimalModelResult {
    pub fn c4_min(&self) -> BigInt {
        self.curve.c4().to_integer()
    }

    pub fn c6_min(&self) -> BigInt {
        self.curve.c6().to_integer()
    }

    pub fn bad_primes(&self) -> Vec<BigUint> {
        self.disc_factors.iter().map(|(p, _)| p.clone()).collect()
    }

    /// Map a point of the input curve onto the minimal model.
    pub fn map_point(&self, p: &CurvePoint) -> CurvePoint {
        self.transform.map_point(p)
    }
}

fn vq(x: &BigRational, p: u64) -> Option<i64> {
    crate::arith::valuation_rat(x, p)
}

/// x mod 2^k for a rational with odd denominator.
fn mod_pow2(x: &BigRational, k: u32) -> i64 {
    let m = BigInt::from(1i64 << k);
    let n = x.numer().mod_floor(&m);
    let d = x.denom().mod_floor(&m);
    // Inverse of the odd denominator modulo 2^k by brute force.
    let dm = d.to_i64().unwrap();
    let inv = (1..(1i64 << k))
        .step_by(2)
        .find(|i| (i * dm).rem_euclid(1 << k) == 1)
        .expect("odd denominator is invertible");
    (n.to_i64().unwrap() * inv).rem_euclid(1 << k)
}

fn kraus_holds(p: u64, c4: &BigRational, c6: &BigRational, disc: &BigRational) -> bool {
    let integral = |x: &BigRational| vq(x, p).is_none_or(|v| v >= 0);
    if !integral(c4) || !integral(c6) || !integral(disc) {
        return false;
    }
    match p {
        3 => vq(c6, 3) != Some(2),
        2 => {
            if mod_pow2(c6, 2) == 3 {
                return true;
            }
            let v4_ok = vq(c4, 2).is_none_or(|v| v >= 4);
            let r = mod_pow2(c6, 5);
            v4_ok && (r == 0 || r == 8)
        }
        _ => true,
    }
}

fn pow_rat(p: u64, e: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

/// Reduced integral model with the given invariants. Requires the Kraus
/// conditions at 2 and 3.
fn model_from_c4_c6(c4: &BigInt, c6: &BigInt) -> Option<[BigInt; 5]> {
    let b2 = {
        let r = (-c6).mod_floor(&BigInt::from(12));
        if r > BigInt::from(6) {
            r - 12
        } else {
            r
        }
    };
    let num4: BigInt = &b2 * &b2 - c4;
    if !(&num4 % BigInt::from(24)).is_zero() {
        return None;
    }
    let b4 = num4 / BigInt::from(24);
    let num6: BigInt = -(&b2 * &b2 * &b2) + BigInt::from(36) * &b2 * &b4 - c6;
    if !(&num6 % BigInt::from(216)).is_zero() {
        return None;
    }
    let b6 = num6 / BigInt::from(216);
    let two = BigInt::from(2);
    let a1 = b2.mod_floor(&two);
    let a3 = b6.mod_floor(&two);
    let div_exact = |n: BigInt, d: i64| -> Option<BigInt> {
        let d = BigInt::from(d);
        if (&n % &d).is_zero() {
            Some(n / d)
        } else {
            None
        }
    };
    let a2 = div_exact(&b2 - &a1, 4)?;
    let a4 = div_exact(&b4 - &a1 * &a3, 2)?;
    let a6 = div_exact(&b6 - &a3, 4)?;
    Some([a1, a2, a3, a4, a6])
}

/// Transform with scaling `u` taking `from` to `to`, if one exists.
fn solve_transform(from: &WeierstrassCurve, to: &WeierstrassCurve, u: &BigRational) -> Option<Transform> {
    let two = BigRational::from_integer(2.into());
    let three = BigRational::from_integer(3.into());
    let [a1, a2, a3, _, _] = from.ainvs();
    let [b1, b2, b3, _, _] = to.ainvs();
    let s = (u * b1 - a1) / &two;
    let r = (u * u * b2 - a2 + &s * a1 + &s * &s) / &three;
    let t = (u * u * u * b3 - a3 - &r * a1) / &two;
    let tr = Transform { u: u.clone(), r, s, t };
    if from.transform(&tr) == *to {
        Some(tr)
    } else {
        None
    }
}

fn rational_primes(x: &BigRational, cfg: &FactorConfig) -> Result<Vec<u64>, CurveError> {
    let mut out = Vec::new();
    for n in [x.numer(), x.denom()] {
        for (p, _) in factor(n, cfg)? {
            out.push(
                p.to_u64()
                    .ok_or_else(|| CurveError::Arith(crate::arith::ArithError::FactorizationFailure(p.to_string())))?,
            );
        }
    }
    Ok(out)
}

/// Globally minimal model of `curve` with the default factoring effort.
pub fn minimal_model(curve: &WeierstrassCurve) -> Result<MinimalModelResult, CurveError> {
    minimal_model_with(curve, &FactorConfig::default())
}

pub fn minimal_model_with(curve: &WeierstrassCurve, cfg: &FactorConfig) -> Result<MinimalModelResult, CurveError> {
    let c4 = curve.c4();
    let c6 = curve.c6();
    let disc = curve.disc();
    let mut primes: BTreeSet<u64> = [2u64, 3].into_iter().collect();
    primes.extend(rational_primes(disc, cfg)?);
    for n in [c4.denom(), c6.denom()] {
        primes.extend(factor(n, cfg)?.into_iter().filter_map(|(p, _)| p.to_u64()));
    }

    let mut u = BigRational::one();
    for &p in &primes {
        let v4 = vq(c4, p);
        let v6 = vq(c6, p);
        let vd = vq(disc, p).expect("disc is nonzero");
        let mut e = vd.div_euclid(12);
        if let Some(v) = v4 {
            e = e.min(v.div_euclid(4));
        }
        if let Some(v) = v6 {
            e = e.min(v.div_euclid(6));
        }
        loop {
            let s = pow_rat(p, e);
            let s2 = &s * &s;
            let s4 = &s2 * &s2;
            let s6 = &s4 * &s2;
            let s12 = &s6 * &s6;
            if kraus_holds(p, &(c4 / &s4), &(c6 / &s6), &(disc / &s12)) {
                break;
            }
            e -= 1;
        }
        u *= pow_rat(p, e);
    }

    let u2 = &u * &u;
    let u4 = &u2 * &u2;
    let c4m = c4 / &u4;
    let c6m = c6 / (&u4 * &u2);
    assert!(
        c4m.denom().is_one() && c6m.denom().is_one(),
        "scaled invariants are integral"
    );
    let ainvs = model_from_c4_c6(c4m.numer(), c6m.numer()).expect("Kraus conditions guarantee an integral model");
    let min_curve = WeierstrassCurve::new(ainvs.map(BigRational::from_integer))?;
    let transform = solve_transform(curve, &min_curve, &u)
        .or_else(|| solve_transform(curve, &min_curve, &-&u))
        .expect("curves with equal c4, c6 are isomorphic");
    let disc_min = min_curve.disc().to_integer();
    let disc_factors = factor(&disc_min, cfg)?;
    Ok(MinimalModelResult {
        curve: min_curve,
        transform,
        disc_min,
        disc_factors,
    })
}

/// Local minimality certificate at p: v_p(disc) < 12 or v_p(c4) < 4.
pub fn is_minimal_at(curve: &WeierstrassCurve, p: u64) -> bool {
    let vd = valuation(&curve.disc().to_integer(), p).unwrap_or(0);
    let v4 = if curve.c4().is_zero() {
        u32::MAX
    } else {
        valuation(&curve.c4().to_integer(), p).unwrap()
    };
    vd < 12 || v4 < 4
}

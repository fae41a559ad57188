//! Local height functions lambda_v normalized by
//! lambda_v(2P) = 4 lambda_v(P) - log|psi_2(P)|_v, so that their sum over
//! all places is the canonical height with no discriminant terms.

use crate::analytic::{AnalyticError, ErrReal, Mag};
use crate::arith::valuation_big;
use crate::curve::{MinimalModelResult, ReductionKind, Transform, WeierstrassCurve};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients of z(t) = 1 - b4 t^2 - 2 b6 t^3 - b8 t^4 and
/// w(t) = 4t + b2 t^2 + 2 b4 t^3 + b6 t^4 on a shifted model.
struct Tate {
    b2: ErrReal,
    b4: ErrReal,
    b6: ErrReal,
    b8: ErrReal,
}

impl Tate {
    fn new(c: &WeierstrassCurve, prec: u32) -> Tate {
        Tate {
            b2: ErrReal::from_rational(c.b2(), prec),
            b4: ErrReal::from_rational(c.b4(), prec),
            b6: ErrReal::from_rational(c.b6(), prec),
            b8: ErrReal::from_rational(c.b8(), prec),
        }
    }

    fn z(&self, t: &ErrReal) -> ErrReal {
        let p = t.prec();
        let inner = self.b8.mul(t).add(&self.b6.mul_i64(2)).mul(t).add(&self.b4);
        ErrReal::one(p).sub(&inner.mul(&t.sqr()))
    }

    fn w(&self, t: &ErrReal) -> ErrReal {
        let p = t.prec();
        let inner = self.b6.mul(t).add(&self.b4.mul_i64(2)).mul(t).add(&self.b2);
        inner.mul(t).add(&ErrReal::from_i64(4, p)).mul(t)
    }
}

fn rat_ball(q: &BigRational, prec: u32) -> ErrReal {
    ErrReal::from_rational(q, prec)
}

/// Shift x -> x - alpha with alpha an integer making x >= 1 on E(R),
/// plus the t = 1/x ranges covered by the real locus.
struct Shifted {
    alpha: BigInt,
    curve: WeierstrassCurve,
    t_ranges: Vec<(ErrReal, ErrReal)>,
}

fn shifted_model(curve: &WeierstrassCurve) -> Result<Shifted, AnalyticError> {
    let prec = 128;
    let roots = crate::analytic::real_roots(curve, prec)?;
    let smallest = roots.last().expect("a real cubic has a real root");
    let alpha: BigInt = smallest.floor_lower() - 1;
    let tr = Transform {
        u: BigRational::one(),
        r: BigRational::from_integer(alpha.clone()),
        s: BigRational::zero(),
        t: BigRational::zero(),
    };
    let shifted = curve.transform(&tr);
    let a = ErrReal::from_bigint(&alpha, prec);
    let inv = |e: &ErrReal| e.sub(&a).inv();
    let zero = ErrReal::zero(prec);
    let mut t_ranges = vec![(zero, inv(&roots[0])?)];
    if roots.len() == 3 {
        t_ranges.push((inv(&roots[1])?, inv(&roots[2])?));
    }
    Ok(Shifted {
        alpha,
        curve: shifted,
        t_ranges,
    })
}

/// max |log z(t)| over the real locus, by interval subdivision.
fn log_z_bound(tate: &Tate, ranges: &[(ErrReal, ErrReal)]) -> Result<Mag, AnalyticError> {
    let mut pieces = 64usize;
    'retry: loop {
        let n = pieces;
        let mut lo_min: Option<ErrReal> = None;
        let mut hi_max: Option<ErrReal> = None;
        for (a, b) in ranges {
            let (al, ae) = a.lower();
            let (bu, be) = b.upper();
            let start = ErrReal::from_dyadic(al, ae, 64);
            let end = ErrReal::from_dyadic(bu, be, 64);
            let step = end.sub(&start).div_i64(n as i64);
            for k in 0..n {
                let l = start.add(&step.mul_i64(k as i64));
                let r = start.add(&step.mul_i64(k as i64 + 1));
                let cell = ErrReal::from_endpoints(l.lower(), r.upper(), 64);
                let z = tate.z(&cell.with_prec(64));
                if !z.is_positive() {
                    if pieces >= 1 << 14 {
                        return Err(AnalyticError::IntervalContainsZero);
                    }
                    pieces *= 4;
                    continue 'retry;
                }
                let zl = ErrReal::from_dyadic(z.lower().0, z.lower().1, 64);
                let zu = ErrReal::from_dyadic(z.upper().0, z.upper().1, 64);
                lo_min = Some(match lo_min {
                    Some(m) if m.certainly_lt(&zl) => m,
                    _ => zl,
                });
                hi_max = Some(match hi_max {
                    Some(m) if m.certainly_gt(&zu) => m,
                    _ => zu,
                });
            }
        }
        let lo = lo_min.expect("nonempty ranges").log()?;
        let hi = hi_max.expect("nonempty ranges").log()?;
        return Ok(Mag::max(&lo.abs_upper(), &hi.abs_upper()));
    }
}

/// Archimedean local height of a non-torsion real point with x-coordinate
/// `x`, with radius at most 2^-bits.
pub fn archimedean(curve: &WeierstrassCurve, x: &BigRational, bits: u32) -> Result<ErrReal, AnalyticError> {
    let sh = shifted_model(curve)?;
    let xs = x - BigRational::from_integer(sh.alpha.clone());
    if xs < BigRational::one() {
        return Err(AnalyticError::IntervalContainsZero);
    }
    let bound = log_z_bound(&Tate::new(&sh.curve, 64), &sh.t_ranges)?;
    // Tail after N terms: (1/8) sum_{n >= N} 4^-n L = L 4^-N / 6.
    let lb = bound.log2_ceil().max(0) as u32;
    let n_terms = (bits + lb).div_ceil(2) + 1;
    let tail = bound
        .mul_pow2(-2 * n_terms as i64)
        .div(&Mag::from_u64(6))
        .unwrap_or(bound);
    let target = Mag::pow2(-(bits as i64));
    // The doubling map expands radii unevenly near 2-torsion, so the
    // working precision is raised until the sum meets the target.
    let mut prec = bits + 4 * n_terms + 40;
    loop {
        if let Ok(v) = tate_sum(&sh.curve, &xs, n_terms, prec) {
            let v = v.add_err(tail);
            if v.rad() <= target || prec >= MAX_TATE_PREC {
                return Ok(v);
            }
        } else if prec >= MAX_TATE_PREC {
            return Err(AnalyticError::PrecisionExhausted { bits: prec });
        }
        prec *= 2;
    }
}

const MAX_TATE_PREC: u32 = 1 << 16;

/// (1/2) log x + (1/8) sum_{n < N} 4^-n log z(t_n) at `prec` bits.
fn tate_sum(shifted: &WeierstrassCurve, xs: &BigRational, n_terms: u32, prec: u32) -> Result<ErrReal, AnalyticError> {
    let tate = Tate::new(shifted, prec);
    let mut t = rat_ball(&xs.recip(), prec);
    let mut sum = ErrReal::zero(prec);
    for n in 0..n_terms {
        let z = tate.z(&t);
        sum = sum.add(&z.log()?.mul_pow2(-2 * n as i64));
        if n + 1 < n_terms {
            let w = tate.w(&t);
            t = w.div(&z)?;
        }
    }
    let half_log_x = rat_ball(xs, prec).log()?.mul_pow2(-1);
    Ok(half_log_x.add(&sum.mul_pow2(-3)))
}

/// psi_3 = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8.
fn psi3(c: &WeierstrassCurve, x: &BigRational) -> BigRational {
    let three = BigRational::from_integer(3.into());
    ((((&three * x + c.b2()) * x + &three * c.b4()) * x + &three * c.b6()) * x) + c.b8()
}

/// Non-archimedean contribution: log of the x-denominator square root plus
/// the corrections at primes where P meets the singular point. Returned as
/// (base, rational coefficient) pairs for sum coeff * log base.
pub fn non_archimedean_terms(
    min: &MinimalModelResult,
    x: &BigRational,
    y: &BigRational,
) -> Vec<(BigUint, BigRational)> {
    let c = &min.curve;
    let mut out: Vec<(BigUint, BigRational)> = Vec::new();
    // x = A / D^2: the good-reduction part sums to log D.
    let d2 = x.denom();
    let d = d2.sqrt();
    debug_assert!(&d * &d == *d2);
    if !d.is_one() {
        out.push((d.abs().to_biguint().unwrap(), BigRational::one()));
    }
    let psi2 = BigRational::from_integer(2.into()) * y + c.a1() * x + c.a3();
    let fx = c.partial_x(x, y);
    // Numerators carry the p-adic valuation wherever P is p-integral.
    let psi2 = psi2.numer().clone();
    let fx = fx.numer().clone();
    for (p, n_disc) in &min.disc_factors {
        let pi = BigInt::from(p.clone());
        if d.is_multiple_of(&pi) {
            continue;
        }
        let singular = psi2.is_multiple_of(&pi) && fx.is_multiple_of(&pi);
        if !singular {
            continue;
        }
        let kind = if min.c4_min().is_multiple_of(&pi) {
            ReductionKind::Additive
        } else {
            ReductionKind::Multiplicative
        };
        let coeff = match kind {
            ReductionKind::Multiplicative => {
                let n = BigRational::from_integer(BigInt::from(*n_disc));
                let v2 = match valuation_big(&psi2, p) {
                    Some(v) => BigRational::from_integer(v.into()),
                    None => n.clone(),
                };
                let half_n = &n / BigRational::from_integer(2.into());
                let i = if v2 < half_n { v2 } else { half_n };
                -(&i * (&n - &i)) / (BigRational::from_integer(2.into()) * &n)
            }
            _ => {
                let p3 = psi3(c, x).numer().clone();
                let v3 = valuation_big(&p3, p);
                let v2 = valuation_big(&psi2, p);
                match (v2, v3) {
                    (Some(v2), Some(v3)) if v3 < 3 * v2 => BigRational::new(-BigInt::from(v3), 8.into()),
                    (Some(v2), _) => BigRational::new(-BigInt::from(v2), 3.into()),
                    // psi2 = 0: a 2-torsion point, never reached for non-torsion input.
                    (None, Some(v3)) => BigRational::new(-BigInt::from(v3), 8.into()),
                    (None, None) => BigRational::zero(),
                }
            }
        };
        if !coeff.is_zero() {
            out.push((p.clone(), coeff));
        }
    }
    out
}

/// Sum of coeff * log p as a ball.
pub fn log_combination(terms: &[(BigUint, BigRational)], prec: u32) -> Result<ErrReal, AnalyticError> {
    let mut acc = ErrReal::zero(prec);
    for (p, c) in terms {
        let lp = ErrReal::from_bigint(&BigInt::from(p.clone()), prec).log()?;
        acc = acc.add(&lp.mul(&rat_ball(c, prec)));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn shift_moves_locus_right() {
        let e = WeierstrassCurve::from_ints([0, 0, 1, -1, 0]).unwrap();
        let sh = shifted_model(&e).unwrap();
        // smallest root of 4x^3 - 4x + 1 is about -1.107
        assert_eq!(sh.alpha, BigInt::from(-3));
        assert_eq!(sh.t_ranges.len(), 2);
    }

    #[test]
    fn z_bound_is_finite() {
        let e = WeierstrassCurve::from_ints([0, 0, 1, -1, 0]).unwrap();
        let sh = shifted_model(&e).unwrap();
        let l = log_z_bound(&Tate::new(&sh.curve, 64), &sh.t_ranges).unwrap();
        assert!(l.to_f64_up() < 10.0);
    }

    #[test]
    fn archimedean_is_tight() {
        let e = WeierstrassCurve::from_ints([0, 0, 1, -1, 0]).unwrap();
        let v = archimedean(&e, &rat(2, 1), 100).unwrap();
        assert!(v.err_f64() < 2f64.powi(-100));
    }
}

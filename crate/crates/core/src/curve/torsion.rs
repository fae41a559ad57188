//! Torsion detection (Mazur bound) and enumeration (Nagell-Lutz).

use super::{CurvePoint, MinimalModelResult, WeierstrassCurve};
use crate::arith::{factor, FactorConfig};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Largest order of a rational torsion point over the rationals.
pub const TORSION_BOUND: u32 = 12;

/// Smallest n <= 12 with nP = O, or `None` if P has infinite order.
pub fn torsion_order(curve: &WeierstrassCurve, p: &CurvePoint) -> Option<u32> {
    // On an integral model a torsion point has 4x integral.
    if let Some(x) = p.x() {
        if curve.is_integral() && !(BigInt::from(4) % x.denom()).is_zero() {
            return None;
        }
    }
    let mut q = p.clone();
    for n in 1..=TORSION_BOUND {
        if q.is_infinity() {
            return Some(n);
        }
        q = curve.add(&q, p);
    }
    None
}

fn eval_monic_cubic(a: &BigInt, b: &BigInt, x: &BigInt) -> BigInt {
    x * x * x + a * x + b
}

/// Integer roots of x^3 + a x + b.
fn integer_roots(a: &BigInt, b: &BigInt) -> Vec<BigInt> {
    if b.is_zero() {
        // x (x^2 + a)
        let mut out = vec![BigInt::zero()];
        let m = -a;
        if m.is_positive() {
            let s = m.sqrt();
            if &s * &s == m {
                out.push(s.clone());
                out.push(-s);
            }
        }
        out.sort();
        out.dedup();
        return out;
    }
    // Split the line at the critical points and bisect each monotone piece.
    let bound: BigInt = a.abs().max(b.abs()) + 1;
    let mut cuts = vec![-bound.clone()];
    if a.is_negative() {
        let c: BigInt = (-a / BigInt::from(3)).sqrt();
        cuts.push(-&c - 1);
        cuts.push(-&c + 1);
        cuts.push(&c - 1);
        cuts.push(&c + 1);
    }
    cuts.push(bound.clone());
    cuts.sort();
    let mut out = Vec::new();
    // Check the short windows around the critical points directly.
    for w in cuts.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        if hi - lo <= BigInt::from(4) {
            let mut x = lo.clone();
            while &x <= hi {
                if eval_monic_cubic(a, b, &x).is_zero() {
                    out.push(x.clone());
                }
                x += 1;
            }
            continue;
        }
        let flo = eval_monic_cubic(a, b, lo);
        let fhi = eval_monic_cubic(a, b, hi);
        if flo.is_zero() {
            out.push(lo.clone());
        }
        if fhi.is_zero() {
            out.push(hi.clone());
        }
        if flo.signum() * fhi.signum() >= BigInt::zero() {
            continue;
        }
        let (mut l, mut h) = (lo.clone(), hi.clone());
        let inc = flo.is_negative();
        while &h - &l > BigInt::one() {
            let m: BigInt = (&l + &h).div_floor(&BigInt::from(2));
            let fm = eval_monic_cubic(a, b, &m);
            if fm.is_zero() {
                out.push(m.clone());
                break;
            }
            if fm.is_negative() == inc {
                l = m;
            } else {
                h = m;
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn divisors_with_square_dividing(n: &BigInt, cfg: &FactorConfig) -> Vec<BigInt> {
    let f = factor(n, cfg).expect("discriminant factors at desk scale");
    let mut ds = vec![BigInt::one()];
    for (p, e) in f {
        let p = BigInt::from(p);
        let mut next = Vec::new();
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=e / 2 {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
    }
    ds
}

/// All rational torsion points of the minimal model, including O.
pub fn torsion_points(min: &MinimalModelResult) -> Vec<CurvePoint> {
    let e = &min.curve;
    let c4 = e.c4().to_integer();
    let c6 = e.c6().to_integer();
    // Y^2 = X^3 - 27 c4 X - 54 c6 with X = 36x + 3 b2, Y = 108 (2y + a1 x + a3).
    let a = BigInt::from(-27) * &c4;
    let b = BigInt::from(-54) * &c6;
    let d = BigInt::from(4) * &a * &a * &a + BigInt::from(27) * &b * &b;
    let mut out = vec![CurvePoint::Infinity];
    let mut ys = vec![BigInt::zero()];
    for y in divisors_with_square_dividing(&d, &FactorConfig::default()) {
        ys.push(y.clone());
        ys.push(-y);
    }
    let b2 = e.b2().clone();
    for y in ys {
        let shifted = &b - &y * &y;
        for x_big in integer_roots(&a, &shifted) {
            let x = (BigRational::from_integer(x_big) - BigRational::from_integer(3.into()) * &b2)
                / BigRational::from_integer(36.into());
            let yy =
                (BigRational::from_integer(y.clone()) / BigRational::from_integer(108.into()) - e.a1() * &x - e.a3())
                    / BigRational::from_integer(2.into());
            let p = CurvePoint::Affine { x, y: yy };
            if e.contains(&p) && torsion_order(e, &p).is_some() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::curve::minimal_model;

    #[test]
    fn orders() {
        let e = WeierstrassCurve::from_ints([0, 0, 0, 0, 1]).unwrap();
        let p = e.point(rat(0, 1), rat(1, 1)).unwrap();
        assert_eq!(torsion_order(&e, &p), Some(3));
        let p = e.point(rat(2, 1), rat(3, 1)).unwrap();
        assert_eq!(torsion_order(&e, &p), Some(6));
        assert_eq!(torsion_order(&e, &CurvePoint::Infinity), Some(1));
        let e = WeierstrassCurve::from_ints([0, 0, 1, -1, 0]).unwrap();
        let p = e.point(rat(0, 1), rat(0, 1)).unwrap();
        assert_eq!(torsion_order(&e, &p), None);
    }

    #[test]
    fn cubic_integer_roots() {
        // (x - 2)(x + 1)^2 = x^3 - 3x + 2
        let r = integer_roots(&BigInt::from(-3), &BigInt::from(2));
        assert_eq!(r, vec![BigInt::from(-2), BigInt::from(1)]);
        let r = integer_roots(&BigInt::from(-1), &BigInt::zero());
        assert_eq!(r, vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]);
    }

    #[test]
    fn torsion_subgroups_match_known_orders() {
        // (ainvs, |E(Q)_tors|)
        let cases: [([i64; 5], usize); 7] = [
            ([0, -1, 1, -10, -20], 5),
            ([1, 0, 1, 4, -6], 6),
            ([1, 1, 1, -10, -10], 8),
            ([0, 0, 0, -1, 0], 4),
            ([0, 0, 0, 0, 1], 6),
            ([0, 0, 1, -1, 0], 1),
            ([1, 0, 0, -1, 0], 2),
        ];
        for (a, n) in cases {
            let m = minimal_model(&WeierstrassCurve::from_ints(a).unwrap()).unwrap();
            let t = torsion_points(&m);
            assert_eq!(t.len(), n, "{a:?}");
            for p in &t {
                assert!(m.curve.contains(p));
            }
        }
    }
}

//! Determinants of symmetric ball matrices.

use crate::analytic::{ErrReal, Mag};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Fraction-free Gaussian elimination on an integer matrix.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

fn working_prec(g: &[Vec<ErrReal>]) -> u32 {
    g.iter().flatten().map(|e| e.prec()).max().unwrap_or(64)
}

/// det of the midpoint matrix, evaluated exactly and rounded once.
fn det_mid(g: &[Vec<ErrReal>], prec: u32) -> ErrReal {
    let emin = g
        .iter()
        .flatten()
        .filter(|e| !e.mid_dyadic().0.is_zero())
        .map(|e| e.mid_dyadic().1)
        .min();
    let Some(emin) = emin else {
        return ErrReal::zero(prec);
    };
    let ints = g
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    let (man, exp) = e.mid_dyadic();
                    man << (exp - emin) as usize
                })
                .collect()
        })
        .collect();
    ErrReal::from_dyadic(bareiss(ints), emin * g.len() as i64, prec)
}

/// Determinant of a ball matrix: exact determinant of the midpoints plus
/// the bound prod(|a_i| + |e_i|) - prod |a_i| over rows, which follows
/// from multilinearity and Hadamard's inequality.
pub fn det_ball(g: &[Vec<ErrReal>]) -> ErrReal {
    let prec = working_prec(g) + 16;
    if g.is_empty() {
        return ErrReal::one(prec);
    }
    let mid = det_mid(g, prec);
    if g.iter().flatten().all(|e| e.rad().is_zero()) {
        return mid;
    }
    let mut with_err = ErrReal::one(prec);
    let mut without = ErrReal::one(prec);
    for row in g {
        let mut a = ErrReal::zero(prec);
        let mut r = Mag::ZERO;
        for e in row {
            a = a.add(&e.mid().with_prec(prec).sqr());
            r = r.add(&e.rad().mul(&e.rad()));
        }
        let a = a.sqrt().expect("sum of squares");
        let (rm, re) = r.to_dyadic();
        let r_up = ErrReal::from_dyadic(rm, re, prec)
            .sqrt()
            .expect("sum of squares")
            .abs_upper();
        let (um, ue) = r_up.to_dyadic();
        with_err = with_err.mul(&a.add(&ErrReal::from_dyadic(um, ue, prec)));
        without = without.mul(&a);
    }
    // The bound is increasing in the norms, so the upper end of the ball
    // evaluation is valid.
    let bound = with_err.sub(&without).abs_upper();
    mid.add_err(bound)
}

/// Cofactor (i, i): determinant with row and column i removed.
pub fn principal_minor(g: &[Vec<ErrReal>], i: usize) -> ErrReal {
    let sub: Vec<Vec<ErrReal>> = g
        .iter()
        .enumerate()
        .filter(|(r, _)| *r != i)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(c, _)| *c != i)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect();
    if sub.is_empty() {
        return ErrReal::one(working_prec(g));
    }
    det_ball(&sub)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(bareiss(ints(&[&[2, 1], &[1, 2]])), BigInt::from(3));
        assert_eq!(bareiss(ints(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss(ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), BigInt::zero());
        assert_eq!(bareiss(ints(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])), BigInt::from(6));
    }

    #[test]
    fn ball_radius_covers_perturbation() {
        let p = 128;
        let e = |v: f64, r: f64| ErrReal::from_f64(v, p).add_err(Mag::from_f64(r));
        let g = vec![vec![e(2.0, 1e-3), e(1.0, 1e-3)], vec![e(1.0, 1e-3), e(2.0, 1e-3)]];
        let d = det_ball(&g);
        assert!(d.contains(&ErrReal::from_i64(3, p)));
        // (2.001)(2.001) - (0.999)^2 is inside the ball
        let hi = ErrReal::from_f64(2.001 * 2.001 - 0.999 * 0.999, p);
        assert!(d.contains(&hi));
        assert!(d.err_f64() < 1e-2);
    }
}

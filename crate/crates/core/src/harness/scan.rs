//! Brute-force Lang-Silverman scan over a box of integer combinations.
//!
//! The canonical height is invariant under adding torsion, so the minimum
//! over P + T equals the minimum of the height quadratic form n^T G n over
//! the box, which is what is enumerated here.

use super::HarnessError;
use crate::analytic::ErrReal;
use crate::lattice::{for_each_in_box, form_value, FloatForm, HeightLattice, LatticeError, MAX_BOX_POINTS};

#[derive(Debug, Clone)]
pub struct LsScan {
    /// min over 0 < |n|_inf <= B of h(sum n_i P_i).
    pub min_height: ErrReal,
    pub minimizer: Vec<i64>,
    /// min_height / max{1, hF+}
    pub ratio: ErrReal,
}

/// Smallest value of the Gram form on nonzero vectors with |n_i| <= b.
pub fn box_minimum(gram: &[Vec<ErrReal>], b: u32) -> Result<(ErrReal, Vec<i64>), HarnessError> {
    let m = gram.len();
    if m == 0 || b == 0 {
        return Err(HarnessError::NoGenerators);
    }
    let points = (2 * b as u128 + 1).checked_pow(m as u32).unwrap_or(u128::MAX);
    if points > MAX_BOX_POINTS {
        return Err(LatticeError::EnumerationTooLarge { points }.into());
    }
    let widths = vec![b as i64; m];
    let form = FloatForm::new(gram);
    let mut upper = f64::INFINITY;
    for_each_in_box(&widths, |n| {
        let (q, e) = form.eval(n);
        upper = upper.min(q + e);
    });
    let mut cands: Vec<Vec<i64>> = Vec::new();
    for_each_in_box(&widths, |n| {
        let (q, e) = form.eval(n);
        if q - e <= upper {
            cands.push(n.to_vec());
        }
    });
    let mut best: Option<(ErrReal, ErrReal, Vec<i64>)> = None;
    for n in cands {
        let v = form_value(gram, &n);
        best = Some(match best {
            None => (v.clone(), v, n),
            Some((lo, at, arg)) => {
                let lo = lo.min(&v);
                if v.mid_f64() < at.mid_f64() {
                    (lo, v, n)
                } else {
                    (lo, at, arg)
                }
            }
        });
    }
    let (lo, _, arg) = best.expect("box has a nonzero vector");
    Ok((lo, arg))
}

pub fn ls_scan(lat: &HeightLattice, hf_plus: &ErrReal, b: u32) -> Result<LsScan, HarnessError> {
    let (min_height, minimizer) = box_minimum(&lat.gram, b)?;
    let denom = hf_plus.max(&ErrReal::one(hf_plus.prec()));
    let ratio = min_height.div(&denom).expect("denominator is at least one");
    Ok(LsScan {
        min_height,
        minimizer,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(v: f64) -> ErrReal {
        ErrReal::from_f64(v, 128)
    }

    #[test]
    fn rank_one_minimum_at_generator() {
        let lat = HeightLattice::from_gram(vec![vec![ball(0.0511114082)]]).unwrap();
        let s = ls_scan(&lat, &ball(0.5), 5).unwrap();
        assert_eq!(s.minimizer, vec![1]);
        assert!(s.min_height.overlaps(&ball(0.0511114082)));
        assert!(s.ratio.overlaps(&ball(0.0511114082)));
    }

    #[test]
    fn hexagonal_minimum() {
        let g = vec![vec![ball(2.0), ball(1.0)], vec![ball(1.0), ball(2.0)]];
        let (v, n) = box_minimum(&g, 3).unwrap();
        assert!(v.overlaps(&ball(2.0)));
        assert!((form_value(&g, &n).mid_f64() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_box_is_an_error() {
        let g = vec![vec![ball(1.0)]];
        assert!(matches!(box_minimum(&g, 0), Err(HarnessError::NoGenerators)));
        assert!(matches!(box_minimum(&[], 4), Err(HarnessError::NoGenerators)));
    }
}

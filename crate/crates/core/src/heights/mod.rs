//! Naive and canonical heights of rational points, and the height pairing.
//!
//! Normalization: h_hat(P) = (1/2) lim 4^-n h_x(2^n P) where
//! h_x(p/q) = log max(|p|, |q|). Twice this value is the other common
//! convention; see [`CanonicalHeight::doubled`].

mod local;
mod oracle;

pub use local::{archimedean, log_combination, non_archimedean_terms};
pub use oracle::{
    canonical_height_doubling_oracle, canonical_height_doubling_oracle_within, height_difference_bound, DoublingOracle,
};

use crate::analytic::{AnalyticError, ErrReal};
use crate::curve::{torsion_order, CurvePoint, MinimalModelResult};
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeightError {
    #[error("point at infinity has no x-coordinate")]
    InfinityPoint,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// (1/2) lim 4^-n h_x(2^n P)
    HxHalf,
}

#[derive(Debug, Clone)]
pub struct CanonicalHeight {
    pub value: ErrReal,
    pub normalization: Normalization,
    pub point: CurvePoint,
}

impl CanonicalHeight {
    /// The value in the lim 4^-n h_x(2^n P) convention.
    pub fn doubled(&self) -> ErrReal {
        self.value.mul_pow2(1)
    }
}

/// log max(|p|, |q|) for x = p/q in lowest terms.
pub fn naive_height(p: &CurvePoint, prec: u32) -> Result<ErrReal, HeightError> {
    let x = p.x().ok_or(HeightError::InfinityPoint)?;
    let m = std::cmp::max(x.numer().magnitude(), x.denom().magnitude()).clone();
    if m.is_one() {
        return Ok(ErrReal::zero(prec));
    }
    Ok(ErrReal::from_bigint(&m.into(), prec).log()?)
}

fn bits_for(tol: f64) -> u32 {
    ((-tol.log2()).ceil().max(0.0) as u32 + 8).max(64)
}

/// Canonical height by local decomposition, with radius at most `tol`.
/// Torsion points return exactly zero.
pub fn canonical_height(min: &MinimalModelResult, p: &CurvePoint, tol: f64) -> Result<CanonicalHeight, HeightError> {
    let e = &min.curve;
    if !e.contains(p) {
        return Err(HeightError::NotOnCurve);
    }
    let bits = bits_for(tol);
    let prec = bits + 32;
    let done = |value| CanonicalHeight {
        value,
        normalization: Normalization::HxHalf,
        point: p.clone(),
    };
    if torsion_order(e, p).is_some() {
        return Ok(done(ErrReal::zero(prec)));
    }
    let (x, y) = match p {
        CurvePoint::Affine { x, y } => (x, y),
        CurvePoint::Infinity => unreachable!("infinity is torsion"),
    };
    let arch = archimedean(e, x, bits + 2)?;
    let fin = log_combination(&non_archimedean_terms(min, x, y), prec)?;
    let value = arch.add(&fin);
    if !(value.err_f64() <= tol) {
        return Err(AnalyticError::PrecisionExhausted { bits: prec }.into());
    }
    Ok(done(value))
}

/// <P, Q> = (1/2)(h(P + Q) - h(P) - h(Q)).
pub fn height_pairing(
    min: &MinimalModelResult,
    p: &CurvePoint,
    q: &CurvePoint,
    tol: f64,
) -> Result<ErrReal, HeightError> {
    let e = &min.curve;
    let t = tol / 3.0;
    let s = e.add(p, q);
    let hs = canonical_height(min, &s, t)?.value;
    let hp = canonical_height(min, p, t)?.value;
    let hq = canonical_height(min, q, t)?.value;
    Ok(hs.sub(&hp).sub(&hq).mul_pow2(-1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::curve::{minimal_model, WeierstrassCurve};

    fn min(a: [i64; 5]) -> MinimalModelResult {
        minimal_model(&WeierstrassCurve::from_ints(a).unwrap()).unwrap()
    }

    #[test]
    fn naive_examples() {
        let pt = |n, d| CurvePoint::Affine {
            x: rat(n, d),
            y: rat(0, 1),
        };
        assert!(naive_height(&pt(0, 1), 64).unwrap().is_exact());
        assert!((naive_height(&pt(3, 2), 64).unwrap().mid_f64() - 3f64.ln()).abs() < 1e-15);
        assert!((naive_height(&pt(-7, 9), 64).unwrap().mid_f64() - 9f64.ln()).abs() < 1e-15);
        assert_eq!(
            naive_height(&CurvePoint::Infinity, 64).unwrap_err(),
            HeightError::InfinityPoint
        );
    }

    #[test]
    fn torsion_is_zero() {
        let m = min([0, 0, 0, 0, 1]);
        let p = m.curve.point(rat(2, 1), rat(3, 1)).unwrap();
        let h = canonical_height(&m, &p, 1e-20).unwrap();
        assert!(h.value.is_exact() && h.value.mid_f64() == 0.0);
    }

    #[test]
    fn rank_one_reference() {
        let m = min([0, 0, 1, -1, 0]);
        let p = m.curve.point(rat(0, 1), rat(0, 1)).unwrap();
        let h = canonical_height(&m, &p, 1e-30).unwrap();
        // half of 0.0511114082399688192...
        assert!(
            (h.value.mid_f64() - 0.025_555_704_119_984_4).abs() < 1e-15,
            "{:?}",
            h.value
        );
    }
}

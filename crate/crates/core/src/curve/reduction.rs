use super::{CurveError, MinimalModelResult};
use crate::analytic::{AnalyticError, ErrReal};
use crate::arith::is_probable_prime;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionKind {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionType {
    pub prime: BigUint,
    pub kind: ReductionKind,
}

/// Reduction type at `p`, read off (v_p(disc_min), v_p(c4)) on the
/// minimal model.
pub fn classify_reduction(min: &MinimalModelResult, p: &BigUint) -> Result<ReductionType, CurveError> {
    if !is_probable_prime(p) {
        return Err(CurveError::NotPrime(p.to_string()));
    }
    let pi = BigInt::from(p.clone());
    let kind = if !min.disc_min.is_multiple_of(&pi) {
        ReductionKind::Good
    } else if min.c4_min().is_multiple_of(&pi) {
        ReductionKind::Additive
    } else {
        ReductionKind::Multiplicative
    };
    Ok(ReductionType { prime: p.clone(), kind })
}

/// log N0 with its split into semi-stable (multiplicative) and unstable
/// (additive) bad primes.
#[derive(Debug, Clone)]
pub struct ConductorNorms {
    pub log_n0: ErrReal,
    pub log_nst: ErrReal,
    pub log_nuns: ErrReal,
    pub bad: Vec<ReductionType>,
}

impl ConductorNorms {
    /// Product of the bad primes.
    pub fn n0(&self) -> BigUint {
        self.bad.iter().fold(BigUint::one(), |acc, r| acc * &r.prime)
    }

    pub fn multiplicative(&self) -> impl Iterator<Item = &BigUint> {
        self.bad
            .iter()
            .filter(|r| r.kind == ReductionKind::Multiplicative)
            .map(|r| &r.prime)
    }

    pub fn additive(&self) -> impl Iterator<Item = &BigUint> {
        self.bad
            .iter()
            .filter(|r| r.kind == ReductionKind::Additive)
            .map(|r| &r.prime)
    }
}

fn log_of_product<'a>(ps: impl Iterator<Item = &'a BigUint>, prec: u32) -> Result<ErrReal, AnalyticError> {
    let n = ps.fold(BigUint::one(), |acc, p| acc * p);
    if n.is_one() {
        return Ok(ErrReal::zero(prec));
    }
    ErrReal::from_bigint(&BigInt::from(n), prec.max(64))
        .with_prec(prec)
        .log()
}

/// Conductor norms of the minimal model; the logs carry `prec` bits.
pub fn conductor_norms(min: &MinimalModelResult, prec: u32) -> Result<ConductorNorms, CurveError> {
    let mut bad = Vec::new();
    for p in min.bad_primes() {
        let r = classify_reduction(min, &p)?;
        debug_assert!(r.kind != ReductionKind::Good);
        bad.push(r);
    }
    let mut out = ConductorNorms {
        log_n0: ErrReal::zero(prec),
        log_nst: ErrReal::zero(prec),
        log_nuns: ErrReal::zero(prec),
        bad,
    };
    let log = |it: Vec<&BigUint>| log_of_product(it.into_iter(), prec).expect("product of primes is positive");
    out.log_nst = log(out.multiplicative().collect());
    out.log_nuns = log(out.additive().collect());
    out.log_n0 = log(out.bad.iter().map(|r| &r.prime).collect());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{minimal_model, WeierstrassCurve};

    fn min(a: [i64; 5]) -> MinimalModelResult {
        minimal_model(&WeierstrassCurve::from_ints(a).unwrap()).unwrap()
    }

    #[test]
    fn classification_examples() {
        let m = min([0, 0, 1, -1, 0]);
        let r = classify_reduction(&m, &BigUint::from(37u32)).unwrap();
        assert_eq!(r.kind, ReductionKind::Multiplicative);
        let r = classify_reduction(&m, &BigUint::from(5u32)).unwrap();
        assert_eq!(r.kind, ReductionKind::Good);
        let m = min([0, 0, 0, -1, 0]);
        let r = classify_reduction(&m, &BigUint::from(2u32)).unwrap();
        assert_eq!(r.kind, ReductionKind::Additive);
        assert!(matches!(
            classify_reduction(&m, &BigUint::from(4u32)),
            Err(CurveError::NotPrime(_))
        ));
    }

    #[test]
    fn norms_examples() {
        let n = conductor_norms(&min([0, 0, 1, -1, 0]), 128).unwrap();
        assert!((n.log_n0.mid_f64() - 37f64.ln()).abs() < 1e-14);
        assert!(n.log_nuns.is_exact() && n.log_nuns.mid_f64() == 0.0);
        let n = conductor_norms(&min([0, 0, 0, -1, 0]), 128).unwrap();
        assert!((n.log_nuns.mid_f64() - 2f64.ln()).abs() < 1e-14);
        assert_eq!(n.log_nst.mid_f64(), 0.0);
    }

    #[test]
    fn empty_product_has_zero_log() {
        let z = log_of_product(std::iter::empty(), 128).unwrap();
        assert!(z.is_exact() && z.mid_f64() == 0.0);
    }
}

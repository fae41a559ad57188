//! Stable Faltings height of an elliptic curve over the rationals and the
//! injectivity diameter of its period lattice.

use super::modular::log_modular_discriminant_bits;
use super::{periods, reduce_tau, AnalyticError, Complex, ErrReal, TauPoint};
use crate::curve::MinimalModelResult;
use crate::verdict::Check;
use num_bigint::BigInt;
use num_traits::Signed;

#[derive(Debug, Clone)]
pub struct FaltingsReport {
    pub curve_label: String,
    pub tau: TauPoint,
    /// log |Delta(tau)|
    pub log_mod_disc: ErrReal,
    pub hf_plus: ErrReal,
    /// rho^-2, equal to Im tau for reduced tau.
    pub rho_sq_inv: ErrReal,
    /// First generator of the reduced basis: the lattice is omega1 (Z + tau Z).
    pub omega1: Complex,
    pub log_abs_disc: ErrReal,
    pub bits: u32,
}

impl FaltingsReport {
    /// h_F = h_F+ - (1/2) log(2 pi^2).
    pub fn hf_classical(&self) -> ErrReal {
        let p = self.hf_plus.prec();
        let pi = ErrReal::pi(p);
        let c = pi.sqr().mul_i64(2).log().expect("2 pi^2 > 0").mul_pow2(-1);
        self.hf_plus.sub(&c)
    }

    /// log|disc_min| + 12 log|omega1| - 12 log(2 pi) - log|Delta(tau)|,
    /// which vanishes for a correct period lattice.
    pub fn discriminant_identity_residual(&self) -> Result<ErrReal, AnalyticError> {
        let p = self.bits;
        let log_2pi = ErrReal::pi(p).mul_pow2(1).log()?;
        Ok(self
            .log_abs_disc
            .add(&self.omega1.log_abs()?.mul_i64(12))
            .sub(&log_2pi.mul_i64(12))
            .sub(&self.log_mod_disc))
    }
}

fn log_abs_int(v: &BigInt, prec: u32) -> Result<ErrReal, AnalyticError> {
    ErrReal::from_bigint(&v.abs(), prec).log()
}

/// All Faltings quantities at a fixed working precision.
pub fn faltings_height_at(min: &MinimalModelResult, label: &str, prec: u32) -> Result<FaltingsReport, AnalyticError> {
    let lat = periods(&min.curve, prec)?;
    let tau = reduce_tau(&lat.tau()?)?;
    // The reduced basis is (a w2 + b w1, c w2 + d w1), so w1' = (c tau + d) w1.
    let omega1 = tau.unimodular.automorphy(&lat.tau()?).mul(&lat.omega1);
    let log_mod_disc = log_modular_discriminant_bits(&tau, prec)?;
    let log_abs_disc = log_abs_int(&min.disc_min, prec)?;
    let six_log = tau.im.mul_pow2(1).log()?.mul_i64(6);
    let hf_plus = log_abs_disc.sub(&log_mod_disc).sub(&six_log).div_i64(12);
    Ok(FaltingsReport {
        curve_label: label.to_string(),
        rho_sq_inv: tau.im.clone(),
        tau,
        log_mod_disc,
        hf_plus,
        omega1,
        log_abs_disc,
        bits: prec,
    })
}

/// Faltings height with radius at most `tol`, doubling the working
/// precision from 128 bits up to `max_bits`.
pub fn faltings_height(
    min: &MinimalModelResult,
    label: &str,
    tol: f64,
    max_bits: u32,
) -> Result<FaltingsReport, AnalyticError> {
    let mut prec = 128;
    let mut last = AnalyticError::PrecisionExhausted { bits: prec };
    while prec <= max_bits {
        match faltings_height_at(min, label, prec) {
            Ok(r) if r.hf_plus.err_f64() <= tol => return Ok(r),
            Ok(_) => last = AnalyticError::PrecisionExhausted { bits: prec },
            Err(AnalyticError::IntervalContainsZero) => return Err(AnalyticError::IntervalContainsZero),
            Err(e) => last = e,
        }
        prec *= 2;
    }
    Err(last)
}

/// rho = 1 / sqrt(Im tau) for reduced tau.
pub fn injectivity_diameter(tau: &TauPoint) -> Result<ErrReal, AnalyticError> {
    tau.im.sqrt()?.inv()
}

/// rho^-2 <= 16 h_F+ + 39, with slack 16 h_F+ + 39 - rho^-2.
pub fn matrix_lemma_check(report: &FaltingsReport) -> Check {
    let p = report.hf_plus.prec();
    let slack = report
        .hf_plus
        .mul_i64(16)
        .add(&ErrReal::from_i64(39, p))
        .sub(&report.rho_sq_inv);
    Check::from_slack(slack)
}

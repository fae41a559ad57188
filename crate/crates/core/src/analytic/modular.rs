//! log |Delta(tau)| from the product q prod (1 - q^n)^24.

use super::mag::f64_parts;
use super::{AnalyticError, Complex, ErrReal, Mag, TauPoint};
use num_bigint::BigInt;

/// Number of product terms and the tail bound for |q| <= `qabs`, so that
/// 24 |q|^(N+1) / (1 - |q|)^2 <= 2^-bits.
fn truncation(qabs: f64, bits: u32) -> Option<(usize, Mag)> {
    if !(qabs < 0.5) {
        return None;
    }
    let target = -(bits as f64) * std::f64::consts::LN_2;
    let lq = qabs.ln();
    // log 24 - 2 log(1 - |q|) <= log 24 + 2 for |q| < 1/2.
    let n = ((target - 24f64.ln() - 2.0) / lq).ceil().max(1.0) as usize;
    let base = Mag::from_f64(qabs);
    let mut pow = base;
    for _ in 0..n {
        pow = pow.mul(&base);
    }
    // (1 - |q|)^2 from below; the f64 slack covers its own rounding.
    let g2 = (1.0 - qabs) * (1.0 - qabs) * (1.0 - 1e-12);
    let (m, e) = f64_parts(g2);
    let tail = pow.mul_u64(24).div(&Mag::from_dyadic_down(&BigInt::from(m), e))?;
    Some((n, tail))
}

fn log_abs_delta(z: &Complex, bits: u32) -> Result<ErrReal, AnalyticError> {
    let p = z.prec();
    let exhausted = AnalyticError::PrecisionExhausted { bits: p };
    if !z.im.is_positive() {
        return Err(exhausted);
    }
    let two_pi = ErrReal::pi(p).mul_pow2(1);
    let lead = two_pi.mul(&z.im).neg();
    let modulus = lead.exp()?;
    let (s, c) = two_pi.mul(&z.re).sin_cos()?;
    let q = Complex::new(modulus.mul(&c), modulus.mul(&s));
    let qabs = modulus.abs_upper().to_f64_up();
    let (n, tail) = truncation(qabs, bits).ok_or(exhausted)?;
    let one = Complex::from_real(ErrReal::one(p));
    let mut qn = q.clone();
    let mut sum = ErrReal::zero(p);
    for _ in 0..n {
        sum = sum.add(&one.sub(&qn).norm_sqr().log()?);
        qn = qn.mul(&q);
    }
    // 24 * sum log|1 - q^n| = 12 * sum log|1 - q^n|^2
    Ok(lead.add(&sum.mul_i64(12)).add_err(tail))
}

/// log |Delta(tau)| with a truncation tail below 2^-bits, at the precision
/// of `tau`.
pub fn log_modular_discriminant_bits(tau: &TauPoint, bits: u32) -> Result<ErrReal, AnalyticError> {
    log_abs_delta(&tau.as_complex(), bits)
}

/// log |Delta(tau)| with radius at most `tol`.
pub fn log_modular_discriminant(tau: &TauPoint, tol: f64) -> Result<ErrReal, AnalyticError> {
    let bits = (-(tol / 2.0).log2()).ceil().max(1.0) as u32;
    let v = log_abs_delta(&tau.as_complex(), bits)?;
    if !(v.err_f64() <= tol) {
        return Err(AnalyticError::PrecisionExhausted { bits: tau.re.prec() });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::super::tau_point;
    use super::*;

    // 24 log(Gamma(1/4) / (2 pi^(3/4))), 60-digit evaluation.
    const LOG_DELTA_I: f64 = -6.328_129_685_974_031_583_700_612_674_078;

    fn tp(re: f64, im: f64, p: u32) -> TauPoint {
        tau_point(ErrReal::from_f64(re, p), ErrReal::from_f64(im, p)).unwrap()
    }

    #[test]
    fn value_at_i() {
        let v = log_modular_discriminant(&tp(0.0, 1.0, 256), 1e-60).unwrap();
        assert!((v.mid_f64() - LOG_DELTA_I).abs() < 1e-14);
        assert!(v.err_f64() <= 1e-60);
        let lo = ErrReal::from_f64(LOG_DELTA_I, 256).add_err(Mag::from_f64(1e-15));
        assert!(v.overlaps(&lo));
    }

    #[test]
    fn one_term_dominance_at_10i() {
        let p = 192;
        let v = log_modular_discriminant(&tp(0.0, 10.0, p), 1e-40).unwrap();
        let lead = ErrReal::pi(p).mul_i64(-20);
        let delta = v.sub(&lead).abs_upper().to_f64_up();
        assert!(delta <= 25.0 * (-20.0 * std::f64::consts::PI).exp());
    }

    #[test]
    fn decreases_with_height() {
        let a = log_modular_discriminant(&tp(0.0, 2.0, 128), 1e-20).unwrap();
        let b = log_modular_discriminant(&tp(0.0, 3.0, 128), 1e-20).unwrap();
        assert!(b.certainly_lt(&a));
    }

    #[test]
    fn periodic_in_real_part() {
        let p = 160;
        let t = tp(0.25, 1.3, p);
        let shifted = TauPoint {
            re: t.re.add(&ErrReal::one(p)),
            ..t.clone()
        };
        let a = log_modular_discriminant(&t, 1e-30).unwrap();
        let b = log_modular_discriminant(&shifted, 1e-30).unwrap();
        assert!(a.overlaps(&b));
    }
}

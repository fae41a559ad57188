//! Explicit constants of the height-conductor inequalities and the
//! Mordell-Weil rank bound, as exact rationals where they fit and as
//! exponent towers otherwise.

mod tower;

pub use tower::{tower_compare, BoundsError, TowerMagnitude, TOWER_PREC};

use crate::analytic::ErrReal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Rationals of at most this many bits are kept exactly.
const EXACT_BITS: u64 = 1 << 16;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn log_int(n: &BigInt) -> ErrReal {
    ErrReal::from_bigint(n, TOWER_PREC).log().expect("positive")
}

/// (12g)^(-12 g^(12 g^(k g))) for k = 4 (Theorem 1.1) or k = 3 (the
/// semi-stable constant).
fn inverse_tower_power(g: u32, k: u32) -> TowerMagnitude {
    assert!(g >= 1, "dimension must be positive");
    let gb = BigInt::from(g);
    let base = BigInt::from(12 * g);
    // K = 12 g^(k g) exactly; the exponent is E = 12 g^K.
    let big_k = BigInt::from(12) * num_traits::pow(gb.clone(), (k * g) as usize);
    if let Some(e) = tower::small_power(&gb, &big_k, 64).map(|p| p * 12) {
        if let Some(m) = tower::small_power(&base, &e, EXACT_BITS) {
            return TowerMagnitude::from_rational(&BigRational::new(BigInt::one(), m));
        }
    }
    // log(E log(12g)) = log 12 + K log g + log log(12g)
    let ll = log_int(&BigInt::from(12))
        .add(&log_int(&gb).mul_bigint(&big_k))
        .add(&log_int(&base).log().expect("log(12g) > 0"));
    TowerMagnitude::from_tower(1, true, 2, ll)
}

/// (c, c0) with c = (12g)^(-12 g^(12 g^(4g))) and c0 = -1/c.
pub fn thm11_constants(g: u32) -> (TowerMagnitude, TowerMagnitude) {
    let c = inverse_tower_power(g, 4);
    let c0 = c.recip().neg();
    (c, c0)
}

/// (c1, c2, c3) with c1 = c/17, c2 = 1/17, c3 = -1/c1.
pub fn cor12_constants(g: u32) -> (TowerMagnitude, TowerMagnitude, TowerMagnitude) {
    let (c, _) = thm11_constants(g);
    let c1 = c.scale(&rat(1, 17));
    let c3 = c1.recip().neg();
    (c1, TowerMagnitude::from_rational(&rat(1, 17)), c3)
}

/// (c5, c6) for semi-stable abelian varieties; for jacobians (1/12, 0).
pub fn prop33_constants(g: u32, jacobian: bool) -> (TowerMagnitude, TowerMagnitude) {
    assert!(g >= 1, "dimension must be positive");
    if jacobian {
        return (TowerMagnitude::from_rational(&rat(1, 12)), TowerMagnitude::zero());
    }
    let c5 = inverse_tower_power(g, 3);
    let c6 = c5.recip().neg();
    (c5, c6)
}

/// (c16, c17) = (c5 / 12^(4g^2), c6); for jacobians (1/12^(4g^2+1), 0).
pub fn prop36_constants(g: u32, jacobian: bool) -> (TowerMagnitude, TowerMagnitude) {
    let (c5, c6) = prop33_constants(g, jacobian);
    let d = BigRational::from_integer(num_traits::pow(BigInt::from(12), (4 * g * g) as usize));
    (c5.scale(&d.recip()), c6)
}

/// c4 = (12g)^(12 g^(12 g^(4g))) d^3.
pub fn cor13_headline_constant(g: u32, d: u32) -> TowerMagnitude {
    let (c, _) = thm11_constants(g);
    let d3 = BigRational::from_integer(BigInt::from(d).pow(3));
    c.recip().scale(&d3)
}

#[derive(Debug, Clone)]
pub struct RankBoundInputs {
    pub g: u32,
    pub d: u32,
    pub log_n0: ErrReal,
    /// log |disc K|, zero over the rationals.
    pub log_abs_disc_k: ErrReal,
}

impl RankBoundInputs {
    pub fn over_q(g: u32, log_n0: ErrReal) -> RankBoundInputs {
        let p = log_n0.prec();
        RankBoundInputs {
            g,
            d: 1,
            log_n0,
            log_abs_disc_k: ErrReal::zero(p),
        }
    }
}

/// m_K <= 4 g^3 d^2 2^(8g^2) log N0 + g d 2^(8g^2) (log|disc K| + g^2 d^2 log 16).
pub fn rank_bound(inputs: &RankBoundInputs) -> ErrReal {
    let (g, d) = (BigInt::from(inputs.g), BigInt::from(inputs.d));
    let p = inputs.log_n0.prec().max(64);
    let two8 = BigInt::one() << (8 * inputs.g * inputs.g) as usize;
    let a = BigInt::from(4) * g.pow(3) * d.pow(2) * &two8;
    let b = &g * &d * &two8;
    let log16 = ErrReal::from_i64(16, p).log().expect("log 16");
    inputs.log_n0.mul_bigint(&a).add(
        &inputs
            .log_abs_disc_k
            .add(&log16.mul_bigint(&(g.pow(2) * d.pow(2))))
            .mul_bigint(&b),
    )
}

/// The jacobian form 48 g^3 d^3 2^(8g^2) 12^(4g^2) max{1, hF+}
/// + g d 2^(8g^2) log|disc K| + g^3 d^3 2^(8g^2) log 16.
pub fn rank_bound_jacobian(inputs: &RankBoundInputs, hf_plus: &ErrReal) -> ErrReal {
    let (g, d) = (BigInt::from(inputs.g), BigInt::from(inputs.d));
    let p = hf_plus.prec().max(64);
    let two8 = BigInt::one() << (8 * inputs.g * inputs.g) as usize;
    let twelve = num_traits::pow(BigInt::from(12), (4 * inputs.g * inputs.g) as usize);
    let lead = BigInt::from(48) * g.pow(3) * d.pow(3) * &two8 * twelve;
    let h = hf_plus.max(&ErrReal::one(p));
    let log16 = ErrReal::from_i64(16, p).log().expect("log 16");
    h.mul_bigint(&lead)
        .add(&inputs.log_abs_disc_k.mul_bigint(&(&g * &d * &two8)))
        .add(&log16.mul_bigint(&(g.pow(3) * d.pow(3) * &two8)))
}

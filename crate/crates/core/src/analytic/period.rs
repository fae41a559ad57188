//! Period lattices of real elliptic curves via the arithmetic-geometric mean.

use super::{AnalyticError, Complex, ErrReal, Mag};
use crate::curve::{MinimalModelResult, WeierstrassCurve};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// Generators of the lattice of the Neron differential dx/(2y + a1 x + a3).
/// `omega1` is the real period; Im(omega2/omega1) > 0.
#[derive(Debug, Clone)]
pub struct PeriodLattice {
    pub omega1: Complex,
    pub omega2: Complex,
    /// Number of real roots of 4x^3 + b2 x^2 + 2 b4 x + b6 (1 or 3).
    pub real_roots: usize,
}

impl PeriodLattice {
    pub fn tau(&self) -> Result<Complex, AnalyticError> {
        self.omega2.div(&self.omega1)
    }

    pub fn max_rad(&self) -> f64 {
        [&self.omega1.re, &self.omega1.im, &self.omega2.re, &self.omega2.im]
            .iter()
            .map(|x| x.err_f64())
            .fold(0.0, f64::max)
    }
}

struct Cubic {
    b2: ErrReal,
    b4x2: ErrReal,
    b6: ErrReal,
}

impl Cubic {
    fn eval(&self, x: &ErrReal) -> ErrReal {
        // ((4x + b2) x + 2 b4) x + b6
        x.mul_i64(4).add(&self.b2).mul(x).add(&self.b4x2).mul(x).add(&self.b6)
    }

    fn deriv(&self, x: &ErrReal) -> ErrReal {
        x.mul_i64(12).add(&self.b2.mul_pow2(1)).mul(x).add(&self.b4x2)
    }
}

fn rat_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Double-precision roots of X^3 - 27 c4 X - 54 c6, mapped back through
/// x = (X - 3 b2)/36, sorted in decreasing order.
fn seed_roots(curve: &WeierstrassCurve) -> Vec<f64> {
    let c4 = rat_f64(curve.c4());
    let c6 = rat_f64(curve.c6());
    let b2 = rat_f64(curve.b2());
    let p = -27.0 * c4;
    let q = -54.0 * c6;
    let mut xs: Vec<f64> = if curve.disc().is_positive() {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let th = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (th - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect()
    } else {
        let d = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        vec![(-q / 2.0 + d).cbrt() + (-q / 2.0 - d).cbrt()]
    };
    for x in xs.iter_mut() {
        *x = (*x - 3.0 * b2) / 36.0;
    }
    xs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    xs
}

/// Certified real roots of the 2-torsion cubic, decreasing.
pub(crate) fn real_roots(curve: &WeierstrassCurve, prec: u32) -> Result<Vec<ErrReal>, AnalyticError> {
    let exhausted = AnalyticError::PrecisionExhausted { bits: prec };
    let cubic = Cubic {
        b2: ErrReal::from_rational(curve.b2(), prec),
        b4x2: ErrReal::from_rational(curve.b4(), prec).mul_i64(2),
        b6: ErrReal::from_rational(curve.b6(), prec),
    };
    let mut out: Vec<ErrReal> = Vec::new();
    for seed in seed_roots(curve) {
        if !seed.is_finite() {
            return Err(exhausted);
        }
        let mut x = ErrReal::from_f64(seed, prec);
        for _ in 0..200 {
            let fx = cubic.eval(&x).mid();
            let dfx = cubic.deriv(&x).mid();
            let step = match fx.div(&dfx) {
                Ok(s) => s.mid(),
                Err(_) => break,
            };
            x = x.sub(&step).mid();
            let scale = x.abs_upper().log2_ceil().max(0);
            if step.is_exact() && step.mid_f64() == 0.0 {
                break;
            }
            if step.abs_upper().log2_ceil() < scale - prec as i64 + 4 {
                break;
            }
        }
        let scale = x.abs_upper().log2_ceil().max(0);
        let mut k = scale - prec as i64 + 12;
        let mut certified = None;
        while k < scale - 20 {
            let eps = ErrReal::from_dyadic(1.into(), k, prec);
            let lo = x.sub(&eps);
            let hi = x.add(&eps);
            let (flo, fhi) = (cubic.eval(&lo.mid()), cubic.eval(&hi.mid()));
            if (flo.is_negative() && fhi.is_positive()) || (flo.is_positive() && fhi.is_negative()) {
                certified = Some(ErrReal::from_endpoints(lo.lower(), hi.upper(), prec));
                break;
            }
            k += 8;
        }
        out.push(certified.ok_or(exhausted.clone())?);
    }
    for w in out.windows(2) {
        if !w[0].certainly_gt(&w[1]) {
            return Err(exhausted);
        }
    }
    Ok(out)
}

/// AGM(a, b) for positive balls.
///
/// The iteration runs on the midpoints; for exact inputs the limit lies
/// between the two final iterates. Input radii r enter through homogeneity
/// and monotonicity: |M(a', b') - M(a, b)| <= M(a, b) r / min(a, b).
pub fn agm(a: &ErrReal, b: &ErrReal) -> Result<ErrReal, AnalyticError> {
    let prec = a.prec().max(b.prec());
    if !a.is_positive() || !b.is_positive() {
        return Err(AnalyticError::IntervalContainsZero);
    }
    let r = Mag::max(&a.rad(), &b.rad());
    let lo = std::cmp::min(a.abs_lower(), b.abs_lower());
    let hi = Mag::max(&a.abs_upper(), &b.abs_upper());
    let (mut x, mut y) = (a.mid(), b.mid());
    for _ in 0..(4 * prec as usize + 64) {
        let x2 = x.add(&y).mul_pow2(-1);
        let y2 = x.mul(&y).sqrt()?;
        x = x2;
        y = y2;
        let gap = x.mid().sub(&y.mid()).abs_upper();
        if gap.is_zero() || gap <= Mag::max(&x.rad(), &y.rad()) {
            let m = x.hull(&y);
            let spread = hi.mul(&r).div(&lo).ok_or(AnalyticError::IntervalContainsZero)?;
            return Ok(m.add_err(spread));
        }
    }
    Err(AnalyticError::PrecisionExhausted { bits: prec })
}

/// Period lattice of any real Weierstrass model at `prec` working bits.
pub fn periods(curve: &WeierstrassCurve, prec: u32) -> Result<PeriodLattice, AnalyticError> {
    let wp = prec + 32;
    let roots = real_roots(curve, wp)?;
    let pi = ErrReal::pi(wp);
    let zero = ErrReal::zero(wp);
    let (omega1, omega2) = if roots.len() == 3 {
        let (e1, e2, e3) = (&roots[0], &roots[1], &roots[2]);
        let s13 = e1.sub(e3).sqrt()?;
        let w1 = pi.div(&agm(&s13, &e1.sub(e2).sqrt()?)?)?;
        let w2 = pi.div(&agm(&s13, &e2.sub(e3).sqrt()?)?)?;
        (Complex::from_real(w1), Complex::new(zero, w2))
    } else {
        let e1 = &roots[0];
        let b2 = ErrReal::from_rational(curve.b2(), wp);
        let b4 = ErrReal::from_rational(curve.b4(), wp);
        let a = e1.mul_i64(3).add(&b2.mul_pow2(-2));
        let beta = e1
            .sqr()
            .mul_i64(3)
            .add(&b2.mul(e1).mul_pow2(-1))
            .add(&b4.mul_pow2(-1))
            .sqrt()?;
        let two_sqrt_beta = beta.sqrt()?.mul_pow2(1);
        let w1 = pi
            .mul_pow2(1)
            .div(&agm(&two_sqrt_beta, &beta.mul_pow2(1).add(&a).sqrt()?)?)?;
        let w2im = pi.div(&agm(&two_sqrt_beta, &beta.mul_pow2(1).sub(&a).sqrt()?)?)?;
        let w2 = Complex::new(w1.mul_pow2(-1).neg(), w2im);
        (Complex::from_real(w1), w2)
    };
    let shrink = |z: Complex| Complex::new(z.re.with_prec(prec), z.im.with_prec(prec));
    Ok(PeriodLattice {
        omega1: shrink(omega1),
        omega2: shrink(omega2),
        real_roots: roots.len(),
    })
}

/// Working precision whose rounding noise sits well below `tol`.
pub fn bits_for_tol(tol: f64) -> u32 {
    let t = if tol > 0.0 { -tol.log2() } else { 0.0 };
    (t.ceil() as u32 + 64).max(128)
}

/// Period lattice of the minimal model with radii at most `tol`.
pub fn period_lattice(min: &MinimalModelResult, tol: f64) -> Result<PeriodLattice, AnalyticError> {
    let prec = bits_for_tol(tol);
    let lat = periods(&min.curve, prec)?;
    if !(lat.max_rad() <= tol) {
        return Err(AnalyticError::PrecisionExhausted { bits: prec });
    }
    Ok(lat)
}

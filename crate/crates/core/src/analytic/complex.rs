use super::{AnalyticError, ErrReal};
use std::fmt;

/// Rectangular complex ball: independent real and imaginary balls.
#[derive(Clone)]
pub struct Complex {
    pub re: ErrReal,
    pub im: ErrReal,
}

impl Complex {
    pub fn new(re: ErrReal, im: ErrReal) -> Complex {
        Complex { re, im }
    }

    pub fn from_real(re: ErrReal) -> Complex {
        let p = re.prec();
        Complex {
            re,
            im: ErrReal::zero(p),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Complex {
        Complex::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Complex::new(re, im)
    }

    pub fn mul_real(&self, r: &ErrReal) -> Complex {
        Complex::new(self.re.mul(r), self.im.mul(r))
    }

    pub fn mul_i64(&self, k: i64) -> Complex {
        Complex::new(self.re.mul_i64(k), self.im.mul_i64(k))
    }

    pub fn norm_sqr(&self) -> ErrReal {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn div(&self, o: &Complex) -> Result<Complex, AnalyticError> {
        let d = o.norm_sqr();
        let n = self.mul(&o.conj());
        Ok(Complex::new(n.re.div(&d)?, n.im.div(&d)?))
    }

    pub fn abs(&self) -> Result<ErrReal, AnalyticError> {
        self.norm_sqr().sqrt()
    }

    /// log |z|.
    pub fn log_abs(&self) -> Result<ErrReal, AnalyticError> {
        Ok(self.norm_sqr().log()?.mul_pow2(-1))
    }

    pub fn exp(&self) -> Result<Complex, AnalyticError> {
        let m = self.re.exp()?;
        let (s, c) = self.im.sin_cos()?;
        Ok(Complex::new(m.mul(&c), m.mul(&s)))
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + i({:?})", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_roundtrip() {
        let a = Complex::new(ErrReal::from_i64(3, 128), ErrReal::from_i64(-2, 128));
        let b = Complex::new(ErrReal::from_f64(0.5, 128), ErrReal::from_i64(7, 128));
        let q = a.div(&b).unwrap();
        let back = q.mul(&b);
        assert!(back.re.contains(&a.re) || back.re.overlaps(&a.re));
        assert!(back.im.overlaps(&a.im));
        assert!((back.re.mid_f64() - 3.0).abs() < 1e-30);
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let z = Complex::new(ErrReal::zero(128), ErrReal::pi(128));
        let e = z.exp().unwrap();
        assert!(e.re.contains(&ErrReal::from_i64(-1, 128)));
        assert!(e.im.contains(&ErrReal::zero(128)));
    }
}

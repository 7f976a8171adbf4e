//! Rectangular complex numbers over [`Real`].

use super::{pi, Real};

/// Complex number at a fixed working precision.
#[derive(Clone, Debug)]
pub struct Cplx {
    pub re: Real,
    pub im: Real,
}

impl Cplx {
    pub fn new(re: Real, im: Real) -> Self {
        Cplx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cplx { re: Real::zero(prec), im: Real::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Cplx { re: Real::from_i64(1, prec), im: Real::zero(prec) }
    }

    pub fn i(prec: u32) -> Self {
        Cplx { re: Real::zero(prec), im: Real::from_i64(1, prec) }
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Cplx { re, im: Real::zero(p) }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Cplx::from_real(Real::from_i64(v, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Cplx { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Cplx { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> Self {
        Cplx { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, o: &Cplx) -> Self {
        Cplx { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Cplx) -> Self {
        Cplx { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &Cplx) -> Self {
        Cplx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_real(&self, r: &Real) -> Self {
        Cplx { re: self.re.mul(r), im: self.im.mul(r) }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Cplx { re: self.re.mul_i64(k), im: self.im.mul_i64(k) }
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        Cplx { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn div(&self, o: &Cplx) -> Self {
        let d = o.norm_sqr();
        assert!(!d.is_zero(), "complex division by zero");
        let n = self.mul(&o.conj());
        Cplx { re: n.re.div(&d), im: n.im.div(&d) }
    }

    pub fn recip(&self) -> Self {
        Cplx::one(self.prec()).div(self)
    }

    /// Principal square root (branch cut on the negative real axis),
    /// computed algebraically.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Cplx::zero(p);
        }
        let r = self.abs();
        if self.im.is_zero() && !self.re.is_negative() {
            return Cplx::from_real(self.re.sqrt());
        }
        // u = sqrt((r + re)/2); v = im/(2u), with sign fixes for re < 0.
        let two = Real::from_i64(2, p);
        if self.re.is_negative() {
            let v_mag = r.sub(&self.re).div(&two).sqrt();
            let u = self.im.abs().div(&v_mag.mul(&two));
            let v = if self.im.is_negative() { v_mag.neg() } else { v_mag };
            Cplx { re: u, im: v }
        } else {
            let u = r.add(&self.re).div(&two).sqrt();
            let v = self.im.div(&u.mul(&two));
            Cplx { re: u, im: v }
        }
    }

    pub fn powi(&self, e: i64) -> Self {
        let p = self.prec();
        if e == 0 {
            return Cplx::one(p);
        }
        let invert = e < 0;
        let mut k = e.unsigned_abs();
        let mut base = self.with_prec(p + 64);
        let mut acc = Cplx::one(p + 64);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        let acc = if invert { acc.recip() } else { acc };
        acc.with_prec(p)
    }

    /// Complex exponential.
    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Cplx { re: m.mul(&c), im: m.mul(&s) }
    }

    /// exp(2 pi i z); the workhorse for q = e(tau).
    pub fn exp_2pi_i(z: &Cplx) -> Self {
        let p = z.prec();
        let two_pi = pi(p + 32).mul_pow2(1);
        Cplx { re: z.im.neg().mul(&two_pi).with_prec(p + 32), im: z.re.mul(&two_pi).with_prec(p + 32) }
            .exp()
            .with_prec(p)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let r = self.norm_sqr().ln().mul_pow2(-1);
        let theta = self.im.atan2(&self.re);
        Cplx { re: r, im: theta }
    }

    /// self^(n/2) for integer n, using the principal square root.
    pub fn pow_half(&self, n: i64) -> Self {
        if n % 2 == 0 {
            self.powi(n / 2)
        } else {
            self.powi(n.div_euclid(2)).mul(&self.sqrt())
        }
    }

    pub fn to_string_digits(&self, digits: usize) -> String {
        format!("{} + {}*I", self.re.to_decimal(digits), self.im.to_decimal(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> Real {
        Real::from_f64(v, 192)
    }

    #[test]
    fn field_ops() {
        let a = Cplx::new(r(3.0), r(4.0));
        assert!((a.abs().to_f64() - 5.0).abs() < 1e-40);
        let b = Cplx::new(r(-1.5), r(0.25));
        let q = a.div(&b);
        let back = q.mul(&b);
        assert!(back.sub(&a).abs().to_f64() < 1e-40);
        assert!(a.mul(&a.recip()).sub(&Cplx::one(192)).abs().to_f64() < 1e-40);
    }

    #[test]
    fn sqrt_branches() {
        for (x, y) in [(2.0, 3.0), (-2.0, 3.0), (-2.0, -3.0), (2.0, -3.0), (-4.0, 0.0)] {
            let z = Cplx::new(r(x), r(y));
            let s = z.sqrt();
            assert!(s.mul(&s).sub(&z).abs().to_f64() < 1e-40, "sqrt({}, {})", x, y);
            // principal branch: Re >= 0
            assert!(!s.re.is_negative() || s.re.abs().to_f64() < 1e-40);
        }
    }

    #[test]
    fn exp_2pi_i_periodicity() {
        // e(i) = e^(-2 pi); e(1/2 + i) = -e^(-2 pi)
        let z1 = Cplx::new(r(0.0), r(1.0));
        let q1 = Cplx::exp_2pi_i(&z1);
        assert!((q1.re.to_f64() - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-15);
        assert!(q1.im.abs().to_f64() < 1e-40);
        let z2 = Cplx::new(r(0.5), r(1.0));
        let q2 = Cplx::exp_2pi_i(&z2);
        assert!(q2.add(&q1).abs().to_f64() < 1e-40);
    }

    #[test]
    fn pow_half_consistency() {
        let z = Cplx::new(r(1.3), r(0.7));
        let a = z.pow_half(5);
        let b = z.powi(2).mul(&z.sqrt());
        assert!(a.sub(&b).abs().to_f64() < 1e-40);
        let c = z.pow_half(4);
        assert!(c.sub(&z.powi(2)).abs().to_f64() < 1e-40);
    }
}

//! Exact cyclotomic numbers: elements of Q(zeta_n) on the power basis
//! 1, zeta, ..., zeta^(phi(n)-1), reduced modulo the n-th cyclotomic
//! polynomial.
//!
//! All intermediate arithmetic is exact; the complex embedding is applied
//! only at numeric boundaries (oracles, period evaluation). Elements of
//! different orders are promoted to the lcm order on demand, so mixed
//! arithmetic "just works" for the small conductors this crate deals with.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::bigfloat::{pi, Cplx, Real};

/// Coefficients of the n-th cyclotomic polynomial (monic, degree phi(n)).
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return v.clone();
    }
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact division.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in arith::divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_poly(d);
        num = poly_div_exact_int(&num, &phi_d);
    }
    cache.lock().unwrap().insert(n, num.clone());
    num
}

/// Exact division of integer polynomials (remainder must vanish).
fn poly_div_exact_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor must be monic");
    let da = rem.len() - 1;
    assert!(da >= db);
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        q[i] = c.clone();
        for j in 0..=db {
            rem[i + j] -= &c * &b[j];
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    q
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element of the cyclotomic field Q(zeta_order).
#[derive(Clone, Debug)]
pub struct CycloNum {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CycloNum {
    pub fn zero() -> Self {
        CycloNum { order: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        CycloNum { order: 1, coeffs: vec![BigRational::one()] }
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycloNum { order: 1, coeffs: vec![r] }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_rational(rat(v))
    }

    /// Construct from explicit power-basis coordinates (length phi(order)).
    pub fn from_coeffs(order: u64, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len() as u64, arith::euler_phi(order));
        CycloNum { order, coeffs }
    }

    /// zeta_n^k.
    pub fn zeta(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as u64;
        let phi = arith::euler_phi(n) as usize;
        let mut poly = vec![BigRational::zero(); n as usize];
        poly[k as usize] = BigRational::one();
        let coeffs = reduce_mod_cyclotomic(poly, n, phi);
        CycloNum { order: n, coeffs }
    }

    /// The root of unity e(num/den) as an element of order den.
    pub fn root_of_unity(num: i64, den: u64) -> Self {
        Self::zeta(den, num)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.sub(&CycloNum::one()).is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if this element lies in Q.
    ///
    /// Note this only inspects the power-basis coordinates; rationals hiding
    /// in a larger field (e.g. zeta_5 + ... + zeta_5^4 = -1) are detected
    /// because reduction mod Phi_n keeps coordinates canonical.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Move to the field of the given order (current order must divide it).
    pub fn promote(&self, m: u64) -> Self {
        if m == self.order {
            return self.clone();
        }
        assert!(m % self.order == 0, "promote: {} does not divide {}", self.order, m);
        let step = (m / self.order) as usize;
        let mut poly = vec![BigRational::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        let phi = arith::euler_phi(m) as usize;
        CycloNum { order: m, coeffs: reduce_mod_cyclotomic(poly, m, phi) }
    }

    /// Shrink to order 1 if the element is rational.
    pub fn normalized(self) -> Self {
        if self.order > 1 && self.is_rational() {
            CycloNum { order: 1, coeffs: vec![self.coeffs[0].clone()] }
        } else {
            self
        }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self, u64) {
        let m = arith::lcm(a.order, b.order);
        (a.promote(m), b.promote(m), m)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, m) = Self::common(self, other);
        let coeffs = a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| x + y).collect();
        CycloNum { order: m, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloNum { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b, m) = Self::common(self, other);
        let phi = a.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * phi];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        CycloNum { order: m, coeffs: reduce_mod_cyclotomic(prod, m, phi) }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        CycloNum { order: self.order, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul_rational(&rat(k))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = CycloNum::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Galois action zeta -> zeta^a (a coprime to the order).
    pub fn galois(&self, a: u64) -> Self {
        let n = self.order;
        let a = a % n;
        assert!(arith::gcd(a.max(1), n) == 1, "galois exponent not coprime");
        let mut poly = vec![BigRational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let idx = (j as u64 * a % n) as usize;
                poly[idx] += c;
            }
        }
        let phi = self.coeffs.len();
        CycloNum { order: n, coeffs: reduce_mod_cyclotomic(poly, n, phi) }
    }

    /// Complex conjugation (zeta -> zeta^(-1)).
    pub fn conj(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        self.galois(self.order - 1)
    }

    /// Multiplicative inverse via extended Euclid against Phi_n.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero cyclotomic number");
        if let Some(r) = self.as_rational() {
            return CycloNum::from_rational(r.recip());
        }
        let n = self.order;
        let phi: Vec<BigRational> =
            cyclotomic_poly(n).into_iter().map(BigRational::from_integer).collect();
        let (g, s) = poly_half_xgcd(&self.coeffs, &phi);
        assert!(poly_deg(&g) == Some(0), "element not invertible");
        let ginv = g[0].recip();
        let mut coeffs: Vec<BigRational> = poly_rem(&s, &phi);
        for c in coeffs.iter_mut() {
            *c *= &ginv;
        }
        coeffs.resize(self.coeffs.len(), BigRational::zero());
        CycloNum { order: n, coeffs }
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Complex embedding zeta_n -> e^(2 pi i / n) at the given precision.
    pub fn embed(&self, prec: u32) -> Cplx {
        let work = prec + 32;
        let mut acc = Cplx::zero(work);
        let two_pi = pi(work).mul_pow2(1);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle =
                two_pi.mul(&Real::from_u64(j as u64, work)).div(&Real::from_u64(self.order, work));
            let (s, co) = angle.sin_cos();
            let w = Real::from_ratio(c, work);
            acc = acc.add(&Cplx::new(co.mul(&w), s.mul(&w)));
        }
        acc.with_prec(prec)
    }

    /// Exact field norm down to Q (product of all Galois conjugates).
    pub fn norm(&self) -> BigRational {
        self.norm_in(self.order)
    }

    /// Norm from Q(zeta_field_order) down to Q; the element is promoted
    /// first, so rationals get raised to the field degree as they should.
    pub fn norm_in(&self, field_order: u64) -> BigRational {
        let x = self.promote(arith::lcm(self.order, field_order));
        let n = x.order;
        if n == 1 {
            return x.coeffs[0].clone();
        }
        let mut acc = CycloNum::one();
        for a in 1..=n {
            if arith::gcd(a, n) == 1 {
                acc = acc.mul(&x.galois(a));
            }
        }
        acc.as_rational().expect("norm must be rational")
    }
}

impl std::fmt::Display for CycloNum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})*z{}^{}", c, self.order, j)?;
            }
        }
        Ok(())
    }
}

/// Reduce a coefficient vector (any degree) mod Phi_n, returning exactly
/// phi(n) coefficients.
fn reduce_mod_cyclotomic(mut poly: Vec<BigRational>, n: u64, phi: usize) -> Vec<BigRational> {
    let modulus = cyclotomic_poly(n);
    let deg_m = modulus.len() - 1;
    debug_assert_eq!(deg_m, phi);
    for i in (deg_m..poly.len()).rev() {
        let c = std::mem::replace(&mut poly[i], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        for j in 0..deg_m {
            if !modulus[j].is_zero() {
                let t = &c * BigRational::from_integer(modulus[j].clone());
                poly[i - deg_m + j] -= t;
            }
        }
    }
    poly.truncate(phi);
    poly.resize(phi, BigRational::zero());
    poly
}

pub(crate) fn poly_deg(a: &[BigRational]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = poly_deg(b).expect("rem by zero polynomial");
    let mut r: Vec<BigRational> = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &b[db];
        for j in 0..=db {
            let t = &c * &b[j];
            r[dr - db + j] -= t;
        }
        r[dr] = BigRational::zero();
    }
    r.truncate(db.max(1));
    r.resize(db.max(1), BigRational::zero());
    r
}

/// Half-extended gcd over Q[x]: returns (g, s) with s*a = g mod m and
/// g = gcd(a, m), g returned trimmed to its degree.
fn poly_half_xgcd(a: &[BigRational], m: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0: Vec<BigRational> = m.to_vec();
    let mut r1: Vec<BigRational> = a.to_vec();
    let mut s0: Vec<BigRational> = vec![BigRational::zero()];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while let Some(d1) = poly_deg(&r1) {
        let mut q = vec![BigRational::zero(); poly_deg(&r0).map_or(0, |d| d.saturating_sub(d1)) + 1];
        let mut rem = r0.clone();
        while let Some(d0) = poly_deg(&rem) {
            if d0 < d1 {
                break;
            }
            let c = &rem[d0] / &r1[d1];
            q[d0 - d1] = c.clone();
            for j in 0..=d1 {
                let t = &c * &r1[j];
                rem[d0 - d1 + j] -= t;
            }
        }
        let qs1 = poly_mul_q(&q, &s1);
        let new_s1 = poly_sub_q(&s0, &qs1);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = new_s1;
    }
    let d = poly_deg(&r0).expect("gcd vanished");
    r0.truncate(d + 1);
    (r0, s0)
}

pub(crate) fn poly_mul_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![BigRational::zero()];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

pub(crate) fn poly_sub_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// sqrt(p) for a prime p, as an exact cyclotomic number (the classical
/// quadratic Gauss sum, sign-corrected: sqrt(2) = zeta_8 + zeta_8^-1,
/// sqrt(p) = g(chi_p) for p = 1 mod 4, -i g(chi_p) for p = 3 mod 4).
pub fn sqrt_prime(p: u64) -> CycloNum {
    assert!(arith::is_prime(p), "sqrt_prime needs a prime");
    let s = if p == 2 {
        CycloNum::zeta(8, 1).add(&CycloNum::zeta(8, -1))
    } else {
        // quadratic Gauss sum sum_x (x|p) zeta_p^x
        let mut acc = CycloNum::zero();
        for x in 1..p {
            let j = arith::jacobi(x as i64, p);
            let term = CycloNum::zeta(p, x as i64);
            acc = if j == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        if p % 4 == 1 {
            acc
        } else {
            // g = i sqrt(p): multiply by -i
            acc.mul(&CycloNum::zeta(4, -1))
        }
    };
    debug_assert!(s
        .mul(&s)
        .equals(&CycloNum::from_i64(p as i64)));
    s
}

/// Continued-fraction rational reconstruction of a Real, with denominator
/// capped at 2^max_den_bits. Succeeds when the expansion hits an exact end
/// or a blown-up partial quotient (the signature of a small rational plus
/// working-precision noise).
pub fn rational_reconstruct(x: &Real, max_den_bits: u64) -> Option<BigRational> {
    let r = x.to_rational();
    let mut a = r.numer().clone();
    let mut b = r.denom().clone();
    let (mut h2, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k2, mut k1) = (BigInt::one(), BigInt::zero());
    let big_quotient_bits = 24u64;
    let mut first = true;
    loop {
        if b.is_zero() {
            return Some(BigRational::new(h1, k1));
        }
        let q = a.div_floor(&b);
        if !first && q.bits() > big_quotient_bits {
            return Some(BigRational::new(h1, k1));
        }
        let h = &q * &h1 + &h2;
        let k = &q * &k1 + &k2;
        if k.bits() > max_den_bits {
            return None;
        }
        let rem = &a - &q * &b;
        a = std::mem::replace(&mut b, rem);
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        first = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        let to_i = |v: Vec<i64>| v.into_iter().map(BigInt::from).collect::<Vec<_>>();
        assert_eq!(cyclotomic_poly(1), to_i(vec![-1, 1]));
        assert_eq!(cyclotomic_poly(2), to_i(vec![1, 1]));
        assert_eq!(cyclotomic_poly(4), to_i(vec![1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), to_i(vec![1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), to_i(vec![1, 0, -1, 0, 1]));
        // Phi_105 is the first with a coefficient of magnitude 2.
        let c105 = cyclotomic_poly(105);
        assert!(c105.iter().any(|c| c.abs() == BigInt::from(2)));
    }

    #[test]
    fn roots_of_unity() {
        for n in [1u64, 2, 3, 4, 5, 6, 8, 12, 13] {
            let z = CycloNum::zeta(n, 1);
            assert!(z.pow(n).equals(&CycloNum::one()), "zeta_{}^{} != 1", n, n);
            for k in 1..n {
                assert!(!z.pow(k).equals(&CycloNum::one()), "zeta_{} has order < {}", n, n);
            }
            assert!(z.conj().equals(&z.inv()));
        }
    }

    #[test]
    fn mixed_order_arithmetic() {
        // zeta_12^3 = i = zeta_4
        let a = CycloNum::zeta(12, 3);
        let b = CycloNum::zeta(4, 1);
        assert!(a.equals(&b.promote(12)));
        assert!(a.equals(&b));
        let sq = a.mul(&b);
        assert!(sq.equals(&CycloNum::from_i64(-1)));
    }

    #[test]
    fn inverse_and_norm() {
        let z = CycloNum::zeta(5, 1);
        let x = z.add(&CycloNum::from_i64(2)); // 2 + zeta_5
        let inv = x.inv();
        assert!(x.mul(&inv).equals(&CycloNum::one()));
        // N(2 + zeta_5) = Phi_5(-2) = 16 - 8 + 4 - 2 + 1 = 11
        assert_eq!(x.norm(), rat(11));
    }

    #[test]
    fn embedding_matches_exact() {
        // zeta_8 + zeta_8^-1 = sqrt(2)
        let z = CycloNum::zeta(8, 1).add(&CycloNum::zeta(8, -1));
        let v = z.embed(192);
        assert!(v.im.abs().to_f64() < 1e-50);
        let s2 = Real::from_i64(2, 192).sqrt();
        assert!(v.re.sub(&s2).abs().to_f64() < 1e-50);
    }

    #[test]
    fn reconstruct_small_rationals() {
        let x = Real::from_i64(22, 256).div(&Real::from_i64(7, 256));
        let r = rational_reconstruct(&x, 64).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(22), BigInt::from(7)));
        let y = Real::from_i64(-355, 256).div(&Real::from_i64(113, 256));
        let r = rational_reconstruct(&y, 64).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(-355), BigInt::from(113)));
    }
}

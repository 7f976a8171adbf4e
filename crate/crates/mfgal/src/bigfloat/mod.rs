//! Arbitrary-precision binary floating point, built on [`num_bigint`].
//!
//! A [`Real`] is `mant * 2^exp` with a signed big-integer mantissa that is
//! rounded (to nearest, ties to even) to the carried precision after every
//! operation. Transcendentals run with 64 guard bits and round once at the
//! end, so each operation is accurate to a couple of ulps; callers that
//! need certified output (period tail bounds, acceptance tolerances) work
//! at precisions far above their target tolerance, as the spec of each
//! consumer states.
//!
//! Constants (pi, ln 2, Euler's gamma) are computed on demand and cached
//! per precision bucket: pi by Machin's formula, ln 2 by atanh(1/3),
//! gamma by the Brent-McMillan AGM-free series, all classical certified
//! series with geometric tails.

mod cplx;
pub use cplx::Cplx;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sign-magnitude big float: value = mant * 2^exp, carrying `prec` bits.
#[derive(Clone, Debug)]
pub struct Real {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn bits_of(m: &BigInt) -> u64 {
    m.magnitude().bits()
}

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Real { mant: BigInt::from(v), exp: 0, prec }.rounded()
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Real { mant: BigInt::from(v), exp: 0, prec }.rounded()
    }

    pub fn from_bigint(v: BigInt, prec: u32) -> Self {
        Real { mant: v, exp: 0, prec }.rounded()
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "cannot build Real from {}", v);
        if v == 0.0 {
            return Real::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_raw = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp_raw == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_raw - 1075)
        };
        Real { mant: BigInt::from(sign * m as i64), exp: e, prec }.rounded()
    }

    /// Round a rational to `prec` bits.
    pub fn from_ratio(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Real::zero(prec);
        }
        let num = r.numer().clone();
        let den = r.denom().clone();
        // Scale numerator so the quotient carries prec + 32 significant bits.
        let shift = (prec as i64 + 32) + bits_of(&den) as i64 - bits_of(&num) as i64;
        let shift = shift.max(0) as u64;
        let q = (num << shift) / den;
        Real { mant: q, exp: -(shift as i64), prec }.rounded()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Real { mant: self.mant.clone(), exp: self.exp, prec }.rounded()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Round mantissa to `prec` bits, nearest, ties to even.
    fn rounded(mut self) -> Self {
        let b = bits_of(&self.mant);
        if b <= self.prec as u64 {
            return self;
        }
        let drop = (b - self.prec as u64) as u64;
        let neg = self.mant.is_negative();
        let mag = self.mant.magnitude().clone();
        let keep = &mag >> drop;
        let rem = mag - (&keep << drop);
        let half = BigUint::one() << (drop - 1);
        let keep = match rem.cmp(&half) {
            Ordering::Greater => keep + 1u32,
            Ordering::Equal => {
                if keep.bit(0) {
                    keep + 1u32
                } else {
                    keep
                }
            }
            Ordering::Less => keep,
        };
        self.mant = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, keep);
        self.exp += drop as i64;
        self
    }

    pub fn neg(&self) -> Self {
        Real { mant: -self.mant.clone(), exp: self.exp, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        Real { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    /// Exact scaling by 2^k.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Real { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    fn align(a: &Real, b: &Real, slack: u64) -> (BigInt, BigInt, i64) {
        // Cap the alignment shift: contributions more than prec + slack bits
        // below the larger operand round away regardless.
        let ta = a.exp + bits_of(&a.mant) as i64;
        let tb = b.exp + bits_of(&b.mant) as i64;
        let prec = a.prec.max(b.prec) as i64 + slack as i64;
        let floor_exp = ta.max(tb) - prec - 4;
        let e = a.exp.min(b.exp).max(floor_exp);
        let sh = |x: &Real| -> BigInt {
            if x.exp >= e {
                x.mant.clone() << ((x.exp - e) as u64)
            } else {
                x.mant.clone() >> ((e - x.exp) as u64)
            }
        };
        (sh(a), sh(b), e)
    }

    pub fn add(&self, other: &Real) -> Self {
        if self.is_zero() {
            return other.with_prec(self.prec.max(other.prec));
        }
        if other.is_zero() {
            return self.with_prec(self.prec.max(other.prec));
        }
        let (a, b, e) = Real::align(self, other, 64);
        Real { mant: a + b, exp: e, prec: self.prec.max(other.prec) }.rounded()
    }

    pub fn sub(&self, other: &Real) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Real) -> Self {
        Real {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
            prec: self.prec.max(other.prec),
        }
        .rounded()
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Real { mant: &self.mant * k, exp: self.exp, prec: self.prec }.rounded()
    }

    pub fn div(&self, other: &Real) -> Self {
        assert!(!other.is_zero(), "division by zero Real");
        if self.is_zero() {
            return Real::zero(self.prec.max(other.prec));
        }
        let prec = self.prec.max(other.prec);
        let shift =
            (prec as i64 + 32 + bits_of(&other.mant) as i64 - bits_of(&self.mant) as i64).max(0)
                as u64;
        let q = (self.mant.clone() << shift) / &other.mant;
        Real { mant: q, exp: self.exp - other.exp - shift as i64, prec }.rounded()
    }

    pub fn recip(&self) -> Self {
        Real::from_i64(1, self.prec).div(self)
    }

    /// Square root (value must be >= 0).
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative Real");
        if self.is_zero() {
            return self.clone();
        }
        let target = 2 * (self.prec as u64 + 32);
        let b = bits_of(&self.mant);
        let mut t = target.saturating_sub(b) as i64;
        if (self.exp - t) % 2 != 0 {
            t += 1;
        }
        let scaled = self.mant.magnitude() << (t as u64);
        let root = scaled.sqrt();
        Real {
            mant: BigInt::from_biguint(Sign::Plus, root),
            exp: (self.exp - t) / 2,
            prec: self.prec,
        }
        .rounded()
    }

    pub fn powi(&self, mut e: i64) -> Self {
        if e == 0 {
            return Real::from_i64(1, self.prec);
        }
        let invert = e < 0;
        if invert {
            e = -e;
        }
        // Square-and-multiply with ~6 extra guard bits over the result prec.
        let mut base = self.with_prec(self.prec + 64);
        let mut acc = Real::from_i64(1, self.prec + 64);
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        let acc = if invert { acc.recip() } else { acc };
        acc.with_prec(self.prec)
    }

    pub fn cmp_abs(&self, other: &Real) -> Ordering {
        self.abs().cmp(&other.abs())
    }

    pub fn cmp(&self, other: &Real) -> Ordering {
        let d = self.sub(other);
        if d.is_zero() {
            Ordering::Equal
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = bits_of(&self.mant) as i64;
        let drop = (b - 64).max(0);
        let top = (self.mant.clone() >> (drop as u64)).to_i128().unwrap() as f64;
        top * 2f64.powi((self.exp + drop) as i32)
    }

    /// value * 2^-exp ... floor to a BigInt (toward negative infinity).
    pub fn floor_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            self.mant.clone() << (self.exp as u64)
        } else {
            let sh = (-self.exp) as u64;
            (&self.mant).div_floor(&(BigInt::one() << sh))
        }
    }

    /// Nearest integer.
    pub fn round_bigint(&self) -> BigInt {
        self.add(&Real::from_ratio(
            &BigRational::new(BigInt::one(), BigInt::from(2)),
            self.prec,
        ))
        .floor_bigint()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(self.mant.clone() << (self.exp as u64))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    /// Natural exponential.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        let work = prec + 64;
        if self.is_zero() {
            return Real::from_i64(1, prec);
        }
        let x = self.with_prec(work);
        let l2 = ln2(work);
        // x = k ln2 + r, |r| <= ln2/2
        let k = x.div(&l2).round_bigint();
        let k_i64 = k.to_i64().expect("exp argument out of range");
        let r = x.sub(&l2.mul(&Real::from_bigint(k, work)));
        // Taylor for e^r
        let mut term = Real::from_i64(1, work);
        let mut sum = Real::from_i64(1, work);
        let mut n = 1i64;
        loop {
            term = term.mul(&r).div(&Real::from_i64(n, work));
            if term.is_zero()
                || (bits_of(&term.mant) as i64 + term.exp)
                    < (bits_of(&sum.mant) as i64 + sum.exp) - work as i64 - 4
            {
                break;
            }
            sum = sum.add(&term);
            n += 1;
        }
        sum.mul_pow2(k_i64).with_prec(prec)
    }

    /// Natural logarithm (value must be > 0).
    pub fn ln(&self) -> Self {
        assert!(!self.is_negative() && !self.is_zero(), "ln of non-positive Real");
        let prec = self.prec;
        let work = prec + 64;
        // self = m * 2^k with m in [1, 2)
        let b = bits_of(&self.mant) as i64;
        let k = self.exp + b - 1;
        let m = Real { mant: self.mant.clone(), exp: -(b - 1), prec: work };
        // t = (m-1)/(m+1) in [0, 1/3]; ln m = 2 atanh t
        let one = Real::from_i64(1, work);
        let t = m.sub(&one).div(&m.add(&one));
        let t2 = t.mul(&t);
        let mut term = t.clone();
        let mut sum = t.clone();
        let mut n = 3i64;
        loop {
            term = term.mul(&t2);
            let contrib = term.div(&Real::from_i64(n, work));
            if contrib.is_zero()
                || (bits_of(&contrib.mant) as i64 + contrib.exp) < -(work as i64) - 4
            {
                break;
            }
            sum = sum.add(&contrib);
            n += 2;
        }
        let ln_m = sum.mul_pow2(1);
        ln_m.add(&ln2(work).mul(&Real::from_i64(k, work))).with_prec(prec)
    }

    /// Simultaneous sine and cosine.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec;
        // Extra bits to absorb the size of the argument during reduction.
        let mag = if self.is_zero() {
            0
        } else {
            (self.exp + bits_of(&self.mant) as i64).max(0) as u32
        };
        let work = prec + 64 + mag;
        let x = self.with_prec(work);
        let half_pi = pi(work).mul_pow2(-1);
        // x = n * (pi/2) + r, |r| <= pi/4
        let n = x.div(&half_pi).round_bigint();
        let r = x.sub(&half_pi.mul(&Real::from_bigint(n.clone(), work)));
        let quadrant: i64 = (&n % 4i64).to_i64().unwrap().rem_euclid(4);
        let (s, c) = sin_cos_reduced(&r, work);
        let (s, c) = match quadrant {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        };
        (s.with_prec(prec), c.with_prec(prec))
    }

    /// Two-argument arctangent of self = y, x; result in (-pi, pi].
    pub fn atan2(&self, x: &Real) -> Self {
        let prec = self.prec.max(x.prec);
        let work = prec + 64;
        let y = self.with_prec(work);
        let x = x.with_prec(work);
        let pi_w = pi(work);
        if x.is_zero() {
            assert!(!y.is_zero(), "atan2(0, 0)");
            let h = pi_w.mul_pow2(-1);
            return if y.is_negative() { h.neg() } else { h }.with_prec(prec);
        }
        let base = atan_core(&y.abs().div(&x.abs()), work);
        let r = match (x.is_negative(), y.is_negative()) {
            (false, false) => base,
            (false, true) => base.neg(),
            (true, false) => pi_w.sub(&base),
            (true, true) => pi_w.sub(&base).neg(),
        };
        r.with_prec(prec)
    }

    /// Decimal string with the given number of significant digits,
    /// scientific notation.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let neg = self.is_negative();
        let r = self.abs().to_rational();
        // decimal exponent e10: 10^e10 <= r < 10^(e10+1)
        let ten = BigRational::from_integer(BigInt::from(10));
        let mut e10: i64 = ((self.exp as f64 + bits_of(&self.mant) as f64) * 0.30103) as i64;
        let pow10 = |k: i64| -> BigRational {
            let p = ten.pow(k.unsigned_abs() as u32 as i32);
            if k >= 0 {
                p
            } else {
                p.recip()
            }
        };
        let mut scale = pow10(e10);
        while r < scale {
            e10 -= 1;
            scale = pow10(e10);
        }
        while r >= scale * &ten {
            e10 += 1;
            scale = pow10(e10);
        }
        let scaled = &r / pow10(e10 - digits as i64 + 1);
        let int = scaled.round().to_integer();
        let s = int.to_string();
        let s = if s.len() > digits { s[..digits].to_string() } else { s };
        let mantissa = if digits > 1 {
            format!("{}.{}", &s[..1], &s[1..])
        } else {
            s
        };
        format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, e10)
    }
}

fn sin_cos_reduced(r: &Real, work: u32) -> (Real, Real) {
    // Taylor on |r| <= pi/4.
    let r2 = r.mul(r);
    let mut term = r.clone();
    let mut sin = r.clone();
    let mut n = 1i64;
    loop {
        term = term.mul(&r2).div(&Real::from_i64(-(2 * n) * (2 * n + 1), work));
        if term.is_zero() || (bits_of(&term.mant) as i64 + term.exp) < -(work as i64) - 4 {
            break;
        }
        sin = sin.add(&term);
        n += 1;
    }
    let mut term = Real::from_i64(1, work);
    let mut cos = Real::from_i64(1, work);
    let mut n = 1i64;
    loop {
        term = term.mul(&r2).div(&Real::from_i64(-(2 * n - 1) * (2 * n), work));
        if term.is_zero() || (bits_of(&term.mant) as i64 + term.exp) < -(work as i64) - 4 {
            break;
        }
        cos = cos.add(&term);
        n += 1;
    }
    (sin, cos)
}

/// arctan for 0 <= t, by series when t <= 1/2 and angle halving otherwise.
fn atan_core(t: &Real, work: u32) -> Real {
    let half = Real::from_ratio(&BigRational::new(BigInt::one(), BigInt::from(2)), work);
    if t.cmp(&half) == Ordering::Greater {
        // atan t = 2 atan( t / (1 + sqrt(1+t^2)) )
        let one = Real::from_i64(1, work);
        let s = one.add(&t.mul(t)).sqrt().add(&one);
        return atan_core(&t.div(&s), work).mul_pow2(1);
    }
    let t2 = t.mul(t);
    let mut term = t.clone();
    let mut sum = t.clone();
    let mut n = 1i64;
    loop {
        term = term.mul(&t2).neg();
        let contrib = term.div(&Real::from_i64(2 * n + 1, work));
        if contrib.is_zero() || (bits_of(&contrib.mant) as i64 + contrib.exp) < -(work as i64) - 4 {
            break;
        }
        sum = sum.add(&contrib);
        n += 1;
    }
    sum
}

fn const_cache() -> &'static Mutex<HashMap<(u8, u32), Real>> {
    static CACHE: OnceLock<Mutex<HashMap<(u8, u32), Real>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn bucket(prec: u32) -> u32 {
    (prec + 63) / 64 * 64 + 64
}

/// arctan(1/q) scaled by 2^work, as an integer (q >= 2).
fn atan_inv_scaled(q: u64, work: u64) -> BigInt {
    let one = BigInt::one() << work;
    let q2 = BigInt::from(q) * BigInt::from(q);
    let mut power = one / q; // 2^work / q^(2j+1), truncated
    let mut sum = BigInt::zero();
    let mut j = 0u32;
    while !power.is_zero() {
        let contrib = &power / BigInt::from(2 * j + 1);
        if j % 2 == 0 {
            sum += contrib;
        } else {
            sum -= contrib;
        }
        power /= &q2;
        j += 1;
    }
    sum
}

/// pi at the given precision (Machin's formula, cached).
pub fn pi(prec: u32) -> Real {
    let b = bucket(prec);
    {
        let cache = const_cache().lock().unwrap();
        if let Some(v) = cache.get(&(0, b)) {
            return v.with_prec(prec);
        }
    }
    let work = b as u64 + 32;
    let v = atan_inv_scaled(5, work) * 16 - atan_inv_scaled(239, work) * 4;
    let val = Real { mant: v, exp: -(work as i64), prec: b }.rounded();
    const_cache().lock().unwrap().insert((0, b), val.clone());
    val.with_prec(prec)
}

/// ln 2 at the given precision (2 atanh(1/3), cached).
pub fn ln2(prec: u32) -> Real {
    let b = bucket(prec);
    {
        let cache = const_cache().lock().unwrap();
        if let Some(v) = cache.get(&(1, b)) {
            return v.with_prec(prec);
        }
    }
    let work = b as u64 + 32;
    // 2 * sum_{j>=0} (1/3)^(2j+1) / (2j+1)
    let one = BigInt::one() << work;
    let mut power: BigInt = one / 3;
    let mut sum = BigInt::zero();
    let mut j = 0u32;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * j + 1);
        power /= 9;
        j += 1;
    }
    let val = Real { mant: sum * 2, exp: -(work as i64), prec: b }.rounded();
    const_cache().lock().unwrap().insert((1, b), val.clone());
    val.with_prec(prec)
}

/// Euler-Mascheroni constant (Brent-McMillan B(n) series, cached).
///
/// gamma = A(n)/B(n) - ln n + O(e^(-4n)) with
/// A(n) = sum (n^k/k!)^2 H_k, B(n) = sum (n^k/k!)^2.
pub fn euler_gamma(prec: u32) -> Real {
    let b = bucket(prec);
    {
        let cache = const_cache().lock().unwrap();
        if let Some(v) = cache.get(&(2, b)) {
            return v.with_prec(prec);
        }
    }
    let work = b + 64;
    let n = ((b as f64 + 16.0) * std::f64::consts::LN_2 / 4.0).ceil() as i64 + 2;
    let nn = Real::from_i64(n, work);
    let mut t = Real::from_i64(1, work); // (n^k / k!)^2
    let mut h = Real::zero(work); // H_k
    let mut a = Real::zero(work);
    let mut bsum = Real::from_i64(1, work);
    let mut k = 1i64;
    loop {
        t = t.mul(&nn).mul(&nn).div(&Real::from_i64(k * k, work));
        h = h.add(&Real::from_i64(k, work).recip());
        a = a.add(&t.mul(&h));
        bsum = bsum.add(&t);
        if (bits_of(&t.mant) as i64 + t.exp) < (bits_of(&bsum.mant) as i64 + bsum.exp) - work as i64 - 8
        {
            break;
        }
        k += 1;
    }
    let val = a.div(&bsum).sub(&nn.ln()).with_prec(b);
    const_cache().lock().unwrap().insert((2, b), val.clone());
    val.with_prec(prec)
}

/// Parse a decimal string like "-1.25e-20" at the given precision.
pub fn parse_decimal(s: &str, prec: u32) -> Option<Real> {
    let s = s.trim();
    let (mant_str, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (mant_str, neg) = match mant_str.strip_prefix('-') {
        Some(rest) => (rest, true),
        None => (mant_str.strip_prefix('+').unwrap_or(mant_str), false),
    };
    let (int_part, frac_part) = match mant_str.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant_str, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits: String = format!("{}{}", int_part, frac_part);
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = digits.parse().ok()?;
    let num = if neg { -num } else { num };
    let e = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let r = if e >= 0 {
        BigRational::from_integer(num * ten.pow(e as u32))
    } else {
        BigRational::new(num, ten.pow((-e) as u32))
    };
    Some(Real::from_ratio(&r, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close_to(x: &Real, digits10: &str) {
        // digits10 is a decimal expansion "d.ddd..."; check agreement to its
        // full printed length minus 2 digits.
        let want = parse_decimal(digits10, 400).unwrap();
        let tol = parse_decimal(&format!("1e-{}", digits10.len().saturating_sub(4)), 400).unwrap();
        let diff = x.with_prec(400).sub(&want).abs();
        assert!(
            diff.cmp(&tol) == Ordering::Less,
            "|{} - {}| = {} > {}",
            x.to_decimal(40),
            digits10,
            diff.to_decimal(8),
            tol.to_decimal(4)
        );
    }

    #[test]
    fn basic_arithmetic() {
        let p = 192;
        let a = Real::from_i64(10, p);
        let b = Real::from_i64(3, p);
        let q = a.div(&b);
        let back = q.mul(&b);
        assert!(back.sub(&a).abs().to_f64() < 1e-50);
        assert_eq!(Real::from_i64(-7, p).abs().to_f64(), 7.0);
        assert_eq!(Real::from_f64(1.5, p).to_f64(), 1.5);
    }

    #[test]
    fn sqrt_and_powi() {
        let p = 256;
        let five = Real::from_i64(5, p);
        let r = five.sqrt();
        close_to(&r, "2.2360679774997896964091736687312762354406183596115257242708972454");
        let c = Real::from_i64(2, p).powi(100);
        assert_eq!(c.to_rational(), BigRational::from_integer(BigInt::from(2).pow(100)));
        let inv = Real::from_i64(2, p).powi(-3);
        assert_eq!(inv.to_f64(), 0.125);
    }

    #[test]
    fn constants_known_digits() {
        let p = 256;
        close_to(&pi(p), "3.14159265358979323846264338327950288419716939937510582097494459");
        close_to(&ln2(p), "0.693147180559945309417232121458176568075500134360255254120680009");
        close_to(
            &euler_gamma(p),
            "0.577215664901532860606512090082402431042159335939923598805767234",
        );
    }

    #[test]
    fn exp_ln_roundtrip() {
        let p = 256;
        let x = Real::from_f64(3.725, p);
        close_to(&x.exp().ln().sub(&x).add(&Real::from_i64(1, p)), "1.0");
        close_to(&Real::from_i64(1, p).exp(), "2.71828182845904523536028747135266249775724709369995957496696762");
        // exp of a large negative argument underflows gracefully
        let tiny = Real::from_i64(-500, p).exp();
        assert!(tiny.to_f64() < 1e-200);
        assert!(!tiny.is_zero());
    }

    #[test]
    fn sin_cos_identities() {
        let p = 256;
        for v in [0.1f64, 1.0, -2.7, 10.0, 123.456] {
            let x = Real::from_f64(v, p);
            let (s, c) = x.sin_cos();
            let one = s.mul(&s).add(&c.mul(&c));
            let err = one.sub(&Real::from_i64(1, p)).abs();
            assert!(err.to_f64() < 1e-70, "sin^2+cos^2 at {}: {}", v, err.to_f64());
            assert!((s.to_f64() - v.sin()).abs() < 1e-12);
            assert!((c.to_f64() - v.cos()).abs() < 1e-12);
        }
        let (s, _) = pi(p).mul_pow2(-1).sin_cos();
        close_to(&s, "1.0");
    }

    #[test]
    fn atan2_quadrants() {
        let p = 192;
        let one = Real::from_i64(1, p);
        let m1 = Real::from_i64(-1, p);
        assert!((one.atan2(&one).to_f64() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((one.atan2(&m1).to_f64() - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((m1.atan2(&m1).to_f64() + 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn decimal_io() {
        let p = 200;
        let x = parse_decimal("4.47632e1", p).unwrap();
        assert!((x.to_f64() - 44.7632).abs() < 1e-10);
        let s = x.to_decimal(6);
        assert!(s.starts_with("4.47632"), "{}", s);
        let y = parse_decimal("-2.5e-3", p).unwrap();
        assert!((y.to_f64() + 0.0025).abs() < 1e-18);
    }
}

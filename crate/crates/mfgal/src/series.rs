//! Truncated q-expansions over three coefficient domains (exact cyclotomic
//! rationals, Z/pZ, high-precision complex), Eisenstein generators, and the
//! B_t / U_p / T_n action on blocks of old forms.
//!
//! Precision semantics: a series carries `prec` = the exponent B such that
//! it is known mod q^B. Arithmetic never extends knowledge: sums and
//! products truncate to the minimum operand precision; division shifts it
//! down by the valuation of the divisor.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith;
use crate::bigfloat::{Cplx, Real};
use crate::chartools::{twisted_bernoulli, DirichletCharacter};
use crate::cyclo::CycloNum;
use crate::fp;

// ---- Coefficient rings ----

pub trait SeriesRing: Clone {
    type Elem: Clone + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Truncated convolution; rings with fast multiplication override this.
    fn mul_slices(&self, a: &[Self::Elem], b: &[Self::Elem], trunc: usize) -> Vec<Self::Elem> {
        let n = trunc.min(a.len() + b.len() - 1);
        let mut out = vec![self.zero(); n];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) || i >= n {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !self.is_zero(y) {
                    out[i + j] = self.add(&out[i + j], &self.mul(x, y));
                }
            }
        }
        out
    }
}

/// Exact cyclotomic-rational coefficients.
#[derive(Clone, Debug)]
pub struct CycloRing;

impl SeriesRing for CycloRing {
    type Elem = CycloNum;
    fn zero(&self) -> CycloNum {
        CycloNum::zero()
    }
    fn one(&self) -> CycloNum {
        CycloNum::one()
    }
    fn from_i64(&self, v: i64) -> CycloNum {
        CycloNum::from_i64(v)
    }
    fn add(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        a.add(b)
    }
    fn sub(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        a.sub(b)
    }
    fn mul(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        a.mul(b)
    }
    fn neg(&self, a: &CycloNum) -> CycloNum {
        a.neg()
    }
    fn inv(&self, a: &CycloNum) -> CycloNum {
        a.inv()
    }
    fn is_zero(&self, a: &CycloNum) -> bool {
        a.is_zero()
    }
}

/// Coefficients in F_p (p prime, rejected otherwise at construction).
#[derive(Clone, Copy, Debug)]
pub struct FpRing {
    pub fp: fp::Fp,
}

impl FpRing {
    pub fn new(p: u64) -> Self {
        FpRing { fp: fp::Fp::new(p) }
    }
}

impl SeriesRing for FpRing {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.fp.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.fp.reduce_i64(v)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.fp.add(*a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.fp.sub(*a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.fp.mul(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        self.fp.neg(*a)
    }
    fn inv(&self, a: &u64) -> u64 {
        self.fp.inv(*a)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul_slices(&self, a: &[u64], b: &[u64], trunc: usize) -> Vec<u64> {
        fp::series_mul(a, b, self.fp.p, trunc)
    }
}

/// High-precision complex coefficients.
#[derive(Clone, Copy, Debug)]
pub struct CplxRing {
    pub prec: u32,
}

impl SeriesRing for CplxRing {
    type Elem = Cplx;
    fn zero(&self) -> Cplx {
        Cplx::zero(self.prec)
    }
    fn one(&self) -> Cplx {
        Cplx::one(self.prec)
    }
    fn from_i64(&self, v: i64) -> Cplx {
        Cplx::from_i64(v, self.prec)
    }
    fn add(&self, a: &Cplx, b: &Cplx) -> Cplx {
        a.add(b)
    }
    fn sub(&self, a: &Cplx, b: &Cplx) -> Cplx {
        a.sub(b)
    }
    fn mul(&self, a: &Cplx, b: &Cplx) -> Cplx {
        a.mul(b)
    }
    fn neg(&self, a: &Cplx) -> Cplx {
        a.neg()
    }
    fn inv(&self, a: &Cplx) -> Cplx {
        a.recip()
    }
    fn is_zero(&self, a: &Cplx) -> bool {
        a.is_zero()
    }
}

// ---- The series type ----

/// Truncated power series in q, known mod q^prec.
#[derive(Clone, Debug)]
pub struct QExpansion<R: SeriesRing> {
    ring: R,
    prec: usize,
    coeffs: Vec<R::Elem>,
    pub weight: Option<i64>,
    pub level: Option<u64>,
}

impl<R: SeriesRing> QExpansion<R> {
    pub fn new(ring: R, mut coeffs: Vec<R::Elem>, prec: usize) -> Self {
        coeffs.truncate(prec);
        let pad = ring.zero();
        while coeffs.len() < prec {
            coeffs.push(pad.clone());
        }
        QExpansion { ring, prec, coeffs, weight: None, level: None }
    }

    pub fn zero(ring: R, prec: usize) -> Self {
        let coeffs = vec![ring.zero(); prec];
        QExpansion { ring, prec, coeffs, weight: None, level: None }
    }

    pub fn one(ring: R, prec: usize) -> Self {
        let mut s = Self::zero(ring, prec);
        if prec > 0 {
            s.coeffs[0] = s.ring.one();
        }
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &R::Elem {
        assert!(n < self.prec, "coefficient {} beyond precision {}", n, self.prec);
        &self.coeffs[n]
    }

    pub fn with_tags(mut self, weight: i64, level: u64) -> Self {
        self.weight = Some(weight);
        self.level = Some(level);
        self
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let mut s = self.clone();
        s.prec = s.prec.min(prec);
        s.coeffs.truncate(s.prec);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Index of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.ring.is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let coeffs = (0..prec).map(|i| self.ring.add(&self.coeffs[i], &other.coeffs[i])).collect();
        QExpansion { ring: self.ring.clone(), prec, coeffs, weight: None, level: None }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let coeffs = (0..prec).map(|i| self.ring.sub(&self.coeffs[i], &other.coeffs[i])).collect();
        QExpansion { ring: self.ring.clone(), prec, coeffs, weight: None, level: None }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        QExpansion { ring: self.ring.clone(), prec: self.prec, coeffs, weight: None, level: None }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect();
        QExpansion { ring: self.ring.clone(), prec: self.prec, coeffs, weight: None, level: None }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let coeffs = self.ring.mul_slices(&self.coeffs, &other.coeffs, prec);
        QExpansion::new(self.ring.clone(), coeffs, prec)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.prec);
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

    /// Division with valuation shift: if val(other) = v, the result has
    /// precision min(prec) - v and requires val(self) >= v.
    pub fn div(&self, other: &Self) -> Self {
        let v = other.valuation().expect("division by zero series");
        if v > 0 {
            assert!(
                self.valuation().map_or(true, |sv| sv >= v),
                "division valuation mismatch"
            );
        }
        let prec = self.prec.min(other.prec).saturating_sub(v);
        if prec == 0 {
            return Self::zero(self.ring.clone(), 0);
        }
        let num: Vec<R::Elem> = self.coeffs[v.min(self.coeffs.len())..].to_vec();
        let den: Vec<R::Elem> = other.coeffs[v..].to_vec();
        let dinv = series_inv_ring(&self.ring, &den, prec);
        let coeffs = if num.is_empty() {
            Vec::new()
        } else {
            self.ring.mul_slices(&num, &dinv, prec)
        };
        QExpansion::new(self.ring.clone(), coeffs, prec)
    }

    /// q d/dq (multiplies coefficient n by n).
    pub fn q_dq(&self) -> Self {
        let coeffs = (0..self.prec)
            .map(|i| self.ring.mul(&self.coeffs[i], &self.ring.from_i64(i as i64)))
            .collect();
        QExpansion { ring: self.ring.clone(), prec: self.prec, coeffs, weight: None, level: None }
    }

    /// Plain derivative d/dq (loses one term of precision).
    pub fn d_dq(&self) -> Self {
        if self.prec == 0 {
            return self.clone();
        }
        let coeffs = (1..self.prec)
            .map(|i| self.ring.mul(&self.coeffs[i], &self.ring.from_i64(i as i64)))
            .collect();
        QExpansion {
            ring: self.ring.clone(),
            prec: self.prec - 1,
            coeffs,
            weight: None,
            level: None,
        }
    }

    /// The B_t dilation f(q) -> f(q^t); precision becomes t * prec.
    pub fn dilate(&self, t: u64) -> Self {
        assert!(t >= 1);
        let t = t as usize;
        let prec = self.prec * t;
        let mut coeffs = vec![self.ring.zero(); prec];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * t] = c.clone();
        }
        QExpansion { ring: self.ring.clone(), prec, coeffs, weight: None, level: None }
    }

    /// Raw U_p on coefficients: sum b_m q^m -> sum b_{pm} q^m.
    pub fn u_p_raw(&self, p: u64) -> Self {
        let p = p as usize;
        let prec = self.prec.div_ceil(p);
        let coeffs = (0..prec)
            .map(|m| {
                if m * p < self.prec {
                    self.coeffs[m * p].clone()
                } else {
                    self.ring.zero()
                }
            })
            .collect();
        QExpansion { ring: self.ring.clone(), prec, coeffs, weight: None, level: None }
    }

    /// Raw T_p for a form of the given weight and nebentypus embedded via
    /// `eps_p` = eps(p) (as a ring element), p prime:
    /// (T_p f)_m = f_{pm} + p^{k-1} eps(p) f_{m/p}.
    pub fn t_p_raw(&self, p: u64, weight: u32, eps_p: &R::Elem) -> Self {
        let pk = ring_pow_u64(&self.ring, p, weight as u64 - 1);
        let scale = self.ring.mul(&pk, eps_p);
        let pu = p as usize;
        let prec = self.prec.div_ceil(pu);
        let coeffs = (0..prec)
            .map(|m| {
                let mut c = if m * pu < self.prec {
                    self.coeffs[m * pu].clone()
                } else {
                    self.ring.zero()
                };
                if m % pu == 0 {
                    c = self.ring.add(&c, &self.ring.mul(&scale, &self.coeffs[m / pu]));
                }
                c
            })
            .collect();
        QExpansion { ring: self.ring.clone(), prec, coeffs, weight: None, level: None }
    }
}

fn ring_pow_u64<R: SeriesRing>(ring: &R, base: u64, e: u64) -> R::Elem {
    let mut acc = ring.one();
    let mut base_el = ring_from_u64(ring, base);
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = ring.mul(&acc, &base_el);
        }
        k >>= 1;
        if k > 0 {
            base_el = ring.mul(&base_el, &base_el);
        }
    }
    acc
}

fn ring_from_u64<R: SeriesRing>(ring: &R, v: u64) -> R::Elem {
    if v <= i64::MAX as u64 {
        ring.from_i64(v as i64)
    } else {
        let half = ring.from_i64((v / 2) as i64);
        let two = ring.from_i64(2);
        let r = ring.from_i64((v % 2) as i64);
        ring.add(&ring.mul(&half, &two), &r)
    }
}

fn series_inv_ring<R: SeriesRing>(ring: &R, f: &[R::Elem], prec: usize) -> Vec<R::Elem> {
    assert!(!f.is_empty() && !ring.is_zero(&f[0]), "series not invertible");
    let f0inv = ring.inv(&f[0]);
    let mut g = vec![ring.zero(); prec];
    if prec == 0 {
        return g;
    }
    g[0] = f0inv.clone();
    // Newton doubling, delegating products to the ring's fast path.
    let mut k = 1usize;
    while k < prec {
        let k2 = (2 * k).min(prec);
        let fg = ring.mul_slices(&f[..f.len().min(k2)], &g[..k], k2);
        let mut corr = vec![ring.zero(); k2];
        for (i, c) in fg.iter().enumerate() {
            corr[i] = if i == 0 {
                ring.sub(&ring.from_i64(2), c)
            } else {
                ring.neg(c)
            };
        }
        let newg = ring.mul_slices(&g[..k], &corr, k2);
        g[..k2.min(newg.len())].clone_from_slice(&newg[..k2.min(newg.len())]);
        k = k2;
    }
    g.truncate(prec);
    g
}

// ---- Conversions between domains ----

impl QExpansion<CycloRing> {
    /// Reduce rational coefficients mod p (coefficients must be rational
    /// with denominators prime to p).
    pub fn to_modp(&self, p: u64) -> QExpansion<FpRing> {
        let ring = FpRing::new(p);
        let coeffs: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.as_rational().expect("coefficient not rational");
                rational_mod_p(&r, p)
            })
            .collect();
        let mut s = QExpansion::new(ring, coeffs, self.prec);
        s.weight = self.weight;
        s.level = self.level;
        s
    }

    /// Reduce cyclotomic coefficients mod p via zeta_r -> w (an element of
    /// order r mod p).
    pub fn to_modp_embedding(&self, p: u64, zeta_order: u64, w: u64) -> QExpansion<FpRing> {
        let ring = FpRing::new(p);
        let coeffs: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| cyclo_mod_p(&c.promote(arith::lcm(c.order(), zeta_order)), p, zeta_order, w))
            .collect();
        let mut s = QExpansion::new(ring, coeffs, self.prec);
        s.weight = self.weight;
        s.level = self.level;
        s
    }

    pub fn to_complex(&self, prec: u32) -> QExpansion<CplxRing> {
        let ring = CplxRing { prec };
        let coeffs: Vec<Cplx> = self.coeffs.iter().map(|c| c.embed(prec)).collect();
        let mut s = QExpansion::new(ring, coeffs, self.prec);
        s.weight = self.weight;
        s.level = self.level;
        s
    }
}

pub fn rational_mod_p(r: &BigRational, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let pb = BigInt::from(p);
    let num = r.numer().mod_floor(&pb).to_u64().unwrap();
    let den = r.denom().mod_floor(&pb).to_u64().unwrap();
    assert!(den % p != 0, "denominator divisible by p = {}", p);
    let fp = fp::Fp::new(p);
    fp.mul(num % p, fp.inv(den % p))
}

fn cyclo_mod_p(c: &CycloNum, p: u64, zeta_order: u64, w: u64) -> u64 {
    // c is promoted to an order divisible by zeta_order; substitute powers.
    let n = c.order();
    assert!(n % zeta_order == 0 || zeta_order % n == 0, "incompatible orders");
    let c = if zeta_order % n == 0 { c.promote(zeta_order) } else { c.clone() };
    assert!(c.order() == zeta_order, "embedding order mismatch: {} vs {}", c.order(), zeta_order);
    let fp = fp::Fp::new(p);
    let mut acc = 0u64;
    let mut wj = 1u64;
    for coeff in c.coeffs() {
        let v = rational_mod_p(coeff, p);
        acc = fp.add(acc, fp.mul(v, wj));
        wj = fp.mul(wj, w);
    }
    acc
}

use num_integer::Integer;

impl QExpansion<CplxRing> {
    /// Evaluate at q = e(tau) for tau in the upper half-plane, with a crude
    /// geometric tail estimate returned alongside the value.
    pub fn eval_at_tau(&self, tau: &Cplx) -> (Cplx, Real) {
        let prec = self.ring.prec;
        let q = Cplx::exp_2pi_i(tau);
        let qa = q.abs();
        assert!(
            qa.to_f64() < 0.95,
            "point too close to the real line for series evaluation"
        );
        let mut acc = Cplx::zero(prec);
        let mut qp = Cplx::one(prec);
        let mut max_tail_coeff = Real::zero(prec);
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                qp = qp.mul(&q);
            }
            acc = acc.add(&c.mul(&qp));
            // track max |a_n| over the last quarter for the tail estimate
            if n >= self.prec * 3 / 4 {
                let ca = c.abs();
                if max_tail_coeff.cmp(&ca) == std::cmp::Ordering::Less {
                    max_tail_coeff = ca;
                }
            }
        }
        // tail <= max|a_n| * |q|^B * (B^2) / (1 - |q|): the B^2 slack covers
        // polynomially growing coefficients of the forms handled here.
        let b = self.prec as i64;
        let tail = max_tail_coeff
            .mul(&qa.powi(b))
            .mul(&Real::from_i64(b * b, prec))
            .div(&Real::from_i64(1, prec).sub(&qa));
        (acc, tail)
    }
}

// ---- Eisenstein generators ----

/// E_k^{psi,phi} = -1_{u=1} B_{k,phi}/k + 2 sum_n (sum_{m|n} psi(n/m)
/// phi(m) m^{k-1}) q^n, exact domain.
pub fn eisenstein_new(
    k: u64,
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    prec: usize,
) -> QExpansion<CycloRing> {
    assert!(psi.is_primitive() && phi.is_primitive(), "characters must be primitive");
    let parity_ok = if k % 2 == 0 {
        psi.is_even() == phi.is_even()
    } else {
        psi.is_even() != phi.is_even()
    };
    assert!(parity_ok, "psi(-1) phi(-1) != (-1)^k");
    assert!(
        !(k == 2 && psi.modulus() == 1 && phi.modulus() == 1),
        "E_2 with both characters trivial is not a modular form"
    );
    let mut coeffs = vec![CycloNum::zero(); prec];
    if prec > 0 {
        coeffs[0] = eisenstein_constant_term(k, psi, phi);
    }
    // divisor sums: for each m, phi(m) m^{k-1} contributes to all n = m d
    for m in 1..prec as u64 {
        let phim = phi.eval(m);
        if phim.is_zero() {
            continue;
        }
        let mk = BigRational::from_integer(BigInt::from(m)).pow((k - 1) as i32);
        let base = phim.mul_rational(&mk);
        for d in 1..=((prec as u64 - 1) / m) {
            let psid = psi.eval(d);
            if psid.is_zero() {
                continue;
            }
            let n = (m * d) as usize;
            coeffs[n] = coeffs[n].add(&base.mul(&psid).mul_i64(2));
        }
    }
    QExpansion::new(CycloRing, coeffs, prec).with_tags(
        k as i64,
        psi.modulus() * phi.modulus(),
    )
}

/// Constant term of E_k^{psi,phi}: -B_{k,phi}/k when psi is the modulus-1
/// character, plus (for k = 1 only, where the divisor tail is symmetric in
/// the two characters) the mirrored -B_{1,psi} term when phi has modulus 1.
pub fn eisenstein_constant_term(
    k: u64,
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
) -> CycloNum {
    let mut c = CycloNum::zero();
    if psi.modulus() == 1 {
        let b = twisted_bernoulli(k, phi);
        c = c.add(
            &b.value
                .mul_rational(&BigRational::new(BigInt::from(-1), BigInt::from(k as i64))),
        );
    }
    if k == 1 && phi.modulus() == 1 {
        let b = twisted_bernoulli(1, psi);
        c = c.add(&b.value.neg());
    }
    c
}

/// E_2(tau) = 1 - 24 sum sigma_1(n) q^n (not modular on its own).
pub fn e2_series(prec: usize) -> QExpansion<CycloRing> {
    eisenstein_weight_series(2, -24, prec)
}

pub fn e4_series(prec: usize) -> QExpansion<CycloRing> {
    eisenstein_weight_series(4, 240, prec)
}

pub fn e6_series(prec: usize) -> QExpansion<CycloRing> {
    eisenstein_weight_series(6, -504, prec)
}

fn eisenstein_weight_series(k: u64, scale: i64, prec: usize) -> QExpansion<CycloRing> {
    let mut coeffs = vec![CycloNum::zero(); prec];
    if prec > 0 {
        coeffs[0] = CycloNum::one();
    }
    let mut sums = vec![BigInt::zero(); prec];
    for d in 1..prec as u64 {
        let dk = BigInt::from(d).pow(k as u32 - 1);
        let mut n = d as usize;
        while n < prec {
            sums[n] += &dk;
            n += d as usize;
        }
    }
    for n in 1..prec {
        coeffs[n] =
            CycloNum::from_rational(BigRational::from_integer(&sums[n] * BigInt::from(scale)));
    }
    QExpansion::new(CycloRing, coeffs, prec).with_tags(k as i64, 1)
}

/// E^(M) = E_2(tau) - M E_2(M tau): constant term 1 - M, coefficient of
/// q^n equal to -24 (sigma_1(n) - M sigma_1(n/M) [M | n]).
pub fn eisenstein_e2m(m: u64, prec: usize) -> QExpansion<CycloRing> {
    assert!(m > 1, "E^(M) requires M > 1");
    let e2 = e2_series(prec);
    let dil = e2.dilate(m as u64).truncate(prec);
    let s = e2.sub(&dil.scale(&CycloNum::from_i64(m as i64)));
    s.with_tags(2, m)
}

/// prod_{n >= 1} (1 - q^n), by the pentagonal number theorem (sparse).
pub fn euler_product(prec: usize) -> QExpansion<CycloRing> {
    let mut eta = vec![CycloNum::zero(); prec];
    if prec > 0 {
        eta[0] = CycloNum::one();
    }
    let mut k = 1i64;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 as usize >= prec && g2 as usize >= prec {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        if (g1 as usize) < prec {
            eta[g1 as usize] = CycloNum::from_i64(sign);
        }
        if (g2 as usize) < prec {
            eta[g2 as usize] = CycloNum::from_i64(sign);
        }
        k += 1;
    }
    QExpansion::new(CycloRing, eta, prec)
}

/// The eta quotient q^(sum t e_t / 24) prod_t prod_n (1 - q^{tn})^{e_t};
/// the fractional power must cancel (24 | sum t e_t).
pub fn eta_product(factors: &[(u64, i64)], prec: usize) -> QExpansion<CycloRing> {
    let shift: i64 = factors.iter().map(|&(t, e)| t as i64 * e).sum();
    assert!(shift >= 0 && shift % 24 == 0, "eta quotient must have integral q-power");
    let shift = (shift / 24) as usize;
    let mut acc = QExpansion::one(CycloRing, prec);
    for &(t, e) in factors {
        assert!(e >= 0, "negative eta exponents not needed here");
        let base = euler_product(prec.div_ceil(t as usize)).dilate(t).truncate(prec);
        acc = acc.mul(&base.pow(e as u64));
    }
    let mut coeffs = vec![CycloNum::zero(); shift.min(prec)];
    coeffs.extend_from_slice(acc.coeffs());
    coeffs.truncate(prec);
    QExpansion::new(CycloRing, coeffs, prec)
}

/// Delta = q prod (1 - q^n)^24 (independent oracle for E_4^3 - E_6^2).
pub fn delta_series(prec: usize) -> QExpansion<CycloRing> {
    eta_product(&[(1, 24)], prec).with_tags(12, 1)
}

/// u = 1/j = (E_4^3 - E_6^2) / (12 E_4)^3 mod p, to O(q^prec), quasilinear.
pub fn u_series(prec: usize, p: u64) -> QExpansion<FpRing> {
    assert!(p > 3, "p must exceed 3 (12 must be invertible)");
    assert!(prec >= 2, "need at least two terms");
    let ring = FpRing::new(p);
    let fp = ring.fp;
    let s3 = arith::sigma_table_mod_p(3, prec, p);
    let s5 = arith::sigma_table_mod_p(5, prec, p);
    let mut e4 = vec![0u64; prec];
    let mut e6 = vec![0u64; prec];
    e4[0] = 1;
    e6[0] = 1;
    for n in 1..prec {
        e4[n] = fp.mul(240 % p, s3[n]);
        e6[n] = fp.neg(fp.mul(504 % p, s5[n]));
    }
    let e4 = QExpansion::new(ring, e4, prec);
    let e6 = QExpansion::new(ring, e6, prec);
    let num = e4.pow(3).sub(&e6.pow(2));
    let den = e4.scale(&(12 % p)).pow(3);
    let u = num.div(&den);
    u.with_tags(0, 1)
}

// ---- Sturm bound ----

/// [SL_2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p).
pub fn gamma0_index(n: u64) -> u64 {
    let mut idx = n;
    for (p, _) in arith::factor(n) {
        idx = idx / p * (p + 1);
    }
    idx
}

/// floor(k * [SL2(Z) : Gamma_0(N)] / 12) + 1: coefficients agreeing up to
/// (and including) this index force equality in M_k(Gamma_0(N)).
pub fn sturm_bound(k: u64, n: u64) -> u64 {
    k * gamma0_index(n) / 12 + 1
}

// ---- Hecke action on blocks of dilated newforms ----

/// Scalars the B_t combination algebra is generic over.
pub trait Scalar: Clone + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// base^exp as a scalar (exact where the domain is exact).
    fn pow_u64(&self, base: u64, exp: u32) -> Self;
}

impl Scalar for CycloNum {
    fn zero_like(&self) -> Self {
        CycloNum::zero()
    }
    fn one_like(&self) -> Self {
        CycloNum::one()
    }
    fn add(&self, o: &Self) -> Self {
        CycloNum::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        CycloNum::mul(self, o)
    }
    fn neg(&self) -> Self {
        CycloNum::neg(self)
    }
    fn is_zero(&self) -> bool {
        CycloNum::is_zero(self)
    }
    fn pow_u64(&self, base: u64, exp: u32) -> Self {
        CycloNum::from_rational(BigRational::from_integer(BigInt::from(base)).pow(exp as i32))
    }
}

impl Scalar for Cplx {
    fn zero_like(&self) -> Self {
        Cplx::zero(self.prec())
    }
    fn one_like(&self) -> Self {
        Cplx::one(self.prec())
    }
    fn add(&self, o: &Self) -> Self {
        Cplx::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Cplx::mul(self, o)
    }
    fn neg(&self) -> Self {
        Cplx::neg(self)
    }
    fn is_zero(&self) -> bool {
        Cplx::is_zero(self)
    }
    fn pow_u64(&self, base: u64, exp: u32) -> Self {
        Cplx::from_real(Real::from_u64(base, self.prec()).powi(exp as i64))
    }
}

/// The tag (g, M, k, eps) identifying the newform whose dilations span the
/// block; coefficient and nebentypus access are supplied by the caller.
#[derive(Clone, Debug)]
pub struct BlockTag {
    pub level: u64,
    pub weight: u32,
}

/// A formal combination sum_i c_i * (g | B_{t_i}), sorted by t.
#[derive(Clone, Debug)]
pub struct BtCombination<S: Scalar> {
    pub entries: Vec<(S, u64)>,
}

impl<S: Scalar> BtCombination<S> {
    pub fn single(c: S, t: u64) -> Self {
        BtCombination { entries: vec![(c, t)] }
    }

    fn normalize(mut self) -> Self {
        self.entries.sort_by_key(|&(_, t)| t);
        let mut out: Vec<(S, u64)> = Vec::new();
        for (c, t) in self.entries {
            match out.last_mut() {
                Some((c0, t0)) if *t0 == t => *c0 = c0.add(&c),
                _ => out.push((c, t)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        BtCombination { entries: out }
    }

    pub fn scale(&self, s: &S) -> Self {
        BtCombination {
            entries: self.entries.iter().map(|(c, t)| (c.mul(s), *t)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        BtCombination { entries }.normalize()
    }
}

/// g|B_t|U_p per the case split: g|B_{t/p} when p | t, otherwise
/// a_p g|B_t - p^{k-1} eps(p) g|B_{pt} (with eps(p) = 0 for p | level).
pub fn apply_up<S: Scalar>(
    comb: &BtCombination<S>,
    p: u64,
    tag: &BlockTag,
    a: &dyn Fn(u64) -> S,
    eps: &dyn Fn(u64) -> S,
) -> BtCombination<S> {
    assert!(arith::is_prime(p), "U_p needs p prime");
    let mut entries: Vec<(S, u64)> = Vec::new();
    for (c, t) in &comb.entries {
        if t % p == 0 {
            entries.push((c.clone(), t / p));
        } else {
            let ap = a(p);
            entries.push((c.mul(&ap), *t));
            let epsp = eps(p);
            if !epsp.is_zero() {
                let pk = c.pow_u64(p, tag.weight - 1);
                entries.push((c.mul(&pk).mul(&epsp).neg(), p * t));
            }
        }
    }
    BtCombination { entries }.normalize()
}

/// g|B_t|T_n at ambient level `ambient`: factor n = n1 n2 with
/// n1 = gcd(n, ambient^inf); the result is a_{n2} times the U_p cascade.
pub fn apply_tn<S: Scalar>(
    comb: &BtCombination<S>,
    n: u64,
    ambient: u64,
    tag: &BlockTag,
    a: &dyn Fn(u64) -> S,
    eps: &dyn Fn(u64) -> S,
) -> BtCombination<S> {
    assert!(n >= 1);
    let n1 = arith::gcd_infinity(n, ambient);
    let n2 = n / n1;
    let mut out = comb.scale(&a(n2));
    for (p, e) in arith::factor(n1) {
        for _ in 0..e {
            out = apply_up(&out, p, tag, a, eps);
        }
    }
    out
}

/// Expand a combination into an actual q-expansion, given the coefficients
/// of g (a(n) for n >= 1; a(0) treated as 0).
pub fn expand_combination<R: SeriesRing>(
    ring: &R,
    comb: &BtCombination<R::Elem>,
    a: &dyn Fn(u64) -> R::Elem,
    prec: usize,
) -> QExpansion<R>
where
    R::Elem: Scalar,
{
    let mut coeffs = vec![ring.zero(); prec];
    for (c, t) in &comb.entries {
        let t = *t as usize;
        let mut m = 1usize;
        while m * t < prec {
            let term = c.mul(&a(m as u64));
            coeffs[m * t] = ring.add(&coeffs[m * t], &term);
            m += 1;
        }
    }
    QExpansion::new(ring.clone(), coeffs, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn eisenstein_e4_classical() {
        let one = DirichletCharacter::trivial(1);
        let e = eisenstein_new(4, &one, &one, 8);
        // constant term -B_4/4 = 1/120; a_1 = 2; a_2 = 2 sigma_3(2) = 18
        assert!(e.coeff(0).equals(&CycloNum::from_rational(q(1, 120))));
        assert!(e.coeff(1).equals(&CycloNum::from_i64(2)));
        assert!(e.coeff(2).equals(&CycloNum::from_i64(18)));
        // 120 * E_4^{1,1} = classical E4 = 1 + 240 sum sigma_3 q^n
        let e4 = e4_series(8);
        let scaled = e.scale(&CycloNum::from_i64(120));
        for n in 0..8 {
            assert!(scaled.coeff(n).equals(e4.coeff(n)), "n = {}", n);
        }
    }

    #[test]
    fn e2m_coefficients() {
        let e = eisenstein_e2m(2, 6);
        assert!(e.coeff(0).equals(&CycloNum::from_i64(-1))); // 1 - M
        assert!(e.coeff(1).equals(&CycloNum::from_i64(-24)));
        assert!(e.coeff(2).equals(&CycloNum::from_i64(-24))); // -24(3 - 2)
        assert!(e.coeff(3).equals(&CycloNum::from_i64(-96))); // -24 sigma1(3)
        assert!(e.coeff(4).equals(&CycloNum::from_i64(-24 * (7 - 2 * 3))));
    }

    #[test]
    fn delta_identity() {
        // (E_4^3 - E_6^2) / 1728 = Delta, exact, 60 terms (500 in the
        // integration suite; kept small here for unit-test speed)
        let b = 60;
        let e4 = e4_series(b);
        let e6 = e6_series(b);
        let lhs = e4.pow(3).sub(&e6.pow(2)).scale(&CycloNum::from_rational(q(1, 1728)));
        let delta = delta_series(b);
        for n in 0..b {
            assert!(lhs.coeff(n).equals(delta.coeff(n)), "n = {}", n);
        }
        // integrality
        for n in 0..b {
            let r = lhs.coeff(n).as_rational().unwrap();
            assert!(r.denom().is_one(), "non-integral coefficient at {}", n);
        }
    }

    #[test]
    fn u_series_first_terms() {
        for p in [10007u64, 65537] {
            let u = u_series(8, p);
            assert_eq!(*u.coeff(0), 0);
            assert_eq!(*u.coeff(1), 1);
            assert_eq!(*u.coeff(2), fp::Fp::new(p).reduce_i64(-744));
            assert_eq!(*u.coeff(3), 356652 % p);
        }
    }

    #[test]
    fn u_series_matches_exact_inversion() {
        // oracle: exact rational arithmetic j = E4^3/Delta, u = 1/j
        let b = 14;
        let e4 = e4_series(b);
        let delta = delta_series(b);
        // 1/j = Delta / E4^3 has valuation... Delta/E4^3 = u exactly
        let u_exact = delta.div(&e4.pow(3));
        let p = 10007u64;
        let u_p = u_series(b, p);
        let reduced = u_exact.to_modp(p);
        for n in 0..u_p.prec().min(reduced.prec()) {
            assert_eq!(reduced.coeff(n), u_p.coeff(n), "n = {}", n);
        }
    }

    #[test]
    fn modp_matches_exact_eisenstein() {
        let one = DirichletCharacter::trivial(1);
        for p in [10007u64, 65537] {
            let e = eisenstein_new(4, &one, &one, 50);
            let red = e.to_modp(p);
            let fpr = FpRing::new(p);
            let s3 = arith::sigma_table_mod_p(3, 50, p);
            for n in 1..50usize {
                let want = fpr.fp.mul(2 % p, s3[n]);
                assert_eq!(*red.coeff(n), want);
            }
        }
    }

    #[test]
    fn dilation_and_up() {
        let ring = CycloRing;
        // f = q + q^2
        let f = QExpansion::new(
            ring.clone(),
            vec![CycloNum::zero(), CycloNum::one(), CycloNum::one()],
            3,
        );
        let f3 = f.dilate(3);
        assert_eq!(f3.prec(), 9);
        assert!(f3.coeff(3).is_one());
        assert!(f3.coeff(6).is_one());
        assert!(f3.coeff(4).is_zero());
        // B_t B_t' = B_tt'
        let a = f.dilate(2).dilate(3);
        let b = f.dilate(6);
        assert_eq!(a.prec(), b.prec());
        for n in 0..a.prec() {
            assert!(a.coeff(n).equals(b.coeff(n)));
        }
        // U_p B_p = identity
        let back = f.dilate(5).u_p_raw(5);
        for n in 0..f.prec() {
            assert!(back.coeff(n).equals(f.coeff(n)));
        }
    }

    #[test]
    fn sturm_bounds() {
        assert_eq!(gamma0_index(11), 12);
        assert_eq!(sturm_bound(2, 11), 3);
        assert_eq!(sturm_bound(2, 1), 1);
        assert_eq!(sturm_bound(12, 1), 2);
    }

    #[test]
    fn up_cases_on_combinations() {
        // exact scalars; a(n) arbitrary deterministic values
        let a = |n: u64| CycloNum::from_i64((n * n % 17) as i64 + 1);
        let tag = BlockTag { level: 11, weight: 2 };
        let epsfn = |x: u64| {
            if arith::gcd(x, 11) == 1 {
                CycloNum::one()
            } else {
                CycloNum::zero()
            }
        };
        let comb = BtCombination::single(CycloNum::one(), 3);
        // p | t
        let r = apply_up(&comb, 3, &tag, &a, &epsfn);
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].1, 1);
        assert!(r.entries[0].0.is_one());
        // p | M: eps(p) = 0 so single term a_p g|B_t
        let r11 = apply_up(&comb, 11, &tag, &a, &epsfn);
        assert_eq!(r11.entries.len(), 1);
        assert_eq!(r11.entries[0].1, 3);
        assert!(r11.entries[0].0.equals(&a(11)));
        // p coprime to everything: two terms
        let r2 = apply_up(&comb, 2, &tag, &a, &epsfn);
        assert_eq!(r2.entries.len(), 2);
        assert_eq!(r2.entries[0].1, 3);
        assert_eq!(r2.entries[1].1, 6);
    }

    #[test]
    fn tn_identity_and_coprime() {
        // a(1) = 1: normalized eigenform coefficients
        let a = |n: u64| {
            if n == 1 {
                CycloNum::one()
            } else {
                CycloNum::from_i64((7 * n % 23) as i64 + 1)
            }
        };
        let tag = BlockTag { level: 11, weight: 2 };
        let epsfn = |x: u64| {
            if arith::gcd(x, 11) == 1 {
                CycloNum::one()
            } else {
                CycloNum::zero()
            }
        };
        let comb = BtCombination::single(CycloNum::one(), 2);
        let id = apply_tn(&comb, 1, 22, &tag, &a, &epsfn);
        assert_eq!(id.entries.len(), 1);
        assert!(id.entries[0].0.is_one());
        // n coprime to ambient level: scalar a_n
        let t7 = apply_tn(&comb, 7, 22, &tag, &a, &epsfn);
        assert_eq!(t7.entries.len(), 1);
        assert!(t7.entries[0].0.equals(&a(7)));
        assert_eq!(t7.entries[0].1, 2);
    }

    #[test]
    fn division_precision_semantics() {
        let ring = CycloRing;
        // f = q + q^2 + ... (prec 6), g = q - q^2 (prec 6, valuation 1)
        let f = QExpansion::new(
            ring.clone(),
            (0..6).map(|i| CycloNum::from_i64(if i == 0 { 0 } else { 1 })).collect(),
            6,
        );
        let g = QExpansion::new(
            ring.clone(),
            vec![
                CycloNum::zero(),
                CycloNum::one(),
                CycloNum::from_i64(-1),
                CycloNum::zero(),
                CycloNum::zero(),
                CycloNum::zero(),
            ],
            6,
        );
        let h = f.div(&g);
        assert_eq!(h.prec(), 5);
        // f/g = (1 + q + ...)/(1 - q) = 1 + 2q + ...
        assert!(h.coeff(0).is_one());
        assert!(h.coeff(1).equals(&CycloNum::from_i64(2)));
        // g * h = f to the available precision
        let back = g.mul(&h.dilate(1));
        for n in 0..back.prec().min(f.prec()) {
            assert!(back.coeff(n).equals(f.coeff(n)), "n = {}", n);
        }
    }
}

//! The explicit Atkin-Lehner action: W_Q matrices, pseudo-eigenvalues on
//! newforms, the scalar/label map on new Eisenstein series, the E^(N)
//! family, commutation past B_t on the old subspace, plus the numeric
//! slash-action oracle every identity test is checked against, and cusp
//! enumeration for squarefree levels.
//!
//! Scalars arising from the operator formulas are products of cyclotomic
//! numbers and half-integral powers of primes; [`ExactScalar`] keeps the
//! two parts separate so composed operators multiply exactly and only the
//! numeric oracle collapses them to floating point.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::arith;
use crate::bigfloat::{Cplx, Real};
use crate::chartools::{gauss_sum, DirichletCharacter};
use crate::cyclo::CycloNum;
use crate::newform::NewformRecord;
use crate::series::{CplxRing, CycloRing, QExpansion};

#[derive(Debug)]
pub enum AtkinError {
    NotExactDivisor { q: u64, n: u64 },
    InfeasibleClasses { x: u64, y: u64 },
    NotComputableExactly(String),
    DivisibilityViolated(String),
    PointTooLow { bound: f64, tol: f64 },
    NotSquarefree(u64),
}

impl std::fmt::Display for AtkinError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AtkinError::NotExactDivisor { q, n } => {
                write!(f, "{} is not an exact divisor of {}", q, n)
            }
            AtkinError::InfeasibleClasses { x, y } => {
                write!(f, "no Atkin-Lehner matrix with classes x={}, y={}", x, y)
            }
            AtkinError::NotComputableExactly(s) => {
                write!(f, "pseudo-eigenvalue not exactly computable: {}", s)
            }
            AtkinError::DivisibilityViolated(s) => write!(f, "{}", s),
            AtkinError::PointTooLow { bound, tol } => {
                write!(f, "series tail {} exceeds tolerance {}", bound, tol)
            }
            AtkinError::NotSquarefree(n) => write!(f, "level {} is not squarefree", n),
        }
    }
}

impl std::error::Error for AtkinError {}

// ---- W_Q matrices ----

/// A realized matrix (Qa, b; Nc, Qd) of determinant Q with a = x mod N/Q
/// and b = y mod Q.
#[derive(Clone, Debug)]
pub struct ALMatrixSpec {
    pub n: u64,
    pub q: u64,
    pub x: u64,
    pub y: u64,
    /// entries [Qa, b, Nc, Qd]
    pub mat: [i128; 4],
}

impl ALMatrixSpec {
    pub fn det(&self) -> i128 {
        self.mat[0] * self.mat[3] - self.mat[1] * self.mat[2]
    }

    pub fn as_i64(&self) -> [i64; 4] {
        [
            self.mat[0] as i64,
            self.mat[1] as i64,
            self.mat[2] as i64,
            self.mat[3] as i64,
        ]
    }
}

/// Find a matrix in the class W_{Q,x,y}: entries (Qa, b; Nc, Qd) with
/// det = Q, a = x mod R, b = y mod Q (R = N/Q). Exists iff gcd(x, R) =
/// gcd(y, Q) = 1.
pub fn al_matrix(n: u64, q: u64, x: u64, y: u64) -> Result<ALMatrixSpec, AtkinError> {
    if !arith::is_exact_divisor(q, n) {
        return Err(AtkinError::NotExactDivisor { q, n });
    }
    let r = n / q;
    if arith::gcd(x % r.max(1), r) != 1 && r > 1 {
        return Err(AtkinError::InfeasibleClasses { x, y });
    }
    if arith::gcd(y % q.max(1), q) != 1 && q > 1 {
        return Err(AtkinError::InfeasibleClasses { x, y });
    }
    // Q a d - R b c = 1 with a = x (R), b = y (Q); search small lifts of a
    // and b until gcd(Qa, Rb) = 1, then extended gcd supplies d and c.
    for s in 0..64i128 {
        let a = if r == 1 {
            // a unconstrained; start at 1 to keep gcd(a, b) reachable
            1 + s
        } else {
            x as i128 + s * r as i128
        };
        if a == 0 {
            continue;
        }
        for t in 0..64i128 {
            let b = y as i128 + t * q as i128;
            if b == 0 {
                continue;
            }
            let qa = q as i128 * a;
            let rb = r as i128 * b;
            let (g, d, negc) = arith::egcd(qa, rb);
            if g != 1 {
                continue;
            }
            // Q a d + R b (negc) = 1, so c = -negc
            let c = -negc;
            let mat = [q as i128 * a, b, n as i128 * c, q as i128 * d];
            let spec = ALMatrixSpec { n, q, x, y, mat };
            debug_assert_eq!(spec.det(), q as i128);
            return Ok(spec);
        }
    }
    Err(AtkinError::InfeasibleClasses { x, y })
}

// ---- Exact operator scalars ----

/// A scalar of the form (cyclotomic number) * prod_p p^(e_p / 2), with the
/// half-integral prime powers kept symbolic.
#[derive(Clone, Debug)]
pub struct ExactScalar {
    pub cyclo: CycloNum,
    /// prime -> exponent counted in halves (value contributes p^(e/2))
    pub half_powers: BTreeMap<u64, i64>,
}

impl ExactScalar {
    pub fn one() -> Self {
        ExactScalar { cyclo: CycloNum::one(), half_powers: BTreeMap::new() }
    }

    pub fn from_cyclo(c: CycloNum) -> Self {
        ExactScalar { cyclo: c, half_powers: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.cyclo.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut half_powers = self.half_powers.clone();
        for (&p, &e) in &other.half_powers {
            *half_powers.entry(p).or_insert(0) += e;
        }
        half_powers.retain(|_, e| *e != 0);
        ExactScalar { cyclo: self.cyclo.mul(&other.cyclo), half_powers }
    }

    pub fn mul_cyclo(&self, c: &CycloNum) -> Self {
        ExactScalar { cyclo: self.cyclo.mul(c), half_powers: self.half_powers.clone() }
    }

    pub fn neg(&self) -> Self {
        ExactScalar { cyclo: self.cyclo.neg(), half_powers: self.half_powers.clone() }
    }

    pub fn inv(&self) -> Self {
        let half_powers = self.half_powers.iter().map(|(&p, &e)| (p, -e)).collect();
        ExactScalar { cyclo: self.cyclo.inv(), half_powers }
    }

    /// Multiply by (num/den)^(k/2), tracked exactly on prime exponents.
    pub fn mul_half_power(&self, num: u64, den: u64, k: i64) -> Self {
        let mut half_powers = self.half_powers.clone();
        for (p, e) in arith::factor(num) {
            *half_powers.entry(p).or_insert(0) += e as i64 * k;
        }
        for (p, e) in arith::factor(den) {
            *half_powers.entry(p).or_insert(0) -= e as i64 * k;
        }
        half_powers.retain(|_, e| *e != 0);
        ExactScalar { cyclo: self.cyclo.clone(), half_powers }
    }

    /// Collapse to a cyclotomic number when every prime exponent is even.
    pub fn to_cyclo(&self) -> Option<CycloNum> {
        let mut r = BigRational::from_integer(1.into());
        for (&p, &e) in &self.half_powers {
            if e % 2 != 0 {
                return None;
            }
            let half = e / 2;
            let pw = BigRational::from_integer(num_bigint::BigInt::from(p)).pow(half as i32);
            r *= pw;
        }
        Some(self.cyclo.mul_rational(&r))
    }

    /// Collapse fully into a cyclotomic number, writing odd half powers
    /// through exact quadratic Gauss sums (sqrt(p) is cyclotomic).
    pub fn to_cyclo_full(&self) -> CycloNum {
        let mut acc = self.cyclo.clone();
        for (&p, &e) in &self.half_powers {
            let whole = e.div_euclid(2);
            let frac = e.rem_euclid(2);
            if whole != 0 {
                let pw =
                    BigRational::from_integer(num_bigint::BigInt::from(p)).pow(whole as i32);
                acc = acc.mul_rational(&pw);
            }
            if frac == 1 {
                acc = acc.mul(&crate::cyclo::sqrt_prime(p));
            }
        }
        acc
    }

    pub fn embed(&self, prec: u32) -> Cplx {
        let mut acc = self.cyclo.embed(prec);
        for (&p, &e) in &self.half_powers {
            let root = Real::from_u64(p, prec + 32).sqrt();
            acc = acc.mul_real(&root.powi(e).with_prec(prec));
        }
        acc
    }
}

/// The absolute-value-1 scalar lambda_{f,Q}.
#[derive(Clone, Debug)]
pub struct PseudoEigenvalue {
    pub form_label: String,
    pub q: u64,
    pub value: ExactScalar,
}

impl PseudoEigenvalue {
    pub fn embed(&self, prec: u32) -> Cplx {
        self.value.embed(prec)
    }
}

// ---- W_Q on newforms ----

/// The image series of a newform under W_Q up to the pseudo-eigenvalue:
/// coefficient access to b_n = eps_{N/Q}(n_Q) conj(eps_Q)(n/n_Q)
/// conj(a_{n_Q}) a_{n/n_Q}.
pub struct WqNewformSeries<'a> {
    record: &'a NewformRecord,
    q: u64,
    eps_q: DirichletCharacter,
    eps_r: DirichletCharacter,
}

impl<'a> WqNewformSeries<'a> {
    /// b_n, exact (requires exact coefficient access on the record).
    pub fn coeff(&self, n: u64) -> CycloNum {
        let nq = arith::gcd_infinity(n, self.q);
        let rest = n / nq;
        let e1 = self.eps_r.eval(nq);
        if e1.is_zero() {
            return CycloNum::zero();
        }
        let e2 = self.eps_q.conj().eval(rest);
        if e2.is_zero() {
            return CycloNum::zero();
        }
        let a_nq = self.record.a_cyclo(nq).expect("exact coefficients required");
        let a_rest = self.record.a_cyclo(rest).expect("exact coefficients required");
        e1.mul(&e2).mul(&a_nq.conj()).mul(&a_rest)
    }

    pub fn expand(&self, prec: usize) -> QExpansion<CycloRing> {
        let mut coeffs = vec![CycloNum::zero(); prec];
        for n in 1..prec as u64 {
            if n <= self.record.n_max() {
                coeffs[n as usize] = self.coeff(n);
            }
        }
        QExpansion::new(CycloRing, coeffs, prec)
    }
}

/// The Atkin-Lehner action on a newform: the pseudo-eigenvalue lambda_{f,Q}
/// (exact when all a_{q_i} are nonzero and exactly representable) and the
/// coefficient map of the image series.
pub fn wq_on_newform<'a>(
    f: &'a NewformRecord,
    q: u64,
) -> Result<(PseudoEigenvalue, WqNewformSeries<'a>), AtkinError> {
    let n = f.level;
    if !arith::is_exact_divisor(q, n) {
        return Err(AtkinError::NotExactDivisor { q, n });
    }
    let (eps_q, eps_r) = f.nebentypus.decompose(q).expect("exact divisor checked");
    let series = WqNewformSeries { record: f, q, eps_q: eps_q.clone(), eps_r };
    // lambda_{f,Q} = prod_i eps_{Q_i}(Q/Q_i) Q_i^{k/2 - 1} g(eps_{Q_i}) / a_{Q_i}
    let mut lambda = ExactScalar::one();
    for (p, e) in arith::factor(q) {
        let qi = p.pow(e);
        let a_qi = f
            .a_cyclo(qi)
            .ok_or_else(|| AtkinError::NotComputableExactly(format!("a_{} not exact", qi)))?;
        if a_qi.is_zero() {
            return Err(AtkinError::NotComputableExactly(format!(
                "a_{} = 0: no closed form for lambda",
                qi
            )));
        }
        let (eps_qi, _) = f.nebentypus.decompose(qi).expect("prime power is exact divisor");
        let val_on_cofactor = eps_qi.eval(q / qi);
        let g = gauss_sum(&eps_qi);
        lambda = lambda
            .mul_cyclo(&val_on_cofactor)
            .mul_cyclo(&g)
            .mul_cyclo(&a_qi.inv())
            .mul_half_power(qi, 1, f.weight as i64 - 2);
    }
    Ok((PseudoEigenvalue { form_label: f.label.clone(), q, value: lambda }, series))
}

// ---- W_Q on new Eisenstein series ----

/// The label and scalar of G_k^{psi,phi} | W_Q =
/// (u_Q/v_Q)^{k/2} phi_Q(-1) / (chi_Q(v_R) chi_R(v_Q)) G_k^{psi', phi'}
/// with psi' = conj(phi_Q) psi_R and phi' = conj(psi_Q) phi_R.
pub struct WqEisenstein {
    pub scalar_g: ExactScalar,
    pub psi_new: DirichletCharacter,
    pub phi_new: DirichletCharacter,
}

pub fn wq_on_eisenstein(
    k: u64,
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    q: u64,
) -> Result<WqEisenstein, AtkinError> {
    assert!(psi.is_primitive() && phi.is_primitive(), "labels must be primitive");
    let u = psi.modulus();
    let v = phi.modulus();
    let n = u * v;
    if !arith::is_exact_divisor(q, n) {
        return Err(AtkinError::NotExactDivisor { q, n });
    }
    let u_q = arith::gcd(u, q);
    let v_q = arith::gcd(v, q);
    let (psi_q, psi_r) = psi.decompose(u_q).expect("u_Q || u");
    let (phi_q, phi_r) = phi.decompose(v_q).expect("v_Q || v");
    let chi = psi.product(phi); // modulus lcm(u, v) divides uv; extend
    let chi = chi.extend_to_modulus(n);
    let (chi_q, chi_r) = chi.decompose(q).expect("Q || N");
    let v_r = v / v_q;
    let denom = chi_q.eval(v_r).mul(&chi_r.eval(v_q));
    let scalar = ExactScalar::from_cyclo(
        phi_q.eval_i64(-1).mul(&denom.inv()),
    )
    .mul_half_power(u_q, v_q, k as i64);
    // new labels: psi' = conj(phi_Q) psi_R, phi' = conj(psi_Q) phi_R
    let psi_new = phi_q.conj().product(&psi_r);
    let phi_new = psi_q.conj().product(&phi_r);
    Ok(WqEisenstein { scalar_g: scalar, psi_new, phi_new })
}

/// The same map normalized for the E-series: E_k^{psi,phi} | W_Q =
/// scalar_e * E_k^{psi',phi'}, where scalar_e folds in the ratio of the
/// G-to-E normalizations (-2 pi i / v)^k g(conj phi) / (k-1)!.
pub fn wq_on_eisenstein_e(
    k: u64,
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    q: u64,
) -> Result<WqEisenstein, AtkinError> {
    let g = wq_on_eisenstein(k, psi, phi, q)?;
    let v = phi.modulus();
    let v_new = g.phi_new.modulus();
    // c'/c = (v/v')^k * g(conj phi') / g(conj phi)
    let ratio = gauss_sum(&g.phi_new.conj()).mul(&gauss_sum(&phi.conj()).inv());
    let scalar_e = g
        .scalar_g
        .mul_cyclo(&ratio)
        .mul_half_power(v, v_new, 2 * k as i64);
    Ok(WqEisenstein { scalar_g: scalar_e, psi_new: g.psi_new, phi_new: g.phi_new })
}

// ---- W_Q on the E^(N) family ----

/// E^(N) | W_Q = E^(R) - E^(Q), with E^(1) the zero series; the result is
/// a formal combination [(sign, M)] of E^(M) terms.
pub fn wq_on_e2m(n: u64, q: u64) -> Result<Vec<(i64, u64)>, AtkinError> {
    if !arith::is_exact_divisor(q, n) {
        return Err(AtkinError::NotExactDivisor { q, n });
    }
    let r = n / q;
    let mut out = Vec::new();
    if r > 1 {
        out.push((1i64, r));
    }
    if q > 1 {
        out.push((-1i64, q));
    }
    Ok(out)
}

// ---- W_Q on the old subspace ----

/// The commutation f|B_t|W_Q = scalar * f|W_{M_Q}|B_{t' R_Q} for f of level
/// M and nebentypus eps, inside ambient level N.
pub struct WqOld {
    pub scalar: ExactScalar,
    /// exact divisor of M on which the inner Atkin-Lehner operator acts
    pub inner_q: u64,
    /// the outer dilation t' R_Q
    pub dilation: u64,
}

pub fn wq_on_old(
    m: u64,
    eps: &DirichletCharacter,
    k: u64,
    t: u64,
    q: u64,
    n: u64,
) -> Result<WqOld, AtkinError> {
    if n % m != 0 || (n / m) % t != 0 {
        return Err(AtkinError::DivisibilityViolated(format!(
            "need t M | N (t = {}, M = {}, N = {})",
            t, m, n
        )));
    }
    if !arith::is_exact_divisor(q, n) {
        return Err(AtkinError::NotExactDivisor { q, n });
    }
    assert_eq!(eps.modulus(), m, "nebentypus must live mod M");
    let r_amb = n / (t * m);
    let t_q = arith::gcd(t, q);
    let m_q = arith::gcd(m, q);
    let r_q = arith::gcd(r_amb, q);
    if t_q * m_q * r_q != q {
        return Err(AtkinError::DivisibilityViolated(format!(
            "Q = {} does not split as t_Q M_Q R_Q = {} * {} * {}",
            q, t_q, m_q, r_q
        )));
    }
    let t_prime = t / t_q;
    let (eps_mq, eps_mprime) = eps.decompose(m_q).expect("M_Q || M");
    let scalar = ExactScalar::from_cyclo(
        eps_mprime.conj().eval(t_q).mul(&eps_mq.conj().eval(t_prime)),
    )
    .mul_half_power(r_q, t_q, k as i64);
    Ok(WqOld { scalar, inner_q: m_q, dilation: t_prime * r_q })
}

// ---- Composition scalar ----

/// f|W_{QQ'} = eps_{Q'}(Q) f|W_Q|W_{Q'} for coprime exact divisors.
pub fn wq_compose_scalar(
    q: u64,
    q_prime: u64,
    eps: &DirichletCharacter,
) -> Result<CycloNum, AtkinError> {
    if arith::gcd(q, q_prime) != 1 {
        return Err(AtkinError::DivisibilityViolated(format!(
            "{} and {} are not coprime",
            q, q_prime
        )));
    }
    let n = eps.modulus();
    if !arith::is_exact_divisor(q, n) || !arith::is_exact_divisor(q_prime, n) {
        return Err(AtkinError::NotExactDivisor { q: q * q_prime, n });
    }
    let (eps_qp, _) = eps.decompose(q_prime).expect("checked");
    Ok(eps_qp.eval(q))
}

// ---- Numeric slash-action oracle ----

/// (f |_k gamma)(tau) = det^(k/2) / (c tau + d)^k f((a tau + b)/(c tau + d)),
/// evaluated through the q-expansion at the transformed point. Returns the
/// value together with a propagated tail estimate.
pub fn slash_numeric(
    series: &QExpansion<CplxRing>,
    gamma: [i64; 4],
    k: u32,
    tau: &Cplx,
) -> (Cplx, Real) {
    let prec = series.ring().prec;
    let [a, b, c, d] = gamma;
    let det = a as i128 * d as i128 - b as i128 * c as i128;
    assert!(det > 0, "slash action needs positive determinant");
    let az = tau.mul_i64(a).add(&Cplx::from_i64(b, prec));
    let cz = tau.mul_i64(c).add(&Cplx::from_i64(d, prec));
    let tau_p = az.div(&cz);
    assert!(!tau_p.im.is_negative(), "transformed point left the upper half-plane");
    let (val, tail) = series.eval_at_tau(&tau_p);
    let det_pow = Real::from_u64(det as u64, prec).sqrt().powi(k as i64);
    let autfac = cz.powi(k as i64).recip().mul_real(&det_pow);
    let scaled_tail = tail.mul(&autfac.abs());
    (val.mul(&autfac), scaled_tail)
}

/// Slash action that enforces a tolerance on the series tail.
pub fn slash_checked(
    series: &QExpansion<CplxRing>,
    gamma: [i64; 4],
    k: u32,
    tau: &Cplx,
    tol: f64,
) -> Result<Cplx, AtkinError> {
    let (v, tail) = slash_numeric(series, gamma, k, tau);
    let t = tail.to_f64();
    if !(t.abs() < tol) {
        return Err(AtkinError::PointTooLow { bound: t, tol });
    }
    Ok(v)
}

// ---- Cusp enumeration (squarefree level) ----

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CuspSide {
    Zero,
    Infinity,
}

/// One cusp of X_H(l N) presented through the fibred-product structure.
#[derive(Clone, Debug)]
pub struct CuspDescriptor {
    /// side and +-K-coset representative in the X_K(l) factor
    pub ell_side: CuspSide,
    pub ell_coset: u64,
    /// (prime, side) per X_0(p) factor of the squarefree N
    pub prime_sides: Vec<(u64, CuspSide)>,
    /// defined over Q?
    pub rational: bool,
    /// Galois orbit identifier (orbits partition the cusp set)
    pub galois_orbit: usize,
}

pub struct CuspSet {
    pub cusps: Vec<CuspDescriptor>,
    /// representatives of the +-K cosets used for labels
    pub coset_reps: Vec<u64>,
    /// checked at runtime: the W_Q flips plus diamonds reach every cusp
    pub transitive: bool,
}

/// Enumerate the cusps of X_H(l N) = X_K(l) x X_0(p_1) x ... x X_0(p_r)
/// as a product of Galois sets; K is the image mod l of the subgroup H
/// given by generators in (Z/lN Z)*.
pub fn enumerate_cusps(ell: u64, n: u64, h_gens: &[u64]) -> Result<CuspSet, AtkinError> {
    if !arith::is_squarefree(ell * n) || arith::gcd(ell, n) != 1 {
        return Err(AtkinError::NotSquarefree(ell * n));
    }
    // K~ = <image of H mod l, -1>
    let mut k_set = std::collections::HashSet::new();
    let mut stack = vec![1u64, ell - 1];
    for &g in h_gens {
        stack.push(g % ell);
    }
    while let Some(v) = stack.pop() {
        if k_set.insert(v) {
            for &g in h_gens {
                stack.push(v * (g % ell) % ell);
            }
            stack.push(v * (ell - 1) % ell);
        }
    }
    // cosets of K~ in (Z/l)^*
    let mut seen = std::collections::HashSet::new();
    let mut coset_reps = Vec::new();
    for x in 1..ell {
        if arith::gcd(x, ell) != 1 || seen.contains(&x) {
            continue;
        }
        coset_reps.push(x);
        for &k in &k_set {
            seen.insert(x * k % ell);
        }
    }
    let primes: Vec<u64> = arith::factor(n).into_iter().map(|(p, _)| p).collect();
    let mut cusps = Vec::new();
    let n_orbit_patterns = 1usize << primes.len();
    for side_bits in 0..n_orbit_patterns {
        let prime_sides: Vec<(u64, CuspSide)> = primes
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                (p, if side_bits >> i & 1 == 0 { CuspSide::Infinity } else { CuspSide::Zero })
            })
            .collect();
        // over 0: each coset is a rational cusp (own singleton orbit);
        // over infinity: the cosets form a single Galois orbit.
        for (ci, &rep) in coset_reps.iter().enumerate() {
            cusps.push(CuspDescriptor {
                ell_side: CuspSide::Zero,
                ell_coset: rep,
                prime_sides: prime_sides.clone(),
                rational: true,
                galois_orbit: side_bits * (coset_reps.len() + 1) + ci,
            });
        }
        let inf_rational = coset_reps.len() == 1;
        for &rep in coset_reps.iter() {
            cusps.push(CuspDescriptor {
                ell_side: CuspSide::Infinity,
                ell_coset: rep,
                prime_sides: prime_sides.clone(),
                rational: inf_rational,
                galois_orbit: side_bits * (coset_reps.len() + 1) + coset_reps.len(),
            });
        }
    }
    // transitivity of <W_Q, diamonds>: diamonds act transitively on the
    // cosets within a side, W_l and W_p flip sides; BFS over the state
    // space (side pattern, coset index).
    let total_states = 2 * coset_reps.len() * n_orbit_patterns;
    let mut reached = std::collections::HashSet::new();
    let mut queue = vec![(0usize, 0usize, 0usize)]; // (ell side, coset, bits)
    while let Some(s) = queue.pop() {
        if !reached.insert(s) {
            continue;
        }
        let (es, ci, bits) = s;
        queue.push((1 - es, ci, bits)); // W_l flip
        for i in 0..primes.len() {
            queue.push((es, ci, bits ^ (1 << i))); // W_p flip
        }
        queue.push((es, (ci + 1) % coset_reps.len(), bits)); // diamond step
    }
    let transitive = reached.len() == total_states;
    assert!(transitive, "W_Q and diamond orbit failed to cover the cusps");
    Ok(CuspSet { cusps, coset_reps, transitive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{delta_series, eisenstein_e2m, eisenstein_new, eta_product};

    const PREC: u32 = 192;

    fn tau(re: f64, im: f64) -> Cplx {
        Cplx::new(Real::from_f64(re, PREC), Real::from_f64(im, PREC))
    }

    #[test]
    fn al_matrix_congruences() {
        // N = 15, Q = 3: matrix (3a, b; 15c, 3d), det 3, a = 1 mod 5, b = 1 mod 3
        let m = al_matrix(15, 3, 1, 1).unwrap();
        assert_eq!(m.det(), 3);
        assert_eq!(m.mat[0].rem_euclid(3), 0);
        assert_eq!((m.mat[0] / 3).rem_euclid(5), 1);
        assert_eq!(m.mat[1].rem_euclid(3), 1);
        assert_eq!(m.mat[2].rem_euclid(15), 0);
        // Q = 1: identity class, det 1
        let id = al_matrix(15, 1, 1, 1).unwrap();
        assert_eq!(id.det(), 1);
        // Fricke Q = N
        let w = al_matrix(15, 15, 1, 1).unwrap();
        assert_eq!(w.det(), 15);
        assert_eq!(w.mat[0].rem_euclid(15), 0);
        // non-exact divisor rejected
        assert!(al_matrix(12, 2, 1, 1).is_err());
    }

    #[test]
    fn exact_scalar_half_powers() {
        // (5/3)^(3/2) * (3/5)^(1/2) = 5/3... tracked on primes
        let s = ExactScalar::one().mul_half_power(5, 3, 3).mul_half_power(3, 5, 1);
        let c = s.to_cyclo().expect("even exponents collapse");
        assert!(c.equals(&CycloNum::from_rational(BigRational::new(5.into(), 3.into()))));
        let t = ExactScalar::one().mul_half_power(2, 1, 1);
        assert!(t.to_cyclo().is_none());
        let emb = t.embed(PREC);
        assert!((emb.re.to_f64() - 2f64.sqrt()).abs() < 1e-30);
        // full collapse through quadratic Gauss sums
        for p in [2u64, 3, 5, 7, 13] {
            let s = ExactScalar::one().mul_half_power(p, 1, 3); // p^(3/2)
            let c = s.to_cyclo_full();
            assert!(c.mul(&c).equals(&CycloNum::from_i64((p * p * p) as i64)));
            let e = c.embed(PREC).re.to_f64();
            assert!(e > 0.0 && (e - (p as f64).powf(1.5)).abs() < 1e-9);
        }
    }

    #[test]
    fn e2m_fricke_and_split() {
        assert_eq!(wq_on_e2m(6, 6).unwrap(), vec![(-1, 6)]);
        assert_eq!(wq_on_e2m(6, 2).unwrap(), vec![(1, 3), (-1, 2)]);
        assert_eq!(wq_on_e2m(6, 1).unwrap(), vec![(1, 6)]);
    }

    /// E^(N) | W_N = -E^(N), checked through the numeric slash oracle.
    #[test]
    fn e2m_fricke_numeric() {
        for n in [2u64, 3, 5] {
            let e = eisenstein_e2m(n, 260).to_complex(PREC);
            let w = al_matrix(n, n, 1, 1).unwrap();
            let t0 = tau(0.07, 0.9);
            let lhs = slash_checked(&e, w.as_i64(), 2, &t0, 1e-25).unwrap();
            let (rhs, _) = e.eval_at_tau(&t0);
            let diff = lhs.add(&rhs).abs().to_f64();
            assert!(diff < 1e-20, "E^({}) | W_{} != -E^({}): {:e}", n, n, n, diff);
        }
    }

    /// E^(6) | W_2 = E^(3) - E^(2) at tau = i/2, per the split formula.
    #[test]
    fn e2m_split_numeric() {
        let e6 = eisenstein_e2m(6, 420).to_complex(PREC);
        let e3 = eisenstein_e2m(3, 420).to_complex(PREC);
        let e2 = eisenstein_e2m(2, 420).to_complex(PREC);
        let w = al_matrix(6, 2, 1, 1).unwrap();
        let t0 = tau(0.0, 0.5);
        let lhs = slash_checked(&e6, w.as_i64(), 2, &t0, 1e-24).unwrap();
        let rhs = e3.eval_at_tau(&t0).0.sub(&e2.eval_at_tau(&t0).0);
        let diff = lhs.sub(&rhs).abs().to_f64();
        assert!(diff < 1e-20, "E^(6)|W_2 mismatch: {:e}", diff);
    }

    /// Delta |_12 S = Delta: the classical functional equation
    /// Delta(-1/tau) = tau^12 Delta(tau) as an oracle self-test.
    #[test]
    fn slash_oracle_delta_functional_equation() {
        let delta = delta_series(260).to_complex(PREC);
        let t0 = tau(0.0, 2.0);
        let lhs = slash_checked(&delta, [0, -1, 1, 0], 12, &t0, 1e-28).unwrap();
        let (rhs, _) = delta.eval_at_tau(&t0);
        let diff = lhs.sub(&rhs).abs().to_f64();
        assert!(diff < 1e-25, "Delta functional equation: {:e}", diff);
    }

    /// Doubling the series length moves the value by less than the
    /// advertised tail bound.
    #[test]
    fn slash_tail_bound_honest() {
        let delta_short = delta_series(120).to_complex(PREC);
        let delta_long = delta_series(240).to_complex(PREC);
        let t0 = tau(0.21, 0.4);
        let (v1, tail1) = slash_numeric(&delta_short, [0, -1, 1, 0], 12, &t0);
        let (v2, _) = slash_numeric(&delta_long, [0, -1, 1, 0], 12, &t0);
        let diff = v1.sub(&v2).abs().to_f64();
        assert!(diff <= tail1.to_f64(), "diff {:e} > bound {:e}", diff, tail1.to_f64());
    }

    /// Weight-2 level-11 newform via its eta product; W_11 sends it to
    /// -1 times itself (real coefficients, lambda = -a_11 = -1).
    #[test]
    fn newform_level11_fricke() {
        let f = eta_product(&[(1, 2), (11, 2)], 200);
        // sanity: it is a normalized eigenform: T_2 f = -2 f on 90 terms
        let t2 = f.t_p_raw(2, 2, &CycloNum::one());
        for n in 1..90 {
            assert!(
                t2.coeff(n).equals(&f.coeff(n).mul_i64(-2)),
                "T_2 eigenvalue fails at {}",
                n
            );
        }
        // a_11 = 1
        assert!(f.coeff(11).is_one());
        let fc = f.to_complex(PREC);
        let w = al_matrix(11, 11, 1, 1).unwrap();
        // fixed point of W_11
        let t0 = tau(0.0, 1.0 / 11f64.sqrt());
        let lhs = slash_checked(&fc, w.as_i64(), 2, &t0, 1e-22).unwrap();
        let (rhs, _) = fc.eval_at_tau(&t0);
        // f|W_11 = -f
        let diff = lhs.add(&rhs).abs().to_f64();
        assert!(diff < 1e-15, "11a Fricke eigenvalue: {:e}", diff);
    }

    /// wq_on_newform against the record built from the eta product.
    #[test]
    fn pseudo_eigenvalue_level11() {
        let f = eta_product(&[(1, 2), (11, 2)], 40);
        let rec = NewformRecord {
            label: "11.2.1.a".into(),
            level: 11,
            weight: 2,
            nebentypus: DirichletCharacter::trivial(11),
            hecke_poly: vec![BigRational::from_integer(0.into()), BigRational::from_integer(1.into())],
            cyclotomic_order: None,
            an: (1..40u64)
                .map(|n| vec![f.coeff(n as usize).as_rational().unwrap()])
                .collect(),
        };
        let (lam, series) = wq_on_newform(&rec, 11).unwrap();
        // lambda = 11^0 g(trivial mod 11)/a_11 = -1
        let c = lam.value.to_cyclo().unwrap();
        assert!(c.equals(&CycloNum::from_i64(-1)));
        // b_n = conj(a_n) = a_n here
        for n in 1..20 {
            assert!(series.coeff(n).equals(&rec.a_cyclo(n).unwrap()));
        }
        // W_1 is the identity
        let (lam1, s1) = wq_on_newform(&rec, 1).unwrap();
        assert!(lam1.value.to_cyclo().unwrap().is_one());
        assert!(s1.coeff(7).equals(&rec.a_cyclo(7).unwrap()));
    }

    /// Eisenstein involution: applying the W_Q label map twice returns the
    /// original label, with a scalar of absolute value 1.
    #[test]
    fn eisenstein_involution_labels() {
        let one = DirichletCharacter::trivial(1);
        let chi5 = DirichletCharacter::from_exponents(5, &[2]).unwrap(); // quadratic mod 5
        let w = wq_on_eisenstein(4, &one, &chi5, 5).unwrap();
        assert_eq!(w.psi_new.modulus(), 5);
        assert_eq!(w.phi_new.modulus(), 1);
        let w2 = wq_on_eisenstein(4, &w.psi_new, &w.phi_new, 5).unwrap();
        assert!(w2.psi_new.equals(&one));
        assert!(w2.phi_new.equals(&chi5));
        let total = w.scalar_g.mul(&w2.scalar_g);
        let c = total.embed(PREC);
        assert!((c.abs().to_f64() - 1.0).abs() < 1e-40);
    }

    /// Full numeric Eisenstein identity: E_4^{1,chi_5} | W_5 =
    /// scalar_e * E_4^{chi_5,1} at tau = (1+i)/3.
    #[test]
    fn eisenstein_w5_numeric() {
        let one = DirichletCharacter::trivial(1);
        let chi5 = DirichletCharacter::from_exponents(5, &[2]).unwrap();
        let e_in = eisenstein_new(4, &one, &chi5, 320).to_complex(PREC);
        let we = wq_on_eisenstein_e(4, &one, &chi5, 5).unwrap();
        let e_out = eisenstein_new(4, &we.psi_new, &we.phi_new, 320).to_complex(PREC);
        let w = al_matrix(5, 5, 1, 1).unwrap();
        let t0 = tau(1.0 / 3.0, 1.0 / 3.0);
        let lhs = slash_checked(&e_in, w.as_i64(), 4, &t0, 1e-24).unwrap();
        let rhs = e_out.eval_at_tau(&t0).0.mul(&we.scalar_g.embed(PREC));
        let diff = lhs.sub(&rhs).abs().to_f64();
        assert!(diff < 1e-20, "E_4^{{1,chi5}} | W_5 mismatch: {:e}", diff);
    }

    /// Old-subspace commutation, degenerate case: t = 1, N = M means the
    /// formula collapses to the inner W_Q.
    #[test]
    fn old_subspace_degenerate() {
        let eps = DirichletCharacter::trivial(11);
        let w = wq_on_old(11, &eps, 2, 1, 11, 11).unwrap();
        assert_eq!(w.inner_q, 11);
        assert_eq!(w.dilation, 1);
        assert!(w.scalar.to_cyclo().unwrap().is_one());
    }

    /// E_6 level 1, t = Q = p: f|B_p|W_p = p^{-k/2} ... = (1/p)^{k/2} f,
    /// checked numerically for f = Delta (k = 12), p = 3.
    #[test]
    fn old_subspace_numeric_delta() {
        let eps1 = DirichletCharacter::trivial(1);
        let w = wq_on_old(1, &eps1, 12, 3, 3, 3).unwrap();
        assert_eq!(w.inner_q, 1);
        assert_eq!(w.dilation, 1);
        // scalar = (1/3)^6
        let c = w.scalar.to_cyclo().unwrap();
        assert!(c.equals(&CycloNum::from_rational(BigRational::new(
            1.into(),
            729.into()
        ))));
        // numeric: (Delta|B_3)|_12 w_3 = 3^-6 Delta
        let delta = delta_series(420).to_complex(PREC);
        let delta_b3 = delta_series(140).to_complex(PREC).dilate(3);
        let wmat = al_matrix(3, 3, 1, 1).unwrap();
        let t0 = tau(0.11, 0.8);
        let lhs = slash_checked(&delta_b3, wmat.as_i64(), 12, &t0, 1e-24).unwrap();
        let rhs = delta.eval_at_tau(&t0).0.mul_real(
            &Real::from_i64(729, PREC).recip(),
        );
        let diff = lhs.sub(&rhs).abs().to_f64();
        assert!(diff < 1e-20, "Delta|B_3|W_3 mismatch: {:e}", diff);
    }

    #[test]
    fn compose_scalar_cases() {
        let eps = DirichletCharacter::trivial(15);
        assert!(wq_compose_scalar(3, 5, &eps).unwrap().is_one());
        assert!(wq_compose_scalar(1, 15, &eps).unwrap().is_one());
        assert!(wq_compose_scalar(3, 3, &eps).is_err());
        // order-6 character mod 91: scalar is eps_13(7)
        let chars = DirichletCharacter::all(91);
        let chi = chars
            .iter()
            .find(|c| c.order() == 6 && !c.decompose(13).unwrap().0.is_trivial())
            .unwrap();
        let s = wq_compose_scalar(7, 13, chi).unwrap();
        let (chi13, _) = chi.decompose(13).unwrap();
        assert!(s.equals(&chi13.eval(7)));
    }

    #[test]
    fn cusp_counts() {
        // X_0(l): H = everything (k = 2)
        let gens: Vec<u64> = arith::unit_group_generators(13 * 1).iter().map(|g| g.0).collect();
        let cs = enumerate_cusps(13, 1, &gens).unwrap();
        assert_eq!(cs.cusps.len(), 2);
        assert!(cs.cusps.iter().all(|c| c.rational));
        // X_1(13)-like: H = {1} mod 13: 12 cusps in two diamond orbits of 6
        let cs1 = enumerate_cusps(13, 1, &[1]).unwrap();
        assert_eq!(cs1.cusps.len(), 12);
        let over_zero = cs1.cusps.iter().filter(|c| c.ell_side == CuspSide::Zero).count();
        assert_eq!(over_zero, 6);
        assert!(cs1
            .cusps
            .iter()
            .filter(|c| c.ell_side == CuspSide::Zero)
            .all(|c| c.rational));
        assert!(cs1
            .cusps
            .iter()
            .filter(|c| c.ell_side == CuspSide::Infinity)
            .all(|c| !c.rational));
        // k - 2 = 4 at l = 13: K = 4-torsion (order 4 contains -1): 2 * 3 cusps
        let k_gens = (1..13u64)
            .filter(|x| arith::powmod(*x, 4, 13) == 1)
            .collect::<Vec<_>>();
        let csk = enumerate_cusps(13, 1, &k_gens).unwrap();
        assert_eq!(csk.cusps.len(), 6);
        // with an X_0(5) factor the count doubles
        let csk5 = enumerate_cusps(13, 5, &k_gens).unwrap();
        assert_eq!(csk5.cusps.len(), 12);
    }
}

//! Quasilinear extension of weight-2 q-expansion prefixes: bivariate
//! modular-equation discovery mod p, Newton iteration in F_p[[q]], and
//! centered CRT lifting back to exact integers under Deligne-type bounds.
//!
//! The pipeline per basis: f_1 through a relation between f_1/du and
//! u = 1/j; f_2 through (f_2/f_1, u); later forms through (f_i/f_1,
//! f_2/f_1); forms with nontrivial nebentypus of order r through the
//! descent of (F_i/f_1)^r to the trivial-character curve, one prime ideal
//! per embedding, recombined by CRT.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::chartools::DirichletCharacter;
use crate::cyclo::CycloNum;
use crate::fp::{self, Fp};
use crate::series::{u_series, CycloRing, FpRing, QExpansion};

#[derive(Debug)]
pub enum QextError {
    InsufficientPrecision { needed: usize, available: usize },
    NoRelation { da: usize, db: usize },
    SpuriousRelation { da: usize, db: usize },
    SingularRelation,
    SeedTooShort { needed: usize, available: usize },
    LiftOutOfBounds { index: usize },
    GenusTooSmall { g0: u64 },
    NotSquarefree(u64),
    BadSeed(String),
}

impl std::fmt::Display for QextError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QextError::InsufficientPrecision { needed, available } => {
                write!(f, "relation finding needs {} terms, have {}", needed, available)
            }
            QextError::NoRelation { da, db } => {
                write!(f, "no kernel at degrees ({}, {})", da, db)
            }
            QextError::SpuriousRelation { da, db } => {
                write!(f, "kernel at degrees ({}, {}) fails resubstitution", da, db)
            }
            QextError::SingularRelation => write!(f, "dR/dX is not invertible at the seed"),
            QextError::SeedTooShort { needed, available } => {
                write!(f, "seed has {} terms, Newton needs > {}", available, needed)
            }
            QextError::LiftOutOfBounds { index } => {
                write!(f, "lifted coefficient {} exceeds its bound", index)
            }
            QextError::GenusTooSmall { g0 } => {
                write!(f, "X_0 genus {} < 2: the two-anchor method does not apply", g0)
            }
            QextError::NotSquarefree(n) => write!(f, "level {} is not squarefree", n),
            QextError::BadSeed(s) => write!(f, "bad seed: {}", s),
        }
    }
}

impl std::error::Error for QextError {}

// ---- Relations ----

/// A nonzero polynomial R(X, Y) over F_p with R(A(q), B(q)) = O(q^prec).
#[derive(Clone, Debug)]
pub struct BivariateRelation {
    pub p: u64,
    /// coeffs[i][j] multiplies X^i Y^j
    pub coeffs: Vec<Vec<u64>>,
    pub deg_a: usize,
    pub deg_b: usize,
    /// precision the defining check was performed at
    pub checked_prec: usize,
}

impl BivariateRelation {
    /// dR/dX as a relation grid (degree one less in X).
    pub fn derivative_x(&self) -> BivariateRelation {
        let fp = Fp { p: self.p };
        let coeffs: Vec<Vec<u64>> = (1..=self.deg_a)
            .map(|i| {
                self.coeffs[i]
                    .iter()
                    .map(|&c| fp.mul(c, i as u64 % self.p))
                    .collect()
            })
            .collect();
        BivariateRelation {
            p: self.p,
            coeffs,
            deg_a: self.deg_a.saturating_sub(1),
            deg_b: self.deg_b,
            checked_prec: self.checked_prec,
        }
    }

    /// Evaluate at series arguments, truncated; `b_powers[j]` = B^j.
    pub fn eval(&self, a: &[u64], b_powers: &[Vec<u64>], trunc: usize) -> Vec<u64> {
        let fp = Fp { p: self.p };
        // inner polynomials in B, then Horner in A
        let mut acc = vec![0u64; trunc];
        for i in (0..=self.deg_a).rev() {
            if i < self.deg_a {
                acc = fp::series_mul(&acc, &a[..a.len().min(trunc)], self.p, trunc);
            }
            // add sum_j c_{ij} B^j
            if i < self.coeffs.len() {
                for (j, &c) in self.coeffs[i].iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (t, bv) in b_powers[j].iter().take(trunc).enumerate() {
                        acc[t] = fp.add(acc[t], fp.mul(c, *bv));
                    }
                }
            }
        }
        acc
    }
}

/// Powers B^0..B^deg of a series, each truncated.
pub fn series_powers(b: &[u64], deg: usize, p: u64, trunc: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(deg + 1);
    let mut one = vec![0u64; trunc.min(1).max(1)];
    one[0] = 1 % p;
    out.push(one);
    for j in 1..=deg {
        let prev = &out[j - 1];
        out.push(fp::series_mul(prev, &b[..b.len().min(trunc)], p, trunc));
    }
    out
}

/// Find a nonzero R with deg_X <= da, deg_Y <= db and R(A, B) = O(q^prec),
/// by a kernel computation on the matrix of monomial series A^i B^j.
/// Monomial columns are ordered by total degree then lexicographically, so
/// the returned relation has the canonical smallest leading monomial.
pub fn find_relation(
    a: &QExpansion<FpRing>,
    b: &QExpansion<FpRing>,
    da: usize,
    db: usize,
) -> Result<BivariateRelation, QextError> {
    let p = a.ring().fp.p;
    let needed = ((da + 1) * (db + 1) * 11).div_ceil(10); // 10% guard
    let avail = a.prec().min(b.prec());
    if avail < needed {
        return Err(QextError::InsufficientPrecision { needed, available: avail });
    }
    let prec = needed;
    let a_pows = series_powers(a.coeffs(), da, p, prec);
    let b_pows = series_powers(b.coeffs(), db, p, prec);
    // monomials sorted by (i + j, i, j)
    let mut monomials: Vec<(usize, usize)> = (0..=da)
        .flat_map(|i| (0..=db).map(move |j| (i, j)))
        .collect();
    monomials.sort_by_key(|&(i, j)| (i + j, i));
    let ncols = monomials.len();
    // rows[r][c] = q^r coefficient of monomial c
    let mut rows = vec![vec![0u64; ncols]; prec];
    for (c, &(i, j)) in monomials.iter().enumerate() {
        let m = fp::series_mul(&a_pows[i], &b_pows[j], p, prec);
        for (r, &v) in m.iter().enumerate() {
            rows[r][c] = v;
        }
    }
    let kernel = fp::right_kernel(p, &mut rows, ncols).ok_or(QextError::NoRelation { da, db })?;
    let mut coeffs = vec![vec![0u64; db + 1]; da + 1];
    for (c, &(i, j)) in monomials.iter().enumerate() {
        coeffs[i][j] = kernel[c];
    }
    let rel = BivariateRelation { p, coeffs, deg_a: da, deg_b: db, checked_prec: avail };
    // resubstitution at full available precision (the defining check)
    let b_pows_full = series_powers(b.coeffs(), db, p, avail);
    let res = rel.eval(&a.coeffs()[..avail.min(a.prec())], &b_pows_full, avail);
    if res.iter().any(|&c| c != 0) {
        return Err(QextError::SpuriousRelation { da, db });
    }
    Ok(rel)
}

// ---- Newton extension ----

pub struct ExtensionResult {
    pub series: QExpansion<FpRing>,
    /// correct-prefix length after each iteration (for the quadratic
    /// convergence invariant)
    pub prefix_trace: Vec<usize>,
}

/// Extend `a_seed` to the unique solution of R(A, B) = 0 agreeing with the
/// seed, to `target` terms. The derivative dR/dX at the seed must have
/// finite q-valuation v with seed length > 2v.
pub fn newton_extend(
    rel: &BivariateRelation,
    a_seed: &QExpansion<FpRing>,
    b_full: &QExpansion<FpRing>,
    target: usize,
) -> Result<ExtensionResult, QextError> {
    let p = rel.p;
    let ring = FpRing::new(p);
    let target = target.min(b_full.prec());
    let rx = rel.derivative_x();
    let b_pows_full = series_powers(b_full.coeffs(), rel.deg_b, p, target);
    // valuation of dR/dX at the seed
    let seed_len = a_seed.prec();
    let rx_at_seed = rx.eval(a_seed.coeffs(), &b_pows_full, seed_len);
    let v = rx_at_seed
        .iter()
        .position(|&c| c != 0)
        .ok_or(QextError::SingularRelation)?;
    if seed_len <= 2 * v + 1 {
        return Err(QextError::SeedTooShort { needed: 2 * v + 1, available: seed_len });
    }
    let mut a: Vec<u64> = a_seed.coeffs().to_vec();
    let mut known = seed_len;
    let mut trace = vec![known];
    while known < target {
        let next = (2 * known - v).min(target);
        let work = next + v;
        a.resize(work.max(a.len()), 0);
        let r_val = rel.eval(&a[..work], &b_pows_full, work);
        let rx_val = rx.eval(&a[..work], &b_pows_full, work);
        // correction = R / R_X with valuation shift v
        debug_assert!(r_val[..v.min(r_val.len())].iter().all(|&c| c == 0));
        debug_assert!(rx_val[v] != 0);
        let corr = fp::series_div(&r_val[v..], &rx_val[v..], p, next);
        for (i, c) in corr.iter().enumerate() {
            if i < a.len() {
                a[i] = ring.fp.sub(a[i], *c);
            }
        }
        known = next;
        trace.push(known);
    }
    a.resize(target, 0);
    // final defining check
    let res = rel.eval(&a, &b_pows_full, target);
    if res.iter().any(|&c| c != 0) {
        return Err(QextError::SpuriousRelation { da: rel.deg_a, db: rel.deg_b });
    }
    Ok(ExtensionResult { series: QExpansion::new(ring, a, target), prefix_trace: trace })
}

// ---- Integer lifting ----

/// Window certifying unambiguous centered lifts: modulus > 2 * bound.
#[derive(Clone, Debug)]
pub struct LiftWindow {
    pub modulus: BigInt,
    pub bound: BigInt,
}

impl LiftWindow {
    pub fn new(modulus: BigInt, bound: BigInt) -> Self {
        assert!(
            modulus > BigInt::from(2) * &bound,
            "lift window violated: modulus must exceed twice the bound"
        );
        LiftWindow { modulus, bound }
    }
}

/// Deligne-type window for weight-2 cusp forms: |a_n| <= slack * sigma_0(n)
/// sqrt(n) for n < n_max.
pub fn deligne_bound(n_max: usize, slack: u64) -> BigInt {
    let mut best: u64 = 1;
    let spf = arith::spf_sieve(n_max.max(2));
    let mut sigma0 = vec![0u32; n_max.max(2)];
    if n_max > 1 {
        sigma0[1] = 1;
    }
    for n in 2..n_max {
        let q = spf[n] as usize;
        let mut m = n;
        let mut e = 0;
        while m % q == 0 {
            m /= q;
            e += 1;
        }
        sigma0[n] = sigma0[m] * (e + 1);
    }
    for n in 1..n_max {
        // compare sigma0(n)^2 * n against best^2
        let v = (sigma0[n] as u64).pow(2).saturating_mul(n as u64);
        if v > best * best {
            best = arith::isqrt(v) + 1;
        }
    }
    BigInt::from(best * slack)
}

/// Centered CRT lift of aligned residue vectors; every lifted value must
/// stay within the window bound.
pub fn lift_integer(
    residues: &[(u64, Vec<u64>)],
    window: &LiftWindow,
) -> Result<Vec<BigInt>, QextError> {
    assert!(!residues.is_empty());
    let len = residues[0].1.len();
    assert!(residues.iter().all(|(_, v)| v.len() == len), "residue lists not aligned");
    let mut modulus = BigInt::one();
    for (p, _) in residues {
        modulus *= BigInt::from(*p);
    }
    assert_eq!(modulus, window.modulus, "window modulus mismatch");
    let half = &modulus / 2;
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        // incremental CRT
        let mut x = BigInt::from(residues[0].1[i]);
        let mut m = BigInt::from(residues[0].0);
        for (p, v) in &residues[1..] {
            let pb = BigInt::from(*p);
            let m_mod_p = (&m % &pb).to_string().parse::<i128>().unwrap();
            let inv = arith::inv_mod(m_mod_p, *p as i128).expect("moduli coprime");
            let x_mod_p = ((&x % &pb) + &pb) % &pb;
            let x_mod_p = x_mod_p.to_string().parse::<i128>().unwrap();
            let t =
                ((v[i] as i128 - x_mod_p).rem_euclid(*p as i128) * inv).rem_euclid(*p as i128);
            x += &m * BigInt::from(t);
            m *= &pb;
        }
        // centered
        if &x > &half {
            x -= &modulus;
        }
        if x.abs() > window.bound {
            return Err(QextError::LiftOutOfBounds { index: i });
        }
        out.push(x);
    }
    Ok(out)
}

// ---- Basis extension orchestration ----

/// A seed: exact integer-coefficient prefix of a weight-2 form, with its
/// nebentypus (trivial for the X_0 basis forms).
pub struct BasisSeed {
    pub label: String,
    pub series: QExpansion<CycloRing>,
    pub nebentypus: DirichletCharacter,
}

/// Record of the primes, degrees and bounds a run used.
#[derive(Debug, Clone)]
pub struct QextManifest {
    pub level: u64,
    pub target: usize,
    pub primes: Vec<u64>,
    pub relations: Vec<(String, usize, usize)>,
    pub bound: BigInt,
}

pub struct ExtendedBasis {
    pub forms: Vec<QExpansion<CycloRing>>,
    pub manifest: QextManifest,
}

/// Geometry of X_0(N) for squarefree N (index, cusps, elliptic counts,
/// genus), by the classical closed formulas.
pub fn gamma0_geometry(n: u64) -> (u64, u64, u64, u64, u64) {
    assert!(arith::is_squarefree(n));
    let fs = arith::factor(n);
    let index: u64 = crate::series::gamma0_index(n);
    let cusps = 1u64 << fs.len(); // 2^omega(N) for squarefree N
    let nu2: u64 = if n % 4 == 0 {
        0
    } else {
        fs.iter()
            .map(|&(p, _)| match p % 4 {
                1 => 2,
                2 => 1,
                _ => 0,
            })
            .product()
    };
    let nu3: u64 = if n % 9 == 0 {
        0
    } else {
        fs.iter()
            .map(|&(p, _)| match p % 3 {
                1 => 2,
                0 => 1,
                _ => 0,
            })
            .product()
    };
    // 12 (g - 1) = index - 3 nu2 - 4 nu3 - 6 cusps
    let twelve_g = 12 + index as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * cusps as i64;
    assert!(twelve_g >= 0 && twelve_g % 12 == 0, "genus formula mismatch at N = {}", n);
    (index, cusps, nu2, nu3, twelve_g as u64 / 12)
}

fn to_modp_rational(s: &QExpansion<CycloRing>, p: u64) -> QExpansion<FpRing> {
    s.to_modp(p)
}

fn du_times_q(u: &QExpansion<FpRing>) -> QExpansion<FpRing> {
    u.q_dq()
}

/// Extend a rational-coefficient basis of S_2(Gamma_0(level)) from Sturm-
/// length integer seeds to `target` terms, with exact lifted output.
///
/// Seeds must be ordered with val(f_1) = 1 (the first form anchors the
/// modular equation); later seeds may have any valuation >= 1.
pub fn extend_basis_trivial(
    seeds: &[BasisSeed],
    level: u64,
    target: usize,
    bound_slack: u64,
) -> Result<ExtendedBasis, QextError> {
    if !arith::is_squarefree(level) {
        return Err(QextError::NotSquarefree(level));
    }
    let (index, cusps, _, _, g0) = gamma0_geometry(level);
    if g0 < 2 {
        return Err(QextError::GenusTooSmall { g0 });
    }
    if seeds.is_empty() || seeds[0].series.valuation() != Some(1) {
        return Err(QextError::BadSeed("first seed must have valuation 1".into()));
    }
    let d0 = index as usize;
    let s0 = cusps as usize;
    let g0u = g0 as usize;
    let bound = deligne_bound(target.max(2), bound_slack);
    let two_bound: BigInt = BigInt::from(2) * &bound;
    let p = arith::next_prime((two_bound + BigInt::one()).to_string().parse::<u64>().unwrap());
    let window = LiftWindow::new(BigInt::from(p), bound.clone());
    let mut manifest = QextManifest {
        level,
        target,
        primes: vec![p],
        relations: Vec::new(),
        bound: bound.clone(),
    };
    // shared data mod p
    let rel_prec_f1 = ((d0 + 1) * (d0 + s0 + 2 * g0u - 1) * 11).div_ceil(10) + 8;
    let u_big = u_series(target.max(rel_prec_f1) + 2, p);
    let du = du_times_q(&u_big);
    let mut out_forms: Vec<QExpansion<CycloRing>> = Vec::new();
    let mut f1_full: Option<QExpansion<FpRing>> = None;
    let mut f2_over_f1: Option<QExpansion<FpRing>> = None;
    for (idx, seed) in seeds.iter().enumerate() {
        let seed_p = to_modp_rational(&seed.series, p);
        let extended: QExpansion<FpRing> = if idx == 0 {
            // A = f1 / du, B = u
            let a_seed = seed_p.div(&du.truncate(seed_p.prec()));
            let (da, db) = (d0, d0 + s0 + 2 * g0u - 2);
            let rel = find_relation(
                &a_seed_extension_input(&u_big, &du, &seed_p, rel_prec_f1)?,
                &u_big.truncate(rel_prec_f1),
                da,
                db,
            )?;
            manifest.relations.push((seed.label.clone(), da, db));
            let ext = newton_extend(&rel, &a_seed, &u_big, target)?;
            let f1 = ext.series.mul(&du.truncate(target));
            f1_full = Some(f1.clone());
            f1
        } else if idx == 1 {
            // A = f2 / f1, B = u
            let f1 = f1_full.as_ref().unwrap();
            let a_seed = seed_p.div(&f1.truncate(seed_p.prec()));
            let (da, db) = (d0, 2 * g0u - 2);
            let rel_prec = ((da + 1) * (db + 1) * 11).div_ceil(10) + 8;
            let a_for_rel = restrict_ratio(f1, &u_big, &seed_p, rel_prec)?;
            let rel = find_relation(&a_for_rel, &u_big.truncate(rel_prec), da, db)?;
            manifest.relations.push((seed.label.clone(), da, db));
            let ext = newton_extend(&rel, &a_seed, &u_big, target)?;
            f2_over_f1 = Some(ext.series.clone());
            ext.series.mul(&f1.truncate(target))
        } else {
            // A = f_i / f1, B = f2 / f1
            let f1 = f1_full.as_ref().unwrap();
            let b = f2_over_f1.as_ref().unwrap();
            let a_seed = seed_p.div(&f1.truncate(seed_p.prec()));
            let (da, db) = (2 * g0u - 2, 2 * g0u - 2);
            let rel_prec = ((da + 1) * (db + 1) * 11).div_ceil(10) + 8;
            let a_for_rel = restrict_ratio(f1, b, &seed_p, rel_prec)?;
            let rel = find_relation(&a_for_rel, &b.truncate(rel_prec), da, db)?;
            manifest.relations.push((seed.label.clone(), da, db));
            let ext = newton_extend(&rel, &a_seed, b, target)?;
            ext.series.mul(&f1.truncate(target))
        };
        // lift to Z
        let lifted = lift_integer(&[(p, extended.coeffs().to_vec())], &window)?;
        let coeffs: Vec<CycloNum> = lifted
            .into_iter()
            .map(|v| CycloNum::from_rational(BigRational::from_integer(v)))
            .collect();
        out_forms.push(QExpansion::new(CycloRing, coeffs, extended.prec()));
    }
    Ok(ExtendedBasis { forms: out_forms, manifest })
}

/// The relation input for f_1: A = f_1/du needs more terms than the seed
/// provides, which only matters for the *relation-finding* stage. That
/// stage is allowed to consume the seed only; insufficient seed precision
/// surfaces as InsufficientPrecision.
fn a_seed_extension_input(
    _u: &QExpansion<FpRing>,
    du: &QExpansion<FpRing>,
    seed: &QExpansion<FpRing>,
    rel_prec: usize,
) -> Result<QExpansion<FpRing>, QextError> {
    if seed.prec() < rel_prec {
        return Err(QextError::InsufficientPrecision {
            needed: rel_prec,
            available: seed.prec(),
        });
    }
    Ok(seed.div(&du.truncate(seed.prec())))
}

fn restrict_ratio(
    f1: &QExpansion<FpRing>,
    _b: &QExpansion<FpRing>,
    seed: &QExpansion<FpRing>,
    rel_prec: usize,
) -> Result<QExpansion<FpRing>, QextError> {
    if seed.prec() < rel_prec {
        return Err(QextError::InsufficientPrecision {
            needed: rel_prec,
            available: seed.prec(),
        });
    }
    Ok(seed.div(&f1.truncate(seed.prec())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::eta_product;

    #[test]
    fn relation_trivial_cases() {
        let p = 10007u64;
        let u = u_series(60, p);
        // A = B: kernel contains X - Y
        let rel = find_relation(&u, &u, 1, 1).unwrap();
        assert_eq!(rel.coeffs[1][0], 1); // X coefficient (pivot-normalized)
        assert_eq!(rel.coeffs[0][1], p - 1);
        // A = u^2 vs B = u: the kernel is X - Y^2 up to scaling; the
        // canonical pick normalizes the first free monomial (Y^2) to 1
        let u2 = u.mul(&u);
        let rel2 = find_relation(&u2, &u, 1, 2).unwrap();
        assert_eq!(rel2.coeffs[0][2], 1);
        assert_eq!(rel2.coeffs[1][0], p - 1);
        assert_eq!(rel2.coeffs[0][1], 0);
    }

    #[test]
    fn relation_e6sq_over_e4cubed() {
        // A = E6^2/E4^3 = 1 - 1728 u exactly (since j = E4^3/Delta and
        // E4^3 - E6^2 = 1728 Delta)
        let p = 65537u64;
        let b = 220;
        let e4 = crate::series::e4_series(b).to_modp(p);
        let e6 = crate::series::e6_series(b).to_modp(p);
        let a = e6.pow(2).div(&e4.pow(3));
        let u = u_series(b, p);
        let rel = find_relation(&a, &u, 1, 1).unwrap();
        // X + 1728 Y - 1 = 0 up to normalization
        let fp = Fp { p };
        let x = rel.coeffs[1][0];
        assert_eq!(fp.mul(x, 1), x);
        assert_eq!(rel.coeffs[0][1], fp.mul(x, 1728 % p));
        assert_eq!(rel.coeffs[0][0], fp.neg(x));
    }

    #[test]
    fn newton_square_root_relation() {
        // R = X - Y^2, B = u, seed = u^2 prefix: recovers A = u^2
        let p = 10007u64;
        let u = u_series(400, p);
        let u2 = u.mul(&u);
        let rel = find_relation(&u2.truncate(60), &u.truncate(60), 1, 2).unwrap();
        let seed = u2.truncate(8);
        let ext = newton_extend(&rel, &seed, &u, 400).unwrap();
        assert_eq!(ext.series.coeffs(), u2.coeffs());
        // quadratic convergence: prefix at least doubles minus valuation
        for w in ext.prefix_trace.windows(2) {
            assert!(w[1] >= (2 * w[0] - 4).min(400), "trace {:?}", ext.prefix_trace);
        }
        // idempotence: extending to the same target is a no-op
        let again = newton_extend(&rel, &ext.series, &u, 400).unwrap();
        assert_eq!(again.series.coeffs(), ext.series.coeffs());
    }

    #[test]
    fn lift_roundtrip() {
        let p1 = arith::next_prime(1 << 20);
        let p2 = arith::next_prime(p1 + 1);
        let vals: Vec<i64> = vec![0, 5, -3, 999_983, -999_983, 123456, -654321];
        let window = LiftWindow::new(
            BigInt::from(p1) * BigInt::from(p2),
            BigInt::from(1_000_000i64),
        );
        let r1: Vec<u64> = vals.iter().map(|&v| v.rem_euclid(p1 as i64) as u64).collect();
        let r2: Vec<u64> = vals.iter().map(|&v| v.rem_euclid(p2 as i64) as u64).collect();
        let lifted = lift_integer(&[(p1, r1), (p2, r2)], &window).unwrap();
        for (l, v) in lifted.iter().zip(vals.iter()) {
            assert_eq!(*l, BigInt::from(*v));
        }
        // single prime path and bound violation
        let w1 = LiftWindow::new(BigInt::from(p1), BigInt::from(10));
        let got = lift_integer(&[(p1, vec![5, p1 - 3])], &w1).unwrap();
        assert_eq!(got, vec![BigInt::from(5), BigInt::from(-3)]);
        assert!(matches!(
            lift_integer(&[(p1, vec![10_000])], &w1),
            Err(QextError::LiftOutOfBounds { .. })
        ));
    }

    #[test]
    fn genus_small_levels() {
        assert_eq!(gamma0_geometry(11).4, 1);
        assert_eq!(gamma0_geometry(33).4, 3);
        assert_eq!(gamma0_geometry(35).4, 3);
        assert_eq!(gamma0_geometry(26).4, 2);
        assert_eq!(gamma0_geometry(15).4, 1);
    }

    #[test]
    fn refuses_genus_below_two() {
        let f11 = eta_product(&[(1, 2), (11, 2)], 40);
        let seed = BasisSeed {
            label: "11a".into(),
            series: f11,
            nebentypus: DirichletCharacter::trivial(11),
        };
        match extend_basis_trivial(&[seed], 11, 500, 4) {
            Err(QextError::GenusTooSmall { g0: 1 }) => {}
            other => panic!("expected GenusTooSmall, got {:?}", other.err()),
        }
    }
}

//! Construction of cuspidal spaces from products of Eisenstein series.
//!
//! The shipped newform dataset is generated offline by this module: spaces
//! M_k(N, eps) are spanned by products of at most three Eisenstein series
//! E_j^{psi,phi}|B_t (plus the E^(M) family), the cuspidal subspace is cut
//! out by exact constant-term conditions at every cusp (computed through
//! the Atkin-Lehner formulas, never numerically), and eigenforms are split
//! off by exact kernel computations against T_2.
//!
//! Everything is verified on the fly: eigenforms are re-checked to be
//! Hecke eigenvectors on a long coefficient range, and eta-quotient seeds
//! are admitted only after their cusp orders pass the Ligozat criterion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use mfgal::arith;
use mfgal::atkin::{wq_on_eisenstein_e, wq_on_old, ExactScalar};
use mfgal::chartools::DirichletCharacter;
use mfgal::cyclo::CycloNum;
use mfgal::linalg::{self, CycloField};
use mfgal::newform::{NewformRecord, RecordError};
use mfgal::series::{eisenstein_e2m, eisenstein_new, CycloRing, QExpansion};

/// One Eisenstein factor of a candidate product.
#[derive(Clone, Debug)]
pub enum EisFactor {
    /// E_k^{psi,phi} | B_t (psi, phi primitive)
    Ek { k: u64, psi: DirichletCharacter, phi: DirichletCharacter, t: u64 },
    /// E^(m) | B_t (weight 2, trivial nebentypus mod m t)
    E2M { m: u64, t: u64 },
}

impl EisFactor {
    pub fn weight(&self) -> u64 {
        match self {
            EisFactor::Ek { k, .. } => *k,
            EisFactor::E2M { .. } => 2,
        }
    }

    /// Nebentypus contribution, as a character mod `level`.
    fn char_mod(&self, level: u64) -> DirichletCharacter {
        match self {
            EisFactor::Ek { psi, phi, .. } => {
                psi.product(phi).extend_to_modulus(level)
            }
            EisFactor::E2M { .. } => DirichletCharacter::trivial(level),
        }
    }

    fn expand(&self, prec: usize) -> QExpansion<CycloRing> {
        match self {
            EisFactor::Ek { k, psi, phi, t } => {
                let base_prec = prec.div_ceil(*t as usize);
                eisenstein_new(*k, psi, phi, base_prec).dilate(*t).truncate(prec)
            }
            EisFactor::E2M { m, t } => {
                let base_prec = prec.div_ceil(*t as usize);
                eisenstein_e2m(*m, base_prec).dilate(*t).truncate(prec)
            }
        }
    }

    /// Exact constant term of (self | W_Q) at ambient level n, collapsed
    /// into a cyclotomic number (half powers go through Gauss sums).
    fn wq_constant_term(&self, q: u64, n: u64) -> CycloNum {
        match self {
            EisFactor::Ek { k, psi, phi, t } => {
                let m = psi.modulus() * phi.modulus();
                let eps = psi.product(phi).extend_to_modulus(m);
                let old = wq_on_old(m, &eps, *k, *t, q, n).expect("admissible factor");
                let inner =
                    wq_on_eisenstein_e(*k, psi, phi, old.inner_q).expect("inner divisor exact");
                let c0 = mfgal::series::eisenstein_constant_term(
                    *k,
                    &inner.psi_new,
                    &inner.phi_new,
                );
                old.scalar.mul(&inner.scalar_g).to_cyclo_full().mul(&c0)
            }
            EisFactor::E2M { m, t } => {
                let eps = DirichletCharacter::trivial(*m);
                let old = wq_on_old(*m, &eps, 2, *t, q, n).expect("admissible factor");
                // E^(m) | W_{m_Q} = E^(R) - E^(Q'); constant terms 1 - M
                let r = m / old.inner_q;
                let mut c = CycloNum::zero();
                if r > 1 {
                    c = c.add(&CycloNum::from_i64(1 - r as i64));
                }
                if old.inner_q > 1 {
                    c = c.sub(&CycloNum::from_i64(1 - old.inner_q as i64));
                }
                old.scalar.to_cyclo_full().mul(&c)
            }
        }
    }
}

/// A product of Eisenstein factors, a candidate element of M_k(N, eps).
#[derive(Clone, Debug)]
pub struct EisCandidate {
    pub factors: Vec<EisFactor>,
}

impl EisCandidate {
    pub fn weight(&self) -> u64 {
        self.factors.iter().map(|f| f.weight()).sum()
    }

    pub fn expand(&self, prec: usize) -> QExpansion<CycloRing> {
        let mut acc = QExpansion::one(CycloRing, prec);
        for f in &self.factors {
            acc = acc.mul(&f.expand(prec));
        }
        acc
    }

    /// Constant term of the product slashed by W_Q (weights add, so the
    /// slash distributes over the factors).
    pub fn wq_constant_term(&self, q: u64, n: u64) -> CycloNum {
        let mut acc = CycloNum::one();
        for f in &self.factors {
            acc = acc.mul(&f.wq_constant_term(q, n));
            if acc.is_zero() {
                return acc;
            }
        }
        acc
    }
}

/// The pool of admissible single factors at the given level: all
/// E_j^{psi,phi}|B_t with cond(psi) cond(phi) t | level, j <= max_weight,
/// plus the E^(m)|B_t family.
pub fn factor_pool(level: u64, max_weight: u64) -> Vec<EisFactor> {
    let mut pool = Vec::new();
    let divisors = arith::divisors(level);
    for &u in &divisors {
        for &v in &divisors {
            if u * v > level {
                continue;
            }
            for psi in DirichletCharacter::all(u) {
                if !psi.is_primitive() {
                    continue;
                }
                for phi in DirichletCharacter::all(v) {
                    if !phi.is_primitive() {
                        continue;
                    }
                    for j in 1..=max_weight {
                        let parity_ok = if j % 2 == 0 {
                            psi.is_even() == phi.is_even()
                        } else {
                            psi.is_even() != phi.is_even()
                        };
                        if !parity_ok {
                            continue;
                        }
                        if j == 2 && u == 1 && v == 1 {
                            continue; // E_2 alone is not modular
                        }
                        let mut t = 1;
                        while u * v * t <= level {
                            if level % (u * v * t) == 0 {
                                pool.push(EisFactor::Ek {
                                    k: j,
                                    psi: psi.clone(),
                                    phi: phi.clone(),
                                    t,
                                });
                            }
                            t += 1;
                        }
                    }
                }
            }
        }
    }
    for &m in &divisors {
        if m == 1 {
            continue;
        }
        for &t in &divisors {
            if m * t <= level && level % (m * t) == 0 {
                pool.push(EisFactor::E2M { m, t });
            }
        }
    }
    pool
}

/// Candidate products (at most `max_factors` factors) of total weight k
/// and total nebentypus eps.
pub fn candidates_for(
    level: u64,
    k: u64,
    eps: &DirichletCharacter,
    max_factors: usize,
    cap: usize,
) -> Vec<EisCandidate> {
    let pool = factor_pool(level, k);
    let mut out: Vec<EisCandidate> = Vec::new();
    // depth-limited product enumeration; factors indexed non-decreasing to
    // avoid duplicates
    fn recurse(
        pool: &[EisFactor],
        level: u64,
        k: u64,
        eps: &DirichletCharacter,
        start: usize,
        acc: &mut Vec<EisFactor>,
        acc_weight: u64,
        remaining: usize,
        out: &mut Vec<EisCandidate>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if acc_weight == k {
            // check character product
            let mut chi = DirichletCharacter::trivial(level);
            for f in acc.iter() {
                chi = chi.product(&f.char_mod(level));
            }
            if chi.equals(eps) {
                out.push(EisCandidate { factors: acc.clone() });
            }
            return;
        }
        if remaining == 0 || acc_weight > k {
            return;
        }
        for i in start..pool.len() {
            let w = pool[i].weight();
            if acc_weight + w > k {
                continue;
            }
            acc.push(pool[i].clone());
            recurse(pool, level, k, eps, i, acc, acc_weight + w, remaining - 1, out, cap);
            acc.pop();
        }
    }
    let mut acc = Vec::new();
    recurse(&pool, level, k, eps, 0, &mut acc, 0, max_factors, &mut out, cap);
    out
}

/// A cuspidal space with an echelonized exact basis.
pub struct CuspSpace {
    pub level: u64,
    pub weight: u64,
    pub eps: DirichletCharacter,
    pub prec: usize,
    pub basis: Vec<QExpansion<CycloRing>>,
}

/// Build the cuspidal subspace of the candidate span: candidates are
/// combined subject to the exact vanishing of the constant term of f|W_Q
/// for every exact divisor Q of the (squarefree) level.
pub fn cusp_space(
    level: u64,
    weight: u64,
    eps: &DirichletCharacter,
    prec: usize,
    max_factors: usize,
    cap: usize,
) -> CuspSpace {
    assert!(arith::is_squarefree(level), "cusp conditions assume squarefree level");
    let cands = candidates_for(level, weight, eps, max_factors, cap);
    assert!(!cands.is_empty(), "no Eisenstein candidates for the space");
    let expansions: Vec<QExpansion<CycloRing>> =
        cands.iter().map(|c| c.expand(prec)).collect();
    // cusp-vanishing conditions: rows = conditions, cols = candidates
    let qs = arith::divisors(level);
    let mut cond_rows: Vec<Vec<CycloNum>> = Vec::new();
    for &q in &qs {
        let row: Vec<CycloNum> = cands.iter().map(|c| c.wq_constant_term(q, level)).collect();
        cond_rows.push(row);
    }
    let kernel = linalg::kernel_basis(&CycloField, cond_rows);
    // combine candidates along kernel vectors, then echelonize by leading
    // coefficient to obtain an independent basis
    let mut combos: Vec<QExpansion<CycloRing>> = kernel
        .iter()
        .map(|v| {
            let mut acc = QExpansion::zero(CycloRing, prec);
            for (c, e) in v.iter().zip(expansions.iter()) {
                if !c.is_zero() {
                    acc = acc.add(&e.scale(c));
                }
            }
            acc
        })
        .filter(|s| !s.is_zero())
        .collect();
    let basis = echelonize(&mut combos, prec);
    CuspSpace { level, weight, eps: eps.clone(), prec, basis }
}

/// Gaussian elimination on series by leading coefficient; returns an
/// echelon basis with strictly increasing valuations where possible.
pub fn echelonize(
    forms: &mut Vec<QExpansion<CycloRing>>,
    prec: usize,
) -> Vec<QExpansion<CycloRing>> {
    let mut basis: Vec<QExpansion<CycloRing>> = Vec::new();
    'outer: for f in forms.drain(..) {
        let mut cur = f;
        loop {
            let Some(v) = cur.valuation() else {
                continue 'outer;
            };
            if let Some(b) = basis.iter().find(|b| b.valuation() == Some(v)) {
                let ratio = cur.coeff(v).mul(&b.coeff(v).inv());
                cur = cur.sub(&b.scale(&ratio));
            } else {
                let lead_inv = cur.coeff(v).inv();
                basis.push(cur.scale(&lead_inv));
                continue 'outer;
            }
            if cur.prec() < prec {
                continue 'outer;
            }
        }
    }
    basis.sort_by_key(|b| b.valuation());
    basis
}

/// T_p matrix on the basis of a cusp space (columns = images in basis
/// coordinates), requiring prec >= p * (max pivot index + margin).
pub fn hecke_matrix(space: &CuspSpace, p: u64) -> Vec<Vec<CycloNum>> {
    let dim = space.basis.len();
    let eps_p = space.eps.eval(p);
    let pivots: Vec<usize> =
        space.basis.iter().map(|b| b.valuation().expect("nonzero basis")).collect();
    let mut cols: Vec<Vec<CycloNum>> = Vec::new();
    for b in &space.basis {
        let img = b.t_p_raw(p, space.weight as u32, &eps_p);
        // express img in the echelon basis by peeling pivots
        let mut rem = img.clone();
        let mut coords = vec![CycloNum::zero(); dim];
        for (i, b2) in space.basis.iter().enumerate() {
            let pv = pivots[i];
            if pv >= rem.prec() {
                continue;
            }
            let c = rem.coeff(pv).clone();
            if c.is_zero() {
                continue;
            }
            coords[i] = c.clone();
            rem = rem.sub(&b2.truncate(rem.prec()).scale(&c));
        }
        assert!(
            rem.is_zero(),
            "T_{} does not stabilize the space (level {}, weight {})",
            p,
            space.level,
            space.weight
        );
        cols.push(coords);
    }
    // transpose to row-major matrix form M[i][j] = coefficient of basis i
    // in T_p(basis j)
    (0..dim)
        .map(|i| (0..dim).map(|j| cols[j][i].clone()).collect())
        .collect()
}

/// One split-off piece of a cusp space.
pub struct EigenPiece {
    /// the T_2 eigenvalue the piece was split by
    pub a2: CycloNum,
    /// normalized eigenform (a_1 = 1) when the eigenspace is 1-dimensional
    pub form: Option<QExpansion<CycloRing>>,
    pub dim: usize,
}

/// Split a cusp space by exact T_2 eigenvalues. Eigenvalues are supplied
/// by the caller (anchored values from q-expansion data); the function
/// verifies each kernel and returns the residual dimension.
pub fn split_by_eigenvalues(
    space: &CuspSpace,
    t2: &[Vec<CycloNum>],
    eigenvalues: &[CycloNum],
) -> (Vec<EigenPiece>, usize) {
    let dim = space.basis.len();
    let mut pieces = Vec::new();
    let mut accounted = 0usize;
    for ev in eigenvalues {
        // kernel of (T_2 - ev)
        let mut mat: Vec<Vec<CycloNum>> = t2.to_vec();
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = row[i].sub(ev);
        }
        let ker = linalg::kernel_basis(&CycloField, mat);
        if ker.is_empty() {
            continue;
        }
        let form = if ker.len() == 1 {
            let mut acc = QExpansion::zero(CycloRing, space.prec);
            for (c, b) in ker[0].iter().zip(space.basis.iter()) {
                if !c.is_zero() {
                    acc = acc.add(&b.scale(c));
                }
            }
            // normalize a_1 = 1
            let a1 = acc.coeff(1).clone();
            if a1.is_zero() {
                None
            } else {
                Some(acc.scale(&a1.inv()))
            }
        } else {
            None
        };
        accounted += ker.len();
        pieces.push(EigenPiece { a2: ev.clone(), form, dim: ker.len() });
    }
    (pieces, dim - accounted)
}

/// Check the eigenform property T_p f = a_p f for p <= bound on the
/// expansion itself (a_p read off the normalized coefficients).
pub fn verify_eigenform(space_eps: &DirichletCharacter, weight: u64, f: &QExpansion<CycloRing>, p_bound: u64) -> bool {
    let mut p = 2u64;
    while p <= p_bound {
        let eps_p = space_eps.eval(p);
        let tp = f.t_p_raw(p, weight as u32, &eps_p);
        let ap = f.coeff(p as usize).clone();
        for n in 1..tp.prec() {
            if !tp.coeff(n).equals(&ap.mul(f.coeff(n))) {
                return false;
            }
        }
        p = arith::next_prime(p + 1);
    }
    true
}

/// Package a split-off eigenform as a newform record.
pub fn eigenform_to_record(
    label: &str,
    level: u64,
    weight: u64,
    eps: &DirichletCharacter,
    f: &QExpansion<CycloRing>,
    field_order: u64,
) -> Result<NewformRecord, RecordError> {
    let n_max = f.prec() - 1;
    let (hecke_poly, cyclotomic_order, deg) = if field_order <= 2 {
        (
            vec![BigRational::zero(), BigRational::one()],
            None,
            1usize,
        )
    } else {
        let poly: Vec<BigRational> = mfgal::cyclo::cyclotomic_poly(field_order)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let deg = poly.len() - 1;
        (poly, Some(field_order), deg)
    };
    let an: Vec<Vec<BigRational>> = (1..=n_max)
        .map(|n| {
            let c = f.coeff(n);
            if deg == 1 {
                vec![c.as_rational().unwrap_or_else(|| {
                    panic!("{}: coefficient {} not rational", label, n)
                })]
            } else {
                let p = c.promote(field_order);
                let mut v = p.coeffs().to_vec();
                v.truncate(deg);
                v.resize(deg, BigRational::zero());
                v
            }
        })
        .collect();
    let rec = NewformRecord {
        label: label.to_string(),
        level,
        weight: weight as u32,
        nebentypus: eps.clone(),
        hecke_poly,
        cyclotomic_order,
        an,
    };
    rec.validate()?;
    Ok(rec)
}

// ---- Eta quotients with Ligozat verification ----

/// Orders of the eta quotient prod eta(t tau)^{e_t} at the cusps of
/// Gamma_0(level) (squarefree), in units where >= 1 at every cusp means
/// "cusp form". Cusps are indexed by divisors c | level.
pub fn eta_cusp_orders(factors: &[(u64, i64)], level: u64) -> Vec<(u64, BigRational)> {
    assert!(arith::is_squarefree(level));
    arith::divisors(level)
        .into_iter()
        .map(|c| {
            let mut total = BigRational::zero();
            for &(t, e) in factors {
                assert!(level % t == 0, "eta argument {} must divide the level", t);
                let g = arith::gcd(c, t);
                // N gcd(c,t)^2 / (24 c t), times the exponent
                let num = BigInt::from(level) * BigInt::from(g * g) * BigInt::from(e);
                let den = BigInt::from(24u64) * BigInt::from(c) * BigInt::from(t);
                total += BigRational::new(num, den);
            }
            (c, total)
        })
        .collect()
}

/// True when the eta quotient is a cusp form on Gamma_0(level).
pub fn eta_is_cusp_form(factors: &[(u64, i64)], level: u64) -> bool {
    eta_cusp_orders(factors, level)
        .iter()
        .all(|(_, ord)| *ord >= BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mfgal::series::eta_product;

    #[test]
    fn ligozat_orders() {
        // Delta on Gamma_0(1)
        assert!(eta_is_cusp_form(&[(1, 24)], 1));
        // level-11 newform
        assert!(eta_is_cusp_form(&[(1, 2), (11, 2)], 11));
        // the three level-35 quotients used as extension seeds
        assert!(eta_is_cusp_form(&[(5, 2), (7, 2)], 35));
        assert!(eta_is_cusp_form(&[(1, 1), (5, 1), (7, 1), (35, 1)], 35));
        assert!(eta_is_cusp_form(&[(1, 2), (35, 2)], 35));
        // eta(1)^2 eta(11)^2 is NOT cuspidal at level 33 in the "new" sense
        // but still a cusp form there
        assert!(eta_is_cusp_form(&[(1, 2), (11, 2)], 33));
        assert!(eta_is_cusp_form(&[(1, 1), (3, 1), (11, 1), (33, 1)], 33));
    }

    #[test]
    fn weight6_level5_space() {
        // dim S_6(Gamma_0(5)) = 1, spanned by the form with a_2 = 2, a_3 = -4
        let eps = DirichletCharacter::trivial(5);
        let space = cusp_space(5, 6, &eps, 60, 2, 200);
        assert_eq!(space.basis.len(), 1);
        let f = &space.basis[0];
        let g = f.scale(&f.coeff(1).inv());
        assert!(g.coeff(2).equals(&CycloNum::from_i64(2)));
        assert!(g.coeff(3).equals(&CycloNum::from_i64(-4)));
        assert!(verify_eigenform(&eps, 6, &g, 13));
    }

    #[test]
    fn weight8_level7_space() {
        // dim S_8(Gamma_0(7)) = 3: one rational eigenform with a_2 = -6
        let eps = DirichletCharacter::trivial(7);
        let space = cusp_space(7, 8, &eps, 80, 2, 300);
        assert_eq!(space.basis.len(), 3);
        let t2 = hecke_matrix(&space, 2);
        let (pieces, _rest) =
            split_by_eigenvalues(&space, &t2, &[CycloNum::from_i64(-6)]);
        assert_eq!(pieces.len(), 1);
        let f = pieces[0].form.as_ref().expect("one-dimensional eigenspace");
        assert!(f.coeff(3).equals(&CycloNum::from_i64(-42)));
        assert!(verify_eigenform(&eps, 8, f, 11));
    }

    #[test]
    fn level13_weight2_sextic_char() {
        // S_2(13, eps) for the order-6 character sending 2 -> -zeta_3:
        // dim 1, eigenform q + (zeta_3 - 1) q^2 - (2 zeta_3 - 2)? q^3 ...
        let eps = DirichletCharacter::from_exponents(13, &[2]).unwrap();
        assert_eq!(eps.order(), 6);
        // canonical generator of (Z/13)* is 2; check epsilon(2) = -zeta_3
        let val = eps.eval(2);
        let minus_z3 = CycloNum::zeta(3, 1).neg();
        let alt = CycloNum::zeta(6, 1); // -zeta_3 is the primitive 6th root
        assert!(val.equals(&minus_z3) || val.equals(&alt.conj()) || val.equals(&alt));
        let space = cusp_space(13, 2, &eps, 60, 2, 300);
        assert_eq!(space.basis.len(), 1);
        let f = &space.basis[0];
        let g = f.scale(&f.coeff(1).inv());
        let a2 = CycloNum::zeta(3, 1).sub(&CycloNum::one());
        assert!(
            g.coeff(2).equals(&a2) || g.coeff(2).equals(&a2.conj()),
            "a_2 = {} not zeta_3 - 1 up to conjugacy",
            g.coeff(2)
        );
        assert!(verify_eigenform(&eps, 2, &g, 7));
    }

    #[test]
    fn eta_matches_eisenstein_construction() {
        // the level-11 eta product spans S_2(Gamma_0(11))
        let eps = DirichletCharacter::trivial(11);
        let space = cusp_space(11, 2, &eps, 50, 3, 400);
        assert_eq!(space.basis.len(), 1);
        let f = space.basis[0].scale(&space.basis[0].coeff(1).inv());
        let eta = eta_product(&[(1, 2), (11, 2)], 50);
        for n in 0..50 {
            assert!(f.coeff(n).equals(eta.coeff(n)), "mismatch at {}", n);
        }
    }
}

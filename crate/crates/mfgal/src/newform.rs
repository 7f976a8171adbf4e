//! Ingested newform records: level, weight, nebentypus, Hecke-field
//! description and coefficient vectors, with exact accessors (rational or
//! cyclotomic Hecke fields) and complex embeddings.
//!
//! The JSON wire format is self-contained (no live database): coefficients
//! are vectors over the power basis of the Hecke field, each entry a
//! rational in "num/den" string form. Validation enforces a_1 = 1 and
//! spot-checks multiplicativity a_{mn} = a_m a_n on coprime pairs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::bigfloat::{Cplx, Real};
use crate::chartools::{CharacterJson, DirichletCharacter};
use crate::cyclo::{poly_mul_q, poly_rem, CycloNum};

#[derive(Debug)]
pub enum RecordError {
    Schema(String),
    NotNormalized(String),
    Multiplicativity { label: String, m: u64, n: u64 },
    HeckeDegree(String),
}

impl std::fmt::Display for RecordError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RecordError::Schema(s) => write!(f, "schema violation: {}", s),
            RecordError::NotNormalized(l) => write!(f, "{}: a_1 != 1", l),
            RecordError::Multiplicativity { label, m, n } => {
                write!(f, "{}: a_{} a_{} != a_{}", label, m, n, m * n)
            }
            RecordError::HeckeDegree(l) => write!(f, "{}: coefficient vector length mismatch", l),
        }
    }
}

impl std::error::Error for RecordError {}

/// An element of the Hecke field on the power basis of the defining
/// polynomial.
pub type HeckeElt = Vec<BigRational>;

/// One ingested eigenform.
#[derive(Clone, Debug)]
pub struct NewformRecord {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub nebentypus: DirichletCharacter,
    /// Monic defining polynomial of the Hecke field, constant term first.
    pub hecke_poly: Vec<BigRational>,
    /// When the Hecke field is cyclotomic: the generator equals zeta_n.
    pub cyclotomic_order: Option<u64>,
    /// a_1, a_2, ... as power-basis vectors.
    pub an: Vec<HeckeElt>,
}

impl NewformRecord {
    pub fn hecke_degree(&self) -> usize {
        self.hecke_poly.len() - 1
    }

    pub fn n_max(&self) -> u64 {
        self.an.len() as u64
    }

    /// a_n as a field element (n >= 1).
    pub fn a(&self, n: u64) -> &HeckeElt {
        assert!(n >= 1 && n <= self.n_max(), "a_{} not ingested for {}", n, self.label);
        &self.an[(n - 1) as usize]
    }

    /// a_n as a rational (degree-1 Hecke field only).
    pub fn a_rat(&self, n: u64) -> Option<BigRational> {
        if self.hecke_degree() == 1 {
            Some(self.a(n)[0].clone())
        } else {
            None
        }
    }

    /// a_n as an exact cyclotomic number (rational field or declared
    /// cyclotomic generator).
    pub fn a_cyclo(&self, n: u64) -> Option<CycloNum> {
        let v = self.a(n);
        if self.hecke_degree() == 1 {
            return Some(CycloNum::from_rational(v[0].clone()));
        }
        let order = self.cyclotomic_order?;
        let mut acc = CycloNum::zero();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&CycloNum::zeta(order, i as i64).mul_rational(c));
            }
        }
        Some(acc)
    }

    /// True when exact cyclotomic coefficient access is available.
    pub fn is_exact(&self) -> bool {
        self.hecke_degree() == 1 || self.cyclotomic_order.is_some()
    }

    /// Complex embedding of a_n via the root of the Hecke polynomial with
    /// the given index (roots sorted by (re, im)).
    pub fn a_cplx(&self, n: u64, prec: u32, root_index: usize) -> Cplx {
        if let Some(c) = self.a_cyclo(n) {
            return c.embed(prec);
        }
        let roots = poly_roots(&self.hecke_poly, prec);
        let root = &roots[root_index.min(roots.len() - 1)];
        let mut acc = Cplx::zero(prec);
        let mut pw = Cplx::one(prec);
        for (i, c) in self.a(n).iter().enumerate() {
            if i > 0 {
                pw = pw.mul(root);
            }
            acc = acc.add(&pw.mul_real(&Real::from_ratio(c, prec)));
        }
        acc
    }

    /// Extend coefficients to n_max via the Hecke recursion
    /// a_{p^{e+1}} = a_p a_{p^e} - p^{k-1} eps(p) a_{p^{e-1}} and
    /// multiplicativity. Requires exact (cyclotomic) coefficients and
    /// ingested a_p for every prime p <= n_max.
    pub fn coefficients_to(&self, n_max: u64) -> Vec<CycloNum> {
        assert!(self.is_exact(), "Hecke recursion needs exact coefficients");
        let k = self.weight;
        let mut out: Vec<CycloNum> = Vec::with_capacity(n_max as usize);
        out.push(CycloNum::one()); // a_1
        for n in 2..=n_max {
            let fs = arith::factor(n);
            let val = if fs.len() == 1 {
                let (p, e) = fs[0];
                if e == 1 {
                    self.a_cyclo(p).unwrap_or_else(|| panic!("a_{} missing for {}", p, self.label))
                } else {
                    // a_{p^e} from lower powers
                    let ap = out[(p - 1) as usize].clone();
                    let prev = out[(p.pow(e - 1) - 1) as usize].clone();
                    let prev2 = out[(p.pow(e - 2) - 1) as usize].clone();
                    let pk = CycloNum::from_rational(BigRational::from_integer(
                        BigInt::from(p).pow(k - 1),
                    ));
                    let epsp = self.nebentypus.eval(p);
                    ap.mul(&prev).sub(&pk.mul(&epsp).mul(&prev2))
                }
            } else {
                let (p, e) = fs[0];
                let pe = p.pow(e);
                out[(pe - 1) as usize].mul(&out[(n / pe - 1) as usize])
            };
            out.push(val);
        }
        out
    }

    pub fn validate(&self) -> Result<(), RecordError> {
        let deg = self.hecke_degree();
        if deg == 0 {
            return Err(RecordError::Schema("constant Hecke polynomial".into()));
        }
        if !self.hecke_poly.last().unwrap().is_one() {
            return Err(RecordError::Schema("Hecke polynomial not monic".into()));
        }
        if self.an.is_empty() {
            return Err(RecordError::Schema("no coefficients".into()));
        }
        for v in &self.an {
            if v.len() != deg {
                return Err(RecordError::HeckeDegree(self.label.clone()));
            }
        }
        // a_1 = 1
        let a1 = &self.an[0];
        let normalized = a1[0].is_one() && a1[1..].iter().all(|c| c.is_zero());
        if !normalized {
            return Err(RecordError::NotNormalized(self.label.clone()));
        }
        // multiplicativity spot checks on small coprime pairs
        for (m, n) in [(2u64, 3u64), (2, 5), (3, 4), (2, 7), (3, 5)] {
            if m * n <= self.n_max() {
                let prod = hecke_mul(self.a(m), self.a(n), &self.hecke_poly);
                if prod != *self.a(m * n) {
                    return Err(RecordError::Multiplicativity { label: self.label.clone(), m, n });
                }
            }
        }
        Ok(())
    }
}

/// Product in the Hecke field (power-basis vectors mod the defining poly).
pub fn hecke_mul(a: &HeckeElt, b: &HeckeElt, poly: &[BigRational]) -> HeckeElt {
    let deg = poly.len() - 1;
    let prod = poly_mul_q(a, b);
    let mut r = poly_rem(&prod, poly);
    r.resize(deg, BigRational::zero());
    r
}

/// Roots of a rational polynomial by Durand-Kerner iteration, sorted by
/// (re, im) for a stable embedding order.
pub fn poly_roots(poly: &[BigRational], prec: u32) -> Vec<Cplx> {
    let deg = poly.len() - 1;
    let work = prec + 64;
    let coeffs: Vec<Cplx> = poly
        .iter()
        .map(|c| Cplx::from_real(Real::from_ratio(c, work)))
        .collect();
    let eval = |z: &Cplx| -> Cplx {
        let mut acc = Cplx::zero(work);
        for c in coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    };
    // initial guesses on a slightly irrational spiral
    let mut roots: Vec<Cplx> = (0..deg)
        .map(|i| {
            let angle = Real::from_f64(0.28 + 2.19 * i as f64, work);
            let (s, c) = angle.sin_cos();
            let r = Real::from_f64(0.6 + 0.4 * (i as f64 + 1.0), work);
            Cplx::new(c.mul(&r), s.mul(&r))
        })
        .collect();
    for _ in 0..200 {
        let mut max_move = Real::zero(work);
        for i in 0..deg {
            let mut den = coeffs[deg].clone();
            for j in 0..deg {
                if j != i {
                    den = den.mul(&roots[i].sub(&roots[j]));
                }
            }
            let delta = eval(&roots[i]).div(&den);
            let dabs = delta.abs();
            if max_move.cmp(&dabs) == std::cmp::Ordering::Less {
                max_move = dabs;
            }
            roots[i] = roots[i].sub(&delta);
        }
        if max_move.to_f64() < 2f64.powi(-((prec + 16) as i32)) {
            break;
        }
    }
    roots.sort_by(|a, b| {
        a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
    });
    roots.into_iter().map(|r| r.with_prec(prec)).collect()
}

// ---- JSON wire format ----

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct NewformJson {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub nebentypus: CharacterJson,
    /// Defining polynomial, constant term first.
    pub hecke_field: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclotomic_order: Option<u64>,
    /// a_1, a_2, ...: vectors of rationals in "num/den" form.
    pub an: Vec<Vec<String>>,
}

pub fn parse_rational(s: &str) -> Result<BigRational, RecordError> {
    let bad = |_| RecordError::Schema(format!("bad rational '{}'", s));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(bad)?;
            let d: BigInt = d.trim().parse().map_err(bad)?;
            if d.is_zero() {
                return Err(RecordError::Schema(format!("zero denominator '{}'", s)));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.trim().parse().map_err(bad)?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl NewformRecord {
    pub fn from_json(j: &NewformJson) -> Result<Self, RecordError> {
        let nebentypus = DirichletCharacter::from_json(&j.nebentypus)
            .map_err(|e| RecordError::Schema(e.to_string()))?;
        if nebentypus.modulus() != j.level {
            return Err(RecordError::Schema(format!(
                "{}: nebentypus modulus {} != level {}",
                j.label,
                nebentypus.modulus(),
                j.level
            )));
        }
        let hecke_poly: Vec<BigRational> =
            j.hecke_field.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
        if hecke_poly.len() < 2 {
            return Err(RecordError::Schema("Hecke polynomial must have degree >= 1".into()));
        }
        let an: Vec<HeckeElt> = j
            .an
            .iter()
            .map(|v| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        let rec = NewformRecord {
            label: j.label.clone(),
            level: j.level,
            weight: j.weight,
            nebentypus,
            hecke_poly,
            cyclotomic_order: j.cyclotomic_order,
            an,
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn to_json(&self) -> NewformJson {
        NewformJson {
            label: self.label.clone(),
            level: self.level,
            weight: self.weight,
            nebentypus: self.nebentypus.to_json(),
            hecke_field: self.hecke_poly.iter().map(rational_to_string).collect(),
            cyclotomic_order: self.cyclotomic_order,
            an: self
                .an
                .iter()
                .map(|v| v.iter().map(rational_to_string).collect())
                .collect(),
        }
    }
}

/// Parse a list of records from JSON text (the `newforms` array of a
/// dataset file, or a bare array).
pub fn parse_records(text: &str) -> Result<Vec<NewformRecord>, RecordError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Bare(Vec<NewformJson>),
        Tagged { newforms: Vec<NewformJson> },
    }
    let wire: Wire =
        serde_json::from_str(text).map_err(|e| RecordError::Schema(e.to_string()))?;
    let list = match wire {
        Wire::Bare(v) => v,
        Wire::Tagged { newforms } => newforms,
    };
    list.iter().map(NewformRecord::from_json).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_record(an: Vec<Vec<&str>>) -> NewformJson {
        NewformJson {
            label: "11.2.1.a".into(),
            level: 11,
            weight: 2,
            nebentypus: DirichletCharacter::trivial(11).to_json(),
            hecke_field: vec!["0".into(), "1".into()],
            cyclotomic_order: None,
            an: an.into_iter().map(|v| v.into_iter().map(String::from).collect()).collect(),
        }
    }

    #[test]
    fn parse_and_validate() {
        // first coefficients of the level-11 weight-2 newform
        let j = toy_record(vec![
            vec!["1"],
            vec!["-2"],
            vec!["-1"],
            vec!["2"],
            vec!["1"],
            vec!["2"],
        ]);
        let rec = NewformRecord::from_json(&j).unwrap();
        assert_eq!(rec.a_rat(2).unwrap(), BigRational::from_integer((-2).into()));
        assert!(rec.is_exact());
    }

    #[test]
    fn rejects_unnormalized() {
        let j = toy_record(vec![vec!["2"], vec!["1"]]);
        match NewformRecord::from_json(&j) {
            Err(RecordError::NotNormalized(_)) => {}
            other => panic!("expected NotNormalized, got {:?}", other.map(|r| r.label)),
        }
    }

    #[test]
    fn rejects_multiplicativity_violation() {
        // a_2 = -2, a_3 = -1 but a_6 = 5 != 2
        let j = toy_record(vec![
            vec!["1"],
            vec!["-2"],
            vec!["-1"],
            vec!["2"],
            vec!["1"],
            vec!["5"],
        ]);
        match NewformRecord::from_json(&j) {
            Err(RecordError::Multiplicativity { m: 2, n: 3, .. }) => {}
            other => panic!("expected Multiplicativity, got {:?}", other.map(|r| r.label)),
        }
    }

    #[test]
    fn hecke_recursion_from_primes() {
        // weight-2 level-11 data: a_2=-2, a_3=-1, a_5=1, a_7=-2; recursion
        // gives a_4 = a_2^2 - 2 = 2, a_6 = 2, a_8 = a_2 a_4 - 2 a_2 = 0, ...
        let j = toy_record(vec![
            vec!["1"],
            vec!["-2"],
            vec!["-1"],
            vec!["2"],
            vec!["1"],
            vec!["2"],
            vec!["-2"],
        ]);
        let rec = NewformRecord::from_json(&j).unwrap();
        let cs = rec.coefficients_to(10);
        assert!(cs[3].equals(&CycloNum::from_i64(2))); // a_4
        assert!(cs[5].equals(&CycloNum::from_i64(2))); // a_6
        assert!(cs[7].equals(&CycloNum::from_i64(0))); // a_8 = -8 + ... let recursion decide
        assert!(cs[9].equals(&CycloNum::from_i64(-2))); // a_10 = a_2 a_5
    }

    #[test]
    fn roots_of_quadratic() {
        // x^2 - 17: roots +-sqrt(17)
        let poly = vec![
            BigRational::from_integer((-17).into()),
            BigRational::zero(),
            BigRational::one(),
        ];
        let roots = poly_roots(&poly, 128);
        assert_eq!(roots.len(), 2);
        let s17 = Real::from_i64(17, 128).sqrt();
        assert!(roots[0].re.add(&s17).abs().to_f64() < 1e-30);
        assert!(roots[1].re.sub(&s17).abs().to_f64() < 1e-30);
        assert!(roots[0].im.abs().to_f64() < 1e-30);
    }

    #[test]
    fn cyclotomic_coefficients() {
        // Hecke field Q(zeta_3): x^2 + x + 1
        let j = NewformJson {
            label: "13.2.2.a".into(),
            level: 13,
            weight: 2,
            nebentypus: DirichletCharacter::from_exponents(13, &[2]).unwrap().to_json(),
            hecke_field: vec!["1".into(), "1".into(), "1".into()],
            cyclotomic_order: Some(3),
            // q + (zeta_3 - 1) q^2 + ...: a_1 = 1, a_2 = -1 + zeta_3
            an: vec![vec!["1".into(), "0".into()], vec!["-1".into(), "1".into()]],
        };
        let rec = NewformRecord::from_json(&j).unwrap();
        let a2 = rec.a_cyclo(2).unwrap();
        let want = CycloNum::zeta(3, 1).sub(&CycloNum::one());
        assert!(a2.equals(&want));
    }
}

//! Dirichlet characters with exact cyclotomic values, Gauss sums, and
//! twisted Bernoulli numbers.
//!
//! A character mod N is stored by its exponents on the canonical generator
//! set of (Z/NZ)* (see [`crate::arith::unit_group_generators`]): generator
//! g_i of order o_i maps to e(k_i / o_i). This makes serialization
//! canonical and CRT decomposition a matter of splitting generator blocks.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cyclo::CycloNum;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharError {
    NotExactDivisor { q: u64, n: u64 },
    BadExponents,
}

impl std::fmt::Display for CharError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CharError::NotExactDivisor { q, n } => {
                write!(f, "{} is not an exact divisor of {}", q, n)
            }
            CharError::BadExponents => write!(f, "exponent vector does not match generators"),
        }
    }
}

impl std::error::Error for CharError {}

/// A Dirichlet character mod N with exact root-of-unity values.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u64,
    /// (generator, order) pairs, one per prime-power block.
    generators: Vec<(u64, u64)>,
    /// exponent k_i: the value on generator i is e(k_i / o_i).
    exponents: Vec<u64>,
    /// per-block discrete-log tables for evaluation.
    blocks: Vec<Block>,
    conductor: u64,
    order: u64,
}

#[derive(Clone, Debug)]
struct Block {
    prime: u64,
    power: u64, // p^e
    /// residue mod p^e -> exponents on this block's generators
    dlog: HashMap<u64, Vec<u64>>,
    /// indices into the global generator list
    gen_indices: Vec<usize>,
}

impl DirichletCharacter {
    /// The trivial character mod n.
    pub fn trivial(n: u64) -> Self {
        let gens = arith::unit_group_generators(n);
        Self::from_exponents(n, &vec![0; gens.len()]).unwrap()
    }

    /// Build from exponents on the canonical generators: value on generator
    /// i is e(exponents[i] / order_i).
    pub fn from_exponents(modulus: u64, exponents: &[u64]) -> Result<Self, CharError> {
        let generators = arith::unit_group_generators(modulus);
        if exponents.len() != generators.len() {
            return Err(CharError::BadExponents);
        }
        let exponents: Vec<u64> =
            exponents.iter().zip(generators.iter()).map(|(&k, &(_, o))| k % o).collect();
        let blocks = build_blocks(modulus, &generators);
        let mut ch = DirichletCharacter {
            modulus,
            generators,
            exponents,
            blocks,
            conductor: 1,
            order: 1,
        };
        ch.order = ch.compute_order();
        ch.conductor = ch.compute_conductor();
        Ok(ch)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn generators(&self) -> &[(u64, u64)] {
        &self.generators
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    fn compute_order(&self) -> u64 {
        let mut ord = 1u64;
        for (&k, &(_, o)) in self.exponents.iter().zip(self.generators.iter()) {
            if k != 0 {
                ord = arith::lcm(ord, o / arith::gcd(k, o));
            }
        }
        ord
    }

    fn compute_conductor(&self) -> u64 {
        let mut cond = 1u64;
        for b in &self.blocks {
            cond *= self.block_conductor(b);
        }
        cond
    }

    fn block_conductor(&self, b: &Block) -> u64 {
        let p = b.prime;
        if p != 2 {
            let idx = b.gen_indices[0];
            let (_, o) = self.generators[idx];
            let k = self.exponents[idx];
            if k == 0 {
                return 1;
            }
            let char_order = o / arith::gcd(k, o);
            // smallest f with char_order | phi(p^f)
            let mut f = 1u64;
            let mut phi = p - 1;
            while phi % char_order != 0 {
                f += 1;
                phi *= p;
            }
            p.pow(f as u32)
        } else {
            match b.gen_indices.len() {
                0 => 1, // modulus 2: trivial unit group
                1 => {
                    // modulus 4: generator -1
                    if self.exponents[b.gen_indices[0]] == 0 {
                        1
                    } else {
                        4
                    }
                }
                _ => {
                    // modulus 2^e, e >= 3: generators (-1, 5)
                    let s = self.exponents[b.gen_indices[0]];
                    let k = self.exponents[b.gen_indices[1]];
                    let o = self.generators[b.gen_indices[1]].1;
                    if k == 0 {
                        if s == 0 {
                            1
                        } else {
                            4
                        }
                    } else {
                        let char_order = o / arith::gcd(k, o); // a power of 2
                        4 * char_order
                    }
                }
            }
        }
    }

    /// The value epsilon(x) as an exact fraction of a full turn, or None
    /// when gcd(x, N) > 1 (value 0).
    pub fn value_frac(&self, x: u64) -> Option<(u64, u64)> {
        if self.modulus == 1 {
            return Some((0, 1));
        }
        let x = x % self.modulus;
        if arith::gcd(x, self.modulus) != 1 {
            return None;
        }
        // accumulate sum of k_i * d_i / o_i mod 1
        let mut num: u128 = 0;
        let mut den: u128 = 1;
        for b in &self.blocks {
            let r = x % b.power;
            let ds = &b.dlog[&r];
            for (j, &idx) in b.gen_indices.iter().enumerate() {
                let (_, o) = self.generators[idx];
                let k = self.exponents[idx];
                if k == 0 || ds[j] == 0 {
                    continue;
                }
                let contrib_num = (k as u128) * (ds[j] as u128) % (o as u128);
                // num/den += contrib_num / o
                num = num * o as u128 + contrib_num * den;
                den *= o as u128;
                let g = gcd128(num, den);
                num /= g;
                den /= g;
                num %= den;
            }
        }
        if num == 0 {
            return Some((0, 1));
        }
        Some((num as u64, den as u64))
    }

    /// epsilon(x) as an exact cyclotomic number (0 when gcd(x, N) > 1).
    pub fn eval(&self, x: u64) -> CycloNum {
        match self.value_frac(x) {
            None => CycloNum::zero(),
            Some((num, den)) => CycloNum::root_of_unity(num as i64, den),
        }
    }

    pub fn eval_i64(&self, x: i64) -> CycloNum {
        self.eval(x.rem_euclid(self.modulus.max(1) as i64) as u64)
    }

    /// epsilon(-1) = +1 (even) or -1 (odd).
    pub fn is_even(&self) -> bool {
        if self.modulus <= 2 {
            return true;
        }
        // epsilon(-1) is +-1, i.e. the reduced fraction is (0,1) or (1,2)
        let (num, _) = self.value_frac(self.modulus - 1).unwrap();
        num == 0
    }

    pub fn is_odd(&self) -> bool {
        !self.is_even()
    }

    /// Complex conjugate character.
    pub fn conj(&self) -> Self {
        let exps: Vec<u64> = self
            .exponents
            .iter()
            .zip(self.generators.iter())
            .map(|(&k, &(_, o))| if k == 0 { 0 } else { o - k })
            .collect();
        Self::from_exponents(self.modulus, &exps).unwrap()
    }

    /// Pointwise product of two characters mod the lcm of their moduli.
    pub fn product(&self, other: &Self) -> Self {
        let m = arith::lcm(self.modulus, other.modulus);
        let a = self.extend_to_modulus(m);
        let b = other.extend_to_modulus(m);
        let exps: Vec<u64> = a
            .exponents
            .iter()
            .zip(b.exponents.iter())
            .zip(a.generators.iter())
            .map(|((&x, &y), &(_, o))| (x + y) % o)
            .collect();
        Self::from_exponents(m, &exps).unwrap()
    }

    /// The same character seen at a larger modulus (m multiple of N).
    pub fn extend_to_modulus(&self, m: u64) -> Self {
        assert!(m % self.modulus == 0, "extension target must be a multiple");
        if m == self.modulus {
            return self.clone();
        }
        let gens = arith::unit_group_generators(m);
        let exps: Vec<u64> = gens
            .iter()
            .map(|&(g, o)| {
                // value on g is epsilon(g mod N) = e(num/den); exponent on a
                // generator of order o is num * o / den (den | o by
                // construction of the unit group surjection).
                let (num, den) = self
                    .value_frac(g % self.modulus)
                    .expect("generator of larger modulus reduces to a unit");
                assert!(o % den == 0);
                num * (o / den) % o
            })
            .collect();
        Self::from_exponents(m, &exps).unwrap()
    }

    /// The primitive character of modulus cond(epsilon) inducing this one.
    pub fn primitivize(&self) -> Self {
        let f = self.conductor;
        if f == self.modulus {
            return self.clone();
        }
        let gens = arith::unit_group_generators(f);
        let exps: Vec<u64> = gens
            .iter()
            .map(|&(g, o)| {
                // lift g to a residue mod N coprime to N and congruent to g
                // mod f
                let mut lift = g;
                while arith::gcd(lift, self.modulus) != 1 {
                    lift += f;
                }
                let (num, den) = self.value_frac(lift).unwrap();
                assert!(o % den == 0);
                num * (o / den) % o
            })
            .collect();
        Self::from_exponents(f, &exps).unwrap()
    }

    /// Decompose along N = Q * R with gcd(Q, R) = 1: returns (eps_Q, eps_R)
    /// with eps_Q * eps_R = eps pointwise on units.
    pub fn decompose(&self, q: u64) -> Result<(Self, Self), CharError> {
        if !arith::is_exact_divisor(q, self.modulus) {
            return Err(CharError::NotExactDivisor { q, n: self.modulus });
        }
        let r = self.modulus / q;
        Ok((self.restrict_to(q), self.restrict_to(r)))
    }

    /// The factor of the character supported on the blocks dividing d
    /// (d must be an exact divisor of N).
    fn restrict_to(&self, d: u64) -> Self {
        let gens = arith::unit_group_generators(d);
        let exps: Vec<u64> = gens
            .iter()
            .map(|&(g, o)| {
                // lift g mod d to a residue mod N that is 1 mod N/d
                let lift = if self.modulus == d {
                    g
                } else {
                    arith::crt2(g % d, d, 1, self.modulus / d)
                };
                let (num, den) = self.value_frac(lift).unwrap();
                assert!(o % den == 0);
                num * (o / den) % o
            })
            .collect();
        Self::from_exponents(d, &exps).unwrap()
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.exponents == other.exponents
    }

    /// All characters mod n, in lexicographic exponent order.
    pub fn all(n: u64) -> Vec<Self> {
        let gens = arith::unit_group_generators(n);
        let mut out = Vec::new();
        let mut exps = vec![0u64; gens.len()];
        loop {
            out.push(Self::from_exponents(n, &exps).unwrap());
            let mut i = 0;
            loop {
                if i == gens.len() {
                    return out;
                }
                exps[i] += 1;
                if exps[i] < gens[i].1 {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }
}

fn gcd128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

fn build_blocks(n: u64, generators: &[(u64, u64)]) -> Vec<Block> {
    let mut blocks = Vec::new();
    if n <= 2 {
        return blocks;
    }
    let mut gen_cursor = 0usize;
    for (p, e) in arith::factor(n) {
        let pe = p.pow(e);
        let n_block_gens = if p == 2 {
            match e {
                1 => 0,
                2 => 1,
                _ => 2,
            }
        } else {
            1
        };
        let gen_indices: Vec<usize> = (gen_cursor..gen_cursor + n_block_gens).collect();
        gen_cursor += n_block_gens;
        // dlog table by enumerating products of generator powers
        let mut dlog = HashMap::new();
        let block_gens: Vec<(u64, u64)> =
            gen_indices.iter().map(|&i| (generators[i].0 % pe, generators[i].1)).collect();
        enumerate_dlogs(pe, &block_gens, &mut dlog);
        blocks.push(Block { prime: p, power: pe, dlog, gen_indices });
    }
    blocks
}

fn enumerate_dlogs(pe: u64, gens: &[(u64, u64)], out: &mut HashMap<u64, Vec<u64>>) {
    let mut stack = vec![(0usize, 1u64, Vec::new())];
    while let Some((i, v, ds)) = stack.pop() {
        if i == gens.len() {
            out.insert(v, ds);
            continue;
        }
        let (g, o) = gens[i];
        let mut w = v;
        for d in 0..o {
            let mut nds = ds.clone();
            nds.push(d);
            stack.push((i + 1, w, nds));
            w = arith::mulmod(w, g, pe);
        }
    }
}

// ---- Gauss sums ----

/// The Gauss sum g(chi) = sum_x chi(x) e(x/N), exact in the cyclotomic
/// field of order lcm(order(chi), N).
pub fn gauss_sum(chi: &DirichletCharacter) -> CycloNum {
    let n = chi.modulus();
    if n == 1 {
        return CycloNum::one();
    }
    let mut acc = CycloNum::zero();
    for x in 1..n {
        if let Some((num, den)) = chi.value_frac(x) {
            let val = CycloNum::root_of_unity(num as i64, den);
            let e = CycloNum::zeta(n, x as i64);
            acc = acc.add(&val.mul(&e));
        }
    }
    acc.normalized()
}

// ---- Twisted Bernoulli numbers ----

/// B_{k,phi} together with its defining data.
#[derive(Clone, Debug)]
pub struct TwistedBernoulli {
    pub k: u64,
    pub char_modulus: u64,
    pub value: CycloNum,
}

/// Classical Bernoulli numbers B_0..B_k (B_1 = -1/2) from T/(e^T - 1).
pub fn bernoulli_numbers(k: u64) -> Vec<BigRational> {
    // D(T) = (e^T - 1)/T; invert the truncated series and scale by n!.
    let n = k as usize + 1;
    let mut d = vec![BigRational::zero(); n];
    let mut fact = BigRational::one();
    for (j, c) in d.iter_mut().enumerate() {
        fact *= BigRational::from_integer((j as i64 + 1).into());
        *c = fact.recip();
    }
    let inv = series_inv_q(&d, n);
    let mut out = Vec::with_capacity(n);
    let mut fact = BigRational::one();
    for (j, c) in inv.iter().enumerate() {
        if j > 0 {
            fact *= BigRational::from_integer((j as i64).into());
        }
        out.push(c * &fact);
    }
    out
}

fn series_inv_q(f: &[BigRational], n: usize) -> Vec<BigRational> {
    assert!(!f[0].is_zero());
    let f0 = f[0].recip();
    let mut g = vec![BigRational::zero(); n];
    g[0] = f0.clone();
    for i in 1..n {
        let mut s = BigRational::zero();
        for j in 1..=i {
            if j < f.len() && !f[j].is_zero() {
                s += &f[j] * &g[i - j];
            }
        }
        g[i] = -s * &f0;
    }
    g
}

/// B_{k,phi} by series extraction from sum_s phi(s) T e^{sT} / (e^{vT}-1).
pub fn twisted_bernoulli(k: u64, phi: &DirichletCharacter) -> TwistedBernoulli {
    assert!(k >= 1, "twisted Bernoulli needs k >= 1");
    let v = phi.modulus();
    let n = k as usize + 1;
    // D(T) = (e^{vT} - 1)/T = sum_j v^{j+1} T^j / (j+1)!
    let mut d = vec![BigRational::zero(); n];
    let vq = BigRational::from_integer((v as i64).into());
    let mut pow_v = vq.clone();
    let mut fact = BigRational::one();
    for (j, c) in d.iter_mut().enumerate() {
        fact *= BigRational::from_integer((j as i64 + 1).into());
        *c = &pow_v / &fact;
        pow_v *= &vq;
    }
    let dinv = series_inv_q(&d, n);
    // sum over s of phi(s) * e^{sT}, coefficient-wise
    let mut acc = CycloNum::zero();
    for s in 0..v.max(1) {
        let val = phi.eval(s);
        if val.is_zero() {
            continue;
        }
        // coefficient of T^k in e^{sT} * Dinv(T): sum_j s^j/j! * dinv[k-j]
        let mut coeff = BigRational::zero();
        let mut sj = BigRational::one(); // s^j / j!
        for j in 0..=k as usize {
            coeff += &sj * &dinv[k as usize - j];
            sj *= BigRational::from_integer((s as i64).into());
            sj /= BigRational::from_integer((j as i64 + 1).into());
        }
        acc = acc.add(&val.mul_rational(&coeff));
    }
    // multiply by k!
    let mut fact = BigRational::one();
    for j in 2..=k as i64 {
        fact *= BigRational::from_integer(j.into());
    }
    TwistedBernoulli { k, char_modulus: v, value: acc.mul_rational(&fact).normalized() }
}

/// B_{k,phi} by the Bernoulli-polynomial closed form
/// v^{k-1} sum_a phi(a) B_k(a/v).
pub fn twisted_bernoulli_polynomial_route(k: u64, phi: &DirichletCharacter) -> CycloNum {
    let v = phi.modulus().max(1);
    let bern = bernoulli_numbers(k);
    let mut binom = vec![BigRational::one(); k as usize + 1];
    for j in 1..=k as usize {
        binom[j] = &binom[j - 1]
            * BigRational::from_integer(((k as i64) - (j as i64) + 1).into())
            / BigRational::from_integer((j as i64).into());
    }
    let mut acc = CycloNum::zero();
    for a in 0..v {
        let val = phi.eval(a);
        if val.is_zero() {
            continue;
        }
        // B_k(x) = sum_j C(k,j) B_j x^(k-j), at x = a/v
        let x = BigRational::new((a as i64).into(), (v as i64).into());
        let mut poly = BigRational::zero();
        let mut xpow = BigRational::one();
        for j in (0..=k as usize).rev() {
            // term j contributes C(k,j) B_j x^(k-j)
            poly += &binom[j] * &bern[j] * &xpow;
            xpow *= &x;
        }
        acc = acc.add(&val.mul_rational(&poly));
    }
    let scale = BigRational::from_integer((v as i64).into()).pow(k as i32 - 1);
    acc.mul_rational(&scale).normalized()
}

// ---- JSON form (schema shared with the CLI) ----

/// Wire form: {modulus, generator_values: [[num, den], ...], zeta_order}.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CharacterJson {
    pub modulus: u64,
    pub generator_values: Vec<[u64; 2]>,
    pub zeta_order: u64,
}

impl DirichletCharacter {
    pub fn to_json(&self) -> CharacterJson {
        let generator_values: Vec<[u64; 2]> = self
            .exponents
            .iter()
            .zip(self.generators.iter())
            .map(|(&k, &(_, o))| {
                if k == 0 {
                    [0, 1]
                } else {
                    let g = arith::gcd(k, o);
                    [k / g, o / g]
                }
            })
            .collect();
        CharacterJson {
            modulus: self.modulus,
            generator_values,
            zeta_order: self.order,
        }
    }

    pub fn from_json(j: &CharacterJson) -> Result<Self, CharError> {
        let gens = arith::unit_group_generators(j.modulus);
        if gens.len() != j.generator_values.len() {
            return Err(CharError::BadExponents);
        }
        let exps: Vec<u64> = gens
            .iter()
            .zip(j.generator_values.iter())
            .map(|(&(_, o), &[num, den])| {
                if den == 0 || o % den != 0 {
                    return Err(CharError::BadExponents);
                }
                Ok(num % den * (o / den))
            })
            .collect::<Result<_, _>>()?;
        Self::from_exponents(j.modulus, &exps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn trivial_character_basics() {
        let chi = DirichletCharacter::trivial(15);
        assert_eq!(chi.order(), 1);
        assert_eq!(chi.conductor(), 1);
        assert!(chi.eval(2).is_one());
        assert!(chi.eval(3).is_zero());
        assert!(chi.eval(5).is_zero());
        // modulus 1 sends everything (even 0) to 1
        let one = DirichletCharacter::trivial(1);
        assert!(one.eval(0).is_one());
    }

    #[test]
    fn decompose_trivial_mod_15() {
        let chi = DirichletCharacter::trivial(15);
        let (a, b) = chi.decompose(3).unwrap();
        assert_eq!(a.modulus(), 3);
        assert_eq!(b.modulus(), 5);
        assert!(a.is_trivial() && b.is_trivial());
        assert!(chi.decompose(6).is_err());
    }

    #[test]
    fn decompose_order6_mod_91() {
        // character mod 91 = 7 * 13 with a 7-part of order 6 and a 13-part
        // of order 6; check the product recomposes pointwise
        let chars = DirichletCharacter::all(91);
        let chi = chars
            .iter()
            .find(|c| {
                c.order() == 6
                    && c.decompose(7).map(|(a, b)| a.order() == 6 && b.order() == 6).unwrap_or(false)
            })
            .expect("character of order 6 with both parts of order 6");
        let (c7, c13) = chi.decompose(7).unwrap();
        for x in 0..91u64 {
            if arith::gcd(x, 91) != 1 {
                continue;
            }
            let lhs = chi.eval(x);
            let rhs = c7.eval(x).mul(&c13.eval(x));
            assert!(lhs.equals(&rhs), "recomposition fails at {}", x);
        }
    }

    #[test]
    fn fricke_style_decompose_mod_13() {
        // epsilon mod 13 of order 6 (sends the canonical generator 2 to a
        // primitive 6th root); Q = 13 gives (epsilon, trivial mod 1)
        let eps = DirichletCharacter::from_exponents(13, &[2]).unwrap();
        assert_eq!(eps.order(), 6);
        let (a, b) = eps.decompose(13).unwrap();
        assert!(a.equals(&eps));
        assert_eq!(b.modulus(), 1);
        assert!(b.is_trivial());
    }

    #[test]
    fn conductors() {
        // quadratic character mod 8 has conductor 8; mod 4 has conductor 4
        for chi in DirichletCharacter::all(8) {
            let c = chi.conductor();
            assert!(c == 1 || c == 4 || c == 8);
        }
        // mod 9: characters of order 6 have conductor 9, order 2 conductor 3
        let chars9 = DirichletCharacter::all(9);
        for chi in &chars9 {
            match chi.order() {
                1 => assert_eq!(chi.conductor(), 1),
                2 => assert_eq!(chi.conductor(), 3),
                3 | 6 => assert_eq!(chi.conductor(), 9),
                o => panic!("unexpected order {}", o),
            }
        }
        // primitivize drops the modulus to the conductor
        let chi = chars9.iter().find(|c| c.order() == 2).unwrap();
        let prim = chi.primitivize();
        assert_eq!(prim.modulus(), 3);
        assert_eq!(prim.order(), 2);
        for x in [1u64, 2, 4, 5, 7, 8] {
            assert!(chi.eval(x).equals(&prim.eval(x % 3)));
        }
    }

    #[test]
    fn gauss_sum_trivial_mod_prime() {
        for p in [3u64, 5, 7, 11, 13] {
            let chi = DirichletCharacter::trivial(p);
            let g = gauss_sum(&chi);
            assert!(g.equals(&CycloNum::from_i64(-1)), "g(1 mod {}) = {}", p, g);
        }
        assert!(gauss_sum(&DirichletCharacter::trivial(1)).is_one());
    }

    #[test]
    fn gauss_sum_quadratic_mod_5() {
        // the quadratic character mod 5: canonical generator 2 -> -1
        let chi = DirichletCharacter::from_exponents(5, &[2]).unwrap();
        assert_eq!(chi.order(), 2);
        let g = gauss_sum(&chi);
        let v = g.embed(192);
        let s5 = crate::bigfloat::Real::from_i64(5, 192).sqrt();
        assert!(v.im.abs().to_f64() < 1e-45);
        assert!(v.re.sub(&s5).abs().to_f64() < 1e-45);
    }

    #[test]
    fn gauss_sum_modulus_law() {
        // |g(chi)|^2 = m for primitive chi
        for (m, exps) in [(5u64, vec![1u64]), (7, vec![1]), (8, vec![1, 1]), (12, vec![1, 1])] {
            let chi = DirichletCharacter::from_exponents(m, &exps).unwrap();
            if !chi.is_primitive() {
                continue;
            }
            let g = gauss_sum(&chi);
            let norm = g.mul(&g.conj());
            assert!(
                norm.equals(&CycloNum::from_i64(m as i64)),
                "|g|^2 != {} for chi mod {}",
                m,
                m
            );
        }
    }

    #[test]
    fn bernoulli_classical() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], q(1, 1));
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[12], q(-691, 2730));
    }

    #[test]
    fn twisted_bernoulli_trivial_is_classical() {
        let one = DirichletCharacter::trivial(1);
        let b2 = twisted_bernoulli(2, &one);
        assert!(b2.value.equals(&CycloNum::from_rational(q(1, 6))));
        let b4 = twisted_bernoulli(4, &one);
        assert!(b4.value.equals(&CycloNum::from_rational(q(-1, 30))));
    }

    #[test]
    fn twisted_bernoulli_mod4() {
        // k = 1, quadratic character mod 4: B_{1,chi} = -1/2
        let chi = DirichletCharacter::from_exponents(4, &[1]).unwrap();
        let b = twisted_bernoulli(1, &chi);
        assert!(b.value.equals(&CycloNum::from_rational(q(-1, 2))));
    }

    #[test]
    fn two_bernoulli_routes_agree() {
        for modulus in [1u64, 3, 4, 5, 7, 8, 9, 12, 13, 16, 20] {
            for chi in DirichletCharacter::all(modulus) {
                for k in 1..=8u64 {
                    let a = twisted_bernoulli(k, &chi).value;
                    let b = twisted_bernoulli_polynomial_route(k, &chi);
                    assert!(
                        a.equals(&b),
                        "routes disagree: k={}, modulus={}, exps={:?}",
                        k,
                        modulus,
                        chi.exponents()
                    );
                }
            }
        }
    }

    #[test]
    fn character_json_roundtrip() {
        for chi in DirichletCharacter::all(40) {
            let j = chi.to_json();
            let back = DirichletCharacter::from_json(&j).unwrap();
            assert!(chi.equals(&back));
        }
    }

    #[test]
    fn parity() {
        // quadratic char mod 4 is odd; mod 5 even; mod 3 odd
        let chi4 = DirichletCharacter::from_exponents(4, &[1]).unwrap();
        assert!(chi4.is_odd());
        let chi5 = DirichletCharacter::from_exponents(5, &[2]).unwrap();
        assert!(chi5.is_even());
        let chi3 = DirichletCharacter::from_exponents(3, &[1]).unwrap();
        assert!(chi3.is_odd());
    }
}

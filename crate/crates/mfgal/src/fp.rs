//! Prime fields F_p for p < 2^62, exact convolution by three-prime NTT,
//! power-series kernels (Newton inversion, division), dense linear algebra
//! mod p, and polynomial factorization over F_p.
//!
//! Multiplication of coefficient vectors is exact: the integer convolution
//! is reconstructed by CRT from three fixed NTT-friendly primes near 2^62
//! and then reduced mod p, so any prime modulus gets quasilinear series
//! arithmetic, not just NTT-friendly ones.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::arith::{self, is_prime, mulmod, powmod};

/// Context for arithmetic in F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(is_prime(p), "modulus {} is not prime", p);
        assert!(p < (1 << 62), "modulus too large");
        Fp { p }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.p)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        powmod(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of 0 mod {}", self.p);
        arith::inv_mod(a as i128, self.p as i128).unwrap() as u64
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Centered lift to [-p/2, p/2).
    pub fn lift_centered(&self, a: u64) -> i64 {
        if a * 2 >= self.p {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

// ---- Three-prime NTT convolution ----

#[derive(Clone, Copy)]
struct NttPrime {
    p: u64,
    g: u64, // primitive root
}

/// Three primes of the form c * 2^42 + 1 just below 2^62; found once at
/// runtime and verified by Miller-Rabin rather than trusted as literals.
fn ntt_primes() -> &'static [NttPrime; 3] {
    static PRIMES: OnceLock<[NttPrime; 3]> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut found = Vec::new();
        let mut c = (1u64 << 62) >> 42;
        while found.len() < 3 {
            let p = (c << 42) | 1;
            if is_prime(p) {
                let mut qs: Vec<u64> = arith::factor(c).into_iter().map(|(q, _)| q).collect();
                qs.push(2);
                let mut g = 2u64;
                while !qs.iter().all(|&q| powmod(g, (p - 1) / q, p) != 1) {
                    g += 1;
                }
                found.push(NttPrime { p, g });
            }
            c -= 1;
        }
        [found[0], found[1], found[2]]
    })
}

fn ntt_in_place(a: &mut [u64], invert: bool, np: NttPrime) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let p = np.p;
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = powmod(np.g, (p - 1) / len as u64, p);
        if invert {
            w = arith::inv_mod(w as i128, p as i128).unwrap() as u64;
        }
        for start in (0..n).step_by(len) {
            let mut wn = 1u64;
            for i in 0..len / 2 {
                let u = a[start + i];
                let v = mulmod(a[start + i + len / 2], wn, p);
                a[start + i] = if u + v >= p { u + v - p } else { u + v };
                a[start + i + len / 2] = if u >= v { u - v } else { u + p - v };
                wn = mulmod(wn, w, p);
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = arith::inv_mod(n as i128, p as i128).unwrap() as u64;
        for x in a.iter_mut() {
            *x = mulmod(*x, n_inv, p);
        }
    }
}

fn convolve_single(a: &[u64], b: &[u64], np: NttPrime) -> Vec<u64> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    for (d, s) in fa.iter_mut().zip(a.iter()) {
        *d = s % np.p;
    }
    for (d, s) in fb.iter_mut().zip(b.iter()) {
        *d = s % np.p;
    }
    ntt_in_place(&mut fa, false, np);
    ntt_in_place(&mut fb, false, np);
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x = mulmod(*x, *y, np.p);
    }
    ntt_in_place(&mut fa, true, np);
    fa.truncate(out_len);
    fa
}

/// Exact convolution of u64 sequences reduced mod p (entries must be < p).
pub fn convolve_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= 32 || out_len <= 64 {
        let mut out = vec![0u64; out_len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let t = mulmod(x, y, p);
                let s = out[i + j] + t;
                out[i + j] = if s >= p { s - p } else { s };
            }
        }
        return out;
    }
    let [n1, n2, n3] = *ntt_primes();
    let (r1, (r2, r3)) = rayon::join(
        || convolve_single(a, b, n1),
        || rayon::join(|| convolve_single(a, b, n2), || convolve_single(a, b, n3)),
    );
    // Garner reconstruction: x = x1 + p1 t1 + p1 p2 t2, reduced mod p.
    let fp2 = Fp { p: n2.p };
    let fp3 = Fp { p: n3.p };
    let fpt = Fp { p };
    let p1_inv_p2 = fp2.inv(n1.p % n2.p);
    let p12_mod_p3 = fp3.mul(n1.p % n3.p, n2.p % n3.p);
    let p12_inv_p3 = fp3.inv(p12_mod_p3);
    let p1_mod_p = n1.p % p;
    let p12_mod_p = fpt.mul(n1.p % p, n2.p % p);
    (0..out_len)
        .into_par_iter()
        .map(|i| {
            let (x1, x2, x3) = (r1[i], r2[i], r3[i]);
            let t1 = fp2.mul(fp2.sub(x2, x1 % n2.p), p1_inv_p2);
            let part = fp3.add(x1 % n3.p, fp3.mul(n1.p % n3.p, t1 % n3.p));
            let t2 = fp3.mul(fp3.sub(x3, part), p12_inv_p3);
            fpt.add(
                fpt.add(x1 % p, fpt.mul(p1_mod_p, t1 % p)),
                fpt.mul(p12_mod_p, t2 % p),
            )
        })
        .collect()
}

// ---- Power-series kernels mod p ----

/// Truncated product of series.
pub fn series_mul(a: &[u64], b: &[u64], p: u64, trunc: usize) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = convolve_mod(&a[..a.len().min(trunc)], &b[..b.len().min(trunc)], p);
    out.truncate(trunc);
    out
}

/// Series inverse by Newton iteration; f[0] must be a unit.
pub fn series_inv(f: &[u64], p: u64, trunc: usize) -> Vec<u64> {
    assert!(!f.is_empty() && f[0] != 0, "series not invertible");
    let fp = Fp { p };
    let mut g = vec![fp.inv(f[0])];
    let mut k = 1usize;
    while k < trunc {
        k = (2 * k).min(trunc);
        let fg = series_mul(&f[..f.len().min(k)], &g, p, k);
        let mut two_minus = vec![0u64; fg.len()];
        for (i, &c) in fg.iter().enumerate() {
            two_minus[i] = if i == 0 { fp.sub(2 % p, c) } else { fp.neg(c) };
        }
        g = series_mul(&g, &two_minus, p, k);
    }
    g.truncate(trunc);
    g
}

/// Series division a/b to `trunc` terms; b[0] must be a unit.
pub fn series_div(a: &[u64], b: &[u64], p: u64, trunc: usize) -> Vec<u64> {
    series_mul(a, &series_inv(b, p, trunc), p, trunc)
}

/// Coefficient-wise derivative d/dq.
pub fn series_derivative(f: &[u64], p: u64) -> Vec<u64> {
    if f.len() <= 1 {
        return vec![0];
    }
    (1..f.len()).map(|i| mulmod(f[i], i as u64 % p, p)).collect()
}

// ---- Dense linear algebra mod p ----

/// Row-reduce `rows` (each of length `ncols`) and return one right-kernel
/// vector, supported on the first non-pivot column.
///
/// Columns are processed left to right, so callers get a canonical kernel
/// element by ordering columns in their preferred tie-break order.
pub fn right_kernel(p: u64, rows: &mut Vec<Vec<u64>>, ncols: usize) -> Option<Vec<u64>> {
    let fp = Fp { p };
    let nrows = rows.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut r = 0usize;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let mut pr = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            if row[c] != 0 {
                pr = Some(i);
                break;
            }
        }
        let Some(pr) = pr else {
            continue;
        };
        rows.swap(r, pr);
        let inv = fp.inv(rows[r][c]);
        for x in rows[r][c..].iter_mut() {
            *x = fp.mul(*x, inv);
        }
        let (head, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let small = p < (1 << 31);
        rest.par_iter_mut().for_each(|row| {
            let factor = row[c];
            if factor != 0 {
                if small {
                    // products fit in u64: cheaper reduction
                    for (x, &pv) in row[c..].iter_mut().zip(pivot_row[c..].iter()) {
                        *x = (*x + factor * (p - pv)) % p;
                    }
                } else {
                    for (x, &pv) in row[c..].iter_mut().zip(pivot_row[c..].iter()) {
                        *x = fp.sub(*x, fp.mul(factor, pv));
                    }
                }
            }
        });
        pivot_of_col[c] = Some(r);
        r += 1;
    }
    let free = (0..ncols).find(|&c| pivot_of_col[c].is_none())?;
    // Rows are in echelon form (not fully reduced), so back-substitute from
    // the bottom pivot up. Every column left of `free` is a pivot column.
    let mut v = vec![0u64; ncols];
    v[free] = 1;
    for c in (0..free).rev() {
        let i = pivot_of_col[c].expect("columns before the first free one are pivots");
        let mut s = rows[i][free];
        for c2 in c + 1..free {
            if rows[i][c2] != 0 && v[c2] != 0 {
                s = fp.add(s, fp.mul(rows[i][c2], v[c2]));
            }
        }
        v[c] = fp.neg(s);
    }
    Some(v)
}

/// Solve the square system A x = b mod p (A consumed). None if singular.
pub fn solve(p: u64, a: &mut [Vec<u64>], b: &mut Vec<u64>) -> Option<Vec<u64>> {
    let fp = Fp { p };
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    for c in 0..n {
        let pr = (c..n).find(|&i| a[i][c] != 0)?;
        a.swap(c, pr);
        b.swap(c, pr);
        let inv = fp.inv(a[c][c]);
        for x in a[c].iter_mut() {
            *x = fp.mul(*x, inv);
        }
        b[c] = fp.mul(b[c], inv);
        for i in 0..n {
            if i != c && a[i][c] != 0 {
                let f = a[i][c];
                for j in c..n {
                    a[i][j] = fp.sub(a[i][j], fp.mul(f, a[c][j]));
                }
                b[i] = fp.sub(b[i], fp.mul(f, b[c]));
            }
        }
    }
    Some(b.to_vec())
}

// ---- Polynomials over F_p (dense, little-endian coefficients) ----

pub fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

pub fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = convolve_mod(a, b, p);
    poly_trim(&mut out);
    out
}

pub fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let fp = Fp { p };
    let db = poly_deg(b).expect("rem by zero poly");
    let lead_inv = fp.inv(b[db]);
    let mut r = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let c = fp.mul(r[dr], lead_inv);
        for j in 0..=db {
            r[dr - db + j] = fp.sub(r[dr - db + j], fp.mul(c, b[j]));
        }
    }
    r.truncate(db.max(1));
    if r.is_empty() {
        r.push(0);
    }
    r
}

pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while poly_deg(&y).is_some() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
        poly_trim(&mut y);
    }
    if let Some(d) = poly_deg(&x) {
        let fp = Fp { p };
        let inv = fp.inv(x[d]);
        for c in x.iter_mut() {
            *c = fp.mul(*c, inv);
        }
    }
    x
}

pub fn poly_derivative(a: &[u64], p: u64) -> Vec<u64> {
    if a.len() <= 1 {
        return vec![0];
    }
    let mut out: Vec<u64> = (1..a.len()).map(|i| mulmod(a[i], i as u64 % p, p)).collect();
    poly_trim(&mut out);
    out
}

pub fn poly_div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let fp = Fp { p };
    let db = poly_deg(b).expect("division by zero poly");
    let da = poly_deg(a).unwrap_or(0);
    if da < db {
        return vec![0];
    }
    let lead_inv = fp.inv(b[db]);
    let mut r = a.to_vec();
    let mut q = vec![0u64; da - db + 1];
    for i in (0..=da - db).rev() {
        if r[i + db] == 0 {
            continue;
        }
        let c = fp.mul(r[i + db], lead_inv);
        q[i] = c;
        for j in 0..=db {
            r[i + j] = fp.sub(r[i + j], fp.mul(c, b[j]));
        }
    }
    q
}

/// base^e mod (f, p) for u64 exponent.
fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &b, p), f, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), f, p);
        e >>= 1;
    }
    result
}

/// Distinct-degree shape of a squarefree polynomial: sorted list of
/// (degree d, number of irreducible factors of degree d).
pub fn distinct_degree_shape(f: &[u64], p: u64) -> Vec<(usize, usize)> {
    let fp = Fp { p };
    let mut f = f.to_vec();
    poly_trim(&mut f);
    if let Some(d) = poly_deg(&f) {
        let inv = fp.inv(f[d]);
        for c in f.iter_mut() {
            *c = fp.mul(*c, inv);
        }
    }
    let mut shape = Vec::new();
    let mut d = 1usize;
    let mut xp = poly_rem(&[0, 1], &f, p);
    while poly_deg(&f).map_or(false, |df| df >= 1) {
        let df = poly_deg(&f).unwrap();
        if d > df / 2 {
            shape.push((df, 1));
            break;
        }
        xp = poly_powmod(&xp, p, &f, p);
        let mut diff = xp.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = fp.sub(diff[1], 1);
        let g = poly_gcd(&diff, &f, p);
        if let Some(dg) = poly_deg(&g) {
            if dg > 0 {
                shape.push((d, dg / d));
                f = poly_div_exact(&f, &g, p);
                xp = poly_rem(&xp, &f, p);
            }
        }
        d += 1;
    }
    shape.sort_unstable();
    shape
}

/// Full factorization of a squarefree polynomial into monic irreducibles
/// (DDF + Cantor-Zassenhaus with a deterministic xorshift source).
pub fn factor_squarefree(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let fp = Fp { p };
    let mut f = f.to_vec();
    poly_trim(&mut f);
    if let Some(d) = poly_deg(&f) {
        let inv = fp.inv(f[d]);
        for c in f.iter_mut() {
            *c = fp.mul(*c, inv);
        }
    }
    let mut out = Vec::new();
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut d = 1usize;
    let mut xp = poly_rem(&[0, 1], &f, p);
    while poly_deg(&f).map_or(false, |df| df >= 1) {
        let df = poly_deg(&f).unwrap();
        if d > df / 2 {
            out.push(f.clone());
            break;
        }
        xp = poly_powmod(&xp, p, &f, p);
        let mut diff = xp.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = fp.sub(diff[1], 1);
        let g = poly_gcd(&diff, &f, p);
        if poly_deg(&g).map_or(false, |dg| dg > 0) {
            equal_degree_split(&g, d, p, &mut out, &mut seed);
            f = poly_div_exact(&f, &g, p);
            xp = poly_rem(&xp, &f, p);
        }
        d += 1;
    }
    out.sort();
    out
}

fn equal_degree_split(f: &[u64], d: usize, p: u64, out: &mut Vec<Vec<u64>>, seed: &mut u64) {
    let df = poly_deg(f).unwrap();
    if df == d {
        out.push(f.to_vec());
        return;
    }
    let fp = Fp { p };
    loop {
        let mut a: Vec<u64> = (0..df)
            .map(|_| {
                *seed ^= *seed << 13;
                *seed ^= *seed >> 7;
                *seed ^= *seed << 17;
                *seed % p
            })
            .collect();
        poly_trim(&mut a);
        if poly_deg(&a).is_none() {
            continue;
        }
        let split = if p == 2 {
            // trace map over F_2: a + a^2 + ... + a^(2^(d-1))
            let mut t = poly_rem(&a, f, p);
            let mut acc = t.clone();
            for _ in 1..d {
                t = poly_rem(&poly_mul(&t, &t, p), f, p);
                acc = poly_add_fp(&acc, &t, p);
            }
            acc
        } else {
            // a^((p^d - 1)/2) - 1
            use num_bigint::BigUint;
            use num_traits::{One, Zero};
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / 2u32;
            let mut b = vec![1u64];
            let mut base = poly_rem(&a, f, p);
            let mut ee = e;
            while !ee.is_zero() {
                if ee.bit(0) {
                    b = poly_rem(&poly_mul(&b, &base, p), f, p);
                }
                base = poly_rem(&poly_mul(&base, &base, p), f, p);
                ee >>= 1;
            }
            b[0] = fp.sub(b[0], 1);
            b
        };
        let g = poly_gcd(&split, f, p);
        if let Some(dg) = poly_deg(&g) {
            if dg > 0 && dg < df {
                equal_degree_split(&g, d, p, out, seed);
                equal_degree_split(&poly_div_exact(f, &g, p), d, p, out, seed);
                return;
            }
        }
    }
}

fn poly_add_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let fp = Fp { p };
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] = x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] = fp.add(out[i], y);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ntt_primes_found() {
        for np in ntt_primes().iter() {
            assert!(is_prime(np.p));
            assert_eq!((np.p - 1) % (1 << 42), 0);
            assert_ne!(powmod(np.g, (np.p - 1) / 2, np.p), 1);
        }
    }

    #[test]
    fn convolution_matches_schoolbook() {
        let p = 10007u64;
        let a: Vec<u64> = (0..200).map(|i| (i * i + 3) % p).collect();
        let b: Vec<u64> = (0..150).map(|i| (7 * i + 1) % p).collect();
        let fast = convolve_mod(&a, &b, p);
        let mut slow = vec![0u64; a.len() + b.len() - 1];
        for i in 0..a.len() {
            for j in 0..b.len() {
                slow[i + j] = (slow[i + j] + a[i] * b[j]) % p;
            }
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn convolution_large_modulus() {
        // p close to 2^61: coefficient products stress the CRT range
        let p = arith::next_prime((1 << 61) - 100);
        let a: Vec<u64> = (0..100u64).map(|i| p - 1 - i).collect();
        let b: Vec<u64> = (0..100u64).map(|i| p - 2 - 5 * i).collect();
        let fast = convolve_mod(&a, &b, p);
        for idx in [0usize, 1, 50, 120, 198] {
            let mut acc: u64 = 0;
            for i in 0..=idx.min(99) {
                let j = idx - i;
                if j < 100 {
                    acc = (acc + mulmod(a[i], b[j], p)) % p;
                }
            }
            assert_eq!(fast[idx], acc, "coefficient {}", idx);
        }
    }

    #[test]
    fn series_inverse_roundtrip() {
        let p = 65537u64;
        let f: Vec<u64> = vec![1, 5, 2, 0, 9, 1, 3, 8];
        let g = series_inv(&f, p, 40);
        let prod = series_mul(&f, &g, p, 40);
        assert_eq!(prod[0], 1);
        assert!(prod[1..].iter().all(|&c| c == 0));
    }

    #[test]
    fn kernel_finds_dependency() {
        let p = 101u64;
        // columns: v0, v1, v2 with v2 = 2 v0 + 3 v1
        let v0 = [1u64, 4, 7, 2];
        let v1 = [2u64, 1, 0, 5];
        let v2: Vec<u64> = (0..4).map(|i| (2 * v0[i] + 3 * v1[i]) % p).collect();
        let mut rows: Vec<Vec<u64>> = (0..4).map(|i| vec![v0[i], v1[i], v2[i]]).collect();
        let k = right_kernel(p, &mut rows, 3).unwrap();
        // kernel of (v0 v1 v2) is spanned by (-2, -3, 1)
        assert_eq!(k, vec![p - 2, p - 3, 1]);
        for i in 0..4 {
            let s = (v0[i] * k[0] + v1[i] * k[1] + v2[i] * k[2]) % p;
            assert_eq!(s, 0, "kernel combination fails at row {}", i);
        }
    }

    #[test]
    fn factorization_shapes() {
        // x^2 + 1 mod 7 is irreducible; mod 5 it splits
        assert_eq!(distinct_degree_shape(&[1, 0, 1], 7), vec![(2, 1)]);
        assert_eq!(distinct_degree_shape(&[1, 0, 1], 5), vec![(1, 2)]);
        let f = poly_mul(&poly_mul(&[1, 0, 1], &[3, 1], 7), &poly_mul(&[5, 1], &[1, 1, 0, 1], 7), 7);
        assert_eq!(distinct_degree_shape(&f, 7), vec![(1, 2), (2, 1), (3, 1)]);
        let factors = factor_squarefree(&f, 7);
        assert_eq!(factors.len(), 4);
        let mut prod = vec![1u64];
        for fac in &factors {
            prod = poly_mul(&prod, fac, 7);
        }
        let mut fnorm = f.clone();
        poly_trim(&mut fnorm);
        assert_eq!(prod, fnorm);
    }

    #[test]
    fn solve_small_system() {
        let p = 13u64;
        let mut a = vec![vec![2u64, 1], vec![1, 3]];
        let mut b = vec![5u64, 10];
        let x = solve(p, &mut a, &mut b).unwrap();
        // 2x + y = 5, x + 3y = 10
        assert_eq!(x, vec![1, 3]);
    }
}

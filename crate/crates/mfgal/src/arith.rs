//! Word-size number theory: gcd/CRT helpers, deterministic primality,
//! factorization, divisor sieves and unit-group generators.
//!
//! Everything here works on `u64`/`i64` (with `u128`/`i128` intermediates)
//! and is deterministic, so results are reproducible across runs and
//! thread schedules.

/// Greatest common divisor of two non-negative integers.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple, panicking on overflow.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g = gcd(|a|, |b|).
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of a modulo m (m > 1), if it exists.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (g, x, _) = egcd(a.rem_euclid(m), m);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m))
}

/// (a * b) mod m without overflow.
#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by square-and-multiply.
pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for u64 (the 7-base set covers all 64-bit
/// integers).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime >= n.
pub fn next_prime(mut n: u64) -> u64 {
    if n <= 2 {
        return 2;
    }
    if n % 2 == 0 {
        n += 1;
    }
    while !is_prime(n) {
        n += 2;
    }
    n
}

/// Pollard rho with Brent's cycle detection; n must be odd composite > 1.
fn pollard_rho(n: u64) -> u64 {
    // Deterministic sequence of offsets; each is tried until a factor shows.
    for c in 1u64.. {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

/// Complete factorization of n as sorted (prime, exponent) pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut fs: Vec<u64> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        while n % p == 0 {
            fs.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            fs.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    fs.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in fs {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// All positive divisors of n, sorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n) {
        let prev = ds.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            ds.extend(prev.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut r = n;
    for (p, _) in factor(n) {
        r = r / p * (p - 1);
    }
    r
}

pub fn is_squarefree(n: u64) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}

/// True when q || n, i.e. q | n and gcd(q, n/q) = 1.
pub fn is_exact_divisor(q: u64, n: u64) -> bool {
    q != 0 && n % q == 0 && gcd(q, n / q) == 1
}

/// gcd(n, q^inf): the largest divisor of n supported on the primes of q.
pub fn gcd_infinity(mut n: u64, q: u64) -> u64 {
    if q == 0 {
        return n;
    }
    let mut out = 1u64;
    let mut g = gcd(n, q);
    while g > 1 {
        out *= g;
        n /= g;
        g = gcd(n, g);
    }
    out
}

/// Multiplicative order of a modulo m, with gcd(a, m) = 1.
pub fn mult_order(a: u64, m: u64) -> u64 {
    assert!(m > 0 && gcd(a % m, m) == 1, "order requires a unit mod m");
    if m == 1 {
        return 1;
    }
    let phi = euler_phi(m);
    let mut ord = phi;
    for (p, _) in factor(phi) {
        while ord % p == 0 && powmod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

/// Smallest primitive root modulo the odd prime power p^e (or mod 2 and 4).
pub fn primitive_root(pe: u64) -> u64 {
    assert!(pe >= 2);
    if pe == 2 {
        return 1;
    }
    if pe == 4 {
        return 3;
    }
    let fs = factor(pe);
    assert!(fs.len() == 1 && fs[0].0 != 2, "no primitive root mod {}", pe);
    let p = fs[0].0;
    let phi_p = p - 1;
    let prime_divs = factor(phi_p);
    let mut g = 0u64;
    for cand in 2..p {
        if prime_divs
            .iter()
            .all(|&(q, _)| powmod(cand, phi_p / q, p) != 1)
        {
            g = cand;
            break;
        }
    }
    assert!(g != 0);
    if fs[0].1 == 1 {
        return g;
    }
    // Lift to p^e: g works unless g^(p-1) = 1 mod p^2, in which case g+p works.
    if powmod(g, p - 1, p * p) == 1 {
        g += p;
    }
    g
}

/// CRT for two congruences x = r1 (m1), x = r2 (m2) with coprime moduli.
pub fn crt2(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    debug_assert_eq!(gcd(m1, m2), 1);
    let m = m1 as i128 * m2 as i128;
    let inv = inv_mod(m1 as i128, m2 as i128).expect("coprime moduli");
    let diff = (r2 as i128 - r1 as i128).rem_euclid(m2 as i128);
    ((r1 as i128 + m1 as i128 * ((diff * inv) % m2 as i128)).rem_euclid(m)) as u64
}

/// Sieve of smallest prime factors for 0..n (spf[0] = spf[1] = 0).
pub fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let ip = i * p as usize;
            if p > spf[i] || ip >= n {
                break;
            }
            spf[ip] = p;
        }
    }
    spf
}

/// sigma_k(n) for 1 <= n < bound, reduced mod p, via a linear sieve.
///
/// sigma_k is multiplicative with sigma_k(p^e) = 1 + p^k + ... + p^(ek),
/// which the smallest-prime-factor sieve evaluates in O(bound) ring ops.
pub fn sigma_table_mod_p(k: u32, bound: usize, p: u64) -> Vec<u64> {
    let spf = spf_sieve(bound.max(2));
    let mut sig = vec![0u64; bound];
    if bound > 1 {
        sig[1] = 1 % p;
    }
    // For each n, strip its full smallest-prime power and multiply.
    for n in 2..bound {
        let q = spf[n] as u64;
        let mut m = n;
        let mut qk_pow = 1u64; // q^(k*j)
        let qk = powmod(q, k as u64, p);
        let mut unit = 1u64 % p; // 1 + q^k + ... + q^(ek)
        while m % q as usize == 0 {
            m /= q as usize;
            qk_pow = mulmod(qk_pow, qk, p);
            unit = (unit + qk_pow) % p;
        }
        sig[n] = mulmod(unit, sig[m], p);
    }
    sig
}

/// Exact sigma_k(n) as u128 (k small, n moderate).
pub fn sigma_exact(k: u32, n: u64) -> u128 {
    let mut s: u128 = 0;
    for d in divisors(n) {
        s += (d as u128).pow(k);
    }
    s
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(mut a: i64, mut n: u64) -> i32 {
    assert!(n % 2 == 1 && n > 0);
    a = a.rem_euclid(n as i64);
    let mut t = 1i32;
    let mut a = a as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |v| v <= n) {
        x += 1;
    }
    x
}

/// The canonical generator set of (Z/NZ)*: one CRT block per prime power,
/// odd blocks use the smallest primitive root, the 2^e block (e >= 3) uses
/// (-1, 5). Each generator is returned with its multiplicative order, as a
/// residue mod N that is 1 in every other block.
pub fn unit_group_generators(n: u64) -> Vec<(u64, u64)> {
    assert!(n >= 1);
    if n <= 2 {
        return Vec::new();
    }
    let fs = factor(n);
    let mut gens: Vec<(u64, u64)> = Vec::new();
    for &(p, e) in &fs {
        let pe = p.pow(e);
        let rest = n / pe;
        let mut push = |g_block: u64, ord: u64| {
            let g = if rest == 1 {
                g_block % pe
            } else {
                crt2(g_block % pe, pe, 1, rest)
            };
            gens.push((g, ord));
        };
        if p == 2 {
            match e {
                1 => {}
                2 => push(3, 2),
                _ => {
                    push(pe - 1, 2);
                    push(5, pe / 4);
                }
            }
        } else {
            push(primitive_root(pe), pe / p * (p - 1));
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(4179340454199820289)); // 29 * 2^57 + 1
        assert!(!is_prime(3215031751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn factor_roundtrip() {
        for n in [1u64, 2, 12, 91, 360360, 600851475143, 2u64.pow(61) - 1] {
            let f = factor(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back.max(1), n.max(1));
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn exact_divisors() {
        assert!(is_exact_divisor(3, 15));
        assert!(is_exact_divisor(1, 15));
        assert!(is_exact_divisor(15, 15));
        assert!(!is_exact_divisor(2, 12)); // gcd(2, 6) = 2
        assert_eq!(gcd_infinity(360, 6), 72); // 2^3 * 3^2
        assert_eq!(gcd_infinity(7, 6), 1);
    }

    #[test]
    fn sigma_sieve_matches_exact() {
        let p = 1_000_003u64;
        for k in [1u32, 3, 5] {
            let table = sigma_table_mod_p(k, 200, p);
            for n in 1..200u64 {
                assert_eq!(table[n as usize], (sigma_exact(k, n) % p as u128) as u64);
            }
        }
    }

    #[test]
    fn unit_generators_generate() {
        for n in [3u64, 4, 5, 8, 12, 15, 16, 24, 65, 91, 105] {
            let gens = unit_group_generators(n);
            let order_product: u64 = gens.iter().map(|&(_, o)| o).product();
            assert_eq!(order_product, euler_phi(n), "n = {}", n);
            for &(g, o) in &gens {
                assert_eq!(gcd(g, n), 1);
                assert_eq!(mult_order(g, n), o);
            }
            // Products of generator powers hit every unit exactly once.
            let mut seen = std::collections::HashSet::new();
            let mut stack = vec![(0usize, 1u64)];
            while let Some((i, v)) = stack.pop() {
                if i == gens.len() {
                    assert!(seen.insert(v));
                    continue;
                }
                let (g, o) = gens[i];
                let mut w = v;
                for _ in 0..o {
                    stack.push((i + 1, w));
                    w = mulmod(w, g, n);
                }
            }
            assert_eq!(seen.len() as u64, euler_phi(n));
        }
    }

    #[test]
    fn jacobi_quadratic_residues() {
        // squares mod 7: 1, 2, 4
        assert_eq!(jacobi(2, 7), 1);
        assert_eq!(jacobi(3, 7), -1);
        assert_eq!(jacobi(-1, 7), -1);
        assert_eq!(jacobi(-1, 13), 1);
        assert_eq!(jacobi(14, 7), 0);
    }
}

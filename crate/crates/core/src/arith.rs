//! Elementary number theory shared by every other module: sieving, factoring,
//! modular arithmetic and primitive roots.

/// Greatest common divisor of two unsigned integers.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Floor of the square root, exact for every `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn isqrt_i128(n: i128) -> i128 {
    assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square_i128(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt_i128(n);
        r * r == n
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn rem_euclid_i128(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Legendre symbol (a/p) for an odd prime p, as -1, 0 or 1.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Modular inverse via the extended Euclidean algorithm.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as (prime, exponent) pairs in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Factorization of a signed 128-bit integer; trial division only, so intended
/// for discriminants of modest size.
pub fn factor_i128(n: i128) -> Vec<(u64, u32)> {
    let mut m = n.unsigned_abs();
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    let mut p: u128 = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p as u64, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m as u64, 1));
    }
    out
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: i128, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> u32 {
    factor(n).len() as u32
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Smallest primitive root modulo `m`, where `m` is 2, 4, p^k or 2p^k.
/// Candidates are tried in increasing order and checked by their order.
pub fn primitive_root(m: u64) -> Option<u64> {
    if m == 1 || m == 2 {
        return Some(1);
    }
    if m == 4 {
        return Some(3);
    }
    let phi = euler_phi(m);
    let prime_factors: Vec<u64> = factor(phi).into_iter().map(|(p, _)| p).collect();
    (2..m).find(|&g| {
        gcd(g, m) == 1 && prime_factors.iter().all(|&q| pow_mod(g, phi / q, m) != 1)
    })
}

/// Multiplicative order of `a` modulo `m` (gcd(a, m) must be 1).
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    let phi = euler_phi(m);
    let mut ord = phi;
    for (q, _) in factor(phi) {
        while ord % q == 0 && pow_mod(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Plain sieve of Eratosthenes returning all primes `<= limit`.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Segmented sieve over `[lo, hi]`, yielding primes in increasing order.
///
/// Only the base primes up to `sqrt(hi)` and one segment live in memory at a time.
pub struct PrimeRange {
    hi: u64,
    base: Vec<u64>,
    seg_lo: u64,
    segment: Vec<bool>,
    pos: usize,
}

const SEGMENT_LEN: u64 = 1 << 16;

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Self {
        let base = small_primes(isqrt(hi));
        let mut range = PrimeRange {
            hi,
            base,
            seg_lo: lo.max(2),
            segment: Vec::new(),
            pos: 0,
        };
        range.fill();
        range
    }

    fn fill(&mut self) {
        self.segment.clear();
        self.pos = 0;
        if self.seg_lo > self.hi {
            return;
        }
        let seg_hi = (self.seg_lo + SEGMENT_LEN - 1).min(self.hi);
        let len = (seg_hi - self.seg_lo + 1) as usize;
        self.segment.resize(len, true);
        for &p in &self.base {
            if p * p > seg_hi {
                break;
            }
            let start = (p * p).max(self.seg_lo.div_ceil(p) * p);
            let mut j = start;
            while j <= seg_hi {
                self.segment[(j - self.seg_lo) as usize] = false;
                j += p;
            }
        }
    }
}

impl Iterator for PrimeRange {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.segment.is_empty() {
                return None;
            }
            while self.pos < self.segment.len() {
                let i = self.pos;
                self.pos += 1;
                if self.segment[i] {
                    return Some(self.seg_lo + i as u64);
                }
            }
            self.seg_lo += self.segment.len() as u64;
            self.fill();
        }
    }
}

/// All primes `<= limit` via the segmented sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    PrimeRange::new(2, limit).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segmented_matches_plain_sieve() {
        assert_eq!(primes_up_to(200_000), small_primes(200_000));
        let window: Vec<u64> = PrimeRange::new(80, 100).collect();
        assert_eq!(window, vec![83, 89, 97]);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
    }

    #[test]
    fn factor_and_phi() {
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor(97), vec![(97, 1)]);
        assert_eq!(factor_i128(-161051), vec![(11, 5)]);
        assert_eq!(euler_phi(63), 36);
        assert_eq!(omega(117), 2);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(primitive_root(9), Some(2));
        assert_eq!(primitive_root(25), Some(2));
        for m in [7u64, 9, 13, 25, 49, 121, 343] {
            let g = primitive_root(m).unwrap();
            assert_eq!(multiplicative_order(g, m), euler_phi(m));
        }
    }

    #[test]
    fn sqrt_mod_roundtrip() {
        for p in small_primes(400).into_iter().skip(1) {
            for a in 1..p {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a);
                } else {
                    assert_eq!(legendre(a, p), -1);
                }
            }
        }
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let sieve = small_primes(10_000);
        let tested: Vec<u64> = (0..=10_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, tested);
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(u64::MAX), 4294967295);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert!(is_square_i128(1 << 40));
        assert!(!is_square_i128(-4));
    }
}

//! Elementary number theory on machine integers: modular arithmetic, primality,
//! factorization, primitive roots and modular square roots.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Least nonnegative residue of `a` modulo `m`.
pub fn modulo(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i64, m: u64) -> Option<u64> {
    let a = modulo(a, m) as i128;
    let m = m as i128;
    let (mut r0, mut r1) = (m, a);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Möbius function.
pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Multiplicative order of `a` modulo `m` (gcd(a, m) must be 1).
pub fn mult_order(a: u64, m: u64) -> u64 {
    let phi = euler_phi(m);
    divisors(phi)
        .into_iter()
        .find(|&d| mod_pow(a, d, m) == 1 % m)
        .unwrap_or(phi)
}

/// Least primitive root modulo an odd prime `p`.
pub fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| mult_order(g, p) == p - 1)
        .expect("odd prime has a primitive root")
}

/// Discrete logarithm of `a` to base `g` modulo prime `p`, by enumeration.
pub fn discrete_log(a: u64, g: u64, p: u64) -> Option<u64> {
    let a = a % p;
    let mut x = 1 % p;
    for k in 0..p - 1 {
        if x == a {
            return Some(k);
        }
        x = mod_mul(x, g, p);
    }
    None
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = modulo(a, p);
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo the odd prime `p` by Tonelli–Shanks, returning the
/// smaller of the two roots. `None` if `a` is a non-residue.
pub fn sqrt_mod(a: i64, p: u64) -> Option<u64> {
    let a = modulo(a, p);
    if a == 0 {
        return Some(0);
    }
    if legendre(a as i64, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z as i64, p) == -1).unwrap();
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mod_mul(tt, tt, p);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mod_mul(b, b, p);
        t = mod_mul(t, c, p);
        r = mod_mul(r, b, p);
    }
    Some(r.min(p - r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots_of_example_primes() {
        assert_eq!(least_primitive_root(5), 2);
        assert_eq!(least_primitive_root(11), 2);
        assert_eq!(least_primitive_root(13), 2);
        assert_eq!(least_primitive_root(7), 3);
    }

    #[test]
    fn tonelli_shanks_matches_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 17, 41, 97] {
            for a in 0..p {
                let brute = (0..p).find(|x| x * x % p == a);
                match sqrt_mod(a as i64, p) {
                    Some(r) => {
                        assert_eq!(r * r % p, a);
                        assert!(r <= p - r || r == 0);
                    }
                    None => assert!(brute.is_none()),
                }
            }
        }
    }

    #[test]
    fn inverses_and_logs() {
        assert_eq!(mod_inv(7, 22), Some(19));
        assert_eq!(mod_inv(4, 13), Some(10));
        assert_eq!(mod_inv(2, 4), None);
        assert_eq!(discrete_log(3, 2, 11), Some(8));
        assert_eq!(discrete_log(7, 2, 11), Some(7));
    }

    #[test]
    fn multiplicative_functions() {
        assert_eq!(euler_phi(20), 8);
        assert_eq!(euler_phi(624), 192);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }
}

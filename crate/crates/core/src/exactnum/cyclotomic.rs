//! Cyclotomic polynomials and reduction of dense coefficient vectors modulo them.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;
use crate::arith::{divisors, mobius};

/// Sparse integer coefficients of Φ_n below the leading term, as (degree, coeff) pairs,
/// together with the degree φ(n).
#[derive(Debug)]
pub(crate) struct CycloPoly {
    pub degree: usize,
    pub lower: Vec<(usize, i64)>,
}

fn cache() -> &'static RwLock<HashMap<u64, Arc<CycloPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CycloPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Dense coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    let mut poly: Vec<i128> = vec![1];
    let ds = divisors(n);
    for &d in &ds {
        if mobius(n / d) == 1 {
            let d = d as usize;
            let mut next = vec![0i128; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &ds {
        if mobius(n / d) == -1 {
            // exact division by (x^d - 1): poly[i] = q[i-d] - q[i]
            let d = d as usize;
            let qlen = poly.len() - d;
            let mut q = vec![0i128; qlen];
            for i in 0..qlen {
                let prev = if i >= d { q[i - d] } else { 0 };
                q[i] = prev - poly[i];
            }
            poly = q;
        }
    }
    poly.into_iter().map(|c| c as i64).collect()
}

pub(crate) fn cyclo(n: u64) -> Arc<CycloPoly> {
    if let Some(p) = cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let dense = cyclotomic_polynomial(n);
    let degree = dense.len() - 1;
    let lower = dense[..degree]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect();
    let poly = Arc::new(CycloPoly { degree, lower });
    cache().write().unwrap().insert(n, poly.clone());
    poly
}

/// Reduces a dense polynomial in ζ_n (any length) modulo Φ_n, returning the
/// φ(n) coefficients of the canonical representative.
pub(crate) fn reduce_dense(n: u64, mut coeffs: Vec<Rational>) -> Vec<Rational> {
    let n_us = n as usize;
    if coeffs.len() > n_us {
        let tail = coeffs.split_off(n_us);
        for (i, c) in tail.into_iter().enumerate() {
            if !c.is_zero() {
                coeffs[i % n_us] += c;
            }
        }
    }
    // work over a common denominator so the inner loop is integer arithmetic
    let den = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigInt::one(), |d, c| d.lcm(c.denom()));
    let mut nums: Vec<BigInt> = coeffs
        .iter()
        .map(|c| if c.is_zero() { BigInt::zero() } else { c.numer() * (&den / c.denom()) })
        .collect();
    let phi = cyclo(n);
    let deg = phi.degree;
    for i in (deg..nums.len()).rev() {
        if nums[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut nums[i]);
        let shift = i - deg;
        for &(j, pc) in &phi.lower {
            match pc {
                1 => nums[shift + j] -= &c,
                -1 => nums[shift + j] += &c,
                _ => nums[shift + j] -= &c * pc,
            }
        }
    }
    nums.truncate(deg);
    nums.resize(deg, BigInt::zero());
    nums.into_iter()
        .map(|x| if x.is_zero() { Rational::zero() } else { Rational::new(x, den.clone()) })
        .collect()
}

/// Integer version of [`reduce_dense`].
#[cfg(test)]
pub(crate) fn reduce_dense_int(n: u64, mut coeffs: Vec<i128>) -> Vec<i128> {
    let n_us = n as usize;
    if coeffs.len() > n_us {
        let tail = coeffs.split_off(n_us);
        for (i, c) in tail.into_iter().enumerate() {
            coeffs[i % n_us] += c;
        }
    }
    let phi = cyclo(n);
    let deg = phi.degree;
    for i in (deg..coeffs.len()).rev() {
        let c = std::mem::replace(&mut coeffs[i], 0);
        if c == 0 {
            continue;
        }
        let shift = i - deg;
        for &(j, pc) in &phi.lower {
            coeffs[shift + j] -= c * pc as i128;
        }
    }
    coeffs.truncate(deg);
    coeffs.resize(deg, 0);
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(20), vec![1, 0, -1, 0, 1, 0, -1, 0, 1]);
    }

    #[test]
    fn degrees_match_totient() {
        for n in 1..200u64 {
            assert_eq!(cyclo(n).degree as u64, crate::arith::euler_phi(n));
        }
    }

    #[test]
    fn x_to_the_n_reduces_to_one() {
        for n in [3u64, 8, 12, 20, 105] {
            let mut v = vec![0i128; n as usize + 1];
            v[n as usize] = 1;
            let r = reduce_dense_int(n, v);
            assert_eq!(r[0], 1);
            assert!(r[1..].iter().all(|&c| c == 0));
        }
    }
}

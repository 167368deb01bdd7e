//! Integer combinations of N-th roots of unity kept as dense vectors over ℤ/N,
//! without reducing modulo Φ_N. Cheap to accumulate; zero-tested by projection.

use num_traits::Zero;

use super::{CycNumber, Rational};
use crate::arith::{modulo, prime_divisors};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSum {
    n: u64,
    coeffs: Vec<i128>,
}

impl RootSum {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        RootSum { n, coeffs: vec![0; n as usize] }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    /// Adds c·ζ_N^e.
    pub fn add_term(&mut self, e: i64, c: i128) {
        let i = modulo(e, self.n) as usize;
        self.coeffs[i] += c;
    }

    pub fn add_assign(&mut self, other: &RootSum) {
        assert_eq!(self.n, other.n, "root sums of different moduli");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// Multiplies by ζ_N^e.
    pub fn rotate(&mut self, e: i64) {
        let k = modulo(e, self.n) as usize;
        self.coeffs.rotate_right(k);
    }

    pub fn scale(&mut self, c: i128) {
        for a in self.coeffs.iter_mut() {
            *a *= c;
        }
    }

    /// True iff the sum vanishes in ℚ(ζ_N).
    ///
    /// The operator Π_{p|N} (p − Σ_j x^{jN/p}) kills exactly the components of
    /// ℚ[x]/(x^N − 1) at non-primitive roots and is invertible on the primitive one.
    pub fn is_zero(&self) -> bool {
        let n = self.n as usize;
        let mut v = self.coeffs.clone();
        for p in prime_divisors(self.n) {
            let m = n / p as usize;
            let mut class = vec![0i128; m];
            for (i, c) in v.iter().enumerate() {
                class[i % m] += c;
            }
            for (i, c) in v.iter_mut().enumerate() {
                *c = *c * p as i128 - class[i % m];
            }
        }
        v.iter().all(|c| *c == 0)
    }

    pub fn to_cyc(&self) -> CycNumber {
        let dense = self
            .coeffs
            .iter()
            .map(|c| if *c == 0 { Rational::zero() } else { Rational::from_integer((*c).into()) })
            .collect();
        CycNumber::from_dense(self.n, dense)
    }
}

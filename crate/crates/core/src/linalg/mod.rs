//! Exact arithmetic substrate: dense rational matrices and dense integer
//! polynomials. Everything here is a pure function on immutable values.

mod matrix;
mod poly;

pub use matrix::{bareiss_det, ExactMatrix};
pub use poly::IntegerPolynomial;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u8);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `base^exp` for a signed base and a machine-size exponent.
pub fn ipow(base: i64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

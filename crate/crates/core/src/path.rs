//! Spectral data of paths `P_j`, and the squared eigenvalues that the
//! hypercycle inherits from signed subgraphs of `C_l`.
//!
//! Note the one asymmetry: [`moment_column`] treats `j = 1` as the cycle
//! contribution with eigenvalue 2 (so `4^i`), not as the path `P_1` whose
//! only eigenvalue is 0. The linear system for the multiplicities is built
//! on that convention; the true `P_1` value 0 still appears in
//! [`signed_cycle_squared_values`].

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, IntegerPolynomial};

/// Characteristic polynomial of the path on `j` vertices, from
/// `φ(P_j) = λ·φ(P_{j−1}) − φ(P_{j−2})` with `φ(P_0) = 1`, `φ(P_1) = λ`.
pub fn path_charpoly(j: usize) -> IntegerPolynomial {
    let x = IntegerPolynomial::x();
    let mut prev = IntegerPolynomial::one();
    if j == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for _ in 1..j {
        let next = &(&x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Monic polynomial in `μ` whose roots are the squared eigenvalues of `P_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaredSpectrumPoly {
    pub j: usize,
    pub poly: IntegerPolynomial,
}

/// Writes `φ(P_j; λ) = g(λ²) + λ·h(λ²)` and returns `(−1)^j·(g(μ)² − μ·h(μ)²)`.
///
/// This is `φ(√μ)·φ(−√μ)` up to sign, so its roots are exactly the squared
/// eigenvalues, and no floating point is involved.
pub fn squared_spectrum_poly(j: usize) -> Result<SquaredSpectrumPoly> {
    if j == 0 {
        return Err(Error::Parameter("path order j must be >= 1".into()));
    }
    let (g, h) = path_charpoly(j).even_odd_split();
    let mut poly = &(&g * &g) - &(&IntegerPolynomial::x() * &(&h * &h));
    if j % 2 == 1 {
        poly = -&poly;
    }
    debug_assert!(poly.is_monic() && poly.degree() == Some(j));
    Ok(SquaredSpectrumPoly { j, poly })
}

/// Adjacency matrix of the path on `j` vertices.
pub fn path_adjacency(j: usize) -> ExactMatrix {
    ExactMatrix::from_fn(j, j, |a, b| {
        if a.abs_diff(b) == 1 {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    })
}

/// `S_{ij} = Σ_k λ_{j,k}^{2i}`: `4^i` for `j = 1`, otherwise the number of
/// closed walks of length `2i` in `P_j`.
pub fn moment_column(j: usize, i: u64) -> Result<BigInt> {
    if j == 0 || i == 0 {
        return Err(Error::Parameter(format!(
            "moment_column needs j >= 1 and i >= 1, got j={j}, i={i}"
        )));
    }
    if j == 1 {
        return Ok(num_traits::pow(BigInt::from(4), i as usize));
    }
    let walks = path_adjacency(j).mat_pow(2 * i)?.trace()?;
    Ok(walks.to_integer())
}

/// `λ_{j,k}² = 4cos²(kπ/(j+1))`, the `k`-th squared eigenvalue of `P_j`.
pub fn path_squared_eigenvalue(j: usize, k: usize) -> f64 {
    let c = 2.0 * (k as f64 * PI / (j as f64 + 1.0)).cos();
    c * c
}

/// Where a squared eigenvalue of a signed subgraph of `C_l` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SquaredSource {
    /// The value 4 from the positive cycle (eigenvalue 2).
    Cycle,
    /// `4cos²(kπ/(j+1))` from the path `P_j`.
    Path { j: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquaredEigenvalue {
    pub source: SquaredSource,
    pub value: f64,
}

/// All values `λ^r` for eigenvalues `λ` of `C_l^(r)`, as a multiset:
/// `{4} ∪ {4cos²(kπ/(j+1)) : k ∈ [j], j ∈ J}` with `J = [l]` for `r ≥ 4`
/// and `J = [l−1]` for `r = 3` (only induced signed subgraphs count there).
pub fn signed_cycle_squared_values(l: usize, r: u32) -> Result<Vec<SquaredEigenvalue>> {
    if l < 3 {
        return Err(Error::Parameter(format!("cycle length l must be >= 3, got {l}")));
    }
    if r < 3 {
        return Err(Error::Parameter(format!("uniformity r must be >= 3, got {r}")));
    }
    let max_j = if r == 3 { l - 1 } else { l };
    let mut out = vec![SquaredEigenvalue {
        source: SquaredSource::Cycle,
        value: 4.0,
    }];
    for j in 1..=max_j {
        for k in 1..=j {
            out.push(SquaredEigenvalue {
                source: SquaredSource::Path { j, k },
                value: path_squared_eigenvalue(j, k),
            });
        }
    }
    Ok(out)
}

//! Exact characteristic polynomials of the r-uniform hypercycle `C_l^(r)`.
//!
//! The hypercycle is obtained from the cycle `C_l` by inserting `r - 2` new
//! vertices into every edge. Its characteristic polynomial factors as
//!
//! ```text
//! λ^{m0} · (λ^r − 4)^{m1} · Π_{j=2..l} ψ_j(λ^r)^{m_j}
//! ```
//!
//! where `ψ_j(μ)` is the monic polynomial whose roots are the squared
//! eigenvalues of the path `P_j`. The multiplicities come from closed-form
//! higher-order traces ([`trace`]) fed through an exact linear solve
//! ([`solver`]); [`oracle`] recomputes the same traces by brute-force
//! enumeration and Eulerian-circuit counting.

pub mod charpoly;
pub mod closed_forms;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod path;
pub mod solver;
pub mod trace;

pub use charpoly::{assemble, CanonicalOptions, Factor, FactoredCharPoly, RenderFormat};
pub use error::{Error, Result};
pub use linalg::{ExactMatrix, IntegerPolynomial};
pub use solver::MultiplicityVector;

/// Total degree `l·(r−1)^{l(r−1)}` of the characteristic polynomial of `C_l^(r)`.
pub fn hypercycle_degree(r: u32, l: u32) -> num_bigint::BigUint {
    let n = l as u64 * (r as u64).saturating_sub(1);
    num_bigint::BigUint::from(l) * num_traits::pow(num_bigint::BigUint::from(r.saturating_sub(1)), n as usize)
}

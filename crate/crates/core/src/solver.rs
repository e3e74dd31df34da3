//! Multiplicities of the factors of the characteristic polynomial.
//!
//! The trace vector satisfies `T = r·S·m`, and `S = H·B⁻¹` with an explicit
//! integer `B⁻¹`. Combined with `T = H·t` this gives `m = r⁻¹·B·t`, which is
//! the route [`solve_multiplicities`] takes. [`solve_via_s`] solves
//! `T = r·S·m` directly and exists as a cross-check.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_hypercycle, Error, Result};
use crate::hypercycle_degree;
use crate::linalg::{factorial, ExactMatrix};
use crate::path::{moment_column, path_squared_eigenvalue};
use crate::trace::{h_matrix, t_vector, trace_vector};

fn check_length(l: u32) -> Result<()> {
    if l < 3 {
        return Err(Error::Parameter(format!("cycle length l must be >= 3, got {l}")));
    }
    Ok(())
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `S_{ij} = moment_column(j, i)`.
pub fn s_matrix(l: u32) -> Result<ExactMatrix> {
    check_length(l)?;
    let n = l as usize;
    let mut s = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = moment_column(j + 1, i as u64 + 1)?;
            s.set(i, j, BigRational::from_integer(v));
        }
    }
    Ok(s)
}

/// Integer `B⁻¹`: first column `(4, 6, …, 2l, l)ᵀ`, and row `i < l` carries
/// `2, 4, …, 2(l−i)` in columns `i+1..l`.
pub fn b_inverse_matrix(l: u32) -> Result<ExactMatrix> {
    check_length(l)?;
    let n = l as usize;
    let mut m = ExactMatrix::zeros(n, n);
    for i in 0..n - 1 {
        m.set(i, 0, rat(2 * (i as i64 + 2)));
        for (step, col) in (i + 1..n).enumerate() {
            m.set(i, col, rat(2 * (step as i64 + 1)));
        }
    }
    m.set(n - 1, 0, rat(l as i64));
    Ok(m)
}

/// `B`, defined as the exact inverse of [`b_inverse_matrix`].
pub fn b_matrix(l: u32) -> Result<ExactMatrix> {
    b_inverse_matrix(l)?.inverse()
}

/// The banded form of `B`: first row `e_lᵀ/l`, then a `(1/2, −1, 1/2)` band
/// in rows `2..l`, with `(l+1)/l` overriding position `(l−1, l)`.
pub fn b_banded(l: u32) -> Result<ExactMatrix> {
    check_length(l)?;
    let n = l as usize;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut m = ExactMatrix::zeros(n, n);
    m.set(0, n - 1, BigRational::new(BigInt::one(), BigInt::from(l)));
    for i in 1..n {
        m.set(i, i - 1, half.clone());
        m.set(i, i, rat(-1));
        if i + 1 < n {
            m.set(i, i + 1, half.clone());
        }
    }
    m.set(n - 2, n - 1, BigRational::new(BigInt::from(l + 1), BigInt::from(l)));
    Ok(m)
}

/// `(−1)^{l−1}·2^l·(l+1)!`, the determinant of `S`. Defined for any `l ≥ 1`.
pub fn det_s_closed_form(l: u32) -> BigInt {
    let v = num_traits::pow(BigInt::from(2), l as usize) * BigInt::from(factorial(l as u64 + 1));
    if l % 2 == 0 {
        -v
    } else {
        v
    }
}

/// Exponents `(m0, m1, …, ml)` of the factored characteristic polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityVector {
    pub r: u32,
    pub l: u32,
    pub m0: BigUint,
    /// `m[j-1]` is `m_j`.
    pub m: Vec<BigUint>,
}

impl MultiplicityVector {
    /// `m_j` for `1 ≤ j ≤ l`.
    pub fn get(&self, j: usize) -> &BigUint {
        &self.m[j - 1]
    }

    /// `m0 + r·Σ j·m_j`.
    pub fn total_degree(&self) -> BigUint {
        let weighted: BigUint = self
            .m
            .iter()
            .enumerate()
            .map(|(i, mj)| mj * BigUint::from(i + 1))
            .sum();
        &self.m0 + weighted * self.r
    }
}

fn to_nonnegative(what: &str, v: &BigRational) -> Result<BigUint> {
    if !v.is_integer() {
        return Err(Error::Consistency(format!("{what} = {v} is not an integer")));
    }
    let i = v.to_integer();
    if i.is_negative() {
        return Err(Error::Consistency(format!("{what} = {i} is negative")));
    }
    Ok(i.to_biguint().expect("checked nonnegative"))
}

fn finish(r: u32, l: u32, m: Vec<BigRational>) -> Result<MultiplicityVector> {
    let m: Vec<BigUint> = m
        .iter()
        .enumerate()
        .map(|(i, v)| to_nonnegative(&format!("m_{} for (r={r}, l={l})", i + 1), v))
        .collect::<Result<_>>()?;
    if r == 3 && !m[l as usize - 1].is_zero() {
        return Err(Error::Consistency(format!(
            "m_l = {} must vanish for r = 3 (l={l})",
            m[l as usize - 1]
        )));
    }
    let weighted: BigUint = m
        .iter()
        .enumerate()
        .map(|(i, mj)| mj * BigUint::from(i + 1))
        .sum::<BigUint>()
        * r;
    let degree = hypercycle_degree(r, l);
    if weighted > degree {
        return Err(Error::Consistency(format!(
            "factor degrees {weighted} exceed total degree {degree} for (r={r}, l={l})"
        )));
    }
    Ok(MultiplicityVector {
        r,
        l,
        m0: degree - weighted,
        m,
    })
}

/// `m = r⁻¹·B·t`, then `m0` from the total degree `l(r−1)^{l(r−1)}`.
pub fn solve_multiplicities(r: u32, l: u32) -> Result<MultiplicityVector> {
    check_hypercycle(r, l)?;
    let t: Vec<BigRational> = t_vector(r, l)?
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
    let bt = b_matrix(l)?.mul_vector(&t)?;
    let inv_r = BigRational::new(BigInt::one(), BigInt::from(r));
    finish(r, l, bt.into_iter().map(|v| v * &inv_r).collect())
}

/// Solves `T = r·S·m` with `T` from the closed-form traces.
pub fn solve_via_s(r: u32, l: u32) -> Result<MultiplicityVector> {
    check_hypercycle(r, l)?;
    let traces: Vec<BigRational> = trace_vector(r, l)?
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
    let s_inv = s_matrix(l)?.inverse()?;
    let inv_r = BigRational::new(BigInt::one(), BigInt::from(r));
    let m = s_inv.mul_vector(&traces)?;
    finish(r, l, m.into_iter().map(|v| v * &inv_r).collect())
}

/// First entry where two matrices disagree (1-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryMismatch {
    pub row: usize,
    pub col: usize,
    pub expected: BigRational,
    pub actual: BigRational,
}

fn first_mismatch(expected: &ExactMatrix, actual: &ExactMatrix) -> Option<EntryMismatch> {
    for i in 0..expected.rows() {
        for j in 0..expected.cols() {
            if expected.get(i, j) != actual.get(i, j) {
                return Some(EntryMismatch {
                    row: i + 1,
                    col: j + 1,
                    expected: expected.get(i, j).clone(),
                    actual: actual.get(i, j).clone(),
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub l: u32,
    /// Offending entry of `S` versus `H·B⁻¹`, if any.
    pub s_vs_h_binv: Option<EntryMismatch>,
    pub det_s: BigInt,
    pub det_s_expected: BigInt,
    /// Offending entry of `B·B⁻¹` versus `I`, if any.
    pub b_binv_vs_identity: Option<EntryMismatch>,
}

impl IdentityReport {
    pub fn det_ok(&self) -> bool {
        self.det_s == self.det_s_expected
    }

    pub fn all_pass(&self) -> bool {
        self.s_vs_h_binv.is_none() && self.det_ok() && self.b_binv_vs_identity.is_none()
    }
}

/// Checks `S = H·B⁻¹`, `det S = (−1)^{l−1}·2^l·(l+1)!` and `B·B⁻¹ = I` exactly.
pub fn verify_identities(l: u32) -> Result<IdentityReport> {
    check_length(l)?;
    let s = s_matrix(l)?;
    let b_inv = b_inverse_matrix(l)?;
    let h_binv = h_matrix(l)?.mul_matrix(&b_inv)?;
    let b_binv = b_matrix(l)?.mul_matrix(&b_inv)?;
    let det = s.det_fraction_free()?;
    if !det.is_integer() {
        return Err(Error::Consistency(format!("det S = {det} is not an integer")));
    }
    Ok(IdentityReport {
        l,
        s_vs_h_binv: first_mismatch(&s, &h_binv),
        det_s: det.to_integer(),
        det_s_expected: det_s_closed_form(l),
        b_binv_vs_identity: first_mismatch(&ExactMatrix::identity(l as usize), &b_binv),
    })
}

/// Which symmetric-function expansion of `S⁻¹` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SInverseForm {
    /// The expansion as usually printed:
    /// `(−1)^{i+j−l+1} Σ_α σ_{l−1}(x̄_i)·σ_{l−i}(x̄_j)·Π_{k<h; k,h≠j}(x_h−x_k) / (2^l(l+1)!)`.
    Printed,
    /// The adjugate expansion with row and column roles placed consistently,
    /// and the `α_i` overcount removed:
    /// `(−1)^{i+j−l+1} Σ_α σ_{l−1}(x̄_i)·σ_{l−j}(x̄_i)·Π_{k<h; k,h≠i}(x_h−x_k) / (i·2^l(l+1)!)`.
    Adjugate,
}

/// Elementary symmetric polynomials `σ_0..σ_n` of `xs`.
fn elementary_symmetric(xs: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; xs.len() + 1];
    e[0] = 1.0;
    for (count, &x) in xs.iter().enumerate() {
        for k in (1..=count + 1).rev() {
            e[k] += x * e[k - 1];
        }
    }
    e
}

fn squared_eigenvalue(t: usize, k: usize) -> f64 {
    if t == 1 {
        4.0
    } else {
        path_squared_eigenvalue(t, k)
    }
}

/// Evaluates the symmetric-function expansion of `S⁻¹` in double precision,
/// summing over all `α ∈ [1]×[2]×…×[l]` (`l!` terms).
pub fn s_inverse_closed_form(l: u32, form: SInverseForm) -> Result<Vec<Vec<f64>>> {
    if !(3..=6).contains(&l) {
        return Err(Error::Parameter(format!(
            "closed-form S^-1 is evaluated only for 3 <= l <= 6, got {l}"
        )));
    }
    let n = l as usize;
    let denom = 2f64.powi(l as i32) * (1..=n as u64 + 1).product::<u64>() as f64;
    let mut out = vec![vec![0.0; n]; n];
    let mut alpha = vec![1usize; n];
    loop {
        let x: Vec<f64> = (0..n).map(|t| squared_eigenvalue(t + 1, alpha[t])).collect();
        for i in 1..=n {
            for j in 1..=n {
                let (sigma_a, sigma_b, skip) = match form {
                    SInverseForm::Printed => {
                        let without_i: Vec<f64> = drop_index(&x, i);
                        let without_j: Vec<f64> = drop_index(&x, j);
                        (
                            elementary_symmetric(&without_i)[n - 1],
                            elementary_symmetric(&without_j)[n - i],
                            j,
                        )
                    }
                    SInverseForm::Adjugate => {
                        let e = elementary_symmetric(&drop_index(&x, i));
                        (e[n - 1], e[n - j], i)
                    }
                };
                let mut vandermonde = 1.0;
                for k in 1..=n {
                    for h in k + 1..=n {
                        if k != skip && h != skip {
                            vandermonde *= x[h - 1] - x[k - 1];
                        }
                    }
                }
                out[i - 1][j - 1] += sigma_a * sigma_b * vandermonde;
            }
        }
        // advance the mixed-radix counter alpha_t ∈ [t]
        let mut t = 0;
        while t < n {
            alpha[t] += 1;
            if alpha[t] <= t + 1 {
                break;
            }
            alpha[t] = 1;
            t += 1;
        }
        if t == n {
            break;
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            let sign = if (i + j + 1 + n) % 2 == 0 { 1.0 } else { -1.0 };
            let extra = match form {
                SInverseForm::Printed => 1.0,
                SInverseForm::Adjugate => i as f64,
            };
            out[i - 1][j - 1] *= sign / (denom * extra);
        }
    }
    Ok(out)
}

fn drop_index(x: &[f64], one_based: usize) -> Vec<f64> {
    x.iter()
        .enumerate()
        .filter(|&(t, _)| t + 1 != one_based)
        .map(|(_, &v)| v)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SInverseCheck {
    pub l: u32,
    pub form: SInverseForm,
    pub max_abs_error: f64,
    /// 1-based position of the largest deviation.
    pub worst_entry: (usize, usize),
    pub passed: bool,
}

/// Compares the closed-form `S⁻¹` entrywise against the exact inverse.
pub fn s_inverse_closed_form_check(l: u32, tol: f64, form: SInverseForm) -> Result<SInverseCheck> {
    let closed = s_inverse_closed_form(l, form)?;
    let exact = s_matrix(l)?.inverse()?;
    let mut worst = (0.0f64, (1, 1));
    for (i, row) in closed.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let e = rational_to_f64(exact.get(i, j));
            let err = (v - e).abs();
            if !(err <= worst.0) {
                worst = (err, (i + 1, j + 1));
            }
        }
    }
    Ok(SInverseCheck {
        l,
        form,
        max_abs_error: worst.0,
        worst_entry: worst.1,
        passed: worst.0 <= tol,
    })
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    let num: f64 = q.numer().to_string().parse().unwrap_or(f64::NAN);
    let den: f64 = q.denom().to_string().parse().unwrap_or(f64::NAN);
    num / den
}

/// Exact `r·S·m`, for checking against the trace vector.
pub fn moments_from_multiplicities(mv: &MultiplicityVector) -> Result<Vec<BigInt>> {
    let s = s_matrix(mv.l)?;
    let m: Vec<BigRational> = mv
        .m
        .iter()
        .map(|v| BigRational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone())))
        .collect();
    Ok(s.mul_vector(&m)?
        .into_iter()
        .map(|v| v.to_integer() * BigInt::from(mv.r))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> ExactMatrix {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        ExactMatrix::from_integer_rows(&v).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn s_matrix_l3() {
        let s = s_matrix(3).unwrap();
        assert_eq!(s, ints(&[&[4, 2, 4], &[16, 2, 8], &[64, 2, 16]]));
        assert_eq!(s.det_fraction_free().unwrap(), q(192, 1));
        for l in 3..=7 {
            let s = s_matrix(l).unwrap();
            for i in 0..l as usize {
                assert_eq!(s.get(i, 1), &q(2, 1));
            }
        }
    }

    #[test]
    fn b_inverse_examples() {
        assert_eq!(
            b_inverse_matrix(3).unwrap(),
            ints(&[&[4, 2, 4], &[6, 0, 2], &[3, 0, 0]])
        );
        assert_eq!(
            b_inverse_matrix(4).unwrap(),
            ints(&[&[4, 2, 4, 6], &[6, 0, 2, 4], &[8, 0, 0, 2], &[4, 0, 0, 0]])
        );
        for l in 3..=10u32 {
            let m = b_inverse_matrix(l).unwrap();
            let last = l as usize - 1;
            assert_eq!(m.get(last, 0), &q(l as i64, 1));
            assert!((1..=last).all(|c| m.get(last, c) == &q(0, 1)));
        }
    }

    #[test]
    fn b_examples() {
        let b3 = b_matrix(3).unwrap();
        let expect = ExactMatrix::new(
            3,
            3,
            vec![q(0, 1), q(0, 1), q(1, 3), q(1, 2), q(-1, 1), q(4, 3), q(0, 1), q(1, 2), q(-1, 1)],
        )
        .unwrap();
        assert_eq!(b3, expect);
        let b4 = b_matrix(4).unwrap();
        assert_eq!(
            (0..4).map(|j| b4.get(2, j).clone()).collect::<Vec<_>>(),
            vec![q(0, 1), q(1, 2), q(-1, 1), q(5, 4)]
        );
    }

    #[test]
    fn b_matches_banded_form() {
        for l in 3..=10 {
            assert_eq!(b_matrix(l).unwrap(), b_banded(l).unwrap(), "l={l}");
        }
    }

    #[test]
    fn det_closed_form_values() {
        assert_eq!(det_s_closed_form(3), BigInt::from(192));
        assert_eq!(det_s_closed_form(2), BigInt::from(-24));
    }

    #[test]
    fn identities_hold() {
        for l in 3..=8 {
            let rep = verify_identities(l).unwrap();
            assert!(rep.all_pass(), "{rep:?}");
        }
        assert!(verify_identities(2).is_err());
    }

    #[test]
    fn solve_examples() {
        let mv = solve_multiplicities(3, 3).unwrap();
        assert_eq!(mv.m, vec![u(9), u(18), u(0)]);
        assert_eq!(mv.m0, u(57));
        assert_eq!(mv.total_degree(), u(192));

        let mv = solve_multiplicities(3, 5).unwrap();
        assert_eq!(mv.get(1), &u(81));
        assert_eq!(mv.get(4), &u(216));
        assert_eq!(mv.get(5), &u(0));

        assert_eq!(solve_multiplicities(4, 5).unwrap().get(1), &u(262144));
        assert!(solve_multiplicities(2, 5).is_err());
    }

    #[test]
    fn both_routes_agree_and_close_the_moments() {
        for r in 3..=6 {
            for l in 3..=8 {
                let via_b = solve_multiplicities(r, l).unwrap();
                let via_s = solve_via_s(r, l).unwrap();
                assert_eq!(via_b, via_s, "r={r} l={l}");
                assert_eq!(moments_from_multiplicities(&via_b).unwrap(), trace_vector(r, l).unwrap());
                assert_eq!(via_b.total_degree(), hypercycle_degree(r, l));
                let last = via_b.get(l as usize);
                if r == 3 {
                    assert!(last.is_zero());
                } else {
                    assert!(!last.is_zero(), "m_l > 0 expected for r={r} l={l}");
                }
            }
        }
    }

    #[test]
    fn s_inverse_adjugate_form_matches() {
        for l in 3..=5 {
            let c = s_inverse_closed_form_check(l, 1e-6, SInverseForm::Adjugate).unwrap();
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn s_inverse_printed_form_deviates() {
        let c = s_inverse_closed_form_check(3, 1e-6, SInverseForm::Printed).unwrap();
        assert!(!c.passed);
        assert!(s_inverse_closed_form(7, SInverseForm::Adjugate).is_err());
        assert!(s_inverse_closed_form(2, SInverseForm::Adjugate).is_err());
    }

    #[test]
    fn exact_inverse_of_s_is_two_sided() {
        let s = s_matrix(4).unwrap();
        let inv = s.inverse().unwrap();
        assert_eq!(&inv * &s, ExactMatrix::identity(4));
    }
}

//! Closed-form multiplicities for `l = 5` and `l = 6` as functions of `r`.
//!
//! Two variants are kept. [`ClosedFormVariant::Printed`] is the form in
//! circulation: its `m0` carries an extra `(r−1)·m1`, and for `l = 6` the
//! `t`-entry `r^{5r−10}` appears as `r^{5r−12}`, which propagates into
//! `m4..m6`. [`ClosedFormVariant::Corrected`] fixes both and agrees with
//! [`solve_multiplicities`] for every `r ≥ 3` we have tried.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::solver::solve_multiplicities;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormVariant {
    Printed,
    Corrected,
}

/// `coef · (r−1)^{a·r+b} · r^{c·r+d}`.
#[derive(Debug, Clone, Copy)]
struct Term {
    num: i64,
    den: i64,
    pred: (i64, i64),
    base: (i64, i64),
}

const fn t(num: i64, den: i64, pred: (i64, i64), base: (i64, i64)) -> Term {
    Term { num, den, pred, base }
}

const NONE: (i64, i64) = (0, 0);

impl Term {
    fn eval(&self, r: u32) -> Result<BigRational> {
        let exp = |(a, b): (i64, i64)| -> Result<usize> {
            let e = a * r as i64 + b;
            usize::try_from(e)
                .map_err(|_| Error::Parameter(format!("negative exponent {e} at r={r}")))
        };
        let value = num_traits::pow(BigInt::from(r - 1), exp(self.pred)?)
            * num_traits::pow(BigInt::from(r), exp(self.base)?);
        Ok(BigRational::new(value * self.num, BigInt::from(self.den)))
    }
}

// Index 0 is m0, index j is m_j.
const L5_PRINTED: [&[Term]; 6] = [
    &[
        t(5, 1, (5, -5), NONE),
        t(-5, 1, (4, -5), (1, -1)),
        t(5, 2, (3, -4), (2, -3)),
        t(-1, 1, NONE, (5, -11)),
        t(1, 1, NONE, (5, -10)),
    ],
    &[t(1, 1, NONE, (5, -11))],
    &[t(5, 2, (4, -5), (1, -2)), t(-5, 1, (3, -4), (2, -4)), t(5, 2, (2, -3), (3, -6))],
    &[t(5, 2, (3, -4), (2, -4)), t(-5, 1, (2, -3), (3, -6)), t(5, 2, (1, -2), (4, -8))],
    &[t(5, 2, (2, -3), (3, -6)), t(-5, 1, (1, -2), (4, -8)), t(6, 1, NONE, (5, -11))],
    &[t(5, 2, (1, -2), (4, -8)), t(-5, 1, NONE, (5, -11))],
];

const L5_M0_CORRECTED: &[Term] = &[
    t(5, 1, (5, -5), NONE),
    t(-5, 1, (4, -5), (1, -1)),
    t(5, 2, (3, -4), (2, -3)),
];

const L6_PRINTED: [&[Term]; 7] = [
    &[
        t(6, 1, (6, -6), NONE),
        t(-6, 1, (5, -6), (1, -1)),
        t(3, 1, (4, -5), (2, -3)),
        t(-1, 1, NONE, (6, -13)),
        t(1, 1, NONE, (6, -12)),
    ],
    &[t(1, 1, NONE, (6, -13))],
    &[t(3, 1, (5, -6), (1, -2)), t(-6, 1, (4, -5), (2, -4)), t(3, 1, (3, -4), (3, -6))],
    &[t(3, 1, (4, -5), (2, -4)), t(-6, 1, (3, -4), (3, -6)), t(3, 1, (2, -3), (4, -8))],
    &[t(3, 1, (3, -4), (3, -6)), t(-6, 1, (2, -3), (4, -8)), t(3, 1, (1, -2), (5, -12))],
    &[t(3, 1, (2, -3), (4, -8)), t(-6, 1, (1, -2), (5, -12)), t(7, 1, NONE, (6, -13))],
    &[t(3, 1, (1, -2), (5, -12)), t(-6, 1, NONE, (6, -13))],
];

const L6_CORRECTED: [&[Term]; 7] = [
    &[
        t(6, 1, (6, -6), NONE),
        t(-6, 1, (5, -6), (1, -1)),
        t(3, 1, (4, -5), (2, -3)),
    ],
    L6_PRINTED[1],
    L6_PRINTED[2],
    L6_PRINTED[3],
    &[t(3, 1, (3, -4), (3, -6)), t(-6, 1, (2, -3), (4, -8)), t(3, 1, (1, -2), (5, -10))],
    &[t(3, 1, (2, -3), (4, -8)), t(-6, 1, (1, -2), (5, -10)), t(7, 1, NONE, (6, -13))],
    &[t(3, 1, (1, -2), (5, -10)), t(-6, 1, NONE, (6, -13))],
];

fn table(l: u32, variant: ClosedFormVariant) -> Result<Vec<&'static [Term]>> {
    use ClosedFormVariant::*;
    Ok(match (l, variant) {
        (5, Printed) => L5_PRINTED.to_vec(),
        (5, Corrected) => {
            let mut v = L5_PRINTED.to_vec();
            v[0] = L5_M0_CORRECTED;
            v
        }
        (6, Printed) => L6_PRINTED.to_vec(),
        (6, Corrected) => L6_CORRECTED.to_vec(),
        _ => {
            return Err(Error::Parameter(format!(
                "closed forms exist only for l = 5 and l = 6, got {l}"
            )))
        }
    })
}

/// `[m0, m1, …, ml]` from the closed forms, evaluated exactly at `r`.
pub fn closed_form_multiplicities(
    r: u32,
    l: u32,
    variant: ClosedFormVariant,
) -> Result<Vec<BigRational>> {
    if r < 3 {
        return Err(Error::Parameter(format!("uniformity r must be >= 3, got {r}")));
    }
    table(l, variant)?
        .into_iter()
        .map(|terms| {
            terms
                .iter()
                .try_fold(BigRational::zero(), |acc, term| Ok(acc + term.eval(r)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormComparison {
    pub r: u32,
    pub l: u32,
    pub variant: ClosedFormVariant,
    /// `[m0, m1, …, ml]` from the solver.
    pub solved: Vec<BigInt>,
    pub closed: Vec<BigRational>,
    /// Indices `k` (0 = `m0`) where the two disagree.
    pub mismatches: Vec<usize>,
}

impl ClosedFormComparison {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn compare_with_solver(
    r: u32,
    l: u32,
    variant: ClosedFormVariant,
) -> Result<ClosedFormComparison> {
    let closed = closed_form_multiplicities(r, l, variant)?;
    let mv = solve_multiplicities(r, l)?;
    let solved: Vec<BigInt> = std::iter::once(&mv.m0)
        .chain(mv.m.iter())
        .map(|v| BigInt::from(v.clone()))
        .collect();
    let mismatches = solved
        .iter()
        .zip(&closed)
        .enumerate()
        .filter(|(_, (s, c))| BigRational::from_integer((*s).clone()) != **c)
        .map(|(k, _)| k)
        .collect();
    Ok(ClosedFormComparison {
        r,
        l,
        variant,
        solved,
        closed,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrected_forms_match_solver() {
        for l in [5, 6] {
            for r in 3..=12 {
                let c = compare_with_solver(r, l, ClosedFormVariant::Corrected).unwrap();
                assert!(c.passed(), "r={r} l={l} mismatches={:?}", c.mismatches);
            }
        }
    }

    #[test]
    fn printed_forms_differ_only_where_expected() {
        for r in 3..=12 {
            let c5 = compare_with_solver(r, 5, ClosedFormVariant::Printed).unwrap();
            assert_eq!(c5.mismatches, vec![0], "r={r}");
            let excess = &c5.closed[0] - BigRational::from_integer(c5.solved[0].clone());
            let expected = BigRational::from_integer(BigInt::from(r - 1) * &c5.solved[1]);
            assert_eq!(excess, expected);

            let c6 = compare_with_solver(r, 6, ClosedFormVariant::Printed).unwrap();
            assert_eq!(c6.mismatches, vec![0, 4, 5, 6], "r={r}");
        }
    }

    #[test]
    fn known_values_at_r3() {
        let m = closed_form_multiplicities(3, 5, ClosedFormVariant::Corrected).unwrap();
        assert_eq!(m[1], BigRational::from_integer(81.into()));
        assert_eq!(m[4], BigRational::from_integer(216.into()));
        assert!(m[5].is_zero());
        let printed = closed_form_multiplicities(3, 5, ClosedFormVariant::Printed).unwrap();
        assert_eq!(printed[0], BigRational::from_integer(1682.into()));
        assert_eq!(m[0], BigRational::from_integer(1520.into()));
    }

    #[test]
    fn rejects_other_lengths() {
        assert!(closed_form_multiplicities(3, 4, ClosedFormVariant::Printed).is_err());
        assert!(closed_form_multiplicities(2, 5, ClosedFormVariant::Printed).is_err());
    }
}

//! The characteristic polynomial in factored form
//! `λ^{e0} · Π_k f_k(λ^r)^{e_k}`, with each `f_k` a monic integer polynomial
//! in `μ = λ^r`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{binomial, IntegerPolynomial};
use crate::path::{signed_cycle_squared_values, squared_spectrum_poly, SquaredSource};
use crate::solver::{solve_multiplicities, MultiplicityVector};

/// One block `f(μ)^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub poly: IntegerPolynomial,
    pub exponent: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredCharPoly {
    r: u32,
    l: u32,
    lambda_exponent: BigUint,
    factors: Vec<Factor>,
    canonical: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CanonicalOptions {
    /// Also split off every integer root of each block as its own linear
    /// factor (e.g. `μ⁴ − 8μ³ + 22μ² − 24μ + 9` into `(μ−1)²(μ−3)²`).
    pub split_rational_roots: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Text,
    Latex,
    Json,
}

impl std::str::FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(RenderFormat::Text),
            "latex" => Ok(RenderFormat::Latex),
            "json" => Ok(RenderFormat::Json),
            other => Err(Error::Parse(format!("unknown format '{other}'"))),
        }
    }
}

/// `λ^{m0}·(μ−4)^{m1}·Π_{j≥2, m_j>0} ψ_j(μ)^{m_j}` for `C_l^(r)`.
pub fn assemble(r: u32, l: u32) -> Result<FactoredCharPoly> {
    FactoredCharPoly::from_multiplicities(&solve_multiplicities(r, l)?)
}

impl FactoredCharPoly {
    /// Validates that every factor is monic of positive degree with a
    /// positive exponent.
    pub fn new(
        r: u32,
        l: u32,
        lambda_exponent: BigUint,
        factors: Vec<Factor>,
        canonical: bool,
    ) -> Result<Self> {
        if r == 0 {
            return Err(Error::Parameter("r must be positive".into()));
        }
        for f in &factors {
            if !f.poly.is_monic() || f.poly.degree().unwrap_or(0) == 0 {
                return Err(Error::Parameter(format!(
                    "factor {} is not monic of positive degree",
                    f.poly.to_string_in("mu")
                )));
            }
            if f.exponent.is_zero() {
                return Err(Error::Parameter("factor exponents must be positive".into()));
            }
        }
        Ok(FactoredCharPoly {
            r,
            l,
            lambda_exponent,
            factors,
            canonical,
        })
    }

    pub fn from_multiplicities(mv: &MultiplicityVector) -> Result<Self> {
        let mut factors = Vec::with_capacity(mv.m.len());
        if !mv.get(1).is_zero() {
            factors.push(Factor {
                poly: IntegerPolynomial::linear_monic(BigInt::from(4)),
                exponent: mv.get(1).clone(),
            });
        }
        for j in 2..=mv.l as usize {
            if !mv.get(j).is_zero() {
                factors.push(Factor {
                    poly: squared_spectrum_poly(j)?.poly,
                    exponent: mv.get(j).clone(),
                });
            }
        }
        FactoredCharPoly::new(mv.r, mv.l, mv.m0.clone(), factors, false)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn lambda_exponent(&self) -> &BigUint {
        &self.lambda_exponent
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Degree in `λ`.
    pub fn degree(&self) -> BigUint {
        let blocks: BigUint = self
            .factors
            .iter()
            .map(|f| &f.exponent * f.poly.degree().unwrap_or(0))
            .sum();
        &self.lambda_exponent + blocks * self.r
    }

    /// Moves powers of `μ` into the `λ`-power, flattens blocks of the form
    /// `(μ−c)^k`, optionally splits off integer roots, and merges equal blocks.
    /// Block order follows first occurrence.
    pub fn canonicalize(&self, opts: CanonicalOptions) -> FactoredCharPoly {
        let mut lambda_exponent = self.lambda_exponent.clone();
        let mut out: Vec<Factor> = Vec::new();
        let mut push = |poly: IntegerPolynomial, exponent: BigUint| {
            if poly.degree().unwrap_or(0) == 0 || exponent.is_zero() {
                return;
            }
            match out.iter_mut().find(|f| f.poly == poly) {
                Some(f) => f.exponent += exponent,
                None => out.push(Factor { poly, exponent }),
            }
        };
        for f in &self.factors {
            let zeros = f.poly.trailing_zeros();
            lambda_exponent += &f.exponent * zeros * self.r;
            let rest = f
                .poly
                .shift_down(zeros)
                .expect("shift by the trailing-zero count is exact");
            if let Some((root, k)) = as_linear_power(&rest) {
                push(IntegerPolynomial::linear_monic(root), &f.exponent * k);
                continue;
            }
            if opts.split_rational_roots {
                let (roots, remainder) = split_integer_roots(&rest);
                for (root, k) in roots {
                    push(IntegerPolynomial::linear_monic(root), &f.exponent * k);
                }
                push(remainder, f.exponent.clone());
            } else {
                push(rest, f.exponent.clone());
            }
        }
        FactoredCharPoly {
            r: self.r,
            l: self.l,
            lambda_exponent,
            factors: out,
            canonical: true,
        }
    }

    /// Fully expanded polynomial in `λ`, refused when its degree exceeds `cap`.
    pub fn expand(&self, cap: u64) -> Result<IntegerPolynomial> {
        let degree = self.degree();
        if degree > BigUint::from(cap) {
            return Err(Error::Feasibility(format!(
                "expanded degree {degree} exceeds the cap {cap}"
            )));
        }
        let mut in_mu = IntegerPolynomial::one();
        for f in &self.factors {
            let e = f.exponent.to_u64().expect("bounded by the degree cap");
            let block = match as_linear_power(&f.poly) {
                Some((root, k)) => linear_power(&root, e * k as u64),
                None => f.poly.pow(e),
            };
            in_mu = &in_mu * &block;
        }
        let shift = self.lambda_exponent.to_usize().expect("bounded by the degree cap");
        Ok(in_mu.compose_power(self.r as usize).shift_up(shift))
    }

    /// `Σ λ^order` over all roots with multiplicity, exact. Orders that are
    /// not multiples of `r` give 0; otherwise each block contributes
    /// `r·e·p_{order/r}(f)`.
    pub fn power_sum(&self, order: u64) -> Result<BigInt> {
        if order == 0 {
            return Ok(BigInt::from(self.degree()));
        }
        if order % self.r as u64 != 0 {
            return Ok(BigInt::zero());
        }
        let d = (order / self.r as u64) as usize;
        let mut total = BigInt::zero();
        for f in &self.factors {
            let p = f.poly.root_power_sums(d)?;
            total += &p[d - 1] * BigInt::from(f.exponent.clone());
        }
        Ok(total * self.r)
    }

    /// Locates the roots of every block among the squared eigenvalues of
    /// the signed subgraphs of `C_l` and checks multiplicities against the
    /// solved multiplicity vector. See [`SpectrumReport`].
    pub fn numeric_spectrum_check(&self, tol: f64) -> Result<SpectrumReport> {
        let mv = solve_multiplicities(self.r, self.l)?;
        let mut values: Vec<SpectrumValue> = Vec::new();
        for s in signed_cycle_squared_values(self.l as usize, self.r)? {
            let weight = match s.source {
                SquaredSource::Cycle => mv.get(1).clone(),
                SquaredSource::Path { j: 1, .. } => BigUint::zero(),
                SquaredSource::Path { j, .. } => mv.get(j).clone(),
            };
            match values.iter_mut().find(|v| (v.value - s.value).abs() <= tol) {
                Some(v) => {
                    v.sources.push(s.source);
                    v.expected_multiplicity += weight;
                }
                None => values.push(SpectrumValue {
                    value: s.value,
                    sources: vec![s.source],
                    expected_multiplicity: weight,
                    found_multiplicity: BigUint::zero(),
                }),
            }
        }
        values.sort_by(|a, b| a.value.total_cmp(&b.value));

        // Zero is compared at the level of λ, where the λ-power lives.
        let zero_at = values.iter().position(|v| v.value.abs() <= tol);
        if let Some(z) = zero_at {
            let v = &mut values[z];
            v.expected_multiplicity = &mv.m0 + &v.expected_multiplicity * self.r;
            v.found_multiplicity = self.lambda_exponent.clone();
        }

        let mut unexplained = Vec::new();
        for (index, f) in self.factors.iter().enumerate() {
            let mut explained = 0usize;
            for (vi, v) in values.iter_mut().enumerate() {
                let k = if Some(vi) == zero_at {
                    f.poly.trailing_zeros()
                } else {
                    numeric_multiplicity(&f.poly, v.value, tol)
                };
                explained += k;
                let scale = if Some(vi) == zero_at { self.r } else { 1 };
                v.found_multiplicity += &f.exponent * k * scale;
            }
            let degree = f.poly.degree().unwrap_or(0);
            if explained != degree {
                unexplained.push(UnexplainedRoots {
                    factor_index: index,
                    degree,
                    explained,
                });
            }
        }
        if zero_at.is_none() {
            return Err(Error::Consistency("the root set must contain 0".into()));
        }
        let passed = unexplained.is_empty()
            && values
                .iter()
                .all(|v| v.found_multiplicity == v.expected_multiplicity && !v.found_multiplicity.is_zero());
        Ok(SpectrumReport {
            r: self.r,
            l: self.l,
            tol,
            values,
            unexplained,
            passed,
        })
    }

    pub fn render(&self, format: RenderFormat) -> String {
        match format {
            RenderFormat::Text => self.render_symbolic(&TEXT),
            RenderFormat::Latex => self.render_symbolic(&LATEX),
            RenderFormat::Json => {
                let doc = JsonDocument {
                    r: self.r,
                    l: self.l,
                    degree: self.degree().to_string(),
                    lambda_exponent: self.lambda_exponent.to_string(),
                    factors: self
                        .factors
                        .iter()
                        .map(|f| JsonFactor {
                            mu_coeffs_low_to_high: f.poly.coeffs().iter().map(|c| c.to_string()).collect(),
                            exponent: f.exponent.to_string(),
                        })
                        .collect(),
                    canonical: self.canonical,
                };
                serde_json::to_string_pretty(&doc).expect("plain data serializes")
            }
        }
    }

    /// Inverse of `render(RenderFormat::Json)`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: JsonDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        let big = |what: &str, s: &str| -> Result<BigUint> {
            s.parse()
                .map_err(|_| Error::Parse(format!("{what} '{s}' is not a nonnegative integer")))
        };
        let factors = doc
            .factors
            .iter()
            .map(|f| {
                let coeffs = f
                    .mu_coeffs_low_to_high
                    .iter()
                    .map(|c| {
                        c.parse::<BigInt>()
                            .map_err(|_| Error::Parse(format!("coefficient '{c}' is not an integer")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Factor {
                    poly: IntegerPolynomial::from_coeffs(coeffs),
                    exponent: big("exponent", &f.exponent)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let parsed = FactoredCharPoly::new(
            doc.r,
            doc.l,
            big("lambda_exponent", &doc.lambda_exponent)?,
            factors,
            doc.canonical,
        )?;
        let degree = big("degree", &doc.degree)?;
        if parsed.degree() != degree {
            return Err(Error::Parse(format!(
                "declared degree {degree} does not match the factors ({})",
                parsed.degree()
            )));
        }
        Ok(parsed)
    }

    fn render_symbolic(&self, style: &Style) -> String {
        let mut parts: Vec<String> = Vec::new();
        if !self.lambda_exponent.is_zero() {
            parts.push(style.lambda_power(&self.lambda_exponent.to_string(), true));
        }
        for f in &self.factors {
            let body = render_in_lambda(&f.poly, self.r, style);
            if f.exponent.is_one() {
                parts.push(format!("({body})"));
            } else {
                parts.push(format!("({body}){}", style.exponent(&f.exponent.to_string())));
            }
        }
        if parts.is_empty() {
            return "1".into();
        }
        parts.join(style.product)
    }
}

impl fmt::Display for FactoredCharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderFormat::Text))
    }
}

#[derive(Serialize, Deserialize)]
struct JsonDocument {
    r: u32,
    l: u32,
    degree: String,
    lambda_exponent: String,
    factors: Vec<JsonFactor>,
    canonical: bool,
}

#[derive(Serialize, Deserialize)]
struct JsonFactor {
    mu_coeffs_low_to_high: Vec<String>,
    exponent: String,
}

struct Style {
    lambda: &'static str,
    minus: &'static str,
    plus: &'static str,
    leading_minus: &'static str,
    product: &'static str,
    braces: bool,
}

const TEXT: Style = Style {
    lambda: "λ",
    minus: " − ",
    plus: " + ",
    leading_minus: "−",
    product: " · ",
    braces: false,
};

const LATEX: Style = Style {
    lambda: "\\lambda",
    minus: "-",
    plus: "+",
    leading_minus: "-",
    product: "",
    braces: true,
};

impl Style {
    /// `^e`, braced in LaTeX when forced or when `e` has several digits.
    fn exponent_with(&self, e: &str, force_braces: bool) -> String {
        if self.braces && (force_braces || e.len() > 1) {
            format!("^{{{e}}}")
        } else {
            format!("^{e}")
        }
    }

    fn exponent(&self, e: &str) -> String {
        self.exponent_with(e, true)
    }

    fn lambda_power(&self, e: &str, outer: bool) -> String {
        if e == "1" {
            self.lambda.to_string()
        } else {
            format!("{}{}", self.lambda, self.exponent_with(e, outer))
        }
    }
}

fn render_in_lambda(poly: &IntegerPolynomial, r: u32, style: &Style) -> String {
    let mut out = String::new();
    for (i, c) in poly.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        if out.is_empty() {
            if negative {
                out.push_str(style.leading_minus);
            }
        } else {
            out.push_str(if negative { style.minus } else { style.plus });
        }
        let magnitude = c.abs();
        if i == 0 || !magnitude.is_one() {
            out.push_str(&magnitude.to_string());
        }
        if i > 0 {
            out.push_str(&style.lambda_power(&(i as u64 * r as u64).to_string(), false));
        }
    }
    out
}

/// `Some((c, k))` when `poly = (μ − c)^k` with integer `c`.
fn as_linear_power(poly: &IntegerPolynomial) -> Option<(BigInt, usize)> {
    let k = poly.degree()?;
    if k == 0 || !poly.is_monic() {
        return None;
    }
    let next = poly.coeff(k - 1);
    let k_big = BigInt::from(k);
    if !(&next % &k_big).is_zero() {
        return None;
    }
    let root = -(next / k_big);
    (IntegerPolynomial::linear_monic(root.clone()).pow(k as u64) == *poly).then_some((root, k))
}

/// `(μ − c)^e` by the binomial theorem.
fn linear_power(root: &BigInt, e: u64) -> IntegerPolynomial {
    let neg = -root;
    let mut coeffs = vec![BigInt::zero(); e as usize + 1];
    let mut power = BigInt::one();
    // coeffs[i] = C(e, i)·(−c)^{e−i}; fill from the top so powers of −c grow.
    for i in (0..=e).rev() {
        coeffs[i as usize] = BigInt::from(binomial(e, i)) * &power;
        power *= &neg;
    }
    IntegerPolynomial::from_coeffs(coeffs)
}

/// Synthetic division by `μ − c`; `None` if `c` is not a root.
fn divide_by_root(poly: &IntegerPolynomial, c: &BigInt) -> Option<IntegerPolynomial> {
    let coeffs = poly.coeffs();
    let n = coeffs.len();
    if n < 2 {
        return None;
    }
    let mut quotient = vec![BigInt::zero(); n - 1];
    let mut carry = BigInt::zero();
    for i in (1..n).rev() {
        carry = &coeffs[i] + carry * c;
        quotient[i - 1] = carry.clone();
    }
    let remainder = &coeffs[0] + carry * c;
    remainder.is_zero().then(|| IntegerPolynomial::from_coeffs(quotient))
}

/// Integer roots of a monic polynomial with nonzero constant term, with
/// multiplicities, and the cofactor. Constant terms beyond `u64` are left
/// unsplit.
fn split_integer_roots(poly: &IntegerPolynomial) -> (Vec<(BigInt, usize)>, IntegerPolynomial) {
    let mut rest = poly.clone();
    let mut roots = Vec::new();
    let Some(constant) = poly.coeff(0).abs().to_u64() else {
        return (roots, rest);
    };
    if constant == 0 {
        return (roots, rest);
    }
    let mut divisors: Vec<u64> = Vec::new();
    let mut d = 1u64;
    while d * d <= constant {
        if constant % d == 0 {
            divisors.push(d);
            divisors.push(constant / d);
        }
        d += 1;
    }
    divisors.sort_unstable();
    divisors.dedup();
    for d in divisors {
        for c in [BigInt::from(d), -BigInt::from(d)] {
            let mut k = 0;
            while let Some(q) = divide_by_root(&rest, &c) {
                rest = q;
                k += 1;
            }
            if k > 0 {
                roots.push((c, k));
            }
        }
    }
    (roots, rest)
}

/// Order of vanishing of `poly` at `x`, judged by successive derivatives
/// against the size of their terms.
fn numeric_multiplicity(poly: &IntegerPolynomial, x: f64, tol: f64) -> usize {
    let mut g = poly.clone();
    let mut k = 0;
    while g.degree().unwrap_or(0) > 0 && g.eval_f64(x).abs() <= tol * g.abs_eval_f64(x).max(1.0) {
        k += 1;
        g = g.derivative();
    }
    k
}

/// One value of `λ^r` over the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumValue {
    pub value: f64,
    pub sources: Vec<SquaredSource>,
    /// For `0` this counts the root `λ = 0` in `λ`; otherwise the root in `μ`.
    pub expected_multiplicity: BigUint,
    pub found_multiplicity: BigUint,
}

/// Roots of a block that none of the expected values account for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnexplainedRoots {
    pub factor_index: usize,
    pub degree: usize,
    pub explained: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub r: u32,
    pub l: u32,
    pub tol: f64,
    pub values: Vec<SpectrumValue>,
    pub unexplained: Vec<UnexplainedRoots>,
    pub passed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercycle_degree;
    use crate::trace::trace_dr;

    fn p(c: &[i64]) -> IntegerPolynomial {
        IntegerPolynomial::from_i64s(c)
    }

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn factor(c: &[i64], e: u64) -> Factor {
        Factor {
            poly: p(c),
            exponent: u(e),
        }
    }

    #[test]
    fn assemble_small() {
        let f = assemble(3, 3).unwrap();
        assert_eq!(f.lambda_exponent(), &u(57));
        assert_eq!(f.factors(), &[factor(&[-4, 1], 9), factor(&[1, -2, 1], 18)]);
        assert_eq!(f.degree(), u(192));
        assert!(!f.is_canonical());
    }

    #[test]
    fn canonical_small_and_rendering() {
        let f = assemble(3, 3).unwrap().canonicalize(CanonicalOptions::default());
        assert_eq!(f.factors(), &[factor(&[-4, 1], 9), factor(&[-1, 1], 36)]);
        assert_eq!(f.render(RenderFormat::Text), "λ^57 · (λ^3 − 4)^9 · (λ^3 − 1)^36");
        assert_eq!(
            f.render(RenderFormat::Latex),
            "\\lambda^{57}(\\lambda^3-4)^{9}(\\lambda^3-1)^{36}"
        );
        assert_eq!(f.to_string(), f.render(RenderFormat::Text));
    }

    #[test]
    fn odd_path_blocks_feed_the_lambda_power() {
        let f = FactoredCharPoly::new(
            3,
            3,
            u(57),
            vec![factor(&[-4, 1], 9), factor(&[0, 4, -4, 1], 5)],
            false,
        )
        .unwrap();
        let c = f.canonicalize(CanonicalOptions::default());
        assert_eq!(c.lambda_exponent(), &u(57 + 15));
        assert_eq!(c.factors(), &[factor(&[-4, 1], 9), factor(&[-2, 1], 10)]);
        assert_eq!(c.degree(), f.degree());
    }

    #[test]
    fn canonicalize_is_idempotent_and_keeps_degree() {
        for r in 3..=6 {
            for l in 3..=8 {
                let f = assemble(r, l).unwrap();
                for split in [false, true] {
                    let opts = CanonicalOptions { split_rational_roots: split };
                    let c = f.canonicalize(opts);
                    assert_eq!(c.degree(), hypercycle_degree(r, l), "r={r} l={l}");
                    assert_eq!(c.canonicalize(opts), c);
                }
            }
        }
    }

    #[test]
    fn splitting_integer_roots() {
        // ψ_5 = μ(μ−1)²(μ−3)²
        let f = FactoredCharPoly::new(4, 5, u(0), vec![Factor {
            poly: squared_spectrum_poly(5).unwrap().poly,
            exponent: u(2),
        }], false)
        .unwrap();
        let plain = f.canonicalize(CanonicalOptions::default());
        assert_eq!(plain.factors().len(), 1);
        assert_eq!(plain.lambda_exponent(), &u(8));
        let split = f.canonicalize(CanonicalOptions { split_rational_roots: true });
        assert_eq!(split.factors(), &[factor(&[-1, 1], 4), factor(&[-3, 1], 4)]);
        assert_eq!(split.degree(), f.degree());
        // ψ_4 = μ² − 3μ + 1 has no rational roots.
        let g = FactoredCharPoly::new(4, 4, u(0), vec![factor(&[1, -3, 1], 1)], false).unwrap();
        assert_eq!(g.canonicalize(CanonicalOptions { split_rational_roots: true }).factors(), g.factors());
    }

    #[test]
    fn degree_identity_on_grid() {
        for r in 3..=6 {
            for l in 3..=8 {
                assert_eq!(assemble(r, l).unwrap().degree(), hypercycle_degree(r, l));
            }
        }
    }

    #[test]
    fn power_sums_reproduce_traces() {
        for r in 3..=6u32 {
            for l in 3..=8u32 {
                let f = assemble(r, l).unwrap();
                let c = f.canonicalize(CanonicalOptions { split_rational_roots: true });
                for d in 1..=l {
                    let expected = trace_dr(r, l, d).unwrap();
                    let order = d as u64 * r as u64;
                    assert_eq!(f.power_sum(order).unwrap(), expected, "r={r} l={l} d={d}");
                    assert_eq!(c.power_sum(order).unwrap(), expected);
                }
                assert!(f.power_sum(r as u64 + 1).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn expansion() {
        let f = assemble(3, 3).unwrap();
        let e = f.expand(1_000_000).unwrap();
        assert_eq!(e.degree(), Some(192));
        assert!(e.is_monic());
        assert!(e.eval(&BigInt::one()).is_zero());
        for (i, c) in e.coeffs().iter().enumerate() {
            if !c.is_zero() {
                assert_eq!(i % 3, 0, "exponent {i}");
            }
        }
        assert!(e.coeff(191).is_zero() && e.coeff(190).is_zero());
        assert_eq!(e.coeff(189), BigInt::from(-72));
        let canonical = f.canonicalize(CanonicalOptions::default()).expand(1_000_000).unwrap();
        assert_eq!(canonical, e);
        match f.expand(100) {
            Err(Error::Feasibility(msg)) => assert!(msg.contains("192")),
            other => panic!("expected feasibility error, got {other:?}"),
        }
    }

    #[test]
    fn expansion_power_sums_match() {
        let f = assemble(3, 4).unwrap();
        let e = f.expand(1_000_000).unwrap();
        let sums = e.root_power_sums(12).unwrap();
        for (i, s) in sums.iter().enumerate() {
            assert_eq!(s, &f.power_sum(i as u64 + 1).unwrap());
        }
    }

    #[test]
    fn linear_power_matches_repeated_product() {
        for c in [-3i64, 0, 1, 4] {
            for e in 0..6u64 {
                assert_eq!(
                    linear_power(&BigInt::from(c), e),
                    IntegerPolynomial::linear_monic(BigInt::from(c)).pow(e)
                );
            }
        }
    }

    #[test]
    fn json_round_trip() {
        for f in [assemble(3, 3).unwrap(), assemble(5, 6).unwrap().canonicalize(CanonicalOptions::default())] {
            let text = f.render(RenderFormat::Json);
            assert_eq!(FactoredCharPoly::from_json(&text).unwrap(), f);
        }
        let text = assemble(3, 3).unwrap().render(RenderFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["degree"], "192");
        assert_eq!(v["lambda_exponent"], "57");
        assert_eq!(v["factors"][0]["mu_coeffs_low_to_high"], serde_json::json!(["-4", "1"]));
        assert_eq!(v["factors"][1]["exponent"], "18");
        assert_eq!(v["canonical"], false);
        let broken = text.replace("\"192\"", "\"193\"");
        assert!(matches!(FactoredCharPoly::from_json(&broken), Err(Error::Parse(_))));
        assert!(FactoredCharPoly::from_json("{").is_err());
    }

    #[test]
    fn spectrum_membership() {
        for r in 3..=5 {
            for l in 3..=7 {
                let f = assemble(r, l).unwrap();
                let rep = f.numeric_spectrum_check(1e-9).unwrap();
                assert!(rep.passed, "r={r} l={l}: {rep:?}");
                let c = f.canonicalize(CanonicalOptions { split_rational_roots: true });
                assert!(c.numeric_spectrum_check(1e-9).unwrap().passed);
            }
        }
        let rep = assemble(3, 3).unwrap().numeric_spectrum_check(1e-9).unwrap();
        let values: Vec<f64> = rep.values.iter().map(|v| v.value).collect();
        assert_eq!(values.len(), 3);
        assert!((values[0]).abs() < 1e-12 && (values[1] - 1.0).abs() < 1e-12 && (values[2] - 4.0).abs() < 1e-12);

        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        let rep = assemble(4, 4).unwrap().numeric_spectrum_check(1e-9).unwrap();
        let v = rep.values.iter().find(|v| (v.value - golden).abs() < 1e-9).unwrap();
        assert_eq!(v.sources.len(), 2);
        assert_eq!(v.found_multiplicity, solve_multiplicities(4, 4).unwrap().get(4) * 2u32);
    }

    #[test]
    fn spectrum_check_flags_foreign_roots() {
        let f = assemble(3, 3).unwrap();
        let mut factors = f.factors().to_vec();
        factors.push(factor(&[-5, 1], 1));
        let bad = FactoredCharPoly::new(3, 3, f.lambda_exponent().clone(), factors, false).unwrap();
        let rep = bad.numeric_spectrum_check(1e-9).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.unexplained, vec![UnexplainedRoots { factor_index: 2, degree: 1, explained: 0 }]);
    }

    #[test]
    fn constructor_validation() {
        assert!(FactoredCharPoly::new(3, 3, u(0), vec![factor(&[1, 2], 1)], false).is_err());
        assert!(FactoredCharPoly::new(3, 3, u(0), vec![factor(&[-1, 1], 0)], false).is_err());
        assert!(FactoredCharPoly::new(3, 3, u(0), vec![factor(&[1], 1)], false).is_err());
        assert!("yaml".parse::<RenderFormat>().is_err());
        assert_eq!("latex".parse::<RenderFormat>().unwrap(), RenderFormat::Latex);
    }
}

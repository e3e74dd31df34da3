//! Closed-form higher-order traces of the adjacency tensor of `C_l^(r)`.
//!
//! Every nonzero trace has order `d·r`. For `d < l` only sub-hyperpaths
//! contribute:
//!
//! ```text
//! Tr_{dr} = Σ_{s=1..d} h(d;s) · l · r^{s(r−2)+1} · (r−1)^{(l−s)(r−1)−1}
//! ```
//!
//! and at `d = l` the whole hypercycle adds `2(l+1)·l·r^{l(r−2)}`. In matrix
//! form the trace vector is `T = H·t`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_hypercycle, Error, Result};
use crate::linalg::{binomial, ExactMatrix};

/// Composition of `d` into positive parts, in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    pub parts: Vec<u32>,
}

impl Composition {
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// All `C(d−1, s−1)` compositions of `d` into `s` positive parts, in
/// lexicographic order.
pub fn compositions(d: u32, s: u32) -> Result<Vec<Composition>> {
    if s < 1 || s > d {
        return Err(Error::Parameter(format!(
            "compositions need 1 <= s <= d, got d={d}, s={s}"
        )));
    }
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(s as usize);
    fill_compositions(d, s, &mut parts, &mut out);
    Ok(out)
}

fn fill_compositions(rest: u32, slots: u32, parts: &mut Vec<u32>, out: &mut Vec<Composition>) {
    if slots == 1 {
        parts.push(rest);
        out.push(Composition {
            parts: parts.clone(),
        });
        parts.pop();
        return;
    }
    for first in 1..=rest - (slots - 1) {
        parts.push(first);
        fill_compositions(rest - first, slots - 1, parts, out);
        parts.pop();
    }
}

fn h_cache() -> &'static Mutex<HashMap<(u32, u32), BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `h(d;s)`: 1 for `s = 1`, otherwise
///
/// ```text
/// d · Σ_{a ⊨ d, |a| = s} Π_{j=2..s−1} a_j · Π_{j=1..s−1} C(a_j+a_{j+1}, a_j) / (a_j+a_{j+1})
/// ```
///
/// Individual terms are fractions; only the total is integral. Results are
/// memoized in a process-wide table.
pub fn h_value(d: u32, s: u32) -> Result<BigInt> {
    if s < 1 || s > d {
        return Err(Error::Parameter(format!("h(d;s) needs 1 <= s <= d, got d={d}, s={s}")));
    }
    if let Some(v) = h_cache().lock().expect("h cache poisoned").get(&(d, s)) {
        return Ok(v.clone());
    }
    let value = compute_h(d, s)?;
    h_cache()
        .lock()
        .expect("h cache poisoned")
        .insert((d, s), value.clone());
    Ok(value)
}

fn compute_h(d: u32, s: u32) -> Result<BigInt> {
    if s == 1 {
        return Ok(BigInt::one());
    }
    let mut sum = BigRational::zero();
    for comp in compositions(d, s)? {
        let a = &comp.parts;
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for &inner in &a[1..a.len() - 1] {
            num *= inner;
        }
        for w in a.windows(2) {
            let pair = (w[0] + w[1]) as u64;
            num *= BigInt::from(binomial(pair, w[0] as u64));
            den *= pair;
        }
        sum += BigRational::new(num, den);
    }
    let total = sum * BigInt::from(d);
    if !total.is_integer() {
        return Err(Error::Consistency(format!("h({d};{s}) = {total} is not an integer")));
    }
    Ok(total.to_integer())
}

fn path_weight(r: u32, l: u32, s: u32) -> BigInt {
    // l · r^{s(r−2)+1} · (r−1)^{(l−s)(r−1)−1}
    let r_exp = (s * (r - 2) + 1) as usize;
    let q_exp = ((l - s) * (r - 1) - 1) as usize;
    BigInt::from(l) * num_traits::pow(BigInt::from(r), r_exp) * num_traits::pow(BigInt::from(r - 1), q_exp)
}

fn cycle_weight(r: u32, l: u32) -> BigInt {
    // l · r^{l(r−2)}
    BigInt::from(l) * num_traits::pow(BigInt::from(r), (l * (r - 2)) as usize)
}

/// `Tr_{dr}(A(C_l^(r)))` for `1 ≤ d ≤ l`.
pub fn trace_dr(r: u32, l: u32, d: u32) -> Result<BigInt> {
    check_hypercycle(r, l)?;
    if d == 0 {
        return Err(Error::Parameter("trace index d must be >= 1".into()));
    }
    if d > l {
        return Err(Error::UnsupportedOrder {
            order: d as u64 * r as u64,
            max: l as u64 * r as u64,
        });
    }
    let top = if d == l { l - 1 } else { d };
    let mut total = BigInt::zero();
    for s in 1..=top {
        total += h_value(d, s)? * path_weight(r, l, s);
    }
    if d == l {
        total += BigInt::from(2 * (l + 1)) * cycle_weight(r, l);
    }
    Ok(total)
}

/// `Tr_order` for any `1 ≤ order ≤ l·r`; zero unless `r` divides `order`.
pub fn trace_any(r: u32, l: u32, order: u64) -> Result<BigInt> {
    check_hypercycle(r, l)?;
    if order == 0 {
        return Err(Error::Parameter("trace order must be >= 1".into()));
    }
    let max = l as u64 * r as u64;
    if order > max {
        return Err(Error::UnsupportedOrder { order, max });
    }
    if order % r as u64 != 0 {
        return Ok(BigInt::zero());
    }
    trace_dr(r, l, (order / r as u64) as u32)
}

/// `t_s = l·r^{s(r−2)+1}·(r−1)^{(l−s)(r−1)−1}` for `s < l`, `t_l = l·r^{l(r−2)}`.
pub fn t_vector(r: u32, l: u32) -> Result<Vec<BigInt>> {
    check_hypercycle(r, l)?;
    let mut t: Vec<BigInt> = (1..l).map(|s| path_weight(r, l, s)).collect();
    t.push(cycle_weight(r, l));
    Ok(t)
}

/// The `T` vector `(Tr_r, Tr_{2r}, …, Tr_{lr})`.
pub fn trace_vector(r: u32, l: u32) -> Result<Vec<BigInt>> {
    (1..=l).map(|d| trace_dr(r, l, d)).collect()
}

/// Lower-triangular `H` with `h_{ij} = h(i;j)` except `h_{ll} = 2(l+1)`.
pub fn h_matrix(l: u32) -> Result<ExactMatrix> {
    if l < 3 {
        return Err(Error::Parameter(format!("cycle length l must be >= 3, got {l}")));
    }
    let n = l as usize;
    let mut m = ExactMatrix::zeros(n, n);
    for i in 1..=l {
        for j in 1..=i {
            let v = if i == l && j == l {
                BigInt::from(2 * (l + 1))
            } else {
                h_value(i, j)?
            };
            m.set((i - 1) as usize, (j - 1) as usize, BigRational::from_integer(v));
        }
    }
    Ok(m)
}

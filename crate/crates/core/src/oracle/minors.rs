//! Primary minors of the Laplacians of the multi-digraphs that appear in the
//! trace computation, compared against their closed forms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::bareiss_det;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorKind {
    /// A hyperpath of `s` hyperedges with weights `a_1..a_s`.
    Path,
    /// The hypercycle with per-edge weights `a_1..a_l`.
    Cycle,
    /// The hypercycle in which each shared vertex leaves through one edge only.
    OrientedCycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinorParams {
    Path { weights: Vec<u64> },
    Cycle { weights: Vec<u64> },
    OrientedCycle { length: u32, weight: u64 },
}

impl MinorParams {
    pub fn kind(&self) -> MinorKind {
        match self {
            MinorParams::Path { .. } => MinorKind::Path,
            MinorParams::Cycle { .. } => MinorKind::Cycle,
            MinorParams::OrientedCycle { .. } => MinorKind::OrientedCycle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorCheck {
    pub kind: MinorKind,
    pub order: usize,
    pub determinant: BigInt,
    pub closed_form: BigRational,
}

impl MinorCheck {
    pub fn passed(&self) -> bool {
        BigRational::from_integer(self.determinant.clone()) == self.closed_form
    }
}

/// Weighted Laplacian `Deg_out − A` built arc by arc.
#[derive(Default)]
struct Laplacian {
    entries: BTreeMap<(usize, usize), BigInt>,
    size: usize,
}

impl Laplacian {
    fn arc(&mut self, u: usize, v: usize, weight: u64) {
        *self.entries.entry((u, u)).or_insert_with(BigInt::zero) += weight;
        *self.entries.entry((u, v)).or_insert_with(BigInt::zero) -= weight;
        self.size = self.size.max(u + 1).max(v + 1);
    }

    /// Every member of `edge` gets an arc of weight `w` to every other member.
    fn complete(&mut self, edge: &[usize], w: u64) {
        for &u in edge {
            self.star(u, edge, w);
        }
    }

    fn star(&mut self, from: usize, edge: &[usize], w: u64) {
        for &v in edge {
            if v != from {
                self.arc(from, v, w);
            }
        }
    }

    fn minor_without(&self, dropped: usize) -> Vec<Vec<BigInt>> {
        let keep: Vec<usize> = (0..self.size).filter(|&i| i != dropped).collect();
        keep.iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| self.entries.get(&(i, j)).cloned().unwrap_or_default())
                    .collect()
            })
            .collect()
    }
}

/// Hyperedges of a chain of `count` hyperedges on vertices `0..`, each
/// sharing its last vertex with the next; when `closed`, the last edge ends
/// at vertex 0.
fn chain(r: u32, count: usize, closed: bool) -> Vec<Vec<usize>> {
    let inner = r as usize - 2;
    let mut edges = Vec::with_capacity(count);
    let mut start = 0;
    for i in 0..count {
        let mut e: Vec<usize> = (start..=start + inner + 1).collect();
        if closed && i + 1 == count {
            *e.last_mut().expect("nonempty edge") = 0;
        }
        start += inner + 1;
        edges.push(e);
    }
    edges
}

fn rpow(r: u32, exp: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(r));
    if exp >= 0 {
        num_traits::pow(base, exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

fn product_of_powers(weights: &[u64], exp: u32) -> BigRational {
    weights.iter().fold(BigRational::one(), |acc, &a| {
        acc * num_traits::pow(BigRational::from_integer(BigInt::from(a)), exp as usize)
    })
}

fn check_weights(weights: &[u64], min_len: usize) -> Result<()> {
    if weights.len() < min_len {
        return Err(Error::Parameter(format!(
            "need at least {min_len} weights, got {}",
            weights.len()
        )));
    }
    if weights.contains(&0) {
        return Err(Error::Parameter("weights must be positive".into()));
    }
    Ok(())
}

/// Builds the Laplacian of the multi-digraph, deletes the first vertex of
/// the first hyperedge, and compares the determinant with its closed form:
///
/// * path: `r^{s(r−2)}·Π a_i^{r−1}`
/// * cycle: `2·r^{l(r−2)−1}·Π a_i^{r−1}·Σ 1/a_i`
/// * oriented cycle: `2^l·r^{l(r−2)−1}·a^{(r−1)l−1}`
pub fn minor_determinant_check(r: u32, params: &MinorParams) -> Result<MinorCheck> {
    if r < 3 {
        return Err(Error::Parameter(format!("uniformity r must be >= 3, got {r}")));
    }
    let mut lap = Laplacian::default();
    let rr = r as i64;
    let closed_form = match params {
        MinorParams::Path { weights } => {
            check_weights(weights, 1)?;
            for (edge, &w) in chain(r, weights.len(), false).iter().zip(weights) {
                lap.complete(edge, w);
            }
            let s = weights.len() as i64;
            rpow(r, s * (rr - 2)) * product_of_powers(weights, r - 1)
        }
        MinorParams::Cycle { weights } => {
            check_weights(weights, 3)?;
            for (edge, &w) in chain(r, weights.len(), true).iter().zip(weights) {
                lap.complete(edge, w);
            }
            let l = weights.len() as i64;
            let reciprocal_sum: BigRational = weights
                .iter()
                .map(|&a| BigRational::new(BigInt::one(), BigInt::from(a)))
                .sum();
            BigRational::from_integer(BigInt::from(2))
                * rpow(r, l * (rr - 2) - 1)
                * product_of_powers(weights, r - 1)
                * reciprocal_sum
        }
        MinorParams::OrientedCycle { length, weight } => {
            if *length < 3 {
                return Err(Error::Parameter(format!("cycle length must be >= 3, got {length}")));
            }
            if *weight == 0 {
                return Err(Error::Parameter("weight must be positive".into()));
            }
            let edges = chain(r, *length as usize, true);
            for (j, edge) in edges.iter().enumerate() {
                // Inner vertices point into their own edge.
                for &u in &edge[1..edge.len() - 1] {
                    lap.star(u, edge, *weight);
                }
                // The shared vertex ending this edge leaves through the next one, twice.
                let next = &edges[(j + 1) % edges.len()];
                lap.star(next[0], next, 2 * weight);
            }
            let l = *length as i64;
            num_traits::pow(BigRational::from_integer(BigInt::from(2)), l as usize)
                * rpow(r, l * (rr - 2) - 1)
                * num_traits::pow(
                    BigRational::from_integer(BigInt::from(*weight)),
                    ((rr - 1) * l - 1) as usize,
                )
        }
    };
    let minor = lap.minor_without(0);
    Ok(MinorCheck {
        kind: params.kind(),
        order: minor.len(),
        determinant: bareiss_det(minor),
        closed_form,
    })
}

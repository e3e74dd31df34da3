//! Independent ground truth for the traces of the adjacency tensor.
//!
//! A trace of order `d` is a weighted count over index tuples `F` of length
//! `d`: each entry is a head vertex plus an ordering of the other `r − 1`
//! vertices of a hyperedge through it, heads nondecreasing. Only tuples in
//! which every vertex appears a multiple of `r` times contribute, and each
//! contributes through the Eulerian circuits of its multi-digraph `D(F)`:
//!
//! ```text
//! Tr_d = (r−1)^{n−1} · Σ_F |𝔈(F)|·|E(F)|·π_F / Π_v d⁺(v)!
//! ```
//!
//! with `π_F = (1/(r−1)!)^d`. [`brute_trace`] sums the same quantity grouped
//! by the multiset of (hyperedge, head) patterns: `D(F)` does not depend on
//! the ordering of the companions, and the number of tuples in a group times
//! `π_F` collapses to `Π_v c_v! / Π_p n_p!` (heads per vertex over pattern
//! multiplicities).

mod digraph;
mod minors;

pub use digraph::{count_eulerian_circuits, out_degree_factorial_product, MultiDigraph, Vertex};
pub use minors::{minor_determinant_check, MinorCheck, MinorKind, MinorParams};

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{check_hypercycle, Error, Result};
use crate::linalg::{binomial, factorial};

/// Hyperedges of `C_l^(r)` on vertices `1..=l(r−1)`.
///
/// Edge `i` is `[core_i, added…, core_{i+1}]`: cores are `1..=l`, and the
/// `r − 2` added vertices of each edge are numbered from `l + 1` onward,
/// edge by edge.
pub fn hypercycle_edges(r: u32, l: u32) -> Result<Vec<Vec<Vertex>>> {
    check_hypercycle(r, l)?;
    let mut next = l + 1;
    Ok((1..=l)
        .map(|core| {
            let mut edge = vec![core];
            edge.extend(next..next + r - 2);
            next += r - 2;
            edge.push(core % l + 1);
            edge
        })
        .collect())
}

/// One entry `i α` of an index tuple: a head and an ordering of the rest of
/// its hyperedge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TupleEntry {
    pub head: Vertex,
    pub companions: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexTuple {
    entries: Vec<TupleEntry>,
}

impl IndexTuple {
    /// Checks that heads are nondecreasing and that every entry spans a
    /// hyperedge of `C_l^(r)` with `r` distinct vertices.
    pub fn new(r: u32, l: u32, entries: Vec<TupleEntry>) -> Result<Self> {
        let edges = hypercycle_edges(r, l)?;
        for pair in entries.windows(2) {
            if pair[0].head > pair[1].head {
                return Err(Error::Parameter(format!(
                    "heads must be nondecreasing, got {} before {}",
                    pair[0].head, pair[1].head
                )));
            }
        }
        for e in &entries {
            let mut span: Vec<Vertex> = std::iter::once(e.head).chain(e.companions.iter().copied()).collect();
            span.sort_unstable();
            span.dedup();
            let ok = span.len() == r as usize
                && edges.iter().any(|edge| {
                    let mut sorted = edge.clone();
                    sorted.sort_unstable();
                    sorted == span
                });
            if !ok {
                return Err(Error::Parameter(format!(
                    "entry with head {} and companions {:?} is not a hyperedge",
                    e.head, e.companions
                )));
            }
        }
        Ok(IndexTuple { entries })
    }

    pub fn entries(&self) -> &[TupleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every vertex appears, as head or companion, a multiple of `r` times.
    pub fn is_valent(&self, r: u32) -> bool {
        let mut seen: BTreeMap<Vertex, u32> = BTreeMap::new();
        for e in &self.entries {
            *seen.entry(e.head).or_default() += 1;
            for &c in &e.companions {
                *seen.entry(c).or_default() += 1;
            }
        }
        seen.values().all(|n| n % r == 0)
    }
}

/// `D(F)`: an arc from each head to each of its companions.
pub fn digraph_of(tuple: &IndexTuple) -> MultiDigraph {
    let mut g = MultiDigraph::default();
    for e in tuple.entries() {
        for &c in &e.companions {
            g.add_arc(e.head, c, 1);
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteOptions {
    /// Largest number of pattern multisets to enumerate.
    pub budget: u64,
    /// Worker threads; `None` uses the global pool, `Some(1)` runs serially.
    pub jobs: Option<usize>,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions {
            budget: 100_000_000,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone)]
struct Pattern {
    head: Vertex,
    companions: Vec<Vertex>,
}

fn patterns(r: u32, l: u32) -> Result<Vec<Pattern>> {
    let mut out: Vec<Pattern> = hypercycle_edges(r, l)?
        .into_iter()
        .flat_map(|edge| {
            edge.clone().into_iter().map(move |head| Pattern {
                head,
                companions: edge.iter().copied().filter(|&v| v != head).collect(),
            })
        })
        .collect();
    out.sort_by(|a, b| (a.head, &a.companions).cmp(&(b.head, &b.companions)));
    Ok(out)
}

/// Number of (hyperedge, head) pattern multisets of size `order`.
pub fn pattern_multiset_count(r: u32, l: u32, order: u64) -> BigUint {
    let kinds = l as u64 * r as u64;
    binomial(kinds + order - 1, order)
}

/// `Σ |𝔈|·|E|·Π c_v! / (Π n_p! · Π d⁺(v)!)` for one pattern multiset, or
/// `None` if it cannot contribute.
fn group_term(r: u32, pats: &[Pattern], counts: &[u32]) -> Option<BigRational> {
    let mut appearances: BTreeMap<Vertex, u64> = BTreeMap::new();
    let mut heads: BTreeMap<Vertex, u64> = BTreeMap::new();
    for (p, &n) in pats.iter().zip(counts) {
        if n == 0 {
            continue;
        }
        *heads.entry(p.head).or_default() += n as u64;
        *appearances.entry(p.head).or_default() += n as u64;
        for &c in &p.companions {
            *appearances.entry(c).or_default() += n as u64;
        }
    }
    if appearances.values().any(|a| a % r as u64 != 0) {
        return None;
    }
    let mut g = MultiDigraph::default();
    for (p, &n) in pats.iter().zip(counts) {
        for &c in &p.companions {
            g.add_arc(p.head, c, n as u64);
        }
    }
    let circuits = count_eulerian_circuits(&g);
    if circuits.is_zero() {
        return None;
    }
    let numer = circuits
        * g.arc_count()
        * heads
            .values()
            .fold(BigUint::one(), |acc, &c| acc * factorial(c));
    let denom = counts
        .iter()
        .fold(BigUint::one(), |acc, &n| acc * factorial(n as u64))
        * out_degree_factorial_product(&g);
    Some(BigRational::new(numer.into(), denom.into()))
}

/// Visits every weak composition of `remaining` into `counts[pos..]`.
fn for_each_completion(
    counts: &mut [u32],
    pos: usize,
    remaining: u32,
    visit: &mut impl FnMut(&[u32]),
) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        visit(counts);
        counts[pos] = 0;
        return;
    }
    for take in (0..=remaining).rev() {
        counts[pos] = take;
        for_each_completion(counts, pos + 1, remaining - take, visit);
    }
    counts[pos] = 0;
}

fn sum_from_prefix(r: u32, pats: &[Pattern], prefix: &[u32], remaining: u32) -> BigRational {
    let mut counts = vec![0u32; pats.len()];
    counts[..prefix.len()].copy_from_slice(prefix);
    let mut acc = BigRational::zero();
    if prefix.len() == pats.len() {
        if remaining == 0 {
            acc += group_term(r, pats, &counts).unwrap_or_else(BigRational::zero);
        }
        return acc;
    }
    for_each_completion(&mut counts, prefix.len(), remaining, &mut |c| {
        if let Some(term) = group_term(r, pats, c) {
            acc += term;
        }
    });
    acc
}

/// `Tr_order(A(C_l^(r)))` by enumeration, exact.
///
/// Fails with a feasibility error when the number of pattern multisets,
/// `C(lr + order − 1, order)`, exceeds `options.budget`.
pub fn brute_trace(r: u32, l: u32, order: u64, options: &BruteOptions) -> Result<BigInt> {
    check_hypercycle(r, l)?;
    if order == 0 {
        return Err(Error::Parameter("trace order must be >= 1".into()));
    }
    let estimate = pattern_multiset_count(r, l, order);
    if estimate > BigUint::from(options.budget) {
        return Err(Error::Feasibility(format!(
            "brute-force trace (r={r}, l={l}, order={order}) needs {estimate} pattern multisets, budget is {}",
            options.budget
        )));
    }
    let order = u32::try_from(order)
        .map_err(|_| Error::Feasibility(format!("order {order} is too large to enumerate")))?;
    let pats = patterns(r, l)?;

    // Split the work on the counts of the first two patterns.
    let depth = 2.min(pats.len());
    let mut prefixes: Vec<(Vec<u32>, u32)> = Vec::new();
    let mut scratch = vec![0u32; depth + 1];
    for_each_completion(&mut scratch, 0, order, &mut |c| {
        prefixes.push((c[..depth].to_vec(), c[depth]));
    });

    let run = || -> BigRational {
        prefixes
            .par_iter()
            .map(|(prefix, rest)| sum_from_prefix(r, &pats, prefix, *rest))
            .reduce(BigRational::zero, |a, b| a + b)
    };
    let total = match options.jobs {
        Some(1) => prefixes
            .iter()
            .map(|(prefix, rest)| sum_from_prefix(r, &pats, prefix, *rest))
            .fold(BigRational::zero(), |a, b| a + b),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Parameter(format!("cannot start {n} workers: {e}")))?
            .install(run),
        None => run(),
    };

    let vertices = l as usize * (r as usize - 1);
    let scale = num_traits::pow(BigInt::from(r - 1), vertices - 1);
    let value = total * BigRational::from_integer(scale);
    if !value.is_integer() {
        return Err(Error::Consistency(format!(
            "brute-force trace (r={r}, l={l}, order={order}) is not an integer: {value}"
        )));
    }
    Ok(value.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{trace_any, trace_dr};

    fn serial() -> BruteOptions {
        BruteOptions {
            jobs: Some(1),
            ..BruteOptions::default()
        }
    }

    #[test]
    fn edges_and_labels() {
        let e = hypercycle_edges(3, 3).unwrap();
        let sets: Vec<Vec<u32>> = e
            .iter()
            .map(|x| {
                let mut s = x.clone();
                s.sort_unstable();
                s
            })
            .collect();
        assert_eq!(sets, vec![vec![1, 2, 4], vec![2, 3, 5], vec![1, 3, 6]]);
        let e = hypercycle_edges(4, 5).unwrap();
        let mut all: Vec<u32> = e.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all, (1..=15).collect::<Vec<_>>());
        let e = hypercycle_edges(3, 4).unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e.iter().flatten().max(), Some(&8));
        assert!(hypercycle_edges(2, 4).is_err());
    }

    fn entry(head: u32, companions: &[u32]) -> TupleEntry {
        TupleEntry {
            head,
            companions: companions.to_vec(),
        }
    }

    #[test]
    fn digraph_examples() {
        let f = IndexTuple::new(3, 3, vec![entry(1, &[2, 4])]).unwrap();
        let g = digraph_of(&f);
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![((1, 2), 1), ((1, 4), 1)]);

        let f = IndexTuple::new(3, 3, vec![entry(1, &[2, 4]), entry(2, &[4, 1]), entry(4, &[1, 2])]).unwrap();
        let g = digraph_of(&f);
        assert_eq!(g.arc_count(), 6);
        assert!([1, 2, 4].iter().all(|&v| g.out_degree(v) == 2));
        assert!(f.is_valent(3));

        let f = IndexTuple::new(3, 3, vec![entry(1, &[2, 4]), entry(1, &[4, 2])]).unwrap();
        assert_eq!(digraph_of(&f).arcs().collect::<Vec<_>>(), vec![((1, 2), 2), ((1, 4), 2)]);
        assert!(!f.is_valent(3));
    }

    #[test]
    fn malformed_tuples_rejected() {
        assert!(IndexTuple::new(3, 3, vec![entry(2, &[1, 4]), entry(1, &[2, 4])]).is_err());
        assert!(IndexTuple::new(3, 3, vec![entry(1, &[2, 3])]).is_err());
        assert!(IndexTuple::new(3, 3, vec![entry(1, &[2, 2])]).is_err());
    }

    #[test]
    fn brute_examples() {
        let o = serial();
        assert_eq!(brute_trace(3, 3, 3, &o).unwrap(), BigInt::from(216));
        assert!(brute_trace(3, 3, 2, &o).unwrap().is_zero());
        assert_eq!(brute_trace(3, 3, 6, &o).unwrap(), BigInt::from(540));
    }

    #[test]
    fn brute_matches_formula_on_small_hypercycles() {
        for order in 1..=9 {
            assert_eq!(
                brute_trace(3, 3, order, &BruteOptions::default()).unwrap(),
                trace_any(3, 3, order).unwrap(),
                "order {order}"
            );
        }
        let o = BruteOptions::default();
        assert_eq!(brute_trace(4, 3, 4, &o).unwrap(), trace_dr(4, 3, 1).unwrap());
        assert_eq!(brute_trace(4, 3, 8, &o).unwrap(), trace_dr(4, 3, 2).unwrap());
        assert_eq!(brute_trace(3, 4, 6, &o).unwrap(), trace_dr(3, 4, 2).unwrap());
        assert_eq!(brute_trace(5, 3, 5, &o).unwrap(), trace_dr(5, 3, 1).unwrap());
    }

    #[test]
    fn parallel_equals_serial() {
        let a = brute_trace(3, 3, 9, &serial()).unwrap();
        let b = brute_trace(3, 3, 9, &BruteOptions { jobs: Some(3), ..BruteOptions::default() }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, BigInt::from(1836));
    }

    #[test]
    fn budget_guard() {
        let tight = BruteOptions {
            budget: 100,
            jobs: Some(1),
        };
        match brute_trace(3, 3, 9, &tight) {
            Err(Error::Feasibility(msg)) => assert!(msg.contains("24310")),
            other => panic!("expected feasibility error, got {other:?}"),
        }
        assert!(brute_trace(3, 3, 0, &serial()).is_err());
    }

    fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let first = rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, first);
                out.push(tail);
            }
        }
        out
    }

    /// The trace summed tuple by tuple, with no grouping.
    fn per_tuple_trace(r: u32, l: u32, order: usize) -> BigRational {
        let mut entries: Vec<TupleEntry> = Vec::new();
        for edge in hypercycle_edges(r, l).unwrap() {
            for &head in &edge {
                let others: Vec<Vertex> = edge.iter().copied().filter(|&v| v != head).collect();
                for companions in permutations(&others) {
                    entries.push(TupleEntry { head, companions });
                }
            }
        }
        entries.sort();
        let pi = BigRational::new(BigInt::one(), BigInt::from(factorial(r as u64 - 1))).pow(order as i32);
        let mut total = BigRational::zero();
        let mut current: Vec<TupleEntry> = Vec::new();
        fn walk(
            r: u32,
            l: u32,
            order: usize,
            entries: &[TupleEntry],
            current: &mut Vec<TupleEntry>,
            total: &mut BigRational,
        ) {
            if current.len() == order {
                let f = IndexTuple::new(r, l, current.clone()).unwrap();
                if !f.is_valent(r) {
                    return;
                }
                let g = digraph_of(&f);
                let circuits = count_eulerian_circuits(&g);
                *total += BigRational::new(
                    BigInt::from(circuits * g.arc_count()),
                    BigInt::from(out_degree_factorial_product(&g)),
                );
                return;
            }
            let min_head = current.last().map_or(0, |e| e.head);
            let first = entries.iter().position(|e| e.head >= min_head).unwrap_or(entries.len());
            for i in first..entries.len() {
                current.push(entries[i].clone());
                walk(r, l, order, entries, current, total);
                current.pop();
            }
        }
        walk(r, l, order, &entries, &mut current, &mut total);
        let n = l as usize * (r as usize - 1);
        total * pi * BigRational::from_integer(num_traits::pow(BigInt::from(r - 1), n - 1))
    }

    #[test]
    fn grouping_matches_tuple_by_tuple_sum() {
        for order in 1..=6u64 {
            let literal = per_tuple_trace(3, 3, order as usize);
            let grouped = brute_trace(3, 3, order, &serial()).unwrap();
            assert_eq!(literal, BigRational::from_integer(grouped), "order {order}");
        }
    }
}

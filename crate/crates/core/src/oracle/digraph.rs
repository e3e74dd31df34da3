use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{bareiss_det, factorial};

pub type Vertex = u32;

/// Directed multigraph; parallel arcs are distinct arcs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiDigraph {
    vertices: BTreeSet<Vertex>,
    arcs: BTreeMap<(Vertex, Vertex), u64>,
}

impl MultiDigraph {
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        arcs: impl IntoIterator<Item = ((Vertex, Vertex), u64)>,
    ) -> Result<Self> {
        let vertices: BTreeSet<Vertex> = vertices.into_iter().collect();
        let mut g = MultiDigraph {
            vertices,
            arcs: BTreeMap::new(),
        };
        for ((u, v), mult) in arcs {
            if mult == 0 {
                return Err(Error::Parameter(format!("arc ({u},{v}) has multiplicity 0")));
            }
            if !g.vertices.contains(&u) || !g.vertices.contains(&v) {
                return Err(Error::Parameter(format!("arc ({u},{v}) uses an unlisted vertex")));
            }
            *g.arcs.entry((u, v)).or_insert(0) += mult;
        }
        Ok(g)
    }

    /// Vertex set taken from the arc endpoints.
    pub fn from_arcs(arcs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut g = MultiDigraph::default();
        for (u, v) in arcs {
            g.add_arc(u, v, 1);
        }
        g
    }

    pub fn add_arc(&mut self, u: Vertex, v: Vertex, mult: u64) {
        if mult == 0 {
            return;
        }
        self.vertices.insert(u);
        self.vertices.insert(v);
        *self.arcs.entry((u, v)).or_insert(0) += mult;
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices.iter().copied()
    }

    /// Arcs with their multiplicities, in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = ((Vertex, Vertex), u64)> + '_ {
        self.arcs.iter().map(|(&k, &m)| (k, m))
    }

    /// Total number of arcs, counting multiplicity.
    pub fn arc_count(&self) -> u64 {
        self.arcs.values().sum()
    }

    pub fn out_degree(&self, v: Vertex) -> u64 {
        self.arcs.range((v, 0)..=(v, Vertex::MAX)).map(|(_, &m)| m).sum()
    }

    pub fn in_degree(&self, v: Vertex) -> u64 {
        self.arcs.iter().filter(|((_, b), _)| *b == v).map(|(_, &m)| m).sum()
    }

    fn degrees(&self) -> BTreeMap<Vertex, (u64, u64)> {
        let mut deg: BTreeMap<Vertex, (u64, u64)> = BTreeMap::new();
        for (&(u, v), &m) in &self.arcs {
            deg.entry(u).or_default().0 += m;
            deg.entry(v).or_default().1 += m;
        }
        deg
    }

    pub fn is_balanced(&self) -> bool {
        self.degrees().values().all(|(out, inn)| out == inn)
    }

    /// Weak connectivity of the subgraph on non-isolated vertices.
    pub fn is_weakly_connected(&self) -> bool {
        let active: Vec<Vertex> = self.degrees().into_keys().collect();
        let Some(&start) = active.first() else {
            return true;
        };
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for &(u, v) in self.arcs.keys() {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &adj[&x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.len() == active.len()
    }

    /// Number of spanning arborescences oriented towards `root`, as the
    /// primary minor of `Deg_out − A` on the non-isolated vertices.
    pub fn arborescences_to(&self, root: Vertex) -> BigInt {
        let active: Vec<Vertex> = self
            .degrees()
            .into_keys()
            .filter(|&v| v != root)
            .collect();
        let index: BTreeMap<Vertex, usize> =
            active.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let k = active.len();
        let mut lap = vec![vec![BigInt::zero(); k]; k];
        for (&(u, v), &m) in &self.arcs {
            if u == v {
                continue;
            }
            if let Some(&i) = index.get(&u) {
                lap[i][i] += m;
                if let Some(&j) = index.get(&v) {
                    lap[i][j] -= m;
                }
            }
        }
        bareiss_det(lap)
    }
}

/// Number of Eulerian circuits by the BEST theorem, `τ·Π(d⁺(v)−1)!`.
///
/// Parallel arcs are distinguishable; circuits are counted up to rotation.
/// Unbalanced or disconnected graphs, and graphs without arcs, give 0.
pub fn count_eulerian_circuits(g: &MultiDigraph) -> BigUint {
    let degrees = g.degrees();
    let Some(&root) = degrees.keys().next() else {
        return BigUint::zero();
    };
    if !g.is_balanced() || !g.is_weakly_connected() {
        return BigUint::zero();
    }
    let tau = g.arborescences_to(root);
    let tau = tau
        .to_biguint()
        .expect("arborescence count of a balanced digraph is nonnegative");
    degrees
        .values()
        .fold(tau, |acc, &(out, _)| acc * factorial(out - 1))
}

/// `Π_v d⁺(v)!` over the non-isolated vertices.
pub fn out_degree_factorial_product(g: &MultiDigraph) -> BigUint {
    g.degrees()
        .values()
        .fold(BigUint::one(), |acc, &(out, _)| acc * factorial(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Counts circuits by fixing the first labelled arc and extending
    /// trails one labelled arc at a time.
    fn backtrack_circuits(g: &MultiDigraph) -> u64 {
        let labelled: Vec<(Vertex, Vertex)> = g
            .arcs()
            .flat_map(|(a, m)| std::iter::repeat(a).take(m as usize))
            .collect();
        if labelled.is_empty() {
            return 0;
        }
        fn extend(arcs: &[(Vertex, Vertex)], used: &mut [bool], at: Vertex, start: Vertex, left: usize) -> u64 {
            if left == 0 {
                return u64::from(at == start);
            }
            let mut total = 0;
            for i in 0..arcs.len() {
                if !used[i] && arcs[i].0 == at {
                    used[i] = true;
                    total += extend(arcs, used, arcs[i].1, start, left - 1);
                    used[i] = false;
                }
            }
            total
        }
        let mut used = vec![false; labelled.len()];
        used[0] = true;
        let (start, next) = labelled[0];
        extend(&labelled, &mut used, next, start, labelled.len() - 1)
    }

    #[test]
    fn small_examples() {
        let two_cycle = MultiDigraph::from_arcs([(1, 2), (2, 1)]);
        assert_eq!(count_eulerian_circuits(&two_cycle), BigUint::from(1u8));
        let doubled = MultiDigraph::from_arcs([(1, 2), (1, 2), (2, 1), (2, 1)]);
        assert_eq!(count_eulerian_circuits(&doubled), BigUint::from(2u8));
        let triangle = MultiDigraph::from_arcs([(1, 2), (2, 3), (3, 1)]);
        assert_eq!(count_eulerian_circuits(&triangle), BigUint::from(1u8));
        let path = MultiDigraph::from_arcs([(1, 2), (2, 3)]);
        assert!(count_eulerian_circuits(&path).is_zero());
        let split = MultiDigraph::from_arcs([(1, 2), (2, 1), (3, 4), (4, 3)]);
        assert!(count_eulerian_circuits(&split).is_zero());
        assert!(count_eulerian_circuits(&MultiDigraph::default()).is_zero());
    }

    #[test]
    fn isolated_vertices_are_ignored() {
        let g = MultiDigraph::new([1, 2, 9], [((1, 2), 1), ((2, 1), 1)]).unwrap();
        assert!(g.is_weakly_connected());
        assert_eq!(count_eulerian_circuits(&g), BigUint::from(1u8));
    }

    #[test]
    fn construction_errors() {
        assert!(MultiDigraph::new([1], [((1, 2), 1)]).is_err());
        assert!(MultiDigraph::new([1, 2], [((1, 2), 0)]).is_err());
        let g = MultiDigraph::new([1, 2], [((1, 2), 2), ((1, 2), 1)]).unwrap();
        assert_eq!(g.arc_count(), 3);
        assert_eq!(g.out_degree(1), 3);
        assert_eq!(g.in_degree(2), 3);
    }

    fn random_closed_walk_union(rng: &mut ChaCha8Rng, max_arcs: usize) -> MultiDigraph {
        let n = rng.gen_range(1..=4u32);
        let mut g = MultiDigraph::default();
        let mut budget = max_arcs;
        while budget >= 2 {
            let len = rng.gen_range(2..=budget);
            let walk: Vec<Vertex> = (0..len).map(|_| rng.gen_range(1..=n + 1)).collect();
            for i in 0..len {
                let (u, v) = (walk[i], walk[(i + 1) % len]);
                g.add_arc(u, v, 1);
            }
            budget -= len;
            if rng.gen_bool(0.5) {
                break;
            }
        }
        g
    }

    #[test]
    fn best_agrees_with_backtracking() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut nonzero = 0;
        for _ in 0..400 {
            let g = random_closed_walk_union(&mut rng, 8);
            if g.arc_count() == 0 || g.arc_count() > 8 {
                continue;
            }
            let best = count_eulerian_circuits(&g);
            assert_eq!(best, BigUint::from(backtrack_circuits(&g)), "{g:?}");
            nonzero += usize::from(!best.is_zero());
        }
        assert!(nonzero > 100);
        for _ in 0..400 {
            let n = rng.gen_range(2..=4u32);
            let m = rng.gen_range(1..=8);
            let g = MultiDigraph::from_arcs((0..m).map(|_| (rng.gen_range(1..=n), rng.gen_range(1..=n))));
            assert_eq!(count_eulerian_circuits(&g), BigUint::from(backtrack_circuits(&g)), "{g:?}");
        }
    }
}

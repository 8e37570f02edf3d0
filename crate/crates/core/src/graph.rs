//! The derangement graph on perfect matchings and its structural certificates.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::bitset::BitSet;
use crate::combinatorics::{
    binomial, double_factorial, edges_of_complete_graph, enumerate_matchings_capped,
    partitions_of, union_cycle_type_of_partners, Edge, IntegerPartition, PerfectMatching,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::ExactMatrix;
use crate::Limits;

/// Terms `C(k,i)(2k-2i-1)!!` of the inclusion-exclusion count for `i = 0..=k`.
pub fn inclusion_exclusion_terms(k: usize) -> Vec<BigUint> {
    (0..=k)
        .map(|i| {
            binomial(k as u64, i as u64) * double_factorial(2 * (k - i) as i64 - 1).unwrap()
        })
        .collect()
}

fn alternating_sum(terms: &[BigUint]) -> BigInt {
    terms.iter().enumerate().fold(BigInt::zero(), |acc, (i, t)| {
        let t = BigInt::from(t.clone());
        if i % 2 == 0 {
            acc + t
        } else {
            acc - t
        }
    })
}

/// Degree `d(2k)`: the number of perfect matchings of `K_{2k}` sharing no edge
/// with a fixed one. The alternating sum runs through `i = k`, whose term uses
/// `(-1)!! = 1`.
pub fn degree_formula(k: usize) -> BigUint {
    alternating_sum(&inclusion_exclusion_terms(k))
        .to_biguint()
        .expect("derangement count is non-negative")
}

/// The same alternating sum stopped at `i = k - 1`. It disagrees with the true
/// degree by the final term `(-1)^k`, so it is kept only to report that gap.
pub fn truncated_degree_sum(k: usize) -> BigInt {
    let terms = inclusion_exclusion_terms(k);
    alternating_sum(&terms[..k])
}

/// Counts matchings disjoint from the first enumerated matching directly.
pub fn degree_brute_force(k: usize) -> Result<usize> {
    let all = enumerate_matchings_capped(k, Limits::default().enumeration)?;
    let base = all[0].edge_mask();
    Ok(all.iter().filter(|m| m.edge_mask() & base == 0).count())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundCheck {
    #[serde(serialize_with = "crate::ser::display")]
    pub degree: BigUint,
    #[serde(serialize_with = "crate::ser::display")]
    pub bound: BigInt,
    pub holds: bool,
    /// Whether the inclusion-exclusion terms strictly decrease in size.
    pub terms_decreasing: bool,
}

/// `d(2k) > (2k-1)!! - k(2k-3)!!`, together with the monotonicity of the terms
/// that makes the first two an under-estimate.
pub fn degree_lower_bound_check(k: usize) -> Result<LowerBoundCheck> {
    if k < 2 {
        return Err(Error::invalid("lower bound needs k >= 2"));
    }
    let terms = inclusion_exclusion_terms(k);
    let degree = degree_formula(k);
    let bound = BigInt::from(terms[0].clone()) - BigInt::from(terms[1].clone());
    let holds = BigInt::from(degree.clone()) > bound;
    Ok(LowerBoundCheck {
        degree,
        bound,
        holds,
        terms_decreasing: terms.windows(2).all(|w| w[0] > w[1]),
    })
}

/// `M(2k)`: vertices are the perfect matchings of `K_{2k}` in enumeration
/// order, adjacent when edge-disjoint.
#[derive(Clone, Debug)]
pub struct DerangementGraph {
    k: usize,
    vertices: Vec<PerfectMatching>,
    adjacency: Vec<BitSet>,
}

/// Builds `M(2k)` under the default limits.
pub fn build_graph(k: usize) -> Result<DerangementGraph> {
    build_graph_with(k, &Limits::default())
}

pub fn build_graph_with(k: usize, limits: &Limits) -> Result<DerangementGraph> {
    Error::check_cap("graph construction", k, limits.graph)?;
    let vertices = enumerate_matchings_capped(k, limits.enumeration)?;
    let masks: Vec<u128> = vertices.iter().map(|m| m.edge_mask()).collect();
    let n = vertices.len();
    let adjacency = exec::map_range(n, |i| {
        let mi = masks[i];
        BitSet::from_indices(n, (0..n).filter(|&j| masks[j] & mi == 0))
    });
    Ok(DerangementGraph { k, vertices, adjacency })
}

impl DerangementGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[PerfectMatching] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &PerfectMatching {
        &self.vertices[i]
    }

    pub fn row(&self, i: usize) -> &BitSet {
        &self.adjacency[i]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.adjacency
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    /// Common degree, or `None` if the rows disagree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first()?.count();
        self.adjacency.iter().all(|r| r.count() == d).then_some(d)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// Symmetric and loop-free.
    pub fn is_simple(&self) -> bool {
        let n = self.order();
        exec::find_first(n, |i| {
            self.adjacent(i, i) || self.adjacency[i].iter().any(|j| !self.adjacent(j, i))
        })
        .is_none()
    }

    pub fn index_of(&self, m: &PerfectMatching) -> Option<usize> {
        if m.k() != self.k {
            return None;
        }
        Some(m.rank())
    }

    /// Vertex permutation induced by a permutation `sigma` of `{0..2k-1}`.
    pub fn induced_permutation(&self, sigma: &[usize]) -> Result<Vec<usize>> {
        check_permutation(sigma, 2 * self.k)?;
        Ok(exec::map_slice(&self.vertices, |m| m.permuted(sigma).rank()))
    }

    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let n = self.order();
        if perm.len() != n {
            return false;
        }
        exec::find_first(n, |i| {
            let pi = perm[i];
            (0..n).any(|j| self.adjacent(i, j) != self.adjacent(pi, perm[j]))
        })
        .is_none()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.first_adjacent_pair(set).is_none()
    }

    pub fn first_adjacent_pair(&self, set: &[usize]) -> Option<(usize, usize)> {
        for (x, &i) in set.iter().enumerate() {
            for &j in &set[x + 1..] {
                if self.adjacent(i, j) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(x, &i)| set[x + 1..].iter().all(|&j| self.adjacent(i, j)))
    }

    /// 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> ExactMatrix {
        let n = self.order();
        ExactMatrix::from_fn(n, n, |i, j| i64::from(self.adjacent(i, j)))
    }

    /// DIMACS edge list (`p edge n m`, then `e i j` with 1-based vertices).
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "c perfect matching derangement graph M({})", 2 * self.k);
        let _ = writeln!(out, "p edge {} {}", self.order(), self.edge_count());
        for i in 0..self.order() {
            for j in self.adjacency[i].iter().filter(|&j| j > i) {
                let _ = writeln!(out, "e {} {}", i + 1, j + 1);
            }
        }
        out
    }
}

pub(crate) fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return Err(Error::invalid(format!("permutation has length {}, expected {n}", sigma.len())));
    }
    for &x in sigma {
        if x >= n || seen[x] {
            return Err(Error::invalid("not a permutation"));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Round-robin 1-factorisation of `K_{2k}`: `2k-1` pairwise edge-disjoint
/// perfect matchings, a maximum clique of `M(2k)`.
pub fn one_factorization_clique(k: usize) -> Result<Vec<PerfectMatching>> {
    if k < 1 {
        return Err(Error::invalid("k must be positive"));
    }
    let m = 2 * k - 1;
    (0..m)
        .map(|r| {
            let mut pairs = vec![(r, m)];
            for i in 1..k {
                pairs.push(((r + i) % m, (r + m - i) % m));
            }
            PerfectMatching::from_pairs(&pairs)
        })
        .collect()
}

/// Vertex indices of `S_e`, the matchings containing `e`.
pub fn canonical_coclique(k: usize, e: Edge) -> Result<Vec<usize>> {
    if e.b() >= 2 * k {
        return Err(Error::invalid(format!("edge {e} is not an edge of K_{}", 2 * k)));
    }
    let all = enumerate_matchings_capped(k, Limits::default().enumeration)?;
    Ok(all
        .iter()
        .enumerate()
        .filter(|(_, m)| m.contains(e))
        .map(|(i, _)| i)
        .collect())
}

/// Canonical cocliques for every edge, in lexicographic edge order.
pub fn all_canonical_cocliques(graph: &DerangementGraph) -> Vec<(Edge, Vec<usize>)> {
    edges_of_complete_graph(2 * graph.k())
        .into_iter()
        .map(|e| {
            let members = graph
                .vertices()
                .iter()
                .enumerate()
                .filter(|(_, m)| m.contains(e))
                .map(|(i, _)| i)
                .collect();
            (e, members)
        })
        .collect()
}

/// Disjoint nonempty vertex cells covering the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    cells: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(order: usize, cells: Vec<Vec<usize>>) -> Result<VertexPartition> {
        let mut seen = vec![false; order];
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::invalid("empty cell"));
            }
            for &v in cell {
                if v >= order || seen[v] {
                    return Err(Error::invalid(format!("vertex {v} repeated or out of range")));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("cells do not cover the vertex set"));
        }
        Ok(VertexPartition { cells })
    }

    /// `{S_e, V \ S_e}`.
    pub fn canonical_split(graph: &DerangementGraph, e: Edge) -> Result<VertexPartition> {
        let (inside, outside): (Vec<usize>, Vec<usize>) =
            (0..graph.order()).partition(|&i| graph.vertex(i).contains(e));
        VertexPartition::new(graph.order(), vec![inside, outside])
    }

    /// Orbits of the stabiliser of `graph.vertex(base)`: matchings grouped by
    /// their union cycle type with the base. Cells run from `[1^k]` (the base
    /// itself) up to `[k]`, the reverse of [`partitions_of`].
    pub fn cycle_type_classes(graph: &DerangementGraph, base: usize) -> (Vec<IntegerPartition>, VertexPartition) {
        let mut labels = partitions_of(graph.k());
        labels.reverse();
        let pb = graph.vertex(base).partner();
        let types = exec::map_slice(graph.vertices(), |m| union_cycle_type_of_partners(&pb, &m.partner()));
        let cells = labels
            .iter()
            .map(|lab| (0..graph.order()).filter(|&i| &types[i] == lab).collect())
            .collect();
        (labels, VertexPartition { cells })
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }
}

/// Neighbour counts between the cells of an equitable partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientMatrix {
    pub entries: Vec<Vec<usize>>,
}

impl QuotientMatrix {
    pub fn to_matrix(&self) -> ExactMatrix {
        let n = self.entries.len();
        ExactMatrix::from_fn(n, n, |i, j| self.entries[i][j] as i64)
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }
}

/// Quotient of `graph` by `partition`, after checking equitability for every
/// ordered pair of cells.
pub fn quotient_matrix(graph: &DerangementGraph, partition: &VertexPartition) -> Result<QuotientMatrix> {
    let cells = partition.cells();
    let sets: Vec<BitSet> = cells
        .iter()
        .map(|c| BitSet::from_indices(graph.order(), c.iter().copied()))
        .collect();
    let rows = exec::map_range(cells.len(), |from| {
        (0..cells.len())
            .map(|to| {
                let counts: Vec<usize> = cells[from]
                    .iter()
                    .map(|&v| graph.row(v).intersection_count(&sets[to]))
                    .collect();
                if counts.iter().all(|&c| c == counts[0]) {
                    Ok(counts[0])
                } else {
                    Err(Error::NotEquitable { from, to, counts })
                }
            })
            .collect::<Result<Vec<usize>>>()
    });
    Ok(QuotientMatrix { entries: rows.into_iter().collect::<Result<_>>()? })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueCocliqueCheck {
    pub alpha: usize,
    pub omega: usize,
    pub order: usize,
    pub holds: bool,
    pub tight: bool,
}

/// `α·ω <= |V|` using a certified `α` and `ω = 2k-1`, after checking that the
/// round-robin factorisation really is a clique of that size.
pub fn clique_coclique_check(graph: &DerangementGraph, alpha: usize) -> Result<CliqueCocliqueCheck> {
    let clique = one_factorization_clique(graph.k())?;
    let idx: Vec<usize> = clique.iter().map(|m| m.rank()).collect();
    if !graph.is_clique(&idx) {
        return Err(Error::Certificate("round-robin factorisation is not a clique".into()));
    }
    let omega = idx.len();
    let order = graph.order();
    Ok(CliqueCocliqueCheck {
        alpha,
        omega,
        order,
        holds: alpha * omega <= order,
        tight: alpha * omega == order,
    })
}

/// `(2k-3)!!` as a machine integer, the size of every canonical coclique.
pub fn canonical_coclique_size(k: usize) -> usize {
    double_factorial(2 * k as i64 - 3)
        .ok()
        .and_then(|d| d.to_usize())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        let got: Vec<u64> = (1..=6).map(|k| degree_formula(k).to_u64().unwrap()).collect();
        assert_eq!(got, [0, 2, 8, 60, 544, 6040]);
        for k in 1..=5 {
            assert_eq!(degree_brute_force(k).unwrap() as u64, got[k - 1]);
        }
        // Stopping one term early is off by exactly (-1)^k.
        assert_eq!(truncated_degree_sum(2), BigInt::from(1));
        assert_eq!(truncated_degree_sum(3), BigInt::from(9));
    }

    #[test]
    fn lower_bound() {
        for (k, deg, bound) in [(2, 2, 1), (3, 8, 6), (4, 60, 45)] {
            let c = degree_lower_bound_check(k).unwrap();
            assert!(c.holds && c.terms_decreasing);
            assert_eq!(c.degree, BigUint::from(deg as u32));
            assert_eq!(c.bound, BigInt::from(bound));
        }
        for k in 2..=8 {
            assert!(degree_lower_bound_check(k).unwrap().terms_decreasing);
        }
    }

    #[test]
    fn small_graphs() {
        let g2 = build_graph(2).unwrap();
        assert_eq!(g2.order(), 3);
        assert_eq!(g2.regular_degree(), Some(2));
        let g3 = build_graph(3).unwrap();
        assert_eq!((g3.order(), g3.regular_degree(), g3.edge_count()), (15, Some(8), 60));
        assert!(g3.is_simple());
        let g4 = build_graph(4).unwrap();
        assert_eq!((g4.order(), g4.regular_degree()), (105, Some(60)));
        assert!(matches!(build_graph(7), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn factorisation_is_a_clique() {
        for k in 2..=4 {
            let f = one_factorization_clique(k).unwrap();
            assert_eq!(f.len(), 2 * k - 1);
            let mut covered = 0u128;
            for m in &f {
                assert_eq!(covered & m.edge_mask(), 0);
                covered |= m.edge_mask();
            }
            assert_eq!(covered.count_ones() as usize, k * (2 * k - 1));
        }
    }

    #[test]
    fn canonical_cocliques() {
        let e = Edge::new(0, 1).unwrap();
        assert_eq!(canonical_coclique(2, e).unwrap(), vec![0]);
        let g = build_graph(4).unwrap();
        for (_, s) in all_canonical_cocliques(&g) {
            assert_eq!(s.len(), 15);
            assert!(g.is_independent(&s));
        }
        assert_eq!(canonical_coclique(3, Edge::new(2, 5).unwrap()).unwrap().len(), 3);
    }

    #[test]
    fn quotients() {
        let g3 = build_graph(3).unwrap();
        let p = VertexPartition::canonical_split(&g3, Edge::new(0, 1).unwrap()).unwrap();
        assert_eq!(quotient_matrix(&g3, &p).unwrap().entries, vec![vec![0, 8], vec![2, 6]]);
        let g2 = build_graph(2).unwrap();
        let p = VertexPartition::canonical_split(&g2, Edge::new(0, 1).unwrap()).unwrap();
        assert_eq!(quotient_matrix(&g2, &p).unwrap().entries, vec![vec![0, 2], vec![1, 1]]);
        let (labels, p) = VertexPartition::cycle_type_classes(&g3, 0);
        assert_eq!(labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(), ["[1,1,1]", "[2,1]", "[3]"]);
        let q = quotient_matrix(&g3, &p).unwrap();
        assert_eq!(q.entries, vec![vec![0, 0, 8], vec![0, 4, 4], vec![1, 3, 4]]);
        assert_eq!(q.row_sums(), vec![8, 8, 8]);
    }

    #[test]
    fn non_equitable_partition_is_rejected() {
        let g = build_graph(3).unwrap();
        let p = VertexPartition::new(15, vec![vec![0, 1], (2..15).collect()]).unwrap();
        assert!(matches!(quotient_matrix(&g, &p), Err(Error::NotEquitable { .. })));
        assert!(VertexPartition::new(15, vec![vec![0]]).is_err());
    }

    #[test]
    fn dimacs_header() {
        let g = build_graph(3).unwrap();
        let text = g.to_dimacs();
        assert!(text.lines().any(|l| l == "p edge 15 60"));
        assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 60);
    }

    #[test]
    fn clique_coclique_products() {
        for (k, alpha) in [(2, 1), (3, 3), (4, 15)] {
            let g = build_graph(k).unwrap();
            let c = clique_coclique_check(&g, alpha).unwrap();
            assert!(c.holds && c.tight);
        }
    }
}

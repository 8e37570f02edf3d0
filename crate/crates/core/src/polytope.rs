//! The matching incidence matrix and the perfect matching polytope of `K_{2k}`.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::coclique::CocliqueCertificate;
use crate::combinatorics::{double_factorial, edges_of_complete_graph, enumerate_matchings_capped, Edge, PerfectMatching};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::DerangementGraph;
use crate::linalg::{bareiss_rank, ExactMatrix};
use crate::spectral::kneser_adjacency;
use crate::Limits;

/// Rows are the matchings in enumeration order, columns the edges of
/// `K_{2k}` in lexicographic order.
#[derive(Clone, Debug)]
pub struct IncidenceMatrix {
    k: usize,
    matchings: Vec<PerfectMatching>,
    edges: Vec<Edge>,
}

pub fn incidence_matrix(k: usize, limits: &Limits) -> Result<IncidenceMatrix> {
    Error::check_cap("incidence matrix", k, limits.graph)?;
    let matchings = enumerate_matchings_capped(k, limits.enumeration)?;
    Ok(IncidenceMatrix { k, matchings, edges: edges_of_complete_graph(2 * k) })
}

impl IncidenceMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.matchings.len()
    }

    pub fn cols(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.matchings[row].contains(self.edges[col])
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.rows(), self.cols(), |i, j| i64::from(self.entry(i, j)))
    }

    /// Rows have `k` ones, columns `(2k-3)!!`, and column `e` is the
    /// characteristic vector of `S_e`.
    pub fn invariants_hold(&self) -> bool {
        let col = double_factorial(2 * self.k as i64 - 3).expect("k >= 1");
        let rows_ok = (0..self.rows()).all(|i| (0..self.cols()).filter(|&j| self.entry(i, j)).count() == self.k);
        let cols_ok = (0..self.cols()).all(|j| BigUint::from((0..self.rows()).filter(|&i| self.entry(i, j)).count()) == col);
        rows_ok && cols_ok
    }

    /// `UᵀU`: entry `(e, f)` counts matchings containing both edges.
    pub fn gram(&self) -> Vec<Vec<usize>> {
        let m = self.cols();
        let masks: Vec<u128> = self.matchings.iter().map(PerfectMatching::edge_mask).collect();
        let n2 = 2 * self.k;
        let bits: Vec<u128> = self.edges.iter().map(|e| 1u128 << e.index(n2)).collect();
        exec::map_range(m, |e| {
            (0..m)
                .map(|f| masks.iter().filter(|&&x| x & bits[e] != 0 && x & bits[f] != 0).count())
                .collect()
        })
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigInt>> = (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| BigInt::from(u8::from(self.entry(i, j)))).collect())
            .collect();
        bareiss_rank(rows)
    }

    /// `row col 1` lines, zero-based, one per nonzero entry.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        for (i, m) in self.matchings.iter().enumerate() {
            for e in m.edges() {
                let j = e.index(2 * self.k);
                let _ = writeln!(out, "{i} {j} 1");
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramCheck {
    pub k: usize,
    /// `(2k-3)!!`.
    pub diagonal: String,
    /// `(2k-5)!!`, the coefficient of the Kneser adjacency.
    pub kneser_coefficient: String,
    pub holds: bool,
}

/// `UᵀU = (2k-3)!! I + (2k-5)!! A(2k,2)`, with `(-1)!! = 1`.
pub fn gram_identity_check(k: usize, limits: &Limits) -> Result<GramCheck> {
    if k < 2 {
        return Err(Error::invalid("Gram identity needs k >= 2"));
    }
    let u = incidence_matrix(k, limits)?;
    let gram = u.gram();
    let a = kneser_adjacency(2 * k, 2)?;
    let diag = double_factorial(2 * k as i64 - 3)?;
    let off = double_factorial(2 * k as i64 - 5)?;
    let holds = gram.iter().enumerate().all(|(e, row)| {
        row.iter().enumerate().all(|(f, &x)| {
            let expected = if e == f {
                diag.clone()
            } else if a.get(e, f).is_one() {
                off.clone()
            } else {
                BigUint::zero()
            };
            BigUint::from(x) == expected
        })
    });
    Ok(GramCheck { k, diagonal: diag.to_string(), kneser_coefficient: off.to_string(), holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub k: usize,
    pub rank: usize,
    /// `2k² - 3k + 1`.
    pub expected: usize,
    pub holds: bool,
}

pub fn rank_u(k: usize, limits: &Limits) -> Result<RankCheck> {
    let u = incidence_matrix(k, limits)?;
    let rank = u.rank();
    let expected = 2 * k * k + 1 - 3 * k;
    Ok(RankCheck { k, rank, expected, holds: rank == expected })
}

/// Multiplicity of 0 as an eigenvalue of `UᵀU`.
pub fn gram_nullity(k: usize, limits: &Limits) -> Result<usize> {
    let u = incidence_matrix(k, limits)?;
    let g = u.gram();
    let m = g.len();
    Ok(ExactMatrix::from_fn(m, m, |i, j| g[i][j] as i64).nullity())
}

/// Exact `x` with `U x = v`, or `None` when `v` is outside the column space.
pub fn solve_in_column_space(u: &ExactMatrix, v: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    u.solve(v)
}

/// An odd vertex set `S` of `K_{2k}` with `|S| >= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OddCut {
    pub k: usize,
    /// Bit `i` set when vertex `i` is in `S`.
    pub mask: u64,
}

impl OddCut {
    pub fn new(k: usize, mask: u64) -> Result<OddCut> {
        let size = mask.count_ones() as usize;
        if 2 * k > 64 || mask >> (2 * k) != 0 || size.is_multiple_of(2) || size < 3 {
            return Err(Error::invalid(format!("{mask:#b} is not an odd subset of size >= 3 of {} vertices", 2 * k)));
        }
        Ok(OddCut { k, mask })
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, v: usize) -> bool {
        self.mask >> v & 1 == 1
    }

    /// `∂S`: edges with exactly one end in `S`, lexicographic.
    pub fn boundary(&self) -> Vec<Edge> {
        edges_of_complete_graph(2 * self.k)
            .into_iter()
            .filter(|e| self.contains(e.a()) != self.contains(e.b()))
            .collect()
    }

    /// Number of edges of `m` in `∂S`.
    pub fn crossing(&self, m: &PerfectMatching) -> usize {
        m.edges().iter().filter(|e| self.contains(e.a()) != self.contains(e.b())).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum Violation {
    /// `x(e) >= 0` fails.
    Nonnegativity { edge: String, value: String },
    /// `Σ_{e ∋ v} x(e) = 1` fails.
    VertexDegree { vertex: usize, sum: String },
    /// `Σ_{e ∈ ∂S} x(e) >= 1` fails.
    OddCut { subset_mask: u64, sum: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    Member,
    Violated(Violation),
}

/// Membership of `x` (indexed by lexicographic edges) in the perfect matching
/// polytope of `K_{2k}`. Returns the first violated constraint: nonnegativity,
/// then vertex sums, then odd cuts by increasing bitmask.
pub fn polytope_membership(k: usize, x: &[BigRational]) -> Result<Membership> {
    let n = 2 * k;
    if k == 0 || n > 10 {
        return Err(Error::invalid(format!("odd-cut enumeration supports 2 <= 2k <= 10, got 2k = {n}")));
    }
    let edges = edges_of_complete_graph(n);
    if x.len() != edges.len() {
        return Err(Error::DimensionMismatch(format!("vector of length {} for {} edges", x.len(), edges.len())));
    }
    if let Some((e, v)) = edges.iter().zip(x).find(|(_, v)| v.is_negative()) {
        return Ok(Membership::Violated(Violation::Nonnegativity { edge: e.to_string(), value: v.to_string() }));
    }
    let one = BigRational::one();
    let cut_sum = |mask: u64| -> BigRational {
        edges
            .iter()
            .zip(x)
            .filter(|(e, _)| (mask >> e.a() & 1) != (mask >> e.b() & 1))
            .map(|(_, v)| v.clone())
            .sum()
    };
    for v in 0..n {
        let sum = cut_sum(1 << v);
        if sum != one {
            return Ok(Membership::Violated(Violation::VertexDegree { vertex: v, sum: sum.to_string() }));
        }
    }
    let total = 1usize << n;
    let bad = exec::find_first(total, |m| {
        let size = m.count_ones();
        size >= 3 && size % 2 == 1 && cut_sum(m as u64) < one
    });
    Ok(match bad {
        Some(m) => Membership::Violated(Violation::OddCut { subset_mask: m as u64, sum: cut_sum(m as u64).to_string() }),
        None => Membership::Member,
    })
}

/// `N(s) = s!! (2k-s)!!`: matchings with exactly one edge across an odd cut
/// of size `s`.
pub fn facet_size(s: usize, k: usize) -> Result<BigUint> {
    check_facet_args(s, k)?;
    Ok(double_factorial(s as i64)? * double_factorial((2 * k - s) as i64)?)
}

fn check_facet_args(s: usize, k: usize) -> Result<()> {
    if s.is_multiple_of(2) || s < 3 || s + 3 > 2 * k {
        return Err(Error::invalid(format!("facet size needs odd 3 <= s <= 2k-3, got s={s}, 2k={}", 2 * k)));
    }
    Ok(())
}

/// `N(s)` by counting over all matchings, with `S = {0, …, s-1}`.
pub fn facet_size_by_count(s: usize, k: usize, limits: &Limits) -> Result<usize> {
    check_facet_args(s, k)?;
    let cut = OddCut::new(k, (1u64 << s) - 1)?;
    let ms = enumerate_matchings_capped(k, limits.enumeration)?;
    Ok(ms.iter().filter(|m| cut.crossing(m) == 1).count())
}

/// `N(s-2)/N(s) = (2k-s+2)/s` for odd `5 <= s <= 2k-3`.
pub fn facet_ratio_holds(s: usize, k: usize) -> Result<bool> {
    let lhs = BigRational::new(BigInt::from(facet_size(s - 2, k)?), BigInt::from(facet_size(s, k)?));
    let rhs = BigRational::new(BigInt::from(2 * k - s + 2), BigInt::from(s));
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetInequality {
    pub k: usize,
    /// `(2k-2)(2k-3)!!`, the matchings avoiding a fixed edge.
    pub edge_facet: String,
    /// `N(3) = 3 (2k-3)!!`.
    pub largest_odd_facet: String,
    pub holds: bool,
}

pub fn facet_inequality(k: usize) -> Result<FacetInequality> {
    if k < 3 {
        return Err(Error::invalid("facet inequality needs k >= 3"));
    }
    let edge_facet = BigUint::from(2 * k - 2) * double_factorial(2 * k as i64 - 3)?;
    let n3 = facet_size(3, k)?;
    Ok(FacetInequality { k, holds: edge_facet > n3, edge_facet: edge_facet.to_string(), largest_odd_facet: n3.to_string() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetClassification {
    pub k: usize,
    pub inequality: Option<FacetInequality>,
    pub cocliques: usize,
    /// Each maximum coclique is `S_e` for some edge `e`.
    pub all_canonical: bool,
    /// `U x = v_S` holds with `x` the unit vector at `e`.
    pub column_space: bool,
    /// Edge found for each coclique, in certificate order.
    pub edges: Vec<String>,
    pub holds: bool,
}

/// Consumes a coclique certificate and shows every maximum coclique is a
/// canonical `S_e`.
pub fn facet_classification_check(
    graph: &DerangementGraph,
    cert: &CocliqueCertificate,
    limits: &Limits,
) -> Result<FacetClassification> {
    let k = graph.k();
    let inequality = if k >= 3 { Some(facet_inequality(k)?) } else { None };
    let u = incidence_matrix(k, limits)?;
    let n2 = 2 * k;
    let canonical_size = double_factorial(2 * k as i64 - 3)?;
    let mut edges = Vec::new();
    let mut all_canonical = true;
    let mut column_space = true;
    for s in &cert.cocliques {
        let common = s.iter().fold(u128::MAX, |acc, &v| acc & graph.vertex(v).edge_mask());
        if common == 0 || BigUint::from(s.len()) != canonical_size {
            all_canonical = false;
            edges.push(String::new());
            continue;
        }
        let e = Edge::from_index(n2, common.trailing_zeros() as usize)?;
        edges.push(e.to_string());
        let col = e.index(n2);
        let members: Vec<bool> = (0..u.rows()).map(|i| s.binary_search(&i).is_ok()).collect();
        if (0..u.rows()).any(|i| u.entry(i, col) != members[i]) {
            column_space = false;
        }
    }
    let holds = all_canonical && column_space && inequality.as_ref().is_none_or(|i| i.holds);
    Ok(FacetClassification { k, inequality, cocliques: cert.cocliques.len(), all_canonical, column_space, edges, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn incidence_shapes() {
        let l = Limits::default();
        for (k, r, c) in [(2, 3, 6), (3, 15, 15), (4, 105, 28)] {
            let u = incidence_matrix(k, &l).unwrap();
            assert_eq!((u.rows(), u.cols()), (r, c));
            assert!(u.invariants_hold());
        }
        let u = incidence_matrix(2, &l).unwrap();
        assert_eq!(u.to_triplets().lines().count(), 6);
    }

    #[test]
    fn gram_and_rank() {
        let l = Limits::default();
        for (k, rank) in [(2, 3), (3, 10), (4, 21)] {
            assert!(gram_identity_check(k, &l).unwrap().holds);
            let r = rank_u(k, &l).unwrap();
            assert_eq!(r.rank, rank);
            assert!(r.holds);
        }
        assert_eq!(gram_nullity(3, &l).unwrap(), 5);
    }

    #[test]
    fn column_space() {
        let u = incidence_matrix(3, &Limits::default()).unwrap();
        let m = u.to_matrix();
        let ones = vec![q(1, 1); 15];
        let x = solve_in_column_space(&m, &ones).unwrap().unwrap();
        assert_eq!(m.matvec(&x).unwrap(), ones);
        let mut basis = vec![q(0, 1); 15];
        basis[0] = q(1, 1);
        assert!(solve_in_column_space(&m, &basis).unwrap().is_none());
    }

    #[test]
    fn membership() {
        let k = 3;
        let edges = edges_of_complete_graph(6);
        let m: PerfectMatching = "01-23-45".parse().unwrap();
        let x: Vec<BigRational> = edges.iter().map(|&e| q(i64::from(m.contains(e)), 1)).collect();
        assert_eq!(polytope_membership(k, &x).unwrap(), Membership::Member);
        let bary = vec![q(1, 5); 15];
        assert_eq!(polytope_membership(k, &bary).unwrap(), Membership::Member);
        let mut neg = x.clone();
        neg[3] = q(-1, 2);
        assert!(matches!(
            polytope_membership(k, &neg).unwrap(),
            Membership::Violated(Violation::Nonnegativity { .. })
        ));
        // Two disjoint triangles at 1/2 satisfy the vertex sums but not the cut {0,1,2}.
        let tri: Vec<BigRational> = edges
            .iter()
            .map(|e| if (e.a() < 3) == (e.b() < 3) { q(1, 2) } else { q(0, 1) })
            .collect();
        assert_eq!(
            polytope_membership(k, &tri).unwrap(),
            Membership::Violated(Violation::OddCut { subset_mask: 0b000111, sum: "0".into() })
        );
        let json = serde_json::to_string(&Membership::Member).unwrap();
        assert_eq!(json, r#"{"verdict":"member"}"#);
    }

    #[test]
    fn facets() {
        let l = Limits::default();
        assert_eq!(facet_size(3, 3).unwrap(), BigUint::from(9u32));
        assert_eq!(facet_size_by_count(3, 3, &l).unwrap(), 9);
        assert_eq!(facet_size_by_count(3, 4, &l).unwrap(), 45);
        assert_eq!(facet_size_by_count(5, 4, &l).unwrap(), 45);
        assert!(facet_ratio_holds(5, 4).unwrap());
        assert!(facet_size(4, 4).is_err());
        let f = facet_inequality(3).unwrap();
        assert_eq!((f.edge_facet.as_str(), f.largest_odd_facet.as_str(), f.holds), ("12", "9", true));
    }

    #[test]
    fn odd_cut_boundary() {
        let c = OddCut::new(3, 0b000111).unwrap();
        assert_eq!(c.boundary().len(), 9);
        assert!(OddCut::new(3, 0b11).is_err());
    }
}

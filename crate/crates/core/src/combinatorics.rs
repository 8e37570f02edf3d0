//! Matchings, integer partitions, and the counting functions built on them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;

/// Largest vertex count whose matchings fit the single-character vertex codes.
pub const MAX_VERTICES: usize = 36;

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

fn vertex_char(v: usize) -> char {
    DIGITS[v] as char
}

fn vertex_from_char(c: char) -> Option<usize> {
    c.to_digit(36).map(|d| d as usize)
}

/// An edge `{a, b}` of `K_{2k}`, stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    a: u8,
    b: u8,
}

impl Edge {
    /// Builds the edge between two distinct vertices, in either order.
    pub fn new(x: usize, y: usize) -> Result<Edge> {
        if x == y {
            return Err(Error::invalid(format!("edge endpoints coincide ({x})")));
        }
        if x.max(y) >= MAX_VERTICES {
            return Err(Error::invalid(format!("vertex {} out of range", x.max(y))));
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        Ok(Edge { a: a as u8, b: b as u8 })
    }

    pub fn a(self) -> usize {
        self.a as usize
    }

    pub fn b(self) -> usize {
        self.b as usize
    }

    pub fn contains(self, v: usize) -> bool {
        self.a() == v || self.b() == v
    }

    /// Number of shared endpoints (0, 1, or 2).
    pub fn meet(self, other: Edge) -> usize {
        [other.a(), other.b()].iter().filter(|&&v| self.contains(v)).count()
    }

    /// Position of this edge in the lexicographic list of the edges of `K_n`.
    pub fn index(self, n: usize) -> usize {
        let (a, b) = (self.a(), self.b());
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    }

    /// Inverse of [`Edge::index`].
    pub fn from_index(n: usize, mut index: usize) -> Result<Edge> {
        for a in 0..n.saturating_sub(1) {
            let row = n - a - 1;
            if index < row {
                return Edge::new(a, a + 1 + index);
            }
            index -= row;
        }
        Err(Error::invalid(format!("edge index out of range for K_{n}")))
    }

    /// Image of the edge under a vertex permutation.
    pub fn permuted(self, sigma: &[usize]) -> Edge {
        let (x, y) = (sigma[self.a()], sigma[self.b()]);
        if x < y {
            Edge { a: x as u8, b: y as u8 }
        } else {
            Edge { a: y as u8, b: x as u8 }
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", vertex_char(self.a()), vertex_char(self.b()))
    }
}

/// All edges of `K_n` in lexicographic order.
pub fn edges_of_complete_graph(n: usize) -> Vec<Edge> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.push(Edge { a: a as u8, b: b as u8 });
        }
    }
    out
}

/// A perfect matching of `K_{2k}` in canonical form: pairs `(a, b)` with
/// `a < b`, sorted by `a`. Structural equality is matching equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PerfectMatching {
    pairs: Vec<Edge>,
}

impl PerfectMatching {
    /// Canonicalises and validates a list of pairs.
    pub fn from_edges(mut pairs: Vec<Edge>) -> Result<PerfectMatching> {
        pairs.sort();
        let n = 2 * pairs.len();
        let mut seen = vec![false; n];
        for e in &pairs {
            for v in [e.a(), e.b()] {
                if v >= n || seen[v] {
                    return Err(Error::invalid(format!(
                        "pairs do not form a perfect matching of K_{n}"
                    )));
                }
                seen[v] = true;
            }
        }
        Ok(PerfectMatching { pairs })
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<PerfectMatching> {
        let edges = pairs
            .iter()
            .map(|&(x, y)| Edge::new(x, y))
            .collect::<Result<Vec<_>>>()?;
        PerfectMatching::from_edges(edges)
    }

    /// Builds the matching whose partner array is `partner` (`partner[v]` is
    /// the vertex matched with `v`).
    pub fn from_partner(partner: &[usize]) -> Result<PerfectMatching> {
        let mut edges = Vec::with_capacity(partner.len() / 2);
        for (v, &w) in partner.iter().enumerate() {
            if w >= partner.len() || partner[w] != v || w == v {
                return Err(Error::invalid("partner array is not an involution without fixed points"));
            }
            if v < w {
                edges.push(Edge::new(v, w)?);
            }
        }
        Ok(PerfectMatching { pairs: edges })
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.pairs
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.pairs.binary_search(&e).is_ok()
    }

    /// Number of common edges.
    pub fn shared_edges(&self, other: &PerfectMatching) -> usize {
        self.pairs.iter().filter(|e| other.contains(**e)).count()
    }

    pub fn partner(&self) -> Vec<usize> {
        let mut p = vec![0; 2 * self.k()];
        for e in &self.pairs {
            p[e.a()] = e.b();
            p[e.b()] = e.a();
        }
        p
    }

    /// Bit mask over the lexicographic edge indices of `K_{2k}`.
    pub fn edge_mask(&self) -> u128 {
        let n = 2 * self.k();
        self.pairs.iter().fold(0u128, |m, e| m | (1u128 << e.index(n)))
    }

    /// Image under a permutation of the vertex set.
    pub fn permuted(&self, sigma: &[usize]) -> PerfectMatching {
        let mut pairs: Vec<Edge> = self.pairs.iter().map(|e| e.permuted(sigma)).collect();
        pairs.sort();
        PerfectMatching { pairs }
    }

    /// Position in the enumeration order of [`enumerate_matchings`].
    pub fn rank(&self) -> usize {
        let partner = self.partner();
        let mut remaining: Vec<usize> = (0..partner.len()).collect();
        let mut rank = 0;
        while !remaining.is_empty() {
            let a = remaining[0];
            let j = remaining[1..]
                .iter()
                .position(|&v| v == partner[a])
                .expect("partner is unmatched");
            let m = remaining.len() / 2;
            rank += j * odd_double_factorial_usize(2 * m as isize - 3);
            remaining.remove(j + 1);
            remaining.remove(0);
        }
        rank
    }

    /// Inverse of [`PerfectMatching::rank`].
    pub fn unrank(k: usize, mut rank: usize) -> Result<PerfectMatching> {
        if k == 0 || rank >= odd_double_factorial_usize(2 * k as isize - 1) {
            return Err(Error::invalid(format!("rank {rank} out of range for k = {k}")));
        }
        let mut remaining: Vec<usize> = (0..2 * k).collect();
        let mut pairs = Vec::with_capacity(k);
        while !remaining.is_empty() {
            let m = remaining.len() / 2;
            let block = odd_double_factorial_usize(2 * m as isize - 3);
            let j = rank / block;
            rank %= block;
            let b = remaining.remove(j + 1);
            let a = remaining.remove(0);
            pairs.push(Edge { a: a as u8, b: b as u8 });
        }
        Ok(PerfectMatching { pairs })
    }
}

impl fmt::Display for PerfectMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for PerfectMatching {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pairs = s
            .split('-')
            .map(|tok| {
                let cs: Vec<char> = tok.chars().collect();
                match cs.as_slice() {
                    [x, y] => match (vertex_from_char(*x), vertex_from_char(*y)) {
                        (Some(x), Some(y)) => Edge::new(x, y),
                        _ => Err(Error::invalid(format!("bad vertex code in {tok:?}"))),
                    },
                    _ => Err(Error::invalid(format!("bad pair {tok:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        PerfectMatching::from_edges(pairs)
    }
}

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl IntegerPartition {
    /// Sorts the parts into descending order; rejects zero parts.
    pub fn new(mut parts: Vec<usize>) -> Result<IntegerPartition> {
        if parts.contains(&0) {
            return Err(Error::invalid("partition parts must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(IntegerPartition { parts })
    }

    /// Wraps parts that are already positive and weakly decreasing.
    pub(crate) fn from_sorted(parts: Vec<usize>) -> IntegerPartition {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]) && !parts.contains(&0));
        IntegerPartition { parts }
    }

    /// The empty partition of 0.
    pub fn empty() -> IntegerPartition {
        IntegerPartition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicity of `part`.
    pub fn count(&self, part: usize) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    /// Every part doubled: `λ ⊢ k` to `2λ ⊢ 2k`.
    pub fn doubled(&self) -> IntegerPartition {
        IntegerPartition { parts: self.parts.iter().map(|p| 2 * p).collect() }
    }

    pub fn conjugate(&self) -> IntegerPartition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (0..width)
            .map(|j| self.parts.iter().filter(|&&p| p > j).count())
            .collect();
        IntegerPartition { parts }
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for IntegerPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::invalid(format!("partition {s:?} must be bracketed")))?;
        if inner.trim().is_empty() {
            return Ok(IntegerPartition::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::invalid(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        IntegerPartition::new(parts)
    }
}

/// `n!!` for odd `n >= -1`, with `(-1)!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigUint> {
    if n < -1 || n % 2 == 0 {
        return Err(Error::invalid(format!("double factorial needs odd n >= -1, got {n}")));
    }
    let mut acc = BigUint::one();
    let mut m = n;
    while m > 1 {
        acc *= m as u64;
        m -= 2;
    }
    Ok(acc)
}

/// Machine-word `n!!` for odd `n >= -1`.
pub(crate) fn odd_double_factorial_usize(n: isize) -> usize {
    if n <= 1 {
        return 1;
    }
    (1..=n as usize).rev().step_by(2).product()
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::default();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// All `(2k-1)!!` perfect matchings of `K_{2k}` in lexicographic order, with
/// the default enumeration cap.
pub fn enumerate_matchings(k: usize) -> Result<Vec<PerfectMatching>> {
    enumerate_matchings_capped(k, crate::Limits::default().enumeration)
}

/// [`enumerate_matchings`] with an explicit cap on `k`.
pub fn enumerate_matchings_capped(k: usize, cap: usize) -> Result<Vec<PerfectMatching>> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    Error::check_cap("matching enumeration", k, cap)?;
    let n = 2 * k;
    // Split on the partner of vertex 0; each block is enumerated independently.
    let blocks = exec::map_range(n - 1, |j| {
        let b = j + 1;
        let rest: Vec<usize> = (1..n).filter(|&v| v != b).collect();
        let mut out = Vec::new();
        let mut stack = vec![Edge { a: 0, b: b as u8 }];
        extend_matchings(&rest, &mut stack, &mut out);
        out
    });
    Ok(blocks.into_iter().flatten().collect())
}

fn extend_matchings(rest: &[usize], stack: &mut Vec<Edge>, out: &mut Vec<PerfectMatching>) {
    if rest.is_empty() {
        out.push(PerfectMatching { pairs: stack.clone() });
        return;
    }
    let a = rest[0];
    for i in 1..rest.len() {
        let b = rest[i];
        let sub: Vec<usize> = rest[1..].iter().copied().filter(|&v| v != b).collect();
        stack.push(Edge { a: a as u8, b: b as u8 });
        extend_matchings(&sub, stack, out);
        stack.pop();
    }
}

/// Cycle type of `M ∪ N`: part `λᵢ` for each cycle of length `2λᵢ`, a shared
/// edge counting as a 2-cycle.
pub fn union_cycle_type(m: &PerfectMatching, n: &PerfectMatching) -> Result<IntegerPartition> {
    if m.k() != n.k() {
        return Err(Error::DimensionMismatch(format!(
            "matchings on {} and {} vertices",
            2 * m.k(),
            2 * n.k()
        )));
    }
    Ok(union_cycle_type_of_partners(&m.partner(), &n.partner()))
}

pub(crate) fn union_cycle_type_of_partners(pm: &[usize], pn: &[usize]) -> IntegerPartition {
    let mut seen = vec![false; pm.len()];
    let mut parts = Vec::new();
    for start in 0..pm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        loop {
            seen[v] = true;
            let w = pm[v];
            seen[w] = true;
            len += 1;
            v = pn[w];
            if v == start {
                break;
            }
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    IntegerPartition { parts }
}

/// Cycle type of a permutation given in one-line form.
pub fn cycle_type(sigma: &[usize]) -> IntegerPartition {
    let mut seen = vec![false; sigma.len()];
    let mut parts = Vec::new();
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = sigma[v];
            len += 1;
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    IntegerPartition { parts }
}

/// All partitions of `n` in reverse-lexicographic order (`[n]` first, `[1ⁿ]`
/// last). `partitions_of(0)` is the single empty partition.
pub fn partitions_of(n: usize) -> Vec<IntegerPartition> {
    PartitionIter::new(n).collect()
}

/// Streaming reverse-lexicographic partition generator.
#[derive(Clone, Debug)]
pub struct PartitionIter {
    current: Option<Vec<usize>>,
}

impl PartitionIter {
    pub fn new(n: usize) -> PartitionIter {
        let first = if n == 0 { Vec::new() } else { vec![n] };
        PartitionIter { current: Some(first) }
    }
}

impl Iterator for PartitionIter {
    type Item = IntegerPartition;

    fn next(&mut self) -> Option<IntegerPartition> {
        let cur = self.current.take()?;
        let out = IntegerPartition { parts: cur.clone() };
        // Successor: strip trailing ones, decrement the last part > 1, refill.
        let mut next = cur;
        let mut ones = 0;
        while next.last() == Some(&1) {
            next.pop();
            ones += 1;
        }
        if let Some(last) = next.pop() {
            let q = last - 1;
            let mut rem = ones + 1;
            next.push(q);
            while rem > 0 {
                let take = rem.min(q);
                next.push(take);
                rem -= take;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> PerfectMatching {
        s.parse().unwrap()
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial(5).unwrap(), BigUint::from(15u32));
        assert_eq!(double_factorial(-1).unwrap(), BigUint::from(1u32));
        assert_eq!(double_factorial(7).unwrap(), BigUint::from(105u32));
        assert_eq!(double_factorial(1).unwrap(), BigUint::from(1u32));
        assert!(double_factorial(4).is_err());
        assert!(double_factorial(-3).is_err());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_matchings(1).unwrap(), vec![m("01")]);
        assert_eq!(enumerate_matchings(2).unwrap(), vec![m("01-23"), m("02-13"), m("03-12")]);
        assert_eq!(enumerate_matchings(3).unwrap().len(), 15);
        assert!(matches!(enumerate_matchings(8), Err(Error::CapExceeded { .. })));
        assert!(enumerate_matchings(0).is_err());
    }

    #[test]
    fn enumeration_is_sorted_and_ranked() {
        for k in 1..=5 {
            let all = enumerate_matchings(k).unwrap();
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            for (i, pm) in all.iter().enumerate() {
                assert_eq!(pm.rank(), i);
                assert_eq!(&PerfectMatching::unrank(k, i).unwrap(), pm);
            }
        }
    }

    #[test]
    fn cycle_types() {
        let a = m("01-23-45");
        assert_eq!(union_cycle_type(&a, &a).unwrap().parts(), &[1, 1, 1]);
        assert_eq!(union_cycle_type(&m("01-23"), &m("02-13")).unwrap().parts(), &[2]);
        assert_eq!(union_cycle_type(&a, &m("05-12-34")).unwrap().parts(), &[3]);
        assert!(union_cycle_type(&a, &m("01-23")).is_err());
    }

    #[test]
    fn partition_listing() {
        let p3: Vec<String> = partitions_of(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(p3, ["[3]", "[2,1]", "[1,1,1]"]);
        assert_eq!(partitions_of(6).len(), 11);
        assert_eq!(partitions_of(10).len(), 42);
        assert_eq!(partitions_of(0), vec![IntegerPartition::empty()]);
    }

    #[test]
    fn string_forms_round_trip() {
        let pm = m("05-12-34");
        assert_eq!(pm.to_string(), "05-12-34");
        assert!("01-12".parse::<PerfectMatching>().is_err());
        let big = PerfectMatching::from_pairs(&[(0, 11), (1, 10), (2, 9), (3, 8), (4, 7), (5, 6)]).unwrap();
        assert_eq!(big.to_string(), "0b-1a-29-38-47-56");
        assert_eq!(big.to_string().parse::<PerfectMatching>().unwrap(), big);
        let p: IntegerPartition = "[3,2,1]".parse().unwrap();
        assert_eq!(p.to_string(), "[3,2,1]");
        assert_eq!(p.doubled().to_string(), "[6,4,2]");
        assert_eq!(p.conjugate().to_string(), "[3,2,1]");
    }

    #[test]
    fn edge_indices() {
        let edges = edges_of_complete_graph(6);
        assert_eq!(edges.len(), 15);
        for (i, e) in edges.iter().enumerate() {
            assert_eq!(e.index(6), i);
            assert_eq!(Edge::from_index(6, i).unwrap(), *e);
        }
        assert!(Edge::new(2, 2).is_err());
    }

    #[test]
    fn class_sizes_for_k3() {
        let all = enumerate_matchings(3).unwrap();
        let count = |parts: &[usize]| {
            all.iter()
                .filter(|n| union_cycle_type(&all[0], n).unwrap().parts() == parts)
                .count()
        };
        assert_eq!((count(&[1, 1, 1]), count(&[2, 1]), count(&[3])), (1, 6, 8));
    }
}

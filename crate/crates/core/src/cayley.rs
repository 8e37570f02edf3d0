//! Automorphisms of `M(2k)` and the arithmetic showing it is not a Cayley graph.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::combinatorics::{double_factorial, factorial, Edge, IntegerPartition, PartitionIter};
use crate::error::{Error, Result};
use crate::graph::DerangementGraph;
use crate::Limits;

/// Two primes `k <= p < q < 2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimePair {
    pub k: usize,
    pub p: usize,
    pub q: usize,
}

impl PrimePair {
    pub fn new(k: usize, p: usize, q: usize) -> Result<PrimePair> {
        let ok = p < q && k <= p && q < 2 * k && is_prime(p) && is_prime(q);
        if !ok {
            return Err(Error::invalid(format!("({p}, {q}) is not a pair of primes in [{k}, {})", 2 * k)));
        }
        Ok(PrimePair { k, p, q })
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Primes in `lo..hi` by a sieve of Eratosthenes.
pub fn primes_in(lo: usize, hi: usize) -> Vec<usize> {
    let mut composite = vec![false; hi];
    let mut out = Vec::new();
    for i in 2..hi {
        if composite[i] {
            continue;
        }
        if i >= lo {
            out.push(i);
        }
        for j in (i * i..hi).step_by(i) {
            composite[j] = true;
        }
    }
    out
}

/// The tabulated pair for `k < 25`, otherwise the two smallest primes in
/// `[k, 2k)`.
pub fn prime_pair(k: usize) -> Result<PrimePair> {
    let (p, q) = match k {
        0..=2 => return Err(Error::invalid(format!("prime pairs need k >= 3, got {k}"))),
        3 => (3, 5),
        4 | 5 => (5, 7),
        6 => (7, 11),
        7..=11 => (11, 13),
        12..=17 => (19, 23),
        18..=24 => (29, 31),
        _ => {
            let ps = primes_in(k, 2 * k);
            if ps.len() < 2 {
                return Err(Error::Certificate(format!("fewer than two primes in [{k}, {})", 2 * k)));
            }
            (ps[0], ps[1])
        }
    };
    PrimePair::new(k, p, q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicScan {
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub partitions_scanned: usize,
    /// A cycle type of order divisible by `pq`, if any.
    pub witness: Option<String>,
    pub holds: bool,
}

/// Scans every cycle type of `Sym(2k)` for an order divisible by `pq`. For
/// distinct primes that happens exactly when some cycle length is divisible
/// by `p` and some (possibly the same) by `q`.
pub fn no_cyclic_pq_element(k: usize, p: usize, q: usize) -> Result<CyclicScan> {
    let pair = PrimePair::new(k, p, q)?;
    let mut scanned = 0;
    let mut witness: Option<IntegerPartition> = None;
    for lambda in PartitionIter::new(2 * k) {
        scanned += 1;
        let parts = lambda.parts();
        if witness.is_none() && parts.iter().any(|x| x % pair.p == 0) && parts.iter().any(|x| x % pair.q == 0) {
            witness = Some(lambda);
        }
    }
    Ok(CyclicScan {
        k,
        p,
        q,
        partitions_scanned: scanned,
        holds: witness.is_none(),
        witness: witness.map(|w| w.to_string()),
    })
}

/// A vertex permutation of `M(2k)` known to preserve adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphAutomorphism {
    perm: Vec<usize>,
}

impl GraphAutomorphism {
    pub fn new(graph: &DerangementGraph, perm: Vec<usize>) -> Result<GraphAutomorphism> {
        if !graph.is_automorphism(&perm) {
            return Err(Error::Certificate("permutation does not preserve adjacency".into()));
        }
        Ok(GraphAutomorphism { perm })
    }

    /// The automorphism induced by `σ` acting on the points of `K_{2k}`.
    pub fn from_point_permutation(graph: &DerangementGraph, sigma: &[usize]) -> Result<GraphAutomorphism> {
        GraphAutomorphism::new(graph, graph.induced_permutation(sigma)?)
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }
}

/// Ordered partition of the vertex set.
type Cells = Vec<Vec<usize>>;

/// Splits cells by neighbour counts into every cell until stable. Sub-cells
/// are ordered by their count signatures, so the result is invariant under
/// relabelling. Returns the trace of signatures for comparing two runs.
fn refine(graph: &DerangementGraph, mut cells: Cells) -> (Cells, Vec<Vec<usize>>) {
    let n = graph.order();
    let mut trace = Vec::new();
    loop {
        let sets: Vec<crate::bitset::BitSet> = cells
            .iter()
            .map(|c| crate::bitset::BitSet::from_indices(n, c.iter().copied()))
            .collect();
        let mut next: Cells = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| (sets.iter().map(|s| graph.row(v).intersection_count(s)).collect(), v))
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    trace.push(keyed[start].0.clone());
                    trace.push(vec![i - start]);
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        let stable = next.len() == cells.len();
        cells = next;
        if stable {
            return (cells, trace);
        }
    }
}

fn individualise(cells: &Cells, v: usize) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for c in cells {
        if c.contains(&v) && c.len() > 1 {
            out.push(vec![v]);
            out.push(c.iter().copied().filter(|&x| x != v).collect());
        } else {
            out.push(c.clone());
        }
    }
    out
}

/// An automorphism mapping the ordered partition `left` onto `right`, if one
/// exists.
fn extend(graph: &DerangementGraph, left: &Cells, right: &Cells) -> Option<Vec<usize>> {
    let (left, lt) = refine(graph, left.clone());
    let (right, rt) = refine(graph, right.clone());
    if lt != rt || left.len() != right.len() || left.iter().zip(&right).any(|(a, b)| a.len() != b.len()) {
        return None;
    }
    match left.iter().position(|c| c.len() > 1) {
        None => {
            let mut perm = vec![0; graph.order()];
            for (a, b) in left.iter().zip(&right) {
                perm[a[0]] = b[0];
            }
            graph.is_automorphism(&perm).then_some(perm)
        }
        Some(c) => {
            let v = left[c][0];
            let l = individualise(&left, v);
            right[c].iter().find_map(|&u| extend(graph, &l, &individualise(&right, u)))
        }
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// `|Aut(M(2k))|` as the product of basic orbit lengths along a base, each
/// orbit found by refinement backtracking.
pub fn automorphism_group_order(graph: &DerangementGraph, limits: &Limits) -> Result<BigUint> {
    Error::check_cap("automorphism search", graph.k(), limits.automorphism)?;
    let n = graph.order();
    let (mut cells, _) = refine(graph, vec![(0..n).collect()]);
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut order = BigUint::one();
    let mut base: Vec<usize> = Vec::new();
    while let Some(c) = cells.iter().position(|c| c.len() > 1) {
        let b = cells[c][0];
        let left = individualise(&cells, b);
        let mut parent: Vec<usize> = (0..n).collect();
        // Only automorphisms fixing the base so far lie in the current stabiliser.
        generators.retain(|g| base.iter().all(|&x| g[x] == x));
        for g in &generators {
            for v in 0..n {
                let (x, y) = (find(&mut parent, v), find(&mut parent, g[v]));
                parent[x] = y;
            }
        }
        let mut rejected: HashSet<usize> = HashSet::new();
        for &w in &cells[c][1..] {
            let (rb, rw) = (find(&mut parent, b), find(&mut parent, w));
            if rb == rw || rejected.contains(&rw) {
                continue;
            }
            match extend(graph, &left, &individualise(&cells, w)) {
                Some(g) => {
                    for v in 0..n {
                        let (x, y) = (find(&mut parent, v), find(&mut parent, g[v]));
                        parent[x] = y;
                    }
                    generators.push(g);
                }
                None => {
                    rejected.insert(rw);
                }
            }
        }
        let rb = find(&mut parent, b);
        let orbit = cells[c].iter().filter(|&&w| find(&mut parent, w) == rb).count();
        order *= BigUint::from(orbit);
        base.push(b);
        cells = refine(graph, left).0;
    }
    Ok(order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineGraphMap {
    /// `ê`: image of each edge index (lexicographic) of `K_{2k}`.
    pub edge_perm: Vec<usize>,
    pub preserves_line_graph: bool,
}

/// The edge permutation induced by an automorphism acting on the canonical
/// cocliques, and whether it is an automorphism of the line graph `L(K_{2k})`.
///
/// Needs `k >= 3`: for `k = 2` the sets `S_e` and `S_f` coincide whenever
/// `e` and `f` are complementary, so the map is not determined.
pub fn coclique_linegraph_map(
    alpha: &GraphAutomorphism,
    k: usize,
    canonical: &[(Edge, Vec<usize>)],
) -> Result<LineGraphMap> {
    if k < 3 {
        return Err(Error::invalid("canonical cocliques are distinct only for k >= 3"));
    }
    let n2 = 2 * k;
    if canonical.len() != n2 * n2.saturating_sub(1) / 2 {
        return Err(Error::invalid("need one canonical coclique per edge of K_2k"));
    }
    let mut edge_perm = vec![usize::MAX; canonical.len()];
    for (e, set) in canonical {
        let mut image: Vec<usize> = set.iter().map(|&v| alpha.perm()[v]).collect();
        image.sort_unstable();
        let target = canonical
            .iter()
            .find(|(_, s)| *s == image)
            .ok_or_else(|| Error::Certificate(format!("image of S_{e} is not a canonical coclique")))?;
        edge_perm[e.index(n2)] = target.0.index(n2);
    }
    let edges: Vec<Edge> = (0..canonical.len())
        .map(|i| Edge::from_index(n2, i))
        .collect::<Result<_>>()?;
    let preserves_line_graph = (0..edges.len()).all(|i| {
        (0..edges.len()).all(|j| {
            let before = edges[i].meet(edges[j]);
            let after = edges[edge_perm[i]].meet(edges[edge_perm[j]]);
            before == after
        })
    });
    Ok(LineGraphMap { edge_perm, preserves_line_graph })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkStatus {
    Pass,
    Fail,
    /// A standard theorem used without recomputation.
    Cited,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictLink {
    pub link: String,
    pub statement: String,
    pub status: LinkStatus,
    pub witness: String,
}

fn link(link: &str, statement: String, ok: bool, witness: String) -> VerdictLink {
    VerdictLink {
        link: link.to_string(),
        statement,
        status: if ok { LinkStatus::Pass } else { LinkStatus::Fail },
        witness,
    }
}

/// The argument that no group acts regularly on `M(2k)`, one checkable fact
/// per link. `graph` enables the automorphism links when `k` is small enough.
pub fn non_cayley_verdict(k: usize, graph: Option<&DerangementGraph>, limits: &Limits) -> Result<Vec<VerdictLink>> {
    if k < 3 {
        return Err(Error::invalid(format!("the non-Cayley argument needs k >= 3, got {k}")));
    }
    let mut links = Vec::new();
    let v = double_factorial(2 * k as i64 - 1)?;
    links.push(link(
        "odd_order",
        "|V| = (2k-1)!! is odd, so a regular subgroup has odd order and is solvable".into(),
        v.bit(0),
        v.to_string(),
    ));
    links.push(VerdictLink {
        link: "hall_subgroup".into(),
        statement: "a solvable group of order divisible by pq has a subgroup of order pq".into(),
        status: LinkStatus::Cited,
        witness: String::new(),
    });
    let pair = prime_pair(k)?;
    links.push(link(
        "prime_pair",
        format!("primes p, q with {k} <= p < q < {}", 2 * k),
        true,
        format!("({}, {})", pair.p, pair.q),
    ));
    let coprime = (pair.q - 1) % pair.p != 0 && (pair.p - 1) % pair.q != 0;
    links.push(link(
        "cyclic_pq",
        "p does not divide q - 1, so a group of order pq is cyclic".into(),
        coprime,
        format!("q - 1 = {}", pair.q - 1),
    ));
    links.push(link(
        "support_bound",
        "p + q > 2k: a p-cycle and a q-cycle cannot have disjoint supports".into(),
        pair.p + pair.q > 2 * k,
        format!("{} + {} = {} vs 2k = {}", pair.p, pair.q, pair.p + pair.q, 2 * k),
    ));
    let scan = no_cyclic_pq_element(k, pair.p, pair.q)?;
    links.push(link(
        "no_pq_element",
        format!("no cycle type of Sym({}) has order divisible by {}", 2 * k, pair.p * pair.q),
        scan.holds,
        scan.witness.clone().unwrap_or_else(|| format!("{} cycle types scanned", scan.partitions_scanned)),
    ));

    match graph {
        Some(g) if g.k() == k && k <= limits.automorphism && k <= limits.group_iteration => {
            let order = automorphism_group_order(g, limits)?;
            let expected = factorial(2 * k as u64);
            links.push(link(
                "automorphism_order",
                format!("|Aut(M({}))| = ({})!", 2 * k, 2 * k),
                order == expected,
                order.to_string(),
            ));
            let distinct = distinct_induced_permutations(g)?;
            links.push(link(
                "faithful_action",
                format!("Sym({}) acts faithfully, so Aut(M({})) is Sym({})", 2 * k, 2 * k, 2 * k),
                BigUint::from(distinct) == expected,
                format!("{distinct} distinct vertex permutations"),
            ));
        }
        _ => {
            for (name, statement) in [
                ("automorphism_order", format!("|Aut(M({}))| = ({})!", 2 * k, 2 * k)),
                ("faithful_action", format!("Sym({}) acts faithfully", 2 * k)),
            ] {
                links.push(VerdictLink {
                    link: name.into(),
                    statement,
                    status: LinkStatus::Skipped,
                    witness: format!("k = {k} above the automorphism cap"),
                });
            }
        }
    }
    Ok(links)
}

/// Number of distinct vertex permutations induced by all of `Sym(2k)`.
pub fn distinct_induced_permutations(graph: &DerangementGraph) -> Result<usize> {
    let n = 2 * graph.k();
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    loop {
        seen.insert(graph.induced_permutation(&sigma)?);
        // Next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| sigma[i] < sigma[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| sigma[j] > sigma[i]).expect("successor exists");
        sigma.swap(i, j);
        sigma[i + 1..].reverse();
    }
    Ok(seen.len())
}

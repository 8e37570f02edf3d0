//! Exhaustive enumeration of the maximum cocliques of `M(2k)`.
//!
//! A coclique of the graph is a clique of its complement, so the search is a
//! colour-bounded clique enumeration on the "share an edge" relation. Greedy
//! colour classes are cliques of `M(2k)`, whose size is at most `2k-1`; this
//! keeps the colouring bound close to `(2k-3)!!` and the tree small.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{canonical_coclique_size, DerangementGraph};
use crate::Limits;

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Known coclique size; only cocliques at least this large are reported.
    pub lower_bound: usize,
    /// Optional a-priori upper bound, checked against the result.
    pub upper_bound: Option<usize>,
    /// Abort after this many search nodes.
    pub node_limit: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocliqueCertificate {
    pub alpha: usize,
    /// All maximum cocliques, each sorted, the list sorted lexicographically.
    pub cocliques: Vec<Vec<usize>>,
    pub nodes: u64,
    pub lower_bound: usize,
    pub upper_bound: Option<usize>,
}

/// All maximum cocliques of `graph`, seeded with the canonical size `(2k-3)!!`.
pub fn enumerate_maximum_cocliques(graph: &DerangementGraph) -> Result<CocliqueCertificate> {
    let opts = SearchOptions {
        lower_bound: canonical_coclique_size(graph.k()),
        ..SearchOptions::default()
    };
    enumerate_maximum_cocliques_with(graph, &opts, &Limits::default())
}

struct Search<'a> {
    compat: Vec<BitSet>,
    graph: &'a DerangementGraph,
    best: AtomicUsize,
    nodes: AtomicU64,
    node_limit: u64,
    aborted: AtomicBool,
}

impl Search<'_> {
    /// Greedy colouring of `p` by cliques of the graph. Returns vertices in
    /// colour order with their (1-based) colour numbers.
    fn colour(&self, p: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = p.clone();
        let mut order = Vec::with_capacity(p.count());
        let mut colours = Vec::with_capacity(order.capacity());
        let mut c = 0;
        while !uncoloured.is_empty() {
            c += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                q.intersect_with(self.graph.row(v));
                uncoloured.remove(v);
                order.push(v);
                colours.push(c);
            }
        }
        (order, colours)
    }

    fn expand(&self, chosen: &mut Vec<usize>, mut p: BitSet, found: &mut Vec<Vec<usize>>) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.node_limit {
            self.aborted.store(true, Ordering::Relaxed);
            return;
        }
        let (order, colours) = self.colour(&p);
        for idx in (0..order.len()).rev() {
            if chosen.len() + colours[idx] < self.best.load(Ordering::Relaxed) {
                return;
            }
            let v = order[idx];
            chosen.push(v);
            let next = p.intersection(&self.compat[v]);
            if next.is_empty() {
                self.record(chosen, found);
            } else {
                self.expand(chosen, next, found);
            }
            chosen.pop();
            p.remove(v);
        }
    }

    fn record(&self, chosen: &[usize], found: &mut Vec<Vec<usize>>) {
        let size = chosen.len();
        let best = self.best.fetch_max(size, Ordering::Relaxed).max(size);
        if size >= best {
            let mut s = chosen.to_vec();
            s.sort_unstable();
            found.push(s);
        }
    }
}

pub fn enumerate_maximum_cocliques_with(
    graph: &DerangementGraph,
    opts: &SearchOptions,
    limits: &Limits,
) -> Result<CocliqueCertificate> {
    Error::check_cap("maximum coclique search", graph.k(), limits.coclique_search)?;
    let n = graph.order();
    let compat: Vec<BitSet> = (0..n)
        .map(|v| {
            let mut c = graph.row(v).complement();
            c.remove(v);
            c
        })
        .collect();
    let search = Search {
        compat,
        graph,
        best: AtomicUsize::new(opts.lower_bound.max(1)),
        nodes: AtomicU64::new(0),
        node_limit: opts.node_limit.unwrap_or(u64::MAX),
        aborted: AtomicBool::new(false),
    };

    let root = BitSet::full(n);
    let (order, colours) = search.colour(&root);
    // Branch `idx` takes order[idx] and may only add vertices earlier in the
    // colour order, so the branches are independent and can run in parallel.
    let branches = exec::map_range(order.len(), |idx| {
        let mut found = Vec::new();
        if colours[idx] < search.best.load(Ordering::Relaxed) {
            return found;
        }
        let v = order[idx];
        let earlier = BitSet::from_indices(n, order[..idx].iter().copied());
        let p = earlier.intersection(&search.compat[v]);
        let mut chosen = vec![v];
        if p.is_empty() {
            search.record(&chosen, &mut found);
        } else {
            search.expand(&mut chosen, p, &mut found);
        }
        found
    });

    let nodes = search.nodes.load(Ordering::Relaxed);
    let alpha = search.best.load(Ordering::Relaxed);
    let mut cocliques: Vec<Vec<usize>> = branches
        .into_iter()
        .flatten()
        .filter(|s| s.len() == alpha)
        .collect();
    cocliques.sort();
    cocliques.dedup();

    if search.aborted.load(Ordering::Relaxed) {
        return Err(Error::SearchTimeout {
            nodes,
            best: cocliques.into_iter().next().unwrap_or_default(),
        });
    }
    if cocliques.is_empty() {
        return Err(Error::Certificate(format!(
            "no coclique of the seeded size {} exists",
            opts.lower_bound
        )));
    }
    if let Some(&(i, j)) = cocliques.iter().find_map(|s| graph.first_adjacent_pair(s)).as_ref() {
        return Err(Error::NotIndependent(i, j));
    }
    if let Some(ub) = opts.upper_bound {
        if alpha > ub {
            return Err(Error::Certificate(format!("coclique of size {alpha} exceeds upper bound {ub}")));
        }
    }
    Ok(CocliqueCertificate { alpha, cocliques, nodes, lower_bound: opts.lower_bound, upper_bound: opts.upper_bound })
}

/// Certificates as a JSON array of arrays of matching strings.
pub fn cocliques_json(graph: &DerangementGraph, cocliques: &[Vec<usize>]) -> String {
    let named: Vec<Vec<String>> = cocliques
        .iter()
        .map(|s| s.iter().map(|&v| graph.vertex(v).to_string()).collect())
        .collect();
    serde_json::to_string_pretty(&named).expect("strings serialise")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_canonical_cocliques, build_graph};

    #[test]
    fn k2_three_singletons() {
        let g = build_graph(2).unwrap();
        let cert = enumerate_maximum_cocliques(&g).unwrap();
        assert_eq!(cert.alpha, 1);
        assert_eq!(cert.cocliques, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn k3_all_canonical() {
        let g = build_graph(3).unwrap();
        let cert = enumerate_maximum_cocliques(&g).unwrap();
        assert_eq!(cert.alpha, 3);
        let mut canon: Vec<Vec<usize>> = all_canonical_cocliques(&g).into_iter().map(|(_, s)| s).collect();
        canon.sort();
        assert_eq!(cert.cocliques, canon);
    }

    #[test]
    fn lower_seed_still_finds_maximum() {
        let g = build_graph(3).unwrap();
        let opts = SearchOptions { lower_bound: 1, ..Default::default() };
        let cert = enumerate_maximum_cocliques_with(&g, &opts, &Limits::default()).unwrap();
        assert_eq!((cert.alpha, cert.cocliques.len()), (3, 15));
    }

    #[test]
    fn node_limit_reports_timeout() {
        let g = build_graph(4).unwrap();
        let opts = SearchOptions { lower_bound: 15, node_limit: Some(3), ..Default::default() };
        let err = enumerate_maximum_cocliques_with(&g, &opts, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::SearchTimeout { .. }));
    }

    #[test]
    fn json_certificate() {
        let g = build_graph(2).unwrap();
        let cert = enumerate_maximum_cocliques(&g).unwrap();
        let v: Vec<Vec<String>> = serde_json::from_str(&cocliques_json(&g, &cert.cocliques)).unwrap();
        assert_eq!(v, vec![vec!["01-23"], vec!["02-13"], vec!["03-12"]]);
    }
}

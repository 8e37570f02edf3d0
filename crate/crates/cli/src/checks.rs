//! One function per command. Each returns records in a fixed order; artifacts
//! for `--export` are queued on the context and written by the caller.

use std::fmt::Display;

use matching_ekr::cayley::{non_cayley_verdict, LinkStatus};
use matching_ekr::coclique::{cocliques_json, enumerate_maximum_cocliques_with, SearchOptions};
use matching_ekr::combinatorics::{edges_of_complete_graph, enumerate_matchings_capped, factorial};
use matching_ekr::graph::{
    all_canonical_cocliques, build_graph_with, canonical_coclique, clique_coclique_check, degree_brute_force,
    degree_formula, degree_lower_bound_check, one_factorization_clique, truncated_degree_sum,
};
use matching_ekr::polytope::{
    facet_classification_check, facet_inequality, facet_size, facet_size_by_count, gram_identity_check,
    incidence_matrix, polytope_membership, rank_u, Membership,
};
use matching_ekr::reps::{
    closed_form_degree_check, constituents_table_check, decomposition_dimension_check, hook_dimension, remove_box,
    small_degree_check, SchemeKind,
};
use matching_ekr::spectral::{
    character_sum_eigenvalues, group_class_table, integer_spectrum, kneser_adjacency, kneser_eigenvalues,
    label_spectrum, matching_ratio_bound, matching_spectrum, ratio_tightness_certificate, spectrum_records,
    spectrum_sanity, trace_square_check, transitive_by_generators, QuotientSpectrum, KERNEL_CHECK_ORDER,
};
use matching_ekr::{binomial, double_factorial, partitions_of, DerangementGraph, Edge, Error, Limits, Spectrum};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;

use crate::record::{Params, VerificationRecord as Rec};

pub struct Context {
    pub limits: Limits,
    pub exporting: bool,
    /// `(file name, contents)`.
    pub artifacts: Vec<(String, String)>,
}

impl Context {
    fn export(&mut self, name: String, contents: impl FnOnce() -> String) {
        if self.exporting {
            self.artifacts.push((name, contents()));
        }
    }
}

fn odd_double_factorial(k: usize, offset: i64) -> Result<BigUint, Error> {
    double_factorial(2 * k as i64 - offset)
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn graph_or_skip(claims: &[&str], k: usize, limits: &Limits) -> Result<DerangementGraph, Vec<Rec>> {
    build_graph_with(k, limits).map_err(|e| claims.iter().map(|c| Rec::error(c, Params::k(k), &e)).collect())
}

fn power(x: &BigRational, m: usize) -> String {
    if x.is_negative() {
        format!("({x})^{m}")
    } else {
        format!("{x}^{m}")
    }
}

fn joined<T: Display>(items: &[T]) -> String {
    let v: Vec<String> = items.iter().map(ToString::to_string).collect();
    v.join(" ")
}

pub fn counts(k: usize, ctx: &Context) -> Vec<Rec> {
    let p = Params::k(k);
    let mut out = vec![Rec::attempt(
        "counts.matchings",
        p,
        odd_double_factorial(k, 1),
        enumerate_matchings_capped(k, ctx.limits.enumeration).map(|m| m.len()),
    )];
    out.push(Rec::attempt(
        "counts.canonical_coclique",
        p,
        odd_double_factorial(k, 3),
        Edge::new(0, 1).and_then(|e| canonical_coclique(k, e)).map(|s| s.len()),
    ));
    out.push(Rec::attempt("counts.degree", p, Ok(degree_formula(k)), degree_brute_force(k)));
    // The sum stopped at i = k - 1 is off by (-1)^k; kept as a failing record.
    out.push(Rec::attempt("counts.degree_truncated_sum", p, degree_brute_force(k), Ok(truncated_degree_sum(k))));
    out.push(Rec::attempt("counts.degree_lower_bound", p, Ok("true"), degree_lower_bound_check(k).map(|c| yes(c.holds))));
    out
}

pub fn graph(k: usize, ctx: &mut Context) -> Vec<Rec> {
    let p = Params::k(k);
    let claims = ["graph.order", "graph.regular", "graph.simple", "graph.vertex_transitive", "graph.maximum_clique"];
    let g = match graph_or_skip(&claims, k, &ctx.limits) {
        Ok(g) => g,
        Err(skips) => return skips,
    };
    let degree = g.regular_degree().map_or("irregular".to_string(), |d| d.to_string());
    let clique = one_factorization_clique(k).map(|ms| {
        let idx: Vec<usize> = ms.iter().filter_map(|m| g.index_of(m)).collect();
        if idx.len() == ms.len() && g.is_clique(&idx) {
            idx.len().to_string()
        } else {
            "not a clique".to_string()
        }
    });
    let out = vec![
        Rec::attempt(claims[0], p, odd_double_factorial(k, 1), Ok(g.order())),
        Rec::check(claims[1], p, degree_formula(k), degree),
        Rec::check(claims[2], p, "true", yes(g.is_simple())),
        Rec::attempt(claims[3], p, Ok("true"), transitive_by_generators(&g).map(yes)),
        Rec::attempt(claims[4], p, Ok(2 * k - 1), clique),
    ];
    ctx.export(format!("m{}.dimacs", 2 * k), || g.to_dimacs());
    out
}

/// Spectra of `M(2k)` frozen from an independent floating-point
/// eigendecomposition, rounded and checked against the trace identities.
fn reference_spectrum(k: usize) -> Option<Spectrum> {
    let pairs: &[(i64, usize)] = match k {
        1 => &[(0, 1)],
        2 => &[(2, 1), (-1, 2)],
        3 => &[(8, 1), (2, 5), (-2, 9)],
        4 => &[(60, 1), (5, 14), (2, 56), (-3, 14), (-10, 20)],
        5 => &[(544, 1), (12, 315), (4, 42), (-2, 300), (-6, 252), (-68, 35)],
        _ => return None,
    };
    Some(Spectrum::from_pairs(pairs))
}

pub fn spectra(k: usize, n: Option<usize>, ctx: &mut Context) -> Vec<Rec> {
    let p = Params::k(k);
    let mut out = Vec::new();
    if let Some(n) = n {
        out.push(kneser(n, k));
    }
    let claims = ["spectra.matching", "spectra.certificate"];
    let g = match graph_or_skip(&claims, k, &ctx.limits) {
        Ok(g) => g,
        Err(skips) => return [out, skips].concat(),
    };
    let qs = match matching_spectrum(&g) {
        Ok(qs) => qs,
        Err(e) => return [out, claims.iter().map(|c| Rec::error(c, p, &e)).collect()].concat(),
    };
    let s = &qs.spectrum;
    out.push(match reference_spectrum(k) {
        Some(r) => Rec::check("spectra.matching", p, r, s),
        None => Rec::skipped("spectra.matching", p, format!("no reference spectrum; computed {s}")),
    });
    if g.order() <= KERNEL_CHECK_ORDER {
        out.push(Rec::attempt("spectra.direct", p, Ok(s), integer_spectrum(&g.adjacency_matrix())));
    }
    out.push(Rec::check("spectra.certificate", p, "true", yes(qs.annihilates && qs.transitive)));
    let degree = g.regular_degree().unwrap_or(0);
    out.push(Rec::check("spectra.sanity", p, "true", yes(spectrum_sanity(s, g.order(), degree).holds)));
    if k >= 2 {
        let d = BigInt::from(degree);
        let tau = BigRational::new(-d, BigInt::from(2 * k - 2));
        let mult = 2 * k * k - 3 * k;
        let least = s.least().map_or("none".into(), |e| power(&e.eigenvalue, e.multiplicity));
        out.push(Rec::check("spectra.least", p, power(&tau, mult), least));
    }
    let (records, labelled) = labelled_checks(k, &qs, &ctx.limits);
    out.extend(records);
    let s = labelled.as_ref().unwrap_or(s);
    ctx.export(format!("spectrum_m{}.csv", 2 * k), || {
        let mut w = csv::Writer::from_writer(Vec::new());
        let _ = w.write_record(["graph", "eigenvalue", "multiplicity", "labels"]);
        for r in spectrum_records(&format!("M({})", 2 * k), s) {
            let _ = w.write_record([r.graph, r.eigenvalue, r.multiplicity.to_string(), r.labels.join(" ")]);
        }
        String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
    });
    out
}

fn labelled_checks(k: usize, qs: &QuotientSpectrum, limits: &Limits) -> (Vec<Rec>, Option<Spectrum>) {
    let p = Params::k(k);
    let claims = ["spectra.labels", "spectra.trace_identity", "spectra.strict_bound", "spectra.lower_bound"];
    let labelled = group_class_table(k, limits).and_then(|t| Ok((label_spectrum(qs, &t)?, t)));
    let (s, table) = match labelled {
        Ok(x) => x,
        Err(e) => return (claims.iter().map(|c| Rec::error(c, p, &e)).collect(), None),
    };
    let mut out = Vec::new();
    let trivial = format!("[{}]", 2 * k);
    let top = s.largest().map(|e| joined(&e.labels)).unwrap_or_default();
    out.push(Rec::check("spectra.labels.trivial", p, &trivial, top));
    if k >= 2 {
        let least = s.least().map(|e| joined(&e.labels)).unwrap_or_default();
        out.push(Rec::check("spectra.labels.least", p, format!("[{},2]", 2 * k - 2), least));
        match trace_square_check(&s, k) {
            Ok(t) => {
                out.push(Rec::check("spectra.trace_identity", p, &t.rhs, &t.lhs));
                let offenders = if t.offenders.is_empty() { "none".to_string() } else { t.offenders.join(" ") };
                out.push(Rec::check("spectra.strict_bound", p, "none", offenders));
                out.push(Rec::check("spectra.lower_bound", p, "true", yes(t.lower_side_holds)));
            }
            Err(e) => out.extend(claims[1..].iter().map(|c| Rec::error(c, p, &e))),
        }
    }
    if k >= 3 {
        match character_sum_eigenvalues(&table, &s) {
            Ok(rows) => {
                for r in &rows {
                    out.push(Rec::check(
                        "spectra.character_sum",
                        p,
                        format!("{}: {}", r.label, r.certified),
                        format!("{}: {}", r.label, r.calibrated),
                    ));
                }
                if let Some(r) = rows.iter().find(|r| r.label == trivial) {
                    out.push(Rec::check(
                        "spectra.character_sum.printed_prefactor",
                        p,
                        format!("{}: {}", r.label, r.certified),
                        format!("{}: {}", r.label, r.printed),
                    ));
                }
            }
            Err(e) => out.push(Rec::error("spectra.character_sum", p, &e)),
        }
    }
    (out, Some(s))
}

/// Largest Kneser graph whose adjacency matrix is diagonalised for comparison.
const KNESER_DIRECT_ORDER: u32 = 200;

fn kneser(n: usize, k: usize) -> Rec {
    let p = Params::nk(n, k);
    let closed = kneser_eigenvalues(n, k);
    if binomial(n as u64, k as u64) > BigUint::from(KNESER_DIRECT_ORDER) {
        return match closed {
            Ok(s) => Rec::skipped("spectra.kneser", p, format!("above {KNESER_DIRECT_ORDER} vertices; closed form {s}")),
            Err(e) => Rec::error("spectra.kneser", p, &e),
        };
    }
    Rec::attempt("spectra.kneser", p, kneser_adjacency(n, k).and_then(|a| integer_spectrum(&a)), closed)
}

/// Search seeded with the size of a canonical coclique.
fn seeded(k: usize) -> SearchOptions {
    let lower_bound = odd_double_factorial(k, 3).ok().and_then(|b| usize::try_from(b).ok()).unwrap_or(1);
    SearchOptions { lower_bound, ..Default::default() }
}

pub fn ekr(k: usize, ctx: &mut Context) -> Vec<Rec> {
    let p = Params::k(k);
    let mut out = vec![Rec::attempt("ekr.ratio_bound", p, odd_double_factorial(k, 3), matching_ratio_bound(k))];
    let claims = ["ekr.alpha", "ekr.maximum_cocliques", "ekr.canonical", "ekr.clique_coclique", "ekr.ratio_tightness"];
    let g = match graph_or_skip(&claims, k, &ctx.limits) {
        Ok(g) => g,
        Err(skips) => return [out, skips].concat(),
    };
    let canonical = all_canonical_cocliques(&g);
    let mut distinct: Vec<Vec<usize>> = canonical.iter().map(|(_, s)| s.clone()).collect();
    distinct.sort();
    distinct.dedup();

    let d = BigInt::from(g.regular_degree().unwrap_or(0));
    if k >= 2 {
        let tau = BigRational::new(-d, BigInt::from(2 * k - 2));
        let tight = canonical
            .iter()
            .map(|(_, s)| ratio_tightness_certificate(&g, s, &tau))
            .collect::<Result<Vec<_>, _>>()
            .map(|cs| cs.iter().filter(|c| c.bound_met && c.eigenvector == Some(true)).count());
        out.push(Rec::attempt("ekr.ratio_tightness", p, Ok(canonical.len()), tight));
    }

    let cert = match enumerate_maximum_cocliques_with(&g, &seeded(k), &ctx.limits) {
        Ok(c) => c,
        Err(e) => {
            out.extend(claims[..4].iter().map(|c| Rec::error(c, p, &e)));
            return out;
        }
    };
    out.push(Rec::attempt("ekr.alpha", p, odd_double_factorial(k, 3), Ok(cert.alpha)));
    out.push(Rec::check("ekr.maximum_cocliques", p, distinct.len(), cert.cocliques.len()));
    out.push(Rec::check("ekr.canonical", p, "true", yes(cert.cocliques == distinct)));
    out.push(Rec::attempt("ekr.clique_coclique", p, Ok("true"), clique_coclique_check(&g, cert.alpha).map(|c| yes(c.holds))));
    ctx.export(format!("cocliques_m{}.json", 2 * k), || cocliques_json(&g, &cert.cocliques));
    out
}

pub fn polytope(k: usize, ctx: &mut Context) -> Vec<Rec> {
    let p = Params::k(k);
    let l = &ctx.limits;
    let mut out = vec![
        Rec::attempt("polytope.gram_identity", p, Ok("true"), gram_identity_check(k, l).map(|c| yes(c.holds))),
        Rec::attempt("polytope.rank", p, Ok((2 * k * k + 1).saturating_sub(3 * k)), rank_u(k, l).map(|r| r.rank)),
    ];
    for s in (3..=(2 * k).saturating_sub(3)).step_by(2) {
        out.push(Rec::attempt(
            "polytope.facet_size",
            p,
            facet_size(s, k).map(|v| format!("N({s}) = {v}")),
            facet_size_by_count(s, k, l).map(|v| format!("N({s}) = {v}")),
        ));
    }
    if k >= 3 {
        out.push(Rec::attempt("polytope.facet_inequality", p, Ok("true"), facet_inequality(k).map(|f| yes(f.holds))));
    }
    if 2 * k <= 10 {
        let edges = edges_of_complete_graph(2 * k).len();
        let x = vec![BigRational::new(BigInt::from(1), BigInt::from(2 * k - 1)); edges];
        let verdict = polytope_membership(k, &x).map(|m| match m {
            Membership::Member => "member".to_string(),
            Membership::Violated(v) => format!("{v:?}"),
        });
        out.push(Rec::attempt("polytope.centroid", p, Ok("member"), verdict));
    }
    if k >= 3 {
        let classified = build_graph_with(k, l).and_then(|g| {
            let cert = enumerate_maximum_cocliques_with(&g, &seeded(k), l)?;
            facet_classification_check(&g, &cert, l)
        });
        out.push(Rec::attempt("polytope.facet_classification", p, Ok("true"), classified.map(|c| yes(c.holds))));
    }
    if let Ok(u) = incidence_matrix(k, l) {
        ctx.export(format!("incidence_m{}.txt", 2 * k), || u.to_triplets());
    }
    out
}

pub fn reps(n: usize) -> Vec<Rec> {
    let p = Params::n(n);
    let parts = partitions_of(n);
    let squares: BigUint = parts.iter().map(|l| hook_dimension(l).pow(2)).sum();
    let mut out = vec![Rec::check("reps.dimension_squares", p, factorial(n as u64), squares)];
    let branching = parts
        .iter()
        .map(|l| Ok(remove_box(l)?.iter().map(hook_dimension).sum::<BigUint>() == hook_dimension(l)))
        .collect::<Result<Vec<bool>, Error>>()
        .map(|v| yes(v.iter().all(|&b| b)));
    out.push(Rec::attempt("reps.branching", p, Ok("true"), branching));
    if n < 9 {
        for c in ["reps.small_degree", "reps.closed_forms", "reps.constituents"] {
            out.push(Rec::skipped(c, p, "needs n >= 9"));
        }
        return out;
    }
    out.push(match small_degree_check(n) {
        Ok(mut c) => {
            c.expected.sort_by(|a, b| b.cmp(a));
            c.found.sort_by(|a, b| b.cmp(a));
            Rec::check("reps.small_degree", p, joined(&c.expected), joined(&c.found))
        }
        Err(e) => Rec::error("reps.small_degree", p, &e),
    });
    out.push(Rec::attempt("reps.closed_forms", p, Ok("true"), closed_form_degree_check(n).map(|c| yes(c.holds))));
    out.push(Rec::attempt("reps.constituents", p, Ok("true"), constituents_table_check(n).map(yes)));
    out
}

pub fn decomposition(k: usize) -> Rec {
    let check = decomposition_dimension_check(SchemeKind::Matching { k });
    Rec::attempt(
        "reps.matching_decomposition",
        Params::k(k),
        check.clone().map(|(_, index)| index),
        check.map(|(sum, _)| sum),
    )
}

/// Prime pairs `p < q` in `[k, 2k)` as tabulated for the non-Cayley argument.
fn tabulated_pair(k: usize) -> Option<(usize, usize)> {
    Some(match k {
        3 => (3, 5),
        4..=5 => (5, 7),
        6 => (7, 11),
        7..=11 => (11, 13),
        12..=17 => (19, 23),
        18..=24 => (29, 31),
        _ => return None,
    })
}

pub fn cayley(k: usize, ctx: &Context) -> Vec<Rec> {
    let p = Params::k(k);
    if k < 3 {
        return vec![Rec::skipped("cayley.verdict", p, "M(2k) is a Cayley graph for k <= 2")];
    }
    let g = build_graph_with(k, &ctx.limits).ok();
    let links = match non_cayley_verdict(k, g.as_ref(), &ctx.limits) {
        Ok(links) => links,
        Err(e) => return vec![Rec::error("cayley.verdict", p, &e)],
    };
    let order = factorial(2 * k as u64);
    links
        .into_iter()
        .map(|l| {
            let claim = format!("cayley.{}", l.link);
            match (l.status, l.link.as_str()) {
                (LinkStatus::Cited, _) => Rec::skipped(&claim, p, "cited theorem"),
                (LinkStatus::Skipped, _) => Rec::skipped(&claim, p, l.witness),
                (_, "prime_pair") => match tabulated_pair(k) {
                    Some((a, b)) => Rec::check(&claim, p, format!("({a}, {b})"), l.witness),
                    None => Rec::check(&claim, p, "true", yes(l.status == LinkStatus::Pass)),
                },
                (_, "automorphism_order") => Rec::check(&claim, p, &order, l.witness),
                (_, "faithful_action") => {
                    Rec::check(&claim, p, format!("{order} distinct vertex permutations"), l.witness)
                }
                _ => Rec::check(&claim, p, "true", yes(l.status == LinkStatus::Pass)),
            }
        })
        .collect()
}

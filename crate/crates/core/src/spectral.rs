//! Exact spectra, the ratio bound and the module labels of `M(2k)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::{
    binomial, cycle_type, factorial, odd_double_factorial_usize, partitions_of, union_cycle_type_of_partners,
    IntegerPartition,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{degree_formula, quotient_matrix, DerangementGraph, QuotientMatrix, VertexPartition};
use crate::linalg::{charpoly_integer, max_abs_row_sum, ExactMatrix, IntPoly};
use crate::reps::{decomposition_labels, hook_dimension, mn_character, SchemeKind};
use crate::Limits;

/// One distinct eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub eigenvalue: BigRational,
    pub multiplicity: usize,
    /// Module labels `2λ`, sorted; empty when unlabelled.
    pub labels: Vec<IntegerPartition>,
}

/// Distinct eigenvalues in decreasing order, plus any factor of the
/// characteristic polynomial with no rational root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
    unresolved: Vec<IntPoly>,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl Spectrum {
    /// Sorts decreasingly and merges repeated eigenvalues.
    pub fn new(mut entries: Vec<SpectrumEntry>, unresolved: Vec<IntPoly>) -> Spectrum {
        entries.sort_by(|a, b| b.eigenvalue.cmp(&a.eigenvalue));
        let mut merged: Vec<SpectrumEntry> = Vec::with_capacity(entries.len());
        for e in entries {
            match merged.last_mut() {
                Some(last) if last.eigenvalue == e.eigenvalue => {
                    last.multiplicity += e.multiplicity;
                    last.labels.extend(e.labels);
                    last.labels.sort();
                }
                _ => merged.push(e),
            }
        }
        merged.retain(|e| e.multiplicity > 0);
        Spectrum { entries: merged, unresolved }
    }

    /// Unlabelled spectrum from `(eigenvalue, multiplicity)` pairs.
    pub fn from_pairs(pairs: &[(i64, usize)]) -> Spectrum {
        let entries = pairs
            .iter()
            .map(|&(x, m)| SpectrumEntry { eigenvalue: rat(x), multiplicity: m, labels: Vec::new() })
            .collect();
        Spectrum::new(entries, Vec::new())
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn unresolved(&self) -> &[IntPoly] {
        &self.unresolved
    }

    pub fn is_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// Sum of multiplicities, counting unresolved factors by degree.
    pub fn order(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum::<usize>()
            + self.unresolved.iter().map(IntPoly::degree).sum::<usize>()
    }

    pub fn multiplicity(&self, x: &BigRational) -> usize {
        self.entries
            .iter()
            .find(|e| &e.eigenvalue == x)
            .map_or(0, |e| e.multiplicity)
    }

    pub fn largest(&self) -> Option<&SpectrumEntry> {
        self.entries.first()
    }

    pub fn least(&self) -> Option<&SpectrumEntry> {
        self.entries.last()
    }

    /// `Σ m ξ^j` over the resolved part.
    pub fn power_sum(&self, j: u32) -> BigRational {
        self.entries
            .iter()
            .map(|e| num_traits::pow(e.eigenvalue.clone(), j as usize) * rat(e.multiplicity as i64))
            .sum()
    }

    /// `(eigenvalue as string, multiplicity)`, handy for comparisons.
    pub fn pairs(&self) -> Vec<(String, usize)> {
        self.entries
            .iter()
            .map(|e| (e.eigenvalue.to_string(), e.multiplicity))
            .collect()
    }

    /// Drops the module labels.
    pub fn unlabelled(&self) -> Spectrum {
        let mut s = self.clone();
        for e in &mut s.entries {
            e.labels.clear();
        }
        s
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if e.eigenvalue.is_negative() {
                write!(f, "({})^{}", e.eigenvalue, e.multiplicity)?;
            } else {
                write!(f, "{}^{}", e.eigenvalue, e.multiplicity)?;
            }
        }
        for p in &self.unresolved {
            write!(f, ", roots of {p}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumRecord {
    pub graph: String,
    pub eigenvalue: String,
    pub multiplicity: usize,
    pub labels: Vec<String>,
}

pub fn spectrum_records(graph: &str, spectrum: &Spectrum) -> Vec<SpectrumRecord> {
    spectrum
        .entries
        .iter()
        .map(|e| SpectrumRecord {
            graph: graph.to_string(),
            eigenvalue: e.eigenvalue.to_string(),
            multiplicity: e.multiplicity,
            labels: e.labels.iter().map(ToString::to_string).collect(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumSanity {
    pub order: usize,
    pub trace: String,
    pub trace_of_square: String,
    pub holds: bool,
}

/// `Σ m = |V|`, `Σ m ξ = 0` and `Σ m ξ² = |V| d` for a `d`-regular loopless graph.
pub fn spectrum_sanity(spectrum: &Spectrum, order: usize, degree: usize) -> SpectrumSanity {
    let trace = spectrum.power_sum(1);
    let sq = spectrum.power_sum(2);
    let holds = spectrum.is_resolved()
        && spectrum.order() == order
        && trace.is_zero()
        && sq == rat((order * degree) as i64);
    SpectrumSanity { order: spectrum.order(), trace: trace.to_string(), trace_of_square: sq.to_string(), holds }
}

/// Characteristic polynomial `det(xI - M)` of a square integer matrix.
pub fn char_poly(m: &ExactMatrix) -> Result<IntPoly> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(charpoly_integer(&m.to_integer_rows()?))
}

fn ceil_int(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// Spectrum by integer-root extraction from the characteristic polynomial.
/// Any leftover factor is returned unresolved.
pub fn integer_spectrum(m: &ExactMatrix) -> Result<Spectrum> {
    let cp = char_poly(m)?;
    let bound = ceil_int(&max_abs_row_sum(m));
    let (roots, rest) = cp.integer_roots(&bound);
    let entries = roots
        .into_iter()
        .map(|(r, mult)| SpectrumEntry { eigenvalue: BigRational::from_integer(r), multiplicity: mult, labels: Vec::new() })
        .collect();
    let unresolved = if rest.is_constant() { Vec::new() } else { vec![rest] };
    Ok(Spectrum::new(entries, unresolved))
}

/// Dimension of the `ξ`-eigenspace by exact elimination; 0 when `ξ` is not
/// an eigenvalue.
pub fn eigenvalue_multiplicity(a: &ExactMatrix, xi: &BigRational) -> Result<usize> {
    Ok(a.shifted(xi)?.nullity())
}

/// Closed-form spectrum of the Kneser graph `K(n,k)`.
pub fn kneser_eigenvalues(n: usize, k: usize) -> Result<Spectrum> {
    if k == 0 || n < 2 * k {
        return Err(Error::invalid(format!("Kneser graph needs n >= 2k >= 2, got n={n}, k={k}")));
    }
    let entries = (0..=k)
        .map(|i| {
            let mag = BigInt::from(binomial((n - k - i) as u64, (k - i) as u64));
            let value = if i % 2 == 0 { mag } else { -mag };
            let below = if i == 0 { BigUint::zero() } else { binomial(n as u64, i as u64 - 1) };
            let mult = binomial(n as u64, i as u64) - below;
            SpectrumEntry {
                eigenvalue: BigRational::from_integer(value),
                multiplicity: mult.to_usize().expect("multiplicity fits"),
                labels: Vec::new(),
            }
        })
        .collect();
    Ok(Spectrum::new(entries, Vec::new()))
}

/// `k`-subsets of `0..n` as bitmasks, lexicographic in their sorted elements.
pub fn k_subsets(n: usize, k: usize) -> Vec<u64> {
    fn rec(start: usize, n: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for x in start..=n - left {
            rec(x + 1, n, left - 1, acc | 1 << x, out);
        }
    }
    let mut out = Vec::new();
    if k <= n && n <= 64 {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// Adjacency matrix of `K(n,k)`: `k`-subsets adjacent when disjoint.
pub fn kneser_adjacency(n: usize, k: usize) -> Result<ExactMatrix> {
    if k == 0 || n < 2 * k || n > 64 {
        return Err(Error::invalid(format!("Kneser graph needs 64 >= n >= 2k >= 2, got n={n}, k={k}")));
    }
    let subsets = k_subsets(n, k);
    if subsets.len() > 5000 {
        return Err(Error::invalid(format!("K({n},{k}) has {} vertices; refusing dense matrix", subsets.len())));
    }
    let v = subsets.len();
    Ok(ExactMatrix::from_fn(v, v, |i, j| i64::from(subsets[i] & subsets[j] == 0)))
}

/// `v / (1 - d/τ)`.
pub fn ratio_bound(v: &BigInt, d: &BigInt, tau: &BigRational) -> Result<BigRational> {
    if !tau.is_negative() {
        return Err(Error::invalid(format!("ratio bound needs a negative least eigenvalue, got {tau}")));
    }
    if !v.is_positive() || d.is_negative() {
        return Err(Error::invalid("ratio bound needs v > 0 and d >= 0"));
    }
    let one = BigRational::one();
    Ok(BigRational::from_integer(v.clone()) / (one - BigRational::from_integer(d.clone()) / tau))
}

/// Ratio bound for `M(2k)` from the formulas alone: `v = (2k-1)!!`,
/// `d = d(2k)`, `τ = -d/(2k-2)`.
pub fn matching_ratio_bound(k: usize) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::invalid("matching ratio bound needs k >= 2"));
    }
    let v = BigInt::from(crate::combinatorics::double_factorial(2 * k as i64 - 1)?);
    let d = BigInt::from(degree_formula(k));
    let tau = -BigRational::new(d.clone(), BigInt::from(2 * k - 2));
    ratio_bound(&v, &d, &tau)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioTightness {
    pub size: usize,
    pub bound: String,
    pub bound_met: bool,
    pub tau: String,
    /// `None` when the bound is not met and no eigenvector is expected.
    pub eigenvector: Option<bool>,
    /// Largest absolute entry of `A w - τ w`.
    pub residual: String,
}

/// When `|S|` meets the ratio bound, checks that `w = v_S - (|S|/|V|)·1`
/// satisfies `A w = τ w` exactly.
pub fn ratio_tightness_certificate(
    graph: &DerangementGraph,
    set: &[usize],
    tau: &BigRational,
) -> Result<RatioTightness> {
    if let Some((i, j)) = graph.first_adjacent_pair(set) {
        return Err(Error::NotIndependent(i, j));
    }
    let n = graph.order();
    let d = graph
        .regular_degree()
        .ok_or_else(|| Error::Certificate("graph is not regular".into()))?;
    let bound = ratio_bound(&BigInt::from(n), &BigInt::from(d), tau)?;
    let size = set.len();
    let bound_met = rat(size as i64) == bound;
    let mut eigenvector = None;
    let mut residual = BigRational::zero();
    if bound_met {
        let members = crate::bitset::BitSet::from_indices(n, set.iter().copied());
        let c = BigRational::new(BigInt::from(size), BigInt::from(n));
        let cd = &c * rat(d as i64);
        let worst = exec::map_range(n, |i| {
            let w_i = if members.contains(i) { BigRational::one() - &c } else { -c.clone() };
            let aw_i = rat(graph.row(i).intersection_count(&members) as i64) - &cd;
            (aw_i - tau * w_i).abs()
        })
        .into_iter()
        .max()
        .unwrap_or_else(BigRational::zero);
        eigenvector = Some(worst.is_zero());
        residual = worst;
    }
    Ok(RatioTightness {
        size,
        bound: bound.to_string(),
        bound_met,
        tau: tau.to_string(),
        eigenvector,
        residual: residual.to_string(),
    })
}

/// Checks that the generators `(0 1)` and `(0 1 … 2k-1)` of `Sym(2k)` act as
/// automorphisms and that they move vertex 0 to every vertex.
pub fn transitive_by_generators(graph: &DerangementGraph) -> Result<bool> {
    let n2 = 2 * graph.k();
    let mut swap: Vec<usize> = (0..n2).collect();
    swap.swap(0, 1);
    let rotate: Vec<usize> = (0..n2).map(|i| (i + 1) % n2).collect();
    let gens = [graph.induced_permutation(&swap)?, graph.induced_permutation(&rotate)?];
    if !gens.iter().all(|g| graph.is_automorphism(g)) {
        return Ok(false);
    }
    let mut seen = vec![false; graph.order()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for g in &gens {
            let w = g[v];
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

/// Spectrum of `M(2k)` through the stabiliser-orbit quotient, with the
/// evidence used to certify it.
#[derive(Clone, Debug)]
pub struct QuotientSpectrum {
    /// Union cycle types with vertex 0, in quotient order.
    pub classes: Vec<IntegerPartition>,
    pub quotient: QuotientMatrix,
    pub quotient_char_poly: IntPoly,
    pub spectrum: Spectrum,
    /// `m(A) e_0 = 0` for the product `m` of `(x - θ)` over the quotient roots.
    pub annihilates: bool,
    pub transitive: bool,
    /// Multiplicities re-derived by exact kernel dimension (small graphs only).
    pub kernel_checked: bool,
}

/// Vertices up to which multiplicities are cross-checked by elimination.
pub const KERNEL_CHECK_ORDER: usize = 105;

/// Exact spectrum of `M(2k)`.
///
/// The distinct eigenvalues are the integer roots of the orbit quotient's
/// characteristic polynomial; `m(A) e_0 = 0` together with vertex
/// transitivity shows there are no others. Multiplicities solve the
/// Vandermonde system `Σ m_i θ_i^j = tr(A^j) = |V| (A^j)_{00}`.
pub fn matching_spectrum(graph: &DerangementGraph) -> Result<QuotientSpectrum> {
    let (classes, partition) = VertexPartition::cycle_type_classes(graph, 0);
    let (classes, partition) = drop_empty_cells(graph, classes, partition)?;
    let quotient = quotient_matrix(graph, &partition)?;
    let base = partition
        .cells()
        .iter()
        .position(|c| c.contains(&0))
        .expect("vertex 0 lies in a cell");
    let q = &quotient.entries;
    let r = q.len();
    let apply = |x: &[BigInt]| -> Vec<BigInt> {
        (0..r)
            .map(|a| (0..r).map(|b| &x[b] * BigInt::from(q[a][b])).sum())
            .collect()
    };

    let qcp = char_poly(&quotient.to_matrix())?;
    let bound = BigInt::from(graph.regular_degree().unwrap_or(0));
    let (roots, rest) = qcp.integer_roots(&bound);
    if !rest.is_constant() {
        return Err(Error::Certificate(format!("quotient has non-integer eigenvalues: {rest}")));
    }
    let thetas: Vec<BigInt> = roots.into_iter().map(|(x, _)| x).collect();

    let mut unit = vec![BigInt::zero(); r];
    unit[base] = BigInt::one();
    let mut y = unit.clone();
    for t in &thetas {
        let ay = apply(&y);
        y = ay.into_iter().zip(&y).map(|(a, b)| a - t * b).collect();
    }
    let annihilates = y.iter().all(Zero::is_zero);
    let transitive = transitive_by_generators(graph)?;
    if !(annihilates && transitive) {
        return Err(Error::Certificate(format!(
            "quotient roots do not certify the spectrum (annihilates: {annihilates}, transitive: {transitive})"
        )));
    }

    let t = thetas.len();
    let n = graph.order();
    let mut x = unit;
    let mut traces = Vec::with_capacity(t);
    for _ in 0..t {
        traces.push(BigRational::from_integer(&x[base] * BigInt::from(n)));
        x = apply(&x);
    }
    let vandermonde: Vec<BigRational> = (0..t)
        .flat_map(|j| thetas.iter().map(move |th| BigRational::from_integer(num_traits::pow(th.clone(), j))))
        .collect();
    let mults = ExactMatrix::from_rationals(t, t, vandermonde)?
        .solve(&traces)?
        .ok_or_else(|| Error::Certificate("power traces are inconsistent".into()))?;
    let mut entries = Vec::with_capacity(t);
    for (th, m) in thetas.iter().zip(&mults) {
        if !m.is_integer() || !m.is_positive() {
            return Err(Error::Certificate(format!("multiplicity {m} of {th} is not a positive integer")));
        }
        entries.push(SpectrumEntry {
            eigenvalue: BigRational::from_integer(th.clone()),
            multiplicity: m.to_integer().to_usize().expect("multiplicity fits"),
            labels: Vec::new(),
        });
    }
    let spectrum = Spectrum::new(entries, Vec::new());

    let kernel_checked = n <= KERNEL_CHECK_ORDER;
    if kernel_checked {
        let a = graph.adjacency_matrix();
        for e in spectrum.entries() {
            let k = eigenvalue_multiplicity(&a, &e.eigenvalue)?;
            if k != e.multiplicity {
                return Err(Error::Certificate(format!(
                    "eigenvalue {}: kernel dimension {k}, trace multiplicity {}",
                    e.eigenvalue, e.multiplicity
                )));
            }
        }
    }
    Ok(QuotientSpectrum { classes, quotient, quotient_char_poly: qcp, spectrum, annihilates, transitive, kernel_checked })
}

fn drop_empty_cells(
    graph: &DerangementGraph,
    classes: Vec<IntegerPartition>,
    partition: VertexPartition,
) -> Result<(Vec<IntegerPartition>, VertexPartition)> {
    let (classes, cells): (Vec<_>, Vec<_>) = classes
        .into_iter()
        .zip(partition.cells().iter().cloned())
        .filter(|(_, c)| !c.is_empty())
        .unzip();
    Ok((classes, VertexPartition::new(graph.order(), cells)?))
}

/// For `g` in `Sym(2k)`: how many `g` send the base matching `01-23-…` into
/// each union-cycle-type class, split by the cycle type of `g`.
#[derive(Clone, Debug)]
pub struct GroupClassTable {
    k: usize,
    classes: Vec<IntegerPartition>,
    cycle_types: Vec<IntegerPartition>,
    counts: Vec<Vec<u64>>,
}

/// Iterates over all of `Sym(2k)`, in parallel by the image of 0.
pub fn group_class_table(k: usize, limits: &Limits) -> Result<GroupClassTable> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    Error::check_cap("iteration over Sym(2k)", k, limits.group_iteration)?;
    let n = 2 * k;
    let classes = partitions_of(k);
    let cycle_types = partitions_of(n);
    let class_idx: HashMap<&IntegerPartition, usize> = classes.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let type_idx: HashMap<&IntegerPartition, usize> = cycle_types.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let base: Vec<usize> = (0..n).map(|a| a ^ 1).collect();

    let per_first = exec::map_range(n, |first| {
        let mut counts = vec![vec![0u64; cycle_types.len()]; classes.len()];
        let mut rest: Vec<usize> = (0..n).filter(|&x| x != first).collect();
        let mut g = vec![0; n];
        let mut partner = vec![0; n];
        let mut visit = |rest: &[usize]| {
            g[0] = first;
            g[1..].copy_from_slice(rest);
            for a in 0..n {
                partner[g[a]] = g[a ^ 1];
            }
            let c = class_idx[&union_cycle_type_of_partners(&base, &partner)];
            let t = type_idx[&cycle_type(&g)];
            counts[c][t] += 1;
        };
        heap_permutations(&mut rest, &mut visit);
        counts
    });

    let mut counts = vec![vec![0u64; cycle_types.len()]; classes.len()];
    for part in per_first {
        for (row, prow) in counts.iter_mut().zip(part) {
            for (x, y) in row.iter_mut().zip(prow) {
                *x += y;
            }
        }
    }
    Ok(GroupClassTable { k, classes, cycle_types, counts })
}

/// Heap's algorithm; calls `visit` once per arrangement of `items`.
fn heap_permutations(items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    visit(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

impl GroupClassTable {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Union cycle types, `[k]` first.
    pub fn classes(&self) -> &[IntegerPartition] {
        &self.classes
    }

    /// Number of `g` sending the base matching into `class`.
    pub fn class_group_size(&self, class: usize) -> u64 {
        self.counts[class].iter().sum()
    }

    /// `Σ χ(g)` over the `g` sending the base matching into `class`.
    pub fn character_sum(&self, chi: &IntegerPartition, class: usize) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (t, &c) in self.cycle_types.iter().zip(&self.counts[class]) {
            if c > 0 {
                total += mn_character(chi, t)? * BigInt::from(c);
            }
        }
        Ok(total)
    }

    /// Average of `χ` over each class, i.e. the zonal spherical function of
    /// `χ`, indexed like [`classes`](Self::classes).
    pub fn spherical_function(&self, chi: &IntegerPartition) -> Result<Vec<BigRational>> {
        (0..self.classes.len())
            .map(|c| {
                let size = self.class_group_size(c);
                if size == 0 {
                    return Ok(BigRational::zero());
                }
                Ok(BigRational::new(self.character_sum(chi, c)?, BigInt::from(size)))
            })
            .collect()
    }

    /// `Σ χ(g)` over all `g` for which `g` moves the base matching to a
    /// disjoint one.
    pub fn derangement_sum(&self, chi: &IntegerPartition) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (c, class) in self.classes.iter().enumerate() {
            if class.count(1) == 0 {
                total += self.character_sum(chi, c)?;
            }
        }
        Ok(total)
    }
}

/// Order of the stabiliser of a perfect matching, `2^k k!`.
pub fn stabiliser_order(k: usize) -> BigUint {
    (BigUint::one() << k) * factorial(k as u64)
}

/// Spectrum of `M(2k)` with each eigenvalue labelled by the modules `χ_{2λ}`
/// in its eigenspace.
///
/// For every `λ ⊢ k` the spherical function of `χ_{2λ}` is checked to be an
/// exact eigenvector of the orbit quotient; its eigenvalue is the label's
/// eigenvalue. The hook dimensions of the labels on each eigenvalue must then
/// add up to its multiplicity.
pub fn module_labeling(graph: &DerangementGraph, limits: &Limits) -> Result<Spectrum> {
    let qs = matching_spectrum(graph)?;
    let table = group_class_table(graph.k(), limits)?;
    label_spectrum(&qs, &table)
}

pub fn label_spectrum(qs: &QuotientSpectrum, table: &GroupClassTable) -> Result<Spectrum> {
    let k = table.k();
    let order: Vec<usize> = qs
        .classes
        .iter()
        .map(|c| table.classes.iter().position(|t| t == c).expect("class present"))
        .collect();
    let base = qs
        .classes
        .iter()
        .position(|c| c.count(1) == k)
        .ok_or_else(|| Error::Labelling("no identity class".into()))?;
    let q = qs.quotient.to_matrix();

    let mut assigned: HashMap<BigRational, Vec<IntegerPartition>> = HashMap::new();
    for label in decomposition_labels(SchemeKind::Matching { k })? {
        let full = table.spherical_function(&label)?;
        let omega: Vec<BigRational> = order.iter().map(|&i| full[i].clone()).collect();
        if omega[base].is_zero() {
            return Err(Error::Labelling(format!("spherical function of {label} vanishes at the identity")));
        }
        let q_omega = q.matvec(&omega)?;
        let xi = &q_omega[base] / &omega[base];
        if q_omega.iter().zip(&omega).any(|(a, w)| a != &(&xi * w)) {
            return Err(Error::Labelling(format!("spherical function of {label} is not a quotient eigenvector")));
        }
        if qs.spectrum.multiplicity(&xi) == 0 {
            return Err(Error::Labelling(format!("{label} gives {xi}, which is not an eigenvalue")));
        }
        assigned.entry(xi).or_default().push(label);
    }

    let mut entries = Vec::new();
    for e in qs.spectrum.entries() {
        let mut labels = assigned.remove(&e.eigenvalue).unwrap_or_default();
        labels.sort();
        let dims: BigUint = labels.iter().map(hook_dimension).sum();
        if dims != BigUint::from(e.multiplicity) {
            return Err(Error::Labelling(format!(
                "eigenvalue {}: multiplicity {} but labels {:?} have total dimension {dims}",
                e.eigenvalue,
                e.multiplicity,
                labels.iter().map(ToString::to_string).collect::<Vec<_>>()
            )));
        }
        entries.push(SpectrumEntry { labels, ..e.clone() });
    }
    Ok(Spectrum::new(entries, Vec::new()))
}

/// Eigenvalue carrying `label`.
pub fn labelled_eigenvalue<'a>(spectrum: &'a Spectrum, label: &IntegerPartition) -> Option<&'a BigRational> {
    spectrum
        .entries()
        .iter()
        .find(|e| e.labels.contains(label))
        .map(|e| &e.eigenvalue)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeastEigenvalueCheck {
    pub k: usize,
    pub degree: String,
    /// `-d(2k)/(2k-2)`.
    pub expected: String,
    pub least: String,
    pub trivial_label_ok: bool,
    /// The least eigenvalue carries exactly the label `[2k-2,2]`.
    pub least_label_ok: bool,
    pub holds: bool,
}

pub fn least_eigenvalue_check(spectrum: &Spectrum, k: usize) -> Result<LeastEigenvalueCheck> {
    if k < 2 {
        return Err(Error::invalid("least eigenvalue check needs k >= 2"));
    }
    let d = BigRational::from_integer(BigInt::from(degree_formula(k)));
    let expected = -&d / rat(2 * k as i64 - 2);
    let least = spectrum.least().ok_or_else(|| Error::Labelling("empty spectrum".into()))?;
    let trivial = IntegerPartition::new(vec![2 * k])?;
    let second = IntegerPartition::new(vec![2 * k - 2, 2])?;
    let trivial_label_ok = labelled_eigenvalue(spectrum, &trivial) == Some(&d);
    let least_label_ok = least.labels == [second];
    let holds = trivial_label_ok && least_label_ok && least.eigenvalue == expected;
    Ok(LeastEigenvalueCheck {
        k,
        degree: d.to_string(),
        expected: expected.to_string(),
        least: least.eigenvalue.to_string(),
        trivial_label_ok,
        least_label_ok,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSquareCheck {
    pub k: usize,
    /// `Σ χ_{2λ}(1) ξ_{2λ}²`.
    pub lhs: String,
    /// `(2k-1)!! d(2k)`.
    pub rhs: String,
    pub identity_holds: bool,
    /// `d(2k)/(2k-2)`.
    pub bound: String,
    /// Labels outside `{[2k], [2k-2,2]}` with `|ξ| >= d/(2k-2)`.
    pub offenders: Vec<String>,
    /// Every label outside `{[2k], [2k-2,2]}` has `ξ > -d/(2k-2)`, which is
    /// all the least-eigenvalue statement needs.
    pub lower_side_holds: bool,
    pub holds: bool,
}

/// Sum of squared eigenvalues over the modules, and the strict bound on
/// every module other than the trivial one and `[2k-2,2]`.
pub fn trace_square_check(spectrum: &Spectrum, k: usize) -> Result<TraceSquareCheck> {
    if k < 2 {
        return Err(Error::invalid("trace check needs k >= 2"));
    }
    if spectrum.entries().iter().any(|e| e.labels.is_empty()) {
        return Err(Error::Labelling("spectrum is not labelled".into()));
    }
    let d = BigInt::from(degree_formula(k));
    let mut lhs = BigRational::zero();
    let bound = BigRational::new(d.clone(), BigInt::from(2 * k - 2));
    let trivial = IntegerPartition::new(vec![2 * k])?;
    let second = IntegerPartition::new(vec![2 * k - 2, 2])?;
    let mut offenders = Vec::new();
    let mut lower_side_holds = true;
    for e in spectrum.entries() {
        for label in &e.labels {
            let dim = BigRational::from_integer(BigInt::from(hook_dimension(label)));
            lhs += dim * &e.eigenvalue * &e.eigenvalue;
            if label != &trivial && label != &second && e.eigenvalue.abs() >= bound {
                offenders.push(label.to_string());
            }
            if label != &trivial && label != &second && e.eigenvalue <= -bound.clone() {
                lower_side_holds = false;
            }
        }
    }
    let rhs = BigRational::from_integer(BigInt::from(odd_double_factorial_usize(2 * k as isize - 1)) * &d);
    let identity_holds = lhs == rhs;
    Ok(TraceSquareCheck {
        k,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        identity_holds,
        bound: bound.to_string(),
        holds: identity_holds && offenders.is_empty(),
        offenders,
        lower_side_holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterSumEigenvalue {
    pub label: String,
    /// `S = Σ χ_{2λ}(x)` over the `x` moving the base matching to a disjoint one.
    pub raw_sum: String,
    /// `S / (2^k k!)`.
    pub calibrated: String,
    /// `d(2k) S / (2^k k!)`.
    pub printed: String,
    pub certified: String,
    pub calibrated_matches: bool,
    pub printed_matches: bool,
}

/// Character-sum eigenvalue of every module under both normalisations,
/// compared against a labelled spectrum.
pub fn character_sum_eigenvalues(table: &GroupClassTable, spectrum: &Spectrum) -> Result<Vec<CharacterSumEigenvalue>> {
    let k = table.k();
    let h = BigRational::from_integer(BigInt::from(stabiliser_order(k)));
    let d = BigRational::from_integer(BigInt::from(degree_formula(k)));
    decomposition_labels(SchemeKind::Matching { k })?
        .into_iter()
        .map(|label| {
            let s = table.derangement_sum(&label)?;
            let calibrated = BigRational::from_integer(s.clone()) / &h;
            let printed = &d * &calibrated;
            let certified = labelled_eigenvalue(spectrum, &label)
                .cloned()
                .ok_or_else(|| Error::Labelling(format!("{label} has no certified eigenvalue")))?;
            Ok(CharacterSumEigenvalue {
                label: label.to_string(),
                raw_sum: s.to_string(),
                calibrated_matches: calibrated == certified,
                printed_matches: printed == certified,
                calibrated: calibrated.to_string(),
                printed: printed.to_string(),
                certified: certified.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn pairs(v: &[(i64, usize)]) -> Vec<(String, usize)> {
        v.iter().map(|&(x, m)| (x.to_string(), m)).collect()
    }

    #[test]
    fn char_polys() {
        let m = ExactMatrix::from_rows(&[vec![0, 2], vec![1, 1]]).unwrap();
        assert_eq!(char_poly(&m).unwrap().to_string(), "x^2 - x - 2");
        let id = ExactMatrix::identity(3);
        assert_eq!(char_poly(&id).unwrap().to_string(), "x^3 - 3x^2 + 3x - 1");
        assert!(char_poly(&ExactMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn unresolved_factor_is_reported() {
        let m = ExactMatrix::from_rows(&[vec![0, 1], vec![1, 1]]).unwrap();
        let s = integer_spectrum(&m).unwrap();
        assert!(!s.is_resolved());
        assert_eq!(s.order(), 2);
    }

    #[test]
    fn small_matching_spectra() {
        let g = build_graph(2).unwrap();
        assert_eq!(integer_spectrum(&g.adjacency_matrix()).unwrap().pairs(), pairs(&[(2, 1), (-1, 2)]));
        let g = build_graph(3).unwrap();
        let direct = integer_spectrum(&g.adjacency_matrix()).unwrap();
        assert_eq!(direct.pairs(), pairs(&[(8, 1), (2, 5), (-2, 9)]));
        let qs = matching_spectrum(&g).unwrap();
        assert_eq!(qs.spectrum, direct);
        assert!(qs.kernel_checked);
        assert_eq!(direct.to_string(), "{8^1, 2^5, (-2)^9}");
    }

    #[test]
    fn kneser_closed_form() {
        assert_eq!(kneser_eigenvalues(5, 2).unwrap().pairs(), pairs(&[(3, 1), (1, 5), (-2, 4)]));
        assert_eq!(kneser_eigenvalues(6, 2).unwrap().pairs(), pairs(&[(6, 1), (1, 9), (-3, 5)]));
        assert_eq!(kneser_eigenvalues(6, 1).unwrap().pairs(), pairs(&[(5, 1), (-1, 5)]));
        assert_eq!(kneser_eigenvalues(6, 3).unwrap().pairs(), pairs(&[(1, 10), (-1, 10)]));
        assert!(kneser_eigenvalues(3, 2).is_err());
        let petersen = integer_spectrum(&kneser_adjacency(5, 2).unwrap()).unwrap();
        assert_eq!(petersen, kneser_eigenvalues(5, 2).unwrap());
    }

    #[test]
    fn ratio_bounds() {
        let r = |v: i64, d: i64, t: i64| ratio_bound(&BigInt::from(v), &BigInt::from(d), &rat(t)).unwrap();
        assert_eq!(r(15, 8, -2), rat(3));
        assert_eq!(r(10, 3, -2), rat(4));
        assert_eq!(r(7, 6, -1), rat(1));
        assert!(ratio_bound(&BigInt::from(5), &BigInt::from(2), &rat(0)).is_err());
        assert_eq!(matching_ratio_bound(4).unwrap(), rat(15));
    }

    #[test]
    fn tightness_of_canonical_coclique() {
        let g = build_graph(3).unwrap();
        let s = crate::graph::canonical_coclique(3, crate::Edge::new(0, 1).unwrap()).unwrap();
        let cert = ratio_tightness_certificate(&g, &s, &rat(-2)).unwrap();
        assert!(cert.bound_met);
        assert_eq!(cert.eigenvector, Some(true));
        let small = &s[..2];
        let cert = ratio_tightness_certificate(&g, small, &rat(-2)).unwrap();
        assert!(!cert.bound_met);
        assert_eq!(cert.eigenvector, None);
    }

    #[test]
    fn labels_k3() {
        let g = build_graph(3).unwrap();
        let s = module_labeling(&g, &Limits::default()).unwrap();
        let label = |x: &str| labelled_eigenvalue(&s, &x.parse().unwrap()).unwrap().to_string();
        assert_eq!(label("[6]"), "8");
        assert_eq!(label("[4,2]"), "-2");
        assert_eq!(label("[2,2,2]"), "2");
        assert!(least_eigenvalue_check(&s, 3).unwrap().holds);
        let t = trace_square_check(&s, 3).unwrap();
        assert_eq!((t.lhs.as_str(), t.rhs.as_str()), ("120", "120"));
        assert!(t.identity_holds && t.lower_side_holds);
        // ξ_[2,2,2] = 2 = d/(2k-2): equality, so the strict bound fails here.
        assert_eq!(t.offenders, ["[2,2,2]"]);
        assert!(!t.holds);
    }

    #[test]
    fn character_sums_k3() {
        let g = build_graph(3).unwrap();
        let table = group_class_table(3, &Limits::default()).unwrap();
        let s = label_spectrum(&matching_spectrum(&g).unwrap(), &table).unwrap();
        let sums = character_sum_eigenvalues(&table, &s).unwrap();
        let raw: Vec<&str> = sums.iter().map(|c| c.raw_sum.as_str()).collect();
        assert_eq!(raw, ["384", "-96", "96"]);
        assert!(sums.iter().all(|c| c.calibrated_matches));
        assert!(!sums[0].printed_matches);
        assert_eq!(sums[0].printed, "64");
        let sizes: Vec<u64> = (0..3).map(|c| table.class_group_size(c)).collect();
        assert_eq!(sizes, [8 * 48, 6 * 48, 48]);
    }

    #[test]
    fn records_are_strings() {
        let s = Spectrum::from_pairs(&[(-2, 9), (8, 1), (2, 5)]);
        let recs = spectrum_records("M(6)", &s);
        assert_eq!(recs[2].eigenvalue, "-2");
        assert!(spectrum_sanity(&s, 15, 8).holds);
    }
}

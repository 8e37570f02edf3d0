//! Characters and dimensions of the irreducible representations of `Sym(n)`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{binomial, factorial, odd_double_factorial_usize, partitions_of, IntegerPartition};
use crate::error::{Error, Result};

/// Young diagram of a partition, English convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungDiagram {
    partition: IntegerPartition,
    conjugate: IntegerPartition,
}

impl YoungDiagram {
    pub fn new(partition: IntegerPartition) -> YoungDiagram {
        let conjugate = partition.conjugate();
        YoungDiagram { partition, conjugate }
    }

    pub fn partition(&self) -> &IntegerPartition {
        &self.partition
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partition
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
    }

    /// Hook length of cell `(i, j)`.
    pub fn hook_length(&self, i: usize, j: usize) -> usize {
        let row = self.partition.parts()[i];
        let col = self.conjugate.parts()[j];
        (row - j) + (col - i) - 1
    }
}

pub fn hook_dimension(lambda: &IntegerPartition) -> BigUint {
    let diagram = YoungDiagram::new(lambda.clone());
    let hooks: BigUint = diagram.cells().map(|(i, j)| BigUint::from(diagram.hook_length(i, j))).product();
    factorial(lambda.n() as u64) / hooks
}

type CharacterKey = (Vec<usize>, Vec<usize>);

fn character_cache() -> &'static RwLock<HashMap<CharacterKey, BigInt>> {
    static CACHE: OnceLock<RwLock<HashMap<CharacterKey, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `chi_lambda` evaluated on the class of cycle type `mu`.
pub fn mn_character(lambda: &IntegerPartition, mu: &IntegerPartition) -> Result<BigInt> {
    if lambda.n() != mu.n() {
        return Err(Error::DimensionMismatch(format!(
            "character {lambda} of Sym({}) on class {mu} of Sym({})",
            lambda.n(),
            mu.n()
        )));
    }
    Ok(character(lambda.parts(), mu.parts()))
}

fn character(lambda: &[usize], mu: &[usize]) -> BigInt {
    if mu.is_empty() {
        return BigInt::one();
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(v) = character_cache().read().expect("character cache poisoned").get(&key) {
        return v.clone();
    }
    // Beta-set rim-hook removal on the largest cycle.
    let r = mu[0];
    let rest = &mu[1..];
    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = BigInt::zero();
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let crossed = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let shape: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (len - 1 - i))
            .filter(|&p| p > 0)
            .collect();
        let value = character(&shape, rest);
        if crossed % 2 == 0 {
            total += value;
        } else {
            total -= value;
        }
    }
    character_cache()
        .write()
        .expect("character cache poisoned")
        .insert(key, total.clone());
    total
}

/// Partitions obtained by deleting one corner box, in row order.
pub fn remove_box(lambda: &IntegerPartition) -> Result<Vec<IntegerPartition>> {
    if lambda.is_empty() {
        return Err(Error::invalid("cannot remove a box from the empty partition"));
    }
    let parts = lambda.parts();
    let mut out = Vec::new();
    for i in 0..parts.len() {
        if i + 1 == parts.len() || parts[i] > parts[i + 1] {
            let mut p = parts.to_vec();
            p[i] -= 1;
            p.retain(|&x| x > 0);
            out.push(IntegerPartition::from_sorted(p));
        }
    }
    Ok(out)
}

/// Partitions obtained by adding one box, in row order.
pub fn add_box(lambda: &IntegerPartition) -> Vec<IntegerPartition> {
    let parts = lambda.parts();
    let mut out = Vec::new();
    for i in 0..=parts.len() {
        if i == 0 || i == parts.len() || parts[i - 1] > parts[i] {
            let mut p = parts.to_vec();
            if i == parts.len() {
                p.push(1);
            } else {
                p[i] += 1;
            }
            out.push(IntegerPartition::from_sorted(p));
        }
    }
    out
}

fn part(v: Vec<usize>) -> IntegerPartition {
    IntegerPartition::new(v).expect("valid partition")
}

fn with_ones(head: &[usize], ones: usize) -> IntegerPartition {
    let mut v = head.to_vec();
    v.extend(std::iter::repeat_n(1, ones));
    part(v)
}

/// The eight partitions of `n` whose characters have degree below
/// `(n^2 - n)/2` once `n >= 9`.
pub fn eight_small_partitions(n: usize) -> Result<Vec<IntegerPartition>> {
    if n < 9 {
        return Err(Error::invalid(format!("the small-degree classification needs n >= 9, got {n}")));
    }
    Ok(vec![
        part(vec![n]),
        with_ones(&[], n),
        part(vec![n - 1, 1]),
        with_ones(&[2], n - 2),
        part(vec![n - 2, 2]),
        with_ones(&[2, 2], n - 4),
        part(vec![n - 2, 1, 1]),
        with_ones(&[3], n - 3),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub partition: String,
    pub dimension: String,
    pub threshold: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallDegreeCheck {
    pub n: usize,
    #[serde(serialize_with = "crate::ser::display")]
    pub threshold: BigUint,
    #[serde(serialize_with = "crate::ser::display_seq")]
    pub found: Vec<IntegerPartition>,
    #[serde(serialize_with = "crate::ser::display_seq")]
    pub expected: Vec<IntegerPartition>,
    pub holds: bool,
    /// One row per partition of `n`: pass when "below threshold" agrees
    /// with membership in the expected list.
    pub rows: Vec<DegreeRow>,
}

/// Enumerates every partition of `n` and keeps those of degree below
/// `(n^2 - n)/2`.
pub fn small_degree_check(n: usize) -> Result<SmallDegreeCheck> {
    let mut expected = eight_small_partitions(n)?;
    let threshold = BigUint::from(n * n - n) / 2u32;
    let mut found = Vec::new();
    let mut rows = Vec::new();
    for lambda in partitions_of(n) {
        let dim = hook_dimension(&lambda);
        let small = dim < threshold;
        if small {
            found.push(lambda.clone());
        }
        rows.push(DegreeRow {
            partition: lambda.to_string(),
            dimension: dim.to_string(),
            threshold: threshold.to_string(),
            pass: small == expected.contains(&lambda),
        });
    }
    let mut sorted_found = found.clone();
    sorted_found.sort();
    expected.sort();
    let holds = sorted_found == expected;
    Ok(SmallDegreeCheck { n, threshold, found, expected, holds, rows })
}

pub fn small_degree_partitions(n: usize) -> Result<Vec<IntegerPartition>> {
    let check = small_degree_check(n)?;
    if !check.holds {
        return Err(Error::Certificate(format!(
            "partitions of {n} below degree {}: found {:?}",
            check.threshold,
            check.found.iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    Ok(check.found)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormRow {
    #[serde(serialize_with = "crate::ser::display")]
    pub partition: IntegerPartition,
    #[serde(serialize_with = "crate::ser::display")]
    pub hook_dimension: BigUint,
    #[serde(serialize_with = "crate::ser::display")]
    pub closed_form: BigUint,
    pub exceeds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormCheck {
    pub n: usize,
    /// `(n^2 + n)/2`.
    #[serde(serialize_with = "crate::ser::display")]
    pub bound: BigUint,
    pub rows: Vec<ClosedFormRow>,
    pub holds: bool,
}

/// Degrees of the six medium-size constituents of `Sym(n+1)` against
/// their closed forms.
pub fn closed_form_degree_check(n: usize) -> Result<ClosedFormCheck> {
    if n < 9 {
        return Err(Error::invalid(format!("closed-form degree check needs n >= 9, got {n}")));
    }
    let big = |x: usize| BigUint::from(x);
    let a = big(n) * big(n + 1) * big(n - 4) / 6u32;
    let b = big(n + 1) * big(n - 1) * big(n - 3) / 3u32;
    let c = big(n) * big(n - 1) * big(n - 2) / 6u32;
    let table = [
        (part(vec![n - 2, 3]), a.clone()),
        (part(vec![n - 2, 2, 1]), b.clone()),
        (part(vec![n - 2, 1, 1, 1]), c.clone()),
        (with_ones(&[3, 2], n - 4), b),
        (with_ones(&[2, 2, 2], n - 5), a),
        (with_ones(&[4], n - 3), c),
    ];
    let bound = big(n * n + n) / 2u32;
    let rows: Vec<ClosedFormRow> = table
        .into_iter()
        .map(|(partition, closed_form)| {
            let hook_dimension = hook_dimension(&partition);
            let exceeds = hook_dimension > bound;
            ClosedFormRow { partition, hook_dimension, closed_form, exceeds }
        })
        .collect();
    let holds = rows.iter().all(|r| r.exceeds && r.hook_dimension == r.closed_form);
    Ok(ClosedFormCheck { n, bound, rows, holds })
}

/// Rows of the branching table: a small constituent of the restriction to
/// `Sym(n)` and the constituents of `Sym(n+1)` it forces, as printed.
pub fn constituents_table(n: usize) -> Result<Vec<(IntegerPartition, Vec<IntegerPartition>)>> {
    if n < 9 {
        return Err(Error::invalid(format!("constituents table needs n >= 9, got {n}")));
    }
    Ok(vec![
        (part(vec![n]), vec![part(vec![n + 1]), part(vec![n, 1])]),
        (part(vec![n - 1, 1]), vec![part(vec![n, 1]), part(vec![n - 1, 2]), part(vec![n - 1, 1, 1])]),
        (part(vec![n - 2, 2]), vec![part(vec![n - 1, 2]), part(vec![n - 2, 3]), part(vec![n - 2, 2, 1])]),
        (
            part(vec![n - 2, 1, 1]),
            vec![part(vec![n - 1, 1, 1]), part(vec![n - 2, 2, 1]), part(vec![n - 2, 1, 1, 1])],
        ),
        (with_ones(&[], n), vec![with_ones(&[2], n - 1), with_ones(&[], n + 1)]),
        (
            with_ones(&[2], n - 2),
            vec![with_ones(&[3], n - 2), with_ones(&[2, 2], n - 3), with_ones(&[2], n - 1)],
        ),
        (
            with_ones(&[2, 2], n - 4),
            vec![with_ones(&[3, 2], n - 4), with_ones(&[2, 2, 2], n - 5), with_ones(&[2, 2], n - 3)],
        ),
        (
            with_ones(&[3], n - 3),
            vec![with_ones(&[4], n - 3), with_ones(&[3, 2], n - 4), with_ones(&[3], n - 2)],
        ),
    ])
}

/// True when every printed row equals `add_box` of its left partition.
pub fn constituents_table_check(n: usize) -> Result<bool> {
    Ok(constituents_table(n)?.into_iter().all(|(lambda, printed)| {
        let mut a = add_box(&lambda);
        let mut b = printed;
        a.sort();
        b.sort();
        a == b
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    /// Perfect matchings of `K_{2k}`.
    Matching { k: usize },
    /// `k`-subsets of an `n`-set.
    Johnson { n: usize, k: usize },
}

/// Irreducible constituents of the permutation character of the scheme.
pub fn decomposition_labels(kind: SchemeKind) -> Result<Vec<IntegerPartition>> {
    match kind {
        SchemeKind::Matching { k } => {
            if k == 0 {
                return Err(Error::invalid("k must be positive"));
            }
            Ok(partitions_of(k).iter().map(IntegerPartition::doubled).collect())
        }
        SchemeKind::Johnson { n, k } => {
            if n < 2 * k {
                return Err(Error::invalid(format!("Johnson labels need n >= 2k, got n={n}, k={k}")));
            }
            Ok((0..=k)
                .map(|i| {
                    if i == 0 {
                        part(vec![n])
                    } else {
                        part(vec![n - i, i])
                    }
                })
                .collect())
        }
    }
}

/// Sum of constituent dimensions and the number of points; equal because
/// each constituent appears once.
pub fn decomposition_dimension_check(kind: SchemeKind) -> Result<(BigUint, BigUint)> {
    let labels = decomposition_labels(kind)?;
    let sum = labels.iter().map(hook_dimension).sum();
    let index = match kind {
        SchemeKind::Matching { k } => BigUint::from(odd_double_factorial_usize(2 * k as isize - 1)),
        SchemeKind::Johnson { n, k } => binomial(n as u64, k as u64),
    };
    Ok((sum, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntegerPartition {
        s.parse().unwrap()
    }

    #[test]
    fn hook_dimensions() {
        assert_eq!(hook_dimension(&p("[6]")), BigUint::from(1u32));
        assert_eq!(hook_dimension(&p("[4,2]")), BigUint::from(9u32));
        assert_eq!(hook_dimension(&p("[2,1]")), BigUint::from(2u32));
        assert_eq!(hook_dimension(&p("[2,2,2]")), BigUint::from(5u32));
        let d = YoungDiagram::new(p("[4,2]"));
        let hooks: Vec<usize> = d.cells().map(|(i, j)| d.hook_length(i, j)).collect();
        assert_eq!(hooks, [5, 4, 2, 1, 2, 1]);
    }

    #[test]
    fn characters_of_small_groups() {
        let chi = |l: &str, m: &str| mn_character(&p(l), &p(m)).unwrap();
        assert_eq!(chi("[3]", "[2,1]"), BigInt::from(1));
        assert_eq!(chi("[1,1,1]", "[2,1]"), BigInt::from(-1));
        assert_eq!(chi("[2,1]", "[3]"), BigInt::from(-1));
        assert_eq!(chi("[2,1]", "[1,1,1]"), BigInt::from(2));
        assert_eq!(chi("[2,1]", "[2,1]"), BigInt::from(0));
        // Sym(4): chi_[2,2] on (12)(34) and on a 3-cycle.
        assert_eq!(chi("[2,2]", "[2,2]"), BigInt::from(2));
        assert_eq!(chi("[2,2]", "[3,1]"), BigInt::from(-1));
        assert!(mn_character(&p("[2,1]"), &p("[2,2]")).is_err());
    }

    #[test]
    fn boxes() {
        assert_eq!(remove_box(&p("[5]")).unwrap(), vec![p("[4]")]);
        assert_eq!(remove_box(&p("[2,1]")).unwrap(), vec![p("[1,1]"), p("[2]")]);
        assert_eq!(add_box(&p("[2,2]")), vec![p("[3,2]"), p("[2,2,1]")]);
        assert!(remove_box(&IntegerPartition::empty()).is_err());
        assert_eq!(add_box(&IntegerPartition::empty()), vec![p("[1]")]);
    }

    #[test]
    fn eight_small() {
        for n in [9, 11, 12, 13] {
            assert_eq!(small_degree_partitions(n).unwrap().len(), 8, "n={n}");
        }
        // n = 10: [5,5] and its conjugate have degree 42 < 45 as well.
        let check = small_degree_check(10).unwrap();
        assert!(!check.holds);
        let extra: Vec<String> = check
            .found
            .iter()
            .filter(|p| !check.expected.contains(p))
            .map(ToString::to_string)
            .collect();
        assert_eq!(extra, ["[5,5]", "[2,2,2,2,2]"]);
        let mut dims: Vec<u32> = check
            .expected
            .iter()
            .map(|p| u32::try_from(hook_dimension(p)).unwrap())
            .collect();
        dims.sort();
        assert_eq!(dims, [1, 1, 9, 9, 35, 35, 36, 36]);
        assert!(small_degree_partitions(10).is_err());
        assert!(small_degree_partitions(8).is_err());
    }

    #[test]
    fn closed_forms() {
        let c = closed_form_degree_check(9).unwrap();
        assert!(c.holds);
        assert_eq!(c.rows[0].hook_dimension, BigUint::from(75u32));
        assert_eq!(c.rows[1].hook_dimension, BigUint::from(160u32));
        let c = closed_form_degree_check(10).unwrap();
        assert_eq!(c.rows[2].hook_dimension, BigUint::from(120u32));
    }

    #[test]
    fn labels() {
        let m = decomposition_labels(SchemeKind::Matching { k: 3 }).unwrap();
        assert_eq!(m, vec![p("[6]"), p("[4,2]"), p("[2,2,2]")]);
        let j = decomposition_labels(SchemeKind::Johnson { n: 5, k: 2 }).unwrap();
        assert_eq!(j, vec![p("[5]"), p("[4,1]"), p("[3,2]")]);
        let (sum, index) = decomposition_dimension_check(SchemeKind::Matching { k: 3 }).unwrap();
        assert_eq!((sum, index), (BigUint::from(15u32), BigUint::from(15u32)));
        assert!(decomposition_labels(SchemeKind::Johnson { n: 3, k: 2 }).is_err());
    }

    #[test]
    fn constituents_rows_match_branching() {
        for n in 9..=12 {
            assert!(constituents_table_check(n).unwrap());
        }
    }
}

//! The simplex category: monotone maps `[r] -> [n]`, coface and codegeneracy
//! generators, the partition operators used by the Gray tensor products, and
//! unique epi-mono factorization.
//!
//! `[-1]` is the empty ordinal; maps out of it are unique and empty.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{out_of_range, Error, Result};

/// An order-preserving function `[r] -> [n]`, stored by its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct MonotoneMap {
    codomain: isize,
    values: Values,
}

type Values = SmallVec<[usize; 8]>;

#[derive(Serialize, Deserialize)]
struct RawMap {
    values: Vec<usize>,
    codomain: isize,
}

impl TryFrom<RawMap> for MonotoneMap {
    type Error = Error;
    fn try_from(raw: RawMap) -> Result<Self> {
        MonotoneMap::new(raw.values, raw.codomain)
    }
}

impl From<MonotoneMap> for RawMap {
    fn from(m: MonotoneMap) -> Self {
        RawMap {
            values: m.values.into_vec(),
            codomain: m.codomain,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Face,
    Degeneracy,
}

impl MonotoneMap {
    pub fn new(values: Vec<usize>, codomain: isize) -> Result<Self> {
        if codomain < -1 {
            return Err(out_of_range("codomain dimension", codomain, "[-1, inf)"));
        }
        if codomain == -1 && !values.is_empty() {
            return Err(Error::InvalidMap(
                "no map from a nonempty ordinal into [-1]".into(),
            ));
        }
        if let Some(w) = values.windows(2).find(|w| w[0] > w[1]) {
            return Err(Error::InvalidMap(format!(
                "values not weakly increasing: {} > {}",
                w[0], w[1]
            )));
        }
        if let Some(&v) = values.last() {
            if v as isize > codomain {
                return Err(Error::InvalidMap(format!(
                    "value {v} exceeds codomain dimension {codomain}"
                )));
            }
        }
        Ok(MonotoneMap {
            codomain,
            values: values.into(),
        })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_raw(values: impl Into<Values>, codomain: isize) -> Self {
        let values = values.into();
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(values.last().is_none_or(|&v| (v as isize) <= codomain));
        MonotoneMap { codomain, values }
    }

    pub fn identity(n: isize) -> Self {
        let len = (n + 1).max(0) as usize;
        MonotoneMap::from_raw((0..len).collect::<Values>(), n.max(-1))
    }

    /// The unique map `[-1] -> [n]`.
    pub fn empty(n: isize) -> Self {
        MonotoneMap::from_raw(Vec::new(), n)
    }

    /// The constant map `[r] -> [n]` with value `v`.
    pub fn constant(r: usize, v: usize, n: isize) -> Result<Self> {
        MonotoneMap::new(vec![v; r + 1], n)
    }

    pub fn domain_dim(&self) -> isize {
        self.values.len() as isize - 1
    }

    pub fn codomain_dim(&self) -> isize {
        self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn at(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_identity(&self) -> bool {
        self.domain_dim() == self.codomain && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        match self.values.first() {
            None => self.codomain == -1,
            Some(&first) => {
                first == 0
                    && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
                    && *self.values.last().unwrap() as isize == self.codomain
            }
        }
    }

    /// Positions `k` in `1..=r` with `f(k-1) = f(k)`; `f` factors through
    /// the codegeneracy `s^{k-1}` exactly at these positions.
    pub fn repeat_positions(&self) -> Vec<usize> {
        (1..self.values.len())
            .filter(|&k| self.values[k - 1] == self.values[k])
            .collect()
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &MonotoneMap) -> Result<MonotoneMap> {
        compose(self, other)
    }

    /// Eilenberg–Zilber normal form of a surjection as a strictly decreasing
    /// word `[j_t, ..., j_1]`: a simplex `y` precomposed with `self` is
    /// `s_{j_t} ... s_{j_1} y`.
    pub fn degeneracy_word(&self) -> Vec<usize> {
        let mut word: Vec<usize> = self.repeat_positions().into_iter().map(|k| k - 1).collect();
        word.reverse();
        word
    }

    /// Inverse of [`MonotoneMap::degeneracy_word`]: the surjection onto `[n]`
    /// whose repeat positions are the word's entries.
    pub fn from_degeneracy_word(word: &[usize], n: isize) -> Result<MonotoneMap> {
        if word.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidMap(format!(
                "degeneracy word {word:?} is not strictly decreasing"
            )));
        }
        if n < 0 {
            if word.is_empty() {
                return Ok(MonotoneMap::empty(-1));
            }
            return Err(Error::InvalidMap("degenerate empty simplex".into()));
        }
        let r = n as usize + word.len();
        if let Some(&j) = word.first() {
            if j >= r {
                return Err(out_of_range(
                    "degeneracy index",
                    j as isize,
                    format!("[0, {}]", r - 1),
                ));
            }
        }
        let mut values = Vec::with_capacity(r + 1);
        let mut v = 0usize;
        values.push(0);
        for k in 1..=r {
            if !word.contains(&(k - 1)) {
                v += 1;
            }
            values.push(v);
        }
        MonotoneMap::new(values, n)
    }

    /// `self ∘ δ^i` for a surjection `self`, split as `δ^j ∘ rest` when the
    /// value at `i` is hit only once (`Some(j)`), or `rest` itself otherwise.
    pub fn face_split(&self, i: usize) -> (Option<usize>, MonotoneMap) {
        let v = &self.values;
        let r = v.len() - 1;
        let lone = (i == 0 || v[i - 1] != v[i]) && (i == r || v[i + 1] != v[i]);
        let rest = v
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &a)| a);
        if lone {
            let j = v[i];
            let values: Values = rest.map(|a| if a > j { a - 1 } else { a }).collect();
            (Some(j), MonotoneMap::from_raw(values, self.codomain - 1))
        } else {
            (
                None,
                MonotoneMap::from_raw(rest.collect::<Values>(), self.codomain),
            )
        }
    }

    /// Opposite map `[r]^op -> [n]^op`: `i ↦ n - f(r - i)`.
    pub fn opposite(&self) -> MonotoneMap {
        let n = self.codomain as usize;
        let values: Values = self.values.iter().rev().map(|&v| n - v).collect();
        MonotoneMap::from_raw(values, self.codomain)
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "] : {} -> {}", self.domain_dim(), self.codomain)
    }
}

impl FromStr for MonotoneMap {
    type Err = Error;

    /// Parses `"[v0 v1 ... vr] : r -> n"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidMap(format!("cannot parse {s:?}"));
        let s = s.trim();
        let open = s.strip_prefix('[').ok_or_else(bad)?;
        let (inner, rest) = open.split_once(']').ok_or_else(bad)?;
        let values = inner
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let rest = rest.trim().strip_prefix(':').ok_or_else(bad)?;
        let (r, n) = rest.split_once("->").ok_or_else(bad)?;
        let r: isize = r.trim().parse().map_err(|_| bad())?;
        let n: isize = n.trim().parse().map_err(|_| bad())?;
        let map = MonotoneMap::new(values, n)?;
        if map.domain_dim() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: map.domain_dim(),
            });
        }
        Ok(map)
    }
}

/// Pointwise composite `g ∘ f`.
pub fn compose(g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
    if f.codomain != g.domain_dim() {
        return Err(Error::DimensionMismatch {
            expected: g.domain_dim(),
            found: f.codomain,
        });
    }
    let values: Values = f.values.iter().map(|&i| g.values[i]).collect();
    Ok(MonotoneMap::from_raw(values, g.codomain))
}

/// Coface `δ^i : [n-1] -> [n]` (skips `i`) or codegeneracy
/// `σ^i : [n+1] -> [n]` (repeats `i`).
pub fn generator(n: isize, i: usize, kind: GeneratorKind) -> Result<MonotoneMap> {
    if n < 0 || i as isize > n {
        return Err(out_of_range(
            "generator index",
            i as isize,
            format!("[0, {n}]"),
        ));
    }
    let n_us = n as usize;
    let values: Values = match kind {
        GeneratorKind::Face => (0..=n_us).filter(|&v| v != i).collect(),
        GeneratorKind::Degeneracy => (0..=n_us + 1)
            .map(|j| if j <= i { j } else { j - 1 })
            .collect(),
    };
    Ok(MonotoneMap::from_raw(values, n))
}

pub fn face(n: isize, i: usize) -> Result<MonotoneMap> {
    generator(n, i, GeneratorKind::Face)
}

pub fn degeneracy(n: isize, i: usize) -> Result<MonotoneMap> {
    generator(n, i, GeneratorKind::Degeneracy)
}

/// `(Π₁, Π₂)` with `Π₁ : [p+q] -> [p], i ↦ min(i, p)` and
/// `Π₂ : [p+q] -> [q], i ↦ max(i - p, 0)`.
pub fn degeneracy_partition(p: usize, q: usize) -> (MonotoneMap, MonotoneMap) {
    let r = p + q;
    let first: Values = (0..=r).map(|i| i.min(p)).collect();
    let second: Values = (0..=r).map(|i| i.saturating_sub(p)).collect();
    (
        MonotoneMap::from_raw(first, p as isize),
        MonotoneMap::from_raw(second, q as isize),
    )
}

/// `(∐₁, ∐₂)` with `∐₁ : [p] -> [p+q], i ↦ i` and `∐₂ : [q] -> [p+q], i ↦ p + i`.
pub fn face_partition(p: usize, q: usize) -> (MonotoneMap, MonotoneMap) {
    let r = (p + q) as isize;
    (
        MonotoneMap::from_raw((0..=p).collect::<Values>(), r),
        MonotoneMap::from_raw((p..=p + q).collect::<Values>(), r),
    )
}

/// Unique factorization `f = injection ∘ surjection`.
pub fn ez_factorize(f: &MonotoneMap) -> (MonotoneMap, MonotoneMap) {
    let mut image = Values::new();
    let mut surj = Values::new();
    for &v in &f.values {
        if image.last() != Some(&v) {
            image.push(v);
        }
        surj.push(image.len() - 1);
    }
    let k = image.len() as isize - 1;
    (
        MonotoneMap::from_raw(surj, k),
        MonotoneMap::from_raw(image, f.codomain),
    )
}

/// The surjection `[r] -> [r - |collapse|]` that identifies each position
/// `k` in `collapse` with `k - 1`.
pub(crate) fn collapse_positions(r: usize, collapse: &[usize]) -> MonotoneMap {
    let mut values = Values::new();
    let mut v = 0usize;
    values.push(0);
    for k in 1..=r {
        if !collapse.contains(&k) {
            v += 1;
        }
        values.push(v);
    }
    MonotoneMap::from_raw(values, (r - collapse.len()) as isize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn map(values: &[usize], n: isize) -> MonotoneMap {
        MonotoneMap::new(values.to_vec(), n).unwrap()
    }

    #[test]
    fn partition_retractions() {
        let (pi1, pi2) = degeneracy_partition(3, 2);
        let (co1, co2) = face_partition(3, 2);
        assert_eq!(compose(&pi1, &co1).unwrap(), MonotoneMap::identity(3));
        assert_eq!(compose(&pi2, &co2).unwrap(), MonotoneMap::identity(2));
    }

    #[test]
    fn compose_pointwise() {
        let g = map(&[0, 2], 2);
        let f = map(&[0, 0, 1], 1);
        assert_eq!(compose(&g, &f).unwrap(), map(&[0, 0, 2], 2));
    }

    #[test]
    fn compose_rejects_mismatch() {
        let err = compose(&map(&[0, 2], 2), &map(&[0, 1, 2], 2)).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn generators() {
        assert_eq!(face(2, 1).unwrap(), map(&[0, 2], 2));
        assert_eq!(degeneracy(1, 0).unwrap(), map(&[0, 0, 1], 1));
        let d = face(0, 0).unwrap();
        assert_eq!(d.domain_dim(), -1);
        assert_eq!(d.codomain_dim(), 0);
        assert!(face(2, 3).is_err());
        assert!(degeneracy(-1, 0).is_err());
    }

    #[test]
    fn partition_values() {
        let (pi1, pi2) = degeneracy_partition(3, 2);
        assert_eq!(pi1.values(), &[0, 1, 2, 3, 3, 3]);
        assert_eq!(pi2.values(), &[0, 0, 0, 0, 1, 2]);
        let (a, b) = degeneracy_partition(0, 0);
        assert!(a.is_identity() && b.is_identity());

        let (co1, co2) = face_partition(3, 2);
        assert_eq!(co1.values(), &[0, 1, 2, 3]);
        assert_eq!(co2.values(), &[3, 4, 5]);
        let (co1, co2) = face_partition(0, 3);
        assert_eq!(co1.values(), &[0]);
        assert!(co2.is_identity());
        let (co1, co2) = face_partition(3, 0);
        assert!(co1.is_identity());
        assert_eq!(co2.values(), &[3]);
    }

    #[test]
    fn factorization_examples() {
        let (s, i) = ez_factorize(&map(&[0, 0, 2], 2));
        assert_eq!(s, map(&[0, 0, 1], 1));
        assert_eq!(i, map(&[0, 2], 2));
        let id = MonotoneMap::identity(3);
        assert_eq!(ez_factorize(&id), (id.clone(), id.clone()));
        let (s, i) = ez_factorize(&map(&[1, 1, 1], 3));
        assert_eq!(s, map(&[0, 0, 0], 0));
        assert_eq!(i, map(&[1], 3));
    }

    #[test]
    fn degeneracy_word_roundtrip() {
        let s = map(&[0, 0, 1, 1, 2], 2);
        assert_eq!(s.degeneracy_word(), vec![2, 0]);
        assert_eq!(MonotoneMap::from_degeneracy_word(&[2, 0], 2).unwrap(), s);
        assert!(MonotoneMap::from_degeneracy_word(&[0, 2], 2).is_err());
    }

    #[test]
    fn text_form() {
        let f = map(&[0, 0, 2], 2);
        assert_eq!(f.to_string(), "[0 0 2] : 2 -> 2");
        assert_eq!("[0 0 2] : 2 -> 2".parse::<MonotoneMap>().unwrap(), f);
        assert_eq!(
            "[] : -1 -> 0".parse::<MonotoneMap>().unwrap(),
            face(0, 0).unwrap()
        );
        assert!("[0 1] : 2 -> 2".parse::<MonotoneMap>().is_err());
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"values":[0,0,2],"codomain":2}"#);
        assert_eq!(serde_json::from_str::<MonotoneMap>(&json).unwrap(), f);
        assert!(serde_json::from_str::<MonotoneMap>(r#"{"values":[1,0],"codomain":2}"#).is_err());
    }

    #[test]
    fn partitions_retract_up_to_eight() {
        for p in 0..=8 {
            for q in 0..=8 {
                let (pi1, pi2) = degeneracy_partition(p, q);
                let (co1, co2) = face_partition(p, q);
                assert!(compose(&pi1, &co1).unwrap().is_identity());
                assert!(compose(&pi2, &co2).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn simplicial_identities_up_to_eight() {
        // cosimplicial identities, dual to d_i d_j = d_{j-1} d_i etc.
        for n in 1..=8isize {
            for j in 0..=n as usize {
                for i in 0..j {
                    // δ^j δ^i = δ^i δ^{j-1}, i < j, maps [n-2] -> [n]
                    let lhs = compose(&face(n, j).unwrap(), &face(n - 1, i).unwrap()).unwrap();
                    let rhs = compose(&face(n, i).unwrap(), &face(n - 1, j - 1).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            for i in 0..=n as usize {
                for j in i..=n as usize {
                    // σ^j σ^i = σ^i σ^{j+1}, i <= j, maps [n+2] -> [n]
                    let lhs = compose(&degeneracy(n, j).unwrap(), &degeneracy(n + 1, i).unwrap())
                        .unwrap();
                    let rhs = compose(
                        &degeneracy(n, i).unwrap(),
                        &degeneracy(n + 1, j + 1).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            // mixed: σ^j δ^i on [n] -> [n]
            for j in 0..n as usize {
                for i in 0..=n as usize {
                    let lhs =
                        compose(&degeneracy(n - 1, j).unwrap(), &face(n, i).unwrap()).unwrap();
                    if i < j {
                        let rhs =
                            compose(&face(n - 1, i).unwrap(), &degeneracy(n - 2, j - 1).unwrap())
                                .unwrap();
                        assert_eq!(lhs, rhs);
                    } else if i == j || i == j + 1 {
                        assert!(lhs.is_identity());
                    } else {
                        let rhs =
                            compose(&face(n - 1, i - 1).unwrap(), &degeneracy(n - 2, j).unwrap())
                                .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    fn arb_map() -> impl Strategy<Value = MonotoneMap> {
        (0usize..7, 0usize..7).prop_flat_map(|(r, n)| {
            proptest::collection::vec(0..=n, r + 1).prop_map(move |mut v| {
                v.sort();
                MonotoneMap::new(v, n as isize).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn factorization_is_epi_mono(f in arb_map()) {
            let (s, i) = ez_factorize(&f);
            prop_assert!(s.is_surjective());
            prop_assert!(i.is_injective());
            prop_assert_eq!(compose(&i, &s).unwrap(), f);
        }

        #[test]
        fn factorization_is_idempotent(f in arb_map()) {
            let (s, i) = ez_factorize(&f);
            let (ss, si) = ez_factorize(&s);
            prop_assert_eq!(&ss, &s);
            prop_assert!(si.is_identity());
            let (is, ii) = ez_factorize(&i);
            prop_assert!(is.is_identity());
            prop_assert_eq!(&ii, &i);
        }

        #[test]
        fn opposite_is_involutive(f in arb_map()) {
            prop_assert_eq!(f.opposite().opposite(), f);
        }

        #[test]
        fn word_roundtrip(f in arb_map()) {
            let (s, _) = ez_factorize(&f);
            let w = s.degeneracy_word();
            prop_assert_eq!(MonotoneMap::from_degeneracy_word(&w, s.codomain_dim()).unwrap(), s);
        }
    }
}

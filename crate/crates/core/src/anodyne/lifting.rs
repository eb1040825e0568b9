use serde::{Deserialize, Serialize};

use super::{generator, AnodyneGen, AnodyneKind};
use crate::marking::{MarkedMap, MarkedSSet};
use crate::sset::{search_maps, Simplex};

/// Outcome of a lifting check of `i: A -> B` against `X`.
#[derive(Clone, Debug)]
pub struct RlpResult {
    pub holds: bool,
    /// Number of marked maps `A -> X` examined.
    pub maps_checked: usize,
    /// A marked map `A -> X` with no extension along `i`.
    pub counterexample: Option<MarkedMap>,
}

/// A marked map `b -> x` restricting to `f` along the inclusion `i`.
pub fn find_lift(i: &MarkedMap, f: &MarkedMap) -> Option<MarkedMap> {
    let (b, x) = (&i.codomain, &f.codomain);
    let mut fixed: Vec<Option<Simplex>> = vec![None; b.len()];
    for (c, s) in i.map.assignment.iter().enumerate() {
        fixed[s.base] = Some(f.map.assignment[c].clone());
    }
    let mut found = None;
    search_maps(
        &b.underlying,
        &x.underlying,
        &fixed,
        &mut |c, s| !b.is_cell_marked(c) || x.is_marked(s),
        &mut |assignment| {
            found = Some(assignment.to_vec());
            false
        },
    );
    found.map(|a| MarkedMap::new(b.clone(), x.clone(), a).expect("search yields marked maps"))
}

/// Whether every marked map `A -> X` extends along the inclusion `i`.
pub fn has_rlp(i: &MarkedMap, x: &MarkedSSet) -> RlpResult {
    let a = &i.domain;
    let mut maps_checked = 0;
    let mut counterexample = None;
    search_maps(
        &a.underlying,
        &x.underlying,
        &[],
        &mut |c, s| !a.is_cell_marked(c) || x.is_marked(s),
        &mut |assignment| {
            maps_checked += 1;
            let f = MarkedMap::new(a.clone(), x.clone(), assignment.to_vec())
                .expect("search yields marked maps");
            if find_lift(i, &f).is_none() {
                counterexample = Some(f);
                return false;
            }
            true
        },
    );
    RlpResult {
        holds: counterexample.is_none(),
        maps_checked,
        counterexample,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub dimension: isize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saturation: Option<isize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trivial_above: Option<isize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckedProblem {
    pub generator: String,
    pub kind: AnodyneKind,
    pub params: Vec<isize>,
    pub maps: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub generator: String,
    pub kind: AnodyneKind,
    pub params: Vec<isize>,
    /// Images of the generator's domain cells, in cell order.
    pub map: Vec<String>,
}

/// A truncated recognition verdict: which lifting problems were checked,
/// which failed, and up to which bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub checked: Vec<CheckedProblem>,
    pub failures: Vec<Failure>,
    pub bounds: Bounds,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn horn_and_thinness(d: isize) -> Vec<(AnodyneKind, Vec<isize>)> {
    let mut out = Vec::new();
    for m in 1..=d {
        for k in 0..=m {
            out.push((AnodyneKind::Horn, vec![m, k]));
        }
    }
    for m in 2..=d {
        for k in 0..=m {
            out.push((AnodyneKind::Thinness, vec![m, k]));
        }
    }
    out
}

fn run(x: &MarkedSSet, problems: Vec<(AnodyneKind, Vec<isize>)>, bounds: Bounds) -> Verdict {
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    for (kind, params) in problems {
        let gen: AnodyneGen =
            generator(kind, &params).expect("parameters are in range by construction");
        let r = has_rlp(&gen.realized, x);
        checked.push(CheckedProblem {
            generator: gen.to_string(),
            kind,
            params: params.clone(),
            maps: r.maps_checked,
            holds: r.holds,
        });
        if let Some(f) = r.counterexample {
            failures.push(Failure {
                generator: gen.to_string(),
                kind,
                params,
                map: f
                    .map
                    .assignment
                    .iter()
                    .map(|s| x.underlying.simplex_text(s))
                    .collect(),
            });
        }
    }
    Verdict {
        checked,
        failures,
        bounds,
    }
}

/// Lifting against complicial horn and thinness extensions with `m <= d`.
pub fn is_complicial(x: &MarkedSSet, d: isize) -> Verdict {
    let bounds = Bounds {
        dimension: d,
        saturation: None,
        trivial_above: None,
    };
    run(x, horn_and_thinness(d), bounds)
}

/// As [`is_complicial`], plus left saturation extensions with `ℓ <= l`.
pub fn is_saturated(x: &MarkedSSet, d: isize, l: isize) -> Verdict {
    let mut problems = horn_and_thinness(d);
    problems.extend((-1..=l).map(|ell| (AnodyneKind::Saturation, vec![ell])));
    let bounds = Bounds {
        dimension: d,
        saturation: Some(l),
        trivial_above: None,
    };
    run(x, problems, bounds)
}

/// Saturated and `n`-trivial: saturation extensions whose top dimension
/// `ℓ + 4` is at most `d`, and triviality extensions `n < p <= d`.
pub fn is_n_complicial(x: &MarkedSSet, n: isize, d: isize) -> Verdict {
    let mut problems = horn_and_thinness(d);
    problems.extend((-1..=d - 4).map(|ell| (AnodyneKind::Saturation, vec![ell])));
    problems.extend(
        (n + 1..=d)
            .filter(|&p| p >= 1)
            .map(|p| (AnodyneKind::Triviality, vec![p])),
    );
    let bounds = Bounds {
        dimension: d,
        saturation: Some(d - 4),
        trivial_above: Some(n),
    };
    run(x, problems, bounds)
}

//! Unpruned reference implementations used to cross-check the searches
//! and the table-driven markings.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::anodyne::{generator, has_rlp, AnodyneKind};
use crate::harness::{Corpus, ObjectDump, SuiteReport};
use crate::marking::{cleaves, is_crushed_cylinder, is_mediator, MarkedMap, MarkedSSet};
use crate::sset::{FinSSet, Product, SSetMap, Simplex};

/// Size of the unpruned search space for maps `a -> x`: one candidate
/// simplex of the right dimension per cell. Saturates at `u64::MAX`.
pub fn naive_candidates(a: &FinSSet, x: &FinSSet) -> u64 {
    let by_dim: Vec<u64> = (0..=a.top_dim().max(0) as usize)
        .map(|r| x.simplices_of_dim(r).len() as u64)
        .collect();
    (0..a.len()).fold(1u64, |acc, c| acc.saturating_mul(by_dim[a.dim(c)]))
}

/// Runs `visit` on every assignment of the cells `free` drawn from
/// `options`, keeping the other entries of `current`.
fn odometer(
    free: &[usize],
    options: &[Vec<Simplex>],
    current: &mut [Simplex],
    visit: &mut dyn FnMut(&[Simplex]) -> bool,
) {
    if options.iter().any(|o| o.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; free.len()];
    for (k, &c) in free.iter().enumerate() {
        current[c] = options[k][0].clone();
    }
    loop {
        if !visit(current) {
            return;
        }
        let mut k = free.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < options[k].len() {
                current[free[k]] = options[k][idx[k]].clone();
                break;
            }
            idx[k] = 0;
            current[free[k]] = options[k][0].clone();
        }
    }
}

fn is_map(a: &FinSSet, x: &FinSSet, assignment: &[Simplex]) -> bool {
    (0..a.len()).all(|c| {
        a.cell(c)
            .faces
            .iter()
            .enumerate()
            .all(|(i, f)| x.face(&assignment[c], i) == x.restrict(&assignment[f.base], &f.degen))
    })
}

/// All maps `a -> x`, by testing every candidate assignment.
pub fn naive_maps(a: &Arc<FinSSet>, x: &Arc<FinSSet>) -> Vec<SSetMap> {
    let free: Vec<usize> = (0..a.len()).collect();
    let options: Vec<Vec<Simplex>> = free.iter().map(|&c| x.simplices_of_dim(a.dim(c))).collect();
    let mut current = vec![Simplex::nondegenerate(0, 0); a.len()];
    let mut out = Vec::new();
    odometer(&free, &options, &mut current, &mut |s| {
        if is_map(a, x, s) {
            out.push(SSetMap {
                domain: a.clone(),
                codomain: x.clone(),
                assignment: s.to_vec(),
            });
        }
        true
    });
    out
}

fn preserves_marks(a: &MarkedSSet, x: &MarkedSSet, assignment: &[Simplex]) -> bool {
    (0..a.len()).all(|c| !a.is_cell_marked(c) || x.is_marked(&assignment[c]))
}

/// Whether every marked map out of the domain of the inclusion `i`
/// extends to its codomain, by exhaustive search on both sides.
pub fn naive_has_rlp(i: &MarkedMap, x: &MarkedSSet) -> bool {
    let (a, b) = (&i.domain, &i.codomain);
    let image: Vec<Option<usize>> = {
        let mut v = vec![None; b.len()];
        for (c, s) in i.map.assignment.iter().enumerate() {
            v[s.base] = Some(c);
        }
        v
    };
    let free: Vec<usize> = (0..b.len()).filter(|&c| image[c].is_none()).collect();
    let options: Vec<Vec<Simplex>> = free
        .iter()
        .map(|&c| x.underlying.simplices_of_dim(b.underlying.dim(c)))
        .collect();
    naive_maps(&a.underlying, &x.underlying)
        .into_iter()
        .filter(|f| preserves_marks(a, x, &f.assignment))
        .all(|f| {
            let mut current: Vec<Simplex> = (0..b.len())
                .map(|c| match image[c] {
                    Some(d) => f.assignment[d].clone(),
                    None => Simplex::nondegenerate(0, 0),
                })
                .collect();
            let mut found = false;
            odometer(&free, &options, &mut current, &mut |s| {
                if is_map(&b.underlying, &x.underlying, s) && preserves_marks(b, x, s) {
                    found = true;
                }
                !found
            });
            found
        })
}

/// Pretensor marking of `X × Y` straight from the definition.
pub fn literal_pretensor(x: &MarkedSSet, y: &MarkedSSet) -> MarkedSSet {
    let p = Product::new(x.underlying.clone(), y.underlying.clone());
    MarkedSSet::from_predicate(p.sset.clone(), |c| {
        let (a, b) = p.pair(c);
        a.dim() > 0 && (is_mediator(a, b).unwrap() || is_crushed_cylinder(a, b, x, y).unwrap())
    })
}

/// Tensor marking of `X × Y` straight from the definition.
pub fn literal_tensor(x: &MarkedSSet, y: &MarkedSSet) -> MarkedSSet {
    let p = Product::new(x.underlying.clone(), y.underlying.clone());
    MarkedSSet::from_predicate(p.sset.clone(), |c| {
        let (a, b) = p.pair(c);
        let r = a.dim();
        r > 0 && (0..=r).all(|k| cleaves(k, r - k, a, b, x, y).unwrap())
    })
}

/// Lifting problems whose generators feed the oracle comparison.
pub fn oracle_generators(max_m: isize, max_ell: isize) -> Vec<(AnodyneKind, Vec<isize>)> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for k in 0..=m {
            out.push((AnodyneKind::Horn, vec![m, k]));
        }
    }
    for m in 2..=max_m {
        for k in 0..=m {
            out.push((AnodyneKind::Thinness, vec![m, k]));
        }
    }
    for ell in -1..=max_ell {
        out.push((AnodyneKind::Saturation, vec![ell]));
    }
    for p in 1..=max_m {
        out.push((AnodyneKind::Triviality, vec![p]));
    }
    out
}

/// `enumerate_maps` and `has_rlp` against the naive versions, for every
/// generator and corpus entry whose naive search space has at most
/// `limit` candidates on each side.
pub fn oracle_suite(corpus: &Corpus, limit: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("oracles");
    let mut skipped = 0usize;
    let gens: Vec<_> = oracle_generators(3, 1)
        .into_iter()
        .map(|(k, p)| generator(k, &p).expect("generator parameters in range"))
        .collect();
    for u in 0..corpus.underlyings.len() {
        let x = &corpus.underlyings[u];
        let entries: Vec<&crate::harness::CorpusEntry> = corpus
            .entries
            .iter()
            .filter(|e| e.underlying == u)
            .collect();
        for g in &gens {
            let (a, b) = (&g.realized.domain, &g.realized.codomain);
            if naive_candidates(&a.underlying, x) > limit
                || naive_candidates(&b.underlying, x) > limit
            {
                skipped += entries.len();
                continue;
            }
            let fast: BTreeSet<Vec<Simplex>> = crate::sset::enumerate_maps(&a.underlying, x)
                .into_iter()
                .map(|f| f.assignment)
                .collect();
            let slow: BTreeSet<Vec<Simplex>> = naive_maps(&a.underlying, x)
                .into_iter()
                .map(|f| f.assignment)
                .collect();
            let maps_agree = fast == slow;
            for e in &entries {
                let outcome = if !maps_agree {
                    Err(format!(
                        "enumerate_maps found {} maps, the naive search {}",
                        fast.len(),
                        slow.len()
                    ))
                } else {
                    let (quick, naive) = (
                        has_rlp(&g.realized, &e.object).holds,
                        naive_has_rlp(&g.realized, &e.object),
                    );
                    if quick == naive {
                        Ok(())
                    } else {
                        Err(format!("has_rlp says {quick}, the naive search {naive}"))
                    }
                };
                rep.record(
                    || format!("{g} ; {}", e.name),
                    outcome.map_err(|d| (d, vec![ObjectDump::of(&e.name, &e.object)])),
                );
            }
        }
    }
    rep.notes.push(format!(
        "{skipped} problems with more than {limit} candidates not checked"
    ));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marking::{gadget, pretensor, tensor, Gadget};
    use crate::sset::standard;

    #[test]
    fn naive_counts_match_monotone_maps() {
        let a = Arc::new(standard(1));
        let x = Arc::new(standard(2));
        assert_eq!(naive_maps(&a, &x).len(), 6);
        assert_eq!(naive_candidates(&a, &x), 3 * 3 * 6);
    }

    #[test]
    fn literal_markings_match() {
        let x = gadget(&Gadget::DeltaT(2)).unwrap();
        let y = gadget(&Gadget::Delta(1)).unwrap();
        assert_eq!(literal_tensor(&x, &y), tensor(&x, &y));
        assert_eq!(literal_pretensor(&x, &y), pretensor(&x, &y));
    }

    #[test]
    fn naive_lifting_sees_the_horn() {
        let h = gadget(&Gadget::Horn { m: 2, k: 1 }).unwrap();
        let g = generator(AnodyneKind::Horn, &[2, 1]).unwrap();
        assert!(!naive_has_rlp(&g.realized, &h));
        let d = gadget(&Gadget::Delta(2)).unwrap();
        assert!(!naive_has_rlp(&g.realized, &d));
        let full = MarkedSSet::maximal(d.underlying.clone());
        assert!(naive_has_rlp(&g.realized, &full));
        assert!(has_rlp(&g.realized, &full).holds);
    }
}

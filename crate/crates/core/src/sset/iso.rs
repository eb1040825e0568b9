//! Isomorphism testing by color refinement with individualization.
//!
//! Both objects are colored jointly so that color ids are comparable. A
//! stable coloring is refined until discrete, branching on the first
//! non-singleton class; a discrete coloring determines a unique candidate
//! bijection, which is then verified exactly.

use std::collections::BTreeMap;

use super::{CellId, FinSSet};

type Signature = (u32, Vec<(u32, Vec<usize>)>, Vec<(u32, usize)>);

struct Joint<'a> {
    x: &'a FinSSet,
    y: &'a FinSSet,
    cofaces: Vec<Vec<(CellId, usize)>>,
}

impl<'a> Joint<'a> {
    fn new(x: &'a FinSSet, y: &'a FinSSet) -> Joint<'a> {
        let n = x.len();
        let mut cofaces = x.cofaces();
        cofaces.extend(
            y.cofaces()
                .into_iter()
                .map(|list| list.into_iter().map(|(c, i)| (c + n, i)).collect()),
        );
        Joint { x, y, cofaces }
    }

    fn len(&self) -> usize {
        self.x.len() + self.y.len()
    }

    fn cell(&self, c: usize) -> (&super::Cell, usize) {
        if c < self.x.len() {
            (self.x.cell(c), 0)
        } else {
            (self.y.cell(c - self.x.len()), self.x.len())
        }
    }

    /// Refines until the number of classes stops growing.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<Signature> = (0..self.len())
                .map(|c| {
                    let (cell, offset) = self.cell(c);
                    let faces = cell
                        .faces
                        .iter()
                        .map(|f| (colors[f.base + offset], f.degen.values().to_vec()))
                        .collect();
                    let mut cof: Vec<(u32, usize)> = self.cofaces[c]
                        .iter()
                        .map(|&(d, i)| (colors[d], i))
                        .collect();
                    cof.sort_unstable();
                    (colors[c], faces, cof)
                })
                .collect();
            let mut ids: BTreeMap<&Signature, u32> = BTreeMap::new();
            for s in &sigs {
                ids.insert(s, 0);
            }
            for (n, v) in ids.values_mut().enumerate() {
                *v = n as u32;
            }
            let next: Vec<u32> = sigs.iter().map(|s| ids[s]).collect();
            let next_classes = ids.len();
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    fn search(&self, colors: Vec<u32>) -> Option<Vec<CellId>> {
        let colors = self.refine(colors);
        let n = self.x.len();
        let mut in_x: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        let mut in_y: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (c, &col) in colors.iter().enumerate() {
            if c < n {
                in_x.entry(col).or_default().push(c);
            } else {
                in_y.entry(col).or_default().push(c - n);
            }
        }
        if in_x.len() != in_y.len()
            || in_x
                .iter()
                .any(|(col, xs)| in_y.get(col).is_none_or(|ys| ys.len() != xs.len()))
        {
            return None;
        }
        match in_x.iter().find(|(_, xs)| xs.len() > 1) {
            None => {
                let mut map = vec![0; n];
                for (col, xs) in &in_x {
                    map[xs[0]] = in_y[col][0];
                }
                verify(self.x, self.y, &map).then_some(map)
            }
            Some((col, xs)) => {
                let fresh = colors.iter().max().map_or(0, |m| m + 1);
                let pick = xs[0];
                for &cand in &in_y[col] {
                    let mut next = colors.clone();
                    next[pick] = fresh;
                    next[cand + n] = fresh;
                    if let Some(map) = self.search(next) {
                        return Some(map);
                    }
                }
                None
            }
        }
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// A bijection on cells commuting with every face operator.
fn verify(x: &FinSSet, y: &FinSSet, map: &[CellId]) -> bool {
    let mut seen = vec![false; y.len()];
    for (c, &d) in map.iter().enumerate() {
        if std::mem::replace(&mut seen[d], true) {
            return false;
        }
        let (cx, cy) = (x.cell(c), y.cell(d));
        if cx.dim != cy.dim {
            return false;
        }
        let ok = cx
            .faces
            .iter()
            .zip(&cy.faces)
            .all(|(f, g)| map[f.base] == g.base && f.degen == g.degen);
        if !ok {
            return false;
        }
    }
    true
}

/// An isomorphism `x -> y` respecting the given extra cell colors, as a
/// cell-to-cell map.
pub(crate) fn find_isomorphism_colored(
    x: &FinSSet,
    xcol: &[u32],
    y: &FinSSet,
    ycol: &[u32],
) -> Option<Vec<CellId>> {
    if x.counts() != y.counts() {
        return None;
    }
    let joint = Joint::new(x, y);
    let mut initial: BTreeMap<(usize, u32), u32> = BTreeMap::new();
    let key = |c: usize| -> (usize, u32) {
        if c < x.len() {
            (x.dim(c), xcol[c])
        } else {
            (y.dim(c - x.len()), ycol[c - x.len()])
        }
    };
    for c in 0..joint.len() {
        initial.insert(key(c), 0);
    }
    for (n, v) in initial.values_mut().enumerate() {
        *v = n as u32;
    }
    let colors = (0..joint.len()).map(|c| initial[&key(c)]).collect();
    joint.search(colors)
}

/// An isomorphism `x -> y` as a cell-to-cell map, if one exists.
pub fn find_isomorphism(x: &FinSSet, y: &FinSSet) -> Option<Vec<CellId>> {
    find_isomorphism_colored(x, &vec![0; x.len()], y, &vec![0; y.len()])
}

pub fn isomorphic(x: &FinSSet, y: &FinSSet) -> bool {
    find_isomorphism(x, y).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, horn, standard, Product};
    use std::sync::Arc;

    #[test]
    fn horn_duality() {
        for m in 1..=4 {
            for k in 0..=m {
                let h = horn(m, k).unwrap();
                let dual = horn(m, m - k).unwrap();
                assert!(isomorphic(&h.opposite(), &dual));
                if m > 1 && 2 * k != m {
                    assert!(!isomorphic(&h, &dual), "{m} {k}");
                }
            }
        }
    }

    #[test]
    fn distinguishes_by_shape() {
        assert!(!isomorphic(&standard(2), &boundary(2).unwrap()));
        assert!(isomorphic(&standard(3).opposite(), &standard(3)));
        let sq = Product::new(Arc::new(standard(1)), Arc::new(standard(1)));
        assert!(!isomorphic(&sq.sset, &standard(2)));
    }

    #[test]
    fn product_is_symmetric() {
        let a = Product::new(Arc::new(standard(2)), Arc::new(standard(1)));
        let b = Product::new(Arc::new(standard(1)), Arc::new(standard(2)));
        let map = find_isomorphism(&a.sset, &b.sset).unwrap();
        assert!(verify(&a.sset, &b.sset, &map));
    }
}

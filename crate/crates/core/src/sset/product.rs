use std::sync::Arc;

use itertools::Itertools;
use rustc_hash::FxHashMap;

use super::{Cell, CellId, FinSSet, Simplex};
use crate::delta::{collapse_positions, MonotoneMap};

/// `X × Y` together with the component bookkeeping of each cell.
///
/// A pair of `r`-simplices `(x, y)` is nondegenerate exactly when no
/// position is a repeat position of both degeneracy surjections.
#[derive(Clone, Debug)]
pub struct Product {
    pub sset: Arc<FinSSet>,
    pub left: Arc<FinSSet>,
    pub right: Arc<FinSSet>,
    pairs: Vec<(Simplex, Simplex)>,
    index: FxHashMap<(Simplex, Simplex), CellId>,
}

/// All simplices of one factor up to a dimension, with dense ids.
struct Side {
    /// `simplices[r]` in the order of [`FinSSet::simplices_of_dim`].
    simplices: Vec<Vec<Simplex>>,
    /// Repeat positions as bit sets.
    repeats: Vec<Vec<u64>>,
    /// Ids of the faces in dimension `r - 1`.
    faces: Vec<Vec<Vec<usize>>>,
    texts: Vec<Vec<String>>,
    ids: FxHashMap<Simplex, usize>,
}

fn repeat_mask(s: &Simplex) -> u64 {
    s.degen
        .repeat_positions()
        .iter()
        .fold(0, |m, &k| m | 1 << k)
}

impl Side {
    /// Simplices of `x` of dimension at most `top` with at most `max_repeats`
    /// repeat positions; faces never gain repeats, so this set is closed
    /// under faces.
    fn new(x: &FinSSet, top: usize, max_repeats: usize) -> Side {
        let mut side = Side {
            simplices: Vec::new(),
            repeats: Vec::new(),
            faces: Vec::new(),
            texts: Vec::new(),
            ids: FxHashMap::default(),
        };
        for r in 0..=top {
            let mut xs = Vec::new();
            for (c, cell) in x.cells().iter().enumerate() {
                if cell.dim > r {
                    break;
                }
                if r - cell.dim > max_repeats {
                    continue;
                }
                for collapse in (1..=r).combinations(r - cell.dim) {
                    xs.push(Simplex {
                        base: c,
                        degen: collapse_positions(r, &collapse),
                    });
                }
            }
            let faces = xs
                .iter()
                .map(|s| {
                    if r == 0 {
                        Vec::new()
                    } else {
                        (0..=r).map(|i| side.ids[&x.face(s, i)]).collect()
                    }
                })
                .collect();
            side.faces.push(faces);
            side.repeats.push(xs.iter().map(repeat_mask).collect());
            side.texts.push(
                xs.iter()
                    .map(|s| {
                        if r == 0 {
                            x.label(s.base).to_string()
                        } else {
                            x.simplex_text(s)
                        }
                    })
                    .collect(),
            );
            for (i, s) in xs.iter().enumerate() {
                side.ids.insert(s.clone(), i);
            }
            side.simplices.push(xs);
        }
        side
    }
}

impl Product {
    pub fn new(left: Arc<FinSSet>, right: Arc<FinSSet>) -> Product {
        let size = crate::sset::product_size(&left, &right);
        let mut pairs: Vec<(Simplex, Simplex)> = Vec::with_capacity(size);
        let mut index = FxHashMap::default();
        index.reserve(size);
        let mut cells: Vec<Cell> = Vec::with_capacity(size);
        if !left.is_empty() && !right.is_empty() {
            let top = (left.top_dim() + right.top_dim()) as usize;
            let (ls, rs) = (
                Side::new(&left, top, right.top_dim() as usize),
                Side::new(&right, top, left.top_dim() as usize),
            );
            // ids of the cells of the previous dimension, by factor ids
            let mut below: FxHashMap<(usize, usize), CellId> = FxHashMap::default();
            for r in 0..=top {
                let mut here: FxHashMap<(usize, usize), CellId> = FxHashMap::default();
                for (xi, x) in ls.simplices[r].iter().enumerate() {
                    let xm = ls.repeats[r][xi];
                    for (yi, y) in rs.simplices[r].iter().enumerate() {
                        if xm & rs.repeats[r][yi] != 0 {
                            continue;
                        }
                        let id = cells.len();
                        let faces = if r == 0 {
                            Vec::new()
                        } else {
                            (0..=r)
                                .map(|i| {
                                    let (fx, fy) = (ls.faces[r][xi][i], rs.faces[r][yi][i]);
                                    let common = ls.repeats[r - 1][fx] & rs.repeats[r - 1][fy];
                                    if common == 0 {
                                        return Simplex::nondegenerate(below[&(fx, fy)], r - 1);
                                    }
                                    normalize(
                                        &left,
                                        &right,
                                        &index,
                                        &ls.simplices[r - 1][fx],
                                        &rs.simplices[r - 1][fy],
                                    )
                                    .expect("faces of product cells are earlier cells")
                                })
                                .collect()
                        };
                        let (tx, ty) = (&ls.texts[r][xi], &rs.texts[r][yi]);
                        let mut label = String::with_capacity(tx.len() + ty.len() + 3);
                        label.push('(');
                        label.push_str(tx);
                        label.push(',');
                        label.push_str(ty);
                        label.push(')');
                        cells.push(Cell {
                            dim: r,
                            faces,
                            label,
                        });
                        here.insert((xi, yi), id);
                        index.insert((x.clone(), y.clone()), id);
                        pairs.push((x.clone(), y.clone()));
                    }
                }
                below = here;
            }
        }
        Product {
            sset: Arc::new(FinSSet::from_trusted(cells)),
            left,
            right,
            pairs,
            index,
        }
    }

    /// The components of a nondegenerate cell.
    pub fn pair(&self, c: CellId) -> &(Simplex, Simplex) {
        &self.pairs[c]
    }

    pub fn pairs(&self) -> &[(Simplex, Simplex)] {
        &self.pairs
    }

    /// The normal form of the product simplex `(x, y)`.
    pub fn simplex_of(&self, x: &Simplex, y: &Simplex) -> Option<Simplex> {
        normalize(&self.left, &self.right, &self.index, x, y)
    }

    pub fn cell_of(&self, x: &Simplex, y: &Simplex) -> Option<CellId> {
        self.index.get(&(x.clone(), y.clone())).copied()
    }

    /// The product vertex over a pair of vertex cells.
    pub fn vertex(&self, vx: CellId, vy: CellId) -> CellId {
        vx * self.right.vertex_count() + vy
    }

    /// Components of an arbitrary simplex of the product.
    pub fn components(&self, s: &Simplex) -> (Simplex, Simplex) {
        let (x, y) = &self.pairs[s.base];
        (
            self.left.restrict(x, &s.degen),
            self.right.restrict(y, &s.degen),
        )
    }
}

/// Nondegenerate cells of `X × Y` by dimension, from the cell counts of
/// the factors: an `r`-cell over a `p`-cell and a `q`-cell is a choice of
/// disjoint repeat sets of sizes `r - p` and `r - q`.
pub fn product_counts(x: &[usize], y: &[usize]) -> Vec<usize> {
    let binom = |n: usize, k: usize| -> usize {
        if k > n {
            0
        } else {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
    };
    let mut out = Vec::new();
    for (p, &nx) in x.iter().enumerate() {
        for (q, &ny) in y.iter().enumerate() {
            for r in p.max(q)..=p + q {
                if out.len() <= r {
                    out.resize(r + 1, 0);
                }
                out[r] += nx * ny * binom(r, r - p) * binom(p, r - q);
            }
        }
    }
    out
}

/// Exact number of nondegenerate cells of `X × Y`.
pub fn product_size(x: &FinSSet, y: &FinSSet) -> usize {
    product_counts(&x.counts(), &y.counts()).iter().sum()
}

fn normalize(
    left: &FinSSet,
    right: &FinSSet,
    index: &FxHashMap<(Simplex, Simplex), CellId>,
    x: &Simplex,
    y: &Simplex,
) -> Option<Simplex> {
    if x.dim() != y.dim() {
        return None;
    }
    let r = x.dim();
    let yrep = y.degen.repeat_positions();
    let common: Vec<usize> = x
        .degen
        .repeat_positions()
        .into_iter()
        .filter(|k| yrep.contains(k))
        .collect();
    if common.is_empty() {
        let id = *index.get(&(x.clone(), y.clone()))?;
        return Some(Simplex::nondegenerate(id, r));
    }
    let surj = collapse_positions(r, &common);
    let section: Vec<usize> = (0..=r).filter(|k| !common.contains(k)).collect();
    let section = MonotoneMap::from_raw(section, r as isize);
    let bx = left.restrict(x, &section);
    let by = right.restrict(y, &section);
    let id = *index.get(&(bx, by))?;
    Some(Simplex {
        base: id,
        degen: surj,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Dimension, faces as `(base, degeneracy values)` and label.
    type Row = (usize, Vec<(usize, Vec<usize>)>, String);

    /// Pair enumeration over all candidates, kept as a reference.
    fn reference(left: &FinSSet, right: &FinSSet) -> Vec<Row> {
        let mut out = Vec::new();
        let mut index: std::collections::HashMap<(Simplex, Simplex), usize> = Default::default();
        if left.is_empty() || right.is_empty() {
            return out;
        }
        let top = (left.top_dim() + right.top_dim()) as usize;
        for r in 0..=top {
            for x in left.simplices_of_dim(r) {
                for y in right.simplices_of_dim(r) {
                    let (xr, yr) = (x.degen.repeat_positions(), y.degen.repeat_positions());
                    if xr.iter().any(|k| yr.contains(k)) {
                        continue;
                    }
                    let faces = if r == 0 {
                        Vec::new()
                    } else {
                        (0..=r)
                            .map(|i| {
                                let (fx, fy) = (left.face(&x, i), right.face(&y, i));
                                let common: Vec<usize> = fx
                                    .degen
                                    .repeat_positions()
                                    .into_iter()
                                    .filter(|k| fy.degen.repeat_positions().contains(k))
                                    .collect();
                                let section: Vec<usize> =
                                    (0..r).filter(|k| !common.contains(k)).collect();
                                let section = MonotoneMap::from_raw(section, r as isize - 1);
                                let base = index[&(
                                    left.restrict(&fx, &section),
                                    right.restrict(&fy, &section),
                                )];
                                (base, collapse_positions(r - 1, &common).values().to_vec())
                            })
                            .collect()
                    };
                    let label = if r == 0 {
                        format!("({},{})", left.label(x.base), right.label(y.base))
                    } else {
                        format!("({},{})", left.simplex_text(&x), right.simplex_text(&y))
                    };
                    index.insert((x.clone(), y), out.len());
                    out.push((r, faces, label));
                }
            }
        }
        out
    }

    #[test]
    fn agrees_with_reference_enumeration() {
        let objects = [
            Arc::new(standard(0)),
            Arc::new(standard(2)),
            Arc::new(standard(3)),
            Arc::new(crate::sset::horn(3, 1).unwrap()),
            Arc::new(crate::sset::boundary(2).unwrap()),
        ];
        for a in &objects {
            for b in &objects {
                let p = Product::new(a.clone(), b.clone());
                let got: Vec<Row> = p
                    .sset
                    .cells()
                    .iter()
                    .map(|c| {
                        let faces = c
                            .faces
                            .iter()
                            .map(|f| (f.base, f.degen.values().to_vec()))
                            .collect();
                        (c.dim, faces, c.label.clone())
                    })
                    .collect();
                assert_eq!(got, reference(a, b));
            }
        }
    }

    #[test]
    fn square_has_two_triangles() {
        let p = Product::new(Arc::new(standard(1)), Arc::new(standard(1)));
        assert_eq!(p.sset.counts(), vec![4, 5, 2]);
    }

    #[test]
    fn top_cells_are_shuffles() {
        for a in 0..=4usize {
            for b in 0..=4usize {
                let p = Product::new(
                    Arc::new(standard(a as isize)),
                    Arc::new(standard(b as isize)),
                );
                assert_eq!(p.sset.top_dim(), (a + b) as isize);
                assert_eq!(p.sset.cells_of_dim(a + b).len(), binom(a + b, a));
            }
        }
    }

    #[test]
    fn point_is_a_unit() {
        let x = Arc::new(crate::sset::horn(3, 1).unwrap());
        let p = Product::new(Arc::new(standard(0)), x.clone());
        assert!(crate::sset::isomorphic(&p.sset, &x));
    }

    #[test]
    fn empty_factor() {
        let p = Product::new(Arc::new(standard(-1)), Arc::new(standard(2)));
        assert!(p.sset.is_empty());
    }

    #[test]
    fn vertex_numbering() {
        let p = Product::new(Arc::new(standard(3)), Arc::new(standard(2)));
        for i in 0..4 {
            for j in 0..3 {
                let v = p.vertex(i, j);
                assert_eq!(p.pair(v).0.base, i);
                assert_eq!(p.pair(v).1.base, j);
            }
        }
    }

    #[test]
    fn product_identities_hold() {
        let p = Product::new(
            Arc::new(standard(2)),
            Arc::new(crate::sset::horn(2, 0).unwrap()),
        );
        FinSSet::new(p.sset.cells().to_vec()).unwrap();
    }
}

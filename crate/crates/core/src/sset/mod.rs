//! Finite simplicial sets presented by their nondegenerate simplices.
//!
//! Every simplex is kept in Eilenberg–Zilber normal form: a nondegenerate
//! cell together with a surjection `[r] -> [dim cell]` (equivalently a
//! strictly decreasing degeneracy word). Equality of simplices is equality
//! of normal forms.

pub(crate) mod iso;
mod join;
mod json;
mod maps;
mod product;
mod standard;

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::delta::{ez_factorize, MonotoneMap};
use crate::error::{Error, Result};

pub use iso::{find_isomorphism, isomorphic};
pub use join::Join;
pub use json::SSetJson;
pub use maps::{count_maps, enumerate_maps, search_maps, SSetMap};
pub use product::{product_counts, product_size, Product};
pub use standard::{boundary, horn, standard};

pub type CellId = usize;

/// A set of nondegenerate cells of some ambient simplicial set.
pub type CellSet = BTreeSet<CellId>;

/// A simplex in normal form: `base ∘ degen` with `degen` surjective.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex {
    pub base: CellId,
    pub degen: MonotoneMap,
}

impl Simplex {
    pub fn nondegenerate(base: CellId, dim: usize) -> Simplex {
        Simplex {
            base,
            degen: MonotoneMap::identity(dim as isize),
        }
    }

    pub fn dim(&self) -> usize {
        self.degen.domain_dim() as usize
    }

    pub fn base_dim(&self) -> usize {
        self.degen.codomain_dim() as usize
    }

    pub fn is_degenerate(&self) -> bool {
        self.degen.domain_dim() != self.degen.codomain_dim()
    }

    pub fn degeneracy_word(&self) -> Vec<usize> {
        self.degen.degeneracy_word()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            write!(f, "#{}·s{:?}", self.base, self.degeneracy_word())
        } else {
            write!(f, "#{}", self.base)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    /// `d_0, ..., d_dim`; empty for vertices.
    pub faces: Vec<Simplex>,
    pub label: String,
}

/// A finite simplicial set. Cells are numbered in order of nondecreasing
/// dimension, so vertices are `0..vertex_count()`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FinSSet {
    cells: Vec<Cell>,
    by_dim: Vec<Vec<CellId>>,
    vertices: Vec<Vec<CellId>>,
}

impl FinSSet {
    pub fn empty() -> FinSSet {
        FinSSet::default()
    }

    /// Validates face data (references, dimensions, normal forms and the
    /// simplicial identities) and builds the object.
    pub fn new(cells: Vec<Cell>) -> Result<FinSSet> {
        let mut by_dim: Vec<Vec<CellId>> = Vec::new();
        for (id, cell) in cells.iter().enumerate() {
            if id > 0 && cells[id - 1].dim > cell.dim {
                return Err(Error::Malformed(format!(
                    "cells must be ordered by dimension (cell {id})"
                )));
            }
            let expected = if cell.dim == 0 { 0 } else { cell.dim + 1 };
            if cell.faces.len() != expected {
                return Err(Error::Malformed(format!(
                    "cell {id} of dimension {} has {} faces",
                    cell.dim,
                    cell.faces.len()
                )));
            }
            for face in &cell.faces {
                if face.base >= id {
                    return Err(Error::Malformed(format!(
                        "cell {id} has a face on cell {} which is not of lower dimension",
                        face.base
                    )));
                }
                if face.dim() + 1 != cell.dim
                    || cells[face.base].dim as isize != face.degen.codomain_dim()
                    || !face.degen.is_surjective()
                {
                    return Err(Error::Malformed(format!(
                        "cell {id}: face {face} is not a normal-form simplex of dimension {}",
                        cell.dim - 1
                    )));
                }
            }
            while by_dim.len() <= cell.dim {
                by_dim.push(Vec::new());
            }
            by_dim[cell.dim].push(id);
        }
        let mut sset = FinSSet {
            cells,
            by_dim,
            vertices: Vec::new(),
        };
        sset.check_identities()?;
        sset.fill_vertices();
        Ok(sset)
    }

    /// Faces are assumed valid; used by constructions that produce
    /// correct data by design and are covered by tests.
    pub(crate) fn from_trusted(cells: Vec<Cell>) -> FinSSet {
        let mut by_dim: Vec<Vec<CellId>> = Vec::new();
        for (id, cell) in cells.iter().enumerate() {
            while by_dim.len() <= cell.dim {
                by_dim.push(Vec::new());
            }
            by_dim[cell.dim].push(id);
        }
        let mut sset = FinSSet {
            cells,
            by_dim,
            vertices: Vec::new(),
        };
        sset.fill_vertices();
        debug_assert!(sset.check_identities().is_ok());
        sset
    }

    fn fill_vertices(&mut self) {
        self.vertices.clear();
        for c in 0..self.cells.len() {
            let v = self.compute_vertices(c);
            self.vertices.push(v);
        }
    }

    fn compute_vertices(&self, c: CellId) -> Vec<CellId> {
        let cell = &self.cells[c];
        if cell.dim == 0 {
            return vec![c];
        }
        // d_dim drops the last vertex, d_0 the first.
        let front = &cell.faces[cell.dim];
        let back = &cell.faces[0];
        let mut out: Vec<CellId> = (0..cell.dim).map(|i| self.vertex_of(front, i)).collect();
        out.push(self.vertex_of(back, cell.dim - 1));
        out
    }

    fn vertex_of(&self, s: &Simplex, i: usize) -> CellId {
        self.vertices[s.base][s.degen.at(i)]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `-1` for the empty simplicial set.
    pub fn top_dim(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, c: CellId) -> &Cell {
        &self.cells[c]
    }

    pub fn dim(&self, c: CellId) -> usize {
        self.cells[c].dim
    }

    pub fn label(&self, c: CellId) -> &str {
        &self.cells[c].label
    }

    pub fn cells_of_dim(&self, r: usize) -> &[CellId] {
        self.by_dim.get(r).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of nondegenerate cells in each dimension.
    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.cells_of_dim(0).len()
    }

    pub fn cell_simplex(&self, c: CellId) -> Simplex {
        Simplex::nondegenerate(c, self.cells[c].dim)
    }

    /// Vertex cells of a nondegenerate cell, in order.
    pub fn cell_vertices(&self, c: CellId) -> &[CellId] {
        &self.vertices[c]
    }

    /// Vertex cells of an arbitrary simplex, in order.
    pub fn vertices(&self, s: &Simplex) -> Vec<CellId> {
        s.degen
            .values()
            .iter()
            .map(|&v| self.vertices[s.base][v])
            .collect()
    }

    /// Human-readable form: the vertex label for a vertex, otherwise the
    /// bracketed list of vertex labels.
    pub fn simplex_text(&self, s: &Simplex) -> String {
        if s.dim() == 0 {
            return self.cells[s.base].label.clone();
        }
        format!(
            "[{}]",
            self.vertices(s)
                .iter()
                .map(|&v| self.cells[v].label.as_str())
                .join(" ")
        )
    }

    /// `d_i` of a simplex.
    pub fn face(&self, s: &Simplex, i: usize) -> Simplex {
        debug_assert!(s.dim() >= 1 && i <= s.dim());
        match s.degen.face_split(i) {
            (None, rest) => Simplex {
                base: s.base,
                degen: rest,
            },
            (Some(j), rest) => {
                let f = &self.cells[s.base].faces[j];
                Simplex {
                    base: f.base,
                    degen: f.degen.after(&rest).expect("normal form composes"),
                }
            }
        }
    }

    /// The simplex `s ∘ theta`.
    pub fn restrict(&self, s: &Simplex, theta: &MonotoneMap) -> Simplex {
        let composite = s.degen.after(theta).expect("restriction dimensions agree");
        let (surj, inj) = ez_factorize(&composite);
        let base = self.restrict_injective(s.base, &inj);
        Simplex {
            base: base.base,
            degen: base.degen.after(&surj).expect("normal form composes"),
        }
    }

    /// `cell ∘ inj` for a strictly increasing `inj`, walking down faces.
    fn restrict_injective(&self, cell: CellId, inj: &MonotoneMap) -> Simplex {
        let n = self.cells[cell].dim;
        if inj.domain_dim() == n as isize {
            return self.cell_simplex(cell);
        }
        let values = inj.values();
        let missing = (0..=n).find(|v| values.binary_search(v).is_err()).unwrap();
        let rest: Vec<usize> = values
            .iter()
            .map(|&v| if v > missing { v - 1 } else { v })
            .collect();
        let rest = MonotoneMap::from_raw(rest, n as isize - 1);
        let face = &self.cells[cell].faces[missing];
        self.restrict(face, &rest)
    }

    /// All `r`-simplices, degenerate ones included, ordered by base cell and
    /// then by degeneracy.
    pub fn simplices_of_dim(&self, r: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.dim > r {
                break;
            }
            for collapse in (1..=r).combinations(r - cell.dim) {
                out.push(Simplex {
                    base: c,
                    degen: crate::delta::collapse_positions(r, &collapse),
                });
            }
        }
        out
    }

    /// Exhaustive check of `d_i d_j = d_{j-1} d_i` for `i < j`.
    pub fn check_identities(&self) -> Result<()> {
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.dim < 2 {
                continue;
            }
            for j in 0..=cell.dim {
                for i in 0..j {
                    let lhs = self.face(&cell.faces[j], i);
                    let rhs = self.face(&cell.faces[i], j - 1);
                    if lhs != rhs {
                        return Err(Error::Malformed(format!(
                            "cell {c}: d_{i} d_{j} = {lhs} but d_{} d_{i} = {rhs}",
                            j - 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Smallest face-closed set containing `seeds`.
    pub fn closure(&self, seeds: impl IntoIterator<Item = CellId>) -> Result<CellSet> {
        let mut out = CellSet::new();
        let mut stack: Vec<CellId> = Vec::new();
        for s in seeds {
            if s >= self.cells.len() {
                return Err(Error::UnknownCell(s));
            }
            stack.push(s);
        }
        while let Some(c) = stack.pop() {
            if out.insert(c) {
                stack.extend(self.cells[c].faces.iter().map(|f| f.base));
            }
        }
        Ok(out)
    }

    pub fn is_subcomplex(&self, set: &CellSet) -> bool {
        set.iter().all(|&c| {
            c < self.cells.len() && self.cells[c].faces.iter().all(|f| set.contains(&f.base))
        })
    }

    pub fn all_cells(&self) -> CellSet {
        (0..self.cells.len()).collect()
    }

    /// The subcomplex on a face-closed cell set, with the inclusion as a
    /// map from new cell ids to ambient ids. Cell order and labels are kept.
    pub fn realize(&self, set: &CellSet) -> Result<(FinSSet, Vec<CellId>)> {
        if let Some(&bad) = set.iter().find(|&&c| c >= self.cells.len()) {
            return Err(Error::UnknownCell(bad));
        }
        if !self.is_subcomplex(set) {
            return Err(Error::Malformed(
                "cell set is not closed under faces".into(),
            ));
        }
        let inclusion: Vec<CellId> = set.iter().copied().collect();
        let mut renumber = vec![usize::MAX; self.cells.len()];
        for (new, &old) in inclusion.iter().enumerate() {
            renumber[old] = new;
        }
        let cells = inclusion
            .iter()
            .map(|&old| {
                let cell = &self.cells[old];
                Cell {
                    dim: cell.dim,
                    faces: cell
                        .faces
                        .iter()
                        .map(|f| Simplex {
                            base: renumber[f.base],
                            degen: f.degen.clone(),
                        })
                        .collect(),
                    label: cell.label.clone(),
                }
            })
            .collect();
        Ok((FinSSet::from_trusted(cells), inclusion))
    }

    /// `X^op`: same cells, with `d_i` replaced by `d_{r-i}`.
    pub fn opposite(&self) -> FinSSet {
        let cells = self
            .cells
            .iter()
            .map(|cell| Cell {
                dim: cell.dim,
                faces: (0..cell.faces.len())
                    .map(|i| opposite_simplex(&cell.faces[cell.dim - i]))
                    .collect(),
                label: cell.label.clone(),
            })
            .collect();
        FinSSet::from_trusted(cells)
    }

    /// Cells having `c` as the base of some face, with the face index.
    pub fn cofaces(&self) -> Vec<Vec<(CellId, usize)>> {
        let mut out = vec![Vec::new(); self.cells.len()];
        for (c, cell) in self.cells.iter().enumerate() {
            for (i, f) in cell.faces.iter().enumerate() {
                out[f.base].push((c, i));
            }
        }
        out
    }
}

/// Lookup of simplices by vertex sequence, for objects in which a
/// nondegenerate simplex is determined by its vertices (nerves of posets,
/// products and joins of simplices).
#[derive(Clone, Debug, Default)]
pub struct NerveIndex {
    by_vertices: std::collections::HashMap<Vec<CellId>, CellId>,
}

impl NerveIndex {
    pub fn new(x: &FinSSet) -> NerveIndex {
        let by_vertices = (0..x.len())
            .map(|c| (x.cell_vertices(c).to_vec(), c))
            .collect();
        NerveIndex { by_vertices }
    }

    pub fn cell(&self, vertices: &[CellId]) -> Option<CellId> {
        self.by_vertices.get(vertices).copied()
    }

    /// The simplex with the given vertex sequence; repeated consecutive
    /// vertices become degeneracies.
    pub fn simplex(&self, vertices: &[CellId]) -> Option<Simplex> {
        if vertices.is_empty() {
            return None;
        }
        let mut distinct: Vec<CellId> = Vec::with_capacity(vertices.len());
        let mut values = Vec::with_capacity(vertices.len());
        for &v in vertices {
            if distinct.last() != Some(&v) {
                distinct.push(v);
            }
            values.push(distinct.len() - 1);
        }
        let base = self.cell(&distinct)?;
        Some(Simplex {
            base,
            degen: MonotoneMap::from_raw(values, distinct.len() as isize - 1),
        })
    }
}

/// The simplex of `X^op` corresponding to `s` in `X`.
pub fn opposite_simplex(s: &Simplex) -> Simplex {
    Simplex {
        base: s.base,
        degen: s.degen.opposite(),
    }
}

pub fn union(a: &CellSet, b: &CellSet) -> CellSet {
    a.union(b).copied().collect()
}

pub fn intersection(a: &CellSet, b: &CellSet) -> CellSet {
    a.intersection(b).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_counts() {
        assert_eq!(standard(2).counts(), vec![3, 3, 1]);
        assert_eq!(horn(2, 1).unwrap().counts(), vec![3, 2]);
        assert!(standard(-1).is_empty());
        assert_eq!(standard(-1).top_dim(), -1);
        assert_eq!(boundary(0).unwrap().len(), 0);
    }

    #[test]
    fn horn_keeps_edges() {
        let h = horn(2, 1).unwrap();
        let labels: Vec<&str> = h.cells_of_dim(1).iter().map(|&c| h.label(c)).collect();
        assert_eq!(labels, vec!["[0 1]", "[1 2]"]);
    }

    #[test]
    fn parameter_ranges() {
        assert!(horn(2, 3).is_err());
        assert!(horn(0, 0).is_err());
        assert!(boundary(-1).is_err());
    }

    #[test]
    fn restriction_through_degeneracies() {
        let d2 = standard(2);
        let top = d2.cell_simplex(6);
        let theta = MonotoneMap::new(vec![0, 0, 2], 2).unwrap();
        let s = d2.restrict(&top, &theta);
        assert_eq!(d2.vertices(&s), vec![0, 0, 2]);
        assert!(s.is_degenerate());
        assert_eq!(d2.simplex_text(&s), "[0 0 2]");
        assert_eq!(s.degeneracy_word(), vec![0]);
    }

    #[test]
    fn closure_and_realize() {
        let d2 = standard(2);
        let edge = d2.cells_of_dim(1)[0];
        let set = d2.closure([edge]).unwrap();
        assert_eq!(set.len(), 3);
        assert!(d2.is_subcomplex(&set));
        let (sub, inc) = d2.realize(&set).unwrap();
        assert_eq!(sub.counts(), vec![2, 1]);
        assert_eq!(inc.len(), 3);
        assert!(d2.closure([99]).is_err());
        let not_closed: CellSet = [edge].into_iter().collect();
        assert!(d2.realize(&not_closed).is_err());
        assert_eq!(intersection(&set, &set), set);
    }

    #[test]
    fn face_agrees_with_restriction() {
        for x in [
            standard(3),
            crate::sset::horn(3, 2).unwrap(),
            crate::sset::boundary(2).unwrap(),
        ] {
            for r in 1..=5 {
                for s in x.simplices_of_dim(r) {
                    for i in 0..=r {
                        let coface = crate::delta::face(r as isize, i).unwrap();
                        assert_eq!(x.face(&s, i), x.restrict(&s, &coface));
                    }
                }
            }
        }
    }

    #[test]
    fn simplices_of_dim_counts() {
        // r-simplices of Δ[n] are monotone maps [r] -> [n]: C(n+r+1, r+1).
        let d2 = standard(2);
        assert_eq!(d2.simplices_of_dim(0).len(), 3);
        assert_eq!(d2.simplices_of_dim(1).len(), 6);
        assert_eq!(d2.simplices_of_dim(2).len(), 10);
        assert_eq!(d2.simplices_of_dim(3).len(), 15);
    }

    #[test]
    fn malformed_faces_rejected() {
        let v = |l: &str| Cell {
            dim: 0,
            faces: vec![],
            label: l.into(),
        };
        let bad_edge = Cell {
            dim: 1,
            faces: vec![Simplex::nondegenerate(0, 0)],
            label: "e".into(),
        };
        assert!(FinSSet::new(vec![v("a"), v("b"), bad_edge]).is_err());
        let loop_edge = Cell {
            dim: 1,
            faces: vec![Simplex::nondegenerate(0, 0), Simplex::nondegenerate(0, 0)],
            label: "loop".into(),
        };
        let circle = FinSSet::new(vec![v("a"), loop_edge]).unwrap();
        assert_eq!(circle.cell_vertices(1), &[0, 0]);
        // a triangle whose faces disagree on vertices
        let e = |a: usize, b: usize| Cell {
            dim: 1,
            faces: vec![Simplex::nondegenerate(b, 0), Simplex::nondegenerate(a, 0)],
            label: format!("{a}{b}"),
        };
        let tri = Cell {
            dim: 2,
            faces: vec![
                Simplex::nondegenerate(5, 1),
                Simplex::nondegenerate(4, 1),
                Simplex::nondegenerate(4, 1),
            ],
            label: "t".into(),
        };
        let cells = vec![v("0"), v("1"), v("2"), e(0, 1), e(0, 2), e(1, 2), tri];
        assert!(FinSSet::new(cells).is_err());
    }

    #[test]
    fn opposite_reverses_vertices() {
        let d2 = standard(2);
        let op = d2.opposite();
        assert_eq!(op.cell_vertices(6), &[2, 1, 0]);
        assert_eq!(op.opposite(), d2);
    }
}

//! Simplicial sets with marking.
//!
//! A marking is stored as a flag per nondegenerate cell; degenerate
//! simplices are always marked and vertices never are.

mod gadgets;
mod tensor;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sset::iso::find_isomorphism_colored;
use crate::sset::{CellId, CellSet, FinSSet, SSetJson, SSetMap, Simplex};

pub use gadgets::{gadget, transport_to_standard, Gadget};
pub use tensor::{
    cleaves, is_crushed_cylinder, is_mediator, join_marked, join_marked_with, pretensor,
    pretensor_on, product_marked, product_marked_on, tensor, tensor_on,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSSet {
    pub underlying: Arc<FinSSet>,
    marked: Vec<bool>,
}

impl MarkedSSet {
    /// Only degenerate simplices marked.
    pub fn minimal(underlying: Arc<FinSSet>) -> MarkedSSet {
        let marked = vec![false; underlying.len()];
        MarkedSSet { underlying, marked }
    }

    /// Every positive-dimensional simplex marked.
    pub fn maximal(underlying: Arc<FinSSet>) -> MarkedSSet {
        let marked = (0..underlying.len())
            .map(|c| underlying.dim(c) > 0)
            .collect();
        MarkedSSet { underlying, marked }
    }

    pub fn new(underlying: Arc<FinSSet>, marked: &CellSet) -> Result<MarkedSSet> {
        let mut flags = vec![false; underlying.len()];
        for &c in marked {
            if c >= underlying.len() {
                return Err(Error::UnknownCell(c));
            }
            if underlying.dim(c) == 0 {
                return Err(Error::Malformed(format!(
                    "vertex {c} ({}) cannot be marked",
                    underlying.label(c)
                )));
            }
            flags[c] = true;
        }
        Ok(MarkedSSet {
            underlying,
            marked: flags,
        })
    }

    /// Marks the positive-dimensional cells accepted by `pred`.
    pub fn from_predicate(
        underlying: Arc<FinSSet>,
        mut pred: impl FnMut(CellId) -> bool,
    ) -> MarkedSSet {
        let marked = (0..underlying.len())
            .map(|c| underlying.dim(c) > 0 && pred(c))
            .collect();
        MarkedSSet { underlying, marked }
    }

    pub fn len(&self) -> usize {
        self.underlying.len()
    }

    pub fn is_empty(&self) -> bool {
        self.underlying.is_empty()
    }

    pub fn is_cell_marked(&self, c: CellId) -> bool {
        self.marked[c]
    }

    pub fn is_marked(&self, s: &Simplex) -> bool {
        s.dim() > 0 && (s.is_degenerate() || self.marked[s.base])
    }

    pub fn marked_cells(&self) -> CellSet {
        (0..self.marked.len()).filter(|&c| self.marked[c]).collect()
    }

    pub fn marked_count(&self) -> usize {
        self.marked.iter().filter(|&&b| b).count()
    }

    pub fn marked_of_dim(&self, r: usize) -> Vec<CellId> {
        self.underlying
            .cells_of_dim(r)
            .iter()
            .copied()
            .filter(|&c| self.marked[c])
            .collect()
    }

    /// Same underlying object with more cells marked; returns the cells
    /// that were newly marked.
    pub fn add_marks(&mut self, cells: impl IntoIterator<Item = CellId>) -> Result<CellSet> {
        let mut added = CellSet::new();
        for c in cells {
            if c >= self.len() {
                return Err(Error::UnknownCell(c));
            }
            if self.underlying.dim(c) == 0 {
                return Err(Error::Malformed(format!("vertex {c} cannot be marked")));
            }
            if !std::mem::replace(&mut self.marked[c], true) {
                added.insert(c);
            }
        }
        Ok(added)
    }

    pub fn with_marks(&self, cells: impl IntoIterator<Item = CellId>) -> Result<MarkedSSet> {
        let mut out = self.clone();
        out.add_marks(cells)?;
        Ok(out)
    }

    /// Whether every mark of `self` is a mark of `other`, over the same cells.
    pub fn marks_within(&self, other: &MarkedSSet) -> bool {
        self.len() == other.len() && (0..self.len()).all(|c| !self.marked[c] || other.marked[c])
    }

    pub fn same_underlying(&self, other: &MarkedSSet) -> bool {
        Arc::ptr_eq(&self.underlying, &other.underlying) || self.underlying == other.underlying
    }

    /// The marked subobject on a face-closed cell set, with its inclusion.
    pub fn restrict_to(&self, set: &CellSet) -> Result<(MarkedSSet, Vec<CellId>)> {
        let (sub, inclusion) = self.underlying.realize(set)?;
        let marked = inclusion.iter().map(|&c| self.marked[c]).collect();
        Ok((
            MarkedSSet {
                underlying: Arc::new(sub),
                marked,
            },
            inclusion,
        ))
    }

    /// Opposite underlying object, marks carried along the cell bijection.
    pub fn opposite(&self) -> MarkedSSet {
        MarkedSSet {
            underlying: Arc::new(self.underlying.opposite()),
            marked: self.marked.clone(),
        }
    }

    pub fn to_json(&self) -> SSetJson {
        let mut j = SSetJson::from_sset(&self.underlying);
        j.marked = Some(self.marked_cells().into_iter().collect());
        j
    }

    pub fn from_json(j: &SSetJson) -> Result<MarkedSSet> {
        let x = Arc::new(j.to_sset()?);
        let marks: CellSet = j.marked.iter().flatten().copied().collect();
        MarkedSSet::new(x, &marks)
    }

    /// Marked cells per dimension.
    pub fn marked_counts(&self) -> Vec<usize> {
        (0..self.underlying.counts().len())
            .map(|r| self.marked_of_dim(r).len())
            .collect()
    }
}

pub fn opposite_marked(x: &MarkedSSet) -> MarkedSSet {
    x.opposite()
}

/// An isomorphism of marked objects as a cell-to-cell map.
pub fn find_marked_isomorphism(x: &MarkedSSet, y: &MarkedSSet) -> Option<Vec<CellId>> {
    let colors = |m: &MarkedSSet| -> Vec<u32> { m.marked.iter().map(|&b| b as u32).collect() };
    find_isomorphism_colored(&x.underlying, &colors(x), &y.underlying, &colors(y))
}

pub fn isomorphic_marked(x: &MarkedSSet, y: &MarkedSSet) -> bool {
    find_marked_isomorphism(x, y).is_some()
}

/// A simplicial map that preserves the marking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedMap {
    pub domain: MarkedSSet,
    pub codomain: MarkedSSet,
    pub map: SSetMap,
}

impl MarkedMap {
    pub fn new(
        domain: MarkedSSet,
        codomain: MarkedSSet,
        assignment: Vec<Simplex>,
    ) -> Result<MarkedMap> {
        let map = SSetMap::new(
            domain.underlying.clone(),
            codomain.underlying.clone(),
            assignment,
        )?;
        MarkedMap::from_map(domain, codomain, map)
    }

    pub fn from_map(domain: MarkedSSet, codomain: MarkedSSet, map: SSetMap) -> Result<MarkedMap> {
        if let Some(c) = first_unpreserved(&domain, &codomain, &map.assignment) {
            return Err(Error::MarkingNotPreserved {
                cell: c,
                label: domain.underlying.label(c).to_string(),
            });
        }
        Ok(MarkedMap {
            domain,
            codomain,
            map,
        })
    }

    /// The identity on underlying objects, from `domain` to a marking that
    /// must contain its marks.
    pub fn entire(domain: MarkedSSet, codomain: MarkedSSet) -> Result<MarkedMap> {
        if !domain.same_underlying(&codomain) {
            return Err(Error::NotEntire("underlying objects differ".into()));
        }
        let map = SSetMap::identity(domain.underlying.clone());
        MarkedMap::from_map(domain, codomain, map)
    }

    /// Inclusion of a marked subobject given by its cells.
    pub fn inclusion(
        domain: MarkedSSet,
        codomain: MarkedSSet,
        cells: &[CellId],
    ) -> Result<MarkedMap> {
        let map = SSetMap::from_cells(
            domain.underlying.clone(),
            codomain.underlying.clone(),
            cells,
        )?;
        if !map.is_inclusion() {
            return Err(Error::NotInclusion(
                "cells are not mapped injectively".into(),
            ));
        }
        MarkedMap::from_map(domain, codomain, map)
    }

    pub fn apply(&self, s: &Simplex) -> Simplex {
        self.map.apply(s)
    }

    /// The map sending each cell to the codomain cell with the same label.
    /// Codomain labels must be unique.
    pub fn by_labels(domain: MarkedSSet, codomain: MarkedSSet) -> Result<MarkedMap> {
        let mut index = std::collections::HashMap::new();
        for c in 0..codomain.len() {
            if index.insert(codomain.underlying.label(c), c).is_some() {
                return Err(Error::NotInclusion(format!(
                    "label {} occurs twice in the codomain",
                    codomain.underlying.label(c)
                )));
            }
        }
        let cells = (0..domain.len())
            .map(|c| {
                let label = domain.underlying.label(c);
                index.get(label).copied().ok_or_else(|| {
                    Error::NotInclusion(format!("no cell labelled {label} in the codomain"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MarkedMap::inclusion(domain, codomain, &cells)
    }

    /// Identity on underlying cells.
    pub fn is_entire(&self) -> bool {
        self.domain.same_underlying(&self.codomain)
            && self
                .map
                .assignment
                .iter()
                .enumerate()
                .all(|(c, s)| s.base == c && !s.is_degenerate())
    }

    pub fn is_inclusion(&self) -> bool {
        self.map.is_inclusion()
    }

    /// Cells of the codomain hit by a nondegenerate image, for inclusions.
    pub fn image_cells(&self) -> Vec<CellId> {
        self.map.assignment.iter().map(|s| s.base).collect()
    }

    /// Marked cells of the codomain that are the image of an unmarked cell,
    /// for inclusions.
    pub fn new_marks(&self) -> CellSet {
        self.map
            .assignment
            .iter()
            .enumerate()
            .filter(|(c, s)| {
                !s.is_degenerate()
                    && !self.domain.is_cell_marked(*c)
                    && self.codomain.is_cell_marked(s.base)
            })
            .map(|(_, s)| s.base)
            .collect()
    }
}

/// The first marked domain cell whose image is not marked.
pub fn first_unpreserved(
    domain: &MarkedSSet,
    codomain: &MarkedSSet,
    assignment: &[Simplex],
) -> Option<CellId> {
    (0..domain.len()).find(|&c| domain.is_cell_marked(c) && !codomain.is_marked(&assignment[c]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedSummary {
    pub cells: Vec<usize>,
    pub marked: Vec<usize>,
}

impl MarkedSSet {
    pub fn summary(&self) -> MarkedSummary {
        MarkedSummary {
            cells: self.underlying.counts(),
            marked: self.marked_counts(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::standard;

    #[test]
    fn degenerate_always_marked() {
        let x = MarkedSSet::minimal(Arc::new(standard(1)));
        let s = x.underlying.restrict(
            &x.underlying.cell_simplex(0),
            &crate::delta::MonotoneMap::constant(1, 0, 0).unwrap(),
        );
        assert!(x.is_marked(&s));
        assert!(!x.is_marked(&x.underlying.cell_simplex(2)));
        assert!(!x.is_marked(&x.underlying.cell_simplex(0)));
    }

    #[test]
    fn vertices_cannot_be_marked() {
        let x = Arc::new(standard(1));
        assert!(MarkedSSet::new(x.clone(), &[0].into_iter().collect()).is_err());
        assert!(MarkedSSet::new(x, &[2].into_iter().collect()).is_ok());
    }

    #[test]
    fn marked_maps() {
        let d1 = Arc::new(standard(1));
        let t = MarkedSSet::maximal(d1.clone());
        let plain = MarkedSSet::minimal(d1);
        assert!(MarkedMap::entire(plain.clone(), t.clone()).is_ok());
        let err = MarkedMap::entire(t.clone(), plain.clone()).unwrap_err();
        assert!(matches!(err, Error::MarkingNotPreserved { cell: 2, .. }));
        let m = MarkedMap::entire(plain, t).unwrap();
        assert!(m.is_entire());
        assert_eq!(m.new_marks().into_iter().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn json_round_trip() {
        let x = gadget(&Gadget::Delta3Eq).unwrap();
        let j = x.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = MarkedSSet::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, x);
    }
}

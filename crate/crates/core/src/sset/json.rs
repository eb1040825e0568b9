//! JSON form of a finite simplicial set.
//!
//! ```json
//! {
//!   "dims":   [3, 3, 1],
//!   "cells":  {"0": [0, 1, 2], "1": [3, 4, 5], "2": [6]},
//!   "faces":  {"3": [{"base": 1, "degeneracy": []}, {"base": 0, "degeneracy": []}], ...},
//!   "labels": {"0": "0", "3": "[0 1]", ...},
//!   "marked": [6]
//! }
//! ```
//!
//! `dims[r]` is the number of nondegenerate `r`-cells and `cells[r]` lists
//! their ids; ids are numbered by nondecreasing dimension. `faces[c]` lists
//! `d_0 c, ..., d_r c` for positive-dimensional `c`, each as a base cell and
//! a strictly decreasing degeneracy word. `marked` is present only for
//! objects with marking.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Cell, FinSSet, Simplex};
use crate::delta::MonotoneMap;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceJson {
    pub base: usize,
    pub degeneracy: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SSetJson {
    pub dims: Vec<usize>,
    pub cells: BTreeMap<usize, Vec<usize>>,
    pub faces: BTreeMap<usize, Vec<FaceJson>>,
    pub labels: BTreeMap<usize, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<usize>>,
}

impl SSetJson {
    pub fn from_sset(x: &FinSSet) -> SSetJson {
        let counts = x.counts();
        let cells = (0..counts.len())
            .map(|r| (r, x.cells_of_dim(r).to_vec()))
            .collect();
        let faces = (0..x.len())
            .filter(|&c| x.dim(c) > 0)
            .map(|c| {
                let list = x
                    .cell(c)
                    .faces
                    .iter()
                    .map(|f| FaceJson {
                        base: f.base,
                        degeneracy: f.degeneracy_word(),
                    })
                    .collect();
                (c, list)
            })
            .collect();
        let labels = (0..x.len()).map(|c| (c, x.label(c).to_string())).collect();
        SSetJson {
            dims: counts,
            cells,
            faces,
            labels,
            marked: None,
        }
    }

    /// Rebuilds and validates the simplicial set.
    pub fn to_sset(&self) -> Result<FinSSet> {
        let total: usize = self.dims.iter().sum();
        let mut dim_of = vec![usize::MAX; total];
        for (&r, ids) in &self.cells {
            if self.dims.get(r) != Some(&ids.len()) {
                return Err(Error::Malformed(format!(
                    "dims and cells disagree in dimension {r}"
                )));
            }
            for &c in ids {
                if c >= total || dim_of[c] != usize::MAX {
                    return Err(Error::Malformed(format!(
                        "cell id {c} is out of range or repeated"
                    )));
                }
                dim_of[c] = r;
            }
        }
        if dim_of.contains(&usize::MAX) {
            return Err(Error::Malformed(
                "some cell id is missing from \"cells\"".into(),
            ));
        }
        let mut cells = Vec::with_capacity(total);
        for (c, &dim) in dim_of.iter().enumerate() {
            let faces = if dim == 0 {
                Vec::new()
            } else {
                let list = self
                    .faces
                    .get(&c)
                    .ok_or_else(|| Error::Malformed(format!("no faces for cell {c}")))?;
                list.iter()
                    .map(|f| {
                        let base_dim = *dim_of.get(f.base).ok_or(Error::UnknownCell(f.base))?;
                        let degen =
                            MonotoneMap::from_degeneracy_word(&f.degeneracy, base_dim as isize)?;
                        Ok(Simplex {
                            base: f.base,
                            degen,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let label = self
                .labels
                .get(&c)
                .cloned()
                .unwrap_or_else(|| c.to_string());
            cells.push(Cell { dim, faces, label });
        }
        FinSSet::new(cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{horn, Product};
    use std::sync::Arc;

    #[test]
    fn round_trip() {
        let p = Product::new(
            Arc::new(horn(2, 0).unwrap()),
            Arc::new(crate::sset::standard(1)),
        );
        let j = SSetJson::from_sset(&p.sset);
        let text = serde_json::to_string(&j).unwrap();
        let back: SSetJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.to_sset().unwrap(), *p.sset);
    }

    #[test]
    fn rejects_bad_ids() {
        let mut j = SSetJson::from_sset(&crate::sset::standard(1));
        j.faces.get_mut(&2).unwrap()[0].base = 7;
        assert!(j.to_sset().is_err());
    }
}

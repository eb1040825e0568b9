use std::collections::HashMap;
use std::sync::Arc;

use super::{Cell, CellId, FinSSet, Simplex};
use crate::delta::MonotoneMap;

/// A nondegenerate cell `x ⋆ y` of a join; an absent side is the empty simplex.
pub type JoinPart = (Option<CellId>, Option<CellId>);

/// `X ⋆ Y`. Within each dimension cells are ordered with the left part
/// largest first, so `Δ[a] ⋆ Δ[b]` numbers its vertices like `Δ[a+b+1]`.
#[derive(Clone, Debug)]
pub struct Join {
    pub sset: Arc<FinSSet>,
    pub left: Arc<FinSSet>,
    pub right: Arc<FinSSet>,
    parts: Vec<JoinPart>,
    index: HashMap<JoinPart, CellId>,
}

fn part_dim(s: &FinSSet, c: Option<CellId>) -> isize {
    c.map_or(-1, |c| s.dim(c) as isize)
}

impl Join {
    pub fn new(left: Arc<FinSSet>, right: Arc<FinSSet>) -> Join {
        let top = left.top_dim() + right.top_dim() + 1;
        let mut parts: Vec<JoinPart> = Vec::new();
        let mut index: HashMap<JoinPart, CellId> = HashMap::new();
        let mut cells: Vec<Cell> = Vec::new();
        for r in 0..=top.max(-1) {
            for k in (-1..=r).rev() {
                let j = r - k - 1;
                let xs: Vec<Option<CellId>> = if k < 0 {
                    vec![None]
                } else {
                    left.cells_of_dim(k as usize)
                        .iter()
                        .map(|&c| Some(c))
                        .collect()
                };
                let ys: Vec<Option<CellId>> = if j < 0 {
                    vec![None]
                } else {
                    right
                        .cells_of_dim(j as usize)
                        .iter()
                        .map(|&c| Some(c))
                        .collect()
                };
                for &x in &xs {
                    for &y in &ys {
                        let part = (x, y);
                        let id = cells.len();
                        let faces = if r == 0 {
                            Vec::new()
                        } else {
                            (0..=r as usize)
                                .map(|i| join_face(&left, &right, &index, part, i))
                                .collect()
                        };
                        let label = match (x, y) {
                            (Some(x), Some(y)) => format!("{}*{}", left.label(x), right.label(y)),
                            (Some(x), None) => format!("{}*", left.label(x)),
                            (None, Some(y)) => format!("*{}", right.label(y)),
                            (None, None) => unreachable!(),
                        };
                        cells.push(Cell {
                            dim: r as usize,
                            faces,
                            label,
                        });
                        index.insert(part, id);
                        parts.push(part);
                    }
                }
            }
        }
        Join {
            sset: Arc::new(FinSSet::from_trusted(cells)),
            left,
            right,
            parts,
            index,
        }
    }

    pub fn part(&self, c: CellId) -> JoinPart {
        self.parts[c]
    }

    pub fn cell_of(&self, x: Option<CellId>, y: Option<CellId>) -> Option<CellId> {
        self.index.get(&(x, y)).copied()
    }

    /// Image of a left cell under the inclusion `X -> X ⋆ Y`.
    pub fn left_cell(&self, x: CellId) -> CellId {
        self.index[&(Some(x), None)]
    }

    pub fn right_cell(&self, y: CellId) -> CellId {
        self.index[&(None, Some(y))]
    }

    /// The join simplex `x ⋆ y` of simplices with possibly degenerate parts.
    pub fn join_simplex(&self, x: Option<&Simplex>, y: Option<&Simplex>) -> Option<Simplex> {
        join_simplex(&self.index, x, y)
    }
}

fn join_simplex(
    index: &HashMap<JoinPart, CellId>,
    x: Option<&Simplex>,
    y: Option<&Simplex>,
) -> Option<Simplex> {
    let id = *index.get(&(x.map(|s| s.base), y.map(|s| s.base)))?;
    let mut values = Vec::new();
    let mut codomain: isize = -1;
    if let Some(x) = x {
        values.extend_from_slice(x.degen.values());
        codomain = x.base_dim() as isize;
    }
    if let Some(y) = y {
        let shift = (codomain + 1) as usize;
        values.extend(y.degen.values().iter().map(|v| v + shift));
        codomain += y.base_dim() as isize + 1;
    }
    Some(Simplex {
        base: id,
        degen: MonotoneMap::from_raw(values, codomain),
    })
}

fn join_face(
    left: &FinSSet,
    right: &FinSSet,
    index: &HashMap<JoinPart, CellId>,
    (x, y): JoinPart,
    i: usize,
) -> Simplex {
    let k = part_dim(left, x);
    let xs = x.map(|c| left.cell_simplex(c));
    let ys = y.map(|c| right.cell_simplex(c));
    let (fx, fy) = if (i as isize) <= k {
        let fx = if k == 0 {
            None
        } else {
            Some(left.face(xs.as_ref().unwrap(), i))
        };
        (fx, ys)
    } else {
        let j = i - (k + 1) as usize;
        let ys = ys.unwrap();
        let fy = if ys.dim() == 0 {
            None
        } else {
            Some(right.face(&ys, j))
        };
        (xs, fy)
    };
    join_simplex(index, fx.as_ref(), fy.as_ref()).expect("faces of join cells exist")
}

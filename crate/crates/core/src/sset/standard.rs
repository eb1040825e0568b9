use std::collections::HashMap;

use itertools::Itertools;

use super::{Cell, FinSSet, Simplex};
use crate::error::{out_of_range, Result};

fn subset_label(vs: &[usize]) -> String {
    if vs.len() == 1 {
        vs[0].to_string()
    } else {
        format!("[{}]", vs.iter().join(" "))
    }
}

/// The simplicial set on the nonempty subsets of `[m]` accepted by `keep`.
/// `keep` must be closed under taking nonempty subsets.
fn subsets_of(m: isize, keep: impl Fn(&[usize]) -> bool) -> FinSSet {
    if m < 0 {
        return FinSSet::empty();
    }
    let m = m as usize;
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut cells = Vec::new();
    for size in 1..=m + 1 {
        for vs in (0..=m).combinations(size) {
            if !keep(&vs) {
                continue;
            }
            let dim = size - 1;
            let faces = if dim == 0 {
                Vec::new()
            } else {
                (0..size)
                    .map(|i| {
                        let mut f = vs.clone();
                        f.remove(i);
                        Simplex::nondegenerate(index[&f], dim - 1)
                    })
                    .collect()
            };
            index.insert(vs.clone(), cells.len());
            cells.push(Cell {
                dim,
                faces,
                label: subset_label(&vs),
            });
        }
    }
    FinSSet::from_trusted(cells)
}

/// `Δ[m]`; `Δ[-1]` is empty. Vertex `i` is cell `i`.
pub fn standard(m: isize) -> FinSSet {
    subsets_of(m, |_| true)
}

/// `∂Δ[m]` for `m >= 0`; `∂Δ[0]` is empty.
pub fn boundary(m: isize) -> Result<FinSSet> {
    if m < 0 {
        return Err(out_of_range("boundary dimension m", m, "[0, inf)"));
    }
    let top = m as usize + 1;
    Ok(subsets_of(m, |vs| vs.len() < top))
}

/// The horn `Λ^k[m]`: `Δ[m]` without its top cell and its `k`-th face.
pub fn horn(m: isize, k: isize) -> Result<FinSSet> {
    if m < 1 {
        return Err(out_of_range("horn dimension m", m, "[1, inf)"));
    }
    if k < 0 || k > m {
        return Err(out_of_range(
            "horn index k",
            k,
            format!("0 <= k <= m = {m}"),
        ));
    }
    let top = m as usize + 1;
    let k = k as usize;
    Ok(subsets_of(m, |vs| {
        vs.len() < top && !(vs.len() == top - 1 && !vs.contains(&k))
    }))
}

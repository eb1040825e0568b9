use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{join_marked, MarkedSSet};
use crate::error::{out_of_range, Error, Result};
use crate::sset::{boundary, horn, standard, CellId, FinSSet};

/// The named marked objects built from standard simplices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gadget {
    /// `Δ[m]`, only degenerate simplices marked; `m = -1` is empty.
    Delta(isize),
    /// `Δ[m]_t`: the top simplex marked as well.
    DeltaT(isize),
    /// `∂Δ[m]`.
    Boundary(isize),
    /// `Δᵏ[m]`: a simplex is marked iff it contains `{k-1, k, k+1} ∩ [m]`.
    DeltaK { m: isize, k: isize },
    /// `Δᵏ[m]′`: also the faces `d^{k-1}` and `d^{k+1}`.
    DeltaKPrime { m: isize, k: isize },
    /// `Δᵏ[m]″`: also the face `d^k`.
    DeltaKDoublePrime { m: isize, k: isize },
    /// `Λᵏ[m]` with the marks of `Δᵏ[m]`.
    Horn { m: isize, k: isize },
    /// `Δ[3]_eq`: all 2- and 3-simplices and the edges `[0 2]`, `[1 3]`.
    Delta3Eq,
    /// `Δ[3]_♯`: everything positive-dimensional.
    Delta3Sharp,
    /// `Δ[left] ⋆ Δ[3]_eq ⋆ Δ[right]`, or `Δ[3]_♯` in the middle if `sharp`.
    DeltaThree {
        left: isize,
        right: isize,
        sharp: bool,
    },
}

impl fmt::Display for Gadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gadget::Delta(m) => write!(f, "Δ[{m}]"),
            Gadget::DeltaT(m) => write!(f, "Δ[{m}]_t"),
            Gadget::Boundary(m) => write!(f, "∂Δ[{m}]"),
            Gadget::DeltaK { m, k } => write!(f, "Δ^{k}[{m}]"),
            Gadget::DeltaKPrime { m, k } => write!(f, "Δ^{k}[{m}]'"),
            Gadget::DeltaKDoublePrime { m, k } => write!(f, "Δ^{k}[{m}]''"),
            Gadget::Horn { m, k } => write!(f, "Λ^{k}[{m}]"),
            Gadget::Delta3Eq => write!(f, "Δ[3]_eq"),
            Gadget::Delta3Sharp => write!(f, "Δ[3]_#"),
            Gadget::DeltaThree { left, right, sharp } => {
                write!(f, "Δ^{left}[3]^{right}_{}", if sharp { "#" } else { "eq" })
            }
        }
    }
}

impl Gadget {
    /// The expression-language spelling.
    pub fn expr(&self) -> String {
        match *self {
            Gadget::Delta(m) => format!("delta {m}"),
            Gadget::DeltaT(m) => format!("deltat {m}"),
            Gadget::Boundary(m) => format!("boundary {m}"),
            Gadget::DeltaK { m, k } => format!("deltak({m},{k})"),
            Gadget::DeltaKPrime { m, k } => format!("deltakp({m},{k})"),
            Gadget::DeltaKDoublePrime { m, k } => format!("deltakpp({m},{k})"),
            Gadget::Horn { m, k } => format!("horn({m},{k})"),
            Gadget::Delta3Eq => "delta3eq".into(),
            Gadget::Delta3Sharp => "delta3sharp".into(),
            Gadget::DeltaThree { left, right, sharp } => {
                format!(
                    "deltathree({left},{right},{})",
                    if sharp { "sharp" } else { "eq" }
                )
            }
        }
    }
}

fn check_mk(m: isize, k: isize, min_m: isize) -> Result<()> {
    if m < min_m {
        return Err(out_of_range("dimension m", m, format!("[{min_m}, inf)")));
    }
    if k < 0 || k > m {
        return Err(out_of_range("index k", k, format!("0 <= k <= m = {m}")));
    }
    Ok(())
}

/// Whether a cell of a simplex-shaped object (vertex `i` is cell `i`)
/// contains `{k-1, k, k+1} ∩ [m]`.
fn contains_k_neighborhood(x: &FinSSet, c: CellId, m: isize, k: isize) -> bool {
    let vs = x.cell_vertices(c);
    (k - 1..=k + 1)
        .filter(|&v| v >= 0 && v <= m)
        .all(|v| vs.contains(&(v as usize)))
}

/// Cell of `Δ[m]` (as built by [`standard`]) with the given vertices.
fn face_cell(x: &FinSSet, omit: usize, m: usize) -> Option<CellId> {
    let want: Vec<usize> = (0..=m).filter(|&v| v != omit).collect();
    x.cells_of_dim(m - 1)
        .iter()
        .copied()
        .find(|&c| x.cell_vertices(c) == want.as_slice())
}

pub fn gadget(g: &Gadget) -> Result<MarkedSSet> {
    match *g {
        Gadget::Delta(m) => {
            if m < -1 {
                return Err(out_of_range("dimension m", m, "[-1, inf)"));
            }
            Ok(MarkedSSet::minimal(Arc::new(standard(m))))
        }
        Gadget::DeltaT(m) => {
            if m < 1 {
                return Err(out_of_range("dimension m", m, "[1, inf)"));
            }
            let x = Arc::new(standard(m));
            let top = x.len() - 1;
            Ok(MarkedSSet::from_predicate(x, |c| c == top))
        }
        Gadget::Boundary(m) => Ok(MarkedSSet::minimal(Arc::new(boundary(m)?))),
        Gadget::DeltaK { m, k } => {
            check_mk(m, k, 0)?;
            let x = Arc::new(standard(m));
            let y = x.clone();
            Ok(MarkedSSet::from_predicate(x, |c| {
                contains_k_neighborhood(&y, c, m, k)
            }))
        }
        Gadget::DeltaKPrime { m, k } | Gadget::DeltaKDoublePrime { m, k } => {
            check_mk(m, k, 0)?;
            let mut out = gadget(&Gadget::DeltaK { m, k })?;
            let x = out.underlying.clone();
            let mut omit = vec![k - 1, k + 1];
            if matches!(g, Gadget::DeltaKDoublePrime { .. }) {
                omit.push(k);
            }
            let mu = m as usize;
            let extra: Vec<CellId> = omit
                .into_iter()
                .filter(|&i| i >= 0 && i <= m && m >= 2)
                .filter_map(|i| face_cell(&x, i as usize, mu))
                .collect();
            out.add_marks(extra)?;
            Ok(out)
        }
        Gadget::Horn { m, k } => {
            check_mk(m, k, 1)?;
            let x = Arc::new(horn(m, k)?);
            let y = x.clone();
            Ok(MarkedSSet::from_predicate(x, |c| {
                contains_k_neighborhood(&y, c, m, k)
            }))
        }
        Gadget::Delta3Eq => {
            let x = Arc::new(standard(3));
            let y = x.clone();
            Ok(MarkedSSet::from_predicate(x, |c| {
                y.dim(c) >= 2 || matches!(y.cell_vertices(c), [0, 2] | [1, 3])
            }))
        }
        Gadget::Delta3Sharp => Ok(MarkedSSet::maximal(Arc::new(standard(3)))),
        Gadget::DeltaThree { left, right, sharp } => {
            if left < -1 {
                return Err(out_of_range("left join dimension", left, "[-1, inf)"));
            }
            if right < -1 {
                return Err(out_of_range("right join dimension", right, "[-1, inf)"));
            }
            let middle = gadget(if sharp {
                &Gadget::Delta3Sharp
            } else {
                &Gadget::Delta3Eq
            })?;
            let joined = join_marked(
                &join_marked(&gadget(&Gadget::Delta(left))?, &middle),
                &gadget(&Gadget::Delta(right))?,
            );
            transport_to_standard(&joined)
        }
    }
}

/// Re-presents a marked object whose underlying object is a standard
/// simplex, with vertices already in order, on [`standard`] itself.
pub fn transport_to_standard(x: &MarkedSSet) -> Result<MarkedSSet> {
    let n = x.underlying.vertex_count() as isize - 1;
    let target = Arc::new(standard(n));
    if target.counts() != x.underlying.counts() {
        return Err(Error::Unsupported(
            "object is not a standard simplex".into(),
        ));
    }
    let index: HashMap<&[CellId], CellId> = (0..target.len())
        .map(|c| (target.cell_vertices(c), c))
        .collect();
    let mut marks = crate::sset::CellSet::new();
    for c in 0..x.len() {
        let t = *index
            .get(x.underlying.cell_vertices(c))
            .ok_or_else(|| Error::Unsupported("object is not a standard simplex".into()))?;
        if x.is_cell_marked(c) {
            marks.insert(t);
        }
    }
    MarkedSSet::new(target, &marks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn marked_vertex_sets(x: &MarkedSSet) -> Vec<Vec<usize>> {
        x.marked_cells()
            .into_iter()
            .map(|c| x.underlying.cell_vertices(c).to_vec())
            .collect()
    }

    #[test]
    fn delta3_eq() {
        let x = gadget(&Gadget::Delta3Eq).unwrap();
        assert_eq!(x.marked_count(), 7);
        assert_eq!(x.marked_of_dim(1).len(), 2);
        assert_eq!(gadget(&Gadget::Delta3Sharp).unwrap().marked_count(), 11);
    }

    #[test]
    fn delta_k() {
        let x = gadget(&Gadget::DeltaK { m: 2, k: 1 }).unwrap();
        assert_eq!(marked_vertex_sets(&x), vec![vec![0, 1, 2]]);
        let x = gadget(&Gadget::DeltaK { m: 2, k: 0 }).unwrap();
        assert_eq!(marked_vertex_sets(&x), vec![vec![0, 1], vec![0, 1, 2]]);
        let p = gadget(&Gadget::DeltaKPrime { m: 2, k: 1 }).unwrap();
        assert_eq!(
            marked_vertex_sets(&p),
            vec![vec![0, 1], vec![1, 2], vec![0, 1, 2]]
        );
        let pp = gadget(&Gadget::DeltaKDoublePrime { m: 2, k: 1 }).unwrap();
        assert_eq!(pp.marked_count(), 4);
        // only the missing k-th face separates ′ from ″
        let diff: Vec<_> = pp
            .marked_cells()
            .difference(&p.marked_cells())
            .copied()
            .collect();
        assert_eq!(diff.len(), 1);
        assert_eq!(pp.underlying.cell_vertices(diff[0]), &[0, 2]);
    }

    #[test]
    fn simple_markings() {
        let t = gadget(&Gadget::DeltaT(3)).unwrap();
        assert_eq!(marked_vertex_sets(&t), vec![vec![0, 1, 2, 3]]);
        assert_eq!(gadget(&Gadget::Delta(3)).unwrap().marked_count(), 0);
        let h = gadget(&Gadget::Horn { m: 3, k: 1 }).unwrap();
        // faces of Λ¹[3] containing {0,1,2}: only d_3
        assert_eq!(marked_vertex_sets(&h), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn ranges() {
        assert!(gadget(&Gadget::Horn { m: 2, k: 5 }).is_err());
        assert!(gadget(&Gadget::Delta(-2)).is_err());
        assert!(gadget(&Gadget::DeltaThree {
            left: -2,
            right: 0,
            sharp: false
        })
        .is_err());
        assert!(gadget(&Gadget::DeltaT(0)).is_err());
    }

    #[test]
    fn delta_three_shapes() {
        let x = gadget(&Gadget::DeltaThree {
            left: -1,
            right: -1,
            sharp: false,
        })
        .unwrap();
        assert_eq!(x, gadget(&Gadget::Delta3Eq).unwrap());
        let y = gadget(&Gadget::DeltaThree {
            left: 0,
            right: 1,
            sharp: true,
        })
        .unwrap();
        assert_eq!(y.underlying.top_dim(), 6);
        // a simplex is marked iff its middle part is marked in Δ[3]_♯
        for c in 0..y.len() {
            let vs = y.underlying.cell_vertices(c);
            let middle = vs.iter().filter(|&&v| (1..=4).contains(&v)).count();
            assert_eq!(y.is_cell_marked(c), middle >= 2, "{vs:?}");
        }
    }
}

use std::collections::HashMap;
use std::sync::Arc;

use super::{CellId, FinSSet, Simplex};
use crate::error::{Error, Result};

/// A simplicial map, given on the nondegenerate cells of the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSetMap {
    pub domain: Arc<FinSSet>,
    pub codomain: Arc<FinSSet>,
    pub assignment: Vec<Simplex>,
}

impl SSetMap {
    /// Checks dimensions and compatibility with every face operator.
    pub fn new(
        domain: Arc<FinSSet>,
        codomain: Arc<FinSSet>,
        assignment: Vec<Simplex>,
    ) -> Result<SSetMap> {
        if assignment.len() != domain.len() {
            return Err(Error::NotSimplicial(format!(
                "{} cells assigned but the domain has {}",
                assignment.len(),
                domain.len()
            )));
        }
        for (c, s) in assignment.iter().enumerate() {
            if s.base >= codomain.len() {
                return Err(Error::UnknownCell(s.base));
            }
            if s.dim() != domain.dim(c) || codomain.dim(s.base) != s.base_dim() {
                return Err(Error::NotSimplicial(format!(
                    "cell {c} of dimension {} sent to {s} of dimension {}",
                    domain.dim(c),
                    s.dim()
                )));
            }
        }
        let map = SSetMap {
            domain,
            codomain,
            assignment,
        };
        for c in 0..map.domain.len() {
            for (i, f) in map.domain.cell(c).faces.iter().enumerate() {
                let lhs = map.codomain.face(&map.assignment[c], i);
                let rhs = map.apply(f);
                if lhs != rhs {
                    return Err(Error::NotSimplicial(format!(
                        "cell {c} ({}): d_{i} of its image is {lhs} but the image of d_{i} is {rhs}",
                        map.domain.label(c)
                    )));
                }
            }
        }
        Ok(map)
    }

    /// The identity on `x`.
    pub fn identity(x: Arc<FinSSet>) -> SSetMap {
        let assignment = (0..x.len()).map(|c| x.cell_simplex(c)).collect();
        SSetMap {
            domain: x.clone(),
            codomain: x,
            assignment,
        }
    }

    /// A map presented by a cell-to-cell function that is known to commute
    /// with faces (inclusions of subcomplexes and the like).
    pub fn from_cells(
        domain: Arc<FinSSet>,
        codomain: Arc<FinSSet>,
        cells: &[CellId],
    ) -> Result<SSetMap> {
        let assignment = cells.iter().map(|&c| codomain.cell_simplex(c)).collect();
        SSetMap::new(domain, codomain, assignment)
    }

    pub fn apply(&self, s: &Simplex) -> Simplex {
        self.codomain.restrict(&self.assignment[s.base], &s.degen)
    }

    pub fn image(&self, c: CellId) -> &Simplex {
        &self.assignment[c]
    }

    /// Injective on cells and nondegenerate on every cell.
    pub fn is_inclusion(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.assignment
            .iter()
            .all(|s| !s.is_degenerate() && !std::mem::replace(&mut seen[s.base], true))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SSetMap) -> Result<SSetMap> {
        if first.codomain != self.domain && first.codomain.cells() != self.domain.cells() {
            return Err(Error::NotSimplicial(
                "composite of maps that do not meet".into(),
            ));
        }
        Ok(SSetMap {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            assignment: first.assignment.iter().map(|s| self.apply(s)).collect(),
        })
    }
}

/// Candidate images grouped by vertex sequence, per dimension.
struct Candidates {
    by_vertices: Vec<HashMap<Vec<CellId>, Vec<Simplex>>>,
}

impl Candidates {
    fn new(x: &FinSSet, top: usize) -> Candidates {
        let by_vertices = (0..=top)
            .map(|d| {
                let mut m: HashMap<Vec<CellId>, Vec<Simplex>> = HashMap::new();
                for s in x.simplices_of_dim(d) {
                    m.entry(x.vertices(&s)).or_default().push(s);
                }
                m
            })
            .collect();
        Candidates { by_vertices }
    }
}

/// Backtracking search over maps `a -> x`, cells assigned in id order.
///
/// `fixed[c]`, when present, pins the image of `c`. `accept` prunes
/// individual assignments (e.g. marking preservation). `visit` receives
/// each complete assignment and returns `false` to stop the search.
pub fn search_maps(
    a: &FinSSet,
    x: &FinSSet,
    fixed: &[Option<Simplex>],
    accept: &mut dyn FnMut(CellId, &Simplex) -> bool,
    visit: &mut dyn FnMut(&[Simplex]) -> bool,
) {
    if a.is_empty() {
        visit(&[]);
        return;
    }
    if x.is_empty() {
        return;
    }
    let top = a.top_dim() as usize;
    let cands = Candidates::new(x, top);
    let vertices: Vec<Simplex> = x
        .cells_of_dim(0)
        .iter()
        .map(|&v| x.cell_simplex(v))
        .collect();
    let mut current: Vec<Simplex> = Vec::with_capacity(a.len());
    let mut state = Search {
        a,
        x,
        fixed,
        cands: &cands,
        vertices: &vertices,
    };
    state.go(&mut current, accept, visit);
}

struct Search<'s> {
    a: &'s FinSSet,
    x: &'s FinSSet,
    fixed: &'s [Option<Simplex>],
    cands: &'s Candidates,
    vertices: &'s [Simplex],
}

impl Search<'_> {
    /// Returns `false` once the visitor asked to stop.
    fn go(
        &mut self,
        current: &mut Vec<Simplex>,
        accept: &mut dyn FnMut(CellId, &Simplex) -> bool,
        visit: &mut dyn FnMut(&[Simplex]) -> bool,
    ) -> bool {
        let c = current.len();
        if c == self.a.len() {
            return visit(current);
        }
        let cell = self.a.cell(c);
        let required: Vec<Simplex> = cell
            .faces
            .iter()
            .map(|f| self.x.restrict(&current[f.base], &f.degen))
            .collect();
        let fits = |s: &Simplex| {
            required
                .iter()
                .enumerate()
                .all(|(i, f)| self.x.face(s, i) == *f)
        };
        let pinned = self.fixed.get(c).and_then(Option::as_ref);
        let options: Vec<Simplex> = if let Some(p) = pinned {
            if p.dim() == cell.dim && (cell.dim == 0 || fits(p)) {
                vec![p.clone()]
            } else {
                Vec::new()
            }
        } else if cell.dim == 0 {
            self.vertices.to_vec()
        } else {
            let mut vs: Vec<CellId> = (0..cell.dim)
                .map(|i| self.x.vertices(&required[cell.dim])[i])
                .collect();
            vs.push(*self.x.vertices(&required[0]).last().unwrap());
            self.cands.by_vertices[cell.dim]
                .get(&vs)
                .map(|list| list.iter().filter(|s| fits(s)).cloned().collect())
                .unwrap_or_default()
        };
        for s in options {
            if !accept(c, &s) {
                continue;
            }
            current.push(s);
            let go_on = self.go(current, accept, visit);
            current.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// All simplicial maps `a -> x`, in lexicographic order of the images of
/// the cells `0, 1, 2, ...`.
pub fn enumerate_maps(a: &Arc<FinSSet>, x: &Arc<FinSSet>) -> Vec<SSetMap> {
    let mut out = Vec::new();
    search_maps(a, x, &[], &mut |_, _| true, &mut |assignment| {
        out.push(SSetMap {
            domain: a.clone(),
            codomain: x.clone(),
            assignment: assignment.to_vec(),
        });
        true
    });
    out
}

/// Number of maps `a -> x`, without materializing them.
pub fn count_maps(a: &FinSSet, x: &FinSSet) -> usize {
    let mut n = 0;
    search_maps(a, x, &[], &mut |_, _| true, &mut |_| {
        n += 1;
        true
    });
    n
}

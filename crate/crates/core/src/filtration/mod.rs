//! Filtration certificates for the saturation and triviality pushout
//! squares of the tensor product.
//!
//! Everything lives in the ambient `P = Δ[ℓ+4] × Δ[m]`, whose vertex
//! `(a, c)` is cell `a·(m+1) + c`. A nondegenerate simplex of `P` is a
//! monotone lattice path; it is read through its two projections.

mod stages;
mod triviality;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::anodyne::{cofibration_generator, leibniz_tensor, CofibrationKind};
use crate::delta::face_partition;
use crate::error::{out_of_range, Result};
use crate::marking::{gadget, tensor_on, Gadget, MarkedMap, MarkedSSet};
use crate::sset::{standard, CellId, CellSet, NerveIndex, Product};

pub use stages::{
    run_filtration, run_filtration_with, Attachment, AttachmentKind, FiltrationCertificate, Limits,
    StageRecord,
};
pub use triviality::{triviality_filtration, triviality_target, TrivialityCertificate};

/// Maximal `1 <= h <= r` with `v[h-1] = v[h]`.
pub fn degeneracy_index(pr2: &[usize]) -> Option<usize> {
    (1..pr2.len()).rev().find(|&h| pr2[h - 1] == pr2[h])
}

/// The objects a filtration run for `(ℓ, m)` works with.
#[derive(Clone, Debug)]
pub struct Ambient {
    pub ell: isize,
    pub m: isize,
    pub product: Product,
    pub nerve: NerveIndex,
    /// `Δ^ℓ[3]_eq` and `Δ^ℓ[3]_♯` on `Δ[ℓ+4]`.
    pub eq: MarkedSSet,
    pub sharp: MarkedSSet,
    /// `Δ^ℓ[3]_♯ ⊗ Δ[m]`.
    pub target: MarkedSSet,
    /// `Δ^ℓ[3]_eq ⊗ Δ[m]`.
    pub eq_tensor: MarkedSSet,
    /// The Leibniz domain, as a marking of `P`.
    pub s0: MarkedSSet,
    paths: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Ambient {
    pub fn new(ell: isize, m: isize) -> Result<Ambient> {
        if ell < -1 {
            return Err(out_of_range("ℓ", ell, "[-1, inf)"));
        }
        if m < 0 {
            return Err(out_of_range("m", m, "[0, inf)"));
        }
        let eq = gadget(&Gadget::DeltaThree {
            left: ell,
            right: -1,
            sharp: false,
        })?;
        let sharp = gadget(&Gadget::DeltaThree {
            left: ell,
            right: -1,
            sharp: true,
        })?;
        let delta_m = gadget(&Gadget::Delta(m))?;
        let saturation = MarkedMap::entire(eq.clone(), sharp.clone())?;
        let boundary = cofibration_generator(CofibrationKind::Boundary, m)?;
        let leibniz = leibniz_tensor(&saturation, &boundary)?;
        let product = leibniz.product.clone();
        let target = leibniz.codomain.clone();
        let s0 = leibniz.as_entire()?;
        let eq_tensor = tensor_on(&product, &eq, &delta_m)?;
        let nerve = NerveIndex::new(&product.sset);
        let paths = product
            .pairs()
            .iter()
            .map(|(x, y)| (product.left.vertices(x), product.right.vertices(y)))
            .collect();
        Ok(Ambient {
            ell,
            m,
            product,
            nerve,
            eq,
            sharp,
            target,
            eq_tensor,
            s0,
            paths,
        })
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn vertex(&self, a: usize, c: usize) -> CellId {
        a * (self.m as usize + 1) + c
    }

    pub fn pr1(&self, c: CellId) -> &[usize] {
        &self.paths[c].0
    }

    pub fn pr2(&self, c: CellId) -> &[usize] {
        &self.paths[c].1
    }

    pub fn label(&self, c: CellId) -> &str {
        self.product.sset.label(c)
    }

    /// The cell whose path visits the given points, if nondegenerate.
    pub fn cell_of_path(&self, points: &[(usize, usize)]) -> Option<CellId> {
        let vs: Vec<CellId> = points.iter().map(|&(a, c)| self.vertex(a, c)).collect();
        self.nerve.cell(&vs)
    }

    /// Marks of the target missing from `S₀`.
    pub fn extra_cells(&self) -> CellSet {
        self.target
            .marked_cells()
            .difference(&self.s0.marked_cells())
            .copied()
            .collect()
    }
}

/// One cell of the comparison between the tensor marking and the
/// degeneracy-index criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub sigma: String,
    pub sharp: bool,
    pub tensor: bool,
    pub criterion: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub ell: isize,
    pub m: isize,
    pub cells: usize,
    pub marked_eq: usize,
    pub marked_sharp: usize,
    pub mismatches: Vec<Mismatch>,
    pub passed: bool,
}

/// Marked under the criterion: the second projection is degenerate with
/// index `h` and the front `h`-face of the first projection is marked.
fn criterion(amb: &Ambient, c: CellId, first: &MarkedSSet) -> bool {
    let pr2 = amb.pr2(c);
    let Some(h) = degeneracy_index(pr2) else {
        return false;
    };
    let (x, _) = amb.product.pair(c);
    let r = x.dim();
    let (front, _) = face_partition(h, r - h);
    first.is_marked(&first.underlying.restrict(x, &front))
}

/// Compares the tensor markings of `Δ^ℓ[3]_eq ⊗ Δ[m]` and of the `♯`
/// variant with the degeneracy-index criterion on every cell.
pub fn remark_characterization(ell: isize, m: isize) -> Result<CharacterizationReport> {
    let amb = Ambient::new(ell, m)?;
    let mut mismatches = Vec::new();
    for (sharp, first, tensor) in [
        (false, &amb.eq, &amb.eq_tensor),
        (true, &amb.sharp, &amb.target),
    ] {
        for c in 0..amb.len() {
            let t = tensor.is_cell_marked(c);
            let k = criterion(&amb, c, first);
            if t != k {
                mismatches.push(Mismatch {
                    sigma: amb.label(c).to_string(),
                    sharp,
                    tensor: t,
                    criterion: k,
                });
            }
        }
    }
    Ok(CharacterizationReport {
        ell,
        m,
        cells: amb.len(),
        marked_eq: amb.eq_tensor.marked_count(),
        marked_sharp: amb.target.marked_count(),
        passed: mismatches.is_empty(),
        mismatches,
    })
}

/// A mark of `Δ^ℓ[3]_♯ ⊗ Δ[m]` missing from `S₀`, with its decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraMark {
    pub cell: CellId,
    pub sigma: String,
    pub dim: usize,
    pub h: usize,
    /// Vertices of `σ′` in `Δ[ℓ]`.
    pub sigma_prime: Vec<usize>,
    /// The edge `σ″` of `Δ[3]`.
    pub sigma_dprime: [usize; 2],
    /// The stage whose attachments mark it.
    pub stage: u8,
    /// The stage read off `σ″` alone.
    pub nominal_stage: u8,
    /// Last position with first coordinate `ℓ+3` (stages 3, 5, 6) or
    /// `ℓ+2` (stage 4).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<usize>,
    /// Last position with first coordinate `ℓ+2` (stages 5, 6).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<usize>,
}

fn last_position(p: &[usize], value: usize) -> Option<usize> {
    p.iter().rposition(|&a| a == value)
}

/// Whether the path is the image of a `♯`-but-not-`eq` cell under one of
/// the saturation attaching maps: a strictly increasing prefix in
/// `Δ[ℓ] × Δ[m]`, then an edge of the middle `Δ[3]` at constant height `C`,
/// then a vertical run on `ℓ+4` above `C`.
fn saturation_shaped(ell: isize, m: isize, p: &[usize], q: &[usize]) -> bool {
    let k = p.iter().take_while(|&&a| (a as isize) <= ell).count();
    if p[..k].windows(2).any(|w| w[0] >= w[1]) || k + 1 >= p.len() {
        return false;
    }
    let base = (ell + 1) as usize;
    let edge = [
        p[k] as isize - base as isize,
        p[k + 1] as isize - base as isize,
    ];
    if !matches!(edge, [0, 1] | [1, 2] | [2, 3] | [0, 3]) {
        return false;
    }
    let height = q[k];
    if q[k + 1] != height || height as isize > m.min(ell + 4) {
        return false;
    }
    p[k + 2..].iter().all(|&a| a == base + 3) && q[k + 2..].iter().all(|&c| c > height)
}

fn classify_one(amb: &Ambient, c: CellId) -> Option<ExtraMark> {
    let (ell, m) = (amb.ell, amb.m);
    let (p, q) = (amb.pr1(c), amb.pr2(c));
    let h = degeneracy_index(q)?;
    let base = (ell + 1) as usize;
    let sigma_prime = p[..h - 1].to_vec();
    if sigma_prime.iter().any(|&a| a >= base) || sigma_prime.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    let (e0, e1) = (p[h - 1].checked_sub(base)?, p[h].checked_sub(base)?);
    if !matches!((e0, e1), (0, 1) | (1, 2) | (2, 3) | (0, 3)) {
        return None;
    }
    let dprime = [e0, e1];
    let misses_low = (0..base).any(|i| !p.contains(&i));
    let hits = |a: usize| p.contains(&a);
    let (l2, l3, l4) = (base + 1, base + 2, base + 3);
    let late_stage = || -> (u8, Option<usize>, Option<usize>) {
        match dprime {
            [1, 2] => (3, last_position(p, l3), None),
            [0, 1] if !(hits(l3) && hits(l4)) => (4, last_position(p, l2), None),
            [0, 1] => {
                let z = last_position(p, l3);
                let w = last_position(p, l2);
                let consecutive = matches!((w, z), (Some(w), Some(z)) if w + 1 == z);
                (if consecutive { 5 } else { 6 }, z, w)
            }
            _ => (2, None, None),
        }
    };
    let nominal = if misses_low {
        1
    } else if matches!(dprime, [0, 3] | [2, 3]) {
        2
    } else {
        late_stage().0
    };
    let (stage, z, w) = if misses_low {
        (1, None, None)
    } else if matches!(dprime, [0, 3] | [2, 3]) || saturation_shaped(ell, m, p, q) {
        (2, None, None)
    } else {
        late_stage()
    };
    Some(ExtraMark {
        cell: c,
        sigma: amb.label(c).to_string(),
        dim: p.len() - 1,
        h,
        sigma_prime,
        sigma_dprime: dprime,
        stage,
        nominal_stage: nominal,
        z,
        w,
    })
}

/// Classification of the extra marks on a prepared ambient. Cells that do
/// not decompose as expected are returned separately.
pub fn classify_on(amb: &Ambient) -> (Vec<ExtraMark>, Vec<CellId>) {
    let mut out = Vec::new();
    let mut bad = Vec::new();
    for c in amb.extra_cells() {
        match classify_one(amb, c) {
            Some(e) => out.push(e),
            None => bad.push(c),
        }
    }
    (out, bad)
}

/// Every mark of `Δ^ℓ[3]_♯ ⊗ Δ[m]` missing from `S₀`, decorated and
/// assigned to a stage. Fails if some mark does not decompose as `σ′ ⋆ σ″`.
pub fn classify_extra_marks(ell: isize, m: isize) -> Result<Vec<ExtraMark>> {
    let amb = Ambient::new(ell, m)?;
    let (marks, bad) = classify_on(&amb);
    if let Some(&c) = bad.first() {
        return Err(crate::Error::Unsupported(format!(
            "extra mark {} has no decomposition as an edge join",
            amb.label(c)
        )));
    }
    Ok(marks)
}

/// `S₀`: the union of `♯ ⊗ ∂Δ[m]` and `eq ⊗ Δ[m]` inside `♯ ⊗ Δ[m]`.
pub fn build_s0(ell: isize, m: isize) -> Result<MarkedSSet> {
    Ok(Ambient::new(ell, m)?.s0)
}

/// `Δ[ℓ+4] × Δ[m]`, unmarked.
pub fn ambient_product(ell: isize, m: isize) -> Product {
    Product::new(Arc::new(standard(ell + 4)), Arc::new(standard(m)))
}

use serde::{Deserialize, Serialize};

use crate::anodyne::{
    attach_entire, cofibration_generator, generator, leibniz_tensor, AnodyneKind, CofibrationKind,
};
use crate::error::{out_of_range, Result};
use crate::marking::{MarkedMap, MarkedSSet};
use crate::sset::NerveIndex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialityCertificate {
    pub p: isize,
    pub m: isize,
    pub n: isize,
    pub cells: usize,
    /// Marked cells of dimension below `p` agree before any attachment.
    pub lower_dims_agree: bool,
    pub attached: Vec<String>,
    pub final_equals_target: bool,
    pub passed: bool,
}

/// Realizes `Δ[p]_t ⊗ Δ[m]` from the Leibniz domain of `Δ[p] → Δ[p]_t` and
/// `∂Δ[m] → Δ[m]` by attaching triviality extensions `Δ[r] → Δ[r]_t`,
/// `r >= p`, along each missing mark.
pub fn triviality_filtration(p: isize, m: isize, n: isize) -> Result<TrivialityCertificate> {
    if n < 0 {
        return Err(out_of_range("N", n, "[0, inf)"));
    }
    if p <= n {
        return Err(out_of_range("p", p, format!("({n}, inf)")));
    }
    let f = generator(AnodyneKind::Triviality, &[p])?.realized;
    let g = cofibration_generator(CofibrationKind::Boundary, m)?;
    let l = leibniz_tensor(&f, &g)?;
    let target = &l.codomain;
    let mut current = l.as_entire()?;
    let lower_dims_agree =
        (0..p as usize).all(|r| current.marked_of_dim(r) == target.marked_of_dim(r));
    let nerve = NerveIndex::new(&target.underlying);
    let missing: Vec<usize> = target
        .marked_cells()
        .difference(&current.marked_cells())
        .copied()
        .collect();
    let mut attached = Vec::new();
    let mut attachments_ok = true;
    for c in missing {
        let r = target.underlying.dim(c) as isize;
        if r < p {
            attachments_ok = false;
            continue;
        }
        let gen = generator(AnodyneKind::Triviality, &[r])?;
        let vs = target.underlying.cell_vertices(c).to_vec();
        let cells: Vec<usize> = (0..gen.realized.domain.len())
            .map(|d| {
                let path: Vec<usize> = gen
                    .realized
                    .domain
                    .underlying
                    .cell_vertices(d)
                    .iter()
                    .map(|&v| vs[v])
                    .collect();
                nerve
                    .cell(&path)
                    .expect("faces of a product cell are product cells")
            })
            .collect();
        let attach = MarkedMap::inclusion(gen.realized.domain.clone(), current.clone(), &cells)?;
        let (next, added) = attach_entire(&current, &gen.realized, &attach)?;
        attachments_ok &= added.len() == 1 && added.contains(&c);
        current = next;
        attached.push(target.underlying.label(c).to_string());
    }
    let final_equals_target = current == *target;
    Ok(TrivialityCertificate {
        p,
        m,
        n,
        cells: target.len(),
        lower_dims_agree,
        attached,
        final_equals_target,
        passed: lower_dims_agree && attachments_ok && final_equals_target,
    })
}

/// `Δ[p] × Δ[m]` marked as `Δ[p]_t ⊗ Δ[m]`.
pub fn triviality_target(p: isize, m: isize) -> Result<MarkedSSet> {
    let f = generator(AnodyneKind::Triviality, &[p])?.realized;
    Ok(crate::marking::tensor(
        &f.codomain,
        &crate::marking::gadget(&crate::marking::Gadget::Delta(m))?,
    ))
}

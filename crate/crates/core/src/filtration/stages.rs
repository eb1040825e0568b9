use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{classify_on, Ambient, ExtraMark};
use crate::delta::{face, MonotoneMap};
use crate::error::{out_of_range, Error, Result};
use crate::marking::{gadget, Gadget, MarkedSSet};
use crate::sset::{CellId, CellSet};

/// Parameter bounds for filtration runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_ell: isize,
    pub max_m: isize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_ell: 1,
            max_m: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum AttachmentKind {
    /// The `i`-th face of the first factor, carrying the smaller problem.
    Face { index: usize },
    /// A saturation attachment on the sequence `b`.
    Phi { r: usize, b: Vec<usize> },
    /// A thinness attachment inserting a vertex after position `z`.
    Psi {
        r: usize,
        z: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        w: Option<usize>,
        sigma: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attachment {
    pub map: AttachmentKind,
    pub domain: String,
    /// Projections of the attaching map on vertices.
    pub pr1: String,
    pub pr2: String,
    pub new_marks: Vec<String>,
    pub redundant: bool,
    pub preserves_marking: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: u8,
    pub anodyne: String,
    pub marks_before: Vec<CellId>,
    pub marks_after: Vec<CellId>,
    pub added: Vec<String>,
    pub expected: Vec<String>,
    pub attachments: Vec<Attachment>,
    pub entire: bool,
    pub within_target: bool,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub ell: isize,
    pub m: isize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationCertificate {
    pub params: Params,
    pub cells: usize,
    pub s0_marks: usize,
    pub target_marks: usize,
    pub extra_marks: Vec<ExtraMark>,
    pub stages: Vec<StageRecord>,
    pub final_equals_target: bool,
    pub classifier_matches: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sub_certificate: Option<Box<FiltrationCertificate>>,
}

impl FiltrationCertificate {
    pub fn added_total(&self) -> usize {
        self.stages.iter().map(|s| s.added.len()).sum()
    }

    /// Every attaching map, one per line, as `stage kind: pr1 | pr2`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for s in &self.stages {
            for a in &s.attachments {
                let what = match &a.map {
                    AttachmentKind::Face { index } => format!("face {index}"),
                    AttachmentKind::Phi { r, b } => format!("phi r={r} b={b:?}"),
                    AttachmentKind::Psi {
                        r, z, w: Some(w), ..
                    } => format!("psi r={r} z={z} w={w}"),
                    AttachmentKind::Psi { r, z, .. } => format!("psi r={r} z={z}"),
                };
                out.push_str(&format!(
                    "stage {} {what} {}: {} | {}\n",
                    s.stage, a.domain, a.pr1, a.pr2
                ));
            }
        }
        out
    }
}

struct Attached {
    images: Vec<CellId>,
    failure: Option<String>,
}

/// Pushes `dom` into the ambient along a vertex map, checking marks
/// against `before`, and returns the images of the cells in `new`.
fn attach_along(
    amb: &Ambient,
    before: &MarkedSSet,
    dom: &MarkedSSet,
    new: &CellSet,
    vmap: &dyn Fn(CellId) -> CellId,
) -> Result<Attached> {
    let mut images = Vec::new();
    let mut failure = None;
    for c in 0..dom.len() {
        let vs: Vec<CellId> = dom
            .underlying
            .cell_vertices(c)
            .iter()
            .map(|&v| vmap(v))
            .collect();
        let s = amb.nerve.simplex(&vs).ok_or_else(|| {
            Error::NotSimplicial(format!("{} has no image path", dom.underlying.label(c)))
        })?;
        if failure.is_none() && dom.is_cell_marked(c) && !before.is_marked(&s) {
            failure = Some(format!(
                "{} is marked but its image {} is not",
                dom.underlying.label(c),
                amb.product.sset.simplex_text(&s)
            ));
        }
        if new.contains(&c) && !s.is_degenerate() {
            images.push(s.base);
        }
    }
    Ok(Attached { images, failure })
}

fn text(values: Vec<usize>, codomain: isize) -> String {
    MonotoneMap::new(values, codomain).map_or_else(|e| format!("<{e}>"), |f| f.to_string())
}

fn labels(amb: &Ambient, cells: impl IntoIterator<Item = CellId>) -> Vec<String> {
    cells
        .into_iter()
        .map(|c| amb.label(c).to_string())
        .collect()
}

struct Runner<'a> {
    amb: &'a Ambient,
    current: MarkedSSet,
    gadgets: HashMap<Gadget, MarkedSSet>,
}

impl Runner<'_> {
    fn gadget(&mut self, g: Gadget) -> Result<MarkedSSet> {
        if let Some(x) = self.gadgets.get(&g) {
            return Ok(x.clone());
        }
        let x = gadget(&g)?;
        self.gadgets.insert(g, x.clone());
        Ok(x)
    }

    /// The marks of `g2` not in `g1`, both on the same standard simplex.
    fn difference(&mut self, g1: Gadget, g2: Gadget) -> Result<(MarkedSSet, CellSet)> {
        let a = self.gadget(g1)?;
        let b = self.gadget(g2)?;
        let new = b
            .marked_cells()
            .difference(&a.marked_cells())
            .copied()
            .collect();
        Ok((a, new))
    }

    fn finish(
        &mut self,
        stage: u8,
        anodyne: &str,
        before: MarkedSSet,
        attachments: Vec<Attachment>,
        expected: &[&ExtraMark],
        failure: Option<String>,
    ) -> StageRecord {
        let amb = self.amb;
        let added: CellSet = self
            .current
            .marked_cells()
            .difference(&before.marked_cells())
            .copied()
            .collect();
        let expected_cells: CellSet = expected.iter().map(|e| e.cell).collect();
        let entire = self.current.same_underlying(&before);
        let within_target = self.current.marks_within(&amb.target);
        let preserved = attachments.iter().all(|a| a.preserves_marking);
        let verified =
            failure.is_none() && preserved && entire && within_target && added == expected_cells;
        StageRecord {
            stage,
            anodyne: anodyne.to_string(),
            marks_before: before.marked_cells().into_iter().collect(),
            marks_after: self.current.marked_cells().into_iter().collect(),
            added: labels(amb, added),
            expected: labels(amb, expected_cells),
            attachments,
            entire,
            within_target,
            verified,
            failure,
        }
    }

    fn stage_one(
        &mut self,
        expected: &[&ExtraMark],
        sub: Option<&FiltrationCertificate>,
    ) -> Result<StageRecord> {
        let amb = self.amb;
        let before = self.current.clone();
        let mut attachments = Vec::new();
        let mut failure = None;
        if amb.ell >= 0 {
            let smaller = Ambient::new(amb.ell - 1, amb.m)?;
            let new: CellSet = smaller.extra_cells();
            let width = amb.m as usize + 1;
            let mut claimed = before.marked_cells();
            let mut batch = Vec::new();
            for i in 0..=amb.ell as usize {
                let vmap = |v: CellId| {
                    let (a, c) = (v / width, v % width);
                    amb.vertex(if a >= i { a + 1 } else { a }, c)
                };
                let at = attach_along(amb, &before, &smaller.s0, &new, &vmap)?;
                let coface = face(amb.ell + 4, i)?;
                let fresh: Vec<CellId> = at
                    .images
                    .iter()
                    .copied()
                    .filter(|&c| claimed.insert(c))
                    .collect();
                attachments.push(Attachment {
                    map: AttachmentKind::Face { index: i },
                    domain: format!("S0({},{})", amb.ell - 1, amb.m),
                    pr1: coface.to_string(),
                    pr2: MonotoneMap::identity(amb.m).to_string(),
                    new_marks: labels(amb, at.images.iter().copied()),
                    redundant: fresh.is_empty(),
                    preserves_marking: at.failure.is_none(),
                });
                if failure.is_none() {
                    failure = at.failure.map(|f| format!("face {i}: {f}"));
                }
                batch.extend(fresh);
            }
            self.current.add_marks(batch)?;
            if sub.is_some_and(|s| !s.passed) && failure.is_none() {
                failure = Some(format!(
                    "smaller problem ({},{}) failed",
                    amb.ell - 1,
                    amb.m
                ));
            }
        }
        Ok(self.finish(1, "induction", before, attachments, expected, failure))
    }

    fn stage_two(&mut self, expected: &[&ExtraMark]) -> Result<StageRecord> {
        let amb = self.amb;
        let (ell, m) = (amb.ell, amb.m);
        let before = self.current.clone();
        let mut attachments = Vec::new();
        let mut failure = None;
        let mut claimed = before.marked_cells();
        let mut batch = Vec::new();
        for r in m.max(ell + 4)..=ell + 4 + m {
            let height = (ell + 4 + m - r) as usize;
            let right = r - ell - 5;
            let (dom, new) = self.difference(
                Gadget::DeltaThree {
                    left: ell,
                    right,
                    sharp: false,
                },
                Gadget::DeltaThree {
                    left: ell,
                    right,
                    sharp: true,
                },
            )?;
            let seqs: Vec<Vec<usize>> = if ell < 0 {
                vec![Vec::new()]
            } else {
                (0..=height)
                    .combinations_with_replacement(ell as usize + 1)
                    .collect()
            };
            for b in seqs {
                let points: Vec<(usize, usize)> = (0..=r as usize)
                    .map(|i| {
                        if (i as isize) <= ell {
                            (i, b[i])
                        } else if (i as isize) <= ell + 4 {
                            (i, height)
                        } else {
                            ((ell + 4) as usize, (m - r + i as isize) as usize)
                        }
                    })
                    .collect();
                let vmap = |v: CellId| amb.vertex(points[v].0, points[v].1);
                let at = attach_along(amb, &before, &dom, &new, &vmap)?;
                let fresh: Vec<CellId> = at
                    .images
                    .iter()
                    .copied()
                    .filter(|&c| claimed.insert(c))
                    .collect();
                attachments.push(Attachment {
                    map: AttachmentKind::Phi {
                        r: r as usize,
                        b: b.clone(),
                    },
                    domain: Gadget::DeltaThree {
                        left: ell,
                        right,
                        sharp: false,
                    }
                    .expr(),
                    pr1: text(points.iter().map(|p| p.0).collect(), ell + 4),
                    pr2: text(points.iter().map(|p| p.1).collect(), m),
                    new_marks: labels(amb, at.images.iter().copied()),
                    redundant: fresh.is_empty(),
                    preserves_marking: at.failure.is_none(),
                });
                if failure.is_none() {
                    failure = at.failure.map(|f| format!("phi r={r} b={b:?}: {f}"));
                }
                batch.extend(fresh);
            }
        }
        self.current.add_marks(batch)?;
        Ok(self.finish(2, "saturation", before, attachments, expected, failure))
    }

    /// Stages 3 to 6: one thinness attachment per mark, in batches of
    /// equal `z` (a single batch for stage 5).
    fn thinness_stage(&mut self, stage: u8, expected: &[&ExtraMark]) -> Result<StageRecord> {
        let amb = self.amb;
        let (ell, m) = (amb.ell, amb.m);
        let top = (ell + 4) as usize;
        let before = self.current.clone();
        let mut batches: BTreeMap<usize, Vec<&ExtraMark>> = BTreeMap::new();
        for e in expected {
            let key = if stage == 5 { 0 } else { e.z.unwrap_or(0) };
            batches.entry(key).or_default().push(e);
        }
        let mut attachments = Vec::new();
        let mut failure: Option<String> = None;
        for batch in batches.values() {
            let start = self.current.clone();
            let mut fresh = Vec::new();
            for e in batch {
                let (p, q) = (amb.pr1(e.cell), amb.pr2(e.cell));
                let r = p.len() - 1;
                let Some(z) = e.z else {
                    failure.get_or_insert_with(|| format!("{}: no insertion position", e.sigma));
                    continue;
                };
                let height = m - r as isize + z as isize;
                let a = if stage != 4 || z == r { top } else { p[z + 1] };
                if height < 0 || q[z] as isize != height || (stage == 4 && z < r && a + 1 < top) {
                    failure.get_or_insert_with(|| {
                        format!("{}: inserted vertex leaves the path", e.sigma)
                    });
                    continue;
                }
                let mut points: Vec<(usize, usize)> =
                    p.iter().copied().zip(q.iter().copied()).collect();
                points.insert(z + 1, (a, height as usize));
                let (rr, k) = (r as isize + 1, z as isize + 1);
                let (dom, new) = self.difference(
                    Gadget::DeltaKPrime { m: rr, k },
                    Gadget::DeltaKDoublePrime { m: rr, k },
                )?;
                let vmap = |v: CellId| amb.vertex(points[v].0, points[v].1);
                let at = attach_along(amb, &start, &dom, &new, &vmap)?;
                if at.images != [e.cell] {
                    failure.get_or_insert_with(|| {
                        format!(
                            "{}: attachment marks {:?}",
                            e.sigma,
                            labels(amb, at.images.clone())
                        )
                    });
                }
                if let Some(f) = &at.failure {
                    failure.get_or_insert_with(|| format!("psi for {} (z={z}): {f}", e.sigma));
                }
                attachments.push(Attachment {
                    map: AttachmentKind::Psi {
                        r,
                        z,
                        w: if stage == 6 { e.w } else { None },
                        sigma: e.sigma.clone(),
                    },
                    domain: Gadget::DeltaKPrime { m: rr, k }.expr(),
                    pr1: text(points.iter().map(|p| p.0).collect(), ell + 4),
                    pr2: text(points.iter().map(|p| p.1).collect(), m),
                    new_marks: labels(amb, at.images.iter().copied()),
                    redundant: at.images.iter().all(|&c| start.is_cell_marked(c)),
                    preserves_marking: at.failure.is_none(),
                });
                fresh.extend(at.images);
            }
            self.current.add_marks(fresh)?;
        }
        Ok(self.finish(stage, "thinness", before, attachments, expected, failure))
    }
}

pub fn run_filtration(ell: isize, m: isize) -> Result<FiltrationCertificate> {
    run_filtration_with(ell, m, &Limits::default())
}

/// Rebuilds `S₀ ↪ S₁ ↪ … ↪ S₆` for `(ℓ, m)` and certifies every step.
pub fn run_filtration_with(ell: isize, m: isize, limits: &Limits) -> Result<FiltrationCertificate> {
    if ell > limits.max_ell {
        return Err(out_of_range("ℓ", ell, format!("[-1, {}]", limits.max_ell)));
    }
    if m > limits.max_m {
        return Err(out_of_range("m", m, format!("[0, {}]", limits.max_m)));
    }
    let amb = Ambient::new(ell, m)?;
    let sub = if ell >= 0 {
        Some(run_filtration_with(ell - 1, m, limits)?)
    } else {
        None
    };
    let (extra, bad) = classify_on(&amb);
    let mut runner = Runner {
        amb: &amb,
        current: amb.s0.clone(),
        gadgets: HashMap::new(),
    };
    let of_stage = |k: u8| -> Vec<&ExtraMark> { extra.iter().filter(|e| e.stage == k).collect() };
    let mut stages = vec![runner.stage_one(&of_stage(1), sub.as_ref())?];
    stages.push(runner.stage_two(&of_stage(2))?);
    for k in 3..=6 {
        stages.push(runner.thinness_stage(k, &of_stage(k))?);
    }
    let final_equals_target = runner.current == amb.target;
    let classifier_matches = bad.is_empty() && stages.iter().all(|s| s.added == s.expected);
    let passed = final_equals_target
        && classifier_matches
        && stages.iter().all(|s| s.verified)
        && sub.as_ref().is_none_or(|s| s.passed);
    Ok(FiltrationCertificate {
        params: Params { ell, m },
        cells: amb.len(),
        s0_marks: amb.s0.marked_count(),
        target_marks: amb.target.marked_count(),
        extra_marks: extra,
        stages,
        final_equals_target,
        classifier_matches,
        passed,
        sub_certificate: sub.map(Box::new),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bottom_case() {
        let cert = run_filtration(-1, 0).unwrap();
        assert!(cert.passed, "{:#?}", cert.stages);
        assert_eq!(cert.added_total(), 4);
        assert!(cert.stages[0].attachments.is_empty());
        assert_eq!(cert.stages[1].added.len(), 4);
    }

    #[test]
    fn small_cases() {
        for (ell, m) in [(-1, 1), (0, 0), (0, 1)] {
            let cert = run_filtration(ell, m).unwrap();
            for s in &cert.stages {
                assert!(
                    s.verified,
                    "({ell},{m}) stage {}: {:?} added {:?} expected {:?}",
                    s.stage, s.failure, s.added, s.expected
                );
            }
            assert!(cert.passed);
        }
    }

    #[test]
    fn limits_are_enforced() {
        assert!(run_filtration(2, 0).is_err());
        assert!(run_filtration(0, 3).is_err());
    }
}

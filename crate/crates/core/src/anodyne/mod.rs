//! Elementary anodyne extensions, Leibniz constructions and lifting checks.

mod lifting;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::marking::{gadget, pretensor_on, tensor_on, Gadget, MarkedMap, MarkedSSet};
use crate::sset::{CellSet, Product, Simplex};

pub use lifting::{
    has_rlp, is_complicial, is_n_complicial, is_saturated, Bounds, CheckedProblem, Failure,
    RlpResult, Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnodyneKind {
    Horn,
    Thinness,
    Saturation,
    Triviality,
}

/// One elementary anodyne extension, realized as a marked inclusion.
#[derive(Clone, Debug)]
pub struct AnodyneGen {
    pub kind: AnodyneKind,
    pub params: Vec<isize>,
    pub realized: MarkedMap,
}

impl fmt::Display for AnodyneGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            AnodyneKind::Horn => "horn",
            AnodyneKind::Thinness => "thinness",
            AnodyneKind::Saturation => "saturation",
            AnodyneKind::Triviality => "triviality",
        };
        let params: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(f, "{name}({})", params.join(","))
    }
}

impl AnodyneGen {
    pub fn is_entire(&self) -> bool {
        self.realized.is_entire()
    }

    /// Marks of the codomain not coming from marks of the domain.
    pub fn new_marks(&self) -> CellSet {
        self.realized.new_marks()
    }
}

fn entire_gen(
    kind: AnodyneKind,
    params: Vec<isize>,
    from: Gadget,
    to: Gadget,
) -> Result<AnodyneGen> {
    let realized = MarkedMap::entire(gadget(&from)?, gadget(&to)?)?;
    Ok(AnodyneGen {
        kind,
        params,
        realized,
    })
}

/// `Λᵏ[m] → Δᵏ[m]` for `(m, k)`, `Δᵏ[m]′ → Δᵏ[m]″` for `(m, k)`,
/// `Δ^ℓ[3]_eq → Δ^ℓ[3]_♯` for `(ℓ)` or the two-sided `(ℓ′, ℓ)`, and
/// `Δ[p] → Δ[p]_t` for `(p)`.
pub fn generator(kind: AnodyneKind, params: &[isize]) -> Result<AnodyneGen> {
    let want = |n: &[usize]| -> Result<()> {
        if n.contains(&params.len()) {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{kind:?} takes {n:?} parameters, got {}",
                params.len()
            )))
        }
    };
    match kind {
        AnodyneKind::Horn => {
            want(&[2])?;
            let (m, k) = (params[0], params[1]);
            let from = gadget(&Gadget::Horn { m, k })?;
            let to = gadget(&Gadget::DeltaK { m, k })?;
            let realized = MarkedMap::by_labels(from, to)?;
            Ok(AnodyneGen {
                kind,
                params: params.to_vec(),
                realized,
            })
        }
        AnodyneKind::Thinness => {
            want(&[2])?;
            let (m, k) = (params[0], params[1]);
            if m < 2 {
                return Err(out_of_range("thinness dimension m", m, "[2, inf)"));
            }
            entire_gen(
                kind,
                params.to_vec(),
                Gadget::DeltaKPrime { m, k },
                Gadget::DeltaKDoublePrime { m, k },
            )
        }
        AnodyneKind::Saturation => {
            want(&[1, 2])?;
            let (left, right) = if params.len() == 1 {
                (params[0], -1)
            } else {
                (params[0], params[1])
            };
            entire_gen(
                kind,
                params.to_vec(),
                Gadget::DeltaThree {
                    left,
                    right,
                    sharp: false,
                },
                Gadget::DeltaThree {
                    left,
                    right,
                    sharp: true,
                },
            )
        }
        AnodyneKind::Triviality => {
            want(&[1])?;
            let p = params[0];
            entire_gen(kind, params.to_vec(), Gadget::Delta(p), Gadget::DeltaT(p))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CofibrationKind {
    /// `∂Δ[m] → Δ[m]`.
    Boundary,
    /// `Δ[m] → Δ[m]_t`.
    Marking,
}

pub fn cofibration_generator(kind: CofibrationKind, m: isize) -> Result<MarkedMap> {
    match kind {
        CofibrationKind::Boundary => {
            MarkedMap::by_labels(gadget(&Gadget::Boundary(m))?, gadget(&Gadget::Delta(m))?)
        }
        CofibrationKind::Marking => {
            MarkedMap::entire(gadget(&Gadget::Delta(m))?, gadget(&Gadget::DeltaT(m))?)
        }
    }
}

/// Adds to `x` the images of the new marks of an entire generator along
/// `attach: gen.domain -> x`. Returns the result and the cells newly marked.
pub fn attach_marks(
    x: &MarkedSSet,
    gen: &AnodyneGen,
    attach: &MarkedMap,
) -> Result<(MarkedSSet, CellSet)> {
    if !gen.is_entire() {
        return Err(Error::NotEntire(format!(
            "{gen} changes the underlying object"
        )));
    }
    attach_entire(x, &gen.realized, attach)
}

/// [`attach_marks`] for an arbitrary entire map `i: A -> B`.
pub fn attach_entire(
    x: &MarkedSSet,
    i: &MarkedMap,
    attach: &MarkedMap,
) -> Result<(MarkedSSet, CellSet)> {
    if attach.domain != i.domain {
        return Err(Error::NotSimplicial(
            "attaching map does not start at the generator's domain".into(),
        ));
    }
    if !attach.codomain.same_underlying(x) {
        return Err(Error::NotSimplicial(
            "attaching map does not land in the target".into(),
        ));
    }
    if !attach.codomain.marks_within(x) {
        return Err(Error::NotSimplicial(
            "attaching map lands in a larger marking".into(),
        ));
    }
    let mut out = x.clone();
    let images: Vec<usize> = i
        .new_marks()
        .into_iter()
        .map(|c| attach.apply(&i.domain.underlying.cell_simplex(c)))
        .filter(|s| !s.is_degenerate())
        .map(|s| s.base)
        .collect();
    let added = out.add_marks(images)?;
    Ok((out, added))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monoidal {
    Pretensor,
    Tensor,
}

/// The Leibniz construction of two inclusions `f: A -> B`, `g: C -> D`:
/// the union of `B⋄C` and `A⋄D` inside `B⋄D`.
#[derive(Clone, Debug)]
pub struct Leibniz {
    pub product: Product,
    pub codomain: MarkedSSet,
    /// Cells of the codomain in the union.
    pub domain_cells: CellSet,
    /// Marks of the union, as codomain cells.
    pub domain_marks: CellSet,
    pub domain: MarkedSSet,
    pub inclusion: MarkedMap,
}

impl Leibniz {
    /// Bijective on cells and on marks.
    pub fn is_isomorphism(&self) -> bool {
        self.domain_cells.len() == self.codomain.len()
            && self.domain_marks == self.codomain.marked_cells()
    }

    /// Whether domain and codomain share the underlying object.
    pub fn is_entire(&self) -> bool {
        self.domain_cells.len() == self.codomain.len()
    }

    /// The domain as a marking of the codomain's underlying object; only
    /// defined when the construction is entire.
    pub fn as_entire(&self) -> Result<MarkedSSet> {
        if !self.is_entire() {
            return Err(Error::NotEntire(
                "the Leibniz domain is a proper subobject".into(),
            ));
        }
        MarkedSSet::new(self.codomain.underlying.clone(), &self.domain_marks)
    }
}

fn apply_inclusion(f: &MarkedMap, s: &Simplex) -> Simplex {
    f.apply(s)
}

pub fn leibniz(f: &MarkedMap, g: &MarkedMap, which: Monoidal) -> Result<Leibniz> {
    if !f.is_inclusion() || !g.is_inclusion() {
        return Err(Error::NotInclusion(
            "Leibniz constructions need inclusions".into(),
        ));
    }
    let op = |p: &Product, x: &MarkedSSet, y: &MarkedSSet| match which {
        Monoidal::Pretensor => pretensor_on(p, x, y),
        Monoidal::Tensor => tensor_on(p, x, y),
    };
    let (a, b) = (&f.domain, &f.codomain);
    let (c, d) = (&g.domain, &g.codomain);
    let product = Product::new(b.underlying.clone(), d.underlying.clone());
    let codomain = op(&product, b, d)?;
    let mut cells = CellSet::new();
    let mut marks = CellSet::new();
    // B⋄C via id × g, then A⋄D via f × id
    let bc = Product::new(b.underlying.clone(), c.underlying.clone());
    let bc_marked = op(&bc, b, c)?;
    for (cell, (x, y)) in bc.pairs().iter().enumerate() {
        let target = product
            .cell_of(x, &apply_inclusion(g, y))
            .expect("inclusions keep product cells nondegenerate");
        cells.insert(target);
        if bc_marked.is_cell_marked(cell) {
            marks.insert(target);
        }
    }
    let ad = Product::new(a.underlying.clone(), d.underlying.clone());
    let ad_marked = op(&ad, a, d)?;
    for (cell, (x, y)) in ad.pairs().iter().enumerate() {
        let target = product
            .cell_of(&apply_inclusion(f, x), y)
            .expect("inclusions keep product cells nondegenerate");
        cells.insert(target);
        if ad_marked.is_cell_marked(cell) {
            marks.insert(target);
        }
    }
    let with_marks = MarkedSSet::new(codomain.underlying.clone(), &marks)?;
    let (domain, inclusion_cells) = with_marks.restrict_to(&cells)?;
    let inclusion = MarkedMap::inclusion(domain.clone(), codomain.clone(), &inclusion_cells)?;
    Ok(Leibniz {
        product,
        codomain,
        domain_cells: cells,
        domain_marks: marks,
        domain,
        inclusion,
    })
}

pub fn leibniz_pretensor(f: &MarkedMap, g: &MarkedMap) -> Result<Leibniz> {
    leibniz(f, g, Monoidal::Pretensor)
}

pub fn leibniz_tensor(f: &MarkedMap, g: &MarkedMap) -> Result<Leibniz> {
    leibniz(f, g, Monoidal::Tensor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_adds_four_edges() {
        let g = generator(AnodyneKind::Saturation, &[-1]).unwrap();
        assert!(g.is_entire());
        let labels: Vec<String> = g
            .new_marks()
            .into_iter()
            .map(|c| g.realized.codomain.underlying.label(c).to_string())
            .collect();
        assert_eq!(labels, vec!["[0 1]", "[0 3]", "[1 2]", "[2 3]"]);
    }

    #[test]
    fn thinness_adds_the_kth_face() {
        let g = generator(AnodyneKind::Thinness, &[2, 1]).unwrap();
        let new = g.new_marks();
        assert_eq!(new.len(), 1);
        let c = *new.iter().next().unwrap();
        assert_eq!(g.realized.codomain.underlying.cell_vertices(c), &[0, 2]);
        assert!(generator(AnodyneKind::Thinness, &[1, 0]).is_err());
    }

    #[test]
    fn horn_is_an_inclusion() {
        let g = generator(AnodyneKind::Horn, &[3, 2]).unwrap();
        assert!(!g.is_entire());
        assert!(g.realized.is_inclusion());
        assert!(attach_marks(
            &g.realized.codomain,
            &g,
            &MarkedMap::entire(g.realized.domain.clone(), g.realized.domain.clone()).unwrap()
        )
        .is_err());
    }

    #[test]
    fn marking_inclusion() {
        let i = cofibration_generator(CofibrationKind::Marking, 2).unwrap();
        assert_eq!(i.new_marks().len(), 1);
        let b = cofibration_generator(CofibrationKind::Boundary, 2).unwrap();
        assert_eq!(b.domain.len(), 6);
        assert!(b.is_inclusion());
    }

    #[test]
    fn triviality_attachment_adds_one_mark() {
        let g = generator(AnodyneKind::Triviality, &[2]).unwrap();
        let x = gadget(&Gadget::Delta(3)).unwrap();
        // the face [0 1 3] of Δ[3]
        let face = x.underlying.cells_of_dim(2)[1];
        assert_eq!(x.underlying.cell_vertices(face), &[0, 1, 3]);
        let cells: Vec<usize> = (0..g.realized.domain.len())
            .map(|c| {
                let vs: Vec<usize> = g
                    .realized
                    .domain
                    .underlying
                    .cell_vertices(c)
                    .iter()
                    .map(|&v| [0, 1, 3][v])
                    .collect();
                (0..x.len())
                    .find(|&d| x.underlying.cell_vertices(d) == vs.as_slice())
                    .unwrap()
            })
            .collect();
        let attach = MarkedMap::inclusion(g.realized.domain.clone(), x.clone(), &cells).unwrap();
        let (y, added) = attach_marks(&x, &g, &attach).unwrap();
        assert_eq!(added.into_iter().collect::<Vec<_>>(), vec![face]);
        // attaching again changes nothing
        let attach = MarkedMap::inclusion(g.realized.domain.clone(), y.clone(), &cells).unwrap();
        let (z, added) = attach_marks(&y, &g, &attach).unwrap();
        assert!(added.is_empty());
        assert_eq!(z, y);
    }

    #[test]
    fn leibniz_with_identity_is_iso() {
        let f = generator(AnodyneKind::Horn, &[2, 0]).unwrap().realized;
        let id = MarkedMap::entire(
            gadget(&Gadget::Delta(1)).unwrap(),
            gadget(&Gadget::Delta(1)).unwrap(),
        )
        .unwrap();
        for which in [Monoidal::Pretensor, Monoidal::Tensor] {
            assert!(leibniz(&f, &id, which).unwrap().is_isomorphism());
            assert!(leibniz(&id, &f, which).unwrap().is_isomorphism());
        }
    }

    #[test]
    fn triviality_leibniz_is_entire() {
        for p in 1..=3 {
            for m in 0..=2 {
                let f = generator(AnodyneKind::Triviality, &[p]).unwrap().realized;
                let g = cofibration_generator(CofibrationKind::Boundary, m).unwrap();
                let l = leibniz_tensor(&f, &g).unwrap();
                assert!(l.is_entire());
                let dom = l.as_entire().unwrap();
                assert!(dom.marks_within(&l.codomain));
                for r in 0..p as usize {
                    assert_eq!(
                        dom.marked_of_dim(r),
                        l.codomain.marked_of_dim(r),
                        "p={p} m={m} r={r}"
                    );
                }
            }
        }
    }
}

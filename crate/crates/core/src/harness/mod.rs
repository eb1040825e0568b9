//! Corpus-wide property suites with JSON reports.

mod corpus;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::marking::{gadget, isomorphic_marked, pretensor_on, tensor_on, Gadget, MarkedSSet};
use crate::sset::{opposite_simplex, product_size, CellId, CellSet, FinSSet, Product, Simplex};

pub use corpus::{gadget_list, Corpus, CorpusConfig, CorpusEntry, PAIR_CELLS, TRIPLE_CELLS};

/// Cell and mark labels of a (shrunk) counterexample object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectDump {
    pub name: String,
    pub cells: Vec<String>,
    pub marked: Vec<String>,
}

impl ObjectDump {
    pub fn of(name: &str, x: &MarkedSSet) -> ObjectDump {
        ObjectDump {
            name: name.to_string(),
            cells: (0..x.len())
                .map(|c| x.underlying.label(c).to_string())
                .collect(),
            marked: x
                .marked_cells()
                .into_iter()
                .map(|c| x.underlying.label(c).to_string())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub case: String,
    pub detail: String,
    pub counterexample: Vec<ObjectDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<CaseFailure>,
    /// Findings that are part of the suite's claim, e.g. a witness.
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl SuiteReport {
    pub(crate) fn new(suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            cases: 0,
            passed: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub(crate) fn record(
        &mut self,
        case: impl FnOnce() -> String,
        outcome: std::result::Result<(), (String, Vec<ObjectDump>)>,
    ) {
        self.cases += 1;
        match outcome {
            Ok(()) => self.passed += 1,
            Err((detail, counterexample)) => self.failures.push(CaseFailure {
                case: case(),
                detail,
                counterexample,
            }),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

type Outcome = std::result::Result<(), (String, Vec<ObjectDump>)>;

/// Entry pairs sharing a pair of underlying objects.
pub type PairGroup = ((usize, usize), Vec<(usize, usize)>);

/// Entry triples sharing a triple of underlying objects.
pub type TripleGroup = ((usize, usize, usize), Vec<(usize, usize, usize)>);

/// Deletes maximal cells of `x` one at a time while `fails` persists.
pub fn shrink(x: &MarkedSSet, fails: &dyn Fn(&MarkedSSet) -> bool) -> MarkedSSet {
    let mut cur = x.clone();
    'outer: loop {
        let cofaces = cur.underlying.cofaces();
        for c in (0..cur.len()).rev() {
            if !cofaces[c].is_empty() {
                continue;
            }
            let keep: CellSet = (0..cur.len()).filter(|&d| d != c).collect();
            let (smaller, _) = cur
                .restrict_to(&keep)
                .expect("removing a maximal cell keeps faces closed");
            if fails(&smaller) {
                cur = smaller;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// Shrinks both members of a failing pair.
fn shrink_pair(
    x: &MarkedSSet,
    y: &MarkedSSet,
    names: (&str, &str),
    fails: &dyn Fn(&MarkedSSet, &MarkedSSet) -> bool,
) -> Vec<ObjectDump> {
    let x2 = shrink(x, &|a| fails(a, y));
    let y2 = shrink(y, &|b| fails(&x2, b));
    vec![ObjectDump::of(names.0, &x2), ObjectDump::of(names.1, &y2)]
}

/// Checks that a cell map is a marked isomorphism: bijective, commuting
/// with faces, and matching marks in both directions.
pub fn check_cell_iso(
    x: &MarkedSSet,
    y: &MarkedSSet,
    map: &[Option<CellId>],
) -> std::result::Result<(), String> {
    check_iso_with(x, y, map, false)
}

fn check_iso_with(
    x: &MarkedSSet,
    y: &MarkedSSet,
    map: &[Option<CellId>],
    reversed: bool,
) -> std::result::Result<(), String> {
    check_structure(&x.underlying, &y.underlying, map, reversed)?;
    check_marks(x, y, map)
}

/// The unmarked part of [`check_cell_iso`]; with `reversed` the source is
/// read as its opposite.
fn check_structure(
    x: &FinSSet,
    y: &FinSSet,
    map: &[Option<CellId>],
    reversed: bool,
) -> std::result::Result<(), String> {
    if x.len() != y.len() || map.len() != x.len() {
        return Err(format!("{} cells against {}", x.len(), y.len()));
    }
    let mut seen = vec![false; y.len()];
    for (c, d) in map.iter().enumerate() {
        let d = d.ok_or_else(|| format!("{} has no image", x.label(c)))?;
        if std::mem::replace(&mut seen[d], true) {
            return Err(format!("{} is hit twice", y.label(d)));
        }
    }
    for (c, d) in map.iter().enumerate() {
        let (cx, cy) = (x.cell(c), y.cell(d.unwrap()));
        if cx.dim != cy.dim {
            return Err(format!("{} changes dimension", x.label(c)));
        }
        for (i, g) in cy.faces.iter().enumerate() {
            let ok = if reversed {
                let f = &cx.faces[cx.dim - i];
                map[f.base] == Some(g.base) && f.degen.opposite() == g.degen
            } else {
                let f = &cx.faces[i];
                map[f.base] == Some(g.base) && f.degen == g.degen
            };
            if !ok {
                return Err(format!("faces of {} do not match", x.label(c)));
            }
        }
    }
    Ok(())
}

/// Marks agree along a cell bijection.
fn check_marks(
    x: &MarkedSSet,
    y: &MarkedSSet,
    map: &[Option<CellId>],
) -> std::result::Result<(), String> {
    let word = |b: bool| if b { "marked" } else { "unmarked" };
    for (c, d) in map.iter().enumerate() {
        let d = d.expect("checked bijection");
        if x.is_cell_marked(c) != y.is_cell_marked(d) {
            return Err(format!(
                "{} is {} but {} is {}",
                x.underlying.label(c),
                word(x.is_cell_marked(c)),
                y.underlying.label(d),
                word(y.is_cell_marked(d))
            ));
        }
    }
    Ok(())
}

/// Pair cases grouped by the underlying objects, so that each product is
/// built once.
#[derive(Clone, Debug, Default)]
pub struct PairPlan {
    pub groups: Vec<PairGroup>,
    pub skipped: usize,
}

/// All gadget pairs, and pairs with a derived member whose product fits
/// [`Corpus::pair_cells`].
pub fn pair_plan(corpus: &Corpus) -> PairPlan {
    let mut groups: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    let mut sizes: HashMap<(usize, usize), usize> = HashMap::new();
    let mut skipped = 0;
    for (i, a) in corpus.entries.iter().enumerate() {
        for (j, b) in corpus.entries.iter().enumerate() {
            let key = (a.underlying, b.underlying);
            let size = *sizes.entry(key).or_insert_with(|| {
                product_size(&corpus.underlyings[key.0], &corpus.underlyings[key.1])
            });
            if (a.gadget.is_some() && b.gadget.is_some()) || size <= corpus.pair_cells {
                groups.entry(key).or_default().push((i, j));
            } else {
                skipped += 1;
            }
        }
    }
    PairPlan {
        groups: groups.into_iter().collect(),
        skipped,
    }
}

impl PairPlan {
    pub fn cases(&self) -> usize {
        self.groups.iter().map(|(_, c)| c.len()).sum()
    }

    fn note(&self, corpus: &Corpus) -> String {
        format!(
            "{} pairs checked, {} pairs with a derived member and more than {} product cells not checked",
            self.cases(),
            self.skipped,
            corpus.pair_cells
        )
    }
}

fn inclusion_on(p: &Product, x: &MarkedSSet, y: &MarkedSSet) -> std::result::Result<(), String> {
    let pre = pretensor_on(p, x, y).map_err(|e| e.to_string())?;
    let ten = tensor_on(p, x, y).map_err(|e| e.to_string())?;
    if !Arc::ptr_eq(&pre.underlying, &ten.underlying) && pre.underlying != ten.underlying {
        return Err("underlying objects differ".into());
    }
    if !Arc::ptr_eq(&pre.underlying, &p.sset) && pre.underlying != p.sset {
        return Err("underlying object is not the product".into());
    }
    match (0..pre.len()).find(|&c| pre.is_cell_marked(c) && !ten.is_cell_marked(c)) {
        Some(c) => Err(format!(
            "{} is marked in the pretensor only",
            p.sset.label(c)
        )),
        None => Ok(()),
    }
}

fn inclusion(x: &MarkedSSet, y: &MarkedSSet) -> std::result::Result<(), String> {
    let p = Product::new(x.underlying.clone(), y.underlying.clone());
    inclusion_on(&p, x, y)
}

/// `marked(X⊠Y) ⊆ marked(X⊗Y)` with the same underlying object, on the
/// pairs of [`pair_plan`], plus the worked example.
pub fn suite_equivalent_tensors(corpus: &Corpus) -> SuiteReport {
    let mut rep = SuiteReport::new("equivalent_tensors");
    let plan = pair_plan(corpus);
    for ((ua, ub), cases) in &plan.groups {
        let p = Product::new(
            corpus.underlyings[*ua].clone(),
            corpus.underlyings[*ub].clone(),
        );
        for &(i, j) in cases {
            let (a, b) = (&corpus.entries[i], &corpus.entries[j]);
            let outcome = inclusion_on(&p, &a.object, &b.object).map_err(|d| {
                let dumps = shrink_pair(&a.object, &b.object, (&a.name, &b.name), &|x, y| {
                    inclusion(x, y).is_err()
                });
                (d, dumps)
            });
            rep.record(|| format!("{} ; {}", a.name, b.name), outcome);
        }
    }
    rep.notes.push(plan.note(corpus));
    let table = worked_example_table();
    let want = [(true, true), (true, true), (false, true), (false, false)];
    let outcome: Outcome = if table.iter().map(|r| (r.pretensor, r.tensor)).eq(want) {
        Ok(())
    } else {
        Err((format!("worked example table {table:?}"), Vec::new()))
    };
    rep.record(|| "worked example deltat 2 ; delta 1".into(), outcome);
    rep
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRow {
    pub simplex: String,
    pub pretensor: bool,
    pub tensor: bool,
}

/// The four simplices of `Δ[2]_t × Δ[1]` discussed for the two markings.
pub fn worked_example_table() -> Vec<ExampleRow> {
    let x = gadget(&Gadget::DeltaT(2)).unwrap();
    let y = gadget(&Gadget::Delta(1)).unwrap();
    let p = Product::new(x.underlying.clone(), y.underlying.clone());
    let pre = pretensor_on(&p, &x, &y).unwrap();
    let ten = tensor_on(&p, &x, &y).unwrap();
    let nerve = crate::sset::NerveIndex::new(&p.sset);
    let rows: [(&[usize], &[usize]); 4] = [
        (&[1, 1, 2], &[0, 1, 1]),
        (&[0, 1, 2, 2], &[0, 0, 0, 1]),
        (&[0, 1, 2], &[0, 1, 1]),
        (&[0, 1, 2], &[0, 0, 1]),
    ];
    rows.iter()
        .map(|(a, b)| {
            let vs: Vec<CellId> = a
                .iter()
                .zip(b.iter())
                .map(|(&i, &j)| p.vertex(i, j))
                .collect();
            let c = nerve
                .cell(&vs)
                .expect("example simplices are nondegenerate");
            ExampleRow {
                simplex: p.sset.label(c).to_string(),
                pretensor: pre.is_cell_marked(c),
                tensor: ten.is_cell_marked(c),
            }
        })
        .collect()
}

/// The cell map `(X⊗Y)^op -> Y^op ⊗ X^op`, `(x, y) ↦ (y^op, x^op)`.
fn op_swap_map(xy: &Product, yx_op: &Product) -> Vec<Option<CellId>> {
    xy.pairs()
        .iter()
        .map(|(x, y)| yx_op.cell_of(&opposite_simplex(y), &opposite_simplex(x)))
        .collect()
}

/// Checks that `map` is a marked isomorphism `T^op -> S` without building
/// `T^op`: the `i`-th face of a cell of `T^op` is the opposite of the
/// `(r - i)`-th face in `T`.
pub fn check_op_iso(
    t: &MarkedSSet,
    s: &MarkedSSet,
    map: &[Option<CellId>],
) -> std::result::Result<(), String> {
    check_iso_with(t, s, map, true)
}

/// The swap map of a group, with the result of its structural check.
struct SwapPlan {
    map: Vec<Option<CellId>>,
    structure: std::result::Result<(), String>,
}

impl SwapPlan {
    fn new(p: &Product, q: &Product) -> SwapPlan {
        let map = op_swap_map(p, q);
        let structure = check_structure(&p.sset, &q.sset, &map, true);
        SwapPlan { map, structure }
    }
}

fn op_swap_on(
    p: &Product,
    q: &Product,
    plan: &SwapPlan,
    xs: (&MarkedSSet, &MarkedSSet),
    ops: (&MarkedSSet, &MarkedSSet),
) -> std::result::Result<(), String> {
    plan.structure.clone()?;
    let t = tensor_on(p, xs.0, xs.1).map_err(|e| e.to_string())?;
    let s = tensor_on(q, ops.1, ops.0).map_err(|e| e.to_string())?;
    check_marks(&t, &s, &plan.map)
}

fn op_swap_check(x: &MarkedSSet, y: &MarkedSSet) -> std::result::Result<(), String> {
    let (xo, yo) = (x.opposite(), y.opposite());
    let p = Product::new(x.underlying.clone(), y.underlying.clone());
    let q = Product::new(yo.underlying.clone(), xo.underlying.clone());
    op_swap_on(&p, &q, &SwapPlan::new(&p, &q), (x, y), (&xo, &yo))
}

/// Duality: `(X⊗Y)^op ≅ Y^op ⊗ X^op`, involutivity of op, and the
/// gadget dualities for horns, thinness and triviality extensions.
pub fn suite_op_duality(corpus: &Corpus) -> SuiteReport {
    let mut rep = SuiteReport::new("op_duality");
    for a in &corpus.entries {
        let outcome: Outcome = if a.object.opposite().opposite() == a.object {
            Ok(())
        } else {
            Err((
                "op is not an involution".into(),
                vec![ObjectDump::of(&a.name, &a.object)],
            ))
        };
        rep.record(|| format!("op(op({}))", a.name), outcome);
    }
    let ops: Vec<MarkedSSet> = corpus.entries.iter().map(|e| e.object.opposite()).collect();
    let mut registry = corpus.clone();
    let op_class: Vec<usize> = ops
        .iter()
        .map(|o| registry.class_of(&o.underlying))
        .collect();
    let plan = pair_plan(corpus);
    for ((ua, ub), cases) in &plan.groups {
        let p = Product::new(
            corpus.underlyings[*ua].clone(),
            corpus.underlyings[*ub].clone(),
        );
        let (i0, j0) = cases[0];
        let q = Product::new(
            registry.underlyings[op_class[j0]].clone(),
            registry.underlyings[op_class[i0]].clone(),
        );
        let swap = SwapPlan::new(&p, &q);
        for &(i, j) in cases {
            let (a, b) = (&corpus.entries[i], &corpus.entries[j]);
            let pair = (&a.object, &b.object);
            let outcome = op_swap_on(&p, &q, &swap, pair, (&ops[i], &ops[j])).map_err(|d| {
                let dumps = shrink_pair(&a.object, &b.object, (&a.name, &b.name), &|x, y| {
                    op_swap_check(x, y).is_err()
                });
                (d, dumps)
            });
            rep.record(|| format!("op(tensor({}, {}))", a.name, b.name), outcome);
        }
    }
    rep.notes.push(plan.note(corpus));
    let max_m = corpus
        .entries
        .iter()
        .filter_map(|e| match e.gadget {
            Some(Gadget::Horn { m, .. }) => Some(m),
            _ => None,
        })
        .max()
        .unwrap_or(3);
    for (g, dual) in gadget_duals(max_m) {
        let (x, y) = (gadget(&g).unwrap(), gadget(&dual).unwrap());
        let outcome: Outcome = if isomorphic_marked(&x.opposite(), &y) {
            Ok(())
        } else {
            Err((
                "dual gadget is not isomorphic".into(),
                vec![ObjectDump::of(&g.expr(), &x)],
            ))
        };
        rep.record(|| format!("op({}) ~ {}", g.expr(), dual.expr()), outcome);
    }
    rep
}

/// Pairs `(G, H)` with `G^op ≅ H`: horns, thinness gadgets and triviality
/// codomains.
pub fn gadget_duals(max_m: isize) -> Vec<(Gadget, Gadget)> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for k in 0..=m {
            out.push((Gadget::Horn { m, k }, Gadget::Horn { m, k: m - k }));
            out.push((Gadget::DeltaK { m, k }, Gadget::DeltaK { m, k: m - k }));
        }
    }
    for m in 2..=max_m {
        for k in 0..=m {
            out.push((
                Gadget::DeltaKPrime { m, k },
                Gadget::DeltaKPrime { m, k: m - k },
            ));
            out.push((
                Gadget::DeltaKDoublePrime { m, k },
                Gadget::DeltaKDoublePrime { m, k: m - k },
            ));
        }
    }
    for p in 1..=max_m {
        out.push((Gadget::DeltaT(p), Gadget::DeltaT(p)));
    }
    out
}

/// The image of `U ⋄ S` inside `X ⋄ S` along a subobject `U ⊆ X`, as
/// (cells, marks) of the ambient.
fn image_in(
    sub: &MarkedSSet,
    inclusion: &[CellId],
    s: &MarkedSSet,
    ambient: &Product,
    left: bool,
) -> (CellSet, CellSet) {
    let (p, m) = if left {
        let p = Product::new(sub.underlying.clone(), s.underlying.clone());
        let m = pretensor_on(&p, sub, s).unwrap();
        (p, m)
    } else {
        let p = Product::new(s.underlying.clone(), sub.underlying.clone());
        let m = pretensor_on(&p, s, sub).unwrap();
        (p, m)
    };
    let lift = |x: &Simplex| Simplex {
        base: inclusion[x.base],
        degen: x.degen.clone(),
    };
    let mut cells = CellSet::new();
    let mut marks = CellSet::new();
    for (c, (x, y)) in p.pairs().iter().enumerate() {
        let target = if left {
            ambient.cell_of(&lift(x), y)
        } else {
            ambient.cell_of(x, &lift(y))
        }
        .expect("inclusions keep product cells nondegenerate");
        cells.insert(target);
        if m.is_cell_marked(c) {
            marks.insert(target);
        }
    }
    (cells, marks)
}

/// `(A∪B)⊠S = (A⊠S) ∪ (B⊠S)` for subobjects given as families of cell
/// sets; returns a description of the first discrepancy.
fn union_preserved(
    x: &MarkedSSet,
    parts: &[CellSet],
    s: &MarkedSSet,
    left: bool,
) -> std::result::Result<(), String> {
    let ambient = if left {
        Product::new(x.underlying.clone(), s.underlying.clone())
    } else {
        Product::new(s.underlying.clone(), x.underlying.clone())
    };
    let whole: CellSet = parts.iter().flatten().copied().collect();
    let (sub, inc) = x.restrict_to(&whole).map_err(|e| e.to_string())?;
    let (cells, marks) = image_in(&sub, &inc, s, &ambient, left);
    let mut ucells = CellSet::new();
    let mut umarks = CellSet::new();
    for part in parts {
        let (sub, inc) = x.restrict_to(part).map_err(|e| e.to_string())?;
        let (c, m) = image_in(&sub, &inc, s, &ambient, left);
        ucells.extend(c);
        umarks.extend(m);
    }
    if cells != ucells {
        return Err(format!(
            "cells differ: {} against {}",
            cells.len(),
            ucells.len()
        ));
    }
    if marks != umarks {
        let diff: Vec<&str> = marks
            .symmetric_difference(&umarks)
            .map(|&c| ambient.sset.label(c))
            .collect();
        return Err(format!("marks differ on {diff:?}"));
    }
    Ok(())
}

/// Face closures `d_i` of the top cell of a simplex-shaped object.
fn facet_closures(x: &MarkedSSet) -> Vec<CellSet> {
    if x.underlying.top_dim() < 1 {
        return Vec::new();
    }
    let top = x.len() - 1;
    x.underlying
        .cell(top)
        .faces
        .iter()
        .map(|f| x.underlying.closure([f.base]).unwrap())
        .collect()
}

/// `⊠` preserves unions of subobjects in each variable: pairs of facets,
/// horn decompositions and the empty subobject, against small partners.
pub fn suite_colimit_preservation(corpus: &Corpus) -> SuiteReport {
    let mut rep = SuiteReport::new("colimit_preservation");
    let ambients: Vec<&CorpusEntry> = corpus
        .entries
        .iter()
        .filter(|e| {
            matches!(
                e.gadget,
                Some(
                    Gadget::Delta(_)
                        | Gadget::DeltaT(_)
                        | Gadget::DeltaK { .. }
                        | Gadget::DeltaKPrime { .. }
                        | Gadget::DeltaKDoublePrime { .. }
                        | Gadget::Delta3Eq
                        | Gadget::Delta3Sharp
                )
            ) && e.object.underlying.top_dim() >= 1
        })
        .collect();
    let partners: Vec<&CorpusEntry> = corpus.small(8).collect();
    for a in &ambients {
        let facets = facet_closures(&a.object);
        let n = facets.len();
        let mut families: Vec<(String, Vec<CellSet>)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                families.push((
                    format!("d{i} u d{j}"),
                    vec![facets[i].clone(), facets[j].clone()],
                ));
            }
            let horn: Vec<CellSet> = (0..n)
                .filter(|&j| j != i)
                .map(|j| facets[j].clone())
                .collect();
            families.push((format!("horn at {i}"), horn));
            families.push((
                format!("d{i} u empty"),
                vec![facets[i].clone(), CellSet::new()],
            ));
        }
        for s in &partners {
            for (fname, parts) in &families {
                for left in [true, false] {
                    let outcome = union_preserved(&a.object, parts, &s.object, left).map_err(|d| {
                        (
                            d,
                            vec![
                                ObjectDump::of(&a.name, &a.object),
                                ObjectDump::of(&s.name, &s.object),
                            ],
                        )
                    });
                    rep.record(
                        || {
                            if left {
                                format!("({fname} in {}) x| {}", a.name, s.name)
                            } else {
                                format!("{} x| ({fname} in {})", s.name, a.name)
                            }
                        },
                        outcome,
                    );
                }
            }
        }
    }
    rep
}

/// The associator `(X⋄Y)⋄Z -> X⋄(Y⋄Z)` on cells.
fn associator(xy: &Product, xy_z: &Product, yz: &Product, x_yz: &Product) -> Vec<Option<CellId>> {
    xy_z.pairs()
        .iter()
        .map(|(s, z)| {
            let (x, y) = xy.components(s);
            let t = yz.simplex_of(&y, z)?;
            x_yz.cell_of(&x, &t)
        })
        .collect()
}

type Op = fn(&Product, &MarkedSSet, &MarkedSSet) -> crate::Result<MarkedSSet>;

/// The four products of an associativity case, the associator between
/// them and the result of its structural check.
struct AssocPlan {
    xy: Product,
    xy_z: Product,
    yz: Product,
    x_yz: Product,
    map: Vec<Option<CellId>>,
    structure: std::result::Result<(), String>,
}

impl AssocPlan {
    fn new(x: &Arc<FinSSet>, y: &Arc<FinSSet>, z: &Arc<FinSSet>) -> AssocPlan {
        let xy = Product::new(x.clone(), y.clone());
        let xy_z = Product::new(xy.sset.clone(), z.clone());
        let yz = Product::new(y.clone(), z.clone());
        let x_yz = Product::new(x.clone(), yz.sset.clone());
        let map = associator(&xy, &xy_z, &yz, &x_yz);
        let structure = check_structure(&xy_z.sset, &x_yz.sset, &map, false);
        AssocPlan {
            xy,
            xy_z,
            yz,
            x_yz,
            map,
            structure,
        }
    }

    fn check(
        &self,
        op: Op,
        x: &MarkedSSet,
        y: &MarkedSSet,
        z: &MarkedSSet,
    ) -> std::result::Result<(), String> {
        self.structure.clone()?;
        let err = |e: crate::Error| e.to_string();
        let xy = op(&self.xy, x, y).map_err(err)?;
        let left = op(&self.xy_z, &xy, z).map_err(err)?;
        let yz = op(&self.yz, y, z).map_err(err)?;
        let right = op(&self.x_yz, x, &yz).map_err(err)?;
        check_marks(&left, &right, &self.map)
    }
}

fn assoc_check(
    op: Op,
    x: &MarkedSSet,
    y: &MarkedSSet,
    z: &MarkedSSet,
) -> std::result::Result<(), String> {
    AssocPlan::new(&x.underlying, &y.underlying, &z.underlying).check(op, x, y, z)
}

/// Triple cases grouped by the underlying objects.
#[derive(Clone, Debug, Default)]
pub struct TriplePlan {
    pub groups: Vec<TripleGroup>,
    pub skipped: usize,
}

impl TriplePlan {
    pub fn cases(&self) -> usize {
        self.groups.iter().map(|(_, c)| c.len()).sum()
    }
}

/// Triples whose product `(X × Y) × Z` has at most
/// [`Corpus::triple_cells`] cells.
pub fn triple_plan(corpus: &Corpus) -> TriplePlan {
    let n = corpus.underlyings.len();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in corpus.entries.iter().enumerate() {
        members[e.underlying].push(i);
    }
    let counts: Vec<Vec<usize>> = corpus.underlyings.iter().map(|u| u.counts()).collect();
    let mut plan = TriplePlan::default();
    let total = corpus.entries.len().pow(3);
    for ua in 0..n {
        for ub in 0..n {
            let ab = crate::sset::product_counts(&counts[ua], &counts[ub]);
            if ab.iter().sum::<usize>() > corpus.triple_cells {
                continue;
            }
            for uc in 0..n {
                let size: usize = crate::sset::product_counts(&ab, &counts[uc]).iter().sum();
                if size > corpus.triple_cells {
                    continue;
                }
                let mut cases = Vec::new();
                for &i in &members[ua] {
                    for &j in &members[ub] {
                        for &k in &members[uc] {
                            cases.push((i, j, k));
                        }
                    }
                }
                plan.groups.push(((ua, ub, uc), cases));
            }
        }
    }
    plan.skipped = total - plan.cases();
    plan
}

/// `Δ[0] ⋄ X -> X` and `X ⋄ Δ[0] -> X` on cells.
fn unit_check(op: Op, x: &MarkedSSet) -> std::result::Result<(), String> {
    let pt = gadget(&Gadget::Delta(0)).unwrap();
    let p = Product::new(pt.underlying.clone(), x.underlying.clone());
    let l = op(&p, &pt, x).map_err(|e| e.to_string())?;
    let map: Vec<Option<CellId>> = p
        .pairs()
        .iter()
        .map(|(_, b)| (!b.is_degenerate()).then_some(b.base))
        .collect();
    check_cell_iso(&l, x, &map).map_err(|e| format!("left unit: {e}"))?;
    let q = Product::new(x.underlying.clone(), pt.underlying.clone());
    let r = op(&q, x, &pt).map_err(|e| e.to_string())?;
    let map: Vec<Option<CellId>> = q
        .pairs()
        .iter()
        .map(|(a, _)| (!a.is_degenerate()).then_some(a.base))
        .collect();
    check_cell_iso(&r, x, &map).map_err(|e| format!("right unit: {e}"))
}

/// Pretensor triples searched for a failure of associativity.
fn pretensor_witness(corpus: &Corpus) -> Option<(String, String, String, String)> {
    let small: Vec<&CorpusEntry> = corpus.small(6).filter(|e| e.gadget.is_some()).collect();
    for a in &small {
        for b in &small {
            for c in &small {
                if let Err(detail) = assoc_check(pretensor_on, &a.object, &b.object, &c.object) {
                    let xy = crate::marking::pretensor(&a.object, &b.object);
                    let yz = crate::marking::pretensor(&b.object, &c.object);
                    let left = crate::marking::pretensor(&xy, &c.object);
                    let right = crate::marking::pretensor(&a.object, &yz);
                    if !isomorphic_marked(&left, &right) {
                        return Some((a.name.clone(), b.name.clone(), c.name.clone(), detail));
                    }
                }
            }
        }
    }
    None
}

/// `⊗` associativity and unitality on corpus triples within
/// [`Corpus::triple_cells`], and a recorded witness that `⊠` is not associative.
pub fn suite_monoidal(corpus: &Corpus) -> SuiteReport {
    let mut rep = SuiteReport::new("monoidal");
    for a in &corpus.entries {
        let outcome = unit_check(tensor_on, &a.object)
            .map_err(|d| (d, vec![ObjectDump::of(&a.name, &a.object)]));
        rep.record(|| format!("unit ; {}", a.name), outcome);
    }
    let plan = triple_plan(corpus);
    for ((ua, ub, uc), cases) in &plan.groups {
        let u = &corpus.underlyings;
        let assoc = AssocPlan::new(&u[*ua], &u[*ub], &u[*uc]);
        for &(i, j, k) in cases {
            let (a, b, c) = (&corpus.entries[i], &corpus.entries[j], &corpus.entries[k]);
            let outcome = assoc
                .check(tensor_on, &a.object, &b.object, &c.object)
                .map_err(|d| {
                    let dumps = vec![
                        ObjectDump::of(&a.name, &a.object),
                        ObjectDump::of(&b.name, &b.object),
                        ObjectDump::of(&c.name, &c.object),
                    ];
                    (d, dumps)
                });
            rep.record(
                || format!("assoc ; {} ; {} ; {}", a.name, b.name, c.name),
                outcome,
            );
        }
    }
    rep.notes.push(format!(
        "{} triples checked, {} triples with more than {} product cells not checked",
        plan.cases(),
        plan.skipped,
        corpus.triple_cells
    ));
    let outcome: Outcome = match pretensor_witness(corpus) {
        Some((a, b, c, detail)) => {
            rep.notes.push(format!(
                "pretensor not associative on ({a}) ; ({b}) ; ({c}): {detail}"
            ));
            Ok(())
        }
        None => Err((
            "no witness for non-associativity of the pretensor".into(),
            Vec::new(),
        )),
    };
    rep.record(|| "pretensor non-associativity witness".into(), outcome);
    rep
}

pub const SUITES: [&str; 4] = [
    "equivalent_tensors",
    "op_duality",
    "colimit_preservation",
    "monoidal",
];

/// Runs the named suites (all when `names` is empty). Unknown names are
/// returned as errors.
pub fn run_suites(
    corpus: &Corpus,
    names: &[String],
    timing: bool,
) -> crate::Result<Vec<SuiteReport>> {
    let table: HashMap<&str, fn(&Corpus) -> SuiteReport> = HashMap::from([
        (
            "equivalent_tensors",
            suite_equivalent_tensors as fn(&Corpus) -> SuiteReport,
        ),
        ("op_duality", suite_op_duality),
        ("colimit_preservation", suite_colimit_preservation),
        ("monoidal", suite_monoidal),
    ]);
    let selected: Vec<&str> = if names.is_empty() {
        SUITES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    let mut out = Vec::new();
    for name in selected {
        let f = table.get(name).ok_or_else(|| {
            crate::Error::Unsupported(format!(
                "unknown suite {name}; known: {}",
                SUITES.join(", ")
            ))
        })?;
        let start = Instant::now();
        let mut rep = f(corpus);
        if timing {
            rep.elapsed_ms = Some(start.elapsed().as_millis());
        }
        out.push(rep);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Corpus {
        Corpus::new(&CorpusConfig {
            max_m: 2,
            max_ell: 0,
            budget: 8,
            derived: true,
            pair_cells: 60,
            triple_cells: 60,
        })
    }

    #[test]
    fn product_size_counts_cells() {
        let c = tiny();
        for a in &c.underlyings {
            for b in &c.underlyings {
                let p = Product::new(a.clone(), b.clone());
                assert_eq!(product_size(a, b), p.sset.len());
            }
        }
    }

    #[test]
    fn worked_example_rows() {
        let rows = worked_example_table();
        let got: Vec<(bool, bool)> = rows.iter().map(|r| (r.pretensor, r.tensor)).collect();
        assert_eq!(
            got,
            vec![(true, true), (true, true), (false, true), (false, false)]
        );
        assert_eq!(rows[2].simplex, "([0 1 2],[0 1 1])");
    }

    #[test]
    fn suites_pass_on_a_tiny_corpus() {
        let c = tiny();
        for rep in run_suites(&c, &[], false).unwrap() {
            assert!(
                rep.ok(),
                "{}: {:?}",
                rep.suite,
                &rep.failures[..rep.failures.len().min(3)]
            );
            assert!(rep.cases > 0);
        }
    }

    #[test]
    fn shrinking_keeps_the_failure() {
        let x = gadget(&Gadget::DeltaT(2)).unwrap();
        let fails = |y: &MarkedSSet| y.marked_count() > 0;
        let s = shrink(&x, &fails);
        assert_eq!(s.marked_count(), 1);
        assert_eq!(s.len(), 7);
        let fails = |y: &MarkedSSet| y.underlying.counts().len() >= 2;
        assert_eq!(shrink(&x, &fails).len(), 3);
    }

    #[test]
    fn pretensor_witness_exists() {
        let rep = suite_monoidal(&tiny());
        assert!(rep
            .notes
            .iter()
            .any(|n| n.starts_with("pretensor not associative")));
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suites(&tiny(), &["nope".into()], false).is_err());
    }
}

use std::sync::Arc;

use super::MarkedSSet;
use crate::delta::{degeneracy_partition, face_partition};
use crate::error::{Error, Result};
use crate::sset::{Join, Product, Simplex};

/// `X ⋆ Y`: `x ⋆ y` is marked iff `x` or `y` is (an empty side is unmarked).
pub fn join_marked(x: &MarkedSSet, y: &MarkedSSet) -> MarkedSSet {
    join_marked_with(x, y).1
}

pub fn join_marked_with(x: &MarkedSSet, y: &MarkedSSet) -> (Join, MarkedSSet) {
    let j = Join::new(x.underlying.clone(), y.underlying.clone());
    let marked = MarkedSSet::from_predicate(j.sset.clone(), |c| {
        let (a, b) = j.part(c);
        a.is_some_and(|a| x.is_cell_marked(a)) || b.is_some_and(|b| y.is_cell_marked(b))
    });
    (j, marked)
}

fn same_dim(x: &Simplex, y: &Simplex) -> Result<usize> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim() as isize,
            found: y.dim() as isize,
        });
    }
    Ok(x.dim())
}

/// Some `0 < k < r` with `x` degenerate along `s^{k-1}` and `y` along `s^k`.
pub fn is_mediator(x: &Simplex, y: &Simplex) -> Result<bool> {
    let r = same_dim(x, y)?;
    let (sx, sy) = (x.degen.values(), y.degen.values());
    Ok((1..r).any(|k| sx[k - 1] == sx[k] && sy[k] == sy[k + 1]))
}

/// Some partition `r = p + q` with `x = x'Π₁`, `y = y'Π₂` and `x'` or `y'`
/// marked.
pub fn is_crushed_cylinder(
    x: &Simplex,
    y: &Simplex,
    xm: &MarkedSSet,
    ym: &MarkedSSet,
) -> Result<bool> {
    let r = same_dim(x, y)?;
    let (sx, sy) = (x.degen.values(), y.degen.values());
    for p in 0..=r {
        let q = r - p;
        // x constant from position p on, y constant up to position p
        if sx[p..].iter().any(|&v| v != sx[p]) || sy[..=p].iter().any(|&v| v != sy[0]) {
            continue;
        }
        let (i1, i2) = face_partition(p, q);
        let xp = xm.underlying.restrict(x, &i1);
        let yp = ym.underlying.restrict(y, &i2);
        if xm.is_marked(&xp) || ym.is_marked(&yp) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether `r = p + q` cleaves `(x, y)`: the front `p`-face of `x` or the
/// back `q`-face of `y` is marked. Vertices never cleave.
pub fn cleaves(
    p: usize,
    q: usize,
    x: &Simplex,
    y: &Simplex,
    xm: &MarkedSSet,
    ym: &MarkedSSet,
) -> Result<bool> {
    let r = same_dim(x, y)?;
    if p + q != r {
        return Err(Error::InvalidMap(format!(
            "partition {p}+{q} of a {r}-simplex"
        )));
    }
    let (i1, i2) = face_partition(p, q);
    Ok(xm.is_marked(&xm.underlying.restrict(x, &i1))
        || ym.is_marked(&ym.underlying.restrict(y, &i2)))
}

fn check_factors(p: &Product, x: &MarkedSSet, y: &MarkedSSet) -> Result<()> {
    if p.left.cells() != x.underlying.cells() || p.right.cells() != y.underlying.cells() {
        return Err(Error::Unsupported(
            "product factors do not match the marked objects".into(),
        ));
    }
    Ok(())
}

/// Whether the front and back faces of every cell are marked, so that
/// pieces of degenerate simplices are classified without restricting.
struct FaceMarks {
    /// `front[c][j]`: the face of `c` on vertices `0..=j`.
    front: Vec<Vec<bool>>,
    /// `back[c][j]`: the face of `c` on vertices `j..=dim`.
    back: Vec<Vec<bool>>,
}

impl FaceMarks {
    fn new(x: &MarkedSSet) -> FaceMarks {
        let u = &x.underlying;
        let mut front: Vec<Vec<bool>> = Vec::with_capacity(x.len());
        let mut back: Vec<Vec<bool>> = Vec::with_capacity(x.len());
        for c in 0..x.len() {
            let cell = u.cell(c);
            let d = cell.dim;
            let top = Simplex::nondegenerate(c, d);
            let slow = |j: usize, at_front: bool| {
                let (i1, i2) = face_partition(j, d - j);
                x.is_marked(&u.restrict(&top, if at_front { &i1 } else { &i2 }))
            };
            let own = x.is_cell_marked(c);
            let f: Vec<bool> = (0..=d)
                .map(|j| match cell.faces.last() {
                    _ if j == d => own,
                    Some(last) if !last.is_degenerate() => front[last.base][j],
                    _ => slow(j, true),
                })
                .collect();
            let b: Vec<bool> = (0..=d)
                .map(|j| match cell.faces.first() {
                    _ if j == 0 => own,
                    Some(first) if !first.is_degenerate() => back[first.base][j - 1],
                    _ => slow(j, false),
                })
                .collect();
            front.push(f);
            back.push(b);
        }
        FaceMarks { front, back }
    }

    /// `x` restricted to `0..=k` is marked.
    fn front_of(&self, x: &Simplex, k: usize) -> bool {
        let s = x.degen.values();
        s[k] < k || self.front[x.base][k]
    }

    /// `x` restricted to `k..=r` is marked.
    fn back_of(&self, x: &Simplex, k: usize) -> bool {
        let s = x.degen.values();
        let r = s.len() - 1;
        s[r] - s[k] < r - k || self.back[x.base][s[k]]
    }
}

/// `X ⊠ Y` on a precomputed product of the underlying objects.
pub fn pretensor_on(p: &Product, x: &MarkedSSet, y: &MarkedSSet) -> Result<MarkedSSet> {
    check_factors(p, x, y)?;
    let (fx, fy) = (FaceMarks::new(x), FaceMarks::new(y));
    Ok(MarkedSSet::from_predicate(p.sset.clone(), |c| {
        let (a, b) = p.pair(c);
        let (sa, sb) = (a.degen.values(), b.degen.values());
        let r = sa.len() - 1;
        let mediator = (1..r).any(|k| sa[k - 1] == sa[k] && sb[k] == sb[k + 1]);
        mediator
            || (0..=r).any(|k| {
                sa[k..].iter().all(|&v| v == sa[k])
                    && sb[..=k].iter().all(|&v| v == sb[0])
                    && (fx.front_of(a, k) || fy.back_of(b, k))
            })
    }))
}

/// `X ⊗ Y` on a precomputed product of the underlying objects.
pub fn tensor_on(p: &Product, x: &MarkedSSet, y: &MarkedSSet) -> Result<MarkedSSet> {
    check_factors(p, x, y)?;
    let (fx, fy) = (FaceMarks::new(x), FaceMarks::new(y));
    Ok(MarkedSSet::from_predicate(p.sset.clone(), |c| {
        let (a, b) = p.pair(c);
        let r = a.dim();
        (0..=r).all(|k| fx.front_of(a, k) || fy.back_of(b, k))
    }))
}

/// The cartesian product: `(x, y)` is marked iff both components are.
pub fn product_marked_on(p: &Product, x: &MarkedSSet, y: &MarkedSSet) -> Result<MarkedSSet> {
    check_factors(p, x, y)?;
    Ok(MarkedSSet::from_predicate(p.sset.clone(), |c| {
        let (a, b) = p.pair(c);
        a.dim() > 0 && x.is_marked(a) && y.is_marked(b)
    }))
}

pub fn product_marked(x: &MarkedSSet, y: &MarkedSSet) -> MarkedSSet {
    let p = Product::new(x.underlying.clone(), y.underlying.clone());
    product_marked_on(&p, x, y).expect("factors match by construction")
}

pub fn pretensor(x: &MarkedSSet, y: &MarkedSSet) -> MarkedSSet {
    let p = Product::new(x.underlying.clone(), y.underlying.clone());
    pretensor_on(&p, x, y).expect("factors match by construction")
}

pub fn tensor(x: &MarkedSSet, y: &MarkedSSet) -> MarkedSSet {
    let p = Product::new(x.underlying.clone(), y.underlying.clone());
    tensor_on(&p, x, y).expect("factors match by construction")
}

/// `x = x'Π₁^{p,q}` tested by restriction: used by tests as a second route.
#[allow(dead_code)]
pub(crate) fn factors_through_partition(
    xm: &MarkedSSet,
    ym: &MarkedSSet,
    x: &Simplex,
    y: &Simplex,
    p: usize,
) -> bool {
    let q = x.dim() - p;
    let (pi1, pi2) = degeneracy_partition(p, q);
    let (i1, i2) = face_partition(p, q);
    let ux: &Arc<_> = &xm.underlying;
    let uy = &ym.underlying;
    ux.restrict(&ux.restrict(x, &i1), &pi1) == *x && uy.restrict(&uy.restrict(y, &i2), &pi2) == *y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marking::{gadget, isomorphic_marked, Gadget};
    use crate::sset::NerveIndex;

    fn example() -> (MarkedSSet, MarkedSSet, Product) {
        let x = gadget(&Gadget::DeltaT(2)).unwrap();
        let y = gadget(&Gadget::Delta(1)).unwrap();
        let p = Product::new(x.underlying.clone(), y.underlying.clone());
        (x, y, p)
    }

    fn simplex(x: &MarkedSSet, vs: &[usize]) -> Simplex {
        NerveIndex::new(&x.underlying).simplex(vs).unwrap()
    }

    #[test]
    fn worked_example() {
        let (x, y, _) = example();
        let cases: [(&[usize], &[usize], bool, bool); 4] = [
            (&[1, 1, 2], &[0, 1, 1], true, true),
            (&[0, 1, 2, 2], &[0, 0, 0, 1], true, true),
            (&[0, 1, 2], &[0, 1, 1], false, true),
            (&[0, 1, 2], &[0, 0, 1], false, false),
        ];
        for (a, b, pre, ten) in cases {
            let (sa, sb) = (simplex(&x, a), simplex(&y, b));
            let r = sa.dim();
            let med = is_mediator(&sa, &sb).unwrap();
            let cyl = is_crushed_cylinder(&sa, &sb, &x, &y).unwrap();
            let all = (0..=r).all(|p| cleaves(p, r - p, &sa, &sb, &x, &y).unwrap());
            assert_eq!(med || cyl, pre, "{a:?} {b:?}");
            assert_eq!(all, ten, "{a:?} {b:?}");
        }
        let (sa, sb) = (simplex(&x, &[0, 1, 2]), simplex(&y, &[0, 0, 1]));
        assert!(cleaves(2, 0, &sa, &sb, &x, &y).unwrap());
        assert!(cleaves(0, 2, &sa, &sb, &x, &y).unwrap());
        assert!(!cleaves(1, 1, &sa, &sb, &x, &y).unwrap());
        assert!(is_mediator(&simplex(&x, &[1, 2]), &simplex(&y, &[0, 1])).is_ok_and(|m| !m));
        assert!(is_mediator(&simplex(&x, &[1, 2]), &simplex(&y, &[0, 0, 1])).is_err());
    }

    #[test]
    fn crushed_cylinder_agrees_with_factorization() {
        let (x, y, p) = example();
        for (a, b) in p.pairs() {
            let by_factor = (0..=a.dim()).any(|k| {
                factors_through_partition(&x, &y, a, b, k) && {
                    let (i1, i2) = face_partition(k, a.dim() - k);
                    x.is_marked(&x.underlying.restrict(a, &i1))
                        || y.is_marked(&y.underlying.restrict(b, &i2))
                }
            });
            assert_eq!(is_crushed_cylinder(a, b, &x, &y).unwrap(), by_factor);
        }
    }

    #[test]
    fn tables_agree_with_cellwise_definitions() {
        let gs = [
            Gadget::DeltaT(2),
            Gadget::Delta3Eq,
            Gadget::DeltaKDoublePrime { m: 2, k: 1 },
            Gadget::Horn { m: 3, k: 1 },
            Gadget::DeltaThree {
                left: 0,
                right: -1,
                sharp: true,
            },
        ];
        for g in &gs {
            for h in &gs {
                let (x, y) = (gadget(g).unwrap(), gadget(h).unwrap());
                let p = Product::new(x.underlying.clone(), y.underlying.clone());
                let (pre, ten) = (
                    pretensor_on(&p, &x, &y).unwrap(),
                    tensor_on(&p, &x, &y).unwrap(),
                );
                for c in 0..p.sset.len() {
                    let (a, b) = p.pair(c);
                    let r = a.dim();
                    let want_pre = r > 0
                        && (is_mediator(a, b).unwrap()
                            || is_crushed_cylinder(a, b, &x, &y).unwrap());
                    let want_ten =
                        r > 0 && (0..=r).all(|k| cleaves(k, r - k, a, b, &x, &y).unwrap());
                    assert_eq!(
                        pre.is_cell_marked(c),
                        want_pre,
                        "{} {:?} {:?}",
                        p.sset.label(c),
                        g,
                        h
                    );
                    assert_eq!(
                        ten.is_cell_marked(c),
                        want_ten,
                        "{} {:?} {:?}",
                        p.sset.label(c),
                        g,
                        h
                    );
                }
            }
        }
    }

    #[test]
    fn point_is_a_unit() {
        let pt = gadget(&Gadget::Delta(0)).unwrap();
        for g in [
            Gadget::Delta3Eq,
            Gadget::DeltaKPrime { m: 3, k: 1 },
            Gadget::Horn { m: 2, k: 0 },
        ] {
            let x = gadget(&g).unwrap();
            assert!(isomorphic_marked(&tensor(&pt, &x), &x));
            assert!(isomorphic_marked(&tensor(&x, &pt), &x));
            assert!(isomorphic_marked(&pretensor(&pt, &x), &x));
            assert!(isomorphic_marked(&pretensor(&x, &pt), &x));
        }
    }

    #[test]
    fn join_marking() {
        let pt = gadget(&Gadget::Delta(0)).unwrap();
        let t = gadget(&Gadget::DeltaT(1)).unwrap();
        let j = join_marked(&pt, &t);
        let labels: Vec<&str> = j
            .marked_cells()
            .into_iter()
            .map(|c| j.underlying.label(c))
            .collect();
        assert_eq!(labels, vec!["*[0 1]", "0*[0 1]"]);
        let empty = gadget(&Gadget::Delta(-1)).unwrap();
        assert!(isomorphic_marked(&join_marked(&empty, &t), &t));
    }

    #[test]
    fn empty_factors() {
        let empty = gadget(&Gadget::Delta(-1)).unwrap();
        let x = gadget(&Gadget::Delta3Eq).unwrap();
        assert!(tensor(&empty, &x).is_empty());
        assert!(pretensor(&x, &empty).is_empty());
    }
}

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::marking::{gadget, join_marked, product_marked, Gadget, MarkedSSet};
use crate::sset::FinSSet;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    /// An expression that rebuilds the object.
    pub name: String,
    pub object: MarkedSSet,
    pub gadget: Option<Gadget>,
    /// Index into [`Corpus::underlyings`].
    pub underlying: usize,
}

/// Named marked objects: gadgets and their closures under join, product
/// and op, up to a cell budget.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    pub budget: usize,
    /// Pairs involving a derived object run only when the product has at
    /// most this many cells; gadget pairs always run.
    pub pair_cells: usize,
    /// Associativity triples run only when `(X × Y) × Z` has at most this
    /// many cells.
    pub triple_cells: usize,
    /// Distinct underlying objects, shared between entries.
    pub underlyings: Vec<Arc<FinSSet>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub max_m: isize,
    pub max_ell: isize,
    pub budget: usize,
    /// Include pairwise joins and products.
    pub derived: bool,
    pub pair_cells: usize,
    pub triple_cells: usize,
}

/// Default product-size budget for pairs with a derived member.
pub const PAIR_CELLS: usize = 500;

/// Default product-size budget for associativity triples.
pub const TRIPLE_CELLS: usize = 100;

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_m: 3,
            max_ell: 1,
            budget: 60,
            derived: true,
            pair_cells: PAIR_CELLS,
            triple_cells: TRIPLE_CELLS,
        }
    }
}

/// All gadgets with `m <= max_m` and `ℓ <= max_ell`, in a fixed order.
pub fn gadget_list(max_m: isize, max_ell: isize) -> Vec<Gadget> {
    let mut out = Vec::new();
    for m in 0..=max_m {
        out.push(Gadget::Delta(m));
    }
    for m in 1..=max_m {
        out.push(Gadget::DeltaT(m));
        out.push(Gadget::Boundary(m));
    }
    for m in 1..=max_m {
        for k in 0..=m {
            out.push(Gadget::Horn { m, k });
        }
    }
    for m in 1..=max_m {
        for k in 0..=m {
            out.push(Gadget::DeltaK { m, k });
            out.push(Gadget::DeltaKPrime { m, k });
            out.push(Gadget::DeltaKDoublePrime { m, k });
        }
    }
    out.push(Gadget::Delta3Eq);
    out.push(Gadget::Delta3Sharp);
    for left in 0..=max_ell {
        for sharp in [false, true] {
            out.push(Gadget::DeltaThree {
                left,
                right: -1,
                sharp,
            });
            out.push(Gadget::DeltaThree {
                left: -1,
                right: left,
                sharp,
            });
        }
    }
    out
}

impl Corpus {
    pub fn new(config: &CorpusConfig) -> Corpus {
        let mut corpus = Corpus {
            entries: Vec::new(),
            budget: config.budget,
            pair_cells: config.pair_cells,
            triple_cells: config.triple_cells,
            underlyings: Vec::new(),
        };
        for g in gadget_list(config.max_m, config.max_ell) {
            let x = gadget(&g).expect("listed gadgets are in range");
            corpus.push(g.expr(), x, Some(g));
        }
        if config.derived {
            let base: Vec<CorpusEntry> = corpus.entries.clone();
            for e in &base {
                let op = e.object.opposite();
                if op.len() <= config.budget {
                    corpus.push(format!("op({})", e.name), op, None);
                }
            }
            for a in &base {
                for b in &base {
                    if a.object.len() + b.object.len() + a.object.len() * b.object.len()
                        <= config.budget
                    {
                        corpus.push(
                            format!("join({}, {})", a.name, b.name),
                            join_marked(&a.object, &b.object),
                            None,
                        );
                    }
                    // a product has at least |A|·|B| cells
                    if a.object.len() * b.object.len() <= config.budget {
                        let p = product_marked(&a.object, &b.object);
                        if p.len() <= config.budget {
                            corpus.push(format!("prod({}, {})", a.name, b.name), p, None);
                        }
                    }
                }
            }
        }
        corpus
    }

    /// Gadgets only, no derived objects.
    pub fn gadgets(max_m: isize, max_ell: isize) -> Corpus {
        Corpus::new(&CorpusConfig {
            max_m,
            max_ell,
            budget: usize::MAX,
            derived: false,
            pair_cells: usize::MAX,
            triple_cells: usize::MAX,
        })
    }

    /// Adds an object unless an identical one is present.
    fn push(&mut self, name: String, object: MarkedSSet, gadget: Option<Gadget>) {
        if self.entries.iter().any(|e| e.object == object) {
            return;
        }
        let underlying = self.class_of(&object.underlying);
        self.entries.push(CorpusEntry {
            name,
            object,
            gadget,
            underlying,
        });
    }

    /// The index of an underlying object, registering it if new.
    pub fn class_of(&mut self, x: &Arc<FinSSet>) -> usize {
        match self
            .underlyings
            .iter()
            .position(|u| u.len() == x.len() && **u == **x)
        {
            Some(i) => i,
            None => {
                self.underlyings.push(x.clone());
                self.underlyings.len() - 1
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries with at most `cells` cells.
    pub fn small(&self, cells: usize) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter().filter(move |e| e.object.len() <= cells)
    }
}

impl Default for Corpus {
    fn default() -> Self {
        Corpus::new(&CorpusConfig::default())
    }
}

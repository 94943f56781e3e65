//! Index shapes: lazily presented cofinite directed sets, cofinite
//! categories, cofinal functors and the poset of monotone tuples used for
//! colimits.

pub mod cofinal;
pub mod directed;
pub mod kposet;
pub mod shape;

use serde::Serialize;
use std::fmt;

pub use cofinal::{cofinal_reindex, verify_cofinal, CofinalFunctor, CofinalityReport};
pub use directed::{
    Chain, DirectedIndex, Enumerated, FinitePoset, FiniteSubsets, Point, Product, SubChain,
};
pub use kposet::KPoset;
pub use shape::{
    ChainShape, CofiniteCategory, FiniteShape, PosetShape, ProductShape, SequenceShape, ShapeArrow,
    ShapeObject, ShapeWindow,
};

/// An element of an index set; coordinates are flattened for products.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ix(pub Vec<usize>);

impl Ix {
    pub fn nat(n: usize) -> Ix {
        Ix(vec![n])
    }

    pub fn point() -> Ix {
        Ix(Vec::new())
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Ix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [] => f.write_str("*"),
            [n] => write!(f, "{n}"),
            xs => {
                f.write_str("(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Ix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite window onto an infinite shape: the maximal level explored, a
/// cap on the number of candidates any single search may examine, and how
/// many levels past the deepest representative an equality search looks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncationBudget {
    pub depth: usize,
    pub node_cap: usize,
    pub slack: usize,
}

impl TruncationBudget {
    pub fn new(depth: usize) -> Self {
        TruncationBudget {
            depth,
            node_cap: 4096,
            slack: 2,
        }
    }

    pub fn with_slack(mut self, slack: usize) -> Self {
        self.slack = slack;
        self
    }

    pub fn with_cap(mut self, node_cap: usize) -> Self {
        self.node_cap = node_cap;
        self
    }
}

/// Result of a bounded search; exhaustion is distinct from a definite miss.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// The whole (finite) search space was examined.
    Absent,
    /// The node cap was hit.
    Exhausted,
}

/// Searches `index` in enumeration order for the first element satisfying
/// `pred`, examining at most `cap` elements.
pub fn search_index(
    index: &dyn DirectedIndex,
    cap: usize,
    mut pred: impl FnMut(&Ix) -> bool,
) -> Search<Ix> {
    let mut seen = 0usize;
    let mut depth = 0usize;
    loop {
        let w = index.window(depth);
        for x in w.iter().skip(seen) {
            if pred(x) {
                return Search::Found(x.clone());
            }
        }
        seen = seen.max(w.len());
        if let Some(n) = index.finite_size() {
            if seen >= n {
                return Search::Absent;
            }
        }
        if seen >= cap || depth > cap {
            return Search::Exhausted;
        }
        depth += 1;
    }
}

/// The `n`-th element in enumeration order.
pub fn nth_element(index: &dyn DirectedIndex, n: usize) -> Option<Ix> {
    let mut depth = n;
    loop {
        let w = index.window(depth);
        if w.len() > n {
            return Some(w[n].clone());
        }
        if let Some(size) = index.finite_size() {
            if w.len() >= size {
                return None;
            }
        }
        depth = depth * 2 + 1;
    }
}

pub fn cantor(a: usize, b: usize) -> usize {
    (a + b) * (a + b + 1) / 2 + b
}

//! The arrow category `Ar(C)`: objects are maps of `C`, maps are
//! commuting squares.

use super::Category;
use crate::error::{ProError, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArrowCategory<C> {
    pub base: C,
}

/// A commuting square from `source` to `target`:
///
/// ```text
///   s0 --top--> t0
///   |           |
/// source     target
///   v           v
///   s1 --bottom--> t1
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Square<M> {
    source: M,
    target: M,
    top: M,
    bottom: M,
}

impl<M: Clone> Square<M> {
    pub fn source(&self) -> &M {
        &self.source
    }
    pub fn target(&self) -> &M {
        &self.target
    }
    pub fn top(&self) -> &M {
        &self.top
    }
    pub fn bottom(&self) -> &M {
        &self.bottom
    }
}

impl<C: Category> ArrowCategory<C> {
    pub fn new(base: C) -> Self {
        ArrowCategory { base }
    }

    /// Checks commutativity once; the resulting square is a stored certificate.
    pub fn square(
        &self,
        source: C::Map,
        target: C::Map,
        top: C::Map,
        bottom: C::Map,
    ) -> Result<Square<C::Map>> {
        let left = self.base.compose(&target, &top)?;
        let right = self.base.compose(&bottom, &source)?;
        if left != right {
            return Err(ProError::Invalid("square does not commute".into()));
        }
        Ok(Square {
            source,
            target,
            top,
            bottom,
        })
    }
}

impl<C: Category> Category for ArrowCategory<C> {
    type Obj = C::Map;
    type Map = Square<C::Map>;

    fn name(&self) -> &'static str {
        "arrow"
    }

    fn source(&self, f: &Self::Map) -> C::Map {
        f.source.clone()
    }

    fn target(&self, f: &Self::Map) -> C::Map {
        f.target.clone()
    }

    fn identity(&self, x: &C::Map) -> Self::Map {
        Square {
            source: x.clone(),
            target: x.clone(),
            top: self.base.identity(&self.base.source(x)),
            bottom: self.base.identity(&self.base.target(x)),
        }
    }

    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Result<Self::Map> {
        self.check_composable(g, f)?;
        Ok(Square {
            source: f.source.clone(),
            target: g.target.clone(),
            top: self.base.compose(&g.top, &f.top)?,
            bottom: self.base.compose(&g.bottom, &f.bottom)?,
        })
    }

    fn hom(&self, x: &C::Map, y: &C::Map) -> Result<Vec<Self::Map>> {
        let tops = self.base.hom(&self.base.source(x), &self.base.source(y))?;
        let bottoms = self.base.hom(&self.base.target(x), &self.base.target(y))?;
        let mut out = Vec::new();
        for t in &tops {
            let left = self.base.compose(y, t)?;
            for b in &bottoms {
                if self.base.compose(b, x)? == left {
                    out.push(Square {
                        source: x.clone(),
                        target: y.clone(),
                        top: t.clone(),
                        bottom: b.clone(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Levelwise: a square is mono (epi) when both components are.
    fn is_mono(&self, f: &Self::Map) -> Result<bool> {
        Ok(self.base.is_mono(&f.top)? && self.base.is_mono(&f.bottom)?)
    }

    fn is_epi(&self, f: &Self::Map) -> Result<bool> {
        Ok(self.base.is_epi(&f.top)? && self.base.is_epi(&f.bottom)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{FinSet, FinSetMap};

    #[test]
    fn squares_compose_and_count() {
        let ar = ArrowCategory::new(FinSet);
        let x = FinSetMap::new(1, vec![0, 0]).unwrap();
        let y = FinSet.identity(&1);
        // squares from (2 -> 1) to (1 -> 1): any top, forced bottom
        let h = ar.hom(&x, &y).unwrap();
        assert_eq!(h.len(), 1);
        let id = ar.identity(&x);
        assert_eq!(ar.compose(&h[0], &id).unwrap(), h[0]);
        assert!(ar
            .square(
                x.clone(),
                y.clone(),
                FinSetMap::new(1, vec![0, 0]).unwrap(),
                y
            )
            .is_ok());
    }

    #[test]
    fn non_commuting_square_rejected() {
        let ar = ArrowCategory::new(FinSet);
        let x = FinSet.identity(&2);
        let swap = FinSetMap::new(2, vec![1, 0]).unwrap();
        assert!(ar
            .square(x.clone(), x.clone(), swap, FinSet.identity(&2))
            .is_err());
    }
}

//! Diagrams of a fixed finite shape in a base category, with natural
//! transformations as maps.

use super::Category;
use crate::error::{ProError, Result};
use crate::index::ShapeWindow;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct FunctorCategory<C> {
    pub base: C,
    shape: Arc<ShapeWindow>,
}

/// Objects indexed by shape object position, maps by shape arrow position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagramObj<O, M> {
    pub objects: Vec<O>,
    pub maps: Vec<M>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NatTrans<O, M> {
    pub source: DiagramObj<O, M>,
    pub target: DiagramObj<O, M>,
    pub components: Vec<M>,
}

pub type FObj<C> = DiagramObj<<C as Category>::Obj, <C as Category>::Map>;
pub type FMap<C> = NatTrans<<C as Category>::Obj, <C as Category>::Map>;

impl<C: Category> FunctorCategory<C> {
    pub fn new(base: C, shape: ShapeWindow) -> Self {
        FunctorCategory {
            base,
            shape: Arc::new(shape),
        }
    }

    pub fn shape(&self) -> &ShapeWindow {
        &self.shape
    }

    fn slot(&self, id: usize) -> usize {
        self.shape
            .objects
            .iter()
            .position(|o| o.id == id)
            .expect("object of shape")
    }

    /// Checks endpoints and functoriality.
    pub fn object(&self, objects: Vec<C::Obj>, maps: Vec<C::Map>) -> Result<FObj<C>> {
        let w = &self.shape;
        if objects.len() != w.objects.len() || maps.len() != w.arrows.len() {
            return Err(ProError::Invalid("diagram does not match its shape".into()));
        }
        for (k, a) in w.arrows.iter().enumerate() {
            if self.base.source(&maps[k]) != objects[self.slot(a.source)]
                || self.base.target(&maps[k]) != objects[self.slot(a.target)]
            {
                return Err(ProError::Composition(format!(
                    "map for {} has the wrong ends",
                    a.name
                )));
            }
        }
        let pos = |id: usize| {
            w.arrows
                .iter()
                .position(|a| a.id == id)
                .expect("arrow of shape")
        };
        for (kf, f) in w.arrows.iter().enumerate() {
            for g in w.arrows_from(f.target) {
                if let Some(h) = w.compose(g.id, f.id) {
                    if self.base.compose(&maps[pos(g.id)], &maps[kf])? != maps[pos(h)] {
                        return Err(ProError::Invalid(format!(
                            "diagram is not functorial at {} . {}",
                            g.name, f.name
                        )));
                    }
                }
            }
        }
        Ok(DiagramObj { objects, maps })
    }

    pub fn is_natural(
        &self,
        source: &FObj<C>,
        target: &FObj<C>,
        components: &[C::Map],
    ) -> Result<bool> {
        for (k, a) in self.shape.arrows.iter().enumerate() {
            let (i, j) = (self.slot(a.source), self.slot(a.target));
            if self.base.compose(&target.maps[k], &components[i])?
                != self.base.compose(&components[j], &source.maps[k])?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn nat(
        &self,
        source: FObj<C>,
        target: FObj<C>,
        components: Vec<C::Map>,
    ) -> Result<FMap<C>> {
        if !self.is_natural(&source, &target, &components)? {
            return Err(ProError::Invalid("components are not natural".into()));
        }
        Ok(NatTrans {
            source,
            target,
            components,
        })
    }
}

impl<C: Category> Category for FunctorCategory<C> {
    type Obj = FObj<C>;
    type Map = FMap<C>;

    fn name(&self) -> &'static str {
        "functor"
    }

    fn source(&self, f: &Self::Map) -> Self::Obj {
        f.source.clone()
    }

    fn target(&self, f: &Self::Map) -> Self::Obj {
        f.target.clone()
    }

    fn identity(&self, x: &Self::Obj) -> Self::Map {
        NatTrans {
            source: x.clone(),
            target: x.clone(),
            components: x.objects.iter().map(|o| self.base.identity(o)).collect(),
        }
    }

    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Result<Self::Map> {
        self.check_composable(g, f)?;
        let components = g
            .components
            .iter()
            .zip(&f.components)
            .map(|(a, b)| self.base.compose(a, b))
            .collect::<Result<_>>()?;
        Ok(NatTrans {
            source: f.source.clone(),
            target: g.target.clone(),
            components,
        })
    }

    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Result<Vec<Self::Map>> {
        let homs: Vec<Vec<C::Map>> = x
            .objects
            .iter()
            .zip(&y.objects)
            .map(|(a, b)| self.base.hom(a, b))
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        let mut pick = vec![0usize; homs.len()];
        if homs.iter().any(|h| h.is_empty()) {
            return Ok(out);
        }
        loop {
            let comps: Vec<C::Map> = pick.iter().zip(&homs).map(|(&i, h)| h[i].clone()).collect();
            if self.is_natural(x, y, &comps)? {
                out.push(NatTrans {
                    source: x.clone(),
                    target: y.clone(),
                    components: comps,
                });
            }
            let mut k = pick.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < homs[k].len() {
                    break;
                }
                pick[k] = 0;
            }
        }
    }

    fn is_mono(&self, f: &Self::Map) -> Result<bool> {
        for c in &f.components {
            if !self.base.is_mono(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn is_epi(&self, f: &Self::Map) -> Result<bool> {
        for c in &f.components {
            if !self.base.is_epi(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

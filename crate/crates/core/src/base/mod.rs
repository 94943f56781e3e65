//! Base categories: the capability interface and the concrete instances
//! (finite sets, finite abelian groups, finitely generated free abelian
//! groups) plus the arrow-category constructor.

pub mod arrow;
pub mod finab;
pub mod finset;
pub mod freeab;
pub mod functor;
pub mod intmat;

use crate::error::{ProError, Result};
use std::fmt::Debug;
use std::hash::Hash;

pub use arrow::{ArrowCategory, Square};
pub use finab::{FinAb, FinAbMap, FinAbObj};
pub use finset::{FinSet, FinSetMap};
pub use freeab::{FreeAb, FreeAbMap, FreeAbObj};
pub use functor::{DiagramObj, FunctorCategory, NatTrans};
pub use intmat::IntMatrix;

/// A finitely computable category.
///
/// Objects and maps are immutable values; equality is structural after
/// canonical reduction. Optional capabilities default to
/// [`ProError::Unsupported`].
pub trait Category: Clone + Send + Sync + 'static {
    type Obj: Clone + Eq + Hash + Debug + Send + Sync + 'static;
    type Map: Clone + Eq + Hash + Debug + Send + Sync + 'static;

    fn name(&self) -> &'static str;
    fn source(&self, f: &Self::Map) -> Self::Obj;
    fn target(&self, f: &Self::Map) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Map;

    /// `g ∘ f`; requires `target(f) == source(g)`.
    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Result<Self::Map>;

    /// Every map `x → y` exactly once, in a fixed enumeration order.
    fn hom(&self, _x: &Self::Obj, _y: &Self::Obj) -> Result<Vec<Self::Map>> {
        Err(ProError::Unsupported("hom_enumerate"))
    }

    fn limit(&self, _d: &FiniteDiagram<Self>) -> Result<Cone<Self>> {
        Err(ProError::Unsupported("finite_limit"))
    }

    /// The unique map from the apex of `cone` to the apex of `lim`.
    fn limit_factor(
        &self,
        _d: &FiniteDiagram<Self>,
        _lim: &Cone<Self>,
        _cone: &Cone<Self>,
    ) -> Result<Self::Map> {
        Err(ProError::Unsupported("finite_limit"))
    }

    fn colimit(&self, _d: &FiniteDiagram<Self>) -> Result<Cocone<Self>> {
        Err(ProError::Unsupported("finite_colimit"))
    }

    /// The unique map from the apex of `colim` to the apex of `cocone`.
    fn colimit_factor(
        &self,
        _d: &FiniteDiagram<Self>,
        _colim: &Cocone<Self>,
        _cocone: &Cocone<Self>,
    ) -> Result<Self::Map> {
        Err(ProError::Unsupported("finite_colimit"))
    }

    fn is_mono(&self, _f: &Self::Map) -> Result<bool> {
        Err(ProError::Unsupported("mono_test"))
    }

    fn is_epi(&self, _f: &Self::Map) -> Result<bool> {
        Err(ProError::Unsupported("epi_test"))
    }

    /// Cardinality of the image of `f`, for categories of finite structures.
    fn image_size(&self, _f: &Self::Map) -> Result<usize> {
        Err(ProError::Unsupported("image_size"))
    }

    /// Cardinality of the underlying set, when finite.
    fn cardinality(&self, _x: &Self::Obj) -> Option<usize> {
        None
    }

    fn is_iso(&self, f: &Self::Map) -> Result<bool> {
        Ok(self.is_mono(f)? && self.is_epi(f)?)
    }

    fn check_composable(&self, g: &Self::Map, f: &Self::Map) -> Result<()> {
        let (t, s) = (self.target(f), self.source(g));
        if t == s {
            Ok(())
        } else {
            Err(ProError::Composition(format!(
                "target {t:?} != source {s:?}"
            )))
        }
    }
}

/// Additive structure of an abelian base.
pub trait Abelian: Category {
    fn zero_object(&self) -> Self::Obj;
    fn zero_map(&self, x: &Self::Obj, y: &Self::Obj) -> Self::Map;
    fn is_zero(&self, f: &Self::Map) -> bool;
    fn subtract(&self, f: &Self::Map, g: &Self::Map) -> Result<Self::Map>;
}

/// A finite diagram: objects and arrows `(source index, target index, map)`.
#[derive(Debug, Clone)]
pub struct FiniteDiagram<C: Category + ?Sized> {
    pub objects: Vec<C::Obj>,
    pub arrows: Vec<(usize, usize, C::Map)>,
}

impl<C: Category + ?Sized> FiniteDiagram<C> {
    pub fn new(objects: Vec<C::Obj>) -> Self {
        FiniteDiagram {
            objects,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(mut self, from: usize, to: usize, map: C::Map) -> Self {
        self.arrows.push((from, to, map));
        self
    }

    pub fn validate(&self, cat: &C) -> Result<()> {
        for (k, (i, j, m)) in self.arrows.iter().enumerate() {
            if *i >= self.objects.len() || *j >= self.objects.len() {
                return Err(ProError::Invalid(format!(
                    "arrow {k} references a missing object"
                )));
            }
            if cat.source(m) != self.objects[*i] || cat.target(m) != self.objects[*j] {
                return Err(ProError::Invalid(format!("arrow {k} has wrong endpoints")));
            }
        }
        Ok(())
    }
}

/// Apex with one leg per diagram object (`apex → X_i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone<C: Category + ?Sized> {
    pub apex: C::Obj,
    pub legs: Vec<C::Map>,
}

/// Nadir with one leg per diagram object (`X_i → apex`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocone<C: Category + ?Sized> {
    pub apex: C::Obj,
    pub legs: Vec<C::Map>,
}

pub fn is_cone<C: Category>(cat: &C, d: &FiniteDiagram<C>, cone: &Cone<C>) -> Result<bool> {
    if cone.legs.len() != d.objects.len() {
        return Ok(false);
    }
    for (i, j, m) in &d.arrows {
        if cat.compose(m, &cone.legs[*i])? != cone.legs[*j] {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_cocone<C: Category>(cat: &C, d: &FiniteDiagram<C>, cocone: &Cocone<C>) -> Result<bool> {
    if cocone.legs.len() != d.objects.len() {
        return Ok(false);
    }
    for (i, j, m) in &d.arrows {
        if cat.compose(&cocone.legs[*j], m)? != cocone.legs[*i] {
            return Ok(false);
        }
    }
    Ok(true)
}

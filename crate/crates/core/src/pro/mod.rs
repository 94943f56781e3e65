//! Pro-objects, pro-maps and their finite windows.

mod diagram;
mod window;

pub use diagram::DiagramOfPro;

pub use window::{
    certify_iso, compose_window_maps, hom_bounded, hom_classes, maps_equal, promap_equal,
    BoundedHom, Equality, HomClasses, ProWindow, WArrow, WindowMap,
};

use crate::base::{Category, Cone, FiniteDiagram};
use crate::index::{CofinalFunctor, DirectedIndex, Ix, Point};
use crate::{Check, ProError, Result, Verdict};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

type LevelFn<C> = dyn Fn(&Ix) -> Result<<C as Category>::Obj> + Send + Sync;
type StructFn<C> = dyn Fn(&Ix, &Ix) -> Result<<C as Category>::Map> + Send + Sync;
type RepFn<C> = dyn Fn(&Ix) -> Result<(Ix, <C as Category>::Map)> + Send + Sync;

struct Inner<C: Category> {
    cat: C,
    name: String,
    index: Arc<dyn DirectedIndex>,
    level: Box<LevelFn<C>>,
    structure: Box<StructFn<C>>,
    objs: Mutex<HashMap<Ix, C::Obj>>,
    maps: Mutex<HashMap<(Ix, Ix), C::Map>>,
}

/// A diagram `I -> C` over a cofinite directed set, computed on demand.
/// Larger indices are finer: there is a structure map `X_t -> X_s` for
/// every `s <= t`.
pub struct ProObject<C: Category> {
    inner: Arc<Inner<C>>,
}

impl<C: Category> Clone for ProObject<C> {
    fn clone(&self) -> Self {
        ProObject {
            inner: self.inner.clone(),
        }
    }
}

impl<C: Category> fmt::Debug for ProObject<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ProObject({} over {})",
            self.inner.name,
            self.inner.index.describe()
        )
    }
}

impl<C: Category> ProObject<C> {
    /// `structure(t, s)` is only called with `s < t`.
    pub fn new(
        cat: C,
        name: impl Into<String>,
        index: Arc<dyn DirectedIndex>,
        level: impl Fn(&Ix) -> Result<C::Obj> + Send + Sync + 'static,
        structure: impl Fn(&Ix, &Ix) -> Result<C::Map> + Send + Sync + 'static,
    ) -> Self {
        ProObject {
            inner: Arc::new(Inner {
                cat,
                name: name.into(),
                index,
                level: Box::new(level),
                structure: Box::new(structure),
                objs: Mutex::new(HashMap::new()),
                maps: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// The constant pro-object `cX`.
    pub fn constant(cat: C, x: C::Obj) -> Self {
        let y = x.clone();
        let c2 = cat.clone();
        ProObject::new(
            cat,
            format!("c{x:?}"),
            Arc::new(Point),
            move |_| Ok(y.clone()),
            move |_, _| Ok(c2.identity(&x)),
        )
    }

    /// A tower indexed by the naturals from levels and bonding maps
    /// `step(n): X_{n+1} -> X_n`.
    pub fn tower(
        cat: C,
        name: impl Into<String>,
        level: impl Fn(usize) -> Result<C::Obj> + Send + Sync + 'static,
        step: impl Fn(usize) -> Result<C::Map> + Send + Sync + 'static,
    ) -> Self {
        let c2 = cat.clone();
        let level = Arc::new(level);
        let l2 = level.clone();
        ProObject::new(
            cat,
            name,
            Arc::new(crate::index::Chain),
            move |s| l2(s.0[0]),
            move |t, s| {
                let mut m = c2.identity(&level(t.0[0])?);
                for k in (s.0[0]..t.0[0]).rev() {
                    m = c2.compose(&step(k)?, &m)?;
                }
                Ok(m)
            },
        )
    }

    /// Precomposition with a cofinal functor: `i -> X_{F(i)}`.
    pub fn reindex(&self, f: &CofinalFunctor) -> Self {
        let (x1, x2) = (self.clone(), self.clone());
        let (f1, f2) = (f.clone(), f.clone());
        ProObject::new(
            self.inner.cat.clone(),
            format!("{}*", self.inner.name),
            f.source.clone(),
            move |i| x1.level(&f1.apply(i)?),
            move |t, s| x2.structure(&f2.apply(t)?, &f2.apply(s)?),
        )
    }

    pub fn cat(&self) -> &C {
        &self.inner.cat
    }

    /// Whether both handles refer to the same pro-object.
    pub fn same(&self, other: &ProObject<C>) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn index(&self) -> &Arc<dyn DirectedIndex> {
        &self.inner.index
    }

    pub fn level(&self, s: &Ix) -> Result<C::Obj> {
        if let Some(x) = self.inner.objs.lock().expect("memo").get(s) {
            return Ok(x.clone());
        }
        let x = (self.inner.level)(s)?;
        self.inner
            .objs
            .lock()
            .expect("memo")
            .insert(s.clone(), x.clone());
        Ok(x)
    }

    /// The structure map `X_t -> X_s` for `s <= t`.
    pub fn structure(&self, t: &Ix, s: &Ix) -> Result<C::Map> {
        if t == s {
            return Ok(self.inner.cat.identity(&self.level(s)?));
        }
        if !self.inner.index.le(s, t) {
            return Err(ProError::Precondition(format!(
                "{s} is not below {t} in {}",
                self.inner.name
            )));
        }
        let key = (t.clone(), s.clone());
        if let Some(m) = self.inner.maps.lock().expect("memo").get(&key) {
            return Ok(m.clone());
        }
        let m = (self.inner.structure)(t, s)?;
        self.inner.maps.lock().expect("memo").insert(key, m.clone());
        Ok(m)
    }

    pub fn window(&self, depth: usize) -> Result<ProWindow<C>> {
        ProWindow::of(self, depth)
    }

    /// Endpoints and functoriality of the structure maps on a window.
    pub fn validate(&self, depth: usize) -> Result<Check> {
        let cat = self.cat();
        let w = self.index().window(depth);
        for (i, u) in w.iter().enumerate() {
            for t in w.iter().take(i + 1) {
                if !self.index().le(t, u) {
                    continue;
                }
                let m = self.structure(u, t)?;
                if cat.source(&m) != self.level(u)? || cat.target(&m) != self.level(t)? {
                    return Ok(Check::new("pro-object", Verdict::Refuted, depth)
                        .with_witness(format!("X({u} -> {t}) has wrong ends")));
                }
                for s in w.iter().take(i + 1) {
                    if self.index().le(s, t)
                        && cat.compose(&self.structure(t, s)?, &m)? != self.structure(u, s)?
                    {
                        return Ok(Check::new("pro-object", Verdict::Refuted, depth)
                            .with_witness(format!("not functorial at {u} -> {t} -> {s}")));
                    }
                }
            }
        }
        Ok(Check::certified("pro-object", depth))
    }

    /// The limit in the base of the window at `depth`, with a flag telling
    /// whether the comparison from the window at `depth - 1` is an iso.
    pub fn base_limit(&self, depth: usize) -> Result<(Cone<C>, bool)> {
        let lim = |d: usize| -> Result<(FiniteDiagram<C>, Cone<C>)> {
            let w = self.window(d)?;
            let diag = w.diagram();
            let cone = self.cat().limit(&diag)?;
            Ok((diag, cone))
        };
        let (_, cone) = lim(depth)?;
        if depth == 0 {
            return Ok((cone, self.index().finite_size() == Some(1)));
        }
        let (prev_diag, prev) = lim(depth - 1)?;
        let n = prev_diag.objects.len();
        let restricted = Cone {
            apex: cone.apex.clone(),
            legs: cone.legs[..n].to_vec(),
        };
        let cmp = self.cat().limit_factor(&prev_diag, &prev, &restricted)?;
        let stable = self.cat().is_iso(&cmp).unwrap_or(false);
        Ok((cone, stable))
    }
}

/// A morphism of pro-objects, given by a representative `X_t -> Y_s` for
/// each index `s` of the target.
pub struct ProMap<C: Category> {
    pub source: ProObject<C>,
    pub target: ProObject<C>,
    rep: Arc<RepFn<C>>,
}

impl<C: Category> Clone for ProMap<C> {
    fn clone(&self) -> Self {
        ProMap {
            source: self.source.clone(),
            target: self.target.clone(),
            rep: self.rep.clone(),
        }
    }
}

impl<C: Category> fmt::Debug for ProMap<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ProMap({} -> {})",
            self.source.name(),
            self.target.name()
        )
    }
}

impl<C: Category> ProMap<C> {
    pub fn new(
        source: ProObject<C>,
        target: ProObject<C>,
        rep: impl Fn(&Ix) -> Result<(Ix, C::Map)> + Send + Sync + 'static,
    ) -> Self {
        ProMap {
            source,
            target,
            rep: Arc::new(rep),
        }
    }

    pub fn identity(x: &ProObject<C>) -> Self {
        let y = x.clone();
        ProMap::new(x.clone(), x.clone(), move |s| {
            Ok((s.clone(), y.cat().identity(&y.level(s)?)))
        })
    }

    /// A level map between pro-objects on the same index.
    pub fn levelwise(
        source: ProObject<C>,
        target: ProObject<C>,
        f: impl Fn(&Ix) -> Result<C::Map> + Send + Sync + 'static,
    ) -> Self {
        ProMap::new(source, target, move |s| Ok((s.clone(), f(s)?)))
    }

    /// Maps into a constant pro-object: one map out of some level.
    pub fn to_constant(source: ProObject<C>, target: ProObject<C>, at: Ix, f: C::Map) -> Self {
        ProMap::new(source, target, move |_| Ok((at.clone(), f.clone())))
    }

    pub fn rep(&self, s: &Ix) -> Result<(Ix, C::Map)> {
        let (t, m) = (self.rep)(s)?;
        let cat = self.source.cat();
        if cat.source(&m) != self.source.level(&t)? || cat.target(&m) != self.target.level(s)? {
            return Err(ProError::Composition(format!(
                "representative at {s} does not run {} -> {}",
                self.source.name(),
                self.target.name()
            )));
        }
        Ok((t, m))
    }

    /// `self . f`.
    pub fn after(&self, f: &ProMap<C>) -> ProMap<C> {
        let (g, f2) = (self.clone(), f.clone());
        ProMap::new(f.source.clone(), self.target.clone(), move |s| {
            let (t, m) = g.rep(s)?;
            let (u, n) = f2.rep(&t)?;
            Ok((u, g.source.cat().compose(&m, &n)?))
        })
    }

    /// Compatibility of the representatives: for `s' <= s`, the
    /// representatives at `s'` and `Y(s -> s') . f_s` agree in the colimit.
    pub fn validate(&self, budget: crate::index::TruncationBudget) -> Result<Check> {
        let tw = self.target.index().window(budget.depth);
        let reps: Vec<(Ix, C::Map)> = tw.iter().map(|s| self.rep(s)).collect::<Result<_>>()?;
        let deepest = reps
            .iter()
            .map(|(t, _)| self.source.index().level(t))
            .max()
            .unwrap_or(0);
        let sw = self.source.window(deepest + budget.slack)?;
        let cat = self.source.cat();
        for (i, s) in tw.iter().enumerate() {
            for (k, s2) in tw.iter().enumerate() {
                if s2 == s || !self.target.index().le(s2, s) {
                    continue;
                }
                let pushed = cat.compose(&self.target.structure(s, s2)?, &reps[i].1)?;
                let (p1, p2) = (sw.position(&reps[i].0), sw.position(&reps[k].0));
                let (Some(p1), Some(p2)) = (p1, p2) else {
                    return Ok(Check::new("pro-map", Verdict::Undetermined, budget.depth));
                };
                if sw.equalize(cat, p1, &pushed, p2, &reps[k].1)?.is_none() {
                    return Ok(Check::new("pro-map", Verdict::Refuted, budget.depth)
                        .with_witness(format!("representatives at {s} and {s2} disagree")));
                }
            }
        }
        Ok(Check::certified("pro-map", budget.depth))
    }
}

#[cfg(test)]
mod tests;

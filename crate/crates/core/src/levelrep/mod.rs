//! Level representations of diagrams of pro-objects: a functor
//! `A x I -> C` whose restriction to each object is isomorphic to the
//! corresponding pro-object by identity representatives.

mod strict;

pub use strict::{strict_reindex, StrictDiagram};

use crate::base::{Category, DiagramObj, FunctorCategory, NatTrans};
use crate::index::{
    nth_element, search_index, Chain, DirectedIndex, Ix, Search, ShapeArrow, ShapeWindow,
    TruncationBudget,
};
use crate::pro::{certify_iso, DiagramOfPro, ProMap, ProObject};
use crate::{Certificate, Check, ProError, Result, Verdict};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

enum Kind {
    /// Reindexing maps chosen level by level as least admissible values.
    Inductive,
    /// Index is the product of the indices of the objects with no outgoing
    /// arrows; each other coordinate is the least upper bound of the
    /// pulled-back indices.
    Strict {
        sinks: Vec<usize>,
        product: crate::index::Product,
    },
}

struct Inner<C: Category> {
    diagram: DiagramOfPro<C>,
    index: Arc<dyn DirectedIndex>,
    kind: Kind,
    cap: usize,
    shape: Mutex<(usize, Arc<ShapeWindow>)>,
    f: Mutex<HashMap<(usize, Ix), Ix>>,
}

/// Level data for a diagram: reindexing maps `f^a: I -> I^a` with
/// `X~^a_s = X^a_{f^a(s)}`.
pub struct LevelRepresentation<C: Category> {
    inner: Arc<Inner<C>>,
}

impl<C: Category> Clone for LevelRepresentation<C> {
    fn clone(&self) -> Self {
        LevelRepresentation {
            inner: self.inner.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelRow {
    pub object: String,
    pub s: Ix,
    pub f: Ix,
    pub h: Ix,
}

/// Builds the inductive level representation over `I = N`. Nothing is
/// computed until levels are requested; `budget.node_cap` bounds each
/// least-admissible search.
pub fn level_replace<C: Category>(
    d: &DiagramOfPro<C>,
    budget: TruncationBudget,
) -> Result<LevelRepresentation<C>> {
    let w = d.shape.window(0);
    for o in &w.objects {
        if !d.object(o.id)?.index().is_cofinite() {
            return Err(ProError::Precondition(format!(
                "object {} is not indexed by a cofinite directed set",
                o.name
            )));
        }
    }
    Ok(LevelRepresentation::build(
        d.clone(),
        Arc::new(Chain),
        Kind::Inductive,
        budget.node_cap,
    ))
}

impl<C: Category> LevelRepresentation<C> {
    fn build(
        diagram: DiagramOfPro<C>,
        index: Arc<dyn DirectedIndex>,
        kind: Kind,
        cap: usize,
    ) -> Self {
        let w = Arc::new(diagram.shape.window(0));
        LevelRepresentation {
            inner: Arc::new(Inner {
                diagram,
                index,
                kind,
                cap,
                shape: Mutex::new((0, w)),
                f: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn diagram(&self) -> &DiagramOfPro<C> {
        &self.inner.diagram
    }

    pub fn index(&self) -> &Arc<dyn DirectedIndex> {
        &self.inner.index
    }

    pub fn cat(&self) -> Result<C> {
        let w = self.shape_window(0)?;
        Ok(self.inner.diagram.object(w.objects[0].id)?.cat().clone())
    }

    /// A shape window containing `id`, grown on demand.
    pub fn shape_for(&self, id: usize) -> Result<Arc<ShapeWindow>> {
        let mut g = self.inner.shape.lock().expect("shape cache");
        if g.1.contains(id) {
            return Ok(g.1.clone());
        }
        for d in g.0 + 1..=g.0 + self.inner.cap {
            let w = self.inner.diagram.shape.window(d);
            if w.contains(id) {
                *g = (d, Arc::new(w));
                return Ok(g.1.clone());
            }
        }
        Err(ProError::budget(
            format!("shape window holding object {id}"),
            g.0 + self.inner.cap,
        ))
    }

    /// The shape window at `depth` (or a larger cached one).
    pub fn shape_window(&self, depth: usize) -> Result<Arc<ShapeWindow>> {
        let mut g = self.inner.shape.lock().expect("shape cache");
        if g.0 < depth {
            *g = (depth, Arc::new(self.inner.diagram.shape.window(depth)));
        }
        Ok(g.1.clone())
    }

    fn arrow(&self, id: usize) -> Result<ShapeArrow> {
        let g = self.inner.shape.lock().expect("shape cache");
        g.1.arrow(id)
            .cloned()
            .ok_or_else(|| ProError::Invalid(format!("arrow {id} not in shape window")))
    }

    fn object_index(&self, a: usize) -> Result<Arc<dyn DirectedIndex>> {
        Ok(self.inner.diagram.object(a)?.index().clone())
    }

    /// The cofinality surjection `h^a: I -> I^a`, cycling through `I^a`.
    pub fn h(&self, a: usize, s: &Ix) -> Result<Ix> {
        let ia = self.object_index(a)?;
        match &self.inner.kind {
            Kind::Inductive => {
                let n = s.0[0];
                let k = match ia.finite_size() {
                    Some(size) => n % size,
                    None => n,
                };
                nth_element(ia.as_ref(), k).ok_or_else(|| ProError::Invalid("empty index".into()))
            }
            Kind::Strict { .. } => self.f(a, s),
        }
    }

    /// The reindexing value `f^a(s)`.
    pub fn f(&self, a: usize, s: &Ix) -> Result<Ix> {
        if let Some(v) = self.inner.f.lock().expect("memo").get(&(a, s.clone())) {
            return Ok(v.clone());
        }
        let v = match &self.inner.kind {
            Kind::Inductive => self.f_inductive(a, s)?,
            Kind::Strict { sinks, product } => self.f_strict(a, s, sinks, product)?,
        };
        self.inner
            .f
            .lock()
            .expect("memo")
            .insert((a, s.clone()), v.clone());
        Ok(v)
    }

    fn f_strict(
        &self,
        a: usize,
        s: &Ix,
        sinks: &[usize],
        product: &crate::index::Product,
    ) -> Result<Ix> {
        let parts = product.split(s);
        if let Some(k) = sinks.iter().position(|&b| b == a) {
            return Ok(parts[k].clone());
        }
        let w = self.shape_for(a)?;
        let ia = self.object_index(a)?;
        let mut acc: Option<Ix> = None;
        for phi in w.arrows_from(a) {
            let Some(k) = sinks.iter().position(|&b| b == phi.target) else {
                continue;
            };
            let u = self.inner.diagram.arrow(phi)?.rep(&parts[k])?.0;
            acc = Some(match acc {
                None => u,
                Some(x) => ia.least_upper_bound(&x, &u).ok_or_else(|| {
                    ProError::MissingLeastUpperBound(format!("{x} and {u} in {}", ia.describe()))
                })?,
            });
        }
        acc.ok_or_else(|| {
            ProError::Precondition(format!(
                "object {a} maps to no object without outgoing arrows"
            ))
        })
    }

    fn f_inductive(&self, a: usize, s: &Ix) -> Result<Ix> {
        let cat = self.cat()?;
        let n = s.0[0];
        let x = self.inner.diagram.object(a)?;
        let ia = x.index().clone();
        let w = self.shape_for(a)?;
        let mut lower = vec![self.h(a, s)?];
        if n > 0 {
            lower.push(self.f(a, &Ix::nat(n - 1))?);
        }
        struct Out<M> {
            id: usize,
            target: usize,
            u: Ix,
            m: M,
            fb: Ix,
        }
        let mut outs = Vec::new();
        for phi in w.arrows_from(a) {
            let fb = self.f(phi.target, s)?;
            let (u, m) = self.inner.diagram.arrow(phi)?.rep(&fb)?;
            lower.push(u.clone());
            outs.push(Out {
                id: phi.id,
                target: phi.target,
                u,
                m,
                fb,
            });
        }
        // Fixed data from lower levels and lower grades.
        let mut squares = Vec::new();
        for o in &outs {
            let y = self.inner.diagram.object(o.target)?;
            for t in 0..n {
                let t = Ix::nat(t);
                let down = y.structure(&o.fb, &self.f(o.target, &t)?)?;
                squares.push((o.id, self.f(a, &t)?, down, self.vertical(o.id, &t)?));
            }
        }
        let mut triangles = Vec::new();
        for o in &outs {
            for psi in w.arrows_from(o.target) {
                let chi = w
                    .compose(psi.id, o.id)
                    .ok_or_else(|| ProError::Invalid("shape missing a composite".into()))?;
                triangles.push((o.id, chi, self.vertical(psi.id, s)?));
            }
        }
        let mut err = None;
        let check = |v: &Ix| -> Result<bool> {
            if !lower.iter().all(|l| ia.le(l, v)) {
                return Ok(false);
            }
            let mut vert: HashMap<usize, C::Map> = HashMap::new();
            for o in &outs {
                vert.insert(o.id, cat.compose(&o.m, &x.structure(v, &o.u)?)?);
            }
            for (id, fat, down, old) in &squares {
                if cat.compose(down, &vert[id])? != cat.compose(old, &x.structure(v, fat)?)? {
                    return Ok(false);
                }
            }
            for (id, chi, psi_v) in &triangles {
                if cat.compose(psi_v, &vert[id])? != vert[chi] {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let found = search_index(ia.as_ref(), self.inner.cap, |v| match check(v) {
            Ok(b) => b,
            Err(e) => {
                err.get_or_insert(e);
                false
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        match found {
            Search::Found(v) => Ok(v),
            _ => Err(ProError::budget(
                format!("admissible f^{a}({s}) satisfying monotonicity, cofinality, squares and triangles"),
                self.inner.cap,
            )),
        }
    }

    pub fn level(&self, a: usize, s: &Ix) -> Result<C::Obj> {
        self.inner.diagram.object(a)?.level(&self.f(a, s)?)
    }

    /// `X~^a(s -> t)` for `t <= s`.
    pub fn structure(&self, a: usize, s: &Ix, t: &Ix) -> Result<C::Map> {
        self.inner
            .diagram
            .object(a)?
            .structure(&self.f(a, s)?, &self.f(a, t)?)
    }

    /// `X~^phi_s: X~^a_s -> X~^b_s`.
    pub fn vertical(&self, phi: usize, s: &Ix) -> Result<C::Map> {
        let arr = self.arrow(phi)?;
        let x = self.inner.diagram.object(arr.source)?;
        let (u, m) = self
            .inner
            .diagram
            .arrow(&arr)?
            .rep(&self.f(arr.target, s)?)?;
        x.cat()
            .compose(&m, &x.structure(&self.f(arr.source, s)?, &u)?)
    }

    /// `X~^a` as a pro-object over `I`.
    pub fn pro_object(&self, a: usize) -> Result<ProObject<C>> {
        let x = self.inner.diagram.object(a)?;
        let (l1, l2) = (self.clone(), self.clone());
        Ok(ProObject::new(
            x.cat().clone(),
            format!("{}~", x.name()),
            self.inner.index.clone(),
            move |s| l1.level(a, s),
            move |s, t| l2.structure(a, s, t),
        ))
    }

    /// Identity-representative isomorphisms `X^a -> X~^a` and back.
    pub fn iso(&self, a: usize) -> Result<(ProMap<C>, ProMap<C>)> {
        let x = self.inner.diagram.object(a)?;
        let xt = self.pro_object(a)?;
        let l = self.clone();
        let x2 = x.clone();
        let to = ProMap::new(x.clone(), xt.clone(), move |s| {
            Ok((l.f(a, s)?, x2.cat().identity(&x2.level(&l.f(a, s)?)?)))
        });
        let l = self.clone();
        let x3 = x.clone();
        let cap = self.inner.cap;
        let from = ProMap::new(xt, x, move |i| {
            let mut err = None;
            let found = search_index(l.index().as_ref(), cap, |s| match l.f(a, s) {
                Ok(v) => x3.index().le(i, &v),
                Err(e) => {
                    err.get_or_insert(e);
                    false
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            match found {
                Search::Found(s) => Ok((s.clone(), x3.structure(&l.f(a, &s)?, i)?)),
                _ => Err(ProError::budget(format!("index mapping above {i}"), cap)),
            }
        });
        Ok((to, from))
    }

    /// `X~^phi` as a level map of pro-objects.
    pub fn vertical_map(&self, phi: &ShapeArrow) -> Result<ProMap<C>> {
        let l = self.clone();
        let id = phi.id;
        Ok(ProMap::levelwise(
            self.pro_object(phi.source)?,
            self.pro_object(phi.target)?,
            move |s| l.vertical(id, s),
        ))
    }

    /// The diagram of pro-objects this level representation induces.
    pub fn assemble(&self) -> DiagramOfPro<C> {
        let (l1, l2) = (self.clone(), self.clone());
        let objs: Arc<Mutex<HashMap<usize, ProObject<C>>>> = Arc::default();
        let o2 = objs.clone();
        let obj = move |id: usize| -> Result<ProObject<C>> {
            if let Some(x) = o2.lock().expect("memo").get(&id) {
                return Ok(x.clone());
            }
            let x = l1.pro_object(id)?;
            o2.lock().expect("memo").insert(id, x.clone());
            Ok(x)
        };
        let obj2 = obj.clone();
        DiagramOfPro::new(self.inner.diagram.shape.clone(), obj, move |phi| {
            let l = l2.clone();
            let id = phi.id;
            Ok(ProMap::levelwise(
                obj2(phi.source)?,
                obj2(phi.target)?,
                move |s| l.vertical(id, s),
            ))
        })
    }

    /// `X~` as a single pro-object of `A`-shaped diagrams; `A` must be
    /// finite.
    pub fn functor_pro_object(&self) -> Result<ProObject<FunctorCategory<C>>> {
        if !self.inner.diagram.shape.is_finite() {
            return Err(ProError::Precondition("diagram shape is infinite".into()));
        }
        let w = self.shape_window(0)?;
        let fc = FunctorCategory::new(self.cat()?, (*w).clone());
        let (l1, l2, w1, w2) = (self.clone(), self.clone(), w.clone(), w);
        let fc1 = fc.clone();
        Ok(ProObject::new(
            fc,
            "X~",
            self.inner.index.clone(),
            move |s| {
                let objects = w1
                    .objects
                    .iter()
                    .map(|o| l1.level(o.id, s))
                    .collect::<Result<Vec<_>>>()?;
                let maps = w1
                    .arrows
                    .iter()
                    .map(|a| l1.vertical(a.id, s))
                    .collect::<Result<Vec<_>>>()?;
                fc1.object(objects, maps)
            },
            move |s, t| {
                let level = |x: &Ix| -> Result<DiagramObj<C::Obj, C::Map>> {
                    Ok(DiagramObj {
                        objects: w2
                            .objects
                            .iter()
                            .map(|o| l2.level(o.id, x))
                            .collect::<Result<_>>()?,
                        maps: w2
                            .arrows
                            .iter()
                            .map(|a| l2.vertical(a.id, x))
                            .collect::<Result<_>>()?,
                    })
                };
                let components = w2
                    .objects
                    .iter()
                    .map(|o| l2.structure(o.id, s, t))
                    .collect::<Result<_>>()?;
                Ok(NatTrans {
                    source: level(s)?,
                    target: level(t)?,
                    components,
                })
            },
        ))
    }

    pub fn table(&self, depth: usize) -> Result<Vec<LevelRow>> {
        let w = self.shape_window(depth)?;
        let mut rows = Vec::new();
        for s in self.inner.index.window(depth) {
            for o in &w.objects {
                rows.push(LevelRow {
                    object: o.name.clone(),
                    s: s.clone(),
                    f: self.f(o.id, &s)?,
                    h: self.h(o.id, &s)?,
                });
            }
        }
        Ok(rows)
    }

    /// Rechecks the four conditions on the window and certifies the
    /// identity-representative isomorphisms and their compatibility with
    /// the arrows.
    pub fn verify(&self, budget: TruncationBudget) -> Result<Certificate> {
        let depth = budget.depth;
        let w = self.shape_window(depth)?;
        let cat = self.cat()?;
        let levels = self.inner.index.window(depth);
        let idx = self.inner.index.clone();
        let mut cert = Certificate::new();
        let mut mono = Check::certified("monotone", depth);
        let mut cof = Check::certified("cofinal", depth);
        let mut sq = Check::certified("squares commute", depth);
        let mut tri = Check::certified("triangles commute", depth);
        for o in &w.objects {
            let ia = self.object_index(o.id)?;
            for s in &levels {
                let fs = self.f(o.id, s)?;
                if !ia.le(&self.h(o.id, s)?, &fs) {
                    cof.verdict = Verdict::Refuted;
                    cof.witnesses.push(format!("f^{}({s}) below h", o.name));
                }
                for t in levels.iter().filter(|t| idx.lt(t, s)) {
                    if !ia.le(&self.f(o.id, t)?, &fs) {
                        mono.verdict = Verdict::Refuted;
                        mono.witnesses
                            .push(format!("f^{}({t}) > f^{}({s})", o.name, o.name));
                    }
                }
            }
        }
        for phi in &w.arrows {
            for s in &levels {
                let vs = self.vertical(phi.id, s)?;
                for t in levels.iter().filter(|t| idx.lt(t, s)) {
                    let l = cat.compose(&self.structure(phi.target, s, t)?, &vs)?;
                    let r = cat.compose(
                        &self.vertical(phi.id, t)?,
                        &self.structure(phi.source, s, t)?,
                    )?;
                    if l != r {
                        sq.verdict = Verdict::Refuted;
                        sq.witnesses.push(format!("{} at {s} -> {t}", phi.name));
                    }
                }
                for psi in w.arrows_from(phi.target) {
                    let chi = w
                        .compose(psi.id, phi.id)
                        .ok_or_else(|| ProError::Invalid("shape missing a composite".into()))?;
                    if cat.compose(&self.vertical(psi.id, s)?, &vs)? != self.vertical(chi, s)? {
                        tri.verdict = Verdict::Refuted;
                        tri.witnesses
                            .push(format!("{} . {} at {s}", psi.name, phi.name));
                    }
                }
            }
        }
        cert.push(mono);
        cert.push(cof);
        cert.push(sq);
        cert.push(tri);
        for o in &w.objects {
            let (to, from) = self.iso(o.id)?;
            for mut c in certify_iso(&to, &from, budget)?.checks {
                c.name = format!("X^{} iso: {}", o.name, c.name);
                cert.push(c);
            }
        }
        for phi in &w.arrows {
            let (to_a, _) = self.iso(phi.source)?;
            let (to_b, _) = self.iso(phi.target)?;
            let lhs = self.vertical_map(phi)?.after(&to_a);
            let rhs = to_b.after(&self.inner.diagram.arrow(phi)?);
            cert.push(
                crate::pro::promap_equal(&lhs, &rhs, budget)?
                    .to_check(&format!("compatibility at {}", phi.name)),
            );
        }
        Ok(cert)
    }
}

/// `Hom(X, Y)` for diagrams over a finite shape as the end of the pro-hom
/// sets: families of bounded pro-maps commuting with every arrow.
pub fn end_hom_count<C: Category>(
    x: &DiagramOfPro<C>,
    y: &DiagramOfPro<C>,
    budget: TruncationBudget,
) -> Result<usize> {
    if !x.shape.is_finite() {
        return Err(ProError::Precondition(
            "end formula needs a finite shape".into(),
        ));
    }
    let w = x.shape.window(0);
    let mut per_object: Vec<Vec<ProMap<C>>> = Vec::new();
    for o in &w.objects {
        let (xa, ya) = (x.object(o.id)?, y.object(o.id)?);
        let (sw, tw) = (
            xa.window(budget.depth + budget.slack)?,
            ya.window(budget.depth + budget.slack)?,
        );
        let h = crate::pro::hom_bounded(&sw, &tw, budget.node_cap)?;
        per_object.push(
            (0..h.count())
                .map(|k| h.family_map(k).to_promap(&sw, &tw, &xa, &ya))
                .collect(),
        );
    }
    let mut count = 0;
    let mut pick = vec![0usize; per_object.len()];
    if per_object.iter().any(Vec::is_empty) {
        return Ok(0);
    }
    loop {
        let mut natural = true;
        for phi in &w.arrows {
            let fa = &per_object[phi.source][pick[phi.source]];
            let fb = &per_object[phi.target][pick[phi.target]];
            let lhs = y.arrow(phi)?.after(fa);
            let rhs = fb.after(&x.arrow(phi)?);
            if !crate::pro::promap_equal(&lhs, &rhs, budget)?.is_equal() {
                natural = false;
                break;
            }
        }
        count += usize::from(natural);
        let mut k = pick.len();
        loop {
            if k == 0 {
                return Ok(count);
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < per_object[k].len() {
                break;
            }
            pick[k] = 0;
        }
    }
}

/// The same hom set computed levelwise: bounded pro-hom between the level
/// representations viewed as pro-objects of diagrams.
pub fn levelwise_hom_count<C: Category>(
    x: &LevelRepresentation<C>,
    y: &LevelRepresentation<C>,
    budget: TruncationBudget,
) -> Result<usize> {
    let (px, py) = (x.functor_pro_object()?, y.functor_pro_object()?);
    Ok(crate::pro::hom_bounded(
        &px.window(budget.depth)?,
        &py.window(budget.depth)?,
        budget.node_cap,
    )?
    .count())
}

use super::ProColimit;
use crate::base::{Category, Cocone, FiniteDiagram};
use crate::index::{DirectedIndex, Ix, KPoset, ShapeArrow, ShapeWindow, TruncationBudget};
use crate::levelrep::{level_replace, LevelRepresentation};
use crate::pro::{certify_iso, DiagramOfPro, ProMap, ProObject};
use crate::{Certificate, Check, ProError, Result, Verdict};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

type CoordFn = dyn Fn(usize, &Ix) -> Ix + Send + Sync;
type Memo<C> = Arc<Mutex<HashMap<Ix, (FiniteDiagram<C>, Cocone<C>)>>>;

/// Colimits over a shape window of `X~^a` at per-object coordinates
/// `coord(a, s)`, memoized by `s`.
pub(crate) struct Levels<C: Category> {
    pub lr: LevelRepresentation<C>,
    pub window: Arc<ShapeWindow>,
    coord: Arc<CoordFn>,
    memo: Memo<C>,
}

impl<C: Category> Clone for Levels<C> {
    fn clone(&self) -> Self {
        Levels {
            lr: self.lr.clone(),
            window: self.window.clone(),
            coord: self.coord.clone(),
            memo: self.memo.clone(),
        }
    }
}

impl<C: Category> Levels<C> {
    pub fn new(
        lr: LevelRepresentation<C>,
        window: Arc<ShapeWindow>,
        coord: impl Fn(usize, &Ix) -> Ix + Send + Sync + 'static,
    ) -> Self {
        Levels {
            lr,
            window,
            coord: Arc::new(coord),
            memo: Arc::default(),
        }
    }

    pub fn slot(&self, id: usize) -> usize {
        self.window
            .objects
            .iter()
            .position(|o| o.id == id)
            .expect("object in window")
    }

    /// `X-^a(s -> t)` along `phi: a -> b` (or the identity of `a`):
    /// structure down to `t_b`, then the level map at `t_b`.
    pub fn bar(&self, a: usize, phi: Option<&ShapeArrow>, s: &Ix, t: &Ix) -> Result<C::Map> {
        let sa = (self.coord)(a, s);
        match phi {
            None => self.lr.structure(a, &sa, &(self.coord)(a, t)),
            Some(p) => {
                let tb = (self.coord)(p.target, t);
                let down = self.lr.structure(a, &sa, &tb)?;
                self.lr.cat()?.compose(&self.lr.vertical(p.id, &tb)?, &down)
            }
        }
    }

    /// The other composite of the defining square: level map at `s_b`, then
    /// structure of `X~^b`.
    pub fn bar_other(&self, phi: &ShapeArrow, s: &Ix, t: &Ix) -> Result<C::Map> {
        let sb = (self.coord)(phi.target, s);
        let across = self.lr.vertical(phi.id, &sb)?;
        let sa = (self.coord)(phi.source, s);
        let lift = self.lr.structure(phi.source, &sa, &sb)?;
        let cat = self.lr.cat()?;
        let top = cat.compose(&across, &lift)?;
        cat.compose(
            &self
                .lr
                .structure(phi.target, &sb, &(self.coord)(phi.target, t))?,
            &top,
        )
    }

    pub fn object(&self, a: usize, s: &Ix) -> Result<C::Obj> {
        self.lr.level(a, &(self.coord)(a, s))
    }

    pub fn cocone(&self, s: &Ix) -> Result<(FiniteDiagram<C>, Cocone<C>)> {
        self.cocone_on(&self.window, s)
    }

    fn cocone_on(&self, w: &ShapeWindow, s: &Ix) -> Result<(FiniteDiagram<C>, Cocone<C>)> {
        let whole = std::ptr::eq(w, self.window.as_ref());
        if whole {
            if let Some(v) = self.memo.lock().expect("memo").get(s) {
                return Ok(v.clone());
            }
        }
        let slot = |id: usize| w.objects.iter().position(|o| o.id == id).expect("object");
        let objects = w
            .objects
            .iter()
            .map(|o| self.object(o.id, s))
            .collect::<Result<Vec<_>>>()?;
        let mut diag = FiniteDiagram::new(objects);
        for a in &w.arrows {
            diag = diag.arrow(
                slot(a.source),
                slot(a.target),
                self.bar(a.source, Some(a), s, s)?,
            );
        }
        let cocone = self.lr.cat()?.colimit(&diag)?;
        if whole {
            self.memo
                .lock()
                .expect("memo")
                .insert(s.clone(), (diag.clone(), cocone.clone()));
        }
        Ok((diag, cocone))
    }

    /// `Z_s -> Z_t`, induced by the structure maps of each `X-^a`.
    pub fn structure(&self, s: &Ix, t: &Ix) -> Result<C::Map> {
        let (ds, from) = self.cocone(s)?;
        let (_, to) = self.cocone(t)?;
        let cat = self.lr.cat()?;
        let legs = self
            .window
            .objects
            .iter()
            .zip(&to.legs)
            .map(|(o, leg)| cat.compose(leg, &self.bar(o.id, None, s, t)?))
            .collect::<Result<Vec<_>>>()?;
        cat.colimit_factor(
            &ds,
            &from,
            &Cocone {
                apex: to.apex,
                legs,
            },
        )
    }

    pub fn pro_object(&self, name: &str, index: Arc<dyn DirectedIndex>) -> Result<ProObject<C>> {
        let (l1, l2) = (self.clone(), self.clone());
        Ok(ProObject::new(
            self.lr.cat()?,
            name,
            index,
            move |s| Ok(l1.cocone(s)?.1.apex),
            move |s, t| l2.structure(s, t),
        ))
    }
}

/// `X-^a_s = X~^a_{s_a}` over `A x K`, with `K` the monotone tuples over a
/// shape window.
pub struct BarDiagram<C: Category> {
    pub(crate) levels: Levels<C>,
    pub k: KPoset,
}

impl<C: Category> Clone for BarDiagram<C> {
    fn clone(&self) -> Self {
        BarDiagram {
            levels: self.levels.clone(),
            k: self.k.clone(),
        }
    }
}

impl<C: Category> BarDiagram<C> {
    pub fn new(lr: LevelRepresentation<C>, window: Arc<ShapeWindow>) -> Self {
        let k = KPoset::new((*window).clone(), lr.index().clone());
        let k2 = k.clone();
        BarDiagram {
            levels: Levels::new(lr, window, move |a, s| k2.coord(s, a)),
            k,
        }
    }

    pub fn window(&self) -> &ShapeWindow {
        &self.levels.window
    }

    pub fn object(&self, a: usize, s: &Ix) -> Result<C::Obj> {
        self.levels.object(a, s)
    }

    /// The map `X-^a_s -> X-^b_t` over `phi: a -> b` (`None` for the
    /// identity of `a`) and `t <= s`.
    pub fn arrow(&self, a: usize, phi: Option<&ShapeArrow>, s: &Ix, t: &Ix) -> Result<C::Map> {
        if !self.k.le(t, s) {
            return Err(ProError::Precondition(format!("{t} is not below {s}")));
        }
        self.levels.bar(a, phi, s, t)
    }

    /// The defining square commutes, and composites in `A x K` agree, on
    /// the depth-`depth` window of `K`.
    pub fn check(&self, depth: usize) -> Result<Check> {
        let w = self.window();
        let ks = self.k.window(depth);
        let cat = self.levels.lr.cat()?;
        let mut cells = 0usize;
        let fail = |what: String| {
            Ok(Check::new("bar diagram", Verdict::Refuted, depth).with_witness(what))
        };
        for s in &ks {
            for t in ks.iter().filter(|t| self.k.le(t, s)) {
                for phi in &w.arrows {
                    if self.levels.bar(phi.source, Some(phi), s, t)?
                        != self.levels.bar_other(phi, s, t)?
                    {
                        return fail(format!("square for {} at {s} -> {t}", phi.name));
                    }
                    cells += 1;
                }
                for u in ks.iter().filter(|u| self.k.le(u, t)) {
                    for o in &w.objects {
                        let lhs = cat.compose(
                            &self.levels.bar(o.id, None, t, u)?,
                            &self.levels.bar(o.id, None, s, t)?,
                        )?;
                        if lhs != self.levels.bar(o.id, None, s, u)? {
                            return fail(format!("structure of {} at {s} -> {t} -> {u}", o.name));
                        }
                    }
                    for f in &w.arrows {
                        let whole = self.levels.bar(f.source, Some(f), s, u)?;
                        let a = cat.compose(
                            &self.levels.bar(f.target, None, t, u)?,
                            &self.levels.bar(f.source, Some(f), s, t)?,
                        )?;
                        let b = cat.compose(
                            &self.levels.bar(f.source, Some(f), t, u)?,
                            &self.levels.bar(f.source, None, s, t)?,
                        )?;
                        if a != whole || b != whole {
                            return fail(format!(
                                "{} against identities at {s} -> {t} -> {u}",
                                f.name
                            ));
                        }
                        for g in w.arrows_from(f.target) {
                            let Some(h) = w.compose(g.id, f.id).and_then(|h| w.arrow(h)) else {
                                continue;
                            };
                            let two = cat.compose(
                                &self.levels.bar(g.source, Some(g), t, u)?,
                                &self.levels.bar(f.source, Some(f), s, t)?,
                            )?;
                            if two != self.levels.bar(h.source, Some(h), s, u)? {
                                return fail(format!(
                                    "{} then {} at {s} -> {t} -> {u}",
                                    f.name, g.name
                                ));
                            }
                        }
                        cells += 1;
                    }
                }
            }
        }
        Ok(Check::certified("bar diagram", depth).with_witness(format!("{cells} cells")))
    }
}

/// `Z_s = colim_a X-^a_s` over `K`, with injections from each `X^a`.
pub struct CofiniteColimit<C: Category> {
    pub object: ProObject<C>,
    /// One per object of the shape window, in window order.
    pub legs: Vec<ProMap<C>>,
    pub bar: BarDiagram<C>,
    /// Whether the colimit over the window agrees with the one over the
    /// previous window; certified outright for finite shapes.
    pub stable: Check,
}

impl<C: Category> CofiniteColimit<C> {
    /// The restriction of `Z` to the diagonal tuples `(s, ..., s)`, which
    /// are cofinal in `K`, with the injections restricted alike.
    pub fn diagonal(&self) -> Result<(ProObject<C>, Vec<ProMap<C>>)> {
        let n = self.bar.window().objects.len();
        let diag = move |s: &Ix| KPoset::join(&vec![s.clone(); n]);
        let (z1, z2) = (self.object.clone(), self.object.clone());
        let object = ProObject::new(
            self.object.cat().clone(),
            "colim (diagonal)",
            self.bar.levels.lr.index().clone(),
            move |s| z1.level(&diag(s)),
            move |s, t| z2.structure(&diag(s), &diag(t)),
        );
        let legs = self
            .legs
            .iter()
            .map(|l| {
                let l = l.clone();
                ProMap::new(l.source.clone(), object.clone(), move |s| l.rep(&diag(s)))
            })
            .collect();
        Ok((object, legs))
    }
}

/// Truncates the shape at `budget.depth` (all of it when finite),
/// level-replaces, and takes colimits over the monotone-tuple poset.
pub fn cofinite_colimit<C: Category>(
    d: &DiagramOfPro<C>,
    budget: TruncationBudget,
) -> Result<CofiniteColimit<C>> {
    let lr = level_replace(d, budget)?;
    let depth = budget.depth;
    lr.shape_window(depth)?;
    let window = Arc::new(d.shape.window(depth));
    let bar = BarDiagram::new(lr.clone(), window.clone());
    let index: Arc<dyn DirectedIndex> = Arc::new(bar.k.clone());
    let object = bar.levels.pro_object("colim K", index)?;
    let mut legs = Vec::new();
    for o in &window.objects {
        let x = d.object(o.id)?;
        let (levels, k, a) = (bar.levels.clone(), bar.k.clone(), o.id);
        let slot = bar.levels.slot(a);
        legs.push(ProMap::new(x, object.clone(), move |s| {
            let sa = k.coord(s, a);
            Ok((levels.lr.f(a, &sa)?, levels.cocone(s)?.1.legs[slot].clone()))
        }));
    }
    let stable = if d.shape.is_finite() {
        Check::certified("stable", depth).with_witness("finite shape")
    } else {
        stability(&bar, d, budget)?
    };
    Ok(CofiniteColimit {
        object,
        legs,
        bar,
        stable,
    })
}

/// Compares colimits over the windows at `depth - 1` and `depth` along the
/// canonical map, at tuples of `K` up to `budget.slack`.
fn stability<C: Category>(
    bar: &BarDiagram<C>,
    d: &DiagramOfPro<C>,
    budget: TruncationBudget,
) -> Result<Check> {
    let depth = budget.depth;
    if depth == 0 {
        return Ok(Check::new("stable", Verdict::Undetermined, 0)
            .with_witness("no smaller window to compare"));
    }
    let smaller = d.shape.window(depth - 1);
    let cat = bar.levels.lr.cat()?;
    for s in bar.k.window(budget.slack) {
        let (small_d, small_c) = bar.levels.cocone_on(&smaller, &s)?;
        let (_, big) = bar.levels.cocone(&s)?;
        let legs = smaller
            .objects
            .iter()
            .map(|o| big.legs[bar.levels.slot(o.id)].clone())
            .collect();
        let m = cat.colimit_factor(
            &small_d,
            &small_c,
            &Cocone {
                apex: big.apex.clone(),
                legs,
            },
        )?;
        if !cat.is_iso(&m)? {
            return Ok(
                Check::new("stable", Verdict::Undetermined, depth).with_witness(format!(
                    "the colimit at {s} still changes between shape windows {} and {depth}",
                    depth - 1
                )),
            );
        }
    }
    Ok(Check::certified("stable", depth)
        .with_witness(format!("shape windows {} and {depth} agree", depth - 1)))
}

/// The canonical maps between the levelwise colimit over `I` and the colimit
/// over `K`: diagonal tuples one way, structure maps from an upper bound of
/// the coordinates the other.
pub fn compare_colimits<C: Category>(
    fin: &ProColimit<C>,
    cof: &CofiniteColimit<C>,
    budget: TruncationBudget,
) -> Result<Certificate> {
    let levels = cof.bar.levels.clone();
    let k = cof.bar.k.clone();
    let index = fin.level_rep.index().clone();
    let ids: Vec<usize> = cof.bar.window().objects.iter().map(|o| o.id).collect();
    let n = ids.len();
    let (fo, co) = (fin.object.clone(), cof.object.clone());
    let f2 = fo.clone();
    let to_k = ProMap::new(fo.clone(), co.clone(), move |s| {
        let parts = k.split(s);
        let mut t = parts[0].clone();
        for p in &parts[1..] {
            t = index
                .upper_bound(&t, p)
                .ok_or_else(|| ProError::Invalid("index is not directed".into()))?;
        }
        let (dt, from) = levels.cocone(&KPoset::join(&vec![t.clone(); n]))?;
        let (_, to) = levels.cocone(s)?;
        let cat = levels.lr.cat()?;
        let mut legs = Vec::new();
        for (i, &a) in ids.iter().enumerate() {
            legs.push(cat.compose(&to.legs[i], &levels.lr.structure(a, &t, &parts[i])?)?);
        }
        let m = cat.colimit_factor(
            &dt,
            &from,
            &Cocone {
                apex: to.apex,
                legs,
            },
        )?;
        if cat.source(&m) != f2.level(&t)? {
            return Err(ProError::verification(
                "diagonal colimit",
                format!("level {t}"),
            ));
        }
        Ok((t, m))
    });
    let f3 = fo.clone();
    let from_k = ProMap::new(co, fo, move |t| {
        Ok((
            KPoset::join(&vec![t.clone(); n]),
            f3.cat().identity(&f3.level(t)?),
        ))
    });
    certify_iso(&to_k, &from_k, budget)
}

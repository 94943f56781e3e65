use super::{ProMap, ProObject};
use crate::base::{Category, FiniteDiagram};
use crate::index::{Ix, TruncationBudget};
use crate::{Certificate, Check, ProError, Result, Verdict};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WArrow<M> {
    /// The finer index.
    pub source: usize,
    pub target: usize,
    pub map: M,
}

/// A finite cofiltered piece of a pro-object: labelled levels and every
/// arrow between them, identities included. Parallel arrows are allowed.
#[derive(Debug, Clone)]
pub struct ProWindow<C: Category> {
    pub cat: C,
    pub labels: Vec<Ix>,
    pub objects: Vec<C::Obj>,
    pub arrows: Vec<WArrow<C::Map>>,
    pos: HashMap<Ix, usize>,
    between: HashMap<(usize, usize), Vec<usize>>,
}

impl<C: Category> ProWindow<C> {
    pub fn of(x: &ProObject<C>, depth: usize) -> Result<Self> {
        let labels = x.index().window(depth);
        let objects = labels
            .iter()
            .map(|s| x.level(s))
            .collect::<Result<Vec<_>>>()?;
        let mut arrows = Vec::new();
        for (u, lu) in labels.iter().enumerate() {
            for (t, lt) in labels.iter().enumerate() {
                if x.index().le(lt, lu) {
                    arrows.push(WArrow {
                        source: u,
                        target: t,
                        map: x.structure(lu, lt)?,
                    });
                }
            }
        }
        Ok(Self::build(x.cat().clone(), labels, objects, arrows))
    }

    /// Identities are added; `arrows` should be closed under composition.
    pub fn from_parts(
        cat: C,
        labels: Vec<Ix>,
        objects: Vec<C::Obj>,
        mut arrows: Vec<WArrow<C::Map>>,
    ) -> Result<Self> {
        if labels.len() != objects.len() {
            return Err(ProError::Invalid("one object per label".into()));
        }
        for a in &arrows {
            if a.source >= objects.len() || a.target >= objects.len() {
                return Err(ProError::Invalid("arrow leaves the window".into()));
            }
            if cat.source(&a.map) != objects[a.source] || cat.target(&a.map) != objects[a.target] {
                return Err(ProError::Composition(format!(
                    "arrow {} -> {} has wrong ends",
                    labels[a.source], labels[a.target]
                )));
            }
        }
        for (i, o) in objects.iter().enumerate() {
            arrows.push(WArrow {
                source: i,
                target: i,
                map: cat.identity(o),
            });
        }
        Ok(Self::build(cat, labels, objects, arrows))
    }

    fn build(cat: C, labels: Vec<Ix>, objects: Vec<C::Obj>, arrows: Vec<WArrow<C::Map>>) -> Self {
        let pos = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let mut between: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (k, a) in arrows.iter().enumerate() {
            between.entry((a.source, a.target)).or_default().push(k);
        }
        ProWindow {
            cat,
            labels,
            objects,
            arrows,
            pos,
            between,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, s: &Ix) -> Option<usize> {
        self.pos.get(s).copied()
    }

    pub fn arrows_between(&self, u: usize, t: usize) -> impl Iterator<Item = &WArrow<C::Map>> {
        self.between
            .get(&(u, t))
            .into_iter()
            .flatten()
            .map(|&k| &self.arrows[k])
    }

    /// Arrows with target `t`, identity first.
    pub fn arrows_into(&self, t: usize) -> impl Iterator<Item = &WArrow<C::Map>> {
        self.arrows.iter().filter(move |a| a.target == t)
    }

    /// Non-identity arrows as a finite diagram in the base.
    pub fn diagram(&self) -> FiniteDiagram<C> {
        let mut d = FiniteDiagram::new(self.objects.clone());
        for a in &self.arrows {
            if a.source != a.target {
                d = d.arrow(a.source, a.target, a.map.clone());
            }
        }
        d
    }

    /// The first index `u` (in window order) with arrows `a: u -> t1`,
    /// `b: u -> t2` such that `m1 . a = m2 . b`.
    pub fn equalize(
        &self,
        cat: &C,
        t1: usize,
        m1: &C::Map,
        t2: usize,
        m2: &C::Map,
    ) -> Result<Option<usize>> {
        for u in 0..self.len() {
            for a in self.arrows_between(u, t1) {
                let left = cat.compose(m1, &a.map)?;
                for b in self.arrows_between(u, t2) {
                    if left == cat.compose(m2, &b.map)? {
                        return Ok(Some(u));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Colimit classes of `Hom(X_t, Y)` over the window indices `t`.
#[derive(Debug, Clone)]
pub struct HomClasses<C: Category> {
    /// Canonical representative of each class: least `t`, then least map.
    pub reps: Vec<(usize, C::Map)>,
    lookup: HashMap<(usize, C::Map), usize>,
}

impl<C: Category> HomClasses<C> {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class_of(&self, t: usize, m: &C::Map) -> Option<usize> {
        self.lookup.get(&(t, m.clone())).copied()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn hom_classes<C: Category>(x: &ProWindow<C>, y: &C::Obj) -> Result<HomClasses<C>> {
    let cat = &x.cat;
    let mut items: Vec<(usize, C::Map)> = Vec::new();
    let mut index: HashMap<(usize, C::Map), usize> = HashMap::new();
    for (t, xt) in x.objects.iter().enumerate() {
        for h in cat.hom(xt, y)? {
            index.insert((t, h.clone()), items.len());
            items.push((t, h));
        }
    }
    let mut parent: Vec<usize> = (0..items.len()).collect();
    for i in 0..items.len() {
        let (t, h) = items[i].clone();
        for a in x.arrows_into(t) {
            if a.source == t {
                continue;
            }
            let key = (a.source, cat.compose(&h, &a.map)?);
            let j = *index.get(&key).ok_or_else(|| {
                ProError::Invalid("hom enumeration is not closed under precomposition".into())
            })?;
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut lookup = HashMap::with_capacity(items.len());
    for i in 0..items.len() {
        let r = find(&mut parent, i);
        let c = *class_of_root.entry(r).or_insert_with(|| {
            reps.push(items[i].clone());
            reps.len() - 1
        });
        lookup.insert(items[i].clone(), c);
    }
    Ok(HomClasses { reps, lookup })
}

/// `Hom(X, Y)` computed on windows: colimit classes per target index and the
/// compatible families of classes.
#[derive(Debug, Clone)]
pub struct BoundedHom<C: Category> {
    pub per_target: Vec<HomClasses<C>>,
    pub families: Vec<Vec<usize>>,
}

impl<C: Category> BoundedHom<C> {
    pub fn count(&self) -> usize {
        self.families.len()
    }

    pub fn family_map(&self, k: usize) -> WindowMap<C> {
        WindowMap {
            reps: self.families[k]
                .iter()
                .enumerate()
                .map(|(s, &c)| Some(self.per_target[s].reps[c].clone()))
                .collect(),
        }
    }
}

/// Enumerates compatible families, stopping with a budget error after `cap`.
pub fn hom_bounded<C: Category>(
    x: &ProWindow<C>,
    y: &ProWindow<C>,
    cap: usize,
) -> Result<BoundedHom<C>> {
    let per_target = y
        .objects
        .iter()
        .map(|ys| hom_classes(x, ys))
        .collect::<Result<Vec<_>>>()?;
    let n = y.len();
    let order: Vec<usize> = (0..n).rev().collect();
    let mut rank = vec![0usize; n];
    for (r, &s) in order.iter().enumerate() {
        rank[s] = r;
    }
    // Arrows checked when the later of their two ends is assigned.
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, a) in y.arrows.iter().enumerate() {
        if a.source != a.target {
            checks[order[rank[a.source].max(rank[a.target])]].push(k);
        }
    }
    let mut families = Vec::new();
    let mut choice = vec![usize::MAX; n];
    #[allow(clippy::too_many_arguments)]
    fn rec<C: Category>(
        y: &ProWindow<C>,
        per: &[HomClasses<C>],
        order: &[usize],
        checks: &[Vec<usize>],
        depth: usize,
        choice: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        if depth == order.len() {
            if out.len() >= cap {
                return Err(ProError::budget("compatible families", cap));
            }
            out.push(choice.clone());
            return Ok(());
        }
        let s = order[depth];
        'class: for c in 0..per[s].len() {
            choice[s] = c;
            for &k in &checks[s] {
                let a = &y.arrows[k];
                let (t, h) = &per[a.source].reps[choice[a.source]];
                let pushed = y.cat.compose(&a.map, h)?;
                if per[a.target].class_of(*t, &pushed) != Some(choice[a.target]) {
                    continue 'class;
                }
            }
            rec(y, per, order, checks, depth + 1, choice, out, cap)?;
        }
        choice[s] = usize::MAX;
        Ok(())
    }
    rec(
        y,
        &per_target,
        &order,
        &checks,
        0,
        &mut choice,
        &mut families,
        cap,
    )?;
    families.sort();
    Ok(BoundedHom {
        per_target,
        families,
    })
}

/// A pro-map restricted to windows: for each target position, a source
/// position and a base map, or `None` if the representative lies outside
/// the source window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowMap<C: Category> {
    pub reps: Vec<Option<(usize, C::Map)>>,
}

impl<C: Category> WindowMap<C> {
    pub fn from_promap(f: &ProMap<C>, src: &ProWindow<C>, tgt: &ProWindow<C>) -> Result<Self> {
        let mut reps = Vec::with_capacity(tgt.len());
        for s in &tgt.labels {
            let (t, m) = f.rep(s)?;
            reps.push(src.position(&t).map(|p| (p, m)));
        }
        Ok(WindowMap { reps })
    }

    /// Identity representatives from a larger window onto a smaller one with
    /// shared labels.
    pub fn identity(big: &ProWindow<C>, small: &ProWindow<C>) -> Self {
        WindowMap {
            reps: small
                .labels
                .iter()
                .zip(&small.objects)
                .map(|(l, o)| big.position(l).map(|p| (p, small.cat.identity(o))))
                .collect(),
        }
    }
}

impl<C: Category> WindowMap<C> {
    /// A pro-map defined on the target window's labels only.
    pub fn to_promap(
        &self,
        src: &ProWindow<C>,
        tgt: &ProWindow<C>,
        x: &ProObject<C>,
        y: &ProObject<C>,
    ) -> ProMap<C> {
        let table: HashMap<Ix, Option<(Ix, C::Map)>> = tgt
            .labels
            .iter()
            .zip(&self.reps)
            .map(|(l, r)| {
                (
                    l.clone(),
                    r.as_ref().map(|(t, m)| (src.labels[*t].clone(), m.clone())),
                )
            })
            .collect();
        ProMap::new(x.clone(), y.clone(), move |s| {
            table.get(s).cloned().flatten().ok_or_else(|| {
                ProError::budget(format!("representative at {s} beyond the window"), 0)
            })
        })
    }
}

/// `g . f` with `f: X -> Y` and `g: Y -> Z`; `g`'s source positions index
/// `f`'s targets.
pub fn compose_window_maps<C: Category>(
    cat: &C,
    g: &WindowMap<C>,
    f: &WindowMap<C>,
) -> Result<WindowMap<C>> {
    let mut reps = Vec::with_capacity(g.reps.len());
    for r in &g.reps {
        reps.push(match r {
            Some((y, m)) => match f.reps.get(*y).and_then(|x| x.as_ref()) {
                Some((x, n)) => Some((*x, cat.compose(m, n)?)),
                None => None,
            },
            None => None,
        });
    }
    Ok(WindowMap { reps })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Equality {
    /// For each target index, the finer index where the representatives
    /// agree.
    Equal {
        depth: usize,
        witnesses: Vec<(Ix, Ix)>,
    },
    /// No index in the window equalizes the representatives at `at`.
    Distinct { at: Ix, depth: usize },
    /// A representative at `at` lies outside the window.
    Undetermined { at: Ix, depth: usize },
}

impl Equality {
    pub fn verdict(&self) -> Verdict {
        match self {
            Equality::Equal { .. } => Verdict::Certified,
            Equality::Distinct { .. } => Verdict::Refuted,
            Equality::Undetermined { .. } => Verdict::Undetermined,
        }
    }

    pub fn is_equal(&self) -> bool {
        matches!(self, Equality::Equal { .. })
    }

    pub fn to_check(&self, name: &str) -> Check {
        match self {
            Equality::Equal { depth, witnesses } => {
                let mut c = Check::certified(name, *depth);
                c.witnesses = witnesses
                    .iter()
                    .take(8)
                    .map(|(s, u)| format!("{s} via {u}"))
                    .collect();
                c
            }
            Equality::Distinct { at, depth } => {
                Check::new(name, Verdict::Refuted, *depth).with_witness(format!("differ at {at}"))
            }
            Equality::Undetermined { at, depth } => Check::new(name, Verdict::Undetermined, *depth)
                .with_witness(format!("representative at {at} outside window")),
        }
    }
}

pub fn maps_equal<C: Category>(
    src: &ProWindow<C>,
    tgt: &ProWindow<C>,
    f: &WindowMap<C>,
    g: &WindowMap<C>,
    depth: usize,
) -> Result<Equality> {
    let mut witnesses = Vec::with_capacity(tgt.len());
    for (s, label) in tgt.labels.iter().enumerate() {
        match (&f.reps[s], &g.reps[s]) {
            (Some((t1, m1)), Some((t2, m2))) => match src.equalize(&src.cat, *t1, m1, *t2, m2)? {
                Some(u) => witnesses.push((label.clone(), src.labels[u].clone())),
                None => {
                    return Ok(Equality::Distinct {
                        at: label.clone(),
                        depth,
                    })
                }
            },
            _ => {
                return Ok(Equality::Undetermined {
                    at: label.clone(),
                    depth,
                })
            }
        }
    }
    Ok(Equality::Equal { depth, witnesses })
}

/// Compares two pro-maps on the target window at `budget.depth`; the source
/// window reaches `budget.slack` levels past the deepest representative.
pub fn promap_equal<C: Category>(
    f: &ProMap<C>,
    g: &ProMap<C>,
    budget: TruncationBudget,
) -> Result<Equality> {
    let tgt = f.target.window(budget.depth)?;
    let mut deepest = 0;
    for s in &tgt.labels {
        for h in [f, g] {
            deepest = deepest.max(h.source.index().level(&h.rep(s)?.0));
        }
    }
    let src = f.source.window(deepest.max(budget.depth) + budget.slack)?;
    let (wf, wg) = (
        WindowMap::from_promap(f, &src, &tgt)?,
        WindowMap::from_promap(g, &src, &tgt)?,
    );
    maps_equal(&src, &tgt, &wf, &wg, budget.depth)
}

/// Both composites of `f: X -> Y` and `g: Y -> X` against the identities.
pub fn certify_iso<C: Category>(
    f: &ProMap<C>,
    g: &ProMap<C>,
    budget: TruncationBudget,
) -> Result<Certificate> {
    let mut cert = Certificate::new();
    let gf = g.after(f);
    cert.push(promap_equal(&gf, &ProMap::identity(&f.source), budget)?.to_check("g.f = 1"));
    let fg = f.after(g);
    cert.push(promap_equal(&fg, &ProMap::identity(&f.target), budget)?.to_check("f.g = 1"));
    Ok(cert)
}

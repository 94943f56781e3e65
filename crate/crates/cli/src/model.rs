//! Turns a parsed spec into pro-objects, pro-maps and diagrams.

use crate::base::Base;
use crate::spec::{CommuteSpec, IndexSpec, ObjectSpec, Rule, ShapeSpec, SpecError, SpecFile};
use procat::base::Category;
use procat::index::{
    Chain, DirectedIndex, FinitePoset, FiniteShape, Ix, Point, Product, ShapeArrow,
    TruncationBudget,
};
use procat::levelrep::StrictDiagram;
use procat::limits::DirectedDiagram;
use procat::pro::{DiagramOfPro, ProMap, ProObject};
use procat::theorems::tower_of_diagrams;
use procat::ProError;
use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;
use toml::Spanned;

#[derive(Clone)]
enum Kind {
    Tower,
    Grid,
    Point,
    Poset(Arc<FinitePoset>),
}

impl Kind {
    fn index(&self) -> Arc<dyn DirectedIndex> {
        match self {
            Kind::Tower => Arc::new(Chain),
            Kind::Grid => Arc::new(Product::new(vec![Arc::new(Chain), Arc::new(Chain)])),
            Kind::Point => Arc::new(Point),
            Kind::Poset(p) => p.clone(),
        }
    }

    fn same(&self, other: &Kind) -> bool {
        match (self, other) {
            (Kind::Tower, Kind::Tower) | (Kind::Grid, Kind::Grid) | (Kind::Point, Kind::Point) => {
                true
            }
            (Kind::Poset(a), Kind::Poset(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    fn at_level(&self, n: usize) -> Option<Ix> {
        match self {
            Kind::Tower => Some(Ix::nat(n)),
            Kind::Grid => Some(Ix(vec![n, n])),
            Kind::Point => Some(Ix::point()),
            Kind::Poset(_) => None,
        }
    }

    fn shift(&self, s: &Ix, delay: usize) -> Option<Ix> {
        match self {
            Kind::Tower | Kind::Grid => Some(Ix(s.0.iter().map(|c| c + delay).collect())),
            Kind::Point => Some(Ix::point()),
            Kind::Poset(_) => (delay == 0).then(|| s.clone()),
        }
    }
}

type IndexFn = Arc<dyn Fn(&Ix) -> procat::Result<Ix> + Send + Sync>;
type EtaFn<C> = Arc<dyn Fn(&Ix) -> procat::Result<<C as Category>::Map> + Send + Sync>;

struct MapData {
    source: String,
    target: String,
    delay: usize,
    rule: Rule,
}

pub struct Model<C: Base> {
    pub objects: BTreeMap<String, ProObject<C>>,
    pub families: BTreeMap<String, String>,
    pub maps: BTreeMap<String, ProMap<C>>,
    kinds: BTreeMap<String, Kind>,
    data: BTreeMap<String, MapData>,
}

fn core(e: String) -> ProError {
    ProError::Invalid(e)
}

fn kind_of(spec: &ObjectSpec) -> Result<Kind, SpecError> {
    let span = spec.name.span();
    match &spec.index {
        IndexSpec::Builtin(s) => match s.as_str() {
            "nat-tower" => Ok(Kind::Tower),
            "nat-grid" => Ok(Kind::Grid),
            "point" => Ok(Kind::Point),
            other => Err(SpecError::at(
                span,
                format!("unknown index `{other}` (nat-tower, nat-grid, point or a poset table)"),
            )),
        },
        IndexSpec::Poset { elements, hasse } => {
            let pos = |n: &String| {
                elements
                    .iter()
                    .position(|e| e == n)
                    .ok_or_else(|| SpecError::at(span.clone(), format!("no poset element `{n}`")))
            };
            let rel = hasse
                .iter()
                .map(|[a, b]| Ok((pos(a)?, pos(b)?)))
                .collect::<Result<Vec<_>, SpecError>>()?;
            let p = FinitePoset::new(elements.clone(), &rel)
                .map_err(|e| SpecError::at(span.clone(), e.to_string()))?;
            Ok(Kind::Poset(Arc::new(p)))
        }
    }
}

fn build_object<C: Base>(spec: &ObjectSpec, kind: &Kind) -> ProObject<C> {
    let index = kind.index();
    let rule = spec
        .structure
        .as_ref()
        .map_or(Rule::Named("identity".into()), |r| r.get_ref().clone());
    let (i1, i2) = (index.clone(), index.clone());
    let level = {
        let spec = spec.clone();
        Arc::new(move |n: usize| C::level(&spec, n).map_err(core))
    };
    let l2 = level.clone();
    ProObject::new(
        C::default(),
        spec.name.get_ref().clone(),
        index,
        move |s| l2(i1.level(s)),
        move |t, s| {
            let (lt, ls) = (i2.level(t), i2.level(s));
            let cat = C::default();
            let mut m = cat.identity(&level(lt)?);
            for k in (ls..lt).rev() {
                let step = C::rule_map(&rule, &level(k + 1)?, &level(k)?, k).map_err(core)?;
                m = cat.compose(&step, &m)?;
            }
            Ok(m)
        },
    )
}

impl<C: Base> Model<C> {
    pub fn load(spec: &SpecFile, depth: usize) -> Result<Self, SpecError> {
        let mut m = Model {
            objects: BTreeMap::new(),
            families: BTreeMap::new(),
            maps: BTreeMap::new(),
            kinds: BTreeMap::new(),
            data: BTreeMap::new(),
        };
        for o in &spec.objects {
            let name = o.name.get_ref().clone();
            if m.objects.contains_key(&name) {
                return Err(SpecError::at(
                    o.name.span(),
                    format!("object `{name}` declared twice"),
                ));
            }
            let kind = kind_of(o)?;
            let x = build_object::<C>(o, &kind);
            let check = x
                .validate(depth)
                .map_err(|e| SpecError::at(o.name.span(), e.to_string()))?;
            if !check.verdict.is_certified() {
                return Err(SpecError::at(
                    o.name.span(),
                    format!(
                        "`{name}` is not a pro-object: {}",
                        check.witnesses.join("; ")
                    ),
                ));
            }
            m.families.insert(name.clone(), C::family(o));
            m.kinds.insert(name.clone(), kind);
            m.objects.insert(name, x);
        }
        for f in &spec.maps {
            let name = f.name.get_ref().clone();
            if m.maps.contains_key(&name) {
                return Err(SpecError::at(
                    f.name.span(),
                    format!("map `{name}` declared twice"),
                ));
            }
            let (src, tgt) = (m.object(&f.source)?, m.object(&f.target)?);
            let (ks, kt) = (
                m.kinds[f.source.get_ref()].clone(),
                m.kinds[f.target.get_ref()].clone(),
            );
            let delay = f.delay;
            if ks.same(&kt) && ks.shift(&tgt.index().bottom(), delay).is_none() {
                return Err(SpecError::at(
                    f.name.span(),
                    "maps between poset-indexed objects cannot have a delay",
                ));
            }
            if !ks.same(&kt) && ks.at_level(0).is_none() {
                return Err(SpecError::at(
                    f.name.span(),
                    "a poset-indexed source needs a target on the same poset",
                ));
            }
            let rule = f.rule.get_ref().clone();
            let (s2, t2, it) = (src.clone(), tgt.clone(), tgt.index().clone());
            let rule2 = rule.clone();
            let map = ProMap::new(src, tgt, move |s| {
                let n = it.level(s);
                let from = if ks.same(&kt) {
                    ks.shift(s, delay)
                } else {
                    ks.at_level(n + delay)
                };
                let from = from.ok_or_else(|| ProError::Invalid("no source level".into()))?;
                let g = C::rule_map(&rule2, &s2.level(&from)?, &t2.level(s)?, n).map_err(core)?;
                Ok((from, g))
            });
            let check = map
                .validate(TruncationBudget::new(depth))
                .map_err(|e| SpecError::at(f.name.span(), e.to_string()))?;
            if !check.verdict.is_certified() {
                return Err(SpecError::at(
                    f.name.span(),
                    format!("`{name}` is not a pro-map: {}", check.witnesses.join("; ")),
                ));
            }
            m.data.insert(
                name.clone(),
                MapData {
                    source: f.source.get_ref().clone(),
                    target: f.target.get_ref().clone(),
                    delay,
                    rule,
                },
            );
            m.maps.insert(name, map);
        }
        Ok(m)
    }

    pub fn object(&self, name: &Spanned<String>) -> Result<ProObject<C>, SpecError> {
        self.objects.get(name.get_ref()).cloned().ok_or_else(|| {
            SpecError::at(name.span(), format!("no object named `{}`", name.get_ref()))
        })
    }

    pub fn object_named(&self, name: &str) -> Result<ProObject<C>, SpecError> {
        self.objects
            .get(name)
            .cloned()
            .ok_or_else(|| SpecError::plain(format!("no object named `{name}`")))
    }

    pub fn map(&self, name: &Spanned<String>) -> Result<ProMap<C>, SpecError> {
        self.maps
            .get(name.get_ref())
            .cloned()
            .ok_or_else(|| SpecError::at(name.span(), format!("no map named `{}`", name.get_ref())))
    }

    /// The pro-maps of a diagram on `shape`, composites filled in along
    /// generator paths, after checking the declared ends.
    fn arrows(
        &self,
        shape: &Shape,
        objects: &[Spanned<String>],
        maps: &[Spanned<String>],
    ) -> Result<Vec<ProMap<C>>, SpecError> {
        if maps.len() != shape.generators.len() {
            return Err(SpecError::plain(format!(
                "the shape has {} generating arrows, {} maps given",
                shape.generators.len(),
                maps.len()
            )));
        }
        let w = shape.shape.shape();
        let mut given: Vec<Option<ProMap<C>>> = vec![None; w.arrows.len()];
        for (g, name) in shape.generators.iter().zip(maps) {
            let f = self.map(name)?;
            let a = &w.arrows[*g];
            let (s, t) = (&objects[a.source], &objects[a.target]);
            let d = &self.data[name.get_ref()];
            if d.source != *s.get_ref() || d.target != *t.get_ref() {
                return Err(SpecError::at(
                    name.span(),
                    format!(
                        "`{}` goes {} -> {}, the arrow {} needs {} -> {}",
                        name.get_ref(),
                        d.source,
                        d.target,
                        a.name,
                        s.get_ref(),
                        t.get_ref()
                    ),
                ));
            }
            given[*g] = Some(f);
        }
        w.arrows
            .iter()
            .map(|a| match &given[a.id] {
                Some(f) => Ok(f.clone()),
                None => {
                    let path = shape.path(a).ok_or_else(|| {
                        SpecError::plain(format!(
                            "arrow {} is not a composite of declared arrows",
                            a.name
                        ))
                    })?;
                    let mut f = ProMap::identity(&self.object(&objects[a.source])?);
                    for g in &path {
                        f = given[*g].clone().expect("generator").after(&f);
                    }
                    Ok(f)
                }
            })
            .collect()
    }

    pub fn diagram(&self, spec: &SpecFile) -> Result<(DiagramOfPro<C>, Shape), SpecError> {
        let shape = Shape::load(
            spec.shape
                .as_ref()
                .ok_or_else(|| SpecError::plain("a `[shape]` section is needed"))?,
        )?;
        let d = spec
            .diagram
            .as_ref()
            .ok_or_else(|| SpecError::plain("a `[diagram]` section is needed"))?;
        let w = shape.shape.shape();
        if d.objects.len() != w.objects.len() {
            return Err(SpecError::plain(format!(
                "the shape has {} objects, the diagram lists {}",
                w.objects.len(),
                d.objects.len()
            )));
        }
        let objects = d
            .objects
            .iter()
            .map(|o| self.object(o))
            .collect::<Result<Vec<_>, _>>()?;
        let arrows = self.arrows(&shape, &d.objects, &d.maps)?;
        let dd = DiagramOfPro::finite(shape.shape.clone(), objects, arrows)
            .map_err(|e| SpecError::plain(e.to_string()))?;
        Ok((dd, shape))
    }

    /// The diagram with each declared map kept as index data and components,
    /// for the choice-free reindexing. Composite arrows compose the data of
    /// their generators, so composition is strict by construction.
    pub fn strict(&self, spec: &SpecFile) -> Result<StrictDiagram<C>, SpecError> {
        let (d, shape) = self.diagram(spec)?;
        let maps = &spec.diagram.as_ref().expect("diagram checked").maps;
        let w = shape.shape.shape();
        let objects = (0..w.objects.len())
            .map(|i| d.object(i))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| SpecError::plain(e.to_string()))?;
        let mut data: BTreeMap<usize, (IndexFn, EtaFn<C>)> = BTreeMap::new();
        for (&g, name) in shape.generators.iter().zip(maps) {
            let m = &self.data[name.get_ref()];
            let (ks, kt) = (self.kinds[&m.source].clone(), self.kinds[&m.target].clone());
            if !ks.same(&kt) {
                return Err(SpecError::at(
                    name.span(),
                    "the strict method needs maps between objects on the same index",
                ));
            }
            let (src, tgt) = (
                self.objects[&m.source].clone(),
                self.objects[&m.target].clone(),
            );
            let (delay, rule) = (m.delay, m.rule.clone());
            let shift: IndexFn = Arc::new(move |s: &Ix| {
                ks.shift(s, delay)
                    .ok_or_else(|| ProError::Invalid("no source level".into()))
            });
            let f = shift.clone();
            let eta: EtaFn<C> = Arc::new(move |s: &Ix| {
                C::rule_map(
                    &rule,
                    &src.level(&f(s)?)?,
                    &tgt.level(s)?,
                    tgt.index().level(s),
                )
                .map_err(core)
            });
            data.insert(g, (shift, eta));
        }
        let mut sd = StrictDiagram::new(shape.shape.clone(), objects);
        for a in &w.arrows {
            let path = match data.get(&a.id) {
                Some(_) => vec![a.id],
                None => shape.path(a).ok_or_else(|| {
                    SpecError::plain(format!(
                        "arrow {} is not a composite of declared arrows",
                        a.name
                    ))
                })?,
            };
            let parts: Vec<(IndexFn, EtaFn<C>)> =
                path.iter().rev().map(|g| data[g].clone()).collect();
            let p2 = parts.clone();
            sd = sd.arrow(
                move |s| parts.iter().try_fold(s.clone(), |u, (f, _)| f(&u)),
                move |s| {
                    let cat = C::default();
                    let (mut u, mut m) = (s.clone(), None);
                    for (f, eta) in &p2 {
                        let e = eta(&u)?;
                        m = Some(match m {
                            None => e,
                            Some(m) => cat.compose(&m, &e)?,
                        });
                        u = f(&u)?;
                    }
                    m.ok_or_else(|| ProError::Invalid("empty path".into()))
                },
            );
        }
        Ok(sd)
    }

    pub fn tower(&self, spec: &SpecFile) -> Result<DirectedDiagram<C>, SpecError> {
        let t = spec
            .tower
            .as_ref()
            .ok_or_else(|| SpecError::plain("a `[tower]` section is needed"))?;
        if t.objects.is_empty() {
            return Err(SpecError::plain("the tower needs at least one object"));
        }
        let objects = t
            .objects
            .iter()
            .map(|o| self.object(o))
            .collect::<Result<Vec<_>, _>>()?;
        if t.steps.len() + 1 < objects.len() {
            return Err(SpecError::plain(format!(
                "{} objects need at least {} steps",
                objects.len(),
                objects.len() - 1
            )));
        }
        let mut steps = Vec::new();
        for (a, name) in t.steps.iter().enumerate() {
            let d = self.data.get(name.get_ref()).ok_or_else(|| {
                SpecError::at(name.span(), format!("no map named `{}`", name.get_ref()))
            })?;
            let (s, tg) = (
                &t.objects[(a + 1).min(t.objects.len() - 1)],
                &t.objects[a.min(t.objects.len() - 1)],
            );
            if d.source != *s.get_ref() || d.target != *tg.get_ref() {
                return Err(SpecError::at(
                    name.span(),
                    format!("step {a} must go {} -> {}", s.get_ref(), tg.get_ref()),
                ));
            }
            steps.push(self.maps[name.get_ref()].clone());
        }
        let last = objects.last().expect("nonempty").clone();
        let objs = objects.clone();
        Ok(DirectedDiagram::tower(
            move |a| Ok(objs[a.min(objs.len() - 1)].clone()),
            move |a| {
                Ok(steps
                    .get(a)
                    .cloned()
                    .unwrap_or_else(|| ProMap::identity(&last)))
            },
        ))
    }

    pub fn commute(&self, spec: &SpecFile) -> Result<(DiagramOfPro<C>, FiniteShape), SpecError> {
        let shape = Shape::load(
            spec.shape
                .as_ref()
                .ok_or_else(|| SpecError::plain("a `[shape]` section is needed"))?,
        )?;
        let c: &CommuteSpec = spec
            .commute
            .as_ref()
            .ok_or_else(|| SpecError::plain("a `[commute]` section is needed"))?;
        let nb = shape.shape.shape().objects.len();
        if c.rows.is_empty() || c.rows.len() != c.row_maps.len() {
            return Err(SpecError::plain(
                "`rows` and `row_maps` need the same nonzero length",
            ));
        }
        if c.steps.len() + 1 < c.rows.len() {
            return Err(SpecError::plain(
                "each row but the last needs a step to the row before",
            ));
        }
        let mut rows = Vec::new();
        for (r, maps) in c.rows.iter().zip(&c.row_maps) {
            if r.len() != nb {
                return Err(SpecError::plain(format!("each row lists {nb} objects")));
            }
            let objs = r
                .iter()
                .map(|o| self.object(o))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push((objs, self.arrows(&shape, r, maps)?));
        }
        let mut steps = Vec::new();
        for (a, st) in c.steps.iter().enumerate() {
            if st.len() != nb {
                return Err(SpecError::plain(format!("each step lists {nb} maps")));
            }
            let (up, down) = (
                &c.rows[(a + 1).min(c.rows.len() - 1)],
                &c.rows[a.min(c.rows.len() - 1)],
            );
            let mut v = Vec::new();
            for (b, name) in st.iter().enumerate() {
                let d = self.data.get(name.get_ref()).ok_or_else(|| {
                    SpecError::at(name.span(), format!("no map named `{}`", name.get_ref()))
                })?;
                if d.source != *up[b].get_ref() || d.target != *down[b].get_ref() {
                    return Err(SpecError::at(
                        name.span(),
                        format!(
                            "step {a} at {b} must go {} -> {}",
                            up[b].get_ref(),
                            down[b].get_ref()
                        ),
                    ));
                }
                v.push(self.maps[name.get_ref()].clone());
            }
            steps.push(v);
        }
        let rows = Arc::new(rows);
        let (r1, r2) = (rows.clone(), rows);
        let last = r1.len() - 1;
        let d = tower_of_diagrams(
            shape.shape.clone(),
            move |a, b| Ok(r1[a.min(last)].0[b].clone()),
            move |a, a2, phi: Option<&ShapeArrow>, b| {
                let row = |k: usize| &r2[k.min(last)];
                let mut f = ProMap::identity(&row(a).0[b]);
                for k in (a2..a).rev() {
                    if let Some(s) = steps.get(k) {
                        f = s[b].after(&f);
                    }
                }
                Ok(match phi {
                    Some(p) => row(a2).1[p.id].after(&f),
                    None => f,
                })
            },
        );
        Ok((d, shape.shape))
    }
}

/// A finite shape with its generating arrows in declaration order.
pub struct Shape {
    pub shape: FiniteShape,
    pub generators: Vec<usize>,
}

impl Shape {
    pub fn load(s: &ShapeSpec) -> Result<Self, SpecError> {
        let span = s.kind.span();
        let err = |e: ProError| SpecError::at(span.clone(), e.to_string());
        let pos = |objects: &[String], n: &Spanned<String>| {
            objects
                .iter()
                .position(|o| o == n.get_ref())
                .ok_or_else(|| {
                    SpecError::at(n.span(), format!("no shape object `{}`", n.get_ref()))
                })
        };
        let thin = |shape: FiniteShape, pairs: &[(usize, usize)]| -> Result<Shape, SpecError> {
            let w = shape.shape();
            let generators = pairs
                .iter()
                .map(|&(a, b)| w.arrows_between(a, b).next().expect("generator").id)
                .collect();
            Ok(Shape { shape, generators })
        };
        match s.kind.get_ref().as_str() {
            "poset" => {
                let names: Vec<&str> = s.objects.iter().map(String::as_str).collect();
                let pairs = s
                    .hasse
                    .iter()
                    .map(|[a, b]| Ok((pos(&s.objects, a)?, pos(&s.objects, b)?)))
                    .collect::<Result<Vec<_>, SpecError>>()?;
                thin(FiniteShape::thin(&names, &pairs).map_err(err)?, &pairs)
            }
            "category" => {
                let names: Vec<&str> = s.objects.iter().map(String::as_str).collect();
                let arrows = s
                    .arrows
                    .iter()
                    .map(|[n, a, b]| {
                        Ok((
                            n.get_ref().as_str(),
                            pos(&s.objects, a)?,
                            pos(&s.objects, b)?,
                        ))
                    })
                    .collect::<Result<Vec<_>, SpecError>>()?;
                let find = |n: &Spanned<String>| {
                    arrows
                        .iter()
                        .position(|a| a.0 == n.get_ref())
                        .ok_or_else(|| {
                            SpecError::at(n.span(), format!("no arrow `{}`", n.get_ref()))
                        })
                };
                let comp = s
                    .compose
                    .iter()
                    .map(|[g, f, h]| Ok((find(g)?, find(f)?, find(h)?)))
                    .collect::<Result<Vec<_>, SpecError>>()?;
                let shape = FiniteShape::new(&names, &arrows, &comp).map_err(err)?;
                Ok(Shape {
                    generators: (0..arrows.len()).collect(),
                    shape,
                })
            }
            "coproduct" => Ok(Shape {
                shape: FiniteShape::discrete(s.size.unwrap_or(2)),
                generators: Vec::new(),
            }),
            "coequalizer" => Ok(Shape {
                shape: FiniteShape::parallel_pair(),
                generators: vec![0, 1],
            }),
            "pushout" => thin(FiniteShape::span(), &[(0, 1), (0, 2)]),
            "pullback" => thin(FiniteShape::cospan(), &[(0, 2), (1, 2)]),
            "line" => {
                let n = s.size.unwrap_or(2);
                let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
                thin(FiniteShape::line(n), &pairs)
            }
            other => Err(SpecError::at(span, format!("unknown shape kind `{other}`"))),
        }
    }

    /// Generators whose composite is `a`, first applied first.
    fn path(&self, a: &ShapeArrow) -> Option<Vec<usize>> {
        let w = self.shape.shape();
        let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut queue = VecDeque::from([a.source]);
        while let Some(x) = queue.pop_front() {
            if x == a.target {
                let mut path = Vec::new();
                let mut y = x;
                while y != a.source {
                    let (p, g) = prev[&y];
                    path.push(g);
                    y = p;
                }
                path.reverse();
                return Some(path);
            }
            for &g in &self.generators {
                let arr = &w.arrows[g];
                if arr.source == x && !prev.contains_key(&arr.target) && arr.target != a.source {
                    prev.insert(arr.target, (x, g));
                    queue.push_back(arr.target);
                }
            }
        }
        None
    }
}

use super::{cantor, DirectedIndex, Ix};
use crate::{ProError, Result};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeObject {
    pub id: usize,
    pub name: String,
    /// Strictly decreases along every non-identity arrow.
    pub grade: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShapeArrow {
    pub id: usize,
    pub source: usize,
    pub target: usize,
    pub name: String,
}

/// A finite full piece of a cofinite category: every arrow out of a window
/// object lands in the window. Identities are implicit.
#[derive(Debug, Clone, Default)]
pub struct ShapeWindow {
    pub objects: Vec<ShapeObject>,
    pub arrows: Vec<ShapeArrow>,
    compose: HashMap<(usize, usize), usize>,
    obj_pos: HashMap<usize, usize>,
    arr_pos: HashMap<usize, usize>,
}

impl ShapeWindow {
    /// `compose` maps `(g, f)` with `f: a -> b`, `g: b -> c` to the id of
    /// `g . f`. Pairs whose composite is an identity cannot occur since the
    /// shape has no loops.
    pub fn new(
        objects: Vec<ShapeObject>,
        arrows: Vec<ShapeArrow>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Self {
        let obj_pos = objects.iter().enumerate().map(|(i, o)| (o.id, i)).collect();
        let arr_pos = arrows.iter().enumerate().map(|(i, a)| (a.id, i)).collect();
        ShapeWindow {
            objects,
            arrows,
            compose,
            obj_pos,
            arr_pos,
        }
    }

    pub fn object(&self, id: usize) -> Option<&ShapeObject> {
        self.obj_pos.get(&id).map(|&i| &self.objects[i])
    }

    pub fn arrow(&self, id: usize) -> Option<&ShapeArrow> {
        self.arr_pos.get(&id).map(|&i| &self.arrows[i])
    }

    pub fn contains(&self, id: usize) -> bool {
        self.obj_pos.contains_key(&id)
    }

    pub fn arrows_from(&self, a: usize) -> impl Iterator<Item = &ShapeArrow> {
        self.arrows.iter().filter(move |x| x.source == a)
    }

    pub fn arrows_into(&self, b: usize) -> impl Iterator<Item = &ShapeArrow> {
        self.arrows.iter().filter(move |x| x.target == b)
    }

    pub fn arrows_between(&self, a: usize, b: usize) -> impl Iterator<Item = &ShapeArrow> {
        self.arrows
            .iter()
            .filter(move |x| x.source == a && x.target == b)
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    /// Object ids sorted by ascending grade, ties by id.
    pub fn by_grade(&self) -> Vec<usize> {
        let mut ids: Vec<(usize, usize)> = self.objects.iter().map(|o| (o.grade, o.id)).collect();
        ids.sort_unstable();
        ids.into_iter().map(|(_, id)| id).collect()
    }

    pub fn is_thin(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.arrows
            .iter()
            .all(|a| seen.insert((a.source, a.target)))
    }

    /// Checks endpoints, grading, closure under outgoing arrows and
    /// composition, and associativity.
    pub fn validate(&self) -> Result<()> {
        for a in &self.arrows {
            let (s, t) = match (self.object(a.source), self.object(a.target)) {
                (Some(s), Some(t)) => (s, t),
                _ => {
                    return Err(ProError::Invalid(format!(
                        "arrow {} leaves the window",
                        a.name
                    )))
                }
            };
            if t.grade >= s.grade {
                return Err(ProError::Invalid(format!(
                    "arrow {} does not lower the grade",
                    a.name
                )));
            }
        }
        for f in &self.arrows {
            for g in self.arrows_from(f.target) {
                let h = self
                    .compose(g.id, f.id)
                    .and_then(|h| self.arrow(h))
                    .ok_or_else(|| {
                        ProError::Invalid(format!("missing composite {} . {}", g.name, f.name))
                    })?;
                if h.source != f.source || h.target != g.target {
                    return Err(ProError::Invalid(format!(
                        "composite {} . {} has wrong ends",
                        g.name, f.name
                    )));
                }
                for k in self.arrows_from(g.target) {
                    let l = self.compose(k.id, h.id);
                    let r = self
                        .compose(k.id, g.id)
                        .and_then(|kg| self.compose(kg, f.id));
                    if l != r {
                        return Err(ProError::Invalid("composition is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A category whose objects each have finitely many arrows out, with no
/// loops, presented through windows.
pub trait CofiniteCategory: Send + Sync {
    fn describe(&self) -> String;
    fn window(&self, depth: usize) -> ShapeWindow;
    fn is_finite(&self) -> bool;

    /// The smallest window (up to depth `cap`) holding object `id`.
    fn window_containing(&self, id: usize, cap: usize) -> Option<ShapeWindow> {
        (0..=cap).map(|d| self.window(d)).find(|w| w.contains(id))
    }
}

/// An explicitly listed finite shape.
#[derive(Debug, Clone)]
pub struct FiniteShape {
    window: ShapeWindow,
}

impl FiniteShape {
    /// Arrows are `(name, source, target)`; `compose` lists `(g, f, g.f)` by
    /// arrow index. Grades are computed as longest paths to a sink.
    pub fn new(
        names: &[&str],
        arrows: &[(&str, usize, usize)],
        compose: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let n = names.len();
        let mut grade = vec![0usize; n];
        for _ in 0..=n {
            for &(_, s, t) in arrows {
                if s >= n || t >= n {
                    return Err(ProError::Invalid("arrow endpoint out of range".into()));
                }
                grade[s] = grade[s].max(grade[t] + 1);
            }
        }
        if grade.iter().any(|&g| g > n) || arrows.iter().any(|&(_, s, t)| grade[s] <= grade[t]) {
            return Err(ProError::Invalid("shape has a cycle".into()));
        }
        let objects = names
            .iter()
            .enumerate()
            .map(|(i, nm)| ShapeObject {
                id: i,
                name: nm.to_string(),
                grade: grade[i],
            })
            .collect();
        let arrows_v = arrows
            .iter()
            .enumerate()
            .map(|(i, &(nm, s, t))| ShapeArrow {
                id: i,
                source: s,
                target: t,
                name: nm.to_string(),
            })
            .collect();
        let comp = compose.iter().map(|&(g, f, h)| ((g, f), h)).collect();
        let window = ShapeWindow::new(objects, arrows_v, comp);
        window.validate()?;
        Ok(FiniteShape { window })
    }

    /// The thin shape generated by `(source, target)` pairs: all composites
    /// are added as arrows.
    pub fn thin(names: &[&str], generators: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut reach = vec![vec![false; n]; n];
        for &(s, t) in generators {
            reach[s][t] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut arrows = Vec::new();
        let mut label = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if reach[i][j] {
                    label.push(format!("{}->{}", names[i], names[j]));
                    arrows.push((i, j));
                }
            }
        }
        let idx: BTreeMap<(usize, usize), usize> =
            arrows.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut comp = Vec::new();
        for (fi, &(a, b)) in arrows.iter().enumerate() {
            for (gi, &(b2, c)) in arrows.iter().enumerate() {
                if b == b2 {
                    comp.push((gi, fi, idx[&(a, c)]));
                }
            }
        }
        let named: Vec<(&str, usize, usize)> = arrows
            .iter()
            .zip(&label)
            .map(|(&(s, t), l)| (l.as_str(), s, t))
            .collect();
        FiniteShape::new(names, &named, &comp)
    }

    pub fn discrete(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        FiniteShape::new(&refs, &[], &[]).expect("discrete shape")
    }

    /// `a => b` with two parallel arrows.
    pub fn parallel_pair() -> Self {
        FiniteShape::new(&["a", "b"], &[("f", 0, 1), ("g", 0, 1)], &[]).expect("parallel pair")
    }

    /// `a -> c <- b`.
    pub fn cospan() -> Self {
        FiniteShape::thin(&["a", "b", "c"], &[(0, 2), (1, 2)]).expect("cospan")
    }

    /// `b <- a -> c`.
    pub fn span() -> Self {
        FiniteShape::thin(&["a", "b", "c"], &[(0, 1), (0, 2)]).expect("span")
    }

    /// `x -> y -> z`.
    pub fn line(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let gens: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteShape::thin(&refs, &gens).expect("line")
    }

    pub fn shape(&self) -> &ShapeWindow {
        &self.window
    }
}

impl CofiniteCategory for FiniteShape {
    fn describe(&self) -> String {
        format!(
            "finite shape ({} objects, {} arrows)",
            self.window.objects.len(),
            self.window.arrows.len()
        )
    }
    fn window(&self, _: usize) -> ShapeWindow {
        self.window.clone()
    }
    fn is_finite(&self) -> bool {
        true
    }
}

/// The naturals as a category with one arrow `n -> m` for each `m < n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ChainShape;

impl ChainShape {
    pub fn arrow_id(n: usize, m: usize) -> usize {
        n * (n - 1) / 2 + m
    }
}

impl CofiniteCategory for ChainShape {
    fn describe(&self) -> String {
        "N (as a category)".into()
    }
    fn window(&self, depth: usize) -> ShapeWindow {
        let objects = (0..=depth)
            .map(|n| ShapeObject {
                id: n,
                name: n.to_string(),
                grade: n,
            })
            .collect();
        let mut arrows = Vec::new();
        let mut comp = HashMap::new();
        for n in 1..=depth {
            for m in 0..n {
                arrows.push(ShapeArrow {
                    id: Self::arrow_id(n, m),
                    source: n,
                    target: m,
                    name: format!("{n}->{m}"),
                });
                for k in 0..m {
                    comp.insert(
                        (Self::arrow_id(m, k), Self::arrow_id(n, m)),
                        Self::arrow_id(n, k),
                    );
                }
            }
        }
        ShapeWindow::new(objects, arrows, comp)
    }
    fn is_finite(&self) -> bool {
        false
    }
}

/// A directed set as a category: an arrow `x -> y` whenever `y < x`.
/// Object ids are enumeration positions.
#[derive(Clone)]
pub struct PosetShape {
    index: Arc<dyn DirectedIndex>,
}

impl PosetShape {
    pub fn new(index: Arc<dyn DirectedIndex>) -> Self {
        PosetShape { index }
    }

    /// Labels of the objects in `window(depth)`, indexed by object id.
    pub fn labels(&self, depth: usize) -> Vec<Ix> {
        self.index.window(depth)
    }
}

impl CofiniteCategory for PosetShape {
    fn describe(&self) -> String {
        format!("{} (as a category)", self.index.describe())
    }
    fn window(&self, depth: usize) -> ShapeWindow {
        let labels = self.index.window(depth);
        let objects = labels
            .iter()
            .enumerate()
            .map(|(i, x)| ShapeObject {
                id: i,
                name: x.to_string(),
                grade: i,
            })
            .collect();
        let mut arrows = Vec::new();
        let mut comp = HashMap::new();
        for (i, x) in labels.iter().enumerate() {
            for (j, y) in labels.iter().enumerate().take(i) {
                if self.index.le(y, x) && x != y {
                    arrows.push(ShapeArrow {
                        id: cantor(i, j),
                        source: i,
                        target: j,
                        name: format!("{x}->{y}"),
                    });
                    for (k, z) in labels.iter().enumerate().take(j) {
                        if self.index.le(z, y) && z != y {
                            comp.insert((cantor(j, k), cantor(i, j)), cantor(i, k));
                        }
                    }
                }
            }
        }
        ShapeWindow::new(objects, arrows, comp)
    }
    fn is_finite(&self) -> bool {
        self.index.finite_size().is_some()
    }
}

/// Product of two cofinite categories. Object `(a, b)` gets id
/// `cantor(a, b)`; an arrow pairs two components, each either a real arrow
/// (encoded `2 id + 1`) or an identity (encoded `2 obj`).
#[derive(Clone)]
pub struct ProductShape {
    left: Arc<dyn CofiniteCategory>,
    right: Arc<dyn CofiniteCategory>,
}

impl ProductShape {
    pub fn new(left: Arc<dyn CofiniteCategory>, right: Arc<dyn CofiniteCategory>) -> Self {
        ProductShape { left, right }
    }

    pub fn object_id(a: usize, b: usize) -> usize {
        cantor(a, b)
    }

    /// Inverse of the object pairing.
    pub fn unpair(z: usize) -> (usize, usize) {
        let w = (((8 * z + 1) as f64).sqrt() as usize - 1) / 2;
        let mut w = w;
        while (w + 1) * (w + 2) / 2 <= z {
            w += 1;
        }
        while w * (w + 1) / 2 > z {
            w -= 1;
        }
        let b = z - w * (w + 1) / 2;
        (w - b, b)
    }

    /// Splits a product arrow into its components; `Err(obj)` is the
    /// identity on `obj`.
    pub fn components(
        id: usize,
    ) -> (
        std::result::Result<usize, usize>,
        std::result::Result<usize, usize>,
    ) {
        let (ea, eb) = Self::unpair(id);
        let dec = |e: usize| if e % 2 == 1 { Ok(e / 2) } else { Err(e / 2) };
        (dec(ea), dec(eb))
    }
}

impl CofiniteCategory for ProductShape {
    fn describe(&self) -> String {
        format!("{} x {}", self.left.describe(), self.right.describe())
    }
    fn window(&self, depth: usize) -> ShapeWindow {
        let (wa, wb) = (self.left.window(depth), self.right.window(depth));
        let mut objects = Vec::new();
        for a in &wa.objects {
            for b in &wb.objects {
                objects.push(ShapeObject {
                    id: cantor(a.id, b.id),
                    name: format!("({},{})", a.name, b.name),
                    grade: a.grade + b.grade,
                });
            }
        }
        // Each component: (code, source, target, name).
        let comps = |w: &ShapeWindow| {
            let mut v: Vec<(usize, usize, usize, String)> = w
                .objects
                .iter()
                .map(|o| (2 * o.id, o.id, o.id, format!("1_{}", o.name)))
                .collect();
            v.extend(
                w.arrows
                    .iter()
                    .map(|a| (2 * a.id + 1, a.source, a.target, a.name.clone())),
            );
            v
        };
        let (ca, cb) = (comps(&wa), comps(&wb));
        let mut arrows = Vec::new();
        for x in &ca {
            for y in &cb {
                if x.0 % 2 == 0 && y.0 % 2 == 0 {
                    continue;
                }
                arrows.push(ShapeArrow {
                    id: cantor(x.0, y.0),
                    source: cantor(x.1, y.1),
                    target: cantor(x.2, y.2),
                    name: format!("({},{})", x.3, y.3),
                });
            }
        }
        let comp_one = |w: &ShapeWindow, g: usize, f: usize| -> usize {
            match (g % 2, f % 2) {
                (0, _) => f,
                (_, 0) => g,
                _ => 2 * w.compose(g / 2, f / 2).expect("closed window") + 1,
            }
        };
        let mut comp = HashMap::new();
        for f in &arrows {
            for g in arrows.iter().filter(|g| g.source == f.target) {
                let (fa, fb) = Self::unpair(f.id);
                let (ga, gb) = Self::unpair(g.id);
                let h = cantor(comp_one(&wa, ga, fa), comp_one(&wb, gb, fb));
                comp.insert((g.id, f.id), h);
            }
        }
        ShapeWindow::new(objects, arrows, comp)
    }
    fn is_finite(&self) -> bool {
        self.left.is_finite() && self.right.is_finite()
    }
}

/// The two-row shape for a sequential colimit: bottom objects `B_n`
/// (id `2n`), top objects `T_n` (id `2n+1`), arrows `T_n -> B_n` (id `2n`)
/// and `T_n -> B_{n+1}` (id `2n+1`). Its colimit is the colimit of the
/// sequence `B_0 -> B_1 -> ...`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SequenceShape;

impl SequenceShape {
    pub fn bottom(n: usize) -> usize {
        2 * n
    }
    pub fn top(n: usize) -> usize {
        2 * n + 1
    }
}

impl CofiniteCategory for SequenceShape {
    fn describe(&self) -> String {
        "sequence (two-row)".into()
    }
    fn window(&self, depth: usize) -> ShapeWindow {
        let mut objects = Vec::new();
        let mut arrows = Vec::new();
        for n in 0..=depth + 1 {
            objects.push(ShapeObject {
                id: 2 * n,
                name: format!("B{n}"),
                grade: 0,
            });
            if n <= depth {
                objects.push(ShapeObject {
                    id: 2 * n + 1,
                    name: format!("T{n}"),
                    grade: 1,
                });
                arrows.push(ShapeArrow {
                    id: 2 * n,
                    source: 2 * n + 1,
                    target: 2 * n,
                    name: format!("T{n}->B{n}"),
                });
                arrows.push(ShapeArrow {
                    id: 2 * n + 1,
                    source: 2 * n + 1,
                    target: 2 * n + 2,
                    name: format!("T{n}->B{}", n + 1),
                });
            }
        }
        ShapeWindow::new(objects, arrows, HashMap::new())
    }
    fn is_finite(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::Chain;

    #[test]
    fn builtin_shapes_validate() {
        for s in [
            FiniteShape::parallel_pair(),
            FiniteShape::cospan(),
            FiniteShape::span(),
            FiniteShape::line(3),
            FiniteShape::discrete(2),
        ] {
            s.shape().validate().unwrap();
        }
        ChainShape.window(4).validate().unwrap();
        SequenceShape.window(3).validate().unwrap();
        PosetShape::new(Arc::new(Chain))
            .window(3)
            .validate()
            .unwrap();
    }

    #[test]
    fn product_shape_is_closed() {
        let p = ProductShape::new(
            Arc::new(FiniteShape::cospan()),
            Arc::new(FiniteShape::parallel_pair()),
        );
        let w = p.window(0);
        assert_eq!(w.objects.len(), 6);
        // 3 objects x 2 arrows + 2 arrows x 2 objects + 2 x 2.
        assert_eq!(w.arrows.len(), 3 * 2 + 2 * 2 + 2 * 2);
        w.validate().unwrap();
        assert!(!w.is_thin());
    }

    #[test]
    fn unpair_inverts_cantor() {
        for a in 0..30 {
            for b in 0..30 {
                assert_eq!(ProductShape::unpair(cantor(a, b)), (a, b));
            }
        }
    }

    #[test]
    fn cycle_rejected() {
        assert!(FiniteShape::new(&["a", "b"], &[("f", 0, 1), ("g", 1, 0)], &[]).is_err());
    }
}

use super::{search_index, Ix, Search};
use std::sync::Arc;

/// A directed set presented lazily. Larger elements are more refined; a
/// pro-object over it has structure maps `X_t -> X_s` whenever `s <= t`.
///
/// `window(d)` lists the elements of level at most `d` in enumeration order.
/// Windows are downward closed for cofinite indices and prefix-stable: the
/// window at depth `d` is a prefix of the window at depth `d + 1`.
pub trait DirectedIndex: Send + Sync {
    fn describe(&self) -> String;
    /// Number of coordinates in each element.
    fn arity(&self) -> usize;
    fn level(&self, x: &Ix) -> usize;
    fn window(&self, depth: usize) -> Vec<Ix>;
    fn contains(&self, x: &Ix) -> bool;
    fn le(&self, a: &Ix, b: &Ix) -> bool;
    /// Some element above both, canonical for the implementation.
    fn upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix>;
    fn least_upper_bound(&self, _a: &Ix, _b: &Ix) -> Option<Ix> {
        None
    }
    fn finite_size(&self) -> Option<usize> {
        None
    }
    fn is_cofinite(&self) -> bool {
        true
    }
    fn bottom(&self) -> Ix {
        self.window(0)[0].clone()
    }
    fn lt(&self, a: &Ix, b: &Ix) -> bool {
        a != b && self.le(a, b)
    }
}

/// The one-element index: constant pro-objects.
#[derive(Debug, Clone, Copy, Default)]
pub struct Point;

impl DirectedIndex for Point {
    fn describe(&self) -> String {
        "point".into()
    }
    fn arity(&self) -> usize {
        0
    }
    fn level(&self, _: &Ix) -> usize {
        0
    }
    fn window(&self, _: usize) -> Vec<Ix> {
        vec![Ix::point()]
    }
    fn contains(&self, x: &Ix) -> bool {
        x.0.is_empty()
    }
    fn le(&self, _: &Ix, _: &Ix) -> bool {
        true
    }
    fn upper_bound(&self, _: &Ix, _: &Ix) -> Option<Ix> {
        Some(Ix::point())
    }
    fn least_upper_bound(&self, _: &Ix, _: &Ix) -> Option<Ix> {
        Some(Ix::point())
    }
    fn finite_size(&self) -> Option<usize> {
        Some(1)
    }
}

/// The natural numbers; towers are indexed here.
#[derive(Debug, Clone, Copy, Default)]
pub struct Chain;

impl DirectedIndex for Chain {
    fn describe(&self) -> String {
        "N".into()
    }
    fn arity(&self) -> usize {
        1
    }
    fn level(&self, x: &Ix) -> usize {
        x.0[0]
    }
    fn window(&self, depth: usize) -> Vec<Ix> {
        (0..=depth).map(Ix::nat).collect()
    }
    fn contains(&self, x: &Ix) -> bool {
        x.0.len() == 1
    }
    fn le(&self, a: &Ix, b: &Ix) -> bool {
        a.0[0] <= b.0[0]
    }
    fn upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        Some(Ix::nat(a.0[0].max(b.0[0])))
    }
    fn least_upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        self.upper_bound(a, b)
    }
}

/// A subset of the naturals with the induced order, e.g. the evens.
#[derive(Clone)]
pub struct SubChain {
    name: String,
    member: Arc<dyn Fn(usize) -> bool + Send + Sync>,
    finite: Option<Vec<usize>>,
}

impl SubChain {
    pub fn new(name: &str, member: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        SubChain {
            name: name.into(),
            member: Arc::new(member),
            finite: None,
        }
    }

    pub fn evens() -> Self {
        SubChain::new("evens", |n| n % 2 == 0)
    }

    pub fn finite(mut elems: Vec<usize>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        let set = elems.clone();
        SubChain {
            name: format!("{elems:?}"),
            member: Arc::new(move |n| set.binary_search(&n).is_ok()),
            finite: Some(elems),
        }
    }
}

impl DirectedIndex for SubChain {
    fn describe(&self) -> String {
        self.name.clone()
    }
    fn arity(&self) -> usize {
        1
    }
    fn level(&self, x: &Ix) -> usize {
        x.0[0]
    }
    fn window(&self, depth: usize) -> Vec<Ix> {
        match &self.finite {
            Some(e) => e
                .iter()
                .filter(|&&n| n <= depth)
                .map(|&n| Ix::nat(n))
                .collect(),
            None => (0..=depth)
                .filter(|&n| (self.member)(n))
                .map(Ix::nat)
                .collect(),
        }
    }
    fn contains(&self, x: &Ix) -> bool {
        x.0.len() == 1 && (self.member)(x.0[0])
    }
    fn le(&self, a: &Ix, b: &Ix) -> bool {
        a.0[0] <= b.0[0]
    }
    fn upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        Some(Ix::nat(a.0[0].max(b.0[0])))
    }
    fn least_upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        self.upper_bound(a, b)
    }
    fn finite_size(&self) -> Option<usize> {
        self.finite.as_ref().map(Vec::len)
    }
    fn bottom(&self) -> Ix {
        let mut d = 0;
        loop {
            if let Some(x) = self.window(d).into_iter().next() {
                return x;
            }
            d = d * 2 + 1;
        }
    }
}

/// Nonempty finite subsets of the naturals under inclusion. Level is the
/// largest element; enumeration is by bitmask.
#[derive(Debug, Clone, Copy, Default)]
pub struct FiniteSubsets;

impl FiniteSubsets {
    const MAX_DEPTH: usize = 20;

    fn mask(x: &Ix) -> u64 {
        x.0.iter().fold(0u64, |m, &i| m | (1u64 << i))
    }
}

impl DirectedIndex for FiniteSubsets {
    fn describe(&self) -> String {
        "finite subsets of N".into()
    }
    fn arity(&self) -> usize {
        usize::MAX
    }
    fn level(&self, x: &Ix) -> usize {
        *x.0.last().unwrap_or(&0)
    }
    fn window(&self, depth: usize) -> Vec<Ix> {
        let d = depth.min(Self::MAX_DEPTH);
        (1u64..(1u64 << (d + 1)))
            .map(|m| Ix((0..=d).filter(|&i| m >> i & 1 == 1).collect()))
            .collect()
    }
    fn contains(&self, x: &Ix) -> bool {
        !x.0.is_empty() && x.0.windows(2).all(|w| w[0] < w[1]) && x.0.iter().all(|&i| i < 64)
    }
    fn le(&self, a: &Ix, b: &Ix) -> bool {
        let (ma, mb) = (Self::mask(a), Self::mask(b));
        ma & mb == ma
    }
    fn upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        self.least_upper_bound(a, b)
    }
    fn least_upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        let m = Self::mask(a) | Self::mask(b);
        Some(Ix((0..64).filter(|&i| m >> i & 1 == 1).collect()))
    }
}

/// A finite directed poset given by generating relations `lo <= hi`.
#[derive(Debug, Clone)]
pub struct FinitePoset {
    names: Vec<String>,
    le: Vec<Vec<bool>>,
    height: Vec<usize>,
    order: Vec<usize>,
}

impl FinitePoset {
    /// Builds the reflexive-transitive closure of `relations` and checks
    /// antisymmetry and directedness.
    pub fn new(names: Vec<String>, relations: &[(usize, usize)]) -> crate::Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(crate::ProError::Precondition("empty poset".into()));
        }
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(lo, hi) in relations {
            if lo >= n || hi >= n {
                return Err(crate::ProError::Invalid(format!(
                    "relation ({lo},{hi}) out of range"
                )));
            }
            le[lo][hi] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                if le[i][j] && le[j][i] {
                    return Err(crate::ProError::Invalid(format!(
                        "{} and {} form a cycle",
                        names[i], names[j]
                    )));
                }
                if !(0..n).any(|k| le[i][k] && le[j][k]) {
                    return Err(crate::ProError::Precondition(format!(
                        "{} and {} have no upper bound",
                        names[i], names[j]
                    )));
                }
            }
        }
        let mut height = vec![0usize; n];
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                for j in 0..n {
                    if i != j && le[j][i] && height[i] < height[j] + 1 {
                        height[i] = height[j] + 1;
                        changed = true;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (height[i], i));
        Ok(FinitePoset {
            names,
            le,
            height,
            order,
        })
    }

    pub fn name(&self, x: &Ix) -> &str {
        &self.names[x.0[0]]
    }
}

impl DirectedIndex for FinitePoset {
    fn describe(&self) -> String {
        format!("poset of {} elements", self.names.len())
    }
    fn arity(&self) -> usize {
        1
    }
    fn level(&self, x: &Ix) -> usize {
        self.height[x.0[0]]
    }
    fn window(&self, depth: usize) -> Vec<Ix> {
        self.order
            .iter()
            .filter(|&&i| self.height[i] <= depth)
            .map(|&i| Ix::nat(i))
            .collect()
    }
    fn contains(&self, x: &Ix) -> bool {
        x.0.len() == 1 && x.0[0] < self.names.len()
    }
    fn le(&self, a: &Ix, b: &Ix) -> bool {
        self.le[a.0[0]][b.0[0]]
    }
    fn upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        self.order
            .iter()
            .find(|&&k| self.le[a.0[0]][k] && self.le[b.0[0]][k])
            .map(|&k| Ix::nat(k))
    }
    fn least_upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        let ubs: Vec<usize> = self
            .order
            .iter()
            .copied()
            .filter(|&k| self.le[a.0[0]][k] && self.le[b.0[0]][k])
            .collect();
        ubs.iter()
            .find(|&&k| ubs.iter().all(|&m| self.le[k][m]))
            .map(|&k| Ix::nat(k))
    }
    fn finite_size(&self) -> Option<usize> {
        Some(self.names.len())
    }
}

/// Product of directed sets with the componentwise order. Level is the
/// maximum component level.
#[derive(Clone)]
pub struct Product {
    parts: Vec<Arc<dyn DirectedIndex>>,
}

impl Product {
    pub fn new(parts: Vec<Arc<dyn DirectedIndex>>) -> Self {
        assert!(
            parts.iter().all(|p| p.arity() != usize::MAX),
            "product factors need fixed arity"
        );
        Product { parts }
    }

    pub fn parts(&self) -> &[Arc<dyn DirectedIndex>] {
        &self.parts
    }

    pub fn split(&self, x: &Ix) -> Vec<Ix> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut at = 0;
        for p in &self.parts {
            let k = p.arity();
            out.push(Ix(x.0[at..at + k].to_vec()));
            at += k;
        }
        out
    }

    pub fn join(parts: &[Ix]) -> Ix {
        Ix(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    fn zip_all(
        &self,
        a: &Ix,
        b: &Ix,
        f: impl Fn(&dyn DirectedIndex, &Ix, &Ix) -> Option<Ix>,
    ) -> Option<Ix> {
        let (sa, sb) = (self.split(a), self.split(b));
        let parts: Option<Vec<Ix>> = self
            .parts
            .iter()
            .zip(sa.iter().zip(&sb))
            .map(|(p, (x, y))| f(p.as_ref(), x, y))
            .collect();
        parts.map(|v| Product::join(&v))
    }
}

impl DirectedIndex for Product {
    fn describe(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.describe())
            .collect::<Vec<_>>()
            .join(" x ")
    }
    fn arity(&self) -> usize {
        self.parts.iter().map(|p| p.arity()).sum()
    }
    fn level(&self, x: &Ix) -> usize {
        self.parts
            .iter()
            .zip(self.split(x))
            .map(|(p, c)| p.level(&c))
            .max()
            .unwrap_or(0)
    }
    fn window(&self, depth: usize) -> Vec<Ix> {
        let wins: Vec<Vec<Ix>> = self.parts.iter().map(|p| p.window(depth)).collect();
        let mut items: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
        for (p, w) in self.parts.iter().zip(&wins) {
            let mut next = Vec::with_capacity(items.len() * w.len());
            for (lvl, pos) in &items {
                for (i, x) in w.iter().enumerate() {
                    let mut q = pos.clone();
                    q.push(i);
                    next.push(((*lvl).max(p.level(x)), q));
                }
            }
            items = next;
        }
        items.sort();
        items
            .into_iter()
            .map(|(_, pos)| {
                Product::join(
                    &pos.iter()
                        .enumerate()
                        .map(|(k, &i)| wins[k][i].clone())
                        .collect::<Vec<_>>(),
                )
            })
            .collect()
    }
    fn contains(&self, x: &Ix) -> bool {
        x.0.len() == self.arity()
            && self
                .parts
                .iter()
                .zip(self.split(x))
                .all(|(p, c)| p.contains(&c))
    }
    fn le(&self, a: &Ix, b: &Ix) -> bool {
        self.parts
            .iter()
            .zip(self.split(a).iter().zip(&self.split(b)))
            .all(|(p, (x, y))| p.le(x, y))
    }
    fn upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        self.zip_all(a, b, |p, x, y| p.upper_bound(x, y))
    }
    fn least_upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        self.zip_all(a, b, |p, x, y| p.least_upper_bound(x, y))
    }
    fn finite_size(&self) -> Option<usize> {
        self.parts.iter().map(|p| p.finite_size()).product()
    }
    fn is_cofinite(&self) -> bool {
        self.parts.iter().all(|p| p.is_cofinite())
    }
    fn bottom(&self) -> Ix {
        Product::join(&self.parts.iter().map(|p| p.bottom()).collect::<Vec<_>>())
    }
}

/// A directed set known only through an enumeration and its order. It need
/// not be cofinite; levels are enumeration positions.
#[derive(Clone)]
pub struct Enumerated {
    name: String,
    nth: Arc<dyn Fn(usize) -> Ix + Send + Sync>,
    position: Arc<dyn Fn(&Ix) -> Option<usize> + Send + Sync>,
    le: Arc<dyn Fn(&Ix, &Ix) -> bool + Send + Sync>,
    cofinite: bool,
    cap: usize,
}

impl Enumerated {
    pub fn new(
        name: &str,
        nth: impl Fn(usize) -> Ix + Send + Sync + 'static,
        position: impl Fn(&Ix) -> Option<usize> + Send + Sync + 'static,
        le: impl Fn(&Ix, &Ix) -> bool + Send + Sync + 'static,
        cofinite: bool,
    ) -> Self {
        Enumerated {
            name: name.into(),
            nth: Arc::new(nth),
            position: Arc::new(position),
            le: Arc::new(le),
            cofinite,
            cap: 4096,
        }
    }

    /// The naturals with an upper element `w` above everything; `w` has
    /// infinitely many predecessors, so this is not cofinite. `w` is encoded
    /// as `Ix([usize::MAX])` and enumerated first.
    pub fn omega_plus_one() -> Self {
        Enumerated::new(
            "N + {w}",
            |n| {
                if n == 0 {
                    Ix::nat(usize::MAX)
                } else {
                    Ix::nat(n - 1)
                }
            },
            |x| Some(if x.0[0] == usize::MAX { 0 } else { x.0[0] + 1 }),
            |a, b| a.0[0] <= b.0[0],
            false,
        )
    }

    /// The naturals seen only through their enumeration.
    pub fn opaque_naturals() -> Self {
        Enumerated::new(
            "N (opaque)",
            Ix::nat,
            |x| Some(x.0[0]),
            |a, b| a.0[0] <= b.0[0],
            false,
        )
    }

    pub fn nth(&self, n: usize) -> Ix {
        (self.nth)(n)
    }
}

impl DirectedIndex for Enumerated {
    fn describe(&self) -> String {
        self.name.clone()
    }
    fn arity(&self) -> usize {
        1
    }
    fn level(&self, x: &Ix) -> usize {
        (self.position)(x).unwrap_or(usize::MAX)
    }
    fn window(&self, depth: usize) -> Vec<Ix> {
        (0..=depth).map(|n| (self.nth)(n)).collect()
    }
    fn contains(&self, x: &Ix) -> bool {
        (self.position)(x).is_some()
    }
    fn le(&self, a: &Ix, b: &Ix) -> bool {
        (self.le)(a, b)
    }
    fn upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        match search_index(self, self.cap, |u| (self.le)(a, u) && (self.le)(b, u)) {
            Search::Found(u) => Some(u),
            _ => None,
        }
    }
    fn is_cofinite(&self) -> bool {
        self.cofinite
    }
}

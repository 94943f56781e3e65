use super::{DirectedIndex, Ix, ShapeWindow, TruncationBudget};
use crate::{Check, Verdict};
use std::sync::Arc;

/// Tuples `(s_a)` over the objects of a finite shape, with `s_a >= s_b` for
/// every arrow `a -> b`, ordered coordinatewise. Coordinates follow the
/// shape's object order. Level is the sum of the coordinate levels.
#[derive(Clone)]
pub struct KPoset {
    shape: ShapeWindow,
    base: Arc<dyn DirectedIndex>,
}

impl KPoset {
    pub fn new(shape: ShapeWindow, base: Arc<dyn DirectedIndex>) -> Self {
        assert!(base.arity() != usize::MAX, "coordinates need fixed arity");
        KPoset { shape, base }
    }

    pub fn shape(&self) -> &ShapeWindow {
        &self.shape
    }

    pub fn base(&self) -> &Arc<dyn DirectedIndex> {
        &self.base
    }

    /// Position of object `id` among the coordinates.
    pub fn slot(&self, id: usize) -> usize {
        self.shape
            .objects
            .iter()
            .position(|o| o.id == id)
            .expect("object in shape")
    }

    pub fn split(&self, x: &Ix) -> Vec<Ix> {
        let k = self.base.arity();
        (0..self.shape.objects.len())
            .map(|i| Ix(x.0[i * k..(i + 1) * k].to_vec()))
            .collect()
    }

    pub fn join(parts: &[Ix]) -> Ix {
        Ix(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    /// Coordinate of `x` at object `id`.
    pub fn coord(&self, x: &Ix, id: usize) -> Ix {
        let k = self.base.arity();
        let i = self.slot(id);
        Ix(x.0[i * k..(i + 1) * k].to_vec())
    }

    fn admissible(&self, parts: &[Ix]) -> bool {
        self.shape.arrows.iter().all(|a| {
            self.base
                .le(&parts[self.slot(a.target)], &parts[self.slot(a.source)])
        })
    }

    /// Raises each coordinate of `lower` (a list of tuples) to a common upper
    /// bound, visiting objects from the lowest grade up so each coordinate
    /// also dominates the coordinates it maps to.
    fn saturate(&self, lower: &[Vec<Ix>]) -> Option<Ix> {
        let mut out: Vec<Option<Ix>> = vec![None; self.shape.objects.len()];
        for id in self.shape.by_grade() {
            let i = self.slot(id);
            let mut cands: Vec<Ix> = lower.iter().map(|t| t[i].clone()).collect();
            for a in self.shape.arrows_from(id) {
                cands.push(out[self.slot(a.target)].clone().expect("lower grade first"));
            }
            let mut acc = cands.first()?.clone();
            for c in &cands[1..] {
                acc = self
                    .base
                    .least_upper_bound(&acc, c)
                    .or_else(|| self.base.upper_bound(&acc, c))?;
            }
            out[i] = Some(acc);
        }
        Some(KPoset::join(
            &out.into_iter()
                .map(|x| x.expect("all slots"))
                .collect::<Vec<_>>(),
        ))
    }

    /// An element of `K` above both `s` and `t`.
    pub fn refine(&self, s: &Ix, t: &Ix) -> Option<Ix> {
        self.saturate(&[self.split(s), self.split(t)])
    }

    /// An element of `K` above an arbitrary tuple.
    pub fn include(&self, s: &Ix) -> Option<Ix> {
        self.saturate(&[self.split(s)])
    }

    /// An element of `K` whose coordinate at `id` is at least `i`.
    pub fn project_witness(&self, id: usize, i: &Ix) -> Option<Ix> {
        let mut parts: Vec<Ix> = vec![self.base.bottom(); self.shape.objects.len()];
        parts[self.slot(id)] = i.clone();
        self.saturate(&[parts])
    }

    /// Every tuple in the product window is dominated by an element of `K`.
    pub fn inclusion_cofinal(&self, budget: TruncationBudget) -> Check {
        let w = self.base.window(budget.depth);
        let n = self.shape.objects.len();
        let mut idx = vec![0usize; n];
        let mut seen = 0usize;
        let mut check = Check::new("K -> prod I cofinal", Verdict::Certified, budget.depth);
        if w.is_empty() {
            return check;
        }
        loop {
            if seen >= budget.node_cap {
                check.verdict = Verdict::Exhausted;
                return check;
            }
            seen += 1;
            let parts: Vec<Ix> = idx.iter().map(|&i| w[i].clone()).collect();
            let s = KPoset::join(&parts);
            match self.include(&s) {
                Some(k) if self.contains(&k) && self.dominates(&k, &parts) => {
                    if check.witnesses.len() < 8 {
                        check.witnesses.push(format!("{s} -> {k}"));
                    }
                }
                _ => {
                    check.verdict = Verdict::Refuted;
                    check.witnesses.push(format!("no element above {s}"));
                    return check;
                }
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return check;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < w.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// The projection to the coordinate at `id` is cofinal.
    pub fn projection_cofinal(&self, id: usize, budget: TruncationBudget) -> Check {
        let mut check = Check::new(
            format!("K -> I at {id} cofinal"),
            Verdict::Certified,
            budget.depth,
        );
        for (n, i) in self.base.window(budget.depth).into_iter().enumerate() {
            if n >= budget.node_cap {
                check.verdict = Verdict::Exhausted;
                break;
            }
            match self.project_witness(id, &i) {
                Some(k) if self.contains(&k) && self.base.le(&i, &self.coord(&k, id)) => {
                    if check.witnesses.len() < 8 {
                        check.witnesses.push(format!("{i} -> {k}"));
                    }
                }
                _ => {
                    check.verdict = Verdict::Refuted;
                    check.witnesses.push(format!("nothing above {i}"));
                    break;
                }
            }
        }
        check
    }

    fn dominates(&self, k: &Ix, parts: &[Ix]) -> bool {
        self.split(k)
            .iter()
            .zip(parts)
            .all(|(a, b)| self.base.le(b, a))
    }
}

impl DirectedIndex for KPoset {
    fn describe(&self) -> String {
        format!(
            "monotone tuples over {} objects in {}",
            self.shape.objects.len(),
            self.base.describe()
        )
    }
    fn arity(&self) -> usize {
        self.base.arity() * self.shape.objects.len()
    }
    fn level(&self, x: &Ix) -> usize {
        self.split(x).iter().map(|c| self.base.level(c)).sum()
    }
    fn window(&self, depth: usize) -> Vec<Ix> {
        let base = self.base.window(depth);
        let levels: Vec<usize> = base.iter().map(|x| self.base.level(x)).collect();
        let n = self.shape.objects.len();
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut pos = Vec::with_capacity(n);
        fn rec(
            k: &KPoset,
            base: &[Ix],
            levels: &[usize],
            left: usize,
            pos: &mut Vec<usize>,
            out: &mut Vec<(usize, Vec<usize>)>,
            used: usize,
        ) {
            let n = k.shape.objects.len();
            if pos.len() == n {
                out.push((used, pos.clone()));
                return;
            }
            let me = pos.len();
            let my_id = k.shape.objects[me].id;
            for (i, x) in base.iter().enumerate() {
                if levels[i] > left {
                    continue;
                }
                let ok = k.shape.arrows.iter().all(|a| {
                    let (s, t) = (k.slot(a.source), k.slot(a.target));
                    if a.source == my_id && t < me {
                        k.base.le(&base[pos[t]], x)
                    } else if a.target == my_id && s < me {
                        k.base.le(x, &base[pos[s]])
                    } else {
                        true
                    }
                });
                if ok {
                    pos.push(i);
                    rec(
                        k,
                        base,
                        levels,
                        left - levels[i],
                        pos,
                        out,
                        used + levels[i],
                    );
                    pos.pop();
                }
            }
        }
        rec(self, &base, &levels, depth, &mut pos, &mut out, 0);
        out.sort();
        out.into_iter()
            .map(|(_, p)| KPoset::join(&p.iter().map(|&i| base[i].clone()).collect::<Vec<_>>()))
            .collect()
    }
    fn contains(&self, x: &Ix) -> bool {
        x.0.len() == self.arity() && {
            let parts = self.split(x);
            parts.iter().all(|p| self.base.contains(p)) && self.admissible(&parts)
        }
    }
    fn le(&self, a: &Ix, b: &Ix) -> bool {
        self.split(a)
            .iter()
            .zip(self.split(b).iter())
            .all(|(x, y)| self.base.le(x, y))
    }
    fn upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        self.refine(a, b)
    }
    fn least_upper_bound(&self, a: &Ix, b: &Ix) -> Option<Ix> {
        self.refine(a, b)
    }
    fn is_cofinite(&self) -> bool {
        self.base.is_cofinite()
    }
    fn bottom(&self) -> Ix {
        let b = self.base.bottom();
        self.include(&KPoset::join(&vec![b; self.shape.objects.len()]))
            .expect("bottom")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{Chain, CofiniteCategory, FiniteShape};

    fn arrow_k() -> KPoset {
        KPoset::new(FiniteShape::line(2).window(0), Arc::new(Chain))
    }

    fn t(v: &[usize]) -> Ix {
        Ix(v.to_vec())
    }

    #[test]
    fn cospan_membership() {
        let k = KPoset::new(FiniteShape::cospan().window(0), Arc::new(Chain));
        assert!(k.contains(&t(&[2, 3, 1])));
        assert!(!k.contains(&t(&[1, 3, 2])));
    }

    #[test]
    fn refine_and_witnesses() {
        let k = arrow_k();
        assert_eq!(k.refine(&t(&[3, 1]), &t(&[2, 2])), Some(t(&[3, 2])));
        assert_eq!(k.include(&t(&[1, 4])), Some(t(&[4, 4])));
        assert_eq!(k.project_witness(1, &Ix::nat(3)), Some(t(&[3, 3])));
    }

    #[test]
    fn window_is_exactly_the_admissible_tuples() {
        let k = KPoset::new(FiniteShape::cospan().window(0), Arc::new(Chain));
        let w = k.window(4);
        let mut brute = 0;
        for a in 0..=4 {
            for b in 0..=4 {
                for c in 0..=4 {
                    if a + b + c <= 4 && a >= c && b >= c {
                        brute += 1;
                        assert!(w.contains(&t(&[a, b, c])));
                    }
                }
            }
        }
        assert_eq!(w.len(), brute);
        assert_eq!(&k.window(5)[..w.len()], &w[..]);
    }

    #[test]
    fn cofinality_certificates() {
        let k = KPoset::new(FiniteShape::span().window(0), Arc::new(Chain));
        let b = TruncationBudget::new(4);
        assert_eq!(k.inclusion_cofinal(b).verdict, Verdict::Certified);
        for id in 0..3 {
            assert_eq!(k.projection_cofinal(id, b).verdict, Verdict::Certified);
        }
    }
}

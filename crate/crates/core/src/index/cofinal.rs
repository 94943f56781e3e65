use super::{
    nth_element, search_index, DirectedIndex, FiniteSubsets, Ix, Search, TruncationBudget,
};
use crate::{Check, ProError, Result, Verdict};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

type IxFn = Arc<dyn Fn(&Ix) -> Result<Ix> + Send + Sync>;

/// A monotone map of directed sets `source -> target`.
#[derive(Clone)]
pub struct CofinalFunctor {
    pub source: Arc<dyn DirectedIndex>,
    pub target: Arc<dyn DirectedIndex>,
    map: IxFn,
}

impl CofinalFunctor {
    pub fn new(
        source: Arc<dyn DirectedIndex>,
        target: Arc<dyn DirectedIndex>,
        map: impl Fn(&Ix) -> Result<Ix> + Send + Sync + 'static,
    ) -> Self {
        CofinalFunctor {
            source,
            target,
            map: Arc::new(map),
        }
    }

    pub fn identity(index: Arc<dyn DirectedIndex>) -> Self {
        CofinalFunctor::new(index.clone(), index, |x| Ok(x.clone()))
    }

    /// Inclusion of a subset with the induced order.
    pub fn inclusion(source: Arc<dyn DirectedIndex>, target: Arc<dyn DirectedIndex>) -> Self {
        CofinalFunctor::new(source, target, |x| Ok(x.clone()))
    }

    pub fn apply(&self, x: &Ix) -> Result<Ix> {
        (self.map)(x)
    }
}

/// Replaces a directed set by a cofinite one with a cofinal map into it.
///
/// A cofinite input is returned unchanged. Otherwise the source is the
/// nonempty finite subsets of the naturals, where subset `S` is sent to the
/// first element (in the input's enumeration) above every `j_i` for
/// `i in S` and above the images of all `S - {i}`.
pub fn cofinal_reindex(
    j: Arc<dyn DirectedIndex>,
    budget: TruncationBudget,
) -> Result<CofinalFunctor> {
    if j.is_cofinite() {
        return Ok(CofinalFunctor::identity(j));
    }
    let memo: Arc<Mutex<HashMap<Ix, Ix>>> = Arc::new(Mutex::new(HashMap::new()));
    let target = j.clone();
    let cap = budget.node_cap;
    fn image(
        j: &dyn DirectedIndex,
        memo: &Mutex<HashMap<Ix, Ix>>,
        cap: usize,
        s: &Ix,
    ) -> Result<Ix> {
        if let Some(v) = memo.lock().expect("memo").get(s) {
            return Ok(v.clone());
        }
        let mut lower = Vec::new();
        for &i in &s.0 {
            lower.push(
                nth_element(j, i)
                    .ok_or_else(|| ProError::Precondition(format!("index has no element {i}")))?,
            );
        }
        if s.0.len() > 1 {
            for k in 0..s.0.len() {
                let mut rest = s.0.clone();
                rest.remove(k);
                lower.push(image(j, memo, cap, &Ix(rest))?);
            }
        }
        let found = search_index(j, cap, |u| lower.iter().all(|l| j.le(l, u)));
        match found {
            Search::Found(u) => {
                memo.lock().expect("memo").insert(s.clone(), u.clone());
                Ok(u)
            }
            Search::Absent => Err(ProError::Precondition(format!(
                "index is not directed at {s}"
            ))),
            Search::Exhausted => Err(ProError::budget(format!("cofinal image of {s}"), cap)),
        }
    }
    Ok(CofinalFunctor::new(Arc::new(FiniteSubsets), j, move |s| {
        image(target.as_ref(), &memo, cap, s)
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct CofinalityReport {
    pub verdict: Verdict,
    pub depth: usize,
    /// `(s, t)` with `F(t) >= s`, one per target element in the window.
    pub witnesses: Vec<(Ix, Ix)>,
    /// First target element with no witness, or first monotonicity failure.
    pub failure: Option<String>,
}

impl CofinalityReport {
    pub fn to_check(&self) -> Check {
        let mut c = Check::new("cofinal", self.verdict, self.depth);
        if let Some(f) = &self.failure {
            c = c.with_witness(f.clone());
        }
        c
    }
}

/// Checks monotonicity on the source window and, for each target element of
/// level at most `budget.depth`, searches the source for a witness.
///
/// A missing witness refutes only when the source is finite and was fully
/// examined; a capped search gives `Exhausted`.
pub fn verify_cofinal(f: &CofinalFunctor, budget: TruncationBudget) -> Result<CofinalityReport> {
    let mut report = CofinalityReport {
        verdict: Verdict::Certified,
        depth: budget.depth,
        witnesses: Vec::new(),
        failure: None,
    };
    let sw = f.source.window(budget.depth);
    let images: Vec<Ix> = sw.iter().map(|x| f.apply(x)).collect::<Result<_>>()?;
    for (i, a) in sw.iter().enumerate() {
        for (k, b) in sw.iter().enumerate() {
            if f.source.le(a, b) && !f.target.le(&images[i], &images[k]) {
                report.verdict = Verdict::Refuted;
                report.failure = Some(format!(
                    "not monotone: {a} <= {b} but F({a}) = {} is not <= F({b}) = {}",
                    images[i], images[k]
                ));
                return Ok(report);
            }
        }
    }
    for s in f.target.window(budget.depth) {
        let mut err = None;
        let found = search_index(f.source.as_ref(), budget.node_cap, |t| match f.apply(t) {
            Ok(ft) => f.target.le(&s, &ft),
            Err(e) => {
                err.get_or_insert(e);
                false
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        match found {
            Search::Found(t) => report.witnesses.push((s, t)),
            Search::Absent => {
                report.verdict = Verdict::Refuted;
                report.depth = f.target.level(&s);
                report.failure = Some(format!("nothing maps above {s}"));
                return Ok(report);
            }
            Search::Exhausted => {
                report.verdict = report.verdict.and(Verdict::Exhausted);
                report
                    .failure
                    .get_or_insert(format!("search cap reached at {s}"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{Chain, Enumerated, SubChain};

    #[test]
    fn evens_are_cofinal() {
        let f = CofinalFunctor::inclusion(Arc::new(SubChain::evens()), Arc::new(Chain));
        let r = verify_cofinal(&f, TruncationBudget::new(7)).unwrap();
        assert_eq!(r.verdict, Verdict::Certified);
        for (s, t) in &r.witnesses {
            assert_eq!(t.0[0], s.0[0].div_ceil(2) * 2);
        }
    }

    #[test]
    fn singleton_is_not_cofinal() {
        let f = CofinalFunctor::inclusion(Arc::new(SubChain::finite(vec![0])), Arc::new(Chain));
        let r = verify_cofinal(&f, TruncationBudget::new(4)).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        assert_eq!(r.depth, 1);
    }

    #[test]
    fn capped_search_is_exhausted() {
        let sparse = SubChain::new("multiples of 100", |n| n % 100 == 0);
        let f = CofinalFunctor::inclusion(Arc::new(sparse), Arc::new(Chain));
        let r = verify_cofinal(&f, TruncationBudget::new(3).with_cap(10)).unwrap();
        assert_eq!(r.verdict, Verdict::Exhausted);
    }

    #[test]
    fn reindex_keeps_cofinite() {
        let f = cofinal_reindex(Arc::new(Chain), TruncationBudget::new(3)).unwrap();
        assert_eq!(f.apply(&Ix::nat(5)).unwrap(), Ix::nat(5));
    }

    #[test]
    fn reindex_opaque_naturals_is_max() {
        let f = cofinal_reindex(
            Arc::new(Enumerated::opaque_naturals()),
            TruncationBudget::new(3),
        )
        .unwrap();
        assert!(f.source.is_cofinite());
        for s in f.source.window(4) {
            assert_eq!(f.apply(&s).unwrap(), Ix::nat(*s.0.iter().max().unwrap()));
        }
        let r = verify_cofinal(&f, TruncationBudget::new(4)).unwrap();
        assert_eq!(r.verdict, Verdict::Certified);
    }

    #[test]
    fn reindex_omega_plus_one() {
        let f = cofinal_reindex(
            Arc::new(Enumerated::omega_plus_one()),
            TruncationBudget::new(3),
        )
        .unwrap();
        let r = verify_cofinal(&f, TruncationBudget::new(4)).unwrap();
        assert_eq!(r.verdict, Verdict::Certified);
    }
}

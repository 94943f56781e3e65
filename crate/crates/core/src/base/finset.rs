//! Finite sets `{0, …, n-1}` and total functions between them.

use super::{Category, Cocone, Cone, FiniteDiagram};
use crate::error::{ProError, Result};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FinSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSetMap {
    target: usize,
    assign: Vec<usize>,
}

impl FinSetMap {
    pub fn new(target: usize, assign: Vec<usize>) -> Result<Self> {
        if let Some(bad) = assign.iter().find(|v| **v >= target) {
            return Err(ProError::Invalid(format!(
                "value {bad} outside target of size {target}"
            )));
        }
        Ok(FinSetMap { target, assign })
    }

    /// `x ↦ x mod target`; the empty target only receives the empty set.
    pub fn modulo(source: usize, target: usize) -> Result<Self> {
        if target == 0 && source > 0 {
            return Err(ProError::Invalid(
                "no map from a nonempty set to the empty set".into(),
            ));
        }
        Ok(FinSetMap {
            target,
            assign: (0..source).map(|x| x % target.max(1)).collect(),
        })
    }

    pub fn source_size(&self) -> usize {
        self.assign.len()
    }

    pub fn target_size(&self) -> usize {
        self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assign[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.assign
    }
}

impl Category for FinSet {
    type Obj = usize;
    type Map = FinSetMap;

    fn name(&self) -> &'static str {
        "finset"
    }

    fn source(&self, f: &FinSetMap) -> usize {
        f.assign.len()
    }

    fn target(&self, f: &FinSetMap) -> usize {
        f.target
    }

    fn identity(&self, x: &usize) -> FinSetMap {
        FinSetMap {
            target: *x,
            assign: (0..*x).collect(),
        }
    }

    fn compose(&self, g: &FinSetMap, f: &FinSetMap) -> Result<FinSetMap> {
        self.check_composable(g, f)?;
        Ok(FinSetMap {
            target: g.target,
            assign: f.assign.iter().map(|x| g.assign[*x]).collect(),
        })
    }

    fn hom(&self, x: &usize, y: &usize) -> Result<Vec<FinSetMap>> {
        let (n, m) = (*x, *y);
        if n == 0 {
            return Ok(vec![FinSetMap {
                target: m,
                assign: Vec::new(),
            }]);
        }
        if m == 0 {
            return Ok(Vec::new());
        }
        let count = m
            .checked_pow(n as u32)
            .filter(|c| *c <= 1 << 22)
            .ok_or_else(|| ProError::budget(format!("Hom({n}, {m}) enumeration"), n))?;
        let mut out = Vec::with_capacity(count);
        let mut digits = vec![0usize; n];
        for _ in 0..count {
            out.push(FinSetMap {
                target: m,
                assign: digits.clone(),
            });
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < m {
                    break;
                }
                *d = 0;
            }
        }
        Ok(out)
    }

    fn limit(&self, d: &FiniteDiagram<Self>) -> Result<Cone<Self>> {
        d.validate(self)?;
        let k = d.objects.len();
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        let mut current = vec![0usize; k];
        fn rec(
            d: &FiniteDiagram<FinSet>,
            pos: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if pos == d.objects.len() {
                out.push(current.clone());
                return;
            }
            'next: for x in 0..d.objects[pos] {
                current[pos] = x;
                for (i, j, m) in &d.arrows {
                    let (i, j) = (*i, *j);
                    if i.max(j) == pos && m.assign[current[i]] != current[j] {
                        continue 'next;
                    }
                }
                rec(d, pos + 1, current, out);
            }
        }
        rec(d, 0, &mut current, &mut tuples);
        let apex = tuples.len();
        let legs = (0..k)
            .map(|i| FinSetMap {
                target: d.objects[i],
                assign: tuples.iter().map(|t| t[i]).collect(),
            })
            .collect();
        Ok(Cone { apex, legs })
    }

    fn limit_factor(
        &self,
        d: &FiniteDiagram<Self>,
        lim: &Cone<Self>,
        cone: &Cone<Self>,
    ) -> Result<FinSetMap> {
        let index: HashMap<Vec<usize>, usize> = (0..lim.apex)
            .map(|e| (lim.legs.iter().map(|l| l.assign[e]).collect(), e))
            .collect();
        if cone.legs.len() != d.objects.len() {
            return Err(ProError::Precondition(
                "cone has the wrong number of legs".into(),
            ));
        }
        let assign = (0..cone.apex)
            .map(|w| {
                let t: Vec<usize> = cone.legs.iter().map(|l| l.assign[w]).collect();
                index
                    .get(&t)
                    .copied()
                    .ok_or_else(|| ProError::Precondition("legs do not form a cone".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinSetMap {
            target: lim.apex,
            assign,
        })
    }

    fn colimit(&self, d: &FiniteDiagram<Self>) -> Result<Cocone<Self>> {
        d.validate(self)?;
        let offsets: Vec<usize> = d
            .objects
            .iter()
            .scan(0, |acc, n| {
                let o = *acc;
                *acc += n;
                Some(o)
            })
            .collect();
        let total: usize = d.objects.iter().sum();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        for (i, j, m) in &d.arrows {
            for (x, y) in m.assign.iter().enumerate() {
                let a = find(&mut parent, offsets[*i] + x);
                let b = find(&mut parent, offsets[*j] + *y);
                if a != b {
                    let (lo, hi) = (a.min(b), a.max(b));
                    parent[hi] = lo;
                }
            }
        }
        // classes are numbered by first occurrence, scanning objects that are
        // not the source of any arrow first
        let is_source: Vec<bool> = (0..d.objects.len())
            .map(|i| d.arrows.iter().any(|(s, _, _)| *s == i))
            .collect();
        let order = (0..d.objects.len())
            .filter(|i| !is_source[*i])
            .chain((0..d.objects.len()).filter(|i| is_source[*i]));
        let mut class_of = HashMap::new();
        let mut labels = vec![0usize; total];
        for i in order {
            for x in 0..d.objects[i] {
                let e = offsets[i] + x;
                let r = find(&mut parent, e);
                let next = class_of.len();
                labels[e] = *class_of.entry(r).or_insert(next);
            }
        }
        let apex = class_of.len();
        let legs = d
            .objects
            .iter()
            .enumerate()
            .map(|(i, n)| FinSetMap {
                target: apex,
                assign: (0..*n).map(|x| labels[offsets[i] + x]).collect(),
            })
            .collect();
        Ok(Cocone { apex, legs })
    }

    fn colimit_factor(
        &self,
        d: &FiniteDiagram<Self>,
        colim: &Cocone<Self>,
        cocone: &Cocone<Self>,
    ) -> Result<FinSetMap> {
        let mut assign: Vec<Option<usize>> = vec![None; colim.apex];
        for (i, n) in d.objects.iter().enumerate() {
            for x in 0..*n {
                let c = colim.legs[i].assign[x];
                let v = cocone.legs[i].assign[x];
                match assign[c] {
                    None => assign[c] = Some(v),
                    Some(prev) if prev != v => {
                        return Err(ProError::Precondition("legs do not form a cocone".into()))
                    }
                    _ => {}
                }
            }
        }
        let assign = assign
            .into_iter()
            .map(|v| {
                v.ok_or_else(|| ProError::Invalid("colimit class without representative".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinSetMap {
            target: cocone.apex,
            assign,
        })
    }

    fn is_mono(&self, f: &FinSetMap) -> Result<bool> {
        Ok(self.image_size(f)? == f.assign.len())
    }

    fn is_epi(&self, f: &FinSetMap) -> Result<bool> {
        Ok(self.image_size(f)? == f.target)
    }

    fn image_size(&self, f: &FinSetMap) -> Result<usize> {
        let mut seen = vec![false; f.target];
        f.assign.iter().for_each(|v| seen[*v] = true);
        Ok(seen.iter().filter(|b| **b).count())
    }

    fn cardinality(&self, x: &usize) -> Option<usize> {
        Some(*x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{is_cocone, is_cone};

    fn map(t: usize, a: &[usize]) -> FinSetMap {
        FinSetMap::new(t, a.to_vec()).unwrap()
    }

    #[test]
    fn compose_with_identity() {
        let f = map(2, &[0, 1]);
        let g = map(2, &[1, 0]);
        assert_eq!(FinSet.compose(&g, &f).unwrap(), map(2, &[1, 0]));
    }

    #[test]
    fn compose_rejects_mismatch() {
        let f = map(3, &[0, 1]);
        let g = map(2, &[1, 0]);
        assert!(matches!(
            FinSet.compose(&g, &f),
            Err(ProError::Composition(_))
        ));
    }

    #[test]
    fn hom_counts() {
        assert_eq!(FinSet.hom(&2, &3).unwrap().len(), 9);
        assert_eq!(FinSet.hom(&0, &5).unwrap().len(), 1);
        assert_eq!(FinSet.hom(&3, &0).unwrap().len(), 0);
        let all = FinSet.hom(&2, &3).unwrap();
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn pullback_over_point() {
        let d = FiniteDiagram::<FinSet>::new(vec![2, 2, 1])
            .arrow(0, 2, map(1, &[0, 0]))
            .arrow(1, 2, map(1, &[0, 0]));
        let lim = FinSet.limit(&d).unwrap();
        assert_eq!(lim.apex, 4);
        assert!(is_cone(&FinSet, &d, &lim).unwrap());
    }

    #[test]
    fn equalizer_of_equal_pair_is_source() {
        let f = map(3, &[0, 2]);
        let d = FiniteDiagram::<FinSet>::new(vec![2, 3])
            .arrow(0, 1, f.clone())
            .arrow(0, 1, f);
        let lim = FinSet.limit(&d).unwrap();
        assert_eq!(lim.apex, 2);
        assert_eq!(lim.legs[0], FinSet.identity(&2));
    }

    #[test]
    fn coproduct_and_coequalizer() {
        let d = FiniteDiagram::<FinSet>::new(vec![2, 3]);
        assert_eq!(FinSet.colimit(&d).unwrap().apex, 5);
        let f = map(3, &[1, 2]);
        let d = FiniteDiagram::<FinSet>::new(vec![2, 3])
            .arrow(0, 1, f.clone())
            .arrow(0, 1, f);
        let c = FinSet.colimit(&d).unwrap();
        assert_eq!(c.apex, 3);
        assert_eq!(c.legs[1], FinSet.identity(&3));
        assert!(is_cocone(&FinSet, &d, &c).unwrap());
    }

    #[test]
    fn limit_universal_property_exhaustive() {
        // pullback of 3 -> 2 <- 2, checked against every cone from a 2-element apex
        let d = FiniteDiagram::<FinSet>::new(vec![3, 2, 2])
            .arrow(0, 1, map(2, &[0, 1, 1]))
            .arrow(2, 1, map(2, &[1, 0]));
        let lim = FinSet.limit(&d).unwrap();
        let w = 2;
        let mut cones = 0;
        for l0 in FinSet.hom(&w, &3).unwrap() {
            for l2 in FinSet.hom(&w, &2).unwrap() {
                let l1 = FinSet.compose(&d.arrows[0].2, &l0).unwrap();
                let cone = Cone {
                    apex: w,
                    legs: vec![l0.clone(), l1, l2],
                };
                if !is_cone(&FinSet, &d, &cone).unwrap() {
                    continue;
                }
                cones += 1;
                let factors: Vec<_> = FinSet
                    .hom(&w, &lim.apex)
                    .unwrap()
                    .into_iter()
                    .filter(|u| {
                        (0..3).all(|i| FinSet.compose(&lim.legs[i], u).unwrap() == cone.legs[i])
                    })
                    .collect();
                assert_eq!(factors.len(), 1);
                assert_eq!(factors[0], FinSet.limit_factor(&d, &lim, &cone).unwrap());
            }
        }
        assert!(cones > 0);
    }
}

use super::*;
use crate::base::{FinSet, FinSetMap, FreeAb, FreeAbMap, FreeAbObj};
use crate::gen::{random_span, rng};
use crate::index::{DirectedIndex, FiniteShape, Ix, KPoset};
use crate::pro::certify_iso;
use crate::Verdict;
use std::sync::Arc;

fn sizes(x: &ProObject<FinSet>, depth: usize) -> Vec<usize> {
    x.index()
        .window(depth)
        .iter()
        .map(|s| x.level(s).unwrap())
        .collect()
}

/// Number of classes of the disjoint union of `sizes` under `x ~ f(x)`.
fn union_classes(sizes: &[usize], glue: &[(usize, usize, FinSetMap)]) -> usize {
    let offs: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let total: usize = sizes.iter().sum();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for (i, j, f) in glue {
        for x in 0..sizes[*i] {
            let (a, b) = (
                find(&mut parent, offs[*i] + x),
                find(&mut parent, offs[*j] + f.apply(x)),
            );
            parent[a] = b;
        }
    }
    (0..total).filter(|&x| find(&mut parent, x) == x).count()
}

#[test]
fn coproduct_of_constants() {
    let d = DiagramOfPro::finite(
        FiniteShape::discrete(2),
        vec![
            ProObject::constant(FinSet, 2),
            ProObject::constant(FinSet, 3),
        ],
        vec![],
    )
    .unwrap();
    let z = finite_colimit_pro(&d, TruncationBudget::new(2)).unwrap();
    assert!(sizes(&z.object, 2).iter().all(|&n| n == 5));
}

#[test]
fn pushout_of_free_inclusions() {
    let (a, b, c) = (
        FreeAbObj::range(1, 1),
        FreeAbObj::range(0, 1),
        FreeAbObj::range(1, 2),
    );
    let (pa, pb, pc) = (
        ProObject::constant(FreeAb, a.clone()),
        ProObject::constant(FreeAb, b.clone()),
        ProObject::constant(FreeAb, c.clone()),
    );
    let (ab, ac) = (FreeAbMap::canonical(&a, &b), FreeAbMap::canonical(&a, &c));
    let f = ProMap::levelwise(pa.clone(), pb.clone(), move |_| Ok(ab.clone()));
    let g = ProMap::levelwise(pa.clone(), pc.clone(), move |_| Ok(ac.clone()));
    let d = DiagramOfPro::finite(FiniteShape::span(), vec![pa, pb, pc], vec![f, g]).unwrap();
    let z = finite_colimit_pro(&d, TruncationBudget::new(1)).unwrap();
    // Z^2 + Z^2 modulo one identified generator.
    assert_eq!(z.object.level(&Ix::nat(0)).unwrap().rank(), 3);
}

#[test]
fn coequalizer_of_equal_maps() {
    let (a, _) = random_span(4, 3, false).unwrap();
    let x = a.object(0).unwrap();
    let e = ProMap::identity(&x);
    let d = DiagramOfPro::finite(
        FiniteShape::parallel_pair(),
        vec![x.clone(), x.clone()],
        vec![e.clone(), e],
    )
    .unwrap();
    let z = finite_colimit_pro(&d, TruncationBudget::new(3)).unwrap();
    assert_eq!(sizes(&z.object, 3), sizes(&x, 3));
}

#[test]
fn single_object_colimit_is_the_object() {
    let (a, _) = random_span(1, 4, true).unwrap();
    let x = a.object(1).unwrap();
    let d = DiagramOfPro::single(x.clone());
    let budget = TruncationBudget::new(3);
    let z = cofinite_colimit(&d, budget).unwrap();
    assert!(z.stable.verdict.is_certified());
    let x2 = x.clone();
    let back = ProMap::new(z.object.clone(), x.clone(), move |s| {
        Ok((Ix(vec![s.0[0]]), FinSet.identity(&x2.level(s)?)))
    });
    let cert = certify_iso(&z.legs[0], &back, budget).unwrap();
    assert!(cert.all_certified(), "{cert:?}");
}

fn free_sequence(cutoff: u32) -> DiagramOfPro<FreeAb> {
    let obj = move |n: usize| FreeAbObj::range(0, (n as u32).min(cutoff));
    build_sequential_shape(
        move |n| Ok(ProObject::constant(FreeAb, obj(n))),
        move |n| {
            let (a, b) = (obj(n), obj(n + 1));
            let (pa, pb) = (
                ProObject::constant(FreeAb, a.clone()),
                ProObject::constant(FreeAb, b.clone()),
            );
            let m = FreeAbMap::canonical(&a, &b);
            Ok(ProMap::levelwise(pa, pb, move |_| Ok(m.clone())))
        },
    )
}

#[test]
fn sequential_colimit_of_free_inclusions() {
    let d = free_sequence(3);
    let z = cofinite_colimit(&d, TruncationBudget::new(5).with_slack(1)).unwrap();
    assert!(z.stable.verdict.is_certified(), "{:?}", z.stable);
    let bottom = z.object.index().bottom();
    assert_eq!(z.object.level(&bottom).unwrap().rank(), 4);
    // Before the cutoff is reached the window reports a truncation.
    let early = cofinite_colimit(&d, TruncationBudget::new(2).with_slack(1)).unwrap();
    assert_eq!(early.stable.verdict, Verdict::Undetermined);
}

#[test]
fn identity_sequence_gives_the_first_object() {
    let x = ProObject::constant(FinSet, 3);
    let x1 = x.clone();
    let d = build_sequential_shape(move |_| Ok(x1.clone()), move |_| Ok(ProMap::identity(&x)));
    let z = cofinite_colimit(&d, TruncationBudget::new(3).with_slack(1)).unwrap();
    assert!(z.stable.verdict.is_certified());
    assert_eq!(z.object.level(&z.object.index().bottom()).unwrap(), 3);
}

#[test]
fn sequential_injections_give_the_union() {
    use rand::Rng;
    let mut r = rng(21);
    for _ in 0..4 {
        let mut sz = vec![r.gen_range(1..3)];
        let mut maps = Vec::new();
        for _ in 0..3 {
            let n = *sz.last().unwrap();
            let m = n + r.gen_range(0..2);
            let mut slots: Vec<usize> = (0..m).collect();
            for k in (1..m).rev() {
                slots.swap(k, r.gen_range(0..=k));
            }
            maps.push(FinSetMap::new(m, slots[..n].to_vec()).unwrap());
            sz.push(m);
        }
        let last = sz.len() - 1;
        let (s1, s2) = (sz.clone(), sz.clone());
        let d = build_sequential_shape(
            move |n| Ok(ProObject::constant(FinSet, s1[n.min(last)])),
            move |n| {
                let (a, b) = (
                    ProObject::constant(FinSet, s2[n.min(last)]),
                    ProObject::constant(FinSet, s2[(n + 1).min(last)]),
                );
                let m = maps
                    .get(n)
                    .cloned()
                    .unwrap_or_else(|| FinSet.identity(&s2[last]));
                Ok(ProMap::levelwise(a, b, move |_| Ok(m.clone())))
            },
        );
        let z = cofinite_colimit(&d, TruncationBudget::new(4).with_slack(1)).unwrap();
        assert!(z.stable.verdict.is_certified());
        assert_eq!(
            z.object.level(&z.object.index().bottom()).unwrap(),
            sz[last]
        );
    }
}

#[test]
fn span_levels_are_pushouts_over_tuples() {
    for seed in 0..4 {
        let (d, _) = random_span(seed, 3, seed % 2 == 0).unwrap();
        let budget = TruncationBudget::new(3);
        let z = cofinite_colimit(&d, budget).unwrap();
        let w = z.bar.window().clone();
        for s in z.bar.k.window(3) {
            let szs: Vec<usize> = w
                .objects
                .iter()
                .map(|o| z.bar.object(o.id, &s).unwrap())
                .collect();
            let glue: Vec<(usize, usize, FinSetMap)> = w
                .arrows
                .iter()
                .map(|a| {
                    (
                        a.source,
                        a.target,
                        z.bar.arrow(a.source, Some(a), &s, &s).unwrap(),
                    )
                })
                .collect();
            assert_eq!(
                z.object.level(&s).unwrap(),
                union_classes(&szs, &glue),
                "seed {seed} at {s}"
            );
        }
        assert!(
            z.bar.check(2).unwrap().verdict.is_certified(),
            "seed {seed}"
        );
    }
}

#[test]
fn colimit_over_k_matches_levelwise() {
    for seed in 0..4 {
        let (d, _) = random_span(seed, 3, true).unwrap();
        let budget = TruncationBudget::new(3);
        let fin = finite_colimit_pro(&d, budget).unwrap();
        let cof = cofinite_colimit(&d, budget).unwrap();
        let cert = compare_colimits(&fin, &cof, budget).unwrap();
        assert!(cert.all_certified(), "seed {seed}: {cert:?}");
    }
}

#[test]
fn injections_commute_with_arrows() {
    let (d, _) = random_span(7, 3, true).unwrap();
    let budget = TruncationBudget::new(3);
    let z = cofinite_colimit(&d, budget).unwrap();
    let cocone = ProCocone {
        apex: z.object.clone(),
        legs: z.legs.clone(),
    };
    assert!(is_pro_cocone(&d, &cocone, budget)
        .unwrap()
        .verdict
        .is_certified());
}

#[test]
fn constant_cocones_factor_uniquely() {
    for seed in 0..3 {
        let (d, _) = random_span(seed, 3, seed == 1).unwrap();
        let budget = TruncationBudget::new(2);
        let z = cofinite_colimit(&d, budget).unwrap();
        let mut r = rng(seed);
        let cocones = random_constant_cocones(&d, &2, 3, &mut r, budget).unwrap();
        assert!(!cocones.is_empty());
        let (zd, legs) = z.diagonal().unwrap();
        let cert = verify_universal_colimit(&d, &zd, &legs, &cocones, budget).unwrap();
        assert!(cert.all_certified(), "seed {seed}: {cert:?}");
    }
}

fn constant_leg(x: &ProObject<FinSet>, apex: &ProObject<FinSet>, v: usize) -> ProMap<FinSet> {
    let x2 = x.clone();
    ProMap::new(x.clone(), apex.clone(), move |_| {
        let n = x2.level(&Ix::nat(0))?;
        Ok((Ix::nat(0), FinSetMap::new(2, vec![v; n])?))
    })
}

#[test]
fn broken_cocone_is_rejected() {
    let (d, _) = random_span(2, 3, false).unwrap();
    let budget = TruncationBudget::new(2);
    let z = cofinite_colimit(&d, budget).unwrap();
    let apex = ProObject::constant(FinSet, 2);
    let xs: Vec<ProObject<FinSet>> = (0..3).map(|i| d.object(i).unwrap()).collect();
    // a and c go to 0, b to 1: the square through b fails.
    let legs = vec![
        constant_leg(&xs[0], &apex, 0),
        constant_leg(&xs[1], &apex, 1),
        constant_leg(&xs[2], &apex, 0),
    ];
    let (zd, zl) = z.diagonal().unwrap();
    let cert = verify_universal_colimit(&d, &zd, &zl, &[ProCocone { apex, legs }], budget).unwrap();
    assert_eq!(cert.checks[0].verdict, Verdict::Refuted);
    assert!(cert.checks[0].name.contains("rejected"));
}

#[test]
fn own_injections_give_the_identity_family() {
    let x = ProObject::constant(FinSet, 2);
    let d = DiagramOfPro::single(x);
    let budget = TruncationBudget::new(2);
    let z = cofinite_colimit(&d, budget).unwrap();
    let (zd, legs) = z.diagonal().unwrap();
    let cocone = ProCocone {
        apex: zd.clone(),
        legs: legs.clone(),
    };
    let cert = verify_universal_colimit(&d, &zd, &legs, &[cocone], budget).unwrap();
    assert!(cert.all_certified(), "{cert:?}");
    assert!(cert.checks[0].witnesses[0].starts_with("4 classes"));
}

struct TwoTruncated {
    x0: usize,
    d0: FinSetMap,
    d1: FinSetMap,
    s0: FinSetMap,
    /// Tensor with the vertex set of `Delta[m]`, or with a point.
    vertices: bool,
}

impl TwoTruncated {
    fn x(&self, n: usize) -> usize {
        if n == 0 {
            self.x0
        } else {
            self.d0.source_size()
        }
    }
    fn width(&self, m: usize) -> usize {
        if self.vertices {
            m + 1
        } else {
            1
        }
    }
    /// `phi^*: X_n -> X_m`.
    fn op(&self, phi: &[usize], n: usize) -> FinSetMap {
        let m = phi.len() - 1;
        match (m, n, phi) {
            (0, 0, _) => FinSet.identity(&self.x0),
            (0, 1, [0]) => self.d1.clone(),
            (0, 1, _) => self.d0.clone(),
            (1, 0, _) => self.s0.clone(),
            (1, 1, [0, 0]) => FinSet.compose(&self.s0, &self.d1).unwrap(),
            (1, 1, [1, 1]) => FinSet.compose(&self.s0, &self.d0).unwrap(),
            _ => FinSet.identity(&self.x(1)),
        }
    }
}

impl Simplicial<FinSet> for TwoTruncated {
    fn tensor(&self, n: usize, m: usize) -> crate::Result<ProObject<FinSet>> {
        Ok(ProObject::constant(FinSet, self.x(n) * self.width(m)))
    }
    fn push(&self, n: usize, phi: &[usize], k: usize) -> crate::Result<ProMap<FinSet>> {
        let (w, wk) = (self.width(phi.len() - 1), self.width(k));
        let assign: Vec<usize> = (0..self.x(n) * w)
            .map(|p| (p / w) * wk + if self.vertices { phi[p % w] } else { 0 })
            .collect();
        let f = FinSetMap::new(self.x(n) * wk, assign)?;
        let (a, b) = (self.tensor(n, phi.len() - 1)?, self.tensor(n, k)?);
        Ok(ProMap::levelwise(a, b, move |_| Ok(f.clone())))
    }
    fn pull(&self, phi: &[usize], n: usize) -> crate::Result<ProMap<FinSet>> {
        let m = phi.len() - 1;
        let w = self.width(m);
        let op = self.op(phi, n);
        let assign: Vec<usize> = (0..self.x(n) * w)
            .map(|p| op.apply(p / w) * w + p % w)
            .collect();
        let f = FinSetMap::new(self.x(m) * w, assign)?;
        let (a, b) = (self.tensor(n, m)?, self.tensor(m, m)?);
        Ok(ProMap::levelwise(a, b, move |_| Ok(f.clone())))
    }
}

fn random_simplicial(seed: u64, vertices: bool) -> TwoTruncated {
    use rand::Rng;
    let mut r = rng(seed);
    let x0 = r.gen_range(1..4);
    let extra = r.gen_range(0..3);
    // Degenerate edges first, then `extra` nondegenerate ones.
    let x1 = x0 + extra;
    let ends: Vec<(usize, usize)> = (0..x1)
        .map(|e| {
            if e < x0 {
                (e, e)
            } else {
                (r.gen_range(0..x0), r.gen_range(0..x0))
            }
        })
        .collect();
    TwoTruncated {
        x0,
        d0: FinSetMap::new(x0, ends.iter().map(|e| e.1).collect()).unwrap(),
        d1: FinSetMap::new(x0, ends.iter().map(|e| e.0).collect()).unwrap(),
        s0: FinSetMap::new(x1, (0..x0).collect()).unwrap(),
        vertices,
    }
}

#[test]
fn realization_shape_arrow_counts() {
    let x = Arc::new(random_simplicial(0, true));
    let d = build_realization_shape(x, 1).unwrap();
    let w = d.shape.window(0);
    // [0]->[1]: 2, [1]->[0]: 1, [1]->[1]: 2 non-identity.
    assert_eq!(w.objects.len(), 2 + 5);
    for n in 0..2 {
        assert_eq!(w.arrows_from(n).count(), 0);
    }
    for o in w.objects.iter().skip(2) {
        assert_eq!(w.arrows_from(o.id).count(), 2);
    }
    let d0 = build_realization_shape(Arc::new(random_simplicial(0, true)), 0).unwrap();
    assert_eq!(d0.shape.window(0).objects.len(), 1);
    let z = cofinite_colimit(&d0, TruncationBudget::new(1)).unwrap();
    assert_eq!(
        z.object.level(&z.object.index().bottom()).unwrap(),
        random_simplicial(0, true).x0
    );
}

#[test]
fn realization_recovers_vertices_and_components() {
    for seed in 0..6 {
        let x = random_simplicial(seed, true);
        let x0 = x.x0;
        let d = build_realization_shape(Arc::new(x), 1).unwrap();
        let z = cofinite_colimit(&d, TruncationBudget::new(1)).unwrap();
        let k: &KPoset = &z.bar.k;
        assert_eq!(z.object.level(&k.bottom()).unwrap(), x0, "seed {seed}");

        let x = random_simplicial(seed, false);
        // Components: vertices glued along the two ends of each edge.
        let direct = union_classes(
            &[x.x0, x.x0, x.x(1)],
            &[
                (0, 1, FinSet.identity(&x.x0)),
                (2, 0, x.d0.clone()),
                (2, 1, x.d1.clone()),
            ],
        );
        let d = build_realization_shape(Arc::new(x), 1).unwrap();
        let z = cofinite_colimit(&d, TruncationBudget::new(1)).unwrap();
        assert_eq!(
            z.object.level(&z.bar.k.bottom()).unwrap(),
            direct,
            "seed {seed}"
        );
    }
}

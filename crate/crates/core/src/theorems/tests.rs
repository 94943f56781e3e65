use super::*;
use crate::Verdict;

fn report(c: &crate::Certificate) -> String {
    c.checks
        .iter()
        .map(|k| format!("{} {} {:?}\n", k.name, k.verdict, k.witnesses))
        .collect()
}

#[test]
fn inexactness_at_depth_three() {
    let w = build_inexactness_witness(3).unwrap();
    for (name, c) in w.sections() {
        assert!(c.all_certified(), "{name}:\n{}", report(c));
    }
    assert_eq!(w.mono.checks.len(), 3);
    let fg = &w.fg_zero.checks[0];
    assert_eq!(fg.witnesses[2], "A[3,oo) -> A -> A[0,2] is zero");
}

#[test]
fn inexactness_at_depth_zero() {
    let w = build_inexactness_witness(0).unwrap();
    assert_eq!(
        w.certificate().verdict(),
        Verdict::Certified,
        "{}",
        report(&w.certificate())
    );
}

#[test]
fn inexactness_at_depth_six_names_every_level() {
    let w = build_inexactness_witness(6).unwrap();
    assert!(
        w.certificate().all_certified(),
        "{}",
        report(&w.certificate())
    );
    assert_eq!(w.g_nonzero.checks.len(), 8);
    assert_eq!(w.fg_zero.checks[0].witnesses.len(), 7);
}

mod closure {
    use crate::base::functor::FObj;
    use crate::base::{
        ArrowCategory, Category, FinAb, FinAbMap, FinAbObj, FinSet, FreeAb, FreeAbMap, FreeAbObj,
        FunctorCategory, IntMatrix,
    };
    use crate::gen::{finset_retract, random_tower_of_towers, rng};
    use crate::index::{FiniteShape, Ix, TruncationBudget};
    use crate::limits::DirectedDiagram;
    use crate::pro::{ProMap, ProObject};
    use crate::theorems::{exactness_check, retract_tower, type_c_limit_closure};
    use crate::ProError;
    use std::sync::Arc;

    fn budget() -> TruncationBudget {
        TruncationBudget::new(3).with_slack(1)
    }

    fn z(n: u64) -> FinAbObj {
        FinAbObj::cyclic(n)
    }

    fn mul(s: u64, t: u64, v: i64) -> FinAbMap {
        FinAbMap::new(z(s), z(t), IntMatrix::from_rows(1, 1, &[vec![v]])).unwrap()
    }

    #[test]
    fn every_object_is_trivially_closed() {
        let (d, _) = random_tower_of_towers(4, 3, 3, true).unwrap();
        let c = type_c_limit_closure(&d, |_| Ok(true), "any", budget()).unwrap();
        assert!(c.all_certified());
    }

    /// Arrows `Z/2^(k+a+1) -> Z/2` over `k`, one pro-object per `a`.
    fn surjection_tower() -> DirectedDiagram<ArrowCategory<FinAb>> {
        let ar = ArrowCategory::new(FinAb);
        let arrow = |k: usize| mul(1 << (k + 1), 2, 1);
        let pro = move |a: usize| {
            let ar2 = ar.clone();
            ProObject::tower(
                ar.clone(),
                format!("X^{a}"),
                move |k| Ok(arrow(k + a)),
                move |k| {
                    let (s, t) = (arrow(k + a + 1), arrow(k + a));
                    ar2.square(
                        s,
                        t,
                        mul(1 << (k + a + 2), 1 << (k + a + 1), 1),
                        mul(2, 2, 1),
                    )
                },
            )
        };
        let ar = ArrowCategory::new(FinAb);
        let pro2 = pro.clone();
        DirectedDiagram::tower(
            move |a| Ok(pro(a)),
            move |a| {
                let (x, y) = (pro2(a + 1), pro2(a));
                let ar = ar.clone();
                Ok(ProMap::levelwise(x, y, move |k| {
                    let n = k.0[0] + a + 1;
                    ar.square(
                        arrow(n),
                        arrow(n - 1),
                        mul(1 << (n + 1), 1 << n, 1),
                        mul(2, 2, 1),
                    )
                }))
            },
        )
    }

    #[test]
    fn surjections_onto_z2_are_closed() {
        let d = surjection_tower();
        let pred = |f: &FinAbMap| Ok(FinAb.is_epi(f)? && FinAb.target(f) == z(2));
        let c = type_c_limit_closure(&d, pred, "onto Z/2", TruncationBudget::new(4).with_slack(1))
            .unwrap();
        assert!(c.all_certified());
        // Oracle: every limit level is one of the input arrows.
        let lim = crate::limits::cofiltered_limit(&d, TruncationBudget::new(4)).unwrap();
        for s in lim.object.index().window(4).iter() {
            let f = lim.object.level(s).unwrap();
            assert!((1..12).any(|k| f == mul(1 << k, 2, 1)), "{s}");
        }
    }

    /// Inclusions `A[n+k, N] -> A[0, N]` over `k`, one pro-object per `n`.
    #[test]
    fn monomorphisms_of_free_groups_are_closed() {
        let cut = 12;
        let ar = ArrowCategory::new(FreeAb);
        let tail = move |j: usize| FreeAbObj::range(j as u32, cut);
        let whole = FreeAbObj::range(0, cut);
        let w2 = whole.clone();
        let arrow = move |j: usize| FreeAbMap::canonical(&tail(j), &w2);
        let step = {
            let (ar, arrow, whole) = (ar.clone(), arrow.clone(), whole.clone());
            move |j: usize| {
                ar.square(
                    arrow(j + 1),
                    arrow(j),
                    FreeAbMap::canonical(&tail(j + 1), &tail(j)),
                    FreeAbMap::canonical(&whole, &whole),
                )
            }
        };
        let (a1, s1) = (arrow.clone(), step.clone());
        let pro = move |n: usize| {
            let (a, s) = (a1.clone(), s1.clone());
            ProObject::tower(
                ArrowCategory::new(FreeAb),
                format!("i^{n}"),
                move |k| Ok(a(n + k)),
                move |k| s(n + k),
            )
        };
        let p2 = pro.clone();
        let d = DirectedDiagram::tower(
            move |n| Ok(pro(n)),
            move |n| {
                let s = step.clone();
                Ok(ProMap::levelwise(p2(n + 1), p2(n), move |k| s(n + k.0[0])))
            },
        );
        let c = type_c_limit_closure(&d, |f| FreeAb.is_mono(f), "mono", budget()).unwrap();
        assert!(c.all_certified());
        let bad = type_c_limit_closure(&d, |f| FreeAb.is_epi(f), "epi", budget());
        assert!(matches!(bad, Err(ProError::Precondition(_))));
    }

    #[test]
    fn identity_retract() {
        let (d, _) = random_tower_of_towers(2, 2, 3, false).unwrap();
        let x = d.object(&Ix::nat(0)).unwrap();
        let id = ProMap::identity(&x);
        let r = retract_tower(&id, &id, None, budget()).unwrap();
        assert!(r.certificate.all_certified(), "{:?}", r.certificate);
    }

    #[test]
    fn split_pair_of_constant_sets() {
        let (i, p) = finset_retract(&mut rng(3), 2, 1);
        let (x, y) = (
            ProObject::constant(FinSet, 2),
            ProObject::constant(FinSet, 3),
        );
        let f = ProMap::levelwise(x.clone(), y.clone(), move |_| Ok(i.clone()));
        let g = ProMap::levelwise(y, x, move |_| Ok(p.clone()));
        let pred: Arc<dyn Fn(&usize) -> crate::Result<bool> + Send + Sync> =
            Arc::new(|n| Ok(*n <= 3));
        let r = retract_tower(&f, &g, Some(("at most 3 elements", pred)), budget()).unwrap();
        assert!(r.certificate.all_certified(), "{:?}", r.certificate);
        // Oracle: the image of the idempotent fg has 2 elements.
        let e = FinSet
            .compose(
                &f.rep(&Ix::point()).unwrap().1,
                &g.rep(&Ix::point()).unwrap().1,
            )
            .unwrap();
        assert_eq!(FinSet.image_size(&e).unwrap(), 2);
        assert_eq!(
            r.lim_alternating
                .leg(&Ix::nat(0))
                .unwrap()
                .target
                .level(&Ix::point())
                .unwrap(),
            2
        );
    }

    #[test]
    fn not_a_retraction_is_rejected() {
        let (x, y) = (
            ProObject::constant(FinSet, 2),
            ProObject::constant(FinSet, 2),
        );
        let swap = crate::base::FinSetMap::new(2, vec![1, 0]).unwrap();
        let f = ProMap::levelwise(x.clone(), y.clone(), move |_| Ok(swap.clone()));
        let g = ProMap::identity(&x);
        let g = ProMap::new(y, x, move |s| g.rep(s));
        assert!(matches!(
            retract_tower(&f, &g, None, budget()),
            Err(ProError::Precondition(_))
        ));
    }

    #[test]
    fn retract_in_the_arrow_category() {
        // X = (Z/2 -> Z/2), Y = (Z/2 + Z/3 -> Z/2 + Z/3), both identities.
        let ar = ArrowCategory::new(FinAb);
        let big = FinAbObj::new(vec![2, 3]).unwrap();
        let incl = FinAbMap::new(
            z(2),
            big.clone(),
            IntMatrix::from_rows(2, 1, &[vec![1], vec![0]]),
        )
        .unwrap();
        let proj =
            FinAbMap::new(big.clone(), z(2), IntMatrix::from_rows(1, 2, &[vec![1, 0]])).unwrap();
        let (ix, iy) = (FinAb.identity(&z(2)), FinAb.identity(&big));
        let x = ProObject::constant(ar.clone(), ix.clone());
        let y = ProObject::constant(ar.clone(), iy.clone());
        let sf = ar
            .square(ix.clone(), iy.clone(), incl.clone(), incl)
            .unwrap();
        let sg = ar.square(iy, ix, proj.clone(), proj).unwrap();
        let f = ProMap::levelwise(x.clone(), y.clone(), move |_| Ok(sf.clone()));
        let g = ProMap::levelwise(y, x, move |_| Ok(sg.clone()));
        let pred: Arc<dyn Fn(&FinAbMap) -> crate::Result<bool> + Send + Sync> =
            Arc::new(|m| FinAb.is_iso(m));
        let r = retract_tower(&f, &g, Some(("iso", pred)), budget()).unwrap();
        assert!(r.certificate.all_certified(), "{:?}", r.certificate);
    }

    #[test]
    fn seeded_retracts_of_towers() {
        for seed in 0..5 {
            let (f, g, bound) = crate::gen::random_finset_retract(seed, 3).unwrap();
            let pred: Arc<dyn Fn(&usize) -> crate::Result<bool> + Send + Sync> =
                Arc::new(move |n| Ok(*n <= bound));
            let r = retract_tower(&f, &g, Some(("bounded", pred)), budget()).unwrap();
            assert!(
                r.certificate.all_certified(),
                "set seed {seed}: {:?}",
                r.certificate
            );
            let (f, g, bound) = crate::gen::random_finab_retract(seed, 3).unwrap();
            let pred: Arc<dyn Fn(&FinAbObj) -> crate::Result<bool> + Send + Sync> =
                Arc::new(move |x| Ok(x.order() <= bound));
            let r = retract_tower(&f, &g, Some(("bounded", pred)), budget()).unwrap();
            assert!(
                r.certificate.all_certified(),
                "group seed {seed}: {:?}",
                r.certificate
            );
        }
    }

    fn ses_cat() -> FunctorCategory<FinAb> {
        FunctorCategory::new(FinAb, FiniteShape::line(3).shape().clone())
    }

    /// `Z/2^k -2-> Z/2^(k+1) -> Z/2`.
    fn ses(cat: &FunctorCategory<FinAb>, k: usize) -> FObj<FinAb> {
        let (a, b) = (1u64 << k, 1u64 << (k + 1));
        let (i, p) = (mul(a, b, 2), mul(b, 2, 1));
        let pi = FinAb.compose(&p, &i).unwrap();
        let maps = arrange(cat, [i, pi, p]);
        cat.object(vec![z(a), z(b), z(2)], maps).unwrap()
    }

    /// Orders `[0->1, 0->2, 1->2]` by the arrows of the shape.
    fn arrange<M: Clone>(cat: &FunctorCategory<FinAb>, ms: [M; 3]) -> Vec<M> {
        let w = cat.shape();
        w.arrows
            .iter()
            .map(|a| match (a.source, a.target) {
                (0, 1) => ms[0].clone(),
                (0, 2) => ms[1].clone(),
                _ => ms[2].clone(),
            })
            .collect()
    }

    fn ses_step(cat: &FunctorCategory<FinAb>, k: usize) -> crate::base::functor::FMap<FinAb> {
        let (a, b) = (1u64 << k, 1u64 << (k + 1));
        cat.nat(
            ses(cat, k + 1),
            ses(cat, k),
            vec![mul(2 * a, a, 1), mul(2 * b, b, 1), mul(2, 2, 1)],
        )
        .unwrap()
    }

    #[test]
    fn tower_of_short_exact_sequences() {
        let cat = ses_cat();
        let c2 = cat.clone();
        let pro = move |a: usize| {
            let (c, c3) = (c2.clone(), c2.clone());
            ProObject::tower(
                c2.clone(),
                format!("E^{a}"),
                move |k| Ok(ses(&c, k + a + 1)),
                move |k| Ok(ses_step(&c3, k + a + 1)),
            )
        };
        let (p2, c3) = (pro.clone(), cat.clone());
        let d = DirectedDiagram::tower(
            move |a| Ok(pro(a)),
            move |a| {
                let c = c3.clone();
                Ok(ProMap::levelwise(p2(a + 1), p2(a), move |k| {
                    Ok(ses_step(&c, k.0[0] + a + 1))
                }))
            },
        );
        let cert = exactness_check(&d, TruncationBudget::new(4).with_slack(1)).unwrap();
        assert!(cert.all_certified(), "{cert:?}");
        assert_eq!(cert.checks.len(), 3);
    }

    #[test]
    fn constant_and_zero_sequences() {
        let cat = ses_cat();
        for k in [0usize, 2] {
            let e = ses(&cat, k);
            let (c2, e2) = (cat.clone(), e.clone());
            let d =
                DirectedDiagram::tower(move |_| Ok(ProObject::constant(c2.clone(), e2.clone())), {
                    let (c, e) = (cat.clone(), e.clone());
                    move |_| Ok(ProMap::identity(&ProObject::constant(c.clone(), e.clone())))
                });
            let cert = exactness_check(&d, budget()).unwrap();
            assert!(cert.all_certified(), "{cert:?}");
        }
    }

    #[test]
    fn non_exact_sequence_is_rejected() {
        let cat = ses_cat();
        // Z/2 -0-> Z/2 -1-> Z/2 is not mono on the left.
        let maps = arrange(&cat, [mul(2, 2, 0), mul(2, 2, 0), mul(2, 2, 1)]);
        let e = cat.object(vec![z(2), z(2), z(2)], maps).unwrap();
        let (c2, e2) = (cat.clone(), e.clone());
        let d = DirectedDiagram::tower(
            move |_| Ok(ProObject::constant(c2.clone(), e2.clone())),
            move |_| {
                Ok(ProMap::identity(&ProObject::constant(
                    cat.clone(),
                    e.clone(),
                )))
            },
        );
        assert!(matches!(
            exactness_check(&d, budget()),
            Err(ProError::Precondition(_))
        ));
    }
}

mod commute {
    use crate::gen::random_tower_of_diagrams;
    use crate::index::{FiniteShape, TruncationBudget};
    use crate::theorems::check_commute;

    fn run(b: FiniteShape, seed: u64) {
        let d = random_tower_of_diagrams(seed, &b, 3, 3).unwrap();
        let c = check_commute(&d, &b, TruncationBudget::new(3).with_slack(1)).unwrap();
        assert!(
            c.certificate.all_certified(),
            "seed {seed}: {:#?}",
            c.certificate
        );
    }

    #[test]
    fn coequalizers() {
        for seed in 0..3 {
            run(FiniteShape::parallel_pair(), seed);
        }
    }

    #[test]
    fn coproducts_and_pushouts() {
        for seed in 0..3 {
            run(FiniteShape::discrete(2), seed);
            run(FiniteShape::span(), seed);
        }
    }

    #[test]
    fn single_object_is_the_plain_limit() {
        run(FiniteShape::discrete(1), 9);
    }
}

#[test]
fn commuted_coequalizer_levels_are_quotients() {
    use crate::index::{FiniteShape, TruncationBudget};
    let b = FiniteShape::parallel_pair();
    let d = crate::gen::random_tower_of_diagrams(5, &b, 3, 3).unwrap();
    let c = check_commute(&d, &b, TruncationBudget::new(4).with_slack(1)).unwrap();
    assert!(c.certificate.all_certified(), "{}", report(&c.certificate));
    assert_eq!(
        c.certificate.checks[0].witnesses,
        vec!["25 levels equal".to_string()]
    );
    for x in c.formula.index().window(4).iter() {
        assert!(c.formula.level(x).unwrap() <= 4);
    }
}

mod cocompact {
    use crate::base::{FinAb, FinAbMap, FinAbObj, FinSet};
    use crate::gen::random_tower_of_towers;
    use crate::index::{Ix, TruncationBudget};
    use crate::pro::{ProMap, ProObject};
    use crate::theorems::{cocompact_check, cocompact_via_iso};
    use crate::Verdict;

    #[test]
    fn constant_two_point_set_on_towers() {
        let x = ProObject::constant(FinSet, 2);
        for seed in 0..5 {
            let (y, models) = random_tower_of_towers(seed, 3, 3, true).unwrap();
            let c = cocompact_check(&x, &[y], TruncationBudget::new(3).with_slack(1)).unwrap();
            assert!(c.all_certified(), "seed {seed}: {c:?}");
            // Oracle: colim_a Hom(Y^a, c2) is the set of functions on the
            // last base set.
            let expect = 1usize << models.last().unwrap().size;
            assert!(
                c.checks[0].witnesses[0].starts_with(&format!("{expect} classes")),
                "{c:?}"
            );
        }
    }

    #[test]
    fn cyclic_two_power_tower_is_refuted() {
        let x = ProObject::tower(
            FinAb,
            "Z/2^(k+1)",
            |k| Ok(FinAbObj::cyclic(1 << (k + 1))),
            |k| {
                FinAbMap::reduction(
                    FinAbObj::cyclic(1 << (k + 2)),
                    FinAbObj::cyclic(1 << (k + 1)),
                )
            },
        );
        let c = cocompact_check(&x, &[], TruncationBudget::new(5).with_slack(1)).unwrap();
        assert_eq!(c.verdict(), Verdict::Refuted, "{c:?}");
        assert_eq!(c.checks[0].witnesses.len(), 6);
    }

    #[test]
    fn constant_tower_is_carried_along_the_iso() {
        let tower = ProObject::tower(
            FinSet,
            "3 = 3 = ...",
            |_| Ok(3),
            |_| Ok(crate::base::FinSetMap::new(3, vec![0, 1, 2]).unwrap()),
        );
        let c3 = ProObject::constant(FinSet, 3);
        let id = crate::base::FinSetMap::new(3, vec![0, 1, 2]).unwrap();
        let id2 = id.clone();
        let to = ProMap::new(tower.clone(), c3.clone(), move |_| {
            Ok((Ix::nat(0), id.clone()))
        });
        let from = ProMap::new(c3, tower.clone(), move |_| Ok((Ix::point(), id2.clone())));
        let (y, _) = random_tower_of_towers(11, 2, 3, false).unwrap();
        let budget = TruncationBudget::new(3).with_slack(1);
        assert!(cocompact_via_iso(&to, &from, &[y], budget)
            .unwrap()
            .all_certified());
        // Without the iso the splitting search has no refutation to offer.
        assert_eq!(
            cocompact_check(&tower, &[], budget).unwrap().verdict(),
            Verdict::Undetermined
        );
    }
}

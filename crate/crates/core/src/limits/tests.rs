use super::*;
use crate::base::{FinSet, FinSetMap};
use crate::gen::{random_tower_of_towers, rng};
use crate::index::{FiniteShape, Ix};
use crate::pro::certify_iso;

/// Surjective tower with sizes `min(n, cap) + 1`, steps `x -> min(x, n)`.
fn clamp_tower(name: &str, cap: usize) -> ProObject<FinSet> {
    ProObject::tower(
        FinSet,
        name,
        move |n| Ok(n.min(cap) + 1),
        move |n| clamp(n + 1, n, cap),
    )
}

fn clamp(from: usize, to: usize, cap: usize) -> Result<FinSetMap> {
    let (a, b) = (from.min(cap) + 1, to.min(cap) + 1);
    FinSetMap::new(b, (0..a).map(|x| x.min(b - 1)).collect())
}

fn clamp_map(
    x: &ProObject<FinSet>,
    y: &ProObject<FinSet>,
    cap_x: usize,
    cap_y: usize,
) -> ProMap<FinSet> {
    ProMap::levelwise(x.clone(), y.clone(), move |s| {
        let n = s.0[0];
        FinSetMap::new(
            n.min(cap_y) + 1,
            (0..n.min(cap_x) + 1).map(|v| v.min(cap_y)).collect(),
        )
    })
}

fn sizes(x: &ProObject<FinSet>, depth: usize) -> Vec<usize> {
    x.index()
        .window(depth)
        .iter()
        .map(|s| x.level(s).unwrap())
        .collect()
}

#[test]
fn product_of_constants() {
    let (a, b) = (
        ProObject::constant(FinSet, 2),
        ProObject::constant(FinSet, 3),
    );
    let d = DiagramOfPro::finite(FiniteShape::discrete(2), vec![a, b], vec![]).unwrap();
    let l = finite_limit_pro(&d, TruncationBudget::new(3)).unwrap();
    assert!(sizes(&l.object, 3).iter().all(|&n| n == 6));
}

#[test]
fn pullback_of_surjective_towers() {
    let (a, b, c) = (
        clamp_tower("a", 3),
        clamp_tower("b", 2),
        clamp_tower("c", 1),
    );
    let (p, q) = (clamp_map(&a, &c, 3, 1), clamp_map(&b, &c, 2, 1));
    let d = DiagramOfPro::finite(FiniteShape::cospan(), vec![a, b, c], vec![p, q]).unwrap();
    let budget = TruncationBudget::new(4);
    let l = finite_limit_pro(&d, budget).unwrap();
    for n in 0..5usize {
        let (ka, kb, kc) = (n.min(3), n.min(2), n.min(1));
        let expected = (0..=ka)
            .flat_map(|x| (0..=kb).map(move |y| (x, y)))
            .filter(|&(x, y)| x.min(kc) == y.min(kc))
            .count();
        assert_eq!(l.object.level(&Ix::nat(n)).unwrap(), expected, "level {n}");
    }
    let mut r = rng(3);
    let mut cones = random_constant_cones(&d, &1, 10, &mut r, budget).unwrap();
    cones.extend(random_constant_cones(&d, &2, 10, &mut r, budget).unwrap());
    assert_eq!(cones.len(), 20);
    let cert = verify_universal_limit(&d, &l.object, &l.legs, &cones, budget).unwrap();
    assert!(cert.all_certified(), "{cert:?}");
}

#[test]
fn own_legs_factor_through_the_identity() {
    let (a, c) = (clamp_tower("a", 2), clamp_tower("c", 1));
    let d = DiagramOfPro::finite(
        FiniteShape::line(2),
        vec![a.clone(), c.clone()],
        vec![clamp_map(&a, &c, 2, 1)],
    )
    .unwrap();
    let budget = TruncationBudget::new(2);
    let l = finite_limit_pro(&d, budget).unwrap();
    let cone = ProCone {
        apex: l.object.clone(),
        legs: l.legs.clone(),
    };
    let cert = verify_universal_limit(&d, &l.object, &l.legs, &[cone], budget).unwrap();
    assert!(cert.all_certified(), "{cert:?}");
}

#[test]
fn equalizer_of_a_map_with_itself() {
    let (a, c) = (clamp_tower("a", 3), clamp_tower("c", 1));
    let f = clamp_map(&a, &c, 3, 1);
    let d = DiagramOfPro::finite(
        FiniteShape::parallel_pair(),
        vec![a.clone(), c],
        vec![f.clone(), f],
    )
    .unwrap();
    let l = finite_limit_pro(&d, TruncationBudget::new(4)).unwrap();
    assert_eq!(sizes(&l.object, 4), sizes(&a, 4));
}

#[test]
fn constants_preserve_finite_limits() {
    let mut r = rng(11);
    use rand::Rng;
    for _ in 0..10 {
        let (na, nb, nc) = (r.gen_range(1..4), r.gen_range(1..4), r.gen_range(1..4));
        let f = FinSetMap::new(nc, (0..na).map(|_| r.gen_range(0..nc)).collect()).unwrap();
        let g = FinSetMap::new(nc, (0..nb).map(|_| r.gen_range(0..nc)).collect()).unwrap();
        let base = FiniteDiagram::new(vec![na, nb, nc])
            .arrow(0, 2, f.clone())
            .arrow(1, 2, g.clone());
        let expected = FinSet.limit(&base).unwrap().apex;
        let (a, b, c) = (
            ProObject::constant(FinSet, na),
            ProObject::constant(FinSet, nb),
            ProObject::constant(FinSet, nc),
        );
        let p = ProMap::levelwise(a.clone(), c.clone(), move |_| Ok(f.clone()));
        let q = ProMap::levelwise(b.clone(), c.clone(), move |_| Ok(g.clone()));
        let d = DiagramOfPro::finite(FiniteShape::cospan(), vec![a, b, c], vec![p, q]).unwrap();
        let l = finite_limit_pro(&d, TruncationBudget::new(0)).unwrap();
        assert_eq!(
            l.object.level(&l.object.index().bottom()).unwrap(),
            expected
        );
    }
}

#[test]
fn broken_cone_is_rejected() {
    let (a, c) = (clamp_tower("a", 2), clamp_tower("c", 1));
    let d = DiagramOfPro::finite(
        FiniteShape::line(2),
        vec![a.clone(), c.clone()],
        vec![clamp_map(&a, &c, 2, 1)],
    )
    .unwrap();
    let budget = TruncationBudget::new(2);
    let l = finite_limit_pro(&d, budget).unwrap();
    let apex = ProObject::constant(FinSet, 1);
    // Point 2 of `a` lies over 1 in `c`, but the second leg picks 0.
    let la = ProMap::new(apex.clone(), a, move |s| {
        let n = s.0[0];
        let v = if n >= 2 { 2 } else { n };
        Ok((Ix::point(), FinSetMap::new(n.min(2) + 1, vec![v])?))
    });
    let lc = ProMap::new(apex.clone(), c, |s| {
        Ok((Ix::point(), FinSetMap::new(s.0[0].min(1) + 1, vec![0])?))
    });
    let cone = ProCone {
        apex,
        legs: vec![la, lc],
    };
    let cert = verify_universal_limit(&d, &l.object, &l.legs, &[cone], budget).unwrap();
    assert_eq!(cert.checks[0].verdict, Verdict::Refuted);
    assert!(cert.checks[0].name.contains("rejected"));
}

/// The tower of constants `c(X_n)` with `X` a clamp tower.
fn constants_of(x: &ProObject<FinSet>) -> DirectedDiagram<FinSet> {
    let (x1, x2) = (x.clone(), x.clone());
    DirectedDiagram::tower(
        move |n| Ok(ProObject::constant(FinSet, x1.level(&Ix::nat(n))?)),
        move |n| {
            let (s, t) = (x2.level(&Ix::nat(n + 1))?, x2.level(&Ix::nat(n))?);
            let m = x2.structure(&Ix::nat(n + 1), &Ix::nat(n))?;
            Ok(ProMap::to_constant(
                ProObject::constant(FinSet, s),
                ProObject::constant(FinSet, t),
                Ix::point(),
                m,
            ))
        },
    )
}

#[test]
fn limit_of_constants_recovers_the_tower() {
    let x = clamp_tower("x", 3);
    let d = constants_of(&x);
    let budget = TruncationBudget::new(3);
    let l = cofiltered_limit(&d, budget).unwrap();
    let (x1, x2) = (x.clone(), x.clone());
    let lo = l.object.clone();
    let to = ProMap::new(x.clone(), lo.clone(), move |st| {
        let n = st.0[0];
        Ok((Ix::nat(n), FinSet.identity(&x1.level(&Ix::nat(n))?)))
    });
    let from = ProMap::new(lo, x, move |n| {
        Ok((Ix(vec![n.0[0], 0]), FinSet.identity(&x2.level(n)?)))
    });
    let cert = certify_iso(&to, &from, budget).unwrap();
    assert!(cert.all_certified(), "{cert:?}");
}

#[test]
fn limit_of_isomorphisms_is_the_constant() {
    let x = ProObject::constant(FinSet, 3);
    let x1 = x.clone();
    let d = DirectedDiagram::tower(move |_| Ok(x1.clone()), move |_| Ok(ProMap::identity(&x)));
    let l = cofiltered_limit(&d, TruncationBudget::new(3)).unwrap();
    assert!(sizes(&l.object, 3).iter().all(|&n| n == 3));
    let leg = l.leg(&Ix::nat(2)).unwrap();
    assert_eq!(leg.rep(&Ix::point()).unwrap().1, FinSet.identity(&3));
}

#[test]
fn product_index_is_cofiltered() {
    let (d, _) = random_tower_of_towers(5, 3, 3, false).unwrap();
    let l = cofiltered_limit(&d, TruncationBudget::new(2)).unwrap();
    let w = l.object.window(4).unwrap();
    let inner = l.object.window(2).unwrap().len();
    assert!(check_cofiltered(&w, inner, 2)
        .unwrap()
        .verdict
        .is_certified());
}

#[test]
fn single_object_pairs_match_the_index() {
    let x = clamp_tower("x", 2);
    let x1 = x.clone();
    let d = DirectedDiagram::new(
        Arc::new(crate::index::Point),
        move |_| Ok(x1.clone()),
        |_, _| unreachable!(),
    );
    let alt = cofiltered_limit_alt(&d).unwrap();
    let w = alt.window(3, 2).unwrap();
    assert_eq!(w.len(), 4);
    assert_eq!(w.objects, sizes(&x, 3));
    let prod = cofiltered_limit(&d, TruncationBudget::new(3)).unwrap();
    assert!(compare_limits(&prod, &alt, TruncationBudget::new(3))
        .unwrap()
        .all_certified());
}

#[test]
fn pair_construction_agrees_with_the_product() {
    for seed in 0..3 {
        let (d, _) = random_tower_of_towers(seed, 3, 3, seed % 2 == 1).unwrap();
        let budget = TruncationBudget::new(2);
        let prod = cofiltered_limit(&d, budget).unwrap();
        let alt = cofiltered_limit_alt(&d).unwrap();
        let cert = compare_limits(&prod, &alt, budget).unwrap();
        assert!(cert.all_certified(), "seed {seed}: {cert:?}");
        let w = alt.window(2, 2).unwrap();
        let inner = alt.window(1, 2).unwrap().len();
        assert!(
            check_cofiltered(&w, inner, 1)
                .unwrap()
                .verdict
                .is_certified(),
            "seed {seed}"
        );
    }
}

#[test]
fn pair_category_has_parallel_arrows() {
    let found = (0..6).any(|seed| {
        let (d, _) = random_tower_of_towers(seed, 2, 3, true).unwrap();
        cofiltered_limit_alt(&d)
            .unwrap()
            .has_parallel(1, 2)
            .unwrap()
    });
    assert!(found);
}

#[test]
fn cofiltered_limit_is_universal() {
    let (d, _) = random_tower_of_towers(2, 3, 3, false).unwrap();
    let budget = TruncationBudget::new(2);
    let l = cofiltered_limit(&d, budget).unwrap();
    let sd = d.to_shape_diagram();
    let w = sd.shape.window(budget.depth);
    let legs: Vec<ProMap<FinSet>> = w
        .objects
        .iter()
        .map(|o| l.leg(&d.label(o.id).unwrap()).unwrap())
        .collect();
    let mut r = rng(9);
    let cones = random_constant_cones(&sd, &1, 5, &mut r, budget).unwrap();
    assert!(!cones.is_empty());
    let cert = verify_universal_limit(&sd, &l.object, &legs, &cones, budget).unwrap();
    assert!(cert.all_certified(), "{cert:?}");
}

#[test]
fn delayed_arrows_pull_back_deeper_levels() {
    let (a, c) = (clamp_tower("a", 3), clamp_tower("c", 3));
    let delayed = ProMap::new(a.clone(), c.clone(), |s| {
        let n = s.0[0];
        Ok((
            Ix::nat(n + 2),
            FinSetMap::new(
                n.min(3) + 1,
                (0..(n + 2).min(3) + 1).map(|v| v.min(n.min(3))).collect(),
            )?,
        ))
    });
    let d = DiagramOfPro::finite(FiniteShape::line(2), vec![a, c], vec![delayed]).unwrap();
    let w = d.shape.window(0);
    let need = pulled_back_levels(&d, &w, 3).unwrap();
    assert_eq!((need[&0], need[&1]), (5, 3));
    let budget = TruncationBudget::new(3);
    let cones = random_constant_cones(&d, &1, 3, &mut rng(0), budget).unwrap();
    assert!(!cones.is_empty());
    let l = finite_limit_pro(&d, budget).unwrap();
    assert!(
        verify_universal_limit(&d, &l.object, &l.legs, &cones, budget)
            .unwrap()
            .all_certified()
    );
}

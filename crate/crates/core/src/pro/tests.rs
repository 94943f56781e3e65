use super::*;
use crate::base::{FinAb, FinAbMap, FinAbObj, FinSet, FinSetMap};
use crate::index::TruncationBudget;
use proptest::prelude::*;

fn z2k_tower() -> ProObject<FinAb> {
    ProObject::tower(
        FinAb,
        "Z/2^(n+1)",
        |n| Ok(FinAbObj::cyclic(1 << (n + 1))),
        |n| {
            FinAbMap::reduction(
                FinAbObj::cyclic(1 << (n + 2)),
                FinAbObj::cyclic(1 << (n + 1)),
            )
        },
    )
}

fn finset_tower(sizes: Vec<usize>, steps: Vec<Vec<usize>>) -> ProObject<FinSet> {
    let last = sizes.len() - 1;
    let s2 = sizes.clone();
    ProObject::tower(
        FinSet,
        "Y",
        move |n| Ok(sizes[n.min(last)]),
        move |n| {
            if n >= last {
                Ok(FinSet.identity(&s2[last]))
            } else {
                FinSetMap::new(s2[n], steps[n].clone())
            }
        },
    )
}

#[test]
fn constant_has_one_level() {
    let c = ProObject::constant(FinSet, 3);
    assert_eq!(c.index().window(5).len(), 1);
    assert_eq!(c.level(&Ix::point()).unwrap(), 3);
}

#[test]
fn tower_structure_is_functorial() {
    let x = z2k_tower();
    assert_eq!(x.validate(4).unwrap().verdict, Verdict::Certified);
    let m = x.structure(&Ix::nat(3), &Ix::nat(0)).unwrap();
    assert_eq!(
        m,
        FinAbMap::reduction(FinAbObj::cyclic(16), FinAbObj::cyclic(2)).unwrap()
    );
}

#[test]
fn hom_of_constants_is_base_hom() {
    let x = ProObject::constant(FinSet, 2).window(3).unwrap();
    let h = hom_bounded(&x, &x, 100).unwrap();
    assert_eq!(h.count(), 4);
}

#[test]
fn hom_from_surjective_tower_to_z2() {
    let x = z2k_tower().window(3).unwrap();
    let y = ProObject::constant(FinAb, FinAbObj::cyclic(2))
        .window(3)
        .unwrap();
    let h = hom_bounded(&x, &y, 100).unwrap();
    // Hom(Z/2^k, Z/2) has two elements and precomposition with a surjection
    // is injective, so the colimit has two classes.
    for k in 1..=4u64 {
        assert_eq!(
            FinAb
                .hom(&FinAbObj::cyclic(1 << k), &FinAbObj::cyclic(2))
                .unwrap()
                .len(),
            2
        );
    }
    assert_eq!(h.count(), 2);
    assert_eq!(
        h.per_target[0].reps[0].0, 0,
        "canonical rep sits at the least index"
    );
}

fn threads(sizes: &[usize], steps: &[Vec<usize>], depth: usize) -> usize {
    let mut count = 0;
    let n = depth + 1;
    let mut t = vec![0usize; n];
    'outer: loop {
        let ok = (0..n).all(|k| t[k] < sizes[k]) && (0..n - 1).all(|k| steps[k][t[k + 1]] == t[k]);
        if ok {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                break 'outer;
            }
            t[k] += 1;
            if t[k] < sizes[k].max(1) {
                break;
            }
            t[k] = 0;
            k += 1;
        }
    }
    count
}

#[test]
fn hom_from_point_counts_threads() {
    let sizes = vec![2, 1, 2, 2];
    let steps = vec![vec![1], vec![0, 0], vec![1, 0]];
    let y = finset_tower(sizes.clone(), steps.clone())
        .window(3)
        .unwrap();
    let x = ProObject::constant(FinSet, 1).window(3).unwrap();
    assert_eq!(
        hom_bounded(&x, &y, 100).unwrap().count(),
        threads(&sizes, &steps, 3)
    );

    let sizes = vec![2, 1, 2, 0];
    let steps = vec![vec![0], vec![0, 0], vec![]];
    let y = finset_tower(sizes.clone(), steps.clone())
        .window(3)
        .unwrap();
    assert_eq!(hom_bounded(&x, &y, 100).unwrap().count(), 0);
    assert_eq!(threads(&sizes, &steps, 3), 0);
}

#[test]
fn stabilized_tower_hom_stabilizes() {
    let y = finset_tower(vec![3, 2, 2], vec![vec![0, 2], vec![1, 0]]);
    let x = ProObject::constant(FinSet, 2);
    let counts: Vec<usize> = (2..5)
        .map(|d| {
            hom_bounded(&x.window(d).unwrap(), &y.window(d).unwrap(), 1000)
                .unwrap()
                .count()
        })
        .collect();
    assert!(counts.windows(2).all(|w| w[0] == w[1]), "{counts:?}");
}

#[test]
fn promap_equal_to_itself() {
    let x = z2k_tower();
    let f = ProMap::new(x.clone(), x.clone(), |s| {
        let t = Ix::nat(s.0[0] + 1);
        Ok((
            t,
            FinAbMap::reduction(
                FinAbObj::cyclic(1 << (s.0[0] + 2)),
                FinAbObj::cyclic(1 << (s.0[0] + 1)),
            )?,
        ))
    });
    let b = TruncationBudget::new(4);
    assert!(promap_equal(&f, &f, b).unwrap().is_equal());
    // The shifted representative is the identity pro-map.
    assert!(promap_equal(&f, &ProMap::identity(&x), b)
        .unwrap()
        .is_equal());
    assert_eq!(f.validate(b).unwrap().verdict, Verdict::Certified);
    assert!(certify_iso(&f, &ProMap::identity(&x), b)
        .unwrap()
        .all_certified());
}

#[test]
fn distinct_maps_are_refuted() {
    let x = ProObject::constant(FinSet, 2);
    let swap = ProMap::levelwise(x.clone(), x.clone(), |_| FinSetMap::new(2, vec![1, 0]));
    let eq = promap_equal(&swap, &ProMap::identity(&x), TruncationBudget::new(2)).unwrap();
    assert_eq!(eq.verdict(), Verdict::Refuted);
}

#[test]
fn limit_of_truncated_z8_tower() {
    let x = ProObject::tower(
        FinAb,
        "Z/8 -> Z/4 -> Z/2",
        |n| Ok(FinAbObj::cyclic(1 << (n.min(2) + 1))),
        |n| {
            let (a, b) = (1u64 << (n.min(2) + 1), 1u64 << ((n + 1).min(2) + 1));
            FinAbMap::reduction(FinAbObj::cyclic(b), FinAbObj::cyclic(a))
        },
    );
    let (cone, stable) = x.base_limit(3).unwrap();
    // Compatible tuples in Z/2 x Z/4 x Z/8 x Z/8.
    let mut brute = 0;
    for a in 0..2 {
        for b in 0..4 {
            for c in 0..8 {
                for d in 0..8 {
                    if b % 2 == a && c % 4 == b && d == c {
                        brute += 1;
                    }
                }
            }
        }
    }
    assert_eq!(cone.apex.order(), brute);
    assert!(stable);
    let (_, unstable) = z2k_tower().base_limit(3).unwrap();
    assert!(!unstable);
}

#[test]
fn limit_of_constant() {
    let (cone, stable) = ProObject::constant(FinSet, 3).base_limit(2).unwrap();
    assert_eq!(cone.apex, 3);
    assert!(stable);
}

fn arb_map(n: usize, m: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..m, n)
}

proptest! {
    #[test]
    fn hom_of_constants_matches_base(n in 0usize..4, m in 0usize..4, d in 0usize..3) {
        let x = ProObject::constant(FinSet, n).window(d).unwrap();
        let y = ProObject::constant(FinSet, m).window(d).unwrap();
        prop_assert_eq!(hom_bounded(&x, &y, 1000).unwrap().count(), m.pow(n as u32));
    }

    #[test]
    fn composition_is_associative(f in arb_map(3, 3), g in arb_map(3, 3), h in arb_map(3, 3), delay in 0usize..3) {
        let x = finset_tower(vec![3], vec![]);
        let mk = |v: Vec<usize>, d: usize| {
            ProMap::new(x.clone(), x.clone(), move |s| Ok((Ix::nat(s.0[0] + d), FinSetMap::new(3, v.clone())?)))
        };
        let (f, g, h) = (mk(f, delay), mk(g, 0), mk(h, 1));
        let l = h.after(&g).after(&f);
        let r = h.after(&g.after(&f));
        prop_assert!(promap_equal(&l, &r, TruncationBudget::new(4)).unwrap().is_equal());
    }
}

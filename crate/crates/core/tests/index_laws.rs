use procat::index::{
    cofinal_reindex, verify_cofinal, Chain, ChainShape, CofinalFunctor, CofiniteCategory,
    DirectedIndex, FiniteShape, Ix, KPoset, PosetShape, Product, ProductShape, SubChain,
    TruncationBudget,
};
use procat::Verdict;
use proptest::prelude::*;
use std::sync::Arc;

/// Arrows leave each object towards strictly smaller grades, and the window
/// holds every arrow out of its objects.
fn check_grades(c: &dyn CofiniteCategory, depth: usize) {
    let w = c.window(depth);
    for a in &w.arrows {
        let (s, t) = (w.object(a.source).unwrap(), w.object(a.target).unwrap());
        assert!(
            t.grade < s.grade,
            "{} has grade {} -> {}",
            a.name,
            s.grade,
            t.grade
        );
    }
    let deeper = c.window(depth + 1);
    for o in &w.objects {
        let here = w.arrows_from(o.id).count();
        let there = deeper.arrows_from(o.id).count();
        assert_eq!(
            here, there,
            "window at {depth} misses arrows out of {}",
            o.name
        );
    }
}

fn chains(n: usize) -> Product {
    Product::new(
        (0..n)
            .map(|_| Arc::new(Chain) as Arc<dyn DirectedIndex>)
            .collect(),
    )
}

#[test]
fn builtin_shapes_lower_the_grade() {
    for d in 0..5 {
        check_grades(&ChainShape, d);
        check_grades(&FiniteShape::span(), d);
        check_grades(&FiniteShape::parallel_pair(), d);
        check_grades(&PosetShape::new(Arc::new(chains(2))), d);
        check_grades(
            &ProductShape::new(Arc::new(ChainShape), Arc::new(FiniteShape::cospan())),
            d,
        );
    }
}

#[test]
fn finite_products_of_chains_are_cofinite() {
    for n in 1..4 {
        let p = chains(n);
        assert!(p.is_cofinite());
        let w = p.window(3);
        for x in &w {
            let below = w.iter().filter(|y| p.le(y, x)).count();
            let deeper = p.window(6).iter().filter(|y| p.le(y, x)).count();
            assert_eq!(below, deeper, "{x} has predecessors outside its window");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn residue_classes_reindex_cofinally(k in 1usize..5, r in 0usize..5) {
        let r = r % k;
        let sub = SubChain::new("residues", move |n| n % k == r);
        let f = CofinalFunctor::inclusion(Arc::new(sub), Arc::new(Chain));
        let v = verify_cofinal(&f, TruncationBudget::new(6)).unwrap();
        prop_assert_eq!(v.verdict, Verdict::Certified);
        let g = cofinal_reindex(Arc::new(chains(k.min(3))), TruncationBudget::new(3)).unwrap();
        prop_assert!(g.source.is_cofinite());
        prop_assert_eq!(verify_cofinal(&g, TruncationBudget::new(3)).unwrap().verdict, Verdict::Certified);
    }

    #[test]
    fn k_refine_dominates_and_stays_in_k(i in 0usize..200, j in 0usize..200, shape in 0usize..3) {
        let b = [FiniteShape::span(), FiniteShape::cospan(), FiniteShape::line(3)][shape].clone();
        let k = KPoset::new(b.window(0), Arc::new(Chain));
        let w = k.window(4);
        let (s, t) = (&w[i % w.len()], &w[j % w.len()]);
        let u = k.refine(s, t).unwrap();
        prop_assert!(k.contains(&u));
        prop_assert!(k.le(s, &u) && k.le(t, &u), "{} {} -> {}", s, t, u);
    }

    #[test]
    fn products_are_directed(a in proptest::collection::vec(0usize..6, 3), b in proptest::collection::vec(0usize..6, 3)) {
        let p = chains(3);
        let (x, y) = (Ix(a), Ix(b));
        let u = p.upper_bound(&x, &y).unwrap();
        prop_assert!(p.le(&x, &u) && p.le(&y, &u));
    }
}

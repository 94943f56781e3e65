use crate::base::Category;
use crate::index::{Chain, Ix, Product, TruncationBudget};
use crate::limits::{cofiltered_limit, CofilteredLimit, DirectedDiagram};
use crate::pro::{certify_iso, hom_classes, ProMap, ProObject, ProWindow};
use crate::{Certificate, Check, Result, Verdict};
use std::collections::HashMap;

/// For a constant `X`, checks on each sample system `Y` that
/// `colim_a Hom(Y^a, X) -> Hom(lim_a Y^a, X)` is a bijection, both sides
/// enumerated as classes of `colim_a colim_s Hom(Y^a_s, X)`. For a
/// non-constant `X`, looks for a level `X_s` through which the identity
/// could factor, and refutes when an image-size bound rules out every
/// `s <= depth`.
pub fn cocompact_check<C: Category>(
    x: &ProObject<C>,
    samples: &[DirectedDiagram<C>],
    budget: TruncationBudget,
) -> Result<Certificate> {
    let mut cert = Certificate::new();
    if x.index().finite_size() == Some(1) {
        let x0 = x.level(&x.index().bottom())?;
        for (i, y) in samples.iter().enumerate() {
            cert.push(sample_bijection(&x0, y, budget)?.named(format!("sample {i}")));
        }
        return Ok(cert);
    }
    cert.push(no_splitting(x, budget)?);
    Ok(cert)
}

/// Cocompactness carried along an isomorphism `X ~ cY`.
pub fn cocompact_via_iso<C: Category>(
    to: &ProMap<C>,
    from: &ProMap<C>,
    samples: &[DirectedDiagram<C>],
    budget: TruncationBudget,
) -> Result<Certificate> {
    let mut cert = certify_iso(to, from, budget)?;
    if !cert.all_certified() {
        return Ok(cert);
    }
    cert.extend(cocompact_check(&to.target, samples, budget)?);
    Ok(cert)
}

trait Named {
    fn named(self, name: String) -> Self;
}

impl Named for Check {
    fn named(mut self, name: String) -> Self {
        self.name = name;
        self
    }
}

fn find(p: &mut [usize], mut i: usize) -> usize {
    while p[i] != i {
        p[i] = p[p[i]];
        i = p[i];
    }
    i
}

enum Outcome {
    Bijective(usize),
    Short(String),
}

/// Tries windows at `depth`, `depth + 1`, ... until the two sides match.
fn sample_bijection<C: Category>(
    x0: &C::Obj,
    y: &DirectedDiagram<C>,
    budget: TruncationBudget,
) -> Result<Check> {
    let lim = cofiltered_limit(y, budget)?;
    let mut last = String::new();
    for d in budget.depth..=budget.depth + 2 * budget.slack.max(1) {
        match compare(x0, y, &lim, d, budget.slack.max(1))? {
            Outcome::Bijective(n) => {
                return Ok(
                    Check::certified("", d).with_witness(format!("{n} classes on both sides"))
                );
            }
            Outcome::Short(r) => last = r,
        }
    }
    Ok(Check::new("", Verdict::Undetermined, budget.depth).with_witness(last))
}

/// Classes of maps to `x0` first seen at levels up to `depth`, on both
/// sides, through windows `slack` levels deeper than anything they touch.
/// The limit side sends `(a, s), m` to the class of `m` at level
/// `f^a(s)` of `Y^a`; the other side composes with the projections.
fn compare<C: Category>(
    x0: &C::Obj,
    y: &DirectedDiagram<C>,
    lim: &CofilteredLimit<C>,
    depth: usize,
    slack: usize,
) -> Result<Outcome> {
    let l = &lim.object;
    let lr = &lim.level_rep;
    let mut windows: Vec<ProWindow<C>> = Vec::new();
    let mut steps: Vec<ProMap<C>> = Vec::new();
    let legs = (0..=depth)
        .map(|a| lim.leg(&Ix::nat(a)))
        .collect::<Result<Vec<_>>>()?;
    let mut deepest_right = depth;
    for a in 0..=depth {
        let ya = y.object(&Ix::nat(a))?;
        let mut dd = depth;
        for s in 0..=depth + slack {
            dd = dd.max(ya.index().level(&lr.f(a, &Ix::nat(s))?));
        }
        for t in ya.index().window(depth).iter() {
            deepest_right = deepest_right.max(l.index().level(&legs[a].rep(t)?.0));
        }
        if a > 0 {
            let m = y.arrow(&Ix::nat(a), &Ix::nat(a - 1))?;
            for t in &windows[a - 1].labels {
                dd = dd.max(ya.index().level(&m.rep(t)?.0));
            }
            steps.push(m);
        }
        windows.push(ya.window(dd + slack)?);
    }
    let homs = windows
        .iter()
        .map(|w| hom_classes(w, x0))
        .collect::<Result<Vec<_>>>()?;
    let mut offset = vec![0];
    for h in &homs {
        offset.push(offset.last().expect("nonempty") + h.len());
    }
    let cat = windows[0].cat.clone();
    let mut parent: Vec<usize> = (0..offset[homs.len()]).collect();
    for a in 1..=depth {
        for (c, (t, m)) in homs[a - 1].reps.iter().enumerate() {
            let (u, r) = steps[a - 1].rep(&windows[a - 1].labels[*t])?;
            let k = windows[a]
                .position(&u)
                .and_then(|p| homs[a].class_of(p, &cat.compose(m, &r).ok()?));
            let Some(k) = k else {
                return Ok(Outcome::Short(format!(
                    "Y^{a} -> Y^{} leaves the window",
                    a - 1
                )));
            };
            let (i, j) = (
                find(&mut parent, offset[a - 1] + c),
                find(&mut parent, offset[a] + k),
            );
            parent[i.max(j)] = i.min(j);
        }
    }

    let lw = l.window(deepest_right + slack)?;
    let right = hom_classes(&lw, x0)?;
    let product = Product::new(vec![y.index.clone(), std::sync::Arc::new(Chain)]);
    // Limit side to colim_a colim_s.
    let mut psi: HashMap<usize, usize> = HashMap::new();
    for (c, (p, m)) in right.reps.iter().enumerate() {
        let x = &lw.labels[*p];
        if l.index().level(x) > depth {
            continue;
        }
        let parts = product.split(x);
        let a = parts[0].0[0];
        let t = lr.f(a, &parts[1])?;
        let k = windows[a].position(&t).and_then(|q| homs[a].class_of(q, m));
        let Some(k) = k else {
            return Ok(Outcome::Short(format!(
                "level {t} of Y^{a} outside the window"
            )));
        };
        psi.insert(c, find(&mut parent, offset[a] + k));
    }
    // And back, from classes first seen at levels up to `depth`.
    let mut phi: HashMap<usize, usize> = HashMap::new();
    for (a, h) in homs.iter().enumerate() {
        for (c, (t, m)) in h.reps.iter().enumerate() {
            let label = &windows[a].labels[*t];
            if windows[a].cat.cardinality(x0).is_none()
                || y.object(&Ix::nat(a))?.index().level(label) > depth
            {
                continue;
            }
            let (x, n) = legs[a].rep(label)?;
            let k = lw
                .position(&x)
                .and_then(|q| right.class_of(q, &cat.compose(m, &n).ok()?));
            let Some(k) = k else {
                return Ok(Outcome::Short(format!(
                    "projection to Y^{a} at {label} outside the window"
                )));
            };
            let root = find(&mut parent, offset[a] + c);
            if let Some(old) = phi.insert(root, k) {
                if old != k {
                    return Ok(Outcome::Short(format!(
                        "a class of colim_a Hom(Y^a, X) goes to two classes at depth {depth}"
                    )));
                }
            }
        }
    }
    for (&c, &root) in &psi {
        if phi.get(&root) != Some(&c) {
            return Ok(Outcome::Short(format!(
                "{} limit-side classes, {} classes of colim_a Hom(Y^a, X) at depth {depth}",
                psi.len(),
                phi.len()
            )));
        }
    }
    for (&root, &c) in &phi {
        if psi.get(&c) != Some(&root) {
            return Ok(Outcome::Short(format!(
                "{} limit-side classes, {} classes of colim_a Hom(Y^a, X) at depth {depth}",
                psi.len(),
                phi.len()
            )));
        }
    }
    Ok(Outcome::Bijective(phi.len()))
}

/// If `X` were cocompact, the identity would factor as `X -> cX_s -> X`.
/// Then at each level `t` some map `X_s -> X_t` composed with `X_u -> X_s`
/// would equal `X_u -> X_t`, so `|X_s|` would bound the image of
/// `X_u -> X_t`.
fn no_splitting<C: Category>(x: &ProObject<C>, budget: TruncationBudget) -> Result<Check> {
    let name = "cocompact";
    let cat = x.cat();
    let w = x.index().window(budget.depth + budget.slack + 1);
    let mut witnesses = Vec::new();
    for s in x.index().window(budget.depth).iter() {
        let Some(size) = cat.cardinality(&x.level(s)?) else {
            return Ok(Check::new(name, Verdict::Undetermined, budget.depth)
                .with_witness("levels without a cardinality"));
        };
        let mut found = None;
        'targets: for t in w.iter() {
            let mut least: Option<usize> = None;
            for u in w
                .iter()
                .filter(|u| x.index().le(s, u) && x.index().le(t, u))
            {
                let img = cat.image_size(&x.structure(u, t)?)?;
                least = Some(least.map_or(img, |l| l.min(img)));
            }
            if let Some(l) = least {
                if l > size {
                    found = Some(format!("s = {s}: |X_{s}| = {size} < {l} = image of X_u -> X_{t} for every u in the window"));
                    break 'targets;
                }
            }
        }
        match found {
            Some(f) => witnesses.push(f),
            None => {
                return Ok(Check::new(name, Verdict::Undetermined, budget.depth)
                    .with_witness(format!("no image bound excludes a splitting through X_{s}")))
            }
        }
    }
    let mut c = Check::new(name, Verdict::Refuted, budget.depth);
    c.witnesses = witnesses;
    Ok(c)
}

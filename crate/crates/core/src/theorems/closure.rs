use crate::base::functor::FObj;
use crate::base::{Abelian, Category, Cone, FiniteDiagram, FunctorCategory};
use crate::index::{Ix, TruncationBudget};
use crate::limits::{cofiltered_limit, CofilteredLimit, DirectedDiagram};
use crate::pro::{certify_iso, promap_equal, ProMap, ProObject};
use crate::{Certificate, Check, ProError, Result};
use std::sync::Arc;

type Pred<C> = dyn Fn(&<C as Category>::Obj) -> Result<bool> + Send + Sync;

/// Scans the limit of `d` over `A x I` at `budget.depth` and asserts every
/// level satisfies `pred`, after checking the same of every input level.
pub fn type_c_limit_closure<C: Category>(
    d: &DirectedDiagram<C>,
    pred: impl Fn(&C::Obj) -> Result<bool>,
    name: &str,
    budget: TruncationBudget,
) -> Result<Certificate> {
    let depth = budget.depth;
    for a in d.index.window(depth).iter() {
        let x = d.object(a)?;
        for s in x.index().window(depth).iter() {
            if !pred(&x.level(s)?)? {
                return Err(ProError::Precondition(format!(
                    "level {s} of X^{a} is not {name}"
                )));
            }
        }
    }
    let lim = cofiltered_limit(d, budget)?;
    scan(&lim.object, &pred, name, depth)
}

fn scan<C: Category>(
    x: &ProObject<C>,
    pred: &dyn Fn(&C::Obj) -> Result<bool>,
    name: &str,
    depth: usize,
) -> Result<Certificate> {
    let w = x.index().window(depth);
    for s in w.iter() {
        if !pred(&x.level(s)?)? {
            return Err(ProError::verification(
                name,
                format!("level {s} of the limit"),
            ));
        }
    }
    let mut c = Certificate::new();
    c.push(
        Check::certified(format!("limit levels {name}"), depth)
            .with_witness(format!("{} levels of A x I", w.len())),
    );
    Ok(c)
}

pub struct RetractData<C: Category> {
    pub f: ProMap<C>,
    pub g: ProMap<C>,
    /// `... -> X -f-> Y -g-> X`, with `X` at even positions.
    pub alternating: DirectedDiagram<C>,
    /// `... -> Y -fg-> Y`.
    pub fg_tower: DirectedDiagram<C>,
    pub lim_alternating: CofilteredLimit<C>,
    pub lim_fg: CofilteredLimit<C>,
    pub certificate: Certificate,
}

/// Builds both towers for a retraction `g f = 1`, certifies that their
/// limits are isomorphic to each other and to `X`, and with `pred` given
/// for the levels of `Y`, that the limit is levelwise of that type.
pub fn retract_tower<C: Category>(
    f: &ProMap<C>,
    g: &ProMap<C>,
    pred: Option<(&str, Arc<Pred<C>>)>,
    budget: TruncationBudget,
) -> Result<RetractData<C>> {
    let (x, y) = (f.source.clone(), f.target.clone());
    let gf = promap_equal(&g.after(f), &ProMap::identity(&x), budget)?;
    if !gf.is_equal() {
        return Err(ProError::Precondition(format!(
            "g f is not the identity: {gf:?}"
        )));
    }
    let mut certificate = Certificate::new();
    certificate.push(gf.to_check("g.f = 1"));

    let (x1, y1, f1, g1) = (x.clone(), y.clone(), f.clone(), g.clone());
    let alternating = DirectedDiagram::tower(
        move |n| Ok(if n % 2 == 0 { x1.clone() } else { y1.clone() }),
        move |n| Ok(if n % 2 == 0 { g1.clone() } else { f1.clone() }),
    );
    let y2 = y.clone();
    let fg = f.after(g);
    let fg_tower = DirectedDiagram::tower(move |_| Ok(y2.clone()), move |_| Ok(fg.clone()));
    let lim_alternating = cofiltered_limit(&alternating, budget)?;
    let lim_fg = cofiltered_limit(&fg_tower, budget)?;

    let l1 = lim_alternating.clone();
    let to_fg = lim_fg.factor(&lim_alternating.object, move |k| {
        l1.leg(&Ix::nat(2 * k.0[0] + 1))
    });
    let (l2, g2) = (lim_fg.clone(), g.clone());
    let from_fg = lim_alternating.factor(&lim_fg.object, move |n| {
        let n = n.0[0];
        let leg = l2.leg(&Ix::nat(n / 2))?;
        Ok(if n % 2 == 1 { leg } else { g2.after(&leg) })
    });
    for c in certify_iso(&to_fg, &from_fg, budget)?.checks {
        certificate.push(Check {
            name: format!("lim alternating = lim fg: {}", c.name),
            ..c
        });
    }
    let f3 = f.clone();
    let x3 = x.clone();
    let from_x = lim_alternating.factor(&x, move |n| {
        Ok(if n.0[0] % 2 == 0 {
            ProMap::identity(&x3)
        } else {
            f3.clone()
        })
    });
    let to_x = lim_alternating.leg(&Ix::nat(0))?;
    for c in certify_iso(&to_x, &from_x, budget)?.checks {
        certificate.push(Check {
            name: format!("lim alternating = X: {}", c.name),
            ..c
        });
    }
    if let Some((name, pred)) = pred {
        certificate.extend(type_c_limit_closure(&fg_tower, |o| pred(o), name, budget)?);
    }
    Ok(RetractData {
        f: f.clone(),
        g: g.clone(),
        alternating,
        fg_tower,
        lim_alternating,
        lim_fg,
        certificate,
    })
}

/// For a cofiltered diagram of short exact sequences `K -> M -> Q` (objects
/// of the functor category on `0 -> 1 -> 2`), certifies that the limit is
/// again levelwise short exact: mono, epi, and exact in the middle.
pub fn exactness_check<A: Abelian>(
    d: &DirectedDiagram<FunctorCategory<A>>,
    budget: TruncationBudget,
) -> Result<Certificate> {
    let cat = d.object(&d.index.bottom())?.cat().clone();
    let slots = sequence_slots(&cat)?;
    let (c1, c2, c3) = (cat.clone(), cat.clone(), cat.clone());
    let mut cert = type_c_limit_closure(
        d,
        move |x| c1.base.is_mono(&x.maps[slots.0]),
        "mono",
        budget,
    )?;
    cert.extend(type_c_limit_closure(
        d,
        move |x| c2.base.is_epi(&x.maps[slots.1]),
        "epi",
        budget,
    )?);
    cert.extend(type_c_limit_closure(
        d,
        move |x| exact_in_middle(&c3, x, slots),
        "exact",
        budget,
    )?);
    Ok(cert)
}

fn sequence_slots<A: Category>(cat: &FunctorCategory<A>) -> Result<(usize, usize)> {
    let w = cat.shape();
    let slot = |id: usize| w.objects.iter().position(|o| o.id == id);
    let find = |s: usize, t: usize| {
        w.arrows
            .iter()
            .position(|a| slot(a.source) == Some(s) && slot(a.target) == Some(t))
            .ok_or_else(|| ProError::Precondition("the shape is not 0 -> 1 -> 2".into()))
    };
    if w.objects.len() != 3 {
        return Err(ProError::Precondition(
            "the shape is not 0 -> 1 -> 2".into(),
        ));
    }
    Ok((find(0, 1)?, find(1, 2)?))
}

/// `p i = 0` and `K` maps isomorphically onto the kernel of `p`.
fn exact_in_middle<A: Abelian>(
    cat: &FunctorCategory<A>,
    x: &FObj<A>,
    (i, p): (usize, usize),
) -> Result<bool> {
    let b = &cat.base;
    let (i, p) = (&x.maps[i], &x.maps[p]);
    let pi = b.compose(p, i)?;
    if !b.is_zero(&pi) {
        return Ok(false);
    }
    let (m, q) = (b.target(i), b.target(p));
    let d = FiniteDiagram::new(vec![m, q.clone()])
        .arrow(0, 1, p.clone())
        .arrow(0, 1, b.zero_map(&b.target(i), &q));
    let ker = b.limit(&d)?;
    let k = b.limit_factor(
        &d,
        &ker,
        &Cone {
            apex: b.source(i),
            legs: vec![i.clone(), pi],
        },
    )?;
    b.is_iso(&k)
}

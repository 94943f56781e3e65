//! Limits in pro-categories: finite limits levelwise, cofiltered limits
//! over `A x I`, the pair-category construction, and universal-property
//! checks.

mod cofiltered;
mod pairs;

pub use cofiltered::{cofiltered_limit, CofilteredLimit, DirectedDiagram};
pub use pairs::{check_cofiltered, cofiltered_limit_alt, compare_limits, PairLimit};

use crate::base::{Category, Cone, FiniteDiagram};
use crate::index::{Ix, ShapeWindow, TruncationBudget};
use crate::levelrep::{level_replace, LevelRepresentation};
use crate::pro::{hom_bounded, promap_equal, DiagramOfPro, ProMap, ProObject};
use crate::{Certificate, Check, ProError, Result, Verdict};
use rand::Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// A limit pro-object with one projection per diagram object.
pub struct ProLimit<C: Category> {
    pub object: ProObject<C>,
    pub legs: Vec<ProMap<C>>,
    pub level_rep: LevelRepresentation<C>,
}

/// A cone over a diagram of pro-objects, legs in shape-object order.
pub struct ProCone<C: Category> {
    pub apex: ProObject<C>,
    pub legs: Vec<ProMap<C>>,
}

impl<C: Category> Clone for ProCone<C> {
    fn clone(&self) -> Self {
        ProCone {
            apex: self.apex.clone(),
            legs: self.legs.clone(),
        }
    }
}

type ConeMemo<C> = Arc<Mutex<HashMap<Ix, (FiniteDiagram<C>, Cone<C>)>>>;

/// Level representation followed by the limit at each level.
pub fn finite_limit_pro<C: Category>(
    d: &DiagramOfPro<C>,
    budget: TruncationBudget,
) -> Result<ProLimit<C>> {
    if !d.shape.is_finite() {
        return Err(ProError::Precondition(
            "finite limits need a finite shape".into(),
        ));
    }
    let lr = level_replace(d, budget)?;
    let w = Arc::new(d.shape.window(0));
    let cat = lr.cat()?;
    let memo: ConeMemo<C> = Arc::default();
    let cone_at = {
        let (lr, w, cat, memo) = (lr.clone(), w.clone(), cat.clone(), memo.clone());
        move |s: &Ix| -> Result<(FiniteDiagram<C>, Cone<C>)> {
            if let Some(v) = memo.lock().expect("memo").get(s) {
                return Ok(v.clone());
            }
            let slot = |id: usize| w.objects.iter().position(|o| o.id == id).expect("object");
            let objects = w
                .objects
                .iter()
                .map(|o| lr.level(o.id, s))
                .collect::<Result<Vec<_>>>()?;
            let mut diag = FiniteDiagram::new(objects);
            for a in &w.arrows {
                diag = diag.arrow(slot(a.source), slot(a.target), lr.vertical(a.id, s)?);
            }
            let cone = cat.limit(&diag)?;
            memo.lock()
                .expect("memo")
                .insert(s.clone(), (diag.clone(), cone.clone()));
            Ok((diag, cone))
        }
    };
    let (c1, c2) = (cone_at.clone(), cone_at.clone());
    let (lr2, w2, cat2) = (lr.clone(), w.clone(), cat.clone());
    let object = ProObject::new(
        cat.clone(),
        "lim",
        lr.index().clone(),
        move |s| Ok(c1(s)?.1.apex),
        move |s, t| {
            let (_, from) = c2(s)?;
            let (dt, to) = c2(t)?;
            let legs = w2
                .objects
                .iter()
                .zip(&from.legs)
                .map(|(o, leg)| cat2.compose(&lr2.structure(o.id, s, t)?, leg))
                .collect::<Result<Vec<_>>>()?;
            cat2.limit_factor(
                &dt,
                &to,
                &Cone {
                    apex: from.apex,
                    legs,
                },
            )
        },
    );
    let mut legs = Vec::new();
    for (k, o) in w.objects.iter().enumerate() {
        let c = cone_at.clone();
        let level_leg = ProMap::levelwise(object.clone(), lr.pro_object(o.id)?, move |s| {
            Ok(c(s)?.1.legs[k].clone())
        });
        legs.push(lr.iso(o.id)?.1.after(&level_leg));
    }
    Ok(ProLimit {
        object,
        legs,
        level_rep: lr,
    })
}

/// Whether `cone` commutes with every arrow of the finite shape.
pub fn is_pro_cone<C: Category>(
    d: &DiagramOfPro<C>,
    cone: &ProCone<C>,
    budget: TruncationBudget,
) -> Result<Check> {
    let w = d.shape.window(budget.depth);
    let slot = |id: usize| w.objects.iter().position(|o| o.id == id).expect("object");
    for a in &w.arrows {
        let lhs = d.arrow(a)?.after(&cone.legs[slot(a.source)]);
        if !promap_equal(&lhs, &cone.legs[slot(a.target)], budget)?.is_equal() {
            return Ok(Check::new("cone", Verdict::Refuted, budget.depth)
                .with_witness(format!("leg fails to commute with {}", a.name)));
        }
    }
    Ok(Check::certified("cone", budget.depth))
}

/// For each cone: it is a cone, and exactly one bounded map into the limit
/// composes with the projections to give its legs.
pub fn verify_universal_limit<C: Category>(
    d: &DiagramOfPro<C>,
    object: &ProObject<C>,
    legs: &[ProMap<C>],
    cones: &[ProCone<C>],
    budget: TruncationBudget,
) -> Result<Certificate> {
    let mut cert = Certificate::new();
    for (k, cone) in cones.iter().enumerate() {
        let name = format!("cone {k}");
        let is_cone = is_pro_cone(d, cone, budget)?;
        if !is_cone.verdict.is_certified() {
            let mut c = is_cone;
            c.name = format!("{name}: rejected");
            cert.push(c);
            continue;
        }
        cert.push(factor_check(&name, object, legs, cone, budget)?);
    }
    Ok(cert)
}

fn factor_check<C: Category>(
    name: &str,
    object: &ProObject<C>,
    legs: &[ProMap<C>],
    cone: &ProCone<C>,
    budget: TruncationBudget,
) -> Result<Check> {
    let (sw, tw) = (
        cone.apex.window(budget.depth + budget.slack)?,
        object.window(budget.depth)?,
    );
    let homs = match hom_bounded(&sw, &tw, budget.node_cap) {
        Ok(h) => h,
        Err(ProError::Budget { .. }) => {
            return Ok(Check::new(name, Verdict::Exhausted, budget.depth))
        }
        Err(e) => return Err(e),
    };
    let mut survivors: Vec<ProMap<C>> = (0..homs.count())
        .map(|k| homs.family_map(k).to_promap(&sw, &tw, &cone.apex, object))
        .collect();
    // Distinct bounded maps may agree on shallow legs; look deeper before
    // declaring non-uniqueness.
    let mut check_depth = budget.depth;
    loop {
        let b = TruncationBudget {
            depth: check_depth,
            ..budget
        };
        let mut next = Vec::new();
        let mut undetermined = false;
        for u in &survivors {
            let mut all = true;
            for (leg, cl) in legs.iter().zip(&cone.legs) {
                match promap_equal(&leg.after(u), cl, b) {
                    Ok(eq) if eq.is_equal() => {}
                    Ok(_) => {
                        all = false;
                        break;
                    }
                    Err(ProError::Budget { .. }) => {
                        undetermined = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if all && !undetermined {
                next.push(u.clone());
            }
        }
        if undetermined {
            return Ok(Check::new(name, Verdict::Undetermined, check_depth)
                .with_witness("leg check reached past the window"));
        }
        survivors = next;
        match survivors.len() {
            0 => {
                return Ok(Check::new(name, Verdict::Refuted, budget.depth)
                    .with_witness("no factorization"))
            }
            1 => {
                return Ok(Check::certified(name, budget.depth)
                    .with_witness(format!("unique among {} bounded maps", homs.count())))
            }
            n if check_depth >= budget.depth + 2 * budget.slack + 4 => {
                return Ok(Check::new(name, Verdict::Refuted, check_depth)
                    .with_witness(format!("{n} factorizations")));
            }
            _ => check_depth += 1,
        }
    }
}

/// Random cones with constant apex: legs into the objects without incoming
/// arrows are drawn from the bounded hom sets, the rest are forced by
/// composing with arrows, and candidates that fail to commute are dropped.
pub fn random_constant_cones<C: Category>(
    d: &DiagramOfPro<C>,
    apex: &C::Obj,
    count: usize,
    rng: &mut impl Rng,
    budget: TruncationBudget,
) -> Result<Vec<ProCone<C>>> {
    let w = d.shape.window(budget.depth);
    let first = d.object(w.objects[0].id)?;
    let apex_p = ProObject::constant(first.cat().clone(), apex.clone());
    let aw = apex_p.window(0)?;
    let sources: Vec<usize> = w
        .objects
        .iter()
        .filter(|o| w.arrows_into(o.id).next().is_none())
        .map(|o| o.id)
        .collect();
    let mut options: HashMap<usize, Vec<ProMap<C>>> = HashMap::new();
    let need = pulled_back_levels(d, &w, budget.depth)?;
    for &id in &sources {
        let x = d.object(id)?;
        let xw = x.window(need[&id] + budget.slack)?;
        let h = hom_bounded(&aw, &xw, budget.node_cap)?;
        options.insert(
            id,
            (0..h.count())
                .map(|k| h.family_map(k).to_promap(&aw, &xw, &apex_p, &x))
                .collect(),
        );
    }
    let mut out = Vec::new();
    if options.values().any(Vec::is_empty) {
        return Ok(out);
    }
    for _ in 0..count * 20 {
        if out.len() == count {
            break;
        }
        let mut legs: HashMap<usize, ProMap<C>> = HashMap::new();
        for &id in &sources {
            let opts = &options[&id];
            legs.insert(id, opts[rng.gen_range(0..opts.len())].clone());
        }
        for id in w.by_grade().into_iter().rev() {
            if legs.contains_key(&id) {
                continue;
            }
            let a = w
                .arrows_into(id)
                .next()
                .expect("non-source has an incoming arrow");
            let leg = d.arrow(a)?.after(&legs[&a.source]);
            legs.insert(id, leg);
        }
        let cone = ProCone {
            apex: apex_p.clone(),
            legs: w.objects.iter().map(|o| legs[&o.id].clone()).collect(),
        };
        if is_pro_cone(d, &cone, budget)?.verdict.is_certified() {
            out.push(cone);
        }
    }
    Ok(out)
}

/// For each object, the deepest level that arrow representatives reach
/// from target levels up to `depth`, followed back along every chain of
/// arrows in the window.
pub(crate) fn pulled_back_levels<C: Category>(
    d: &DiagramOfPro<C>,
    w: &ShapeWindow,
    depth: usize,
) -> Result<HashMap<usize, usize>> {
    let mut need: HashMap<usize, usize> = w.objects.iter().map(|o| (o.id, depth)).collect();
    for _ in 0..w.objects.len() {
        let mut changed = false;
        for a in &w.arrows {
            let (f, x) = (d.arrow(a)?, d.object(a.source)?);
            for t in d.object(a.target)?.index().window(need[&a.target]) {
                let u = x.index().level(&f.rep(&t)?.0);
                if u > need[&a.source] {
                    need.insert(a.source, u);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(need)
}

#[cfg(test)]
mod tests;

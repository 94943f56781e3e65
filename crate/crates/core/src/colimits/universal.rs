use crate::base::Category;
use crate::index::{DirectedIndex, ShapeWindow, TruncationBudget};
use crate::pro::{
    hom_bounded, promap_equal, BoundedHom, DiagramOfPro, ProMap, ProObject, ProWindow,
};
use crate::{Certificate, Check, ProError, Result, Verdict};
use rand::Rng;
use std::collections::HashMap;

/// A cocone under a diagram of pro-objects, legs in shape-window order.
pub struct ProCocone<C: Category> {
    pub apex: ProObject<C>,
    pub legs: Vec<ProMap<C>>,
}

impl<C: Category> Clone for ProCocone<C> {
    fn clone(&self) -> Self {
        ProCocone {
            apex: self.apex.clone(),
            legs: self.legs.clone(),
        }
    }
}

/// Whether `cocone` commutes with every arrow of the shape window.
pub fn is_pro_cocone<C: Category>(
    d: &DiagramOfPro<C>,
    cocone: &ProCocone<C>,
    budget: TruncationBudget,
) -> Result<Check> {
    let w = d.shape.window(budget.depth);
    let slot = |id: usize| w.objects.iter().position(|o| o.id == id).expect("object");
    for a in &w.arrows {
        let lhs = cocone.legs[slot(a.target)].after(&d.arrow(a)?);
        if !promap_equal(&lhs, &cocone.legs[slot(a.source)], budget)?.is_equal() {
            return Ok(Check::new("cocone", Verdict::Refuted, budget.depth)
                .with_witness(format!("leg fails to commute with {}", a.name)));
        }
    }
    Ok(Check::certified("cocone", budget.depth))
}

/// The family of colimit classes of `g` over the target window, as an index
/// into `h.families`.
/// Families whose classes all have a representative below the deepest
/// level of the source window. Classes seen only at that level may merge
/// one level further down, so they are left out on both sides; an index
/// with nothing past the window has no such level.
fn interior<C: Category>(
    src: &ProWindow<C>,
    index: &dyn DirectedIndex,
    h: &BoundedHom<C>,
) -> Vec<bool> {
    let top = src.labels.iter().map(|l| index.level(l)).max().unwrap_or(0);
    if index.window(top + 1).len() == src.len() {
        return vec![true; h.families.len()];
    }
    h.families
        .iter()
        .map(|f| {
            f.iter()
                .enumerate()
                .all(|(s, &c)| index.level(&src.labels[h.per_target[s].reps[c].0]) < top)
        })
        .collect()
}

fn identify<C: Category>(
    g: &ProMap<C>,
    src: &ProWindow<C>,
    tgt: &ProWindow<C>,
    h: &BoundedHom<C>,
) -> Result<Option<usize>> {
    let mut fam = Vec::with_capacity(tgt.len());
    for (s, label) in tgt.labels.iter().enumerate() {
        let (t, m) = g.rep(label)?;
        let Some(p) = src.position(&t) else {
            return Ok(None);
        };
        match h.per_target[s].class_of(p, &m) {
            Some(c) => fam.push(c),
            None => return Ok(None),
        }
    }
    Ok(h.families.binary_search(&fam).ok())
}

fn deepest<C: Category>(maps: &[ProMap<C>], tgt: &ProWindow<C>) -> Result<usize> {
    let mut d = 0;
    for g in maps {
        for l in &tgt.labels {
            d = d.max(g.source.index().level(&g.rep(l)?.0));
        }
    }
    Ok(d)
}

enum Outcome {
    Bijective {
        homs: usize,
        families: usize,
        unique: bool,
    },
    Short {
        homs: usize,
        families: usize,
        reason: String,
    },
}

/// For each cocone `W`: composing with the injections is a bijection from
/// the bounded classes of `Hom(Z, W)` onto the compatible families of
/// classes in `Hom(X^a, W)`, and the cocone's own family has exactly one
/// preimage. A failed bijection is retried with a deeper window of `Z`
/// before it counts.
pub fn verify_universal_colimit<C: Category>(
    d: &DiagramOfPro<C>,
    object: &ProObject<C>,
    legs: &[ProMap<C>],
    cocones: &[ProCocone<C>],
    budget: TruncationBudget,
) -> Result<Certificate> {
    let w = d.shape.window(budget.depth);
    let mut cert = Certificate::new();
    for (k, cocone) in cocones.iter().enumerate() {
        let name = format!("cocone {k}");
        let c = is_pro_cocone(d, cocone, budget)?;
        if !c.verdict.is_certified() {
            let mut c = c;
            c.name = format!("{name}: rejected");
            cert.push(c);
            continue;
        }
        let mut extra = 0;
        let check = loop {
            match interchange(
                d,
                &w,
                object,
                legs,
                cocone,
                budget,
                budget.depth + budget.slack + extra,
            ) {
                Ok(Outcome::Bijective {
                    homs,
                    families,
                    unique,
                }) => {
                    let v = if unique {
                        Verdict::Certified
                    } else {
                        Verdict::Refuted
                    };
                    break Check::new(&name, v, budget.depth)
                        .with_witness(format!("{homs} classes of maps out of the colimit, {families} compatible families"))
                        .with_witness(if unique { "the cocone factors uniquely" } else { "the cocone does not factor uniquely" });
                }
                Ok(Outcome::Short {
                    homs,
                    families,
                    reason,
                }) => {
                    if extra >= 4 * budget.slack.max(1) {
                        break Check::new(
                            &name,
                            Verdict::Refuted,
                            budget.depth + budget.slack + extra,
                        )
                        .with_witness(format!(
                            "{homs} classes against {families} families: {reason}"
                        ));
                    }
                    extra += budget.slack.max(1);
                }
                Err(ProError::Budget { .. }) => {
                    break Check::new(&name, Verdict::Exhausted, budget.depth)
                }
                Err(e) => return Err(e),
            }
        };
        cert.push(check);
    }
    Ok(cert)
}

fn interchange<C: Category>(
    d: &DiagramOfPro<C>,
    w: &ShapeWindow,
    object: &ProObject<C>,
    legs: &[ProMap<C>],
    cocone: &ProCocone<C>,
    budget: TruncationBudget,
    z_depth: usize,
) -> Result<Outcome> {
    let ww = cocone.apex.window(budget.depth)?;
    let zw = object.window(z_depth)?;
    let hz = hom_bounded(&zw, &ww, budget.node_cap)?;
    let keep = interior(&zw, object.index().as_ref(), &hz);
    let us: Vec<ProMap<C>> = (0..hz.count())
        .filter(|&k| keep[k])
        .map(|k| hz.family_map(k).to_promap(&zw, &ww, object, &cocone.apex))
        .collect();
    let slot = |id: usize| w.objects.iter().position(|o| o.id == id).expect("object");

    // Windows of each X^a deep enough for every composite, targets first.
    let mut windows: HashMap<usize, ProWindow<C>> = HashMap::new();
    let mut homs: HashMap<usize, BoundedHom<C>> = HashMap::new();
    let mut inner: HashMap<usize, Vec<bool>> = HashMap::new();
    for id in w.by_grade() {
        let a = slot(id);
        let x = d.object(id)?;
        let mut composites: Vec<ProMap<C>> = us.iter().map(|u| u.after(&legs[a])).collect();
        composites.push(cocone.legs[a].clone());
        let mut need = budget.depth.max(deepest(&composites, &ww)?);
        for f in w.arrows_from(id) {
            let phi = d.arrow(f)?;
            need = need.max(deepest(&[phi], &windows[&f.target])?);
        }
        let xw = x.window(need + budget.slack)?;
        let h = hom_bounded(&xw, &ww, budget.node_cap)?;
        inner.insert(id, interior(&xw, x.index().as_ref(), &h));
        homs.insert(id, h);
        windows.insert(id, xw);
    }

    // table[arrow][k_b] = class of (k_b . X(phi)) in Hom(X^a, W).
    let mut table: HashMap<usize, Vec<Option<usize>>> = HashMap::new();
    for f in &w.arrows {
        let phi = d.arrow(f)?;
        let xb = d.object(f.target)?;
        let (wa, wb) = (&windows[&f.source], &windows[&f.target]);
        let hb = &homs[&f.target];
        let mut row = Vec::with_capacity(hb.count());
        for kb in 0..hb.count() {
            let g = hb
                .family_map(kb)
                .to_promap(wb, &ww, &xb, &cocone.apex)
                .after(&phi);
            row.push(identify(&g, wa, &ww, &homs[&f.source])?);
        }
        table.insert(f.id, row);
    }

    // Compatible families: free choices at objects without outgoing arrows,
    // the rest forced through any outgoing arrow and checked on all.
    let order = w.by_grade();
    let mut families: Vec<Vec<usize>> = Vec::new();
    let mut choice: Vec<Option<usize>> = vec![None; w.objects.len()];
    #[allow(clippy::too_many_arguments)]
    fn rec<C: Category>(
        w: &ShapeWindow,
        order: &[usize],
        i: usize,
        homs: &HashMap<usize, BoundedHom<C>>,
        inner: &HashMap<usize, Vec<bool>>,
        table: &HashMap<usize, Vec<Option<usize>>>,
        choice: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        let slot = |id: usize| w.objects.iter().position(|o| o.id == id).expect("object");
        if i == order.len() {
            if out.len() >= cap {
                return Err(ProError::budget("compatible families of classes", cap));
            }
            out.push(choice.iter().map(|c| c.expect("assigned")).collect());
            return Ok(());
        }
        let id = order[i];
        let mut forced: Option<usize> = None;
        for f in w.arrows_from(id) {
            let Some(kb) = choice[slot(f.target)] else {
                continue;
            };
            match table[&f.id][kb] {
                None => return Ok(()),
                Some(ka) if forced.is_some_and(|x| x != ka) => return Ok(()),
                Some(ka) => forced = Some(ka),
            }
        }
        let options: Vec<usize> = match forced {
            Some(k) if inner[&id][k] => vec![k],
            Some(_) => vec![],
            None => (0..homs[&id].count()).filter(|&k| inner[&id][k]).collect(),
        };
        for k in options {
            choice[slot(id)] = Some(k);
            rec(w, order, i + 1, homs, inner, table, choice, out, cap)?;
        }
        choice[slot(id)] = None;
        Ok(())
    }
    rec(
        w,
        &order,
        0,
        &homs,
        &inner,
        &table,
        &mut choice,
        &mut families,
        budget.node_cap,
    )?;
    families.sort();

    let mut hit = vec![0usize; families.len()];
    for u in &us {
        let mut fam = vec![0usize; w.objects.len()];
        for o in &w.objects {
            let a = slot(o.id);
            match identify(&u.after(&legs[a]), &windows[&o.id], &ww, &homs[&o.id])? {
                Some(k) => fam[a] = k,
                None => {
                    return Ok(Outcome::Short {
                        homs: us.len(),
                        families: families.len(),
                        reason: "a composite left the windows".into(),
                    })
                }
            }
        }
        match families.binary_search(&fam) {
            Ok(p) => hit[p] += 1,
            Err(_) => {
                return Ok(Outcome::Short {
                    homs: us.len(),
                    families: families.len(),
                    reason: "a composite is not a compatible family".into(),
                })
            }
        }
    }
    if hit.iter().any(|&n| n != 1) {
        let reason = if hit.iter().any(|&n| n == 0) {
            "a family has no preimage"
        } else {
            "two maps give one family"
        };
        return Ok(Outcome::Short {
            homs: us.len(),
            families: families.len(),
            reason: reason.into(),
        });
    }
    let mut own = vec![0usize; w.objects.len()];
    let mut unique = true;
    for o in &w.objects {
        let a = slot(o.id);
        match identify(&cocone.legs[a], &windows[&o.id], &ww, &homs[&o.id])? {
            Some(k) => own[a] = k,
            None => unique = false,
        }
    }
    unique = unique && families.binary_search(&own).is_ok();
    Ok(Outcome::Bijective {
        homs: us.len(),
        families: families.len(),
        unique,
    })
}

/// Random cocones with constant apex: legs out of the objects without
/// outgoing arrows are drawn from the bounded hom sets, the rest are forced
/// by precomposing with arrows, and candidates that fail to commute are
/// dropped.
pub fn random_constant_cocones<C: Category>(
    d: &DiagramOfPro<C>,
    apex: &C::Obj,
    count: usize,
    rng: &mut impl Rng,
    budget: TruncationBudget,
) -> Result<Vec<ProCocone<C>>> {
    let w = d.shape.window(budget.depth);
    let first = d.object(w.objects[0].id)?;
    let apex_p = ProObject::constant(first.cat().clone(), apex.clone());
    let aw = apex_p.window(0)?;
    let sinks: Vec<usize> = w
        .objects
        .iter()
        .filter(|o| w.arrows_from(o.id).next().is_none())
        .map(|o| o.id)
        .collect();
    let mut options: HashMap<usize, Vec<ProMap<C>>> = HashMap::new();
    for &id in &sinks {
        let x = d.object(id)?;
        let xw = x.window(budget.depth + budget.slack)?;
        let h = hom_bounded(&xw, &aw, budget.node_cap)?;
        options.insert(
            id,
            (0..h.count())
                .map(|k| h.family_map(k).to_promap(&xw, &aw, &x, &apex_p))
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
        for &id in &sinks {
            let opts = &options[&id];
            legs.insert(id, opts[rng.gen_range(0..opts.len())].clone());
        }
        for id in w.by_grade() {
            if legs.contains_key(&id) {
                continue;
            }
            let a = w
                .arrows_from(id)
                .next()
                .expect("non-sink has an outgoing arrow");
            let leg = legs[&a.target].after(&d.arrow(a)?);
            legs.insert(id, leg);
        }
        let cocone = ProCocone {
            apex: apex_p.clone(),
            legs: w.objects.iter().map(|o| legs[&o.id].clone()).collect(),
        };
        if is_pro_cocone(d, &cocone, budget)?.verdict.is_certified() {
            out.push(cocone);
        }
    }
    Ok(out)
}

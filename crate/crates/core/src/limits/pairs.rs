use super::cofiltered::{CofilteredLimit, DirectedDiagram};
use crate::base::Category;
use crate::index::{nth_element, DirectedIndex, Ix, Product, TruncationBudget};
use crate::pro::{compose_window_maps, hom_classes, maps_equal, ProWindow, WArrow, WindowMap};
use crate::{Certificate, Check, ProError, Result, Verdict};

/// The limit over the category of pairs `(a, s)` with `s` in the index of
/// `X^a`. Arrows `(a, s) -> (b, t)` are the base maps `X^a_s -> X^b_t`
/// whose colimit class is that of `X^a -> X^b` at `t`; distinct maps in one
/// class give parallel arrows, so the index is not a poset.
pub struct PairLimit<C: Category> {
    pub diagram: DirectedDiagram<C>,
}

/// Labels are `(position of a, position of s)`.
pub fn cofiltered_limit_alt<C: Category>(d: &DirectedDiagram<C>) -> Result<PairLimit<C>> {
    let x = d.object(&d.index.bottom())?;
    if x.cat()
        .hom(
            &x.level(&x.index().bottom())?,
            &x.level(&x.index().bottom())?,
        )
        .is_err()
    {
        return Err(ProError::Unsupported(
            "pair category needs enumerable hom sets".into(),
        ));
    }
    Ok(PairLimit { diagram: d.clone() })
}

fn position(index: &dyn DirectedIndex, s: &Ix) -> Result<usize> {
    index
        .window(index.level(s))
        .iter()
        .position(|x| x == s)
        .ok_or_else(|| ProError::Invalid(format!("{s} is not in {}", index.describe())))
}

impl<C: Category> PairLimit<C> {
    /// `(a, s)` for a label.
    pub fn decode(&self, label: &Ix) -> Result<(Ix, Ix)> {
        let a = self.diagram.label(label.0[0])?;
        let x = self.diagram.object(&a)?;
        let s = nth_element(x.index().as_ref(), label.0[1])
            .ok_or_else(|| ProError::Invalid(format!("bad label {label}")))?;
        Ok((a, s))
    }

    pub fn encode(&self, a: &Ix, s: &Ix) -> Result<Ix> {
        let x = self.diagram.object(a)?;
        Ok(Ix(vec![
            self.diagram.position(a)?,
            position(x.index().as_ref(), s)?,
        ]))
    }

    /// All pairs with `a` and `s` in the depth-`depth` windows and every
    /// arrow between them. Colimit classes are decided on windows of `X^a`
    /// reaching `slack` levels past the deepest representative.
    pub fn window(&self, depth: usize, slack: usize) -> Result<ProWindow<C>> {
        let d = &self.diagram;
        let a_win = d.index.window(depth);
        let mut labels = Vec::new();
        let mut objects = Vec::new();
        let mut groups: Vec<(Ix, Vec<Ix>)> = Vec::new();
        for a in &a_win {
            let x = d.object(a)?;
            let ss = x.index().window(depth);
            for s in &ss {
                labels.push(self.encode(a, s)?);
                objects.push(x.level(s)?);
            }
            groups.push((a.clone(), ss));
        }
        let cat = d.object(&a_win[0])?.cat().clone();
        let mut arrows = Vec::new();
        let mut offset_a = 0;
        for (a, ss) in &groups {
            let x = d.object(a)?;
            let mut offset_b = 0;
            for (b, tt) in &groups {
                if !d.index.le(b, a) {
                    offset_b += tt.len();
                    continue;
                }
                let phi = d.arrow(a, b)?;
                let y = d.object(b)?;
                for (j, t) in tt.iter().enumerate() {
                    let (u, m) = phi.rep(t)?;
                    let xw = ProWindow::of(&x, depth.max(x.index().level(&u)) + slack)?;
                    let classes = hom_classes(&xw, &y.level(t)?)?;
                    let pu = xw
                        .position(&u)
                        .ok_or_else(|| ProError::Invalid("representative outside window".into()))?;
                    let target_class = classes.class_of(pu, &m);
                    for (i, s) in ss.iter().enumerate() {
                        let ps = xw.position(s).expect("window is prefix-stable");
                        for h in cat.hom(&x.level(s)?, &y.level(t)?)? {
                            if a == b && s == t && h == cat.identity(&y.level(t)?) {
                                continue;
                            }
                            if classes.class_of(ps, &h) == target_class {
                                arrows.push(WArrow {
                                    source: offset_a + i,
                                    target: offset_b + j,
                                    map: h,
                                });
                            }
                        }
                    }
                }
                offset_b += tt.len();
            }
            offset_a += ss.len();
        }
        ProWindow::from_parts(cat, labels, objects, arrows)
    }

    /// Whether two arrows of the window share source and target.
    pub fn has_parallel(&self, depth: usize, slack: usize) -> Result<bool> {
        let w = self.window(depth, slack)?;
        Ok((0..w.len()).any(|u| (0..w.len()).any(|t| w.arrows_between(u, t).nth(1).is_some())))
    }
}

/// Every pair among the first `inner` objects has a common source with
/// arrows to both, and every parallel pair out of them is equalized.
pub fn check_cofiltered<C: Category>(
    w: &ProWindow<C>,
    inner: usize,
    depth: usize,
) -> Result<Check> {
    let inner = inner.min(w.len());
    for p in 0..inner {
        for q in 0..inner {
            if !(0..w.len()).any(|u| {
                w.arrows_between(u, p).next().is_some() && w.arrows_between(u, q).next().is_some()
            }) {
                return Ok(
                    Check::new("cofiltered", Verdict::Undetermined, depth).with_witness(format!(
                        "no common source for {} and {} in the window",
                        w.labels[p], w.labels[q]
                    )),
                );
            }
        }
    }
    for u in 0..inner {
        for t in 0..w.len() {
            let par: Vec<&WArrow<C::Map>> = w.arrows_between(u, t).collect();
            for (i, f) in par.iter().enumerate() {
                for g in &par[i + 1..] {
                    if w.equalize(&w.cat, u, &f.map, u, &g.map)?.is_none() {
                        return Ok(Check::new("cofiltered", Verdict::Undetermined, depth)
                            .with_witness(format!(
                                "parallel pair {} -> {} not equalized in the window",
                                w.labels[u], w.labels[t]
                            )));
                    }
                }
            }
        }
    }
    Ok(Check::certified("cofiltered", depth).with_witness(format!("{inner} objects")))
}

/// The comparison between the two constructions: identity representatives
/// one way, structure maps the other, each composite checked against the
/// identity on depth-`budget.depth` windows.
pub fn compare_limits<C: Category>(
    prod: &CofilteredLimit<C>,
    alt: &PairLimit<C>,
    budget: TruncationBudget,
) -> Result<Certificate> {
    let depth = budget.depth;
    let slack = budget.slack;
    let lr = &prod.level_rep;
    let pindex = prod.object.index().clone();
    let product = Product::new(vec![prod.diagram.index.clone(), lr.index().clone()]);
    let cat = lr.cat()?;

    // phi: alt -> prod. The prod level (a, s) is X^a at f^a(s).
    let phi_rep = |label: &Ix| -> Result<(Ix, C::Map)> {
        let parts = product.split(label);
        let id = prod.diagram.position(&parts[0])?;
        let fs = lr.f(id, &parts[1])?;
        let o = lr.level(id, &parts[1])?;
        Ok((alt.encode(&parts[0], &fs)?, cat.identity(&o)))
    };
    // psi: prod -> alt, through the least s with f^a(s) above the target.
    let psi_rep = |label: &Ix| -> Result<(Ix, C::Map)> {
        let (a, s) = alt.decode(label)?;
        let id = prod.diagram.position(&a)?;
        let x = prod.diagram.object(&a)?;
        for k in 0..budget.node_cap {
            let i = nth_element(lr.index().as_ref(), k)
                .ok_or_else(|| ProError::Invalid("index ended".into()))?;
            let fi = lr.f(id, &i)?;
            if x.index().le(&s, &fi) {
                return Ok((Product::join(&[a.clone(), i]), x.structure(&fi, &s)?));
            }
        }
        Err(ProError::budget(
            format!("level above {s}"),
            budget.node_cap,
        ))
    };
    let alt_level = |label: &Ix| -> Result<usize> {
        let (a, s) = alt.decode(label)?;
        Ok(prod
            .diagram
            .index
            .level(&a)
            .max(prod.diagram.object(&a)?.index().level(&s)))
    };

    let map_on = |src: &ProWindow<C>,
                  tgt: &ProWindow<C>,
                  rep: &dyn Fn(&Ix) -> Result<(Ix, C::Map)>|
     -> Result<WindowMap<C>> {
        let mut reps = Vec::with_capacity(tgt.len());
        for l in &tgt.labels {
            let (u, m) = rep(l)?;
            reps.push(src.position(&u).map(|p| (p, m)));
        }
        Ok(WindowMap { reps })
    };

    let mut cert = Certificate::new();

    // psi . phi on the pair side.
    let a_small = alt.window(depth, slack)?;
    let mut need = depth;
    for l in &a_small.labels {
        need = need.max(pindex.level(&psi_rep(l)?.0));
    }
    let p_mid = prod.object.window(need)?;
    let mut need2 = need;
    for l in &p_mid.labels {
        need2 = need2.max(alt_level(&phi_rep(l)?.0)?);
    }
    let a_big = alt.window(need2 + slack, slack)?;
    let psi = map_on(&p_mid, &a_small, &psi_rep)?;
    let phi = map_on(&a_big, &p_mid, &phi_rep)?;
    let comp = compose_window_maps(&cat, &psi, &phi)?;
    let eq = maps_equal(
        &a_big,
        &a_small,
        &comp,
        &WindowMap::identity(&a_big, &a_small),
        depth,
    )?;
    cert.push(eq.to_check("psi.phi = 1 on pairs"));

    // phi . psi on the product side.
    let p_small = prod.object.window(depth)?;
    let mut need = depth;
    for l in &p_small.labels {
        need = need.max(alt_level(&phi_rep(l)?.0)?);
    }
    let a_mid = alt.window(need, slack)?;
    let mut need2 = need;
    for l in &a_mid.labels {
        need2 = need2.max(pindex.level(&psi_rep(l)?.0));
    }
    let p_big = prod.object.window(need2 + slack)?;
    let phi = map_on(&a_mid, &p_small, &phi_rep)?;
    let psi = map_on(&p_big, &a_mid, &psi_rep)?;
    let comp = compose_window_maps(&cat, &phi, &psi)?;
    let eq = maps_equal(
        &p_big,
        &p_small,
        &comp,
        &WindowMap::identity(&p_big, &p_small),
        depth,
    )?;
    cert.push(eq.to_check("phi.psi = 1 on A x I"));
    Ok(cert)
}

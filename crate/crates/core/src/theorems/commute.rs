//! Cofiltered limits against finite colimits, for a tower `A = N` of
//! diagrams of shape `B`, read off one level representation over
//! `(N x B) x I`.

use crate::base::{Category, Cocone, FiniteDiagram};
use crate::index::{
    Chain, ChainShape, DirectedIndex, FiniteShape, Ix, Product, ProductShape, ShapeArrow,
    TruncationBudget,
};
use crate::levelrep::{level_replace, LevelRepresentation};
use crate::limits::{cofiltered_limit, CofilteredLimit, DirectedDiagram};
use crate::pro::{certify_iso, promap_equal, DiagramOfPro, ProMap, ProObject};
use crate::{Certificate, Check, ProError, Result, Verdict};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// A diagram over `N x B` from its objects `X^{a,b}` and, for `a >= a'`
/// and `phi: b -> b'` (`None` for the identity of `b`), the maps
/// `X^{a,b} -> X^{a',b'}`.
pub fn tower_of_diagrams<C: Category>(
    b: FiniteShape,
    object: impl Fn(usize, usize) -> Result<ProObject<C>> + Send + Sync + 'static,
    arrow: impl Fn(usize, usize, Option<&ShapeArrow>, usize) -> Result<ProMap<C>>
        + Send
        + Sync
        + 'static,
) -> DiagramOfPro<C> {
    let bw = b.shape().clone();
    DiagramOfPro::new(
        Arc::new(ProductShape::new(Arc::new(ChainShape), Arc::new(b))),
        move |id| {
            let (a, b) = ProductShape::unpair(id);
            object(a, b)
        },
        move |arr| {
            let (src, tgt) = (
                ProductShape::unpair(arr.source),
                ProductShape::unpair(arr.target),
            );
            let (_, cb) = ProductShape::components(arr.id);
            let phi = match cb {
                Ok(p) => Some(
                    bw.arrow(p)
                        .ok_or_else(|| ProError::Invalid(format!("no arrow {p} in B")))?,
                ),
                Err(_) => None,
            };
            arrow(src.0, tgt.0, phi, src.1)
        },
    )
}

/// Id of the product arrow `(n -> m, phi)`, `phi = Err(b)` the identity.
fn product_arrow(n: usize, m: usize, phi: std::result::Result<usize, usize>) -> usize {
    let ca = if n == m {
        2 * n
    } else {
        2 * ChainShape::arrow_id(n, m) + 1
    };
    let cb = match phi {
        Ok(p) => 2 * p + 1,
        Err(b) => 2 * b,
    };
    crate::index::cantor(ca, cb)
}

type ColimMemo<C> = Arc<Mutex<HashMap<(usize, Ix), (FiniteDiagram<C>, Cocone<C>)>>>;

/// `X~^phi_s` for `phi = (n -> m, psi)` out of `(n, b)`, growing the
/// cached shape window to reach row `n` first.
fn vertical<C: Category>(
    lr: &LevelRepresentation<C>,
    n: usize,
    b: usize,
    m: usize,
    psi: std::result::Result<usize, usize>,
    s: &Ix,
) -> Result<C::Map> {
    lr.shape_for(ProductShape::object_id(n, b))?;
    lr.vertical(product_arrow(n, m, psi), s)
}

/// `colim_b X~^{a,b}_s`, memoized.
struct Rows<C: Category> {
    lr: LevelRepresentation<C>,
    b: Arc<FiniteShape>,
    memo: ColimMemo<C>,
}

impl<C: Category> Clone for Rows<C> {
    fn clone(&self) -> Self {
        Rows {
            lr: self.lr.clone(),
            b: self.b.clone(),
            memo: self.memo.clone(),
        }
    }
}

impl<C: Category> Rows<C> {
    fn id(a: usize, b: usize) -> usize {
        ProductShape::object_id(a, b)
    }

    fn slot(&self, b: usize) -> usize {
        self.b
            .shape()
            .objects
            .iter()
            .position(|o| o.id == b)
            .expect("object of B")
    }

    fn colim(&self, a: usize, s: &Ix) -> Result<(FiniteDiagram<C>, Cocone<C>)> {
        let key = (a, s.clone());
        if let Some(v) = self.memo.lock().expect("memo").get(&key) {
            return Ok(v.clone());
        }
        let w = self.b.shape();
        let objects = w
            .objects
            .iter()
            .map(|o| self.lr.level(Self::id(a, o.id), s))
            .collect::<Result<Vec<_>>>()?;
        let mut d = FiniteDiagram::new(objects);
        for p in &w.arrows {
            d = d.arrow(
                self.slot(p.source),
                self.slot(p.target),
                vertical(&self.lr, a, p.source, a, Ok(p.id), s)?,
            );
        }
        let c = self.lr.cat()?.colimit(&d)?;
        self.memo
            .lock()
            .expect("memo")
            .insert(key, (d.clone(), c.clone()));
        Ok((d, c))
    }

    /// `Z^a_s -> Z^{a'}_t` induced by `X~^{a,b}_s -> X~^{a',b}_t`.
    fn map(&self, a: usize, s: &Ix, a2: usize, t: &Ix) -> Result<C::Map> {
        let cat = self.lr.cat()?;
        let (d, from) = self.colim(a, s)?;
        let (_, to) = self.colim(a2, t)?;
        let mut legs = Vec::new();
        for (o, leg) in self.b.shape().objects.iter().zip(&to.legs) {
            let down = self.lr.structure(Self::id(a, o.id), s, t)?;
            let m = if a == a2 {
                down
            } else {
                cat.compose(&vertical(&self.lr, a, o.id, a2, Err(o.id), t)?, &down)?
            };
            legs.push(cat.compose(leg, &m)?);
        }
        cat.colimit_factor(
            &d,
            &from,
            &Cocone {
                apex: to.apex,
                legs,
            },
        )
    }

    fn row(&self, a: usize) -> Result<ProObject<C>> {
        let (r1, r2) = (self.clone(), self.clone());
        Ok(ProObject::new(
            self.lr.cat()?,
            format!("colim_B X^{a}"),
            self.lr.index().clone(),
            move |s| Ok(r1.colim(a, s)?.1.apex),
            move |s, t| r2.map(a, s, a, t),
        ))
    }

    /// The single pro-object `(a, s) -> colim_b X~^{a,b}_s` over `N x I`.
    fn formula(&self) -> Result<ProObject<C>> {
        let product = Product::new(vec![Arc::new(Chain), self.lr.index().clone()]);
        let (r1, r2) = (self.clone(), self.clone());
        let (p1, p2) = (product.clone(), product.clone());
        Ok(ProObject::new(
            self.lr.cat()?,
            "colim_b X~^{a,b}_s",
            Arc::new(product),
            move |x| {
                let p = p1.split(x);
                Ok(r1.colim(p[0].0[0], &p[1])?.1.apex)
            },
            move |x, y| {
                let (p, q) = (p2.split(x), p2.split(y));
                r2.map(p[0].0[0], &p[1], q[0].0[0], &q[1])
            },
        ))
    }
}

/// Both sides, the formula, and the certificate.
pub struct Commutation<C: Category> {
    pub lim_colim: CofilteredLimit<C>,
    pub colim_lim: ProObject<C>,
    pub formula: ProObject<C>,
    pub comparison: ProMap<C>,
    pub certificate: Certificate,
}

/// `d` must be a diagram over `N x B` as built by [`tower_of_diagrams`].
pub fn check_commute<C: Category>(
    d: &DiagramOfPro<C>,
    b: &FiniteShape,
    budget: TruncationBudget,
) -> Result<Commutation<C>> {
    let lr = level_replace(d, budget)?;
    let rows = Rows {
        lr: lr.clone(),
        b: Arc::new(b.clone()),
        memo: Arc::default(),
    };
    let cat = lr.cat()?;
    let bw = b.shape().clone();

    // lim_a colim_b: the tower of levelwise colimits.
    let (r1, r2) = (rows.clone(), rows.clone());
    let tower = DirectedDiagram::tower(
        move |a| r1.row(a),
        move |a| {
            let r = r2.clone();
            Ok(ProMap::levelwise(r2.row(a + 1)?, r2.row(a)?, move |s| {
                r.map(a + 1, s, a, s)
            }))
        },
    );
    let lim_colim = cofiltered_limit(&tower, budget)?;

    // colim_b lim_a: one cofiltered limit per object of B, then levelwise
    // colimits on the shared index.
    let mut lims = Vec::new();
    for o in &bw.objects {
        let (b, l1, l2) = (o.id, lr.clone(), lr.clone());
        let t = DirectedDiagram::tower(
            move |a| l1.pro_object(ProductShape::object_id(a, b)),
            move |a| {
                let (source, target) = (
                    ProductShape::object_id(a + 1, b),
                    ProductShape::object_id(a, b),
                );
                l2.shape_for(source)?;
                l2.vertical_map(&ShapeArrow {
                    id: product_arrow(a + 1, a, Err(b)),
                    source,
                    target,
                    name: format!("{}->{a}", a + 1),
                })
            },
        );
        lims.push(cofiltered_limit(&t, budget)?);
    }
    let lims = Arc::new(lims);
    let product = Product::new(vec![Arc::new(Chain), lr.index().clone()]);
    let memo: ColimMemo<C> = Arc::default();
    let colim_at = {
        let (lims, bw, lr, memo, product) = (
            lims.clone(),
            bw.clone(),
            lr.clone(),
            memo.clone(),
            product.clone(),
        );
        Arc::new(move |x: &Ix| -> Result<(FiniteDiagram<C>, Cocone<C>)> {
            let key = (0, x.clone());
            if let Some(v) = memo.lock().expect("memo").get(&key) {
                return Ok(v.clone());
            }
            let cat = lr.cat()?;
            let (a, s) = {
                let p = product.split(x);
                (p[0].0[0], p[1].clone())
            };
            let objects = lims
                .iter()
                .map(|l| l.object.level(x))
                .collect::<Result<Vec<_>>>()?;
            let slot = |b: usize| {
                bw.objects
                    .iter()
                    .position(|o| o.id == b)
                    .expect("object of B")
            };
            let mut d = FiniteDiagram::new(objects);
            for p in &bw.arrows {
                let (i, j) = (slot(p.source), slot(p.target));
                let (ti, tj) = (lims[i].level_rep.f(a, &s)?, lims[j].level_rep.f(a, &s)?);
                if !lr.index().le(&tj, &ti) {
                    return Err(ProError::verification(
                        "colim lim",
                        format!("levels {ti} and {tj} of the limits at {x}"),
                    ));
                }
                let down = lr.structure(ProductShape::object_id(a, p.source), &ti, &tj)?;
                let across = vertical(&lr, a, p.source, a, Ok(p.id), &tj)?;
                d = d.arrow(i, j, cat.compose(&across, &down)?);
            }
            let c = cat.colimit(&d)?;
            memo.lock()
                .expect("memo")
                .insert(key, (d.clone(), c.clone()));
            Ok((d, c))
        })
    };
    let (c1, c2, lims2) = (colim_at.clone(), colim_at.clone(), lims.clone());
    let cat2 = cat.clone();
    let colim_lim = ProObject::new(
        cat.clone(),
        "colim_b lim_a X^{a,b}",
        Arc::new(product.clone()),
        move |x| Ok(c1(x)?.1.apex),
        move |x, y| {
            let (d, from) = c2(x)?;
            let (_, to) = c2(y)?;
            let legs = lims2
                .iter()
                .zip(&to.legs)
                .map(|(l, leg)| cat2.compose(leg, &l.object.structure(x, y)?))
                .collect::<Result<Vec<_>>>()?;
            cat2.colimit_factor(
                &d,
                &from,
                &Cocone {
                    apex: to.apex,
                    legs,
                },
            )
        },
    );

    // The canonical comparison, from the legs `lim_a X^{a,b} -> X^{a,b} -> colim_b X^{a,b}`.
    let mut parts = Vec::new();
    for (i, o) in bw.objects.iter().enumerate() {
        let (l, r) = (lims[i].clone(), rows.clone());
        let slot = rows.slot(o.id);
        let apex = l.object.clone();
        parts.push(lim_colim.factor(&apex, move |a| {
            let leg = l.leg(a)?;
            let a = a.0[0];
            let r2 = r.clone();
            let inj = ProMap::levelwise(leg.target.clone(), r.row(a)?, move |s| {
                Ok(r2.colim(a, s)?.1.legs[slot].clone())
            });
            Ok(inj.after(&leg))
        }));
    }
    let parts = Arc::new(parts);
    let (p2, cat3, ci, index) = (
        parts.clone(),
        cat.clone(),
        colim_at.clone(),
        product.clone(),
    );
    let comparison = ProMap::new(colim_lim.clone(), lim_colim.object.clone(), move |x| {
        let reps = p2.iter().map(|p| p.rep(x)).collect::<Result<Vec<_>>>()?;
        let mut u = reps[0].0.clone();
        for (v, _) in &reps[1..] {
            u = index
                .upper_bound(&u, v)
                .ok_or_else(|| ProError::Invalid("index is not directed".into()))?;
        }
        let (d, from) = ci(&u)?;
        let legs = reps
            .iter()
            .zip(p2.iter())
            .map(|((v, m), p)| cat3.compose(m, &p.source.structure(&u, v)?))
            .collect::<Result<Vec<_>>>()?;
        let target = lim_colim_level(&p2[0], x)?;
        Ok((
            u,
            cat3.colimit_factor(&d, &from, &Cocone { apex: target, legs })?,
        ))
    });

    let formula = rows.formula()?;
    let mut certificate = Certificate::new();
    certificate.push(same_levels(
        &lim_colim.object,
        &formula,
        "lim colim = formula",
        budget.depth,
    )?);
    certificate.push(same_levels(
        &colim_lim,
        &formula,
        "colim lim = formula",
        budget.depth,
    )?);
    if certificate.all_certified() {
        let (l1, l2) = (lim_colim.object.clone(), colim_lim.clone());
        let c3 = cat.clone();
        let id = ProMap::levelwise(colim_lim.clone(), lim_colim.object.clone(), move |x| {
            Ok(c3.identity(&l2.level(x)?))
        });
        let c4 = cat.clone();
        let back = ProMap::levelwise(lim_colim.object.clone(), colim_lim.clone(), move |x| {
            Ok(c4.identity(&l1.level(x)?))
        });
        certificate.push(
            promap_equal(&comparison, &id, budget)?
                .to_check("comparison has identity representatives"),
        );
        certificate.extend(certify_iso(&comparison, &back, budget)?);
    }
    Ok(Commutation {
        lim_colim,
        colim_lim,
        formula,
        comparison,
        certificate,
    })
}

fn lim_colim_level<C: Category>(p: &ProMap<C>, x: &Ix) -> Result<C::Obj> {
    p.target.level(x)
}

/// Equal levels and equal structure maps on the window at `depth`.
fn same_levels<C: Category>(
    x: &ProObject<C>,
    y: &ProObject<C>,
    name: &str,
    depth: usize,
) -> Result<Check> {
    let w = x.index().window(depth);
    for (i, s) in w.iter().enumerate() {
        if x.level(s)? != y.level(s)? {
            return Ok(Check::new(name, Verdict::Refuted, depth)
                .with_witness(format!("levels differ at {s}")));
        }
        for t in w.iter().take(i) {
            if x.index().le(t, s) && x.structure(s, t)? != y.structure(s, t)? {
                return Ok(Check::new(name, Verdict::Refuted, depth)
                    .with_witness(format!("structure maps differ at {s} -> {t}")));
            }
        }
    }
    Ok(Check::certified(name, depth).with_witness(format!("{} levels equal", w.len())))
}

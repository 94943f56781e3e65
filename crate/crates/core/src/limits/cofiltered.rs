use crate::base::Category;
use crate::index::{
    cantor, cofinal_reindex, nth_element, Chain, CofinalFunctor, DirectedIndex, Ix, PosetShape,
    Product, TruncationBudget,
};
use crate::levelrep::{level_replace, LevelRepresentation};
use crate::pro::{DiagramOfPro, ProMap, ProObject};
use crate::{ProError, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

type ObjFn<C> = dyn Fn(&Ix) -> Result<ProObject<C>> + Send + Sync;
type ArrFn<C> = dyn Fn(&Ix, &Ix) -> Result<ProMap<C>> + Send + Sync;

/// A diagram of pro-objects over a directed set `B`, with a pro-map
/// `X^a -> X^b` for each `b < a`.
pub struct DirectedDiagram<C: Category> {
    pub index: Arc<dyn DirectedIndex>,
    object: Arc<ObjFn<C>>,
    arrow: Arc<ArrFn<C>>,
    memo: Arc<Mutex<HashMap<Ix, ProObject<C>>>>,
}

impl<C: Category> Clone for DirectedDiagram<C> {
    fn clone(&self) -> Self {
        DirectedDiagram {
            index: self.index.clone(),
            object: self.object.clone(),
            arrow: self.arrow.clone(),
            memo: self.memo.clone(),
        }
    }
}

impl<C: Category> DirectedDiagram<C> {
    pub fn new(
        index: Arc<dyn DirectedIndex>,
        object: impl Fn(&Ix) -> Result<ProObject<C>> + Send + Sync + 'static,
        arrow: impl Fn(&Ix, &Ix) -> Result<ProMap<C>> + Send + Sync + 'static,
    ) -> Self {
        DirectedDiagram {
            index,
            object: Arc::new(object),
            arrow: Arc::new(arrow),
            memo: Arc::default(),
        }
    }

    /// A tower `X^0 <- X^1 <- ...` of pro-objects from consecutive maps
    /// `step(n): X^{n+1} -> X^n`.
    pub fn tower(
        object: impl Fn(usize) -> Result<ProObject<C>> + Send + Sync + 'static,
        step: impl Fn(usize) -> Result<ProMap<C>> + Send + Sync + 'static,
    ) -> Self {
        let step = Arc::new(step);
        DirectedDiagram::new(
            Arc::new(Chain),
            move |a| object(a.0[0]),
            move |a, b| {
                let (n, m) = (a.0[0], b.0[0]);
                let mut f = step(n - 1)?;
                for k in (m..n - 1).rev() {
                    f = step(k)?.after(&f);
                }
                Ok(f)
            },
        )
    }

    pub fn object(&self, a: &Ix) -> Result<ProObject<C>> {
        if let Some(x) = self.memo.lock().expect("memo").get(a) {
            return Ok(x.clone());
        }
        let x = (self.object)(a)?;
        self.memo.lock().expect("memo").insert(a.clone(), x.clone());
        Ok(x)
    }

    /// The pro-map `X^a -> X^b` for `b <= a`.
    pub fn arrow(&self, a: &Ix, b: &Ix) -> Result<ProMap<C>> {
        if a == b {
            return Ok(ProMap::identity(&self.object(a)?));
        }
        if !self.index.le(b, a) {
            return Err(ProError::Precondition(format!("{b} is not below {a}")));
        }
        (self.arrow)(a, b)
    }

    /// Restriction along a cofinal functor.
    pub fn reindex(&self, f: &CofinalFunctor) -> Self {
        let (d1, d2) = (self.clone(), self.clone());
        let (f1, f2) = (f.clone(), f.clone());
        DirectedDiagram::new(
            f.source.clone(),
            move |i| d1.object(&f1.apply(i)?),
            move |i, j| {
                let (a, b) = (f2.apply(i)?, f2.apply(j)?);
                let (x, y) = (d2.object(i)?, d2.object(j)?);
                let m = d2.arrow(&a, &b)?;
                Ok(ProMap::new(x, y, move |s| m.rep(s)))
            },
        )
    }

    /// Position of `a` in the enumeration of the index.
    pub fn position(&self, a: &Ix) -> Result<usize> {
        self.index
            .window(self.index.level(a))
            .iter()
            .position(|x| x == a)
            .ok_or_else(|| ProError::Invalid(format!("{a} is not in {}", self.index.describe())))
    }

    pub fn label(&self, id: usize) -> Result<Ix> {
        nth_element(self.index.as_ref(), id)
            .ok_or_else(|| ProError::Invalid(format!("no element {id}")))
    }

    /// The same diagram over the index viewed as a cofinite category.
    pub fn to_shape_diagram(&self) -> DiagramOfPro<C> {
        let (d1, d2) = (self.clone(), self.clone());
        DiagramOfPro::new(
            Arc::new(PosetShape::new(self.index.clone())),
            move |id| d1.object(&d1.label(id)?),
            move |a| d2.arrow(&d2.label(a.source)?, &d2.label(a.target)?),
        )
    }
}

/// A cofiltered limit as one pro-object over `A x I`.
pub struct CofilteredLimit<C: Category> {
    pub object: ProObject<C>,
    /// The diagram after cofinal reindexing.
    pub diagram: DirectedDiagram<C>,
    pub reindexing: CofinalFunctor,
    pub level_rep: LevelRepresentation<C>,
}

impl<C: Category> Clone for CofilteredLimit<C> {
    fn clone(&self) -> Self {
        CofilteredLimit {
            object: self.object.clone(),
            diagram: self.diagram.clone(),
            reindexing: self.reindexing.clone(),
            level_rep: self.level_rep.clone(),
        }
    }
}

impl<C: Category> CofilteredLimit<C> {
    /// The projection onto `X^a`, with `a` in the reindexed diagram.
    pub fn leg(&self, a: &Ix) -> Result<ProMap<C>> {
        let id = self.diagram.position(a)?;
        let (_, from) = self.level_rep.iso(id)?;
        let a = a.clone();
        let inner = from.clone();
        Ok(ProMap::new(
            self.object.clone(),
            from.target.clone(),
            move |i| {
                let (s, m) = inner.rep(i)?;
                Ok((Product::join(&[a.clone(), s]), m))
            },
        ))
    }

    /// The map `W -> lim` induced by a compatible family `W -> X^a`, read
    /// through the level representation of each `X^a`.
    pub fn factor(
        &self,
        apex: &ProObject<C>,
        legs: impl Fn(&Ix) -> Result<ProMap<C>> + Send + Sync + 'static,
    ) -> ProMap<C> {
        let product = Product::new(vec![self.diagram.index.clone(), Arc::new(Chain)]);
        let (lr, d) = (self.level_rep.clone(), self.diagram.clone());
        ProMap::new(apex.clone(), self.object.clone(), move |x| {
            let parts = product.split(x);
            let (to, _) = lr.iso(d.position(&parts[0])?)?;
            to.after(&legs(&parts[0])?).rep(&parts[1])
        })
    }
}

/// Reindexes to a cofinite directed set, level-replaces, and reads the level
/// representation as a pro-object over `A x I`.
pub fn cofiltered_limit<C: Category>(
    d: &DirectedDiagram<C>,
    budget: TruncationBudget,
) -> Result<CofilteredLimit<C>> {
    let reindexing = cofinal_reindex(d.index.clone(), budget)?;
    let dd = if d.index.is_cofinite() {
        d.clone()
    } else {
        d.reindex(&reindexing)
    };
    let lr = level_replace(&dd.to_shape_diagram(), budget)?;
    let product = Product::new(vec![dd.index.clone(), Arc::new(Chain)]);
    let cat = dd.object(&dd.index.bottom())?.cat().clone();
    let (p1, p2) = (product.clone(), product.clone());
    let (l1, l2) = (lr.clone(), lr.clone());
    let (d1, d2) = (dd.clone(), dd.clone());
    let object = ProObject::new(
        cat,
        "lim A x I",
        Arc::new(product),
        move |x| {
            let parts = p1.split(x);
            l1.level(d1.position(&parts[0])?, &parts[1])
        },
        move |x, y| {
            let (px, py) = (p2.split(x), p2.split(y));
            let (a, b) = (d2.position(&px[0])?, d2.position(&py[0])?);
            let down = l2.structure(a, &px[1], &py[1])?;
            if a == b {
                return Ok(down);
            }
            let cat = l2.cat()?;
            cat.compose(&l2.vertical(cantor(a, b), &py[1])?, &down)
        },
    );
    Ok(CofilteredLimit {
        object,
        diagram: dd,
        reindexing,
        level_rep: lr,
    })
}

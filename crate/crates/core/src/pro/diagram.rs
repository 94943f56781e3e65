use super::{promap_equal, ProMap, ProObject};
use crate::base::Category;
use crate::index::{CofiniteCategory, FiniteShape, ShapeArrow, TruncationBudget};
use crate::{Certificate, ProError, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

type ObjFn<C> = dyn Fn(usize) -> Result<ProObject<C>> + Send + Sync;
type ArrFn<C> = dyn Fn(&ShapeArrow) -> Result<ProMap<C>> + Send + Sync;

/// A diagram `A -> pro-C` over a cofinite shape, addressed by object and
/// arrow ids of the shape.
pub struct DiagramOfPro<C: Category> {
    pub shape: Arc<dyn CofiniteCategory>,
    objects: Arc<ObjFn<C>>,
    arrows: Arc<ArrFn<C>>,
    memo_obj: Arc<Mutex<HashMap<usize, ProObject<C>>>>,
    memo_arr: Arc<Mutex<HashMap<usize, ProMap<C>>>>,
}

impl<C: Category> Clone for DiagramOfPro<C> {
    fn clone(&self) -> Self {
        DiagramOfPro {
            shape: self.shape.clone(),
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            memo_obj: self.memo_obj.clone(),
            memo_arr: self.memo_arr.clone(),
        }
    }
}

impl<C: Category> DiagramOfPro<C> {
    pub fn new(
        shape: Arc<dyn CofiniteCategory>,
        objects: impl Fn(usize) -> Result<ProObject<C>> + Send + Sync + 'static,
        arrows: impl Fn(&ShapeArrow) -> Result<ProMap<C>> + Send + Sync + 'static,
    ) -> Self {
        DiagramOfPro {
            shape,
            objects: Arc::new(objects),
            arrows: Arc::new(arrows),
            memo_obj: Arc::default(),
            memo_arr: Arc::default(),
        }
    }

    /// A diagram over a finite shape; `arrows` follow the shape's arrow ids
    /// (composites included).
    pub fn finite(
        shape: FiniteShape,
        objects: Vec<ProObject<C>>,
        arrows: Vec<ProMap<C>>,
    ) -> Result<Self> {
        let w = shape.shape();
        if objects.len() != w.objects.len() || arrows.len() != w.arrows.len() {
            return Err(ProError::Invalid(
                "one pro-object per object and one pro-map per arrow".into(),
            ));
        }
        for a in &w.arrows {
            let m = &arrows[a.id];
            if !m.source.same(&objects[a.source]) || !m.target.same(&objects[a.target]) {
                return Err(ProError::Composition(format!(
                    "pro-map for {} has the wrong ends",
                    a.name
                )));
            }
        }
        Ok(DiagramOfPro::new(
            Arc::new(shape),
            move |id| {
                objects
                    .get(id)
                    .cloned()
                    .ok_or_else(|| ProError::Invalid(format!("no object {id}")))
            },
            move |a| {
                arrows
                    .get(a.id)
                    .cloned()
                    .ok_or_else(|| ProError::Invalid(format!("no arrow {}", a.id)))
            },
        ))
    }

    /// One pro-object on the one-object shape.
    pub fn single(x: ProObject<C>) -> Self {
        DiagramOfPro::finite(FiniteShape::discrete(1), vec![x], vec![]).expect("single object")
    }

    pub fn object(&self, id: usize) -> Result<ProObject<C>> {
        if let Some(x) = self.memo_obj.lock().expect("memo").get(&id) {
            return Ok(x.clone());
        }
        let x = (self.objects)(id)?;
        self.memo_obj.lock().expect("memo").insert(id, x.clone());
        Ok(x)
    }

    pub fn arrow(&self, a: &ShapeArrow) -> Result<ProMap<C>> {
        if let Some(x) = self.memo_arr.lock().expect("memo").get(&a.id) {
            return Ok(x.clone());
        }
        let m = (self.arrows)(a)?;
        self.memo_arr.lock().expect("memo").insert(a.id, m.clone());
        Ok(m)
    }

    /// Each object and arrow on the shape window, and `X(g.f) = X(g).X(f)`.
    pub fn validate(&self, budget: TruncationBudget) -> Result<Certificate> {
        let w = self.shape.window(budget.depth);
        let mut cert = Certificate::new();
        for o in &w.objects {
            let mut c = self.object(o.id)?.validate(budget.depth)?;
            c.name = format!("object {}", o.name);
            cert.push(c);
        }
        for f in &w.arrows {
            let mut c = self.arrow(f)?.validate(budget)?;
            c.name = format!("arrow {}", f.name);
            cert.push(c);
            for g in w.arrows_from(f.target) {
                let h = w
                    .compose(g.id, f.id)
                    .and_then(|h| w.arrow(h))
                    .ok_or_else(|| ProError::Invalid("missing composite".into()))?;
                let lhs = self.arrow(g)?.after(&self.arrow(f)?);
                cert.push(
                    promap_equal(&lhs, &self.arrow(h)?, budget)?
                        .to_check(&format!("X({}) X({}) = X({})", g.name, f.name, h.name)),
                );
            }
        }
        Ok(cert)
    }
}

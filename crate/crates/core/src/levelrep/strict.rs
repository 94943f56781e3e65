use super::{Kind, LevelRepresentation};
use crate::base::Category;
use crate::index::{DirectedIndex, FiniteShape, Ix, Product, TruncationBudget};
use crate::pro::{DiagramOfPro, ProMap, ProObject};
use crate::{ProError, Result};
use std::sync::Arc;

type IndexFn = Arc<dyn Fn(&Ix) -> Result<Ix> + Send + Sync>;
type EtaFn<C> = Arc<dyn Fn(&Ix) -> Result<<C as Category>::Map> + Send + Sync>;

/// A diagram over a finite shape in which each arrow `phi: a -> b` is given
/// by an index map `F: I^b -> I^a` and maps `eta_s: X^a_{F(s)} -> X^b_s`.
pub struct StrictDiagram<C: Category> {
    pub shape: FiniteShape,
    pub objects: Vec<ProObject<C>>,
    arrows: Vec<(IndexFn, EtaFn<C>)>,
}

impl<C: Category> StrictDiagram<C> {
    pub fn new(shape: FiniteShape, objects: Vec<ProObject<C>>) -> Self {
        StrictDiagram {
            shape,
            objects,
            arrows: Vec::new(),
        }
    }

    /// Adds the data for the next arrow of the shape, in arrow-id order.
    pub fn arrow(
        mut self,
        index: impl Fn(&Ix) -> Result<Ix> + Send + Sync + 'static,
        eta: impl Fn(&Ix) -> Result<C::Map> + Send + Sync + 'static,
    ) -> Self {
        self.arrows.push((Arc::new(index), Arc::new(eta)));
        self
    }

    pub fn to_diagram(&self) -> Result<DiagramOfPro<C>> {
        let w = self.shape.shape();
        if self.arrows.len() != w.arrows.len() {
            return Err(ProError::Invalid("one (F, eta) pair per arrow".into()));
        }
        let maps = w
            .arrows
            .iter()
            .map(|a| {
                let (f, eta) = self.arrows[a.id].clone();
                ProMap::new(
                    self.objects[a.source].clone(),
                    self.objects[a.target].clone(),
                    move |s| Ok((f(s)?, eta(s)?)),
                )
            })
            .collect();
        DiagramOfPro::finite(self.shape.clone(), self.objects.clone(), maps)
    }

    /// `F^{psi phi} = F^phi F^psi` on the window of each target index.
    pub fn check_composition(&self, depth: usize) -> Result<bool> {
        let w = self.shape.shape();
        for phi in &w.arrows {
            for psi in w.arrows_from(phi.target) {
                let chi = w
                    .compose(psi.id, phi.id)
                    .ok_or_else(|| ProError::Invalid("missing composite".into()))?;
                for s in self.objects[psi.target].index().window(depth) {
                    let lhs = (self.arrows[chi].0)(&s)?;
                    let rhs = (self.arrows[phi.id].0)(&(self.arrows[psi.id].0)(&s)?)?;
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// The choice-free level representation of a strict diagram: the index is
/// the product of the indices of the objects with no outgoing arrows.
pub fn strict_reindex<C: Category>(
    d: &StrictDiagram<C>,
    budget: TruncationBudget,
) -> Result<LevelRepresentation<C>> {
    let w = d.shape.shape();
    let mut sinks: Vec<usize> = w
        .objects
        .iter()
        .filter(|o| w.arrows_from(o.id).next().is_none())
        .map(|o| o.id)
        .collect();
    // Canonical coordinate order: by object name, so the result does not
    // depend on how the objects were listed.
    sinks.sort_by(|a, b| w.objects[*a].name.cmp(&w.objects[*b].name));
    let parts: Vec<Arc<dyn DirectedIndex>> = sinks
        .iter()
        .map(|&b| d.objects[b].index().clone())
        .collect();
    let product = Product::new(parts);
    let index: Arc<dyn DirectedIndex> = Arc::new(product.clone());
    let lr = LevelRepresentation::build(
        d.to_diagram()?,
        index.clone(),
        Kind::Strict { sinks, product },
        budget.node_cap,
    );
    for s in index.window(budget.depth) {
        for o in &w.objects {
            lr.f(o.id, &s)?;
        }
    }
    Ok(lr)
}

//! Colimits in pro-categories: finite colimits levelwise, colimits over
//! cofinite shapes through the monotone-tuple poset, the sequential and
//! realization shapes, and the Hom-interchange check.

mod bar;
mod shapes;
mod universal;

pub use bar::{cofinite_colimit, compare_colimits, BarDiagram, CofiniteColimit};
pub use shapes::{build_realization_shape, build_sequential_shape, monotone_maps, Simplicial};
pub use universal::{is_pro_cocone, random_constant_cocones, verify_universal_colimit, ProCocone};

use crate::base::Category;
use crate::index::TruncationBudget;
use crate::levelrep::{level_replace, LevelRepresentation};
use crate::pro::{DiagramOfPro, ProMap, ProObject};
use crate::{ProError, Result};

/// A colimit pro-object with one injection per diagram object.
pub struct ProColimit<C: Category> {
    pub object: ProObject<C>,
    pub legs: Vec<ProMap<C>>,
    pub level_rep: LevelRepresentation<C>,
}

/// Level representation followed by the colimit at each level.
pub fn finite_colimit_pro<C: Category>(
    d: &DiagramOfPro<C>,
    budget: TruncationBudget,
) -> Result<ProColimit<C>> {
    if !d.shape.is_finite() {
        return Err(ProError::Precondition(
            "finite colimits need a finite shape".into(),
        ));
    }
    let lr = level_replace(d, budget)?;
    let levels = bar::Levels::new(lr.clone(), lr.shape_window(0)?, |_, s| s.clone());
    let object = levels.pro_object("colim", lr.index().clone())?;
    let mut legs = Vec::new();
    for (k, o) in levels.window.objects.iter().enumerate() {
        let l = levels.clone();
        let level_leg = ProMap::levelwise(lr.pro_object(o.id)?, object.clone(), move |s| {
            Ok(l.cocone(s)?.1.legs[k].clone())
        });
        legs.push(level_leg.after(&lr.iso(o.id)?.0));
    }
    Ok(ProColimit {
        object,
        legs,
        level_rep: lr,
    })
}

#[cfg(test)]
mod tests;

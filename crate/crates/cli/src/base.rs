//! Level rules for each supported base category.

use crate::spec::{Explicit, ObjectSpec, Orders, Rule};
use procat::base::{
    Category, FinAb, FinAbMap, FinAbObj, FinSet, FinSetMap, FreeAb, FreeAbMap, FreeAbObj, IntMatrix,
};
use procat::gen::random_tower_of_towers;
use procat::limits::DirectedDiagram;
use serde_json::{json, Value};

pub trait Base: Category + Default {
    const NAME: &'static str;
    fn level(spec: &ObjectSpec, n: usize) -> Result<Self::Obj, String>;
    fn family(spec: &ObjectSpec) -> String;
    /// The map `src -> tgt` given by `rule` at target level `n`.
    fn rule_map(
        rule: &Rule,
        src: &Self::Obj,
        tgt: &Self::Obj,
        n: usize,
    ) -> Result<Self::Map, String>;
    fn obj_json(x: &Self::Obj) -> Value;
    fn map_json(m: &Self::Map) -> Value;
    /// Seeded cofiltered systems for the cocompactness check.
    fn samples(_seed: u64, _n: usize) -> procat::Result<Vec<DirectedDiagram<Self>>> {
        Ok(Vec::new())
    }
}

fn matrix(rows: &[Vec<i64>], r: usize, c: usize) -> Result<IntMatrix, String> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(format!("expected a {r}x{c} matrix"));
    }
    Ok(IntMatrix::from_rows(r, c, rows))
}

fn unknown(rule: &Rule, cat: &str) -> String {
    format!("rule `{}` does not apply to {cat}", rule.describe())
}

impl Base for FinSet {
    const NAME: &'static str = "finset";

    fn level(spec: &ObjectSpec, n: usize) -> Result<usize, String> {
        let f = spec.sizes.as_ref().ok_or("finset objects need `sizes`")?;
        usize::try_from(f.at(n)?).map_err(|e| e.to_string())
    }

    fn family(spec: &ObjectSpec) -> String {
        spec.sizes
            .as_ref()
            .map_or_else(String::new, |f| format!("|X_n| = {}", f.describe()))
    }

    fn rule_map(rule: &Rule, src: &usize, tgt: &usize, n: usize) -> Result<FinSetMap, String> {
        let (s, t) = (*src, *tgt);
        let assign: Vec<usize> = match rule {
            Rule::Named(r) if r == "identity" && s == t => (0..s).collect(),
            Rule::Named(r) if r == "mod" && t > 0 => (0..s).map(|x| x % t).collect(),
            Rule::Named(r) if r == "clamp" && t > 0 => (0..s).map(|x| x.min(t - 1)).collect(),
            Rule::Named(r) if r.starts_with("const:") => {
                let k: usize = r[6..]
                    .parse()
                    .map_err(|_| format!("bad constant in `{r}`"))?;
                vec![k; s]
            }
            Rule::Named(r) if s == 0 && (r == "mod" || r == "clamp") => Vec::new(),
            Rule::Explicit(_) => match rule.explicit(n) {
                Some(Explicit::Assign(v)) => v.clone(),
                _ => return Err("finset maps are lists of values".into()),
            },
            _ => return Err(unknown(rule, "finset")),
        };
        if assign.len() != s {
            return Err(format!(
                "map at level {n} has {} values for a {s}-element source",
                assign.len()
            ));
        }
        FinSetMap::new(t, assign).map_err(|e| e.to_string())
    }

    fn obj_json(x: &usize) -> Value {
        json!(x)
    }

    fn map_json(m: &FinSetMap) -> Value {
        json!(m.values())
    }

    /// Towers of towers of partition models, alternating with and without
    /// junk points.
    fn samples(seed: u64, n: usize) -> procat::Result<Vec<DirectedDiagram<Self>>> {
        (0..n as u64)
            .map(|i| Ok(random_tower_of_towers(seed.wrapping_add(i), 3, 3, i % 2 == 1)?.0))
            .collect()
    }
}

impl Base for FinAb {
    const NAME: &'static str = "finab";

    fn level(spec: &ObjectSpec, n: usize) -> Result<FinAbObj, String> {
        match spec.orders.as_ref().ok_or("finab objects need `orders`")? {
            Orders::Levels(v) => {
                let o = v
                    .get(n.min(v.len().saturating_sub(1)))
                    .ok_or("empty order list")?;
                FinAbObj::new(o.clone()).map_err(|e| e.to_string())
            }
            Orders::Cyclic(f) => Ok(FinAbObj::cyclic(f.at(n)?)),
        }
    }

    fn family(spec: &ObjectSpec) -> String {
        match &spec.orders {
            Some(Orders::Levels(v)) => format!("orders {v:?} then constant"),
            Some(Orders::Cyclic(f)) => format!("X_n = Z/{}", f.describe()),
            None => String::new(),
        }
    }

    fn rule_map(rule: &Rule, src: &FinAbObj, tgt: &FinAbObj, n: usize) -> Result<FinAbMap, String> {
        let m = match rule {
            Rule::Named(r) if r == "reduction" || r == "identity" => {
                return FinAbMap::reduction(src.clone(), tgt.clone()).map_err(|e| e.to_string())
            }
            Rule::Named(r) if r == "zero" => IntMatrix::zeros(tgt.rank(), src.rank()),
            Rule::Explicit(_) => match rule.explicit(n) {
                Some(Explicit::Matrix(rows)) => matrix(rows, tgt.rank(), src.rank())?,
                Some(Explicit::Assign(v)) if tgt.rank() == 1 => {
                    matrix(&[v.iter().map(|&x| x as i64).collect()], 1, src.rank())?
                }
                _ => return Err("finab maps are integer matrices".into()),
            },
            _ => return Err(unknown(rule, "finab")),
        };
        FinAbMap::new(src.clone(), tgt.clone(), m).map_err(|e| e.to_string())
    }

    fn obj_json(x: &FinAbObj) -> Value {
        json!(x.orders())
    }

    fn map_json(m: &FinAbMap) -> Value {
        json!(m.matrix().to_rows())
    }
}

impl Base for FreeAb {
    const NAME: &'static str = "freeab";

    fn level(spec: &ObjectSpec, n: usize) -> Result<FreeAbObj, String> {
        let l = spec.labels.as_ref().ok_or("freeab objects need `labels`")?;
        let (lo, hi) = (l.lo.at(n)?, l.hi.at(n)?);
        let cast = |v: u64| u32::try_from(v).map_err(|e| e.to_string());
        if lo > hi {
            return Ok(FreeAbObj::with_labels(Vec::new()));
        }
        Ok(FreeAbObj::range(cast(lo)?, cast(hi)?))
    }

    fn family(spec: &ObjectSpec) -> String {
        spec.labels.as_ref().map_or_else(String::new, |l| {
            format!("X_n = A[{}, {}]", l.lo.describe(), l.hi.describe())
        })
    }

    fn rule_map(
        rule: &Rule,
        src: &FreeAbObj,
        tgt: &FreeAbObj,
        n: usize,
    ) -> Result<FreeAbMap, String> {
        let m = match rule {
            Rule::Named(r) if r == "canonical" || r == "identity" => {
                return Ok(FreeAbMap::canonical(src, tgt))
            }
            Rule::Named(r) if r == "zero" => IntMatrix::zeros(tgt.rank(), src.rank()),
            Rule::Explicit(_) => match rule.explicit(n) {
                Some(Explicit::Matrix(rows)) => matrix(rows, tgt.rank(), src.rank())?,
                _ => return Err("freeab maps are integer matrices".into()),
            },
            _ => return Err(unknown(rule, "freeab")),
        };
        FreeAbMap::new(src.clone(), tgt.clone(), m).map_err(|e| e.to_string())
    }

    fn obj_json(x: &FreeAbObj) -> Value {
        json!(x.labels())
    }

    fn map_json(m: &FreeAbMap) -> Value {
        json!(m.matrix().to_rows())
    }
}

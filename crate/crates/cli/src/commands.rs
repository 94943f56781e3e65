//! One function per subcommand, generic over the base category.

use crate::base::Base;
use crate::model::Model;
use crate::report::{object_json, window_json};
use crate::spec::{SpecError, SpecFile};
use procat::colimits::{
    cofinite_colimit, compare_colimits, finite_colimit_pro, is_pro_cocone, ProCocone,
};
use procat::index::TruncationBudget;
use procat::levelrep::{level_replace, strict_reindex, LevelRepresentation};
use procat::limits::{
    check_cofiltered, cofiltered_limit, cofiltered_limit_alt, compare_limits, finite_limit_pro,
    is_pro_cone, ProCone,
};
use procat::pro::hom_bounded;
use procat::theorems::{build_inexactness_witness, check_commute, cocompact_check};
use procat::{Check, ProError, Verdict};
use serde_json::{json, Value};

/// Hom enumeration stops after this many candidate families.
pub const HOM_CAP: usize = 200_000;

pub enum Failure {
    Spec(SpecError),
    Core(ProError),
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Spec(e)
    }
}

impl From<ProError> for Failure {
    fn from(e: ProError) -> Self {
        Failure::Core(e)
    }
}

pub type Outcome = Result<(Vec<Check>, Option<Value>), Failure>;

fn budget(depth: usize) -> TruncationBudget {
    TruncationBudget::new(depth).with_slack(1)
}

fn named(mut c: Check, name: &str) -> Check {
    if c.name.is_empty() {
        c.name = name.into();
    }
    c
}

fn table<C: Base>(lr: &LevelRepresentation<C>, depth: usize) -> procat::Result<Value> {
    let rows: Vec<Value> = lr
        .table(depth)?
        .into_iter()
        .map(|r| json!({ "object": r.object, "s": r.s.to_string(), "f": r.f.to_string(), "h": r.h.to_string() }))
        .collect();
    Ok(json!({ "index": lr.index().describe(), "rows": rows }))
}

pub fn levelrep<C: Base>(spec: &SpecFile, depth: usize, strict: bool) -> Outcome {
    let m = Model::<C>::load(spec, depth)?;
    let b = budget(depth);
    let lr = if strict {
        let sd = m.strict(spec)?;
        let composes = sd.check_composition(depth)?;
        let mut c = Check::new(
            "index maps compose strictly",
            if composes {
                Verdict::Certified
            } else {
                Verdict::Refuted
            },
            depth,
        );
        if !composes {
            c = c.with_witness("F^(psi phi) differs from F^phi F^psi");
        }
        (strict_reindex(&sd, b)?, Some(c))
    } else {
        let (d, _) = m.diagram(spec)?;
        (level_replace(&d, b)?, None)
    };
    let (lr, pre) = lr;
    let mut checks: Vec<Check> = pre.into_iter().collect();
    checks.extend(lr.verify(b)?.checks);
    checks.extend(
        lr.assemble()
            .validate(b)?
            .checks
            .into_iter()
            .map(|c| Check {
                name: format!("assembled: {}", c.name),
                ..c
            }),
    );
    Ok((checks, Some(table(&lr, depth)?)))
}

pub fn prolim<C: Base>(spec: &SpecFile, depth: usize, method: &str) -> Outcome {
    let m = Model::<C>::load(spec, depth)?;
    let b = budget(depth);
    let mut checks = Vec::new();
    let mut out = serde_json::Map::new();
    if spec.tower.is_none() {
        let (d, _) = m.diagram(spec)?;
        let l = finite_limit_pro(&d, b)?;
        let cone = ProCone {
            apex: l.object.clone(),
            legs: l.legs.clone(),
        };
        checks.push(named(is_pro_cone(&d, &cone, b)?, "limit legs form a cone"));
        out.insert(
            "limit".into(),
            object_json(&l.object, "levelwise finite limit", depth)?,
        );
        return Ok((checks, Some(Value::Object(out))));
    }
    let d = m.tower(spec)?;
    let product = (method != "pairs")
        .then(|| cofiltered_limit(&d, b))
        .transpose()?;
    let pairs = (method != "product")
        .then(|| cofiltered_limit_alt(&d))
        .transpose()?;
    if let Some(l) = &product {
        checks.push(named(
            l.object.validate(depth)?,
            "product-indexed limit is a pro-object",
        ));
        out.insert(
            "product".into(),
            object_json(&l.object, "X^a at level f^a(s) over A x N", depth)?,
        );
    }
    if let Some(p) = &pairs {
        let w = p.window(depth, 2)?;
        let inner = p.window(depth.saturating_sub(1), 2)?.len();
        checks.push(named(
            check_cofiltered(&w, inner, depth.saturating_sub(1))?,
            "pair category is cofiltered",
        ));
        let mut v = window_json(&format!("lim {}", "pairs"), "X^a_s over pairs (a, s)", &w);
        v["parallel_arrows"] = json!(p.has_parallel(depth, 2)?);
        out.insert("pairs".into(), v);
    }
    if let (Some(l), Some(p)) = (&product, &pairs) {
        checks.extend(compare_limits(l, p, b)?.checks.into_iter().map(|c| Check {
            name: format!("comparison: {}", c.name),
            ..c
        }));
    }
    Ok((checks, Some(Value::Object(out))))
}

pub fn procolim<C: Base>(spec: &SpecFile, depth: usize) -> Outcome {
    let m = Model::<C>::load(spec, depth)?;
    let b = budget(depth);
    let (d, _) = m.diagram(spec)?;
    let z = cofinite_colimit(&d, b)?;
    let mut checks = vec![named(z.stable.clone(), "colimit window is stable")];
    let cocone = ProCocone {
        apex: z.object.clone(),
        legs: z.legs.clone(),
    };
    checks.push(named(
        is_pro_cocone(&d, &cocone, b)?,
        "injections form a cocone",
    ));
    let fin = finite_colimit_pro(&d, b)?;
    checks.extend(
        compare_colimits(&fin, &z, b)?
            .checks
            .into_iter()
            .map(|c| Check {
                name: format!("comparison: {}", c.name),
                ..c
            }),
    );
    Ok((
        checks,
        Some(json!({ "colimit": object_json(&z.object, "colimit over A x K", depth)? })),
    ))
}

pub fn homset<C: Base>(spec: &SpecFile, depth: usize, x: &str, y: &str) -> Outcome {
    let m = Model::<C>::load(spec, depth)?;
    let (xo, yo) = (m.object_named(x)?, m.object_named(y)?);
    let here = hom_bounded(&xo.window(depth)?, &yo.window(depth)?, HOM_CAP)?.count();
    let next = hom_bounded(&xo.window(depth + 1)?, &yo.window(depth + 1)?, HOM_CAP)?.count();
    let verdict = if here == next {
        Verdict::Certified
    } else {
        Verdict::Undetermined
    };
    let c = Check::new("class count is stable", verdict, depth).with_witness(format!(
        "{here} classes at depth {depth}, {next} at depth {}",
        depth + 1
    ));
    Ok((
        vec![c],
        Some(json!({ "source": x, "target": y, "classes": here })),
    ))
}

pub fn check_commute_cmd<C: Base>(spec: &SpecFile, depth: usize) -> Outcome {
    let m = Model::<C>::load(spec, depth)?;
    let (d, b) = m.commute(spec)?;
    let c = check_commute(&d, &b, budget(depth))?;
    let formula = object_json(
        &c.formula,
        "colim_b of X^a_{f(a,s)} over N x K",
        depth.min(3),
    )?;
    Ok((c.certificate.checks, Some(json!({ "formula": formula }))))
}

pub fn repro_inexactness(depth: usize) -> Outcome {
    let w = build_inexactness_witness(depth)?;
    let mut checks = Vec::new();
    let mut names = Vec::new();
    for (section, cert) in w.sections() {
        names.push(section.to_string());
        checks.extend(cert.checks.iter().cloned().map(|c| Check {
            name: format!("{section}: {}", c.name),
            ..c
        }));
    }
    Ok((
        checks,
        Some(json!({ "cutoff": w.cutoff, "sections": names })),
    ))
}

pub fn cocompact<C: Base>(
    spec: &SpecFile,
    depth: usize,
    x: &str,
    samples: usize,
    seed: u64,
) -> Outcome {
    let m = Model::<C>::load(spec, depth)?;
    let xo = m.object_named(x)?;
    let sys = C::samples(seed, samples)?;
    let cert = cocompact_check(&xo, &sys, budget(depth))?;
    let out = json!({ "object": x, "constant": xo.index().finite_size() == Some(1), "samples": sys.len() });
    Ok((cert.checks, Some(out)))
}

//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any FAIL.

use procat::base::{Category, FinAb, FinAbMap, FinAbObj, FinSet};
use procat::colimits::{cofinite_colimit, random_constant_cocones, verify_universal_colimit};
use procat::gen::{
    random_finab_retract, random_finset_retract, random_span, random_square,
    random_square_with_tail, random_tower_of_diagrams, random_tower_of_towers, rng,
};
use procat::index::{FiniteShape, TruncationBudget};
use procat::levelrep::level_replace;
use procat::limits::{
    cofiltered_limit, cofiltered_limit_alt, compare_limits, finite_limit_pro,
    random_constant_cones, verify_universal_limit, DirectedDiagram,
};
use procat::pro::{certify_iso, DiagramOfPro, ProObject};
use procat::theorems::{check_commute, cocompact_check, retract_tower};
use procat::Verdict;
use serde_json::Value;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Debug>(x: E) -> String {
    format!("{x:?}")
}

fn at<E: std::fmt::Debug>(stage: &'static str, seed: u64) -> impl Fn(E) -> String {
    move |x| format!("seed {seed}, {stage}: {x:?}")
}

fn inexactness() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_procat"))
        .args(["--format", "json", "repro-inexactness", "--depth", "6"])
        .output()
        .map_err(e)?;
    let secs = start.elapsed().as_secs_f64();
    let v: Value = serde_json::from_slice(&out.stdout).map_err(e)?;
    ensure(
        out.status.code() == Some(0) && v["verdict"] == "certified",
        || format!("verdict {}", v["verdict"]),
    )?;
    let checks = v["checks"].as_array().ok_or("no checks")?;
    let named = |prefix: &str| {
        checks
            .iter()
            .filter(move |c| c["name"].as_str().is_some_and(|n| n.starts_with(prefix)))
            .collect::<Vec<_>>()
    };
    for n in 1..=6 {
        ensure(named(&format!("f_n level-mono: f_{n} ")).len() == 1, || {
            format!("no mono check for f_{n}")
        })?;
    }
    let fg = named("fg = 0");
    let w: Vec<&str> = fg
        .iter()
        .flat_map(|c| c["witnesses"].as_array().into_iter().flatten())
        .filter_map(Value::as_str)
        .collect();
    for m in 0..=6 {
        ensure(
            w.iter().any(|s| {
                s.starts_with(&format!("A[{},oo)", m + 1))
                    && s.ends_with(&format!("A[0,{m}] is zero"))
            }),
            || format!("no fg = 0 witness at level {m}"),
        )?;
    }
    let g = named("g != 0");
    ensure(g.len() >= 8, || format!("{} g != 0 checks", g.len()))?;
    ensure(
        named("colim c A[0,n] = cA")
            .iter()
            .any(|c| c["name"].as_str().unwrap_or("").contains("rank")),
        || "no rank check".into(),
    )?;
    ensure(secs < 5.0, || format!("{secs:.2} s"))?;
    Ok(format!(
        "depth 6, {} checks certified in {secs:.2} s",
        checks.len()
    ))
}

fn commutation() -> Outcome {
    let start = Instant::now();
    let shapes = [
        FiniteShape::discrete(2),
        FiniteShape::parallel_pair(),
        FiniteShape::span(),
    ];
    let budget = TruncationBudget::new(4).with_slack(1);
    for seed in 0..50u64 {
        let b = &shapes[seed as usize % 3];
        let d = random_tower_of_diagrams(seed, b, 3, 3).map_err(e)?;
        for o in d.shape.window(4).objects {
            let x = d.object(o.id).map_err(e)?;
            for s in x.index().window(4) {
                let n = x.level(&s).map_err(e)?;
                ensure(n <= 4, || format!("seed {seed}: level of size {n}"))?;
            }
        }
        let c = check_commute(&d, b, budget).map_err(e)?;
        ensure(c.certificate.all_certified(), || {
            format!("seed {seed}: {:?}", c.certificate)
        })?;
        for name in [
            "lim colim = formula",
            "colim lim = formula",
            "comparison has identity representatives",
        ] {
            ensure(c.certificate.checks.iter().any(|k| k.name == name), || {
                format!("seed {seed}: no `{name}`")
            })?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("{secs:.1} s"))?;
    Ok(format!(
        "50/50 certified over coproduct, coequalizer and pushout in {secs:.1} s"
    ))
}

fn limits() -> Outcome {
    let budget = TruncationBudget::new(4).with_slack(1);
    let mut parallel = Vec::new();
    for seed in 0..25u64 {
        let (d, _) = random_tower_of_towers(seed, 3, 3, seed % 2 == 1).map_err(e)?;
        let prod = cofiltered_limit(&d, budget).map_err(e)?;
        let alt = cofiltered_limit_alt(&d).map_err(e)?;
        let cert = compare_limits(&prod, &alt, budget).map_err(e)?;
        ensure(cert.all_certified(), || format!("seed {seed}: {cert:?}"))?;
        if alt.has_parallel(2, 1).map_err(e)? {
            parallel.push(seed);
        }
    }
    ensure(!parallel.is_empty(), || {
        "no pair category with parallel arrows".into()
    })?;
    Ok(format!(
        "25/25 comparisons certified; parallel arrows in {} instances (first seed {})",
        parallel.len(),
        parallel[0]
    ))
}

fn level_reps() -> Outcome {
    let budget = TruncationBudget::new(4).with_slack(1);
    let mut n = 0;
    for seed in 0..30u64 {
        let junk = seed % 2 == 1;
        let d: DiagramOfPro<FinSet> = match seed % 3 {
            0 => random_square(seed, 3, junk).map_err(e)?.0,
            1 => random_tower_of_towers(seed, 3, 3, junk)
                .map_err(e)?
                .0
                .to_shape_diagram(),
            _ => random_square_with_tail(seed, 3, 2, junk).map_err(e)?,
        };
        let lr = level_replace(&d, budget).map_err(e)?;
        let cert = lr.verify(budget).map_err(e)?;
        ensure(cert.all_certified(), || format!("seed {seed}: {cert:?}"))?;
        for name in [
            "monotone",
            "cofinal",
            "squares commute",
            "triangles commute",
        ] {
            ensure(cert.checks.iter().any(|c| c.name == name), || {
                format!("seed {seed}: no `{name}`")
            })?;
        }
        let assembled = lr.assemble();
        for o in d.shape.window(2).objects {
            let (to, from) = lr.iso(o.id).map_err(e)?;
            let x = d.object(o.id).map_err(e)?;
            for s in lr.index().window(4) {
                let (t, m) = to.rep(&s).map_err(e)?;
                ensure(m == FinSet.identity(&x.level(&t).map_err(e)?), || {
                    format!("seed {seed}: {} at {s} is not an identity", o.name)
                })?;
            }
            let iso = certify_iso(&to, &from, budget).map_err(e)?;
            ensure(iso.all_certified(), || format!("seed {seed}: {iso:?}"))?;
            let y = assembled.object(o.id).map_err(e)?;
            for s in lr.index().window(4) {
                ensure(
                    y.level(&s).map_err(e)? == to.target.level(&s).map_err(e)?,
                    || format!("seed {seed}: assembled level differs"),
                )?;
            }
        }
        n += 1;
    }
    Ok(format!(
        "{n}/30 diagrams (square, chain, square with tail) pass all four conditions"
    ))
}

fn universal() -> Outcome {
    let budget = TruncationBudget::new(4).with_slack(1);
    let (mut cones, mut cocones) = (0, 0);
    for seed in 0..20u64 {
        let (sq, _) = random_square(seed, 3, false).map_err(e)?;
        let w = sq.shape.window(0);
        let arrow = |s: usize, t: usize| {
            w.arrows
                .iter()
                .find(|a| a.source == s && a.target == t)
                .map(|a| sq.arrow(a))
                .expect("square arrow")
        };
        let d = DiagramOfPro::finite(
            FiniteShape::cospan(),
            vec![
                sq.object(1).map_err(e)?,
                sq.object(2).map_err(e)?,
                sq.object(3).map_err(e)?,
            ],
            vec![arrow(1, 3).map_err(e)?, arrow(2, 3).map_err(e)?],
        )
        .map_err(e)?;
        let l = finite_limit_pro(&d, budget).map_err(at("pullback", seed))?;
        let mut r = rng(seed);
        let mut sample =
            random_constant_cones(&d, &1, 2, &mut r, budget).map_err(at("cones", seed))?;
        sample.extend(random_constant_cones(&d, &2, 2, &mut r, budget).map_err(at("cones", seed))?);
        ensure(!sample.is_empty(), || format!("seed {seed}: no cones"))?;
        let cert = verify_universal_limit(&d, &l.object, &l.legs, &sample, budget)
            .map_err(at("limit check", seed))?;
        ensure(cert.all_certified(), || {
            format!("limit seed {seed}: {cert:?}")
        })?;
        cones += sample.len();

        let (d, _) = random_span(seed, 3, seed % 2 == 1).map_err(e)?;
        let z = cofinite_colimit(&d, budget).map_err(at("pushout", seed))?;
        let (zd, legs) = z.diagonal().map_err(at("diagonal", seed))?;
        let sample =
            random_constant_cocones(&d, &2, 3, &mut r, budget).map_err(at("cocones", seed))?;
        ensure(!sample.is_empty(), || format!("seed {seed}: no cocones"))?;
        let cert = verify_universal_colimit(&d, &zd, &legs, &sample, budget)
            .map_err(at("colimit check", seed))?;
        ensure(cert.all_certified(), || {
            format!("colimit seed {seed}: {cert:?}")
        })?;
        cocones += sample.len();
    }
    Ok(format!(
        "20 pullbacks ({cones} cones) and 20 pushouts ({cocones} cocones) factor uniquely"
    ))
}

fn z2k() -> ProObject<FinAb> {
    let l = |k: usize| FinAbObj::cyclic(1 << (k + 1));
    ProObject::tower(
        FinAb,
        "Z/2^k",
        move |k| Ok(l(k)),
        move |k| FinAbMap::reduction(l(k + 1), l(k)),
    )
}

fn cocompactness() -> Outcome {
    let budget = TruncationBudget::new(4).with_slack(1);
    let samples: Vec<DirectedDiagram<FinSet>> = (0..20u64)
        .map(|i| random_tower_of_towers(i, 3, 3, i % 2 == 1).map(|x| x.0))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let c = cocompact_check(&ProObject::constant(FinSet, 2), &samples, budget).map_err(e)?;
    ensure(c.checks.len() == 20 && c.all_certified(), || {
        format!("c(2): {c:?}")
    })?;
    let r = cocompact_check(&z2k(), &[], TruncationBudget::new(5).with_slack(1)).map_err(e)?;
    ensure(
        r.verdict() == Verdict::Refuted && r.checks.iter().all(|k| k.depth == 5),
        || format!("Z/2^k: {r:?}"),
    )?;
    ensure(r.checks[0].witnesses.len() == 6, || {
        format!("{} image bounds", r.checks[0].witnesses.len())
    })?;
    for n in 0..4usize {
        let c = cocompact_check(&ProObject::constant(FinSet, n), &samples, budget).map_err(e)?;
        ensure(c.verdict() != Verdict::Refuted, || {
            format!("c({n}) refuted")
        })?;
    }
    for n in [1u64, 2, 4, 6] {
        let c = cocompact_check(
            &ProObject::constant(FinAb, FinAbObj::cyclic(n)),
            &[],
            budget,
        )
        .map_err(e)?;
        ensure(c.verdict() != Verdict::Refuted, || {
            format!("c(Z/{n}) refuted")
        })?;
    }
    Ok(
        "c(2) certified on 20 samples; Z/2^k refuted at depth 5 by image size; no constant refuted"
            .into(),
    )
}

fn retracts() -> Outcome {
    let budget = TruncationBudget::new(3).with_slack(1);
    for seed in 0..10u64 {
        let (f, g, bound) = random_finset_retract(seed, 3).map_err(e)?;
        let pred: Arc<dyn Fn(&usize) -> procat::Result<bool> + Send + Sync> =
            Arc::new(move |n| Ok(*n <= bound));
        let r =
            retract_tower(&f, &g, Some(("at most |S + E| elements", pred)), budget).map_err(e)?;
        ensure(r.certificate.all_certified(), || {
            format!("sets seed {seed}: {:?}", r.certificate)
        })?;
        let (f, g, _) = random_finab_retract(seed, 3).map_err(e)?;
        let pred: Arc<dyn Fn(&FinAbObj) -> procat::Result<bool> + Send + Sync> =
            Arc::new(|x| Ok(x.orders().len() <= 2));
        let r =
            retract_tower(&f, &g, Some(("at most two cyclic factors", pred)), budget).map_err(e)?;
        ensure(r.certificate.all_certified(), || {
            format!("groups seed {seed}: {:?}", r.certificate)
        })?;
        for name in ["lim alternating = lim fg", "lim alternating = X"] {
            ensure(
                r.certificate
                    .checks
                    .iter()
                    .any(|c| c.name.starts_with(name)),
                || format!("seed {seed}: no `{name}`"),
            )?;
        }
    }
    Ok("10/10 set retracts and 10/10 group retracts certified with type C".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 inexactness of filtered colimits", inexactness),
        (
            "2 cofiltered limits commute with finite colimits",
            commutation,
        ),
        ("3 two limit constructions agree", limits),
        ("4 level representations", level_reps),
        ("5 universal properties", universal),
        ("6 cocompactness", cocompactness),
        ("7 retract closure", retracts),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS {name}: {msg} [{secs:.1} s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg} [{secs:.1} s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Browser demo: three operations returning JSON strings.

use procat::base::{FinSet, FinSetMap};
use procat::gen::random_square;
use procat::index::TruncationBudget;
use procat::levelrep::level_replace;
use procat::pro::{hom_bounded, ProObject};
use procat::theorems::build_inexactness_witness;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Depths above this are refused; the page runs on the main thread.
pub const MAX_DEPTH: usize = 8;
const HOM_CAP: usize = 100_000;

fn guard(depth: usize) -> Result<(), String> {
    if depth > MAX_DEPTH {
        return Err(format!("depth {depth} is above {MAX_DEPTH}"));
    }
    Ok(())
}

fn render(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Parses `"2, 3, 5"`: level sizes, the last one repeating.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, String> {
    let v = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| format!("`{t}` is not a size"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match v.iter().any(|&n| n == 0) || v.is_empty() {
        true => Err("sizes must be positive and nonempty".into()),
        false => Ok(v),
    }
}

/// The tower with the given sizes and bonding maps `x -> min(x, |X_n| - 1)`.
pub fn clamp_tower(name: &str, sizes: Vec<usize>) -> ProObject<FinSet> {
    let at = move |n: usize| sizes[n.min(sizes.len() - 1)];
    let at2 = at.clone();
    ProObject::tower(
        FinSet,
        name,
        move |n| Ok(at(n)),
        move |n| {
            let (a, b) = (at2(n + 1), at2(n));
            FinSetMap::new(b, (0..a).map(|x| x.min(b - 1)).collect())
        },
    )
}

/// The built-in free-group sequence: every section with its checks.
pub fn inexactness_report(depth: usize) -> Result<Value, String> {
    guard(depth)?;
    let w = build_inexactness_witness(depth).map_err(|e| e.to_string())?;
    let sections: Vec<Value> = w
        .sections()
        .into_iter()
        .map(|(name, c)| json!({ "section": name, "verdict": c.verdict(), "checks": c.checks }))
        .collect();
    Ok(
        json!({ "depth": depth, "cutoff": w.cutoff, "verdict": w.certificate().verdict(), "sections": sections }),
    )
}

/// Classes of `Hom(X, Y)` on depth windows, at `depth` and one deeper.
pub fn homset_report(x: &str, y: &str, depth: usize) -> Result<Value, String> {
    guard(depth)?;
    let (xo, yo) = (
        clamp_tower("X", parse_sizes(x)?),
        clamp_tower("Y", parse_sizes(y)?),
    );
    let count = |d: usize| -> Result<usize, String> {
        let (xw, yw) = (
            xo.window(d).map_err(|e| e.to_string())?,
            yo.window(d).map_err(|e| e.to_string())?,
        );
        Ok(hom_bounded(&xw, &yw, HOM_CAP)
            .map_err(|e| e.to_string())?
            .count())
    };
    let (here, next) = (count(depth)?, count(depth + 1)?);
    Ok(json!({ "depth": depth, "classes": here, "classes_next": next, "stable": here == next }))
}

/// Level representation of a seeded commuting square of towers.
pub fn level_rep_report(seed: u32, depth: usize, junk: bool) -> Result<Value, String> {
    guard(depth)?;
    let (d, models) = random_square(u64::from(seed), 3, junk).map_err(|e| e.to_string())?;
    let budget = TruncationBudget::new(depth).with_slack(1);
    let lr = level_replace(&d, budget).map_err(|e| e.to_string())?;
    let cert = lr.verify(budget).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = lr
        .table(depth)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|r| json!({ "object": r.object, "s": r.s.to_string(), "f": r.f.to_string(), "h": r.h.to_string() }))
        .collect();
    let bases: Vec<Value> = models
        .iter()
        .map(|m| json!({ "name": m.name, "size": m.size, "partitions": m.chain }))
        .collect();
    Ok(
        json!({ "seed": seed, "depth": depth, "verdict": cert.verdict(), "checks": cert.checks, "models": bases, "rows": rows }),
    )
}

#[wasm_bindgen]
pub fn inexactness(depth: usize) -> String {
    render(inexactness_report(depth))
}

#[wasm_bindgen]
pub fn homset(x: &str, y: &str, depth: usize) -> String {
    render(homset_report(x, y, depth))
}

#[wasm_bindgen]
pub fn level_rep(seed: u32, depth: usize, junk: bool) -> String {
    render(level_rep_report(seed, depth, junk))
}

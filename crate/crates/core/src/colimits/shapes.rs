use crate::base::Category;
use crate::index::{FiniteShape, SequenceShape, ShapeArrow};
use crate::pro::{DiagramOfPro, ProMap, ProObject};
use crate::Result;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// The two-row diagram `B_n <- T_n -> B_{n+1}` with `T_n = B_n = X_n`,
/// the identity on the left and `f_n` on the right. Its colimit is the
/// colimit of the sequence.
pub fn build_sequential_shape<C: Category>(
    objects: impl Fn(usize) -> Result<ProObject<C>> + Send + Sync + 'static,
    maps: impl Fn(usize) -> Result<ProMap<C>> + Send + Sync + 'static,
) -> DiagramOfPro<C> {
    let memo: Arc<Mutex<HashMap<usize, ProObject<C>>>> = Arc::default();
    let level = Arc::new(move |n: usize| -> Result<ProObject<C>> {
        if let Some(x) = memo.lock().expect("memo").get(&n) {
            return Ok(x.clone());
        }
        let x = objects(n)?;
        memo.lock().expect("memo").insert(n, x.clone());
        Ok(x)
    });
    let l2 = level.clone();
    DiagramOfPro::new(
        Arc::new(SequenceShape),
        move |id| level(id / 2),
        move |a: &ShapeArrow| {
            let n = a.id / 2;
            let src = l2(n)?;
            if a.id % 2 == 0 {
                return Ok(ProMap::identity(&src));
            }
            let f = maps(n)?;
            Ok(ProMap::new(src, l2(n + 1)?, move |s| f.rep(s)))
        },
    )
}

/// A simplicial pro-object together with its tensors `X_n (x) Delta[m]`.
/// Monotone maps `[m] -> [n]` are given by their values.
pub trait Simplicial<C: Category>: Send + Sync + 'static {
    fn tensor(&self, n: usize, m: usize) -> Result<ProObject<C>>;
    /// `1 (x) phi_*: X_n (x) Delta[m] -> X_n (x) Delta[k]`.
    fn push(&self, n: usize, phi: &[usize], k: usize) -> Result<ProMap<C>>;
    /// `phi^* (x) 1: X_n (x) Delta[m] -> X_m (x) Delta[m]` for `phi: [m] -> [n]`.
    fn pull(&self, phi: &[usize], n: usize) -> Result<ProMap<C>>;
}

/// Monotone maps `[m] -> [n]` in lexicographic order.
pub fn monotone_maps(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m + 1 {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().copied().unwrap_or(0);
        for v in lo..=n {
            cur.push(v);
            rec(m, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, &mut Vec::new(), &mut out);
    out
}

/// Objects `X_n (x) Delta[n]` for `n <= n_max` (sources of no arrows), and
/// `X_n (x) Delta[m]` for each non-identity `phi: [m] -> [n]`, with one
/// arrow to `X_n (x) Delta[n]` and one to `X_m (x) Delta[m]`.
pub fn build_realization_shape<C: Category>(
    x: Arc<dyn Simplicial<C>>,
    n_max: usize,
) -> Result<DiagramOfPro<C>> {
    let mut names: Vec<String> = (0..=n_max).map(|n| format!("X{n}.D{n}")).collect();
    let mut cells: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for n in 0..=n_max {
        for m in 0..=n_max {
            for phi in monotone_maps(m, n) {
                if m == n && phi.iter().enumerate().all(|(i, &v)| i == v) {
                    continue;
                }
                let label: Vec<String> = phi.iter().map(usize::to_string).collect();
                names.push(format!("X{n}.D{m}[{}]", label.join("")));
                cells.push((n, m, phi));
            }
        }
    }
    let mut arrows: Vec<(String, usize, usize)> = Vec::new();
    for (i, (n, m, _)) in cells.iter().enumerate() {
        let id = n_max + 1 + i;
        arrows.push((format!("push{i}"), id, *n));
        arrows.push((format!("pull{i}"), id, *m));
    }
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let arrow_refs: Vec<(&str, usize, usize)> = arrows
        .iter()
        .map(|(s, a, b)| (s.as_str(), *a, *b))
        .collect();
    let shape = FiniteShape::new(&name_refs, &arrow_refs, &[])?;
    let mut objects = Vec::new();
    for n in 0..=n_max {
        objects.push(x.tensor(n, n)?);
    }
    for (n, m, _) in &cells {
        objects.push(x.tensor(*n, *m)?);
    }
    let mut maps = Vec::new();
    for a in &shape.shape().arrows {
        let (n, _, phi) = &cells[a.source - n_max - 1];
        let f = if a.name.starts_with("push") {
            x.push(*n, phi, *n)?
        } else {
            x.pull(phi, *n)?
        };
        let (src, tgt) = (objects[a.source].clone(), objects[a.target].clone());
        maps.push(ProMap::new(src, tgt, move |s| f.rep(s)));
    }
    DiagramOfPro::finite(shape, objects, maps)
}

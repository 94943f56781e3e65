//! Seeded random instances.
//!
//! A partition model is a finite set `S` with a chain of partitions, each
//! refining the previous one and discrete from some level on. Level `k` of
//! its tower is `S / P_k`, optionally with one junk point that the bonding
//! maps send to the class of element 0, so bonding maps miss it. Maps of
//! partition models come from functions `S -> T` and give pro-maps whose
//! representatives carry a chosen delay. With junk the functions must fix
//! element 0, since bonding maps send junk to the class of 0; the
//! representatives send junk to the last class, which makes naturality
//! squares commute only after refining.

use crate::base::{Category, FinAb, FinAbMap, FinAbObj, FinSet, FinSetMap, IntMatrix};
use crate::index::{FiniteShape, Ix};
use crate::limits::DirectedDiagram;
use crate::pro::{DiagramOfPro, ProMap, ProObject};
use crate::{ProError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionModel {
    pub name: String,
    pub size: usize,
    /// `chain[k][x]` is the class of `x` at level `k`, classes numbered by
    /// first occurrence. The last entry is repeated forever.
    pub chain: Vec<Vec<usize>>,
    pub junk: bool,
}

fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|x| x == l) {
            Some(i) => i,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect()
}

impl PartitionModel {
    /// A random chain of `levels` partitions ending discrete.
    pub fn random(rng: &mut impl Rng, name: &str, size: usize, levels: usize, junk: bool) -> Self {
        let mut chain = vec![(0..size).collect::<Vec<_>>()];
        for _ in 1..levels.max(1) {
            let finer = chain.last().expect("nonempty").clone();
            // Coarsen by merging a random pair of classes.
            let k = finer.iter().max().map_or(0, |m| m + 1);
            let coarser = if k >= 2 {
                let (a, b) = (rng.gen_range(0..k), rng.gen_range(0..k));
                finer
                    .iter()
                    .map(|&c| if c == b { a } else { c })
                    .collect::<Vec<_>>()
            } else {
                finer.clone()
            };
            chain.push(canonical(&coarser));
        }
        chain.reverse();
        PartitionModel {
            name: name.into(),
            size,
            chain,
            junk,
        }
    }

    fn labels(&self, k: usize) -> &[usize] {
        &self.chain[k.min(self.chain.len() - 1)]
    }

    pub fn classes(&self, k: usize) -> usize {
        self.labels(k).iter().max().map_or(0, |m| m + 1)
    }

    pub fn level_size(&self, k: usize) -> usize {
        self.classes(k) + usize::from(self.junk)
    }

    fn step(&self, k: usize) -> Result<FinSetMap> {
        let (fine, coarse) = (self.labels(k + 1), self.labels(k));
        let mut assign = vec![0usize; self.level_size(k + 1)];
        for x in 0..self.size {
            assign[fine[x]] = coarse[x];
        }
        if self.junk {
            assign[self.classes(k + 1)] = coarse.first().copied().unwrap_or(0);
        }
        FinSetMap::new(self.level_size(k), assign)
    }

    pub fn pro_object(&self) -> ProObject<FinSet> {
        let (a, b) = (self.clone(), self.clone());
        ProObject::tower(
            FinSet,
            self.name.clone(),
            move |k| Ok(a.level_size(k)),
            move |k| b.step(k),
        )
    }

    /// Least level whose partition refines the pullback of `target`'s
    /// level-`k` partition along `g`.
    pub fn refining_level(&self, g: &[usize], target: &PartitionModel, k: usize) -> usize {
        let tl = target.labels(k);
        (0..self.chain.len())
            .find(|&j| {
                let sl = self.labels(j);
                (0..self.size)
                    .all(|x| (0..self.size).all(|y| sl[x] != sl[y] || tl[g[x]] == tl[g[y]]))
            })
            .unwrap_or(self.chain.len() - 1)
    }

    fn induced(
        &self,
        g: &[usize],
        target: &PartitionModel,
        j: usize,
        k: usize,
    ) -> Result<FinSetMap> {
        let (sl, tl) = (self.labels(j), target.labels(k));
        let mut assign = vec![0usize; self.level_size(j)];
        for x in 0..self.size {
            assign[sl[x]] = tl[g[x]];
        }
        if self.junk {
            // Junk leaves the image of deeper levels, so its value only
            // has to agree after refining: send it to the last class.
            assign[self.classes(j)] = target.classes(k).saturating_sub(1);
        }
        FinSetMap::new(target.level_size(k), assign)
    }
}

/// The pro-map induced by `g: S -> T`, with representatives taken `delay`
/// levels deeper than necessary.
pub fn partition_map(
    source: &PartitionModel,
    target: &PartitionModel,
    xs: &ProObject<FinSet>,
    ys: &ProObject<FinSet>,
    g: Vec<usize>,
    delay: usize,
) -> Result<ProMap<FinSet>> {
    if g.len() != source.size || g.iter().any(|&y| y >= target.size) {
        return Err(ProError::Invalid(
            "function does not run between the base sets".into(),
        ));
    }
    if source.junk && g.first().is_some_and(|&y| y != 0) {
        return Err(ProError::Invalid(
            "maps of models with junk must fix element 0".into(),
        ));
    }
    let (s, t) = (source.clone(), target.clone());
    Ok(ProMap::new(xs.clone(), ys.clone(), move |k| {
        let k = k.0[0];
        let j = s.refining_level(&g, &t, k).max(k) + delay;
        Ok((Ix::nat(j), s.induced(&g, &t, j, k)?))
    }))
}

/// A random function fixing 0.
fn random_fn(rng: &mut impl Rng, n: usize, m: usize) -> Vec<usize> {
    (0..n)
        .map(|x| if x == 0 { 0 } else { rng.gen_range(0..m) })
        .collect()
}

type Generators = Vec<(usize, usize, Vec<usize>)>;

/// Base sets, models and generator functions of a square `a -> b -> d`,
/// `a -> c -> d` that commutes on base sets.
fn square_parts(r: &mut impl Rng, levels: usize, junk: bool) -> (Vec<PartitionModel>, Generators) {
    let sizes: Vec<usize> = (0..4).map(|_| r.gen_range(1..=4)).collect();
    let (sa, sb, sc, sd) = (sizes[0], sizes[1], sizes[2], sizes[3]);
    let (ab, bd) = (random_fn(r, sa, sb), random_fn(r, sb, sd));
    // c -> d surjective so every a -> c has a lift.
    let sc = sc.max(sd);
    let cd: Vec<usize> = (0..sc).map(|i| i % sd).collect();
    let ac: Vec<usize> = (0..sa)
        .map(|x| {
            if x == 0 {
                return 0;
            }
            let target = bd[ab[x]];
            let lifts: Vec<usize> = (0..sc).filter(|&y| cd[y] == target).collect();
            lifts[r.gen_range(0..lifts.len())]
        })
        .collect();
    let names = ["a", "b", "c", "d"];
    let sizes = [sa, sb, sc, sd];
    let models = (0..4)
        .map(|i| PartitionModel::random(r, names[i], sizes[i], levels, junk))
        .collect();
    (models, vec![(0, 1, ab), (0, 2, ac), (1, 3, bd), (2, 3, cd)])
}

/// The composite of generator functions along some path `s -> t`.
fn path_function(
    gens: &[(usize, usize, Vec<usize>)],
    sizes: &[usize],
    s: usize,
    t: usize,
) -> Option<Vec<usize>> {
    if s == t {
        return Some((0..sizes[s]).collect());
    }
    gens.iter()
        .filter(|(a, _, _)| *a == s)
        .find_map(|(_, b, g)| {
            let rest = path_function(gens, sizes, *b, t)?;
            Some(g.iter().map(|&x| rest[x]).collect())
        })
}

/// The thin diagram on the generators, each arrow carrying the composite
/// function and its own random delay.
fn thin_diagram(
    r: &mut impl Rng,
    models: &[PartitionModel],
    gens: &[(usize, usize, Vec<usize>)],
) -> Result<DiagramOfPro<FinSet>> {
    let names: Vec<&str> = models.iter().map(|m| m.name.as_str()).collect();
    let pairs: Vec<(usize, usize)> = gens.iter().map(|(s, t, _)| (*s, *t)).collect();
    let shape = FiniteShape::thin(&names, &pairs)?;
    let objs: Vec<ProObject<FinSet>> = models.iter().map(|m| m.pro_object()).collect();
    let sizes: Vec<usize> = models.iter().map(|m| m.size).collect();
    let mut maps = Vec::new();
    for arrow in &shape.shape().arrows {
        let g =
            path_function(gens, &sizes, arrow.source, arrow.target).expect("path in a thin shape");
        let delay = r.gen_range(0..3);
        maps.push(partition_map(
            &models[arrow.source],
            &models[arrow.target],
            &objs[arrow.source],
            &objs[arrow.target],
            g,
            delay,
        )?);
    }
    DiagramOfPro::finite(shape, objs, maps)
}

/// A commuting square `a -> b -> d`, `a -> c -> d` (with diagonal) of
/// partition-model towers, each arrow with its own random delay.
pub fn random_square(
    seed: u64,
    levels: usize,
    junk: bool,
) -> Result<(DiagramOfPro<FinSet>, Vec<PartitionModel>)> {
    let mut r = rng(seed);
    let (models, gens) = square_parts(&mut r, levels, junk);
    Ok((thin_diagram(&mut r, &models, &gens)?, models))
}

/// A random square followed by a chain `d -> t1 -> ... -> t_tail`.
pub fn random_square_with_tail(
    seed: u64,
    levels: usize,
    tail: usize,
    junk: bool,
) -> Result<DiagramOfPro<FinSet>> {
    let mut r = rng(seed);
    let (mut models, mut gens) = square_parts(&mut r, levels, junk);
    for k in 0..tail {
        let prev = models.len() - 1;
        let size = r.gen_range(1..=3);
        gens.push((prev, prev + 1, random_fn(&mut r, models[prev].size, size)));
        models.push(PartitionModel::random(
            &mut r,
            &format!("t{}", k + 1),
            size,
            levels,
            junk,
        ));
    }
    thin_diagram(&mut r, &models, &gens)
}

/// A span `b <- a -> c` of partition-model towers with random functions
/// and delays.
pub fn random_span(
    seed: u64,
    levels: usize,
    junk: bool,
) -> Result<(DiagramOfPro<FinSet>, Vec<PartitionModel>)> {
    let mut r = rng(seed);
    let names = ["a", "b", "c"];
    let models: Vec<PartitionModel> = names
        .iter()
        .map(|n| {
            let size = r.gen_range(1..=3);
            PartitionModel::random(&mut r, n, size, levels, junk)
        })
        .collect();
    let objs: Vec<ProObject<FinSet>> = models.iter().map(|m| m.pro_object()).collect();
    let shape = FiniteShape::span();
    let mut maps = Vec::new();
    for arrow in &shape.shape().arrows {
        let g = random_fn(&mut r, models[arrow.source].size, models[arrow.target].size);
        let delay = r.gen_range(0..3);
        maps.push(partition_map(
            &models[arrow.source],
            &models[arrow.target],
            &objs[arrow.source],
            &objs[arrow.target],
            g,
            delay,
        )?);
    }
    Ok((DiagramOfPro::finite(shape, objs, maps)?, models))
}

/// A tower `X^0 <- X^1 <- ...` of partition-model towers: `length` random
/// models, then the last one repeated with identities.
pub fn random_tower_of_towers(
    seed: u64,
    length: usize,
    levels: usize,
    junk: bool,
) -> Result<(DirectedDiagram<FinSet>, Vec<PartitionModel>)> {
    let mut r = rng(seed);
    let length = length.max(1);
    let models: Vec<PartitionModel> = (0..length)
        .map(|n| {
            let size = r.gen_range(1..=3);
            PartitionModel::random(&mut r, &format!("x{n}"), size, levels, junk)
        })
        .collect();
    let objs: Vec<ProObject<FinSet>> = models.iter().map(|m| m.pro_object()).collect();
    let mut steps = Vec::new();
    for n in 0..length - 1 {
        let g = random_fn(&mut r, models[n + 1].size, models[n].size);
        let delay = r.gen_range(0..3);
        steps.push(partition_map(
            &models[n + 1],
            &models[n],
            &objs[n + 1],
            &objs[n],
            g,
            delay,
        )?);
    }
    let last = objs.len() - 1;
    let o2 = objs.clone();
    let d = DirectedDiagram::tower(
        move |n| Ok(objs[n.min(last)].clone()),
        move |n| match steps.get(n) {
            Some(f) => Ok(f.clone()),
            None => Ok(ProMap::identity(&o2[last])),
        },
    );
    Ok((d, models))
}

/// A tower over `a` of diagrams of shape `b` of partition-model towers.
/// Each object of `b` has a base set (at most three points, plus junk);
/// each arrow of `b` a random function fixing 0. Row `a` uses its own
/// random partitions for `a < length` and repeats row `length - 1` after.
/// Arrows are induced by the functions (identities along `a`) with random
/// delays.
pub fn random_tower_of_diagrams(
    seed: u64,
    b: &FiniteShape,
    length: usize,
    levels: usize,
) -> Result<DiagramOfPro<FinSet>> {
    let mut r = rng(seed);
    let w = b.shape().clone();
    let sizes: Vec<usize> = w.objects.iter().map(|_| r.gen_range(1..=3)).collect();
    let slot = {
        let w = w.clone();
        move |id: usize| {
            w.objects
                .iter()
                .position(|o| o.id == id)
                .expect("object of B")
        }
    };
    let funcs: Vec<Vec<usize>> = w
        .arrows
        .iter()
        .map(|a| random_fn(&mut r, sizes[slot(a.source)], sizes[slot(a.target)]))
        .collect();
    let length = length.max(1);
    let rows: Vec<Vec<PartitionModel>> = (0..length)
        .map(|a| {
            w.objects
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    PartitionModel::random(
                        &mut r,
                        &format!("X{a}{}", o.name),
                        sizes[i],
                        levels,
                        true,
                    )
                })
                .collect()
        })
        .collect();
    let objs: Vec<Vec<ProObject<FinSet>>> = rows
        .iter()
        .map(|row| row.iter().map(|m| m.pro_object()).collect())
        .collect();
    let delay_seed = r.gen::<u64>();
    let model = move |a: usize, i: usize| {
        (
            rows[a.min(length - 1)][i].clone(),
            objs[a.min(length - 1)][i].clone(),
        )
    };
    let m2 = model.clone();
    let (s1, s2) = (slot.clone(), slot);
    Ok(crate::theorems::tower_of_diagrams(
        b.clone(),
        move |a, o| Ok(m2(a, s1(o)).1),
        move |a, a2, phi, o| {
            let (i, g, code) = match phi {
                Some(p) => {
                    let k = w
                        .arrows
                        .iter()
                        .position(|x| x.id == p.id)
                        .expect("arrow of B");
                    (s2(p.target), funcs[k].clone(), 2 * p.id + 1)
                }
                None => (s2(o), (0..sizes[s2(o)]).collect(), 2 * o),
            };
            let ((ms, xs), (mt, xt)) = (model(a, s2(o)), model(a2, i));
            let delay = (delay_seed
                ^ (a as u64 * 7919 + a2 as u64 * 104729 + code as u64 * 15485863))
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                >> 63;
            partition_map(&ms, &mt, &xs, &xt, g, delay as usize)
        },
    ))
}

/// A retract pair `r . i = 1` in finite sets: `i: n -> m`, `r: m -> n`.
pub fn finset_retract(rng: &mut impl Rng, n: usize, extra: usize) -> (FinSetMap, FinSetMap) {
    let m = n + extra;
    let mut slots: Vec<usize> = (0..m).collect();
    for k in (1..m).rev() {
        slots.swap(k, rng.gen_range(0..=k));
    }
    let i = FinSetMap::new(m, slots[..n].to_vec()).expect("injection");
    let mut r_assign = vec![0usize; m];
    for (x, &y) in slots.iter().enumerate() {
        r_assign[y] = if x < n {
            x
        } else if n > 0 {
            rng.gen_range(0..n)
        } else {
            0
        };
    }
    let r = FinSetMap::new(n, r_assign).expect("retraction");
    debug_assert_eq!(FinSet.compose(&r, &i).ok(), Some(FinSet.identity(&n)));
    (i, r)
}

/// A retraction of partition-model towers: `X` on `S`, `Y` on `S + E`
/// with the points of `E` as extra classes, `f` induced by the inclusion
/// and `g` by a retraction `S + E -> S`. Also returns `|S + E|`, which
/// bounds every level of `Y`.
pub fn random_finset_retract(
    seed: u64,
    levels: usize,
) -> Result<(ProMap<FinSet>, ProMap<FinSet>, usize)> {
    let mut r = rng(seed);
    let n = r.gen_range(1..=3);
    let extra = r.gen_range(1..=2);
    let x = PartitionModel::random(&mut r, "X", n, levels, false);
    let (incl, retr) = finset_retract(&mut r, n, extra);
    let m = n + extra;
    // Pull the partitions of X back along the retraction, then split off
    // the extra points one level at a time.
    let chain = (0..x.chain.len())
        .map(|k| {
            let labels: Vec<usize> = (0..m)
                .map(|y| {
                    let base = x.chain[k][retr.apply(y)];
                    let own = (0..n).any(|s| incl.apply(s) == y);
                    if own || k == 0 {
                        base
                    } else {
                        m + y
                    }
                })
                .collect();
            canonical(&labels)
        })
        .collect();
    let y = PartitionModel {
        name: "Y".into(),
        size: m,
        chain,
        junk: false,
    };
    let (xs, ys) = (x.pro_object(), y.pro_object());
    let f = partition_map(&x, &y, &xs, &ys, incl.values().to_vec(), r.gen_range(0..2))?;
    let g = partition_map(&y, &x, &ys, &xs, retr.values().to_vec(), r.gen_range(0..2))?;
    Ok((f, g, m))
}

/// `X = ... -> Z/p^2 -> Z/p`, `Y = X + c(Z/q)`, with the inclusion and the
/// projection, representatives `delay` levels deep. Also returns a bound on
/// the orders of the levels of `Y` up to `depth`.
pub fn random_finab_retract(
    seed: u64,
    depth: usize,
) -> Result<(ProMap<FinAb>, ProMap<FinAb>, u64)> {
    let mut r = rng(seed);
    let p: u64 = [2, 3][r.gen_range(0..2)];
    let q: u64 = r.gen_range(2..=4);
    let xl = move |k: usize| FinAbObj::cyclic(p.pow(k as u32 + 1));
    let yl = move |k: usize| FinAbObj::new(vec![p.pow(k as u32 + 1), q]);
    let x = ProObject::tower(
        FinAb,
        "X",
        move |k| Ok(xl(k)),
        move |k| FinAbMap::reduction(xl(k + 1), xl(k)),
    );
    let y = ProObject::tower(
        FinAb,
        "Y",
        move |k| yl(k),
        move |k| FinAbMap::new(yl(k + 1)?, yl(k)?, IntMatrix::identity(2)),
    );
    let (df, dg) = (r.gen_range(0..2), r.gen_range(0..2));
    let x2 = x.clone();
    let f = ProMap::new(x.clone(), y.clone(), move |k| {
        let j = Ix::nat(k.0[0] + df);
        let down = x2.structure(&j, k)?;
        let incl = FinAbMap::new(
            xl(k.0[0]),
            yl(k.0[0])?,
            IntMatrix::from_rows(2, 1, &[vec![1], vec![0]]),
        )?;
        Ok((j, FinAb.compose(&incl, &down)?))
    });
    let y2 = y.clone();
    let g = ProMap::new(y, x, move |k| {
        let j = Ix::nat(k.0[0] + dg);
        let down = y2.structure(&j, k)?;
        let proj = FinAbMap::new(
            yl(k.0[0])?,
            xl(k.0[0]),
            IntMatrix::from_rows(1, 2, &[vec![1, 0]]),
        )?;
        Ok((j, FinAb.compose(&proj, &down)?))
    });
    Ok((f, g, p.pow(depth as u32 + 4) * q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::TruncationBudget;

    #[test]
    fn partition_towers_are_functorial() {
        let mut r = rng(7);
        for junk in [false, true] {
            let m = PartitionModel::random(&mut r, "x", 4, 4, junk);
            assert_eq!(
                m.pro_object().validate(6).unwrap().verdict,
                crate::Verdict::Certified
            );
        }
    }

    #[test]
    fn random_square_is_a_diagram() {
        for seed in 0..4 {
            let (d, _) = random_square(seed, 3, true).unwrap();
            assert!(
                d.validate(TruncationBudget::new(3))
                    .unwrap()
                    .all_certified(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn square_with_tail_is_a_diagram() {
        for seed in 0..4 {
            let d = random_square_with_tail(seed, 3, 2, seed % 2 == 1).unwrap();
            assert_eq!(d.shape.window(0).objects.len(), 6);
            assert!(
                d.validate(TruncationBudget::new(3))
                    .unwrap()
                    .all_certified(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn retracts_split() {
        let mut r = rng(1);
        for n in 1..4 {
            let (i, rt) = finset_retract(&mut r, n, 2);
            assert_eq!(FinSet.compose(&rt, &i).unwrap(), FinSet.identity(&n));
        }
    }
}

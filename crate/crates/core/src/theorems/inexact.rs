//! The tower `A[0,m]` of free abelian groups and the maps that show a
//! filtered colimit of monomorphisms in pro-A need not be a monomorphism.
//!
//! `A` has basis `a_0, a_1, …`; here it is cut off at `a_N` with `N` past
//! every window the checks look at, so that no comparison sees the cut.

use crate::base::{Abelian, Category, Cocone, FreeAb, FreeAbMap, FreeAbObj};
use crate::colimits::{build_sequential_shape, cofinite_colimit};
use crate::index::{Chain, Ix, TruncationBudget};
use crate::pro::{certify_iso, promap_equal, Equality, ProMap, ProObject};
use crate::{Certificate, Check, ProError, Result, Verdict};
use std::sync::Arc;

pub struct InexactnessWitness {
    pub depth: usize,
    /// Largest basis label kept.
    pub cutoff: u32,
    /// `... -> A[0,1] -> A[0,0]` with the projections.
    pub x: ProObject<FreeAb>,
    /// `c A[0,n]` for `n <= depth + 1`.
    pub rows: Vec<ProObject<FreeAb>>,
    pub f_n: Vec<ProMap<FreeAb>>,
    /// The constant `cA`.
    pub a: ProObject<FreeAb>,
    pub f: ProMap<FreeAb>,
    /// `... -> A[1,∞) -> A[0,∞)` with the inclusions.
    pub y: ProObject<FreeAb>,
    pub g: ProMap<FreeAb>,
    pub mono: Certificate,
    pub ladder: Certificate,
    pub fg_zero: Certificate,
    pub g_nonzero: Certificate,
    pub colimit: Certificate,
}

impl InexactnessWitness {
    /// Named sections in report order.
    pub fn sections(&self) -> Vec<(&'static str, &Certificate)> {
        vec![
            ("f_n level-mono", &self.mono),
            ("ladder commutes", &self.ladder),
            ("fg = 0", &self.fg_zero),
            ("g != 0", &self.g_nonzero),
            ("colim c A[0,n] = cA", &self.colimit),
        ]
    }

    pub fn certificate(&self) -> Certificate {
        let mut c = Certificate::new();
        for (_, s) in self.sections() {
            c.extend(s.clone());
        }
        c
    }
}

fn head(m: u32) -> FreeAbObj {
    FreeAbObj::range(0, m)
}

fn nat(n: usize) -> Ix {
    Ix::nat(n)
}

fn zero_map(x: &ProObject<FreeAb>, y: &ProObject<FreeAb>) -> ProMap<FreeAb> {
    let (x1, y1) = (x.clone(), y.clone());
    let bottom = x.index().bottom();
    ProMap::new(x.clone(), y.clone(), move |s| {
        Ok((
            bottom.clone(),
            FreeAb.zero_map(&x1.level(&bottom)?, &y1.level(s)?),
        ))
    })
}

pub fn build_inexactness_witness(depth: usize) -> Result<InexactnessWitness> {
    let budget = TruncationBudget::new(depth).with_slack(1);
    let cutoff = (depth + 3) as u32;
    let big = head(cutoff);
    let x = ProObject::tower(
        FreeAb,
        "X",
        |m| Ok(head(m as u32)),
        |m| Ok(FreeAbMap::canonical(&head(m as u32 + 1), &head(m as u32))),
    );
    let a = ProObject::constant(FreeAb, big.clone());
    let tail = move |n: usize| FreeAbObj::range(n as u32, cutoff);
    let y = ProObject::tower(
        FreeAb,
        "Y",
        move |n| Ok(tail(n)),
        move |n| Ok(FreeAbMap::canonical(&tail(n + 1), &tail(n))),
    );
    let into_x = |src: &ProObject<FreeAb>, obj: FreeAbObj| {
        ProMap::new(src.clone(), x.clone(), move |m| {
            Ok((
                Ix::point(),
                FreeAbMap::canonical(&obj, &head(m.0[0] as u32)),
            ))
        })
    };
    let rows: Vec<ProObject<FreeAb>> = (0..=depth + 1)
        .map(|n| ProObject::constant(FreeAb, head(n as u32)))
        .collect();
    let f_n: Vec<ProMap<FreeAb>> = rows
        .iter()
        .enumerate()
        .map(|(n, r)| into_x(r, head(n as u32)))
        .collect();
    let f = into_x(&a, big.clone());
    let big2 = big.clone();
    let g = ProMap::new(y.clone(), a.clone(), move |_| {
        Ok((nat(0), FreeAbMap::canonical(&tail(0), &big2)))
    });

    let mut mono = Certificate::new();
    for n in 1..=depth.max(1) {
        mono.push(level_mono(&x, &rows[n], &f_n[n], n, budget)?);
    }

    let mut ladder = Certificate::new();
    for n in 0..=depth {
        let step = constant_map(&rows[n], &rows[n + 1]);
        ladder.push(
            promap_equal(&f_n[n + 1].after(&step), &f_n[n], budget)?
                .to_check(&format!("f_{} . i = f_{n}", n + 1)),
        );
        let into_a = constant_map(&rows[n], &a);
        ladder.push(
            promap_equal(&f.after(&into_a), &f_n[n], budget)?
                .to_check(&format!("f . i_{n} = f_{n}")),
        );
    }

    let mut fg_zero = Certificate::new();
    let fg = f.after(&g);
    let eq = promap_equal(&fg, &zero_map(&y, &x), budget)?;
    let mut c = eq.to_check("fg = 0");
    if let Equality::Equal { witnesses, .. } = &eq {
        c.witnesses = witnesses
            .iter()
            .map(|(m, n)| format!("A[{n},oo) -> A -> A[0,{m}] is zero"))
            .collect();
        if let Some((m, n)) = witnesses.iter().find(|(m, n)| n.0[0] != m.0[0] + 1) {
            c.verdict = Verdict::Refuted;
            c.witnesses
                .push(format!("first vanishing level for {m} is {n}"));
        }
    }
    fg_zero.push(c);

    let mut g_nonzero = Certificate::new();
    let eq = promap_equal(&g, &zero_map(&y, &a), budget)?;
    let c = match eq {
        Equality::Distinct { at, depth } => Check::certified("g != 0", depth)
            .with_witness(format!("no level of Y equalizes g and 0 at {at}")),
        Equality::Equal { depth, .. } => Check::new("g != 0", Verdict::Refuted, depth),
        Equality::Undetermined { depth, .. } => Check::new("g != 0", Verdict::Undetermined, depth),
    };
    g_nonzero.push(c);
    let (_, g0) = g.rep(&Ix::point())?;
    for n in 0..=depth {
        let m = FreeAb.compose(&g0, &y.structure(&nat(n), &nat(0))?)?;
        let name = format!("A[{n},oo) -> A");
        g_nonzero.push(if FreeAb.is_zero(&m) {
            Check::new(name, Verdict::Refuted, depth)
        } else {
            Check::certified(name, depth).with_witness(format!("a_{n} -> a_{n}"))
        });
    }

    let colimit = row_colimit(cutoff, &a, depth)?;
    Ok(InexactnessWitness {
        depth,
        cutoff,
        x,
        rows,
        f_n,
        a,
        f,
        y,
        g,
        mono,
        ladder,
        fg_zero,
        g_nonzero,
        colimit,
    })
}

fn constant_map(src: &ProObject<FreeAb>, tgt: &ProObject<FreeAb>) -> ProMap<FreeAb> {
    let (s, t) = (
        src.level(&Ix::point()).expect("constant"),
        tgt.level(&Ix::point()).expect("constant"),
    );
    let m = FreeAbMap::canonical(&s, &t);
    ProMap::levelwise(src.clone(), tgt.clone(), move |_| Ok(m.clone()))
}

/// The ladder `A[0,n] -> A[0,n+k]` over `k`: a level map from the constant
/// tower to `X` shifted by `n`, with inclusions as vertical maps.
fn level_mono(
    x: &ProObject<FreeAb>,
    row: &ProObject<FreeAb>,
    f_n: &ProMap<FreeAb>,
    n: usize,
    budget: TruncationBudget,
) -> Result<Check> {
    let name = format!("f_{n} level-mono");
    let src = head(n as u32);
    let s2 = src.clone();
    let top = ProObject::tower(
        FreeAb,
        format!("c A[0,{n}] over N"),
        move |_| Ok(s2.clone()),
        {
            let s = src.clone();
            move |_| Ok(FreeAb.identity(&s))
        },
    );
    let (x1, x2) = (x.clone(), x.clone());
    let shifted = ProObject::new(
        FreeAb,
        format!("X[{n}+k]"),
        Arc::new(Chain),
        move |k| x1.level(&nat(n + k.0[0])),
        move |t, s| x2.structure(&nat(n + t.0[0]), &nat(n + s.0[0])),
    );
    let s3 = src.clone();
    let vertical = move |k: usize| FreeAbMap::canonical(&s3, &head((n + k) as u32));
    for k in 0..=budget.depth {
        if !FreeAb.is_mono(&vertical(k))? {
            return Ok(Check::new(name, Verdict::Refuted, budget.depth)
                .with_witness(format!("A[0,{n}] -> A[0,{}]", n + k)));
        }
        if k > 0 {
            let lhs = FreeAb.compose(&shifted.structure(&nat(k), &nat(k - 1))?, &vertical(k))?;
            let rhs = FreeAb.compose(&vertical(k - 1), &top.structure(&nat(k), &nat(k - 1))?)?;
            if lhs != rhs {
                return Ok(Check::new(name, Verdict::Refuted, budget.depth)
                    .with_witness(format!("square at {k} does not commute")));
            }
        }
    }
    let ladder = ProMap::levelwise(top.clone(), shifted.clone(), move |k| Ok(vertical(k.0[0])));
    let into_top = ProMap::new(row.clone(), top.clone(), {
        let s = src.clone();
        move |_| Ok((Ix::point(), FreeAb.identity(&s)))
    });
    let x3 = x.clone();
    let unshift = ProMap::new(shifted.clone(), x.clone(), move |m| {
        let k = m.0[0];
        Ok((
            nat(k.saturating_sub(n)),
            x3.structure(&nat(n + k.saturating_sub(n)), m)?,
        ))
    });
    let eq = promap_equal(&unshift.after(&ladder).after(&into_top), f_n, budget)?;
    let mut c = eq.to_check(&name);
    if c.verdict.is_certified() {
        c.witnesses = vec![format!(
            "A[0,{n}] -> A[0,{n}+k] injective for k <= {}",
            budget.depth
        )];
    }
    Ok(c)
}

/// `colim_n c A[0,n]` over the sequential shape, compared with `cA` along
/// the map induced by the inclusions.
fn row_colimit(cutoff: u32, a: &ProObject<FreeAb>, depth: usize) -> Result<Certificate> {
    let obj = move |n: usize| head((n as u32).min(cutoff));
    let d = build_sequential_shape(
        move |n| Ok(ProObject::constant(FreeAb, obj(n))),
        move |n| {
            let (s, t) = (obj(n), obj(n + 1));
            let m = FreeAbMap::canonical(&s, &t);
            Ok(ProMap::levelwise(
                ProObject::constant(FreeAb, s),
                ProObject::constant(FreeAb, t),
                move |_| Ok(m.clone()),
            ))
        },
    );
    let shape_depth = cutoff as usize + 2;
    let z = cofinite_colimit(&d, TruncationBudget::new(shape_depth).with_slack(1))?;
    let mut cert = Certificate::new();
    cert.push(z.stable.clone());
    let big = a.level(&Ix::point())?;
    let levels = z.bar.levels.clone();
    let z_obj = z.object.clone();
    let out = ProMap::new(z_obj.clone(), a.clone(), move |_| {
        let s = z_obj.index().bottom();
        let (diag, colim) = levels.cocone(&s)?;
        let legs = diag
            .objects
            .iter()
            .map(|o| FreeAbMap::canonical(o, &big))
            .collect();
        Ok((
            s,
            FreeAb.colimit_factor(
                &diag,
                &colim,
                &Cocone {
                    apex: big.clone(),
                    legs,
                },
            )?,
        ))
    });
    let bottom = z.object.index().bottom();
    let rank = z.object.level(&bottom)?.rank();
    let name = "rank of the colimit";
    cert.push(if rank == cutoff as usize + 1 {
        Check::certified(name, depth).with_witness(format!("rank {rank} = rank A[0,{cutoff}]"))
    } else {
        Check::new(name, Verdict::Refuted, depth).with_witness(format!("rank {rank}"))
    });
    let last = z
        .bar
        .window()
        .objects
        .iter()
        .position(|o| o.id / 2 == cutoff as usize)
        .ok_or_else(|| ProError::Invalid("shape window misses the cutoff".into()))?;
    let leg = &z.legs[last];
    let back = ProMap::new(a.clone(), z.object.clone(), {
        let leg = leg.clone();
        move |s| leg.rep(s)
    });
    cert.extend(certify_iso(
        &out,
        &back,
        TruncationBudget::new(0).with_slack(1),
    )?);
    Ok(cert)
}

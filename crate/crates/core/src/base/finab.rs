//! Finite abelian groups `Z/n_1 ⊕ … ⊕ Z/n_k` and homomorphisms given by
//! integer matrices reduced modulo the target orders.

use super::intmat::{kernel_basis, smith, IntMatrix};
use super::{Abelian, Category, Cocone, Cone, FiniteDiagram};
use crate::error::{ProError, Result};
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FinAb;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbObj {
    orders: Vec<u64>,
}

impl FinAbObj {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.iter().any(|n| *n == 0) {
            return Err(ProError::Invalid(
                "cyclic factor of order 0 is not finite".into(),
            ));
        }
        Ok(FinAbObj { orders })
    }

    pub fn cyclic(n: u64) -> Self {
        FinAbObj::new(vec![n]).expect("positive order")
    }

    pub fn zero() -> Self {
        FinAbObj { orders: Vec::new() }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// All elements in lexicographic order (last coordinate fastest).
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for n in &self.orders {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..*n as i64).map(move |v| {
                        let mut e = prefix.clone();
                        e.push(v);
                        e
                    })
                })
                .collect();
        }
        out
    }

    fn reduce(&self, v: &mut [i64]) {
        for (x, n) in v.iter_mut().zip(&self.orders) {
            *x = x.rem_euclid(*n as i64);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinAbMap {
    source: FinAbObj,
    target: FinAbObj,
    matrix: IntMatrix,
}

impl FinAbMap {
    /// `matrix` has one row per target factor and one column per source
    /// factor. Entries are reduced; the map must be well defined.
    pub fn new(source: FinAbObj, target: FinAbObj, mut matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(ProError::Invalid(
                "matrix shape does not match the groups".into(),
            ));
        }
        for i in 0..matrix.rows() {
            let t = target.orders[i] as i64;
            for j in 0..matrix.cols() {
                let v = matrix.get(i, j).rem_euclid(t);
                if (v * source.orders[j] as i64) % t != 0 {
                    return Err(ProError::Invalid(format!(
                        "entry ({i},{j}) = {v} is not well defined from Z/{} to Z/{t}",
                        source.orders[j]
                    )));
                }
                matrix.set(i, j, v);
            }
        }
        Ok(FinAbMap {
            source,
            target,
            matrix,
        })
    }

    /// The canonical reduction `Z/n → Z/m` (`m | n`), extended componentwise.
    pub fn reduction(source: FinAbObj, target: FinAbObj) -> Result<Self> {
        let k = source.rank().min(target.rank());
        let mut m = IntMatrix::zeros(target.rank(), source.rank());
        for i in 0..k {
            m.set(i, i, 1);
        }
        FinAbMap::new(source, target, m)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let mut v = self.matrix.apply(x);
        self.target.reduce(&mut v);
        v
    }
}

fn concat_objects(objs: &[FinAbObj]) -> (FinAbObj, Vec<usize>) {
    let mut orders = Vec::new();
    let mut offsets = Vec::new();
    for o in objs {
        offsets.push(orders.len());
        orders.extend_from_slice(&o.orders);
    }
    (FinAbObj { orders }, offsets)
}

/// Subgroup `{x : m x ≡ 0 (mod rel)}` of `⊕ Z/n`, as an abstract group with
/// its embedding matrix.
fn kernel_subgroup(n: &FinAbObj, m: &IntMatrix, rel: &[u64]) -> (FinAbObj, IntMatrix) {
    let k = n.rank();
    let relm = IntMatrix::diagonal(&rel.iter().map(|v| *v as i64).collect::<Vec<_>>());
    let big = if m.rows() == 0 {
        IntMatrix::zeros(0, k)
    } else {
        m.hcat(&relm)
    };
    let ker = kernel_basis(&big);
    let rows: Vec<usize> = (0..k).collect();
    let gens = ker.select_rows(&rows);
    let g = gens.cols();
    // relations among the generators modulo n
    let nm = IntMatrix::diagonal(&n.orders.iter().map(|v| *v as i64).collect::<Vec<_>>());
    let rel_ker = kernel_basis(&gens.hcat(&nm));
    let rows_y: Vec<usize> = (0..g).collect();
    let rels = rel_ker.select_rows(&rows_y);
    let s = smith(&rels);
    let mut orders = Vec::new();
    let mut cols = Vec::new();
    for i in 0..g {
        let d = if i < s.rank { s.diag[i] } else { 0 };
        assert!(d != 0, "subgroup of a finite group must be finite");
        if d != 1 {
            orders.push(d as u64);
            cols.push(i);
        }
    }
    let emb = gens.mul(&s.p_inv).select_columns(&cols);
    let mut emb = emb;
    for i in 0..emb.rows() {
        for j in 0..emb.cols() {
            emb.set(i, j, emb.get(i, j).rem_euclid(n.orders[i] as i64));
        }
    }
    (FinAbObj { orders }, emb)
}

impl Category for FinAb {
    type Obj = FinAbObj;
    type Map = FinAbMap;

    fn name(&self) -> &'static str {
        "finab"
    }

    fn source(&self, f: &FinAbMap) -> FinAbObj {
        f.source.clone()
    }

    fn target(&self, f: &FinAbMap) -> FinAbObj {
        f.target.clone()
    }

    fn identity(&self, x: &FinAbObj) -> FinAbMap {
        FinAbMap {
            source: x.clone(),
            target: x.clone(),
            matrix: IntMatrix::identity(x.rank()),
        }
    }

    fn compose(&self, g: &FinAbMap, f: &FinAbMap) -> Result<FinAbMap> {
        self.check_composable(g, f)?;
        FinAbMap::new(f.source.clone(), g.target.clone(), g.matrix.mul(&f.matrix))
    }

    fn hom(&self, x: &FinAbObj, y: &FinAbObj) -> Result<Vec<FinAbMap>> {
        // entry (i, j) ranges over multiples of t_i / gcd(n_j, t_i)
        let mut choices: Vec<Vec<i64>> = Vec::new();
        for t in &y.orders {
            for n in &x.orders {
                let g = gcd(*n, *t);
                let step = (*t / g) as i64;
                choices.push((0..g as i64).map(|c| c * step).collect());
            }
        }
        let total: usize = choices.iter().map(|c| c.len()).product();
        if total > 1 << 22 {
            return Err(ProError::budget("FinAb Hom enumeration", total));
        }
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; choices.len()];
        for _ in 0..total {
            let mut m = IntMatrix::zeros(y.rank(), x.rank());
            for (p, c) in idx.iter().enumerate() {
                m.set(p / x.rank().max(1), p % x.rank().max(1), choices[p][*c]);
            }
            out.push(FinAbMap {
                source: x.clone(),
                target: y.clone(),
                matrix: m,
            });
            for (p, c) in idx.iter_mut().enumerate().rev() {
                *c += 1;
                if *c < choices[p].len() {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }

    fn limit(&self, d: &FiniteDiagram<Self>) -> Result<Cone<Self>> {
        d.validate(self)?;
        let (prod, offs) = concat_objects(&d.objects);
        let tgt_objs: Vec<FinAbObj> = d
            .arrows
            .iter()
            .map(|(_, j, _)| d.objects[*j].clone())
            .collect();
        let (rel, roffs) = concat_objects(&tgt_objs);
        let mut delta = IntMatrix::zeros(rel.rank(), prod.rank());
        for (e, (i, j, m)) in d.arrows.iter().enumerate() {
            for r in 0..m.matrix.rows() {
                for c in 0..m.matrix.cols() {
                    let v = delta.get(roffs[e] + r, offs[*i] + c) + m.matrix.get(r, c);
                    delta.set(roffs[e] + r, offs[*i] + c, v);
                }
                let v = delta.get(roffs[e] + r, offs[*j] + r) - 1;
                delta.set(roffs[e] + r, offs[*j] + r, v);
            }
        }
        let (apex, emb) = kernel_subgroup(&prod, &delta, &rel.orders);
        let legs = d
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let rows: Vec<usize> = (offs[i]..offs[i] + o.rank()).collect();
                FinAbMap::new(apex.clone(), o.clone(), emb.select_rows(&rows))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cone { apex, legs })
    }

    fn limit_factor(
        &self,
        _d: &FiniteDiagram<Self>,
        lim: &Cone<Self>,
        cone: &Cone<Self>,
    ) -> Result<FinAbMap> {
        let image = |legs: &[FinAbMap], x: &[i64]| -> Vec<i64> {
            legs.iter().flat_map(|l| l.apply(x)).collect()
        };
        let index: HashMap<Vec<i64>, Vec<i64>> = lim
            .apex
            .elements()
            .into_iter()
            .map(|e| (image(&lim.legs, &e), e))
            .collect();
        let mut m = IntMatrix::zeros(lim.apex.rank(), cone.apex.rank());
        for j in 0..cone.apex.rank() {
            let mut e = vec![0; cone.apex.rank()];
            e[j] = 1;
            let y = index
                .get(&image(&cone.legs, &e))
                .ok_or_else(|| ProError::Precondition("legs do not form a cone".into()))?;
            for (i, v) in y.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        FinAbMap::new(cone.apex.clone(), lim.apex.clone(), m)
    }

    fn colimit(&self, d: &FiniteDiagram<Self>) -> Result<Cocone<Self>> {
        d.validate(self)?;
        let (sum, offs) = concat_objects(&d.objects);
        let src_objs: Vec<FinAbObj> = d
            .arrows
            .iter()
            .map(|(i, _, _)| d.objects[*i].clone())
            .collect();
        let (_, aoffs) = concat_objects(&src_objs);
        let acols: usize = src_objs.iter().map(|o| o.rank()).sum();
        let mut h = IntMatrix::zeros(sum.rank(), acols);
        for (e, (i, j, m)) in d.arrows.iter().enumerate() {
            for c in 0..m.matrix.cols() {
                for r in 0..m.matrix.rows() {
                    let v = h.get(offs[*j] + r, aoffs[e] + c) + m.matrix.get(r, c);
                    h.set(offs[*j] + r, aoffs[e] + c, v);
                }
                let v = h.get(offs[*i] + c, aoffs[e] + c) - 1;
                h.set(offs[*i] + c, aoffs[e] + c, v);
            }
        }
        let nm = IntMatrix::diagonal(&sum.orders.iter().map(|v| *v as i64).collect::<Vec<_>>());
        let s = smith(&h.hcat(&nm));
        let keep: Vec<usize> = (0..sum.rank()).filter(|i| s.diag[*i] != 1).collect();
        let apex = FinAbObj {
            orders: keep.iter().map(|i| s.diag[*i] as u64).collect(),
        };
        let q = s.p.select_rows(&keep);
        let legs = d
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let cols: Vec<usize> = (offs[i]..offs[i] + o.rank()).collect();
                FinAbMap::new(o.clone(), apex.clone(), q.select_columns(&cols))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cocone { apex, legs })
    }

    fn colimit_factor(
        &self,
        d: &FiniteDiagram<Self>,
        colim: &Cocone<Self>,
        cocone: &Cocone<Self>,
    ) -> Result<FinAbMap> {
        if !super::is_cocone(self, d, cocone)? {
            return Err(ProError::Precondition("legs do not form a cocone".into()));
        }
        // every element of the colimit is hit; pick preimages of the generators
        let (sum, offs) = concat_objects(&d.objects);
        let mut preimage: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        for x in sum.elements() {
            let mut img = vec![0i64; colim.apex.rank()];
            let mut val = vec![0i64; cocone.apex.rank()];
            for (i, o) in d.objects.iter().enumerate() {
                let part = &x[offs[i]..offs[i] + o.rank()];
                for (a, b) in img.iter_mut().zip(colim.legs[i].apply(part)) {
                    *a += b;
                }
                for (a, b) in val.iter_mut().zip(cocone.legs[i].apply(part)) {
                    *a += b;
                }
            }
            colim.apex.reduce(&mut img);
            cocone.apex.reduce(&mut val);
            preimage.entry(img).or_insert(val);
        }
        let mut m = IntMatrix::zeros(cocone.apex.rank(), colim.apex.rank());
        for j in 0..colim.apex.rank() {
            let mut e = vec![0; colim.apex.rank()];
            e[j] = 1;
            let v = preimage
                .get(&e)
                .ok_or_else(|| ProError::Invalid("colimit legs not jointly surjective".into()))?;
            for (i, x) in v.iter().enumerate() {
                m.set(i, j, *x);
            }
        }
        FinAbMap::new(colim.apex.clone(), cocone.apex.clone(), m)
    }

    fn is_mono(&self, f: &FinAbMap) -> Result<bool> {
        Ok(self.image_size(f)? as u64 == f.source.order())
    }

    fn is_epi(&self, f: &FinAbMap) -> Result<bool> {
        Ok(self.image_size(f)? as u64 == f.target.order())
    }

    fn image_size(&self, f: &FinAbMap) -> Result<usize> {
        if f.source.order() > 1 << 20 {
            return Err(ProError::budget("FinAb image enumeration", 0));
        }
        Ok(f.source
            .elements()
            .iter()
            .map(|x| f.apply(x))
            .collect::<HashSet<_>>()
            .len())
    }

    fn cardinality(&self, x: &FinAbObj) -> Option<usize> {
        usize::try_from(x.order()).ok()
    }
}

impl Abelian for FinAb {
    fn zero_object(&self) -> FinAbObj {
        FinAbObj::zero()
    }

    fn zero_map(&self, x: &FinAbObj, y: &FinAbObj) -> FinAbMap {
        FinAbMap {
            source: x.clone(),
            target: y.clone(),
            matrix: IntMatrix::zeros(y.rank(), x.rank()),
        }
    }

    fn is_zero(&self, f: &FinAbMap) -> bool {
        f.matrix.is_zero()
    }

    fn subtract(&self, f: &FinAbMap, g: &FinAbMap) -> Result<FinAbMap> {
        if f.source != g.source || f.target != g.target {
            return Err(ProError::Composition(
                "subtracting maps between different groups".into(),
            ));
        }
        FinAbMap::new(f.source.clone(), f.target.clone(), f.matrix.sub(&g.matrix))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

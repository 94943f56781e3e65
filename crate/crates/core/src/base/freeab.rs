//! Finitely generated free abelian groups with labeled bases.
//!
//! A basis label `k` stands for the generator `a_k` of a fixed countable
//! basis, so `A[m, n]` is the object with labels `m..=n` and the canonical
//! inclusions and projections between such objects are determined by the
//! labels alone.

use super::intmat::{kernel_basis, smith, IntMatrix};
use super::{Abelian, Category, Cocone, Cone, FiniteDiagram};
use crate::error::{ProError, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FreeAb;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeAbObj {
    labels: Vec<u32>,
}

impl FreeAbObj {
    pub fn with_labels(labels: Vec<u32>) -> Self {
        FreeAbObj { labels }
    }

    /// Unlabeled-looking rank object (labels `0..rank`).
    pub fn free(rank: usize) -> Self {
        FreeAbObj {
            labels: (0..rank as u32).collect(),
        }
    }

    /// The subgroup generated by `a_lo, …, a_hi`; empty when `lo > hi`.
    pub fn range(lo: u32, hi: u32) -> Self {
        FreeAbObj {
            labels: (lo..=hi).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeAbMap {
    source: FreeAbObj,
    target: FreeAbObj,
    matrix: IntMatrix,
}

impl FreeAbMap {
    pub fn new(source: FreeAbObj, target: FreeAbObj, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(ProError::Invalid(
                "matrix shape does not match the ranks".into(),
            ));
        }
        Ok(FreeAbMap {
            source,
            target,
            matrix,
        })
    }

    /// `a_k ↦ a_k` when the label exists in the target, `a_k ↦ 0` otherwise.
    /// Covers every inclusion and projection between the groups `A[m, n]`.
    pub fn canonical(source: &FreeAbObj, target: &FreeAbObj) -> Self {
        let mut m = IntMatrix::zeros(target.rank(), source.rank());
        for (j, l) in source.labels.iter().enumerate() {
            if let Some(i) = target.labels.iter().position(|t| t == l) {
                m.set(i, j, 1);
            }
        }
        FreeAbMap {
            source: source.clone(),
            target: target.clone(),
            matrix: m,
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }
}

fn concat(objs: &[FreeAbObj]) -> (usize, Vec<usize>) {
    let mut offs = Vec::new();
    let mut n = 0;
    for o in objs {
        offs.push(n);
        n += o.rank();
    }
    (n, offs)
}

fn limit_matrix(d: &FiniteDiagram<FreeAb>) -> (IntMatrix, Vec<usize>) {
    let (n, offs) = concat(&d.objects);
    let tgts: Vec<FreeAbObj> = d
        .arrows
        .iter()
        .map(|(_, j, _)| d.objects[*j].clone())
        .collect();
    let (r, roffs) = concat(&tgts);
    let mut delta = IntMatrix::zeros(r, n);
    for (e, (i, j, m)) in d.arrows.iter().enumerate() {
        for a in 0..m.matrix.rows() {
            for b in 0..m.matrix.cols() {
                let v = delta.get(roffs[e] + a, offs[*i] + b) + m.matrix.get(a, b);
                delta.set(roffs[e] + a, offs[*i] + b, v);
            }
            let v = delta.get(roffs[e] + a, offs[*j] + a) - 1;
            delta.set(roffs[e] + a, offs[*j] + a, v);
        }
    }
    (delta, offs)
}

fn colimit_matrix(d: &FiniteDiagram<FreeAb>) -> (IntMatrix, Vec<usize>) {
    let (n, offs) = concat(&d.objects);
    let srcs: Vec<FreeAbObj> = d
        .arrows
        .iter()
        .map(|(i, _, _)| d.objects[*i].clone())
        .collect();
    let (c, aoffs) = concat(&srcs);
    let mut h = IntMatrix::zeros(n, c);
    for (e, (i, j, m)) in d.arrows.iter().enumerate() {
        for b in 0..m.matrix.cols() {
            for a in 0..m.matrix.rows() {
                let v = h.get(offs[*j] + a, aoffs[e] + b) + m.matrix.get(a, b);
                h.set(offs[*j] + a, aoffs[e] + b, v);
            }
            let v = h.get(offs[*i] + b, aoffs[e] + b) - 1;
            h.set(offs[*i] + b, aoffs[e] + b, v);
        }
    }
    (h, offs)
}

impl Category for FreeAb {
    type Obj = FreeAbObj;
    type Map = FreeAbMap;

    fn name(&self) -> &'static str {
        "freeab"
    }

    fn source(&self, f: &FreeAbMap) -> FreeAbObj {
        f.source.clone()
    }

    fn target(&self, f: &FreeAbMap) -> FreeAbObj {
        f.target.clone()
    }

    fn identity(&self, x: &FreeAbObj) -> FreeAbMap {
        FreeAbMap {
            source: x.clone(),
            target: x.clone(),
            matrix: IntMatrix::identity(x.rank()),
        }
    }

    fn compose(&self, g: &FreeAbMap, f: &FreeAbMap) -> Result<FreeAbMap> {
        self.check_composable(g, f)?;
        Ok(FreeAbMap {
            source: f.source.clone(),
            target: g.target.clone(),
            matrix: g.matrix.mul(&f.matrix),
        })
    }

    fn limit(&self, d: &FiniteDiagram<Self>) -> Result<Cone<Self>> {
        d.validate(self)?;
        let (delta, offs) = limit_matrix(d);
        let basis = kernel_basis(&delta);
        let apex = FreeAbObj::free(basis.cols());
        let legs = d
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let rows: Vec<usize> = (offs[i]..offs[i] + o.rank()).collect();
                FreeAbMap::new(apex.clone(), o.clone(), basis.select_rows(&rows))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cone { apex, legs })
    }

    fn limit_factor(
        &self,
        d: &FiniteDiagram<Self>,
        lim: &Cone<Self>,
        cone: &Cone<Self>,
    ) -> Result<FreeAbMap> {
        if !super::is_cone(self, d, cone)? {
            return Err(ProError::Precondition("legs do not form a cone".into()));
        }
        let (delta, _) = limit_matrix(d);
        let s = smith(&delta);
        let w = cone.apex.rank();
        let mut stacked = IntMatrix::zeros(delta.cols(), w);
        let mut row = 0;
        for leg in &cone.legs {
            for a in 0..leg.matrix.rows() {
                for b in 0..w {
                    stacked.set(row, b, leg.matrix.get(a, b));
                }
                row += 1;
            }
        }
        let coords = s.q_inv.mul(&stacked);
        let rows: Vec<usize> = (s.rank..delta.cols()).collect();
        FreeAbMap::new(
            cone.apex.clone(),
            lim.apex.clone(),
            coords.select_rows(&rows),
        )
    }

    fn colimit(&self, d: &FiniteDiagram<Self>) -> Result<Cocone<Self>> {
        d.validate(self)?;
        let (h, offs) = colimit_matrix(d);
        let s = smith(&h);
        if s.diag[..s.rank].iter().any(|v| *v != 1) {
            return Err(ProError::Invalid(
                "colimit has torsion and is not free".into(),
            ));
        }
        let keep: Vec<usize> = (s.rank..h.rows()).collect();
        let apex = FreeAbObj::free(keep.len());
        let q = s.p.select_rows(&keep);
        let legs = d
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let cols: Vec<usize> = (offs[i]..offs[i] + o.rank()).collect();
                FreeAbMap::new(o.clone(), apex.clone(), q.select_columns(&cols))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cocone { apex, legs })
    }

    fn colimit_factor(
        &self,
        d: &FiniteDiagram<Self>,
        _colim: &Cocone<Self>,
        cocone: &Cocone<Self>,
    ) -> Result<FreeAbMap> {
        if !super::is_cocone(self, d, cocone)? {
            return Err(ProError::Precondition("legs do not form a cocone".into()));
        }
        let (h, _) = colimit_matrix(d);
        let s = smith(&h);
        let mut joint = IntMatrix::zeros(cocone.apex.rank(), h.rows());
        let mut col = 0;
        for leg in &cocone.legs {
            for b in 0..leg.matrix.cols() {
                for a in 0..leg.matrix.rows() {
                    joint.set(a, col, leg.matrix.get(a, b));
                }
                col += 1;
            }
        }
        let keep: Vec<usize> = (s.rank..h.rows()).collect();
        let lifts = s.p_inv.select_columns(&keep);
        FreeAbMap::new(
            FreeAbObj::free(keep.len()),
            cocone.apex.clone(),
            joint.mul(&lifts),
        )
    }

    fn is_mono(&self, f: &FreeAbMap) -> Result<bool> {
        Ok(f.matrix.rank() == f.matrix.cols())
    }

    fn is_epi(&self, f: &FreeAbMap) -> Result<bool> {
        let s = smith(&f.matrix);
        Ok(s.rank == f.matrix.rows() && s.diag[..s.rank].iter().all(|v| *v == 1))
    }
}

impl Abelian for FreeAb {
    fn zero_object(&self) -> FreeAbObj {
        FreeAbObj::free(0)
    }

    fn zero_map(&self, x: &FreeAbObj, y: &FreeAbObj) -> FreeAbMap {
        FreeAbMap {
            source: x.clone(),
            target: y.clone(),
            matrix: IntMatrix::zeros(y.rank(), x.rank()),
        }
    }

    fn is_zero(&self, f: &FreeAbMap) -> bool {
        f.matrix.is_zero()
    }

    fn subtract(&self, f: &FreeAbMap, g: &FreeAbMap) -> Result<FreeAbMap> {
        if f.source != g.source || f.target != g.target {
            return Err(ProError::Composition(
                "subtracting maps between different groups".into(),
            ));
        }
        FreeAbMap::new(f.source.clone(), f.target.clone(), f.matrix.sub(&g.matrix))
    }
}

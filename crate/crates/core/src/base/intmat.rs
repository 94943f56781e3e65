//! Dense integer matrices and Smith normal form with tracked transforms.

use serde::Serialize;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(rows: usize, cols: usize, entries: &[Vec<i64>]) -> Self {
        assert_eq!(entries.len(), rows, "row count mismatch");
        let mut m = Self::zeros(rows, cols);
        for (i, r) in entries.iter().enumerate() {
            assert_eq!(r.len(), cols, "column count mismatch");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Columns `range` as a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out.set(i, k, self.get(i, j));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows.len(), self.cols);
        for (k, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.set(k, j, self.get(i, j));
            }
        }
        out
    }

    pub fn diagonal(values: &[i64]) -> IntMatrix {
        let mut m = IntMatrix::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    pub fn rank(&self) -> usize {
        smith(self).rank
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// `p * a * q = d` with `p`, `q` unimodular; `d` diagonal with
/// `d[0] | d[1] | ... | d[rank-1]` and zeros after.
#[derive(Debug, Clone)]
pub struct Smith {
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    pub q_inv: IntMatrix,
    pub diag: Vec<i64>,
    pub rank: usize,
}

struct Work {
    a: Vec<Vec<i128>>,
    p: Vec<Vec<i128>>,
    p_inv: Vec<Vec<i128>>,
    q: Vec<Vec<i128>>,
    q_inv: Vec<Vec<i128>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.p.swap(i, j);
        for r in self.p_inv.iter_mut() {
            r.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in self.a.iter_mut() {
            r.swap(i, j);
        }
        for r in self.q.iter_mut() {
            r.swap(i, j);
        }
        self.q_inv.swap(i, j);
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        if c == 0 {
            return;
        }
        for k in 0..self.a[0].len() {
            let v = self.a[j][k];
            self.a[i][k] += c * v;
        }
        for k in 0..self.p[0].len() {
            let v = self.p[j][k];
            self.p[i][k] += c * v;
        }
        for r in self.p_inv.iter_mut() {
            let v = r[i];
            r[j] -= c * v;
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i128) {
        if c == 0 {
            return;
        }
        for r in self.a.iter_mut() {
            let v = r[j];
            r[i] += c * v;
        }
        for r in self.q.iter_mut() {
            let v = r[j];
            r[i] += c * v;
        }
        let n = self.q_inv[0].len();
        for k in 0..n {
            let v = self.q_inv[i][k];
            self.q_inv[j][k] -= c * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in self.a[i].iter_mut() {
            *v = -*v;
        }
        for v in self.p[i].iter_mut() {
            *v = -*v;
        }
        for r in self.p_inv.iter_mut() {
            r[i] = -r[i];
        }
    }
}

fn ident(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn to_matrix(v: &[Vec<i128>], rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(
                i,
                j,
                i64::try_from(v[i][j]).expect("Smith transform entry overflows i64"),
            );
        }
    }
    m
}

pub fn smith(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: (0..m)
            .map(|i| (0..n).map(|j| i128::from(a.get(i, j))).collect())
            .collect(),
        p: ident(m),
        p_inv: ident(m),
        q: ident(n),
        q_inv: ident(n),
    };
    let mut rank = 0;
    let steps = m.min(n);
    for t in 0..steps {
        // smallest nonzero entry of the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let v = w.a[i][j].abs();
                if v != 0 && pivot.map_or(true, |(pi, pj)| v < w.a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if w.a[i][t] != 0 {
                    let qt = w.a[i][t].div_euclid(w.a[t][t]);
                    w.add_row(i, t, -qt);
                    if w.a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if w.a[t][j] != 0 {
                    let qt = w.a[t][j].div_euclid(w.a[t][t]);
                    w.add_col(j, t, -qt);
                    if w.a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility of the trailing block
                let mut bad = None;
                'scan: for i in t + 1..m {
                    for j in t + 1..n {
                        if w.a[i][j] % w.a[t][t] != 0 {
                            bad = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        w.add_row(t, i, 1);
                        continue;
                    }
                }
            }
            // move the smallest nonzero entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..m {
                let v = w.a[i][t].abs();
                if v != 0 && v < w.a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                let v = w.a[t][j].abs();
                if v != 0 && v < w.a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            w.swap_rows(t, best.0);
            w.swap_cols(t, best.1);
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
        rank += 1;
    }
    let diag = (0..steps)
        .map(|i| i64::try_from(w.a[i][i]).expect("Smith diagonal overflows i64"))
        .collect();
    Smith {
        p: to_matrix(&w.p, m, m),
        p_inv: to_matrix(&w.p_inv, m, m),
        q: to_matrix(&w.q, n, n),
        q_inv: to_matrix(&w.q_inv, n, n),
        diag,
        rank,
    }
}

/// Basis of the integer kernel `{x : a x = 0}`, as columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    let cols: Vec<usize> = (s.rank..a.cols()).collect();
    s.q.select_columns(&cols)
}

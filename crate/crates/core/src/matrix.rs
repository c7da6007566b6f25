//! Dense exact matrices.
//!
//! Storage is 0-based and row-major. [`IndexSubset`] values are 1-based.

use crate::subset::IndexSubset;
use crate::{Error, ExactNumber, Result};

/// An `m × n` matrix with nonnegative exact entries: the biadjacency matrix
/// of a weighted bipartite graph.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NonnegMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactNumber>,
}

impl NonnegMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactNumber>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(p) = entries.iter().position(ExactNumber::is_negative) {
            return Err(Error::NegativeEntry {
                row: p / cols + 1,
                col: p % cols + 1,
                value: entries[p].to_string(),
            });
        }
        Ok(NonnegMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<ExactNumber>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        NonnegMatrix::new(m, n, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        NonnegMatrix::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| ExactNumber::from(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        NonnegMatrix {
            rows,
            cols,
            entries: vec![ExactNumber::zero(); rows * cols],
        }
    }

    /// The all-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        NonnegMatrix {
            rows,
            cols,
            entries: vec![ExactNumber::one(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = NonnegMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = ExactNumber::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &ExactNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[ExactNumber] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[ExactNumber] {
        &self.entries
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(ExactNumber::is_integer)
    }

    pub fn transpose(&self) -> NonnegMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        NonnegMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// `B[α, β]`.
    pub fn submatrix(&self, alpha: &IndexSubset, beta: &IndexSubset) -> Result<NonnegMatrix> {
        if alpha.universe() != self.rows || beta.universe() != self.cols {
            return Err(Error::Dimension(format!(
                "subsets over {}x{} do not index a {}x{} matrix",
                alpha.universe(),
                beta.universe(),
                self.rows,
                self.cols
            )));
        }
        let cols: Vec<usize> = beta.zero_based().collect();
        let entries = alpha
            .zero_based()
            .flat_map(|i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Ok(NonnegMatrix {
            rows: alpha.len(),
            cols: beta.len(),
            entries,
        })
    }

    /// Applies `perm_rows` and `perm_cols` (0-based images) to rows and columns.
    pub fn permuted(&self, perm_rows: &[usize], perm_cols: &[usize]) -> NonnegMatrix {
        assert_eq!(perm_rows.len(), self.rows);
        assert_eq!(perm_cols.len(), self.cols);
        let mut entries = Vec::with_capacity(self.entries.len());
        for &i in perm_rows {
            for &j in perm_cols {
                entries.push(self.get(i, j).clone());
            }
        }
        NonnegMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
    }
}

/// Index of `(i, j)`, `i < j`, in the packed strict upper triangle of an
/// order-`m` matrix.
fn upper_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

/// A symmetric, zero-diagonal, nonnegative matrix: the weighted adjacency
/// matrix of a graph without self-loops. Only the strict upper triangle is
/// stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymZeroDiagMatrix {
    order: usize,
    upper: Vec<ExactNumber>,
}

impl SymZeroDiagMatrix {
    /// From the packed strict upper triangle, row by row.
    pub fn new(order: usize, upper: Vec<ExactNumber>) -> Result<Self> {
        let want = order * order.saturating_sub(1) / 2;
        if upper.len() != want {
            return Err(Error::Dimension(format!(
                "order {order} needs {want} upper-triangle entries, got {}",
                upper.len()
            )));
        }
        for i in 0..order {
            for j in i + 1..order {
                let v = &upper[upper_index(order, i, j)];
                if v.is_negative() {
                    return Err(Error::NegativeEntry {
                        row: i + 1,
                        col: j + 1,
                        value: v.to_string(),
                    });
                }
            }
        }
        Ok(SymZeroDiagMatrix { order, upper })
    }

    /// From a full square array, which must be symmetric with a zero diagonal.
    pub fn from_rows(rows: Vec<Vec<ExactNumber>>) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("symmetric matrix must be square".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if !row[i].is_zero() {
                return Err(Error::NotSymmetric(format!(
                    "diagonal entry ({}, {}) is {}",
                    i + 1,
                    i + 1,
                    row[i]
                )));
            }
        }
        SymZeroDiagMatrix::from_rows_ignoring_diagonal(rows)
    }

    /// Like [`from_rows`](Self::from_rows) but discards whatever is on the
    /// diagonal. Hafnians never read diagonal entries.
    pub fn from_rows_ignoring_diagonal(rows: Vec<Vec<ExactNumber>>) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("symmetric matrix must be square".into()));
        }
        let mut upper = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for (i, row) in rows.iter().enumerate() {
            for j in i + 1..m {
                if row[j] != rows[j][i] {
                    return Err(Error::NotSymmetric(format!(
                        "entry ({}, {}) = {} but ({}, {}) = {}",
                        i + 1,
                        j + 1,
                        row[j],
                        j + 1,
                        i + 1,
                        rows[j][i]
                    )));
                }
                upper.push(row[j].clone());
            }
        }
        SymZeroDiagMatrix::new(m, upper)
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        SymZeroDiagMatrix::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| ExactNumber::from(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(order: usize) -> Self {
        SymZeroDiagMatrix {
            order,
            upper: vec![ExactNumber::zero(); order * order.saturating_sub(1) / 2],
        }
    }

    /// Adjacency matrix of the complete graph `K_m`.
    pub fn complete(order: usize) -> Self {
        SymZeroDiagMatrix {
            order,
            upper: vec![ExactNumber::one(); order * order.saturating_sub(1) / 2],
        }
    }

    /// The bipartite double cover `[[0, B], [Bᵀ, 0]]` of an `m × n` matrix.
    pub fn bipartite_embedding(b: &NonnegMatrix) -> Self {
        let (m, n) = (b.rows(), b.cols());
        let mut s = SymZeroDiagMatrix::zeros(m + n);
        for i in 0..m {
            for j in 0..n {
                s.set(i, m + j, b.get(i, j).clone());
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry at 0-based `(i, j)`; zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> &ExactNumber {
        use std::cmp::Ordering::*;
        static ZERO: std::sync::OnceLock<ExactNumber> = std::sync::OnceLock::new();
        match i.cmp(&j) {
            Less => &self.upper[upper_index(self.order, i, j)],
            Greater => &self.upper[upper_index(self.order, j, i)],
            Equal => ZERO.get_or_init(ExactNumber::zero),
        }
    }

    /// Sets `a_ij = a_ji = v` for `i != j` (0-based). Panics on the diagonal
    /// or on a negative value.
    pub(crate) fn set(&mut self, i: usize, j: usize, v: ExactNumber) {
        assert!(i != j, "diagonal is fixed at zero");
        assert!(!v.is_negative());
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let p = upper_index(self.order, i, j);
        self.upper[p] = v;
    }

    pub fn upper(&self) -> &[ExactNumber] {
        &self.upper
    }

    pub fn is_integral(&self) -> bool {
        self.upper.iter().all(ExactNumber::is_integer)
    }

    /// `A[α, α]`.
    pub fn principal_submatrix(&self, alpha: &IndexSubset) -> Result<SymZeroDiagMatrix> {
        if alpha.universe() != self.order {
            return Err(Error::Dimension(format!(
                "subset over {} does not index an order-{} matrix",
                alpha.universe(),
                self.order
            )));
        }
        let idx: Vec<usize> = alpha.zero_based().collect();
        let k = idx.len();
        let mut upper = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for a in 0..k {
            for b in a + 1..k {
                upper.push(self.get(idx[a], idx[b]).clone());
            }
        }
        Ok(SymZeroDiagMatrix { order: k, upper })
    }

    /// Relabels vertices: new vertex `p` is old vertex `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> SymZeroDiagMatrix {
        assert_eq!(perm.len(), self.order);
        let mut s = SymZeroDiagMatrix::zeros(self.order);
        for a in 0..self.order {
            for b in a + 1..self.order {
                s.set(a, b, self.get(perm[a], perm[b]).clone());
            }
        }
        s
    }

    pub fn to_rows(&self) -> Vec<Vec<ExactNumber>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix {
            rows: self.order,
            cols: self.order,
            entries: self.to_rows().into_iter().flatten().collect(),
        }
    }
}

/// A skew-symmetric matrix given by its strict upper triangle (`b_ji = -b_ij`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SkewMatrix {
    order: usize,
    upper: Vec<ExactNumber>,
}

impl SkewMatrix {
    pub fn new(order: usize, upper: Vec<ExactNumber>) -> Result<Self> {
        let want = order * order.saturating_sub(1) / 2;
        if upper.len() != want {
            return Err(Error::Dimension(format!(
                "order {order} needs {want} upper-triangle entries, got {}",
                upper.len()
            )));
        }
        Ok(SkewMatrix { order, upper })
    }

    /// The skew matrix sharing the upper triangle of `a`.
    pub fn from_symmetric_upper(a: &SymZeroDiagMatrix) -> Self {
        SkewMatrix {
            order: a.order(),
            upper: a.upper().to_vec(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry at 0-based `(i, j)` with the implied sign.
    pub fn get(&self, i: usize, j: usize) -> ExactNumber {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[upper_index(self.order, i, j)].clone(),
            Greater => -&self.upper[upper_index(self.order, j, i)],
            Equal => ExactNumber::zero(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.order;
        DenseMatrix {
            rows: n,
            cols: n,
            entries: (0..n * n).map(|p| self.get(p / n, p % n)).collect(),
        }
    }
}

/// A general dense matrix of exact numbers, signs allowed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactNumber>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactNumber>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(DenseMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != n) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        DenseMatrix::new(
            m,
            n,
            rows.iter()
                .flat_map(|r| r.as_ref().iter().map(|&v| ExactNumber::from(v)))
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        NonnegMatrix::identity(n).to_dense()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[ExactNumber] {
        &self.entries
    }
}

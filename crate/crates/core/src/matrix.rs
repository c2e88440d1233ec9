//! Dense matrices over an exact field and the elimination routines built on them.

use std::fmt;

use crate::field::Field;

/// Row-major dense matrix. Linear maps act on column vectors, so a map
/// `K^n -> K^m` is an `m x n` matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` is used when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(cols, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&v| F::from_i64(v)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn col_vectors(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    /// Kronecker product; entry `(r1*rhs.rows + r2, c1*rhs.cols + c2)` is
    /// `self[r1,c1] * rhs[r2,c2]`.
    pub fn kron(&self, rhs: &Matrix<F>) -> Matrix<F> {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                out.set_block(r1 * rhs.rows, c1 * rhs.cols, &rhs.scale(a));
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc.add_mul(a, b);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sum");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in difference");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(s)).collect() }
    }

    /// Places `block` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Matrix<F>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r: usize, c: usize, rows: usize, cols: usize) -> Matrix<F> {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r + i, c + j).clone());
            }
        }
        out
    }

    pub fn hstack(parts: &[&Matrix<F>], rows: usize) -> Matrix<F> {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "row mismatch in hstack");
            out.set_block(0, c, p);
            c += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Matrix<F>], cols: usize) -> Matrix<F> {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "column mismatch in vstack");
            out.set_block(r, 0, p);
            r += p.rows;
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix<F> {
        let mut out = Self::zeros(self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix<F> {
        let mut out = Self::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c).clone());
            }
        }
        out
    }

    /// Gauss-Jordan elimination. The pivot in each column is the first
    /// nonzero entry at or below the current row.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        let cols = m.cols;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            if !inv.is_one() {
                for k in c..cols {
                    let v = m.get(r, k);
                    if !v.is_zero() {
                        let nv = v.mul(&inv);
                        m.set(r, k, nv);
                    }
                }
            }
            let support: Vec<usize> = (c..cols).filter(|&k| !m.get(r, k).is_zero()).collect();
            let pivot_row: Vec<F> = support.iter().map(|&k| m.get(r, k).clone()).collect();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (&k, v) in support.iter().zip(&pivot_row) {
                    let nv = m.get(i, k).sub(&f.mul(v));
                    m.set(i, k, nv);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns spanning the null space, one per free column of the rref.
    pub fn kernel(&self) -> Matrix<F> {
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, F::one());
            for (i, &p) in pivots.iter().enumerate() {
                let v = r.get(i, f);
                if !v.is_zero() {
                    k.set(p, j, v.neg());
                }
            }
        }
        k
    }

    /// Columns spanning the column space: the pivot columns of `self`.
    pub fn image(&self) -> Matrix<F> {
        let pivots = self.rref().pivots;
        self.select_cols(&pivots)
    }

    pub fn kernel_image(&self) -> (Matrix<F>, Matrix<F>) {
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, F::one());
            for (i, &p) in pivots.iter().enumerate() {
                let v = r.get(i, f);
                if !v.is_zero() {
                    k.set(p, j, v.neg());
                }
            }
        }
        (k, self.select_cols(&pivots))
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, v) in b.iter().enumerate() {
            aug.set(i, self.cols, v.clone());
        }
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &Matrix<F>) -> Option<Matrix<F>> {
        let mut aug = Self::zeros(self.rows, self.cols + rhs.cols);
        aug.set_block(0, 0, self);
        aug.set_block(0, self.cols, rhs);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// For a matrix with independent columns, the matrix sending a vector
    /// in the column span to its coordinates.
    pub fn coordinates_of(&self, v: &[F]) -> Option<Vec<F>> {
        self.solve(v)
    }
}

/// Coset representatives for `K^ambient / span(sub)`.
///
/// `sub` holds spanning vectors as columns. The representatives are the
/// standard basis vectors at the non-pivot coordinates of the row-reduced
/// spanning set; `project` sends an ambient vector to its quotient
/// coordinates.
#[derive(Clone, Debug)]
pub struct Quotient<F> {
    pub reps: Vec<usize>,
    pub project: Matrix<F>,
}

pub fn quotient_reps<F: Field>(ambient: usize, sub: &Matrix<F>) -> Quotient<F> {
    assert_eq!(sub.rows(), ambient, "sub-basis lives in a different space");
    let Rref { matrix: r, pivots } = sub.transpose().rref();
    let reps: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
    let mut pos = vec![usize::MAX; ambient];
    for (k, &c) in reps.iter().enumerate() {
        pos[c] = k;
    }
    let mut project = Matrix::zeros(reps.len(), ambient);
    for (k, &c) in reps.iter().enumerate() {
        project.set(k, c, F::one());
    }
    for (i, &p) in pivots.iter().enumerate() {
        for &c in &reps {
            let v = r.get(i, c);
            if !v.is_zero() {
                project.set(pos[c], p, v.neg());
            }
        }
    }
    Quotient { reps, project }
}

/// Row-reduced basis of a subspace, kept as rows.
pub fn row_basis<F: Field>(vectors: &[Vec<F>], dim: usize) -> Matrix<F> {
    if vectors.is_empty() {
        return Matrix::zeros(0, dim);
    }
    let Rref { matrix, pivots } = Matrix::from_rows(vectors.to_vec(), dim).rref();
    matrix.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
}

/// Column basis (in rref form, transposed back) of the span of `cols`.
pub fn span_basis<F: Field>(cols: &Matrix<F>) -> Matrix<F> {
    row_basis(&cols.col_vectors(), cols.rows()).transpose()
}

/// Whether span(a) is contained in span(b); both given by columns.
pub fn span_contains<F: Field>(b: &Matrix<F>, a: &Matrix<F>) -> bool {
    if a.cols() == 0 {
        return true;
    }
    let rb = b.rank();
    Matrix::hstack(&[b, a], b.rows()).rank() == rb
}

pub fn spans_equal<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> bool {
    let ra = a.rank();
    ra == b.rank() && Matrix::hstack(&[a, b], a.rows()).rank() == ra
}

/// Incrementally grown subspace of `K^dim`, kept as echelon rows.
#[derive(Clone, Debug)]
pub struct Span<F> {
    dim: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
    originals: Vec<Vec<F>>,
}

impl<F: Field> Span<F> {
    pub fn new(dim: usize) -> Self {
        Span { dim, rows: Vec::new(), pivots: Vec::new(), originals: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (x, r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&f.mul(r));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(F::is_zero)
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        for x in w.iter_mut() {
            *x = x.mul(&inv);
        }
        self.rows.push(w);
        self.pivots.push(p);
        self.originals.push(v.to_vec());
        true
    }

    /// The inserted vectors that enlarged the span, as columns.
    pub fn basis(&self) -> Matrix<F> {
        Matrix::from_cols(&self.originals, self.dim)
    }

    pub fn basis_vectors(&self) -> &[Vec<F>] {
        &self.originals
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[F]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        write!(f, "{}x{} {:?}", self.rows, self.cols, rows)
    }
}

impl<F: fmt::Display> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

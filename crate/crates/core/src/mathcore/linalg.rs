//! Small dense linear algebra: LU with partial pivoting, determinants and
//! simplex volumes.

use crate::error::{Error, Result};

/// Relative pivot threshold below which a matrix is treated as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("matrix entry {bad}")));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            entries.extend_from_slice(r);
        }
        Matrix::new(rows.len(), cols, entries)
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

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    fn max_row_norm(&self) -> f64 {
        (0..self.rows).map(|i| norm(self.row(i))).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.entries[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// In-place LU factorisation with partial pivoting.
///
/// Returns the permutation sign, or the offending pivot when one falls below
/// `PIVOT_TOLERANCE * scale`.
fn lu_in_place(a: &mut [f64], n: usize, perm: &mut [usize], scale: f64) -> Result<f64, f64> {
    let tol = PIVOT_TOLERANCE * scale;
    let mut sign = 1.0;
    for (i, p) in perm.iter_mut().enumerate() {
        *p = i;
    }
    for k in 0..n {
        let (p, pmax) =
            (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pmax > tol) {
            return Err(pmax);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            a[i * n + k] = f;
            if f != 0.0 {
                for j in k + 1..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
    }
    Ok(sign)
}

/// Solves `a * x = b` by Gaussian elimination with partial pivoting.
pub fn solve_linear(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", a.rows, a.cols)));
    }
    let n = a.rows;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!("right-hand side has length {}, expected {n}", b.len())));
    }
    let scale = a.max_row_norm();
    let mut lu = a.entries.clone();
    let mut perm = vec![0; n];
    lu_in_place(&mut lu, n, &mut perm, scale)
        .map_err(|pivot| Error::SingularMatrix { pivot, tolerance: PIVOT_TOLERANCE * scale })?;
    let mut x: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            x[i] -= lu[i * n + j] * x[j];
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            x[i] -= lu[i * n + j] * x[j];
        }
        x[i] /= lu[i * n + i];
    }
    Ok(x)
}

/// LU determinant. Numerically singular matrices (pivot under tolerance)
/// give exactly zero.
pub fn determinant(a: &Matrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", a.rows, a.cols)));
    }
    Ok(det_slice(&mut a.entries.clone(), a.rows, a.max_row_norm()))
}

pub(crate) fn det_slice(a: &mut [f64], n: usize, scale: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut perm = vec![0; n];
    match lu_in_place(a, n, &mut perm, scale) {
        Ok(sign) => (0..n).fold(sign, |acc, i| acc * a[i * n + i]),
        Err(_) => 0.0,
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Volume of the simplex spanned by `points` (k+1 points in R^m, k <= m),
/// measured in its own k-dimensional affine hull.
///
/// When k = m this is `|det W| / m!` with `W` the points with a coordinate of
/// one appended; the determinant is taken on the edge vectors, which gives
/// the same value. When k < m the Gram determinant of the edge vectors is
/// used instead.
pub fn simplex_volume<P: AsRef<[f64]>>(points: &[P]) -> Result<f64> {
    let Some(first) = points.first() else {
        return Err(Error::DimensionMismatch("simplex needs at least one point".into()));
    };
    let first = first.as_ref();
    let m = first.len();
    let k = points.len() - 1;
    if k > m {
        return Err(Error::DimensionMismatch(format!("{} points cannot span a simplex in R^{m}", points.len())));
    }
    let mut edges = Vec::with_capacity(k * m);
    for p in &points[1..] {
        let p = p.as_ref();
        if p.len() != m {
            return Err(Error::DimensionMismatch(format!("point of length {} among points of length {m}", p.len())));
        }
        edges.extend(p.iter().zip(first).map(|(a, b)| a - b));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let scale = (0..k).map(|i| norm(&edges[i * m..(i + 1) * m])).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let content = if k == m {
        det_slice(&mut edges, m, scale).abs()
    } else {
        let mut gram = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..=i {
                let g = dot(&edges[i * m..(i + 1) * m], &edges[j * m..(j + 1) * m]);
                gram[i * k + j] = g;
                gram[j * k + i] = g;
            }
        }
        det_slice(&mut gram, k, scale * scale).max(0.0).sqrt()
    };
    Ok(content / factorial(k))
}

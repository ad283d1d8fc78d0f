//! Dense symmetric linear algebra: Cholesky, cyclic Jacobi eigensolver, the
//! Cholesky-reduced generalized eigenproblem, and an exact-field `LDL^t`
//! used to orthogonalize polynomial bases.

use thiserror::Error;

use crate::scalar::Scalar;

/// Relative off-diagonal Frobenius tolerance for the Jacobi iteration.
pub const JACOBI_TOL: f64 = 1e-12;
/// Maximum number of full Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    /// `pivot` is 1-based.
    #[error("matrix is not positive definite: pivot {pivot} is {value:e}")]
    NotSpd { pivot: usize, value: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
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

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense symmetric matrix; writes go through [`SymMatrix::set`], which
/// mirrors the entry so that `a(i,j) == a(j,i)` always holds.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    inner: Matrix,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            inner: Matrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix {
            inner: Matrix::identity(n),
        }
    }

    /// Fill from the upper triangle: `f(i, j)` is called for `i <= j` only.
    pub fn from_upper(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Validate symmetry (exact) and finiteness of a square matrix.
    pub fn from_matrix(m: Matrix) -> Result<Self, LinalgError> {
        if m.rows() != m.cols() {
            return Err(LinalgError::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_finite() {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
                if m[(i, j)] != m[(j, i)] {
                    return Err(LinalgError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymMatrix { inner: m })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(LinalgError::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
        }
        Self::from_matrix(Matrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn order(&self) -> usize {
        self.inner.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.inner[(i, j)] = v;
        self.inner[(j, i)] = v;
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.inner.mul_vec(x)
    }

    /// `x^t A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.mul_vec(y))
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn add(&self, rhs: &SymMatrix) -> SymMatrix {
        let n = self.order();
        SymMatrix::from_upper(n, |i, j| self.get(i, j) + rhs.get(i, j))
    }

    pub fn sub(&self, rhs: &SymMatrix) -> SymMatrix {
        let n = self.order();
        SymMatrix::from_upper(n, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        let n = self.order();
        SymMatrix::from_upper(n, |i, j| s * self.get(i, j))
    }

    /// `max |a(i,j) - a(j,i)|`; zero by construction for this type.
    pub fn asymmetry(&self) -> f64 {
        let n = self.order();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Lower-triangular Cholesky factor `L` with `L L^t = A`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    factor: Matrix,
}

pub fn cholesky(a: &SymMatrix) -> Result<Cholesky, LinalgError> {
    let n = a.order();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d.is_nan() || d <= 0.0 || d.is_infinite() {
            return Err(LinalgError::NotSpd {
                pivot: j + 1,
                value: d,
            });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(Cholesky { factor: l })
}

impl Cholesky {
    pub fn factor(&self) -> &Matrix {
        &self.factor
    }

    pub fn order(&self) -> usize {
        self.factor.rows()
    }

    /// Solve `L y = b`.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        let n = self.order();
        let l = &self.factor;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        y
    }

    /// Solve `L^t x = y`.
    pub fn backward(&self, y: &[f64]) -> Vec<f64> {
        let n = self.order();
        let l = &self.factor;
        let mut x = y.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= l[(k, i)] * x[k];
            }
            x[i] = s / l[(i, i)];
        }
        x
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if b.len() != self.order() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.order(),
                found: b.len(),
            });
        }
        Ok(self.backward(&self.forward(b)))
    }
}

/// Eigenpairs with ascending values; `vectors` holds them as columns.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Cyclic Jacobi eigensolver.
///
/// Stops once the off-diagonal Frobenius norm drops to `JACOBI_TOL * ||A||_F`;
/// fails with `NoConvergence` after `JACOBI_MAX_SWEEPS` sweeps.
pub fn sym_eig(a: &SymMatrix) -> Result<SymEigen, LinalgError> {
    let n = a.order();
    let mut m = a.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();
    let target = JACOBI_TOL * scale;

    let off_norm = |m: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= target || scale == 0.0 {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                m[(p, p)] = app - t * apq;
                m[(q, q)] = aqq + t * apq;
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = m[(r, p)];
                        let arq = m[(r, q)];
                        let new_rp = arp - s * (arq + tau * arp);
                        let new_rq = arq + s * (arp - tau * arq);
                        m[(r, p)] = new_rp;
                        m[(p, r)] = new_rp;
                        m[(r, q)] = new_rq;
                        m[(q, r)] = new_rq;
                    }
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp - s * (vrq + tau * vrp);
                    v[(r, q)] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymEigen { values, vectors })
}

/// Solve `A q = lambda M q` for symmetric `A` and SPD `M` by Cholesky
/// reduction `L^{-1} A L^{-t}`; returned vectors are `M`-orthonormal.
pub fn generalized_sym_eig(a: &SymMatrix, m: &SymMatrix) -> Result<SymEigen, LinalgError> {
    let n = a.order();
    if m.order() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: m.order(),
        });
    }
    let chol = cholesky(m)?;
    // W = L^{-1} A, column by column (A symmetric).
    let mut w = Matrix::zeros(n, n);
    for j in 0..n {
        let col = chol.forward(&a.as_matrix().column(j));
        for i in 0..n {
            w[(i, j)] = col[i];
        }
    }
    // C = W L^{-t} = (L^{-1} W^t)^t.
    let wt = w.transpose();
    let mut c = Matrix::zeros(n, n);
    for j in 0..n {
        let col = chol.forward(&wt.column(j));
        for i in 0..n {
            c[(j, i)] = col[i];
        }
    }
    let reduced = SymMatrix::from_upper(n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    let eig = sym_eig(&reduced)?;
    let mut vectors = Matrix::zeros(n, n);
    for k in 0..n {
        let q = chol.backward(&eig.vectors.column(k));
        for i in 0..n {
            vectors[(i, k)] = q[i];
        }
    }
    Ok(SymEigen {
        values: eig.values,
        vectors,
    })
}

/// Unit-lower `C` and pivots `d` with `C G C^t = diag(d)` for a symmetric
/// positive definite Gram matrix `G`, computed by symmetric elimination in
/// the field `T` (exact for rationals).
///
/// Row `k` of `C` is the coefficient vector of the `k`-th element of the
/// Gram-Schmidt orthogonalization of the original generating set.
pub fn ldl_unit_inverse<T: Scalar>(gram: &[Vec<T>]) -> Result<(Vec<Vec<T>>, Vec<T>), LinalgError> {
    let n = gram.len();
    let mut a: Vec<Vec<T>> = gram.to_vec();
    let mut c: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut row = vec![T::zero(); i + 1];
            row[i] = T::one();
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        if a[k].len() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: a[k].len(),
            });
        }
        let piv = a[k][k].clone();
        let breakdown = if T::EXACT {
            piv <= T::zero()
        } else {
            let p = piv.to_f64();
            p.is_nan() || p <= 1e-14 * gram[k][k].to_f64().abs() || p.is_infinite()
        };
        if breakdown {
            return Err(LinalgError::NotSpd {
                pivot: k + 1,
                value: piv.to_f64(),
            });
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let row_k = &head[k];
        let (chead, ctail) = c.split_at_mut(k + 1);
        let crow_k = &chead[k];
        for (off, row_i) in tail.iter_mut().enumerate() {
            let f = row_i[k].clone() / piv.clone();
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let upd = row_i[j].clone() - f.clone() * row_k[j].clone();
                row_i[j] = upd;
            }
            let crow_i = &mut ctail[off];
            for j in 0..=k {
                if !crow_k[j].is_zero() {
                    let upd = crow_i[j].clone() - f.clone() * crow_k[j].clone();
                    crow_i[j] = upd;
                }
            }
        }
        pivots.push(piv);
    }
    Ok((c, pivots))
}

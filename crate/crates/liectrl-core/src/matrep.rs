//! Dense complex matrices and the numerical kernels built on them.
//!
//! Matrices are stored row-major. The `vec` map stacks columns, so that
//! `commutation_matrix(n) * vec(A) == vec(A^T)`.
//!
//! Every kernel computation reports the relative tolerance it used and the
//! worst residual of the returned basis under the defining linear map.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

/// Complex double-precision scalar used throughout the dense backend.
pub type C64 = Complex64;

/// Default relative tolerance for rank and kernel decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest matrix side for which kernels of `N^2 x N^2` operators are attempted.
pub const MAX_KRON_SIDE: usize = 64;

const REDUCTION_SEED: u64 = 0x6c69_6563_7472_6c31;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrepError {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("size {size} exceeds the configured cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("data length {len} does not match a {rows}x{cols} matrix")]
    BadShape { rows: usize, cols: usize, len: usize },
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, MatrepError> {
        if data.len() != rows * cols {
            return Err(MatrepError::BadShape { rows, cols, len: data.len() });
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// Builds a matrix from real rows; convenient for hand-written fixtures.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, MatrepError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(MatrepError::BadShape { rows: r, cols: c, len: row.len() });
            }
            data.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Ok(CMatrix { rows: r, cols: c, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
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

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hilbert-Schmidt inner product `tr(self^H other)`.
    pub fn hs_inner(&self, other: &CMatrix) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "hs_inner shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let svd = self.to_nalgebra().svd(false, false);
        svd.singular_values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && (self - &self.adjoint()).max_abs() <= tol * self.max_abs().max(1e-300)
    }

    pub fn is_skew_hermitian(&self, tol: f64) -> bool {
        self.is_square() && (self + &self.adjoint()).max_abs() <= tol * self.max_abs().max(1e-300)
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<C64>) -> CMatrix {
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Submatrix made of the given columns.
    pub fn select_columns(&self, cols: &[usize]) -> CMatrix {
        CMatrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let row_out = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row_b = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in row_out.iter_mut().zip(row_b) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Column-stacking vectorisation; the result is a `rows*cols x 1` matrix.
pub fn vec(a: &CMatrix) -> CMatrix {
    let mut data = Vec::with_capacity(a.rows * a.cols);
    for j in 0..a.cols {
        for i in 0..a.rows {
            data.push(a.get(i, j));
        }
    }
    CMatrix { rows: a.rows * a.cols, cols: 1, data }
}

/// Inverse of [`vec`].
pub fn unvec(v: &CMatrix, rows: usize, cols: usize) -> Result<CMatrix, MatrepError> {
    if v.rows * v.cols != rows * cols {
        return Err(MatrepError::BadShape { rows, cols, len: v.rows * v.cols });
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| v.data[j * rows + i]))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = CMatrix::zeros(ra * rb, ca * cb);
    for i1 in 0..ra {
        for j1 in 0..ca {
            let x = a.get(i1, j1);
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            for i2 in 0..rb {
                for j2 in 0..cb {
                    out.set(i1 * rb + i2, j1 * cb + j2, x * b.get(i2, j2));
                }
            }
        }
    }
    out
}

/// Kronecker sum `A (x) 1 + 1 (x) B` of two square matrices.
pub fn kron_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert!(a.is_square() && b.is_square(), "kron_sum needs square inputs");
    &kron(a, &CMatrix::identity(b.rows)) + &kron(&CMatrix::identity(a.rows), b)
}

/// The `n^2 x n^2` permutation with `K vec(A) = vec(A^T)`.
pub fn commutation_matrix(n: usize) -> CMatrix {
    let mut k = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            k.set(i + j * n, j + i * n, C64::new(1.0, 0.0));
        }
    }
    k
}

/// Kernel of a linear map together with its audit trail.
#[derive(Clone, Debug)]
pub struct NullspaceResult {
    /// Orthonormal kernel basis. For plain [`nullspace`] calls these are column
    /// vectors; matrix-valued solvers return reshaped matrices.
    pub basis: Vec<CMatrix>,
    pub tolerance_used: f64,
    pub residual_max: f64,
}

impl NullspaceResult {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reshapes column-vector basis elements into `rows x cols` matrices.
    pub fn reshaped(&self, rows: usize, cols: usize) -> Result<Vec<CMatrix>, MatrepError> {
        self.basis.iter().map(|v| unvec(v, rows, cols)).collect()
    }
}

fn check_tol(tol: f64) -> Result<(), MatrepError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(MatrepError::InvalidTolerance(tol))
    }
}

/// Singular values and right singular vectors (as rows of `V^H`, padded to a
/// full `cols x cols` basis).
fn full_right_svd(m: &CMatrix) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.cols;
    let padded = if m.rows < n {
        let mut p = DMatrix::<C64>::zeros(n, n);
        for i in 0..m.rows {
            for j in 0..n {
                p[(i, j)] = m.get(i, j);
            }
        }
        p
    } else {
        m.to_nalgebra()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    (svd.singular_values.iter().cloned().collect(), v_t)
}

/// Orthonormal basis of the numerical kernel of `m`: right singular vectors
/// whose singular value is at most `tol * sigma_max`.
pub fn nullspace(m: &CMatrix, tol: f64) -> Result<NullspaceResult, MatrepError> {
    nullspace_scaled(m, tol, 0.0)
}

/// Like [`nullspace`], but singular values are compared against
/// `tol * max(sigma_max, reference)`. A positive `reference` keeps rounding
/// noise from being mistaken for rank when the whole operator is tiny.
pub fn nullspace_scaled(m: &CMatrix, tol: f64, reference: f64) -> Result<NullspaceResult, MatrepError> {
    check_tol(tol)?;
    if !m.is_finite() {
        return Err(MatrepError::NonFinite);
    }
    let n = m.cols;
    if n == 0 {
        return Ok(NullspaceResult { basis: vec![], tolerance_used: tol, residual_max: 0.0 });
    }
    if m.rows == 0 || m.max_abs() == 0.0 {
        let basis = (0..n)
            .map(|k| CMatrix::from_fn(n, 1, |i, _| if i == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }))
            .collect();
        return Ok(NullspaceResult { basis, tolerance_used: tol, residual_max: 0.0 });
    }
    let (sv, v_t) = full_right_svd(m);
    let sigma_max = sv.iter().cloned().fold(0.0, f64::max).max(reference);
    let mut basis = Vec::new();
    for (k, &s) in sv.iter().enumerate() {
        if s <= tol * sigma_max {
            basis.push(CMatrix::from_fn(n, 1, |i, _| v_t[(k, i)].conj()));
        }
    }
    let residual_max = basis.iter().map(|v| (m * v).frobenius_norm()).fold(0.0, f64::max);
    Ok(NullspaceResult { basis, tolerance_used: tol, residual_max })
}

/// Numerical rank: number of singular values above `tol * sigma_max`.
pub fn rank(m: &CMatrix, tol: f64) -> Result<usize, MatrepError> {
    check_tol(tol)?;
    if !m.is_finite() {
        return Err(MatrepError::NonFinite);
    }
    if m.data.is_empty() || m.max_abs() == 0.0 {
        return Ok(0);
    }
    let svd = m.to_nalgebra().svd(false, false);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    Ok(svd.singular_values.iter().filter(|&&s| s > tol * sigma_max).count())
}

/// Orthonormal basis of the intersection of the spans of several column-vector
/// bases living in the same ambient space `C^dim`.
pub fn intersect_subspaces(bases: &[Vec<CMatrix>], dim: usize, tol: f64) -> Result<Vec<CMatrix>, MatrepError> {
    check_tol(tol)?;
    let mut blocks: Vec<CMatrix> = Vec::with_capacity(bases.len());
    for basis in bases {
        let mut proj = CMatrix::identity(dim);
        for v in basis {
            if v.rows != dim || v.cols != 1 {
                return Err(MatrepError::DimensionMismatch {
                    expected: format!("{dim}x1"),
                    found: format!("{}x{}", v.rows, v.cols),
                });
            }
            let outer = v * &v.adjoint();
            proj = &proj - &outer;
        }
        blocks.push(proj);
    }
    if blocks.is_empty() {
        return Ok(nullspace(&CMatrix::zeros(0, dim), tol)?.basis);
    }
    let stacked = vstack(&blocks);
    Ok(nullspace(&stacked, tol)?.basis)
}

/// Stacks matrices with equal column counts on top of each other.
pub fn vstack(blocks: &[CMatrix]) -> CMatrix {
    let cols = blocks.first().map_or(0, |b| b.cols);
    let mut data = Vec::new();
    let mut rows = 0;
    for b in blocks {
        assert_eq!(b.cols, cols, "vstack column mismatch");
        data.extend_from_slice(&b.data);
        rows += b.rows;
    }
    CMatrix { rows, cols, data }
}

/// Orthonormalises the given matrices in the Hilbert-Schmidt inner product,
/// dropping those that are dependent within `tol` (relative to their norm).
pub fn orthonormalize(mats: &[CMatrix], tol: f64) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = Vec::new();
    for m in mats {
        let norm0 = m.frobenius_norm();
        if norm0 == 0.0 {
            continue;
        }
        let mut v = m.clone();
        for _ in 0..2 {
            for q in &out {
                let c = q.hs_inner(&v);
                v = &v - &q.scale(c);
            }
        }
        let norm = v.frobenius_norm();
        if norm > tol * norm0 {
            out.push(v.scale(C64::new(1.0 / norm, 0.0)));
        }
    }
    out
}

/// Solves the stacked system `A_k X - X B_k = 0` for all pairs by forming the
/// Kronecker operators explicitly. Intended for small sizes and as a reference.
pub fn joint_sylvester_kernel_direct(pairs: &[(CMatrix, CMatrix)], tol: f64) -> Result<NullspaceResult, MatrepError> {
    let (p, q) = sylvester_shape(pairs)?;
    let blocks: Vec<CMatrix> = pairs
        .iter()
        .map(|(a, b)| &kron(&CMatrix::identity(q), a) - &kron(&b.transpose(), &CMatrix::identity(p)))
        .collect();
    let stacked = if blocks.is_empty() { CMatrix::zeros(0, p * q) } else { vstack(&blocks) };
    let raw = nullspace(&stacked, tol)?;
    let basis = raw.reshaped(p, q)?;
    let residual_max = sylvester_residual(pairs, &basis);
    Ok(NullspaceResult { basis, tolerance_used: tol, residual_max })
}

fn sylvester_shape(pairs: &[(CMatrix, CMatrix)]) -> Result<(usize, usize), MatrepError> {
    let (a0, b0) = pairs
        .first()
        .ok_or(MatrepError::DimensionMismatch { expected: "at least one matrix pair".into(), found: "none".into() })?;
    let (p, q) = (a0.rows, b0.rows);
    for (a, b) in pairs {
        if !a.is_square() || !b.is_square() || a.rows != p || b.rows != q {
            return Err(MatrepError::DimensionMismatch {
                expected: format!("{p}x{p} and {q}x{q}"),
                found: format!("{}x{} and {}x{}", a.rows, a.cols, b.rows, b.cols),
            });
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(MatrepError::NonFinite);
        }
    }
    Ok((p, q))
}

fn sylvester_residual(pairs: &[(CMatrix, CMatrix)], basis: &[CMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for x in basis {
        for (a, b) in pairs {
            worst = worst.max((&(a * x) - &(x * b)).frobenius_norm());
        }
    }
    worst
}

/// Unitary eigen-decomposition of a Hermitian or skew-Hermitian matrix.
/// Returns eigenvalues of `a` itself and the unitary of eigenvectors.
fn normal_eigen(a: &CMatrix) -> Option<(Vec<C64>, CMatrix)> {
    let i = C64::new(0.0, 1.0);
    let (herm, factor) = if a.max_abs() == 0.0 || a.is_hermitian(1e-12) {
        (a.clone(), C64::new(1.0, 0.0))
    } else if a.is_skew_hermitian(1e-12) {
        // a = -i * (i a) with i a Hermitian
        (a.scale(i), -i)
    } else {
        return None;
    };
    let mut h = herm.to_nalgebra();
    // symmetrise away rounding noise so the Hermitian solver sees exact symmetry
    let adj = h.adjoint();
    h = (h + adj) * C64::new(0.5, 0.0);
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let values = eig.eigenvalues.iter().map(|&l| factor * l).collect();
    Some((values, CMatrix::from_nalgebra(&eig.eigenvectors)))
}

/// Eigen-data of a random real combination used to restrict a commutation
/// problem to the pairs of eigenvectors whose eigenvalues coincide.
struct Support {
    pairs: Vec<(usize, usize)>,
}

fn random_weights(count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(REDUCTION_SEED);
    (0..count).map(|_| rng.random_range(0.5..1.5) * if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect()
}

fn coincidences(alpha: &[C64], beta: &[C64]) -> Support {
    let scale = alpha.iter().chain(beta).map(|z| z.norm()).fold(0.0, f64::max);
    let eig_tol = 1e-6 * scale.max(1e-300);
    // |a - b| <= t implies |key(a) - key(b)| <= 2t for key(z) = re + im
    let key = |z: &C64| z.re + z.im;
    let mut order: Vec<usize> = (0..beta.len()).collect();
    order.sort_by(|&a, &b| key(&beta[a]).total_cmp(&key(&beta[b])));
    let keys: Vec<f64> = order.iter().map(|&j| key(&beta[j])).collect();
    let mut pairs = Vec::new();
    for (i, ai) in alpha.iter().enumerate() {
        let ka = key(ai);
        let lo = keys.partition_point(|&k| k < ka - 2.0 * eig_tol);
        for &j in order[lo..].iter().take_while(|&&j| key(&beta[j]) <= ka + 2.0 * eig_tol) {
            if (ai - beta[j]).norm() <= eig_tol {
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_unstable();
    Support { pairs }
}

/// Kernel of a sparse matrix given as rows of `(column, value)` entries.
///
/// Tall systems are first compressed by a seeded sparse random sign
/// embedding to a little more than `ncols` rows. Every vector in the kernel
/// of the full matrix lies in the kernel of the compressed one; the converse
/// is checked row by row afterwards, and if any vector fails the exact path
/// below is taken instead.
fn sparse_row_kernel(
    rows: impl Iterator<Item = Vec<(usize, C64)>>,
    ncols: usize,
    tol: f64,
    reference: f64,
) -> Result<Vec<Vec<C64>>, MatrepError> {
    let rows: Vec<Vec<(usize, C64)>> = rows.filter(|r| !r.is_empty()).collect();
    let sketch_rows = ncols + 64;
    if rows.len() > 2 * sketch_rows {
        let mut rng = ChaCha8Rng::seed_from_u64(REDUCTION_SEED ^ rows.len() as u64);
        let hashes = 8usize;
        let weight = 1.0 / (hashes as f64).sqrt();
        let mut sketch = CMatrix::zeros(sketch_rows, ncols);
        for row in &rows {
            for _ in 0..hashes {
                let b = rng.random_range(0..sketch_rows);
                let w = if rng.random_bool(0.5) { weight } else { -weight };
                for &(c, v) in row {
                    sketch.add_at(b, c, v * w);
                }
            }
        }
        let candidate = nullspace_scaled(&sketch, tol, reference)?;
        let row_scale =
            rows.iter().map(|r| r.iter().map(|(_, v)| v.norm_sqr()).sum::<f64>().sqrt()).fold(reference, f64::max);
        let limit = 10.0 * tol * row_scale;
        let verified = candidate.basis.iter().all(|y| {
            let y = y.data();
            rows.iter().map(|r| r.iter().map(|&(c, v)| v * y[c]).sum::<C64>().norm_sqr()).sum::<f64>().sqrt() <= limit
        });
        if verified {
            return Ok(candidate.basis.iter().map(|v| v.data().to_vec()).collect());
        }
    }
    dense_row_kernel(rows, ncols, tol, reference)
}

/// Exact counterpart of [`sparse_row_kernel`]: rows are folded into an
/// upper-triangular factor by repeated QR of small blocks, so only a
/// `ncols x ncols` matrix is ever held densely. The singular values of the
/// final factor equal those of the full matrix.
fn dense_row_kernel(
    rows: Vec<Vec<(usize, C64)>>,
    ncols: usize,
    tol: f64,
    reference: f64,
) -> Result<Vec<Vec<C64>>, MatrepError> {
    let block_rows = ncols.max(256);
    let mut r: Option<DMatrix<C64>> = None;
    let mut pending: Vec<Vec<(usize, C64)>> = Vec::with_capacity(block_rows);
    let fold = |r: Option<DMatrix<C64>>, pending: &mut Vec<Vec<(usize, C64)>>| -> DMatrix<C64> {
        let top = r.as_ref().map_or(0, |m| m.nrows());
        let mut stack = DMatrix::<C64>::zeros(top + pending.len(), ncols);
        if let Some(m) = &r {
            stack.rows_mut(0, top).copy_from(m);
        }
        for (k, row) in pending.drain(..).enumerate() {
            for (c, v) in row {
                stack[(top + k, c)] += v;
            }
        }
        if stack.nrows() <= ncols {
            return stack;
        }
        stack.qr().r()
    };
    for row in rows {
        pending.push(row);
        if pending.len() >= block_rows {
            r = Some(fold(r, &mut pending));
        }
    }
    if !pending.is_empty() {
        r = Some(fold(r, &mut pending));
    }
    let m = match r {
        Some(m) => CMatrix::from_nalgebra(&m),
        None => CMatrix::zeros(0, ncols),
    };
    let ns = nullspace_scaled(&m, tol, reference)?;
    Ok(ns.basis.iter().map(|v| v.data().to_vec()).collect())
}

/// Builds and solves the reduced commutation system.
///
/// Unknowns are the coordinates `X'[i, j]` for `(i, j)` in `support`. For
/// each pair index `k`, `a_col(k, i)` lists the nonzero entries `(r, A'_k[r, i])`
/// of column `i`, and `b_row(k, j)` the entries `(c, B'_k[j, c])` of row `j`.
fn reduced_commutation_kernel(
    support: &Support,
    count: usize,
    a_col: &(dyn Fn(usize, usize) -> Vec<(usize, C64)> + Sync),
    b_row: &(dyn Fn(usize, usize) -> Vec<(usize, C64)> + Sync),
    tol: f64,
    reference: f64,
) -> Result<Vec<Vec<C64>>, MatrepError> {
    use std::collections::BTreeMap;
    let mut rows: BTreeMap<(usize, usize, usize), Vec<(usize, C64)>> = BTreeMap::new();
    for (col, &(i, j)) in support.pairs.iter().enumerate() {
        for k in 0..count {
            for (r, v) in a_col(k, i) {
                rows.entry((k, r, j)).or_default().push((col, v));
            }
            for (c, v) in b_row(k, j) {
                rows.entry((k, i, c)).or_default().push((col, -v));
            }
        }
    }
    let drop_below = 1e-15 * reference.max(1e-300);
    let iter = rows.into_values().map(move |mut row| {
        row.retain(|(_, v)| v.norm() > drop_below);
        row
    });
    sparse_row_kernel(iter, support.pairs.len(), tol, reference)
}

fn column_entries(m: &CMatrix, col: usize, cut: f64) -> Vec<(usize, C64)> {
    (0..m.rows)
        .filter_map(|r| {
            let v = m.get(r, col);
            (v.norm() > cut).then_some((r, v))
        })
        .collect()
}

fn row_entries(m: &CMatrix, row: usize, cut: f64) -> Vec<(usize, C64)> {
    (0..m.cols)
        .filter_map(|c| {
            let v = m.get(row, c);
            (v.norm() > cut).then_some((c, v))
        })
        .collect()
}

/// Solves `A_k X - X B_k = 0` jointly for all pairs.
///
/// When every matrix is Hermitian or skew-Hermitian the problem is first
/// restricted to the eigenbasis of a random real combination of the pairs:
/// any joint solution also solves the combined equation, whose solutions are
/// supported on eigenvalue coincidences. The remaining pairs are then imposed
/// on that small parameter space. Otherwise the Kronecker system is solved
/// directly.
pub fn joint_sylvester_kernel(pairs: &[(CMatrix, CMatrix)], tol: f64) -> Result<NullspaceResult, MatrepError> {
    check_tol(tol)?;
    let (p, q) = sylvester_shape(pairs)?;
    let weights = random_weights(pairs.len());
    let mut a_r = CMatrix::zeros(p, p);
    let mut b_r = CMatrix::zeros(q, q);
    for ((a, b), &w) in pairs.iter().zip(&weights) {
        a_r = &a_r + &a.scale(C64::new(w, 0.0));
        b_r = &b_r + &b.scale(C64::new(w, 0.0));
    }
    let (Some((alpha, u)), Some((beta, w))) = (normal_eigen(&a_r), normal_eigen(&b_r)) else {
        return joint_sylvester_kernel_direct(pairs, tol);
    };
    let support = coincidences(&alpha, &beta);
    if support.pairs.is_empty() {
        return Ok(NullspaceResult { basis: vec![], tolerance_used: tol, residual_max: 0.0 });
    }
    let u_h = u.adjoint();
    let w_h = w.adjoint();
    let transformed: Vec<(CMatrix, CMatrix)> =
        pairs.iter().map(|(a, b)| (&(&u_h * a) * &u, &(&w_h * b) * &w)).collect();
    let reference = pairs.iter().map(|(a, b)| a.frobenius_norm().max(b.frobenius_norm())).fold(0.0, f64::max);
    let cut = 1e-15 * reference.max(1e-300);
    let a_col = |k: usize, i: usize| column_entries(&transformed[k].0, i, cut);
    let b_row = |k: usize, j: usize| row_entries(&transformed[k].1, j, cut);
    let kernel = reduced_commutation_kernel(&support, pairs.len(), &a_col, &b_row, tol, reference)?;
    let basis: Vec<CMatrix> = kernel
        .iter()
        .map(|y| {
            let mut xp = CMatrix::zeros(p, q);
            for (k, &(i, j)) in support.pairs.iter().enumerate() {
                xp.set(i, j, y[k]);
            }
            &(&u * &xp) * &w_h
        })
        .collect();
    let residual_max = sylvester_residual(pairs, &basis);
    Ok(NullspaceResult { basis, tolerance_used: tol, residual_max })
}

/// Joint commutant of the tensor-square generators `H_k (x) 1 + 1 (x) H_k`,
/// computed without materialising any `N^2 x N^2` operator.
#[derive(Clone, Debug)]
pub struct TensorSquareCommutant {
    /// Dimension of the commutant in `gl(N^2)`.
    pub dim: usize,
    /// Commutant dimensions after compressing to the antisymmetric and
    /// symmetric subspaces of `C^N (x) C^N`.
    pub alt_dim: usize,
    pub sym_dim: usize,
    /// Whether the swap operator `K_{N,N}` lies in the computed commutant.
    pub contains_swap: bool,
    pub tolerance_used: f64,
    /// Largest residual of the commutant basis in the eigen-coordinates.
    pub residual_max: f64,
}

/// Computes the commutant of `{H_k (x) 1 + 1 (x) H_k}` for Hermitian or
/// skew-Hermitian `H_k` of common size `N <= max_side`.
///
/// In the eigenbasis `u` of a random combination `H_r`, the combined tensor
/// generator is diagonal in `u (x) u`, and each `H_k` becomes
/// `H'_k = u^H H_k u`. Columns of the constraint system are assembled from
/// `H'_k` entries directly.
pub fn tensor_square_commutant(
    gens: &[CMatrix],
    max_side: usize,
    tol: f64,
) -> Result<TensorSquareCommutant, MatrepError> {
    check_tol(tol)?;
    let pairs: Vec<(CMatrix, CMatrix)> = gens.iter().map(|h| (h.clone(), h.clone())).collect();
    let (n, _) = sylvester_shape(&pairs)?;
    if n > max_side {
        return Err(MatrepError::CapExceeded { size: n, cap: max_side });
    }
    let weights = random_weights(gens.len());
    let mut h_r = CMatrix::zeros(n, n);
    for (h, &w) in gens.iter().zip(&weights) {
        h_r = &h_r + &h.scale(C64::new(w, 0.0));
    }
    let (alpha, u) = normal_eigen(&h_r).ok_or(MatrepError::DimensionMismatch {
        expected: "Hermitian or skew-Hermitian generators".into(),
        found: "a non-normal combination".into(),
    })?;
    let sums: Vec<C64> = (0..n * n).map(|idx| alpha[idx / n] + alpha[idx % n]).collect();
    let support = coincidences(&sums, &sums);
    let u_h = u.adjoint();
    let primed: Vec<CMatrix> = gens.iter().map(|h| &(&u_h * h) * &u).collect();
    let reference = 2.0 * gens.iter().map(CMatrix::frobenius_norm).fold(0.0, f64::max);
    let cut = 1e-15 * reference.max(1e-300);
    // column I = (i1, i2) of H' (x) 1 + 1 (x) H'
    let a_col = |k: usize, big_i: usize| {
        let (i1, i2) = (big_i / n, big_i % n);
        let h = &primed[k];
        let mut out = Vec::with_capacity(2 * n);
        for r1 in 0..n {
            let v = h.get(r1, i1);
            if v.norm() > cut {
                out.push((r1 * n + i2, v));
            }
        }
        for r2 in 0..n {
            let v = h.get(r2, i2);
            if v.norm() > cut {
                out.push((i1 * n + r2, v));
            }
        }
        out
    };
    // row J = (j1, j2) of the same operator
    let b_row = |k: usize, big_j: usize| {
        let (j1, j2) = (big_j / n, big_j % n);
        let h = &primed[k];
        let mut out = Vec::with_capacity(2 * n);
        for c1 in 0..n {
            let v = h.get(j1, c1);
            if v.norm() > cut {
                out.push((c1 * n + j2, v));
            }
        }
        for c2 in 0..n {
            let v = h.get(j2, c2);
            if v.norm() > cut {
                out.push((j1 * n + c2, v));
            }
        }
        out
    };
    let kernel = reduced_commutation_kernel(&support, gens.len(), &a_col, &b_row, tol, reference)?;
    let dim = kernel.len();
    let index: std::collections::HashMap<(usize, usize), usize> =
        support.pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let swap = |big: usize| (big % n) * n + big / n;
    // the swap operator is K itself in u (x) u coordinates
    let mut k_vec = vec![C64::new(0.0, 0.0); support.pairs.len()];
    let mut k_ok = true;
    for big_i in 0..n * n {
        match index.get(&(big_i, swap(big_i))) {
            Some(&pos) => k_vec[pos] = C64::new(1.0, 0.0),
            None => k_ok = false,
        }
    }
    let contains_swap = k_ok && in_span(&kernel, &k_vec, 1e-8);
    // compress P X P for P = (1 +- K)/2 in the same coordinates
    let compress = |y: &Vec<C64>, sign: f64| -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); support.pairs.len()];
        for (pos, &(bi, bj)) in support.pairs.iter().enumerate() {
            // (P X P)[I, J] = (X[I,J] + s X[KI,J] + s X[I,KJ] + X[KI,KJ]) / 4
            let terms = [(bi, bj, 1.0), (swap(bi), bj, sign), (bi, swap(bj), sign), (swap(bi), swap(bj), 1.0)];
            let mut acc = C64::new(0.0, 0.0);
            for (a, b, s) in terms {
                if let Some(&k) = index.get(&(a, b)) {
                    acc += y[k] * s;
                }
            }
            out[pos] = acc * 0.25;
        }
        out
    };
    let rank_of = |vs: Vec<Vec<C64>>| -> usize {
        if vs.is_empty() {
            return 0;
        }
        let m = CMatrix::from_fn(support.pairs.len(), vs.len(), |i, j| vs[j][i]);
        if m.max_abs() <= 1e-12 {
            return 0;
        }
        rank(&m, 1e-8).unwrap_or(0)
    };
    let alt_dim = rank_of(kernel.iter().map(|y| compress(y, -1.0)).collect());
    let sym_dim = rank_of(kernel.iter().map(|y| compress(y, 1.0)).collect());
    // residual of each kernel vector under the reduced operator
    let mut residual_max: f64 = 0.0;
    for y in &kernel {
        let mut acc: std::collections::HashMap<(usize, usize, usize), C64> = std::collections::HashMap::new();
        for (pos, &(i, j)) in support.pairs.iter().enumerate() {
            if y[pos].norm() == 0.0 {
                continue;
            }
            for k in 0..gens.len() {
                for (r, v) in a_col(k, i) {
                    *acc.entry((k, r, j)).or_default() += v * y[pos];
                }
                for (c, v) in b_row(k, j) {
                    *acc.entry((k, i, c)).or_default() -= v * y[pos];
                }
            }
        }
        let norm = acc.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        residual_max = residual_max.max(norm);
    }
    Ok(TensorSquareCommutant { dim, alt_dim, sym_dim, contains_swap, tolerance_used: tol, residual_max })
}

fn in_span(basis: &[Vec<C64>], v: &[C64], tol: f64) -> bool {
    // basis is orthonormal: compare the projection with v itself
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return true;
    }
    let mut resid: Vec<C64> = v.to_vec();
    for b in basis {
        let c: C64 = b.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
        for (r, x) in resid.iter_mut().zip(b) {
            *r -= c * x;
        }
    }
    resid.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() <= tol * norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&CMatrix::identity(2), &CMatrix::identity(3));
        assert_eq!(k, CMatrix::identity(6));
    }

    #[test]
    fn vec_stacks_columns() {
        let a = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let v = vec(&a);
        let got: Vec<f64> = v.data().iter().map(|z| z.re).collect();
        assert_eq!(got, vec![1.0, 3.0, 2.0, 4.0]);
    }

    #[test]
    fn reduced_solver_matches_direct_on_random_hermitian_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut herm = |n: usize| {
            let m = CMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            &m + &m.adjoint()
        };
        let h = herm(3);
        let pairs = vec![(h.clone(), h.clone())];
        let a = joint_sylvester_kernel(&pairs, DEFAULT_TOL).unwrap();
        let b = joint_sylvester_kernel_direct(&pairs, DEFAULT_TOL).unwrap();
        assert_eq!(a.dim(), b.dim());
        assert_eq!(a.dim(), 3);
        assert!(a.residual_max < 1e-9);
    }
}

//! Dense complex linear algebra.
//!
//! [`ComplexMatrix`] is a row-major matrix of [`Complex64`] entries and the
//! carrier for operators, Gram matrices and representations alike. The
//! Hermitian eigendecomposition and the SVD are Jacobi methods: slower than
//! Householder-based routines but accurate to a few ulps relative to the
//! input norm, which is what the frame identities downstream are checked
//! against.

use std::fmt;
use std::ops::Index;

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative Frobenius deviation from Hermitian symmetry accepted by
/// [`hermitian_eigs`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_finite(values: &[Complex64]) -> Result<()> {
    match values
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        Some(idx) => Err(Error::NonFinite(idx)),
        None => Ok(()),
    }
}

/// A vector in `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty("vector has no entries".into()));
        }
        check_finite(&entries)?;
        Ok(ComplexVector { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector {
            entries: vec![ZERO; dim.max(1)],
        }
    }

    /// The canonical basis vector `δ_k` of length `dim`.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = ONE;
        v
    }

    pub(crate) fn from_raw(entries: Vec<Complex64>) -> Self {
        debug_assert!(!entries.is_empty());
        ComplexVector { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.entries
    }

    /// Inner product `⟨self, other⟩ = Σ self_i · conj(other_i)`, linear in
    /// the first argument.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "inner product of vectors of length {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn sub(&self, other: &ComplexVector) -> Result<ComplexVector> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "difference of vectors of length {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(ComplexVector::from_raw(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    /// The vector as an `n×1` matrix.
    pub fn to_column(&self) -> ComplexMatrix {
        ComplexMatrix::from_raw(self.dim(), 1, self.entries.clone())
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, idx: usize) -> &Complex64 {
        &self.entries[idx]
    }
}

/// A dense `rows × cols` complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty(format!("matrix shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        check_finite(&data)?;
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let rows = columns.first().map_or(0, ComplexVector::dim);
        if let Some(bad) = columns.iter().position(|c| c.dim() != rows) {
            return Err(Error::DimensionMismatch(format!(
                "column {bad} has length {}, expected {rows}",
                columns[bad].dim()
            )));
        }
        let cols = columns.len();
        if cols == 0 {
            return Err(Error::Empty("no columns".into()));
        }
        let mut data = vec![ZERO; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for (i, &z) in c.as_slice().iter().enumerate() {
                data[i * cols + j] = z;
            }
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix::from_raw(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![ONE; n])
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_raw((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        matmul(self, rhs)
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        adjoint(self)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of length {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let out = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v.as_slice())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(ComplexVector::from_raw(out))
    }

    fn zip_with(
        &self,
        rhs: &ComplexMatrix,
        what: &str,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<ComplexMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{what} of {}x{} and {}x{} matrices",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(ComplexMatrix::from_raw(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        ))
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(rhs, "sum", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(rhs, "difference", |a, b| a - b)
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|z| z * factor).collect(),
        )
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(self)
    }

    pub fn operator_norm(&self) -> f64 {
        operator_norm(self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

/// Matrix product `a·b`.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "product of {}x{} and {}x{} matrices",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = vec![ZERO; a.rows * b.cols];
    for i in 0..a.rows {
        let out_row = &mut out[i * b.cols..(i + 1) * b.cols];
        for (k, &aik) in a.row(i).iter().enumerate() {
            if aik == ZERO {
                continue;
            }
            for (o, &bkj) in out_row.iter_mut().zip(b.row(k)) {
                *o += aik * bkj;
            }
        }
    }
    Ok(ComplexMatrix::from_raw(a.rows, b.cols, out))
}

/// Conjugate transpose.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    let mut data = Vec::with_capacity(a.data.len());
    for j in 0..a.cols {
        for i in 0..a.rows {
            data.push(a[(i, j)].conj());
        }
    }
    ComplexMatrix::from_raw(a.cols, a.rows, data)
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral norm, the largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    svd(a).singular_values[0]
}

/// Eigendecomposition `h = V·diag(λ)·V*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Solves `h·x = b` through the decomposition, treating eigenvalues at or
    /// below `floor` as zero.
    pub fn solve(&self, b: &ComplexVector, floor: f64) -> Result<ComplexVector> {
        let coords = adjoint(&self.vectors).mul_vec(b)?;
        let scaled: Vec<Complex64> = coords
            .as_slice()
            .iter()
            .zip(&self.values)
            .map(|(&c, &lambda)| if lambda > floor { c / lambda } else { ZERO })
            .collect();
        self.vectors.mul_vec(&ComplexVector::from_raw(scaled))
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// The input is symmetrized as `(h + h*)/2` before decomposition after
/// checking that `‖h − h*‖_F ≤ HERMITIAN_TOL·‖h‖_F`. Uses cyclic complex
/// Jacobi rotations.
pub fn hermitian_eigs(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::NonSquare {
            rows: h.rows,
            cols: h.cols,
        });
    }
    let h_adj = adjoint(h);
    let scale = frobenius_norm(h);
    let deviation = frobenius_norm(&h.sub(&h_adj)?);
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            deviation: deviation / scale,
            tolerance: HERMITIAN_TOL,
        });
    }
    let mut a = h.add(&h_adj)?.scale(Complex64::new(0.5, 0.0));
    let n = a.rows;
    for i in 0..n {
        a.data[i * n + i].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = f64::EPSILON * 1e-2 * scale;

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.data[p * n + q];
                let mag = apq.norm();
                if mag <= threshold {
                    continue;
                }
                rotated = true;
                let phase = apq / mag;
                let app = a.data[p * n + p].re;
                let aqq = a.data[q * n + q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = [[c, s], [-s·conj(phase), c·conj(phase)]] on (p, q)
                let jqp = -s * phase.conj();
                let jqq = c * phase.conj();
                for k in 0..n {
                    let akp = a.data[k * n + p];
                    let akq = a.data[k * n + q];
                    a.data[k * n + p] = akp * c + akq * jqp;
                    a.data[k * n + q] = akp * s + akq * jqq;
                    let vkp = v.data[k * n + p];
                    let vkq = v.data[k * n + q];
                    v.data[k * n + p] = vkp * c + vkq * jqp;
                    v.data[k * n + q] = vkp * s + vkq * jqq;
                }
                for k in 0..n {
                    let apk = a.data[p * n + k];
                    let aqk = a.data[q * n + k];
                    a.data[p * n + k] = apk * c + aqk * jqp.conj();
                    a.data[q * n + k] = apk * s + aqk * jqq.conj();
                }
                a.data[p * n + q] = ZERO;
                a.data[q * n + p] = ZERO;
                a.data[p * n + p].im = 0.0;
                a.data[q * n + q].im = 0.0;
            }
        }
        if !rotated {
            break;
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a.data[i * n + i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    Ok(HermitianEigen {
        values: order.iter().map(|&k| diag[k]).collect(),
        vectors: select_columns(&v, &order),
    })
}

const MAX_SWEEPS: usize = 100;

fn select_columns(m: &ComplexMatrix, order: &[usize]) -> ComplexMatrix {
    let mut data = Vec::with_capacity(m.rows * order.len());
    for i in 0..m.rows {
        data.extend(order.iter().map(|&j| m[(i, j)]));
    }
    ComplexMatrix::from_raw(m.rows, order.len(), data)
}

/// Thin singular value decomposition `a = U·diag(σ)·V*`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows × k` with orthonormal columns, `k = min(rows, cols)`.
    pub u: ComplexMatrix,
    /// Descending, nonnegative, length `k`.
    pub singular_values: Vec<f64>,
    /// `cols × k` with orthonormal columns.
    pub v: ComplexMatrix,
}

/// Thin SVD by one-sided (Hestenes) Jacobi rotations.
pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.rows < a.cols {
        let t = svd(&adjoint(a));
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let (m, n) = (a.rows, a.cols);
    // Work column-major: cols[j] is column j of A·V.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j).entries).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n).map(|j| ComplexVector::unit(n, j).entries).collect();

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let mag = gamma.norm();
                if mag == 0.0 || mag <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column q by conj(phase) so that ⟨col_q, col_p⟩ is real.
                let phase = (gamma / mag).conj();
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(q);
                rotate_pair(&mut lo[p], &mut hi[0], phase, c, s);
                let (lo, hi) = v.split_at_mut(q);
                rotate_pair(&mut lo[p], &mut hi[0], phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| sigma[y].total_cmp(&sigma[x]));

    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let negligible = sigma_max * f64::EPSILON * (m as f64);
    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for (dst, &j) in order.iter().enumerate() {
        if sigma[j] > negligible && sigma[j] > 0.0 {
            u_cols.push(cols[j].iter().map(|z| z / sigma[j]).collect());
        } else {
            u_cols.push(vec![ZERO; m]);
            deficient.push(dst);
        }
    }
    complete_orthonormal(&mut u_cols, &deficient, m);

    let u = ComplexMatrix::from_columns(
        &u_cols
            .into_iter()
            .map(ComplexVector::from_raw)
            .collect::<Vec<_>>(),
    )
    .expect("equal column lengths");
    let v = ComplexMatrix::from_columns(
        &order
            .iter()
            .map(|&j| ComplexVector::from_raw(v[j].clone()))
            .collect::<Vec<_>>(),
    )
    .expect("equal column lengths");
    Svd {
        u,
        singular_values: order.iter().map(|&j| sigma[j]).collect(),
        v,
    }
}

/// `(x, y) ← (c·x − s·φy, s·x + c·φy)`.
fn rotate_pair(x: &mut [Complex64], y: &mut [Complex64], phase: Complex64, c: f64, s: f64) {
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let w = *yi * phase;
        let xo = *xi;
        *xi = xo * c - w * s;
        *yi = xo * s + w * c;
    }
}

/// Replaces the listed columns by unit vectors orthogonal to all others.
///
/// Each target is the standard basis vector with the largest component
/// outside the span of the columns filled so far, orthogonalized twice.
fn complete_orthonormal(cols: &mut [Vec<Complex64>], targets: &[usize], m: usize) {
    let mut filled: Vec<bool> = (0..cols.len()).map(|j| !targets.contains(&j)).collect();
    for &t in targets {
        let residual = |start: Vec<Complex64>, cols: &[Vec<Complex64>]| {
            let mut w = start;
            for _ in 0..2 {
                for (c, _) in cols.iter().zip(&filled).filter(|(_, f)| **f) {
                    let proj: Complex64 = c.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                    for (wi, ci) in w.iter_mut().zip(c) {
                        *wi -= proj * ci;
                    }
                }
            }
            w
        };
        let best = (0..m)
            .map(|k| residual(ComplexVector::unit(m, k).entries, cols))
            .max_by(|a, b| norm_of(a).total_cmp(&norm_of(b)))
            .expect("m > 0");
        let norm = norm_of(&best);
        cols[t] = best.iter().map(|z| z / norm).collect();
        filled[t] = true;
    }
}

fn norm_of(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Default relative cutoff for [`pseudoinverse`]: `max(rows, cols)·ε`.
pub fn default_rel_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// Moore–Penrose pseudoinverse via the SVD; singular values at or below
/// `rel_tol·σ_max` are dropped.
pub fn pseudoinverse(a: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let dec = svd(a);
    let cutoff = rel_tol.max(0.0) * dec.singular_values[0];
    let mut out = ComplexMatrix::zeros(a.cols, a.rows);
    for (k, &sigma) in dec.singular_values.iter().enumerate() {
        if sigma <= cutoff || sigma == 0.0 {
            continue;
        }
        // out += v_k · u_k* / σ_k
        for i in 0..a.cols {
            let vik = dec.v[(i, k)] / sigma;
            for j in 0..a.rows {
                out.data[i * a.rows + j] += vik * dec.u[(j, k)].conj();
            }
        }
    }
    out
}

/// Numerical rank: the number of singular values above `rel_tol·σ_max`.
pub fn rank(a: &ComplexMatrix, rel_tol: f64) -> usize {
    let sv = svd(a).singular_values;
    let cutoff = rel_tol * sv[0];
    sv.iter().filter(|&&s| s > cutoff && s > 0.0).count()
}

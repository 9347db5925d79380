//! Random instance generators and reference computations for the integration
//! tests. The references use explicit loops and Gaussian elimination only, so
//! they share no code path with the library's matrix products or its
//! eigen/SVD backend.
#![allow(dead_code)]

use framerep::{Complex64, ComplexMatrix, ComplexVector, Frame, LinearOperator};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn complex(rng: &mut StdRng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex(rng)).collect();
    ComplexMatrix::new(rows, cols, data).unwrap()
}

pub fn random_vector(rng: &mut StdRng, dim: usize) -> ComplexVector {
    ComplexVector::new((0..dim).map(|_| complex(rng)).collect()).unwrap()
}

pub fn random_operator(rng: &mut StdRng, out_dim: usize, in_dim: usize) -> LinearOperator {
    LinearOperator::new(random_matrix(rng, out_dim, in_dim))
}

pub fn random_hermitian(rng: &mut StdRng, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    a.add(&a.adjoint()).unwrap()
}

/// A random frame of `count ≥ dim` vectors whose `B/A` does not exceed
/// `max_condition`.
pub fn random_frame(rng: &mut StdRng, dim: usize, count: usize, max_condition: f64) -> Frame {
    assert!(count >= dim);
    loop {
        let f = Frame::from_synthesis_matrix(random_matrix(rng, dim, count));
        if f.condition_number() <= max_condition {
            return f;
        }
    }
}

/// A random invertible `n × n` operator with `σ_max/σ_min ≤ max_condition`.
pub fn random_invertible(rng: &mut StdRng, n: usize, max_condition: f64) -> LinearOperator {
    loop {
        let o = random_operator(rng, n, n);
        let sv = framerep::numerics::svd(o.matrix()).singular_values;
        if sv[n - 1] > 0.0 && sv[0] / sv[n - 1] <= max_condition {
            return o;
        }
    }
}

pub fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.sub(b).unwrap().frobenius_norm()
}

pub fn rel_dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    dist(a, b) / b.frobenius_norm().max(f64::MIN_POSITIVE)
}

pub fn vec_dist(a: &ComplexVector, b: &ComplexVector) -> f64 {
    a.sub(b).unwrap().norm()
}

pub fn real(rows: usize, cols: usize, v: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real(rows, cols, v).unwrap()
}

pub fn vecr(v: &[f64]) -> ComplexVector {
    ComplexVector::from_real(v).unwrap()
}

pub fn psi0() -> Frame {
    Frame::from_real_vectors(&[&[1., 0.], &[0., 1.], &[1., 1.]]).unwrap()
}

pub fn mercedes() -> Frame {
    let h = 3f64.sqrt() / 2.0;
    Frame::from_real_vectors(&[&[0., 1.], &[-h, -0.5], &[h, -0.5]]).unwrap()
}

// ---------------------------------------------------------------------------
// Reference computations

/// `⟨a, b⟩ = Σ a_i conj(b_i)`.
pub fn ref_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.len() {
        acc += a[i] * b[i].conj();
    }
    acc
}

pub fn ref_apply(m: &ComplexMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.rows())
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m.cols() {
                acc += m[(i, j)] * v[j];
            }
            acc
        })
        .collect()
}

pub fn ref_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut data = Vec::with_capacity(a.rows() * b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..a.cols() {
                acc += a[(i, k)] * b[(k, j)];
            }
            data.push(acc);
        }
    }
    ComplexMatrix::new(a.rows(), b.cols(), data).unwrap()
}

/// `Σ_k ψ_k ψ_k*` as a sum of outer products.
pub fn ref_frame_operator(frame: &Frame) -> ComplexMatrix {
    let n = frame.space_dim();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for v in frame.vectors() {
        let v = v.as_slice();
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] += v[i] * v[j].conj();
            }
        }
    }
    ComplexMatrix::new(n, n, data).unwrap()
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn ref_solve(a: &ComplexMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut m: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))
            .unwrap();
        m.swap(col, pivot);
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            let factor = row[col] / pivot_row[col];
            for (dst, src) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= factor * src;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n];
        for j in i + 1..n {
            acc -= m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    x
}

pub fn ref_inverse(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let cols: Vec<ComplexVector> = (0..n)
        .map(|k| ComplexVector::new(ref_solve(a, ComplexVector::unit(n, k).as_slice())).unwrap())
        .collect();
    ComplexMatrix::from_columns(&cols).unwrap()
}

/// Canonical dual by solving `S x = ψ_k` with Gaussian elimination.
pub fn ref_dual(frame: &Frame) -> Frame {
    let s = ref_frame_operator(frame);
    Frame::new(
        frame
            .vectors()
            .iter()
            .map(|v| ComplexVector::new(ref_solve(&s, v.as_slice())).unwrap())
            .collect(),
    )
    .unwrap()
}

/// `M_{m,n} = ⟨O ψ_n, φ_m⟩`, entry by entry.
pub fn ref_representation(o: &ComplexMatrix, phi: &Frame, psi: &Frame) -> ComplexMatrix {
    let mut data = Vec::with_capacity(phi.count() * psi.count());
    for m in 0..phi.count() {
        for n in 0..psi.count() {
            let o_psi = ref_apply(o, psi.vector(n).as_slice());
            data.push(ref_inner(&o_psi, phi.vector(m).as_slice()));
        }
    }
    ComplexMatrix::new(phi.count(), psi.count(), data).unwrap()
}

/// `f ↦ Σ_k (Σ_j M_{k,j} ⟨f, ψ_j⟩) φ_k`, materialized column by column.
pub fn ref_induced_operator(m: &ComplexMatrix, phi: &Frame, psi: &Frame) -> ComplexMatrix {
    let n1 = psi.space_dim();
    let cols: Vec<ComplexVector> = (0..n1)
        .map(|col| {
            let e = ComplexVector::unit(n1, col);
            let mut out = vec![Complex64::new(0.0, 0.0); phi.space_dim()];
            for k in 0..phi.count() {
                let mut coef = Complex64::new(0.0, 0.0);
                for j in 0..psi.count() {
                    coef += m[(k, j)] * ref_inner(e.as_slice(), psi.vector(j).as_slice());
                }
                for (o, p) in out.iter_mut().zip(phi.vector(k).as_slice()) {
                    *o += coef * p;
                }
            }
            ComplexVector::new(out).unwrap()
        })
        .collect();
    ComplexMatrix::from_columns(&cols).unwrap()
}

/// Largest singular value by power iteration on `a* a`.
pub fn ref_operator_norm(a: &ComplexMatrix) -> f64 {
    let ata = ref_product(&a.adjoint(), a);
    let mut v: Vec<Complex64> = (0..a.cols())
        .map(|i| Complex64::new(1.0 + i as f64 * 0.37, 0.11 * i as f64))
        .collect();
    let mut lambda = 0.0;
    for _ in 0..2000 {
        let w = ref_apply(&ata, &v);
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        v = w.iter().map(|z| z / norm).collect();
        lambda = norm;
    }
    lambda.sqrt()
}

/// A random frame in `C^dim` with between `dim` and `3·dim` vectors.
pub fn random_frame_in(rng: &mut StdRng, dim: usize, max_condition: f64) -> Frame {
    let count = rng.gen_range(dim..=3 * dim);
    random_frame(rng, dim, count, max_condition)
}

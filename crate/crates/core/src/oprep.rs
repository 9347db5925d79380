//! Matrix representation of operators by frames and the operators induced by
//! matrices.
//!
//! For a frame `Ψ` in `H₁ = C^{n₁}`, a frame `Φ` in `H₂ = C^{n₂}` and an
//! operator `O: H₁ → H₂`,
//!
//! * `M^(Φ,Ψ)(O) = C_Φ·O·D_Ψ`, the `K_Φ × K_Ψ` matrix with entries
//!   `⟨Oψ_n, φ_m⟩` ([`matrix_of_operator`]);
//! * `O^(Φ,Ψ)(M) = D_Φ·M·C_Ψ`, the operator a coefficient matrix induces
//!   ([`operator_of_matrix`]).
//!
//! With canonical duals `Φ̃, Ψ̃` the two maps invert each other:
//! `O^(Φ,Ψ)(M^(Φ̃,Ψ̃)(O)) = O`.

use crate::error::{Error, Result};
use crate::frames::{Frame, RANK_TOL};
use crate::numerics::{
    adjoint, frobenius_norm, matmul, rank, Complex64, ComplexMatrix, ComplexVector,
};

/// Relative deviation of `D_Ξ·C_Ξ'` from the identity accepted when checking
/// that `Ξ'` is a dual of `Ξ` in [`Representation::compose`].
pub const DUAL_PAIR_TOL: f64 = 1e-8;

/// A linear map `C^{n₁} → C^{n₂}` given by its `n₂ × n₁` standard-basis
/// matrix. In finite dimension this matrix is also the operator's kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    matrix: ComplexMatrix,
}

impl LinearOperator {
    pub fn new(matrix: ComplexMatrix) -> Self {
        LinearOperator { matrix }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(ComplexMatrix::identity(n))
    }

    pub fn zero(output_dim: usize, input_dim: usize) -> Self {
        Self::new(ComplexMatrix::zeros(output_dim, input_dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn input_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, f: &ComplexVector) -> Result<ComplexVector> {
        self.matrix.mul_vec(f)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearOperator) -> Result<LinearOperator> {
        Ok(Self::new(matmul(&self.matrix, &inner.matrix)?))
    }

    pub fn adjoint(&self) -> LinearOperator {
        Self::new(adjoint(&self.matrix))
    }

    pub fn operator_norm(&self) -> f64 {
        self.matrix.operator_norm()
    }
}

impl From<ComplexMatrix> for LinearOperator {
    fn from(matrix: ComplexMatrix) -> Self {
        Self::new(matrix)
    }
}

/// `M^(Φ,Ψ)(O)` together with the frames it was built from.
#[derive(Debug, Clone)]
pub struct Representation {
    matrix: ComplexMatrix,
    analysis: Frame,
    synthesis: Frame,
}

impl Representation {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Φ`, the frame of the output space.
    pub fn analysis_frame(&self) -> &Frame {
        &self.analysis
    }

    /// `Ψ`, the frame of the input space.
    pub fn synthesis_frame(&self) -> &Frame {
        &self.synthesis
    }

    /// Product `M^(Φ,Ξ)(O)·M^(Ξ',Ψ)(P) = M^(Φ,Ψ)(O∘P)`.
    ///
    /// The identity requires `Ξ'` to be a dual of `Ξ`, i.e. `D_Ξ·C_Ξ' = Id`;
    /// any other pairing is rejected with [`Error::IncompatibleFrames`].
    pub fn compose(&self, rhs: &Representation) -> Result<Representation> {
        let xi = &self.synthesis;
        let xi_dual = &rhs.analysis;
        self.check_inner_shape(rhs)?;
        let paired = match xi.dual() {
            Ok(d) if d.same_as(xi_dual) => true,
            _ => {
                let n = xi.space_dim();
                let recon = matmul(xi.synthesis_matrix(), &xi_dual.analysis_matrix())?;
                let dev = frobenius_norm(&recon.sub(&ComplexMatrix::identity(n))?);
                dev <= DUAL_PAIR_TOL * (n as f64).sqrt()
            }
        };
        if !paired {
            return Err(Error::IncompatibleFrames(
                "the analysis frame of the right factor is not a dual of the synthesis frame \
                 of the left factor"
                    .into(),
            ));
        }
        self.compose_unchecked(rhs)
    }

    /// Matrix product without the dual-pair check.
    pub fn compose_unchecked(&self, rhs: &Representation) -> Result<Representation> {
        self.check_inner_shape(rhs)?;
        Ok(Representation {
            matrix: matmul(&self.matrix, &rhs.matrix)?,
            analysis: self.analysis.clone(),
            synthesis: rhs.synthesis.clone(),
        })
    }

    fn check_inner_shape(&self, rhs: &Representation) -> Result<()> {
        if self.synthesis.space_dim() != rhs.analysis.space_dim()
            || self.synthesis.count() != rhs.analysis.count()
        {
            return Err(Error::DimensionMismatch(format!(
                "inner frames have shapes {}x{} and {}x{}",
                self.synthesis.space_dim(),
                self.synthesis.count(),
                rhs.analysis.space_dim(),
                rhs.analysis.count()
            )));
        }
        Ok(())
    }
}

fn check_operator_frames(o: &LinearOperator, phi: &Frame, psi: &Frame) -> Result<()> {
    if o.output_dim() != phi.space_dim() || o.input_dim() != psi.space_dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} with output frame in dimension {} and input frame in dimension {}",
            o.output_dim(),
            o.input_dim(),
            phi.space_dim(),
            psi.space_dim()
        )));
    }
    Ok(())
}

fn check_coefficient_matrix(m: &ComplexMatrix, phi: &Frame, psi: &Frame) -> Result<()> {
    if m.rows() != phi.count() || m.cols() != psi.count() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} coefficient matrix for frames of {} and {} vectors",
            m.rows(),
            m.cols(),
            phi.count(),
            psi.count()
        )));
    }
    Ok(())
}

/// `M^(Φ,Ψ)(O) = C_Φ·O·D_Ψ`, entry `(m, n) = ⟨Oψ_n, φ_m⟩`.
pub fn matrix_of_operator(o: &LinearOperator, phi: &Frame, psi: &Frame) -> Result<Representation> {
    check_operator_frames(o, phi, psi)?;
    let o_d = matmul(o.matrix(), psi.synthesis_matrix())?;
    let matrix = matmul(&phi.analysis_matrix(), &o_d)?;
    Ok(Representation {
        matrix,
        analysis: phi.clone(),
        synthesis: psi.clone(),
    })
}

/// `O^(Φ,Ψ)(M) = D_Φ·M·C_Ψ`.
pub fn operator_of_matrix(m: &ComplexMatrix, phi: &Frame, psi: &Frame) -> Result<LinearOperator> {
    check_coefficient_matrix(m, phi, psi)?;
    let m_c = matmul(m, &psi.analysis_matrix())?;
    Ok(LinearOperator::new(matmul(phi.synthesis_matrix(), &m_c)?))
}

/// `O^(Φ,Ψ)(M^(Φ̃,Ψ̃)(O))`, which reproduces `O` for frames `Φ, Ψ`.
pub fn roundtrip_reconstruct(
    o: &LinearOperator,
    phi: &Frame,
    psi: &Frame,
) -> Result<LinearOperator> {
    let rep = matrix_of_operator(o, &phi.dual()?, &psi.dual()?)?;
    operator_of_matrix(rep.matrix(), phi, psi)
}

/// `f ⊗ ḡ: h ↦ ⟨h, g⟩ f`, the matrix `f·g*`.
pub fn rank_one(f: &ComplexVector, g: &ComplexVector) -> LinearOperator {
    let mut data = Vec::with_capacity(f.dim() * g.dim());
    for fi in f.as_slice() {
        for gj in g.as_slice() {
            data.push(fi * gj.conj());
        }
    }
    LinearOperator::new(ComplexMatrix::new(f.dim(), g.dim(), data).expect("finite inputs"))
}

/// Frame multiplier `Σ_k m_k·φ_k ⊗ ψ̄_k = O^(Φ,Ψ)(diag(m))`.
pub fn frame_multiplier(symbol: &[Complex64], phi: &Frame, psi: &Frame) -> Result<LinearOperator> {
    if symbol.len() != phi.count() || symbol.len() != psi.count() {
        return Err(Error::DimensionMismatch(format!(
            "symbol of length {} for frames of {} and {} vectors",
            symbol.len(),
            phi.count(),
            psi.count()
        )));
    }
    operator_of_matrix(&ComplexMatrix::diagonal(symbol), phi, psi)
}

/// Result of [`operator_from_images`].
#[derive(Debug, Clone)]
pub struct ImageOperator {
    /// `V f = Σ_k ⟨f, ψ̃_k⟩ η_k`.
    pub operator: LinearOperator,
    /// Whether `ker D_Ψ ⊆ ker D_η`, i.e. whether some linear map sends every
    /// `ψ_k` to `η_k`. When it does, `V` is that map.
    pub interpolates: bool,
}

/// The operator `V = D_η·C_Ψ̃` defined by prescribing images `η_k` for the
/// frame vectors `ψ_k`.
pub fn operator_from_images(psi: &Frame, images: &[ComplexVector]) -> Result<ImageOperator> {
    if images.len() != psi.count() {
        return Err(Error::DimensionMismatch(format!(
            "{} images for a frame of {} vectors",
            images.len(),
            psi.count()
        )));
    }
    let dual = psi.dual()?;
    let eta = ComplexMatrix::from_columns(images)?;
    let operator = LinearOperator::new(matmul(&eta, &dual.analysis_matrix())?);
    let interpolates = kernel_contained(psi.synthesis_matrix(), &eta);
    Ok(ImageOperator {
        operator,
        interpolates,
    })
}

/// `ker a ⊆ ker b` for matrices with equal column counts, decided by
/// comparing `rank a` with the rank of `a` stacked over `b`.
fn kernel_contained(a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
    let b_norm = b.operator_norm();
    if b_norm == 0.0 {
        return true;
    }
    let a_norm = a.operator_norm();
    let a = a.scale(Complex64::from(1.0 / a_norm));
    let b = b.scale(Complex64::from(1.0 / b_norm));
    let cols = a.cols();
    let mut stacked = a.as_slice().to_vec();
    stacked.extend_from_slice(b.as_slice());
    let stacked = ComplexMatrix::new(a.rows() + b.rows(), cols, stacked).expect("finite");
    rank(&stacked, RANK_TOL) == rank(&a, RANK_TOL)
}

/// Both sides of the range mapping identity
/// `M^(Φ,Ψ̃)(O)·C_Ψ f = C_Φ·O f`.
#[derive(Debug, Clone)]
pub struct RangeCheck {
    pub lhs: ComplexVector,
    pub rhs: ComplexVector,
}

impl RangeCheck {
    /// `‖lhs − rhs‖ / (1 + ‖rhs‖)`.
    pub fn discrepancy(&self) -> f64 {
        let diff = self.lhs.sub(&self.rhs).expect("equal lengths");
        diff.norm() / (1.0 + self.rhs.norm())
    }
}

pub fn range_map_check(
    o: &LinearOperator,
    phi: &Frame,
    psi: &Frame,
    f: &ComplexVector,
) -> Result<RangeCheck> {
    check_operator_frames(o, phi, psi)?;
    let rep = matrix_of_operator(o, phi, &psi.dual()?)?;
    let lhs = rep.matrix().mul_vec(&psi.analysis(f)?)?;
    let rhs = phi.analysis(&o.apply(f)?)?;
    Ok(RangeCheck { lhs, rhs })
}

/// Hilbert–Schmidt norm, the Frobenius norm of the standard-basis matrix.
pub fn hs_norm(o: &LinearOperator) -> f64 {
    frobenius_norm(o.matrix())
}

/// `κ = Σ_{j,k} M_{k,j}·φ_k ψ_j*`, the kernel of the operator induced by `M`,
/// accumulated term by term.
pub fn kernel_of_representation(
    m: &ComplexMatrix,
    phi: &Frame,
    psi: &Frame,
) -> Result<ComplexMatrix> {
    check_coefficient_matrix(m, phi, psi)?;
    let rows = phi.space_dim();
    let cols = psi.space_dim();
    let mut kernel = vec![Complex64::new(0.0, 0.0); rows * cols];
    for k in 0..phi.count() {
        let phi_k = phi.vector(k).as_slice();
        for j in 0..psi.count() {
            let coef = m[(k, j)];
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            let psi_j = psi.vector(j).as_slice();
            for (x, &a) in phi_k.iter().enumerate() {
                let ca = coef * a;
                for (y, &b) in psi_j.iter().enumerate() {
                    kernel[x * cols + y] += ca * b.conj();
                }
            }
        }
    }
    ComplexMatrix::new(rows, cols, kernel)
}

//! Finite frames in `C^n`.
//!
//! A [`Frame`] is an ordered family `ψ_0, …, ψ_{K-1}` of vectors in `C^n`.
//! Its analysis operator is `C f = (⟨f, ψ_k⟩)_k`, its synthesis operator is
//! `D c = Σ c_k ψ_k = C* c`, and its frame operator is `S = DD* = C*C`.
//! The optimal frame bounds are the extreme eigenvalues of `S`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    adjoint, frobenius_norm, hermitian_eigs, matmul, ComplexMatrix, ComplexVector, HermitianEigen,
};

/// Lower bound relative to the upper bound at or below which a family is
/// treated as not spanning.
pub const RANK_TOL: f64 = 1e-10;

/// Relative tolerance for tightness, Parseval, orthonormality and
/// biorthogonality decisions.
pub const TIGHT_TOL: f64 = 1e-9;

/// Largest `B/A` for which reconstruction identities are promised to `1e-9`.
pub const CONDITION_LIMIT: f64 = 1e6;

/// Optimal frame bounds `A ≤ B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameBounds {
    #[serde(rename = "A")]
    pub lower: f64,
    #[serde(rename = "B")]
    pub upper: f64,
}

impl FrameBounds {
    /// `B/A`, infinite when the family does not span.
    pub fn condition(&self) -> f64 {
        if self.lower > 0.0 {
            self.upper / self.lower
        } else {
            f64::INFINITY
        }
    }

    fn spans(&self) -> bool {
        self.upper > 0.0 && self.lower > RANK_TOL * self.upper
    }
}

/// The strongest structural class a finite family belongs to.
///
/// Every finite family is a Bessel sequence; the classes are ordered so that
/// an orthonormal basis reports `OrthonormalBasis`, a non-orthonormal basis
/// `RieszBasis`, and redundant frames `ParsevalFrame`, `TightFrame` or
/// `Frame`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FrameClass {
    BesselOnly,
    Frame,
    TightFrame,
    ParsevalFrame,
    RieszBasis,
    OrthonormalBasis,
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All classification predicates, not only the strongest class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrameProperties {
    pub frame: bool,
    pub tight: bool,
    pub parseval: bool,
    pub riesz_basis: bool,
    pub orthonormal_basis: bool,
}

struct Spectral {
    operator: ComplexMatrix,
    eigen: HermitianEigen,
    bounds: FrameBounds,
}

struct FrameData {
    vectors: Vec<ComplexVector>,
    /// `n × K`, columns are the frame vectors.
    synthesis: ComplexMatrix,
    spectral: OnceLock<Spectral>,
    dual: OnceLock<Frame>,
}

/// An immutable finite frame. Cloning is cheap and shares the lazily computed
/// frame operator, bounds and canonical dual.
#[derive(Clone)]
pub struct Frame {
    inner: Arc<FrameData>,
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("space_dim", &self.space_dim())
            .field("count", &self.count())
            .field("vectors", &self.inner.vectors)
            .finish()
    }
}

impl Frame {
    pub fn new(vectors: Vec<ComplexVector>) -> Result<Self> {
        let synthesis = ComplexMatrix::from_columns(&vectors)?;
        Ok(Self::build(vectors, synthesis))
    }

    /// Frame whose vectors are the columns of `synthesis` (`n × K`).
    pub fn from_synthesis_matrix(synthesis: ComplexMatrix) -> Self {
        let vectors = (0..synthesis.cols()).map(|k| synthesis.column(k)).collect();
        Self::build(vectors, synthesis)
    }

    /// Frame whose vectors are the given real rows.
    pub fn from_real_vectors(vectors: &[&[f64]]) -> Result<Self> {
        Self::new(
            vectors
                .iter()
                .map(|v| ComplexVector::from_real(v))
                .collect::<Result<_>>()?,
        )
    }

    /// The standard orthonormal basis of `C^n`.
    pub fn standard_basis(n: usize) -> Self {
        Self::from_synthesis_matrix(ComplexMatrix::identity(n))
    }

    fn build(vectors: Vec<ComplexVector>, synthesis: ComplexMatrix) -> Self {
        Frame {
            inner: Arc::new(FrameData {
                vectors,
                synthesis,
                spectral: OnceLock::new(),
                dual: OnceLock::new(),
            }),
        }
    }

    pub fn space_dim(&self) -> usize {
        self.inner.synthesis.rows()
    }

    pub fn count(&self) -> usize {
        self.inner.synthesis.cols()
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.inner.vectors
    }

    pub fn vector(&self, k: usize) -> &ComplexVector {
        &self.inner.vectors[k]
    }

    /// Whether both handles refer to the same frame object.
    pub fn same_as(&self, other: &Frame) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// `D`, the `n × K` matrix with the frame vectors as columns.
    pub fn synthesis_matrix(&self) -> &ComplexMatrix {
        &self.inner.synthesis
    }

    /// `C = D*`, the `K × n` matrix with rows `ψ_k*`.
    pub fn analysis_matrix(&self) -> ComplexMatrix {
        adjoint(&self.inner.synthesis)
    }

    fn spectral(&self) -> &Spectral {
        self.inner.spectral.get_or_init(|| {
            let d = &self.inner.synthesis;
            let operator = matmul(d, &adjoint(d)).expect("D·D* is always defined");
            let eigen = hermitian_eigs(&operator).expect("D·D* is Hermitian");
            let n = eigen.values.len();
            let upper = eigen.values[n - 1].max(0.0);
            let lower = eigen.values[0].clamp(0.0, upper);
            Spectral {
                operator,
                eigen,
                bounds: FrameBounds { lower, upper },
            }
        })
    }

    /// `S = Σ_k ψ_k ψ_k*`.
    pub fn frame_operator(&self) -> &ComplexMatrix {
        &self.spectral().operator
    }

    /// Eigendecomposition of the frame operator.
    pub fn frame_operator_eigen(&self) -> &HermitianEigen {
        &self.spectral().eigen
    }

    pub fn bounds(&self) -> FrameBounds {
        self.spectral().bounds
    }

    pub fn condition_number(&self) -> f64 {
        self.bounds().condition()
    }

    /// Whether `B/A` is within [`CONDITION_LIMIT`].
    pub fn is_well_conditioned(&self) -> bool {
        self.condition_number() <= CONDITION_LIMIT
    }

    pub fn is_frame(&self) -> bool {
        self.bounds().spans()
    }

    pub(crate) fn require_frame(&self) -> Result<()> {
        let b = self.bounds();
        if b.spans() {
            Ok(())
        } else {
            Err(Error::NotAFrame {
                lower: b.lower,
                upper: b.upper,
                threshold: RANK_TOL * b.upper,
            })
        }
    }

    /// The canonical dual `(S⁻¹ψ_k)_k`, computed once and cached.
    pub fn dual(&self) -> Result<Frame> {
        if let Some(d) = self.inner.dual.get() {
            return Ok(d.clone());
        }
        self.require_frame()?;
        let sp = self.spectral();
        let floor = RANK_TOL * sp.bounds.upper;
        let duals = self
            .inner
            .vectors
            .iter()
            .map(|v| sp.eigen.solve(v, floor))
            .collect::<Result<Vec<_>>>()?;
        let dual = Frame::new(duals)?;
        Ok(self.inner.dual.get_or_init(|| dual).clone())
    }

    pub fn properties(&self) -> FrameProperties {
        let b = self.bounds();
        let frame = b.spans();
        let tight = frame && (b.upper - b.lower) / b.upper <= TIGHT_TOL;
        let parseval = tight && (b.upper - 1.0).abs() <= TIGHT_TOL;
        let riesz_basis = frame && self.count() == self.space_dim();
        let orthonormal_basis = riesz_basis && {
            let k = self.count();
            let g = gram(self, self).expect("same frame");
            let dev = g.sub(&ComplexMatrix::identity(k)).expect("K×K");
            frobenius_norm(&dev) <= TIGHT_TOL * (k as f64).sqrt()
        };
        FrameProperties {
            frame,
            tight,
            parseval,
            riesz_basis,
            orthonormal_basis,
        }
    }

    pub fn classify(&self) -> FrameClass {
        let p = self.properties();
        if !p.frame {
            FrameClass::BesselOnly
        } else if p.orthonormal_basis {
            FrameClass::OrthonormalBasis
        } else if p.riesz_basis {
            FrameClass::RieszBasis
        } else if p.parseval {
            FrameClass::ParsevalFrame
        } else if p.tight {
            FrameClass::TightFrame
        } else {
            FrameClass::Frame
        }
    }

    /// `C f = (⟨f, ψ_k⟩)_k`.
    pub fn analysis(&self, f: &ComplexVector) -> Result<ComplexVector> {
        if f.dim() != self.space_dim() {
            return Err(Error::DimensionMismatch(format!(
                "analysis of a vector of length {} by a frame in dimension {}",
                f.dim(),
                self.space_dim()
            )));
        }
        self.analysis_matrix().mul_vec(f)
    }

    /// `D c = Σ_k c_k ψ_k`.
    pub fn synthesis(&self, c: &ComplexVector) -> Result<ComplexVector> {
        if c.dim() != self.count() {
            return Err(Error::DimensionMismatch(format!(
                "synthesis from {} coefficients by a frame of {} vectors",
                c.dim(),
                self.count()
            )));
        }
        self.inner.synthesis.mul_vec(c)
    }
}

pub fn frame_operator(frame: &Frame) -> ComplexMatrix {
    frame.frame_operator().clone()
}

pub fn frame_bounds(frame: &Frame) -> FrameBounds {
    frame.bounds()
}

pub fn canonical_dual(frame: &Frame) -> Result<Frame> {
    frame.dual()
}

pub fn analysis(frame: &Frame, f: &ComplexVector) -> Result<ComplexVector> {
    frame.analysis(f)
}

pub fn synthesis(frame: &Frame, c: &ComplexVector) -> Result<ComplexVector> {
    frame.synthesis(c)
}

pub fn classify(frame: &Frame) -> FrameClass {
    frame.classify()
}

/// Gram matrix `G_{Ψ,Φ} = C_Ψ·D_Φ` with entry `(j, m) = ⟨φ_m, ψ_j⟩`.
pub fn gram(psi: &Frame, phi: &Frame) -> Result<ComplexMatrix> {
    if psi.space_dim() != phi.space_dim() {
        return Err(Error::DimensionMismatch(format!(
            "Gram matrix of frames in dimensions {} and {}",
            psi.space_dim(),
            phi.space_dim()
        )));
    }
    matmul(&psi.analysis_matrix(), phi.synthesis_matrix())
}

/// Whether `⟨ψ_k, φ_j⟩ = δ_kj`, up to [`TIGHT_TOL`].
pub fn biorthogonal(psi: &Frame, phi: &Frame) -> Result<bool> {
    if psi.count() != phi.count() {
        return Err(Error::DimensionMismatch(format!(
            "biorthogonality of families with {} and {} vectors",
            psi.count(),
            phi.count()
        )));
    }
    let k = psi.count();
    let dev = gram(phi, psi)?.sub(&ComplexMatrix::identity(k))?;
    Ok(frobenius_norm(&dev) <= TIGHT_TOL * (k as f64).sqrt())
}

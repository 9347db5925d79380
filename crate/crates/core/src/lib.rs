//! Frames on `C^n` and the frame-based correspondence between operators and
//! coefficient matrices.
//!
//! * [`numerics`]: dense complex matrices, Hermitian eigendecomposition, SVD,
//!   pseudoinverse and norms.
//! * [`frames`]: frame, analysis, synthesis and frame operators, bounds,
//!   classification, canonical duals and Gram matrices.
//! * [`oprep`]: the representation `C_Φ·O·D_Ψ` of an operator, the operator
//!   `D_Φ·M·C_Ψ` induced by a matrix, kernels and frame multipliers.
//! * [`solveq`]: solving operator equations in frame coordinates.
//! * [`formats`]: JSON and CSV interchange.
//! * [`cli`]: the `framerep` command line.

pub mod cli;
pub mod error;
pub mod formats;
pub mod frames;
pub mod numerics;
pub mod oprep;
pub mod solveq;

pub use error::{Error, Result};
pub use frames::{Frame, FrameBounds, FrameClass};
pub use numerics::{Complex64, ComplexMatrix, ComplexVector};
pub use oprep::{LinearOperator, Representation};
pub use solveq::{SolveOptions, SolveReport};

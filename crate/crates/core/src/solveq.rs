//! Solving `O f = g` in frame coordinates.
//!
//! With `M = M^(Φ,Φ̃)(O)` and `d = C_Φ g` the equation is equivalent to
//! `M·C_Φ f = d`. The solver forms `M` and `d`, optionally projects `d` onto
//! `ran C_Φ`, truncates to the leading `N × N` section, solves in the least
//! squares sense with the pseudoinverse, pads the coefficients back to length
//! `K` and synthesizes `f̂ = D_Φ̃ c`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{gram, Frame};
use crate::numerics::{default_rel_tol, pseudoinverse, Complex64, ComplexMatrix, ComplexVector};
use crate::oprep::{matrix_of_operator, LinearOperator};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Leading section size `N ≤ K`; the full system when `None`.
    pub section_size: Option<usize>,
    /// Relative singular value cutoff; `max(N, N)·ε` when `None`.
    pub pseudoinverse_rel_tol: Option<f64>,
    pub project_rhs: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            section_size: None,
            pseudoinverse_rel_tol: None,
            project_rhs: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(serialize_with = "crate::formats::serialize_vector_object")]
    pub solution: ComplexVector,
    #[serde(serialize_with = "crate::formats::serialize_vector_object")]
    pub coefficients: ComplexVector,
    /// `‖O f̂ − g‖ / (1 + ‖g‖)`.
    pub residual_operator: f64,
    /// `‖M c − d‖ / (1 + ‖d‖)` on the full, untruncated system.
    pub residual_matrix: f64,
    pub section_used: usize,
    /// Set when the frame's `B/A` exceeds the well-conditioned range.
    pub conditioning_warning: bool,
}

/// `M = M^(Φ,Φ̃)(O)` and the frame that maps right-hand sides to `d = C_Φ g`.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub matrix: ComplexMatrix,
    frame: Frame,
}

impl Discretization {
    /// `d = C_Φ g`.
    pub fn rhs(&self, g: &ComplexVector) -> Result<ComplexVector> {
        self.frame.analysis(g)
    }
}

pub fn discretize(o: &LinearOperator, phi: &Frame) -> Result<Discretization> {
    let rep = matrix_of_operator(o, phi, &phi.dual()?)?;
    Ok(Discretization {
        matrix: rep.into_matrix(),
        frame: phi.clone(),
    })
}

/// Orthogonal projection `G_{Φ,Φ̃}·c = C_Φ D_Φ̃ c` onto `ran C_Φ`.
pub fn project_onto_analysis_range(phi: &Frame, c: &ComplexVector) -> Result<ComplexVector> {
    if c.dim() != phi.count() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for a frame of {} vectors",
            c.dim(),
            phi.count()
        )));
    }
    gram(phi, &phi.dual()?)?.mul_vec(c)
}

/// Leading `n × n` block of `m`, entries copied unchanged.
pub fn finite_section(m: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    let available = m.rows().min(m.cols());
    if n > available {
        return Err(Error::SectionTooLarge {
            requested: n,
            available,
        });
    }
    if n == 0 {
        return Err(Error::Empty("section of size 0".into()));
    }
    let data = (0..n).flat_map(|i| m.row(i)[..n].iter().copied()).collect();
    ComplexMatrix::new(n, n, data)
}

fn relative_residual(diff: &ComplexVector, reference: &ComplexVector) -> f64 {
    diff.norm() / (1.0 + reference.norm())
}

pub fn solve(
    o: &LinearOperator,
    g: &ComplexVector,
    phi: &Frame,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let n = phi.space_dim();
    if o.input_dim() != n || o.output_dim() != n || g.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} and right-hand side of length {} for a frame in dimension {n}",
            o.output_dim(),
            o.input_dim(),
            g.dim()
        )));
    }
    let k = phi.count();
    let section = opts.section_size.unwrap_or(k);

    let disc = discretize(o, phi)?;
    let mut d = disc.rhs(g)?;
    if opts.project_rhs {
        d = project_onto_analysis_range(phi, &d)?;
    }

    let m_n = finite_section(&disc.matrix, section)?;
    let d_n = ComplexVector::new(d.as_slice()[..section].to_vec())?;
    let rel_tol = opts
        .pseudoinverse_rel_tol
        .unwrap_or_else(|| default_rel_tol(section, section));
    let c_n = pseudoinverse(&m_n, rel_tol).mul_vec(&d_n)?;

    let mut c = c_n.into_vec();
    c.resize(k, Complex64::new(0.0, 0.0));
    let coefficients = ComplexVector::new(c)?;

    let solution = phi.dual()?.synthesis(&coefficients)?;
    let residual_operator = relative_residual(&o.apply(&solution)?.sub(g)?, g);
    let residual_matrix = relative_residual(&disc.matrix.mul_vec(&coefficients)?.sub(&d)?, &d);

    Ok(SolveReport {
        solution,
        coefficients,
        residual_operator,
        residual_matrix,
        section_used: section,
        conditioning_warning: !phi.is_well_conditioned(),
    })
}

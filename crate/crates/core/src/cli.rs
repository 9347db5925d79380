//! The `framerep` command line.
//!
//! Exit codes: `0` success, `2` usage or unreadable/malformed input, `3` a
//! numerical precondition failed (not a frame, inconsistent dimensions, ...).
//! Results go to stdout (or `--output`), diagnostics to stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::formats::{self, serialize_matrix_object};
use crate::frames::{gram, Frame, FrameBounds, FrameClass, FrameProperties};
use crate::numerics::{frobenius_norm, ComplexMatrix, ComplexVector};
use crate::oprep::{
    frame_multiplier, kernel_of_representation, matrix_of_operator, operator_of_matrix,
    roundtrip_reconstruct, LinearOperator,
};
use crate::solveq::{solve, SolveOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "framerep",
    version,
    about = "Frames, Gram matrices and frame representations of operators on C^n"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Write the result to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Relative singular value cutoff for pseudoinverses.
    #[arg(long, global = true, env = "FRAMEREP_TOL", value_name = "REL")]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct FramePair {
    /// Frame of the output space (Φ).
    #[arg(long, value_name = "FILE")]
    frame: PathBuf,

    /// Frame of the input space (Ψ); defaults to --frame.
    #[arg(long, value_name = "FILE")]
    frame2: Option<PathBuf>,

    /// Use the canonical dual of --frame.
    #[arg(long)]
    dual: bool,

    /// Use the canonical dual of the second frame.
    #[arg(long)]
    dual2: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal frame bounds A and B.
    Bounds {
        #[arg(long, value_name = "FILE")]
        frame: PathBuf,
    },
    /// Structural class of a family of vectors.
    Classify {
        #[arg(long, value_name = "FILE")]
        frame: PathBuf,
    },
    /// Canonical dual frame.
    Dual {
        #[arg(long, value_name = "FILE")]
        frame: PathBuf,
    },
    /// Gram matrix with entries <φ_m, ψ_j>, rows from --frame.
    Gram(FramePair),
    /// Matrix representation C_Φ·O·D_Ψ of an operator.
    Represent {
        #[arg(long, value_name = "FILE")]
        op: PathBuf,
        #[command(flatten)]
        frames: FramePair,
    },
    /// Operator D_Φ·M·C_Ψ induced by a coefficient matrix, optionally applied to a vector.
    Apply {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        #[command(flatten)]
        frames: FramePair,
        #[arg(long, value_name = "FILE")]
        vector: Option<PathBuf>,
    },
    /// Reconstruct an operator from its representation in the dual frames.
    Roundtrip {
        #[arg(long, value_name = "FILE")]
        op: PathBuf,
        #[arg(long, value_name = "FILE")]
        frame: PathBuf,
        #[arg(long, value_name = "FILE")]
        frame2: Option<PathBuf>,
    },
    /// Frame multiplier Σ m_k φ_k ⊗ ψ_k.
    Multiplier {
        #[arg(long, value_name = "FILE")]
        symbol: PathBuf,
        #[command(flatten)]
        frames: FramePair,
    },
    /// Solve O f = g by frame discretization and least squares.
    Solve {
        #[arg(long, value_name = "FILE")]
        op: PathBuf,
        #[arg(long, value_name = "FILE")]
        rhs: PathBuf,
        #[arg(long, value_name = "FILE")]
        frame: PathBuf,
        /// Leading section size N.
        #[arg(long, value_name = "N")]
        section: Option<usize>,
        /// Do not project the right-hand side onto the analysis range.
        #[arg(long)]
        no_project: bool,
    },
    /// Kernel Σ M_kj φ_k ψ_j* of the operator induced by a coefficient matrix.
    Kernel {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        #[command(flatten)]
        frames: FramePair,
    },
}

#[derive(Debug)]
enum CliError {
    Input { path: PathBuf, source: InputError },
    Numerical(Error),
    Output(std::io::Error),
}

#[derive(Debug)]
enum InputError {
    Io(std::io::Error),
    Format(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input { path, source } => match source {
                InputError::Io(e) => write!(f, "cannot read {}: {e}", path.display()),
                InputError::Format(e) => write!(f, "invalid input {}: {e}", path.display()),
            },
            CliError::Numerical(e) => write!(f, "precondition failed: {e}"),
            CliError::Output(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numerical(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => EXIT_PRECONDITION,
            CliError::Input { .. } | CliError::Output(_) => EXIT_USAGE,
        }
    }
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> crate::Result<T>) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.to_owned(),
        source: InputError::Io(e),
    })?;
    parse(&text).map_err(|e| CliError::Input {
        path: path.to_owned(),
        source: InputError::Format(e),
    })
}

fn load_frame(path: &Path, dual: bool) -> Result<Frame, CliError> {
    let frame = load(path, formats::parse_frame)?;
    Ok(if dual { frame.dual()? } else { frame })
}

impl FramePair {
    fn load(&self) -> Result<(Frame, Frame), CliError> {
        let phi = load_frame(&self.frame, self.dual)?;
        let psi = match &self.frame2 {
            Some(p) => load_frame(p, self.dual2)?,
            None if self.dual2 => phi.dual()?,
            None => phi.clone(),
        };
        Ok((phi, psi))
    }
}

fn matrix_text(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|z| format!("{z}")).collect();
        let _ = writeln!(out, "{}", row.join("  "));
    }
    out
}

fn vector_text(v: &ComplexVector) -> String {
    let parts: Vec<String> = v.as_slice().iter().map(|z| format!("{z}")).collect();
    format!("{}\n", parts.join("  "))
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn matrix_output(m: &ComplexMatrix, json: bool) -> String {
    if json {
        formats::serialize_matrix(m)
    } else {
        matrix_text(m)
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    class: FrameClass,
    #[serde(rename = "A")]
    lower: f64,
    #[serde(rename = "B")]
    upper: f64,
    properties: FrameProperties,
}

#[derive(Serialize)]
struct RoundtripOutput {
    #[serde(serialize_with = "serialize_matrix_object")]
    operator: ComplexMatrix,
    relative_error: f64,
    conditioning_warning: bool,
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    let json = cli.json;
    let out = match &cli.command {
        Command::Bounds { frame } => {
            let b: FrameBounds = load_frame(frame, false)?.bounds();
            if json {
                json_line(&b)
            } else {
                format!("A = {}\nB = {}\n", b.lower, b.upper)
            }
        }
        Command::Classify { frame } => {
            let f = load_frame(frame, false)?;
            let b = f.bounds();
            let out = ClassifyOutput {
                class: f.classify(),
                lower: b.lower,
                upper: b.upper,
                properties: f.properties(),
            };
            if json {
                json_line(&out)
            } else {
                format!("{}\nA = {}\nB = {}\n", out.class, b.lower, b.upper)
            }
        }
        Command::Dual { frame } => {
            let d = load_frame(frame, false)?.dual()?;
            if json {
                formats::serialize_frame(&d)
            } else {
                d.vectors().iter().map(vector_text).collect()
            }
        }
        Command::Gram(pair) => {
            let (phi, psi) = pair.load()?;
            matrix_output(&gram(&phi, &psi)?, json)
        }
        Command::Represent { op, frames } => {
            let o = LinearOperator::new(load(op, formats::parse_matrix)?);
            let (phi, psi) = frames.load()?;
            matrix_output(matrix_of_operator(&o, &phi, &psi)?.matrix(), json)
        }
        Command::Apply {
            matrix,
            frames,
            vector,
        } => {
            let m = load(matrix, formats::parse_matrix)?;
            let (phi, psi) = frames.load()?;
            let o = operator_of_matrix(&m, &phi, &psi)?;
            match vector {
                Some(path) => {
                    let v = o.apply(&load(path, formats::parse_vector)?)?;
                    if json {
                        formats::serialize_vector(&v)
                    } else {
                        vector_text(&v)
                    }
                }
                None => matrix_output(o.matrix(), json),
            }
        }
        Command::Roundtrip { op, frame, frame2 } => {
            let o = LinearOperator::new(load(op, formats::parse_matrix)?);
            let phi = load_frame(frame, false)?;
            let psi = match frame2 {
                Some(p) => load_frame(p, false)?,
                None => phi.clone(),
            };
            let r = roundtrip_reconstruct(&o, &phi, &psi)?;
            let scale = frobenius_norm(o.matrix());
            let err = frobenius_norm(&r.matrix().sub(o.matrix())?);
            let out = RoundtripOutput {
                relative_error: if scale > 0.0 { err / scale } else { err },
                conditioning_warning: !(phi.is_well_conditioned() && psi.is_well_conditioned()),
                operator: r.into_matrix(),
            };
            if json {
                json_line(&out)
            } else {
                format!(
                    "{}relative error = {:e}\n",
                    matrix_text(&out.operator),
                    out.relative_error
                )
            }
        }
        Command::Multiplier { symbol, frames } => {
            let m = load(symbol, formats::parse_vector)?;
            let (phi, psi) = frames.load()?;
            matrix_output(frame_multiplier(m.as_slice(), &phi, &psi)?.matrix(), json)
        }
        Command::Solve {
            op,
            rhs,
            frame,
            section,
            no_project,
        } => {
            let o = LinearOperator::new(load(op, formats::parse_matrix)?);
            let g = load(rhs, formats::parse_vector)?;
            let phi = load_frame(frame, false)?;
            let opts = SolveOptions {
                section_size: *section,
                pseudoinverse_rel_tol: cli.tol,
                project_rhs: !no_project,
            };
            let report = solve(&o, &g, &phi, &opts)?;
            if json {
                json_line(&report)
            } else {
                format!(
                    "solution = {}residual (operator) = {:e}\nresidual (matrix) = {:e}\nsection = {}\n{}",
                    vector_text(&report.solution),
                    report.residual_operator,
                    report.residual_matrix,
                    report.section_used,
                    if report.conditioning_warning {
                        "warning: frame is poorly conditioned (B/A > 1e6)\n"
                    } else {
                        ""
                    }
                )
            }
        }
        Command::Kernel { matrix, frames } => {
            let m = load(matrix, formats::parse_matrix)?;
            let (phi, psi) = frames.load()?;
            matrix_output(&kernel_of_representation(&m, &phi, &psi)?, json)
        }
    };
    Ok(out)
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            let _ = writeln!(
                stderr,
                "error: --tol must be a nonnegative number, got {tol}"
            );
            return EXIT_USAGE;
        }
    }
    let result = execute(&cli).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(CliError::Output),
        None => stdout.write_all(text.as_bytes()).map_err(CliError::Output),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

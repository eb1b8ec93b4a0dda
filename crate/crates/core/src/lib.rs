//! Titchmarsh-Weyl M-matrices of fourth-order Sturm-Liouville problems:
//! pointwise evaluation, Laurent expansions around real poles, and
//! HELP-inequality verdicts via the residue rank criterion.
//!
//! The pipeline, bottom to top:
//!
//! * [`expr`] parses the coefficient formulas of a problem;
//! * [`problem`] validates a problem and assembles the Hamiltonian
//!   blocks of the fourth-order equation;
//! * [`odeint`] integrates matrix ODEs with an adaptive embedded
//!   Runge-Kutta pair;
//! * [`riccati`] computes the pole-free transform
//!   `Psi = (alpha*I + M^-1)^-1` of a Weyl-type matrix `M` and maps it
//!   back to `M`;
//! * [`vandermonde`] solves the small dual Vandermonde systems of the
//!   fitting stage;
//! * [`taylor`] recovers Taylor coefficients of `Psi` around a real
//!   point from samples along a ray, with adaptive order and step;
//! * [`laurent`] converts the Taylor coefficients of `Psi` into the
//!   Laurent expansion of `M` about a simple real pole;
//! * [`spectral`] locates poles, builds residue reports, decides the
//!   HELP rank criterion and scans sectors for the positivity the
//!   inequality theory predicts;
//! * [`fixtures`] ships three ready-made example problems.

pub mod error;
pub mod expr;
pub mod fixtures;
pub mod laurent;
pub mod mat2;
pub mod odeint;
pub mod problem;
pub mod riccati;
pub mod spectral;
pub mod taylor;
pub mod vandermonde;

pub use error::{Error, Result};
pub use mat2::Mat2;
pub use odeint::IntegratorSettings;
pub use problem::{CoefficientSet, Problem, SBlocks};
pub use riccati::{PsiTarget, PsiValue};

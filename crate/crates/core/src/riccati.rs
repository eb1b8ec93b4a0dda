//! The Psi transform: a pole-free path to Titchmarsh-Weyl matrices.
//!
//! Shooting for the M-matrix directly is hopeless near its poles, so the
//! computation goes through the auxiliary matrix
//!
//! ```text
//! Psi = (alpha*I + M^-1)^-1
//! ```
//!
//! which stays bounded where M blows up. Let `Z = [U; V]` be the 4x2
//! solution of the Hamiltonian system with `U(X) = 0`, `V(X) = I`. Three
//! closely related matrices of Weyl type are of interest, and each has a
//! Riccati flow for its own Psi:
//!
//! * the Neumann matrix `M_N = -U V^-1 (0)`,
//! * the Dirichlet matrix `M_D = -M_N^-1 = V U^-1 (0)`,
//! * the generic matrix `M = M_N^-1 = -M_D`, the raw output of the
//!   transform below.
//!
//! The signs are oriented so that all three are Nevanlinna functions:
//! `Im(M)` is positive definite for `Im(lambda) > 0`, and residues at
//! real poles are negative semidefinite. (In the scalar second-order
//! analogue `M_D = psi'(0)/psi(0)` and `M_N = -psi(0)/psi'(0)` for the
//! decaying solution `psi`, the classical Titchmarsh-Weyl pair.)
//!
//! For each target, `Gamma(x)` obeys the Riccati flow
//!
//! ```text
//! Gamma' = -{ Gamma b21 (I - alpha*Gamma) + (I - alpha*Gamma) b12 Gamma
//!           + (I - alpha*Gamma) b11 (I - alpha*Gamma) + Gamma b22 Gamma }
//! ```
//!
//! integrated from `X` down to `0`, with blocks `(b11, b12, b21, b22)`
//! and start value chosen per target; then `Psi = Gamma(0)`:
//!
//! * generic: `Gamma = (alpha*I - U V^-1)^-1`, blocks
//!   `(-S11, S12, S21, -S22)`, start `alpha^-1 I`;
//! * Dirichlet: `Gamma = (alpha*I + U V^-1)^-1`, blocks
//!   `(S11, S12, S21, S22)`, start `alpha^-1 I`;
//! * Neumann: `Gamma = U (alpha*U - V)^-1`, blocks
//!   `(S22, -S21, -S12, S11)`, start `0`.
//!
//! Each identity follows from differentiating its closed form and using
//! the linear system for `[U; V]`.
//!
//! For real `lambda` the matrix `U V^-1` is real symmetric, so taking
//! `Im(alpha) != 0` keeps the flow regular; for `Im(lambda) != 0` the
//! Weyl-type matrices have definite imaginary part, which protects a
//! real `alpha`. One of the two conditions is required.
//!
//! The inverse transform is rational: with `den = 1 - alpha*tr(Psi) +
//! alpha^2*det(Psi)`,
//!
//! ```text
//! M = (Psi - alpha*det(Psi)*I) / den
//! ```
//!
//! and `den -> 0` exactly at the poles of M, so the transform refuses to
//! evaluate when `|den|` is at roundoff scale.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::odeint::{integrate, IntegratorSettings};
use crate::problem::{Problem, SBlocks};

/// Which Weyl-type matrix the Psi flow targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiTarget {
    /// `M = M_N^-1 = -M_D`, the raw transform output.
    GenericM,
    /// `M_D`, whose poles are the Dirichlet eigenvalues.
    DirichletM,
    /// `M_N`, whose poles are the Neumann eigenvalues.
    NeumannM,
}

/// A computed Psi sample with its provenance.
#[derive(Clone, Debug)]
pub struct PsiValue {
    pub lambda: Complex64,
    pub alpha: Complex64,
    pub psi: Mat2,
    /// Label of the problem the sample belongs to.
    pub label: String,
    /// `||Psi - Psi^T||`; the exact flow preserves symmetry.
    pub symmetry_defect: f64,
    /// Set when the defect exceeds `1e4 * rel_tol`, which signals an
    /// untrustworthy integration rather than ordinary roundoff.
    pub symmetry_warning: bool,
}

/// Right-hand side of the Riccati flow for `Gamma`.
pub fn gamma_rhs(blocks: &SBlocks, gamma: &Mat2, alpha: Complex64) -> Mat2 {
    let g = *gamma;
    let j = Mat2::identity() - alpha * g;
    -(g * blocks.s21 * j + j * blocks.s12 * g + j * blocks.s11 * j + g * blocks.s22 * g)
}

fn transformed_blocks(target: PsiTarget, s: &SBlocks) -> SBlocks {
    match target {
        PsiTarget::GenericM => SBlocks {
            s11: -s.s11,
            s12: s.s12,
            s21: s.s21,
            s22: -s.s22,
        },
        PsiTarget::DirichletM => *s,
        PsiTarget::NeumannM => SBlocks {
            s11: s.s22,
            s12: -s.s21,
            s21: -s.s12,
            s22: s.s11,
        },
    }
}

fn validate_parameters(lambda: Complex64, alpha: Complex64) -> Result<()> {
    if alpha == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument {
            message: "alpha must be nonzero".to_string(),
        });
    }
    if lambda.im == 0.0 && alpha.im == 0.0 {
        return Err(Error::InvalidArgument {
            message: "real lambda requires Im(alpha) != 0 to keep the flow regular".to_string(),
        });
    }
    Ok(())
}

/// Compute `Psi = (alpha*I + M^-1)^-1` for the generic matrix by
/// integrating the Riccati flow from `X` down to `0`.
pub fn compute_psi(
    prob: &Problem,
    lambda: Complex64,
    alpha: Complex64,
    settings: &IntegratorSettings,
) -> Result<PsiValue> {
    compute_psi_for(PsiTarget::GenericM, prob, lambda, alpha, settings)
}

/// Compute Psi for a chosen target matrix.
pub fn compute_psi_for(
    target: PsiTarget,
    prob: &Problem,
    lambda: Complex64,
    alpha: Complex64,
    settings: &IntegratorSettings,
) -> Result<PsiValue> {
    validate_parameters(lambda, alpha)?;
    let start = match target {
        PsiTarget::GenericM | PsiTarget::DirichletM => {
            Mat2::scalar(Complex64::new(1.0, 0.0) / alpha)
        }
        PsiTarget::NeumannM => Mat2::zero(),
    };
    let rhs = |x: f64, gamma: &Mat2| -> Result<Mat2> {
        let blocks = prob.s_blocks(x, lambda)?;
        let blocks = transformed_blocks(target, &blocks);
        Ok(gamma_rhs(&blocks, gamma, alpha))
    };
    let psi = integrate(rhs, prob.truncation_x(), 0.0, start, settings)?;
    let symmetry_defect = psi.symmetry_defect();
    Ok(PsiValue {
        lambda,
        alpha,
        psi,
        label: prob.label().to_string(),
        symmetry_defect,
        symmetry_warning: symmetry_defect > 1e4 * settings.rel_tol,
    })
}

/// Denominator of the inverse transform; it vanishes exactly at the
/// poles of the target matrix, which makes it the pole indicator used
/// by the spectral module.
pub fn transform_denominator(psi: &Mat2, alpha: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0) - alpha * psi.trace() + alpha * alpha * psi.det()
}

/// Map a Psi sample back to its target matrix `M`.
pub fn m_from_psi(psi: &Mat2, alpha: Complex64) -> Result<Mat2> {
    let den = transform_denominator(psi, alpha);
    let scale = 1.0 + alpha.norm_sqr() * psi.sup_norm() * psi.sup_norm();
    if den.norm() <= 1e-13 * scale {
        return Err(Error::PoleProximity {
            denominator_magnitude: den.norm(),
        });
    }
    Ok((*psi - Mat2::scalar(alpha * psi.det())) / den)
}

//! Spectral analysis of the half-line problem: M-matrix evaluation by
//! boundary condition, pole location on the real axis, Laurent data at
//! poles, and the rank criterion for the associated integral
//! inequality.
//!
//! The scalar transform denominator `g = 1 - alpha tr(Psi) +
//! alpha^2 det(Psi)` satisfies `g = 1/det(I + alpha M)`, so the poles
//! of the chosen M-matrix are exactly the zeros of `g` while `Psi`
//! itself stays bounded through them. Pole search therefore scans `|g|`
//! on a real bracket and drills into local minima; residue extraction
//! fits the Taylor series of `Psi` at the pole and divides out the
//! denominator series.
//!
//! The inequality decision combines the residue ranks of the Dirichlet
//! and Neumann M-matrices at a common positive pole: the inequality is
//! valid precisely when the two ranks sum to 2. Everything here reports
//! its numerical evidence (denominator magnitudes, error bounds,
//! realness defects) so a borderline verdict can be audited.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::{
    denominator_constant, laurent_from_coeffs, propagate_errors, residue_error_bound,
    LaurentBranch, LaurentSeries,
};
use crate::mat2::Mat2;
use crate::odeint::IntegratorSettings;
use crate::problem::Problem;
use crate::riccati::{compute_psi_for, m_from_psi, transform_denominator, PsiTarget};
use crate::taylor::{adaptive_taylor_for, TaylorSeries, TaylorStatus};

/// Boundary condition selecting which M-matrix is analyzed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    /// The Riccati flow whose fixed endpoint value produces this
    /// boundary condition's M-matrix directly.
    pub fn target(self) -> PsiTarget {
        match self {
            BoundaryCondition::Dirichlet => PsiTarget::DirichletM,
            BoundaryCondition::Neumann => PsiTarget::NeumannM,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
        }
    }
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// An M-matrix value with its numerical diagnostics.
#[derive(Clone, Debug)]
pub struct MValue {
    pub bc: BoundaryCondition,
    pub lambda: Complex64,
    pub alpha: Complex64,
    pub m: Mat2,
    pub psi: Mat2,
    /// Off-diagonal defect of Psi; M inherits it.
    pub symmetry_defect: f64,
    pub symmetry_warning: bool,
}

/// Evaluate the M-matrix for the chosen boundary condition at a
/// regular point `lambda`.
pub fn evaluate_m(
    prob: &Problem,
    bc: BoundaryCondition,
    lambda: Complex64,
    alpha: Complex64,
    settings: &IntegratorSettings,
) -> Result<MValue> {
    let psi = compute_psi_for(bc.target(), prob, lambda, alpha, settings)?;
    let m = m_from_psi(&psi.psi, alpha)?;
    Ok(MValue {
        bc,
        lambda,
        alpha,
        m,
        psi: psi.psi,
        symmetry_defect: psi.symmetry_defect,
        symmetry_warning: psi.symmetry_warning,
    })
}

/// A located real pole of an M-matrix.
#[derive(Clone, Copy, Debug)]
pub struct PoleLocation {
    pub lambda: f64,
    /// `|g|` at the returned point; a genuine pole drives this to the
    /// solver's noise floor.
    pub denominator_magnitude: f64,
}

/// Number of samples in the initial bracket scan.
const GRID_POINTS: usize = 64;
/// Golden-section iteration cap per refinement.
const REFINE_ITERATIONS: usize = 200;

fn pole_tolerance(alpha: Complex64) -> f64 {
    1e-8 * (1.0 + alpha.norm_sqr())
}

/// `|g|` along the real axis for the boundary condition's flow.
fn denominator_at(
    prob: &Problem,
    bc: BoundaryCondition,
    x: f64,
    alpha: Complex64,
    settings: &IntegratorSettings,
) -> Result<f64> {
    let psi = compute_psi_for(bc.target(), prob, Complex64::new(x, 0.0), alpha, settings)?;
    Ok(transform_denominator(&psi.psi, alpha).norm())
}

/// Golden-section descent of `|g|` on `[a, b]`, returning the best
/// point seen. Stops early once the value drops below `tol`.
fn refine_minimum(
    prob: &Problem,
    bc: BoundaryCondition,
    mut a: f64,
    mut b: f64,
    alpha: Complex64,
    settings: &IntegratorSettings,
    tol: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let eval = |x: f64| denominator_at(prob, bc, x, alpha, settings);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut g1 = eval(x1)?;
    let mut g2 = eval(x2)?;
    let mut best = if g1 <= g2 { (x1, g1) } else { (x2, g2) };
    for _ in 0..REFINE_ITERATIONS {
        if best.1 < tol {
            break;
        }
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if g1 <= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - INV_PHI * (b - a);
            g1 = eval(x1)?;
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + INV_PHI * (b - a);
            g2 = eval(x2)?;
        }
        let (cx, cg) = if g1 <= g2 { (x1, g1) } else { (x2, g2) };
        if cg < best.1 {
            best = (cx, cg);
        }
    }
    Ok(best)
}

fn validate_bracket(bracket: (f64, f64), alpha: Complex64) -> Result<()> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument {
            message: format!("bracket ({lo}, {hi}) must be finite with lo < hi"),
        });
    }
    if alpha.im == 0.0 {
        return Err(Error::InvalidArgument {
            message: "scanning the real axis requires alpha with a nonzero imaginary part"
                .to_string(),
        });
    }
    Ok(())
}

/// Locate one pole of the chosen M-matrix inside a real bracket: grid
/// scan of `|g|` followed by golden-section refinement of the deepest
/// minimum.
pub fn locate_pole(
    prob: &Problem,
    bc: BoundaryCondition,
    bracket: (f64, f64),
    alpha: Complex64,
    settings: &IntegratorSettings,
) -> Result<PoleLocation> {
    validate_bracket(bracket, alpha)?;
    let (lo, hi) = bracket;
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let mut values = Vec::with_capacity(GRID_POINTS);
    for i in 0..GRID_POINTS {
        let x = lo + step * i as f64;
        values.push((x, denominator_at(prob, bc, x, alpha, settings)?));
    }
    let (imin, _) = values
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.1.total_cmp(&b.1))
        .expect("grid is nonempty");
    let a = values[imin.saturating_sub(1)].0;
    let b = values[(imin + 1).min(GRID_POINTS - 1)].0;
    let tol = pole_tolerance(alpha);
    let (x, g) = refine_minimum(prob, bc, a, b, alpha, settings, tol)?;
    if g < tol {
        Ok(PoleLocation {
            lambda: x,
            denominator_magnitude: g,
        })
    } else {
        Err(Error::PoleNotFound {
            lambda: x,
            denominator_magnitude: g,
        })
    }
}

/// Locate every pole inside a real bracket: each strict local minimum
/// of the grid scan is refined, and only refinements that reach the
/// pole tolerance are kept.
pub fn locate_poles(
    prob: &Problem,
    bc: BoundaryCondition,
    bracket: (f64, f64),
    alpha: Complex64,
    settings: &IntegratorSettings,
) -> Result<Vec<PoleLocation>> {
    validate_bracket(bracket, alpha)?;
    let (lo, hi) = bracket;
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let mut values = Vec::with_capacity(GRID_POINTS);
    for i in 0..GRID_POINTS {
        let x = lo + step * i as f64;
        values.push((x, denominator_at(prob, bc, x, alpha, settings)?));
    }
    let tol = pole_tolerance(alpha);
    let mut found: Vec<PoleLocation> = Vec::new();
    for i in 1..GRID_POINTS - 1 {
        if values[i].1 < values[i - 1].1 && values[i].1 < values[i + 1].1 {
            let (x, g) = refine_minimum(
                prob,
                bc,
                values[i - 1].0,
                values[i + 1].0,
                alpha,
                settings,
                tol,
            )?;
            if g < tol {
                let dup = found
                    .iter()
                    .any(|p| (p.lambda - x).abs() <= 1e-6 * (hi - lo));
                if !dup {
                    found.push(PoleLocation {
                        lambda: x,
                        denominator_magnitude: g,
                    });
                }
            }
        }
    }
    Ok(found)
}

/// Residue analysis of an M-matrix at a real point.
#[derive(Clone, Debug)]
pub struct ResidueReport {
    pub bc: BoundaryCondition,
    pub lambda0: f64,
    pub alpha: Complex64,
    /// Whether the transform denominator vanishes at `lambda0`; when it
    /// does not, there is no pole and the residue is exactly zero.
    pub pole_detected: bool,
    /// `|g(lambda0)|` reconstructed from the fitted series.
    pub a0_abs: f64,
    /// `|a_1|`, the linear denominator coefficient driving the branch
    /// choice.
    pub a1_abs: f64,
    pub branch: Option<LaurentBranch>,
    /// Residue of M at the pole (zero when no pole was detected).
    pub residue: Mat2,
    pub det_residue: Complex64,
    pub residue_rank: usize,
    /// Largest imaginary entry of the residue; it should be real.
    pub realness_defect: f64,
    /// First-order error bound on the residue entries, floored by the
    /// realness defect.
    pub error_estimate: f64,
    pub status: TaylorStatus,
    pub m_final: usize,
    pub mu_final: Complex64,
    pub truncation_x: f64,
    pub notes: Vec<String>,
    pub laurent: Option<LaurentSeries>,
    pub taylor: TaylorSeries,
}

/// Threshold on `|a_0|` below which the expansion point is treated as
/// a pole.
fn pole_presence_tolerance(alpha: Complex64) -> f64 {
    1e-5 * (1.0 + alpha.norm()).powi(2)
}

/// Fit the Taylor series of Psi at `lambda0` and extract the Laurent
/// data of the boundary condition's M-matrix.
pub fn residue_report(
    prob: &Problem,
    bc: BoundaryCondition,
    lambda0: f64,
    alpha: Complex64,
    settings: &IntegratorSettings,
    target_acc: f64,
) -> Result<ResidueReport> {
    if !lambda0.is_finite() {
        return Err(Error::InvalidArgument {
            message: format!("expansion point {lambda0} must be finite"),
        });
    }
    let ts = adaptive_taylor_for(
        bc.target(),
        prob,
        Complex64::new(lambda0, 0.0),
        3,
        alpha,
        settings,
        target_acc,
    )?;
    let mut notes = Vec::new();
    if ts.status == TaylorStatus::TargetNotReached {
        notes.push(format!(
            "coefficient fit stalled at {:.3e} against a target of {:.3e}",
            ts.watched_error(3),
            target_acc
        ));
    }

    let prop = propagate_errors(&ts.coeffs, &ts.error_estimates, alpha);
    let a0 = denominator_constant(&ts.coeffs[0], alpha);
    let presence_tol = pole_presence_tolerance(alpha);

    if a0.norm() > presence_tol {
        // No pole: g does not vanish here, so M is analytic and the
        // residue is exactly zero.
        let a1_abs = crate::laurent::denominator_coeffs(&ts.coeffs, alpha)
            .map(|d| d.a1.norm())
            .unwrap_or(0.0);
        notes.push(format!(
            "no pole at {lambda0}: |g| = {:.3e} exceeds the presence threshold {:.3e}",
            a0.norm(),
            presence_tol
        ));
        return Ok(ResidueReport {
            bc,
            lambda0,
            alpha,
            pole_detected: false,
            a0_abs: a0.norm(),
            a1_abs,
            branch: None,
            residue: Mat2::zero(),
            det_residue: Complex64::new(0.0, 0.0),
            residue_rank: 0,
            realness_defect: 0.0,
            error_estimate: 0.0,
            status: ts.status,
            m_final: ts.m_final,
            mu_final: ts.mu_final,
            truncation_x: prob.truncation_x(),
            notes,
            laurent: None,
            taylor: ts,
        });
    }

    // The branch threshold must sit above the noise in a_1, or a
    // full-rank pole (whose exact a_1 is zero) would be misclassified.
    let branch_tol = (3.0 * prop.denominator[1]).max(1e-9);
    let ls = laurent_from_coeffs(&ts.coeffs, ts.lambda0, alpha, branch_tol)?;
    if ls.branch == LaurentBranch::A1Zero {
        notes.push(
            "linear denominator coefficient below threshold: full-rank residue branch".to_string(),
        );
    }
    let residue = ls.m_minus1;
    let realness_defect = residue.im_sup_norm();
    let error_estimate = residue_error_bound(&ls, &prop).max(realness_defect);
    let scale = residue.sup_norm();
    let rank = if scale == 0.0 {
        0
    } else {
        let rel_tol = (10.0 * error_estimate / scale).max(1e-6);
        numerical_rank(&residue, rel_tol)
    };
    Ok(ResidueReport {
        bc,
        lambda0,
        alpha,
        pole_detected: true,
        a0_abs: a0.norm(),
        a1_abs: ls.denominator.a1.norm(),
        branch: Some(ls.branch),
        residue,
        det_residue: residue.det(),
        residue_rank: rank,
        realness_defect,
        error_estimate,
        status: ts.status,
        m_final: ts.m_final,
        mu_final: ts.mu_final,
        truncation_x: prob.truncation_x(),
        notes,
        laurent: Some(ls),
        taylor: ts,
    })
}

/// Rank of a 2x2 matrix by its singular values: the count above
/// `rel_tol` times the largest.
pub fn numerical_rank(m: &Mat2, rel_tol: f64) -> usize {
    // Singular values via the eigenvalues of the 2x2 Gram matrix.
    let g11 = m.e11.norm_sqr() + m.e21.norm_sqr();
    let g22 = m.e12.norm_sqr() + m.e22.norm_sqr();
    let g12 = m.e11.conj() * m.e12 + m.e21.conj() * m.e22;
    let half_trace = 0.5 * (g11 + g22);
    let det = g11 * g22 - g12.norm_sqr();
    let disc = (half_trace * half_trace - det).max(0.0).sqrt();
    let s_max = (half_trace + disc).max(0.0).sqrt();
    let s_min = (half_trace - disc).max(0.0).sqrt();
    if s_max == 0.0 {
        return 0;
    }
    1 + usize::from(s_min > rel_tol * s_max)
}

/// Outcome of the rank criterion at a pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HelpOutcome {
    /// Ranks sum to 2: the inequality is valid.
    InequalityHolds,
    /// Ranks do not sum to 2: validity fails the known sufficient
    /// condition.
    CriterionNotMet,
}

/// The rank criterion combining both boundary conditions at one pole.
#[derive(Clone, Debug)]
pub struct HelpVerdict {
    pub rank_dirichlet: usize,
    pub rank_neumann: usize,
    pub outcome: HelpOutcome,
    pub notes: Vec<String>,
}

/// Decide the inequality from the two residue ranks.
pub fn bennewitz_check(rank_dirichlet: usize, rank_neumann: usize) -> HelpVerdict {
    let sum = rank_dirichlet + rank_neumann;
    let outcome = if sum == 2 {
        HelpOutcome::InequalityHolds
    } else {
        HelpOutcome::CriterionNotMet
    };
    let mut notes = Vec::new();
    if outcome == HelpOutcome::CriterionNotMet {
        notes.push(format!(
            "residue ranks sum to {sum}, not 2; validity is expected to fail, \
             though only the rank-2 direction is proved"
        ));
    }
    HelpVerdict {
        rank_dirichlet,
        rank_neumann,
        outcome,
        notes,
    }
}

/// Residue reports for both boundary conditions at one point, combined
/// into a verdict.
#[derive(Clone, Debug)]
pub struct VerdictReport {
    pub dirichlet: ResidueReport,
    pub neumann: ResidueReport,
    pub verdict: HelpVerdict,
}

/// Run [`residue_report`] under both boundary conditions at `lambda0`
/// and apply the rank criterion.
pub fn verdict_at(
    prob: &Problem,
    lambda0: f64,
    alpha: Complex64,
    settings: &IntegratorSettings,
    target_acc: f64,
) -> Result<VerdictReport> {
    let dirichlet = residue_report(
        prob,
        BoundaryCondition::Dirichlet,
        lambda0,
        alpha,
        settings,
        target_acc,
    )?;
    let neumann = residue_report(
        prob,
        BoundaryCondition::Neumann,
        lambda0,
        alpha,
        settings,
        target_acc,
    )?;
    let verdict = bennewitz_check(dirichlet.residue_rank, neumann.residue_rank);
    Ok(VerdictReport {
        dirichlet,
        neumann,
        verdict,
    })
}

/// One sample of the sector positivity scan.
#[derive(Clone, Debug)]
pub struct SectorSample {
    pub rho: f64,
    pub theta: f64,
    pub lambda: Complex64,
    /// Smallest eigenvalue of the symmetrized test matrix; positive
    /// samples support validity near the pole.
    pub min_eig: Option<f64>,
    pub error: Option<String>,
}

/// Sector positivity scan around a real point.
#[derive(Clone, Debug)]
pub struct SectorScan {
    pub lambda0: f64,
    pub alpha: Complex64,
    pub samples: Vec<SectorSample>,
}

impl SectorScan {
    /// True when every sample evaluated cleanly to a positive minimum
    /// eigenvalue.
    pub fn all_positive(&self) -> bool {
        !self.samples.is_empty()
            && self
                .samples
                .iter()
                .all(|s| s.error.is_none() && s.min_eig.map(|e| e > 0.0).unwrap_or(false))
    }
}

/// Scan the sign-definiteness of `Im(-(lambda')^2 M_N)` (first
/// quadrant of the shifted plane) and `Im(+(lambda')^2 M_N)` (third
/// quadrant) on a polar grid `lambda = lambda0 + rho e^{i theta}`.
/// Integration failures are recorded per sample and do not abort the
/// scan.
pub fn sector_scan(
    prob: &Problem,
    lambda0: f64,
    rhos: &[f64],
    thetas: &[f64],
    alpha: Complex64,
    settings: &IntegratorSettings,
) -> Result<SectorScan> {
    use std::f64::consts::PI;
    if rhos.is_empty() || thetas.is_empty() {
        return Err(Error::InvalidArgument {
            message: "sector scan needs at least one radius and one angle".to_string(),
        });
    }
    for &rho in rhos {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidArgument {
                message: format!("sector radius {rho} must be positive"),
            });
        }
    }
    for &theta in thetas {
        let first = theta > 0.0 && theta < PI / 2.0;
        let third = theta > PI && theta < 1.5 * PI;
        if !(first || third) {
            return Err(Error::InvalidArgument {
                message: format!("sector angle {theta} must lie in (0, pi/2) or (pi, 3pi/2)"),
            });
        }
    }
    let mut samples = Vec::with_capacity(rhos.len() * thetas.len());
    for &rho in rhos {
        for &theta in thetas {
            let shift = Complex64::from_polar(rho, theta);
            let lambda = Complex64::new(lambda0, 0.0) + shift;
            let sign = if theta < PI { -1.0 } else { 1.0 };
            match evaluate_m(prob, BoundaryCondition::Neumann, lambda, alpha, settings) {
                Ok(mv) => {
                    let test = mv.m * (shift * shift) * sign;
                    let h = test.im();
                    // Symmetrize and take the smaller eigenvalue.
                    let b = 0.5 * (h[0][1] + h[1][0]);
                    let mean = 0.5 * (h[0][0] + h[1][1]);
                    let rad = (0.25 * (h[0][0] - h[1][1]).powi(2) + b * b).sqrt();
                    samples.push(SectorSample {
                        rho,
                        theta,
                        lambda,
                        min_eig: Some(mean - rad),
                        error: None,
                    });
                }
                Err(e) => samples.push(SectorSample {
                    rho,
                    theta,
                    lambda,
                    min_eig: None,
                    error: Some(e.to_string()),
                }),
            }
        }
    }
    Ok(SectorScan {
        lambda0,
        alpha,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rank_counts_singular_values() {
        assert_eq!(numerical_rank(&Mat2::zero(), 1e-6), 0);
        assert_eq!(numerical_rank(&Mat2::identity(), 1e-6), 2);
        let rank1 = Mat2::from_real(1.0, 2.0, 2.0, 4.0);
        assert_eq!(numerical_rank(&rank1, 1e-6), 1);
        let nearly_rank1 = Mat2::from_real(3.0, 0.0, 0.0, 2e-7);
        assert_eq!(numerical_rank(&nearly_rank1, 1e-6), 1);
        assert_eq!(numerical_rank(&nearly_rank1, 1e-9), 2);
        let complex_rank1 = Mat2::new(c(0.0, 1.0), c(0.0, 2.0), c(1.0, 0.0), c(2.0, 0.0));
        assert_eq!(numerical_rank(&complex_rank1, 1e-6), 1);
    }

    #[test]
    fn rank_criterion_combinations() {
        assert_eq!(bennewitz_check(1, 1).outcome, HelpOutcome::InequalityHolds);
        assert_eq!(bennewitz_check(2, 0).outcome, HelpOutcome::InequalityHolds);
        assert_eq!(bennewitz_check(0, 2).outcome, HelpOutcome::InequalityHolds);
        let miss = bennewitz_check(1, 0);
        assert_eq!(miss.outcome, HelpOutcome::CriterionNotMet);
        assert!(!miss.notes.is_empty());
        assert_eq!(bennewitz_check(2, 1).outcome, HelpOutcome::CriterionNotMet);
    }

    #[test]
    fn brackets_and_angles_are_validated() {
        let prob = fixtures::builtin("eq2").unwrap().unwrap();
        let settings = IntegratorSettings::default();
        assert!(matches!(
            locate_pole(
                &prob,
                BoundaryCondition::Dirichlet,
                (5.0, 5.0),
                c(1.0, 1.0),
                &settings
            ),
            Err(Error::InvalidArgument { .. })
        ));
        assert!(matches!(
            locate_pole(
                &prob,
                BoundaryCondition::Dirichlet,
                (5.0, 6.0),
                c(1.0, 0.0),
                &settings
            ),
            Err(Error::InvalidArgument { .. })
        ));
        assert!(matches!(
            sector_scan(&prob, 16.0, &[0.1], &[2.0], c(1.0, 0.0), &settings),
            Err(Error::InvalidArgument { .. })
        ));
        assert!(matches!(
            sector_scan(&prob, 16.0, &[], &[0.5], c(1.0, 0.0), &settings),
            Err(Error::InvalidArgument { .. })
        ));
        assert!(matches!(
            sector_scan(&prob, 16.0, &[-0.1], &[0.5], c(1.0, 0.0), &settings),
            Err(Error::InvalidArgument { .. })
        ));
    }

    #[test]
    fn dirichlet_and_neumann_matrices_are_reciprocal() {
        // Cross-check the two direct flows through the public API on a
        // shortened domain: M_D * M_N = -I.
        let prob = fixtures::builtin("eq2")
            .unwrap()
            .unwrap()
            .with_truncation_x(5.0)
            .unwrap();
        let settings = IntegratorSettings::default();
        let lambda = c(1.0, 2.0);
        let alpha = c(1.0, 0.0);
        let md = evaluate_m(
            &prob,
            BoundaryCondition::Dirichlet,
            lambda,
            alpha,
            &settings,
        )
        .unwrap();
        let mn = evaluate_m(&prob, BoundaryCondition::Neumann, lambda, alpha, &settings).unwrap();
        let product = md.m * mn.m + Mat2::identity();
        assert!(
            product.sup_norm() <= 1e-6,
            "M_D M_N + I = {:.3e}",
            product.sup_norm()
        );
        assert!(!md.symmetry_warning);
        assert!(!mn.symmetry_warning);
    }

    #[test]
    fn neumann_matrix_is_nevanlinna_in_the_upper_half_plane() {
        let prob = fixtures::builtin("eq2")
            .unwrap()
            .unwrap()
            .with_truncation_x(5.0)
            .unwrap();
        let settings = IntegratorSettings::default();
        let mv = evaluate_m(
            &prob,
            BoundaryCondition::Neumann,
            c(2.0, 1.0),
            c(1.0, 0.0),
            &settings,
        )
        .unwrap();
        let h = mv.m.im();
        let b = 0.5 * (h[0][1] + h[1][0]);
        let mean = 0.5 * (h[0][0] + h[1][1]);
        let rad = (0.25 * (h[0][0] - h[1][1]).powi(2) + b * b).sqrt();
        assert!(
            mean - rad > 0.0,
            "Im M_N should be positive definite, got eigs {:.3e}, {:.3e}",
            mean - rad,
            mean + rad
        );
    }
}

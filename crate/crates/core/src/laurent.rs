//! Laurent expansion of the M-matrix at a simple real pole, recovered
//! from the Taylor coefficients of Psi.
//!
//! With `Psi = (alpha I + M^-1)^-1` one has, for 2x2 matrices,
//!
//! ```text
//! M(lambda) = N(lambda) / g(lambda),
//! N = Psi - alpha det(Psi) I,
//! g = 1 - alpha tr(Psi) + alpha^2 det(Psi),
//! ```
//!
//! so a pole of M is a zero of the scalar `g` while `Psi` itself stays
//! analytic. Substituting the truncated Taylor series of Psi and
//! expanding `det` with the 2x2 identity
//! `det(A + B) = det A + tr(adj(A) B) + det B` gives polynomial
//! approximants of `N` and `g`; dividing them as formal series around
//! the pole yields the Laurent coefficients `M_-1, M_0, M_1, M_2`.
//!
//! At a simple pole the constant term of `g` vanishes. Generically its
//! linear coefficient `a_1` is nonzero; when the residue has full rank
//! `Psi(lambda_0)` degenerates to `alpha^-1 I`, forcing `a_1 = 0`
//! together with the whole numerator constant term, and the division
//! starts one order higher. Both branches are implemented; the caller
//! supplies the threshold separating them, sized from the noise in
//! `a_1`. First-order error propagation through the same formulas is
//! provided so reports can attach a defensible accuracy to the residue.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::taylor::TaylorSeries;

/// Which series-division branch produced the expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaurentBranch {
    /// `|a_1| > tol`: generic simple pole, rank-one residue.
    A1NonZero,
    /// `|a_1| <= tol < |a_2|`: degenerate denominator, the division
    /// starts at the quadratic term (full-rank residue).
    A1Zero,
}

/// Scalar Taylor coefficients of the transform denominator
/// `g = 1 - alpha tr(Psi) + alpha^2 det(Psi)`.
#[derive(Clone, Copy, Debug)]
pub struct DenominatorCoeffs {
    /// Constant term; vanishes at a pole of M.
    pub a0: Complex64,
    pub a1: Complex64,
    pub a2: Complex64,
    /// Present when at least four Psi coefficients were supplied.
    pub a3: Option<Complex64>,
    /// Present when at least five Psi coefficients were supplied.
    pub a4: Option<Complex64>,
}

/// Matrix Taylor coefficients of the transform numerator
/// `N = Psi - alpha det(Psi) I`.
#[derive(Clone, Copy, Debug)]
pub struct NumeratorCoeffs {
    pub a0: Mat2,
    pub a1: Mat2,
    pub a2: Mat2,
    pub a3: Option<Mat2>,
    pub a4: Option<Mat2>,
}

/// Laurent expansion `M = M_-1/(lambda - lambda_0) + M_0 + ...`.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    pub lambda0: Complex64,
    pub branch: LaurentBranch,
    /// Residue of M at the pole.
    pub m_minus1: Mat2,
    pub m_0: Option<Mat2>,
    pub m_1: Option<Mat2>,
    /// Only available on the generic branch with five coefficients.
    pub m_2: Option<Mat2>,
    pub denominator: DenominatorCoeffs,
    pub numerator: NumeratorCoeffs,
    /// Largest imaginary entry among the recovered Laurent
    /// coefficients; at a real pole they are all real in exact
    /// arithmetic, so this measures the numerical noise floor.
    pub realness_defect: f64,
}

/// First-order error bounds for the intermediate coefficients, indexed
/// like the Psi coefficients they derive from.
#[derive(Clone, Copy, Debug)]
pub struct CoefficientErrors {
    /// Bounds for the scalar denominator coefficients `a_0..a_4`.
    pub denominator: [f64; 5],
    /// Bounds for the matrix numerator coefficients `A_0..A_4`.
    pub numerator: [f64; 5],
}

/// Taylor coefficients of `det(Psi)` through degree 4 via the 2x2
/// expansion `det(A + B) = det A + tr(adj(A) B) + det B`. Missing Psi
/// coefficients contribute nothing, which truncates the result
/// consistently with the inputs.
fn det_series(coeffs: &[Mat2]) -> [Complex64; 5] {
    let zero = Complex64::new(0.0, 0.0);
    let get = |i: usize| coeffs.get(i).copied();
    let pair = |i: usize, j: usize| match (get(i), get(j)) {
        (Some(a), Some(b)) => (a.adjugate() * b).trace(),
        _ => zero,
    };
    let self_det = |i: usize| get(i).map_or(zero, |a| a.det());
    [
        self_det(0),
        pair(0, 1),
        self_det(1) + pair(0, 2),
        pair(0, 3) + pair(1, 2),
        pair(0, 4) + pair(1, 3) + self_det(2),
    ]
}

/// Constant term of the transform denominator at the expansion point:
/// `1 - alpha tr(Psi_0) + alpha^2 det(Psi_0)`. A pole of M is present
/// exactly when this (up to noise) vanishes.
pub fn denominator_constant(psi0: &Mat2, alpha: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0) - alpha * psi0.trace() + alpha * alpha * psi0.det()
}

/// Denominator coefficients from Psi coefficients; needs at least
/// `Psi_0..Psi_2`.
pub fn denominator_coeffs(coeffs: &[Mat2], alpha: Complex64) -> Result<DenominatorCoeffs> {
    if coeffs.len() < 3 {
        return Err(Error::InsufficientCoefficients {
            needed: 3,
            got: coeffs.len(),
        });
    }
    let d = det_series(coeffs);
    let a_k = |k: usize| alpha * alpha * d[k] - alpha * coeffs[k].trace();
    Ok(DenominatorCoeffs {
        a0: denominator_constant(&coeffs[0], alpha),
        a1: a_k(1),
        a2: a_k(2),
        a3: (coeffs.len() > 3).then(|| a_k(3)),
        a4: (coeffs.len() > 4).then(|| a_k(4)),
    })
}

/// Numerator coefficients from Psi coefficients; needs at least
/// `Psi_0..Psi_2`.
pub fn numerator_coeffs(coeffs: &[Mat2], alpha: Complex64) -> Result<NumeratorCoeffs> {
    if coeffs.len() < 3 {
        return Err(Error::InsufficientCoefficients {
            needed: 3,
            got: coeffs.len(),
        });
    }
    let d = det_series(coeffs);
    let a_k = |k: usize| coeffs[k] - Mat2::scalar(alpha * d[k]);
    Ok(NumeratorCoeffs {
        a0: a_k(0),
        a1: a_k(1),
        a2: a_k(2),
        a3: (coeffs.len() > 3).then(|| a_k(3)),
        a4: (coeffs.len() > 4).then(|| a_k(4)),
    })
}

/// Laurent coefficients from a fitted Taylor series of Psi.
///
/// `branch_tol` separates the two division branches on `|a_1|`; size it
/// above the propagated noise in `a_1` (see [`propagate_errors`]).
pub fn laurent_from_taylor(
    series: &TaylorSeries,
    alpha: Complex64,
    branch_tol: f64,
) -> Result<LaurentSeries> {
    laurent_from_coeffs(&series.coeffs, series.lambda0, alpha, branch_tol)
}

/// Laurent coefficients from raw Psi Taylor coefficients. Requires at
/// least four coefficients; a fifth extends the expansion by one order.
pub fn laurent_from_coeffs(
    coeffs: &[Mat2],
    lambda0: Complex64,
    alpha: Complex64,
    branch_tol: f64,
) -> Result<LaurentSeries> {
    if coeffs.len() < 4 {
        return Err(Error::InsufficientCoefficients {
            needed: 4,
            got: coeffs.len(),
        });
    }
    let den = denominator_coeffs(coeffs, alpha)?;
    let num = numerator_coeffs(coeffs, alpha)?;
    let (a1, a2) = (den.a1, den.a2);
    let a3 = den.a3.expect("length checked above");
    let n0 = num.a0;
    let n1 = num.a1;
    let n2 = num.a2;
    let n3 = num.a3.expect("length checked above");

    let (branch, m_minus1, m_0, m_1, m_2) = if a1.norm() > branch_tol {
        // Divide N by g = a1 l (1 + (a2/a1) l + ...) as formal series.
        let r2 = a2 / (a1 * a1);
        let r3 = a2 * a2 / (a1 * a1 * a1) - a3 / (a1 * a1);
        let m_2 = den.a4.map(|a4| {
            let r4 = (a1 * a3 * 2.0 - a2 * a2) * a2 / (a1 * a1 * a1 * a1) - a4 / (a1 * a1);
            n3 / a1 - n2 * r2 + n1 * r3 + n0 * r4
        });
        (
            LaurentBranch::A1NonZero,
            n0 / a1,
            Some(n1 / a1 - n0 * r2),
            Some(n2 / a1 - n1 * r2 + n0 * r3),
            m_2,
        )
    } else if a2.norm() > branch_tol {
        // g = a2 l^2 (1 + (a3/a2) l + ...); the numerator constant term
        // vanishes along with a1 in exact arithmetic and is dropped.
        let r3 = a3 / (a2 * a2);
        let m_1 = den.a4.map(|a4| {
            let r4 = a3 * a3 / (a2 * a2 * a2) - a4 / (a2 * a2);
            n3 / a2 - n2 * r3 + n1 * r4
        });
        (
            LaurentBranch::A1Zero,
            n1 / a2,
            Some(n2 / a2 - n1 * r3),
            m_1,
            None,
        )
    } else {
        return Err(Error::NumericalBreakdown {
            message: format!(
                "both leading denominator coefficients are below the branch \
                 threshold {branch_tol:.3e} (|a1| = {:.3e}, |a2| = {:.3e})",
                a1.norm(),
                a2.norm()
            ),
        });
    };

    let realness_defect = [Some(m_minus1), m_0, m_1, m_2]
        .iter()
        .flatten()
        .map(Mat2::im_sup_norm)
        .fold(0.0, f64::max);

    Ok(LaurentSeries {
        lambda0,
        branch,
        m_minus1,
        m_0,
        m_1,
        m_2,
        denominator: den,
        numerator: num,
        realness_defect,
    })
}

/// First-order propagation of per-coefficient Psi errors into the
/// denominator and numerator coefficients. `estimates[nu]` bounds the
/// entrywise error of `coeffs[nu]`; missing entries are treated as
/// exact.
pub fn propagate_errors(coeffs: &[Mat2], estimates: &[f64], alpha: Complex64) -> CoefficientErrors {
    let n = |i: usize| coeffs.get(i).map_or(0.0, Mat2::sup_norm);
    let e = |i: usize| {
        if i < coeffs.len() {
            estimates.get(i).copied().unwrap_or(0.0)
        } else {
            0.0
        }
    };
    // tr: two entries; det: four products of two entries; tr(adj(A) B):
    // four products mixing the two factors.
    let d_tr = |i: usize| 2.0 * e(i);
    let d_det = |i: usize| 4.0 * n(i) * e(i);
    let d_pair = |i: usize, j: usize| 4.0 * (n(i) * e(j) + n(j) * e(i));
    let d_ds = [
        d_det(0),
        d_pair(0, 1),
        d_det(1) + d_pair(0, 2),
        d_pair(0, 3) + d_pair(1, 2),
        d_pair(0, 4) + d_pair(1, 3) + d_det(2),
    ];
    let a = alpha.norm();
    let mut denominator = [0.0; 5];
    let mut numerator = [0.0; 5];
    for k in 0..5 {
        denominator[k] = a * a * d_ds[k] + a * d_tr(k);
        numerator[k] = e(k) + a * d_ds[k];
    }
    CoefficientErrors {
        denominator,
        numerator,
    }
}

/// First-order error bound for the residue `M_-1`, given the series it
/// came from and the propagated coefficient errors.
pub fn residue_error_bound(series: &LaurentSeries, errors: &CoefficientErrors) -> f64 {
    match series.branch {
        LaurentBranch::A1NonZero => {
            let a1 = series.denominator.a1.norm();
            let n0 = series.numerator.a0.sup_norm();
            errors.numerator[0] / a1 + n0 * errors.denominator[1] / (a1 * a1)
        }
        LaurentBranch::A1Zero => {
            let a2 = series.denominator.a2.norm();
            let n1 = series.numerator.a1.sup_norm();
            errors.numerator[1] / a2 + n1 * errors.denominator[2] / (a2 * a2)
        }
    }
}

//! Taylor coefficients of Psi around a point, from samples on a ray.
//!
//! Psi is analytic near a real pole of the target M-matrix, so its
//! leading Taylor coefficients at `lambda0` can be recovered from a few
//! samples `Psi(lambda0 + mu/2^j)`, `j = 0..m`, along a purely imaginary
//! ray (samples on the real axis would collide with the spectrum).
//! Writing the truncated expansion at the sample offsets produces, for
//! each matrix entry, a dual Vandermonde system on the geometric nodes
//! `2^-m, ..., 1` with unknowns `a_nu * mu^nu`; the Björck-Pereyra
//! sweeps solve it and dividing out `mu^nu` yields the coefficient
//! matrices.
//!
//! Both knobs of the fit are chosen adaptively, judged on the
//! coefficients of interest `Psi_0..Psi_k`:
//!
//! 1. start with `|mu| = 0.025` and order `m = k + 1`;
//! 2. raise `m` while successive fits keep agreeing better, capped at
//!    `m = 7`; a difference growing by more than a factor of two counts
//!    as divergence and the latest fit is discarded;
//! 3. with `m` fixed, double `|mu|` under the same improvement rule,
//!    stopping early once the requested accuracy is reached and never
//!    letting a doubling push `|mu|` past `0.5`.
//!
//! The reported error estimate of each coefficient is the sup-norm
//! difference between its final and penultimate accepted values; a top
//! coefficient that never had a comparison partner gets its own norm as
//! a conservative placeholder. If the target accuracy was not reached
//! the series is still returned, flagged [`TaylorStatus::TargetNotReached`].
//!
//! Every fit reuses all previously computed samples: raising `m` by one
//! or doubling `mu` each need exactly one new integration.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::odeint::IntegratorSettings;
use crate::problem::Problem;
use crate::riccati::{compute_psi_for, PsiTarget, PsiValue};
use crate::vandermonde::{bp_dual_solve, default_nodes};

/// Base magnitude of the sampling offset.
const BASE_MU_ABS: f64 = 0.025;
/// A doubling never pushes `|mu|` beyond this.
const MU_ABS_CAP: f64 = 0.5;
/// Largest fitting order the adaptive stage will try.
const M_CAP: usize = 7;
/// Largest index of the coefficients the improvement metric watches.
const K_CAP: usize = 4;

/// Outcome of the adaptive fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaylorStatus {
    /// Every watched coefficient met the target accuracy.
    Ok,
    /// The fit converged as far as it could but missed the target.
    TargetNotReached,
}

/// Which adaptive phase a fit attempt belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitPhase {
    RaiseOrder,
    EnlargeStep,
}

/// One attempted fit in the adaptive history.
#[derive(Clone, Debug)]
pub struct FitStep {
    pub phase: FitPhase,
    pub m: usize,
    pub mu: Complex64,
    /// Sup-norm difference to the previous accepted fit over the
    /// watched coefficients; infinite for the very first fit.
    pub diff: f64,
    pub accepted: bool,
}

/// Taylor expansion of Psi about `lambda0` with error estimates.
#[derive(Clone, Debug)]
pub struct TaylorSeries {
    pub lambda0: Complex64,
    /// Sampling offset of the final accepted fit.
    pub mu_final: Complex64,
    /// Order of the final accepted fit.
    pub m_final: usize,
    /// `Psi_0 ..= Psi_m_final`.
    pub coeffs: Vec<Mat2>,
    /// Per-coefficient sup-norm error estimates.
    pub error_estimates: Vec<f64>,
    pub status: TaylorStatus,
    /// Every fit attempt, accepted or discarded.
    pub history: Vec<FitStep>,
}

impl TaylorSeries {
    /// Largest error estimate among the watched coefficients
    /// `Psi_0..Psi_k`.
    pub fn watched_error(&self, k: usize) -> f64 {
        self.error_estimates
            .iter()
            .take(k + 1)
            .fold(0.0, |acc, &e| acc.max(e))
    }
}

/// Sample `Psi(lambda0 + mu/2^j)` for `j = 0..=m`, for the generic
/// target matrix.
pub fn sample_psi(
    prob: &Problem,
    lambda0: Complex64,
    mu: Complex64,
    m: usize,
    alpha: Complex64,
    settings: &IntegratorSettings,
) -> Result<Vec<PsiValue>> {
    sample_psi_for(PsiTarget::GenericM, prob, lambda0, mu, m, alpha, settings)
}

/// Sample Psi for a chosen target matrix.
pub fn sample_psi_for(
    target: PsiTarget,
    prob: &Problem,
    lambda0: Complex64,
    mu: Complex64,
    m: usize,
    alpha: Complex64,
    settings: &IntegratorSettings,
) -> Result<Vec<PsiValue>> {
    if mu.im == 0.0 {
        return Err(Error::InvalidArgument {
            message: "sampling offset mu must have a nonzero imaginary part".to_string(),
        });
    }
    (0..=m)
        .map(|j| {
            let lambda = lambda0 + mu * 2f64.powi(-(j as i32));
            compute_psi_for(target, prob, lambda, alpha, settings).map_err(|e| Error::Sample {
                j,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Fit `Psi_0..Psi_m` from samples at offsets `mu/2^j`, `j = 0..=m`,
/// ordered as [`sample_psi`] returns them.
pub fn fit_taylor(samples: &[PsiValue], mu: Complex64, m: usize) -> Result<Vec<Mat2>> {
    if samples.len() != m + 1 {
        return Err(Error::InvalidArgument {
            message: format!(
                "expected {} samples for order {m}, got {}",
                m + 1,
                samples.len()
            ),
        });
    }
    let nodes = default_nodes(m);
    // One dual Vandermonde solve per matrix entry; the right-hand side
    // runs from the smallest offset to the largest, matching the
    // ascending nodes.
    let mut entry_coeffs: [Vec<Complex64>; 4] = Default::default();
    for (slot, pick) in entry_coeffs.iter_mut().zip([
        |p: &Mat2| p.e11,
        |p: &Mat2| p.e12,
        |p: &Mat2| p.e21,
        |p: &Mat2| p.e22,
    ]) {
        let rhs: Vec<Complex64> = (0..=m).map(|i| pick(&samples[m - i].psi)).collect();
        *slot = bp_dual_solve(&nodes, &rhs)?;
    }
    // The solve returns a_nu * mu^nu; peel off the powers.
    let [e11, e12, e21, e22] = &entry_coeffs;
    let mut coeffs = Vec::with_capacity(m + 1);
    let mut mu_pow = Complex64::new(1.0, 0.0);
    for (((a, b), g), d) in e11.iter().zip(e12).zip(e21).zip(e22) {
        coeffs.push(Mat2::new(a / mu_pow, b / mu_pow, g / mu_pow, d / mu_pow));
        mu_pow *= mu;
    }
    Ok(coeffs)
}

/// Adaptive Taylor fit for the generic target matrix.
pub fn adaptive_taylor(
    prob: &Problem,
    lambda0: Complex64,
    k: usize,
    alpha: Complex64,
    settings: &IntegratorSettings,
    target_acc: f64,
) -> Result<TaylorSeries> {
    adaptive_taylor_for(
        PsiTarget::GenericM,
        prob,
        lambda0,
        k,
        alpha,
        settings,
        target_acc,
    )
}

/// Adaptive Taylor fit for a chosen target matrix.
#[allow(clippy::too_many_arguments)]
pub fn adaptive_taylor_for(
    target: PsiTarget,
    prob: &Problem,
    lambda0: Complex64,
    k: usize,
    alpha: Complex64,
    settings: &IntegratorSettings,
    target_acc: f64,
) -> Result<TaylorSeries> {
    let mut sampler = |lambda: Complex64| compute_psi_for(target, prob, lambda, alpha, settings);
    adaptive_taylor_with(&mut sampler, lambda0, k, target_acc)
}

/// The adaptive engine, generic over the Psi evaluator. Samples lie at
/// `lambda0 + i * 0.025 * 2^t` for integer `t`, so doublings and order
/// increases reuse every earlier sample exactly.
pub fn adaptive_taylor_with(
    sampler: &mut dyn FnMut(Complex64) -> Result<PsiValue>,
    lambda0: Complex64,
    k: usize,
    target_acc: f64,
) -> Result<TaylorSeries> {
    if k > K_CAP {
        return Err(Error::InvalidArgument {
            message: format!("k = {k} exceeds the cap of {K_CAP}"),
        });
    }
    if !(target_acc.is_finite() && target_acc > 0.0) {
        return Err(Error::InvalidArgument {
            message: format!("target accuracy {target_acc} must be positive"),
        });
    }

    let offset_at = |t: i32| Complex64::new(0.0, BASE_MU_ABS * 2f64.powi(t));
    let mut cache: HashMap<i32, PsiValue> = HashMap::new();
    let mut history: Vec<FitStep> = Vec::new();

    // Fit of order `m` with doubling exponent `d`: samples at
    // offsets `mu/2^j = i*0.025*2^(d-j)`.
    let mut fit = |m: usize, d: i32, cache: &mut HashMap<i32, PsiValue>| -> Result<Vec<Mat2>> {
        let mut samples = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let t = d - j as i32;
            if let std::collections::hash_map::Entry::Vacant(slot) = cache.entry(t) {
                let value = sampler(lambda0 + offset_at(t)).map_err(|e| Error::Sample {
                    j,
                    source: Box::new(e),
                })?;
                slot.insert(value);
            }
            samples.push(cache[&t].clone());
        }
        fit_taylor(&samples, offset_at(d), m)
    };

    let diff_watched = |a: &[Mat2], b: &[Mat2]| -> f64 {
        (0..=k)
            .map(|nu| (a[nu] - b[nu]).sup_norm())
            .fold(0.0, f64::max)
    };

    let mut d_mu: i32 = 0;
    let mut m = k + 1;
    let mut cur = fit(m, d_mu, &mut cache)?;
    let mut prev: Option<Vec<Mat2>> = None;
    let mut last_diff = f64::INFINITY;
    history.push(FitStep {
        phase: FitPhase::RaiseOrder,
        m,
        mu: offset_at(d_mu),
        diff: f64::INFINITY,
        accepted: true,
    });

    // Phase 1: raise the order while agreement keeps improving.
    while m < M_CAP {
        let candidate = fit(m + 1, d_mu, &mut cache)?;
        let d = diff_watched(&candidate, &cur);
        if d > 2.0 * last_diff {
            history.push(FitStep {
                phase: FitPhase::RaiseOrder,
                m: m + 1,
                mu: offset_at(d_mu),
                diff: d,
                accepted: false,
            });
            break;
        }
        let improving = d < last_diff;
        prev = Some(std::mem::replace(&mut cur, candidate));
        m += 1;
        last_diff = d;
        history.push(FitStep {
            phase: FitPhase::RaiseOrder,
            m,
            mu: offset_at(d_mu),
            diff: d,
            accepted: true,
        });
        if !improving {
            break;
        }
    }

    // Phase 2: enlarge the offset while agreement keeps improving and
    // the target is still out of reach.
    loop {
        let reached = prev
            .as_deref()
            .map(|p| diff_watched(&cur, p) <= target_acc)
            .unwrap_or(false);
        if reached {
            break;
        }
        if BASE_MU_ABS * 2f64.powi(d_mu + 1) > MU_ABS_CAP {
            break;
        }
        let candidate = fit(m, d_mu + 1, &mut cache)?;
        let d = diff_watched(&candidate, &cur);
        if d > 2.0 * last_diff {
            history.push(FitStep {
                phase: FitPhase::EnlargeStep,
                m,
                mu: offset_at(d_mu + 1),
                diff: d,
                accepted: false,
            });
            break;
        }
        let improving = d < last_diff;
        prev = Some(std::mem::replace(&mut cur, candidate));
        d_mu += 1;
        last_diff = d;
        history.push(FitStep {
            phase: FitPhase::EnlargeStep,
            m,
            mu: offset_at(d_mu),
            diff: d,
            accepted: true,
        });
        if !improving {
            break;
        }
    }

    let error_estimates: Vec<f64> = match prev.as_deref() {
        Some(p) => (0..=m)
            .map(|nu| {
                if nu < p.len() {
                    (cur[nu] - p[nu]).sup_norm()
                } else {
                    cur[nu].sup_norm()
                }
            })
            .collect(),
        None => cur.iter().map(Mat2::sup_norm).collect(),
    };
    let watched = error_estimates
        .iter()
        .take(k + 1)
        .fold(0.0f64, |acc, &e| acc.max(e));
    let status = if watched <= target_acc {
        TaylorStatus::Ok
    } else {
        TaylorStatus::TargetNotReached
    };

    Ok(TaylorSeries {
        lambda0,
        mu_final: offset_at(d_mu),
        m_final: m,
        coeffs: cur,
        error_estimates,
        status,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Problem;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn psi_value(lambda: Complex64, psi: Mat2) -> PsiValue {
        PsiValue {
            lambda,
            alpha: c(1.0, 0.0),
            psi,
            label: "synthetic".to_string(),
            symmetry_defect: 0.0,
            symmetry_warning: false,
        }
    }

    #[test]
    fn fit_recovers_exact_polynomial() {
        // Psi(z) = C0 + C1 z + ... + C4 z^4 with fixed matrices.
        let cs = [
            Mat2::from_real(1.0, 0.5, 0.5, -1.0),
            Mat2::from_real(-0.25, 2.0, 2.0, 0.75),
            Mat2::from_real(0.1, -0.6, -0.6, 1.25),
            Mat2::from_real(3.0, 0.0, 0.0, -0.5),
            Mat2::from_real(-1.5, 1.0, 1.0, 0.25),
        ];
        let m = 4;
        let mu = c(0.0, 0.4);
        let eval = |z: Complex64| -> Mat2 {
            let mut acc = Mat2::zero();
            for coeff in cs.iter().rev() {
                acc = acc * z + *coeff;
            }
            acc
        };
        let samples: Vec<PsiValue> = (0..=m)
            .map(|j| {
                let z = mu * 2f64.powi(-(j as i32));
                psi_value(z, eval(z))
            })
            .collect();
        let fitted = fit_taylor(&samples, mu, m).unwrap();
        for (nu, (f, e)) in fitted.iter().zip(&cs).enumerate() {
            assert!(
                (*f - *e).sup_norm() <= 1e-8,
                "nu = {nu}: error {:.3e}",
                (*f - *e).sup_norm()
            );
        }
    }

    #[test]
    fn fit_rejects_sample_count_mismatch() {
        let samples = vec![psi_value(c(0.0, 0.1), Mat2::identity()); 3];
        assert!(matches!(
            fit_taylor(&samples, c(0.0, 0.1), 3),
            Err(Error::InvalidArgument { .. })
        ));
    }

    #[test]
    fn adaptive_fit_of_geometric_series() {
        // Psi(lambda) = 1/(1 + lambda) I has Taylor coefficients
        // (-1)^nu I at lambda0 = 0.
        let mut sampler = |lambda: Complex64| -> crate::error::Result<PsiValue> {
            let psi = Mat2::scalar(c(1.0, 0.0) / (c(1.0, 0.0) + lambda));
            Ok(psi_value(lambda, psi))
        };
        let ts = adaptive_taylor_with(&mut sampler, c(0.0, 0.0), 2, 1e-8).unwrap();
        assert!(ts.m_final >= 3);
        assert!(ts.coeffs.len() == ts.m_final + 1);
        assert_eq!(ts.error_estimates.len(), ts.coeffs.len());
        for nu in 0..=2usize {
            let expect = Mat2::scalar(c(if nu % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
            let err = (ts.coeffs[nu] - expect).sup_norm();
            assert!(err <= 1e-6, "nu = {nu}: error {err:.3e}");
            // Real data on an imaginary ray: imaginary parts sit at the
            // noise level the estimates describe.
            assert!(
                ts.coeffs[nu].im_sup_norm() <= 100.0 * ts.error_estimates[nu] + 1e-12,
                "nu = {nu}: imaginary part {:.3e} vs estimate {:.3e}",
                ts.coeffs[nu].im_sup_norm(),
                ts.error_estimates[nu]
            );
        }
    }

    #[test]
    fn history_diffs_shrink_within_each_phase() {
        let mut sampler = |lambda: Complex64| -> crate::error::Result<PsiValue> {
            let psi = Mat2::scalar(c(1.0, 0.0) / (c(1.0, 0.0) + lambda));
            Ok(psi_value(lambda, psi))
        };
        let ts = adaptive_taylor_with(&mut sampler, c(0.0, 0.0), 2, 1e-12).unwrap();
        for phase in [FitPhase::RaiseOrder, FitPhase::EnlargeStep] {
            let diffs: Vec<f64> = ts
                .history
                .iter()
                .filter(|s| s.phase == phase && s.accepted && s.diff.is_finite())
                .map(|s| s.diff)
                .collect();
            // Every accepted step but the last of its phase must improve
            // on its predecessor; the last is allowed to merely avoid
            // divergence.
            for w in diffs.windows(2).rev().skip(1) {
                assert!(w[1] < w[0], "non-improving interior step: {diffs:?}");
            }
        }
    }

    #[test]
    fn sample_offsets_are_halved_powers() {
        let prob = Problem::from_config("p = \"1\"\ns = \"0\"\nq = \"0\"\nX = 2").unwrap();
        let mu = c(0.0, 0.2);
        let samples = sample_psi(
            &prob,
            c(0.5, 0.0),
            mu,
            3,
            c(1.0, 1.0),
            &IntegratorSettings::default(),
        )
        .unwrap();
        assert_eq!(samples.len(), 4);
        for (j, s) in samples.iter().enumerate() {
            let expect = c(0.5, 0.0) + mu * 2f64.powi(-(j as i32));
            assert_eq!(s.lambda, expect);
        }
    }

    #[test]
    fn sample_rejects_real_offset() {
        let prob = Problem::from_config("p = \"1\"\ns = \"0\"\nq = \"0\"\nX = 2").unwrap();
        assert!(matches!(
            sample_psi(
                &prob,
                c(0.0, 0.0),
                c(0.1, 0.0),
                2,
                c(1.0, 1.0),
                &IntegratorSettings::default(),
            ),
            Err(Error::InvalidArgument { .. })
        ));
    }

    #[test]
    fn engine_validates_arguments() {
        let mut sampler = |lambda: Complex64| Ok(psi_value(lambda, Mat2::identity()));
        assert!(matches!(
            adaptive_taylor_with(&mut sampler, c(0.0, 0.0), 5, 1e-6),
            Err(Error::InvalidArgument { .. })
        ));
        assert!(matches!(
            adaptive_taylor_with(&mut sampler, c(0.0, 0.0), 2, 0.0),
            Err(Error::InvalidArgument { .. })
        ));
    }

    #[test]
    fn sampler_failures_identify_the_sample() {
        let mut calls = 0usize;
        let mut sampler = |lambda: Complex64| -> crate::error::Result<PsiValue> {
            calls += 1;
            if calls > 2 {
                Err(Error::InvalidArgument {
                    message: "synthetic".to_string(),
                })
            } else {
                Ok(psi_value(
                    lambda,
                    Mat2::scalar(c(1.0, 0.0) / (c(1.0, 0.0) + lambda)),
                ))
            }
        };
        match adaptive_taylor_with(&mut sampler, c(0.0, 0.0), 1, 1e-6) {
            Err(Error::Sample { .. }) => {}
            other => panic!("expected sample error, got {other:?}"),
        }
    }
}

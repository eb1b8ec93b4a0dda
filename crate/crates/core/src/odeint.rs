//! Adaptive embedded Runge-Kutta integration of 2x2 complex matrix ODEs.
//!
//! The integrator advances `Y' = f(x, Y)` for `Y` a [`Mat2`] using the
//! Dormand-Prince 5(4) pair: a fifth-order solution with an embedded
//! fourth-order error estimate, seven stages with the first-same-as-last
//! property. The step is accepted when the estimated local error passes
//! the mixed test
//!
//! ```text
//! err <= rel_tol * ||Y|| + abs_tol
//! ```
//!
//! where both `err` and `||Y||` are max-norms over the eight real
//! components of the matrix. Accepted or rejected, the next step size is
//! `h * clamp(0.9 * (tol/err)^(1/5), 0.2, 5.0)`, with growth suppressed
//! right after a rejection. Integration runs in either direction, so
//! `x0 > x1` is allowed.
//!
//! Failure modes are reported, never masked: exhausting the step
//! budget, step-size underflow (stiffness or a singularity), and any
//! error returned by the right-hand side itself.

use crate::error::{Error, Result};
use crate::mat2::Mat2;

/// Tolerances and limits for [`integrate`].
#[derive(Clone, Copy, Debug)]
pub struct IntegratorSettings {
    /// Relative local error tolerance per step.
    pub rel_tol: f64,
    /// Absolute local error tolerance per step.
    pub abs_tol: f64,
    /// Budget of attempted steps, accepted and rejected together.
    pub max_steps: u64,
    /// Magnitude of the first trial step; `None` picks a heuristic.
    pub initial_step: Option<f64>,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-9,
            max_steps: 10_000_000,
            initial_step: None,
        }
    }
}

impl IntegratorSettings {
    /// Same settings with a different relative tolerance, keeping the
    /// absolute tolerance tied to it.
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: rel_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument {
                message: format!("rel_tol = {} must be positive", self.rel_tol),
            });
        }
        if !(self.abs_tol.is_finite() && self.abs_tol >= 0.0) {
            return Err(Error::InvalidArgument {
                message: format!("abs_tol = {} must be non-negative", self.abs_tol),
            });
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument {
                message: "max_steps must be at least 1".to_string(),
            });
        }
        Ok(())
    }
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

// Fifth-order weights (also the seventh stage row).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate `Y' = rhs(x, Y)` from `(x0, y0)` to `x1`.
pub fn integrate<F>(
    mut rhs: F,
    x0: f64,
    x1: f64,
    y0: Mat2,
    settings: &IntegratorSettings,
) -> Result<Mat2>
where
    F: FnMut(f64, &Mat2) -> Result<Mat2>,
{
    settings.validate()?;
    if !(x0.is_finite() && x1.is_finite()) {
        return Err(Error::InvalidArgument {
            message: format!("integration bounds ({x0}, {x1}) must be finite"),
        });
    }
    if x0 == x1 {
        return Ok(y0);
    }
    let span = x1 - x0;
    let dir = span.signum();
    let mut h = settings
        .initial_step
        .map(|h0| h0.abs())
        .unwrap_or(span.abs() * 1e-3)
        .min(span.abs())
        * dir;

    let mut x = x0;
    let mut y = y0;
    let mut k1 = rhs(x, &y)?;
    let mut steps: u64 = 0;
    let mut rejected = false;

    loop {
        if dir * (x1 - x) <= 0.0 {
            return Ok(y);
        }
        if steps >= settings.max_steps {
            return Err(Error::StepLimit {
                x,
                max_steps: settings.max_steps,
            });
        }
        steps += 1;

        let mut last = false;
        if dir * (x + h - x1) >= 0.0 {
            h = x1 - x;
            last = true;
        }
        if h.abs() < 16.0 * f64::EPSILON * x.abs().max(x1.abs()).max(1.0) && !last {
            return Err(Error::StepUnderflow { x });
        }

        let k2 = rhs(x + C2 * h, &(y + k1 * (A21 * h)))?;
        let k3 = rhs(x + C3 * h, &(y + k1 * (A31 * h) + k2 * (A32 * h)))?;
        let k4 = rhs(
            x + C4 * h,
            &(y + k1 * (A41 * h) + k2 * (A42 * h) + k3 * (A43 * h)),
        )?;
        let k5 = rhs(
            x + C5 * h,
            &(y + k1 * (A51 * h) + k2 * (A52 * h) + k3 * (A53 * h) + k4 * (A54 * h)),
        )?;
        let k6 = rhs(
            x + h,
            &(y + k1 * (A61 * h)
                + k2 * (A62 * h)
                + k3 * (A63 * h)
                + k4 * (A64 * h)
                + k5 * (A65 * h)),
        )?;
        let y_new =
            y + k1 * (B1 * h) + k3 * (B3 * h) + k4 * (B4 * h) + k5 * (B5 * h) + k6 * (B6 * h);
        let k7 = rhs(x + h, &y_new)?;

        let err_mat = k1 * (E1 * h)
            + k3 * (E3 * h)
            + k4 * (E4 * h)
            + k5 * (E5 * h)
            + k6 * (E6 * h)
            + k7 * (E7 * h);
        let err = err_mat.max_abs_component();
        let scale = settings.abs_tol
            + settings.rel_tol * y.max_abs_component().max(y_new.max_abs_component());

        if err <= scale {
            x += h;
            y = y_new;
            k1 = k7;
            if last {
                return Ok(y);
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * (scale / err).powf(0.2)).clamp(0.2, 5.0)
            };
            h *= if rejected { factor.min(1.0) } else { factor };
            rejected = false;
        } else {
            let factor = (0.9 * (scale / err).powf(0.2)).clamp(0.2, 1.0);
            h *= factor;
            rejected = true;
        }
    }
}

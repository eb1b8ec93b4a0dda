//! Problem definitions: coefficients, truncation interval and the
//! Hamiltonian block matrix of the fourth-order equation.
//!
//! A problem is the formally self-adjoint equation
//!
//! ```text
//! (p y'')'' - (s y')' + q y = lambda w y      on [0, infinity)
//! ```
//!
//! truncated to `[0, X]` for computation. With the quasi-derivative
//! vector `z = (y, y', -(p y'')' + s y', p y'')` and the 2x2 split
//! `u = (z1, z2)`, `v = (z3, z4)`, the equation becomes the linear
//! Hamiltonian system `(-v', u')^T = S(x; lambda) (u, v)^T` with
//!
//! ```text
//! S11 = [[lambda*w - q, 0], [0, -s]]    S12 = [[0, 0], [1, 0]]
//! S21 = [[0, 1], [0, 0]]                S22 = [[0, 0], [0, 1/p]]
//! ```
//!
//! so `S` is symmetric and depends on `lambda` only through the single
//! entry `lambda*w` in `S11`.
//!
//! Problems can be built directly or read from a config file of
//! `key = value` lines: `p`, `s`, `q`, `w` are quoted expression strings
//! (`w` defaults to `"1"`), `X` is the truncation point and `label` is a
//! quoted display name. Blank lines and lines starting with `#` are
//! ignored. Validation evaluates `p` on a 1000-point grid over `(0, X]`
//! and `w` on a 1001-point grid over `[0, X]`, requiring both positive.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::mat2::Mat2;

/// The four coefficient functions of the differential equation.
#[derive(Clone, Debug)]
pub struct CoefficientSet {
    /// Leading coefficient; must be positive on `(0, X]`.
    pub p: Expr,
    /// First-order coefficient inside `(s y')'`.
    pub s: Expr,
    /// Potential term.
    pub q: Expr,
    /// Spectral weight; must be positive on `[0, X]`.
    pub w: Expr,
}

impl CoefficientSet {
    /// Parse the four coefficients from source strings.
    pub fn parse(p: &str, s: &str, q: &str, w: &str) -> Result<Self> {
        Ok(Self {
            p: Expr::parse(p)?,
            s: Expr::parse(s)?,
            q: Expr::parse(q)?,
            w: Expr::parse(w)?,
        })
    }
}

/// A validated problem on the truncated interval `[0, X]`.
#[derive(Clone, Debug)]
pub struct Problem {
    coeffs: CoefficientSet,
    truncation_x: f64,
    label: String,
}

/// The 2x2 blocks of the Hamiltonian matrix `S(x; lambda)`.
#[derive(Clone, Copy, Debug)]
pub struct SBlocks {
    pub s11: Mat2,
    pub s12: Mat2,
    pub s21: Mat2,
    pub s22: Mat2,
}

impl Problem {
    /// Validate the coefficient set on `[0, X]` and build a problem.
    pub fn new(
        coeffs: CoefficientSet,
        truncation_x: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !truncation_x.is_finite() || truncation_x <= 0.0 {
            return Err(Error::InvalidProblem {
                message: format!("truncation point X = {truncation_x} must be positive"),
            });
        }
        // p > 0 on (0, X]: x = 0 itself never enters S22 because the
        // integrator only evaluates inside the interval, but a zero of p
        // in the interior makes 1/p blow up.
        for i in 1..=1000 {
            let x = truncation_x * i as f64 / 1000.0;
            let v = coeffs.p.eval(x)?;
            if v <= 0.0 {
                return Err(Error::InvalidProblem {
                    message: format!("p({x}) = {v} is not positive"),
                });
            }
        }
        for i in 0..=1000 {
            let x = truncation_x * i as f64 / 1000.0;
            let v = coeffs.w.eval(x)?;
            if v <= 0.0 {
                return Err(Error::InvalidProblem {
                    message: format!("w({x}) = {v} is not positive"),
                });
            }
        }
        Ok(Self {
            coeffs,
            truncation_x,
            label: label.into(),
        })
    }

    /// Read a problem from config text. `origin` names the source in
    /// error messages only.
    pub fn from_config(text: &str) -> Result<Self> {
        let mut p: Option<String> = None;
        let mut s: Option<String> = None;
        let mut q: Option<String> = None;
        let mut w: Option<String> = None;
        let mut x: Option<f64> = None;
        let mut label: Option<String> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config {
                    line: line_no,
                    message: "expected `key = value`".to_string(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            let quoted = |slot: &mut Option<String>| -> Result<()> {
                if slot.is_some() {
                    return Err(Error::Config {
                        line: line_no,
                        message: format!("duplicate key `{key}`"),
                    });
                }
                let inner = value
                    .strip_prefix('"')
                    .and_then(|v| v.strip_suffix('"'))
                    .ok_or_else(|| Error::Config {
                        line: line_no,
                        message: format!("value for `{key}` must be double-quoted"),
                    })?;
                *slot = Some(inner.to_string());
                Ok(())
            };
            match key {
                "p" => quoted(&mut p)?,
                "s" => quoted(&mut s)?,
                "q" => quoted(&mut q)?,
                "w" => quoted(&mut w)?,
                "label" => quoted(&mut label)?,
                "X" => {
                    if x.is_some() {
                        return Err(Error::Config {
                            line: line_no,
                            message: "duplicate key `X`".to_string(),
                        });
                    }
                    x = Some(value.parse().map_err(|_| Error::Config {
                        line: line_no,
                        message: format!("`X = {value}` is not a real number"),
                    })?);
                }
                other => {
                    return Err(Error::Config {
                        line: line_no,
                        message: format!("unknown key `{other}`"),
                    });
                }
            }
        }

        let require = |name: &str, slot: Option<String>| {
            slot.ok_or_else(|| Error::Config {
                line: 0,
                message: format!("missing required key `{name}`"),
            })
        };
        let p = require("p", p)?;
        let s = require("s", s)?;
        let q = require("q", q)?;
        let w = w.unwrap_or_else(|| "1".to_string());
        let x = x.ok_or_else(|| Error::Config {
            line: 0,
            message: "missing required key `X`".to_string(),
        })?;
        let label = label.unwrap_or_else(|| "unlabeled".to_string());

        let coeffs = CoefficientSet::parse(&p, &s, &q, &w)?;
        Problem::new(coeffs, x, label)
    }

    /// Read a problem from a config file on disk.
    pub fn from_config_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_config(&text)
    }

    pub fn coeffs(&self) -> &CoefficientSet {
        &self.coeffs
    }

    /// Truncation point `X`.
    pub fn truncation_x(&self) -> f64 {
        self.truncation_x
    }

    /// Same problem with a different truncation point, revalidated.
    pub fn with_truncation_x(&self, truncation_x: f64) -> Result<Self> {
        Problem::new(self.coeffs.clone(), truncation_x, self.label.clone())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Evaluate the Hamiltonian blocks at `x` for spectral parameter
    /// `lambda`.
    pub fn s_blocks(&self, x: f64, lambda: Complex64) -> Result<SBlocks> {
        let p = self.coeffs.p.eval(x)?;
        let s = self.coeffs.s.eval(x)?;
        let q = self.coeffs.q.eval(x)?;
        let w = self.coeffs.w.eval(x)?;
        if p == 0.0 {
            return Err(Error::Domain {
                x,
                message: "p(x) = 0 makes 1/p singular".to_string(),
            });
        }
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let s11 = Mat2::new(lambda * w - q, zero, zero, Complex64::new(-s, 0.0));
        let s12 = Mat2::new(zero, zero, one, zero);
        let s21 = Mat2::new(zero, one, zero, zero);
        let s22 = Mat2::new(zero, zero, zero, Complex64::new(1.0 / p, 0.0));
        Ok(SBlocks { s11, s12, s21, s22 })
    }
}

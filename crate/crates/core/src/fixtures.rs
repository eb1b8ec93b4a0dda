//! Bundled example problems.
//!
//! Three fourth-order problems with known spectral behaviour, usable by
//! name from the command line and from tests:
//!
//! * `eq1`: rational coefficients engineered so that `lambda = 0` is a
//!   double Dirichlet eigenvalue; the Dirichlet residue there has full
//!   rank while the Neumann matrix is regular.
//! * `eq2`: `s = 2x^2`, `q = x^4 - 2`; both boundary conditions have an
//!   eigenvalue at `lambda = 16`, and the Dirichlet and Neumann spectra
//!   are `16(k+1)^2` and `16k^2`.
//! * `eq3`: exponential coefficients `s = 2e^x`, `q = e^(2x) - e^x`,
//!   whose Dirichlet and Neumann spectra interlace without meeting.

use crate::error::Result;
use crate::problem::Problem;

/// Config text for `eq1`.
pub const EQ1_CONFIG: &str = r#"label = "Equation 1"
p = "1"
s = "8*x^2*(x^4-3*x^2-5)/(x^2+1)^2"
q = "4*(4*x^12-24*x^10-7*x^8+96*x^6+46*x^4-60*x^2-15)/(x^2+1)^4"
w = "1"
X = 10
"#;

/// Config text for `eq2`.
pub const EQ2_CONFIG: &str = r#"label = "Equation 2"
p = "1"
s = "2*x^2"
q = "x^4-2"
w = "1"
X = 20
"#;

/// Config text for `eq3`.
pub const EQ3_CONFIG: &str = r#"label = "Equation 3"
p = "1"
s = "2*exp(x)"
q = "exp(2*x)-exp(x)"
w = "1"
X = 10
"#;

/// Config text of a bundled problem, if `name` is one.
pub fn builtin_config(name: &str) -> Option<&'static str> {
    match name {
        "eq1" => Some(EQ1_CONFIG),
        "eq2" => Some(EQ2_CONFIG),
        "eq3" => Some(EQ3_CONFIG),
        _ => None,
    }
}

/// Names of all bundled problems.
pub fn builtin_names() -> &'static [&'static str] {
    &["eq1", "eq2", "eq3"]
}

/// Parse and validate a bundled problem.
pub fn builtin(name: &str) -> Option<Result<Problem>> {
    builtin_config(name).map(Problem::from_config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_validate() {
        for name in builtin_names() {
            let prob = builtin(name).expect("known name").expect("validates");
            assert!(prob.truncation_x() > 0.0, "{name}");
        }
        assert!(builtin("eq4").is_none());
    }

    #[test]
    fn eq1_coefficients_at_origin() {
        let prob = builtin("eq1").unwrap().unwrap();
        assert_eq!(prob.coeffs().s.eval(0.0).unwrap(), 0.0);
        assert_eq!(prob.coeffs().q.eval(0.0).unwrap(), -60.0);
        assert_eq!(prob.truncation_x(), 10.0);
    }

    #[test]
    fn eq3_coefficients() {
        let prob = builtin("eq3").unwrap().unwrap();
        let x = 1.5f64;
        let s = prob.coeffs().s.eval(x).unwrap();
        let q = prob.coeffs().q.eval(x).unwrap();
        assert!((s - 2.0 * x.exp()).abs() <= 1e-12 * s.abs());
        assert!((q - ((2.0 * x).exp() - x.exp())).abs() <= 1e-12 * q.abs());
    }
}

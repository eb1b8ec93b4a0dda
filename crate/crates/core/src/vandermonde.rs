//! Björck-Pereyra solution of dual Vandermonde systems.
//!
//! The Taylor-fitting stage needs the coefficients of the polynomial
//! that interpolates function values at a handful of real nodes: the
//! system `V^T a = g`, where row `j` of `V^T` is `(1, t_j, t_j^2, ...)`.
//! Forming and factoring the matrix would both waste work and lose
//! accuracy; the Björck-Pereyra dual recurrences solve the system in
//! `O(m^2)` operations with two in-place sweeps over the right-hand
//! side: a forward divided-difference sweep producing the Newton-form
//! coefficients, then a backward elimination sweep converting them to
//! monomial coefficients.
//!
//! Nodes must be real, strictly ascending and distinct; the right-hand
//! side may be complex (each matrix entry of a Psi sample is fitted
//! independently). Degrees are capped at `m <= 12`: beyond that the
//! conditioning of the monomial basis makes the coefficients
//! meaningless in double precision, and the adaptive fitting stage never
//! asks for more than `m = 7`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on the polynomial degree.
pub const MAX_DEGREE: usize = 12;

/// A dual Vandermonde system `V^T a = g`.
#[derive(Clone, Debug)]
pub struct DualVandermondeSystem {
    nodes: Vec<f64>,
    rhs: Vec<Complex64>,
}

impl DualVandermondeSystem {
    /// Build a system after validating the node set.
    pub fn new(nodes: Vec<f64>, rhs: Vec<Complex64>) -> Result<Self> {
        validate_nodes(&nodes, rhs.len())?;
        Ok(Self { nodes, rhs })
    }

    /// System on the standard geometric nodes `2^-m, ..., 1/2, 1` with
    /// `m = rhs.len() - 1`.
    pub fn with_default_nodes(rhs: Vec<Complex64>) -> Result<Self> {
        if rhs.is_empty() {
            return Err(Error::InvalidArgument {
                message: "right-hand side must not be empty".to_string(),
            });
        }
        let nodes = default_nodes(rhs.len() - 1);
        Self::new(nodes, rhs)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn rhs(&self) -> &[Complex64] {
        &self.rhs
    }

    /// Monomial coefficients `a` with `sum_i a_i t_j^i = g_j`.
    pub fn solve(&self) -> Vec<Complex64> {
        bp_dual_sweeps(&self.nodes, self.rhs.clone())
    }
}

/// Ascending geometric nodes `2^(j-m)` for `j = 0..=m`.
pub fn default_nodes(m: usize) -> Vec<f64> {
    (0..=m).map(|j| 2f64.powi(j as i32 - m as i32)).collect()
}

/// Solve `V^T a = g` for the interpolation coefficients.
pub fn bp_dual_solve(nodes: &[f64], rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    validate_nodes(nodes, rhs.len())?;
    Ok(bp_dual_sweeps(nodes, rhs.to_vec()))
}

fn validate_nodes(nodes: &[f64], rhs_len: usize) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument {
            message: "node set must not be empty".to_string(),
        });
    }
    if nodes.len() != rhs_len {
        return Err(Error::InvalidArgument {
            message: format!(
                "{} nodes but {} right-hand side entries",
                nodes.len(),
                rhs_len
            ),
        });
    }
    let m = nodes.len() - 1;
    if m > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { m, cap: MAX_DEGREE });
    }
    if nodes.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument {
            message: "nodes must be finite".to_string(),
        });
    }
    for pair in nodes.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::NodesNotAscending);
        }
    }
    Ok(())
}

fn bp_dual_sweeps(nodes: &[f64], mut a: Vec<Complex64>) -> Vec<Complex64> {
    let n = nodes.len() - 1;
    // Forward sweep: Newton divided differences of the data.
    for k in 0..n {
        for j in (k + 1..=n).rev() {
            a[j] = (a[j] - a[j - 1]) / (nodes[j] - nodes[j - k - 1]);
        }
    }
    // Backward sweep: Newton form to monomial coefficients.
    for k in (0..n).rev() {
        for j in k..n {
            let t = a[j + 1] * nodes[k];
            a[j] -= t;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn horner(coeffs: &[Complex64], t: f64) -> Complex64 {
        coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &k| acc * t + k)
    }

    /// Dense solve of `V^T a = g` by Gaussian elimination with partial
    /// pivoting; the independent oracle for the fast sweeps.
    fn dense_solve(nodes: &[f64], rhs: &[Complex64]) -> Vec<Complex64> {
        let n = nodes.len();
        let mut m = vec![vec![c(0.0, 0.0); n + 1]; n];
        for (j, &t) in nodes.iter().enumerate() {
            let mut pw = 1.0;
            for entry in m[j].iter_mut().take(n) {
                *entry = c(pw, 0.0);
                pw *= t;
            }
            m[j][n] = rhs[j];
        }
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
                .unwrap();
            m.swap(col, pivot);
            for row in col + 1..n {
                let f = m[row][col] / m[col][col];
                let (upper, lower) = m.split_at_mut(row);
                for (target, &pv) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                    *target -= pv * f;
                }
            }
        }
        let mut out = vec![c(0.0, 0.0); n];
        for row in (0..n).rev() {
            let mut acc = m[row][n];
            for i in row + 1..n {
                acc -= m[row][i] * out[i];
            }
            out[row] = acc / m[row][row];
        }
        out
    }

    #[test]
    fn monomial_data_recovers_unit_vectors() {
        for m in 1..=7 {
            let nodes = default_nodes(m);
            for d in 0..=m {
                let rhs: Vec<Complex64> = nodes.iter().map(|&t| c(t.powi(d as i32), 0.0)).collect();
                let a = bp_dual_solve(&nodes, &rhs).unwrap();
                for (i, &ai) in a.iter().enumerate() {
                    let expect = if i == d { 1.0 } else { 0.0 };
                    assert!(
                        (ai - c(expect, 0.0)).norm() <= 1e-11,
                        "m={m} d={d} i={i}: got {ai}"
                    );
                }
            }
        }
    }

    #[test]
    fn default_nodes_are_exact_powers_of_two() {
        let nodes = default_nodes(3);
        assert_eq!(nodes, vec![0.125, 0.25, 0.5, 1.0]);
    }

    #[test]
    fn matches_dense_solve_on_well_conditioned_system() {
        let nodes = [0.9, 1.3, 1.8, 2.4, 3.1];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..25 {
            let rhs: Vec<Complex64> = (0..nodes.len())
                .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let fast = bp_dual_solve(&nodes, &rhs).unwrap();
            let dense = dense_solve(&nodes, &rhs);
            let scale = dense.iter().map(|z| z.norm()).fold(1.0, f64::max);
            for (f, d) in fast.iter().zip(&dense) {
                assert!(
                    (f - d).norm() <= 1e-12 * scale,
                    "fast {f} vs dense {d} (scale {scale:.3e})"
                );
            }
        }
    }

    #[test]
    fn residual_bound_on_default_nodes() {
        let eps = 2f64.powi(-52);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for m in 2..=8usize {
            let nodes = default_nodes(m);
            let rhs: Vec<Complex64> = (0..=m)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let a = bp_dual_solve(&nodes, &rhs).unwrap();
            let g_norm = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let residual = nodes
                .iter()
                .zip(&rhs)
                .map(|(&t, &g)| (horner(&a, t) - g).norm())
                .fold(0.0, f64::max);
            let bound = 10.0 * m as f64 * 2f64.powi((m * m) as i32) * eps * g_norm;
            assert!(
                residual <= bound,
                "m={m}: residual {residual:.3e} exceeds bound {bound:.3e}"
            );
        }
    }

    #[test]
    fn single_node_system() {
        let a = bp_dual_solve(&[1.0], &[c(3.5, -1.0)]).unwrap();
        assert_eq!(a, vec![c(3.5, -1.0)]);
    }

    #[test]
    fn node_validation() {
        let g = vec![c(1.0, 0.0); 3];
        assert!(matches!(
            bp_dual_solve(&[0.5, 0.5, 1.0], &g),
            Err(Error::NodesNotAscending)
        ));
        assert!(matches!(
            bp_dual_solve(&[1.0, 0.5, 0.25], &g),
            Err(Error::NodesNotAscending)
        ));
        assert!(matches!(
            bp_dual_solve(&[0.5, 1.0], &g),
            Err(Error::InvalidArgument { .. })
        ));
        let big = vec![c(0.0, 0.0); MAX_DEGREE + 2];
        let big_nodes: Vec<f64> = (0..MAX_DEGREE + 2).map(|i| i as f64).collect();
        assert!(matches!(
            bp_dual_solve(&big_nodes, &big),
            Err(Error::DegreeTooLarge { .. })
        ));
        assert!(matches!(
            bp_dual_solve(&[], &[]),
            Err(Error::InvalidArgument { .. })
        ));
    }

    #[test]
    fn struct_interface_round_trip() {
        let sys = DualVandermondeSystem::with_default_nodes(vec![c(1.0, 0.0); 4]).unwrap();
        assert_eq!(sys.nodes(), &[0.125, 0.25, 0.5, 1.0]);
        let a = sys.solve();
        // Constant data: a = (1, 0, 0, 0).
        assert!((a[0] - c(1.0, 0.0)).norm() <= 1e-13);
        for ai in &a[1..] {
            assert!(ai.norm() <= 1e-12);
        }
    }

    proptest! {
        /// Random degree-4 polynomials are recovered from their values
        /// on the default nodes.
        #[test]
        fn recovers_random_polynomial(
            coeffs in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 5)
        ) {
            let coeffs: Vec<Complex64> = coeffs.into_iter().map(|(re, im)| c(re, im)).collect();
            let nodes = default_nodes(4);
            let rhs: Vec<Complex64> = nodes.iter().map(|&t| horner(&coeffs, t)).collect();
            let solved = bp_dual_solve(&nodes, &rhs).unwrap();
            let scale = coeffs.iter().map(|z| z.norm()).fold(1.0, f64::max);
            for (s, e) in solved.iter().zip(&coeffs) {
                prop_assert!((s - e).norm() <= 1e-10 * scale);
            }
        }
    }
}

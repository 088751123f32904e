//! Gauss–Hermite quadrature against the standard Gaussian weight.
//!
//! Nodes and weights come from the Golub–Welsch algorithm: the Hermite
//! three-term recurrence yields a symmetric tridiagonal companion matrix
//! whose eigenvalues are the nodes and whose first eigenvector components
//! give the weights. Everything is pre-mapped to the probabilists'
//! convention, so `integrate(f)` approximates `E f(z)` for `z ~ N(0, 1)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A fixed-order quadrature rule for expectations over a standard Gaussian.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    /// Evaluation points in z-space (already scaled by sqrt(2)).
    nodes: Vec<f64>,
    /// Probability weights; they sum to 1.
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds an `n`-point rule. Exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("quadrature order must be positive".into()));
        }
        if n == 1 {
            return Ok(Self { nodes: vec![0.0], weights: vec![1.0] });
        }
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for i in 0..n - 1 {
            let off = ((i + 1) as f64 * 0.5).sqrt();
            companion[(i, i + 1)] = off;
            companion[(i + 1, i)] = off;
        }
        let eigen = companion.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = eigen
            .eigenvalues
            .iter()
            .zip(eigen.eigenvectors.row(0).iter())
            .map(|(&t, &v0)| (t, v0 * v0))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        // The rule is symmetric in exact arithmetic; enforce it so that even
        // integrands integrate to even tables bit-for-bit.
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let j = n - 1 - i;
            nodes[i] = 0.5 * (pairs[i].0 - pairs[j].0);
            weights[i] = 0.5 * (pairs[i].1 + pairs[j].1);
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        // Map from the e^{-t^2} convention to the standard normal.
        for t in &mut nodes {
            *t *= std::f64::consts::SQRT_2;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Evaluation points in z-space.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Probability weights, summing to 1.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Approximates `E f(z)` for a standard Gaussian `z`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }
}

//! The model: a mixture `xi(s) = sum_p beta_p^2 s^p` and an external field.
//!
//! Everything downstream is parameterized by the pair `(xi, h)`. The mixture
//! is stored as a finite list of `(p, beta_p)` terms with `p >= 2`; `xi`, its
//! first derivative, and `zeta = xi''` are evaluated exactly as polynomials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible interaction degree. Desk-scale models never need more,
/// and the cap bounds the polynomial degree seen by every evaluator.
pub const MAX_DEGREE: u32 = 64;

/// Temperature parameters `(beta_p)` and external field `h` of a mixed
/// p-spin model. Immutable after construction; share it by reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    betas: Vec<(u32, f64)>,
    h: f64,
}

impl MixtureSpec {
    /// Validates and normalizes a list of `(p, beta_p)` pairs plus a field.
    ///
    /// Requirements: every `p` in `2..=64` and distinct, every `beta_p >= 0`,
    /// and at least one strictly positive coefficient.
    pub fn new(betas: impl IntoIterator<Item = (u32, f64)>, h: f64) -> Result<Self> {
        let mut betas: Vec<(u32, f64)> = betas.into_iter().collect();
        betas.sort_by_key(|&(p, _)| p);
        if !h.is_finite() {
            return Err(Error::InvalidMixture("field h must be finite".into()));
        }
        let mut any_positive = false;
        for window in betas.windows(2) {
            if window[0].0 == window[1].0 {
                return Err(Error::InvalidMixture(format!(
                    "repeated interaction degree p = {}",
                    window[0].0
                )));
            }
        }
        for &(p, beta) in &betas {
            if p < 2 {
                return Err(Error::InvalidMixture(format!(
                    "interaction degree p = {p} below 2"
                )));
            }
            if p > MAX_DEGREE {
                return Err(Error::InvalidMixture(format!(
                    "interaction degree p = {p} exceeds the cap {MAX_DEGREE}"
                )));
            }
            if !beta.is_finite() || beta < 0.0 {
                return Err(Error::InvalidMixture(format!(
                    "beta_{p} = {beta} must be finite and nonnegative"
                )));
            }
            if beta > 0.0 {
                any_positive = true;
            }
        }
        if !any_positive {
            return Err(Error::InvalidMixture(
                "at least one beta_p must be strictly positive".into(),
            ));
        }
        betas.retain(|&(_, beta)| beta > 0.0);
        Ok(Self { betas, h })
    }

    /// The Sherrington–Kirkpatrick special case `xi(s) = beta^2 s^2`.
    pub fn sk(beta: f64, h: f64) -> Result<Self> {
        Self::new([(2, beta)], h)
    }

    /// Active `(p, beta_p)` terms, sorted by degree.
    pub fn betas(&self) -> &[(u32, f64)] {
        &self.betas
    }

    /// External field strength.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// `xi(s) = sum_p beta_p^2 s^p` for `s` in `[-1, 1]`.
    pub fn xi(&self, s: f64) -> Result<f64> {
        if !(s.abs() <= 1.0) {
            return Err(Error::Domain(format!("xi requires |s| <= 1, got s = {s}")));
        }
        Ok(self
            .betas
            .iter()
            .map(|&(p, beta)| beta * beta * s.powi(p as i32))
            .sum())
    }

    /// `xi'(s) = sum_p p beta_p^2 s^(p-1)` for `s` in `[0, 1]`.
    pub fn xi_prime(&self, s: f64) -> Result<f64> {
        check_unit_interval("xi_prime", s)?;
        Ok(self
            .betas
            .iter()
            .map(|&(p, beta)| f64::from(p) * beta * beta * s.powi(p as i32 - 1))
            .sum())
    }

    /// `zeta(s) = xi''(s)`, the diffusion coefficient of the Parisi PDE.
    pub fn zeta(&self, s: f64) -> Result<f64> {
        check_unit_interval("zeta", s)?;
        Ok(self
            .betas
            .iter()
            .map(|&(p, beta)| {
                f64::from(p) * f64::from(p - 1) * beta * beta * s.powi(p as i32 - 2)
            })
            .sum())
    }

    /// Exact `int_a^b s zeta(s) ds`, via the antiderivative `s xi'(s) - xi(s)`.
    ///
    /// This is the building block of the linear term of the free-energy
    /// functional, where the integrand is weighted by a piecewise-constant
    /// distribution function.
    pub fn xi_moment(&self, a: f64, b: f64) -> Result<f64> {
        check_unit_interval("xi_moment", a)?;
        check_unit_interval("xi_moment", b)?;
        if a > b {
            return Err(Error::Domain(format!(
                "xi_moment requires a <= b, got a = {a}, b = {b}"
            )));
        }
        let anti = |s: f64| -> f64 {
            self.betas
                .iter()
                .map(|&(p, beta)| f64::from(p - 1) * beta * beta * s.powi(p as i32))
                .sum()
        };
        Ok(anti(b) - anti(a))
    }
}

fn check_unit_interval(op: &str, s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{op} requires s in [0, 1], got s = {s}")))
    }
}

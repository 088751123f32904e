//! Atomic probability measures on `[0, 1]`.
//!
//! A measure is a sorted list of atoms `(q_l, w_l)`. Its distribution
//! function `alpha(s) = mu([0, s])` is the right-continuous step function
//! that drives the Parisi PDE recursion, and the metric
//! `d(mu, nu) = int_0^1 |alpha_mu - alpha_nu| ds` is the topology in which
//! the free-energy functional is continuous and strictly convex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Atoms closer than this are merged into one (weights summed).
const MERGE_TOL: f64 = 1e-12;
/// Weights below this after merging are dropped and the rest renormalized.
const DROP_TOL: f64 = 1e-14;
/// Allowed defect in `sum w_l = 1` on input.
const MASS_TOL: f64 = 1e-12;

/// An atomic probability measure on `[0, 1]`: strictly increasing atom
/// positions, positive weights summing to one, and cached cumulative mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    atoms: Vec<(f64, f64)>,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl AtomicMeasure {
    /// Builds a measure from `(position, weight)` pairs.
    ///
    /// Positions within `1e-12` of each other are merged, weights below
    /// `1e-14` after merging are dropped, and the result is renormalized
    /// (the renormalization is below every tolerance used downstream).
    pub fn new(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pairs: Vec<(f64, f64)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(Error::InvalidMeasure("a measure needs at least one atom".into()));
        }
        for &(q, w) in &pairs {
            if !q.is_finite() || !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidMeasure(format!(
                    "atom position {q} outside [0, 1]"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atom weight {w} must be finite and nonnegative"
                )));
            }
        }
        let mass: f64 = pairs.iter().map(|&(_, w)| w).sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "weights must sum to 1 within {MASS_TOL:.0e}, got {mass}"
            )));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (q, w) in pairs {
            match atoms.last_mut() {
                Some(last) if q - last.0 <= MERGE_TOL => last.1 += w,
                _ => atoms.push((q, w)),
            }
        }
        atoms.retain(|&(_, w)| w > DROP_TOL);
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("all atoms had negligible weight".into()));
        }
        let kept: f64 = atoms.iter().map(|&(_, w)| w).sum();
        let mut cumulative = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for (_, w) in &mut atoms {
            *w /= kept;
            acc += *w;
            cumulative.push(acc);
        }
        // Pin the final cumulative value so alpha(1) = 1 exactly.
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Ok(Self { atoms, cumulative })
    }

    /// The Dirac measure at `q`.
    pub fn dirac(q: f64) -> Result<Self> {
        Self::new([(q, 1.0)])
    }

    /// Atoms as `(position, weight)` pairs, sorted by position.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `alpha(s) = mu([0, s])`, evaluated right-continuously.
    pub fn alpha(&self, s: f64) -> f64 {
        // partition_point finds the first atom with q > s.
        let idx = self.atoms.partition_point(|&(q, _)| q <= s);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// The distribution function as an explicit step function.
    pub fn distribution(&self) -> StepFunction {
        StepFunction {
            breakpoints: self.atoms.iter().map(|&(q, _)| q).collect(),
            values: self.cumulative.clone(),
        }
    }

    /// `d(mu, nu) = int_0^1 |alpha_mu(s) - alpha_nu(s)| ds`, exactly.
    ///
    /// Both distribution functions are constant between the union of the
    /// atom positions, so the integral is a finite sum.
    pub fn metric_d(&self, other: &Self) -> f64 {
        let mut total = 0.0;
        for (lo, hi) in merged_breakpoint_intervals(self, other) {
            total += (self.alpha(lo) - other.alpha(lo)).abs() * (hi - lo);
        }
        total
    }

    /// The convex combination `(1 - lambda) mu + lambda nu`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain(format!(
                "mixing weight must lie in [0, 1], got {lambda}"
            )));
        }
        let pairs = self
            .atoms
            .iter()
            .map(|&(q, w)| (q, (1.0 - lambda) * w))
            .chain(other.atoms.iter().map(|&(q, w)| (q, lambda * w)))
            .filter(|&(_, w)| w > 0.0);
        Self::new(pairs)
    }

    /// The last time the two distribution functions disagree:
    /// `min { s : alpha_mu(r) = alpha_nu(r) for all r in [s, 1] }`.
    ///
    /// Returns 0 exactly when the measures coincide.
    pub fn last_disagreement(&self, other: &Self) -> f64 {
        let mut tau = 0.0f64;
        for (lo, hi) in merged_breakpoint_intervals(self, other) {
            if (self.alpha(lo) - other.alpha(lo)).abs() > 0.0 {
                tau = hi;
            }
        }
        tau
    }
}

/// Consecutive intervals `[b_j, b_{j+1})` covering `[0, 1]`, with breakpoints
/// at the union of both atom sets. Both alphas are constant on each interval.
fn merged_breakpoint_intervals(
    a: &AtomicMeasure,
    b: &AtomicMeasure,
) -> impl Iterator<Item = (f64, f64)> {
    let mut points: Vec<f64> = Vec::with_capacity(a.len() + b.len() + 2);
    points.push(0.0);
    points.extend(a.atoms.iter().map(|&(q, _)| q));
    points.extend(b.atoms.iter().map(|&(q, _)| q));
    points.push(1.0);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points.into_iter().scan(None, |prev: &mut Option<f64>, p| {
        let out = prev.map(|lo| (lo, p));
        *prev = Some(p);
        Some(out)
    })
    .flatten()
}

/// A right-continuous nondecreasing step function on `[0, 1]` with final
/// value 1 — the distribution function of an atomic measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Right-continuous evaluation; 0 before the first breakpoint.
    pub fn eval(&self, s: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b <= s);
        if idx == 0 {
            0.0
        } else {
            self.values[idx - 1]
        }
    }
}

/// Quantile discretization of an arbitrary distribution function handle.
///
/// Uses the midpoint rule: atom `l` sits at the generalized inverse of
/// `(l - 1/2) / k` with weight `1/k`, which keeps the reconstructed
/// distribution function within `1/(2k)` pointwise and hence within `1/k`
/// in the metric. When the handle turns out to be a step function with at
/// most `k` jumps, the jumps are located exactly and the input is recovered
/// verbatim instead.
pub fn discretize(alpha: impl Fn(f64) -> f64, k: usize) -> Result<AtomicMeasure> {
    if k == 0 {
        return Err(Error::Domain("discretize requires k >= 1".into()));
    }
    validate_distribution(&alpha)?;
    if let Some(atoms) = detect_step(&alpha, k) {
        return AtomicMeasure::new(atoms);
    }
    let weight = 1.0 / k as f64;
    let mut pairs = Vec::with_capacity(k);
    for l in 1..=k {
        let p = (l as f64 - 0.5) * weight;
        pairs.push((generalized_inverse(&alpha, p), weight));
    }
    AtomicMeasure::new(pairs)
}

fn validate_distribution(alpha: &impl Fn(f64) -> f64) -> Result<()> {
    const PROBES: usize = 512;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=PROBES {
        let s = i as f64 / PROBES as f64;
        let v = alpha(s);
        if !v.is_finite() || v < -1e-12 || v > 1.0 + 1e-9 {
            return Err(Error::InvalidMeasure(format!(
                "distribution function value {v} at s = {s} outside [0, 1]"
            )));
        }
        if v < prev - 1e-12 {
            return Err(Error::InvalidMeasure(format!(
                "distribution function decreases near s = {s}"
            )));
        }
        prev = prev.max(v);
    }
    if (alpha(1.0) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidMeasure(format!(
            "distribution function must reach 1 at s = 1, got {}",
            alpha(1.0)
        )));
    }
    Ok(())
}

/// `inf { s : alpha(s) >= p }` by bisection on a right-continuous alpha.
fn generalized_inverse(alpha: &impl Fn(f64) -> f64, p: f64) -> f64 {
    if alpha(0.0) >= p {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if alpha(mid) >= p {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Attempts to read the handle as a pure step function with at most
/// `max_atoms` jumps. Returns the exact jump list on success.
fn detect_step(alpha: &impl Fn(f64) -> f64, max_atoms: usize) -> Option<Vec<(f64, f64)>> {
    const SCAN: usize = 4096;
    let mut jumps: Vec<(f64, f64)> = Vec::new();
    let at_zero = alpha(0.0);
    if at_zero > 1e-12 {
        jumps.push((0.0, at_zero));
    }
    let mut stack: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut prev_s = 0.0;
    let mut prev_v = at_zero;
    for i in 1..=SCAN {
        let s = i as f64 / SCAN as f64;
        let v = alpha(s);
        if v - prev_v > 1e-12 {
            stack.push((prev_s, s, prev_v, v));
        }
        prev_s = s;
        prev_v = v;
    }
    // Localize each rising cell; split cells that still contain several jumps.
    while let Some((lo, hi, vlo, vhi)) = stack.pop() {
        if jumps.len() > max_atoms {
            return None;
        }
        if hi - lo <= MERGE_TOL {
            jumps.push((hi, vhi - vlo));
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let vmid = alpha(mid);
        if vmid - vlo > 1e-12 {
            stack.push((lo, mid, vlo, vmid));
        }
        if vhi - vmid > 1e-12 {
            stack.push((mid, hi, vmid, vhi));
        }
    }
    let total: f64 = jumps.iter().map(|&(_, w)| w).sum();
    if jumps.len() <= max_atoms && (total - 1.0).abs() <= 1e-9 {
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        Some(jumps)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_atom() -> AtomicMeasure {
        AtomicMeasure::new([(0.2, 0.5), (0.8, 0.5)]).unwrap()
    }

    #[test]
    fn distribution_of_dirac() {
        let mu = AtomicMeasure::dirac(0.3).unwrap();
        let alpha = mu.distribution();
        assert_eq!(alpha.eval(0.0), 0.0);
        assert_eq!(alpha.eval(0.29), 0.0);
        assert_eq!(alpha.eval(0.3), 1.0);
        assert_eq!(alpha.eval(1.0), 1.0);
    }

    #[test]
    fn distribution_of_dirac_at_zero_is_one() {
        let mu = AtomicMeasure::dirac(0.0).unwrap();
        for s in [0.0, 0.5, 1.0] {
            assert_eq!(mu.alpha(s), 1.0);
        }
    }

    #[test]
    fn distribution_of_two_atoms() {
        let alpha = two_atom().distribution();
        assert_eq!(alpha.eval(0.1), 0.0);
        assert_eq!(alpha.eval(0.2), 0.5);
        assert_eq!(alpha.eval(0.79), 0.5);
        assert_eq!(alpha.eval(0.8), 1.0);
    }

    #[test]
    fn metric_between_diracs_is_distance() {
        let a = AtomicMeasure::dirac(0.25).unwrap();
        let b = AtomicMeasure::dirac(0.85).unwrap();
        assert_abs_diff_eq!(a.metric_d(&b), 0.6, epsilon = 1e-15);
    }

    #[test]
    fn metric_of_identical_measures_is_zero() {
        let mu = two_atom();
        assert_eq!(mu.metric_d(&mu), 0.0);
    }

    #[test]
    fn metric_between_extreme_diracs() {
        let a = AtomicMeasure::dirac(0.0).unwrap();
        let b = AtomicMeasure::dirac(1.0).unwrap();
        assert_abs_diff_eq!(a.metric_d(&b), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn mix_of_extreme_diracs() {
        let a = AtomicMeasure::dirac(0.0).unwrap();
        let b = AtomicMeasure::dirac(1.0).unwrap();
        let m = a.mix(&b, 0.5).unwrap();
        assert_eq!(m.atoms(), &[(0.0, 0.5), (1.0, 0.5)]);
    }

    #[test]
    fn mix_with_itself_is_identity() {
        let mu = two_atom();
        let mixed = mu.mix(&mu, 0.37).unwrap();
        assert_eq!(mixed.atoms(), mu.atoms());
    }

    #[test]
    fn mix_endpoint_returns_first() {
        let a = two_atom();
        let b = AtomicMeasure::dirac(0.5).unwrap();
        assert_eq!(a.mix(&b, 0.0).unwrap().atoms(), a.atoms());
        assert_eq!(a.mix(&b, 1.0).unwrap().atoms(), b.atoms());
    }

    #[test]
    fn last_disagreement_examples() {
        let a = AtomicMeasure::dirac(0.3).unwrap();
        assert_eq!(a.last_disagreement(&a), 0.0);

        let zero = AtomicMeasure::dirac(0.0).unwrap();
        let one = AtomicMeasure::dirac(1.0).unwrap();
        assert_eq!(zero.last_disagreement(&one), 1.0);

        let b = AtomicMeasure::dirac(0.2).unwrap();
        let c = AtomicMeasure::new([(0.2, 0.5), (0.6, 0.5)]).unwrap();
        assert_eq!(b.last_disagreement(&c), 0.6);
    }

    #[test]
    fn merge_and_drop_rules() {
        let mu = AtomicMeasure::new([(0.5, 0.6), (0.5 + 1e-13, 0.4)]).unwrap();
        assert_eq!(mu.len(), 1);
        assert_eq!(mu.alpha(0.5), 1.0);

        let tiny = AtomicMeasure::new([(0.1, 1e-15), (0.9, 1.0 - 1e-15)]).unwrap();
        assert_eq!(tiny.len(), 1);
        assert_eq!(tiny.atoms()[0].0, 0.9);
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(AtomicMeasure::new([]).is_err());
        assert!(AtomicMeasure::new([(0.5, 0.9)]).is_err());
        assert!(AtomicMeasure::new([(1.5, 1.0)]).is_err());
        assert!(AtomicMeasure::new([(0.5, -0.2), (0.6, 1.2)]).is_err());
        assert!(AtomicMeasure::dirac(f64::NAN).is_err());
    }

    #[test]
    fn discretize_uniform_midpoints() {
        let mu = discretize(|s| s, 2).unwrap();
        assert_eq!(mu.atoms(), &[(0.25, 0.5), (0.75, 0.5)]);
        // Exact distance to the uniform distribution is 1/(4k).
        let d = numeric_distance(&mu, |s| s);
        assert!(d <= 0.5, "d = {d}");
        assert_abs_diff_eq!(d, 0.125, epsilon = 1e-6);
    }

    #[test]
    fn discretize_recovers_step_functions() {
        let target = AtomicMeasure::new([(0.2, 1.0 / 3.0), (0.8, 2.0 / 3.0)]).unwrap();
        let alpha = target.distribution();
        let got = discretize(|s| alpha.eval(s), 2).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got.metric_d(&target) <= 1e-9, "d = {}", got.metric_d(&target));

        // Also with an atom at 0 and more slots than atoms.
        let target = AtomicMeasure::new([(0.0, 0.25), (0.55, 0.75)]).unwrap();
        let alpha = target.distribution();
        let got = discretize(|s| alpha.eval(s), 5).unwrap();
        assert!(got.metric_d(&target) <= 1e-9);
    }

    #[test]
    fn discretize_square_law_within_bound() {
        let mu = discretize(|s| s * s, 10).unwrap();
        let d = numeric_distance(&mu, |s| s * s);
        assert!(d <= 0.1, "d = {d}");
    }

    #[test]
    fn discretize_rejects_non_monotone() {
        assert!(discretize(|s| 1.0 - s, 4).is_err());
        assert!(discretize(|s| (6.283 * s).sin().abs(), 4).is_err());
    }

    /// Riemann-sum oracle for the distance between an atomic measure and an
    /// arbitrary distribution function.
    fn numeric_distance(mu: &AtomicMeasure, alpha: impl Fn(f64) -> f64) -> f64 {
        let n = 200_000;
        (0..n)
            .map(|i| {
                let s = (i as f64 + 0.5) / n as f64;
                (mu.alpha(s) - alpha(s)).abs() / n as f64
            })
            .sum()
    }
}

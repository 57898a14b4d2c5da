//! Linearized stability analysis of ring-map equilibria: Jacobians, exact
//! 2x2 eigenvalues, spectral radii, infinity-norm sufficient conditions, and
//! the coupling-independent stability region S.

use crate::dynamics::{step_unchecked, Convention, ModelParams, StateVector};
use crate::error::{Error, Result};
use crate::linalg;
use ndarray::Array2;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Jacobian of the two-cell map at an equilibrium, with the inputs it was
/// derived from. Entries follow the two-cell weight placement:
/// `a11 = (1-c) r (1-2x)`, `a12 = c p y^(p-1)`, `a21 = c (1-p) x^(-p)`,
/// `a22 = (1-c) r (1-2y)`.
#[derive(Debug, Clone)]
pub struct Jacobian2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    /// Equilibrium the entries were evaluated at.
    pub equilibrium: (f64, f64),
    /// Parameters the entries were evaluated with.
    pub params: ModelParams,
}

impl Jacobian2 {
    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn infinity_norm(&self) -> f64 {
        (self.a11.abs() + self.a12.abs()).max(self.a21.abs() + self.a22.abs())
    }
}

fn check_equilibrium_interior(eq: &[f64]) -> Result<()> {
    for (i, &x) in eq.iter().enumerate() {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::SingularEntry {
                component: i,
                value: x,
            });
        }
    }
    Ok(())
}

/// Analytic Jacobian of the two-cell map (two-cell weight placement).
pub fn jacobian_two_cell(eq: (f64, f64), params: &ModelParams) -> Result<Jacobian2> {
    if params.n_cells() != 2 {
        return Err(Error::InvalidParameter {
            name: "n_cells",
            value: params.n_cells() as f64,
            bound: "N = 2",
        });
    }
    let c = params.scalar_coupling().ok_or(Error::InvalidParameter {
        name: "coupling",
        value: f64::NAN,
        bound: "scalar c (c_1 = c_2)",
    })?;
    let (x, y) = eq;
    check_equilibrium_interior(&[x, y])?;
    let r = params.r();
    let p = params.affinities()[0];
    Ok(Jacobian2 {
        a11: (1.0 - c) * r * (1.0 - 2.0 * x),
        a12: c * p * y.powf(p - 1.0),
        a21: c * (1.0 - p) * x.powf(-p),
        a22: (1.0 - c) * r * (1.0 - 2.0 * y),
        equilibrium: eq,
        params: params.clone(),
    })
}

/// Exact eigenvalues of a 2x2 Jacobian via the characteristic formula
/// `lambda = T/2 +- sqrt(T^2/4 - det)`, ordered `|lambda1| >= |lambda2|`.
pub fn eigenvalues_two_cell(j: &Jacobian2) -> (Complex64, Complex64) {
    let half_trace = j.trace() / 2.0;
    let disc = half_trace * half_trace - j.det();
    let (l1, l2) = if disc >= 0.0 {
        let s = disc.sqrt();
        (
            Complex64::new(half_trace + s, 0.0),
            Complex64::new(half_trace - s, 0.0),
        )
    } else {
        let s = (-disc).sqrt();
        (Complex64::new(half_trace, s), Complex64::new(half_trace, -s))
    };
    if l2.norm() > l1.norm() {
        (l2, l1)
    } else {
        (l1, l2)
    }
}

/// Scalar invariants of a two-cell equilibrium: total concentration `alpha`,
/// weighted generalized geometric mean `beta = x^p y^(1-p) / (p (1-p))`, and
/// the quadrant indicator `gamma = (1-2x)(1-2y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumInvariants {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

pub fn equilibrium_invariants(
    eq: (f64, f64),
    params: &ModelParams,
) -> Result<EquilibriumInvariants> {
    if params.n_cells() != 2 {
        return Err(Error::InvalidParameter {
            name: "n_cells",
            value: params.n_cells() as f64,
            bound: "N = 2",
        });
    }
    let (x, y) = eq;
    check_equilibrium_interior(&[x, y])?;
    let p = params.affinities()[0];
    Ok(EquilibriumInvariants {
        alpha: x + y,
        beta: x.powf(p) * y.powf(1.0 - p) / (p * (1.0 - p)),
        gamma: (1.0 - 2.0 * x) * (1.0 - 2.0 * y),
    })
}

/// Three-way linearization verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Classification {
    AsymptoticallyStable,
    Unstable,
    Indeterminate,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::AsymptoticallyStable => write!(f, "asymptotically-stable"),
            Classification::Unstable => write!(f, "unstable"),
            Classification::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

/// Classify from eigenvalue magnitudes: stable when all are < 1, unstable
/// when all are > 1, indeterminate otherwise. Inequalities are strict with no
/// tolerance band; near-critical spectra land in `Indeterminate` only via the
/// mixed case.
pub fn classify_equilibrium(magnitudes: &[f64]) -> Classification {
    let max = magnitudes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = magnitudes.iter().copied().fold(f64::INFINITY, f64::min);
    if max < 1.0 {
        Classification::AsymptoticallyStable
    } else if min > 1.0 {
        Classification::Unstable
    } else {
        Classification::Indeterminate
    }
}

/// Full linearization report at one equilibrium.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub eigen_max: f64,
    pub eigen_min: f64,
    pub classification: Classification,
    /// `eigen_max - 1`; negative margins indicate contraction.
    pub margin: f64,
    pub spectral_radius: f64,
    pub infinity_norm: f64,
    pub in_region_s: bool,
}

/// Analytic Jacobian of the N-cell ring map at an interior point.
///
/// Exactly 2N structural nonzeros: diagonal `w_phi r (1 - 2 x_i)` and the
/// cyclic band `(i, i+1 mod N) = w_psi p_i x_{i+1}^(p_i - 1)`, with weights
/// set by the convention.
pub fn jacobian_ring(
    eq: &[f64],
    params: &ModelParams,
    convention: Convention,
) -> Result<Array2<f64>> {
    let n = params.n_cells();
    if eq.len() != n {
        return Err(Error::Config(format!(
            "equilibrium has {} components but the model has {} cells",
            eq.len(),
            n
        )));
    }
    check_equilibrium_interior(eq)?;
    let r = params.r();
    let mut j = Array2::zeros((n, n));
    for i in 0..n {
        let (w_phi, w_psi) = convention.weights(params.coupling()[i]);
        let p = params.affinities()[i];
        let neighbor = eq[(i + 1) % n];
        j[(i, i)] = w_phi * r * (1.0 - 2.0 * eq[i]);
        j[(i, (i + 1) % n)] = w_psi * p * neighbor.powf(p - 1.0);
    }
    Ok(j)
}

/// Largest eigenvalue magnitude of a square matrix (N <= 1024).
pub fn spectral_radius(matrix: &Array2<f64>) -> Result<f64> {
    if matrix.nrows() > 1024 {
        return Err(Error::InvalidParameter {
            name: "matrix size",
            value: matrix.nrows() as f64,
            bound: "N <= 1024",
        });
    }
    Ok(linalg::eigenvalues(matrix)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0_f64, f64::max))
}

/// Maximum absolute row sum; an upper bound on the spectral radius.
pub fn infinity_norm(matrix: &Array2<f64>) -> f64 {
    linalg::infinity_norm(matrix)
}

/// Row-wise sufficient condition for contraction in the infinity norm:
/// `w_phi r |1 - 2 x_i| + w_psi p_i x_{i+1}^(p_i - 1) < 1` for every row.
/// When true the spectral radius is below 1.
pub fn norm_stability_check(
    eq: &[f64],
    params: &ModelParams,
    convention: Convention,
) -> Result<bool> {
    let n = params.n_cells();
    if eq.len() != n {
        return Err(Error::Config(format!(
            "equilibrium has {} components but the model has {} cells",
            eq.len(),
            n
        )));
    }
    check_equilibrium_interior(eq)?;
    let r = params.r();
    for i in 0..n {
        let (w_phi, w_psi) = convention.weights(params.coupling()[i]);
        let p = params.affinities()[i];
        let neighbor = eq[(i + 1) % n];
        let row = w_phi * r * (1.0 - 2.0 * eq[i]).abs() + w_psi * p * neighbor.powf(p - 1.0);
        if row >= 1.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The window `((r-1)/2r, (r+1)/2r)` where `r |1 - 2x| < 1`. Requires r > 1
/// for a positive lower endpoint.
pub fn r_window(r: f64) -> Result<(f64, f64)> {
    if r <= 1.0 {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            bound: "r > 1",
        });
    }
    Ok(((r - 1.0) / (2.0 * r), (r + 1.0) / (2.0 * r)))
}

/// Lower concentration bound `p^(1/(1-p))` contributed by an affinity p.
/// Strictly increasing on (0, 1) with supremum `1/e` as p -> 1.
pub fn affinity_floor(p: f64) -> f64 {
    p.powf(1.0 / (1.0 - p))
}

/// Supremum of [`affinity_floor`] over admissible affinities, optionally
/// capped at `p <= cap`.
pub fn affinity_floor_sup(p_cap: Option<f64>) -> f64 {
    match p_cap {
        Some(cap) => affinity_floor(cap),
        None => std::f64::consts::E.recip(),
    }
}

/// Membership in the coupling-independent stability region S: every component
/// must satisfy `max((r-1)/2r, p_{i-1}^(1/(1-p_{i-1}))) < x_i < (r+1)/2r`,
/// with the affinity index wrapping cyclically (p_0 = p_N).
pub fn region_s_membership(eq: &[f64], params: &ModelParams) -> bool {
    let n = params.n_cells();
    if eq.len() != n {
        return false;
    }
    let r = params.r();
    let lo_r = (r - 1.0) / (2.0 * r);
    let hi_r = (r + 1.0) / (2.0 * r);
    for i in 0..n {
        let p_prev = params.affinities()[(i + n - 1) % n];
        let lo = lo_r.max(affinity_floor(p_prev));
        if !(eq[i] > lo && eq[i] < hi_r) {
            return false;
        }
    }
    true
}

/// Per-component hypercube bounds bracketing region S over an r-interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBounds {
    /// Interval guaranteed inside S for every r in the range and every
    /// admissible affinity assignment.
    pub inner: (f64, f64),
    /// Interval containing S for every r in the range.
    pub outer: (f64, f64),
}

/// Bracketing hypercube intervals for region S with r ranging over
/// `[r_lo, r_hi]` and affinities optionally capped at `p <= p_cap`.
///
/// The r-window shrinks as r grows, so the inner interval is the window at
/// `r_hi` (clipped from below by the affinity floor supremum) and the outer
/// interval is the window at `r_lo`.
pub fn region_s_bounds(r_lo: f64, r_hi: f64, p_cap: Option<f64>) -> Result<RegionBounds> {
    if r_lo <= 1.0 {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r_lo,
            bound: "r > 1",
        });
    }
    if !(r_hi >= r_lo && r_hi <= 4.0) {
        return Err(Error::InvalidParameter {
            name: "r_hi",
            value: r_hi,
            bound: "r_lo <= r_hi <= 4",
        });
    }
    if let Some(cap) = p_cap {
        if !(cap > 0.0 && cap < 1.0) {
            return Err(Error::InvalidParameter {
                name: "p_cap",
                value: cap,
                bound: "0 < p_cap < 1",
            });
        }
    }
    let sup = affinity_floor_sup(p_cap);
    let (lo_hi_r, hi_hi_r) = r_window(r_hi)?;
    let (lo_lo_r, hi_lo_r) = r_window(r_lo)?;
    Ok(RegionBounds {
        inner: (lo_hi_r.max(sup), hi_hi_r),
        outer: (lo_lo_r, hi_lo_r),
    })
}

/// Verdict of the iterate-convergence probe around a certified fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOutcome {
    Converged,
    Diverged,
    Inconclusive,
}

/// Iterate the map from random starts within `radius` of a certified fixed
/// point. `Converged` when every probe ends within `radius/10` of the fixed
/// point by the horizon; `Diverged` as soon as any probe leaves the
/// `10 * radius` ball (or the open unit cube); `Inconclusive` otherwise.
#[allow(clippy::too_many_arguments)]
pub fn empirical_stability_probe(
    params: &ModelParams,
    convention: Convention,
    eq: &StateVector,
    radius: f64,
    n_probes: usize,
    horizon: usize,
    seed: u64,
) -> Result<ProbeOutcome> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "radius",
            value: radius,
            bound: "radius > 0",
        });
    }
    if eq.len() != params.n_cells() {
        return Err(Error::Config(format!(
            "equilibrium has {} components but the model has {} cells",
            eq.len(),
            params.n_cells()
        )));
    }
    let center = eq.components();
    let fx = step_unchecked(center, params, convention);
    let residual = fx
        .iter()
        .zip(center)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    if residual >= 1e-10 {
        return Err(Error::InvalidParameter {
            name: "equilibrium residual",
            value: residual,
            bound: "||F(x) - x||_inf < 1e-10",
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = center.len();
    let mut all_close = true;
    for _ in 0..n_probes {
        let mut state: Vec<f64> = Vec::with_capacity(n);
        for &xc in center {
            let mut v = xc + rng.random_range(-radius..radius);
            let mut tries = 0;
            while !(v > 0.0 && v < 1.0) && tries < 64 {
                v = xc + rng.random_range(-radius..radius);
                tries += 1;
            }
            state.push(v.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON));
        }
        for _ in 0..horizon {
            if state.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
                return Ok(ProbeOutcome::Diverged);
            }
            state = step_unchecked(&state, params, convention);
            let dist = state
                .iter()
                .zip(center)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max);
            if !dist.is_finite() || dist > 10.0 * radius {
                return Ok(ProbeOutcome::Diverged);
            }
        }
        let final_dist = state
            .iter()
            .zip(center)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        if final_dist >= radius / 10.0 {
            all_close = false;
        }
    }
    Ok(if all_close {
        ProbeOutcome::Converged
    } else {
        ProbeOutcome::Inconclusive
    })
}

/// Two-cell linearization report at one equilibrium.
pub fn two_cell_report(eq: (f64, f64), params: &ModelParams) -> Result<StabilityReport> {
    let j = jacobian_two_cell(eq, params)?;
    let (l1, l2) = eigenvalues_two_cell(&j);
    let (m1, m2) = (l1.norm(), l2.norm());
    Ok(StabilityReport {
        eigen_max: m1,
        eigen_min: m2,
        classification: classify_equilibrium(&[m1, m2]),
        margin: m1 - 1.0,
        spectral_radius: m1,
        infinity_norm: j.infinity_norm(),
        in_region_s: region_s_membership(&[eq.0, eq.1], params),
    })
}

/// N-cell linearization report at one equilibrium.
pub fn ring_report(
    eq: &[f64],
    params: &ModelParams,
    convention: Convention,
) -> Result<StabilityReport> {
    let j = jacobian_ring(eq, params, convention)?;
    let eigen = linalg::eigenvalues(&j)?;
    let mags: Vec<f64> = eigen.iter().map(|z| z.norm()).collect();
    let max = mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = mags.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(StabilityReport {
        eigen_max: max,
        eigen_min: min,
        classification: classify_equilibrium(&mags),
        margin: max - 1.0,
        spectral_radius: max,
        infinity_norm: infinity_norm(&j),
        in_region_s: region_s_membership(eq, params),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn jacobian_uncoupled_is_diagonal() {
        let params = ModelParams::two_cell(3.0, 0.0, 0.4).unwrap();
        let j = jacobian_two_cell((0.3, 0.7), &params).unwrap();
        assert_eq!(j.a12, 0.0);
        assert_eq!(j.a21, 0.0);
        assert_relative_eq!(j.a11, 3.0 * 0.4, epsilon = 1e-15);
        assert_relative_eq!(j.a22, 3.0 * -0.4, epsilon = 1e-15);
        let (l1, l2) = eigenvalues_two_cell(&j);
        assert_relative_eq!(l1.norm(), 1.2, epsilon = 1e-15);
        assert_relative_eq!(l2.norm(), 1.2, epsilon = 1e-15);
    }

    #[test]
    fn jacobian_center_point_weak_coupling() {
        let params = ModelParams::two_cell(4.0, 0.02, 0.5).unwrap();
        let j = jacobian_two_cell((0.5, 0.5), &params).unwrap();
        assert_eq!(j.a11, 0.0);
        assert_eq!(j.a22, 0.0);
        let expect = 0.02 * 0.5 * 0.5_f64.powf(-0.5);
        assert_relative_eq!(j.a12, expect, epsilon = 1e-15);
        assert_relative_eq!(j.a21, expect, epsilon = 1e-15);
        assert_relative_eq!(expect, 0.0141421356, epsilon = 1e-9);
        let (l1, _) = eigenvalues_two_cell(&j);
        assert_relative_eq!(l1.norm(), expect, epsilon = 1e-15);
        assert!(l1.norm() < 1.0);
    }

    #[test]
    fn jacobian_symmetric_at_balanced_affinity() {
        let params = ModelParams::two_cell(3.5, 0.3, 0.5).unwrap();
        let j = jacobian_two_cell((0.4, 0.4), &params).unwrap();
        assert_eq!(j.a12, j.a21);
    }

    #[test]
    fn jacobian_boundary_is_singular_entry() {
        let params = ModelParams::two_cell(3.5, 0.3, 0.5).unwrap();
        assert!(matches!(
            jacobian_two_cell((0.0, 0.4), &params),
            Err(Error::SingularEntry { component: 0, .. })
        ));
        assert!(matches!(
            jacobian_two_cell((0.4, 1.0), &params),
            Err(Error::SingularEntry { component: 1, .. })
        ));
    }

    #[test]
    fn classification_three_cases() {
        assert_eq!(
            classify_equilibrium(&[0.5, 0.3]),
            Classification::AsymptoticallyStable
        );
        assert_eq!(classify_equilibrium(&[1.5, 1.2]), Classification::Unstable);
        assert_eq!(
            classify_equilibrium(&[1.5, 0.3]),
            Classification::Indeterminate
        );
    }

    #[test]
    fn identity_like_jacobian_eigenvalues() {
        let params = ModelParams::two_cell(2.0, 0.0, 0.5).unwrap();
        let mut j = jacobian_two_cell((0.3, 0.3), &params).unwrap();
        j.a11 = 0.5;
        j.a22 = 0.5;
        j.a12 = 0.0;
        j.a21 = 0.0;
        let (l1, l2) = eigenvalues_two_cell(&j);
        assert_eq!((l1.re, l2.re), (0.5, 0.5));
    }

    #[test]
    fn ring_jacobian_reduces_to_two_cell() {
        let params = ModelParams::two_cell(3.8, 0.02, 0.3).unwrap();
        let eq = [0.45, 0.62];
        let j2 = jacobian_two_cell((eq[0], eq[1]), &params).unwrap();
        let jr = jacobian_ring(&eq, &params, Convention::TwoCell).unwrap();
        assert_eq!(jr[(0, 0)], j2.a11);
        assert_eq!(jr[(0, 1)], j2.a12);
        assert_eq!(jr[(1, 0)], j2.a21);
        assert_eq!(jr[(1, 1)], j2.a22);
    }

    #[test]
    fn ring_jacobian_full_logistic_weight_is_diagonal() {
        let params = ModelParams::uniform_ring(3.0, 1.0, 4).unwrap();
        let eq = [0.2, 0.4, 0.6, 0.8];
        let j = jacobian_ring(&eq, &params, Convention::Ring).unwrap();
        for i in 0..4 {
            for k in 0..4 {
                if i == k {
                    assert_relative_eq!(
                        j[(i, k)],
                        3.0 * (1.0 - 2.0 * eq[i]),
                        epsilon = 1e-15
                    );
                } else {
                    assert_eq!(j[(i, k)], 0.0);
                }
            }
        }
    }

    #[test]
    fn ring_jacobian_three_cell_hand_case() {
        let params =
            ModelParams::new(3.8, vec![0.5, 0.6, 0.7], vec![0.3, 0.3, 0.4]).unwrap();
        let eq = [0.4, 0.5, 0.6];
        let j = jacobian_ring(&eq, &params, Convention::Ring).unwrap();
        assert_relative_eq!(j[(0, 0)], 0.5 * 3.8 * 0.2, epsilon = 1e-15);
        assert_relative_eq!(j[(1, 1)], 0.6 * 3.8 * 0.0, epsilon = 1e-15);
        assert_relative_eq!(j[(2, 2)], 0.7 * 3.8 * -0.2, epsilon = 1e-14);
        assert_relative_eq!(
            j[(0, 1)],
            0.5 * 0.3 * 0.5_f64.powf(-0.7),
            epsilon = 1e-15
        );
        assert_relative_eq!(
            j[(1, 2)],
            0.4 * 0.3 * 0.6_f64.powf(-0.7),
            epsilon = 1e-15
        );
        assert_relative_eq!(
            j[(2, 0)],
            0.3 * 0.4 * 0.4_f64.powf(-0.6),
            epsilon = 1e-15
        );
        // exactly 2N structural nonzeros
        let nonzeros = j.iter().filter(|v| **v != 0.0).count();
        assert!(nonzeros <= 6);
    }

    #[test]
    fn finite_difference_jacobian_agreement_quick() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = 1e-6;
        for _ in 0..10 {
            let n = rng.random_range(2..6);
            let coupling: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..0.95)).collect();
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            let affinities: Vec<f64> = raw.iter().map(|v| v / sum).collect();
            let params =
                ModelParams::new(rng.random_range(1.0..4.0), coupling, affinities).unwrap();
            let eq: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..0.9)).collect();
            for convention in [Convention::TwoCell, Convention::Ring] {
                let j = jacobian_ring(&eq, &params, convention).unwrap();
                for col in 0..n {
                    let mut plus = eq.clone();
                    let mut minus = eq.clone();
                    plus[col] += h;
                    minus[col] -= h;
                    let fp = step_unchecked(&plus, &params, convention);
                    let fm = step_unchecked(&minus, &params, convention);
                    for row in 0..n {
                        let fd = (fp[row] - fm[row]) / (2.0 * h);
                        let scale = j[(row, col)].abs().max(1.0);
                        assert!(
                            (j[(row, col)] - fd).abs() <= 1e-6 * scale,
                            "entry ({row},{col}): analytic {} vs fd {fd}",
                            j[(row, col)]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn norm_check_examples() {
        // centered equilibrium: rows are convex blends of 0 and a sub-unit term
        let params = ModelParams::uniform_ring(3.9, 0.5, 3).unwrap();
        assert!(norm_stability_check(&[0.5; 3], &params, Convention::Ring).unwrap());

        // near-zero concentration with r = 4 and weak coupling: first term ~ 4
        let params = ModelParams::two_cell(4.0, 0.02, 0.5).unwrap();
        assert!(!norm_stability_check(&[0.01, 0.5], &params, Convention::TwoCell).unwrap());

        // two-cell c = 0 at the center: row sums are exactly 0
        let params = ModelParams::two_cell(4.0, 0.0, 0.5).unwrap();
        assert!(norm_stability_check(&[0.5, 0.5], &params, Convention::TwoCell).unwrap());
    }

    #[test]
    fn norm_check_matches_jacobian_infinity_norm() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let n = rng.random_range(2..8);
            let coupling: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..0.99)).collect();
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            let affinities: Vec<f64> = raw.iter().map(|v| v / sum).collect();
            let params =
                ModelParams::new(rng.random_range(1.5..4.0), coupling, affinities).unwrap();
            let eq: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..0.95)).collect();
            let j = jacobian_ring(&eq, &params, Convention::Ring).unwrap();
            let by_rows = norm_stability_check(&eq, &params, Convention::Ring).unwrap();
            assert_eq!(by_rows, infinity_norm(&j) < 1.0);
        }
    }

    #[test]
    fn region_window_values() {
        let (lo, hi) = r_window(4.0).unwrap();
        assert_eq!((lo, hi), (0.375, 0.625));
        let (lo, hi) = r_window(2.0).unwrap();
        assert_eq!((lo, hi), (0.25, 0.75));
        let (lo, hi) = r_window(3.785).unwrap();
        assert_relative_eq!(lo, 2.785 / 7.57, epsilon = 1e-15);
        assert_relative_eq!(hi, 4.785 / 7.57, epsilon = 1e-15);
        assert!(r_window(1.0).is_err());
    }

    #[test]
    fn affinity_floor_values_and_supremum() {
        assert_relative_eq!(affinity_floor(0.8), 0.32768, epsilon = 1e-15);
        // numeric maximization over (0,1) approaches 1/e
        let sup_numeric = (1..10_000)
            .map(|i| affinity_floor(i as f64 / 10_000.0))
            .fold(0.0_f64, f64::max);
        let sup = affinity_floor_sup(None);
        assert!(sup_numeric < sup);
        assert!(sup - sup_numeric < 2e-5);
        assert_relative_eq!(sup, 0.36788, epsilon = 1e-4);
    }

    #[test]
    fn region_membership_examples() {
        let params = ModelParams::uniform_ring(3.9, 0.4, 4).unwrap();
        assert!(region_s_membership(&[0.5; 4], &params));
        // outside the r-window
        assert!(!region_s_membership(&[0.5, 0.5, 0.7, 0.5], &params));
        // high affinity raises the floor above 0.4: p = 0.8 needs x > 0.32768
        let params = ModelParams::new(
            3.9,
            vec![0.5, 0.5],
            vec![0.8, 0.19999999999999998],
        )
        .unwrap();
        // component 1 is constrained by p_0 = 0.8
        assert!(region_s_membership(&[0.5, 0.5], &params));
        // membership is independent of the coupling values
        let recoupled =
            ModelParams::new(3.9, vec![0.05, 0.95], vec![0.8, 0.19999999999999998]).unwrap();
        assert!(region_s_membership(&[0.5, 0.5], &recoupled));
    }

    #[test]
    fn region_bounds_constants() {
        let b = region_s_bounds(3.785, 4.0, None).unwrap();
        assert!((b.inner.0 - 0.375).abs() < 5e-5);
        assert!((b.inner.1 - 0.625).abs() < 5e-5);
        assert!((b.outer.0 - 0.3679).abs() < 5e-5);
        assert!((b.outer.1 - 0.6321).abs() < 5e-5);
        let capped = region_s_bounds(3.0, 4.0, Some(0.8)).unwrap();
        assert!((capped.outer.0 - 0.3333).abs() < 5e-5);
        assert!((capped.outer.1 - 0.6667).abs() < 5e-5);
        assert!((capped.inner.0 - 0.375).abs() < 5e-5);
        assert!(region_s_bounds(0.9, 2.0, None).is_err());
    }

    #[test]
    fn probe_contracting_fixed_point_converges() {
        // decoupled logistic at r = 2: fixed point 0.5, eigenvalues 0
        let params = ModelParams::new(2.0, vec![0.0; 2], vec![0.5, 0.5]).unwrap();
        let eq = StateVector::new(vec![0.5, 0.5]).unwrap();
        let outcome = empirical_stability_probe(
            &params,
            Convention::TwoCell,
            &eq,
            1e-3,
            16,
            500,
            7,
        )
        .unwrap();
        assert_eq!(outcome, ProbeOutcome::Converged);
    }

    #[test]
    fn probe_expanding_fixed_point_diverges() {
        // decoupled logistic at r = 3.6: fixed point 1 - 1/r, |eigen| = 1.6
        let r = 3.6;
        let params = ModelParams::new(r, vec![0.0; 2], vec![0.5, 0.5]).unwrap();
        let fp = 1.0 - 1.0 / r;
        let eq = StateVector::new(vec![fp, fp]).unwrap();
        let outcome = empirical_stability_probe(
            &params,
            Convention::TwoCell,
            &eq,
            1e-4,
            16,
            5000,
            7,
        )
        .unwrap();
        assert_eq!(outcome, ProbeOutcome::Diverged);
    }

    #[test]
    fn probe_rejects_uncertified_point() {
        let params = ModelParams::two_cell(3.8, 0.02, 0.5).unwrap();
        let eq = StateVector::new(vec![0.3, 0.5]).unwrap();
        assert!(empirical_stability_probe(
            &params,
            Convention::TwoCell,
            &eq,
            1e-3,
            4,
            100,
            1
        )
        .is_err());
    }

    #[test]
    fn two_cell_report_fields_are_consistent() {
        let params = ModelParams::two_cell(4.0, 0.02, 0.5).unwrap();
        let rep = two_cell_report((0.5, 0.5), &params).unwrap();
        assert_eq!(rep.classification, Classification::AsymptoticallyStable);
        assert!(rep.eigen_max >= rep.eigen_min);
        assert_relative_eq!(rep.margin, rep.eigen_max - 1.0, epsilon = 1e-15);
        assert_eq!(rep.spectral_radius, rep.eigen_max);
        assert!(rep.spectral_radius <= rep.infinity_norm + 1e-9);
        assert!(rep.in_region_s);
    }

    #[test]
    fn equilibrium_invariants_formulas() {
        let params = ModelParams::two_cell(3.0, 0.1, 0.25).unwrap();
        let inv = equilibrium_invariants((0.4, 0.6), &params).unwrap();
        assert_relative_eq!(inv.alpha, 1.0, epsilon = 1e-15);
        assert_relative_eq!(
            inv.beta,
            0.4_f64.powf(0.25) * 0.6_f64.powf(0.75) / (0.25 * 0.75),
            epsilon = 1e-15
        );
        assert_relative_eq!(inv.gamma, 0.2 * -0.2, epsilon = 1e-15);
        assert!(inv.beta > 0.0);
        // gamma flips sign across the x = 0.5 line
        let inv2 = equilibrium_invariants((0.6, 0.6), &params).unwrap();
        assert!(inv.gamma * inv2.gamma < 0.0);
    }
}

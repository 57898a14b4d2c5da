//! Coupled logistic-map dynamics on two-cell and N-cell ring topologies.
//!
//! Each cell carries a normalized substance concentration in (0, 1). One map
//! application blends intra-cellular logistic dynamics `phi(x) = r x (1 - x)`
//! with a power-law inflow `psi(x) = x^p` from the next cell around the ring.
//! Two established conventions exist for which of the two terms carries the
//! coupling weight `c`; both are exposed (see [`Convention`]) and tests pin
//! each to its defining equation.

use crate::error::{Error, Result};

/// Placement of the coupling weight in the blended update.
///
/// * `TwoCell`: logistic term weighted by `1 - c`, inflow by `c`, i.e.
///   `x' = (1 - c) r x (1 - x) + c y^p`.
/// * `Ring`: logistic term weighted by `c`, inflow by `1 - c`, i.e.
///   `x' = c r x (1 - x) + (1 - c) y^p`.
///
/// The two are related by `c_ring = 1 - c_two_cell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    TwoCell,
    Ring,
}

impl Convention {
    /// Weights `(w_logistic, w_inflow)` applied to the two terms for coupling `c`.
    #[inline]
    pub fn weights(self, c: f64) -> (f64, f64) {
        match self {
            Convention::TwoCell => (1.0 - c, c),
            Convention::Ring => (c, 1.0 - c),
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Convention::TwoCell => write!(f, "two-cell"),
            Convention::Ring => write!(f, "ring"),
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-cell" | "two_cell" | "twocell" => Ok(Convention::TwoCell),
            "ring" => Ok(Convention::Ring),
            other => Err(Error::Config(format!(
                "unknown convention `{other}` (expected `two-cell` or `ring`)"
            ))),
        }
    }
}

/// Validated model parameters for an N-cell ring (N = 2 covers the two-cell map).
///
/// Invariants enforced at construction:
/// * `0 < r <= 4`
/// * every coupling `c_i` in `[0, 1]` (the closed endpoints are the exact
///   no-coupling / pure-coupling limits exercised throughout the test suite)
/// * every affinity `p_i` in `(0, 1)` with `sum p_i = 1` to within 1e-12
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    r: f64,
    coupling: Vec<f64>,
    affinities: Vec<f64>,
}

/// Tolerance on the affinity-sum constraint `p_1 + ... + p_N = 1`.
pub const AFFINITY_SUM_TOL: f64 = 1e-12;

impl ModelParams {
    pub fn new(r: f64, coupling: Vec<f64>, affinities: Vec<f64>) -> Result<Self> {
        if coupling.len() != affinities.len() {
            return Err(Error::Config(format!(
                "coupling has {} entries but affinities has {}",
                coupling.len(),
                affinities.len()
            )));
        }
        let n = coupling.len();
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "n_cells",
                value: n as f64,
                bound: "N >= 2",
            });
        }
        if !(r > 0.0 && r <= 4.0) {
            return Err(Error::InvalidParameter {
                name: "r",
                value: r,
                bound: "0 < r <= 4",
            });
        }
        for &c in &coupling {
            if !(0.0..=1.0).contains(&c) || !c.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "coupling",
                    value: c,
                    bound: "0 <= c <= 1",
                });
            }
        }
        let mut sum = 0.0;
        for &p in &affinities {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter {
                    name: "affinity",
                    value: p,
                    bound: "0 < p < 1",
                });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > AFFINITY_SUM_TOL {
            return Err(Error::InvalidParameter {
                name: "affinity sum",
                value: sum,
                bound: "p_1 + ... + p_N = 1 (within 1e-12)",
            });
        }
        Ok(Self {
            r,
            coupling,
            affinities,
        })
    }

    /// Two-cell parameters with scalar coupling `c` and affinities `(p, 1 - p)`.
    pub fn two_cell(r: f64, c: f64, p: f64) -> Result<Self> {
        Self::new(r, vec![c, c], vec![p, 1.0 - p])
    }

    /// Ring of `n` cells with uniform coupling `c` and uniform affinities `1/n`.
    pub fn uniform_ring(r: f64, c: f64, n: usize) -> Result<Self> {
        Self::new(r, vec![c; n], vec![1.0 / n as f64; n])
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn coupling(&self) -> &[f64] {
        &self.coupling
    }

    pub fn affinities(&self) -> &[f64] {
        &self.affinities
    }

    pub fn n_cells(&self) -> usize {
        self.coupling.len()
    }

    /// Scalar coupling, if all cells share one value.
    pub fn scalar_coupling(&self) -> Option<f64> {
        let c = self.coupling[0];
        self.coupling.iter().all(|&ci| ci == c).then_some(c)
    }
}

/// A concentration state: one value per cell, each strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<f64>);

impl StateVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "state length",
                value: components.len() as f64,
                bound: "N >= 2",
            });
        }
        for (i, &x) in components.iter().enumerate() {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::RangeEscape {
                    component: i,
                    value: x,
                });
            }
        }
        Ok(Self(components))
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for StateVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A simulated orbit after transient discard.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<StateVector>,
    pub n_transient: usize,
    pub params: ModelParams,
    pub convention: Convention,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Scalar time series of the concentration in cell `k`.
    pub fn component_series(&self, k: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[k]).collect()
    }
}

/// The logistic map `r x (1 - x)`.
///
/// `x` may sit on the closed interval endpoints; the result lies in `[0, r/4]`.
pub fn logistic(r: f64, x: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 4.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            bound: "0 < r <= 4",
        });
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            bound: "0 <= x <= 1",
        });
    }
    Ok(r * x * (1.0 - x))
}

fn check_interior(components: &[f64]) -> Result<()> {
    for (i, &x) in components.iter().enumerate() {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::RangeEscape {
                component: i,
                value: x,
            });
        }
    }
    Ok(())
}

fn require_two_cell_scalar(params: &ModelParams) -> Result<f64> {
    if params.n_cells() != 2 {
        return Err(Error::InvalidParameter {
            name: "n_cells",
            value: params.n_cells() as f64,
            bound: "N = 2",
        });
    }
    params
        .scalar_coupling()
        .ok_or(Error::InvalidParameter {
            name: "coupling",
            value: f64::NAN,
            bound: "scalar c (c_1 = c_2)",
        })
}

/// One application of the two-cell map
/// `x' = (1 - c) r x (1 - x) + c y^p`, `y' = (1 - c) r y (1 - y) + c x^(1 - p)`.
pub fn two_cell_step(state: (f64, f64), params: &ModelParams) -> Result<(f64, f64)> {
    let c = require_two_cell_scalar(params)?;
    let (x, y) = state;
    check_interior(&[x, y])?;
    let r = params.r();
    let p = params.affinities()[0];
    let x_next = (1.0 - c) * (r * x * (1.0 - x)) + c * y.powf(p);
    let y_next = (1.0 - c) * (r * y * (1.0 - y)) + c * x.powf(1.0 - p);
    check_interior(&[x_next, y_next])?;
    Ok((x_next, y_next))
}

/// One map application without output range validation. Input must be interior.
pub(crate) fn step_unchecked(
    state: &[f64],
    params: &ModelParams,
    convention: Convention,
) -> Vec<f64> {
    let n = state.len();
    let r = params.r();
    let mut next = Vec::with_capacity(n);
    for i in 0..n {
        let (w_phi, w_psi) = convention.weights(params.coupling()[i]);
        let x = state[i];
        let neighbor = state[(i + 1) % n];
        let phi = r * x * (1.0 - x);
        let psi = neighbor.powf(params.affinities()[i]);
        next.push(w_phi * phi + w_psi * psi);
    }
    next
}

/// One application of the N-cell ring map.
///
/// Component `i` becomes `w_phi * r x_i (1 - x_i) + w_psi * x_{i+1}^{p_i}`
/// with cyclic indexing and weights set by the convention.
pub fn ring_step(
    state: &StateVector,
    params: &ModelParams,
    convention: Convention,
) -> Result<StateVector> {
    if state.len() != params.n_cells() {
        return Err(Error::Config(format!(
            "state has {} components but the model has {} cells",
            state.len(),
            params.n_cells()
        )));
    }
    let next = step_unchecked(state.components(), params, convention);
    check_interior(&next)?;
    Ok(StateVector(next))
}

/// Iterate the map `n_total` times from `x0`, discarding the first
/// `n_transient` iterates. The returned trajectory holds iterates
/// `n_transient + 1 ..= n_total` (the initial state is not included).
pub fn simulate(
    params: &ModelParams,
    convention: Convention,
    x0: &StateVector,
    n_total: usize,
    n_transient: usize,
) -> Result<Trajectory> {
    if n_total <= n_transient {
        return Err(Error::InvalidParameter {
            name: "n_total",
            value: n_total as f64,
            bound: "n_total > n_transient",
        });
    }
    if x0.len() != params.n_cells() {
        return Err(Error::Config(format!(
            "x0 has {} components but the model has {} cells",
            x0.len(),
            params.n_cells()
        )));
    }
    let mut state = x0.clone();
    let mut states = Vec::with_capacity(n_total - n_transient);
    for step in 1..=n_total {
        state = ring_step(&state, params, convention).map_err(|e| match e {
            Error::RangeEscape { component, value } => Error::RangeEscapeAt {
                step,
                component,
                value,
            },
            other => other,
        })?;
        if step > n_transient {
            states.push(state.clone());
        }
    }
    Ok(Trajectory {
        states,
        n_transient,
        params: params.clone(),
        convention,
    })
}

/// Newton search for an interior fixed point of the ring map, with a damped
/// fallback step `x <- x + 0.5 (F(x) - x)` whenever the Newton candidate
/// escapes the cube or fails to reduce the residual.
///
/// On success the returned point satisfies `||F(x) - x||_inf < tol`.
pub fn find_fixed_point(
    params: &ModelParams,
    convention: Convention,
    guess: &StateVector,
    tol: f64,
    max_iter: usize,
) -> Result<StateVector> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            bound: "tol > 0",
        });
    }
    if guess.len() != params.n_cells() {
        return Err(Error::Config(format!(
            "guess has {} components but the model has {} cells",
            guess.len(),
            params.n_cells()
        )));
    }
    let n = params.n_cells();
    let mut x = guess.components().to_vec();
    let mut residual = f64::INFINITY;

    let res_inf = |g: &[f64]| g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let interior = |v: &[f64]| v.iter().all(|&z| z > 0.0 && z < 1.0);
    // A converged point this close to the cube boundary is an artifact of a
    // boundary fixed point outside the model domain.
    let boundary_margin = (10.0 * tol).min(1e-6);

    for _ in 0..max_iter {
        let fx = step_unchecked(&x, params, convention);
        let g: Vec<f64> = fx.iter().zip(&x).map(|(f, xi)| f - xi).collect();
        residual = res_inf(&g);
        if residual < tol {
            if let Some(i) = x
                .iter()
                .position(|&z| z < boundary_margin || z > 1.0 - boundary_margin)
            {
                return Err(Error::BoundaryEscape { component: i });
            }
            return StateVector::new(x);
        }

        // J_G = J_F - I
        let mut jg = crate::stability::jacobian_ring(&x, params, convention)?;
        for i in 0..n {
            jg[(i, i)] -= 1.0;
        }
        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        let newton = crate::linalg::lu_solve(&jg, &neg_g).ok_or(Error::SingularJacobian)?;

        let candidate: Vec<f64> = x.iter().zip(&newton).map(|(xi, d)| xi + d).collect();
        let accept_newton = interior(&candidate) && {
            let fc = step_unchecked(&candidate, params, convention);
            let rc = res_inf(
                &fc.iter()
                    .zip(&candidate)
                    .map(|(f, xi)| f - xi)
                    .collect::<Vec<_>>(),
            );
            rc < residual
        };
        if accept_newton {
            x = candidate;
        } else {
            let damped: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + 0.5 * gi).collect();
            if let Some(i) = damped.iter().position(|&z| !(z > 0.0 && z < 1.0)) {
                return Err(Error::BoundaryEscape { component: i });
            }
            x = damped;
        }
    }
    Err(Error::NotConverged { max_iter, residual })
}

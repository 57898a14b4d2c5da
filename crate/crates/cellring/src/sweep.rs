//! Deterministic parameter-space sweeps.
//!
//! Grid cells are independent tasks; results are always gathered into
//! row-major order, so output is bit-identical regardless of worker count.
//! Cells whose orbit escapes the open unit cube (or whose parameters are
//! outside the model domain, e.g. affinity exactly 0 on an inclusive axis
//! endpoint) are recorded as NaN and counted in the grid metadata.

use crate::complexity::SpectrumScratch;
use crate::dynamics::{simulate, Convention, ModelParams, StateVector};
use crate::error::{Error, Result};
use crate::stability::{
    classify_equilibrium, eigenvalues_two_cell, jacobian_ring, jacobian_two_cell,
    norm_stability_check, region_s_membership, spectral_radius, Classification,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// One sweep axis: evenly spaced values `start + i * step` up to `stop`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AxisSpec {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AxisSpec {
    pub fn new(name: impl Into<String>, start: f64, stop: f64, step: f64) -> Result<Self> {
        let axis = Self {
            name: name.into(),
            start,
            stop,
            step,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidAxis(format!(
                "axis `{}`: step {} must be positive",
                self.name, self.step
            )));
        }
        if !(self.start < self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidAxis(format!(
                "axis `{}`: start {} must be below stop {}",
                self.name, self.start, self.stop
            )));
        }
        Ok(())
    }

    /// Number of grid points, `floor((stop - start) / step) + 1` with a
    /// small guard against representation error in the quotient.
    pub fn len(&self) -> usize {
        (((self.stop - self.start) / self.step) + 1e-9) as usize + 1
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.value(i))
    }
}

/// Whether grid cells hold scalars or category codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    Scalar,
    Category,
}

/// Category codes used in classification grids.
pub fn category_code(class: Classification) -> f64 {
    match class {
        Classification::AsymptoticallyStable => 0.0,
        Classification::Unstable => 1.0,
        Classification::Indeterminate => 2.0,
    }
}

/// A 2-D sweep result in row-major order: `values[iy * nx + ix]` holds the
/// cell at `(x_axis.value(ix), y_axis.value(iy))`. Missing cells are NaN.
#[derive(Debug, Clone)]
pub struct Grid {
    pub x_axis: AxisSpec,
    pub y_axis: AxisSpec,
    pub kind: GridKind,
    pub values: Vec<f64>,
    /// Cells whose orbit left the open unit cube.
    pub escape_count: usize,
    /// Cells whose parameters were outside the model domain.
    pub invalid_count: usize,
    /// Full parameter record; sufficient to regenerate the grid.
    pub meta: BTreeMap<String, String>,
}

impl Grid {
    pub fn nx(&self) -> usize {
        self.x_axis.len()
    }

    pub fn ny(&self) -> usize {
        self.y_axis.len()
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx() + ix]
    }

    /// Mean over non-missing cells, optionally restricted to an axis window.
    pub fn mean_where(&self, mut keep: impl FnMut(f64, f64) -> bool) -> Option<f64> {
        let mut sum = 0.0;
        let mut count = 0usize;
        for iy in 0..self.ny() {
            for ix in 0..self.nx() {
                let v = self.get(ix, iy);
                if v.is_nan() {
                    continue;
                }
                if keep(self.x_axis.value(ix), self.y_axis.value(iy)) {
                    sum += v;
                    count += 1;
                }
            }
        }
        (count > 0).then(|| sum / count as f64)
    }
}

/// Simulation settings shared by the sweep commands.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SimSettings {
    pub x0: Vec<f64>,
    pub n_total: usize,
    pub n_transient: usize,
}

impl SimSettings {
    /// The standard full-resolution settings: x0 = (0.3, 0.5), 5000 steps
    /// with the first 1000 discarded.
    pub fn full_resolution() -> Self {
        Self {
            x0: vec![0.3, 0.5],
            n_total: 5000,
            n_transient: 1000,
        }
    }

    /// Desk-scale settings for sweeps: 3000 steps keeping the last 2000.
    pub fn reduced() -> Self {
        Self {
            x0: vec![0.3, 0.5],
            n_total: 3000,
            n_transient: 1000,
        }
    }
}

/// Run `f` on a dedicated pool of `workers` threads, or inline on the global
/// pool when `workers` is None.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::NumericalFailure(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

enum CellOutcome {
    Value(f64),
    Escape,
    Invalid,
}

fn assemble_grid(
    x_axis: AxisSpec,
    y_axis: AxisSpec,
    kind: GridKind,
    cells: Vec<CellOutcome>,
    meta: BTreeMap<String, String>,
) -> Grid {
    let mut values = Vec::with_capacity(cells.len());
    let mut escape_count = 0;
    let mut invalid_count = 0;
    for cell in cells {
        match cell {
            CellOutcome::Value(v) => values.push(v),
            CellOutcome::Escape => {
                values.push(f64::NAN);
                escape_count += 1;
            }
            CellOutcome::Invalid => {
                values.push(f64::NAN);
                invalid_count += 1;
            }
        }
    }
    Grid {
        x_axis,
        y_axis,
        kind,
        values,
        escape_count,
        invalid_count,
        meta,
    }
}

/// Map of the spectrum maximum over the (r, p) plane at fixed coupling.
///
/// Cell (ix, iy) simulates the two-cell map at `r = r_axis.value(ix)`,
/// `p = p_axis.value(iy)` and records the maximum of the complexity spectrum
/// of the first cell's concentration series.
pub fn complexity_map(
    r_axis: &AxisSpec,
    p_axis: &AxisSpec,
    c: f64,
    sim: &SimSettings,
    convention: Convention,
    workers: Option<usize>,
) -> Result<Grid> {
    r_axis.validate()?;
    p_axis.validate()?;
    if sim.x0.len() != 2 {
        return Err(Error::Config(format!(
            "complexity map needs a two-cell x0, got {} components",
            sim.x0.len()
        )));
    }
    let x0 = StateVector::new(sim.x0.clone())?;
    let nx = r_axis.len();
    let ny = p_axis.len();
    let sim = sim.clone();

    let cells: Vec<CellOutcome> = with_workers(workers, || {
        (0..nx * ny)
            .into_par_iter()
            .map_init(SpectrumScratch::new, |scratch, idx| {
                let r = r_axis.value(idx % nx);
                let p = p_axis.value(idx / nx);
                let params = match ModelParams::two_cell(r, c, p) {
                    Ok(p) => p,
                    Err(_) => return CellOutcome::Invalid,
                };
                match simulate(&params, convention, &x0, sim.n_total, sim.n_transient) {
                    Ok(traj) => {
                        let series = traj.component_series(0);
                        CellOutcome::Value(scratch.spectrum(&series).max_value)
                    }
                    Err(Error::RangeEscapeAt { .. }) => CellOutcome::Escape,
                    Err(_) => CellOutcome::Invalid,
                }
            })
            .collect()
    })?;

    let mut meta = BTreeMap::new();
    meta.insert("command".into(), "map-complexity".into());
    meta.insert("value".into(), "spectrum-max".into());
    meta.insert("c".into(), format!("{c}"));
    meta.insert("convention".into(), convention.to_string());
    meta.insert("x0".into(), format!("{:?}", sim.x0));
    meta.insert("n_total".into(), sim.n_total.to_string());
    meta.insert("n_transient".into(), sim.n_transient.to_string());
    Ok(assemble_grid(
        r_axis.clone(),
        p_axis.clone(),
        GridKind::Scalar,
        cells,
        meta,
    ))
}

/// Classification map over candidate two-cell equilibria.
///
/// Cell (ix, iy) classifies the equilibrium `(x = x_axis.value(ix),
/// y = y_axis.value(iy))` from the exact 2x2 eigenvalues. Cells where the
/// Jacobian is singular (boundary points) classify as indeterminate.
pub fn stability_region_map(
    x_axis: &AxisSpec,
    y_axis: &AxisSpec,
    params: &ModelParams,
    workers: Option<usize>,
) -> Result<Grid> {
    x_axis.validate()?;
    y_axis.validate()?;
    let nx = x_axis.len();
    let ny = y_axis.len();

    let cells: Vec<CellOutcome> = with_workers(workers, || {
        (0..nx * ny)
            .into_par_iter()
            .map(|idx| {
                let x = x_axis.value(idx % nx);
                let y = y_axis.value(idx / nx);
                match jacobian_two_cell((x, y), params) {
                    Ok(j) => {
                        let (l1, l2) = eigenvalues_two_cell(&j);
                        let class = classify_equilibrium(&[l1.norm(), l2.norm()]);
                        CellOutcome::Value(category_code(class))
                    }
                    Err(_) => CellOutcome::Value(category_code(Classification::Indeterminate)),
                }
            })
            .collect()
    })?;

    let mut meta = BTreeMap::new();
    meta.insert("command".into(), "map-stability".into());
    meta.insert("value".into(), "classification".into());
    meta.insert(
        "categories".into(),
        "0=asymptotically-stable 1=unstable 2=indeterminate".into(),
    );
    meta.insert("r".into(), format!("{}", params.r()));
    meta.insert("c".into(), format!("{}", params.coupling()[0]));
    meta.insert("p".into(), format!("{}", params.affinities()[0]));
    Ok(assemble_grid(
        x_axis.clone(),
        y_axis.clone(),
        GridKind::Category,
        cells,
        meta,
    ))
}

/// Surfaces of the extreme eigenvalue magnitudes over candidate two-cell
/// equilibria: returns `(max |lambda|, min |lambda|)` grids.
pub fn eigen_surface_map(
    x_axis: &AxisSpec,
    y_axis: &AxisSpec,
    params: &ModelParams,
    workers: Option<usize>,
) -> Result<(Grid, Grid)> {
    x_axis.validate()?;
    y_axis.validate()?;
    let nx = x_axis.len();
    let ny = y_axis.len();

    let pairs: Vec<(CellOutcome, CellOutcome)> = with_workers(workers, || {
        (0..nx * ny)
            .into_par_iter()
            .map(|idx| {
                let x = x_axis.value(idx % nx);
                let y = y_axis.value(idx / nx);
                match jacobian_two_cell((x, y), params) {
                    Ok(j) => {
                        let (l1, l2) = eigenvalues_two_cell(&j);
                        (
                            CellOutcome::Value(l1.norm()),
                            CellOutcome::Value(l2.norm()),
                        )
                    }
                    Err(_) => (CellOutcome::Invalid, CellOutcome::Invalid),
                }
            })
            .collect()
    })?;

    let mut max_cells = Vec::with_capacity(pairs.len());
    let mut min_cells = Vec::with_capacity(pairs.len());
    for (hi, lo) in pairs {
        max_cells.push(hi);
        min_cells.push(lo);
    }
    let mut meta = BTreeMap::new();
    meta.insert("command".into(), "map-eigs".into());
    meta.insert("r".into(), format!("{}", params.r()));
    meta.insert("c".into(), format!("{}", params.coupling()[0]));
    meta.insert("p".into(), format!("{}", params.affinities()[0]));
    let mut meta_max = meta.clone();
    meta_max.insert("value".into(), "eigen-max".into());
    let mut meta_min = meta;
    meta_min.insert("value".into(), "eigen-min".into());
    Ok((
        assemble_grid(
            x_axis.clone(),
            y_axis.clone(),
            GridKind::Scalar,
            max_cells,
            meta_max,
        ),
        assemble_grid(
            x_axis.clone(),
            y_axis.clone(),
            GridKind::Scalar,
            min_cells,
            meta_min,
        ),
    ))
}

/// Sampler settings for the ring stability survey.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RingSampleSpec {
    pub n_samples: usize,
    pub n_cells_min: usize,
    pub n_cells_max: usize,
    pub r_min: f64,
    pub r_max: f64,
    /// Sample the equilibrium inside region S (otherwise uniformly in the cube).
    pub inside_s: bool,
    pub convention: Convention,
}

impl Default for RingSampleSpec {
    fn default() -> Self {
        Self {
            n_samples: 500,
            n_cells_min: 2,
            n_cells_max: 100,
            r_min: 1.05,
            r_max: 3.999,
            inside_s: true,
            convention: Convention::Ring,
        }
    }
}

/// One sampled ring instance.
#[derive(Debug, Clone)]
pub struct RingSampleRecord {
    pub n_cells: usize,
    pub r: f64,
    pub in_s: bool,
    pub norm_ok: bool,
    pub spectral_radius: f64,
    pub infinity_norm: f64,
}

/// Aggregate survey of sampled ring equilibria.
#[derive(Debug, Clone)]
pub struct RingStabilityReport {
    pub records: Vec<RingSampleRecord>,
    pub in_s_count: usize,
    pub norm_ok_count: usize,
    pub rho_lt_1_count: usize,
    /// Samples inside S that failed the row-norm check (must stay 0).
    pub s_without_norm: usize,
    /// Samples passing the row-norm check with spectral radius >= 1 (must stay 0).
    pub norm_without_rho: usize,
    /// In-S samples whose norm check changed after re-drawing couplings (must stay 0).
    pub coupling_redraw_flips: usize,
    pub seed: u64,
}

fn sample_affinities(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|v| v / sum).collect()
}

fn sample_coupling(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.01..0.99)).collect()
}

/// Deterministic random survey of ring equilibria: region-S membership, the
/// row-norm sufficient condition, and the spectral radius per sample, plus
/// the implication-chain violation counts.
pub fn ring_stability_sample(spec: &RingSampleSpec, seed: u64) -> Result<RingStabilityReport> {
    if spec.n_cells_min < 2 || spec.n_cells_max < spec.n_cells_min {
        return Err(Error::Config(format!(
            "invalid cell-count range {}..{}",
            spec.n_cells_min, spec.n_cells_max
        )));
    }
    if !(spec.r_min > 1.0 && spec.r_max <= 4.0 && spec.r_min <= spec.r_max) {
        return Err(Error::Config(format!(
            "invalid r range {}..{} (need 1 < r <= 4)",
            spec.r_min, spec.r_max
        )));
    }
    let mut records = Vec::with_capacity(spec.n_samples);
    let mut report = RingStabilityReport {
        records: Vec::new(),
        in_s_count: 0,
        norm_ok_count: 0,
        rho_lt_1_count: 0,
        s_without_norm: 0,
        norm_without_rho: 0,
        coupling_redraw_flips: 0,
        seed,
    };

    for i in 0..spec.n_samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(2 * i as u64);
        let n = rng.random_range(spec.n_cells_min..=spec.n_cells_max);
        let r = rng.random_range(spec.r_min..spec.r_max);
        let affinities = sample_affinities(&mut rng, n);
        let coupling = sample_coupling(&mut rng, n);
        let params = ModelParams::new(r, coupling, affinities)?;

        let eq: Vec<f64> = if spec.inside_s {
            let lo_r = (r - 1.0) / (2.0 * r);
            let hi_r = (r + 1.0) / (2.0 * r);
            (0..n)
                .map(|k| {
                    let p_prev = params.affinities()[(k + n - 1) % n];
                    let lo = lo_r.max(crate::stability::affinity_floor(p_prev));
                    let u: f64 = rng.random_range(1e-9..(1.0 - 1e-9));
                    lo + u * (hi_r - lo)
                })
                .collect()
        } else {
            (0..n).map(|_| rng.random_range(0.01..0.99)).collect()
        };

        let in_s = region_s_membership(&eq, &params);
        let norm_ok = norm_stability_check(&eq, &params, spec.convention)?;
        let j = jacobian_ring(&eq, &params, spec.convention)?;
        let rho = spectral_radius(&j)?;
        let inf = crate::stability::infinity_norm(&j);

        if in_s {
            report.in_s_count += 1;
            if !norm_ok {
                report.s_without_norm += 1;
            }
            // coupling independence: redraw c at fixed equilibrium
            let mut rng2 = ChaCha8Rng::seed_from_u64(seed);
            rng2.set_stream(2 * i as u64 + 1);
            let recoupled = ModelParams::new(
                r,
                sample_coupling(&mut rng2, n),
                params.affinities().to_vec(),
            )?;
            if norm_stability_check(&eq, &recoupled, spec.convention)? != norm_ok {
                report.coupling_redraw_flips += 1;
            }
        }
        if norm_ok {
            report.norm_ok_count += 1;
            if rho >= 1.0 {
                report.norm_without_rho += 1;
            }
        }
        if rho < 1.0 {
            report.rho_lt_1_count += 1;
        }
        records.push(RingSampleRecord {
            n_cells: n,
            r,
            in_s,
            norm_ok,
            spectral_radius: rho,
            infinity_norm: inf,
        });
    }
    report.records = records;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::complexity_spectrum;
    use approx::assert_relative_eq;

    #[test]
    fn axis_point_counts() {
        let axis = AxisSpec::new("r", 3.6, 4.0, 0.005).unwrap();
        assert_eq!(axis.len(), 81);
        let axis = AxisSpec::new("p", 0.0, 1.0, 0.005).unwrap();
        assert_eq!(axis.len(), 201);
        let axis = AxisSpec::new("r", 3.6, 4.0, 0.02).unwrap();
        assert_eq!(axis.len(), 21);
        assert_relative_eq!(axis.value(20), 4.0, epsilon = 1e-12);
        assert!(AxisSpec::new("bad", 1.0, 0.0, 0.1).is_err());
        assert!(AxisSpec::new("bad", 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn degenerate_complexity_grid_equals_direct_call() {
        let r_axis = AxisSpec::new("r", 3.8, 3.8001, 0.01).unwrap();
        let p_axis = AxisSpec::new("p", 0.5, 0.5001, 0.01).unwrap();
        assert_eq!(r_axis.len(), 1);
        let sim = SimSettings {
            x0: vec![0.3, 0.5],
            n_total: 600,
            n_transient: 100,
        };
        let grid =
            complexity_map(&r_axis, &p_axis, 0.02, &sim, Convention::TwoCell, None).unwrap();
        assert_eq!(grid.values.len(), 1);

        let params = ModelParams::two_cell(3.8, 0.02, 0.5).unwrap();
        let x0 = StateVector::new(vec![0.3, 0.5]).unwrap();
        let traj = simulate(&params, Convention::TwoCell, &x0, 600, 100).unwrap();
        let direct = complexity_spectrum(&traj.component_series(0))
            .unwrap()
            .max_value;
        assert_eq!(grid.values[0], direct);
    }

    #[test]
    fn complexity_grid_marks_invalid_affinity_endpoints() {
        let r_axis = AxisSpec::new("r", 3.7, 3.7001, 0.01).unwrap();
        let p_axis = AxisSpec::new("p", 0.0, 1.0, 0.5).unwrap(); // p = 0, 0.5, 1
        let sim = SimSettings {
            x0: vec![0.3, 0.5],
            n_total: 300,
            n_transient: 50,
        };
        let grid =
            complexity_map(&r_axis, &p_axis, 0.02, &sim, Convention::TwoCell, None).unwrap();
        assert_eq!(grid.values.len(), 3);
        assert!(grid.values[0].is_nan());
        assert!(!grid.values[1].is_nan());
        assert!(grid.values[2].is_nan());
        assert_eq!(grid.invalid_count, 2);
    }

    #[test]
    fn stability_grid_cells_match_single_point_calls() {
        let params = ModelParams::two_cell(4.0, 0.02, 0.5).unwrap();
        let x_axis = AxisSpec::new("x", 0.2, 0.8, 0.2).unwrap();
        let y_axis = AxisSpec::new("y", 0.2, 0.8, 0.2).unwrap();
        let grid = stability_region_map(&x_axis, &y_axis, &params, None).unwrap();
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let j =
                    jacobian_two_cell((x_axis.value(ix), y_axis.value(iy)), &params).unwrap();
                let (l1, l2) = eigenvalues_two_cell(&j);
                let class = classify_equilibrium(&[l1.norm(), l2.norm()]);
                assert_eq!(grid.get(ix, iy), category_code(class));
            }
        }
    }

    #[test]
    fn eigen_surfaces_symmetric_at_balanced_affinity() {
        let params = ModelParams::two_cell(4.0, 0.02, 0.5).unwrap();
        let axis = AxisSpec::new("x", 0.1, 0.9, 0.1).unwrap();
        let (max_grid, min_grid) = eigen_surface_map(&axis, &axis, &params, None).unwrap();
        for iy in 0..max_grid.ny() {
            for ix in 0..max_grid.nx() {
                assert_relative_eq!(
                    max_grid.get(ix, iy),
                    max_grid.get(iy, ix),
                    epsilon = 1e-12
                );
                assert!(max_grid.get(ix, iy) >= min_grid.get(ix, iy));
            }
        }
    }

    #[test]
    fn worker_counts_produce_identical_grids() {
        let params = ModelParams::two_cell(3.9, 0.02, 0.4).unwrap();
        let axis = AxisSpec::new("x", 0.1, 0.9, 0.05).unwrap();
        let one = stability_region_map(&axis, &axis, &params, Some(1)).unwrap();
        let many = stability_region_map(&axis, &axis, &params, Some(4)).unwrap();
        assert_eq!(one.values, many.values);

        let r_axis = AxisSpec::new("r", 3.8, 3.9, 0.05).unwrap();
        let p_axis = AxisSpec::new("p", 0.3, 0.7, 0.1).unwrap();
        let sim = SimSettings {
            x0: vec![0.3, 0.5],
            n_total: 500,
            n_transient: 100,
        };
        let a = complexity_map(&r_axis, &p_axis, 0.02, &sim, Convention::TwoCell, Some(1))
            .unwrap();
        let b = complexity_map(&r_axis, &p_axis, 0.02, &sim, Convention::TwoCell, Some(4))
            .unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.escape_count, b.escape_count);
    }

    #[test]
    fn ring_survey_inside_s_has_no_violations() {
        let spec = RingSampleSpec {
            n_samples: 40,
            n_cells_max: 20,
            ..RingSampleSpec::default()
        };
        let report = ring_stability_sample(&spec, 123).unwrap();
        assert_eq!(report.records.len(), 40);
        assert_eq!(report.in_s_count, 40, "sampled points must land inside S");
        assert_eq!(report.s_without_norm, 0);
        assert_eq!(report.norm_without_rho, 0);
        assert_eq!(report.coupling_redraw_flips, 0);
        assert_eq!(report.rho_lt_1_count, 40);
        for rec in &report.records {
            assert!(rec.spectral_radius <= rec.infinity_norm + 1e-9);
        }
    }

    #[test]
    fn ring_survey_is_deterministic() {
        let spec = RingSampleSpec {
            n_samples: 10,
            n_cells_max: 10,
            inside_s: false,
            ..RingSampleSpec::default()
        };
        let a = ring_stability_sample(&spec, 7).unwrap();
        let b = ring_stability_sample(&spec, 7).unwrap();
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.spectral_radius, rb.spectral_radius);
            assert_eq!(ra.r, rb.r);
        }
    }

    #[test]
    fn ring_survey_two_cell_consistency() {
        // N = 2 samples classify consistently with the two-cell report under
        // the convention mapping.
        let spec = RingSampleSpec {
            n_samples: 10,
            n_cells_min: 2,
            n_cells_max: 2,
            inside_s: true,
            convention: Convention::TwoCell,
            ..RingSampleSpec::default()
        };
        let report = ring_stability_sample(&spec, 11).unwrap();
        assert_eq!(report.s_without_norm, 0);
        assert_eq!(report.norm_without_rho, 0);
        for rec in &report.records {
            assert!(rec.in_s);
            assert!(rec.spectral_radius < 1.0);
        }
    }
}

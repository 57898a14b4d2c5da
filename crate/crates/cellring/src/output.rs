//! Artifact serialization and run orchestration: grid/trajectory/spectrum
//! CSV files, metadata records, matplotlib plot scripts, and the dispatch
//! that executes a resolved [`RunConfig`].

use crate::complexity::{complexity_spectrum, kc_single, normalize_series};
use crate::config::{CommandKind, RunConfig};
use crate::dynamics::{simulate, StateVector};
use crate::error::{Error, Result};
use crate::stability::{equilibrium_invariants, two_cell_report};
use crate::sweep::{
    complexity_map, eigen_surface_map, ring_stability_sample, stability_region_map, AxisSpec,
    Grid, GridKind, RingStabilityReport,
};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Shortest decimal representation that parses back to the same f64;
/// missing cells are the literal token `NaN`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v}")
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(io_err(path))
}

fn axis_header(prefix: &str, axis: &AxisSpec) -> String {
    format!(
        "# axis_{prefix}={} start={} stop={} step={} points={}\n",
        axis.name,
        format_float(axis.start),
        format_float(axis.stop),
        format_float(axis.step),
        axis.len()
    )
}

/// Write a grid as CSV: `#` comment lines carrying the axis definitions and
/// metadata, then one data row per y-axis point. Identical grids produce
/// byte-identical files.
pub fn write_grid_csv(grid: &Grid, path: &Path) -> Result<()> {
    let mut text = String::new();
    text.push_str(&axis_header("x", &grid.x_axis));
    text.push_str(&axis_header("y", &grid.y_axis));
    let kind = match grid.kind {
        GridKind::Scalar => "scalar",
        GridKind::Category => "category",
    };
    let _ = writeln!(text, "# kind={kind}");
    let _ = writeln!(
        text,
        "# escapes={} invalid={}",
        grid.escape_count, grid.invalid_count
    );
    for (k, v) in &grid.meta {
        let _ = writeln!(text, "# meta {k}={v}");
    }
    let nx = grid.nx();
    for iy in 0..grid.ny() {
        let row: Vec<String> = (0..nx).map(|ix| format_float(grid.get(ix, iy))).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write_text(path, &text)
}

fn parse_axis_line(line: &str) -> Result<AxisSpec> {
    let mut name = None;
    let mut start = None;
    let mut stop = None;
    let mut step = None;
    let body = line
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("malformed axis line: {line}")))?;
    // line shape: axis_x=<name> start=... stop=... step=... points=...
    let mut tokens = body.1.split_whitespace();
    name = tokens.next().map(|s| s.to_string()).or(name);
    for tok in tokens {
        if let Some((k, v)) = tok.split_once('=') {
            let parsed: f64 = v
                .parse()
                .map_err(|_| Error::Config(format!("bad axis number in: {line}")))?;
            match k {
                "start" => start = Some(parsed),
                "stop" => stop = Some(parsed),
                "step" => step = Some(parsed),
                _ => {}
            }
        }
    }
    match (name, start, stop, step) {
        (Some(name), Some(start), Some(stop), Some(step)) => {
            AxisSpec::new(name, start, stop, step)
        }
        _ => Err(Error::Config(format!("incomplete axis line: {line}"))),
    }
}

/// Parse a grid CSV produced by [`write_grid_csv`].
pub fn read_grid_csv(path: &Path) -> Result<Grid> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut x_axis = None;
    let mut y_axis = None;
    let mut kind = GridKind::Scalar;
    let mut escape_count = 0;
    let mut invalid_count = 0;
    let mut meta = BTreeMap::new();
    let mut values = Vec::new();
    for line in text.lines() {
        if let Some(comment) = line.strip_prefix("# ") {
            if comment.starts_with("axis_x=") {
                x_axis = Some(parse_axis_line(comment)?);
            } else if comment.starts_with("axis_y=") {
                y_axis = Some(parse_axis_line(comment)?);
            } else if let Some(k) = comment.strip_prefix("kind=") {
                kind = match k.trim() {
                    "category" => GridKind::Category,
                    _ => GridKind::Scalar,
                };
            } else if comment.starts_with("escapes=") {
                for tok in comment.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("escapes=") {
                        escape_count = v.parse().unwrap_or(0);
                    } else if let Some(v) = tok.strip_prefix("invalid=") {
                        invalid_count = v.parse().unwrap_or(0);
                    }
                }
            } else if let Some(kv) = comment.strip_prefix("meta ") {
                if let Some((k, v)) = kv.split_once('=') {
                    meta.insert(k.to_string(), v.to_string());
                }
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        for tok in line.split(',') {
            let v: f64 = tok
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad grid value `{tok}`")))?;
            values.push(v);
        }
    }
    let x_axis = x_axis.ok_or_else(|| Error::Config("grid csv missing x axis header".into()))?;
    let y_axis = y_axis.ok_or_else(|| Error::Config("grid csv missing y axis header".into()))?;
    if values.len() != x_axis.len() * y_axis.len() {
        return Err(Error::Config(format!(
            "grid csv has {} values, expected {}",
            values.len(),
            x_axis.len() * y_axis.len()
        )));
    }
    Ok(Grid {
        x_axis,
        y_axis,
        kind,
        values,
        escape_count,
        invalid_count,
        meta,
    })
}

/// Emit a self-contained matplotlib script rendering a grid CSV as a heatmap
/// (scalar grids) or a three-color category map (dark gray = stable, light
/// gray = unstable, white = indeterminate).
pub fn write_plot_script(grid: &Grid, csv_name: &str, path: &Path) -> Result<()> {
    let png_name = csv_name.replace(".csv", ".png");
    let half_x = grid.x_axis.step / 2.0;
    let half_y = grid.y_axis.step / 2.0;
    let extent = format!(
        "[{}, {}, {}, {}]",
        format_float(grid.x_axis.start - half_x),
        format_float(grid.x_axis.value(grid.nx() - 1) + half_x),
        format_float(grid.y_axis.start - half_y),
        format_float(grid.y_axis.value(grid.ny() - 1) + half_y),
    );
    let value_label = grid.meta.get("value").cloned().unwrap_or_default();
    let render = match grid.kind {
        GridKind::Scalar => format!(
            r#"im = plt.imshow(data, origin="lower", aspect="auto", extent=EXTENT, cmap="viridis")
plt.colorbar(im, label={value_label:?})"#
        ),
        GridKind::Category => r##"from matplotlib.colors import BoundaryNorm, ListedColormap
palette = ListedColormap(["#4d4d4d", "#c8c8c8", "#ffffff"])  # stable, unstable, indeterminate
norm = BoundaryNorm([-0.5, 0.5, 1.5, 2.5], palette.N)
im = plt.imshow(data, origin="lower", aspect="auto", extent=EXTENT, cmap=palette, norm=norm)
cbar = plt.colorbar(im, ticks=[0, 1, 2])
cbar.ax.set_yticklabels(["stable", "unstable", "indeterminate"])"##
            .to_string(),
    };
    let script = format!(
        r##"#!/usr/bin/env python3
"""Render {csv_name} as a {kind} map."""
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV = {csv_name:?}
EXTENT = {extent}

rows = []
with open(CSV) as fh:
    for line in fh:
        if line.startswith("#") or not line.strip():
            continue
        rows.append([float(tok) for tok in line.strip().split(",")])
data = np.array(rows)

plt.figure(figsize=(7.0, 5.0))
{render}
plt.xlabel({xlabel:?})
plt.ylabel({ylabel:?})
plt.savefig({png_name:?}, dpi=200, bbox_inches="tight")
print("wrote", {png_name:?})
"##,
        kind = match grid.kind {
            GridKind::Scalar => "heatmap",
            GridKind::Category => "category",
        },
        xlabel = grid.x_axis.name,
        ylabel = grid.y_axis.name,
    );
    write_text(path, &script)
}

/// Scatter-plot script for a spectrum CSV: normalized concentration on the
/// x axis against the per-threshold complexity value.
pub fn write_spectrum_plot_script(csv_name: &str, path: &Path) -> Result<()> {
    let png_name = csv_name.replace(".csv", ".png");
    let script = format!(
        r##"#!/usr/bin/env python3
"""Scatter the complexity spectrum in {csv_name} against normalized concentration."""
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV = {csv_name:?}
xs, ks = [], []
with open(CSV) as fh:
    for line in fh:
        if line.startswith("#") or not line.strip():
            continue
        _, _, x_norm, k = line.strip().split(",")
        xs.append(float(x_norm))
        ks.append(float(k))

plt.figure(figsize=(7.0, 5.0))
plt.scatter(xs, ks, s=4)
plt.xlabel("normalized concentration")
plt.ylabel("spectrum value")
plt.savefig({png_name:?}, dpi=200, bbox_inches="tight")
print("wrote", {png_name:?})
"##
    );
    write_text(path, &script)
}

fn metadata_path(config: &RunConfig) -> PathBuf {
    config.output.join("metadata.toml")
}

fn write_metadata(config: &RunConfig) -> Result<PathBuf> {
    let path = metadata_path(config);
    write_text(&path, &config.to_toml()?)?;
    Ok(path)
}

fn write_trajectory_csv(
    traj: &crate::dynamics::Trajectory,
    path: &Path,
) -> Result<()> {
    let mut text = String::new();
    let n = traj.params.n_cells();
    let _ = writeln!(text, "# n_transient={}", traj.n_transient);
    let cols: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    let _ = writeln!(text, "# columns=step,{}", cols.join(","));
    for (i, state) in traj.states.iter().enumerate() {
        let step = traj.n_transient + i + 1;
        let row: Vec<String> = state.components().iter().map(|&v| format_float(v)).collect();
        let _ = writeln!(text, "{step},{}", row.join(","));
    }
    write_text(path, &text)
}

fn write_key_value_csv(pairs: &[(&str, String)], path: &Path) -> Result<()> {
    let mut text = String::from("# columns=key,value\n");
    for (k, v) in pairs {
        let _ = writeln!(text, "{k},{v}");
    }
    write_text(path, &text)
}

fn write_ring_report_csv(report: &RingStabilityReport, path: &Path) -> Result<()> {
    let mut text = String::new();
    let _ = writeln!(text, "# seed={}", report.seed);
    let _ = writeln!(
        text,
        "# in_s={} norm_ok={} rho_lt_1={} of {}",
        report.in_s_count,
        report.norm_ok_count,
        report.rho_lt_1_count,
        report.records.len()
    );
    let _ = writeln!(
        text,
        "# violations s_without_norm={} norm_without_rho={} coupling_redraw_flips={}",
        report.s_without_norm, report.norm_without_rho, report.coupling_redraw_flips
    );
    let _ = writeln!(
        text,
        "# columns=n_cells,r,in_s,norm_ok,spectral_radius,infinity_norm"
    );
    for rec in &report.records {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{}",
            rec.n_cells,
            format_float(rec.r),
            u8::from(rec.in_s),
            u8::from(rec.norm_ok),
            format_float(rec.spectral_radius),
            format_float(rec.infinity_norm)
        );
    }
    write_text(path, &text)
}

/// Execute a resolved run and return the artifacts written.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>> {
    config.validate()?;
    std::fs::create_dir_all(&config.output).map_err(io_err(&config.output))?;
    let params = config.model.to_params()?;
    let out = |name: &str| config.output.join(name);
    let mut artifacts = vec![write_metadata(config)?];

    match config.command {
        CommandKind::Simulate => {
            let x0 = StateVector::new(config.sim.x0.clone())?;
            let traj = simulate(
                &params,
                config.convention,
                &x0,
                config.sim.n_total,
                config.sim.n_transient,
            )?;
            let path = out("trajectory.csv");
            write_trajectory_csv(&traj, &path)?;
            artifacts.push(path);
        }
        CommandKind::Complexity => {
            let x0 = StateVector::new(config.sim.x0.clone())?;
            let traj = simulate(
                &params,
                config.convention,
                &x0,
                config.sim.n_total,
                config.sim.n_transient,
            )?;
            let series = traj.component_series(0);
            let kc = kc_single(&series)?;
            let path = out("complexity.csv");
            write_key_value_csv(
                &[
                    ("samples", series.len().to_string()),
                    ("kc", format_float(kc)),
                ],
                &path,
            )?;
            artifacts.push(path);
        }
        CommandKind::Spectrum => {
            let x0 = StateVector::new(config.sim.x0.clone())?;
            let traj = simulate(
                &params,
                config.convention,
                &x0,
                config.sim.n_total,
                config.sim.n_transient,
            )?;
            let series = traj.component_series(0);
            let spectrum = complexity_spectrum(&series)?;
            let normalized = normalize_series(&series)?;
            let mut text = String::new();
            let _ = writeln!(text, "# max_value={}", format_float(spectrum.max_value));
            let _ = writeln!(text, "# max_index={}", spectrum.max_index);
            let _ = writeln!(text, "# columns=index,threshold,x_normalized,value");
            for (i, ((t, xn), v)) in spectrum
                .thresholds
                .iter()
                .zip(&normalized)
                .zip(&spectrum.values)
                .enumerate()
            {
                let _ = writeln!(
                    text,
                    "{i},{},{},{}",
                    format_float(*t),
                    format_float(*xn),
                    format_float(*v)
                );
            }
            let path = out("spectrum.csv");
            write_text(&path, &text)?;
            artifacts.push(path);
            if config.plot {
                let script = out("plot_spectrum.py");
                write_spectrum_plot_script("spectrum.csv", &script)?;
                artifacts.push(script);
            }
        }
        CommandKind::Stability2 => {
            if let Some(eq) = &config.eq {
                let point = (eq[0], eq[1]);
                let report = two_cell_report(point, &params)?;
                let inv = equilibrium_invariants(point, &params)?;
                let path = out("stability2.csv");
                write_key_value_csv(
                    &[
                        ("x", format_float(point.0)),
                        ("y", format_float(point.1)),
                        ("eigen_max", format_float(report.eigen_max)),
                        ("eigen_min", format_float(report.eigen_min)),
                        ("classification", report.classification.to_string()),
                        ("margin", format_float(report.margin)),
                        ("spectral_radius", format_float(report.spectral_radius)),
                        ("infinity_norm", format_float(report.infinity_norm)),
                        ("in_region_s", report.in_region_s.to_string()),
                        ("alpha", format_float(inv.alpha)),
                        ("beta", format_float(inv.beta)),
                        ("gamma", format_float(inv.gamma)),
                    ],
                    &path,
                )?;
                artifacts.push(path);
            } else {
                let axes = config.axes.as_ref().expect("validated");
                let grid = stability_region_map(&axes.x, &axes.y, &params, config.workers)?;
                let path = out("stability2.csv");
                write_grid_csv(&grid, &path)?;
                artifacts.push(path);
                if config.plot {
                    let script = out("plot_stability2.py");
                    write_plot_script(&grid, "stability2.csv", &script)?;
                    artifacts.push(script);
                }
            }
        }
        CommandKind::RingStability => {
            let spec = config.ring.clone().unwrap_or_default();
            let report = ring_stability_sample(&spec, config.seed)?;
            let path = out("ring_stability.csv");
            write_ring_report_csv(&report, &path)?;
            artifacts.push(path);
        }
        CommandKind::MapComplexity => {
            let axes = config.axes.as_ref().expect("validated");
            let c = match &config.model.c {
                crate::config::ScalarOrVec::Scalar(c) => *c,
                crate::config::ScalarOrVec::PerCell(cs) => cs[0],
            };
            let grid = complexity_map(
                &axes.x,
                &axes.y,
                c,
                &config.sim,
                config.convention,
                config.workers,
            )?;
            let path = out("map_complexity.csv");
            write_grid_csv(&grid, &path)?;
            artifacts.push(path);
            if config.plot {
                let script = out("plot_map_complexity.py");
                write_plot_script(&grid, "map_complexity.csv", &script)?;
                artifacts.push(script);
            }
        }
        CommandKind::MapStability => {
            let axes = config.axes.as_ref().expect("validated");
            let grid = stability_region_map(&axes.x, &axes.y, &params, config.workers)?;
            let path = out("map_stability.csv");
            write_grid_csv(&grid, &path)?;
            artifacts.push(path);
            if config.plot {
                let script = out("plot_map_stability.py");
                write_plot_script(&grid, "map_stability.csv", &script)?;
                artifacts.push(script);
            }
        }
        CommandKind::MapEigs => {
            let axes = config.axes.as_ref().expect("validated");
            let (max_grid, min_grid) =
                eigen_surface_map(&axes.x, &axes.y, &params, config.workers)?;
            let max_path = out("map_eigs_max.csv");
            let min_path = out("map_eigs_min.csv");
            write_grid_csv(&max_grid, &max_path)?;
            write_grid_csv(&min_grid, &min_path)?;
            artifacts.push(max_path);
            artifacts.push(min_path);
            if config.plot {
                let s1 = out("plot_map_eigs_max.py");
                write_plot_script(&max_grid, "map_eigs_max.csv", &s1)?;
                let s2 = out("plot_map_eigs_min.py");
                write_plot_script(&min_grid, "map_eigs_min.csv", &s2)?;
                artifacts.push(s1);
                artifacts.push(s2);
            }
        }
    }
    Ok(artifacts)
}

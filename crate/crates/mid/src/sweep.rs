//! Dataset engine behind the CLI: 1-D branch sweeps with nearest-neighbor
//! continuation, 2-D root surfaces, region-class rasters, boundary curves,
//! and profile exports, emitted as deterministic CSV/JSON/SVG.

use crate::childlangmuir;
use crate::cubic::{self, CubicCase};
use crate::error::{Error, Result};
use crate::model::ScaledParams;
use crate::potential::{self, PotentialProfile};
use crate::tangent;
use crate::thetad;
use crate::uvsolve;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[serde(rename = "branch_1d")]
    Branch1d,
    #[serde(rename = "surface_2d")]
    Surface2d,
    RegionMap,
    BoundaryCurve,
    PotentialProfile,
    UvProfile,
    TangentScan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// (min, max, count) for one swept parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeSpec(pub f64, pub f64, pub usize);

impl RangeSpec {
    pub fn points(&self) -> Vec<f64> {
        let RangeSpec(lo, hi, n) = *self;
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub mode: Mode,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    #[serde(default)]
    pub range: BTreeMap<String, RangeSpec>,
    #[serde(default)]
    pub outputs: Vec<Format>,
    /// Which quantity the branch columns carry: "u" (default) or "theta".
    #[serde(default)]
    pub quantity: Option<String>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, RangeSpec(lo, hi, n)) in &self.range {
            if *n < 2 {
                return Err(Error::SpecInvalid(format!("range {name}: count {n} < 2")));
            }
            if !(lo < hi) {
                return Err(Error::SpecInvalid(format!("range {name}: min {lo} >= max {hi}")));
            }
            if self.fixed.contains_key(name) {
                return Err(Error::SpecInvalid(format!("{name} both fixed and swept")));
            }
        }
        let n_ranges = self.range.len();
        let want = match self.mode {
            Mode::Branch1d | Mode::BoundaryCurve | Mode::TangentScan => 1,
            Mode::Surface2d | Mode::RegionMap => 2,
            Mode::PotentialProfile | Mode::UvProfile => return Ok(()),
        };
        if n_ranges != want {
            return Err(Error::SpecInvalid(format!(
                "mode {:?} needs {want} swept parameter(s), got {n_ranges}",
                self.mode
            )));
        }
        Ok(())
    }

    fn fixed_or(&self, name: &str, default: f64) -> f64 {
        self.fixed.get(name).copied().unwrap_or(default)
    }

    fn quantity(&self) -> &str {
        self.quantity.as_deref().unwrap_or("u")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub mode: Mode,
    pub quantity: String,
    pub fixed: BTreeMap<String, f64>,
    pub range: BTreeMap<String, RangeSpec>,
    pub grid: Vec<usize>,
    /// Sweep values where a Delta_u = 0 branch collision was detected.
    pub collisions: Vec<f64>,
}

/// Column-labeled numeric table; every dataset mode lowers to this for
/// emission.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub meta: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchRow {
    pub sweep_value: f64,
    pub branch_id: usize,
    pub re: f64,
    pub im: f64,
    pub admissible: bool,
    pub physical: bool,
}

#[derive(Clone, Debug)]
pub struct BranchTable {
    pub param: String,
    pub rows: Vec<BranchRow>,
    pub collisions: Vec<f64>,
    /// Sum over steps of the minimal root-pairing distance.
    pub pairing_distance: f64,
    pub meta: Metadata,
}

impl BranchTable {
    pub fn to_dataset(&self) -> Dataset {
        Dataset {
            meta: self.meta.clone(),
            columns: ["sweep_value", "branch_id", "re", "im", "admissible", "physical"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            rows: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.sweep_value,
                        r.branch_id as f64,
                        r.re,
                        r.im,
                        r.admissible as u8 as f64,
                        r.physical as u8 as f64,
                    ]
                })
                .collect(),
        }
    }
}

fn meta_for(spec: &SweepSpec, grid: Vec<usize>, collisions: Vec<f64>) -> Metadata {
    Metadata {
        mode: spec.mode,
        quantity: spec.quantity().to_string(),
        fixed: spec.fixed.clone(),
        range: spec.range.clone(),
        grid,
        collisions,
    }
}

fn is_real(u: Complex64) -> bool {
    u.im.abs() <= 1e-9 * u.norm().max(1.0)
}

const PERMS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Minimal-total-distance assignment of `new` roots to the labels of `prev`.
fn pair_roots(prev: &[Complex64; 3], new: &[Complex64; 3]) -> ([usize; 3], f64) {
    let mut best = (PERMS[0], f64::INFINITY);
    for p in PERMS {
        let d: f64 = (0..3).map(|i| (new[p[i]] - prev[i]).norm()).sum();
        if d < best.1 {
            best = (p, d);
        }
    }
    best
}

fn solve_point(k_hat: f64, beta_hat: f64) -> Result<cubic::CubicRoots> {
    cubic::solve(ScaledParams::new(k_hat, beta_hat))
}

/// 1-D cubic sweep with nearest-neighbor branch continuation; labels are
/// re-seeded at Delta_u = 0 collisions and the collision values recorded.
pub fn sweep_1d(spec: &SweepSpec) -> Result<BranchTable> {
    spec.validate()?;
    let (param, range) = spec.range.iter().next().unwrap();
    if param != "k_hat" && param != "beta_hat" {
        return Err(Error::SpecInvalid(format!("branch_1d sweeps k_hat or beta_hat, not {param}")));
    }
    let other = if param == "k_hat" { "beta_hat" } else { "k_hat" };
    let other_val = spec.fixed_or(other, 0.0);
    let theta_mode = spec.quantity() == "theta";

    let pts = range.points();
    let n = pts.len();
    let mut sols = Vec::with_capacity(n);
    for &t in &pts {
        let (k, b) = if param == "k_hat" { (t, other_val) } else { (other_val, t) };
        sols.push(solve_point(k, b)?);
    }
    let deltas: Vec<f64> = sols.iter().map(|s| s.discriminant).collect();

    // Collision indices: sign changes and degenerate cases directly; a
    // tangential Delta = 0 contact (no sign change) via the parabola vertex
    // of consecutive discriminant triples.
    let mut collision_at = vec![false; n];
    let mut collisions = Vec::new();
    for i in 1..n {
        if deltas[i - 1] * deltas[i] < 0.0
            || sols[i].case_tag == CubicCase::DoubleRoot
            || sols[i].case_tag == CubicCase::TripleRoot
        {
            collision_at[i] = true;
            collisions.push(pts[i]);
        }
    }
    let h = pts[1] - pts[0];
    for i in 1..n - 1 {
        if collision_at[i] || collision_at[i + 1] {
            continue;
        }
        let (d0, d1, d2) = (deltas[i - 1], deltas[i], deltas[i + 1]);
        if !((d1 - d0) * (d2 - d1) < 0.0) {
            continue;
        }
        let a = (d0 - 2.0 * d1 + d2) / (2.0 * h * h);
        let slope = (d2 - d0) / (2.0 * h);
        if a == 0.0 {
            continue;
        }
        let off = -slope / (2.0 * a);
        let vertex = d1 + slope * off + a * off * off;
        if off.abs() <= h && vertex.abs() <= 1e-6 * d0.abs().max(d2.abs()).max(1.0) {
            collision_at[i] = true;
            collisions.push(pts[i] + off);
        }
    }
    collisions.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut rows = Vec::with_capacity(3 * n);
    let mut pairing_distance = 0.0;
    let mut prev: Option<[Complex64; 3]> = None;
    for (i, (&t, sol)) in pts.iter().zip(&sols).enumerate() {
        let mut labeled = sol.roots;
        match &prev {
            // Re-seeded deterministically by the (re, im) sort order at
            // collisions and at the start.
            None => {}
            Some(_) if collision_at[i] => {}
            Some(pr) => {
                let (p, d) = pair_roots(pr, &sol.roots);
                labeled = [sol.roots[p[0]], sol.roots[p[1]], sol.roots[p[2]]];
                pairing_distance += d;
            }
        }
        prev = Some(labeled);
        for (id, &u) in labeled.iter().enumerate() {
            let admissible = u.re >= -1e-9 * u.norm().max(1.0);
            let physical = is_real(u) && u.re >= -1e-12;
            let val = if theta_mode { u * u } else { u };
            rows.push(BranchRow {
                sweep_value: t,
                branch_id: id,
                re: val.re,
                im: val.im,
                admissible,
                physical,
            });
        }
    }
    let meta = meta_for(spec, vec![range.2], collisions.clone());
    Ok(BranchTable { param: param.clone(), rows, collisions, pairing_distance, meta })
}

/// 2-D root surface over (k_hat, beta_hat); per-point labels follow the
/// (re, im) sort order.
pub fn sweep_2d(spec: &SweepSpec) -> Result<Dataset> {
    spec.validate()?;
    let rk = spec.range.get("k_hat").ok_or_else(|| Error::SpecInvalid("need k_hat range".into()))?;
    let rb =
        spec.range.get("beta_hat").ok_or_else(|| Error::SpecInvalid("need beta_hat range".into()))?;
    let theta_mode = spec.quantity() == "theta";
    let mut rows = Vec::with_capacity(3 * rk.2 * rb.2);
    for k in rk.points() {
        for b in rb.points() {
            let sol = solve_point(k, b)?;
            for (id, &u) in sol.roots.iter().enumerate() {
                let val = if theta_mode { u * u } else { u };
                rows.push(vec![k, b, id as f64, val.re, val.im]);
            }
        }
    }
    Ok(Dataset {
        meta: meta_for(spec, vec![rk.2, rb.2], vec![]),
        columns: ["k_hat", "beta_hat", "branch_id", "re", "im"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows,
    })
}

/// Region-class raster over (k_hat, beta_hat).
pub fn region_map(spec: &SweepSpec) -> Result<Dataset> {
    spec.validate()?;
    let rk = spec.range.get("k_hat").ok_or_else(|| Error::SpecInvalid("need k_hat range".into()))?;
    let rb =
        spec.range.get("beta_hat").ok_or_else(|| Error::SpecInvalid("need beta_hat range".into()))?;
    let mut rows = Vec::with_capacity(rk.2 * rb.2);
    for k in rk.points() {
        for b in rb.points() {
            let rc = thetad::classify_region(ScaledParams::new(k, b))?;
            rows.push(vec![
                k,
                b,
                rc.delta_sign as f64,
                rc.n_real_roots as f64,
                rc.n_physical as f64,
                rc.prop8_applies as u8 as f64,
                rc.prop9_applies as u8 as f64,
                rc.prop10_boundary as u8 as f64,
            ]);
        }
    }
    Ok(Dataset {
        meta: meta_for(spec, vec![rk.2, rb.2], vec![]),
        columns: [
            "k_hat",
            "beta_hat",
            "delta_sign",
            "n_real",
            "n_physical",
            "prop8",
            "prop9",
            "prop10",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows,
    })
}

/// The two Delta_u = 0 curves beta_hat_pm(k_hat) where defined.
pub fn boundary_curve(spec: &SweepSpec) -> Result<Dataset> {
    spec.validate()?;
    let rk = spec.range.get("k_hat").ok_or_else(|| Error::SpecInvalid("need k_hat range".into()))?;
    let mut rows = Vec::new();
    for k in rk.points() {
        if let Some((lo, hi)) = thetad::delta_zero_boundary(k) {
            rows.push(vec![k, lo, hi]);
        }
    }
    Ok(Dataset {
        meta: meta_for(spec, vec![rk.2], vec![]),
        columns: ["k_hat", "beta_hat_minus", "beta_hat_plus"].iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

/// D(x) profile rows (x, d, d_prime) for fixed (gamma, j_x).
pub fn potential_profile(spec: &SweepSpec) -> Result<Dataset> {
    spec.validate()?;
    let gamma = spec.fixed_or("gamma", 0.0);
    let j_x = spec.fixed_or("j_x", 1.0);
    let profile = match spec.range.get("x") {
        Some(&RangeSpec(lo, hi, n)) => PotentialProfile::build(gamma, j_x, lo.max(1e-12), hi, n)?,
        None => PotentialProfile::build_default(gamma, j_x)?,
    };
    let rows = profile.samples.iter().map(|s| vec![s.x, s.d, s.d_prime]).collect::<Vec<_>>();
    let n = rows.len();
    Ok(Dataset {
        meta: meta_for(spec, vec![n], vec![]),
        columns: ["x", "d", "d_prime"].iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

/// Picard (u, v) profile rows; continued past the contraction interval when
/// x_end asks for it.
pub fn uv_profile(spec: &SweepSpec) -> Result<Dataset> {
    spec.validate()?;
    let gamma = spec.fixed_or("gamma", 0.0);
    let j_x = spec.fixed_or("j_x", 1.0);
    let alpha = spec.fixed_or("alpha", 0.0);
    let beta_a = spec.fixed_or("beta_a", (2.0 * j_x * gamma).sqrt());
    let dp = PotentialProfile::build_default(gamma, j_x)?;
    let delta = uvsolve::suggest_delta(gamma, j_x);
    let local = uvsolve::picard_solve_local(&dp, alpha, beta_a, delta)?;
    let x_end = spec.fixed_or("x_end", delta);
    let uv = if x_end > delta * (1.0 + 1e-12) {
        uvsolve::continue_solution(&local, &dp, x_end)?
    } else {
        local
    };
    let mut rows = Vec::with_capacity(uv.grid.len());
    for s in &uv.grid {
        let d = if dp.a_half_period.is_some() {
            potential::extend_d(&dp, s.x)?
        } else {
            potential::invert_d(s.x, j_x, gamma)?
        };
        rows.push(vec![s.x, s.u, s.u_prime, s.v, s.v_prime, d]);
    }
    let n = rows.len();
    Ok(Dataset {
        meta: meta_for(spec, vec![n], vec![]),
        columns: ["x", "u", "u_prime", "v", "v_prime", "d"].iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

/// theta(x) scan of the tangent closed form; rows stop at the first pole.
pub fn tangent_scan(spec: &SweepSpec) -> Result<Dataset> {
    spec.validate()?;
    let theta_l = spec.fixed_or("theta_l", 1.0);
    let j_x = spec.fixed_or("j_x", 1.0);
    let k1 = spec.fixed_or("k1", 0.0);
    let k2 = spec.fixed_or("k2", 40.0 * j_x);
    let rx = spec.range.get("x").ok_or_else(|| Error::SpecInvalid("need x range".into()))?;
    let model = tangent::build_model(theta_l, j_x, k1, k2, tangent::Branch::Plus)?;
    let pole = tangent::pole_location(&model);
    let mut rows = Vec::new();
    for x in rx.points() {
        // Stop at the first pole of the closed form.
        if pole > 0.0 && x >= pole {
            break;
        }
        match tangent::theta_tangent(&model, x) {
            Ok(th) => rows.push(vec![x, th, tangent::theta_tangent_prime(&model, th)]),
            Err(Error::Pole { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let n = rows.len();
    Ok(Dataset {
        meta: meta_for(spec, vec![n], vec![]),
        columns: ["x", "theta", "theta_prime"].iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

/// Runs a spec to its dataset, independent of output format.
pub fn run_spec(spec: &SweepSpec) -> Result<Dataset> {
    match spec.mode {
        Mode::Branch1d => Ok(sweep_1d(spec)?.to_dataset()),
        Mode::Surface2d => sweep_2d(spec),
        Mode::RegionMap => region_map(spec),
        Mode::BoundaryCurve => boundary_curve(spec),
        Mode::PotentialProfile => potential_profile(spec),
        Mode::UvProfile => uv_profile(spec),
        Mode::TangentScan => tangent_scan(spec),
    }
}

fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        // Integral values (ids, flags, counts) print exactly.
        format!("{v}")
    } else {
        format!("{v:.16e}")
    }
}

/// CSV with metadata comment lines, a header row, and 17-significant-digit
/// round-trip numbers.
pub fn emit_csv(d: &Dataset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# mode={:?} quantity={}", d.meta.mode, d.meta.quantity);
    for (k, v) in &d.meta.fixed {
        let _ = writeln!(out, "# fixed {k}={}", fmt_num(*v));
    }
    for (k, RangeSpec(lo, hi, n)) in &d.meta.range {
        let _ = writeln!(out, "# range {k}=[{},{}] count={n}", fmt_num(*lo), fmt_num(*hi));
    }
    let _ = writeln!(out, "# grid={:?}", d.meta.grid);
    for c in &d.meta.collisions {
        let _ = writeln!(out, "# collision at {}", fmt_num(*c));
    }
    let _ = writeln!(out, "{}", d.columns.join(","));
    for row in &d.rows {
        let line = row.iter().map(|&v| fmt_num(v)).collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "{line}");
    }
    out
}

pub fn emit_json(d: &Dataset) -> String {
    // BTreeMap keys and Vec order make this deterministic.
    serde_json::to_string_pretty(d).expect("dataset serialization cannot fail")
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 600.0;
const SVG_M: f64 = 60.0;

fn svg_coord(v: f64, lo: f64, hi: f64, px_lo: f64, px_hi: f64) -> f64 {
    if hi == lo {
        0.5 * (px_lo + px_hi)
    } else {
        px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo)
    }
}

fn region_color(class: f64) -> &'static str {
    match class as i64 {
        3 => "#1b6ca8",
        1 => "#d9822b",
        _ => "#888888",
    }
}

/// Fixed-viewport SVG: branch/profile datasets render one polyline per
/// (branch_id, component); region rasters render colored cells; both get
/// axis lines and min/max annotations.
pub fn emit_svg(d: &Dataset) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" viewBox=\"0 0 {SVG_W} {SVG_H}\">"
    );
    let _ = writeln!(out, "<!-- mode={:?} quantity={} -->", d.meta.mode, d.meta.quantity);

    if d.rows.is_empty() {
        let _ = writeln!(out, "</svg>");
        return out;
    }
    let col = |name: &str| d.columns.iter().position(|c| c == name);
    let minmax = |idx: usize| {
        d.rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r[idx]), hi.max(r[idx]))
        })
    };

    if d.meta.mode == Mode::RegionMap {
        let (xi, yi) = (0usize, 1usize);
        let (x_lo, x_hi) = minmax(xi);
        let (y_lo, y_hi) = minmax(yi);
        let (nx, ny) = (d.meta.grid[0] as f64, d.meta.grid[1] as f64);
        let (cw, ch) = ((SVG_W - 2.0 * SVG_M) / nx, (SVG_H - 2.0 * SVG_M) / ny);
        let ci = col("n_real").unwrap_or(2);
        for r in &d.rows {
            let px = svg_coord(r[xi], x_lo, x_hi, SVG_M, SVG_W - SVG_M) - 0.5 * cw;
            let py = svg_coord(r[yi], y_lo, y_hi, SVG_H - SVG_M, SVG_M) - 0.5 * ch;
            let _ = writeln!(
                out,
                "<rect x=\"{px:.3}\" y=\"{py:.3}\" width=\"{cw:.3}\" height=\"{ch:.3}\" fill=\"{}\"/>",
                region_color(r[ci])
            );
        }
        svg_axes(&mut out, &d.columns[xi], &d.columns[yi], x_lo, x_hi, y_lo, y_hi);
        let _ = writeln!(out, "</svg>");
        return out;
    }

    // Line plot: x = first column; series keyed by branch_id when present.
    let xi = 0usize;
    let bi = col("branch_id");
    let (x_lo, x_hi) = minmax(xi);
    let data_cols: Vec<usize> = (0..d.columns.len())
        .filter(|&i| i != xi && Some(i) != bi && d.columns[i] != "admissible" && d.columns[i] != "physical")
        .collect();
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &c in &data_cols {
        let (lo, hi) = minmax(c);
        y_lo = y_lo.min(lo);
        y_hi = y_hi.max(hi);
    }
    let branches: Vec<i64> = match bi {
        None => vec![0],
        Some(b) => {
            let mut ids: Vec<i64> = d.rows.iter().map(|r| r[b] as i64).collect();
            ids.sort_unstable();
            ids.dedup();
            ids
        }
    };
    let palette = ["#1b6ca8", "#d9822b", "#3a7d44", "#a04668", "#6b5b95", "#b23a48"];
    let mut series = 0usize;
    for id in &branches {
        for &c in &data_cols {
            let mut path = String::new();
            for r in &d.rows {
                if let Some(b) = bi {
                    if r[b] as i64 != *id {
                        continue;
                    }
                }
                let px = svg_coord(r[xi], x_lo, x_hi, SVG_M, SVG_W - SVG_M);
                let py = svg_coord(r[c], y_lo, y_hi, SVG_H - SVG_M, SVG_M);
                let _ = write!(path, "{}{px:.3},{py:.3}", if path.is_empty() { "" } else { " " });
            }
            let _ = writeln!(
                out,
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" data-branch=\"{id}\" data-component=\"{}\" points=\"{path}\"/>",
                palette[series % palette.len()],
                d.columns[c]
            );
            series += 1;
        }
    }
    svg_axes(&mut out, &d.columns[xi], "value", x_lo, x_hi, y_lo, y_hi);
    let _ = writeln!(out, "</svg>");
    out
}

fn svg_axes(out: &mut String, x_name: &str, y_name: &str, x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) {
    let _ = writeln!(
        out,
        "<line x1=\"{SVG_M}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000\"/>",
        SVG_H - SVG_M,
        SVG_W - SVG_M,
        SVG_H - SVG_M
    );
    let _ = writeln!(
        out,
        "<line x1=\"{SVG_M}\" y1=\"{SVG_M}\" x2=\"{SVG_M}\" y2=\"{}\" stroke=\"#000\"/>",
        SVG_H - SVG_M
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\">{x_name}: [{x_lo:.6}, {x_hi:.6}]</text>",
        SVG_M,
        SVG_H - SVG_M / 3.0
    );
    let _ = writeln!(
        out,
        "<text x=\"10\" y=\"{}\" font-size=\"12\">{y_name}: [{y_lo:.6}, {y_hi:.6}]</text>",
        SVG_M / 2.0
    );
}

pub fn emit_string(d: &Dataset, format: Format) -> String {
    match format {
        Format::Csv => emit_csv(d),
        Format::Json => emit_json(d),
        Format::Svg => emit_svg(d),
    }
}

pub fn emit(d: &Dataset, format: Format, path: &Path) -> Result<()> {
    std::fs::write(path, emit_string(d, format))?;
    Ok(())
}

fn spec(
    mode: Mode,
    fixed: &[(&str, f64)],
    range: &[(&str, f64, f64, usize)],
    quantity: Option<&str>,
) -> SweepSpec {
    SweepSpec {
        mode,
        fixed: fixed.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        range: range.iter().map(|(k, lo, hi, n)| (k.to_string(), RangeSpec(*lo, *hi, *n))).collect(),
        outputs: vec![Format::Csv],
        quantity: quantity.map(|s| s.to_string()),
    }
}

const SQRT3: f64 = 1.7320508075688772;

/// Named specs regenerating the figure datasets (u branches and surface,
/// Theta branches and surface, region maps).
pub fn figure_specs() -> Vec<(String, SweepSpec)> {
    let branch_cfgs: [(&str, &[(&str, f64)], &[(&str, f64, f64, usize)]); 4] = [
        ("k_hat_neg_sqrt3", &[("k_hat", -SQRT3)], &[("beta_hat", -5.0, 5.0, 1001)]),
        ("beta_hat_neg_sqrt3_9", &[("beta_hat", -SQRT3 / 9.0)], &[("k_hat", -5.0, 5.0, 1001)]),
        ("k_hat_pos_sqrt3", &[("k_hat", SQRT3)], &[("beta_hat", -5.0, 5.0, 1001)]),
        ("beta_hat_zero", &[("beta_hat", 0.0)], &[("k_hat", -5.0, 5.0, 1001)]),
    ];
    let mut out = Vec::new();
    for (i, (tag, fixed, range)) in branch_cfgs.iter().enumerate() {
        out.push((
            format!("fig{:02}_u_{tag}", i + 2),
            spec(Mode::Branch1d, fixed, range, Some("u")),
        ));
    }
    out.push((
        "fig06_u_surface".into(),
        spec(
            Mode::Surface2d,
            &[],
            &[("k_hat", -5.0, 5.0, 400), ("beta_hat", -5.0, 5.0, 400)],
            Some("u"),
        ),
    ));
    for (i, (tag, fixed, range)) in branch_cfgs.iter().enumerate() {
        out.push((
            format!("fig{:02}_theta_{tag}", i + 7),
            spec(Mode::Branch1d, fixed, range, Some("theta")),
        ));
    }
    out.push((
        "fig11_theta_surface".into(),
        spec(
            Mode::Surface2d,
            &[],
            &[("k_hat", -5.0, 5.0, 400), ("beta_hat", -5.0, 5.0, 400)],
            Some("theta"),
        ),
    ));
    for (name, (klo, khi, blo, bhi)) in [
        ("fig12_regions_full", (-5.0, 5.0, -5.0, 5.0)),
        ("fig13_regions_zoom", (-3.0, 3.0, -1.5, 1.5)),
        ("fig14_regions_wing", (-5.0, -1.0, -2.0, 2.0)),
    ] {
        out.push((
            name.into(),
            spec(
                Mode::RegionMap,
                &[],
                &[("k_hat", klo, khi, 400), ("beta_hat", blo, bhi, 400)],
                None,
            ),
        ));
    }
    out
}

/// Summary row for the `cl` subcommand.
pub fn cl_dataset(j_x: f64, volts: f64, gap: f64) -> Result<Dataset> {
    let delta = childlangmuir::solve_delta(j_x)?;
    let dimless = childlangmuir::jcl_dimensionless(delta * delta, 1.0, delta)?;
    let phys = childlangmuir::jcl_physical(volts, gap)?;
    let meta = Metadata {
        mode: Mode::PotentialProfile,
        quantity: "cl".into(),
        fixed: [("j_x".to_string(), j_x), ("volts".to_string(), volts), ("gap".to_string(), gap)]
            .into_iter()
            .collect(),
        range: BTreeMap::new(),
        grid: vec![1],
        collisions: vec![],
    };
    Ok(Dataset {
        meta,
        columns: ["delta", "k_delta", "j_dimensionless", "j_physical"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: vec![vec![delta, dimless.k_delta, dimless.j_cl, phys.j_cl]],
    })
}

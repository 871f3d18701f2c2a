//! Child-Langmuir space-charge-limited current: the physical 3/2-power law,
//! the dimensionless form with the K(delta) correction, and the lower/upper
//! solution conditions.

use crate::error::{Error, Result};
use crate::numerics;
use serde::Serialize;

/// CODATA 2018 vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.8541878128e-12;
/// CODATA 2018 electron charge-to-mass ratio, C/kg.
pub const E_OVER_M: f64 = 1.75882001e11;

/// (4/9) eps0 sqrt(2 e/m), the 3/2-law prefactor in A V^(-3/2).
pub fn cl_constant() -> f64 {
    4.0 / 9.0 * EPSILON_0 * (2.0 * E_OVER_M).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CLMode {
    Physical,
    Dimensionless,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CLResult {
    pub delta: f64,
    pub k_delta: f64,
    pub j_cl: f64,
    pub mode: CLMode,
}

/// K(delta) = (1 + delta^2)/sqrt(2 + delta^2).
pub fn k_factor(delta: f64) -> f64 {
    let d2 = delta * delta;
    (1.0 + d2) / (2.0 + d2).sqrt()
}

/// Positive root of delta^3 sqrt(2 + delta^2) = (9/4) j_x (1 + delta^2),
/// i.e. the fixed point delta = ((9/4) j_x K(delta))^(1/3).
pub fn solve_delta(j_x: f64) -> Result<f64> {
    if j_x <= 0.0 {
        return Err(Error::Domain(format!("solve_delta requires j_x > 0, got {j_x}")));
    }
    let g = |d: f64| d.powi(3) * (2.0 + d * d).sqrt() - 2.25 * j_x * (1.0 + d * d);
    let mut hi = 1.0;
    while g(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::NonConvergence("solve_delta bracket growth failed".into()));
        }
    }
    let dg = |d: f64| {
        let s = (2.0 + d * d).sqrt();
        3.0 * d * d * s + d.powi(4) / s - 4.5 * j_x * d
    };
    let root = numerics::bisect(&g, 0.0, hi, 60);
    let root = numerics::newton_bracketed(&g, &dg, (root - 1e-3).max(0.0), root + 1e-3, 1e-14, 40);
    Ok(root)
}

/// Dimensionless law j = (4/9) (1/K(delta)) V^(3/2)/gap^2.
pub fn jcl_dimensionless(v: f64, gap: f64, delta: f64) -> Result<CLResult> {
    if gap == 0.0 {
        return Err(Error::Domain("jcl_dimensionless requires gap != 0".into()));
    }
    if v < 0.0 {
        return Err(Error::Domain("jcl_dimensionless requires V >= 0".into()));
    }
    let k = k_factor(delta);
    Ok(CLResult {
        delta,
        k_delta: k,
        j_cl: 4.0 / 9.0 / k * v.powf(1.5) / (gap * gap),
        mode: CLMode::Dimensionless,
    })
}

/// Physical law j = (4/9) eps0 sqrt(2 e/m) V^(3/2)/gap^2 in A/m^2.
pub fn jcl_physical(v_volts: f64, gap_m: f64) -> Result<CLResult> {
    if gap_m == 0.0 {
        return Err(Error::Domain("jcl_physical requires gap != 0".into()));
    }
    if v_volts < 0.0 {
        return Err(Error::Domain("jcl_physical requires V >= 0".into()));
    }
    Ok(CLResult {
        delta: 0.0,
        k_delta: k_factor(0.0),
        j_cl: cl_constant() * v_volts.powf(1.5) / (gap_m * gap_m),
        mode: CLMode::Physical,
    })
}

/// Lower-solution inequality 4 delta^3 >= 9 j_x^max (1+delta^2)/sqrt(2+delta^2)
/// and upper-solution inequality phi_L >= delta^2.
pub fn bounds_check(j_x_max: f64, delta: f64, phi_l: f64) -> (bool, bool) {
    let d2 = delta * delta;
    let lower = 4.0 * delta.powi(3) >= 9.0 * j_x_max * (1.0 + d2) / (2.0 + d2).sqrt();
    let upper = phi_l >= d2;
    (lower, upper)
}

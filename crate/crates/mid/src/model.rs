//! Raw diode parameters and the scalings shared by every other module.
//!
//! The anode-side effective potential is Theta_L = (1+phi_L)^2 - 1 - a_L^2;
//! the cubic lives in the reduced parameters k_hat = k/(8 j_x),
//! beta_hat = 4 beta^2/(8 j_x), and the Cauchy problem in gamma = beta^2/(2 j_x).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Raw diode parameters. `beta_a` is the magnetic-potential slope v'(0);
/// `beta_phi` the electric-potential slope phi'(0). The two roles share the
/// letter beta in different sections, so both are carried explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiodeParams {
    pub j_x: f64,
    pub beta_a: f64,
    pub beta_phi: f64,
    pub k: f64,
    pub phi_l: f64,
    pub a_l: f64,
}

impl DiodeParams {
    pub fn new(j_x: f64, beta_a: f64, beta_phi: f64, k: f64) -> Self {
        DiodeParams { j_x, beta_a, beta_phi, k, phi_l: 0.0, a_l: 0.0 }
    }
}

/// Reduced cubic parameters (k_hat, beta_hat). Sweep tooling may construct
/// these directly, including beta_hat < 0 regions with no real-beta preimage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledParams {
    pub k_hat: f64,
    pub beta_hat: f64,
}

impl ScaledParams {
    pub fn new(k_hat: f64, beta_hat: f64) -> Self {
        ScaledParams { k_hat, beta_hat }
    }
}

/// gamma = beta^2/(2 j_x) with the positive-sign convention (the only one
/// consistent with the first integral u'^2 - v'^2 = 2 j_x (sqrt(theta) - gamma)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaParam {
    pub gamma: f64,
}

/// k_hat = k/(8 j_x), beta_hat = 4 beta_phi^2/(8 j_x).
pub fn scale_params(p: &DiodeParams) -> Result<ScaledParams> {
    if p.j_x == 0.0 {
        return Err(Error::ScalingUndefined);
    }
    Ok(ScaledParams {
        k_hat: p.k / (8.0 * p.j_x),
        beta_hat: 4.0 * p.beta_phi * p.beta_phi / (8.0 * p.j_x),
    })
}

/// gamma = beta_a^2/(2 j_x); requires j_x > 0.
pub fn gamma_of(p: &DiodeParams) -> Result<GammaParam> {
    if p.j_x <= 0.0 {
        return Err(Error::Domain(format!("gamma_of requires j_x > 0, got {}", p.j_x)));
    }
    Ok(GammaParam { gamma: p.beta_a * p.beta_a / (2.0 * p.j_x) })
}

/// Theta_L = (1+phi_L)^2 - 1 - a_L^2; negative iff the diode is insulated.
pub fn theta_anode(phi_l: f64, a_l: f64) -> f64 {
    (1.0 + phi_l) * (1.0 + phi_l) - 1.0 - a_l * a_l
}

//! Turning-point effective potentials Theta_d = u^2: admissibility filtering,
//! the Delta_u = 0 boundary curves, and the parameter-plane classification.

use crate::cubic::{self, CubicCase, CubicRoots};
use crate::error::Result;
use crate::model::{GammaParam, ScaledParams};
use num_complex::Complex64;

const CBRT4: f64 = 1.5874010519681994;

/// A Theta_d branch value together with the root it came from.
#[derive(Clone, Copy, Debug)]
pub struct ThetaBranch {
    pub value: Complex64,
    pub source_root: Complex64,
    pub root_index: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ThetaBranches {
    /// Squares of roots with Re(u) >= 0.
    pub admissible: Vec<ThetaBranch>,
    /// Squares of real roots u >= 0, sorted ascending.
    pub physical: Vec<f64>,
}

/// Region classification flags per the parameter-plane propositions.
#[derive(Clone, Copy, Debug)]
pub struct RegionClass {
    pub delta_sign: i8,
    pub n_real_roots: usize,
    pub n_physical: usize,
    pub prop8_applies: bool,
    pub prop9_applies: bool,
    pub prop10_boundary: bool,
    /// S = cbrt(A1+A2) + cbrt(A1-A2); NaN outside the Delta < 0 regime.
    pub s_value: f64,
}

fn real_tol(z: Complex64) -> f64 {
    1e-9 * z.norm().max(1.0)
}

/// Squares the roots with Re(u) >= 0 (admissible) and the real roots with
/// u >= 0 (physical).
pub fn theta_branches(roots: &CubicRoots) -> ThetaBranches {
    let mut out = ThetaBranches::default();
    for (i, &u) in roots.roots.iter().enumerate() {
        let tol = real_tol(u);
        if u.re >= -tol {
            out.admissible.push(ThetaBranch { value: u * u, source_root: u, root_index: i });
            if u.im.abs() <= tol {
                out.physical.push(u.re.max(0.0).powi(2));
            }
        }
    }
    out.physical.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// The two branches beta_hat(+-) of the Delta_u = 0 curve,
/// beta_hat(+-) = [k (9 - 2k^2) +- 2 (k^2-3)^{3/2}]/27, returned as
/// (min, max); `None` when k^2 < 3.
pub fn delta_zero_boundary(k_hat: f64) -> Option<(f64, f64)> {
    let mut d = k_hat * k_hat - 3.0;
    if d < 0.0 {
        // Snap roundoff at |k_hat| = sqrt 3 onto the tangency point.
        if d > -1e-12 * (k_hat * k_hat).max(1.0) {
            d = 0.0;
        } else {
            return None;
        }
    }
    let base = k_hat * (9.0 - 2.0 * k_hat * k_hat);
    let spread = 2.0 * d.powf(1.5);
    Some(((base - spread) / 27.0, (base + spread) / 27.0))
}

/// Evaluates Delta_u, S, the S0 comparisons of the one-real-root
/// propositions, and the arccos boundary test, and counts roots.
pub fn classify_region(sp: ScaledParams) -> Result<RegionClass> {
    let roots = cubic::solve(sp)?;
    Ok(classify_from_roots(sp, &roots))
}

pub fn classify_from_roots(sp: ScaledParams, roots: &CubicRoots) -> RegionClass {
    let (k, b) = (sp.k_hat, sp.beta_hat);
    let delta = roots.discriminant;
    let delta_sign: i8 = match roots.case_tag {
        CubicCase::TripleRoot | CubicCase::DoubleRoot => 0,
        CubicCase::OneRealTwoComplex => -1,
        CubicCase::ThreeReal => 1,
    };
    let n_real_roots = roots.roots.iter().filter(|z| z.im.abs() <= real_tol(**z)).count();
    let n_physical = theta_branches(roots).physical.len();

    let (s_value, prop8, prop9) = if delta_sign < 0 {
        let s = cubic::cardano_s_sum(sp);
        // Strict hypotheses; a relative guard keeps equality cases (e.g.
        // beta_hat = 0, where S = 6 k_hat/cbrt4 exactly) from flipping on
        // roundoff.
        let tol = 1e-9 * (1.0 + s.abs());
        (s, 6.0 * k / CBRT4 < s - tol, -12.0 * k / CBRT4 > s + tol)
    } else {
        (f64::NAN, false, false)
    };

    // Prop. 10 boundary: Delta > 0 and arccos(U) = (1/3) arccos(V), checked
    // through the triple-angle form 4U^3 - 3U = V; holds exactly on
    // beta_hat = 0, k_hat^2 >= 4.
    let mut prop10 = false;
    if delta > 0.0 && k * k > 3.0 {
        let u = k / (2.0 * (k * k - 3.0).sqrt());
        let v = (2.0 * k * k * k - 9.0 * k + 27.0 * b) / (18.0 - 6.0 * k * k)
            * (9.0 / (k * k - 3.0)).sqrt();
        if u.abs() <= 1.0 && v.abs() <= 1.0 {
            let residual = 4.0 * u * u * u - 3.0 * u - v;
            prop10 = b.abs() <= 1e-9 && residual.abs() <= 1e-8;
        }
    }

    RegionClass {
        delta_sign,
        n_real_roots,
        n_physical,
        prop8_applies: prop8,
        prop9_applies: prop9,
        prop10_boundary: prop10,
        s_value,
    }
}

/// Cross-module check: the turning-point cubic with k_hat = -gamma,
/// beta_hat = 0 must reproduce {0} and the W1 zeros.
pub fn ivp_consistency_roots(gamma: GammaParam) -> Result<ThetaBranches> {
    let roots = cubic::solve(ScaledParams::new(-gamma.gamma, 0.0))?;
    Ok(theta_branches(&roots))
}

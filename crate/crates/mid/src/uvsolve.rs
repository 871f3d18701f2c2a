//! Picard solution of the coupled linear integral equations for (u, v) on a
//! contraction interval, 4th-order continuation of u'' = j_x u / sqrt(D),
//! the identity u^2 - 1 - v^2 = D, and the quasilaminar vacuum extension.
//!
//! The kernel integrals are computed on a cubically graded grid s = q^3 so
//! that the integrable D^{-1/2} ~ s^{-2/3} singularity at 0 becomes a
//! bounded integrand in q.

use crate::error::{Error, Result};
use crate::numerics;
use crate::potential::{self, GammaCase, PotentialProfile};

#[derive(Clone, Copy, Debug)]
pub struct UVSample {
    pub x: f64,
    pub u: f64,
    pub v: f64,
    pub u_prime: f64,
    pub v_prime: f64,
}

#[derive(Clone, Debug)]
pub struct UVProfile {
    pub grid: Vec<UVSample>,
    pub alpha: f64,
    pub beta_a: f64,
    /// Picard interval length delta.
    pub delta_contraction: f64,
    /// Contraction constant L = j_x delta int_0^delta D^{-1/2}.
    pub l_constant: f64,
    pub iterations: usize,
    /// Sup-norm differences of successive Picard iterates.
    pub diff_history: Vec<f64>,
    pub gamma: f64,
    pub j_x: f64,
}

/// A delta with estimated contraction constant ~ 1/4, from the asymptotic
/// L ~ 3 j_x delta^{4/3} / sqrt(c).
pub fn suggest_delta(gamma: f64, j_x: f64) -> f64 {
    let c = potential::asymptotic_coefficient(j_x);
    let mut delta = (0.25 * c.sqrt() / (3.0 * j_x)).powf(0.75);
    if potential::gamma_case(gamma) == GammaCase::Supercritical {
        if let Ok(a) = potential::half_period(gamma, j_x) {
            delta = delta.min(0.25 * a);
        }
    }
    delta
}

const PICARD_TOL: f64 = 1e-10;
const PICARD_POINTS: usize = 2049;

/// Banach iteration for the fixed points of
/// T1 w = 1 + alpha x + j_x int_0^x (x-s) w/sqrt(D) ds (u) and
/// T2 w = beta x + j_x int_0^x (x-s) w/sqrt(D) ds (v) on [0, delta].
pub fn picard_solve_local(dp: &PotentialProfile, alpha: f64, beta: f64, delta: f64) -> Result<UVProfile> {
    if delta <= 0.0 {
        return Err(Error::Domain(format!("picard interval must be positive, got {delta}")));
    }
    let (gamma, j_x) = (dp.gamma, dp.j_x);
    let m = PICARD_POINTS;
    let h = delta.powf(1.0 / 3.0) / (m as f64 - 1.0);
    let qs: Vec<f64> = (0..m).map(|i| i as f64 * h).collect();
    let xs: Vec<f64> = qs.iter().map(|&q| q * q * q).collect();
    // kernel weight in q: 3 q^2 / sqrt(D(q^3)); limit 3/sqrt(c) at q = 0.
    let c_asym = potential::asymptotic_coefficient(j_x);
    let mut kw = vec![0.0; m];
    kw[0] = 3.0 / c_asym.sqrt();
    for i in 1..m {
        let d = potential::invert_d(xs[i], j_x, gamma)?;
        kw[i] = 3.0 * qs[i] * qs[i] / d.sqrt();
    }

    let l_constant = j_x * delta * numerics::cumulative_simpson(&kw, h)[m - 1];
    if l_constant > 0.5 {
        return Err(Error::ContractionFailure { l: l_constant, delta });
    }

    let apply = |w: &[f64], affine: &dyn Fn(f64) -> f64| -> Vec<f64> {
        let g1: Vec<f64> = (0..m).map(|i| kw[i] * w[i]).collect();
        let g2: Vec<f64> = (0..m).map(|i| kw[i] * w[i] * xs[i]).collect();
        let c1 = numerics::cumulative_simpson(&g1, h);
        let c2 = numerics::cumulative_simpson(&g2, h);
        (0..m).map(|i| affine(xs[i]) + j_x * (xs[i] * c1[i] - c2[i])).collect()
    };

    let max_iter = ((PICARD_TOL.ln() / l_constant.max(0.05).ln()).ceil() as usize) + 30;
    let mut u: Vec<f64> = xs.iter().map(|&x| 1.0 + alpha * x).collect();
    let mut v: Vec<f64> = xs.iter().map(|&x| beta * x).collect();
    let mut diff_history = Vec::new();
    let mut iterations = 0;
    for _ in 0..max_iter {
        let un = apply(&u, &|x| 1.0 + alpha * x);
        let vn = apply(&v, &|x| beta * x);
        let du = u.iter().zip(&un).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
        let dv = v.iter().zip(&vn).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
        let diff = du.max(dv);
        diff_history.push(diff);
        u = un;
        v = vn;
        iterations += 1;
        if diff <= PICARD_TOL {
            break;
        }
    }
    if *diff_history.last().unwrap() > PICARD_TOL {
        return Err(Error::NonConvergence(format!(
            "Picard iteration did not reach {PICARD_TOL} in {max_iter} iterations"
        )));
    }

    // First derivatives from the cumulative kernel integrals.
    let g1u: Vec<f64> = (0..m).map(|i| kw[i] * u[i]).collect();
    let g1v: Vec<f64> = (0..m).map(|i| kw[i] * v[i]).collect();
    let cu = numerics::cumulative_simpson(&g1u, h);
    let cv = numerics::cumulative_simpson(&g1v, h);
    let grid = (0..m)
        .map(|i| UVSample {
            x: xs[i],
            u: u[i],
            v: v[i],
            u_prime: alpha + j_x * cu[i],
            v_prime: beta + j_x * cv[i],
        })
        .collect();

    Ok(UVProfile {
        grid,
        alpha,
        beta_a: beta,
        delta_contraction: delta,
        l_constant,
        iterations,
        diff_history,
        gamma,
        j_x,
    })
}

/// Piecewise cubic Hermite evaluator for D over the profile samples, with a
/// direct inversion fallback outside the sampled range and periodic folding
/// for gamma > 2.
struct DEval<'a> {
    dp: &'a PotentialProfile,
}

impl DEval<'_> {
    fn eval(&self, x: f64) -> Result<f64> {
        let mut xm = x;
        if let Some(a) = self.dp.a_half_period {
            let period = 2.0 * a;
            xm = x % period;
            if xm < 0.0 {
                xm += period;
            }
            if xm > a {
                xm = a - (xm - a);
            }
        }
        let s = &self.dp.samples;
        if xm < s[0].x || xm > s[s.len() - 1].x {
            return potential::invert_d(xm, self.dp.j_x, self.dp.gamma);
        }
        let i = match s.binary_search_by(|p| p.x.partial_cmp(&xm).unwrap()) {
            Ok(i) => return Ok(s[i].d),
            Err(i) => i - 1,
        };
        let (a, b) = (&s[i], &s[i + 1]);
        let hh = b.x - a.x;
        let t = (xm - a.x) / hh;
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        Ok(h00 * a.d + hh * h10 * a.d_prime + h01 * b.d + hh * h11 * b.d_prime)
    }
}

const CONT_TOL: f64 = 1e-12;
const D_FLOOR: f64 = 1e-7;

/// Extends (u, v) from the Picard interval endpoint by adaptive 4th-order
/// (step-doubled RK4) integration of w'' = j_x w / sqrt(D).
pub fn continue_solution(local: &UVProfile, dp: &PotentialProfile, x_end: f64) -> Result<UVProfile> {
    let delta = local.delta_contraction;
    if x_end < delta {
        return Err(Error::Domain(format!("x_end = {x_end} below the Picard interval end {delta}")));
    }
    let mut out = local.clone();
    if x_end == delta {
        return Ok(out);
    }
    let deval = DEval { dp };
    let j_x = local.j_x;
    let last = *local.grid.last().unwrap();
    let mut x = last.x;
    let mut y = [last.u, last.u_prime, last.v, last.v_prime];
    let rhs = |x: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        let d = deval.eval(x)?;
        if d < D_FLOOR {
            return Err(Error::DomainEnd { reached: x, x_end });
        }
        let c = j_x / d.sqrt();
        Ok([y[1], c * y[0], y[3], c * y[2]])
    };
    let rk4 = |x: f64, y: &[f64; 4], h: f64| -> Result<[f64; 4]> {
        let k1 = rhs(x, y)?;
        let y2 = std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]);
        let k2 = rhs(x + 0.5 * h, &y2)?;
        let y3 = std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]);
        let k3 = rhs(x + 0.5 * h, &y3)?;
        let y4 = std::array::from_fn(|i| y[i] + h * k3[i]);
        let k4 = rhs(x + h, &y4)?;
        Ok(std::array::from_fn(|i| {
            y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        }))
    };
    let mut h = ((x_end - delta) / 64.0).min(delta).max(1e-6);
    let mut guard = 0usize;
    while x < x_end {
        guard += 1;
        if guard > 2_000_000 {
            return Err(Error::NonConvergence("continuation step count exceeded".into()));
        }
        h = h.min(x_end - x);
        let full = rk4(x, &y, h);
        let (full, half2) = match full {
            Ok(f) => {
                let half1 = rk4(x, &y, 0.5 * h)?;
                (f, rk4(x + 0.5 * h, &half1, 0.5 * h)?)
            }
            Err(Error::DomainEnd { reached, .. }) => {
                return Err(Error::DomainEnd { reached, x_end });
            }
            Err(e) => return Err(e),
        };
        let err = (0..4)
            .map(|i| (full[i] - half2[i]).abs() / 15.0)
            .fold(0.0f64, f64::max);
        let scale = y.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
        if err <= CONT_TOL * scale {
            x += h;
            // Local 5th-order value from Richardson extrapolation.
            y = std::array::from_fn(|i| half2[i] + (half2[i] - full[i]) / 15.0);
            out.grid.push(UVSample { x, u: y[0], v: y[2], u_prime: y[1], v_prime: y[3] });
            if err < 0.1 * CONT_TOL * scale {
                h *= 1.5;
            }
        } else {
            h *= 0.5;
            if h < 1e-12 {
                return Err(Error::NonConvergence("continuation step underflow".into()));
            }
        }
    }
    Ok(out)
}

/// Max over the grid of |u^2 - 1 - v^2 - D|; valid only for alpha = 0 and
/// beta^2 = 2 j_x gamma.
pub fn identity_residual(uv: &UVProfile, dp: &PotentialProfile) -> Result<f64> {
    if uv.alpha != 0.0 {
        return Err(Error::Domain(format!(
            "identity u^2 - 1 - v^2 = D requires alpha = 0, got {}",
            uv.alpha
        )));
    }
    let expect_beta_sq = 2.0 * uv.j_x * uv.gamma;
    if (uv.beta_a * uv.beta_a - expect_beta_sq).abs() > 1e-9 * expect_beta_sq.max(1.0) {
        return Err(Error::Domain(format!(
            "identity requires beta^2 = 2 j_x gamma; beta^2 = {}, 2 j_x gamma = {expect_beta_sq}",
            uv.beta_a * uv.beta_a
        )));
    }
    let deval = DEval { dp };
    let mut max = 0.0f64;
    for s in &uv.grid {
        let d = deval.eval(s.x)?;
        max = max.max((s.u * s.u - 1.0 - s.v * s.v - d).abs());
    }
    Ok(max)
}

/// Linear vacuum continuation beyond x*: phi and a continue with constant
/// slope to the anode at x = 1.
pub fn vacuum_extension(
    x_star: f64,
    u_star: f64,
    up_star: f64,
    v_star: f64,
    vp_star: f64,
) -> (f64, f64, [(f64, f64); 2]) {
    let phi_line = (u_star - 1.0 - up_star * x_star, up_star);
    let a_line = (v_star - vp_star * x_star, vp_star);
    let phi_l = phi_line.0 + phi_line.1;
    let a_l = a_line.0 + a_line.1;
    (phi_l, a_l, [phi_line, a_line])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve_case(gamma: f64, j_x: f64, alpha: f64, beta: f64, x_end: f64) -> (UVProfile, PotentialProfile) {
        let dp = match potential::gamma_case(gamma) {
            GammaCase::Supercritical => {
                let a = potential::half_period(gamma, j_x).unwrap();
                PotentialProfile::build(gamma, j_x, 1e-4 * a, a, 1024).unwrap()
            }
            _ => PotentialProfile::build(gamma, j_x, 1e-5, x_end.max(1.0) * 1.05, 1024).unwrap(),
        };
        let delta = suggest_delta(gamma, j_x);
        let local = picard_solve_local(&dp, alpha, beta, delta).unwrap();
        let uv = continue_solution(&local, &dp, x_end).unwrap();
        (uv, dp)
    }

    #[test]
    fn picard_contraction_example() {
        let dp = PotentialProfile::build(0.0, 1.0, 1e-5, 1.0, 512).unwrap();
        let local = picard_solve_local(&dp, 0.0, 0.0, 0.05).unwrap();
        assert!(local.l_constant < 0.5);
        assert!(local.l_constant > 0.0);
        // v fixed point is the zero function when beta = 0.
        let vmax = local.grid.iter().map(|s| s.v.abs()).fold(0.0f64, f64::max);
        assert!(vmax <= 1e-12);
        // u(0) = 1, u'(0) = alpha.
        assert_eq!(local.grid[0].u, 1.0);
        assert_eq!(local.grid[0].u_prime, 0.0);
    }

    #[test]
    fn contraction_failure_for_large_delta() {
        let dp = PotentialProfile::build(0.0, 1.0, 1e-5, 6.0, 512).unwrap();
        match picard_solve_local(&dp, 0.0, 0.0, 5.0) {
            Err(Error::ContractionFailure { l, .. }) => assert!(l > 0.5),
            other => panic!("expected contraction failure, got {other:?}"),
        }
    }

    #[test]
    fn geometric_convergence() {
        let dp = PotentialProfile::build(0.0, 1.0, 1e-5, 1.0, 512).unwrap();
        let local = picard_solve_local(&dp, 0.3, 0.2, 0.05).unwrap();
        // Successive differences decay at least as fast as L.
        let h = &local.diff_history;
        for w in h.windows(2) {
            if w[0] > 1e-13 && w[1] > 1e-14 {
                assert!(w[1] <= w[0] * local.l_constant.max(0.05) * 1.5, "{:?}", h);
            }
        }
    }

    #[test]
    fn identity_gamma_zero() {
        let (uv, dp) = solve_case(0.0, 1.0, 0.0, 0.0, 5.0);
        let r = identity_residual(&uv, &dp).unwrap();
        // The identity error is amplified ~ u^2 by the solution growth.
        assert!(r <= 1e-5, "residual {r}");
    }

    #[test]
    fn identity_gamma_two() {
        let (uv, dp) = solve_case(2.0, 1.0, 0.0, 2.0, 5.0);
        let r = identity_residual(&uv, &dp).unwrap();
        assert!(r <= 1e-5, "residual {r}");
    }

    #[test]
    fn identity_precondition_errors() {
        let (uv, dp) = solve_case(0.0, 1.0, 0.1, 0.0, 1.0);
        assert!(identity_residual(&uv, &dp).is_err());
    }

    #[test]
    fn supercritical_domain_end() {
        let gamma = 2.5;
        let a = potential::half_period(gamma, 1.0).unwrap();
        let dp = PotentialProfile::build(gamma, 1.0, 1e-4 * a, a, 1024).unwrap();
        let delta = suggest_delta(gamma, 1.0);
        let beta = (2.0 * gamma).sqrt();
        let local = picard_solve_local(&dp, 0.0, beta, delta).unwrap();
        match continue_solution(&local, &dp, 3.0 * a) {
            Err(Error::DomainEnd { reached, .. }) => {
                assert!((reached - 2.0 * a).abs() < 0.1 * a, "reached {reached}, 2a = {}", 2.0 * a);
            }
            other => panic!("expected domain end, got {other:?}"),
        }
    }

    #[test]
    fn energy_identity() {
        // u'^2 - v'^2 = 2 j_x sqrt(D) - beta^2 along the solution.
        let gamma: f64 = 0.5;
        let beta = (2.0 * gamma).sqrt();
        let (uv, dp) = solve_case(gamma, 1.0, 0.0, beta, 2.0);
        let deval = DEval { dp: &dp };
        for s in uv.grid.iter().step_by(17) {
            let d = deval.eval(s.x).unwrap();
            let lhs = s.u_prime * s.u_prime - s.v_prime * s.v_prime;
            let rhs = 2.0 * uv.j_x * d.sqrt() - beta * beta;
            assert!((lhs - rhs).abs() < 1e-5, "x = {}: {lhs} vs {rhs}", s.x);
        }
    }

    #[test]
    fn linearity_in_alpha_and_beta() {
        let dp = PotentialProfile::build(0.0, 1.0, 1e-5, 1.0, 512).unwrap();
        let delta = suggest_delta(0.0, 1.0);
        let u0 = picard_solve_local(&dp, 0.0, 0.0, delta).unwrap();
        let u1 = picard_solve_local(&dp, 1.0, 0.0, delta).unwrap();
        let u2 = picard_solve_local(&dp, 2.0, 0.0, delta).unwrap();
        for i in 0..u0.grid.len() {
            let d01 = u1.grid[i].u - u0.grid[i].u;
            let d12 = u2.grid[i].u - u1.grid[i].u;
            assert!((d01 - d12).abs() < 1e-9);
        }
        // v is linear in beta.
        let v1 = picard_solve_local(&dp, 0.0, 1.0, delta).unwrap();
        let v2 = picard_solve_local(&dp, 0.0, 2.0, delta).unwrap();
        for i in 0..v1.grid.len() {
            assert!((2.0 * v1.grid[i].v - v2.grid[i].v).abs() < 1e-9);
        }
    }

    #[test]
    fn continuation_noop_and_junction() {
        let dp = PotentialProfile::build(0.0, 1.0, 1e-5, 2.0, 512).unwrap();
        let delta = suggest_delta(0.0, 1.0);
        let local = picard_solve_local(&dp, 0.0, 0.3, delta).unwrap();
        let same = continue_solution(&local, &dp, delta).unwrap();
        assert_eq!(same.grid.len(), local.grid.len());
        let ext = continue_solution(&local, &dp, 1.5).unwrap();
        // Continuous first difference across the junction.
        let n0 = local.grid.len();
        let a = &ext.grid[n0 - 1];
        let b = &ext.grid[n0];
        let slope = (b.u - a.u) / (b.x - a.x);
        // Trapezoid of the endpoint derivatives matches the chord to O(h^2).
        assert!((slope - 0.5 * (a.u_prime + b.u_prime)).abs() < 1e-4);
        assert!(ext.grid.last().unwrap().x >= 1.5 - 1e-12);
    }

    #[test]
    fn vacuum_extension_examples() {
        let (phi_l, a_l, _) = vacuum_extension(0.5, 1.2, 0.0, 0.3, 0.0);
        assert!((phi_l - 0.2).abs() < 1e-15);
        assert!((a_l - 0.3).abs() < 1e-15);
        let (phi_l, _, _) = vacuum_extension(1.0, 1.2, 0.7, 0.0, 0.0);
        assert!((phi_l - 0.2).abs() < 1e-15);
        let (phi_l, _, _) = vacuum_extension(0.5, 1.2, 0.4, 0.0, 0.0);
        assert!((phi_l - 0.4).abs() < 1e-15);
    }
}

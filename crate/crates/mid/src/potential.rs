//! The effective potential D(x): W1/W2 polynomials and zeros, the singular
//! integral I(z) = int_0^z ds/(s^{1/4} sqrt(W1(s))), its monotone inversion
//! D = (I/sqrt(8 j_x))^{-1}, the gamma-case structure with periodic
//! extension, and the x^{4/3} asymptotic.
//!
//! The substitution s = t^4 removes the s^{-1/4} endpoint singularity
//! exactly; for gamma > 2 the square-root singularity of the integrand at
//! s11 is removed by a local sqrt(s11 - s) substitution over the last 1% of
//! the t-interval.

use crate::error::{Error, Result};
use crate::numerics;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GammaCase {
    /// gamma < 2: D grows without bound.
    Subcritical,
    /// gamma = 2: D -> 1 as x -> infinity.
    Critical,
    /// gamma > 2: D periodic with half-period a, max s11.
    Supercritical,
}

/// Zeros of W1 and W2 as functions of s (present only where real).
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct WZeros {
    pub s11: Option<f64>,
    pub s12: Option<f64>,
    pub s21: Option<f64>,
    pub s22: Option<f64>,
}

/// W1(s) = 1 - gamma sqrt(s) + s.
pub fn w1(gamma: f64, s: f64) -> f64 {
    1.0 - gamma * s.sqrt() + s
}

/// W2(s) = 1/3 - (2/3) gamma sqrt(s) + s.
pub fn w2(gamma: f64, s: f64) -> f64 {
    1.0 / 3.0 - 2.0 / 3.0 * gamma * s.sqrt() + s
}

/// Closed-form zeros: s1i real iff gamma >= 2, s2i real iff gamma >= sqrt 3.
/// The small roots are computed through the product identities s11 s12 = 1,
/// s21 s22 = 1/9 to avoid cancellation.
pub fn w_zeros(gamma: f64) -> WZeros {
    let mut out = WZeros::default();
    if gamma >= 2.0 {
        // sqrt(s) roots of X^2 - gamma X + 1.
        let big = 0.5 * (gamma + (gamma * gamma - 4.0).sqrt());
        out.s12 = Some(big * big);
        out.s11 = Some(1.0 / (big * big));
    }
    if gamma >= 3f64.sqrt() {
        // sqrt(s) roots of X^2 - (2/3) gamma X + 1/3 (3 W2 scaled).
        let disc = (gamma * gamma - 3.0).max(0.0).sqrt();
        let big = (gamma + disc) / 3.0;
        out.s22 = Some(big * big);
        out.s21 = Some(1.0 / (9.0 * big * big));
    }
    out
}

pub fn gamma_case(gamma: f64) -> GammaCase {
    if (gamma - 2.0).abs() < 1e-12 {
        GammaCase::Critical
    } else if gamma < 2.0 {
        GammaCase::Subcritical
    } else {
        GammaCase::Supercritical
    }
}

/// Upper end of I's domain: infinity (gamma < 2), 1 (gamma = 2), s11 (gamma > 2).
pub fn domain_b(gamma: f64) -> f64 {
    match gamma_case(gamma) {
        GammaCase::Subcritical => f64::INFINITY,
        GammaCase::Critical => 1.0,
        GammaCase::Supercritical => w_zeros(gamma).s11.unwrap(),
    }
}

/// t-space roots (t11, t12) of 1 - gamma t^2 + t^4 for gamma > 2.
fn t_roots(gamma: f64) -> (f64, f64) {
    let big = 0.5 * (gamma + (gamma * gamma - 4.0).sqrt());
    ((1.0 / big).sqrt(), big.sqrt())
}

/// Exact antiderivative of 4 t^2/(1 - t^2) on [0, T], the critical-case
/// (gamma = 2) integrand where sqrt(W1) = 1 - t^2.
fn critical_i_of_t(t: f64, one_minus_t: f64) -> f64 {
    -4.0 * t + 2.0 * (t.ln_1p() - one_minus_t.ln())
}

fn critical_i(z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let t = z.powf(0.25);
    let omt = -(0.25 * z.ln()).exp_m1();
    critical_i_of_t(t, omt)
}

const QUAD_TOL: f64 = 5e-13;

/// Integral of 4 t^2/sqrt(1 - gamma t^2 + t^4) over [t1, t2] for the
/// non-critical cases, with the endpoint substitution near t11 when
/// gamma > 2.
fn i_t_interval(gamma: f64, t1: f64, t2: f64) -> f64 {
    if t2 <= t1 {
        return 0.0;
    }
    if gamma > 2.0 {
        let (t11, t12) = t_roots(gamma);
        let cut = 0.99 * t11;
        let f = |t: f64| {
            let w = ((t11 - t) * (t11 + t) * (t12 - t) * (t12 + t)).max(0.0);
            4.0 * t * t / w.sqrt()
        };
        if t2 <= cut {
            return numerics::integrate(&f, t1, t2, QUAD_TOL);
        }
        let lo = t1.max(cut);
        let head = if t1 < cut { numerics::integrate(&f, t1, cut, QUAD_TOL) } else { 0.0 };
        // w = sqrt(t11 - t) removes the endpoint singularity at t11.
        let g = |w: f64| {
            let t = t11 - w * w;
            let rest = ((t11 + t) * (t12 - t) * (t12 + t)).max(1e-300);
            8.0 * t * t / rest.sqrt()
        };
        let w_hi = (t11 - lo).max(0.0).sqrt();
        let w_lo = (t11 - t2).max(0.0).sqrt();
        head + numerics::integrate(&g, w_lo, w_hi, QUAD_TOL)
    } else {
        let f = |t: f64| {
            let t2_ = t * t;
            let w = (1.0 - gamma * t2_ + t2_ * t2_).max(1e-300);
            4.0 * t * t / w.sqrt()
        };
        numerics::integrate(&f, t1, t2, QUAD_TOL)
    }
}

/// I(z) = int_0^z ds/(s^{1/4} sqrt(W1(s))).
pub fn integral_i(z: f64, gamma: f64) -> Result<f64> {
    integral_i_between(0.0, z, gamma)
}

/// I(z2) - I(z1) for 0 <= z1 <= z2 <= b(gamma).
pub fn integral_i_between(z1: f64, z2: f64, gamma: f64) -> Result<f64> {
    if z1 < 0.0 || z2 < z1 {
        return Err(Error::Domain(format!("integral_I: bad interval [{z1}, {z2}]")));
    }
    let b = domain_b(gamma);
    match gamma_case(gamma) {
        GammaCase::Critical => {
            if z2 >= 1.0 {
                return Err(Error::Domain(format!("integral_I: z = {z2} outside [0, 1) for gamma = 2")));
            }
            Ok(critical_i(z2) - critical_i(z1))
        }
        GammaCase::Supercritical => {
            if z2 > b * (1.0 + 1e-12) {
                return Err(Error::Domain(format!("integral_I: z = {z2} beyond s11 = {b}")));
            }
            Ok(i_t_interval(gamma, z1.powf(0.25), z2.min(b).powf(0.25)))
        }
        GammaCase::Subcritical => Ok(i_t_interval(gamma, z1.powf(0.25), z2.powf(0.25))),
    }
}

/// dI/dz = 1/(z^{1/4} sqrt(W1(z))).
fn i_prime(z: f64, gamma: f64) -> f64 {
    1.0 / (z.powf(0.25) * w1(gamma, z).max(1e-300).sqrt())
}

/// Leading-order asymptotic D(x) = (3/sqrt 2)^{4/3} j_x^{2/3} x^{4/3}.
pub fn asymptotic_d(x: f64, j_x: f64) -> f64 {
    asymptotic_coefficient(j_x) * x.powf(4.0 / 3.0)
}

/// The prefactor (3/sqrt 2)^{4/3} j_x^{2/3}.
pub fn asymptotic_coefficient(j_x: f64) -> f64 {
    (3.0 / 2f64.sqrt()).powf(4.0 / 3.0) * j_x.powf(2.0 / 3.0)
}

/// Half-period a = I(s11)/sqrt(8 j_x) for gamma > 2.
pub fn half_period(gamma: f64, j_x: f64) -> Result<f64> {
    if gamma_case(gamma) != GammaCase::Supercritical {
        return Err(Error::Domain(format!("half_period requires gamma > 2, got {gamma}")));
    }
    Ok(integral_i(domain_b(gamma), gamma)? / (8.0 * j_x).sqrt())
}

/// The unique D with I(D) = sqrt(8 j_x) x, by monotone bracketing with a
/// Newton polish, seeded from the small-x asymptotic.
pub fn invert_d(x: f64, j_x: f64, gamma: f64) -> Result<f64> {
    if j_x <= 0.0 {
        return Err(Error::Domain(format!("invert_D requires j_x > 0, got {j_x}")));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("invert_D requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let target = (8.0 * j_x).sqrt() * x;
    match gamma_case(gamma) {
        GammaCase::Critical => Ok(invert_critical(target)),
        GammaCase::Supercritical => {
            let b = domain_b(gamma);
            let i_max = integral_i(b, gamma)?;
            if target > i_max * (1.0 + 1e-9) {
                return Err(Error::Domain(format!(
                    "invert_D: x = {x} beyond the half-period a = {}; use extend_D",
                    i_max / (8.0 * j_x).sqrt()
                )));
            }
            if target >= i_max {
                return Ok(b);
            }
            Ok(invert_on_bracket(target, gamma, b))
        }
        GammaCase::Subcritical => {
            let mut hi = asymptotic_d(x, j_x).max(1e-12) * 2.0;
            while integral_i(hi, gamma)? < target {
                hi *= 2.0;
                if hi > 1e30 {
                    return Err(Error::NonConvergence("invert_D bracket growth failed".into()));
                }
            }
            Ok(invert_on_bracket(target, gamma, hi))
        }
    }
}

fn invert_on_bracket(target: f64, gamma: f64, hi: f64) -> f64 {
    let f = |z: f64| integral_i(z, gamma).unwrap_or(f64::INFINITY) - target;
    let df = |z: f64| i_prime(z, gamma);
    numerics::newton_bracketed(&f, &df, 0.0, hi, 1e-13 * target.max(1.0), 200)
}

/// Critical-case inversion via the exact antiderivative, solved for
/// d = 1 - t in log space so that D -> 1 is resolved to machine precision.
fn invert_critical(target: f64) -> f64 {
    // I as a function of ld = ln(1 - t); strictly decreasing.
    let i_of_ld = |ld: f64| {
        let d = ld.exp();
        let t = 1.0 - d;
        critical_i_of_t(t, d)
    };
    let lo = -709.0; // exp underflow edge
    if i_of_ld(lo) < target {
        return 1.0;
    }
    let f = |ld: f64| i_of_ld(ld) - target;
    let mut lo_b = lo;
    let mut hi_b = -1e-300;
    for _ in 0..200 {
        let mid = 0.5 * (lo_b + hi_b);
        if f(mid) > 0.0 {
            lo_b = mid;
        } else {
            hi_b = mid;
        }
        if (hi_b - lo_b).abs() < 1e-16 * lo_b.abs().max(1e-300) {
            break;
        }
    }
    let t = 1.0 - (0.5 * (lo_b + hi_b)).exp();
    t.powi(4)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Sample {
    pub x: f64,
    pub d: f64,
    pub d_prime: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PotentialProfile {
    pub gamma: f64,
    pub j_x: f64,
    pub case: GammaCase,
    /// Upper end of I's domain (infinity, 1, or s11).
    pub b: f64,
    /// Half-period a (gamma > 2 only).
    pub a_half_period: Option<f64>,
    pub s_zeros: WZeros,
    pub samples: Vec<Sample>,
}

impl PotentialProfile {
    /// Builds the profile on a grid of `n` points from `x_start` to `x_end`
    /// (geometric near 0, uniform beyond), by marching the inversion of I.
    pub fn build(gamma: f64, j_x: f64, x_start: f64, x_end: f64, n: usize) -> Result<Self> {
        if !(x_start > 0.0 && x_end > x_start) {
            return Err(Error::Domain(format!(
                "profile grid requires 0 < x_start < x_end, got [{x_start}, {x_end}]"
            )));
        }
        if n < 8 {
            return Err(Error::Domain("profile needs at least 8 samples".into()));
        }
        let case = gamma_case(gamma);
        let a = if case == GammaCase::Supercritical { Some(half_period(gamma, j_x)?) } else { None };
        if let Some(a) = a {
            if x_end > a * (1.0 + 1e-9) {
                return Err(Error::Domain(format!(
                    "profile x_end = {x_end} beyond half-period a = {a}; use extend_D"
                )));
            }
        }
        let xs = build_grid(x_start, x_end, n);
        let sqrt8j = (8.0 * j_x).sqrt();
        let b = domain_b(gamma);
        let mut samples = Vec::with_capacity(n);
        let mut z_prev = 0.0f64;
        let mut i_acc = 0.0f64;
        for &x in &xs {
            let target = sqrt8j * x;
            let z = if case == GammaCase::Critical {
                invert_critical(target)
            } else {
                march_invert(gamma, j_x, z_prev, i_acc, target, b)?
            };
            i_acc += integral_i_between(z_prev, z, gamma)?;
            z_prev = z;
            let d_prime = (8.0 * j_x * z.sqrt() * w1(gamma, z).max(0.0)).sqrt();
            samples.push(Sample { x, d: z, d_prime });
        }
        Ok(PotentialProfile {
            gamma,
            j_x,
            case,
            b,
            a_half_period: a,
            s_zeros: w_zeros(gamma),
            samples,
        })
    }

    pub fn build_default(gamma: f64, j_x: f64) -> Result<Self> {
        let x_end = match gamma_case(gamma) {
            GammaCase::Supercritical => half_period(gamma, j_x)?,
            _ => 5.0,
        };
        Self::build(gamma, j_x, 1e-3 * x_end, x_end, 2048)
    }
}

fn build_grid(x_start: f64, x_end: f64, n: usize) -> Vec<f64> {
    // Geometric half resolving x^{4/3} near zero, uniform half beyond.
    let x_mid = (x_end / 4.0).max(x_start * 4.0).min(x_end / 2.0);
    if x_mid <= x_start * 2.0 {
        let r = (x_end / x_start).powf(1.0 / (n as f64 - 1.0));
        return (0..n).map(|i| x_start * r.powi(i as i32)).collect();
    }
    let n_geo = n / 2;
    let r = (x_mid / x_start).powf(1.0 / (n_geo as f64 - 1.0));
    let mut xs: Vec<f64> = (0..n_geo).map(|i| x_start * r.powi(i as i32)).collect();
    let n_uni = n - n_geo;
    let h = (x_end - x_mid) / n_uni as f64;
    for i in 1..=n_uni {
        xs.push(x_mid + h * i as f64);
    }
    xs
}

/// One marching step of the monotone inversion: solve
/// I_acc + int_{z_prev}^{z} = target with a bracketed Newton iteration.
fn march_invert(gamma: f64, j_x: f64, z_prev: f64, i_acc: f64, target: f64, b: f64) -> Result<f64> {
    let f = |z: f64| {
        i_acc + integral_i_between(z_prev, z, gamma).unwrap_or(f64::INFINITY) - target
    };
    let df = |z: f64| i_prime(z, gamma);
    // Seed from the local slope (or the asymptotic at the first step).
    let dx_equiv = (target - i_acc).max(0.0) / (8.0 * j_x).sqrt();
    let slope = if z_prev > 0.0 {
        (8.0 * j_x * z_prev.sqrt() * w1(gamma, z_prev).max(0.0)).sqrt()
    } else {
        0.0
    };
    let step = if slope > 0.0 {
        slope * dx_equiv
    } else {
        asymptotic_d(dx_equiv + (i_acc / (8.0 * j_x).sqrt()), j_x).max(1e-12)
    };
    let mut hi = (z_prev + 2.0 * step.max(1e-15 * z_prev.max(1e-6))).min(b);
    let mut tries = 0;
    while f(hi) < 0.0 {
        if hi >= b {
            break;
        }
        hi = (z_prev + 2.0 * (hi - z_prev)).min(b);
        tries += 1;
        if tries > 200 {
            return Err(Error::NonConvergence("march_invert bracket growth failed".into()));
        }
    }
    if hi >= b && f(b) < 1e-13 * target.max(1.0) {
        // Endpoint of the fundamental interval.
        return Ok(b);
    }
    Ok(numerics::newton_bracketed(&f, &df, z_prev, hi, (1e-13 * target).max(1e-17), 200))
}

/// Reflection/periodic extension for gamma > 2: D(x) = D(2a - x) on [a, 2a],
/// then 2a-periodic.
pub fn extend_d(profile: &PotentialProfile, x: f64) -> Result<f64> {
    let a = profile.a_half_period.ok_or_else(|| {
        Error::Domain(format!("extend_D applies only to gamma > 2, got gamma = {}", profile.gamma))
    })?;
    let period = 2.0 * a;
    let mut xm = x % period;
    if xm < 0.0 {
        xm += period;
    }
    if xm > a {
        xm = a - (xm - a);
    }
    invert_d(xm, profile.j_x, profile.gamma)
}

/// Max first-integral and ODE residuals over the interior grid, with D' and
/// D'' from finite-difference stencils on the (non-uniform) grid; the first
/// two and last two points are skipped.
pub fn residuals(profile: &PotentialProfile) -> (f64, f64) {
    let n = profile.samples.len();
    let xs: Vec<f64> = profile.samples.iter().map(|s| s.x).collect();
    let ds: Vec<f64> = profile.samples.iter().map(|s| s.d).collect();
    let (gamma, j_x) = (profile.gamma, profile.j_x);
    let mut fi_max = 0.0f64;
    let mut ode_max = 0.0f64;
    let stencil = 7.min(n);
    for i in 2..n - 2 {
        let lo = i.saturating_sub(stencil / 2).min(n - stencil);
        let w = numerics::fd_weights(xs[i], &xs[lo..lo + stencil], 2);
        let d1: f64 = (0..stencil).map(|j| w[1][j] * ds[lo + j]).sum();
        let d2: f64 = (0..stencil).map(|j| w[2][j] * ds[lo + j]).sum();
        let d = ds[i];
        let fi = (d1 * d1 - 8.0 * j_x * d.sqrt() * w1(gamma, d)).abs();
        let ode = (d2 - j_x * (6.0 * d.sqrt() + 2.0 / d.sqrt() - 4.0 * gamma)).abs();
        fi_max = fi_max.max(fi);
        ode_max = ode_max.max(ode);
    }
    (fi_max, ode_max)
}

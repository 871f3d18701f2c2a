//! Tangent-function approximation of the boundary value problem: Taylor
//! expansion of theta' = f(theta) about theta_L, the closed form
//! theta(x) = A tan(Bx + C) + D, requirement predicates, the anode residual,
//! the Q cubic in K2, and the Case i/ii analyses.

use crate::cubic;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Sign of the f branch; the insulated construction always takes R_L < 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug)]
pub struct TangentModel {
    pub theta_l: f64,
    pub j_x: f64,
    pub k1: f64,
    pub k2: f64,
    /// K1 = k1/j_x, K2 = k2/j_x.
    pub kk1: f64,
    pub kk2: f64,
    pub branch: Branch,
    pub f_l: f64,
    pub fp_l: f64,
    pub fpp_l: f64,
    /// Quadratic Taylor values at theta = 0.
    pub f0: f64,
    pub fp0: f64,
    pub fpp0: f64,
    /// R_L = -sqrt(2 f_L f''_L - f'_L^2), insulated branch.
    pub r_l: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub dshift: f64,
}

/// f = sqrt(8 j_x theta^{1/2}(theta+1) + 2 k1 theta + k2) and its two
/// theta-derivatives (positive branch; negate all three for the other).
pub fn f_eval(theta: f64, j_x: f64, k1: f64, k2: f64) -> Result<(f64, f64, f64)> {
    if theta == 0.0 {
        return Err(Error::Domain(
            "f derivatives are singular at theta = 0 (theta^{-1/2} terms)".into(),
        ));
    }
    if theta < 0.0 {
        return Err(Error::Domain(format!("f_eval requires theta > 0, got {theta}")));
    }
    let rt = theta.sqrt();
    let rad = 8.0 * j_x * rt * (theta + 1.0) + 2.0 * k1 * theta + k2;
    if rad <= 0.0 {
        return Err(Error::Domain(format!("f radicand non-positive ({rad}) at theta = {theta}")));
    }
    let f = rad.sqrt();
    let g = 2.0 * j_x / rt * (3.0 * theta + 1.0) + k1;
    let fp = g / f;
    let fpp = (j_x / (rt * theta) * (3.0 * theta - 1.0) - g * g / rad) / f;
    Ok((f, fp, fpp))
}

#[derive(Clone, Copy, Debug)]
pub struct RequirementFlags {
    /// (5.14): f_L != 0.
    pub req1_ok: bool,
    /// (5.15): f''_0 != 0; `None` when theta_L = 1/3 (inapplicable).
    pub req2_ok: Option<bool>,
    /// (5.19): 2 f_L f''_L - (f'_L)^2 > 0, i.e. K2 > Z for theta_L > 1/3.
    pub req4_ok: bool,
    /// Z(theta_L; K1) where defined (theta_L != 1/3).
    pub z_value: Option<f64>,
}

/// Parameter predicates (5.14), (5.15), (5.19) in the scaled variables
/// K1 = k1/j_x, K2 = k2/j_x.
pub fn requirements(theta_l: f64, kk1: f64, kk2: f64) -> Result<RequirementFlags> {
    if theta_l <= 0.0 {
        return Err(Error::Domain(format!("requirements need theta_L > 0, got {theta_l}")));
    }
    let t = theta_l;
    let rt = t.sqrt();
    let tol = 1e-9 * kk2.abs().max(1.0);

    let req1_boundary = -2.0 * rt * (rt * kk1 + 4.0 * (t + 1.0));
    let req1_ok = (kk2 - req1_boundary).abs() > tol;

    let three_t = 3.0 * t - 1.0;
    let (req2_ok, z_value) = if three_t.abs() < 1e-12 {
        (None, None)
    } else {
        let req2_boundary = rt * ((rt * kk1 + 3.0 * t + 3.0).powi(2) / three_t + t - 3.0);
        let z0 = 2.0 * rt * (15.0 * t * t + 10.0 * t + 7.0) / three_t;
        let z1 = 4.0 * t * (3.0 * t + 2.0) / three_t;
        let z2 = 3.0 * t * rt / (2.0 * three_t);
        (
            Some((kk2 - req2_boundary).abs() > tol),
            Some(z0 + z1 * kk1 + z2 * kk1 * kk1),
        )
    };

    // Sign-safe form of (5.19): 2 theta^{-3/2}(3 theta - 1) f^2 > 3 g^2.
    let f2 = 8.0 * rt * (t + 1.0) + 2.0 * kk1 * t + kk2;
    let g = 2.0 / rt * (3.0 * t + 1.0) + kk1;
    let req4_ok = 2.0 / (t * rt) * three_t * f2 - 3.0 * g * g > 0.0;

    Ok(RequirementFlags { req1_ok, req2_ok, req4_ok, z_value })
}

/// Builds the tangent model coefficients (Eqs. 5.7, 5.9, 5.12), with the
/// insulated R_L < 0 branch.
pub fn build_model(theta_l: f64, j_x: f64, k1: f64, k2: f64, branch: Branch) -> Result<TangentModel> {
    if theta_l <= 0.0 || j_x <= 0.0 {
        return Err(Error::Domain(format!(
            "build_model requires theta_L > 0 and j_x > 0 (got {theta_l}, {j_x})"
        )));
    }
    let kk1 = k1 / j_x;
    let kk2 = k2 / j_x;
    let flags = requirements(theta_l, kk1, kk2)?;
    if !flags.req1_ok {
        return Err(Error::RequirementViolation {
            which: "(5.14)".into(),
            detail: format!("f(theta_L) = 0 at theta_L = {theta_l}, K1 = {kk1}, K2 = {kk2}"),
        });
    }
    if flags.req2_ok == Some(false) {
        return Err(Error::RequirementViolation {
            which: "(5.15)".into(),
            detail: format!("f''(0) = 0 at theta_L = {theta_l}, K1 = {kk1}, K2 = {kk2}"),
        });
    }
    if !flags.req4_ok {
        return Err(Error::RequirementViolation {
            which: "(5.19)".into(),
            detail: format!(
                "2 f_L f''_L - (f'_L)^2 <= 0 (K2 must exceed Z = {:?})",
                flags.z_value
            ),
        });
    }
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    let (f, fp, fpp) = f_eval(theta_l, j_x, k1, k2)?;
    let (f_l, fp_l, fpp_l) = (sign * f, sign * fp, sign * fpp);
    // Quadratic Taylor values at theta = 0 (Eq. 5.7).
    let f0 = f_l - theta_l * fp_l + 0.5 * theta_l * theta_l * fpp_l;
    let fp0 = fp_l - theta_l * fpp_l;
    let fpp0 = fpp_l;
    let r_sq = 2.0 * f_l * fpp_l - fp_l * fp_l;
    if r_sq <= 0.0 {
        return Err(Error::RequirementViolation {
            which: "(5.19)".into(),
            detail: format!("R_L^2 = {r_sq} <= 0 on this branch"),
        });
    }
    let r_l = -r_sq.sqrt();
    Ok(TangentModel {
        theta_l,
        j_x,
        k1,
        k2,
        kk1,
        kk2,
        branch,
        f_l,
        fp_l,
        fpp_l,
        f0,
        fp0,
        fpp0,
        r_l,
        a: r_l / fpp0,
        b: r_l / 2.0,
        c: (fp0 / r_l).atan(),
        dshift: -fp0 / fpp0,
    })
}

/// theta(x) = 2 f0 / (R0 cot(R0 x/2) - f'0), the boundary-adapted closed
/// form with theta(0) = 0.
pub fn theta_tangent(model: &TangentModel, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let r0 = model.r_l;
    let half = 0.5 * r0 * x;
    let cot = half.cos() / half.sin();
    let denom = r0 * cot - model.fp0;
    if denom.abs() < 1e-8 * model.fp0.abs().max(1.0) {
        return Err(Error::Pole { pole: pole_location(model), x });
    }
    Ok(2.0 * model.f0 / denom)
}

/// The first pole x = (2/R0) arctan(R0/f'0) of the closed form.
pub fn pole_location(model: &TangentModel) -> f64 {
    2.0 / model.r_l * (model.r_l / model.fp0).atan()
}

/// Slope of the tangent form via Eq. (5.21):
/// theta' = (B/A) [A^2 + (theta - Dshift)^2].
pub fn theta_tangent_prime(model: &TangentModel, theta: f64) -> f64 {
    let d = theta - model.dshift;
    model.b / model.a * (model.a * model.a + d * d)
}

/// Anode matching residual tan B - Omega B (Eqs. 5.29-5.30), with the
/// exclusions (5.31) and (5.32).
pub fn anode_residual(model: &TangentModel) -> Result<f64> {
    let t = model.theta_l;
    let omega_denom = 2.0 * model.f_l - t * model.fp_l;
    // (5.31) in scaled form: 3 theta K1 + 2 K2 + 2 sqrt(theta)(5 theta + 7) = 0.
    let excl = 3.0 * t * model.kk1 + 2.0 * model.kk2 + 2.0 * t.sqrt() * (5.0 * t + 7.0);
    if omega_denom.abs() < 1e-12 || excl.abs() < 1e-9 * model.kk2.abs().max(1.0) {
        return Err(Error::RequirementViolation {
            which: "(5.31)".into(),
            detail: "Omega undefined: 2 f_L = theta_L f'_L".into(),
        });
    }
    if model.b.cos().abs() < 1e-9 {
        return Err(Error::RequirementViolation {
            which: "(5.32)".into(),
            detail: format!("tan B undefined: R_L = {} at an odd multiple of pi", model.r_l),
        });
    }
    let omega = 2.0 * t / omega_denom;
    Ok(model.b.tan() - omega * model.b)
}

/// Coefficients of Q(theta_L; K1, K2) = q0 + q1 K2 + q2 K2^2 + q3 K2^3
/// per (5.36), with q3 from the Case i listing.
pub fn q_polynomial(theta_l: f64, kk1: f64) -> Result<[f64; 4]> {
    if theta_l <= 0.0 {
        return Err(Error::Domain(format!("q_polynomial needs theta_L > 0, got {theta_l}")));
    }
    let t = theta_l;
    let rt = t.sqrt();
    let q0 = t * t
        * (3.0 * t * kk1 * kk1
            + 2.0 * rt * (17.0 + 9.0 * t) * kk1
            + 4.0 * (21.0 + 30.0 * t + 5.0 * t * t))
            .powi(2);
    let q1 = 4.0 * t.powi(3) * kk1.powi(3)
        + 6.0 * t.powi(2) * rt * (31.0 - 5.0 * t) * kk1 * kk1
        + 4.0 * t * t * (327.0 + 226.0 * t - 117.0 * t * t) * kk1
        + 8.0 * t * rt * (311.0 + 525.0 * t + 57.0 * t * t - 141.0 * t.powi(3));
    let q2 = 4.0 * t * rt * (19.0 - 9.0 * t) * kk1 + 3.0 * t * (99.0 + 62.0 * t - 53.0 * t * t);
    let q3 = 4.0 * rt * (3.0 - t);
    Ok([q0, q1, q2, q3])
}

/// Roots of Q in K2, delegating to the cubic solver after monic
/// normalization; a quadratic at the degree drop theta_L = 3.
pub fn q_roots(theta_l: f64, kk1: f64) -> Result<Vec<Complex64>> {
    let [q0, q1, q2, q3] = q_polynomial(theta_l, kk1)?;
    let scale = q0.abs().max(q1.abs()).max(q2.abs()).max(q3.abs()).max(1.0);
    if q3.abs() < 1e-12 * scale {
        if q2.abs() < 1e-12 * scale {
            return Err(Error::Domain("Q degenerates below quadratic".into()));
        }
        let disc = q1 * q1 - 4.0 * q2 * q0;
        return Ok(if disc >= 0.0 {
            let s = disc.sqrt();
            let qq = -0.5 * (q1 + if q1 >= 0.0 { s } else { -s });
            vec![Complex64::new(qq / q2, 0.0), Complex64::new(q0 / qq, 0.0)]
        } else {
            let re = -0.5 * q1 / q2;
            let im = 0.5 * (-disc).sqrt() / q2;
            vec![Complex64::new(re, im), Complex64::new(re, -im)]
        });
    }
    Ok(cubic::roots_monic(q2 / q3, q1 / q3, q0 / q3).to_vec())
}

#[derive(Clone, Copy, Debug)]
pub struct CaseII {
    pub sigma: [f64; 3],
    pub k_min: f64,
    pub zeta_min: f64,
}

/// Case ii (K1 = K2 = K): zeta(K) = sigma0 + sigma1 K + sigma2 K^2 per
/// (5.41), its vertex K_min, and the vertex value zeta_min.
///
/// zeta_min is the actual quadratic vertex value sigma0 - sigma1^2/(4 sigma2);
/// the printed closed form carries the opposite overall sign, so the vertex
/// identity zeta(K_min) = zeta_min is taken as authoritative. Both vanish at
/// theta_L = 1/3.
pub fn case_ii(theta_l: f64) -> Result<CaseII> {
    if theta_l <= 0.0 {
        return Err(Error::Domain(format!("case_ii needs theta_L > 0, got {theta_l}")));
    }
    let t = theta_l;
    let rt = t.sqrt();
    let sigma0 = 4.0 * rt * (15.0 * t * t + 10.0 * t + 7.0);
    let sigma1 = 2.0 * (12.0 * t * t + 5.0 * t + 1.0);
    let sigma2 = 3.0 * t * rt;
    let k_min = -sigma1 / (2.0 * sigma2);
    let zeta_min = sigma0 - sigma1 * sigma1 / (4.0 * sigma2);
    Ok(CaseII { sigma: [sigma0, sigma1, sigma2], k_min, zeta_min })
}

pub fn zeta_eval(c: &CaseII, k: f64) -> f64 {
    c.sigma[0] + c.sigma[1] * k + c.sigma[2] * k * k
}

/// Exact rational numerator of zeta_min at theta_L = p/q:
/// (36 p^4 + 35 p^2 q^2 - 10 p q^3 - q^4, q^4), the sign-carrying part of
/// the vertex value (3 theta^{3/2} zeta_min).
pub fn zeta_min_numerator(p: i64, q: i64) -> (i64, i64) {
    (36 * p.pow(4) + 35 * p * p * q * q - 10 * p * q.pow(3) - q.pow(4), q.pow(4))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT3: f64 = 1.7320508075688772;

    #[test]
    fn f_eval_examples() {
        let (f, _, _) = f_eval(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!((f - 4.0).abs() < 1e-12);
        // f(theta -> 0+) -> sqrt(k2).
        let (f, _, _) = f_eval(1e-12, 1.0, 0.0, 4.0).unwrap();
        assert!((f - 2.0).abs() < 1e-5);
        assert!(f_eval(0.0, 1.0, 0.0, 1.0).is_err());
        assert!(f_eval(0.5, 1.0, -100.0, 0.1).is_err());
    }

    #[test]
    fn f_eval_derivatives_match_finite_differences() {
        let (jx, k1, k2) = (1.3, 0.7, 5.0);
        for theta in [0.4, 1.0, 2.2] {
            let h = 1e-6;
            let (f, fp, fpp) = f_eval(theta, jx, k1, k2).unwrap();
            let (fp_h, _, _) = f_eval(theta + h, jx, k1, k2).unwrap();
            let (fm_h, _, _) = f_eval(theta - h, jx, k1, k2).unwrap();
            assert!(((fp_h - fm_h) / (2.0 * h) - fp).abs() < 1e-6);
            assert!(((fp_h - 2.0 * f + fm_h) / (h * h) - fpp).abs() < 1e-3);
        }
    }

    #[test]
    fn requirements_example() {
        let fl = requirements(1.0, 0.0, 40.0).unwrap();
        assert!((fl.z_value.unwrap() - 32.0).abs() < 1e-12);
        assert!(fl.req4_ok);
        let fl = requirements(1.0, 0.0, 10.0).unwrap();
        assert!(!fl.req4_ok);
        // (5.14) boundary.
        let t: f64 = 1.0;
        let boundary = -2.0 * t.sqrt() * (0.0 + 4.0 * (t + 1.0));
        let fl = requirements(1.0, 0.0, boundary).unwrap();
        assert!(!fl.req1_ok);
        // theta_L = 1/3 marks (5.15) inapplicable.
        let fl = requirements(1.0 / 3.0, 0.0, 40.0).unwrap();
        assert!(fl.req2_ok.is_none());
    }

    fn model_1() -> TangentModel {
        build_model(1.0, 1.0, 0.0, 40.0, Branch::Plus).unwrap()
    }

    #[test]
    fn build_model_identities() {
        let m = model_1();
        assert!(m.r_l < 0.0);
        // R_L^2 + f'_L^2 = 2 f_L f''_L.
        assert!((m.r_l * m.r_l + m.fp_l * m.fp_l - 2.0 * m.f_l * m.fpp_l).abs() < 1e-10);
        // Newton-step identity for the shift.
        assert!((m.dshift - (m.theta_l - m.fp_l / m.fpp_l)).abs() < 1e-10);
        // tan C = -Dshift/A.
        assert!((m.c.tan() + m.dshift / m.a).abs() < 1e-10);
    }

    #[test]
    fn build_model_rejects_bad_requirements() {
        match build_model(1.0, 1.0, 0.0, 10.0, Branch::Plus) {
            Err(Error::RequirementViolation { which, .. }) => assert_eq!(which, "(5.19)"),
            other => panic!("expected requirement violation, got {other:?}"),
        }
    }

    #[test]
    fn theta_tangent_forms_agree() {
        let m = model_1();
        for x in [0.01, 0.05, 0.1, 0.2] {
            let direct = theta_tangent(&m, x).unwrap();
            let shifted = m.a * (m.b * x + m.c).tan() + m.dshift;
            assert!((direct - shifted).abs() < 1e-10, "x={x}: {direct} vs {shifted}");
        }
        assert_eq!(theta_tangent(&m, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn theta_slope_formula() {
        let m = model_1();
        let h = 1e-6;
        for x in [0.05, 0.15] {
            let tp = (theta_tangent(&m, x + h).unwrap() - theta_tangent(&m, x - h).unwrap())
                / (2.0 * h);
            let th = theta_tangent(&m, x).unwrap();
            assert!((tp - theta_tangent_prime(&m, th)).abs() < 1e-4);
        }
        // Slope at the origin recovers f0.
        let tp0 = (theta_tangent(&m, h).unwrap() - theta_tangent(&m, -h).unwrap()) / (2.0 * h);
        assert!((tp0 - m.f0).abs() < 1e-6);
    }

    #[test]
    fn pole_is_flagged() {
        let m = model_1();
        let pole = pole_location(&m);
        match theta_tangent(&m, pole) {
            Err(Error::Pole { .. }) => {}
            other => panic!("expected pole error, got {other:?}"),
        }
    }

    #[test]
    fn anode_residual_bisection_root() {
        // Residual as a function of K2 changes sign; bisection localizes a
        // root which then satisfies tan B = Omega B. K1 = -13 zeroes g at
        // theta_L = 4, making R independent of K2 and Omega monotone.
        let theta_l = 4.0;
        let res = |kk2: f64| {
            let m = build_model(theta_l, 1.0, -13.0, kk2, Branch::Plus).unwrap();
            anode_residual(&m).unwrap()
        };
        let (mut lo, mut hi) = (30.0, 100.0);
        let (flo, fhi) = (res(lo), res(hi));
        assert!(
            flo * fhi < 0.0,
            "no sign change on [{lo}, {hi}]: {flo}, {fhi}"
        );
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if res(lo) * res(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!(res(0.5 * (lo + hi)).abs() < 1e-8);
    }

    #[test]
    fn q_polynomial_case_i() {
        for t in [0.5f64, 1.0, 2.0] {
            let [q0, q1, q2, q3] = q_polynomial(t, 0.0).unwrap();
            let rt = t.sqrt();
            assert!((q0 - 16.0 * t * t * (21.0 + 30.0 * t + 5.0 * t * t).powi(2)).abs() < 1e-9 * q0.abs());
            assert!(
                (q1 - 8.0 * t * rt * (311.0 + 525.0 * t + 57.0 * t * t - 141.0 * t.powi(3))).abs()
                    < 1e-9 * q1.abs().max(1.0)
            );
            assert!((q2 - 3.0 * t * (99.0 + 62.0 * t - 53.0 * t * t)).abs() < 1e-9 * q2.abs().max(1.0));
            assert!((q3 - 4.0 * rt * (3.0 - t)).abs() < 1e-12);
        }
        let [.., q3] = q_polynomial(3.0, 1.0).unwrap();
        assert!(q3.abs() < 1e-12);
        assert_eq!(q_roots(3.0, 1.0).unwrap().len(), 2);
    }

    #[test]
    fn q_roots_substitution_residual() {
        for (t, k1) in [(0.75, 0.0), (1.3, 0.4), (2.0, -1.0)] {
            let q = q_polynomial(t, k1).unwrap();
            let scale = q.iter().map(|c| c.abs()).fold(0.0f64, f64::max);
            for r in q_roots(t, k1).unwrap() {
                let val = ((Complex64::new(q[3], 0.0) * r + q[2]) * r + q[1]) * r + q[0];
                assert!(val.norm() <= 1e-8 * scale, "t={t} k1={k1}: {}", val.norm());
            }
        }
    }

    #[test]
    fn case_ii_examples() {
        let c = case_ii(0.75).unwrap();
        assert!((c.k_min + 92.0 * SQRT3 / 27.0).abs() < 1e-12);
        let c = case_ii(1.0 / 3.0).unwrap();
        assert!(c.zeta_min.abs() < 1e-12);
        assert_eq!(zeta_min_numerator(1, 3).0, 0);
        // Vertex identity and positivity of the sigmas.
        for t in [0.1, 0.5, 1.0, 1.7] {
            let c = case_ii(t).unwrap();
            assert!((zeta_eval(&c, c.k_min) - c.zeta_min).abs() < 1e-12 * c.zeta_min.abs().max(1.0));
            assert!(c.sigma.iter().all(|&s| s > 0.0));
            // Vertex sign structure: negative below theta_L = 1/3, positive above.
            if t < 1.0 / 3.0 - 1e-9 {
                assert!(c.zeta_min < 0.0);
            } else if t > 1.0 / 3.0 + 1e-9 {
                assert!(c.zeta_min > 0.0);
            }
        }
    }
}

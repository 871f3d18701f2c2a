//! Exact complex solution of u^3 + k_hat u^2 + u + beta_hat = 0 with the
//! four-case discriminant classification (Cardano / triple / double / Viete),
//! plus an independent bisection+deflation oracle for validation.

use crate::error::{Error, Result};
use crate::model::ScaledParams;
use num_complex::Complex64;

const SQRT3: f64 = 1.7320508075688772;
/// 4^(1/3), the scale of the Cardano radicals in the reduced variables.
const CBRT4: f64 = 1.5874010519681994;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicCase {
    /// Delta < 0: one real root and a conjugate pair.
    OneRealTwoComplex,
    /// Delta = 0 at (k_hat, beta_hat) = +-(sqrt 3, sqrt 3/9).
    TripleRoot,
    /// Delta = 0 elsewhere: a simple root and a double root.
    DoubleRoot,
    /// Delta > 0: three distinct real roots.
    ThreeReal,
}

#[derive(Clone, Copy, Debug)]
pub struct CubicRoots {
    /// Roots sorted by (re, im).
    pub roots: [Complex64; 3],
    pub discriminant: f64,
    pub case_tag: CubicCase,
}

/// Delta_u = 18 k_hat beta_hat + k_hat^2 - 4 - 4 k_hat^3 beta_hat - 27 beta_hat^2.
pub fn discriminant(sp: ScaledParams) -> f64 {
    let (k, b) = (sp.k_hat, sp.beta_hat);
    18.0 * k * b + k * k - 4.0 - 4.0 * k * k * k * b - 27.0 * b * b
}

/// Depressed form y^3 + p y + q with y = u + k_hat/3.
pub fn depress(sp: ScaledParams) -> (f64, f64) {
    let (k, b) = (sp.k_hat, sp.beta_hat);
    let p = (3.0 - k * k) / 3.0;
    let q = (2.0 * k * k * k - 9.0 * k + 27.0 * b) / 27.0;
    (p, q)
}

fn poly(sp: ScaledParams, z: Complex64) -> Complex64 {
    ((z + sp.k_hat) * z + 1.0) * z + sp.beta_hat
}

fn dpoly(sp: ScaledParams, z: Complex64) -> Complex64 {
    (3.0 * z + 2.0 * sp.k_hat) * z + 1.0
}

/// Newton polish against the monic cubic; at most 5 steps, never moving a
/// root by more than 1e-4 total. Real roots stay real.
fn polish(sp: ScaledParams, z0: Complex64) -> Complex64 {
    let mut z = z0;
    for _ in 0..5 {
        let f = poly(sp, z);
        let d = dpoly(sp, z);
        if d.norm_sqr() == 0.0 {
            break;
        }
        let step = f / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        let next = z - step;
        if (next - z0).norm() > 1e-4 {
            break;
        }
        z = next;
        if step.norm() < 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    if z0.im == 0.0 {
        z.im = 0.0;
    }
    z
}

fn sort_roots(mut r: [Complex64; 3]) -> [Complex64; 3] {
    r.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    r
}

/// Width of the Delta = 0 dispatch band.
fn delta_band(sp: ScaledParams) -> f64 {
    let k6 = sp.k_hat.powi(6);
    let b2 = sp.beta_hat * sp.beta_hat;
    1e-12 * k6.max(b2).max(1.0)
}

/// Closed-form solution with a four-case dispatch on the discriminant. All
/// roots are Newton-polished.
pub fn solve(sp: ScaledParams) -> Result<CubicRoots> {
    let (k, b) = (sp.k_hat, sp.beta_hat);
    let delta = discriminant(sp);

    if delta.abs() < delta_band(sp) {
        // Triple root at (k_hat, beta_hat) = +-(sqrt 3, sqrt 3/9): u = -+ sqrt3/3.
        for sign in [1.0f64, -1.0] {
            if (k - sign * SQRT3).abs() < 1e-6 && (b - sign * SQRT3 / 9.0).abs() < 1e-6 {
                let u = Complex64::new(-sign * SQRT3 / 3.0, 0.0);
                return Ok(CubicRoots { roots: [u, u, u], discriminant: delta, case_tag: CubicCase::TripleRoot });
            }
        }
        if (k * k - 3.0).abs() < 1e-9 {
            return Err(Error::DegenerateDoubleRoot { k_hat: k, beta_hat: b });
        }
        let simple = (k * k * k - 4.0 * k + 9.0 * b) / (3.0 - k * k);
        let double = (-k + 9.0 * b) / (2.0 * k * k - 6.0);
        let roots = [
            polish(sp, Complex64::new(simple, 0.0)),
            polish(sp, Complex64::new(double, 0.0)),
            polish(sp, Complex64::new(double, 0.0)),
        ];
        return Ok(CubicRoots { roots: sort_roots(roots), discriminant: delta, case_tag: CubicCase::DoubleRoot });
    }

    if delta < 0.0 {
        let (s_plus, s_minus) = cardano_s(sp);
        let sum = s_plus + s_minus;
        let diff = s_plus - s_minus;
        let re1 = -k / 3.0 + CBRT4 / 18.0 * sum;
        let re23 = -k / 3.0 - CBRT4 / 36.0 * sum;
        let im = (SQRT3 * CBRT4 / 36.0 * diff).abs();
        let roots = [
            polish(sp, Complex64::new(re1, 0.0)),
            polish(sp, Complex64::new(re23, im)),
            polish(sp, Complex64::new(re23, -im)),
        ];
        return Ok(CubicRoots { roots: sort_roots(roots), discriminant: delta, case_tag: CubicCase::OneRealTwoComplex });
    }

    // Delta > 0: three real roots require k_hat^2 > 3 (depressed p < 0).
    assert!(k * k > 3.0, "Delta > 0 with k_hat^2 <= 3 is impossible");
    let a3 = 2.0 / 3.0 * (k * k - 3.0).sqrt();
    let a4 = (2.0 * k * k * k - 9.0 * k + 27.0 * b) / (18.0 - 6.0 * k * k)
        * (9.0 / (k * k - 3.0)).sqrt();
    let phi = a4.clamp(-1.0, 1.0).acos() / 3.0;
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    for (j, r) in roots.iter_mut().enumerate() {
        let angle = phi - 2.0 * std::f64::consts::PI * j as f64 / 3.0;
        *r = polish(sp, Complex64::new(-k / 3.0 + a3 * angle.cos(), 0.0));
    }
    Ok(CubicRoots { roots: sort_roots(roots), discriminant: delta, case_tag: CubicCase::ThreeReal })
}

/// The real Cardano radicals (cbrt(A1+A2), cbrt(A1-A2)) for Delta < 0, with
/// the real-cube-root convention and cancellation-safe evaluation of the
/// smaller branch via the product identity (A1+A2)(A1-A2) = -2916 (3-k^2)^3.
fn cardano_s(sp: ScaledParams) -> (f64, f64) {
    let (k, b) = (sp.k_hat, sp.beta_hat);
    let a1 = -(54.0 * k * k * k - 243.0 * k + 729.0 * b);
    let p3 = 2916.0 * (3.0 - k * k).powi(3);
    let rad = (a1 * a1 + p3).max(0.0);
    let a2 = rad.sqrt();
    if a1 >= 0.0 {
        let big = a1 + a2;
        let small = if big != 0.0 { -p3 / big } else { 0.0 };
        (big.cbrt(), small.cbrt())
    } else {
        let big = a1 - a2;
        let small = if big != 0.0 { -p3 / big } else { 0.0 };
        (small.cbrt(), big.cbrt())
    }
}

/// The real quantity S = cbrt(A1+A2) + cbrt(A1-A2) used by the region
/// classification (defined for Delta < 0).
pub(crate) fn cardano_s_sum(sp: ScaledParams) -> f64 {
    let (sp_, sm) = cardano_s(sp);
    sp_ + sm
}

/// Validation oracle: bracketed bisection for one real root on the Cauchy
/// bound interval, then quadratic deflation. Independent of the closed forms.
pub fn oracle_roots(sp: ScaledParams) -> CubicRoots {
    let (k, b) = (sp.k_hat, sp.beta_hat);
    let r_bound = 1.0 + k.abs().max(1.0).max(b.abs());
    let p = |u: f64| ((u + k) * u + 1.0) * u + b;
    let r = crate::numerics::bisect(&p, -r_bound, r_bound, 150);
    // Synthetic division by (u - r): quotient u^2 + b2 u + b3.
    let b2 = k + r;
    let b3 = 1.0 + r * b2;
    let disc = b2 * b2 - 4.0 * b3;
    let (z2, z3) = if disc >= 0.0 {
        let s = disc.sqrt();
        let q = -0.5 * (b2 + if b2 >= 0.0 { s } else { -s });
        let r1 = q;
        let r2 = if q != 0.0 { b3 / q } else { -b2 - q };
        (Complex64::new(r1, 0.0), Complex64::new(r2, 0.0))
    } else {
        let im = 0.5 * (-disc).sqrt();
        (Complex64::new(-0.5 * b2, im), Complex64::new(-0.5 * b2, -im))
    };
    let delta = discriminant(sp);
    let case_tag = if delta.abs() < delta_band(sp) {
        let near_triple = [1.0f64, -1.0].iter().any(|&s| {
            (k - s * SQRT3).abs() < 1e-6 && (b - s * SQRT3 / 9.0).abs() < 1e-6
        });
        if near_triple { CubicCase::TripleRoot } else { CubicCase::DoubleRoot }
    } else if delta < 0.0 {
        CubicCase::OneRealTwoComplex
    } else {
        CubicCase::ThreeReal
    };
    CubicRoots {
        roots: sort_roots([Complex64::new(r, 0.0), z2, z3]),
        discriminant: delta,
        case_tag,
    }
}

/// Minimal-over-pairings distance between two root triples viewed as
/// multisets: min over the 6 assignments of the max pairwise distance.
pub fn multiset_distance(a: &[Complex64; 3], b: &[Complex64; 3]) -> f64 {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    PERMS
        .iter()
        .map(|p| {
            (0..3)
                .map(|i| (a[i] - b[p[i]]).norm())
                .fold(0.0f64, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Roots of the general monic real cubic z^3 + c2 z^2 + c1 z + c0, shared
/// plumbing for callers outside the (k_hat, beta_hat) family.
pub(crate) fn roots_monic(c2: f64, c1: f64, c0: f64) -> [Complex64; 3] {
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let shift = -c2 / 3.0;
    let disc = -4.0 * p * p * p - 27.0 * q * q;
    let scale = c2.abs().max(c1.abs()).max(c0.abs()).max(1.0);
    let pm = |z: Complex64| ((z + c2) * z + c1) * z + c0;
    let dpm = |z: Complex64| (3.0 * z + 2.0 * c2) * z + c1;
    let refine = |z0: Complex64| -> Complex64 {
        let mut z = z0;
        for _ in 0..8 {
            let d = dpm(z);
            if d.norm_sqr() == 0.0 {
                break;
            }
            let step = pm(z) / d;
            if !step.re.is_finite() || !step.im.is_finite() || step.norm() > 1e-2 * z.norm().max(1.0) {
                break;
            }
            z -= step;
        }
        if z0.im == 0.0 {
            z.im = 0.0;
        }
        z
    };
    let raw: [Complex64; 3] = if disc.abs() < 1e-13 * scale.powi(4) && p.abs() > 1e-9 {
        let y1 = 3.0 * q / p;
        let y2 = -1.5 * q / p;
        [
            Complex64::new(shift + y1, 0.0),
            Complex64::new(shift + y2, 0.0),
            Complex64::new(shift + y2, 0.0),
        ]
    } else if disc > 0.0 {
        let amp = 2.0 * (-p / 3.0).sqrt();
        let phi = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0).acos() / 3.0;
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (j, r) in out.iter_mut().enumerate() {
            let angle = phi - 2.0 * std::f64::consts::PI * j as f64 / 3.0;
            *r = Complex64::new(shift + amp * angle.cos(), 0.0);
        }
        out
    } else {
        let rad = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        let t_big = if q <= 0.0 { -q / 2.0 + rad } else { -q / 2.0 - rad };
        let t_small = if t_big != 0.0 { (-p / 3.0).powi(3) / t_big } else { 0.0 };
        let u = t_big.cbrt();
        let v = t_small.cbrt();
        let re23 = shift - 0.5 * (u + v);
        let im = (SQRT3 / 2.0 * (u - v)).abs();
        [
            Complex64::new(shift + u + v, 0.0),
            Complex64::new(re23, im),
            Complex64::new(re23, -im),
        ]
    };
    sort_roots([refine(raw[0]), refine(raw[1]), refine(raw[2])])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(k: f64, b: f64) -> ScaledParams {
        ScaledParams::new(k, b)
    }

    #[test]
    fn discriminant_examples() {
        assert!(discriminant(sp(-SQRT3, -SQRT3 / 9.0)).abs() < 1e-14);
        assert_eq!(discriminant(sp(0.0, 0.0)), -4.0);
        assert!((discriminant(sp(-4.0, 0.0)) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn depress_examples() {
        assert_eq!(depress(sp(0.0, 0.0)), (1.0, 0.0));
        let (p, q) = depress(sp(-SQRT3, -SQRT3 / 9.0));
        assert!(p.abs() < 1e-15 && q.abs() < 1e-15);
        let (p, q) = depress(sp(-4.0, 0.0));
        assert!((p + 13.0 / 3.0).abs() < 1e-14);
        assert!((q + 92.0 / 27.0).abs() < 1e-14);
    }

    #[test]
    fn solve_triple_root() {
        let r = solve(sp(-SQRT3, -SQRT3 / 9.0)).unwrap();
        assert_eq!(r.case_tag, CubicCase::TripleRoot);
        for z in r.roots {
            assert!((z - Complex64::new(SQRT3 / 3.0, 0.0)).norm() < 1e-12);
        }
        let r = solve(sp(SQRT3, SQRT3 / 9.0)).unwrap();
        for z in r.roots {
            assert!((z + Complex64::new(SQRT3 / 3.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn solve_pure_imaginary_pair() {
        let r = solve(sp(0.0, 0.0)).unwrap();
        assert_eq!(r.case_tag, CubicCase::OneRealTwoComplex);
        // (re, im) sort puts -i, 0, +i in order.
        assert!((r.roots[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!(r.roots[1].norm() < 1e-12);
        assert!((r.roots[2] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn solve_three_real() {
        let r = solve(sp(-4.0, 0.0)).unwrap();
        assert_eq!(r.case_tag, CubicCase::ThreeReal);
        let expect = [0.0, 2.0 - SQRT3, 2.0 + SQRT3];
        for (z, e) in r.roots.iter().zip(expect) {
            assert!((z.re - e).abs() < 1e-12 && z.im == 0.0);
        }
    }

    #[test]
    fn solve_one_real_example() {
        let r = solve(sp(0.0, -1.0)).unwrap();
        assert_eq!(r.case_tag, CubicCase::OneRealTwoComplex);
        let real = r.roots.iter().find(|z| z.im == 0.0).unwrap();
        assert!((real.re - 0.6823278038280193).abs() < 1e-12);
        let pair: Vec<_> = r.roots.iter().filter(|z| z.im != 0.0).collect();
        assert!((pair[0].re + 0.34116390191400965).abs() < 1e-10);
        assert!((pair[0].im.abs() - 1.1615414000964386).abs() < 1e-10);
    }

    #[test]
    fn solve_double_root_gamma_two() {
        // (k, b) = (-2, 0): u (u - 1)^2.
        let r = solve(sp(-2.0, 0.0)).unwrap();
        assert_eq!(r.case_tag, CubicCase::DoubleRoot);
        assert!(r.roots[0].norm() < 1e-12);
        assert!((r.roots[1].re - 1.0).abs() < 1e-12);
        assert!((r.roots[2].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn double_root_on_boundary_curve() {
        // Points on the Delta = 0 curve away from k^2 = 3 take the
        // double-root branch with small residuals.
        for k in [-2.0f64, 2.5, -3.5, 4.0] {
            let (bm, bp) = crate::thetad::delta_zero_boundary(k).unwrap();
            for b in [bm, bp] {
                let r = solve(sp(k, b)).unwrap();
                assert_eq!(r.case_tag, CubicCase::DoubleRoot, "k={k} b={b}");
                for z in r.roots {
                    assert!(poly(sp(k, b), z).norm() < 1e-9 * z.norm().max(1.0).powi(3));
                }
            }
        }
    }

    #[test]
    fn oracle_matches_solve_on_examples() {
        for (k, b) in [(0.0, -1.0), (-4.0, 0.0), (2.5, 1.3), (-3.0, 3.0), (0.7, -0.2)] {
            let a = solve(sp(k, b)).unwrap();
            let o = oracle_roots(sp(k, b));
            let d = multiset_distance(&a.roots, &o.roots);
            assert!(d < 1e-9, "({k},{b}): {d}");
        }
    }

    #[test]
    fn oracle_example_bisection_root() {
        let o = oracle_roots(sp(0.0, -1.0));
        let real = o.roots.iter().find(|z| z.im == 0.0).unwrap();
        assert!((real.re - 0.6823278038280193).abs() < 1e-9);
    }

    #[test]
    fn vieta_identities() {
        for (k, b) in [(1.3, 0.4), (-2.7, -1.1), (4.2, 3.3), (0.0, 0.0)] {
            let r = solve(sp(k, b)).unwrap().roots;
            let sum = r[0] + r[1] + r[2];
            let pair = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
            let prod = r[0] * r[1] * r[2];
            assert!((sum + k).norm() < 1e-9 * k.abs().max(1.0));
            assert!((pair - 1.0).norm() < 1e-9);
            assert!((prod + b).norm() < 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn roots_monic_general() {
        // (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6.
        let r = roots_monic(-6.0, 11.0, -6.0);
        for (z, e) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z.re - e).abs() < 1e-10 && z.im == 0.0);
        }
        // (z-1)(z^2+1).
        let r = roots_monic(-1.0, 1.0, -1.0);
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-10);
        assert!((r[2] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }
}

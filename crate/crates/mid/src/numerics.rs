//! Shared numerical plumbing: adaptive Gauss-Kronrod quadrature, bracketed
//! root refinement, finite-difference weights on arbitrary nodes, and a
//! cumulative Simpson rule on uniform grids.

/// Kronrod-15 abscissae on [0, 1] side (symmetric).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss-7 weights matching the odd Kronrod abscissae.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = 0.0;
    let mut gauss = 0.0;
    for j in 0..8 {
        if j == 7 {
            let fc = f(c);
            kron += WGK[7] * fc;
            gauss += WG[3] * fc;
        } else {
            let x = h * XGK[j];
            let fsum = f(c - x) + f(c + x);
            kron += WGK[j] * fsum;
            if j % 2 == 1 {
                gauss += WG[j / 2] * fsum;
            }
        }
    }
    (kron * h, (kron - gauss).abs() * h.abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over [a, b].
/// `tol` is treated as a mixed absolute/relative target.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let mut total = 0.0;
    // Manual stack of pending subintervals.
    let mut stack: Vec<(f64, f64, usize)> = vec![(a, b, 0)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(f, lo, hi);
        let local_tol = tol * ((hi - lo) / (b - a)).abs().max(1e-30);
        if err <= local_tol * val.abs().max(1.0) || depth >= 48 {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// Bisection on [a, b] with f(a), f(b) of opposite sign; runs `iters` halvings.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, iters: usize) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo);
    debug_assert!(flo * f(hi) <= 0.0);
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// Safeguarded Newton iteration inside a bracket [lo, hi] with f(lo), f(hi)
/// of opposite sign. Falls back to bisection whenever a Newton step leaves
/// the bracket. Returns the refined root.
pub fn newton_bracketed<F, G>(f: &F, df: &G, lo0: f64, hi0: f64, tol: f64, max_iter: usize) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo0, hi0);
    let mut flo = f(lo);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        let fx = f(x);
        if fx.abs() <= tol {
            return x;
        }
        if flo * fx <= 0.0 {
            hi = x;
        } else {
            lo = x;
            flo = fx;
        }
        let d = df(x);
        let mut next = if d != 0.0 { x - fx / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == x {
            return x;
        }
        x = next;
    }
    x
}

/// Finite-difference weights on arbitrary nodes `xs` for derivatives of
/// order 0..=m at the point `z` (Fornberg's recursion). Returns
/// `weights[k][j]`: the coefficient of f(xs[j]) in the k-th derivative.
pub fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Cumulative integral of samples `f` on a uniform grid with spacing `h`.
/// Interval increments use the three-point (Simpson-family) rule
/// h/12 (-f_{i-2} + 8 f_{i-1} + 5 f_i), with a mirrored rule for the first
/// interval; O(h^4) local accuracy.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for i in 2..n {
        out[i] = out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    }
    out
}

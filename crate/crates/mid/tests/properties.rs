//! Property-based invariants for the solver and the sweep serialization.

use mid::cubic;
use mid::model::ScaledParams;
use mid::sweep::{self, Mode, RangeSpec, SweepSpec};
use mid::thetad;
use proptest::prelude::*;

const SQRT3: f64 = 1.7320508075688772;

fn sp(k: f64, b: f64) -> ScaledParams {
    ScaledParams::new(k, b)
}

proptest! {
    #[test]
    fn vieta_identities(k in -5.0f64..5.0, b in -5.0f64..5.0) {
        let sol = cubic::solve(sp(k, b)).unwrap();
        let [r1, r2, r3] = sol.roots;
        let scale = r1.norm().max(r2.norm()).max(r3.norm()).max(1.0);
        prop_assert!((r1 + r2 + r3 + k).norm() <= 1e-9 * scale.max(k.abs()));
        prop_assert!((r1 * r2 + r1 * r3 + r2 * r3 - 1.0).norm() <= 1e-9 * (scale * scale));
        prop_assert!((r1 * r2 * r3 + b).norm() <= 1e-9 * scale.powi(3).max(b.abs()).max(1.0));
    }

    #[test]
    fn sign_symmetry(k in -5.0f64..5.0, b in -5.0f64..5.0) {
        let sol = cubic::solve(sp(k, b)).unwrap();
        let neg = cubic::solve(sp(-k, -b)).unwrap();
        let flipped = [-sol.roots[0], -sol.roots[1], -sol.roots[2]];
        let scale = sol.roots.iter().map(|r| r.norm()).fold(1.0f64, f64::max);
        prop_assert!(cubic::multiset_distance(&neg.roots, &flipped) <= 1e-9 * scale);
    }

    #[test]
    fn solve_matches_oracle(k in -5.0f64..5.0, b in -5.0f64..5.0) {
        let p = sp(k, b);
        let sol = cubic::solve(p).unwrap();
        let ora = cubic::oracle_roots(p);
        let tol = if sol.discriminant.abs() < 1e-6 { 1e-5 } else { 1e-8 };
        prop_assert!(cubic::multiset_distance(&sol.roots, &ora.roots) <= tol);
    }

    #[test]
    fn boundary_antisymmetry_and_discriminant(k in SQRT3..5.0f64) {
        let (lo, hi) = thetad::delta_zero_boundary(k).unwrap();
        let (nlo, nhi) = thetad::delta_zero_boundary(-k).unwrap();
        // beta_hat_pm(-k_hat) = -beta_hat_mp(k_hat)
        prop_assert!((nlo + hi).abs() <= 1e-12 * k.powi(3).max(1.0));
        prop_assert!((nhi + lo).abs() <= 1e-12 * k.powi(3).max(1.0));
        for b in [lo, hi, nlo, nhi] {
            let kk = if b == lo || b == hi { k } else { -k };
            prop_assert!(cubic::discriminant(sp(kk, b)).abs() <= 1e-9 * kk.powi(6).abs().max(1.0));
        }
    }

    #[test]
    fn region_flags_consistent(k in -5.0f64..5.0, b in -5.0f64..5.0) {
        let rc = thetad::classify_region(sp(k, b)).unwrap();
        if rc.prop8_applies {
            prop_assert!(b < 0.0);
        }
        if rc.prop9_applies {
            prop_assert!(b > k);
        }
        prop_assert!(rc.n_real_roots == 1 || rc.n_real_roots == 2 || rc.n_real_roots == 3);
    }

    #[test]
    fn spec_json_round_trip(
        lo in -5.0f64..0.0,
        span in 0.1f64..5.0,
        n in 2usize..500,
        k in -3.0f64..3.0,
    ) {
        let spec = SweepSpec {
            mode: Mode::Branch1d,
            fixed: [("k_hat".to_string(), k)].into_iter().collect(),
            range: [("beta_hat".to_string(), RangeSpec(lo, lo + span, n))].into_iter().collect(),
            outputs: vec![sweep::Format::Csv, sweep::Format::Json],
            quantity: Some("u".to_string()),
        };
        let text = serde_json::to_string(&spec).unwrap();
        let back: SweepSpec = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &spec);
    }
}

#[test]
fn dataset_json_round_trip_exact_floats() {
    let spec = SweepSpec {
        mode: Mode::Branch1d,
        fixed: [("k_hat".to_string(), -2.5)].into_iter().collect(),
        range: [("beta_hat".to_string(), RangeSpec(-1.0, 1.0, 64))].into_iter().collect(),
        outputs: vec![],
        quantity: Some("u".to_string()),
    };
    let d = sweep::run_spec(&spec).unwrap();
    let text = sweep::emit_json(&d);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for (i, row) in v["rows"].as_array().unwrap().iter().enumerate() {
        for (j, cell) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(cell.as_f64().unwrap(), d.rows[i][j], "row {i} col {j}");
        }
    }
}

mod common;

use cdr_relay::upper_bound::{inner_max, r_ub, BoundConfig};
use common::instance;

// The outer minimum frequently sits on the κ₁ = ε guard; the sub-rates stay
// finite as κ → 0, so the guard only loosens the bound slightly.
#[test]
fn endpoint_guard_costs_little() {
    let cfg = BoundConfig::default();
    let mut on_guard = 0;
    let mut worst = 0.0f64;
    for t in 0..50 {
        let m = [2, 4][t % 2];
        let db = [0.0, 10.0, 20.0, 30.0][t % 4];
        let (params, cs) = instance(77, m, db, t);
        let b = r_ub(&cs, &params, &cfg).unwrap();
        if b.kappa1 <= 2.0 * cfg.eps || b.kappa1 >= 1.0 - 2.0 * cfg.eps {
            on_guard += 1;
        }
        for kappa1 in [1e-9, 1.0 - 1e-9] {
            let (beyond, _, _) = inner_max(&cs, &params, kappa1, &cfg).unwrap();
            assert!(beyond.is_finite());
            worst = worst.max(b.r_ub - beyond);
        }
    }
    println!(
        "outer minimum on the guard in {on_guard}/50 instances; largest looseness {worst:.2e} bits"
    );
    assert!(worst < 1e-3);
}

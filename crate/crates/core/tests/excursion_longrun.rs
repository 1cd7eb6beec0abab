//! Long-horizon excursion smoke checks.

use std::sync::Arc;

use loglaw_core::estimators::cusp_excursion;
use loglaw_core::hyperbolic::{liouville_sample, FuchsianDomain, TranslateCache, UnitTangent};
use loglaw_core::rng::RngStream;
use loglaw_core::Complex;

/// Sup-law smoke check on the modular surface: the running max of the
/// distance to a marked point grows like log t, so max d / log t sits
/// near 1 after t = 1e6. The limit converges slowly; the band is wide on
/// purpose.
#[test]
fn cusp_statistic_near_one_after_long_run() {
    let dom = Arc::new(FuchsianDomain::modular());
    let p = UnitTangent::from_position(Complex::new(0.0, 2.0), 0.0);
    let cache = TranslateCache::build(&dom, &p, 1.0).unwrap();
    let grid: Vec<f64> = (1..=6).map(|k| 10f64.powi(k)).collect();
    use rayon::prelude::*;
    let finals: Vec<f64> = (0..4u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(606, i);
            let u0 = liouville_sample(&dom, &mut rng).unwrap();
            let curve = cusp_excursion(&dom, &cache, i, &u0, &grid).unwrap();
            // Running max is monotone along the grid.
            for w in curve.points.windows(2) {
                assert!(w[1].d >= w[0].d - 1e-12);
            }
            curve.points.last().unwrap().ratio
        })
        .collect();
    for (i, r) in finals.iter().enumerate() {
        assert!(
            (0.6..=1.4).contains(r),
            "trajectory {i}: sup statistic {r} outside [0.6, 1.4]"
        );
    }
    println!("cusp sup statistics at t = 1e6: {finals:?}");
}

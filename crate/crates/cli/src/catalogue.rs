//! The printed catalogue: systems, targets, experiments, observables,
//! each with its parameters and the law it probes.

/// Catalogue rows, lexicographically sorted within each section.
pub fn catalogue_text() -> String {
    let mut out = String::new();

    let mut systems = vec![
        (
            "bolza",
            "geodesic flow, genus-2 compact hyperbolic surface (area 4 pi); \
             exponential mixing; base-ball hitting exponent n-1 = 1, \
             sasaki-ball exponent 2n-2 = 2, approach law 1/(n-1) = 1",
        ),
        (
            "cat",
            "toral automorphism [[2,1],[1,1]]; exponential mixing; \
             ball hitting exponent = 2 (equality case of the discrete law)",
        ),
        (
            "doubling",
            "x -> 2x mod 1 on a safe-prime grid; exponential mixing; \
             ball hitting exponent = 1 (equality case of the discrete law)",
        ),
        (
            "linear-flow",
            "unit-speed linear torus flow (param: slope, default golden); \
             ergodic but never mixing; lower-bound law only",
        ),
        (
            "modular",
            "geodesic flow on the modular surface (area pi/3, one cusp); \
             heuristic: non-compact, used for ball hitting away from the \
             cusp and for cusp excursions (sup-law statistic near 1)",
        ),
        (
            "rotation-custom",
            "circle rotation (param: alpha); arithmetic boundary case",
        ),
        (
            "rotation-golden",
            "circle rotation by (sqrt 5 - 1)/2; no mixing yet hitting \
             exponent = 1 (equality holds without mixing)",
        ),
        (
            "rotation-liouville",
            "rotation by [0; 1, 4, 27, 256, 3125, 46656] (exact rational); \
             hitting law fails: adversarial radii show log tau / -log l > 1.5",
        ),
        (
            "suspension",
            "suspension flow over cat/doubling (roof: constant or \
             c0 + c1 cos(2 pi x)); section identity tau_flow = sum of \
             return times holds to machine precision",
        ),
    ];
    systems.sort_by_key(|r| r.0);
    out.push_str("SYSTEMS\n");
    for (name, doc) in systems {
        out.push_str(&format!("  {name:<18} {doc}\n"));
    }

    let mut targets = vec![
        (
            "ball",
            "base-manifold ball around `center` (torus coords, or [re, im(, theta)] \
             on hyperbolic surfaces); level = 1-Lipschitz distance",
        ),
        (
            "sasaki-ball",
            "ball in the unit tangent bundle around a tangent vector \
             (hyperbolic systems only); surrogate Sasaki metric, \
             bi-Lipschitz at small scales so exponents are unchanged",
        ),
    ];
    targets.sort_by_key(|r| r.0);
    out.push_str("\nTARGETS\n");
    for (name, doc) in targets {
        out.push_str(&format!("  {name:<18} {doc}\n"));
    }

    let mut experiments = vec![
        (
            "correlation",
            "ensemble correlation curve C(t) for a named observable pair, \
             with noise floor and decay classification \
             (exponential/polynomial/none/inconclusive)",
        ),
        (
            "cusp-excursion",
            "running max of the distance to `center` on the modular \
             surface; statistic max d / log t expected near 1",
        ),
        (
            "cylinder-dimension",
            "per-epsilon slopes of log mu(C_{eps,l}) vs log l and the \
             conditional dimension at the smallest epsilon, with a \
             stability gap across epsilons",
        ),
        (
            "excursion",
            "running min d_t of the distance to `center` along geodesics; \
             -log d_t / log t drifts to 1/(n-1) = 1 on the Bolza surface",
        ),
        (
            "hitting-exponent",
            "median log hitting time vs -log radius over an ensemble; \
             slope estimates the target-measure exponent when mixing is \
             fast (and bounds it from below always); \
             placement = adversarial reproduces the rotation failure",
        ),
        (
            "section-check",
            "suspension flows: verify tau_flow = sum of return times \
             exactly, estimate the mean return, compare flow vs section \
             exponents",
        ),
    ];
    experiments.sort_by_key(|r| r.0);
    out.push_str("\nEXPERIMENTS\n");
    for (name, doc) in experiments {
        out.push_str(&format!("  {name:<18} {doc}\n"));
    }

    out.push_str("\nOBSERVABLES (correlation experiments)\n");
    let mut names = loglaw_core::estimators::Observable::catalogue_names();
    names.sort_unstable();
    for n in names {
        let doc = match n {
            "cat-mode-cascade" => {
                "geometric mode sum along the cat map's unstable lattice \
                 orbit; exact two-fold decay per step"
            }
            "const" => "constant 1 (degenerate; correlations vanish)",
            "coord-x" => "first coordinate",
            "cos-x" => "cos(2 pi x); single mode",
            "tri-x" => "centered triangle wave; full odd spectrum, Lipschitz",
            _ => "",
        };
        out.push_str(&format!("  {n:<18} {doc}\n"));
    }
    out
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cvclone::cloner::{
    cascade, optimal_fidelity_exact, optimal_variance_exact, squeezed_variant, to_f64, ClonerSpec,
    CopyCount, Rational,
};
use cvclone::estimation::{
    cloning_lower_bound_exact, default_weight_grid, holevo_sweep, simulate_heterodyne_estimate,
    simulate_joint_measurement, symmetric_variance_bound, WEIGHT_GRID_POINTS,
};
use cvclone::fock::{
    cascade_density_check, default_cutoff, QuadratureGrid, DEFAULT_TRUNCATION_TOLERANCE,
};
use cvclone::quadrature::{
    add_noise, CoherentState, ComplexAmplitude, GaussianMixtureState, SqueezedState,
};
use cvclone::verify::{
    cascade_pairs, oracle_centers, oracle_fidelity, oracle_mixture_fidelity, FockConfig,
    ORACLE_SCENARIOS,
};

const FIDELITY_TOL: f64 = 1e-5;
const CASCADE_TOL: f64 = 1e-6;
const SQUEEZED_TOL: f64 = 1e-4;
const HOLEVO_PEAK_TOL: f64 = 1e-12;
const SIGMAS: f64 = 5.0;
const MC_SAMPLES: usize = 1_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn q(p: i128, d: i128) -> Rational {
    Rational::new(p, d)
}

fn fin(m: u32) -> CopyCount {
    CopyCount::Finite(m)
}

const INF: CopyCount = CopyCount::Unbounded;

fn within_budget(elapsed: Duration, budget: Duration) -> bool {
    elapsed <= budget
}

fn closed_form_exactness() -> Outcome {
    let mut bad = Vec::new();
    let stated = [
        (
            "sigma2(1,2)=1/2",
            optimal_variance_exact(1, fin(2)).unwrap(),
            q(1, 2),
        ),
        (
            "f(1,2)=2/3",
            optimal_fidelity_exact(1, fin(2)).unwrap(),
            q(2, 3),
        ),
        (
            "f(1,inf)=1/2",
            optimal_fidelity_exact(1, INF).unwrap(),
            q(1, 2),
        ),
    ];
    for (name, got, want) in stated {
        if got != want {
            bad.push(format!("{name}: got {got}"));
        }
    }
    for n in 1..=64u32 {
        let ni = i128::from(n);
        let cases = [
            (
                "sigma2(N,N)",
                optimal_variance_exact(n, fin(n)).unwrap(),
                q(0, 1),
            ),
            (
                "f(N,N)",
                optimal_fidelity_exact(n, fin(n)).unwrap(),
                q(1, 1),
            ),
            (
                "sigma2(N,inf)",
                optimal_variance_exact(n, INF).unwrap(),
                q(1, ni),
            ),
            (
                "f(N,inf)",
                optimal_fidelity_exact(n, INF).unwrap(),
                q(ni, ni + 1),
            ),
        ];
        for (name, got, want) in cases {
            if got != want {
                bad.push(format!("{name} at N={n}: got {got}"));
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "all stated values exact for N<=64".into()
        } else {
            bad.join("; ")
        },
    }
}

fn bound_chain_identity() -> Outcome {
    let mut checked = 0;
    let mut bad = 0;
    for n in 1..=64u32 {
        for m in (n..=64).map(fin).chain([INF]) {
            checked += 1;
            if cloning_lower_bound_exact(n, m).unwrap() != optimal_variance_exact(n, m).unwrap() {
                bad += 1;
            }
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("{bad} mismatches over {checked} (N,M) pairs"),
    }
}

fn optimal_cascade_closure() -> Outcome {
    let mut checked = 0;
    let mut bad = 0;
    let mut worst_float = 0.0f64;
    for n in 1..=32u32 {
        for m in n..=32 {
            let first = ClonerSpec::opt(n, m).unwrap();
            for l in m..=32 {
                checked += 1;
                let composed = cascade(&first, &ClonerSpec::opt(m, l).unwrap()).unwrap();
                let want = optimal_variance_exact(n, fin(l)).unwrap();
                if composed.exact.map(|e| e.variance) != Some(want) {
                    bad += 1;
                }
                worst_float = worst_float.max((composed.noise.var_x - to_f64(want)).abs());
            }
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{bad} exact mismatches over {checked} triples (float drift {worst_float:.1e})"
        ),
    }
}

fn fock_oracle_fidelity() -> Outcome {
    let config = FockConfig::default();
    let mut worst_err = 0.0f64;
    let mut worst_spread = 0.0f64;
    for (n, m) in ORACLE_SCENARIOS {
        let expected = to_f64(optimal_fidelity_exact(n, fin(m)).unwrap());
        let values: Vec<f64> = oracle_centers()
            .into_iter()
            .map(|a| oracle_fidelity(n, fin(m), a, &config).unwrap())
            .collect();
        for v in &values {
            worst_err = worst_err.max((v - expected).abs());
        }
        let hi = values.iter().cloned().fold(f64::MIN, f64::max);
        let lo = values.iter().cloned().fold(f64::MAX, f64::min);
        worst_spread = worst_spread.max(hi - lo);
    }
    Outcome {
        pass: worst_err < FIDELITY_TOL && worst_spread < FIDELITY_TOL,
        detail: format!("max |f_oracle - f| = {worst_err:.2e}, max center spread = {worst_spread:.2e} (tol {FIDELITY_TOL:e})"),
    }
}

fn numerical_cascade_additivity() -> Outcome {
    let grid = QuadratureGrid::default();
    let mut diffs = Vec::new();
    for (n1, n2) in cascade_pairs() {
        let total = add_noise(n1, n2);
        let cutoff = default_cutoff(0.0, total.max_variance());
        let d = cascade_density_check(
            CoherentState::VACUUM,
            n1,
            n2,
            cutoff,
            &grid,
            DEFAULT_TRUNCATION_TOLERANCE,
        )
        .unwrap();
        diffs.push(d);
    }
    let worst = diffs.iter().cloned().fold(0.0, f64::max);
    Outcome {
        pass: worst < CASCADE_TOL,
        detail: format!(
            "entrywise differences [{}] (tol {CASCADE_TOL:e})",
            diffs
                .iter()
                .map(|d| format!("{d:.2e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

fn joint_measurement_saturation() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for seed in [42u64, 7, 1001] {
        let r = simulate_joint_measurement(0.5, CoherentState::VACUUM, MC_SAMPLES, seed).unwrap();
        let zx = (r.var_x_hat - 1.0) / r.stderr_x;
        let zp = (r.var_p_hat - 1.0) / r.stderr_p;
        let zprod = (r.product() - 1.0) / r.product_stderr();
        pass &= zx.abs() <= SIGMAS && zp.abs() <= SIGMAS && zprod.abs() <= SIGMAS;
        parts.push(format!(
            "seed {seed}: z_x={zx:+.2} z_p={zp:+.2} z_prod={zprod:+.2}"
        ));
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn estimation_scaling() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [1u32, 2, 4, 8] {
        let r = simulate_heterodyne_estimate(ComplexAmplitude::new(1.0, -0.5), n, MC_SAMPLES, 42)
            .unwrap();
        let expected = 1.0 / f64::from(n);
        let zx = (r.var_x_hat - expected) / r.stderr_x;
        let zp = (r.var_p_hat - expected) / r.stderr_p;
        pass &= zx.abs() <= SIGMAS && zp.abs() <= SIGMAS;
        parts.push(format!("N={n}: z_x={zx:+.2} z_p={zp:+.2}"));
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn holevo_sweep_check() -> Outcome {
    let grid = default_weight_grid();
    let bounds: Vec<f64> = grid
        .iter()
        .map(|&w| symmetric_variance_bound(w).unwrap())
        .collect();
    let (argmax, max) =
        bounds.iter().enumerate().fold(
            (0, f64::MIN),
            |acc, (i, &b)| if b > acc.1 { (i, b) } else { acc },
        );
    let peak_ok = grid.len() == WEIGHT_GRID_POINTS
        && (max - 1.0).abs() <= HOLEVO_PEAK_TOL
        && (grid[argmax].ratio() - 1.0).abs() <= HOLEVO_PEAK_TOL;

    let report = simulate_heterodyne_estimate(ComplexAmplitude::ZERO, 1, MC_SAMPLES, 42).unwrap();
    let sweep = holevo_sweep(&grid, &report).unwrap();
    let violations = sweep.iter().filter(|p| !p.satisfied(SIGMAS)).count();
    let mid = &sweep[argmax];
    let z_mid = (mid.lhs - mid.rhs) / mid.lhs_stderr;
    Outcome {
        pass: peak_ok && violations == 0 && z_mid.abs() <= SIGMAS,
        detail: format!(
            "peak {max} at g_x/g_p={} (grid {}), {violations} violations, equality point z={z_mid:+.2}",
            grid[argmax].ratio(),
            grid.len()
        ),
    }
}

fn squeezed_variant_check() -> Outcome {
    let r = 0.5;
    let cloner = squeezed_variant(1, 2, r).unwrap();
    let product_exact = cloner.noise_product_exact() == Some(q(1, 4));
    let mix =
        GaussianMixtureState::new(SqueezedState::new(ComplexAmplitude::ZERO, r), cloner.noise);
    let f = oracle_mixture_fidelity(&mix, &FockConfig::default()).unwrap();
    let err = (f - 2.0 / 3.0).abs();
    Outcome {
        pass: product_exact && err <= SQUEEZED_TOL,
        detail: format!(
            "oracle fidelity {f:.10} (|err| {err:.2e}, tol {SQUEEZED_TOL:e}); exact var_x*var_p = 1/4: {product_exact}"
        ),
    }
}

fn monotonicity() -> Outcome {
    let mut bad = Vec::new();
    for (n, m) in [(1u32, 2u32), (1, 3), (2, 3)] {
        for k in 1..16u32 {
            let v0 = optimal_variance_exact(k * n, fin(k * m)).unwrap();
            let v1 = optimal_variance_exact((k + 1) * n, fin((k + 1) * m)).unwrap();
            let f0 = optimal_fidelity_exact(k * n, fin(k * m)).unwrap();
            let f1 = optimal_fidelity_exact((k + 1) * n, fin((k + 1) * m)).unwrap();
            if !(v1 < v0 && f1 > f0) {
                bad.push(format!("({n},{m}) k={k}"));
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "strict for k=1..16".into()
        } else {
            bad.join(", ")
        },
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, &'static str, fn() -> Outcome, Duration);
    let ms = Duration::from_millis;
    let s = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        (
            "AC1",
            "closed-form exactness",
            closed_form_exactness,
            ms(1000),
        ),
        (
            "AC2",
            "bound-chain identity",
            bound_chain_identity,
            ms(1000),
        ),
        (
            "AC3",
            "optimal-cascade closure",
            optimal_cascade_closure,
            s(1),
        ),
        ("AC4", "Fock-oracle fidelity", fock_oracle_fidelity, s(60)),
        (
            "AC5",
            "cascade additivity (numerical)",
            numerical_cascade_additivity,
            s(60),
        ),
        (
            "AC6",
            "joint-measurement saturation",
            joint_measurement_saturation,
            s(10),
        ),
        ("AC7", "estimation scaling", estimation_scaling, s(20)),
        ("AC8", "weighted-bound sweep", holevo_sweep_check, s(10)),
        ("AC9", "squeezed variant", squeezed_variant_check, s(30)),
        ("AC10", "monotonicity in k", monotonicity, ms(1000)),
    ];

    let mut failures = 0;
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let on_time = within_budget(elapsed, budget);
        let pass = outcome.pass && on_time;
        if !pass {
            failures += 1;
        }
        println!(
            "{} {id} {name}: {} [{:.3}s, budget {:.0?}{}]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget,
            if on_time { "" } else { ", over budget" }
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

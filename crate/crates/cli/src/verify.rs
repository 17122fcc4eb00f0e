//! Named invariant suites runnable from the command line with fixed seeds.
//! A check that errors internally counts as failed — the verdict never hides
//! a broken computation behind a clean exit.

use serde::Serialize;

use entrobound::bounds::{eigenstate_baseline, maassen_uffink, tight_bound, tight_bound_guarded};
use entrobound::entropy::{
    renyi, renyi_from_conjugate_norm, renyi_from_norm, shannon, ProbabilityVector,
};
use entrobound::linalg::{fourier_unitary, haar_state, haar_unitary, lp_norm, AmplitudeVector};
use entrobound::npim::{npim_norm, NpimConfig};
use entrobound::qubit::{
    critical_angle, curvature_at_half_angle, entropy_sum_derivative, qubit_bound,
    qubit_entropy_scan_min, real_reduction_check, BoundBranch,
};
use entrobound::HolderPair;

use crate::params::RunParams;

pub const SUITES: [&str; 6] = [
    "norms",
    "entropy-identities",
    "ordering-chain",
    "interpolation",
    "qubit",
    "tightness",
];

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub rng_seed: u64,
    pub checks: Vec<CheckResult>,
}

struct Suite {
    checks: Vec<CheckResult>,
}

impl Suite {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, name: &str, outcome: Result<(bool, String), String>) {
        let (pass, detail) = match outcome {
            Ok((pass, detail)) => (pass, detail),
            Err(message) => (false, format!("check errored: {message}")),
        };
        self.checks.push(CheckResult {
            name: name.into(),
            pass,
            detail,
        });
    }
}

fn config(params: &RunParams, s: f64) -> Result<NpimConfig, String> {
    let pair = HolderPair::new(s).map_err(|e| e.to_string())?;
    Ok(NpimConfig::new(pair)
        .with_n_seeds(params.seeds)
        .with_epsilon(params.epsilon)
        .with_max_iterations(params.max_iters)
        .with_rng_seed(params.rng_seed))
}

pub fn run_suite(name: &str, params: &RunParams) -> Result<SuiteReport, String> {
    let mut suite = Suite::new();
    match name {
        "norms" => suite_norms(&mut suite, params),
        "entropy-identities" => suite_entropy_identities(&mut suite, params),
        "ordering-chain" => suite_ordering_chain(&mut suite, params),
        "interpolation" => suite_interpolation(&mut suite, params),
        "qubit" => suite_qubit(&mut suite, params),
        "tightness" => suite_tightness(&mut suite, params),
        other => {
            return Err(format!(
                "unknown suite {other:?}; available: {}",
                SUITES.join(", ")
            ))
        }
    }
    let pass = suite.checks.iter().all(|c| c.pass);
    Ok(SuiteReport {
        suite: name.into(),
        pass,
        rng_seed: params.rng_seed,
        checks: suite.checks,
    })
}

fn suite_norms(suite: &mut Suite, params: &RunParams) {
    let base = params.rng_seed;

    suite.check(
        "lp_monotone_in_p",
        (|| {
            let mut worst = f64::NEG_INFINITY;
            for k in 0..100u64 {
                let dim = 2 + (k % 7) as usize;
                let a = haar_state(dim, base.wrapping_add(k)).map_err(|e| e.to_string())?;
                let grid: Vec<f64> = (0..=15).map(|i| 1.0 + 0.2 * i as f64).collect();
                let mut prev = f64::INFINITY;
                for p in grid {
                    let n = lp_norm(&a, p).map_err(|e| e.to_string())?;
                    worst = worst.max(n - prev);
                    prev = n;
                }
            }
            Ok((worst <= 1e-12, format!("worst increase {worst:.2e}")))
        })(),
    );

    suite.check(
        "image_l2_preserved",
        (|| {
            let mut worst: f64 = 0.0;
            for k in 0..50u64 {
                let dim = 2 + (k % 5) as usize;
                let u =
                    haar_unitary(dim, base.wrapping_add(1000 + k)).map_err(|e| e.to_string())?;
                let v = haar_state(dim, base.wrapping_add(2000 + k)).map_err(|e| e.to_string())?;
                let w = u.apply(&v).map_err(|e| e.to_string())?;
                worst = worst.max((w.l2_norm() - 1.0).abs());
            }
            Ok((worst <= 1e-10, format!("worst defect {worst:.2e}")))
        })(),
    );

    suite.check(
        "adjoint_inverts",
        (|| {
            let mut worst: f64 = 0.0;
            for k in 0..50u64 {
                let dim = 2 + (k % 5) as usize;
                let u =
                    haar_unitary(dim, base.wrapping_add(3000 + k)).map_err(|e| e.to_string())?;
                let v = haar_state(dim, base.wrapping_add(4000 + k)).map_err(|e| e.to_string())?;
                let back = u
                    .adjoint_apply(&u.apply(&v).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let defect = v
                    .entries()
                    .iter()
                    .zip(back.entries())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0f64, f64::max);
                worst = worst.max(defect);
            }
            Ok((worst <= 1e-10, format!("worst defect {worst:.2e}")))
        })(),
    );

    suite.check(
        "haar_deterministic",
        (|| {
            let a = haar_unitary(5, base).map_err(|e| e.to_string())?;
            let b = haar_unitary(5, base).map_err(|e| e.to_string())?;
            let identical = a.matrix().entries() == b.matrix().entries();
            Ok((identical, format!("bit-identical = {identical}")))
        })(),
    );

    suite.check(
        "lp_reference_values",
        (|| {
            let x = std::f64::consts::FRAC_1_SQRT_2;
            let balanced = AmplitudeVector::from_real(&[x, x]).map_err(|e| e.to_string())?;
            let quartic = lp_norm(&balanced, 4.0).map_err(|e| e.to_string())?;
            let pythagoras = lp_norm(
                &AmplitudeVector::from_real(&[1.0, 1.0]).map_err(|e| e.to_string())?,
                2.0,
            )
            .map_err(|e| e.to_string())?;
            let defect = (quartic - 2f64.powf(-0.25))
                .abs()
                .max((pythagoras - std::f64::consts::SQRT_2).abs());
            Ok((defect < 1e-14, format!("worst defect {defect:.2e}")))
        })(),
    );
}

fn suite_entropy_identities(suite: &mut Suite, params: &RunParams) {
    let base = params.rng_seed;

    suite.check(
        "renyi_norm_route_a",
        (|| {
            let mut worst: f64 = 0.0;
            for k in 0..200u64 {
                let dim = 2 + (k % 7) as usize;
                let a = haar_state(dim, base.wrapping_add(k)).map_err(|e| e.to_string())?;
                for s in [1.1, 1.3, 1.5, 1.7, 1.9] {
                    let lhs = renyi_from_norm(&a, s).map_err(|e| e.to_string())?;
                    let rhs = renyi(
                        &ProbabilityVector::from_amplitudes(&a).map_err(|e| e.to_string())?,
                        s / 2.0,
                    )
                    .map_err(|e| e.to_string())?;
                    worst = worst.max((lhs - rhs).abs());
                }
            }
            Ok((worst < 1e-9, format!("worst defect {worst:.2e}")))
        })(),
    );

    suite.check(
        "renyi_norm_route_b",
        (|| {
            let mut worst: f64 = 0.0;
            for k in 0..200u64 {
                let dim = 2 + (k % 7) as usize;
                let a = haar_state(dim, base.wrapping_add(5000 + k)).map_err(|e| e.to_string())?;
                let u = haar_unitary(dim, base.wrapping_add(100 + dim as u64))
                    .map_err(|e| e.to_string())?;
                let b = u.apply(&a).map_err(|e| e.to_string())?;
                for s in [1.1, 1.5, 1.9] {
                    let pair = HolderPair::new(s).map_err(|e| e.to_string())?;
                    let lhs = renyi_from_conjugate_norm(&b, s).map_err(|e| e.to_string())?;
                    let rhs = renyi(
                        &ProbabilityVector::from_amplitudes(&b).map_err(|e| e.to_string())?,
                        pair.conjugate() / 2.0,
                    )
                    .map_err(|e| e.to_string())?;
                    worst = worst.max((lhs - rhs).abs());
                }
            }
            Ok((worst < 1e-9, format!("worst defect {worst:.2e}")))
        })(),
    );

    suite.check(
        "norm_derivative_recovers_shannon",
        (|| {
            let theta = 1.0 - 1e-5;
            let mut worst: f64 = 0.0;
            for k in 0..20u64 {
                let dim = 2 + (k % 5) as usize;
                let a = haar_state(dim, base.wrapping_add(7000 + k)).map_err(|e| e.to_string())?;
                let s = 1.5;
                let p_theta = 1.0 / ((1.0 - theta) / s + theta / 2.0);
                let quotient =
                    lp_norm(&a, p_theta).map_err(|e| e.to_string())?.log2() / (1.0 - theta);
                let expect = (2.0 - s) / (2.0 * s)
                    * shannon(&ProbabilityVector::from_amplitudes(&a).map_err(|e| e.to_string())?);
                worst = worst.max((quotient - expect).abs());
            }
            Ok((worst < 1e-3, format!("worst defect {worst:.2e}")))
        })(),
    );

    suite.check(
        "renyi_continuous_at_one",
        (|| {
            let mut worst: f64 = 0.0;
            for k in 0..100u64 {
                let dim = 2 + (k % 6) as usize;
                let a = haar_state(dim, base.wrapping_add(9000 + k)).map_err(|e| e.to_string())?;
                let p = ProbabilityVector::from_amplitudes(&a).map_err(|e| e.to_string())?;
                let h = shannon(&p);
                for alpha in [1.0 - 1e-6, 1.0 + 1e-6] {
                    let r = renyi(&p, alpha).map_err(|e| e.to_string())?;
                    worst = worst.max((r - h).abs());
                }
            }
            Ok((worst < 1e-5, format!("worst defect {worst:.2e}")))
        })(),
    );
}

fn suite_ordering_chain(suite: &mut Suite, params: &RunParams) {
    suite.check(
        "mu_below_gamma_and_baseline_chain",
        (|| {
            let mut worst_violation = f64::NEG_INFINITY;
            let mut cases = 0;
            for k in 0..10u64 {
                let d = [2usize, 3, 4][(k % 3) as usize];
                let u = haar_unitary(d, params.rng_seed.wrapping_add(600 + k))
                    .map_err(|e| e.to_string())?;
                let mu = maassen_uffink(&u);
                let baseline = eigenstate_baseline(&u).value;
                for s in [1.3, 1.6, 1.9] {
                    let cfg = config(params, s)?;
                    let t = tight_bound(&u, &cfg).map_err(|e| e.to_string())?;
                    worst_violation = worst_violation.max(mu - t.gamma_s - 1e-6);
                    if t.estimate.certified {
                        worst_violation = worst_violation.max(t.gamma_s - baseline - 1e-6);
                    }
                    cases += 1;
                }
            }
            Ok((
                worst_violation <= 0.0 && cases == 30,
                format!("{cases} cases, worst violation {worst_violation:.2e}"),
            ))
        })(),
    );
}

fn suite_interpolation(suite: &mut Suite, params: &RunParams) {
    suite.check(
        "interpolated_norm_below_endpoint_power",
        (|| {
            let s = 1.5f64;
            let mut worst = f64::NEG_INFINITY;
            for k in 0..10u64 {
                let d = [2usize, 3, 4][(k % 3) as usize];
                let u = haar_unitary(d, params.rng_seed.wrapping_add(700 + k))
                    .map_err(|e| e.to_string())?;
                let endpoint = npim_norm(&u, &config(params, s)?)
                    .map_err(|e| e.to_string())?
                    .value;
                for theta in [0.25, 0.5, 0.75] {
                    let p_theta = 1.0 / ((1.0 - theta) / s + theta / 2.0);
                    let interpolated = npim_norm(&u, &config(params, p_theta)?)
                        .map_err(|e| e.to_string())?
                        .value;
                    worst = worst.max(interpolated - endpoint.powf(1.0 - theta) - 1e-8);
                }
            }
            Ok((worst <= 0.0, format!("worst excess {worst:.2e}")))
        })(),
    );
}

fn suite_qubit(suite: &mut Suite, params: &RunParams) {
    let phi_c = critical_angle();
    let residual = 1.0 + phi_c.cos() * (phi_c / 2.0).tan().ln();
    suite.check(
        "critical_angle_defining_equation",
        Ok((
            residual.abs() < 1e-9 && (0.58..0.592).contains(&phi_c),
            format!("phi_c {phi_c:.6}, residual {residual:.2e}"),
        )),
    );

    let below = curvature_at_half_angle(phi_c - 0.01);
    let above = curvature_at_half_angle(phi_c + 0.01);
    suite.check(
        "curvature_sign_change",
        Ok((
            below > 0.0 && above < 0.0,
            format!("curvature {below:.3} / {above:.3}"),
        )),
    );

    let mut worst_derivative: f64 = 0.0;
    for k in 1..=20 {
        let phi = std::f64::consts::FRAC_PI_4 * k as f64 / 20.0;
        worst_derivative = worst_derivative.max(entropy_sum_derivative(phi / 2.0, phi).abs());
    }
    suite.check(
        "stationary_at_half_angle",
        Ok((
            worst_derivative < 1e-9,
            format!("worst |derivative| {worst_derivative:.2e}"),
        )),
    );

    suite.check(
        "branch_consistency",
        (|| {
            let phi_c = critical_angle();
            let mut ok = true;
            let mut detail = String::new();
            for phi in [0.3, phi_c - 1e-3, phi_c + 5e-3, 0.7] {
                let r = qubit_bound(phi).map_err(|e| e.to_string())?;
                let closed = 2.0
                    * entrobound::entropy::binary_entropy((phi / 2.0).cos().powi(2))
                        .map_err(|e| e.to_string())?;
                let consistent = match r.branch {
                    BoundBranch::ClosedForm => (r.value - closed).abs() < 1e-8,
                    BoundBranch::NumericMin => r.value < closed,
                };
                if !consistent {
                    ok = false;
                    detail = format!("inconsistent at phi {phi}: {} vs {closed}", r.value);
                }
            }
            Ok((
                ok,
                if ok {
                    "both branches consistent".into()
                } else {
                    detail
                },
            ))
        })(),
    );

    suite.check(
        "asymmetry_witness",
        (|| {
            let phi: f64 = 0.7;
            let lhs = 2.0
                * entrobound::entropy::binary_entropy((phi / 2.0).cos().powi(2))
                    .map_err(|e| e.to_string())?;
            let reflected = 1.0
                - 2.0
                    * entrobound::entropy::binary_entropy(
                        ((std::f64::consts::FRAC_PI_4 - phi) / 2.0).cos().powi(2),
                    )
                    .map_err(|e| e.to_string())?;
            let gap = (lhs - reflected).abs();
            Ok((gap > 1e-3, format!("reflection gap {gap:.3e}")))
        })(),
    );

    suite.check(
        "complex_states_never_beat_real_maximum",
        (|| {
            let pair = HolderPair::new(1.5).map_err(|e| e.to_string())?;
            let check =
                real_reduction_check(std::f64::consts::FRAC_PI_4, &pair, 20_000, params.rng_seed)
                    .map_err(|e| e.to_string())?;
            Ok((check.pass, format!("excess {:.2e}", check.excess)))
        })(),
    );
}

fn suite_tightness(suite: &mut Suite, params: &RunParams) {
    suite.check(
        "mub_squeeze",
        (|| {
            let mut worst: f64 = 0.0;
            for d in 2usize..=4 {
                let u = fourier_unitary(d).map_err(|e| e.to_string())?;
                for s in [1.3, 1.6, 1.9] {
                    let t = tight_bound(&u, &config(params, s)?).map_err(|e| e.to_string())?;
                    worst = worst.max((t.gamma_s - (d as f64).log2()).abs());
                }
            }
            Ok((worst < 1e-3, format!("worst defect {worst:.2e}")))
        })(),
    );

    suite.check(
        "renyi_tightness_d2",
        (|| {
            let mut worst: f64 = 0.0;
            for seed in [1u64, 2] {
                let u = haar_unitary(2, params.rng_seed.wrapping_add(800 + seed))
                    .map_err(|e| e.to_string())?;
                for s in [1.2, 1.5, 1.8] {
                    let pair = HolderPair::new(s).map_err(|e| e.to_string())?;
                    let t = tight_bound(&u, &config(params, s)?).map_err(|e| e.to_string())?;
                    let scan =
                        qubit_entropy_scan_min(&u, s / 2.0, pair.conjugate() / 2.0, 2000, 64)
                            .map_err(|e| e.to_string())?;
                    worst = worst.max((scan.value - t.gamma_s).abs());
                }
            }
            Ok((worst < 1e-3, format!("worst defect {worst:.2e}")))
        })(),
    );

    suite.check(
        "shannon_limit_d2",
        (|| {
            let mut worst: f64 = 0.0;
            for seed in [1u64, 2] {
                let u = haar_unitary(2, params.rng_seed.wrapping_add(900 + seed))
                    .map_err(|e| e.to_string())?;
                let scan =
                    qubit_entropy_scan_min(&u, 1.0, 1.0, 2000, 64).map_err(|e| e.to_string())?;
                let t = tight_bound_guarded(&u, &config(params, 1.99)?, 1.99)
                    .map_err(|e| e.to_string())?;
                worst = worst.max((scan.value - t.gamma_s).abs());
            }
            Ok((worst < 2e-2, format!("worst gap {worst:.2e}")))
        })(),
    );
}

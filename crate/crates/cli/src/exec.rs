//! Command execution: every subcommand resolves to a pure function of
//! [`RunParams`] returning the output text, which is what makes manifest
//! re-runs bit-exact.

use serde::Serialize;

use entrobound::bounds::{
    bound_report, dimension_sweep, gamma_prefactor, maassen_uffink, montecarlo_min_entropy,
    DEFAULT_S_MAX,
};
use entrobound::linalg::derive_seed;
use entrobound::npim::{montecarlo_norm, npim_norm_with_seeds, NpimConfig};
use entrobound::qubit::{qubit_curve, qubit_curve_csv_header};
use entrobound::{Error as LibError, HolderPair};

use crate::gen::{parse_dims, parse_grid, resolve_source};
use crate::params::RunParams;
use crate::verify;

/// Failure with the exit code the contract assigns it:
/// 1 input error, 2 non-convergence, 3 verification failure.
pub struct CmdError {
    pub code: i32,
    pub message: String,
}

impl CmdError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

fn from_lib(e: LibError) -> CmdError {
    let code = match e {
        LibError::NonConvergence { .. } | LibError::NonFinite { .. } => 2,
        _ => 1,
    };
    CmdError {
        code,
        message: e.to_string(),
    }
}

pub struct CmdOutput {
    pub text: String,
    /// Nonzero only for `verify` when a suite fails (exit 3).
    pub exit_code: i32,
}

fn npim_config(params: &RunParams, s: f64) -> Result<NpimConfig, CmdError> {
    let pair = HolderPair::new(s).map_err(from_lib)?;
    let config = NpimConfig::new(pair)
        .with_n_seeds(params.seeds)
        .with_epsilon(params.epsilon)
        .with_max_iterations(params.max_iters)
        .with_rng_seed(params.rng_seed);
    config.validate().map_err(from_lib)?;
    Ok(config)
}

fn render<T: Serialize>(
    format: &str,
    value: &T,
    csv: impl FnOnce() -> String,
) -> Result<String, CmdError> {
    match format {
        "csv" => Ok(csv()),
        "json" => {
            let mut text =
                serde_json::to_string_pretty(value).map_err(|e| CmdError::input(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        other => Err(CmdError::input(format!(
            "unknown format {other:?}; expected csv or json"
        ))),
    }
}

pub fn run(command: &str, params: &RunParams) -> Result<CmdOutput, CmdError> {
    let text = match command {
        "bound" => cmd_bound(params)?,
        "sweep-s" => cmd_sweep_s(params)?,
        "sweep-dim" => cmd_sweep_dim(params)?,
        "qubit-curve" => cmd_qubit_curve(params)?,
        "verify" => return cmd_verify(params),
        other => return Err(CmdError::input(format!("unknown command {other:?}"))),
    };
    Ok(CmdOutput { text, exit_code: 0 })
}

fn cmd_bound(params: &RunParams) -> Result<String, CmdError> {
    let u = resolve_source(params).map_err(CmdError::input)?;
    let s = params.s.unwrap_or(1.5);
    let config = npim_config(params, s)?;
    let report = bound_report(
        &u,
        &config,
        DEFAULT_S_MAX,
        params.mc_states.filter(|&n| n > 0),
    )
    .map_err(from_lib)?;
    render(&params.format, &report, || {
        format!(
            "{}\n{}\n",
            entrobound::bounds::csv_header(),
            report.to_csv_row()
        )
    })
}

#[derive(Serialize)]
struct SweepSRow {
    s: f64,
    gamma_s_npim: f64,
    gamma_s_montecarlo: Option<f64>,
    mu_bound: f64,
    montecarlo_min_entropy: f64,
}

pub fn sweep_s_csv_header() -> &'static str {
    "s,gamma_s_npim,gamma_s_montecarlo,mu_bound,montecarlo_min_entropy"
}

fn cmd_sweep_s(params: &RunParams) -> Result<String, CmdError> {
    let u = resolve_source(params).map_err(CmdError::input)?;
    let grid_text = params
        .s_grid
        .as_deref()
        .ok_or_else(|| CmdError::input("--s-grid a:b:step is required"))?;
    let grid = parse_grid(grid_text).map_err(CmdError::input)?;
    let mu = maassen_uffink(&u);
    let mc_entropy_states = params.mc_states.unwrap_or(100_000).max(1);
    let mut rows = Vec::with_capacity(grid.len());
    for (index, &s) in grid.iter().enumerate() {
        if s > DEFAULT_S_MAX {
            return Err(CmdError::input(
                LibError::PrefactorBlowup {
                    s,
                    prefactor: 2.0 * s / (2.0 - s),
                    s_max: DEFAULT_S_MAX,
                }
                .to_string(),
            ));
        }
        let config = npim_config(params, s)?;
        // when the Monte-Carlo norm column is on, its argmax joins the seed
        // set so the iterated estimate can only improve on the sampled one
        let (gamma_mc, extra_seeds) = match params.mc_norm_states.filter(|&n| n > 0) {
            Some(n) => {
                let mc =
                    montecarlo_norm(&u, &config.s, n, derive_seed(params.rng_seed, index as u64))
                        .map_err(from_lib)?;
                (
                    Some(gamma_prefactor(s) * mc.value.log2()),
                    vec![mc.argmax_state],
                )
            }
            None => (None, Vec::new()),
        };
        let estimate = npim_norm_with_seeds(&u, &config, &extra_seeds).map_err(from_lib)?;
        let gamma_npim = gamma_prefactor(s) * estimate.value.log2();
        let mc_min = montecarlo_min_entropy(
            &u,
            1.0,
            1.0,
            mc_entropy_states,
            derive_seed(params.rng_seed, 0x6d63),
        )
        .map_err(from_lib)?;
        rows.push(SweepSRow {
            s,
            gamma_s_npim: gamma_npim,
            gamma_s_montecarlo: gamma_mc,
            mu_bound: mu,
            montecarlo_min_entropy: mc_min.value,
        });
    }
    // adjacent bound values that jump are the telltale of too few seeds;
    // warn without touching the data output
    let jump_threshold = params.warn_gamma_jump.unwrap_or(0.25);
    for window in rows.windows(2) {
        let jump = (window[1].gamma_s_npim - window[0].gamma_s_npim).abs();
        if jump > jump_threshold {
            eprintln!(
                "warning: bound jumps by {jump:.3} bits between s = {} and s = {}; \
                 consider more --seeds",
                window[0].s, window[1].s
            );
        }
    }
    render(&params.format, &rows, || {
        let mut text = String::from(sweep_s_csv_header());
        text.push('\n');
        for row in &rows {
            let mc = row
                .gamma_s_montecarlo
                .map(|v| v.to_string())
                .unwrap_or_default();
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                row.s, row.gamma_s_npim, mc, row.mu_bound, row.montecarlo_min_entropy
            ));
        }
        text
    })
}

fn cmd_sweep_dim(params: &RunParams) -> Result<String, CmdError> {
    let dims_text = params
        .dims
        .as_deref()
        .ok_or_else(|| CmdError::input("--dims a..b is required"))?;
    let dims = parse_dims(dims_text).map_err(CmdError::input)?;
    let s = params.s.unwrap_or(1.95);
    let config = npim_config(params, s)?;
    let reports = dimension_sweep(
        &dims,
        &config,
        DEFAULT_S_MAX,
        params.mc_states.filter(|&n| n > 0),
    )
    .map_err(from_lib)?;
    render(&params.format, &reports, || {
        let mut text = String::from(entrobound::bounds::csv_header());
        text.push('\n');
        for report in &reports {
            text.push_str(&report.to_csv_row());
            text.push('\n');
        }
        text
    })
}

fn cmd_qubit_curve(params: &RunParams) -> Result<String, CmdError> {
    let grid_text = params.phi_grid.as_deref().unwrap_or("0.02:0.78:0.02");
    let grid = parse_grid(grid_text).map_err(CmdError::input)?;
    let mc_states = match params.mc_states {
        Some(0) => None,
        Some(n) => Some(n),
        None => Some(100_000),
    };
    let points = qubit_curve(&grid, mc_states, params.rng_seed).map_err(from_lib)?;
    render(&params.format, &points, || {
        let mut text = String::from(qubit_curve_csv_header());
        text.push('\n');
        for point in &points {
            text.push_str(&point.to_csv_row());
            text.push('\n');
        }
        text
    })
}

fn cmd_verify(params: &RunParams) -> Result<CmdOutput, CmdError> {
    let suite = params
        .suite
        .as_deref()
        .ok_or_else(|| CmdError::input("a suite name is required"))?;
    let report = verify::run_suite(suite, params).map_err(CmdError::input)?;
    let mut text =
        serde_json::to_string_pretty(&report).map_err(|e| CmdError::input(e.to_string()))?;
    text.push('\n');
    Ok(CmdOutput {
        text,
        exit_code: if report.pass { 0 } else { 3 },
    })
}

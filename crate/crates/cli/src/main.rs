//! Command-line front end: load or generate overlap unitaries, compute
//! bound reports and sweeps, reproduce the qubit curve, run invariant
//! suites, and re-execute saved run manifests.
//!
//! Exit codes: 0 success, 1 input error, 2 non-convergence,
//! 3 verification failure.

// negated comparisons like !(step > 0.0) are deliberate NaN rejection
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod exec;
mod gen;
mod params;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use exec::{run, CmdError};
use params::{sha256_hex, RunManifest, RunParams};

const RNG_SEED_ENV: &str = "ENTROBOUND_RNG_SEED";

#[derive(Parser)]
#[command(
    name = "entrobound",
    version,
    about = "Entropic uncertainty bounds from overlap unitaries",
    after_help = "Generators: haar:d:seed | fourier:d | rotation:phi (rotation angles are \
                  folded into (0, pi/4]).\nThe default RNG seed comes from $ENTROBOUND_RNG_SEED \
                  when --rng-seed is absent.\nWith --out FILE, the run manifest is written to \
                  FILE.manifest.json; `rerun` re-executes it bit-exactly."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SourceOpts {
    /// Generator spec: haar:d:seed | fourier:d | rotation:phi
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
    /// Matrix file: {"d": n, "re": [[...]], "im": [[...]]}
    #[arg(long, value_name = "FILE", conflicts_with = "gen")]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct NpimOpts {
    /// Random seed states per norm estimate
    #[arg(long, default_value_t = 1000)]
    seeds: usize,
    /// Convergence threshold on successive norm values
    #[arg(long, default_value_t = 1e-12)]
    epsilon: f64,
    /// Iteration cap per seed
    #[arg(long = "max-iters", default_value_t = 10_000)]
    max_iters: usize,
    /// Master RNG seed (default: $ENTROBOUND_RNG_SEED, else 0)
    #[arg(long = "rng-seed")]
    rng_seed: Option<u64>,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    /// Write the data here (and the manifest to FILE.manifest.json);
    /// stdout otherwise
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Bound report for one overlap unitary
    Bound {
        #[command(flatten)]
        source: SourceOpts,
        /// Hölder exponent s in (1, 2); the bound constrains
        /// H_{s/2}(A) + H_{s'/2}(B) and, as s -> 2, H(A) + H(B)
        #[arg(long, default_value_t = 1.5)]
        s: f64,
        /// Add a Monte-Carlo entropy-minimum column over this many states
        #[arg(long = "mc-states", value_name = "N")]
        mc_states: Option<usize>,
        #[command(flatten)]
        npim: NpimOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Bound versus s on one unitary (data series)
    SweepS {
        #[command(flatten)]
        source: SourceOpts,
        /// Exponent grid a:b:step within (1, 2)
        #[arg(long = "s-grid", value_name = "A:B:STEP")]
        s_grid: String,
        /// States for the Monte-Carlo entropy-minimum column
        #[arg(long = "mc-states", value_name = "N", default_value_t = 100_000)]
        mc_states: usize,
        /// Also estimate the norm by Monte-Carlo sampling over N states and
        /// fold its argmax into the iteration seeds (0 = off)
        #[arg(long = "mc-norm-states", value_name = "N", default_value_t = 0)]
        mc_norm_states: usize,
        /// Warn when adjacent bound values jump by more than this many bits
        #[arg(long = "warn-gamma-jump", value_name = "BITS", default_value_t = 0.25)]
        warn_gamma_jump: f64,
        #[command(flatten)]
        npim: NpimOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Bound versus dimension, a fresh random unitary per d
    SweepDim {
        /// Dimension range a..b (inclusive) or a single d
        #[arg(long, value_name = "A..B")]
        dims: String,
        /// Hölder exponent s in (1, 2)
        #[arg(long, default_value_t = 1.95)]
        s: f64,
        /// Add a Monte-Carlo entropy-minimum column over this many states
        #[arg(long = "mc-states", value_name = "N")]
        mc_states: Option<usize>,
        #[command(flatten)]
        npim: NpimOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Qubit bound curve over canonical angles
    QubitCurve {
        /// Angle grid a:b:step within (0, pi/4]
        #[arg(
            long = "phi-grid",
            value_name = "A:B:STEP",
            default_value = "0.02:0.78:0.02"
        )]
        phi_grid: String,
        /// Monte-Carlo validation states per angle (0 = off)
        #[arg(long = "mc-states", value_name = "N", default_value_t = 100_000)]
        mc_states: usize,
        /// Master RNG seed (default: $ENTROBOUND_RNG_SEED, else 0)
        #[arg(long = "rng-seed")]
        rng_seed: Option<u64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run a named invariant suite and emit a JSON verdict
    Verify {
        /// One of: norms, entropy-identities, ordering-chain, interpolation,
        /// qubit, tightness
        suite: String,
        #[command(flatten)]
        npim: NpimOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Re-execute a saved run manifest
    Rerun {
        /// Path to a FILE.manifest.json written by a previous run
        manifest: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn resolve_rng_seed(flag: Option<u64>) -> Result<u64, CmdError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(RNG_SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CmdError::input(format!("{RNG_SEED_ENV}={text:?} is not a 64-bit seed"))),
        Err(_) => Ok(0),
    }
}

fn build_params(command: &Command) -> Result<(String, RunParams, OutputOpts), CmdError> {
    let mut params = RunParams::default();
    let (name, output) = match command {
        Command::Bound {
            source,
            s,
            mc_states,
            npim,
            output,
        } => {
            fill_source(&mut params, source)?;
            params.s = Some(*s);
            params.mc_states = *mc_states;
            fill_npim(&mut params, npim)?;
            ("bound", output)
        }
        Command::SweepS {
            source,
            s_grid,
            mc_states,
            mc_norm_states,
            warn_gamma_jump,
            npim,
            output,
        } => {
            fill_source(&mut params, source)?;
            params.s_grid = Some(s_grid.clone());
            params.mc_states = Some(*mc_states);
            params.mc_norm_states = Some(*mc_norm_states);
            params.warn_gamma_jump = Some(*warn_gamma_jump);
            fill_npim(&mut params, npim)?;
            ("sweep-s", output)
        }
        Command::SweepDim {
            dims,
            s,
            mc_states,
            npim,
            output,
        } => {
            params.dims = Some(dims.clone());
            params.s = Some(*s);
            params.mc_states = *mc_states;
            fill_npim(&mut params, npim)?;
            ("sweep-dim", output)
        }
        Command::QubitCurve {
            phi_grid,
            mc_states,
            rng_seed,
            output,
        } => {
            params.phi_grid = Some(phi_grid.clone());
            params.mc_states = Some(*mc_states);
            params.rng_seed = resolve_rng_seed(*rng_seed)?;
            ("qubit-curve", output)
        }
        Command::Verify {
            suite,
            npim,
            output,
        } => {
            params.suite = Some(suite.clone());
            fill_npim(&mut params, npim)?;
            ("verify", output)
        }
        Command::Rerun { .. } => unreachable!("rerun handled separately"),
    };
    params.format = output.format.clone();
    Ok((
        name.to_string(),
        params,
        OutputOpts {
            format: output.format.clone(),
            out: output.out.clone(),
        },
    ))
}

fn fill_source(params: &mut RunParams, source: &SourceOpts) -> Result<(), CmdError> {
    params.gen = source.gen.clone();
    if let Some(path) = &source.matrix {
        let bytes = std::fs::read(path)
            .map_err(|e| CmdError::input(format!("cannot read {}: {e}", path.display())))?;
        params.matrix = Some(path.display().to_string());
        params.matrix_sha256 = Some(sha256_hex(&bytes));
    }
    Ok(())
}

fn fill_npim(params: &mut RunParams, npim: &NpimOpts) -> Result<(), CmdError> {
    params.seeds = npim.seeds;
    params.epsilon = npim.epsilon;
    params.max_iters = npim.max_iters;
    params.rng_seed = resolve_rng_seed(npim.rng_seed)?;
    Ok(())
}

fn write_output(
    command: &str,
    params: &RunParams,
    output: &OutputOpts,
    text: &str,
) -> Result<(), CmdError> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| CmdError::input(format!("cannot write {}: {e}", path.display())))?;
            let manifest = RunManifest::new(command, params.clone());
            let manifest_path = manifest_path_for(path);
            std::fs::write(&manifest_path, manifest.to_json()).map_err(|e| {
                CmdError::input(format!("cannot write {}: {e}", manifest_path.display()))
            })?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn execute(cli: Cli) -> Result<i32, CmdError> {
    match &cli.command {
        Command::Rerun { manifest, output } => {
            let text = std::fs::read_to_string(manifest)
                .map_err(|e| CmdError::input(format!("cannot read {}: {e}", manifest.display())))?;
            let loaded = RunManifest::from_json(&text).map_err(CmdError::input)?;
            let result = run(&loaded.command, &loaded.parameters)?;
            write_output(&loaded.command, &loaded.parameters, output, &result.text)?;
            Ok(result.exit_code)
        }
        other => {
            let (command, params, output) = build_params(other)?;
            let result = run(&command, &params)?;
            write_output(&command, &params, &output, &result.text)?;
            Ok(result.exit_code)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1, // usage problems are input errors
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}

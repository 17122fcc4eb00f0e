//! Source and grid parsing: the generator mini-language
//! `haar:d:seed | fourier:d | rotation:phi`, matrix files, and the
//! `a:b:step` / `a..b` grid forms.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::Path;

use entrobound::linalg::{fourier_unitary, haar_unitary, rotation_unitary, ComplexMatrix};
use entrobound::OverlapUnitary;

use crate::params::{sha256_hex, RunParams};

/// Folds an arbitrary finite angle into the canonical range (0, pi/4]:
/// reduce mod pi/2, then reflect about pi/4. The rotation constructor itself
/// is strict, so the CLI canonicalizes on behalf of the caller.
pub fn canonicalize_rotation_angle(phi: f64) -> Result<f64, String> {
    if !phi.is_finite() {
        return Err(format!("rotation angle {phi} is not finite"));
    }
    let mut reduced = phi.rem_euclid(FRAC_PI_2);
    if reduced > FRAC_PI_4 {
        reduced = FRAC_PI_2 - reduced;
    }
    if reduced <= 0.0 {
        return Err(format!(
            "rotation angle {phi} folds to 0 (a compatible pair); supply a matrix file instead"
        ));
    }
    Ok(reduced)
}

/// Builds the unitary named by a generator spec.
pub fn parse_generator(spec: &str) -> Result<OverlapUnitary, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let usage = "expected haar:d:seed | fourier:d | rotation:phi";
    match parts.as_slice() {
        ["haar", d, seed] => {
            let d: usize = d
                .parse()
                .map_err(|_| format!("bad dimension in {spec:?}"))?;
            let seed: u64 = seed.parse().map_err(|_| format!("bad seed in {spec:?}"))?;
            haar_unitary(d, seed).map_err(|e| e.to_string())
        }
        ["fourier", d] => {
            let d: usize = d
                .parse()
                .map_err(|_| format!("bad dimension in {spec:?}"))?;
            fourier_unitary(d).map_err(|e| e.to_string())
        }
        ["rotation", phi] => {
            let phi: f64 = phi.parse().map_err(|_| format!("bad angle in {spec:?}"))?;
            rotation_unitary(canonicalize_rotation_angle(phi)?).map_err(|e| e.to_string())
        }
        _ => Err(format!("unrecognized generator {spec:?}; {usage}")),
    }
}

/// Loads a matrix file and wraps it as an overlap unitary, reporting the
/// unitarity deviation on rejection. When `expected_sha256` is given
/// (manifest re-runs), the file content must still hash to it.
pub fn load_matrix(
    path: &Path,
    expected_sha256: Option<&str>,
) -> Result<(OverlapUnitary, String), String> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let hash = sha256_hex(&bytes);
    if let Some(expected) = expected_sha256 {
        if expected != hash {
            return Err(format!(
                "{} changed since the manifest was written (sha256 {hash} != {expected})",
                path.display()
            ));
        }
    }
    let text = String::from_utf8(bytes).map_err(|_| format!("{} is not UTF-8", path.display()))?;
    let matrix = ComplexMatrix::from_json(&text).map_err(|e| e.to_string())?;
    let unitary = OverlapUnitary::with_default_tol(matrix).map_err(|e| e.to_string())?;
    Ok((unitary, hash))
}

/// Resolves the source named in the params (generator or matrix file).
pub fn resolve_source(params: &RunParams) -> Result<OverlapUnitary, String> {
    match (&params.gen, &params.matrix) {
        (Some(spec), None) => parse_generator(spec),
        (None, Some(path)) => {
            let (u, _) = load_matrix(Path::new(path), params.matrix_sha256.as_deref())?;
            Ok(u)
        }
        (Some(_), Some(_)) => Err("pass either --gen or --matrix, not both".into()),
        (None, None) => Err("a source is required: --gen SPEC or --matrix FILE".into()),
    }
}

/// Parses `a:b:step` into an inclusive grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(format!("bad grid {text:?}; expected a:b:step"));
    };
    let a: f64 = a
        .parse()
        .map_err(|_| format!("bad grid start in {text:?}"))?;
    let b: f64 = b.parse().map_err(|_| format!("bad grid end in {text:?}"))?;
    let step: f64 = step
        .parse()
        .map_err(|_| format!("bad grid step in {text:?}"))?;
    if !(step > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
        return Err(format!("bad grid {text:?}: need a <= b and step > 0"));
    }
    let count = ((b - a) / step + 1.5).floor() as usize;
    if count > 1_000_000 {
        return Err(format!("grid {text:?} has {count} points; too many"));
    }
    // slack of step/2^20 keeps the endpoint despite accumulated rounding
    let slack = step * 1e-6;
    let mut grid = Vec::with_capacity(count);
    let mut k = 0usize;
    loop {
        let x = a + step * k as f64;
        if x > b + slack {
            break;
        }
        grid.push(x);
        k += 1;
    }
    Ok(grid)
}

/// Parses `a..b` (inclusive) or a single integer into a dimension list.
pub fn parse_dims(text: &str) -> Result<Vec<usize>, String> {
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a
            .parse()
            .map_err(|_| format!("bad range start in {text:?}"))?;
        let b: usize = b
            .parse()
            .map_err(|_| format!("bad range end in {text:?}"))?;
        if a < 2 || b < a {
            return Err(format!("bad range {text:?}: need 2 <= a <= b"));
        }
        Ok((a..=b).collect())
    } else {
        let d: usize = text
            .parse()
            .map_err(|_| format!("bad dimension list {text:?}; expected a..b or a single d"))?;
        if d < 2 {
            return Err(format!("dimension {d} must be at least 2"));
        }
        Ok(vec![d])
    }
}

//! Shannon, Rényi and binary entropies of outcome distributions, plus the
//! exact identities tying Rényi entropies of a state to l^p norms of its
//! amplitude vector. All logarithms are base 2; every result is in bits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{lp_norm, AmplitudeVector, STATE_TOL};

/// Tolerance on |sum p_i - 1| accepted at construction.
pub const PROBABILITY_SUM_TOL: f64 = 1e-10;

/// Probabilities below this contribute exactly zero to entropy sums,
/// avoiding 0 * log 0.
pub const ZERO_PROBABILITY_CUTOFF: f64 = 1e-300;

/// Orders within this window of 1 evaluate as the Shannon limit instead of
/// the 0/0 form; the switch error is O(|alpha - 1|).
pub const RENYI_SHANNON_WINDOW: f64 = 1e-9;

/// A discrete outcome distribution: nonnegative entries summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates and stores a distribution. Entries may carry rounding of up
    /// to 1e-12 outside [0, 1] (e.g. Born probabilities of a state normalized
    /// to tolerance) and are clamped into range; the sum must be within
    /// [`PROBABILITY_SUM_TOL`] of 1.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities {
                reason: "empty vector".into(),
            });
        }
        if !probs.iter().all(|p| p.is_finite()) {
            return Err(Error::InvalidProbabilities {
                reason: "non-finite entry".into(),
            });
        }
        if let Some(p) = probs
            .iter()
            .find(|&&p| !(-1e-12..=1.0 + 1e-12).contains(&p))
        {
            return Err(Error::InvalidProbabilities {
                reason: format!("entry {p} outside [0, 1]"),
            });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidProbabilities {
                reason: format!("entries sum to {sum}, not 1"),
            });
        }
        Ok(Self {
            probs: probs.iter().map(|p| p.clamp(0.0, 1.0)).collect(),
        })
    }

    /// Born-rule distribution |a_i|^2 of a unit-norm amplitude vector.
    pub fn from_amplitudes(a: &AmplitudeVector) -> Result<Self> {
        a.require_unit(STATE_TOL)?;
        Self::new(a.born_probabilities())
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { got: 0, min: 1 });
        }
        Self::new(vec![1.0 / dim as f64; dim])
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// H(p) = -sum_i p_i log2 p_i, with 0 log 0 = 0. Lies in [0, log2 d].
pub fn shannon(p: &ProbabilityVector) -> f64 {
    p.probs
        .iter()
        .filter(|&&x| x >= ZERO_PROBABILITY_CUTOFF)
        .map(|&x| -x * x.log2())
        .sum()
}

/// H_alpha(p) = (1/(1-alpha)) log2 sum_i p_i^alpha for alpha != 1;
/// the Shannon entropy at alpha = 1. Monotone nonincreasing in alpha.
pub fn renyi(p: &ProbabilityVector, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidOrder(alpha));
    }
    if (alpha - 1.0).abs() < RENYI_SHANNON_WINDOW {
        return Ok(shannon(p));
    }
    let sum: f64 = p
        .probs
        .iter()
        .filter(|&&x| x >= ZERO_PROBABILITY_CUTOFF)
        .map(|&x| x.powf(alpha))
        .sum();
    // sum can land a hair past 1 when the distribution itself sums to
    // 1 + O(tol); clamp the resulting -0-scale values to the valid range
    Ok((sum.log2() / (1.0 - alpha)).max(0.0))
}

/// h(p) = -p log2 p - (1-p) log2(1-p). Symmetric about 1/2 where it peaks
/// at 1 bit; zero at the endpoints.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let mut h = 0.0;
    if p >= ZERO_PROBABILITY_CUTOFF {
        h -= p * p.log2();
    }
    let q = 1.0 - p;
    if q >= ZERO_PROBABILITY_CUTOFF {
        h -= q * q.log2();
    }
    Ok(h)
}

/// Prefactor 2s/(2-s) relating log2 of an l^s norm to a Rényi entropy.
fn norm_entropy_prefactor(s: f64) -> f64 {
    2.0 * s / (2.0 - s)
}

/// H_{s/2} of the Born distribution of a unit state `a`, computed from the
/// l^s norm of its amplitudes: (2s/(2-s)) log2 ||a||_s.
///
/// Equals `renyi(|a_i|^2, s/2)` exactly; the two routes are kept independent
/// so tests can pit them against each other.
pub fn renyi_from_norm(a: &AmplitudeVector, s: f64) -> Result<f64> {
    if !(s > 1.0 && s < 2.0) {
        return Err(Error::InvalidHolderExponent(s));
    }
    a.require_unit(STATE_TOL)?;
    Ok(norm_entropy_prefactor(s) * lp_norm(a, s)?.log2())
}

/// H_{s'/2} of the Born distribution of a unit state `b`, computed from the
/// l^s' norm of its amplitudes: -(2s/(2-s)) log2 ||b||_{s'}, where
/// s' = s/(s-1) is the Hölder conjugate.
pub fn renyi_from_conjugate_norm(b: &AmplitudeVector, s: f64) -> Result<f64> {
    if !(s > 1.0 && s < 2.0) {
        return Err(Error::InvalidHolderExponent(s));
    }
    b.require_unit(STATE_TOL)?;
    let s_conj = s / (s - 1.0);
    Ok(-norm_entropy_prefactor(s) * lp_norm(b, s_conj)?.log2())
}

//! Complex vector/matrix primitives, l^p norms, unitarity checks and random
//! generation (Haar unitaries, Haar pure states).
//!
//! Conventions: matrices are stored row-major; `entry(j, i)` is row `j`
//! (output basis index) and column `i` (input basis index). All randomness
//! flows from explicit 64-bit seeds through ChaCha streams, so identical
//! seeds give bit-identical outputs and independent streams can run in
//! parallel.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on the max entry of |U†U - I| accepted at construction.
pub const DEFAULT_UNITARITY_TOL: f64 = 1e-10;

/// Tolerance on | ||a||_2 - 1 | for a vector flagged as a state.
pub const STATE_TOL: f64 = 1e-10;

/// A d x d complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>, // row-major, length dim * dim
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries; rejects empty or non-square
    /// data and non-finite components.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { got: 0, min: 1 });
        }
        if entries.len() != dim * dim {
            return Err(Error::NotSquare {
                expected_dim: dim,
                rows: entries.len() / dim.max(1),
                cols: dim,
            });
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFiniteEntries);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                expected_dim: dim,
                rows: dim,
                cols: bad.len(),
            });
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at row `j` (output index), column `i` (input index).
    pub fn entry(&self, j: usize, i: usize) -> Complex64 {
        self.entries[j * self.dim + i]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// w_j = sum_i M_ji v_i
    fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
            .collect()
    }

    /// y_i = sum_j conj(M_ji) v_j
    fn adjoint_mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        let mut out = vec![Complex64::ZERO; d];
        for (row, vj) in self.entries.chunks_exact(d).zip(v) {
            for (acc, m) in out.iter_mut().zip(row) {
                *acc += m.conj() * vj;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![Complex64::ZERO; d * d];
        for j in 0..d {
            for i in 0..d {
                entries[i * d + j] = self.entry(j, i).conj();
            }
        }
        Self { dim: d, entries }
    }

    /// Max entry magnitude of M†M - I.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                // (U†U)_ab = sum_j conj(U_ja) U_jb
                let mut acc = Complex64::ZERO;
                for j in 0..d {
                    acc += self.entry(j, a).conj() * self.entry(j, b);
                }
                if a == b {
                    acc -= Complex64::ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    d: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl ComplexMatrix {
    /// Parses the JSON matrix format
    /// `{"d": n, "re": [[...]], "im": [[...]]}` with row-major d x d arrays.
    /// Rejects non-square data and non-finite entries.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::MatrixFile(e.to_string()))?;
        let d = file.d;
        if d == 0 {
            return Err(Error::MatrixFile("d must be positive".into()));
        }
        for (name, part) in [("re", &file.re), ("im", &file.im)] {
            if part.len() != d || part.iter().any(|row| row.len() != d) {
                return Err(Error::MatrixFile(format!(
                    "\"{name}\" is not a {d}x{d} row-major array"
                )));
            }
        }
        let mut entries = Vec::with_capacity(d * d);
        for j in 0..d {
            for i in 0..d {
                entries.push(Complex64::new(file.re[j][i], file.im[j][i]));
            }
        }
        Self::new(d, entries).map_err(|e| Error::MatrixFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let d = self.dim;
        let re = (0..d)
            .map(|j| (0..d).map(|i| self.entry(j, i).re).collect())
            .collect();
        let im = (0..d)
            .map(|j| (0..d).map(|i| self.entry(j, i).im).collect())
            .collect();
        serde_json::to_string(&MatrixFile { d, re, im }).expect("matrix serializes")
    }
}

/// The unitary matrix of eigenbasis overlaps defining an observable pair,
/// validated at construction.
#[derive(Debug, Clone)]
pub struct OverlapUnitary {
    matrix: ComplexMatrix,
    unitarity_tol: f64,
}

impl OverlapUnitary {
    pub fn new(matrix: ComplexMatrix, unitarity_tol: f64) -> Result<Self> {
        let defect = matrix.unitarity_defect();
        if !(defect <= unitarity_tol) {
            return Err(Error::NotUnitary {
                max_deviation: defect,
                tol: unitarity_tol,
            });
        }
        Ok(Self {
            matrix,
            unitarity_tol,
        })
    }

    pub fn with_default_tol(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix, DEFAULT_UNITARITY_TOL)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn unitarity_tol(&self) -> f64 {
        self.unitarity_tol
    }

    pub fn entry(&self, j: usize, i: usize) -> Complex64 {
        self.matrix.entry(j, i)
    }

    /// c = max_{ji} |U_ji|, the largest overlap magnitude.
    pub fn max_overlap(&self) -> f64 {
        self.matrix
            .entries()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Index (j, i) of the largest overlap magnitude (first occurrence in
    /// row-major order).
    pub fn max_overlap_index(&self) -> (usize, usize) {
        let d = self.dim();
        let mut best = (0, 0);
        let mut best_val = -1.0;
        for j in 0..d {
            for i in 0..d {
                let m = self.entry(j, i).norm();
                if m > best_val {
                    best_val = m;
                    best = (j, i);
                }
            }
        }
        best
    }

    /// w = U v (output-basis amplitudes of the state with input-basis
    /// amplitudes v). Preserves the l^2 norm up to unitarity tolerance.
    pub fn apply(&self, v: &AmplitudeVector) -> Result<AmplitudeVector> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.dim(),
            });
        }
        Ok(AmplitudeVector {
            entries: self.matrix.mul_vec(v.entries()),
        })
    }

    /// y = U† v.
    pub fn adjoint_apply(&self, v: &AmplitudeVector) -> Result<AmplitudeVector> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.dim(),
            });
        }
        Ok(AmplitudeVector {
            entries: self.matrix.adjoint_mul_vec(v.entries()),
        })
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            unitarity_tol: self.unitarity_tol,
        }
    }

    /// Born probabilities |U_ji|^2 down column `i` (outcome distribution of B
    /// on the i-th eigenstate of A).
    pub fn column_probabilities(&self, i: usize) -> Vec<f64> {
        (0..self.dim())
            .map(|j| self.entry(j, i).norm_sqr())
            .collect()
    }

    /// Born probabilities |U_ji|^2 along row `j` (outcome distribution of A
    /// on the j-th eigenstate of B).
    pub fn row_probabilities(&self, j: usize) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.entry(j, i).norm_sqr())
            .collect()
    }
}

/// Complex amplitudes of a vector in one eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    entries: Vec<Complex64>,
}

impl AmplitudeVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension { got: 0, min: 1 });
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFiniteEntries);
        }
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The i-th computational basis vector in dimension d.
    pub fn basis_vector(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { got: 0, min: 1 });
        }
        if index >= dim {
            return Err(Error::DimensionMismatch {
                left: index,
                right: dim,
            });
        }
        let mut entries = vec![Complex64::ZERO; dim];
        entries[index] = Complex64::ONE;
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Errs unless | ||a||_2 - 1 | <= tol.
    pub fn require_unit(&self, tol: f64) -> Result<()> {
        let deviation = (self.l2_norm() - 1.0).abs();
        if deviation > tol {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(())
    }

    /// Returns the vector scaled to unit l^2 norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.l2_norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            entries: self.entries.iter().map(|z| z / n).collect(),
        })
    }

    /// Born-rule outcome probabilities |a_i|^2.
    pub fn born_probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// (sum_j |v_j|^p)^(1/p) for p >= 1. Zero iff v is the zero vector.
pub fn lp_norm(v: &AmplitudeVector, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    Ok(lp_norm_slice(v.entries(), p))
}

pub(crate) fn lp_norm_slice(entries: &[Complex64], p: f64) -> f64 {
    if p == 2.0 {
        return entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    let sum: f64 = entries.iter().map(|z| z.norm().powf(p)).sum();
    sum.powf(1.0 / p)
}

/// A Hölder-conjugate exponent pair: 1/s + 1/s' = 1 with s in (1, 2),
/// so s' = s/(s-1) > 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderPair {
    s: f64,
    s_conj: f64,
}

impl HolderPair {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 1.0 && s < 2.0) || !s.is_finite() {
            return Err(Error::InvalidHolderExponent(s));
        }
        Ok(Self {
            s,
            s_conj: s / (s - 1.0),
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// s' = s/(s-1).
    pub fn conjugate(&self) -> f64 {
        self.s_conj
    }
}

/// SplitMix64 step, used to derive independent sub-seeds from one master
/// seed (e.g. a distinct unitary per dimension in a sweep).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(0x9E3779B97F4A7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// ChaCha generator on stream `stream` of the given master seed. Streams are
/// statistically independent and safe to run in parallel.
pub(crate) fn stream_rng(master_seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn haar_state_from_rng<R: Rng>(dim: usize, rng: &mut R) -> AmplitudeVector {
    loop {
        let entries: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let v = AmplitudeVector { entries };
        // zero draw has probability zero; retry keeps the sampler total
        if let Ok(unit) = v.normalized() {
            return unit;
        }
    }
}

/// Unit-norm complex vector uniform on the sphere, deterministic given the
/// seed.
pub fn haar_state(dim: usize, rng_seed: u64) -> Result<AmplitudeVector> {
    if dim < 1 {
        return Err(Error::InvalidDimension { got: dim, min: 1 });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(rng_seed);
    Ok(haar_state_from_rng(dim, &mut rng))
}

/// Haar-distributed d x d unitary, deterministic given the seed.
///
/// A matrix of i.i.d. standard complex Gaussians is column-orthonormalized by
/// two-pass modified Gram-Schmidt. Each diagonal entry of the implicit
/// triangular factor is the (real, positive) column norm, which fixes the
/// phase ambiguity of the factorization that would otherwise bias the
/// distribution.
pub fn haar_unitary(dim: usize, rng_seed: u64) -> Result<OverlapUnitary> {
    if dim < 2 {
        return Err(Error::InvalidDimension { got: dim, min: 2 });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(rng_seed);
    haar_unitary_from_rng(dim, &mut rng)
}

pub(crate) fn haar_unitary_from_rng<R: Rng>(dim: usize, rng: &mut R) -> Result<OverlapUnitary> {
    let d = dim;
    // columns[i][j] = entry (row j, column i)
    let mut columns: Vec<Vec<Complex64>> = (0..d)
        .map(|_| (0..d).map(|_| complex_gaussian(rng)).collect())
        .collect();

    for k in 0..d {
        // two passes of modified Gram-Schmidt keep orthogonality near
        // machine precision
        for _ in 0..2 {
            for j in 0..k {
                let proj: Complex64 = columns[j]
                    .iter()
                    .zip(columns[k].iter())
                    .map(|(q, v)| q.conj() * v)
                    .sum();
                let (fixed, current) = columns.split_at_mut(k);
                for (target, q) in current[0].iter_mut().zip(&fixed[j]) {
                    *target -= proj * q;
                }
            }
        }
        let norm = columns[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NonFinite {
                context: "Gram-Schmidt orthonormalization".into(),
            });
        }
        for entry in columns[k].iter_mut() {
            *entry /= norm;
        }
    }

    let mut entries = vec![Complex64::ZERO; d * d];
    for (i, col) in columns.iter().enumerate() {
        for (j, z) in col.iter().enumerate() {
            entries[j * d + i] = *z;
        }
    }
    OverlapUnitary::with_default_tol(ComplexMatrix { dim: d, entries })
}

/// The real rotation [[cos phi, sin phi], [-sin phi, cos phi]] for
/// phi in (0, pi/4], the canonical form of any 2x2 overlap unitary.
pub fn rotation_unitary(phi: f64) -> Result<OverlapUnitary> {
    let max = std::f64::consts::FRAC_PI_4;
    if !(phi > 0.0 && phi <= max) || !phi.is_finite() {
        return Err(Error::AngleOutOfRange { got: phi, max });
    }
    let (sin, cos) = phi.sin_cos();
    let matrix = ComplexMatrix::new(
        2,
        vec![
            Complex64::new(cos, 0.0),
            Complex64::new(sin, 0.0),
            Complex64::new(-sin, 0.0),
            Complex64::new(cos, 0.0),
        ],
    )?;
    OverlapUnitary::with_default_tol(matrix)
}

/// The d x d discrete Fourier unitary U_ji = exp(2 pi i j i / d) / sqrt(d).
/// Its eigenbasis pair is mutually unbiased: every overlap has magnitude
/// 1/sqrt(d).
pub fn fourier_unitary(dim: usize) -> Result<OverlapUnitary> {
    if dim < 2 {
        return Err(Error::InvalidDimension { got: dim, min: 2 });
    }
    let d = dim;
    let scale = 1.0 / (d as f64).sqrt();
    let mut entries = Vec::with_capacity(d * d);
    for j in 0..d {
        for i in 0..d {
            let angle = 2.0 * std::f64::consts::PI * ((j * i) % d) as f64 / d as f64;
            entries.push(Complex64::from_polar(scale, angle));
        }
    }
    // roundoff in from_polar leaves a defect ~1e-16 * d, well under tolerance
    OverlapUnitary::with_default_tol(ComplexMatrix::new(d, entries)?)
}

/// The d x d identity as an overlap unitary (a fully compatible pair).
pub fn identity_unitary(dim: usize) -> Result<OverlapUnitary> {
    if dim < 1 {
        return Err(Error::InvalidDimension { got: dim, min: 1 });
    }
    let mut entries = vec![Complex64::ZERO; dim * dim];
    for k in 0..dim {
        entries[k * dim + k] = Complex64::ONE;
    }
    OverlapUnitary::with_default_tol(ComplexMatrix::new(dim, entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(values: &[f64]) -> AmplitudeVector {
        AmplitudeVector::from_real(values).unwrap()
    }

    #[test]
    fn lp_norm_single_component() {
        assert_eq!(lp_norm(&amp(&[1.0, 0.0]), 3.0).unwrap(), 1.0);
    }

    #[test]
    fn lp_norm_pythagorean() {
        let n = lp_norm(&amp(&[1.0, 1.0]), 2.0).unwrap();
        assert!((n - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn lp_norm_quartic_on_balanced_state() {
        // (2 * 2^-2)^(1/4) = 2^(-1/4)
        let x = std::f64::consts::FRAC_1_SQRT_2;
        let n = lp_norm(&amp(&[x, x]), 4.0).unwrap();
        assert!((n - 2f64.powf(-0.25)).abs() < 1e-14, "{n}");
    }

    #[test]
    fn lp_norm_rejects_p_below_one() {
        assert!(matches!(
            lp_norm(&amp(&[1.0]), 0.5),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn lp_norm_zero_vector_is_zero() {
        assert_eq!(lp_norm(&amp(&[0.0, 0.0, 0.0]), 1.5).unwrap(), 0.0);
    }

    #[test]
    fn apply_identity_is_identity() {
        let u = identity_unitary(3).unwrap();
        let v = haar_state(3, 11).unwrap();
        let w = u.apply(&v).unwrap();
        for (a, b) in v.entries().iter().zip(w.entries()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_rotation_first_basis_column() {
        let phi = std::f64::consts::FRAC_PI_4;
        let u = rotation_unitary(phi).unwrap();
        let e0 = AmplitudeVector::basis_vector(2, 0).unwrap();
        let w = u.apply(&e0).unwrap();
        assert!((w.entries()[0].re - phi.cos()).abs() < 1e-15);
        assert!((w.entries()[1].re + phi.sin()).abs() < 1e-15);
    }

    #[test]
    fn apply_preserves_l2_norm() {
        let u = haar_unitary(5, 42).unwrap();
        let v = haar_state(5, 43).unwrap();
        let w = u.apply(&v).unwrap();
        assert!((w.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let u = haar_unitary(3, 1).unwrap();
        let v = haar_state(4, 1).unwrap();
        assert!(matches!(u.apply(&v), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn adjoint_apply_inverts_apply() {
        let u = haar_unitary(4, 7).unwrap();
        let v = haar_state(4, 8).unwrap();
        let back = u.adjoint_apply(&u.apply(&v).unwrap()).unwrap();
        for (a, b) in v.entries().iter().zip(back.entries()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn adjoint_apply_rotation_transposes_column() {
        let phi = std::f64::consts::PI / 6.0;
        let u = rotation_unitary(phi).unwrap();
        let e0 = AmplitudeVector::basis_vector(2, 0).unwrap();
        let y = u.adjoint_apply(&e0).unwrap();
        assert!((y.entries()[0].re - phi.cos()).abs() < 1e-15);
        assert!((y.entries()[1].re - phi.sin()).abs() < 1e-15);
    }

    #[test]
    fn haar_unitary_deterministic() {
        let a = haar_unitary(6, 99).unwrap();
        let b = haar_unitary(6, 99).unwrap();
        assert_eq!(a.matrix().entries(), b.matrix().entries());
    }

    #[test]
    fn haar_unitary_is_unitary_at_d8() {
        let u = haar_unitary(8, 3).unwrap();
        assert!(u.matrix().unitarity_defect() < 1e-10);
    }

    #[test]
    fn haar_unitary_rejects_d1() {
        assert!(matches!(
            haar_unitary(1, 0),
            Err(Error::InvalidDimension { .. })
        ));
    }

    #[test]
    fn haar_unitary_entry_moment() {
        // E |U_11|^2 = 1/d for Haar; Monte-Carlo check at d = 2
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|k| haar_unitary(2, k).unwrap().entry(0, 0).norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn haar_state_is_normalized() {
        for seed in 0..20 {
            let v = haar_state(7, seed).unwrap();
            assert!((v.l2_norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_state_d1_is_pure_phase() {
        let v = haar_state(1, 5).unwrap();
        assert!((v.entries()[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_state_component_moment() {
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|k| haar_state(2, k).unwrap().entries()[0].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn rotation_quarter_pi_is_balanced() {
        let u = rotation_unitary(std::f64::consts::FRAC_PI_4).unwrap();
        for j in 0..2 {
            for i in 0..2 {
                assert!((u.entry(j, i).norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rotation_small_angle_near_identity() {
        let u = rotation_unitary(1e-9).unwrap();
        assert!((u.entry(0, 0).re - 1.0).abs() < 1e-15);
        assert!(u.entry(0, 1).norm() < 2e-9);
    }

    #[test]
    fn rotation_sixth_pi_max_overlap() {
        let u = rotation_unitary(std::f64::consts::PI / 6.0).unwrap();
        assert!((u.max_overlap() - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_rejects_out_of_range() {
        assert!(rotation_unitary(0.0).is_err());
        assert!(rotation_unitary(1.0).is_err());
        assert!(rotation_unitary(-0.1).is_err());
    }

    #[test]
    fn fourier_entries_are_unbiased() {
        for d in 2..=5 {
            let u = fourier_unitary(d).unwrap();
            let expect = 1.0 / (d as f64).sqrt();
            for j in 0..d {
                for i in 0..d {
                    assert!((u.entry(j, i).norm() - expect).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn max_overlap_within_pigeonhole_bounds() {
        for seed in 0..10 {
            for d in [2usize, 3, 5] {
                let u = haar_unitary(d, seed).unwrap();
                let c = u.max_overlap();
                assert!(c <= 1.0 + 1e-12);
                assert!(c >= 1.0 / (d as f64).sqrt() - 1e-12);
            }
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let u = haar_unitary(3, 17).unwrap();
        let text = u.matrix().to_json();
        let back = ComplexMatrix::from_json(&text).unwrap();
        for (a, b) in u.matrix().entries().iter().zip(back.entries()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn matrix_json_rejects_non_square() {
        let text = r#"{"d": 2, "re": [[1.0, 0.0], [0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}"#;
        assert!(matches!(
            ComplexMatrix::from_json(text),
            Err(Error::MatrixFile(_))
        ));
    }

    #[test]
    fn matrix_json_rejects_nan() {
        let text = r#"{"d": 1, "re": [[NaN]], "im": [[0.0]]}"#;
        assert!(ComplexMatrix::from_json(text).is_err());
    }

    #[test]
    fn non_unitary_matrix_rejected_with_deviation() {
        let m = ComplexMatrix::new(
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        match OverlapUnitary::with_default_tol(m) {
            Err(Error::NotUnitary { max_deviation, .. }) => assert!(max_deviation > 0.1),
            other => panic!("expected NotUnitary, got {other:?}"),
        }
    }

    #[test]
    fn holder_pair_conjugation() {
        let h = HolderPair::new(1.5).unwrap();
        assert!((h.conjugate() - 3.0).abs() < 1e-15);
        assert!((1.0 / h.s() + 1.0 / h.conjugate() - 1.0).abs() < 1e-15);
        assert!(h.conjugate() > 2.0);
        assert!(HolderPair::new(1.0).is_err());
        assert!(HolderPair::new(2.0).is_err());
    }

    #[test]
    fn derive_seed_spreads() {
        let a = derive_seed(0, 0);
        let b = derive_seed(0, 1);
        let c = derive_seed(1, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}

//! Validated physical-parameter and result types shared by every engine.
//!
//! All types are immutable values after construction and safe to share
//! across worker threads.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The four physical parameters of the biased qubit-oscillator Hamiltonian.
///
/// Internally every engine only ever forms the dimensionless ratios Δ/ω,
/// ε/ω and g/ω; the Hamiltonian is homogeneous of degree one in the four
/// parameters, so energies come out in whatever unit the inputs carry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Tunneling amplitude Δ.
    pub delta: f64,
    /// Static bias ε.
    pub epsilon: f64,
    /// Oscillator frequency ω (> 0).
    pub omega: f64,
    /// Qubit-oscillator coupling g (≥ 0).
    pub g: f64,
}

impl ModelParams {
    /// Validate and construct. Δ and ε may carry either sign.
    pub fn new(delta: f64, epsilon: f64, omega: f64, g: f64) -> Result<Self> {
        Self {
            delta,
            epsilon,
            omega,
            g,
        }
        .validated()
    }

    /// Re-check the construction invariants, returning `self` unchanged.
    pub fn validated(self) -> Result<Self> {
        for (v, name) in [
            (self.delta, "delta"),
            (self.epsilon, "epsilon"),
            (self.omega, "omega"),
            (self.g, "g"),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFiniteInput(name));
            }
        }
        if self.omega <= 0.0 {
            return Err(Error::NonPositiveOmega(self.omega));
        }
        if self.g < 0.0 {
            return Err(Error::NegativeCoupling(self.g));
        }
        // omega > 0 and all fields finite, so the ratios are finite too
        Ok(self)
    }

    /// g/ω.
    pub fn g_ratio(&self) -> f64 {
        self.g / self.omega
    }

    /// Δ/ω.
    pub fn delta_ratio(&self) -> f64 {
        self.delta / self.omega
    }

    /// ε/ω.
    pub fn epsilon_ratio(&self) -> f64 {
        self.epsilon / self.omega
    }

    /// Polaron overlap η = exp(−2g²/ω²).
    pub fn eta(&self) -> f64 {
        let r = self.g_ratio();
        (-2.0 * r * r).exp()
    }
}

/// Which engine produced a spectrum or time series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Bgrwa,
    Vvp,
    Ed,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Bgrwa => "bgrwa",
            Method::Vvp => "vvp",
            Method::Ed => "ed",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bgrwa" => Ok(Method::Bgrwa),
            "vvp" => Ok(Method::Vvp),
            "ed" => Ok(Method::Ed),
            other => Err(format!("unknown method '{other}' (expected bgrwa, vvp or ed)")),
        }
    }
}

/// Branch label of an energy level.
///
/// The ± sign of a level pair is bookkeeping attached to the fixed basis
/// ordering (|+z, n⟩, |−z, n+1⟩), not to energy ordering: the two branches
/// may cross as g varies, so the label is stored explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Ground,
    Plus,
    Minus,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::Ground => "ground",
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

/// One energy level: (level index, branch, energy).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub index: usize,
    pub branch: Branch,
    pub energy: f64,
}

/// Method-tagged list of energy levels, sortable for cross-method comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub method: Method,
    pub entries: Vec<LevelEntry>,
    pub params: ModelParams,
    /// Fock truncation actually used (ED only).
    pub truncation: Option<usize>,
}

impl SpectrumTable {
    pub fn new(method: Method, params: ModelParams, entries: Vec<LevelEntry>) -> Self {
        Self {
            method,
            entries,
            params,
            truncation: None,
        }
    }

    pub fn with_truncation(mut self, n: usize) -> Self {
        self.truncation = Some(n);
        self
    }

    /// The `k` smallest energies, ascending.
    pub fn sorted_levels(&self, k: usize) -> Result<Vec<f64>> {
        if self.entries.len() < k {
            return Err(Error::InsufficientLevels {
                have: self.entries.len(),
                want: k,
            });
        }
        let mut energies: Vec<f64> = self.entries.iter().map(|e| e.energy).collect();
        energies.sort_by(|a, b| a.total_cmp(b));
        energies.truncate(k);
        Ok(energies)
    }
}

/// Free-function form of [`SpectrumTable::sorted_levels`].
pub fn sorted_levels(table: &SpectrumTable, k: usize) -> Result<Vec<f64>> {
    table.sorted_levels(k)
}

/// Qubit basis label in the σz eigenbasis of the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    /// |+z⟩, σz eigenvalue +1.
    Up,
    /// |−z⟩, σz eigenvalue −1.
    Down,
}

/// Complex coefficient vector over the product basis
/// {|+z⟩, |−z⟩} ⊗ {|0⟩ .. |N⟩}, stored up-block first.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    coeffs: Vec<C64>,
    truncation: usize,
}

impl StateVector {
    /// Zero vector on a basis with Fock states 0..=N.
    pub fn zero(truncation: usize) -> Self {
        Self {
            coeffs: vec![C64::new(0.0, 0.0); 2 * (truncation + 1)],
            truncation,
        }
    }

    /// Build from raw coefficients, up-block then down-block.
    ///
    /// Panics if the length is not an even number of at least 4 entries.
    pub fn from_coeffs(coeffs: Vec<C64>) -> Self {
        assert!(coeffs.len() >= 4 && coeffs.len() % 2 == 0);
        let truncation = coeffs.len() / 2 - 1;
        Self { coeffs, truncation }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn index_of(&self, qubit: Qubit, n: usize) -> usize {
        debug_assert!(n <= self.truncation);
        match qubit {
            Qubit::Up => n,
            Qubit::Down => self.truncation + 1 + n,
        }
    }

    pub fn get(&self, qubit: Qubit, n: usize) -> C64 {
        self.coeffs[self.index_of(qubit, n)]
    }

    pub fn set(&mut self, qubit: Qubit, n: usize, value: C64) {
        let i = self.index_of(qubit, n);
        self.coeffs[i] = value;
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescale to unit norm. Panics on the zero vector.
    pub fn normalize(&mut self) {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize a zero state");
        for c in &mut self.coeffs {
            *c /= n;
        }
    }

    /// ⟨self|other⟩ with conjugation on `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.truncation, other.truncation);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn validate_accepts_physical_params() {
        let p = ModelParams::new(1.0, 0.1, 1.0, 0.2).unwrap();
        assert_eq!(p.delta, 1.0);
        assert_eq!(p.epsilon, 0.1);
    }

    #[test]
    fn validate_rejects_zero_omega() {
        assert_eq!(
            ModelParams::new(1.0, 0.0, 0.0, 0.0).unwrap_err(),
            Error::NonPositiveOmega(0.0)
        );
    }

    #[test]
    fn validate_rejects_negative_coupling() {
        assert_eq!(
            ModelParams::new(1.0, 0.0, 1.0, -0.1).unwrap_err(),
            Error::NegativeCoupling(-0.1)
        );
    }

    #[test]
    fn validate_rejects_non_finite() {
        assert!(matches!(
            ModelParams::new(f64::NAN, 0.0, 1.0, 0.0).unwrap_err(),
            Error::NonFiniteInput("delta")
        ));
        assert!(matches!(
            ModelParams::new(1.0, f64::INFINITY, 1.0, 0.0).unwrap_err(),
            Error::NonFiniteInput("epsilon")
        ));
    }

    #[test]
    fn eta_at_half_coupling() {
        let p = ModelParams::new(1.0, 0.0, 1.0, 0.5).unwrap();
        assert_relative_eq!(p.eta(), (-0.5f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn sorted_levels_uncoupled_resonant() {
        // g = 0, Δ = ω = 1, ε = 0: levels ωn ± 1/2
        let p = ModelParams::new(1.0, 0.0, 1.0, 0.0).unwrap();
        let table = crate::bgrwa::spectrum(&p, 3).unwrap();
        let lv = table.sorted_levels(3).unwrap();
        assert_relative_eq!(lv[0], -0.5, max_relative = 1e-12);
        assert_relative_eq!(lv[1], 0.5, max_relative = 1e-12);
        assert_relative_eq!(lv[2], 0.5, max_relative = 1e-12);
    }

    #[test]
    fn sorted_levels_uncoupled_biased() {
        // g = 0, y = sqrt(0.75^2 + 1) = 1.25: levels ωn ± 0.625
        let p = ModelParams::new(1.0, 0.75, 1.0, 0.0).unwrap();
        let table = crate::bgrwa::spectrum(&p, 3).unwrap();
        let lv = table.sorted_levels(3).unwrap();
        assert_relative_eq!(lv[0], -0.625, max_relative = 1e-12);
        assert_relative_eq!(lv[1], 0.375, max_relative = 1e-12);
        assert_relative_eq!(lv[2], 0.625, max_relative = 1e-12);
    }

    #[test]
    fn sorted_levels_insufficient() {
        let p = ModelParams::new(1.0, 0.0, 1.0, 0.0).unwrap();
        let table = SpectrumTable::new(
            Method::Ed,
            p,
            vec![LevelEntry {
                index: 0,
                branch: Branch::Ground,
                energy: -0.5,
            }],
        );
        assert_eq!(
            table.sorted_levels(2).unwrap_err(),
            Error::InsufficientLevels { have: 1, want: 2 }
        );
    }

    #[test]
    fn sorting_is_idempotent() {
        let p = ModelParams::new(0.7, 0.3, 1.0, 0.4).unwrap();
        let table = crate::bgrwa::spectrum(&p, 10).unwrap();
        let once = table.sorted_levels(10).unwrap();
        let sorted_table = SpectrumTable::new(
            Method::Bgrwa,
            p,
            once.iter()
                .enumerate()
                .map(|(i, &e)| LevelEntry {
                    index: i,
                    branch: Branch::Plus,
                    energy: e,
                })
                .collect(),
        );
        assert_eq!(sorted_table.sorted_levels(10).unwrap(), once);
    }

    #[test]
    fn state_vector_indexing_and_norm() {
        let mut sv = StateVector::zero(3);
        sv.set(Qubit::Up, 0, C64::new(0.6, 0.0));
        sv.set(Qubit::Down, 2, C64::new(0.0, 0.8));
        assert_relative_eq!(sv.norm_sqr(), 1.0, max_relative = 1e-15);
        assert_eq!(sv.index_of(Qubit::Down, 0), 4);
        sv.normalize();
        assert_relative_eq!(sv.norm(), 1.0, max_relative = 1e-12);
    }
}

//! Physical-unit handling and the flux-qubit spectroscopy scan.
//!
//! All circuit frequencies are treated as linear frequencies in GHz and
//! only their ratios reach the engines: every term of the Hamiltonian is
//! degree one in (Δ, ε, ω, g), so any uniform 2π bookkeeping cancels.
//! Transitions are reported from the ground state, E_k − E_g, the way
//! spectroscopy figures are drawn.

use serde::{Deserialize, Serialize};

use crate::model::{Method, ModelParams};
use crate::{bgrwa, exact, Error, Result};

/// ε per unit of I_p(Φ/Φ₀ − 1/2): 2 I_p Φ₀ Δx as a linear frequency.
/// With Φ₀ = h/2e the energy 2 I_p Φ₀ Δx equals h · I_p Δx / e, so the
/// frequency is I_p Δx / e; in GHz per nA this is 1e−18/e.
pub const GHZ_PER_NA: f64 = 1e-18 / 1.602_176_634e-19;

/// Fitted circuit parameters of a flux qubit coupled to an oscillator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxQubitParams {
    /// Coupling g/2π in GHz.
    pub g_over_2pi: f64,
    /// Oscillator frequency ω/2π in GHz.
    pub omega_over_2pi: f64,
    /// Qubit gap Δ in GHz.
    pub delta: f64,
    /// Persistent current in nA.
    pub i_p: f64,
    /// Φ/Φ₀ sample points, typically centered on 0.5.
    pub flux_ratio_grid: Vec<f64>,
}

impl Default for FluxQubitParams {
    fn default() -> Self {
        Self {
            g_over_2pi: 0.82,
            omega_over_2pi: 8.13,
            delta: 4.25,
            i_p: 510.0,
            flux_ratio_grid: symmetric_flux_grid(0.004, 41),
        }
    }
}

impl FluxQubitParams {
    pub fn validated(self) -> Result<Self> {
        for (v, name) in [
            (self.g_over_2pi, "flux-qubit coupling must be positive"),
            (self.omega_over_2pi, "oscillator frequency must be positive"),
            (self.delta, "qubit gap must be positive"),
            (self.i_p, "persistent current must be positive"),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidFluxParams(name));
            }
        }
        if self.flux_ratio_grid.is_empty()
            || self.flux_ratio_grid.iter().any(|x| !x.is_finite())
        {
            return Err(Error::InvalidFluxParams("flux grid must be finite and non-empty"));
        }
        Ok(self)
    }

    /// Dimensionless model parameters at one flux point (energies over ω).
    pub fn model_at(&self, flux_ratio: f64) -> Result<ModelParams> {
        let eps = bias_from_flux(self.i_p, flux_ratio);
        ModelParams::new(
            self.delta / self.omega_over_2pi,
            eps / self.omega_over_2pi,
            1.0,
            self.g_over_2pi / self.omega_over_2pi,
        )
    }
}

/// Mirror-symmetric grid of Φ/Φ₀ values around 0.5 (odd point count keeps
/// the center exactly on the degeneracy point).
pub fn symmetric_flux_grid(half_width: f64, points: usize) -> Vec<f64> {
    assert!(points % 2 == 1, "use an odd point count");
    let half = (points / 2) as isize;
    (-half..=half)
        .map(|k| 0.5 + k as f64 * half_width / half as f64)
        .collect()
}

/// Bias ε in GHz from the persistent current (nA) and the flux ratio Φ/Φ₀:
/// ε = 2 I_p Φ₀ (Φ/Φ₀ − 1/2) with Φ₀ = h/2e.
pub fn bias_from_flux(i_p: f64, flux_ratio: f64) -> f64 {
    GHZ_PER_NA * i_p * (flux_ratio - 0.5)
}

/// One row of a flux scan: transitions E_k − E_g in GHz, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxScanRow {
    pub flux_ratio: f64,
    pub epsilon_ghz: f64,
    pub transitions: Vec<f64>,
}

/// Transition-frequency scan across the flux grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxScan {
    pub rows: Vec<FluxScanRow>,
    pub method: Method,
}

/// Compute `n_transitions` transition lines across the flux grid with the
/// chosen engine (BGRWA closed form by default, ED as the oracle).
pub fn flux_scan(fq: &FluxQubitParams, n_transitions: usize, method: Method) -> Result<FluxScan> {
    let fq = fq.clone().validated()?;
    let n_levels = n_transitions + 1;
    let mut rows = Vec::with_capacity(fq.flux_ratio_grid.len());
    for &x in &fq.flux_ratio_grid {
        let params = fq.model_at(x)?;
        let levels = match method {
            Method::Bgrwa => bgrwa::spectrum(&params, n_levels)?.sorted_levels(n_levels)?,
            Method::Ed => exact::spectrum(&params, n_levels, 1e-9)?.sorted_levels(n_levels)?,
            Method::Vvp => return Err(Error::InvalidFluxParams(
                "flux scans support the bgrwa and ed engines",
            )),
        };
        let ground = levels[0];
        let transitions = levels[1..]
            .iter()
            .map(|e| (e - ground) * fq.omega_over_2pi)
            .collect();
        rows.push(FluxScanRow {
            flux_ratio: x,
            epsilon_ghz: bias_from_flux(fq.i_p, x),
            transitions,
        });
    }
    Ok(FluxScan { rows, method })
}

//! Second-order Van Vleck perturbation spectrum, the comparison baseline.
//!
//! Level m mixes oscillator states m and n = m + l through the tunneling
//! matrix elements D between displaced wells. The offset l is genuinely
//! ambiguous in this scheme, so its selection is caller-visible policy and
//! never chosen silently. The method is known to produce unphysical level
//! crossings at weak coupling for positive detuning; reproducing that
//! pathology faithfully is the point of keeping the engine around, so no
//! attempt is made to repair it.

use crate::model::{Branch, LevelEntry, Method, ModelParams, SpectrumTable};
use crate::{Error, Result};

/// Denominators smaller than this (in units of ω) are treated as resonant.
const RESONANCE_GUARD: f64 = 1e-9;

/// Default summation cutoff; the terms decay factorially through D², so
/// levels move by < 1e-8 between cutoffs 30 and 60.
pub const DEFAULT_K_CUTOFF: usize = 60;

/// How the mixing offset l is selected when assembling a spectrum table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LPolicy {
    /// One fixed l for every level.
    Fixed(usize),
    /// Pick, per sorted level, the candidate l that lands closest to the
    /// exact-diagonalization oracle.
    BestOf(Vec<usize>),
}

impl std::fmt::Display for LPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LPolicy::Fixed(l) => write!(f, "fixed({l})"),
            LPolicy::BestOf(ls) => {
                let s: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
                write!(f, "best-of({})", s.join(","))
            }
        }
    }
}

/// One Van Vleck level with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VvpLevel {
    pub m: usize,
    pub l: usize,
    pub branch: Branch,
    pub energy: f64,
    pub k_cutoff: usize,
}

/// Tunneling matrix element
/// D_mn = (Δ/2)(−1)^m (2g/ω)^{n−m} e^{−2g²/ω²} √(m!/n!) L_m^{n−m}(4g²/ω²),
/// defined for n ≥ m. All powers of g enter through g/ω.
pub fn d_matrix_element(params: &ModelParams, m: usize, n: usize) -> Result<f64> {
    if n < m {
        return Err(Error::IndexOrder { m, n });
    }
    let r = params.g_ratio();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    // (2g/ω)^{n-m} sqrt(m!/n!) as one running product
    let mut prefactor = 1.0;
    for j in (m + 1)..=n {
        prefactor *= 2.0 * r / (j as f64).sqrt();
    }
    Ok(params.delta / 2.0 * sign * prefactor * params.eta() * laguerre_arg(params, m, n - m))
}

fn laguerre_arg(params: &ModelParams, degree: usize, order: usize) -> f64 {
    let r = params.g_ratio();
    crate::specfun::laguerre(degree, order, 4.0 * r * r)
}

/// D², symmetric in its indices since only magnitudes enter the sums.
fn d_squared(params: &ModelParams, i: usize, j: usize) -> f64 {
    let d = d_matrix_element(params, i.min(j), i.max(j)).expect("ordered by construction");
    d * d
}

/// The (E_plus, E_minus) pair of Van Vleck level m with mixing offset l.
///
/// Both perturbative k-sums run to `k_cutoff` with the symmetric exclusion
/// pair applied around each sum's own level index: k ∉ {m−l, m+l} for the
/// D_mk sum and k ∉ {n−l, n+l} for the D_nk sum. Any retained denominator
/// within 1e−9 ω of zero aborts with [`Error::ResonantDenominator`].
pub fn vvp_eigenvalues(
    params: &ModelParams,
    m: usize,
    l: usize,
    k_cutoff: usize,
) -> Result<(f64, f64)> {
    assert!(k_cutoff > m + l, "k_cutoff must exceed m + l");
    let n = m + l;
    let om = params.omega;
    let guard = RESONANCE_GUARD * om;

    let excluded = |center: usize, k: usize| -> bool {
        k == center + l || (center >= l && k == center - l)
    };

    let mut sum_m = 0.0; // Σ' D_mk² / (ε + (m−k)ω)
    let mut sum_n = 0.0; // Σ'' D_nk² / (ε + (k−n)ω)
    for k in 0..=k_cutoff {
        if !excluded(m, k) {
            let denom = params.epsilon + (m as f64 - k as f64) * om;
            if denom.abs() < guard {
                return Err(Error::ResonantDenominator { k, value: denom });
            }
            sum_m += d_squared(params, m, k) / denom;
        }
        if !excluded(n, k) {
            let denom = params.epsilon + (k as f64 - n as f64) * om;
            if denom.abs() < guard {
                return Err(Error::ResonantDenominator { k, value: denom });
            }
            sum_n += d_squared(params, n, k) / denom;
        }
    }

    let mean = (m as f64 + l as f64 / 2.0) * om - params.g * params.g / om
        + 0.5 * (sum_m - sum_n);
    let bracket = params.epsilon - l as f64 * om + params.delta.powi(2) * (sum_m + sum_n);
    let radius = 0.5 * f64::hypot(bracket, 2.0 * d_squared(params, m, n).sqrt());
    Ok((mean + radius, mean - radius))
}

/// A Van Vleck spectrum table together with the offset bookkeeping the
/// caller asked for.
#[derive(Debug, Clone)]
pub struct VvpSpectrum {
    pub table: SpectrumTable,
    /// l actually used for each sorted level, in table order.
    pub l_by_level: Vec<usize>,
    pub policy: LPolicy,
}

/// Assemble a spectrum table by enumerating (m, l) per policy and sorting.
pub fn vvp_spectrum(
    params: &ModelParams,
    n_levels: usize,
    policy: &LPolicy,
) -> Result<VvpSpectrum> {
    assert!(n_levels >= 1);
    match policy {
        LPolicy::Fixed(l) => {
            let entries = sorted_entries(params, n_levels, *l)?;
            let l_by_level = vec![*l; entries.len()];
            Ok(VvpSpectrum {
                table: SpectrumTable::new(Method::Vvp, *params, entries),
                l_by_level,
                policy: policy.clone(),
            })
        }
        LPolicy::BestOf(candidates) => {
            assert!(!candidates.is_empty(), "best-of needs at least one candidate");
            let oracle = crate::exact::spectrum(params, n_levels, 1e-8)?
                .sorted_levels(n_levels)?;
            let mut tables = Vec::new();
            let mut last_err = None;
            for &l in candidates {
                match sorted_entries(params, n_levels, l) {
                    Ok(entries) => tables.push((l, entries)),
                    Err(e) => last_err = Some(e),
                }
            }
            if tables.is_empty() {
                return Err(last_err.unwrap_or(Error::DegenerateNorm));
            }
            let mut entries = Vec::with_capacity(n_levels);
            let mut l_by_level = Vec::with_capacity(n_levels);
            for (i, target) in oracle.iter().enumerate() {
                let (l, entry) = tables
                    .iter()
                    .map(|(l, es)| (*l, es[i]))
                    .min_by(|a, b| {
                        (a.1.energy - target)
                            .abs()
                            .total_cmp(&(b.1.energy - target).abs())
                    })
                    .expect("non-empty candidate set");
                entries.push(entry);
                l_by_level.push(l);
            }
            Ok(VvpSpectrum {
                table: SpectrumTable::new(Method::Vvp, *params, entries),
                l_by_level,
                policy: policy.clone(),
            })
        }
    }
}

/// Lowest `n_levels` labeled entries at fixed l, sorted ascending.
fn sorted_entries(params: &ModelParams, n_levels: usize, l: usize) -> Result<Vec<LevelEntry>> {
    let n_pairs = n_levels + 2;
    let k_cutoff = DEFAULT_K_CUTOFF.max(n_pairs + l + 10);
    let mut entries = Vec::with_capacity(2 * n_pairs);
    for m in 0..n_pairs {
        let (ep, em) = vvp_eigenvalues(params, m, l, k_cutoff)?;
        entries.push(LevelEntry {
            index: m,
            branch: Branch::Plus,
            energy: ep,
        });
        entries.push(LevelEntry {
            index: m,
            branch: Branch::Minus,
            energy: em,
        });
    }
    entries.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    entries.truncate(n_levels);
    Ok(entries)
}

//! Independent validators for the continuous solvers.
//!
//! Nothing here shares code with [`crate::waterfill`]: the water level is found
//! by sorting the sampled SNRs and walking the staircase of active sets, which
//! is exact for a finite collection of parallel channels.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{ChannelSpec, EigenSpectrum, SnrDensity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerMode {
    /// Same power `P` on every eigenmode.
    EqualPower,
    /// Classical waterfilling with total power `m P`.
    Waterfill,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub target: String,
    pub reference_value: f64,
    pub tested_value: f64,
    pub abs_gap: f64,
    pub m_or_points: usize,
}

impl OracleReport {
    pub fn new(target: impl Into<String>, reference: f64, tested: f64, m_or_points: usize) -> Self {
        Self {
            target: target.into(),
            reference_value: reference,
            tested_value: tested,
            abs_gap: (reference - tested).abs(),
            m_or_points,
        }
    }

    pub fn within(&self, tol: f64) -> bool {
        self.abs_gap < tol
    }
}

/// Per-antenna rate of the `m x m` circulant channel.
pub fn finite_m_rate(spec: ChannelSpec, power: f64, m: usize, mode: PowerMode) -> Result<f64> {
    if !(power >= 0.0 && power.is_finite()) {
        return Err(Error::domain("P", power, "finite and >= 0"));
    }
    let eig = EigenSpectrum::new(spec, m)?;
    Ok(match mode {
        PowerMode::EqualPower => eig.mean_of(|g| (power * g).ln_1p() / std::f64::consts::LN_2),
        PowerMode::Waterfill => staircase_rate(eig.gains(), power),
    })
}

/// Waterfilling rate of `int (log2 mu rho)^+` by the midpoint rule on
/// `points` uniform samples of `f in [0, 1)`.
pub fn brute_quadrature(d: &SnrDensity, power: f64, points: usize) -> Result<f64> {
    if points < 1000 {
        return Err(Error::domain("points", points as f64, ">= 1000"));
    }
    if !(power >= 0.0 && power.is_finite()) {
        return Err(Error::domain("P", power, "finite and >= 0"));
    }
    let n = points as f64;
    let samples: Vec<f64> = (0..points).map(|j| d.at((j as f64 + 0.5) / n)).collect();
    Ok(staircase_rate(&samples, power))
}

/// Discrete waterfilling over equally weighted parallel channels with SNRs
/// `snr`, average power `power` per channel. Returns the average rate.
///
/// Sort descending; with the `k` strongest channels active the level is
/// `mu_k = (n P + sum_{i<k} 1/snr_i) / k`, valid once `mu_k > 1/snr_{k-1}`.
/// The largest valid `k` is the optimum.
pub fn staircase_rate(snr: &[f64], power: f64) -> f64 {
    if power <= 0.0 || snr.is_empty() {
        return 0.0;
    }
    let n = snr.len() as f64;
    let mut sorted: Vec<f64> = snr.iter().copied().filter(|&x| x > 0.0).collect();
    if sorted.is_empty() {
        return 0.0;
    }
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));

    let total = n * power;
    let mut prefix = Vec::with_capacity(sorted.len());
    let mut acc = 0.0;
    for &x in &sorted {
        acc += 1.0 / x;
        prefix.push(acc);
    }
    let mut k = sorted.len();
    let mut mu = (total + prefix[k - 1]) / k as f64;
    while k > 1 && mu <= 1.0 / sorted[k - 1] {
        k -= 1;
        mu = (total + prefix[k - 1]) / k as f64;
    }
    sorted[..k].iter().map(|&x| (mu * x).log2()).sum::<f64>() / n
}

//! Waterfilling over a spatial SNR density.
//!
//! For a density `rho(f)` and power budget `P` the allocation is
//! `S(f) = (mu - 1/rho(f))^+` with the water level `mu` fixed by
//! `int_0^1 S(f) df = P`, and the rate is `int_0^1 (log2(mu rho(f)))^+ df`.
//!
//! `rho` is even about `f = 1/2` and decreasing on `[0, 1/2]` whenever
//! `alpha > 0`, so the active set is always a single interval `[0, f_c]`
//! (mirrored onto `[1 - f_c, 1)`). The edge `f_c` solves `mu rho(f_c) = 1`,
//! which for the rational family is a closed-form `cos(2 pi f_c) = const`.
//! The rate integral is then smooth on `[0, f_c]` and Gauss-Legendre panels
//! reach machine precision without ever straddling the kink of `(.)^+`.

use crate::error::{Error, Result};
use crate::quadrature;
use crate::spectrum::{ChannelSpec, SnrDensity};

/// Relative power residual at which the water-level bisection stops.
pub const POWER_RTOL: f64 = 1e-12;

const MAX_BISECTIONS: usize = 400;

/// Closed interval of spatial frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub start: f64,
    pub end: f64,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.end - self.start
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillSolution {
    /// Water level in linear power units.
    pub mu: f64,
    /// Achieved rate, bit/(symbol x antenna).
    pub rate: f64,
    /// `int_0^1 (mu - 1/rho)^+ df` at the returned level.
    pub power_used: f64,
    /// Active frequencies within `[0, 1/2]`; the allocation is mirrored about 1/2.
    pub active_band: Vec<Band>,
    /// Bisection steps taken (zero for closed-form cases).
    pub iterations: usize,
}

/// Solves the waterfilling problem for density `d` under power `power`.
pub fn waterfill(d: &SnrDensity, power: f64) -> Result<WaterfillSolution> {
    if !(power >= 0.0 && power.is_finite()) {
        return Err(Error::domain("P", power, "finite and >= 0"));
    }
    if d.is_zero() {
        if power > 0.0 {
            return Err(Error::DegenerateDensity { power });
        }
        return Ok(WaterfillSolution {
            mu: f64::INFINITY,
            rate: 0.0,
            power_used: 0.0,
            active_band: Vec::new(),
            iterations: 0,
        });
    }

    let floor = 1.0 / d.max();
    if power == 0.0 {
        return Ok(WaterfillSolution {
            mu: floor,
            rate: 0.0,
            power_used: 0.0,
            active_band: Vec::new(),
            iterations: 0,
        });
    }

    if d.is_flat() {
        let c = d.max();
        return Ok(WaterfillSolution {
            mu: power + 1.0 / c,
            rate: (power * c).ln_1p() / std::f64::consts::LN_2,
            power_used: power,
            active_band: vec![Band {
                start: 0.0,
                end: 0.5,
            }],
            iterations: 0,
        });
    }

    let (mu, iterations) = water_level(d, power)?;
    let edge = band_edge(d, mu);
    let power_used = allocated_power(d, mu);
    let rate = band_rate(d, mu, edge);
    let active_band = if edge > 0.0 {
        vec![Band {
            start: 0.0,
            end: edge,
        }]
    } else {
        Vec::new()
    };
    Ok(WaterfillSolution {
        mu,
        rate,
        power_used,
        active_band,
        iterations,
    })
}

/// `R_WF(P)` over the plain channel density `G(f)`.
pub fn rate_wf_channel(spec: ChannelSpec, power: f64) -> Result<f64> {
    Ok(waterfill(&SnrDensity::plain(spec), power)?.rate)
}

/// Bisection on `mu` over `[1/max rho, P + 1/min rho]`.
///
/// At `alpha = 1` the density vanishes at `f = 1/2` and the upper end is
/// infinite; the bracket is then grown geometrically from `floor + P`.
fn water_level(d: &SnrDensity, power: f64) -> Result<(f64, usize)> {
    let tol = POWER_RTOL * power.max(1.0);
    let mut lo = 1.0 / d.max();
    let ceiling = power + 1.0 / d.min();
    let mut hi = if ceiling.is_finite() {
        ceiling
    } else {
        let mut hi = lo + power;
        while allocated_power(d, hi) < power {
            hi = lo + 2.0 * (hi - lo);
        }
        hi
    };

    let mut residual = f64::INFINITY;
    for it in 1..=MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let p = allocated_power(d, mid);
        residual = p - power;
        if residual.abs() <= tol || mid <= lo || mid >= hi {
            return Ok((mid, it));
        }
        if residual < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        solver: "water level bisection",
        iterations: MAX_BISECTIONS,
        residual,
    })
}

/// Channel gain at which `mu rho = 1`, or `None` if `mu rho < 1` everywhere.
fn threshold_gain(d: &SnrDensity, mu: f64) -> Option<f64> {
    let excess = mu * d.kappa() - d.v();
    (excess > 0.0).then(|| d.u() / excess)
}

/// Upper edge `f_c in [0, 1/2]` of the active band.
fn band_edge(d: &SnrDensity, mu: f64) -> f64 {
    let spec = d.channel();
    match threshold_gain(d, mu) {
        None => 0.0,
        Some(g) if g >= spec.max_gain() => 0.0,
        Some(g) if g <= spec.min_gain() => 0.5,
        Some(g) => spec.frequency_for_gain(g),
    }
}

/// `int_0^1 (mu - 1/rho(f))^+ df` in closed form.
///
/// With `1/rho = v/kappa + (u/kappa)/G`, the integral over the band is
/// `2 [f_c (mu - v/kappa) - (u/kappa) int_0^{f_c} 1/G]`.
pub(crate) fn allocated_power(d: &SnrDensity, mu: f64) -> f64 {
    let edge = band_edge(d, mu);
    if edge <= 0.0 {
        return 0.0;
    }
    let k = d.kappa();
    let inner = edge * (mu - d.v() / k) - d.u() / k * d.channel().inverse_gain_integral(edge);
    (2.0 * inner).max(0.0)
}

fn band_rate(d: &SnrDensity, mu: f64, edge: f64) -> f64 {
    if edge <= 0.0 {
        return 0.0;
    }
    let half = quadrature::integrate(0.0, edge, |f| (mu * d.at(f)).log2().max(0.0));
    2.0 * half
}

/// High-SNR closed form for waterfilling over `G(f)/N` at `snr = P/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormBound {
    /// `log2(snr + 1/(1 - alpha^2))`, an upper bound on the waterfilling rate.
    pub bound: f64,
    /// Whether the printed sufficient condition for equality holds.
    pub tight: bool,
}

/// `log2(snr + 1/(1-alpha^2))` with equality flagged for
/// `snr >= 2 alpha / ((1-alpha)^2 (1-alpha^2))`.
///
/// The flag is a sufficient condition only. Equality in fact holds from
/// [`full_band_threshold`] upward, which is smaller by a factor `1 - alpha`.
pub fn high_snr_bound(spec: ChannelSpec, snr: f64) -> Result<ClosedFormBound> {
    if snr.is_nan() || snr < 0.0 {
        return Err(Error::domain("snr", snr, ">= 0"));
    }
    let inv_mean = spec.inverse_gain_mean("high_snr_bound")?;
    Ok(ClosedFormBound {
        bound: (snr + inv_mean).log2(),
        tight: snr >= high_snr_threshold(spec)?,
    })
}

/// `2 alpha / ((1-alpha)^2 (1-alpha^2))`.
pub fn high_snr_threshold(spec: ChannelSpec) -> Result<f64> {
    let a = spec.alpha();
    let inv_mean = spec.inverse_gain_mean("high_snr_threshold")?;
    Ok(2.0 * a * inv_mean / ((1.0 - a) * (1.0 - a)))
}

/// `2 alpha / ((1-alpha)(1-alpha^2))`: the smallest SNR at which waterfilling
/// over `G(f)` is active on the whole band, i.e. `P + 1/(1-a^2) >= 1/(1-a)^2`.
pub fn full_band_threshold(spec: ChannelSpec) -> Result<f64> {
    let a = spec.alpha();
    let inv_mean = spec.inverse_gain_mean("full_band_threshold")?;
    Ok(2.0 * a * inv_mean / (1.0 - a))
}

//! Cut-set bound and achievable rates of every transmit/receive scheme.
//!
//! Transmit side (source to transmitters, capacity `C`):
//! * IM: independent messages, one rate-`C` substream per transmitter.
//! * QW: quantized waterfilling, the ideal waterfilling codeword is quantized
//!   onto each transmitter's random codebook.
//!
//! Receive side (receivers to destination, capacity `C'`):
//! * EC: elementary compression, per-antenna quantization.
//! * DC: distributed (CEO-style) compression, solved through a fixed point.
//!
//! An unbounded link is [`Capacity::UNBOUNDED`], so the one-sided schemes are
//! the limits of the combined ones evaluated through the same code.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fixedpoint::solve_fixed_point;
use crate::spectrum::{ChannelSpec, SnrDensity};
use crate::waterfill::{full_band_threshold, rate_wf_channel, waterfill};

/// Tolerance used by the dominance invariants.
pub const RATE_SLACK: f64 = 1e-9;

/// Link capacity in bit/symbol; `+inf` models an ideal link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacity(f64);

impl Capacity {
    pub const UNBOUNDED: Capacity = Capacity(f64::INFINITY);

    pub fn new(bits: f64) -> Result<Self> {
        if bits.is_nan() || bits < 0.0 {
            return Err(Error::domain("capacity", bits, ">= 0 (inf allowed)"));
        }
        Ok(Capacity(bits))
    }

    pub fn bits(self) -> f64 {
        self.0
    }

    pub fn is_unbounded(self) -> bool {
        self.0.is_infinite()
    }

    /// `2^-C`, the fraction of the signal lost to quantization.
    pub fn loss(self) -> f64 {
        (-self.0).exp2()
    }

    /// `1 - 2^-C`.
    pub fn retained(self) -> f64 {
        -(-self.0 * std::f64::consts::LN_2).exp_m1()
    }
}

impl PartialOrd for Capacity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unbounded() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Capacity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Capacity::UNBOUNDED);
        }
        let bits: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("capacity '{s}' is not a number or 'inf'")))?;
        if bits.is_nan() {
            return Err(Error::Parse(format!("capacity '{s}' is not a number")));
        }
        Capacity::new(bits)
    }
}

impl Serialize for Capacity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_unbounded() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(x) => Capacity::new(x).map_err(serde::de::Error::custom),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Per-transmitter SNR and the two backhaul capacities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub power: f64,
    pub c: Capacity,
    pub cprime: Capacity,
}

impl LinkBudget {
    pub fn new(power: f64, c: Capacity, cprime: Capacity) -> Result<Self> {
        if !(power >= 0.0 && power.is_finite()) {
            return Err(Error::domain("P", power, "finite and >= 0"));
        }
        Ok(Self { power, c, cprime })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "UB")]
    UpperBound,
    #[serde(rename = "IM")]
    IndependentMessages,
    #[serde(rename = "QW")]
    QuantizedWaterfilling,
    #[serde(rename = "EC")]
    ElementaryCompression,
    #[serde(rename = "DC")]
    DistributedCompression,
    #[serde(rename = "IM-EC")]
    ImEc,
    #[serde(rename = "IM-DC")]
    ImDc,
    #[serde(rename = "QW-EC")]
    QwEc,
    #[serde(rename = "QW-DC")]
    QwDc,
}

impl Scheme {
    pub const ALL: [Scheme; 9] = [
        Scheme::UpperBound,
        Scheme::IndependentMessages,
        Scheme::QuantizedWaterfilling,
        Scheme::ElementaryCompression,
        Scheme::DistributedCompression,
        Scheme::ImEc,
        Scheme::ImDc,
        Scheme::QwEc,
        Scheme::QwDc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::UpperBound => "UB",
            Scheme::IndependentMessages => "IM",
            Scheme::QuantizedWaterfilling => "QW",
            Scheme::ElementaryCompression => "EC",
            Scheme::DistributedCompression => "DC",
            Scheme::ImEc => "IM-EC",
            Scheme::ImDc => "IM-DC",
            Scheme::QwEc => "QW-EC",
            Scheme::QwDc => "QW-DC",
        }
    }

    /// Whether the scheme is defined at this budget. IM and QW need an ideal
    /// receive side, EC and DC an ideal transmit side.
    pub fn applies_to(self, budget: &LinkBudget) -> bool {
        match self {
            Scheme::IndependentMessages | Scheme::QuantizedWaterfilling => {
                budget.cprime.is_unbounded()
            }
            Scheme::ElementaryCompression | Scheme::DistributedCompression => {
                budget.c.is_unbounded()
            }
            _ => true,
        }
    }

    /// Whether evaluating the scheme needs `1/(1-alpha^2)`.
    pub fn needs_alpha_below_one(self) -> bool {
        matches!(
            self,
            Scheme::QuantizedWaterfilling
                | Scheme::ElementaryCompression
                | Scheme::DistributedCompression
        )
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('_', "-");
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown scheme '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeRate {
    pub scheme: Scheme,
    pub rate: f64,
    /// Closed-form bound printed alongside the scheme, when one exists.
    pub printed_bound: Option<f64>,
    /// Whether the printed equality conditions hold.
    pub bound_tight: Option<bool>,
    /// Compression rate `r*` for the distributed-compression schemes.
    pub fixed_point: Option<f64>,
}

impl SchemeRate {
    fn plain(scheme: Scheme, rate: f64) -> Self {
        Self {
            scheme,
            rate: rate.max(0.0),
            printed_bound: None,
            bound_tight: None,
            fixed_point: None,
        }
    }
}

fn log2_ratio(num: f64, den: f64) -> f64 {
    (num / den).log2()
}

/// Waterfilling rate, zero for an identically-zero density.
fn wf_rate(d: &SnrDensity, power: f64) -> Result<f64> {
    if d.is_zero() {
        return Ok(0.0);
    }
    Ok(waterfill(d, power)?.rate)
}

/// Cut-set bound `min{C, C', R_WF(P)}`.
pub fn upper_bound(spec: ChannelSpec, b: &LinkBudget) -> Result<SchemeRate> {
    let links = b.c.bits().min(b.cprime.bits());
    let rate = if links == 0.0 {
        0.0
    } else {
        links.min(rate_wf_channel(spec, b.power)?)
    };
    let mut out = SchemeRate::plain(Scheme::UpperBound, rate);
    if spec.alpha() < 1.0 {
        let inv_mean = spec.inverse_gain_mean("upper_bound")?;
        out.printed_bound = Some(links.min((b.power + inv_mean).log2()));
        out.bound_tight = Some(b.power >= full_band_threshold(spec)?);
    }
    Ok(out)
}

/// Rate with no transmitter cooperation, `int_0^1 log2(1 + P G(f)) df`, in
/// closed form.
pub fn rate_nc(spec: ChannelSpec, power: f64) -> f64 {
    if power <= 0.0 {
        return 0.0;
    }
    let a2 = spec.alpha2();
    let sum = 1.0 + a2;
    let diff = 1.0 - a2;
    let root = (1.0 + 2.0 * sum * power + diff * diff * power * power).sqrt();
    ((1.0 + sum * power + root) / 2.0).log2()
}

fn require(ok: bool, scheme: Scheme, requirement: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition {
            scheme: scheme.name(),
            requirement,
        })
    }
}

/// Independent messages with an ideal receive side: `min{C, R_NC(P)}`.
pub fn rate_im(spec: ChannelSpec, b: &LinkBudget) -> Result<SchemeRate> {
    require(
        b.cprime.is_unbounded(),
        Scheme::IndependentMessages,
        "C' = inf (use IM-EC or IM-DC for a finite receive link)",
    )?;
    let rate = b.c.bits().min(rate_nc(spec, b.power));
    Ok(SchemeRate::plain(Scheme::IndependentMessages, rate))
}

/// `rho = (1-2^-C) G / (u + P 2^-C G)` for quantized waterfilling.
fn quantized_density(spec: ChannelSpec, b: &LinkBudget, gain: f64, u: f64) -> Result<SnrDensity> {
    let loss = if b.c.is_unbounded() { 0.0 } else { b.c.loss() };
    SnrDensity::new(spec, gain * b.c.retained(), u, b.power * loss)
}

/// Quantized waterfilling with an ideal receive side.
pub fn rate_qw(spec: ChannelSpec, b: &LinkBudget) -> Result<SchemeRate> {
    require(
        b.cprime.is_unbounded(),
        Scheme::QuantizedWaterfilling,
        "C' = inf (use QW-EC or QW-DC for a finite receive link)",
    )?;
    let inv_mean = spec.inverse_gain_mean("rate_qw")?;
    let d = quantized_density(spec, b, 1.0, 1.0)?;
    let mut out = SchemeRate::plain(Scheme::QuantizedWaterfilling, wf_rate(&d, b.power)?);

    let retained = b.c.retained();
    let bound = (b.power + inv_mean).log2() - rate_nc(spec, b.power * b.c.loss());
    out.printed_bound = Some(bound.max(0.0));
    out.bound_tight = Some(retained > 0.0 && b.power >= full_band_threshold(spec)? / retained);
    Ok(out)
}

/// Equivalent noise of elementary compression,
/// `(1 + (1+alpha^2) P 2^-C') / (1 - 2^-C')`.
pub fn n_ec(spec: ChannelSpec, power: f64, cprime: Capacity) -> Result<f64> {
    if cprime.is_unbounded() {
        return Ok(1.0);
    }
    if cprime.bits() == 0.0 {
        return Err(Error::InfiniteNoise);
    }
    let loss = cprime.loss();
    Ok((1.0 + (1.0 + spec.alpha2()) * power * loss) / cprime.retained())
}

/// `P / N_EC`, zero when the receive link has no capacity.
fn ec_snr(spec: ChannelSpec, power: f64, cprime: Capacity) -> Result<f64> {
    match n_ec(spec, power, cprime) {
        Ok(n) => Ok(power / n),
        Err(Error::InfiniteNoise) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Elementary compression with an ideal transmit side: `R_WF(P / N_EC)`.
pub fn rate_ec(spec: ChannelSpec, b: &LinkBudget) -> Result<SchemeRate> {
    require(
        b.c.is_unbounded(),
        Scheme::ElementaryCompression,
        "C = inf (use IM-EC or QW-EC for a finite transmit link)",
    )?;
    let inv_mean = spec.inverse_gain_mean("rate_ec")?;
    let snr = ec_snr(spec, b.power, b.cprime)?;
    let mut out = SchemeRate::plain(Scheme::ElementaryCompression, rate_wf_channel(spec, snr)?);
    out.printed_bound = Some((snr + inv_mean).log2());
    out.bound_tight = Some(ec_conditions(spec, b.power, b.cprime));
    Ok(out)
}

/// The two printed equality conditions for elementary compression, evaluated
/// verbatim. A non-positive power-threshold denominator counts as unmet.
pub fn ec_conditions(spec: ChannelSpec, power: f64, cprime: Capacity) -> bool {
    let a = spec.alpha();
    let a2 = a * a;
    let den = (1.0 + a) * ((1.0 + a2) * cprime.retained() - 2.0 * a);
    let power_ok = den > 0.0 && power >= 2.0 * a / den;
    power_ok && ec_capacity_condition(spec, cprime)
}

/// `C' > log2((1+alpha^2)/(1-alpha)^2)`.
pub fn ec_capacity_condition(spec: ChannelSpec, cprime: Capacity) -> bool {
    let a = spec.alpha();
    cprime.bits() > ((1.0 + a * a) / ((1.0 - a) * (1.0 - a))).log2()
}

/// High-SNR value of the elementary-compression bound,
/// `log2((2^C' - 1)/(1+alpha^2) + 1/(1-alpha^2))`.
pub fn ec_high_snr_limit(spec: ChannelSpec, cprime: Capacity) -> Result<f64> {
    let inv_mean = spec.inverse_gain_mean("ec_high_snr_limit")?;
    let snr = (cprime.bits().exp2() - 1.0) / (1.0 + spec.alpha2());
    Ok((snr + inv_mean).log2())
}

/// Distributed compression with an ideal transmit side.
///
/// Solves `R_WF(P(1-2^-r)) = C' - r` and reports `R_WF(P(1-2^-r*))`.
pub fn rate_dc(spec: ChannelSpec, b: &LinkBudget) -> Result<SchemeRate> {
    require(
        b.c.is_unbounded(),
        Scheme::DistributedCompression,
        "C = inf (use IM-DC or QW-DC for a finite transmit link)",
    )?;
    let inv_mean = spec.inverse_gain_mean("rate_dc")?;
    let mut out = compression_fixed_point(Scheme::DistributedCompression, b, |r| {
        let retained = -(-r * std::f64::consts::LN_2).exp_m1();
        wf_rate(&SnrDensity::new(spec, retained, 1.0, 0.0)?, b.power)
    })?;

    let loss = b.cprime.loss();
    out.printed_bound = Some(log2_ratio(b.power + inv_mean, 1.0 + b.power * loss).max(0.0));
    out.bound_tight = Some(dc_conditions(spec, b.power, b.cprime));
    Ok(out)
}

/// The two printed equality conditions for distributed compression.
pub fn dc_conditions(spec: ChannelSpec, power: f64, cprime: Capacity) -> bool {
    let a = spec.alpha();
    let den = (1.0 - a) * ((1.0 - a * a) - cprime.loss());
    let power_ok = den > 0.0 && power >= 2.0 * a / den;
    power_ok && cprime.bits() > 2.0 * (1.0 / (1.0 - a)).log2()
}

/// Shared driver for DC-type schemes: `C' = inf` skips the fixed point.
fn compression_fixed_point<F>(scheme: Scheme, b: &LinkBudget, mut lhs: F) -> Result<SchemeRate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if b.cprime.is_unbounded() {
        let rate = lhs(f64::INFINITY)?;
        return Ok(SchemeRate::plain(scheme, rate));
    }
    let fp = solve_fixed_point(lhs, b.cprime.bits())?;
    let mut out = SchemeRate::plain(scheme, fp.value);
    out.fixed_point = Some(fp.r_star);
    Ok(out)
}

/// Independent messages with elementary compression.
pub fn rate_im_ec(spec: ChannelSpec, b: &LinkBudget) -> Result<SchemeRate> {
    let n = match n_ec(spec, b.power, b.cprime) {
        Ok(n) => n,
        Err(Error::InfiniteNoise) => return Ok(SchemeRate::plain(Scheme::ImEc, 0.0)),
        Err(e) => return Err(e),
    };
    let a2 = spec.alpha2();
    let p = b.power;
    let s = n + (1.0 + a2) * p;
    // (N + A P)^2 - 4 a^2 P^2 = N^2 + 2 N A P + (1 - a^2)^2 P^2 >= 0
    let disc = (n * n + 2.0 * n * (1.0 + a2) * p + (1.0 - a2).powi(2) * p * p).sqrt();
    let inner = log2_ratio(s + disc, 2.0 * n);
    Ok(SchemeRate::plain(Scheme::ImEc, b.c.bits().min(inner)))
}

/// Independent messages with distributed compression.
pub fn rate_im_dc(spec: ChannelSpec, b: &LinkBudget) -> Result<SchemeRate> {
    let a2 = spec.alpha2();
    let big_a = 1.0 + a2;
    let big_b = 1.0 - a2;
    let s = if b.cprime.is_unbounded() {
        0.0
    } else {
        b.cprime.loss()
    };
    let p = b.power;
    let disc = (1.0 + 2.0 * big_a * p + (big_b * big_b + 4.0 * a2 * s) * p * p).sqrt();
    let num = 1.0 + big_a * p + 2.0 * a2 * s * p * p + disc;
    let den = 2.0 * (1.0 + s * p) * (1.0 + a2 * s * p);
    let inner = log2_ratio(num, den);
    Ok(SchemeRate::plain(Scheme::ImDc, b.c.bits().min(inner)))
}

/// Quantized waterfilling with elementary compression.
pub fn rate_qw_ec(spec: ChannelSpec, b: &LinkBudget) -> Result<SchemeRate> {
    let n = match n_ec(spec, b.power, b.cprime) {
        Ok(n) => n,
        Err(Error::InfiniteNoise) => return Ok(SchemeRate::plain(Scheme::QwEc, 0.0)),
        Err(e) => return Err(e),
    };
    let d = quantized_density(spec, b, 1.0, n)?;
    Ok(SchemeRate::plain(Scheme::QwEc, wf_rate(&d, b.power)?))
}

/// Quantized waterfilling with distributed compression.
pub fn rate_qw_dc(spec: ChannelSpec, b: &LinkBudget) -> Result<SchemeRate> {
    compression_fixed_point(Scheme::QwDc, b, |r| {
        let retained = -(-r * std::f64::consts::LN_2).exp_m1();
        wf_rate(&quantized_density(spec, b, retained, 1.0)?, b.power)
    })
}

/// Dispatches to the scheme's rate function.
pub fn evaluate(scheme: Scheme, spec: ChannelSpec, b: &LinkBudget) -> Result<SchemeRate> {
    match scheme {
        Scheme::UpperBound => upper_bound(spec, b),
        Scheme::IndependentMessages => rate_im(spec, b),
        Scheme::QuantizedWaterfilling => rate_qw(spec, b),
        Scheme::ElementaryCompression => rate_ec(spec, b),
        Scheme::DistributedCompression => rate_dc(spec, b),
        Scheme::ImEc => rate_im_ec(spec, b),
        Scheme::ImDc => rate_im_dc(spec, b),
        Scheme::QwEc => rate_qw_ec(spec, b),
        Scheme::QwDc => rate_qw_dc(spec, b),
    }
}

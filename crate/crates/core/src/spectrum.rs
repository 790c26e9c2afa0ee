//! Spatial frequency response of the circulant Wyner channel and the family of
//! effective SNR densities built on top of it.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Circulant Wyner channel with interference gain `alpha` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    alpha: f64,
}

impl ChannelSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::domain("alpha", alpha, "0 <= alpha <= 1"));
        }
        Ok(Self { alpha })
    }

    /// Builds the channel from `alpha^2`, taking the positive root.
    pub fn from_alpha2(alpha2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha2) {
            return Err(Error::domain("alpha2", alpha2, "0 <= alpha^2 <= 1"));
        }
        Self::new(alpha2.sqrt())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha * self.alpha
    }

    /// `|H(f)|^2` at `f in [0, 1)`.
    pub fn gain(&self, f: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&f) {
            return Err(Error::domain("f", f, "0 <= f < 1"));
        }
        Ok(self.gain_at(f))
    }

    /// Unchecked `1 + alpha^2 + 2 alpha cos(2 pi f)`; periodic in `f`.
    pub(crate) fn gain_at(&self, f: f64) -> f64 {
        let a = self.alpha;
        (1.0 + a * a + 2.0 * a * (2.0 * PI * f).cos()).max(0.0)
    }

    /// Largest spectral gain, `(1 + alpha)^2`, reached at `f = 0`.
    pub fn max_gain(&self) -> f64 {
        (1.0 + self.alpha).powi(2)
    }

    /// Smallest spectral gain, `(1 - alpha)^2`, reached at `f = 1/2`.
    pub fn min_gain(&self) -> f64 {
        (1.0 - self.alpha).powi(2)
    }

    /// `1 / (1 - alpha^2)`, the mean of `1/G(f)`.
    pub fn inverse_gain_mean(&self, operation: &'static str) -> Result<f64> {
        if self.alpha >= 1.0 {
            return Err(Error::SingularAlpha { operation });
        }
        Ok(1.0 / (1.0 - self.alpha2()))
    }

    /// Frequency in `[0, 1/2]` at which `G(f) = g`, clamped to the band edges.
    pub(crate) fn frequency_for_gain(&self, g: f64) -> f64 {
        if self.alpha == 0.0 {
            return 0.5;
        }
        let a = self.alpha;
        let c = ((g - 1.0 - a * a) / (2.0 * a)).clamp(-1.0, 1.0);
        c.acos() / (2.0 * PI)
    }

    /// `int_0^f df' / G(f')` for `f in [0, 1/2]`.
    ///
    /// Uses `G = (1+a)^2 cos^2(pi f) + (1-a)^2 sin^2(pi f)` and the substitution
    /// `t = tan(pi f)`. Infinite at `f = 1/2` when `alpha = 1`.
    pub(crate) fn inverse_gain_integral(&self, f: f64) -> f64 {
        let a = self.alpha;
        let k = (1.0 - a) / (1.0 + a);
        let scale = PI * (1.0 + a) * (1.0 + a);
        if f >= 0.5 {
            return if k > 0.0 {
                1.0 / (2.0 * (1.0 - a * a))
            } else {
                f64::INFINITY
            };
        }
        let t = (PI * f).tan();
        if k > 0.0 {
            (k * t).atan() / (k * scale)
        } else {
            t / scale
        }
    }
}

/// Effective SNR density `rho(f) = kappa G(f) / (u + v G(f))`.
///
/// Every scheme in [`crate::schemes`] reduces to waterfilling over a member of
/// this family; the plain channel is `(kappa, u, v) = (1, 1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrDensity {
    kappa: f64,
    u: f64,
    v: f64,
    channel: ChannelSpec,
}

impl SnrDensity {
    pub fn new(channel: ChannelSpec, kappa: f64, u: f64, v: f64) -> Result<Self> {
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::domain("kappa", kappa, "finite and >= 0"));
        }
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::domain("u", u, "finite and > 0"));
        }
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::domain("v", v, "finite and >= 0"));
        }
        Ok(Self {
            kappa,
            u,
            v,
            channel,
        })
    }

    /// `rho(f) = G(f)`.
    pub fn plain(channel: ChannelSpec) -> Self {
        Self {
            kappa: 1.0,
            u: 1.0,
            v: 0.0,
            channel,
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn channel(&self) -> ChannelSpec {
        self.channel
    }

    pub fn is_zero(&self) -> bool {
        self.kappa == 0.0
    }

    /// True when `rho` does not depend on `f`.
    pub fn is_flat(&self) -> bool {
        self.channel.alpha() == 0.0
    }

    pub fn eval(&self, f: f64) -> Result<f64> {
        let g = self.channel.gain(f)?;
        let den = self.u + self.v * g;
        if den == 0.0 {
            return Err(Error::DivisionDegeneracy { f });
        }
        Ok(self.kappa * g / den)
    }

    /// Density as a function of the channel gain. Increasing in `g`.
    pub fn at_gain(&self, g: f64) -> f64 {
        self.kappa * g / (self.u + self.v * g)
    }

    /// Unchecked periodic evaluation.
    pub(crate) fn at(&self, f: f64) -> f64 {
        self.at_gain(self.channel.gain_at(f))
    }

    pub fn max(&self) -> f64 {
        self.at_gain(self.channel.max_gain())
    }

    pub fn min(&self) -> f64 {
        self.at_gain(self.channel.min_gain())
    }
}

/// Eigenvalues `|1 + alpha e^{-i 2 pi k/m}|^2` of the `m x m` circulant
/// channel Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    gains: Vec<f64>,
}

impl EigenSpectrum {
    pub fn new(spec: ChannelSpec, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("m", 0.0, "m >= 1"));
        }
        let gains = (0..m).map(|k| spec.gain_at(k as f64 / m as f64)).collect();
        Ok(Self { gains })
    }

    pub fn m(&self) -> usize {
        self.gains.len()
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    /// `(1/m) sum_k h(gains[k])`, the Riemann sum of `int_0^1 h(G(f)) df`.
    pub fn mean_of<F: Fn(f64) -> f64>(&self, h: F) -> f64 {
        self.gains.iter().map(|&g| h(g)).sum::<f64>() / self.gains.len() as f64
    }
}

pub fn channel_gain(spec: ChannelSpec, f: f64) -> Result<f64> {
    spec.gain(f)
}

pub fn density_eval(d: &SnrDensity, f: f64) -> Result<f64> {
    d.eval(f)
}

pub fn eigen_spectrum(spec: ChannelSpec, m: usize) -> Result<EigenSpectrum> {
    EigenSpectrum::new(spec, m)
}

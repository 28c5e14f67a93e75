//! Physical channel description and its standard form.
//!
//! A receiver observes `Y = Σ √h_{M,k} X̃_k + N_M` and the eavesdropper
//! `Z = Σ √h_{W,k} X̃_k + N_W`. Rescaling each codeword by `√(h_{M,k}/σ²_M)`
//! and normalising both noises leaves a channel with unit main gains whose
//! only parameters are the eavesdropper gains
//! `h_k = h_{W,k} σ²_M / (h_{M,k} σ²_W)` and the power limits
//! `P̄_k = (h_{M,k}/σ²_M) P̃_k`. Every rate quantity is unchanged.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for [`check_degraded`].
pub const DEFAULT_DEGRADED_TOL: f64 = 1e-9;

/// Physical channel gains, noise variances and power limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannelRepr")]
pub struct RawChannelConfig {
    pub num_users: usize,
    pub gains_main: Vec<f64>,
    pub gains_tap: Vec<f64>,
    pub noise_var_main: f64,
    pub noise_var_tap: f64,
    pub power_limits: Vec<f64>,
}

#[derive(Deserialize)]
struct RawChannelRepr {
    num_users: usize,
    gains_main: Vec<f64>,
    gains_tap: Vec<f64>,
    noise_var_main: f64,
    noise_var_tap: f64,
    power_limits: Vec<f64>,
}

impl TryFrom<RawChannelRepr> for RawChannelConfig {
    type Error = Error;

    fn try_from(r: RawChannelRepr) -> Result<Self> {
        RawChannelConfig::new(
            r.num_users,
            r.gains_main,
            r.gains_tap,
            r.noise_var_main,
            r.noise_var_tap,
            r.power_limits,
        )
    }
}

impl RawChannelConfig {
    pub fn new(
        num_users: usize,
        gains_main: Vec<f64>,
        gains_tap: Vec<f64>,
        noise_var_main: f64,
        noise_var_tap: f64,
        power_limits: Vec<f64>,
    ) -> Result<Self> {
        let cfg = RawChannelConfig {
            num_users,
            gains_main,
            gains_tap,
            noise_var_main,
            noise_var_tap,
            power_limits,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.num_users;
        if k == 0 {
            return Err(Error::InvalidChannel("num_users must be positive".into()));
        }
        for (name, v) in [
            ("gains_main", &self.gains_main),
            ("gains_tap", &self.gains_tap),
            ("power_limits", &self.power_limits),
        ] {
            if v.len() != k {
                return Err(Error::InvalidChannel(format!(
                    "{name} has {} entries, expected {k}",
                    v.len()
                )));
            }
            if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
                return Err(Error::InvalidChannel(format!(
                    "{name}[{i}] = {x} must be finite and nonnegative"
                )));
            }
        }
        if let Some(i) = self.gains_main.iter().position(|&x| x == 0.0) {
            return Err(Error::InvalidChannel(format!(
                "gains_main[{i}] is zero: user {} is disconnected from the receiver",
                i + 1
            )));
        }
        for (name, v) in [
            ("noise_var_main", self.noise_var_main),
            ("noise_var_tap", self.noise_var_tap),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidChannel(format!(
                    "{name} = {v} must be finite and strictly positive"
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidChannel(e.to_string()))
    }
}

/// Channel in standard form: eavesdropper gains and dimensionless power limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardChannel {
    pub num_users: usize,
    pub h: Vec<f64>,
    pub pmax: Vec<f64>,
}

impl StandardChannel {
    pub fn new(h: Vec<f64>, pmax: Vec<f64>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::InvalidChannel("at least one user required".into()));
        }
        if h.len() != pmax.len() {
            return Err(Error::DimensionMismatch {
                expected: h.len(),
                found: pmax.len(),
            });
        }
        for (name, v) in [("h", &h), ("pmax", &pmax)] {
            if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
                return Err(Error::InvalidChannel(format!(
                    "{name}[{i}] = {x} must be finite and nonnegative"
                )));
            }
        }
        Ok(StandardChannel {
            num_users: h.len(),
            h,
            pmax,
        })
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }
}

/// Maps a physical channel onto the standard form.
pub fn standardize(raw: &RawChannelConfig) -> Result<StandardChannel> {
    raw.validate()?;
    let h = raw
        .gains_tap
        .iter()
        .zip(&raw.gains_main)
        .map(|(&hw, &hm)| hw * raw.noise_var_main / (hm * raw.noise_var_tap))
        .collect();
    let pmax = raw
        .gains_main
        .iter()
        .zip(&raw.power_limits)
        .map(|(&hm, &p)| hm / raw.noise_var_main * p)
        .collect();
    StandardChannel::new(h, pmax)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegradednessReport {
    pub is_degraded: bool,
    /// Mean eavesdropper gain, present only when the channel is degraded.
    pub common_h: Option<f64>,
    pub max_gain_spread: f64,
}

/// Tests whether the eavesdropper sees a degraded copy of the receiver's
/// signal: all standardized gains equal (within `tol`) and below one.
pub fn check_degraded(std: &StandardChannel, tol: f64) -> DegradednessReport {
    let lo = std.h.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = std.h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    let mean = std.h.iter().sum::<f64>() / std.h.len() as f64;
    let is_degraded = spread <= tol && mean < 1.0;
    DegradednessReport {
        is_degraded,
        common_h: is_degraded.then_some(mean),
        max_gain_spread: spread,
    }
}

/// Returns the common gain of a degraded channel or the `NON_DEGRADED` error.
pub fn require_degraded(std: &StandardChannel, tol: f64) -> Result<f64> {
    let report = check_degraded(std, tol);
    match report.common_h {
        Some(h) => Ok(h),
        None => Err(Error::NonDegraded {
            spread: report.max_gain_spread,
            mean: std.h.iter().sum::<f64>() / std.h.len() as f64,
        }),
    }
}

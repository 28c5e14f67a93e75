//! Elementary rate functions shared by every region and bound.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::StandardChannel;
use crate::error::{Error, Result};

/// Multiply a rate in bits by this to get nats.
pub const NATS_PER_BIT: f64 = std::f64::consts::LN_2;

/// Largest user count for which all `2^K` subsets are enumerated.
pub const MAX_SUBSET_USERS: usize = 20;

/// Relative slack allowed when checking `p_k <= pmax_k`.
const POWER_SLACK: f64 = 1e-12;

/// `½·log₂(1+x)` without domain checks; finite for any `x > -1`.
#[inline]
pub(crate) fn half_log2_1p(x: f64) -> f64 {
    0.5 * x.ln_1p() / NATS_PER_BIT
}

/// Gaussian capacity `g(x) = ½·log₂(1+x)` in bits per channel use.
pub fn g(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidInput(format!(
            "g is defined for finite x >= 0, got {x}"
        )));
    }
    Ok(half_log2_1p(x))
}

/// `[x]⁺ = max(x, 0)`.
#[inline]
pub fn pos_part(x: f64) -> f64 {
    x.max(0.0)
}

/// A set of users, stored as a bitmask (bit `k-1` is user `k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UserSubset(u32);

impl UserSubset {
    pub const EMPTY: UserSubset = UserSubset(0);

    pub fn from_mask(mask: u32) -> Self {
        UserSubset(mask)
    }

    /// Builds a subset from 1-based user indices.
    pub fn from_users(users: &[usize], num_users: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &u in users {
            if u == 0 || u > num_users || u > 32 {
                return Err(Error::InvalidInput(format!(
                    "user index {u} outside 1..={num_users}"
                )));
            }
            let bit = 1u32 << (u - 1);
            if mask & bit != 0 {
                return Err(Error::InvalidInput(format!("user {u} listed twice")));
            }
            mask |= bit;
        }
        Ok(UserSubset(mask))
    }

    /// All users `{1..K}`.
    pub fn full(num_users: usize) -> Self {
        if num_users >= 32 {
            UserSubset(u32::MAX)
        } else {
            UserSubset((1u32 << num_users) - 1)
        }
    }

    pub fn singleton(index: usize) -> Self {
        UserSubset(1 << index)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Whether the 0-based user `index` is a member.
    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    pub fn complement(self, num_users: usize) -> Self {
        UserSubset(!self.0 & Self::full(num_users).0)
    }

    pub fn within(self, num_users: usize) -> bool {
        self.0 & !Self::full(num_users).0 == 0
    }

    /// 0-based member indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }

    /// Sum of `values[k]` over members.
    pub fn sum(self, values: &[f64]) -> f64 {
        self.indices().map(|k| values[k]).sum()
    }
}

impl fmt::Display for UserSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, k) in self.indices().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", k + 1)?;
        }
        f.write_str("}")
    }
}

/// All `2^K` subsets ordered by size, then lexicographically by members.
pub fn enumerate_subsets(num_users: usize) -> Result<Vec<UserSubset>> {
    if num_users == 0 {
        return Err(Error::InvalidInput("need at least one user".into()));
    }
    if num_users > MAX_SUBSET_USERS {
        return Err(Error::TooManyUsers {
            users: num_users,
            max: MAX_SUBSET_USERS,
        });
    }
    let mut subsets: Vec<UserSubset> = (0..1u32 << num_users).map(UserSubset).collect();
    // Same-size subsets: lexicographic member order is descending order of the
    // bit-reversed mask.
    subsets.sort_by_key(|s| (s.len(), std::cmp::Reverse(s.0.reverse_bits())));
    Ok(subsets)
}

/// Nonempty subsets in [`enumerate_subsets`] order.
pub fn nonempty_subsets(num_users: usize) -> Result<Vec<UserSubset>> {
    Ok(enumerate_subsets(num_users)?.into_iter().skip(1).collect())
}

/// Per-user transmit powers in standardized units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PowerVector(Vec<f64>);

impl PowerVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some((i, x)) = p.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
            return Err(Error::InfeasiblePower(format!(
                "P[{i}] = {x} must be finite and nonnegative"
            )));
        }
        Ok(PowerVector(p))
    }

    /// Full power on every user.
    pub fn full(std: &StandardChannel) -> Self {
        PowerVector(std.pmax.clone())
    }

    pub fn zeros(num_users: usize) -> Self {
        PowerVector(vec![0.0; num_users])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Checks `0 <= p_k <= pmax_k` for the given channel.
    pub fn check_feasible(&self, std: &StandardChannel) -> Result<()> {
        if self.0.len() != std.num_users {
            return Err(Error::DimensionMismatch {
                expected: std.num_users,
                found: self.0.len(),
            });
        }
        for (k, (&p, &pm)) in self.0.iter().zip(&std.pmax).enumerate() {
            if p > pm * (1.0 + POWER_SLACK) {
                return Err(Error::InfeasiblePower(format!(
                    "P[{k}] = {p} exceeds pmax = {pm}"
                )));
            }
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for PowerVector {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// `C^M_S(P) = g(Σ_{k∈S} P_k)`: sum rate of `S` at the intended receiver.
pub fn cm(p: &PowerVector, s: UserSubset) -> f64 {
    half_log2_1p(s.sum(p.as_slice()))
}

fn weighted(p: &PowerVector, h: &[f64], s: UserSubset) -> f64 {
    s.indices().map(|k| h[k] * p[k]).sum()
}

/// `C^W_S(P) = g(Σ_{k∈S} h_k P_k)`: sum rate of `S` at the eavesdropper.
pub fn cw(p: &PowerVector, h: &[f64], s: UserSubset) -> f64 {
    half_log2_1p(weighted(p, h, s))
}

/// `C̃^W_S(P)`: eavesdropper rate of `S` treating the other users as noise.
pub fn cw_tilde(p: &PowerVector, h: &[f64], s: UserSubset) -> f64 {
    let num = weighted(p, h, s);
    let rest = weighted(p, h, s.complement(p.len()));
    half_log2_1p(num / (1.0 + rest))
}

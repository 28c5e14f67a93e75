//! Fixed-power rate regions as explicit half-space lists.
//!
//! Every row has the form `Σ_{k∈S} (…) ≤ rhs` for a user subset `S`. A
//! `Secrecy` row sums secret rates only, a `Mac` row sums secret plus open
//! rates. After [`delta_region`] the coordinates become the per-user total
//! rates `R^δ_k = R^s_k + R^o_k` and both row kinds sum those.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::{require_degraded, StandardChannel, DEFAULT_DEGRADED_TOL};
use crate::error::{Error, Result};
use crate::rates::{cm, cw, half_log2_1p, nonempty_subsets, pos_part, PowerVector, UserSubset};

mod boundary;
mod lp;
mod split;

pub use boundary::{
    convex_hull, fixed_power_vertices, region_boundary_2d, BoundaryKind, RegionBoundary2D,
    DEFAULT_ALPHA_RES, DEFAULT_POWER_RES,
};
pub use split::{
    rate_split_collective, rate_split_individual, BindingConstraint, SplitOutcome, MAX_SPLIT_USERS,
};

/// Tolerance on `Σ α_k = 1` for time-sharing shares.
pub const SHARE_SUM_TOL: f64 = 1e-12;

/// Secret and open rates per user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateVector {
    pub secret: Vec<f64>,
    pub open: Vec<f64>,
}

fn check_rates(name: &str, v: &[f64]) -> Result<()> {
    match v.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
        Some((i, x)) => Err(Error::InvalidInput(format!(
            "{name}[{i}] = {x} must be finite and nonnegative"
        ))),
        None => Ok(()),
    }
}

impl RateVector {
    pub fn new(secret: Vec<f64>, open: Vec<f64>) -> Result<Self> {
        if secret.len() != open.len() {
            return Err(Error::DimensionMismatch {
                expected: secret.len(),
                found: open.len(),
            });
        }
        check_rates("secret", &secret)?;
        check_rates("open", &open)?;
        Ok(RateVector { secret, open })
    }

    /// Rates with every message secret.
    pub fn secret_only(secret: Vec<f64>) -> Result<Self> {
        let n = secret.len();
        Self::new(secret, vec![0.0; n])
    }

    pub fn num_users(&self) -> usize {
        self.secret.len()
    }
}

/// Total per-user rates of which at least a fraction `delta` is secret.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRateVector {
    pub total: Vec<f64>,
    pub delta: f64,
}

impl DeltaRateVector {
    pub fn new(total: Vec<f64>, delta: f64) -> Result<Self> {
        check_rates("total", &total)?;
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidInput(format!("delta = {delta} outside [0,1]")));
        }
        Ok(DeltaRateVector { total, delta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RowKind {
    Secrecy,
    Mac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegionKind {
    Individual,
    Collective,
    Tdma,
    OuterIndividual,
    OuterCollective,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintRow {
    pub subset: UserSubset,
    pub kind: RowKind,
    pub rhs: f64,
}

impl ConstraintRow {
    /// Row coefficients. In split coordinates the layout is
    /// `(R^s_1..R^s_K, R^o_1..R^o_K)`; in total coordinates it is `R^δ_1..R^δ_K`.
    pub fn coefficients(&self, num_users: usize, total_coords: bool) -> Vec<f64> {
        let width = if total_coords { num_users } else { 2 * num_users };
        let mut c = vec![0.0; width];
        for k in self.subset.indices() {
            c[k] = 1.0;
            if !total_coords && self.kind == RowKind::Mac {
                c[num_users + k] = 1.0;
            }
        }
        c
    }

    pub fn label(&self) -> RowLabel {
        RowLabel {
            kind: self.kind,
            subset: self.subset,
        }
    }
}

/// Identifies a row by kind and subset, printed as e.g. `SECRECY{1,2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RowLabel {
    pub kind: RowKind,
    pub subset: UserSubset,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            RowKind::Secrecy => "SECRECY",
            RowKind::Mac => "MAC",
        };
        write!(f, "{k}{}", self.subset)
    }
}

/// A rate region at fixed transmit powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateConstraintSet {
    pub kind: RegionKind,
    pub num_users: usize,
    pub power: PowerVector,
    /// Time-sharing shares, present for TDMA regions.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shares: Option<Vec<f64>>,
    /// `None` for (secret, open) coordinates, `Some(δ)` for total-rate coordinates.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<f64>,
    pub rows: Vec<ConstraintRow>,
}

/// Outcome of a membership test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub inside: bool,
    /// First violated row in row order.
    pub violated: Option<RowLabel>,
}

/// A point to test against a region.
#[derive(Debug, Clone, Copy)]
pub enum RatePoint<'a> {
    Split(&'a RateVector),
    Total(&'a DeltaRateVector),
}

impl<'a> From<&'a RateVector> for RatePoint<'a> {
    fn from(r: &'a RateVector) -> Self {
        RatePoint::Split(r)
    }
}

impl<'a> From<&'a DeltaRateVector> for RatePoint<'a> {
    fn from(r: &'a DeltaRateVector) -> Self {
        RatePoint::Total(r)
    }
}

impl RateConstraintSet {
    pub fn is_total_coords(&self) -> bool {
        self.delta.is_some()
    }

    /// Rows of the given kind.
    pub fn rows_of(&self, kind: RowKind) -> impl Iterator<Item = &ConstraintRow> {
        self.rows.iter().filter(move |r| r.kind == kind)
    }

    /// Smallest right-hand side among rows on exactly this subset.
    pub fn bound_on(&self, subset: UserSubset, kind: RowKind) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.subset == subset && r.kind == kind)
            .map(|r| r.rhs)
            .reduce(f64::min)
    }

    pub fn membership<'a>(&self, point: impl Into<RatePoint<'a>>, tol: f64) -> Result<Membership> {
        let point = point.into();
        let k = self.num_users;
        let lhs: Box<dyn Fn(&ConstraintRow) -> f64 + '_> = match (point, self.delta) {
            (RatePoint::Split(r), None) => {
                if r.num_users() != k {
                    return Err(Error::DimensionMismatch {
                        expected: k,
                        found: r.num_users(),
                    });
                }
                Box::new(move |row: &ConstraintRow| match row.kind {
                    RowKind::Secrecy => row.subset.sum(&r.secret),
                    RowKind::Mac => row.subset.sum(&r.secret) + row.subset.sum(&r.open),
                })
            }
            (RatePoint::Total(r), Some(delta)) => {
                if r.total.len() != k {
                    return Err(Error::DimensionMismatch {
                        expected: k,
                        found: r.total.len(),
                    });
                }
                if (r.delta - delta).abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "point has delta {} but region has delta {delta}",
                        r.delta
                    )));
                }
                Box::new(move |row: &ConstraintRow| row.subset.sum(&r.total))
            }
            (RatePoint::Split(_), Some(_)) => {
                return Err(Error::InvalidInput(
                    "region is in total-rate coordinates; test a DeltaRateVector".into(),
                ))
            }
            (RatePoint::Total(_), None) => {
                return Err(Error::InvalidInput(
                    "region is in (secret, open) coordinates; test a RateVector".into(),
                ))
            }
        };
        let violated = self
            .rows
            .iter()
            .find(|row| lhs(row) > row.rhs + tol)
            .map(ConstraintRow::label);
        Ok(Membership {
            inside: violated.is_none(),
            violated,
        })
    }
}

fn prepare(std: &StandardChannel, p: &PowerVector) -> Result<Vec<UserSubset>> {
    p.check_feasible(std)?;
    nonempty_subsets(std.num_users)
}

fn mac_rows<'a>(p: &'a PowerVector, subsets: &'a [UserSubset]) -> impl Iterator<Item = ConstraintRow> + 'a {
    subsets.iter().map(move |&s| ConstraintRow {
        subset: s,
        kind: RowKind::Mac,
        rhs: cm(p, s),
    })
}

/// Region achievable with individual secrecy constraints at powers `p`.
pub fn individual_region_at(std: &StandardChannel, p: &PowerVector) -> Result<RateConstraintSet> {
    let subsets = prepare(std, p)?;
    let single: Vec<f64> = (0..std.num_users)
        .map(|k| cw(p, &std.h, UserSubset::singleton(k)))
        .collect();
    let mut rows: Vec<ConstraintRow> = subsets
        .iter()
        .map(|&s| ConstraintRow {
            subset: s,
            kind: RowKind::Secrecy,
            rhs: pos_part(cm(p, s) - s.sum(&single)),
        })
        .collect();
    rows.extend(mac_rows(p, &subsets));
    Ok(RateConstraintSet {
        kind: RegionKind::Individual,
        num_users: std.num_users,
        power: p.clone(),
        shares: None,
        delta: None,
        rows,
    })
}

/// Region achievable with collective secrecy constraints at powers `p`.
pub fn collective_region_at(std: &StandardChannel, p: &PowerVector) -> Result<RateConstraintSet> {
    let subsets = prepare(std, p)?;
    let full = UserSubset::full(std.num_users);
    let mut rows = vec![ConstraintRow {
        subset: full,
        kind: RowKind::Secrecy,
        rhs: pos_part(cm(p, full) - cw(p, &std.h, full)),
    }];
    rows.extend(mac_rows(p, &subsets));
    Ok(RateConstraintSet {
        kind: RegionKind::Collective,
        num_users: std.num_users,
        power: p.clone(),
        shares: None,
        delta: None,
        rows,
    })
}

/// Checks `α_k ∈ [0,1]` and `Σ α_k = 1`.
pub fn check_shares(alpha: &[f64]) -> Result<()> {
    let ok = alpha.iter().all(|a| a.is_finite() && (0.0..=1.0).contains(a))
        && (alpha.iter().sum::<f64>() - 1.0).abs() <= SHARE_SUM_TOL;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidShares(alpha.to_vec()))
    }
}

/// Single-user TDMA bounds for user `k`: `(secrecy, total)`.
pub(crate) fn tdma_user_bounds(h: f64, p: f64, alpha: f64) -> (f64, f64) {
    if alpha == 0.0 {
        return (0.0, 0.0);
    }
    // the argument is > -1 for any h, so the log is finite before clamping
    let secrecy = alpha * pos_part(half_log2_1p((1.0 - h) * p / (alpha + h * p)));
    let total = alpha * half_log2_1p(p / alpha);
    (secrecy, total)
}

/// TDMA region: user `k` transmits a fraction `α_k` of the time at power `P_k/α_k`.
pub fn tdma_region_at(
    std: &StandardChannel,
    p: &PowerVector,
    alpha: &[f64],
) -> Result<RateConstraintSet> {
    p.check_feasible(std)?;
    if alpha.len() != std.num_users {
        return Err(Error::DimensionMismatch {
            expected: std.num_users,
            found: alpha.len(),
        });
    }
    check_shares(alpha)?;
    let bounds: Vec<(f64, f64)> = (0..std.num_users)
        .map(|k| tdma_user_bounds(std.h[k], p[k], alpha[k]))
        .collect();
    let mut rows: Vec<ConstraintRow> = bounds
        .iter()
        .enumerate()
        .map(|(k, b)| ConstraintRow {
            subset: UserSubset::singleton(k),
            kind: RowKind::Secrecy,
            rhs: b.0,
        })
        .collect();
    rows.extend(bounds.iter().enumerate().map(|(k, b)| ConstraintRow {
        subset: UserSubset::singleton(k),
        kind: RowKind::Mac,
        rhs: b.1,
    }));
    Ok(RateConstraintSet {
        kind: RegionKind::Tdma,
        num_users: std.num_users,
        power: p.clone(),
        shares: Some(alpha.to_vec()),
        delta: None,
        rows,
    })
}

/// Total TDMA secrecy rate `Σ_k α_k [g((1-h_k)P_k/(α_k+h_kP_k))]⁺`.
pub fn tdma_secrecy_sum(std: &StandardChannel, p: &PowerVector, alpha: &[f64]) -> Result<f64> {
    Ok(tdma_region_at(std, p, alpha)?
        .rows_of(RowKind::Secrecy)
        .map(|r| r.rhs)
        .sum())
}

/// Outer bound for a degraded eavesdropper (`kind` must be an outer kind,
/// or `Individual`/`Collective` which are mapped onto their outer bounds).
pub fn outer_region_at(
    std: &StandardChannel,
    p: &PowerVector,
    kind: RegionKind,
) -> Result<RateConstraintSet> {
    require_degraded(std, DEFAULT_DEGRADED_TOL)?;
    let subsets = prepare(std, p)?;
    let (kind, mut rows) = match kind {
        RegionKind::Individual | RegionKind::OuterIndividual => (
            RegionKind::OuterIndividual,
            (0..std.num_users)
                .map(|k| {
                    let s = UserSubset::singleton(k);
                    ConstraintRow {
                        subset: s,
                        kind: RowKind::Secrecy,
                        rhs: cm(p, s) - cw(p, &std.h, s),
                    }
                })
                .collect::<Vec<_>>(),
        ),
        RegionKind::Collective | RegionKind::OuterCollective => {
            let full = UserSubset::full(std.num_users);
            (
                RegionKind::OuterCollective,
                vec![ConstraintRow {
                    subset: full,
                    kind: RowKind::Secrecy,
                    rhs: cm(p, full) - cw(p, &std.h, full),
                }],
            )
        }
        RegionKind::Tdma => {
            return Err(Error::InvalidInput(
                "no outer bound is defined for the TDMA region".into(),
            ))
        }
    };
    rows.extend(mac_rows(p, &subsets));
    Ok(RateConstraintSet {
        kind,
        num_users: std.num_users,
        power: p.clone(),
        shares: None,
        delta: None,
        rows,
    })
}

/// Re-expresses a region over total rates with at least a fraction `delta`
/// secret: secrecy right-hand sides scale by `1/δ`, MAC rows are unchanged.
pub fn delta_region(base: &RateConstraintSet, delta: f64) -> Result<RateConstraintSet> {
    if base.delta.is_some() {
        return Err(Error::InvalidInput(
            "region is already in total-rate coordinates".into(),
        ));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "delta must lie in (0,1], got {delta}; with delta = 0 use the MAC rows directly"
        )));
    }
    let rows = base
        .rows
        .iter()
        .map(|r| ConstraintRow {
            rhs: match r.kind {
                RowKind::Secrecy => r.rhs / delta,
                RowKind::Mac => r.rhs,
            },
            ..*r
        })
        .collect();
    Ok(RateConstraintSet {
        delta: Some(delta),
        rows,
        ..base.clone()
    })
}

/// Secrecy sum-capacity of the degraded channel with common gain `h` and
/// total power `total_power`: `g((1-h)P/(1+hP))`.
pub fn sum_capacity_degraded(h: f64, total_power: f64) -> Result<f64> {
    if !(h.is_finite() && (0.0..1.0).contains(&h)) {
        return Err(Error::InvalidInput(format!(
            "degraded sum-capacity needs 0 <= h < 1, got {h}"
        )));
    }
    if !(total_power.is_finite() && total_power >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "total power must be finite and nonnegative, got {total_power}"
        )));
    }
    Ok(half_log2_1p((1.0 - h) * total_power / (1.0 + h * total_power)))
}

//! Two-user region boundaries: union of fixed-power polygons over a power
//! (and time-sharing) grid, closed by a convex hull.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    collective_region_at, delta_region, individual_region_at, outer_region_at, tdma_region_at,
    RateConstraintSet, RegionKind, RowKind,
};
use crate::channel::{require_degraded, StandardChannel, DEFAULT_DEGRADED_TOL};
use crate::error::{Error, Result};
use crate::format::{fmt_sig, OUTPUT_SIG_DIGITS};
use crate::rates::{PowerVector, UserSubset};

pub const DEFAULT_POWER_RES: usize = 101;
pub const DEFAULT_ALPHA_RES: usize = 101;

type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    Individual,
    Collective,
    Tdma,
    /// Individual-constraint region together with TDMA.
    #[serde(rename = "union-i-t")]
    UnionIndividualTdma,
    OuterIndividual,
    OuterCollective,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 6] = [
        BoundaryKind::Individual,
        BoundaryKind::Collective,
        BoundaryKind::Tdma,
        BoundaryKind::UnionIndividualTdma,
        BoundaryKind::OuterIndividual,
        BoundaryKind::OuterCollective,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Individual => "individual",
            BoundaryKind::Collective => "collective",
            BoundaryKind::Tdma => "tdma",
            BoundaryKind::UnionIndividualTdma => "union-i-t",
            BoundaryKind::OuterIndividual => "outer-individual",
            BoundaryKind::OuterCollective => "outer-collective",
        }
    }

    fn uses_alpha(self) -> bool {
        matches!(self, BoundaryKind::Tdma | BoundaryKind::UnionIndividualTdma)
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        BoundaryKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| {
                let names: Vec<&str> = BoundaryKind::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidInput(format!(
                    "unknown region kind '{s}', expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Convex region in the `(R1, R2)` plane given by its hull vertices in
/// counterclockwise order, starting at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionBoundary2D {
    pub vertices: Vec<Point>,
    /// Number of polygon vertices fed into the hull.
    pub generator_count: usize,
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    let q = [a[0] + t * d[0], a[1] + t * d[1]];
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

impl RegionBoundary2D {
    /// Whether `pt` lies in the region, allowing a distance `tol` outside it.
    pub fn contains(&self, pt: Point, tol: f64) -> bool {
        let v = &self.vertices;
        match v.len() {
            0 => false,
            1 => dist_to_segment(pt, v[0], v[0]) <= tol,
            2 => dist_to_segment(pt, v[0], v[1]) <= tol,
            n => (0..n).all(|i| {
                let a = v[i];
                let b = v[(i + 1) % n];
                let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
                cross(a, b, pt) >= -tol * len
            }),
        }
    }

    /// Vertex maximising `R1 + R2`. Sums within a relative `1e-12` of the
    /// maximum count as ties, resolved to the first vertex in boundary order.
    pub fn max_sum_vertex(&self) -> Option<Point> {
        let m = self.max_sum_rate();
        let tol = 1e-12 * m.abs().max(1.0);
        self.vertices.iter().copied().find(|v| v[0] + v[1] >= m - tol)
    }

    pub fn max_sum_rate(&self) -> f64 {
        self.vertices.iter().map(|v| v[0] + v[1]).fold(0.0, f64::max)
    }

    /// CSV with header `R1,R2`, one vertex per line in boundary order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("R1,R2\n");
        for v in &self.vertices {
            out.push_str(&fmt_sig(v[0], OUTPUT_SIG_DIGITS));
            out.push(',');
            out.push_str(&fmt_sig(v[1], OUTPUT_SIG_DIGITS));
            out.push('\n');
        }
        out
    }
}

fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1]))
}

/// Monotone-chain convex hull. Collinear points are dropped; the result is
/// counterclockwise from the lexicographically smallest point.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points
        .iter()
        .copied()
        .filter(|p| p[0].is_finite() && p[1].is_finite())
        .collect();
    pts.sort_by(lex_cmp);
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn min_rhs(set: &RateConstraintSet, subset: UserSubset, mac_only: bool) -> f64 {
    set.rows
        .iter()
        .filter(|r| r.subset == subset && (!mac_only || r.kind == RowKind::Mac))
        .map(|r| r.rhs)
        .fold(f64::INFINITY, f64::min)
}

/// Vertices of a two-user fixed-power region in the `(R1, R2)` plane.
///
/// For a set in total-rate coordinates every row applies. For a set in
/// (secret, open) coordinates the projection onto per-user totals leaves
/// only the MAC rows, since any part of a rate may be sent in the open.
pub fn fixed_power_vertices(set: &RateConstraintSet) -> Result<Vec<Point>> {
    if set.num_users != 2 {
        return Err(Error::UserCount {
            expected: 2,
            found: set.num_users,
        });
    }
    let mac_only = !set.is_total_coords();
    let a = min_rhs(set, UserSubset::singleton(0), mac_only);
    let b = min_rhs(set, UserSubset::singleton(1), mac_only);
    let c = min_rhs(set, UserSubset::full(2), mac_only);
    let a = a.min(c).max(0.0);
    let b = b.min(c).max(0.0);
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput(
            "region is unbounded along an axis".into(),
        ));
    }
    Ok(vec![
        [0.0, 0.0],
        [a, 0.0],
        [a, b.min(c - a).max(0.0)],
        [a.min(c - b).max(0.0), b],
        [0.0, b],
    ])
}

fn grid(max: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { max } else { max * i as f64 / (n - 1) as f64 })
        .collect()
}

fn sets_at(
    std: &StandardChannel,
    kind: BoundaryKind,
    p: &PowerVector,
    alphas: &[f64],
) -> Result<Vec<RateConstraintSet>> {
    let tdma = |out: &mut Vec<RateConstraintSet>| -> Result<()> {
        for &a in alphas {
            out.push(tdma_region_at(std, p, &[a, 1.0 - a])?);
        }
        Ok(())
    };
    let mut out = Vec::new();
    match kind {
        BoundaryKind::Individual => out.push(individual_region_at(std, p)?),
        BoundaryKind::Collective => out.push(collective_region_at(std, p)?),
        BoundaryKind::Tdma => tdma(&mut out)?,
        BoundaryKind::UnionIndividualTdma => {
            out.push(individual_region_at(std, p)?);
            tdma(&mut out)?;
        }
        BoundaryKind::OuterIndividual => {
            out.push(outer_region_at(std, p, RegionKind::OuterIndividual)?)
        }
        BoundaryKind::OuterCollective => {
            out.push(outer_region_at(std, p, RegionKind::OuterCollective)?)
        }
    }
    Ok(out)
}

/// Boundary of the convex closure of the union of fixed-power regions over
/// a uniform power grid (and a time-sharing grid for TDMA kinds), in total
/// rates with at least a fraction `delta` secret. `delta = 0` drops every
/// secrecy row.
pub fn region_boundary_2d(
    std: &StandardChannel,
    kind: BoundaryKind,
    delta: f64,
    power_res: usize,
    alpha_res: usize,
) -> Result<RegionBoundary2D> {
    if std.num_users != 2 {
        return Err(Error::UserCount {
            expected: 2,
            found: std.num_users,
        });
    }
    if power_res < 2 || alpha_res < 2 {
        return Err(Error::InvalidInput(format!(
            "grid resolutions must be at least 2, got power {power_res}, alpha {alpha_res}"
        )));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidInput(format!("delta = {delta} outside [0,1]")));
    }
    if matches!(kind, BoundaryKind::OuterIndividual | BoundaryKind::OuterCollective) {
        require_degraded(std, DEFAULT_DEGRADED_TOL)?;
    }
    let p1 = grid(std.pmax[0], power_res);
    let p2 = grid(std.pmax[1], power_res);
    let alphas = if kind.uses_alpha() {
        grid(1.0, alpha_res)
    } else {
        Vec::new()
    };

    let rows: Vec<(Vec<Point>, usize)> = p1
        .par_iter()
        .map(|&x| -> Result<(Vec<Point>, usize)> {
            let mut pts = Vec::new();
            for &y in &p2 {
                let p = PowerVector::new(vec![x, y])?;
                for set in sets_at(std, kind, &p, &alphas)? {
                    let set = if delta > 0.0 { delta_region(&set, delta)? } else { set };
                    pts.extend(fixed_power_vertices(&set)?);
                }
            }
            let n = pts.len();
            Ok((convex_hull(&pts), n))
        })
        .collect::<Result<_>>()?;

    let generator_count = rows.iter().map(|r| r.1).sum();
    let merged: Vec<Point> = rows.into_iter().flat_map(|r| r.0).collect();
    Ok(RegionBoundary2D {
        vertices: convex_hull(&merged),
        generator_count,
    })
}

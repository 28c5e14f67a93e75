//! Two-user power allocation: the sum-rate maximiser, cooperative jamming,
//! optimal TDMA shares, and a brute-force grid oracle for checking them.
//!
//! The closed forms assume `h_1 <= h_2`. Every public entry point relabels
//! the users to satisfy that and restores the caller's order on output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rates::{half_log2_1p, PowerVector, NATS_PER_BIT};

/// Which objective a power allocation maximises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Objective {
    /// Both users send data: `g(P1+P2) - g(h1P1+h2P2)`.
    Sum,
    /// User 2 sends noise: `g(P1/(1+P2)) - g(h1P1/(1+h2P2))`.
    Jam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseLabel {
    BothTransmit,
    OneTransmits,
    None,
    JamAtRoot,
    JamAtMax,
    NoJam,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    pub p: [f64; 2],
    pub case_label: CaseLabel,
    /// Objective at `p`, clamped at zero.
    pub achieved_rate: f64,
    pub objective: Objective,
    /// `½log₂((1+P1+P2)/(1+h1P1+h2P2))` at the jamming allocation, reported
    /// for comparison with `achieved_rate`; it is not a rate this scheme attains.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theorem_capacity: Option<f64>,
}

/// Discriminant and roots of the jamming stationarity condition at `P1 = pmax1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JamAuxiliaries {
    pub rho: f64,
    pub phi2: f64,
    pub discriminant: f64,
    /// Larger root `p`; absent when the discriminant is negative.
    pub root_p: Option<f64>,
    /// Smaller root `p̄`.
    pub root_p_bar: Option<f64>,
}

/// Result of [`grid_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub p: [f64; 2],
    pub value: f64,
}

/// Local refinement around the coarse-grid incumbent: each pass searches a
/// window of one current step on either side at `factor` times finer spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    pub factor: usize,
    pub passes: usize,
}

impl Default for Refinement {
    fn default() -> Self {
        Refinement {
            factor: 10,
            passes: 2,
        }
    }
}

/// Smallest accepted oracle resolution.
pub const MIN_ORACLE_RES: usize = 11;

/// `ρ(P) = (1 + h1P1 + h2P2) / (1 + P1 + P2)`.
pub fn rho(p: [f64; 2], h: [f64; 2]) -> f64 {
    (1.0 + h[0] * p[0] + h[1] * p[1]) / (1.0 + p[0] + p[1])
}

/// `φ(p) = (1 + h p) / (1 + p)`.
pub fn phi(p: f64, h: f64) -> f64 {
    (1.0 + h * p) / (1.0 + p)
}

pub fn sum_objective(p: [f64; 2], h: [f64; 2]) -> f64 {
    half_log2_1p(p[0] + p[1]) - half_log2_1p(h[0] * p[0] + h[1] * p[1])
}

pub fn jam_objective(p: [f64; 2], h: [f64; 2]) -> f64 {
    half_log2_1p(p[0] / (1.0 + p[1])) - half_log2_1p(h[0] * p[0] / (1.0 + h[1] * p[1]))
}

pub fn objective_value(objective: Objective, p: [f64; 2], h: [f64; 2]) -> f64 {
    match objective {
        Objective::Sum => sum_objective(p, h),
        Objective::Jam => jam_objective(p, h),
    }
}

/// `ψ2 = N'M − NM'`, whose sign is the sign of `∂/∂P2` of the jamming objective.
pub fn psi2(p: [f64; 2], h: [f64; 2]) -> f64 {
    let [p1, p2] = p;
    let [h1, h2] = h;
    let n = (1.0 + h1 * p1 + h2 * p2) * (1.0 + p2);
    let m = (1.0 + p1 + p2) * (1.0 + h2 * p2);
    let dn = h2 * (1.0 + p2) + (1.0 + h1 * p1 + h2 * p2);
    let dm = (1.0 + h2 * p2) + h2 * (1.0 + p1 + p2);
    dn * m - n * dm
}

fn check_pair(name: &str, v: [f64; 2]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite() || *x < 0.0) {
        Some(i) => Err(Error::InvalidInput(format!(
            "{name}[{i}] = {} must be finite and nonnegative",
            v[i]
        ))),
        None => Ok(()),
    }
}

/// Relabels so that `h[0] <= h[1]`; returns whether the users were swapped.
fn sorted(h: [f64; 2], pmax: [f64; 2]) -> ([f64; 2], [f64; 2], bool) {
    if h[0] > h[1] {
        ([h[1], h[0]], [pmax[1], pmax[0]], true)
    } else {
        (h, pmax, false)
    }
}

fn unswap(p: [f64; 2], swapped: bool) -> [f64; 2] {
    if swapped {
        [p[1], p[0]]
    } else {
        p
    }
}

fn theorem_capacity(p: [f64; 2], h: [f64; 2]) -> f64 {
    0.5 * (((1.0 + p[0] + p[1]) / (1.0 + h[0] * p[0] + h[1] * p[1])).ln()) / NATS_PER_BIT
}

/// Power threshold on `h2` above which user 2 should stay silent.
pub fn sum_threshold(h1: f64, pmax1: f64) -> f64 {
    (1.0 + h1 * pmax1) / (1.0 + pmax1)
}

fn sum_sorted(h: [f64; 2], pmax: [f64; 2]) -> ([f64; 2], CaseLabel) {
    if h[0] < 1.0 {
        if h[1] < sum_threshold(h[0], pmax[0]) {
            (pmax, CaseLabel::BothTransmit)
        } else {
            ([pmax[0], 0.0], CaseLabel::OneTransmits)
        }
    } else {
        ([0.0, 0.0], CaseLabel::None)
    }
}

/// Powers maximising the collective secrecy sum-rate `g(P1+P2) − g(h1P1+h2P2)`.
pub fn optimal_powers_sum(h: [f64; 2], pmax: [f64; 2]) -> Result<PowerAllocation> {
    check_pair("h", h)?;
    check_pair("pmax", pmax)?;
    let (hs, ps, swapped) = sorted(h, pmax);
    let (p, case_label) = sum_sorted(hs, ps);
    Ok(PowerAllocation {
        p: unswap(p, swapped),
        case_label,
        achieved_rate: sum_objective(p, hs).max(0.0),
        objective: Objective::Sum,
        theorem_capacity: None,
    })
}

/// Roots of `ψ2(pmax1, ·)` with user 2 as the jammer; needs `h1 < h2`.
pub fn jam_roots(h: [f64; 2], pmax1: f64) -> Result<JamAuxiliaries> {
    check_pair("h", h)?;
    check_pair("pmax", [pmax1, 0.0])?;
    let [h1, h2] = h;
    if h1 >= h2 {
        return Err(Error::InvalidInput(format!(
            "jamming roots need h1 < h2, got h = ({h1}, {h2})"
        )));
    }
    let d = h1 * h2 * (h2 - 1.0) * ((h2 - 1.0) + (h2 - h1) * pmax1);
    let (root_p, root_p_bar) = if d >= 0.0 {
        let s = d.sqrt();
        let den = h2 * (h2 - h1);
        let b = -h2 * (1.0 - h1);
        (Some((b + s) / den), Some((b - s) / den))
    } else {
        (None, None)
    };
    let p2 = root_p.map_or(0.0, |r| r.max(0.0));
    Ok(JamAuxiliaries {
        rho: rho([pmax1, p2], h),
        phi2: phi(p2, h2),
        discriminant: d,
        root_p,
        root_p_bar,
    })
}

fn jam_label(p: [f64; 2], pmax2: f64) -> CaseLabel {
    if p[0] == 0.0 {
        CaseLabel::None
    } else if p[1] == 0.0 {
        CaseLabel::NoJam
    } else if p[1] >= pmax2 {
        CaseLabel::JamAtMax
    } else {
        CaseLabel::JamAtRoot
    }
}

/// Jamming power `min(p, pmax2)` clamped at zero.
fn jam_power(h: [f64; 2], pmax: [f64; 2]) -> f64 {
    let aux = jam_roots(h, pmax[0]).expect("validated gains with h1 < h2");
    aux.root_p.map_or(0.0, |r| r.min(pmax[1]).max(0.0))
}

/// Pure cooperative jamming: user 1 (smaller gain after relabelling) sends
/// data at full power while user 2 sends noise, or both stay silent.
/// Returns sorted-order powers.
fn jamming_sorted(h: [f64; 2], pmax: [f64; 2]) -> [f64; 2] {
    let [h1, h2] = h;
    if h1 == h2 {
        return if h1 >= 1.0 { [0.0, 0.0] } else { [pmax[0], 0.0] };
    }
    let p = if h1 <= 1.0 {
        if h2 > 1.0 {
            [pmax[0], jam_power(h, pmax)]
        } else {
            [pmax[0], 0.0]
        }
    } else if (h1 - 1.0) / (h2 - h1) < pmax[1] {
        [pmax[0], jam_power(h, pmax)]
    } else {
        [0.0, 0.0]
    };
    if p[0] == 0.0 {
        [0.0, 0.0]
    } else {
        p
    }
}

/// Best allocation when user 2 may only jam.
pub fn optimal_jamming(h: [f64; 2], pmax: [f64; 2]) -> Result<PowerAllocation> {
    check_pair("h", h)?;
    check_pair("pmax", pmax)?;
    let (hs, ps, swapped) = sorted(h, pmax);
    let p = jamming_sorted(hs, ps);
    Ok(PowerAllocation {
        p: unswap(p, swapped),
        case_label: jam_label(p, ps[1]),
        achieved_rate: jam_objective(p, hs).max(0.0),
        objective: Objective::Jam,
        theorem_capacity: Some(theorem_capacity(p, hs)),
    })
}

/// Secrecy-rate maximising allocation when user 2 may either send data or
/// jam. If both users have `h < 1` and user 2 is below the sum-rate
/// threshold, both transmit data; otherwise the jamming solution applies.
pub fn optimal_powers_jam(h: [f64; 2], pmax: [f64; 2]) -> Result<PowerAllocation> {
    check_pair("h", h)?;
    check_pair("pmax", pmax)?;
    let (hs, ps, _) = sorted(h, pmax);
    let defer = hs[0] < 1.0 && (hs[0] == hs[1] || hs[1] < sum_threshold(hs[0], ps[0]));
    if defer {
        optimal_powers_sum(h, pmax)
    } else {
        optimal_jamming(h, pmax)
    }
}

/// TDMA shares maximising the degraded secrecy sum: `α_k = P_k / Σ P`.
pub fn tdma_optimal_alpha(p: &PowerVector) -> Result<Vec<f64>> {
    let total = p.total();
    if total <= 0.0 {
        return Err(Error::InvalidInput(
            "optimal TDMA shares need a positive total power".into(),
        ));
    }
    Ok(p.as_slice().iter().map(|x| x / total).collect())
}

fn grid(max: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { max } else { max * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Larger value wins; equal values go to the lexicographically smaller point.
fn better(a: &OracleResult, b: &OracleResult) -> bool {
    a.value > b.value
        || (a.value == b.value
            && a.p[0].total_cmp(&b.p[0]).then(a.p[1].total_cmp(&b.p[1])).is_lt())
}

fn best_on(xs: &[f64], ys: &[f64], f: &(dyn Fn([f64; 2]) -> f64 + Sync)) -> OracleResult {
    xs.par_iter()
        .map(|&x| {
            let mut best: Option<OracleResult> = None;
            for &y in ys {
                let c = OracleResult {
                    p: [x, y],
                    value: f([x, y]),
                };
                if best.is_none_or(|b| better(&c, &b)) {
                    best = Some(c);
                }
            }
            best.expect("nonempty grid")
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("nonempty grid")
}

fn window(center: f64, step: f64, factor: usize, max: f64) -> Vec<f64> {
    let fine = step / factor as f64;
    let mut v: Vec<f64> = (0..=2 * factor)
        .map(|i| (center + (i as f64 - factor as f64) * fine).clamp(0.0, max))
        .collect();
    v.dedup();
    v
}

/// Exhaustive maximisation of `objective` over `[0,pmax1]×[0,pmax2]` on a
/// `res × res` uniform grid, followed by local refinement.
pub fn grid_oracle(
    objective: Objective,
    h: [f64; 2],
    pmax: [f64; 2],
    res: usize,
    refinement: Refinement,
) -> Result<OracleResult> {
    check_pair("h", h)?;
    check_pair("pmax", pmax)?;
    if res < MIN_ORACLE_RES {
        return Err(Error::InvalidInput(format!(
            "oracle resolution must be at least {MIN_ORACLE_RES}, got {res}"
        )));
    }
    if refinement.passes > 0 && refinement.factor < 2 {
        return Err(Error::InvalidInput(
            "refinement factor must be at least 2".into(),
        ));
    }
    let (hs, ps, swapped) = sorted(h, pmax);
    let f = move |p: [f64; 2]| objective_value(objective, p, hs);
    let mut best = best_on(&grid(ps[0], res), &grid(ps[1], res), &f);
    let mut step = [ps[0] / (res - 1) as f64, ps[1] / (res - 1) as f64];
    for _ in 0..refinement.passes {
        let xs = window(best.p[0], step[0], refinement.factor, ps[0]);
        let ys = window(best.p[1], step[1], refinement.factor, ps[1]);
        let cand = best_on(&xs, &ys, &f);
        if better(&cand, &best) {
            best = cand;
        }
        step = [step[0] / refinement.factor as f64, step[1] / refinement.factor as f64];
    }
    Ok(OracleResult {
        p: unswap(best.p, swapped),
        value: best.value,
    })
}

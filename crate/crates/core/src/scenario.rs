//! Mobile-eavesdropper sweep: two users and a base station on a floor plan,
//! an eavesdropper placed at every grid cell, path-loss channel gains, and
//! the secrecy sum-rate with and without cooperative jamming at each cell.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{standardize, RawChannelConfig};
use crate::error::{Error, Result};
use crate::format::{fmt_sig, OUTPUT_SIG_DIGITS};
use crate::optimizer::{optimal_powers_jam, optimal_powers_sum, CaseLabel};

/// Rates at or below this count as zero in the summary.
pub const ZERO_RATE_TOL: f64 = 1e-9;

/// Distance bins used by the jam-power diagnostic.
const DISTANCE_BINS: usize = 10;

pub const CSV_HEADER: &str = "x,y,P1,P2,sumrate_jam,sumrate_nojam,case";

fn default_exponent() -> f64 {
    2.0
}

fn default_min_distance() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Cells along x and y.
    pub grid: [usize; 2],
    /// Width and height of the floor plan.
    pub area: [f64; 2],
    pub base_station: [f64; 2],
    pub users: Vec<[f64; 2]>,
    #[serde(default = "default_exponent")]
    pub pathloss_exponent: f64,
    #[serde(default = "default_min_distance")]
    pub min_distance: f64,
    pub power_limits: Vec<f64>,
    pub noise_var_main: f64,
    pub noise_var_tap: f64,
}

fn in_area(p: [f64; 2], area: [f64; 2]) -> bool {
    p.iter().all(|v| v.is_finite()) && (0.0..=area[0]).contains(&p[0]) && (0.0..=area[1]).contains(&p[1])
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.grid.contains(&0) {
            return bad(format!("grid {:?} must be positive", self.grid));
        }
        if !self.area.iter().all(|a| a.is_finite() && *a > 0.0) {
            return bad(format!("area {:?} must be positive", self.area));
        }
        if self.users.len() != 2 {
            return Err(Error::UserCount {
                expected: 2,
                found: self.users.len(),
            });
        }
        if !in_area(self.base_station, self.area) {
            return bad(format!("base station {:?} lies outside the area", self.base_station));
        }
        if let Some(i) = self.users.iter().position(|&u| !in_area(u, self.area)) {
            return bad(format!("user {} at {:?} lies outside the area", i + 1, self.users[i]));
        }
        if !(self.pathloss_exponent.is_finite() && self.pathloss_exponent > 0.0) {
            return bad(format!("pathloss_exponent = {} must be positive", self.pathloss_exponent));
        }
        if !(self.min_distance.is_finite() && self.min_distance > 0.0) {
            return bad(format!("min_distance = {} must be positive", self.min_distance));
        }
        // power and noise checks are shared with the channel description
        self.raw_channel([1.0, 1.0], [1.0, 1.0]).map(|_| ())
    }

    fn gain(&self, d: f64) -> f64 {
        d.max(self.min_distance).powf(-self.pathloss_exponent)
    }

    fn raw_channel(&self, main: [f64; 2], tap: [f64; 2]) -> Result<RawChannelConfig> {
        RawChannelConfig::new(
            2,
            main.to_vec(),
            tap.to_vec(),
            self.noise_var_main,
            self.noise_var_tap,
            self.power_limits.clone(),
        )
    }

    /// Centre of cell `(ix, iy)`.
    pub fn cell_center(&self, ix: usize, iy: usize) -> [f64; 2] {
        [
            (ix as f64 + 0.5) * self.area[0] / self.grid[0] as f64,
            (iy as f64 + 0.5) * self.area[1] / self.grid[1] as f64,
        ]
    }
}

/// Physical channel seen with the eavesdropper at `eaves`.
pub fn gains_at(cfg: &ScenarioConfig, eaves: [f64; 2]) -> Result<RawChannelConfig> {
    if !in_area(eaves, cfg.area) {
        return Err(Error::InvalidInput(format!(
            "eavesdropper position {eaves:?} lies outside the area"
        )));
    }
    let main = [0, 1].map(|k| cfg.gain(distance(cfg.users[k], cfg.base_station)));
    let tap = [0, 1].map(|k| cfg.gain(distance(cfg.users[k], eaves)));
    cfg.raw_channel(main, tap)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub x: f64,
    pub y: f64,
    #[serde(rename = "P1")]
    pub p1: f64,
    #[serde(rename = "P2")]
    pub p2: f64,
    pub sumrate_jam: f64,
    pub sumrate_nojam: f64,
    pub case: CaseLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceBin {
    pub distance_lo: f64,
    pub distance_hi: f64,
    pub cells: usize,
    /// Mean jamming power (standardized units) over the bin; 0 where nobody jams.
    pub mean_jam_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub cells: usize,
    pub zero_rate_cells_jam: usize,
    pub zero_rate_cells_nojam: usize,
    pub mean_sumrate_jam: f64,
    pub mean_sumrate_nojam: f64,
    /// Jam power against eavesdropper distance to the base station.
    pub jam_power_by_bs_distance: Vec<DistanceBin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub records: Vec<CellRecord>,
    pub summary: ScenarioSummary,
}

impl ScenarioResult {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        w.write_record(CSV_HEADER.split(',')).map_err(io)?;
        for r in &self.records {
            let case = serde_json::to_value(r.case).expect("label serializes");
            let nums = [r.x, r.y, r.p1, r.p2, r.sumrate_jam, r.sumrate_nojam]
                .map(|v| fmt_sig(v, OUTPUT_SIG_DIGITS));
            w.write_record(nums.iter().map(String::as_str).chain([case.as_str().unwrap_or("")]))
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

struct Cell {
    record: CellRecord,
    jam_power: f64,
    bs_distance: f64,
}

fn evaluate(cfg: &ScenarioConfig, ix: usize, iy: usize) -> Result<Cell> {
    let pos = cfg.cell_center(ix, iy);
    let std = standardize(&gains_at(cfg, pos)?)?;
    let h = [std.h[0], std.h[1]];
    let pmax = [std.pmax[0], std.pmax[1]];
    let nojam = optimal_powers_sum(h, pmax)?;
    let jam = optimal_powers_jam(h, pmax)?;
    let jam_power = match jam.case_label {
        CaseLabel::JamAtRoot | CaseLabel::JamAtMax => {
            if h[0] > h[1] {
                jam.p[0]
            } else {
                jam.p[1]
            }
        }
        _ => 0.0,
    };
    Ok(Cell {
        record: CellRecord {
            x: pos[0],
            y: pos[1],
            p1: jam.p[0],
            p2: jam.p[1],
            sumrate_jam: jam.achieved_rate,
            sumrate_nojam: nojam.achieved_rate,
            case: jam.case_label,
        },
        jam_power,
        bs_distance: distance(pos, cfg.base_station),
    })
}

fn summarize(cells: &[Cell]) -> ScenarioSummary {
    let n = cells.len();
    let zero = |f: fn(&CellRecord) -> f64| cells.iter().filter(|c| f(&c.record) <= ZERO_RATE_TOL).count();
    let mean = |f: fn(&CellRecord) -> f64| cells.iter().map(|c| f(&c.record)).sum::<f64>() / n as f64;
    let dmax = cells.iter().map(|c| c.bs_distance).fold(0.0, f64::max);
    let width = if dmax > 0.0 { dmax / DISTANCE_BINS as f64 } else { 1.0 };
    let mut bins: Vec<(usize, f64)> = vec![(0, 0.0); DISTANCE_BINS];
    for c in cells {
        let b = ((c.bs_distance / width) as usize).min(DISTANCE_BINS - 1);
        bins[b].0 += 1;
        bins[b].1 += c.jam_power;
    }
    ScenarioSummary {
        cells: n,
        zero_rate_cells_jam: zero(|r| r.sumrate_jam),
        zero_rate_cells_nojam: zero(|r| r.sumrate_nojam),
        mean_sumrate_jam: mean(|r| r.sumrate_jam),
        mean_sumrate_nojam: mean(|r| r.sumrate_nojam),
        jam_power_by_bs_distance: bins
            .into_iter()
            .enumerate()
            .filter(|(_, (count, _))| *count > 0)
            .map(|(i, (count, total))| DistanceBin {
                distance_lo: i as f64 * width,
                distance_hi: (i + 1) as f64 * width,
                cells: count,
                mean_jam_power: total / count as f64,
            })
            .collect(),
    }
}

/// Evaluates every cell, row-major with `y` as the outer index.
pub fn sweep(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    cfg.validate()?;
    let [nx, ny] = cfg.grid;
    let cells: Vec<Cell> = (0..nx * ny)
        .into_par_iter()
        .map(|i| {
            let (ix, iy) = (i % nx, i / nx);
            evaluate(cfg, ix, iy).map_err(|e| Error::Cell {
                ix,
                iy,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let summary = summarize(&cells);
    Ok(ScenarioResult {
        records: cells.into_iter().map(|c| c.record).collect(),
        summary,
    })
}

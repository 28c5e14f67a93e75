//! Sweep an eavesdropper over the floor plan in `data/scenario_example.json`.

use std::error::Error;

use wiretap::scenario::{sweep, ScenarioConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let text = include_str!("../data/scenario_example.json");
    let mut cfg = ScenarioConfig::from_json(text)?;
    cfg.grid = [40, 40];
    let res = sweep(&cfg)?;
    let s = &res.summary;
    println!(
        "{} cells: zero secrecy rate in {} without jamming, {} with",
        s.cells, s.zero_rate_cells_nojam, s.zero_rate_cells_jam
    );
    println!("mean sum-rate {:.4} -> {:.4}", s.mean_sumrate_nojam, s.mean_sumrate_jam);
    for b in &s.jam_power_by_bs_distance {
        println!(
            "  BS distance {:>5.1}..{:>5.1}: {:>4} cells, mean jam power {:.3}",
            b.distance_lo, b.distance_hi, b.cells, b.mean_jam_power
        );
    }
    let csv = res.to_csv()?;
    for line in csv.lines().take(4) {
        println!("{line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

//! Map a physical two-user channel onto standard form and test degradedness.

use std::error::Error;

use wiretap::channel::DEFAULT_DEGRADED_TOL;
use wiretap::{check_degraded, standardize, RawChannelConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let raw = RawChannelConfig::from_json(
        r#"{
            "num_users": 2,
            "gains_main": [4.0, 1.0],
            "gains_tap": [1.0, 1.0],
            "noise_var_main": 2.0,
            "noise_var_tap": 1.0,
            "power_limits": [1.0, 1.0]
        }"#,
    )?;
    let std = standardize(&raw)?;
    println!("h    = {:?}", std.h);
    println!("pmax = {:?}", std.pmax);

    let report = check_degraded(&std, DEFAULT_DEGRADED_TOL);
    println!("degraded: {} (gain spread {})", report.is_degraded, report.max_gain_spread);

    // equal tap gains and a quieter main receiver: degraded
    let raw = RawChannelConfig::new(2, vec![1.0, 1.0], vec![0.5, 0.5], 1.0, 1.0, vec![2.0, 2.0])?;
    let report = check_degraded(&standardize(&raw)?, DEFAULT_DEGRADED_TOL);
    println!("second channel common h = {:?}", report.common_h);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

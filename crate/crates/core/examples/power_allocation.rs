//! Sum-rate maximising powers for each case, checked against the grid oracle.

use std::error::Error;

use wiretap::optimizer::{grid_oracle, optimal_powers_sum, Objective, Refinement};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let pmax = [10.0, 10.0];
    for h in [[0.25, 0.3], [0.25, 0.5], [1.2, 1.5]] {
        let a = optimal_powers_sum(h, pmax)?;
        let o = grid_oracle(Objective::Sum, h, pmax, 101, Refinement::default())?;
        println!(
            "h = {h:?}: P* = {:?} {:?}, rate {:.6}, oracle {:.6} at {:?}",
            a.p, a.case_label, a.achieved_rate, o.value, o.p
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

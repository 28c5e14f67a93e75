//! Cooperative jamming: when the worse user should send noise, and how much.

use std::error::Error;

use wiretap::optimizer::{jam_roots, optimal_powers_jam, optimal_powers_sum, psi2};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (h, pmax) = ([0.5, 2.0], [10.0, 10.0]);
    let aux = jam_roots(h, pmax[0])?;
    println!(
        "D = {}, p = {:?}, p̄ = {:?}, ψ2 at p = {:.1e}",
        aux.discriminant,
        aux.root_p,
        aux.root_p_bar,
        psi2([pmax[0], aux.root_p.unwrap_or(0.0)], h)
    );

    for (h, pmax) in [
        ([0.5, 2.0], [10.0, 10.0]),
        ([0.5, 2.0], [10.0, 0.3]),
        ([0.5, 0.8], [10.0, 10.0]),
        ([1.5, 3.0], [10.0, 10.0]),
        ([2.0, 3.0], [10.0, 0.5]),
    ] {
        let jam = optimal_powers_jam(h, pmax)?;
        let plain = optimal_powers_sum(h, pmax)?;
        println!(
            "h = {h:?} pmax = {pmax:?}: {:?} P = {:?} rate {:.6} (no jamming {:.6})",
            jam.case_label, jam.p, jam.achieved_rate, plain.achieved_rate
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

//! Two-user region boundaries over a power grid, printed as CSV.

use std::error::Error;

use wiretap::regions::{region_boundary_2d, BoundaryKind};
use wiretap::StandardChannel;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let std = StandardChannel::new(vec![0.3, 0.6], vec![2.0, 2.0])?;
    for kind in [
        BoundaryKind::Individual,
        BoundaryKind::Tdma,
        BoundaryKind::UnionIndividualTdma,
        BoundaryKind::Collective,
    ] {
        let b = region_boundary_2d(&std, kind, 1.0, 41, 41)?;
        println!(
            "{kind:<12} {:>3} vertices from {:>6} generators, max R1+R2 = {:.6}",
            b.vertices.len(),
            b.generator_count,
            b.max_sum_rate()
        );
    }

    // with half the rate allowed in the open the region grows toward the MAC
    let b = region_boundary_2d(&std, BoundaryKind::Collective, 0.5, 41, 2)?;
    print!("{}", b.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

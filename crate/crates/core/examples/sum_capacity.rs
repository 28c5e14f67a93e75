//! Degraded secrecy sum-capacity and how TDMA reaches it.

use std::error::Error;

use wiretap::optimizer::tdma_optimal_alpha;
use wiretap::regions::{collective_region_at, sum_capacity_degraded, tdma_secrecy_sum};
use wiretap::{PowerVector, StandardChannel};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let h = 0.5;
    for total in [1.0, 10.0, 100.0, 1e4, 1e6] {
        println!("P = {total:>9}: C = {:.6}", sum_capacity_degraded(h, total)?);
    }
    println!("limit -½log₂h = {:.6}", -0.5 * f64::log2(h));

    let std = StandardChannel::new(vec![h, h], vec![1.0, 3.0])?;
    let p = PowerVector::full(&std);
    let alpha = tdma_optimal_alpha(&p)?;
    println!("α* = {alpha:?}");
    println!("TDMA at α*      = {:.12}", tdma_secrecy_sum(&std, &p, &alpha)?);
    println!("collective RHS  = {:.12}", collective_region_at(&std, &p)?.rows[0].rhs);
    println!("TDMA at (.5,.5) = {:.12}", tdma_secrecy_sum(&std, &p, &[0.5, 0.5])?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

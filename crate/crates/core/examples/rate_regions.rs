//! Fixed-power constraint sets, membership tests and the δ-secrecy view.

use std::error::Error;

use wiretap::regions::{
    collective_region_at, delta_region, individual_region_at, outer_region_at, tdma_region_at,
    RowKind,
};
use wiretap::{DeltaRateVector, PowerVector, RateVector, RegionKind, StandardChannel};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let std = StandardChannel::new(vec![0.5, 0.5], vec![2.0, 2.0])?;
    let p = PowerVector::full(&std);

    let ind = individual_region_at(&std, &p)?;
    let col = collective_region_at(&std, &p)?;
    for (name, set) in [("individual", &ind), ("collective", &col)] {
        println!("{name}:");
        for row in &set.rows {
            println!("  {:<14} <= {:.6}", row.label().to_string(), row.rhs);
        }
    }

    let tdma = tdma_region_at(&std, &p, &[0.5, 0.5])?;
    let per_user: Vec<f64> = tdma.rows_of(RowKind::Secrecy).map(|r| r.rhs).collect();
    println!("tdma secrecy bounds at α = (0.5, 0.5): {per_user:.6?}");

    let outer = outer_region_at(&std, &p, RegionKind::Collective)?;
    println!("outer collective secrecy bound: {:.6}", outer.rows[0].rhs);

    let r = RateVector::secret_only(vec![0.369, 0.0])?;
    let m = col.membership(&r, 1e-6)?;
    println!("(0.369, 0) in collective: {} (violates {:?})", m.inside, m.violated.map(|l| l.to_string()));

    let half = delta_region(&col, 0.5)?;
    let t = DeltaRateVector::new(vec![0.7, 0.0], 0.5)?;
    println!("total (0.7, 0) half-secret: {}", half.membership(&t, 1e-9)?.inside);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

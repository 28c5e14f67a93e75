//! Extra randomisation rates that make a secret/open rate pair achievable.

use std::error::Error;

use wiretap::regions::{rate_split_collective, rate_split_individual, SplitOutcome};
use wiretap::{PowerVector, RateVector, StandardChannel};

fn show(label: &str, out: &SplitOutcome) {
    match out {
        SplitOutcome::Witness(w) => println!("{label}: R^x = {:.6?}", w.extra),
        SplitOutcome::Infeasible { binding } => println!("{label}: infeasible, {binding} binds"),
    }
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let std = StandardChannel::new(vec![0.5, 0.5], vec![2.0, 2.0])?;
    let p = PowerVector::full(&std);

    let corner = RateVector::secret_only(vec![0.368_482_797_083_103, 0.0])?;
    show("collective corner", &rate_split_collective(&std, &p, &corner)?);

    let mixed = RateVector::new(vec![0.1, 0.2], vec![0.3, 0.0])?;
    show("collective mixed", &rate_split_collective(&std, &p, &mixed)?);

    let r = RateVector::secret_only(vec![0.16, 0.0])?;
    show("individual", &rate_split_individual(&std, &p, &r)?);

    let r = RateVector::secret_only(vec![0.3, 0.3])?;
    show("individual too fast", &rate_split_individual(&std, &p, &r)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

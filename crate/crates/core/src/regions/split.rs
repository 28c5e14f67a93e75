//! Rate splitting: the extra (randomisation) rates `R^x_k` that make a rate
//! vector achievable by the superposition scheme.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::lp::{LinearProgram, LpOutcome};
use super::{collective_region_at, individual_region_at, RateVector, RowKind};
use crate::channel::StandardChannel;
use crate::error::{Error, Result};
use crate::rates::{cm, cw, nonempty_subsets, PowerVector, UserSubset};

/// Largest user count accepted by the rate-splitting solvers.
pub const MAX_SPLIT_USERS: usize = 8;

/// Absolute slack on every feasibility check.
const SPLIT_TOL: f64 = 1e-12;

/// The constraint that rules a rate vector out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "row", content = "subset", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BindingConstraint {
    /// A secrecy row of the region itself.
    Secrecy(UserSubset),
    /// A receiver decodability row once the extra rates are added.
    Mac(UserSubset),
    /// Open rates already exceed what the eavesdropper can absorb, so the
    /// extra rates would have to be negative.
    Equivocation(UserSubset),
}

impl fmt::Display for BindingConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BindingConstraint::Secrecy(s) => write!(f, "SECRECY{s}"),
            BindingConstraint::Mac(s) => write!(f, "MAC{s}"),
            BindingConstraint::Equivocation(s) => write!(f, "EQUIVOCATION{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitWitness {
    /// Extra rate `R^x_k` per user.
    pub extra: Vec<f64>,
    /// Whether the secret rates sit on the region's secrecy boundary.
    pub on_secrecy_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SplitOutcome {
    Witness(SplitWitness),
    Infeasible { binding: BindingConstraint },
}

impl SplitOutcome {
    pub fn witness(&self) -> Option<&SplitWitness> {
        match self {
            SplitOutcome::Witness(w) => Some(w),
            SplitOutcome::Infeasible { .. } => None,
        }
    }
}

fn check_inputs(std: &StandardChannel, p: &PowerVector, r: &RateVector) -> Result<()> {
    if std.num_users > MAX_SPLIT_USERS {
        return Err(Error::TooManyUsers {
            users: std.num_users,
            max: MAX_SPLIT_USERS,
        });
    }
    p.check_feasible(std)?;
    if r.num_users() != std.num_users {
        return Err(Error::DimensionMismatch {
            expected: std.num_users,
            found: r.num_users(),
        });
    }
    RateVector::new(r.secret.clone(), r.open.clone()).map(|_| ())
}

/// First MAC row violated by `R^s + R^o + R^x`.
fn violated_mac(p: &PowerVector, r: &RateVector, extra: &[f64]) -> Result<Option<UserSubset>> {
    let k = r.num_users();
    Ok(nonempty_subsets(k)?.into_iter().find(|&s| {
        s.sum(&r.secret) + s.sum(&r.open) + s.sum(extra) > cm(p, s) + SPLIT_TOL
    }))
}

/// Extra rates for the collective-secrecy scheme: nonnegative `R^x` with
/// `Σ_k (R^o_k + R^x_k) = C^W_K` and every MAC row satisfied. Among all
/// such allocations the lexicographically smallest is returned.
///
/// When no secret rate is requested there is nothing to hide and `R^x = 0`.
pub fn rate_split_collective(
    std: &StandardChannel,
    p: &PowerVector,
    r: &RateVector,
) -> Result<SplitOutcome> {
    check_inputs(std, p, r)?;
    let k = std.num_users;
    let full = UserSubset::full(k);
    let region = collective_region_at(std, p)?;
    let secrecy_rhs = region.rows[0].rhs;
    let secret_sum = full.sum(&r.secret);
    if secret_sum > secrecy_rhs + SPLIT_TOL {
        return Ok(SplitOutcome::Infeasible {
            binding: BindingConstraint::Secrecy(full),
        });
    }
    let on_secrecy_boundary = (secret_sum - secrecy_rhs).abs() <= SPLIT_TOL;

    if secret_sum == 0.0 {
        let extra = vec![0.0; k];
        return Ok(match violated_mac(p, r, &extra)? {
            Some(s) => SplitOutcome::Infeasible {
                binding: BindingConstraint::Mac(s),
            },
            None => SplitOutcome::Witness(SplitWitness {
                extra,
                on_secrecy_boundary,
            }),
        });
    }

    let need = cw(p, &std.h, full) - full.sum(&r.open);
    if need < -SPLIT_TOL {
        return Ok(SplitOutcome::Infeasible {
            binding: BindingConstraint::Equivocation(full),
        });
    }
    let need = need.max(0.0);

    let subsets = nonempty_subsets(k)?;
    let slack: Vec<f64> = subsets
        .iter()
        .map(|&s| cm(p, s) - s.sum(&r.secret) - s.sum(&r.open))
        .collect();
    if let Some(i) = slack.iter().position(|&f| f < -SPLIT_TOL) {
        return Ok(SplitOutcome::Infeasible {
            binding: BindingConstraint::Mac(subsets[i]),
        });
    }

    let build = |upto: usize| {
        let mut lp = LinearProgram::new(k);
        lp.add_eq(vec![1.0; k], need);
        for (s, f) in subsets.iter().zip(&slack).take(upto) {
            let coeffs = (0..k).map(|j| if s.contains(j) { 1.0 } else { 0.0 }).collect();
            lp.add_le(coeffs, f.max(0.0));
        }
        lp
    };
    match build(subsets.len()).lex_min() {
        LpOutcome::Optimal(mut extra) => {
            for x in extra.iter_mut() {
                if *x < SPLIT_TOL {
                    *x = 0.0;
                }
            }
            Ok(SplitOutcome::Witness(SplitWitness {
                extra,
                on_secrecy_boundary,
            }))
        }
        LpOutcome::Infeasible => {
            // Name the first MAC row whose addition makes the system infeasible.
            let i = (1..=subsets.len())
                .find(|&n| build(n).lex_min() == LpOutcome::Infeasible)
                .unwrap_or(subsets.len());
            Ok(SplitOutcome::Infeasible {
                binding: BindingConstraint::Mac(subsets[i - 1]),
            })
        }
    }
}

/// Extra rates for the individual-secrecy scheme: `R^x_k = C^W_k − R^o_k`
/// for users sending a secret message and `R^x_k = 0` for the others.
pub fn rate_split_individual(
    std: &StandardChannel,
    p: &PowerVector,
    r: &RateVector,
) -> Result<SplitOutcome> {
    check_inputs(std, p, r)?;
    let k = std.num_users;
    let region = individual_region_at(std, p)?;
    let mut on_secrecy_boundary = false;
    for row in region.rows_of(RowKind::Secrecy) {
        let lhs = row.subset.sum(&r.secret);
        if lhs > row.rhs + SPLIT_TOL {
            return Ok(SplitOutcome::Infeasible {
                binding: BindingConstraint::Secrecy(row.subset),
            });
        }
        on_secrecy_boundary |= lhs > 0.0 && (lhs - row.rhs).abs() <= SPLIT_TOL;
    }
    let mut extra = vec![0.0; k];
    for j in 0..k {
        if r.secret[j] > 0.0 {
            let s = UserSubset::singleton(j);
            let x = cw(p, &std.h, s) - r.open[j];
            if x < -SPLIT_TOL {
                return Ok(SplitOutcome::Infeasible {
                    binding: BindingConstraint::Equivocation(s),
                });
            }
            extra[j] = x.max(0.0);
        }
    }
    Ok(match violated_mac(p, r, &extra)? {
        Some(s) => SplitOutcome::Infeasible {
            binding: BindingConstraint::Mac(s),
        },
        None => SplitOutcome::Witness(SplitWitness {
            extra,
            on_secrecy_boundary,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const COL: f64 = 0.368_482_797_083_103_1;
    const G2: f64 = 0.792_481_250_360_578_1;

    fn setup() -> (StandardChannel, PowerVector) {
        (
            StandardChannel::new(vec![0.5, 0.5], vec![2.0, 2.0]).unwrap(),
            PowerVector::new(vec![2.0, 2.0]).unwrap(),
        )
    }

    #[test]
    fn collective_boundary_point() {
        let (std, p) = setup();
        let r = RateVector::secret_only(vec![COL, 0.0]).unwrap();
        let out = rate_split_collective(&std, &p, &r).unwrap();
        let w = out.witness().expect("feasible");
        assert!((w.extra.iter().sum::<f64>() - G2).abs() < 1e-12);
        assert!(w.on_secrecy_boundary);
        assert!(violated_mac(&p, &r, &w.extra).unwrap().is_none());
        // lexicographically smallest: user 1 gets as little as the MAC rows allow
        assert!(w.extra[0] < w.extra[1]);
    }

    #[test]
    fn collective_rejections() {
        let (std, p) = setup();
        let r = RateVector::secret_only(vec![0.2, 0.2]).unwrap();
        let out = rate_split_collective(&std, &p, &r).unwrap();
        assert_eq!(
            out,
            SplitOutcome::Infeasible {
                binding: BindingConstraint::Secrecy(UserSubset::full(2))
            }
        );
        let r = RateVector::new(vec![0.1, 0.0], vec![0.5, 0.5]).unwrap();
        let out = rate_split_collective(&std, &p, &r).unwrap();
        assert!(matches!(
            out,
            SplitOutcome::Infeasible {
                binding: BindingConstraint::Equivocation(_)
            }
        ));
    }

    #[test]
    fn collective_zero_power() {
        let (std, _) = setup();
        let p = PowerVector::zeros(2);
        let r = RateVector::secret_only(vec![0.0, 0.0]).unwrap();
        let w = rate_split_collective(&std, &p, &r).unwrap();
        assert_eq!(w.witness().unwrap().extra, vec![0.0, 0.0]);
    }

    #[test]
    fn individual_examples() {
        let (std, p) = setup();
        let r = RateVector::secret_only(vec![0.16, 0.0]).unwrap();
        let w = rate_split_individual(&std, &p, &r).unwrap();
        let w = w.witness().unwrap();
        assert!((w.extra[0] - 0.5).abs() < 1e-15);
        assert_eq!(w.extra[1], 0.0);

        let r = RateVector::new(vec![0.0, 0.1], vec![0.3, 0.0]).unwrap();
        let w = rate_split_individual(&std, &p, &r).unwrap();
        assert_eq!(w.witness().unwrap().extra[0], 0.0);

        let r = RateVector::secret_only(vec![0.3, 0.3]).unwrap();
        let out = rate_split_individual(&std, &p, &r).unwrap();
        assert!(matches!(
            out,
            SplitOutcome::Infeasible {
                binding: BindingConstraint::Secrecy(_)
            }
        ));
    }

    #[test]
    fn input_validation() {
        let (std, p) = setup();
        let r = RateVector::secret_only(vec![0.1]).unwrap();
        assert!(rate_split_collective(&std, &p, &r).is_err());
        let big = StandardChannel::new(vec![0.5; 9], vec![1.0; 9]).unwrap();
        let r = RateVector::secret_only(vec![0.0; 9]).unwrap();
        assert!(matches!(
            rate_split_collective(&big, &PowerVector::zeros(9), &r),
            Err(Error::TooManyUsers { .. })
        ));
    }

    #[test]
    fn binding_labels_display() {
        let s = UserSubset::full(2);
        assert_eq!(BindingConstraint::Mac(s).to_string(), "MAC{1,2}");
        let v = serde_json::to_value(SplitOutcome::Infeasible {
            binding: BindingConstraint::Secrecy(s),
        })
        .unwrap();
        assert_eq!(v["status"], "INFEASIBLE");
        assert_eq!(v["binding"]["row"], "SECRECY");
    }
}

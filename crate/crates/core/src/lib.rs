//! Secrecy rate regions, outer bounds, sum-capacities and transmit/jamming
//! power allocation for the Gaussian multiple-access wiretap channel.
//!
//! The crate works on the *standard form* of the channel: unit noise at both
//! receivers, unit main-channel gains, and per-user eavesdropper gains `h_k`
//! with power limits `pmax_k`. [`channel::standardize`] maps a physical
//! description onto that form.
//!
//! * [`rates`] holds the elementary capacity functions every region is built from.
//! * [`regions`] builds fixed-power constraint sets (individual, collective,
//!   TDMA and the degraded outer bounds), tests membership, traces two-user
//!   region boundaries and solves the rate-splitting feasibility problem.
//! * [`optimizer`] has the closed-form sum-rate and cooperative-jamming power
//!   allocations together with a brute-force grid oracle that checks them.
//! * [`scenario`] sweeps a mobile eavesdropper over a floor plan.
//! * [`cli`] backs the `wiretap` binary.
//!
//! All rates are in bits per channel use.

pub mod channel;
pub mod cli;
pub mod error;
pub mod format;
pub mod optimizer;
pub mod rates;
pub mod regions;
pub mod scenario;

pub use channel::{check_degraded, standardize, DegradednessReport, RawChannelConfig, StandardChannel};
pub use error::{Error, Result};
pub use optimizer::{CaseLabel, JamAuxiliaries, Objective, PowerAllocation};
pub use rates::{PowerVector, UserSubset};
pub use regions::{RateConstraintSet, RateVector, DeltaRateVector, RegionBoundary2D, RegionKind};

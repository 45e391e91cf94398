//! Closed-form layer for energy-efficient power control in DS-CDMA uplinks
//! with per-user delay requirements.
//!
//! The crate answers three questions about a network of selfish,
//! battery-powered terminals that each maximize reliable bits per joule:
//!
//! * what output SIR does a `(D, beta)` delay requirement force on a user
//!   ([`delay`]),
//! * what SIR does a user target at the Nash equilibrium of the resulting
//!   power control game ([`efficiency`], [`game`]), and
//! * what powers, utilities and capacity follow in the large-system limit
//!   for the matched filter, decorrelator and MMSE receivers
//!   ([`large_system`]).
//!
//! All math is generic over the scalar type via [`scalar::Real`]; `f64`
//! aliases for the parameterized types live at the crate root.

pub mod delay;
pub mod efficiency;
pub mod error;
pub mod game;
pub mod large_system;
pub mod scalar;

pub use delay::{delay_outage_probability, min_success_probability, DelayClass};
pub use efficiency::{invert_by_bisection, optimal_sir, Efficiency, EfficiencyModel};
pub use error::{CoreError, Result};
pub use game::{
    constrained_utility, matched_filter_admission, utility, GainModel, SystemParams, UserSpec,
};
pub use large_system::{
    capacity, equilibrium_power, equilibrium_report, equilibrium_utility, feasibility,
    unconstrained_utility, utility_loss_ratio, EquilibriumPower, EquilibriumReport, Feasibility,
    LoadProfile, ReceiverKind,
};
pub use scalar::{from_db, to_db, Real};

/// Double-precision aliases for the scalar-generic types.
pub type DelayClass64 = DelayClass<f64>;
pub type SystemParams64 = SystemParams<f64>;
pub type UserSpec64 = UserSpec<f64>;
pub type GainModel64 = GainModel<f64>;
pub type LoadProfile64 = LoadProfile<f64>;
pub type Feasibility64 = Feasibility<f64>;
pub type EquilibriumPower64 = EquilibriumPower<f64>;
pub type EquilibriumReport64 = EquilibriumReport<f64>;

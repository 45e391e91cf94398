//! Delay QoS classes and the SIR floor they imply.
//!
//! A class is a pair `(D, beta)`: a packet must need at most `D`
//! transmissions with probability at least `beta`. With independent
//! retransmissions the transmission count is geometric in the packet success
//! probability, so the pair translates first into a minimum per-transmission
//! success probability and from there, through the inverse efficiency curve,
//! into a lower bound on the output SIR.

use crate::efficiency::{optimal_sir, Efficiency};
use crate::error::{check, Result};
use crate::scalar::Real;

/// Minimum per-transmission success probability so that at most
/// `max_transmissions` attempts suffice with probability `confidence`:
/// `1 - (1 - confidence)^{1/D}`.
///
/// Computed as `-expm1(ln1p(-confidence)/D)` so that confidences close to
/// one do not lose precision to cancellation.
pub fn min_success_probability<T: Real>(max_transmissions: u32, confidence: T) -> Result<T> {
    check(
        "max_transmissions",
        "D >= 1",
        T::lit(f64::from(max_transmissions)),
        max_transmissions >= 1,
    )?;
    check(
        "confidence",
        "0 < beta < 1",
        confidence,
        confidence > T::zero() && confidence < T::one(),
    )?;
    let d = T::lit(f64::from(max_transmissions));
    Ok(-((-confidence).ln_1p() / d).exp_m1())
}

/// Probability that a packet still fails after `max_transmissions` attempts
/// at SIR `gamma`: `(1 - f(gamma))^D`.
pub fn delay_outage_probability<E: Efficiency + ?Sized, T: Real>(
    curve: &E,
    gamma: T,
    max_transmissions: u32,
) -> Result<T> {
    check("gamma", "gamma > 0", gamma, gamma > T::zero())?;
    check(
        "max_transmissions",
        "D >= 1",
        T::lit(f64::from(max_transmissions)),
        max_transmissions >= 1,
    )?;
    let success = curve.value(gamma)?;
    Ok((T::one() - success).powi(max_transmissions as i32))
}

/// A delay requirement together with everything derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayClass<T> {
    /// Maximum number of transmissions allowed per packet (`D`).
    pub max_transmissions: u32,
    /// Required probability of staying within the transmission budget (`beta`).
    pub confidence: T,
    /// Minimum per-transmission success probability implied by `(D, beta)`.
    pub min_success: T,
    /// SIR below which the delay requirement cannot be met.
    pub sir_floor: T,
    /// Equilibrium target SIR: the floor, pushed up to the unconstrained
    /// efficiency optimum when the floor sits below it.
    pub target_sir: T,
}

impl<T: Real> DelayClass<T> {
    /// Derives all per-class quantities from `(D, beta)`; solves for the
    /// unconstrained optimum SIR internally.
    pub fn derive<E: Efficiency + ?Sized>(
        max_transmissions: u32,
        confidence: T,
        curve: &E,
    ) -> Result<Self> {
        let floor_of_ratio = optimal_sir(curve)?;
        Self::derive_with_optimum(max_transmissions, confidence, curve, floor_of_ratio)
    }

    /// Same as [`DelayClass::derive`] with a precomputed optimum SIR, for
    /// call sites that derive many classes against one curve.
    pub fn derive_with_optimum<E: Efficiency + ?Sized>(
        max_transmissions: u32,
        confidence: T,
        curve: &E,
        optimum_sir: T,
    ) -> Result<Self> {
        let min_success = min_success_probability(max_transmissions, confidence)?;
        let sir_floor = curve.invert(min_success)?;
        Ok(Self {
            max_transmissions,
            confidence,
            min_success,
            sir_floor,
            target_sir: sir_floor.max(optimum_sir),
        })
    }
}

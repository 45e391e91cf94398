//! System parameters, the bits/Joule utility, and network admission.
//!
//! Each user maximizes reliable throughput per watt of transmit power. The
//! utility is `(L/M) R f(gamma) / p`: goodput (information bits that survive,
//! per second) divided by the power spent to get them. A user's delay class
//! turns the maximization into a constrained one by zeroing the utility
//! whenever the output SIR falls below the class floor.

use crate::delay::DelayClass;
use crate::efficiency::{Efficiency, EfficiencyModel};
use crate::error::{check, CoreError, Result};
use crate::scalar::Real;

/// How channel amplitude gains are assigned to users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainModel<T> {
    /// `h = 1` for everyone. Utility ratios are gain-independent, so this is
    /// the default for every reproduction run.
    Unit,
    /// Fourth-power path loss `h^2 = kappa / d^4` for absolute-power studies.
    PathLoss { kappa: T, default_distance: T },
}

impl<T: Real> GainModel<T> {
    /// Amplitude gain for a terminal at `distance` meters (falls back to the
    /// model's default distance).
    pub fn gain(&self, distance: Option<T>) -> Result<T> {
        match *self {
            GainModel::Unit => Ok(T::one()),
            GainModel::PathLoss {
                kappa,
                default_distance,
            } => {
                let d = distance.unwrap_or(default_distance);
                check("distance", "d > 0", d, d > T::zero())?;
                check("kappa", "kappa > 0", kappa, kappa > T::zero())?;
                Ok(kappa.sqrt() / (d * d))
            }
        }
    }
}

/// Static parameters of the uplink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    /// Information bits per packet (`L`).
    pub info_bits: u32,
    /// Total bits per packet (`M`).
    pub packet_bits: u32,
    /// Transmission rate in bits/second, common to all users.
    pub rate: T,
    /// Receiver noise power in watts (`sigma^2`).
    pub noise_power: T,
    /// Processing gain: chips per symbol (`N`).
    pub processing_gain: u32,
    /// Largest transmit power a terminal may use, in watts.
    pub max_power: T,
    /// Channel gain assignment.
    pub gain_model: GainModel<T>,
}

impl<T: Real> SystemParams<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        info_bits: u32,
        packet_bits: u32,
        rate: T,
        noise_power: T,
        processing_gain: u32,
        max_power: T,
        gain_model: GainModel<T>,
    ) -> Result<Self> {
        if info_bits == 0 || packet_bits == 0 || processing_gain == 0 {
            return Err(CoreError::Invalid(
                "info_bits, packet_bits and processing_gain must be >= 1".into(),
            ));
        }
        if info_bits > packet_bits {
            return Err(CoreError::Invalid(format!(
                "info_bits ({info_bits}) cannot exceed packet_bits ({packet_bits})"
            )));
        }
        check("rate", "R > 0", rate, rate > T::zero())?;
        check(
            "noise_power",
            "sigma^2 > 0",
            noise_power,
            noise_power > T::zero(),
        )?;
        check("max_power", "P_max > 0", max_power, max_power > T::zero())?;
        Ok(Self {
            info_bits,
            packet_bits,
            rate,
            noise_power,
            processing_gain,
            max_power,
            gain_model,
        })
    }

    /// The efficiency curve matching this system's packet size.
    pub fn efficiency_model(&self) -> EfficiencyModel {
        EfficiencyModel::new(self.packet_bits).expect("packet_bits validated at construction")
    }

    /// Goodput prefactor `(L/M) R` in bits/second.
    pub fn goodput_rate(&self) -> T {
        T::lit(f64::from(self.info_bits)) / T::lit(f64::from(self.packet_bits)) * self.rate
    }
}

/// One user's slot in the network: its delay class and channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserSpec<T> {
    /// Index into the shared list of delay classes.
    pub class_index: usize,
    /// Channel amplitude gain.
    pub channel_gain: T,
    /// Distance to the uplink receiver, when the gain came from a path-loss
    /// model.
    pub distance: Option<T>,
}

impl<T: Real> UserSpec<T> {
    pub fn new(class_index: usize, channel_gain: T) -> Result<Self> {
        check(
            "channel_gain",
            "h > 0",
            channel_gain,
            channel_gain > T::zero(),
        )?;
        Ok(Self {
            class_index,
            channel_gain,
            distance: None,
        })
    }

    /// Builds the user with its gain resolved through the gain model.
    pub fn from_gain_model(
        class_index: usize,
        model: &GainModel<T>,
        distance: Option<T>,
    ) -> Result<Self> {
        Ok(Self {
            class_index,
            channel_gain: model.gain(distance)?,
            distance,
        })
    }
}

/// Unconstrained utility `(L/M) R f(gamma) / p` in bits/Joule.
pub fn utility<E: Efficiency + ?Sized, T: Real>(
    params: &SystemParams<T>,
    curve: &E,
    gamma: T,
    power: T,
) -> Result<T> {
    check("power", "p > 0", power, power > T::zero())?;
    Ok(params.goodput_rate() * curve.value(gamma)? / power)
}

/// Delay-constrained utility: zero below the class SIR floor and at zero
/// power, the plain utility otherwise. The floor itself is included.
pub fn constrained_utility<E: Efficiency + ?Sized, T: Real>(
    params: &SystemParams<T>,
    curve: &E,
    class: &DelayClass<T>,
    gamma: T,
    power: T,
) -> Result<T> {
    constrained_utility_with_floor(params, curve, class.sir_floor, gamma, power)
}

/// [`constrained_utility`] for callers that carry the SIR floor directly
/// instead of a full class description.
pub fn constrained_utility_with_floor<E: Efficiency + ?Sized, T: Real>(
    params: &SystemParams<T>,
    curve: &E,
    sir_floor: T,
    gamma: T,
    power: T,
) -> Result<T> {
    check("power", "p >= 0", power, power >= T::zero())?;
    if power == T::zero() || gamma < sir_floor {
        return Ok(T::zero());
    }
    utility(params, curve, gamma, power)
}

/// Matched-filter admission check: the network can hold users with SIR
/// targets `target_sirs` iff `sum_k 1/(1 + N/target_k) < 1`. Returns the
/// verdict and the slack `1 - sum`.
///
/// Callers choose which target to feed: the raw delay floors to test
/// admissibility of the requirements alone, or the equilibrium targets to
/// test feasibility of equilibrium operation.
pub fn matched_filter_admission<T: Real>(target_sirs: &[T], processing_gain: u32) -> (bool, T) {
    let n = T::lit(f64::from(processing_gain));
    let mut sum = T::zero();
    for &target in target_sirs {
        sum = sum + T::one() / (T::one() + n / target);
    }
    let margin = T::one() - sum;
    (sum < T::one(), margin)
}

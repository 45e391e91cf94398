//! Asymptotic equilibrium analysis for multi-class networks.
//!
//! In the limit `K, N -> inf` with `K/N -> alpha`, the per-user SIR of the
//! three linear receivers stops depending on the particular spreading
//! sequences, and the equilibrium powers and utilities of a network with `C`
//! delay classes collapse to closed forms in the per-class load fractions
//! `alpha^(c)` and target SIRs. This module evaluates those closed forms,
//! their feasibility conditions, and the resulting capacity limits.

use crate::delay::DelayClass;
use crate::efficiency::{optimal_sir, Efficiency};
use crate::error::{CoreError, Result};
use crate::game::SystemParams;
use crate::scalar::Real;

/// Linear uplink receivers covered by the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReceiverKind {
    MatchedFilter,
    Decorrelator,
    Mmse,
}

impl ReceiverKind {
    pub const ALL: [ReceiverKind; 3] = [
        ReceiverKind::MatchedFilter,
        ReceiverKind::Decorrelator,
        ReceiverKind::Mmse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReceiverKind::MatchedFilter => "matched-filter",
            ReceiverKind::Decorrelator => "decorrelator",
            ReceiverKind::Mmse => "mmse",
        }
    }
}

impl std::fmt::Display for ReceiverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Margins below this are treated as infeasible in practice: the equilibrium
/// powers blow up as `1/margin` and carry no numerical meaning that close to
/// the pole.
pub const NEAR_BOUNDARY_MARGIN: f64 = 1e-9;

/// Per-class load fractions together with their delay classes.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadProfile<T> {
    classes: Vec<DelayClass<T>>,
    alphas: Vec<T>,
}

impl<T: Real> LoadProfile<T> {
    pub fn new(classes: Vec<DelayClass<T>>, alphas: Vec<T>) -> Result<Self> {
        if classes.is_empty() || classes.len() != alphas.len() {
            return Err(CoreError::Invalid(format!(
                "need equally many classes and load fractions, got {} and {}",
                classes.len(),
                alphas.len()
            )));
        }
        for &alpha in &alphas {
            if !(alpha >= T::zero()) || !alpha.is_finite() {
                return Err(CoreError::Invalid(format!(
                    "load fractions must be nonnegative, got {alpha}"
                )));
            }
        }
        Ok(Self { classes, alphas })
    }

    pub fn classes(&self) -> &[DelayClass<T>] {
        &self.classes
    }

    pub fn alphas(&self) -> &[T] {
        &self.alphas
    }

    pub fn class(&self, index: usize) -> Result<&DelayClass<T>> {
        self.classes.get(index).ok_or(CoreError::ClassIndex {
            index,
            len: self.classes.len(),
        })
    }

    /// Total load `alpha = sum_c alpha^(c)`.
    pub fn total_load(&self) -> T {
        self.alphas
            .iter()
            .fold(T::zero(), |acc, &alpha| acc + alpha)
    }

    /// The receiver-specific load sum that feasibility compares against one:
    /// `sum alpha gamma` (matched filter), `sum alpha` (decorrelator), or
    /// `sum alpha gamma/(1+gamma)` (MMSE), with `gamma` the class target SIR.
    pub fn effective_load(&self, receiver: ReceiverKind) -> T {
        match receiver {
            ReceiverKind::MatchedFilter => self
                .alphas
                .iter()
                .zip(&self.classes)
                .fold(T::zero(), |acc, (&a, c)| acc + a * c.target_sir),
            ReceiverKind::Decorrelator => self.total_load(),
            ReceiverKind::Mmse => self
                .alphas
                .iter()
                .zip(&self.classes)
                .fold(T::zero(), |acc, (&a, c)| {
                    acc + a * c.target_sir / (T::one() + c.target_sir)
                }),
        }
    }
}

/// Outcome of a feasibility check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility<T> {
    pub feasible: bool,
    /// Slack `1 - effective_load`; zero or negative when the load violates
    /// the strict condition.
    pub margin: T,
}

/// Checks whether the load admits an equilibrium under `receiver`.
pub fn feasibility<T: Real>(load: &LoadProfile<T>, receiver: ReceiverKind) -> Feasibility<T> {
    let margin = T::one() - load.effective_load(receiver);
    Feasibility {
        feasible: margin > T::lit(NEAR_BOUNDARY_MARGIN),
        margin,
    }
}

fn feasible_margin<T: Real>(load: &LoadProfile<T>, receiver: ReceiverKind) -> Result<T> {
    let f = feasibility(load, receiver);
    if !f.feasible {
        return Err(CoreError::Infeasible {
            receiver: receiver.name(),
            margin: f.margin.as_f64(),
        });
    }
    Ok(f.margin)
}

/// Equilibrium transmit power, with a flag instead of a silent clamp when it
/// exceeds the power limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPower<T> {
    pub power: T,
    pub exceeds_max_power: bool,
}

/// Minimum power with which a user of class `class_index` and channel gain
/// `channel_gain` reaches its target SIR at equilibrium:
/// `target * sigma^2 / (h^2 * margin)`.
pub fn equilibrium_power<T: Real>(
    params: &SystemParams<T>,
    load: &LoadProfile<T>,
    receiver: ReceiverKind,
    class_index: usize,
    channel_gain: T,
) -> Result<EquilibriumPower<T>> {
    let class = load.class(class_index)?;
    let margin = feasible_margin(load, receiver)?;
    let power =
        class.target_sir * params.noise_power / (channel_gain * channel_gain * margin);
    Ok(EquilibriumPower {
        power,
        exceeds_max_power: power > params.max_power,
    })
}

/// Shared shape of the equilibrium-utility closed forms, so that loads with
/// identical margins and targets produce bit-identical utilities.
fn utility_closed_form<E: Efficiency + ?Sized, T: Real>(
    params: &SystemParams<T>,
    curve: &E,
    margin: T,
    target_sir: T,
    channel_gain: T,
) -> Result<T> {
    let prefactor = params.goodput_rate() / params.noise_power * channel_gain * channel_gain;
    Ok(prefactor * margin * (curve.value(target_sir)? / target_sir))
}

/// Utility achieved at the Nash equilibrium by a user of class
/// `class_index`: `(L R / M sigma^2) h^2 margin f(target)/target`.
pub fn equilibrium_utility<E: Efficiency + ?Sized, T: Real>(
    params: &SystemParams<T>,
    curve: &E,
    load: &LoadProfile<T>,
    receiver: ReceiverKind,
    class_index: usize,
    channel_gain: T,
) -> Result<T> {
    let class = load.class(class_index)?;
    let margin = feasible_margin(load, receiver)?;
    utility_closed_form(params, curve, margin, class.target_sir, channel_gain)
}

/// Equilibrium utility of a network without binding delay constraints:
/// every user targets the efficiency-optimal SIR and only the total load
/// matters.
pub fn unconstrained_utility<E: Efficiency + ?Sized, T: Real>(
    params: &SystemParams<T>,
    curve: &E,
    total_load: T,
    receiver: ReceiverKind,
    channel_gain: T,
) -> Result<T> {
    let optimum = optimal_sir(curve)?;
    let effective = match receiver {
        ReceiverKind::MatchedFilter => total_load * optimum,
        ReceiverKind::Decorrelator => total_load,
        ReceiverKind::Mmse => total_load * optimum / (T::one() + optimum),
    };
    let margin = T::one() - effective;
    if margin <= T::lit(NEAR_BOUNDARY_MARGIN) {
        return Err(CoreError::Infeasible {
            receiver: receiver.name(),
            margin: margin.as_f64(),
        });
    }
    utility_closed_form(params, curve, margin, optimum, channel_gain)
}

/// Ratio of the utility under `load` to the utility of the same total load
/// with every delay constraint relaxed. Channel gains cancel, so the result
/// is gain-independent.
pub fn utility_loss_ratio<E: Efficiency + ?Sized, T: Real>(
    params: &SystemParams<T>,
    curve: &E,
    load: &LoadProfile<T>,
    receiver: ReceiverKind,
    class_index: usize,
) -> Result<T> {
    let constrained =
        equilibrium_utility(params, curve, load, receiver, class_index, T::one())?;
    let baseline =
        unconstrained_utility(params, curve, load.total_load(), receiver, T::one())?;
    Ok(constrained / baseline)
}

/// Largest total load `alpha` for which a mix of classes stays feasible,
/// with `alpha^(c) = alpha * mix_fractions[c]`.
pub fn capacity<T: Real>(
    classes: &[DelayClass<T>],
    mix_fractions: &[T],
    receiver: ReceiverKind,
) -> Result<T> {
    if classes.is_empty() || classes.len() != mix_fractions.len() {
        return Err(CoreError::Invalid(format!(
            "need equally many classes and mix fractions, got {} and {}",
            classes.len(),
            mix_fractions.len()
        )));
    }
    let mut total = T::zero();
    for &f in mix_fractions {
        if !(f >= T::zero()) {
            return Err(CoreError::Invalid(format!(
                "mix fractions must be nonnegative, got {f}"
            )));
        }
        total = total + f;
    }
    if (total - T::one()).abs() > T::lit(1e-9) {
        return Err(CoreError::Invalid(format!(
            "mix fractions must sum to 1, got {total}"
        )));
    }
    match receiver {
        ReceiverKind::Decorrelator => Ok(T::one()),
        ReceiverKind::MatchedFilter => {
            let denom = classes
                .iter()
                .zip(mix_fractions)
                .fold(T::zero(), |acc, (c, &f)| acc + f * c.target_sir);
            Ok(T::one() / denom)
        }
        ReceiverKind::Mmse => {
            let denom = classes
                .iter()
                .zip(mix_fractions)
                .fold(T::zero(), |acc, (c, &f)| {
                    acc + f * c.target_sir / (T::one() + c.target_sir)
                });
            Ok(T::one() / denom)
        }
    }
}

/// Everything the equilibrium predicts for one receiver and load, for unit
/// channel gains. Powers and utilities are empty when the load is
/// infeasible.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport<T> {
    pub receiver: ReceiverKind,
    pub feasible: bool,
    pub margin: T,
    pub class_powers: Vec<T>,
    pub class_utilities: Vec<T>,
    /// Indices of classes whose equilibrium power exceeds the power limit.
    pub classes_over_power_limit: Vec<usize>,
}

pub fn equilibrium_report<E: Efficiency + ?Sized, T: Real>(
    params: &SystemParams<T>,
    curve: &E,
    load: &LoadProfile<T>,
    receiver: ReceiverKind,
) -> Result<EquilibriumReport<T>> {
    let f = feasibility(load, receiver);
    let mut report = EquilibriumReport {
        receiver,
        feasible: f.feasible,
        margin: f.margin,
        class_powers: Vec::new(),
        class_utilities: Vec::new(),
        classes_over_power_limit: Vec::new(),
    };
    if !f.feasible {
        return Ok(report);
    }
    for index in 0..load.classes().len() {
        let power = equilibrium_power(params, load, receiver, index, T::one())?;
        if power.exceeds_max_power {
            report.classes_over_power_limit.push(index);
        }
        report.class_powers.push(power.power);
        report
            .class_utilities
            .push(equilibrium_utility(params, curve, load, receiver, index, T::one())?);
    }
    Ok(report)
}

//! Packet-success ("efficiency") curves and their calculus.
//!
//! The efficiency function maps output SIR to the probability that a packet
//! is received without error. It is required to be sigmoidal: zero at zero
//! SIR, strictly increasing, saturating at one. Those three properties are
//! what make the bits/Joule utility quasiconcave in the transmit power and
//! give the unconstrained optimum SIR a unique positive solution.

use crate::error::{check, CoreError, Result};
use crate::scalar::Real;

/// Search bracket for [`optimal_sir`]. Any practically relevant sigmoid has
/// its efficiency peak well inside this range.
pub const OPTIMAL_SIR_BRACKET: (f64, f64) = (1e-6, 100.0);

/// A sigmoidal packet-success curve.
///
/// Implementations must guarantee `value(0) = 0`, strict monotonicity on
/// `(0, inf)` and saturation `value(gamma) -> 1`.
pub trait Efficiency {
    /// Packet success probability at output SIR `gamma` (linear scale).
    fn value<T: Real>(&self, gamma: T) -> Result<T>;

    /// First derivative of [`Efficiency::value`] with respect to `gamma`.
    fn derivative<T: Real>(&self, gamma: T) -> Result<T>;

    /// Second derivative, used to polish the optimum-SIR root.
    fn second_derivative<T: Real>(&self, gamma: T) -> Result<T>;

    /// SIR at which the curve reaches `target`, i.e. `value(sir) = target`.
    ///
    /// The default implementation bisects on [`Efficiency::value`];
    /// implementations with an analytic inverse should override it.
    fn invert<T: Real>(&self, target: T) -> Result<T> {
        invert_by_bisection(self, target)
    }
}

/// The shipped efficiency curve `f(gamma) = (1 - e^{-gamma})^M` for packets
/// of `M` bits: each bit survives independently with probability
/// `1 - e^{-gamma}`, so `f(0) = 0` exactly and `f < 1` for finite SIR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfficiencyModel {
    packet_bits: u32,
}

impl EfficiencyModel {
    /// Builds the curve for packets of `packet_bits` bits (`M >= 1`).
    pub fn new(packet_bits: u32) -> Result<Self> {
        if packet_bits == 0 {
            return Err(CoreError::Domain {
                name: "packet_bits",
                requirement: "M >= 1",
                value: 0.0,
            });
        }
        Ok(Self { packet_bits })
    }

    pub fn packet_bits(&self) -> u32 {
        self.packet_bits
    }
}

fn check_gamma<T: Real>(gamma: T) -> Result<()> {
    check("gamma", "gamma >= 0", gamma, gamma >= T::zero())
}

/// `(1 - e^{-gamma})^p` evaluated as `exp(p * ln1p(-e^{-gamma}))`.
///
/// The log-space form keeps the absolute error near machine epsilon even for
/// large exponents, where a repeated-multiplication power would amplify it by
/// the number of squarings; the derivative checks against finite differences
/// depend on that headroom. At `gamma = 0` the log is `-inf` and the result
/// an exact zero.
fn per_bit_power<T: Real>(gamma: T, exponent: u32) -> T {
    match exponent {
        0 => T::one(),
        1 => -(-gamma).exp_m1(),
        _ => (T::lit(f64::from(exponent)) * (-(-gamma).exp()).ln_1p()).exp(),
    }
}

impl Efficiency for EfficiencyModel {
    fn value<T: Real>(&self, gamma: T) -> Result<T> {
        check_gamma(gamma)?;
        Ok(per_bit_power(gamma, self.packet_bits))
    }

    fn derivative<T: Real>(&self, gamma: T) -> Result<T> {
        check_gamma(gamma)?;
        let m = self.packet_bits;
        Ok(T::lit(f64::from(m)) * (-gamma).exp() * per_bit_power(gamma, m - 1))
    }

    fn second_derivative<T: Real>(&self, gamma: T) -> Result<T> {
        check_gamma(gamma)?;
        let m = self.packet_bits;
        let e = (-gamma).exp();
        if m == 1 {
            return Ok(-e);
        }
        // M e^{-g} (1-e^{-g})^{M-2} [ (M-1) e^{-g} - (1-e^{-g}) ]
        let per_bit = -(-gamma).exp_m1();
        let bracket = T::lit(f64::from(m - 1)) * e - per_bit;
        Ok(T::lit(f64::from(m)) * e * per_bit_power(gamma, m - 2) * bracket)
    }

    /// Analytic inverse: `gamma = -ln(1 - target^{1/M})`, evaluated through
    /// `expm1` so that targets close to one keep full precision.
    fn invert<T: Real>(&self, target: T) -> Result<T> {
        check(
            "target",
            "0 < target < 1",
            target,
            target > T::zero() && target < T::one(),
        )?;
        let m = T::lit(f64::from(self.packet_bits));
        // 1 - target^{1/M} = -expm1(ln(target)/M)
        let complement = -(target.ln() / m).exp_m1();
        Ok(-complement.ln())
    }
}

/// Bisection fallback behind [`Efficiency::invert`]; public so the analytic
/// inverse can be cross-checked against an independent route.
pub fn invert_by_bisection<E: Efficiency + ?Sized, T: Real>(curve: &E, target: T) -> Result<T> {
    check(
        "target",
        "0 < target < 1",
        target,
        target > T::zero() && target < T::one(),
    )?;
    // Expand to the right until the curve crosses the target.
    let mut hi = T::one();
    let mut expansions = 0;
    while curve.value(hi)? < target {
        hi = hi + hi;
        expansions += 1;
        if expansions > 60 {
            return Err(CoreError::NotBracketed {
                lo: 0.0,
                hi: hi.as_f64(),
            });
        }
    }
    let mut lo = T::zero();
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid == lo || mid == hi {
            break; // floating-point fixed point reached
        }
        if curve.value(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}

/// The SIR at which `f(gamma)/gamma` peaks: the unique positive root of
/// `f(gamma) = gamma f'(gamma)`, which is where the unconstrained
/// bits/Joule utility is maximized for every linear receiver.
///
/// Bracketed bisection on `g(gamma) = f - gamma f'` down to an interval of
/// width `1e-12` (or the floating-point fixed point, whichever comes first),
/// followed by three Newton steps using `g' = -gamma f''`. `g` runs from
/// negative to positive across the root for a sigmoid, and bisection cannot
/// escape the bracket the way a cold-started Newton iteration can when the
/// curve is nearly flat on both sides of the knee.
pub fn optimal_sir<E: Efficiency + ?Sized, T: Real>(curve: &E) -> Result<T> {
    let (lo_f, hi_f) = OPTIMAL_SIR_BRACKET;
    let mut lo = T::lit(lo_f);
    let mut hi = T::lit(hi_f);
    let g = |x: T| -> Result<T> { Ok(curve.value(x)? - x * curve.derivative(x)?) };

    // For M >= 2 the value at the left edge underflows to exactly zero; the
    // true curve is negative there, so zero is grouped with the left side.
    if !(g(lo)? <= T::zero() && g(hi)? > T::zero()) {
        return Err(CoreError::NotBracketed { lo: lo_f, hi: hi_f });
    }

    let width = T::lit(1e-12);
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        let mid = (lo + hi) * T::lit(0.5);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid)? > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let mut root = (lo + hi) * T::lit(0.5);
    for _ in 0..3 {
        let slope = -root * curve.second_derivative(root)?;
        if slope == T::zero() {
            break;
        }
        let next = root - g(root)? / slope;
        if next > lo && next < hi {
            root = next;
        }
    }

    // Residual check, scaled so f32 instantiations are not held to an f64 bar.
    let tolerance = T::lit(1e-10).max(T::epsilon() * T::lit(100.0));
    let residual = g(root)?.abs();
    if residual > tolerance {
        return Err(CoreError::ResidualTooLarge {
            residual: residual.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn m(packet_bits: u32) -> EfficiencyModel {
        EfficiencyModel::new(packet_bits).unwrap()
    }

    #[test]
    fn value_at_zero_is_exactly_zero() {
        assert_eq!(m(100).value(0.0_f64).unwrap(), 0.0);
        assert_eq!(m(1).value(0.0_f64).unwrap(), 0.0);
    }

    #[test]
    fn value_matches_high_precision_reference() {
        // (1 - e^{-6.48})^100 evaluated with 50-digit arithmetic.
        assert_relative_eq!(
            m(100).value(6.48_f64).unwrap(),
            0.85770177876410056,
            max_relative = 1e-14
        );
    }

    #[test]
    fn value_saturates_toward_one() {
        let v = m(1).value(20.0_f64).unwrap();
        assert!(v > 1.0 - 1e-8 && v <= 1.0);
        // Strictly below one while e^{-gamma} is still representable.
        assert!(m(1).value(30.0_f64).unwrap() < 1.0);
    }

    #[test]
    fn value_is_strictly_increasing_and_within_unit_interval() {
        let model = m(100);
        let mut prev = 0.0_f64;
        for i in 1..=300 {
            let gamma = 0.1 * f64::from(i);
            let v = model.value(gamma).unwrap();
            assert!(v > prev, "not increasing at gamma={gamma}");
            assert!(v > 0.0 && v < 1.0);
            prev = v;
        }
    }

    #[test]
    fn negative_gamma_is_a_domain_error() {
        assert!(matches!(
            m(100).value(-0.5_f64),
            Err(CoreError::Domain { .. })
        ));
        assert!(matches!(
            m(100).derivative(-0.5_f64),
            Err(CoreError::Domain { .. })
        ));
        assert!(m(100).value(f64::NAN).is_err());
    }

    #[test]
    fn derivative_closed_forms() {
        // M = 1 reduces to e^{-gamma}.
        for gamma in [0.0, 0.3, 2.0, 10.0] {
            assert_relative_eq!(
                m(1).derivative(gamma).unwrap(),
                (-gamma as f64).exp(),
                max_relative = 1e-15
            );
        }
        // M >= 2 vanishes at the origin.
        assert_eq!(m(100).derivative(0.0_f64).unwrap(), 0.0);
        // High-precision reference at gamma = 6.48, M = 100.
        assert_relative_eq!(
            m(100).derivative(6.48_f64).unwrap(),
            0.13175730555673854,
            max_relative = 1e-13
        );
    }

    /// Central difference of the efficiency curve. Once the curve saturates,
    /// `f(gamma +/- h)` agree to within an ulp of one and the difference of
    /// the raw values drowns in rounding; differencing the complement
    /// `1 - f = -expm1(M ln1p(-e^{-gamma}))` computes the same quantity at
    /// full relative precision.
    fn central_difference(bits: u32, gamma: f64, h: f64) -> f64 {
        let model = m(bits);
        if model.value(gamma).unwrap() <= 0.5 {
            (model.value(gamma + h).unwrap() - model.value(gamma - h).unwrap()) / (2.0 * h)
        } else {
            let complement =
                |x: f64| -(f64::from(bits) * (-(-x).exp()).ln_1p()).exp_m1();
            (complement(gamma - h) - complement(gamma + h)) / (2.0 * h)
        }
    }

    #[test]
    fn derivative_matches_central_differences() {
        let model = m(100);
        for i in 1..=200 {
            let gamma = 0.1 * f64::from(i);
            let fd = central_difference(100, gamma, 1e-6 * gamma);
            let an = model.derivative(gamma).unwrap();
            if an.abs() > 1e-300 {
                assert!(
                    ((fd - an) / an).abs() < 1e-6,
                    "gamma={gamma}: fd={fd}, analytic={an}"
                );
            }
        }
    }

    #[test]
    fn second_derivative_matches_central_differences() {
        for bits in [1_u32, 2, 10, 100] {
            let model = m(bits);
            for gamma in [0.5_f64, 1.0, 3.0, 6.5, 12.0] {
                let h = 1e-5 * gamma;
                let fd = (model.derivative(gamma + h).unwrap()
                    - model.derivative(gamma - h).unwrap())
                    / (2.0 * h);
                let an = model.second_derivative(gamma).unwrap();
                assert!(
                    (fd - an).abs() <= 1e-5 * an.abs().max(1e-6),
                    "M={bits} gamma={gamma}: fd={fd}, analytic={an}"
                );
            }
        }
    }

    #[test]
    fn invert_hits_reference_values() {
        // f^{-1}(0.99) for M = 100, 50-digit reference.
        assert_relative_eq!(
            m(100).invert(0.99_f64).unwrap(),
            9.205369664023067,
            max_relative = 1e-13
        );
        // f^{-1}(0.53584111663872211), the three-transmission 90% class.
        assert_relative_eq!(
            m(100).invert(0.5358411166387221_f64).unwrap(),
            5.080025144944131,
            max_relative = 1e-13
        );
    }

    #[test]
    fn invert_residual_is_tiny() {
        for eta in [0.01_f64, 0.2, 0.5358411166387221, 0.9, 0.99, 0.9999] {
            let gamma = m(100).invert(eta).unwrap();
            assert!((m(100).value(gamma).unwrap() - eta).abs() <= 1e-10);
        }
    }

    #[test]
    fn invert_rejects_degenerate_targets() {
        for eta in [0.0_f64, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(m(100).invert(eta).is_err());
        }
    }

    #[test]
    fn analytic_inverse_agrees_with_bisection() {
        for bits in [10_u32, 100, 1000] {
            let model = m(bits);
            for eta in [0.05_f64, 0.3, 0.535841, 0.9, 0.99, 0.999] {
                let analytic = model.invert(eta).unwrap();
                let bisected = invert_by_bisection(&model, eta).unwrap();
                assert!(
                    ((analytic - bisected) / analytic).abs() < 1e-8,
                    "M={bits} eta={eta}: {analytic} vs {bisected}"
                );
            }
        }
    }

    #[test]
    fn round_trip_value_then_invert() {
        for bits in [10_u32, 100, 1000] {
            let model = m(bits);
            let mut gamma = 0.5_f64;
            while gamma <= 15.0 {
                let eta = model.value(gamma).unwrap();
                if eta > 0.0 && eta < 1.0 {
                    let back = model.invert(eta).unwrap();
                    assert!(
                        ((back - gamma) / gamma).abs() < 1e-8,
                        "M={bits} gamma={gamma} back={back}"
                    );
                }
                gamma += 0.25;
            }
        }
    }

    #[test]
    fn optimal_sir_reference_value() {
        // Root of f = gamma f' for M = 100; 50-digit reference 6.4746003795893581.
        let root: f64 = optimal_sir(&m(100)).unwrap();
        assert_relative_eq!(root, 6.474600379589358, max_relative = 1e-12);
        // Residual contract.
        let g = m(100).value(root).unwrap() - root * m(100).derivative(root).unwrap();
        assert!(g.abs() <= 1e-10);
    }

    #[test]
    fn optimal_sir_agrees_with_sign_scan_for_small_packets() {
        // Independent oracle: scan g = f - gamma f' at step 1e-4 and bracket
        // the sign change, M = 2.
        let model = m(2);
        let g = |x: f64| model.value(x).unwrap() - x * model.derivative(x).unwrap();
        let mut bracket = None;
        let mut x = 1e-4_f64;
        while x < 20.0 {
            if g(x) <= 0.0 && g(x + 1e-4) > 0.0 {
                bracket = Some(x);
                break;
            }
            x += 1e-4;
        }
        let lo = bracket.expect("sign change");
        let root: f64 = optimal_sir(&model).unwrap();
        assert!(root > lo && root < lo + 1e-4, "root={root}, scan lo={lo}");
        // 50-digit reference for the same root.
        assert_relative_eq!(root, 1.25643120862617, max_relative = 1e-10);
    }

    #[test]
    fn optimal_sir_sign_convention() {
        let model = m(100);
        let g = |x: f64| model.value(x).unwrap() - x * model.derivative(x).unwrap();
        let root: f64 = optimal_sir(&model).unwrap();
        assert!(g(root - 0.5) < 0.0);
        assert!(g(root + 0.5) > 0.0);
    }

    #[test]
    fn optimal_sir_unique_sign_change() {
        for bits in [10_u32, 100, 1000] {
            let model = m(bits);
            let g = |x: f64| model.value(x).unwrap() - x * model.derivative(x).unwrap();
            let mut changes = 0;
            let mut x = 1e-6_f64;
            let mut prev_positive = g(x) > 0.0;
            while x < 100.0 {
                x += 1e-3;
                let positive = g(x) > 0.0;
                if positive != prev_positive {
                    changes += 1;
                    prev_positive = positive;
                }
            }
            assert_eq!(changes, 1, "M={bits}");
        }
    }

    #[test]
    fn optimal_sir_rejects_non_sigmoidal_model() {
        // M = 1 is concave from the origin: f > gamma f' everywhere, no root.
        assert!(matches!(
            optimal_sir::<_, f64>(&m(1)),
            Err(CoreError::NotBracketed { .. })
        ));
    }

    #[test]
    fn generic_scalar_instantiation_f32() {
        let root: f32 = optimal_sir(&m(100)).unwrap();
        assert!((root - 6.4746).abs() < 1e-3, "f32 root {root}");
        let v: f32 = m(100).value(6.48_f32).unwrap();
        assert!((v - 0.8577).abs() < 1e-3);
    }
}

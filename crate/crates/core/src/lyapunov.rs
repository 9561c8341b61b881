//! Lyapunov exponents with explicit k-decimal convergence certification.
//!
//! The converged estimate doubles the averaging window until the running
//! mean, rounded to the requested number of decimals, is identical between
//! window n and n/2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{MapSpec, OrbitSequence};

/// |f'| is clamped here before taking the log, so superstable orbits yield a
/// strongly negative, finite exponent.
pub const DERIVATIVE_FLOOR: f64 = 1e-300;

/// First averaging window of the doubling schedule.
pub const CONVERGENCE_START_N: u64 = 10_000;

/// Default cap on the averaging window.
pub const DEFAULT_N_MAX: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Chaotic,
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub value: f64,
    /// Largest k <= k_target for which the running mean rounded to k
    /// decimals agreed between n_used/2 and n_used.
    pub decimals_converged: u32,
    pub n_used: u64,
    pub label: Label,
}

/// Round half away from zero (f64::round semantics), fixed because labels
/// near zero depend on it.
pub fn round_to_decimals(value: f64, k: u32) -> f64 {
    let scale = 10f64.powi(k as i32);
    (value * scale).round() / scale
}

/// Chaotic iff `value` rounded to k decimals is strictly positive.
pub fn label_from_lambda(value: f64, k: u32) -> Label {
    if round_to_decimals(value, k) > 0.0 {
        Label::Chaotic
    } else {
        Label::Regular
    }
}

#[inline]
fn log_abs_derivative(spec: &MapSpec, x: f64) -> f64 {
    spec.derivative(x).abs().max(DERIVATIVE_FLOOR).ln()
}

/// Converged Lyapunov exponent with k-decimal certification.
///
/// Averages log|f'| over the post-burn-in orbit, doubling the window from
/// `CONVERGENCE_START_N` until the first `k_target` decimals of the running
/// mean agree between n and n/2, or until `n_max`.
pub fn lyapunov_converged(
    spec: &MapSpec,
    burn_in: u64,
    n_max: u64,
    k_target: u32,
) -> Result<LyapunovEstimate> {
    spec.validate()?;
    if n_max < 1000 {
        return Err(Error::Rejected("n_max must be >= 1000".into()));
    }
    if !(1..=8).contains(&k_target) {
        return Err(Error::Rejected("k_target must be in 1..=8".into()));
    }

    let mut x = spec.x0;
    for _ in 0..burn_in {
        x = spec.eval(x);
    }

    let mut sum = 0.0;
    let mut n: u64 = 0;
    let mut checkpoint = CONVERGENCE_START_N.min(n_max);
    let mut prev_mean: Option<f64> = None;

    loop {
        while n < checkpoint {
            sum += log_abs_derivative(spec, x);
            x = spec.eval(x);
            n += 1;
        }
        let mean = sum / n as f64;
        if !mean.is_finite() {
            return Err(Error::NonFinite(format!(
                "lyapunov mean not finite at n={n} (param={})",
                spec.param
            )));
        }
        if let Some(prev) = prev_mean {
            let mut agreed = 0u32;
            for k in (0..=k_target).rev() {
                if round_to_decimals(mean, k) == round_to_decimals(prev, k) {
                    agreed = k;
                    break;
                }
            }
            if agreed >= k_target || checkpoint >= n_max {
                let decimals = agreed.min(k_target);
                // The class label is the strict sign of the estimate: near
                // the regular/chaotic boundary the exponent approaches 0 and
                // rounding would collapse both sides onto Regular.
                let label =
                    if mean > 0.0 { Label::Chaotic } else { Label::Regular };
                return Ok(LyapunovEstimate {
                    value: mean,
                    decimals_converged: decimals,
                    n_used: n,
                    label,
                });
            }
        }
        prev_mean = Some(mean);
        checkpoint = (checkpoint * 2).min(n_max);
    }
}

/// Lyapunov exponent truncated to the observation window, using the analytic
/// derivative of the generating map.
pub fn short_time_lyapunov(seq: &OrbitSequence) -> f64 {
    let n = seq.values.len();
    assert!(n >= 2, "short-time exponent needs at least two points");
    let sum: f64 = seq.values[..n - 1]
        .iter()
        .map(|&x| log_abs_derivative(&seq.spec, x))
        .sum();
    sum / (n - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::generate_orbit;

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round_to_decimals(0.00005, 4), 0.0001);
        assert_eq!(round_to_decimals(-0.00005, 4), -0.0001);
        assert_eq!(round_to_decimals(0.00004, 4), 0.0);
    }

    #[test]
    fn label_examples() {
        assert_eq!(label_from_lambda(0.00004, 4), Label::Regular);
        assert_eq!(label_from_lambda(0.0001, 4), Label::Chaotic);
        assert_eq!(label_from_lambda(-0.3, 2), Label::Regular);
    }

    #[test]
    fn mu4_converges_to_ln2() {
        let est =
            lyapunov_converged(&MapSpec::logistic(4.0).with_x0(0.3), 1000, DEFAULT_N_MAX, 5).unwrap();
        assert!(
            (est.value - std::f64::consts::LN_2).abs() < 1e-3,
            "lambda = {}",
            est.value
        );
        assert_eq!(est.label, Label::Chaotic);
    }

    #[test]
    fn fixed_point_is_minus_ln2() {
        let est =
            lyapunov_converged(&MapSpec::logistic(2.5), 1000, DEFAULT_N_MAX, 5).unwrap();
        assert!((est.value + std::f64::consts::LN_2).abs() < 1e-3);
        assert_eq!(est.label, Label::Regular);
        // Fixed point: every term is identical, so the first comparison wins.
        assert_eq!(est.n_used, 2 * CONVERGENCE_START_N);
    }

    #[test]
    fn invertible_sine_circle_is_regular() {
        // Quasi-periodic orbit: the exponent is 0 in the limit, and with the
        // standard burn-in the finite-window estimate lands on the regular
        // side of the boundary.
        let est =
            lyapunov_converged(&MapSpec::sine_circle(0.5), 10_000, 1_000_000, 4).unwrap();
        assert_eq!(est.label, Label::Regular);
    }

    #[test]
    fn superstable_orbit_stays_finite() {
        // mu = 2: superstable fixed point at 1/2, derivative exactly zero.
        let est = lyapunov_converged(&MapSpec::logistic(2.0), 10, 100_000, 3).unwrap();
        assert!(est.value.is_finite());
        assert_eq!(est.label, Label::Regular);
    }

    #[test]
    fn short_time_matches_long_run_for_mu4() {
        let seq = generate_orbit(&MapSpec::logistic(4.0).with_x0(0.3), 10_000, 500).unwrap();
        let st = short_time_lyapunov(&seq);
        assert!((st - std::f64::consts::LN_2).abs() < 0.05, "short-time {st}");
    }

    #[test]
    fn short_time_exact_on_fixed_point() {
        let seq = generate_orbit(&MapSpec::logistic(2.5), 10_000, 500).unwrap();
        let st = short_time_lyapunov(&seq);
        let per_term = (0.5f64).ln();
        assert!((st - per_term).abs() < 1e-9);
    }

    #[test]
    fn certification_is_monotone_in_n_max() {
        for beta in [0.7, 1.3, 2.9, 4.2] {
            let spec = MapSpec::sine_circle(beta);
            let small = lyapunov_converged(&spec, 1000, 100_000, 4).unwrap();
            let large = lyapunov_converged(&spec, 1000, 1_000_000, 4).unwrap();
            assert!(
                large.decimals_converged >= small.decimals_converged,
                "beta={beta}: {} -> {}",
                small.decimals_converged,
                large.decimals_converged
            );
        }
    }
}

//! The logistic and sine-circle maps: evaluation, derivatives, long-term
//! orbit windows, and the parameter grids the data sets are built from.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed driving frequency of the sine-circle map.
pub const DEFAULT_OMEGA: f64 = 0.606661;

/// Period-doubling accumulation point of the logistic map (≈ 3.56995).
pub const LOGISTIC_CHAOS_ONSET: f64 = 3.569945672;

/// Smallest log-distance to the accumulation point on the regular (below
/// onset) side of a log-spaced grid.
pub const LOG_GRID_MIN_OFFSET_BELOW: f64 = 1e-6;

/// Smallest log-distance on the chaotic (above onset) side. Kept larger
/// than the regular-side offset: close to the accumulation point the chaotic
/// band structure is so tight that finite orbit windows there are
/// numerically indistinguishable from deep period-doubled orbits just below
/// onset.
pub const LOG_GRID_MIN_OFFSET_ABOVE: f64 = 3e-3;

/// Default number of discarded transient iterates.
pub const DEFAULT_BURN_IN: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapKind {
    Logistic,
    SineCircle,
}

/// A fully specified 1D map together with its initial condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub kind: MapKind,
    /// Bifurcation parameter: mu for the logistic map, beta for sine-circle.
    pub param: f64,
    /// Driving frequency, sine-circle only (ignored for logistic).
    pub omega: f64,
    pub x0: f64,
}

impl MapSpec {
    pub fn logistic(mu: f64) -> Self {
        MapSpec { kind: MapKind::Logistic, param: mu, omega: 0.0, x0: 0.5 }
    }

    pub fn sine_circle(beta: f64) -> Self {
        MapSpec { kind: MapKind::SineCircle, param: beta, omega: DEFAULT_OMEGA, x0: 0.5 }
    }

    pub fn with_x0(mut self, x0: f64) -> Self {
        self.x0 = x0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            MapKind::Logistic => {
                if !(0.0..=4.0).contains(&self.param) {
                    return Err(Error::Rejected(format!("logistic mu={} not in [0,4]", self.param)));
                }
                if !(0.0..=1.0).contains(&self.x0) {
                    return Err(Error::Rejected(format!("logistic x0={} not in [0,1]", self.x0)));
                }
            }
            MapKind::SineCircle => {
                if !(0.0..=5.0).contains(&self.param) {
                    return Err(Error::Rejected(format!(
                        "sine-circle beta={} not in [0,5]",
                        self.param
                    )));
                }
                if !(0.0..1.0).contains(&self.x0) {
                    return Err(Error::Rejected(format!(
                        "sine-circle x0={} not in [0,1)",
                        self.x0
                    )));
                }
            }
        }
        Ok(())
    }

    fn in_domain(&self, x: f64) -> bool {
        match self.kind {
            MapKind::Logistic => (0.0..=1.0).contains(&x),
            MapKind::SineCircle => (0.0..1.0).contains(&x),
        }
    }

    /// Unchecked map evaluation; callers on hot paths validate the spec once.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            MapKind::Logistic => self.param * x * (1.0 - x),
            MapKind::SineCircle => {
                let y = x + self.omega
                    - self.param / (2.0 * std::f64::consts::PI)
                        * (2.0 * std::f64::consts::PI * x).sin();
                y - y.floor()
            }
        }
    }

    /// Unchecked analytic derivative f'(x).
    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        match self.kind {
            MapKind::Logistic => self.param - 2.0 * self.param * x,
            MapKind::SineCircle => {
                1.0 - self.param * (2.0 * std::f64::consts::PI * x).cos()
            }
        }
    }
}

/// Checked single-step map evaluation.
pub fn map_eval(spec: &MapSpec, x: f64) -> Result<f64> {
    spec.validate()?;
    if !spec.in_domain(x) {
        return Err(Error::Rejected(format!("x={x} outside map domain")));
    }
    Ok(spec.eval(x))
}

/// Checked analytic derivative.
pub fn map_derivative(spec: &MapSpec, x: f64) -> Result<f64> {
    spec.validate()?;
    if !spec.in_domain(x) {
        return Err(Error::Rejected(format!("x={x} outside map domain")));
    }
    Ok(spec.derivative(x))
}

/// A length-N window of a map orbit plus its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSequence {
    pub spec: MapSpec,
    pub burn_in: u64,
    pub values: Vec<f64>,
}

/// Iterates the map `burn_in` times from x0, then records `n` values.
pub fn generate_orbit(spec: &MapSpec, burn_in: u64, n: usize) -> Result<OrbitSequence> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Rejected("orbit length must be >= 1".into()));
    }
    let mut x = spec.x0;
    for _ in 0..burn_in {
        x = spec.eval(x);
    }
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        if !x.is_finite() || !spec.in_domain(x) {
            return Err(Error::NonFinite(format!(
                "orbit left its domain at x={x} (param={})",
                spec.param
            )));
        }
        values.push(x);
        x = spec.eval(x);
    }
    Ok(OrbitSequence { spec: *spec, burn_in, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridKind {
    Linear,
    /// Points clustering geometrically around an accumulation parameter.
    LogSpacedAtOnset,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterGrid {
    pub kind: GridKind,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Accumulation point, used by `LogSpacedAtOnset` only; 0 for linear
    /// grids (kept finite so grids compare equal and round-trip through
    /// JSON).
    pub onset: f64,
}

impl ParameterGrid {
    pub fn linear(lo: f64, hi: f64, count: usize) -> Self {
        ParameterGrid { kind: GridKind::Linear, lo, hi, count, onset: 0.0 }
    }

    pub fn log_at_onset(lo: f64, hi: f64, count: usize, onset: f64) -> Self {
        ParameterGrid { kind: GridKind::LogSpacedAtOnset, lo, hi, count, onset }
    }
}

/// Realizes a grid as a strictly increasing parameter vector with exact
/// endpoints.
pub fn parameter_grid(grid: &ParameterGrid) -> Result<Vec<f64>> {
    if grid.count < 2 {
        return Err(Error::Rejected("grid count must be >= 2".into()));
    }
    if !(grid.lo < grid.hi) {
        return Err(Error::Rejected("grid requires lo < hi".into()));
    }
    let points = match grid.kind {
        GridKind::Linear => {
            let step = (grid.hi - grid.lo) / (grid.count - 1) as f64;
            let mut v: Vec<f64> =
                (0..grid.count).map(|i| grid.lo + step * i as f64).collect();
            v[0] = grid.lo;
            *v.last_mut().unwrap() = grid.hi;
            v
        }
        GridKind::LogSpacedAtOnset => {
            if !(grid.onset > grid.lo && grid.onset < grid.hi) {
                return Err(Error::Rejected(format!(
                    "onset {} outside ({}, {})",
                    grid.onset, grid.lo, grid.hi
                )));
            }
            let below_len = grid.onset - grid.lo;
            let above_len = grid.hi - grid.onset;
            let mut n_below = ((grid.count as f64) * below_len / (grid.hi - grid.lo))
                .round() as usize;
            n_below = n_below.clamp(1, grid.count - 1);
            let n_above = grid.count - n_below;

            let mut v = Vec::with_capacity(grid.count);
            // Distances from the onset, geometrically spaced between the
            // interval width and the per-side minimum offset.
            v.extend(
                geometric_offsets(below_len, n_below, LOG_GRID_MIN_OFFSET_BELOW)
                    .into_iter()
                    .rev()
                    .map(|d| grid.onset - d),
            );
            v.extend(
                geometric_offsets(above_len, n_above, LOG_GRID_MIN_OFFSET_ABOVE)
                    .into_iter()
                    .map(|d| grid.onset + d),
            );
            v[0] = grid.lo;
            *v.last_mut().unwrap() = grid.hi;
            v
        }
    };
    for w in points.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::Rejected(
                "grid too dense: points are not strictly increasing".into(),
            ));
        }
    }
    Ok(points)
}

/// `count` distances in (0, span], log-spaced from `min_offset` up to
/// `span`, returned in increasing order.
fn geometric_offsets(span: f64, count: usize, min_offset: f64) -> Vec<f64> {
    if count == 1 {
        return vec![span];
    }
    let lo = min_offset.min(span / 2.0).ln();
    let hi = span.ln();
    (0..count)
        .map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn logistic_eval_examples() {
        let spec = MapSpec::logistic(4.0);
        assert_eq!(map_eval(&spec, 0.5).unwrap(), 1.0);
        assert_eq!(map_eval(&spec, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn sine_circle_eval_example() {
        let spec = MapSpec::sine_circle(0.0);
        let y = map_eval(&spec, 0.5).unwrap();
        assert!(close(y, 0.106661, 1e-12), "got {y}");
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(map_derivative(&MapSpec::logistic(4.0), 0.5).unwrap(), 0.0);
        assert!(close(
            map_derivative(&MapSpec::logistic(2.5), 0.6).unwrap(),
            -0.5,
            1e-12
        ));
        let d = map_derivative(&MapSpec::sine_circle(1.0), 0.0).unwrap();
        assert!(close(d, 0.0, 1e-12));
    }

    #[test]
    fn domain_violations_rejected() {
        assert!(map_eval(&MapSpec::logistic(4.0), 1.5).is_err());
        assert!(map_eval(&MapSpec::logistic(4.5), 0.5).is_err());
        assert!(map_eval(&MapSpec::sine_circle(2.0), 1.0).is_err());
    }

    #[test]
    fn orbit_fixed_point() {
        let seq = generate_orbit(&MapSpec::logistic(2.5), 1000, 4).unwrap();
        for &v in &seq.values {
            assert!(close(v, 0.6, 1e-9), "got {v}");
        }
    }

    #[test]
    fn orbit_direct_iteration() {
        let seq = generate_orbit(&MapSpec::logistic(4.0), 0, 3).unwrap();
        assert_eq!(seq.values, vec![0.5, 1.0, 0.0]);
    }

    #[test]
    fn orbit_recursion_is_bitwise() {
        let spec = MapSpec::sine_circle(3.3);
        let seq = generate_orbit(&spec, 137, 200).unwrap();
        for w in seq.values.windows(2) {
            assert_eq!(w[1], spec.eval(w[0]));
        }
    }

    #[test]
    fn mu4_conjugacy_closed_form() {
        // x_n = sin^2(2^n asin sqrt(x0)) for mu = 4; error doubles per step,
        // so only a short horizon is checked.
        let x0 = 0.3_f64;
        let spec = MapSpec::logistic(4.0).with_x0(x0);
        let seq = generate_orbit(&spec, 0, 21).unwrap();
        let theta0 = x0.sqrt().asin();
        for (n, &v) in seq.values.iter().enumerate() {
            let exact = ((2f64).powi(n as i32) * theta0).sin().powi(2);
            assert!(close(v, exact, 1e-6), "n={n}: {v} vs {exact}");
        }
    }

    #[test]
    fn linear_grid_examples() {
        let g = parameter_grid(&ParameterGrid::linear(0.0, 1.0, 3)).unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0]);
        let g = parameter_grid(&ParameterGrid::linear(0.0, 5.0, 6)).unwrap();
        assert_eq!(g, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn log_grid_clusters_at_onset() {
        let grid = ParameterGrid::log_at_onset(3.0, 4.0, 100, LOGISTIC_CHAOS_ONSET);
        let g = parameter_grid(&grid).unwrap();
        assert_eq!(g.len(), 100);
        assert_eq!(g[0], 3.0);
        assert_eq!(*g.last().unwrap(), 4.0);
        let min_gap = g
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        assert!(min_gap < 1.0 / 1000.0, "min gap {min_gap}");
        for w in g.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn log_grid_onset_outside_rejected() {
        let grid = ParameterGrid::log_at_onset(3.6, 4.0, 10, LOGISTIC_CHAOS_ONSET);
        assert!(parameter_grid(&grid).is_err());
    }

    #[test]
    fn boundedness_random_sample() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let spec = if rng.gen_bool(0.5) {
                MapSpec::logistic(rng.gen_range(0.0..=4.0)).with_x0(rng.gen_range(0.0..=1.0))
            } else {
                MapSpec::sine_circle(rng.gen_range(0.0..=5.0)).with_x0(rng.gen_range(0.0..1.0))
            };
            let mut x = spec.x0;
            for _ in 0..50 {
                x = spec.eval(x);
                match spec.kind {
                    MapKind::Logistic => assert!((0.0..=1.0).contains(&x), "{spec:?} -> {x}"),
                    MapKind::SineCircle => assert!((0.0..1.0).contains(&x), "{spec:?} -> {x}"),
                }
            }
        }
    }
}

//! Direct Lyapunov reconstruction from a bare sequence: local polynomial
//! least-squares fits on the sorted graph (x_i, x_{i+1}), split into
//! connected components, then a log-average over the estimated derivatives.

use nalgebra::{DMatrix, DVector};

use crate::dataset::{period_error, PERIOD_TOL};
use crate::error::{Error, Result};
use crate::lyapunov::{label_from_lambda, Label, LyapunovEstimate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgConfig {
    /// Fit window, odd so the half-width is integral.
    pub window: usize,
    /// Polynomial degree, strictly below the window size.
    pub degree: usize,
    /// A gap larger than this multiple of the median gap starts a new
    /// component.
    pub component_gap_factor: f64,
    /// Floor on |f'| before the log.
    pub derivative_clamp: f64,
    /// Decimal precision used when turning the estimate into a label.
    pub label_decimals: u32,
}

impl Default for SgConfig {
    fn default() -> Self {
        SgConfig {
            window: 7,
            degree: 3,
            component_gap_factor: 10.0,
            derivative_clamp: 1e-8,
            label_decimals: 4,
        }
    }
}

impl SgConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window % 2 == 0 {
            return Err(Error::Rejected("window must be odd and >= 3".into()));
        }
        if self.degree >= self.window {
            return Err(Error::Rejected("degree must be below the window".into()));
        }
        if !(self.component_gap_factor > 1.0) {
            return Err(Error::Rejected("component_gap_factor must be > 1".into()));
        }
        if !(self.derivative_clamp > 0.0) {
            return Err(Error::Rejected("derivative_clamp must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphComponent {
    /// (x̄, y) pairs sorted by x̄.
    pub points: Vec<(f64, f64)>,
}

/// Pairs (x_i, x_{i+1}) sorted by the first coordinate; pairs sharing an
/// identical abscissa are collapsed to their mean ordinate.
pub fn graph_points(x: &[f64]) -> Vec<(f64, f64)> {
    assert!(x.len() >= 3, "graph needs at least 3 samples");
    let mut pts: Vec<(f64, f64)> = x.windows(2).map(|w| (w[0], w[1])).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    let mut i = 0;
    while i < pts.len() {
        let mut j = i + 1;
        let mut sum = pts[i].1;
        while j < pts.len() && pts[j].0 == pts[i].0 {
            sum += pts[j].1;
            j += 1;
        }
        out.push((pts[i].0, sum / (j - i) as f64));
        i = j;
    }
    out
}

/// Cuts the sorted point set wherever the abscissa gap or the ordinate jump
/// exceeds `component_gap_factor` times its median.
///
/// The ordinate cut matters for circle maps: the mod-1 wrap makes the graph
/// jump between y ≈ 1 and y ≈ 0 at an interior abscissa with no gap in x̄,
/// and a polynomial fit spanning that jump reports derivatives that are off
/// by orders of magnitude. A spurious cut on a steep-but-continuous stretch
/// is harmless (both sides still fit the same curve), so the cut is applied
/// symmetrically to both coordinates.
pub fn split_components(points: &[(f64, f64)], cfg: &SgConfig) -> Vec<GraphComponent> {
    if points.len() <= 1 {
        return vec![GraphComponent { points: points.to_vec() }];
    }
    let median_of = |vals: &mut Vec<f64>| -> f64 {
        vals.sort_by(f64::total_cmp);
        vals[vals.len() / 2]
    };
    let mut x_gaps: Vec<f64> = points.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let mut y_gaps: Vec<f64> =
        points.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
    let x_median = median_of(&mut x_gaps);
    let y_median = median_of(&mut y_gaps);
    let x_threshold = cfg.component_gap_factor * x_median;
    let y_threshold = cfg.component_gap_factor * y_median;

    let mut comps = Vec::new();
    let mut start = 0;
    for i in 1..points.len() {
        let x_cut = x_median > 0.0 && points[i].0 - points[i - 1].0 > x_threshold;
        let y_cut =
            y_median > 0.0 && (points[i].1 - points[i - 1].1).abs() > y_threshold;
        if x_cut || y_cut {
            comps.push(GraphComponent { points: points[start..i].to_vec() });
            start = i;
        }
    }
    comps.push(GraphComponent { points: points[start..].to_vec() });
    comps
}

/// Least-squares polynomial fit of `degree` through (t_i, y_i) with the
/// abscissae already centered; returns the coefficient vector.
fn poly_fit(t: &[f64], y: &[f64], degree: usize) -> Option<Vec<f64>> {
    let rows = t.len();
    let cols = degree + 1;
    let a = DMatrix::from_fn(rows, cols, |i, j| t[i].powi(j as i32));
    let b = DVector::from_column_slice(y);
    let svd = a.svd(true, true);
    svd.solve(&b, 1e-12).ok().map(|c| c.as_slice().to_vec())
}

fn poly_derivative_at(coeffs: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for (j, &c) in coeffs.iter().enumerate().skip(1) {
        acc += j as f64 * c * t.powi(j as i32 - 1);
    }
    acc
}

/// Derivative estimates at every abscissa of one component.
///
/// Interior centers fit a full window; edge points reuse the nearest full
/// window with the evaluation offset adjusted. Components smaller than the
/// window fall back to a single reduced-degree fit; a single-point component
/// yields no estimates.
pub fn sg_derivatives(comp: &GraphComponent, cfg: &SgConfig) -> Vec<(f64, Option<f64>)> {
    let pts = &comp.points;
    let size = pts.len();
    if size == 1 {
        return vec![(pts[0].0, None)];
    }
    let mut out: Vec<(f64, Option<f64>)> = pts.iter().map(|&(x, _)| (x, None)).collect();

    if size < cfg.window {
        let degree = cfg.degree.min(size - 1);
        let center = pts[size / 2].0;
        let t: Vec<f64> = pts.iter().map(|p| p.0 - center).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
        if let Some(c) = poly_fit(&t, &y, degree) {
            for (i, slot) in out.iter_mut().enumerate() {
                slot.1 = Some(poly_derivative_at(&c, t[i]));
            }
        }
        return out;
    }

    let half = (cfg.window - 1) / 2;
    for center in half..size - half {
        let win = &pts[center - half..=center + half];
        let t: Vec<f64> = win.iter().map(|p| p.0 - pts[center].0).collect();
        let y: Vec<f64> = win.iter().map(|p| p.1).collect();
        if let Some(c) = poly_fit(&t, &y, cfg.degree) {
            out[center].1 = Some(c.get(1).copied().unwrap_or(0.0));
            if center == half {
                for i in 0..half {
                    out[i].1 = Some(poly_derivative_at(&c, pts[i].0 - pts[center].0));
                }
            }
            if center == size - half - 1 {
                for i in size - half..size {
                    out[i].1 = Some(poly_derivative_at(&c, pts[i].0 - pts[center].0));
                }
            }
        }
    }
    out
}

/// Reconstructed Lyapunov exponent for a bare sequence.
pub fn sg_lyapunov(x: &[f64], cfg: &SgConfig) -> Result<LyapunovEstimate> {
    cfg.validate()?;
    if x.len() < 3 {
        return Err(Error::Rejected("sequence too short".into()));
    }
    let points = graph_points(x);
    let comps = split_components(&points, cfg);

    // Derivative estimate per sorted graph point, aligned with `points`.
    let mut derivs: Vec<Option<f64>> = Vec::with_capacity(points.len());
    for comp in &comps {
        for (_, d) in sg_derivatives(comp, cfg) {
            derivs.push(d);
        }
    }
    debug_assert_eq!(derivs.len(), points.len());

    let mut sum = 0.0;
    let mut used = 0u64;
    for &xi in &x[..x.len() - 1] {
        let idx = points
            .binary_search_by(|p| p.0.total_cmp(&xi))
            .expect("every orbit point has a graph abscissa");
        if let Some(d) = derivs[idx] {
            sum += d.abs().max(cfg.derivative_clamp).ln();
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::EstimatorFailed(
            "no derivative estimates available".into(),
        ));
    }
    let value = sum / used as f64;
    Ok(LyapunovEstimate {
        value,
        decimals_converged: cfg.label_decimals,
        n_used: used,
        label: label_from_lambda(value, cfg.label_decimals),
    })
}

/// Thin classification wrapper; exactly periodic inputs fall back to Regular
/// when the estimator cannot produce derivatives.
pub fn sg_classify(x: &[f64], cfg: &SgConfig) -> Result<Label> {
    match sg_lyapunov(x, cfg) {
        Ok(est) => Ok(est.label),
        Err(Error::EstimatorFailed(_)) if period_error(x).error < PERIOD_TOL => {
            Ok(Label::Regular)
        }
        Err(e) => Err(e),
    }
}

//! Periodicity machinery: finite-sequence period detection, exact strided
//! convolution of periodic signals, the untrained-network period heuristic,
//! flatten-layer probing, period matrices, and period-2 activation diagrams.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lkcnn::{forward, predict, LkcnnModel, Mode};
use crate::lyapunov::Label;

/// Default relative tolerance for calling two activations equal.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

/// Largest input period the heuristic is valid for.
pub const HEURISTIC_MAX_PERIOD: usize = 96;

/// Flatten cells excluded from period detection at each edge.
pub const FLATTEN_EDGE_EXCLUDE: usize = 2;

/// Smallest p >= 1 with |v[i+p] - v[i]| <= rel_tol * (1 + max|v|) for all
/// valid i; returns `v.len()` as an "aperiodic" sentinel when no period
/// at most len/2 exists.
pub fn sequence_period(v: &[f64], rel_tol: f64) -> usize {
    assert!(v.len() >= 2, "period detection needs at least 2 samples");
    assert!(rel_tol > 0.0);
    let max_abs = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = rel_tol * (1.0 + max_abs);
    'outer: for p in 1..=v.len() / 2 {
        for i in 0..v.len() - p {
            if (v[i + p] - v[i]).abs() > tol {
                continue 'outer;
            }
        }
        return p;
    }
    v.len()
}

/// Exact values of the infinite strided convolution [F * phi](s*z) for
/// z = 0..out_len-1, where F is the k-periodic extension of `base`.
pub fn strided_periodic_convolution(
    base: &[f64],
    filter: &[f64],
    stride: usize,
    out_len: usize,
) -> Vec<f64> {
    assert!(!base.is_empty() && stride >= 1);
    let k = base.len() as i64;
    (0..out_len)
        .map(|z| {
            let mut acc = 0.0;
            for (u, &w) in filter.iter().enumerate() {
                let idx = (stride * z) as i64 - u as i64;
                acc += w * base[idx.rem_euclid(k) as usize];
            }
            acc
        })
        .collect()
}

/// Expected flatten-layer period of an untrained network for input period k:
/// 5*k/2^i with i the largest i <= 3 such that 2^i divides k.
pub fn theoretical_network_period(k: usize) -> Result<usize> {
    if !(2..=HEURISTIC_MAX_PERIOD).contains(&k) {
        return Err(Error::Rejected(format!(
            "heuristic valid for periods 2..={HEURISTIC_MAX_PERIOD}, got {k}"
        )));
    }
    let mut i = 0;
    while i < 3 && k % (1 << (i + 1)) == 0 {
        i += 1;
    }
    Ok(5 * k / (1 << i))
}

/// Detected period of the flatten activation under a periodic input.
///
/// The input's own period must be detectable and at most 96. Edge cells are
/// excluded; an aperiodic flatten is reported as the full flatten length.
pub fn flatten_period_probe(model: &LkcnnModel, input: &[f64], rel_tol: f64) -> Result<usize> {
    let input_period = sequence_period(input, rel_tol);
    if input_period > HEURISTIC_MAX_PERIOD {
        return Err(Error::Rejected(format!(
            "input period {input_period} exceeds probe range"
        )));
    }
    let (_, trace) = forward(model, input, Mode::Infer)?;
    let flat = &trace.flatten;
    let interior = &flat[FLATTEN_EDGE_EXCLUDE..flat.len() - FLATTEN_EDGE_EXCLUDE];
    let p = sequence_period(interior, rel_tol);
    if p == interior.len() {
        Ok(flat.len())
    } else {
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkPeriodObservation {
    pub orbit_period: u32,
    pub network_period: u32,
    pub count: u32,
}

/// Map from orbit period (columns) to flatten-layer period (rows), either
/// binary (majority per column) or column-normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodMatrix {
    pub orbit_periods: Vec<u32>,
    pub network_periods: Vec<u32>,
    /// Row-major, rows = network periods.
    pub cells: Vec<f64>,
    pub binary: bool,
    /// Columns with no observations, left all-zero.
    pub empty_columns: Vec<u32>,
}

impl PeriodMatrix {
    pub fn cell(&self, net: u32, orbit: u32) -> f64 {
        let r = self.network_periods.iter().position(|&p| p == net);
        let c = self.orbit_periods.iter().position(|&p| p == orbit);
        match (r, c) {
            (Some(r), Some(c)) => self.cells[r * self.orbit_periods.len() + c],
            _ => 0.0,
        }
    }

    /// Majority network period per populated column (ties to the smaller
    /// period for non-binary matrices, matching the binary rule).
    pub fn column_majority(&self) -> BTreeMap<u32, u32> {
        let mut out = BTreeMap::new();
        for (c, &orbit) in self.orbit_periods.iter().enumerate() {
            if self.empty_columns.contains(&orbit) {
                continue;
            }
            let mut best = (f64::NEG_INFINITY, u32::MAX);
            for (r, &net) in self.network_periods.iter().enumerate() {
                let v = self.cells[r * self.orbit_periods.len() + c];
                if v > best.0 || (v == best.0 && net < best.1) {
                    best = (v, net);
                }
            }
            if best.0 > 0.0 {
                out.insert(orbit, best.1);
            }
        }
        out
    }
}

/// Tallies probe observations into a binary or column-normalized matrix.
///
/// `probes` are (orbit_period, input) pairs; probes whose flatten period
/// cannot be measured are skipped.
pub fn build_period_matrix(
    model: &LkcnnModel,
    probes: &[(u32, Vec<f64>)],
    binary: bool,
    rel_tol: f64,
) -> PeriodMatrix {
    let mut counts: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut orbit_periods: Vec<u32> = probes.iter().map(|(k, _)| *k).collect();
    orbit_periods.sort_unstable();
    orbit_periods.dedup();

    for (k, input) in probes {
        if let Ok(p) = flatten_period_probe(model, input, rel_tol) {
            *counts.entry((*k, p as u32)).or_insert(0) += 1;
        }
    }

    let mut network_periods: Vec<u32> = counts.keys().map(|&(_, p)| p).collect();
    network_periods.sort_unstable();
    network_periods.dedup();

    let empty_columns: Vec<u32> = orbit_periods
        .iter()
        .filter(|&&k| !counts.keys().any(|&(ck, _)| ck == k))
        .copied()
        .collect();

    let rows = network_periods.len();
    let cols = orbit_periods.len();
    let mut cells = vec![0.0; rows * cols];
    if binary {
        for (c, &k) in orbit_periods.iter().enumerate() {
            // Majority network period; ties go to the smaller period.
            let mut best: Option<(u32, u32)> = None;
            for (&(ck, p), &n) in &counts {
                if ck != k {
                    continue;
                }
                best = match best {
                    None => Some((n, p)),
                    Some((bn, bp)) if n > bn || (n == bn && p < bp) => Some((n, p)),
                    keep => keep,
                };
            }
            if let Some((_, p)) = best {
                let r = network_periods.iter().position(|&q| q == p).unwrap();
                cells[r * cols + c] = 1.0;
            }
        }
    } else {
        for (c, &k) in orbit_periods.iter().enumerate() {
            let total: u32 = counts
                .iter()
                .filter(|(&(ck, _), _)| ck == k)
                .map(|(_, &n)| n)
                .sum();
            if total == 0 {
                continue;
            }
            for (r, &p) in network_periods.iter().enumerate() {
                if let Some(&n) = counts.get(&(k, p)) {
                    cells[r * cols + c] = n as f64 / total as f64;
                }
            }
        }
    }

    PeriodMatrix { orbit_periods, network_periods, cells, binary, empty_columns }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixClass {
    /// Equal to the untrained-network theoretical prediction on every
    /// populated column.
    ClassA,
    /// Canonical hash of the column-to-period mapping, for grouping.
    Other(String),
}

pub fn classify_model_matrix(pm: &PeriodMatrix) -> MatrixClass {
    assert!(pm.binary, "classification is defined on binary matrices");
    let majority = pm.column_majority();
    let mut is_class_a = !majority.is_empty();
    for (&orbit, &net) in &majority {
        match theoretical_network_period(orbit as usize) {
            Ok(expected) if expected as u32 == net => {}
            _ => {
                is_class_a = false;
                break;
            }
        }
    }
    if is_class_a {
        MatrixClass::ClassA
    } else {
        let canonical: String = majority
            .iter()
            .map(|(k, p)| format!("{k}:{p};"))
            .collect();
        MatrixClass::Other(format!("{:016x}", crate::fnv1a(canonical.as_bytes())))
    }
}

/// Random k-periodic inputs (uniform base values tiled to `len`) for every
/// requested period.
pub fn synthetic_probes(
    periods: &[u32],
    per_period: usize,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(u32, Vec<f64>)> {
    let mut probes = Vec::new();
    for &k in periods {
        for _ in 0..per_period {
            let base: Vec<f64> = (0..k as usize).map(|_| rng.gen::<f64>()).collect();
            let input: Vec<f64> = (0..len).map(|i| base[i % k as usize]).collect();
            probes.push((k, input));
        }
    }
    probes
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramRow {
    pub x1: f64,
    pub x2: f64,
    /// Flatten period and zero-position pattern of one period block,
    /// e.g. "p5:00101".
    pub pattern_id: String,
    pub network_period: u32,
    pub label: Label,
}

/// Probes period-2 inputs (x1, x2, x1, x2, ...) over a lattice on [0,1]^2,
/// recording the zero-activation pattern of one flatten period block and
/// the model's prediction.
pub fn period2_diagram(model: &LkcnnModel, resolution: usize) -> Result<Vec<DiagramRow>> {
    if resolution < 2 {
        return Err(Error::Rejected("lattice resolution must be >= 2".into()));
    }
    let len = model.config.input_len;
    let mut rows = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        let x1 = i as f64 / (resolution - 1) as f64;
        for j in 0..resolution {
            let x2 = j as f64 / (resolution - 1) as f64;
            let input: Vec<f64> =
                (0..len).map(|t| if t % 2 == 0 { x1 } else { x2 }).collect();
            let (_, trace) = forward(model, &input, Mode::Infer)?;
            let flat = &trace.flatten;
            let interior = &flat[FLATTEN_EDGE_EXCLUDE..flat.len() - FLATTEN_EDGE_EXCLUDE];
            let p = sequence_period(interior, DEFAULT_REL_TOL);
            let period = if p == interior.len() { flat.len() } else { p };
            let block = &flat[..period.min(flat.len())];
            let zeros: String = block
                .iter()
                .map(|&v| if v.abs() <= 1e-12 { '1' } else { '0' })
                .collect();
            let (label, _) = predict(model, &input)?;
            rows.push(DiagramRow {
                x1,
                x2,
                pattern_id: format!("p{period}:{zeros}"),
                network_period: period as u32,
                label,
            });
        }
    }
    Ok(rows)
}

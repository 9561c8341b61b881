//! Labeled corpora of orbit windows: construction over parameter grids,
//! orbit-period detection via the period-error functional, stratified
//! splits, and CSV persistence with a JSON manifest.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lyapunov::{lyapunov_converged, Label, LyapunovEstimate};
use crate::maps::{
    generate_orbit, parameter_grid, MapKind, MapSpec, OrbitSequence, ParameterGrid,
    DEFAULT_BURN_IN, LOGISTIC_CHAOS_ONSET,
};

/// Periodicity threshold on the period error.
pub const PERIOD_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    Periodic(u32),
    NonPeriodic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSequence {
    pub seq: OrbitSequence,
    pub label: Label,
    pub regularity: Regularity,
    pub lyap: LyapunovEstimate,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub entries: Vec<LabeledSequence>,
    pub split: Split,
    pub grid: ParameterGrid,
    /// Entries whose exponent failed to certify at least 2 decimals; kept in
    /// the manifest, excluded from all splits.
    pub excluded: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodErrorResult {
    pub error: f64,
    /// Smallest argmin chunk length.
    pub k: u32,
}

/// Mean absolute difference between consecutive length-k chunks, minimized
/// over k <= n/2; the reported value is the minimum over the original and
/// the reversed sequence.
pub fn period_error(x: &[f64]) -> PeriodErrorResult {
    let fwd = period_error_one_way(x);
    let rev: Vec<f64> = x.iter().rev().copied().collect();
    let bwd = period_error_one_way(&rev);
    if bwd.error < fwd.error || (bwd.error == fwd.error && bwd.k < fwd.k) {
        bwd
    } else {
        fwd
    }
}

fn period_error_one_way(x: &[f64]) -> PeriodErrorResult {
    let n = x.len();
    assert!(n >= 4, "period error needs at least 4 samples");
    let mut best = PeriodErrorResult { error: f64::INFINITY, k: 1 };
    for k in 1..=n / 2 {
        let chunks = n / k;
        let mut acc = 0.0;
        for m in 0..chunks - 1 {
            let a = &x[m * k..(m + 1) * k];
            let b = &x[(m + 1) * k..(m + 2) * k];
            let d: f64 = a.iter().zip(b).map(|(p, q)| (p - q).abs()).sum();
            acc += d / k as f64;
        }
        let err = acc / (chunks - 1) as f64;
        if err < best.error {
            best = PeriodErrorResult { error: err, k: k as u32 };
        }
    }
    best
}

/// Periodic(K) if the period error falls below `tol`, else NonPeriodic.
pub fn detect_orbit_period(values: &[f64], tol: f64) -> Regularity {
    assert!(tol > 0.0);
    let pe = period_error(values);
    if pe.error < tol {
        Regularity::Periodic(pe.k)
    } else {
        Regularity::NonPeriodic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DatasetKind {
    LogisticLog,
    LogisticLinear,
    SineCircleLinear,
}

impl DatasetKind {
    pub fn name(&self) -> &'static str {
        match self {
            DatasetKind::LogisticLog => "logistic-log",
            DatasetKind::LogisticLinear => "logistic-linear",
            DatasetKind::SineCircleLinear => "sine-circle-linear",
        }
    }

    /// Default parameter grid for each corpus.
    pub fn default_grid(&self, count: usize) -> ParameterGrid {
        match self {
            DatasetKind::LogisticLog => {
                ParameterGrid::log_at_onset(3.2, 4.0, count, LOGISTIC_CHAOS_ONSET)
            }
            DatasetKind::LogisticLinear => ParameterGrid::linear(2.5, 4.0, count),
            DatasetKind::SineCircleLinear => ParameterGrid::linear(0.0, 5.0, count),
        }
    }

    fn map_spec(&self, param: f64) -> MapSpec {
        match self {
            DatasetKind::LogisticLog | DatasetKind::LogisticLinear => MapSpec::logistic(param),
            DatasetKind::SineCircleLinear => MapSpec::sine_circle(param),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BuildOptions {
    pub grid_size: usize,
    /// Observation window length.
    pub n: usize,
    /// Decimal precision used for labeling.
    pub k_label: u32,
    pub burn_in: u64,
    pub lyap_n_max: u64,
    /// Seed for the stratified split shuffle.
    pub seed: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            grid_size: 1000,
            n: 500,
            k_label: 4,
            burn_in: DEFAULT_BURN_IN,
            lyap_n_max: crate::lyapunov::DEFAULT_N_MAX,
            seed: 1,
        }
    }
}

/// Builds one labeled entry per grid parameter; labels come from the
/// converged exponent, regularity from the period error on the window.
pub fn build_dataset(kind: DatasetKind, opts: &BuildOptions) -> Result<Dataset> {
    if opts.grid_size < 10 {
        return Err(Error::Rejected("grid size must be >= 10".into()));
    }
    let grid = kind.default_grid(opts.grid_size);
    build_dataset_on_grid(kind, grid, opts)
}

pub fn build_dataset_on_grid(
    kind: DatasetKind,
    grid: ParameterGrid,
    opts: &BuildOptions,
) -> Result<Dataset> {
    let params = parameter_grid(&grid)?;
    let entries: Result<Vec<LabeledSequence>> = params
        .par_iter()
        .map(|&p| {
            let spec = kind.map_spec(p);
            let seq = generate_orbit(&spec, opts.burn_in, opts.n)?;
            let lyap = lyapunov_converged(&spec, opts.burn_in, opts.lyap_n_max, opts.k_label)?;
            let regularity = if lyap.label == Label::Chaotic {
                Regularity::NonPeriodic
            } else {
                detect_orbit_period(&seq.values, PERIOD_TOL)
            };
            Ok(LabeledSequence { seq, label: lyap.label, regularity, lyap })
        })
        .collect();
    let entries = entries?;

    let excluded: Vec<usize> = entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.lyap.decimals_converged < 2)
        .map(|(i, _)| i)
        .collect();

    let split = stratified_split(&entries, &excluded, opts.seed);
    Ok(Dataset {
        name: kind.name().to_string(),
        entries,
        split,
        grid,
        excluded,
    })
}

/// 80/10/10 train/validation/test, stratified by label.
fn stratified_split(entries: &[LabeledSequence], excluded: &[usize], seed: u64) -> Split {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = Split::default();
    for label in [Label::Chaotic, Label::Regular] {
        let mut idx: Vec<usize> = entries
            .iter()
            .enumerate()
            .filter(|(i, e)| e.label == label && !excluded.contains(i))
            .map(|(i, _)| i)
            .collect();
        idx.shuffle(&mut rng);
        let n = idx.len();
        let n_train = (n as f64 * 0.8).floor() as usize;
        let n_val = (n as f64 * 0.1).floor() as usize;
        split.train.extend(&idx[..n_train]);
        split.validation.extend(&idx[n_train..n_train + n_val]);
        split.test.extend(&idx[n_train + n_val..]);
    }
    split.train.sort_unstable();
    split.validation.sort_unstable();
    split.test.sort_unstable();
    split
}

/// Class proportions (chaotic, regular-periodic, regular-non-periodic) over
/// the non-excluded entries.
pub fn proportions(ds: &Dataset) -> (f64, f64, f64) {
    let mut chaotic = 0usize;
    let mut periodic = 0usize;
    let mut nonper = 0usize;
    for (i, e) in ds.entries.iter().enumerate() {
        if ds.excluded.contains(&i) {
            continue;
        }
        match (e.label, e.regularity) {
            (Label::Chaotic, _) => chaotic += 1,
            (Label::Regular, Regularity::Periodic(_)) => periodic += 1,
            (Label::Regular, Regularity::NonPeriodic) => nonper += 1,
        }
    }
    let total = (chaotic + periodic + nonper).max(1) as f64;
    (chaotic as f64 / total, periodic as f64 / total, nonper as f64 / total)
}

/// Counts of periodic entries per detected period within `range`.
pub fn period_histogram(ds: &Dataset, range: (u32, u32)) -> Vec<(u32, usize)> {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for e in &ds.entries {
        if let Regularity::Periodic(p) = e.regularity {
            if p >= range.0 && p <= range.1 {
                *counts.entry(p).or_insert(0) += 1;
            }
        }
    }
    counts.into_iter().collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    tool_version: String,
    name: String,
    grid: ParameterGrid,
    n: usize,
    burn_in: u64,
    omega: f64,
    x0: f64,
    proportions: (f64, f64, f64),
    split: Split,
    excluded: Vec<usize>,
}

fn manifest_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".manifest.json");
    PathBuf::from(p)
}

/// Writes `<path>` (CSV) and `<path>.manifest.json`.
pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    let n = ds.entries.first().map_or(0, |e| e.seq.values.len());
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(out, "map,param,label,regularity,orbit_period,lyap_value,lyap_decimals")?;
    for i in 0..n {
        write!(out, ",x_{i}")?;
    }
    writeln!(out)?;
    for e in &ds.entries {
        let map = match e.seq.spec.kind {
            MapKind::Logistic => "logistic",
            MapKind::SineCircle => "sine-circle",
        };
        let (reg, period) = match e.regularity {
            Regularity::Periodic(p) => ("periodic", p),
            Regularity::NonPeriodic => ("non-periodic", 0),
        };
        let label = match e.label {
            Label::Chaotic => "chaotic",
            Label::Regular => "regular",
        };
        write!(
            out,
            "{map},{:.16e},{label},{reg},{period},{:.16e},{}",
            e.seq.spec.param, e.lyap.value, e.lyap.decimals_converged
        )?;
        for v in &e.seq.values {
            write!(out, ",{v:.16e}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;

    let first = ds.entries.first();
    let manifest = Manifest {
        tool_version: crate::VERSION.to_string(),
        name: ds.name.clone(),
        grid: ds.grid,
        n,
        burn_in: first.map_or(DEFAULT_BURN_IN, |e| e.seq.burn_in),
        omega: first.map_or(crate::maps::DEFAULT_OMEGA, |e| e.seq.spec.omega),
        x0: first.map_or(0.5, |e| e.seq.spec.x0),
        proportions: proportions(ds),
        split: ds.split.clone(),
        excluded: ds.excluded.clone(),
    };
    let mf = std::fs::File::create(manifest_path(path))?;
    serde_json::to_writer_pretty(mf, &manifest)
        .map_err(|e| Error::ModelFile(format!("manifest write: {e}")))?;
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let manifest: Manifest = {
        let f = std::fs::File::open(manifest_path(path))?;
        serde_json::from_reader(f)
            .map_err(|e| Error::Parse { line: 0, msg: format!("manifest: {e}") })?
    };

    let file = BufReader::new(std::fs::File::open(path)?);
    let mut lines = file.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let header = header?;
    let n_cols = header.split(',').count();
    if n_cols != 7 + manifest.n {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected {} columns, found {n_cols}", 7 + manifest.n),
        });
    }

    let mut entries = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n_cols {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {n_cols} fields, found {}", fields.len()),
            });
        }
        let perr = |msg: String| Error::Parse { line: lineno, msg };
        let kind = match fields[0] {
            "logistic" => MapKind::Logistic,
            "sine-circle" => MapKind::SineCircle,
            other => return Err(perr(format!("unknown map '{other}'"))),
        };
        let param: f64 = fields[1].parse().map_err(|e| perr(format!("param: {e}")))?;
        let label = match fields[2] {
            "chaotic" => Label::Chaotic,
            "regular" => Label::Regular,
            other => return Err(perr(format!("unknown label '{other}'"))),
        };
        let period: u32 =
            fields[4].parse().map_err(|e| perr(format!("orbit_period: {e}")))?;
        let regularity = match fields[3] {
            "periodic" => Regularity::Periodic(period),
            "non-periodic" => Regularity::NonPeriodic,
            other => return Err(perr(format!("unknown regularity '{other}'"))),
        };
        let lyap_value: f64 =
            fields[5].parse().map_err(|e| perr(format!("lyap_value: {e}")))?;
        let lyap_decimals: u32 =
            fields[6].parse().map_err(|e| perr(format!("lyap_decimals: {e}")))?;
        let mut values = Vec::with_capacity(manifest.n);
        for f in &fields[7..] {
            values.push(f.parse().map_err(|e| perr(format!("value: {e}")))?);
        }
        let spec = MapSpec { kind, param, omega: manifest.omega, x0: manifest.x0 };
        entries.push(LabeledSequence {
            seq: OrbitSequence { spec, burn_in: manifest.burn_in, values },
            label,
            regularity,
            lyap: LyapunovEstimate {
                value: lyap_value,
                decimals_converged: lyap_decimals,
                n_used: 0,
                label,
            },
        });
    }

    Ok(Dataset {
        name: manifest.name,
        entries,
        split: manifest.split,
        grid: manifest.grid,
        excluded: manifest.excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_two_periodic() {
        let x: Vec<f64> = (0..500).map(|i| if i % 2 == 0 { 0.2 } else { 0.7 }).collect();
        let pe = period_error(&x);
        assert_eq!(pe.error, 0.0);
        assert_eq!(pe.k, 2);
    }

    #[test]
    fn constant_sequence_is_period_one() {
        let x = vec![0.42; 100];
        let pe = period_error(&x);
        assert_eq!(pe.error, 0.0);
        assert_eq!(pe.k, 1);
    }

    #[test]
    fn chaotic_window_has_large_error() {
        let seq = generate_orbit(&MapSpec::logistic(4.0).with_x0(0.3), 10_000, 500).unwrap();
        let pe = period_error(&seq.values);
        assert!(pe.error > 1e-2, "error {}", pe.error);
    }

    #[test]
    fn tiled_patterns_yield_zero_error_and_dividing_period() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let k = rng.gen_range(1..=250usize);
            let base: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            let x: Vec<f64> = (0..500).map(|i| base[i % k]).collect();
            let pe = period_error(&x);
            assert_eq!(pe.error, 0.0, "k={k}");
            assert!(pe.k as usize <= k);
            assert_eq!(k % pe.k as usize, 0, "K={} does not divide k={k}", pe.k);
        }
    }

    #[test]
    fn reversal_symmetry() {
        let seq = generate_orbit(&MapSpec::sine_circle(0.9), 10_000, 500).unwrap();
        let rev: Vec<f64> = seq.values.iter().rev().copied().collect();
        let a = period_error(&seq.values);
        let b = period_error(&rev);
        assert_eq!(a.error, b.error);
        assert_eq!(a.k, b.k);
    }

    #[test]
    fn detect_period_two_and_three() {
        let s2 = generate_orbit(&MapSpec::logistic(3.2), 2000, 500).unwrap();
        assert_eq!(detect_orbit_period(&s2.values, PERIOD_TOL), Regularity::Periodic(2));
        let s3 = generate_orbit(&MapSpec::logistic(3.835), 10_000, 500).unwrap();
        assert_eq!(detect_orbit_period(&s3.values, PERIOD_TOL), Regularity::Periodic(3));
    }

    #[test]
    fn detect_chaotic_sine_circle_nonperiodic() {
        let s = generate_orbit(&MapSpec::sine_circle(2.2), 10_000, 500).unwrap();
        assert_eq!(detect_orbit_period(&s.values, PERIOD_TOL), Regularity::NonPeriodic);
    }

    #[test]
    fn small_build_has_consistent_labels_and_split() {
        let opts = BuildOptions {
            grid_size: 60,
            lyap_n_max: 200_000,
            ..BuildOptions::default()
        };
        let ds = build_dataset(DatasetKind::LogisticLog, &opts).unwrap();
        assert_eq!(ds.entries.len(), 60);
        for e in &ds.entries {
            if e.label == Label::Chaotic {
                assert_eq!(e.regularity, Regularity::NonPeriodic);
            }
        }
        // Split indices are disjoint and cover all non-excluded entries.
        let mut all: Vec<usize> = ds
            .split
            .train
            .iter()
            .chain(&ds.split.validation)
            .chain(&ds.split.test)
            .copied()
            .collect();
        all.sort_unstable();
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(all.len(), dedup.len(), "split indices overlap");
        assert_eq!(all.len() + ds.excluded.len(), ds.entries.len());
    }

    #[test]
    fn save_load_round_trip_is_bitwise() {
        let opts = BuildOptions {
            grid_size: 12,
            lyap_n_max: 100_000,
            ..BuildOptions::default()
        };
        let ds = build_dataset(DatasetKind::SineCircleLinear, &opts).unwrap();
        let dir = std::env::temp_dir().join("lkclab_ds_roundtrip");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ds.csv");
        save_dataset(&ds, &path).unwrap();
        let loaded = load_dataset(&path).unwrap();
        assert_eq!(ds.entries.len(), loaded.entries.len());
        for (a, b) in ds.entries.iter().zip(&loaded.entries) {
            assert_eq!(a.seq.values, b.seq.values);
            assert_eq!(a.label, b.label);
            assert_eq!(a.regularity, b.regularity);
            assert_eq!(a.lyap.value, b.lyap.value);
        }
        assert_eq!(ds.split, loaded.split);
        assert_eq!(ds.grid, loaded.grid);
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let dir = std::env::temp_dir().join("lkclab_ds_truncated");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ds.csv");
        let opts = BuildOptions {
            grid_size: 10,
            lyap_n_max: 100_000,
            n: 16,
            ..BuildOptions::default()
        };
        let ds = build_dataset(DatasetKind::LogisticLinear, &opts).unwrap();
        save_dataset(&ds, &path).unwrap();
        let content = std::fs::read_to_string(&path).unwrap();
        let cut = &content[..content.len() * 2 / 3];
        std::fs::write(&path, cut).unwrap();
        match load_dataset(&path) {
            Err(Error::Parse { line, .. }) => assert!(line > 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}

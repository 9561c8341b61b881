//! Classification metrics: accuracy, per-class precision, regularity-
//! stratified evaluation, decimal-convergence breakdowns, and accuracy as a
//! function of the approximate orbit period.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Regularity};
use crate::error::{Error, Result};
use crate::lyapunov::{label_from_lambda, Label};

/// A classifier under evaluation: maps an observation window to a label.
/// Windows it cannot classify surface as errors and fail the evaluation.
pub trait Classifier {
    fn classify(&self, window: &[f64]) -> Result<Label>;
}

impl<F: Fn(&[f64]) -> Result<Label>> Classifier for F {
    fn classify(&self, window: &[f64]) -> Result<Label> {
        self(window)
    }
}

/// Adapts an entry-level decision rule (one that needs the map spec or the
/// stored exponent, not just the window) into a window classifier by locating
/// the dataset entry the window came from.
pub fn entry_classifier<'a, F>(
    ds: &'a Dataset,
    rule: F,
) -> impl Fn(&[f64]) -> Result<Label> + 'a
where
    F: Fn(&'a crate::dataset::LabeledSequence) -> Result<Label> + 'a,
{
    move |window: &[f64]| {
        let entry = ds
            .entries
            .iter()
            .find(|e| {
                std::ptr::eq(e.seq.values.as_ptr(), window.as_ptr())
                    || e.seq.values.as_slice() == window
            })
            .ok_or_else(|| {
                Error::UndefinedMetric("window does not belong to this dataset".into())
            })?;
        rule(entry)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    /// Regular windows predicted regular.
    pub t_regular: usize,
    /// Chaotic windows predicted chaotic.
    pub t_chaotic: usize,
    /// Chaotic windows predicted regular.
    pub f_regular: usize,
    /// Regular windows predicted chaotic.
    pub f_chaotic: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.t_regular + self.t_chaotic + self.f_regular + self.f_chaotic
    }

    pub fn tally(&mut self, truth: Label, predicted: Label) {
        match (truth, predicted) {
            (Label::Regular, Label::Regular) => self.t_regular += 1,
            (Label::Chaotic, Label::Chaotic) => self.t_chaotic += 1,
            (Label::Chaotic, Label::Regular) => self.f_regular += 1,
            (Label::Regular, Label::Chaotic) => self.f_chaotic += 1,
        }
    }
}

pub fn accuracy(c: &ConfusionCounts) -> Result<f64> {
    let total = c.total();
    if total == 0 {
        return Err(Error::UndefinedMetric("accuracy of an empty set".into()));
    }
    Ok((c.t_regular + c.t_chaotic) as f64 / total as f64)
}

/// Precision for one predicted class; undefined when that class was never
/// predicted.
pub fn precision(c: &ConfusionCounts, class: Label) -> Result<f64> {
    let (tp, fp) = match class {
        Label::Chaotic => (c.t_chaotic, c.f_chaotic),
        Label::Regular => (c.t_regular, c.f_regular),
    };
    if tp + fp == 0 {
        return Err(Error::UndefinedMetric(format!(
            "precision for {class:?}: class never predicted"
        )));
    }
    Ok(tp as f64 / (tp + fp) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subset {
    Chaotic,
    RegularPeriodic,
    RegularNonPeriodic,
}

impl Subset {
    pub fn of(entry_label: Label, regularity: Regularity) -> Subset {
        match (entry_label, regularity) {
            (Label::Chaotic, _) => Subset::Chaotic,
            (Label::Regular, Regularity::Periodic(_)) => Subset::RegularPeriodic,
            (Label::Regular, Regularity::NonPeriodic) => Subset::RegularNonPeriodic,
        }
    }

    pub const ALL: [Subset; 3] =
        [Subset::Chaotic, Subset::RegularPeriodic, Subset::RegularNonPeriodic];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsetAccuracy {
    pub subset: Subset,
    /// `None` marks an absent (empty) subset.
    pub accuracy: Option<f64>,
    pub count: usize,
}

/// Accuracy per regularity subset over the given entry indices (typically a
/// dataset's test split). Subsets partition the indices.
pub fn stratified_eval<C: Classifier>(
    classifier: &C,
    ds: &Dataset,
    indices: &[usize],
) -> Result<Vec<SubsetAccuracy>> {
    let mut correct: BTreeMap<Subset, usize> = BTreeMap::new();
    let mut seen: BTreeMap<Subset, usize> = BTreeMap::new();
    for &i in indices {
        let e = &ds.entries[i];
        let subset = Subset::of(e.label, e.regularity);
        let pred = classifier.classify(&e.seq.values)?;
        *seen.entry(subset).or_insert(0) += 1;
        if pred == e.label {
            *correct.entry(subset).or_insert(0) += 1;
        }
    }
    Ok(Subset::ALL
        .iter()
        .map(|&s| {
            let n = seen.get(&s).copied().unwrap_or(0);
            SubsetAccuracy {
                subset: s,
                accuracy: (n > 0)
                    .then(|| correct.get(&s).copied().unwrap_or(0) as f64 / n as f64),
                count: n,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStat {
    pub mean: f64,
    /// Population standard deviation.
    pub std_dev: f64,
    pub n: usize,
}

pub fn ensemble_stats(values: &[f64]) -> Result<EnsembleStat> {
    if values.is_empty() {
        return Err(Error::UndefinedMetric("ensemble statistics of no runs".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(EnsembleStat { mean, std_dev: var.sqrt(), n: values.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecimalConvergenceRow {
    pub k: u32,
    pub chaotic_accuracy: Option<f64>,
    pub chaotic_count: usize,
    pub nonperiodic_accuracy: Option<f64>,
    pub nonperiodic_count: usize,
    /// Set when either subset is empty at this k.
    pub unreliable: bool,
}

/// Per decimal precision k, restricts to entries certified to at least k
/// decimals, relabels them by k-decimal rounding of the converged exponent,
/// and reports accuracy on the chaotic and regular-non-periodic subsets.
pub fn eval_vs_decimal_convergence<C: Classifier>(
    classifier: &C,
    ds: &Dataset,
    indices: &[usize],
    k_range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<DecimalConvergenceRow>> {
    let mut rows = Vec::new();
    for k in k_range {
        let mut chaotic = (0usize, 0usize); // (correct, total)
        let mut nonper = (0usize, 0usize);
        for &i in indices {
            let e = &ds.entries[i];
            if e.lyap.decimals_converged < k {
                continue;
            }
            let truth = label_from_lambda(e.lyap.value, k);
            let bucket = match (truth, e.regularity) {
                (Label::Chaotic, _) => &mut chaotic,
                (Label::Regular, Regularity::NonPeriodic) => &mut nonper,
                _ => continue,
            };
            bucket.1 += 1;
            if classifier.classify(&e.seq.values)? == truth {
                bucket.0 += 1;
            }
        }
        rows.push(DecimalConvergenceRow {
            k,
            chaotic_accuracy: (chaotic.1 > 0).then(|| chaotic.0 as f64 / chaotic.1 as f64),
            chaotic_count: chaotic.1,
            nonperiodic_accuracy: (nonper.1 > 0).then(|| nonper.0 as f64 / nonper.1 as f64),
            nonperiodic_count: nonper.1,
            unreliable: chaotic.1 == 0 || nonper.1 == 0,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KBucket {
    pub k: u32,
    pub accuracy: f64,
    pub count: usize,
    pub power_of_two: bool,
}

/// Accuracy over periodic regular entries, bucketed by detected orbit period
/// K. Power-of-two periods are flagged so trend analysis can evaluate them
/// separately; empty buckets are omitted.
pub fn accuracy_vs_k<C: Classifier>(
    classifier: &C,
    ds: &Dataset,
    indices: &[usize],
) -> Result<Vec<KBucket>> {
    let mut buckets: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for &i in indices {
        let e = &ds.entries[i];
        let k = match (e.label, e.regularity) {
            (Label::Regular, Regularity::Periodic(k)) => k,
            _ => continue,
        };
        let cell = buckets.entry(k).or_insert((0, 0));
        cell.1 += 1;
        if classifier.classify(&e.seq.values)? == Label::Regular {
            cell.0 += 1;
        }
    }
    Ok(buckets
        .into_iter()
        .map(|(k, (correct, total))| KBucket {
            k,
            accuracy: correct as f64 / total as f64,
            count: total,
            power_of_two: k.is_power_of_two(),
        })
        .collect())
}

/// Spearman rank correlation with average ranks for ties.
pub fn rank_correlation(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::UndefinedMetric(
            "rank correlation needs two same-length series of length >= 2".into(),
        ));
    }
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        num += (a - mx) * (b - my);
        dx += (a - mx) * (a - mx);
        dy += (b - my) * (b - my);
    }
    if dx == 0.0 || dy == 0.0 {
        return Err(Error::UndefinedMetric("rank correlation of a constant series".into()));
    }
    Ok(num / (dx * dy).sqrt())
}

fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{build_dataset_on_grid, BuildOptions, DatasetKind};
    use crate::maps::ParameterGrid;

    fn counts(tr: usize, tc: usize, fr: usize, fc: usize) -> ConfusionCounts {
        ConfusionCounts { t_regular: tr, t_chaotic: tc, f_regular: fr, f_chaotic: fc }
    }

    #[test]
    fn accuracy_examples() {
        assert!((accuracy(&counts(9, 8, 2, 1)).unwrap() - 0.85).abs() < 1e-15);
        assert_eq!(accuracy(&counts(5, 5, 0, 0)).unwrap(), 1.0);
        assert_eq!(accuracy(&counts(0, 0, 3, 4)).unwrap(), 0.0);
        assert!(accuracy(&counts(0, 0, 0, 0)).is_err());
    }

    #[test]
    fn precision_examples() {
        let c = counts(0, 5, 0, 5);
        assert_eq!(precision(&c, Label::Chaotic).unwrap(), 0.5);
        assert!(precision(&c, Label::Regular).is_err());
        let perfect = counts(3, 4, 0, 0);
        assert_eq!(precision(&perfect, Label::Chaotic).unwrap(), 1.0);
        assert_eq!(precision(&perfect, Label::Regular).unwrap(), 1.0);
    }

    #[test]
    fn accuracy_is_weighted_mean_of_recalls() {
        let c = counts(7, 5, 3, 1);
        let recall_reg = 7.0 / 8.0;
        let recall_cha = 5.0 / 8.0;
        let weighted = (8.0 * recall_reg + 8.0 * recall_cha) / 16.0;
        assert!((accuracy(&c).unwrap() - weighted).abs() < 1e-15);
    }

    fn toy_dataset() -> Dataset {
        let grid = ParameterGrid::linear(2.8, 4.0, 40);
        build_dataset_on_grid(
            DatasetKind::LogisticLinear,
            grid,
            &BuildOptions {
                grid_size: 40,
                n: 60,
                lyap_n_max: 200_000,
                k_label: 2,
                ..BuildOptions::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn perfect_and_constant_classifiers_on_a_real_dataset() {
        let ds = toy_dataset();
        let all: Vec<usize> = (0..ds.entries.len())
            .filter(|i| !ds.excluded.contains(i))
            .collect();

        let truths: Vec<Label> = ds.entries.iter().map(|e| e.label).collect();
        let perfect = |window: &[f64]| -> Result<Label> {
            let i = ds
                .entries
                .iter()
                .position(|e| e.seq.values == window)
                .expect("window from this dataset");
            Ok(truths[i])
        };
        let rows = stratified_eval(&perfect, &ds, &all).unwrap();
        let mut total = 0usize;
        for r in &rows {
            if r.count > 0 {
                assert_eq!(r.accuracy, Some(1.0));
            } else {
                assert_eq!(r.accuracy, None);
            }
            total += r.count;
        }
        assert_eq!(total, all.len(), "subsets partition the index set");

        let always_regular = |_: &[f64]| Ok(Label::Regular);
        let rows = stratified_eval(&always_regular, &ds, &all).unwrap();
        for r in rows {
            match r.subset {
                Subset::Chaotic if r.count > 0 => assert_eq!(r.accuracy, Some(0.0)),
                _ if r.count > 0 => assert_eq!(r.accuracy, Some(1.0)),
                _ => {}
            }
        }
    }

    #[test]
    fn ensemble_stats_population_std() {
        let s = ensemble_stats(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((s.mean - 2.5).abs() < 1e-15);
        assert!((s.std_dev - (1.25f64).sqrt()).abs() < 1e-15);
        assert_eq!(s.n, 4);
        assert!(ensemble_stats(&[]).is_err());
    }

    #[test]
    fn decimal_convergence_shrinks_with_k_and_flags_empty() {
        let ds = toy_dataset();
        let all: Vec<usize> = (0..ds.entries.len()).collect();
        let always_chaotic = |_: &[f64]| Ok(Label::Chaotic);
        let rows =
            eval_vs_decimal_convergence(&always_chaotic, &ds, &all, 2..=5).unwrap();
        assert_eq!(rows.len(), 4);
        for w in rows.windows(2) {
            assert!(w[1].chaotic_count <= w[0].chaotic_count);
            assert!(w[1].nonperiodic_count <= w[0].nonperiodic_count);
        }
        for r in &rows {
            if let Some(a) = r.chaotic_accuracy {
                assert_eq!(a, 1.0);
            }
            if r.chaotic_count == 0 || r.nonperiodic_count == 0 {
                assert!(r.unreliable);
            }
        }
    }

    #[test]
    fn k_buckets_flag_powers_of_two_and_omit_empty() {
        let ds = toy_dataset();
        let all: Vec<usize> = (0..ds.entries.len()).collect();
        let always_regular = |_: &[f64]| Ok(Label::Regular);
        let buckets = accuracy_vs_k(&always_regular, &ds, &all).unwrap();
        assert!(!buckets.is_empty());
        for b in &buckets {
            assert!(b.count > 0);
            assert_eq!(b.accuracy, 1.0);
            assert_eq!(b.power_of_two, b.k.is_power_of_two());
        }
    }

    #[test]
    fn rank_correlation_examples() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let inc = [2.0, 4.0, 6.0, 8.0, 10.0];
        let dec = [5.0, 4.0, 3.0, 2.0, 1.0];
        assert!((rank_correlation(&xs, &inc).unwrap() - 1.0).abs() < 1e-12);
        assert!((rank_correlation(&xs, &dec).unwrap() + 1.0).abs() < 1e-12);
        assert!(rank_correlation(&xs, &[1.0; 5]).is_err());
        // Ties get average ranks.
        let tied = [1.0, 1.0, 2.0];
        let r = rank_correlation(&tied, &[1.0, 2.0, 3.0]).unwrap();
        assert!(r > 0.0 && r < 1.0);
    }
}

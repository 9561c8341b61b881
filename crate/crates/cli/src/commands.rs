//! Subcommand implementations. Each command reads the resolved config,
//! performs one experiment stage, and writes CSV/JSON artifacts under the
//! configured output directory.

use std::path::{Path, PathBuf};

use lkclab_core::dataset::{
    build_dataset, load_dataset, period_histogram, proportions, save_dataset, BuildOptions,
    Dataset, Regularity,
};
use lkclab_core::error::{Error, Result};
use lkclab_core::lkcnn::{
    evaluate, init_model, load_model, predict, save_model, train, LkcnnModel, TrainSample,
};
use lkclab_core::lyapunov::{label_from_lambda, short_time_lyapunov, Label};
use lkclab_core::metrics::{
    accuracy_vs_k, ensemble_stats, entry_classifier, eval_vs_decimal_convergence, precision,
    rank_correlation, stratified_eval, ConfusionCounts,
};
use lkclab_core::period::{
    build_period_matrix, classify_model_matrix, period2_diagram, sequence_period,
    strided_periodic_convolution, synthetic_probes, MatrixClass,
    PeriodMatrix,
};
use lkclab_core::sgfilter::{sg_classify, SgConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::output::{fmt_f64, fmt_opt, write_atomic, CsvDoc};

pub fn dataset_path(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output.dir.join(format!("{}.csv", cfg.dataset.kind))
}

pub fn models_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output.dir.join("models")
}

fn model_files(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Archives the resolved config so the run can be reproduced.
pub fn write_resolved_config(cfg: &ExperimentConfig) -> Result<()> {
    let path = cfg.output.dir.join("resolved-config.toml");
    let body = format!(
        "# tool_version = \"{}\"\n# config_hash = \"{}\"\n{}",
        lkclab_core::VERSION,
        cfg.hash(),
        cfg.to_toml()
    );
    write_atomic(&path, &body)
}

fn build_options(cfg: &ExperimentConfig) -> BuildOptions {
    BuildOptions {
        grid_size: cfg.dataset.grid,
        n: cfg.dataset.window,
        k_label: cfg.dataset.k_label,
        burn_in: cfg.dataset.burn_in,
        lyap_n_max: cfg.dataset.lyap_n_max,
        seed: cfg.ensemble.seed,
    }
}

/// Loads the corpus if already generated, otherwise builds and persists it.
pub fn ensure_dataset(cfg: &ExperimentConfig) -> Result<Dataset> {
    let path = dataset_path(cfg);
    if path.exists() {
        return load_dataset(&path);
    }
    let ds = build_dataset(cfg.dataset.dataset_kind()?, &build_options(cfg))?;
    std::fs::create_dir_all(&cfg.output.dir)?;
    save_dataset(&ds, &path)?;
    Ok(ds)
}

fn included_indices(ds: &Dataset) -> Vec<usize> {
    (0..ds.entries.len()).filter(|i| !ds.excluded.contains(i)).collect()
}

fn train_samples<'a>(ds: &'a Dataset, indices: &[usize]) -> Vec<TrainSample<'a>> {
    indices.iter().map(|&i| (ds.entries[i].seq.values.as_slice(), ds.entries[i].label)).collect()
}

fn lkcnn_classifier(model: &LkcnnModel) -> impl Fn(&[f64]) -> Result<Label> + '_ {
    move |w: &[f64]| predict(model, w).map(|(label, _)| label)
}

pub fn cmd_generate(cfg: &ExperimentConfig) -> Result<()> {
    write_resolved_config(cfg)?;
    let ds = build_dataset(cfg.dataset.dataset_kind()?, &build_options(cfg))?;
    std::fs::create_dir_all(&cfg.output.dir)?;
    save_dataset(&ds, &dataset_path(cfg))?;

    let mut doc = CsvDoc::new(&cfg.hash(), "orbit_period,count");
    doc.meta("dataset", &cfg.dataset.kind);
    for (p, n) in period_histogram(&ds, (1, 96)) {
        doc.row(&[p.to_string(), n.to_string()]);
    }
    write_atomic(
        &cfg.output.dir.join(format!("{}-period-histogram.csv", cfg.dataset.kind)),
        &doc.finish(),
    )?;

    let (c, p, np) = proportions(&ds);
    println!(
        "{}: {} entries ({} excluded) — chaotic {:.1}%, periodic {:.1}%, non-periodic {:.1}%",
        cfg.dataset.kind,
        ds.entries.len(),
        ds.excluded.len(),
        c * 100.0,
        p * 100.0,
        np * 100.0
    );
    Ok(())
}

pub fn cmd_train_ensemble(cfg: &ExperimentConfig) -> Result<()> {
    write_resolved_config(cfg)?;
    let ds = ensure_dataset(cfg)?;
    let train_set = train_samples(&ds, &ds.split.train);
    let val_set = train_samples(&ds, &ds.split.validation);
    let test_set = train_samples(&ds, &ds.split.test);
    let dir = models_dir(cfg);
    std::fs::create_dir_all(&dir)?;

    let mut doc = CsvDoc::new(
        &cfg.hash(),
        "seed,status,epochs_run,best_epoch,best_val_acc,test_acc",
    );
    doc.meta("dataset", &cfg.dataset.kind);
    for i in 0..cfg.ensemble.count {
        let model_cfg = cfg.lkcnn_config(i);
        let seed = model_cfg.seed;
        let path = dir.join(format!("model-{seed:04}.json"));
        let model = if path.exists() {
            // Resuming: completed seeds are left untouched.
            load_model(&path)?
        } else {
            let mut model = init_model(&model_cfg)?;
            match train(&mut model, &train_set, &val_set) {
                Ok(()) => {}
                Err(Error::Diverged { epoch }) => {
                    eprintln!("seed {seed}: diverged at epoch {epoch}, skipping");
                    doc.row(&[
                        seed.to_string(),
                        format!("diverged@{epoch}"),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                    ]);
                    continue;
                }
                Err(e) => return Err(e),
            }
            save_model(&model, &path)?;
            model
        };
        let best = model.best_epoch.and_then(|b| model.history.get(b));
        let (_, test_acc) = evaluate(&model, &test_set);
        doc.row(&[
            seed.to_string(),
            "ok".into(),
            model.history.len().to_string(),
            model.best_epoch.map_or(String::new(), |b| b.to_string()),
            best.map_or(String::new(), |s| format!("{:.6}", s.val_acc)),
            format!("{test_acc:.6}"),
        ]);
        println!("seed {seed}: {} epochs, test accuracy {test_acc:.4}", model.history.len());
    }
    write_atomic(&cfg.output.dir.join("ensemble-summary.csv"), &doc.finish())
}

pub fn cmd_evaluate(cfg: &ExperimentConfig) -> Result<()> {
    write_resolved_config(cfg)?;
    let ds = ensure_dataset(cfg)?;
    let files = model_files(&models_dir(cfg))?;
    if files.is_empty() {
        return Err(Error::Rejected(format!(
            "no model files under {}",
            models_dir(cfg).display()
        )));
    }
    let mut doc = CsvDoc::new(
        &cfg.hash(),
        "model,chaotic_acc,chaotic_n,periodic_acc,periodic_n,nonperiodic_acc,nonperiodic_n",
    );
    doc.meta("dataset", &cfg.dataset.kind);
    let mut per_subset: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for file in &files {
        let model = load_model(file)?;
        let rows = stratified_eval(&lkcnn_classifier(&model), &ds, &ds.split.test)?;
        let mut fields = vec![file.file_stem().unwrap().to_string_lossy().into_owned()];
        for (j, r) in rows.iter().enumerate() {
            fields.push(fmt_opt(r.accuracy));
            fields.push(r.count.to_string());
            if let Some(a) = r.accuracy {
                per_subset[j].push(a);
            }
        }
        doc.row(&fields);
    }
    for (j, name) in ["chaotic", "regular-periodic", "regular-non-periodic"]
        .iter()
        .enumerate()
    {
        if let Ok(s) = ensemble_stats(&per_subset[j]) {
            doc.meta(
                &format!("{name}_mean_std"),
                format!("{:.6}±{:.6} (n={})", s.mean, s.std_dev, s.n),
            );
        }
    }
    write_atomic(&cfg.output.dir.join("evaluate.csv"), &doc.finish())?;

    let (_, best) = best_model(&files)?;
    write_accuracy_vs_k(cfg, &ds, &best)
}

/// SG classifier over the configured corpus, reported per decimal-convergence
/// level; windows where the estimator fails outright are counted separately.
pub fn cmd_sg_eval(cfg: &ExperimentConfig) -> Result<()> {
    write_resolved_config(cfg)?;
    let ds = ensure_dataset(cfg)?;
    let sg_cfg = SgConfig::default();
    let mut usable = Vec::new();
    let mut failed = 0usize;
    for i in included_indices(&ds) {
        match sg_classify(&ds.entries[i].seq.values, &sg_cfg) {
            Ok(_) => usable.push(i),
            Err(Error::EstimatorFailed(_)) => failed += 1,
            Err(e) => return Err(e),
        }
    }
    let classifier = |w: &[f64]| sg_classify(w, &sg_cfg);
    let rows = eval_vs_decimal_convergence(
        &classifier,
        &ds,
        &usable,
        cfg.analysis.k_min..=cfg.analysis.k_max,
    )?;
    let mut doc = CsvDoc::new(
        &cfg.hash(),
        "k,chaotic_acc,chaotic_n,nonperiodic_acc,nonperiodic_n,unreliable",
    );
    doc.meta("dataset", &cfg.dataset.kind);
    doc.meta("estimator_failed", failed);
    for r in rows {
        doc.row(&[
            r.k.to_string(),
            fmt_opt(r.chaotic_accuracy),
            r.chaotic_count.to_string(),
            fmt_opt(r.nonperiodic_accuracy),
            r.nonperiodic_count.to_string(),
            r.unreliable.to_string(),
        ]);
    }
    write_atomic(&cfg.output.dir.join("sg-eval.csv"), &doc.finish())
}

/// Confusion counts on the restriction to entries certified to >= k decimals,
/// relabeled at k decimals, keeping chaotic and regular-non-periodic entries.
fn confusion_at_k<C: lkclab_core::metrics::Classifier>(
    classifier: &C,
    ds: &Dataset,
    indices: &[usize],
    k: u32,
) -> Result<ConfusionCounts> {
    let mut counts = ConfusionCounts::default();
    for &i in indices {
        let e = &ds.entries[i];
        if e.lyap.decimals_converged < k {
            continue;
        }
        let truth = label_from_lambda(e.lyap.value, k);
        if truth == Label::Regular && matches!(e.regularity, Regularity::Periodic(_)) {
            continue;
        }
        counts.tally(truth, classifier.classify(&e.seq.values)?);
    }
    Ok(counts)
}

/// The ensemble model with the highest best-epoch validation accuracy.
fn best_model(files: &[PathBuf]) -> Result<(PathBuf, LkcnnModel)> {
    let mut best: Option<(f64, PathBuf, LkcnnModel)> = None;
    for f in files {
        let model = load_model(f)?;
        let val = model
            .best_epoch
            .and_then(|b| model.history.get(b))
            .map_or(f64::NEG_INFINITY, |s| s.val_acc);
        if best.as_ref().is_none_or(|(v, _, _)| val > *v) {
            best = Some((val, f.clone(), model));
        }
    }
    best.map(|(_, p, m)| (p, m))
        .ok_or_else(|| Error::Rejected("no model files to compare".into()))
}

/// Three-way comparison (best LKCNN, short-time exponent, SG reconstruction)
/// per decimal-convergence level, reporting per-class precision.
pub fn cmd_compare(cfg: &ExperimentConfig) -> Result<()> {
    write_resolved_config(cfg)?;
    let ds = ensure_dataset(cfg)?;
    let files = model_files(&models_dir(cfg))?;
    let (best_path, model) = best_model(&files)?;
    let sg_cfg = SgConfig::default();

    let mut usable = Vec::new();
    let mut sg_failed = 0usize;
    for i in included_indices(&ds) {
        match sg_classify(&ds.entries[i].seq.values, &sg_cfg) {
            Ok(_) => usable.push(i),
            Err(Error::EstimatorFailed(_)) => sg_failed += 1,
            Err(e) => return Err(e),
        }
    }

    let mut doc = CsvDoc::new(
        &cfg.hash(),
        "k,classifier,p_chaotic,p_regular,accuracy,n",
    );
    doc.meta("dataset", &cfg.dataset.kind);
    doc.meta("best_model", best_path.display());
    doc.meta("sg_estimator_failed", sg_failed);
    for k in cfg.analysis.k_min..=cfg.analysis.k_max {
        let lkcnn = lkcnn_classifier(&model);
        let short = entry_classifier(&ds, move |e| {
            Ok(label_from_lambda(short_time_lyapunov(&e.seq), k))
        });
        let sg = |w: &[f64]| sg_classify(w, &sg_cfg);
        let named: [(&str, ConfusionCounts); 3] = [
            ("lkcnn", confusion_at_k(&lkcnn, &ds, &usable, k)?),
            ("short-lambda", confusion_at_k(&short, &ds, &usable, k)?),
            ("sg", confusion_at_k(&sg, &ds, &usable, k)?),
        ];
        for (name, c) in named {
            doc.row(&[
                k.to_string(),
                name.into(),
                fmt_opt(precision(&c, Label::Chaotic).ok()),
                fmt_opt(precision(&c, Label::Regular).ok()),
                fmt_opt(lkclab_core::metrics::accuracy(&c).ok()),
                c.total().to_string(),
            ]);
        }
    }
    write_atomic(&cfg.output.dir.join("compare.csv"), &doc.finish())
}

fn matrix_csv(pm: &PeriodMatrix, config_hash: &str) -> String {
    let header = std::iter::once("network_period".to_string())
        .chain(pm.orbit_periods.iter().map(|p| format!("k{p}")))
        .collect::<Vec<_>>()
        .join(",");
    let mut doc = CsvDoc::new(config_hash, &header);
    for (r, &net) in pm.network_periods.iter().enumerate() {
        let mut fields = vec![net.to_string()];
        for c in 0..pm.orbit_periods.len() {
            fields.push(format!("{:.6}", pm.cells[r * pm.orbit_periods.len() + c]));
        }
        doc.row(&fields);
    }
    doc.finish()
}

pub fn cmd_period_matrices(cfg: &ExperimentConfig) -> Result<()> {
    write_resolved_config(cfg)?;
    let ds = ensure_dataset(cfg)?;
    let files = model_files(&models_dir(cfg))?;
    let mat_dir = cfg.output.dir.join("matrices");

    let mut doc = CsvDoc::new(&cfg.hash(), "model,class,test_acc");
    doc.meta("dataset", &cfg.dataset.kind);
    let mut class_a_accs = Vec::new();
    let mut other_accs = Vec::new();
    for (i, file) in files.iter().enumerate() {
        let model = load_model(file)?;
        let stem = file.file_stem().unwrap().to_string_lossy().into_owned();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.ensemble.seed ^ (i as u64).rotate_left(17));
        let probes = synthetic_probes(
            &cfg.analysis.probe_periods,
            cfg.analysis.probes_per_period,
            cfg.dataset.window,
            &mut rng,
        );
        let binary = build_period_matrix(&model, &probes, true, cfg.analysis.rel_tol);
        let raw = build_period_matrix(&model, &probes, false, cfg.analysis.rel_tol);
        write_atomic(&mat_dir.join(format!("{stem}-binary.csv")), &matrix_csv(&binary, &cfg.hash()))?;
        write_atomic(&mat_dir.join(format!("{stem}-raw.csv")), &matrix_csv(&raw, &cfg.hash()))?;

        let class = classify_model_matrix(&binary);
        let test_set = train_samples(&ds, &ds.split.test);
        let (_, acc) = evaluate(&model, &test_set);
        match &class {
            MatrixClass::ClassA => class_a_accs.push(acc),
            MatrixClass::Other(_) => other_accs.push(acc),
        }
        let class_name = match &class {
            MatrixClass::ClassA => "classA".to_string(),
            MatrixClass::Other(h) => format!("other-{h}"),
        };
        doc.row(&[stem, class_name, format!("{acc:.6}")]);
    }
    let n_total = class_a_accs.len() + other_accs.len();
    if n_total > 0 {
        doc.meta("classa_fraction", format!("{:.4}", class_a_accs.len() as f64 / n_total as f64));
    }
    if let Ok(s) = ensemble_stats(&class_a_accs) {
        doc.meta("classa_mean_acc", format!("{:.6}", s.mean));
    }
    if let Ok(s) = ensemble_stats(&other_accs) {
        doc.meta("other_mean_acc", format!("{:.6}", s.mean));
    }
    write_atomic(&cfg.output.dir.join("period-matrices.csv"), &doc.finish())
}

pub fn cmd_period2_diagram(cfg: &ExperimentConfig) -> Result<()> {
    write_resolved_config(cfg)?;
    let files = model_files(&models_dir(cfg))?;
    if files.is_empty() {
        return Err(Error::Rejected(format!(
            "no model files under {}",
            models_dir(cfg).display()
        )));
    }
    let dia_dir = cfg.output.dir.join("diagrams");
    for file in &files {
        let model = load_model(file)?;
        let rows = period2_diagram(&model, cfg.analysis.diagram_resolution)?;
        let mut doc = CsvDoc::new(&cfg.hash(), "x1,x2,pattern_id,network_period,label");
        doc.meta("model", file.display());
        for r in rows {
            doc.row(&[
                fmt_f64(r.x1),
                fmt_f64(r.x2),
                r.pattern_id,
                r.network_period.to_string(),
                format!("{:?}", r.label).to_lowercase(),
            ]);
        }
        let stem = file.file_stem().unwrap().to_string_lossy();
        write_atomic(&dia_dir.join(format!("{stem}.csv")), &doc.finish())?;
    }
    Ok(())
}

fn quartiles(sorted: &[f64]) -> (f64, f64, f64) {
    let q = |p: f64| {
        let pos = p * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
    };
    (q(0.25), q(0.5), q(0.75))
}

pub fn cmd_hyperparam_sweep(cfg: &ExperimentConfig) -> Result<()> {
    write_resolved_config(cfg)?;
    let ds = ensure_dataset(cfg)?;
    let train_set = train_samples(&ds, &ds.split.train);
    let val_set = train_samples(&ds, &ds.split.validation);

    // Model 0 is the baseline architecture from the config; the sweep grid
    // follows, skipping a duplicate of the baseline.
    let mut archs = vec![(cfg.model.stride, cfg.model.dense_units)];
    for &s in &cfg.analysis.sweep_strides {
        for &d in &cfg.analysis.sweep_dense_units {
            if (s, d) != archs[0] {
                archs.push((s, d));
            }
        }
    }

    let mut doc = CsvDoc::new(
        &cfg.hash(),
        "arch,stride,dense_units,status,min,q1,q2,q3,max,selected",
    );
    doc.meta("dataset", &cfg.dataset.kind);
    let mut results: Vec<Option<(f64, f64)>> = Vec::new(); // (q2, q3) per arch
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (a, &(stride, dense_units)) in archs.iter().enumerate() {
        let mut accs = Vec::new();
        let mut status = "ok".to_string();
        for j in 0..cfg.analysis.sweep_models {
            let mut model_cfg = cfg.lkcnn_config(a * 1000 + j);
            model_cfg.stride = stride;
            model_cfg.dense_units = dense_units;
            let mut model = match init_model(&model_cfg) {
                Ok(m) => m,
                Err(e) => {
                    status = format!("invalid: {e}");
                    break;
                }
            };
            match train(&mut model, &train_set, &val_set) {
                Ok(()) => {
                    let (_, val_acc) = evaluate(&model, &val_set);
                    accs.push(val_acc);
                }
                Err(Error::Diverged { epoch }) => {
                    eprintln!("arch {a} model {j}: diverged at epoch {epoch}");
                }
                Err(e) => return Err(e),
            }
        }
        if accs.is_empty() {
            rows.push(vec![
                a.to_string(),
                stride.to_string(),
                dense_units.to_string(),
                status,
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]);
            results.push(None);
            continue;
        }
        accs.sort_by(f64::total_cmp);
        let (q1, q2, q3) = quartiles(&accs);
        rows.push(vec![
            a.to_string(),
            stride.to_string(),
            dense_units.to_string(),
            status,
            format!("{:.6}", accs[0]),
            format!("{q1:.6}"),
            format!("{q2:.6}"),
            format!("{q3:.6}"),
            format!("{:.6}", accs[accs.len() - 1]),
        ]);
        results.push(Some((q2, q3)));
    }
    // Selection rule: the architecture whose Q2..Q3 accuracy band is highest.
    let selected = results
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|(q2, q3)| (i, q2 + q3)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i);
    for (i, mut row) in rows.into_iter().enumerate() {
        row.push((selected == Some(i)).to_string());
        doc.row(&row);
    }
    write_atomic(&cfg.output.dir.join("hyperparam-sweep.csv"), &doc.finish())
}

pub fn cmd_lemma_check(cfg: &ExperimentConfig) -> Result<()> {
    write_resolved_config(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.ensemble.seed);
    let cases = cfg.analysis.lemma_cases;
    let mut divides = 0usize;
    let mut equal = 0usize;
    for _ in 0..cases {
        let k = rng.gen_range(2..=40usize);
        let s = *[1usize, 2, 3].iter().nth(rng.gen_range(0..3)).unwrap();
        let base: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
        let filter: Vec<f64> = (0..100).map(|_| rng.gen::<f64>() - 0.5).collect();
        let expected = if k % s == 0 { k / s } else { k };
        let out = strided_periodic_convolution(&base, &filter, s, 4 * expected.max(10));
        let p = sequence_period(&out, 1e-9);
        if expected % p == 0 {
            divides += 1;
        }
        if p == expected {
            equal += 1;
        }
    }
    let mut doc = CsvDoc::new(&cfg.hash(), "cases,divides,equal");
    doc.row(&[cases.to_string(), divides.to_string(), equal.to_string()]);
    write_atomic(&cfg.output.dir.join("lemma-check.csv"), &doc.finish())?;
    println!(
        "lemma check: {divides}/{cases} divide, {equal}/{cases} equal ({:.1}%)",
        equal as f64 / cases as f64 * 100.0
    );
    if divides != cases {
        return Err(Error::EstimatorFailed(format!(
            "divisibility failed in {} of {cases} cases",
            cases - divides
        )));
    }
    Ok(())
}

/// Accuracy as a function of the detected orbit period for the best model,
/// written alongside the stratified evaluation.
fn write_accuracy_vs_k(cfg: &ExperimentConfig, ds: &Dataset, model: &LkcnnModel) -> Result<()> {
    let buckets = accuracy_vs_k(&lkcnn_classifier(model), ds, &ds.split.test)?;
    let mut doc = CsvDoc::new(&cfg.hash(), "k,accuracy,count,power_of_two");
    doc.meta("dataset", &cfg.dataset.kind);
    let trend: Vec<&_> = buckets.iter().filter(|b| !b.power_of_two).collect();
    if trend.len() >= 2 {
        let ks: Vec<f64> = trend.iter().map(|b| b.k as f64).collect();
        let accs: Vec<f64> = trend.iter().map(|b| b.accuracy).collect();
        if let Ok(r) = rank_correlation(&ks, &accs) {
            doc.meta("rank_correlation", format!("{r:.4}"));
        }
    }
    for b in buckets {
        doc.row(&[
            b.k.to_string(),
            format!("{:.6}", b.accuracy),
            b.count.to_string(),
            b.power_of_two.to_string(),
        ]);
    }
    write_atomic(&cfg.output.dir.join("accuracy-vs-k.csv"), &doc.finish())
}

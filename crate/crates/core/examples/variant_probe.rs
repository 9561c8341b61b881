use lkclab_core::dataset::{load_dataset, Dataset, Regularity};
use lkclab_core::lkcnn::{init_model, train, LkcnnConfig, LkcnnModel, TrainSample};
use lkclab_core::lyapunov::Label;

fn standardize(v: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt().max(1e-12);
    v.iter().map(|x| (x - mean) / sd).collect()
}

fn subset_report(m: &LkcnnModel, ds: &Dataset, idx: &[usize], xs: &[Vec<f64>], tag: &str) {
    let mut counts = std::collections::BTreeMap::new();
    for &i in idx {
        let e = &ds.entries[i];
        let key = match (e.label, e.regularity) {
            (Label::Chaotic, _) => "chaotic",
            (_, Regularity::Periodic(_)) => "periodic",
            (_, Regularity::NonPeriodic) => "nonper",
        };
        let (c, t) = counts.entry(key).or_insert((0usize, 0usize));
        *t += 1;
        if lkclab_core::lkcnn::predict(m, &xs[i]).unwrap().0 == e.label {
            *c += 1;
        }
    }
    let s: Vec<String> = counts
        .iter()
        .map(|(k, (c, t))| format!("{k} {:.3} ({t})", *c as f64 / *t as f64))
        .collect();
    println!("    {tag}: {}", s.join(", "));
}

fn run(
    ds: &Dataset,
    xs: &[Vec<f64>],
    lr: f64,
    epochs: usize,
    seed: u64,
    stop: Option<f64>,
    tag: &str,
) {
    let samples = |idx: &[usize]| -> Vec<TrainSample> {
        idx.iter().map(|&i| (xs[i].as_slice(), ds.entries[i].label)).collect()
    };
    let t = std::time::Instant::now();
    let cfg = LkcnnConfig {
        seed,
        learning_rate: lr,
        max_epochs: epochs,
        accuracy_stop: stop,
        ..LkcnnConfig::default()
    };
    let mut m = init_model(&cfg).unwrap();
    train(&mut m, &samples(&ds.split.train), &samples(&ds.split.validation)).unwrap();
    let last = m.history.last().unwrap();
    println!(
        "{tag} seed {seed}: {} epochs {:.0}s train_acc {:.4} val_acc {:.4}",
        m.history.len(),
        t.elapsed().as_secs_f64(),
        last.train_acc,
        last.val_acc
    );
    subset_report(&m, ds, &ds.split.train, xs, "train");
    subset_report(&m, ds, &ds.split.test, xs, "test");
    let sine = load_dataset(std::path::Path::new("/tmp/acc-cache/sine-circle.csv")).unwrap();
    let sine_xs: Vec<Vec<f64>> = sine.entries.iter().map(|e| e.seq.values.clone()).collect();
    subset_report(&m, &sine, &sine.split.test, &sine_xs, "sine-test");
}

fn main() {
    let path = std::path::Path::new("/tmp/acc-cache/logistic-log-3000.csv");
    let ds = if path.exists() {
        load_dataset(path).unwrap()
    } else {
        let opts = lkclab_core::dataset::BuildOptions {
            grid_size: 3000,
            ..lkclab_core::dataset::BuildOptions::default()
        };
        let ds = lkclab_core::dataset::build_dataset(
            lkclab_core::dataset::DatasetKind::LogisticLog,
            &opts,
        )
        .unwrap();
        lkclab_core::dataset::save_dataset(&ds, path).unwrap();
        ds
    };
    let raw: Vec<Vec<f64>> = ds.entries.iter().map(|e| e.seq.values.clone()).collect();
    let std_xs: Vec<Vec<f64>> = ds.entries.iter().map(|e| standardize(&e.seq.values)).collect();
    let _ = std_xs;
    for seed in 1u64..=8 {
        run(&ds, &raw, 0.000388, 200, seed, Some(0.975), "g3000-stop");
    }
}

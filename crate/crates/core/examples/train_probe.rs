use lkclab_core::dataset::{
    build_dataset, load_dataset, save_dataset, BuildOptions, Dataset, DatasetKind, Regularity,
};
use lkclab_core::lkcnn::{evaluate, init_model, predict, train, LkcnnConfig, TrainSample};
use lkclab_core::lyapunov::Label;

fn subset_report(m: &lkclab_core::lkcnn::LkcnnModel, ds: &Dataset, idx: &[usize], tag: &str) {
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
        if predict(m, &e.seq.values).unwrap().0 == e.label {
            *c += 1;
        }
    }
    let s: Vec<String> = counts
        .iter()
        .map(|(k, (c, t))| format!("{k} {:.3} ({t})", *c as f64 / *t as f64))
        .collect();
    println!("    {tag}: {}", s.join(", "));
}

fn main() {
    let path = std::path::Path::new("/tmp/acc-cache/logistic-log.csv");
    std::fs::create_dir_all("/tmp/acc-cache").unwrap();
    let ds = if path.exists() {
        load_dataset(path).unwrap()
    } else {
        let ds = build_dataset(DatasetKind::LogisticLog, &BuildOptions::default()).unwrap();
        save_dataset(&ds, path).unwrap();
        ds
    };
    let samples = |idx: &[usize]| -> Vec<TrainSample> {
        idx.iter().map(|&i| (ds.entries[i].seq.values.as_slice(), ds.entries[i].label)).collect()
    };
    let train_set = samples(&ds.split.train);
    let val_set = samples(&ds.split.validation);
    let test_set = samples(&ds.split.test);
    println!("train {} val {} test {}", train_set.len(), val_set.len(), test_set.len());
    for seed in [1u64, 2] {
        let t = std::time::Instant::now();
        let cfg = LkcnnConfig {
            seed,
            max_epochs: 1000,
            patience: 1000,
            ..LkcnnConfig::default()
        };
        let mut m = init_model(&cfg).unwrap();
        train(&mut m, &train_set, &val_set).unwrap();
        let (_, acc) = evaluate(&m, &test_set);
        for s in m.history.iter().step_by(100) {
            println!(
                "  seed {seed} epoch {:4}: train {:.4} val {:.4} (loss {:.4})",
                s.epoch, s.train_acc, s.val_acc, s.val_loss
            );
        }
        let last = m.history.last().unwrap();
        println!(
            "seed {seed}: {} epochs in {:.1}s, final train_acc {:.4}, best_epoch {:?}, test acc {:.4}",
            m.history.len(), t.elapsed().as_secs_f64(), last.train_acc, m.best_epoch, acc
        );
        subset_report(&m, &ds, &ds.split.train, "train");
        subset_report(&m, &ds, &ds.split.test, "test");
    }
}

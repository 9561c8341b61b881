use lkclab_core::dataset::{load_dataset, Regularity};
use lkclab_core::lkcnn::{init_model, predict, save_model, train, LkcnnConfig, TrainSample};
use lkclab_core::lyapunov::Label;

fn main() {
    let ds = load_dataset(std::path::Path::new("/tmp/acc-cache/logistic-log.csv")).unwrap();
    let samples = |idx: &[usize]| -> Vec<TrainSample> {
        idx.iter().map(|&i| (ds.entries[i].seq.values.as_slice(), ds.entries[i].label)).collect()
    };
    let model_path = std::path::Path::new("/tmp/acc-cache/probe-model-1.json");
    let m = if model_path.exists() {
        lkclab_core::lkcnn::load_model(model_path).unwrap()
    } else {
        let cfg = LkcnnConfig { seed: 1, max_epochs: 1000, patience: 1000, ..LkcnnConfig::default() };
        let mut m = init_model(&cfg).unwrap();
        train(&mut m, &samples(&ds.split.train), &samples(&ds.split.validation)).unwrap();
        save_model(&m, model_path).unwrap();
        m
    };
    // Periodic-entry accuracy bucketed by orbit period, whole corpus.
    let mut buckets: std::collections::BTreeMap<u32, (usize, usize)> = Default::default();
    for e in &ds.entries {
        if e.label != Label::Regular {
            continue;
        }
        if let Regularity::Periodic(p) = e.regularity {
            let (c, t) = buckets.entry(p).or_default();
            *t += 1;
            if predict(&m, &e.seq.values).unwrap().0 == Label::Regular {
                *c += 1;
            }
        }
    }
    let mut low_ok = (0usize, 0usize);
    let mut high_ok = (0usize, 0usize);
    for (p, (c, t)) in &buckets {
        println!("period {p:3}: {c}/{t}");
        if *p <= 24 { low_ok.0 += c; low_ok.1 += t; } else { high_ok.0 += c; high_ok.1 += t; }
    }
    println!("period <=24: {}/{}   period >24: {}/{}", low_ok.0, low_ok.1, high_ok.0, high_ok.1);
}

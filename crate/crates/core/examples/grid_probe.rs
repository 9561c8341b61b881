use lkclab_core::dataset::{
    build_dataset, proportions, save_dataset, BuildOptions, DatasetKind, Regularity,
};
use lkclab_core::lyapunov::Label;

fn main() {
    let ds = build_dataset(DatasetKind::LogisticLog, &BuildOptions::default()).unwrap();
    save_dataset(&ds, std::path::Path::new("/tmp/acc-cache/logistic-log.csv")).unwrap();
    let (c, p, n) = proportions(&ds);
    println!("logistic-log: chaotic {c:.3} periodic {p:.3} nonper {n:.3}");
    println!("excluded: {}", ds.excluded.len());
    let mut hist = std::collections::BTreeMap::new();
    for e in &ds.entries {
        if let (Label::Regular, Regularity::Periodic(p)) = (e.label, e.regularity) {
            *hist.entry(p).or_insert(0usize) += 1;
        }
    }
    for (p, n) in hist {
        println!("period {p}: {n}");
    }
    let near: usize = ds
        .entries
        .iter()
        .filter(|e| e.label == Label::Chaotic && e.lyap.value < 0.05)
        .count();
    println!("chaotic with lambda < 0.05: {near}");
}

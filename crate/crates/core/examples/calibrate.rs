use lkclab_core::dataset::{build_dataset, BuildOptions, DatasetKind};

fn main() {
    let grid: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    for kind in [DatasetKind::LogisticLog, DatasetKind::LogisticLinear, DatasetKind::SineCircleLinear] {
        let t = std::time::Instant::now();
        let opts = BuildOptions { grid_size: grid, ..BuildOptions::default() };
        let ds = build_dataset(kind, &opts).unwrap();
        let p = lkclab_core::dataset::proportions(&ds);
        println!(
            "{:<18} chaotic {:.1}% periodic {:.1}% nonper {:.1}% excluded {} ({:.1}s)",
            kind.name(), p.0 * 100.0, p.1 * 100.0, p.2 * 100.0, ds.excluded.len(),
            t.elapsed().as_secs_f64()
        );
    }
}

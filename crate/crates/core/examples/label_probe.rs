use lkclab_core::dataset::{load_dataset, Regularity};
use lkclab_core::lyapunov::{short_time_lyapunov, Label};

fn main() {
    let ds = load_dataset(std::path::Path::new("/tmp/acc-cache/logistic-log.csv")).unwrap();
    let mut agree = 0usize;
    let mut total = 0usize;
    let mut near_zero = 0usize;
    let mut by_reg = std::collections::BTreeMap::new();
    for (i, e) in ds.entries.iter().enumerate() {
        if ds.excluded.contains(&i) { continue; }
        let st = short_time_lyapunov(&e.seq);
        let pred = if st > 0.0 { Label::Chaotic } else { Label::Regular };
        total += 1;
        if pred == e.label { agree += 1; }
        if e.lyap.value.abs() < 0.01 { near_zero += 1; }
        let key = match (e.label, e.regularity) {
            (Label::Chaotic, _) => "chaotic",
            (_, Regularity::Periodic(_)) => "periodic",
            (_, Regularity::NonPeriodic) => "nonperiodic",
        };
        let ent = by_reg.entry(key).or_insert((0usize, 0usize));
        ent.1 += 1;
        if pred == e.label { ent.0 += 1; }
    }
    println!("short-time agreement {agree}/{total} = {:.4}", agree as f64 / total as f64);
    println!("entries with |lambda| < 0.01: {near_zero}");
    for (k, (a, t)) in by_reg { println!("  {k}: {a}/{t} = {:.4}", a as f64 / t as f64); }
}

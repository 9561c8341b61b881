use lkclab_core::dataset::{load_dataset, Regularity};
use lkclab_core::lkcnn::{load_model, predict};
use lkclab_core::lyapunov::Label;
use std::collections::BTreeMap;

fn main() {
    let ds = load_dataset(std::path::Path::new(
        "/root/crate/target/tmp/acceptance-cache/sine-circle-linear.csv",
    ))
    .unwrap();
    let dir = std::path::Path::new("/root/crate/target/tmp/acceptance-cache");
    let mut miss_count: BTreeMap<usize, usize> = BTreeMap::new();
    for seed in 1..=10u64 {
        let m = load_model(&dir.join(format!("model-loglog-{seed:04}.json"))).unwrap();
        let (mut ok, mut tot) = (0usize, 0usize);
        for &i in &ds.split.test {
            let e = &ds.entries[i];
            if e.label != Label::Regular || !matches!(e.regularity, Regularity::Periodic(_)) {
                continue;
            }
            tot += 1;
            if predict(&m, &e.seq.values).unwrap().0 == Label::Regular {
                ok += 1;
            } else {
                *miss_count.entry(i).or_default() += 1;
            }
        }
        println!("seed {seed}: sine test periodic {ok}/{tot}");
    }
    println!("-- entries missed by >= 3 models --");
    for (i, c) in &miss_count {
        if *c >= 3 {
            let e = &ds.entries[*i];
            let p = match e.regularity {
                Regularity::Periodic(p) => p,
                _ => 0,
            };
            println!(
                "idx {i}: beta {:.4} period {p} missed by {c}/10",
                e.seq.spec.param
            );
        }
    }
}

use lkclab_core::dataset::{build_dataset, load_dataset, save_dataset, BuildOptions, DatasetKind, Regularity};
use lkclab_core::lkcnn::{load_model, predict};
use lkclab_core::lyapunov::Label;

fn main() {
    let path = std::path::Path::new("/tmp/acc-cache/sine-circle.csv");
    let ds = if path.exists() {
        load_dataset(path).unwrap()
    } else {
        let ds = build_dataset(DatasetKind::SineCircleLinear, &BuildOptions::default()).unwrap();
        save_dataset(&ds, path).unwrap();
        ds
    };
    let dir = std::path::Path::new("/root/crate/target/tmp/acceptance-cache");
    let m = load_model(&dir.join("model-loglog-0001.json")).unwrap();
    let mut total = (0usize, 0usize);
    for &i in &ds.split.test {
        let e = &ds.entries[i];
        let p = match e.regularity {
            Regularity::Periodic(p) if e.label == Label::Regular => p,
            _ => continue,
        };
        let v = &e.seq.values;
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
        let pred = predict(&m, v).unwrap().0;
        total.1 += 1;
        if pred == Label::Regular {
            total.0 += 1;
        } else {
            println!(
                "miss: beta {:.4} period {p} sd {:.3e} lambda {:.4}",
                e.seq.spec.param, sd, e.lyap.value
            );
        }
    }
    println!("sine test periodic: {}/{}", total.0, total.1);
}

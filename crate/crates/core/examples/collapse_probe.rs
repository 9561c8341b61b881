use lkclab_core::lkcnn::{load_model, predict};

fn main() {
    let dir = std::path::Path::new("/root/crate/target/tmp/acceptance-cache");
    for seed in [6u64, 7] {
        let m = load_model(&dir.join(format!("model-loglog-{seed:04}.json"))).unwrap();
        println!("model seed {seed}: P(chaotic) for period-2 window, rows=level cols=amplitude");
        print!("level\\amp ");
        for amp in [0.05, 0.1, 0.2, 0.4] {
            print!("  {amp:>5}");
        }
        println!();
        for level in [0.1f64, 0.3, 0.5, 0.7, 0.9] {
            print!("   {level:.2}   ");
            for amp in [0.05f64, 0.1, 0.2, 0.4] {
                let a = (level - amp / 2.0).clamp(0.0, 1.0);
                let b = (level + amp / 2.0).clamp(0.0, 1.0);
                let w: Vec<f64> =
                    (0..500).map(|i| if i % 2 == 0 { a } else { b }).collect();
                let p = predict(&m, &w).unwrap().1;
                print!("  {p:.3}");
            }
            println!();
        }
    }
}

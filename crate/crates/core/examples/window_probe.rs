use lkclab_core::dataset::load_dataset;
use lkclab_core::lyapunov::{short_time_lyapunov, Label};

fn main() {
    let ds = load_dataset(std::path::Path::new("/tmp/acc-cache/logistic-log.csv")).unwrap();
    for e in &ds.entries {
        let mu = e.seq.spec.param;
        if ![3.571983, 3.583524, 3.744203]
            .iter()
            .any(|m| (mu - m).abs() < 1e-5)
        {
            continue;
        }
        // Best-period residual over candidate periods 1..=250 on the window.
        let v = &e.seq.values;
        let mut best = (0usize, f64::INFINITY);
        for p in 1..=250usize {
            let mut r = 0.0f64;
            for i in p..v.len() {
                r = r.max((v[i] - v[i - p]).abs());
            }
            if r < best.1 {
                best = (p, r);
            }
        }
        let st = short_time_lyapunov(&e.seq);
        println!(
            "mu {:.6} lambda {:.4} label {:?}: best period {} residual {:.2e}, short-time lambda {:.4}",
            mu, e.lyap.value, e.label, best.0, best.1, st
        );
        // Jitter against period-5/8/10 style structure: residual at small p.
        for p in [5usize, 10, 20, 40, 80] {
            let mut r = 0.0f64;
            for i in p..v.len() {
                r = r.max((v[i] - v[i - p]).abs());
            }
            println!("    residual at p={p}: {:.2e}", r);
        }
    }
}

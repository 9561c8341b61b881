use lkclab_core::dataset::{load_dataset, Regularity};
use lkclab_core::lyapunov::{label_from_lambda, short_time_lyapunov, Label};
use lkclab_core::sgfilter::{sg_lyapunov, SgConfig};

fn round4(v: f64) -> f64 {
    (v.abs() * 1e4).round().copysign(v) / 1e4
}

fn main() {
    let ds = load_dataset(std::path::Path::new(
        "/root/crate/target/tmp/acceptance-cache/sine-circle-linear.csv",
    ))
    .unwrap();
    let mut rows: Vec<(f64, f64, f64, f64, bool)> = Vec::new(); // beta conv short sg truth
    for e in &ds.entries {
        if matches!(e.regularity, Regularity::Periodic(_)) && e.label == Label::Regular {
            continue;
        }
        if e.lyap.decimals_converged < 4 || round4(e.lyap.value) == 0.0 {
            continue;
        }
        let truth = label_from_lambda(e.lyap.value, 4) == Label::Chaotic;
        let st = short_time_lyapunov(&e.seq);
        let sg = sg_lyapunov(&e.seq.values, &SgConfig::default())
            .map(|x| x.value)
            .unwrap_or(f64::NAN);
        rows.push((e.seq.spec.param, e.lyap.value, st, sg, truth));
    }
    let nc = rows.iter().filter(|r| r.4).count();
    println!("determinate kept {} (chaotic {nc}, regular {})", rows.len(), rows.len() - nc);
    for r in rows.iter().filter(|r| !r.4) {
        println!("  regular: beta {:.4} conv {:.5} short {:.5} sg {:.5}", r.0, r.1, r.2, r.3);
    }
    let mut weak: Vec<&(f64, f64, f64, f64, bool)> =
        rows.iter().filter(|r| r.4 && r.1 < 0.01).collect();
    weak.sort_by(|a, b| a.1.total_cmp(&b.1));
    for r in weak {
        println!("  weak chaotic: beta {:.4} conv {:.5} short {:.5} sg {:.5}", r.0, r.1, r.2, r.3);
    }
    let conf = |get: fn(&(f64, f64, f64, f64, bool)) -> f64, th: f64| {
        let tc = rows.iter().filter(|r| r.4 && get(r) > th).count();
        let fc = rows.iter().filter(|r| !r.4 && get(r) > th).count();
        let tr = rows.iter().filter(|r| !r.4 && get(r) <= th).count();
        let fr = rows.iter().filter(|r| r.4 && get(r) <= th).count();
        (tc, fc, tr, fr)
    };
    for th in [0.00005, 0.0005, 0.005] {
        let (tc, fc, tr, fr) = conf(|r| r.3, th);
        println!(
            "sg th {th}: P_c {:.4} P_r {:.4} (tc {tc} fc {fc} tr {tr} fr {fr})",
            tc as f64 / (tc + fc) as f64,
            tr as f64 / (tr + fr) as f64
        );
    }
    let (tc, fc, tr, fr) = conf(|r| r.2, 0.00005);
    println!(
        "short th 5e-5: P_c {:.4} P_r {:.4} (tc {tc} fc {fc} tr {tr} fr {fr})",
        tc as f64 / (tc + fc) as f64,
        tr as f64 / (tr + fr) as f64
    );
}

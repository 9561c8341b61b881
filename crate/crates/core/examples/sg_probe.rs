use lkclab_core::maps::{generate_orbit, MapSpec};
use lkclab_core::sgfilter::{
    graph_points, sg_derivatives, sg_lyapunov, split_components, SgConfig,
};

fn main() {
    let cfg = SgConfig::default();
    for beta in [0.3f64, 0.5, 0.8, 0.95] {
        let spec = MapSpec::sine_circle(beta);
        let seq = generate_orbit(&spec, 10_000, 500).unwrap();
        let est = sg_lyapunov(&seq.values, &cfg).unwrap();
        let points = graph_points(&seq.values);
        let comps = split_components(&points, &cfg);
        // per-point derivative error stats
        let mut errs: Vec<(f64, f64, f64)> = Vec::new(); // (xbar, est, true)
        for comp in &comps {
            for (x, d) in sg_derivatives(comp, &cfg) {
                if let Some(d) = d {
                    errs.push((x, d, spec.derivative(x)));
                }
            }
        }
        let mut log_err: Vec<f64> = errs
            .iter()
            .map(|(_, d, t)| d.abs().max(1e-8).ln() - t.abs().max(1e-8).ln())
            .collect();
        log_err.sort_by(f64::total_cmp);
        let n = log_err.len();
        let mean = log_err.iter().sum::<f64>() / n as f64;
        println!(
            "beta {beta}: comps {} pts {} lambda_hat {:.4} | log-deriv err mean {:.4} med {:.4} p95 {:.4} max {:.4}",
            comps.len(),
            points.len(),
            est.value,
            mean,
            log_err[n / 2],
            log_err[(n as f64 * 0.95) as usize],
            log_err[n - 1]
        );
        // biggest offenders
        let mut by_abs: Vec<&(f64, f64, f64)> = errs.iter().collect();
        by_abs.sort_by(|a, b| {
            let ea = (a.1.abs().max(1e-8).ln() - a.2.abs().max(1e-8).ln()).abs();
            let eb = (b.1.abs().max(1e-8).ln() - b.2.abs().max(1e-8).ln()).abs();
            eb.total_cmp(&ea)
        });
        for (x, d, t) in by_abs.iter().take(4) {
            println!("    worst: xbar {x:.4} est {d:.4} true {t:.4}");
        }
    }
}

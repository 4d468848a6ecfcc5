//! Variance diagnostics for the weight integrator. Prints, per graph,
//! the estimate plus per-sample magnitude quantiles.

use kdq::graphs::{encode, enumerate_graphs, parse, wheel, GraphClass};
use kdq::weights::mc_weight;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let samples: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);

    let mut graphs = vec![parse("K1:(L,R)").unwrap(), parse("K1:(R,L)").unwrap()];
    graphs.extend(enumerate_graphs(2, GraphClass::A).unwrap());
    graphs.push(wheel(2).unwrap());

    let mut worst = (0.0f64, String::new());
    for g in &graphs {
        let t0 = std::time::Instant::now();
        let est = mc_weight(g, samples, 7).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        let std = est.stderr * (samples as f64).sqrt();
        if std > worst.0 {
            worst = (std, encode(g));
        }
        println!(
            "{:<22} mean {:+.5} stderr {:.2e} per-sample-std {:8.3} [{:.2} Ms/s]",
            encode(g),
            est.mean,
            est.stderr,
            std,
            samples as f64 / dt / 1e6
        );
    }
    println!("worst per-sample std: {} on {}", worst.0, worst.1);
}

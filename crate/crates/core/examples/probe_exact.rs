//! High-sample estimates for selected graphs, with candidate rationals.

use kdq::graphs::parse;
use kdq::ratio::{best_rational_approx, fmt_rat, rat_to_f64};
use kdq::weights::mc_weight;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let samples: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10_000_000);
    let encodings: Vec<&str> = if args.len() > 2 {
        args[2..].iter().map(|s| s.as_str()).collect()
    } else {
        vec![
            "K1:(L,R)",
            "K2:(2,L);(1,R)",
            "K2:(2,L);(L,R)",
            "K2:(2,R);(1,L)",
            "K2:(2,R);(L,R)",
            "K2:(L,R);(1,L)",
            "K2:(L,R);(1,R)",
            "K2:(L,R);(L,R)",
            "W2",
        ]
    };
    for enc in encodings {
        let g = parse(enc).unwrap();
        let t0 = std::time::Instant::now();
        let est = mc_weight(&g, samples, 7777).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        for cap in [96u64, 480, 2880] {
            let r = best_rational_approx(est.mean, cap);
            let dev = (rat_to_f64(&r) - est.mean) / est.stderr;
            println!(
                "{:<20} mean {:+.7} ± {:.2e}  cap{:<5} → {:>9}  ({:+.2}σ)   [{:.0}s]",
                enc,
                est.mean,
                est.stderr,
                cap,
                fmt_rat(&r),
                dev,
                dt
            );
        }
    }
}

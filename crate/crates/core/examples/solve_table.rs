//! Solves the low-order weight table from fresh Monte Carlo runs and
//! prints it in cache format. Usage: solve_table [samples] [seed] [tol].

use kdq::weights::{solve_low_order_table, CacheEntry};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let samples: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(2_000_000);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(20260810);
    let tol: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(4.0);
    eprintln!("solving with {samples} samples per graph, seed {seed}, tolerance {tol}σ");
    let start = std::time::Instant::now();
    match solve_low_order_table(samples, seed, tol) {
        Ok((table, estimates)) => {
            eprintln!("solved in {:.1?}", start.elapsed());
            for (key, entry) in table.entries() {
                let line = CacheEntry::Exact {
                    encoding: key.clone(),
                    weight: entry.weight.clone(),
                    provenance: entry.provenance.clone(),
                };
                match line {
                    CacheEntry::Exact { encoding, weight, provenance } => {
                        println!("{encoding} exact {} {provenance}", kdq::ratio::fmt_rat(&weight));
                    }
                    _ => unreachable!(),
                }
            }
            for est in estimates {
                eprintln!(
                    "  {}: {:.6} ± {:.2e}",
                    est.graph, est.mean, est.stderr
                );
            }
        }
        Err(e) => {
            eprintln!("solve failed: {e}");
            std::process::exit(1);
        }
    }
}

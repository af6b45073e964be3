//! Seeded verification campaigns: a named suite generates admissible
//! random instances from a seed, verifies each one, and emits one
//! certificate per trial. The same seed always produces a byte-identical
//! report, regardless of worker count.

use gelfond_lab::campaign::{report_to_jsonl, run_suite, summarize, CampaignConfig, SUITES};

fn main() {
    println!("available suites: {}\n", SUITES.join(" "));

    let cfg = CampaignConfig { seed: 7, trials: 5, workers: 2 };
    let certs = run_suite("detid", &cfg).unwrap();
    println!("detid, seed 7, 5 trials:");
    for c in &certs {
        println!("  {} -> {:?} ({} bits)", c.claim, c.verdict, c.precision_bits);
    }
    println!("summary: {}", summarize(&certs));

    let a = report_to_jsonl(&run_suite("gauss", &cfg).unwrap()).unwrap();
    let b = report_to_jsonl(&run_suite("gauss", &cfg).unwrap()).unwrap();
    println!("reports byte-identical across runs: {}", a == b);
}

//! Empirical phase transition: success rate of exact recovery as the
//! measurement count k grows, for several dense-block sizes r. The success
//! threshold sharpens around a critical k that decreases with r.
//!
//! ```bash
//! cargo run --release --example phase_transition
//! ```

use partial_l1::experiments::{phase_diagram, ExperimentConfig};
use partial_l1::randgen::Seed;

fn main() {
    let cfg = ExperimentConfig {
        n: 60,
        k_values: vec![8, 12, 16, 20, 24, 28, 32],
        s_values: vec![6],
        r_values: vec![0, 3, 5],
        eta_values: vec![0.0],
        trials_per_cell: 30,
        base_seed: Seed::new(1234),
        threads: 2,
        ..Default::default()
    };
    let table = phase_diagram(&cfg).expect("valid grid");

    println!("success rate of exact recovery (N = 60, s = 6, {} trials/cell)\n", cfg.trials_per_cell);
    print!("{:>6}", "k");
    for r in [0usize, 3, 5] {
        print!(" {:>8}", format!("r={r}"));
    }
    println!();
    for &k in &cfg.k_values {
        print!("{k:>6}");
        for r in [0usize, 3, 5] {
            let row = table
                .rows
                .iter()
                .find(|row| row.cell.k == k && row.cell.r == r)
                .expect("cell present");
            print!(" {:>8.2}", row.rate);
        }
        println!();
    }

    println!("\nraw CSV (the same table the CLI's `phase` subcommand writes):\n");
    print!("{}", table.to_csv());
}

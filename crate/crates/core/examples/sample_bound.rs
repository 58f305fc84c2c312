//! The analytic sample-count bound for Gaussian measurement ensembles:
//! how many measurements suffice for the projected matrix to be a
//! near-isometry on sparse vectors, and how the count shrinks as more of
//! the support is known in advance.
//!
//! ```bash
//! cargo run --example sample_bound
//! ```

use partial_l1::certificates::gaussian_sample_bound;

fn main() {
    let n = 200;
    let s = 10;
    let delta = 0.5;

    println!("dimension N = {n}, total sparsity s = {s}, isometry target delta = {delta}");
    println!("{:>4} {:>10} {:>16}", "r", "s - r", "bound on k");
    for r in 0..=s {
        let b = gaussian_sample_bound(n, s, r, delta).expect("valid parameters");
        println!("{r:>4} {:>10} {:>16.1}", s - r, b);
    }
    println!();
    println!("the bound is non-increasing in r: known support positions never cost");
    println!("measurements, and with s - r = O(1) the requirement drops from");
    println!("O(s log(N/s)) to O(s + log(N - r)).");

    let reference = gaussian_sample_bound(104, 5, 4, 0.5).expect("valid parameters");
    println!("\nreference evaluation at (N = 104, s = 5, r = 4, delta = 0.5): {reference:.4}");
}

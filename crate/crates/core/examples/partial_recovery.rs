//! Partially sparse recovery end to end: the unknown is (x1, x2) with x1
//! sparse and x2 dense but of known position. Only the l1 norm of x1 is
//! minimized. Shows the projected route (reduce, solve, back-solve) and the
//! direct route (zero-weight dense block), which agree on the recovered x1.
//!
//! ```bash
//! cargo run --example partial_recovery
//! ```

use partial_l1::certificates::partial_nsp_check;
use partial_l1::linalg::{norm2, sub};
use partial_l1::partial::{recover_direct, recover_projected, reduce_problem, split_matrix};
use partial_l1::randgen::{gaussian_matrix, planted_signal, Seed, SignalModel};
use partial_l1::solvers::SolveOptions;

fn main() {
    let (k, n, r, total_sparsity) = (12, 18, 3, 5); // sparse block carries 2
    let seed = Seed::new(47);

    let a = gaussian_matrix(k, n, seed);
    let part = split_matrix(&a, r).expect("dense block has full column rank");
    let signal = planted_signal(n - r, total_sparsity - r, r, &SignalModel::default(), seed.substream(1))
        .expect("valid model");
    let y = a.matvec(&signal.full()).expect("dims");

    println!("A is {k}x{n}, split into A1 ({}x{}) and A2 ({}x{})", k, n - r, k, r);
    println!("planted x1 = {:?}", signal.x1);
    println!("planted x2 = {:?}\n", signal.x2);

    // Certify first: does this draw guarantee recovery of every plant of
    // this sparsity?
    let cert = partial_nsp_check(&part, total_sparsity).expect("desk scale");
    println!(
        "partial null-space certificate (order {}): holds = {}, worst ratio = {:.4}",
        cert.order, cert.holds, cert.worst_ratio
    );

    // The reduction: project out the dense block's range.
    let (pa1, py) = reduce_problem(&part, &y).expect("dims");
    println!(
        "reduced problem: {}x{} system, ||P y||_2 = {:.4}\n",
        pa1.rows(),
        pa1.cols(),
        norm2(&py)
    );

    let opts = SolveOptions::default();
    let proj = recover_projected(&part, &y, 0.0, &opts).expect("solvable");
    println!(
        "projected route: err(x1) = {:.2e}, err(x2) = {:.2e}, back-solve residual = {:.2e}",
        norm2(&sub(&proj.x1, &signal.x1)),
        norm2(&sub(&proj.x2, &signal.x2)),
        proj.x2_residual
    );

    let direct = recover_direct(&part, &y, 0.0, &opts).expect("solvable");
    println!(
        "direct route:    err(x1) = {:.2e}, err(x2) = {:.2e}",
        norm2(&sub(&direct.x1, &signal.x1)),
        norm2(&sub(&direct.x2, &signal.x2)),
    );
    println!(
        "route disagreement on x1: {:.2e}",
        norm2(&sub(&proj.x1, &direct.x1))
    );
}

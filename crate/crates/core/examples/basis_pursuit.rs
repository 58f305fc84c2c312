//! Classical sparse recovery: plant a sparse signal, measure it with a flat
//! Gaussian matrix, and recover it by l1 minimization — once with the exact
//! simplex solver and once with operator splitting.
//!
//! ```bash
//! cargo run --example basis_pursuit
//! ```

use partial_l1::certificates::exhaustive_l0;
use partial_l1::linalg::{norm2, sub};
use partial_l1::randgen::{gaussian_matrix, planted_signal, Seed, SignalModel};
use partial_l1::solvers::{admm_basis_pursuit, simplex_l1, SolveOptions};

fn main() {
    let (k, n, sparsity) = (6, 12, 2);
    let seed = Seed::new(2025);

    let a = gaussian_matrix(k, n, seed);
    let signal = planted_signal(n, sparsity, 0, &SignalModel::default(), seed.substream(1))
        .expect("valid model");
    let y = a.matvec(&signal.x1).expect("dims");
    println!("measuring a {sparsity}-sparse signal in R^{n} with {k} Gaussian measurements");
    println!("planted x = {:?}\n", signal.x1);

    // The brute-force sparsest-solution oracle confirms the plant is the
    // unique sparsest consistent vector.
    let (x0, s0, unique) = exhaustive_l0(&a, &y, 3).expect("desk scale");
    println!("sparsest consistent vector: sparsity {s0}, unique = {unique}");
    assert!(norm2(&sub(&x0, &signal.x1)) < 1e-8);

    let exact = simplex_l1(&a, &y, &vec![1.0; n]).expect("feasible");
    println!(
        "simplex: objective {:.10}, {} pivots, recovery error {:.2e}",
        exact.objective,
        exact.iterations,
        norm2(&sub(&exact.x, &signal.x1))
    );

    let opts = SolveOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-8,
        max_iters: 100_000,
        ..Default::default()
    };
    let split = admm_basis_pursuit(&a, &y, &opts).expect("feasible");
    println!(
        "splitting: objective {:.10}, {} iterations, recovery error {:.2e}",
        split.objective,
        split.iterations,
        norm2(&sub(&split.x, &signal.x1))
    );
    println!(
        "objective gap between the two solvers: {:.2e}",
        (split.objective - exact.objective).abs()
    );
}

//! Desk-scale recovery certificates: exhaustive null-space and
//! restricted-isometry checks, their partial analogues, witnesses for
//! failures, and the JSON document format.
//!
//! ```bash
//! cargo run --example certificates
//! ```

use partial_l1::certificates::{
    check_c1_c2_bounds, mixed_rip_constant, nsp_check, partial_nsp_check, partial_rip_constant,
    recovery_guarantee, rip_constant, CertificateDocument,
};
use partial_l1::linalg::DenseMatrix;
use partial_l1::partial::split_matrix;
use partial_l1::randgen::{gaussian_matrix, Seed};

fn main() {
    // A tiny matrix whose kernel is fully understood: null space of [1, -1]
    // is span{(1,1)}, so any single coordinate holds exactly half the mass.
    let tight = DenseMatrix::new(1, 2, vec![1.0, -1.0]).expect("finite");
    let rep = nsp_check(&tight, 1).expect("desk scale");
    println!(
        "[1, -1], order 1: holds = {}, worst ratio = {} (strictly-below-half fails)",
        rep.holds, rep.worst_ratio
    );
    if let Some(v) = &rep.witness_v {
        println!("witness null vector: {v:?}\n");
    }

    // A random flat Gaussian draw, full and partial checks side by side.
    let a = gaussian_matrix(10, 14, Seed::new(105));
    let part = split_matrix(&a, 2).expect("full column rank");
    let s = 4;

    // This draw sits in the interesting gap: fully sparse recovery of order
    // s is NOT guaranteed, but recovery with a known dense block is.
    let full_nsp = nsp_check(&a, s).expect("desk scale");
    let part_nsp = partial_nsp_check(&part, s).expect("desk scale");
    println!("10x14 Gaussian draw, total sparsity budget s = {s}, dense block r = 2:");
    println!(
        "  null-space property     order {}: holds = {:<5} worst ratio = {:.4}",
        full_nsp.order, full_nsp.holds, full_nsp.worst_ratio
    );
    println!(
        "  partial null-space      order {}: holds = {:<5} worst ratio = {:.4}",
        part_nsp.order, part_nsp.holds, part_nsp.worst_ratio
    );

    let full_rip = rip_constant(&a, s).expect("desk scale");
    let mixed = mixed_rip_constant(&part, s).expect("desk scale");
    let part_rip = partial_rip_constant(&part, s).expect("desk scale");
    println!(
        "  isometry constants: projected {:.4} <= mixed {:.4} <= full {:.4}",
        part_rip.delta, mixed.delta, full_rip.delta
    );
    println!(
        "  sufficient-recovery threshold met at order {}? {}",
        s,
        recovery_guarantee(full_rip.delta)
    );

    let bounds = check_c1_c2_bounds(&part, s).expect("desk scale");
    println!(
        "  C2 = {:.4} <= {:.4} (holds = {}); C1 = {:.4} vs {:.4} (order sufficient = {})",
        bounds.c2, bounds.c2_bound, bounds.c2_holds, bounds.c1, bounds.c1_bound,
        bounds.c1_order_sufficient
    );

    // Certificates serialize to JSON, bound to the matrix by content hash.
    let doc = CertificateDocument::from_rip("partial-rip", &part_rip, &a);
    println!("\nJSON document:\n{}", doc.to_json());
}

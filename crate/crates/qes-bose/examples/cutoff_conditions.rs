//! Cutoff-condition systems solved exactly.
//!
//! A sector closes when the couplings annihilate every edge coefficient.
//! Those demands are integer-coefficient linear conditions on the
//! couplings, solved here over exact rationals: the even N=1 sector alone
//! (a plane of solutions), the even/odd intersection (a single ray), and
//! the condition-counting rule over a grid of shapes.

use qes_bose::conditions::{build_cutoff_system, feasibility, solve_cutoff_system, Shape};
use qes_bose::model::SectorBasis;
use qes_bose::rational::format_rational;

fn main() {
    let shape = Shape::new(2, 1);

    let even = build_cutoff_system(shape, &SectorBasis::even(1));
    println!(
        "even N=1 condition row (entries (2N)^s): {:?}",
        even.rows[0].coeffs
    );
    let sol = solve_cutoff_system(&even);
    println!("rank {}, nullspace:", sol.rank);
    for v in &sol.basis {
        let parts: Vec<String> = v.iter().map(format_rational).collect();
        println!("  ({})", parts.join(", "));
    }

    // both parities at once: stack the rows, the solution space drops to a ray
    let mut stacked = build_cutoff_system(shape, &SectorBasis::even(1));
    stacked
        .rows
        .extend(build_cutoff_system(shape, &SectorBasis::odd(1)).rows);
    let sol = solve_cutoff_system(&stacked);
    println!("even ∩ odd (N = M = 1): rank {}, nullspace:", sol.rank);
    for v in &sol.basis {
        let parts: Vec<String> = v.iter().map(format_rational).collect();
        println!("  ({})  <- the four-level family", parts.join(", "));
    }

    println!("\ncounting rule (feasible ⇔ more unknowns than conditions ⇔ 2·s0 ≥ k0):");
    println!(
        "{:>4} {:>4} {:>5} {:>5} {:>10}",
        "s0", "k0", "n1", "n2", "feasible"
    );
    for s0 in 0..=3u32 {
        for k0 in 1..=4u32 {
            let f = feasibility(Shape::new(s0, k0));
            println!("{s0:>4} {k0:>4} {:>5} {:>5} {:>10}", f.n1, f.n2, f.feasible);
        }
    }
}

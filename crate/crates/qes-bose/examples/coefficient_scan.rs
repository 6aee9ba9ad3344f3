//! Sweep a coupling along its solution ray and emit CSV + SVG.
//!
//! The cutoff system is homogeneous, so scaling a solution stays a
//! solution: sweeping `A2` for the two-level `L = 1` ray `(-2, -1, 1)·A2`
//! keeps the sector invariant at every step and the two levels trace
//! `1 ± √(1 + 8·A2²)`.

use qes_bose::emit::{scan_csv, scan_svg};
use qes_bose::model::{HamiltonianSpec, SectorBasis};
use qes_bose::rational::{format_rational, rat, rat_int, to_f64, Rational};
use qes_bose::spectra::{build_subspace_matrix, eigen_general};

fn main() -> qes_bose::Result<()> {
    let base = HamiltonianSpec::h1(vec![rat_int(1)], [rat_int(-2), rat_int(-1), rat_int(1)]);
    let sector = SectorBasis::even(1);
    let base_a2 = base.coupling(2, 1);

    let steps = 11u32;
    let mut values: Vec<Rational> = Vec::new();
    let mut levels: Vec<Vec<f64>> = Vec::new();
    for i in 0..steps {
        let a2 = rat(i64::from(i), i64::from(steps - 1)); // 0 .. 1 exactly
        let stepped = base.scale_couplings(&(&a2 / &base_a2));
        let m = build_subspace_matrix(&stepped, &sector)?;
        let result = eigen_general(&m, 1e-12)?;
        println!(
            "A2 = {:>5}: levels {:?} (formula 1 ± √(1+8·A2²))",
            format_rational(&a2),
            result.eigenvalues
        );
        values.push(a2);
        levels.push(result.eigenvalues);
    }

    let dir = std::env::temp_dir();
    let csv_path = dir.join("two_level_scan.csv");
    let svg_path = dir.join("two_level_scan.svg");
    std::fs::write(&csv_path, scan_csv(&values, &levels))?;
    let xs: Vec<f64> = values.iter().map(to_f64).collect();
    std::fs::write(&svg_path, scan_svg("A[2,1]", &xs, &levels))?;
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(())
}

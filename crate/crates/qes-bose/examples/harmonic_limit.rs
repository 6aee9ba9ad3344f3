//! Zero coupling sanity check: with `V = 0` every sector of the number
//! operator is invariant and the sector spectrum is just the diagonal
//! `γ_n`. Walks the full pipeline once: build the sector matrix, map it to
//! the orthonormal basis, diagonalize, certify against the brute-force
//! truncation.

use qes_bose::model::{HamiltonianSpec, SectorBasis};
use qes_bose::oracle::{default_n_max, match_spectra};
use qes_bose::rational::rat_int;
use qes_bose::spectra::{build_subspace_matrix, eigen_general, symmetrize};

fn main() -> qes_bose::Result<()> {
    let spec = HamiltonianSpec::new(2, vec![rat_int(1)], &[])?;
    let sector = SectorBasis::even(1);

    let matrix = build_subspace_matrix(&spec, &sector)?;
    println!("monomial matrix (even sector, N = 1):");
    for i in 0..matrix.dim() {
        let row: Vec<String> = (0..matrix.dim())
            .map(|j| format!("{:6.2}", matrix.get(i, j)))
            .collect();
        println!("  [{}]", row.join(" "));
    }

    let s = symmetrize(&matrix);
    println!("symmetrized asymmetry: {:.3e}", s.asymmetry());

    let result = eigen_general(&matrix, 1e-12)?;
    println!(
        "levels: {:?}  (harmonic: 0 and 2 quanta)",
        result.eigenvalues
    );

    let report = match_spectra(&result, &spec, &sector, default_n_max(&sector), 1e-10)?;
    println!(
        "oracle: {} matched, max gap {:.3e}",
        report.matched.len(),
        report.max_gap()
    );
    Ok(())
}

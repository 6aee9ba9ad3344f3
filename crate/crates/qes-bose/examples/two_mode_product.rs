//! Two bosonic modes: `H = Σ_i w_i · H_i^(a) ⊗ h_i^(b)`.
//!
//! Invariance is per-factor, so a separable sum `H ⊗ 1 + 1 ⊗ h` of two
//! closed sectors has the pairwise-sum spectrum, and genuinely coupled
//! terms still close the product sector as long as each factor closes its
//! own. Both cases are certified against a two-mode truncated matrix.

use qes_bose::model::{HamiltonianSpec, SectorBasis};
use qes_bose::multimode::{
    check_product_invariance, product_spectrum, two_mode_truncated_eigenvalues, ProductFactor,
    ProductHamiltonian, ProductTerm,
};
use qes_bose::oracle::match_levels;
use qes_bose::rational::{rat, rat_int};

fn main() -> qes_bose::Result<()> {
    let qes_2x2 = HamiltonianSpec::h1(vec![rat_int(1)], [rat_int(-2), rat_int(0), rat(1, 2)]);
    let harmonic = HamiltonianSpec::new(2, vec![rat_int(1)], &[])?;

    let separable = ProductHamiltonian {
        terms: vec![
            ProductTerm {
                weight: rat_int(1),
                factor_a: ProductFactor::Spec(qes_2x2.clone()),
                factor_b: ProductFactor::Identity,
            },
            ProductTerm {
                weight: rat_int(1),
                factor_a: ProductFactor::Identity,
                factor_b: ProductFactor::Spec(harmonic.clone()),
            },
        ],
        sector_a: SectorBasis::even(1),
        sector_b: SectorBasis::even(1),
    };
    println!(
        "separable invariant: {}",
        check_product_invariance(&separable)?
    );
    let spectrum = product_spectrum(&separable, 1e-12)?;
    println!(
        "separable levels {:?} = pairwise sums of {{-2, 4}} and {{0, 2}}",
        spectrum.eigenvalues
    );

    // add a coupled cross term; per-factor closure still holds
    let four = HamiltonianSpec::h1(vec![rat_int(1)], [rat_int(6), rat_int(-5), rat_int(1)]);
    let coupled = ProductHamiltonian {
        terms: vec![
            ProductTerm {
                weight: rat_int(1),
                factor_a: ProductFactor::Spec(four.clone()),
                factor_b: ProductFactor::Identity,
            },
            ProductTerm {
                weight: rat_int(1),
                factor_a: ProductFactor::Identity,
                factor_b: ProductFactor::Spec(four.clone()),
            },
            ProductTerm {
                weight: rat(1, 3),
                factor_a: ProductFactor::Spec(four.clone()),
                factor_b: ProductFactor::Spec(four),
            },
        ],
        sector_a: SectorBasis::even(1),
        sector_b: SectorBasis::odd(1),
    };
    let spectrum = product_spectrum(&coupled, 1e-12)?;
    println!("coupled product levels: {:?}", spectrum.eigenvalues);
    let oracle = two_mode_truncated_eigenvalues(&coupled, 10, 11);
    let report = match_levels(&spectrum.eigenvalues, &oracle, 1e-10);
    println!(
        "two-mode oracle: {}/{} matched, max gap {:.3e}",
        report.matched.len(),
        spectrum.eigenvalues.len(),
        report.max_gap()
    );
    Ok(())
}

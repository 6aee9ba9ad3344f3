//! Two coupling rays with closed-form level pairs, and the difference
//! between them.
//!
//! In the stride-2 quadratic family the coupling polynomial
//! `P(y) = A0 + A1·y + A2·y²` controls everything: `α_l = P(2l)` and
//! `β_l = 2l(2l−1)·P(2l−2)`.
//!
//! * `two_level_relations(L)` has `P` vanishing at `2L` and `2L−3`. The
//!   even sector closes at `L` and the identities `α_{L−1} = −2A2`,
//!   `β_L = −4L(2L−1)A2` hold exactly, so the top 2×2 block carries the
//!   pair `(γ_L+γ_{L−1})/2 ± √((γ_L−γ_{L−1})²/4 + 8L(2L−1)A2²)` — but
//!   `β_{L−1} = 8(L−1)(2L−3)A2 ≠ 0` for `L ≥ 2`, so that block stays
//!   coupled to the rest of the sector and the pair only equals true
//!   levels at `L = 1`. (The second root 2L−3 is odd: this ray actually
//!   closes the odd sector at `M = L−2` as well.)
//! * `two_level_factorization(L)` has `P` vanishing at `2L` and `2L−4`,
//!   which is exactly `α_L = 0` together with `β_{L−1} = 0`: the pair
//!   `{Φ_{L−1}, Φ_L}` decouples at every `L` and its two levels,
//!   radicand addend `32L(2L−1)A2²`, sit inside the full spectrum no
//!   matter how large `L` grows.

use qes_bose::conditions::{two_level_factorization, two_level_relations};
use qes_bose::model::{HamiltonianSpec, SectorBasis};
use qes_bose::oracle::{default_n_max, match_spectra};
use qes_bose::rational::{format_rational, rat_int};
use qes_bose::spectra::{build_subspace_matrix, eigen_2x2, eigen_general};

fn in_spectrum(levels: &[f64], e: f64) -> bool {
    levels
        .iter()
        .any(|x| (x - e).abs() <= 1e-9 * (1.0 + e.abs()))
}

fn main() -> qes_bose::Result<()> {
    let l = 3u32;
    let sector = SectorBasis::even(l);
    let (gamma_lo, gamma_hi) = (2.0 * (l as f64 - 1.0), 2.0 * l as f64);

    for (name, ratios, addend) in [
        (
            "roots {2L, 2L-3}",
            two_level_relations(l)?,
            8.0 * l as f64 * (2 * l - 1) as f64,
        ),
        (
            "roots {2L, 2L-4}",
            two_level_factorization(l)?,
            32.0 * l as f64 * (2 * l - 1) as f64,
        ),
    ] {
        let pretty: Vec<String> = ratios.iter().map(format_rational).collect();
        let spec = HamiltonianSpec::h1(vec![rat_int(1)], ratios);
        let beta_below = spec.beta_exact(&sector, l - 1, 1)?;
        let m = build_subspace_matrix(&spec, &sector)?;
        let full = eigen_general(&m, 1e-12)?;
        let (pair_lo, pair_hi) = eigen_2x2(gamma_lo, gamma_hi, addend)?;
        println!("L = {l}, {name}: (A0, A1, A2) = ({})", pretty.join(", "));
        println!("  β_(L-1) = {}", format_rational(&beta_below));
        println!("  top-block pair: {{{pair_lo:.12}, {pair_hi:.12}}}");
        println!("  full sector spectrum: {:?}", full.eigenvalues);
        println!(
            "  pair present in the spectrum: {}",
            in_spectrum(&full.eigenvalues, pair_lo) && in_spectrum(&full.eigenvalues, pair_hi)
        );
        let report = match_spectra(&full, &spec, &sector, default_n_max(&sector), 1e-10)?;
        println!(
            "  oracle: {}/{} levels certified\n",
            report.matched.len(),
            full.eigenvalues.len()
        );
    }
    Ok(())
}

//! Two-mode products: `H = Σ_i w_i · H_i^(a) ⊗ h_i^(b)`.
//!
//! Each factor is either a Hamiltonian of the single-mode family or the
//! identity (the identity is not expressible inside the family, whose
//! diagonal polynomial starts at p = 1, so it gets its own variant; the
//! separable sum `H ⊗ 1 + 1 ⊗ h` needs it). A term preserves the product
//! sector whenever each factor preserves its own sector, so invariance is
//! checked per factor and the assembled matrix is a weighted sum of
//! Kronecker products of the per-mode blocks, with composite index
//! `(n_a, n_b) → n_a · (N_b+1) + n_b`.
//!
//! Whether some sum of terms could preserve a subspace without each term
//! doing so is not searched.

use nalgebra::DMatrix;

use crate::conditions::{check_cutoff, first_cutoff_violation};
use crate::dense::SymmetricMatrix;
use crate::error::{QesError, Result};
use crate::model::{HamiltonianSpec, SectorBasis};
use crate::rational::{format_rational, to_f64, Rational};
use crate::spectra::{
    build_subspace_matrix, fock_scales_from_numbers, scale_ratio, spectrum_from_symmetric,
    BandMatrix, EigenOptions, SpectrumResult,
};

/// One side of a product term.
#[derive(Clone, Debug)]
pub enum ProductFactor {
    Identity,
    Spec(HamiltonianSpec),
}

impl ProductFactor {
    fn preserves(&self, sector: &SectorBasis) -> Result<bool> {
        match self {
            ProductFactor::Identity => Ok(true),
            ProductFactor::Spec(spec) => check_cutoff(spec, sector),
        }
    }

    fn block(&self, sector: &SectorBasis) -> Result<FactorBlock> {
        match self {
            ProductFactor::Identity => Ok(FactorBlock::Identity),
            ProductFactor::Spec(spec) => {
                Ok(FactorBlock::Band(build_subspace_matrix(spec, sector)?))
            }
        }
    }

    fn fock_element(&self, m: u64, n: u64) -> f64 {
        match self {
            ProductFactor::Identity => {
                if m == n {
                    1.0
                } else {
                    0.0
                }
            }
            ProductFactor::Spec(spec) => spec.fock_matrix_element(m, n),
        }
    }
}

enum FactorBlock {
    Identity,
    Band(BandMatrix),
}

impl FactorBlock {
    fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            FactorBlock::Identity => {
                if i == j {
                    1.0
                } else {
                    0.0
                }
            }
            FactorBlock::Band(m) => m.get(i, j),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProductTerm {
    pub weight: Rational,
    pub factor_a: ProductFactor,
    pub factor_b: ProductFactor,
}

#[derive(Clone, Debug)]
pub struct ProductHamiltonian {
    pub terms: Vec<ProductTerm>,
    pub sector_a: SectorBasis,
    pub sector_b: SectorBasis,
}

impl ProductHamiltonian {
    pub fn dim(&self) -> usize {
        self.sector_a.dim() * self.sector_b.dim()
    }
}

/// True iff every factor preserves its sector.
pub fn check_product_invariance(ph: &ProductHamiltonian) -> Result<bool> {
    for term in &ph.terms {
        if !term.factor_a.preserves(&ph.sector_a)? || !term.factor_b.preserves(&ph.sector_b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn first_product_violation(ph: &ProductHamiltonian) -> Result<Option<(u32, u32, Rational)>> {
    for term in &ph.terms {
        for (factor, sector) in [
            (&term.factor_a, &ph.sector_a),
            (&term.factor_b, &ph.sector_b),
        ] {
            if let ProductFactor::Spec(spec) = factor {
                if let Some(v) = first_cutoff_violation(spec, sector)? {
                    return Ok(Some(v));
                }
            }
        }
    }
    Ok(None)
}

/// Dense product matrix in monomial coordinates.
#[derive(Clone, Debug)]
pub struct ProductMatrix {
    sector_a: SectorBasis,
    sector_b: SectorBasis,
    data: Vec<f64>,
}

impl ProductMatrix {
    pub fn dim(&self) -> usize {
        self.sector_a.dim() * self.sector_b.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim() + col]
    }

    fn split(&self, idx: usize) -> (u32, u32) {
        let db = self.sector_b.dim();
        ((idx / db) as u32, (idx % db) as u32)
    }

    /// Product factorial ratio `D_I / D_J` for composite indices.
    fn ratio(&self, i: usize, j: usize) -> f64 {
        let (ia, ib) = self.split(i);
        let (ja, jb) = self.split(j);
        let axis = |m_i: u64, m_j: u64| {
            if m_i >= m_j {
                scale_ratio(m_i, m_j)
            } else {
                1.0 / scale_ratio(m_j, m_i)
            }
        };
        axis(
            self.sector_a.particle_number(ia),
            self.sector_a.particle_number(ja),
        ) * axis(
            self.sector_b.particle_number(ib),
            self.sector_b.particle_number(jb),
        )
    }

    /// `(D_a ⊗ D_b) M (D_a ⊗ D_b)⁻¹`: the product matrix over orthonormal
    /// two-mode number states.
    pub fn symmetrize(&self) -> SymmetricMatrix {
        let dim = self.dim();
        let mut s = SymmetricMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let entry = self.get(i, j);
                if entry != 0.0 {
                    s.set(i, j, entry * self.ratio(i, j));
                }
            }
        }
        s
    }
}

/// Assemble `Σ_i w_i (block_a,i ⊗ block_b,i)`; requires product invariance
/// and reports the first offending edge coupling otherwise.
pub fn build_product_matrix(ph: &ProductHamiltonian) -> Result<ProductMatrix> {
    if let Some((k, index, alpha)) = first_product_violation(ph)? {
        return Err(QesError::InvariantSubspaceViolated {
            index,
            k,
            alpha: format_rational(&alpha),
        });
    }
    let da = ph.sector_a.dim();
    let db = ph.sector_b.dim();
    let dim = da * db;
    let mut data = vec![0.0f64; dim * dim];
    for term in &ph.terms {
        let w = to_f64(&term.weight);
        if w == 0.0 {
            continue;
        }
        let block_a = term.factor_a.block(&ph.sector_a)?;
        let block_b = term.factor_b.block(&ph.sector_b)?;
        for ia in 0..da {
            for ja in 0..da {
                let a_entry = block_a.get(ia, ja);
                if a_entry == 0.0 {
                    continue;
                }
                for ib in 0..db {
                    for jb in 0..db {
                        let b_entry = block_b.get(ib, jb);
                        if b_entry == 0.0 {
                            continue;
                        }
                        data[(ia * db + ib) * dim + (ja * db + jb)] += w * a_entry * b_entry;
                    }
                }
            }
        }
    }
    Ok(ProductMatrix {
        sector_a: ph.sector_a,
        sector_b: ph.sector_b,
        data,
    })
}

/// Diagonalize the symmetrized product matrix.
pub fn product_spectrum(ph: &ProductHamiltonian, tol: f64) -> Result<SpectrumResult> {
    product_spectrum_with(ph, EigenOptions::with_tol(tol))
}

pub fn product_spectrum_with(
    ph: &ProductHamiltonian,
    opts: EigenOptions,
) -> Result<SpectrumResult> {
    let m = build_product_matrix(ph)?;
    let s = m.symmetrize();
    let da: Vec<f64> =
        fock_scales_from_numbers((0..=ph.sector_a.top()).map(|n| ph.sector_a.particle_number(n)));
    let db: Vec<f64> =
        fock_scales_from_numbers((0..=ph.sector_b.top()).map(|n| ph.sector_b.particle_number(n)));
    let mut scales = Vec::with_capacity(m.dim());
    for sa in &da {
        for sb in &db {
            scales.push(sa * sb);
        }
    }
    spectrum_from_symmetric(&s, &scales, opts)
}

/// Brute-force route: the two-mode Hamiltonian on the full truncated pair
/// basis `{(m_a, m_b) : m_a ≤ n_max_a, m_b ≤ n_max_b}`, filled from
/// per-mode ladder matrix elements and diagonalized with the oracle-side
/// solver. Returns sorted eigenvalues.
pub fn two_mode_truncated_eigenvalues(
    ph: &ProductHamiltonian,
    n_max_a: usize,
    n_max_b: usize,
) -> Vec<f64> {
    let da = n_max_a + 1;
    let db = n_max_b + 1;
    let dim = da * db;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for term in &ph.terms {
        let w = to_f64(&term.weight);
        if w == 0.0 {
            continue;
        }
        // per-mode element tables
        let table = |factor: &ProductFactor, d: usize| -> Vec<f64> {
            let mut t = vec![0.0; d * d];
            for m in 0..d {
                for n in 0..d {
                    t[m * d + n] = factor.fock_element(m as u64, n as u64);
                }
            }
            t
        };
        let ta = table(&term.factor_a, da);
        let tb = table(&term.factor_b, db);
        for ma in 0..da {
            for na in 0..da {
                let ea = ta[ma * da + na];
                if ea == 0.0 {
                    continue;
                }
                for mb in 0..db {
                    for nb in 0..db {
                        let eb = tb[mb * db + nb];
                        if eb != 0.0 {
                            h[(ma * db + mb, na * db + nb)] += w * ea * eb;
                        }
                    }
                }
            }
        }
    }
    let mut vals: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::match_levels;
    use crate::rational::{rat, rat_int};

    fn harmonic() -> HamiltonianSpec {
        HamiltonianSpec::new(2, vec![rat_int(1)], &[]).unwrap()
    }

    fn qes_2x2() -> HamiltonianSpec {
        HamiltonianSpec::h1(vec![rat_int(1)], [rat_int(-2), rat_int(0), rat(1, 2)])
    }

    fn separable(
        a: HamiltonianSpec,
        b: HamiltonianSpec,
        top_a: u32,
        top_b: u32,
    ) -> ProductHamiltonian {
        ProductHamiltonian {
            terms: vec![
                ProductTerm {
                    weight: rat_int(1),
                    factor_a: ProductFactor::Spec(a),
                    factor_b: ProductFactor::Identity,
                },
                ProductTerm {
                    weight: rat_int(1),
                    factor_a: ProductFactor::Identity,
                    factor_b: ProductFactor::Spec(b),
                },
            ],
            sector_a: SectorBasis::even(top_a),
            sector_b: SectorBasis::even(top_b),
        }
    }

    #[test]
    fn separable_harmonic_pair_sums() {
        let ph = separable(harmonic(), harmonic(), 1, 1);
        assert!(check_product_invariance(&ph).unwrap());
        let spec = product_spectrum(&ph, 1e-12).unwrap();
        let expect = [0.0, 2.0, 2.0, 4.0];
        for (got, want) in spec.eigenvalues.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn separable_qes_and_harmonic() {
        let ph = separable(qes_2x2(), harmonic(), 1, 1);
        let spec = product_spectrum(&ph, 1e-12).unwrap();
        let expect = [-2.0, 0.0, 4.0, 6.0];
        for (got, want) in spec.eigenvalues.iter().zip(expect) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn diagonal_times_diagonal() {
        let ph = ProductHamiltonian {
            terms: vec![ProductTerm {
                weight: rat_int(1),
                factor_a: ProductFactor::Spec(harmonic()),
                factor_b: ProductFactor::Spec(harmonic()),
            }],
            sector_a: SectorBasis::even(2),
            sector_b: SectorBasis::even(1),
        };
        let m = build_product_matrix(&ph).unwrap();
        // γ^a_n γ^b_m on the diagonal, row-major (n_a, n_b)
        let expect = [0.0, 0.0, 0.0, 4.0, 0.0, 8.0];
        for (idx, want) in expect.iter().enumerate() {
            assert_eq!(m.get(idx, idx), *want);
        }
    }

    #[test]
    fn invariance_failure_is_detected_and_reported() {
        let leaky = HamiltonianSpec::new(2, vec![rat_int(1)], &[(0, 1, rat_int(1))]).unwrap();
        let ph = separable(leaky, harmonic(), 1, 1);
        assert!(!check_product_invariance(&ph).unwrap());
        assert!(matches!(
            build_product_matrix(&ph),
            Err(QesError::InvariantSubspaceViolated { .. })
        ));
    }

    #[test]
    fn product_symmetrization_is_hermitian() {
        let four = HamiltonianSpec::h1(vec![rat_int(1)], [rat_int(6), rat_int(-5), rat_int(1)]);
        let ph = ProductHamiltonian {
            terms: vec![ProductTerm {
                weight: rat(1, 3),
                factor_a: ProductFactor::Spec(four.clone()),
                factor_b: ProductFactor::Spec(four),
            }],
            sector_a: SectorBasis::even(1),
            sector_b: SectorBasis::even(1),
        };
        let s = build_product_matrix(&ph).unwrap().symmetrize();
        assert!(s.asymmetry() <= 1e-12 * s.max_abs());
    }

    #[test]
    fn coupled_term_matches_two_mode_oracle() {
        let four = HamiltonianSpec::h1(vec![rat_int(1)], [rat_int(6), rat_int(-5), rat_int(1)]);
        let ph = ProductHamiltonian {
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
                    weight: rat(1, 2),
                    factor_a: ProductFactor::Spec(four.clone()),
                    factor_b: ProductFactor::Spec(four),
                },
            ],
            sector_a: SectorBasis::even(1),
            sector_b: SectorBasis::odd(1),
        };
        assert!(check_product_invariance(&ph).unwrap());
        let spec = product_spectrum(&ph, 1e-12).unwrap();
        let oracle = two_mode_truncated_eigenvalues(&ph, 10, 11);
        let report = match_levels(&spec.eigenvalues, &oracle, 1e-10);
        assert!(report.all_matched(), "unmatched: {:?}", report.unmatched);
    }
}

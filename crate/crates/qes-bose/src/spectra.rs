//! Invariant-subspace matrices and their spectra.
//!
//! Once the cutoff conditions hold, the sector `{Φ_0 … Φ_N}` carries a
//! finite matrix with `γ_n` on the diagonal, `α_{n,k}` below it and
//! `β_{n,k}` above it (column `n` records the image of `Φ_n`). The
//! monomials are unnormalized states, so this matrix is not symmetric;
//! conjugating by `D = diag(√((qn+r)!))` maps it onto the orthonormal
//! number basis where it is symmetric, has a guaranteed real spectrum, and
//! can be handed to a symmetric eigensolver. The raw monomial matrix is
//! never fed to a non-symmetric solver.
//!
//! Closed forms for the 2×2 and 3×3 stride-2 cases live next to the
//! general path so the two can check each other. The 2×2 level pair is
//! always the difference form `(γ_a+γ_b)/2 ± √((γ_a−γ_b)²/4 + αβ)` — that
//! is what the block's characteristic polynomial gives, and the
//! brute-force oracle confirms it (see the acceptance suite).

use serde::{Deserialize, Serialize};

use crate::conditions::first_cutoff_violation;
use crate::dense::{jacobi_eigen, solve_cubic_real, SymmetricMatrix};
use crate::error::{QesError, Result};
use crate::model::{HamiltonianSpec, SectorBasis};
use crate::rational::{format_rational, to_f64};

// ─────────────────────────────────────────────────────────────────────
//  Band matrix (monomial basis)
// ─────────────────────────────────────────────────────────────────────

/// Matrix of the Hamiltonian action on one sector in the monomial basis.
///
/// `start` is the first included basis index; it is 0 for full sector
/// builds and nonzero for sub-blocks, which keep the particle numbers of
/// their parent (those drive the factorial symmetrization).
#[derive(Clone, Debug)]
pub struct BandMatrix {
    sector: SectorBasis,
    start: u32,
    dim: usize,
    bandwidth: u32,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sector(&self) -> &SectorBasis {
        &self.sector
    }

    pub fn bandwidth(&self) -> u32 {
        self.bandwidth
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    /// Particle number of row/col `i`.
    pub fn particle_number(&self, i: usize) -> u64 {
        self.sector.particle_number(self.start + i as u32)
    }

    /// Contiguous sub-block over basis indices `lo..=hi` of this matrix.
    pub fn sub_block(&self, lo: usize, hi: usize) -> BandMatrix {
        assert!(lo <= hi && hi < self.dim);
        let dim = hi - lo + 1;
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = self.get(lo + i, lo + j);
            }
        }
        BandMatrix {
            sector: self.sector,
            start: self.start + lo as u32,
            dim,
            bandwidth: self.bandwidth,
            data,
        }
    }
}

/// Assemble the invariant-subspace matrix for a sector.
///
/// Errors with [`QesError::InvariantSubspaceViolated`] (carrying the exact
/// value of the first nonzero edge coupling) when the sector is not closed.
pub fn build_subspace_matrix(spec: &HamiltonianSpec, sector: &SectorBasis) -> Result<BandMatrix> {
    if let Some((k, index, alpha)) = first_cutoff_violation(spec, sector)? {
        return Err(QesError::InvariantSubspaceViolated {
            index,
            k,
            alpha: format_rational(&alpha),
        });
    }
    let dim = sector.dim();
    let mut data = vec![0.0f64; dim * dim];
    for n in 0..=sector.top() {
        let col = n as usize;
        data[col * dim + col] = spec.gamma(sector, n)?;
        for k in 1..=spec.k0() {
            if n + k <= sector.top() {
                data[(n + k) as usize * dim + col] = spec.alpha(sector, n, k)?;
            }
            if n >= k {
                data[(n - k) as usize * dim + col] = spec.beta(sector, n, k)?;
            }
        }
    }
    if let Some(bad) = data.iter().position(|x| !x.is_finite()) {
        return Err(QesError::NonFiniteEntry {
            row: bad / dim,
            col: bad % dim,
        });
    }
    Ok(BandMatrix {
        sector: *sector,
        start: 0,
        dim,
        bandwidth: spec.k0(),
        data,
    })
}

// ─────────────────────────────────────────────────────────────────────
//  Symmetrization
// ─────────────────────────────────────────────────────────────────────

/// Ratio `D_i / D_j = √(m_i! / m_j!)` for particle numbers `m_i ≥ m_j`,
/// accumulated as a product of `m_i − m_j` consecutive integers: no raw
/// factorial is ever formed.
pub(crate) fn scale_ratio(m_hi: u64, m_lo: u64) -> f64 {
    let mut prod = 1.0f64;
    for t in (m_lo + 1)..=m_hi {
        prod *= t as f64;
    }
    prod.sqrt()
}

/// `S = D M D⁻¹` with `D = diag(√(m_i!))`: the matrix in the orthonormal
/// number basis. Each entry is scaled independently from its own monomial
/// entry, so the symmetry of the result is a genuine cross-check of the α
/// and β routes rather than being imposed.
pub fn symmetrize(m: &BandMatrix) -> SymmetricMatrix {
    let dim = m.dim();
    let mut s = SymmetricMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let entry = m.get(i, j);
            if entry == 0.0 {
                continue;
            }
            let value = if i >= j {
                entry * scale_ratio(m.particle_number(i), m.particle_number(j))
            } else {
                entry / scale_ratio(m.particle_number(j), m.particle_number(i))
            };
            s.set(i, j, value);
        }
    }
    s
}

/// The diagonal of `D` itself (√(m_i!)) for a list of particle numbers,
/// accumulated incrementally. Overflows to infinity beyond ~170 particles;
/// QES sectors in practice stay far below that.
pub(crate) fn fock_scales_from_numbers(numbers: impl Iterator<Item = u64>) -> Vec<f64> {
    let mut d = Vec::new();
    let mut prev_m = 0u64;
    let mut prev_d = 1.0f64;
    for mi in numbers {
        prev_d *= scale_ratio(mi, prev_m);
        prev_m = mi;
        d.push(prev_d);
    }
    d
}

fn fock_scales(m: &BandMatrix) -> Vec<f64> {
    fock_scales_from_numbers((0..m.dim()).map(|i| m.particle_number(i)))
}

// ─────────────────────────────────────────────────────────────────────
//  Closed forms
// ─────────────────────────────────────────────────────────────────────

/// Levels of a decoupled 2×2 block: `(γ_a+γ_b)/2 ± √((γ_a−γ_b)²/4 + αβ)`.
/// Returned ascending. A negative radicand means the pair is complex, i.e.
/// the input did not come from a Hermitian-consistent block.
pub fn eigen_2x2(gamma_a: f64, gamma_b: f64, offdiag_product: f64) -> Result<(f64, f64)> {
    let disc = (gamma_a - gamma_b).powi(2) / 4.0 + offdiag_product;
    if disc < 0.0 {
        return Err(QesError::ComplexPair { disc });
    }
    let mean = 0.5 * (gamma_a + gamma_b);
    let root = disc.sqrt();
    Ok((mean - root, mean + root))
}

/// Closed-form levels of the three-dimensional stride-2 sector (top index
/// 2) of the quadratic single-hop family: the roots of
///
/// ```text
/// E³ − (γ1+γ2)E² + [γ1γ2 − 16(5A1² + 52A1A2 + 140A2²)]E + 32γ2(A1+4A2)² = 0
/// ```
///
/// Requires the L=2 cutoff `α_2 = A0 + 4A1 + 16A2 = 0`; sorted ascending.
pub fn eigen_cubic_h1(spec: &HamiltonianSpec, gamma1: f64, gamma2: f64) -> Result<[f64; 3]> {
    if spec.q() != 2 || spec.k0() != 1 || spec.s0() > 2 {
        return Err(QesError::NotH1Family(format!(
            "need q=2, k0=1, s0<=2; got q={}, k0={}, s0={}",
            spec.q(),
            spec.k0(),
            spec.s0()
        )));
    }
    let alpha2 = spec.fock_coupling_exact(4, 1);
    if !num::Zero::is_zero(&alpha2) {
        return Err(QesError::InvariantSubspaceViolated {
            index: 2,
            k: 1,
            alpha: format_rational(&alpha2),
        });
    }
    let a1 = to_f64(&spec.coupling(1, 1));
    let a2 = to_f64(&spec.coupling(2, 1));
    let c2 = -(gamma1 + gamma2);
    let c1 = gamma1 * gamma2 - 16.0 * (5.0 * a1 * a1 + 52.0 * a1 * a2 + 140.0 * a2 * a2);
    let c0 = 32.0 * gamma2 * (a1 + 4.0 * a2).powi(2);
    Ok(solve_cubic_real(c2, c1, c0))
}

// ─────────────────────────────────────────────────────────────────────
//  General solver
// ─────────────────────────────────────────────────────────────────────

/// Eigenvalues sorted ascending, eigenvectors in both bases, residuals.
///
/// `vectors_fock[i]` is the unit-norm eigenvector of the symmetrized
/// matrix; `vectors_monomial[i]` is the same vector carried back by `D⁻¹`
/// (coefficients over `Φ_n`). `residuals[i] = ‖S v − E v‖₂` against the
/// raw symmetrized matrix; `residual_max` is their maximum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub vectors_monomial: Vec<Vec<f64>>,
    pub vectors_fock: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub residual_max: f64,
}

/// Solver knobs. `tol` is relative to the Frobenius norm of the
/// symmetrized matrix; `max_dim` guards against accidentally huge sectors
/// (QES blocks are small by construction) and can be raised by the CLI via
/// `QES_BOSE_MAX_DIM`.
#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    pub tol: f64,
    pub max_dim: usize,
    pub max_sweeps: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-12,
            max_dim: 512,
            max_sweeps: 64,
        }
    }
}

impl EigenOptions {
    pub fn with_tol(tol: f64) -> Self {
        EigenOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Diagonalize the symmetrized sector matrix.
pub fn eigen_general(m: &BandMatrix, tol: f64) -> Result<SpectrumResult> {
    eigen_general_with(m, EigenOptions::with_tol(tol))
}

pub fn eigen_general_with(m: &BandMatrix, opts: EigenOptions) -> Result<SpectrumResult> {
    if m.dim() > opts.max_dim {
        return Err(QesError::DimensionCap {
            dim: m.dim(),
            cap: opts.max_dim,
        });
    }
    let s = symmetrize(m);
    spectrum_from_symmetric(&s, &fock_scales(m), opts)
}

/// Shared solver core: also used by the two-mode product path, which
/// supplies its own Kronecker factorial scaling.
pub(crate) fn spectrum_from_symmetric(
    s: &SymmetricMatrix,
    fock_scale: &[f64],
    opts: EigenOptions,
) -> Result<SpectrumResult> {
    let dim = s.dim();
    if dim > opts.max_dim {
        return Err(QesError::DimensionCap {
            dim,
            cap: opts.max_dim,
        });
    }
    if let Some((row, col)) = s.first_non_finite() {
        return Err(QesError::NonFiniteEntry { row, col });
    }
    let (eigenvalues, vecs) = jacobi_eigen(s, opts.max_sweeps)?;
    let norm = s.frobenius_norm();
    let mut vectors_fock = Vec::with_capacity(dim);
    let mut vectors_monomial = Vec::with_capacity(dim);
    let mut residuals = Vec::with_capacity(dim);
    let mut residual_max = 0.0f64;
    for (idx, &lambda) in eigenvalues.iter().enumerate() {
        let fock: Vec<f64> = (0..dim).map(|i| vecs[i * dim + idx]).collect();
        let mut acc = 0.0f64;
        for i in 0..dim {
            let sum: f64 = fock.iter().enumerate().map(|(j, f)| s.get(i, j) * f).sum();
            acc += (sum - lambda * fock[i]).powi(2);
        }
        let residual = acc.sqrt();
        residual_max = residual_max.max(residual);
        residuals.push(residual);
        vectors_monomial.push(fock.iter().zip(fock_scale).map(|(c, d)| c / d).collect());
        vectors_fock.push(fock);
    }
    if residual_max > opts.tol * norm.max(f64::MIN_POSITIVE) {
        return Err(QesError::NoConvergence {
            sweeps: opts.max_sweeps,
            dim,
            dump: format!(
                "residual {residual_max:e} exceeds {:e} · ‖S‖ = {:e}",
                opts.tol,
                opts.tol * norm
            ),
        });
    }
    Ok(SpectrumResult {
        eigenvalues,
        vectors_monomial,
        vectors_fock,
        residuals,
        residual_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn h1(a0: i64, a1: i64, a2: (i64, i64)) -> HamiltonianSpec {
        HamiltonianSpec::h1(
            vec![rat_int(1)],
            [rat_int(a0), rat_int(a1), rat(a2.0, a2.1)],
        )
    }

    #[test]
    fn build_the_2x2_example() {
        // eps1=1, A0=-2, A1=0, A2=1/2: alpha_1 = -2 + 0 + 2 = 0
        let spec = h1(-2, 0, (1, 2));
        let m = build_subspace_matrix(&spec, &SectorBasis::even(1)).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(
            [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)],
            [0.0, -4.0, -2.0, 2.0]
        );
    }

    #[test]
    fn harmonic_matrix_is_diagonal() {
        let free = HamiltonianSpec::new(2, vec![rat_int(1)], &[]).unwrap();
        let m = build_subspace_matrix(&free, &SectorBasis::even(2)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 2.0 * i as f64 } else { 0.0 };
                assert_eq!(m.get(i, j), expect);
            }
        }
    }

    #[test]
    fn violated_sector_reports_offending_alpha() {
        let spec = h1(6, -5, (1, 1));
        let err = build_subspace_matrix(&spec, &SectorBasis::even(2)).unwrap_err();
        match err {
            QesError::InvariantSubspaceViolated { index, k, alpha } => {
                assert_eq!((index, k), (2, 1));
                assert_eq!(alpha, "2");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn symmetrize_the_2x2_example() {
        let spec = h1(-2, 0, (1, 2));
        let m = build_subspace_matrix(&spec, &SectorBasis::even(1)).unwrap();
        let s = symmetrize(&m);
        let expect = -2.0 * 2f64.sqrt();
        assert!((s.get(0, 1) - expect).abs() < 1e-15);
        assert!((s.get(1, 0) - expect).abs() < 1e-15);
        assert_eq!(s.get(0, 0), 0.0);
        assert_eq!(s.get(1, 1), 2.0);
    }

    #[test]
    fn symmetrized_entries_match_fock_route() {
        let spec = HamiltonianSpec::new(
            2,
            vec![rat_int(1), rat(1, 3)],
            &[(0, 1, rat_int(6)), (1, 1, rat_int(-5)), (2, 1, rat_int(1))],
        )
        .unwrap();
        let sector = SectorBasis::even(1);
        let m = build_subspace_matrix(&spec, &sector).unwrap();
        let s = symmetrize(&m);
        let max = s.max_abs();
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let direct = spec.fock_matrix_element(m.particle_number(i), m.particle_number(j));
                assert!(
                    (s.get(i, j) - direct).abs() <= 1e-12 * max.max(1.0),
                    "entry ({i},{j}): {} vs {}",
                    s.get(i, j),
                    direct
                );
            }
        }
        assert!(s.asymmetry() <= 1e-12 * max);
    }

    #[test]
    fn closed_form_2x2_pairs() {
        let (lo, hi) = eigen_2x2(2.0, 0.0, 8.0).unwrap();
        assert!((lo + 2.0).abs() < 1e-14 && (hi - 4.0).abs() < 1e-14);
        let (lo, hi) = eigen_2x2(0.0, 2.0, 0.0).unwrap();
        assert_eq!((lo, hi), (0.0, 2.0));
        // odd four-level pair: γ̃0=1, γ̃1=3, product 24 → 2 ± 5
        let (lo, hi) = eigen_2x2(1.0, 3.0, 24.0).unwrap();
        assert!((lo + 3.0).abs() < 1e-14 && (hi - 7.0).abs() < 1e-14);
        assert!(matches!(
            eigen_2x2(0.0, 0.0, -1.0),
            Err(QesError::ComplexPair { .. })
        ));
    }

    #[test]
    fn cubic_special_case() {
        // A1 = -4A2 with alpha_2 = 0 forces A0 = 0; roots {0, 3 ± √193}
        let spec = h1(0, -4, (1, 1));
        let roots = eigen_cubic_h1(&spec, 2.0, 4.0).unwrap();
        assert!((roots[0] - (3.0 - 193f64.sqrt())).abs() < 1e-12);
        assert!(roots[1].abs() < 1e-12);
        assert!((roots[2] - (3.0 + 193f64.sqrt())).abs() < 1e-12);
        // harmonic: {0, γ1, γ2}
        let free = HamiltonianSpec::h1(vec![rat_int(1)], [rat_int(0), rat_int(0), rat_int(0)]);
        let roots = eigen_cubic_h1(&free, 2.0, 4.0).unwrap();
        assert!(
            (roots[0]).abs() < 1e-12
                && (roots[1] - 2.0).abs() < 1e-12
                && (roots[2] - 4.0).abs() < 1e-12
        );
        // missing cutoff is rejected with the exact alpha value
        let bad = h1(6, -5, (1, 1));
        assert!(matches!(
            eigen_cubic_h1(&bad, 2.0, 4.0),
            Err(QesError::InvariantSubspaceViolated { .. })
        ));
    }

    #[test]
    fn general_solver_agrees_with_closed_forms() {
        let spec = h1(-2, 0, (1, 2));
        let m = build_subspace_matrix(&spec, &SectorBasis::even(1)).unwrap();
        let result = eigen_general(&m, 1e-12).unwrap();
        assert!((result.eigenvalues[0] + 2.0).abs() < 1e-12);
        assert!((result.eigenvalues[1] - 4.0).abs() < 1e-12);
        assert!(result.residual_max <= 1e-12 * symmetrize(&m).frobenius_norm());

        let cubic_spec = h1(0, -4, (1, 1));
        let m3 = build_subspace_matrix(&cubic_spec, &SectorBasis::even(2)).unwrap();
        let got = eigen_general(&m3, 1e-12).unwrap();
        let expect = eigen_cubic_h1(&cubic_spec, 2.0, 4.0).unwrap();
        for (g, e) in got.eigenvalues.iter().zip(expect) {
            assert!((g - e).abs() < 1e-10, "{g} vs {e}");
        }
    }

    #[test]
    fn monomial_vectors_diagonalize_the_raw_matrix() {
        // similarity invariance: M b = E b for the carried-back vectors
        let spec = h1(6, -5, (1, 1));
        let m = build_subspace_matrix(&spec, &SectorBasis::even(1)).unwrap();
        let result = eigen_general(&m, 1e-12).unwrap();
        for (lambda, b) in result.eigenvalues.iter().zip(&result.vectors_monomial) {
            for i in 0..m.dim() {
                let sum: f64 = b.iter().enumerate().map(|(j, x)| m.get(i, j) * x).sum();
                assert!((sum - lambda * b[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn spectrum_result_serde_round_trip() {
        let spec = h1(-2, 0, (1, 2));
        let m = build_subspace_matrix(&spec, &SectorBasis::even(1)).unwrap();
        let result = eigen_general(&m, 1e-12).unwrap();
        let text = serde_json::to_string(&result).unwrap();
        let back: SpectrumResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back.eigenvalues, result.eigenvalues);
        assert_eq!(back.vectors_monomial, result.vectors_monomial);
        assert_eq!(back.vectors_fock, result.vectors_fock);
        assert_eq!(back.residual_max, result.residual_max);
    }

    #[test]
    fn fock_vectors_unit_norm() {
        let spec = h1(0, -4, (1, 1));
        let m = build_subspace_matrix(&spec, &SectorBasis::even(2)).unwrap();
        let result = eigen_general(&m, 1e-12).unwrap();
        for v in &result.vectors_fock {
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_cap() {
        let free = HamiltonianSpec::new(2, vec![rat_int(1)], &[]).unwrap();
        let m = build_subspace_matrix(&free, &SectorBasis::even(9)).unwrap();
        let err = eigen_general_with(
            &m,
            EigenOptions {
                max_dim: 5,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, QesError::DimensionCap { dim: 10, cap: 5 }));
    }

    #[test]
    fn sub_block_keeps_particle_numbers() {
        let spec = h1(4, -5, (1, 1)); // printed two-level ratios at L=2
        let m = build_subspace_matrix(&spec, &SectorBasis::even(2)).unwrap();
        let block = m.sub_block(1, 2);
        assert_eq!(block.dim(), 2);
        assert_eq!(block.particle_number(0), 2);
        assert_eq!(block.particle_number(1), 4);
        assert_eq!(block.get(0, 0), m.get(1, 1));
        assert_eq!(block.get(0, 1), m.get(1, 2));
    }
}

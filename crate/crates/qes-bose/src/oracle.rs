//! Brute-force verification against a truncated number basis.
//!
//! The oracle ignores the monomial machinery entirely: it fills a dense
//! symmetric matrix from the ladder-operator matrix elements
//! `⟨m|H|n⟩` over all particle numbers `0..=n_max` and diagonalizes it
//! (nalgebra's tridiagonalization + QL, deliberately a different algorithm
//! from the Jacobi solver used on the subspace route). Because a satisfied
//! cutoff condition makes the couplings out of the sector exactly zero,
//! the invariant block sits inside the truncated matrix as an exactly
//! decoupled diagonal block, and the algebraic levels must reappear in the
//! truncated spectrum unchanged no matter how large `n_max` grows.

use nalgebra::DMatrix;
use num::Zero;
use serde::Serialize;

use crate::error::{QesError, Result};
use crate::model::{HamiltonianSpec, SectorBasis};
use crate::spectra::SpectrumResult;

/// Dense truncated Hamiltonian on particle numbers `0..=n_max`.
#[derive(Clone, Debug)]
pub struct TruncatedMatrix {
    n_max: usize,
    matrix: DMatrix<f64>,
}

impl TruncatedMatrix {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn entry(&self, m: usize, n: usize) -> f64 {
        self.matrix[(m, n)]
    }

    /// Largest entry magnitude; the scale of the f64 noise floor for
    /// eigenvalues of this matrix.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Sorted eigenvalues of the truncated matrix.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        vals.sort_by(|a, b| a.total_cmp(b));
        vals
    }
}

/// Default truncation: three buffer shells beyond the block, enough to
/// expose any accidental coupling while keeping runs sub-second.
pub fn default_n_max(sector: &SectorBasis) -> usize {
    (u64::from(sector.q()) * (u64::from(sector.top()) + 3) + u64::from(sector.r())) as usize
}

/// Fill the truncated matrix from ladder matrix elements.
pub fn build_truncated(spec: &HamiltonianSpec, n_max: usize) -> Result<TruncatedMatrix> {
    let needed = (spec.q() * spec.k0()) as usize;
    if n_max < needed {
        return Err(QesError::TruncationTooSmall { n_max, needed });
    }
    let dim = n_max + 1;
    let matrix = DMatrix::from_fn(dim, dim, |m, n| {
        spec.fock_matrix_element(m as u64, n as u64)
    });
    // column-major storage in nalgebra
    if let Some(i) = matrix.iter().position(|x| !x.is_finite()) {
        return Err(QesError::NonFiniteEntry {
            row: i % dim,
            col: i / dim,
        });
    }
    Ok(TruncatedMatrix { n_max, matrix })
}

/// One certified level: an algebraic eigenvalue, its nearest truncated
/// eigenvalue, and the gap.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MatchedLevel {
    pub qes: f64,
    pub oracle: f64,
    pub abs_gap: f64,
}

/// Outcome of matching an algebraic spectrum against the oracle. Every QES
/// eigenvalue lands in exactly one of `matched` / `unmatched`.
#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    pub matched: Vec<MatchedLevel>,
    pub unmatched: Vec<f64>,
    pub tol: f64,
}

impl MatchReport {
    pub fn all_matched(&self) -> bool {
        self.unmatched.is_empty()
    }

    pub fn max_gap(&self) -> f64 {
        self.matched.iter().fold(0.0, |m, lvl| m.max(lvl.abs_gap))
    }
}

/// Greedy nearest-neighbor matching with uniqueness: QES levels are taken
/// in ascending order, each claims its nearest still-unclaimed oracle
/// level, and the claim counts as a match when the gap is at most
/// `tol · (1 + |E|)`. Degenerate levels therefore cannot double-match.
pub fn match_levels(qes: &[f64], oracle: &[f64], tol: f64) -> MatchReport {
    let mut sorted_qes = qes.to_vec();
    sorted_qes.sort_by(|a, b| a.total_cmp(b));
    let mut used = vec![false; oracle.len()];
    let mut matched = Vec::new();
    let mut unmatched = Vec::new();
    for &e in &sorted_qes {
        let mut best: Option<(usize, f64)> = None;
        for (i, &o) in oracle.iter().enumerate() {
            if used[i] {
                continue;
            }
            let gap = (o - e).abs();
            if best.is_none_or(|(_, b)| gap < b) {
                best = Some((i, gap));
            }
        }
        match best {
            Some((i, gap)) if gap <= tol * (1.0 + e.abs()) => {
                used[i] = true;
                matched.push(MatchedLevel {
                    qes: e,
                    oracle: oracle[i],
                    abs_gap: gap,
                });
            }
            _ => unmatched.push(e),
        }
    }
    MatchReport {
        matched,
        unmatched,
        tol,
    }
}

/// Certify an algebraic spectrum against the truncated oracle.
///
/// The truncation must contain the whole invariant block
/// (`n_max ≥ qN + r`). Failures are reported in the `unmatched` list, not
/// thrown.
pub fn match_spectra(
    qes: &SpectrumResult,
    spec: &HamiltonianSpec,
    sector: &SectorBasis,
    n_max: usize,
    tol: f64,
) -> Result<MatchReport> {
    let needed = sector.particle_number(sector.top()) as usize;
    if n_max < needed {
        return Err(QesError::TruncationTooSmall { n_max, needed });
    }
    let truncated = build_truncated(spec, n_max)?;
    Ok(match_levels(
        &qes.eigenvalues,
        &truncated.eigenvalues(),
        tol,
    ))
}

/// Exact decoupling of the sector block inside the truncated matrix.
///
/// True iff every truncated-matrix element connecting a block particle
/// number `{qn+r : n ≤ N}` to its complement vanishes identically: the
/// element is `(polynomial in the lower number) · √(positive integer)`,
/// and the square-root factor can never be zero, so the check reduces to
/// exact rational vanishing of the polynomial part — no float tolerance.
pub fn block_decoupling_check(
    spec: &HamiltonianSpec,
    sector: &SectorBasis,
    n_max: usize,
) -> Result<bool> {
    if spec.q() != sector.q() {
        return Err(QesError::StrideMismatch {
            spec_q: spec.q(),
            sector_q: sector.q(),
        });
    }
    let top_particle = sector.particle_number(sector.top());
    if (n_max as u64) <= top_particle {
        return Err(QesError::TruncationTooSmall {
            n_max,
            needed: top_particle as usize + 1,
        });
    }
    for n in 0..=sector.top() {
        let m = sector.particle_number(n);
        for k in 1..=spec.k0() {
            let upper = m + u64::from(k) * u64::from(sector.q());
            if upper > top_particle && upper <= n_max as u64 {
                // ⟨upper|H|m⟩ leaves the block
                if !spec.fock_coupling_exact(m, k).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::spectra::{build_subspace_matrix, eigen_general};

    #[test]
    fn truncated_harmonic_is_the_number_operator() {
        let free = HamiltonianSpec::new(2, vec![rat_int(1)], &[]).unwrap();
        let t = build_truncated(&free, 4).unwrap();
        for m in 0..=4usize {
            for n in 0..=4usize {
                let expect = if m == n { n as f64 } else { 0.0 };
                assert_eq!(t.entry(m, n), expect);
            }
        }
    }

    #[test]
    fn ladder_entries() {
        let spec = HamiltonianSpec::new(2, vec![rat_int(1)], &[(0, 1, rat_int(1))]).unwrap();
        let t = build_truncated(&spec, 6).unwrap();
        assert!((t.entry(2, 0) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(t.entry(3, 0), 0.0);
        assert!(matches!(
            build_truncated(&spec, 1),
            Err(QesError::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn the_2x2_case_is_certified() {
        let spec = HamiltonianSpec::h1(vec![rat_int(1)], [rat_int(-2), rat_int(0), rat(1, 2)]);
        let sector = SectorBasis::even(1);
        let m = build_subspace_matrix(&spec, &sector).unwrap();
        let qes = eigen_general(&m, 1e-12).unwrap();
        let report = match_spectra(&qes, &spec, &sector, 12, 1e-10).unwrap();
        assert!(report.all_matched());
        assert!(report.max_gap() <= 1e-10);
        // truncation precondition
        assert!(matches!(
            match_spectra(&qes, &spec, &sector, 1, 1e-10),
            Err(QesError::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn harmonic_levels_match_exactly() {
        let free = HamiltonianSpec::new(2, vec![rat_int(1)], &[]).unwrap();
        let sector = SectorBasis::even(1);
        let m = build_subspace_matrix(&free, &sector).unwrap();
        let qes = eigen_general(&m, 1e-12).unwrap();
        let report = match_spectra(&qes, &free, &sector, 6, 1e-12).unwrap();
        assert!(report.all_matched());
        assert_eq!(report.max_gap(), 0.0);
    }

    #[test]
    fn four_level_confirms_difference_form() {
        let spec = HamiltonianSpec::h1(vec![rat_int(1)], [rat_int(6), rat_int(-5), rat_int(1)]);
        let mut all = Vec::new();
        for sector in [SectorBasis::even(1), SectorBasis::odd(1)] {
            let m = build_subspace_matrix(&spec, &sector).unwrap();
            all.extend(eigen_general(&m, 1e-12).unwrap().eigenvalues);
        }
        let truncated = build_truncated(&spec, 14).unwrap();
        let report = match_levels(&all, &truncated.eigenvalues(), 1e-10);
        assert_eq!(report.matched.len(), 4);
        assert!(report.all_matched());
        // the odd pair is {2-5, 2+5}: difference form, not 2 ± √28
        assert!(all.iter().any(|e| (e + 3.0).abs() < 1e-10));
        assert!(all.iter().any(|e| (e - 7.0).abs() < 1e-10));
    }

    #[test]
    fn decoupling_is_exact_and_signless() {
        let spec = HamiltonianSpec::h1(vec![rat_int(1)], [rat_int(6), rat_int(-5), rat_int(1)]);
        assert!(block_decoupling_check(&spec, &SectorBasis::even(1), 10).unwrap());
        assert!(block_decoupling_check(&spec, &SectorBasis::odd(1), 11).unwrap());
        let coupled = HamiltonianSpec::new(2, vec![rat_int(1)], &[(0, 1, rat_int(1))]).unwrap();
        assert!(!block_decoupling_check(&coupled, &SectorBasis::even(1), 10).unwrap());
    }

    #[test]
    fn greedy_matching_respects_uniqueness() {
        // two degenerate QES levels, one oracle level: only one may claim it
        let report = match_levels(&[1.0, 1.0], &[1.0, 5.0], 1e-8);
        assert_eq!(report.matched.len(), 1);
        assert_eq!(report.unmatched.len(), 1);
    }
}

//! Cutoff-condition systems and their exact solutions.
//!
//! A sector `{Φ_0 … Φ_N}` is invariant exactly when every upward coupling
//! that would leave it vanishes: `α_{N+1-i, k} = 0` for `i = 1..=k`,
//! `k = 1..=k0`. Each such condition is linear in the couplings `A_{s,k}`
//! with integer coefficients `((N+1-i)q + r)^s`, and conditions for
//! different hops `k` involve disjoint unknowns, so the system is
//! block-diagonal over `k`. Everything in this module is exact: rows are
//! big integers, solving is fraction-free-ish Gauss–Jordan over rationals,
//! and there are no epsilon comparisons anywhere.

use num::bigint::BigInt;
use num::{One, Zero};
use serde::Serialize;

use crate::error::{QesError, Result};
use crate::model::{HamiltonianSpec, SectorBasis};
use crate::rational::{integer_clear, rat_int, Rational};

/// Coupling-polynomial shape `(s0, k0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub s0: u32,
    pub k0: u32,
}

impl Shape {
    pub fn new(s0: u32, k0: u32) -> Self {
        Shape { s0, k0 }
    }

    pub fn of(spec: &HamiltonianSpec) -> Self {
        Shape {
            s0: spec.s0(),
            k0: spec.k0(),
        }
    }

    /// Number of unknowns per hop block.
    fn block_width(&self) -> usize {
        self.s0 as usize + 1
    }

    /// Total unknown count `n2 = (s0+1)·k0`.
    pub fn unknowns(&self) -> usize {
        self.block_width() * self.k0 as usize
    }

    /// Column of `A_{s,k}` in the assembled unknown vector (k-major).
    pub fn column(&self, s: u32, k: u32) -> usize {
        (k as usize - 1) * self.block_width() + s as usize
    }
}

/// One linear condition `Σ_s coeffs[s] · A_{s,k} = 0`.
///
/// For cutoff rows, `depth` is the edge depth `i` and
/// `point = (N+1-i)q + r`; rows whose index would fall below the sector
/// are omitted (only possible when `N < k-1`).
#[derive(Clone, Debug)]
pub struct CutoffRow {
    pub k: u32,
    pub depth: u32,
    pub point: u64,
    pub coeffs: Vec<BigInt>,
}

fn vandermonde_row(point: u64, width: usize) -> Vec<BigInt> {
    let mut coeffs = Vec::with_capacity(width);
    let mut power = BigInt::one();
    let p = BigInt::from(point);
    for _ in 0..width {
        coeffs.push(power.clone());
        power *= &p;
    }
    coeffs
}

/// The exact linear system whose solutions make the sector invariant.
#[derive(Clone, Debug)]
pub struct CutoffSystem {
    pub shape: Shape,
    pub sector: SectorBasis,
    pub rows: Vec<CutoffRow>,
}

/// One row per `(k, i)`, `i = 1..=k`, `k = 1..=k0`, with integer entries
/// `((N+1-i)q + r)^s`.
pub fn build_cutoff_system(shape: Shape, sector: &SectorBasis) -> CutoffSystem {
    let width = shape.block_width();
    let mut rows = Vec::new();
    for k in 1..=shape.k0 {
        for i in 1..=k {
            if i > sector.top() + 1 {
                continue; // no basis element N+1-i in this sector
            }
            let n = sector.top() + 1 - i;
            let point = sector.particle_number(n);
            rows.push(CutoffRow {
                k,
                depth: i,
                point,
                coeffs: vandermonde_row(point, width),
            });
        }
    }
    CutoffSystem {
        shape,
        sector: *sector,
        rows,
    }
}

/// Extension of the cutoff system that additionally isolates the top two
/// basis elements `{Φ_{N-1}, Φ_N}` as an invariant pair: besides the plain
/// cutoff rows this demands `β_{N-1,k} = 0` for every hop and, for hops
/// `k ≥ 2`, `α_{N-1,k} = 0` and `β_{N,k} = 0`. Each extra demand is again a
/// coupling-polynomial root (the falling-factorial prefactor of β is
/// strictly positive wherever β is not identically zero), so the extended
/// system has the same exact-row form. Solving it is the general search for
/// two-level families; duplicate `(k, point)` rows are merged.
pub fn build_two_level_system(shape: Shape, sector: &SectorBasis) -> Result<CutoffSystem> {
    if sector.top() == 0 {
        return Err(QesError::SectorInvalid(
            "two-level isolation needs a sector with top index N >= 1".into(),
        ));
    }
    let n_top = sector.top();
    let width = shape.block_width();
    let mut sys = build_cutoff_system(shape, sector);
    let mut extra_points: Vec<(u32, u64)> = Vec::new();
    for k in 1..=shape.k0 {
        // β_{N-1,k} = 0 (identically true when N-1 < k)
        if n_top > k {
            extra_points.push((k, sector.particle_number(n_top - 1 - k)));
        }
        if k >= 2 {
            // α_{N-1,k} = 0
            extra_points.push((k, sector.particle_number(n_top - 1)));
            // β_{N,k} = 0 (identically true when N < k)
            if n_top >= k {
                extra_points.push((k, sector.particle_number(n_top - k)));
            }
        }
    }
    for (k, point) in extra_points {
        if sys.rows.iter().any(|row| row.k == k && row.point == point) {
            continue;
        }
        sys.rows.push(CutoffRow {
            k,
            depth: 0,
            point,
            coeffs: vandermonde_row(point, width),
        });
    }
    Ok(sys)
}

/// Exact nullspace of a cutoff(-style) system.
#[derive(Clone, Debug)]
pub struct CutoffSolution {
    /// Rank of the full (block-diagonal) coefficient matrix.
    pub rank: usize,
    /// Basis vectors over the assembled unknown layout (k-major, then s).
    /// Reduced form: within each hop block every vector has one free
    /// coordinate set positive, entries integer-cleared.
    pub basis: Vec<Vec<Rational>>,
}

/// Solve the system exactly; one Gauss–Jordan pass per hop block, basis
/// vectors embedded into the full unknown layout.
pub fn solve_cutoff_system(sys: &CutoffSystem) -> CutoffSolution {
    let width = sys.shape.block_width();
    let mut rank = 0usize;
    let mut basis = Vec::new();
    for k in 1..=sys.shape.k0 {
        let block: Vec<Vec<Rational>> = sys
            .rows
            .iter()
            .filter(|row| row.k == k)
            .map(|row| {
                row.coeffs
                    .iter()
                    .map(|c| Rational::from_integer(c.clone()))
                    .collect()
            })
            .collect();
        let (block_rank, block_null) = rational_nullspace(block, width);
        rank += block_rank;
        for vec in block_null {
            let mut full = vec![Rational::zero(); sys.shape.unknowns()];
            let offset = (k as usize - 1) * width;
            full[offset..offset + width].clone_from_slice(&vec);
            basis.push(full);
        }
    }
    CutoffSolution { rank, basis }
}

/// Rank and integer-cleared nullspace basis of a rational matrix.
/// Each basis vector corresponds to one free column, set to +1 before
/// clearing, so the basis is in reduced echelon form and reproducible.
fn rational_nullspace(mut rows: Vec<Vec<Rational>>, width: usize) -> (usize, Vec<Vec<Rational>>) {
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row_i = 0usize;
    for col in 0..width {
        let pivot_row = (row_i..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pr) = pivot_row else { continue };
        rows.swap(row_i, pr);
        let inv = rows[row_i][col].recip();
        for entry in rows[row_i][col..].iter_mut() {
            let scaled = &*entry * &inv;
            *entry = scaled;
        }
        let pivot_row = rows[row_i][col..].to_vec();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != row_i && !row[col].is_zero() {
                let factor = row[col].clone();
                for (entry, p) in row[col..].iter_mut().zip(&pivot_row) {
                    *entry -= &factor * p;
                }
            }
        }
        pivot_cols.push(col);
        row_i += 1;
        if row_i == rows.len() {
            break;
        }
    }
    let rank = pivot_cols.len();
    let mut basis = Vec::new();
    for free_col in (0..width).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rational::zero(); width];
        v[free_col] = Rational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -rows[r][free_col].clone();
        }
        basis.push(integer_clear(&v, Some(free_col)));
    }
    (rank, basis)
}

/// True iff every cutoff condition holds exactly for the given spec.
pub fn check_cutoff(spec: &HamiltonianSpec, sector: &SectorBasis) -> Result<bool> {
    Ok(first_cutoff_violation(spec, sector)?.is_none())
}

/// First violated cutoff condition, if any: `(k, index, alpha value)`.
pub fn first_cutoff_violation(
    spec: &HamiltonianSpec,
    sector: &SectorBasis,
) -> Result<Option<(u32, u32, Rational)>> {
    for k in 1..=spec.k0() {
        let lowest = (sector.top() + 1).saturating_sub(k);
        for n in lowest..=sector.top() {
            let alpha = spec.alpha_exact(sector, n, k)?;
            if !alpha.is_zero() {
                return Ok(Some((k, n, alpha)));
            }
        }
    }
    Ok(None)
}

/// Condition-vs-unknown counting for a shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    /// Number of cutoff conditions, `k0(k0+1)/2`.
    pub n1: usize,
    /// Number of coupling unknowns, `(s0+1)·k0`.
    pub n2: usize,
    /// Whether a nonzero solution is generically guaranteed (`n2 > n1`,
    /// equivalently `2·s0 ≥ k0`).
    pub feasible: bool,
}

pub fn feasibility(shape: Shape) -> FeasibilityReport {
    let k0 = shape.k0 as usize;
    let n1 = k0 * (k0 + 1) / 2;
    let n2 = shape.unknowns();
    FeasibilityReport {
        n1,
        n2,
        feasible: n2 > n1,
    }
}

/// Coefficient ratios `(A0, A1, A2) = (2L(2L-3), 3-4L, 1)·A2` for the
/// stride-2 quadratic family. The returned ray satisfies, exactly and for
/// every `L ≥ 1`: `α_L = 0`, `α_{L-1} = -2·A2`, `β_L = -4L(2L-1)·A2`.
///
/// Note that the coupling polynomial of this ray has roots `2L` and
/// `2L-3`, i.e. it combines the even cutoff at `L` with the odd cutoff at
/// `M = L-2`; only for `L = 1` does it also isolate a two-level block
/// (`β_{L-1}` vanishes identically there). For the ray that isolates
/// `{Φ_{L-1}, Φ_L}` at every `L` see [`two_level_factorization`].
pub fn two_level_relations(l: u32) -> Result<[Rational; 3]> {
    if l == 0 {
        return Err(QesError::TwoLevelIndexZero);
    }
    let l = i64::from(l);
    Ok([rat_int(2 * l * (2 * l - 3)), rat_int(3 - 4 * l), rat_int(1)])
}

/// Coefficient ratios `(A0, A1, A2) = (4L(L-2), 4-4L, 1)·A2` solving both
/// `α_L = 0` and `β_{L-1} = 0` for the stride-2 quadratic family: the
/// coupling polynomial has roots `2L` and `2L-4`, the top pair
/// `{Φ_{L-1}, Φ_L}` decouples exactly, and the isolated block carries
/// `α_{L-1} = -4·A2`, `β_L = -8L(2L-1)·A2`, so its two levels are
/// `(γ_L+γ_{L-1})/2 ± √((γ_L-γ_{L-1})²/4 + 32L(2L-1)A2²)`.
pub fn two_level_factorization(l: u32) -> Result<[Rational; 3]> {
    if l == 0 {
        return Err(QesError::TwoLevelIndexZero);
    }
    let l = i64::from(l);
    Ok([rat_int(4 * l * (l - 2)), rat_int(4 - 4 * l), rat_int(1)])
}

/// Simultaneous even/odd invariance at stride 2 (tops `L` and `M`). Both
/// holding at once is exactly the condition for the Hamiltonian to act
/// inside the full polynomial space of degree `max(2L, 2M+1)`, i.e. for it
/// to be expressible in the usual lowering/raising algebra of that space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SimultaneousReport {
    pub even_ok: bool,
    pub odd_ok: bool,
    pub sl2_expressible: bool,
}

pub fn simultaneous_sector_check(
    spec: &HamiltonianSpec,
    l: u32,
    m: u32,
) -> Result<SimultaneousReport> {
    if spec.q() != 2 {
        return Err(QesError::SpecInvalid(format!(
            "even/odd sector pair needs stride q=2, got q={}",
            spec.q()
        )));
    }
    let even_ok = check_cutoff(spec, &SectorBasis::even(l))?;
    let odd_ok = check_cutoff(spec, &SectorBasis::odd(m))?;
    Ok(SimultaneousReport {
        even_ok,
        odd_ok,
        sl2_expressible: even_ok && odd_ok,
    })
}

//! Anharmonic Bose Hamiltonians with a single hop stride.
//!
//! The family handled by this crate is
//!
//! ```text
//! H = Σ_{p=1..p0} ε_p (a⁺a)^p
//!   + Σ_{s=0..s0} Σ_{k=1..k0} A_{s,k} [ (a⁺a)^s a^{kq} + (a⁺)^{kq} (a⁺a)^s ]
//! ```
//!
//! with real coefficients and integer stride `q ≥ 1`. Because every
//! off-diagonal term moves the particle number by a multiple of `q`, the
//! residue classes `{qn + r}` are preserved and each class carries its own
//! tridiagonal-by-blocks action. On the unnormalized monomial basis
//! `Φ_n = x^{qn+r}` (the image of `(a⁺)^{qn+r}|0⟩` under `a → d/dx`,
//! `a⁺ → x`) this action is
//!
//! ```text
//! H Φ_n = γ_n Φ_n + Σ_k α_{n,k} Φ_{n+k} + Σ_k β_{n,k} Φ_{n-k}
//! γ_n     = Σ_p ε_p (qn+r)^p
//! α_{n,k} = Σ_s A_{s,k} (qn+r)^s
//! β_{n,k} = (qn+r)(qn+r-1)···(qn+r-kq+1) · Σ_s A_{s,k} (qn+r-kq)^s ,  n ≥ k
//! β_{n,k} = 0 ,                                                        n < k
//! ```
//!
//! All three coefficient functions are evaluated exactly in rational
//! arithmetic; `f64` views are provided for spectrum work. The orthonormal
//! number-basis matrix elements (`fock_matrix_element`) are an independent
//! route to the same operator and are what the brute-force oracle is built
//! from.

use num::bigint::BigInt;
use num::{Signed, Zero};

use crate::error::{QesError, Result};
use crate::rational::{format_rational, rat_int, to_f64, Rational};

// ─────────────────────────────────────────────────────────────────────
//  Sector basis
// ─────────────────────────────────────────────────────────────────────

/// A residue-class basis `Φ_n = x^{qn+r}`, `n = 0..=top`.
///
/// For the stride-2 family, `(q=2, r=0)` is the even sector and
/// `(q=2, r=1)` the odd sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectorBasis {
    q: u32,
    r: u32,
    top: u32,
}

impl SectorBasis {
    pub fn new(q: u32, r: u32, top: u32) -> Result<Self> {
        if q == 0 {
            return Err(QesError::SectorInvalid("stride q must be >= 1".into()));
        }
        if r >= q {
            return Err(QesError::SectorInvalid(format!(
                "offset r={r} must satisfy 0 <= r < q={q}"
            )));
        }
        Ok(SectorBasis { q, r, top })
    }

    /// Even stride-2 sector `{0, 2, …, 2·top}`.
    pub fn even(top: u32) -> Self {
        SectorBasis { q: 2, r: 0, top }
    }

    /// Odd stride-2 sector `{1, 3, …, 2·top+1}`.
    pub fn odd(top: u32) -> Self {
        SectorBasis { q: 2, r: 1, top }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Top basis index `N`.
    pub fn top(&self) -> u32 {
        self.top
    }

    /// Basis dimension `N + 1`.
    pub fn dim(&self) -> usize {
        self.top as usize + 1
    }

    /// Particle number `qn + r` of basis element `n`.
    pub fn particle_number(&self, n: u32) -> u64 {
        u64::from(self.q) * u64::from(n) + u64::from(self.r)
    }

    /// Same sector with a different top index.
    pub fn with_top(&self, top: u32) -> Self {
        SectorBasis { top, ..*self }
    }
}

// ─────────────────────────────────────────────────────────────────────
//  Hamiltonian coefficients
// ─────────────────────────────────────────────────────────────────────

/// Exact-coefficient model of the Hamiltonian family.
///
/// `eps[p-1]` holds the diagonal coefficient ε_p (`p = 1..=p0`);
/// `a[k-1][s]` holds the off-diagonal coupling A_{s,k} (`s = 0..=s0`,
/// `k = 1..=k0`, dense, absent entries zero).
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    eps: Vec<Rational>,
    a: Vec<Vec<Rational>>,
    q: u32,
}

impl HamiltonianSpec {
    /// Build from sparse coupling entries `(s, k, value)`. The shape
    /// `(s0, k0)` is the smallest one covering every listed entry
    /// (zero-valued entries count, so an explicit `(2, 1, 0)` declares
    /// `s0 = 2`). An empty list means a free diagonal Hamiltonian with
    /// shape `(0, 1)` and zero coupling.
    pub fn new(q: u32, eps: Vec<Rational>, couplings: &[(u32, u32, Rational)]) -> Result<Self> {
        if q == 0 {
            return Err(QesError::SpecInvalid("stride q must be >= 1".into()));
        }
        if eps.is_empty() {
            return Err(QesError::SpecInvalid(
                "at least one diagonal coefficient eps_1 is required".into(),
            ));
        }
        let s0 = couplings.iter().map(|&(s, _, _)| s).max().unwrap_or(0);
        let k0 = couplings.iter().map(|&(_, k, _)| k).max().unwrap_or(1);
        if couplings.iter().any(|&(_, k, _)| k == 0) {
            return Err(QesError::SpecInvalid("hop index k must be >= 1".into()));
        }
        let mut a = vec![vec![Rational::zero(); s0 as usize + 1]; k0 as usize];
        let mut seen = vec![false; (s0 as usize + 1) * k0 as usize];
        for (s, k, value) in couplings {
            let slot = (*k as usize - 1) * (s0 as usize + 1) + *s as usize;
            if seen[slot] {
                return Err(QesError::SpecInvalid(format!(
                    "duplicate coupling entry (s={s}, k={k})"
                )));
            }
            seen[slot] = true;
            a[*k as usize - 1][*s as usize] = value.clone();
        }
        Ok(HamiltonianSpec { eps, a, q })
    }

    /// The stride-2, single-hop, quadratic-coupling family
    /// `V = A0 (a² + a⁺²) + A1 [(a⁺a) a² + a⁺² (a⁺a)] + A2 [(a⁺a)² a² + a⁺² (a⁺a)²]`.
    pub fn h1(eps: Vec<Rational>, a: [Rational; 3]) -> Self {
        let [a0, a1, a2] = a;
        Self::new(2, eps, &[(0, 1, a0), (1, 1, a1), (2, 1, a2)])
            .expect("h1 family shape is always valid")
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Diagonal polynomial degree p0 (as declared, trailing zeros included).
    pub fn p0(&self) -> u32 {
        self.eps.len() as u32
    }

    /// Coupling polynomial degree s0 (as declared).
    pub fn s0(&self) -> u32 {
        self.a[0].len() as u32 - 1
    }

    /// Largest hop k0 (as declared).
    pub fn k0(&self) -> u32 {
        self.a.len() as u32
    }

    /// ε_p, 1-based; zero outside the declared range.
    pub fn eps(&self, p: u32) -> Rational {
        if p == 0 {
            return Rational::zero();
        }
        self.eps.get(p as usize - 1).cloned().unwrap_or_default()
    }

    /// A_{s,k}; zero outside the declared shape.
    pub fn coupling(&self, s: u32, k: u32) -> Rational {
        if k == 0 {
            return Rational::zero();
        }
        self.a
            .get(k as usize - 1)
            .and_then(|row| row.get(s as usize))
            .cloned()
            .unwrap_or_default()
    }

    /// Sparse view of the couplings, `(s, k, value)` in (k, s) order.
    pub fn couplings(&self) -> Vec<(u32, u32, Rational)> {
        let mut out = Vec::new();
        for (ki, row) in self.a.iter().enumerate() {
            for (s, v) in row.iter().enumerate() {
                out.push((s as u32, ki as u32 + 1, v.clone()));
            }
        }
        out
    }

    pub fn eps_all(&self) -> &[Rational] {
        &self.eps
    }

    /// Uniformly rescale every coupling (diagonal part untouched). The
    /// cutoff conditions are homogeneous in the couplings, so scaling
    /// preserves every invariant sector.
    pub fn scale_couplings(&self, factor: &Rational) -> Self {
        let mut out = self.clone();
        for row in &mut out.a {
            for v in row.iter_mut() {
                *v *= factor;
            }
        }
        out
    }

    /// Replace one coupling entry (extending the shape if needed).
    pub fn with_coupling(&self, s: u32, k: u32, value: Rational) -> Result<Self> {
        let mut entries = self.couplings();
        if let Some(e) = entries.iter_mut().find(|e| e.0 == s && e.1 == k) {
            e.2 = value;
        } else {
            entries.push((s, k, value));
        }
        Self::new(self.q, self.eps.clone(), &entries)
    }

    /// Replace one diagonal entry (extending p0 if needed).
    pub fn with_eps(&self, p: u32, value: Rational) -> Result<Self> {
        if p == 0 {
            return Err(QesError::SpecInvalid(
                "diagonal index p must be >= 1".into(),
            ));
        }
        let mut eps = self.eps.clone();
        if (p as usize) > eps.len() {
            eps.resize(p as usize, Rational::zero());
        }
        eps[p as usize - 1] = value;
        Self::new(self.q, eps, &self.couplings())
    }

    fn check_pair(&self, sector: &SectorBasis) -> Result<()> {
        if self.q != sector.q() {
            return Err(QesError::StrideMismatch {
                spec_q: self.q,
                sector_q: sector.q(),
            });
        }
        Ok(())
    }

    fn check_index(&self, sector: &SectorBasis, n: u32) -> Result<()> {
        self.check_pair(sector)?;
        if n > sector.top() {
            return Err(QesError::IndexOutOfRange {
                index: n,
                top: sector.top(),
            });
        }
        Ok(())
    }

    fn check_hop(&self, k: u32) -> Result<()> {
        if k == 0 || k > self.k0() {
            return Err(QesError::HopOutOfRange { k, k0: self.k0() });
        }
        Ok(())
    }

    /// Coupling polynomial `P_k(y) = Σ_s A_{s,k} y^s` at an integer point.
    /// `y^0 = 1` for every y, including 0.
    pub(crate) fn coupling_poly(&self, k: u32, point: &BigInt) -> Rational {
        let row = &self.a[k as usize - 1];
        let mut acc = Rational::zero();
        let mut power = BigInt::from(1u32);
        for coeff in row {
            if !coeff.is_zero() {
                acc += coeff * Rational::from_integer(power.clone());
            }
            power *= point;
        }
        acc
    }

    fn diagonal_poly(&self, point: &BigInt) -> Rational {
        let mut acc = Rational::zero();
        let mut power = point.clone();
        for coeff in &self.eps {
            if !coeff.is_zero() {
                acc += coeff * Rational::from_integer(power.clone());
            }
            power *= point;
        }
        acc
    }

    // ── exact coefficient functions ─────────────────────────────────

    /// γ_n = Σ_p ε_p (qn+r)^p, exact.
    pub fn gamma_exact(&self, sector: &SectorBasis, n: u32) -> Result<Rational> {
        self.check_index(sector, n)?;
        Ok(self.diagonal_poly(&BigInt::from(sector.particle_number(n))))
    }

    /// α_{n,k} = Σ_s A_{s,k} (qn+r)^s, exact: the coupling from `Φ_n`
    /// up to `Φ_{n+k}`.
    pub fn alpha_exact(&self, sector: &SectorBasis, n: u32, k: u32) -> Result<Rational> {
        self.check_index(sector, n)?;
        self.check_hop(k)?;
        Ok(self.coupling_poly(k, &BigInt::from(sector.particle_number(n))))
    }

    /// β_{n,k}, exact: the coupling from `Φ_n` down to `Φ_{n-k}`.
    /// Identically zero for `n < k`.
    pub fn beta_exact(&self, sector: &SectorBasis, n: u32, k: u32) -> Result<Rational> {
        self.check_index(sector, n)?;
        self.check_hop(k)?;
        if n < k {
            return Ok(Rational::zero());
        }
        let m = sector.particle_number(n);
        let len = u64::from(k) * u64::from(sector.q());
        let mut falling = BigInt::from(1u32);
        for j in 0..len {
            falling *= BigInt::from(m - j);
        }
        let landing = BigInt::from(m - len);
        Ok(Rational::from_integer(falling) * self.coupling_poly(k, &landing))
    }

    // ── f64 views (lowered from the exact values) ───────────────────

    pub fn gamma(&self, sector: &SectorBasis, n: u32) -> Result<f64> {
        Ok(to_f64(&self.gamma_exact(sector, n)?))
    }

    pub fn alpha(&self, sector: &SectorBasis, n: u32, k: u32) -> Result<f64> {
        Ok(to_f64(&self.alpha_exact(sector, n, k)?))
    }

    pub fn beta(&self, sector: &SectorBasis, n: u32, k: u32) -> Result<f64> {
        Ok(to_f64(&self.beta_exact(sector, n, k)?))
    }

    // ── orthonormal number-basis route ──────────────────────────────

    /// Exact polynomial part `Σ_s A_{s,k} n^s` of the normalized matrix
    /// element `⟨n+kq|H|n⟩`. The accompanying square-root factor
    /// `√((n+kq)!/n!)` is strictly positive, so this polynomial vanishing
    /// is exactly equivalent to the matrix element vanishing.
    pub fn fock_coupling_exact(&self, n: u64, k: u32) -> Rational {
        if k == 0 || k > self.k0() {
            return Rational::zero();
        }
        self.coupling_poly(k, &BigInt::from(n))
    }

    /// `⟨m|H|n⟩` in the orthonormal number basis. Symmetric in `(m, n)` by
    /// construction. Factorial ratios are accumulated as products of at
    /// most `k0·q` consecutive integers, so there is no raw factorial
    /// overflow.
    pub fn fock_matrix_element(&self, m: u64, n: u64) -> f64 {
        if m == n {
            return to_f64(&self.diagonal_poly(&BigInt::from(n)));
        }
        let (lo, hi) = if m < n { (m, n) } else { (n, m) };
        let step = hi - lo;
        let q = u64::from(self.q);
        if step % q != 0 {
            return 0.0;
        }
        let k = step / q;
        if k == 0 || k > u64::from(self.k0()) {
            return 0.0;
        }
        let poly = to_f64(&self.fock_coupling_exact(lo, k as u32));
        if poly == 0.0 {
            return 0.0;
        }
        let mut ratio = 1.0f64;
        for t in (lo + 1)..=hi {
            ratio *= t as f64;
        }
        poly * ratio.sqrt()
    }

    /// Ground-state well-definedness of the diagonal-vs-coupling growth.
    ///
    /// Stated for the stride-2 single-hop family only: the diagonal grows
    /// like n^p0 while the normalized coupling grows like n^(s0+1), so the
    /// spectrum is bounded below when `p0 > s0+2` outright, and when
    /// `p0 = s0+2` provided `ε_{p0} ≥ 2|A_{s0,1}|` (the absolute value is
    /// ours: the sign of A flips under a trivial phase rotation, see the
    /// report message). Anything with `k0 > 1` or `q ≠ 2` is reported as
    /// `Unknown` rather than guessed.
    pub fn validate_ground_state(&self) -> Validity {
        if self.k0() > 1 || self.q != 2 {
            return Validity {
                status: ValidityStatus::Unknown,
                message: format!(
                    "criterion is only established for the stride-2 single-hop family \
                     (here q={}, k0={})",
                    self.q,
                    self.k0()
                ),
            };
        }
        let p0 = self.p0();
        let s0 = self.s0();
        if p0 > s0 + 2 {
            return Validity {
                status: ValidityStatus::WellDefined,
                message: format!("p0={p0} > s0+2={}", s0 + 2),
            };
        }
        if p0 == s0 + 2 {
            let lead_eps = self.eps(p0);
            let lead_a = self.coupling(s0, 1).abs();
            let bound = rat_int(2) * &lead_a;
            if lead_eps >= bound {
                return Validity {
                    status: ValidityStatus::Conditional,
                    message: format!(
                        "p0 = s0+2 and eps_{p0} = {} >= 2|A_{s0},1| = {} \
                         (inequality taken with |A|; sign of A is a phase convention)",
                        format_rational(&lead_eps),
                        format_rational(&bound)
                    ),
                };
            }
            return Validity {
                status: ValidityStatus::IllDefined,
                message: format!(
                    "ill-defined ground state: p0 = s0+2 but eps_{p0} = {} < 2|A_{s0},1| = {}",
                    format_rational(&lead_eps),
                    format_rational(&bound)
                ),
            };
        }
        Validity {
            status: ValidityStatus::IllDefined,
            message: format!(
                "ill-defined ground state: p0={p0} < s0+2={}; coupling growth dominates",
                s0 + 2
            ),
        }
    }
}

/// Outcome of [`HamiltonianSpec::validate_ground_state`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ValidityStatus {
    WellDefined,
    Conditional,
    IllDefined,
    Unknown,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Validity {
    pub status: ValidityStatus,
    pub message: String,
}

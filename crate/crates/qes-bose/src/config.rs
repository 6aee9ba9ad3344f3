//! Config-file ingestion.
//!
//! One JSON document drives every command. Coefficients are accepted as
//! strings (`"3/4"`, `"0.125"`) or plain JSON numbers; either way the
//! literal text is converted to an exact rational (`serde_json`'s
//! arbitrary-precision mode hands the number through untouched), so
//! rational inputs survive a config → output → config round trip
//! bit-for-bit.
//!
//! ```json
//! {
//!   "spec": {
//!     "eps": ["1"],
//!     "A": [ {"s": 0, "k": 1, "value": "6"},
//!            {"s": 1, "value": "-5"},
//!            {"s": 2, "value": "1"} ],
//!     "q": 2
//!   },
//!   "even_top": 1,
//!   "odd_top": 1,
//!   "n_max": 14,
//!   "tol": 1e-10,
//!   "scan": { "coefficient": "A[2,1]", "from": "0", "to": "1", "steps": 11 }
//! }
//! ```
//!
//! `even_top` / `odd_top` name the stride-2 sectors; a general sector is
//! `"sector": {"r": 0, "top": 1}`. Two-mode runs replace `spec` with
//! `modes` (two entries, each `{"specs": [spec-or-"identity", …],
//! "sector": …}`) plus `terms`: triples `[i_a, i_b, weight]` indexing the
//! per-mode spec lists.

use std::path::Path;

use serde::Deserialize;

use crate::error::{QesError, Result};
use crate::model::{HamiltonianSpec, SectorBasis};
use crate::multimode::{ProductFactor, ProductHamiltonian, ProductTerm};
use crate::rational::{parse_rational, Rational};

// ── raw document shapes ─────────────────────────────────────────────

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CoeffValue {
    Text(String),
    Number(serde_json::Number),
}

impl CoeffValue {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            CoeffValue::Text(s) => parse_rational(s),
            CoeffValue::Number(n) => parse_rational(&n.to_string()),
        }
    }
}

fn default_hop() -> u32 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CouplingDoc {
    s: u32,
    #[serde(default = "default_hop")]
    k: u32,
    value: CoeffValue,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    eps: Vec<CoeffValue>,
    #[serde(rename = "A", default)]
    a: Vec<CouplingDoc>,
    q: u32,
}

impl SpecDoc {
    fn build(&self) -> Result<HamiltonianSpec> {
        let eps = self
            .eps
            .iter()
            .map(|v| v.to_rational())
            .collect::<Result<Vec<_>>>()?;
        let couplings = self
            .a
            .iter()
            .map(|c| Ok((c.s, c.k, c.value.to_rational()?)))
            .collect::<Result<Vec<_>>>()?;
        HamiltonianSpec::new(self.q, eps, &couplings)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SectorDoc {
    r: u32,
    top: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanDoc {
    coefficient: String,
    from: CoeffValue,
    to: CoeffValue,
    steps: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FactorDoc {
    Tag(String),
    Spec(SpecDoc),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeDoc {
    specs: Vec<FactorDoc>,
    sector: SectorDoc,
    q: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    spec: Option<SpecDoc>,
    even_top: Option<u32>,
    odd_top: Option<u32>,
    sector: Option<SectorDoc>,
    n_max: Option<usize>,
    tol: Option<f64>,
    scan: Option<ScanDoc>,
    modes: Option<Vec<ModeDoc>>,
    terms: Option<Vec<(usize, usize, CoeffValue)>>,
}

// ── resolved config ─────────────────────────────────────────────────

/// What a coefficient sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanTarget {
    /// `A[s,k]` (`A[s]` means hop 1).
    Coupling { s: u32, k: u32 },
    /// `eps[p]`.
    Diagonal { p: u32 },
}

impl ScanTarget {
    pub fn parse(text: &str) -> Result<Self> {
        let err = || {
            QesError::Config(format!(
                "bad scan coefficient {text:?} (want A[s,k], A[s] or eps[p])"
            ))
        };
        let inner = |prefix: &str| -> Option<&str> {
            text.strip_prefix(prefix)?
                .strip_prefix('[')?
                .strip_suffix(']')
        };
        if let Some(body) = inner("A") {
            let mut parts = body.split(',').map(str::trim);
            let s: u32 = parts.next().ok_or_else(err)?.parse().map_err(|_| err())?;
            let k: u32 = match parts.next() {
                Some(k) => k.parse().map_err(|_| err())?,
                None => 1,
            };
            if parts.next().is_some() || k == 0 {
                return Err(err());
            }
            return Ok(ScanTarget::Coupling { s, k });
        }
        if let Some(body) = inner("eps") {
            let p: u32 = body.trim().parse().map_err(|_| err())?;
            if p == 0 {
                return Err(err());
            }
            return Ok(ScanTarget::Diagonal { p });
        }
        Err(err())
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub target: ScanTarget,
    pub from: Rational,
    pub to: Rational,
    pub steps: usize,
}

/// A fully parsed run configuration with exact coefficients.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub spec: Option<HamiltonianSpec>,
    pub even_top: Option<u32>,
    pub odd_top: Option<u32>,
    pub sector: Option<(u32, u32)>,
    pub n_max: Option<usize>,
    pub tol: Option<f64>,
    pub scan: Option<ScanConfig>,
    pub product: Option<ProductHamiltonian>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self> {
        let doc: ConfigDoc =
            serde_json::from_str(text).map_err(|e| QesError::Config(e.to_string()))?;
        let spec = doc.spec.as_ref().map(SpecDoc::build).transpose()?;
        let scan = doc
            .scan
            .map(|s| -> Result<ScanConfig> {
                if s.steps < 2 {
                    return Err(QesError::Config("scan needs steps >= 2".into()));
                }
                Ok(ScanConfig {
                    target: ScanTarget::parse(&s.coefficient)?,
                    from: s.from.to_rational()?,
                    to: s.to.to_rational()?,
                    steps: s.steps,
                })
            })
            .transpose()?;
        if let Some(tol) = doc.tol {
            if !tol.is_finite() || tol <= 0.0 {
                return Err(QesError::Config("tol must be > 0".into()));
            }
        }
        let product = match (doc.modes, doc.terms) {
            (None, None) => None,
            (Some(modes), Some(terms)) => Some(build_product(modes, terms)?),
            _ => {
                return Err(QesError::Config(
                    "two-mode runs need both `modes` and `terms`".into(),
                ))
            }
        };
        Ok(RunConfig {
            spec,
            even_top: doc.even_top,
            odd_top: doc.odd_top,
            sector: doc.sector.map(|s| (s.r, s.top)),
            n_max: doc.n_max,
            tol: doc.tol,
            scan,
            product,
        })
    }

    pub fn require_spec(&self) -> Result<&HamiltonianSpec> {
        self.spec
            .as_ref()
            .ok_or_else(|| QesError::Config("config has no `spec`".into()))
    }

    pub fn require_product(&self) -> Result<&ProductHamiltonian> {
        self.product
            .as_ref()
            .ok_or_else(|| QesError::Config("config has no `modes`/`terms`".into()))
    }
}

fn build_product(
    modes: Vec<ModeDoc>,
    terms: Vec<(usize, usize, CoeffValue)>,
) -> Result<ProductHamiltonian> {
    if modes.len() != 2 {
        return Err(QesError::Config(format!(
            "exactly two modes are supported, got {}",
            modes.len()
        )));
    }
    let mut factor_lists = Vec::new();
    let mut sectors = Vec::new();
    for (i, mode) in modes.iter().enumerate() {
        let mut factors = Vec::new();
        let mut q_seen: Option<u32> = mode.q;
        for f in &mode.specs {
            factors.push(match f {
                FactorDoc::Tag(tag) if tag == "identity" => ProductFactor::Identity,
                FactorDoc::Tag(tag) => {
                    return Err(QesError::Config(format!(
                        "unknown factor tag {tag:?} in mode {i} (only \"identity\")"
                    )))
                }
                FactorDoc::Spec(s) => {
                    let spec = s.build()?;
                    match q_seen {
                        Some(q) if q != spec.q() => {
                            return Err(QesError::Config(format!(
                                "mode {i} mixes strides q={q} and q={}",
                                spec.q()
                            )))
                        }
                        _ => q_seen = Some(spec.q()),
                    }
                    ProductFactor::Spec(spec)
                }
            });
        }
        let q = q_seen.ok_or_else(|| {
            QesError::Config(format!(
                "mode {i} has no spec factor; give its stride as \"q\""
            ))
        })?;
        sectors.push(SectorBasis::new(q, mode.sector.r, mode.sector.top)?);
        factor_lists.push(factors);
    }
    let mut product_terms = Vec::new();
    for (ia, ib, weight) in terms {
        let factor_a = factor_lists[0]
            .get(ia)
            .ok_or_else(|| QesError::Config(format!("term references mode-a spec {ia}")))?;
        let factor_b = factor_lists[1]
            .get(ib)
            .ok_or_else(|| QesError::Config(format!("term references mode-b spec {ib}")))?;
        product_terms.push(ProductTerm {
            weight: weight.to_rational()?,
            factor_a: factor_a.clone(),
            factor_b: factor_b.clone(),
        });
    }
    if product_terms.is_empty() {
        return Err(QesError::Config("`terms` is empty".into()));
    }
    Ok(ProductHamiltonian {
        terms: product_terms,
        sector_a: sectors[0],
        sector_b: sectors[1],
    })
}

/// Emit a Hamiltonian back out in the config document form (exact
/// rational strings; parsing this text reproduces the Hamiltonian
/// identically).
pub fn spec_to_json(spec: &HamiltonianSpec) -> String {
    use serde::Serialize;
    #[derive(Serialize)]
    struct CouplingOut {
        s: u32,
        k: u32,
        value: String,
    }
    #[derive(Serialize)]
    struct SpecOut {
        eps: Vec<String>,
        #[serde(rename = "A")]
        a: Vec<CouplingOut>,
        q: u32,
    }
    let doc = SpecOut {
        eps: spec
            .eps_all()
            .iter()
            .map(crate::rational::format_rational)
            .collect(),
        a: spec
            .couplings()
            .into_iter()
            .map(|(s, k, value)| CouplingOut {
                s,
                k,
                value: crate::rational::format_rational(&value),
            })
            .collect(),
        q: spec.q(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("spec document serializes");
    text.push('\n');
    text
}

/// Parse a bare Hamiltonian document (the `spec` object on its own).
pub fn spec_from_json(text: &str) -> Result<HamiltonianSpec> {
    let doc: SpecDoc = serde_json::from_str(text).map_err(|e| QesError::Config(e.to_string()))?;
    doc.build()
}

// ── sector selection ────────────────────────────────────────────────

/// The `--sector` flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectorChoice {
    Even,
    Odd,
    Both,
}

/// Resolve which sectors a command runs over. The flag picks among the
/// stride-2 `even_top`/`odd_top` entries; without a flag the config's
/// explicit `sector` wins, then whichever parity tops are present.
pub fn resolve_sectors(
    config: &RunConfig,
    spec_q: u32,
    choice: Option<SectorChoice>,
) -> Result<Vec<(String, SectorBasis)>> {
    let even = |cfg: &RunConfig| -> Result<(String, SectorBasis)> {
        let top = cfg
            .even_top
            .ok_or_else(|| QesError::Config("config has no `even_top`".into()))?;
        Ok(("even".into(), SectorBasis::even(top)))
    };
    let odd = |cfg: &RunConfig| -> Result<(String, SectorBasis)> {
        let top = cfg
            .odd_top
            .ok_or_else(|| QesError::Config("config has no `odd_top`".into()))?;
        Ok(("odd".into(), SectorBasis::odd(top)))
    };
    if let Some(choice) = choice {
        if spec_q != 2 {
            return Err(QesError::Config(format!(
                "--sector even/odd/both applies to stride q=2 only (spec has q={spec_q})"
            )));
        }
        return match choice {
            SectorChoice::Even => Ok(vec![even(config)?]),
            SectorChoice::Odd => Ok(vec![odd(config)?]),
            SectorChoice::Both => Ok(vec![even(config)?, odd(config)?]),
        };
    }
    if let Some((r, top)) = config.sector {
        let sector = SectorBasis::new(spec_q, r, top)?;
        return Ok(vec![(format!("r{r}"), sector)]);
    }
    let mut out = Vec::new();
    if config.even_top.is_some() {
        out.push(even(config)?);
    }
    if config.odd_top.is_some() {
        out.push(odd(config)?);
    }
    if out.is_empty() {
        return Err(QesError::Config(
            "config names no sector (`sector`, `even_top` or `odd_top`)".into(),
        ));
    }
    if !out.is_empty() && spec_q != 2 && config.sector.is_none() {
        return Err(QesError::Config(format!(
            "`even_top`/`odd_top` apply to stride q=2 only (spec has q={spec_q})"
        )));
    }
    Ok(out)
}

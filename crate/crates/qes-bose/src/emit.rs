//! Artifact emission: CSV, JSON reports, and SVG level plots.
//!
//! CSV floats use fixed 17-significant-digit scientific notation — enough
//! for exact f64 round-trips and stable golden-file comparisons. Nullspace
//! vectors are emitted as exact rational strings.

use serde::Serialize;

use crate::conditions::{CutoffSolution, FeasibilityReport};
use crate::model::SectorBasis;
use crate::oracle::MatchReport;
use crate::rational::{format_rational, Rational};
use crate::spectra::SpectrumResult;

/// Round-trip decimal form: 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

// ── spectrum artifacts ──────────────────────────────────────────────

#[derive(Serialize)]
pub struct SectorDoc {
    pub q: u32,
    pub r: u32,
    pub top: u32,
}

impl From<&SectorBasis> for SectorDoc {
    fn from(s: &SectorBasis) -> Self {
        SectorDoc {
            q: s.q(),
            r: s.r(),
            top: s.top(),
        }
    }
}

#[derive(Serialize)]
pub struct SectorSpectrum<'a> {
    pub label: &'a str,
    pub sector: SectorDoc,
    pub result: &'a SpectrumResult,
}

#[derive(Serialize)]
pub struct SpectrumReport<'a> {
    pub sectors: Vec<SectorSpectrum<'a>>,
}

/// Merged CSV over all sectors: `index,eigenvalue,residual`, rows sorted
/// by eigenvalue, index re-assigned after the merge.
pub fn spectrum_csv(results: &[(String, SectorBasis, SpectrumResult)]) -> String {
    let mut rows: Vec<(f64, f64)> = results
        .iter()
        .flat_map(|(_, _, r)| {
            r.eigenvalues
                .iter()
                .copied()
                .zip(r.residuals.iter().copied())
        })
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = String::from("index,eigenvalue,residual\n");
    for (i, (e, res)) in rows.iter().enumerate() {
        out.push_str(&format!("{i},{},{}\n", format_f64(*e), format_f64(*res)));
    }
    out
}

pub fn spectrum_json(results: &[(String, SectorBasis, SpectrumResult)]) -> String {
    let report = SpectrumReport {
        sectors: results
            .iter()
            .map(|(label, sector, result)| SectorSpectrum {
                label,
                sector: sector.into(),
                result,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&report).expect("spectrum report serializes");
    text.push('\n');
    text
}

/// Two-mode product report: both sector descriptors plus the spectrum.
pub fn product_json(
    sector_a: &SectorBasis,
    sector_b: &SectorBasis,
    result: &SpectrumResult,
) -> String {
    #[derive(Serialize)]
    struct ProductReport<'a> {
        sector_a: SectorDoc,
        sector_b: SectorDoc,
        result: &'a SpectrumResult,
    }
    let mut text = serde_json::to_string_pretty(&ProductReport {
        sector_a: sector_a.into(),
        sector_b: sector_b.into(),
        result,
    })
    .expect("product report serializes");
    text.push('\n');
    text
}

// ── conditions report ───────────────────────────────────────────────

#[derive(Serialize)]
pub struct ConditionsReport {
    pub n1: usize,
    pub n2: usize,
    pub feasible: bool,
    pub rows: usize,
    pub rank: usize,
    pub nullspace: Vec<Vec<String>>,
}

impl ConditionsReport {
    pub fn new(feas: FeasibilityReport, rows: usize, solution: &CutoffSolution) -> Self {
        ConditionsReport {
            n1: feas.n1,
            n2: feas.n2,
            feasible: feas.feasible,
            rows,
            rank: solution.rank,
            nullspace: solution
                .basis
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("conditions report serializes");
        text.push('\n');
        text
    }
}

// ── oracle report ───────────────────────────────────────────────────

pub fn match_report_table(report: &MatchReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>22} {:>22} {:>12}\n",
        "algebraic", "truncated", "gap"
    ));
    for lvl in &report.matched {
        out.push_str(&format!(
            "{:>22.15e} {:>22.15e} {:>12.3e}\n",
            lvl.qes, lvl.oracle, lvl.abs_gap
        ));
    }
    for e in &report.unmatched {
        out.push_str(&format!("{:>22.15e} {:>22} {:>12}\n", e, "-", "UNMATCHED"));
    }
    out
}

pub fn match_report_json(reports: &[(String, MatchReport)]) -> String {
    #[derive(Serialize)]
    struct Entry<'a> {
        label: &'a str,
        report: &'a MatchReport,
    }
    let entries: Vec<Entry> = reports
        .iter()
        .map(|(label, report)| Entry { label, report })
        .collect();
    let mut text = serde_json::to_string_pretty(&entries).expect("match report serializes");
    text.push('\n');
    text
}

// ── scan artifacts ──────────────────────────────────────────────────

/// `value,E0,…,EN` — one row per sweep step.
pub fn scan_csv(values: &[Rational], levels: &[Vec<f64>]) -> String {
    let width = levels.first().map_or(0, Vec::len);
    let mut out = String::from("value");
    for i in 0..width {
        out.push_str(&format!(",E{i}"));
    }
    out.push('\n');
    for (v, row) in values.iter().zip(levels) {
        out.push_str(&format_rational(v));
        for e in row {
            out.push(',');
            out.push_str(&format_f64(*e));
        }
        out.push('\n');
    }
    out
}

/// Minimal line plot: fixed 800×600 viewport, linear axes, one polyline
/// per level index.
pub fn scan_svg(param_name: &str, values: &[f64], levels: &[Vec<f64>]) -> String {
    const W: f64 = 800.0;
    const H: f64 = 600.0;
    const MARGIN: f64 = 60.0;

    let width = levels.first().map_or(0, Vec::len);
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in values {
        x_lo = x_lo.min(v);
        x_hi = x_hi.max(v);
    }
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for row in levels {
        for &e in row {
            y_lo = y_lo.min(e);
            y_hi = y_hi.max(e);
        }
    }
    if !x_lo.is_finite() {
        x_lo = 0.0;
        x_hi = 1.0;
    }
    if !y_lo.is_finite() {
        y_lo = 0.0;
        y_hi = 1.0;
    }
    let x_span = if x_hi > x_lo { x_hi - x_lo } else { 1.0 };
    let y_span = if y_hi > y_lo { y_hi - y_lo } else { 1.0 };
    let x_of = |v: f64| MARGIN + (v - x_lo) / x_span * (W - 2.0 * MARGIN);
    let y_of = |e: f64| H - MARGIN - (e - y_lo) / y_span * (H - 2.0 * MARGIN);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    ));
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        t = MARGIN,
        b = H - MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-size=\"14\" text-anchor=\"middle\">{param_name}</text>\n",
        x = W / 2.0,
        y = H - MARGIN / 3.0
    ));
    for (txt, v, anchor) in [
        (format!("{x_lo:.4}"), x_lo, "start"),
        (format!("{x_hi:.4}"), x_hi, "end"),
    ] {
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"12\" text-anchor=\"{anchor}\">{txt}</text>\n",
            x = x_of(v),
            y = H - MARGIN + 18.0
        ));
    }
    for (txt, e) in [(format!("{y_lo:.4}"), y_lo), (format!("{y_hi:.4}"), y_hi)] {
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"12\" text-anchor=\"end\">{txt}</text>\n",
            x = MARGIN - 6.0,
            y = y_of(e) + 4.0
        ));
    }
    const PALETTE: [&str; 6] = [
        "#1b6ca8", "#c23b22", "#2e7d32", "#7b1fa2", "#e09f3e", "#455a64",
    ];
    for level in 0..width {
        let pts: Vec<String> = values
            .iter()
            .zip(levels)
            .map(|(&v, row)| format!("{:.3},{:.3}", x_of(v), y_of(row[level])))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            PALETTE[level % PALETTE.len()],
            pts.join(" ")
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

//! Deterministic report documents: the single JSON/text wire format for
//! every subcommand.
//!
//! All symbolic and exact-rational values are carried as strings in the
//! expression grammar, so reports are diffable and independent of internal
//! representations. Struct fields are declared in alphabetical order; with
//! ordered serialization this makes the JSON byte-stable and key-sorted.

use serde::{Deserialize, Serialize};

/// Top-level report. Every subcommand emits this document with the sections
/// it populated; the top-level keys are always present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub certificate: Option<CertificateDoc>,
    pub config: ConfigDoc,
    pub equations: Vec<EquationRow>,
    pub identities: Vec<IdentityRow>,
    pub lambda: Vec<LambdaRowDoc>,
    pub numeric: Option<NumericDoc>,
    pub verdict: String,
    pub version: String,
}

/// Echo of the effective run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub command: String,
    pub format: String,
    pub max_order: Option<u32>,
    pub order: Option<u32>,
    pub params: String,
    pub target: Option<String>,
    pub term_ceiling: usize,
}

/// One row of the iterate-comparison table: the published closed form, the
/// engine's exact form, and how a disagreement was adjudicated (if at all).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationRow {
    pub adjudication: Option<String>,
    pub engine: String,
    pub order: u32,
    pub published: Option<String>,
}

/// One structural identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub check: String,
    pub pass: bool,
}

/// One row of the leading-coefficient comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaRowDoc {
    pub engine: String,
    /// `"ok"` when the columns agree, `"MISMATCH"` otherwise.
    pub flag: String,
    pub order: u32,
    pub published: String,
}

/// Serialized certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub all_lambda_nonzero: bool,
    pub max_order: u32,
    pub orders: Vec<OrderDoc>,
    pub pole_pattern_ok: bool,
    pub verdict: String,
}

/// Per-order certificate line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderDoc {
    pub lambda: Option<String>,
    pub order: u32,
    pub pole: u32,
    pub shape_ok: bool,
}

/// Numeric section: convergence rows and/or an adjudication record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericDoc {
    pub adjudication: Option<FDReportDoc>,
    pub convergence: Vec<ConvergenceRow>,
}

/// One observed-convergence measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub coarse_step: f64,
    pub observed_order: f64,
    pub order: u32,
    pub t: f64,
    pub within_window: bool,
}

/// Serialized finite-difference adjudication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FDReportDoc {
    pub h: f64,
    pub points: Vec<PointDoc>,
    pub reference: Vec<f64>,
    pub rows: Vec<CandidateRowDoc>,
    pub tolerance: f64,
    pub winner: Option<String>,
}

/// One evaluation point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDoc {
    pub a: f64,
    pub phi: f64,
    pub r: f64,
    pub t: f64,
}

/// One adjudication candidate outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRowDoc {
    pub label: String,
    pub max_deviation: f64,
    pub values: Vec<f64>,
    pub within_tolerance: bool,
}

/// Output format of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    pub fn label(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
        }
    }
}

/// Renders the document deterministically in the requested format.
pub fn render(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Json => {
            let mut body =
                serde_json::to_string_pretty(doc).expect("report serialization is infallible");
            body.push('\n');
            body
        }
        Format::Text => render_text(doc),
    }
}

fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let mut line = |s: &str| {
        out.push_str(s);
        out.push('\n');
    };
    line(&format!("ringtype {} — {}", doc.version, doc.config.command));
    line("");
    line("config:");
    line(&format!("  params:       {}", doc.config.params));
    if let Some(t) = &doc.config.target {
        line(&format!("  target:       {t}"));
    }
    if let Some(m) = doc.config.max_order {
        line(&format!("  max order:    {m}"));
    }
    if let Some(k) = doc.config.order {
        line(&format!("  order:        {k}"));
    }
    line(&format!("  term ceiling: {}", doc.config.term_ceiling));
    if !doc.equations.is_empty() {
        line("");
        line("iterates:");
        for row in &doc.equations {
            line(&format!("  order {}:", row.order));
            if let Some(p) = &row.published {
                line(&format!("    published:    {p}"));
            }
            line(&format!("    engine:       {}", row.engine));
            if let Some(a) = &row.adjudication {
                line(&format!("    adjudication: {a}"));
            }
        }
    }
    if !doc.lambda.is_empty() {
        line("");
        line("leading coefficients:");
        line("  order | published  | engine      | flag");
        for row in &doc.lambda {
            line(&format!(
                "  {:>5} | {:>10} | {:>11} | {}",
                row.order, row.published, row.engine, row.flag
            ));
        }
    }
    if let Some(cert) = &doc.certificate {
        line("");
        line("certificate:");
        for o in &cert.orders {
            line(&format!(
                "  order {}: pole {}, lambda {}, shape {}",
                o.order,
                o.pole,
                o.lambda.as_deref().unwrap_or("—"),
                if o.shape_ok { "ok" } else { "BROKEN" }
            ));
        }
        line(&format!(
            "  pole pattern 1, 3, …, 2M−1: {}",
            if cert.pole_pattern_ok { "ok" } else { "BROKEN" }
        ));
        line(&format!(
            "  all leading coefficients nonzero: {}",
            if cert.all_lambda_nonzero { "ok" } else { "BROKEN" }
        ));
        line(&format!("  result: {}", cert.verdict));
    }
    if !doc.identities.is_empty() {
        line("");
        line("identities:");
        for row in &doc.identities {
            line(&format!(
                "  {} … {}",
                row.check,
                if row.pass { "pass" } else { "FAIL" }
            ));
        }
    }
    if let Some(num) = &doc.numeric {
        line("");
        line("numeric:");
        if let Some(adj) = &num.adjudication {
            line(&format!(
                "  finite-difference referee: h = {}, tolerance = {}",
                adj.h, adj.tolerance
            ));
            for (p, r) in adj.points.iter().zip(&adj.reference) {
                line(&format!(
                    "    t = {:.6}: reference {:.12}",
                    p.t, r
                ));
            }
            for row in &adj.rows {
                line(&format!(
                    "  candidate {}: max deviation {:.3e} — {}",
                    row.label,
                    row.max_deviation,
                    if row.within_tolerance {
                        "within tolerance"
                    } else {
                        "rejected"
                    }
                ));
            }
            line(&format!(
                "  winner: {}",
                adj.winner.as_deref().unwrap_or("inconclusive")
            ));
        }
        if !num.convergence.is_empty() {
            line("  convergence (observed order, window [1.7, 2.3]):");
            for row in &num.convergence {
                line(&format!(
                    "    order {} at t = {:.6}: h = {} → {:.3} {}",
                    row.order,
                    row.t,
                    row.coarse_step,
                    row.observed_order,
                    if row.within_window { "ok" } else { "OUTSIDE" }
                ));
            }
        }
    }
    line("");
    line(&format!("verdict: {}", doc.verdict));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_doc() -> ReportDocument {
        ReportDocument {
            certificate: None,
            config: ConfigDoc {
                command: "verify".into(),
                format: "json".into(),
                max_order: None,
                order: None,
                params: "symbolic".into(),
                target: None,
                term_ceiling: 200_000,
            },
            equations: vec![],
            identities: vec![IdentityRow {
                check: "position identity".into(),
                pass: true,
            }],
            lambda: vec![],
            numeric: None,
            verdict: "all identity checks passed".into(),
            version: "0.0.0".into(),
        }
    }

    #[test]
    fn json_round_trips_to_an_equal_document() {
        let doc = minimal_doc();
        let body = render(&doc, Format::Json);
        let back: ReportDocument = serde_json::from_str(&body).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn rendering_twice_is_byte_identical() {
        let doc = minimal_doc();
        assert_eq!(render(&doc, Format::Json), render(&doc, Format::Json));
        assert_eq!(render(&doc, Format::Text), render(&doc, Format::Text));
    }

    #[test]
    fn top_level_keys_are_sorted_and_fixed() {
        let body = render(&minimal_doc(), Format::Json);
        let value: serde_json::Value = serde_json::from_str(&body).unwrap();
        let keys: Vec<&str> = value
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        assert_eq!(
            keys,
            vec![
                "certificate",
                "config",
                "equations",
                "identities",
                "lambda",
                "numeric",
                "verdict",
                "version"
            ]
        );
    }

    #[test]
    fn mismatch_rows_are_flagged_in_both_formats() {
        let mut doc = minimal_doc();
        doc.lambda.push(LambdaRowDoc {
            engine: "1".into(),
            flag: "MISMATCH".into(),
            order: 2,
            published: "-3".into(),
        });
        let text = render(&doc, Format::Text);
        assert!(text.contains("MISMATCH"));
        let json = render(&doc, Format::Json);
        assert!(json.contains("MISMATCH"));
    }
}

//! JSON report assembly: schema-stable, deterministic for a fixed input
//! and option set.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use ringconv_core::error::Error;
use ringconv_core::ring_encoder::{analyze, AnalysisReport, AnalyzeOptions, CodeSpec};

use crate::input::InputDocument;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub input_sha256: String,
    pub options: OptionsEcho,
}

#[derive(Serialize, Clone)]
pub struct OptionsEcho {
    pub synthesize: bool,
    pub witness: bool,
    pub horizon: usize,
    pub degree_bound: Option<usize>,
    pub seed: u64,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum Entry {
    Report(Box<AnalysisReport>),
    Failure { error: String },
}

#[derive(Serialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub provenance: Provenance,
    pub ring: String,
    pub matrices: BTreeMap<String, Entry>,
    pub codes: BTreeMap<String, Entry>,
}

pub fn input_hash(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn entry_for(result: Result<AnalysisReport, Error>) -> Entry {
    match result {
        Ok(report) => Entry::Report(Box::new(report)),
        Err(e) => Entry::Failure { error: e.to_string() },
    }
}

/// Analyzes every named matrix (as a free presentation) and every declared
/// decomposition; assembly is order-stable by name.
pub fn build_report(
    doc: &InputDocument,
    raw_input: &str,
    options: &AnalyzeOptions,
    degree_bound: Option<usize>,
) -> ReportDocument {
    let mut matrices = BTreeMap::new();
    for (name, matrix) in &doc.matrices {
        let result = CodeSpec::free(matrix.clone()).and_then(|code| analyze(&code, options));
        matrices.insert(name.clone(), entry_for(result));
    }
    let mut codes = BTreeMap::new();
    for d in &doc.decompositions {
        let components: Vec<Option<ringconv_core::matrix::PolyMatrix>> = d
            .components
            .iter()
            .map(|c| c.as_ref().map(|n| doc.matrices[n].clone()))
            .collect();
        let result = CodeSpec::decomposed(doc.ring, components)
            .and_then(|code| analyze(&code, options));
        codes.insert(d.name.clone(), entry_for(result));
    }
    ReportDocument {
        schema: SCHEMA_VERSION,
        provenance: Provenance {
            tool: "ringconv",
            version: env!("CARGO_PKG_VERSION"),
            input_sha256: input_hash(raw_input),
            options: OptionsEcho {
                synthesize: options.synthesize,
                witness: options.witness,
                horizon: options.horizon,
                degree_bound,
                seed: options.seed,
            },
        },
        ring: format!("Z({}^{})", doc.ring.p(), doc.ring.r()),
        matrices,
        codes,
    }
}

/// Human-readable summary of the same content.
pub fn render_text(report: &ReportDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!("ring {}\n", report.ring));
    let section = |out: &mut String, title: &str, entries: &BTreeMap<String, Entry>| {
        for (name, entry) in entries {
            match entry {
                Entry::Failure { error } => {
                    out.push_str(&format!("{title} {name}: ERROR {error}\n"));
                }
                Entry::Report(r) => {
                    out.push_str(&format!(
                        "{title} {name}: free={} catastrophic={}",
                        r.is_free, r.is_catastrophic
                    ));
                    if let Some(d) = &r.delta_p_factored {
                        out.push_str(&format!(" delta_p={d}"));
                    }
                    if let Some(encoder) = &r.minimal_p_encoder {
                        out.push_str(&format!(" minimal_p_encoder_rows={}", encoder.rows()));
                    }
                    if let Some(w) = &r.witness {
                        out.push_str(&format!(" witness_coords={}", w.input.len()));
                    }
                    out.push('\n');
                    if let Some(encoder) = &r.minimal_p_encoder {
                        for i in 0..encoder.rows() {
                            out.push_str(&format!(
                                "    {}\n",
                                ringconv_core::textio::row_to_string(encoder.row(i))
                            ));
                        }
                    }
                }
            }
        }
    };
    section(&mut out, "matrix", &report.matrices);
    section(&mut out, "code", &report.codes);
    out
}

//! Claims files: externally stated facts about named matrices that the
//! `verify` command re-checks with independent oracles (fresh membership
//! solves and stream expansions, never trusting recorded coefficients).

use serde::Deserialize;

use ringconv_core::error::Error;
use ringconv_core::laurent::{classify_weight, rational_expand, WeightClass};
use ringconv_core::matrix::PolyMatrix;
use ringconv_core::pbasis::{is_p_generator_sequence, is_p_independent, GenSeqOutcome, PVectorSet};
use ringconv_core::ring_encoder::{is_catastrophic_ring, level_span_certificate};
use ringconv_core::textio::{parse_poly, parse_rational};

use crate::input::InputDocument;

#[derive(Deserialize, Debug)]
pub struct ClaimsFile {
    pub claims: Vec<Claim>,
}

#[derive(Deserialize, Debug)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    /// span[p^level left] = span[p^level right], certified both ways
    SpanEqual {
        left: String,
        right: String,
        #[serde(default)]
        level: usize,
    },
    /// the input encodes to exactly the stated output, with infinite input
    /// weight and finite output weight
    Witness {
        matrix: String,
        input: Vec<String>,
        output: Vec<String>,
        #[serde(default = "default_horizon")]
        horizon: usize,
    },
    /// the rows form a p-generator sequence (expansions re-derived)
    PGenerator { matrix: String, expect: bool },
    /// the rows are p-linearly independent
    PIndependent { matrix: String, expect: bool },
    /// the matrix is noncatastrophic in the usual sense
    Noncatastrophic { matrix: String, expect: bool },
}

fn default_horizon() -> usize {
    64
}

pub struct ClaimOutcome {
    pub description: String,
    pub passed: bool,
    pub detail: String,
}

fn lookup<'a>(doc: &'a InputDocument, name: &str) -> Result<&'a PolyMatrix, Error> {
    doc.matrices
        .get(name)
        .ok_or_else(|| Error::Semantic(format!("claim references unknown matrix `{name}`")))
}

pub fn check_claim(doc: &InputDocument, claim: &Claim) -> Result<ClaimOutcome, Error> {
    match claim {
        Claim::SpanEqual { left, right, level } => {
            let a = lookup(doc, left)?;
            let b = lookup(doc, right)?;
            let cert = level_span_certificate(a, b, *level, &[]);
            let passed = cert.as_ref().map(|c| c.verify(a, b)).unwrap_or(false);
            Ok(ClaimOutcome {
                description: format!("span_equal {left} {right} level {level}"),
                passed,
                detail: match cert {
                    Ok(_) => "certificates found and replayed".into(),
                    Err(e) => format!("no certificate: {e}"),
                },
            })
        }
        Claim::Witness { matrix, input, output, horizon } => {
            let g = lookup(doc, matrix)?;
            let ring = g.ring();
            let u: Result<Vec<_>, Error> =
                input.iter().map(|s| parse_rational(ring, s)).collect();
            let u = u?;
            let expect: Result<Vec<_>, Error> =
                output.iter().map(|s| parse_poly(ring, s)).collect();
            let expect = expect?;
            if u.len() != g.rows() || expect.len() != g.cols() {
                return Err(Error::Semantic("witness claim has wrong dimensions".into()));
            }
            let encoded = g.encode(&u);
            let exact = encoded
                .iter()
                .zip(&expect)
                .all(|(got, want)| got.as_polynomial().map_or(false, |p| &p == want));
            let infinite_input = u
                .iter()
                .any(|c| classify_weight(c) == WeightClass::Infinite);
            // stream oracle: expansion weights at the stated horizon
            let out_w: usize = encoded
                .iter()
                .map(|c| rational_expand(c, *horizon).weight())
                .sum();
            let out_w2: usize = encoded
                .iter()
                .map(|c| rational_expand(c, 2 * horizon).weight())
                .sum();
            let passed = exact && infinite_input && out_w == out_w2;
            Ok(ClaimOutcome {
                description: format!("witness {matrix}"),
                passed,
                detail: format!(
                    "exact={exact} infinite_input={infinite_input} stabilized={}",
                    out_w == out_w2
                ),
            })
        }
        Claim::PGenerator { matrix, expect } => {
            let g = lookup(doc, matrix)?;
            let vs = PVectorSet::from_matrix(g);
            let outcome = is_p_generator_sequence(&vs);
            let (is_gen, detail) = match outcome {
                GenSeqOutcome::Certified(cert) => {
                    let replayed = cert.replay(&vs);
                    (replayed, "certified and replayed".to_string())
                }
                GenSeqOutcome::No(reason) => (false, reason),
                GenSeqOutcome::Inconclusive => (false, "inconclusive at the degree bound".into()),
            };
            Ok(ClaimOutcome {
                description: format!("p_generator {matrix}"),
                passed: is_gen == *expect,
                detail,
            })
        }
        Claim::PIndependent { matrix, expect } => {
            let g = lookup(doc, matrix)?;
            let vs = PVectorSet::from_matrix(g);
            let got = is_p_independent(&vs);
            Ok(ClaimOutcome {
                description: format!("p_independent {matrix}"),
                passed: got == *expect,
                detail: format!("solver says {got}"),
            })
        }
        Claim::Noncatastrophic { matrix, expect } => {
            let g = lookup(doc, matrix)?;
            let got = !is_catastrophic_ring(g)?;
            Ok(ClaimOutcome {
                description: format!("noncatastrophic {matrix}"),
                passed: got == *expect,
                detail: format!("projected minor gcd check says {got}"),
            })
        }
    }
}

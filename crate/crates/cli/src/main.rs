//! `ringconv`: exact analysis of convolutional codes over Z_{p^r}.
//!
//! Subcommands: `analyze` (classification, witnesses, minimal p-encoder
//! synthesis), `verify` (replay a claims file with independent oracles),
//! `simulate` (stream encoding with weight accounting), `parse` (syntax
//! check and canonical echo). Exit codes: 0 success, 1 parse error,
//! 2 analysis error.

mod claims;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ringconv_core::error::Error;
use ringconv_core::laurent::{classify_weight, rational_expand, WeightClass};
use ringconv_core::poly::Poly;
use ringconv_core::rational::RationalFn;
use ringconv_core::ring::RingCtx;
use ringconv_core::ring_encoder::AnalyzeOptions;
use ringconv_core::textio::parse_rational;

#[derive(Parser)]
#[command(name = "ringconv", version, about = "exact convolutional-code analysis over Z_{p^r}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// input document
    file: PathBuf,
    /// write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every named matrix and declared code
    Analyze {
        #[command(flatten)]
        common: CommonOpts,
        /// include a minimal p-encoder for each code
        #[arg(long)]
        synthesize: bool,
        /// include a catastrophic input witness where applicable
        #[arg(long)]
        witness: bool,
        /// stream horizon for weight accounting
        #[arg(long)]
        horizon: Option<usize>,
        /// membership degree bound recorded in the report
        #[arg(long)]
        degree_bound: Option<usize>,
        /// seed for the randomized smoke checks
        #[arg(long)]
        seed: Option<u64>,
        /// emit JSON (default)
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// emit a human-readable summary
        #[arg(long)]
        text: bool,
    },
    /// Re-check a claims file against the input with independent oracles
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// claims file (JSON)
        claims: PathBuf,
    },
    /// Encode rational or coefficient-list inputs and report weights
    Simulate {
        #[command(flatten)]
        common: CommonOpts,
        /// matrix name (defaults to the only matrix)
        #[arg(long)]
        matrix: Option<String>,
        /// input coordinates separated by `;`, each a rational function or
        /// a coefficient list `[c0,c1,...]` (optionally `@k` start exponent)
        #[arg(long)]
        input: String,
        #[arg(long)]
        horizon: Option<usize>,
        /// require every input coefficient to be a digit in {0,..,p-1}
        #[arg(long)]
        p_input: bool,
    },
    /// Parse the input and echo its canonical form
    Parse {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn emit(common: &CommonOpts, content: &str) -> std::io::Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn classify_exit(e: &Error) -> ExitCode {
    match e {
        Error::Parse { .. } | Error::Semantic(_) => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn read_document(path: &PathBuf) -> Result<(String, input::InputDocument), (ExitCode, String)> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| (ExitCode::from(1), format!("cannot read {}: {e}", path.display())))?;
    let doc = input::parse_document(&raw)
        .map_err(|e| (classify_exit(&e), format!("{}: {e}", path.display())))?;
    Ok((raw, doc))
}

/// One simulate coordinate: rational expression or coefficient list.
fn parse_input_coord(ring: RingCtx, spec: &str) -> Result<RationalFn, Error> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix('[') {
        let (list, start) = match rest.split_once(']') {
            Some((list, tail)) => {
                let tail = tail.trim();
                let start: i64 = if let Some(k) = tail.strip_prefix('@') {
                    k.trim().parse().map_err(|_| {
                        Error::Semantic(format!("invalid start exponent in `{spec}`"))
                    })?
                } else if tail.is_empty() {
                    0
                } else {
                    return Err(Error::Semantic(format!("trailing input after `]` in `{spec}`")));
                };
                (list, start)
            }
            None => return Err(Error::Semantic(format!("unterminated `[` in `{spec}`"))),
        };
        let coeffs: Result<Vec<u64>, _> = list
            .split(',')
            .map(|c| c.trim().parse::<u64>())
            .collect();
        let coeffs =
            coeffs.map_err(|_| Error::Semantic(format!("invalid coefficient list `{spec}`")))?;
        let poly = Poly::new(ring, coeffs);
        if start >= 0 {
            Ok(RationalFn::from_poly(poly.shl_d(start as usize)))
        } else {
            RationalFn::new(poly, Poly::monomial(ring, 1, (-start) as usize))
        }
    } else {
        parse_rational(ring, spec)
    }
}

fn run_analyze(
    common: &CommonOpts,
    synthesize: bool,
    witness: bool,
    horizon: Option<usize>,
    degree_bound: Option<usize>,
    seed: Option<u64>,
    text: bool,
) -> ExitCode {
    let (raw, doc) = match read_document(&common.file) {
        Ok(v) => v,
        Err((code, msg)) => {
            eprintln!("{msg}");
            return code;
        }
    };
    let defaults = AnalyzeOptions::default();
    let options = AnalyzeOptions {
        synthesize,
        witness,
        seed: seed.or(doc.seed).unwrap_or(defaults.seed),
        horizon: horizon.or(doc.horizon).unwrap_or(defaults.horizon),
    };
    let degree_bound = degree_bound.or(doc.degree_bound);
    let report = report::build_report(&doc, &raw, &options, degree_bound);
    let had_failure = report
        .matrices
        .values()
        .chain(report.codes.values())
        .any(|e| matches!(e, report::Entry::Failure { .. }));
    let rendered = if text {
        report::render_text(&report)
    } else {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    };
    if emit(common, &rendered).is_err() {
        return ExitCode::from(2);
    }
    if had_failure {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn run_verify(common: &CommonOpts, claims_path: &PathBuf) -> ExitCode {
    let (_, doc) = match read_document(&common.file) {
        Ok(v) => v,
        Err((code, msg)) => {
            eprintln!("{msg}");
            return code;
        }
    };
    let claims_raw = match std::fs::read_to_string(claims_path) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("cannot read {}: {e}", claims_path.display());
            return ExitCode::from(1);
        }
    };
    let parsed: claims::ClaimsFile = match serde_json::from_str(&claims_raw) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{}: invalid claims file: {e}", claims_path.display());
            return ExitCode::from(1);
        }
    };
    let mut all_ok = true;
    let mut lines = String::new();
    for claim in &parsed.claims {
        match claims::check_claim(&doc, claim) {
            Ok(outcome) => {
                lines.push_str(&format!(
                    "{}: {} ({})\n",
                    outcome.description,
                    if outcome.passed { "PASS" } else { "FAIL" },
                    outcome.detail
                ));
                all_ok &= outcome.passed;
            }
            Err(e) => {
                lines.push_str(&format!("claim error: {e}\n"));
                all_ok = false;
            }
        }
    }
    if emit(common, &lines).is_err() {
        return ExitCode::from(2);
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn run_simulate(
    common: &CommonOpts,
    matrix: Option<&str>,
    input_spec: &str,
    horizon: Option<usize>,
    p_input: bool,
) -> ExitCode {
    let (_, doc) = match read_document(&common.file) {
        Ok(v) => v,
        Err((code, msg)) => {
            eprintln!("{msg}");
            return code;
        }
    };
    let name = match matrix {
        Some(n) => n.to_string(),
        None if doc.matrix_order.len() == 1 => doc.matrix_order[0].clone(),
        None => {
            eprintln!("--matrix is required when the input declares several matrices");
            return ExitCode::from(1);
        }
    };
    let Some(g) = doc.matrices.get(&name) else {
        eprintln!("unknown matrix `{name}`");
        return ExitCode::from(1);
    };
    let horizon = horizon.or(doc.horizon).unwrap_or(64).max(2);
    let coords: Result<Vec<RationalFn>, Error> = input_spec
        .split(';')
        .map(|s| parse_input_coord(doc.ring, s))
        .collect();
    let u = match coords {
        Ok(u) => u,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    if u.len() != g.rows() {
        eprintln!(
            "input has {} coordinates but `{name}` has {} rows",
            u.len(),
            g.rows()
        );
        return ExitCode::from(1);
    }
    if p_input {
        let digits_ok = u.iter().all(|c| {
            c.den().is_one() && c.num().coeffs().iter().all(|&x| x < doc.ring.p())
        });
        if !digits_ok {
            eprintln!("--p-input requires explicit digit coefficient lists");
            return ExitCode::from(1);
        }
    }
    let encoded = g.encode(&u);
    let mut out = String::new();
    out.push_str(&format!("matrix {name}, horizon {horizon}\n"));
    let describe = |label: &str, coords: &[RationalFn], out: &mut String| -> (usize, usize) {
        let mut w_half_total = 0;
        let mut w_full_total = 0;
        for (i, c) in coords.iter().enumerate() {
            let w_half = rational_expand(c, horizon / 2).weight();
            let w_full = rational_expand(c, horizon).weight();
            let verdict = match classify_weight(c) {
                WeightClass::Finite => "finite",
                WeightClass::Infinite => "infinite",
            };
            out.push_str(&format!(
                "{label}[{i}] weight@{}={} weight@{}={} {} ({})\n",
                horizon / 2,
                w_half,
                horizon,
                w_full,
                if w_half == w_full { "stabilized" } else { "growing" },
                verdict
            ));
            w_half_total += w_half;
            w_full_total += w_full;
        }
        (w_half_total, w_full_total)
    };
    let (in_half, in_full) = describe("input", &u, &mut out);
    let (out_half, out_full) = describe("output", &encoded, &mut out);
    out.push_str(&format!(
        "input total {} -> {} ({}), output total {} -> {} ({})\n",
        in_half,
        in_full,
        if in_half == in_full { "stabilized" } else { "growing" },
        out_half,
        out_full,
        if out_half == out_full { "stabilized" } else { "growing" },
    ));
    if emit(common, &out).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}

fn run_parse(common: &CommonOpts) -> ExitCode {
    match read_document(&common.file) {
        Ok((_, doc)) => {
            let canonical = input::format_document(&doc);
            if emit(common, &canonical).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err((code, msg)) => {
            eprintln!("{msg}");
            code
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze {
            common,
            synthesize,
            witness,
            horizon,
            degree_bound,
            seed,
            json: _,
            text,
        } => run_analyze(
            common,
            *synthesize,
            *witness,
            *horizon,
            *degree_bound,
            *seed,
            *text,
        ),
        Command::Verify { common, claims } => run_verify(common, claims),
        Command::Simulate { common, matrix, input, horizon, p_input } => {
            run_simulate(common, matrix.as_deref(), input, *horizon, *p_input)
        }
        Command::Parse { common } => run_parse(common),
    }
}

//! Input document parser: a ring declaration, named matrices with
//! bracketed rows, optional decomposition lines and option settings.
//! Errors carry line and column positions.
//!
//! ```text
//! # F = Z(p^r)
//! ring: Z(3^3)
//! matrix G:
//! [2+7D^2, 5+3D+19D^2+9D^3]
//! decompose: C = G0 + p*G1
//! set horizon=128
//! ```

use std::collections::BTreeMap;

use ringconv_core::error::Error;
use ringconv_core::matrix::PolyMatrix;
use ringconv_core::ring::RingCtx;
use ringconv_core::textio::parse_row;

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub name: String,
    /// component matrix name per p-power level; None = empty component
    pub components: Vec<Option<String>>,
}

#[derive(Debug)]
pub struct InputDocument {
    pub ring: RingCtx,
    pub matrices: BTreeMap<String, PolyMatrix>,
    pub matrix_order: Vec<String>,
    pub decompositions: Vec<Decomposition>,
    pub horizon: Option<usize>,
    pub degree_bound: Option<usize>,
    pub seed: Option<u64>,
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn parse_ring_decl(line_no: usize, text: &str) -> Result<RingCtx, Error> {
    // Z(p^r) or Z(p)
    let t = text.trim();
    let inner = t
        .strip_prefix("Z(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| parse_err(line_no, 1, "expected `ring: Z(p^r)`"))?;
    let (p_str, r_str) = match inner.split_once('^') {
        Some((p, r)) => (p, r),
        None => (inner, "1"),
    };
    let p: u64 = p_str
        .trim()
        .parse()
        .map_err(|_| parse_err(line_no, 1, "invalid prime in ring declaration"))?;
    let r: u32 = r_str
        .trim()
        .parse()
        .map_err(|_| parse_err(line_no, 1, "invalid exponent in ring declaration"))?;
    RingCtx::new(p, r).map_err(|e| Error::Semantic(format!("line {line_no}: {e}")))
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

pub fn parse_document(text: &str) -> Result<InputDocument, Error> {
    let mut ring: Option<RingCtx> = None;
    let mut matrices: BTreeMap<String, PolyMatrix> = BTreeMap::new();
    let mut matrix_order: Vec<String> = Vec::new();
    let mut decompositions: Vec<Decomposition> = Vec::new();
    let mut horizon = None;
    let mut degree_bound = None;
    let mut seed = None;
    let mut pending: Option<(String, Vec<Vec<ringconv_core::poly::Poly>>, usize)> = None;

    let flush =
        |pending: &mut Option<(String, Vec<Vec<ringconv_core::poly::Poly>>, usize)>,
         matrices: &mut BTreeMap<String, PolyMatrix>,
         matrix_order: &mut Vec<String>,
         ring: RingCtx|
         -> Result<(), Error> {
            if let Some((name, rows, start_line)) = pending.take() {
                if rows.is_empty() {
                    return Err(parse_err(start_line, 1, format!("matrix `{name}` has no rows")));
                }
                let cols = rows[0].len();
                if rows.iter().any(|r| r.len() != cols) {
                    return Err(Error::Semantic(format!("matrix `{name}` has ragged rows")));
                }
                if matrices.contains_key(&name) {
                    return Err(Error::Semantic(format!("duplicate matrix name `{name}`")));
                }
                matrix_order.push(name.clone());
                matrices.insert(name, PolyMatrix::from_rows(ring, rows));
            }
            Ok(())
        };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("ring:") {
            if ring.is_some() {
                return Err(Error::Semantic(format!(
                    "line {line_no}: duplicate ring declaration"
                )));
            }
            ring = Some(parse_ring_decl(line_no, rest)?);
            continue;
        }
        let ring_now = ring.ok_or_else(|| {
            parse_err(line_no, 1, "a `ring: Z(p^r)` declaration must come first")
        })?;
        if let Some(rest) = line.strip_prefix("matrix ") {
            flush(&mut pending, &mut matrices, &mut matrix_order, ring_now)?;
            let name = rest
                .strip_suffix(':')
                .map(str::trim)
                .ok_or_else(|| parse_err(line_no, 1, "expected `matrix NAME:`"))?;
            if !valid_name(name) {
                return Err(parse_err(line_no, 8, format!("invalid matrix name `{name}`")));
            }
            pending = Some((name.to_string(), Vec::new(), line_no));
            continue;
        }
        if line.starts_with('[') {
            let Some((_, rows, _)) = pending.as_mut() else {
                return Err(parse_err(line_no, 1, "row outside of a matrix block"));
            };
            let row = parse_row(ring_now, line).map_err(|e| match e {
                Error::Parse { col, msg, .. } => parse_err(line_no, col, msg),
                other => other,
            })?;
            rows.push(row);
            continue;
        }
        if let Some(rest) = line.strip_prefix("decompose:") {
            flush(&mut pending, &mut matrices, &mut matrix_order, ring_now)?;
            let (name, terms) = rest
                .split_once('=')
                .ok_or_else(|| parse_err(line_no, 1, "expected `decompose: NAME = ...`"))?;
            let name = name.trim().to_string();
            if !valid_name(&name) {
                return Err(parse_err(line_no, 1, format!("invalid code name `{name}`")));
            }
            let mut components: Vec<Option<String>> = vec![None; ring_now.r() as usize];
            for term in terms.split('+') {
                let term = term.trim();
                let (level, mat) = if let Some(rest) = term.strip_prefix("p^") {
                    let (exp, mat) = rest
                        .split_once('*')
                        .ok_or_else(|| parse_err(line_no, 1, "expected `p^i*NAME`"))?;
                    let level: usize = exp
                        .trim()
                        .parse()
                        .map_err(|_| parse_err(line_no, 1, "invalid p-power exponent"))?;
                    (level, mat.trim())
                } else if let Some(rest) = term.strip_prefix("p*") {
                    (1, rest.trim())
                } else {
                    (0, term)
                };
                if level >= components.len() {
                    return Err(Error::Semantic(format!(
                        "line {line_no}: exponent {level} is not below r = {}",
                        ring_now.r()
                    )));
                }
                if components[level].is_some() {
                    return Err(Error::Semantic(format!(
                        "line {line_no}: duplicate component at level {level}"
                    )));
                }
                components[level] = Some(mat.to_string());
            }
            decompositions.push(Decomposition { name, components });
            continue;
        }
        if let Some(rest) = line.strip_prefix("set ") {
            flush(&mut pending, &mut matrices, &mut matrix_order, ring_now)?;
            let (key, value) = rest
                .split_once('=')
                .ok_or_else(|| parse_err(line_no, 1, "expected `set key=value`"))?;
            let value = value.trim();
            match key.trim() {
                "horizon" => {
                    horizon = Some(value.parse().map_err(|_| {
                        parse_err(line_no, 1, "horizon must be a positive integer")
                    })?)
                }
                "degree_bound" => {
                    degree_bound = Some(value.parse().map_err(|_| {
                        parse_err(line_no, 1, "degree_bound must be a positive integer")
                    })?)
                }
                "seed" => {
                    seed = Some(value.parse().map_err(|_| {
                        parse_err(line_no, 1, "seed must be an unsigned integer")
                    })?)
                }
                other => {
                    return Err(parse_err(line_no, 5, format!("unknown option `{other}`")));
                }
            }
            continue;
        }
        return Err(parse_err(line_no, 1, format!("unrecognized line `{line}`")));
    }
    let ring = ring.ok_or_else(|| parse_err(1, 1, "missing `ring: Z(p^r)` declaration"))?;
    flush(&mut pending, &mut matrices, &mut matrix_order, ring)?;
    // semantic checks on decompositions
    for d in &decompositions {
        for name in d.components.iter().flatten() {
            if !matrices.contains_key(name) {
                return Err(Error::Semantic(format!(
                    "decomposition `{}` references unknown matrix `{}`",
                    d.name, name
                )));
            }
        }
        if matrices.contains_key(&d.name) {
            return Err(Error::Semantic(format!(
                "decomposition `{}` clashes with a matrix name",
                d.name
            )));
        }
    }
    if matrices.is_empty() {
        return Err(Error::Semantic("no matrices declared".into()));
    }
    Ok(InputDocument {
        ring,
        matrices,
        matrix_order,
        decompositions,
        horizon,
        degree_bound,
        seed,
    })
}

/// Round-trip formatter used by `parse` and the determinism tests.
pub fn format_document(doc: &InputDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!("ring: Z({}^{})\n", doc.ring.p(), doc.ring.r()));
    for name in &doc.matrix_order {
        let m = &doc.matrices[name];
        out.push_str(&format!("matrix {name}:\n"));
        for i in 0..m.rows() {
            out.push_str(&ringconv_core::textio::row_to_string(m.row(i)));
            out.push('\n');
        }
    }
    for d in &doc.decompositions {
        let terms: Vec<String> = d
            .components
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                c.as_ref().map(|name| match i {
                    0 => name.clone(),
                    1 => format!("p*{name}"),
                    _ => format!("p^{i}*{name}"),
                })
            })
            .collect();
        out.push_str(&format!("decompose: {} = {}\n", d.name, terms.join(" + ")));
    }
    if let Some(h) = doc.horizon {
        out.push_str(&format!("set horizon={h}\n"));
    }
    if let Some(b) = doc.degree_bound {
        out.push_str(&format!("set degree_bound={b}\n"));
    }
    if let Some(s) = doc.seed {
        out.push_str(&format!("set seed={s}\n"));
    }
    out
}

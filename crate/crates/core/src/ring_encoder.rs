//! Catastrophicity and minimal-p-encoder synthesis over Z_{p^r}.
//!
//! Row concentrations over the ring lift the field-level machinery: a
//! factor of the projected minor gcd is concentrated into a row by
//! transvections whose F_p coefficients are lifted digit-verbatim, and the
//! designated row is then divided by a monic lift of the factor that is
//! found by enumeration and verified directly at the working modulus.
//! Level i works modulo p^{r-i} since span[p^i G] only depends on G mod
//! p^{r-i}; results are lifted back with zero high digits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{factor_fp, monic_lifts, Factorization};
use crate::field_encoder::{self, left_null_vector};
use crate::laurent::{classify_weight, WeightClass};
use crate::matrix::{PolyMatrix, RatMatrix, Step};
use crate::pbasis::{
    self, constant_p_independence, is_p_generator_sequence, is_p_independent, module_solve,
    reduce_to_reduced_p_basis, GenSeqOutcome, Membership, PVectorSet,
};
use crate::poly::Poly;
use crate::rational::RationalFn;
use crate::ring::{ExtField, RingCtx};

/// True iff the projected minor gcd is not a unit times a power of D.
pub fn is_catastrophic_ring(g: &PolyMatrix) -> Result<bool> {
    Ok(!g.minor_gcd_projected()?.is_unit_times_power_of_d())
}

/// First irreducible factor of the projected minor gcd (not a power of D)
/// that has a monic lift dividing every maximal minor at the matrix's own
/// modulus; `None` when the minors share no such divisor.
fn find_common_lift_divisor(h: &PolyMatrix) -> Result<Option<(Poly, Poly)>> {
    let dbar = h.minor_gcd_projected()?;
    if dbar.is_unit_times_power_of_d() {
        return Ok(None);
    }
    let minors: Vec<Poly> = h.minors()?.into_values().collect();
    for pbar in factor_fp(&dbar)?.non_d_factors() {
        for q in monic_lifts(&pbar, h.ring()) {
            let divides_all = minors.iter().all(|m| {
                m.is_zero() || m.divmod(&q).map_or(false, |(_, rem)| rem.is_zero())
            });
            if divides_all {
                return Ok(Some((pbar, q)));
            }
        }
    }
    Ok(None)
}

/// Solves for transvection corrections that are multiples of p: find w_j
/// with base_row[c] + p * sum_j w_j row_j[c] divisible by the monic lift q
/// for every column. Corrections can be reduced mod q, so bounding their
/// degree below deg q is complete. Returns the correction polynomials
/// (already scaled by p), or `None`.
fn correction_solve(
    h: &PolyMatrix,
    pivot: usize,
    base_row: &[Poly],
    q: &Poly,
) -> Option<Vec<Option<Poly>>> {
    let ring = h.ring();
    let dq = q.degree()?;
    if dq == 0 {
        return None;
    }
    let k = h.rows();
    let others: Vec<usize> = (0..k).filter(|&j| j != pivot).collect();
    let n = h.cols();
    let cols = others.len() * dq;
    let rows = n * dq;
    let mut a = crate::linalg::ZMat::zero(ring, rows, cols);
    let mut b = vec![0u64; rows];
    for c in 0..n {
        let rem_base = base_row[c].divmod(q).ok()?.1;
        for s in 0..dq {
            b[c * dq + s] = ring.neg(rem_base.coeff(s));
        }
        for (oj, &j) in others.iter().enumerate() {
            for t in 0..dq {
                let rem = h.at(j, c).shl_d(t).divmod(q).ok()?.1.scale(ring.p());
                for s in 0..dq {
                    a.set(c * dq + s, oj * dq + t, rem.coeff(s));
                }
            }
        }
    }
    let sol = crate::linalg::solve(&a, &b)?;
    let mut out = vec![None; k];
    for (oj, &j) in others.iter().enumerate() {
        let w = Poly::new(ring, sol.particular[oj * dq..(oj + 1) * dq].to_vec());
        if !w.is_zero() {
            out[j] = Some(w.scale(ring.p()));
        }
    }
    Some(out)
}

/// One concentration-and-division step at the matrix's own modulus: the
/// field-level transvections for `pbar` are lifted digit-verbatim, a monic
/// lift of `pbar` dividing the designated row is searched (adjusting the
/// transvections by p-multiple corrections when the verbatim lift alone
/// does not divide), and the row is divided out. Alternate pivot rows are
/// retried before giving up.
fn strip_factor_once(h: &PolyMatrix, pbar: &Poly) -> Result<(PolyMatrix, Poly, Vec<Step>)> {
    let ring = h.ring();
    let k = h.rows();
    let hbar = h.project();
    let field = ExtField::new(ring.p(), pbar.coeffs().to_vec())?;
    let alpha = field.alpha();
    let eval: Vec<Vec<crate::ring::ExtElem>> = (0..k)
        .map(|i| {
            (0..hbar.cols())
                .map(|j| hbar.at(i, j).eval_ext(&field, &alpha))
                .collect()
        })
        .collect();
    let v = left_null_vector(&field, &eval)
        .ok_or_else(|| Error::InternalCheckFailed("projection not singular at the root".into()))?;
    let pivots: Vec<usize> = (0..k).rev().filter(|&i| !field.is_zero(&v[i])).collect();
    if pivots.is_empty() {
        return Err(Error::InternalCheckFailed("zero null vector".into()));
    }
    let lifts = monic_lifts(pbar, ring);
    for pivot in pivots {
        let scale = field.inv(&v[pivot])?;
        let vn: Vec<crate::ring::ExtElem> = v.iter().map(|c| field.mul(c, &scale)).collect();
        let base_coeffs: Vec<Option<Poly>> = (0..k)
            .map(|j| {
                if j == pivot || field.is_zero(&vn[j]) {
                    None
                } else {
                    Some(Poly::new(ring, vn[j].clone()))
                }
            })
            .collect();
        let base_row: Vec<Poly> = (0..h.cols())
            .map(|c| {
                let mut acc = h.at(pivot, c).clone();
                for (j, coeff) in base_coeffs.iter().enumerate() {
                    if let Some(coeff) = coeff {
                        acc = acc.add(&coeff.mul(h.at(j, c)));
                    }
                }
                acc
            })
            .collect();
        // verbatim transvections first across every lift, p-multiple
        // corrections only as a fallback
        let attempts = lifts
            .iter()
            .map(|q| (q, false))
            .chain(lifts.iter().map(|q| (q, true)))
            .collect::<Vec<_>>();
        for (q, with_corrections) in attempts {
            let corrections = if !with_corrections {
                if base_row.iter().all(|e| e.div_exact(q).is_ok()) {
                    Some(vec![None; k])
                } else {
                    None
                }
            } else {
                correction_solve(h, pivot, &base_row, q)
            };
            let Some(corr) = corrections else {
                continue;
            };
            let mut h2 = h.clone();
            let mut steps = Vec::new();
            for j in 0..k {
                let coeff = match (&base_coeffs[j], &corr[j]) {
                    (None, None) => continue,
                    (Some(b), None) => b.clone(),
                    (None, Some(w)) => w.clone(),
                    (Some(b), Some(w)) => b.add(w),
                };
                if coeff.is_zero() {
                    continue;
                }
                steps.push(Step::RowAdd {
                    target: pivot,
                    source: j,
                    coeff: RationalFn::from_poly(coeff.clone()),
                });
                for c in 0..h2.cols() {
                    let val = h2.at(pivot, c).add(&coeff.mul(h2.at(j, c)));
                    h2.set(pivot, c, val);
                }
            }
            let quotients: Option<Vec<Poly>> = (0..h2.cols())
                .map(|c| h2.at(pivot, c).div_exact(q).ok())
                .collect();
            let Some(quot) = quotients else {
                continue;
            };
            steps.push(Step::RowScaleRat {
                row: pivot,
                factor: RationalFn::new(Poly::one(ring), q.clone())?,
            });
            for (c, qv) in quot.into_iter().enumerate() {
                h2.set(pivot, c, qv);
            }
            return Ok((h2, q.clone(), steps));
        }
    }
    Err(Error::LiftVerificationFailed)
}

/// Greedy fixpoint: while the maximal minors share a monic lift of a
/// non-D irreducible factor of the projected gcd, concentrate it into a
/// row and divide it out. The internal degree never increases.
fn strip_loop(mut h: PolyMatrix) -> Result<(PolyMatrix, Vec<Step>, Vec<Poly>)> {
    let mut steps = Vec::new();
    let mut divisors = Vec::new();
    loop {
        let Some((pbar, _q_minors)) = find_common_lift_divisor(&h)? else {
            break;
        };
        let before = h.intdeg()?;
        let (h2, q, mut s) = strip_factor_once(&h, &pbar)?;
        let after = h2.intdeg()?;
        if after > before {
            return Err(Error::InternalCheckFailed(
                "internal degree increased during reduction".into(),
            ));
        }
        steps.append(&mut s);
        divisors.push(q);
        h = h2;
    }
    Ok((h, steps, divisors))
}

/// Reduced-internal-degree fixpoint at the full modulus. Greedy; the
/// output's projected minor gcd is invariant under the choice of encoder,
/// which is what downstream consumers rely on.
pub fn ridm_reduce(g: &PolyMatrix) -> Result<(PolyMatrix, Vec<Step>)> {
    g.minor_gcd_projected()?;
    let (h, steps, _) = strip_loop(g.clone())?;
    Ok((h, steps))
}

/// The projected minor gcd of a reduced-internal-degree encoder: the
/// code-level invariant of a free code.
pub fn delta_p_code(g: &PolyMatrix) -> Result<Poly> {
    let (h, _) = ridm_reduce(g)?;
    h.minor_gcd_projected()
}

/// Certificate for span[p^level A] = span[p^level B] (A the original, B
/// the derived matrix): polynomial coefficients forward, and a
/// unit-constant-term denominator clearing each backward membership.
#[derive(Clone, Debug)]
pub struct SpanCertificate {
    pub level: usize,
    /// coefficients writing each row of p^level A over the rows of p^level B
    pub forward: Vec<Vec<Poly>>,
    /// per row of p^level B: (denominator d, coefficients writing d * row
    /// over the rows of p^level A)
    pub backward: Vec<(Poly, Vec<Poly>)>,
}

impl SpanCertificate {
    pub fn verify(&self, a: &PolyMatrix, b: &PolyMatrix) -> bool {
        let ring = a.ring();
        let scale = ring.pow(ring.p(), self.level as u64);
        let sa = PVectorSet::from_matrix(&a.scale_const(scale));
        let sb = PVectorSet::from_matrix(&b.scale_const(scale));
        if self.forward.len() != sa.len() || self.backward.len() != sb.len() {
            return false;
        }
        for (row, coeffs) in sa.vectors().iter().zip(&self.forward) {
            if coeffs.len() != sb.len() {
                return false;
            }
            if &pbasis::zlinear_combination(coeffs, &sb) != row {
                return false;
            }
        }
        for (row, (den, coeffs)) in sb.vectors().iter().zip(&self.backward) {
            if den.is_zero() || !ring.is_unit(den.coeff(den.d_valuation().unwrap_or(0))) {
                return false;
            }
            let scaled: Vec<Poly> = row.iter().map(|e| e.mul(den)).collect();
            if pbasis::zlinear_combination(coeffs, &sa) != scaled {
                return false;
            }
        }
        true
    }
}

fn solve_escalating(target: &[Poly], vs: &PVectorSet) -> Option<Vec<Poly>> {
    let deg_t = target.iter().filter_map(|e| e.degree()).max().unwrap_or(0);
    let base = vs.max_row_degree().max(deg_t).max(1);
    for bound in pbasis::bound_ladder(base) {
        if let Some(sol) = module_solve(target, vs, bound) {
            return Some(sol);
        }
    }
    None
}

/// Rows divided by their p-power content (canonical representatives over
/// the full ring); zero rows are kept as-is.
fn content_stack(m: &PolyMatrix) -> PolyMatrix {
    let ring = m.ring();
    let rows: Vec<Vec<Poly>> = (0..m.rows())
        .map(|i| {
            let level = m
                .row(i)
                .iter()
                .flat_map(|p| p.coeffs().iter().map(|&c| ring.val_p(c)))
                .min()
                .unwrap_or(ring.r());
            if level == 0 || level >= ring.r() {
                return m.row_vec(i);
            }
            let pe = ring.pow(ring.p(), level as u64);
            m.row(i)
                .iter()
                .map(|p| Poly::new(ring, p.coeffs().iter().map(|&c| c / pe).collect()))
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(ring, rows)
}

/// Monic divisors (subset products of the irreducible factorization) of a
/// monic F_p polynomial, sorted by degree then coefficients.
fn monic_divisors(fact: &Factorization, ring: RingCtx) -> Vec<Poly> {
    let mut divisors = vec![Poly::one(ring)];
    for (f, mult) in &fact.factors {
        let mut next = Vec::new();
        for d in &divisors {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..*mult {
                acc = acc.mul(f);
                next.push(acc.clone());
            }
        }
        divisors = next;
    }
    divisors.sort_by_key(|d| (d.degree().unwrap_or(0), d.coeffs().to_vec()));
    divisors.dedup();
    divisors
}

/// Builds a span certificate between p^level*original and p^level*derived.
/// Backward denominators are searched among 1, the divisors actually
/// applied during the construction, and monic lifts of every divisor of
/// the projected gcd of the original.
pub fn level_span_certificate(
    original: &PolyMatrix,
    derived: &PolyMatrix,
    level: usize,
    applied: &[Poly],
) -> Result<SpanCertificate> {
    let ring = original.ring();
    let scale = ring.pow(ring.p(), level as u64);
    let sa = PVectorSet::from_matrix(&original.scale_const(scale));
    let sb = PVectorSet::from_matrix(&derived.scale_const(scale));
    let mut forward = Vec::new();
    for row in sa.vectors() {
        let sol = solve_escalating(row, &sb).ok_or_else(|| {
            Error::InternalCheckFailed(format!("no forward span certificate at level {level}"))
        })?;
        forward.push(sol);
    }
    // candidate denominators: divisors actually applied, plus monic lifts
    // of every divisor of the projected gcd of the original's content stack
    // (rows divided by their p-power level, so stacked generators with
    // rank-deficient projections still contribute their true invariant)
    let mut candidates: Vec<Poly> = vec![Poly::one(ring)];
    for q in applied {
        candidates.push(q.lift_verbatim(ring));
    }
    if let Ok(dbar) = content_stack(original).minor_gcd_projected() {
        let fact = factor_fp(&dbar)?;
        let work = ring.reduced(ring.r() - level as u32);
        for div in monic_divisors(&fact, dbar.ring()) {
            if div.is_one() {
                continue;
            }
            for lift in monic_lifts(&div, work) {
                candidates.push(lift.lift_verbatim(ring));
            }
        }
    }
    candidates.sort_by_key(|d| (d.degree().unwrap_or(0), d.coeffs().to_vec()));
    candidates.dedup();
    let mut backward = Vec::new();
    for row in sb.vectors() {
        let mut found = None;
        for den in &candidates {
            if !ring.is_unit(den.coeff(den.d_valuation().unwrap_or(0))) {
                continue;
            }
            let scaled: Vec<Poly> = row.iter().map(|e| e.mul(den)).collect();
            if let Some(sol) = solve_escalating(&scaled, &sa) {
                found = Some((den.clone(), sol));
                break;
            }
        }
        backward.push(found.ok_or_else(|| {
            Error::InternalCheckFailed(format!("no backward span certificate at level {level}"))
        })?);
    }
    let cert = SpanCertificate { level, forward, backward };
    if !cert.verify(original, derived) {
        return Err(Error::InternalCheckFailed("span certificate replay failed".into()));
    }
    Ok(cert)
}

/// The level matrices G_0..G_{r-1}: span[p^i G_i] = span[p^i G], with the
/// level-i minors free of common non-D irreducible lift divisors at
/// modulus p^{r-i}.
#[derive(Clone, Debug)]
pub struct GiLadder {
    pub matrices: Vec<PolyMatrix>,
    pub level_steps: Vec<Vec<Step>>,
    pub certificates: Vec<SpanCertificate>,
}

pub fn build_gi_ladder(g: &PolyMatrix) -> Result<GiLadder> {
    let ring = g.ring();
    g.minor_gcd_projected()?;
    let r = ring.r() as usize;
    let mut matrices: Vec<PolyMatrix> = Vec::with_capacity(r);
    let mut level_steps = Vec::with_capacity(r);
    let mut applied_acc: Vec<Vec<Poly>> = Vec::with_capacity(r);
    for i in 0..r {
        let work = ring.reduced((r - i) as u32);
        let start = if i == 0 {
            g.reduce_mod(work)
        } else {
            matrices[i - 1].reduce_mod(work)
        };
        let (hi, steps, divisors) = strip_loop(start)?;
        let mut acc = if i == 0 { Vec::new() } else { applied_acc[i - 1].clone() };
        acc.extend(divisors);
        applied_acc.push(acc);
        matrices.push(hi.lift_verbatim(ring));
        level_steps.push(steps);
    }
    let mut certificates = Vec::with_capacity(r);
    for i in 0..r {
        certificates.push(level_span_certificate(g, &matrices[i], i, &applied_acc[i])?);
    }
    Ok(GiLadder { matrices, level_steps, certificates })
}

/// Concentration of the projected minor gcd over the ring: the field-level
/// transform on the projection is lifted digit-verbatim; `poly_level` is
/// the least i with p^i M G polynomial, `div_level` the least level at
/// which some monic lift Q of the projected gcd divides the designated row
/// of p^i M G. Dividing and stripping the common p-power yields the
/// noncatastrophic matrix `h`.
#[derive(Clone, Debug)]
pub struct RingConcentration {
    pub m: RatMatrix,
    pub row_index: usize,
    pub poly_level: usize,
    pub div_level: usize,
    pub q: Poly,
    pub h: PolyMatrix,
    pub certificate: SpanCertificate,
}

fn lift_rational_verbatim(x: &RationalFn, target: RingCtx) -> Result<RationalFn> {
    RationalFn::new(x.num().lift_verbatim(target), x.den().lift_verbatim(target))
}

pub fn concentrate_delta_ring(g: &PolyMatrix) -> Result<RingConcentration> {
    let ring = g.ring();
    let r = ring.r() as usize;
    let dbar = g.minor_gcd_projected()?;
    let conc = field_encoder::concentrate_delta(&g.project())?;
    // lift the transform entrywise with verbatim digits
    let mut rows = Vec::with_capacity(conc.m.rows());
    for i in 0..conc.m.rows() {
        let mut row = Vec::with_capacity(conc.m.cols());
        for j in 0..conc.m.cols() {
            row.push(lift_rational_verbatim(conc.m.at(i, j), ring)?);
        }
        rows.push(row);
    }
    let m = RatMatrix::from_rows(ring, rows);
    let prod = m.mul_poly_matrix(g);
    // least level from which every entry of p^i M G is polynomial
    let mut poly_level = 0usize;
    for i in 0..prod.rows() {
        for j in 0..prod.cols() {
            let entry = prod.at(i, j);
            let mut level = None;
            for lv in 0..r {
                let scaled = entry.scale(ring.pow(ring.p(), lv as u64));
                if scaled.is_polynomial() {
                    level = Some(lv);
                    break;
                }
            }
            let level = level.ok_or_else(|| {
                Error::InternalCheckFailed("no p-power clears the transform denominators".into())
            })?;
            poly_level = poly_level.max(level);
        }
    }
    // least level >= poly_level at which a monic lift of the projected gcd
    // divides the designated row of p^i M G
    let row_index = conc.row_index;
    let mut found: Option<(usize, Poly, Vec<Poly>)> = None;
    'levels: for lv in poly_level..r {
        let scale = ring.pow(ring.p(), lv as u64);
        let scaled_rows: Vec<Vec<Poly>> = (0..prod.rows())
            .map(|i| {
                (0..prod.cols())
                    .map(|j| prod.at(i, j).scale(scale).as_polynomial().unwrap())
                    .collect()
            })
            .collect();
        let work = ring.reduced((r - lv) as u32);
        for q in monic_lifts(&dbar, work) {
            let ql = q.lift_verbatim(ring);
            let quotients: Option<Vec<Poly>> = scaled_rows[row_index]
                .iter()
                .map(|e| e.div_exact(&ql).ok())
                .collect();
            if let Some(quot) = quotients {
                let mut mat_rows = scaled_rows.clone();
                mat_rows[row_index] = quot;
                found = Some((lv, ql, mat_rows.concat()));
                break 'levels;
            }
        }
    }
    let Some((div_level, q, flat)) = found else {
        return Err(Error::InternalCheckFailed(
            "no level admits a divisible designated row".into(),
        ));
    };
    // strip the common p-power with zero high digits
    let pe = ring.pow(ring.p(), div_level as u64);
    let stripped: Vec<Poly> = flat
        .iter()
        .map(|e| {
            Poly::new(
                ring,
                e.coeffs()
                    .iter()
                    .map(|&c| {
                        debug_assert_eq!(c % pe, 0);
                        c / pe
                    })
                    .collect(),
            )
        })
        .collect();
    let h = PolyMatrix::new(ring, g.rows(), g.cols(), stripped);
    if is_catastrophic_ring(&h)? {
        return Err(Error::InternalCheckFailed("concentrated quotient is catastrophic".into()));
    }
    let certificate = level_span_certificate(g, &h, div_level, &[q.clone()])?;
    Ok(RingConcentration { m, row_index, poly_level, div_level, q, h, certificate })
}

/// A code over Z_{p^r}: either a free presentation (full projected row
/// rank) or a direct-sum decomposition into free component encoders, with
/// component i entering scaled by p^i.
#[derive(Clone, Debug)]
pub enum Presentation {
    Free(PolyMatrix),
    Decomposed(Vec<Option<PolyMatrix>>),
}

#[derive(Clone, Debug)]
pub struct CodeSpec {
    ring: RingCtx,
    n: usize,
    presentation: Presentation,
}

impl CodeSpec {
    pub fn free(g: PolyMatrix) -> Result<Self> {
        g.minor_gcd_projected()?;
        Ok(CodeSpec { ring: g.ring(), n: g.cols(), presentation: Presentation::Free(g) })
    }

    /// Components indexed by their p-power level; every present component
    /// must have full projected row rank and the stacked projections must
    /// be jointly full row rank (the direct-sum condition).
    pub fn decomposed(ring: RingCtx, components: Vec<Option<PolyMatrix>>) -> Result<Self> {
        assert_eq!(components.len(), ring.r() as usize);
        let present: Vec<&PolyMatrix> = components.iter().flatten().collect();
        if present.is_empty() {
            return Err(Error::Semantic("empty decomposition".into()));
        }
        let n = present[0].cols();
        for c in &present {
            if c.cols() != n {
                return Err(Error::Semantic("decomposition components differ in length".into()));
            }
            c.minor_gcd_projected()
                .map_err(|_| Error::DirectSumViolation)?;
        }
        let stacked = PolyMatrix::stack(&present);
        let total: usize = present.iter().map(|c| c.rows()).sum();
        stacked
            .project()
            .minor_gcd()
            .map_err(|_| Error::DirectSumViolation)?;
        if stacked.rows() != total {
            return Err(Error::DirectSumViolation);
        }
        Ok(CodeSpec { ring, n, presentation: Presentation::Decomposed(components) })
    }

    pub fn ring(&self) -> RingCtx {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn is_free(&self) -> bool {
        match &self.presentation {
            Presentation::Free(_) => true,
            Presentation::Decomposed(cs) => {
                cs.iter().enumerate().all(|(i, c)| i == 0 || c.is_none())
            }
        }
    }

    /// A generator matrix for the code: G for free codes, the stack of
    /// p^i-scaled components otherwise.
    pub fn generator_matrix(&self) -> PolyMatrix {
        match &self.presentation {
            Presentation::Free(g) => g.clone(),
            Presentation::Decomposed(cs) => {
                let parts: Vec<PolyMatrix> = cs
                    .iter()
                    .enumerate()
                    .filter_map(|(i, c)| {
                        c.as_ref()
                            .map(|g| g.scale_const(self.ring.pow(self.ring.p(), i as u64)))
                    })
                    .collect();
                let refs: Vec<&PolyMatrix> = parts.iter().collect();
                PolyMatrix::stack(&refs)
            }
        }
    }
}

/// Validation flags for a candidate p-encoder.
#[derive(Clone, Debug, Serialize)]
pub struct PEncoderReport {
    pub is_p_encoder: bool,
    pub delay_free: bool,
    pub reduced: bool,
    pub noncatastrophic: bool,
    pub minimal: bool,
    pub p_generator_sequence: bool,
    pub p_independent: bool,
    /// None when no code was supplied or the check was inconclusive
    pub spans_code: Option<bool>,
}

/// Noncatastrophicity of a leveled p-encoder: group rows by their p-power
/// content p^l; for each level the content projection must have full row
/// rank and the content minors must share no monic lift of a non-D
/// irreducible at modulus p^{r-l}.
pub fn is_noncatastrophic_leveled(e: &PolyMatrix) -> Result<bool> {
    let ring = e.ring();
    let r = ring.r();
    let mut by_level: Vec<Vec<Vec<Poly>>> = vec![Vec::new(); r as usize];
    for i in 0..e.rows() {
        if e.is_zero_row(i) {
            // infinite inputs on a zero row produce the zero output
            return Ok(false);
        }
        let level = e
            .row(i)
            .iter()
            .flat_map(|p| p.coeffs().iter().map(|&c| ring.val_p(c)))
            .min()
            .unwrap();
        let pe = ring.pow(ring.p(), level as u64);
        let content: Vec<Poly> = e
            .row(i)
            .iter()
            .map(|p| Poly::new(ring, p.coeffs().iter().map(|&c| c / pe).collect()))
            .collect();
        by_level[level as usize].push(content);
    }
    for (level, rows) in by_level.iter().enumerate() {
        if rows.is_empty() {
            continue;
        }
        let work = ring.reduced(r - level as u32);
        let content = PolyMatrix::from_rows(work, rows
            .iter()
            .map(|row| row.iter().map(|p| p.reduce_mod(work)).collect())
            .collect());
        if rows.len() > content.cols() {
            return Ok(false);
        }
        match content.minor_gcd_projected() {
            Err(Error::RankDeficientProjection) => return Ok(false),
            Err(e) => return Err(e),
            Ok(_) => {}
        }
        if find_common_lift_divisor(&content)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Span equality between a candidate encoder and a code generator matrix:
/// generator rows must lie in the polynomial span of the encoder, and each
/// encoder row times a unit-lowest-coefficient denominator must lie in the
/// polynomial span of the generator (torsion rows of a p-encoder live in
/// the Laurent span of the code, not necessarily its polynomial span).
pub fn code_span_certificate(
    encoder: &PolyMatrix,
    generator: &PolyMatrix,
) -> Option<SpanCertificate> {
    level_span_certificate(generator, encoder, 0, &[]).ok()
}

/// Validates the p-encoder flags for a candidate matrix, optionally
/// against the code it is claimed to present.
pub fn validate_p_encoder(e: &PolyMatrix, code: Option<&CodeSpec>) -> Result<PEncoderReport> {
    let vs = PVectorSet::from_matrix(e);
    let gen_outcome = is_p_generator_sequence(&vs);
    let (gen_ok, _cert) = match gen_outcome {
        GenSeqOutcome::Certified(c) => (true, Some(c)),
        _ => (false, None),
    };
    let independent = gen_ok && is_p_independent(&vs);
    let spans_code = match code {
        None => None,
        Some(spec) => Some(code_span_certificate(e, &spec.generator_matrix()).is_some()),
    };
    let is_p_encoder = gen_ok && independent && spans_code.unwrap_or(true);
    let delay_free = if e.rows() == 0 {
        false
    } else {
        constant_p_independence(&e.at_zero(), e.ring())
    };
    let lrc_ok = match e.lrc() {
        Ok(lrc) => constant_p_independence(&lrc, e.ring()),
        Err(_) => false,
    };
    let reduced = is_p_encoder && lrc_ok;
    let noncatastrophic = is_noncatastrophic_leveled(e)?;
    let minimal = is_p_encoder && delay_free && reduced && noncatastrophic;
    Ok(PEncoderReport {
        is_p_encoder,
        delay_free,
        reduced,
        noncatastrophic,
        minimal,
        p_generator_sequence: gen_ok,
        p_independent: independent,
        spans_code,
    })
}

/// Bidirectional polynomial-span containment between the rows of two
/// matrices (module spans over Z_{p^r}[D]).
pub fn spans_same_module(a: &PolyMatrix, b: &PolyMatrix) -> bool {
    let sa = PVectorSet::from_matrix(a);
    let sb = PVectorSet::from_matrix(b);
    sa.vectors().iter().all(|row| solve_escalating(row, &sb).is_some())
        && sb.vectors().iter().all(|row| solve_escalating(row, &sa).is_some())
}

/// Output of a synthesis run: the minimal p-encoder together with the
/// stacked pre-reduction matrix, the ladder evidence, and validation.
#[derive(Clone, Debug)]
pub struct Synthesis {
    pub encoder: PolyMatrix,
    pub stacked: PolyMatrix,
    pub ladders: Vec<GiLadder>,
    pub validation: PEncoderReport,
}

/// Minimal p-encoder for a free code: stack the p^i-scaled ladder levels
/// of a reduced-internal-degree encoder, then reduce to a reduced p-basis.
pub fn minimal_p_encoder_free(g: &PolyMatrix) -> Result<Synthesis> {
    let ring = g.ring();
    let (g0, _) = ridm_reduce(g)?;
    let ladder = build_gi_ladder(&g0)?;
    let parts: Vec<PolyMatrix> = ladder
        .matrices
        .iter()
        .enumerate()
        .map(|(i, gi)| gi.scale_const(ring.pow(ring.p(), i as u64)))
        .collect();
    let refs: Vec<&PolyMatrix> = parts.iter().collect();
    let stacked = PolyMatrix::stack(&refs);
    finish_synthesis(stacked, vec![ladder], g)
}

/// Minimal p-encoder for a decomposed code: cumulative component stacks
/// G^i are replaced by their level-i ladder matrices H^i, stacked with
/// p-powers, and reduced.
pub fn minimal_p_encoder_general(code: &CodeSpec) -> Result<Synthesis> {
    let ring = code.ring();
    let components = match code.presentation() {
        Presentation::Free(g) => return minimal_p_encoder_free(g),
        Presentation::Decomposed(cs) => cs,
    };
    let r = ring.r() as usize;
    let mut parts: Vec<PolyMatrix> = Vec::new();
    let mut ladders = Vec::new();
    for i in 0..r {
        let cumulative: Vec<&PolyMatrix> = components[..=i].iter().flatten().collect();
        if cumulative.is_empty() {
            continue;
        }
        let gi_stack = PolyMatrix::stack(&cumulative);
        let ladder = build_gi_ladder(&gi_stack)?;
        let hi = ladder.matrices[i].clone();
        ladders.push(ladder);
        parts.push(hi.scale_const(ring.pow(ring.p(), i as u64)));
    }
    let refs: Vec<&PolyMatrix> = parts.iter().collect();
    let stacked = PolyMatrix::stack(&refs);
    finish_synthesis(stacked, ladders, &code.generator_matrix())
}

fn finish_synthesis(
    stacked: PolyMatrix,
    ladders: Vec<GiLadder>,
    code_generator: &PolyMatrix,
) -> Result<Synthesis> {
    let vs = PVectorSet::from_matrix(&stacked);
    let (reduced, _log) = reduce_to_reduced_p_basis(&vs);
    let encoder = reduced.to_matrix();
    // the reduction must preserve the stacked module
    if !spans_same_module(&encoder, &stacked) {
        return Err(Error::InternalCheckFailed(
            "reduction changed the stacked module".into(),
        ));
    }
    let cert = is_p_generator_sequence(&reduced)
        .certificate()
        .ok_or_else(|| Error::InternalCheckFailed("synthesized stack lost the generator property".into()))?;
    // every code generator row must lie in the p-span of the encoder
    for row in code_generator.all_rows() {
        match pbasis::p_span_membership_escalating(&row, &reduced, &cert) {
            Membership::Member(_) => {}
            _ => {
                return Err(Error::InternalCheckFailed(
                    "code generator row escapes the synthesized p-span".into(),
                ))
            }
        }
    }
    let validation = validate_p_encoder(&encoder, None)?;
    Ok(Synthesis { encoder, stacked, ladders, validation })
}

/// A catastrophic witness over the ring: the field witness of the
/// projection, lifted digit-verbatim and scaled by p^{r-1}. Stream
/// weights at half and full horizon corroborate the algebraic claim.
#[derive(Clone, Debug, Serialize)]
pub struct RingWitness {
    pub input: Vec<RationalFn>,
    pub output: Vec<RationalFn>,
    pub denominator: Poly,
    pub input_weight_half: usize,
    pub input_weight_full: usize,
    pub output_weight_half: usize,
    pub output_weight_full: usize,
    pub output_stabilized: bool,
}

fn witness_stream_evidence(w: &mut RingWitness, horizon: usize) {
    let weight = |coords: &[RationalFn], h: usize| -> usize {
        coords
            .iter()
            .map(|c| crate::laurent::rational_expand(c, h.max(1)).weight())
            .sum()
    };
    w.input_weight_half = weight(&w.input, horizon / 2);
    w.input_weight_full = weight(&w.input, horizon);
    w.output_weight_half = weight(&w.output, horizon / 2);
    w.output_weight_full = weight(&w.output, horizon);
    w.output_stabilized = w.output_weight_half == w.output_weight_full;
}

pub fn catastrophic_witness_ring(g: &PolyMatrix) -> Result<Option<RingWitness>> {
    let ring = g.ring();
    if !is_catastrophic_ring(g)? {
        return Ok(None);
    }
    let field_witness = field_encoder::catastrophic_witness(&g.project())?
        .ok_or_else(|| Error::InternalCheckFailed("projection witness missing".into()))?;
    let scale = ring.pow(ring.p(), (ring.r() - 1) as u64);
    let input: Vec<RationalFn> = field_witness
        .input
        .iter()
        .map(|c| {
            lift_rational_verbatim(c, ring).map(|lifted| lifted.scale(scale))
        })
        .collect::<Result<_>>()?;
    let output = g.encode(&input);
    if !input.iter().any(|c| classify_weight(c) == WeightClass::Infinite) {
        return Err(Error::InternalCheckFailed("lifted witness lost infinite weight".into()));
    }
    if output.iter().any(|c| classify_weight(c) == WeightClass::Infinite) {
        return Err(Error::InternalCheckFailed("lifted witness output not finite".into()));
    }
    Ok(Some(RingWitness {
        input,
        output,
        denominator: field_witness.denominator.lift_verbatim(ring),
        input_weight_half: 0,
        input_weight_full: 0,
        output_weight_half: 0,
        output_weight_full: 0,
        output_stabilized: false,
    }))
}

/// Witness-absence smoke test: random digit input streams of the given
/// length and weight at least `min_weight` must all produce output weight
/// at least in_weight / (2 intdeg + 2). Falsifiable evidence, not proof.
#[derive(Clone, Debug, Serialize)]
pub struct SmokeReport {
    pub trials: usize,
    pub stream_len: usize,
    pub min_ratio_num: usize,
    pub min_ratio_den: usize,
    pub passed: bool,
}

pub fn witness_absence_smoke(
    e: &PolyMatrix,
    intdeg: usize,
    seed: u64,
    trials: usize,
    stream_len: usize,
) -> SmokeReport {
    let ring = e.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom = 2 * intdeg + 2;
    let min_weight = stream_len / 2;
    let mut passed = true;
    let mut worst: Option<(usize, usize)> = None;
    for _ in 0..trials {
        // random digit streams per row with combined weight >= min_weight
        let mut inputs: Vec<Poly>;
        loop {
            inputs = (0..e.rows())
                .map(|_| {
                    Poly::new(
                        ring,
                        (0..stream_len).map(|_| rng.gen_range(0..ring.p())).collect(),
                    )
                })
                .collect();
            let w: usize = inputs
                .iter()
                .map(|p| p.coeffs().iter().filter(|&&c| c != 0).count())
                .sum();
            if w >= min_weight {
                break;
            }
        }
        let in_weight: usize = inputs
            .iter()
            .map(|p| p.coeffs().iter().filter(|&&c| c != 0).count())
            .sum();
        let out = e.left_mul_poly_vec(&inputs);
        let out_weight: usize = out
            .iter()
            .map(|p| p.coeffs().iter().filter(|&&c| c != 0).count())
            .sum();
        if out_weight * denom < in_weight {
            passed = false;
        }
        let in_w = in_weight.max(1);
        let is_worse = match worst {
            None => true,
            Some((n, d)) => (out_weight as u128) * (d as u128) < (n as u128) * (in_w as u128),
        };
        if is_worse {
            worst = Some((out_weight, in_w));
        }
    }
    let (num, den) = worst.unwrap_or((0, 1));
    SmokeReport {
        trials,
        stream_len,
        min_ratio_num: num,
        min_ratio_den: den,
        passed,
    }
}

/// Options controlling a full analysis run.
#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub synthesize: bool,
    pub witness: bool,
    pub seed: u64,
    pub horizon: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { synthesize: false, witness: false, seed: 0xABCD_2024, horizon: 256 }
    }
}

/// The full classification result for one code.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub is_free: bool,
    pub delta_p: Option<Poly>,
    pub delta_p_factored: Option<String>,
    pub is_catastrophic: bool,
    pub input_intdeg: Option<usize>,
    pub ridm_intdeg: Option<usize>,
    pub minimal_p_encoder: Option<PolyMatrix>,
    pub encoder_validation: Option<PEncoderReport>,
    pub witness: Option<RingWitness>,
    pub smoke: Option<SmokeReport>,
    /// replayable audit trail: the elementary steps applied during the
    /// internal-degree reduction
    pub ridm_log: Vec<String>,
}

fn describe_step(step: &Step) -> String {
    match step {
        Step::RowAdd { target, source, coeff } => format!(
            "row[{target}] += ({}) * row[{source}]",
            crate::textio::rational_to_string(coeff)
        ),
        Step::RowScale { row, unit } => format!("row[{row}] *= {unit}"),
        Step::RowSwap { a, b } => format!("swap row[{a}], row[{b}]"),
        Step::RowScaleRat { row, factor } => format!(
            "row[{row}] *= {}",
            crate::textio::rational_to_string(factor)
        ),
        Step::RowDrop { row } => format!("drop row[{row}]"),
    }
}

/// Display form of a factorization, e.g. `(1+D)^2(2+D)`.
pub fn factored_display(f: &Poly) -> Result<String> {
    let fact = factor_fp(f)?;
    let mut out = String::new();
    if fact.unit != 1 {
        out.push_str(&fact.unit.to_string());
    }
    for (g, mult) in &fact.factors {
        out.push('(');
        out.push_str(&crate::textio::poly_to_string(g));
        out.push(')');
        if *mult > 1 {
            out.push_str(&format!("^{mult}"));
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    Ok(out)
}

/// End-to-end analysis of one code.
pub fn analyze(code: &CodeSpec, options: &AnalyzeOptions) -> Result<AnalysisReport> {
    let is_free = code.is_free();
    let generator = code.generator_matrix();
    let (delta_p, input_intdeg, ridm_intdeg, catastrophic, ridm_log) = if is_free {
        let g = match code.presentation() {
            Presentation::Free(g) => g.clone(),
            Presentation::Decomposed(cs) => cs[0].clone().unwrap(),
        };
        let input_intdeg = g.intdeg().ok();
        let (g_red, steps) = ridm_reduce(&g)?;
        let dp = g_red.minor_gcd_projected()?;
        let cat = !dp.is_unit_times_power_of_d();
        let log = steps.iter().map(describe_step).collect();
        (Some(dp), input_intdeg, g_red.intdeg().ok(), cat, log)
    } else {
        // non-free codes are catastrophic in the usual sense
        (None, None, None, true, Vec::new())
    };
    let delta_p_factored = match &delta_p {
        Some(dp) => Some(factored_display(dp)?),
        None => None,
    };
    let mut report = AnalysisReport {
        is_free,
        delta_p,
        delta_p_factored,
        is_catastrophic: catastrophic,
        input_intdeg,
        ridm_intdeg,
        minimal_p_encoder: None,
        encoder_validation: None,
        witness: None,
        smoke: None,
    };
    if options.witness && catastrophic && is_free {
        let g = match code.presentation() {
            Presentation::Free(g) => g.clone(),
            Presentation::Decomposed(cs) => cs[0].clone().unwrap(),
        };
        report.witness = catastrophic_witness_ring(&g)?;
    }
    if options.synthesize {
        let synthesis = minimal_p_encoder_general(code)?;
        let intdeg = report.ridm_intdeg.unwrap_or_else(|| {
            synthesis
                .encoder
                .row_degrees()
                .into_iter()
                .flatten()
                .max()
                .unwrap_or(0)
        });
        report.smoke = Some(witness_absence_smoke(
            &synthesis.encoder,
            intdeg,
            options.seed,
            200,
            64,
        ));
        report.encoder_validation = Some(synthesis.validation.clone());
        report.minimal_p_encoder = Some(synthesis.encoder);
        let _ = generator;
    }
    Ok(report)
}

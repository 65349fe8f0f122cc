//! p-linear algebra over Z_{p^r}[D]: p-linear combinations, p-span
//! membership, p-generator sequences, p-independence, and reduction to a
//! reduced p-basis.
//!
//! Digit-constrained questions reduce to exact linear algebra over Z_{p^r}:
//! for a certified p-generator sequence, p-span equals module span, so
//! membership is an ordinary bounded-degree linear solve whose solution is
//! then rewritten into digit coefficients using the certificate expansions
//! of p*v_i (the rewriting pushes excess strictly forward, so one pass
//! terminates). Independence reduces to kernel computations: a nontrivial
//! digit dependency exists iff, for some i, some kernel generator of
//! c*v_i = sum_{j>i} b_j v_j has c nonzero mod p.

use crate::error::{Error, Result};
use crate::linalg::{self, ZMat};
use crate::matrix::{PolyMatrix, RatMatrix, Step, TransformLog};
use crate::poly::Poly;
use crate::rational::RationalFn;
use crate::ring::RingCtx;

/// Ordered family of rows in Z_{p^r}[D]^n; order is significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PVectorSet {
    ring: RingCtx,
    n: usize,
    vectors: Vec<Vec<Poly>>,
}

impl PVectorSet {
    pub fn new(ring: RingCtx, n: usize, vectors: Vec<Vec<Poly>>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == n));
        PVectorSet { ring, n, vectors }
    }

    pub fn from_matrix(m: &PolyMatrix) -> Self {
        PVectorSet::new(m.ring(), m.cols(), m.all_rows())
    }

    pub fn ring(&self) -> RingCtx {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[Poly] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<Poly>] {
        &self.vectors
    }

    pub fn tail(&self, from: usize) -> PVectorSet {
        PVectorSet::new(self.ring, self.n, self.vectors[from..].to_vec())
    }

    pub fn to_matrix(&self) -> PolyMatrix {
        PolyMatrix::from_rows(self.ring, self.vectors.clone())
    }

    pub fn max_row_degree(&self) -> usize {
        self.vectors
            .iter()
            .flat_map(|v| v.iter().filter_map(|e| e.degree()))
            .max()
            .unwrap_or(0)
    }
}

/// True when every coefficient of the polynomial is a digit in {0,..,p-1}.
pub fn is_digit_poly(a: &Poly) -> bool {
    a.coeffs().iter().all(|&c| c < a.ring().p())
}

/// Exact p-linear combination sum a_j(D) v_j(D); every coefficient
/// polynomial must have digits in A.
pub fn p_linear_combination(coeffs: &[Poly], vs: &PVectorSet) -> Result<Vec<Poly>> {
    assert_eq!(coeffs.len(), vs.len());
    if coeffs.iter().any(|a| !is_digit_poly(a)) {
        return Err(Error::CoefficientOutOfA);
    }
    Ok(zlinear_combination(coeffs, vs))
}

pub fn zlinear_combination(coeffs: &[Poly], vs: &PVectorSet) -> Vec<Poly> {
    let mut acc = vec![Poly::zero(vs.ring); vs.n];
    for (a, v) in coeffs.iter().zip(vs.vectors()) {
        for (slot, e) in acc.iter_mut().zip(v) {
            *slot = slot.add(&a.mul(e));
        }
    }
    acc
}

/// Expansion of p*v_i as a digit combination of later rows: pairs of
/// (absolute row index, digit coefficient polynomial).
pub type RowExpansion = Vec<(usize, Poly)>;

/// Certificate that an ordered family is a p-generator sequence, optionally
/// extended with independence facts; replaying the expansions proves the
/// claimed kind.
#[derive(Clone, Debug)]
pub struct PBasisCertificate {
    pub expansions: Vec<RowExpansion>,
    pub p_independent: Option<bool>,
    pub lrc_constant_independent: Option<bool>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CertKind {
    GeneratorSequence,
    PBasis,
    ReducedPBasis,
}

impl PBasisCertificate {
    pub fn kind(&self) -> CertKind {
        match (self.p_independent, self.lrc_constant_independent) {
            (Some(true), Some(true)) => CertKind::ReducedPBasis,
            (Some(true), _) => CertKind::PBasis,
            _ => CertKind::GeneratorSequence,
        }
    }

    /// Re-verifies every expansion: p*v_i must equal the recorded digit
    /// combination of strictly later rows, and p*v_last must vanish.
    pub fn replay(&self, vs: &PVectorSet) -> bool {
        if self.expansions.len() != vs.len() {
            return false;
        }
        let ring = vs.ring();
        for (i, exp) in self.expansions.iter().enumerate() {
            let pv: Vec<Poly> = vs.vector(i).iter().map(|e| e.scale(ring.p())).collect();
            let mut acc = vec![Poly::zero(ring); vs.n()];
            for (l, a) in exp {
                if *l <= i || *l >= vs.len() || !is_digit_poly(a) {
                    return false;
                }
                for (slot, e) in acc.iter_mut().zip(vs.vector(*l)) {
                    *slot = slot.add(&a.mul(e));
                }
            }
            if acc != pv {
                return false;
            }
        }
        true
    }
}

/// Outcome of a bounded-degree module membership query.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// digit coefficients, one per row of the family
    Member(Vec<Poly>),
    /// definitively not in the module span (projection rank obstruction)
    NotMember,
    /// no solution within the degree bound; the caller may escalate
    Inconclusive,
}

/// Solves target = sum b_j v_j over Z_{p^r}[D] with deg b_j <= bound.
pub fn module_solve(target: &[Poly], vs: &PVectorSet, bound: usize) -> Option<Vec<Poly>> {
    let ring = vs.ring();
    let k = vs.len();
    if k == 0 {
        return if target.iter().all(|e| e.is_zero()) {
            Some(vec![])
        } else {
            None
        };
    }
    let deg_rows = vs.max_row_degree();
    let deg_target = target.iter().filter_map(|e| e.degree()).max().unwrap_or(0);
    let e_max = (deg_rows + bound).max(deg_target) + 1;
    let n = vs.n();
    let cols = k * (bound + 1);
    let rows = n * e_max;
    let mut a = ZMat::zero(ring, rows, cols);
    for j in 0..k {
        for d in 0..=bound {
            let col = j * (bound + 1) + d;
            for c in 0..n {
                let v = &vs.vector(j)[c];
                for e in d..e_max {
                    let coeff = v.coeff(e - d);
                    if coeff != 0 {
                        a.set(c * e_max + e, col, coeff);
                    }
                }
            }
        }
    }
    let mut b = vec![0u64; rows];
    for c in 0..n {
        for e in 0..e_max {
            b[c * e_max + e] = target[c].coeff(e);
        }
    }
    let sol = linalg::solve(&a, &b)?;
    let coeffs: Vec<Poly> = (0..k)
        .map(|j| {
            Poly::new(
                ring,
                sol.particular[j * (bound + 1)..(j + 1) * (bound + 1)].to_vec(),
            )
        })
        .collect();
    debug_assert_eq!(&zlinear_combination(&coeffs, vs), target);
    Some(coeffs)
}

/// Rank over F_p(D) of the projections; used as a definitive
/// non-membership test (membership projects onto the rational row space).
fn rational_rank(rows: &[Vec<Poly>], ring: RingCtx) -> usize {
    let mut work: Vec<Vec<RationalFn>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| RationalFn::from_poly(if ring.is_field() { e.clone() } else { e.project() }))
                .collect()
        })
        .collect();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut col = 0;
    while rank < work.len() && col < ncols {
        let pivot = (rank..work.len()).find(|&i| !work[i][col].is_zero());
        let Some(pivot) = pivot else {
            col += 1;
            continue;
        };
        work.swap(rank, pivot);
        let inv = work[rank][col].inv().expect("nonzero rational over a field");
        for j in col..ncols {
            work[rank][j] = work[rank][j].mul(&inv);
        }
        for i in 0..work.len() {
            if i != rank && !work[i][col].is_zero() {
                let c = work[i][col].clone();
                for j in col..ncols {
                    let v = work[i][j].sub(&c.mul(&work[rank][j]));
                    work[i][j] = v;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

fn projection_obstructs(target: &[Poly], vs: &PVectorSet) -> bool {
    let base = rational_rank(vs.vectors(), vs.ring());
    let mut extended: Vec<Vec<Poly>> = vs.vectors().to_vec();
    extended.push(target.to_vec());
    let ext = rational_rank(&extended, vs.ring());
    ext > base
}

/// digit-0 part of every coefficient (verbatim lift of the mod-p image)
fn digit0_poly(g: &Poly) -> Poly {
    Poly::new(g.ring(), g.coeffs().iter().map(|&c| c % g.ring().p()).collect())
}

/// (g - digit0(g)) / p on canonical representatives
fn excess_poly(g: &Poly) -> Poly {
    let p = g.ring().p();
    Poly::new(g.ring(), g.coeffs().iter().map(|&c| (c - c % p) / p).collect())
}

/// Rewrites an unconstrained Z_{p^r}[D]-combination of a p-generator
/// sequence into a digit combination with the same value. `expansions`
/// are the certificate rows for p*v_i. Excess flows strictly forward, so a
/// single pass over the rows terminates.
pub fn rewrite_to_digits(
    vs: &PVectorSet,
    expansions: &[RowExpansion],
    zcoeffs: &[Poly],
) -> Vec<Poly> {
    let k = vs.len();
    assert_eq!(zcoeffs.len(), k);
    let ring = vs.ring();
    let mut g: Vec<Poly> = zcoeffs.to_vec();
    let mut out = vec![Poly::zero(ring); k];
    for i in 0..k {
        out[i] = digit0_poly(&g[i]);
        let e = excess_poly(&g[i]);
        if e.is_zero() {
            continue;
        }
        // p*v_i = sum over expansions[i]; rows with an empty expansion have
        // p*v_i = 0 and the excess is annihilated
        for (l, a) in &expansions[i] {
            g[*l] = g[*l].add(&e.mul(a));
        }
    }
    debug_assert_eq!(
        zlinear_combination(&out, vs),
        zlinear_combination(zcoeffs, vs)
    );
    out
}

/// Outcome of testing the p-generator-sequence property.
#[derive(Clone, Debug)]
pub enum GenSeqOutcome {
    Certified(PBasisCertificate),
    /// definitively not a p-generator sequence
    No(String),
    /// the degree bound was exhausted without an expression
    Inconclusive,
}

impl GenSeqOutcome {
    pub fn certificate(self) -> Option<PBasisCertificate> {
        match self {
            GenSeqOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

/// Degree-bound escalation policy: start at the base bound and double,
/// stopping at eight times the start.
pub fn bound_ladder(base: usize) -> Vec<usize> {
    let b0 = base.max(1);
    vec![b0, 2 * b0, 4 * b0, 8 * b0]
}

/// Tests the p-generator-sequence property back to front, producing a
/// certificate with explicit digit expansions of every p*v_i over the tail.
pub fn is_p_generator_sequence(vs: &PVectorSet) -> GenSeqOutcome {
    let ring = vs.ring();
    let k = vs.len();
    let mut expansions: Vec<RowExpansion> = vec![vec![]; k];
    for i in (0..k).rev() {
        let pv: Vec<Poly> = vs.vector(i).iter().map(|e| e.scale(ring.p())).collect();
        if i == k - 1 {
            if pv.iter().all(|e| e.is_zero()) {
                continue;
            }
            return GenSeqOutcome::No(format!("p times the last row (index {i}) is nonzero"));
        }
        let tail = vs.tail(i + 1);
        let tail_expansions: Vec<RowExpansion> = expansions[i + 1..]
            .iter()
            .map(|exp| exp.iter().map(|(l, a)| (*l - (i + 1), a.clone())).collect())
            .collect();
        let mut found = None;
        for bound in bound_ladder(vs.max_row_degree().max(1)) {
            if let Some(z) = module_solve(&pv, &tail, bound) {
                found = Some(z);
                break;
            }
        }
        let Some(z) = found else {
            if projection_obstructs(&pv, &tail) {
                return GenSeqOutcome::No(format!(
                    "p times row {i} is outside the rational row space of the tail"
                ));
            }
            return GenSeqOutcome::Inconclusive;
        };
        let digits = rewrite_to_digits(&tail, &tail_expansions, &z);
        expansions[i] = digits
            .into_iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(t, a)| (i + 1 + t, a))
            .collect();
    }
    let cert = PBasisCertificate {
        expansions,
        p_independent: None,
        lrc_constant_independent: None,
    };
    debug_assert!(cert.replay(vs));
    GenSeqOutcome::Certified(cert)
}

/// p-span membership at an explicit degree bound. The family must be a
/// certified p-generator sequence (so its p-span equals its module span);
/// the returned coefficients are digit polynomials.
pub fn p_span_membership(
    target: &[Poly],
    vs: &PVectorSet,
    cert: &PBasisCertificate,
    bound: usize,
) -> Membership {
    match module_solve(target, vs, bound) {
        Some(z) => {
            let digits = rewrite_to_digits(vs, &cert.expansions, &z);
            debug_assert_eq!(&zlinear_combination(&digits, vs), target);
            Membership::Member(digits)
        }
        None => {
            if projection_obstructs(target, vs) {
                Membership::NotMember
            } else {
                Membership::Inconclusive
            }
        }
    }
}

/// Membership with the standard escalation ladder.
pub fn p_span_membership_escalating(
    target: &[Poly],
    vs: &PVectorSet,
    cert: &PBasisCertificate,
) -> Membership {
    let deg_t = target.iter().filter_map(|e| e.degree()).max().unwrap_or(0);
    let base = vs.max_row_degree().max(deg_t).max(1);
    for bound in bound_ladder(base) {
        match p_span_membership(target, vs, cert, bound) {
            Membership::Inconclusive => continue,
            other => return other,
        }
    }
    Membership::Inconclusive
}

/// p-linear independence of a p-generator sequence, decided at the degree
/// bound max_row_degree * k + 1: a nontrivial digit dependency exists iff
/// for some i the homogeneous system c v_i = sum_{j>i} b_j v_j has a
/// solution-module generator whose c-part is nonzero mod p.
pub fn is_p_independent(vs: &PVectorSet) -> bool {
    dependency_index(vs).is_none()
}

/// Least row index carrying a p-dependency, if any.
pub fn dependency_index(vs: &PVectorSet) -> Option<usize> {
    let ring = vs.ring();
    let k = vs.len();
    if k == 0 {
        return None;
    }
    let bound = vs.max_row_degree() * k + 1;
    for i in 0..k {
        let tail = vs.tail(i + 1);
        let n = vs.n();
        let deg_rows = vs.max_row_degree();
        let e_max = deg_rows + bound + 1;
        let kc = bound + 1;
        let cols = kc * (1 + tail.len());
        let rows = n * e_max;
        let mut a = ZMat::zero(ring, rows, cols);
        // c * v_i
        for d in 0..kc {
            for c in 0..n {
                let v = &vs.vector(i)[c];
                for e in d..e_max {
                    let coeff = v.coeff(e - d);
                    if coeff != 0 {
                        a.set(c * e_max + e, d, coeff);
                    }
                }
            }
        }
        // -b_j * v_j
        for (t, v) in tail.vectors().iter().enumerate() {
            for d in 0..kc {
                let col = kc * (1 + t) + d;
                for c in 0..n {
                    for e in d..e_max {
                        let coeff = v[c].coeff(e - d);
                        if coeff != 0 {
                            a.set(c * e_max + e, col, ring.neg(coeff));
                        }
                    }
                }
            }
        }
        for gen in linalg::kernel(&a) {
            if gen[..kc].iter().any(|&c| ring.is_unit(c)) {
                return Some(i);
            }
        }
    }
    None
}

/// Searches for a nontrivial scalar digit dependency sum a_j u_j = 0 with
/// a_j in A: any such dependency lies in the mod-p kernel of the projected
/// system, so the (finite) kernel is enumerated and each lift verified at
/// the full modulus. Returns the first dependency in enumeration order.
pub fn constant_p_dependency(rows: &[Vec<u64>], ring: RingCtx) -> Option<Vec<u64>> {
    let k = rows.len();
    if k == 0 {
        return None;
    }
    let n = rows[0].len();
    let fp = ring.residue_field();
    let mut a = ZMat::zero(fp, n, k);
    for (j, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            a.set(c, j, v % ring.p());
        }
    }
    let gens = linalg::kernel(&a);
    if gens.is_empty() {
        return None;
    }
    let dim = gens.len();
    let p = ring.p();
    let total = p.checked_pow(dim as u32).expect("kernel enumeration fits u64");
    for t in 1..total {
        let mut digits = vec![0u64; k];
        let mut idx = t;
        for g in gens.iter() {
            let scale = idx % p;
            idx /= p;
            if scale != 0 {
                for (d, &gv) in digits.iter_mut().zip(g) {
                    *d = (*d + scale * gv) % p;
                }
            }
        }
        if digits.iter().all(|&d| d == 0) {
            continue;
        }
        let ok = (0..n).all(|c| {
            let mut acc = 0u64;
            for (j, &d) in digits.iter().enumerate() {
                acc = ring.add(acc, ring.mul(d, rows[j][c]));
            }
            acc == 0
        });
        if ok {
            return Some(digits);
        }
    }
    None
}

/// Exact constant-level p-independence of numeric vectors.
pub fn constant_p_independence(rows: &[Vec<u64>], ring: RingCtx) -> bool {
    constant_p_dependency(rows, ring).is_none()
}

/// Row reduction to a reduced p-basis: while the leading-row-coefficient
/// vectors admit a scalar digit dependency, the dependent row of largest
/// index among those of maximal degree delta is replaced by the deficient
/// combination sum a_j D^{delta-delta_j} v_j, whose degree is strictly
/// smaller; zero rows (and rows whose replacement vanishes) are dropped.
/// Terminates because the total degree strictly drops.
pub fn reduce_to_reduced_p_basis(vs: &PVectorSet) -> (PVectorSet, TransformLog) {
    let ring = vs.ring();
    let mut rows: Vec<Vec<Poly>> = vs.vectors().to_vec();
    let mut log = TransformLog::new(ring, vs.len());
    loop {
        if let Some(z) = rows.iter().position(|r| r.iter().all(|e| e.is_zero())) {
            rows.remove(z);
            log.push(Step::RowDrop { row: z });
            continue;
        }
        if rows.is_empty() {
            break;
        }
        let degs: Vec<usize> = rows
            .iter()
            .map(|r| r.iter().filter_map(|e| e.degree()).max().unwrap())
            .collect();
        let lrc: Vec<Vec<u64>> = rows
            .iter()
            .zip(&degs)
            .map(|(r, &d)| r.iter().map(|e| e.coeff(d)).collect())
            .collect();
        let Some(dep) = constant_p_dependency(&lrc, ring) else {
            break;
        };
        let delta = dep
            .iter()
            .zip(&degs)
            .filter(|(&a, _)| a != 0)
            .map(|(_, &d)| d)
            .max()
            .unwrap();
        let target = dep
            .iter()
            .zip(&degs)
            .enumerate()
            .filter(|(_, (&a, &d))| a != 0 && d == delta)
            .map(|(j, _)| j)
            .max()
            .unwrap();
        let mut w = vec![Poly::zero(ring); vs.n()];
        for (j, (&a, &dj)) in dep.iter().zip(&degs).enumerate() {
            if a == 0 {
                continue;
            }
            let coeff = Poly::monomial(ring, a, delta - dj);
            for (slot, e) in w.iter_mut().zip(&rows[j]) {
                *slot = slot.add(&coeff.mul(e));
            }
            if j == target {
                log.push(Step::RowScale { row: j, unit: a });
            } else {
                log.push(Step::RowAdd {
                    target,
                    source: j,
                    coeff: RationalFn::from_poly(coeff),
                });
            }
        }
        debug_assert!(w
            .iter()
            .filter_map(|e| e.degree())
            .max()
            .map_or(true, |d| d < delta));
        rows[target] = w;
    }
    (PVectorSet::new(ring, vs.n(), rows), log)
}

/// The stack (G; pG; ...; p^{r-1}G), a p-encoder for the row span of G.
pub fn hat_stack(g: &PolyMatrix) -> PolyMatrix {
    let ring = g.ring();
    let mut parts: Vec<PolyMatrix> = Vec::with_capacity(ring.r() as usize);
    let mut scale = 1u64;
    for _ in 0..ring.r() {
        parts.push(g.scale_const(scale));
        scale = ring.mul(scale, ring.p());
    }
    let refs: Vec<&PolyMatrix> = parts.iter().collect();
    PolyMatrix::stack(&refs)
}

/// Bidirectional module-span equality through the membership oracle.
/// Returns the digit certificates (a-rows in span b, b-rows in span a).
pub fn span_equal_certificates(
    a: &PVectorSet,
    cert_a: &PBasisCertificate,
    b: &PVectorSet,
    cert_b: &PBasisCertificate,
) -> Option<(Vec<Vec<Poly>>, Vec<Vec<Poly>>)> {
    let mut a_in_b = Vec::new();
    for row in a.vectors() {
        match p_span_membership_escalating(row, b, cert_b) {
            Membership::Member(c) => a_in_b.push(c),
            _ => return None,
        }
    }
    let mut b_in_a = Vec::new();
    for row in b.vectors() {
        match p_span_membership_escalating(row, a, cert_a) {
            Membership::Member(c) => b_in_a.push(c),
            _ => return None,
        }
    }
    Some((a_in_b, b_in_a))
}

/// Replay helper: a shape-preserving log applied to the original rows must
/// reproduce the reduced rows. Shape-changing logs (row drops) are audited
/// through span certificates instead.
pub fn replay_matches(log: &TransformLog, original: &PolyMatrix, reduced: &PolyMatrix) -> bool {
    if log.steps().iter().any(|s| matches!(s, Step::RowDrop { .. })) {
        return true;
    }
    let m: RatMatrix = log.replay();
    match crate::matrix::apply_left(&m, original, true).and_then(|p| p.to_poly_matrix()) {
        Ok(p) => p == *reduced,
        Err(_) => false,
    }
}

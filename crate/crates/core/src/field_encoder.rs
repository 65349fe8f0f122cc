//! Full-row-rank polynomial matrices over F_p: basicity, catastrophicity,
//! concentration of the minor gcd into a single row, and catastrophic
//! input witnesses.
//!
//! Concentration walks the irreducible factors of the minor gcd. For each
//! factor P (once per multiplicity) the current matrix is evaluated at a
//! root of P in GF(p^deg P); a left null vector of that constant matrix is
//! normalized at its highest nonzero coordinate and the corresponding row
//! is zeroed using row additions only, whose determinant is identically 1
//! after substituting D back for the root. The designated row is then
//! divisible by P and is divided out; the last factor instead scales the
//! row by gcd/P so the final product carries the whole gcd in one row and
//! the accumulated transform keeps a constant determinant.

use crate::error::{Error, Result};
use crate::factor::{factor_fp, Factorization};
use crate::laurent::{classify_weight, WeightClass};
use crate::matrix::{apply_left, PolyMatrix, RatMatrix, Step, TransformLog};
use crate::poly::Poly;
use crate::rational::RationalFn;
use crate::ring::{ExtElem, ExtField};

/// True iff the minor gcd is 1, i.e. the matrix has a polynomial right
/// inverse.
pub fn is_basic(g: &PolyMatrix) -> Result<bool> {
    Ok(g.minor_gcd()?.is_one())
}

/// True iff the minor gcd is a power of D (up to a unit).
pub fn is_noncatastrophic_field(g: &PolyMatrix) -> Result<bool> {
    Ok(g.minor_gcd()?.is_unit_times_power_of_d())
}

/// Result of concentrating the minor gcd into one row.
#[derive(Clone, Debug)]
pub struct ConcentrationResult {
    /// monic gcd of the maximal minors of the input
    pub delta: Poly,
    /// accumulated left transform; det is a nonzero constant
    pub m: RatMatrix,
    /// row of the product divisible by `delta`
    pub row_index: usize,
    /// M G, polynomial, with the designated row divisible by `delta`
    pub product: PolyMatrix,
    /// product with the designated row divided by `delta`; basic
    pub quotient: PolyMatrix,
    pub log: TransformLog,
}

fn ext_poly(field: &ExtField, ring: crate::ring::RingCtx, elem: &ExtElem) -> Poly {
    let _ = field;
    Poly::new(ring, elem.clone())
}

/// Left null vector of a constant matrix over GF(p^m): Gaussian
/// elimination tracking the left transform; the transform row of the first
/// zero row of the echelon form is returned.
pub(crate) fn left_null_vector(field: &ExtField, rows: &[Vec<ExtElem>]) -> Option<Vec<ExtElem>> {
    let k = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut work: Vec<Vec<ExtElem>> = rows.to_vec();
    let mut t: Vec<Vec<ExtElem>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        if rank == k {
            break;
        }
        let Some(pivot) = (rank..k).find(|&i| !field.is_zero(&work[i][col])) else {
            continue;
        };
        work.swap(rank, pivot);
        t.swap(rank, pivot);
        let inv = field.inv(&work[rank][col]).expect("nonzero pivot");
        for j in 0..n {
            work[rank][j] = field.mul(&work[rank][j], &inv);
        }
        for j in 0..k {
            t[rank][j] = field.mul(&t[rank][j], &inv);
        }
        for i in 0..k {
            if i != rank && !field.is_zero(&work[i][col]) {
                let c = work[i][col].clone();
                for j in 0..n {
                    let sub = field.mul(&c, &work[rank][j]);
                    work[i][j] = field.sub(&work[i][j], &sub);
                }
                for j in 0..k {
                    let sub = field.mul(&c, &t[rank][j]);
                    t[i][j] = field.sub(&t[i][j], &sub);
                }
            }
        }
        rank += 1;
    }
    // first zero row of the echelon form
    let zero_row = (0..k).find(|&i| work[i].iter().all(|e| field.is_zero(e)))?;
    Some(t[zero_row].clone())
}

/// Concentrates the minor gcd of a full-row-rank matrix over F_p into a
/// single row using a constant-determinant rational transform.
pub fn concentrate_delta(g: &PolyMatrix) -> Result<ConcentrationResult> {
    let ring = g.ring();
    assert!(ring.is_field());
    let delta = g.minor_gcd()?;
    let k = g.rows();
    let mut log = TransformLog::new(ring, k);
    if delta.is_constant() {
        let m = RatMatrix::identity(ring, k);
        return Ok(ConcentrationResult {
            delta,
            m,
            row_index: 0,
            product: g.clone(),
            quotient: g.clone(),
            log,
        });
    }
    let fact: Factorization = factor_fp(&delta)?;
    // one pass per multiplicity, in factor enumeration order
    let mut sequence: Vec<Poly> = Vec::new();
    for (f, mult) in &fact.factors {
        for _ in 0..*mult {
            sequence.push(f.clone());
        }
    }
    let mut current = g.clone();
    let mut row_index = 0usize;
    let total = sequence.len();
    for (idx, p_factor) in sequence.iter().enumerate() {
        let is_last = idx + 1 == total;
        let field = ExtField::new(ring.p(), p_factor.coeffs().to_vec())?;
        let alpha = field.alpha();
        let eval: Vec<Vec<ExtElem>> = (0..k)
            .map(|i| {
                (0..current.cols())
                    .map(|j| current.at(i, j).eval_ext(&field, &alpha))
                    .collect()
            })
            .collect();
        let v = left_null_vector(&field, &eval).ok_or_else(|| {
            Error::InternalCheckFailed(format!(
                "no left null vector at a root of {:?}",
                p_factor
            ))
        })?;
        // normalize at the highest nonzero coordinate
        let pivot = (0..k)
            .rev()
            .find(|&i| !field.is_zero(&v[i]))
            .ok_or_else(|| Error::InternalCheckFailed("zero null vector".into()))?;
        let scale = field.inv(&v[pivot])?;
        let v: Vec<ExtElem> = v.iter().map(|c| field.mul(c, &scale)).collect();
        // transvections into the pivot row; coordinates of GF(p^m) elements
        // become polynomials of degree < m
        for j in 0..k {
            if j == pivot || field.is_zero(&v[j]) {
                continue;
            }
            let coeff = ext_poly(&field, ring, &v[j]);
            log.push(Step::RowAdd {
                target: pivot,
                source: j,
                coeff: RationalFn::from_poly(coeff.clone()),
            });
            for c in 0..current.cols() {
                let val = current.at(pivot, c).add(&coeff.mul(current.at(j, c)));
                current.set(pivot, c, val);
            }
        }
        // the pivot row vanishes at the root, hence is divisible by the
        // (minimal) polynomial of the root
        let mut quotient_row = Vec::with_capacity(current.cols());
        for c in 0..current.cols() {
            quotient_row.push(current.at(pivot, c).div_exact(p_factor).map_err(|_| {
                Error::InternalCheckFailed(format!(
                    "pivot row entry not divisible by {:?}",
                    p_factor
                ))
            })?);
        }
        if is_last {
            // scale the row by delta/P so the product carries the full gcd
            let scale_fn =
                RationalFn::new(delta.clone(), p_factor.clone()).expect("monic denominator");
            log.push(Step::RowScaleRat { row: pivot, factor: scale_fn });
            for (c, q) in quotient_row.into_iter().enumerate() {
                current.set(pivot, c, q.mul(&delta));
            }
            row_index = pivot;
        } else {
            let scale_fn = RationalFn::new(Poly::one(ring), p_factor.clone())
                .expect("monic denominator");
            log.push(Step::RowScaleRat { row: pivot, factor: scale_fn });
            for (c, q) in quotient_row.into_iter().enumerate() {
                current.set(pivot, c, q);
            }
        }
    }
    let product = current;
    let mut quotient = product.clone();
    for c in 0..quotient.cols() {
        let q = quotient.at(row_index, c).div_exact(&delta)?;
        quotient.set(row_index, c, q);
    }
    let m = log.replay();
    // internal verification: replay equals the product, determinant is a
    // nonzero constant, quotient is basic
    let replayed = apply_left(&m, g, true)?.to_poly_matrix()?;
    if replayed != product {
        return Err(Error::InternalCheckFailed("transform replay mismatch".into()));
    }
    let det = m.det();
    let det_ok = !det.is_zero()
        && det
            .as_polynomial()
            .map_or(det.num().is_constant() && det.den().is_constant(), |p| {
                p.is_constant()
            });
    if !det_ok {
        return Err(Error::InternalCheckFailed(
            "accumulated determinant is not a nonzero constant".into(),
        ));
    }
    if !is_basic(&quotient)? {
        return Err(Error::InternalCheckFailed("quotient is not basic".into()));
    }
    Ok(ConcentrationResult { delta, m, row_index, product, quotient, log })
}

/// A catastrophic input witness: an infinite-weight rational input row
/// whose encoded output has finite weight.
#[derive(Clone, Debug)]
pub struct Witness {
    pub input: Vec<RationalFn>,
    pub output: Vec<RationalFn>,
    /// the irreducible divisor of the minor gcd used as the denominator
    pub denominator: Poly,
    pub row_index: usize,
}

/// Row vector times a rational matrix.
pub fn rat_vec_mul(u: &[RationalFn], m: &RatMatrix) -> Vec<RationalFn> {
    assert_eq!(u.len(), m.rows());
    (0..m.cols())
        .map(|j| {
            let mut acc = RationalFn::zero(m.ring());
            for (i, coeff) in u.iter().enumerate() {
                acc = acc.add(&coeff.mul(m.at(i, j)));
            }
            acc
        })
        .collect()
}

/// Builds a catastrophic witness when the matrix is catastrophic: the
/// input is (1/Q) times the concentrated row of the transform, where Q is
/// the last non-D irreducible factor of the minor gcd in enumeration
/// order. Returns `None` for noncatastrophic matrices.
pub fn catastrophic_witness(g: &PolyMatrix) -> Result<Option<Witness>> {
    let delta = g.minor_gcd()?;
    if delta.is_unit_times_power_of_d() || delta.is_constant() {
        return Ok(None);
    }
    let conc = concentrate_delta(g)?;
    let q = factor_fp(&delta)?
        .non_d_factors()
        .pop()
        .expect("a non-power-of-D gcd has a non-D factor");
    let q_inv = RationalFn::new(Poly::one(g.ring()), q.clone())?;
    let mut w = vec![RationalFn::zero(g.ring()); g.rows()];
    w[conc.row_index] = q_inv;
    let input = rat_vec_mul(&w, &conc.m);
    let output = g.encode(&input);
    // the witness must be infinite-weight with a finite-weight output
    if !input.iter().any(|c| classify_weight(c) == WeightClass::Infinite) {
        return Err(Error::InternalCheckFailed(
            "constructed witness has finite weight".into(),
        ));
    }
    if output.iter().any(|c| classify_weight(c) == WeightClass::Infinite) {
        return Err(Error::InternalCheckFailed(
            "constructed witness output has infinite weight".into(),
        ));
    }
    Ok(Some(Witness { input, output, denominator: q, row_index: conc.row_index }))
}

/// Verifies the decomposition guaranteed for finite-weight outputs of
/// catastrophic matrices: for a transform with determinant c D^alpha whose
/// product with G has a row divisible by the minor gcd, u M^{-1} must have
/// exactly one infinite-weight coordinate, at a concentrated index, of the
/// form P/(D^l Q) with Q dividing the gcd.
pub fn verify_witness_decomposition(
    g: &PolyMatrix,
    u: &[RationalFn],
    m: &RatMatrix,
) -> Result<bool> {
    let delta = g.minor_gcd()?;
    let det = m.det();
    if det.is_zero() {
        return Err(Error::HypothesisViolation("singular transform".into()));
    }
    // det must be c D^alpha: over a field the reduced form has a constant
    // denominator and a monomial numerator
    if !det.den().is_constant() || !det.num().is_unit_times_power_of_d() {
        return Err(Error::HypothesisViolation(
            "determinant is not a unit times a power of D".into(),
        ));
    }
    let prod = apply_left(m, g, false)?;
    let prod_poly = prod
        .to_poly_matrix()
        .map_err(|_| Error::HypothesisViolation("M G is not polynomial".into()))?;
    let concentrated: Vec<usize> = (0..prod_poly.rows())
        .filter(|&i| {
            (0..prod_poly.cols()).all(|j| prod_poly.at(i, j).div_exact(&delta).is_ok())
        })
        .collect();
    if concentrated.is_empty() {
        return Err(Error::HypothesisViolation(
            "no row of M G is divisible by the minor gcd".into(),
        ));
    }
    let m_inv = m.inverse()?;
    let w = rat_vec_mul(u, &m_inv);
    let infinite: Vec<usize> = w
        .iter()
        .enumerate()
        .filter(|(_, c)| classify_weight(c) == WeightClass::Infinite)
        .map(|(i, _)| i)
        .collect();
    if infinite.len() != 1 {
        return Ok(false);
    }
    let j = infinite[0];
    if !concentrated.contains(&j) {
        return Ok(false);
    }
    // reduced denominator must be D^l times a divisor of the gcd
    let coord = &w[j];
    let den = coord.den();
    let l = den.d_valuation().unwrap();
    let q_part = den.shr_d(l);
    if q_part.is_constant() {
        // infinite weight with constant denominator is impossible over a
        // field after reduction
        return Ok(false);
    }
    Ok(delta.div_exact(&q_part.monic()?).is_ok())
}

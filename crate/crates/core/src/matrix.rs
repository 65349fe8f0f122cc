//! Matrices over Z_{p^r}[D] and F_p[D], their maximal minors, the
//! gcd-of-minors invariants, leading-row-coefficient matrices, and tracked
//! left transformations with rational entries.
//!
//! Minors are computed by cofactor expansion with memoization over column
//! subsets; Z_{p^r} has zero divisors, so division-based elimination is
//! never used here.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{gcd_monic, Poly};
use crate::rational::RationalFn;
use crate::ring::RingCtx;

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: RingCtx,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl std::fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "PolyMatrix {}x{} over {:?} [", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", crate::textio::row_to_string(self.row(i)))?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for PolyMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&crate::textio::row_to_string(self.row(i)))?;
        }
        seq.end()
    }
}

impl PolyMatrix {
    pub fn new(ring: RingCtx, rows: usize, cols: usize, entries: Vec<Poly>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        assert!(entries.iter().all(|e| e.ring() == ring));
        PolyMatrix { ring, rows, cols, entries }
    }

    pub fn from_rows(ring: RingCtx, rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row);
        }
        PolyMatrix::new(ring, r, c, entries)
    }

    /// Test/CLI helper: rows in the shared bracketed text syntax.
    pub fn parse(ring: RingCtx, rows: &[&str]) -> Result<Self> {
        let parsed: Result<Vec<Vec<Poly>>> = rows
            .iter()
            .map(|r| crate::textio::parse_row(ring, r))
            .collect();
        let parsed = parsed?;
        let c = parsed.first().map(|r| r.len()).unwrap_or(0);
        if parsed.iter().any(|r| r.len() != c) {
            return Err(Error::Semantic("ragged matrix rows".into()));
        }
        Ok(PolyMatrix::from_rows(ring, parsed))
    }

    pub fn identity(ring: RingCtx, n: usize) -> Self {
        let mut entries = vec![Poly::zero(ring); n * n];
        for i in 0..n {
            entries[i * n + i] = Poly::one(ring);
        }
        PolyMatrix::new(ring, n, n, entries)
    }

    pub fn ring(&self) -> RingCtx {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        assert_eq!(v.ring(), self.ring);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Poly> {
        self.row(i).to_vec()
    }

    pub fn all_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|e| e.is_zero())
    }

    pub fn project(&self) -> PolyMatrix {
        let fp = self.ring.residue_field();
        PolyMatrix::new(
            fp,
            self.rows,
            self.cols,
            self.entries.iter().map(|e| e.project()).collect(),
        )
    }

    pub fn reduce_mod(&self, target: RingCtx) -> PolyMatrix {
        PolyMatrix::new(
            target,
            self.rows,
            self.cols,
            self.entries.iter().map(|e| e.reduce_mod(target)).collect(),
        )
    }

    pub fn lift_verbatim(&self, target: RingCtx) -> PolyMatrix {
        PolyMatrix::new(
            target,
            self.rows,
            self.cols,
            self.entries.iter().map(|e| e.lift_verbatim(target)).collect(),
        )
    }

    pub fn scale_const(&self, c: u64) -> PolyMatrix {
        PolyMatrix::new(
            self.ring,
            self.rows,
            self.cols,
            self.entries.iter().map(|e| e.scale(c)).collect(),
        )
    }

    pub fn stack(parts: &[&PolyMatrix]) -> PolyMatrix {
        let ring = parts[0].ring;
        let cols = parts[0].cols;
        let mut entries = Vec::new();
        let mut rows = 0;
        for part in parts {
            assert_eq!(part.cols, cols);
            assert_eq!(part.ring, ring);
            entries.extend(part.entries.iter().cloned());
            rows += part.rows;
        }
        PolyMatrix::new(ring, rows, cols, entries)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(self.ring);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
                }
                entries.push(acc);
            }
        }
        PolyMatrix::new(self.ring, self.rows, other.cols, entries)
    }

    /// Row vector of polynomials times this matrix.
    pub fn left_mul_poly_vec(&self, u: &[Poly]) -> Vec<Poly> {
        assert_eq!(u.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = Poly::zero(self.ring);
                for (i, coeff) in u.iter().enumerate() {
                    acc = acc.add(&coeff.mul(self.at(i, j)));
                }
                acc
            })
            .collect()
    }

    /// Row vector of rational functions times this matrix: the exact
    /// encoding map u |-> u G.
    pub fn encode(&self, u: &[RationalFn]) -> Vec<RationalFn> {
        assert_eq!(u.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = RationalFn::zero(self.ring);
                for (i, coeff) in u.iter().enumerate() {
                    acc = acc.add(&coeff.mul_poly(self.at(i, j)));
                }
                acc
            })
            .collect()
    }

    /// All maximal minors keyed by the (sorted) column subset, computed by
    /// cofactor expansion with memoization over column subsets.
    pub fn minors(&self) -> Result<BTreeMap<Vec<usize>, Poly>> {
        if self.rows > self.cols {
            return Err(Error::ShapeError(format!(
                "need k <= n for maximal minors, got {}x{}",
                self.rows, self.cols
            )));
        }
        let k = self.rows;
        // level j: determinants of (j+1)x(j+1) submatrices on rows 0..=j
        let mut memo: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
        for j in 0..self.cols {
            memo.insert(vec![j], self.at(0, j).clone());
        }
        for level in 1..k {
            let mut next: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
            for subset in subsets(self.cols, level + 1) {
                let mut acc = Poly::zero(self.ring);
                for (t, &col) in subset.iter().enumerate() {
                    let mut sub = subset.clone();
                    sub.remove(t);
                    let cof = memo.get(&sub).expect("memoized lower minor");
                    let term = self.at(level, col).mul(cof);
                    // sign (-1)^{level + t}: level row index parity with t
                    if (level + t) % 2 == 0 {
                        acc = acc.add(&term);
                    } else {
                        acc = acc.sub(&term);
                    }
                }
                next.insert(subset, acc);
            }
            memo = next;
        }
        if k == 0 {
            memo.clear();
            memo.insert(vec![], Poly::one(self.ring));
        }
        Ok(memo)
    }

    /// Monic gcd of the nonzero maximal minors over F_p.
    pub fn minor_gcd(&self) -> Result<Poly> {
        assert!(self.ring.is_field());
        let minors: Vec<Poly> = self.minors()?.into_values().collect();
        gcd_monic(&minors).map_err(|e| match e {
            Error::AllZero => Error::RankDeficient,
            other => other,
        })
    }

    /// The invariant Delta_p: monic gcd of the nonzero maximal minors of
    /// the mod-p projection.
    pub fn minor_gcd_projected(&self) -> Result<Poly> {
        self.project().minor_gcd().map_err(|e| match e {
            Error::RankDeficient => Error::RankDeficientProjection,
            other => other,
        })
    }

    pub fn has_full_projected_rank(&self) -> bool {
        self.minor_gcd_projected().is_ok()
    }

    pub fn row_degrees(&self) -> Vec<Option<usize>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().filter_map(|e| e.degree()).max())
            .collect()
    }

    /// Sum of row degrees; `None` when some row is zero.
    pub fn extdeg(&self) -> Option<usize> {
        self.row_degrees().into_iter().sum()
    }

    /// Maximum degree among nonzero maximal minors.
    pub fn intdeg(&self) -> Result<usize> {
        let minors = self.minors()?;
        minors
            .values()
            .filter_map(|m| m.degree())
            .max()
            .ok_or(Error::RankDeficient)
    }

    /// Leading row coefficient matrix: row i holds the coefficient of
    /// D^{deg row_i} in each entry.
    pub fn lrc(&self) -> Result<Vec<Vec<u64>>> {
        let degs = self.row_degrees();
        let mut out = Vec::with_capacity(self.rows);
        for (i, d) in degs.iter().enumerate() {
            let d = d.ok_or(Error::ZeroRow(i))?;
            out.push(self.row(i).iter().map(|e| e.coeff(d)).collect());
        }
        Ok(out)
    }

    /// Constant matrix G(0).
    pub fn at_zero(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.coeff(0)).collect())
            .collect()
    }

    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::ShapeError("determinant of a non-square matrix".into()));
        }
        let key: Vec<usize> = (0..self.cols).collect();
        Ok(self.minors()?.remove(&key).unwrap())
    }

    /// det M a unit of Z_{p^r}[D], equivalently the projected determinant is
    /// a nonzero constant of F_p.
    pub fn is_unimodular(&self) -> bool {
        match self.det() {
            Ok(d) => d.is_unit_poly(),
            Err(_) => false,
        }
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| RationalFn::from_poly(e.clone())).collect(),
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Matrix with rational-function entries, used for left transforms.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    ring: RingCtx,
    rows: usize,
    cols: usize,
    entries: Vec<RationalFn>,
}

impl RatMatrix {
    pub fn identity(ring: RingCtx, n: usize) -> Self {
        let mut entries = vec![RationalFn::zero(ring); n * n];
        for i in 0..n {
            entries[i * n + i] = RationalFn::one(ring);
        }
        RatMatrix { ring, rows: n, cols: n, entries }
    }

    pub fn from_rows(ring: RingCtx, rows: Vec<Vec<RationalFn>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            entries.extend(row);
        }
        RatMatrix { ring, rows: r, cols: c, entries }
    }

    pub fn ring(&self) -> RingCtx {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &RationalFn {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFn) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RationalFn] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RationalFn::zero(self.ring);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
                }
                entries.push(acc);
            }
        }
        RatMatrix { ring: self.ring, rows: self.rows, cols: other.cols, entries }
    }

    pub fn mul_poly_matrix(&self, g: &PolyMatrix) -> RatMatrix {
        self.mul(&g.to_rational())
    }

    pub fn scale_const(&self, c: u64) -> RatMatrix {
        RatMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Asserts polynomiality of every entry and clears denominators; this is
    /// the explicit checkpoint where a rational product is claimed to be a
    /// polynomial matrix.
    pub fn to_poly_matrix(&self) -> Result<PolyMatrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.as_polynomial().ok_or(Error::NonPolynomialResult)?);
        }
        Ok(PolyMatrix::new(self.ring, self.rows, self.cols, entries))
    }

    pub fn det(&self) -> RationalFn {
        assert_eq!(self.rows, self.cols);
        det_rec(self, &(0..self.cols).collect::<Vec<_>>(), 0)
    }

    /// Inverse via the adjugate; the determinant's numerator must have a
    /// unit lowest coefficient (it does whenever det is c D^alpha or a
    /// nonzero constant over a field).
    pub fn inverse(&self) -> Result<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let d = self.det();
        let d_inv = d.inv().map_err(|_| Error::HypothesisViolation("determinant not invertible".into()))?;
        let mut entries = vec![RationalFn::zero(self.ring); n * n];
        for i in 0..n {
            for j in 0..n {
                // cofactor C_{j,i} for the (i,j) entry of the inverse
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let rowset: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let minor = det_on(self, &rowset, &cols);
                let sign_neg = (i + j) % 2 == 1;
                let cof = if sign_neg { minor.neg() } else { minor };
                entries[i * n + j] = cof.mul(&d_inv);
            }
        }
        Ok(RatMatrix { ring: self.ring, rows: n, cols: n, entries })
    }
}

fn det_rec(m: &RatMatrix, cols: &[usize], row: usize) -> RationalFn {
    if cols.is_empty() {
        return RationalFn::one(m.ring);
    }
    let mut acc = RationalFn::zero(m.ring);
    for (t, &c) in cols.iter().enumerate() {
        let e = m.at(row, c);
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sub = det_rec(m, &rest, row + 1);
        let term = e.mul(&sub);
        if t % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}

fn det_on(m: &RatMatrix, rows: &[usize], cols: &[usize]) -> RationalFn {
    assert_eq!(rows.len(), cols.len());
    if rows.is_empty() {
        return RationalFn::one(m.ring);
    }
    let mut acc = RationalFn::zero(m.ring);
    for (t, &c) in cols.iter().enumerate() {
        let e = m.at(rows[0], c);
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sub = det_on(m, &rows[1..], &rest);
        let term = e.mul(&sub);
        if t % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}

/// Applies a rational left transform to a polynomial matrix. When
/// `require_polynomial` is set, any non-polynomial entry in the product is
/// an error.
pub fn apply_left(m: &RatMatrix, g: &PolyMatrix, require_polynomial: bool) -> Result<RatMatrix> {
    if m.cols() != g.rows() {
        return Err(Error::ShapeError(format!(
            "left transform is {}x{} but the matrix has {} rows",
            m.rows(),
            m.cols(),
            g.rows()
        )));
    }
    let prod = m.mul_poly_matrix(g);
    if require_polynomial {
        prod.to_poly_matrix()?;
    }
    Ok(prod)
}

/// One elementary left operation, with enough information to replay it.
#[derive(Clone, Debug)]
pub enum Step {
    /// row[target] += coeff * row[source]
    RowAdd { target: usize, source: usize, coeff: RationalFn },
    /// row scaled by a unit constant
    RowScale { row: usize, unit: u64 },
    RowSwap { a: usize, b: usize },
    /// row scaled by a rational factor (e.g. 1/P when dividing a row)
    RowScaleRat { row: usize, factor: RationalFn },
    /// row removed (kept for audit; replay drops the row from products)
    RowDrop { row: usize },
}

/// The sequence of invertible left operations applied during a
/// construction. Replaying the steps on the identity yields the
/// accumulated left matrix; `net_det` is the product of the step
/// determinants.
#[derive(Clone, Debug)]
pub struct TransformLog {
    ring: RingCtx,
    dim: usize,
    steps: Vec<Step>,
}

impl TransformLog {
    pub fn new(ring: RingCtx, dim: usize) -> Self {
        TransformLog { ring, dim, steps: Vec::new() }
    }

    pub fn ring(&self) -> RingCtx {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    /// Accumulated left matrix: the steps applied, in order, to the
    /// identity. `RowDrop` steps are ignored here (they change shape and
    /// are only meaningful in reduction logs).
    pub fn replay(&self) -> RatMatrix {
        let mut m = RatMatrix::identity(self.ring, self.dim);
        for step in &self.steps {
            apply_step(&mut m, step);
        }
        m
    }

    pub fn net_det(&self) -> RationalFn {
        let mut acc = RationalFn::one(self.ring);
        for step in &self.steps {
            match step {
                Step::RowAdd { .. } | Step::RowDrop { .. } => {}
                Step::RowScale { unit, .. } => {
                    acc = acc.scale(*unit);
                }
                Step::RowSwap { a, b } if a != b => {
                    acc = acc.neg();
                }
                Step::RowSwap { .. } => {}
                Step::RowScaleRat { factor, .. } => {
                    acc = acc.mul(factor);
                }
            }
        }
        acc
    }
}

pub fn apply_step(m: &mut RatMatrix, step: &Step) {
    match step {
        Step::RowAdd { target, source, coeff } => {
            for j in 0..m.cols() {
                let v = m.at(*target, j).add(&coeff.mul(m.at(*source, j)));
                m.set(*target, j, v);
            }
        }
        Step::RowScale { row, unit } => {
            for j in 0..m.cols() {
                let v = m.at(*row, j).scale(*unit);
                m.set(*row, j, v);
            }
        }
        Step::RowSwap { a, b } => {
            for j in 0..m.cols() {
                let x = m.at(*a, j).clone();
                let y = m.at(*b, j).clone();
                m.set(*a, j, y);
                m.set(*b, j, x);
            }
        }
        Step::RowScaleRat { row, factor } => {
            for j in 0..m.cols() {
                let v = m.at(*row, j).mul(factor);
                m.set(*row, j, v);
            }
        }
        Step::RowDrop { .. } => {}
    }
}

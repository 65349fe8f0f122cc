//! Dense univariate polynomials over Z_{p^r} (and F_p as the r = 1 case).
//!
//! Coefficients are stored low-to-high with no trailing zeros, so the zero
//! polynomial is the empty sequence and `degree()` is `None` for it.

use crate::error::{Error, Result};
use crate::ring::{ExtElem, ExtField, RingCtx};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: RingCtx,
    coeffs: Vec<u64>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", crate::textio::poly_to_string(self))
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&crate::textio::poly_to_string(self))
    }
}

impl Poly {
    pub fn new(ring: RingCtx, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= ring.modulus();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { ring, coeffs }
    }

    pub fn zero(ring: RingCtx) -> Self {
        Poly { ring, coeffs: vec![] }
    }

    pub fn one(ring: RingCtx) -> Self {
        Poly::new(ring, vec![1])
    }

    pub fn constant(ring: RingCtx, c: u64) -> Self {
        Poly::new(ring, vec![c])
    }

    /// c * D^k
    pub fn monomial(ring: RingCtx, c: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly::new(ring, coeffs)
    }

    pub fn ring(&self) -> RingCtx {
        self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// True when some coefficient is a unit, i.e. the mod-p projection is
    /// nonzero.
    pub fn is_regular(&self) -> bool {
        self.coeffs.iter().any(|&c| self.ring.is_unit(c))
    }

    /// True when the polynomial is a unit of Z_{p^r}[D]: unit constant term
    /// and every other coefficient nilpotent.
    pub fn is_unit_poly(&self) -> bool {
        !self.coeffs.is_empty()
            && self.ring.is_unit(self.coeffs[0])
            && self.coeffs[1..].iter().all(|&c| !self.ring.is_unit(c))
    }

    /// True iff the polynomial is c * D^l with c a unit (or the constant
    /// unit for l = 0).
    pub fn is_unit_times_power_of_d(&self) -> bool {
        match self.degree() {
            None => false,
            Some(d) => {
                self.ring.is_unit(self.coeffs[d]) && self.coeffs[..d].iter().all(|&c| c == 0)
            }
        }
    }

    /// Entrywise projection into F_p[D].
    pub fn project(&self) -> Poly {
        let fp = self.ring.residue_field();
        Poly::new(fp, self.coeffs.iter().map(|&c| self.ring.project(c)).collect())
    }

    /// Reinterprets the canonical representatives in the ring Z_{p^m}.
    pub fn reduce_mod(&self, target: RingCtx) -> Poly {
        Poly::new(target, self.coeffs.clone())
    }

    /// Lifts the canonical representatives verbatim into a larger ring
    /// ("zero high digits").
    pub fn lift_verbatim(&self, target: RingCtx) -> Poly {
        Poly::new(target, self.coeffs.clone())
    }

    /// Exponent of the largest power of D dividing the polynomial
    /// (`None` for zero).
    pub fn d_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// Divides by D^k; panics if the low coefficients are not zero.
    pub fn shr_d(&self, k: usize) -> Poly {
        assert!(self.coeffs.iter().take(k).all(|&c| c == 0));
        Poly::new(self.ring, self.coeffs.iter().skip(k).copied().collect())
    }

    pub fn shl_d(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly::new(self.ring, coeffs)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.ring, other.ring);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ring.add(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(self.ring, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        assert_eq!(self.ring, other.ring);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ring.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::new(self.ring, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.ring, self.coeffs.iter().map(|&c| self.ring.neg(c)).collect())
    }

    pub fn scale(&self, c: u64) -> Poly {
        Poly::new(self.ring, self.coeffs.iter().map(|&x| self.ring.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.ring, other.ring);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ring);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = self.ring.add(coeffs[i + j], self.ring.mul(a, b));
            }
        }
        Poly::new(self.ring, coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one(self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division a = q b + rem with deg rem < deg b. The divisor
    /// must be nonzero with a unit leading coefficient (over a field this is
    /// any nonzero divisor).
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        assert_eq!(self.ring, b.ring);
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !self.ring.is_unit(b.leading()) {
            return Err(Error::NonUnitLeading);
        }
        let lead_inv = self.ring.inv(b.leading())?;
        let db = b.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut q = vec![0u64; self.coeffs.len().saturating_sub(db)];
        while rem.len() > db {
            let shift = rem.len() - 1 - db;
            let c = self.ring.mul(*rem.last().unwrap(), lead_inv);
            if c != 0 {
                q[shift] = c;
                for (i, &bc) in b.coeffs.iter().enumerate() {
                    rem[shift + i] = self.ring.sub(rem[shift + i], self.ring.mul(c, bc));
                }
            }
            debug_assert_eq!(*rem.last().unwrap(), 0);
            rem.pop();
        }
        Ok((Poly::new(self.ring, q), Poly::new(self.ring, rem)))
    }

    /// Exact division; errors when the remainder is nonzero.
    pub fn div_exact(&self, b: &Poly) -> Result<Poly> {
        let (q, rem) = self.divmod(b)?;
        if rem.is_zero() {
            Ok(q)
        } else {
            Err(Error::InternalCheckFailed(format!(
                "inexact division, remainder {:?}",
                rem
            )))
        }
    }

    /// Evaluation at a ring element.
    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = self.ring.add(self.ring.mul(acc, x), c);
        }
        acc
    }

    /// Evaluation of an F_p[D] polynomial at an extension-field element.
    pub fn eval_ext(&self, field: &ExtField, x: &ExtElem) -> ExtElem {
        assert!(self.ring.is_field() && self.ring.p() == field.p());
        let mut acc = field.zero();
        for &c in self.coeffs.iter().rev() {
            acc = field.mul(&acc, x);
            acc = field.add(&acc, &field.from_base(c));
        }
        acc
    }

    /// Normalizes to a monic associate over a field.
    pub fn monic(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = self.ring.inv(self.leading())?;
        Ok(self.scale(inv))
    }
}

/// Monic gcd of all nonzero members of a family of polynomials over F_p.
/// Zero entries are skipped; an all-zero family is an error.
pub fn gcd_monic(polys: &[Poly]) -> Result<Poly> {
    let mut acc: Option<Poly> = None;
    for q in polys.iter().filter(|q| !q.is_zero()) {
        assert!(q.ring().is_field());
        acc = Some(match acc {
            None => q.clone(),
            Some(g) => gcd2(&g, q)?,
        });
    }
    acc.map(|g| g.monic()).transpose()?.ok_or(Error::AllZero)
}

fn gcd2(a: &Poly, b: &Poly) -> Result<Poly> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let (_, rem) = a.divmod(&b)?;
        a = std::mem::replace(&mut b, rem);
    }
    Ok(a)
}

/// Extended Euclid over F_p[D]: returns (g, s, t) with s a + t b = g, g monic.
pub fn xgcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    let ring = a.ring();
    assert!(ring.is_field());
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(ring), Poly::zero(ring));
    let (mut t0, mut t1) = (Poly::zero(ring), Poly::one(ring));
    while !r1.is_zero() {
        let (q, rem) = r0.divmod(&r1)?;
        r0 = std::mem::replace(&mut r1, rem);
        let ns = s0.sub(&q.mul(&s1));
        s0 = std::mem::replace(&mut s1, ns);
        let nt = t0.sub(&q.mul(&t1));
        t0 = std::mem::replace(&mut t1, nt);
    }
    if r0.is_zero() {
        return Err(Error::AllZero);
    }
    let c = ring.inv(r0.leading())?;
    Ok((r0.scale(c), s0.scale(c), t0.scale(c)))
}

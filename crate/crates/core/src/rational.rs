//! Rational functions p(D)/q(D) over Z_{p^r} where the lowest-degree
//! coefficient of q is a unit. These are exactly the fractions that embed
//! into the Laurent-series ring Z_{p^r}((D)); denominators may carry a
//! power of D, which shows up as a pole (negative start exponent) on
//! expansion.
//!
//! Equality is cross-multiplication: p/q = p1/q1 iff p q1 = p1 q. Over a
//! field the representation is kept reduced (gcd cancelled, monic
//! denominator); over a proper chain ring fractions are stored unreduced
//! apart from cancelling common powers of D and unit-constant denominators.

use crate::error::{Error, Result};
use crate::poly::{gcd_monic, Poly};
use crate::ring::RingCtx;

#[derive(Clone)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl std::fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", crate::textio::rational_to_string(self))
    }
}

impl serde::Serialize for RationalFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&crate::textio::rational_to_string(self))
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RationalFn {}

/// Lowest-degree nonzero coefficient must be a unit of the ring.
fn check_denominator(den: &Poly) -> Result<()> {
    match den.d_valuation() {
        None => Err(Error::DivisionByZero),
        Some(v) => {
            if den.ring().is_unit(den.coeff(v)) {
                Ok(())
            } else {
                Err(Error::NonUnitDenominator)
            }
        }
    }
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        assert_eq!(num.ring(), den.ring());
        check_denominator(&den)?;
        let mut r = RationalFn { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(num: Poly) -> Self {
        let one = Poly::one(num.ring());
        RationalFn { num, den: one }
    }

    pub fn zero(ring: RingCtx) -> Self {
        RationalFn::from_poly(Poly::zero(ring))
    }

    pub fn one(ring: RingCtx) -> Self {
        RationalFn::from_poly(Poly::one(ring))
    }

    pub fn ring(&self) -> RingCtx {
        self.num.ring()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        let ring = self.ring();
        if self.num.is_zero() {
            self.den = Poly::one(ring);
            return;
        }
        // cancel common powers of D
        let vn = self.num.d_valuation().unwrap();
        let vd = self.den.d_valuation().unwrap();
        let v = vn.min(vd);
        if v > 0 {
            self.num = self.num.shr_d(v);
            self.den = self.den.shr_d(v);
        }
        if ring.is_field() {
            // reduce by the gcd and make the denominator monic
            let g = gcd_monic(&[self.num.clone(), self.den.clone()]).unwrap();
            if !g.is_one() {
                self.num = self.num.div_exact(&g).unwrap();
                self.den = self.den.div_exact(&g).unwrap();
            }
            let c = ring.inv(self.den.leading()).unwrap();
            self.num = self.num.scale(c);
            self.den = self.den.scale(c);
        } else if self.den.is_constant() {
            if let Ok(inv) = ring.inv(self.den.coeff(0)) {
                self.num = self.num.scale(inv);
                self.den = Poly::one(ring);
            }
        }
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalFn::new(num, den).expect("denominator product keeps a unit lowest coefficient")
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        let num = self.num.mul(&other.num);
        let den = self.den.mul(&other.den);
        RationalFn::new(num, den).expect("denominator product keeps a unit lowest coefficient")
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFn {
        RationalFn::new(self.num.mul(p), self.den.clone()).unwrap()
    }

    pub fn scale(&self, c: u64) -> RationalFn {
        RationalFn::new(self.num.scale(c), self.den.clone()).unwrap()
    }

    /// Reciprocal; the numerator must itself have a unit lowest coefficient.
    pub fn inv(&self) -> Result<RationalFn> {
        check_denominator(&self.num)?;
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    /// Exact polynomial quotient when the denominator divides the numerator
    /// in Z_{p^r}[D] up to the denominator's D-power; `None` otherwise.
    pub fn as_polynomial(&self) -> Option<Poly> {
        if self.num.is_zero() {
            return Some(self.num.clone());
        }
        let vd = self.den.d_valuation().unwrap();
        if self.num.d_valuation().unwrap() < vd {
            return None;
        }
        let num = self.num.shr_d(vd);
        let den0 = self.den.shr_d(vd);
        series_quotient_exact(&num, &den0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.as_polynomial().is_some()
    }

    /// Weight classification: `true` means the expansion has finitely many
    /// nonzero coefficients, i.e. the fraction is a Laurent polynomial.
    /// Decided on exact divisibility of the numerator by the non-D part of
    /// the denominator.
    pub fn has_finite_weight(&self) -> bool {
        if self.num.is_zero() {
            return true;
        }
        let vd = self.den.d_valuation().unwrap();
        let den0 = self.den.shr_d(vd);
        series_quotient_exact(&self.num, &den0).is_some()
    }

    /// Exact Laurent coefficients for exponents `lo..hi`.
    pub fn coeff_window(&self, lo: i64, hi: i64) -> Vec<u64> {
        assert!(lo <= hi);
        let n = (hi - lo) as usize;
        if self.num.is_zero() {
            return vec![0; n];
        }
        let ring = self.ring();
        let vd = self.den.d_valuation().unwrap() as i64;
        let den0 = self.den.shr_d(vd as usize);
        // f = num / (D^vd * den0): coefficient of D^e in f equals the
        // coefficient of D^(e+vd) in the power series num/den0.
        let need = hi + vd; // exclusive upper exponent in the series
        if need <= 0 {
            return vec![0; n];
        }
        let series = series_prefix(&self.num, &den0, need as usize);
        (lo..hi)
            .map(|e| {
                let idx = e + vd;
                if idx < 0 {
                    0
                } else {
                    series.get(idx as usize).copied().unwrap_or(0)
                }
            })
            .map(|c| c % ring.modulus())
            .collect()
    }
}

/// First `n` coefficients of the power series f / g where g(0) is a unit.
fn series_prefix(f: &Poly, g: &Poly, n: usize) -> Vec<u64> {
    let ring = f.ring();
    let c0_inv = ring.inv(g.coeff(0)).expect("series division needs a unit constant term");
    let mut out = vec![0u64; n];
    for k in 0..n {
        // g0*out[k] = f[k] - sum_{j>=1} g[j]*out[k-j]
        let mut acc = f.coeff(k);
        for j in 1..=k.min(g.degree().unwrap_or(0)) {
            acc = ring.sub(acc, ring.mul(g.coeff(j), out[k - j]));
        }
        out[k] = ring.mul(acc, c0_inv);
    }
    out
}

/// Exact quotient f / g in Z_{p^r}[D] for g with unit constant term, or
/// `None` when g does not divide f. The quotient degree is bounded by
/// deg f + (r-1) deg g via the monic-times-unit decomposition of g.
pub(crate) fn series_quotient_exact(f: &Poly, g: &Poly) -> Option<Poly> {
    if f.is_zero() {
        return Some(f.clone());
    }
    let ring = f.ring();
    let bound = f.degree().unwrap()
        + (ring.r() as usize - 1) * g.degree().unwrap_or(0)
        + 1;
    let series = series_prefix(f, g, bound + g.degree().unwrap_or(0) + 1);
    let mut coeffs = series;
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    if coeffs.len() > bound {
        return None;
    }
    let h = Poly::new(ring, coeffs);
    if h.mul(g) == *f {
        Some(h)
    } else {
        None
    }
}

/// Divisibility of f by g in Z_{p^r}[D] for regular g (unit somewhere).
/// Handles non-unit-leading divisors by factoring out the D-valuation and
/// running the power-series criterion.
pub fn divides_in_ring(g: &Poly, f: &Poly) -> bool {
    if f.is_zero() {
        return true;
    }
    if g.is_zero() {
        return false;
    }
    let vg = g.d_valuation().unwrap();
    match f.d_valuation() {
        Some(vf) if vf >= vg => {}
        _ => return false,
    }
    let g0 = g.shr_d(vg);
    if !g0.ring().is_unit(g0.coeff(0)) {
        // non-regular-constant case: fall back to monic division if possible
        if g0.ring().is_unit(g0.leading()) {
            return f.divmod(&g0).map_or(false, |(_, rem)| rem.is_zero());
        }
        return false;
    }
    series_quotient_exact(&f.shr_d(vg.min(f.d_valuation().unwrap())), &g0).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_poly;

    fn p(ring: RingCtx, s: &str) -> Poly {
        parse_poly(ring, s).unwrap()
    }

    #[test]
    fn field_reduction() {
        let f3 = RingCtx::field(3).unwrap();
        // (2 + D^2) / (2 + D) reduces to (1 + D) times a unit
        let r = RationalFn::new(p(f3, "2+D^2"), p(f3, "2+D")).unwrap();
        assert!(r.den().is_one());
        assert_eq!(r.num(), &p(f3, "1+D"));
    }

    #[test]
    fn cross_multiplication_equality() {
        let f2 = RingCtx::field(2).unwrap();
        let a = RationalFn::new(p(f2, "1+D"), p(f2, "1+D+D^2")).unwrap();
        let b = RationalFn::new(p(f2, "1+D^2"), p(f2, "1+D^3")).unwrap();
        // (1+D)/(1+D+D^2) vs (1+D)^2/((1+D)(1+D+D^2))
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_non_unit_lowest_coefficient() {
        let z4 = RingCtx::new(2, 2).unwrap();
        let err = RationalFn::new(p(z4, "1"), p(z4, "2+2D")).unwrap_err();
        assert_eq!(err, Error::NonUnitDenominator);
        // D^2 has unit lowest coefficient 1, so 1/D^2 is legal
        assert!(RationalFn::new(p(z4, "1"), p(z4, "D^2")).is_ok());
    }

    #[test]
    fn polynomial_detection_over_ring() {
        let z16 = RingCtx::new(2, 4).unwrap();
        // (2+3D)(1+D) / (1+D) is polynomial
        let num = p(z16, "2+3D").mul(&p(z16, "1+D"));
        let r = RationalFn::new(num, p(z16, "1+D")).unwrap();
        assert_eq!(r.as_polynomial().unwrap(), p(z16, "2+3D"));
        let s = RationalFn::new(p(z16, "9+D"), p(z16, "1+D")).unwrap();
        assert!(s.as_polynomial().is_none());
    }

    #[test]
    fn unit_poly_divides_one() {
        let z4 = RingCtx::new(2, 2).unwrap();
        // (1+2D) is a unit of Z_4[D]; 1/(1+2D) = 1+2D exactly
        let r = RationalFn::new(p(z4, "1"), p(z4, "1+2D")).unwrap();
        assert_eq!(r.as_polynomial().unwrap(), p(z4, "1+2D"));
    }

    #[test]
    fn window_of_geometric_series() {
        let z3 = RingCtx::field(3).unwrap();
        let r = RationalFn::new(p(z3, "1"), p(z3, "2+D")).unwrap();
        assert_eq!(r.coeff_window(0, 4), vec![2, 2, 2, 2]);
        assert!(!r.has_finite_weight());
    }

    #[test]
    fn window_with_pole() {
        let f2 = RingCtx::field(2).unwrap();
        let r = RationalFn::new(p(f2, "1"), p(f2, "D^2")).unwrap();
        assert_eq!(r.coeff_window(-3, 2), vec![0, 1, 0, 0, 0]);
        assert!(r.has_finite_weight());
    }

    #[test]
    fn classify_examples() {
        let f2 = RingCtx::field(2).unwrap();
        let infinite = RationalFn::new(p(f2, "1"), p(f2, "1+D+D^2")).unwrap();
        assert!(!infinite.has_finite_weight());
        let z3 = RingCtx::field(3).unwrap();
        let w = RationalFn::new(p(z3, "1"), p(z3, "2+D")).unwrap();
        let count = w.coeff_window(0, 100).iter().filter(|&&c| c != 0).count();
        assert_eq!(count, 100);
    }

    #[test]
    fn linearity_of_expansion() {
        let z9 = RingCtx::new(3, 2).unwrap();
        let a = RationalFn::new(p(z9, "1+4D"), p(z9, "1+3D")).unwrap();
        let b = RationalFn::new(p(z9, "2"), p(z9, "2+D")).unwrap();
        let sum = a.add(&b);
        let wa = a.coeff_window(0, 24);
        let wb = b.coeff_window(0, 24);
        let ws = sum.coeff_window(0, 24);
        for i in 0..24 {
            assert_eq!(ws[i], z9.add(wa[i], wb[i]));
        }
    }
}

//! Truncated Laurent windows: the empirical side of catastrophicity.
//!
//! A window is an explicit start exponent plus a finite coefficient run, so
//! fractions with D-power denominators (poles) are representable. All
//! weight claims carry the window they were measured on.

use crate::rational::RationalFn;
use crate::ring::RingCtx;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentWindow {
    pub ring: RingCtx,
    /// exponent of the first stored coefficient
    pub start: i64,
    pub coeffs: Vec<u64>,
}

impl LaurentWindow {
    pub fn horizon(&self) -> usize {
        self.coeffs.len()
    }

    /// Number of nonzero coefficients within the window.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coeff_at(&self, e: i64) -> u64 {
        if e < self.start {
            return 0;
        }
        self.coeffs.get((e - self.start) as usize).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &LaurentWindow) -> LaurentWindow {
        assert_eq!(self.ring, other.ring);
        let start = self.start.min(other.start);
        let end = (self.start + self.coeffs.len() as i64).max(other.start + other.coeffs.len() as i64);
        let coeffs = (start..end)
            .map(|e| self.ring.add(self.coeff_at(e), other.coeff_at(e)))
            .collect();
        LaurentWindow { ring: self.ring, start, coeffs }
    }
}

/// Weight classification of a rational function, decided algebraically.
#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum WeightClass {
    Finite,
    Infinite,
}

/// Expands a rational function to a window of `horizon` coefficients
/// starting at its lowest possible exponent (0 when there is no pole).
pub fn rational_expand(f: &RationalFn, horizon: usize) -> LaurentWindow {
    assert!(horizon >= 1);
    let start = match (f.num().d_valuation(), f.den().d_valuation()) {
        (Some(vn), Some(vd)) => (vn as i64 - vd as i64).min(0),
        _ => 0,
    };
    let coeffs = f.coeff_window(start, start + horizon as i64);
    LaurentWindow { ring: f.ring(), start, coeffs }
}

/// Finite iff the fraction is a Laurent polynomial, i.e. the non-D part of
/// the denominator divides the numerator exactly.
pub fn classify_weight(f: &RationalFn) -> WeightClass {
    if f.has_finite_weight() {
        WeightClass::Finite
    } else {
        WeightClass::Infinite
    }
}

/// Weight of each coordinate at two horizons plus a stabilization verdict.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StreamReport {
    pub half_horizon: usize,
    pub horizon: usize,
    pub weight_at_half: usize,
    pub weight_at_full: usize,
    pub stabilized: bool,
}

/// Measures one rational coordinate at horizon/2 and horizon.
pub fn stream_report(f: &RationalFn, horizon: usize) -> StreamReport {
    let half = (horizon / 2).max(1);
    let w_half = rational_expand(f, half).weight();
    let w_full = rational_expand(f, horizon).weight();
    StreamReport {
        half_horizon: half,
        horizon,
        weight_at_half: w_half,
        weight_at_full: w_full,
        stabilized: w_half == w_full,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::textio::{parse_poly, parse_rational};

    #[test]
    fn expand_inverse_recurrence() {
        let z3 = RingCtx::field(3).unwrap();
        let f = parse_rational(z3, "1/(2+D)").unwrap();
        let w = rational_expand(&f, 4);
        assert_eq!(w.start, 0);
        assert_eq!(w.coeffs, vec![2, 2, 2, 2]);
        // multiplying back: (2+D) * (2+2D+2D^2+2D^3) = 1 + 2 D^4 truncated
        let den = parse_poly(z3, "2+D").unwrap();
        let prod = Poly::new(z3, w.coeffs.clone()).mul(&den);
        for k in 0..4 {
            assert_eq!(prod.coeff(k), if k == 0 { 1 } else { 0 });
        }
    }

    #[test]
    fn expand_polynomial_is_itself() {
        let z16 = RingCtx::new(2, 4).unwrap();
        let f = parse_rational(z16, "3+5D^2").unwrap();
        let w = rational_expand(&f, 6);
        assert_eq!(w.coeffs, vec![3, 0, 5, 0, 0, 0]);
    }

    #[test]
    fn weights() {
        let f2 = RingCtx::field(2).unwrap();
        let w = rational_expand(&parse_rational(f2, "1+D").unwrap(), 8);
        assert_eq!(w.weight(), 2);
        let zero = rational_expand(&RationalFn::zero(f2), 5);
        assert_eq!(zero.weight(), 0);
        let z3 = RingCtx::field(3).unwrap();
        let g = rational_expand(&parse_rational(z3, "1/(2+D)").unwrap(), 50);
        assert_eq!(g.weight(), 50);
    }

    #[test]
    fn classification() {
        let f2 = RingCtx::field(2).unwrap();
        assert_eq!(
            classify_weight(&parse_rational(f2, "1/D^2").unwrap()),
            WeightClass::Finite
        );
        assert_eq!(
            classify_weight(&parse_rational(f2, "1/(1+D+D^2)").unwrap()),
            WeightClass::Infinite
        );
        let z3 = RingCtx::field(3).unwrap();
        assert_eq!(
            classify_weight(&parse_rational(z3, "1/(2+D)").unwrap()),
            WeightClass::Infinite
        );
    }

    #[test]
    fn finite_weight_stabilizes() {
        let f2 = RingCtx::field(2).unwrap();
        // (1+D^3)/D^2 has finite weight; weight stabilizes across horizons
        let f = parse_rational(f2, "(1+D^3)/D^2").unwrap();
        assert_eq!(classify_weight(&f), WeightClass::Finite);
        let h = 16;
        assert_eq!(
            rational_expand(&f, h).weight(),
            rational_expand(&f, 2 * h).weight()
        );
        let rep = stream_report(&f, 2 * h);
        assert!(rep.stabilized);
    }

    #[test]
    fn pole_window_start() {
        let f2 = RingCtx::field(2).unwrap();
        let f = parse_rational(f2, "1/D^2").unwrap();
        let w = rational_expand(&f, 4);
        assert_eq!(w.start, -2);
        assert_eq!(w.coeffs, vec![1, 0, 0, 0]);
    }
}

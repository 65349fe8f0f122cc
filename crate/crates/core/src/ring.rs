//! Exact arithmetic in the chain ring Z_{p^r}, its residue field F_p, and
//! finite extensions GF(p^m) presented by an explicit minimal polynomial.
//!
//! Elements of Z_{p^r} are canonical residues in `[0, p^r)` stored as `u64`;
//! every operation reduces eagerly so equality and hashing are structural.
//! The context [`RingCtx`] is a small `Copy` value carried alongside.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The ring Z_{p^r} with p prime and r >= 1.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingCtx {
    p: u64,
    r: u32,
    modulus: u64,
}

impl std::fmt::Debug for RingCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z({}^{})", self.p, self.r)
    }
}

impl RingCtx {
    /// Builds Z_{p^r}. Rejects composite p and moduli that would overflow
    /// exact u64 products (p^r must fit in 31 bits).
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r < 1 {
            return Err(Error::BadExponent);
        }
        let mut modulus: u64 = 1;
        for _ in 0..r {
            modulus = modulus
                .checked_mul(p)
                .filter(|&m| m <= (1 << 31))
                .ok_or(Error::ModulusTooLarge(p, r))?;
        }
        Ok(RingCtx { p, r, modulus })
    }

    /// The prime field F_p, i.e. Z_{p^1}.
    pub fn field(p: u64) -> Result<Self> {
        RingCtx::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_field(&self) -> bool {
        self.r == 1
    }

    /// The residue field F_p of this ring.
    pub fn residue_field(&self) -> RingCtx {
        RingCtx { p: self.p, r: 1, modulus: self.p }
    }

    /// Z_{p^m} for 1 <= m <= r, the ring this one surjects onto.
    pub fn reduced(&self, m: u32) -> RingCtx {
        assert!(m >= 1 && m <= self.r);
        let mut modulus = 1u64;
        for _ in 0..m {
            modulus *= self.p;
        }
        RingCtx { p: self.p, r: m, modulus }
    }

    pub fn norm(&self, a: i128) -> u64 {
        a.rem_euclid(self.modulus as i128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b % self.modulus) % self.modulus
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.modulus
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    /// Multiplicative inverse of a unit; errors with `NotAUnit` when p | a.
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = a % self.modulus;
        if !self.is_unit(a) {
            return Err(Error::NotAUnit(a));
        }
        // extended Euclid over the integers
        let (mut t, mut new_t): (i128, i128) = (0, 1);
        let (mut rem, mut new_rem): (i128, i128) = (self.modulus as i128, a as i128);
        while new_rem != 0 {
            let q = rem / new_rem;
            (t, new_t) = (new_t, t - q * new_t);
            (rem, new_rem) = (new_rem, rem - q * new_rem);
        }
        debug_assert_eq!(rem, 1);
        Ok(self.norm(t))
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// p-adic valuation of a residue; the value r is returned for 0.
    pub fn val_p(&self, a: u64) -> u32 {
        if a % self.modulus == 0 {
            return self.r;
        }
        let mut a = a % self.modulus;
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// The r digits of the unique expansion a = d0 + d1 p + ... + d_{r-1} p^{r-1},
    /// each digit in A = {0, .., p-1}.
    pub fn padic_digits(&self, a: u64) -> Vec<u64> {
        let mut a = a % self.modulus;
        let mut digits = Vec::with_capacity(self.r as usize);
        for _ in 0..self.r {
            digits.push(a % self.p);
            a /= self.p;
        }
        digits
    }

    /// Recomposes digits into a residue (inverse of `padic_digits`).
    pub fn from_digits(&self, digits: &[u64]) -> u64 {
        let mut acc = 0u64;
        for &d in digits.iter().rev() {
            acc = self.add(self.mul(acc, self.p), d % self.p);
        }
        acc
    }

    /// The digit-0 part of a residue, i.e. a mod p lifted back verbatim.
    pub fn digit0(&self, a: u64) -> u64 {
        a % self.p
    }

    /// Projection into the residue field F_p.
    pub fn project(&self, a: u64) -> u64 {
        a % self.p
    }
}

/// GF(p^m) presented as F_p[x]/(minpoly) on the basis 1, x, .., x^{m-1}.
/// The minimal polynomial is an input here, not a table lookup: it comes
/// from factoring a concrete polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    /// monic, degree m, coefficients low-to-high mod p (length m+1)
    minpoly: Vec<u64>,
}

/// An element of an [`ExtField`]: m coordinates mod p, low power first.
pub type ExtElem = Vec<u64>;

impl ExtField {
    /// `minpoly` must be monic of degree >= 1 with coefficients already
    /// reduced mod p. Irreducibility is the caller's responsibility (it is
    /// verified by the factorization routine that produces the polynomial).
    pub fn new(p: u64, minpoly: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let m = minpoly.len().saturating_sub(1);
        if m == 0 || *minpoly.last().unwrap() != 1 {
            return Err(Error::ReducibleMinPoly(m));
        }
        Ok(ExtField { p, minpoly })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[u64] {
        &self.minpoly
    }

    pub fn zero(&self) -> ExtElem {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> ExtElem {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    /// The class of x, a root of the minimal polynomial.
    pub fn alpha(&self) -> ExtElem {
        let mut e = self.zero();
        if self.degree() == 1 {
            // x = -c0 in F_p
            e[0] = (self.p - self.minpoly[0] % self.p) % self.p;
        } else {
            e[1] = 1;
        }
        e
    }

    pub fn from_base(&self, c: u64) -> ExtElem {
        let mut e = self.zero();
        e[0] = c % self.p;
        e
    }

    pub fn is_zero(&self, a: &ExtElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect()
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        a.iter().map(|&x| (self.p - x % self.p) % self.p).collect()
    }

    pub fn scale(&self, c: u64, a: &ExtElem) -> ExtElem {
        a.iter().map(|&x| c % self.p * x % self.p).collect()
    }

    /// Product reduced mod the minimal polynomial.
    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let m = self.degree();
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce: x^m = -(lower part of minpoly)
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for t in 0..m {
                let sub = c * self.minpoly[t] % self.p;
                prod[k - m + t] = (prod[k - m + t] + self.p - sub) % self.p;
            }
        }
        prod.truncate(m);
        prod
    }

    /// Inverse computed by extended gcd of the coordinate polynomial with
    /// the minimal polynomial.
    pub fn inv(&self, a: &ExtElem) -> Result<ExtElem> {
        if self.is_zero(a) {
            return Err(Error::ZeroInverse);
        }
        let fp = RingCtx::field(self.p)?;
        // extended Euclid in F_p[x]
        let trim = |v: &mut Vec<u64>| {
            while v.last() == Some(&0) {
                v.pop();
            }
        };
        let mut r0: Vec<u64> = self.minpoly.clone();
        let mut r1: Vec<u64> = a.clone();
        trim(&mut r1);
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            // divide r0 by r1
            let mut rem = r0.clone();
            let mut q = vec![0u64; rem.len().saturating_sub(r1.len() - 1).max(1)];
            let lead_inv = fp.inv(*r1.last().unwrap())?;
            while rem.len() >= r1.len() && !rem.is_empty() {
                let shift = rem.len() - r1.len();
                let c = fp.mul(*rem.last().unwrap(), lead_inv);
                q[shift] = c;
                for (i, &rc) in r1.iter().enumerate() {
                    rem[shift + i] = fp.sub(rem[shift + i], fp.mul(c, rc));
                }
                trim(&mut rem);
            }
            trim(&mut q);
            // s0, s1 = s1, s0 - q*s1
            let mut qs1 = vec![0u64; q.len() + s1.len()];
            for (i, &qc) in q.iter().enumerate() {
                for (j, &sc) in s1.iter().enumerate() {
                    qs1[i + j] = fp.add(qs1[i + j], fp.mul(qc, sc));
                }
            }
            let n = s0.len().max(qs1.len());
            let mut new_s = vec![0u64; n];
            for i in 0..n {
                let x = s0.get(i).copied().unwrap_or(0);
                let y = qs1.get(i).copied().unwrap_or(0);
                new_s[i] = fp.sub(x, y);
            }
            trim(&mut new_s);
            s0 = std::mem::replace(&mut s1, new_s);
            r0 = std::mem::replace(&mut r1, rem);
        }
        // r0 = gcd, must be a nonzero constant for irreducible minpoly
        if r0.len() != 1 {
            return Err(Error::ReducibleMinPoly(self.degree()));
        }
        let c_inv = fp.inv(r0[0])?;
        let mut out = self.zero();
        for (i, &sc) in s0.iter().enumerate() {
            if i < out.len() {
                out[i] = fp.mul(sc, c_inv);
            }
        }
        Ok(out)
    }
}

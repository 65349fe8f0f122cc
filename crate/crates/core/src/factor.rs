//! Irreducible factorization over F_p by deterministic trial division,
//! the monic-times-unit decomposition of regular polynomials over Z_{p^r}
//! (Hensel lifting), and the level-indexed divisibility check
//! p^j P | p^j Q that drives all ring-level row concentrations.
//!
//! Trial division is deliberate: inputs here are desk scale (degree <= ~12,
//! p <= ~7) and the enumeration order makes the factor lists reproducible.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::RingCtx;

/// unit * product(factor^multiplicity), factors monic irreducible over F_p,
/// listed in enumeration order (degree ascending, coefficient index
/// ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, ring: RingCtx) -> Poly {
        let mut acc = Poly::constant(ring, self.unit);
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }

    /// The distinct monic irreducible factors different from D.
    pub fn non_d_factors(&self) -> Vec<Poly> {
        self.factors
            .iter()
            .filter(|(f, _)| !f.is_unit_times_power_of_d())
            .map(|(f, _)| f.clone())
            .collect()
    }
}

/// Enumerates monic polynomials of the given degree over F_p; index digits
/// are the coefficients, constant coefficient varying fastest.
fn monic_by_index(ring: RingCtx, degree: usize, idx: u64) -> Poly {
    let p = ring.p();
    let mut coeffs = vec![0u64; degree + 1];
    let mut n = idx;
    for c in coeffs.iter_mut().take(degree) {
        *c = n % p;
        n /= p;
    }
    coeffs[degree] = 1;
    Poly::new(ring, coeffs)
}

/// Complete factorization of a nonzero polynomial over F_p.
pub fn factor_fp(f: &Poly) -> Result<Factorization> {
    let ring = f.ring();
    assert!(ring.is_field());
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let unit = f.leading();
    let mut current = f.monic()?;
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    let p = ring.p();
    let mut d = 1usize;
    while current.degree().unwrap_or(0) >= 1 {
        if 2 * d > current.degree().unwrap() {
            // whatever is left is irreducible
            factors.push((current.clone(), 1));
            break;
        }
        let mut advanced = false;
        for idx in 0..p.pow(d as u32) {
            let cand = monic_by_index(ring, d, idx);
            let mut mult = 0u32;
            loop {
                let (q, rem) = current.divmod(&cand)?;
                if rem.is_zero() {
                    current = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                factors.push((cand, mult));
                advanced = true;
            }
            if current.degree().unwrap_or(0) < 2 * d {
                break;
            }
        }
        let _ = advanced;
        d += 1;
    }
    let result = Factorization { unit, factors };
    debug_assert_eq!(result.expand(ring), *f);
    Ok(result)
}

/// Trial-division irreducibility over F_p.
pub fn is_irreducible(f: &Poly) -> bool {
    let ring = f.ring();
    assert!(ring.is_field());
    let deg = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let p = ring.p();
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d as u32) {
            let cand = monic_by_index(ring, d, idx);
            if f.divmod(&cand).map_or(false, |(_, rem)| rem.is_zero()) {
                return false;
            }
        }
    }
    true
}

/// Splits a regular f over Z_{p^r} as f = f1 * f2 with f1 monic whose
/// projection is the monic normalization of the projection of f, and f2 a
/// unit of Z_{p^r}[D]. Hensel lifting of the mod-p factorization
/// f-bar = (monic) * (leading unit).
pub fn monic_unit_split(f: &Poly) -> Result<(Poly, Poly)> {
    let ring = f.ring();
    if !f.is_regular() {
        return Err(Error::NotRegular);
    }
    let fp = ring.residue_field();
    let fbar = f.project();
    let lead = fbar.leading();
    let f1bar = fbar.monic()?;
    let mut f1 = f1bar.lift_verbatim(ring);
    let mut f2 = Poly::constant(ring, lead);
    let lead_inv_p = fp.inv(lead)?;
    for j in 1..ring.r() {
        let pj = ring.p().pow(j);
        let diff = f.sub(&f1.mul(&f2));
        // every coefficient of diff is divisible by p^j at this stage
        let ebar = Poly::new(
            fp,
            diff.coeffs()
                .iter()
                .map(|&c| {
                    debug_assert_eq!(c % pj, 0);
                    (c / pj) % ring.p()
                })
                .collect(),
        );
        let (b, rem) = ebar.divmod(&f1bar)?;
        let a = rem.scale(lead_inv_p);
        f1 = f1.add(&a.lift_verbatim(ring).scale(pj));
        f2 = f2.add(&b.lift_verbatim(ring).scale(pj));
    }
    if f1.mul(&f2) != *f || !f1.is_monic() || !f2.is_unit_poly() {
        return Err(Error::InternalCheckFailed("monic-unit split failed".into()));
    }
    // the unit factor must have an explicit polynomial inverse
    let _ = unit_poly_inverse(&f2)?;
    Ok((f1, f2))
}

/// Explicit polynomial inverse of a unit of Z_{p^r}[D]: geometric series in
/// the nilpotent part, which terminates before exponent r.
pub fn unit_poly_inverse(f: &Poly) -> Result<Poly> {
    let ring = f.ring();
    if !f.is_unit_poly() {
        return Err(Error::NotAUnit(f.coeff(0)));
    }
    let u = ring.inv(f.coeff(0))?;
    // u*f = 1 - h with h nilpotent coefficientwise
    let h = Poly::one(ring).sub(&f.scale(u));
    let mut acc = Poly::one(ring);
    let mut hp = h.clone();
    for _ in 1..ring.r() {
        acc = acc.add(&hp);
        hp = hp.mul(&h);
    }
    let inv = acc.scale(u);
    if f.mul(&inv).is_one() {
        Ok(inv)
    } else {
        Err(Error::InternalCheckFailed("unit inverse fixed point not reached".into()))
    }
}

/// Decides whether P divides Q in Z_{p^m}[D] for P regular, by reducing to
/// monic division through the monic-times-unit split: P = P1 P2 with P1
/// monic, so P | Q iff P1 | Q * P2^{-1}.
pub fn divides_mod(p_poly: &Poly, q_poly: &Poly, modulus_ring: RingCtx) -> Result<bool> {
    let pm = p_poly.reduce_mod(modulus_ring);
    let qm = q_poly.reduce_mod(modulus_ring);
    if qm.is_zero() {
        return Ok(true);
    }
    if !pm.is_regular() {
        return Err(Error::NotRegular);
    }
    let (p1, p2) = monic_unit_split(&pm)?;
    let p2_inv = unit_poly_inverse(&p2)?;
    let t = qm.mul(&p2_inv);
    let (_, rem) = t.divmod(&p1)?;
    Ok(rem.is_zero())
}

/// The least i in {0,..,r-1} such that p^j P divides p^j Q in Z_{p^r}[D]
/// for every j >= i, or `None` when the projection of P does not divide the
/// projection of Q. Divisibility at level j is equivalent to Q = P S being
/// solvable mod p^{r-j}. Each level is checked directly rather than
/// trusting monotonicity.
pub fn divisibility_lift_check(p_poly: &Poly, q_poly: &Poly) -> Result<Option<usize>> {
    let ring = p_poly.ring();
    assert_eq!(ring, q_poly.ring());
    if !p_poly.is_regular() || !q_poly.is_regular() {
        return Err(Error::NotRegular);
    }
    let pbar = p_poly.project();
    let qbar = q_poly.project();
    if !qbar.divmod(&pbar).map_or(false, |(_, rem)| rem.is_zero()) {
        return Ok(None);
    }
    let r = ring.r() as usize;
    let mut least = r - 1;
    for j in (0..r).rev() {
        let m = ring.reduced((r - j) as u32);
        if divides_mod(p_poly, q_poly, m)? {
            least = j;
        } else {
            break;
        }
    }
    Ok(Some(least))
}

/// All monic lifts of a monic F_p polynomial into Z_{p^m}[D], in a fixed
/// order: the verbatim digit lift plus p times every correction of smaller
/// degree, correction index digits in base p^{m-1}, constant fastest.
pub fn monic_lifts(pbar: &Poly, target: RingCtx) -> Vec<Poly> {
    assert!(pbar.is_monic());
    let d = pbar.degree().unwrap();
    let base = pbar.lift_verbatim(target);
    let step = target.modulus() / target.p(); // p^{m-1}
    if step == 1 {
        return vec![base];
    }
    let count = step.pow(d as u32);
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut corr = vec![0u64; d];
        let mut n = idx;
        for c in corr.iter_mut() {
            *c = n % step;
            n /= step;
        }
        let corr_poly = Poly::new(target, corr).scale(target.p());
        out.push(base.add(&corr_poly));
    }
    out
}

//! Exact linear algebra over the chain ring Z_{p^r}.
//!
//! Every matrix over Z_{p^r} diagonalizes to diag(p^{e_1}, .., p^{e_s}, 0..)
//! by invertible row and column operations: an entry of minimal p-valuation
//! divides every other entry, so one pivot clears its whole row and column
//! without iteration. Solving and kernel computation both reduce to this
//! diagonal form with tracked transforms.

use crate::ring::RingCtx;

/// Dense matrix over Z_{p^r}, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMat {
    pub ring: RingCtx,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl ZMat {
    pub fn zero(ring: RingCtx, rows: usize, cols: usize) -> Self {
        ZMat { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ring: RingCtx, n: usize) -> Self {
        let mut m = ZMat::zero(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(ring: RingCtx, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row.into_iter().map(|x| x % ring.modulus()));
        }
        ZMat { ring, rows: r, cols: c, data }
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.ring.modulus();
    }

    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = self.ring.add(acc, self.ring.mul(self.at(i, j), x[j]));
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row(&mut self, i: usize, c: u64) {
        for j in 0..self.cols {
            let v = self.ring.mul(self.at(i, j), c);
            self.set(i, j, v);
        }
    }

    /// row_i += c * row_k
    fn add_row(&mut self, i: usize, k: usize, c: u64) {
        for j in 0..self.cols {
            let v = self.ring.add(self.at(i, j), self.ring.mul(c, self.at(k, j)));
            self.set(i, j, v);
        }
    }

    /// col_j += c * col_k
    fn add_col(&mut self, j: usize, k: usize, c: u64) {
        for i in 0..self.rows {
            let v = self.ring.add(self.at(i, j), self.ring.mul(c, self.at(i, k)));
            self.set(i, j, v);
        }
    }
}

/// Diagonalization result: u * original * v = diag(p^exponents).
pub struct DiagForm {
    /// row transform, applied results of all row operations on the identity
    pub u: ZMat,
    /// column transform
    pub v: ZMat,
    /// p-valuation of each diagonal entry; r encodes a zero entry.
    pub exponents: Vec<u32>,
}

pub fn diagonalize(a: &ZMat) -> DiagForm {
    let ring = a.ring;
    let r = ring.r();
    let mut m = a.clone();
    let mut u = ZMat::identity(ring, a.rows);
    let mut v = ZMat::identity(ring, a.cols);
    let steps = a.rows.min(a.cols);
    let mut exponents = Vec::with_capacity(steps);
    for t in 0..steps {
        // pivot: minimal p-valuation entry of the active submatrix
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                let val = ring.val_p(m.at(i, j));
                if val < r && best.map_or(true, |(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((e, pi, pj)) = best else {
            exponents.resize(steps, r);
            break;
        };
        m.swap_rows(t, pi);
        u.swap_rows(t, pi);
        m.swap_cols(t, pj);
        v.swap_cols(t, pj);
        // normalize pivot to p^e
        let pe = ring.pow(ring.p(), e as u64);
        let unit = m.at(t, t) / pe;
        let unit_inv = ring.inv(unit).expect("cofactor of p^e is a unit");
        m.scale_row(t, unit_inv);
        u.scale_row(t, unit_inv);
        debug_assert_eq!(m.at(t, t), pe);
        // clear the rest of column t and row t; every entry there has
        // valuation >= e so the quotient is exact on representatives
        for i in t + 1..a.rows {
            let x = m.at(i, t);
            if x != 0 {
                let c = ring.neg(x / pe);
                m.add_row(i, t, c);
                u.add_row(i, t, c);
            }
        }
        for j in t + 1..a.cols {
            let x = m.at(t, j);
            if x != 0 {
                let c = ring.neg(x / pe);
                m.add_col(j, t, c);
                v.add_col(j, t, c);
            }
        }
        exponents.push(e);
    }
    exponents.resize(steps, r);
    DiagForm { u, v, exponents }
}

/// Solution of a * x = b over Z_{p^r}: one particular solution plus
/// generators of the kernel module.
pub struct Solution {
    pub particular: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

pub fn solve(a: &ZMat, b: &[u64]) -> Option<Solution> {
    assert_eq!(b.len(), a.rows);
    let ring = a.ring;
    let r = ring.r();
    let d = diagonalize(a);
    let bp = d.u.mul_vec(b);
    let steps = d.exponents.len();
    let mut y = vec![0u64; a.cols];
    for t in 0..steps {
        let e = d.exponents[t];
        if e >= r {
            if bp[t] != 0 {
                return None;
            }
        } else {
            let pe = ring.pow(ring.p(), e as u64);
            if bp[t] % pe != 0 {
                return None;
            }
            y[t] = bp[t] / pe;
        }
    }
    for t in steps..a.rows {
        if bp[t] != 0 {
            return None;
        }
    }
    let particular = d.v.mul_vec(&y);
    Some(Solution { particular, kernel: kernel_from_diag(&d, a.cols, ring) })
}

pub fn kernel(a: &ZMat) -> Vec<Vec<u64>> {
    let d = diagonalize(a);
    kernel_from_diag(&d, a.cols, a.ring)
}

fn kernel_from_diag(d: &DiagForm, cols: usize, ring: RingCtx) -> Vec<Vec<u64>> {
    let r = ring.r();
    let mut gens = Vec::new();
    for t in 0..cols {
        let e = d.exponents.get(t).copied().unwrap_or(r);
        if e == 0 {
            continue;
        }
        let scale = ring.pow(ring.p(), (r - e.min(r)) as u64);
        let mut y = vec![0u64; cols];
        y[t] = scale;
        let g = d.v.mul_vec(&y);
        if g.iter().any(|&c| c != 0) {
            gens.push(g);
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmat(ring: RingCtx, rows: Vec<Vec<u64>>) -> ZMat {
        ZMat::from_rows(ring, rows)
    }

    #[test]
    fn diagonal_form_identity_transforms() {
        let z8 = RingCtx::new(2, 3).unwrap();
        let a = zmat(z8, vec![vec![2, 4], vec![6, 3]]);
        let d = diagonalize(&a);
        // u * a * v must equal diag(p^e)
        let mut prod = ZMat::zero(z8, 2, 2);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = 0;
                for k in 0..2 {
                    for l in 0..2 {
                        acc = z8.add(acc, z8.mul(z8.mul(d.u.at(i, k), a.at(k, l)), d.v.at(l, j)));
                    }
                }
                prod.set(i, j, acc);
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                if i == j {
                    let e = d.exponents[i];
                    let expect = if e >= 3 { 0 } else { z8.pow(2, e as u64) };
                    assert_eq!(prod.at(i, j), expect);
                } else {
                    assert_eq!(prod.at(i, j), 0);
                }
            }
        }
    }

    #[test]
    fn solve_and_verify() {
        let z9 = RingCtx::new(3, 2).unwrap();
        let a = zmat(z9, vec![vec![3, 1, 2], vec![6, 4, 1]]);
        let b = vec![5, 7];
        let sol = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&sol.particular), b);
        for k in &sol.kernel {
            assert_eq!(a.mul_vec(k), vec![0, 0]);
        }
    }

    #[test]
    fn unsolvable_detected() {
        let z4 = RingCtx::new(2, 2).unwrap();
        // 2x = 1 has no solution mod 4
        let a = zmat(z4, vec![vec![2]]);
        assert!(solve(&a, &[1]).is_none());
        assert!(solve(&a, &[2]).is_some());
    }

    #[test]
    fn kernel_generates_all_solutions() {
        let z4 = RingCtx::new(2, 2).unwrap();
        let a = zmat(z4, vec![vec![2, 2]]);
        let gens = kernel(&a);
        // brute force the kernel and check every member is reachable
        let mut expect = std::collections::BTreeSet::new();
        for x in 0..4u64 {
            for y in 0..4u64 {
                if (2 * x + 2 * y) % 4 == 0 {
                    expect.insert(vec![x, y]);
                }
            }
        }
        let mut reach = std::collections::BTreeSet::new();
        let combos: Vec<Vec<u64>> = match gens.len() {
            0 => vec![vec![]],
            n => {
                let mut cs = vec![vec![]];
                for _ in 0..n {
                    let mut next = Vec::new();
                    for c in cs {
                        for v in 0..4u64 {
                            let mut c2 = c.clone();
                            c2.push(v);
                            next.push(c2);
                        }
                    }
                    cs = next;
                }
                cs
            }
        };
        for combo in combos {
            let mut v = vec![0u64; 2];
            for (c, g) in combo.iter().zip(&gens) {
                for j in 0..2 {
                    v[j] = z4.add(v[j], z4.mul(*c, g[j]));
                }
            }
            reach.insert(v);
        }
        assert_eq!(reach, expect);
    }

    #[test]
    fn random_solve_round_trip() {
        let z27 = RingCtx::new(3, 3).unwrap();
        let mut seed = 0xdeadbeefcafeu64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..100 {
            let rows = 2 + (next() % 3) as usize;
            let cols = 2 + (next() % 3) as usize;
            let a = ZMat {
                ring: z27,
                rows,
                cols,
                data: (0..rows * cols).map(|_| next() % 27).collect(),
            };
            let x: Vec<u64> = (0..cols).map(|_| next() % 27).collect();
            let b = a.mul_vec(&x);
            let sol = solve(&a, &b).expect("constructed system must be solvable");
            assert_eq!(a.mul_vec(&sol.particular), b);
        }
    }
}

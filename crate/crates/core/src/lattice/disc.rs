use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::gram::IntegralLattice;
use crate::algebra::{int, Rational};
use crate::error::{Error, Result};

/// Smith normal form `U A V = D`. Returns the diagonal and `V`.
pub fn smith(a: &[Vec<i64>]) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut v: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
        .collect();
    let swap_cols = |m: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for r in m.iter_mut() {
            r.swap(i, j);
        }
    };
    // column_j -= f * column_i
    let col_op = |m: &mut Vec<Vec<BigInt>>, j: usize, i: usize, f: &BigInt| {
        for r in m.iter_mut() {
            let d = &r[i] * f;
            r[j] -= d;
        }
    };
    for t in 0..n {
        loop {
            let pivot = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return (finish_diag(&m), v);
            };
            m.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..n {
                let f = m[i][t].div_floor(&m[t][t]);
                if !f.is_zero() {
                    let row_t = m[t].clone();
                    for (x, y) in m[i].iter_mut().zip(row_t.iter()) {
                        *x -= &f * y;
                    }
                }
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..n {
                let f = m[t][j].div_floor(&m[t][t]);
                if !f.is_zero() {
                    col_op(&mut m, j, t, &f);
                    col_op(&mut v, j, t, &f);
                }
                clean &= m[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    let row_i = m[i].clone();
                    for (x, y) in m[t].iter_mut().zip(row_i.iter()) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
    }
    (finish_diag(&m), v)
}

fn finish_diag(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    (0..m.len()).map(|i| m[i][i].abs()).collect()
}

fn integer_inverse(v: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = v.len();
    let mut a: Vec<Vec<Rational>> = v
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Rational> = r.iter().map(|x| Rational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| int(i64::from(i == j))));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).expect("unimodular");
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    a.into_iter()
        .map(|r| r[n..].iter().map(|x| x.to_integer()).collect())
        .collect()
}

/// Reduces `r` into `[0, m)`.
pub fn reduce_mod(r: &Rational, m: i64) -> Rational {
    let m = int(m);
    r - &m * (r / &m).floor()
}

/// Discriminant group `L^dual / L` with its finite quadratic form.
#[derive(Clone, Debug)]
pub struct DiscGroup {
    pub lattice: IntegralLattice,
    /// Invariant factors greater than one.
    pub orders: Vec<u64>,
    /// Dual vectors generating the cyclic summands, in lattice coordinates.
    pub gens: Vec<Vec<Rational>>,
    all_diag: Vec<u64>,
    v_inv: Vec<Vec<BigInt>>,
}

impl DiscGroup {
    pub fn new(lattice: &IntegralLattice) -> Result<Self> {
        let (diag, v) = smith(&lattice.gram);
        if diag.iter().any(|d| d.is_zero()) {
            return Err(Error::invalid("degenerate lattice has infinite discriminant group"));
        }
        let all_diag: Vec<u64> = diag
            .iter()
            .map(|d| d.to_u64().ok_or_else(|| Error::Unsupported("discriminant too large".into())))
            .collect::<Result<_>>()?;
        let mut orders = Vec::new();
        let mut gens = Vec::new();
        for (i, &d) in all_diag.iter().enumerate() {
            if d > 1 {
                orders.push(d);
                gens.push(
                    v.iter()
                        .map(|row| Rational::new(row[i].clone(), BigInt::from(d)))
                        .collect(),
                );
            }
        }
        let v_inv = integer_inverse(&v);
        Ok(DiscGroup { lattice: lattice.clone(), orders, gens, all_diag, v_inv })
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.orders.len()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), m)| (x + y) % m).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(x, m)| (x * k) % m).collect()
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &m in &self.orders {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..m).map(move |x| {
                        let mut e = e.clone();
                        e.push(x);
                        e
                    })
                })
                .collect();
        }
        out
    }

    pub fn vector(&self, a: &[u64]) -> Vec<Rational> {
        let n = self.lattice.rank();
        let mut v = vec![Rational::zero(); n];
        for (g, &k) in self.gens.iter().zip(a) {
            for (x, y) in v.iter_mut().zip(g) {
                *x += y * int(k as i64);
            }
        }
        v
    }

    /// Norm of the canonical representative (not reduced).
    pub fn q_raw(&self, a: &[u64]) -> Rational {
        self.lattice.norm(&self.vector(a))
    }

    /// Quadratic form value modulo 2 (modulo 1 for odd lattices).
    pub fn q(&self, a: &[u64]) -> Rational {
        let m = if self.lattice.is_even() { 2 } else { 1 };
        reduce_mod(&self.q_raw(a), m)
    }

    /// Bilinear form value modulo 1.
    pub fn b(&self, a: &[u64], b: &[u64]) -> Rational {
        reduce_mod(&self.lattice.pairing(&self.vector(a), &self.vector(b)), 1)
    }

    /// Class of a dual vector `x` (given in lattice coordinates).
    pub fn class_of(&self, x: &[Rational]) -> Result<Vec<u64>> {
        if self.lattice.apply(x).iter().any(|c| !c.is_integer()) {
            return Err(Error::invalid("vector is not in the dual lattice"));
        }
        let mut out = Vec::new();
        for (i, &d) in self.all_diag.iter().enumerate() {
            let y = self.v_inv[i]
                .iter()
                .zip(x)
                .fold(Rational::zero(), |acc, (a, b)| acc + Rational::from_integer(a.clone()) * b);
            let k = (y * int(d as i64)).to_integer();
            if d > 1 {
                out.push(k.mod_floor(&BigInt::from(d)).to_u64().unwrap());
            }
        }
        Ok(out)
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn span(&self, gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
        set.insert(self.zero());
        let mut frontier = vec![self.zero()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Nonzero elements with `q = 0` (modulo 2 for even lattices).
    pub fn isotropic_elements(&self) -> Vec<Vec<u64>> {
        self.elements()
            .into_iter()
            .filter(|a| a.iter().any(|&x| x != 0) && self.q(a).is_zero())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Overlattice {
    /// Elements of the isotropic subgroup, in discriminant coordinates.
    pub subgroup: Vec<Vec<u64>>,
    pub generators: Vec<Vec<u64>>,
    pub index: u64,
    pub det: i64,
    pub unimodular: bool,
    pub even: bool,
}

const MAX_ENUMERATED_GROUP: u64 = 4096;

/// Every nontrivial integral overlattice, one per isotropic subgroup of the
/// discriminant group. With `even_only` only even overlattices are kept.
pub fn enumerate_overlattices(lattice: &IntegralLattice, even_only: bool) -> Result<Vec<Overlattice>> {
    let dg = DiscGroup::new(lattice)?;
    if dg.order() > MAX_ENUMERATED_GROUP {
        return Err(Error::Unsupported(format!(
            "discriminant group of order {} is too large to enumerate",
            dg.order()
        )));
    }
    if even_only && !lattice.is_even() {
        return Ok(Vec::new());
    }
    let is_integral = |a: &[u64]| reduce_mod(&dg.q_raw(a), 1).is_zero();
    let is_even = |a: &[u64]| reduce_mod(&dg.q_raw(a), 2).is_zero();
    let mut seen: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    let mut frontier: Vec<(Vec<Vec<u64>>, Vec<Vec<u64>>)> = vec![(vec![dg.zero()], Vec::new())];
    let mut out = Vec::new();
    let candidates: Vec<Vec<u64>> = dg.elements().into_iter().filter(|a| is_integral(a)).collect();
    while let Some((sub, gens)) = frontier.pop() {
        for c in &candidates {
            if sub.contains(c) {
                continue;
            }
            if gens.iter().any(|g| !dg.b(g, c).is_zero()) {
                continue;
            }
            let mut ng = gens.clone();
            ng.push(c.clone());
            let span = dg.span(&ng);
            if !span.iter().all(|a| is_integral(a)) || !seen.insert(span.clone()) {
                continue;
            }
            frontier.push((span.clone(), ng.clone()));
            let even = lattice.is_even() && span.iter().all(|a| is_even(a));
            if even_only && !even {
                continue;
            }
            let index = span.len() as u64;
            let det = (lattice.det() / BigInt::from(index * index))
                .to_i64()
                .ok_or_else(|| Error::Unsupported("determinant out of range".into()))?;
            out.push(Overlattice {
                unimodular: det.abs() == 1,
                subgroup: span,
                generators: ng,
                index,
                det,
                even,
            });
        }
    }
    out.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.subgroup.cmp(&b.subgroup)));
    Ok(out)
}

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{int, Rational};
use crate::error::{Error, Result};
use crate::kodaira::Dynkin;

/// Lattice given by a symmetric integer Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralLattice {
    pub gram: Vec<Vec<i64>>,
}

impl IntegralLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("Gram matrix is not square"));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::invalid(format!("Gram matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(IntegralLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        let n = self.rank();
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> =
            self.gram.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    /// Rational inverse of the Gram matrix.
    pub fn inverse(&self) -> Result<Vec<Vec<Rational>>> {
        let n = self.rank();
        let mut a: Vec<Vec<Rational>> = self
            .gram
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row: Vec<Rational> = r.iter().map(|&x| int(x)).collect();
                row.extend((0..n).map(|j| int(i64::from(i == j))));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !a[i][c].is_zero())
                .ok_or_else(|| Error::invalid("degenerate lattice"))?;
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
        Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    pub fn pairing(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if self.gram[i][j] != 0 {
                    acc += xi * yj * int(self.gram[i][j]);
                }
            }
        }
        acc
    }

    pub fn norm(&self, x: &[Rational]) -> Rational {
        self.pairing(x, x)
    }

    /// `G x`, the pairings of `x` with the basis.
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                x.iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (j, xj)| acc + xj * int(self.gram[i][j]))
            })
            .collect()
    }

    pub fn direct_sum(parts: &[&IntegralLattice]) -> IntegralLattice {
        let n: usize = parts.iter().map(|p| p.rank()).sum();
        let mut g = vec![vec![0; n]; n];
        let mut off = 0;
        for p in parts {
            for (i, r) in p.gram.iter().enumerate() {
                for (j, &x) in r.iter().enumerate() {
                    g[off + i][off + j] = x;
                }
            }
            off += p.rank();
        }
        IntegralLattice { gram: g }
    }

    /// Vector `v` with `<v, e_j> = delta_ij`.
    pub fn dual_vector(&self, i: usize) -> Result<Vec<Rational>> {
        if i >= self.rank() {
            return Err(Error::invalid(format!("node {i} out of range")));
        }
        let inv = self.inverse()?;
        Ok(inv.iter().map(|r| r[i].clone()).collect())
    }
}

/// Edges of the Dynkin diagram. For `D_n` the fork sits at node `n-3`, so
/// nodes `n-2` and `n-1` are the two spin nodes. For `E_n` the chain is
/// `0..n-1` with the extra node `n-1` attached at node 2, 3 or 4.
pub fn dynkin_edges(t: Dynkin) -> Result<Vec<(usize, usize)>> {
    let chain = |len: usize| (1..len).map(|i| (i - 1, i)).collect::<Vec<_>>();
    match t {
        Dynkin::A(n) => Ok(chain(n as usize)),
        Dynkin::D(n) if n >= 4 => {
            let n = n as usize;
            let mut e = chain(n - 1);
            e.push((n - 3, n - 1));
            Ok(e)
        }
        Dynkin::E(n @ 6..=8) => {
            let n = n as usize;
            let mut e = chain(n - 1);
            let branch = match n {
                6 => 2,
                7 => 3,
                _ => 4,
            };
            e.push((branch, n - 1));
            Ok(e)
        }
        other => Err(Error::invalid(format!("no root lattice {other}"))),
    }
}

/// Negative definite root lattice with `-2` on the diagonal.
pub fn root_lattice(t: Dynkin) -> Result<IntegralLattice> {
    let n = t.rank() as usize;
    let mut g = vec![vec![0; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for (a, b) in dynkin_edges(t)? {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    Ok(IntegralLattice { gram: g })
}

/// Node index of the simple component paired with a fibre component of
/// minuscule type: `I_n` component `i` maps to node `i - 1`.
pub fn minuscule_node(t: Dynkin, which: usize) -> usize {
    match t {
        Dynkin::A(_) => which - 1,
        Dynkin::D(n) => match which {
            1 => 0,
            2 => n as usize - 2,
            _ => n as usize - 1,
        },
        Dynkin::E(_) => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn determinants_of_root_lattices() {
        let cases = [
            (Dynkin::A(1), 2),
            (Dynkin::A(8), 9),
            (Dynkin::D(4), 4),
            (Dynkin::D(7), 4),
            (Dynkin::E(6), 3),
            (Dynkin::E(7), 2),
            (Dynkin::E(8), 1),
        ];
        for (t, d) in cases {
            let l = root_lattice(t).unwrap();
            let sign = if t.rank() % 2 == 0 { 1 } else { -1 };
            assert_eq!(l.det(), BigInt::from(sign * d), "{t}");
        }
    }

    #[test]
    fn minuscule_dual_norms() {
        let a2 = root_lattice(Dynkin::A(2)).unwrap();
        assert_eq!(a2.norm(&a2.dual_vector(1).unwrap()), rat(-2, 3));
        let e6 = root_lattice(Dynkin::E(6)).unwrap();
        assert_eq!(e6.norm(&e6.dual_vector(0).unwrap()), rat(-4, 3));
        assert_eq!(e6.norm(&e6.dual_vector(4).unwrap()), rat(-4, 3));
        let e7 = root_lattice(Dynkin::E(7)).unwrap();
        assert_eq!(e7.norm(&e7.dual_vector(0).unwrap()), rat(-3, 2));
        let d6 = root_lattice(Dynkin::D(6)).unwrap();
        assert_eq!(d6.norm(&d6.dual_vector(0).unwrap()), int(-1));
        assert_eq!(d6.norm(&d6.dual_vector(5).unwrap()), rat(-3, 2));
    }

    #[test]
    fn a8_third_node() {
        let a8 = root_lattice(Dynkin::A(8)).unwrap();
        let v = a8.dual_vector(2).unwrap();
        let expected: Vec<Rational> = [2, 4, 6, 5, 4, 3, 2, 1].iter().map(|&c| rat(-c, 3)).collect();
        assert_eq!(v, expected);
        assert_eq!(a8.norm(&v), int(-2));
        assert_eq!(a8.norm(&a8.dual_vector(0).unwrap()), rat(-8, 9));
    }
}

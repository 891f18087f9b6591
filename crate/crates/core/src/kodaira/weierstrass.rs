use serde::{Deserialize, Serialize};

use crate::algebra::{int, Poly};
use crate::error::{Error, Result};

/// Long Weierstrass equation `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
/// with coefficients in Q[t]. Missing coefficients default to zero.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WeierstrassModel {
    #[serde(default)]
    pub a1: Poly,
    #[serde(default)]
    pub a2: Poly,
    #[serde(default)]
    pub a3: Poly,
    #[serde(default)]
    pub a4: Poly,
    #[serde(default)]
    pub a6: Poly,
}

impl WeierstrassModel {
    pub fn new(a1: Poly, a2: Poly, a3: Poly, a4: Poly, a6: Poly) -> Self {
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }

    /// Model with integer coefficient lists, lowest degree first.
    pub fn from_i64(a: [&[i64]; 5]) -> Self {
        WeierstrassModel::new(
            Poly::from_i64(a[0]),
            Poly::from_i64(a[1]),
            Poly::from_i64(a[2]),
            Poly::from_i64(a[3]),
            Poly::from_i64(a[4]),
        )
    }
}

/// The standard quantities `b2, b4, b6, b8, c4, c6` and the discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: Poly,
    pub b4: Poly,
    pub b6: Poly,
    pub b8: Poly,
    pub c4: Poly,
    pub c6: Poly,
    pub disc: Poly,
}

fn k(n: i64) -> Poly {
    Poly::constant(int(n))
}

pub fn reduce_invariants(w: &WeierstrassModel) -> Result<Invariants> {
    let WeierstrassModel { a1, a2, a3, a4, a6 } = w;
    let b2 = a1 * a1 + k(4) * a2;
    let b4 = a1 * a3 + k(2) * a4;
    let b6 = a3 * a3 + k(4) * a6;
    let b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - k(24) * &b4;
    let c6 = -(&b2 * &b2 * &b2) + k(36) * &b2 * &b4 - k(216) * &b6;
    let disc = -(&b2 * &b2 * &b8) - k(8) * &b4 * &b4 * &b4 - k(27) * &b6 * &b6
        + k(9) * &b2 * &b4 * &b6;
    if disc.is_zero() {
        return Err(Error::SingularModel);
    }
    Ok(Invariants { b2, b4, b6, b8, c4, c6, disc })
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

impl Invariants {
    /// Smallest `k` such that `c4, c6, disc` have degrees at most `4k, 6k, 12k`.
    /// Equals the Euler characteristic of the structure sheaf of a minimal model.
    pub fn twist_exponent(&self) -> u32 {
        let mut k = 0;
        for (p, w) in [(&self.c4, 4), (&self.c6, 6), (&self.disc, 12)] {
            if let Some(d) = p.degree() {
                k = k.max(ceil_div(d, w));
            }
        }
        k as u32
    }

    /// True when the j-invariant `c4^3 / disc` does not depend on `t`.
    pub fn j_is_constant(&self) -> bool {
        if self.c4.is_zero() || self.c6.is_zero() {
            return true;
        }
        let c43 = self.c4.pow(3);
        let lhs = c43.scale(self.disc.lead().unwrap());
        let rhs = self.disc.scale(c43.lead().unwrap());
        lhs == rhs
    }
}

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Endomorphism ring of the fibre curve: Z[i], Z[omega] or plain Z.
///
/// Points of the curve are written in the basis `(1, gamma)` where `gamma` is
/// `i`, `omega = exp(2 pi i / 3)` or an unspecified period `tau`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Gaussian,
    Eisenstein,
    Generic,
}

impl Ring {
    /// Ring whose unit group contains a primitive `r`-th root of unity.
    pub fn for_rotation_order(r: u32) -> Result<Ring> {
        match r {
            2 => Ok(Ring::Generic),
            4 => Ok(Ring::Gaussian),
            3 | 6 => Ok(Ring::Eisenstein),
            _ => Err(Error::invalid(format!("no automorphism of order {r} fixes the origin"))),
        }
    }

    /// Order of the unit group.
    pub fn unit_order(self) -> u32 {
        match self {
            Ring::Gaussian => 4,
            Ring::Eisenstein => 6,
            Ring::Generic => 2,
        }
    }

    /// Matrix of multiplication by the generating unit (`i`, `1 + omega`, `-1`)
    /// acting on coordinates.
    fn generator_matrix(self) -> [[i64; 2]; 2] {
        match self {
            Ring::Gaussian => [[0, -1], [1, 0]],
            Ring::Eisenstein => [[1, -1], [1, 0]],
            Ring::Generic => [[-1, 0], [0, -1]],
        }
    }
}

/// Element `a + b*gamma` of Z[i] or Z[omega].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CyclotomicInt {
    pub ring: Ring,
    pub a: BigInt,
    pub b: BigInt,
}

impl CyclotomicInt {
    pub fn new(ring: Ring, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        if ring == Ring::Generic {
            return Err(Error::Unsupported("integers of a generic lattice have no second generator".into()));
        }
        Ok(CyclotomicInt { ring, a: a.into(), b: b.into() })
    }

    pub fn one(ring: Ring) -> Self {
        CyclotomicInt { ring, a: BigInt::one(), b: BigInt::zero() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.ring, o.ring, "mixed rings");
        let (a, b, c, d) = (&self.a, &self.b, &o.a, &o.b);
        let (x, y) = match self.ring {
            Ring::Gaussian => (a * c - b * d, a * d + b * c),
            // omega^2 = -1 - omega
            Ring::Eisenstein => (a * c - b * d, a * d + b * c - b * d),
            Ring::Generic => unreachable!(),
        };
        CyclotomicInt { ring: self.ring, a: x, b: y }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CyclotomicInt { ring: self.ring, a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn norm(&self) -> BigInt {
        let (a, b) = (&self.a, &self.b);
        match self.ring {
            Ring::Gaussian => a * a + b * b,
            Ring::Eisenstein => a * a - a * b + b * b,
            Ring::Generic => unreachable!(),
        }
    }

    /// The unit `zeta^e` as a ring element.
    pub fn unit(u: Unit) -> Self {
        let g = match u.ring {
            Ring::Gaussian => CyclotomicInt { ring: u.ring, a: 0.into(), b: 1.into() },
            Ring::Eisenstein => CyclotomicInt { ring: u.ring, a: 1.into(), b: 1.into() },
            Ring::Generic => panic!("generic ring has no cyclotomic generator"),
        };
        (0..u.exp).fold(CyclotomicInt::one(u.ring), |acc, _| acc.mul(&g))
    }
}

/// Root of unity `zeta^exp` in the unit group of a ring, where `zeta` is the
/// generator with the smallest positive argument.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Unit {
    pub ring: Ring,
    pub exp: u32,
}

impl Unit {
    pub fn new(ring: Ring, exp: i64) -> Self {
        Unit { ring, exp: exp.rem_euclid(ring.unit_order() as i64) as u32 }
    }

    pub fn identity(ring: Ring) -> Self {
        Unit { ring, exp: 0 }
    }

    /// `exp(2 pi i k / r)` expressed in the unit group of `ring`.
    pub fn from_rotation(ring: Ring, r: u32, k: i64) -> Result<Self> {
        let n = ring.unit_order();
        if n % r != 0 {
            return Err(Error::invalid(format!("order {r} rotation is not a unit of {ring:?}")));
        }
        Ok(Unit::new(ring, k * (n / r) as i64))
    }

    pub fn is_identity(self) -> bool {
        self.exp == 0
    }

    pub fn order(self) -> u32 {
        let n = self.ring.unit_order();
        n / n.gcd(&self.exp)
    }

    pub fn mul(self, o: Unit) -> Unit {
        Unit::new(self.ring, self.exp as i64 + o.exp as i64)
    }

    pub fn pow(self, k: i64) -> Unit {
        Unit::new(self.ring, self.exp as i64 * k)
    }

    pub fn inverse(self) -> Unit {
        self.pow(-1)
    }

    /// Writes the unit as `exp(2 pi i a / m)` for its own order `m`, returning `a`.
    pub fn angle_numerator(self) -> u32 {
        let n = self.ring.unit_order();
        let m = self.order();
        self.exp / (n / m)
    }

    pub fn matrix(self) -> [[i64; 2]; 2] {
        let g = self.ring.generator_matrix();
        let mut acc = [[1, 0], [0, 1]];
        for _ in 0..self.exp {
            acc = mat_mul(&g, &acc);
        }
        acc
    }

    pub fn apply(self, z: &TorsionPoint) -> TorsionPoint {
        let m = self.matrix();
        TorsionPoint::from_coords(
            z.ring,
            Ratio::from_integer(m[0][0]) * z.x + Ratio::from_integer(m[0][1]) * z.y,
            Ratio::from_integer(m[1][0]) * z.x + Ratio::from_integer(m[1][1]) * z.y,
        )
    }
}

fn mat_mul(a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Torsion point of the fibre curve, stored by its coordinates in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TorsionPoint {
    pub ring: Ring,
    pub x: Ratio<i64>,
    pub y: Ratio<i64>,
}

fn frac(q: Ratio<i64>) -> Ratio<i64> {
    q - q.floor()
}

/// Largest denominator accepted from user input.
pub const MAX_TORSION_DENOMINATOR: i64 = 24;

impl TorsionPoint {
    pub fn from_coords(ring: Ring, x: Ratio<i64>, y: Ratio<i64>) -> Self {
        TorsionPoint { ring, x: frac(x), y: frac(y) }
    }

    pub fn zero(ring: Ring) -> Self {
        TorsionPoint::from_coords(ring, Ratio::zero(), Ratio::zero())
    }

    /// Parses two coordinates such as `["1/2", "1/2"]`.
    pub fn parse(ring: Ring, coords: &[String]) -> Result<Self> {
        let [x, y] = coords else {
            return Err(Error::invalid("torsion point needs two coordinates"));
        };
        let parse = |s: &str| -> Result<Ratio<i64>> {
            let q: Ratio<i64> = s
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad coordinate {s:?}")))?;
            if *q.denom() > MAX_TORSION_DENOMINATOR {
                return Err(Error::invalid(format!(
                    "coordinate {s} has denominator above {MAX_TORSION_DENOMINATOR}"
                )));
            }
            Ok(q)
        };
        Ok(TorsionPoint::from_coords(ring, parse(x)?, parse(y)?))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, k: i64) -> Self {
        TorsionPoint::from_coords(self.ring, self.x * k, self.y * k)
    }

    pub fn order(&self) -> i64 {
        self.x.denom().lcm(self.y.denom())
    }

    pub fn coords(&self) -> [String; 2] {
        [self.x.to_string(), self.y.to_string()]
    }
}

impl Add for TorsionPoint {
    type Output = TorsionPoint;
    fn add(self, o: TorsionPoint) -> TorsionPoint {
        TorsionPoint::from_coords(self.ring, self.x + o.x, self.y + o.y)
    }
}

impl Sub for TorsionPoint {
    type Output = TorsionPoint;
    fn sub(self, o: TorsionPoint) -> TorsionPoint {
        TorsionPoint::from_coords(self.ring, self.x - o.x, self.y - o.y)
    }
}

impl Neg for TorsionPoint {
    type Output = TorsionPoint;
    fn neg(self) -> TorsionPoint {
        TorsionPoint::from_coords(self.ring, -self.x, -self.y)
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Solutions of `z = lambda*z + c` on the curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FixedPoints {
    All,
    Finite(Vec<TorsionPoint>),
}

/// Fixed points of `z -> lambda*z + c`, i.e. solutions of `(1 - lambda) z = c`.
/// For `lambda != 1` there are exactly `N(1 - lambda)` of them.
pub fn solve_fixed_points(lambda: Unit, c: &TorsionPoint) -> FixedPoints {
    if lambda.is_identity() {
        return if c.is_zero() { FixedPoints::All } else { FixedPoints::Finite(Vec::new()) };
    }
    let m = lambda.matrix();
    let a = [[1 - m[0][0], -m[0][1]], [-m[1][0], 1 - m[1][1]]];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let adj = [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]];
    let mut out = Vec::new();
    for v0 in 0..det {
        for v1 in 0..det {
            let rx = c.x + v0;
            let ry = c.y + v1;
            let z = TorsionPoint::from_coords(
                c.ring,
                (rx * adj[0][0] + ry * adj[0][1]) / det,
                (rx * adj[1][0] + ry * adj[1][1]) / det,
            );
            if !out.contains(&z) {
                out.push(z);
            }
        }
    }
    out.sort();
    FixedPoints::Finite(out)
}

/// Number of fixed points of a non-identity unit, `N(1 - lambda)`.
pub fn fixed_point_count(lambda: Unit) -> i64 {
    let m = lambda.matrix();
    (1 - m[0][0]) * (1 - m[1][1]) - m[0][1] * m[1][0]
}

/// All elements of the subgroup generated by `gens`.
pub fn subgroup_closure(ring: Ring, gens: &[TorsionPoint]) -> Vec<TorsionPoint> {
    let mut elems = vec![TorsionPoint::zero(ring)];
    let mut frontier = elems.clone();
    while let Some(z) = frontier.pop() {
        for g in gens {
            let w = z + *g;
            if !elems.contains(&w) {
                elems.push(w);
                frontier.push(w);
            }
        }
    }
    elems.sort();
    elems
}

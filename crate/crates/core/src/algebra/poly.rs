use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Dense univariate polynomial over Q in the variable `t`.
///
/// Coefficients are stored from the constant term upwards and never carry
/// trailing zeros, so the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Poly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut v = vec![Rational::zero(); deg + 1];
        v[deg] = c;
        Poly::from_coeffs(v)
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    /// `t - a`.
    pub fn linear_root(a: &Rational) -> Self {
        Poly::from_coeffs(vec![-a.clone(), Rational::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].recip();
        let mut r = self.coeffs.clone();
        let Some(n) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if n < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = &r[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    /// Exact quotient; fails when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Inconsistent(format!("{d} does not divide {self}")))
        }
    }

    /// Monic greatest common divisor; zero only when both inputs are zero.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        let (x, y) = (a.primitive_part().1, b.primitive_part().1);
        if coprime_mod_p(&x, &y) {
            return Poly::one();
        }
        Poly::from_integers(&primitive_prs(x, y)).monic()
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicity of the nonconstant polynomial `p` as a factor of `self`;
    /// `None` when `self` is zero.
    pub fn multiplicity(&self, p: &Poly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        assert!(!p.is_constant(), "multiplicity needs a nonconstant factor");
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(p).expect("nonzero divisor");
            if !r.is_zero() {
                return Some(v);
            }
            v += 1;
            cur = q;
        }
    }

    /// `s^n * f(1/s)`, the reversal with respect to the formal degree `n >= deg f`.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut v = vec![Rational::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            assert!(i <= n, "formal degree below actual degree");
            v[n - i] = c.clone();
        }
        Poly::from_coeffs(v)
    }

    /// Writes the polynomial as `content * primitive` with an integer primitive
    /// part whose leading coefficient is positive.
    pub fn primitive_part(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::zero(), Vec::new());
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().expect("nonzero").is_negative() {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (Rational::new(g, den), prim)
    }

    /// Compact label such as `t^2+3*t+9`.
    pub fn label(&self) -> String {
        self.render("t", false)
    }

    fn render(&self, var: &str, spaced: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else if spaced {
                out.push_str(if neg { " - " } else { " + " });
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t", true))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Orders by degree, then by coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

const GCD_PRIMES: [u64; 3] = [2_147_483_629, 2_147_483_587, 2_147_483_579];

/// True when some prime not dividing either leading coefficient sees the
/// reductions as coprime; the gcd degree can only grow under reduction.
fn coprime_mod_p(a: &[BigInt], b: &[BigInt]) -> bool {
    use super::modp;
    use num_traits::ToPrimitive;
    GCD_PRIMES.iter().any(|&p| {
        let pb = BigInt::from(p);
        let red = |v: &[BigInt]| -> Vec<u64> {
            modp::trim(v.iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced")).collect())
        };
        let (ra, rb) = (red(a), red(b));
        if ra.len() != a.len() || rb.len() != b.len() {
            return false;
        }
        modp::gcd(&ra, &rb, p).len() == 1
    })
}

fn zcontent_free(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut v {
            *c /= &g;
        }
    }
    v
}

/// Gcd up to a constant of two nonzero integer polynomials, by pseudo-division
/// with the content removed at every step.
fn primitive_prs(mut a: Vec<BigInt>, mut b: Vec<BigInt>) -> Vec<BigInt> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let lb = b.last().expect("nonzero").clone();
        while a.len() >= b.len() {
            let la = a.last().expect("nonzero").clone();
            let shift = a.len() - b.len();
            for c in a.iter_mut() {
                *c *= &lb;
            }
            for (i, c) in b.iter().enumerate() {
                a[i + shift] -= &la * c;
            }
            a.pop();
            while a.last().is_some_and(|c| c.is_zero()) {
                a.pop();
            }
        }
        let r = zcontent_free(a);
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn division_round_trip() {
        let a = Poly::from_i64(&[-27, 0, 0, 1]);
        let b = Poly::from_i64(&[-3, 1]);
        let (qt, r) = a.div_rem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(qt, Poly::from_i64(&[9, 3, 1]));
        assert_eq!(&qt * &b, a);
    }

    #[test]
    fn gcd_is_monic() {
        let a = Poly::from_i64(&[2, -2]).pow(2);
        let b = Poly::from_i64(&[-3, 3]) * Poly::from_i64(&[1, 1]);
        assert_eq!(Poly::gcd(&a, &b), Poly::from_i64(&[-1, 1]));
    }

    #[test]
    fn multiplicity_and_reversal() {
        let p = Poly::t().pow(3) * Poly::from_i64(&[1, 1]);
        assert_eq!(p.multiplicity(&Poly::t()), Some(3));
        assert_eq!(Poly::zero().multiplicity(&Poly::t()), None);
        assert_eq!(Poly::from_i64(&[1, 2]).reversed(3), Poly::from_i64(&[0, 0, 2, 1]));
    }

    #[test]
    fn primitive_part_clears_denominators() {
        let p = Poly::from_coeffs(vec![q(1, 2), q(-3, 4)]);
        let (c, prim) = p.primitive_part();
        assert_eq!(prim, vec![BigInt::from(-2), BigInt::from(3)]);
        assert_eq!(c, q(-1, 4));
    }

    #[test]
    fn labels() {
        assert_eq!(Poly::from_i64(&[9, 3, 1]).label(), "t^2+3*t+9");
        assert_eq!(Poly::from_i64(&[-1, 0, -2]).to_string(), "-2*t^2 - 1");
        assert_eq!(Poly::zero().degree(), None);
    }

    fn euclid(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).unwrap().1;
            a = b;
            b = r;
        }
        a.monic()
    }

    proptest::proptest! {
        #[test]
        fn gcd_matches_euclid(
            a in proptest::collection::vec(-9i64..=9, 1..7),
            b in proptest::collection::vec(-9i64..=9, 1..7),
            c in proptest::collection::vec(-9i64..=9, 1..5),
        ) {
            let (a, b, c) = (Poly::from_i64(&a), Poly::from_i64(&b), Poly::from_i64(&c));
            proptest::prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
            let (ac, bc) = (&a * &c, &b * &c);
            let g = Poly::gcd(&ac, &bc);
            proptest::prop_assert_eq!(&g, &euclid(&ac, &bc));
            proptest::prop_assert!(g.exact_div(&c.monic()).is_ok());
        }
    }
}

use std::fmt;

use num_traits::Zero;

use super::{Place, Poly, Rational};
use crate::error::{Error, Result};

/// Element of Q(t) kept as `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one() });
        }
        let g = Poly::gcd(&num, &den);
        let num = num.exact_div(&g)?;
        let den = den.exact_div(&g)?;
        let l = den.lead().expect("nonzero").clone();
        let inv = Rational::from_integer(1.into()) / l;
        Ok(RationalFunction { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
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

    /// Order of vanishing at `place`; `None` for the zero function.
    pub fn valuation(&self, place: &Place) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        match place {
            Place::Finite(p) => {
                let a = self.num.multiplicity(p)? as i64;
                let b = self.den.multiplicity(p)? as i64;
                Some(a - b)
            }
            Place::Infinity => {
                Some(self.den.degree()? as i64 - self.num.degree()? as i64)
            }
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

use std::cmp::Ordering;
use std::fmt;

use super::factor::is_irreducible;
use super::{Poly, Rational};
use crate::error::{Error, Result};

/// Closed point of P^1 over Q: a monic irreducible polynomial or infinity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    /// Checks that `p` is monic and irreducible.
    pub fn finite(p: Poly) -> Result<Self> {
        if !p.is_monic() || !is_irreducible(&p)? {
            return Err(Error::invalid(format!("{p} is not a monic irreducible polynomial")));
        }
        Ok(Place::Finite(p))
    }

    /// The place `t = a`.
    pub fn at(a: &Rational) -> Self {
        Place::Finite(Poly::linear_root(a))
    }

    /// Number of geometric points lying over the place.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().expect("nonzero"),
            Place::Infinity => 1,
        }
    }

    /// `inf`, the root `a` for linear places, otherwise the polynomial.
    pub fn label(&self) -> String {
        match self {
            Place::Infinity => "inf".to_string(),
            Place::Finite(p) if p.degree() == Some(1) => (-p.coeff(0)).to_string(),
            Place::Finite(p) => p.label(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Finite places by polynomial order, infinity last.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Greater,
            (_, Place::Infinity) => Ordering::Less,
            (Place::Finite(a), Place::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reducible() {
        assert!(Place::finite(Poly::from_i64(&[-1, 0, 1])).is_err());
        assert!(Place::finite(Poly::from_i64(&[1, 0, 2])).is_err());
        let p = Place::finite(Poly::from_i64(&[9, 3, 1])).unwrap();
        assert_eq!(p.degree(), 3 - 1);
        assert_eq!(p.label(), "t^2+3*t+9");
    }

    #[test]
    fn labels_and_order() {
        let a = Place::at(&Rational::new((-1).into(), 2.into()));
        assert_eq!(a.label(), "-1/2");
        assert!(a < Place::Infinity);
        assert!(Place::at(&Rational::from_integer(0.into())) < Place::finite(Poly::from_i64(&[1, 0, 1])).unwrap());
    }
}

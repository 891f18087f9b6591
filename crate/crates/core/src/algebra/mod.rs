//! Exact arithmetic: rationals, polynomials and rational functions over Q,
//! places of P^1, factorization, and the Gaussian and Eisenstein integers.

mod cyclotomic;
mod factor;
mod modp;
mod place;
mod poly;
mod ratfunc;

pub use cyclotomic::{
    fixed_point_count, solve_fixed_points, subgroup_closure, CyclotomicInt, FixedPoints, Ring,
    TorsionPoint, Unit, MAX_TORSION_DENOMINATOR,
};
pub use factor::{factor_rational_poly, is_irreducible, squarefree_decomposition, Factorization};
pub use place::Place;
pub use poly::Poly;
pub use ratfunc::RationalFunction;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Parses `"p/q"` or an integer literal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::invalid(format!("not a rational number: {s:?}")))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

mod serde_impls {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{parse_rational, Place, Poly};

    impl Serialize for Poly {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(self.coeffs().iter().map(|c| c.to_string()))
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Coeff {
        Int(i64),
        Str(String),
    }

    impl<'de> Deserialize<'de> for Poly {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let raw = Vec::<Coeff>::deserialize(d)?;
            let coeffs = raw
                .into_iter()
                .map(|c| match c {
                    Coeff::Int(n) => Ok(super::int(n)),
                    Coeff::Str(s) => parse_rational(&s).map_err(D::Error::custom),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Poly::from_coeffs(coeffs))
        }
    }

    #[derive(Serialize, Deserialize)]
    #[serde(tag = "kind", rename_all = "lowercase")]
    enum PlaceRepr {
        Finite { poly: Poly },
        Infinity,
    }

    impl Serialize for Place {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            match self {
                Place::Finite(p) => PlaceRepr::Finite { poly: p.clone() },
                Place::Infinity => PlaceRepr::Infinity,
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for Place {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            match PlaceRepr::deserialize(d)? {
                PlaceRepr::Infinity => Ok(Place::Infinity),
                PlaceRepr::Finite { poly } => Place::finite(poly).map_err(D::Error::custom),
            }
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn json_round_trip() {
            let p = Poly::from_coeffs(vec![super::super::rat(-1, 2), super::super::int(3)]);
            let s = serde_json::to_string(&p).unwrap();
            assert_eq!(s, r#"["-1/2","3"]"#);
            assert_eq!(serde_json::from_str::<Poly>(&s).unwrap(), p);
            assert_eq!(serde_json::from_str::<Poly>("[0, 1]").unwrap(), Poly::t());
            let pl = Place::Finite(Poly::from_i64(&[9, 3, 1]));
            let s = serde_json::to_string(&pl).unwrap();
            assert_eq!(s, r#"{"kind":"finite","poly":["9","3","1"]}"#);
            assert_eq!(serde_json::from_str::<Place>(&s).unwrap(), pl);
            assert!(serde_json::from_str::<Place>(r#"{"kind":"finite","poly":["-1","0","1"]}"#).is_err());
            assert_eq!(serde_json::from_str::<Place>(r#"{"kind":"infinity"}"#).unwrap(), Place::Infinity);
        }
    }
}

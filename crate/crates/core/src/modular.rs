use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{int, rat, Rational};
use crate::error::{Error, Result};

/// Rational bounds `lower < pi^2 < upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiSquaredInterval {
    #[serde(serialize_with = "ser_rat")]
    pub lower: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub upper: Rational,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

impl PiSquaredInterval {
    /// Width `10^-6`.
    pub fn certified() -> Self {
        PiSquaredInterval {
            lower: Rational::new(9_869_604.into(), pow10(6)),
            upper: Rational::new(9_869_605.into(), pow10(6)),
        }
    }

    /// Width `10^-12`.
    pub fn tight() -> Self {
        PiSquaredInterval {
            lower: Rational::new(9_869_604_401_089i64.into(), pow10(12)),
            upper: Rational::new(9_869_604_401_090i64.into(), pow10(12)),
        }
    }

    pub fn levels() -> [Self; 2] {
        [Self::certified(), Self::tight()]
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }
}

/// Compares `coef * pi^2` with `rhs` for `coef > 0`, tightening the interval
/// once if the coarse one does not decide.
pub fn compare_pi2(coef: &Rational, rhs: &Rational) -> Result<(Ordering, bool)> {
    debug_assert!(coef > &Rational::zero());
    for (level, iv) in PiSquaredInterval::levels().iter().enumerate() {
        let lo = coef * &iv.lower;
        let hi = coef * &iv.upper;
        if &lo >= rhs {
            return Ok((Ordering::Greater, level > 0));
        }
        if &hi <= rhs {
            return Ok((Ordering::Less, level > 0));
        }
    }
    Err(Error::Indeterminate(format!(
        "{coef} * pi^2 against {rhs} falls inside the tightest interval"
    )))
}

/// `floor(coef * pi^2)` for `coef > 0`.
pub fn floor_pi2(coef: &Rational) -> Result<BigInt> {
    for iv in PiSquaredInterval::levels() {
        let lo = (coef * &iv.lower).floor().to_integer();
        let hi = (coef * &iv.upper).floor().to_integer();
        if lo == hi {
            return Ok(lo);
        }
    }
    Err(Error::Indeterminate(format!("floor of {coef} * pi^2")))
}

/// Prime factorisation by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor_u64(n) == vec![(n, 1)]
}

fn positive(n: i64) -> Result<u64> {
    if n <= 0 {
        return Err(Error::invalid(format!("N must be positive, got {n}")));
    }
    Ok(n as u64)
}

fn prime_power_s(p: u64) -> Rational {
    int(1) - rat(1, (p * p) as i64)
}

fn prime_power_u(p: u64, n: u32) -> Rational {
    let p = BigInt::from(p);
    let n_i = BigInt::from(n);
    let core = (&n_i + 1) * &p - &n_i + 1;
    let factor = (&p - 1) * core;
    if n >= 2 {
        Rational::from_integer(p.pow(n - 2) * factor)
    } else {
        Rational::new(factor, p)
    }
}

pub fn s_func(n: i64) -> Result<Rational> {
    let n = positive(n)?;
    Ok(factor_u64(n).into_iter().map(|(p, _)| prime_power_s(p)).product())
}

pub fn u_func(n: i64) -> Result<Rational> {
    let n = positive(n)?;
    Ok(factor_u64(n).into_iter().map(|(p, e)| prime_power_u(p, e)).product())
}

/// `t(N) = u(N) / (s(N) N^2)`.
pub fn t_func(n: i64) -> Result<Rational> {
    if n < 2 {
        return Err(Error::invalid(format!("t(N) needs N >= 2, got {n}")));
    }
    let n2 = int(n) * int(n);
    Ok(u_func(n)? / (s_func(n)? * n2))
}

fn require_five(n: i64) -> Result<()> {
    if n < 5 {
        return Err(Error::invalid(format!("formula valid for N >= 5 only, got {n}")));
    }
    Ok(())
}

fn to_integer(r: Rational, what: &str) -> Result<i64> {
    if !r.is_integer() {
        return Err(Error::Inconsistent(format!("{what} evaluated to non-integer {r}")));
    }
    r.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Unsupported(format!("{what} out of range")))
}

/// Genus of the modular curve for the full level `N` subgroup.
pub fn genus_g(n: i64) -> Result<i64> {
    require_five(n)?;
    let s = s_func(n)?;
    let nn = int(n);
    let v = &s * &nn * &nn * &nn / int(24) - &s * &nn * &nn / int(4) + int(1);
    to_integer(v, "g(N)")
}

/// Genus of the modular curve for `Gamma_1(N)`.
pub fn genus_g1(n: i64) -> Result<i64> {
    require_five(n)?;
    let s = s_func(n)?;
    let nn = int(n);
    let v = &s * &nn * &nn / int(24) - u_func(n)? / int(4) + int(1);
    to_integer(v, "g1(N)")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum G1Path {
    Table,
    Claim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct G1LowerCheck {
    pub n: i64,
    pub g1: i64,
    pub holds: bool,
    pub path: G1Path,
    /// `t(N)` and whether it is at most `1/9`, for `N >= 26`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_at_most_ninth: Option<bool>,
    pub tightened: bool,
}

/// Checks `g1(N) > N^2 / (12 pi^2) - 2`, i.e. `12 (g1 + 2) pi^2 > N^2`.
pub fn check_g1_lower(n: i64) -> Result<G1LowerCheck> {
    let g1 = genus_g1(n)?;
    let (ord, tightened) = compare_pi2(&int(12 * (g1 + 2)), &int(n * n))?;
    let holds = ord == Ordering::Greater;
    let (path, t, ninth) = if n <= 25 {
        (G1Path::Table, None, None)
    } else {
        let t = t_func(n)?;
        let ok = t <= rat(1, 9);
        (G1Path::Claim, Some(t.to_string()), Some(ok))
    };
    Ok(G1LowerCheck { n, g1, holds, path, t, t_at_most_ninth: ninth, tightened })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimRange {
    pub from: i64,
    pub to: i64,
    pub checked: usize,
    /// `N` with the largest `t(N)` in range.
    pub worst_n: i64,
    pub worst_t: String,
    pub failures: Vec<i64>,
}

/// Verifies `t(N) <= 1/9` for every `N` in `from..=to`.
pub fn check_claim_range(from: i64, to: i64) -> Result<ClaimRange> {
    if from < 2 || to < from {
        return Err(Error::invalid(format!("bad range {from}..{to}")));
    }
    let ninth = rat(1, 9);
    let values: Vec<(i64, Rational)> = (from..=to)
        .into_par_iter()
        .map(|n| t_func(n).map(|t| (n, t)))
        .collect::<Result<_>>()?;
    let failures = values.iter().filter(|(_, t)| t > &ninth).map(|(n, _)| *n).collect();
    let (worst_n, worst_t) = values
        .iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .cloned()
        .expect("nonempty range");
    Ok(ClaimRange {
        from,
        to,
        checked: values.len(),
        worst_n,
        worst_t: worst_t.to_string(),
        failures,
    })
}

/// Runs [`check_g1_lower`] over a range and returns the failing `N`.
pub fn check_g1_lower_range(from: i64, to: i64) -> Result<Vec<i64>> {
    let checks: Vec<G1LowerCheck> =
        (from..=to).into_par_iter().map(check_g1_lower).collect::<Result<_>>()?;
    Ok(checks.into_iter().filter(|c| !c.holds).map(|c| c.n).collect())
}

/// Sharp bounds on the torsion order over a base of genus `g <= 4`.
pub const SHARP_TORSION: [u64; 5] = [25, 36, 36, 49, 50];

pub const ISOTRIVIAL_TORSION: u64 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionBound {
    pub g: i64,
    pub isotrivial: bool,
    /// Largest integer below `12 pi^2 (g + 2)`.
    pub strict: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharp: Option<u64>,
    pub bound: u64,
}

/// Largest integer strictly below `12 pi^2 (g + 2)`.
pub fn strict_bound(g: i64) -> Result<u64> {
    if g < 0 {
        return Err(Error::invalid(format!("genus must be non-negative, got {g}")));
    }
    floor_pi2(&int(12 * (g + 2)))?
        .to_u64()
        .ok_or_else(|| Error::Unsupported("bound out of range".into()))
}

pub fn mw_torsion_bound(g: i64, isotrivial: bool) -> Result<TorsionBound> {
    let strict = strict_bound(g)?;
    let sharp = usize::try_from(g).ok().and_then(|i| SHARP_TORSION.get(i).copied());
    let bound = if isotrivial { ISOTRIVIAL_TORSION } else { strict };
    Ok(TorsionBound { g, isotrivial, strict, sharp, bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeVerdict {
    pub p: u64,
    pub square: bool,
    pub applicable: bool,
    pub pass: bool,
    pub min_pg: i64,
    pub chi_divisor: i64,
    pub violated: Vec<String>,
}

/// Necessary conditions on `p_g` and `chi` when `p` (or `(Z/p)^2` if
/// `square`) divides the order of the cohomologically trivial part.
pub fn prime_conditions(p: u64, chi: i64, p_g: i64, square: bool) -> Result<PrimeVerdict> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let pi = p as i64;
    let applicable = if square { p >= 3 } else { p > 5 };
    if !applicable {
        return Ok(PrimeVerdict {
            p,
            square,
            applicable,
            pass: true,
            min_pg: 0,
            chi_divisor: 1,
            violated: Vec::new(),
        });
    }
    let (min_pg, chi_divisor) = if square {
        ((pi - 3) * (pi * pi - 1) / 12, pi * (pi * pi - 1) / 24)
    } else {
        ((pi * pi - 1) / 12 - (pi - 1) / 2, (pi * pi - 1) / 24)
    };
    let mut violated = Vec::new();
    if p_g < min_pg {
        violated.push(format!("p_g >= {min_pg}"));
    }
    if !chi.is_multiple_of(&chi_divisor) {
        violated.push(format!("{chi_divisor} | chi"));
    }
    Ok(PrimeVerdict {
        p,
        square,
        applicable,
        pass: violated.is_empty(),
        min_pg,
        chi_divisor,
        violated,
    })
}

/// Coprime test used by the multiplicativity checks.
pub fn coprime(a: i64, b: i64) -> bool {
    a.gcd(&b).is_one()
}

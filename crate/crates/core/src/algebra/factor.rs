//! Factorization in Q[t]: squarefree decomposition, a rational-root pass,
//! then modular factorization with Hensel lifting and subset recombination.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{self, Fp};
use super::{Poly, Rational};
use crate::error::{Error, Result};

/// `unit * prod factor^mult` with monic irreducible factors in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (f, e)| acc * f.pow(*e))
    }
}

/// Factors a nonzero polynomial into monic irreducibles over Q.
pub fn factor_rational_poly(p: &Poly) -> Result<Factorization> {
    let unit = p
        .lead()
        .cloned()
        .ok_or_else(|| Error::invalid("cannot factor the zero polynomial"))?;
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&p.monic()) {
        let (_, prim) = part.primitive_part();
        for f in factor_squarefree_integer(&prim) {
            factors.push((Poly::from_integers(&f).monic(), mult));
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Yun's algorithm on a monic polynomial: returns `(a_i, i)` with `f = prod a_i^i`.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    let b = Poly::gcd(f, &df);
    let mut c = f.exact_div(&b).expect("gcd divides");
    let mut d = df.exact_div(&b).expect("gcd divides") - c.derivative();
    let mut i = 1;
    while !c.is_constant() {
        let a = Poly::gcd(&c, &d);
        c = c.exact_div(&a).expect("gcd divides");
        d = d.exact_div(&a).expect("gcd divides") - c.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

pub fn is_irreducible(p: &Poly) -> Result<bool> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    let f = factor_rational_poly(p)?;
    Ok(f.factors.len() == 1 && f.factors[0].1 == 1)
}

type ZPoly = Vec<BigInt>;

fn zdeg(f: &ZPoly) -> usize {
    f.len() - 1
}

fn ztrim(mut f: ZPoly) -> ZPoly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    ztrim(v)
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn zmod(a: &ZPoly, m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn to_fp(a: &ZPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    modp::trim(a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn from_fp(a: &Fp) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn zprimitive(a: &ZPoly) -> ZPoly {
    let mut g = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if a.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

/// Exact division in Z[t], `None` when `d` does not divide `f`.
fn zdiv_exact(f: &ZPoly, d: &ZPoly) -> Option<ZPoly> {
    let (q, r) = Poly::from_integers(f)
        .div_rem(&Poly::from_integers(d))
        .ok()?;
    if !r.is_zero() || q.coeffs().iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(q.coeffs().iter().map(|c| c.to_integer()).collect())
}

/// Irreducible factors (primitive, positive leading coefficient) of a
/// squarefree primitive integer polynomial.
fn factor_squarefree_integer(f: &ZPoly) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut f = f.clone();
    if zdeg(&f) == 0 {
        return out;
    }
    if f[0].is_zero() {
        out.push(vec![BigInt::zero(), BigInt::one()]);
        f.remove(0);
    }
    if zdeg(&f) == 1 {
        out.push(zprimitive(&f));
    } else if zdeg(&f) > 1 {
        out.extend(zassenhaus(&f).into_iter().map(|g| zprimitive(&g)));
    }
    out
}

fn small_odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

const PRIME_TRIALS: usize = 6;

/// Degrees reachable as sums of a sub-multiset of `degs`.
fn subset_degrees(degs: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degs {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = zdeg(f);
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: Option<(u64, Vec<Fp>)> = None;
    // degrees a true factor could have, given every factorization mod p so far
    let mut possible = vec![true; n + 1];
    let mut tried = 0;
    for p in small_odd_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = modp::monic(&to_fp(f, p), p);
        if fp.len() != n + 1 || !modp::is_squarefree(&fp, p) {
            continue;
        }
        let fs = modp::factor_squarefree(&fp, p, &mut rng);
        let degs: Vec<usize> = fs.iter().map(|g| g.len() - 1).collect();
        for (slot, r) in possible.iter_mut().zip(subset_degrees(&degs, n)) {
            *slot &= r;
        }
        if fs.len() == 1 || !possible[1..n].iter().any(|&x| x) {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        tried += 1;
        if tried >= PRIME_TRIALS {
            break;
        }
    }
    let (p, modular) = best.expect("some prime keeps the polynomial squarefree");

    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm1;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let lc_inv = lc
        .modinv(&pk)
        .expect("leading coefficient is a unit modulo p^k");
    let target = zmod(&f.iter().map(|c| c * &lc_inv).collect(), &pk);
    let lifted = multifactor_lift(&target, &modular, p, k);
    recombine(f, lifted, &pk, &possible)
}

fn multifactor_lift(target: &ZPoly, factors: &[Fp], p: u64, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        return vec![target.clone()];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let g0 = left.iter().fold(vec![1], |acc, g| modp::mul(&acc, g, p));
    let h0 = right.iter().fold(vec![1], |acc, g| modp::mul(&acc, g, p));
    let (g, h) = hensel_two(target, &g0, &h0, p, k);
    let mut out = multifactor_lift(&g, left, p, k);
    out.extend(multifactor_lift(&h, right, p, k));
    out
}

/// Lifts `target = g0*h0 mod p` (all monic) to a factorization modulo `p^k`.
fn hensel_two(target: &ZPoly, g0: &Fp, h0: &Fp, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = modp::ext_gcd(g0, h0, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut g = from_fp(g0);
    let mut h = from_fp(h0);
    let mut m = pb.clone();
    for _ in 1..k {
        let next = &m * &pb;
        let err = zmod(&zsub(target, &zmul(&g, &h)), &next);
        let e: ZPoly = err.iter().map(|c| c / &m).collect();
        let ep = to_fp(&e, p);
        let (q, r) = modp::divrem(&modp::mul(&s, &ep, p), h0, p);
        let dg = modp::add(&modp::mul(&t, &ep, p), &modp::mul(&q, g0, p), p);
        let scaled = |d: &Fp| -> ZPoly { d.iter().map(|&c| BigInt::from(c) * &m).collect() };
        g = zmod(&zadd(&g, &scaled(&dg)), &next);
        h = zmod(&zadd(&h, &scaled(&r)), &next);
        m = next;
    }
    (g, h)
}

fn recombine(f: &ZPoly, mut pool: Vec<ZPoly>, pk: &BigInt, possible: &[bool]) -> Vec<ZPoly> {
    let mut f = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= pool.len() {
        for subset in (0..pool.len()).combinations(size) {
            if !possible[subset.iter().map(|&i| zdeg(&pool[i])).sum::<usize>()] {
                continue;
            }
            let lc = f[zdeg(&f)].clone();
            let prod = subset
                .iter()
                .fold(vec![lc], |acc, &i| zmod(&zmul(&acc, &pool[i]), pk));
            let cand = zprimitive(&symmetric(&prod, pk));
            if !f[0].is_zero() && !cand[0].is_zero() && !(&f[0] % &cand[0]).is_zero() {
                continue;
            }
            if let Some(q) = zdiv_exact(&f, &cand) {
                out.push(cand);
                f = q;
                for &i in subset.iter().rev() {
                    pool.remove(i);
                }
                continue 'outer;
            }
        }
        size += 1;
    }
    if zdeg(&f) > 0 {
        out.push(f);
    }
    out
}

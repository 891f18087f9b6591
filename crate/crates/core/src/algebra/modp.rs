//! Polynomials over a prime field F_p with p below 2^31, stored low-to-high
//! and trimmed. Used by the modular stage of integer factorization.

use num_bigint::BigUint;
use rand::Rng;

pub(crate) type Fp = Vec<u64>;

pub(crate) fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn deg(a: &Fp) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn pow_u64(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero");
    pow_u64(a, p - 2, p)
}

pub(crate) fn add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub(crate) fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub(crate) fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    trim(v)
}

pub(crate) fn scale(a: &Fp, c: u64, p: u64) -> Fp {
    trim(a.iter().map(|&x| x * c % p).collect())
}

pub(crate) fn monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        Some(&l) if l != 1 => scale(a, inv(l, p), p),
        _ => a.clone(),
    }
}

pub(crate) fn divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = deg(b).expect("division by zero polynomial");
    let Some(da) = deg(a) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), a.clone());
    }
    let li = inv(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db] * li % p;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * bj % p) % p;
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub(crate) fn rem(a: &Fp, b: &Fp, p: u64) -> Fp {
    divrem(a, b, p).1
}

pub(crate) fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// Returns `(g, s, t)` with `s*a + t*b = g` and `g` monic.
pub(crate) fn ext_gcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let l = inv(*r0.last().expect("nonzero gcd"), p);
    (scale(&r0, l, p), scale(&s0, l, p), scale(&t0, l, p))
}

pub(crate) fn derivative(a: &Fp, p: u64) -> Fp {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

fn powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut acc: Fp = vec![1];
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        acc = rem(&mul(&acc, &acc, p), m, p);
        if e.bit(i) {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
    }
    acc
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn ddf(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 0;
    while deg(&f).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod(&h, &pe, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
    }
    if deg(&f).unwrap_or(0) > 0 {
        let n = deg(&f).unwrap();
        out.push((f, n));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus) for odd p.
fn edf<R: Rng>(f: &Fp, d: usize, p: u64, rng: &mut R) -> Vec<Fp> {
    let n = deg(f).unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = sub(&powmod(&a, &e, f, p), &vec![1], p);
        let g = gcd(&b, f, p);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, &g, p).0;
            let mut out = edf(&g, d, p, rng);
            out.extend(edf(&monic(&h, p), d, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors of a monic squarefree polynomial over F_p, p odd.
pub(crate) fn factor_squarefree<R: Rng>(f: &Fp, p: u64, rng: &mut R) -> Vec<Fp> {
    let mut out = Vec::new();
    for (g, d) in ddf(f, p) {
        out.extend(edf(&g, d, p, rng));
    }
    out.sort();
    out
}

pub(crate) fn is_squarefree(f: &Fp, p: u64) -> bool {
    let d = derivative(f, p);
    !d.is_empty() && gcd(f, &d, p).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factors_multiply_back() {
        let p = 7;
        // (x^2+1)(x+3)(x^3+x+1) over F_7
        let f = mul(&mul(&vec![1, 0, 1], &vec![3, 1], p), &vec![1, 1, 0, 1], p);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fs = factor_squarefree(&f, p, &mut rng);
        let prod = fs.iter().fold(vec![1], |acc, g| mul(&acc, g, p));
        assert_eq!(prod, f);
        assert!(fs.iter().all(|g| g.last() == Some(&1)));
    }

    #[test]
    fn ext_gcd_bezout() {
        let p = 11;
        let a = vec![1, 2, 1];
        let b = vec![3, 1];
        let (g, s, t) = ext_gcd(&a, &b, p);
        assert_eq!(add(&mul(&s, &a, p), &mul(&t, &b, p), p), g);
    }
}

//! Concrete lattices attached to the quotient constructions: the ten curves
//! on the bielliptic-type quotient of the `I8` surface, the `I9` lattice with
//! its index 3 overlattice, and the isotrivial `r = 3` and `r = 4` lattices.

use num_traits::Zero;
use serde::Serialize;

use super::disc::{enumerate_overlattices, DiscGroup, Overlattice};
use super::gram::{root_lattice, IntegralLattice};
use crate::algebra::{int, Rational};
use crate::error::{Error, Result};
use crate::kodaira::Dynkin;

fn from_edges(n: usize, diag: &[i64], edges: &[(usize, usize)]) -> IntegralLattice {
    let mut g = vec![vec![0; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = diag[i];
    }
    for &(a, b) in edges {
        g[a][b] += 1;
        g[b][a] += 1;
    }
    IntegralLattice { gram: g }
}

fn scaled(coeffs: &[i64], d: i64) -> Vec<Rational> {
    coeffs.iter().map(|&c| Rational::new(c.into(), d.into())).collect()
}

fn hyperbolic(b: i64) -> IntegralLattice {
    IntegralLattice { gram: vec![vec![0, 1], vec![1, b]] }
}

/// Basis labels of [`ten_curves`].
pub const TEN_CURVE_LABELS: [&str; 10] =
    ["O", "Th0", "Th1", "Th2", "Th3", "Th4", "Th5", "Th6", "Th7", "R"];

/// Bisection `O` on `Th0`, bisection `R` on `Th4`, and the `I8` cycle.
pub fn ten_curves() -> IntegralLattice {
    let th = |i: usize| 1 + i % 8;
    let mut edges: Vec<(usize, usize)> = (0..8).map(|i| (th(i), th(i + 1))).collect();
    edges.push((0, th(0)));
    edges.push((9, th(4)));
    from_edges(10, &[-2; 10], &edges)
}

/// Square of either bisection on the quotient with `2s` double fibres.
/// The bisection has genus `s - 1` (double cover of the line branched in
/// `2s` points) and `K = (s - 1) F` numerically.
pub fn bisection_square(s: i64) -> i64 {
    let two_g_minus_two = 2 * (s - 1) - 2;
    let k_dot = (s - 1) * 2;
    two_g_minus_two - k_dot
}

/// The divisors `D1` (type III*), `D2` (type I4*), `D3` and its mirror `D3'`
/// (type II*), as integer coefficients on [`TEN_CURVE_LABELS`].
pub fn ten_curve_divisors() -> [(&'static str, [i64; 10]); 4] {
    [
        ("D1", [2, 4, 3, 2, 1, 0, 1, 2, 3, 0]),
        ("D2", [1, 2, 1, 0, 1, 2, 2, 2, 2, 1]),
        ("D3", [1, 2, 3, 4, 5, 6, 4, 2, 0, 3]),
        ("D3'", [1, 2, 0, 2, 4, 6, 5, 4, 3, 3]),
    ]
}

/// Horizontal mirror of the ten-curve diagram: `Th_i -> Th_{-i}`.
fn mirror(x: &[Rational]) -> Vec<Rational> {
    let mut y = x.to_vec();
    for i in 1..8 {
        y[1 + i] = x[1 + (8 - i)].clone();
    }
    y
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TenCurveReport {
    pub det: i64,
    pub disc_orders: Vec<u64>,
    /// `q(v), q(v')` modulo 2 and `b(v, v')` modulo 1 for `v = D3/4`, `v' = D3'/4`.
    pub q_v: String,
    pub q_v_prime: String,
    pub b_v_v_prime: String,
    pub v_generate: bool,
    /// Isotropic elements equal `{+-v, +-v', 2v, 2v', 2(v + v')}`.
    pub isotropic_as_stated: bool,
    pub half_d1_is_2v_plus_2v_prime: bool,
    pub half_d2_is_2v: bool,
    pub even_unimodular_overlattices: usize,
    pub classes_up_to_mirror: usize,
    /// `det(<O, Th0..Th7>)`.
    pub auxiliary_det: i64,
}

pub fn ten_curve_report() -> Result<TenCurveReport> {
    let l = ten_curves();
    let det = i64::try_from(l.det()).map_err(|_| Error::Unsupported("determinant".into()))?;
    let dg = DiscGroup::new(&l)?;
    let divs = ten_curve_divisors();
    let quarter = |c: &[i64; 10]| scaled(c, 4);
    let v = dg.class_of(&quarter(&divs[2].1))?;
    let vp = dg.class_of(&quarter(&divs[3].1))?;
    let half_d1 = dg.class_of(&scaled(&divs[0].1, 2))?;
    let half_d2 = dg.class_of(&scaled(&divs[1].1, 2))?;
    let neg = |a: &[u64]| dg.scale(a, dg.order() - 1);
    let two = |a: &[u64]| dg.scale(a, 2);
    let mut stated = vec![
        v.clone(),
        neg(&v),
        vp.clone(),
        neg(&vp),
        two(&v),
        two(&vp),
        two(&dg.add(&v, &vp)),
    ];
    stated.sort();
    stated.dedup();
    let mut iso = dg.isotropic_elements();
    iso.sort();
    let v_generate = dg.span(&[v.clone(), vp.clone()]).len() as u64 == dg.order();

    let overs: Vec<Overlattice> =
        enumerate_overlattices(&l, true)?.into_iter().filter(|o| o.unimodular).collect();
    let mut classes: Vec<Vec<Vec<u64>>> = Vec::new();
    for o in &overs {
        let mirrored: Vec<Vec<u64>> = {
            let gens: Vec<Vec<u64>> = o
                .generators
                .iter()
                .map(|g| dg.class_of(&mirror(&dg.vector(g))))
                .collect::<Result<_>>()?;
            dg.span(&gens)
        };
        if !classes.iter().any(|c| *c == o.subgroup || *c == mirrored) {
            classes.push(o.subgroup.clone());
        }
    }
    let aux = IntegralLattice { gram: l.gram[..9].iter().map(|r| r[..9].to_vec()).collect() };
    Ok(TenCurveReport {
        det,
        disc_orders: dg.orders.clone(),
        q_v: dg.q(&v).to_string(),
        q_v_prime: dg.q(&vp).to_string(),
        b_v_v_prime: dg.b(&v, &vp).to_string(),
        v_generate,
        isotropic_as_stated: iso == stated,
        half_d1_is_2v_plus_2v_prime: half_d1 == two(&dg.add(&v, &vp)),
        half_d2_is_2v: half_d2 == two(&v),
        even_unimodular_overlattices: overs.len(),
        classes_up_to_mirror: classes.len(),
        auxiliary_det: i64::try_from(aux.det()).map_err(|_| Error::Unsupported("determinant".into()))?,
    })
}

/// `<E, B> + A8` with `E^2 = 0`, `E.B = 1`, `B^2 = -3`.
pub fn nine_lattice() -> Result<IntegralLattice> {
    Ok(IntegralLattice::direct_sum(&[&hyperbolic(-3), &root_lattice(Dynkin::A(8))?]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NineReport {
    pub disc_orders: Vec<u64>,
    pub generator_norm: String,
    pub index3_unimodular: usize,
    /// Norm of `D0`, the dual of the third `A8` node.
    pub d0_norm: String,
    pub three_d0_integral: bool,
    pub d0_generates_overlattice: bool,
}

pub fn nine_report() -> Result<NineReport> {
    let l = nine_lattice()?;
    let dg = DiscGroup::new(&l)?;
    // the lattice is odd, so overlattices are enumerated without the parity filter
    let overs: Vec<Overlattice> = enumerate_overlattices(&l, false)?
        .into_iter()
        .filter(|o| o.index == 3 && o.unimodular)
        .collect();
    let d0 = l.dual_vector(2 + 2)?;
    let g1 = l.dual_vector(2)?;
    let d0_class = dg.class_of(&d0)?;
    Ok(NineReport {
        disc_orders: dg.orders.clone(),
        generator_norm: l.norm(&g1).to_string(),
        index3_unimodular: overs.len(),
        d0_norm: l.norm(&d0).to_string(),
        three_d0_integral: d0.iter().all(|c| (c * int(3)).is_integer()),
        d0_generates_overlattice: overs.len() == 1 && dg.span(&[d0_class]) == overs[0].subgroup,
    })
}

/// `E6` in fibre labels: `A''1 - A'1 - X - A'3 - A''3` with `A'2` on `X`.
pub const E6_LABELS: [&str; 6] = ["A''1", "A'1", "X", "A'2", "A'3", "A''3"];

pub fn e6_fibre_labels() -> IntegralLattice {
    from_edges(6, &[-2; 6], &[(0, 1), (1, 2), (2, 3), (2, 4), (4, 5)])
}

/// `U + A2 + E6` for the `r = 3` quotient, with `A2 = <D'1, D'2>`.
pub fn r3_lattice() -> Result<IntegralLattice> {
    Ok(IntegralLattice::direct_sum(&[&hyperbolic(0), &root_lattice(Dynkin::A(2))?, &e6_fibre_labels()]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct R3Report {
    pub v1_norm: String,
    pub v2_norm: String,
    pub v1_matches_dual: bool,
    pub v2_matches_dual: bool,
    pub glue_norm: String,
    pub index3_overlattices: usize,
    /// Each overlattice is spanned by `(v1, v2)` or `(-v1, v2)`.
    pub spanned_by_pm_v1_v2: bool,
}

pub fn r3_report() -> Result<R3Report> {
    let l = r3_lattice()?;
    let dg = DiscGroup::new(&l)?;
    let mut v1 = vec![Rational::zero(); 10];
    v1[2..4].clone_from_slice(&scaled(&[-1, -2], 3));
    let mut v2 = vec![Rational::zero(); 10];
    v2[4..].clone_from_slice(&scaled(&[-4, -5, -6, -3, -4, -2], 3));
    let sum: Vec<Rational> = v1.iter().zip(&v2).map(|(a, b)| a + b).collect();
    let diff: Vec<Rational> = v1.iter().zip(&v2).map(|(a, b)| b - a).collect();
    let overs: Vec<Overlattice> =
        enumerate_overlattices(&l, true)?.into_iter().filter(|o| o.index == 3).collect();
    let spans = [dg.span(&[dg.class_of(&sum)?]), dg.span(&[dg.class_of(&diff)?])];
    Ok(R3Report {
        v1_norm: l.norm(&v1).to_string(),
        v2_norm: l.norm(&v2).to_string(),
        v1_matches_dual: v1 == l.dual_vector(3)?,
        v2_matches_dual: v2 == l.dual_vector(4)?,
        glue_norm: l.norm(&sum).to_string(),
        index3_overlattices: overs.len(),
        spanned_by_pm_v1_v2: overs.len() == 2
            && overs.iter().all(|o| o.unimodular && spans.contains(&o.subgroup))
            && spans[0] != spans[1],
    })
}

/// `U + A1 + E7` for the `r = 4` quotient.
pub fn r4_lattice() -> Result<IntegralLattice> {
    Ok(IntegralLattice::direct_sum(&[
        &hyperbolic(0),
        &root_lattice(Dynkin::A(1))?,
        &root_lattice(Dynkin::E(7))?,
    ]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct R4Report {
    pub u_norm: String,
    pub unimodular_overlattices: usize,
}

pub fn r4_report() -> Result<R4Report> {
    let l = r4_lattice()?;
    let a1 = l.dual_vector(2)?;
    let e7 = l.dual_vector(3)?;
    let u: Vec<Rational> = a1.iter().zip(&e7).map(|(a, b)| a + b).collect();
    let overs = enumerate_overlattices(&l, true)?.into_iter().filter(|o| o.unimodular).count();
    Ok(R4Report { u_norm: l.norm(&u).to_string(), unimodular_overlattices: overs })
}

use std::collections::BTreeMap;

use serde::Serialize;

use super::fiber::{classify_fibre, FiberRecord, KodairaType, Val};
use super::weierstrass::{reduce_invariants, WeierstrassModel};
use crate::algebra::{factor_rational_poly, Place, Poly};
use crate::error::{Error, Result};

/// Fibre configuration and numerical invariants of a relatively minimal
/// elliptic surface with a section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceData {
    pub fibers: Vec<FiberRecord>,
    pub euler: i64,
    pub chi: i64,
    pub q: i64,
    pub p_g: i64,
    pub b2: i64,
    pub h11: i64,
    pub base_genus: i64,
    pub isotrivial: bool,
}

/// One geometric fibre; places of degree `d` contribute `d` of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricFiber {
    pub label: String,
    #[serde(rename = "type")]
    pub kind: KodairaType,
}

impl SurfaceData {
    /// Builds the invariants from a list of singular fibres, sorted by place.
    pub fn from_fibers(mut fibers: Vec<FiberRecord>, base_genus: i64, isotrivial: bool) -> Result<Self> {
        fibers.retain(|f| !f.kind.is_smooth());
        fibers.sort_by(|a, b| a.place.cmp(&b.place));
        for w in fibers.windows(2) {
            if w[0].place == w[1].place {
                return Err(Error::invalid(format!("two fibres over {}", w[0].place)));
            }
        }
        let euler: i64 = fibers
            .iter()
            .map(|f| f.count() as i64 * f.kind.euler() as i64)
            .sum();
        if euler % 12 != 0 {
            return Err(Error::EulerNotDivisible(euler));
        }
        let chi = euler / 12;
        // a fibration without singular fibres is a product after base change
        let q = base_genus + i64::from(chi == 0);
        let p_g = chi - 1 + q;
        let b2 = 12 * chi - 2 + 4 * q;
        let h11 = b2 - 2 * p_g;
        Ok(SurfaceData { fibers, euler, chi, q, p_g, b2, h11, base_genus, isotrivial })
    }

    pub fn geometric_fibers(&self) -> Vec<GeometricFiber> {
        let mut out = Vec::new();
        for f in &self.fibers {
            let d = f.count();
            for j in 0..d {
                let label = if d == 1 {
                    f.place.label()
                } else {
                    format!("{}#{j}", f.place.label())
                };
                out.push(GeometricFiber { label, kind: f.kind });
            }
        }
        out
    }

    /// Geometric fibre counts by type.
    pub fn fiber_multiset(&self) -> BTreeMap<KodairaType, usize> {
        let mut m = BTreeMap::new();
        for f in &self.fibers {
            *m.entry(f.kind).or_insert(0) += f.count();
        }
        m
    }

    pub fn fiber_at(&self, place: &Place) -> Option<&FiberRecord> {
        self.fibers.iter().find(|f| &f.place == place)
    }

    /// Rank of the lattice spanned by the zero section, a fibre and all fibre
    /// components missing the zero section.
    pub fn triv_rank(&self) -> i64 {
        2 + self
            .fibers
            .iter()
            .map(|f| f.count() as i64 * (f.kind.components() as i64 - 1))
            .sum::<i64>()
    }

    pub fn has_additive_reducible(&self) -> bool {
        self.fibers.iter().any(|f| f.kind.is_additive() && f.kind.is_reducible())
    }

    pub fn has_additive(&self) -> bool {
        self.fibers.iter().any(|f| f.kind.is_additive())
    }

    pub fn is_semistable(&self) -> bool {
        !self.has_additive()
    }
}

fn val(p: &Poly, place: &Place, twist: u32, weight: u32) -> Val {
    match place {
        Place::Finite(pi) => p.multiplicity(pi),
        Place::Infinity => p.degree().map(|d| weight * twist - d as u32),
    }
}

/// Finds and classifies every singular fibre of a Weierstrass model over P^1.
pub fn classify_all(w: &WeierstrassModel) -> Result<SurfaceData> {
    let inv = reduce_invariants(w)?;
    let k = inv.twist_exponent();
    let mut places: Vec<Place> = factor_rational_poly(&inv.disc)?
        .factors
        .into_iter()
        .map(|(p, _)| Place::Finite(p))
        .collect();
    places.push(Place::Infinity);
    let mut fibers = Vec::new();
    for place in places {
        let vd = val(&inv.disc, &place, k, 12).expect("nonzero discriminant");
        let rec = classify_fibre(&place, val(&inv.c4, &place, k, 4), val(&inv.c6, &place, k, 6), vd)?;
        if !rec.kind.is_smooth() {
            fibers.push(rec);
        }
    }
    SurfaceData::from_fibers(fibers, 0, inv.j_is_constant())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiodaTate {
    pub triv_rank: i64,
    pub h11: i64,
    pub mw_rank: Option<i64>,
    pub extremal: bool,
}

/// Compares the trivial lattice with `h^{1,1}`. The surface is extremal when
/// the trivial lattice already has full rank.
pub fn shioda_tate(s: &SurfaceData, mw_rank_hint: Option<i64>) -> Result<ShiodaTate> {
    let triv_rank = s.triv_rank();
    if s.chi == 0 {
        return Ok(ShiodaTate { triv_rank, h11: s.h11, mw_rank: None, extremal: false });
    }
    if triv_rank > s.h11 {
        return Err(Error::Inconsistent(format!(
            "trivial lattice rank {triv_rank} exceeds h11 = {}",
            s.h11
        )));
    }
    if let Some(r) = mw_rank_hint {
        if triv_rank + r > s.h11 {
            return Err(Error::Inconsistent(format!(
                "Mordell-Weil rank {r} does not fit: {triv_rank} + {r} > {}",
                s.h11
            )));
        }
    }
    let extremal = triv_rank == s.h11;
    let mw_rank = if extremal { Some(0) } else { mw_rank_hint };
    Ok(ShiodaTate { triv_rank, h11: s.h11, mw_rank, extremal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn types(s: &SurfaceData) -> Vec<(String, String)> {
        s.fibers.iter().map(|f| (f.place.label(), f.kind.to_string())).collect()
    }

    #[test]
    fn nine_one_one_one() {
        // y^2 + t x y + y = x^3
        let s = classify_all(&WeierstrassModel::from_i64([&[0, 1], &[], &[1], &[], &[]])).unwrap();
        assert_eq!(
            types(&s),
            vec![
                ("3".into(), "I1".into()),
                ("t^2+3*t+9".into(), "I1".into()),
                ("inf".into(), "I9".into())
            ]
        );
        assert_eq!((s.euler, s.chi, s.q, s.p_g, s.b2, s.h11), (12, 1, 0, 0, 10, 10));
        let st = shioda_tate(&s, None).unwrap();
        assert!(st.extremal);
        assert_eq!(st.triv_rank, 10);
        assert_eq!(s.geometric_fibers().len(), 4);
        assert_eq!(s.geometric_fibers()[2].label, "t^2+3*t+9#1");
    }

    #[test]
    fn product_surface() {
        let s = classify_all(&WeierstrassModel::from_i64([&[], &[], &[], &[], &[1]])).unwrap();
        assert!(s.fibers.is_empty());
        assert_eq!((s.chi, s.q, s.h11), (0, 1, 2));
        let st = shioda_tate(&s, None).unwrap();
        assert_eq!(st.triv_rank, 2);
        assert!(!st.extremal);
        assert!(s.isotrivial);
    }

    #[test]
    fn non_minimal_place_is_rescaled() {
        // y^2 = x^3 + t^7 is y^2 = x^3 + t after dividing out t^6 at t = 0
        let w = WeierstrassModel::from_i64([&[], &[], &[], &[], &[0, 0, 0, 0, 0, 0, 0, 1]]);
        let s = classify_all(&w).unwrap();
        let at0 = s.fiber_at(&Place::at(&Rational::from_integer(0.into()))).unwrap();
        assert_eq!(at0.kind, KodairaType::II);
        assert_eq!(at0.rescaled, 1);
        assert_eq!(s.euler % 12, 0);
    }

    #[test]
    fn rank_hint_overflow() {
        let s = classify_all(&WeierstrassModel::from_i64([&[0, 1], &[], &[1], &[], &[]])).unwrap();
        assert!(shioda_tate(&s, Some(1)).is_err());
    }
}

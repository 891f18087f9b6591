//! Named jacobian elliptic surfaces over P^1 with known fibres and torsion.

use serde::Serialize;

use crate::algebra::{int, parse_rational, Poly, Rational};
use crate::construction::JacobianInput;
use crate::error::{Error, Result};
use crate::kodaira::{classify_all, SurfaceData, WeierstrassModel};
use crate::verify::Provenance;

pub const NAMES: [&str; 8] = ["X22", "X33", "X44", "X11", "X3333", "X8211", "SEC9", "SEC10"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub model: WeierstrassModel,
    /// Whether the equation is quoted from the literature or was derived here.
    pub equation: Provenance,
    /// Expected `(place, type)` pairs.
    pub fibers: Vec<(String, String)>,
    pub torsion: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation_order: Option<u32>,
    pub note: String,
}

fn poly(c: &[i64]) -> Poly {
    Poly::from_i64(c)
}

fn fibers(list: &[(&str, &str)]) -> Vec<(String, String)> {
    list.iter().map(|(p, t)| (p.to_string(), t.to_string())).collect()
}

fn split_param(name: &str) -> Result<(&str, Option<Rational>)> {
    match name.split_once('(') {
        None => Ok((name, None)),
        Some((base, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::invalid(format!("malformed catalog name {name:?}")))?;
            Ok((base, Some(parse_rational(inner)?)))
        }
    }
}

/// Looks up a catalog entry. `X11` takes an optional parameter, `X11(3/5)`;
/// `SEC9` takes the quadratic `a2 = t^2 + c` via `SEC9(c)`.
pub fn entry(name: &str) -> Result<CatalogEntry> {
    let (base, param) = split_param(name)?;
    if param.is_some() && !matches!(base, "X11" | "SEC9") {
        return Err(Error::invalid(format!("{base} takes no parameter")));
    }
    let z = || Poly::zero();
    let e = match base {
        "X22" => CatalogEntry {
            name: base.into(),
            model: WeierstrassModel::new(z(), z(), z(), z(), poly(&[0, 1])),
            equation: Provenance::Derived,
            fibers: fibers(&[("0", "II"), ("inf", "II*")]),
            torsion: vec![],
            rotation_order: Some(6),
            note: "y^2 = x^3 + t".into(),
        },
        "X33" => CatalogEntry {
            name: base.into(),
            model: WeierstrassModel::new(z(), z(), z(), poly(&[0, 1]), z()),
            equation: Provenance::Literature,
            fibers: fibers(&[("0", "III"), ("inf", "III*")]),
            torsion: vec![2],
            rotation_order: Some(4),
            note: "y^2 = x^3 + t x".into(),
        },
        "X44" => CatalogEntry {
            name: base.into(),
            model: WeierstrassModel::new(z(), z(), poly(&[0, 1]), z(), z()),
            equation: Provenance::Literature,
            fibers: fibers(&[("0", "IV"), ("inf", "IV*")]),
            torsion: vec![3],
            rotation_order: Some(3),
            note: "y^2 + t y = x^3".into(),
        },
        "X11" => {
            let lambda = param.unwrap_or_else(|| int(2));
            if lambda == int(0) || lambda == Rational::new(1.into(), 4.into()) {
                return Err(Error::invalid(format!("X11 needs lambda not in {{0, 1/4}}, got {lambda}")));
            }
            CatalogEntry {
                name: format!("X11({lambda})"),
                model: WeierstrassModel::new(
                    z(),
                    poly(&[0, 1]),
                    z(),
                    Poly::monomial(lambda.clone(), 2),
                    z(),
                ),
                equation: Provenance::Literature,
                fibers: fibers(&[("0", "I0*"), ("inf", "I0*")]),
                torsion: vec![2, 2],
                rotation_order: Some(2),
                note: format!("y^2 = x^3 + t x^2 + {lambda} t^2 x"),
            }
        }
        "X3333" => CatalogEntry {
            name: base.into(),
            model: WeierstrassModel::new(poly(&[0, 3]), z(), poly(&[-1, 0, 0, 1]), z(), z()),
            equation: Provenance::Derived,
            fibers: fibers(&[("1", "I3"), ("t^2+t+1", "I3"), ("inf", "I3")]),
            torsion: vec![3, 3],
            rotation_order: None,
            note: "y^2 + 3 t x y + (t^3 - 1) y = x^3".into(),
        },
        "X8211" => CatalogEntry {
            name: base.into(),
            model: WeierstrassModel::new(z(), poly(&[2, 0, 2]), z(), poly(&[1]), z()),
            equation: Provenance::Derived,
            fibers: fibers(&[("0", "I2"), ("t^2+2", "I1"), ("inf", "I8")]),
            torsion: vec![4],
            rotation_order: None,
            note: "y^2 = x (x^2 + 2 (t^2 + 1) x + 1)".into(),
        },
        "SEC9" => {
            let c = param.unwrap_or_else(|| int(0));
            let a2 = Poly::from_coeffs(vec![int(2) * &c, int(0), int(2)]);
            let w = WeierstrassModel::new(z(), a2, z(), poly(&[1]), z());
            let surface = classify_all(&w)?;
            let ok = surface.fiber_multiset()
                == [(crate::kodaira::KodairaType::I(1), 4), (crate::kodaira::KodairaType::I(8), 1)]
                    .into_iter()
                    .collect();
            if !ok {
                return Err(Error::invalid(format!("SEC9({c}) is not a generic member: a2^2 - 1 must be squarefree")));
            }
            let fibs: Vec<(String, String)> = surface
                .fibers
                .iter()
                .map(|f| (f.place.label(), f.kind.to_string()))
                .collect();
            CatalogEntry {
                name: if c == int(0) { base.into() } else { format!("SEC9({c})") },
                model: w,
                equation: Provenance::Literature,
                fibers: fibs,
                torsion: vec![2],
                rotation_order: None,
                note: format!("y^2 = x (x^2 + 2 a2 x + 1), a2 = {}", Poly::from_coeffs(vec![c.clone(), int(0), int(1)])),
            }
        }
        "SEC10" => CatalogEntry {
            name: base.into(),
            model: WeierstrassModel::new(poly(&[0, 1]), z(), poly(&[1]), z(), z()),
            equation: Provenance::Literature,
            fibers: fibers(&[("3", "I1"), ("t^2+3*t+9", "I1"), ("inf", "I9")]),
            torsion: vec![3],
            rotation_order: None,
            note: "y^2 + t x y + y = x^3".into(),
        },
        other => {
            return Err(Error::invalid(format!(
                "unknown catalog surface {other:?}; known: {}",
                NAMES.join(", ")
            )))
        }
    };
    Ok(e)
}

fn check_fibers(e: &CatalogEntry, s: &SurfaceData) -> Result<()> {
    let mut got: Vec<(String, String)> =
        s.fibers.iter().map(|f| (f.place.label(), f.kind.to_string())).collect();
    let mut want = e.fibers.clone();
    got.sort();
    want.sort();
    if got != want {
        return Err(Error::Inconsistent(format!(
            "{}: equation gives fibres {got:?}, stored {want:?}",
            e.name
        )));
    }
    Ok(())
}

/// Classifies the stored equation, checks it against the stored fibres and
/// torsion, and returns the populated jacobian.
pub fn load(name: &str) -> Result<JacobianInput> {
    let e = entry(name)?;
    let surface = classify_all(&e.model)?;
    check_fibers(&e, &surface)?;
    let mut j = JacobianInput::from_surface(surface, Some(e.name.clone()))?;
    if j.torsion.factors != e.torsion {
        return Err(Error::Inconsistent(format!(
            "{}: torsion {:?} differs from stored {:?}",
            e.name, j.torsion.factors, e.torsion
        )));
    }
    if j.surface.isotrivial != e.rotation_order.is_some() {
        return Err(Error::Inconsistent(format!("{}: isotriviality mismatch", e.name)));
    }
    j.rotation_order = e.rotation_order;
    Ok(j)
}

/// Accepts `catalog:NAME` or a bare name.
pub fn load_ref(r: &str) -> Result<JacobianInput> {
    load(r.strip_prefix("catalog:").unwrap_or(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_is_consistent() {
        for name in NAMES {
            let j = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(j.surface.euler, 12, "{name}");
        }
        load("X11(3/5)").unwrap();
        assert!(load("X11(1/4)").is_err());
        assert!(load("SEC9(1)").is_err());
        load("SEC9(3)").unwrap();
        assert!(load("X99").is_err());
    }

    #[test]
    fn incidences() {
        let sec10 = load("SEC10").unwrap();
        let i = sec10.torsion.slot_index("inf").unwrap();
        assert_eq!(sec10.torsion.generators[0][i], 3);
        let sec9 = load("SEC9").unwrap();
        let i = sec9.torsion.slot_index("inf").unwrap();
        assert_eq!(sec9.torsion.generators[0][i], 4);
        assert!(load("X3333").unwrap().extremal);
        assert!(!sec9.extremal);
    }
}

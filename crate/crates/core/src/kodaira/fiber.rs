use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::Place;
use crate::error::{Error, Result};

/// Kodaira type of a fibre. `I(0)` is a smooth fibre.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum KodairaType {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

/// Root lattice spanned by the fibre components missing the zero section.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Dynkin {
    A(u32),
    D(u32),
    E(u32),
}

impl Dynkin {
    pub fn rank(self) -> u32 {
        match self {
            Dynkin::A(n) | Dynkin::D(n) | Dynkin::E(n) => n,
        }
    }
}

impl fmt::Display for Dynkin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dynkin::A(n) => write!(f, "A{n}"),
            Dynkin::D(n) => write!(f, "D{n}"),
            Dynkin::E(n) => write!(f, "E{n}"),
        }
    }
}

impl KodairaType {
    pub fn euler(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 6,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Number of irreducible components.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 5,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    pub fn dynkin(self) -> Dynkin {
        match self {
            KodairaType::I(n) => Dynkin::A(n.saturating_sub(1)),
            KodairaType::IStar(n) => Dynkin::D(n + 4),
            KodairaType::II => Dynkin::A(0),
            KodairaType::III => Dynkin::A(1),
            KodairaType::IV => Dynkin::A(2),
            KodairaType::IVStar => Dynkin::E(6),
            KodairaType::IIIStar => Dynkin::E(7),
            KodairaType::IIStar => Dynkin::E(8),
        }
    }

    /// Invariant factors of the group of simple components.
    pub fn component_group(self) -> Vec<u32> {
        match self {
            KodairaType::I(n) if n >= 2 => vec![n],
            KodairaType::I(_) | KodairaType::II | KodairaType::IIStar => vec![],
            KodairaType::IStar(n) if n % 2 == 0 => vec![2, 2],
            KodairaType::IStar(_) => vec![4],
            KodairaType::III | KodairaType::IIIStar => vec![2],
            KodairaType::IV | KodairaType::IVStar => vec![3],
        }
    }

    pub fn component_group_order(self) -> u32 {
        self.component_group().iter().product()
    }

    pub fn is_additive(self) -> bool {
        !matches!(self, KodairaType::I(_))
    }

    pub fn is_smooth(self) -> bool {
        self == KodairaType::I(0)
    }

    pub fn is_reducible(self) -> bool {
        self.components() > 1
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = match s.trim() {
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "IV*" => KodairaType::IVStar,
            "III*" => KodairaType::IIIStar,
            "II*" => KodairaType::IIStar,
            other => {
                let body = other
                    .strip_prefix('I')
                    .ok_or_else(|| Error::invalid(format!("unknown fibre type {s:?}")))?;
                let (digits, star) = match body.strip_suffix('*') {
                    Some(d) => (d, true),
                    None => (body, false),
                };
                let n: u32 = digits
                    .parse()
                    .map_err(|_| Error::invalid(format!("unknown fibre type {s:?}")))?;
                if star {
                    KodairaType::IStar(n)
                } else {
                    KodairaType::I(n)
                }
            }
        };
        Ok(t)
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for KodairaType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Valuation that may be infinite (for the zero polynomial).
pub type Val = Option<u32>;

fn at_least(v: Val, n: u32) -> bool {
    v.is_none_or(|x| x >= n)
}

fn exactly(v: Val, n: u32) -> bool {
    v == Some(n)
}

/// Kodaira type of a minimal model from the valuations of `c4, c6, disc`
/// in characteristic zero.
pub fn classify_valuations(v4: Val, v6: Val, vd: u32) -> Option<KodairaType> {
    if vd == 0 {
        return Some(KodairaType::I(0));
    }
    if exactly(v4, 0) {
        return Some(KodairaType::I(vd));
    }
    if !at_least(v4, 1) || !at_least(v6, 1) {
        return None;
    }
    if exactly(v4, 2) && exactly(v6, 3) && vd > 6 {
        return Some(KodairaType::IStar(vd - 6));
    }
    let t = match vd {
        2 if exactly(v6, 1) => KodairaType::II,
        3 if exactly(v4, 1) && at_least(v6, 2) => KodairaType::III,
        4 if at_least(v4, 2) && exactly(v6, 2) => KodairaType::IV,
        6 if at_least(v4, 2) && at_least(v6, 3) => KodairaType::IStar(0),
        8 if at_least(v4, 3) && exactly(v6, 4) => KodairaType::IVStar,
        9 if exactly(v4, 3) && at_least(v6, 5) => KodairaType::IIIStar,
        10 if at_least(v4, 4) && exactly(v6, 5) => KodairaType::IIStar,
        _ => return None,
    };
    Some(t)
}

/// A singular fibre over a closed point together with the valuations of the
/// minimal model there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberRecord {
    pub place: Place,
    #[serde(rename = "type")]
    pub kind: KodairaType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuations: Option<[Val; 3]>,
    #[serde(default)]
    pub rescaled: u32,
}

impl FiberRecord {
    pub fn new(place: Place, kind: KodairaType) -> Self {
        FiberRecord { place, kind, valuations: None, rescaled: 0 }
    }

    /// Number of geometric fibres over the place.
    pub fn count(&self) -> usize {
        self.place.degree()
    }
}

/// Classifies the fibre at `place` from raw valuations, dividing out fourth,
/// sixth and twelfth powers of the uniformiser until the model is minimal.
pub fn classify_fibre(place: &Place, v4: Val, v6: Val, vd: u32) -> Result<FiberRecord> {
    let (mut v4, mut v6, mut vd) = (v4, v6, vd);
    let mut rescaled = 0;
    while at_least(v4, 4) && at_least(v6, 6) && vd >= 12 {
        v4 = v4.map(|x| x - 4);
        v6 = v6.map(|x| x - 6);
        vd -= 12;
        rescaled += 1;
    }
    let kind = classify_valuations(v4, v6, vd).ok_or_else(|| Error::Unclassifiable {
        place: place.label(),
        detail: format!("valuations (c4, c6, disc) = ({v4:?}, {v6:?}, {vd})"),
    })?;
    Ok(FiberRecord { place: place.clone(), kind, valuations: Some([v4, v6, Some(vd)]), rescaled })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table() {
        let s = Some;
        assert_eq!(classify_valuations(s(0), s(0), 5), Some(KodairaType::I(5)));
        assert_eq!(classify_valuations(s(1), s(1), 2), Some(KodairaType::II));
        assert_eq!(classify_valuations(None, s(1), 2), Some(KodairaType::II));
        assert_eq!(classify_valuations(s(1), None, 3), Some(KodairaType::III));
        assert_eq!(classify_valuations(None, s(2), 4), Some(KodairaType::IV));
        assert_eq!(classify_valuations(s(2), s(3), 6), Some(KodairaType::IStar(0)));
        assert_eq!(classify_valuations(None, s(3), 6), Some(KodairaType::IStar(0)));
        assert_eq!(classify_valuations(s(2), s(3), 9), Some(KodairaType::IStar(3)));
        assert_eq!(classify_valuations(s(3), s(4), 8), Some(KodairaType::IVStar));
        assert_eq!(classify_valuations(s(3), None, 9), Some(KodairaType::IIIStar));
        assert_eq!(classify_valuations(s(4), s(5), 10), Some(KodairaType::IIStar));
        assert_eq!(classify_valuations(s(1), s(2), 5), None);
    }

    #[test]
    fn rescaling() {
        let r = classify_fibre(&Place::Infinity, Some(5), Some(7), 14).unwrap();
        assert_eq!(r.kind, KodairaType::II);
        assert_eq!(r.rescaled, 1);
    }

    #[test]
    fn numerology() {
        let all = [
            KodairaType::I(1),
            KodairaType::I(9),
            KodairaType::IStar(0),
            KodairaType::IStar(3),
            KodairaType::II,
            KodairaType::III,
            KodairaType::IV,
            KodairaType::IVStar,
            KodairaType::IIIStar,
            KodairaType::IIStar,
        ];
        for t in all {
            // e = m + 1 for additive fibres, e = m for multiplicative ones
            let shift = u32::from(t.is_additive());
            assert_eq!(t.euler(), t.components() + shift, "{t}");
            assert_eq!(t.dynkin().rank(), t.components() - 1, "{t}");
            assert_eq!(t.to_string().parse::<KodairaType>().unwrap(), t);
        }
        assert_eq!(KodairaType::IStar(2).component_group(), vec![2, 2]);
        assert_eq!(KodairaType::IStar(1).component_group(), vec![4]);
        assert!("I*".parse::<KodairaType>().is_err());
    }
}

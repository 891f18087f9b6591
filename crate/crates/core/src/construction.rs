//! Quotients of base changes of jacobian elliptic surfaces by a diagonal
//! torsion group, tracked at the level of fibres and numerical invariants.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{int, Rational};
use crate::error::{Error, Result};
use crate::kodaira::{classify_all, shioda_tate, KodairaType, SurfaceData, WeierstrassModel};
use crate::lattice::{
    check_splitting_at_fiber, comp_order, group_name, subgroup_structure, torsion_group, Comp,
    TorsionGroup,
};
use crate::modular::{factor_u64, prime_conditions, strict_bound};

/// A jacobian elliptic surface together with its torsion sections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianInput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub surface: SurfaceData,
    pub torsion: TorsionGroup,
    pub extremal: bool,
    /// Order of the automorphism group of the generic fibre, for the
    /// isotrivial catalog surfaces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation_order: Option<u32>,
}

impl JacobianInput {
    pub fn from_surface(surface: SurfaceData, name: Option<String>) -> Result<Self> {
        let torsion = torsion_group(&surface)?;
        let extremal = shioda_tate(&surface, None)?.extremal;
        Ok(JacobianInput { name, surface, torsion, extremal, rotation_order: None })
    }

    pub fn from_model(w: &WeierstrassModel) -> Result<Self> {
        Self::from_surface(classify_all(w)?, None)
    }

    /// The subgroup spanned by `gens`, which must be an invariant-factor basis
    /// with the given orders.
    pub fn subgroup(&self, factors: &[u64], gens: Vec<Vec<Comp>>) -> Result<TorsionGroup> {
        let factors: Vec<u64> = factors.iter().copied().filter(|&f| f != 1).collect();
        if factors.len() != gens.len() {
            return Err(Error::invalid(format!(
                "{} generators given for invariant factors {factors:?}",
                gens.len()
            )));
        }
        if factors.windows(2).any(|w| w[0] % w[1] != 0) {
            return Err(Error::invalid(format!("invariant factors {factors:?} must satisfy N' | N")));
        }
        let members: HashSet<Vec<Comp>> =
            self.torsion.elements().into_iter().map(|(_, e)| e).collect();
        for (g, &f) in gens.iter().zip(&factors) {
            if g.len() != self.torsion.slots.len() {
                return Err(Error::invalid(format!(
                    "generator {g:?} needs one component per reducible fibre ({})",
                    self.torsion.slots.len()
                )));
            }
            if !members.contains(g) {
                return Err(Error::invalid(format!("{g:?} is not a torsion section")));
            }
            if self.order_of(g) != f {
                return Err(Error::invalid(format!("generator {g:?} does not have order {f}")));
            }
        }
        let span = subgroup_structure(&self.torsion, &gens);
        if span.order() != factors.iter().product::<u64>() {
            return Err(Error::invalid("generators are not independent"));
        }
        Ok(TorsionGroup { slots: self.torsion.slots.clone(), factors, generators: gens })
    }

    /// Subgroup generated by torsion coordinates `coords` (one vector per
    /// generator, in the basis of the full torsion group).
    pub fn subgroup_from_coords(&self, coords: &[Vec<u64>]) -> Result<TorsionGroup> {
        let gens: Vec<Vec<Comp>> = coords.iter().map(|c| self.torsion.element(c)).collect();
        Ok(subgroup_structure(&self.torsion, &gens))
    }

    fn order_of(&self, e: &[Comp]) -> u64 {
        element_order(&self.torsion, e)
    }
}

fn element_order(g: &TorsionGroup, e: &[Comp]) -> u64 {
    g.slots.iter().zip(e).fold(1, |acc, (s, &c)| acc.lcm(&comp_order(s.kind, c)))
}

/// Local monodromy of the cover at a branch point, in coordinates with
/// respect to the generators of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDatum {
    pub point: String,
    pub monodromy: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCount {
    #[serde(rename = "type")]
    pub kind: KodairaType,
    pub count: u64,
}

/// Fibre of the quotient surface over a point of the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientFiber {
    pub point: String,
    pub multiplicity: u64,
    /// Type of the reduced fibre.
    #[serde(rename = "type")]
    pub kind: KodairaType,
}

impl QuotientFiber {
    pub fn label(&self) -> String {
        if self.multiplicity > 1 {
            format!("{}{}", self.multiplicity, self.kind)
        } else {
            self.kind.to_string()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSummary {
    pub degree: u64,
    pub base_genus: i64,
    pub euler: i64,
    pub fibers: Vec<FiberCount>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KodairaDim {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Equals,
    Contains,
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutQVerdict {
    pub group: String,
    pub factors: Vec<u64>,
    pub order: u64,
    pub relation: Relation,
    /// Order of the image in the automorphism group of the base.
    pub base_order: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Audit {
    pub rule: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<String>,
    pub group: String,
    pub group_order: u64,
    pub cover: CoverSummary,
    pub fibers: Vec<QuotientFiber>,
    pub euler: i64,
    pub chi: i64,
    pub q: i64,
    pub p_g: i64,
    pub isotrivial: bool,
    /// `2g - 2 + chi + sum (1 - 1/m)`, the degree of the canonical class on the base.
    pub canonical_degree: String,
    pub kodaira_dim: KodairaDim,
    pub enriques: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p2: Option<i64>,
    pub autq: AutQVerdict,
    pub audits: Vec<Audit>,
}

impl ConstructionReport {
    pub fn multiple_fibers(&self) -> Vec<&QuotientFiber> {
        self.fibers.iter().filter(|f| f.multiplicity > 1).collect()
    }

    /// Multiple fibres as sorted labels such as `3I9`.
    pub fn multiple_labels(&self) -> Vec<String> {
        let mut v: Vec<String> = self.multiple_fibers().iter().map(|f| f.label()).collect();
        v.sort();
        v
    }
}

enum Site {
    Singular { kind: KodairaType, slot: Option<usize> },
    Smooth,
}

struct Branch {
    label: String,
    site: Site,
    element: Vec<Comp>,
    order: u64,
}

fn reduce_coords(g: &TorsionGroup, coords: &[i64]) -> Result<Vec<u64>> {
    let n = g.factors.len();
    if coords.len() < n || coords[n..].iter().any(|&c| c != 0) {
        return Err(Error::invalid(format!(
            "monodromy {coords:?} does not match group {}",
            g.name()
        )));
    }
    Ok(g.factors
        .iter()
        .zip(coords)
        .map(|(&f, &c)| c.rem_euclid(f as i64) as u64)
        .collect())
}

fn resolve_branches(j: &JacobianInput, g: &TorsionGroup, data: &[BranchDatum]) -> Result<Vec<Branch>> {
    let geo = j.surface.geometric_fibers();
    let multi_places: HashSet<String> = j
        .surface
        .fibers
        .iter()
        .filter(|f| f.count() > 1)
        .map(|f| f.place.label())
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for b in data {
        if !seen.insert(b.point.clone()) {
            return Err(Error::invalid(format!("branch point {} listed twice", b.point)));
        }
        if multi_places.contains(&b.point) {
            return Err(Error::invalid(format!(
                "{} is a place of degree > 1; name a geometric point as {}#j",
                b.point, b.point
            )));
        }
        let site = match geo.iter().find(|f| f.label == b.point) {
            Some(f) => Site::Singular { kind: f.kind, slot: g.slot_index(&f.label) },
            None => Site::Smooth,
        };
        let coords = reduce_coords(g, &b.monodromy)?;
        if coords.iter().all(|&c| c == 0) {
            return Err(Error::invalid(format!("monodromy at {} is trivial", b.point)));
        }
        let element = g.element(&coords);
        let order = monodromy_order(g, &coords);
        out.push(Branch { label: b.point.clone(), site, element, order });
    }
    Ok(out)
}

fn monodromy_order(g: &TorsionGroup, coords: &[u64]) -> u64 {
    g.factors
        .iter()
        .zip(coords)
        .fold(1, |acc, (&f, &c)| acc.lcm(&(f / f.gcd(&c))))
}

/// Image of `G` in the component group of a slot.
fn component_image(g: &TorsionGroup, slot: usize) -> u64 {
    let set: HashSet<Comp> = g.elements().into_iter().map(|(_, e)| e[slot]).collect();
    set.len() as u64
}

fn validate(j: &JacobianInput, g: &TorsionGroup, branches: &[Branch]) -> Result<()> {
    if j.surface.chi <= 0 {
        return Err(Error::Construction("the jacobian must have chi > 0".into()));
    }
    if g.order() <= 1 {
        return Err(Error::Construction("the group G must be nontrivial".into()));
    }
    let mut total = vec![0u64; g.factors.len()];
    let mut coords_list = Vec::new();
    for b in branches {
        let coords = coords_of(g, &b.element)?;
        for (t, (c, f)) in total.iter_mut().zip(coords.iter().zip(&g.factors)) {
            *t = (*t + c) % f;
        }
        coords_list.push(b.element.clone());
    }
    if total.iter().any(|&t| t != 0) {
        return Err(Error::Construction(format!(
            "monodromies do not sum to zero in {} (sum {total:?})",
            g.name()
        )));
    }
    let refs: Vec<Vec<Comp>> = coords_list;
    if subgroup_structure(g, &refs).order() != g.order() {
        return Err(Error::Construction(format!(
            "monodromies do not generate {}; the cover would be disconnected",
            g.name()
        )));
    }
    for (i, slot) in g.slots.iter().enumerate() {
        if slot.kind.is_additive() {
            continue;
        }
        let image = component_image(g, i);
        if image <= 1 {
            continue;
        }
        if check_splitting_at_fiber(g, &slot.label)?.is_none() {
            return Err(Error::Construction(format!(
                "{} does not split at the {} fibre over {}",
                g.name(),
                slot.kind,
                slot.label
            )));
        }
        if !branches.iter().any(|b| b.label == slot.label) {
            return Err(Error::Construction(format!(
                "the {} fibre over {} is rotated by G but is not a branch point",
                slot.kind, slot.label
            )));
        }
    }
    for b in branches {
        let Site::Singular { kind, slot } = b.site else { continue };
        if kind.is_additive() {
            return Err(Error::Construction(format!(
                "branching at the additive fibre {kind} over {} is not allowed",
                b.label
            )));
        }
        let rot = slot.map_or(1, |s| comp_order(kind, b.element[s]));
        if rot != b.order {
            return Err(Error::Construction(format!(
                "non-free action: monodromy of order {} rotates the {kind} fibre over {} with order {rot}",
                b.order, b.label
            )));
        }
        let image = slot.map_or(1, |s| component_image(g, s));
        if b.order != image {
            return Err(Error::Construction(format!(
                "partial stabilizer at {}: monodromy order {} but G rotates the fibre with order {image}",
                b.label, b.order
            )));
        }
    }
    Ok(())
}

fn coords_of(g: &TorsionGroup, e: &[Comp]) -> Result<Vec<u64>> {
    g.elements()
        .into_iter()
        .find(|(_, x)| x == e)
        .map(|(c, _)| c)
        .ok_or_else(|| Error::invalid(format!("{e:?} is not in {}", g.name())))
}

fn cover_summary(j: &JacobianInput, g: &TorsionGroup, branches: &[Branch]) -> CoverSummary {
    let n = g.order();
    let mut counts: BTreeMap<KodairaType, u64> = BTreeMap::new();
    for f in j.surface.geometric_fibers() {
        match branches.iter().find(|b| b.label == f.label) {
            Some(b) => {
                let KodairaType::I(k) = f.kind else { unreachable!("validated") };
                *counts.entry(KodairaType::I(k * b.order as u32)).or_insert(0) += n / b.order;
            }
            None => *counts.entry(f.kind).or_insert(0) += n,
        }
    }
    let ramification: i64 = branches.iter().map(|b| (n - n / b.order) as i64).sum();
    let base_genus = (n as i64 * (2 * j.surface.base_genus - 2) + ramification) / 2 + 1;
    CoverSummary {
        degree: n,
        base_genus,
        euler: n as i64 * j.surface.euler,
        fibers: counts.into_iter().map(|(kind, count)| FiberCount { kind, count }).collect(),
    }
}

/// Fibres of the quotient: branch points become multiple fibres, the rest is
/// copied from the jacobian.
pub fn transform_fibers(j: &JacobianInput, g: &TorsionGroup, data: &[BranchDatum]) -> Result<(CoverSummary, Vec<QuotientFiber>)> {
    let branches = resolve_branches(j, g, data)?;
    validate(j, g, &branches)?;
    Ok(transform_checked(j, g, &branches))
}

fn transform_checked(j: &JacobianInput, g: &TorsionGroup, branches: &[Branch]) -> (CoverSummary, Vec<QuotientFiber>) {
    let mut fibers = Vec::new();
    for f in j.surface.geometric_fibers() {
        let m = branches.iter().find(|b| b.label == f.label).map_or(1, |b| b.order);
        fibers.push(QuotientFiber { point: f.label, multiplicity: m, kind: f.kind });
    }
    for b in branches {
        if matches!(b.site, Site::Smooth) {
            fibers.push(QuotientFiber { point: b.label.clone(), multiplicity: b.order, kind: KodairaType::I(0) });
        }
    }
    (cover_summary(j, g, branches), fibers)
}

/// `h^0(2K)` on the quotient via Riemann-Roch on the base, when the degree
/// is in the non-special range.
pub fn plurigenus_p2(base_genus: i64, chi: i64, multiplicities: &[u64]) -> Option<i64> {
    let multiple = multiplicities.iter().filter(|&&m| m > 1).count() as i64;
    let d = 2 * (2 * base_genus - 2 + chi) + multiple;
    if d < 0 {
        return Some(0);
    }
    if d > 2 * base_genus - 2 {
        Some(d + 1 - base_genus)
    } else {
        None
    }
}

fn canonical_degree(base_genus: i64, chi: i64, multiplicities: &[u64]) -> Rational {
    multiplicities
        .iter()
        .filter(|&&m| m > 1)
        .fold(int(2 * base_genus - 2 + chi), |acc, &m| acc + int(1) - Rational::new(1.into(), m.into()))
}

struct Example8 {
    rotation: u32,
    points: u64,
}

/// Cyclic base change of an isotrivial catalog surface, totally branched over
/// `dm` smooth fibres with equal monodromy.
fn example8_pattern(j: &JacobianInput, g: &TorsionGroup, branches: &[Branch]) -> Option<Example8> {
    let rotation = j.rotation_order?;
    if !matches!(j.name.as_deref()?.split('(').next()?, "X33" | "X44" | "X11") || g.factors.len() != 1 {
        return None;
    }
    let d = g.factors[0];
    let all_smooth = branches.iter().all(|b| matches!(b.site, Site::Smooth));
    let equal = branches.windows(2).all(|w| w[0].element == w[1].element);
    let generating = branches.iter().all(|b| b.order == d);
    let points = branches.len() as u64;
    (all_smooth && equal && generating && points % d == 0).then_some(Example8 { rotation, points })
}

fn verdict(
    j: &JacobianInput,
    g: &TorsionGroup,
    branches: &[Branch],
    p_g: i64,
    fibers: &[QuotientFiber],
) -> AutQVerdict {
    let s = &j.surface;
    let whole = |relation: Relation, reason: &str| AutQVerdict {
        group: g.name(),
        factors: g.factors.clone(),
        order: g.order(),
        relation,
        base_order: 1,
        reason: reason.to_string(),
    };
    let trivial = |relation: Relation, reason: &str| AutQVerdict {
        group: group_name(&[]),
        factors: Vec::new(),
        order: 1,
        relation,
        base_order: 1,
        reason: reason.to_string(),
    };
    if p_g > 0 {
        if s.isotrivial {
            return trivial(Relation::Trivial, "isotrivial fibration with p_g > 0");
        }
        if s.has_additive() {
            return trivial(Relation::Trivial, "additive fibre present with p_g > 0");
        }
        let multiple: Vec<&QuotientFiber> = fibers.iter().filter(|f| f.multiplicity > 1).collect();
        if multiple.iter().all(|f| f.kind.is_smooth()) {
            return trivial(Relation::Trivial, "all multiple fibres have smooth support with p_g > 0");
        }
        if j.extremal && j.torsion.order() == g.order() {
            return whole(Relation::Equals, "extremal jacobian with torsion equal to G");
        }
        return whole(Relation::Contains, "translations by G act trivially on cohomology");
    }
    if s.has_additive_reducible() {
        if let Some(e) = example8_pattern(j, g, branches) {
            let order = u64::from(e.rotation) * e.points;
            return AutQVerdict {
                group: group_name(&[order]),
                factors: vec![order],
                order,
                relation: Relation::Equals,
                base_order: e.points,
                reason: format!(
                    "generated by the lift of the weighted C* action of order {order}; r = {}, dm = {}",
                    e.rotation, e.points
                ),
            };
        }
        return trivial(
            Relation::Contains,
            "translations by G move components of an additive reducible fibre; \
             any numerically trivial group has order at most 4 times its image on the base",
        );
    }
    if g.order() == 9 {
        return whole(Relation::Equals, "order 9 is the maximum for p_g = 0 and is attained");
    }
    whole(Relation::Contains, "translations by G act trivially on cohomology")
}

fn audit(
    j: &JacobianInput,
    g: &TorsionGroup,
    r: &ConstructionReport,
    is_example8: bool,
) -> Result<Vec<Audit>> {
    let mut out = Vec::new();
    let mut push = |rule: &str, pass: bool, detail: String| {
        out.push(Audit { rule: rule.to_string(), pass, detail });
    };
    push(
        "euler",
        r.euler == 12 * r.chi && r.euler == j.surface.euler && r.chi == j.surface.chi,
        format!("e = {} = 12 chi, chi = {}", r.euler, r.chi),
    );
    let lcm = r.multiple_fibers().iter().fold(1u64, |acc, f| acc.lcm(&f.multiplicity));
    push(
        "multiplicities",
        g.order() % lcm == 0,
        format!("lcm of multiplicities {lcm} divides |G| = {}", g.order()),
    );
    let a = &r.autq;
    if a.relation != Relation::Trivial && a.order > 4 && !is_example8 {
        push(
            "additive-free",
            !j.surface.has_additive_reducible(),
            format!("|Aut_Q| = {} > 4 requires no additive reducible fibres", a.order),
        );
    }
    if r.p_g > 0 {
        let bound = strict_bound(r.q)?;
        push(
            "global-bound",
            a.order <= bound,
            format!("|Aut_Q| = {} < 12 pi^2 (q + 2), so at most {bound}", a.order),
        );
        for (p, _) in factor_u64(a.order) {
            let v = prime_conditions(p, r.chi, r.p_g, false)?;
            if v.applicable {
                push("prime", v.pass, format!("p = {p}: p_g >= {}, {} | chi", v.min_pg, v.chi_divisor));
            }
            let square = a.factors.len() == 2 && a.factors.iter().all(|f| f % p == 0);
            if square {
                let v = prime_conditions(p, r.chi, r.p_g, true)?;
                if v.applicable {
                    push(
                        "prime-square",
                        v.pass,
                        format!("(Z/{p})^2: p_g >= {}, {} | chi", v.min_pg, v.chi_divisor),
                    );
                }
            }
        }
    } else if !r.isotrivial {
        push("pg0-cap", a.order <= 9, format!("|Aut_Q| = {} <= 9", a.order));
        if a.order == 9 {
            let four_i3 = j.surface.fiber_multiset() == BTreeMap::from([(KodairaType::I(3), 4)]);
            push("pg0-equality", four_i3, "order 9 forces four I3 fibres on the jacobian".into());
        }
    } else {
        let s = r.multiple_fibers().len() as u64;
        match r.p2 {
            Some(p2) => {
                let ok = a.base_order <= s
                    && s as i64 <= p2 + 1
                    && (p2 + 1) % a.base_order as i64 == 0;
                push(
                    "base-divides",
                    ok,
                    format!("|Aut_Q|_B = {} <= s = {s} <= P2 + 1 = {}, and divides it", a.base_order, p2 + 1),
                );
            }
            None => push("base-divides", false, "P2 not computed".into()),
        }
        push(
            "isotrivial-cap",
            a.order <= 4 * a.base_order,
            format!("|Aut_Q| = {} <= 4 |Aut_Q|_B = {}", a.order, 4 * a.base_order),
        );
    }
    if let Some(bad) = out.iter().find(|a| !a.pass) {
        return Err(Error::BoundViolation(format!("{}: {}", bad.rule, bad.detail)));
    }
    Ok(out)
}

/// Runs the whole construction and audits the result.
pub fn construct(j: &JacobianInput, g: &TorsionGroup, data: &[BranchDatum]) -> Result<ConstructionReport> {
    let branches = resolve_branches(j, g, data)?;
    validate(j, g, &branches)?;
    let (cover, fibers) = transform_checked(j, g, &branches);
    let s = &j.surface;
    let q = s.base_genus;
    let p_g = s.chi - 1 + q;
    let mults: Vec<u64> = fibers.iter().map(|f| f.multiplicity).collect();
    let kdeg = canonical_degree(q, s.chi, &mults);
    let kodaira_dim = if kdeg > int(0) {
        KodairaDim::One
    } else if kdeg == int(0) {
        KodairaDim::Zero
    } else {
        return Err(Error::Construction(format!(
            "canonical degree {kdeg} < 0: rational or ruled output, outside the scope of the construction"
        )));
    };
    let enriques = kodaira_dim == KodairaDim::Zero && p_g == 0 && q == 0;
    let p2 = plurigenus_p2(q, s.chi, &mults);
    let autq = verdict(j, g, &branches, p_g, &fibers);
    let mut report = ConstructionReport {
        jacobian: j.name.clone(),
        group: g.name(),
        group_order: g.order(),
        cover,
        fibers,
        euler: s.euler,
        chi: s.chi,
        q,
        p_g,
        isotrivial: s.isotrivial,
        canonical_degree: kdeg.to_string(),
        kodaira_dim,
        enriques,
        p2,
        autq,
        audits: Vec::new(),
    };
    let is_example8 = example8_pattern(j, g, &branches).is_some() && s.has_additive_reducible();
    report.audits = audit(j, g, &report, is_example8)?;
    Ok(report)
}

/// The jacobian of a construction input: a catalog reference such as
/// `catalog:SEC10`, or an explicit model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JacobianRef {
    Catalog(String),
    Model(WeierstrassModel),
}

/// `G = Z/N x Z/N'` given by the components its generators meet: `incidence`
/// maps a fibre label to one component per nontrivial generator. Unlisted
/// fibres are met in the identity component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "Nprime", default = "one")]
    pub n_prime: u64,
    #[serde(default)]
    pub incidence: BTreeMap<String, Vec<Comp>>,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructInput {
    pub jacobian: JacobianRef,
    /// Defaults to the full torsion group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    pub branch: Vec<BranchDatum>,
}

impl ConstructInput {
    pub fn jacobian(&self) -> Result<JacobianInput> {
        match &self.jacobian {
            JacobianRef::Catalog(r) => crate::catalog::load_ref(r),
            JacobianRef::Model(w) => JacobianInput::from_model(w),
        }
    }

    pub fn group(&self, j: &JacobianInput) -> Result<TorsionGroup> {
        let Some(spec) = &self.group else { return Ok(j.torsion.clone()) };
        let factors: Vec<u64> = [spec.n, spec.n_prime].into_iter().filter(|&f| f != 1).collect();
        for label in spec.incidence.keys() {
            if j.torsion.slot_index(label).is_none() {
                return Err(Error::invalid(format!("no reducible fibre labelled {label}")));
            }
        }
        let mut gens = vec![vec![0 as Comp; j.torsion.slots.len()]; factors.len()];
        for (i, slot) in j.torsion.slots.iter().enumerate() {
            let Some(comps) = spec.incidence.get(&slot.label) else { continue };
            if comps.len() != factors.len() {
                return Err(Error::invalid(format!(
                    "incidence at {} lists {} components for {} generators",
                    slot.label,
                    comps.len(),
                    factors.len()
                )));
            }
            for (g, &c) in gens.iter_mut().zip(comps) {
                g[i] = c;
            }
        }
        j.subgroup(&factors, gens)
    }
}

/// Parses a construction input document and runs it.
pub fn run(json: &str) -> Result<ConstructionReport> {
    let input: ConstructInput =
        serde_json::from_str(json).map_err(|e| Error::invalid(format!("construction input: {e}")))?;
    let j = input.jacobian()?;
    let g = input.group(&j)?;
    construct(&j, &g, &input.branch)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sec10() -> JacobianInput {
        JacobianInput::from_model(&WeierstrassModel::from_i64([&[0, 1], &[], &[1], &[], &[]])).unwrap()
    }

    fn branch(point: &str, m: &[i64]) -> BranchDatum {
        BranchDatum { point: point.into(), monodromy: m.to_vec() }
    }

    #[test]
    fn triple_fibres() {
        let j = sec10();
        let g = j.torsion.clone();
        let r = construct(&j, &g, &[branch("inf", &[1]), branch("p", &[2])]).unwrap();
        assert_eq!(r.multiple_labels(), vec!["3I0", "3I9"]);
        assert_eq!((r.chi, r.q, r.p_g, r.kodaira_dim), (1, 0, 0, KodairaDim::One));
        assert_eq!(r.autq.relation, Relation::Contains);
        assert_eq!(r.autq.group, "Z/3");
        assert_eq!(r.cover.base_genus, 0);
        assert_eq!(r.cover.euler, 36);
    }

    #[test]
    fn rejections() {
        let j = sec10();
        let g = j.torsion.clone();
        let code = |b: &[BranchDatum]| construct(&j, &g, b).unwrap_err().code();
        assert_eq!(code(&[branch("inf", &[1]), branch("p", &[1])]), "construction_rejected");
        assert_eq!(code(&[branch("p", &[1]), branch("q", &[2])]), "construction_rejected");
        assert_eq!(code(&[branch("inf", &[1]), branch("3", &[2])]), "construction_rejected");
        assert_eq!(code(&[branch("inf", &[1]), branch("inf", &[2])]), "invalid_input");
        assert_eq!(code(&[branch("inf", &[1]), branch("p", &[2]), branch("q", &[0])]), "invalid_input");
        assert_eq!(code(&[branch("inf", &[1]), branch("t^2+3*t+9", &[2])]), "invalid_input");
    }

    #[test]
    fn json_input() {
        let doc = r#"{"jacobian":"catalog:SEC10","group":{"N":3,"incidence":{"inf":[3]}},
            "branch":[{"point":"inf","monodromy":[1]},{"point":"p","monodromy":[2]}]}"#;
        let r = run(doc).unwrap();
        assert_eq!(r.multiple_labels(), vec!["3I0", "3I9"]);
        let input: ConstructInput = serde_json::from_str(doc).unwrap();
        let back: ConstructInput = serde_json::from_str(&serde_json::to_string(&input).unwrap()).unwrap();
        assert_eq!(back, input);

        let model = r#"{"jacobian":{"a1":[0,1],"a3":[1]},
            "branch":[{"point":"inf","monodromy":[1]},{"point":"p","monodromy":[2]}]}"#;
        assert_eq!(run(model).unwrap().multiple_labels(), vec!["3I0", "3I9"]);

        let bad = doc.replace("[3]}", "[2]}");
        assert_eq!(run(&bad).unwrap_err().code(), "invalid_input");
        let bad = doc.replace("\"inf\":[3]", "\"zz\":[3]");
        assert_eq!(run(&bad).unwrap_err().code(), "invalid_input");
    }

    #[test]
    fn p2_formula() {
        assert_eq!(plurigenus_p2(0, 1, &[2, 2, 2]), Some(2));
        assert_eq!(plurigenus_p2(0, 2, &[]), Some(1));
        assert_eq!(plurigenus_p2(0, 1, &[]), Some(0));
        assert_eq!(plurigenus_p2(2, 1, &[]), Some(5));
    }
}

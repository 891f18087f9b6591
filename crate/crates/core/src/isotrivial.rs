//! Isotrivial elliptic surfaces `(C x E)/G` with `G = T x| mu_r` acting
//! diagonally: validation of the local monodromies, genera, quotient
//! singularities, fibre assembly and automorphism caps.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{solve_fixed_points, subgroup_closure, FixedPoints, Ring, TorsionPoint, Unit};
use crate::construction::{plurigenus_p2, KodairaDim};
use crate::error::{Error, Result};
use crate::kodaira::KodairaType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Generic,
    Gaussian,
    Fermat,
}

/// The rotation part `mu_r` together with the curve it lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MuRAction {
    pub r: u32,
    pub curve_kind: CurveKind,
}

impl MuRAction {
    pub fn new(r: u32) -> Result<Self> {
        let curve_kind = match r {
            2 => CurveKind::Generic,
            4 => CurveKind::Gaussian,
            3 | 6 => CurveKind::Fermat,
            _ => return Err(Error::invalid(format!("r must be one of 2, 3, 4, 6, got {r}"))),
        };
        Ok(MuRAction { r, curve_kind })
    }

    pub fn ring(self) -> Ring {
        Ring::for_rotation_order(self.r).expect("r validated")
    }

    /// `epsilon^k` with `epsilon` the primitive `r`-th root of smallest argument.
    pub fn eps(self, k: i64) -> Unit {
        Unit::from_rotation(self.ring(), self.r, k).expect("r divides the unit order")
    }

    /// Inverse of [`MuRAction::eps`].
    pub fn eps_power(self, u: Unit) -> u32 {
        u.exp / (self.ring().unit_order() / self.r)
    }
}

/// The affine map `z -> lambda z + c` of the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub lambda: Unit,
    pub c: TorsionPoint,
}

impl GroupElement {
    pub fn identity(ring: Ring) -> Self {
        GroupElement { lambda: Unit::identity(ring), c: TorsionPoint::zero(ring) }
    }

    /// `self o other`, i.e. apply `other` first.
    pub fn compose(&self, o: &GroupElement) -> GroupElement {
        GroupElement { lambda: self.lambda.mul(o.lambda), c: self.lambda.apply(&o.c) + self.c }
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = self.lambda.inverse();
        GroupElement { lambda: inv, c: -inv.apply(&self.c) }
    }

    pub fn pow(&self, k: u32) -> GroupElement {
        (0..k).fold(GroupElement::identity(self.c.ring), |acc, _| acc.compose(self))
    }

    pub fn apply(&self, z: &TorsionPoint) -> TorsionPoint {
        self.lambda.apply(z) + self.c
    }

    pub fn is_identity(&self) -> bool {
        self.lambda.is_identity() && self.c.is_zero()
    }

    pub fn is_translation(&self) -> bool {
        self.lambda.is_identity()
    }

    pub fn order(&self) -> u32 {
        if self.is_translation() {
            return self.c.order() as u32;
        }
        // (lambda, c)^m = (1, 0) when lambda is a primitive m-th root
        self.lambda.order()
    }
}

/// JSON form of a group element: `lambda` is the power of `epsilon`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSpec {
    pub lambda: i64,
    pub c: Vec<String>,
}

impl ElementSpec {
    fn view(action: MuRAction, g: &GroupElement) -> Self {
        ElementSpec { lambda: action.eps_power(g.lambda) as i64, c: g.c.coords().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotrivialInput {
    pub r: u32,
    #[serde(rename = "T", default)]
    pub t: Vec<Vec<String>>,
    #[serde(default)]
    pub base_genus: i64,
    pub monodromies: Vec<ElementSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi2: Option<ElementSpec>,
}

/// Validated data with the group enumerated.
#[derive(Clone, Debug)]
pub struct IsotrivialData {
    pub action: MuRAction,
    pub t_gens: Vec<TorsionPoint>,
    pub t: Vec<TorsionPoint>,
    pub base_genus: i64,
    pub monodromies: Vec<GroupElement>,
    /// Every element of `T x| mu_r`, sorted.
    pub elements: Vec<GroupElement>,
}

fn closure(ring: Ring, gens: &[GroupElement]) -> Vec<GroupElement> {
    let mut seen = vec![GroupElement::identity(ring)];
    let mut frontier = seen.clone();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose(&x);
            if !seen.contains(&y) {
                seen.push(y);
                frontier.push(y);
            }
        }
    }
    seen.sort();
    seen
}

fn product(ring: Ring, gs: &[GroupElement]) -> GroupElement {
    gs.iter().fold(GroupElement::identity(ring), |acc, g| acc.compose(g))
}

impl IsotrivialData {
    pub fn ring(&self) -> Ring {
        self.action.ring()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, spec: &ElementSpec) -> Result<GroupElement> {
        let c = TorsionPoint::parse(self.ring(), &spec.c)?;
        Ok(GroupElement { lambda: self.action.eps(spec.lambda), c })
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }

    /// `table[i][j]` is the index of `elements[i] o elements[j]`.
    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        self.elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| self.index_of(&a.compose(b)).expect("closed under composition"))
                    .collect()
            })
            .collect()
    }

    pub fn center(&self) -> Vec<GroupElement> {
        let table = self.multiplication_table();
        let n = self.order();
        (0..n)
            .filter(|&i| (0..n).all(|j| table[i][j] == table[j][i]))
            .map(|i| self.elements[i])
            .collect()
    }

    fn commutator_subgroup(&self) -> Vec<GroupElement> {
        let mut gens = Vec::new();
        for a in &self.elements {
            for b in &self.elements {
                let k = a.compose(b).compose(&a.inverse()).compose(&b.inverse());
                if !gens.contains(&k) {
                    gens.push(k);
                }
            }
        }
        closure(self.ring(), &gens)
    }

    pub fn view(&self, g: &GroupElement) -> ElementSpec {
        ElementSpec::view(self.action, g)
    }
}

/// Checks the input and enumerates the group.
pub fn validate(input: &IsotrivialInput) -> Result<IsotrivialData> {
    let action = MuRAction::new(input.r)?;
    let ring = action.ring();
    if input.base_genus < 0 {
        return Err(Error::invalid("base_genus must be non-negative"));
    }
    let t_gens = input
        .t
        .iter()
        .map(|c| TorsionPoint::parse(ring, c))
        .collect::<Result<Vec<_>>>()?;
    let t = subgroup_closure(ring, &t_gens);
    let eps = action.eps(1);
    if let Some(bad) = t.iter().find(|z| !t.contains(&eps.apply(z))) {
        return Err(Error::invalid(format!("T is not stable under mu_{}: {bad} leaves it", input.r)));
    }
    if input.monodromies.is_empty() {
        return Err(Error::invalid("no local monodromies"));
    }
    let mut monodromies = Vec::with_capacity(input.monodromies.len());
    for (i, m) in input.monodromies.iter().enumerate() {
        let c = TorsionPoint::parse(ring, &m.c)?;
        if !t.contains(&c) {
            return Err(Error::invalid(format!("monodromy {}: translation part {c} is not in T", i + 1)));
        }
        let g = GroupElement { lambda: action.eps(m.lambda), c };
        if g.is_identity() {
            return Err(Error::invalid(format!("monodromy {} is the identity", i + 1)));
        }
        monodromies.push(g);
    }
    if monodromies.iter().all(GroupElement::is_translation) {
        return Err(Error::Unsupported(
            "all local monodromies are translations, so G acts freely and chi = 0".into(),
        ));
    }
    let mut elements = Vec::with_capacity(t.len() * input.r as usize);
    for k in 0..input.r as i64 {
        for c in &t {
            elements.push(GroupElement { lambda: action.eps(k), c: *c });
        }
    }
    elements.sort();
    let data = IsotrivialData { action, t_gens, t, base_genus: input.base_genus, monodromies, elements };

    let prod = product(ring, &data.monodromies);
    if data.base_genus == 0 {
        if !prod.is_identity() {
            return Err(Error::invalid(format!(
                "product of the monodromies is {:?}, not the identity",
                data.view(&prod)
            )));
        }
        let generated = closure(ring, &data.monodromies);
        if generated.len() != data.order() {
            return Err(Error::invalid(format!(
                "monodromies generate a subgroup of order {} in a group of order {}",
                generated.len(),
                data.order()
            )));
        }
    } else if !data.commutator_subgroup().contains(&prod) {
        return Err(Error::invalid("product of the monodromies is not a commutator"));
    }
    Ok(data)
}

pub fn parse_and_validate(json: &str) -> Result<IsotrivialData> {
    let input: IsotrivialInput =
        serde_json::from_str(json).map_err(|e| Error::invalid(format!("isotrivial input: {e}")))?;
    validate(&input)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Genera {
    pub g_c: i64,
    pub g_d: i64,
    /// Branch points of the `T`-cover `C -> D`.
    pub c_over_d_branch_points: i64,
    /// `D -> B` is branched at exactly two points with monodromies `eps`, `eps^-1`.
    pub two_point_criterion: bool,
}

fn riemann_hurwitz(degree: i64, base_genus: i64, orders: impl Iterator<Item = i64>) -> Result<i64> {
    let twice = degree * (2 * base_genus - 2) + orders.map(|m| degree - degree / m).sum::<i64>();
    if twice % 2 != 0 {
        return Err(Error::Inconsistent(format!("Riemann-Hurwitz gives odd 2g - 2 = {twice}")));
    }
    Ok(twice / 2 + 1)
}

pub fn genera(data: &IsotrivialData) -> Result<Genera> {
    let n = data.order() as i64;
    let r = data.action.r as i64;
    let g_c = riemann_hurwitz(n, data.base_genus, data.monodromies.iter().map(|g| g.order() as i64))?;
    let g_d = riemann_hurwitz(r, data.base_genus, data.monodromies.iter().map(|g| g.lambda.order() as i64))?;
    let c_over_d_branch_points = data
        .monodromies
        .iter()
        .filter(|g| g.order() > g.lambda.order())
        .map(|g| r / g.lambda.order() as i64)
        .sum();
    let rotations: Vec<Unit> =
        data.monodromies.iter().filter(|g| !g.is_translation()).map(|g| g.lambda).collect();
    let two_point_criterion = data.base_genus == 0
        && rotations.len() == 2
        && rotations[0].order() == data.action.r
        && rotations[0].mul(rotations[1]).is_identity();
    let t = data.t.len() as i64;
    if 2 * g_c - 2 != t * (2 * g_d - 2) + t_cover_ramification(data, t) {
        return Err(Error::Inconsistent("C -> D -> B genera disagree".into()));
    }
    Ok(Genera { g_c, g_d, c_over_d_branch_points, two_point_criterion })
}

/// Total ramification `sum (e_P - 1)` of `C -> D`.
fn t_cover_ramification(data: &IsotrivialData, t: i64) -> i64 {
    let r = data.action.r as i64;
    data.monodromies
        .iter()
        .map(|g| {
            let above_d = r / g.lambda.order() as i64;
            let e = (g.order() / g.lambda.order()) as i64;
            above_d * (t / e) * (e - 1)
        })
        .sum()
}

/// A cyclic quotient singularity `1/m (1, k)` of `(C x E)/G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Singularity {
    pub branch_point: String,
    /// Smallest point of the orbit in `E`.
    pub point: [String; 2],
    pub orbit_size: usize,
    pub m: u32,
    pub k: u32,
    pub name: String,
    pub hj_chain: Vec<i64>,
}

impl Singularity {
    pub fn is_a_type(&self) -> bool {
        self.k + 1 == self.m
    }
}

pub fn singularity_name(m: u32, k: u32) -> String {
    if k + 1 == m {
        format!("A{}", m - 1)
    } else {
        format!("1/{m}(1,{k})")
    }
}

/// Hirzebruch-Jung chain of `m/k`, as self-intersections `-b_i`.
pub fn hj_chain(m: i64, k: i64) -> Result<Vec<i64>> {
    if !(0 < k && k < m) || m.gcd(&k) != 1 {
        return Err(Error::invalid(format!("hj_chain needs 0 < k < m coprime, got ({m}, {k})")));
    }
    let (mut a, mut b) = (m, k);
    let mut out = Vec::new();
    while b > 0 {
        let q = Integer::div_ceil(&a, &b);
        out.push(-q);
        (a, b) = (b, q * b - a);
    }
    Ok(out)
}

pub fn branch_label(i: usize) -> String {
    format!("x{}", i + 1)
}

/// Orbits under `<g>` of points with nontrivial stabiliser, with the order
/// of that stabiliser.
fn singular_orbits(g: &GroupElement) -> Vec<(Vec<TorsionPoint>, u32)> {
    let m = g.order();
    let mut points: Vec<TorsionPoint> = Vec::new();
    for j in 1..m {
        let h = g.pow(j);
        if let FixedPoints::Finite(fix) = solve_fixed_points(h.lambda, &h.c) {
            points.extend(fix);
        }
    }
    points.sort();
    points.dedup();
    let mut orbits = Vec::new();
    let mut done: Vec<TorsionPoint> = Vec::new();
    for y in points {
        if done.contains(&y) {
            continue;
        }
        let mut orbit = vec![y];
        let mut z = g.apply(&y);
        while z != y {
            orbit.push(z);
            z = g.apply(&z);
        }
        orbit.sort();
        done.extend(orbit.iter().copied());
        let stab = m / orbit.len() as u32;
        orbits.push((orbit, stab));
    }
    orbits
}

fn analyse_branch(data: &IsotrivialData, i: usize) -> Vec<Singularity> {
    let g = &data.monodromies[i];
    if g.is_translation() {
        return Vec::new();
    }
    let m = g.order();
    singular_orbits(g)
        .into_iter()
        .map(|(orbit, stab)| {
            // the stabiliser <g^j0> acts on C by eps_stab and on E by lambda^j0
            let j0 = m / stab;
            let k = g.lambda.pow(j0 as i64).angle_numerator();
            Singularity {
                branch_point: branch_label(i),
                point: orbit[0].coords(),
                orbit_size: orbit.len(),
                m: stab,
                k,
                name: singularity_name(stab, k),
                hj_chain: hj_chain(stab as i64, k as i64).expect("stabiliser acts faithfully"),
            }
        })
        .collect()
}

pub fn singularity_analysis(data: &IsotrivialData) -> Vec<Singularity> {
    (0..data.monodromies.len()).into_par_iter().flat_map_iter(|i| analyse_branch(data, i)).collect()
}

/// Singular-point configurations of the rotation fibres: `(m, k)` with
/// multiplicity, keyed by the fibre they resolve to.
const FIBER_RULES: [(KodairaType, &[(u32, u32, usize)]); 7] = [
    (KodairaType::IStar(0), &[(2, 1, 4)]),
    (KodairaType::IV, &[(3, 1, 3)]),
    (KodairaType::IVStar, &[(3, 2, 3)]),
    (KodairaType::III, &[(2, 1, 1), (4, 1, 2)]),
    (KodairaType::IIIStar, &[(2, 1, 1), (4, 3, 2)]),
    (KodairaType::II, &[(2, 1, 1), (3, 1, 1), (6, 1, 1)]),
    (KodairaType::IIStar, &[(2, 1, 1), (3, 2, 1), (6, 5, 1)]),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoFiber {
    pub point: String,
    pub monodromy: ElementSpec,
    /// `IV`, `III*`, ... or `mI0` for a multiple smooth fibre.
    pub fiber: String,
    pub multiplicity: u32,
    pub euler: u32,
}

fn rotation_fiber(sings: &[&Singularity]) -> Option<KodairaType> {
    let mut counts: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for s in sings {
        *counts.entry((s.m, s.k)).or_default() += 1;
    }
    let shape: Vec<(u32, u32, usize)> = counts.into_iter().map(|((m, k), n)| (m, k, n)).collect();
    FIBER_RULES.iter().find(|(_, rule)| *rule == shape.as_slice()).map(|(t, _)| *t)
}

pub fn assemble_fibers(data: &IsotrivialData, sings: &[Singularity]) -> Result<Vec<IsoFiber>> {
    let mut out = Vec::new();
    for (i, g) in data.monodromies.iter().enumerate() {
        let point = branch_label(i);
        let monodromy = data.view(g);
        if g.is_translation() {
            let m = g.order();
            out.push(IsoFiber { point, monodromy, fiber: format!("{m}I0"), multiplicity: m, euler: 0 });
            continue;
        }
        let here: Vec<&Singularity> = sings.iter().filter(|s| s.branch_point == point).collect();
        let kind = rotation_fiber(&here).ok_or_else(|| {
            Error::Unsupported(format!(
                "unsupported monodromy shape at {point}: {monodromy:?} gives {:?}",
                here.iter().map(|s| s.name.as_str()).collect::<Vec<_>>()
            ))
        })?;
        out.push(IsoFiber { point, monodromy, fiber: kind.to_string(), multiplicity: 1, euler: kind.euler() });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cap {
    pub bound: u64,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotrivialReport {
    pub r: u32,
    pub curve_kind: CurveKind,
    pub group_order: usize,
    pub t_order: usize,
    pub genera: Genera,
    pub e: i64,
    pub chi: i64,
    pub q: i64,
    pub p_g: i64,
    pub b2: i64,
    /// Number of multiple fibres.
    pub s: usize,
    pub p2: Option<i64>,
    pub canonical_degree: String,
    pub kodaira_dim: KodairaDim,
    pub fibers: Vec<IsoFiber>,
    pub singularities: Vec<Singularity>,
    pub center_order: usize,
    pub autz_bound: Cap,
    pub autq_bound: Cap,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_check: Option<CenterVerdict>,
}

pub fn invariants(data: &IsotrivialData, fibers: &[IsoFiber]) -> Result<(i64, i64, i64, i64, i64)> {
    let e: i64 = fibers.iter().map(|f| f.euler as i64).sum();
    if e % 12 != 0 {
        return Err(Error::EulerNotDivisible(e));
    }
    let chi = e / 12;
    let q = data.base_genus;
    let p_g = chi - 1 + q;
    let b2 = e - 2 + 4 * q;
    Ok((e, chi, q, p_g, b2))
}

pub fn autz_cap(r: u32) -> Cap {
    let (bound, rule) = match r {
        6 => (3, "r = 6: a numerically trivial automorphism lies in the order 3 part of the centre"),
        4 => (2, "r = 4: only psi_2 = i survives, and its square is the cohomologically trivial part"),
        3 => (1, "r = 3: Aut_Z is trivial"),
        _ => (2, "r = 2: Aut_Z embeds in mu_2"),
    };
    Cap { bound, rule: rule.into() }
}

pub fn autq_cap(r: u32, q: i64, p_g: i64, s: usize) -> Cap {
    let factor = if r == 6 { 3 } else { r as u64 };
    if q == 0 && p_g == 0 {
        Cap {
            bound: factor * s as u64,
            rule: format!("q = p_g = 0: at most {factor} s with s = {s} multiple fibres"),
        }
    } else {
        Cap { bound: factor, rule: format!("q + p_g > 0: at most {factor}") }
    }
}

/// Evaluation of a candidate `psi_2` for `Psi = (id_C, psi_2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterVerdict {
    pub psi2: ElementSpec,
    /// `lambda T = T`.
    pub preserves_t: bool,
    /// `(1 - eps) c` in `T` for every `eps` in `mu_r`.
    pub shift_condition: bool,
    /// The per-`r` shortcut: `2c`, `2c`, `3c` or `c` in `T` for `r = 2, 4, 3, 6`.
    /// Implied by `shift_condition`, but weaker for `r = 3, 4`.
    pub case_rule: bool,
    pub normalizes: bool,
    pub centralizes: bool,
    /// `psi_2` maps every singular orbit over every branch point to itself.
    pub fixes_singular_points: bool,
    pub center_order: usize,
    pub verdict: String,
}

pub fn center_and_num(data: &IsotrivialData, sings: &[Singularity], psi2: &GroupElement) -> CenterVerdict {
    let ring = data.ring();
    let r = data.action.r;
    let preserves_t = data.t.iter().all(|z| data.t.contains(&psi2.lambda.apply(z)));
    let shift_condition = (0..r as i64).all(|k| {
        let one_minus = psi2.c - data.action.eps(k).apply(&psi2.c);
        data.t.contains(&one_minus)
    });
    let case_rule = match r {
        6 => data.t.contains(&psi2.c),
        3 => data.t.contains(&psi2.c.scale(3)),
        _ => data.t.contains(&psi2.c.scale(2)),
    };
    let centralizes = data.elements.iter().all(|g| psi2.compose(g) == g.compose(psi2));
    let fixes_singular_points = data.monodromies.iter().enumerate().all(|(i, g)| {
        let label = branch_label(i);
        sings.iter().filter(|s| s.branch_point == label).all(|s| {
            let p = TorsionPoint::parse(ring, &s.point).expect("own output");
            let image = psi2.apply(&p);
            let mut z = p;
            for _ in 0..s.orbit_size {
                if z == image {
                    return true;
                }
                z = g.apply(&z);
            }
            false
        })
    });
    let normalizes = preserves_t && shift_condition;
    let verdict = if normalizes && centralizes && fixes_singular_points {
        "undecided by this tool"
    } else {
        "not numerically trivial"
    };
    CenterVerdict {
        psi2: data.view(psi2),
        preserves_t,
        shift_condition,
        case_rule,
        normalizes,
        centralizes,
        fixes_singular_points,
        center_order: data.center().len(),
        verdict: verdict.into(),
    }
}

/// Runs the whole pipeline.
pub fn analyse(data: &IsotrivialData, psi2: Option<&GroupElement>) -> Result<IsotrivialReport> {
    let genera = genera(data)?;
    let singularities = singularity_analysis(data);
    let fibers = assemble_fibers(data, &singularities)?;
    let (e, chi, q, p_g, b2) = invariants(data, &fibers)?;
    let mults: Vec<u64> = fibers.iter().map(|f| f.multiplicity as u64).collect();
    let s = mults.iter().filter(|&&m| m > 1).count();
    let canonical = Ratio::from_integer(2 * q - 2 + chi)
        + mults.iter().map(|&m| Ratio::new(m as i64 - 1, m as i64)).sum::<Ratio<i64>>();
    let kodaira_dim = if canonical < Ratio::from_integer(0) {
        return Err(Error::Construction(format!(
            "canonical degree {canonical} < 0: the quotient is not properly elliptic"
        )));
    } else if canonical == Ratio::from_integer(0) {
        KodairaDim::Zero
    } else {
        KodairaDim::One
    };
    if kodaira_dim == KodairaDim::One && genera.g_c < 2 {
        return Err(Error::Inconsistent(format!("Kodaira dimension 1 with g(C) = {}", genera.g_c)));
    }
    let center_order = data.center().len();
    let center_check = psi2.map(|p| center_and_num(data, &singularities, p));
    Ok(IsotrivialReport {
        r: data.action.r,
        curve_kind: data.action.curve_kind,
        group_order: data.order(),
        t_order: data.t.len(),
        genera,
        e,
        chi,
        q,
        p_g,
        b2,
        s,
        p2: plurigenus_p2(q, chi, &mults),
        canonical_degree: canonical.to_string(),
        kodaira_dim,
        fibers,
        singularities,
        center_order,
        autz_bound: autz_cap(data.action.r),
        autq_bound: autq_cap(data.action.r, q, p_g, s),
        center_check,
    })
}

/// Parses, validates and analyses an input document.
pub fn run(json: &str) -> Result<IsotrivialReport> {
    let input: IsotrivialInput =
        serde_json::from_str(json).map_err(|e| Error::invalid(format!("isotrivial input: {e}")))?;
    let data = validate(&input)?;
    let psi2 = input.psi2.as_ref().map(|p| data.element(p)).transpose()?;
    analyse(&data, psi2.as_ref())
}

/// Reference configurations: `r = 3` with `n` pairs `tau, tau^-1`, `r = 4`
/// with `m` copies of `tau_0`, `r = 6` with `n` copies of `eta`.
pub mod fixtures {
    use super::*;

    fn spec(lambda: i64, c: [&str; 2]) -> ElementSpec {
        ElementSpec { lambda, c: c.iter().map(|s| s.to_string()).collect() }
    }

    pub fn r3(pairs: usize) -> IsotrivialInput {
        let mut m = vec![spec(1, ["0", "0"]), spec(-1, ["0", "0"])];
        m.extend((0..pairs).map(|_| spec(0, ["1/3", "2/3"])));
        m.extend((0..pairs).map(|_| spec(0, ["2/3", "1/3"])));
        IsotrivialInput { r: 3, t: vec![vec!["1/3".into(), "2/3".into()]], base_genus: 0, monodromies: m, psi2: None }
    }

    pub fn r4(copies: usize) -> IsotrivialInput {
        let mut m = vec![spec(1, ["0", "0"]), spec(-1, ["0", "0"])];
        m.extend((0..copies).map(|_| spec(0, ["1/2", "1/2"])));
        IsotrivialInput { r: 4, t: vec![vec!["1/2".into(), "1/2".into()]], base_genus: 0, monodromies: m, psi2: None }
    }

    pub fn r6(copies: usize) -> IsotrivialInput {
        let mut m = vec![spec(1, ["0", "0"]), spec(-1, ["0", "0"])];
        m.extend((0..copies).map(|_| spec(0, ["2/3", "1/3"])));
        IsotrivialInput { r: 6, t: vec![vec!["2/3".into(), "1/3".into()]], base_genus: 0, monodromies: m, psi2: None }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn fiber_types(rep: &IsotrivialReport) -> Vec<String> {
        rep.fibers.iter().filter(|f| f.multiplicity == 1).map(|f| f.fiber.clone()).collect()
    }

    fn names(rep: &IsotrivialReport, point: &str) -> Vec<String> {
        let mut v: Vec<String> =
            rep.singularities.iter().filter(|s| s.branch_point == point).map(|s| s.name.clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn r3_configuration() {
        let d = validate(&r3(2)).unwrap();
        let rep = analyse(&d, None).unwrap();
        assert_eq!(fiber_types(&rep), ["IV", "IV*"]);
        assert_eq!(names(&rep, "x1"), ["1/3(1,1)"; 3]);
        assert_eq!(names(&rep, "x2"), ["A2"; 3]);
        assert_eq!((rep.e, rep.chi, rep.b2, rep.q, rep.p_g), (12, 1, 10, 0, 0));
        assert_eq!(rep.s, 4);
        assert_eq!(rep.genera.g_d, 0);
        assert!(rep.genera.two_point_criterion);
        assert_eq!(rep.center_order, 9);
        assert_eq!(rep.autz_bound.bound, 1);
        let psi = GroupElement { lambda: d.action.eps(1), c: TorsionPoint::zero(d.ring()) };
        let v = center_and_num(&d, &rep.singularities, &psi);
        assert!(v.normalizes && v.case_rule);
    }

    #[test]
    fn r4_configuration() {
        for m in [2, 4, 6] {
            let d = validate(&r4(m)).unwrap();
            let rep = analyse(&d, None).unwrap();
            let mut f = fiber_types(&rep);
            f.sort();
            assert_eq!(f, ["III", "III*"]);
            assert_eq!((rep.e, rep.b2, rep.q, rep.p_g), (12, 10, 0, 0));
            assert_eq!(rep.genera.g_d, 0);
            assert_eq!(rep.genera.c_over_d_branch_points, 4 * m as i64);
            assert_eq!(rep.genera.g_c, 2 * m as i64 - 1);
            assert_eq!(rep.s, m);
            assert_eq!(rep.p2, Some(m as i64 - 1));
            assert_eq!(rep.autq_bound.bound, 4 * m as u64);
            assert_eq!(rep.autz_bound.bound, 2);
            assert_eq!(rep.kodaira_dim, if m == 2 { KodairaDim::Zero } else { KodairaDim::One });
            // eps gives 1/4(1,1) under the minimal-argument convention
            assert_eq!(names(&rep, "x1"), ["1/4(1,1)", "1/4(1,1)", "A1"]);
            assert_eq!(names(&rep, "x2"), ["A1", "A3", "A3"]);
            let psi = GroupElement { lambda: d.action.eps(1), c: TorsionPoint::zero(d.ring()) };
            let v = center_and_num(&d, &rep.singularities, &psi);
            assert!(v.normalizes && v.centralizes && v.fixes_singular_points, "{v:?}");
            let shift = GroupElement { lambda: d.action.eps(0), c: d.t[1] };
            let v = center_and_num(&d, &rep.singularities, &shift);
            assert_eq!(v.verdict, "not numerically trivial");
        }
        assert!(validate(&r4(3)).is_err());
    }

    #[test]
    fn r6_configuration() {
        let d = validate(&r6(3)).unwrap();
        let rep = analyse(&d, None).unwrap();
        assert_eq!(fiber_types(&rep), ["II", "II*"]);
        assert_eq!(rep.e, 12);
        assert_eq!(rep.center_order, 3);
        assert_eq!(rep.autz_bound.bound, 3);
        assert_eq!(rep.autq_bound.bound, 9);
        assert_eq!(rep.genera.g_d, 0);
        assert!(rep.fibers[2..].iter().all(|f| f.fiber == "3I0"));
    }

    #[test]
    fn minus_one_has_four_a1() {
        let input = IsotrivialInput {
            r: 2,
            t: vec![],
            base_genus: 0,
            monodromies: (0..4).map(|_| ElementSpec { lambda: 1, c: vec!["0".into(), "0".into()] }).collect(),
            psi2: None,
        };
        let d = validate(&input).unwrap();
        let rep = analyse(&d, None).unwrap();
        assert_eq!(names(&rep, "x3"), ["A1"; 4]);
        assert_eq!(rep.e, 24);
        assert_eq!(rep.p_g, 1);
        assert_eq!(rep.autq_bound.bound, 2);
    }

    #[test]
    fn rejections() {
        let mut bad = r3(1);
        bad.monodromies.pop();
        assert!(validate(&bad).is_err());
        let mut not_generating = r4(2);
        not_generating.monodromies.truncate(2);
        assert!(matches!(validate(&not_generating), Err(Error::InvalidInput(_))));
        let mut outside = r4(2);
        outside.monodromies[2].c = vec!["1/2".into(), "0".into()];
        assert!(validate(&outside).is_err());
        let mut unstable = r4(2);
        unstable.t = vec![vec!["1/2".into(), "0".into()]];
        assert!(validate(&unstable).is_err());
        let translations = IsotrivialInput {
            r: 2,
            t: vec![vec!["1/2".into(), "0".into()]],
            base_genus: 0,
            monodromies: (0..2).map(|_| ElementSpec { lambda: 0, c: vec!["1/2".into(), "0".into()] }).collect(),
            psi2: None,
        };
        assert!(matches!(validate(&translations), Err(Error::Unsupported(_))));
        assert!(MuRAction::new(5).is_err());
        // mu_3 alone over two points gives a rational surface
        let mut rational = r3(0);
        rational.t.clear();
        let d = validate(&rational).unwrap();
        assert!(matches!(analyse(&d, None), Err(Error::Construction(_))));
    }

    #[test]
    fn hj_examples() {
        assert_eq!(hj_chain(3, 1).unwrap(), [-3]);
        assert_eq!(hj_chain(4, 1).unwrap(), [-4]);
        assert_eq!(hj_chain(3, 2).unwrap(), [-2, -2]);
        assert_eq!(hj_chain(7, 3).unwrap(), [-3, -2, -2]);
        assert!(hj_chain(4, 2).is_err());
        assert!(hj_chain(3, 3).is_err());
    }

    #[test]
    fn json_input() {
        let json = r#"{"r":4, "T":[["1/2","1/2"]], "base_genus":0,
            "monodromies":[{"lambda":1,"c":["0","0"]},{"lambda":3,"c":["0","0"]},
            {"lambda":0,"c":["1/2","1/2"]},{"lambda":0,"c":["1/2","1/2"]}],
            "psi2":{"lambda":1,"c":["0","0"]}}"#;
        let rep = run(json).unwrap();
        assert_eq!(rep.center_check.unwrap().verdict, "undecided by this tool");
        assert!(run(r#"{"r":4}"#).is_err());
    }

    fn continued_fraction(chain: &[i64]) -> Ratio<i64> {
        let mut x = Ratio::from_integer(-chain[chain.len() - 1]);
        for b in chain.iter().rev().skip(1) {
            x = Ratio::from_integer(-b) - x.recip();
        }
        x
    }

    /// Random data: `T = E[n]` or the special `mu_r`-stable subgroups, random
    /// monodromies closed up by the inverse of their product.
    fn random_input(r: u32, t_choice: usize, picks: Vec<(i64, usize)>) -> IsotrivialInput {
        let t: Vec<Vec<String>> = match t_choice {
            0 => vec![],
            1 => vec![vec!["1/2".into(), "0".into()], vec!["0".into(), "1/2".into()]],
            2 => vec![vec!["1/3".into(), "0".into()], vec!["0".into(), "1/3".into()]],
            _ => match r {
                4 => vec![vec!["1/2".into(), "1/2".into()]],
                3 | 6 => vec![vec!["1/3".into(), "2/3".into()]],
                _ => vec![vec!["1/4".into(), "0".into()]],
            },
        };
        let action = MuRAction::new(r).unwrap();
        let ring = action.ring();
        let gens: Vec<TorsionPoint> = t.iter().map(|c| TorsionPoint::parse(ring, c).unwrap()).collect();
        let elems = subgroup_closure(ring, &gens);
        let mut gs: Vec<GroupElement> = picks
            .iter()
            .map(|&(k, ci)| GroupElement { lambda: action.eps(k), c: elems[ci % elems.len()] })
            .collect();
        let last = product(ring, &gs).inverse();
        gs.push(last);
        IsotrivialInput {
            r,
            t,
            base_genus: 0,
            monodromies: gs.iter().map(|g| ElementSpec::view(action, g)).collect(),
            psi2: None,
        }
    }

    proptest! {
        #[test]
        fn hj_identities(m in 2i64..=24) {
            prop_assert_eq!(hj_chain(m, 1).unwrap(), vec![-m]);
            prop_assert_eq!(hj_chain(m, m - 1).unwrap(), vec![-2; (m - 1) as usize]);
        }

        #[test]
        fn hj_chain_evaluates_back(m in 2i64..60, k in 1i64..60) {
            prop_assume!(k < m && m.gcd(&k) == 1);
            let c = hj_chain(m, k).unwrap();
            prop_assert_eq!(continued_fraction(&c), Ratio::new(m, k));
        }

        #[test]
        fn valid_data_has_e_twelve_chi(
            r in prop::sample::select(vec![2u32, 3, 4, 6]),
            t_choice in 0usize..4,
            picks in prop::collection::vec((0i64..6, 0usize..9), 2..6),
            psi in (0i64..6, 0usize..9),
        ) {
            let input = random_input(r, t_choice, picks);
            let Ok(d) = validate(&input) else { return Ok(()) };
            let g = genera(&d).unwrap();
            prop_assert_eq!(g.g_d == 0, g.two_point_criterion);
            let sings = singularity_analysis(&d);
            let fibers = assemble_fibers(&d, &sings).unwrap();
            let (e, chi, ..) = invariants(&d, &fibers).unwrap();
            prop_assert!(chi > 0 && e == 12 * chi);
            prop_assert!(autz_cap(r).bound <= 3);
            if let Ok(rep) = analyse(&d, None) {
                if rep.kodaira_dim == KodairaDim::One {
                    prop_assert!(rep.genera.g_c >= 2);
                }
            }
            let psi2 = GroupElement { lambda: d.action.eps(psi.0), c: d.t[psi.1 % d.t.len()] };
            let v = center_and_num(&d, &sings, &psi2);
            if v.shift_condition {
                prop_assert!(v.case_rule);
            }
            let star = fibers.iter().any(|f| f.fiber.ends_with('*'));
            if star && psi2.is_translation() && !psi2.c.is_zero() {
                prop_assert_eq!(v.verdict.as_str(), "not numerically trivial");
            }
        }
    }
}

//! Regression cases reproducing published tables and worked examples.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{factor_rational_poly, int, Place, Poly, RationalFunction};
use crate::catalog;
use crate::construction::{construct, BranchDatum, ConstructionReport};
use crate::error::{Error, Result};
use crate::isotrivial::{self, hj_chain, ElementSpec, IsotrivialInput};
use crate::kodaira::{classify_all, SurfaceData, WeierstrassModel};
use crate::lattice::{
    check_splitting_at_fiber, check_splitting_valuation, fixtures, subgroup_structure, Comp,
    TorsionGroup,
};
use crate::modular::{
    check_claim_range, check_g1_lower_range, coprime, genus_g1, mw_torsion_bound, s_func, t_func,
    u_func,
};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Quoted from the literature.
    Literature,
    /// Computed here by an independent route.
    Derived,
    /// Immediate from the definitions.
    Trivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    Table,
    Example,
    Invariant,
}

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub seed: u64,
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx { seed: DEFAULT_SEED }
    }
}

pub struct VerifyCase {
    pub id: &'static str,
    /// Acceptance criterion the case belongs to.
    pub criterion: u32,
    pub kind: CaseKind,
    pub provenance: Provenance,
    pub citation: &'static str,
    pub limit_ms: Option<u64>,
    pub expected: fn() -> Value,
    pub run: fn(&Ctx) -> Result<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub id: String,
    pub criterion: u32,
    pub kind: CaseKind,
    pub provenance: Provenance,
    pub citation: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
    pub elapsed_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn run_case(case: &VerifyCase, ctx: &Ctx) -> CaseOutcome {
    let expected = (case.expected)();
    let start = Instant::now();
    let result = (case.run)(ctx);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let in_time = case.limit_ms.is_none_or(|l| elapsed_ms < l as f64);
    let (actual, error) = match result {
        Ok(v) => (v, None),
        Err(e) => (json!({ "error": e.code() }), Some(e.to_string())),
    };
    let error = match (error, in_time) {
        (None, false) => Some(format!("took {elapsed_ms:.1} ms, limit {} ms", case.limit_ms.unwrap_or(0))),
        (e, _) => e,
    };
    CaseOutcome {
        id: case.id.to_string(),
        criterion: case.criterion,
        kind: case.kind,
        provenance: case.provenance,
        citation: case.citation.to_string(),
        pass: error.is_none() && actual == expected,
        expected,
        actual,
        elapsed_ms,
        limit_ms: case.limit_ms,
        error,
    }
}

/// Runs the selected cases sorted by id. Untimed cases run in parallel; timed
/// ones run afterwards one at a time so their clocks are not shared.
pub fn run_cases(filter: impl Fn(&str) -> bool + Sync, ctx: &Ctx) -> Vec<CaseOutcome> {
    let all = cases();
    let (timed, untimed): (Vec<&VerifyCase>, Vec<&VerifyCase>) =
        all.iter().filter(|c| filter(c.id)).partition(|c| c.limit_ms.is_some());
    let mut out: Vec<CaseOutcome> = untimed.par_iter().map(|c| run_case(c, ctx)).collect();
    out.extend(timed.iter().map(|c| run_case(c, ctx)));
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

pub fn case(id: &str) -> Option<VerifyCase> {
    cases().into_iter().find(|c| c.id == id)
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Inconsistent(format!("serialization: {e}")))
}

// ---- modular tables ------------------------------------------------------

fn g1_table() -> Result<Value> {
    Ok(json!((11..=25).map(genus_g1).collect::<Result<Vec<_>>>()?))
}

const T_TABLE: [(i64, &str); 9] = [
    (2, "2/3"),
    (3, "1/2"),
    (5, "1/3"),
    (7, "1/4"),
    (4, "5/12"),
    (9, "2/9"),
    (8, "1/4"),
    (16, "7/48"),
    (32, "1/12"),
];

fn t_table() -> Result<Value> {
    let mut m = BTreeMap::new();
    for (n, _) in T_TABLE {
        m.insert(n.to_string(), t_func(n)?.to_string());
    }
    Ok(json!(m))
}

fn t_table_expected() -> Value {
    json!(T_TABLE.iter().map(|(n, t)| (n.to_string(), *t)).collect::<BTreeMap<_, _>>())
}

fn claim_range() -> Result<Value> {
    let r = check_claim_range(26, 10_000)?;
    Ok(json!({ "checked": r.checked, "failures": r.failures }))
}

fn g1_lower() -> Result<Value> {
    Ok(json!({ "failures": check_g1_lower_range(5, 1000)? }))
}

fn sharp_bounds() -> Result<Value> {
    let v: Vec<Option<u64>> =
        (0..=4).map(|g| mw_torsion_bound(g, false).map(|b| b.sharp)).collect::<Result<_>>()?;
    Ok(json!(v))
}

// ---- fibres and torsion --------------------------------------------------

/// Fibres at rational places by label, geometric counts by type, and `e`.
fn fibre_summary(s: &SurfaceData) -> Value {
    let at: BTreeMap<String, String> = s
        .fibers
        .iter()
        .filter(|f| f.place.degree() == 1)
        .map(|f| (f.place.label(), f.kind.to_string()))
        .collect();
    let counts: BTreeMap<String, usize> =
        s.fiber_multiset().into_iter().map(|(k, n)| (k.to_string(), n)).collect();
    let euler: i64 = s.fibers.iter().map(|f| f.kind.euler() as i64 * f.count() as i64).sum();
    json!({ "at": at, "counts": counts, "euler": euler })
}

fn classify_catalog(name: &str) -> Result<Value> {
    Ok(fibre_summary(&classify_all(&catalog::entry(name)?.model)?))
}

fn torsion_of(name: &str) -> Result<Value> {
    Ok(json!(catalog::load(name)?.torsion.name()))
}

/// Group name and the components met by the generators, per reducible fibre.
fn torsion_incidence(name: &str) -> Result<Value> {
    let t = catalog::load(name)?.torsion;
    let inc: BTreeMap<String, Vec<Comp>> = t
        .slots
        .iter()
        .enumerate()
        .map(|(i, s)| (s.label.clone(), t.generators.iter().map(|g| g[i]).collect()))
        .collect();
    Ok(json!({ "group": t.name(), "incidence": inc }))
}

fn splits(g: &TorsionGroup, label: &str) -> Result<bool> {
    Ok(check_splitting_at_fiber(g, label)?.is_some())
}

fn split_x8211() -> Result<Value> {
    let j = catalog::load("X8211")?;
    let half = j.subgroup_from_coords(&[vec![2]])?;
    Ok(json!({
        "full": { "group": j.torsion.name(), "splits_at_I2": splits(&j.torsion, "0")? },
        "double": { "group": half.name(), "splits_at_I2": splits(&half, "0")?, "splits_at_I8": splits(&half, "inf")? },
    }))
}

/// Every subgroup to test: the full group and each cyclic subgroup.
fn test_subgroups(t: &TorsionGroup) -> Vec<TorsionGroup> {
    let mut seen = HashSet::new();
    let mut out = vec![t.clone()];
    for (_, e) in t.elements() {
        let c = subgroup_structure(t, &[e]);
        if c.order() > 1 && c.order() < t.order() && seen.insert(elements_of(&c)) {
            out.push(c);
        }
    }
    out
}

fn elements_of(t: &TorsionGroup) -> Vec<Vec<Comp>> {
    let mut v: Vec<Vec<Comp>> = t.elements().into_iter().map(|(_, e)| e).collect();
    v.sort();
    v
}

/// Valuation criterion against brute force over all catalog surfaces.
fn split_valuation() -> Result<Value> {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for name in catalog::NAMES {
        let j = catalog::load(name)?;
        for g in test_subgroups(&j.torsion) {
            let (n, n2) = g.n_pair();
            if !check_splitting_valuation(n, n2) {
                continue;
            }
            for slot in g.slots.iter().filter(|s| !s.kind.is_additive()) {
                checked += 1;
                if !splits(&g, &slot.label)? {
                    violations.push(format!("{name} {} at {}", g.name(), slot.label));
                }
            }
        }
    }
    Ok(json!({ "nonempty": checked > 0, "violations": violations }))
}

// ---- constructions -------------------------------------------------------

fn smooth_points(n: usize, m: &[i64]) -> Vec<BranchDatum> {
    (0..n).map(|i| BranchDatum { point: format!("b{i}"), monodromy: m.to_vec() }).collect()
}

fn at(point: &str, m: &[i64]) -> BranchDatum {
    BranchDatum { point: point.to_string(), monodromy: m.to_vec() }
}

fn audits_pass(r: &ConstructionReport) -> bool {
    !r.audits.is_empty() && r.audits.iter().all(|a| a.pass)
}

fn construction_summary(r: &ConstructionReport) -> Value {
    json!({
        "chi": r.chi,
        "q": r.q,
        "p_g": r.p_g,
        "multiple": r.multiple_labels(),
        "kod": r.kodaira_dim,
        "enriques": r.enriques,
        "p2": r.p2,
        "autq": { "relation": r.autq.relation, "group": r.autq.group },
        "audits_pass": audits_pass(r),
    })
}

fn sec10() -> Result<Value> {
    let j = catalog::load("SEC10")?;
    let r = construct(&j, &j.torsion, &[at("inf", &[1]), at("p", &[2])])?;
    Ok(construction_summary(&r))
}

fn sec9(s: usize) -> Result<Value> {
    let j = catalog::load("SEC9")?;
    let mut b = vec![at("inf", &[1])];
    b.extend(smooth_points(2 * s - 1, &[1]));
    Ok(construction_summary(&construct(&j, &j.torsion, &b)?))
}

fn sec9_expected(s: usize) -> Value {
    let mut multiple = vec!["2I8".to_string()];
    multiple.extend(std::iter::repeat_n("2I0".to_string(), 2 * s - 1));
    multiple.sort();
    let (kod, enriques, p2) = if s == 1 { ("0", true, 1) } else { ("1", false, 2 * s as i64 - 1) };
    json!({
        "chi": 1, "q": 0, "p_g": 0,
        "multiple": multiple,
        "kod": kod,
        "enriques": enriques,
        "p2": p2,
        "autq": { "relation": "contains", "group": "Z/2" },
        "audits_pass": true,
    })
}

/// Branches every `I3` fibre of `X3333` with a monodromy rotating it, the
/// last one chosen so the monodromies sum to zero.
fn x3333_branches(g: &TorsionGroup) -> Result<Vec<BranchDatum>> {
    let elems = g.elements();
    let k = g.slots.len();
    let mut total = [0u64; 2];
    let mut out = Vec::new();
    for (i, slot) in g.slots.iter().enumerate() {
        let last = i + 1 == k;
        let (c, _) = elems
            .iter()
            .find(|(c, e)| e[i] != 0 && (!last || c.iter().zip(total).all(|(x, t)| (x + t) % 3 == 0)))
            .ok_or_else(|| Error::Inconsistent(format!("no rotating element at {}", slot.label)))?;
        for (t, x) in total.iter_mut().zip(c) {
            *t += x;
        }
        out.push(at(&slot.label, &c.iter().map(|&x| x as i64).collect::<Vec<_>>()));
    }
    Ok(out)
}

fn x3333() -> Result<Value> {
    let j = catalog::load("X3333")?;
    let r = construct(&j, &j.torsion, &x3333_branches(&j.torsion)?)?;
    Ok(json!({
        "autq": { "relation": r.autq.relation, "group": r.autq.group, "order": r.autq.order },
        "audits_pass": audits_pass(&r),
    }))
}

fn example8(m: usize) -> Result<Value> {
    let j = catalog::load("X33")?;
    let r = construct(&j, &j.torsion, &smooth_points(2 * m, &[1]))?;
    let divides = r.audits.iter().any(|a| a.rule == "base-divides" && a.pass);
    Ok(json!({
        "autq_order": r.autq.order,
        "four_p2_plus_one": r.p2.map(|p| 4 * (p + 1)),
        "base_order": r.autq.base_order,
        "base_divides_audit": divides,
        "audits_pass": audits_pass(&r),
    }))
}

fn example8_expected(m: usize) -> Value {
    let dm = 2 * m as u64;
    json!({
        "autq_order": 4 * dm,
        "four_p2_plus_one": 4 * dm,
        "base_order": dm,
        "base_divides_audit": true,
        "audits_pass": true,
    })
}

// ---- isotrivial ----------------------------------------------------------

fn iso_summary(input: &IsotrivialInput) -> Result<Value> {
    let data = isotrivial::validate(input)?;
    let r = isotrivial::analyse(&data, None)?;
    let mut fibers: Vec<&str> = r.fibers.iter().map(|f| f.fiber.as_str()).filter(|f| !f.ends_with("I0")).collect();
    fibers.sort();
    Ok(json!({ "fibers": fibers, "e": r.e, "b2": r.b2, "autz_cap": r.autz_bound.bound }))
}

fn iso_r4_center() -> Result<Value> {
    let mut input = isotrivial::fixtures::r4(2);
    input.psi2 = Some(ElementSpec { lambda: 1, c: vec!["0".into(), "0".into()] });
    let data = isotrivial::validate(&input)?;
    let psi = data.element(input.psi2.as_ref().expect("set above"))?;
    let r = isotrivial::analyse(&data, Some(&psi))?;
    let c = r.center_check.ok_or_else(|| Error::Inconsistent("no center check".into()))?;
    Ok(json!({
        "normalizes": c.normalizes,
        "centralizes": c.centralizes,
        "fixes_singular_points": c.fixes_singular_points,
    }))
}

// ---- seeded property suites ----------------------------------------------

const TRIALS: usize = 100;

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize, bound: i64) -> Poly {
    let d = rng.gen_range(0..=max_deg);
    Poly::from_i64(&(0..=d).map(|_| rng.gen_range(-bound..=bound)).collect::<Vec<_>>())
}

fn nonzero_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    loop {
        let p = random_poly(rng, max_deg, 5);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Places where `f` has a zero or pole, plus infinity.
fn support(f: &RationalFunction) -> Result<Vec<Place>> {
    let mut out = vec![Place::Infinity];
    for p in [f.num(), f.den()] {
        if p.is_constant() {
            continue;
        }
        for (q, _) in factor_rational_poly(p)?.factors {
            let pl = Place::Finite(q.monic());
            if !out.contains(&pl) {
                out.push(pl);
            }
        }
    }
    Ok(out)
}

fn failures_value(trials: usize, failures: Vec<String>) -> Value {
    json!({ "trials": trials, "failures": failures })
}

fn prop_valuation_additivity(ctx: &Ctx) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut failures = Vec::new();
    for i in 0..TRIALS {
        let f = RationalFunction::new(nonzero_poly(&mut rng, 4), nonzero_poly(&mut rng, 3))?;
        let g = RationalFunction::new(nonzero_poly(&mut rng, 4), nonzero_poly(&mut rng, 3))?;
        let fg = RationalFunction::new(f.num() * g.num(), f.den() * g.den())?;
        let mut places = support(&fg)?;
        places.push(Place::at(&int(rng.gen_range(-6..=6))));
        for p in places {
            let lhs = fg.valuation(&p);
            let rhs = f.valuation(&p).zip(g.valuation(&p)).map(|(a, b)| a + b);
            if lhs.is_none() || lhs != rhs {
                failures.push(format!("trial {i} at {}", p.label()));
            }
        }
    }
    Ok(failures_value(TRIALS, failures))
}

fn prop_degree_formula(ctx: &Ctx) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x5eed_0001);
    let mut failures = Vec::new();
    for i in 0..TRIALS {
        let f = RationalFunction::new(nonzero_poly(&mut rng, 5), nonzero_poly(&mut rng, 5))?;
        let mut total = 0i64;
        for p in support(&f)? {
            let v = f.valuation(&p).ok_or_else(|| Error::Inconsistent("zero function".into()))?;
            total += p.degree() as i64 * v;
        }
        if total != 0 {
            failures.push(format!("trial {i}: degree sum {total}"));
        }
    }
    Ok(failures_value(TRIALS, failures))
}

fn prop_multiplicativity(ctx: &Ctx) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x5eed_0002);
    let mut failures = Vec::new();
    let mut trials = 0;
    while trials < TRIALS {
        let (a, b) = (rng.gen_range(2..2000), rng.gen_range(2..2000));
        if !coprime(a, b) {
            continue;
        }
        trials += 1;
        let ok = s_func(a * b)? == s_func(a)? * s_func(b)?
            && u_func(a * b)? == u_func(a)? * u_func(b)?
            && t_func(a * b)? == t_func(a)? * t_func(b)?;
        if !ok {
            failures.push(format!("({a}, {b})"));
        }
    }
    Ok(failures_value(trials, failures))
}

/// Evaluates `[b1, ..., bn]` as `b1 - 1/(b2 - ...)` with `b_i = -chain[i]`.
fn continued_fraction(chain: &[i64]) -> Option<num_rational::Ratio<i64>> {
    let mut acc: Option<num_rational::Ratio<i64>> = None;
    for &c in chain.iter().rev() {
        let b = num_rational::Ratio::from_integer(-c);
        acc = Some(match acc {
            None => b,
            Some(x) if x == num_rational::Ratio::from_integer(0) => return None,
            Some(x) => b - x.recip(),
        });
    }
    acc
}

fn prop_hj_chains(ctx: &Ctx) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x5eed_0003);
    let mut failures = Vec::new();
    for m in 2..=24i64 {
        if hj_chain(m, 1)? != vec![-m] || hj_chain(m, m - 1)? != vec![-2; (m - 1) as usize] {
            failures.push(format!("m = {m}"));
        }
    }
    let mut trials = 0;
    while trials < TRIALS {
        let m = rng.gen_range(2..=60i64);
        let k = rng.gen_range(1..m);
        if !coprime(m, k) {
            continue;
        }
        trials += 1;
        let chain = hj_chain(m, k)?;
        if continued_fraction(&chain) != Some(num_rational::Ratio::new(m, k)) {
            failures.push(format!("1/{m}(1,{k}) -> {chain:?}"));
        }
    }
    Ok(failures_value(trials + 23, failures))
}

fn prop_torsion_closure(ctx: &Ctx) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x5eed_0004);
    let groups: Vec<(String, TorsionGroup)> = catalog::NAMES
        .iter()
        .map(|n| catalog::load(n).map(|j| (n.to_string(), j.torsion)))
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    for i in 0..TRIALS {
        let (name, t) = &groups[rng.gen_range(0..groups.len())];
        let elems: Vec<Vec<Comp>> = t.elements().into_iter().map(|(_, e)| e).collect();
        let set: HashSet<&Vec<Comp>> = elems.iter().collect();
        if elems.len() as u64 != t.order() || set.len() != elems.len() {
            failures.push(format!("trial {i}: {name} has {} elements", set.len()));
            continue;
        }
        let a = &elems[rng.gen_range(0..elems.len())];
        let b = &elems[rng.gen_range(0..elems.len())];
        let sum = t.add(a, b);
        let has_inverse = elems.iter().any(|x| t.add(a, x) == t.zero());
        if !set.contains(&sum) || t.add(b, a) != sum || !has_inverse {
            failures.push(format!("trial {i}: {name} {a:?} + {b:?}"));
        }
    }
    Ok(failures_value(TRIALS, failures))
}

fn random_model(rng: &mut ChaCha8Rng) -> WeierstrassModel {
    let mut c = || random_poly(rng, 4, 3);
    WeierstrassModel::new(c(), c(), c(), c(), c())
}

fn prop_euler_chi(ctx: &Ctx) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x5eed_0005);
    let mut failures = Vec::new();
    let mut trials = 0;
    while trials < TRIALS {
        let w = random_model(&mut rng);
        let s = match classify_all(&w) {
            Err(Error::SingularModel) => continue,
            Err(e) => {
                trials += 1;
                failures.push(format!("{}: {e}", serde_json::to_string(&w).unwrap_or_default()));
                continue;
            }
            Ok(s) => s,
        };
        trials += 1;
        let e: i64 = s.fibers.iter().map(|f| f.kind.euler() as i64 * f.count() as i64).sum();
        if e != s.euler || e != 12 * s.chi || s.chi < 0 {
            failures.push(format!("{}: e = {e}, chi = {}", serde_json::to_string(&w).unwrap_or_default(), s.chi));
        }
    }
    Ok(failures_value(trials, failures))
}

fn clean(trials: usize) -> Value {
    failures_value(trials, Vec::new())
}

// ---- the case list -------------------------------------------------------

fn lattice_case<T: Serialize>(r: Result<T>) -> Result<Value> {
    to_value(&r?)
}

/// Every regression case, sorted by id.
pub fn cases() -> Vec<VerifyCase> {
    use CaseKind::*;
    use Provenance::*;
    let mut v = vec![
        VerifyCase {
            id: "c01-g1-table",
            criterion: 1,
            kind: Table,
            provenance: Literature,
            citation: "published table of the genus of X_1(N), N = 11..25",
            limit_ms: Some(10),
            expected: || json!([1, 0, 2, 1, 1, 2, 5, 2, 7, 3, 5, 6, 12, 5, 12]),
            run: |_| g1_table(),
        },
        VerifyCase {
            id: "c02-t-table",
            criterion: 2,
            kind: Table,
            provenance: Literature,
            citation: "published table of t(N) at small prime powers",
            limit_ms: None,
            expected: t_table_expected,
            run: |_| t_table(),
        },
        VerifyCase {
            id: "c03-claim-range",
            criterion: 3,
            kind: Invariant,
            provenance: Literature,
            citation: "claim that t(N) <= 1/9 for every N >= 26",
            limit_ms: Some(5000),
            expected: || json!({ "checked": 9975, "failures": [] }),
            run: |_| claim_range(),
        },
        VerifyCase {
            id: "c04-g1-lower-bound",
            criterion: 4,
            kind: Invariant,
            provenance: Literature,
            citation: "lower bound g1(N) > N^2/(12 pi^2) - 2 for N >= 5",
            limit_ms: Some(5000),
            expected: || json!({ "failures": [] }),
            run: |_| g1_lower(),
        },
        VerifyCase {
            id: "c05-sharp-torsion-bounds",
            criterion: 5,
            kind: Table,
            provenance: Literature,
            citation: "table of sharp torsion orders over bases of genus 0..4",
            limit_ms: None,
            expected: || json!([25, 36, 36, 49, 50]),
            run: |_| sharp_bounds(),
        },
        VerifyCase {
            id: "c06-classify-sec10",
            criterion: 6,
            kind: Example,
            provenance: Literature,
            citation: "y^2 + txy + y = x^3 with an I9 fibre at infinity",
            limit_ms: Some(100),
            expected: || json!({ "at": { "3": "I1", "inf": "I9" }, "counts": { "I1": 3, "I9": 1 }, "euler": 12 }),
            run: |_| classify_catalog("SEC10"),
        },
        VerifyCase {
            id: "c06-classify-sec9",
            criterion: 6,
            kind: Example,
            provenance: Literature,
            citation: "y^2 = x(x^2 + 2 a2 x + 1) with a2 = t^2",
            limit_ms: Some(100),
            expected: || json!({ "at": { "-1": "I1", "1": "I1", "inf": "I8" }, "counts": { "I1": 4, "I8": 1 }, "euler": 12 }),
            run: |_| classify_catalog("SEC9"),
        },
        VerifyCase {
            id: "c06-classify-x11",
            criterion: 6,
            kind: Example,
            provenance: Derived,
            citation: "discriminant 16 l^2 (1 - 4l) t^6 vanishes only at 0 and infinity",
            limit_ms: Some(100),
            expected: || json!({ "at": { "0": "I0*", "inf": "I0*" }, "counts": { "I0*": 2 }, "euler": 12 }),
            run: |_| classify_catalog("X11"),
        },
        VerifyCase {
            id: "c06-classify-x33",
            criterion: 6,
            kind: Example,
            provenance: Literature,
            citation: "isotrivial surface y^2 = x^3 + tx",
            limit_ms: Some(100),
            expected: || json!({ "at": { "0": "III", "inf": "III*" }, "counts": { "III": 1, "III*": 1 }, "euler": 12 }),
            run: |_| classify_catalog("X33"),
        },
        VerifyCase {
            id: "c06-classify-x44",
            criterion: 6,
            kind: Example,
            provenance: Literature,
            citation: "isotrivial surface y^2 + ty = x^3",
            limit_ms: Some(100),
            expected: || json!({ "at": { "0": "IV", "inf": "IV*" }, "counts": { "IV": 1, "IV*": 1 }, "euler": 12 }),
            run: |_| classify_catalog("X44"),
        },
        VerifyCase {
            id: "c07-torsion-sec10",
            criterion: 7,
            kind: Example,
            provenance: Literature,
            citation: "3-torsion section meeting the component Th3 of the I9 fibre",
            limit_ms: None,
            expected: || json!({ "group": "Z/3", "incidence": { "inf": [3] } }),
            run: |_| torsion_incidence("SEC10"),
        },
        VerifyCase {
            id: "c07-torsion-sec9",
            criterion: 7,
            kind: Example,
            provenance: Literature,
            citation: "2-torsion section meeting the component Th4 of the I8 fibre",
            limit_ms: None,
            expected: || json!({ "group": "Z/2", "incidence": { "inf": [4] } }),
            run: |_| torsion_incidence("SEC9"),
        },
        VerifyCase {
            id: "c07-torsion-x11",
            criterion: 7,
            kind: Example,
            provenance: Literature,
            citation: "full 2-torsion on X11",
            limit_ms: None,
            expected: || json!("(Z/2)^2"),
            run: |_| torsion_of("X11"),
        },
        VerifyCase {
            id: "c07-torsion-x33",
            criterion: 7,
            kind: Example,
            provenance: Literature,
            citation: "2-torsion section (0, 0) on X33",
            limit_ms: None,
            expected: || json!("Z/2"),
            run: |_| torsion_of("X33"),
        },
        VerifyCase {
            id: "c07-torsion-x3333",
            criterion: 7,
            kind: Example,
            provenance: Literature,
            citation: "Hesse pencil with four I3 fibres",
            limit_ms: None,
            expected: || json!("(Z/3)^2"),
            run: |_| torsion_of("X3333"),
        },
        VerifyCase {
            id: "c07-torsion-x44",
            criterion: 7,
            kind: Example,
            provenance: Literature,
            citation: "3-torsion section (0, 0) on X44",
            limit_ms: None,
            expected: || json!("Z/3"),
            run: |_| torsion_of("X44"),
        },
        VerifyCase {
            id: "c07-torsion-x8211",
            criterion: 7,
            kind: Example,
            provenance: Literature,
            citation: "surface with fibres I8, I2, I1, I1 and 4-torsion",
            limit_ms: None,
            expected: || json!("Z/4"),
            run: |_| torsion_of("X8211"),
        },
        VerifyCase {
            id: "c08-split-x8211",
            criterion: 8,
            kind: Example,
            provenance: Literature,
            citation: "Z/4 does not split at the I2 fibre while its index-2 subgroup does",
            limit_ms: None,
            expected: || {
                json!({
                    "full": { "group": "Z/4", "splits_at_I2": false },
                    "double": { "group": "Z/2", "splits_at_I2": true, "splits_at_I8": true },
                })
            },
            run: |_| split_x8211(),
        },
        VerifyCase {
            id: "c08-split-valuation-vs-brute-force",
            criterion: 8,
            kind: Invariant,
            provenance: Derived,
            citation: "valuation gap criterion checked against exhaustive search",
            limit_ms: None,
            expected: || json!({ "nonempty": true, "violations": [] }),
            run: |_| split_valuation(),
        },
        VerifyCase {
            id: "c09-construct-sec10",
            criterion: 9,
            kind: Example,
            provenance: Literature,
            citation: "Z/3 quotient with multiple fibres 3I9 and 3I0",
            limit_ms: None,
            expected: || {
                json!({
                    "chi": 1, "q": 0, "p_g": 0,
                    "multiple": ["3I0", "3I9"],
                    "kod": "1",
                    "enriques": false,
                    "p2": 1,
                    "autq": { "relation": "contains", "group": "Z/3" },
                    "audits_pass": true,
                })
            },
            run: |_| sec10(),
        },
        VerifyCase {
            id: "c10-construct-sec9-s1",
            criterion: 10,
            kind: Example,
            provenance: Literature,
            citation: "Z/2 quotient with one smooth double fibre is Enriques",
            limit_ms: None,
            expected: || sec9_expected(1),
            run: |_| sec9(1),
        },
        VerifyCase {
            id: "c10-construct-sec9-s2",
            criterion: 10,
            kind: Example,
            provenance: Literature,
            citation: "Z/2 quotient with P2 = 2s - 1, s = 2",
            limit_ms: None,
            expected: || sec9_expected(2),
            run: |_| sec9(2),
        },
        VerifyCase {
            id: "c10-construct-sec9-s3",
            criterion: 10,
            kind: Example,
            provenance: Literature,
            citation: "Z/2 quotient with P2 = 2s - 1, s = 3",
            limit_ms: None,
            expected: || sec9_expected(3),
            run: |_| sec9(3),
        },
        VerifyCase {
            id: "c11-construct-x3333",
            criterion: 11,
            kind: Example,
            provenance: Literature,
            citation: "equality case |Aut_Q| = 9 for G = (Z/3)^2",
            limit_ms: None,
            expected: || json!({ "autq": { "relation": "equals", "group": "(Z/3)^2", "order": 9 }, "audits_pass": true }),
            run: |_| x3333(),
        },
        VerifyCase {
            id: "c12-example8-m1",
            criterion: 12,
            kind: Example,
            provenance: Literature,
            citation: "X33 base change of degree dm, d = 2, m = 1",
            limit_ms: None,
            expected: || example8_expected(1),
            run: |_| example8(1),
        },
        VerifyCase {
            id: "c12-example8-m2",
            criterion: 12,
            kind: Example,
            provenance: Literature,
            citation: "X33 base change of degree dm, d = 2, m = 2",
            limit_ms: None,
            expected: || example8_expected(2),
            run: |_| example8(2),
        },
        VerifyCase {
            id: "c12-example8-m5",
            criterion: 12,
            kind: Example,
            provenance: Literature,
            citation: "X33 base change of degree dm, d = 2, m = 5",
            limit_ms: None,
            expected: || example8_expected(5),
            run: |_| example8(5),
        },
        VerifyCase {
            id: "c13-lattice-nine",
            criterion: 13,
            kind: Example,
            provenance: Literature,
            citation: "I9 fibre lattice with a bisection: discriminant Z/9, D0^2 = -2",
            limit_ms: None,
            expected: || {
                json!({
                    "disc_orders": [9],
                    "generator_norm": "-8/9",
                    "index3_unimodular": 1,
                    "d0_norm": "-2",
                    "three_d0_integral": true,
                    "d0_generates_overlattice": true,
                })
            },
            run: |_| lattice_case(fixtures::nine_report()),
        },
        VerifyCase {
            id: "c13-lattice-r3",
            criterion: 13,
            kind: Example,
            provenance: Literature,
            citation: "A2 + E6 glue for the order-3 isotrivial case",
            limit_ms: None,
            expected: || {
                json!({
                    "v1_norm": "-2/3",
                    "v2_norm": "-4/3",
                    "v1_matches_dual": true,
                    "v2_matches_dual": true,
                    "glue_norm": "-2",
                    "index3_overlattices": 2,
                    "spanned_by_pm_v1_v2": true,
                })
            },
            run: |_| lattice_case(fixtures::r3_report()),
        },
        VerifyCase {
            id: "c13-lattice-r4",
            criterion: 13,
            kind: Example,
            provenance: Literature,
            citation: "A1 + E7 glue for the order-4 isotrivial case",
            limit_ms: None,
            expected: || json!({ "u_norm": "-2", "unimodular_overlattices": 1 }),
            run: |_| lattice_case(fixtures::r4_report()),
        },
        VerifyCase {
            id: "c13-lattice-ten-curves",
            criterion: 13,
            kind: Example,
            provenance: Literature,
            citation: "ten-curve configuration of an I8 fibre, zero section and bisection",
            limit_ms: None,
            expected: || {
                json!({
                    "det": -16,
                    "disc_orders": [4, 4],
                    "q_v": "0",
                    "q_v_prime": "0",
                    "b_v_v_prime": "3/4",
                    "v_generate": true,
                    "isotropic_as_stated": true,
                    "half_d1_is_2v_plus_2v_prime": true,
                    "half_d2_is_2v": true,
                    "even_unimodular_overlattices": 3,
                    "classes_up_to_mirror": 2,
                    "auxiliary_det": 8,
                })
            },
            run: |_| lattice_case(fixtures::ten_curve_report()),
        },
        VerifyCase {
            id: "c14-isotrivial-r3",
            criterion: 14,
            kind: Example,
            provenance: Literature,
            citation: "order-3 isotrivial data with Aut_Z trivial",
            limit_ms: None,
            expected: || json!({ "fibers": ["IV", "IV*"], "e": 12, "b2": 10, "autz_cap": 1 }),
            run: |_| iso_summary(&isotrivial::fixtures::r3(1)),
        },
        VerifyCase {
            id: "c14-isotrivial-r4",
            criterion: 14,
            kind: Example,
            provenance: Literature,
            citation: "order-4 isotrivial data with |Aut_Z| <= 2",
            limit_ms: None,
            expected: || json!({ "fibers": ["III", "III*"], "e": 12, "b2": 10, "autz_cap": 2 }),
            run: |_| iso_summary(&isotrivial::fixtures::r4(2)),
        },
        VerifyCase {
            id: "c14-isotrivial-r4-center",
            criterion: 14,
            kind: Example,
            provenance: Literature,
            citation: "psi2 = (i, 0) normalizes T and fixes the singular points",
            limit_ms: None,
            expected: || json!({ "normalizes": true, "centralizes": true, "fixes_singular_points": true }),
            run: |_| iso_r4_center(),
        },
        VerifyCase {
            id: "c14-isotrivial-r6",
            criterion: 14,
            kind: Example,
            provenance: Literature,
            citation: "order-6 isotrivial data with |Aut_Z| = 3",
            limit_ms: None,
            expected: || json!({ "fibers": ["II", "II*"], "e": 12, "b2": 10, "autz_cap": 3 }),
            run: |_| iso_summary(&isotrivial::fixtures::r6(3)),
        },
        VerifyCase {
            id: "c15-prop-degree-formula",
            criterion: 15,
            kind: Invariant,
            provenance: Trivial,
            citation: "a rational function has as many zeros as poles",
            limit_ms: None,
            expected: || clean(TRIALS),
            run: prop_degree_formula,
        },
        VerifyCase {
            id: "c15-prop-euler-chi",
            criterion: 15,
            kind: Invariant,
            provenance: Trivial,
            citation: "e = 12 chi for random Weierstrass models of degree <= 4",
            limit_ms: None,
            expected: || clean(TRIALS),
            run: prop_euler_chi,
        },
        VerifyCase {
            id: "c15-prop-hj-chains",
            criterion: 15,
            kind: Invariant,
            provenance: Trivial,
            citation: "Hirzebruch-Jung chains evaluate back to m/k",
            limit_ms: None,
            expected: || clean(TRIALS + 23),
            run: prop_hj_chains,
        },
        VerifyCase {
            id: "c15-prop-multiplicativity",
            criterion: 15,
            kind: Invariant,
            provenance: Trivial,
            citation: "s, u and t are multiplicative",
            limit_ms: None,
            expected: || clean(TRIALS),
            run: prop_multiplicativity,
        },
        VerifyCase {
            id: "c15-prop-torsion-closure",
            criterion: 15,
            kind: Invariant,
            provenance: Trivial,
            citation: "torsion sections form a group",
            limit_ms: None,
            expected: || clean(TRIALS),
            run: prop_torsion_closure,
        },
        VerifyCase {
            id: "c15-prop-valuation-additivity",
            criterion: 15,
            kind: Invariant,
            provenance: Trivial,
            citation: "v(fg) = v(f) + v(g)",
            limit_ms: None,
            expected: || clean(TRIALS),
            run: prop_valuation_additivity,
        },
    ];
    v.sort_by(|a, b| a.id.cmp(b.id));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_cover_every_criterion() {
        let cs = cases();
        let ids: HashSet<&str> = cs.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), cs.len());
        let crit: HashSet<u32> = cs.iter().map(|c| c.criterion).collect();
        assert_eq!(crit, (1..=15).collect());
        assert!(cs.iter().all(|c| !c.citation.is_empty()));
    }

    #[test]
    fn continued_fraction_oracle() {
        use num_rational::Ratio;
        assert_eq!(continued_fraction(&[-3, -2, -2]), Some(Ratio::new(7, 3)));
        assert_eq!(continued_fraction(&[-2, -2]), Some(Ratio::new(3, 2)));
    }

    #[test]
    fn outcome_round_trip() {
        let c = case("c05-sharp-torsion-bounds").unwrap();
        let o = run_case(&c, &Ctx::default());
        assert!(o.pass, "{o:?}");
        let back: CaseOutcome = serde_json::from_str(&serde_json::to_string(&o).unwrap()).unwrap();
        assert_eq!(back, o);
    }

    #[test]
    fn failing_case_reports_error() {
        let c = VerifyCase {
            id: "x",
            criterion: 0,
            kind: CaseKind::Table,
            provenance: Provenance::Trivial,
            citation: "",
            limit_ms: None,
            expected: || json!(1),
            run: |_| Err(Error::SingularModel),
        };
        let o = run_case(&c, &Ctx::default());
        assert!(!o.pass);
        assert_eq!(o.actual, json!({ "error": "singular_model" }));
    }
}

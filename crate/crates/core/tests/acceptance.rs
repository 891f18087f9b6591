//! One test per acceptance criterion. Each prints a single
//! `criterion N: PASS` or `criterion N: FAIL (...)` line naming the failed items.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use ellsurf::algebra::Rational;
use ellsurf::catalog;
use ellsurf::construction::{construct, BranchDatum, ConstructionReport, KodairaDim, Relation};
use ellsurf::isotrivial::{self, fixtures as iso, ElementSpec, IsotrivialInput};
use ellsurf::kodaira::{classify_all, SurfaceData};
use ellsurf::lattice::{check_splitting_at_fiber, enumerate_overlattices, fixtures, DiscGroup};
use ellsurf::modular::{check_claim_range, check_g1_lower_range, genus_g1, mw_torsion_bound, t_func};
use ellsurf::verify::{self, Ctx};

const G1_TABLE_LIMIT: Duration = Duration::from_millis(10);
const CLAIM_LIMIT: Duration = Duration::from_secs(5);
const LOWER_BOUND_LIMIT: Duration = Duration::from_secs(5);
const CLASSIFY_LIMIT: Duration = Duration::from_millis(100);

struct Check {
    criterion: u32,
    failed: Vec<String>,
}

impl Check {
    fn new(criterion: u32) -> Self {
        Check { criterion, failed: Vec::new() }
    }

    fn item(&mut self, name: impl Into<String>, ok: bool) {
        if !ok {
            self.failed.push(name.into());
        }
    }

    fn finish(self) {
        if self.failed.is_empty() {
            println!("criterion {}: PASS", self.criterion);
        } else {
            println!("criterion {}: FAIL ({})", self.criterion, self.failed.join("; "));
        }
        assert!(self.failed.is_empty(), "criterion {} failed: {:?}", self.criterion, self.failed);
    }
}

/// Fastest of three runs, so that a busy test harness does not decide a timing item.
fn best_of_three<T>(f: impl Fn() -> T) -> (T, Duration) {
    let mut best = None;
    let mut out = None;
    for _ in 0..3 {
        let t0 = Instant::now();
        let v = f();
        let dt = t0.elapsed();
        if best.is_none_or(|b| dt < b) {
            best = Some(dt);
        }
        out = Some(v);
    }
    (out.expect("ran"), best.expect("ran"))
}

fn q(s: &str) -> Rational {
    s.parse().expect("rational literal")
}

// ---- independent oracles -------------------------------------------------

fn phi(n: u64) -> u64 {
    (1..=n).filter(|&k| num_gcd(k, n) == 1).count() as u64
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { num_gcd(b, a % b) }
}

/// Genus of `X_1(N)`, `N >= 5`, from the index in `PSL2(Z)` and the cusp count.
fn g1_from_cusps(n: u64) -> i64 {
    let mut num = 1u64;
    let mut den = 1u64;
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            num *= p * p - 1;
            den *= p * p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    // g = 1 + mu/12 - c/2 with 2 mu = N^2 prod (1 - p^-2) and 2 c = sum phi(d) phi(N/d)
    let mu2 = n * n * num / den;
    let c2: u64 = (1..=n).filter(|d| n % d == 0).map(|d| phi(d) * phi(n / d)).sum();
    let twelve_g = 12 + mu2 as i64 / 2 - 3 * c2 as i64;
    assert_eq!(twelve_g % 12, 0);
    twelve_g / 12
}

// ---- helpers -------------------------------------------------------------

fn classify(name: &str) -> (SurfaceData, Duration) {
    let model = catalog::entry(name).expect("catalog entry").model;
    let (s, dt) = best_of_three(|| classify_all(&model).expect("classifies"));
    (s, dt)
}

fn at_rational_places(s: &SurfaceData) -> BTreeMap<String, String> {
    s.fibers
        .iter()
        .filter(|f| f.place.degree() == 1)
        .map(|f| (f.place.label(), f.kind.to_string()))
        .collect()
}

fn geometric_count(s: &SurfaceData, kind: &str) -> usize {
    s.fiber_multiset().into_iter().filter(|(k, _)| k.to_string() == kind).map(|(_, n)| n).sum()
}

fn euler_sum(s: &SurfaceData) -> i64 {
    s.fibers.iter().map(|f| f.kind.euler() as i64 * f.count() as i64).sum()
}

fn branch(point: &str, m: &[i64]) -> BranchDatum {
    BranchDatum { point: point.to_string(), monodromy: m.to_vec() }
}

fn smooth(n: usize, m: &[i64]) -> Vec<BranchDatum> {
    (0..n).map(|i| branch(&format!("b{i}"), m)).collect()
}

fn audits_pass(r: &ConstructionReport) -> bool {
    !r.audits.is_empty() && r.audits.iter().all(|a| a.pass)
}

fn iso_fibers(input: &IsotrivialInput) -> (Vec<String>, i64, i64, u64) {
    let data = isotrivial::validate(input).expect("valid dataset");
    let r = isotrivial::analyse(&data, None).expect("analysed");
    let mut f: Vec<String> = r.fibers.iter().map(|f| f.fiber.clone()).filter(|f| !f.ends_with("I0")).collect();
    f.sort();
    (f, r.e, r.b2, r.autz_bound.bound as u64)
}

// ---- criteria ------------------------------------------------------------

#[test]
fn criterion_01_g1_table() {
    let mut c = Check::new(1);
    let expected = [1, 0, 2, 1, 1, 2, 5, 2, 7, 3, 5, 6, 12, 5, 12];
    let (got, dt) = best_of_three(|| (11..=25).map(|n| genus_g1(n).expect("g1")).collect::<Vec<_>>());
    c.item("table values", got == expected);
    let oracle: Vec<i64> = (11..=25).map(g1_from_cusps).collect();
    c.item("cusp-count oracle", oracle == expected);
    c.item(format!("runtime {dt:?} < {G1_TABLE_LIMIT:?}"), dt < G1_TABLE_LIMIT);
    c.finish();
}

#[test]
fn criterion_02_t_table() {
    let mut c = Check::new(2);
    for (n, t) in [(2, "2/3"), (3, "1/2"), (5, "1/3"), (7, "1/4"), (4, "5/12"), (9, "2/9"), (8, "1/4"), (16, "7/48"), (32, "1/12")]
    {
        c.item(format!("t({n}) = {t}"), t_func(n).expect("t") == q(t));
    }
    c.finish();
}

#[test]
fn criterion_03_claim_range() {
    let mut c = Check::new(3);
    let t0 = Instant::now();
    let r = check_claim_range(26, 10_000).expect("claim range");
    let dt = t0.elapsed();
    c.item("every N in 26..=10000 checked", r.checked == 9975);
    c.item(format!("t(N) <= 1/9, failures {:?}", r.failures), r.failures.is_empty());
    c.item(format!("runtime {dt:?} < {CLAIM_LIMIT:?}"), dt < CLAIM_LIMIT);
    c.finish();
}

#[test]
fn criterion_04_g1_lower_bound() {
    let mut c = Check::new(4);
    let t0 = Instant::now();
    let failures = check_g1_lower_range(5, 1000).expect("lower bound");
    let dt = t0.elapsed();
    c.item(format!("certified bound, failures {failures:?}"), failures.is_empty());
    // floating-point second route with a margin far above rounding error
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let float_fail: Vec<i64> = (5..=1000)
        .filter(|&n| {
            let g1 = g1_from_cusps(n as u64) as f64;
            g1 - ((n * n) as f64 / (12.0 * pi2) - 2.0) <= 1e-9
        })
        .collect();
    c.item(format!("floating-point route, failures {float_fail:?}"), float_fail.is_empty());
    c.item(format!("runtime {dt:?} < {LOWER_BOUND_LIMIT:?}"), dt < LOWER_BOUND_LIMIT);
    c.finish();
}

#[test]
fn criterion_05_sharp_torsion_bounds() {
    let mut c = Check::new(5);
    let sharp: Vec<Option<u64>> = (0..=4).map(|g| mw_torsion_bound(g, false).expect("bound").sharp).collect();
    c.item(format!("sharp values {sharp:?}"), sharp == [Some(25), Some(36), Some(36), Some(49), Some(50)]);
    c.finish();
}

#[test]
fn criterion_06_fibre_classification() {
    let mut c = Check::new(6);
    let timed = |c: &mut Check, name: &str| {
        let (s, dt) = classify(name);
        c.item(format!("{name}: sum e = 12"), euler_sum(&s) == 12 && s.euler == 12);
        c.item(format!("{name}: runtime {dt:?} < {CLASSIFY_LIMIT:?}"), dt < CLASSIFY_LIMIT);
        s
    };
    let pairs = |v: &[(&str, &str)]| -> BTreeMap<String, String> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    };

    let s = timed(&mut c, "X33");
    c.item("X33: III@0, III*@inf", at_rational_places(&s) == pairs(&[("0", "III"), ("inf", "III*")]) && s.fibers.len() == 2);

    let s = timed(&mut c, "X44");
    c.item("X44: IV@0, IV*@inf", at_rational_places(&s) == pairs(&[("0", "IV"), ("inf", "IV*")]) && s.fibers.len() == 2);

    let s = timed(&mut c, "X11(2)");
    let at = at_rational_places(&s);
    c.item("X11(2): I0*@0, I0*@inf", at.get("0").map(String::as_str) == Some("I0*") && at.get("inf").map(String::as_str) == Some("I0*"));
    // literal item; two I0* already account for e = 12, see the decisions ledger
    c.item(format!("X11(2): I1 x 2 (found {})", geometric_count(&s, "I1")), geometric_count(&s, "I1") == 2);

    let s = timed(&mut c, "SEC10");
    c.item("y^2 + txy + y = x^3: I9@inf", at_rational_places(&s).get("inf").map(String::as_str) == Some("I9"));
    c.item("y^2 + txy + y = x^3: I1 x 3", geometric_count(&s, "I1") == 3 && s.fibers.iter().map(|f| f.count()).sum::<usize>() == 4);

    let s = timed(&mut c, "SEC9");
    c.item("a2 = t^2: I8@inf", at_rational_places(&s).get("inf").map(String::as_str) == Some("I8"));
    c.item("a2 = t^2: I1 x 4", geometric_count(&s, "I1") == 4 && s.fibers.iter().map(|f| f.count()).sum::<usize>() == 5);
    c.finish();
}

#[test]
fn criterion_07_torsion_gluing() {
    let mut c = Check::new(7);
    for (name, group) in
        [("X33", "Z/2"), ("X44", "Z/3"), ("X11", "(Z/2)^2"), ("SEC10", "Z/3"), ("SEC9", "Z/2"), ("X8211", "Z/4"), ("X3333", "(Z/3)^2")]
    {
        let t = catalog::load(name).expect("catalog").torsion;
        c.item(format!("{name}: {group} (found {})", t.name()), t.name() == group);
    }
    for (name, comp) in [("SEC10", 3), ("SEC9", 4)] {
        let t = catalog::load(name).expect("catalog").torsion;
        let i = t.slots.iter().position(|s| s.label == "inf").expect("fibre at infinity");
        c.item(format!("{name}: generator meets Th{comp}"), t.generators.len() == 1 && t.generators[0][i] == comp);
    }
    let (s, _) = classify("X8211");
    let counts: BTreeMap<String, usize> = s.fiber_multiset().into_iter().map(|(k, n)| (k.to_string(), n)).collect();
    let want: BTreeMap<String, usize> = [("I8", 1), ("I2", 1), ("I1", 2)].iter().map(|(k, n)| (k.to_string(), *n)).collect();
    c.item("X8211: fibres I8 + I2 + 2 I1", counts == want);
    c.finish();
}

#[test]
fn criterion_08_splitting() {
    let mut c = Check::new(8);
    let j = catalog::load("X8211").expect("catalog");
    let i2 = j.torsion.slots.iter().find(|s| s.kind.to_string() == "I2").expect("I2 fibre").label.clone();
    let full = check_splitting_at_fiber(&j.torsion, &i2).expect("split check");
    c.item("Z/4 does not split at I2", full.is_none());
    let half = j.subgroup_from_coords(&[vec![2]]).expect("subgroup");
    c.item("<2P> is Z/2", half.name() == "Z/2");
    c.item("<2P> splits at I2", check_splitting_at_fiber(&half, &i2).expect("split check").is_some());
    let case = verify::case("c08-split-valuation-vs-brute-force").expect("case exists");
    let o = verify::run_case(&case, &Ctx::default());
    c.item(format!("valuation criterion implies splitting on every catalog fixture: {}", o.actual), o.pass);
    c.finish();
}

#[test]
fn criterion_09_construction_sec10() {
    let mut c = Check::new(9);
    let j = catalog::load("SEC10").expect("catalog");
    let r = construct(&j, &j.torsion, &[branch("inf", &[1]), branch("p", &[2])]).expect("construct");
    c.item("chi = 1", r.chi == 1);
    c.item("q = p_g = 0", r.q == 0 && r.p_g == 0);
    c.item(format!("multiple fibres {:?}", r.multiple_labels()), r.multiple_labels() == ["3I0", "3I9"]);
    c.item("kod = 1", r.kodaira_dim == KodairaDim::One);
    c.item("Aut_Q contains Z/3", matches!(r.autq.relation, Relation::Contains | Relation::Equals) && r.autq.group == "Z/3");
    c.item("all bound audits pass", audits_pass(&r));
    c.finish();
}

#[test]
fn criterion_10_construction_sec9() {
    let mut c = Check::new(10);
    let j = catalog::load("SEC9").expect("catalog");
    for s in 1..=3usize {
        let mut b = vec![branch("inf", &[1])];
        b.extend(smooth(2 * s - 1, &[1]));
        let r = construct(&j, &j.torsion, &b).expect("construct");
        let mut want = vec!["2I8".to_string()];
        want.extend(std::iter::repeat_n("2I0".to_string(), 2 * s - 1));
        want.sort();
        c.item(format!("s = {s}: multiple fibres {:?}", r.multiple_labels()), r.multiple_labels() == want);
        c.item(format!("s = {s}: Aut_Q contains Z/2"), r.autq.group == "Z/2" && r.autq.relation != Relation::Trivial);
        if s == 1 {
            c.item("s = 1: Enriques", r.enriques);
        } else {
            c.item(format!("s = {s}: kod 1"), r.kodaira_dim == KodairaDim::One && !r.enriques);
            c.item(format!("s = {s}: P2 = {}", 2 * s - 1), r.p2 == Some(2 * s as i64 - 1));
        }
    }
    c.finish();
}

#[test]
fn criterion_11_construction_x3333() {
    let mut c = Check::new(11);
    let case = verify::case("c11-construct-x3333").expect("case exists");
    let o = verify::run_case(&case, &Ctx::default());
    c.item(format!("Aut_Q = (Z/3)^2 with order 9: {}", o.actual), o.pass);
    let autq = &o.actual["autq"];
    c.item("relation equals", autq["relation"] == "equals");
    c.item("|Aut_Q| = 9", autq["order"] == 9 && autq["group"] == "(Z/3)^2");
    c.finish();
}

#[test]
fn criterion_12_example_pattern() {
    let mut c = Check::new(12);
    let j = catalog::load("X33").expect("catalog");
    let d = 2u64;
    for m in 1..=6u64 {
        let r = construct(&j, &j.torsion, &smooth((d * m) as usize, &[1])).expect("construct");
        let p2 = r.p2.expect("P2");
        c.item(format!("m = {m}: |Aut_Q| = 4dm = {}", r.autq.order), r.autq.order == 4 * d * m);
        c.item(format!("m = {m}: |Aut_Q| = 4(P2 + 1)"), r.autq.order as i64 == 4 * (p2 + 1));
        let base_divides = (p2 + 1) % r.autq.base_order as i64 == 0;
        let audit = r.audits.iter().any(|a| a.rule == "base-divides" && a.pass);
        c.item(format!("m = {m}: |Aut_Q|_B divides P2 + 1"), base_divides && audit);
    }
    c.finish();
}

#[test]
fn criterion_13_lattice_fixtures() {
    let mut c = Check::new(13);

    let t = fixtures::ten_curve_report().expect("ten curves");
    c.item("ten curves: det = -16", t.det == -16);
    c.item("ten curves: disc group (Z/4)^2", t.disc_orders == [4, 4]);
    c.item("ten curves: form U(3/4)", t.q_v == "0" && t.q_v_prime == "0" && t.b_v_v_prime == "3/4" && t.v_generate);
    c.item("ten curves: isotropic set as stated", t.isotropic_as_stated);
    c.item("ten curves: two even unimodular overlattices up to symmetry", t.classes_up_to_mirror == 2);

    let nine = fixtures::nine_lattice().expect("lattice");
    let dg = DiscGroup::new(&nine).expect("disc group");
    c.item("nine: disc group Z/9", dg.orders == [9]);
    let all: Vec<_> = enumerate_overlattices(&nine, false)
        .expect("overlattices")
        .into_iter()
        .filter(|o| o.index == 3 && o.unimodular)
        .collect();
    c.item("nine: unique index-3 unimodular overlattice", all.len() == 1);
    // literal item; the lattice contains B with B^2 = -3, so no overlattice is even
    c.item("nine: that overlattice is even", all.len() == 1 && all[0].even);
    let r = fixtures::nine_report().expect("nine report");
    c.item("nine: D0^2 = -2", r.d0_norm == "-2" && r.three_d0_integral && r.d0_generates_overlattice);

    let r3 = fixtures::r3_report().expect("r3");
    c.item("v1^2 = -2/3", r3.v1_norm == "-2/3");
    c.item("v2^2 = -4/3", r3.v2_norm == "-4/3");
    let r4 = fixtures::r4_report().expect("r4");
    c.item("u^2 = -2", r4.u_norm == "-2");
    c.finish();
}

#[test]
fn criterion_14_isotrivial_datasets() {
    let mut c = Check::new(14);
    for (r, input, fibres, cap) in [
        (3, iso::r3(1), ["IV", "IV*"], 1),
        (4, iso::r4(2), ["III", "III*"], 2),
        (6, iso::r6(3), ["II", "II*"], 3),
    ] {
        let (f, e, b2, autz) = iso_fibers(&input);
        c.item(format!("r = {r}: fibres {f:?}"), f == fibres);
        c.item(format!("r = {r}: e = 12, b2 = 10"), e == 12 && b2 == 10);
        c.item(format!("r = {r}: Aut_Z cap {autz}"), autz == cap);
    }
    let mut input = iso::r4(2);
    input.psi2 = Some(ElementSpec { lambda: 1, c: vec!["0".into(), "0".into()] });
    let data = isotrivial::validate(&input).expect("valid");
    let psi = data.element(input.psi2.as_ref().expect("set")).expect("element");
    let v = isotrivial::analyse(&data, Some(&psi)).expect("analysed").center_check.expect("center check");
    c.item("r = 4: psi2 = (i, 0) passes the center check", v.normalizes && v.centralizes && v.fixes_singular_points);
    c.finish();
}

#[test]
fn criterion_15_property_suites() {
    let mut c = Check::new(15);
    let ctx = Ctx::default();
    let outcomes = verify::run_cases(|id| id.starts_with("c15-"), &ctx);
    c.item("six suites", outcomes.len() == 6);
    for o in &outcomes {
        let trials = o.actual["trials"].as_u64().unwrap_or(0);
        let failures = o.actual["failures"].as_array().map_or(usize::MAX, Vec::len);
        c.item(format!("{}: {trials} trials, {failures} failures", o.id), o.pass && trials >= 100 && failures == 0);
    }
    let euler = outcomes.iter().find(|o| o.id == "c15-prop-euler-chi");
    c.item("e = 12 chi over exactly 100 random models", euler.is_some_and(|o| o.actual["trials"] == 100));
    c.finish();
}

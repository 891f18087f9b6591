use std::collections::BTreeMap;

use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use ellsurf::algebra::{Place, Poly, Rational};
use ellsurf::construction::{BranchDatum, ConstructInput, GroupSpec, JacobianRef};
use ellsurf::isotrivial::{fixtures, ElementSpec, IsotrivialInput};
use ellsurf::kodaira::WeierstrassModel;
use ellsurf::lattice::IntegralLattice;
use ellsurf::verify::{self, Ctx};

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(x: &T) {
    let s = serde_json::to_string(x).expect("serializes");
    let back: T = serde_json::from_str(&s).unwrap_or_else(|e| panic!("{e}: {s}"));
    assert_eq!(&back, x, "{s}");
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..12).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 0..6).prop_map(Poly::from_coeffs)
}

fn model() -> impl Strategy<Value = WeierstrassModel> {
    (poly(), poly(), poly(), poly(), poly()).prop_map(|(a, b, c, d, e)| WeierstrassModel::new(a, b, c, d, e))
}

fn element() -> impl Strategy<Value = ElementSpec> {
    (0i64..6, prop::collection::vec(rational(), 2))
        .prop_map(|(lambda, c)| ElementSpec { lambda, c: c.iter().map(|x| x.to_string()).collect() })
}

fn branch() -> impl Strategy<Value = BranchDatum> {
    ("[a-z0-9]{1,4}", prop::collection::vec(-5i64..5, 1..3))
        .prop_map(|(point, monodromy)| BranchDatum { point, monodromy })
}

proptest! {
    #[test]
    fn weierstrass_model(w in model()) {
        round_trip(&w);
    }

    #[test]
    fn gram_matrix(rows in prop::collection::vec(prop::collection::vec(-9i64..9, 3), 3)) {
        round_trip(&IntegralLattice { gram: rows });
    }

    #[test]
    fn branch_datum(b in branch()) {
        round_trip(&b);
    }

    #[test]
    fn element_spec(e in element()) {
        round_trip(&e);
    }

    #[test]
    fn isotrivial_input(r in prop::sample::select(vec![2u32, 3, 4, 6]), g in 0i64..3, ms in prop::collection::vec(element(), 1..5), psi in prop::option::of(element())) {
        round_trip(&IsotrivialInput { r, t: vec![vec!["1".into(), "0".into()]], base_genus: g, monodromies: ms, psi2: psi });
    }

    #[test]
    fn construct_input(w in model(), bs in prop::collection::vec(branch(), 0..4), n in 1u64..5) {
        let mut incidence = BTreeMap::new();
        incidence.insert("inf".to_string(), vec![n as u32 % 3]);
        let group = GroupSpec { n, n_prime: 1, incidence };
        round_trip(&ConstructInput { jacobian: JacobianRef::Model(w), group: Some(group), branch: bs.clone() });
        round_trip(&ConstructInput { jacobian: JacobianRef::Catalog("catalog:SEC10".into()), group: None, branch: bs });
    }
}

#[test]
fn fixture_datasets() {
    for input in [fixtures::r3(1), fixtures::r4(2), fixtures::r6(3)] {
        round_trip(&input);
    }
}

#[test]
fn places() {
    round_trip(&Place::Infinity);
    round_trip(&Place::Finite(Poly::from_i64(&[1, 0, 1])));
}

#[test]
fn case_outcomes() {
    let ctx = Ctx::default();
    for o in verify::run_cases(|id| id.starts_with("c01-") || id.starts_with("c07-"), &ctx) {
        round_trip(&o);
    }
}

#[test]
fn minimal_inputs_fill_defaults() {
    let w: WeierstrassModel = serde_json::from_str(r#"{"a4":[0,1]}"#).unwrap();
    assert_eq!(w.a4, Poly::t());
    assert!(w.a1.is_zero() && w.a6.is_zero());
    let g: GroupSpec = serde_json::from_str(r#"{"N":3}"#).unwrap();
    assert_eq!((g.n, g.n_prime, g.incidence.len()), (3, 1, 0));
    assert!(serde_json::from_str::<GroupSpec>(r#"{"N":3,"extra":1}"#).is_err());
}

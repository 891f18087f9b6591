use ellsurf::catalog::load;
use ellsurf::construction::{construct, BranchDatum, KodairaDim, Relation};

fn branches(list: &[(&str, &[i64])]) -> Vec<BranchDatum> {
    list.iter()
        .map(|(p, m)| BranchDatum { point: p.to_string(), monodromy: m.to_vec() })
        .collect()
}

fn smooth(n: usize, m: &[i64]) -> Vec<BranchDatum> {
    (0..n).map(|i| BranchDatum { point: format!("b{i}"), monodromy: m.to_vec() }).collect()
}

#[test]
fn sec9_family() {
    let j = load("SEC9").unwrap();
    for s in 1..=3usize {
        let mut b = branches(&[("inf", &[1])]);
        b.extend(smooth(2 * s - 1, &[1]));
        let r = construct(&j, &j.torsion, &b).unwrap();
        let mut want = vec!["2I8".to_string()];
        want.extend(std::iter::repeat("2I0".to_string()).take(2 * s - 1));
        want.sort();
        assert_eq!(r.multiple_labels(), want);
        assert_eq!(r.autq.relation, Relation::Contains);
        assert_eq!(r.autq.group, "Z/2");
        if s == 1 {
            assert!(r.enriques);
            assert_eq!(r.kodaira_dim, KodairaDim::Zero);
        } else {
            assert!(!r.enriques);
            assert_eq!(r.kodaira_dim, KodairaDim::One);
            assert_eq!(r.p2, Some(2 * s as i64 - 1));
        }
    }
}

#[test]
fn sec9_needs_the_rotated_fibre() {
    let j = load("SEC9").unwrap();
    let err = construct(&j, &j.torsion, &smooth(2, &[1])).unwrap_err();
    assert_eq!(err.code(), "construction_rejected");
}

#[test]
fn hesse_group_of_order_nine() {
    let j = load("X3333").unwrap();
    let g = &j.torsion;
    // every I3 fibre must be branched with a monodromy rotating it
    let mut data = Vec::new();
    let mut total = vec![0i64, 0];
    let labels: Vec<String> = g.slots.iter().map(|s| s.label.clone()).collect();
    for (k, label) in labels.iter().enumerate() {
        let i = g.slot_index(label).unwrap();
        let pick = g
            .elements()
            .into_iter()
            .find(|(c, e)| e[i] != 0 && (k < 3 || (c[0] as i64 + total[0]) % 3 == 0 && (c[1] as i64 + total[1]) % 3 == 0))
            .map(|(c, _)| c)
            .unwrap();
        total[0] += pick[0] as i64;
        total[1] += pick[1] as i64;
        data.push(BranchDatum { point: label.clone(), monodromy: pick.iter().map(|&x| x as i64).collect() });
    }
    let r = construct(&j, g, &data).unwrap();
    assert_eq!(r.autq.relation, Relation::Equals);
    assert_eq!(r.autq.order, 9);
    assert_eq!(r.autq.group, "(Z/3)^2");
}

#[test]
fn example8_pattern() {
    let j = load("X33").unwrap();
    for m in 1..=3usize {
        let r = construct(&j, &j.torsion, &smooth(2 * m, &[1])).unwrap();
        let p2 = r.p2.unwrap();
        assert_eq!(p2 + 1, 2 * m as i64);
        assert_eq!(r.autq.order, 4 * 2 * m as u64);
        assert_eq!(r.autq.order as i64, 4 * (p2 + 1));
        assert_eq!(r.autq.base_order, 2 * m as u64);
        assert_eq!(r.autq.relation, Relation::Equals);
    }
}

#[test]
fn order_four_does_not_split_at_i2() {
    let j = load("X8211").unwrap();
    let err = construct(&j, &j.torsion, &branches(&[("inf", &[1]), ("0", &[3])])).unwrap_err();
    assert_eq!(err.code(), "construction_rejected");
    assert!(err.to_string().contains("does not split"), "{err}");
    let half = j.subgroup_from_coords(&[vec![2]]).unwrap();
    let r = construct(&j, &half, &branches(&[("inf", &[1]), ("b", &[1])])).unwrap();
    assert_eq!(r.multiple_labels(), vec!["2I0", "2I8"]);
}

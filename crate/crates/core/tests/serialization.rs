use matching_ekr::coclique::{cocliques_json, enumerate_maximum_cocliques};
use matching_ekr::graph::build_graph;
use matching_ekr::polytope::{polytope_membership, Membership, Violation};
use matching_ekr::reps::small_degree_check;
use matching_ekr::spectral::spectrum_records;
use matching_ekr::Spectrum;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, to_value};

#[test]
fn exact_values_are_strings() {
    let s = Spectrum::from_pairs(&[(8, 1), (2, 5), (-2, 9)]);
    let v = to_value(spectrum_records("M(6)", &s)).unwrap();
    assert_eq!(v[2], json!({"graph": "M(6)", "eigenvalue": "-2", "multiplicity": 9, "labels": []}));

    let c = to_value(small_degree_check(9).unwrap()).unwrap();
    assert_eq!(c["threshold"], "36");
    assert_eq!(c["expected"][0], "[1,1,1,1,1,1,1,1,1]");
}

#[test]
fn membership_verdicts_are_tagged() {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    // Uniform 1/2 on K_4 puts 3/2 on every vertex.
    let x = vec![half.clone(); 6];
    let m = polytope_membership(2, &x).unwrap();
    assert!(matches!(m, Membership::Violated(Violation::VertexDegree { vertex: 0, .. })));
    assert_eq!(to_value(&m).unwrap(), json!({"verdict": "violated", "constraint": "vertex_degree", "vertex": 0, "sum": "3/2"}));
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    assert_eq!(to_value(polytope_membership(2, &vec![third; 6]).unwrap()).unwrap(), json!({"verdict": "member"}));
}

#[test]
fn coclique_export_names_matchings() {
    let g = build_graph(3).unwrap();
    let cert = enumerate_maximum_cocliques(&g).unwrap();
    let v: serde_json::Value = serde_json::from_str(&cocliques_json(&g, &cert.cocliques)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 15);
    assert_eq!(v[0].as_array().unwrap().len(), 3);
    let c = to_value(&cert).unwrap();
    assert_eq!(c["alpha"], 3);
}

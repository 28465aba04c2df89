use dlrefine::expr::{Axiom, ConceptExpr, RoleExpr};
use dlrefine::parser::{parse_ontology, render_ontology, NON_SIMPLE_ROLE};

const ACAD: &str = include_str!("../fixtures/acad.onto");

#[test]
fn acad_axiom_counts() {
    let o = parse_ontology(ACAD).unwrap();
    assert_eq!(o.tbox.len(), 7);
    assert_eq!(o.abox.len(), 7);
    assert_eq!(o.individual_names.len(), 5);
    assert!(o.role_names.contains("hasAdvisor"));
    assert!(o.non_simple_roles().is_empty());
}

#[test]
fn acad_definitions() {
    let o = parse_ontology(ACAD).unwrap();
    let defs: Vec<&ConceptExpr> = o.definitions("IIT_MS_Student").collect();
    assert_eq!(defs.len(), 1);
    assert_eq!(
        defs[0],
        &ConceptExpr::and([
            ConceptExpr::atomic("IITStudent"),
            ConceptExpr::at_most(1, RoleExpr::named("hasAdvisor"), ConceptExpr::atomic("TeachingStaff")),
        ])
    );
    assert!(o.abox.contains(&Axiom::RoleAssertion {
        role: "hasAdvisor".into(),
        subject: "sam".into(),
        object: "roy".into(),
    }));
}

#[test]
fn acad_round_trip() {
    let o = parse_ontology(ACAD).unwrap();
    let text = render_ontology(&o);
    let back = parse_ontology(&text).unwrap();
    assert_eq!(back.tbox, o.tbox);
    assert_eq!(back.abox, o.abox);
    assert_eq!(render_ontology(&back), text);
}

#[test]
fn non_simple_roles_rejected() {
    let cases = [
        (include_str!("../fixtures/nonsimple_atleast.onto"), 2, 30),
        (include_str!("../fixtures/nonsimple_via_hierarchy.onto"), 3, 28),
        (include_str!("../fixtures/nonsimple_via_inverse.onto"), 3, 26),
    ];
    for (src, line, column) in cases {
        let err = parse_ontology(src).unwrap_err();
        assert_eq!(err.message, NON_SIMPLE_ROLE, "{src}");
        assert_eq!((err.line, err.column), (line, column), "{src}");
    }
}

#[test]
fn dropping_transitivity_makes_them_legal() {
    for src in [
        include_str!("../fixtures/nonsimple_atleast.onto"),
        include_str!("../fixtures/nonsimple_via_hierarchy.onto"),
        include_str!("../fixtures/nonsimple_via_inverse.onto"),
    ] {
        let kept: Vec<&str> = src.lines().filter(|l| !l.starts_with("TRANSITIVE")).collect();
        parse_ontology(&kept.join("\n")).unwrap();
    }
}

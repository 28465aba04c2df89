use dlrefine::expr::{Axiom, ConceptExpr};
use dlrefine::labelset::{concept_label_set, node_label_set, LabelSet};
use dlrefine::oracle::{
    bounded_entailment, bounded_equivalence, bounded_subsumption, check_axiom, SearchConfig, Verdict,
};
use dlrefine::parser::{parse_canonical, parse_ontology};
use dlrefine::reasoner::{classify, is_subsumed, materialize, TOP_KEY};
use dlrefine::refiner::{is_fixed_point, semantic_refine};
use dlrefine::Ontology;
use std::collections::BTreeSet;

const ACAD: &str = include_str!("../fixtures/acad.onto");
const DISJUNCTIVE: &str = include_str!("../fixtures/acad_disjunctive.onto");

fn acad() -> Ontology {
    parse_ontology(ACAD).unwrap()
}

fn set(xs: &[&str]) -> BTreeSet<ConceptExpr> {
    xs.iter().map(|s| parse_canonical(s).unwrap()).collect()
}

fn labels_of(x: &str) -> LabelSet {
    let o = acad();
    let tax = classify(&o);
    let m = materialize(&o, &tax);
    node_label_set(x, &m, &tax).unwrap()
}

fn tbox(o: &Ontology) -> Ontology {
    Ontology::from_axioms(o.tbox.clone())
}

#[test]
fn label_sets_of_students_and_staff() {
    assert_eq!(
        labels_of("sam").labels,
        set(&[
            "Student",
            "IITStudent",
            "IITPhdStudent",
            "(some enrolledIn IITProgramme)",
            "(atleast 2 hasAdvisor TeachingStaff)",
            "(atmost 1 hasAdvisor Professor)",
            "(all hasAdvisor TeachingStaff)",
            "(some hasAdvisor Professor)",
        ])
    );
    assert_eq!(labels_of("bob").labels, set(&["Professor", "TeachingStaff"]));
    assert_eq!(labels_of("alice").labels, set(&["AssistantProf", "TeachingStaff"]));
}

#[test]
fn roy_is_not_provably_a_professor() {
    // Sam's professor advisor may be someone other than roy.
    assert_eq!(labels_of("roy").labels, set(&["TeachingStaff"]));
    let goal = Axiom::ConceptAssertion {
        concept: ConceptExpr::atomic("Professor"),
        individual: "roy".into(),
    };
    let verdict = bounded_entailment(&acad(), &goal, 4).unwrap();
    let model = verdict.countermodel().expect("countermodel for Professor(roy)");
    assert!(acad().axioms().all(|ax| check_axiom(ax, model)));
    assert!(!check_axiom(&goal, model));
}

#[test]
fn every_label_is_entailed() {
    let o = acad();
    for x in ["tom", "sam", "bob", "alice", "roy"] {
        for l in &labels_of(x).labels {
            let goal = Axiom::ConceptAssertion {
                concept: l.clone(),
                individual: x.into(),
            };
            let v = bounded_entailment(&o, &goal, 3).unwrap();
            assert_eq!(v, Verdict::NoCountermodel { max_domain: 3 }, "{x}: {}", l.canonical());
        }
    }
}

#[test]
fn materialized_facts_survive_domain_four() {
    let o = acad();
    let tax = classify(&o);
    let m = materialize(&o, &tax);
    let mut goals: Vec<Axiom> = m
        .concept_facts
        .iter()
        .filter(|(_, c)| c != TOP_KEY)
        .map(|(i, c)| Axiom::ConceptAssertion {
            concept: ConceptExpr::atomic(c.clone()),
            individual: i.clone(),
        })
        .collect();
    goals.extend(m.role_facts.iter().map(|(r, s, t)| Axiom::RoleAssertion {
        role: r.clone(),
        subject: s.clone(),
        object: t.clone(),
    }));
    for g in goals {
        let v = bounded_entailment(&o, &g, 4).unwrap();
        assert!(!v.is_countermodel(), "{g:?}");
    }
}

#[test]
fn materialize_twice_is_stable() {
    let o = acad();
    let tax = classify(&o);
    let once = materialize(&o, &tax);
    let twice = materialize(&once.to_ontology(), &tax);
    assert_eq!(once.concept_facts, twice.concept_facts);
    assert_eq!(once.role_facts, twice.role_facts);
}

#[test]
fn axiom_order_does_not_matter() {
    let mut lines: Vec<&str> = ACAD.lines().collect();
    lines.reverse();
    let o = parse_ontology(&lines.join("\n")).unwrap();
    let tax = classify(&o);
    let m = materialize(&o, &tax);
    for x in ["tom", "sam", "bob", "alice", "roy"] {
        assert_eq!(node_label_set(x, &m, &tax).unwrap(), labels_of(x), "{x}");
    }
}

#[test]
fn refined_rows() {
    let o = acad();
    let tax = classify(&o);
    let refined = |x: &str| semantic_refine(&labels_of(x), &o, &tax).labels;
    assert_eq!(
        refined("sam"),
        set(&[
            "Student",
            "(some enrolledIn IITProgramme)",
            "(exactly 1 hasAdvisor Professor)",
            "(nonvac hasAdvisor TeachingStaff)",
            "(atleast 1 hasAdvisor (and TeachingStaff (not Professor)))",
        ])
    );
    assert_eq!(refined("bob"), set(&["Professor"]));
    assert_eq!(refined("alice"), set(&["AssistantProf"]));
}

#[test]
fn refinement_preserves_meaning_for_every_individual() {
    let o = acad();
    let tax = classify(&o);
    let t = tbox(&o);
    for x in ["tom", "sam", "bob", "alice", "roy"] {
        let before = labels_of(x);
        let after = semantic_refine(&before, &o, &tax);
        assert!(is_fixed_point(&after, &o, &tax), "{x}");
        let v = bounded_equivalence(
            &t,
            &before.conjuncts(),
            &after.conjuncts(),
            SearchConfig::with_domain(3),
        )
        .unwrap();
        assert!(!v.is_countermodel(), "{x}: {v:?}");
    }
}

#[test]
fn tom_keeps_more_than_the_short_description() {
    // The three-label description leaves the other advisors unconstrained;
    // tom's definition says all of them are teaching staff.
    let o = acad();
    let tax = classify(&o);
    let ours = semantic_refine(&labels_of("tom"), &o, &tax).conjuncts();
    let short: Vec<ConceptExpr> = set(&[
        "Student",
        "(some enrolledIn IITProgramme)",
        "(exactly 1 hasAdvisor Professor)",
    ])
    .into_iter()
    .collect();
    let v = bounded_equivalence(&tbox(&o), &ours, &short, SearchConfig::with_domain(3)).unwrap();
    assert!(v.is_countermodel());
}

#[test]
fn phd_student_concept() {
    let o = acad();
    let tax = classify(&o);
    let raw = concept_label_set("IITPhdStudent", &o).unwrap();
    let v = bounded_subsumption(
        &tbox(&o),
        &ConceptExpr::atomic("IITPhdStudent"),
        &ConceptExpr::and(raw.conjuncts()),
        SearchConfig::with_domain(3),
    )
    .unwrap();
    assert!(!v.is_countermodel());
    assert_eq!(
        semantic_refine(&raw, &o, &tax).labels,
        set(&[
            "Student",
            "(some enrolledIn IITProgramme)",
            "(exactly 1 hasAdvisor Professor)",
            "(nonvac hasAdvisor TeachingStaff)",
            "(atleast 1 hasAdvisor (and TeachingStaff (not Professor)))",
        ])
    );
}

#[test]
fn disjunctive_definition_is_restored_after_refinement() {
    let o = parse_ontology(DISJUNCTIVE).unwrap();
    let tax = classify(&o);
    let raw = concept_label_set("IITStudent", &o).unwrap();
    let refined = semantic_refine(&raw, &o, &tax);
    assert_eq!(refined.labels, set(&["(some enrolledIn IITProgramme)"]));
    assert_eq!(
        refined.deferred,
        vec![parse_canonical("(or IITPhdStudent IIT_MS_Student)").unwrap()]
    );
    let v = bounded_equivalence(
        &tbox(&o),
        &[ConceptExpr::atomic("IITStudent")],
        &refined.conjuncts(),
        SearchConfig::with_domain(3),
    )
    .unwrap();
    assert!(!v.is_countermodel());
}

#[test]
fn structural_subsumption_matches_the_taxonomy() {
    let o = acad();
    let tax = classify(&o);
    let names: Vec<&String> = o.concept_names.iter().collect();
    for a in &names {
        for b in &names {
            assert_eq!(
                is_subsumed(&ConceptExpr::atomic(a.as_str()), &ConceptExpr::atomic(b.as_str()), &tax),
                tax.concept_sub(a, b),
                "{a} {b}"
            );
        }
    }
}

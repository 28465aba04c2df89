//! Node-label-sets, edge-label-sets and concept label-sets.

use crate::expr::{expand_derived, to_cnf_top, Axiom, ConceptExpr, Form, Ontology};
use crate::reasoner::{
    classify, concept_holds, holds_restriction, materialize, MaterializedOntology, TaxonomyClosure, BOT_KEY, TOP_KEY,
};
use serde_json::json;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelSetError {
    #[error("unknown individual `{0}`")]
    UnknownIndividual(String),
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),
    #[error("individual `{individual}` is inconsistent: {axiom}")]
    Inconsistent { individual: String, axiom: String },
    #[error("concept `{0}` is unsatisfiable")]
    Unsatisfiable(String),
}

/// Labels attached to an individual or concept.
///
/// `deferred` holds D-clauses none of whose operands could be shown to hold;
/// they are part of the set's meaning but are kept out of `labels` so that
/// no label has a top-level disjunction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelSet {
    pub owner: String,
    pub labels: BTreeSet<ConceptExpr>,
    pub pr_marks: BTreeSet<ConceptExpr>,
    pub deferred: Vec<ConceptExpr>,
}

impl LabelSet {
    pub fn new(owner: impl Into<String>) -> Self {
        LabelSet {
            owner: owner.into(),
            ..LabelSet::default()
        }
    }

    pub fn from_labels(owner: impl Into<String>, labels: impl IntoIterator<Item = ConceptExpr>) -> Self {
        let mut ls = LabelSet::new(owner);
        for l in labels {
            ls.insert(l);
        }
        ls
    }

    /// Adds a label; `⊤` is dropped and top-level disjunctions are deferred.
    pub fn insert(&mut self, label: ConceptExpr) -> bool {
        match label {
            ConceptExpr::Top => false,
            ConceptExpr::Or(_) => {
                if self.deferred.contains(&label) {
                    false
                } else {
                    self.deferred.push(label);
                    true
                }
            }
            other => self.labels.insert(other),
        }
    }

    pub fn contains(&self, label: &ConceptExpr) -> bool {
        self.labels.contains(label)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty() && self.deferred.is_empty()
    }

    /// Everything the set asserts: labels followed by deferred D-clauses.
    pub fn conjuncts(&self) -> Vec<ConceptExpr> {
        self.labels.iter().chain(self.deferred.iter()).cloned().collect()
    }

    /// `⊓` of [`LabelSet::conjuncts`] with derived constructors expanded.
    pub fn meaning(&self) -> ConceptExpr {
        expand_derived(&ConceptExpr::and(self.conjuncts()))
    }

    pub fn canonical_labels(&self) -> Vec<String> {
        self.labels.iter().map(ConceptExpr::canonical).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "owner": self.owner,
            "labels": self.canonical_labels(),
            "deferred": self.deferred.iter().map(ConceptExpr::canonical).collect::<Vec<_>>(),
        })
    }
}

/// Roles linking an ordered pair of individuals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeLabelSet {
    pub subject: String,
    pub object: String,
    pub roles: BTreeSet<String>,
}

/// Concept names derived for `x`, without `⊤` and `⊥`.
pub fn seed_concepts(x: &str, m: &MaterializedOntology) -> BTreeSet<String> {
    m.concepts_of(x)
        .into_iter()
        .filter(|c| c != TOP_KEY && c != BOT_KEY)
        .collect()
}

/// Operands of the D-clause `d` that are known to hold for `x`.
pub fn handle_d_clause(
    x: &str,
    d: &ConceptExpr,
    m: &MaterializedOntology,
    tax: &TaxonomyClosure,
) -> BTreeSet<ConceptExpr> {
    let operands: Vec<ConceptExpr> = match d {
        ConceptExpr::Or(ops) => ops.clone(),
        other => vec![other.clone()],
    };
    let mut out = BTreeSet::new();
    for e in operands {
        let ok = match e.form() {
            Form::Atomic => e.as_atomic().is_some_and(|a| m.has_concept(x, a)),
            _ if e.is_restriction() => holds_restriction(x, &e, m, tax),
            _ => concept_holds(x, &e, m, tax),
        };
        if ok {
            out.insert(e);
        }
    }
    out
}

fn enrich(ls: &mut LabelSet, x: &str, rhs: &ConceptExpr, m: &MaterializedOntology, tax: &TaxonomyClosure) {
    for c in to_cnf_top(rhs) {
        match &c {
            ConceptExpr::Or(_) => {
                let holding = handle_d_clause(x, &c, m, tax);
                if holding.is_empty() {
                    ls.insert(c);
                } else {
                    for h in holding {
                        for part in to_cnf_top(&h) {
                            ls.insert(part);
                        }
                    }
                }
            }
            ConceptExpr::Atomic(a) if m.has_concept(x, a) => {
                ls.insert(c.clone());
            }
            _ if c.is_restriction() => {
                ls.insert(c);
            }
            _ => {}
        }
    }
}

/// Def. 1 label-set of `x`: derived concept names plus the restrictions and
/// D-clauses told about those names.
pub fn node_label_set(x: &str, m: &MaterializedOntology, tax: &TaxonomyClosure) -> Result<LabelSet, LabelSetError> {
    if !m.base.individual_names.contains(x) {
        return Err(LabelSetError::UnknownIndividual(x.to_string()));
    }
    if let Some(inc) = m.inconsistencies.iter().find(|i| i.individual == x) {
        return Err(LabelSetError::Inconsistent {
            individual: x.to_string(),
            axiom: inc.axiom.clone(),
        });
    }
    let mut ls = LabelSet::new(x);
    let seeds = seed_concepts(x, m);
    for a in &seeds {
        ls.insert(ConceptExpr::atomic(a.clone()));
    }
    for a in &seeds {
        for rhs in tax.told_superexpressions(a) {
            enrich(&mut ls, x, rhs, m, tax);
        }
    }
    if let Some(told) = m.told_assertions.get(x) {
        for e in told {
            enrich(&mut ls, x, e, m, tax);
        }
    }
    ls.deferred.sort();
    Ok(ls)
}

/// Def. 2 edge label-set: atomic roles `R` with `R(x, y)` derived.
pub fn edge_label_set(x: &str, y: &str, m: &MaterializedOntology) -> EdgeLabelSet {
    EdgeLabelSet {
        subject: x.to_string(),
        object: y.to_string(),
        roles: m
            .role_facts
            .iter()
            .filter(|(_, s, o)| s == x && o == y)
            .map(|(r, _, _)| r.clone())
            .collect(),
    }
}

/// Name of the individual introduced to stand for a concept.
pub fn fresh_individual(concept: &str, o: &Ontology) -> String {
    let mut name = format!("_:fresh_{}", concept);
    let mut k = 1;
    while o.individual_names.contains(&name) {
        name = format!("_:fresh_{}_{}", concept, k);
        k += 1;
    }
    name
}

/// Label-set of a concept, computed through a fresh instance of it. The
/// concept name itself is removed; deferred D-clauses are kept.
pub fn concept_label_set(a: &str, o: &Ontology) -> Result<LabelSet, LabelSetError> {
    if !o.concept_names.contains(a) {
        return Err(LabelSetError::UnknownConcept(a.to_string()));
    }
    let iota = fresh_individual(a, o);
    let mut o2 = o.clone();
    o2.add_axiom(Axiom::ConceptAssertion {
        concept: ConceptExpr::atomic(a),
        individual: iota.clone(),
    });
    let tax = classify(&o2);
    if tax.is_unsatisfiable(a) {
        return Err(LabelSetError::Unsatisfiable(a.to_string()));
    }
    let m = materialize(&o2, &tax);
    let mut ls = match node_label_set(&iota, &m, &tax) {
        Ok(ls) => ls,
        Err(LabelSetError::Inconsistent { .. }) => return Err(LabelSetError::Unsatisfiable(a.to_string())),
        Err(e) => return Err(e),
    };
    ls.labels.remove(&ConceptExpr::atomic(a));
    ls.owner = a.to_string();
    Ok(ls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::RoleExpr;
    use crate::parser::{parse_canonical, parse_ontology};

    const ACAD: &str = include_str!("../fixtures/acad.onto");
    const DISJUNCTIVE: &str = include_str!("../fixtures/acad_disjunctive.onto");

    fn setup(src: &str) -> (Ontology, TaxonomyClosure, MaterializedOntology) {
        let o = parse_ontology(src).unwrap();
        let tax = classify(&o);
        let m = materialize(&o, &tax);
        (o, tax, m)
    }

    fn labels(xs: &[&str]) -> BTreeSet<ConceptExpr> {
        xs.iter().map(|s| parse_canonical(s).unwrap()).collect()
    }

    #[test]
    fn seeds() {
        let (_, _, m) = setup(ACAD);
        let tom: Vec<String> = seed_concepts("tom", &m).into_iter().collect();
        assert_eq!(tom, ["IITStudent", "IIT_MS_Student", "Student"]);
        let bob: Vec<String> = seed_concepts("bob", &m).into_iter().collect();
        assert_eq!(bob, ["Professor", "TeachingStaff"]);
        let (_, _, m) = setup("A SUBCLASSOF B\nr(x, y)");
        assert!(seed_concepts("x", &m).is_empty());
    }

    #[test]
    fn tom_label_set() {
        let (_, tax, m) = setup(ACAD);
        let ls = node_label_set("tom", &m, &tax).unwrap();
        assert_eq!(
            ls.labels,
            labels(&[
                "Student",
                "IITStudent",
                "IIT_MS_Student",
                "(some enrolledIn IITProgramme)",
                "(atmost 1 hasAdvisor TeachingStaff)",
                "(all hasAdvisor TeachingStaff)",
                "(some hasAdvisor Professor)",
            ])
        );
        assert!(ls.deferred.is_empty());
    }

    #[test]
    fn alice_label_set() {
        let (_, tax, m) = setup(ACAD);
        let ls = node_label_set("alice", &m, &tax).unwrap();
        assert_eq!(ls.labels, labels(&["AssistantProf", "TeachingStaff"]));
    }

    #[test]
    fn unknown_individual() {
        let (_, tax, m) = setup(ACAD);
        assert_eq!(
            node_label_set("nobody", &m, &tax),
            Err(LabelSetError::UnknownIndividual("nobody".into()))
        );
    }

    #[test]
    fn d_clause_with_no_facts_is_deferred() {
        let (o, tax, m) = setup(DISJUNCTIVE);
        let d = parse_canonical("(or IITPhdStudent IIT_MS_Student)").unwrap();
        assert!(handle_d_clause("stud", &d, &m, &tax).is_empty());
        let ls = node_label_set("stud", &m, &tax).unwrap();
        assert_eq!(ls.deferred, vec![d.clone()]);
        let cls = concept_label_set("IITStudent", &o).unwrap();
        assert_eq!(cls.labels, labels(&["(some enrolledIn IITProgramme)"]));
        assert_eq!(cls.deferred, vec![d]);
    }

    #[test]
    fn d_clause_picks_the_holding_operand() {
        let (_, tax, m) = setup("A SUBCLASSOF SOME r.C OR ALL r.C\nA(x)\nr(x, y)\nC(y)");
        let d = parse_canonical("(or (all r C) (some r C))").unwrap();
        assert_eq!(handle_d_clause("x", &d, &m, &tax), labels(&["(some r C)"]));
        let ls = node_label_set("x", &m, &tax).unwrap();
        assert!(ls.contains(&ConceptExpr::exists(RoleExpr::named("r"), ConceptExpr::atomic("C"))));
        assert!(ls.deferred.is_empty());
    }

    #[test]
    fn d_clause_with_both_atoms_true() {
        let (_, tax, m) = setup("A(x)\nB(x)");
        let d = parse_canonical("(or A B)").unwrap();
        assert_eq!(handle_d_clause("x", &d, &m, &tax), labels(&["A", "B"]));
    }

    #[test]
    fn edges() {
        let (_, _, m) = setup(ACAD);
        assert_eq!(
            edge_label_set("tom", "bob", &m).roles,
            ["hasAdvisor".to_string()].into()
        );
        assert!(edge_label_set("bob", "tom", &m).roles.is_empty());
        assert_eq!(
            edge_label_set("sam", "alice", &m).roles,
            ["hasAdvisor".to_string()].into()
        );
    }

    #[test]
    fn concept_label_set_of_phd_student() {
        let (o, _, _) = setup(ACAD);
        let ls = concept_label_set("IITPhdStudent", &o).unwrap();
        assert_eq!(
            ls.labels,
            labels(&[
                "Student",
                "IITStudent",
                "(some enrolledIn IITProgramme)",
                "(atleast 2 hasAdvisor TeachingStaff)",
                "(atmost 1 hasAdvisor Professor)",
                "(all hasAdvisor TeachingStaff)",
                "(some hasAdvisor Professor)",
            ])
        );
        assert_eq!(ls.owner, "IITPhdStudent");
    }

    #[test]
    fn concept_without_axioms_is_empty() {
        let o = parse_ontology("A SUBCLASSOF TOP\nB(x)").unwrap();
        assert!(concept_label_set("A", &o).unwrap().is_empty());
        assert_eq!(
            concept_label_set("Z", &o),
            Err(LabelSetError::UnknownConcept("Z".into()))
        );
    }

    #[test]
    fn unsatisfiable_concept_is_rejected() {
        let o = parse_ontology("DISJOINT A B\nC SUBCLASSOF A AND B").unwrap();
        assert_eq!(
            concept_label_set("C", &o),
            Err(LabelSetError::Unsatisfiable("C".into()))
        );
    }

    #[test]
    fn fresh_name_avoids_collisions() {
        let o = parse_ontology("A(_:fresh_A)").unwrap();
        assert_eq!(fresh_individual("A", &o), "_:fresh_A_1");
    }

    #[test]
    fn inconsistent_individual() {
        let (_, tax, m) = setup("DISJOINT A B\nA(x)\nB(x)");
        assert!(matches!(
            node_label_set("x", &m, &tax),
            Err(LabelSetError::Inconsistent { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let (_, tax, m) = setup(ACAD);
        let v = node_label_set("bob", &m, &tax).unwrap().to_json();
        assert_eq!(
            v,
            json!({"owner": "bob", "labels": ["Professor", "TeachingStaff"], "deferred": []})
        );
    }
}

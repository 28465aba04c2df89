//! Told-subsumption classification, a sound structural subsumption test and
//! forward materialization of the ABox.
//!
//! Nothing here is a complete SHIQ procedure. Every answer is sound: a `true`
//! from [`is_subsumed`] or [`holds_restriction`], and every derived fact, is
//! entailed. The bounded oracle is used in tests to keep it that way.

use crate::expr::{expand_derived, to_cnf_top, Axiom, ConceptExpr, Ontology, RoleExpr};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

pub const TOP_KEY: &str = "TOP";
pub const BOT_KEY: &str = "BOT";

/// How far told axioms are unfolded inside one subsumption test.
const UNFOLD_DEPTH: usize = 3;

/// Reflexive-transitive subsumption over concept names and roles, plus the
/// told axioms the structural test unfolds.
#[derive(Debug, Clone, Default)]
pub struct TaxonomyClosure {
    /// name -> all named superconcepts (reflexive, always containing `TOP`;
    /// contains `BOT` when the name is unsatisfiable).
    pub concept_subs: BTreeMap<String, BTreeSet<String>>,
    /// role -> all super-roles (reflexive, closed under inversion).
    pub role_subs: BTreeMap<RoleExpr, BTreeSet<RoleExpr>>,
    disjoint: BTreeSet<(String, String)>,
    told_sups: BTreeMap<String, Vec<ConceptExpr>>,
    definitions: BTreeMap<String, Vec<ConceptExpr>>,
}

impl TaxonomyClosure {
    /// `a ⊑ b` for concept names (`TOP`/`BOT` allowed).
    pub fn concept_sub(&self, a: &str, b: &str) -> bool {
        if a == b || b == TOP_KEY || a == BOT_KEY {
            return true;
        }
        match self.concept_subs.get(a) {
            Some(sups) => sups.contains(b) || sups.contains(BOT_KEY),
            None => false,
        }
    }

    pub fn is_unsatisfiable(&self, a: &str) -> bool {
        a == BOT_KEY || self.concept_subs.get(a).is_some_and(|s| s.contains(BOT_KEY))
    }

    pub fn role_sub(&self, r: &RoleExpr, s: &RoleExpr) -> bool {
        r == s || self.role_subs.get(r).is_some_and(|sups| sups.contains(s))
    }

    fn supers(&self, a: &str) -> Vec<String> {
        match self.concept_subs.get(a) {
            Some(s) => s.iter().cloned().collect(),
            None => vec![a.to_string(), TOP_KEY.to_string()],
        }
    }

    /// Disjointness of two names, inherited through their superconcepts.
    pub fn disjoint(&self, a: &str, b: &str) -> bool {
        if self.is_unsatisfiable(a) || self.is_unsatisfiable(b) {
            return true;
        }
        let sa = self.supers(a);
        let sb = self.supers(b);
        sa.iter().any(|x| {
            sb.iter().any(|y| {
                self.disjoint.contains(&(x.clone(), y.clone())) || self.disjoint.contains(&(y.clone(), x.clone()))
            })
        })
    }

    /// Pairs of declared disjoint names.
    pub fn declared_disjoint(&self) -> impl Iterator<Item = &(String, String)> {
        self.disjoint.iter()
    }

    pub fn told_superexpressions(&self, a: &str) -> &[ConceptExpr] {
        self.told_sups.get(a).map(Vec::as_slice).unwrap_or(&[])
    }

    fn insert_sub(&mut self, a: &str, b: &str) -> bool {
        self.concept_subs
            .entry(a.to_string())
            .or_default()
            .insert(b.to_string())
    }

    fn close_concepts(&mut self) {
        loop {
            let mut changed = false;
            let names: Vec<String> = self.concept_subs.keys().cloned().collect();
            for a in &names {
                let direct: Vec<String> = self.concept_subs[a].iter().cloned().collect();
                for b in direct {
                    let indirect: Vec<String> = self
                        .concept_subs
                        .get(&b)
                        .map(|s| s.iter().cloned().collect())
                        .unwrap_or_default();
                    for c in indirect {
                        changed |= self.insert_sub(a, &c);
                    }
                }
            }
            for a in &names {
                if self.is_unsatisfiable(a) {
                    continue;
                }
                let sups: Vec<String> = self.concept_subs[a].iter().cloned().collect();
                let clash = sups
                    .iter()
                    .any(|x| sups.iter().any(|y| self.disjoint.contains(&(x.clone(), y.clone()))));
                if clash {
                    changed |= self.insert_sub(a, BOT_KEY);
                }
            }
            if !changed {
                break;
            }
        }
    }
}

/// Computes the concept and role hierarchy.
pub fn classify(o: &Ontology) -> TaxonomyClosure {
    let mut tax = TaxonomyClosure::default();
    for name in &o.concept_names {
        tax.insert_sub(name, name);
        tax.insert_sub(name, TOP_KEY);
    }
    for (a, b) in o.disjoint_pairs() {
        tax.disjoint.insert((a, b));
    }
    for ax in &o.tbox {
        match ax {
            Axiom::SubClass {
                sub: ConceptExpr::Atomic(a),
                sup,
            } => {
                tax.told_sups.entry(a.clone()).or_default().push(sup.clone());
                for c in to_cnf_top(&expand_derived(sup)) {
                    match c {
                        ConceptExpr::Atomic(b) => {
                            tax.insert_sub(a, &b);
                        }
                        ConceptExpr::Bottom => {
                            tax.insert_sub(a, BOT_KEY);
                        }
                        _ => {}
                    }
                }
            }
            Axiom::EquivClass {
                lhs: ConceptExpr::Atomic(a),
                rhs,
            } => {
                tax.told_sups.entry(a.clone()).or_default().push(rhs.clone());
                tax.definitions.entry(a.clone()).or_default().push(rhs.clone());
                for c in to_cnf_top(&expand_derived(rhs)) {
                    match c {
                        ConceptExpr::Atomic(b) => {
                            tax.insert_sub(a, &b);
                        }
                        ConceptExpr::Bottom => {
                            tax.insert_sub(a, BOT_KEY);
                        }
                        _ => {}
                    }
                }
                if let ConceptExpr::Atomic(b) = rhs {
                    tax.insert_sub(b, a);
                }
            }
            _ => {}
        }
    }
    tax.close_concepts();

    // definitional and general inclusions: B ⊑ rhs(A) gives B ⊑ A
    loop {
        let mut changed = false;
        for ax in &o.tbox {
            let (lhs, targets): (&ConceptExpr, Vec<String>) = match ax {
                Axiom::EquivClass {
                    lhs: ConceptExpr::Atomic(a),
                    rhs,
                } => (rhs, vec![a.clone()]),
                Axiom::SubClass { sub, sup } if sub.as_atomic().is_none() => {
                    let atoms = to_cnf_top(&expand_derived(sup))
                        .into_iter()
                        .filter_map(|c| c.as_atomic().map(str::to_string))
                        .collect();
                    (sub, atoms)
                }
                _ => continue,
            };
            for b in &o.concept_names {
                if targets.iter().all(|t| tax.concept_sub(b, t)) {
                    continue;
                }
                if is_subsumed(&ConceptExpr::atomic(b.clone()), lhs, &tax) {
                    for t in &targets {
                        changed |= tax.insert_sub(b, t);
                    }
                }
            }
        }
        if !changed {
            break;
        }
        tax.close_concepts();
    }

    // roles
    let mut edges: Vec<(RoleExpr, RoleExpr)> = Vec::new();
    for ax in &o.tbox {
        match ax {
            Axiom::SubRole { sub, sup } => edges.push((sub.clone(), sup.clone())),
            Axiom::Inverse { role, inverse } => {
                let r = RoleExpr::named(role.clone());
                let s = RoleExpr::named(inverse.clone());
                edges.push((s.clone(), r.inverse()));
                edges.push((r.inverse(), s.clone()));
            }
            _ => {}
        }
    }
    let mut with_inv = Vec::new();
    for (a, b) in edges {
        with_inv.push((a.inverse(), b.inverse()));
        with_inv.push((a, b));
    }
    let mut roles: BTreeSet<RoleExpr> = BTreeSet::new();
    for name in &o.role_names {
        roles.insert(RoleExpr::named(name.clone()));
        roles.insert(RoleExpr::named(name.clone()).inverse());
    }
    for (a, b) in &with_inv {
        roles.insert(a.clone());
        roles.insert(b.clone());
    }
    for r in &roles {
        tax.role_subs.entry(r.clone()).or_default().insert(r.clone());
    }
    loop {
        let mut changed = false;
        for (a, b) in &with_inv {
            let above: Vec<RoleExpr> = tax.role_subs[b].iter().cloned().collect();
            for r in &roles {
                if tax.role_subs[r].contains(a) {
                    for s in &above {
                        changed |= tax.role_subs.get_mut(r).unwrap().insert(s.clone());
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    tax
}

/// Sound structural subsumption `c ⊑ d` relative to the classified ontology.
pub fn is_subsumed(c: &ConceptExpr, d: &ConceptExpr, tax: &TaxonomyClosure) -> bool {
    let c = expand_derived(c);
    let d = expand_derived(d);
    subsumed(&c, &d, tax, UNFOLD_DEPTH)
}

fn subsumed(c: &ConceptExpr, d: &ConceptExpr, tax: &TaxonomyClosure, depth: usize) -> bool {
    use ConceptExpr::*;
    if matches!(d, Top) || matches!(c, Bottom) || c == d {
        return true;
    }
    if let And(ds) = d {
        return ds.iter().all(|x| subsumed(c, x, tax, depth));
    }
    if let Or(cs) = c {
        return cs.iter().all(|x| subsumed(x, d, tax, depth));
    }
    let direct = match (c, d) {
        (Atomic(a), _) if tax.is_unsatisfiable(a) => true,
        (Atomic(a), Atomic(b)) => tax.concept_sub(a, b),
        (Atomic(a), Not(inner)) => matches!(inner.as_ref(), Atomic(b) if tax.disjoint(a, b)),
        (Not(x), Not(y)) => subsumed(y, x, tax, depth),
        (Exists(r, x), Exists(s, y)) | (Exists(r, x), AtLeast(1, s, y)) => {
            tax.role_sub(r, s) && subsumed(x, y, tax, depth)
        }
        (AtLeast(n, r, x), Exists(s, y)) => *n >= 1 && tax.role_sub(r, s) && subsumed(x, y, tax, depth),
        (AtLeast(n, r, x), AtLeast(m, s, y)) => n >= m && tax.role_sub(r, s) && subsumed(x, y, tax, depth),
        (ForAll(r, x), ForAll(s, y)) => tax.role_sub(s, r) && subsumed(x, y, tax, depth),
        (AtMost(n, r, x), AtMost(m, s, y)) => n <= m && tax.role_sub(s, r) && subsumed(y, x, tax, depth),
        _ => false,
    };
    if direct {
        return true;
    }
    if let Or(ds) = d {
        if ds.iter().any(|x| subsumed(c, x, tax, depth)) {
            return true;
        }
    }
    if let And(cs) = c {
        if cs.iter().any(|x| subsumed(x, d, tax, depth)) {
            return true;
        }
    }
    if depth == 0 {
        return false;
    }
    if let Atomic(a) = c {
        if tax
            .told_superexpressions(a)
            .iter()
            .any(|e| subsumed(&expand_derived(e), d, tax, depth - 1))
        {
            return true;
        }
    }
    if let Atomic(b) = d {
        if let Some(defs) = tax.definitions.get(b) {
            if defs.iter().any(|e| subsumed(c, &expand_derived(e), tax, depth - 1)) {
                return true;
            }
        }
    }
    false
}

/// One derived fact and why it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub fact: String,
    pub rule: String,
    pub premises: Vec<String>,
}

/// Two disjoint classes derived for the same individual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inconsistency {
    pub individual: String,
    pub first: String,
    pub second: String,
    pub axiom: String,
}

/// ABox closed under the materialization rules.
#[derive(Debug, Clone)]
pub struct MaterializedOntology {
    pub base: Ontology,
    /// (individual, concept name)
    pub concept_facts: BTreeSet<(String, String)>,
    /// (role name, subject, object)
    pub role_facts: BTreeSet<(String, String, String)>,
    /// Symmetric closure of the asserted inequalities.
    pub inequalities: BTreeSet<(String, String)>,
    /// Non-atomic asserted concepts per individual.
    pub told_assertions: BTreeMap<String, Vec<ConceptExpr>>,
    pub provenance: Vec<Provenance>,
    pub inconsistencies: Vec<Inconsistency>,
}

fn concept_fact(c: &str, a: &str) -> String {
    format!("{}({})", c, a)
}

fn role_fact(r: &str, a: &str, b: &str) -> String {
    format!("{}({}, {})", r, a, b)
}

impl MaterializedOntology {
    pub fn has_concept(&self, ind: &str, concept: &str) -> bool {
        concept == TOP_KEY || self.concept_facts.contains(&(ind.to_string(), concept.to_string()))
    }

    pub fn concepts_of(&self, ind: &str) -> Vec<String> {
        self.concept_facts
            .iter()
            .filter(|(i, _)| i == ind)
            .map(|(_, c)| c.clone())
            .collect()
    }

    pub fn distinct(&self, a: &str, b: &str) -> bool {
        self.inequalities.contains(&(a.to_string(), b.to_string()))
    }

    /// Individuals `b` with `R(ind, b)` under the role hierarchy.
    pub fn successors(&self, ind: &str, role: &RoleExpr, tax: &TaxonomyClosure) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (p, s, o) in &self.role_facts {
            let pr = RoleExpr::named(p.clone());
            if s == ind && tax.role_sub(&pr, role) {
                out.insert(o.clone());
            }
            if o == ind && tax.role_sub(&pr.inverse(), role) {
                out.insert(s.clone());
            }
        }
        out
    }

    /// Told expressions that hold for `ind`: the (expanded, top-level CNF)
    /// right-hand sides of every class it belongs to, plus complex assertions.
    pub fn told_conjuncts(&self, ind: &str, tax: &TaxonomyClosure) -> Vec<ConceptExpr> {
        let mut out: Vec<ConceptExpr> = Vec::new();
        let mut push = |e: &ConceptExpr| {
            for c in to_cnf_top(&expand_derived(e)) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        };
        for a in self.concepts_of(ind) {
            for e in tax.told_superexpressions(&a) {
                push(e);
            }
        }
        if let Some(es) = self.told_assertions.get(ind) {
            for e in es {
                push(e);
            }
        }
        out
    }

    /// The base ontology with every derived fact added as an assertion.
    pub fn to_ontology(&self) -> Ontology {
        let mut o = self.base.clone();
        for (i, c) in &self.concept_facts {
            let ax = Axiom::ConceptAssertion {
                concept: ConceptExpr::atomic(c.clone()),
                individual: i.clone(),
            };
            if !o.abox.contains(&ax) {
                o.add_axiom(ax);
            }
        }
        for (r, s, t) in &self.role_facts {
            let ax = Axiom::RoleAssertion {
                role: r.clone(),
                subject: s.clone(),
                object: t.clone(),
            };
            if !o.abox.contains(&ax) {
                o.add_axiom(ax);
            }
        }
        o
    }

    pub fn provenance_json_lines(&self) -> String {
        self.provenance
            .iter()
            .map(|p| serde_json::to_string(p).expect("provenance serializes"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    fn add_concept(&mut self, ind: &str, concept: &str, rule: &str, premises: Vec<String>) -> bool {
        if concept == TOP_KEY {
            return false;
        }
        if self.concept_facts.insert((ind.to_string(), concept.to_string())) {
            self.provenance.push(Provenance {
                fact: concept_fact(concept, ind),
                rule: rule.to_string(),
                premises,
            });
            true
        } else {
            false
        }
    }

    fn add_role(&mut self, role: &str, a: &str, b: &str, rule: &str, premises: Vec<String>) -> bool {
        if self.role_facts.insert((role.to_string(), a.to_string(), b.to_string())) {
            self.provenance.push(Provenance {
                fact: role_fact(role, a, b),
                rule: rule.to_string(),
                premises,
            });
            true
        } else {
            false
        }
    }
}

/// True if `ind` is known to be an instance of `c`.
pub fn concept_holds(ind: &str, c: &ConceptExpr, m: &MaterializedOntology, tax: &TaxonomyClosure) -> bool {
    holds_at(ind, &expand_derived(c), m, tax, UNFOLD_DEPTH)
}

fn holds_at(ind: &str, c: &ConceptExpr, m: &MaterializedOntology, tax: &TaxonomyClosure, depth: usize) -> bool {
    use ConceptExpr::*;
    let direct = match c {
        Top => true,
        Bottom => false,
        Atomic(a) => m.has_concept(ind, a),
        And(ops) => ops.iter().all(|x| holds_at(ind, x, m, tax, depth)),
        Or(ops) => ops.iter().any(|x| holds_at(ind, x, m, tax, depth)),
        Not(inner) => match inner.as_ref() {
            Atomic(b) => m.concepts_of(ind).iter().any(|a| tax.disjoint(a, b)),
            _ => false,
        },
        _ => depth > 0 && restriction_at(ind, c, m, tax, depth - 1),
    };
    direct
        || m.concepts_of(ind)
            .iter()
            .any(|a| subsumed(&ConceptExpr::atomic(a.clone()), c, tax, UNFOLD_DEPTH))
}

/// Sound instance check of a restriction for an individual.
pub fn holds_restriction(ind: &str, r: &ConceptExpr, m: &MaterializedOntology, tax: &TaxonomyClosure) -> bool {
    let r = expand_derived(r);
    match &r {
        ConceptExpr::And(ops) => ops.iter().all(|x| restriction_at(ind, x, m, tax, UNFOLD_DEPTH)),
        _ => restriction_at(ind, &r, m, tax, UNFOLD_DEPTH),
    }
}

fn restriction_at(ind: &str, r: &ConceptExpr, m: &MaterializedOntology, tax: &TaxonomyClosure, depth: usize) -> bool {
    if m.told_conjuncts(ind, tax)
        .iter()
        .any(|t| subsumed(t, r, tax, UNFOLD_DEPTH))
    {
        return true;
    }
    match r {
        ConceptExpr::Exists(role, filler) => m
            .successors(ind, role, tax)
            .iter()
            .any(|b| holds_at(b, filler, m, tax, depth)),
        ConceptExpr::AtLeast(n, role, filler) => {
            let cands: Vec<String> = m
                .successors(ind, role, tax)
                .into_iter()
                .filter(|b| holds_at(b, filler, m, tax, depth))
                .collect();
            has_distinct_clique(&cands, *n as usize, m)
        }
        // ∀ and ≤ come from told axioms only
        _ => false,
    }
}

/// Whether `n` of the candidates are pairwise asserted distinct.
fn has_distinct_clique(cands: &[String], n: usize, m: &MaterializedOntology) -> bool {
    fn grow(chosen: &mut Vec<usize>, start: usize, n: usize, cands: &[String], m: &MaterializedOntology) -> bool {
        if chosen.len() == n {
            return true;
        }
        for i in start..cands.len() {
            if chosen.iter().all(|&j| m.distinct(&cands[i], &cands[j])) {
                chosen.push(i);
                if grow(chosen, i + 1, n, cands, m) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if n == 0 {
        return true;
    }
    grow(&mut Vec::new(), 0, n, cands, m)
}

/// Forward-chains the ABox to a fixpoint.
pub fn materialize(o: &Ontology, tax: &TaxonomyClosure) -> MaterializedOntology {
    let mut m = MaterializedOntology {
        base: o.clone(),
        concept_facts: BTreeSet::new(),
        role_facts: BTreeSet::new(),
        inequalities: BTreeSet::new(),
        told_assertions: BTreeMap::new(),
        provenance: Vec::new(),
        inconsistencies: Vec::new(),
    };
    let mut transitive: BTreeSet<String> = BTreeSet::new();
    let mut inverse_pairs: Vec<(String, String)> = Vec::new();
    for ax in &o.tbox {
        match ax {
            Axiom::Transitive(r) => {
                transitive.insert(r.clone());
            }
            Axiom::Inverse { role, inverse } => {
                inverse_pairs.push((role.clone(), inverse.clone()));
                inverse_pairs.push((inverse.clone(), role.clone()));
            }
            _ => {}
        }
    }
    let inv_transitive: Vec<String> = inverse_pairs
        .iter()
        .filter(|(r, _)| transitive.contains(r))
        .map(|(_, s)| s.clone())
        .collect();
    transitive.extend(inv_transitive);

    for ax in &o.abox {
        match ax {
            Axiom::ConceptAssertion { concept, individual } => {
                if let ConceptExpr::Atomic(c) = concept {
                    m.concept_facts.insert((individual.clone(), c.clone()));
                } else {
                    m.told_assertions
                        .entry(individual.clone())
                        .or_default()
                        .push(concept.clone());
                    for c in to_cnf_top(&expand_derived(concept)) {
                        if let ConceptExpr::Atomic(a) = c {
                            m.add_concept(
                                individual,
                                &a,
                                "assertion-conjunct",
                                vec![concept_fact(&concept.canonical(), individual)],
                            );
                        }
                    }
                }
            }
            Axiom::RoleAssertion { role, subject, object } => {
                m.role_facts.insert((role.clone(), subject.clone(), object.clone()));
            }
            Axiom::Inequality(a, b) => {
                m.inequalities.insert((a.clone(), b.clone()));
                m.inequalities.insert((b.clone(), a.clone()));
            }
            _ => {}
        }
    }

    loop {
        let mut changed = false;

        // (i) named subsumption
        let facts: Vec<(String, String)> = m.concept_facts.iter().cloned().collect();
        for (ind, a) in &facts {
            for b in tax.supers(a) {
                if b != *a && b != BOT_KEY {
                    changed |= m.add_concept(
                        ind,
                        &b,
                        "subclass",
                        vec![concept_fact(a, ind), format!("{} SUBCLASSOF {}", a, b)],
                    );
                }
            }
        }

        // (ii) converse of definitions and general inclusions
        for ax in &o.tbox {
            let (lhs, targets): (&ConceptExpr, Vec<String>) = match ax {
                Axiom::EquivClass {
                    lhs: ConceptExpr::Atomic(a),
                    rhs,
                } => (rhs, vec![a.clone()]),
                Axiom::SubClass { sub, sup } if sub.as_atomic().is_none() => (
                    sub,
                    to_cnf_top(&expand_derived(sup))
                        .into_iter()
                        .filter_map(|c| c.as_atomic().map(str::to_string))
                        .collect(),
                ),
                _ => continue,
            };
            let inds: Vec<String> = o.individual_names.iter().cloned().collect();
            for ind in &inds {
                if targets.iter().all(|t| m.has_concept(ind, t)) {
                    continue;
                }
                let conjuncts = to_cnf_top(&expand_derived(lhs));
                if conjuncts.iter().all(|c| holds_at(ind, c, &m, tax, UNFOLD_DEPTH)) {
                    for t in &targets {
                        changed |= m.add_concept(ind, t, "definition", vec![format!("{}({})", lhs.canonical(), ind)]);
                    }
                }
            }
        }

        // (iii) role hierarchy, (iv) transitivity, (v) inverses
        let edges: Vec<(String, String, String)> = m.role_facts.iter().cloned().collect();
        for (r, a, b) in &edges {
            let rr = RoleExpr::named(r.clone());
            if let Some(sups) = tax.role_subs.get(&rr) {
                for s in sups.clone() {
                    if s == rr {
                        continue;
                    }
                    let premises = vec![role_fact(r, a, b), format!("SUBROLE {} {}", rr, s)];
                    changed |= if s.inverted {
                        m.add_role(&s.name, b, a, "subrole", premises)
                    } else {
                        m.add_role(&s.name, a, b, "subrole", premises)
                    };
                }
            }
            for (p, q) in &inverse_pairs {
                if p == r {
                    changed |= m.add_role(
                        q,
                        b,
                        a,
                        "inverse",
                        vec![role_fact(r, a, b), format!("INVERSE {} {}", p, q)],
                    );
                }
            }
        }
        for r in &transitive {
            let pairs: Vec<(String, String)> = m
                .role_facts
                .iter()
                .filter(|(x, _, _)| x == r)
                .map(|(_, a, b)| (a.clone(), b.clone()))
                .collect();
            for (a, b) in &pairs {
                for (b2, c) in &pairs {
                    if b == b2 {
                        changed |= m.add_role(r, a, c, "transitive", vec![role_fact(r, a, b), role_fact(r, b, c)]);
                    }
                }
            }
        }

        // (vi) universal propagation, (vii) at-most-one identification
        let inds: Vec<String> = o.individual_names.iter().cloned().collect();
        for ind in &inds {
            let told = m.told_conjuncts(ind, tax);
            for t in &told {
                if let ConceptExpr::ForAll(role, filler) = t {
                    for b in m.successors(ind, role, tax) {
                        for c in to_cnf_top(filler) {
                            if let ConceptExpr::Atomic(name) = c {
                                changed |= m.add_concept(
                                    &b,
                                    &name,
                                    "forall",
                                    vec![
                                        format!("{}({})", t.canonical(), ind),
                                        format!("{}({}, {})", role, ind, b),
                                    ],
                                );
                            }
                        }
                    }
                }
            }
            for t in &told {
                let ConceptExpr::AtMost(1, role, bound) = t else {
                    continue;
                };
                let known: Vec<String> = m
                    .successors(ind, role, tax)
                    .into_iter()
                    .filter(|b| holds_at(b, bound, &m, tax, UNFOLD_DEPTH))
                    .collect();
                let [b] = known.as_slice() else { continue };
                for e in &told {
                    let (s, d) = match e {
                        ConceptExpr::Exists(s, d) => (s, d),
                        ConceptExpr::AtLeast(n, s, d) if *n >= 1 => (s, d),
                        _ => continue,
                    };
                    if !tax.role_sub(s, role) || !subsumed(d, bound, tax, UNFOLD_DEPTH) {
                        continue;
                    }
                    let premises = vec![
                        format!("{}({})", t.canonical(), ind),
                        format!("{}({})", e.canonical(), ind),
                        format!("{}({})", bound.canonical(), b),
                    ];
                    for c in to_cnf_top(d) {
                        if let ConceptExpr::Atomic(name) = c {
                            changed |= m.add_concept(b, &name, "at-most-one", premises.clone());
                        }
                    }
                    if s.inverted {
                        changed |= m.add_role(&s.name, b, ind, "at-most-one", premises.clone());
                    } else {
                        changed |= m.add_role(&s.name, ind, b, "at-most-one", premises.clone());
                    }
                }
            }
        }

        if !changed {
            break;
        }
    }

    for ind in &o.individual_names {
        let concepts = m.concepts_of(ind);
        let mut found = None;
        'outer: for (x, y) in tax.declared_disjoint() {
            if concepts.contains(x) && concepts.contains(y) {
                found = Some(Inconsistency {
                    individual: ind.clone(),
                    first: x.clone(),
                    second: y.clone(),
                    axiom: format!("DISJOINT {} {}", x, y),
                });
                break 'outer;
            }
        }
        if found.is_none() {
            if let Some(a) = concepts.iter().find(|a| tax.is_unsatisfiable(a)) {
                found = Some(Inconsistency {
                    individual: ind.clone(),
                    first: a.clone(),
                    second: BOT_KEY.into(),
                    axiom: format!("{} SUBCLASSOF BOT", a),
                });
            }
        }
        if found.is_none() && m.distinct(ind, ind) {
            found = Some(Inconsistency {
                individual: ind.clone(),
                first: ind.clone(),
                second: ind.clone(),
                axiom: format!("{} != {}", ind, ind),
            });
        }
        m.inconsistencies.extend(found);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ontology;

    const ACAD: &str = include_str!("../fixtures/acad.onto");

    fn acad() -> (Ontology, TaxonomyClosure, MaterializedOntology) {
        let o = parse_ontology(ACAD).unwrap();
        let tax = classify(&o);
        let m = materialize(&o, &tax);
        (o, tax, m)
    }

    fn a(n: &str) -> ConceptExpr {
        ConceptExpr::atomic(n)
    }

    fn r(n: &str) -> RoleExpr {
        RoleExpr::named(n)
    }

    #[test]
    fn acad_classification() {
        let (_, tax, _) = acad();
        assert!(tax.concept_sub("Professor", "TeachingStaff"));
        assert!(tax.concept_sub("IIT_MS_Student", "IITStudent"));
        assert!(tax.concept_sub("IITStudent", "Student"));
        assert!(tax.concept_sub("IIT_MS_Student", "Student"));
        assert!(!tax.concept_sub("TeachingStaff", "Professor"));
    }

    #[test]
    fn empty_classification() {
        let tax = classify(&Ontology::default());
        assert!(tax.concept_subs.is_empty());
        assert!(tax.concept_sub("A", "A"));
        assert!(tax.concept_sub("A", TOP_KEY));
        assert!(tax.concept_sub(BOT_KEY, "A"));
    }

    #[test]
    fn chain_is_transitive() {
        let o = parse_ontology("A SUBCLASSOF B\nB SUBCLASSOF C").unwrap();
        assert!(classify(&o).concept_sub("A", "C"));
    }

    #[test]
    fn subsumption_examples() {
        let (_, tax, _) = acad();
        assert!(is_subsumed(&a("Professor"), &a("TeachingStaff"), &tax));
        assert!(is_subsumed(
            &ConceptExpr::exists(r("hasAdvisor"), a("Professor")),
            &ConceptExpr::exists(r("hasAdvisor"), a("TeachingStaff")),
            &tax
        ));
        assert!(!is_subsumed(&a("TeachingStaff"), &a("Professor"), &tax));
        assert!(is_subsumed(
            &a("Professor"),
            &ConceptExpr::not(a("AssistantProf")),
            &tax
        ));
        assert!(is_subsumed(
            &a("IIT_MS_Student"),
            &ConceptExpr::exists(r("hasAdvisor"), a("Professor")),
            &tax
        ));
    }

    #[test]
    fn derived_constructors_are_expanded() {
        let (_, tax, _) = acad();
        let nv = ConceptExpr::non_vacuous(r("hasAdvisor"), a("Professor"));
        assert!(is_subsumed(
            &nv,
            &ConceptExpr::for_all(r("hasAdvisor"), a("TeachingStaff")),
            &tax
        ));
        assert!(is_subsumed(
            &nv,
            &ConceptExpr::exists(r("hasAdvisor"), a("TeachingStaff")),
            &tax
        ));
        let ex = ConceptExpr::exactly(2, r("hasAdvisor"), a("Professor"));
        assert!(is_subsumed(
            &ex,
            &ConceptExpr::at_least(1, r("hasAdvisor"), a("TeachingStaff")),
            &tax
        ));
        assert!(!is_subsumed(
            &ex,
            &ConceptExpr::at_most(1, r("hasAdvisor"), a("Professor")),
            &tax
        ));
    }

    #[test]
    fn role_hierarchy_with_inverse() {
        let o = parse_ontology("SUBROLE r s\nINVERSE s t").unwrap();
        let tax = classify(&o);
        assert!(tax.role_sub(&r("r"), &r("s")));
        assert!(tax.role_sub(&r("r").inverse(), &r("s").inverse()));
        assert!(tax.role_sub(&r("r"), &r("t").inverse()));
        assert!(tax.role_sub(&r("t"), &r("s").inverse()));
        assert!(!tax.role_sub(&r("s"), &r("r")));
    }

    #[test]
    fn acad_materialization() {
        let (_, _, m) = acad();
        for c in ["IITStudent", "Student", "IIT_MS_Student"] {
            assert!(m.has_concept("tom", c), "{} missing for tom", c);
        }
        assert!(m.has_concept("sam", "Student"));
        assert!(m.has_concept("bob", "Professor"));
        assert!(m.has_concept("bob", "TeachingStaff"));
        assert!(m.has_concept("roy", "TeachingStaff"));
        assert!(!m.has_concept("roy", "Professor"));
        assert!(m.inconsistencies.is_empty());
    }

    #[test]
    fn empty_abox_has_no_facts() {
        let o = parse_ontology("A SUBCLASSOF B").unwrap();
        let m = materialize(&o, &classify(&o));
        assert!(m.concept_facts.is_empty() && m.role_facts.is_empty());
    }

    #[test]
    fn restriction_instance_checks() {
        let (_, tax, m) = acad();
        let ha = r("hasAdvisor");
        assert!(holds_restriction(
            "tom",
            &ConceptExpr::exists(ha.clone(), a("Professor")),
            &m,
            &tax
        ));
        assert!(!holds_restriction(
            "bob",
            &ConceptExpr::exists(ha.clone(), a("Professor")),
            &m,
            &tax
        ));
        assert!(holds_restriction(
            "sam",
            &ConceptExpr::at_least(2, ha.clone(), a("TeachingStaff")),
            &m,
            &tax
        ));
        // two known advisors, but no asserted inequality and no told axiom
        let o = parse_ontology("hasAdvisor(x, p)\nhasAdvisor(x, q)\nT(p)\nT(q)").unwrap();
        let tax2 = classify(&o);
        let m2 = materialize(&o, &tax2);
        assert!(!holds_restriction(
            "x",
            &ConceptExpr::at_least(2, ha.clone(), a("T")),
            &m2,
            &tax2
        ));
        let o = parse_ontology("hasAdvisor(x, p)\nhasAdvisor(x, q)\nT(p)\nT(q)\np != q").unwrap();
        let tax3 = classify(&o);
        let m3 = materialize(&o, &tax3);
        assert!(holds_restriction(
            "x",
            &ConceptExpr::at_least(2, ha.clone(), a("T")),
            &m3,
            &tax3
        ));
        assert!(!holds_restriction("x", &ConceptExpr::for_all(ha, a("T")), &m3, &tax3));
    }

    #[test]
    fn disjointness_flags_inconsistency() {
        let o = parse_ontology("DISJOINT A B\nC SUBCLASSOF B\nA(x)\nC(x)").unwrap();
        let m = materialize(&o, &classify(&o));
        assert_eq!(m.inconsistencies.len(), 1);
        assert_eq!(m.inconsistencies[0].individual, "x");
    }

    #[test]
    fn transitive_and_inverse_edges() {
        let o = parse_ontology("TRANSITIVE p\nINVERSE p q\np(a, b)\np(b, c)").unwrap();
        let m = materialize(&o, &classify(&o));
        assert!(m.role_facts.contains(&("p".into(), "a".into(), "c".into())));
        assert!(m.role_facts.contains(&("q".into(), "c".into(), "a".into())));
    }

    #[test]
    fn materialization_is_a_fixpoint() {
        let (_, tax, m) = acad();
        let again = materialize(&m.to_ontology(), &tax);
        assert_eq!(m.concept_facts, again.concept_facts);
        assert_eq!(m.role_facts, again.role_facts);
    }

    #[test]
    fn provenance_lines_are_json() {
        let (_, _, m) = acad();
        let lines = m.provenance_json_lines();
        for l in lines.lines() {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            assert!(v.get("fact").is_some() && v.get("rule").is_some() && v.get("premises").is_some());
        }
        assert!(lines.contains("\"Professor(bob)\""));
    }
}

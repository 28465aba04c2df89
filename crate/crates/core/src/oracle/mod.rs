//! Finite-model semantics: evaluation of concepts and axioms over explicit
//! interpretations, exhaustive and sampled enumeration, bounded model search
//! and mechanical verification of the refinement rules.
//!
//! Domains are capped at 64 elements so that every extension is a `u64`
//! bitmask; role extensions are stored as one successor mask per element.

pub mod enumerate;
pub mod search;
pub mod verify;

use crate::expr::{expand_derived, Axiom, ConceptExpr, RoleExpr};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub use enumerate::{enumerate_interpretations, interpretation_count, Enumerator, RandomSampler};
pub use search::{bounded_entailment, bounded_equivalence, bounded_subsumption, SearchConfig, Verdict};
pub use verify::{verify_all_rules, verify_rule, RuleVerdict, VerifyConfig};

pub const MAX_DOMAIN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive enumeration of {needed} interpretations exceeds the budget of {budget}")]
    EnumerationBudget { needed: u128, budget: u128 },
    #[error("model search gave up after {0} nodes")]
    SearchBudget(u64),
    #[error("domain size {0} is outside 1..=64")]
    DomainSize(usize),
}

/// Index of every name an interpretation talks about.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: Vec<String>,
    pub roles: Vec<String>,
    pub individuals: Vec<String>,
}

impl Signature {
    pub fn new(
        concepts: impl IntoIterator<Item = impl Into<String>>,
        roles: impl IntoIterator<Item = impl Into<String>>,
        individuals: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        fn dedup(v: Vec<String>) -> Vec<String> {
            let mut seen = BTreeSet::new();
            v.into_iter().filter(|x| seen.insert(x.clone())).collect()
        }
        Signature {
            concepts: dedup(concepts.into_iter().map(Into::into).collect()),
            roles: dedup(roles.into_iter().map(Into::into).collect()),
            individuals: dedup(individuals.into_iter().map(Into::into).collect()),
        }
    }

    pub fn concept(&self, name: &str) -> Option<usize> {
        self.concepts.iter().position(|c| c == name)
    }

    pub fn role(&self, name: &str) -> Option<usize> {
        self.roles.iter().position(|r| r == name)
    }

    pub fn individual(&self, name: &str) -> Option<usize> {
        self.individuals.iter().position(|i| i == name)
    }

    /// Every name occurring in the axioms and expressions.
    pub fn collect<'a>(
        axioms: impl IntoIterator<Item = &'a Axiom>,
        exprs: impl IntoIterator<Item = &'a ConceptExpr>,
    ) -> Self {
        let mut c = BTreeSet::new();
        let mut r = BTreeSet::new();
        let mut i = BTreeSet::new();
        for ax in axioms {
            match ax {
                Axiom::SubClass { sub: a, sup: b } | Axiom::EquivClass { lhs: a, rhs: b } => {
                    a.concept_names(&mut c);
                    b.concept_names(&mut c);
                    a.role_names(&mut r);
                    b.role_names(&mut r);
                }
                Axiom::SubRole { sub, sup } => {
                    r.insert(sub.name.clone());
                    r.insert(sup.name.clone());
                }
                Axiom::Transitive(x) => {
                    r.insert(x.clone());
                }
                Axiom::Inverse { role, inverse } => {
                    r.insert(role.clone());
                    r.insert(inverse.clone());
                }
                Axiom::ConceptAssertion { concept, individual } => {
                    concept.concept_names(&mut c);
                    concept.role_names(&mut r);
                    i.insert(individual.clone());
                }
                Axiom::RoleAssertion { role, subject, object } => {
                    r.insert(role.clone());
                    i.insert(subject.clone());
                    i.insert(object.clone());
                }
                Axiom::Inequality(a, b) => {
                    i.insert(a.clone());
                    i.insert(b.clone());
                }
            }
        }
        for e in exprs {
            e.concept_names(&mut c);
            e.role_names(&mut r);
        }
        Signature::new(c, r, i)
    }
}

/// An explicit finite interpretation. Elements are `0..domain.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interpretation {
    pub domain: Vec<usize>,
    pub concepts: BTreeMap<String, Vec<usize>>,
    pub roles: BTreeMap<String, Vec<(usize, usize)>>,
    pub individuals: BTreeMap<String, usize>,
}

impl Interpretation {
    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("interpretations serialize")
    }

    pub(crate) fn from_compact(sig: &Signature, ci: &Compact) -> Self {
        let mut concepts = BTreeMap::new();
        for (k, name) in sig.concepts.iter().enumerate() {
            concepts.insert(name.clone(), members(ci.concepts[k]));
        }
        let mut roles = BTreeMap::new();
        for (k, name) in sig.roles.iter().enumerate() {
            let mut pairs = Vec::new();
            for x in 0..ci.d {
                for y in members(ci.roles[k * ci.d + x]) {
                    pairs.push((x, y));
                }
            }
            roles.insert(name.clone(), pairs);
        }
        let individuals = sig
            .individuals
            .iter()
            .zip(&ci.inds)
            .map(|(n, &e)| (n.clone(), e))
            .collect();
        Interpretation {
            domain: (0..ci.d).collect(),
            concepts,
            roles,
            individuals,
        }
    }

    fn to_compact(&self, sig: &Signature) -> Compact {
        let d = self.domain_size();
        let mut ci = Compact::empty(sig, d);
        for (k, name) in sig.concepts.iter().enumerate() {
            if let Some(ms) = self.concepts.get(name) {
                ci.concepts[k] = ms.iter().fold(0, |acc, &e| acc | bit(e));
            }
        }
        for (k, name) in sig.roles.iter().enumerate() {
            if let Some(ps) = self.roles.get(name) {
                for &(x, y) in ps {
                    ci.roles[k * d + x] |= bit(y);
                }
            }
        }
        for (k, name) in sig.individuals.iter().enumerate() {
            ci.inds[k] = self.individuals.get(name).copied().unwrap_or(0);
        }
        ci
    }

    fn signature_with<'a>(
        &self,
        axioms: impl IntoIterator<Item = &'a Axiom>,
        exprs: impl IntoIterator<Item = &'a ConceptExpr>,
    ) -> Signature {
        let extra = Signature::collect(axioms, exprs);
        Signature::new(
            self.concepts.keys().cloned().chain(extra.concepts),
            self.roles.keys().cloned().chain(extra.roles),
            self.individuals.keys().cloned().chain(extra.individuals),
        )
    }
}

pub(crate) fn bit(e: usize) -> u64 {
    1u64 << e
}

pub(crate) fn full_mask(d: usize) -> u64 {
    if d >= 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

pub(crate) fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&e| mask & bit(e) != 0).collect()
}

/// Interpretation over a fixed signature, stored as bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compact {
    pub d: usize,
    pub concepts: Vec<u64>,
    /// `roles[r * d + x]` is the successor mask of `x` under role `r`.
    pub roles: Vec<u64>,
    pub inds: Vec<usize>,
}

impl Compact {
    pub fn empty(sig: &Signature, d: usize) -> Self {
        Compact {
            d,
            concepts: vec![0; sig.concepts.len()],
            roles: vec![0; sig.roles.len() * d],
            inds: vec![0; sig.individuals.len()],
        }
    }

    fn succ(&self, r: RoleRef, x: usize) -> u64 {
        let Some(k) = r.idx else { return 0 };
        if !r.inv {
            self.roles[k * self.d + x]
        } else {
            (0..self.d)
                .filter(|&y| self.roles[k * self.d + y] & bit(x) != 0)
                .fold(0, |acc, y| acc | bit(y))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct RoleRef {
    pub idx: Option<usize>,
    pub inv: bool,
}

impl RoleRef {
    pub fn resolve(r: &RoleExpr, sig: &Signature) -> Self {
        RoleRef {
            idx: sig.role(&r.name),
            inv: r.inverted,
        }
    }

    pub fn inverse(self) -> Self {
        RoleRef {
            idx: self.idx,
            inv: !self.inv,
        }
    }
}

/// Expression with names resolved to signature indices and derived
/// constructors expanded.
#[derive(Debug, Clone)]
pub(crate) enum Compiled {
    Top,
    Bot,
    Atom(usize),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Exists(RoleRef, Box<Compiled>),
    ForAll(RoleRef, Box<Compiled>),
    AtLeast(u32, RoleRef, Box<Compiled>),
    AtMost(u32, RoleRef, Box<Compiled>),
}

/// Compiles `expr`; names found in `unfold` are replaced by their definition.
pub(crate) fn compile(expr: &ConceptExpr, sig: &Signature, unfold: &BTreeMap<usize, Compiled>) -> Compiled {
    compile_inner(&expand_derived(expr), sig, unfold)
}

fn compile_inner(expr: &ConceptExpr, sig: &Signature, unfold: &BTreeMap<usize, Compiled>) -> Compiled {
    let rec = |c: &ConceptExpr| Box::new(compile_inner(c, sig, unfold));
    match expr {
        ConceptExpr::Top => Compiled::Top,
        ConceptExpr::Bottom => Compiled::Bot,
        ConceptExpr::Atomic(name) => match sig.concept(name) {
            Some(k) => unfold.get(&k).cloned().unwrap_or(Compiled::Atom(k)),
            None => Compiled::Bot,
        },
        ConceptExpr::Not(c) => Compiled::Not(rec(c)),
        ConceptExpr::And(ops) => Compiled::And(ops.iter().map(|o| compile_inner(o, sig, unfold)).collect()),
        ConceptExpr::Or(ops) => Compiled::Or(ops.iter().map(|o| compile_inner(o, sig, unfold)).collect()),
        ConceptExpr::Exists(r, c) => Compiled::Exists(RoleRef::resolve(r, sig), rec(c)),
        ConceptExpr::ForAll(r, c) => Compiled::ForAll(RoleRef::resolve(r, sig), rec(c)),
        ConceptExpr::AtLeast(n, r, c) => Compiled::AtLeast(*n, RoleRef::resolve(r, sig), rec(c)),
        ConceptExpr::AtMost(n, r, c) => Compiled::AtMost(*n, RoleRef::resolve(r, sig), rec(c)),
        ConceptExpr::NonVacuous(..) | ConceptExpr::Exactly(..) => {
            unreachable!("derived constructors are expanded first")
        }
    }
}

/// Two-valued evaluation.
pub(crate) fn eval(c: &Compiled, ci: &Compact) -> u64 {
    let full = full_mask(ci.d);
    match c {
        Compiled::Top => full,
        Compiled::Bot => 0,
        Compiled::Atom(k) => ci.concepts[*k],
        Compiled::Not(x) => !eval(x, ci) & full,
        Compiled::And(ops) => ops
            .iter()
            .fold(full, |acc, o| if acc == 0 { 0 } else { acc & eval(o, ci) }),
        Compiled::Or(ops) => ops
            .iter()
            .fold(0, |acc, o| if acc == full { full } else { acc | eval(o, ci) }),
        Compiled::Exists(r, x) => {
            let f = eval(x, ci);
            (0..ci.d)
                .filter(|&e| ci.succ(*r, e) & f != 0)
                .fold(0, |acc, e| acc | bit(e))
        }
        Compiled::ForAll(r, x) => {
            let f = eval(x, ci);
            (0..ci.d)
                .filter(|&e| ci.succ(*r, e) & !f == 0)
                .fold(0, |acc, e| acc | bit(e))
        }
        Compiled::AtLeast(n, r, x) => {
            let f = eval(x, ci);
            (0..ci.d)
                .filter(|&e| (ci.succ(*r, e) & f).count_ones() >= *n)
                .fold(0, |acc, e| acc | bit(e))
        }
        Compiled::AtMost(n, r, x) => {
            let f = eval(x, ci);
            (0..ci.d)
                .filter(|&e| (ci.succ(*r, e) & f).count_ones() <= *n)
                .fold(0, |acc, e| acc | bit(e))
        }
    }
}

/// Axiom with names resolved against a signature.
#[derive(Debug, Clone)]
pub(crate) enum CompiledAxiom {
    Incl(Compiled, Compiled),
    Equal(Compiled, Compiled),
    SubRole(RoleRef, RoleRef),
    Transitive(RoleRef),
    /// first ≡ Inv(second)
    InverseOf(RoleRef, RoleRef),
    At(Compiled, Option<usize>),
    Edge(Option<usize>, Option<usize>, Option<usize>),
    Distinct(Option<usize>, Option<usize>),
}

pub(crate) fn compile_axiom(ax: &Axiom, sig: &Signature, unfold: &BTreeMap<usize, Compiled>) -> CompiledAxiom {
    match ax {
        Axiom::SubClass { sub, sup } => CompiledAxiom::Incl(compile(sub, sig, unfold), compile(sup, sig, unfold)),
        Axiom::EquivClass { lhs, rhs } => CompiledAxiom::Equal(compile(lhs, sig, unfold), compile(rhs, sig, unfold)),
        Axiom::SubRole { sub, sup } => CompiledAxiom::SubRole(RoleRef::resolve(sub, sig), RoleRef::resolve(sup, sig)),
        Axiom::Transitive(r) => CompiledAxiom::Transitive(RoleRef::resolve(&RoleExpr::named(r.clone()), sig)),
        Axiom::Inverse { role, inverse } => CompiledAxiom::InverseOf(
            RoleRef::resolve(&RoleExpr::named(inverse.clone()), sig),
            RoleRef::resolve(&RoleExpr::named(role.clone()), sig),
        ),
        Axiom::ConceptAssertion { concept, individual } => {
            CompiledAxiom::At(compile(concept, sig, unfold), sig.individual(individual))
        }
        Axiom::RoleAssertion { role, subject, object } => {
            CompiledAxiom::Edge(sig.role(role), sig.individual(subject), sig.individual(object))
        }
        Axiom::Inequality(a, b) => CompiledAxiom::Distinct(sig.individual(a), sig.individual(b)),
    }
}

pub(crate) fn holds(ax: &CompiledAxiom, ci: &Compact) -> bool {
    let full = full_mask(ci.d);
    let ind = |i: &Option<usize>| i.map(|k| ci.inds[k]).unwrap_or(0);
    match ax {
        CompiledAxiom::Incl(a, b) => eval(a, ci) & !eval(b, ci) & full == 0,
        CompiledAxiom::Equal(a, b) => eval(a, ci) == eval(b, ci),
        CompiledAxiom::SubRole(r, s) => (0..ci.d).all(|x| ci.succ(*r, x) & !ci.succ(*s, x) == 0),
        CompiledAxiom::Transitive(r) => (0..ci.d).all(|x| {
            let sx = ci.succ(*r, x);
            members(sx).into_iter().all(|y| ci.succ(*r, y) & !sx == 0)
        }),
        CompiledAxiom::InverseOf(s, r) => (0..ci.d).all(|x| ci.succ(*s, x) == ci.succ(r.inverse(), x)),
        CompiledAxiom::At(c, i) => eval(c, ci) & bit(ind(i)) != 0,
        CompiledAxiom::Edge(r, a, b) => match r {
            Some(k) => ci.roles[k * ci.d + ind(a)] & bit(ind(b)) != 0,
            None => false,
        },
        CompiledAxiom::Distinct(a, b) => ind(a) != ind(b),
    }
}

/// Extension of `expr` in `i`. Names missing from `i` have empty extensions.
pub fn eval_concept(expr: &ConceptExpr, i: &Interpretation) -> BTreeSet<usize> {
    let sig = i.signature_with([], [expr]);
    let ci = i.to_compact(&sig);
    members(eval(&compile(expr, &sig, &BTreeMap::new()), &ci))
        .into_iter()
        .collect()
}

/// Truth of an axiom in `i`. Individuals without a mapping denote element 0.
pub fn check_axiom(ax: &Axiom, i: &Interpretation) -> bool {
    let sig = i.signature_with([ax], []);
    let ci = i.to_compact(&sig);
    holds(&compile_axiom(ax, &sig, &BTreeMap::new()), &ci)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interp(d: usize, concepts: &[(&str, &[usize])], roles: &[(&str, &[(usize, usize)])]) -> Interpretation {
        Interpretation {
            domain: (0..d).collect(),
            concepts: concepts.iter().map(|(n, m)| (n.to_string(), m.to_vec())).collect(),
            roles: roles.iter().map(|(n, p)| (n.to_string(), p.to_vec())).collect(),
            individuals: BTreeMap::new(),
        }
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn top_is_whole_domain() {
        let i = interp(3, &[], &[]);
        assert_eq!(eval_concept(&ConceptExpr::Top, &i), set(&[0, 1, 2]));
        assert_eq!(eval_concept(&ConceptExpr::atomic("Missing"), &i), set(&[]));
    }

    #[test]
    fn non_vacuous_versus_universal() {
        // elements 1,2 of the example become 0,1
        let i = interp(2, &[("C", &[1])], &[("R", &[(0, 1)])]);
        let r = RoleExpr::named("R");
        let c = ConceptExpr::atomic("C");
        assert_eq!(
            eval_concept(&ConceptExpr::non_vacuous(r.clone(), c.clone()), &i),
            set(&[0])
        );
        assert_eq!(eval_concept(&ConceptExpr::for_all(r, c), &i), set(&[0, 1]));
    }

    #[test]
    fn exactly_one_counts_distinct_successors() {
        let i = interp(3, &[("C", &[1, 2])], &[("R", &[(0, 1), (0, 2)])]);
        let e = ConceptExpr::exactly(1, RoleExpr::named("R"), ConceptExpr::atomic("C"));
        assert_eq!(eval_concept(&e, &i), set(&[]));
        let e2 = ConceptExpr::exactly(2, RoleExpr::named("R"), ConceptExpr::atomic("C"));
        assert_eq!(eval_concept(&e2, &i), set(&[0]));
    }

    #[test]
    fn inverse_roles() {
        let i = interp(2, &[("C", &[0])], &[("R", &[(0, 1)])]);
        let e = ConceptExpr::exists(RoleExpr::named("R").inverse(), ConceptExpr::atomic("C"));
        assert_eq!(eval_concept(&e, &i), set(&[1]));
    }

    #[test]
    fn axiom_truth() {
        let i = interp(3, &[("C", &[0]), ("D", &[0, 1])], &[("R", &[(0, 1), (1, 2)])]);
        let sub = Axiom::SubClass {
            sub: ConceptExpr::atomic("C"),
            sup: ConceptExpr::atomic("D"),
        };
        assert!(check_axiom(&sub, &i));
        assert!(!check_axiom(&Axiom::Transitive("R".into()), &i));
        let mut j = i.clone();
        j.individuals.insert("a".into(), 0);
        j.individuals.insert("b".into(), 1);
        let ra = Axiom::RoleAssertion {
            role: "R".into(),
            subject: "a".into(),
            object: "b".into(),
        };
        assert!(check_axiom(&ra, &j));
        assert!(check_axiom(&Axiom::Inequality("a".into(), "b".into()), &j));
        assert!(!check_axiom(&Axiom::Inequality("a".into(), "a".into()), &j));
    }

    #[test]
    fn counterexample_json_shape() {
        let mut i = interp(2, &[("A", &[1])], &[("R", &[(0, 1)])]);
        i.individuals.insert("a".into(), 0);
        let v: serde_json::Value = serde_json::from_str(&i.to_json()).unwrap();
        assert_eq!(v["domain"], serde_json::json!([0, 1]));
        assert_eq!(v["concepts"]["A"], serde_json::json!([1]));
        assert_eq!(v["roles"]["R"], serde_json::json!([[0, 1]]));
        assert_eq!(v["individuals"]["a"], serde_json::json!(0));
    }
}

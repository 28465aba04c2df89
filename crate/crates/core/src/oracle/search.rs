//! Bounded model search: is there an interpretation with at most `k`
//! elements that satisfies an ontology and falsifies a goal?
//!
//! The search is a depth-first walk over partial interpretations evaluated
//! in three-valued (Kleene) logic. A branch is cut as soon as some axiom is
//! definitely false, and succeeds as soon as every axiom is definitely true.
//! Branching variables are taken from the first undecided constraint, so
//! bits that no constraint depends on are never enumerated. The answer is
//! the same as enumerating every interpretation up to the bound.
//!
//! Two cheap reductions are applied first: acyclic definitions `A ≡ C` are
//! unfolded so `A` is not a search variable, and individuals are mapped to
//! elements by restricted-growth strings so that renamings of the domain are
//! visited once.

use super::{
    bit, compile, compile_axiom, eval, full_mask, holds, Compact, Compiled, CompiledAxiom, Interpretation, OracleError,
    RoleRef, Signature, MAX_DOMAIN,
};
use crate::expr::{Axiom, ConceptExpr, Ontology, RoleExpr};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_domain: usize,
    pub node_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_domain: 3,
            node_budget: 50_000_000,
        }
    }
}

impl SearchConfig {
    pub fn with_domain(max_domain: usize) -> Self {
        SearchConfig {
            max_domain,
            ..Self::default()
        }
    }
}

/// Outcome of a bounded check. Absence of a countermodel is evidence up to
/// the bound, not a proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    NoCountermodel { max_domain: usize },
    Countermodel(Interpretation),
}

impl Verdict {
    pub fn is_countermodel(&self) -> bool {
        matches!(self, Verdict::Countermodel(_))
    }

    pub fn countermodel(&self) -> Option<&Interpretation> {
        match self {
            Verdict::Countermodel(i) => Some(i),
            Verdict::NoCountermodel { .. } => None,
        }
    }
}

/// Extra requirements describing "the goal is false".
#[derive(Debug, Clone, Default)]
struct Negation {
    asserts: Vec<(ConceptExpr, String)>,
    /// (role, subject, object, present)
    edges: Vec<(String, String, String, bool)>,
    same: Vec<(String, String)>,
}

impl Negation {
    fn individuals(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |s: &String| {
            if !out.contains(s) {
                out.push(s.clone());
            }
        };
        for (_, a) in &self.asserts {
            push(a);
        }
        for (_, a, b, _) in &self.edges {
            push(a);
            push(b);
        }
        for (a, b) in &self.same {
            push(a);
            push(b);
        }
        out
    }

    fn edge(&mut self, role: &RoleExpr, a: &str, b: &str, present: bool) {
        let (s, o) = if role.inverted { (b, a) } else { (a, b) };
        self.edges
            .push((role.name.clone(), s.to_string(), o.to_string(), present));
    }
}

fn fresh(k: usize) -> String {
    format!("_:goal{}", k)
}

fn negations(goal: &Axiom) -> Vec<Negation> {
    let mut out = Vec::new();
    match goal {
        Axiom::ConceptAssertion { concept, individual } => out.push(Negation {
            asserts: vec![(ConceptExpr::not(concept.clone()), individual.clone())],
            ..Negation::default()
        }),
        Axiom::RoleAssertion { role, subject, object } => out.push(Negation {
            edges: vec![(role.clone(), subject.clone(), object.clone(), false)],
            ..Negation::default()
        }),
        Axiom::Inequality(a, b) => out.push(Negation {
            same: vec![(a.clone(), b.clone())],
            ..Negation::default()
        }),
        Axiom::SubClass { sub, sup } => out.push(Negation {
            asserts: vec![(ConceptExpr::and([sub.clone(), ConceptExpr::not(sup.clone())]), fresh(0))],
            ..Negation::default()
        }),
        Axiom::EquivClass { lhs, rhs } => {
            for (x, y) in [(lhs, rhs), (rhs, lhs)] {
                out.push(Negation {
                    asserts: vec![(ConceptExpr::and([x.clone(), ConceptExpr::not(y.clone())]), fresh(0))],
                    ..Negation::default()
                });
            }
        }
        Axiom::SubRole { sub, sup } => {
            let mut n = Negation::default();
            n.edge(sub, &fresh(0), &fresh(1), true);
            n.edge(sup, &fresh(0), &fresh(1), false);
            out.push(n);
        }
        Axiom::Transitive(r) => {
            let r = RoleExpr::named(r.clone());
            let mut n = Negation::default();
            n.edge(&r, &fresh(0), &fresh(1), true);
            n.edge(&r, &fresh(1), &fresh(2), true);
            n.edge(&r, &fresh(0), &fresh(2), false);
            out.push(n);
        }
        Axiom::Inverse { role, inverse } => {
            for (x, y) in [(inverse, role), (role, inverse)] {
                let mut n = Negation::default();
                n.edge(&RoleExpr::named(x.clone()), &fresh(0), &fresh(1), true);
                n.edge(&RoleExpr::named(y.clone()), &fresh(1), &fresh(0), false);
                out.push(n);
            }
        }
    }
    out
}

/// Searches for a model of `o` with at most `max_domain` elements in which
/// `goal` is false.
pub fn bounded_entailment(o: &Ontology, goal: &Axiom, max_domain: usize) -> Result<Verdict, OracleError> {
    bounded_entailment_with(o, goal, SearchConfig::with_domain(max_domain))
}

pub fn bounded_entailment_with(o: &Ontology, goal: &Axiom, cfg: SearchConfig) -> Result<Verdict, OracleError> {
    let axioms: Vec<Axiom> = o.axioms().cloned().collect();
    for neg in negations(goal) {
        if let Some(model) = relaxed_then_full(&axioms, &neg, cfg)? {
            return Ok(Verdict::Countermodel(model));
        }
    }
    Ok(Verdict::NoCountermodel {
        max_domain: cfg.max_domain,
    })
}

/// Bounded check of `c ⊑ d` with respect to `o`.
pub fn bounded_subsumption(
    o: &Ontology,
    c: &ConceptExpr,
    d: &ConceptExpr,
    cfg: SearchConfig,
) -> Result<Verdict, OracleError> {
    bounded_entailment_with(
        o,
        &Axiom::SubClass {
            sub: c.clone(),
            sup: d.clone(),
        },
        cfg,
    )
}

/// Bounded check of `⊓left ≡ ⊓right`, split into one subsumption per
/// conjunct. Conjuncts present on both sides are skipped (`X ⊓ … ⊑ X`).
pub fn bounded_equivalence(
    o: &Ontology,
    left: &[ConceptExpr],
    right: &[ConceptExpr],
    cfg: SearchConfig,
) -> Result<Verdict, OracleError> {
    let l = ConceptExpr::and(left.iter().cloned());
    let r = ConceptExpr::and(right.iter().cloned());
    for (whole, parts, other) in [(&l, right, left), (&r, left, right)] {
        for part in parts {
            if other.contains(part) {
                continue;
            }
            let v = bounded_subsumption(o, whole, part, cfg)?;
            if v.is_countermodel() {
                return Ok(v);
            }
        }
    }
    Ok(Verdict::NoCountermodel {
        max_domain: cfg.max_domain,
    })
}

/// Individuals reachable from `seeds` through the ABox.
fn component(axioms: &[Axiom], neg: &Negation, seeds: &[String]) -> BTreeSet<String> {
    let mut links: Vec<(String, String)> = Vec::new();
    for ax in axioms {
        match ax {
            Axiom::RoleAssertion { subject, object, .. } => links.push((subject.clone(), object.clone())),
            Axiom::Inequality(a, b) => links.push((a.clone(), b.clone())),
            _ => {}
        }
    }
    for (_, a, b, _) in &neg.edges {
        links.push((a.clone(), b.clone()));
    }
    for (a, b) in &neg.same {
        links.push((a.clone(), b.clone()));
    }
    let mut seen: BTreeSet<String> = seeds.iter().cloned().collect();
    loop {
        let before = seen.len();
        for (a, b) in &links {
            if seen.contains(a) || seen.contains(b) {
                seen.insert(a.clone());
                seen.insert(b.clone());
            }
        }
        if seen.len() == before {
            return seen;
        }
    }
}

fn relaxed_then_full(
    axioms: &[Axiom],
    neg: &Negation,
    cfg: SearchConfig,
) -> Result<Option<Interpretation>, OracleError> {
    let seeds = neg.individuals();
    let comp = component(axioms, neg, &seeds);
    let relaxed: Vec<Axiom> = axioms
        .iter()
        .filter(|ax| match ax {
            Axiom::ConceptAssertion { individual, .. } => comp.contains(individual),
            Axiom::RoleAssertion { subject, .. } => comp.contains(subject),
            Axiom::Inequality(a, _) => comp.contains(a),
            _ => true,
        })
        .cloned()
        .collect();
    let found = find_model(&relaxed, neg, &seeds, cfg)?;
    if found.is_none() || relaxed.len() == axioms.len() {
        return Ok(found);
    }
    find_model(axioms, neg, &seeds, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Concept(usize, usize),
    /// (role, subject, object)
    Edge(usize, usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    False,
    Unknown,
    True,
}

#[derive(Debug, Clone)]
enum Con {
    Global(Compiled),
    At(Compiled, usize),
    Edge(usize, usize, usize, bool),
    SubRole(RoleRef, RoleRef),
    Transitive(RoleRef),
}

/// Partial interpretation: a bit is known iff it is set in the `*_set` mask.
#[derive(Debug, Clone)]
struct Partial {
    d: usize,
    full: u64,
    c_val: Vec<u64>,
    c_set: Vec<u64>,
    r_val: Vec<u64>,
    r_set: Vec<u64>,
}

impl Partial {
    fn new(sig: &Signature, d: usize) -> Self {
        Partial {
            d,
            full: full_mask(d),
            c_val: vec![0; sig.concepts.len()],
            c_set: vec![0; sig.concepts.len()],
            r_val: vec![0; sig.roles.len() * d],
            r_set: vec![0; sig.roles.len() * d],
        }
    }

    fn get(&self, v: Var) -> Option<bool> {
        match v {
            Var::Concept(k, x) => (self.c_set[k] & bit(x) != 0).then(|| self.c_val[k] & bit(x) != 0),
            Var::Edge(r, x, y) => {
                let i = r * self.d + x;
                (self.r_set[i] & bit(y) != 0).then(|| self.r_val[i] & bit(y) != 0)
            }
        }
    }

    fn set(&mut self, v: Var, value: bool) {
        let (val, set, b) = match v {
            Var::Concept(k, x) => (&mut self.c_val[k], &mut self.c_set[k], bit(x)),
            Var::Edge(r, x, y) => (&mut self.r_val[r * self.d + x], &mut self.r_set[r * self.d + x], bit(y)),
        };
        *set |= b;
        if value {
            *val |= b;
        } else {
            *val &= !b;
        }
    }

    fn unset(&mut self, v: Var) {
        match v {
            Var::Concept(k, x) => {
                self.c_set[k] &= !bit(x);
                self.c_val[k] &= !bit(x);
            }
            Var::Edge(r, x, y) => {
                let i = r * self.d + x;
                self.r_set[i] &= !bit(y);
                self.r_val[i] &= !bit(y);
            }
        }
    }

    fn edge_var(&self, r: RoleRef, x: usize, y: usize) -> Option<Var> {
        r.idx
            .map(|k| if r.inv { Var::Edge(k, y, x) } else { Var::Edge(k, x, y) })
    }

    /// (must, may) successor masks of `x`.
    fn succ(&self, r: RoleRef, x: usize) -> (u64, u64) {
        let Some(k) = r.idx else { return (0, 0) };
        if !r.inv {
            let i = k * self.d + x;
            (self.r_val[i], self.r_val[i] | (!self.r_set[i] & self.full))
        } else {
            let (mut must, mut may) = (0, 0);
            for y in 0..self.d {
                let i = k * self.d + y;
                if self.r_val[i] & bit(x) != 0 {
                    must |= bit(y);
                }
                if (self.r_val[i] | !self.r_set[i]) & bit(x) != 0 {
                    may |= bit(y);
                }
            }
            (must, may)
        }
    }

    /// Three-valued extension: (definitely in, possibly in).
    fn eval3(&self, c: &Compiled) -> (u64, u64) {
        let full = self.full;
        match c {
            Compiled::Top => (full, full),
            Compiled::Bot => (0, 0),
            Compiled::Atom(k) => (self.c_val[*k], self.c_val[*k] | (!self.c_set[*k] & full)),
            Compiled::Not(x) => {
                let (must, may) = self.eval3(x);
                (!may & full, !must & full)
            }
            Compiled::And(ops) => ops.iter().fold((full, full), |(a, b), o| {
                let (m, p) = self.eval3(o);
                (a & m, b & p)
            }),
            Compiled::Or(ops) => ops.iter().fold((0, 0), |(a, b), o| {
                let (m, p) = self.eval3(o);
                (a | m, b | p)
            }),
            Compiled::Exists(r, x) => {
                let (fm, fp) = self.eval3(x);
                let (mut must, mut may) = (0, 0);
                for e in 0..self.d {
                    let (sm, sp) = self.succ(*r, e);
                    if sm & fm != 0 {
                        must |= bit(e);
                    }
                    if sp & fp != 0 {
                        may |= bit(e);
                    }
                }
                (must, may)
            }
            Compiled::ForAll(r, x) => {
                let (fm, fp) = self.eval3(x);
                let (mut must, mut may) = (0, 0);
                for e in 0..self.d {
                    let (sm, sp) = self.succ(*r, e);
                    if sp & !fm & full == 0 {
                        must |= bit(e);
                    }
                    if sm & !fp & full == 0 {
                        may |= bit(e);
                    }
                }
                (must, may)
            }
            Compiled::AtLeast(n, r, x) => {
                let (fm, fp) = self.eval3(x);
                let (mut must, mut may) = (0, 0);
                for e in 0..self.d {
                    let (sm, sp) = self.succ(*r, e);
                    if (sm & fm).count_ones() >= *n {
                        must |= bit(e);
                    }
                    if (sp & fp).count_ones() >= *n {
                        may |= bit(e);
                    }
                }
                (must, may)
            }
            Compiled::AtMost(n, r, x) => {
                let (fm, fp) = self.eval3(x);
                let (mut must, mut may) = (0, 0);
                for e in 0..self.d {
                    let (sm, sp) = self.succ(*r, e);
                    if (sp & fp).count_ones() <= *n {
                        must |= bit(e);
                    }
                    if (sm & fm).count_ones() <= *n {
                        may |= bit(e);
                    }
                }
                (must, may)
            }
        }
    }

    fn status(&self, con: &Con) -> Tri {
        match con {
            Con::Global(c) => {
                let (must, may) = self.eval3(c);
                if may != self.full {
                    Tri::False
                } else if must == self.full {
                    Tri::True
                } else {
                    Tri::Unknown
                }
            }
            Con::At(c, e) => {
                let (must, may) = self.eval3(c);
                if may & bit(*e) == 0 {
                    Tri::False
                } else if must & bit(*e) != 0 {
                    Tri::True
                } else {
                    Tri::Unknown
                }
            }
            Con::Edge(r, x, y, want) => match self.get(Var::Edge(*r, *x, *y)) {
                None => Tri::Unknown,
                Some(v) if v == *want => Tri::True,
                Some(_) => Tri::False,
            },
            Con::SubRole(r, s) => {
                let mut all_true = true;
                for x in 0..self.d {
                    let (rm, rp) = self.succ(*r, x);
                    let (sm, sp) = self.succ(*s, x);
                    if rm & !sp != 0 {
                        return Tri::False;
                    }
                    if rp & !sm != 0 {
                        all_true = false;
                    }
                }
                if all_true {
                    Tri::True
                } else {
                    Tri::Unknown
                }
            }
            Con::Transitive(r) => {
                let mut all_true = true;
                for x in 0..self.d {
                    let (xm, xp) = self.succ(*r, x);
                    for y in 0..self.d {
                        let (ym, yp) = self.succ(*r, y);
                        if xm & bit(y) != 0 && ym & !xp != 0 {
                            return Tri::False;
                        }
                        if xp & bit(y) != 0 && yp & !xm != 0 {
                            all_true = false;
                        }
                    }
                }
                if all_true {
                    Tri::True
                } else {
                    Tri::Unknown
                }
            }
        }
    }

    fn undecided_at(&self, c: &Compiled, e: usize) -> bool {
        let (must, may) = self.eval3(c);
        must & bit(e) == 0 && may & bit(e) != 0
    }

    /// An unknown bit the value of `c` at `e` depends on.
    fn pick_in(&self, c: &Compiled, e: usize) -> Option<Var> {
        match c {
            Compiled::Top | Compiled::Bot => None,
            Compiled::Atom(k) => {
                let v = Var::Concept(*k, e);
                self.get(v).is_none().then_some(v)
            }
            Compiled::Not(x) => self.pick_in(x, e),
            Compiled::And(ops) | Compiled::Or(ops) => ops
                .iter()
                .filter(|o| self.undecided_at(o, e))
                .find_map(|o| self.pick_in(o, e)),
            Compiled::Exists(r, x)
            | Compiled::ForAll(r, x)
            | Compiled::AtLeast(_, r, x)
            | Compiled::AtMost(_, r, x) => {
                for y in 0..self.d {
                    let v = self.edge_var(*r, e, y)?;
                    match self.get(v) {
                        None => return Some(v),
                        Some(true) if self.undecided_at(x, y) => {
                            if let Some(found) = self.pick_in(x, y) {
                                return Some(found);
                            }
                        }
                        _ => {}
                    }
                }
                None
            }
        }
    }

    fn first_unset_edge(&self, roles: &[RoleRef]) -> Option<Var> {
        for r in roles {
            for x in 0..self.d {
                for y in 0..self.d {
                    if let Some(v) = self.edge_var(*r, x, y) {
                        if self.get(v).is_none() {
                            return Some(v);
                        }
                    }
                }
            }
        }
        None
    }

    fn pick(&self, con: &Con) -> Option<Var> {
        match con {
            Con::Global(c) => {
                let (must, may) = self.eval3(c);
                let open = may & !must & self.full;
                (0..self.d)
                    .filter(|&e| open & bit(e) != 0)
                    .find_map(|e| self.pick_in(c, e))
            }
            Con::At(c, e) => self.pick_in(c, *e),
            Con::Edge(r, x, y, _) => Some(Var::Edge(*r, *x, *y)),
            Con::SubRole(r, s) => self.first_unset_edge(&[*r, *s]),
            Con::Transitive(r) => self.first_unset_edge(&[*r]),
        }
    }

    fn any_unset(&self, n_concepts: usize, n_roles: usize) -> Option<Var> {
        for k in 0..n_concepts {
            for x in 0..self.d {
                if self.get(Var::Concept(k, x)).is_none() {
                    return Some(Var::Concept(k, x));
                }
            }
        }
        for r in 0..n_roles {
            for x in 0..self.d {
                for y in 0..self.d {
                    if self.get(Var::Edge(r, x, y)).is_none() {
                        return Some(Var::Edge(r, x, y));
                    }
                }
            }
        }
        None
    }

    fn to_compact(&self, inds: &[usize]) -> Compact {
        Compact {
            d: self.d,
            concepts: self.c_val.clone(),
            roles: self.r_val.clone(),
            inds: inds.to_vec(),
        }
    }
}

/// Acyclic single definitions `A ≡ C`, compiled in dependency order.
fn unfoldable(axioms: &[Axiom], sig: &Signature) -> (BTreeMap<usize, Compiled>, BTreeSet<usize>) {
    let mut defs: BTreeMap<String, Vec<&ConceptExpr>> = BTreeMap::new();
    for ax in axioms {
        if let Axiom::EquivClass {
            lhs: ConceptExpr::Atomic(a),
            rhs,
        } = ax
        {
            defs.entry(a.clone()).or_default().push(rhs);
        }
    }
    let single: BTreeMap<&String, &ConceptExpr> = defs
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(k, v)| (k, v[0]))
        .collect();
    let mut unfold: BTreeMap<usize, Compiled> = BTreeMap::new();
    let mut done: BTreeSet<String> = BTreeSet::new();
    // repeatedly take definitions whose defined dependencies are already done
    loop {
        let mut progress = false;
        for (name, rhs) in &single {
            if done.contains(*name) {
                continue;
            }
            let mut deps = BTreeSet::new();
            rhs.concept_names(&mut deps);
            if deps.contains(*name) {
                continue;
            }
            if deps.iter().all(|n| !single.contains_key(n) || done.contains(n)) {
                if let Some(k) = sig.concept(name) {
                    unfold.insert(k, compile(rhs, sig, &unfold));
                }
                done.insert((*name).clone());
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let names = unfold.keys().copied().collect();
    (unfold, names)
}

struct Problem<'a> {
    sig: Signature,
    unfold: BTreeMap<usize, Compiled>,
    unfolded: BTreeSet<usize>,
    tbox: Vec<Con>,
    /// ABox and goal requirements, resolved once individuals are placed.
    abox: Vec<CompiledAxiom>,
    goal: Vec<CompiledAxiom>,
    same: Vec<(usize, usize)>,
    order: Vec<usize>,
    cfg: SearchConfig,
    nodes: u64,
    originals: &'a [Axiom],
}

fn find_model(
    axioms: &[Axiom],
    neg: &Negation,
    seeds: &[String],
    cfg: SearchConfig,
) -> Result<Option<Interpretation>, OracleError> {
    if cfg.max_domain == 0 || cfg.max_domain > MAX_DOMAIN {
        return Err(OracleError::DomainSize(cfg.max_domain));
    }
    let exprs: Vec<&ConceptExpr> = neg.asserts.iter().map(|(c, _)| c).collect();
    let base = Signature::collect(axioms, exprs);
    let sig = Signature::new(
        base.concepts,
        base.roles.into_iter().chain(neg.edges.iter().map(|(r, ..)| r.clone())),
        base.individuals.into_iter().chain(neg.individuals()),
    );
    let (unfold, unfolded) = unfoldable(axioms, &sig);

    let mut tbox = Vec::new();
    let mut abox = Vec::new();
    for ax in axioms {
        match ax {
            Axiom::EquivClass {
                lhs: ConceptExpr::Atomic(a),
                ..
            } if sig.concept(a).is_some_and(|k| unfolded.contains(&k)) => {}
            Axiom::SubClass { sub, sup } => tbox.push(Con::Global(Compiled::Or(vec![
                Compiled::Not(Box::new(compile(sub, &sig, &unfold))),
                compile(sup, &sig, &unfold),
            ]))),
            Axiom::EquivClass { lhs, rhs } => {
                let l = compile(lhs, &sig, &unfold);
                let r = compile(rhs, &sig, &unfold);
                tbox.push(Con::Global(Compiled::Or(vec![
                    Compiled::Not(Box::new(l.clone())),
                    r.clone(),
                ])));
                tbox.push(Con::Global(Compiled::Or(vec![Compiled::Not(Box::new(r)), l])));
            }
            Axiom::SubRole { sub, sup } => {
                tbox.push(Con::SubRole(RoleRef::resolve(sub, &sig), RoleRef::resolve(sup, &sig)))
            }
            Axiom::Transitive(r) => tbox.push(Con::Transitive(RoleRef::resolve(&RoleExpr::named(r.clone()), &sig))),
            Axiom::Inverse { role, inverse } => {
                let r = RoleRef::resolve(&RoleExpr::named(role.clone()), &sig);
                let s = RoleRef::resolve(&RoleExpr::named(inverse.clone()), &sig);
                tbox.push(Con::SubRole(s, r.inverse()));
                tbox.push(Con::SubRole(r.inverse(), s));
            }
            _ => abox.push(compile_axiom(ax, &sig, &unfold)),
        }
    }
    let mut goal = Vec::new();
    for (c, a) in &neg.asserts {
        goal.push(CompiledAxiom::At(compile(c, &sig, &unfold), sig.individual(a)));
    }
    let mut neg_edges = Vec::new();
    for (r, a, b, present) in &neg.edges {
        let ax = CompiledAxiom::Edge(sig.role(r), sig.individual(a), sig.individual(b));
        if *present {
            goal.push(ax);
        } else {
            neg_edges.push(ax);
        }
    }
    let same = neg
        .same
        .iter()
        .filter_map(|(a, b)| Some((sig.individual(a)?, sig.individual(b)?)))
        .collect();

    // seeds first so the goal individual sits on element 0
    let mut order: Vec<usize> = seeds.iter().filter_map(|s| sig.individual(s)).collect();
    for k in 0..sig.individuals.len() {
        if !order.contains(&k) {
            order.push(k);
        }
    }

    let mut p = Problem {
        sig,
        unfold,
        unfolded,
        tbox,
        abox,
        goal,
        same,
        order,
        cfg,
        nodes: 0,
        originals: axioms,
    };
    for d in 1..=cfg.max_domain {
        let mut inds = vec![usize::MAX; p.sig.individuals.len()];
        if let Some(m) = p.place(0, 0, d, &mut inds, &neg_edges)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

impl<'a> Problem<'a> {
    /// Restricted-growth assignment of individuals to elements.
    fn place(
        &mut self,
        pos: usize,
        used: usize,
        d: usize,
        inds: &mut Vec<usize>,
        neg_edges: &[CompiledAxiom],
    ) -> Result<Option<Interpretation>, OracleError> {
        if pos == self.order.len() {
            return self.solve(d, inds, neg_edges);
        }
        let who = self.order[pos];
        let limit = (used + 1).min(d);
        for e in 0..limit {
            inds[who] = e;
            if self.mapping_ok(inds) {
                let r = self.place(pos + 1, used.max(e + 1), d, inds, neg_edges)?;
                if r.is_some() {
                    return Ok(r);
                }
            }
        }
        inds[who] = usize::MAX;
        Ok(None)
    }

    fn mapping_ok(&self, inds: &[usize]) -> bool {
        let placed = |k: &Option<usize>| k.map(|k| inds[k]).filter(|&e| e != usize::MAX);
        for ax in &self.abox {
            if let CompiledAxiom::Distinct(a, b) = ax {
                if let (Some(x), Some(y)) = (placed(a), placed(b)) {
                    if x == y {
                        return false;
                    }
                }
            }
        }
        for (a, b) in &self.same {
            let (x, y) = (inds[*a], inds[*b]);
            if x != usize::MAX && y != usize::MAX && x != y {
                return false;
            }
        }
        true
    }

    fn solve(
        &mut self,
        d: usize,
        inds: &[usize],
        neg_edges: &[CompiledAxiom],
    ) -> Result<Option<Interpretation>, OracleError> {
        let mut part = Partial::new(&self.sig, d);
        for &k in &self.unfolded {
            part.c_set[k] = part.full;
        }
        let at = |i: &Option<usize>| i.map(|k| inds[k]).unwrap_or(0);
        let mut cons: Vec<Con> = Vec::new();
        let mut forced: Vec<(Var, bool)> = Vec::new();
        for ax in self.goal.iter().chain(self.abox.iter()) {
            match ax {
                CompiledAxiom::At(c, i) => {
                    let e = at(i);
                    match c {
                        Compiled::Atom(k) => forced.push((Var::Concept(*k, e), true)),
                        Compiled::Not(inner) => {
                            if let Compiled::Atom(k) = inner.as_ref() {
                                forced.push((Var::Concept(*k, e), false));
                            }
                        }
                        _ => {}
                    }
                    cons.push(Con::At(c.clone(), e));
                }
                CompiledAxiom::Edge(Some(r), a, b) => {
                    forced.push((Var::Edge(*r, at(a), at(b)), true));
                    cons.push(Con::Edge(*r, at(a), at(b), true));
                }
                CompiledAxiom::Edge(None, ..) => return Ok(None),
                _ => {}
            }
        }
        for ax in neg_edges {
            if let CompiledAxiom::Edge(Some(r), a, b) = ax {
                forced.push((Var::Edge(*r, at(a), at(b)), false));
                cons.push(Con::Edge(*r, at(a), at(b), false));
            }
        }
        for (v, val) in forced {
            match part.get(v) {
                Some(old) if old != val => return Ok(None),
                _ => part.set(v, val),
            }
        }
        cons.extend(self.tbox.iter().cloned());

        if self.dfs(&mut part, &cons)? {
            let mut ci = part.to_compact(inds);
            for (&k, def) in &self.unfold {
                ci.concepts[k] = eval(def, &ci);
            }
            debug_assert!(self.verify(&ci));
            return Ok(Some(Interpretation::from_compact(&self.sig, &ci)));
        }
        Ok(None)
    }

    fn verify(&self, ci: &Compact) -> bool {
        let none = BTreeMap::new();
        self.originals
            .iter()
            .all(|ax| holds(&compile_axiom(ax, &self.sig, &none), ci))
    }

    fn dfs(&mut self, part: &mut Partial, cons: &[Con]) -> Result<bool, OracleError> {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget {
            return Err(OracleError::SearchBudget(self.nodes));
        }
        let mut open = None;
        for (i, c) in cons.iter().enumerate() {
            match part.status(c) {
                Tri::False => return Ok(false),
                Tri::Unknown if open.is_none() => open = Some(i),
                _ => {}
            }
        }
        let Some(i) = open else { return Ok(true) };
        let var = part
            .pick(&cons[i])
            .or_else(|| part.any_unset(self.sig.concepts.len(), self.sig.roles.len()))
            .expect("an undecided constraint has an unknown bit");
        for value in [false, true] {
            part.set(var, value);
            if self.dfs(part, cons)? {
                return Ok(true);
            }
        }
        part.unset(var);
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::check_axiom;
    use crate::parser::parse_ontology;

    const ACAD: &str = include_str!("../../fixtures/acad.onto");

    fn assertion(c: &str, a: &str) -> Axiom {
        Axiom::ConceptAssertion {
            concept: ConceptExpr::atomic(c),
            individual: a.into(),
        }
    }

    #[test]
    fn student_tom_is_entailed() {
        let o = parse_ontology(ACAD).unwrap();
        let v = bounded_entailment(&o, &assertion("Student", "tom"), 3).unwrap();
        assert_eq!(v, Verdict::NoCountermodel { max_domain: 3 });
    }

    #[test]
    fn professor_alice_has_a_countermodel() {
        let o = parse_ontology(ACAD).unwrap();
        let v = bounded_entailment(&o, &assertion("Professor", "alice"), 2).unwrap();
        let m = v.countermodel().expect("alice is an assistant professor");
        for ax in o.axioms() {
            assert!(check_axiom(ax, m), "countermodel violates {:?}", ax);
        }
        assert!(!check_axiom(&assertion("Professor", "alice"), m));
    }

    #[test]
    fn reflexive_subsumption_in_empty_ontology() {
        let goal = Axiom::SubClass {
            sub: ConceptExpr::atomic("A"),
            sup: ConceptExpr::atomic("A"),
        };
        let v = bounded_entailment(&Ontology::default(), &goal, 3).unwrap();
        assert!(!v.is_countermodel());
    }

    #[test]
    fn professor_roy_is_not_entailed() {
        let o = parse_ontology(ACAD).unwrap();
        let v = bounded_entailment(&o, &assertion("Professor", "roy"), 4).unwrap();
        assert!(v.is_countermodel());
    }

    #[test]
    fn professor_bob_is_entailed() {
        let o = parse_ontology(ACAD).unwrap();
        let v = bounded_entailment(&o, &assertion("Professor", "bob"), 4).unwrap();
        assert!(!v.is_countermodel());
    }

    #[test]
    fn role_axiom_goals() {
        let o = parse_ontology("SUBROLE r s\nSUBROLE s t").unwrap();
        let goal = Axiom::SubRole {
            sub: RoleExpr::named("r"),
            sup: RoleExpr::named("t"),
        };
        assert!(!bounded_entailment(&o, &goal, 3).unwrap().is_countermodel());
        let back = Axiom::SubRole {
            sub: RoleExpr::named("t"),
            sup: RoleExpr::named("r"),
        };
        assert!(bounded_entailment(&o, &back, 2).unwrap().is_countermodel());
        let o = parse_ontology("TRANSITIVE r\nINVERSE r q").unwrap();
        assert!(!bounded_entailment(&o, &Axiom::Transitive("q".into()), 3)
            .unwrap()
            .is_countermodel());
    }

    #[test]
    fn equivalence_of_conjunctions() {
        let o = parse_ontology("A EQUIV B AND C").unwrap();
        let a = ConceptExpr::atomic;
        let cfg = SearchConfig::with_domain(3);
        assert!(!bounded_equivalence(&o, &[a("A")], &[a("B"), a("C")], cfg)
            .unwrap()
            .is_countermodel());
        assert!(bounded_equivalence(&o, &[a("A")], &[a("B")], cfg)
            .unwrap()
            .is_countermodel());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let o = parse_ontology("A SUBCLASSOF SOME r.A AND SOME s.B").unwrap();
        let goal = Axiom::SubClass {
            sub: ConceptExpr::atomic("A"),
            sup: ConceptExpr::atomic("B"),
        };
        let cfg = SearchConfig {
            max_domain: 3,
            node_budget: 3,
        };
        assert!(matches!(
            bounded_entailment_with(&o, &goal, cfg),
            Err(OracleError::SearchBudget(_))
        ));
    }
}

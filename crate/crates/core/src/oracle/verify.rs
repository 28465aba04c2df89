//! Mechanical soundness check of the refinement rules.
//!
//! Every rule is instantiated over fresh names `U`, `V` (concepts) and `R`,
//! `S` (roles) with its side conditions as axioms. The consequents produced
//! by the refiner are compared with the antecedents on every interpretation
//! of domain size 1 to `max_domain` that satisfies the side conditions, then
//! on a seeded batch of larger random interpretations repaired to satisfy
//! them.

use super::enumerate::RandomSampler;
use super::{
    compile, compile_axiom, eval, full_mask, holds, Compact, CompiledAxiom, Interpretation, OracleError, Signature,
    MAX_DOMAIN,
};
use crate::expr::{Axiom, ConceptExpr, Ontology, RoleExpr};
use crate::labelset::LabelSet;
use crate::reasoner::classify;
use crate::refiner::{apply_rule, concept_refinement, RefinementRule, RuleId, Variant};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Largest domain enumerated exhaustively.
    pub max_domain: usize,
    pub samples: usize,
    pub sample_domain: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_domain: 3,
            samples: 1000,
            sample_domain: 5,
            seed: 0,
        }
    }
}

/// An interpretation on which antecedents and consequents disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub instance: String,
    pub antecedents: Vec<String>,
    pub consequents: Vec<String>,
    /// An element in exactly one of the two extensions.
    pub element: usize,
    pub interpretation: Interpretation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleVerdict {
    pub rule: RuleId,
    pub instances: usize,
    /// Exhaustively enumerated interpretations meeting the side conditions.
    pub checked: u64,
    pub sampled: u64,
    /// Instances on which the refiner declined to fire.
    pub inapplicable: Vec<String>,
    pub counterexample: Option<Counterexample>,
}

impl RuleVerdict {
    pub fn sound(&self) -> bool {
        self.counterexample.is_none() && self.inapplicable.is_empty()
    }
}

struct Instance {
    label: String,
    antecedents: Vec<ConceptExpr>,
    side: Vec<Axiom>,
    concepts: Vec<&'static str>,
    roles: Vec<&'static str>,
}

fn c(name: &str) -> ConceptExpr {
    ConceptExpr::atomic(name)
}

fn r(name: &str) -> RoleExpr {
    RoleExpr::named(name)
}

fn sub(a: &str, b: &str) -> Axiom {
    Axiom::SubClass { sub: c(a), sup: c(b) }
}

fn subrole(a: &str, b: &str) -> Axiom {
    Axiom::SubRole { sub: r(a), sup: r(b) }
}

fn instances(id: RuleId) -> Vec<Instance> {
    let one = |ante: Vec<ConceptExpr>, side: Vec<Axiom>, roles: Vec<&'static str>| Instance {
        label: String::new(),
        antecedents: ante,
        side,
        concepts: vec!["U", "V"],
        roles,
    };
    let counts = 1..=3u32;
    match id {
        RuleId::R1a => vec![Instance {
            label: String::new(),
            antecedents: vec![c("A"), c("U"), c("V")],
            side: vec![Axiom::EquivClass {
                lhs: c("A"),
                rhs: ConceptExpr::and([c("U"), c("V")]),
            }],
            concepts: vec!["A", "U", "V"],
            roles: vec![],
        }],
        RuleId::R2a => vec![one(vec![c("U"), c("V")], vec![sub("U", "V")], vec![])],
        RuleId::R3a => vec![one(
            vec![ConceptExpr::exists(r("R"), c("U")), ConceptExpr::exists(r("S"), c("V"))],
            vec![sub("U", "V"), subrole("R", "S")],
            vec!["R", "S"],
        )],
        RuleId::R4a => vec![one(
            vec![
                ConceptExpr::for_all(r("R"), c("U")),
                ConceptExpr::for_all(r("S"), c("V")),
            ],
            vec![sub("U", "V"), subrole("S", "R")],
            vec!["R", "S"],
        )],
        RuleId::R4b => vec![one(
            vec![
                ConceptExpr::for_all(r("R"), c("U")),
                ConceptExpr::for_all(r("R"), c("V")),
            ],
            vec![sub("V", "U")],
            vec!["R"],
        )],
        RuleId::R5a => vec![one(
            vec![
                ConceptExpr::exists(r("R"), c("U")),
                ConceptExpr::for_all(r("R"), c("U")),
            ],
            vec![],
            vec!["R"],
        )],
        RuleId::R5b => vec![one(
            vec![
                ConceptExpr::for_all(r("R"), c("U")),
                ConceptExpr::exists(r("S"), c("V")),
            ],
            vec![sub("U", "V"), subrole("S", "R")],
            vec!["R", "S"],
        )],
        RuleId::R5c => vec![one(
            vec![
                ConceptExpr::for_all(r("R"), c("U")),
                ConceptExpr::exists(r("S"), c("V")),
            ],
            vec![sub("V", "U"), subrole("S", "R")],
            vec!["R", "S"],
        )],
        RuleId::R6a => {
            let mut out = Vec::new();
            for n in counts.clone() {
                for m in 1..=n {
                    let mut i = one(
                        vec![
                            ConceptExpr::at_least(n, r("R"), c("U")),
                            ConceptExpr::at_least(m, r("S"), c("V")),
                        ],
                        vec![sub("U", "V"), subrole("R", "S")],
                        vec!["R", "S"],
                    );
                    i.label = format!("n={n} m={m}");
                    out.push(i);
                }
            }
            out
        }
        RuleId::R6b => counts
            .clone()
            .map(|n| {
                let mut i = one(
                    vec![
                        ConceptExpr::exists(r("R"), c("U")),
                        ConceptExpr::at_least(n, r("S"), c("V")),
                    ],
                    vec![sub("V", "U"), subrole("S", "R")],
                    vec!["R", "S"],
                );
                i.label = format!("n={n}");
                i
            })
            .collect(),
        RuleId::R6c => vec![one(
            vec![
                ConceptExpr::exists(r("R"), c("U")),
                ConceptExpr::at_most(1, r("R"), c("V")),
            ],
            vec![sub("U", "V")],
            vec!["R"],
        )],
        RuleId::R6d => counts
            .clone()
            .map(|n| {
                let mut i = one(
                    vec![
                        ConceptExpr::at_least(n, r("R"), c("U")),
                        ConceptExpr::at_most(n, r("S"), c("V")),
                    ],
                    vec![sub("U", "V"), subrole("R", "S")],
                    vec!["R", "S"],
                );
                i.label = format!("n={n}");
                i
            })
            .collect(),
        RuleId::R7a => vec![one(
            vec![
                ConceptExpr::exists(r("R"), c("U")),
                ConceptExpr::exactly(1, r("S"), c("V")),
            ],
            vec![sub("U", "V"), subrole("R", "S")],
            vec!["R", "S"],
        )],
        RuleId::R7b => vec![one(
            vec![
                ConceptExpr::non_vacuous(r("R"), c("U")),
                ConceptExpr::exactly(1, r("S"), c("V")),
            ],
            vec![sub("U", "V"), subrole("R", "S")],
            vec!["R", "S"],
        )],
        RuleId::R7c => {
            let mut out = Vec::new();
            for m in counts.clone() {
                for n in 1..=m {
                    let mut i = one(
                        vec![
                            ConceptExpr::at_least(m, r("R"), c("V")),
                            ConceptExpr::exactly(n, r("R"), c("U")),
                        ],
                        vec![sub("U", "V")],
                        vec!["R"],
                    );
                    i.label = format!("m={m} n={n}");
                    out.push(i);
                }
            }
            out
        }
    }
}

fn consequents(rule: &RefinementRule, inst: &Instance) -> Option<Vec<ConceptExpr>> {
    let o = Ontology::from_axioms(inst.side.clone());
    if rule.id == RuleId::R1a {
        let ls = LabelSet::from_labels("x", inst.antecedents.clone());
        let out = concept_refinement(&ls, &o);
        return (out.labels != ls.labels).then(|| out.conjuncts());
    }
    let tax = classify(&o);
    apply_rule(rule, &inst.antecedents[0], &inst.antecedents[1], &tax)
}

/// Odometer step over bitmasks; false once every mask has wrapped.
fn bump(masks: &mut [u64], full: u64) -> bool {
    for m in masks.iter_mut() {
        if *m < full {
            *m += 1;
            return true;
        }
        *m = 0;
    }
    false
}

struct Checker<'a> {
    inst: &'a Instance,
    sig: Signature,
    ante: super::Compiled,
    cons: super::Compiled,
    cons_exprs: &'a [ConceptExpr],
    role_axioms: Vec<CompiledAxiom>,
    concept_axioms: Vec<CompiledAxiom>,
}

impl Checker<'_> {
    fn disagreement(&self, ci: &Compact) -> Option<Counterexample> {
        let a = eval(&self.ante, ci);
        let b = eval(&self.cons, ci);
        if a == b {
            return None;
        }
        Some(Counterexample {
            instance: self.inst.label.clone(),
            antecedents: self.inst.antecedents.iter().map(ConceptExpr::canonical).collect(),
            consequents: self.cons_exprs.iter().map(ConceptExpr::canonical).collect(),
            element: (a ^ b).trailing_zeros() as usize,
            interpretation: Interpretation::from_compact(&self.sig, ci),
        })
    }

    fn exhaustive(&self, d: usize, checked: &mut u64) -> Option<Counterexample> {
        let full = full_mask(d);
        let mut ci = Compact::empty(&self.sig, d);
        loop {
            if self.role_axioms.iter().all(|ax| holds(ax, &ci)) {
                ci.concepts.iter_mut().for_each(|m| *m = 0);
                loop {
                    if self.concept_axioms.iter().all(|ax| holds(ax, &ci)) {
                        *checked += 1;
                        if let Some(cx) = self.disagreement(&ci) {
                            return Some(cx);
                        }
                    }
                    if !bump(&mut ci.concepts, full) {
                        break;
                    }
                }
            }
            if !bump(&mut ci.roles, full) {
                return None;
            }
        }
    }

    /// Forces the side conditions onto a random interpretation.
    fn repair(&self, ci: &mut Compact) {
        let d = ci.d;
        for ax in &self.inst.side {
            match ax {
                Axiom::SubClass { sub, sup } => {
                    let (a, b) = (self.concept(sub), self.concept(sup));
                    ci.concepts[b] |= ci.concepts[a];
                }
                Axiom::SubRole { sub, sup } => {
                    let (a, b) = (self.sig.role(&sub.name).unwrap(), self.sig.role(&sup.name).unwrap());
                    for x in 0..d {
                        ci.roles[b * d + x] |= ci.roles[a * d + x];
                    }
                }
                Axiom::EquivClass {
                    lhs,
                    rhs: ConceptExpr::And(ops),
                } => {
                    let meet = ops
                        .iter()
                        .fold(full_mask(d), |acc, o| acc & ci.concepts[self.concept(o)]);
                    ci.concepts[self.concept(lhs)] = meet;
                }
                other => unreachable!("no repair for {other:?}"),
            }
        }
    }

    fn concept(&self, e: &ConceptExpr) -> usize {
        self.sig
            .concept(e.as_atomic().expect("side conditions relate names"))
            .expect("name in signature")
    }
}

fn seed_for(base: u64, id: RuleId, k: usize) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((id as u64) << 32) ^ k as u64
}

/// Checks one rule on all of its instances.
pub fn verify_rule(rule: &RefinementRule, cfg: &VerifyConfig) -> Result<RuleVerdict, OracleError> {
    for d in [cfg.max_domain, cfg.sample_domain] {
        if d == 0 || d > MAX_DOMAIN {
            return Err(OracleError::DomainSize(d));
        }
    }
    let insts = instances(rule.id);
    let mut verdict = RuleVerdict {
        rule: rule.id,
        instances: insts.len(),
        checked: 0,
        sampled: 0,
        inapplicable: Vec::new(),
        counterexample: None,
    };
    for (k, inst) in insts.iter().enumerate() {
        let Some(cons) = consequents(rule, inst) else {
            verdict.inapplicable.push(inst.label.clone());
            continue;
        };
        let sig = Signature::new(
            inst.concepts.iter().copied(),
            inst.roles.iter().copied(),
            Vec::<String>::new(),
        );
        let none = BTreeMap::new();
        let compiled: Vec<(bool, CompiledAxiom)> = inst
            .side
            .iter()
            .map(|ax| (matches!(ax, Axiom::SubRole { .. }), compile_axiom(ax, &sig, &none)))
            .collect();
        let (role_axioms, concept_axioms): (Vec<_>, Vec<_>) = compiled.into_iter().partition(|(is_role, _)| *is_role);
        let checker = Checker {
            inst,
            ante: compile(&ConceptExpr::and(inst.antecedents.clone()), &sig, &none),
            cons: compile(&ConceptExpr::and(cons.clone()), &sig, &none),
            cons_exprs: &cons,
            sig: sig.clone(),
            role_axioms: role_axioms.into_iter().map(|(_, a)| a).collect(),
            concept_axioms: concept_axioms.into_iter().map(|(_, a)| a).collect(),
        };
        for d in 1..=cfg.max_domain {
            if let Some(cx) = checker.exhaustive(d, &mut verdict.checked) {
                verdict.counterexample = Some(cx);
                return Ok(verdict);
            }
        }
        let mut sampler = RandomSampler::new(&sig, cfg.sample_domain, seed_for(cfg.seed, rule.id, k))?;
        for _ in 0..cfg.samples {
            let mut ci = sampler.sample_compact();
            checker.repair(&mut ci);
            debug_assert!(checker
                .role_axioms
                .iter()
                .chain(&checker.concept_axioms)
                .all(|ax| holds(ax, &ci)));
            verdict.sampled += 1;
            if let Some(cx) = checker.disagreement(&ci) {
                verdict.counterexample = Some(cx);
                return Ok(verdict);
            }
        }
    }
    Ok(verdict)
}

/// Checks every rule, one thread per rule.
pub fn verify_all_rules(variant: Variant, cfg: &VerifyConfig) -> Result<Vec<RuleVerdict>, OracleError> {
    let rules = RefinementRule::all(variant);
    std::thread::scope(|s| {
        let handles: Vec<_> = rules
            .iter()
            .map(|rule| s.spawn(move || verify_rule(rule, cfg)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verifier thread panicked"))
            .collect()
    })
}

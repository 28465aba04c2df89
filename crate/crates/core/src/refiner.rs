//! Semantic refinement of label-sets.
//!
//! Pair rules are grouped into rule sets 2 through 7 and applied set by
//! set. Labels consumed by a firing are marked as processed restrictions
//! (PR) when their set closes, and dropped once no later set can use them.

use crate::expr::{to_cnf_top, ConceptExpr, Form, Ontology, RoleExpr};
use crate::labelset::LabelSet;
use crate::reasoner::{is_subsumed, TaxonomyClosure};
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    R1a,
    R2a,
    R3a,
    R4a,
    R4b,
    R5a,
    R5b,
    R5c,
    R6a,
    R6b,
    R6c,
    R6d,
    R7a,
    R7b,
    R7c,
}

impl RuleId {
    pub const ALL: [RuleId; 15] = [
        RuleId::R1a,
        RuleId::R2a,
        RuleId::R3a,
        RuleId::R4a,
        RuleId::R4b,
        RuleId::R5a,
        RuleId::R5b,
        RuleId::R5c,
        RuleId::R6a,
        RuleId::R6b,
        RuleId::R6c,
        RuleId::R6d,
        RuleId::R7a,
        RuleId::R7b,
        RuleId::R7c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1a => "1a",
            RuleId::R2a => "2a",
            RuleId::R3a => "3a",
            RuleId::R4a => "4a",
            RuleId::R4b => "4b",
            RuleId::R5a => "5a",
            RuleId::R5b => "5b",
            RuleId::R5c => "5c",
            RuleId::R6a => "6a",
            RuleId::R6b => "6b",
            RuleId::R6c => "6c",
            RuleId::R6d => "6d",
            RuleId::R7a => "7a",
            RuleId::R7b => "7b",
            RuleId::R7c => "7c",
        }
    }

    pub fn ruleset(self) -> u8 {
        self.name().as_bytes()[0] - b'0'
    }

    /// Rules of one set, in table order.
    pub fn in_set(set: u8) -> impl Iterator<Item = RuleId> {
        RuleId::ALL.into_iter().filter(move |r| r.ruleset() == set)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Standard,
    /// 7c with the remainder filler built as `V ⊔ ¬U`. Unsound; kept so the
    /// rule checker has something to catch.
    FaultyDisjunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefinementRule {
    pub id: RuleId,
    pub variant: Variant,
}

impl RefinementRule {
    pub fn standard(id: RuleId) -> Self {
        RefinementRule {
            id,
            variant: Variant::Standard,
        }
    }

    pub fn all(variant: Variant) -> Vec<RefinementRule> {
        RuleId::ALL
            .into_iter()
            .map(|id| RefinementRule {
                id,
                variant: if id == RuleId::R7c { variant } else { Variant::Standard },
            })
            .collect()
    }
}

fn plain(r: &RoleExpr) -> bool {
    !r.inverted
}

fn role_le(r: &RoleExpr, s: &RoleExpr, tax: &TaxonomyClosure) -> bool {
    plain(r) && plain(s) && tax.role_sub(r, s)
}

fn same_role(r: &RoleExpr, s: &RoleExpr) -> bool {
    plain(r) && r == s
}

/// Consequents of firing `rule` on the ordered pair `(u, v)`, or `None` when
/// the rule does not apply. Rule 1a is not a pair rule and never applies here.
pub fn apply_rule(
    rule: &RefinementRule,
    u: &ConceptExpr,
    v: &ConceptExpr,
    tax: &TaxonomyClosure,
) -> Option<Vec<ConceptExpr>> {
    use ConceptExpr::*;
    let le = |a: &ConceptExpr, b: &ConceptExpr| is_subsumed(a, b, tax);
    let out = match (rule.id, u, v) {
        (RuleId::R2a, Atomic(a), Atomic(b)) => {
            let ab = le(u, v);
            let ba = le(v, u);
            (a != b && ab && (!ba || a < b)).then(|| vec![u.clone()])
        }
        (RuleId::R3a, Exists(r, x), Exists(s, y)) => (le(x, y) && role_le(r, s, tax)).then(|| vec![u.clone()]),
        (RuleId::R4a, ForAll(r, x), ForAll(s, y)) => {
            (le(x, y) && role_le(s, r, tax)).then(|| vec![u.clone(), ConceptExpr::for_all(s.clone(), (**x).clone())])
        }
        (RuleId::R4b, ForAll(r, x), ForAll(s, y)) => (same_role(r, s) && le(y, x)).then(|| vec![v.clone()]),
        (RuleId::R5a, Exists(r, x), ForAll(s, y)) => {
            (same_role(r, s) && x == y).then(|| vec![ConceptExpr::non_vacuous(r.clone(), (**x).clone())])
        }
        (RuleId::R5b, ForAll(r, x), Exists(s, y)) => (le(x, y) && role_le(s, r, tax)).then(|| {
            vec![
                ConceptExpr::non_vacuous(r.clone(), (**x).clone()),
                ConceptExpr::non_vacuous(s.clone(), (**x).clone()),
            ]
        }),
        (RuleId::R5c, ForAll(r, x), Exists(s, y)) => (le(y, x) && role_le(s, r, tax))
            .then(|| vec![ConceptExpr::non_vacuous(r.clone(), (**x).clone()), v.clone()]),
        (RuleId::R6a, AtLeast(n, r, x), AtLeast(m, s, y)) => {
            (le(x, y) && role_le(r, s, tax) && n >= m).then(|| vec![u.clone()])
        }
        (RuleId::R6b, Exists(r, x), AtLeast(n, s, y)) => {
            (le(y, x) && role_le(s, r, tax) && *n >= 1).then(|| vec![v.clone()])
        }
        (RuleId::R6c, Exists(r, x), AtMost(1, s, y)) => (same_role(r, s) && le(x, y)).then(|| {
            vec![
                ConceptExpr::exactly(1, r.clone(), (**x).clone()),
                ConceptExpr::exactly(1, r.clone(), (**y).clone()),
            ]
        }),
        (RuleId::R6d, AtLeast(n, r, x), AtMost(m, s, y)) => (n == m && role_le(r, s, tax) && le(x, y)).then(|| {
            vec![
                ConceptExpr::exactly(*n, r.clone(), (**x).clone()),
                ConceptExpr::exactly(*n, s.clone(), (**y).clone()),
            ]
        }),
        (RuleId::R7a, Exists(r, x), Exactly(1, s, y)) => {
            (le(x, y) && role_le(r, s, tax)).then(|| vec![ConceptExpr::exactly(1, r.clone(), (**x).clone()), v.clone()])
        }
        (RuleId::R7b, NonVacuous(r, x), Exactly(1, s, y)) => (le(x, y) && role_le(r, s, tax))
            .then(|| vec![ConceptExpr::exactly(1, r.clone(), (**x).clone()), v.clone(), u.clone()]),
        (RuleId::R7c, AtLeast(m, r, big), Exactly(n, s, small)) => {
            (same_role(r, s) && le(small, big) && m >= n).then(|| {
                let mut out = vec![v.clone()];
                if m > n {
                    let rest = match rule.variant {
                        Variant::Standard => ConceptExpr::and([(**big).clone(), ConceptExpr::not((**small).clone())]),
                        Variant::FaultyDisjunction => {
                            ConceptExpr::or([(**big).clone(), ConceptExpr::not((**small).clone())])
                        }
                    };
                    out.push(ConceptExpr::at_least(m - n, r.clone(), rest));
                }
                out
            })
        }
        _ => None,
    };
    out.map(dedup)
}

fn dedup(v: Vec<ConceptExpr>) -> Vec<ConceptExpr> {
    let mut seen = BTreeSet::new();
    v.into_iter().filter(|c| seen.insert(c.clone())).collect()
}

/// One step of a refinement run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub ruleset: u8,
    pub rule: Option<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub pr_marked: Vec<String>,
    pub purged: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefineOutcome {
    pub refined: LabelSet,
    pub trace: Vec<TraceEntry>,
    /// Pair-rule firings plus 1a removals.
    pub firings: usize,
}

impl RefineOutcome {
    pub fn trace_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.trace).expect("trace serializes")
    }
}

fn canon(xs: impl IntoIterator<Item = ConceptExpr>) -> Vec<String> {
    xs.into_iter().map(|c| c.canonical()).collect()
}

/// Whether `c` follows from the labels alone. Names already removed by 1a
/// count when their definition follows; `visiting` blocks cycles.
fn derivable(
    c: &ConceptExpr,
    labels: &BTreeSet<ConceptExpr>,
    deferred: &[ConceptExpr],
    removed: &BTreeSet<String>,
    o: &Ontology,
    visiting: &mut Vec<String>,
) -> bool {
    if matches!(c, ConceptExpr::Top) || labels.contains(c) {
        return true;
    }
    match c {
        ConceptExpr::Atomic(a) if removed.contains(a) && !visiting.contains(a) => {
            visiting.push(a.clone());
            let ok = o.definitions(a).any(|rhs| {
                to_cnf_top(rhs)
                    .iter()
                    .all(|k| derivable(k, labels, deferred, removed, o, visiting))
            });
            visiting.pop();
            ok
        }
        ConceptExpr::Or(ops) => {
            deferred.contains(c) || ops.iter().any(|k| derivable(k, labels, deferred, removed, o, visiting))
        }
        ConceptExpr::And(ops) => ops.iter().all(|k| derivable(k, labels, deferred, removed, o, visiting)),
        _ => false,
    }
}

fn rule_1a(ls: &LabelSet, o: &Ontology) -> (LabelSet, Vec<String>) {
    let mut out = ls.clone();
    let mut removed: BTreeSet<String> = BTreeSet::new();
    let mut order = Vec::new();
    loop {
        let mut progress = false;
        let candidates: Vec<String> = out
            .labels
            .iter()
            .filter_map(|l| l.as_atomic().map(str::to_string))
            .filter(|a| o.definitions(a).next().is_some())
            .collect();
        for a in candidates {
            let atom = ConceptExpr::atomic(a.clone());
            out.labels.remove(&atom);
            removed.insert(a.clone());
            let ok = removed.iter().all(|r| {
                derivable(
                    &ConceptExpr::atomic(r.clone()),
                    &out.labels,
                    &out.deferred,
                    &removed,
                    o,
                    &mut Vec::new(),
                )
            });
            if ok {
                order.push(a);
                progress = true;
            } else {
                removed.remove(&a);
                out.labels.insert(atom);
            }
        }
        if !progress {
            break;
        }
    }
    out.pr_marks.retain(|c| out.labels.contains(c));
    (out, order)
}

/// Rule 1a: drops defined names whose definition is already spelled out by
/// the remaining labels.
pub fn concept_refinement(ls: &LabelSet, o: &Ontology) -> LabelSet {
    rule_1a(ls, o).0
}

/// Rule set 2 alone: keeps only the most specific concept names.
pub fn superclass_refinement(ls: &LabelSet, tax: &TaxonomyClosure) -> LabelSet {
    let mut work = Work::new(ls.clone(), Variant::Standard);
    work.run_set(2, tax);
    work.purge_all();
    work.ls
}

/// Forms of label still consumed by rule sets after `set`.
fn consumed_after(set: u8) -> BTreeSet<Form> {
    let mut out = BTreeSet::new();
    for k in (set + 1)..=7 {
        let forms: &[Form] = match k {
            2 => &[Form::Atomic],
            3 => &[Form::Exists],
            4 => &[Form::ForAll],
            5 => &[Form::Exists, Form::ForAll],
            6 => &[Form::AtLeast, Form::Exists, Form::AtMost],
            7 => &[Form::Exists, Form::Exactly, Form::NonVacuous, Form::AtLeast],
            _ => &[],
        };
        out.extend(forms.iter().copied());
    }
    out
}

/// One recorded pair-rule application.
struct Firing {
    inputs: [ConceptExpr; 2],
    outputs: Vec<ConceptExpr>,
}

/// Antecedents a rule set may drop. A label is dropped only if some firing
/// consumed it and every consequent of that firing survives or is itself
/// dropped for a reason that does not lead back to it. This keeps a chain
/// `A ⊑ B ⊑ C` down to `A`, and keeps one label of an equivalent pair.
fn reduced_labels(steps: &[Firing]) -> BTreeSet<ConceptExpr> {
    fn covered(
        x: &ConceptExpr,
        reduced: &BTreeSet<ConceptExpr>,
        steps: &[Firing],
        visiting: &mut Vec<ConceptExpr>,
    ) -> bool {
        if !reduced.contains(x) {
            return true;
        }
        if visiting.contains(x) {
            return false;
        }
        visiting.push(x.clone());
        let ok = steps.iter().any(|f| {
            f.inputs.contains(x)
                && !f.outputs.contains(x)
                && f.outputs.iter().all(|m| covered(m, reduced, steps, visiting))
        });
        visiting.pop();
        ok
    }
    let mut reduced = BTreeSet::new();
    for f in steps {
        for x in &f.inputs {
            if f.outputs.contains(x) || reduced.contains(x) {
                continue;
            }
            reduced.insert(x.clone());
            let sound = reduced.iter().all(|r| covered(r, &reduced, steps, &mut Vec::new()));
            if !sound {
                reduced.remove(x);
            }
        }
    }
    reduced
}

struct Work {
    ls: LabelSet,
    variant: Variant,
    trace: Vec<TraceEntry>,
    firings: usize,
}

impl Work {
    fn new(ls: LabelSet, variant: Variant) -> Self {
        Work {
            ls,
            variant,
            trace: Vec::new(),
            firings: 0,
        }
    }

    fn run_set(&mut self, set: u8, tax: &TaxonomyClosure) {
        let rules: Vec<RefinementRule> = RuleId::in_set(set)
            .map(|id| RefinementRule {
                id,
                variant: if id == RuleId::R7c {
                    self.variant
                } else {
                    Variant::Standard
                },
            })
            .collect();
        let mut fired: HashSet<(RuleId, ConceptExpr, ConceptExpr)> = HashSet::new();
        let mut steps: Vec<Firing> = Vec::new();
        loop {
            let mut any = false;
            let live: Vec<ConceptExpr> = self
                .ls
                .labels
                .iter()
                .filter(|l| !self.ls.pr_marks.contains(*l))
                .cloned()
                .collect();
            for u in &live {
                for v in &live {
                    if u == v {
                        continue;
                    }
                    for rule in &rules {
                        if fired.contains(&(rule.id, u.clone(), v.clone())) {
                            continue;
                        }
                        let Some(m) = apply_rule(rule, u, v, tax) else { continue };
                        fired.insert((rule.id, u.clone(), v.clone()));
                        any = true;
                        self.firings += 1;
                        for c in &m {
                            // a consequent that was set aside earlier is live again
                            self.ls.pr_marks.remove(c);
                            self.ls.insert(c.clone());
                        }
                        self.trace.push(TraceEntry {
                            ruleset: set,
                            rule: Some(rule.id.name().to_string()),
                            inputs: canon([u.clone(), v.clone()]),
                            outputs: canon(m.clone()),
                            pr_marked: vec![],
                            purged: vec![],
                        });
                        steps.push(Firing {
                            inputs: [u.clone(), v.clone()],
                            outputs: m,
                        });
                    }
                }
            }
            if !any {
                break;
            }
        }
        let reduced = reduced_labels(&steps);
        self.ls.pr_marks.extend(reduced.iter().cloned());
        let keep = consumed_after(set);
        let purged: Vec<ConceptExpr> = self
            .ls
            .pr_marks
            .iter()
            .filter(|c| !keep.contains(&c.form()))
            .cloned()
            .collect();
        self.drop(&purged);
        if !reduced.is_empty() || !purged.is_empty() {
            self.trace.push(TraceEntry {
                ruleset: set,
                rule: None,
                inputs: vec![],
                outputs: vec![],
                pr_marked: canon(reduced),
                purged: canon(purged),
            });
        }
    }

    fn drop(&mut self, xs: &[ConceptExpr]) {
        for c in xs {
            self.ls.labels.remove(c);
            self.ls.pr_marks.remove(c);
        }
    }

    fn purge_all(&mut self) -> Vec<ConceptExpr> {
        let all: Vec<ConceptExpr> = self.ls.pr_marks.iter().cloned().collect();
        self.drop(&all);
        all
    }
}

/// Full refinement: rule 1a, then rule sets 2 to 7.
pub fn semantic_refine(ls: &LabelSet, o: &Ontology, tax: &TaxonomyClosure) -> LabelSet {
    semantic_refine_with(ls, o, tax, Variant::Standard).refined
}

pub fn semantic_refine_with(ls: &LabelSet, o: &Ontology, tax: &TaxonomyClosure, variant: Variant) -> RefineOutcome {
    let mut start = ls.clone();
    start.pr_marks.clear();
    // D-clauses sit out the pair rules and come back at the end.
    let deferred = std::mem::take(&mut start.deferred);
    let mut with_deferred = start.clone();
    with_deferred.deferred = deferred.clone();
    let (after_1a, removed) = rule_1a(&with_deferred, o);
    let mut work = Work::new(after_1a, variant);
    work.ls.deferred.clear();
    for a in &removed {
        work.firings += 1;
        work.trace.push(TraceEntry {
            ruleset: 1,
            rule: Some("1a".to_string()),
            inputs: vec![ConceptExpr::atomic(a.clone()).canonical()],
            outputs: vec![],
            pr_marked: vec![],
            purged: vec![ConceptExpr::atomic(a.clone()).canonical()],
        });
    }
    for set in 2..=7 {
        work.run_set(set, tax);
    }
    let last = work.purge_all();
    if !last.is_empty() {
        work.trace.push(TraceEntry {
            ruleset: 7,
            rule: None,
            inputs: vec![],
            outputs: vec![],
            pr_marked: vec![],
            purged: canon(last),
        });
    }
    work.ls.deferred = deferred;
    RefineOutcome {
        refined: work.ls,
        trace: work.trace,
        firings: work.firings,
    }
}

/// True when neither 1a nor any pair rule would change `ls`. A firing whose
/// consequents are already present and include both antecedents is a no-op.
pub fn is_fixed_point(ls: &LabelSet, o: &Ontology, tax: &TaxonomyClosure) -> bool {
    if concept_refinement(ls, o).labels != ls.labels {
        return false;
    }
    let rules = RefinementRule::all(Variant::Standard);
    for u in &ls.labels {
        for v in &ls.labels {
            if u == v {
                continue;
            }
            for rule in &rules {
                if let Some(m) = apply_rule(rule, u, v, tax) {
                    let noop = m.contains(u) && m.contains(v) && m.iter().all(|c| ls.labels.contains(c));
                    if !noop {
                        return false;
                    }
                }
            }
        }
    }
    true
}

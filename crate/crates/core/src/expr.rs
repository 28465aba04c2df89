//! Concept and role expressions, axioms and ontologies.
//!
//! Expressions are kept in a canonical shape: `And`/`Or` operands are
//! flattened, deduplicated and sorted by their canonical prefix
//! serialization. Equality, ordering and hashing are all defined on that
//! serialization, so two expressions are equal exactly when they print the
//! same way.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

/// A role, possibly inverted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoleExpr {
    pub name: String,
    pub inverted: bool,
}

impl RoleExpr {
    pub fn named(name: impl Into<String>) -> Self {
        RoleExpr {
            name: name.into(),
            inverted: false,
        }
    }

    /// `Inv(.)`; inverting twice gives back the base role.
    pub fn inverse(&self) -> Self {
        RoleExpr {
            name: self.name.clone(),
            inverted: !self.inverted,
        }
    }
}

impl fmt::Display for RoleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "(inv {})", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// A SHIQ concept expression extended with the non-vacuous (`∍R.C`) and
/// exactly-n (`∃₌ₙR.C`) constructors.
#[derive(Debug, Clone)]
pub enum ConceptExpr {
    Atomic(String),
    Top,
    Bottom,
    Not(Box<ConceptExpr>),
    And(Vec<ConceptExpr>),
    Or(Vec<ConceptExpr>),
    Exists(RoleExpr, Box<ConceptExpr>),
    ForAll(RoleExpr, Box<ConceptExpr>),
    AtLeast(u32, RoleExpr, Box<ConceptExpr>),
    AtMost(u32, RoleExpr, Box<ConceptExpr>),
    /// `∃R.C ⊓ ∀R.C`
    NonVacuous(RoleExpr, Box<ConceptExpr>),
    /// `≥nR.C ⊓ ≤nR.C`, n ≥ 1
    Exactly(u32, RoleExpr, Box<ConceptExpr>),
}

/// Head constructor of an expression, used to classify labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Form {
    Atomic,
    Top,
    Bottom,
    Not,
    And,
    Or,
    Exists,
    ForAll,
    AtLeast,
    AtMost,
    NonVacuous,
    Exactly,
}

impl ConceptExpr {
    pub fn atomic(name: impl Into<String>) -> Self {
        ConceptExpr::Atomic(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: ConceptExpr) -> Self {
        ConceptExpr::Not(Box::new(inner))
    }

    /// Conjunction with flattening, deduplication and canonical ordering.
    /// A single operand is returned as is; no operands yield `⊤`.
    pub fn and(operands: impl IntoIterator<Item = ConceptExpr>) -> Self {
        let ops = Self::collect_nary(operands, true);
        match ops.len() {
            0 => ConceptExpr::Top,
            1 => ops.into_iter().next().unwrap(),
            _ => ConceptExpr::And(ops),
        }
    }

    /// Disjunction; no operands yield `⊥`.
    pub fn or(operands: impl IntoIterator<Item = ConceptExpr>) -> Self {
        let ops = Self::collect_nary(operands, false);
        match ops.len() {
            0 => ConceptExpr::Bottom,
            1 => ops.into_iter().next().unwrap(),
            _ => ConceptExpr::Or(ops),
        }
    }

    fn collect_nary(operands: impl IntoIterator<Item = ConceptExpr>, conj: bool) -> Vec<ConceptExpr> {
        let mut set = BTreeSet::new();
        for op in operands {
            match op {
                ConceptExpr::And(inner) if conj => set.extend(inner),
                ConceptExpr::Or(inner) if !conj => set.extend(inner),
                other => {
                    set.insert(other);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn exists(role: RoleExpr, filler: ConceptExpr) -> Self {
        ConceptExpr::Exists(role, Box::new(filler))
    }

    pub fn for_all(role: RoleExpr, filler: ConceptExpr) -> Self {
        ConceptExpr::ForAll(role, Box::new(filler))
    }

    pub fn at_least(n: u32, role: RoleExpr, filler: ConceptExpr) -> Self {
        ConceptExpr::AtLeast(n, role, Box::new(filler))
    }

    pub fn at_most(n: u32, role: RoleExpr, filler: ConceptExpr) -> Self {
        ConceptExpr::AtMost(n, role, Box::new(filler))
    }

    pub fn non_vacuous(role: RoleExpr, filler: ConceptExpr) -> Self {
        ConceptExpr::NonVacuous(role, Box::new(filler))
    }

    pub fn exactly(n: u32, role: RoleExpr, filler: ConceptExpr) -> Self {
        ConceptExpr::Exactly(n, role, Box::new(filler))
    }

    pub fn form(&self) -> Form {
        match self {
            ConceptExpr::Atomic(_) => Form::Atomic,
            ConceptExpr::Top => Form::Top,
            ConceptExpr::Bottom => Form::Bottom,
            ConceptExpr::Not(_) => Form::Not,
            ConceptExpr::And(_) => Form::And,
            ConceptExpr::Or(_) => Form::Or,
            ConceptExpr::Exists(..) => Form::Exists,
            ConceptExpr::ForAll(..) => Form::ForAll,
            ConceptExpr::AtLeast(..) => Form::AtLeast,
            ConceptExpr::AtMost(..) => Form::AtMost,
            ConceptExpr::NonVacuous(..) => Form::NonVacuous,
            ConceptExpr::Exactly(..) => Form::Exactly,
        }
    }

    pub fn as_atomic(&self) -> Option<&str> {
        match self {
            ConceptExpr::Atomic(name) => Some(name),
            _ => None,
        }
    }

    /// True for `∃`, `∀`, `≥`, `≤`, `∍` and `∃₌ₙ` expressions.
    pub fn is_restriction(&self) -> bool {
        self.restriction_parts().is_some()
    }

    /// Role and filler of a restriction.
    pub fn restriction_parts(&self) -> Option<(&RoleExpr, &ConceptExpr)> {
        match self {
            ConceptExpr::Exists(r, c)
            | ConceptExpr::ForAll(r, c)
            | ConceptExpr::AtLeast(_, r, c)
            | ConceptExpr::AtMost(_, r, c)
            | ConceptExpr::NonVacuous(r, c)
            | ConceptExpr::Exactly(_, r, c) => Some((r, c)),
            _ => None,
        }
    }

    pub fn contains_derived(&self) -> bool {
        match self {
            ConceptExpr::NonVacuous(..) | ConceptExpr::Exactly(..) => true,
            ConceptExpr::Not(c)
            | ConceptExpr::Exists(_, c)
            | ConceptExpr::ForAll(_, c)
            | ConceptExpr::AtLeast(_, _, c)
            | ConceptExpr::AtMost(_, _, c) => c.contains_derived(),
            ConceptExpr::And(ops) | ConceptExpr::Or(ops) => ops.iter().any(Self::contains_derived),
            _ => false,
        }
    }

    /// Canonical prefix serialization.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        self.write_canonical(&mut out);
        out
    }

    fn write_canonical(&self, out: &mut String) {
        use std::fmt::Write;
        match self {
            ConceptExpr::Atomic(name) => out.push_str(name),
            ConceptExpr::Top => out.push_str("TOP"),
            ConceptExpr::Bottom => out.push_str("BOT"),
            ConceptExpr::Not(c) => {
                out.push_str("(not ");
                c.write_canonical(out);
                out.push(')');
            }
            ConceptExpr::And(ops) | ConceptExpr::Or(ops) => {
                let head = if matches!(self, ConceptExpr::And(_)) {
                    "and"
                } else {
                    "or"
                };
                let mut parts: Vec<String> = ops.iter().map(Self::canonical).collect();
                parts.sort();
                let _ = write!(out, "({}", head);
                for p in parts {
                    out.push(' ');
                    out.push_str(&p);
                }
                out.push(')');
            }
            ConceptExpr::Exists(r, c) => {
                let _ = write!(out, "(some {} ", r);
                c.write_canonical(out);
                out.push(')');
            }
            ConceptExpr::ForAll(r, c) => {
                let _ = write!(out, "(all {} ", r);
                c.write_canonical(out);
                out.push(')');
            }
            ConceptExpr::AtLeast(n, r, c) => {
                let _ = write!(out, "(atleast {} {} ", n, r);
                c.write_canonical(out);
                out.push(')');
            }
            ConceptExpr::AtMost(n, r, c) => {
                let _ = write!(out, "(atmost {} {} ", n, r);
                c.write_canonical(out);
                out.push(')');
            }
            ConceptExpr::NonVacuous(r, c) => {
                let _ = write!(out, "(nonvac {} ", r);
                c.write_canonical(out);
                out.push(')');
            }
            ConceptExpr::Exactly(n, r, c) => {
                let _ = write!(out, "(exactly {} {} ", n, r);
                c.write_canonical(out);
                out.push(')');
            }
        }
    }

    /// Concept names occurring anywhere in the expression.
    pub fn concept_names(&self, acc: &mut BTreeSet<String>) {
        match self {
            ConceptExpr::Atomic(n) => {
                acc.insert(n.clone());
            }
            ConceptExpr::Top | ConceptExpr::Bottom => {}
            ConceptExpr::Not(c) => c.concept_names(acc),
            ConceptExpr::And(ops) | ConceptExpr::Or(ops) => ops.iter().for_each(|o| o.concept_names(acc)),
            _ => {
                let (_, c) = self.restriction_parts().unwrap();
                c.concept_names(acc)
            }
        }
    }

    /// Role names occurring anywhere in the expression (inverses reported by base name).
    pub fn role_names(&self, acc: &mut BTreeSet<String>) {
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => {}
            ConceptExpr::Not(c) => c.role_names(acc),
            ConceptExpr::And(ops) | ConceptExpr::Or(ops) => ops.iter().for_each(|o| o.role_names(acc)),
            _ => {
                let (r, c) = self.restriction_parts().unwrap();
                acc.insert(r.name.clone());
                c.role_names(acc)
            }
        }
    }

    /// Roles used under `≥`, `≤` or `∃₌ₙ`.
    pub fn counted_roles(&self, acc: &mut BTreeSet<String>) {
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => {}
            ConceptExpr::Not(c) => c.counted_roles(acc),
            ConceptExpr::And(ops) | ConceptExpr::Or(ops) => ops.iter().for_each(|o| o.counted_roles(acc)),
            ConceptExpr::AtLeast(_, r, c) | ConceptExpr::AtMost(_, r, c) | ConceptExpr::Exactly(_, r, c) => {
                acc.insert(r.name.clone());
                c.counted_roles(acc)
            }
            ConceptExpr::Exists(_, c) | ConceptExpr::ForAll(_, c) | ConceptExpr::NonVacuous(_, c) => {
                c.counted_roles(acc)
            }
        }
    }

    /// Maximal role nesting depth.
    pub fn role_depth(&self) -> usize {
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => 0,
            ConceptExpr::Not(c) => c.role_depth(),
            ConceptExpr::And(ops) | ConceptExpr::Or(ops) => ops.iter().map(Self::role_depth).max().unwrap_or(0),
            _ => 1 + self.restriction_parts().unwrap().1.role_depth(),
        }
    }
}

impl fmt::Display for ConceptExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl PartialEq for ConceptExpr {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for ConceptExpr {}

impl PartialOrd for ConceptExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ConceptExpr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical().cmp(&other.canonical())
    }
}

impl Hash for ConceptExpr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state)
    }
}

/// True iff the canonical serializations match.
pub fn structural_eq(a: &ConceptExpr, b: &ConceptExpr) -> bool {
    a.canonical() == b.canonical()
}

/// Replaces `∍R.C` by `∃R.C ⊓ ∀R.C` and `∃₌ₙR.C` by `≥nR.C ⊓ ≤nR.C`, recursively.
pub fn expand_derived(expr: &ConceptExpr) -> ConceptExpr {
    match expr {
        ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => expr.clone(),
        ConceptExpr::Not(c) => ConceptExpr::not(expand_derived(c)),
        ConceptExpr::And(ops) => ConceptExpr::and(ops.iter().map(expand_derived)),
        ConceptExpr::Or(ops) => ConceptExpr::or(ops.iter().map(expand_derived)),
        ConceptExpr::Exists(r, c) => ConceptExpr::exists(r.clone(), expand_derived(c)),
        ConceptExpr::ForAll(r, c) => ConceptExpr::for_all(r.clone(), expand_derived(c)),
        ConceptExpr::AtLeast(n, r, c) => ConceptExpr::at_least(*n, r.clone(), expand_derived(c)),
        ConceptExpr::AtMost(n, r, c) => ConceptExpr::at_most(*n, r.clone(), expand_derived(c)),
        ConceptExpr::NonVacuous(r, c) => {
            let c = expand_derived(c);
            ConceptExpr::and([
                ConceptExpr::exists(r.clone(), c.clone()),
                ConceptExpr::for_all(r.clone(), c),
            ])
        }
        ConceptExpr::Exactly(n, r, c) => {
            let c = expand_derived(c);
            ConceptExpr::and([
                ConceptExpr::at_least(*n, r.clone(), c.clone()),
                ConceptExpr::at_most(*n, r.clone(), c),
            ])
        }
    }
}

/// Top-level conjuncts of `expr` in conjunctive normal form. Distribution of
/// `⊔` over `⊓` happens only at the top level; restriction fillers are left
/// untouched. Each conjunct is either free of a top-level `⊔` or is a
/// disjunction (a D-clause).
pub fn to_cnf_top(expr: &ConceptExpr) -> Vec<ConceptExpr> {
    match expr {
        ConceptExpr::And(ops) => {
            let mut out: Vec<ConceptExpr> = Vec::new();
            for op in ops {
                for c in to_cnf_top(op) {
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
            out
        }
        ConceptExpr::Or(ops) => {
            // cross product of the operands' clause lists
            let mut clauses: Vec<Vec<ConceptExpr>> = vec![Vec::new()];
            for op in ops {
                let op_clauses = to_cnf_top(op);
                let mut next = Vec::with_capacity(clauses.len() * op_clauses.len());
                for partial in &clauses {
                    for clause in &op_clauses {
                        let mut p = partial.clone();
                        p.push(clause.clone());
                        next.push(p);
                    }
                }
                clauses = next;
            }
            let mut out: Vec<ConceptExpr> = Vec::new();
            for parts in clauses {
                let c = ConceptExpr::or(parts);
                if !out.contains(&c) {
                    out.push(c);
                }
            }
            out
        }
        _ => vec![expr.clone()],
    }
}

/// An ontology axiom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// `C ⊑ D`
    SubClass { sub: ConceptExpr, sup: ConceptExpr },
    /// `A ≡ C`; the left side is a concept name, or `⊥` for disjointness.
    EquivClass { lhs: ConceptExpr, rhs: ConceptExpr },
    /// `R ⊑ S`
    SubRole { sub: RoleExpr, sup: RoleExpr },
    /// `Tran(R)`
    Transitive(String),
    /// `S ≡ Inv(R)`
    Inverse { role: String, inverse: String },
    /// `C(a)`
    ConceptAssertion { concept: ConceptExpr, individual: String },
    /// `R(a, b)`
    RoleAssertion {
        role: String,
        subject: String,
        object: String,
    },
    /// `a ≠ b`
    Inequality(String, String),
}

impl Axiom {
    pub fn is_abox(&self) -> bool {
        matches!(
            self,
            Axiom::ConceptAssertion { .. } | Axiom::RoleAssertion { .. } | Axiom::Inequality(..)
        )
    }

    pub fn disjointness(a: impl Into<String>, b: impl Into<String>) -> Axiom {
        Axiom::EquivClass {
            lhs: ConceptExpr::Bottom,
            rhs: ConceptExpr::and([ConceptExpr::atomic(a), ConceptExpr::atomic(b)]),
        }
    }

    fn collect_names(
        &self,
        concepts: &mut BTreeSet<String>,
        roles: &mut BTreeSet<String>,
        individuals: &mut BTreeSet<String>,
    ) {
        match self {
            Axiom::SubClass { sub: a, sup: b } | Axiom::EquivClass { lhs: a, rhs: b } => {
                a.concept_names(concepts);
                b.concept_names(concepts);
                a.role_names(roles);
                b.role_names(roles);
            }
            Axiom::SubRole { sub, sup } => {
                roles.insert(sub.name.clone());
                roles.insert(sup.name.clone());
            }
            Axiom::Transitive(r) => {
                roles.insert(r.clone());
            }
            Axiom::Inverse { role, inverse } => {
                roles.insert(role.clone());
                roles.insert(inverse.clone());
            }
            Axiom::ConceptAssertion { concept, individual } => {
                concept.concept_names(concepts);
                concept.role_names(roles);
                individuals.insert(individual.clone());
            }
            Axiom::RoleAssertion { role, subject, object } => {
                roles.insert(role.clone());
                individuals.insert(subject.clone());
                individuals.insert(object.clone());
            }
            Axiom::Inequality(a, b) => {
                individuals.insert(a.clone());
                individuals.insert(b.clone());
            }
        }
    }
}

/// `𝒪 = (T, A)` together with its signature.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ontology {
    pub tbox: Vec<Axiom>,
    pub abox: Vec<Axiom>,
    pub concept_names: BTreeSet<String>,
    pub role_names: BTreeSet<String>,
    pub individual_names: BTreeSet<String>,
}

impl Ontology {
    /// Splits axioms into TBox and ABox and collects the signature.
    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        let mut o = Ontology::default();
        for ax in axioms {
            o.add_axiom(ax);
        }
        o
    }

    pub fn add_axiom(&mut self, ax: Axiom) {
        ax.collect_names(
            &mut self.concept_names,
            &mut self.role_names,
            &mut self.individual_names,
        );
        if ax.is_abox() {
            self.abox.push(ax);
        } else {
            self.tbox.push(ax);
        }
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.tbox.iter().chain(self.abox.iter())
    }

    /// Right-hand sides of `A ≡ C` axioms for a concept name.
    pub fn definitions<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a ConceptExpr> + 'a {
        self.tbox.iter().filter_map(move |ax| match ax {
            Axiom::EquivClass {
                lhs: ConceptExpr::Atomic(a),
                rhs,
            } if a == name => Some(rhs),
            _ => None,
        })
    }

    /// Right-hand sides of both `A ≡ C` and `A ⊑ C` axioms for a concept name.
    pub fn told_superexpressions<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a ConceptExpr> + 'a {
        self.tbox.iter().filter_map(move |ax| match ax {
            Axiom::EquivClass {
                lhs: ConceptExpr::Atomic(a),
                rhs,
            } if a == name => Some(rhs),
            Axiom::SubClass {
                sub: ConceptExpr::Atomic(a),
                sup,
            } if a == name => Some(sup),
            _ => None,
        })
    }

    /// Pairs `(A, B)` declared disjoint through `⊥ ≡ A ⊓ B`.
    pub fn disjoint_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for ax in &self.tbox {
            if let Axiom::EquivClass {
                lhs: ConceptExpr::Bottom,
                rhs: ConceptExpr::And(ops),
            } = ax
            {
                let names: Vec<&str> = ops.iter().filter_map(ConceptExpr::as_atomic).collect();
                for (i, a) in names.iter().enumerate() {
                    for b in &names[i + 1..] {
                        out.push((a.to_string(), b.to_string()));
                    }
                }
            }
        }
        out
    }

    /// Roles that have a transitive sub-role under the declared hierarchy.
    pub fn non_simple_roles(&self) -> BTreeSet<String> {
        let mut transitive: BTreeSet<String> = BTreeSet::new();
        let mut inverse_of: BTreeMap<String, String> = BTreeMap::new();
        let mut edges: Vec<(RoleExpr, RoleExpr)> = Vec::new();
        for ax in &self.tbox {
            match ax {
                Axiom::Transitive(r) => {
                    transitive.insert(r.clone());
                }
                Axiom::SubRole { sub, sup } => edges.push((sub.clone(), sup.clone())),
                Axiom::Inverse { role, inverse } => {
                    inverse_of.insert(role.clone(), inverse.clone());
                    inverse_of.insert(inverse.clone(), role.clone());
                }
                _ => {}
            }
        }
        // Tran(R) iff Tran(Inv(R))
        let declared: Vec<String> = transitive.iter().cloned().collect();
        for r in declared {
            if let Some(inv) = inverse_of.get(&r) {
                transitive.insert(inv.clone());
            }
        }
        // propagate "has a transitive sub-role" upwards to a fixpoint
        let mut non_simple = transitive.clone();
        loop {
            let mut changed = false;
            for (sub, sup) in &edges {
                if non_simple.contains(&sub.name) && non_simple.insert(sup.name.clone()) {
                    changed = true;
                }
            }
            let current: Vec<String> = non_simple.iter().cloned().collect();
            for r in current {
                if let Some(inv) = inverse_of.get(&r) {
                    if non_simple.insert(inv.clone()) {
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        non_simple
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> ConceptExpr {
        ConceptExpr::atomic(n)
    }

    fn r(n: &str) -> RoleExpr {
        RoleExpr::named(n)
    }

    #[test]
    fn cnf_keeps_existing_cnf() {
        let e = ConceptExpr::and([a("A"), ConceptExpr::or([a("B"), a("C")])]);
        assert_eq!(to_cnf_top(&e), vec![ConceptExpr::or([a("B"), a("C")]), a("A")]);
    }

    #[test]
    fn cnf_distributes_once() {
        let e = ConceptExpr::or([ConceptExpr::and([a("A"), a("B")]), a("C")]);
        assert_eq!(
            to_cnf_top(&e),
            vec![ConceptExpr::or([a("A"), a("C")]), ConceptExpr::or([a("B"), a("C")])]
        );
    }

    #[test]
    fn cnf_leaves_fillers_alone() {
        let e = ConceptExpr::exists(r("R"), ConceptExpr::or([a("A"), a("B")]));
        assert_eq!(to_cnf_top(&e), vec![e.clone()]);
    }

    #[test]
    fn expand_derived_examples() {
        let nv = ConceptExpr::non_vacuous(r("R"), a("C"));
        assert_eq!(
            expand_derived(&nv),
            ConceptExpr::and([
                ConceptExpr::exists(r("R"), a("C")),
                ConceptExpr::for_all(r("R"), a("C"))
            ])
        );
        let ex = ConceptExpr::exactly(1, r("R"), a("C"));
        assert_eq!(
            expand_derived(&ex),
            ConceptExpr::and([
                ConceptExpr::at_least(1, r("R"), a("C")),
                ConceptExpr::at_most(1, r("R"), a("C"))
            ])
        );
        assert_eq!(expand_derived(&a("A")), a("A"));
    }

    #[test]
    fn structural_equality() {
        assert!(structural_eq(
            &ConceptExpr::and([a("A"), a("B")]),
            &ConceptExpr::and([a("B"), a("A")])
        ));
        assert!(!structural_eq(
            &ConceptExpr::exists(r("R"), a("A")),
            &ConceptExpr::exists(r("R"), a("B"))
        ));
        assert!(structural_eq(&ConceptExpr::Top, &ConceptExpr::Top));
        // hand-built, unsorted operands still compare equal
        assert_eq!(
            ConceptExpr::And(vec![a("B"), a("A")]),
            ConceptExpr::and([a("A"), a("B")])
        );
    }

    #[test]
    fn nested_and_is_flattened() {
        let inner = ConceptExpr::and([a("A"), a("B")]);
        let outer = ConceptExpr::and([inner, a("C")]);
        match &outer {
            ConceptExpr::And(ops) => {
                assert_eq!(ops.len(), 3);
                assert!(ops.iter().all(|o| o.form() == Form::Atomic));
            }
            _ => panic!("expected a conjunction"),
        }
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(
            ConceptExpr::exists(r("hasAdvisor"), a("Professor")).canonical(),
            "(some hasAdvisor Professor)"
        );
        assert_eq!(ConceptExpr::And(vec![a("B"), a("A")]).canonical(), "(and A B)");
        assert_eq!(
            ConceptExpr::non_vacuous(r("hasAdvisor"), a("TeachingStaff")).canonical(),
            "(nonvac hasAdvisor TeachingStaff)"
        );
        assert_eq!(
            ConceptExpr::exists(r("R").inverse(), ConceptExpr::Top).canonical(),
            "(some (inv R) TOP)"
        );
    }

    #[test]
    fn double_inverse_is_identity() {
        assert_eq!(r("R").inverse().inverse(), r("R"));
    }

    #[test]
    fn non_simple_roles_follow_hierarchy() {
        let o = Ontology::from_axioms([
            Axiom::Transitive("partOf".into()),
            Axiom::SubRole {
                sub: r("partOf"),
                sup: r("locatedIn"),
            },
            Axiom::Inverse {
                role: "locatedIn".into(),
                inverse: "hosts".into(),
            },
        ]);
        let ns = o.non_simple_roles();
        assert!(ns.contains("partOf"));
        assert!(ns.contains("locatedIn"));
        assert!(ns.contains("hosts"));
    }
}

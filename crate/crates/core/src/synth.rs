//! Seeded random ontologies for property tests and benchmarks.
//!
//! Generated TBoxes are acyclic (a name is only described in terms of
//! names with a higher index) and only non-transitive roles appear under
//! number restrictions, so every output is a valid `.onto` file.

use crate::expr::{Axiom, ConceptExpr, Ontology, RoleExpr};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthConfig {
    pub concepts: usize,
    pub roles: usize,
    pub individuals: usize,
    pub tbox_axioms: usize,
    pub abox_axioms: usize,
    /// Nesting depth of generated expressions.
    pub depth: usize,
    /// Whether to emit inverse roles, transitivity and inequalities.
    pub full_syntax: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            concepts: 6,
            roles: 3,
            individuals: 6,
            tbox_axioms: 6,
            abox_axioms: 10,
            depth: 2,
            full_syntax: false,
        }
    }
}

struct Gen {
    rng: ChaCha8Rng,
    cfg: SynthConfig,
}

fn concept_name(i: usize) -> String {
    format!("C{i}")
}

fn role_name(i: usize) -> String {
    format!("r{i}")
}

fn ind_name(i: usize) -> String {
    format!("i{i}")
}

impl Gen {
    /// Role 0 is the only one that may be transitive, so it never sits under
    /// a number restriction.
    fn role(&mut self, counted: bool) -> RoleExpr {
        let lo = if counted && self.cfg.roles > 1 && self.cfg.full_syntax {
            1
        } else {
            0
        };
        let name = role_name(self.rng.gen_range(lo..self.cfg.roles));
        if self.cfg.full_syntax && self.rng.gen_bool(0.15) {
            RoleExpr::named(name).inverse()
        } else {
            RoleExpr::named(name)
        }
    }

    fn atom(&mut self, above: usize) -> ConceptExpr {
        let lo = (above + 1).min(self.cfg.concepts - 1);
        ConceptExpr::atomic(concept_name(self.rng.gen_range(lo..self.cfg.concepts)))
    }

    /// Expression over names with index > `above`.
    fn expr(&mut self, above: usize, depth: usize) -> ConceptExpr {
        if depth == 0 || self.rng.gen_bool(0.3) {
            let a = self.atom(above);
            return if self.rng.gen_bool(0.15) {
                ConceptExpr::not(a)
            } else {
                a
            };
        }
        let n = self.rng.gen_range(1..=3u32);
        match self.rng.gen_range(0..9) {
            0 => ConceptExpr::and([self.expr(above, depth - 1), self.expr(above, depth - 1)]),
            1 => ConceptExpr::or([self.expr(above, depth - 1), self.expr(above, depth - 1)]),
            2 | 3 => {
                let r = self.role(false);
                ConceptExpr::exists(r, self.expr(above, depth - 1))
            }
            4 => {
                let r = self.role(false);
                ConceptExpr::for_all(r, self.expr(above, depth - 1))
            }
            5 => {
                let r = self.role(true);
                ConceptExpr::at_least(n, r, self.expr(above, depth - 1))
            }
            6 => {
                let r = self.role(true);
                ConceptExpr::at_most(n, r, self.expr(above, depth - 1))
            }
            7 => {
                let r = self.role(false);
                ConceptExpr::non_vacuous(r, self.expr(above, depth - 1))
            }
            _ => {
                let r = self.role(true);
                ConceptExpr::exactly(n, r, self.expr(above, depth - 1))
            }
        }
    }

    /// Two or three restrictions on one role with named fillers: the shape
    /// the refinement rules look for.
    fn bundle(&mut self, above: usize) -> ConceptExpr {
        let r = RoleExpr::named(role_name(self.rng.gen_range(0..self.cfg.roles)));
        let counted = !(self.cfg.full_syntax && r.name == role_name(0));
        let k = self.rng.gen_range(2..=3);
        let mut parts = Vec::new();
        for _ in 0..k {
            let c = self.atom(above);
            let n = self.rng.gen_range(1..=2u32);
            let part = match self.rng.gen_range(0..if counted { 5 } else { 2 }) {
                0 => ConceptExpr::exists(r.clone(), c),
                1 => ConceptExpr::for_all(r.clone(), c),
                2 => ConceptExpr::at_least(n, r.clone(), c),
                3 => ConceptExpr::at_most(n, r.clone(), c),
                _ => ConceptExpr::exactly(1, r.clone(), c),
            };
            parts.push(part);
        }
        ConceptExpr::and(parts)
    }

    fn tbox_axiom(&mut self, defined: &mut Vec<usize>) -> Option<Axiom> {
        let nc = self.cfg.concepts;
        if nc < 2 {
            return None;
        }
        let a = self.rng.gen_range(0..nc - 1);
        let lhs = ConceptExpr::atomic(concept_name(a));
        let depth = self.cfg.depth;
        let ax = match self.rng.gen_range(0..10) {
            0..=3 if !defined.contains(&a) => {
                defined.push(a);
                let mut parts = vec![self.atom(a)];
                for _ in 0..self.rng.gen_range(1..=2) {
                    parts.push(self.expr(a, depth));
                }
                Axiom::EquivClass {
                    lhs,
                    rhs: ConceptExpr::and(parts),
                }
            }
            4 | 5 => Axiom::SubClass {
                sub: lhs,
                sup: self.expr(a, depth),
            },
            6 | 7 => Axiom::SubClass {
                sub: lhs,
                sup: self.bundle(a),
            },
            8 => {
                let b = self.rng.gen_range(a + 1..nc);
                Axiom::disjointness(concept_name(a), concept_name(b))
            }
            _ if self.cfg.roles >= 3 => Axiom::SubRole {
                sub: RoleExpr::named(role_name(1)),
                sup: RoleExpr::named(role_name(2)),
            },
            _ => Axiom::SubClass {
                sub: lhs,
                sup: self.atom(a),
            },
        };
        Some(ax)
    }

    fn abox_axiom(&mut self) -> Axiom {
        let ni = self.cfg.individuals;
        let x = ind_name(self.rng.gen_range(0..ni));
        match self.rng.gen_range(0..10) {
            0..=4 => Axiom::ConceptAssertion {
                concept: ConceptExpr::atomic(concept_name(self.rng.gen_range(0..self.cfg.concepts))),
                individual: x,
            },
            5 if self.cfg.full_syntax => Axiom::ConceptAssertion {
                concept: self.expr(0, 1),
                individual: x,
            },
            6 if self.cfg.full_syntax && ni > 1 => {
                let mut pair: Vec<usize> = (0..ni).collect();
                pair.shuffle(&mut self.rng);
                Axiom::Inequality(ind_name(pair[0]), ind_name(pair[1]))
            }
            _ => Axiom::RoleAssertion {
                role: role_name(self.rng.gen_range(0..self.cfg.roles)),
                subject: x,
                object: ind_name(self.rng.gen_range(0..ni)),
            },
        }
    }
}

/// Random ontology over names `C0..`, `r0..` and `i0..`, reproducible from
/// `seed`.
pub fn random_ontology(seed: u64, cfg: SynthConfig) -> Ontology {
    assert!(
        cfg.concepts >= 1 && cfg.roles >= 1 && cfg.individuals >= 1,
        "empty signature"
    );
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        cfg,
    };
    let mut axioms = Vec::new();
    if cfg.full_syntax && g.rng.gen_bool(0.5) {
        axioms.push(Axiom::Transitive(role_name(0)));
    }
    if cfg.full_syntax && cfg.roles >= 3 && g.rng.gen_bool(0.3) {
        axioms.push(Axiom::Inverse {
            role: role_name(1),
            inverse: role_name(2),
        });
    }
    let mut defined = Vec::new();
    for _ in 0..cfg.tbox_axioms {
        if let Some(ax) = g.tbox_axiom(&mut defined) {
            if !axioms.contains(&ax) {
                axioms.push(ax);
            }
        }
    }
    for _ in 0..cfg.abox_axioms {
        let ax = g.abox_axiom();
        if !axioms.contains(&ax) {
            axioms.push(ax);
        }
    }
    Ontology::from_axioms(axioms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_ontology, render_ontology};

    #[test]
    fn reproducible() {
        let a = random_ontology(5, SynthConfig::default());
        let b = random_ontology(5, SynthConfig::default());
        assert_eq!(render_ontology(&a), render_ontology(&b));
        assert_ne!(
            render_ontology(&a),
            render_ontology(&random_ontology(6, SynthConfig::default()))
        );
    }

    #[test]
    fn within_bounds_and_parseable() {
        let cfg = SynthConfig {
            full_syntax: true,
            ..SynthConfig::default()
        };
        for seed in 0..50 {
            let o = random_ontology(seed, cfg);
            assert!(o.concept_names.len() <= 6);
            assert!(o.role_names.len() <= 3);
            assert!(o.individual_names.len() <= 6);
            let text = render_ontology(&o);
            parse_ontology(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        }
    }
}

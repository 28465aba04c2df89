//! Label-sets and semantic refinement for description-logic ontologies.
//!
//! The pipeline: [`parser`] reads `.onto` files, [`reasoner`] classifies and
//! materializes them, [`labelset`] collects what holds of an individual or
//! concept, [`refiner`] rewrites that collection into a smaller equivalent
//! one, and [`nlgen`] turns it into a sentence. [`oracle`] is an independent
//! finite-model checker used to test all of the above.

pub mod expr;
pub mod labelset;
pub mod nlgen;
pub mod oracle;
pub mod parser;
pub mod reasoner;
pub mod refiner;
pub mod synth;

pub use expr::{Axiom, ConceptExpr, Ontology, RoleExpr};
pub use labelset::{concept_label_set, edge_label_set, node_label_set, LabelSet, LabelSetError};
pub use nlgen::{render_description, render_restriction, Description, Lexicon};
pub use parser::{parse_ontology, ParseError};
pub use reasoner::{classify, materialize, MaterializedOntology, TaxonomyClosure};
pub use refiner::{semantic_refine, semantic_refine_with, RefineOutcome, RefinementRule, RuleId, Variant};

//! Executable calculus of fixpoint formulas over graph-shaped computational
//! fields: value domains, fields, formulas and their evaluation, asynchronous
//! strategies, an imperative host language, its simple assignment form, and a
//! message-level distributed simulator.

pub mod corpus;
pub mod dist;
pub mod domains;
pub mod eval;
pub mod field;
pub mod formula;
pub mod program;
pub mod rescue;
pub mod saf;
pub mod strategy;

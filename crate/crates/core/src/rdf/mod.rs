//! RDF data model, indexed triple store and Turtle / N-Triples I/O.

mod graph;
mod term;
mod turtle;

pub use graph::Graph;
pub use term::{BlankNode, Iri, Literal, Subject, Term, TermError, Triple};
pub use turtle::{
    canonical_ntriples, parse_turtle, serialize_turtle, BlankNodeError, ParseError, ParseErrorKind,
};

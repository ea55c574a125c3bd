//! Meta-querying over OWL 2 QL ontologies by reduction to Datalog.

pub mod engine;
pub mod lubm;
pub mod model;
pub mod oracle;
pub mod owl;
pub mod pipeline;
pub mod random;
pub mod rules;
pub mod sparql;
pub mod translate;

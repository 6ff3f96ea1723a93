//! König-Egerváry graph verification, KE-layer decomposition and
//! vertex-cover estimation on simple undirected graphs.

pub mod experiment;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod layers;
pub mod verify;

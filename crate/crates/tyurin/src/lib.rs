//! Catalog, verification harness and report emission for the projective
//! models and Tyurin degenerations of `M`-polarised K3 surfaces.

pub mod catalog;
pub mod report;
pub mod verify;

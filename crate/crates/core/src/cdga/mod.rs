//! Finite connected CDGAs, Aomoto complexes and resonance varieties.

mod algebra;
mod aomoto;
mod module;
mod resonance;

pub use algebra::{AlgebraBuilder, BasisRef, GradedAlgebra, ValidationReport, Violation};
pub use aomoto::{aomoto, flat_connections, AomotoComplex, FlatConnectionBasis};
pub use module::{DGModule, ModuleBuilder};
pub use resonance::{
    betti_at, probe_components, resonance_membership, verify_subspace_in_resonance, LinearSubspaceQ, ProbeResult,
    SubspaceCertificate, SubspaceVerdict,
};

//! Combinatorial algebra of rational admissible symplectic field theory over Z₂.
//!
//! Formal disks are cyclic words of signed Reeb-chord punctures. Count data for
//! a cobordism (potential and Hamiltonian vectors) is supplied by the caller;
//! the library glues disks, builds the filtered differential, computes the
//! spectral sequence and checks the deformation calculus.

pub mod boundary;
pub mod deform;
pub mod disk;
pub mod error;
mod gf2;
pub mod gluing;
pub mod io;
pub mod sft;
pub mod spectral;
pub mod vector;

#[cfg(test)]
pub(crate) mod test_support;

pub use boundary::{
    classify_chord, format_action, parse_action, validate_boundary, Action, BoundaryData, BoundarySpec, ChordKind,
    Ends, LagrangianComponent, ReebChord, Sym, ValidationReport,
};
pub use disk::{canonicalize, parse_word, FormalDisk, Puncture, Sign};
pub use error::{Error, Result};
pub use gluing::{
    glue_at, gluing_pairing, linearize_lower, linearize_upper, pairing_trees, split_glue_down, split_glue_up,
    strip_vector, GluingTree, Joint, Level,
};
pub use vector::{Alpha, DiskVector};
pub use deform::{
    bifurcate, chain_iso, deformed_increment, homotopy_omega, homotopy_theta, increment, join_moving_lower,
    join_moving_upper, joined_k, joined_k_rev, scenario_chain_iso, verify_homotopy, BifurcationReport, ChainIso,
    ChainIsoReport, DeformationScenario, HomotopyReport, JoinedFamily, Moment,
};
pub use sft::{
    chain_map_lower, chain_map_upper, differential, differential_of, differential_parts, ham_at_potential,
    ham_op_minus, ham_op_plus, join, trivial_cobordism, verify_d_squared, CobordismData, DSquaredReport,
};
pub use spectral::{
    build_complex, enumerate_basis, enumerate_disks, identity_map, page_morphism, projection_map, spectral_sequence,
    stabilize, Budgets, ClosureReport, FilteredComplex, Generator, PageEntry, PageMorphism, SpectralPage,
    StabilizationLevel, StabilizationReport,
};

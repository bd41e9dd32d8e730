//! Modules over finite local algebras: Hom, tensor, duals, resolutions,
//! Ext and Tor, isomorphism testing and the reflexivity predicates.

mod blocks;
mod hom;
mod homology;
mod iso;
mod module;
mod predicates;
mod resolution;
mod tensor;

pub use hom::{hom_dim, hom_module, is_homomorphism, HomModule};
pub use homology::{bass_numbers, ext, tor, BassMethod, Engine};
pub use iso::{is_isomorphic, IsoOutcome, NonIsoReason, ISO_TRIALS};
pub(crate) use module::same_algebra as same_algebra_arc;
pub use module::{matlis_dual, regular_module, residue_field_module, FiniteModule, ModuleError, ModuleJson};
pub use predicates::{is_semidualizing, is_totally_reflexive, Status, Verdict};
pub use resolution::{betti_numbers, minimal_free_resolution, Differential, FreeResolutionPrefix, Resolver};
pub use tensor::tensor_module;

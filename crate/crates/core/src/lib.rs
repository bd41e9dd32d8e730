//! Exact computations with modules over finite local algebras: resolutions,
//! Ext, Tor, Bass and Poincaré series, semidualizing modules and chains of
//! them, with a constructor for tensor products of trivial extensions.

pub mod algebra;
pub mod bundle;
pub mod chains;
pub mod constructions;
pub mod exactlin;
pub mod modcalc;
mod par;
pub mod report;
pub mod series;

pub use algebra::{AlgebraError, AlgebraJson, FiniteLocalAlgebra};
pub use bundle::{load_bundle, verify_bundle, write_bundle, Bundle, BundleError, ChainJson};
pub use chains::{BFamily, Chain, ChainError, DaggerWord};
pub use constructions::{build_example, build_instance, ConstructionError, ExampleInstance, ExampleSpec};
pub use exactlin::{Field, FieldSpec, Matrix, PrimeField, Rationals, DEFAULT_PRIME};
pub use modcalc::{BassMethod, Engine, FiniteModule, IsoOutcome, ModuleError, Status, Verdict};
pub use report::{ClaimRecord, Report};
pub use series::{RationalFormSpec, SeriesError, TruncatedSeries};

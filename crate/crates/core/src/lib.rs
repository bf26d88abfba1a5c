//! Exact computation of generalized Brill-Noether loci on chains of
//! cycles.
//!
//! A chain of `g` cycles joined by bridges, with a marked point on the
//! last cycle, has its special-divisor loci completely controlled by the
//! chain's torsion profile. This crate computes that structure with exact
//! rational arithmetic: torsion profiles from edge lengths, displacement
//! tableaux and their enumeration, the torus decomposition and dimension
//! of each locus, standard forms and Weierstrass partitions of divisors,
//! divisor ranks, and generality criteria. An independent chip-firing
//! oracle (reduced divisors on a subdivided finite graph) cross-validates
//! every rank the partition machinery produces.
//!
//! ```
//! use bnchain_core::chain::{ChainSpec, TorsionProfile};
//! use bnchain_core::partitions::Partition;
//! use bnchain_core::brill_noether::components;
//!
//! // Genus 4, no rational torsion: the degree-3, rank-1 locus is two points.
//! let spec = ChainSpec::abstract_chain(TorsionProfile::generic(4));
//! let square = Partition::new(vec![2, 2]).unwrap();
//! assert_eq!(components(&spec, &square).len(), 2);
//! ```

pub mod brill_noether;
pub mod chain;
pub mod divisors;
pub mod error;
pub mod oracle;
pub mod partitions;
pub mod random;
pub mod rat;
pub mod tableaux;

pub use chain::{ChainSpec, CycleGeom, CyclePoint, TorsionProfile};
pub use divisors::{ChainDivisor, Location, StandardForm};
pub use error::{Error, Result};
pub use partitions::{Cell, Partition, ResidueSet};
pub use rat::Rat;
pub use tableaux::DisplacementTableau;

//! Exact-arithmetic toolkit for Prym varieties of pairs of coverings of the
//! projective line.
//!
//! Everything is combinatorial and integral: curves are branched covers of
//! the line presented by permutation monodromy, Jacobians are the first
//! homology lattices of the covering surfaces together with their (unimodular
//! alternating) intersection forms, and abelian subvarieties are saturated
//! sublattices with nondegenerate restricted form. On top of that the crate
//! computes Prym lattices of morphisms and of pairs of morphisms, restricted
//! polarization types, kernel groups, and classifies the two families of
//! exponent-6 Prym-Tyurin varieties realizable by coprime cover pairs.
//!
//! No floating point is used anywhere; all linear algebra runs over
//! arbitrary-precision integers.
//!
//! ```
//! use prym_core::lattice::{prym_lattices, prym_tyurin_check};
//! use prym_core::homology::DiagramHomology;
//! use prym_core::specfile;
//!
//! let diagram = specfile::parse_diagram(specfile::bundled::FAMILY_RAMIFIED_MIN)?;
//! assert_eq!((diagram.g1.genus(), diagram.g2.genus(), diagram.x.genus()), (4, 4, 12));
//!
//! let homology = DiagramHomology::build(&diagram)?;
//! let lattices = prym_lattices(&homology)?;
//! let polarization = lattices.prym_pair.restricted_type()?;
//! assert_eq!(polarization.divisors.len(), 4);
//! assert!(prym_tyurin_check(&lattices.prym_pair, 6)?);
//! # Ok::<(), prym_core::Error>(())
//! ```

pub mod classification;
pub mod covers;
pub mod error;
pub mod group;
pub mod homology;
pub mod intmat;
pub mod lattice;
pub mod perm;
pub mod random;
pub mod report;
pub mod specfile;
pub mod surface;
pub mod witness;

pub use error::{Error, Result};

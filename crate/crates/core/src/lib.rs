//! Weighted relations and the dependency theory around them.
//!
//! A weighted relation assigns a nonzero scalar weight to every tuple of
//! its support — probability distributions over finite tuple spaces are
//! the motivating case, but weights may be arbitrary nonzero field
//! elements. This crate provides:
//!
//! - the algebra on such relations: projection, natural join,
//!   marginalization, product join, pointwise inversion, and the monotone
//!   join built from those ([`relation`]);
//! - checkers for multivalued dependencies and their weighted and embedded
//!   generalizations, including conditional independence ([`dependency`]);
//! - an implication engine for families of embedded statements with a
//!   shared conditioning set: cover reachability, the
//!   symmetry/augmentation/projection axioms with replayable derivations,
//!   and the cyclic families showing that no finite set of such rules is
//!   complete ([`implication`]);
//! - bounded counterexample search over enumerated relations and seeded
//!   random distribution generation ([`witness`]);
//! - a plain-text file format for relations and statement sets ([`io`]).
//!
//! The algebra is generic over the scalar via [`weight::Weight`]; the
//! default scalar is the exact [`Rational`], under which every operation
//! and every checker verdict is exact. `f64` works too for quick
//! experiments, subject to the usual rounding caveats.

#![warn(missing_docs)]

pub mod attr;
pub mod dependency;
pub mod error;
pub mod implication;
pub mod io;
pub mod relation;
pub mod statement;
pub mod tuple;
pub mod weight;
pub mod witness;

#[cfg(test)]
pub(crate) mod test_util;

pub use attr::{Attribute, AttributeSet};
pub use error::{Error, Result};
pub use relation::{ClassicRelation, WeightedRelation};
pub use statement::{DependencyKind, DependencyStatement};
pub use tuple::{Tuple, Value};
pub use weight::Weight;

/// Exact rational scalar: the default weight type.
pub type Rational = num_rational::BigRational;

/// Weighted relation over exact rationals (same as plain `WeightedRelation`).
pub type RationalRelation = WeightedRelation<Rational>;

/// Weighted relation over `f64` weights.
pub type FloatRelation = WeightedRelation<f64>;

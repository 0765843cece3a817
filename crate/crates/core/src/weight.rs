//! The scalar type weighted relations carry.

use std::fmt;

use num_traits::{Num, Signed};

/// Types usable as relation weights.
///
/// Weights are treated as elements of a field: marginalization sums them,
/// product joins multiply them, and inversion takes reciprocals. Any signed
/// numeric type with true division works (the blanket impl covers the usual
/// suspects); integer types technically satisfy the bounds but truncate on
/// division and so produce nonsense reciprocals. The crate root exposes the
/// two instantiations used in practice: exact [`crate::Rational`] (the
/// default) and `f64`.
pub trait Weight: Num + Signed + Clone + fmt::Debug + fmt::Display {}

impl<T> Weight for T where T: Num + Signed + Clone + fmt::Debug + fmt::Display {}

#[cfg(test)]
mod tests {
    use super::Weight;

    fn assert_weight<W: Weight>() {}

    #[test]
    fn rational_and_floats_are_weights() {
        assert_weight::<crate::Rational>();
        assert_weight::<f64>();
        assert_weight::<f32>();
    }
}

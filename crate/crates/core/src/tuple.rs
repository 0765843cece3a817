//! Values and tuples (rows and partial rows).

use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

use crate::attr::{Attribute, AttributeSet};
use crate::error::{Error, Result};

/// A single attribute value: an uninterpreted token.
///
/// Values are compared by their text. They may not be empty, contain a
/// comma, or start with `#` (those would collide with the file format).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(String);

impl Value {
    /// Validates and wraps a value token.
    pub fn new(token: &str) -> Result<Self> {
        if token.is_empty() {
            return Err(Error::Syntax("empty value token".into()));
        }
        if token.contains(',') {
            return Err(Error::Syntax(format!(
                "value token `{token}` may not contain a comma"
            )));
        }
        if token.starts_with('#') {
            return Err(Error::Syntax(format!(
                "value token `{token}` may not start with `#`"
            )));
        }
        Ok(Value(token.to_string()))
    }

    /// The value's text.
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A mapping from attributes to values: a row of a relation, or the
/// restriction of one to some of its attributes.
///
/// Tuples over a common attribute set order themselves by their values in
/// canonical attribute order, which is what makes row order (and hence
/// serialization) deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(BTreeMap<Attribute, Value>);

impl Tuple {
    /// The tuple over no attributes.
    pub fn empty() -> Self {
        Tuple(BTreeMap::new())
    }

    /// Builds a tuple from attribute/value pairs, rejecting duplicates.
    pub fn new<I: IntoIterator<Item = (Attribute, Value)>>(pairs: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (attr, value) in pairs {
            if map.insert(attr.clone(), value).is_some() {
                return Err(Error::Validation(format!(
                    "attribute `{attr}` bound twice in one tuple"
                )));
            }
        }
        Ok(Tuple(map))
    }

    /// The attributes this tuple binds.
    pub fn attributes(&self) -> AttributeSet {
        self.0.keys().cloned().collect()
    }

    /// The value bound to `attr`, if any.
    pub fn get(&self, attr: &Attribute) -> Option<&Value> {
        self.0.get(attr)
    }

    /// Restriction of the tuple to `on`, which must be a subset of the
    /// bound attributes.
    pub fn project(&self, on: &AttributeSet) -> Result<Tuple> {
        let mut map = BTreeMap::new();
        for attr in on {
            match self.0.get(attr) {
                Some(v) => {
                    map.insert(attr.clone(), v.clone());
                }
                None => {
                    return Err(Error::Schema(format!(
                        "tuple {self} does not bind attribute `{attr}`"
                    )))
                }
            }
        }
        Ok(Tuple(map))
    }

    /// Combines two tuples that agree on their shared attributes.
    pub fn merge(&self, other: &Tuple) -> Result<Tuple> {
        let mut map = self.0.clone();
        for (attr, value) in &other.0 {
            match map.get(attr) {
                Some(existing) if existing != value => {
                    return Err(Error::Validation(format!(
                        "cannot merge tuples: `{attr}` bound to both `{existing}` and `{value}`"
                    )))
                }
                _ => {
                    map.insert(attr.clone(), value.clone());
                }
            }
        }
        Ok(Tuple(map))
    }

    /// Whether both tuples bind every attribute of `on` to the same value.
    pub fn agrees_with(&self, other: &Tuple, on: &AttributeSet) -> bool {
        on.iter().all(|a| {
            matches!((self.0.get(a), other.0.get(a)), (Some(x), Some(y)) if x == y)
        })
    }

    /// Number of bound attributes.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether the tuple binds no attribute.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Iterates over `(attribute, value)` pairs in canonical order.
    pub fn iter(&self) -> btree_map::Iter<'_, Attribute, Value> {
        self.0.iter()
    }
}

impl fmt::Display for Tuple {
    /// Values in canonical attribute order, e.g. `(0,1,1)`; `()` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        let mut first = true;
        for value in self.0.values() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{value}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(pairs: &[(&str, &str)]) -> Tuple {
        Tuple::new(pairs.iter().map(|(a, v)| {
            (Attribute::new(a).unwrap(), Value::new(v).unwrap())
        }))
        .unwrap()
    }

    #[test]
    fn value_validation() {
        assert!(Value::new("").is_err());
        assert!(Value::new("a,b").is_err());
        assert!(Value::new("#1").is_err());
        assert!(Value::new("0").is_ok());
        assert!(Value::new("red").is_ok());
    }

    #[test]
    fn projection_and_merge() {
        let t = tuple(&[("A", "0"), ("B", "1"), ("C", "2")]);
        let ab = AttributeSet::parse("A,B").unwrap();
        let proj = t.project(&ab).unwrap();
        assert_eq!(proj, tuple(&[("A", "0"), ("B", "1")]));
        assert!(t.project(&AttributeSet::parse("A,D").unwrap()).is_err());

        let u = tuple(&[("B", "1"), ("D", "3")]);
        assert_eq!(
            proj.merge(&u).unwrap(),
            tuple(&[("A", "0"), ("B", "1"), ("D", "3")])
        );
        let conflicting = tuple(&[("B", "9")]);
        assert!(proj.merge(&conflicting).is_err());
    }

    #[test]
    fn tuples_order_by_values_in_attribute_order() {
        let t00 = tuple(&[("A", "0"), ("B", "0")]);
        let t01 = tuple(&[("A", "0"), ("B", "1")]);
        let t10 = tuple(&[("A", "1"), ("B", "0")]);
        assert!(t00 < t01 && t01 < t10);
        assert_eq!(t01.to_string(), "(0,1)");
        assert_eq!(Tuple::empty().to_string(), "()");
    }
}

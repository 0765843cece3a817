//! Attribute names and ordered attribute sets.

use std::collections::btree_set;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A named column of a relation.
///
/// Names are free-form tokens with the grammar's structural characters
/// carved out: no whitespace, `,`, `|`, or `#`, no embedded `->>`, and the
/// lone underscore is reserved for the empty attribute list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attribute(String);

impl Attribute {
    /// Validates and wraps an attribute name.
    pub fn new(name: &str) -> Result<Self> {
        if name.is_empty() {
            return Err(Error::Syntax("empty attribute name".into()));
        }
        if name == "_" {
            return Err(Error::Syntax(
                "`_` denotes the empty attribute list and cannot name an attribute".into(),
            ));
        }
        if name.contains("->>") {
            return Err(Error::Syntax(format!(
                "attribute name `{name}` may not contain `->>`"
            )));
        }
        if let Some(c) = name
            .chars()
            .find(|c| c.is_whitespace() || matches!(c, ',' | '|' | '#'))
        {
            return Err(Error::Syntax(format!(
                "attribute name `{name}` contains reserved character `{c}`"
            )));
        }
        Ok(Attribute(name.to_string()))
    }

    /// The attribute's name.
    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered set of attributes.
///
/// Iteration always happens in the canonical (lexicographic) attribute
/// order; every place that needs a stable column or row order leans on
/// this.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttributeSet(BTreeSet<Attribute>);

impl AttributeSet {
    /// The empty attribute set.
    pub fn empty() -> Self {
        AttributeSet(BTreeSet::new())
    }

    /// Builds a set from string names, rejecting invalid or duplicate names.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for name in names {
            let attr = Attribute::new(name.as_ref())?;
            if !set.insert(attr) {
                return Err(Error::Syntax(format!(
                    "duplicate attribute `{}`",
                    name.as_ref()
                )));
            }
        }
        Ok(AttributeSet(set))
    }

    /// Builds a set from already-validated attributes (set semantics).
    pub fn from_attrs<I: IntoIterator<Item = Attribute>>(attrs: I) -> Self {
        AttributeSet(attrs.into_iter().collect())
    }

    /// Parses a comma-separated attribute list; `_` denotes the empty set.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "_" {
            return Ok(Self::empty());
        }
        if text.is_empty() {
            return Err(Error::Syntax(
                "empty attribute list (use `_` for the empty set)".into(),
            ));
        }
        Self::new(text.split(',').map(str::trim))
    }

    /// Set union.
    pub fn union(&self, other: &Self) -> Self {
        AttributeSet(self.0.union(&other.0).cloned().collect())
    }

    /// Set intersection.
    pub fn intersection(&self, other: &Self) -> Self {
        AttributeSet(self.0.intersection(&other.0).cloned().collect())
    }

    /// Set difference `self \ other`.
    pub fn difference(&self, other: &Self) -> Self {
        AttributeSet(self.0.difference(&other.0).cloned().collect())
    }

    /// Whether every attribute of `self` is in `other`.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Whether the two sets share no attribute.
    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Membership test.
    pub fn contains(&self, attr: &Attribute) -> bool {
        self.0.contains(attr)
    }

    /// Number of attributes.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Iterates in canonical order.
    pub fn iter(&self) -> btree_set::Iter<'_, Attribute> {
        self.0.iter()
    }

    /// Every subset of this set, in binary-counter order over the canonical
    /// element order (the empty set first, the full set last).
    ///
    /// Intended for small sets only; enumeration is exponential.
    pub fn subsets(&self) -> Vec<AttributeSet> {
        let elems: Vec<&Attribute> = self.0.iter().collect();
        let n = elems.len();
        assert!(n <= 24, "subset enumeration over {n} attributes");
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            let subset = elems
                .iter()
                .enumerate()
                .filter(|(j, _)| mask & (1 << j) != 0)
                .map(|(_, a)| (*a).clone())
                .collect();
            out.push(AttributeSet(subset));
        }
        out
    }
}

impl fmt::Display for AttributeSet {
    /// Comma-joined names in canonical order; `_` for the empty set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("_");
        }
        let mut first = true;
        for attr in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{attr}")?;
        }
        Ok(())
    }
}

impl FromIterator<Attribute> for AttributeSet {
    fn from_iter<I: IntoIterator<Item = Attribute>>(iter: I) -> Self {
        AttributeSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a AttributeSet {
    type Item = &'a Attribute;
    type IntoIter = btree_set::Iter<'a, Attribute>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

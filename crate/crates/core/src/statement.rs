//! Dependency statements and their grammar.

use std::fmt;

use crate::attr::AttributeSet;
use crate::error::{Error, Result};

/// The flavor of dependency a statement asserts.
///
/// The first two are properties of classic relations, the rest of weighted
/// ones:
///
/// - `Mvd`: multivalued dependency; the statement must cover the schema.
/// - `Emvd`: embedded MVD; judged on the projection onto its attributes.
/// - `Gmvd`: the weighted generalization of an MVD (the relation equals
///   its own monotone join across the split).
/// - `Gemvd`: embedded `Gmvd`, judged on the marginal.
/// - `Ci`: conditional independence; `X ->> Y | Z` is read as "Y and Z are
///   independent given X".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DependencyKind {
    /// Multivalued dependency over the full schema.
    Mvd,
    /// Embedded multivalued dependency.
    Emvd,
    /// Weighted multivalued dependency over the full schema.
    Gmvd,
    /// Embedded weighted multivalued dependency.
    Gemvd,
    /// Conditional independence of a weighted relation.
    Ci,
}

impl DependencyKind {
    /// Lowercase name, as used on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            DependencyKind::Mvd => "mvd",
            DependencyKind::Emvd => "emvd",
            DependencyKind::Gmvd => "gmvd",
            DependencyKind::Gemvd => "gemvd",
            DependencyKind::Ci => "ci",
        }
    }
}

impl fmt::Display for DependencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A dependency statement `X ->> Y | Z` over pairwise-disjoint attribute
/// sets, tagged with the [`DependencyKind`] it asserts.
///
/// The three components are conventionally called the left-hand side `X`,
/// the first component `Y`, and the second component `Z`. A statement is
/// *trivial* when `Y` or `Z` is empty; every checker accepts trivial
/// statements unconditionally.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DependencyStatement {
    lhs: AttributeSet,
    first: AttributeSet,
    second: AttributeSet,
    kind: DependencyKind,
}

impl DependencyStatement {
    /// Builds a statement, rejecting overlapping components.
    pub fn new(
        kind: DependencyKind,
        lhs: AttributeSet,
        first: AttributeSet,
        second: AttributeSet,
    ) -> Result<Self> {
        for (a, b, name) in [
            (&lhs, &first, "left-hand side and first component"),
            (&lhs, &second, "left-hand side and second component"),
            (&first, &second, "first and second component"),
        ] {
            if !a.is_disjoint(b) {
                return Err(Error::Validation(format!(
                    "attribute `{}` appears in both the {name}",
                    a.intersection(b).iter().next().expect("nonempty overlap")
                )));
            }
        }
        Ok(DependencyStatement {
            lhs,
            first,
            second,
            kind,
        })
    }

    /// Parses `X ->> Y | Z`, where each part is a comma-separated
    /// attribute list and `_` denotes the empty set.
    pub fn parse(text: &str, kind: DependencyKind) -> Result<Self> {
        let mut arrow = text.splitn(3, "->>");
        let lhs_text = arrow.next().expect("split yields at least one part");
        let rest = arrow.next().ok_or_else(|| {
            Error::Syntax(format!("expected `->>` in statement `{}`", text.trim()))
        })?;
        if arrow.next().is_some() {
            return Err(Error::Syntax(format!(
                "more than one `->>` in statement `{}`",
                text.trim()
            )));
        }
        let mut bar = rest.splitn(3, '|');
        let first_text = bar.next().expect("split yields at least one part");
        let second_text = bar.next().ok_or_else(|| {
            Error::Syntax(format!(
                "expected `|` after the first component in `{}`",
                text.trim()
            ))
        })?;
        if bar.next().is_some() {
            return Err(Error::Syntax(format!(
                "more than one `|` in statement `{}`",
                text.trim()
            )));
        }
        Self::new(
            kind,
            AttributeSet::parse(lhs_text)?,
            AttributeSet::parse(first_text)?,
            AttributeSet::parse(second_text)?,
        )
    }

    /// The kind of dependency asserted.
    pub fn kind(&self) -> DependencyKind {
        self.kind
    }

    /// The left-hand side `X`.
    pub fn lhs(&self) -> &AttributeSet {
        &self.lhs
    }

    /// The first component `Y`.
    pub fn first(&self) -> &AttributeSet {
        &self.first
    }

    /// The second component `Z`.
    pub fn second(&self) -> &AttributeSet {
        &self.second
    }

    /// The same triple asserted as a different kind.
    pub fn with_kind(&self, kind: DependencyKind) -> Self {
        DependencyStatement {
            kind,
            ..self.clone()
        }
    }

    /// Whether the statement holds vacuously (`Y` or `Z` empty).
    pub fn is_trivial(&self) -> bool {
        self.first.is_empty() || self.second.is_empty()
    }

    /// Union of the three components.
    pub fn attributes(&self) -> AttributeSet {
        self.lhs.union(&self.first).union(&self.second)
    }
}

impl fmt::Display for DependencyStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->> {} | {}", self.lhs, self.first, self.second)
    }
}

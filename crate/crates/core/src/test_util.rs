//! Shared helpers for unit tests: terse constructors for attribute sets,
//! tuples, and relations.

use crate::attr::AttributeSet;
use crate::relation::{ClassicRelation, WeightedRelation};
use crate::tuple::{Tuple, Value};
use crate::Rational;

pub(crate) fn attrs(s: &str) -> AttributeSet {
    AttributeSet::parse(s).unwrap()
}

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Builds a tuple over `schema`, pairing values with attributes in
/// canonical order.
pub(crate) fn row(schema: &AttributeSet, values: &[&str]) -> Tuple {
    assert_eq!(schema.len(), values.len());
    Tuple::new(
        schema
            .iter()
            .zip(values)
            .map(|(a, v)| (a.clone(), Value::new(v).unwrap())),
    )
    .unwrap()
}

pub(crate) fn classic(schema_str: &str, rows: &[&[&str]]) -> ClassicRelation {
    let schema = attrs(schema_str);
    let rows: Vec<Tuple> = rows.iter().map(|vals| row(&schema, vals)).collect();
    ClassicRelation::new(schema, rows).unwrap()
}

pub(crate) fn weighted(schema_str: &str, rows: &[(&[&str], Rational)]) -> WeightedRelation {
    let schema = attrs(schema_str);
    let rows: Vec<(Tuple, Rational)> = rows
        .iter()
        .map(|(vals, w)| (row(&schema, vals), w.clone()))
        .collect();
    WeightedRelation::new(schema, rows).unwrap()
}

/// A weighted relation over three binary attributes whose six distinct
/// weights make marginals easy to check by hand.
pub(crate) fn binary_cube() -> WeightedRelation {
    weighted(
        "A1,A2,A3",
        &[
            (&["0", "0", "0"], rat(1, 1)),
            (&["0", "0", "1"], rat(2, 1)),
            (&["0", "1", "0"], rat(3, 1)),
            (&["0", "1", "1"], rat(3, 1)),
            (&["1", "0", "0"], rat(4, 1)),
            (&["1", "0", "1"], rat(4, 1)),
            (&["1", "1", "0"], rat(5, 1)),
            (&["1", "1", "1"], rat(6, 1)),
        ],
    )
}

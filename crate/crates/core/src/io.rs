//! Line-oriented file formats for relations and statement sets.
//!
//! Relation files are UTF-8 text. The header line lists comma-separated
//! attribute names, optionally ending in the literal column `#weight`;
//! each following line carries one value per attribute plus, when the
//! weight column is present, an integer or `p/q` rational. A file
//! without a weight column reads as a constant relation of weight 1.
//! Lines starting with `#` are comments — with one exception: a header
//! consisting of the bare token `#weight` declares a relation over the
//! empty schema, whose rows are lone weights.
//!
//! Statement-set files come in two shapes: a plain list of statements
//! (one `X ->> Y | Z` per line), and the conditioned form opening with
//! `Z: <attributes>` where every following statement must condition on
//! exactly that set.
//!
//! Writers emit canonical attribute and row order, so equal relations
//! produce byte-identical files and every written file parses back to
//! the relation it came from.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::attr::{Attribute, AttributeSet};
use crate::error::{Error, Result};
use crate::implication::ZemvdSet;
use crate::relation::{ClassicRelation, WeightedRelation};
use crate::statement::{DependencyKind, DependencyStatement};
use crate::tuple::{Tuple, Value};
use crate::Rational;

/// Yields `(line_number, trimmed_text)` for every nonblank line.
fn significant_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty())
}

/// Parses an integer or `p/q` rational with a positive denominator.
/// Zero weights are rejected: files describe supports, and a zero row
/// is expressed by omitting it.
fn parse_weight(token: &str) -> Result<Rational> {
    let bad = || Error::Syntax(format!("malformed weight `{token}`"));
    let (numer_text, denom_text) = match token.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (token, None),
    };
    let numer: BigInt = numer_text.parse().map_err(|_| bad())?;
    let denom: BigInt = match denom_text {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if !denom.is_positive() {
        return Err(Error::Syntax(format!(
            "weight `{token}` must have a positive denominator"
        )));
    }
    if numer.is_zero() {
        return Err(Error::Syntax(
            "zero weights are not stored; omit the row instead".into(),
        ));
    }
    Ok(Rational::new(numer, denom))
}

/// Parses a relation file into an exact-weighted relation.
///
/// Errors carry the offending line number. Duplicate tuples are an
/// error rather than being merged, since a support file that repeats a
/// row is almost certainly corrupt.
pub fn parse_relation(input: &str) -> Result<WeightedRelation<Rational>> {
    let mut lines = significant_lines(input);
    // The header is the first significant non-comment line; the bare
    // token `#weight` is a header (empty schema), not a comment.
    let (header_line, header) = loop {
        match lines.next() {
            Some((_, line)) if line.starts_with('#') && line != "#weight" => continue,
            Some(found) => break found,
            None => {
                return Err(Error::Syntax(
                    "relation file has no header line".into(),
                ))
            }
        }
    };
    let tokens: Vec<&str> = header.split(',').map(str::trim).collect();
    let has_weights = tokens.last() == Some(&"#weight");
    let attr_tokens = if has_weights {
        &tokens[..tokens.len() - 1]
    } else {
        &tokens[..]
    };
    // Values bind to attributes in header order, which need not be the
    // canonical order the schema set imposes.
    let columns: Vec<Attribute> = attr_tokens
        .iter()
        .map(|t| Attribute::new(t).map_err(|e| e.at_line(header_line)))
        .collect::<Result<_>>()?;
    let schema = AttributeSet::new(attr_tokens.iter().copied()).map_err(|e| e.at_line(header_line))?;

    let mut rows = Vec::new();
    let mut seen: BTreeSet<Tuple> = BTreeSet::new();
    let expected = columns.len() + usize::from(has_weights);
    for (line_no, line) in lines {
        if line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != expected {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {expected} columns, found {}", cells.len()),
            });
        }
        let values: Vec<Value> = cells[..columns.len()]
            .iter()
            .map(|c| Value::new(c).map_err(|e| e.at_line(line_no)))
            .collect::<Result<_>>()?;
        let tuple = Tuple::new(columns.iter().cloned().zip(values))
            .map_err(|e| e.at_line(line_no))?;
        if !seen.insert(tuple.clone()) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate tuple {tuple}"),
            });
        }
        let weight = if has_weights {
            parse_weight(cells[columns.len()]).map_err(|e| e.at_line(line_no))?
        } else {
            Rational::one()
        };
        rows.push((tuple, weight));
    }
    WeightedRelation::new(schema, rows)
}

/// Writes a relation in the file format, always including the weight
/// column, with attributes and rows in canonical order.
pub fn write_relation(rel: &WeightedRelation<Rational>) -> String {
    let columns: Vec<&Attribute> = rel.schema().iter().collect();
    let mut out = String::new();
    for column in &columns {
        out.push_str(column.name());
        out.push(',');
    }
    out.push_str("#weight\n");
    for (tuple, weight) in rel.iter() {
        for column in &columns {
            out.push_str(tuple.get(column).expect("row matches schema").as_str());
            out.push(',');
        }
        out.push_str(&weight.to_string());
        out.push('\n');
    }
    out
}

/// Writes a classic relation: the same format minus the weight column.
pub fn write_classic(rel: &ClassicRelation) -> String {
    let columns: Vec<&Attribute> = rel.schema().iter().collect();
    let mut out = String::new();
    out.push_str(
        &columns
            .iter()
            .map(|c| c.name())
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for tuple in rel {
        let row: Vec<&str> = columns
            .iter()
            .map(|c| tuple.get(c).expect("row matches schema").as_str())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parses a plain statement list: one `X ->> Y | Z` per line, `#`
/// comments and blank lines ignored. Statements are read as embedded
/// dependencies.
pub fn parse_statement_list(input: &str) -> Result<Vec<DependencyStatement>> {
    significant_lines(input)
        .filter(|(_, line)| !line.starts_with('#'))
        .map(|(line_no, line)| {
            DependencyStatement::parse(line, DependencyKind::Emvd).map_err(|e| e.at_line(line_no))
        })
        .collect()
}

/// Parses a conditioned statement-set file: a `Z: <attributes>` line
/// (with `_` for the empty set) followed by statements that must all
/// condition on exactly that set.
pub fn parse_zemvd_set(input: &str) -> Result<ZemvdSet> {
    let mut lines = significant_lines(input).filter(|(_, line)| !line.starts_with('#'));
    let (first_line, first) = lines
        .next()
        .ok_or_else(|| Error::Syntax("statement-set file has no `Z:` line".into()))?;
    let Some(z_text) = first.strip_prefix("Z:") else {
        return Err(Error::Parse {
            line: first_line,
            msg: "expected the conditioning set as `Z: <attributes>`".into(),
        });
    };
    let z = AttributeSet::parse(z_text).map_err(|e| e.at_line(first_line))?;
    let mut statements = Vec::new();
    for (line_no, line) in lines {
        let stmt = DependencyStatement::parse(line, DependencyKind::Emvd)
            .map_err(|e| e.at_line(line_no))?;
        if stmt.second() != &z {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "statement is conditioned on {} rather than the declared {z}",
                    stmt.second()
                ),
            });
        }
        statements.push(stmt);
    }
    ZemvdSet::new(z, statements)
}

//! Dependency checkers.
//!
//! Classic relations are judged against multivalued dependencies (plain or
//! embedded); weighted relations against their weighted generalizations
//! and against conditional independence. The three MVD decision methods
//! are deliberately kept as distinct code paths — they are provably
//! equivalent, and the test suite leans on exactly that.

use std::collections::btree_set;
use std::collections::{BTreeMap, BTreeSet};

use crate::attr::AttributeSet;
use crate::error::{Error, Result};
use crate::relation::{ClassicRelation, WeightedRelation};
use crate::statement::DependencyStatement;
use crate::tuple::Tuple;
use crate::weight::Weight;

/// Which decision procedure [`check_mvd`] runs.
///
/// All three return the same verdict on every relation; they differ only
/// in how they get there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MvdMethod {
    /// Quantify over row pairs agreeing on `X` and demand the swapped
    /// row exists. Quadratic, but the closest to the definition.
    Definition,
    /// Group the `Z`-value sets by `X` and by `XY` and demand they match:
    /// the values of `Z` may depend on `X` only.
    ValueSets,
    /// Count value sets: for every row, `|YZ(x)| = |Z(xy)| · |Y(xz)|`.
    Counting,
}

/// The set of `target` values co-occurring with a fixed `key` tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSet {
    key: Tuple,
    values: BTreeSet<Tuple>,
}

impl ValueSet {
    /// The fixed tuple the set was collected against.
    pub fn key(&self) -> &Tuple {
        &self.key
    }

    /// Number of distinct target tuples.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Whether no row matched the key.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Membership test.
    pub fn contains(&self, t: &Tuple) -> bool {
        self.values.contains(t)
    }

    /// Iterates over the target tuples in canonical order.
    pub fn iter(&self) -> btree_set::Iter<'_, Tuple> {
        self.values.iter()
    }
}

/// Collects the distinct `target` restrictions of the rows of `r` that
/// agree with `key` on the key's attributes.
///
/// The key's attributes and `target` must both lie inside the schema and
/// may not overlap each other.
pub fn value_set(r: &ClassicRelation, key: &Tuple, target: &AttributeSet) -> Result<ValueSet> {
    let key_attrs = key.attributes();
    if !key_attrs.is_subset(r.schema()) {
        return Err(Error::Schema(format!(
            "key binds {} outside the schema {}",
            key_attrs.difference(r.schema()),
            r.schema()
        )));
    }
    if !target.is_subset(r.schema()) {
        return Err(Error::Schema(format!(
            "target attributes {} are outside the schema {}",
            target.difference(r.schema()),
            r.schema()
        )));
    }
    if !key_attrs.is_disjoint(target) {
        return Err(Error::Validation(format!(
            "key and target attributes overlap on {}",
            key_attrs.intersection(target)
        )));
    }
    let values = r
        .iter()
        .filter(|t| t.agrees_with(key, &key_attrs))
        .map(|t| t.project(target).expect("target within schema"))
        .collect();
    Ok(ValueSet {
        key: key.clone(),
        values,
    })
}

/// Decides the multivalued dependency `stmt` on `r` with the requested
/// method. The statement must cover the schema exactly; trivial
/// statements (empty `Y` or `Z`) hold unconditionally.
pub fn check_mvd(
    r: &ClassicRelation,
    stmt: &DependencyStatement,
    method: MvdMethod,
) -> Result<bool> {
    require_full_coverage(r.schema(), stmt)?;
    if stmt.is_trivial() {
        return Ok(true);
    }
    Ok(match method {
        MvdMethod::Definition => mvd_by_definition(r, stmt),
        MvdMethod::ValueSets => mvd_by_value_sets(r, stmt),
        MvdMethod::Counting => mvd_by_counting(r, stmt),
    })
}

/// Decides the embedded multivalued dependency `stmt` on `r`: the MVD on
/// the projection of `r` onto the statement's attributes.
pub fn check_emvd(r: &ClassicRelation, stmt: &DependencyStatement) -> Result<bool> {
    check_emvd_with(r, stmt, MvdMethod::ValueSets)
}

/// [`check_emvd`] with an explicit choice of MVD method.
pub fn check_emvd_with(
    r: &ClassicRelation,
    stmt: &DependencyStatement,
    method: MvdMethod,
) -> Result<bool> {
    let projected = r.project(&stmt.attributes())?;
    check_mvd(&projected, stmt, method)
}

/// Decides the weighted multivalued dependency: whether `phi` equals its
/// own monotone join across the statement's split.
///
/// Requires strictly positive weights and a statement covering the schema
/// exactly. Equality is exact on the whole row map, so a support mismatch
/// in either direction refutes the dependency.
pub fn check_gmvd<W: Weight>(
    phi: &WeightedRelation<W>,
    stmt: &DependencyStatement,
) -> Result<bool> {
    require_full_coverage(phi.schema(), stmt)?;
    require_strictly_positive(phi)?;
    if stmt.is_trivial() {
        return Ok(true);
    }
    let left = stmt.lhs().union(stmt.first());
    let right = stmt.lhs().union(stmt.second());
    Ok(phi.monotone_join(&left, &right)? == *phi)
}

/// Decides the embedded weighted multivalued dependency: [`check_gmvd`]
/// on the marginal onto the statement's attributes.
pub fn check_gemvd<W: Weight>(
    phi: &WeightedRelation<W>,
    stmt: &DependencyStatement,
) -> Result<bool> {
    require_embedded(phi.schema(), stmt)?;
    require_strictly_positive(phi)?;
    let marginal = phi.marginalize(&stmt.attributes())?;
    check_gmvd(&marginal, stmt)
}

/// Decides conditional independence: with `stmt` read as "`Y` and `Z` are
/// independent given `X`", whether the marginal onto `XYZ` factorizes as
///
/// ```text
/// φ(xyz) = φ_XY(xy) · φ_XZ(xz) / φ_X(x)
/// ```
///
/// pointwise. The factorization is tested over the natural join of the
/// `XY`- and `XZ`-marginal supports, so a tuple outside the support with
/// a nonzero right-hand side refutes independence.
///
/// Requires strictly positive weights; `XYZ` may sit anywhere inside the
/// schema. Deliberately implemented by pointwise arithmetic rather than
/// through the monotone join, so that the two routes can corroborate each
/// other.
pub fn check_ci<W: Weight>(phi: &WeightedRelation<W>, stmt: &DependencyStatement) -> Result<bool> {
    require_embedded(phi.schema(), stmt)?;
    require_strictly_positive(phi)?;
    if stmt.is_trivial() {
        return Ok(true);
    }
    let joint = phi.marginalize(&stmt.attributes())?;
    let xy = stmt.lhs().union(stmt.first());
    let xz = stmt.lhs().union(stmt.second());
    let phi_xy = joint.marginalize(&xy)?;
    let phi_xz = joint.marginalize(&xz)?;
    let phi_x = joint.marginalize(stmt.lhs())?;
    for row in phi_xy.support().natural_join(&phi_xz.support()).iter() {
        let lhs = joint.weight(row);
        let rhs = phi_xy.weight(&row.project(&xy).expect("xy within row"))
            * phi_xz.weight(&row.project(&xz).expect("xz within row"))
            / phi_x.weight(&row.project(stmt.lhs()).expect("x within row"));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

// ───────────────────────── decision procedures ─────────────────────────

fn mvd_by_definition(r: &ClassicRelation, stmt: &DependencyStatement) -> bool {
    let xy = stmt.lhs().union(stmt.first());
    for t1 in r {
        for t2 in r {
            if !t1.agrees_with(t2, stmt.lhs()) {
                continue;
            }
            let swapped = t1
                .project(&xy)
                .expect("xy within schema")
                .merge(&t2.project(stmt.second()).expect("z within schema"))
                .expect("disjoint parts merge");
            if !r.contains(&swapped) {
                return false;
            }
        }
    }
    true
}

fn mvd_by_value_sets(r: &ClassicRelation, stmt: &DependencyStatement) -> bool {
    let xy = stmt.lhs().union(stmt.first());
    let mut z_by_x: BTreeMap<Tuple, BTreeSet<Tuple>> = BTreeMap::new();
    let mut z_by_xy: BTreeMap<Tuple, BTreeSet<Tuple>> = BTreeMap::new();
    for t in r {
        let z = t.project(stmt.second()).expect("z within schema");
        z_by_x
            .entry(t.project(stmt.lhs()).expect("x within schema"))
            .or_default()
            .insert(z.clone());
        z_by_xy
            .entry(t.project(&xy).expect("xy within schema"))
            .or_default()
            .insert(z);
    }
    z_by_xy.iter().all(|(key, zs)| {
        let x = key.project(stmt.lhs()).expect("x within xy");
        zs == &z_by_x[&x]
    })
}

fn mvd_by_counting(r: &ClassicRelation, stmt: &DependencyStatement) -> bool {
    let xy = stmt.lhs().union(stmt.first());
    let xz = stmt.lhs().union(stmt.second());
    let yz = stmt.first().union(stmt.second());
    let mut yz_by_x: BTreeMap<Tuple, BTreeSet<Tuple>> = BTreeMap::new();
    let mut z_by_xy: BTreeMap<Tuple, BTreeSet<Tuple>> = BTreeMap::new();
    let mut y_by_xz: BTreeMap<Tuple, BTreeSet<Tuple>> = BTreeMap::new();
    for t in r {
        yz_by_x
            .entry(t.project(stmt.lhs()).expect("x within schema"))
            .or_default()
            .insert(t.project(&yz).expect("yz within schema"));
        z_by_xy
            .entry(t.project(&xy).expect("xy within schema"))
            .or_default()
            .insert(t.project(stmt.second()).expect("z within schema"));
        y_by_xz
            .entry(t.project(&xz).expect("xz within schema"))
            .or_default()
            .insert(t.project(stmt.first()).expect("y within schema"));
    }
    r.iter().all(|t| {
        let combined = yz_by_x[&t.project(stmt.lhs()).expect("x within schema")].len();
        let zs = z_by_xy[&t.project(&xy).expect("xy within schema")].len();
        let ys = y_by_xz[&t.project(&xz).expect("xz within schema")].len();
        combined == zs * ys
    })
}

// ───────────────────────────── validation ──────────────────────────────

fn require_full_coverage(schema: &AttributeSet, stmt: &DependencyStatement) -> Result<()> {
    let mentioned = stmt.attributes();
    if &mentioned == schema {
        return Ok(());
    }
    let extra = mentioned.difference(schema);
    if !extra.is_empty() {
        return Err(Error::Schema(format!(
            "statement mentions {extra} outside the schema {schema}"
        )));
    }
    Err(Error::Schema(format!(
        "statement must cover the schema exactly; {} not mentioned",
        schema.difference(&mentioned)
    )))
}

fn require_embedded(schema: &AttributeSet, stmt: &DependencyStatement) -> Result<()> {
    let mentioned = stmt.attributes();
    if mentioned.is_subset(schema) {
        return Ok(());
    }
    Err(Error::Schema(format!(
        "statement mentions {} outside the schema {schema}",
        mentioned.difference(schema)
    )))
}

fn require_strictly_positive<W: Weight>(phi: &WeightedRelation<W>) -> Result<()> {
    if let Some((t, w)) = phi.iter().find(|(_, w)| !w.is_positive()) {
        return Err(Error::Domain(format!(
            "weight {w} of row {t} is not strictly positive"
        )));
    }
    Ok(())
}

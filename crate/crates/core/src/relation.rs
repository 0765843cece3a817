//! Classic and weighted relations, and the algebra over them.
//!
//! A [`WeightedRelation`] maps each tuple of its support to a nonzero
//! weight; everything outside the stored rows implicitly weighs zero.
//! Classic relations are the weight-free special case and double as the
//! supports of weighted ones.

use std::collections::btree_map;
use std::collections::btree_set;
use std::collections::{BTreeMap, BTreeSet};

use crate::attr::AttributeSet;
use crate::error::{Error, Result};
use crate::tuple::Tuple;
use crate::weight::Weight;
use crate::Rational;

/// A classic relation: a set of tuples over a fixed schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicRelation {
    schema: AttributeSet,
    rows: BTreeSet<Tuple>,
}

impl ClassicRelation {
    /// Builds a relation, checking that every row binds exactly the schema.
    pub fn new<I: IntoIterator<Item = Tuple>>(schema: AttributeSet, rows: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for row in rows {
            check_row_schema(&row, &schema)?;
            set.insert(row);
        }
        Ok(ClassicRelation { schema, rows: set })
    }

    /// The empty relation over `schema`.
    pub fn empty(schema: AttributeSet) -> Self {
        ClassicRelation {
            schema,
            rows: BTreeSet::new(),
        }
    }

    /// The relation's schema.
    pub fn schema(&self) -> &AttributeSet {
        &self.schema
    }

    /// Iterates over the rows in canonical order.
    pub fn iter(&self) -> btree_set::Iter<'_, Tuple> {
        self.rows.iter()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Whether the relation has no rows.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Membership test.
    pub fn contains(&self, row: &Tuple) -> bool {
        self.rows.contains(row)
    }

    /// Projection onto `on ⊆ schema`: the set of row restrictions.
    pub fn project(&self, on: &AttributeSet) -> Result<ClassicRelation> {
        check_subschema(on, &self.schema)?;
        let rows = self
            .rows
            .iter()
            .map(|t| t.project(on).expect("projection within schema"))
            .collect();
        Ok(ClassicRelation {
            schema: on.clone(),
            rows,
        })
    }

    /// Natural join: all merges of rows that agree on the shared attributes.
    ///
    /// With disjoint schemas this degenerates to the Cartesian product.
    pub fn natural_join(&self, other: &ClassicRelation) -> ClassicRelation {
        let shared = self.schema.intersection(&other.schema);
        let schema = self.schema.union(&other.schema);
        let mut rows = BTreeSet::new();
        for left in &self.rows {
            for right in &other.rows {
                if left.agrees_with(right, &shared) {
                    rows.insert(left.merge(right).expect("joined tuples agree"));
                }
            }
        }
        ClassicRelation { schema, rows }
    }
}

impl<'a> IntoIterator for &'a ClassicRelation {
    type Item = &'a Tuple;
    type IntoIter = btree_set::Iter<'a, Tuple>;

    fn into_iter(self) -> Self::IntoIter {
        self.rows.iter()
    }
}

/// A weighted relation: a finite map from tuples to nonzero weights.
///
/// Zero-weight rows are dropped at construction, so the stored rows are
/// exactly the support and absent tuples read as weight zero. Two weighted
/// relations are equal iff their schemas and row maps are identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedRelation<W = Rational> {
    schema: AttributeSet,
    rows: BTreeMap<Tuple, W>,
}

impl<W: Weight> WeightedRelation<W> {
    /// Builds a relation from `(tuple, weight)` pairs.
    ///
    /// Rows must bind exactly the schema and no tuple may appear twice;
    /// zero-weight rows are silently dropped.
    pub fn new<I: IntoIterator<Item = (Tuple, W)>>(schema: AttributeSet, rows: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (row, weight) in rows {
            check_row_schema(&row, &schema)?;
            if map.insert(row.clone(), weight).is_some() {
                return Err(Error::Validation(format!("duplicate tuple {row}")));
            }
        }
        Ok(Self::from_map(schema, map))
    }

    /// The empty relation over `schema`.
    pub fn empty(schema: AttributeSet) -> Self {
        WeightedRelation {
            schema,
            rows: BTreeMap::new(),
        }
    }

    /// The constant relation assigning `weight` to every row of `support`.
    pub fn constant(support: &ClassicRelation, weight: W) -> Self {
        let map = support
            .iter()
            .map(|t| (t.clone(), weight.clone()))
            .collect();
        Self::from_map(support.schema().clone(), map)
    }

    /// Internal constructor: takes ownership of a row map and enforces the
    /// support invariant by dropping zero weights.
    fn from_map(schema: AttributeSet, map: BTreeMap<Tuple, W>) -> Self {
        let rows = map.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        WeightedRelation { schema, rows }
    }

    /// The relation's schema.
    pub fn schema(&self) -> &AttributeSet {
        &self.schema
    }

    /// Iterates over `(tuple, weight)` pairs in canonical row order.
    pub fn iter(&self) -> btree_map::Iter<'_, Tuple, W> {
        self.rows.iter()
    }

    /// Number of support rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Whether the support is empty.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The stored weight of `row`, if it is in the support.
    pub fn get(&self, row: &Tuple) -> Option<&W> {
        self.rows.get(row)
    }

    /// The weight of `row`, reading absent tuples as zero.
    pub fn weight(&self, row: &Tuple) -> W {
        self.rows.get(row).cloned().unwrap_or_else(W::zero)
    }

    /// The support as a classic relation.
    pub fn support(&self) -> ClassicRelation {
        ClassicRelation {
            schema: self.schema.clone(),
            rows: self.rows.keys().cloned().collect(),
        }
    }

    /// Sum of all weights (zero for the empty relation).
    pub fn total_weight(&self) -> W {
        self.rows
            .values()
            .fold(W::zero(), |acc, w| acc + w.clone())
    }

    /// Whether every stored weight is strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.rows.values().all(|w| w.is_positive())
    }

    /// Pointwise multiplication of every weight by `factor`.
    pub fn scale(&self, factor: &W) -> Self {
        let map = self
            .rows
            .iter()
            .map(|(t, w)| (t.clone(), w.clone() * factor.clone()))
            .collect();
        Self::from_map(self.schema.clone(), map)
    }

    /// Marginalization onto `onto ⊆ schema`: each reduced tuple receives
    /// the sum of the weights of the rows that restrict to it, and reduced
    /// tuples whose weights cancel to zero are dropped.
    ///
    /// Marginalizing onto the empty set yields the one-row relation over no
    /// attributes carrying the total weight (or the empty relation, if the
    /// total is zero).
    pub fn marginalize(&self, onto: &AttributeSet) -> Result<Self> {
        check_subschema(onto, &self.schema)?;
        let mut map: BTreeMap<Tuple, W> = BTreeMap::new();
        for (row, weight) in &self.rows {
            let key = row.project(onto).expect("projection within schema");
            match map.entry(key) {
                btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get().clone() + weight.clone();
                    *e.get_mut() = sum;
                }
                btree_map::Entry::Vacant(e) => {
                    e.insert(weight.clone());
                }
            }
        }
        Ok(Self::from_map(onto.clone(), map))
    }

    /// Product join: the natural join of the supports, each joined row
    /// weighted by the product of the two contributing weights.
    pub fn product_join(&self, other: &Self) -> Self {
        let shared = self.schema.intersection(&other.schema);
        let schema = self.schema.union(&other.schema);
        let mut map = BTreeMap::new();
        for (left, lw) in &self.rows {
            for (right, rw) in &other.rows {
                if left.agrees_with(right, &shared) {
                    let joined = left.merge(right).expect("joined tuples agree");
                    let prev = map.insert(joined, lw.clone() * rw.clone());
                    debug_assert!(prev.is_none(), "join produced a duplicate row");
                }
            }
        }
        Self::from_map(schema, map)
    }

    /// Pointwise reciprocal: every weight `w` becomes `1/w`.
    ///
    /// Total on the support invariant, every stored weight is nonzero, so
    /// the reciprocal is always defined and inversion is an involution.
    pub fn inverse(&self) -> Self {
        let map = self
            .rows
            .iter()
            .map(|(t, w)| (t.clone(), W::one() / w.clone()))
            .collect();
        Self::from_map(self.schema.clone(), map)
    }

    /// Monotone join of the relation with itself over `left` and `right`:
    ///
    /// ```text
    /// marginalize(left) ⊗ marginalize(right) ⊗ marginalize(left ∩ right)⁻¹
    /// ```
    ///
    /// where `⊗` is the product join. The result ranges over `left ∪ right`.
    /// With `left == right` this reproduces `marginalize(left)`, and with
    /// disjoint halves the shared marginal is the one-row relation over no
    /// attributes, so the halves multiply independently.
    pub fn monotone_join(&self, left: &AttributeSet, right: &AttributeSet) -> Result<Self> {
        let shared = left.intersection(right);
        let left_marginal = self.marginalize(left)?;
        let right_marginal = self.marginalize(right)?;
        let shared_inverse = self.marginalize(&shared)?.inverse();
        Ok(left_marginal
            .product_join(&right_marginal)
            .product_join(&shared_inverse))
    }
}

fn check_row_schema(row: &Tuple, schema: &AttributeSet) -> Result<()> {
    let attrs = row.attributes();
    if &attrs != schema {
        return Err(Error::Schema(format!(
            "row {row} binds attributes {attrs}, expected schema {schema}"
        )));
    }
    Ok(())
}

fn check_subschema(on: &AttributeSet, schema: &AttributeSet) -> Result<()> {
    if !on.is_subset(schema) {
        return Err(Error::Schema(format!(
            "attributes {} are not part of schema {schema}",
            on.difference(schema)
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{attrs, binary_cube, classic, rat, row, weighted};
    use num_traits::Zero;

    /// Independent marginalization oracle: group rows by their restriction
    /// and sum weights with a plain loop. Used to cross-check the library
    /// implementation on every example in this module.
    fn oracle_marginal(rel: &WeightedRelation, onto: &AttributeSet) -> Vec<(Tuple, Rational)> {
        let mut groups: Vec<(Tuple, Rational)> = Vec::new();
        for (t, w) in rel.iter() {
            let key = t.project(onto).unwrap();
            if let Some(entry) = groups.iter_mut().find(|(k, _)| *k == key) {
                entry.1 += w;
            } else {
                groups.push((key, w.clone()));
            }
        }
        groups.retain(|(_, w)| !w.is_zero());
        groups.sort_by(|(a, _), (b, _)| a.cmp(b));
        groups
    }

    fn assert_matches_oracle(rel: &WeightedRelation, onto: &str) {
        let onto = attrs(onto);
        let marginal = rel.marginalize(&onto).unwrap();
        let got: Vec<(Tuple, Rational)> =
            marginal.iter().map(|(t, w)| (t.clone(), w.clone())).collect();
        assert_eq!(got, oracle_marginal(rel, &onto));
    }

    #[test]
    fn marginal_of_binary_cube() {
        let phi = binary_cube();
        let marginal = phi.marginalize(&attrs("A1,A2")).unwrap();
        let expected = weighted(
            "A1,A2",
            &[
                (&["0", "0"], rat(3, 1)),
                (&["0", "1"], rat(6, 1)),
                (&["1", "0"], rat(8, 1)),
                (&["1", "1"], rat(11, 1)),
            ],
        );
        assert_eq!(marginal, expected);
        assert_matches_oracle(&phi, "A1,A2");
        assert_matches_oracle(&phi, "A1,A3");
        assert_matches_oracle(&phi, "A2");
        assert_matches_oracle(&phi, "A1,A2,A3");
    }

    #[test]
    fn marginal_onto_nothing_carries_the_total() {
        let phi = binary_cube();
        let marginal = phi.marginalize(&AttributeSet::empty()).unwrap();
        assert_eq!(marginal.len(), 1);
        assert_eq!(marginal.weight(&Tuple::empty()), rat(28, 1));
        assert_eq!(phi.total_weight(), rat(28, 1));

        let empty = WeightedRelation::<Rational>::empty(attrs("A,B"));
        assert!(empty
            .marginalize(&AttributeSet::empty())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn marginalization_cascades() {
        let phi = binary_cube();
        let via_pairs = phi
            .marginalize(&attrs("A1,A2"))
            .unwrap()
            .marginalize(&attrs("A1"))
            .unwrap();
        let direct = phi.marginalize(&attrs("A1")).unwrap();
        assert_eq!(via_pairs, direct);
        assert_eq!(direct.total_weight(), rat(28, 1));
    }

    #[test]
    fn cancelling_weights_leave_the_support() {
        let phi = weighted(
            "A,B",
            &[
                (&["0", "0"], rat(1, 1)),
                (&["0", "1"], rat(-1, 1)),
                (&["1", "0"], rat(2, 1)),
            ],
        );
        let marginal = phi.marginalize(&attrs("A")).unwrap();
        // The A=0 rows cancel exactly, so only A=1 survives.
        let expected = weighted("A", &[(&["1"], rat(2, 1))]);
        assert_eq!(marginal, expected);
        assert_matches_oracle(&phi, "A");
    }

    #[test]
    fn product_join_multiplies_factor_weights() {
        let phi = weighted(
            "A1,A2",
            &[
                (&["0", "0"], rat(1, 1)),
                (&["0", "1"], rat(2, 1)),
                (&["1", "0"], rat(3, 1)),
                (&["1", "1"], rat(4, 1)),
            ],
        );
        let psi = weighted(
            "A2,A3",
            &[
                (&["0", "0"], rat(1, 1)),
                (&["0", "1"], rat(1, 2)),
                (&["1", "0"], rat(1, 3)),
                (&["1", "1"], rat(1, 4)),
            ],
        );
        let joined = phi.product_join(&psi);
        // Every pair agreeing on A2 merges; weights multiply.
        let expected = weighted(
            "A1,A2,A3",
            &[
                (&["0", "0", "0"], rat(1, 1)),
                (&["0", "0", "1"], rat(1, 2)),
                (&["0", "1", "0"], rat(2, 3)),
                (&["0", "1", "1"], rat(1, 2)),
                (&["1", "0", "0"], rat(3, 1)),
                (&["1", "0", "1"], rat(3, 2)),
                (&["1", "1", "0"], rat(4, 3)),
                (&["1", "1", "1"], rat(1, 1)),
            ],
        );
        assert_eq!(joined, expected);
        // The support is exactly the natural join of the supports.
        assert_eq!(
            joined.support(),
            phi.support().natural_join(&psi.support())
        );
    }

    #[test]
    fn product_join_is_commutative_here() {
        let phi = binary_cube();
        let psi = weighted("A2", &[(&["0"], rat(1, 7)), (&["1"], rat(2, 1))]);
        assert_eq!(phi.product_join(&psi), psi.product_join(&phi));
    }

    #[test]
    fn inverse_takes_reciprocals_and_is_an_involution() {
        let phi = weighted("A", &[(&["0"], rat(3, 4)), (&["1"], rat(5, 1))]);
        let inv = phi.inverse();
        let expected = weighted("A", &[(&["0"], rat(4, 3)), (&["1"], rat(1, 5))]);
        assert_eq!(inv, expected);
        assert_eq!(inv.inverse(), phi);
        // Pointwise product with the inverse is constant one on the support.
        let ones = phi.product_join(&inv);
        assert_eq!(ones, WeightedRelation::constant(&phi.support(), rat(1, 1)));
    }

    #[test]
    fn monotone_join_reproduces_a_factorizable_relation() {
        // The uniform distribution over three binary attributes factorizes
        // across any split, so the monotone join must reproduce it exactly.
        let schema = attrs("A1,A2,A3");
        let rows: Vec<(Tuple, Rational)> = ["000", "001", "010", "011", "100", "101", "110", "111"]
            .iter()
            .map(|bits| {
                let vals: Vec<&str> = bits.split("").filter(|s| !s.is_empty()).collect();
                (row(&schema, &vals), rat(1, 8))
            })
            .collect();
        let phi = WeightedRelation::new(schema, rows).unwrap();
        let joined = phi
            .monotone_join(&attrs("A1,A2"), &attrs("A2,A3"))
            .unwrap();
        assert_eq!(joined, phi);
        assert_eq!(joined.total_weight(), rat(1, 1));
    }

    #[test]
    fn monotone_join_with_equal_halves_is_the_marginal() {
        let phi = binary_cube();
        let v = attrs("A1,A3");
        assert_eq!(
            phi.monotone_join(&v, &v).unwrap(),
            phi.marginalize(&v).unwrap()
        );
    }

    #[test]
    fn monotone_join_with_disjoint_halves_multiplies_marginals() {
        let phi = weighted(
            "A,B",
            &[
                (&["0", "0"], rat(1, 4)),
                (&["0", "1"], rat(1, 4)),
                (&["1", "0"], rat(1, 4)),
                (&["1", "1"], rat(1, 4)),
            ],
        );
        // The shared marginal is the one-row relation over no attributes
        // (total weight 1), so the two halves multiply independently.
        let joined = phi.monotone_join(&attrs("A"), &attrs("B")).unwrap();
        assert_eq!(joined, phi);
    }

    #[test]
    fn classic_projection_and_join() {
        let r = classic("A,B", &[&["0", "0"], &["0", "1"], &["1", "0"]]);
        let on_a = r.project(&attrs("A")).unwrap();
        assert_eq!(on_a, classic("A", &[&["0"], &["1"]]));
        assert!(r.project(&attrs("C")).is_err());

        // A relation that is the join of its own projections.
        let s = classic(
            "A,B,C",
            &[
                &["0", "0", "0"],
                &["0", "0", "1"],
                &["0", "1", "0"],
                &["0", "1", "1"],
            ],
        );
        let rebuilt = s
            .project(&attrs("A,B"))
            .unwrap()
            .natural_join(&s.project(&attrs("A,C")).unwrap());
        assert_eq!(rebuilt, s);

        // And one that is not: the join fills in the missing row.
        let t = classic("A,B,C", &[&["0", "0", "0"], &["0", "1", "1"]]);
        let filled = t
            .project(&attrs("A,B"))
            .unwrap()
            .natural_join(&t.project(&attrs("A,C")).unwrap());
        assert_eq!(filled.len(), 4);
        assert!(!t.contains(&row(&attrs("A,B,C"), &["0", "0", "1"])));
        assert!(filled.contains(&row(&attrs("A,B,C"), &["0", "0", "1"])));
    }

    #[test]
    fn join_with_disjoint_schemas_is_a_cartesian_product() {
        let r = classic("A", &[&["0"], &["1"]]);
        let s = classic("B", &[&["x"], &["y"], &["z"]]);
        assert_eq!(r.natural_join(&s).len(), 6);
    }

    #[test]
    fn construction_rejects_bad_rows() {
        let schema = attrs("A,B");
        let bad = row(&attrs("A,C"), &["0", "0"]);
        assert!(ClassicRelation::new(schema.clone(), [bad.clone()]).is_err());
        assert!(WeightedRelation::new(schema.clone(), [(bad, rat(1, 1))]).is_err());

        let t = row(&schema, &["0", "0"]);
        let dup = WeightedRelation::new(
            schema.clone(),
            [(t.clone(), rat(1, 1)), (t.clone(), rat(2, 1))],
        );
        assert!(dup.is_err());

        // Zero weights are dropped, not stored.
        let rel =
            WeightedRelation::new(schema, [(t.clone(), rat(0, 1))]).unwrap();
        assert!(rel.is_empty());
        assert_eq!(rel.weight(&t), rat(0, 1));
    }

    #[test]
    fn scale_and_support() {
        let phi = binary_cube();
        let doubled = phi.scale(&rat(2, 1));
        assert_eq!(doubled.total_weight(), rat(56, 1));
        assert_eq!(doubled.support(), phi.support());
        assert!(phi.scale(&rat(0, 1)).is_empty());
        assert!(phi.is_strictly_positive());
        assert!(!phi.scale(&rat(-1, 1)).is_strictly_positive());
    }

    #[test]
    fn float_weights_work_through_the_same_ops() {
        let schema = attrs("A,B");
        let rows = [
            (row(&schema, &["0", "0"]), 0.25_f64),
            (row(&schema, &["0", "1"]), 0.25),
            (row(&schema, &["1", "0"]), 0.5),
        ];
        let phi = crate::FloatRelation::new(schema, rows).unwrap();
        let marginal = phi.marginalize(&attrs("A")).unwrap();
        assert_eq!(marginal.weight(&row(&attrs("A"), &["0"])), 0.5);
        assert_eq!(marginal.weight(&row(&attrs("A"), &["1"])), 0.5);
        let inv = phi.inverse();
        assert_eq!(inv.weight(&row(phi.schema(), &["1", "0"])), 2.0);
    }
}

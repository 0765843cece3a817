//! Bounded brute-force search over small relations.
//!
//! The dependency checkers decide single statements; this module asks
//! the opposite question: is there a small relation satisfying one set
//! of statements while violating another? Enumeration is exhaustive up
//! to explicit bounds and completely deterministic, so a reported
//! counterexample is reproducible and the absence of one is an honest
//! "nothing within these bounds" — never a proof of implication.
//!
//! The same bounds drive a seeded generator of strictly positive exact
//! distributions, used to cross-check the weighted checkers against
//! each other on random inputs.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::attr::AttributeSet;
use crate::dependency::{check_emvd_with, MvdMethod};
use crate::error::{Error, Result};
use crate::io;
use crate::relation::{ClassicRelation, WeightedRelation};
use crate::statement::DependencyStatement;
use crate::tuple::{Tuple, Value};
use crate::Rational;

/// Largest tuple space the enumerator will consider; supports are
/// tracked as bits of a `u128`.
const MAX_TUPLE_SPACE: usize = 128;

/// Limits for the search: how many values per attribute, how large a
/// support, how many candidates to try, and the seed for randomized
/// generation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Number of distinct values each attribute ranges over.
    pub domain_size: usize,
    /// Largest support size enumerated.
    pub max_tuples: usize,
    /// Maximum number of candidate relations examined.
    pub max_candidates: usize,
    /// Seed for randomized generation; enumeration itself is seed-free.
    pub seed: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            domain_size: 2,
            max_tuples: 6,
            max_candidates: 1_000_000,
            seed: 0,
        }
    }
}

impl SearchBounds {
    fn validate(&self) -> Result<()> {
        if self.domain_size == 0 || self.max_tuples == 0 || self.max_candidates == 0 {
            return Err(Error::Validation(
                "domain size, tuple cap, and candidate cap must all be positive".into(),
            ));
        }
        Ok(())
    }
}

/// All tuples over `schema` with values `0..domain_size`, ordered by
/// value vector with attributes in canonical order (the last attribute
/// varies fastest).
fn tuple_space(schema: &AttributeSet, domain_size: usize) -> Result<Vec<Tuple>> {
    let size = match (domain_size as u128).checked_pow(schema.len() as u32) {
        Some(size) if size <= MAX_TUPLE_SPACE as u128 => size,
        Some(size) => {
            return Err(Error::Resource(format!(
                "tuple space holds {size} tuples (cap {MAX_TUPLE_SPACE})"
            )))
        }
        None => {
            return Err(Error::Resource(format!(
                "tuple space overflows even a u128 (cap {MAX_TUPLE_SPACE})"
            )))
        }
    };
    let values: Vec<Value> = (0..domain_size)
        .map(|v| Value::new(&v.to_string()).expect("digits are valid values"))
        .collect();
    let attrs: Vec<_> = schema.iter().cloned().collect();
    let mut space = Vec::with_capacity(size as usize);
    let mut indices = vec![0usize; attrs.len()];
    loop {
        let tuple = Tuple::new(
            attrs
                .iter()
                .cloned()
                .zip(indices.iter().map(|&i| values[i].clone())),
        )
        .expect("attributes are distinct");
        space.push(tuple);
        let mut pos = attrs.len();
        loop {
            if pos == 0 {
                return Ok(space);
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < domain_size {
                break;
            }
            indices[pos] = 0;
        }
    }
}

/// Deterministic stream of every nonempty relation over a schema whose
/// support has at most `max_tuples` rows, capped at `max_candidates`.
///
/// Supports are encoded as bitmasks over the tuple space and visited in
/// increasing mask order, so the stream is canonical: rerunning it
/// yields the same relations in the same order.
pub struct RelationEnumerator {
    schema: AttributeSet,
    tuples: Vec<Tuple>,
    mask: u128,
    last_mask: u128,
    max_tuples: u32,
    remaining: usize,
    space_complete: bool,
}

impl RelationEnumerator {
    /// Builds the stream, rejecting tuple spaces beyond the enumerable
    /// cap.
    pub fn new(schema: AttributeSet, bounds: &SearchBounds) -> Result<Self> {
        bounds.validate()?;
        let tuples = tuple_space(&schema, bounds.domain_size)?;
        let last_mask = if tuples.len() == MAX_TUPLE_SPACE {
            u128::MAX
        } else {
            (1u128 << tuples.len()) - 1
        };
        Ok(RelationEnumerator {
            schema,
            tuples,
            mask: 1,
            last_mask,
            max_tuples: bounds.max_tuples.min(MAX_TUPLE_SPACE) as u32,
            remaining: bounds.max_candidates,
            space_complete: false,
        })
    }

    /// Whether the stream ended because every support in bounds was
    /// visited, as opposed to hitting the candidate cap.
    pub fn space_complete(&self) -> bool {
        self.space_complete
    }
}

impl Iterator for RelationEnumerator {
    type Item = ClassicRelation;

    fn next(&mut self) -> Option<ClassicRelation> {
        // Oversized supports are skipped by adding the lowest set bit:
        // that carries over the trailing run of ones, and every mask in
        // between has strictly more bits set, so nothing eligible is
        // jumped over.
        while self.mask <= self.last_mask && self.mask.count_ones() > self.max_tuples {
            let low = self.mask & self.mask.wrapping_neg();
            match self.mask.checked_add(low) {
                Some(next) => self.mask = next,
                None => {
                    self.space_complete = true;
                    return None;
                }
            }
        }
        if self.mask > self.last_mask || self.mask == 0 {
            self.space_complete = true;
            return None;
        }
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let rows = self
            .tuples
            .iter()
            .enumerate()
            .filter(|(i, _)| self.mask & (1u128 << i) != 0)
            .map(|(_, t)| t.clone());
        let relation = ClassicRelation::new(self.schema.clone(), rows)
            .expect("rows are drawn from the schema's tuple space");
        match self.mask.checked_add(1) {
            Some(next) => self.mask = next,
            None => self.mask = 0, // flag exhaustion for the next call
        }
        Some(relation)
    }
}

/// How a bounded search ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A relation satisfying every premise and violating the target —
    /// re-verified through an independent checker before being emitted.
    Counterexample(ClassicRelation),
    /// Every relation in the bounded space was examined and none
    /// separates the premises from the target. Not a proof: only a
    /// sweep of this space.
    SatisfiedAll,
    /// The candidate cap stopped the search before the space was fully
    /// swept; nothing was found in the portion examined.
    Exhausted,
}

/// The result of a bounded search, with enough statistics to judge how
/// much of the space was covered.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    outcome: SearchOutcome,
    candidates_examined: usize,
    elapsed: Duration,
}

impl WitnessReport {
    /// How the search ended.
    pub fn outcome(&self) -> &SearchOutcome {
        &self.outcome
    }

    /// Number of candidate relations examined.
    pub fn candidates_examined(&self) -> usize {
        self.candidates_examined
    }

    /// Renders the report as deterministic text; timing is included
    /// only on request since it varies run to run.
    pub fn render_text(&self, include_timing: bool) -> String {
        let mut out = String::new();
        match &self.outcome {
            SearchOutcome::Counterexample(rel) => {
                out.push_str(&format!(
                    "outcome: counterexample after {} candidates\n",
                    self.candidates_examined
                ));
                out.push_str(&io::write_classic(rel));
            }
            SearchOutcome::SatisfiedAll => {
                out.push_str(&format!(
                    "outcome: no counterexample in the bounded space \
                     ({} candidates examined, space fully swept)\n",
                    self.candidates_examined
                ));
            }
            SearchOutcome::Exhausted => {
                out.push_str(&format!(
                    "outcome: candidate budget exhausted after {} candidates; \
                     the space was not fully swept\n",
                    self.candidates_examined
                ));
            }
        }
        if include_timing {
            out.push_str(&format!(
                "elapsed: {:.3} ms\n",
                self.elapsed.as_secs_f64() * 1e3
            ));
        }
        out
    }

    /// Machine-readable form with the same timing policy as
    /// [`render_text`](Self::render_text).
    pub fn to_json(&self, include_timing: bool) -> serde_json::Value {
        let outcome = match &self.outcome {
            SearchOutcome::Counterexample(_) => "counterexample",
            SearchOutcome::SatisfiedAll => "satisfied_all",
            SearchOutcome::Exhausted => "exhausted",
        };
        let mut obj = json!({
            "outcome": outcome,
            "candidates_examined": self.candidates_examined,
        });
        let map = obj.as_object_mut().expect("report json is an object");
        if let SearchOutcome::Counterexample(rel) = &self.outcome {
            let columns: Vec<_> = rel.schema().iter().collect();
            let rows: Vec<String> = rel
                .iter()
                .map(|t| {
                    columns
                        .iter()
                        .map(|c| t.get(c).expect("row matches schema").as_str())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            map.insert(
                "counterexample".into(),
                json!({ "schema": rel.schema().to_string(), "rows": rows }),
            );
        }
        if include_timing {
            map.insert(
                "elapsed_ms".into(),
                json!(self.elapsed.as_secs_f64() * 1e3),
            );
        }
        obj
    }
}

/// Searches the bounded space for a relation satisfying every statement
/// in `sigma` while violating `tau`, all judged as embedded
/// dependencies over the union of the mentioned attributes.
///
/// The first counterexample in canonical order is re-verified through
/// the pair-swap checker — a different decision procedure than the one
/// driving the search — before being reported; a disagreement would be
/// an internal defect, not a verdict.
pub fn find_witness(
    sigma: &[DependencyStatement],
    tau: &DependencyStatement,
    bounds: &SearchBounds,
) -> Result<WitnessReport> {
    let started = Instant::now();
    let mut universe = tau.attributes();
    for stmt in sigma {
        universe = universe.union(&stmt.attributes());
    }
    let mut enumerator = RelationEnumerator::new(universe, bounds)?;
    let mut examined = 0usize;
    for relation in enumerator.by_ref() {
        examined += 1;
        let satisfies_sigma = sigma
            .iter()
            .map(|s| check_emvd_with(&relation, s, MvdMethod::ValueSets))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|ok| ok);
        if !satisfies_sigma || check_emvd_with(&relation, tau, MvdMethod::ValueSets)? {
            continue;
        }
        // Independent re-verification before emitting.
        let mut confirmed = !check_emvd_with(&relation, tau, MvdMethod::Definition)?;
        for stmt in sigma {
            confirmed = confirmed && check_emvd_with(&relation, stmt, MvdMethod::Definition)?;
        }
        if !confirmed {
            return Err(Error::Internal(format!(
                "decision procedures disagree on candidate {relation:?}"
            )));
        }
        return Ok(WitnessReport {
            outcome: SearchOutcome::Counterexample(relation),
            candidates_examined: examined,
            elapsed: started.elapsed(),
        });
    }
    let outcome = if enumerator.space_complete() {
        SearchOutcome::SatisfiedAll
    } else {
        SearchOutcome::Exhausted
    };
    Ok(WitnessReport {
        outcome,
        candidates_examined: examined,
        elapsed: started.elapsed(),
    })
}

/// A strictly positive exact distribution over the full tuple space of
/// `schema`: integer weights are drawn per tuple from a seeded
/// generator, then normalized so the total is exactly 1.
pub fn random_distribution(
    schema: &AttributeSet,
    bounds: &SearchBounds,
) -> Result<WeightedRelation<Rational>> {
    bounds.validate()?;
    let space = tuple_space(schema, bounds.domain_size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let draws: Vec<u64> = space.iter().map(|_| rng.gen_range(1..=1000)).collect();
    let total: u64 = draws.iter().sum();
    let rows = space
        .into_iter()
        .zip(&draws)
        .map(|(t, &d)| (t, Rational::new(d.into(), total.into())));
    WeightedRelation::new(schema.clone(), rows.collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statement::DependencyKind;
    use crate::test_util::{attrs, classic};
    use num_traits::One;

    fn emvd(text: &str) -> DependencyStatement {
        DependencyStatement::parse(text, DependencyKind::Emvd).unwrap()
    }

    #[test]
    fn enumeration_is_canonical_and_counts_match() {
        let bounds = SearchBounds {
            max_tuples: 2,
            ..SearchBounds::default()
        };
        let mut stream = RelationEnumerator::new(attrs("A"), &bounds).unwrap();
        let yielded: Vec<_> = stream.by_ref().collect();
        assert_eq!(
            yielded,
            vec![
                classic("A", &[&["0"]]),
                classic("A", &[&["1"]]),
                classic("A", &[&["0"], &["1"]]),
            ]
        );
        assert!(stream.space_complete());

        let all = RelationEnumerator::new(attrs("A,B"), &SearchBounds::default())
            .unwrap()
            .count();
        assert_eq!(all, 15); // every nonempty subset of a 4-tuple space

        let singletons = RelationEnumerator::new(
            attrs("A,B"),
            &SearchBounds {
                max_tuples: 1,
                ..SearchBounds::default()
            },
        )
        .unwrap()
        .count();
        assert_eq!(singletons, 4);
    }

    #[test]
    fn candidate_cap_stops_the_stream_early() {
        let bounds = SearchBounds {
            max_candidates: 5,
            ..SearchBounds::default()
        };
        let mut stream = RelationEnumerator::new(attrs("A,B"), &bounds).unwrap();
        assert_eq!(stream.by_ref().count(), 5);
        assert!(!stream.space_complete());
    }

    #[test]
    fn oversized_spaces_and_degenerate_bounds_are_rejected() {
        let wide = attrs("A,B,C,D,E,F,G,H"); // 2^8 = 256 tuples
        assert!(matches!(
            RelationEnumerator::new(wide, &SearchBounds::default()),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            RelationEnumerator::new(
                attrs("A"),
                &SearchBounds {
                    max_tuples: 0,
                    ..SearchBounds::default()
                }
            ),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn first_counterexample_is_frozen_and_deterministic() {
        // With no premises, the first relation violating A ->> B | C in
        // canonical order is the sixth candidate: two rows agreeing on
        // A whose swap is missing.
        let report = find_witness(&[], &emvd("A ->> B | C"), &SearchBounds::default()).unwrap();
        let expected = classic("A,B,C", &[&["0", "0", "1"], &["0", "1", "0"]]);
        assert_eq!(
            report.outcome(),
            &SearchOutcome::Counterexample(expected)
        );
        assert_eq!(report.candidates_examined(), 6);

        let again = find_witness(&[], &emvd("A ->> B | C"), &SearchBounds::default()).unwrap();
        assert_eq!(report.render_text(false), again.render_text(false));
        assert_eq!(report.to_json(false), again.to_json(false));
        assert!(report.render_text(false).contains("0,1,0"));
    }

    #[test]
    fn symmetry_never_produces_a_counterexample() {
        let report = find_witness(
            &[emvd("A ->> B | C")],
            &emvd("A ->> C | B"),
            &SearchBounds::default(),
        )
        .unwrap();
        assert_eq!(report.outcome(), &SearchOutcome::SatisfiedAll);
        // All supports of size 1..=6 over the 8-tuple space.
        assert_eq!(report.candidates_examined(), 246);
    }

    #[test]
    fn cyclic_family_reverse_statement_has_no_small_counterexample() {
        let family = crate::implication::CyclicFamily::build(3, 1, 1).unwrap();
        let bounds = SearchBounds {
            max_tuples: 4,
            ..SearchBounds::default()
        };
        let report = find_witness(
            &family.statements(),
            &emvd("X1a ->> X0a | Z0"),
            &bounds,
        )
        .unwrap();
        assert_eq!(report.outcome(), &SearchOutcome::SatisfiedAll);
    }

    #[test]
    fn exhaustion_is_reported_when_the_cap_bites() {
        let bounds = SearchBounds {
            max_candidates: 10,
            ..SearchBounds::default()
        };
        let report = find_witness(
            &[emvd("A ->> B | C")],
            &emvd("A ->> C | B"),
            &bounds,
        )
        .unwrap();
        assert_eq!(report.outcome(), &SearchOutcome::Exhausted);
        assert_eq!(report.candidates_examined(), 10);
        assert!(report.render_text(false).contains("not fully swept"));
    }

    #[test]
    fn random_distributions_are_positive_normalized_and_seeded() {
        let phi = random_distribution(&attrs("A"), &SearchBounds::default()).unwrap();
        assert_eq!(phi.len(), 2);
        assert!(phi.is_strictly_positive());
        assert!(phi.total_weight().is_one());

        let same = random_distribution(&attrs("A"), &SearchBounds::default()).unwrap();
        assert_eq!(phi, same);
        let other = random_distribution(
            &attrs("A"),
            &SearchBounds {
                seed: 1,
                ..SearchBounds::default()
            },
        )
        .unwrap();
        assert_ne!(phi, other);

        for seed in 0..100 {
            let phi = random_distribution(
                &attrs("A,B,C"),
                &SearchBounds {
                    seed,
                    ..SearchBounds::default()
                },
            )
            .unwrap();
            assert_eq!(phi.len(), 8);
            assert!(phi.total_weight().is_one());
            assert!(phi.is_strictly_positive());
        }
    }
}

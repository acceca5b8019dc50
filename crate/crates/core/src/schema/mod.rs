//! Theory schemata: a state carrier, a set of kinematically possible maps and
//! a discrete time grid `t_0 .. t_N`.
//!
//! Two flavours implement [`Schema`]:
//!
//! * [`TheorySchema`]: finite state sets with explicit map tables. Every check
//!   is exhaustive and exact.
//! * metric schemata (see [`crate::quantum::UnitarySchema`]): states in a
//!   normed carrier, equality up to a tolerance and a kinematic set given by a
//!   membership predicate plus a declared probe set. Checks over such schemata
//!   are sampled and their verdicts say so.
//!
//! Maps compose right-to-left: `compose(outer, inner)` is `outer ∘ inner`.

mod finite;
mod group;

pub use finite::{
    FiniteStateSpace, KinematicMap, MapEntry, SchemaDocument, StateMap, TheorySchema,
};
pub use group::{
    candidate_similarity_group, generate_group, is_group, maximal_similarity_group, orbits,
    GroupSearch, SimilarityGroup, DEFAULT_MAX_GROUP_STATES,
};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;

/// Default tolerance for equality in metric schemata.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// How much of the kinematic set a verdict actually looked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Every kinematic map was checked.
    Exhaustive,
    /// Only a declared probe set was checked ("sampled evidence").
    Sampled { probes: usize },
}

impl Evidence {
    pub fn is_sampled(&self) -> bool {
        matches!(self, Evidence::Sampled { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Evidence::Exhaustive => "exhaustive",
            Evidence::Sampled { .. } => "sampled evidence",
        }
    }
}

/// Which side of a conjugation left the kinematic set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `V_out D V_in⁻¹ ∉ 𝒦`
    Forward,
    /// `V_out⁻¹ D V_in ∉ 𝒦`
    Backward,
}

/// Why a candidate fails Property S or Property S_ext.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotInjective {
        first: usize,
        second: usize,
        image: usize,
    },
    NotInvertible {
        detail: String,
    },
    /// Conjugating a kinematic map produced something outside 𝒦. `interval`
    /// is `Some(k)` for the S_ext check on `t_k → t_{k+1}`.
    Escapes {
        interval: Option<usize>,
        probe: usize,
        probe_name: String,
        direction: Direction,
    },
    /// Element `index` of an extended similarity fails Property S.
    ElementFails {
        index: usize,
        cause: Box<Violation>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInjective {
                first,
                second,
                image,
            } => write!(f, "states {first} and {second} both map to {image}"),
            Violation::NotInvertible { detail } => write!(f, "not invertible: {detail}"),
            Violation::Escapes {
                interval,
                probe_name,
                direction,
                ..
            } => {
                let form = match direction {
                    Direction::Forward => "V' D V⁻¹",
                    Direction::Backward => "V'⁻¹ D V",
                };
                match interval {
                    Some(k) => write!(
                        f,
                        "interval {k}->{}: {form} leaves 𝒦 for D = {probe_name}",
                        k + 1
                    ),
                    None => write!(f, "{form} leaves 𝒦 for D = {probe_name}"),
                }
            }
            Violation::ElementFails { index, cause } => {
                write!(f, "V_{index} fails Property S: {cause}")
            }
        }
    }
}

/// Outcome of a Property S / S_ext check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Violation>,
}

impl Verdict {
    fn pass(evidence: Evidence) -> Self {
        Verdict {
            holds: true,
            evidence,
            witness: None,
        }
    }

    fn fail(evidence: Evidence, witness: Violation) -> Self {
        Verdict {
            holds: false,
            evidence,
            witness: Some(witness),
        }
    }
}

/// A state carrier together with its kinematically possible maps.
///
/// Similarity candidates share the map representation: for finite schemata
/// they are assignment tables, for unitary schemata they are unitaries.
pub trait Schema: Sync {
    type State: Clone + Send + Sync + fmt::Debug;
    type Map: Clone + Send + Sync + fmt::Debug;

    /// Number of time intervals N.
    fn n_steps(&self) -> usize;
    fn is_reversible(&self) -> bool;
    fn evidence(&self) -> Evidence;

    fn check_state(&self, x: &Self::State) -> Result<()>;
    fn apply(&self, map: &Self::Map, x: &Self::State) -> Self::State;
    /// `outer ∘ inner`.
    fn compose(&self, outer: &Self::Map, inner: &Self::Map) -> Self::Map;
    fn invert(&self, map: &Self::Map) -> Option<Self::Map>;
    fn identity(&self) -> Self::Map;
    fn is_kinematic(&self, map: &Self::Map) -> bool;

    fn same_state(&self, a: &Self::State, b: &Self::State) -> bool;
    fn same_map(&self, a: &Self::Map, b: &Self::Map) -> bool;

    /// `Err` when `v` is not a total map on the state set, `Ok(Some(_))` when
    /// it is total but not a bijection.
    fn bijection_defect(&self, v: &Self::Map) -> Result<Option<Violation>>;

    /// Kinematic maps Property S is checked against: all of 𝒦 for explicit
    /// schemata, the declared probe set otherwise.
    fn probes(&self) -> Vec<(&str, &Self::Map)>;

    /// A kinematic map carrying `from` to `to`, if one exists.
    fn transport(&self, from: &Self::State, to: &Self::State) -> Option<Self::Map>;

    fn is_transitive(&self) -> bool;

    fn describe_state(&self, x: &Self::State) -> String;
}

/// An initial state plus one evolution map per interval: `(x₀, D⃗)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance<X, M> {
    pub x0: X,
    pub maps: Vec<M>,
}

impl<X, M> Instance<X, M> {
    pub fn new(x0: X, maps: Vec<M>) -> Self {
        Instance { x0, maps }
    }
}

/// The induced state sequence `(x₀, …, x_N)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory<X> {
    pub states: Vec<X>,
}

impl<X> Trajectory<X> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn final_state(&self) -> &X {
        self.states.last().expect("trajectory holds at least x0")
    }
}

pub fn validate_instance<S: Schema>(
    schema: &S,
    instance: &Instance<S::State, S::Map>,
) -> Result<()> {
    if instance.maps.len() != schema.n_steps() {
        return Err(Error::LengthMismatch {
            got: instance.maps.len(),
            expected: schema.n_steps(),
        });
    }
    schema.check_state(&instance.x0)?;
    for (step, d) in instance.maps.iter().enumerate() {
        if !schema.is_kinematic(d) {
            return Err(Error::NotKinematic { step });
        }
    }
    Ok(())
}

/// Applies `D_{k+1,k}` step by step, starting from `x₀`.
pub fn run_instance<S: Schema>(
    schema: &S,
    instance: &Instance<S::State, S::Map>,
) -> Result<Trajectory<S::State>> {
    validate_instance(schema, instance)?;
    let mut states = Vec::with_capacity(instance.maps.len() + 1);
    states.push(instance.x0.clone());
    for d in &instance.maps {
        let next = schema.apply(d, states.last().expect("nonempty"));
        states.push(next);
    }
    Ok(Trajectory { states })
}

/// Two-index map `D_{k,j}` carrying `x_j` to `x_k` in a reversible schema.
pub fn span_map<S: Schema>(
    schema: &S,
    instance: &Instance<S::State, S::Map>,
    k: usize,
    j: usize,
) -> Result<S::Map> {
    if !schema.is_reversible() {
        return Err(Error::NotReversible);
    }
    let n = instance.maps.len();
    for idx in [k, j] {
        if idx > n {
            return Err(Error::StateOutOfRange {
                index: idx,
                len: n + 1,
            });
        }
    }
    let forward = |hi: usize, lo: usize| {
        instance.maps[lo..hi]
            .iter()
            .fold(schema.identity(), |acc, d| schema.compose(d, &acc))
    };
    if k >= j {
        Ok(forward(k, j))
    } else {
        schema.invert(&forward(j, k)).ok_or(Error::NotReversible)
    }
}

/// First probe `D` (in probe order) for which `outer D inner⁻¹` or
/// `outer⁻¹ D inner` leaves 𝒦.
fn first_escape<S: Schema>(
    schema: &S,
    outer: &S::Map,
    inner: &S::Map,
    interval: Option<usize>,
) -> Option<Violation> {
    let (outer_inv, inner_inv) = match (schema.invert(outer), schema.invert(inner)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Some(Violation::NotInvertible {
                detail: "similarity has no inverse".into(),
            })
        }
    };
    let probes = schema.probes();
    par::find_map_first(probes.len(), |i| {
        let (name, d) = probes[i];
        let forward = schema.compose(outer, &schema.compose(d, &inner_inv));
        let direction = if !schema.is_kinematic(&forward) {
            Direction::Forward
        } else {
            let backward = schema.compose(&outer_inv, &schema.compose(d, inner));
            if schema.is_kinematic(&backward) {
                return None;
            }
            Direction::Backward
        };
        Some(Violation::Escapes {
            interval,
            probe: i,
            probe_name: name.to_string(),
            direction,
        })
    })
}

/// Property S: `v` is a bijection and `D ↦ V D V⁻¹` maps 𝒦 onto 𝒦.
pub fn check_property_s<S: Schema>(schema: &S, v: &S::Map) -> Result<Verdict> {
    let evidence = schema.evidence();
    if let Some(defect) = schema.bijection_defect(v)? {
        return Ok(Verdict::fail(evidence, defect));
    }
    Ok(match first_escape(schema, v, v, None) {
        Some(w) => Verdict::fail(evidence, w),
        None => Verdict::pass(evidence),
    })
}

/// Property S_ext: every `V_k` passes Property S and, for every interval,
/// `D ↦ V_{k+1} D V_k⁻¹` maps 𝒦 onto 𝒦.
pub fn check_property_s_ext<S: Schema>(schema: &S, seq: &[S::Map]) -> Result<Verdict> {
    if seq.len() != schema.n_steps() + 1 {
        return Err(Error::LengthMismatch {
            got: seq.len(),
            expected: schema.n_steps() + 1,
        });
    }
    let evidence = schema.evidence();
    for (index, v) in seq.iter().enumerate() {
        let verdict = check_property_s(schema, v)?;
        if let Some(cause) = verdict.witness {
            return Ok(Verdict::fail(
                evidence,
                Violation::ElementFails {
                    index,
                    cause: Box::new(cause),
                },
            ));
        }
    }
    for k in 0..seq.len() - 1 {
        if let Some(w) = first_escape(schema, &seq[k + 1], &seq[k], Some(k)) {
            return Ok(Verdict::fail(evidence, w));
        }
    }
    Ok(Verdict::pass(evidence))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic3(n_steps: usize) -> TheorySchema {
        TheorySchema::cyclic(3, n_steps).unwrap()
    }

    #[test]
    fn identity_run_is_constant() {
        let s = cyclic3(2);
        let id = StateMap::identity(3);
        let traj = run_instance(&s, &Instance::new(0, vec![id.clone(), id])).unwrap();
        assert_eq!(traj.states, vec![0, 0, 0]);
    }

    #[test]
    fn cyclic_run_walks_the_cycle() {
        let s = cyclic3(2);
        let c = s.map(1).action.clone();
        assert_eq!(c.images(), &[1, 2, 0]);
        let traj = run_instance(&s, &Instance::new(0, vec![c.clone(), c])).unwrap();
        assert_eq!(traj.states, vec![0, 1, 2]);
    }

    #[test]
    fn run_rejects_foreign_map_and_bad_length() {
        let s = cyclic3(2);
        let swap = StateMap::new(vec![1, 0, 2], 3).unwrap();
        let id = StateMap::identity(3);
        assert_eq!(
            run_instance(&s, &Instance::new(0, vec![id.clone(), swap])),
            Err(Error::NotKinematic { step: 1 })
        );
        assert_eq!(
            run_instance(&s, &Instance::new(0, vec![id.clone()])),
            Err(Error::LengthMismatch {
                got: 1,
                expected: 2
            })
        );
        assert_eq!(
            run_instance(&s, &Instance::new(7, vec![id.clone(), id])),
            Err(Error::StateOutOfRange { index: 7, len: 3 })
        );
    }

    #[test]
    fn span_maps_compose_for_every_triple() {
        let s = TheorySchema::symmetric(3, 3).unwrap();
        let maps = vec![
            s.map(1).action.clone(),
            s.map(4).action.clone(),
            s.map(3).action.clone(),
        ];
        let inst = Instance::new(2, maps);
        let traj = run_instance(&s, &inst).unwrap();
        for j in 0..=3 {
            for k in 0..=3 {
                let dkj = span_map(&s, &inst, k, j).unwrap();
                assert_eq!(dkj.image(traj.states[j]), traj.states[k]);
                for l in 0..=3 {
                    let dkl = span_map(&s, &inst, k, l).unwrap();
                    let dlj = span_map(&s, &inst, l, j).unwrap();
                    assert_eq!(dkj, dkl.compose(&dlj), "k={k} l={l} j={j}");
                }
            }
        }
        assert_eq!(span_map(&s, &inst, 2, 2).unwrap(), StateMap::identity(3));
    }

    #[test]
    fn span_map_needs_reversible_schema() {
        let s = TheorySchema::new(
            FiniteStateSpace::indexed(2),
            vec![KinematicMap::new(
                "collapse",
                StateMap::new(vec![0, 0], 2).unwrap(),
            )],
            false,
            1,
        )
        .unwrap();
        let inst = Instance::new(1, vec![s.map(0).action.clone()]);
        assert_eq!(span_map(&s, &inst, 1, 0), Err(Error::NotReversible));
    }

    #[test]
    fn identity_always_passes_property_s() {
        for s in [cyclic3(1), TheorySchema::symmetric(3, 1).unwrap()] {
            let v = check_property_s(&s, &StateMap::identity(3)).unwrap();
            assert!(v.holds);
            assert_eq!(v.evidence, Evidence::Exhaustive);
        }
    }

    #[test]
    fn constant_map_fails_with_injectivity_witness() {
        let s = cyclic3(1);
        let v = check_property_s(&s, &StateMap::new(vec![0, 0, 0], 3).unwrap()).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Violation::NotInjective {
                first: 0,
                second: 1,
                image: 0
            })
        );
    }

    #[test]
    fn non_total_candidate_is_an_error() {
        let s = cyclic3(1);
        let short = StateMap::from_images(vec![0, 1]);
        assert!(check_property_s(&s, &short).is_err());
    }

    #[test]
    fn transposition_conjugates_cycle_to_its_inverse() {
        // (0 1) c (0 1) = c⁻¹, still a rotation.
        let s = cyclic3(1);
        let t = StateMap::new(vec![1, 0, 2], 3).unwrap();
        assert!(check_property_s(&s, &t).unwrap().holds);
    }

    #[test]
    fn property_s_ext_length_and_constant_sequences() {
        let s = cyclic3(2);
        let id = StateMap::identity(3);
        assert!(check_property_s_ext(&s, std::slice::from_ref(&id)).is_err());
        assert!(
            check_property_s_ext(&s, &[id.clone(), id.clone(), id])
                .unwrap()
                .holds
        );
        let t = StateMap::new(vec![1, 0, 2], 3).unwrap();
        assert!(
            check_property_s_ext(&s, &[t.clone(), t.clone(), t])
                .unwrap()
                .holds
        );
    }

    #[test]
    fn property_s_ext_reports_interval() {
        // (1, t): t D 1⁻¹ = t D, and t·identity = t is not a rotation.
        let s = cyclic3(1);
        let t = StateMap::new(vec![1, 0, 2], 3).unwrap();
        let v = check_property_s_ext(&s, &[StateMap::identity(3), t]).unwrap();
        assert!(!v.holds);
        match v.witness.unwrap() {
            Violation::Escapes {
                interval,
                direction,
                ..
            } => {
                assert_eq!(interval, Some(0));
                assert_eq!(direction, Direction::Forward);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }
}

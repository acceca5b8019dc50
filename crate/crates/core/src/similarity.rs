//! Spectacles, interpretational statements and the triviality theorem.
//!
//! An [`ExtendedSimilarity`] `(V₀, …, V_N)` turns an instance `(x₀, D⃗)` into
//! `(V₀x₀, (V₁D₁V₀⁻¹, …, V_N D_N V_{N-1}⁻¹))`. A [`Proposition`] is a
//! two-valued predicate ("true" or "not true") over states or instances, and
//! [`check_invariance`] classifies it against a set of spectacles.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use crate::schema::{
    candidate_similarity_group, check_property_s_ext, maximal_similarity_group, orbits,
    run_instance, validate_instance, Instance, Schema, StateMap, TheorySchema, Verdict,
    DEFAULT_MAX_GROUP_STATES,
};

/// Time-dependent spectacles `(V₀, …, V_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedSimilarity<M> {
    pub maps: Vec<M>,
}

impl<M: Clone> ExtendedSimilarity<M> {
    pub fn new(maps: Vec<M>) -> Self {
        ExtendedSimilarity { maps }
    }

    /// Time-independent spectacles `(V, …, V)` over `n_steps` intervals.
    pub fn constant(v: M, n_steps: usize) -> Self {
        ExtendedSimilarity {
            maps: vec![v; n_steps + 1],
        }
    }

    pub fn identity<S: Schema<Map = M>>(schema: &S) -> Self {
        Self::constant(schema.identity(), schema.n_steps())
    }

    /// Pointwise `(W_k V_k)`: viewing through `self` first, then `outer`.
    pub fn then<S: Schema<Map = M>>(&self, schema: &S, outer: &Self) -> Self {
        ExtendedSimilarity {
            maps: self
                .maps
                .iter()
                .zip(&outer.maps)
                .map(|(v, w)| schema.compose(w, v))
                .collect(),
        }
    }

    pub fn check<S: Schema<Map = M>>(&self, schema: &S) -> Result<Verdict> {
        check_property_s_ext(schema, &self.maps)
    }
}

/// Applies spectacles to an instance. Fails if a transformed map leaves 𝒦,
/// which means the spectacles violate Property S_ext.
pub fn transform_instance<S: Schema>(
    schema: &S,
    spectacles: &ExtendedSimilarity<S::Map>,
    instance: &Instance<S::State, S::Map>,
) -> Result<Instance<S::State, S::Map>> {
    validate_instance(schema, instance)?;
    let v = &spectacles.maps;
    if v.len() != instance.maps.len() + 1 {
        return Err(Error::LengthMismatch {
            got: v.len(),
            expected: instance.maps.len() + 1,
        });
    }
    let x0 = schema.apply(&v[0], &instance.x0);
    let mut maps = Vec::with_capacity(instance.maps.len());
    for (k, d) in instance.maps.iter().enumerate() {
        let prev_inv = schema
            .invert(&v[k])
            .ok_or_else(|| Error::InvalidParameter(format!("spectacle V_{k} is not invertible")))?;
        let t = schema.compose(&v[k + 1], &schema.compose(d, &prev_inv));
        if !schema.is_kinematic(&t) {
            return Err(Error::TransformEscapes { interval: k });
        }
        maps.push(t);
    }
    Ok(Instance { x0, maps })
}

/// Two-valued truth: a statement is either true or not true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    True,
    NotTrue,
}

impl Truth {
    pub fn is_true(self) -> bool {
        self == Truth::True
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::NotTrue
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::NotTrue => "not true",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Arity {
    State,
    Instance,
}

type StatePredicate<S> =
    dyn Fn(&S, &<S as Schema>::State) -> std::result::Result<Truth, String> + Send + Sync;
type InstancePredicate<S> = dyn Fn(
        &S,
        &Instance<<S as Schema>::State, <S as Schema>::Map>,
    ) -> std::result::Result<Truth, String>
    + Send
    + Sync;

enum Predicate<S: Schema> {
    State(Arc<StatePredicate<S>>),
    Instance(Arc<InstancePredicate<S>>),
}

impl<S: Schema> Clone for Predicate<S> {
    fn clone(&self) -> Self {
        match self {
            Predicate::State(f) => Predicate::State(Arc::clone(f)),
            Predicate::Instance(f) => Predicate::Instance(Arc::clone(f)),
        }
    }
}

/// A named interpretational statement.
pub struct Proposition<S: Schema> {
    name: String,
    predicate: Predicate<S>,
}

impl<S: Schema> Clone for Proposition<S> {
    fn clone(&self) -> Self {
        Proposition {
            name: self.name.clone(),
            predicate: self.predicate.clone(),
        }
    }
}

impl<S: Schema> fmt::Debug for Proposition<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Proposition")
            .field("name", &self.name)
            .field("arity", &self.arity())
            .finish()
    }
}

impl<S: Schema> Proposition<S> {
    pub fn state<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&S, &S::State) -> std::result::Result<Truth, String> + Send + Sync + 'static,
    {
        Proposition {
            name: name.into(),
            predicate: Predicate::State(Arc::new(f)),
        }
    }

    pub fn instance<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&S, &Instance<S::State, S::Map>) -> std::result::Result<Truth, String>
            + Send
            + Sync
            + 'static,
    {
        Proposition {
            name: name.into(),
            predicate: Predicate::Instance(Arc::new(f)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> Arity {
        match self.predicate {
            Predicate::State(_) => Arity::State,
            Predicate::Instance(_) => Arity::Instance,
        }
    }

    /// State propositions are evaluated on `x₀`.
    pub fn evaluate(&self, schema: &S, instance: &Instance<S::State, S::Map>) -> Result<Truth> {
        let out = match &self.predicate {
            Predicate::State(f) => f(schema, &instance.x0),
            Predicate::Instance(f) => f(schema, instance),
        };
        out.map_err(|reason| Error::PredicateFailure {
            name: self.name.clone(),
            reason,
        })
    }

    pub fn evaluate_state(&self, schema: &S, x: &S::State) -> Result<Truth> {
        match &self.predicate {
            Predicate::State(f) => f(schema, x).map_err(|reason| Error::PredicateFailure {
                name: self.name.clone(),
                reason,
            }),
            Predicate::Instance(_) => Err(Error::InvalidParameter(format!(
                "`{}` is an instance proposition",
                self.name
            ))),
        }
    }
}

/// `Q(x, D)`: every map of the instance fixes the state it acts on.
pub fn fixed_point<S: Schema>() -> Proposition<S> {
    Proposition::instance("FIXED_POINT", |schema: &S, inst| {
        let traj = run_instance(schema, inst).map_err(|e| e.to_string())?;
        Ok(traj
            .states
            .windows(2)
            .all(|w| schema.same_state(&w[0], &w[1]))
            .into())
    })
}

/// True exactly on one finite state.
pub fn state_equals(schema: &TheorySchema, state: usize) -> Result<Proposition<TheorySchema>> {
    schema.check_state(&state)?;
    let label = schema.states().label(state).to_string();
    Ok(Proposition::state(
        format!("STATE_EQUALS({label})"),
        move |_: &TheorySchema, x: &usize| Ok((*x == state).into()),
    ))
}

/// True exactly on a given set of finite states.
pub fn state_in(name: impl Into<String>, members: &[usize]) -> Proposition<TheorySchema> {
    let set: HashSet<usize> = members.iter().copied().collect();
    Proposition::state(name, move |_: &TheorySchema, x: &usize| {
        Ok(set.contains(x).into())
    })
}

/// A finite collection of instances to classify over.
#[derive(Debug, Clone)]
pub struct InstanceSet<X, M> {
    pub instances: Vec<Instance<X, M>>,
    /// The set covers the whole domain of the proposition.
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

impl<X, M> InstanceSet<X, M> {
    pub fn exhaustive(instances: Vec<Instance<X, M>>) -> Self {
        InstanceSet {
            instances,
            exhaustive: true,
            seed: None,
        }
    }

    pub fn sampled(instances: Vec<Instance<X, M>>, seed: u64) -> Self {
        InstanceSet {
            instances,
            exhaustive: false,
            seed: Some(seed),
        }
    }
}

/// Instances `(x, (1, …, 1))` for every state of a reversible finite schema.
pub fn every_state(schema: &TheorySchema) -> InstanceSet<usize, StateMap> {
    let id = schema.identity();
    InstanceSet::exhaustive(
        (0..schema.len())
            .map(|x| Instance::new(x, vec![id.clone(); schema.n_steps()]))
            .collect(),
    )
}

/// Seeded random instances of a finite schema.
pub fn random_instances(
    schema: &TheorySchema,
    count: usize,
    seed: u64,
) -> InstanceSet<usize, StateMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    InstanceSet::sampled(
        (0..count)
            .map(|_| random_instance(schema, &mut rng))
            .collect(),
        seed,
    )
}

pub(crate) fn random_instance(
    schema: &TheorySchema,
    rng: &mut impl Rng,
) -> Instance<usize, StateMap> {
    let x0 = rng.random_range(0..schema.len());
    let maps = (0..schema.n_steps())
        .map(|_| {
            schema
                .map(rng.random_range(0..schema.maps().len()))
                .action
                .clone()
        })
        .collect();
    Instance::new(x0, maps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    InvariantTrivialTrue,
    InvariantTrivialNotTrue,
    InvariantNontrivial,
    NotInvariant,
}

impl Classification {
    pub fn is_invariant(self) -> bool {
        self != Classification::NotInvariant
    }
}

/// An instance and spectacles under which the proposition changes value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceWitness {
    pub instance: usize,
    pub similarity: usize,
    pub before: Truth,
    pub after: Truth,
    pub original_state: String,
    pub transformed_state: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub proposition: String,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<InvarianceWitness>,
    pub sampled: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub evaluations: usize,
}

/// Evaluates `prop` on every instance and on its image under every element
/// of `group`, and classifies the result.
pub fn check_invariance<S: Schema>(
    schema: &S,
    prop: &Proposition<S>,
    group: &[ExtendedSimilarity<S::Map>],
    set: &InstanceSet<S::State, S::Map>,
) -> Result<InvarianceReport> {
    if set.instances.is_empty() {
        return Err(Error::InvalidParameter("instance set is empty".into()));
    }
    for g in group {
        if g.maps.len() != schema.n_steps() + 1 {
            return Err(Error::LengthMismatch {
                got: g.maps.len(),
                expected: schema.n_steps() + 1,
            });
        }
    }
    let instances = &set.instances;
    let base: Vec<Truth> = par::map(instances, |inst| prop.evaluate(schema, inst))
        .into_iter()
        .collect::<Result<_>>()?;

    let width = group.len();
    let flip = par::find_map_first(instances.len() * width, |cell| {
        let (i, g) = (cell / width, cell % width);
        let transformed = match transform_instance(schema, &group[g], &instances[i]) {
            Ok(t) => t,
            Err(e) => return Some(Err(e)),
        };
        match prop.evaluate(schema, &transformed) {
            Err(e) => Some(Err(e)),
            Ok(after) if after != base[i] => Some(Ok(InvarianceWitness {
                instance: i,
                similarity: g,
                before: base[i],
                after,
                original_state: schema.describe_state(&instances[i].x0),
                transformed_state: schema.describe_state(&transformed.x0),
            })),
            Ok(_) => None,
        }
    })
    .transpose()?;

    let classification = if flip.is_some() {
        Classification::NotInvariant
    } else if base.iter().all(|t| t.is_true()) {
        Classification::InvariantTrivialTrue
    } else if base.iter().all(|t| !t.is_true()) {
        Classification::InvariantTrivialNotTrue
    } else {
        Classification::InvariantNontrivial
    };
    Ok(InvarianceReport {
        proposition: prop.name().to_string(),
        classification,
        witness: flip,
        sampled: schema.evidence().is_sampled() || !set.exhaustive,
        seed: set.seed,
        evaluations: instances.len() * (width + 1),
    })
}

/// Time-dependent spectacles carrying instance `a` onto instance `b`.
///
/// `V₀` is a kinematic map with `y₀ = V₀x₀`; thereafter
/// `V_k = E_{k,k-1} V_{k-1} D_{k,k-1}⁻¹`, so every square of the ladder
/// `x_k → y_k` commutes and each `V_k` lies in 𝒦.
pub fn construct_gruebleen<S: Schema>(
    schema: &S,
    a: &Instance<S::State, S::Map>,
    b: &Instance<S::State, S::Map>,
) -> Result<ExtendedSimilarity<S::Map>> {
    if !schema.is_reversible() {
        return Err(Error::NotReversible);
    }
    validate_instance(schema, a)?;
    validate_instance(schema, b)?;
    if !schema.is_transitive() {
        return Err(Error::NoTransport);
    }
    let v0 = schema.transport(&a.x0, &b.x0).ok_or(Error::NoTransport)?;
    let mut maps = Vec::with_capacity(a.maps.len() + 1);
    maps.push(v0);
    for (d, e) in a.maps.iter().zip(&b.maps) {
        let d_inv = schema.invert(d).ok_or(Error::NotReversible)?;
        let prev = maps.last().expect("V0 present");
        maps.push(schema.compose(e, &schema.compose(prev, &d_inv)));
    }
    Ok(ExtendedSimilarity { maps })
}

/// Which similarity group the theorem verifier classifies against.
#[derive(Debug, Clone)]
pub enum GroupChoice {
    /// Exhaustive U_max when `|S| ≤ 8`, else 𝒦 itself (a subgroup of U_max
    /// for reversible schemata).
    Maximal,
    /// The group generated by 𝒦 and the candidates that pass Property S.
    Candidates(Vec<StateMap>),
}

#[derive(Debug, Clone)]
pub struct TheoremConfig {
    /// Largest `|S|` whose `2^|S|` state propositions are enumerated; larger
    /// state sets are swept through orbit unions.
    pub max_states: usize,
    pub group: GroupChoice,
    pub instance_pairs: usize,
    pub seed: u64,
}

/// Hard ceiling for `max_states`.
pub const THEOREM_STATE_CEILING: usize = 12;

impl Default for TheoremConfig {
    fn default() -> Self {
        TheoremConfig {
            max_states: 5,
            group: GroupChoice::Maximal,
            instance_pairs: 50,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    Maximal,
    KinematicSubgroup,
    CandidateRestricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMethod {
    /// Every subset of 𝒮 was tested against every group element.
    Enumerated,
    /// Invariant subsets counted as unions of group orbits.
    OrbitUnions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatePropositionSweep {
    pub method: SweepMethod,
    pub checked: usize,
    pub invariant: usize,
    pub invariant_trivial: usize,
    /// Members of the nontrivial invariant subsets: all of them when
    /// enumerated, the orbits otherwise.
    pub nontrivial_invariant: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstancePairSweep {
    pub pairs: usize,
    pub seed: u64,
    pub transported: usize,
    pub s_ext_passed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    /// Preconditions hold and only trivial statements survive.
    Confirmed,
    /// Preconditions hold but a nontrivial invariant statement was found.
    Violated,
    /// Preconditions fail; the theorem makes no claim.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub states: usize,
    pub reversible: bool,
    pub transitive: bool,
    pub preconditions_met: bool,
    pub group: GroupKind,
    pub group_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_propositions: Option<StatePropositionSweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_pairs: Option<InstancePairSweep>,
    /// For schemata outside the theorem: an invariant nontrivial statement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhibited: Option<InvarianceReport>,
    pub conclusion: Conclusion,
}

fn enumerate_invariant_subsets(
    schema: &TheorySchema,
    elements: &[StateMap],
) -> StatePropositionSweep {
    let n = schema.len();
    let full = (1usize << n) - 1;
    let invariant_masks = par::filter_range(1usize << n, |mask| {
        let bit = |x: usize| (mask >> x) & 1;
        elements
            .iter()
            .all(|v| (0..n).all(|x| bit(x) == bit(v.image(x))))
    });
    let nontrivial: Vec<Vec<String>> = invariant_masks
        .iter()
        .filter(|&&m| m != 0 && m != full)
        .map(|&m| {
            (0..n)
                .filter(|x| (m >> x) & 1 == 1)
                .map(|x| schema.states().label(x).to_string())
                .collect()
        })
        .collect();
    StatePropositionSweep {
        method: SweepMethod::Enumerated,
        checked: 1 << n,
        invariant: invariant_masks.len(),
        invariant_trivial: invariant_masks.len() - nontrivial.len(),
        nontrivial_invariant: nontrivial,
    }
}

/// Checks the triviality theorem on a finite schema.
///
/// With reversible, transitive kinematics, every state proposition (a subset
/// of 𝒮) is tested for invariance under the chosen group and every invariant
/// one must be ∅ or 𝒮; sampled instance pairs must be mutually transformable
/// by grue-bleen spectacles. Otherwise the orbit of the first state under the
/// group is exhibited as a nontrivial invariant statement when one exists.
pub fn verify_triviality_theorem(
    schema: &TheorySchema,
    config: &TheoremConfig,
) -> Result<TheoremReport> {
    if config.max_states > THEOREM_STATE_CEILING {
        return Err(Error::InvalidParameter(format!(
            "max_states {} exceeds {}",
            config.max_states, THEOREM_STATE_CEILING
        )));
    }
    let n = schema.len();
    let (group_kind, elements) = match &config.group {
        GroupChoice::Maximal if n <= DEFAULT_MAX_GROUP_STATES => (
            GroupKind::Maximal,
            maximal_similarity_group(schema, DEFAULT_MAX_GROUP_STATES)?.elements,
        ),
        GroupChoice::Maximal => (
            GroupKind::KinematicSubgroup,
            schema.actions().cloned().collect(),
        ),
        GroupChoice::Candidates(c) => {
            let mut with_k = c.clone();
            if schema.reversible() {
                with_k.extend(schema.actions().cloned());
            }
            (
                GroupKind::CandidateRestricted,
                candidate_similarity_group(schema, &with_k)?.elements,
            )
        }
    };
    let reversible = schema.reversible();
    let transitive = schema.is_transitive();
    let preconditions_met = reversible && transitive;
    let mut report = TheoremReport {
        states: n,
        reversible,
        transitive,
        preconditions_met,
        group: group_kind,
        group_order: elements.len(),
        state_propositions: None,
        instance_pairs: None,
        exhibited: None,
        conclusion: Conclusion::NotApplicable,
    };

    if !preconditions_met {
        let orbit_list = orbits(&elements, n);
        if orbit_list.len() > 1 && reversible {
            let prop = state_in(
                format!("IN_ORBIT({})", schema.states().label(0)),
                &orbit_list[0],
            );
            let spectacles: Vec<_> = elements
                .iter()
                .map(|v| ExtendedSimilarity::constant(v.clone(), schema.n_steps()))
                .collect();
            report.exhibited = Some(check_invariance(
                schema,
                &prop,
                &spectacles,
                &every_state(schema),
            )?);
        }
        return Ok(report);
    }

    let sweep = if n <= config.max_states {
        enumerate_invariant_subsets(schema, &elements)
    } else {
        let orbit_list = orbits(&elements, n);
        let count = 1usize
            .checked_shl(orbit_list.len() as u32)
            .unwrap_or(usize::MAX);
        let nontrivial = if orbit_list.len() > 1 {
            orbit_list
        } else {
            Vec::new()
        };
        StatePropositionSweep {
            method: SweepMethod::OrbitUnions,
            checked: count,
            invariant: count,
            invariant_trivial: if n == 0 { 1 } else { 2 },
            nontrivial_invariant: nontrivial
                .iter()
                .map(|o| {
                    o.iter()
                        .map(|&x| schema.states().label(x).to_string())
                        .collect()
                })
                .collect(),
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pairs: Vec<_> = (0..config.instance_pairs)
        .map(|_| {
            (
                random_instance(schema, &mut rng),
                random_instance(schema, &mut rng),
            )
        })
        .collect();
    let outcomes: Vec<Result<(bool, bool)>> = par::map(&pairs, |(a, b)| {
        let v = construct_gruebleen(schema, a, b)?;
        let moved = transform_instance(schema, &v, a)?;
        Ok((moved == *b, v.check(schema)?.holds))
    });
    let mut transported = 0;
    let mut s_ext_passed = 0;
    for o in outcomes {
        let (t, s) = o?;
        transported += usize::from(t);
        s_ext_passed += usize::from(s);
    }
    let pairs_ok = transported == pairs.len() && s_ext_passed == pairs.len();
    report.conclusion = if sweep.nontrivial_invariant.is_empty() && pairs_ok {
        Conclusion::Confirmed
    } else {
        Conclusion::Violated
    };
    report.state_propositions = Some(sweep);
    report.instance_pairs = Some(InstancePairSweep {
        pairs: pairs.len(),
        seed: config.seed,
        transported,
        s_ext_passed,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize, steps: usize) -> TheorySchema {
        TheorySchema::symmetric(n, steps).unwrap()
    }

    #[test]
    fn identity_spectacles_leave_instance_unchanged() {
        let s = TheorySchema::cyclic(3, 2).unwrap();
        let c = s.map(1).action.clone();
        let inst = Instance::new(1, vec![c.clone(), c]);
        let out = transform_instance(&s, &ExtendedSimilarity::identity(&s), &inst).unwrap();
        assert_eq!(out, inst);
    }

    #[test]
    fn constant_spectacles_conjugate_each_map() {
        let s = TheorySchema::cyclic(3, 2).unwrap();
        let c = s.map(1).action.clone();
        let v = StateMap::from_images(vec![1, 0, 2]);
        let inv = v.inverse().unwrap();
        let inst = Instance::new(0, vec![c.clone(), c.clone()]);
        let out =
            transform_instance(&s, &ExtendedSimilarity::constant(v.clone(), 2), &inst).unwrap();
        let expected = v.compose(&c).compose(&inv);
        assert_eq!(out.maps, vec![expected.clone(), expected]);
        assert_eq!(out.x0, 1);
        // c^{-1} is the rotation by 2.
        assert_eq!(out.maps[0], s.map(2).action);
    }

    #[test]
    fn escaping_spectacles_are_an_error() {
        let s = TheorySchema::cyclic(3, 1).unwrap();
        let t = StateMap::from_images(vec![1, 0, 2]);
        let inst = Instance::new(0, vec![StateMap::identity(3)]);
        let bad = ExtendedSimilarity::new(vec![StateMap::identity(3), t]);
        assert_eq!(
            transform_instance(&s, &bad, &inst),
            Err(Error::TransformEscapes { interval: 0 })
        );
    }

    #[test]
    fn trivial_group_classifies_everything_invariant() {
        let s = sym(3, 1);
        let group = vec![ExtendedSimilarity::identity(&s)];
        let props = vec![
            state_equals(&s, 0).unwrap(),
            state_in("none", &[]),
            state_in("all", &[0, 1, 2]),
            fixed_point(),
        ];
        for p in props {
            let r = check_invariance(&s, &p, &group, &every_state(&s)).unwrap();
            assert!(r.classification.is_invariant(), "{}", p.name());
        }
    }

    #[test]
    fn state_equals_is_not_invariant_under_full_group() {
        let s = sym(3, 1);
        let group: Vec<_> = s
            .actions()
            .map(|v| ExtendedSimilarity::constant(v.clone(), 1))
            .collect();
        let r =
            check_invariance(&s, &state_equals(&s, 0).unwrap(), &group, &every_state(&s)).unwrap();
        assert_eq!(r.classification, Classification::NotInvariant);
        let w = r.witness.unwrap();
        assert_ne!(w.before, w.after);
        assert!(!r.sampled);
    }

    #[test]
    fn predicate_failure_is_hard_error() {
        let s = sym(2, 1);
        let p = Proposition::state("boom", |_: &TheorySchema, _: &usize| Err("nope".into()));
        let r = check_invariance(
            &s,
            &p,
            &[ExtendedSimilarity::identity(&s)],
            &every_state(&s),
        );
        assert!(matches!(r, Err(Error::PredicateFailure { .. })));
        let r = check_invariance(
            &s,
            &state_in("x", &[0]),
            &[ExtendedSimilarity::identity(&s)],
            &InstanceSet::exhaustive(vec![]),
        );
        assert!(r.is_err());
    }

    #[test]
    fn fixed_point_with_identity_always_true() {
        let s = sym(3, 1);
        let p = fixed_point::<TheorySchema>();
        for x in 0..3 {
            let inst = Instance::new(x, vec![StateMap::identity(3)]);
            assert_eq!(p.evaluate(&s, &inst).unwrap(), Truth::True);
        }
        let c = StateMap::from_images(vec![1, 2, 0]);
        assert_eq!(
            p.evaluate(&s, &Instance::new(0, vec![c])).unwrap(),
            Truth::NotTrue
        );
    }

    #[test]
    fn fixed_point_survives_time_independent_spectacles() {
        let s = sym(3, 1);
        let p = fixed_point::<TheorySchema>();
        let group: Vec<_> = s
            .actions()
            .map(|v| ExtendedSimilarity::constant(v.clone(), 1))
            .collect();
        let all: Vec<_> = (0..3)
            .flat_map(|x| s.actions().map(move |d| Instance::new(x, vec![d.clone()])))
            .collect();
        let r = check_invariance(&s, &p, &group, &InstanceSet::exhaustive(all)).unwrap();
        assert_eq!(r.classification, Classification::InvariantNontrivial);
    }

    #[test]
    fn fixed_point_not_invariant_under_gruebleen_spectacles() {
        let s = sym(3, 1);
        let p = fixed_point::<TheorySchema>();
        let a = Instance::new(0, vec![StateMap::identity(3)]);
        let b = Instance::new(0, vec![StateMap::from_images(vec![1, 2, 0])]);
        let v = construct_gruebleen(&s, &a, &b).unwrap();
        let r = check_invariance(&s, &p, &[v], &InstanceSet::exhaustive(vec![a])).unwrap();
        assert_eq!(r.classification, Classification::NotInvariant);
    }

    #[test]
    fn gruebleen_self_transport() {
        let s = sym(3, 2);
        let d1 = StateMap::from_images(vec![1, 2, 0]);
        let d2 = StateMap::from_images(vec![0, 2, 1]);
        let a = Instance::new(1, vec![d1, d2]);
        let v = construct_gruebleen(&s, &a, &a).unwrap();
        assert!(v.maps[0].is_identity());
        assert!(v.maps.iter().all(|m| m.is_identity()));
        assert_eq!(transform_instance(&s, &v, &a).unwrap(), a);
    }

    #[test]
    fn gruebleen_requires_reversible_transitive() {
        let t = TheorySchema::trivial(3, 1).unwrap();
        let a = Instance::new(0, vec![StateMap::identity(3)]);
        let b = Instance::new(1, vec![StateMap::identity(3)]);
        assert_eq!(construct_gruebleen(&t, &a, &b), Err(Error::NoTransport));
    }

    #[test]
    fn theorem_on_symmetric_groups() {
        for n in 2..=5 {
            let r = verify_triviality_theorem(&sym(n, 2), &TheoremConfig::default()).unwrap();
            let sweep = r.state_propositions.as_ref().unwrap();
            assert_eq!(sweep.checked, 1 << n);
            assert_eq!(sweep.invariant, 2, "n={n}");
            assert_eq!(r.conclusion, Conclusion::Confirmed);
            assert_eq!(r.group, GroupKind::Maximal);
            let pairs = r.instance_pairs.as_ref().unwrap();
            assert_eq!(pairs.transported, 50);
            assert_eq!(pairs.s_ext_passed, 50);
        }
    }

    #[test]
    fn theorem_single_state_vacuous() {
        let r = verify_triviality_theorem(
            &TheorySchema::trivial(1, 1).unwrap(),
            &TheoremConfig::default(),
        )
        .unwrap();
        assert!(r.preconditions_met);
        assert_eq!(r.state_propositions.unwrap().invariant, 2);
        assert_eq!(r.conclusion, Conclusion::Confirmed);
    }

    #[test]
    fn theorem_size_guard_and_orbit_sweep() {
        let cfg = TheoremConfig {
            max_states: 13,
            ..TheoremConfig::default()
        };
        assert!(verify_triviality_theorem(&sym(3, 1), &cfg).is_err());
        let r = verify_triviality_theorem(&sym(6, 1), &TheoremConfig::default()).unwrap();
        let sweep = r.state_propositions.unwrap();
        assert_eq!(sweep.method, SweepMethod::OrbitUnions);
        assert_eq!(sweep.invariant, 2);
        assert_eq!(r.group, GroupKind::Maximal);
        assert_eq!(r.conclusion, Conclusion::Confirmed);
    }

    #[test]
    fn orbit_sweep_agrees_with_enumeration() {
        for s in [sym(4, 1), TheorySchema::cyclic(5, 1).unwrap()] {
            let enumerated = verify_triviality_theorem(&s, &TheoremConfig::default()).unwrap();
            let orbit = verify_triviality_theorem(
                &s,
                &TheoremConfig {
                    max_states: 1,
                    ..TheoremConfig::default()
                },
            )
            .unwrap();
            assert_eq!(
                enumerated.state_propositions.unwrap().invariant,
                orbit.state_propositions.unwrap().invariant
            );
        }
    }

    #[test]
    fn theorem_not_applicable_exhibits_orbit() {
        // Two disjoint 2-cycles' worth of kinematics: 𝒦 = <(0 1)> on 3 states.
        let s = TheorySchema::from_generators(
            crate::schema::FiniteStateSpace::indexed(3),
            &[StateMap::from_images(vec![1, 0, 2])],
            1,
            |m| format!("{m:?}"),
        )
        .unwrap();
        let r = verify_triviality_theorem(&s, &TheoremConfig::default()).unwrap();
        assert!(!r.transitive);
        assert_eq!(r.conclusion, Conclusion::NotApplicable);
        let ex = r.exhibited.unwrap();
        assert_eq!(ex.classification, Classification::InvariantNontrivial);
    }
}

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{Evidence, Schema, Violation};
use crate::error::{Error, Result};
use crate::par;

/// A total map on `0..n` stored as its assignment table (`images[i]` is the
/// image of state `i`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateMap(Vec<usize>);

impl StateMap {
    pub fn new(images: Vec<usize>, n: usize) -> Result<Self> {
        if images.len() != n {
            return Err(Error::TableLength {
                name: "map".into(),
                got: images.len(),
                expected: n,
            });
        }
        if let Some((state, &image)) = images.iter().find_position(|&&i| i >= n) {
            return Err(Error::ImageOutOfRange {
                name: "map".into(),
                state,
                image,
                len: n,
            });
        }
        Ok(StateMap(images))
    }

    /// Wraps a table without range checks; [`Schema::bijection_defect`] and
    /// schema construction still validate it.
    pub fn from_images(images: Vec<usize>) -> Self {
        StateMap(images)
    }

    pub fn identity(n: usize) -> Self {
        StateMap((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn image(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &StateMap) -> StateMap {
        StateMap(inner.0.iter().map(|&x| self.0[x]).collect())
    }

    /// `self ∘ d ∘ self⁻¹`, given `self⁻¹`.
    pub fn conjugate_with(&self, inverse: &StateMap, d: &StateMap) -> StateMap {
        StateMap(inverse.0.iter().map(|&x| self.0[d.0[x]]).collect())
    }

    /// First pair of distinct states sharing an image.
    pub fn collision(&self) -> Option<(usize, usize, usize)> {
        let mut seen = vec![usize::MAX; self.0.len()];
        for (i, &img) in self.0.iter().enumerate() {
            if img >= seen.len() {
                continue;
            }
            if seen[img] != usize::MAX {
                return Some((seen[img], i, img));
            }
            seen[img] = i;
        }
        None
    }

    pub fn is_bijection(&self) -> bool {
        self.0.iter().all(|&i| i < self.0.len()) && self.collision().is_none()
    }

    pub fn inverse(&self) -> Option<StateMap> {
        if !self.is_bijection() {
            return None;
        }
        let mut inv = vec![0; self.0.len()];
        for (i, &img) in self.0.iter().enumerate() {
            inv[img] = i;
        }
        Some(StateMap(inv))
    }

    fn check_range(&self, name: &str, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::TableLength {
                name: name.into(),
                got: self.0.len(),
                expected: n,
            });
        }
        if let Some((state, &image)) = self.0.iter().find_position(|&&i| i >= n) {
            return Err(Error::ImageOutOfRange {
                name: name.into(),
                state,
                image,
                len: n,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for StateMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Ordered, distinct state identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStateSpace {
    elements: Vec<String>,
}

impl FiniteStateSpace {
    pub fn new(elements: Vec<String>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        let mut seen = HashSet::new();
        for e in &elements {
            if !seen.insert(e.as_str()) {
                return Err(Error::DuplicateState(e.clone()));
            }
        }
        Ok(FiniteStateSpace { elements })
    }

    /// States named `s0 .. s{n-1}`.
    pub fn indexed(n: usize) -> Self {
        FiniteStateSpace {
            elements: (0..n.max(1)).map(|i| format!("s{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.elements
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KinematicMap {
    pub name: String,
    pub action: StateMap,
    pub inverse: Option<StateMap>,
}

impl KinematicMap {
    pub fn new(name: impl Into<String>, action: StateMap) -> Self {
        KinematicMap {
            name: name.into(),
            action,
            inverse: None,
        }
    }

    pub fn with_inverse(mut self, inverse: StateMap) -> Self {
        self.inverse = Some(inverse);
        self
    }
}

/// A finite schema with an explicit kinematic set.
#[derive(Debug, Clone)]
pub struct TheorySchema {
    states: FiniteStateSpace,
    maps: Vec<KinematicMap>,
    index: HashMap<StateMap, usize>,
    identity: Option<usize>,
    reversible: bool,
    n_steps: usize,
}

impl TheorySchema {
    pub fn new(
        states: FiniteStateSpace,
        mut maps: Vec<KinematicMap>,
        reversible: bool,
        n_steps: usize,
    ) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::NoSteps);
        }
        if maps.is_empty() {
            return Err(Error::InvalidParameter("kinematic set is empty".into()));
        }
        let n = states.len();
        let mut index: HashMap<StateMap, usize> = HashMap::with_capacity(maps.len());
        for (i, m) in maps.iter().enumerate() {
            m.action.check_range(&m.name, n)?;
            if let Some(inv) = &m.inverse {
                inv.check_range(&m.name, n)?;
                if !m.action.compose(inv).is_identity() || !inv.compose(&m.action).is_identity() {
                    return Err(Error::BadInverse(m.name.clone()));
                }
            }
            if let Some(&prev) = index.get(&m.action) {
                return Err(Error::DuplicateMap {
                    first: maps[prev].name.clone(),
                    second: m.name.clone(),
                });
            }
            index.insert(m.action.clone(), i);
        }
        let identity = index.get(&StateMap::identity(n)).copied();

        let defect = group_defect(&maps, &index, identity);
        match (&defect, reversible) {
            (Some(reason), true) => {
                return Err(Error::ReversibilityMismatch {
                    declared: true,
                    reason: reason.clone(),
                })
            }
            (None, false) => {
                return Err(Error::ReversibilityMismatch {
                    declared: false,
                    reason: "forms a group".into(),
                })
            }
            _ => {}
        }
        if reversible {
            for m in &mut maps {
                if m.inverse.is_none() {
                    m.inverse = m.action.inverse();
                }
            }
        }
        Ok(TheorySchema {
            states,
            maps,
            index,
            identity,
            reversible,
            n_steps,
        })
    }

    /// Builds a schema whose kinematic set is the group generated by
    /// `generators`, with maps named by `name`.
    pub fn from_generators(
        states: FiniteStateSpace,
        generators: &[StateMap],
        n_steps: usize,
        name: impl Fn(&StateMap) -> String,
    ) -> Result<Self> {
        let n = states.len();
        for g in generators {
            g.check_range("generator", n)?;
        }
        let elements = super::generate_group(generators, n);
        let maps = elements
            .into_iter()
            .map(|m| KinematicMap::new(name(&m), m))
            .collect();
        Self::new(states, maps, true, n_steps)
    }

    /// 𝒦 = all `n!` permutations of `n` abstract states.
    pub fn symmetric(n: usize, n_steps: usize) -> Result<Self> {
        let maps = (0..n)
            .permutations(n)
            .map(|p| {
                let m = StateMap(p);
                KinematicMap::new(format!("{m:?}"), m)
            })
            .collect();
        Self::new(FiniteStateSpace::indexed(n), maps, true, n_steps)
    }

    /// 𝒦 = the `n` rotations `c^k` of `n` states.
    pub fn cyclic(n: usize, n_steps: usize) -> Result<Self> {
        let maps = (0..n)
            .map(|k| {
                KinematicMap::new(
                    format!("c^{k}"),
                    StateMap((0..n).map(|i| (i + k) % n).collect()),
                )
            })
            .collect();
        Self::new(FiniteStateSpace::indexed(n), maps, true, n_steps)
    }

    /// 𝒦 = {identity}.
    pub fn trivial(n: usize, n_steps: usize) -> Result<Self> {
        Self::new(
            FiniteStateSpace::indexed(n),
            vec![KinematicMap::new("1", StateMap::identity(n))],
            true,
            n_steps,
        )
    }

    /// Same states and maps over a different number of intervals.
    pub fn with_n_steps(&self, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::NoSteps);
        }
        let mut s = self.clone();
        s.n_steps = n_steps;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &FiniteStateSpace {
        &self.states
    }

    pub fn maps(&self) -> &[KinematicMap] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &KinematicMap {
        &self.maps[i]
    }

    pub fn actions(&self) -> impl Iterator<Item = &StateMap> {
        self.maps.iter().map(|m| &m.action)
    }

    pub fn kinematic_index(&self, m: &StateMap) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn reversible(&self) -> bool {
        self.reversible
    }

    /// Orbit of `x` under repeated application of kinematic maps.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([x]);
        seen[x] = true;
        let mut out = vec![x];
        while let Some(y) = queue.pop_front() {
            for m in &self.maps {
                let z = m.action.image(y);
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                    queue.push_back(z);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn to_document(&self) -> SchemaDocument {
        SchemaDocument {
            states: self.states.labels().to_vec(),
            maps: self
                .maps
                .iter()
                .map(|m| MapEntry {
                    name: m.name.clone(),
                    perm: m.action.images().to_vec(),
                })
                .collect(),
            reversible: self.reversible,
            n_steps: self.n_steps,
        }
    }

    pub fn from_document(doc: SchemaDocument) -> Result<Self> {
        let states = FiniteStateSpace::new(doc.states)?;
        let maps = doc
            .maps
            .into_iter()
            .map(|e| KinematicMap::new(e.name, StateMap(e.perm)))
            .collect();
        Self::new(states, maps, doc.reversible, doc.n_steps)
    }

    /// Canonical serialization: pretty-printed, fields in document order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SchemaDocument =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_document(doc)
    }
}

impl PartialEq for TheorySchema {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
            && self.maps == other.maps
            && self.reversible == other.reversible
            && self.n_steps == other.n_steps
    }
}

/// Reason the kinematic set fails to be a group, if it does.
fn group_defect(
    maps: &[KinematicMap],
    index: &HashMap<StateMap, usize>,
    identity: Option<usize>,
) -> Option<String> {
    if identity.is_none() {
        return Some("does not contain the identity".into());
    }
    for m in maps {
        match m.action.inverse() {
            None => return Some(format!("contains the non-bijective map `{}`", m.name)),
            Some(inv) if !index.contains_key(&inv) => {
                return Some(format!("lacks the inverse of `{}`", m.name))
            }
            _ => {}
        }
    }
    let k = maps.len();
    par::find_map_first(k, |i| {
        maps.iter().find_map(|b| {
            let c = maps[i].action.compose(&b.action);
            (!index.contains_key(&c))
                .then(|| format!("is not closed: `{}` ∘ `{}`", maps[i].name, b.name))
        })
    })
}

/// On-disk form: `{"states":[...], "maps":[{"name","perm"}], "reversible", "n_steps"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaDocument {
    pub states: Vec<String>,
    pub maps: Vec<MapEntry>,
    pub reversible: bool,
    pub n_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub name: String,
    pub perm: Vec<usize>,
}

impl Schema for TheorySchema {
    type State = usize;
    type Map = StateMap;

    fn n_steps(&self) -> usize {
        self.n_steps
    }

    fn is_reversible(&self) -> bool {
        self.reversible
    }

    fn evidence(&self) -> Evidence {
        Evidence::Exhaustive
    }

    fn check_state(&self, x: &usize) -> Result<()> {
        if *x >= self.len() {
            return Err(Error::StateOutOfRange {
                index: *x,
                len: self.len(),
            });
        }
        Ok(())
    }

    fn apply(&self, map: &StateMap, x: &usize) -> usize {
        map.image(*x)
    }

    fn compose(&self, outer: &StateMap, inner: &StateMap) -> StateMap {
        outer.compose(inner)
    }

    fn invert(&self, map: &StateMap) -> Option<StateMap> {
        map.inverse()
    }

    fn identity(&self) -> StateMap {
        StateMap::identity(self.len())
    }

    fn is_kinematic(&self, map: &StateMap) -> bool {
        self.index.contains_key(map)
    }

    fn same_state(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn same_map(&self, a: &StateMap, b: &StateMap) -> bool {
        a == b
    }

    fn bijection_defect(&self, v: &StateMap) -> Result<Option<Violation>> {
        v.check_range("candidate", self.len())?;
        Ok(v.collision()
            .map(|(first, second, image)| Violation::NotInjective {
                first,
                second,
                image,
            }))
    }

    fn probes(&self) -> Vec<(&str, &StateMap)> {
        self.maps
            .iter()
            .map(|m| (m.name.as_str(), &m.action))
            .collect()
    }

    /// Identity when `from == to`, otherwise the first kinematic map in
    /// listing order that carries `from` to `to`.
    fn transport(&self, from: &usize, to: &usize) -> Option<StateMap> {
        if from == to {
            if let Some(i) = self.identity {
                return Some(self.maps[i].action.clone());
            }
        }
        self.maps
            .iter()
            .find(|m| m.action.image(*from) == *to)
            .map(|m| m.action.clone())
    }

    /// For a group, the orbit of state 0 must cover everything; otherwise
    /// every state must reach every other in one kinematic step.
    fn is_transitive(&self) -> bool {
        let n = self.len();
        if self.reversible {
            return self.orbit(0).len() == n;
        }
        par::find_map_first(n, |x| {
            let mut hit = vec![false; n];
            for m in &self.maps {
                hit[m.action.image(x)] = true;
            }
            (!hit.iter().all(|&h| h)).then_some(())
        })
        .is_none()
    }

    fn describe_state(&self, x: &usize) -> String {
        self.states.label(*x).to_string()
    }
}

//! Similarity-group construction for finite schemata.

use std::collections::{HashSet, VecDeque};

use itertools::Itertools;
use serde::Serialize;

use super::{check_property_s, StateMap, TheorySchema};
use crate::error::{Error, Result};
use crate::par;

/// Largest state set for which all `|S|!` bijections are enumerated.
pub const DEFAULT_MAX_GROUP_STATES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupSearch {
    /// All `|S|!` bijections were tested.
    Exhaustive,
    /// Only a supplied candidate list was tested; the result is the group
    /// generated by the candidates that passed.
    CandidateRestricted,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimilarityGroup {
    pub search: GroupSearch,
    /// Sorted lexicographically by assignment table.
    pub elements: Vec<StateMap>,
    pub candidates_tested: usize,
    /// Closure under composition and inverses, with identity, was verified.
    pub is_group: bool,
}

impl SimilarityGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &StateMap) -> bool {
        self.elements.binary_search(m).is_ok()
    }
}

/// Every bijection of the state set satisfying Property S.
///
/// Candidates are enumerated in lexicographic order of their tables and each
/// is rejected at the first kinematic map whose conjugate leaves 𝒦. Since
/// conjugation by a bijection is injective on maps, `V𝒦V⁻¹ ⊆ 𝒦` already
/// forces equality for finite 𝒦.
pub fn maximal_similarity_group(
    schema: &TheorySchema,
    max_states: usize,
) -> Result<SimilarityGroup> {
    let n = schema.len();
    if n > max_states {
        return Err(Error::TooLarge {
            what: "state space for exhaustive similarity search",
            size: n,
            limit: max_states,
        });
    }
    let candidates: Vec<StateMap> = (0..n).permutations(n).map(StateMap::from_images).collect();
    let keep = par::filter_range(candidates.len(), |i| {
        let v = &candidates[i];
        let inv = v.inverse().expect("permutation");
        schema
            .actions()
            .all(|d| schema.kinematic_index(&v.conjugate_with(&inv, d)).is_some())
    });
    let elements: Vec<StateMap> = keep.into_iter().map(|i| candidates[i].clone()).collect();
    let is_group = is_group(&elements, n);
    Ok(SimilarityGroup {
        search: GroupSearch::Exhaustive,
        elements,
        candidates_tested: candidates.len(),
        is_group,
    })
}

/// Group generated by the candidates that satisfy Property S.
pub fn candidate_similarity_group(
    schema: &TheorySchema,
    candidates: &[StateMap],
) -> Result<SimilarityGroup> {
    let verdicts: Vec<Result<bool>> =
        par::map(candidates, |v| check_property_s(schema, v).map(|r| r.holds));
    let mut passing = Vec::new();
    for (v, ok) in candidates.iter().zip(verdicts) {
        if ok? {
            passing.push(v.clone());
        }
    }
    let closure = generate_group(&passing, schema.len());
    let checks: Vec<Result<bool>> =
        par::map(&closure, |v| check_property_s(schema, v).map(|r| r.holds));
    let mut elements = Vec::with_capacity(closure.len());
    for (v, ok) in closure.into_iter().zip(checks) {
        if ok? {
            elements.push(v);
        }
    }
    let is_group = is_group(&elements, schema.len());
    Ok(SimilarityGroup {
        search: GroupSearch::CandidateRestricted,
        elements,
        candidates_tested: candidates.len(),
        is_group,
    })
}

/// Closure of `generators` (plus the identity) under composition, sorted.
pub fn generate_group(generators: &[StateMap], n: usize) -> Vec<StateMap> {
    let id = StateMap::identity(n);
    let mut seen: HashSet<StateMap> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for g in generators {
            let next = g.compose(&e);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<StateMap> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Identity, inverses and closure under composition, by enumeration.
pub fn is_group(elements: &[StateMap], n: usize) -> bool {
    let set: HashSet<&StateMap> = elements.iter().collect();
    if !set.contains(&StateMap::identity(n)) {
        return false;
    }
    let inverses_ok = elements
        .iter()
        .all(|e| e.inverse().is_some_and(|inv| set.contains(&inv)));
    inverses_ok
        && par::find_map_first(elements.len(), |i| {
            elements
                .iter()
                .any(|b| !set.contains(&elements[i].compose(b)))
                .then_some(())
        })
        .is_none()
}

/// Orbits of the state set under `elements`, each sorted, ordered by least
/// member.
pub fn orbits(elements: &[StateMap], n: usize) -> Vec<Vec<usize>> {
    let mut owner = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if owner[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![start];
        owner[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for e in elements {
                let y = e.image(x);
                if owner[y] == usize::MAX {
                    owner[y] = id;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

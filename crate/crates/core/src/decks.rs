//! Card-deck worlds.
//!
//! States are arrangements of `n` numbered cards. Under [`DeckKind::Full`] any
//! rearrangement is kinematically possible; under [`DeckKind::Half`] only
//! separate rearrangements of the two half-decks are. A kinematic map is a
//! position permutation `π`: the card at position `i` moves to `π(i)`.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schema::{FiniteStateSpace, KinematicMap, StateMap, TheorySchema};
use crate::similarity::Proposition;

/// Card count guard for exhaustive runs.
pub const DEFAULT_MAX_CARDS: usize = 5;
/// Absolute card count ceiling.
pub const MAX_CARDS: usize = 8;
/// Cap on `|𝒦|·|𝒮|` table entries.
const MAX_TABLE_ENTRIES: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DeckKind {
    Full,
    Half,
}

/// An arrangement of cards, optionally split into two halves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeckState {
    arrangement: Vec<usize>,
    split: bool,
}

impl DeckState {
    pub fn new(arrangement: Vec<usize>, split: bool) -> Result<Self> {
        let n = arrangement.len();
        let mut seen = vec![false; n];
        for &c in &arrangement {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidParameter(format!(
                    "{arrangement:?} is not a permutation of 0..{n}"
                )));
            }
        }
        if split && n % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "cannot split {n} cards into halves"
            )));
        }
        Ok(DeckState { arrangement, split })
    }

    pub fn arrangement(&self) -> &[usize] {
        &self.arrangement
    }

    pub fn label(&self) -> String {
        let n = self.arrangement.len();
        let digits = |s: &[usize]| s.iter().map(|c| c.to_string()).collect::<String>();
        if self.split {
            format!(
                "{}|{}",
                digits(&self.arrangement[..n / 2]),
                digits(&self.arrangement[n / 2..])
            )
        } else {
            digits(&self.arrangement)
        }
    }
}

/// A deck schema together with the arrangement behind every state index.
#[derive(Debug, Clone)]
pub struct Deck {
    cards: usize,
    kind: DeckKind,
    arrangements: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    schema: TheorySchema,
}

impl Deck {
    /// Builds the deck with the default guard of [`DEFAULT_MAX_CARDS`].
    pub fn build(n: usize, kind: DeckKind) -> Result<Self> {
        Self::build_with_limit(n, kind, DEFAULT_MAX_CARDS)
    }

    pub fn build_with_limit(n: usize, kind: DeckKind, max_cards: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 cards, got {n}"
            )));
        }
        if kind == DeckKind::Half && n % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "half-deck schema needs an even card count, got {n}"
            )));
        }
        let limit = max_cards.min(MAX_CARDS);
        if n > limit {
            return Err(Error::TooLarge {
                what: "card count",
                size: n,
                limit,
            });
        }
        let arrangements: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let index: HashMap<Vec<usize>, usize> = arrangements
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let perms: Vec<Vec<usize>> = match kind {
            DeckKind::Full => arrangements.clone(),
            DeckKind::Half => {
                let h = n / 2;
                (0..h)
                    .permutations(h)
                    .cartesian_product((0..h).permutations(h).collect::<Vec<_>>())
                    .map(|(a, b)| a.into_iter().chain(b.into_iter().map(|x| x + h)).collect())
                    .collect()
            }
        };
        let entries = perms.len() * arrangements.len();
        if entries > MAX_TABLE_ENTRIES {
            return Err(Error::TooLarge {
                what: "kinematic table entries",
                size: entries,
                limit: MAX_TABLE_ENTRIES,
            });
        }
        let split = kind == DeckKind::Half;
        let states = FiniteStateSpace::new(
            arrangements
                .iter()
                .map(|a| {
                    DeckState {
                        arrangement: a.clone(),
                        split,
                    }
                    .label()
                })
                .collect(),
        )?;
        let mut deck = Deck {
            cards: n,
            kind,
            arrangements,
            index,
            schema: TheorySchema::trivial(1, 1)?,
        };
        let maps = perms
            .iter()
            .map(|p| KinematicMap::new(format!("{p:?}"), deck.position_map(p)))
            .collect();
        deck.schema = TheorySchema::new(states, maps, true, 1)?;
        Ok(deck)
    }

    pub fn cards(&self) -> usize {
        self.cards
    }

    pub fn kind(&self) -> DeckKind {
        self.kind
    }

    pub fn schema(&self) -> &TheorySchema {
        &self.schema
    }

    pub fn into_schema(self) -> TheorySchema {
        self.schema
    }

    /// Replaces the time grid length of the underlying schema.
    pub fn with_n_steps(mut self, n_steps: usize) -> Result<Self> {
        self.schema = self.schema.with_n_steps(n_steps)?;
        Ok(self)
    }

    pub fn arrangement(&self, state: usize) -> &[usize] {
        &self.arrangements[state]
    }

    pub fn state(&self, state: usize) -> DeckState {
        DeckState {
            arrangement: self.arrangements[state].clone(),
            split: self.kind == DeckKind::Half,
        }
    }

    pub fn state_of(&self, arrangement: &[usize]) -> Result<usize> {
        self.index.get(arrangement).copied().ok_or_else(|| {
            Error::InvalidParameter(format!(
                "{arrangement:?} is not an arrangement of {} cards",
                self.cards
            ))
        })
    }

    /// State map induced by moving the card at position `i` to `perm[i]`.
    pub fn position_map(&self, perm: &[usize]) -> StateMap {
        let images = self
            .arrangements
            .iter()
            .map(|a| {
                let mut b = vec![0; a.len()];
                for (i, &card) in a.iter().enumerate() {
                    b[perm[i]] = card;
                }
                self.index[&b]
            })
            .collect();
        StateMap::from_images(images)
    }

    /// Exchanges the two half-decks: `(a|b) ↦ (b|a)`.
    pub fn half_swap(&self) -> Result<StateMap> {
        let n = self.cards;
        if n % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "cannot swap halves of {n} cards"
            )));
        }
        let perm: Vec<usize> = (0..n).map(|i| (i + n / 2) % n).collect();
        Ok(self.position_map(&perm))
    }

    /// Half (0 or 1) holding `card` in `state`.
    pub fn half_of(&self, state: usize, card: usize) -> usize {
        let pos = self.arrangements[state]
            .iter()
            .position(|&c| c == card)
            .expect("card present");
        usize::from(pos >= self.cards / 2)
    }

    /// True iff every marked card lies in one half.
    pub fn marked_same_half(&self, marks: &[usize]) -> Result<Proposition<TheorySchema>> {
        if marks.is_empty() {
            return Err(Error::InvalidParameter("no marked cards".into()));
        }
        if self.cards % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "{} cards have no halves",
                self.cards
            )));
        }
        if let Some(&bad) = marks.iter().find(|&&c| c >= self.cards) {
            return Err(Error::InvalidParameter(format!(
                "unknown card {bad} in a deck of {}",
                self.cards
            )));
        }
        let mut marks = marks.to_vec();
        marks.sort_unstable();
        marks.dedup();
        let name = format!(
            "MARKED_SAME_HALF({})",
            marks.iter().map(|c| c.to_string()).join(",")
        );
        let h = self.cards / 2;
        let halves: Vec<Vec<bool>> = self
            .arrangements
            .iter()
            .map(|a| {
                let mut upper = vec![false; a.len()];
                for (pos, &card) in a.iter().enumerate() {
                    upper[card] = pos >= h;
                }
                upper
            })
            .collect();
        Ok(Proposition::state(
            name,
            move |_: &TheorySchema, x: &usize| {
                let upper = halves
                    .get(*x)
                    .ok_or_else(|| format!("state {x} out of range"))?;
                Ok(marks.iter().map(|&c| upper[c]).all_equal().into())
            },
        ))
    }

    /// `𝒦 ∪ X·𝒦`: the kinematic maps and their composites with the half swap.
    pub fn half_swap_coset_candidates(&self) -> Result<Vec<StateMap>> {
        let x = self.half_swap()?;
        let mut out: Vec<StateMap> = self.schema.actions().cloned().collect();
        out.extend(self.schema.actions().map(|d| x.compose(d)));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{check_property_s, check_property_s_ext, Schema, Violation};
    use crate::similarity::{
        check_invariance, every_state, verify_triviality_theorem, Classification, Conclusion,
        ExtendedSimilarity, GroupChoice, TheoremConfig, Truth,
    };

    #[test]
    fn sizes() {
        let full = Deck::build(4, DeckKind::Full).unwrap();
        assert_eq!(full.schema().len(), 24);
        assert_eq!(full.schema().maps().len(), 24);
        let half = Deck::build(4, DeckKind::Half).unwrap();
        assert_eq!(half.schema().len(), 24);
        assert_eq!(half.schema().maps().len(), 4);
        assert!(half.schema().reversible());
    }

    #[test]
    fn guards() {
        assert!(Deck::build(3, DeckKind::Half).is_err());
        assert!(Deck::build(1, DeckKind::Full).is_err());
        assert!(matches!(
            Deck::build(6, DeckKind::Full),
            Err(Error::TooLarge { .. })
        ));
        assert!(Deck::build_with_limit(6, DeckKind::Half, 6).is_ok());
        assert!(DeckState::new(vec![0, 0, 1], false).is_err());
        assert!(DeckState::new(vec![0, 2, 1], true).is_err());
    }

    #[test]
    fn labels_and_lookup() {
        let half = Deck::build(4, DeckKind::Half).unwrap();
        let s = half.state_of(&[0, 1, 2, 3]).unwrap();
        assert_eq!(s, 0);
        assert_eq!(half.schema().describe_state(&s), "01|23");
        let full = Deck::build(4, DeckKind::Full).unwrap();
        assert_eq!(full.schema().describe_state(&23), "3210");
    }

    #[test]
    fn cards_stay_in_their_half() {
        let half = Deck::build(4, DeckKind::Half).unwrap();
        for x in 0..24 {
            for d in half.schema().actions() {
                for card in 0..4 {
                    assert_eq!(half.half_of(x, card), half.half_of(d.image(x), card));
                }
            }
        }
    }

    #[test]
    fn half_swap_definition() {
        let half = Deck::build(4, DeckKind::Half).unwrap();
        let x = half.half_swap().unwrap();
        let s = half.state_of(&[0, 1, 2, 3]).unwrap();
        assert_eq!(half.arrangement(x.image(s)), &[2, 3, 0, 1]);
        assert!(x.compose(&x).is_identity());
        assert!(half.schema().kinematic_index(&x).is_none());
        assert!(check_property_s(half.schema(), &x).unwrap().holds);
        let full = Deck::build(4, DeckKind::Full).unwrap();
        assert!(full
            .schema()
            .kinematic_index(&full.half_swap().unwrap())
            .is_some());
    }

    #[test]
    fn time_dependent_swap_fails_extended_property() {
        let half = Deck::build(4, DeckKind::Half).unwrap();
        let x = half.half_swap().unwrap();
        let id = StateMap::identity(24);
        let v = check_property_s_ext(half.schema(), &[id, x.clone()]).unwrap();
        assert!(!v.holds);
        assert!(matches!(
            v.witness,
            Some(Violation::Escapes {
                interval: Some(0),
                ..
            })
        ));
        assert!(
            check_property_s_ext(half.schema(), &[x.clone(), x])
                .unwrap()
                .holds
        );
    }

    #[test]
    fn transitivity() {
        assert!(Deck::build(4, DeckKind::Full)
            .unwrap()
            .schema()
            .is_transitive());
        assert!(!Deck::build(4, DeckKind::Half)
            .unwrap()
            .schema()
            .is_transitive());
    }

    #[test]
    fn marked_same_half_values() {
        let half = Deck::build(4, DeckKind::Half).unwrap();
        let s = half.state_of(&[0, 1, 2, 3]).unwrap();
        let same = half.marked_same_half(&[0, 1]).unwrap();
        let split = half.marked_same_half(&[0, 2]).unwrap();
        assert_eq!(same.evaluate_state(half.schema(), &s).unwrap(), Truth::True);
        assert_eq!(
            split.evaluate_state(half.schema(), &s).unwrap(),
            Truth::NotTrue
        );
        assert!(half.marked_same_half(&[4]).is_err());
        assert!(half.marked_same_half(&[]).is_err());
    }

    #[test]
    fn marked_same_half_invariant_under_swap_coset() {
        let half = Deck::build(4, DeckKind::Half).unwrap();
        let cands = half.half_swap_coset_candidates().unwrap();
        let group: Vec<_> = cands
            .into_iter()
            .map(|v| ExtendedSimilarity::constant(v, 1))
            .collect();
        assert_eq!(group.len(), 8);
        let p = half.marked_same_half(&[0, 1]).unwrap();
        let r = check_invariance(half.schema(), &p, &group, &every_state(half.schema())).unwrap();
        assert_eq!(r.classification, Classification::InvariantNontrivial);
    }

    #[test]
    fn full_deck_state_equals_not_invariant() {
        let full = Deck::build(3, DeckKind::Full).unwrap();
        let group: Vec<_> = full
            .schema()
            .actions()
            .map(|v| ExtendedSimilarity::constant(v.clone(), 1))
            .collect();
        let p = crate::similarity::state_equals(full.schema(), 0).unwrap();
        let r = check_invariance(full.schema(), &p, &group, &every_state(full.schema())).unwrap();
        assert_eq!(r.classification, Classification::NotInvariant);
        assert!(r.witness.is_some());
    }

    #[test]
    fn theorem_on_small_full_decks() {
        for n in 2..=4 {
            let full = Deck::build(n, DeckKind::Full).unwrap();
            let r = verify_triviality_theorem(full.schema(), &TheoremConfig::default()).unwrap();
            assert_eq!(r.conclusion, Conclusion::Confirmed, "n={n}");
            assert_eq!(r.state_propositions.unwrap().invariant, 2);
        }
        let full = Deck::build(4, DeckKind::Full).unwrap();
        let r = verify_triviality_theorem(full.schema(), &TheoremConfig::default()).unwrap();
        assert_eq!(r.group, crate::similarity::GroupKind::KinematicSubgroup);
    }

    #[test]
    fn half_deck_theorem_not_applicable() {
        let half = Deck::build(4, DeckKind::Half).unwrap();
        let cfg = TheoremConfig {
            group: GroupChoice::Candidates(half.half_swap_coset_candidates().unwrap()),
            ..TheoremConfig::default()
        };
        let r = verify_triviality_theorem(half.schema(), &cfg).unwrap();
        assert!(!r.preconditions_met);
        assert_eq!(r.group_order, 8);
        assert_eq!(
            r.exhibited.unwrap().classification,
            Classification::InvariantNontrivial
        );
    }

    #[test]
    fn json_round_trip() {
        let half = Deck::build(4, DeckKind::Half).unwrap();
        let text = half.schema().to_json();
        let back = TheorySchema::from_json(&text).unwrap();
        assert_eq!(&back, half.schema());
        assert_eq!(back.to_json(), text);
    }
}

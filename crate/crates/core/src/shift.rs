//! The full shift on a fixed-period surrogate.
//!
//! A state is a binary word `x₀x₁…x_{p-1}` standing for the bi-infinite
//! sequence that repeats it; state index `s` holds `x_j` in bit `j`. The
//! kinematic maps are the rotations `σ^m` with `(σx)_i = x_{i+1}`.
//!
//! Reflection is anchored at index 0 of the stored word:
//! `(ρx)_i = x_{(-i) mod p}`, so `ρ(0011) = 0110` and `σρ(0011) = 1100`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::schema::{FiniteStateSpace, KinematicMap, StateMap, TheorySchema};
use crate::similarity::Proposition;

pub const MAX_PERIOD: usize = 16;

/// Distinguished bijections of the period-`p` words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structural {
    /// `σ^m`; negative `m` shifts the other way.
    Shift(i64),
    /// `β`: bitwise complement.
    Complement,
    /// `ρ`: index reversal about position 0.
    Reflect,
}

/// Period-`p` words with rotation kinematics.
#[derive(Debug, Clone)]
pub struct ShiftSpace {
    period: usize,
    schema: TheorySchema,
}

/// A constant word sent to a non-constant one, with a shift that moves the
/// image while fixing the constant. Certifies the map is not a similarity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExclusionWitness {
    pub constant: String,
    pub image: String,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Exclusion {
    /// No constant word leaves the constants; not a proof of membership.
    Pass,
    Excluded(ExclusionWitness),
}

impl ShiftSpace {
    pub fn new(period: usize) -> Result<Self> {
        if period == 0 || period > MAX_PERIOD {
            return Err(Error::InvalidParameter(format!(
                "period {period} outside 1..={MAX_PERIOD}"
            )));
        }
        let labels = (0..1usize << period).map(|s| word(s, period)).collect();
        let maps = (0..period)
            .map(|m| KinematicMap::new(format!("sigma^{m}"), shift_table(period, m)))
            .collect();
        let schema = TheorySchema::new(FiniteStateSpace::new(labels)?, maps, true, 1)?;
        Ok(ShiftSpace { period, schema })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn schema(&self) -> &TheorySchema {
        &self.schema
    }

    pub fn with_n_steps(mut self, n_steps: usize) -> Result<Self> {
        self.schema = self.schema.with_n_steps(n_steps)?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        1 << self.period
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn word(&self, state: usize) -> String {
        word(state, self.period)
    }

    pub fn state_of(&self, w: &str) -> Result<usize> {
        if w.len() != self.period {
            return Err(Error::InvalidParameter(format!(
                "word `{w}` does not have period {}",
                self.period
            )));
        }
        w.chars()
            .enumerate()
            .try_fold(0usize, |acc, (j, c)| match c {
                '0' => Ok(acc),
                '1' => Ok(acc | 1 << j),
                _ => Err(Error::InvalidParameter(format!(
                    "`{w}` is not a binary word"
                ))),
            })
    }

    pub fn is_constant(&self, state: usize) -> bool {
        state == 0 || state == self.len() - 1
    }

    pub fn structural_map(&self, kind: Structural) -> StateMap {
        let p = self.period;
        match kind {
            Structural::Shift(m) => shift_table(p, m.rem_euclid(p as i64) as usize),
            Structural::Complement => {
                let mask = self.len() - 1;
                StateMap::from_images((0..self.len()).map(|s| s ^ mask).collect())
            }
            Structural::Reflect => StateMap::from_images(
                (0..self.len())
                    .map(|s| (0..p).fold(0, |acc, i| acc | bit(s, (p - i) % p) << i))
                    .collect(),
            ),
        }
    }

    /// `σ`, `β` and `ρ`.
    pub fn structural_generators(&self) -> Vec<StateMap> {
        [
            Structural::Shift(1),
            Structural::Complement,
            Structural::Reflect,
        ]
        .into_iter()
        .map(|k| self.structural_map(k))
        .collect()
    }

    /// Looks for a constant word `b` with non-constant image `Vb`, and the
    /// least `n ≥ 1` with `σⁿVb ≠ Vb`. Since `σᵐb = b` for every `m`, no
    /// similarity can do this.
    pub fn certify_exclusion(&self, v: &StateMap) -> Result<Exclusion> {
        if v.len() != self.len() {
            return Err(Error::LengthMismatch {
                got: v.len(),
                expected: self.len(),
            });
        }
        let sigma = self.structural_map(Structural::Shift(1));
        for b in [0, self.len() - 1] {
            let image = v.image(b);
            if image >= self.len() {
                return Err(Error::StateOutOfRange {
                    index: image,
                    len: self.len(),
                });
            }
            let mut moved = image;
            for n in 1..=self.period {
                moved = sigma.image(moved);
                if moved != image {
                    return Ok(Exclusion::Excluded(ExclusionWitness {
                        constant: self.word(b),
                        image: self.word(image),
                        n,
                    }));
                }
            }
        }
        Ok(Exclusion::Pass)
    }

    /// True iff the word is `000…` or `111…`.
    pub fn is_constant_proposition(&self) -> Proposition<TheorySchema> {
        let last = self.len() - 1;
        Proposition::state("IS_CONSTANT", move |_: &TheorySchema, x: &usize| {
            if *x > last {
                return Err(format!("state {x} out of range"));
            }
            Ok((*x == 0 || *x == last).into())
        })
    }
}

fn bit(s: usize, j: usize) -> usize {
    (s >> j) & 1
}

fn word(s: usize, p: usize) -> String {
    (0..p)
        .map(|j| if bit(s, j) == 1 { '1' } else { '0' })
        .collect()
}

/// `σ^m`: bit `i` of the image is bit `i + m` of the source.
fn shift_table(p: usize, m: usize) -> StateMap {
    StateMap::from_images(
        (0..1usize << p)
            .map(|s| (0..p).fold(0, |acc, i| acc | bit(s, (i + m) % p) << i))
            .collect(),
    )
}

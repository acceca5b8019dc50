//! Built-in propositions addressed by kind and JSON parameters.

use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decks::Deck;
use crate::error::{Error, Result};
use crate::quantum::{entangled_cut, Decomposition, UnitarySchema};
use crate::schema::TheorySchema;
use crate::shift::ShiftSpace;
use crate::similarity::{fixed_point, state_equals, Proposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PropositionKind {
    FixedPoint,
    MarkedSameHalf,
    IsConstant,
    StateEquals,
    EntangledCut,
}

impl PropositionKind {
    pub const ALL: [PropositionKind; 5] = [
        PropositionKind::FixedPoint,
        PropositionKind::MarkedSameHalf,
        PropositionKind::IsConstant,
        PropositionKind::StateEquals,
        PropositionKind::EntangledCut,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropositionKind::FixedPoint => "FIXED_POINT",
            PropositionKind::MarkedSameHalf => "MARKED_SAME_HALF",
            PropositionKind::IsConstant => "IS_CONSTANT",
            PropositionKind::StateEquals => "STATE_EQUALS",
            PropositionKind::EntangledCut => "ENTANGLED_CUT",
        }
    }
}

impl fmt::Display for PropositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropositionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown proposition kind `{s}`")))
    }
}

/// The schema a proposition is built against.
#[derive(Debug, Clone, Copy)]
pub enum World<'a> {
    Finite(&'a TheorySchema),
    Deck(&'a Deck),
    Shift(&'a ShiftSpace),
    Quantum(&'a UnitarySchema),
}

impl World<'_> {
    fn finite(&self) -> Option<&TheorySchema> {
        match self {
            World::Finite(s) => Some(s),
            World::Deck(d) => Some(d.schema()),
            World::Shift(s) => Some(s.schema()),
            World::Quantum(_) => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            World::Finite(_) => "finite",
            World::Deck(_) => "deck",
            World::Shift(_) => "shift",
            World::Quantum(_) => "quantum",
        }
    }
}

#[derive(Debug, Clone)]
pub enum BuiltinProposition {
    Finite(Proposition<TheorySchema>),
    Quantum(Proposition<UnitarySchema>),
}

impl BuiltinProposition {
    pub fn name(&self) -> &str {
        match self {
            BuiltinProposition::Finite(p) => p.name(),
            BuiltinProposition::Quantum(p) => p.name(),
        }
    }

    pub fn into_finite(self) -> Result<Proposition<TheorySchema>> {
        match self {
            BuiltinProposition::Finite(p) => Ok(p),
            BuiltinProposition::Quantum(p) => Err(Error::InvalidParameter(format!(
                "{} is a quantum proposition",
                p.name()
            ))),
        }
    }

    pub fn into_quantum(self) -> Result<Proposition<UnitarySchema>> {
        match self {
            BuiltinProposition::Quantum(p) => Ok(p),
            BuiltinProposition::Finite(p) => Err(Error::InvalidParameter(format!(
                "{} is a finite proposition",
                p.name()
            ))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Marks {
    marks: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateRef {
    Index(usize),
    Label(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateParams {
    state: StateRef,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CutParams {
    dims: Vec<usize>,
    cut: usize,
}

fn params<T: DeserializeOwned>(kind: PropositionKind, value: &Value) -> Result<T> {
    let value = if value.is_null() {
        Value::Object(Default::default())
    } else {
        value.clone()
    };
    serde_json::from_value(value)
        .map_err(|e| Error::InvalidParameter(format!("{kind} parameters: {e}")))
}

fn wrong_world(kind: PropositionKind, world: &World<'_>) -> Error {
    Error::InvalidParameter(format!(
        "{kind} does not apply to a {} schema",
        world.name()
    ))
}

/// Builds the proposition `kind` for `world`.
///
/// Parameters are a JSON object (or `null` for none):
///
/// | kind               | params                        | world            |
/// |--------------------|-------------------------------|------------------|
/// | `FIXED_POINT`      | none                          | any              |
/// | `MARKED_SAME_HALF` | `{"marks": [0, 1]}`           | half or full deck|
/// | `IS_CONSTANT`      | none                          | shift            |
/// | `STATE_EQUALS`     | `{"state": 3}` or a label     | any finite       |
/// | `ENTANGLED_CUT`    | `{"dims": [2, 2], "cut": 1}`  | quantum          |
pub fn builtin_proposition(
    kind: PropositionKind,
    value: &Value,
    world: World<'_>,
) -> Result<BuiltinProposition> {
    match kind {
        PropositionKind::FixedPoint => {
            params::<NoParams>(kind, value)?;
            Ok(match world {
                World::Quantum(_) => BuiltinProposition::Quantum(fixed_point()),
                _ => BuiltinProposition::Finite(fixed_point()),
            })
        }
        PropositionKind::MarkedSameHalf => {
            let Marks { marks } = params(kind, value)?;
            match world {
                World::Deck(d) => Ok(BuiltinProposition::Finite(d.marked_same_half(&marks)?)),
                w => Err(wrong_world(kind, &w)),
            }
        }
        PropositionKind::IsConstant => {
            params::<NoParams>(kind, value)?;
            match world {
                World::Shift(s) => Ok(BuiltinProposition::Finite(s.is_constant_proposition())),
                w => Err(wrong_world(kind, &w)),
            }
        }
        PropositionKind::StateEquals => {
            let StateParams { state } = params(kind, value)?;
            let schema = world.finite().ok_or_else(|| wrong_world(kind, &world))?;
            let index = match state {
                StateRef::Index(i) => i,
                StateRef::Label(l) => schema
                    .states()
                    .position(&l)
                    .ok_or_else(|| Error::InvalidParameter(format!("no state labelled `{l}`")))?,
            };
            Ok(BuiltinProposition::Finite(state_equals(schema, index)?))
        }
        PropositionKind::EntangledCut => {
            let CutParams { dims, cut } = params(kind, value)?;
            match world {
                World::Quantum(q) => {
                    let total: usize = dims.iter().product();
                    if total != q.dim() {
                        return Err(Error::DimensionMismatch {
                            expected: q.dim(),
                            got: total,
                        });
                    }
                    let dec = Decomposition::computational(dims)?;
                    Ok(BuiltinProposition::Quantum(entangled_cut(dec, cut)?))
                }
                w => Err(wrong_world(kind, &w)),
            }
        }
    }
}

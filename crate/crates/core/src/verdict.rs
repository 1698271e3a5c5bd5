//! Classification records shared by the semidirect and codimension-one
//! classifiers.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// Three-valued answer. Serialized as JSON `true`, `false` or
/// `"undetermined"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Ternary {
    True,
    False,
    #[default]
    Undetermined,
}

impl Ternary {
    pub fn is_true(self) -> bool {
        self == Ternary::True
    }

    pub fn is_false(self) -> bool {
        self == Ternary::False
    }

    pub fn is_determined(self) -> bool {
        self != Ternary::Undetermined
    }

    pub fn as_option(self) -> Option<bool> {
        match self {
            Ternary::True => Some(true),
            Ternary::False => Some(false),
            Ternary::Undetermined => None,
        }
    }
}

impl From<bool> for Ternary {
    fn from(b: bool) -> Self {
        if b {
            Ternary::True
        } else {
            Ternary::False
        }
    }
}

impl fmt::Display for Ternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ternary::True => "true",
            Ternary::False => "false",
            Ternary::Undetermined => "undetermined",
        })
    }
}

impl Serialize for Ternary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ternary::True => s.serialize_bool(true),
            Ternary::False => s.serialize_bool(false),
            Ternary::Undetermined => s.serialize_str("undetermined"),
        }
    }
}

impl<'de> Deserialize<'de> for Ternary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Ternary;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("true, false or \"undetermined\"")
            }
            fn visit_bool<E: de::Error>(self, b: bool) -> Result<Ternary, E> {
                Ok(b.into())
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Ternary, E> {
                match s {
                    "undetermined" => Ok(Ternary::Undetermined),
                    "true" => Ok(Ternary::True),
                    "false" => Ok(Ternary::False),
                    other => Err(E::custom(format!("unexpected value '{other}'"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Which row of the decision table produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// Quasi-orbit not open, or nontrivial center: not square integrable.
    R1,
    /// Open single orbit with trivial stabilizer: square integrable, type I.
    R2,
    /// Open single orbit with discrete nontrivial stabilizer: type I only.
    R3,
    /// Open dense quasi-orbit made of proper orbits, connected stabilizer:
    /// square integrable and not type I.
    R4,
    /// Codimension-one extension without open coadjoint orbits.
    C0,
    /// Codimension-one extension with open orbits: square integrable
    /// classes exist and are all type I.
    C1,
    /// No rule applies.
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::C0 => "C0",
            Rule::C1 => "C1",
            Rule::Undetermined => "undetermined",
        };
        f.write_str(s)
    }
}

/// Orbit-side facts the decision table reads.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facts {
    pub trivial_center: Ternary,
    pub quasiorbit_open: Ternary,
    pub is_single_orbit: Ternary,
    pub stabilizer_trivial: Ternary,
    pub stabilizer_connected: Ternary,
    pub density_ok: Ternary,
}

impl Facts {
    pub fn named(&self) -> [(&'static str, Ternary); 6] {
        [
            ("trivial_center", self.trivial_center),
            ("quasiorbit_open", self.quasiorbit_open),
            ("is_single_orbit", self.is_single_orbit),
            ("stabilizer_trivial", self.stabilizer_trivial),
            ("stabilizer_connected", self.stabilizer_connected),
            ("density_ok", self.density_ok),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub square_integrable: Ternary,
    #[serde(rename = "type_I")]
    pub type_i: Ternary,
    pub rule: Rule,
    pub facts: Facts,
    /// Why a value is undetermined; never empty when something is.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reasons: Vec<String>,
}

impl Verdict {
    pub fn is_determined(&self) -> bool {
        self.square_integrable.is_determined() && self.type_i.is_determined()
    }

    /// Lists every broken consistency rule (empty when the verdict is sound).
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.square_integrable.is_true() && !self.facts.trivial_center.is_true() {
            out.push("square integrable without trivial center".to_string());
        }
        if self.square_integrable.is_true()
            && self.type_i.is_true()
            && !self.facts.stabilizer_trivial.is_true()
        {
            out.push("square integrable and type I without trivial stabilizer".to_string());
        }
        if !self.is_determined() {
            let any_fact = self.facts.named().iter().any(|(_, t)| t.is_determined());
            if self.reasons.is_empty() || !any_fact {
                out.push("undetermined verdict without explanatory facts".to_string());
            }
        }
        out
    }
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Three-valued hypothesis flag / semi-decision outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ternary {
    Yes,
    No,
    Unknown,
}

impl Ternary {
    pub const ALL: [Ternary; 3] = [Ternary::Yes, Ternary::No, Ternary::Unknown];

    pub fn is_yes(self) -> bool {
        self == Ternary::Yes
    }

    pub fn is_known(self) -> bool {
        self != Ternary::Unknown
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Ternary::Yes => "yes",
            Ternary::No => "no",
            Ternary::Unknown => "unknown",
        }
    }
}

impl From<bool> for Ternary {
    fn from(b: bool) -> Self {
        if b {
            Ternary::Yes
        } else {
            Ternary::No
        }
    }
}

impl fmt::Display for Ternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ternary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "yes" => Ok(Ternary::Yes),
            "no" => Ok(Ternary::No),
            "unknown" => Ok(Ternary::Unknown),
            other => Err(format!("expected yes|no|unknown, got `{other}`")),
        }
    }
}

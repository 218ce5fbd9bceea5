//! Structured results. Field order is fixed by declaration order, and every
//! rational is emitted as a `{num, den}` pair of integers.

use fujita_core::fujita::{Hypothesis, Witness, WitnessKind};
use fujita_core::nslattice::RationalClass;
use fujita_core::oracle::OracleReport;
use fujita_core::positivity::{PeClass, Twist};
use fujita_core::scalar::fmt_q;
use fujita_core::Rational;
use serde::Serialize;

/// Exit status contract: 0 exact or pass, 1 error, 2 interval or unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Exact,
    Error,
    Open,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Exact => 0,
            Status::Error => 1,
            Status::Open => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QJson {
    pub num: i64,
    pub den: i64,
}

impl From<&Rational> for QJson {
    fn from(q: &Rational) -> Self {
        Self { num: *q.numer(), den: *q.denom() }
    }
}

pub fn class_json(c: &RationalClass<i64>) -> Vec<QJson> {
    c.coords().iter().map(QJson::from).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeJson {
    pub m: Vec<QJson>,
    pub a: QJson,
}

impl From<&PeClass<i64>> for PeJson {
    fn from(l: &PeClass<i64>) -> Self {
        Self { m: class_json(&l.m), a: QJson::from(&l.a) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistJson {
    pub m: Vec<QJson>,
    pub a: u64,
}

impl From<&Twist<i64>> for TwistJson {
    fn from(t: &Twist<i64>) -> Self {
        Self { m: class_json(&t.m), a: t.a }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    pub kind: WitnessKind,
    pub twists: Vec<TwistJson>,
    pub adjoint_class: PeJson,
    pub fiber_degree: i64,
    pub pushforward_slope: Option<Vec<QJson>>,
    pub note: String,
}

impl From<&Witness<i64>> for WitnessJson {
    fn from(w: &Witness<i64>) -> Self {
        Self {
            kind: w.kind,
            twists: w.twists.twists.iter().map(TwistJson::from).collect(),
            adjoint_class: PeJson::from(&w.adjoint_class),
            fiber_degree: w.fiber_degree,
            pushforward_slope: w.pushforward_slope.as_ref().map(class_json),
            note: w.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalJson {
    pub denominator_is_rank: bool,
    pub congruent_coprime: bool,
    pub theta: Option<Vec<QJson>>,
    pub theta_splits: Option<String>,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitJson {
    pub indices: Vec<usize>,
    pub modulus: u64,
    pub theta: Vec<QJson>,
    pub remainder: Vec<QJson>,
    pub theta_ample: bool,
    pub remainder_ample: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductJson {
    pub x: Vec<QJson>,
    pub a: QJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Verdict {
        rank: u32,
        lower: u32,
        upper: u32,
        exact: Option<u32>,
        unresolved: Vec<Hypothesis>,
    },
    Cone {
        class: PeJson,
        nef_csst: Option<bool>,
        ample_csst: Option<bool>,
        nef_curve: Option<bool>,
        ample_curve: Option<bool>,
        product_image: Option<ProductJson>,
    },
    Pushforward {
        rank: u128,
        slope: Vec<QJson>,
        mu_minus: Option<QJson>,
        sym_power: u64,
        slope_criterion: Option<String>,
        critical: Option<CriticalJson>,
        split: Option<SplitJson>,
    },
    Partition {
        modulus: u64,
        values: Vec<u64>,
        decided: bool,
        indices: Option<Vec<usize>>,
        route: Option<String>,
    },
    Witnesses {
        lower: Option<WitnessJson>,
        upper: Option<WitnessJson>,
    },
    Oracle {
        passed: bool,
        reports: Vec<OracleReport>,
    },
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultEnvelope {
    pub query: String,
    pub input: Option<String>,
    pub outcome: Outcome,
    pub witness: Option<WitnessJson>,
    pub citations: Vec<String>,
    pub warnings: Vec<String>,
    /// Rows of the human-readable table.
    #[serde(skip)]
    pub table: Vec<(String, String)>,
}

impl ResultEnvelope {
    pub fn new(query: &str, input: Option<String>, outcome: Outcome) -> Self {
        Self { query: query.into(), input, outcome, witness: None, citations: Vec::new(), warnings: Vec::new(), table: Vec::new() }
    }

    pub fn error(query: &str, input: Option<String>, message: String) -> Self {
        let mut env = Self::new(query, input, Outcome::Error { message: message.clone() });
        env.row("error", message);
        env
    }

    pub fn row(&mut self, key: &str, value: impl Into<String>) {
        self.table.push((key.to_string(), value.into()));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }

    pub fn render_table(&self) -> String {
        let mut width = self.table.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        if !self.citations.is_empty() {
            width = width.max("criterion".len());
        }
        if !self.warnings.is_empty() {
            width = width.max("warning".len());
        }
        let mut out = String::new();
        for (k, v) in &self.table {
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
        for c in &self.citations {
            out.push_str(&format!("{:<width$}  {c}\n", "criterion"));
        }
        for w in &self.warnings {
            out.push_str(&format!("{:<width$}  {w}\n", "warning"));
        }
        out
    }
}

/// `"p/q"` rendering for table cells.
pub fn show_q(q: &Rational) -> String {
    fmt_q(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_pairs_and_keys_are_ordered() {
        let env = ResultEnvelope::new(
            "partition",
            None,
            Outcome::Partition { modulus: 3, values: vec![1, 2], decided: true, indices: None, route: None },
        );
        let json = env.to_json();
        let q = serde_json::to_string(&QJson::from(&Rational::new(-2, 4))).unwrap();
        assert_eq!(q, r#"{"num":-1,"den":2}"#);
        let keys = ["\"query\"", "\"input\"", "\"outcome\"", "\"witness\"", "\"citations\"", "\"warnings\""];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(!json.contains('.'));
    }
}

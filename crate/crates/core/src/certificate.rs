use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Indeterminate => "INDETERMINATE",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub value: String,
}

/// A named verdict with the exact data that justifies it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

impl Certificate {
    pub fn new(name: &str, verdict: Verdict) -> Self {
        Certificate { name: name.to_string(), verdict, witnesses: Vec::new() }
    }

    pub fn with(mut self, label: &str, value: impl ToString) -> Self {
        self.witnesses.push(Witness { label: label.to_string(), value: value.to_string() });
        self
    }

    pub fn push(&mut self, label: &str, value: impl ToString) {
        self.witnesses.push(Witness { label: label.to_string(), value: value.to_string() });
    }

    pub fn witness(&self, label: &str) -> Option<&str> {
        self.witnesses.iter().find(|w| w.label == label).map(|w| w.value.as_str())
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

//! Validity reports. Invalid input is data, not an error: validators collect
//! every violated condition together with the ids it concerns.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Issue {
    /// Stable machine-readable code, e.g. `dependent-vectors`.
    pub code: String,
    pub message: String,
    /// Face, facet or piece ids the issue is about.
    pub ids: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawReport", into = "RawReport")]
pub struct ValidityReport {
    issues: Vec<Issue>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReport {
    valid: bool,
    issues: Vec<Issue>,
}

impl TryFrom<RawReport> for ValidityReport {
    type Error = String;

    fn try_from(raw: RawReport) -> Result<Self, String> {
        if raw.valid != raw.issues.is_empty() {
            return Err("report `valid` flag disagrees with its issue list".into());
        }
        Ok(ValidityReport { issues: raw.issues })
    }
}

impl From<ValidityReport> for RawReport {
    fn from(r: ValidityReport) -> Self {
        RawReport { valid: r.issues.is_empty(), issues: r.issues }
    }
}

impl ValidityReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn issues(&self) -> &[Issue] {
        &self.issues
    }

    pub fn push<I, S>(&mut self, code: &str, message: impl Into<String>, ids: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.issues.push(Issue {
            code: code.to_string(),
            message: message.into(),
            ids: ids.into_iter().map(Into::into).collect(),
        });
    }

    pub fn merge(&mut self, other: ValidityReport) {
        self.issues.extend(other.issues);
    }

    /// Whether some issue mentions `id`.
    pub fn cites(&self, id: &str) -> bool {
        self.issues.iter().any(|i| i.ids.iter().any(|x| x == id))
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.issues.iter().any(|i| i.code == code)
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.issues.is_empty() {
            return f.write_str("valid");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "[{}] {}", issue.code, issue.message)?;
        }
        Ok(())
    }
}

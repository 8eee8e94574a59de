//! Check reports with a plain-text and a JSON rendering.
//!
//! Plain text:
//!
//! ```text
//! <subject>
//!   PASS  <check> [<scope>]  key=value key=value
//! result: PASS
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// `exact`, or `verified up to length L` for truncated checks.
    pub scope: String,
    pub certificate: BTreeMap<String, String>,
}

impl Check {
    pub fn new(name: &str, ok: bool, scope: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: Status::from_bool(ok),
            scope: scope.into(),
            certificate: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Check {
        self.certificate.insert(key.into(), value.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn render_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = format!("{}\n", self.subject);
        for c in &self.checks {
            let cert: Vec<String> = c.certificate.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(
                "  {}  {:width$} [{}]  {}\n",
                c.status.as_str(),
                c.name,
                c.scope,
                cert.join(" ")
            ));
        }
        out.push_str(&format!("result: {}\n", Status::from_bool(self.passed()).as_str()));
        out
    }
}

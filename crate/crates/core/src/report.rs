use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Outcome of one verification, with the claim it checks and supporting data.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub payload: Value,
}

impl CheckReport {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, ok: bool, payload: Value) -> Self {
        CheckReport { id: id.into(), anchor: anchor.into(), status: Status::from_bool(ok), payload }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

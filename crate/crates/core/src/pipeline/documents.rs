use serde::{Deserialize, Serialize};

/// Who produced a document and from which command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
}

impl Provenance {
    pub fn new(command: impl Into<String>) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
        }
    }
}

/// A result together with the inputs and tolerances that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunDocument<T> {
    pub provenance: Provenance,
    pub inputs: serde_json::Value,
    pub result: T,
}

impl<T: Serialize> RunDocument<T> {
    pub fn new(command: impl Into<String>, inputs: serde_json::Value, result: T) -> Self {
        RunDocument { provenance: Provenance::new(command), inputs, result }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

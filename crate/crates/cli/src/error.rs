use christol_core::Error;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or a violated precondition. Exit code 2.
    Input,
    /// A state, component or kernel cap was exceeded. Exit code 3.
    Cap,
    /// A verification check failed. Exit code 4.
    Verification,
}

#[derive(Clone, Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Input,
            message: msg.into(),
        }
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Verification,
            message: msg.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Cap => 3,
            ErrorKind::Verification => 4,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self.kind {
            ErrorKind::Input => "input",
            ErrorKind::Cap => "cap_exceeded",
            ErrorKind::Verification => "verification_failed",
        };
        json!({ "error": { "kind": kind, "message": self.message } })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::StateCapExceeded { .. }
            | Error::ComponentCapExceeded { .. }
            | Error::KernelNotStabilized { .. } => ErrorKind::Cap,
            Error::KernelMismatch { .. }
            | Error::Replay { .. }
            | Error::RouteDisagreement { .. } => ErrorKind::Verification,
            _ => ErrorKind::Input,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("{name}: oracle run invalid (leakage {leakage:e}, norm defect {norm_defect:e})")]
    OracleInvalid {
        name: String,
        leakage: f64,
        norm_defect: f64,
    },

    #[error("property check failed: {0}")]
    CheckFailed(String),

    #[error("{0}")]
    Io(String),
}

impl From<polydress::Error> for CliError {
    fn from(e: polydress::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::OracleInvalid { .. } | CliError::CheckFailed(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::OracleInvalid { .. } => "oracle_validity",
            CliError::CheckFailed(_) => "check_failed",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        let mut v = json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        });
        if let CliError::OracleInvalid {
            name,
            leakage,
            norm_defect,
        } = self
        {
            v["error"]["experiment"] = json!(name);
            v["error"]["leakage"] = json!(leakage);
            v["error"]["norm_defect"] = json!(norm_defect);
        }
        v.to_string()
    }
}

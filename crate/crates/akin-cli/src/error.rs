use akin::dispersion::DispersionError;
use akin::fit::FitError;
use akin::mode::ModeError;
use akin::nonlinear::SimError;
use akin::params::ParamError;
use serde::Serialize;
use thiserror::Error;

/// Exit status for a bad configuration or invocation.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for a failure inside a solver or while writing artifacts.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    /// Nothing to run. The binary prints usage text.
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) | CliError::Io { .. } => EXIT_NUMERICAL,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Io { .. } => "io",
        }
    }

    /// One-line JSON object for stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Report<'a> {
            error: &'a str,
            message: String,
            exit_code: i32,
        }
        serde_json::to_string(&Report {
            error: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        })
        .expect("error report serializes")
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<DispersionError> for CliError {
    fn from(e: DispersionError) -> Self {
        match e {
            DispersionError::TimeStep { .. }
            | DispersionError::Unsupported(_)
            | DispersionError::PsiBar(_)
            | DispersionError::Index { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ModeError> for CliError {
    fn from(e: ModeError) -> Self {
        match e {
            ModeError::Params(_)
            | ModeError::Wavenumber(_)
            | ModeError::TimeStep { .. }
            | ModeError::Window { .. }
            | ModeError::Dimension
            | ModeError::PoincareRange { .. }
            | ModeError::PsiBarAboveBound { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::CflViolation { .. }
            | SimError::BlowupDetected { .. }
            | SimError::NonFinite(_)
            | SimError::Snapshot(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<toml::de::Error> for CliError {
    fn from(e: toml::de::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_follow_the_kind() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Numerical("x".into()).exit_code(), 3);
        let e: CliError = SimError::BlowupDetected { t: 1.0, norm: 2.0 }.into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = SimError::Kappa.into();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn error_json_is_parseable() {
        let v: serde_json::Value =
            serde_json::from_str(&CliError::Numerical("bad \"root\"".into()).to_json()).unwrap();
        assert_eq!(v["error"], "numerical");
        assert_eq!(v["exit_code"], 3);
        assert_eq!(v["message"], "bad \"root\"");
    }
}

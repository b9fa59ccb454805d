use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("unknown prompt template `{0}`")]
    UnknownTemplate(String),
    #[error("solution text is required")]
    MissingSolution,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("API key environment variable `{0}` is not set")]
    MissingApiKey(String),
    #[error("request to `{url}` failed: {detail}")]
    Request { url: String, detail: String },
    #[error("endpoint returned HTTP {status}: {detail}")]
    Status { status: u16, detail: String },
    #[error("endpoint response not understood: {0}")]
    MalformedResponse(String),
}

#[derive(Debug, Error)]
pub enum FormalizeError {
    #[error("invalid endpoint configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("formalization failed after {attempts} attempt(s):\n{diagnostics}")]
    FormalizationFailed { attempts: u32, diagnostics: String },
}

//! Client for translating informal solutions into SimpleMath contexts via a
//! chat-completion endpoint.
//!
//! The prompt carries the full grammar, the statement-kind catalogue, and
//! two worked examples; replies are parsed and validated, and parse failures
//! trigger diagnostic-guided re-prompting within a bounded retry budget. A
//! scripted mock endpoint makes the whole loop runnable offline and
//! deterministic.

mod config;
mod endpoint;
mod error;
mod formalize;
mod prompt;

pub use config::LlmEndpointConfig;
pub use endpoint::{mock_endpoint, ChatEndpoint, HttpEndpoint, MockEndpoint};
pub use error::{FormalizeError, PromptError, TransportError};
pub use formalize::{
    append_transcript, formalize, strip_code_fences, AttemptRecord, FormalizationRequest,
    FormalizationResult,
};
pub use prompt::{
    build_formalization_prompt, render_prompt, FewShot, DEFAULT_TEMPLATE, FEW_SHOT_FIBONACCI,
    FEW_SHOT_LINEAR, GRAMMAR_BLOCK, STATEMENT_KINDS,
};

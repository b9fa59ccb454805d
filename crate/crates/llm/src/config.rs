use serde::{Deserialize, Serialize};

use crate::error::FormalizeError;

/// Connection settings for a chat-completion endpoint.
///
/// The API key itself is never held here — only the name of the environment
/// variable that carries it, so configs can be logged and serialized freely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LlmEndpointConfig {
    pub base_url: String,
    pub model: String,
    /// Environment variable holding the API key.
    pub api_key_env: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub request_timeout_ms: u64,
    /// Re-prompts after a failed parse, on top of the initial attempt.
    pub retries: u32,
}

impl Default for LlmEndpointConfig {
    fn default() -> LlmEndpointConfig {
        LlmEndpointConfig {
            base_url: "http://localhost:8000/v1".to_string(),
            model: "deepseek-chat".to_string(),
            api_key_env: "MATHSTEP_API_KEY".to_string(),
            temperature: 0.0,
            max_tokens: 4096,
            request_timeout_ms: 120_000,
            retries: 2,
        }
    }
}

impl LlmEndpointConfig {
    pub fn validate(&self) -> Result<(), FormalizeError> {
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(FormalizeError::InvalidConfig(format!(
                "temperature {} is outside [0, 2]",
                self.temperature
            )));
        }
        if self.base_url.is_empty() {
            return Err(FormalizeError::InvalidConfig("base URL is empty".into()));
        }
        Ok(())
    }
}

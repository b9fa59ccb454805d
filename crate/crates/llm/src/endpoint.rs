use std::sync::Mutex;
use std::time::Duration;

use crate::config::LlmEndpointConfig;
use crate::error::{FormalizeError, TransportError};

/// Anything that can answer a prompt: an HTTP chat-completion service or a
/// scripted stand-in for offline runs.
pub trait ChatEndpoint: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, TransportError>;
}

pub struct HttpEndpoint {
    config: LlmEndpointConfig,
    client: reqwest::blocking::Client,
}

impl HttpEndpoint {
    pub fn new(config: LlmEndpointConfig) -> Result<HttpEndpoint, FormalizeError> {
        config.validate()?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_millis(config.request_timeout_ms))
            .build()
            .map_err(|e| FormalizeError::InvalidConfig(format!("http client: {e}")))?;
        Ok(HttpEndpoint { config, client })
    }

    pub fn config(&self) -> &LlmEndpointConfig {
        &self.config
    }
}

impl ChatEndpoint for HttpEndpoint {
    fn complete(&self, prompt: &str) -> Result<String, TransportError> {
        // The key lives only on this stack frame; errors below scrub it so
        // it cannot leak through a message.
        let key = std::env::var(&self.config.api_key_env)
            .map_err(|_| TransportError::MissingApiKey(self.config.api_key_env.clone()))?;
        let url = format!(
            "{}/chat/completions",
            self.config.base_url.trim_end_matches('/')
        );
        let body = serde_json::json!({
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        });
        let response = self
            .client
            .post(&url)
            .bearer_auth(&key)
            .json(&body)
            .send()
            .map_err(|e| TransportError::Request {
                url: url.clone(),
                detail: scrub(&e.to_string(), &key),
            })?;
        let status = response.status().as_u16();
        let text = response.text().map_err(|e| TransportError::Request {
            url,
            detail: scrub(&e.to_string(), &key),
        })?;
        if !(200..300).contains(&status) {
            return Err(TransportError::Status {
                status,
                detail: scrub(excerpt(&text), &key),
            });
        }
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| TransportError::MalformedResponse(e.to_string()))?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| {
                TransportError::MalformedResponse(
                    "missing choices[0].message.content".to_string(),
                )
            })
    }
}

fn scrub(text: &str, key: &str) -> String {
    if key.is_empty() {
        text.to_string()
    } else {
        text.replace(key, "***")
    }
}

fn excerpt(text: &str) -> &str {
    let end = text
        .char_indices()
        .nth(300)
        .map_or(text.len(), |(i, _)| i);
    &text[..end]
}

/// Scripted endpoint: replies in order and repeats the last response once
/// the script runs out; every prompt it sees is recorded for assertions.
pub struct MockEndpoint {
    responses: Vec<String>,
    state: Mutex<MockState>,
}

#[derive(Default)]
struct MockState {
    cursor: usize,
    prompts: Vec<String>,
}

impl MockEndpoint {
    pub fn scripted<I, S>(responses: I) -> MockEndpoint
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        MockEndpoint {
            responses: responses.into_iter().map(Into::into).collect(),
            state: Mutex::new(MockState::default()),
        }
    }

    pub fn prompts(&self) -> Vec<String> {
        self.state.lock().unwrap().prompts.clone()
    }

    pub fn calls(&self) -> usize {
        self.state.lock().unwrap().cursor
    }
}

pub fn mock_endpoint<I, S>(script: I) -> MockEndpoint
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    MockEndpoint::scripted(script)
}

impl ChatEndpoint for MockEndpoint {
    fn complete(&self, prompt: &str) -> Result<String, TransportError> {
        let mut state = self.state.lock().unwrap();
        state.prompts.push(prompt.to_string());
        let index = state.cursor.min(self.responses.len().saturating_sub(1));
        state.cursor += 1;
        self.responses
            .get(index)
            .cloned()
            .ok_or_else(|| TransportError::MalformedResponse("mock script is empty".into()))
    }
}

//! Scripted model endpoints for offline runs. A mock script is a JSON file
//! with canned responses per role; each role replays its list in order and
//! repeats the last entry once exhausted.
//!
//! ```json
//! {
//!   "generator": ["solution text for attempt 1", "..."],
//!   "formalizer": ["context text for attempt 1", "..."]
//! }
//! ```

use serde::Deserialize;

use mathstep_llm::{ChatEndpoint, HttpEndpoint, MockEndpoint};

use crate::config::Settings;
use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MockScript {
    pub generator: Vec<String>,
    pub formalizer: Vec<String>,
}

pub fn load_mock_script(settings: &Settings) -> Result<MockScript, CliError> {
    let path = settings.mock_script.as_ref().ok_or_else(|| {
        CliError::Config("--mock needs --mock-script <file> for commands that call a model".into())
    })?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read mock script {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("bad mock script {}: {e}", path.display())))
}

fn scripted(role: &str, responses: Vec<String>) -> Result<Box<dyn ChatEndpoint>, CliError> {
    if responses.is_empty() {
        return Err(CliError::Config(format!(
            "mock script has no {role} responses"
        )));
    }
    Ok(Box::new(MockEndpoint::scripted(responses)))
}

fn http(config: &mathstep_llm::LlmEndpointConfig) -> Result<Box<dyn ChatEndpoint>, CliError> {
    HttpEndpoint::new(config.clone())
        .map(|endpoint| Box::new(endpoint) as Box<dyn ChatEndpoint>)
        .map_err(|e| CliError::Config(e.to_string()))
}

/// The endpoint `formalize` talks to: scripted under `--mock`, HTTP otherwise.
pub fn formalizer_endpoint(settings: &Settings) -> Result<Box<dyn ChatEndpoint>, CliError> {
    if settings.mock {
        scripted("formalizer", load_mock_script(settings)?.formalizer)
    } else {
        http(&settings.formalizer)
    }
}

pub type EndpointPair = (Box<dyn ChatEndpoint>, Box<dyn ChatEndpoint>);

/// Generator and formalizer endpoints for the refinement loop, built from a
/// single script read so both roles come from the same file.
pub fn refine_endpoints(settings: &Settings) -> Result<EndpointPair, CliError> {
    if settings.mock {
        let script = load_mock_script(settings)?;
        Ok((
            scripted("generator", script.generator)?,
            scripted("formalizer", script.formalizer)?,
        ))
    } else {
        Ok((http(&settings.generator)?, http(&settings.formalizer)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{resolve, Overrides};

    #[test]
    fn mock_without_script_is_a_config_error() {
        let mut settings = resolve(&Overrides::default()).unwrap();
        settings.mock = true;
        let err = formalizer_endpoint(&settings).err().unwrap();
        assert_eq!(err.exit_code(), 4);
        assert!(err.to_string().contains("--mock-script"));
    }

    #[test]
    fn empty_role_is_rejected_up_front() {
        let dir = tempfile::tempdir().unwrap();
        let script = dir.path().join("script.json");
        std::fs::write(&script, r#"{"formalizer": ["ctx"]}"#).unwrap();
        let mut settings = resolve(&Overrides::default()).unwrap();
        settings.mock = true;
        settings.mock_script = Some(script);
        assert!(formalizer_endpoint(&settings).is_ok());
        let err = refine_endpoints(&settings).err().unwrap();
        assert!(err.to_string().contains("generator"));
    }
}

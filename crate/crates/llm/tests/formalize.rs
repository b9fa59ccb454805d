//! The retry loop, end to end against scripted endpoints.

use mathstep_llm::{
    append_transcript, build_formalization_prompt, formalize, mock_endpoint, FormalizationRequest,
    FormalizeError, LlmEndpointConfig, FEW_SHOT_FIBONACCI,
};

fn fib_request() -> FormalizationRequest {
    FormalizationRequest::new(FEW_SHOT_FIBONACCI.problem, FEW_SHOT_FIBONACCI.solution)
}

#[test]
fn fibonacci_fixture_formalizes_in_one_attempt() {
    let endpoint = mock_endpoint([FEW_SHOT_FIBONACCI.context]);
    let config = LlmEndpointConfig::default();
    let result = formalize(&fib_request(), &endpoint, &config).unwrap();
    assert_eq!(result.attempts, 1);
    assert!(result.diagnostics.is_empty());
    assert_eq!(result.context.statements.len(), 3);
    assert!(result.context.goal.is_some());
    // The endpoint saw exactly the advertised prompt.
    let expected =
        build_formalization_prompt(FEW_SHOT_FIBONACCI.problem, FEW_SHOT_FIBONACCI.solution)
            .unwrap();
    assert_eq!(endpoint.prompts(), vec![expected]);
}

#[test]
fn fenced_reply_is_accepted() {
    let fenced = format!("```\n{}\n```", FEW_SHOT_FIBONACCI.context);
    let endpoint = mock_endpoint([fenced]);
    let result = formalize(&fib_request(), &endpoint, &LlmEndpointConfig::default()).unwrap();
    assert_eq!(result.attempts, 1);
}

#[test]
fn broken_then_valid_reply_takes_two_attempts() {
    let endpoint = mock_endpoint(["this is not a context file", FEW_SHOT_FIBONACCI.context]);
    let config = LlmEndpointConfig { retries: 2, ..Default::default() };
    let result = formalize(&fib_request(), &endpoint, &config).unwrap();
    assert_eq!(result.attempts, 2);
    assert_eq!(result.diagnostics.len(), 1);
    assert_eq!(result.transcript.len(), 2);
    assert!(result.transcript[0].diagnostic.is_some());
    assert!(result.transcript[1].diagnostic.is_none());
    // The re-prompt carries the failure back to the model.
    let prompts = endpoint.prompts();
    assert!(prompts[1].contains("Diagnostic:"), "{}", prompts[1]);
    assert!(prompts[1].contains(&result.diagnostics[0]));
}

#[test]
fn semantically_invalid_context_is_rejected_and_retried() {
    // Parses the surface syntax but cites a statement that does not exist.
    let bad = "problem: P.\ngoal: x = 1\n0 | CONCLUSION[5]: x = 1 // cites thin air\n";
    let endpoint = mock_endpoint([bad, FEW_SHOT_FIBONACCI.context]);
    let config = LlmEndpointConfig { retries: 1, ..Default::default() };
    let result = formalize(&fib_request(), &endpoint, &config).unwrap();
    assert_eq!(result.attempts, 2);
}

#[test]
fn zero_retries_with_a_broken_reply_fails_immediately() {
    let endpoint = mock_endpoint(["garbage"]);
    let config = LlmEndpointConfig { retries: 0, ..Default::default() };
    match formalize(&fib_request(), &endpoint, &config) {
        Err(FormalizeError::FormalizationFailed { attempts, diagnostics }) => {
            assert_eq!(attempts, 1);
            assert!(!diagnostics.is_empty());
        }
        other => panic!("expected FormalizationFailed, got {other:?}"),
    }
    assert_eq!(endpoint.calls(), 1);
}

#[test]
fn attempts_are_bounded_by_one_plus_retries() {
    let endpoint = mock_endpoint(["still garbage"]);
    let config = LlmEndpointConfig { retries: 2, ..Default::default() };
    match formalize(&fib_request(), &endpoint, &config) {
        Err(FormalizeError::FormalizationFailed { attempts, .. }) => assert_eq!(attempts, 3),
        other => panic!("expected FormalizationFailed, got {other:?}"),
    }
    assert_eq!(endpoint.calls(), 3);
}

#[test]
fn empty_solution_fails_before_any_request() {
    let endpoint = mock_endpoint([FEW_SHOT_FIBONACCI.context]);
    let request = FormalizationRequest::new("a problem", "   ");
    let err = formalize(&request, &endpoint, &LlmEndpointConfig::default()).unwrap_err();
    assert!(matches!(err, FormalizeError::Prompt(_)), "{err:?}");
    assert_eq!(endpoint.calls(), 0);
}

#[test]
fn transcript_persists_as_json_lines() {
    let endpoint = mock_endpoint(["broken", FEW_SHOT_FIBONACCI.context]);
    let config = LlmEndpointConfig { retries: 1, ..Default::default() };
    let result = formalize(&fib_request(), &endpoint, &config).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("transcript.jsonl");
    append_transcript(&path, &result.transcript).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    for line in lines {
        let value: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(value["prompt"].is_string());
        assert!(value["response"].is_string());
    }
}

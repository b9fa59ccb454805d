//! Library-level checks of the refinement loop's call budget and
//! determinism, using scripted endpoints whose call counts are observable.

mod common;

use common::tinysmt_path;

use mathstep_cli::refine;
use mathstep_critic::{Critic, CriticOptions, EquivOptions, SolverConfig};
use mathstep_llm::{LlmEndpointConfig, MockEndpoint};

const PROBLEM: &str = "What is 17 + 26?";
const WRONG_CTX: &str =
    "0 | FACT: a = 17 // first addend\n1 | FACT: b = 26 // second addend\n2 | CONCLUSION[0, 1]: a + b = 44 // add";
const RIGHT_CTX: &str =
    "0 | FACT: a = 17 // first addend\n1 | FACT: b = 26 // second addend\n2 | CONCLUSION[0, 1]: a + b = 43 // add";

fn critic() -> Critic {
    Critic::new(CriticOptions {
        solver: SolverConfig { path: Some(tinysmt_path()), ..SolverConfig::default() },
        equiv: EquivOptions::default(),
    })
}

#[test]
fn generator_calls_equal_iterations_and_never_exceed_the_cap() {
    let generator = MockEndpoint::scripted(["it is 44"]);
    let formalizer = MockEndpoint::scripted([WRONG_CTX]);
    let config = LlmEndpointConfig::default();
    let outcome = refine(PROBLEM, &generator, &formalizer, &config, &critic(), 3).unwrap();
    assert_eq!(outcome.iterations, 3);
    assert_eq!(generator.calls(), 3);
    // every round formalized on the first attempt
    assert_eq!(formalizer.calls(), 3);
}

#[test]
fn formalizer_calls_stay_within_retries_per_iteration() {
    let generator = MockEndpoint::scripted(["prose that cannot be formalized"]);
    let formalizer = MockEndpoint::scripted(["still prose, attempt after attempt"]);
    let config = LlmEndpointConfig { retries: 2, ..LlmEndpointConfig::default() };
    let max_iter = 2;
    let outcome = refine(PROBLEM, &generator, &formalizer, &config, &critic(), max_iter).unwrap();
    assert_eq!(outcome.iterations, 2);
    assert!(outcome.report.is_none());
    assert_eq!(generator.calls(), max_iter as usize);
    // each round burns the initial attempt plus `retries` re-prompts, no more
    assert_eq!(formalizer.calls(), (max_iter * (1 + config.retries)) as usize);
}

#[test]
fn a_correct_first_answer_draws_no_feedback() {
    let generator = MockEndpoint::scripted(["it is 43"]);
    let formalizer = MockEndpoint::scripted([RIGHT_CTX]);
    let config = LlmEndpointConfig::default();
    let outcome = refine(PROBLEM, &generator, &formalizer, &config, &critic(), 3).unwrap();
    assert_eq!(outcome.iterations, 1);
    assert!(outcome.report.unwrap().is_all_valid());
    assert_eq!(generator.calls(), 1);
    assert!(outcome.trace[0].feedback.is_none());
}

#[test]
fn feedback_prompts_carry_problem_prior_solution_and_numbered_findings() {
    let generator = MockEndpoint::scripted(["it is 44", "it is 43"]);
    let formalizer = MockEndpoint::scripted([WRONG_CTX, RIGHT_CTX]);
    let config = LlmEndpointConfig::default();
    let outcome = refine(PROBLEM, &generator, &formalizer, &config, &critic(), 3).unwrap();
    assert_eq!(outcome.iterations, 2);
    let feedback = outcome.trace[0].feedback.as_ref().unwrap();
    assert!(feedback.contains(PROBLEM));
    assert!(feedback.contains("it is 44"), "prior solution quoted verbatim");
    assert!(feedback.contains("\n1. Step 2"), "findings are numbered");
    assert!(feedback.contains("a + b = 43"), "the true value is shown");
    // the second prompt the generator saw is exactly that feedback
    assert_eq!(&generator.prompts()[1], feedback);
}

#[test]
fn scripted_runs_are_deterministic() {
    let run = || {
        let generator = MockEndpoint::scripted(["it is 44", "it is 43"]);
        let formalizer = MockEndpoint::scripted([WRONG_CTX, RIGHT_CTX]);
        let config = LlmEndpointConfig::default();
        let outcome = refine(PROBLEM, &generator, &formalizer, &config, &critic(), 3).unwrap();
        serde_json::to_string_pretty(&outcome).unwrap()
    };
    assert_eq!(run(), run());
}

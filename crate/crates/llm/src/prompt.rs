//! Formalization prompt assembly.
//!
//! The prompt teaches the model the SimpleMath grammar, the five statement
//! kinds, and shows two fully worked translations before presenting the
//! target problem. Everything is static text plus the two inputs, so a given
//! (template, problem, solution) triple always produces identical bytes.

use crate::error::PromptError;

pub const DEFAULT_TEMPLATE: &str = "standard";

/// Language reference included verbatim in every prompt.
pub const GRAMMAR_BLOCK: &str = r#"A context file has this shape:

    problem: <the original problem, verbatim, on one line>
    goal: <the final claim as a formula>
    <id> | <KIND>: <payload> // <the informal sentence this line formalizes>

Lines starting with `#` are comments. Statement ids start at 0 and increase
by 1. Only CONCLUSION lines cite earlier statements, in square brackets:
`4 | CONCLUSION[0, 2]: ...` means statement 4 is claimed to follow from
statements 0 and 2 (cite every statement the step actually uses).

Formulas:
  terms        integers and exact fractions (3, -2, 1/2, 2.5), variables,
               function application f(x), operators + - * / ^ and parentheses.
               Exponents must be nonnegative integer literals or variables.
  relations    =  !=  <  <=  >  >=
  membership   t in NN | ZZ | QQ | RR   (naturals, integers, rationals, reals)
  connectives  ->  /\  \/  ~   (implies, and, or, not)
  quantifiers  forall n, n in NN -> <formula>
               exists n, n in NN /\ <formula>

Function definitions use guarded branches, first matching guard wins:

    definition(f): NN -> NN f(n) := f(n-1) + f(n-2), if n >= 3; | 1, if n = 2; | 1, if n = 1"#;

/// The five statement kinds, included verbatim in every prompt.
pub const STATEMENT_KINDS: &str = r#"FACT        a given of the problem, taken as true without proof.
ASSUMPTION  a hypothesis the solution introduces (e.g. a case split or a
            variable being named); discharged informally later.
THEOREM     an external known result the solution appeals to, stated as a
            formula and trusted.
DEFINITION  a function definition in the `definition(...)` form above.
CONCLUSION  a derived step; must cite the statements it follows from and is
            the only kind that carries a premise list."#;

pub struct FewShot {
    pub problem: &'static str,
    pub solution: &'static str,
    pub context: &'static str,
}

pub const FEW_SHOT_FIBONACCI: FewShot = FewShot {
    problem: "Define the Fibonacci sequence by f(1) = 1, f(2) = 1 and f(n) = f(n-1) + f(n-2) for n >= 3. Compute f(4).",
    solution: "By the recurrence, f(3) = f(2) + f(1) = 1 + 1 = 2. Applying it again, f(4) = f(3) + f(2) = 2 + 1 = 3.",
    context: "problem: Define the Fibonacci sequence by f(1) = 1, f(2) = 1 and f(n) = f(n-1) + f(n-2) for n >= 3. Compute f(4).\n\
goal: f(4) = 3\n\
0 | DEFINITION: definition(f): NN -> NN f(n) := f(n-1) + f(n-2), if n >= 3; | 1, if n = 2; | 1, if n = 1 // the Fibonacci recurrence with its base cases\n\
1 | CONCLUSION[0]: f(3) = 2 // By the recurrence, f(3) = f(2) + f(1) = 1 + 1 = 2.\n\
2 | CONCLUSION[0, 1]: f(4) = 3 // Applying it again, f(4) = f(3) + f(2) = 2 + 1 = 3.\n",
};

pub const FEW_SHOT_LINEAR: FewShot = FewShot {
    problem: "Let x be a real number satisfying 2 * x + 1 = 7. Find x.",
    solution: "Subtracting 1 from both sides gives 2 * x = 6. Dividing by 2, x = 3.",
    context: "problem: Let x be a real number satisfying 2 * x + 1 = 7. Find x.\n\
goal: x = 3\n\
0 | FACT: x in RR // x is a real number\n\
1 | FACT: 2 * x + 1 = 7 // satisfying 2 * x + 1 = 7\n\
2 | CONCLUSION[1]: 2 * x = 6 // Subtracting 1 from both sides gives 2 * x = 6.\n\
3 | CONCLUSION[2]: x = 3 // Dividing by 2, x = 3.\n",
};

/// Build the formalization prompt from the standard template.
pub fn build_formalization_prompt(problem: &str, solution: &str) -> Result<String, PromptError> {
    render_prompt(DEFAULT_TEMPLATE, problem, solution)
}

pub fn render_prompt(
    template: &str,
    problem: &str,
    solution: &str,
) -> Result<String, PromptError> {
    if template != DEFAULT_TEMPLATE {
        return Err(PromptError::UnknownTemplate(template.to_string()));
    }
    if solution.trim().is_empty() {
        return Err(PromptError::MissingSolution);
    }
    let mut prompt = String::new();
    prompt.push_str(
        "You translate mathematical problems and their informal step-by-step \
         solutions into a formal context file written in the SimpleMath \
         language. Reply with the context file only — no commentary, no code \
         fences.\n\n",
    );
    prompt.push_str("## SimpleMath context files\n\n");
    prompt.push_str(GRAMMAR_BLOCK);
    prompt.push_str("\n\n## Statement kinds\n\n");
    prompt.push_str(STATEMENT_KINDS);
    for (index, shot) in [FEW_SHOT_FIBONACCI, FEW_SHOT_LINEAR].iter().enumerate() {
        prompt.push_str(&format!(
            "\n\n## Example {}\n\nProblem: {}\nSolution: {}\n\nContext:\n{}",
            index + 1,
            shot.problem,
            shot.solution,
            shot.context
        ));
    }
    prompt.push_str(&format!(
        "\n## Your task\n\nProblem: {}\nSolution: {}\n\nContext:\n",
        problem.trim(),
        solution.trim()
    ));
    Ok(prompt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mathstep_core::{parse_context, validate_context, Severity};

    #[test]
    fn prompt_contains_grammar_kinds_and_both_examples() {
        let prompt = build_formalization_prompt("P", "S").unwrap();
        assert!(prompt.contains(GRAMMAR_BLOCK));
        assert!(prompt.contains(STATEMENT_KINDS));
        assert!(prompt.contains(FEW_SHOT_FIBONACCI.context));
        assert!(prompt.contains(FEW_SHOT_LINEAR.context));
        assert!(prompt.contains("definition(f): NN -> NN"));
        assert!(prompt.ends_with("Context:\n"));
    }

    #[test]
    fn prompt_is_deterministic() {
        let a = build_formalization_prompt("some problem", "some solution").unwrap();
        let b = build_formalization_prompt("some problem", "some solution").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_solution_is_rejected() {
        assert_eq!(
            build_formalization_prompt("problem", "  \n"),
            Err(PromptError::MissingSolution)
        );
    }

    #[test]
    fn unknown_template_is_rejected() {
        assert_eq!(
            render_prompt("fancy", "p", "s"),
            Err(PromptError::UnknownTemplate("fancy".into()))
        );
    }

    #[test]
    fn few_shot_contexts_are_themselves_valid() {
        for shot in [FEW_SHOT_FIBONACCI, FEW_SHOT_LINEAR] {
            let ctx = parse_context(shot.context).expect("example context parses");
            let diagnostics = validate_context(&ctx);
            assert!(
                diagnostics.iter().all(|d| d.severity != Severity::Error),
                "example context has errors: {diagnostics:?}"
            );
        }
    }
}

//! The critic: route each judgment, run the tool chain, assemble the report.
//!
//! Every verdict comes from a tool. The chain per route is fixed:
//! arithmetic/algebraic judgments try CAS, then exact evaluation, then the
//! SMT solver; logical judgments try SMT first, then CAS. The first tool
//! that commits to Valid or Invalid wins; if they all abstain the verdict is
//! Unknown with every tool's reason.

use mathstep_cas::EquivOptions;
use mathstep_core::{
    build_graph, cost_metrics, judgments, print_formula, strengthened_corollaries, Context,
    GraphError, Judgment, StatementKind, Verdict,
};
use mathstep_smt::{SmtBackend, SolverConfig};
use rayon::prelude::*;

use crate::agents;
use crate::report::{Overall, Report, StepVerdict, REPORT_SCHEMA_VERSION};
use crate::route::{classify_judgment, Route};

#[derive(Clone, Debug, Default)]
pub struct CriticOptions {
    pub solver: SolverConfig,
    pub equiv: EquivOptions,
}

pub struct Critic {
    /// The backend, or the reason the SMT leg is unavailable. An absent
    /// solver degrades that leg to Unknown instead of failing verification.
    smt: Result<SmtBackend, String>,
    equiv: EquivOptions,
}

impl Critic {
    pub fn new(options: CriticOptions) -> Critic {
        Critic {
            smt: SmtBackend::new(options.solver).map_err(|e| e.to_string()),
            equiv: options.equiv,
        }
    }

    pub fn with_defaults() -> Critic {
        Critic::new(CriticOptions::default())
    }

    /// The solver binary in use, or the reason the SMT leg is disabled.
    pub fn solver(&self) -> Result<&std::path::Path, &str> {
        match &self.smt {
            Ok(backend) => Ok(backend.solver_path()),
            Err(reason) => Err(reason),
        }
    }

    pub fn verify_judgment(&self, judgment: &Judgment) -> Verdict {
        self.verify_routed(judgment, classify_judgment(judgment))
    }

    fn verify_routed(&self, judgment: &Judgment, route: Route) -> Verdict {
        let chain: &[Tool] = match route {
            Route::Arithmetic | Route::Algebraic => &[Tool::Cas, Tool::Eval, Tool::Smt],
            Route::Logical => &[Tool::Smt, Tool::Cas],
        };
        let mut reasons = Vec::with_capacity(chain.len());
        for tool in chain {
            let verdict = match tool {
                Tool::Cas => agents::cas::check(judgment, &self.equiv),
                Tool::Eval => agents::eval::check(judgment),
                Tool::Smt => match &self.smt {
                    Ok(backend) => backend.check_entailment(judgment),
                    Err(reason) => Verdict::unknown(format!("smt: solver unavailable ({reason})")),
                },
            };
            match verdict {
                Verdict::Unknown { reason } => reasons.push(reason),
                decided => return decided,
            }
        }
        Verdict::unknown(reasons.join("; "))
    }

    /// Verify every judgment in the context and assemble the report.
    /// Evaluation is complete: a failing step never short-circuits the rest.
    pub fn verify_context(&self, ctx: &Context) -> Result<Report, GraphError> {
        let js = judgments(ctx)?;
        let cost = cost_metrics(ctx)?;
        let graph = build_graph(ctx)?;
        let corollaries = strengthened_corollaries(&graph);

        let routes: Vec<Route> = js.iter().map(classify_judgment).collect();
        let verdicts: Vec<Verdict> = js
            .par_iter()
            .zip(routes.par_iter())
            .map(|(judgment, route)| self.verify_routed(judgment, *route))
            .collect();

        let mut steps = Vec::with_capacity(js.len());
        let mut submitted: u64 = 0;
        for ((judgment, route), verdict) in js.iter().zip(routes).zip(verdicts) {
            submitted += judgment.premises.len() as u64;
            steps.push(StepVerdict {
                id: judgment.conclusion.id,
                source_text: judgment.conclusion.source_text.clone(),
                formula: print_formula(&judgment.conclusion_formula),
                premises: judgment.conclusion.premises.clone(),
                route,
                verdict,
            });
        }

        let overall = Overall::of(&steps);
        let trusted_theorems = ctx
            .statements
            .iter()
            .filter(|s| s.kind == StatementKind::Theorem)
            .map(|s| s.id)
            .collect();
        Ok(Report {
            schema_version: REPORT_SCHEMA_VERSION,
            overall,
            verdicts: steps,
            cost,
            premise_statements_submitted: submitted,
            corollaries,
            trusted_theorems,
        })
    }
}

enum Tool {
    Cas,
    Eval,
    Smt,
}

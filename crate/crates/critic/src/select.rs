//! Best-of-n selection: among fully verified candidates, prefer the shortest
//! solution; ties go to the earliest candidate.

use mathstep_core::Context;

use crate::report::{Overall, Report};

pub fn select_solution(candidates: &[(Context, Report)]) -> Option<usize> {
    candidates
        .iter()
        .enumerate()
        .filter(|(_, (_, report))| report.overall == Overall::AllValid)
        .min_by_key(|(index, (ctx, _))| (ctx.statements.len(), *index))
        .map(|(index, _)| index)
}

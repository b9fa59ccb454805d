//! Script driver: reads SMT-LIB commands, maintains declarations and the
//! assertion stack, and answers `check-sat` / `get-model`.
//!
//! Assertions outside the supported fragment are dropped before solving.
//! Dropping only ever weakens the problem, so `unsat` remains trustworthy;
//! `sat` is reported only when nothing was dropped, otherwise a would-be
//! `sat` degrades to `unknown`.

use std::collections::BTreeMap;

use num::{BigRational, Signed, Zero};

use crate::fm::{solve_cube, CubeOutcome};
use crate::ir::{dnf, nnf, Flattener, Formula, FunDecl, Sort};
use crate::sexp::{parse_all, Sexp};

const DNF_CAP: usize = 4096;

struct Solver {
    decls: BTreeMap<String, FunDecl>,
    asserts: Vec<Sexp>,
    last_model: Option<String>,
}

/// Run a full SMT-LIB script and return everything the solver prints.
pub fn run_script(input: &str) -> String {
    let mut out: Vec<String> = Vec::new();
    match parse_all(input) {
        Err(e) => out.push(error_line(&e)),
        Ok(commands) => {
            let mut solver = Solver {
                decls: BTreeMap::new(),
                asserts: Vec::new(),
                last_model: None,
            };
            for command in &commands {
                if !solver.command(command, &mut out) {
                    break;
                }
            }
        }
    }
    let mut rendered = out.join("\n");
    if !rendered.is_empty() {
        rendered.push('\n');
    }
    rendered
}

fn error_line(message: &str) -> String {
    // Keep the payload a single well-formed string literal.
    format!("(error \"{}\")", message.replace('"', "'"))
}

impl Solver {
    /// Returns `false` when the script should stop (`exit`).
    fn command(&mut self, s: &Sexp, out: &mut Vec<String>) -> bool {
        let items = match s.list() {
            Some(items) => items,
            None => {
                out.push(error_line(&format!(
                    "expected a command, found `{s}`"
                )));
                return true;
            }
        };
        let head = match s.head() {
            Some(h) => h,
            None => {
                out.push(error_line("expected a command"));
                return true;
            }
        };
        let args = &items[1..];
        match head {
            // Configuration is accepted and ignored; we answer the same way
            // regardless of logic or options.
            "set-logic" | "set-info" | "set-option" => {}
            "declare-fun" => {
                if let Err(e) = self.declare_fun(args) {
                    out.push(error_line(&e));
                }
            }
            "declare-const" => {
                if let Err(e) = self.declare_const(args) {
                    out.push(error_line(&e));
                }
            }
            "assert" => match args {
                [formula] => self.asserts.push(formula.clone()),
                _ => out.push(error_line("`assert` takes exactly one formula")),
            },
            "check-sat" => out.push(self.check_sat()),
            "get-model" => match &self.last_model {
                Some(m) => out.push(m.clone()),
                None => out.push(error_line("model is not available")),
            },
            "exit" => return false,
            other => out.push(error_line(&format!("unsupported command `{other}`"))),
        }
        true
    }

    fn declare_fun(&mut self, args: &[Sexp]) -> Result<(), String> {
        let [name, arg_sorts, ret] = args else {
            return Err("`declare-fun` takes name, argument sorts, result sort".into());
        };
        let name = name
            .atom()
            .ok_or("`declare-fun` name must be a symbol")?;
        let arg_list = arg_sorts
            .list()
            .ok_or("`declare-fun` argument sorts must be a list")?;
        let mut parsed = Vec::new();
        for s in arg_list {
            parsed.push(Sort::parse(s).ok_or_else(|| format!("unknown sort `{s}`"))?);
        }
        let ret = Sort::parse(ret).ok_or_else(|| format!("unknown sort `{ret}`"))?;
        self.decls
            .insert(name.to_string(), FunDecl { args: parsed, ret });
        Ok(())
    }

    fn declare_const(&mut self, args: &[Sexp]) -> Result<(), String> {
        let [name, sort] = args else {
            return Err("`declare-const` takes name and sort".into());
        };
        let name = name
            .atom()
            .ok_or("`declare-const` name must be a symbol")?;
        let ret = Sort::parse(sort).ok_or_else(|| format!("unknown sort `{sort}`"))?;
        self.decls
            .insert(name.to_string(), FunDecl { args: Vec::new(), ret });
        Ok(())
    }

    fn check_sat(&mut self) -> String {
        self.last_model = None;
        let mut flattener = Flattener::new(&self.decls);
        let mut converted = Vec::new();
        let mut dropped = 0usize;
        for assertion in &self.asserts {
            match flattener.formula(assertion) {
                Ok(f) => converted.push(f),
                Err(_) => dropped += 1,
            }
        }
        let conjunction = Formula::And(converted);
        let cubes = match dnf(&nnf(&conjunction, false), DNF_CAP) {
            Some(c) => c,
            None => return "unknown".to_string(),
        };
        let mut witness: Option<BTreeMap<String, BigRational>> = None;
        let mut all_infeasible = true;
        for cube in &cubes {
            match solve_cube(cube, &flattener.var_sorts) {
                CubeOutcome::Infeasible => {}
                CubeOutcome::Feasible(model) => {
                    all_infeasible = false;
                    witness = Some(model);
                    if dropped == 0 {
                        break;
                    }
                }
                CubeOutcome::Unknown => all_infeasible = false,
            }
        }
        if all_infeasible {
            // Sound even with dropped assertions: dropping weakens, and a
            // weakened problem that is already unsatisfiable stays so.
            return "unsat".to_string();
        }
        match witness {
            Some(model) if dropped == 0 => {
                self.last_model = Some(self.render_model(&model));
                "sat".to_string()
            }
            _ => "unknown".to_string(),
        }
    }

    fn render_model(&self, model: &BTreeMap<String, BigRational>) -> String {
        let mut lines = vec!["(model".to_string()];
        for (name, decl) in &self.decls {
            if !decl.args.is_empty() {
                continue;
            }
            let body = match decl.ret {
                // A Bool constant can never reach the solved fragment, so a
                // sat answer was independent of it; any value works.
                Sort::Bool => "false".to_string(),
                _ => {
                    let value = model.get(name).cloned().unwrap_or_else(BigRational::zero);
                    render_value(&value)
                }
            };
            lines.push(format!(
                "  (define-fun {} () {} {})",
                name,
                decl.ret.name(),
                body
            ));
        }
        lines.push(")".to_string());
        lines.join("\n")
    }
}

fn render_value(value: &BigRational) -> String {
    if value.is_negative() {
        format!("(- {})", render_magnitude(&-value))
    } else {
        render_magnitude(value)
    }
}

fn render_magnitude(value: &BigRational) -> String {
    if value.is_integer() {
        value.to_integer().to_string()
    } else {
        format!("(/ {} {})", value.numer(), value.denom())
    }
}

use super::problem::{ProblemSpec, SystemSpec};
use crate::algebra::VarKind;

/// Canonical problem-file text; parses back to an equal problem.
pub fn emit_problem(spec: &ProblemSpec) -> String {
    let reg = &spec.registry;
    let mut out = String::new();
    let vars: Vec<String> = reg
        .iter()
        .map(|(_, info)| match info.kind {
            VarKind::Fiber => info.name.clone(),
            kind => format!("{}:{}", info.name, kind.tag()),
        })
        .collect();
    out.push_str(&format!("vars: {}\n", vars.join(", ")));
    match &spec.system {
        SystemSpec::Explicit { dependent, states, rhs } => {
            out.push_str(&format!("ode: {dependent}{} = {rhs}\n", "'".repeat(states.len())));
        }
        SystemSpec::Implicit { f, .. } => {
            out.push_str(&format!("ode: {f} = 0\n"));
        }
        SystemSpec::DVariety { ideal, section } => {
            for g in ideal {
                out.push_str(&format!("ideal: {g}\n"));
            }
            for (v, f) in section {
                out.push_str(&format!("section: {}' = {f}\n", reg.name(*v)));
            }
        }
    }
    for (v, f) in &spec.aux {
        out.push_str(&format!("aux: {}' = {f}\n", reg.name(*v)));
    }
    for h in &spec.integrals {
        out.push_str(&format!("integrals: {h}\n"));
    }
    if !spec.irreducible {
        out.push_str("irreducible: no\n");
    }
    out
}

//! Order reduction: an ODE in one dependent variable becomes a first-order
//! system on its states `y, y', ..., y^(n-1)`.

use std::collections::BTreeMap;

use super::{DVariety, Fibration, ProductSystem};
use crate::algebra::{groebner_basis, normalize_ratfunc, IdealBasis, Polynomial, RationalFunction, Var, VarKind};
use crate::error::{Error, Result};
use crate::parser::{ProblemSpec, SystemSpec};

fn aux_section(spec: &ProblemSpec) -> BTreeMap<Var, RationalFunction> {
    spec.aux.iter().cloned().collect()
}

fn chain_section(spec: &ProblemSpec, states: &[Var]) -> BTreeMap<Var, RationalFunction> {
    let mut section = aux_section(spec);
    for w in states.windows(2) {
        section.insert(w[0], RationalFunction::var(&spec.registry, w[1]));
    }
    section
}

/// `y^(n) = rhs` becomes `s = (y', ..., y^(n-1), rhs)` with an empty ideal.
pub fn compile_explicit_ode(spec: &ProblemSpec) -> Result<Fibration> {
    let SystemSpec::Explicit { states, rhs, .. } = &spec.system else {
        return Err(Error::WrongMode(format!("expected an explicit ODE, found {}", spec.mode().as_str())));
    };
    let reg = &spec.registry;
    if let Some(v) = rhs.variables().into_iter().find(|&v| reg.kind(v) == VarKind::Fiber && !states.contains(&v)) {
        return Err(Error::MalformedRhs(format!("`{}` is not a state of the equation", reg.name(v))));
    }
    let mut section = chain_section(spec, states);
    section.insert(*states.last().expect("order at least one"), rhs.clone());
    Fibration::new(DVariety::new(reg, Vec::new(), section, Vec::new(), spec.irreducible)?)
}

/// `F(t, y, ..., y^(k)) = 0` differentiated once and solved for `y^(k+1)`;
/// the ideal is `<F>` and the division by `dF/dy^(k)` is recorded in the
/// excluded locus.
pub fn compile_implicit_ode(spec: &ProblemSpec) -> Result<Fibration> {
    let SystemSpec::Implicit { states, f } = &spec.system else {
        return Err(Error::WrongMode(format!("expected an implicit ODE, found {}", spec.mode().as_str())));
    };
    let reg = &spec.registry;
    let top = *states.last().expect("at least one state");
    let f_top = f.partial(top);
    if f_top.is_zero() {
        return Err(Error::DegenerateLeadingDerivative);
    }
    let ideal = groebner_basis(&IdealBasis::new(reg, vec![f.clone()]));
    if ideal.is_unit() {
        return Err(Error::InconsistentIdeal);
    }
    if ideal.contains(&f_top) {
        return Err(Error::NotSolvable(f_top.to_string()));
    }
    // total derivative of F without the top-derivative term
    let mut rest = Polynomial::zero(reg);
    if let Some(t) = reg.time() {
        rest = f.partial(t);
    }
    for w in states.windows(2) {
        rest = &rest + &(&f.partial(w[0]) * &Polynomial::var(reg, w[1]));
    }
    let mut top_value = normalize_ratfunc(-rest, f_top.clone())?;
    for (a, rule) in &spec.aux {
        let da = f.partial(*a);
        if !da.is_zero() {
            let term = RationalFunction::from_poly(da).checked_div(&RationalFunction::from_poly(f_top.clone()))?;
            top_value = &top_value - &(&term * rule);
        }
    }
    let mut section = chain_section(spec, states);
    section.insert(top, top_value);
    let variety = DVariety::new(reg, vec![f.clone()], section, vec![f_top], spec.irreducible)?;
    Fibration::new(variety)
}

/// Compiles any problem file; auxiliary variables become the w part.
pub fn compile(spec: &ProblemSpec) -> Result<ProductSystem> {
    let fibration = match &spec.system {
        SystemSpec::Explicit { .. } => compile_explicit_ode(spec)?,
        SystemSpec::Implicit { .. } => compile_implicit_ode(spec)?,
        SystemSpec::DVariety { ideal, section } => {
            let mut map = aux_section(spec);
            map.extend(section.iter().cloned());
            Fibration::new(DVariety::new(&spec.registry, ideal.clone(), map, Vec::new(), spec.irreducible)?)?
        }
    };
    Ok(ProductSystem::from_fibration(fibration))
}

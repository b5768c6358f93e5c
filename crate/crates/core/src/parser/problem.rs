//! The line-oriented problem-file format.
//!
//! ```text
//! # comment
//! vars: t:time, y1, y2, g:param, a:aux, c:const
//! ode: y'' = 6*y^2 + t          # explicit: lone derivative on the left
//! ode: (y')^2 = 4*y^3 + 4*y + 1 # implicit: anything else
//! ideal: y1^2 - 4*y0^3 - 4*y0 - 1
//! section: y0' = y1
//! aux: a' = 2*a
//! integrals: (y' - 2*y)/a
//! irreducible: no
//! ```
//!
//! Unmarked variables are fiber coordinates. Without a declared time variable
//! `t:time` is added in front. In ODE mode the declared fiber variables are
//! the states (`y, y', ...` in order); when none are declared, states named
//! after the dependent variable are appended (`y` for first order, otherwise
//! `y0, y1, ...`).

use num_traits::ToPrimitive;

use super::expr::{parse_in_scope, Derivatives, Scope};
use super::lexer::{tokenize, Tok, Token};
use crate::algebra::{Polynomial, RationalFunction, Registry, Var, VarKind, VariableRegistry};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    ExplicitOde,
    ImplicitOde,
    DVariety,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::ExplicitOde => "explicit-ode",
            Mode::ImplicitOde => "implicit-ode",
            Mode::DVariety => "dvariety",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SystemSpec {
    /// `dependent^(n) = rhs` with states `dependent, ..., dependent^(n-1)`.
    Explicit {
        dependent: String,
        states: Vec<Var>,
        rhs: RationalFunction,
    },
    /// `f = 0` in the states `dependent, ..., dependent^(k)`.
    Implicit {
        states: Vec<Var>,
        f: Polynomial,
    },
    DVariety {
        ideal: Vec<Polynomial>,
        section: Vec<(Var, RationalFunction)>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub registry: Registry,
    pub system: SystemSpec,
    /// Derivation rules of the auxiliary variables, in registry order.
    pub aux: Vec<(Var, RationalFunction)>,
    pub integrals: Vec<RationalFunction>,
    pub irreducible: bool,
    /// Dependent variable and its state variables when the file is an ODE.
    pub notation: Option<(String, Vec<Var>)>,
}

impl ProblemSpec {
    pub fn mode(&self) -> Mode {
        match self.system {
            SystemSpec::Explicit { .. } => Mode::ExplicitOde,
            SystemSpec::Implicit { .. } => Mode::ImplicitOde,
            SystemSpec::DVariety { .. } => Mode::DVariety,
        }
    }

    /// Order of the differential equation; `None` in D-variety mode.
    pub fn ode_order(&self) -> Option<usize> {
        match &self.system {
            SystemSpec::Explicit { states, .. } => Some(states.len()),
            SystemSpec::Implicit { states, .. } => Some(states.len() - 1),
            SystemSpec::DVariety { .. } => None,
        }
    }

    /// Parses an expression over the problem's variables, accepting the same
    /// derivative notation as the `integrals:` lines.
    pub fn parse_expression(&self, text: &str) -> Result<RationalFunction> {
        let derivatives = self.notation.as_ref().map(|(dependent, states)| Derivatives { dependent, states });
        parse_in_scope(text, 0, Scope { reg: &self.registry, derivatives })
    }
}

struct Line<'a> {
    number: usize,
    /// byte offset of `text` within the line
    column: usize,
    text: &'a str,
}

/// Attaches the file position; syntax offsets are relative to `base` within the line text.
fn at(line: &Line, base: usize, e: Error) -> Error {
    let local = match &e {
        Error::At { .. } | Error::Problem { .. } => return e,
        Error::Syntax { offset, .. } => *offset,
        _ => 0,
    };
    let column = line.column + base + local + 1;
    Error::At { line: line.number, column, inner: Box::new(e) }
}

fn problem(line: &Line, message: impl Into<String>) -> Error {
    Error::Problem { line: line.number, message: message.into() }
}

struct Sections<'a> {
    vars: Vec<Line<'a>>,
    ode: Option<Line<'a>>,
    ideal: Vec<Line<'a>>,
    section: Vec<Line<'a>>,
    aux: Vec<Line<'a>>,
    integrals: Vec<Line<'a>>,
    irreducible: Option<Line<'a>>,
}

fn split_sections(text: &str) -> Result<Sections<'_>> {
    let mut s = Sections {
        vars: Vec::new(),
        ode: None,
        ideal: Vec::new(),
        section: Vec::new(),
        aux: Vec::new(),
        integrals: Vec::new(),
        irreducible: None,
    };
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            return Err(Error::Problem { line: number, message: "expected `keyword: value`".into() });
        };
        let keyword = content[..colon].trim();
        let line = Line { number, column: colon + 1, text: &content[colon + 1..] };
        match keyword {
            "vars" => s.vars.push(line),
            "ode" => {
                if s.ode.is_some() {
                    return Err(problem(&line, "only one `ode:` line is allowed"));
                }
                s.ode = Some(line);
            }
            "ideal" => s.ideal.push(line),
            "section" => s.section.push(line),
            "aux" => s.aux.push(line),
            "integrals" | "integral" => s.integrals.push(line),
            "irreducible" => s.irreducible = Some(line),
            other => return Err(problem(&line, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(s)
}

/// `(name, kind, offset)` entries of the `vars:` lines.
fn declared_vars<'a>(lines: &'a [Line<'a>]) -> Result<Vec<(&'a str, VarKind, &'a Line<'a>, usize)>> {
    let mut out = Vec::new();
    for line in lines {
        let mut offset = 0;
        for item in line.text.split(',') {
            let start = offset + (item.len() - item.trim_start().len());
            offset += item.len() + 1;
            let item = item.trim();
            if item.is_empty() {
                return Err(at(line, start, Error::Syntax { offset: 0, message: "empty variable entry".into() }));
            }
            let (name, kind) = match item.split_once(':') {
                Some((n, k)) => {
                    let kind = VarKind::from_tag(k.trim()).ok_or_else(|| {
                        at(
                            line,
                            start,
                            Error::Syntax { offset: 0, message: format!("unknown variable kind `{}`", k.trim()) },
                        )
                    })?;
                    (n.trim(), kind)
                }
                None => (item, VarKind::Fiber),
            };
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(at(
                    line,
                    start,
                    Error::Syntax { offset: 0, message: format!("invalid variable name `{name}`") },
                ));
            }
            out.push((name, kind, line, start));
        }
    }
    Ok(out)
}

/// `x' = expr` split into the variable name and the right-hand side.
fn derivative_rule<'a>(line: &'a Line<'a>) -> Result<(String, &'a str, usize)> {
    let toks = tokenize(line.text).map_err(|e| at(line, 0, e))?;
    let eq = toks.iter().position(|t| t.tok == Tok::Eq);
    match (toks.first(), toks.get(1), eq) {
        (Some(Token { tok: Tok::Ident(name), .. }), Some(Token { tok: Tok::Prime, .. }), Some(2)) => {
            let rhs_start = toks[2].offset + 1;
            Ok((name.clone(), &line.text[rhs_start..], rhs_start))
        }
        _ => Err(at(
            line,
            toks.first().map_or(0, |t| t.offset),
            Error::Syntax { offset: 0, message: "expected `name' = expression`".into() },
        )),
    }
}

enum OdeShape {
    Explicit { dependent: String, order: u32 },
    Implicit { dependent: Option<String>, order: Option<u32> },
}

fn ode_shape(line: &Line) -> Result<(OdeShape, usize)> {
    let toks = tokenize(line.text).map_err(|e| at(line, 0, e))?;
    let eqs: Vec<usize> = toks.iter().enumerate().filter(|(_, t)| t.tok == Tok::Eq).map(|(i, _)| i).collect();
    if eqs.len() != 1 {
        let offset = eqs.get(1).map_or(line.text.len(), |&i| toks[i].offset);
        return Err(at(line, offset, Error::Syntax { offset: 0, message: "expected exactly one `=`".into() }));
    }
    let eq = eqs[0];
    let lhs = &toks[..eq];
    let lone = match lhs {
        [Token { tok: Tok::Ident(n), .. }, rest @ ..]
            if !rest.is_empty() && rest.iter().all(|t| t.tok == Tok::Prime) =>
        {
            Some((n.clone(), rest.len() as u32))
        }
        [Token { tok: Tok::Ident(n), .. }, Token { tok: Tok::Caret, .. }, Token { tok: Tok::LParen, .. }, Token { tok: Tok::Int(k), .. }, Token { tok: Tok::RParen, .. }] => {
            k.to_u32().filter(|&k| k >= 1).map(|k| (n.clone(), k))
        }
        _ => None,
    };
    let eq_offset = toks[eq].offset;
    if let Some((dependent, order)) = lone {
        return Ok((OdeShape::Explicit { dependent, order }, eq_offset));
    }
    let mut dependent: Option<String> = None;
    let mut order: Option<u32> = None;
    let mut i = 0;
    while i < toks.len() {
        if let Tok::Ident(n) = &toks[i].tok {
            let primes = toks[i + 1..].iter().take_while(|t| t.tok == Tok::Prime).count() as u32;
            if primes > 0 {
                if dependent.as_deref().is_some_and(|d| d != n) {
                    return Err(at(
                        line,
                        toks[i].offset,
                        Error::Syntax { offset: 0, message: "derivatives of more than one variable".into() },
                    ));
                }
                dependent = Some(n.clone());
                order = Some(order.unwrap_or(0).max(primes));
            }
        }
        i += 1;
    }
    // y^(k) counts once the dependent variable is known from primes
    if let Some(d) = &dependent {
        for w in toks.windows(5) {
            if let [Token { tok: Tok::Ident(n), .. }, Token { tok: Tok::Caret, .. }, Token { tok: Tok::LParen, .. }, Token { tok: Tok::Int(k), .. }, Token { tok: Tok::RParen, .. }] =
                w
            {
                if n == d {
                    order = Some(order.unwrap_or(0).max(k.to_u32().unwrap_or(u32::MAX)));
                }
            }
        }
    }
    Ok((OdeShape::Implicit { dependent, order }, eq_offset))
}

fn default_state_names(dependent: &str, count: usize, explicit: bool) -> Vec<String> {
    if explicit && count == 1 {
        vec![dependent.to_string()]
    } else {
        (0..count).map(|i| format!("{dependent}{i}")).collect()
    }
}

fn as_polynomial(f: RationalFunction, what: &str) -> Result<Polynomial> {
    match f.denominator().constant_value() {
        Some(c) => Ok(f.numerator().scale(&c.recip())),
        None => Err(Error::NotPolynomial(format!("{what} `{f}`"))),
    }
}

/// Parses a problem file, resolving variables and derivative notation.
pub fn parse_problem_file(text: &str) -> Result<ProblemSpec> {
    let s = split_sections(text)?;
    let declared = declared_vars(&s.vars)?;
    let mut reg = VariableRegistry::empty();
    let has_time = declared.iter().any(|d| d.1 == VarKind::Time);
    if !has_time {
        if declared.iter().any(|d| d.0 == "t") {
            return Err(Error::NoTimeVariable);
        }
        reg.push("t", VarKind::Time)?;
    }
    for &(name, kind, line, offset) in &declared {
        reg.push(name, kind).map_err(|e| at(line, offset, e))?;
    }

    if s.ode.is_some() {
        if let Some(l) = s.ideal.first().or(s.section.first()) {
            return Err(problem(l, "`ideal:` and `section:` lines are not allowed together with `ode:`"));
        }
    }

    // ODE states
    let declared_fibers = reg.vars_of_kind(VarKind::Fiber);
    let mut ode_info = None;
    if let Some(line) = &s.ode {
        let (shape, eq_offset) = ode_shape(line)?;
        let (explicit, dependent, count) = match &shape {
            OdeShape::Explicit { dependent, order } => (true, dependent.clone(), *order as usize),
            OdeShape::Implicit { dependent, order } => {
                let count = match order {
                    Some(k) => *k as usize + 1,
                    None if declared_fibers.is_empty() => {
                        return Err(problem(
                            line,
                            "implicit equation without derivatives needs declared state variables",
                        ));
                    }
                    None => declared_fibers.len(),
                };
                (false, dependent.clone().unwrap_or_else(|| "y".to_string()), count)
            }
        };
        let states: Vec<Var> = if declared_fibers.is_empty() {
            let mut v = Vec::new();
            for name in default_state_names(&dependent, count, explicit) {
                v.push(reg.push(&name, VarKind::Fiber).map_err(|e| at(line, 0, e))?);
            }
            v
        } else if declared_fibers.len() == count {
            declared_fibers.clone()
        } else {
            return Err(problem(
                line,
                format!("equation needs {count} state variables but {} are declared", declared_fibers.len()),
            ));
        };
        if let Some(v) = reg.index_of(&dependent) {
            if v != states[0] {
                return Err(problem(
                    line,
                    format!("dependent variable `{dependent}` names a different declared variable"),
                ));
            }
        }
        ode_info = Some((shape, eq_offset, dependent, states));
    }

    // auxiliary rules may introduce undeclared auxiliary variables
    let mut aux_rules: Vec<(String, &str, usize, &Line)> = Vec::new();
    for line in &s.aux {
        let (name, rhs, off) = derivative_rule(line)?;
        match reg.index_of(&name) {
            Some(v) if reg.kind(v) != VarKind::Aux => {
                return Err(problem(line, format!("`{name}` is not an auxiliary variable")));
            }
            Some(_) => {}
            None => {
                reg.push(&name, VarKind::Aux)?;
            }
        }
        aux_rules.push((name, rhs, off, line));
    }

    let reg = reg.into_shared();
    let plain = Scope::plain(&reg);

    let mut aux: Vec<(Var, RationalFunction)> = Vec::new();
    for (name, rhs, off, line) in &aux_rules {
        let v = reg.lookup(name)?;
        if aux.iter().any(|(u, _)| *u == v) {
            return Err(problem(line, format!("second rule for `{name}`")));
        }
        let f = parse_in_scope(rhs, 0, plain).map_err(|e| at(line, *off, e))?;
        aux.push((v, f));
    }

    let (system, integral_scope_states, dependent_name) = match ode_info {
        Some((shape, eq_offset, dependent, states)) => {
            let line = s.ode.as_ref().unwrap();
            let lhs_text = &line.text[..eq_offset];
            let rhs_text = &line.text[eq_offset + 1..];
            match shape {
                OdeShape::Explicit { .. } => {
                    let scope =
                        Scope { reg: &reg, derivatives: Some(Derivatives { dependent: &dependent, states: &states }) };
                    let rhs = parse_in_scope(rhs_text, 0, scope).map_err(|e| at(line, eq_offset + 1, e))?;
                    (
                        SystemSpec::Explicit { dependent: dependent.clone(), states: states.clone(), rhs },
                        states,
                        dependent,
                    )
                }
                OdeShape::Implicit { .. } => {
                    let scope =
                        Scope { reg: &reg, derivatives: Some(Derivatives { dependent: &dependent, states: &states }) };
                    let lhs = parse_in_scope(lhs_text, 0, scope).map_err(|e| at(line, 0, e))?;
                    let rhs = parse_in_scope(rhs_text, 0, scope).map_err(|e| at(line, eq_offset + 1, e))?;
                    let f = as_polynomial(&lhs - &rhs, "implicit equation").map_err(|e| at(line, 0, e))?;
                    let f = f.scale(&f.content().recip());
                    (SystemSpec::Implicit { states: states.clone(), f }, states, dependent)
                }
            }
        }
        None => {
            let mut ideal = Vec::new();
            for line in &s.ideal {
                let f = parse_in_scope(line.text, 0, plain).map_err(|e| at(line, 0, e))?;
                ideal.push(as_polynomial(f, "ideal generator").map_err(|e| at(line, 0, e))?);
            }
            let mut section: Vec<(Var, RationalFunction)> = Vec::new();
            for line in &s.section {
                let (name, rhs, off) = derivative_rule(line)?;
                let v = reg.lookup(&name).map_err(|e| at(line, 0, e))?;
                let f = parse_in_scope(rhs, 0, plain).map_err(|e| at(line, off, e))?;
                match reg.kind(v) {
                    VarKind::Fiber => {
                        if section.iter().any(|(u, _)| *u == v) {
                            return Err(problem(line, format!("second section entry for `{name}`")));
                        }
                        section.push((v, f));
                    }
                    VarKind::Aux => {
                        if aux.iter().any(|(u, _)| *u == v) {
                            return Err(problem(line, format!("second rule for `{name}`")));
                        }
                        aux.push((v, f));
                    }
                    _ => {
                        return Err(problem(
                            line,
                            format!("`{name}` has no section entry; it is not a fiber or auxiliary variable"),
                        ))
                    }
                }
            }
            for v in reg.vars_of_kind(VarKind::Fiber) {
                if !section.iter().any(|(u, _)| *u == v) {
                    return Err(Error::MissingSection(reg.name(v).to_string()));
                }
            }
            section.sort_by_key(|(v, _)| *v);
            (SystemSpec::DVariety { ideal, section }, Vec::new(), String::new())
        }
    };
    for v in reg.vars_of_kind(VarKind::Aux) {
        if !aux.iter().any(|(u, _)| *u == v) {
            return Err(Error::MissingSection(reg.name(v).to_string()));
        }
    }
    aux.sort_by_key(|(v, _)| *v);

    let notation = (!integral_scope_states.is_empty()).then(|| (dependent_name.clone(), integral_scope_states.clone()));
    let integral_scope = if integral_scope_states.is_empty() {
        plain
    } else {
        Scope {
            reg: &reg,
            derivatives: Some(Derivatives { dependent: &dependent_name, states: &integral_scope_states }),
        }
    };
    let mut integrals = Vec::new();
    for line in &s.integrals {
        let f = parse_in_scope(line.text, 0, integral_scope).map_err(|e| at(line, 0, e))?;
        integrals.push(f);
    }

    let irreducible = match &s.irreducible {
        None => true,
        Some(line) => match line.text.trim() {
            "yes" | "true" => true,
            "no" | "false" => false,
            other => return Err(problem(line, format!("expected yes or no, found `{other}`"))),
        },
    };

    Ok(ProblemSpec { registry: reg, system, aux, integrals, irreducible, notation })
}

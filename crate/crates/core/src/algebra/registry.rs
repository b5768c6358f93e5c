use std::sync::Arc;

use crate::error::{Error, Result};

use super::order::MonomialOrder;

/// Index of a variable inside its registry.
pub type Var = usize;

pub type Registry = Arc<VariableRegistry>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// The independent variable, with derivative 1.
    Time,
    /// A coordinate of the D-variety under study.
    Fiber,
    /// A coordinate of an auxiliary system carrying particular solutions.
    Aux,
    /// A symbolic constant of the problem.
    Param,
    /// A generic level value adjoined by the level-set computations.
    Adjoined,
}

impl VarKind {
    /// Base-like variables behave as field elements under the default order.
    pub fn is_base(self) -> bool {
        matches!(self, VarKind::Time | VarKind::Param | VarKind::Adjoined)
    }

    /// Variables that move along the flow.
    pub fn is_dynamic(self) -> bool {
        matches!(self, VarKind::Fiber | VarKind::Aux)
    }

    pub fn tag(self) -> &'static str {
        match self {
            VarKind::Time => "time",
            VarKind::Fiber => "fiber",
            VarKind::Aux => "aux",
            VarKind::Param => "param",
            VarKind::Adjoined => "const",
        }
    }

    pub fn from_tag(tag: &str) -> Option<VarKind> {
        Some(match tag {
            "time" => VarKind::Time,
            "fiber" => VarKind::Fiber,
            "aux" => VarKind::Aux,
            "param" => VarKind::Param,
            "const" => VarKind::Adjoined,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarInfo {
    pub name: String,
    pub kind: VarKind,
}

/// Ordered, immutable list of named variables.
///
/// The order is fixed for the registry's lifetime and determines the
/// exponent-vector layout of every polynomial built over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableRegistry {
    vars: Vec<VarInfo>,
}

impl VariableRegistry {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, VarKind)>) -> Result<Self> {
        let mut reg = VariableRegistry { vars: Vec::new() };
        for (name, kind) in vars {
            reg.push(name.into(), kind)?;
        }
        Ok(reg)
    }

    pub fn empty() -> Self {
        VariableRegistry { vars: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, kind: VarKind) -> Result<Var> {
        let name = name.into();
        if self.index_of(&name).is_some() {
            return Err(Error::DuplicateVariable(name));
        }
        if kind == VarKind::Time && self.time().is_some() {
            return Err(Error::SecondTimeVariable(name));
        }
        self.vars.push(VarInfo { name, kind });
        Ok(self.vars.len() - 1)
    }

    /// Copy of this registry with extra variables appended.
    pub fn extended<S: Into<String>>(&self, extra: impl IntoIterator<Item = (S, VarKind)>) -> Result<Self> {
        let mut reg = self.clone();
        for (name, kind) in extra {
            reg.push(name.into(), kind)?;
        }
        Ok(reg)
    }

    pub fn into_shared(self) -> Registry {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn info(&self, v: Var) -> &VarInfo {
        &self.vars[v]
    }

    pub fn name(&self, v: Var) -> &str {
        &self.vars[v].name
    }

    pub fn kind(&self, v: Var) -> VarKind {
        self.vars[v].kind
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &VarInfo)> {
        self.vars.iter().enumerate()
    }

    pub fn index_of(&self, name: &str) -> Option<Var> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn lookup(&self, name: &str) -> Result<Var> {
        self.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn time(&self) -> Option<Var> {
        self.vars.iter().position(|v| v.kind == VarKind::Time)
    }

    pub fn vars_of_kind(&self, kind: VarKind) -> Vec<Var> {
        self.iter().filter(|(_, info)| info.kind == kind).map(|(i, _)| i).collect()
    }

    /// Fiber and auxiliary variables, in registry order.
    pub fn dynamic_vars(&self) -> Vec<Var> {
        self.iter().filter(|(_, info)| info.kind.is_dynamic()).map(|(i, _)| i).collect()
    }

    /// A name derived from `base` that is not yet registered.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.index_of(base).is_none() {
            return base.to_string();
        }
        (1..).map(|k| format!("{base}_{k}")).find(|n| self.index_of(n).is_none()).expect("unbounded search")
    }

    /// Degree-reverse-lexicographic over fiber and auxiliary variables,
    /// then over time, parameters and adjoined constants as a second block.
    pub fn default_order(&self) -> MonomialOrder {
        let (base, main): (Vec<Var>, Vec<Var>) = (0..self.len()).partition(|&v| self.kind(v).is_base());
        MonomialOrder::blocks(self.len(), vec![main, base])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_second_time() {
        let err = VariableRegistry::new([("y", VarKind::Fiber), ("y", VarKind::Fiber)]).unwrap_err();
        assert_eq!(err, Error::DuplicateVariable("y".into()));
        let err = VariableRegistry::new([("t", VarKind::Time), ("s", VarKind::Time)]).unwrap_err();
        assert_eq!(err, Error::SecondTimeVariable("s".into()));
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let reg = VariableRegistry::new([("c1", VarKind::Fiber), ("c1_1", VarKind::Fiber)]).unwrap();
        assert_eq!(reg.fresh_name("c1"), "c1_2");
        assert_eq!(reg.fresh_name("z"), "z");
    }
}

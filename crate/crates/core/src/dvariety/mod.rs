//! Algebraic D-varieties: an ideal together with a rational vector field
//! (the section) that is tangent to it, with `t` moving at unit speed.

mod compile;
mod product;

use std::collections::BTreeMap;
use std::ops::Deref;

use crate::algebra::gcd;
use crate::algebra::{
    groebner_basis, normal_form, normalize_ratfunc, IdealBasis, Polynomial, RationalFunction, Registry, Var, VarKind,
};
use crate::error::{Error, Result};

pub use compile::{compile, compile_explicit_ode, compile_implicit_ode};
pub use product::fibered_product;

#[derive(Clone, Debug, PartialEq)]
pub struct DVariety {
    registry: Registry,
    equations: Vec<Polynomial>,
    ideal: IdealBasis,
    section: BTreeMap<Var, RationalFunction>,
    excluded_locus: Vec<Polynomial>,
    irreducible: bool,
    /// lcm of the section denominators
    common_den: Polynomial,
    /// `common_den * section(v)` for every variable; `common_den` for time
    scaled: Vec<Polynomial>,
}

/// Adds the primitive form of `p` to `locus` unless constant or already present.
fn push_divisor(locus: &mut Vec<Polynomial>, p: &Polynomial) {
    if p.is_zero() || p.is_constant() {
        return;
    }
    let p = p.primitive();
    if !locus.contains(&p) {
        locus.push(p);
    }
}

impl DVariety {
    /// Every fiber and auxiliary variable needs a section entry; time moves
    /// at unit speed and parameters are constant.
    pub fn new(
        registry: &Registry,
        equations: Vec<Polynomial>,
        section: BTreeMap<Var, RationalFunction>,
        excluded_locus: Vec<Polynomial>,
        irreducible: bool,
    ) -> Result<Self> {
        for v in registry.dynamic_vars() {
            if !section.contains_key(&v) {
                return Err(Error::MissingSection(registry.name(v).to_string()));
            }
        }
        if let Some(v) = section.keys().find(|&&v| !registry.kind(v).is_dynamic()) {
            return Err(Error::InvalidArgument(format!(
                "`{}` is not a fiber or auxiliary variable and takes no section entry",
                registry.name(*v)
            )));
        }
        let equations: Vec<Polynomial> = equations.into_iter().filter(|p| !p.is_zero()).collect();
        let ideal = groebner_basis(&IdealBasis::new(registry, equations.clone()));
        if ideal.is_unit() {
            return Err(Error::InconsistentIdeal);
        }
        let mut locus = Vec::new();
        for p in &excluded_locus {
            push_divisor(&mut locus, p);
        }
        let mut common_den = Polynomial::one(registry);
        for f in section.values() {
            if !ideal.is_empty() && ideal.contains(f.denominator()) {
                return Err(Error::DenominatorVanishesOnVariety(f.denominator().to_string()));
            }
            push_divisor(&mut locus, f.denominator());
            common_den = gcd::lcm(&common_den, f.denominator());
        }
        let time = registry.time();
        let scaled = (0..registry.len())
            .map(|v| {
                if Some(v) == time {
                    common_den.clone()
                } else if let Some(f) = section.get(&v) {
                    let q = gcd::div_exact(&common_den, f.denominator()).expect("lcm is a multiple");
                    f.numerator() * &q
                } else {
                    Polynomial::zero(registry)
                }
            })
            .collect();
        Ok(DVariety {
            registry: registry.clone(),
            equations,
            ideal,
            section,
            excluded_locus: locus,
            irreducible,
            common_den,
            scaled,
        })
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    /// The generators as supplied.
    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    /// Reduced Gröbner basis of the ideal.
    pub fn ideal(&self) -> &IdealBasis {
        &self.ideal
    }

    pub fn excluded_locus(&self) -> &[Polynomial] {
        &self.excluded_locus
    }

    pub fn irreducible(&self) -> bool {
        self.irreducible
    }

    /// Section component of `v`: 1 for time, 0 for parameters and constants.
    pub fn section(&self, v: Var) -> RationalFunction {
        match self.registry.kind(v) {
            VarKind::Time => RationalFunction::one(&self.registry),
            VarKind::Param | VarKind::Adjoined => RationalFunction::zero(&self.registry),
            _ => self.section[&v].clone(),
        }
    }

    /// Entries for the fiber and auxiliary variables, in registry order.
    pub fn section_entries(&self) -> impl Iterator<Item = (Var, &RationalFunction)> {
        self.section.iter().map(|(v, f)| (*v, f))
    }

    /// Common denominator `D` of the section.
    pub fn section_denominator(&self) -> &Polynomial {
        &self.common_den
    }

    /// `D * L(p)` for a polynomial `p`, where `L` is the derivation along the section.
    pub fn scaled_lie(&self, p: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(&self.registry);
        for v in p.variables() {
            let s = &self.scaled[v];
            if !s.is_zero() {
                acc = &acc + &(&p.partial(v) * s);
            }
        }
        acc
    }

    /// Derivative of `h` along the section, not reduced modulo the ideal.
    pub fn lie_derivative_raw(&self, h: &RationalFunction) -> Result<RationalFunction> {
        let (n, d) = (h.numerator(), h.denominator());
        if d.is_constant() {
            return normalize_ratfunc(self.scaled_lie(n), &self.common_den * d);
        }
        let top = &(&self.scaled_lie(n) * d) - &(n * &self.scaled_lie(d));
        let bottom = &self.common_den * &(d * d);
        normalize_ratfunc(top, bottom)
    }

    /// Derivative of `h` along the section, as a normal form modulo the ideal.
    pub fn lie_derivative(&self, h: &RationalFunction) -> Result<RationalFunction> {
        self.check_defined(h)?;
        normal_form(&self.lie_derivative_raw(h)?, &self.ideal)
    }

    /// Fails when the denominator of `h` vanishes identically on the variety.
    pub fn check_defined(&self, h: &RationalFunction) -> Result<()> {
        if !self.ideal.is_empty() && self.ideal.contains(h.denominator()) {
            return Err(Error::DenominatorVanishesOnVariety(h.denominator().to_string()));
        }
        Ok(())
    }

    /// Normal form of `sum_i dP/dx_i s_i + P^d` modulo the ideal.
    pub fn shifted_tangent_residual(&self, p: &Polynomial) -> Result<RationalFunction> {
        self.lie_derivative(&RationalFunction::from_poly(p.clone()))
    }

    /// Residual of every supplied generator; passes when all vanish.
    pub fn verify_section(&self) -> SectionReport {
        let residuals = self
            .equations
            .iter()
            .map(|p| {
                let r = self.shifted_tangent_residual(p).expect("section denominators checked at construction");
                (p.clone(), r)
            })
            .collect();
        SectionReport { residuals }
    }

    /// Same registry and section with the ideal dropped.
    pub fn ambient(&self) -> DVariety {
        let mut out = self.clone();
        out.equations.clear();
        out.ideal = IdealBasis::empty(&self.registry);
        out
    }

    /// Copy with a replaced section entry, for experiments with broken systems.
    pub fn with_section_entry(&self, v: Var, f: RationalFunction) -> Result<DVariety> {
        let mut section = self.section.clone();
        section.insert(v, f);
        DVariety::new(&self.registry, self.equations.clone(), section, self.excluded_locus.clone(), self.irreducible)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectionReport {
    /// `(generator, residual)` pairs.
    pub residuals: Vec<(Polynomial, RationalFunction)>,
}

impl SectionReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }
}

/// A D-variety over the time line.
#[derive(Clone, Debug, PartialEq)]
pub struct Fibration {
    variety: DVariety,
    time: Var,
}

impl Fibration {
    pub fn new(variety: DVariety) -> Result<Self> {
        let time = variety.registry.time().ok_or(Error::NoTimeVariable)?;
        Ok(Fibration { variety, time })
    }

    pub fn time(&self) -> Var {
        self.time
    }

    pub fn variety(&self) -> &DVariety {
        &self.variety
    }

    pub fn ambient(&self) -> Fibration {
        Fibration { variety: self.variety.ambient(), time: self.time }
    }
}

impl Deref for Fibration {
    type Target = DVariety;

    fn deref(&self) -> &DVariety {
        &self.variety
    }
}

/// A fibered product with the coordinates split into the auxiliary part `w`
/// and the main part `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSystem {
    system: Fibration,
    w_vars: Vec<Var>,
    v_vars: Vec<Var>,
}

impl ProductSystem {
    pub fn new(system: Fibration, w_vars: Vec<Var>, v_vars: Vec<Var>) -> Result<Self> {
        let reg = system.registry();
        let mut seen = vec![false; reg.len()];
        for &v in w_vars.iter().chain(&v_vars) {
            if !reg.kind(v).is_dynamic() || seen[v] {
                return Err(Error::InvalidArgument(format!("bad w/v split at `{}`", reg.name(v))));
            }
            seen[v] = true;
        }
        if let Some(v) = reg.dynamic_vars().into_iter().find(|&v| !seen[v]) {
            return Err(Error::InvalidArgument(format!("`{}` is in neither the w nor the v part", reg.name(v))));
        }
        Ok(ProductSystem { system, w_vars, v_vars })
    }

    /// Auxiliary variables form the w part; fiber variables the v part.
    pub fn from_fibration(system: Fibration) -> Self {
        let reg = system.registry().clone();
        ProductSystem { w_vars: reg.vars_of_kind(VarKind::Aux), v_vars: reg.vars_of_kind(VarKind::Fiber), system }
    }

    pub fn fibration(&self) -> &Fibration {
        &self.system
    }

    pub fn w_vars(&self) -> &[Var] {
        &self.w_vars
    }

    pub fn v_vars(&self) -> &[Var] {
        &self.v_vars
    }

    /// Same split with the ideal dropped.
    pub fn ambient(&self) -> ProductSystem {
        ProductSystem { system: self.system.ambient(), w_vars: self.w_vars.clone(), v_vars: self.v_vars.clone() }
    }
}

impl Deref for ProductSystem {
    type Target = Fibration;

    fn deref(&self) -> &Fibration {
        &self.system
    }
}

impl From<Fibration> for ProductSystem {
    fn from(f: Fibration) -> Self {
        ProductSystem::from_fibration(f)
    }
}

use super::groebner::{groebner, reduce_polynomial};
use super::order::{self, Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use super::ratfunc::{normalize_ratfunc, RationalFunction};
use super::registry::Registry;
use crate::error::{Error, Result};

/// Generators of a polynomial ideal together with the order they are meant for.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealBasis {
    reg: Registry,
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    groebner: bool,
}

impl IdealBasis {
    /// Generators under the registry's default order; not yet a Gröbner basis.
    pub fn new(reg: &Registry, generators: Vec<Polynomial>) -> Self {
        Self::with_order(reg, generators, reg.default_order())
    }

    pub fn with_order(reg: &Registry, generators: Vec<Polynomial>, order: MonomialOrder) -> Self {
        let generators: Vec<Polynomial> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        let groebner = generators.is_empty();
        IdealBasis { reg: reg.clone(), generators, order, groebner }
    }

    pub fn empty(reg: &Registry) -> Self {
        Self::new(reg, Vec::new())
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_groebner(&self) -> bool {
        self.groebner
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// True when the ideal is known to contain 1.
    pub fn is_unit(&self) -> bool {
        self.groebner && self.generators.iter().any(|g| g.is_constant())
    }

    /// Remainder of `p` modulo the generators (the normal form once Gröbner).
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        debug_assert!(self.groebner, "reduction needs a Gröbner basis");
        reduce_polynomial(p, &self.generators, &self.order)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().map(|g| g.leading_term(&self.order).unwrap().0.clone()).collect()
    }

    /// Monomial not in the leading-term ideal.
    pub fn is_standard(&self, m: &[u32]) -> bool {
        self.generators.iter().all(|g| !order::divides(g.leading_term(&self.order).unwrap().0, m))
    }

    /// Same ideal over a registry whose names are a superset, recomputed as a Gröbner basis
    /// under the target's default order.
    pub fn embed(&self, target: &Registry) -> Result<IdealBasis> {
        let gens = self.generators.iter().map(|g| g.embed(target)).collect::<Result<Vec<_>>>()?;
        Ok(groebner_basis(&IdealBasis::new(target, gens)))
    }
}

/// Reduced Gröbner basis of the same ideal under the same order.
pub fn groebner_basis(gens: &IdealBasis) -> IdealBasis {
    if gens.groebner {
        return gens.clone();
    }
    let generators = groebner(&gens.generators, &gens.order, &gens.reg);
    IdealBasis { reg: gens.reg.clone(), generators, order: gens.order.clone(), groebner: true }
}

/// Reduces the numerator of `f` modulo `basis`; zero exactly when the numerator
/// lies in the ideal.
pub fn normal_form(f: &RationalFunction, basis: &IdealBasis) -> Result<RationalFunction> {
    if basis.is_empty() {
        return Ok(f.clone());
    }
    let basis = if basis.is_groebner() { basis.clone() } else { groebner_basis(basis) };
    if basis.contains(f.denominator()) {
        return Err(Error::DenominatorVanishesOnVariety(f.denominator().to_string()));
    }
    let mut current = f.clone();
    // cancellation after reduction can leave a numerator that reduces further
    for _ in 0..16 {
        let reduced = basis.reduce(current.numerator());
        if &reduced == current.numerator() {
            break;
        }
        current = normalize_ratfunc(reduced, current.denominator().clone())?;
    }
    Ok(current)
}

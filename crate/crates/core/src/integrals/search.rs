//! Degree-bounded search for first integrals with a fixed denominator.
//!
//! For `h = P/Q` the condition `L(h) = 0` is `Q L(P) - P L(Q) = 0` modulo
//! the ideal, which is linear in the coefficients of `P`. The ansatz for `P`
//! runs over standard monomials in time, fiber and auxiliary variables.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{FirstIntegral, Provenance};
use crate::algebra::matrix::{nullspace, rref};
use crate::algebra::order::{self, Monomial};
use crate::algebra::{normalize_ratfunc, Polynomial, Var, Q};
use crate::dvariety::{DVariety, ProductSystem};
use crate::error::{Error, Result};

/// Time, fiber and auxiliary variables; parameters and constants stay out of the ansatz.
pub(crate) fn ansatz_vars(sys: &DVariety) -> Vec<Var> {
    let reg = sys.registry();
    (0..reg.len())
        .filter(|&v| !matches!(reg.kind(v), crate::algebra::VarKind::Param | crate::algebra::VarKind::Adjoined))
        .collect()
}

/// Standard monomials of total degree at most `degree`, in decreasing default order.
pub(crate) fn standard_monomials(sys: &DVariety, degree: u32) -> Vec<Monomial> {
    let reg = sys.registry();
    let ord = reg.default_order();
    let mut monos: Vec<Monomial> = order::monomials_up_to(reg.len(), &ansatz_vars(sys), degree)
        .into_iter()
        .filter(|m| sys.ideal().is_standard(m))
        .collect();
    monos.sort_by(|a, b| ord.cmp(b, a));
    monos
}

pub(crate) fn reduce(sys: &DVariety, p: &Polynomial) -> Polynomial {
    if sys.ideal().is_empty() {
        p.clone()
    } else {
        sys.ideal().reduce(p)
    }
}

/// Solutions `c` of `sum_j c_j columns[j] = 0`, as reduced echelon rows over the
/// column order (first nonzero coefficient 1).
pub(crate) fn solve_columns(columns: &[Polynomial]) -> Vec<Vec<Q>> {
    let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for c in columns {
        for (m, _) in c.terms() {
            let next = index.len();
            index.entry(m).or_insert(next);
        }
    }
    let mut rows = vec![vec![Q::zero(); columns.len()]; index.len()];
    for (j, c) in columns.iter().enumerate() {
        for (m, coef) in c.terms() {
            rows[index[m]][j] = coef.clone();
        }
    }
    let mut basis = nullspace(&rows, columns.len());
    rref(&mut basis, columns.len());
    basis
}

fn combine(sys: &DVariety, monos: &[Monomial], coeffs: &[Q]) -> Polynomial {
    Polynomial::from_terms(
        sys.registry(),
        monos.iter().zip(coeffs).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Numerators `P` of degree at most `degree` with `P/Q` a nonconstant first integral.
pub(crate) fn numerators(sys: &DVariety, q: &Polynomial, degree: u32) -> Result<Vec<Polynomial>> {
    if q.is_zero() || (!sys.ideal().is_empty() && sys.ideal().contains(q)) {
        return Err(Error::DenominatorVanishesOnVariety(q.to_string()));
    }
    let mut monos = standard_monomials(sys, degree);
    // P = Q gives a constant; dropping the leading monomial of Q removes that direction
    let q_nf = reduce(sys, q);
    if q_nf.terms().all(|(m, _)| monos.contains(m)) {
        let (lm, _) = q_nf.leading_term_default().expect("nonzero");
        let lm = lm.clone();
        monos.retain(|m| *m != lm);
    }
    let lq = sys.scaled_lie(q);
    let columns: Vec<Polynomial> = monos
        .iter()
        .map(|m| {
            let p = Polynomial::monomial(sys.registry(), m.clone(), Q::from_integer(1.into()));
            let expr = if q.is_constant() { sys.scaled_lie(&p) } else { &(q * &sys.scaled_lie(&p)) - &(&p * &lq) };
            reduce(sys, &expr)
        })
        .collect();
    Ok(solve_columns(&columns).iter().map(|c| combine(sys, &monos, c)).collect())
}

fn finish(sys: &DVariety, q: &Polynomial, nums: Vec<Polynomial>, provenance: Provenance) -> Result<Vec<FirstIntegral>> {
    let mut out = Vec::new();
    for p in nums {
        let h = normalize_ratfunc(p, q.clone())?;
        let fi = super::verify::verify_on(sys, h, provenance)?;
        // every returned integral is re-checked; a failure would be a solver bug
        debug_assert!(fi.verified, "search produced an unverified integral {}", fi.h);
        if fi.verified {
            out.push(fi);
        }
    }
    Ok(out)
}

/// Basis of the nonconstant polynomial first integrals of total degree at most `degree`.
pub fn search_polynomial_integrals(sys: &ProductSystem, degree: u32) -> Result<Vec<FirstIntegral>> {
    let one = Polynomial::one(sys.registry());
    let nums = numerators(sys, &one, degree)?;
    finish(sys, &one, nums, Provenance::PolynomialSearch)
}

/// Nonconstant first integrals `P/denominator` with `deg P <= num_degree`.
pub fn search_rational_integrals(
    sys: &ProductSystem,
    denominator: &Polynomial,
    num_degree: u32,
) -> Result<Vec<FirstIntegral>> {
    let nums = numerators(sys, denominator, num_degree)?;
    let provenance = if denominator.is_constant() { Provenance::PolynomialSearch } else { Provenance::RationalSearch };
    finish(sys, denominator, nums, provenance)
}

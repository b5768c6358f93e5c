//! The degree-bounded internality verdict.

use num_traits::Zero;

use super::darboux::darboux_polynomials;
use super::independence::{independence_test, IndependenceReport};
use super::levelset::generic_fiber_degree;
use super::search::{search_polynomial_integrals, search_rational_integrals, solve_columns};
use super::verify::verify_first_integral;
use super::FirstIntegral;
use crate::algebra::gcd;
use crate::algebra::{ideal_dimension, Polynomial, QuotientDegree, RationalFunction};
use crate::dvariety::ProductSystem;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `n` w-independent integrals with an injective level map.
    Internal,
    /// `n` w-independent integrals with a finite-to-one level map.
    AlmostInternal,
    /// Nothing decided within the degree bound.
    NotDetermined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrabilityReport {
    pub degree: u32,
    /// Dimension of the v part over the field of `t` and `w`.
    pub dimension: usize,
    /// Every verified candidate, in the order they were considered.
    pub found: Vec<FirstIntegral>,
    /// Caller-supplied candidates that failed verification.
    pub rejected: Vec<FirstIntegral>,
    /// Indices into `found` of a maximal w-independent subset.
    pub selected: Vec<usize>,
    pub independence: IndependenceReport,
    /// Present when `selected` has `dimension` elements.
    pub fiber_degree: Option<QuotientDegree>,
    pub verdict: Verdict,
}

impl IntegrabilityReport {
    pub fn verdict_str(&self) -> String {
        match self.verdict {
            Verdict::Internal => "internal".into(),
            Verdict::AlmostInternal => "almost_internal".into(),
            Verdict::NotDetermined => format!("not_determined_at_degree_{}", self.degree),
        }
    }

    pub fn selected_integrals(&self) -> impl Iterator<Item = &FirstIntegral> {
        self.selected.iter().map(|&i| &self.found[i])
    }
}

/// Denominators worth trying when the caller proposes none: Darboux polynomials
/// of degree one and their products up to the degree bound.
fn proposed_denominators(sys: &ProductSystem, degree: u32) -> Result<Vec<Polynomial>> {
    let ds: Vec<Polynomial> = darboux_polynomials(sys, 1)?.into_iter().map(|d| d.d).collect();
    let mut out: Vec<Polynomial> = ds.clone();
    for (i, a) in ds.iter().enumerate() {
        for b in &ds[i..] {
            let p = a * b;
            if p.total_degree().unwrap_or(0) <= degree {
                out.push(p);
            }
        }
    }
    out.dedup();
    Ok(out)
}

/// Whether `a = lambda b + mu` for rational constants with `lambda != 0`.
fn affinely_related(a: &RationalFunction, b: &RationalFunction) -> bool {
    let reg = a.registry();
    let one = RationalFunction::one(reg);
    let fs = [a, b, &one];
    let common = fs.iter().fold(Polynomial::one(reg), |l, f| gcd::lcm(&l, f.denominator()));
    let columns: Vec<Polynomial> = fs
        .iter()
        .map(|f| f.numerator() * &gcd::div_exact(&common, f.denominator()).expect("lcm is a multiple"))
        .collect();
    solve_columns(&columns).iter().any(|v| !v[0].is_zero() && !v[1].is_zero())
}

fn push_new(found: &mut Vec<FirstIntegral>, fi: FirstIntegral) {
    if fi.verified && !fi.h.is_constant() && !found.iter().any(|f| affinely_related(&f.h, &fi.h)) {
        found.push(fi);
    }
}

/// Verifies user integrals, searches polynomial integrals and rational ones
/// over the given (or proposed) denominators, then greedily selects a
/// w-independent subset and classifies the level map when it is full.
pub fn integrability_report(
    sys: &ProductSystem,
    degree: u32,
    user: &[RationalFunction],
    denominators: &[Polynomial],
) -> Result<IntegrabilityReport> {
    let dimension = ideal_dimension(sys.ideal(), sys.v_vars())?;
    let mut found = Vec::new();
    let mut rejected = Vec::new();
    for h in user {
        let fi = verify_first_integral(h, sys)?;
        if fi.verified {
            push_new(&mut found, fi);
        } else {
            rejected.push(fi);
        }
    }
    for fi in search_polynomial_integrals(sys, degree)? {
        push_new(&mut found, fi);
    }
    let dens = if denominators.is_empty() { proposed_denominators(sys, degree)? } else { denominators.to_vec() };
    for q in dens.iter().filter(|q| !q.is_constant()) {
        match search_rational_integrals(sys, q, degree) {
            Ok(fis) => fis.into_iter().for_each(|fi| push_new(&mut found, fi)),
            Err(Error::DenominatorVanishesOnVariety(_)) => {}
            Err(e) => return Err(e),
        }
    }

    let mut selected: Vec<usize> = Vec::new();
    let mut hs: Vec<RationalFunction> = Vec::new();
    let mut independence = independence_test(&[], sys)?;
    for (i, fi) in found.iter().enumerate() {
        if selected.len() == dimension {
            break;
        }
        hs.push(fi.h.clone());
        let report = independence_test(&hs, sys)?;
        if report.w_independent {
            selected.push(i);
            independence = report;
        } else {
            hs.pop();
        }
    }

    let fiber_degree = if selected.len() == dimension { Some(generic_fiber_degree(&hs, sys)?) } else { None };
    let verdict = match fiber_degree {
        Some(QuotientDegree::Finite(1)) => Verdict::Internal,
        Some(QuotientDegree::Finite(k)) if k > 1 => Verdict::AlmostInternal,
        _ => Verdict::NotDetermined,
    };
    Ok(IntegrabilityReport { degree, dimension, found, rejected, selected, independence, fiber_degree, verdict })
}

use super::{FirstIntegral, Provenance};
use crate::algebra::{Polynomial, RationalFunction};
use crate::dvariety::{DVariety, ProductSystem};
use crate::error::Result;

pub(crate) fn verify_on(sys: &DVariety, h: RationalFunction, provenance: Provenance) -> Result<FirstIntegral> {
    let residual = sys.lie_derivative(&h)?;
    let mut excluded_locus: Vec<Polynomial> = Vec::new();
    if !h.denominator().is_constant() {
        excluded_locus.push(h.denominator().primitive());
    }
    Ok(FirstIntegral { verified: residual.is_zero(), residual, h, excluded_locus, provenance })
}

/// Checks `L(h) = 0` modulo the ideal; the residual is kept when it is not.
pub fn verify_first_integral(h: &RationalFunction, sys: &ProductSystem) -> Result<FirstIntegral> {
    verify_on(sys, h.clone(), Provenance::User)
}

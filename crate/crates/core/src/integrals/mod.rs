//! First integrals: verification, degree-bounded search, independence and
//! the internality verdict built from them.

mod darboux;
mod independence;
mod levelset;
mod report;
mod search;
mod verify;

pub use darboux::{darboux_polynomials, DarbouxPolynomial};
pub use independence::{independence_test, w_independence_test, IndependenceReport};
pub use levelset::{generic_fiber_degree, level_set_dimension};
pub use report::{integrability_report, IntegrabilityReport, Verdict};
pub use search::{search_polynomial_integrals, search_rational_integrals};
pub use verify::verify_first_integral;

use crate::algebra::{Polynomial, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    User,
    PolynomialSearch,
    RationalSearch,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::User => "user",
            Provenance::PolynomialSearch => "polynomial-search",
            Provenance::RationalSearch => "rational-search",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstIntegral {
    pub h: RationalFunction,
    /// `L(h) = 0` modulo the ideal.
    pub verified: bool,
    /// Normal form of `L(h)`; zero when verified.
    pub residual: RationalFunction,
    /// Where `h` is undefined.
    pub excluded_locus: Vec<Polynomial>,
    pub provenance: Provenance,
}

#[cfg(test)]
mod tests;

//! Exact polynomial and rational-function arithmetic over the rationals.

pub mod dimension;
pub mod gcd;
pub mod groebner;
pub mod ideal;
pub mod matrix;
pub mod order;
pub mod polynomial;
pub mod print;
pub mod ratfunc;
pub mod registry;
pub mod roots;

pub type Q = num_rational::BigRational;

pub use dimension::{ideal_dimension, quotient_degree, QuotientDegree};
pub use ideal::{groebner_basis, normal_form, IdealBasis};
pub use matrix::matrix_rank_mod_ideal;
pub use order::{Monomial, MonomialOrder};
pub use polynomial::Polynomial;
pub use ratfunc::{normalize_ratfunc, RationalFunction};
pub use registry::{Registry, Var, VarKind, VariableRegistry};

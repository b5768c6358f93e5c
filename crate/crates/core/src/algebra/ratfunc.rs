use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::gcd::{self, div_exact};
use super::polynomial::Polynomial;
use super::registry::{Registry, Var};
use super::Q;
use crate::error::{Error, Result};

/// Quotient of polynomials in canonical form.
///
/// Canonical means: numerator and denominator coprime, all coefficients
/// integers with no common factor, and a positive leading denominator
/// coefficient under the registry's default order. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// Canonical representative of `num / den`.
pub fn normalize_ratfunc(num: Polynomial, den: Polynomial) -> Result<RationalFunction> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let reg = num.registry().clone();
    if num.is_zero() {
        return Ok(RationalFunction { num, den: Polynomial::one(&reg) });
    }
    let (num, den) = if den.is_constant() {
        (num, den)
    } else {
        let g = gcd::gcd(&num, &den);
        if g.is_one() {
            (num, den)
        } else {
            (div_exact(&num, &g).expect("gcd divides numerator"), div_exact(&den, &g).expect("gcd divides denominator"))
        }
    };
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for c in num.terms().chain(den.terms()).map(|(_, c)| c) {
        g = g.gcd(c.numer());
        l = l.lcm(c.denom());
    }
    let mut scale = Q::new(l, g);
    if den.leading_term_default().unwrap().1.is_negative() {
        scale = -scale;
    }
    Ok(RationalFunction { num: num.scale(&scale), den: den.scale(&scale) })
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        normalize_ratfunc(num, den)
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let one = Polynomial::one(p.registry());
        normalize_ratfunc(p, one).expect("unit denominator")
    }

    pub fn zero(reg: &Registry) -> Self {
        RationalFunction { num: Polynomial::zero(reg), den: Polynomial::one(reg) }
    }

    pub fn one(reg: &Registry) -> Self {
        Self::from_poly(Polynomial::one(reg))
    }

    pub fn constant(reg: &Registry, c: Q) -> Self {
        Self::from_poly(Polynomial::constant(reg, c))
    }

    pub fn var(reg: &Registry, v: Var) -> Self {
        Self::from_poly(Polynomial::var(reg, v))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn into_parts(self) -> (Polynomial, Polynomial) {
        (self.num, self.den)
    }

    pub fn registry(&self) -> &Registry {
        self.num.registry()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_constant() {
            Some(self.num.constant_value()? / self.den.constant_value()?)
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The polynomial this function equals, if its denominator is constant.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        let d = self.den.constant_value()?;
        Some(self.num.scale(&d.recip()))
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.num.mentions(v) || self.den.mentions(v)
    }

    pub fn variables(&self) -> Vec<Var> {
        (0..self.registry().len()).filter(|&v| self.mentions(v)).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.num.total_degree().unwrap_or(0).max(self.den.total_degree().unwrap_or(0))
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Result<RationalFunction> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        normalize_ratfunc(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<RationalFunction> {
        normalize_ratfunc(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> RationalFunction {
        // coprime parts stay coprime under powers
        let num = self.num.pow(e);
        let den = self.den.pow(e);
        normalize_ratfunc(num, den).expect("nonzero denominator")
    }

    pub fn scale(&self, c: &Q) -> RationalFunction {
        normalize_ratfunc(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// Quotient-rule derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> RationalFunction {
        if !self.den.mentions(v) {
            return normalize_ratfunc(self.num.partial(v), self.den.clone()).expect("nonzero denominator");
        }
        let top = &(&self.num.partial(v) * &self.den) - &(&self.num * &self.den.partial(v));
        normalize_ratfunc(top, self.den.pow(2)).expect("nonzero denominator")
    }

    pub fn embed(&self, target: &Registry) -> Result<RationalFunction> {
        normalize_ratfunc(self.num.embed(target)?, self.den.embed(target)?)
    }

    pub fn map_into(&self, target: &Registry, map: &[Var]) -> RationalFunction {
        normalize_ratfunc(self.num.map_into(target, map), self.den.map_into(target, map)).expect("nonzero denominator")
    }

    /// Substitutes `value` for `v`.
    pub fn substitute(&self, v: Var, value: &RationalFunction) -> RationalFunction {
        // homogenize: p(v = a/b) = sum c_k a^k b^(d-k) / b^d
        let (a, b) = (value.numerator(), value.denominator());
        let sub = |p: &Polynomial, d: u32| -> Polynomial {
            let mut out = Polynomial::zero(p.registry());
            for (k, c) in p.coeffs_in(v) {
                out = &out + &(&(&c * &a.pow(k)) * &b.pow(d - k));
            }
            out
        };
        let d = self.num.degree_in(v).max(self.den.degree_in(v));
        normalize_ratfunc(sub(&self.num, d), sub(&self.den, d)).expect("nonzero denominator")
    }

    /// Values of numerator and denominator at `point`.
    pub fn eval_parts_f64(&self, point: &[f64]) -> (f64, f64) {
        (self.num.eval_f64(point), self.den.eval_f64(point))
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let (n, d) = self.eval_parts_f64(point);
        n / d
    }

    pub fn eval_q(&self, point: &[Q]) -> Option<Q> {
        let d = self.den.eval_q(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_q(point) / d)
        }
    }

    pub fn to_string_with(&self, names: super::print::Names) -> String {
        super::print::ratfunc_to_string(self, names)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reg = self.registry().clone();
        f.write_str(&self.to_string_with(&|v| reg.name(v).to_string()))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return normalize_ratfunc(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        normalize_ratfunc(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        normalize_ratfunc(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::registry::{VarKind, VariableRegistry};

    fn reg() -> Registry {
        VariableRegistry::new([
            ("t", VarKind::Time),
            ("a", VarKind::Aux),
            ("y0", VarKind::Fiber),
            ("y1", VarKind::Fiber),
            ("y", VarKind::Fiber),
        ])
        .unwrap()
        .into_shared()
    }

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn cancels_common_factor() {
        let r = reg();
        let t = Polynomial::var(&r, 0);
        let num = &t.pow(2).scale(&q(2)) - &Polynomial::int(&r, 2);
        let den = &t.scale(&q(2)) - &Polynomial::int(&r, 2);
        let f = normalize_ratfunc(num, den).unwrap();
        assert_eq!(f.numerator(), &(&t + &Polynomial::one(&r)));
        assert!(f.denominator().is_one());
    }

    #[test]
    fn zero_numerator_and_coprime_inputs() {
        let r = reg();
        let y = Polynomial::var(&r, 4);
        let f = normalize_ratfunc(Polynomial::zero(&r), y.pow(3)).unwrap();
        assert!(f.is_zero() && f.denominator().is_one());

        let y0 = Polynomial::var(&r, 2);
        let y1 = Polynomial::var(&r, 3);
        let a = Polynomial::var(&r, 1);
        let num = &y1 - &y0.scale(&q(2));
        let f = normalize_ratfunc(num.clone(), a.clone()).unwrap();
        assert_eq!(f.numerator(), &num);
        assert_eq!(f.denominator(), &a);
        assert_eq!(f.to_string(), "(-2*y0 + y1)/a");
    }

    #[test]
    fn zero_denominator_is_an_error() {
        let r = reg();
        assert_eq!(normalize_ratfunc(Polynomial::one(&r), Polynomial::zero(&r)), Err(Error::ZeroDenominator));
    }

    #[test]
    fn sign_and_content_normalization() {
        let r = reg();
        let y = Polynomial::var(&r, 4);
        let f = normalize_ratfunc(y.pow(3), Polynomial::int(&r, -2)).unwrap();
        assert_eq!(f.to_string(), "-y^3/2");
        let g = normalize_ratfunc(Polynomial::one(&r), y.scale(&q(2))).unwrap();
        assert_eq!(g.to_string(), "1/(2*y)");
    }

    #[test]
    fn partial_derivative_examples() {
        let r = reg();
        let t = RationalFunction::var(&r, 0);
        let y = RationalFunction::var(&r, 4);
        let h = &t - &y.pow(2).recip().unwrap();
        assert_eq!(h.to_string(), "t - 1/y^2");
        let dy = h.partial(4);
        assert_eq!(dy, RationalFunction::constant(&r, q(2)).checked_div(&y.pow(3)).unwrap());
        assert_eq!(h.partial(0), RationalFunction::one(&r));
    }

    #[test]
    fn substitution_of_rational_values() {
        let r = reg();
        let y = RationalFunction::var(&r, 4);
        let t = RationalFunction::var(&r, 0);
        let f = &y.pow(2) + &t;
        let g = f.substitute(4, &t.recip().unwrap());
        // 1/t^2 + t
        let expect = &t.pow(2).recip().unwrap() + &t;
        assert_eq!(g, expect);
    }
}

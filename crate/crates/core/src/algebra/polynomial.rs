//! Sparse multivariate polynomials over Q.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors. The map order is
//! lexicographic on exponents (variable 0 most significant), which makes the
//! lex-leading term a `last_key_value` lookup; any other monomial order is
//! applied on demand through [`MonomialOrder`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::order::{self, Monomial, MonomialOrder};
use super::registry::{Registry, Var};
use super::Q;

#[derive(Clone)]
pub struct Polynomial {
    reg: Registry,
    terms: BTreeMap<Monomial, Q>,
}

pub(crate) fn same_registry(a: &Registry, b: &Registry) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn check_registry(a: &Registry, b: &Registry) {
    assert!(same_registry(a, b), "polynomials over different registries cannot be combined");
}

impl Polynomial {
    pub fn zero(reg: &Registry) -> Self {
        Polynomial { reg: reg.clone(), terms: BTreeMap::new() }
    }

    pub fn one(reg: &Registry) -> Self {
        Self::constant(reg, Q::one())
    }

    pub fn constant(reg: &Registry, c: Q) -> Self {
        let mut p = Self::zero(reg);
        if !c.is_zero() {
            p.terms.insert(vec![0; reg.len()], c);
        }
        p
    }

    pub fn int(reg: &Registry, c: i64) -> Self {
        Self::constant(reg, Q::from_integer(c.into()))
    }

    pub fn var(reg: &Registry, v: Var) -> Self {
        let mut m = vec![0; reg.len()];
        m[v] = 1;
        Self::monomial(reg, m, Q::one())
    }

    pub fn monomial(reg: &Registry, m: Monomial, c: Q) -> Self {
        assert_eq!(m.len(), reg.len());
        let mut p = Self::zero(reg);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(reg: &Registry, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Self::zero(reg);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn nvars(&self) -> usize {
        self.reg.len()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &[u32]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            Some(Q::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| order::degree(m)).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m[v] > 0)
    }

    pub fn variables(&self) -> Vec<Var> {
        (0..self.nvars()).filter(|&v| self.mentions(v)).collect()
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<(&Monomial, &Q)> {
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    /// Leading term under the registry's default order.
    pub fn leading_term_default(&self) -> Option<(&Monomial, &Q)> {
        self.leading_term(&self.reg.default_order())
    }

    /// Terms sorted by decreasing `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(&Monomial, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.reg);
        }
        Polynomial { reg: self.reg.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_term(&self, m: &[u32], c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.reg);
        }
        Polynomial {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(k, x)| (order::product(k, m), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.reg);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn partial(&self, v: Var) -> Self {
        let mut p = Self::zero(&self.reg);
        for (m, c) in &self.terms {
            if m[v] > 0 {
                let mut m2 = m.clone();
                m2[v] -= 1;
                p.terms.insert(m2, c * Q::from_integer(BigInt::from(m[v])));
            }
        }
        p
    }

    /// Replaces variable `v` by `value`.
    pub fn substitute(&self, v: Var, value: &Polynomial) -> Self {
        check_registry(&self.reg, &value.reg);
        let by_power = self.coeffs_in(v);
        let mut result = Self::zero(&self.reg);
        let mut power = Self::one(&self.reg);
        let mut current = 0u32;
        for (e, coeff) in by_power {
            while current < e {
                power = &power * value;
                current += 1;
            }
            result = &result + &(&coeff * &power);
        }
        result
    }

    /// Coefficients with respect to `v`: power of `v` to a polynomial free of `v`.
    pub fn coeffs_in(&self, v: Var) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m[v];
            let mut m2 = m.clone();
            m2[v] = 0;
            out.entry(e).or_insert_with(|| Self::zero(&self.reg)).terms.insert(m2, c.clone());
        }
        out
    }

    /// Re-expresses the polynomial over `target`, sending variable `i` to `map[i]`.
    pub fn map_into(&self, target: &Registry, map: &[Var]) -> Self {
        assert_eq!(map.len(), self.nvars());
        let mut p = Self::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; target.len()];
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    m2[map[i]] += e;
                }
            }
            p.add_term(m2, c.clone());
        }
        p
    }

    /// Same polynomial over a registry whose variable names are a superset.
    pub fn embed(&self, target: &Registry) -> crate::Result<Self> {
        if same_registry(&self.reg, target) {
            return Ok(self.clone());
        }
        let map = self.reg.iter().map(|(_, info)| target.lookup(&info.name)).collect::<crate::Result<Vec<_>>>()?;
        Ok(self.map_into(target, &map))
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut x = c.to_f64().unwrap_or(f64::NAN);
                for (i, &e) in m.iter().enumerate() {
                    if e > 0 {
                        x *= point[i].powi(e as i32);
                    }
                }
                x
            })
            .sum()
    }

    pub fn eval_q(&self, point: &[Q]) -> Q {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut x = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    x *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            total += x;
        }
        total
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> Q {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Q::one()
        } else {
            Q::new(num, den)
        }
    }

    /// Integer-primitive associate with positive leading coefficient under the default order.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_term_default().unwrap().1.is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Monic associate under `ord`.
    pub fn monic(&self, ord: &MonomialOrder) -> Self {
        match self.leading_term(ord) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_registry(&self.reg, &other.reg) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::poly_to_string(self, &|v| self.reg.name(v).to_string()))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        check_registry(&self.reg, &rhs.reg);
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        check_registry(&self.reg, &rhs.reg);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        check_registry(&self.reg, &rhs.reg);
        let mut out = Polynomial::zero(&self.reg);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(order::product(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { reg: self.reg.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

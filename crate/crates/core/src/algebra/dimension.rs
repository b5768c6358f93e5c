//! Dimension and quotient-ring degree of an ideal relative to a subset of
//! its variables; the remaining variables play the role of field elements.

use super::groebner::{groebner, reduce_polynomial};
use super::ideal::IdealBasis;
use super::order::{self, Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use super::registry::Var;
use crate::error::{Error, Result};

/// Size of a quotient ring as a vector space over the field of uncounted variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientDegree {
    Finite(usize),
    Infinite,
}

/// Leading monomials, restricted to the counted variables, of a Gröbner basis
/// computed with the counted block first. Elements whose leading coefficient
/// vanishes on the base part of the ideal are dropped, which specializes the
/// uncounted variables to a generic point of that base.
fn counted_leading_monomials(basis: &IdealBasis, counted: &[Var]) -> Result<Vec<Monomial>> {
    let reg = basis.registry();
    let n = reg.len();
    let uncounted: Vec<Var> = (0..n).filter(|v| !counted.contains(v)).collect();
    let ord = MonomialOrder::blocks(n, vec![counted.to_vec(), uncounted.clone()]);
    let gb = groebner(basis.generators(), &ord, reg);
    if gb.iter().any(|g| g.is_constant()) {
        return Err(Error::InconsistentIdeal);
    }
    let touches_counted = |g: &Polynomial| counted.iter().any(|&v| g.mentions(v));
    let base: Vec<Polynomial> = gb.iter().filter(|g| !touches_counted(g)).cloned().collect();
    let base_ord = MonomialOrder::blocks(n, vec![counted.to_vec(), uncounted]);
    let mut out = Vec::new();
    for g in gb.iter().filter(|g| touches_counted(g)) {
        let (lm, _) = g.leading_term(&ord).expect("nonzero");
        let restrict =
            |m: &Monomial| -> Monomial { (0..n).map(|v| if counted.contains(&v) { m[v] } else { 0 }).collect() };
        let head = restrict(lm);
        let lc = Polynomial::from_terms(
            reg,
            g.terms().filter(|(m, _)| restrict(m) == head).map(|(m, c)| (order::quotient(m, &head), c.clone())),
        );
        if !reduce_polynomial(&lc, &base, &base_ord).is_zero() {
            out.push(head);
        }
    }
    Ok(out)
}

/// Largest number of counted variables with no leading monomial supported on them.
pub fn ideal_dimension(basis: &IdealBasis, counted: &[Var]) -> Result<usize> {
    let lms = counted_leading_monomials(basis, counted)?;
    let k = counted.len();
    assert!(k < 24, "too many counted variables for subset enumeration");
    let support: Vec<u32> = lms
        .iter()
        .map(|m| counted.iter().enumerate().filter(|&(_, &v)| m[v] > 0).fold(0u32, |acc, (i, _)| acc | (1 << i)))
        .collect();
    let mut best = 0;
    for subset in 0u32..(1 << k) {
        let size = subset.count_ones() as usize;
        if size > best && support.iter().all(|&s| s & !subset != 0) {
            best = size;
        }
    }
    Ok(best)
}

/// Number of standard monomials in the counted variables, when finite.
pub fn quotient_degree(basis: &IdealBasis, counted: &[Var]) -> Result<QuotientDegree> {
    let lms = counted_leading_monomials(basis, counted)?;
    let mut bounds = Vec::with_capacity(counted.len());
    for &v in counted {
        let pure = lms.iter().filter(|m| m[v] > 0 && counted.iter().all(|&u| u == v || m[u] == 0)).map(|m| m[v]).min();
        match pure {
            Some(b) => bounds.push(b),
            None => return Ok(QuotientDegree::Infinite),
        }
    }
    let n = basis.registry().len();
    let mut count = 0usize;
    let mut cur: Monomial = vec![0; n];
    fn walk(i: usize, counted: &[Var], bounds: &[u32], lms: &[Monomial], cur: &mut Monomial, count: &mut usize) {
        if i == counted.len() {
            if !lms.iter().any(|m| order::divides(m, cur)) {
                *count += 1;
            }
            return;
        }
        for e in 0..bounds[i] {
            cur[counted[i]] = e;
            walk(i + 1, counted, bounds, lms, cur, count);
        }
        cur[counted[i]] = 0;
    }
    walk(0, counted, &bounds, &lms, &mut cur, &mut count);
    Ok(QuotientDegree::Finite(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::registry::{Registry, VarKind, VariableRegistry};

    fn reg() -> Registry {
        VariableRegistry::new([("t", VarKind::Time), ("y", VarKind::Fiber), ("c", VarKind::Adjoined)])
            .unwrap()
            .into_shared()
    }

    #[test]
    fn empty_ideal_is_full_space() {
        let r = reg();
        assert_eq!(ideal_dimension(&IdealBasis::empty(&r), &[0, 1]).unwrap(), 2);
    }

    #[test]
    fn hypersurface_has_codimension_one() {
        let r = reg();
        let t = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let c = Polynomial::var(&r, 2);
        let f = &(&y.pow(2) * &(&t - &c)) - &Polynomial::one(&r);
        let b = IdealBasis::new(&r, vec![f]);
        assert_eq!(ideal_dimension(&b, &[0, 1]).unwrap(), 1);
        // with t fixed the fiber in y is two points
        assert_eq!(quotient_degree(&b, &[1]).unwrap(), QuotientDegree::Finite(2));
        assert_eq!(quotient_degree(&b, &[0, 1]).unwrap(), QuotientDegree::Infinite);
    }

    #[test]
    fn points_and_the_unit_ideal() {
        let r = reg();
        let t = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let b = IdealBasis::new(&r, vec![t.clone(), y.clone()]);
        assert_eq!(ideal_dimension(&b, &[0, 1]).unwrap(), 0);
        assert_eq!(quotient_degree(&b, &[0, 1]).unwrap(), QuotientDegree::Finite(1));
        let b = IdealBasis::new(&r, vec![y.clone(), &y - &Polynomial::one(&r)]);
        assert_eq!(ideal_dimension(&b, &[0, 1]), Err(Error::InconsistentIdeal));
    }

    #[test]
    fn base_relations_specialize_the_uncounted_variables() {
        // c*y - 1 with c = 0 forced: inconsistent once c is pinned
        let r = reg();
        let y = Polynomial::var(&r, 1);
        let c = Polynomial::var(&r, 2);
        let b = IdealBasis::new(&r, vec![&(&c * &y) - &Polynomial::one(&r), c.clone()]);
        assert_eq!(ideal_dimension(&b, &[1]), Err(Error::InconsistentIdeal));
        // (c - 1)*y with c = 1 forced: y is free
        let b = IdealBasis::new(&r, vec![&(&c - &Polynomial::one(&r)) * &y, &c - &Polynomial::one(&r)]);
        assert_eq!(ideal_dimension(&b, &[1]).unwrap(), 1);
    }

    #[test]
    fn multiplicity_is_counted() {
        let r = reg();
        let y = Polynomial::var(&r, 1);
        let t = Polynomial::var(&r, 0);
        let b = IdealBasis::new(&r, vec![y.pow(3)]);
        assert_eq!(quotient_degree(&b, &[1]).unwrap(), QuotientDegree::Finite(3));
        // t*y = 0 leaves only y = 0 once t is generic
        let b = IdealBasis::new(&r, vec![y.pow(3), &t * &y]);
        assert_eq!(quotient_degree(&b, &[1]).unwrap(), QuotientDegree::Finite(1));
    }
}

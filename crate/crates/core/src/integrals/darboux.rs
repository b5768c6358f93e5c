//! Darboux polynomials: `L(D) = K D` modulo the ideal.
//!
//! The condition is bilinear in the coefficients of `D` and of the cofactor
//! `K`. For each choice of leading monomial of `D` the coefficients of `D`
//! are eliminated by a Gröbner basis, leaving equations for `K`; each
//! rational solution `K` then gives a linear kernel problem for `D`.

use num_traits::{One, Zero};

use super::search::{reduce, solve_columns, standard_monomials};
use crate::algebra::groebner::groebner;
use crate::algebra::order::Monomial;
use crate::algebra::roots::rational_roots;
use crate::algebra::{
    ideal_dimension, IdealBasis, MonomialOrder, Polynomial, RationalFunction, Registry, Var, VarKind, VariableRegistry,
    Q,
};
use crate::dvariety::{DVariety, ProductSystem};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxPolynomial {
    pub d: Polynomial,
    /// `L(D) / D` modulo the ideal.
    pub cofactor: RationalFunction,
}

fn unknowns(nd: usize, nk: usize) -> Registry {
    let names = (0..nd).map(|j| format!("d{j}")).chain((0..nk).map(|i| format!("k{i}")));
    VariableRegistry::new(names.map(|n| (n, VarKind::Fiber))).expect("distinct names").into_shared()
}

/// Rational points of a zero-dimensional system in `vars` (all other variables absent).
/// `None` when the set is not finite or a root search gives up.
fn rational_points(gens: &[Polynomial], vars: &[Var], reg: &Registry) -> Option<Vec<Vec<Q>>> {
    let n = reg.len();
    let lex = MonomialOrder::blocks(n, {
        let mut blocks: Vec<Vec<Var>> = vars.iter().map(|&v| vec![v]).collect();
        blocks.push((0..n).filter(|v| !vars.contains(v)).collect());
        blocks
    });
    let gb = groebner(gens, &lex, reg);
    if gb.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Some(Vec::new());
    }
    let Some((&last, rest)) = vars.split_last() else {
        return Some(vec![Vec::new()]);
    };
    let univariate = gb.iter().find(|g| g.variables() == [last])?;
    let coeffs: Vec<Q> = {
        let by_degree = univariate.coeffs_in(last);
        let top = *by_degree.keys().last().unwrap_or(&0);
        (0..=top).map(|e| by_degree.get(&e).and_then(|c| c.constant_value()).unwrap_or_else(Q::zero)).collect()
    };
    let mut out = Vec::new();
    for root in rational_roots(&coeffs)? {
        let value = Polynomial::constant(reg, root.clone());
        let reduced: Vec<Polynomial> = gb.iter().map(|g| g.substitute(last, &value)).filter(|g| !g.is_zero()).collect();
        for mut point in rational_points(&reduced, rest, reg)? {
            point.push(root.clone());
            out.push(point);
        }
    }
    Some(out)
}

/// Darboux polynomials of degree at most `degree` (at least 1), with cofactors
/// of degree bounded by the section degree minus one.
pub fn darboux_polynomials(sys: &ProductSystem, degree: u32) -> Result<Vec<DarbouxPolynomial>> {
    let sys: &DVariety = sys;
    let reg = sys.registry();
    let monos = standard_monomials(sys, degree.max(1));
    let section_degree = super::search::ansatz_vars(sys)
        .into_iter()
        .filter_map(|v| sys.scaled_lie(&Polynomial::var(reg, v)).total_degree())
        .max()
        .unwrap_or(0);
    let kmonos = standard_monomials(sys, section_degree.saturating_sub(1));
    let mono_poly = |m: &Monomial| Polynomial::monomial(reg, m.clone(), Q::one());
    let lie: Vec<Polynomial> = monos.iter().map(|m| reduce(sys, &sys.scaled_lie(&mono_poly(m)))).collect();
    let products: Vec<Vec<Polynomial>> =
        kmonos.iter().map(|k| monos.iter().map(|m| reduce(sys, &(&mono_poly(k) * &mono_poly(m)))).collect()).collect();
    let (nd, nk) = (monos.len(), kmonos.len());
    let ureg = unknowns(nd, nk);
    let kvars: Vec<Var> = (nd..nd + nk).collect();

    // coefficient equations, one per monomial of the system
    let mut support: Vec<&Monomial> =
        lie.iter().chain(products.iter().flatten()).flat_map(|p| p.terms().map(|(m, _)| m)).collect();
    support.sort();
    support.dedup();
    let equation = |mu: &Monomial| -> Polynomial {
        let mut terms: Vec<(Monomial, Q)> = Vec::new();
        for (j, a) in lie.iter().enumerate() {
            let c = a.coefficient(mu);
            if !c.is_zero() {
                let mut m = vec![0; nd + nk];
                m[j] = 1;
                terms.push((m, c));
            }
        }
        for (i, row) in products.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                let c = b.coefficient(mu);
                if !c.is_zero() {
                    let mut m = vec![0; nd + nk];
                    m[j] = 1;
                    m[nd + i] = 1;
                    terms.push((m, -c));
                }
            }
        }
        Polynomial::from_terms(&ureg, terms)
    };
    let equations: Vec<Polynomial> = support.iter().map(|mu| equation(mu)).filter(|p| !p.is_zero()).collect();

    let mut cofactors: Vec<Vec<Q>> = Vec::new();
    for (pivot, mono) in monos.iter().enumerate().take(nd) {
        if mono.iter().all(|&e| e == 0) {
            continue;
        }
        // leading monomial of D is `mono`, with coefficient 1
        let mut gens: Vec<Polynomial> = equations
            .iter()
            .map(|p| {
                let mut p = p.substitute(pivot, &Polynomial::one(&ureg));
                for j in 0..pivot {
                    p = p.substitute(j, &Polynomial::zero(&ureg));
                }
                p
            })
            .filter(|p| !p.is_zero())
            .collect();
        gens.sort_by_key(|p| p.num_terms());
        let dvars: Vec<Var> = (pivot + 1..nd).collect();
        let rest: Vec<Var> = (0..=pivot).collect();
        let ord = MonomialOrder::blocks(nd + nk, vec![dvars.clone(), kvars.clone(), rest]);
        let gb = groebner(&gens, &ord, &ureg);
        if gb.iter().any(|g| g.is_constant()) {
            continue;
        }
        let elim: Vec<Polynomial> = gb.into_iter().filter(|g| dvars.iter().all(|&v| !g.mentions(v))).collect();
        if nk > 0 {
            let basis = IdealBasis::new(&ureg, elim.clone());
            match ideal_dimension(&basis, &kvars) {
                Ok(0) => {}
                _ => continue,
            }
        }
        let Some(points) = rational_points(&elim, &kvars, &ureg) else { continue };
        for p in points {
            if !cofactors.contains(&p) {
                cofactors.push(p);
            }
        }
    }
    cofactors.sort();

    let mut out = Vec::new();
    for kappa in cofactors {
        let k = Polynomial::from_terms(reg, kmonos.iter().cloned().zip(kappa.iter().cloned()));
        let keep: Vec<usize> = (0..nd).filter(|&j| !(k.is_zero() && monos[j].iter().all(|&e| e == 0))).collect();
        let columns: Vec<Polynomial> =
            keep.iter().map(|&j| reduce(sys, &(&lie[j] - &(&k * &mono_poly(&monos[j]))))).collect();
        let cofactor = RationalFunction::new(k.clone(), sys.section_denominator().clone())?;
        for coeffs in solve_columns(&columns) {
            let d = Polynomial::from_terms(reg, keep.iter().map(|&j| monos[j].clone()).zip(coeffs));
            if d.is_constant() {
                continue;
            }
            out.push(DarbouxPolynomial { d: d.primitive(), cofactor: cofactor.clone() });
        }
    }
    Ok(out)
}

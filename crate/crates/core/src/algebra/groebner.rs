//! Buchberger's algorithm with the product and chain criteria, followed by
//! inter-reduction to the reduced basis.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use super::order::{self, Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use super::registry::Registry;
use super::Q;

/// Polynomial with terms sorted ascending under a fixed order; leading term last.
#[derive(Clone, Debug)]
pub(crate) struct SortedPoly {
    terms: Vec<(Monomial, Q)>,
}

impl SortedPoly {
    pub(crate) fn from_poly(p: &Polynomial, ord: &MonomialOrder) -> Self {
        let mut terms: Vec<(Monomial, Q)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| ord.cmp(&a.0, &b.0));
        SortedPoly { terms }
    }

    pub(crate) fn to_poly(&self, reg: &Registry) -> Polynomial {
        Polynomial::from_terms(reg, self.terms.iter().cloned())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Monomial {
        &self.terms.last().expect("nonzero").0
    }

    fn lc(&self) -> &Q {
        &self.terms.last().expect("nonzero").1
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.lm().iter().all(|&e| e == 0)
    }

    fn make_monic(&mut self) {
        let inv = self.lc().recip();
        if !inv.is_one() {
            for (_, c) in &mut self.terms {
                *c *= &inv;
            }
        }
    }

    /// `self - c * m * other`
    fn sub_scaled(&self, c: &Q, m: &[u32], other: &SortedPoly, ord: &MonomialOrder) -> SortedPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(mb, cb)| (order::product(mb, m), cb * c)).peekable();
        loop {
            let step = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (Some(x), Some(y)) => ord.cmp(&x.0, &y.0),
            };
            match step {
                Ordering::Less => out.push(a.next().unwrap().clone()),
                Ordering::Greater => {
                    let (m, c) = b.next().unwrap();
                    out.push((m, -c));
                }
                Ordering::Equal => {
                    let (m, ca) = a.next().unwrap();
                    let (_, cb) = b.next().unwrap();
                    let c = ca - cb;
                    if !c.is_zero() {
                        out.push((m.clone(), c));
                    }
                }
            }
        }
        SortedPoly { terms: out }
    }
}

/// Full reduction of `p` modulo `basis` (each element nonzero).
pub(crate) fn reduce(p: SortedPoly, basis: &[SortedPoly], ord: &MonomialOrder) -> SortedPoly {
    let mut p = p;
    let mut rem: Vec<(Monomial, Q)> = Vec::new();
    while let Some((m, c)) = p.terms.last() {
        match basis.iter().find(|g| order::divides(g.lm(), m)) {
            Some(g) => {
                let q = order::quotient(m, g.lm());
                let coef = c / g.lc();
                p = p.sub_scaled(&coef, &q, g, ord);
            }
            None => rem.push(p.terms.pop().unwrap()),
        }
    }
    rem.reverse();
    SortedPoly { terms: rem }
}

fn s_polynomial(f: &SortedPoly, g: &SortedPoly, ord: &MonomialOrder) -> SortedPoly {
    let l = order::lcm(f.lm(), g.lm());
    let mf = order::quotient(&l, f.lm());
    let mg = order::quotient(&l, g.lm());
    let zero = SortedPoly { terms: Vec::new() };
    let a = zero.sub_scaled(&(-f.lc().recip()), &mf, f, ord);
    a.sub_scaled(&g.lc().recip(), &mg, g, ord)
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `ord`,
/// sorted by decreasing leading monomial. The unit ideal gives `[1]`.
pub fn groebner(gens: &[Polynomial], ord: &MonomialOrder, reg: &Registry) -> Vec<Polynomial> {
    let mut basis: Vec<SortedPoly> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let mut s = SortedPoly::from_poly(g, ord);
        s.make_monic();
        if s.is_constant() {
            return vec![Polynomial::one(reg)];
        }
        basis.push(s);
    }
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    while !pending.is_empty() {
        // normal selection strategy: smallest lcm first, ties by index
        let &(i, j) = pending
            .iter()
            .min_by(|&&(a, b), &&(c, d)| {
                let l1 = order::lcm(basis[a].lm(), basis[b].lm());
                let l2 = order::lcm(basis[c].lm(), basis[d].lm());
                ord.cmp(&l1, &l2).then((a, b).cmp(&(c, d)))
            })
            .unwrap();
        pending.remove(&(i, j));
        let (fi, fj) = (&basis[i], &basis[j]);
        let l = order::lcm(fi.lm(), fj.lm());
        if order::product(fi.lm(), fj.lm()) == l {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && order::divides(basis[k].lm(), &l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(fi, fj, ord);
        let mut r = reduce(s, &basis, ord);
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        if r.is_constant() {
            return vec![Polynomial::one(reg)];
        }
        let n = basis.len();
        basis.push(r);
        for k in 0..n {
            pending.insert((k, n));
        }
    }
    interreduce(basis, ord)
        .into_iter()
        .map(|s| {
            let p = s.to_poly(reg).primitive();
            if p.leading_term(ord).map(|(_, c)| c.is_negative()).unwrap_or(false) {
                -p
            } else {
                p
            }
        })
        .collect()
}

fn interreduce(mut basis: Vec<SortedPoly>, ord: &MonomialOrder) -> Vec<SortedPoly> {
    basis.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<SortedPoly> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|h| order::divides(h.lm(), g.lm())) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<SortedPoly> =
            minimal.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, g)| g.clone()).collect();
        let mut r = reduce(minimal[i].clone(), &others, ord);
        r.make_monic();
        reduced.push(r);
    }
    reduced.sort_by(|a, b| ord.cmp(b.lm(), a.lm()));
    reduced
}

/// Remainder of `p` under full reduction by `basis`.
pub fn reduce_polynomial(p: &Polynomial, basis: &[Polynomial], ord: &MonomialOrder) -> Polynomial {
    if basis.is_empty() || p.is_zero() {
        return p.clone();
    }
    let sorted: Vec<SortedPoly> =
        basis.iter().filter(|g| !g.is_zero()).map(|g| SortedPoly::from_poly(g, ord)).collect();
    reduce(SortedPoly::from_poly(p, ord), &sorted, ord).to_poly(p.registry())
}

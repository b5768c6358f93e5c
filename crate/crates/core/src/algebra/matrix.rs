//! Linear algebra over Q and rank of rational-function matrices modulo an ideal.

use num_traits::{One, Zero};

use super::gcd;
use super::ideal::{groebner_basis, IdealBasis};
use super::polynomial::Polynomial;
use super::ratfunc::RationalFunction;
use super::Q;
use crate::error::{Error, Result};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Q>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for the rows of `A`, one vector per free column:
/// each has a 1 in its free column and zeros in the other free columns.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Rank over the fraction field of the quotient ring, with entries tested for
/// zero by normal form. Assumes the ideal is prime.
pub fn matrix_rank_mod_ideal(m: &[Vec<RationalFunction>], basis: &IdealBasis) -> Result<usize> {
    let Some(first) = m.iter().flatten().next() else { return Ok(0) };
    let reg = first.registry().clone();
    let basis = groebner_basis(basis);
    let reduce = |p: &Polynomial| -> Polynomial {
        if basis.is_empty() {
            p.clone()
        } else {
            basis.reduce(p)
        }
    };
    // clear denominators row by row
    let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(m.len());
    for row in m {
        let mut den = Polynomial::one(&reg);
        for f in row {
            if !basis.is_empty() && basis.contains(f.denominator()) {
                return Err(Error::DenominatorVanishesOnVariety(f.denominator().to_string()));
            }
            den = gcd::lcm(&den, f.denominator());
        }
        let cleared: Vec<Polynomial> = row
            .iter()
            .map(|f| {
                let q = gcd::div_exact(&den, f.denominator()).expect("lcm is a multiple");
                reduce(&(f.numerator() * &q))
            })
            .collect();
        rows.push(cleared);
    }
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let a = pivot_row[c].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let b = row[c].clone();
            let mut updated: Vec<Polynomial> =
                row.iter().zip(&pivot_row).map(|(x, y)| reduce(&(&(&a * x) - &(&b * y)))).collect();
            let content = updated.iter().filter(|p| !p.is_zero()).fold(Polynomial::zero(&reg), |g, p| gcd::gcd(&g, p));
            if !content.is_zero() && !content.is_constant() {
                for x in updated.iter_mut() {
                    if !x.is_zero() {
                        *x = gcd::div_exact(x, &content).expect("content divides");
                    }
                }
            }
            *row = updated;
        }
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::registry::{Registry, VarKind, VariableRegistry};

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn reg() -> Registry {
        VariableRegistry::new([("t", VarKind::Time), ("y", VarKind::Fiber), ("x", VarKind::Fiber), ("a", VarKind::Aux)])
            .unwrap()
            .into_shared()
    }

    #[test]
    fn nullspace_of_rank_one_system() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot: Q = rows[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn rank_examples() {
        let r = reg();
        let t = RationalFunction::var(&r, 0);
        let a = Polynomial::var(&r, 3);
        let one = RationalFunction::one(&r);
        let over_a = |f: RationalFunction| f.checked_div(&RationalFunction::from_poly(a.clone())).unwrap();
        let m = vec![
            vec![over_a(one.scale(&q(-2))), over_a(one.clone())],
            vec![over_a(&one + &t.scale(&q(2))), over_a(-&t)],
        ];
        assert_eq!(matrix_rank_mod_ideal(&m, &IdealBasis::empty(&r)).unwrap(), 2);

        let x = RationalFunction::var(&r, 2);
        let m = vec![vec![x.clone()], vec![x.clone()]];
        assert_eq!(matrix_rank_mod_ideal(&m, &IdealBasis::empty(&r)).unwrap(), 1);

        let ideal = groebner_basis(&IdealBasis::new(&r, vec![Polynomial::var(&r, 2)]));
        assert_eq!(matrix_rank_mod_ideal(&[vec![x]], &ideal).unwrap(), 0);
    }

    #[test]
    fn rank_sees_the_ideal() {
        // rows (x, y) and (y, x) are dependent on x = y
        let r = reg();
        let x = RationalFunction::var(&r, 2);
        let y = RationalFunction::var(&r, 1);
        let m = vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]];
        assert_eq!(matrix_rank_mod_ideal(&m, &IdealBasis::empty(&r)).unwrap(), 2);
        let diff = &Polynomial::var(&r, 2) - &Polynomial::var(&r, 1);
        let ideal = groebner_basis(&IdealBasis::new(&r, vec![diff]));
        assert_eq!(matrix_rank_mod_ideal(&m, &ideal).unwrap(), 1);
    }
}

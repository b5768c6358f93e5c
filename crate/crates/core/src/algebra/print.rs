//! Canonical text for polynomials and rational functions.
//!
//! The output re-parses to the same canonical value: terms are written in
//! decreasing default order, rational coefficients as `p/q*m`, and a
//! denominator is parenthesized unless it is a bare integer or a single
//! variable power.

use num_traits::{One, Signed};

use super::order::{self, Monomial};
use super::polynomial::Polynomial;
use super::ratfunc::RationalFunction;
use super::registry::Var;
use super::Q;

pub type Names<'a> = &'a dyn Fn(Var) -> String;

fn monomial_str(m: &[u32], names: Names) -> String {
    let mut parts = Vec::new();
    for (v, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names(v)),
            e => parts.push(format!("{}^{e}", names(v))),
        }
    }
    parts.join("*")
}

fn is_unit_monomial(m: &[u32]) -> bool {
    m.iter().all(|&e| e == 0)
}

fn coef_str(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Term with nonnegative coefficient `c`.
fn term_str(c: &Q, m: &[u32], names: Names) -> String {
    if is_unit_monomial(m) {
        coef_str(c)
    } else if c.is_one() {
        monomial_str(m, names)
    } else {
        format!("{}*{}", coef_str(c), monomial_str(m, names))
    }
}

fn join_signed(terms: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (negative, body)) in terms.into_iter().enumerate() {
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn poly_to_string(p: &Polynomial, names: Names) -> String {
    let ord = p.registry().default_order();
    join_signed(p.sorted_terms(&ord).into_iter().map(|(m, c)| (c.is_negative(), term_str(&c.abs(), m, names))))
}

fn single_var_power(m: &[u32]) -> bool {
    m.iter().filter(|&&e| e > 0).count() == 1
}

/// Denominator text, parenthesized when needed after a `/`.
fn denominator_str(c: &Q, m: &[u32], names: Names) -> String {
    let body = term_str(c, m, names);
    if is_unit_monomial(m) || (c.is_one() && single_var_power(m)) {
        body
    } else {
        format!("({body})")
    }
}

pub fn ratfunc_to_string(f: &RationalFunction, names: Names) -> String {
    let num = f.numerator();
    let den = f.denominator();
    if den.is_one() {
        return poly_to_string(num, names);
    }
    let ord = num.registry().default_order();
    if den.num_terms() == 1 {
        let (dm, dc) = den.terms().next().unwrap();
        let cancels = !is_unit_monomial(dm) && num.terms().any(|(m, _)| order::divides(dm, m));
        if is_unit_monomial(dm) || cancels {
            // termwise: each numerator term over the monomial denominator
            return join_signed(num.sorted_terms(&ord).into_iter().map(|(m, c)| {
                let r = (c / dc).abs();
                let common: Monomial = m.iter().zip(dm).map(|(a, b)| *a.min(b)).collect();
                let top = order::quotient(m, &common);
                let bottom = order::quotient(dm, &common);
                let upper = term_str(&Q::from_integer(r.numer().clone()), &top, names);
                let lower_c = Q::from_integer(r.denom().clone());
                let body = if lower_c.is_one() && is_unit_monomial(&bottom) {
                    upper
                } else {
                    format!("{upper}/{}", denominator_str(&lower_c, &bottom, names))
                };
                (c.is_negative(), body)
            }));
        }
    }
    let num_s = poly_to_string(num, names);
    let num_s = if num.num_terms() > 1 { format!("({num_s})") } else { num_s };
    let den_s = if den.num_terms() == 1 {
        let (m, c) = den.terms().next().unwrap();
        denominator_str(c, m, names)
    } else {
        format!("({})", poly_to_string(den, names))
    };
    format!("{num_s}/{den_s}")
}

//! Exact division and gcd of multivariate polynomials over Q.
//!
//! The gcd is the recursive primitive-PRS algorithm: split off the content
//! with respect to a main variable (itself a gcd over fewer variables), then
//! run pseudo-remainder sequences on primitive parts.

use num_traits::One;

use super::order;
use super::polynomial::Polynomial;
use super::registry::Var;

/// `a / b` when `b` divides `a` exactly, otherwise `None`.
pub fn div_exact(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    assert!(!b.is_zero(), "division by the zero polynomial");
    let reg = a.registry().clone();
    let mut quotient = Polynomial::zero(&reg);
    let mut rem = a.clone();
    // BTreeMap order is lex with variable 0 most significant
    let (lb, cb) = b.terms().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
    loop {
        let lead = rem.terms().next_back().map(|(m, c)| (m.clone(), c.clone()));
        let Some((lr, cr)) = lead else { break };
        if !order::divides(&lb, &lr) {
            return None;
        }
        let m = order::quotient(&lr, &lb);
        let c = cr / &cb;
        rem = &rem - &b.mul_term(&m, &c);
        quotient.add_term(m, c);
    }
    Some(quotient)
}

/// Greatest common divisor, returned integer-primitive with positive leading coefficient.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    gcd_raw(a, b).primitive()
}

/// Least common multiple, integer-primitive.
pub fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero(a.registry());
    }
    let g = gcd_raw(a, b);
    let q = div_exact(a, &g).expect("gcd divides its argument");
    (&q * b).primitive()
}

fn gcd_raw(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let reg = a.registry();
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(reg);
    }
    if div_exact(a, b).is_some() {
        return b.primitive();
    }
    if div_exact(b, a).is_some() {
        return a.primitive();
    }
    let va = a.variables();
    let vb = b.variables();
    let mut vars: Vec<Var> = va.iter().chain(&vb).copied().collect();
    vars.sort_unstable();
    vars.dedup();
    let bounds: Vec<Option<u32>> = vars.iter().map(|&x| modular::degree_bound(a, b, x)).collect();
    if bounds.iter().all(|b| *b == Some(0)) {
        return Polynomial::one(reg);
    }
    if let Some(i) = bounds.iter().position(|b| *b == Some(0)) {
        // the gcd does not involve vars[i], so it divides every coefficient in it
        let x = vars[i];
        let mut g = Polynomial::zero(reg);
        for c in a.coeffs_in(x).into_values().chain(b.coeffs_in(x).into_values()) {
            g = gcd_raw(&g, &c);
            if g.is_constant() {
                return Polynomial::one(reg);
            }
        }
        return g;
    }
    // prefer a variable shared by both, with the smallest degree
    let shared: Vec<Var> = va.iter().copied().filter(|v| vb.contains(v)).collect();
    let x = match shared.iter().copied().min_by_key(|&v| a.degree_in(v).max(b.degree_in(v))) {
        Some(x) => x,
        None => {
            // no shared variable: gcd lives in the content of either side
            let x = va[0];
            return gcd_raw(&content_in(a, x), b);
        }
    };
    let ca = content_in(a, x);
    let cb = content_in(b, x);
    let c = gcd_raw(&ca, &cb);
    let pa = div_exact(a, &ca).expect("content divides").primitive();
    let pb = div_exact(b, &cb).expect("content divides").primitive();
    let (mut f, mut g) = if pa.degree_in(x) >= pb.degree_in(x) { (pa, pb) } else { (pb, pa) };
    let prim = loop {
        let r = pseudo_remainder(&f, &g, x);
        if r.is_zero() {
            break primitive_part_in(&g, x);
        }
        if r.degree_in(x) == 0 {
            break Polynomial::one(reg);
        }
        f = g;
        g = primitive_part_in(&r, x);
    };
    (&c * &prim).primitive()
}

/// Upper bounds on the degree of a gcd from images modulo a large prime.
///
/// Specializing every variable but `x` at a point where the leading
/// coefficients in `x` stay nonzero modulo `p` can only raise the degree of
/// the gcd in `x`, so the degree of the image gcd bounds the true one.
mod modular {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{ToPrimitive, Zero};

    use super::super::polynomial::Polynomial;
    use super::super::registry::Var;

    const P: u64 = (1 << 61) - 1;

    fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    fn add(a: u64, b: u64) -> u64 {
        (a + b) % P
    }

    fn sub(a: u64, b: u64) -> u64 {
        (a + P - b) % P
    }

    fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    fn reduce(n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(P)).to_u64().expect("reduced below p")
    }

    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        (z ^ (z >> 31)) % P
    }

    /// Coefficients in `x` of the image at `point`; `None` if a denominator vanishes mod p.
    fn image(f: &Polynomial, x: Var, point: &[u64]) -> Option<Vec<u64>> {
        let mut out = vec![0u64; f.degree_in(x) as usize + 1];
        for (m, c) in f.terms() {
            let den = reduce(c.denom());
            if den == 0 {
                return None;
            }
            let mut v = mul(reduce(c.numer()), inv(den));
            for (i, &e) in m.iter().enumerate() {
                if i != x && e > 0 {
                    v = mul(v, pow(point[i], e as u64));
                }
            }
            let k = m[x] as usize;
            out[k] = add(out[k], v);
        }
        Some(out)
    }

    fn trim(f: &mut Vec<u64>) {
        while f.last() == Some(&0) {
            f.pop();
        }
    }

    fn gcd_degree(mut f: Vec<u64>, mut g: Vec<u64>) -> u32 {
        trim(&mut f);
        trim(&mut g);
        while !g.is_empty() {
            // f mod g
            let lead_inv = inv(*g.last().expect("nonempty"));
            while f.len() >= g.len() {
                let q = mul(*f.last().expect("nonempty"), lead_inv);
                let shift = f.len() - g.len();
                for (i, &gi) in g.iter().enumerate() {
                    f[shift + i] = sub(f[shift + i], mul(q, gi));
                }
                trim(&mut f);
                if f.is_empty() {
                    break;
                }
            }
            std::mem::swap(&mut f, &mut g);
        }
        (f.len() as u32).saturating_sub(1)
    }

    pub(super) fn degree_bound(a: &Polynomial, b: &Polynomial, x: Var) -> Option<u32> {
        let (da, db) = (a.degree_in(x), b.degree_in(x));
        if da == 0 || db == 0 {
            return Some(0);
        }
        let mut state = 0x5eed_u64 + x as u64;
        for _ in 0..3 {
            let point: Vec<u64> = (0..a.nvars()).map(|_| splitmix(&mut state)).collect();
            let (Some(fa), Some(fb)) = (image(a, x, &point), image(b, x, &point)) else { return None };
            if fa[da as usize].is_zero() || fb[db as usize].is_zero() {
                continue;
            }
            return Some(gcd_degree(fa, fb));
        }
        None
    }
}

/// gcd of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content_in(p: &Polynomial, x: Var) -> Polynomial {
    let coeffs = p.coeffs_in(x);
    let mut it = coeffs.into_values();
    let mut g = match it.next() {
        Some(c) => c.primitive(),
        None => return Polynomial::zero(p.registry()),
    };
    for c in it {
        if g.is_one() {
            break;
        }
        g = gcd_raw(&g, &c);
    }
    g
}

pub fn primitive_part_in(p: &Polynomial, x: Var) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, x);
    div_exact(p, &c).expect("content divides").primitive()
}

/// Sparse pseudo-remainder of `f` by `g` in the variable `x`.
pub fn pseudo_remainder(f: &Polynomial, g: &Polynomial, x: Var) -> Polynomial {
    let dg = g.degree_in(x);
    let gc = g.coeffs_in(x);
    let lc_g = gc.get(&dg).cloned().expect("leading coefficient exists");
    let mut r = f.clone();
    let reg = f.registry().clone();
    while !r.is_zero() && r.degree_in(x) >= dg {
        let dr = r.degree_in(x);
        let lc_r = r.coeffs_in(x).remove(&dr).expect("leading coefficient exists");
        let mut shift = vec![0u32; reg.len()];
        shift[x] = dr - dg;
        let sub = (&lc_r * g).mul_term(&shift, &super::Q::one());
        r = &(&lc_g * &r) - &sub;
        if !r.is_zero() {
            r = r.primitive();
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::registry::{Registry, VarKind, VariableRegistry};

    fn reg() -> Registry {
        VariableRegistry::new([("t", VarKind::Time), ("x", VarKind::Fiber), ("y", VarKind::Fiber)])
            .unwrap()
            .into_shared()
    }

    #[test]
    fn gcd_of_products() {
        let r = reg();
        let t = Polynomial::var(&r, 0);
        let x = Polynomial::var(&r, 1);
        let y = Polynomial::var(&r, 2);
        let one = Polynomial::one(&r);
        let common = &(&x * &y) - &t;
        let a = &common * &(&x + &one);
        let b = &common * &(&y.pow(2) + &t);
        assert_eq!(gcd(&a, &b), common.primitive());
        assert!(gcd(&(&x + &one), &(&x - &one)).is_one());
    }

    #[test]
    fn exact_division_detects_non_divisibility() {
        let r = reg();
        let x = Polynomial::var(&r, 1);
        let y = Polynomial::var(&r, 2);
        let p = &x.pow(2) - &y.pow(2);
        assert_eq!(div_exact(&p, &(&x - &y)), Some(&x + &y));
        assert_eq!(div_exact(&p, &(&x - &Polynomial::one(&r))), None);
    }

    #[test]
    fn gcd_with_disjoint_variables() {
        let r = reg();
        let t = Polynomial::var(&r, 0);
        let x = Polynomial::var(&r, 1);
        let y = Polynomial::var(&r, 2);
        let a = &(&t + &Polynomial::one(&r)) * &x;
        let b = &(&t + &Polynomial::one(&r)) * &y.pow(2);
        assert_eq!(gcd(&a, &b), &t + &Polynomial::one(&r));
    }
}

//! Common level sets `h_i = c_i` at generic constant values `c_i`.

use crate::algebra::{
    ideal_dimension, quotient_degree, IdealBasis, Polynomial, QuotientDegree, RationalFunction, Var, VarKind,
};
use crate::dvariety::ProductSystem;
use crate::error::Result;

struct LevelSystem {
    basis: IdealBasis,
    /// Variable inverting the denominators, when one was needed.
    inverse: Option<Var>,
}

/// The ideal plus `num(h_i) - c_i den(h_i)` over a registry with the `c_i`
/// appended. Denominators that involve `counted` are inverted by an extra
/// variable so that their zero sets do not contribute components.
fn level_system(hs: &[RationalFunction], sys: &ProductSystem, counted: &[Var]) -> Result<LevelSystem> {
    for h in hs {
        sys.check_defined(h)?;
    }
    let reg = sys.registry();
    let mut extended = (**reg).clone();
    let consts: Vec<Var> = (0..hs.len())
        .map(|i| {
            let name = extended.fresh_name(&format!("c{i}"));
            extended.push(name, VarKind::Adjoined)
        })
        .collect::<Result<_>>()?;
    let dens: Vec<&Polynomial> =
        hs.iter().map(|h| h.denominator()).filter(|d| counted.iter().any(|&v| d.mentions(v))).collect();
    let inverse = if dens.is_empty() {
        None
    } else {
        let name = extended.fresh_name("z");
        Some(extended.push(name, VarKind::Fiber)?)
    };
    let ext = extended.into_shared();
    let mut gens: Vec<Polynomial> = sys.equations().iter().map(|p| p.embed(&ext)).collect::<Result<_>>()?;
    for (h, &c) in hs.iter().zip(&consts) {
        let num = h.numerator().embed(&ext)?;
        let den = h.denominator().embed(&ext)?;
        gens.push(&num - &(&Polynomial::var(&ext, c) * &den));
    }
    if let Some(z) = inverse {
        let mut prod = Polynomial::var(&ext, z);
        for d in dens {
            prod = &prod * &d.embed(&ext)?;
        }
        gens.push(&prod - &Polynomial::one(&ext));
    }
    Ok(LevelSystem { basis: IdealBasis::new(&ext, gens), inverse })
}

/// Dimension of a generic common level set, counting time and the dynamic
/// coordinates; with `restrict_to_v` the w coordinates are treated as constants.
pub fn level_set_dimension(hs: &[RationalFunction], sys: &ProductSystem, restrict_to_v: bool) -> Result<usize> {
    let mut counted = vec![sys.time()];
    counted.extend_from_slice(sys.v_vars());
    if !restrict_to_v {
        counted.extend_from_slice(sys.w_vars());
    }
    counted.sort_unstable();
    let level = level_system(hs, sys, &counted)?;
    counted.extend(level.inverse);
    ideal_dimension(&level.basis, &counted)
}

/// Number of v points, with multiplicity, over a generic time, w point and
/// constant tuple.
pub fn generic_fiber_degree(hs: &[RationalFunction], sys: &ProductSystem) -> Result<QuotientDegree> {
    if hs.iter().any(|h| h.is_constant()) {
        return Ok(QuotientDegree::Infinite);
    }
    let mut counted = sys.v_vars().to_vec();
    let level = level_system(hs, sys, &counted)?;
    counted.extend(level.inverse);
    quotient_degree(&level.basis, &counted)
}

//! Algebraic independence of integrals by the Jacobian criterion, computed
//! modulo the ideal at the generic point of the variety.

use crate::algebra::{matrix_rank_mod_ideal, RationalFunction, Var, VarKind};
use crate::dvariety::{DVariety, ProductSystem};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    /// Rank of the stacked Jacobian of equations and integrals, in time and all coordinates.
    pub rank_all: usize,
    /// Rank of the Jacobian of the equations alone, same directions.
    pub base_rank_all: usize,
    /// As `rank_all`, differentiating in the v coordinates only.
    pub rank_v: usize,
    pub base_rank_v: usize,
    pub independent: bool,
    pub w_independent: bool,
}

fn jacobian(fs: &[RationalFunction], directions: &[Var]) -> Vec<Vec<RationalFunction>> {
    fs.iter().map(|f| directions.iter().map(|&v| f.partial(v)).collect()).collect()
}

/// `(rank with hs, rank without)` in the given directions.
fn ranks(sys: &DVariety, hs: &[RationalFunction], directions: &[Var]) -> Result<(usize, usize)> {
    let equations: Vec<RationalFunction> =
        sys.equations().iter().map(|p| RationalFunction::from_poly(p.clone())).collect();
    let mut rows = jacobian(&equations, directions);
    let base = matrix_rank_mod_ideal(&rows, sys.ideal())?;
    rows.extend(jacobian(hs, directions));
    let all = matrix_rank_mod_ideal(&rows, sys.ideal())?;
    Ok((all, base))
}

/// Independence over the constants (all directions, time included) and over
/// the field of `t` and `w` (v directions only).
pub fn independence_test(hs: &[RationalFunction], sys: &ProductSystem) -> Result<IndependenceReport> {
    for h in hs {
        sys.check_defined(h)?;
    }
    let reg = sys.registry();
    let all: Vec<Var> = (0..reg.len()).filter(|&v| reg.kind(v) == VarKind::Time || reg.kind(v).is_dynamic()).collect();
    let (rank_all, base_rank_all) = ranks(sys, hs, &all)?;
    let (rank_v, base_rank_v) = ranks(sys, hs, sys.v_vars())?;
    Ok(IndependenceReport {
        rank_all,
        base_rank_all,
        rank_v,
        base_rank_v,
        independent: rank_all == base_rank_all + hs.len(),
        w_independent: rank_v == base_rank_v + hs.len(),
    })
}

/// Same report; named for call sites that care about the w verdict.
pub fn w_independence_test(hs: &[RationalFunction], sys: &ProductSystem) -> Result<IndependenceReport> {
    independence_test(hs, sys)
}

use std::collections::BTreeMap;

use super::{DVariety, Fibration, ProductSystem};
use crate::algebra::{Var, VarKind, VariableRegistry};
use crate::error::Result;

/// The joint system over the common time line with section `(1, s_W, s_V)`.
///
/// Coordinates of `w` become auxiliary variables placed before those of `v`;
/// a name already used by `v` is replaced by a fresh one. Parameters and
/// constants with equal names and kinds are shared.
pub fn fibered_product(w: &Fibration, v: &ProductSystem) -> Result<ProductSystem> {
    let (wreg, vreg) = (w.registry(), v.registry());
    let w_time = w.time();
    if wreg.len() == 1 {
        return Ok(v.clone());
    }
    let mut reg = VariableRegistry::empty();
    let mut vmap: Vec<Var> = vec![usize::MAX; vreg.len()];
    let mut wmap: Vec<Var> = vec![usize::MAX; wreg.len()];
    vmap[v.time()] = reg.push(vreg.name(v.time()), VarKind::Time)?;
    wmap[w_time] = vmap[v.time()];
    let taken = |name: &str, reg: &VariableRegistry| vreg.index_of(name).is_some() || reg.index_of(name).is_some();
    let mut w_dynamic = Vec::new();
    for (i, info) in wreg.iter() {
        if i == w_time {
            continue;
        }
        let shared = !info.kind.is_dynamic() && vreg.index_of(&info.name).is_some_and(|j| vreg.kind(j) == info.kind);
        if shared {
            continue;
        }
        let mut name = info.name.clone();
        let mut k = 1;
        while taken(&name, &reg) {
            name = format!("{}_{k}", info.name);
            k += 1;
        }
        let kind = if info.kind.is_dynamic() { VarKind::Aux } else { info.kind };
        wmap[i] = reg.push(name, kind)?;
        if info.kind.is_dynamic() {
            w_dynamic.push(wmap[i]);
        }
    }
    for (i, info) in vreg.iter() {
        if i != v.time() {
            vmap[i] = reg.push(info.name.clone(), info.kind)?;
        }
    }
    for (i, info) in wreg.iter() {
        if wmap[i] == usize::MAX {
            wmap[i] = vmap[vreg.index_of(&info.name).expect("shared name")];
        }
    }
    let reg = reg.into_shared();
    let mut equations = Vec::new();
    let mut section = BTreeMap::new();
    let mut locus = Vec::new();
    for (sys, map) in [(w.variety(), &wmap), (v.variety(), &vmap)] {
        equations.extend(sys.equations().iter().map(|p| p.map_into(&reg, map)));
        section.extend(sys.section_entries().map(|(x, f)| (map[x], f.map_into(&reg, map))));
        locus.extend(sys.excluded_locus().iter().map(|p| p.map_into(&reg, map)));
    }
    let irreducible = w.irreducible() && v.irreducible();
    let variety = DVariety::new(&reg, equations, section, locus, irreducible)?;
    let mut w_vars = w_dynamic;
    w_vars.extend(v.w_vars().iter().map(|&x| vmap[x]));
    w_vars.sort_unstable();
    let v_vars = v.v_vars().iter().map(|&x| vmap[x]).collect();
    ProductSystem::new(Fibration::new(variety)?, w_vars, v_vars)
}

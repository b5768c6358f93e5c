use std::cmp::Ordering;

/// Exponent vector laid out in registry order.
pub type Monomial = Vec<u32>;

/// Block monomial order: blocks are compared in sequence, each block by
/// degree-reverse-lexicographic order on its own variables.
///
/// A single-variable block compares plain exponents, so `lex` is the block
/// order with one block per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    nvars: usize,
    blocks: Vec<Vec<usize>>,
}

impl MonomialOrder {
    /// Every variable must appear in exactly one block.
    pub fn blocks(nvars: usize, blocks: Vec<Vec<usize>>) -> Self {
        let mut seen = vec![false; nvars];
        for &v in blocks.iter().flatten() {
            assert!(v < nvars && !seen[v], "variable {v} misplaced in monomial order");
            seen[v] = true;
        }
        assert!(seen.iter().all(|&s| s), "monomial order does not cover every variable");
        let blocks = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        MonomialOrder { nvars, blocks }
    }

    pub fn degrevlex(nvars: usize) -> Self {
        Self::blocks(nvars, vec![(0..nvars).collect()])
    }

    pub fn lex(nvars: usize) -> Self {
        Self::blocks(nvars, (0..nvars).map(|v| vec![v]).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for block in &self.blocks {
            let da: u64 = block.iter().map(|&v| a[v] as u64).sum();
            let db: u64 = block.iter().map(|&v| b[v] as u64).sum();
            match da.cmp(&db) {
                Ordering::Equal => {}
                o => return o,
            }
            for &v in block.iter().rev() {
                match a[v].cmp(&b[v]) {
                    Ordering::Equal => {}
                    // smaller exponent in the last differing variable wins
                    o => return o.reverse(),
                }
            }
        }
        Ordering::Equal
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn quotient(b: &[u32], a: &[u32]) -> Monomial {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

pub fn product(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// All exponent vectors over `vars` (inside an `nvars` layout) with total degree at most `max_degree`.
pub fn monomials_up_to(nvars: usize, vars: &[usize], max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(vars: &[usize], left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => out.push(cur.clone()),
            Some((&v, rest)) => {
                for e in 0..=left {
                    cur[v] = e;
                    rec(rest, left - e, cur, out);
                }
                cur[v] = 0;
            }
        }
    }
    rec(vars, max_degree, &mut cur, &mut out);
    out
}

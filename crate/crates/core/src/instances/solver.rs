//! Exact satisfiability and implication over compiled instances.
//!
//! Conjunctions of affine functions go through Gaussian elimination over
//! GF(2); everything else through a small backtracking search with
//! generalized arc consistency on the truth tables. A pool of known models
//! refutes most non-implications without a search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::semantics::{Compiled, Con};
use crate::boolfun::is_affine_table;

const POOL_SEED_MODELS: usize = 32;
const POOL_CAP: usize = 2048;

pub(crate) struct Engine {
    n: usize,
    cons: Vec<Con>,
    occurs: Vec<Vec<u32>>,
    order: Vec<u32>,
    gf2: Option<Gf2>,
    sat: bool,
    pool: Vec<u128>,
    rng: ChaCha8Rng,
}

impl Engine {
    pub fn new(c: Compiled, seed: u64) -> Self {
        let Compiled { n, cons } = c;
        let mut occurs = vec![Vec::new(); n];
        for (i, c) in cons.iter().enumerate() {
            for &x in &c.vars {
                occurs[x as usize].push(i as u32);
            }
        }
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(occurs[x as usize].len()));
        let gf2 = if cons.iter().all(|c| is_affine_table(&c.table)) {
            let mut g = Gf2::default();
            for c in &cons {
                g.add_con(c);
            }
            Some(g)
        } else {
            None
        };
        let mut e = Engine {
            n,
            cons,
            occurs,
            order,
            gf2,
            sat: true,
            pool: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        e.sat = match e.model(&[], false) {
            Some(m) => {
                e.pool.push(m);
                true
            }
            None => false,
        };
        if e.sat {
            for _ in 0..POOL_SEED_MODELS {
                if let Some(m) = e.model(&[], true) {
                    e.pool.push(m);
                }
            }
            e.pool.sort_unstable();
            e.pool.dedup();
        }
        e
    }

    pub fn is_sat(&self) -> bool {
        self.sat
    }

    #[cfg(test)]
    pub fn pool(&self) -> &[u128] {
        &self.pool
    }

    /// Whether every model satisfies the function `table` over `vars`.
    pub fn implies(&mut self, vars: &[u32], table: &crate::boolfun::TruthTable) -> bool {
        if !self.sat {
            return true;
        }
        if self.pool.iter().any(|&m| !table.get(Con::row_of(vars, m))) {
            return false;
        }
        let k = vars.len();
        let mut assume = Vec::with_capacity(k);
        for row in 0..table.len() {
            if table.get(row) {
                continue;
            }
            assume.clear();
            for (j, &x) in vars.iter().enumerate() {
                assume.push((x, (row >> (k - 1 - j)) & 1 == 1));
            }
            if let Some(m) = self.model(&assume, true) {
                if self.pool.len() < POOL_CAP {
                    self.pool.push(m);
                }
                return false;
            }
        }
        true
    }

    /// Some model extending `assume`, randomized when `random` is set.
    pub fn model(&mut self, assume: &[(u32, bool)], random: bool) -> Option<u128> {
        if let Some(g) = &self.gf2 {
            let mut g = g.clone();
            for &(x, b) in assume {
                g.add(1u128 << x, b);
            }
            if g.inconsistent {
                return None;
            }
            let free = if random { self.rng.gen::<u128>() } else { 0 };
            return Some(g.solve(free, self.n));
        }
        let mut d = Dpll {
            cons: &self.cons,
            occurs: &self.occurs,
            order: &self.order,
            val: vec![-1; self.n],
            trail: Vec::new(),
            rng: if random { Some(&mut self.rng) } else { None },
        };
        d.run(assume)
    }
}

struct Dpll<'a> {
    cons: &'a [Con],
    occurs: &'a [Vec<u32>],
    order: &'a [u32],
    val: Vec<i8>,
    trail: Vec<u32>,
    rng: Option<&'a mut ChaCha8Rng>,
}

impl Dpll<'_> {
    fn run(&mut self, assume: &[(u32, bool)]) -> Option<u128> {
        let mut queue = Vec::new();
        for &(x, b) in assume {
            match self.val[x as usize] {
                -1 => {
                    self.set(x, b);
                    queue.push(x);
                }
                v if (v == 1) != b => return None,
                _ => {}
            }
        }
        for ci in 0..self.cons.len() {
            if !self.revise(ci as u32, &mut queue) {
                return None;
            }
        }
        if !self.propagate(queue) {
            return None;
        }
        if self.search() {
            let mut m = 0u128;
            for (x, &v) in self.val.iter().enumerate() {
                if v == 1 {
                    m |= 1 << x;
                }
            }
            Some(m)
        } else {
            None
        }
    }

    fn set(&mut self, x: u32, b: bool) {
        self.val[x as usize] = b as i8;
        self.trail.push(x);
    }

    fn undo(&mut self, to: usize) {
        while self.trail.len() > to {
            let x = self.trail.pop().expect("non-empty trail");
            self.val[x as usize] = -1;
        }
    }

    /// Narrows constraint `ci`; false on conflict.
    fn revise(&mut self, ci: u32, queue: &mut Vec<u32>) -> bool {
        let c = &self.cons[ci as usize];
        let k = c.vars.len();
        let (mut mask, mut want) = (0u32, 0u32);
        for (j, &x) in c.vars.iter().enumerate() {
            let v = self.val[x as usize];
            if v >= 0 {
                let bit = 1u32 << (k - 1 - j);
                mask |= bit;
                if v == 1 {
                    want |= bit;
                }
            }
        }
        let (mut all, mut any, mut seen) = (u32::MAX, 0u32, false);
        for &r in &c.rows {
            if r & mask == want {
                all &= r;
                any |= r;
                seen = true;
            }
        }
        if !seen {
            return false;
        }
        for (j, &x) in c.vars.iter().enumerate() {
            let bit = 1u32 << (k - 1 - j);
            if mask & bit == 0 && (all & bit != 0 || any & bit == 0) {
                self.set(x, all & bit != 0);
                queue.push(x);
            }
        }
        true
    }

    fn propagate(&mut self, mut queue: Vec<u32>) -> bool {
        while let Some(x) = queue.pop() {
            for &ci in &self.occurs[x as usize] {
                if !self.revise(ci, &mut queue) {
                    return false;
                }
            }
        }
        true
    }

    fn search(&mut self) -> bool {
        let Some(&x) = self.order.iter().find(|&&x| self.val[x as usize] < 0) else {
            return true;
        };
        let first = match self.rng.as_deref_mut() {
            Some(r) => r.gen::<bool>(),
            None => false,
        };
        for b in [first, !first] {
            let mark = self.trail.len();
            self.set(x, b);
            if self.propagate(vec![x]) && self.search() {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// A linear system over GF(2) in reduced row echelon form.
#[derive(Clone, Default)]
struct Gf2 {
    rows: Vec<(u128, bool)>,
    inconsistent: bool,
}

impl Gf2 {
    fn add(&mut self, mut mask: u128, mut rhs: bool) {
        for &(m, r) in &self.rows {
            let p = m.trailing_zeros();
            if (mask >> p) & 1 == 1 {
                mask ^= m;
                rhs ^= r;
            }
        }
        if mask == 0 {
            self.inconsistent |= rhs;
            return;
        }
        let p = mask.trailing_zeros();
        for row in &mut self.rows {
            if (row.0 >> p) & 1 == 1 {
                row.0 ^= mask;
                row.1 ^= rhs;
            }
        }
        self.rows.push((mask, rhs));
    }

    /// Adds the linear equations cutting out an affine table.
    fn add_con(&mut self, c: &Con) {
        let Some(&s0) = c.rows.first() else {
            self.inconsistent = true;
            return;
        };
        let k = c.vars.len();
        // basis of the direction space
        let mut basis: Vec<u32> = Vec::new();
        for &r in &c.rows {
            let mut d = r ^ s0;
            for &b in &basis {
                d = d.min(d ^ b);
            }
            if d != 0 {
                basis.push(d);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        for coef in 1u32..(1 << k) {
            if basis.iter().all(|&b| (coef & b).count_ones() % 2 == 0) {
                let mut mask = 0u128;
                for (j, &x) in c.vars.iter().enumerate() {
                    if coef & (1 << (k - 1 - j)) != 0 {
                        mask |= 1 << x;
                    }
                }
                self.add(mask, (coef & s0).count_ones() % 2 == 1);
            }
        }
    }

    /// The solution taking free variables from `free`.
    fn solve(&self, free: u128, n: usize) -> u128 {
        let all = if n == 128 {
            u128::MAX
        } else {
            (1u128 << n) - 1
        };
        let pivots = self
            .rows
            .iter()
            .fold(0u128, |acc, r| acc | (1 << r.0.trailing_zeros()));
        let mut a = free & all & !pivots;
        for &(m, r) in &self.rows {
            let p = m.trailing_zeros();
            let rest = (m & !(1u128 << p) & a).count_ones() % 2 == 1;
            if rest != r {
                a |= 1 << p;
            }
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::TruthTable;

    fn con(vars: &[u32], bits: &str) -> Con {
        Con::new(
            vars.to_vec(),
            TruthTable::from_bit_str(vars.len(), bits).unwrap(),
        )
    }

    #[test]
    fn xor_chain_is_solved_linearly() {
        // x0^x1=1, x1^x2=1, so x0==x2
        let c = Compiled {
            n: 3,
            cons: vec![con(&[0, 1], "0110"), con(&[1, 2], "0110")],
        };
        let mut e = Engine::new(c, 1);
        assert!(e.gf2.is_some());
        assert!(e.implies(&[0, 2], &TruthTable::from_bit_str(2, "1001").unwrap()));
        assert!(!e.implies(&[0, 2], &TruthTable::from_bit_str(2, "0110").unwrap()));
        for &m in e.pool() {
            assert_eq!(m & 1, (m >> 2) & 1);
        }
    }

    #[test]
    fn contradiction_detected() {
        let c = Compiled {
            n: 2,
            cons: vec![con(&[0], "01"), con(&[0, 1], "0111"), con(&[0], "10")],
        };
        assert!(!Engine::new(c, 0).is_sat());
    }

    #[test]
    fn search_finds_models_of_one_in_three_chain() {
        let one = "01101000";
        let c = Compiled {
            n: 5,
            cons: vec![
                con(&[0, 1, 2], one),
                con(&[2, 3, 4], one),
                con(&[0, 4], "0111"),
            ],
        };
        let mut e = Engine::new(c.clone(), 3);
        assert!(e.is_sat());
        for &m in e.pool() {
            assert!(c.eval(m));
        }
        // x2 -> !x0 & !x4, contradicting x0 v x4
        assert!(e.implies(&[2], &TruthTable::from_bit_str(1, "10").unwrap()));
    }
}

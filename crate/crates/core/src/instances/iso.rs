//! Isomorphism search.
//!
//! [`brute_force_iso`] matches model sets directly and is limited to tiny
//! universes. [`guided_iso`] works on maximal closures: if `pi(S)` is
//! equivalent to `U` then `pi` maps the closure of `S` onto the closure of
//! `U` application by application, so the search only needs to consider
//! permutations that preserve a hypergraph. Candidates are verified for
//! equivalence unless both inputs are already contained in their closures.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::closure::{closure_apps, key_indices, ClosureFlags};
use super::semantics::{Compiled, Con};
use super::{canonicalize, Engine, InstanceSet, Permutation};
use crate::boolfun::{ConstraintSet, TruthTable};
use crate::{Error, Limits, Result};

fn same_universe(s: &InstanceSet, u: &InstanceSet) -> Result<()> {
    if s.universe() != u.universe() {
        Err(Error::UniverseMismatch)
    } else {
        Ok(())
    }
}

/// Lexicographically first `pi` with `pi(s)` equivalent to `u`, by search
/// over permutations of the model sets.
pub fn brute_force_iso(
    s: &InstanceSet,
    u: &InstanceSet,
    limits: &Limits,
) -> Result<Option<Permutation>> {
    same_universe(s, u)?;
    let n = s.universe().len();
    Limits::check(
        "permutation search universe",
        n,
        limits.max_perm_vars.min(limits.max_vars),
    )?;
    let ms = model_list(s);
    let mu = model_list(u);
    if ms.len() != mu.len() {
        return Ok(None);
    }
    let ones = |m: &[u128], i: usize| m.iter().filter(|&&a| (a >> i) & 1 == 1).count();
    let cnt_s: Vec<usize> = (0..n).map(|i| ones(&ms, i)).collect();
    let cnt_u: Vec<usize> = (0..n).map(|j| ones(&mu, j)).collect();
    let mut st = Brute {
        ms: &ms,
        mu: &mu,
        cnt_s,
        cnt_u,
        img: vec![usize::MAX; n],
        used: vec![false; n],
        ks: vec![0; ms.len()],
        ku: vec![0; mu.len()],
    };
    Ok(st
        .search(0)
        .then(|| Permutation::from_indices(s.universe(), &st.img)))
}

fn model_list(s: &InstanceSet) -> Vec<u128> {
    let mut out = Vec::new();
    Compiled::new(s).for_each_model(|a| {
        out.push(a);
        true
    });
    out
}

struct Brute<'a> {
    ms: &'a [u128],
    mu: &'a [u128],
    cnt_s: Vec<usize>,
    cnt_u: Vec<usize>,
    img: Vec<usize>,
    used: Vec<bool>,
    // projections of each model onto the variables assigned so far
    ks: Vec<u128>,
    ku: Vec<u128>,
}

impl Brute<'_> {
    fn search(&mut self, i: usize) -> bool {
        let n = self.img.len();
        if i == n {
            return true;
        }
        for j in 0..n {
            if self.used[j] || self.cnt_s[i] != self.cnt_u[j] {
                continue;
            }
            let (ks, ku) = (self.ks.clone(), self.ku.clone());
            for (k, &m) in self.ks.iter_mut().zip(self.ms) {
                *k |= ((m >> i) & 1) << i;
            }
            for (k, &m) in self.ku.iter_mut().zip(self.mu) {
                *k |= ((m >> j) & 1) << i;
            }
            let mut a = self.ks.clone();
            let mut b = self.ku.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a == b {
                self.img[i] = j;
                self.used[j] = true;
                if self.search(i + 1) {
                    return true;
                }
                self.used[j] = false;
            }
            self.ks = ks;
            self.ku = ku;
        }
        false
    }
}

/// Closure-guided search over the constraints occurring in either input.
pub fn guided_iso(
    s: &InstanceSet,
    u: &InstanceSet,
    limits: &Limits,
) -> Result<Option<Permutation>> {
    let mut basis = ConstraintSet::new();
    let mut tables = HashSet::new();
    for a in s.apps().iter().chain(u.apps()) {
        let c = a.constraint();
        if tables.insert(c.table().clone()) {
            let name = if basis.get(c.name()).is_some() {
                format!("{}#{}", c.name(), basis.len())
            } else {
                c.name().to_string()
            };
            basis.insert(c.renamed(name)?)?;
        }
    }
    guided_iso_with(s, u, &basis, limits)
}

/// Lexicographically first `pi` with `pi(s)` equivalent to `u`, searching
/// over maps between the closures of `s` and `u` under `basis`.
pub fn guided_iso_with(
    s: &InstanceSet,
    u: &InstanceSet,
    basis: &ConstraintSet,
    limits: &Limits,
) -> Result<Option<Permutation>> {
    same_universe(s, u)?;
    let universe = s.universe();
    let n = universe.len();
    Limits::check(
        "guided search universe",
        n,
        limits.max_closure_vars.min(128),
    )?;
    let mut es = Engine::new(Compiled::new(s), 0);
    let mut eu = Engine::new(Compiled::new(u), 0);
    match (es.is_sat(), eu.is_sat()) {
        (false, false) => return Ok(Some(Permutation::identity(universe))),
        (true, true) => {}
        _ => return Ok(None),
    }
    let ms = closure_apps(basis, universe, ClosureFlags::PLAIN, &mut es, limits)?;
    let mu = closure_apps(basis, universe, ClosureFlags::PLAIN, &mut eu, limits)?;
    if ms.len() != mu.len() {
        return Ok(None);
    }
    let edges = |apps: &[super::Application]| -> Vec<Con> {
        apps.iter()
            .map(|a| Con::new(key_indices(universe, a.key()), a.key().table().clone()))
            .collect()
    };
    let hs = Hyper::new(n, edges(&ms));
    let hu = Hyper::new(n, edges(&mu));
    let contained = |x: &InstanceSet, m: &[super::Application]| {
        let keys: HashSet<_> = m.iter().map(|a| a.key()).collect();
        x.apps().iter().all(|a| keys.contains(a.key()))
    };
    let verify = !(contained(s, &ms) && contained(u, &mu));

    let mut roles = Roles::default();
    let mut search = Guided {
        hs: &hs,
        hu: &hu,
        target: hu
            .edges
            .iter()
            .map(|e| (e.vars.clone(), e.table.clone()))
            .collect(),
        img: vec![u32::MAX; n],
        inv: vec![u32::MAX; n],
        roles: &mut roles,
        accept: &mut |img: &[u32]| {
            if !verify {
                return true;
            }
            let p = Permutation::from_indices(
                universe,
                &img.iter().map(|&j| j as usize).collect::<Vec<_>>(),
            );
            let ps = s
                .apply_permutation(&p)
                .expect("permutation of the universe");
            let mut ep = Engine::new(Compiled::new(&ps), 0);
            let cu = Compiled::new(u);
            let cp = Compiled::new(&ps);
            cp.cons.iter().all(|c| eu.implies(&c.vars, &c.table))
                && cu.cons.iter().all(|c| ep.implies(&c.vars, &c.table))
        },
    };
    let cs0 = vec![0u32; n];
    let found = search.run(cs0.clone(), cs0);
    Ok(found.map(|img| {
        Permutation::from_indices(
            universe,
            &img.iter().map(|&j| j as usize).collect::<Vec<_>>(),
        )
    }))
}

/// Closure applications as a hypergraph on variable indices.
struct Hyper {
    edges: Vec<Con>,
    incident: Vec<Vec<u32>>,
}

impl Hyper {
    fn new(n: usize, edges: Vec<Con>) -> Self {
        let mut incident = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for &x in &e.vars {
                incident[x as usize].push(i as u32);
            }
        }
        Hyper { edges, incident }
    }
}

/// Permutation-invariant descriptions of functions and argument positions.
#[derive(Default)]
struct Roles {
    cache: HashMap<TruthTable, (u32, Vec<u32>)>,
    ids: HashMap<(TruthTable, usize, TruthTable, TruthTable), u32>,
    types: HashMap<TruthTable, u32>,
}

fn canon(t: &TruthTable) -> TruthTable {
    let k = t.arity();
    let mut best: Option<TruthTable> = None;
    permutations(k, &mut |order| {
        let r = t.reorder(order);
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    });
    best.unwrap_or_else(|| t.clone())
}

fn permutations(k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(p: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
        if p.len() == used.len() {
            f(p);
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                p.push(i);
                rec(p, used, f);
                p.pop();
                used[i] = false;
            }
        }
    }
    rec(&mut Vec::new(), &mut vec![false; k], f);
}

impl Roles {
    /// Type id of a table and a role id for each of its positions.
    fn of(&mut self, t: &TruthTable) -> (u32, Vec<u32>) {
        if let Some(r) = self.cache.get(t) {
            return r.clone();
        }
        let c = canon(t);
        let next = self.types.len() as u32;
        let ty = *self.types.entry(c.clone()).or_insert(next);
        let k = t.arity();
        let roles = (0..k)
            .map(|p| {
                let bit = t.position_bit(p);
                let ones = t.models().filter(|r| r & bit != 0).count();
                let cof = |val: bool| {
                    let others: Vec<usize> = (0..k).filter(|&q| q != p).collect();
                    let sub = TruthTable::from_fn(k - 1, |row| {
                        let mut full = if val { bit } else { 0 };
                        for (j, &q) in others.iter().enumerate() {
                            if row & (1 << (k - 2 - j)) != 0 {
                                full |= t.position_bit(q);
                            }
                        }
                        t.get(full)
                    });
                    canon(&sub)
                };
                let key = (c.clone(), ones, cof(false), cof(true));
                let next = self.ids.len() as u32;
                *self.ids.entry(key).or_insert(next)
            })
            .collect();
        let r = (ty, roles);
        self.cache.insert(t.clone(), r.clone());
        r
    }
}

type Sig = (u32, Vec<(u32, u32, Vec<(u32, u32)>)>);

struct Guided<'a, F: FnMut(&[u32]) -> bool> {
    hs: &'a Hyper,
    hu: &'a Hyper,
    target: HashSet<(Vec<u32>, TruthTable)>,
    img: Vec<u32>,
    inv: Vec<u32>,
    roles: &'a mut Roles,
    accept: &'a mut F,
}

impl<F: FnMut(&[u32]) -> bool> Guided<'_, F> {
    fn signature(&mut self, h: &Hyper, colors: &[u32], x: usize) -> Sig {
        let mut parts = Vec::with_capacity(h.incident[x].len());
        for &ei in &h.incident[x] {
            let e = &h.edges[ei as usize];
            let (ty, roles) = self.roles.of(&e.table);
            let mut me = 0;
            let mut others = Vec::with_capacity(e.vars.len());
            for (p, &y) in e.vars.iter().enumerate() {
                if y as usize == x {
                    me = roles[p];
                } else {
                    others.push((roles[p], colors[y as usize]));
                }
            }
            others.sort_unstable();
            parts.push((ty, me, others));
        }
        parts.sort_unstable();
        (colors[x], parts)
    }

    /// Refines both colorings jointly; false if their histograms diverge.
    fn refine(&mut self, cs: &mut Vec<u32>, cu: &mut Vec<u32>) -> bool {
        let n = cs.len();
        let mut classes = distinct(cs);
        loop {
            let ss: Vec<Sig> = (0..n).map(|x| self.signature(self.hs, cs, x)).collect();
            let su: Vec<Sig> = (0..n).map(|x| self.signature(self.hu, cu, x)).collect();
            let mut ids: BTreeMap<&Sig, u32> = BTreeMap::new();
            for sg in ss.iter().chain(&su) {
                ids.insert(sg, 0);
            }
            for (i, v) in ids.values_mut().enumerate() {
                *v = i as u32;
            }
            let ns: Vec<u32> = ss.iter().map(|s| ids[s]).collect();
            let nu: Vec<u32> = su.iter().map(|s| ids[s]).collect();
            if histogram(&ns) != histogram(&nu) {
                return false;
            }
            *cs = ns;
            *cu = nu;
            let c = distinct(cs);
            if c == classes {
                return true;
            }
            classes = c;
        }
    }

    /// Every closure edge of `s` inside the assigned part maps to a closure
    /// edge of `u`.
    fn consistent(&self, x: usize) -> bool {
        self.hs.incident[x].iter().all(|&ei| {
            let e = &self.hs.edges[ei as usize];
            if e.vars.iter().any(|&y| self.img[y as usize] == u32::MAX) {
                return true;
            }
            let mapped: Vec<u32> = e.vars.iter().map(|&y| self.img[y as usize]).collect();
            let (vars, table) = canonicalize(&e.table, &mapped, |&y| Ok::<u32, bool>(y));
            self.target.contains(&(vars, table))
        })
    }

    fn run(&mut self, mut cs: Vec<u32>, mut cu: Vec<u32>) -> Option<Vec<u32>> {
        if !self.refine(&mut cs, &mut cu) {
            return None;
        }
        self.dfs(0, cs, cu)
    }

    fn dfs(&mut self, i: usize, cs: Vec<u32>, cu: Vec<u32>) -> Option<Vec<u32>> {
        let n = cs.len();
        if i == n {
            let img = self.img.clone();
            return (self.accept)(&img).then_some(img);
        }
        let col = cs[i];
        let candidates: Vec<usize> = (0..n)
            .filter(|&y| cu[y] == col && self.inv[y] == u32::MAX)
            .collect();
        let singleton = cs.iter().filter(|&&c| c == col).count() == 1;
        let fresh = n as u32 + i as u32 + 1;
        for y in candidates {
            self.img[i] = y as u32;
            self.inv[y] = i as u32;
            if self.consistent(i) {
                let found = if singleton {
                    self.dfs(i + 1, cs.clone(), cu.clone())
                } else {
                    let (mut cs2, mut cu2) = (cs.clone(), cu.clone());
                    cs2[i] = fresh;
                    cu2[y] = fresh;
                    if self.refine(&mut cs2, &mut cu2) {
                        self.dfs(i + 1, cs2, cu2)
                    } else {
                        None
                    }
                };
                if found.is_some() {
                    return found;
                }
            }
            self.img[i] = u32::MAX;
            self.inv[y] = u32::MAX;
        }
        None
    }
}

fn distinct(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn histogram(c: &[u32]) -> Vec<(u32, usize)> {
    let mut m: BTreeMap<u32, usize> = BTreeMap::new();
    for &x in c {
        *m.entry(x).or_default() += 1;
    }
    m.into_iter().collect()
}

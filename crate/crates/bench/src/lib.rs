//! Workload generators for the benchmarks.

use std::sync::Arc;

use cspiso_core::gi::Graph;
use cspiso_core::instances::{Application, Arg, InstanceSet};
use cspiso_core::{builtin, v, Constraint, Var};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vars(n: usize) -> Vec<Var> {
    (1..=n).map(|i| v(&format!("x{i}"))).collect()
}

/// `m` random unary and parity clauses over `n` variables.
pub fn random_2affine(rng: &mut ChaCha8Rng, n: usize, m: usize) -> InstanceSet {
    let xs = vars(n);
    let cs: Vec<Arc<Constraint>> = ["id", "neg", "xor2", "xnor2"]
        .iter()
        .map(|c| Arc::new(builtin(c).expect("builtin")))
        .collect();
    let mut s = InstanceSet::new(xs.clone());
    for _ in 0..m {
        let c = cs.choose(rng).expect("non-empty");
        let args = (0..c.arity())
            .map(|_| Arg::Var(xs[rng.gen_range(0..n)].clone()))
            .collect();
        s.insert(Application::new(c.clone(), args).expect("arity"))
            .expect("known variables");
    }
    s
}

/// The same instance with its variables shuffled.
pub fn shuffled(rng: &mut ChaCha8Rng, s: &InstanceSet) -> InstanceSet {
    let mut img = s.universe().to_vec();
    img.shuffle(rng);
    let map: std::collections::HashMap<Var, Var> = s.universe().iter().cloned().zip(img).collect();
    s.rename(|x| map[x].clone())
}

/// A random triangle-free graph of minimum degree two: the subdivision of
/// a random graph on `n >= 3` vertices containing the cycle `1..=n`, plus
/// an apex.
pub fn random_hard_graph(rng: &mut ChaCha8Rng, n: u32, p: f64) -> Graph {
    let mut edges: Vec<(u32, u32)> = (1..=n).map(|i| (i, n + 1)).collect();
    for a in 1..=n {
        for b in a + 1..=n {
            let on_cycle = b == a + 1 || (a == 1 && b == n);
            if on_cycle || rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let base = n + 1;
    let sub = edges
        .iter()
        .enumerate()
        .flat_map(|(k, &(a, b))| [(a, base + k as u32 + 1), (b, base + k as u32 + 1)]);
    Graph::new(base + edges.len() as u32, sub).expect("simple")
}

/// `g` with vertices shuffled.
pub fn relabelled(rng: &mut ChaCha8Rng, g: &Graph) -> Graph {
    let mut img: Vec<u32> = (1..=g.n()).collect();
    img.shuffle(rng);
    g.relabel(&img).expect("bijection")
}

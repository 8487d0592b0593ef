use std::fmt;

use serde::Serialize;

use crate::{Error, Limits, Result};

/// A simple undirected graph on vertices `1..=n`.
///
/// Edges are stored as `(i, j)` with `i < j`, sorted lexicographically; this
/// order is the edge enumeration `e1, .., em` used by the encoders.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Graph {
    n: u32,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut es = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidGraph(format!(
                    "edge {{{a},{b}}} outside 1..={n}"
                )));
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        if let Some(w) = es.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {{{},{}}}",
                w[0].0, w[0].1
            )));
        }
        Ok(Graph { n, edges: es })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Degrees indexed by vertex, index 0 unused.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n as usize + 1];
        for &(a, b) in &self.edges {
            d[a as usize] += 1;
            d[b as usize] += 1;
        }
        d
    }

    pub fn isolated(&self) -> Vec<u32> {
        let d = self.degrees();
        (1..=self.n).filter(|&v| d[v as usize] == 0).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().skip(1).min().unwrap_or(0)
    }

    pub fn is_triangle_free(&self) -> bool {
        let adj = self.adjacency();
        self.edges.iter().all(|&(a, b)| {
            !(1..=self.n).any(|c| adj[a as usize][c as usize] && adj[b as usize][c as usize])
        })
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.n as usize;
        let mut adj = vec![vec![false; n + 1]; n + 1];
        for &(a, b) in &self.edges {
            adj[a as usize][b as usize] = true;
            adj[b as usize][a as usize] = true;
        }
        adj
    }

    /// The graph with vertex `v` renamed to `img[v - 1]`.
    pub fn relabel(&self, img: &[u32]) -> Result<Graph> {
        Graph::new(
            self.n,
            self.edges
                .iter()
                .map(|&(a, b)| (img[a as usize - 1], img[b as usize - 1])),
        )
    }

    /// Error naming the first isolated vertex, if any.
    pub fn require_no_isolated(&self) -> Result<()> {
        match self.isolated().first() {
            Some(&v) => Err(Error::IsolatedVertex(v)),
            None => Ok(()),
        }
    }

    pub fn path(n: u32) -> Graph {
        Graph::new(n, (1..n).map(|i| (i, i + 1))).expect("valid path")
    }

    pub fn cycle(n: u32) -> Graph {
        Graph::new(n, (1..=n).map(|i| (i, i % n + 1))).expect("valid cycle")
    }

    pub fn complete(n: u32) -> Graph {
        Graph::new(n, (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)))).expect("valid")
    }

    /// Star with centre 1 and `leaves` leaves.
    pub fn star(leaves: u32) -> Graph {
        Graph::new(leaves + 1, (2..=leaves + 1).map(|j| (1, j))).expect("valid star")
    }

    pub fn complete_bipartite(a: u32, b: u32) -> Graph {
        Graph::new(
            a + b,
            (1..=a).flat_map(|i| (a + 1..=a + b).map(move |j| (i, j))),
        )
        .expect("valid")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(n={}; ", self.n)?;
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        f.write_str(")")
    }
}

/// Lexicographically first vertex bijection `pi` (as `pi[v - 1]`) with
/// `{v, w}` an edge of `g` iff `{pi(v), pi(w)}` is an edge of `h`.
pub fn brute_force_graph_iso(g: &Graph, h: &Graph, limits: &Limits) -> Result<Option<Vec<u32>>> {
    Limits::check(
        "graph isomorphism vertices",
        g.n.max(h.n) as usize,
        limits.max_graph_vertices,
    )?;
    if g.n != h.n || g.m() != h.m() {
        return Ok(None);
    }
    let (dg, dh) = (g.degrees(), h.degrees());
    let (mut sg, mut sh) = (dg.clone(), dh.clone());
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return Ok(None);
    }
    let (ag, ah) = (g.adjacency(), h.adjacency());
    let n = g.n as usize;
    let mut img = vec![0usize; n + 1];
    let mut used = vec![false; n + 1];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        v: usize,
        n: usize,
        dg: &[usize],
        dh: &[usize],
        ag: &[Vec<bool>],
        ah: &[Vec<bool>],
        img: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if v > n {
            return true;
        }
        for w in 1..=n {
            if used[w] || dg[v] != dh[w] {
                continue;
            }
            if (1..v).any(|u| ag[v][u] != ah[w][img[u]]) {
                continue;
            }
            img[v] = w;
            used[w] = true;
            if rec(v + 1, n, dg, dh, ag, ah, img, used) {
                return true;
            }
            used[w] = false;
        }
        false
    }
    Ok(rec(1, n, &dg, &dh, &ag, &ah, &mut img, &mut used)
        .then(|| img[1..].iter().map(|&w| w as u32).collect()))
}

/// Why a pair was rejected before any construction.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    VertexCount,
    EdgeCount,
    IsolatedCount,
}

/// Sizes after each preprocessing step.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PreprocessStats {
    pub n: u32,
    pub m: usize,
    pub isolated: usize,
    pub n_without_isolated: u32,
    pub n_with_apex: u32,
    pub m_with_apex: usize,
    pub n_subdivided: u32,
    pub m_subdivided: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Preprocessed {
    NotIsomorphic(Rejection),
    Pair {
        g: Graph,
        h: Graph,
        stats: PreprocessStats,
    },
}

fn drop_isolated(g: &Graph) -> Graph {
    let deg = g.degrees();
    let mut new_id = vec![0u32; g.n as usize + 1];
    let mut next = 0;
    for v in 1..=g.n {
        if deg[v as usize] > 0 {
            next += 1;
            new_id[v as usize] = next;
        }
    }
    Graph::new(
        next,
        g.edges
            .iter()
            .map(|&(a, b)| (new_id[a as usize], new_id[b as usize])),
    )
    .expect("relabelling keeps the graph simple")
}

fn add_apex(g: &Graph) -> Graph {
    let apex = g.n + 1;
    Graph::new(
        apex,
        g.edges.iter().copied().chain((1..=g.n).map(|v| (v, apex))),
    )
    .expect("apex edges are new")
}

/// Vertex `n + k` stands for edge `e_k` and is joined to its endpoints.
fn subdivide(g: &Graph) -> Graph {
    let base = g.n;
    Graph::new(
        base + g.m() as u32,
        g.edges.iter().enumerate().flat_map(|(k, &(a, b))| {
            let e = base + k as u32 + 1;
            [(a, e), (b, e)]
        }),
    )
    .expect("incidence graph is simple")
}

/// Turns a pair into triangle-free graphs of minimum degree two with the
/// same vertex and edge counts, preserving (non-)isomorphism.
pub fn preprocess_pair(g: &Graph, h: &Graph) -> Result<Preprocessed> {
    if g.n != h.n {
        return Ok(Preprocessed::NotIsomorphic(Rejection::VertexCount));
    }
    if g.m() != h.m() {
        return Ok(Preprocessed::NotIsomorphic(Rejection::EdgeCount));
    }
    let isolated = g.isolated().len();
    if isolated != h.isolated().len() {
        return Ok(Preprocessed::NotIsomorphic(Rejection::IsolatedCount));
    }
    let (g1, h1) = (drop_isolated(g), drop_isolated(h));
    if g1.n < 3 {
        return Err(Error::TooFewVertices(g1.n as usize));
    }
    let (g2, h2) = (add_apex(&g1), add_apex(&h1));
    let (g3, h3) = (subdivide(&g2), subdivide(&h2));
    let stats = PreprocessStats {
        n: g.n,
        m: g.m(),
        isolated,
        n_without_isolated: g1.n,
        n_with_apex: g2.n,
        m_with_apex: g2.m(),
        n_subdivided: g3.n,
        m_subdivided: g3.m(),
    };
    Ok(Preprocessed::Pair {
        g: g3,
        h: h3,
        stats,
    })
}

/// A fixed non-isomorphic pair that survives preprocessing: the path and
/// the star on four vertices.
pub fn fixed_non_isomorphic_pair() -> (Graph, Graph) {
    (Graph::path(4), Graph::star(3))
}

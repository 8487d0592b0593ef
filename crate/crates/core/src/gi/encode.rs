//! Graph encodings as constraint instances.
//!
//! Vertex `i` becomes `x<i>` (and its copy `x<i>'`), edge `e_k` becomes
//! `y<k>` (and `y<k>'`).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use super::Graph;
use crate::boolfun::{builtin, builtin_set, Constraint, ConstraintSet};
use crate::instances::{Application, Arg, InstanceSet};
use crate::{Error, Result, Var};

pub(crate) fn xv(i: u32) -> Var {
    Var::new(format!("x{i}")).expect("valid name")
}

pub(crate) fn xp(i: u32) -> Var {
    Var::new(format!("x{i}'")).expect("valid name")
}

pub(crate) fn yv(k: usize) -> Var {
    Var::new(format!("y{k}")).expect("valid name")
}

pub(crate) fn yp(k: usize) -> Var {
    Var::new(format!("y{k}'")).expect("valid name")
}

/// Which variable families a graph encoding uses.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Families {
    pub primed_vertices: bool,
    pub edges: bool,
    pub primed_edges: bool,
}

pub(crate) fn graph_universe(g: &Graph, fam: Families) -> Vec<Var> {
    let mut u: Vec<Var> = (1..=g.n()).map(xv).collect();
    if fam.primed_vertices {
        u.extend((1..=g.n()).map(xp));
    }
    let m = g.m();
    if fam.edges {
        u.extend((1..=m).map(yv));
    }
    if fam.primed_edges {
        u.extend((1..=m).map(yp));
    }
    u
}

fn lib(name: &str) -> Arc<Constraint> {
    Arc::new(builtin(name).expect("built-in"))
}

fn app(c: &Arc<Constraint>, vars: &[Var]) -> Application {
    Application::new(c.clone(), vars.iter().cloned().map(Arg::Var).collect())
        .expect("encoder arity")
}

fn build(
    g: &Graph,
    fam: Families,
    per_edge: impl Fn(usize, u32, u32) -> Vec<Application>,
    pairs: Option<&Arc<Constraint>>,
) -> Result<InstanceSet> {
    g.require_no_isolated()?;
    let mut s = InstanceSet::new(graph_universe(g, fam));
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        for a in per_edge(k + 1, i, j) {
            s.insert(a)?;
        }
    }
    if let Some(x2) = pairs {
        for i in 1..=g.n() {
            s.insert(app(x2, &[xv(i), xp(i)]))?;
        }
        for k in 1..=g.m() {
            s.insert(app(x2, &[yv(k), yp(k)]))?;
        }
    }
    Ok(s)
}

const PLAIN: Families = Families {
    primed_vertices: false,
    edges: false,
    primed_edges: false,
};
const WITH_EDGES: Families = Families {
    primed_vertices: false,
    edges: true,
    primed_edges: false,
};
const PRIMED: Families = Families {
    primed_vertices: true,
    edges: false,
    primed_edges: false,
};
const FULL: Families = Families {
    primed_vertices: true,
    edges: true,
    primed_edges: true,
};

/// Variant 0: `x_i v x_j`; variant 2: `!x_i v !x_j`; variant 1:
/// `x_i v !y_k` and `x_j v !y_k` per edge `e_k = {i, j}`.
pub fn encode_or(variant: u8, g: &Graph) -> Result<InstanceSet> {
    match variant {
        0 | 2 => {
            let c = lib(if variant == 0 { "or0" } else { "or2" });
            build(g, PLAIN, |_, i, j| vec![app(&c, &[xv(i), xv(j)])], None)
        }
        1 => {
            // or1(a, b) is !a v b
            let c = lib("or1");
            build(
                g,
                WITH_EDGES,
                |k, i, j| vec![app(&c, &[yv(k), xv(i)]), app(&c, &[yv(k), xv(j)])],
                None,
            )
        }
        _ => Err(Error::InvalidGraph(format!(
            "no OR encoding variant {variant}"
        ))),
    }
}

/// `h(x_i, x_j, x_i', x_j')` per edge with `h = (x v y) & (x ^ x') & (y ^ y')`.
pub fn encode_h4(g: &Graph) -> Result<InstanceSet> {
    let h = lib("h4");
    build(
        g,
        PRIMED,
        |_, i, j| vec![app(&h, &[xv(i), xv(j), xp(i), xp(j)])],
        None,
    )
}

/// Six-place one-in-three form per edge plus `x ^ x'` for every vertex and
/// edge variable.
pub fn encode_oneinthree(g: &Graph) -> Result<InstanceSet> {
    let h = lib("h6-one-in-three");
    let x2 = lib("xor2");
    build(
        g,
        FULL,
        |k, i, j| vec![app(&h, &[xv(i), xv(j), yv(k), xp(i), xp(j), yp(k)])],
        Some(&x2),
    )
}

/// The equivalent form using `one-in-three(x_i, x_j, y_k)` directly.
pub fn encode_oneinthree_expanded(g: &Graph) -> Result<InstanceSet> {
    let c = lib("one-in-three");
    let x2 = lib("xor2");
    build(
        g,
        FULL,
        |k, i, j| vec![app(&c, &[xv(i), xv(j), yv(k)])],
        Some(&x2),
    )
}

/// Four three-place XOR applications per edge plus all `x ^ x'` pairs.
pub fn encode_xor3(g: &Graph) -> Result<InstanceSet> {
    let c = lib("xor3");
    let x2 = lib("xor2");
    build(
        g,
        FULL,
        |k, i, j| {
            vec![
                app(&c, &[xv(i), xv(j), yv(k)]),
                app(&c, &[xp(i), xp(j), yv(k)]),
                app(&c, &[xp(i), xv(j), yp(k)]),
                app(&c, &[xv(i), xp(j), yp(k)]),
            ]
        },
        Some(&x2),
    )
}

/// The equivalent six-place form `h(x_i, x_j, y_k, x_i', x_j', y_k')`.
pub fn encode_xor3_compact(g: &Graph) -> Result<InstanceSet> {
    let h = lib("h6-xor3");
    let x2 = lib("xor2");
    build(
        g,
        FULL,
        |k, i, j| vec![app(&h, &[xv(i), xv(j), yv(k), xp(i), xp(j), yp(k)])],
        Some(&x2),
    )
}

/// The six graph encodings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoder {
    Or0,
    Or1,
    Or2,
    H4,
    OneInThree,
    Xor3,
}

impl Encoder {
    pub const ALL: [Encoder; 6] = [
        Encoder::Or0,
        Encoder::Or1,
        Encoder::Or2,
        Encoder::H4,
        Encoder::OneInThree,
        Encoder::Xor3,
    ];

    pub fn encode(&self, g: &Graph) -> Result<InstanceSet> {
        match self {
            Encoder::Or0 => encode_or(0, g),
            Encoder::Or1 => encode_or(1, g),
            Encoder::Or2 => encode_or(2, g),
            Encoder::H4 => encode_h4(g),
            Encoder::OneInThree => encode_oneinthree(g),
            Encoder::Xor3 => encode_xor3(g),
        }
    }

    /// Small-arity constraints whose closures pin down the encoding, used to
    /// guide isomorphism search.
    pub fn basis(&self) -> ConstraintSet {
        let names: &[&str] = match self {
            Encoder::Or0 => &["or0"],
            Encoder::Or1 => &["or1"],
            Encoder::Or2 => &["or2"],
            Encoder::H4 => &["or0", "xor2"],
            Encoder::OneInThree => &["one-in-three", "xor2"],
            Encoder::Xor3 => &["xor2", "xor3"],
        };
        builtin_set(names).expect("built-ins")
    }
}

impl fmt::Display for Encoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoder::Or0 => "or0",
            Encoder::Or1 => "or1",
            Encoder::Or2 => "or2",
            Encoder::H4 => "h4",
            Encoder::OneInThree => "oneinthree",
            Encoder::Xor3 => "xor3",
        })
    }
}

impl FromStr for Encoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Encoder::ALL
            .into_iter()
            .find(|e| e.to_string() == s)
            .ok_or_else(|| Error::UnknownConstraint(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{equivalent_exact, testutil::inst};
    use crate::Limits;

    fn show(s: &InstanceSet) -> Vec<String> {
        s.apps().iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn or_variants() {
        let p3 = Graph::path(3);
        assert_eq!(
            show(&encode_or(0, &p3).unwrap()),
            ["or0(x1, x2)", "or0(x2, x3)"]
        );
        assert_eq!(
            show(&encode_or(2, &p3).unwrap()),
            ["or2(x1, x2)", "or2(x2, x3)"]
        );
        let e = Graph::new(2, [(1, 2)]).unwrap();
        let s = encode_or(1, &e).unwrap();
        assert_eq!(show(&s), ["or1(y1, x1)", "or1(y1, x2)"]);
        assert_eq!(
            s,
            inst(
                &["x1", "x2", "y1"],
                &[("or1", &["y1", "x1"]), ("or1", &["y1", "x2"])]
            )
        );
        assert!(matches!(
            encode_or(0, &Graph::new(3, [(1, 2)]).unwrap()),
            Err(Error::IsolatedVertex(3))
        ));
    }

    #[test]
    fn h4_encoding() {
        let e = Graph::new(2, [(1, 2)]).unwrap();
        assert_eq!(show(&encode_h4(&e).unwrap()), ["h4(x1, x2, x1', x2')"]);
        let s = encode_h4(&Graph::path(3)).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.universe().len(), 6);
        assert!(encode_h4(&Graph::new(0, []).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn oneinthree_encoding() {
        let e = Graph::new(2, [(1, 2)]).unwrap();
        let s = encode_oneinthree(&e).unwrap();
        assert_eq!(
            show(&s),
            [
                "h6-one-in-three(x1, x2, y1, x1', x2', y1')",
                "xor2(x1, x1')",
                "xor2(x2, x2')",
                "xor2(y1, y1')"
            ]
        );
        let u = encode_oneinthree_expanded(&e).unwrap();
        assert!(equivalent_exact(&s, &u, &Limits::default()).unwrap());
    }

    #[test]
    fn xor3_encoding() {
        let e = Graph::new(2, [(1, 2)]).unwrap();
        let s = encode_xor3(&e).unwrap();
        assert_eq!(
            show(&s)[..4],
            [
                "xor3(x1, x2, y1)",
                "xor3(x1', x2', y1)",
                "xor3(x1', x2, y1')",
                "xor3(x1, x2', y1')"
            ]
        );
        assert_eq!(s.len(), 7);
        let c = encode_xor3_compact(&e).unwrap();
        assert!(equivalent_exact(&s, &c, &Limits::default()).unwrap());
    }

    #[test]
    fn encoder_names_round_trip() {
        for e in Encoder::ALL {
            assert_eq!(e.to_string().parse::<Encoder>().unwrap(), e);
        }
    }
}

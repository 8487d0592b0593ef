//! Line-oriented text formats for constraints, instances and graphs.
//!
//! Blank lines and lines starting with `#` (or `c` in graph files) are
//! ignored everywhere.
//!
//! ```text
//! # constraints: name arity bits, or a builtin by name
//! or0 2 0111
//! builtin xor3
//!
//! # instances
//! vars x y z
//! apply or0 x y
//! apply xor3 x y z
//!
//! # graphs
//! p 3 2
//! e 1 2
//! e 2 3
//! ```

use std::fmt::Write;
use std::sync::Arc;

use crate::boolfun::{builtin, Constraint, ConstraintSet};
use crate::gi::Graph;
use crate::instances::{Application, Arg, InstanceSet};
use crate::{Error, Result, Var};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Attaches a line number to errors that lack one.
fn at(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => parse_err(line, other.to_string()),
    }
}

fn content_lines<'a>(
    text: &'a str,
    comment: &'a [&'a str],
) -> impl Iterator<Item = (usize, Vec<&'a str>)> + 'a {
    text.lines().enumerate().filter_map(move |(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.first() {
            None => None,
            Some(t) if t.starts_with('#') || comment.contains(t) => None,
            Some(_) => Some((i + 1, toks)),
        }
    })
}

pub fn parse_constraints(text: &str) -> Result<ConstraintSet> {
    let mut cs = ConstraintSet::new();
    for (line, toks) in content_lines(text, &[]) {
        let c = match toks.as_slice() {
            ["builtin", name] => builtin(name).map_err(at(line))?,
            [name, arity, bits] => {
                let arity: usize = arity
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad arity `{arity}`")))?;
                if !bits.chars().all(|c| c == '0' || c == '1') {
                    return Err(parse_err(line, format!("bad bits `{bits}`")));
                }
                Constraint::from_bits(*name, arity, bits).map_err(at(line))?
            }
            _ => return Err(parse_err(line, "expected `name arity bits`")),
        };
        cs.insert(c).map_err(at(line))?;
    }
    Ok(cs)
}

pub fn print_constraints(cs: &ConstraintSet) -> String {
    let mut out = String::new();
    for c in cs {
        writeln!(
            out,
            "{} {} {}",
            c.name(),
            c.arity(),
            c.table().to_bit_string()
        )
        .unwrap();
    }
    out
}

/// Parses an instance over `cs`. Constants `0` and `1` are accepted only
/// with `allow_constants`.
pub fn parse_instance(
    text: &str,
    cs: &ConstraintSet,
    allow_constants: bool,
) -> Result<InstanceSet> {
    let mut declared: Option<Vec<Var>> = None;
    let mut apps: Vec<(usize, Application)> = Vec::new();
    for (line, toks) in content_lines(text, &[]) {
        match toks[0] {
            "vars" => {
                if declared.is_some() {
                    return Err(parse_err(line, "second `vars` line"));
                }
                let vars = toks[1..]
                    .iter()
                    .map(|t| Var::new(t).map_err(at(line)))
                    .collect::<Result<Vec<_>>>()?;
                declared = Some(vars);
            }
            "apply" => {
                if declared.is_none() {
                    return Err(parse_err(line, "`apply` before `vars`"));
                }
                let name = toks
                    .get(1)
                    .ok_or_else(|| parse_err(line, "missing constraint name"))?;
                let c: Arc<Constraint> = cs
                    .get(name)
                    .ok_or_else(|| parse_err(line, format!("unknown constraint `{name}`")))?
                    .clone();
                let args = toks[2..]
                    .iter()
                    .map(|t| match *t {
                        "0" | "1" if !allow_constants => {
                            Err(parse_err(line, "constants are not allowed"))
                        }
                        "0" => Ok(Arg::Const(false)),
                        "1" => Ok(Arg::Const(true)),
                        _ => Var::new(t).map(Arg::Var).map_err(at(line)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                apps.push((line, Application::new(c, args).map_err(at(line))?));
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        }
    }
    let mut universe = declared.ok_or_else(|| parse_err(0, "missing `vars` line"))?;
    for (_, a) in &apps {
        universe.extend(a.arg_vars().cloned());
    }
    let mut s = InstanceSet::new(universe);
    for (line, a) in apps {
        s.insert(a).map_err(at(line))?;
    }
    Ok(s)
}

pub fn print_instance(s: &InstanceSet) -> String {
    let mut out = String::from("vars");
    for x in s.universe() {
        write!(out, " {x}").unwrap();
    }
    out.push('\n');
    for a in s.apps() {
        write!(out, "apply {}", a.constraint().name()).unwrap();
        for arg in a.args() {
            write!(out, " {arg}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn number<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a number, got `{tok}`")))
}

/// Parses `p [edge] n m` followed by `m` lines `e i j`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, u32, usize)> = None;
    let mut edges = Vec::new();
    for (line, toks) in content_lines(text, &["c"]) {
        match toks.as_slice() {
            ["p", rest @ ..] => {
                if header.is_some() {
                    return Err(parse_err(line, "second `p` line"));
                }
                let (n, m) = match rest {
                    ["edge", n, m] | [n, m] => (*n, *m),
                    _ => return Err(parse_err(line, "expected `p n m`")),
                };
                header = Some((line, number(line, n)?, number(line, m)?));
            }
            ["e", a, b] => {
                if header.is_none() {
                    return Err(parse_err(line, "edge before `p` line"));
                }
                edges.push((line, number::<u32>(line, a)?, number::<u32>(line, b)?));
            }
            _ => return Err(parse_err(line, "expected `p n m` or `e i j`")),
        }
    }
    let (line, n, m) = header.ok_or_else(|| parse_err(0, "missing `p` line"))?;
    if edges.len() != m {
        return Err(parse_err(
            line,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    let last = edges.last().map_or(line, |e| e.0);
    Graph::new(n, edges.into_iter().map(|(_, a, b)| (a, b))).map_err(at(last))
}

pub fn print_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.m());
    for (a, b) in g.edges() {
        writeln!(out, "e {a} {b}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::boolfun::TruthTable;
    use crate::builtin_set;
    use crate::instances::tests_support::random_instance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constraint_examples() {
        let cs = parse_constraints("or0 2 0111\nxor2 2 0110\n# note\n\nbuiltin xor3\n").unwrap();
        assert_eq!(cs.len(), 3);
        assert_eq!(
            cs.get("or0").unwrap().table(),
            builtin("or0").unwrap().table()
        );
        assert_eq!(
            cs.get("xor3").unwrap().table(),
            builtin("xor3").unwrap().table()
        );
        assert!(matches!(
            parse_constraints("bad 2 01"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_constraints("a 2 0111\na 2 0110").is_err());
        assert!(parse_constraints("a 2 01x1").is_err());
        assert!(parse_constraints("builtin nope").is_err());
    }

    #[test]
    fn instance_examples() {
        let cs = builtin_set(&["or0"]).unwrap();
        let s = parse_instance("vars x y\napply or0 x y\n", &cs, false).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.universe().len(), 2);
        assert!(parse_instance("vars x\napply or0 x 1\n", &cs, false).is_err());
        let s = parse_instance("vars x\napply or0 x 1\n", &cs, true).unwrap();
        assert!(s.has_constants());
        assert!(matches!(
            parse_instance("vars x\napply or0 x\n", &cs, false),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_instance("vars x\napply nope x x\n", &cs, false).is_err());
        assert!(parse_instance("apply or0 x y\n", &cs, false).is_err());
        // occurring variables join the universe
        let s = parse_instance("vars\napply or0 a b\n", &cs, false).unwrap();
        assert_eq!(s.universe().len(), 2);
    }

    #[test]
    fn graph_examples() {
        let g = parse_graph("c path\np 3 2\ne 1 2\ne 3 2\n").unwrap();
        assert_eq!(g.edges(), &[(1, 2), (2, 3)]);
        assert_eq!(parse_graph("p edge 3 2\ne 1 2\ne 2 3\n").unwrap(), g);
        assert!(parse_graph("p 3 2\ne 1 2\n").is_err());
        assert!(parse_graph("p 3 1\ne 1 4\n").is_err());
        assert!(parse_graph("e 1 2\n").is_err());
    }

    proptest! {
        #[test]
        fn constraints_round_trip(codes in prop::collection::vec((1usize..=4, any::<u64>()), 1..6)) {
            let mut cs = ConstraintSet::new();
            for (i, (arity, code)) in codes.into_iter().enumerate() {
                let t = TruthTable::from_fn(arity, |r| code >> r & 1 == 1);
                cs.insert(Constraint::new(format!("c{i}"), t).unwrap()).unwrap();
            }
            let back = parse_constraints(&print_constraints(&cs)).unwrap();
            prop_assert_eq!(back.len(), cs.len());
            for (a, b) in back.iter().zip(cs.iter()) {
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn instances_round_trip(seed in any::<u64>(), n in 1usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_instance(&mut rng, n, 8);
            let text = print_instance(&s);
            let back = parse_instance(&text, &s.constraints(), true).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(print_instance(&back), text);
        }

        #[test]
        fn graphs_round_trip(n in 1u32..9, mask in any::<u64>()) {
            let pairs: Vec<(u32, u32)> =
                (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
            let g = Graph::new(n, pairs.iter().enumerate()
                .filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, &e)| e)).unwrap();
            let text = print_graph(&g);
            prop_assert_eq!(parse_graph(&text).unwrap(), g);
        }
    }
}

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::semantics::{index_vars, Compiled};
use super::{canonicalize, Application, Arg, BoolFn, Engine, InstanceSet};
use crate::boolfun::{Constraint, ConstraintSet, TruthTable};
use crate::{Error, Limits, Result, Var};

/// Which applications a closure ranges over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosureFlags {
    /// Arguments may be the constants 0 and 1.
    pub with_constants: bool,
    /// Arguments must be pairwise-distinct variables.
    pub without_duplicates: bool,
}

impl ClosureFlags {
    pub const PLAIN: ClosureFlags = ClosureFlags {
        with_constants: false,
        without_duplicates: false,
    };
    pub const CONSTANTS: ClosureFlags = ClosureFlags {
        with_constants: true,
        without_duplicates: false,
    };
    pub const DISTINCT: ClosureFlags = ClosureFlags {
        with_constants: false,
        without_duplicates: true,
    };

    fn validate(&self) -> Result<()> {
        if self.with_constants && self.without_duplicates {
            return Err(Error::InvalidFlags(
                "applications without duplicates admit no constants",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum IArg {
    Var(u32),
    Const(bool),
}

fn split(a: &IArg) -> std::result::Result<u32, bool> {
    match *a {
        IArg::Var(x) => Ok(x),
        IArg::Const(b) => Err(b),
    }
}

fn is_totally_symmetric(t: &TruthTable) -> bool {
    let k = t.arity();
    (0..k.saturating_sub(1)).all(|p| {
        let mut order: Vec<usize> = (0..k).collect();
        order.swap(p, p + 1);
        t.reorder(&order) == *t
    })
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of argument tuples the closure visits for one constraint.
fn tuple_count(d: usize, k: usize, symmetric: bool, distinct: bool) -> u128 {
    let (d, k) = (d as u128, k as u128);
    match (symmetric, distinct) {
        (true, true) => {
            if k > d {
                0
            } else {
                binom(d, k)
            }
        }
        (true, false) => binom(d + k - 1, k),
        (false, true) => (0..k).fold(1u128, |acc, i| acc.saturating_mul(d.saturating_sub(i))),
        (false, false) => d.saturating_pow(k as u32),
    }
}

/// Visits argument tuples in lexicographic order of domain indices.
fn for_each_tuple(
    d: usize,
    k: usize,
    symmetric: bool,
    distinct: bool,
    mut f: impl FnMut(&[usize]),
) {
    let mut t = vec![0usize; k];
    fn rec(
        pos: usize,
        t: &mut Vec<usize>,
        d: usize,
        symmetric: bool,
        distinct: bool,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if pos == t.len() {
            f(t);
            return;
        }
        let start = if symmetric && pos > 0 {
            t[pos - 1] + distinct as usize
        } else {
            0
        };
        for a in start..d {
            if distinct && !symmetric && t[..pos].contains(&a) {
                continue;
            }
            t[pos] = a;
            rec(pos + 1, t, d, symmetric, distinct, f);
        }
    }
    rec(0, &mut t, d, symmetric, distinct, &mut f);
}

/// Core closure over a compiled implying instance; returns applications
/// in enumeration order.
pub(crate) fn closure_apps(
    cs: &ConstraintSet,
    universe: &[Var],
    flags: ClosureFlags,
    engine: &mut Engine,
    limits: &Limits,
) -> Result<Vec<Application>> {
    flags.validate()?;
    let n = universe.len();
    let mut domain: Vec<IArg> = (0..n as u32).map(IArg::Var).collect();
    if flags.with_constants {
        domain.push(IArg::Const(false));
        domain.push(IArg::Const(true));
    }
    let plan: Vec<(&Arc<Constraint>, bool)> = cs
        .iter()
        .map(|c| (c, is_totally_symmetric(c.table())))
        .collect();
    let total: u128 = plan
        .iter()
        .map(|(c, sym)| tuple_count(domain.len(), c.arity(), *sym, flags.without_duplicates))
        .fold(0u128, |a, b| a.saturating_add(b));
    Limits::check(
        "closure candidate tuples",
        total.min(usize::MAX as u128) as usize,
        limits.max_candidates,
    )?;
    let mut seen: HashSet<(Vec<u32>, TruthTable)> = HashSet::new();
    let mut out = Vec::new();
    let mut args: Vec<IArg> = Vec::new();
    for (c, sym) in plan {
        for_each_tuple(
            domain.len(),
            c.arity(),
            sym,
            flags.without_duplicates,
            |t| {
                args.clear();
                args.extend(t.iter().map(|&i| domain[i]));
                let (vars, table) = canonicalize(c.table(), &args, split);
                if vars.is_empty() && table.get(0) {
                    return;
                }
                let key = (vars, table);
                if seen.contains(&key) {
                    return;
                }
                if engine.implies(&key.0, &key.1) {
                    let a: Vec<Arg> = args
                        .iter()
                        .map(|&x| match x {
                            IArg::Var(i) => Arg::Var(universe[i as usize].clone()),
                            IArg::Const(b) => Arg::Const(b),
                        })
                        .collect();
                    out.push(Application::new(c.clone(), a).expect("arity matches"));
                }
                seen.insert(key);
            },
        );
    }
    Ok(out)
}

fn sorted_universe(x: &[Var]) -> Vec<Var> {
    let mut u = x.to_vec();
    u.sort();
    u.dedup();
    u
}

/// All applications of `cs` over `x` (shaped by `flags`) implied by `s`.
pub fn maximal_closure(
    cs: &ConstraintSet,
    x: &[Var],
    flags: ClosureFlags,
    s: &InstanceSet,
    limits: &Limits,
) -> Result<InstanceSet> {
    let universe = sorted_universe(x);
    Limits::check(
        "closure universe",
        universe.len(),
        limits.max_closure_vars.min(128),
    )?;
    let s = s.with_universe(universe.clone())?;
    let mut engine = Engine::new(Compiled::new(&s), 0);
    let apps = closure_apps(cs, &universe, flags, &mut engine, limits)?;
    InstanceSet::from_apps(universe, apps)
}

/// Realizes `target` over `vars` by applications of `cs` without auxiliary
/// variables, if possible.
///
/// Any realizing set is contained in the closure of the target, so the
/// closure realizes the target iff anything does.
pub fn realize(
    cs: &ConstraintSet,
    vars: &[Var],
    target: &BoolFn,
    with_constants: bool,
    limits: &Limits,
) -> Result<Option<InstanceSet>> {
    let universe = sorted_universe(vars);
    Limits::check(
        "realization variables",
        universe.len(),
        limits.max_realize_vars,
    )?;
    if let Some(x) = target
        .vars()
        .iter()
        .find(|x| universe.binary_search(x).is_err())
    {
        return Err(Error::UnknownVariable(x.clone()));
    }
    let flags = ClosureFlags {
        with_constants,
        without_duplicates: false,
    };
    let goal = Compiled::from_keys(&universe, [target]);
    let mut engine = Engine::new(goal.clone(), 0);
    let apps = closure_apps(cs, &universe, flags, &mut engine, limits)?;
    let m = InstanceSet::from_apps(universe.clone(), apps)?;
    let got = Compiled::new(&m);
    let n = universe.len();
    let same = (0..1u128 << n).all(|a| got.eval(a) == goal.eval(a));
    Ok(same.then_some(m))
}

/// Maps a function's variables to universe indices.
pub(crate) fn key_indices(universe: &[Var], f: &BoolFn) -> Vec<u32> {
    index_vars(universe, f.vars())
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::boolfun::builtin_set;
    use crate::instances::equivalent;
    use crate::v;

    fn vars(names: &[&str]) -> Vec<Var> {
        names.iter().map(|x| v(x)).collect()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn closure_examples() {
        let or0 = builtin_set(&["or0"]).unwrap();
        let s = inst(&["x", "y"], &[("or0", &["x", "y"])]);
        let m = maximal_closure(&or0, &vars(&["x", "y"]), ClosureFlags::PLAIN, &s, &lim()).unwrap();
        assert_eq!(m, s);

        let xor2 = builtin_set(&["xor2"]).unwrap();
        let s = inst(
            &["x", "y", "z"],
            &[("xor2", &["x", "y"]), ("xor2", &["y", "z"])],
        );
        let m = maximal_closure(
            &xor2,
            &vars(&["x", "y", "z"]),
            ClosureFlags::PLAIN,
            &s,
            &lim(),
        )
        .unwrap();
        assert_eq!(m, s);

        let empty = inst(&["x", "y"], &[]);
        let m = maximal_closure(
            &or0,
            &vars(&["x", "y"]),
            ClosureFlags::PLAIN,
            &empty,
            &lim(),
        )
        .unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn closure_with_constants_and_duplicates() {
        let or0 = builtin_set(&["or0"]).unwrap();
        let s = inst(&["x", "y"], &[("id", &["x"])]);
        let m = maximal_closure(&or0, &vars(&["x", "y"]), ClosureFlags::PLAIN, &s, &lim()).unwrap();
        // x itself as or0(x, x), and x v y
        assert_eq!(
            m,
            inst(&["x", "y"], &[("id", &["x"]), ("or0", &["x", "y"])])
        );
        let m =
            maximal_closure(&or0, &vars(&["x", "y"]), ClosureFlags::DISTINCT, &s, &lim()).unwrap();
        assert_eq!(m, inst(&["x", "y"], &[("or0", &["x", "y"])]));
        let bad = ClosureFlags {
            with_constants: true,
            without_duplicates: true,
        };
        assert!(matches!(
            maximal_closure(&or0, &vars(&["x"]), bad, &inst(&["x"], &[]), &lim()),
            Err(Error::InvalidFlags(_))
        ));
    }

    #[test]
    fn unsatisfiable_implies_everything() {
        let xor2 = builtin_set(&["xor2"]).unwrap();
        let s = inst(&["x"], &[("id", &["x"]), ("neg", &["x"])]);
        let m = maximal_closure(&xor2, &vars(&["x"]), ClosureFlags::CONSTANTS, &s, &lim()).unwrap();
        // xor2(x,x) is false, xor2(x,0) is x, xor2(x,1) is !x, xor2(0,0) is false
        assert_eq!(m.len(), 3);
        assert!(m.has_falsum());
    }

    #[test]
    fn realize_examples() {
        let xy = vars(&["x", "y"]);
        let xor = BoolFn::from_fn(&xy, |a| a[0] ^ a[1]).unwrap();
        let one = builtin_set(&["one-in-three"]).unwrap();
        let r = realize(&one, &xy, &xor, true, &lim()).unwrap().unwrap();
        assert_eq!(r, inst(&["x", "y"], &[("one-in-three", &["x", "y", "0"])]));
        assert_eq!(r.apps()[0].to_string(), "one-in-three(x, y, 0)");

        let or = BoolFn::from_fn(&xy, |a| a[0] || a[1]).unwrap();
        let or0 = builtin_set(&["or0"]).unwrap();
        let r = realize(&or0, &xy, &or, false, &lim()).unwrap().unwrap();
        assert_eq!(r, inst(&["x", "y"], &[("or0", &["x", "y"])]));

        let xor2 = builtin_set(&["xor2"]).unwrap();
        assert!(realize(&xor2, &xy, &or, true, &lim()).unwrap().is_none());
    }

    #[test]
    fn realize_guard() {
        let names: Vec<String> = (0..9).map(|i| format!("x{i}")).collect();
        let vs: Vec<Var> = names.iter().map(|n| v(n)).collect();
        let f = BoolFn::constant(true);
        let cs = builtin_set(&["or0"]).unwrap();
        assert!(realize(&cs, &vs, &f, false, &lim()).unwrap_err().is_guard());
    }

    // Smallest-first subset search over the filtered application space.
    fn subset_realizes(cs: &ConstraintSet, xs: &[Var], target: &BoolFn, consts: bool) -> bool {
        let goal = InstanceSet::from_apps(xs.to_vec(), []).unwrap();
        let mut space: Vec<Application> = Vec::new();
        let mut dom: Vec<Arg> = xs.iter().cloned().map(Arg::Var).collect();
        if consts {
            dom.extend([Arg::Const(false), Arg::Const(true)]);
        }
        for c in cs {
            for_each_tuple(dom.len(), c.arity(), false, false, |t| {
                let a = Application::new(c.clone(), t.iter().map(|&i| dom[i].clone()).collect())
                    .unwrap();
                if !a.key().is_true() && !space.contains(&a) {
                    space.push(a);
                }
            });
        }
        let n = xs.len();
        let sat = |set: &[&Application], a: u128| {
            set.iter().all(|app| {
                app.key()
                    .eval(|x| (a >> goal.var_index(x).unwrap()) & 1 == 1)
            })
        };
        let want: Vec<bool> = (0..1u128 << n)
            .map(|a| target.eval(|x| (a >> goal.var_index(x).unwrap()) & 1 == 1))
            .collect();
        assert!(space.len() <= 20);
        (0u32..1 << space.len()).any(|mask| {
            let set: Vec<&Application> = (0..space.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &space[i])
                .collect();
            (0..1u128 << n).all(|a| sat(&set, a) == want[a as usize])
        })
    }

    #[test]
    fn realize_agrees_with_subset_search() {
        let xy = vars(&["x", "y"]);
        for name in ["or0", "or1", "xor2", "xnor2"] {
            let cs = builtin_set(&[name]).unwrap();
            for code in 0u32..16 {
                let f =
                    BoolFn::from_fn(&xy, |a| code >> ((a[0] as u32) * 2 + a[1] as u32) & 1 == 1)
                        .unwrap();
                for consts in [false, true] {
                    let got = realize(&cs, &xy, &f, consts, &lim()).unwrap();
                    if let Some(m) = &got {
                        let sat = (0..4u128).all(|a| {
                            let ok = m.apps().iter().all(|app| {
                                app.key().eval(|x| (a >> m.var_index(x).unwrap()) & 1 == 1)
                            });
                            ok == f.eval(|x| (a >> m.var_index(x).unwrap()) & 1 == 1)
                        });
                        assert!(sat);
                    }
                    assert_eq!(
                        got.is_some(),
                        subset_realizes(&cs, &xy, &f, consts),
                        "{name} {code}"
                    );
                }
            }
        }
    }

    #[test]
    fn closure_is_idempotent_and_extensive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let cs = builtin_set(&["or0", "or1", "xor2"]).unwrap();
        for _ in 0..40 {
            let n = rng.gen_range(2..=5);
            let xs: Vec<Var> = (1..=n).map(|i| v(&format!("x{i}"))).collect();
            let mut s = InstanceSet::new(xs.clone());
            for _ in 0..rng.gen_range(0..=4) {
                let c = cs.iter().nth(rng.gen_range(0..3)).unwrap().clone();
                let a = Application::new(
                    c,
                    (0..2)
                        .map(|_| Arg::Var(xs[rng.gen_range(0..n)].clone()))
                        .collect(),
                )
                .unwrap();
                s.insert(a).unwrap();
            }
            let m = maximal_closure(&cs, &xs, ClosureFlags::PLAIN, &s, &lim()).unwrap();
            let mm = maximal_closure(&cs, &xs, ClosureFlags::PLAIN, &m, &lim()).unwrap();
            assert_eq!(m, mm);
            // tautologies such as or1(x, x) are never part of a closure
            for a in s.apps().iter().filter(|a| !a.key().is_true()) {
                assert!(m.contains(a.key()));
            }
            assert!(equivalent(&m, &s, &lim()).unwrap());
        }
    }
}

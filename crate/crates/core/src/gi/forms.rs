//! The six canonical target forms, constant lifting, and the per-edge
//! instantiation of a lifted realization.

use std::collections::{BTreeMap, HashMap};

use super::encode::{graph_universe, xp, xv, yp, yv, Families};
use super::Graph;
use crate::boolfun::ConstraintSet;
use crate::instances::{realize, Arg, BoolFn, InstanceSet};
use crate::{Error, Limits, Result, Var};

pub(crate) fn var(name: &str) -> Var {
    Var::new(name).expect("valid name")
}

pub fn f_var() -> Var {
    var("f")
}

pub fn t_var() -> Var {
    var("t")
}

/// Template variables of form `i`.
pub fn form_vars(i: u8) -> Result<Vec<Var>> {
    let names: &[&str] = match i {
        1..=3 => &["x", "y"],
        4 => &["x", "y", "x'", "y'"],
        5 | 6 => &["x", "y", "z", "x'", "y'", "z'"],
        _ => return Err(Error::RestrictionMismatch(i)),
    };
    Ok(names.iter().map(|n| var(n)).collect())
}

/// Canonical form `i` over [`form_vars`]:
/// 1 `x v y`, 2 `!x v y`, 3 `!x v !y`, 4 `(x v y) & (x ^ x') & (y ^ y')`,
/// 5 `one-in-three(x, y, z)` and 6 `x ^ y ^ z`, each with `& (x ^ x') &
/// (y ^ y') & (z ^ z')`.
pub fn canonical_form(i: u8) -> Result<BoolFn> {
    let vars = form_vars(i)?;
    let pairs = |a: &[bool], n: usize| (0..n).all(|j| a[j] != a[j + n]);
    BoolFn::from_fn(&vars, |a| match i {
        1 => a[0] || a[1],
        2 => !a[0] || a[1],
        3 => !a[0] || !a[1],
        4 => (a[0] || a[1]) && pairs(a, 2),
        5 => a[..3].iter().filter(|&&b| b).count() == 1 && pairs(a, 3),
        _ => (a[0] ^ a[1] ^ a[2]) && pairs(a, 3),
    })
}

/// Realizes form `i` by applications of `cs` with constants.
pub fn realize_form(cs: &ConstraintSet, i: u8, limits: &Limits) -> Result<Option<InstanceSet>> {
    realize(cs, &form_vars(i)?, &canonical_form(i)?, true, limits)
}

/// Replaces the constant 0 by `f` and 1 by `t`; both join the universe.
pub fn lift_constants(s: &InstanceSet) -> Result<InstanceSet> {
    let (f, t) = (f_var(), t_var());
    for x in [&f, &t] {
        if s.contains_var(x) {
            return Err(Error::NameClash(x.to_string()));
        }
    }
    let mut out = InstanceSet::new(s.universe().iter().cloned().chain([f.clone(), t.clone()]));
    for a in s.apps() {
        out.insert(a.map_args(|arg| match arg {
            Arg::Const(false) => Arg::Var(f.clone()),
            Arg::Const(true) => Arg::Var(t.clone()),
            v => v.clone(),
        }))?;
    }
    Ok(out)
}

/// Restricting `d` at `f = 0, t = 1` must give form `i`.
fn check_restriction(i: u8, d: &InstanceSet) -> Result<()> {
    let vars = form_vars(i)?;
    let form = canonical_form(i)?;
    let mut bind = BTreeMap::new();
    bind.insert(f_var(), false);
    bind.insert(t_var(), true);
    let r = d.substitute(&bind);
    if r.universe().iter().any(|x| !vars.contains(x)) {
        return Err(Error::RestrictionMismatch(i));
    }
    let k = vars.len();
    let ok = (0..1usize << k).all(|row| {
        let val = |x: &Var| {
            let p = vars.iter().position(|v| v == x).expect("template variable");
            row & (1 << (k - 1 - p)) != 0
        };
        r.apps().iter().all(|a| a.key().eval(val)) == form.eval(val)
    });
    if ok {
        Ok(())
    } else {
        Err(Error::RestrictionMismatch(i))
    }
}

/// Copies of `d` with template variables renamed; `f` and `t` stay shared.
pub(crate) fn instantiate(
    d: &InstanceSet,
    names: &[&str],
    images: &[Var],
    out: &mut InstanceSet,
) -> Result<()> {
    let map: HashMap<Var, Var> = names
        .iter()
        .map(|n| var(n))
        .zip(images.iter().cloned())
        .collect();
    for a in d.apps() {
        out.insert(a.map_args(|arg| match arg {
            Arg::Var(x) => Arg::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
            c => c.clone(),
        }))?;
    }
    Ok(())
}

pub(crate) fn families(i: u8) -> Families {
    Families {
        primed_vertices: i >= 4,
        edges: matches!(i, 2 | 5 | 6),
        primed_edges: i >= 5,
    }
}

/// One copy of the lifted realization `d` of form `i` per edge of `g`.
#[allow(non_snake_case)]
pub fn build_SiD(i: u8, d: &InstanceSet, g: &Graph) -> Result<InstanceSet> {
    check_restriction(i, d)?;
    g.require_no_isolated()?;
    let mut out = InstanceSet::new(
        graph_universe(g, families(i))
            .into_iter()
            .chain([f_var(), t_var()]),
    );
    let names2 = ["x", "y"];
    let names4 = ["x", "y", "x'", "y'"];
    let names6 = ["x", "y", "z", "x'", "y'", "z'"];
    for (k, &(a, b)) in g.edges().iter().enumerate() {
        let k = k + 1;
        match i {
            1 | 3 => instantiate(d, &names2, &[xv(a), xv(b)], &mut out)?,
            2 => {
                instantiate(d, &names2, &[yv(k), xv(a)], &mut out)?;
                instantiate(d, &names2, &[yv(k), xv(b)], &mut out)?;
            }
            4 => instantiate(d, &names4, &[xv(a), xv(b), xp(a), xp(b)], &mut out)?,
            _ => instantiate(
                d,
                &names6,
                &[xv(a), xv(b), yv(k), xp(a), xp(b), yp(k)],
                &mut out,
            )?,
        }
    }
    Ok(out)
}

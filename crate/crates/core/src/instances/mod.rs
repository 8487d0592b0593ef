//! Constraint applications, instance sets, and their semantics.

mod closure;
mod iso;
mod semantics;
mod solver;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use closure::{maximal_closure, realize, ClosureFlags};
pub use iso::{brute_force_iso, guided_iso, guided_iso_with};
pub use semantics::{
    count_sat, equivalent, equivalent_exact, implies_exact, is_satisfiable, models,
};

#[cfg(test)]
pub(crate) use semantics::tests_support;
pub(crate) use solver::Engine;

use crate::boolfun::{Constraint, ConstraintSet, TruthTable};
use crate::{Error, Result, Var};

/// An argument of a constraint application.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Arg {
    Var(Var),
    Const(bool),
}

impl Arg {
    pub fn var(&self) -> Option<&Var> {
        match self {
            Arg::Var(x) => Some(x),
            Arg::Const(_) => None,
        }
    }
}

impl From<Var> for Arg {
    fn from(x: Var) -> Self {
        Arg::Var(x)
    }
}

impl From<&Var> for Arg {
    fn from(x: &Var) -> Self {
        Arg::Var(x.clone())
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Var(x) => write!(f, "{x}"),
            Arg::Const(b) => write!(f, "{}", *b as u8),
        }
    }
}

/// A Boolean function over its essential variables, in sorted order.
///
/// This is the identity of a constraint application: two applications are
/// the same element of an instance set iff their `BoolFn`s are equal.
/// Constant functions have no variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BoolFn {
    vars: Vec<Var>,
    table: TruthTable,
}

impl BoolFn {
    /// Canonicalizes a table over distinct `vars` (any order).
    pub fn new(vars: Vec<Var>, table: TruthTable) -> Result<Self> {
        if vars.len() != table.arity() {
            return Err(Error::ArityMismatch {
                expected: table.arity(),
                got: vars.len(),
            });
        }
        let distinct: BTreeSet<&Var> = vars.iter().collect();
        if distinct.len() != vars.len() {
            return Err(Error::InvalidVariable(
                "repeated variable in function".into(),
            ));
        }
        let args: Vec<Arg> = vars.into_iter().map(Arg::Var).collect();
        Ok(canonical_fn(&table, &args))
    }

    pub fn from_fn(vars: &[Var], f: impl Fn(&[bool]) -> bool) -> Result<Self> {
        let k = vars.len();
        let mut buf = vec![false; k];
        let table = TruthTable::from_fn(k, |row| {
            for (j, b) in buf.iter_mut().enumerate() {
                *b = row & (1 << (k - 1 - j)) != 0;
            }
            f(&buf)
        });
        Self::new(vars.to_vec(), table)
    }

    pub fn constant(value: bool) -> Self {
        BoolFn {
            vars: Vec::new(),
            table: TruthTable::constant(value),
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn is_true(&self) -> bool {
        self.vars.is_empty() && self.table.get(0)
    }

    pub fn is_false(&self) -> bool {
        self.vars.is_empty() && !self.table.get(0)
    }

    pub fn eval(&self, value: impl Fn(&Var) -> bool) -> bool {
        let k = self.vars.len();
        let row = self.vars.iter().enumerate().fold(0usize, |acc, (j, x)| {
            acc | ((value(x) as usize) << (k - 1 - j))
        });
        self.table.get(row)
    }

    /// Renames variables; the map may merge variables.
    pub fn rename(&self, f: impl Fn(&Var) -> Arg) -> BoolFn {
        let args: Vec<Arg> = self.vars.iter().map(f).collect();
        canonical_fn(&self.table, &args)
    }
}

/// Canonical function of `table` applied to `args`.
pub(crate) fn canonical_fn(table: &TruthTable, args: &[Arg]) -> BoolFn {
    let (vars, table) = canonicalize(table, args, |a| match a {
        Arg::Var(x) => Ok(x.clone()),
        Arg::Const(b) => Err(*b),
    });
    BoolFn { vars, table }
}

/// Shared canonicalization: distinct variables sorted, constants folded,
/// inessential variables dropped.
pub(crate) fn canonicalize<A, V: Ord + Clone>(
    table: &TruthTable,
    args: &[A],
    split: impl Fn(&A) -> std::result::Result<V, bool>,
) -> (Vec<V>, TruthTable) {
    let k = args.len();
    let parts: Vec<std::result::Result<V, bool>> = args.iter().map(&split).collect();
    let mut vars: Vec<V> = parts
        .iter()
        .filter_map(|p| p.as_ref().ok().cloned())
        .collect();
    vars.sort();
    vars.dedup();
    let r = vars.len();
    let slot: Vec<std::result::Result<usize, bool>> = parts
        .iter()
        .map(|p| match p {
            Ok(x) => Ok(vars.binary_search(x).expect("present")),
            Err(b) => Err(*b),
        })
        .collect();
    let t = TruthTable::from_fn(r, |row| {
        let mut crow = 0usize;
        for (j, s) in slot.iter().enumerate() {
            let bit = match s {
                Ok(i) => (row >> (r - 1 - i)) & 1 == 1,
                Err(b) => *b,
            };
            if bit {
                crow |= 1 << (k - 1 - j);
            }
        }
        table.get(crow)
    });
    let drop: Vec<usize> = (0..r).filter(|&p| !t.depends_on(p)).collect();
    if drop.is_empty() {
        return (vars, t);
    }
    let t = t.remove_positions(&drop);
    let vars = vars
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, x)| x)
        .collect();
    (vars, t)
}

/// A constraint applied to a tuple of variables and constants.
#[derive(Clone)]
pub struct Application {
    constraint: Arc<Constraint>,
    args: Vec<Arg>,
    key: BoolFn,
}

impl Application {
    pub fn new(constraint: Arc<Constraint>, args: Vec<Arg>) -> Result<Self> {
        if args.len() != constraint.arity() {
            return Err(Error::ArityMismatch {
                expected: constraint.arity(),
                got: args.len(),
            });
        }
        let key = canonical_fn(constraint.table(), &args);
        Ok(Application {
            constraint,
            args,
            key,
        })
    }

    /// Shorthand over variable arguments only.
    pub fn on(constraint: &Arc<Constraint>, vars: &[&Var]) -> Result<Self> {
        Self::new(
            constraint.clone(),
            vars.iter().map(|x| Arg::Var((*x).clone())).collect(),
        )
    }

    pub fn constraint(&self) -> &Arc<Constraint> {
        &self.constraint
    }

    pub fn args(&self) -> &[Arg] {
        &self.args
    }

    /// The function this application denotes.
    pub fn key(&self) -> &BoolFn {
        &self.key
    }

    pub fn has_constants(&self) -> bool {
        self.args.iter().any(|a| matches!(a, Arg::Const(_)))
    }

    /// Pairwise-distinct variables and no constants.
    pub fn is_duplicate_free(&self) -> bool {
        let mut seen = HashSet::new();
        self.args.iter().all(|a| match a {
            Arg::Var(x) => seen.insert(x),
            Arg::Const(_) => false,
        })
    }

    pub fn arg_vars(&self) -> impl Iterator<Item = &Var> {
        self.args.iter().filter_map(Arg::var)
    }

    pub fn map_args(&self, f: impl Fn(&Arg) -> Arg) -> Application {
        let args: Vec<Arg> = self.args.iter().map(f).collect();
        Application::new(self.constraint.clone(), args).expect("arity preserved")
    }
}

impl PartialEq for Application {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Application {}

impl std::hash::Hash for Application {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl fmt::Debug for Application {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Application {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.constraint.name())?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Application {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite set of applications over an ordered variable universe.
///
/// Applications keep insertion order; equality ignores it.
#[derive(Clone, Default)]
pub struct InstanceSet {
    universe: Vec<Var>,
    apps: Vec<Application>,
    keys: HashSet<BoolFn>,
}

impl InstanceSet {
    pub fn new(universe: impl IntoIterator<Item = Var>) -> Self {
        let mut u: Vec<Var> = universe.into_iter().collect();
        u.sort();
        u.dedup();
        InstanceSet {
            universe: u,
            apps: Vec::new(),
            keys: HashSet::new(),
        }
    }

    pub fn from_apps(
        universe: impl IntoIterator<Item = Var>,
        apps: impl IntoIterator<Item = Application>,
    ) -> Result<Self> {
        let mut s = Self::new(universe);
        for a in apps {
            s.insert(a)?;
        }
        Ok(s)
    }

    /// Universe is exactly the occurring variables.
    pub fn from_apps_auto(apps: impl IntoIterator<Item = Application>) -> Self {
        let apps: Vec<Application> = apps.into_iter().collect();
        let vars: Vec<Var> = apps.iter().flat_map(|a| a.arg_vars().cloned()).collect();
        let mut s = Self::new(vars);
        for a in apps {
            s.insert(a).expect("universe covers arguments");
        }
        s
    }

    /// Adds `a`; returns false if an equal application is present.
    pub fn insert(&mut self, a: Application) -> Result<bool> {
        if let Some(x) = a.arg_vars().find(|x| !self.contains_var(x)) {
            return Err(Error::UnknownVariable(x.clone()));
        }
        if !self.keys.insert(a.key.clone()) {
            return Ok(false);
        }
        self.apps.push(a);
        Ok(true)
    }

    /// Adds variables to the universe.
    pub fn extend_universe(&mut self, vars: impl IntoIterator<Item = Var>) {
        self.universe.extend(vars);
        self.universe.sort();
        self.universe.dedup();
    }

    pub fn universe(&self) -> &[Var] {
        &self.universe
    }

    pub fn contains_var(&self, x: &Var) -> bool {
        self.universe.binary_search(x).is_ok()
    }

    pub fn var_index(&self, x: &Var) -> Option<usize> {
        self.universe.binary_search(x).ok()
    }

    pub fn apps(&self) -> &[Application] {
        &self.apps
    }

    pub fn len(&self) -> usize {
        self.apps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.apps.is_empty()
    }

    pub fn contains(&self, key: &BoolFn) -> bool {
        self.keys.contains(key)
    }

    pub fn has_constants(&self) -> bool {
        self.apps.iter().any(Application::has_constants)
    }

    /// Contains an application that is constant false.
    pub fn has_falsum(&self) -> bool {
        self.apps.iter().any(|a| a.key.is_false())
    }

    /// Sorted application keys, the canonical content of the set.
    pub fn sorted_keys(&self) -> Vec<&BoolFn> {
        let mut k: Vec<&BoolFn> = self.apps.iter().map(|a| &a.key).collect();
        k.sort();
        k
    }

    /// The constraints used, first occurrence wins on name clashes.
    pub fn constraints(&self) -> ConstraintSet {
        let mut cs = ConstraintSet::new();
        for a in &self.apps {
            if cs.get(a.constraint.name()).is_none() {
                cs.insert((*a.constraint).clone()).expect("fresh name");
            }
        }
        cs
    }

    /// Replaces bound variables by constants.
    ///
    /// Tautologies disappear; a falsified application stays as a falsum.
    pub fn substitute(&self, binding: &BTreeMap<Var, bool>) -> InstanceSet {
        let universe = self
            .universe
            .iter()
            .filter(|x| !binding.contains_key(*x))
            .cloned();
        let mut out = InstanceSet::new(universe);
        for a in &self.apps {
            let b = a.map_args(|arg| match arg {
                Arg::Var(x) => match binding.get(x) {
                    Some(&val) => Arg::Const(val),
                    None => arg.clone(),
                },
                c => c.clone(),
            });
            if !b.key.is_true() {
                out.insert(b).expect("universe covers remaining variables");
            }
        }
        out
    }

    /// Replaces every variable by its image under `p`.
    pub fn apply_permutation(&self, p: &Permutation) -> Result<InstanceSet> {
        p.check_universe(&self.universe)?;
        let mut out = InstanceSet::new(self.universe.iter().cloned());
        for a in &self.apps {
            let b = a.map_args(|arg| match arg {
                Arg::Var(x) => Arg::Var(p.image(x).clone()),
                c => c.clone(),
            });
            out.insert(b)?;
        }
        Ok(out)
    }

    /// Renames variables through an arbitrary map, extending the universe
    /// with the images; unmapped variables stay.
    pub fn rename(&self, f: impl Fn(&Var) -> Var) -> InstanceSet {
        let mut out = InstanceSet::new(self.universe.iter().map(&f));
        for a in &self.apps {
            let b = a.map_args(|arg| match arg {
                Arg::Var(x) => Arg::Var(f(x)),
                c => c.clone(),
            });
            out.insert(b).expect("images are in the universe");
        }
        out
    }

    /// The same applications over `universe`, which must cover them.
    pub fn with_universe(&self, universe: impl IntoIterator<Item = Var>) -> Result<InstanceSet> {
        InstanceSet::from_apps(universe, self.apps.iter().cloned())
    }
}

impl PartialEq for InstanceSet {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.keys == other.keys
    }
}

impl Eq for InstanceSet {}

impl fmt::Debug for InstanceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.apps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}} over {:?}", self.universe)
    }
}

/// Gives both sets the union of their universes.
pub fn align(s: &InstanceSet, u: &InstanceSet) -> (InstanceSet, InstanceSet) {
    let all: Vec<Var> = s
        .universe
        .iter()
        .chain(u.universe.iter())
        .cloned()
        .collect();
    let s2 = s.with_universe(all.clone()).expect("superset universe");
    let u2 = u.with_universe(all).expect("superset universe");
    (s2, u2)
}

/// A bijection on a variable universe.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Permutation {
    map: BTreeMap<Var, Var>,
}

impl Permutation {
    pub fn new(pairs: impl IntoIterator<Item = (Var, Var)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (a, b) in pairs {
            if map.insert(a.clone(), b).is_some() {
                return Err(Error::NotAPermutation(format!("`{a}` mapped twice")));
            }
        }
        let dom: BTreeSet<&Var> = map.keys().collect();
        let img: BTreeSet<&Var> = map.values().collect();
        if dom != img {
            return Err(Error::NotAPermutation("images differ from domain".into()));
        }
        Ok(Permutation { map })
    }

    pub fn identity(universe: &[Var]) -> Self {
        Permutation {
            map: universe.iter().map(|x| (x.clone(), x.clone())).collect(),
        }
    }

    /// Builds the permutation sending `universe[i]` to `universe[img[i]]`.
    pub(crate) fn from_indices(universe: &[Var], img: &[usize]) -> Self {
        Permutation {
            map: universe
                .iter()
                .zip(img)
                .map(|(x, &j)| (x.clone(), universe[j].clone()))
                .collect(),
        }
    }

    pub fn image<'a>(&'a self, x: &'a Var) -> &'a Var {
        self.map.get(x).unwrap_or(x)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Var, &Var)> {
        self.map.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(a, b)| a == b)
    }

    pub fn inverse(&self) -> Permutation {
        Permutation {
            map: self
                .map
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }

    fn check_universe(&self, universe: &[Var]) -> Result<()> {
        if self.map.len() != universe.len() || universe.iter().any(|x| !self.map.contains_key(x)) {
            return Err(Error::NotAPermutation(
                "domain differs from the universe".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, b) in &self.map {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{a}->{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use crate::v;

    #[test]
    fn identity_is_the_function() {
        assert_eq!(app("or0", &["x", "y"]), app("or0", &["y", "x"]));
        assert_ne!(app("or1", &["x", "y"]), app("or1", &["y", "x"]));
        // or0(x, x) is the unary x
        assert_eq!(app("or0", &["x", "x"]), app("id", &["x"]));
        assert!(app("or0", &["x", "1"]).key().is_true());
        assert!(app("id", &["0"]).key().is_false());
    }

    #[test]
    fn set_semantics() {
        let s = inst(&["x", "y"], &[("or0", &["x", "y"]), ("or0", &["y", "x"])]);
        assert_eq!(s.len(), 1);
        let t = inst(&["y", "x"], &[("or0", &["x", "y"])]);
        assert_eq!(s, t);
    }

    #[test]
    fn unknown_variable_rejected() {
        let mut s = InstanceSet::new([v("x")]);
        assert_eq!(
            s.insert(app("or0", &["x", "y"])),
            Err(Error::UnknownVariable(v("y")))
        );
    }

    #[test]
    fn substitute_examples() {
        let s = InstanceSet::from_apps_auto([app("or0", &["t", "t"]), app("or0", &["x", "y"])]);
        let r = s.substitute(&[(v("t"), true)].into());
        assert_eq!(r, inst(&["x", "y"], &[("or0", &["x", "y"])]));

        let s = inst(&["x", "x'"], &[("xor2", &["x", "x'"])]);
        let r = s.substitute(&[(v("x"), false)].into());
        assert_eq!(r, inst(&["x'"], &[("id", &["x'"])]));

        let s = inst(&["x"], &[("id", &["x"])]);
        let r = s.substitute(&[(v("x"), false)].into());
        assert!(r.has_falsum());
        assert!(r.universe().is_empty());
    }

    #[test]
    fn permutation_examples() {
        let s = inst(&["x", "y", "z"], &[("or0", &["x", "z"])]);
        let id = Permutation::identity(s.universe());
        assert_eq!(s.apply_permutation(&id).unwrap(), s);
        let swap = perm(&[("x", "y"), ("y", "x"), ("z", "z")]);
        assert_eq!(
            s.apply_permutation(&swap).unwrap(),
            inst(&["x", "y", "z"], &[("or0", &["y", "z"])])
        );
        let s = inst(&["x", "y", "z"], &[("xor2", &["x", "y"])]);
        let cyc = perm(&[("x", "y"), ("y", "z"), ("z", "x")]);
        assert_eq!(
            s.apply_permutation(&cyc).unwrap(),
            inst(&["x", "y", "z"], &[("xor2", &["y", "z"])])
        );
        let partial = perm(&[("x", "y"), ("y", "x")]);
        assert!(s.apply_permutation(&partial).is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new([(v("a"), v("b")), (v("b"), v("b"))]).is_err());
        assert!(Permutation::new([(v("a"), v("b"))]).is_err());
    }

    #[test]
    fn bool_fn_canonical() {
        let f = BoolFn::from_fn(&[v("y"), v("x")], |a| a[0] && !a[1]).unwrap();
        let g = BoolFn::from_fn(&[v("x"), v("y")], |a| !a[0] && a[1]).unwrap();
        assert_eq!(f, g);
        let h = BoolFn::from_fn(&[v("x"), v("y")], |a| a[0]).unwrap();
        assert_eq!(h.vars(), &[v("x")]);
    }

    #[test]
    fn align_takes_union() {
        let s = inst(&["x"], &[]);
        let u = inst(&["y"], &[]);
        let (a, b) = align(&s, &u);
        assert_eq!(a.universe(), &[v("x"), v("y")]);
        assert_eq!(b.universe(), a.universe());
    }
}

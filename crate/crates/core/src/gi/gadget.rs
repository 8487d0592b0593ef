//! Constant-free gadgets that pin down copies of `f` and `t`.

use std::fmt;

use serde::{Serialize, Serializer};

use super::encode::{graph_universe, xv, yv, Families};
use super::forms::{f_var, instantiate, t_var, var};
use super::Graph;
use crate::boolfun::ConstraintSet;
use crate::instances::{realize, BoolFn, InstanceSet};
use crate::{Limits, Result, Var};

/// The ten gadget targets, in search order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GadgetTarget {
    /// `!x & y`
    NotXAndY,
    /// `!x | y`
    NotXOrY,
    /// `x ^ y`
    Xor,
    /// `x <-> y`
    Iff,
    /// `t & (!x | y)`
    TNotXOrY,
    /// `t & (x <-> y)`
    TIff,
    /// `t & (x | y)`
    TOr,
    /// `!f & (!x | y)`
    FNotXOrY,
    /// `!f & (x <-> y)`
    FIff,
    /// `!f & (!x | !y)`
    FNand,
}

use GadgetTarget::*;

impl GadgetTarget {
    pub const ALL: [GadgetTarget; 10] = [
        NotXAndY, NotXOrY, Xor, Iff, TNotXOrY, TIff, TOr, FNotXOrY, FIff, FNand,
    ];

    /// 1-based position in [`GadgetTarget::ALL`].
    pub fn id(self) -> usize {
        Self::ALL.iter().position(|&t| t == self).expect("listed") + 1
    }

    pub fn template_names(self) -> &'static [&'static str] {
        match self {
            NotXAndY | NotXOrY | Xor | Iff => &["x", "y"],
            TNotXOrY | TIff | TOr => &["t", "x", "y"],
            FNotXOrY | FIff | FNand => &["f", "x", "y"],
        }
    }

    pub fn template_vars(self) -> Vec<Var> {
        self.template_names().iter().map(|n| var(n)).collect()
    }

    pub fn function(self) -> BoolFn {
        BoolFn::from_fn(&self.template_vars(), |a| match self {
            NotXAndY => !a[0] && a[1],
            NotXOrY => !a[0] || a[1],
            Xor => a[0] != a[1],
            Iff => a[0] == a[1],
            TNotXOrY => a[0] && (!a[1] || a[2]),
            TIff => a[0] && a[1] == a[2],
            TOr => a[0] && (a[1] || a[2]),
            FNotXOrY => !a[0] && (!a[1] || a[2]),
            FIff => !a[0] && a[1] == a[2],
            FNand => !a[0] && (!a[1] || !a[2]),
        })
        .expect("template variables are distinct")
    }

    /// Targets whose gadget encodes a graph on its own, without a
    /// canonical-form realization.
    pub fn is_direct(self) -> bool {
        matches!(self, NotXOrY | TNotXOrY | TOr | FNotXOrY | FNand)
    }
}

impl GadgetTarget {
    pub fn name(self) -> &'static str {
        match self {
            NotXAndY => "!x&y",
            NotXOrY => "!x|y",
            Xor => "x^y",
            Iff => "x<->y",
            TNotXOrY => "t&(!x|y)",
            TIff => "t&(x<->y)",
            TOr => "t&(x|y)",
            FNotXOrY => "!f&(!x|y)",
            FIff => "!f&(x<->y)",
            FNand => "!f&(!x|!y)",
        }
    }
}

impl Serialize for GadgetTarget {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for GadgetTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A realization `u` of `target` without constants.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub target: GadgetTarget,
    pub u: InstanceSet,
}

/// First target in [`GadgetTarget::ALL`] that `cs` realizes without
/// constants.
pub fn find_gadget(cs: &ConstraintSet, limits: &Limits) -> Result<Option<Gadget>> {
    for target in GadgetTarget::ALL {
        if let Some(u) = realize(
            cs,
            &target.template_vars(),
            &target.function(),
            false,
            limits,
        )? {
            return Ok(Some(Gadget { target, u }));
        }
    }
    Ok(None)
}

pub fn gadget_vars() -> [Var; 3] {
    [var("f1"), var("f2"), var("t1")]
}

/// Adds the gadget copies for `g.target` to `s`, which must contain `f`
/// and `t`. Returns `None` for targets without an attachment case.
pub fn attach_gadget(g: &Gadget, s: &InstanceSet) -> Result<Option<InstanceSet>> {
    let (f, t) = (f_var(), t_var());
    let [f1, f2, t1] = gadget_vars();
    let copies: Vec<[&Var; 3]> = match g.target {
        NotXAndY => vec![[&f, &t, &t], [&f1, &t, &t], [&f2, &t1, &t1]],
        Xor => vec![[&f, &t, &t], [&f1, &t, &t], [&f2, &t, &t], [&f, &t1, &t1]],
        Iff => vec![[&f, &f1, &f1], [&f, &f2, &f2], [&t, &t1, &t1]],
        TIff => vec![[&t, &f, &f1], [&t1, &f, &f2]],
        FIff => vec![[&f, &f, &f1], [&f2, &t, &t1]],
        _ => return Ok(None),
    };
    let mut out = s.clone();
    out.extend_universe([f1.clone(), f2.clone(), t1.clone()]);
    let names = g.target.template_names();
    for c in copies {
        let images: Vec<Var> = c[..names.len()].iter().map(|&x| x.clone()).collect();
        instantiate(&g.u, names, &images, &mut out)?;
    }
    Ok(Some(out))
}

/// Encodes `g` with the gadget alone. Returns `None` for targets that are
/// not direct.
pub fn direct_encoding(gadget: &Gadget, g: &Graph) -> Result<Option<InstanceSet>> {
    let target = gadget.target;
    if !target.is_direct() {
        return Ok(None);
    }
    g.require_no_isolated()?;
    let fam = Families {
        primed_vertices: false,
        edges: target != TOr && target != FNand,
        primed_edges: false,
    };
    let mut universe = graph_universe(g, fam);
    match target {
        TNotXOrY | TOr => universe.push(t_var()),
        FNotXOrY | FNand => universe.push(f_var()),
        _ => {}
    }
    let mut out = InstanceSet::new(universe);
    let names = target.template_names();
    let lead: Vec<Var> = match target {
        TNotXOrY | TOr => vec![t_var()],
        FNotXOrY | FNand => vec![f_var()],
        _ => vec![],
    };
    for (k, &(a, b)) in g.edges().iter().enumerate() {
        let pairs = if fam.edges {
            vec![[yv(k + 1), xv(a)], [yv(k + 1), xv(b)]]
        } else {
            vec![[xv(a), xv(b)]]
        };
        for p in pairs {
            let images: Vec<Var> = lead.iter().cloned().chain(p).collect();
            instantiate(&gadget.u, names, &images, &mut out)?;
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::boolfun::{Constraint, TruthTable};
    use crate::builtin_set;
    use crate::instances::{equivalent_exact, implies_exact};

    fn lim() -> Limits {
        Limits::default()
    }

    fn hit(names: &[&str]) -> Gadget {
        find_gadget(&builtin_set(names).unwrap(), &lim())
            .unwrap()
            .unwrap()
    }

    fn show(s: &InstanceSet) -> Vec<String> {
        s.apps().iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn builtin_hits() {
        let g = hit(&["xor2"]);
        assert_eq!(g.target, Xor);
        assert_eq!(show(&g.u), ["xor2(x, y)"]);
        let g = hit(&["one-in-three"]);
        assert_eq!(g.target, NotXAndY);
        assert_eq!(g.u.len(), 1);
        assert_eq!(g.u.apps()[0].key(), &NotXAndY.function());
        for (name, want) in [
            ("or0", TOr),
            ("or1", NotXOrY),
            ("or2", FNand),
            ("xor3", TIff),
        ] {
            assert_eq!(hit(&[name]).target, want, "{name}");
        }
        assert_eq!(TOr.id(), 7);
        assert_eq!(FNand.id(), 10);
    }

    #[test]
    fn two_affine_set_may_miss() {
        let cs = builtin_set(&["id"]).unwrap();
        assert!(find_gadget(&cs, &lim()).unwrap().is_none());
    }

    #[test]
    fn every_small_non_two_affine_constraint_has_a_gadget() {
        let mut misses = Vec::new();
        for arity in 1..=3usize {
            for code in 0u32..1 << (1 << arity) {
                let t = TruthTable::from_fn(arity, |r| code >> r & 1 == 1);
                let c = Constraint::new("b", t).unwrap();
                let p = *c.properties();
                if p.affine && p.bijunctive {
                    continue;
                }
                let cs = crate::ConstraintSet::from_constraints([c]).unwrap();
                if find_gadget(&cs, &lim()).unwrap().is_none() {
                    misses.push((arity, code));
                }
            }
        }
        assert!(misses.is_empty(), "{misses:?}");
    }

    #[test]
    fn direct_tor_on_path() {
        let g = hit(&["or0"]);
        let p = Graph::path(3);
        let s = direct_encoding(&g, &p).unwrap().unwrap();
        let t = t_var();
        let tf = BoolFn::from_fn(std::slice::from_ref(&t), |a| a[0]).unwrap();
        assert!(implies_exact(&s, &tf, &lim()).unwrap());
        let r = s.substitute(&[(t, true)].into());
        let enc = crate::gi::encode_or(0, &p).unwrap();
        let r = r.with_universe(enc.universe().to_vec()).unwrap();
        assert!(equivalent_exact(&r, &enc, &lim()).unwrap());
    }

    fn gadget_for(target: GadgetTarget) -> Gadget {
        // a constraint equal to the target realizes it in one application
        let vars = target.template_vars();
        let f = target.function();
        let t = TruthTable::from_fn(vars.len(), |row| {
            f.eval(|x| {
                let p = vars.iter().position(|v| v == x).unwrap();
                row & 1 << (vars.len() - 1 - p) != 0
            })
        });
        let c = Arc::new(Constraint::new("g", t).unwrap());
        let cs = crate::ConstraintSet::from_constraints([(*c).clone()]).unwrap();
        let u = realize(&cs, &vars, &f, false, &lim()).unwrap().unwrap();
        Gadget { target, u }
    }

    #[test]
    fn attached_gadgets_force_the_copies() {
        let base = InstanceSet::new([f_var(), t_var()]);
        let [f1, f2, t1] = gadget_vars();
        let (f, t) = (f_var(), t_var());
        for target in [NotXAndY, Xor, Iff, TIff, FIff] {
            let gd = gadget_for(target);
            let s = attach_gadget(&gd, &base).unwrap().unwrap();
            for (a, b) in [(&f, &f1), (&f, &f2), (&t, &t1)] {
                let eq = BoolFn::from_fn(&[a.clone(), b.clone()], |v| v[0] == v[1]).unwrap();
                assert!(implies_exact(&s, &eq, &lim()).unwrap(), "{target} {a} {b}");
            }
            // consistent with f = 0 and t = 1
            let all: BTreeMap<Var, bool> = [
                (&f, false),
                (&f1, false),
                (&f2, false),
                (&t, true),
                (&t1, true),
            ]
            .into_iter()
            .map(|(x, b)| (x.clone(), b))
            .collect();
            assert!(
                s.substitute(&all).apps().iter().all(|a| a.key().is_true()),
                "{target}"
            );
        }
        assert!(attach_gadget(&gadget_for(TOr), &base).unwrap().is_none());
    }

    #[test]
    fn direct_encodings_match_their_shapes() {
        let p = Graph::path(3);
        for target in GadgetTarget::ALL.into_iter().filter(|t| t.is_direct()) {
            let gd = gadget_for(target);
            let s = direct_encoding(&gd, &p).unwrap().unwrap();
            // the same shape written with the target constraint itself
            let c = gd.u.apps()[0].constraint().clone();
            let lead: Vec<&str> = match target {
                TNotXOrY | TOr => vec!["t"],
                FNotXOrY | FNand => vec!["f"],
                _ => vec![],
            };
            let mut want = InstanceSet::new(s.universe().to_vec());
            for (k, &(a, b)) in p.edges().iter().enumerate() {
                let pairs = if matches!(target, TOr | FNand) {
                    vec![[xv(a), xv(b)]]
                } else {
                    vec![[yv(k + 1), xv(a)], [yv(k + 1), xv(b)]]
                };
                for pr in pairs {
                    let vars: Vec<Var> = lead.iter().map(|n| var(n)).chain(pr).collect();
                    let refs: Vec<&Var> = vars.iter().collect();
                    want.insert(crate::instances::Application::on(&c, &refs).unwrap())
                        .unwrap();
                }
            }
            assert!(equivalent_exact(&s, &want, &lim()).unwrap(), "{target}");
        }
        assert!(direct_encoding(&gadget_for(Xor), &p).unwrap().is_none());
    }
}

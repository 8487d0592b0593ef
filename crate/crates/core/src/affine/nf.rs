use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::build_uf;
use crate::instances::{InstanceSet, Permutation};
use crate::{Error, Result, Var};

/// One parity class: all of `x` equal, all of `y` equal, and `x != y`.
///
/// The pair is unordered; `x` is the side holding the smallest variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct ClassPair {
    pub x: Vec<Var>,
    pub y: Vec<Var>,
}

impl ClassPair {
    fn new(mut x: Vec<Var>, mut y: Vec<Var>) -> Self {
        x.sort();
        y.sort();
        if !y.is_empty() && (x.is_empty() || y[0] < x[0]) {
            std::mem::swap(&mut x, &mut y);
        }
        ClassPair { x, y }
    }

    /// `(min, max)` of the side sizes.
    pub fn shape(&self) -> (usize, usize) {
        let (a, b) = (self.x.len(), self.y.len());
        (a.min(b), a.max(b))
    }

    fn least(&self) -> &Var {
        &self.x[0]
    }

    fn eval(&self, value: &impl Fn(&Var) -> bool) -> bool {
        let all = |s: &[Var], b: bool| s.iter().all(|v| value(v) == b);
        (all(&self.x, true) && all(&self.y, false)) || (all(&self.x, false) && all(&self.y, true))
    }
}

/// Forced-false variables, forced-true variables, and parity classes.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct NormalForm {
    pub zero: Vec<Var>,
    pub one: Vec<Var>,
    pub classes: Vec<ClassPair>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum AffineNormalForm {
    Unsat,
    Form(NormalForm),
}

impl NormalForm {
    fn canonical(mut zero: Vec<Var>, mut one: Vec<Var>, mut classes: Vec<ClassPair>) -> Self {
        zero.sort();
        one.sort();
        classes.sort_by(|a, b| {
            a.shape()
                .cmp(&b.shape())
                .then_with(|| a.least().cmp(b.least()))
        });
        NormalForm { zero, one, classes }
    }

    /// `|Z|`, `|O|`, and the sorted class shapes.
    pub fn signature(&self) -> (usize, usize, Vec<(usize, usize)>) {
        let mut shapes: Vec<(usize, usize)> = self.classes.iter().map(ClassPair::shape).collect();
        shapes.sort();
        (self.zero.len(), self.one.len(), shapes)
    }
}

impl AffineNormalForm {
    /// Value of the denoted formula.
    pub fn eval(&self, value: impl Fn(&Var) -> bool) -> bool {
        match self {
            AffineNormalForm::Unsat => false,
            AffineNormalForm::Form(f) => {
                f.zero.iter().all(|v| !value(v))
                    && f.one.iter().all(&value)
                    && f.classes.iter().all(|c| c.eval(&value))
            }
        }
    }

    /// Renames every variable and restores canonical order.
    pub fn rename(&self, f: impl Fn(&Var) -> Var) -> AffineNormalForm {
        match self {
            AffineNormalForm::Unsat => AffineNormalForm::Unsat,
            AffineNormalForm::Form(nf) => {
                let map = |s: &[Var]| s.iter().map(&f).collect::<Vec<_>>();
                AffineNormalForm::Form(NormalForm::canonical(
                    map(&nf.zero),
                    map(&nf.one),
                    nf.classes
                        .iter()
                        .map(|c| ClassPair::new(map(&c.x), map(&c.y)))
                        .collect(),
                ))
            }
        }
    }

    /// The set of unordered class pairs, ignoring which side is listed first.
    pub fn class_set(&self) -> Vec<(Vec<Var>, Vec<Var>)> {
        match self {
            AffineNormalForm::Unsat => Vec::new(),
            AffineNormalForm::Form(nf) => {
                let mut v: Vec<(Vec<Var>, Vec<Var>)> = nf
                    .classes
                    .iter()
                    .map(|c| {
                        if c.x <= c.y || c.y.is_empty() {
                            (c.x.clone(), c.y.clone())
                        } else {
                            (c.y.clone(), c.x.clone())
                        }
                    })
                    .collect();
                v.sort();
                v
            }
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, vs: &[Var], sep: &str) -> fmt::Result {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// `UNSAT`, or the lines `Z: ..`, `O: ..`, `CLASSES: {a,b|c} ..`.
impl fmt::Display for AffineNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nf = match self {
            AffineNormalForm::Unsat => return f.write_str("UNSAT"),
            AffineNormalForm::Form(nf) => nf,
        };
        f.write_str("Z:")?;
        for v in &nf.zero {
            write!(f, " {v}")?;
        }
        f.write_str("\nO:")?;
        for v in &nf.one {
            write!(f, " {v}")?;
        }
        f.write_str("\nCLASSES:")?;
        for c in &nf.classes {
            f.write_str(" {")?;
            join(f, &c.x, ",")?;
            f.write_str("|")?;
            join(f, &c.y, ",")?;
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// Normal form with pivots chosen as the smallest variable per class.
pub fn normal_form(s: &InstanceSet) -> Result<AffineNormalForm> {
    normal_form_with_pivot_order(s, s.universe())
}

/// Normal form with each class split around its first variable in `order`
/// (which must list the universe). Classes are still emitted canonically.
pub fn normal_form_with_pivot_order(s: &InstanceSet, order: &[Var]) -> Result<AffineNormalForm> {
    let Some(mut uf) = build_uf(s)? else {
        return Ok(AffineNormalForm::Unsat);
    };
    let xs = s.universe();
    let rank: BTreeMap<&Var, usize> = order.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if xs.iter().any(|x| !rank.contains_key(x)) {
        return Err(Error::NotAPermutation(
            "pivot order misses a variable".into(),
        ));
    }
    let (mut zero, mut one) = (Vec::new(), Vec::new());
    let mut comps: BTreeMap<usize, Vec<(usize, bool)>> = BTreeMap::new();
    for (i, x) in xs.iter().enumerate() {
        match uf.value(i) {
            Some(false) => zero.push(x.clone()),
            Some(true) => one.push(x.clone()),
            None => {
                let (r, p) = uf.find(i);
                comps.entry(r).or_default().push((i, p));
            }
        }
    }
    let classes = comps
        .into_values()
        .map(|members| {
            let &(_, pp) = members
                .iter()
                .min_by_key(|(i, _)| rank[&xs[*i]])
                .expect("non-empty class");
            let (same, anti): (Vec<_>, Vec<_>) = members.iter().partition(|(_, p)| *p == pp);
            let names = |v: Vec<&(usize, bool)>| v.iter().map(|(i, _)| xs[*i].clone()).collect();
            let mut c = ClassPair::new(names(same), names(anti));
            // keep the pivot's side first within the pair
            let pivot = members
                .iter()
                .map(|(i, _)| &xs[*i])
                .min_by_key(|v| rank[v])
                .expect("non-empty class");
            if !c.x.contains(pivot) {
                std::mem::swap(&mut c.x, &mut c.y);
            }
            c
        })
        .collect();
    Ok(AffineNormalForm::Form(NormalForm::canonical(
        zero, one, classes,
    )))
}

/// Isomorphism of 2-affine instances by normal-form signatures.
pub fn iso_2affine(s: &InstanceSet, u: &InstanceSet) -> Result<bool> {
    if s.universe() != u.universe() {
        return Err(Error::UniverseMismatch);
    }
    Ok(match (normal_form(s)?, normal_form(u)?) {
        (AffineNormalForm::Unsat, AffineNormalForm::Unsat) => true,
        (AffineNormalForm::Form(a), AffineNormalForm::Form(b)) => a.signature() == b.signature(),
        _ => false,
    })
}

/// A witness for [`iso_2affine`], matching classes of equal shape in
/// canonical order.
pub fn iso_2affine_witness(s: &InstanceSet, u: &InstanceSet) -> Result<Option<Permutation>> {
    if !iso_2affine(s, u)? {
        return Ok(None);
    }
    let (a, b) = match (normal_form(s)?, normal_form(u)?) {
        (AffineNormalForm::Form(a), AffineNormalForm::Form(b)) => (a, b),
        _ => return Ok(Some(Permutation::identity(s.universe()))),
    };
    let mut pairs: Vec<(Var, Var)> = Vec::new();
    let mut link = |p: &[Var], q: &[Var]| pairs.extend(p.iter().cloned().zip(q.iter().cloned()));
    link(&a.zero, &b.zero);
    link(&a.one, &b.one);
    let mut pool: BTreeMap<(usize, usize), Vec<&ClassPair>> = BTreeMap::new();
    for c in &b.classes {
        pool.entry(c.shape()).or_default().push(c);
    }
    for c in &a.classes {
        let d = pool
            .get_mut(&c.shape())
            .and_then(|v| (!v.is_empty()).then(|| v.remove(0)))
            .expect("signatures match");
        if c.x.len() == d.x.len() {
            link(&c.x, &d.x);
            link(&c.y, &d.y);
        } else {
            link(&c.x, &d.y);
            link(&c.y, &d.x);
        }
    }
    Ok(Some(Permutation::new(pairs)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::testutil::inst;
    use crate::instances::{brute_force_iso, count_sat, Application, Arg};
    use crate::{builtin, v, Limits};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn examples() {
        let s = inst(&["x"], &[("id", &["x"]), ("neg", &["x"])]);
        assert_eq!(normal_form(&s).unwrap().to_string(), "UNSAT");

        let s = inst(
            &["x", "y", "z", "u", "v", "w"],
            &[
                ("xor2", &["x", "y"]),
                ("xnor2", &["y", "z"]),
                ("id", &["u"]),
                ("neg", &["v"]),
            ],
        );
        let nf = normal_form(&s).unwrap();
        assert_eq!(nf.to_string(), "Z: v\nO: u\nCLASSES: {w|} {x|y,z}");
        let AffineNormalForm::Form(f) = &nf else {
            panic!()
        };
        assert_eq!(f.classes[1].x, vec![v("x")]);

        let s = inst(&["x"], &[]);
        assert_eq!(
            normal_form(&s).unwrap().to_string(),
            "Z:\nO:\nCLASSES: {x|}"
        );
    }

    #[test]
    fn iso_examples() {
        let xy = ["x", "y"];
        let s = inst(&xy, &[("xor2", &["x", "y"])]);
        let u = inst(&xy, &[("xnor2", &["x", "y"])]);
        assert!(!iso_2affine(&s, &u).unwrap());

        let xyz = ["x", "y", "z"];
        let s = inst(&xyz, &[("xor2", &["x", "y"]), ("id", &["z"])]);
        let u = inst(&xyz, &[("xor2", &["y", "z"]), ("id", &["x"])]);
        assert!(iso_2affine(&s, &u).unwrap());
        let p = iso_2affine_witness(&s, &u).unwrap().unwrap();
        let lim = Limits::default();
        assert!(crate::instances::equivalent(&s.apply_permutation(&p).unwrap(), &u, &lim).unwrap());

        let bad = inst(&["x"], &[("id", &["x"]), ("neg", &["x"])]);
        let bad2 = inst(&["x"], &[("xor2", &["x", "x"])]);
        assert!(iso_2affine(&bad, &bad2).unwrap());
    }

    #[test]
    fn rejects_non_two_affine() {
        let s = inst(&["x", "y"], &[("or0", &["x", "y"])]);
        assert!(matches!(normal_form(&s), Err(Error::NotTwoAffine(_))));
    }

    pub(crate) fn random_2affine(rng: &mut ChaCha8Rng, n: usize, m: usize) -> InstanceSet {
        let xs: Vec<Var> = (1..=n).map(|i| v(&format!("x{i}"))).collect();
        let cs: Vec<Arc<crate::Constraint>> = ["id", "neg", "xor2", "xnor2"]
            .iter()
            .map(|c| Arc::new(builtin(c).unwrap()))
            .collect();
        let mut s = InstanceSet::new(xs.clone());
        for _ in 0..m {
            let c = cs.choose(rng).unwrap().clone();
            let args = (0..c.arity())
                .map(|_| Arg::Var(xs[rng.gen_range(0..n)].clone()))
                .collect();
            s.insert(Application::new(c, args).unwrap()).unwrap();
        }
        s
    }

    #[test]
    fn denotes_the_instance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(0..=6);
            let s = random_2affine(&mut rng, n, m);
            let nf = normal_form(&s).unwrap();
            for a in 0u32..1 << n {
                let val = |x: &Var| (a >> s.var_index(x).unwrap()) & 1 == 1;
                let sat = s.apps().iter().all(|app| app.key().eval(val));
                assert_eq!(nf.eval(val), sat, "{s:?} {nf}");
            }
        }
    }

    #[test]
    fn forced_sets_match_substitution() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lim = Limits::default();
        for _ in 0..300 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(0..=5);
            let s = random_2affine(&mut rng, n, m);
            let AffineNormalForm::Form(nf) = normal_form(&s).unwrap() else {
                continue;
            };
            for x in s.universe() {
                let kills = |b: bool| {
                    count_sat(&s.substitute(&[(x.clone(), b)].into()), &lim).unwrap() == 0
                };
                assert_eq!(nf.zero.contains(x), kills(true));
                assert_eq!(nf.one.contains(x), kills(false));
            }
        }
    }

    #[test]
    fn pivot_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7);
            let m = rng.gen_range(0..=7);
            let s = random_2affine(&mut rng, n, m);
            let mut rev = s.universe().to_vec();
            rev.reverse();
            let a = normal_form(&s).unwrap();
            let b = normal_form_with_pivot_order(&s, &rev).unwrap();
            assert_eq!(a.class_set(), b.class_set());
        }
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let lim = Limits::default();
        for _ in 0..400 {
            let n = rng.gen_range(1..=6);
            let (m1, m2) = (rng.gen_range(0..=5), rng.gen_range(0..=5));
            let s = random_2affine(&mut rng, n, m1);
            let u = random_2affine(&mut rng, n, m2);
            let want = brute_force_iso(&s, &u, &lim).unwrap().is_some();
            assert_eq!(iso_2affine(&s, &u).unwrap(), want, "{s:?} vs {u:?}");
            let w = iso_2affine_witness(&s, &u).unwrap();
            if let Some(p) = w {
                assert!(
                    crate::instances::equivalent(&s.apply_permutation(&p).unwrap(), &u, &lim)
                        .unwrap()
                );
            }
        }
    }

    #[test]
    fn permutation_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7);
            let m = rng.gen_range(0..=7);
            let s = random_2affine(&mut rng, n, m);
            let mut img: Vec<Var> = s.universe().to_vec();
            img.shuffle(&mut rng);
            let p = Permutation::new(s.universe().iter().cloned().zip(img)).unwrap();
            let lhs = normal_form(&s.apply_permutation(&p).unwrap()).unwrap();
            let rhs = normal_form(&s).unwrap().rename(|x| p.image(x).clone());
            assert_eq!(lhs, rhs);
        }
    }
}

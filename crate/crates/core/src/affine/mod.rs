//! Width-two XOR clauses, the 2-affine normal form, and the polynomial
//! isomorphism test built on it.

mod nf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use nf::{
    iso_2affine, iso_2affine_witness, normal_form, normal_form_with_pivot_order, AffineNormalForm,
    ClassPair, NormalForm,
};

use crate::instances::InstanceSet;
use crate::{Error, Result, Var};

/// A unary literal or a two-variable parity constraint.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum XorClause {
    /// `var` when `positive`, else its negation.
    Unary { var: Var, positive: bool },
    /// `a ^ b` when `parity`, else `!(a ^ b)`; always `a < b`.
    Binary { a: Var, b: Var, parity: bool },
}

impl XorClause {
    pub fn unary(var: Var, positive: bool) -> Self {
        XorClause::Unary { var, positive }
    }

    pub fn binary(a: Var, b: Var, parity: bool) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(XorClause::Binary { a, b, parity }),
            std::cmp::Ordering::Greater => Ok(XorClause::Binary { a: b, b: a, parity }),
            std::cmp::Ordering::Equal => Err(Error::InvalidVariable(format!(
                "binary clause on `{a}` twice"
            ))),
        }
    }

    pub fn eval(&self, value: impl Fn(&Var) -> bool) -> bool {
        match self {
            XorClause::Unary { var, positive } => value(var) == *positive,
            XorClause::Binary { a, b, parity } => (value(a) ^ value(b)) == *parity,
        }
    }
}

impl fmt::Display for XorClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XorClause::Unary {
                var,
                positive: true,
            } => write!(f, "{var}"),
            XorClause::Unary {
                var,
                positive: false,
            } => write!(f, "~{var}"),
            XorClause::Binary { a, b, parity: true } => write!(f, "{a}^{b}"),
            XorClause::Binary {
                a,
                b,
                parity: false,
            } => write!(f, "~({a}^{b})"),
        }
    }
}

/// Outcome of [`xor_clause_closure`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum XorClosure {
    Unsat,
    Clauses(BTreeSet<XorClause>),
}

/// Union-find over variable indices with the parity to the parent and an
/// optional forced value per root.
pub(crate) struct ParityUf {
    parent: Vec<usize>,
    parity: Vec<bool>,
    forced: Vec<Option<bool>>,
}

impl ParityUf {
    pub fn new(n: usize) -> Self {
        ParityUf {
            parent: (0..n).collect(),
            parity: vec![false; n],
            forced: vec![None; n],
        }
    }

    /// Root of `x` and the parity of `x` relative to it.
    pub fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (r, pp) = self.find(p);
        self.parent[x] = r;
        self.parity[x] ^= pp;
        (r, self.parity[x])
    }

    /// Value of `x` if determined.
    pub fn value(&mut self, x: usize) -> Option<bool> {
        let (r, p) = self.find(x);
        self.forced[r].map(|v| v ^ p)
    }

    /// Records `x == value`; false on contradiction.
    pub fn force(&mut self, x: usize, value: bool) -> bool {
        let (r, p) = self.find(x);
        let want = value ^ p;
        match self.forced[r] {
            Some(v) => v == want,
            None => {
                self.forced[r] = Some(want);
                true
            }
        }
    }

    /// Records `x ^ y == parity`; false on contradiction.
    pub fn union(&mut self, x: usize, y: usize, parity: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return (px ^ py) == parity;
        }
        let rel = px ^ py ^ parity;
        // attach the larger index under the smaller so roots stay minimal
        let (root, child) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[child] = root;
        self.parity[child] = rel;
        match (self.forced[root], self.forced[child]) {
            (Some(a), Some(b)) => a == b ^ rel,
            (None, Some(b)) => {
                self.forced[root] = Some(b ^ rel);
                true
            }
            _ => true,
        }
    }
}

/// Feeds every application's unary and binary consequences into a parity
/// union-find. `None` means unsatisfiable.
pub(crate) fn build_uf(s: &InstanceSet) -> Result<Option<ParityUf>> {
    for a in s.apps() {
        if !a.constraint().properties().two_affine {
            return Err(Error::NotTwoAffine(a.constraint().name().to_string()));
        }
    }
    let mut uf = ParityUf::new(s.universe().len());
    for a in s.apps() {
        let key = a.key();
        let t = key.table();
        let idx: Vec<usize> = key
            .vars()
            .iter()
            .map(|x| s.var_index(x).expect("variable in universe"))
            .collect();
        let models: Vec<usize> = t.models().collect();
        if models.is_empty() {
            return Ok(None);
        }
        let bit = |r: usize, p: usize| r & t.position_bit(p) != 0;
        for p in 0..idx.len() {
            let v0 = bit(models[0], p);
            if models.iter().all(|&r| bit(r, p) == v0) && !uf.force(idx[p], v0) {
                return Ok(None);
            }
            for q in p + 1..idx.len() {
                let d0 = bit(models[0], p) ^ bit(models[0], q);
                if models.iter().all(|&r| (bit(r, p) ^ bit(r, q)) == d0)
                    && !uf.union(idx[p], idx[q], d0)
                {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(uf))
}

/// All unary and binary XOR clauses implied by a 2-affine instance.
///
/// Reflexive clauses `!(x ^ x)` are implicit and not listed.
pub fn xor_clause_closure(s: &InstanceSet) -> Result<XorClosure> {
    let Some(mut uf) = build_uf(s)? else {
        return Ok(XorClosure::Unsat);
    };
    let xs = s.universe();
    let n = xs.len();
    let mut out = BTreeSet::new();
    let info: Vec<(usize, bool, Option<bool>)> = (0..n)
        .map(|i| {
            let (r, p) = uf.find(i);
            (r, p, uf.value(i))
        })
        .collect();
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(r, _, val)) in info.iter().enumerate() {
        if let Some(v) = val {
            out.insert(XorClause::unary(xs[i].clone(), v));
        }
        by_root.entry(r).or_default().push(i);
    }
    for i in 0..n {
        for j in i + 1..n {
            let (ri, pi, vi) = info[i];
            let (rj, pj, vj) = info[j];
            let parity = if ri == rj {
                Some(pi ^ pj)
            } else {
                vi.zip(vj).map(|(a, b)| a ^ b)
            };
            if let Some(p) = parity {
                out.insert(XorClause::binary(xs[i].clone(), xs[j].clone(), p)?);
            }
        }
    }
    Ok(XorClosure::Clauses(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::testutil::inst;
    use crate::v;

    fn clauses(c: XorClosure) -> Vec<String> {
        match c {
            XorClosure::Unsat => vec!["UNSAT".into()],
            XorClosure::Clauses(s) => s.iter().map(|c| c.to_string()).collect(),
        }
    }

    #[test]
    fn closure_examples() {
        let s = inst(
            &["x", "y", "z"],
            &[("xor2", &["x", "y"]), ("xor2", &["y", "z"])],
        );
        assert_eq!(
            clauses(xor_clause_closure(&s).unwrap()),
            ["x^y", "~(x^z)", "y^z"]
        );
        let s = inst(&["x"], &[("id", &["x"]), ("neg", &["x"])]);
        assert_eq!(xor_clause_closure(&s).unwrap(), XorClosure::Unsat);
        let s = inst(&["x", "y"], &[("xnor2", &["x", "y"])]);
        assert_eq!(clauses(xor_clause_closure(&s).unwrap()), ["~(x^y)"]);
    }

    #[test]
    fn forced_pairs_get_parities() {
        let s = inst(&["a", "b"], &[("id", &["a"]), ("neg", &["b"])]);
        assert_eq!(clauses(xor_clause_closure(&s).unwrap()), ["a", "~b", "a^b"]);
    }

    #[test]
    fn rejects_non_two_affine() {
        let s = inst(&["x", "y"], &[("or0", &["x", "y"])]);
        assert_eq!(
            xor_clause_closure(&s),
            Err(Error::NotTwoAffine("or0".into()))
        );
    }

    #[test]
    fn constants_fold_into_unaries() {
        let s = inst(&["x"], &[("xor2", &["x", "1"])]);
        assert_eq!(clauses(xor_clause_closure(&s).unwrap()), ["~x"]);
        assert!(XorClause::binary(v("x"), v("x"), true).is_err());
    }
}

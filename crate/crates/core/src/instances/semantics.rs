use super::{BoolFn, Engine, InstanceSet};
use crate::boolfun::TruthTable;
use crate::{Error, Limits, Result, Var};

/// One application over universe indices (ascending).
#[derive(Clone, Debug)]
pub(crate) struct Con {
    pub vars: Vec<u32>,
    pub table: TruthTable,
    /// Satisfying rows of `table`.
    pub rows: Vec<u32>,
}

impl Con {
    pub fn new(vars: Vec<u32>, table: TruthTable) -> Self {
        let rows = table.models().map(|r| r as u32).collect();
        Con { vars, table, rows }
    }

    #[inline]
    pub fn row_of(vars: &[u32], a: u128) -> usize {
        let k = vars.len();
        let mut row = 0usize;
        for (j, &x) in vars.iter().enumerate() {
            row |= (((a >> x) & 1) as usize) << (k - 1 - j);
        }
        row
    }

    #[inline]
    pub fn eval(&self, a: u128) -> bool {
        self.table.get(Self::row_of(&self.vars, a))
    }
}

/// An instance over variable indices `0..n`; bit `i` of an assignment is
/// the value of the `i`-th universe variable.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub n: usize,
    pub cons: Vec<Con>,
}

impl Compiled {
    pub fn new(s: &InstanceSet) -> Self {
        Self::from_keys(s.universe(), s.apps().iter().map(|a| a.key()))
    }

    pub fn from_keys<'a>(universe: &[Var], keys: impl IntoIterator<Item = &'a BoolFn>) -> Self {
        assert!(
            universe.len() <= 128,
            "compiled universes hold at most 128 variables"
        );
        let cons = keys
            .into_iter()
            .map(|k| Con::new(index_vars(universe, k.vars()), k.table().clone()))
            .collect();
        Compiled {
            n: universe.len(),
            cons,
        }
    }

    pub fn eval(&self, a: u128) -> bool {
        self.cons.iter().all(|c| c.eval(a))
    }

    /// Buckets constraints under their lowest variable, or `None` if a
    /// constant-false constraint is present.
    fn buckets(&self) -> Option<Vec<Vec<&Con>>> {
        let mut bucket: Vec<Vec<&Con>> = vec![Vec::new(); self.n];
        for c in &self.cons {
            match c.vars.first() {
                Some(&lo) => bucket[lo as usize].push(c),
                None if c.table.get(0) => {}
                None => return None,
            }
        }
        Some(bucket)
    }

    /// Calls `f` on each model in increasing order; stops when it returns false.
    ///
    /// Variables are assigned from the highest index down, so a constraint
    /// is checked as soon as its lowest variable is set.
    pub fn for_each_model(&self, mut f: impl FnMut(u128) -> bool) {
        let Some(bucket) = self.buckets() else {
            return;
        };
        fn rec(x: usize, bucket: &[Vec<&Con>], a: u128, f: &mut dyn FnMut(u128) -> bool) -> bool {
            if x == 0 {
                return f(a);
            }
            let x = x - 1;
            for b in [0u128, 1] {
                let a2 = a | (b << x);
                if bucket[x].iter().all(|c| c.eval(a2)) && !rec(x, bucket, a2, f) {
                    return false;
                }
            }
            true
        }
        rec(self.n, &bucket, 0, &mut f);
    }

    /// Number of models; variables below every constraint are counted in
    /// closed form.
    pub fn count(&self) -> u128 {
        let Some(bucket) = self.buckets() else {
            return 0;
        };
        let lowest = (0..self.n)
            .find(|&x| !bucket[x].is_empty())
            .unwrap_or(self.n);
        assert!(lowest < 128, "count overflows");
        fn rec(x: usize, stop: usize, bucket: &[Vec<&Con>], a: u128) -> u128 {
            if x == stop {
                return 1;
            }
            let x = x - 1;
            let mut total = 0;
            for b in [0u128, 1] {
                let a2 = a | (b << x);
                if bucket[x].iter().all(|c| c.eval(a2)) {
                    total += rec(x, stop, bucket, a2);
                }
            }
            total
        }
        rec(self.n, lowest, &bucket, 0) << lowest
    }
}

pub(crate) fn index_vars(universe: &[Var], vars: &[Var]) -> Vec<u32> {
    vars.iter()
        .map(|x| universe.binary_search(x).expect("variable in universe") as u32)
        .collect()
}

/// Number of assignments to the whole universe satisfying every application.
pub fn count_sat(s: &InstanceSet, limits: &Limits) -> Result<u128> {
    Limits::check("count_sat universe", s.universe().len(), limits.max_vars)?;
    Ok(Compiled::new(s).count())
}

/// All models, as bitmasks with bit `i` for `universe[i]`, in increasing order.
pub fn models(s: &InstanceSet, limits: &Limits) -> Result<Vec<u128>> {
    Limits::check(
        "model enumeration universe",
        s.universe().len(),
        limits.max_vars,
    )?;
    let mut out = Vec::new();
    Compiled::new(s).for_each_model(|a| {
        out.push(a);
        true
    });
    Ok(out)
}

/// Logical equivalence by model enumeration.
pub fn equivalent(s: &InstanceSet, u: &InstanceSet, limits: &Limits) -> Result<bool> {
    if s.universe() != u.universe() {
        return Err(Error::UniverseMismatch);
    }
    Limits::check("equivalence universe", s.universe().len(), limits.max_vars)?;
    let cs = Compiled::new(s);
    let cu = Compiled::new(u);
    if cs.count() != cu.count() {
        return Ok(false);
    }
    let mut same = true;
    cs.for_each_model(|a| {
        same = cu.eval(a);
        same
    });
    Ok(same)
}

/// Logical equivalence by exact implication checks in both directions.
///
/// Scales to the closure guard instead of the enumeration guard.
pub fn equivalent_exact(s: &InstanceSet, u: &InstanceSet, limits: &Limits) -> Result<bool> {
    if s.universe() != u.universe() {
        return Err(Error::UniverseMismatch);
    }
    Limits::check(
        "equivalence universe",
        s.universe().len(),
        limits.max_closure_vars.min(128),
    )?;
    let cs = Compiled::new(s);
    let cu = Compiled::new(u);
    Ok(entails_all(&cs, &cu) && entails_all(&cu, &cs))
}

fn entails_all(a: &Compiled, b: &Compiled) -> bool {
    let mut e = Engine::new(a.clone(), 0);
    b.cons.iter().all(|c| e.implies(&c.vars, &c.table))
}

/// Whether every model of `s` satisfies `f`.
pub fn implies_exact(s: &InstanceSet, f: &BoolFn, limits: &Limits) -> Result<bool> {
    Limits::check(
        "implication universe",
        s.universe().len(),
        limits.max_closure_vars.min(128),
    )?;
    if let Some(x) = f.vars().iter().find(|x| !s.contains_var(x)) {
        return Err(Error::UnknownVariable(x.clone()));
    }
    let mut e = Engine::new(Compiled::new(s), 0);
    Ok(e.implies(&index_vars(s.universe(), f.vars()), f.table()))
}

pub fn is_satisfiable(s: &InstanceSet, limits: &Limits) -> Result<bool> {
    Limits::check(
        "satisfiability universe",
        s.universe().len(),
        limits.max_closure_vars.min(128),
    )?;
    Ok(Engine::new(Compiled::new(s), 0).is_sat())
}

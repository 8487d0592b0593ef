use std::collections::BTreeMap;
use std::fmt::Write;
use std::fs;
use std::path::Path;

use cspiso_core::affine::{iso_2affine_witness, normal_form, AffineNormalForm};
use cspiso_core::formats::{
    parse_constraints, parse_graph, parse_instance, print_graph, print_instance,
};
use cspiso_core::gi::{
    canonical_form, form_vars, preprocess_pair, reduce_gi_to_iso, GadgetTarget, Graph,
    Preprocessed, ReduceOptions, Reduction,
};
use cspiso_core::instances::{
    align, brute_force_iso, guided_iso, realize, BoolFn, InstanceSet, Permutation,
};
use cspiso_core::{builtin_set, classify_trichotomy, ConstraintSet, Error, Limits, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{Cli, Command, Global};

pub struct Output {
    pub text: String,
    pub code: u8,
}

#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_guard() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: cspiso_core::Result<T>) -> Res<T> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn limits(g: &Global) -> Limits {
    let mut l = Limits::default();
    if let Some(n) = g.max_vars {
        l.max_vars = n as usize;
    }
    if let Some(n) = g.max_perm_vars {
        l.max_perm_vars = n as usize;
    }
    l
}

fn constraints(g: &Global) -> Res<ConstraintSet> {
    let spec = g
        .constraints
        .as_deref()
        .ok_or_else(|| usage("missing -c <constraints-file|builtin:name[,name...]>"))?;
    match spec.strip_prefix("builtin:") {
        Some(names) => {
            let names: Vec<&str> = names.split(',').filter(|n| !n.is_empty()).collect();
            Ok(builtin_set(&names)?)
        }
        None => {
            let p = Path::new(spec);
            with_path(p, parse_constraints(&read(p)?))
        }
    }
}

fn instance(path: &Path, cs: &ConstraintSet, constants: bool) -> Res<InstanceSet> {
    with_path(path, parse_instance(&read(path)?, cs, constants))
}

fn graph(path: &Path) -> Res<Graph> {
    with_path(path, parse_graph(&read(path)?))
}

fn done(text: String, code: u8) -> Res<Output> {
    Ok(Output { text, code })
}

fn json_line(v: serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
}

pub fn run(cli: &Cli) -> Res<Output> {
    let g = &cli.global;
    let lim = limits(g);
    match &cli.command {
        Command::Classify => classify(g),
        Command::Iso {
            a,
            b,
            constants,
            force_brute,
            guided,
            cross_check,
        } => iso(
            g,
            &lim,
            a,
            b,
            *constants,
            *force_brute,
            *guided,
            *cross_check,
        ),
        Command::Nf { input } => nf(g, input),
        Command::Reduce {
            g: gp,
            h,
            out,
            substitute_fixed_pair,
        } => reduce(g, &lim, gp, h, out.as_deref(), *substitute_fixed_pair),
        Command::Realize { target, constants } => realize_cmd(g, &lim, target, *constants),
        Command::Preprocess { g: gp, h, out } => preprocess(g, gp, h, out.as_deref()),
        Command::Selfcheck { trials } => selfcheck(g, &lim, *trials),
    }
}

fn classify(g: &Global) -> Res<Output> {
    let cs = constraints(g)?;
    let class = classify_trichotomy(&cs)?;
    if g.json {
        let props: BTreeMap<&str, _> = cs.iter().map(|c| (c.name(), *c.properties())).collect();
        return done(json_line(json!({ "class": class, "properties": props })), 0);
    }
    done(format!("{class}\n"), 0)
}

fn perm_json(p: &Permutation) -> serde_json::Value {
    let m: BTreeMap<String, String> = p
        .pairs()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    json!(m)
}

#[allow(clippy::too_many_arguments)]
fn iso(
    g: &Global,
    lim: &Limits,
    a: &Path,
    b: &Path,
    constants: bool,
    force_brute: bool,
    guided: bool,
    cross_check: bool,
) -> Res<Output> {
    let cs = constraints(g)?;
    let (s, u) = align(&instance(a, &cs, constants)?, &instance(b, &cs, constants)?);
    let two_affine =
        cs.iter().all(|c| c.properties().two_affine) && !s.has_constants() && !u.has_constants();
    let method = if force_brute {
        "brute-force"
    } else if guided {
        "guided"
    } else if two_affine {
        "normal-form"
    } else {
        "brute-force"
    };
    let decide = |m: &str| -> Res<Option<Permutation>> {
        Ok(match m {
            "normal-form" => iso_2affine_witness(&s, &u)?,
            "guided" => guided_iso(&s, &u, lim)?,
            _ => brute_force_iso(&s, &u, lim)?,
        })
    };
    let found = decide(method)?;
    let mut checked = Vec::new();
    if cross_check {
        let mut others = vec!["brute-force", "guided"];
        if two_affine {
            others.push("normal-form");
        }
        for m in others.into_iter().filter(|&m| m != method) {
            match decide(m) {
                Ok(r) if r.is_some() != found.is_some() => {
                    return Err(usage(format!("deciders disagree: {method} vs {m}")))
                }
                Ok(_) => checked.push(m),
                // a guard on a secondary decider only skips it
                Err(f) if f.code == 3 => {}
                Err(f) => return Err(f),
            }
        }
    }
    let code = if found.is_some() { 0 } else { 1 };
    if g.json {
        return done(
            json_line(json!({
                "isomorphic": found.is_some(),
                "method": method,
                "permutation": found.as_ref().map(perm_json),
                "cross_checked": checked,
            })),
            code,
        );
    }
    let mut text = String::new();
    match &found {
        Some(p) => writeln!(text, "ISO\n{p}").unwrap(),
        None => writeln!(text, "NON-ISO").unwrap(),
    }
    writeln!(text, "method: {method}").unwrap();
    if cross_check {
        writeln!(text, "cross-checked: {}", checked.join(", ")).unwrap();
    }
    done(text, code)
}

fn nf(g: &Global, input: &Path) -> Res<Output> {
    let cs = constraints(g)?;
    let s = instance(input, &cs, false)?;
    let form = with_path(input, normal_form(&s))?;
    if g.json {
        let v = match &form {
            AffineNormalForm::Unsat => json!("UNSAT"),
            AffineNormalForm::Form(f) => json!(f),
        };
        return done(json_line(v), 0);
    }
    done(format!("{form}\n"), 0)
}

fn reduce(
    g: &Global,
    lim: &Limits,
    gp: &Path,
    hp: &Path,
    out: Option<&Path>,
    substitute_fixed_pair: bool,
) -> Res<Output> {
    let cs = constraints(g)?;
    let (gg, hh) = (graph(gp)?, graph(hp)?);
    let r = reduce_gi_to_iso(
        &cs,
        &gg,
        &hh,
        ReduceOptions {
            substitute_fixed_pair,
        },
        lim,
    )?;
    let o = match r {
        Reduction::NotIsomorphic(why) => {
            let text = if g.json {
                json_line(json!({ "not_isomorphic": why }))
            } else {
                format!("NOT-ISOMORPHIC {why:?}\n")
            };
            return done(text, 1);
        }
        Reduction::Output(o) => o,
    };
    let transcript = serde_json::to_string_pretty(&o.transcript).expect("json") + "\n";
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
        write(&dir.join("left.inst"), &print_instance(&o.left))?;
        write(&dir.join("right.inst"), &print_instance(&o.right))?;
        write(&dir.join("transcript.json"), &transcript)?;
    }
    if g.json {
        return done(transcript, 0);
    }
    let t = &o.transcript;
    let mut text = String::new();
    writeln!(text, "class: {}", t.class).unwrap();
    if let Some(i) = t.form {
        writeln!(text, "form: {i}").unwrap();
    }
    writeln!(text, "gadget: {} ({:?})", t.gadget_target, t.gadget_use).unwrap();
    writeln!(
        text,
        "variables: {}, applications: {} / {}",
        t.left_vars, t.left_apps, t.right_apps
    )
    .unwrap();
    if out.is_none() {
        text.push_str("--- left\n");
        text.push_str(&print_instance(&o.left));
        text.push_str("--- right\n");
        text.push_str(&print_instance(&o.right));
    }
    done(text, 0)
}

fn target_fn(cs: &ConstraintSet, name: &str) -> Res<(Vec<Var>, BoolFn)> {
    if let Some(i) = name.strip_prefix("form").and_then(|d| d.parse::<u8>().ok()) {
        return Ok((form_vars(i)?, canonical_form(i)?));
    }
    if let Some(t) = GadgetTarget::ALL.into_iter().find(|t| t.name() == name) {
        return Ok((t.template_vars(), t.function()));
    }
    let c = cs
        .get(name)
        .ok_or_else(|| usage(format!("unknown target `{name}`")))?;
    let vars: Vec<Var> = (1..=c.arity())
        .map(|i| Var::new(format!("x{i}")).expect("valid"))
        .collect();
    let f = BoolFn::new(vars.clone(), c.table().clone())?;
    Ok((vars, f))
}

fn realize_cmd(g: &Global, lim: &Limits, target: &str, constants: bool) -> Res<Output> {
    let cs = constraints(g)?;
    let (vars, f) = target_fn(&cs, target)?;
    let r = realize(&cs, &vars, &f, constants, lim)?;
    let code = if r.is_some() { 0 } else { 1 };
    if g.json {
        let apps: Option<Vec<String>> = r.map(|s| s.apps().iter().map(|a| a.to_string()).collect());
        return done(
            json_line(json!({ "target": target, "realization": apps })),
            code,
        );
    }
    match r {
        Some(s) => done(print_instance(&s), 0),
        None => done("NONE\n".into(), code),
    }
}

fn preprocess(g: &Global, gp: &Path, hp: &Path, out: Option<&Path>) -> Res<Output> {
    let (gg, hh) = (graph(gp)?, graph(hp)?);
    match preprocess_pair(&gg, &hh)? {
        Preprocessed::NotIsomorphic(why) => {
            let text = if g.json {
                json_line(json!({ "not_isomorphic": why }))
            } else {
                format!("NOT-ISOMORPHIC {why:?}\n")
            };
            done(text, 1)
        }
        Preprocessed::Pair {
            g: g3,
            h: h3,
            stats,
        } => {
            if let Some(dir) = out {
                fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
                write(&dir.join("g.graph"), &print_graph(&g3))?;
                write(&dir.join("h.graph"), &print_graph(&h3))?;
            }
            if g.json {
                return done(json_line(json!({ "stats": stats, "g": g3, "h": h3 })), 0);
            }
            let mut text = format!(
                "vertices {} -> {} -> {} -> {}\nedges {} -> {} -> {}\n",
                stats.n,
                stats.n_without_isolated,
                stats.n_with_apex,
                stats.n_subdivided,
                stats.m,
                stats.m_with_apex,
                stats.m_subdivided
            );
            if out.is_none() {
                text.push_str("--- g\n");
                text.push_str(&print_graph(&g3));
                text.push_str("--- h\n");
                text.push_str(&print_graph(&h3));
            }
            done(text, 0)
        }
    }
}

fn selfcheck(g: &Global, lim: &Limits, trials: usize) -> Res<Output> {
    let cs = builtin_set(&["id", "neg", "xor2", "xnor2"])?;
    let cons: Vec<_> = cs.iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let (mut iso, mut non) = (0usize, 0usize);
    for t in 0..trials {
        let n = rng.gen_range(1..=6);
        let vars: Vec<Var> = (1..=n)
            .map(|i| Var::new(format!("x{i}")).expect("valid"))
            .collect();
        let pick = |rng: &mut ChaCha8Rng| {
            let m = rng.gen_range(0..=2 * n);
            let mut s = InstanceSet::new(vars.clone());
            for _ in 0..m {
                let c = &cons[rng.gen_range(0..cons.len())];
                let args: Vec<&Var> = (0..c.arity()).map(|_| &vars[rng.gen_range(0..n)]).collect();
                s.insert(cspiso_core::instances::Application::on(c, &args).expect("arity"))
                    .expect("known variables");
            }
            s
        };
        let s = pick(&mut rng);
        let u = if rng.gen_bool(0.5) {
            let mut img = vars.clone();
            for i in (1..n).rev() {
                img.swap(i, rng.gen_range(0..=i));
            }
            s.apply_permutation(&Permutation::new(vars.iter().cloned().zip(img))?)?
        } else {
            pick(&mut rng)
        };
        let a = iso_2affine_witness(&s, &u)?.is_some();
        let b = brute_force_iso(&s, &u, lim)?.is_some();
        let c = guided_iso(&s, &u, lim)?.is_some();
        if a != b || b != c {
            return Err(usage(format!(
                "trial {t}: deciders disagree\n{}---\n{}",
                print_instance(&s),
                print_instance(&u)
            )));
        }
        if a {
            iso += 1
        } else {
            non += 1
        }
    }
    if g.json {
        return done(
            json_line(
                json!({ "seed": g.seed, "trials": trials, "isomorphic": iso, "non_isomorphic": non }),
            ),
            0,
        );
    }
    done(
        format!(
            "OK seed={} trials={trials} isomorphic={iso} non-isomorphic={non}\n",
            g.seed
        ),
        0,
    )
}

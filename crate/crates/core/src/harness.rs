//! Running programs and comparing inferred bounds with measured circuits.
//!
//! A program's `main` is checked once, symbolically. For each valuation of
//! its index parameters the main value is then "peeled": index
//! abstractions are instantiated, suspensions forced and functions applied
//! to fresh input wires, until a non-function result remains. The circuit
//! built along the way is measured with the profile's oracle and compared
//! with the bound read off the type.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::circuit::{oracle_depth, Bundle, Circuit, Label, WireType};
use crate::eval::{fresh_labels, EvalError, Machine};
use crate::index::{evaluate, free_vars, CheckStrategy, IndexError, IndexTerm, Valuation};
use crate::metrics::{builtin_profiles, MetricProfile};
use crate::prelude::checker_with_prelude;
use crate::syntax::ast::{subst_type, type_free_vars, type_size, Program, Scheme, Term, Type, Value};
use crate::syntax::parser::{parse_program, ParseError};
use crate::typeck::{ProgramTyping, TypeError};

/// A program shipped with the crate.
#[derive(Clone, Copy, Debug)]
pub struct CorpusProgram {
    pub name: &'static str,
    pub source: &'static str,
    /// Which profiles the program is written for.
    pub dialect: Dialect,
    /// Index parameters of `main`, outermost first.
    pub params: &'static [&'static str],
}

/// Programs without wire annotations check under both kinds of profile;
/// annotated ones only under the local profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    Global,
    Local,
    Both,
}

impl CorpusProgram {
    /// Every built-in profile this program is meant to be checked under.
    pub fn profiles(&self) -> Vec<&'static MetricProfile> {
        builtin_profiles()
            .iter()
            .filter(|p| match self.dialect {
                Dialect::Global => !p.is_local(),
                Dialect::Local => p.is_local(),
                Dialect::Both => true,
            })
            .collect()
    }
}

pub fn builtin_corpus() -> Vec<CorpusProgram> {
    use Dialect::{Both, Global, Local};
    macro_rules! prog {
        ($name:literal, $dialect:expr, [$($p:literal),*]) => {
            CorpusProgram {
                name: $name,
                source: include_str!(concat!("../corpus/", $name, ".pqr")),
                dialect: $dialect,
                params: &[$($p),*],
            }
        };
    }
    vec![
        prog!("teleport", Both, []),
        prog!("dumbNot", Both, []),
        prog!("iter_dumbNot", Global, ["n"]),
        prog!("iter_dumbNot_depth", Local, ["n", "i"]),
        prog!("mapHadamard", Global, ["n"]),
        prog!("mapHadamard_depth", Local, ["n", "i"]),
        prog!("qft", Global, ["n"]),
        prog!("qft_depth", Local, ["n", "i"]),
    ]
}

pub fn corpus_program(name: &str) -> Option<CorpusProgram> {
    builtin_corpus().into_iter().find(|p| p.name == name)
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Type(#[from] TypeError),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("cannot evaluate bound: {0}")]
    Index(#[from] IndexError),
    #[error("no value given for index parameter `{0}`")]
    MissingParameter(String),
    #[error("result bundle does not match its type")]
    Shape,
}

/// Parses and checks a source program under `p`.
pub fn check_source(src: &str, p: &MetricProfile, strategy: CheckStrategy) -> Result<(Program, ProgramTyping), HarnessError> {
    let program = parse_program(src)?;
    let typing = checker_with_prelude(p, strategy)?.check_program(&program)?;
    Ok((program, typing))
}

enum Step {
    Index(u64),
    Force,
    Apply(Type),
}

/// The outcome of running `main` under one valuation.
#[derive(Clone, Debug)]
pub struct Run {
    pub circuit: Circuit,
    pub result: Value,
    /// The bound the type promises for the whole run (global profiles).
    pub bound: u64,
    /// Per output label: the depth promised by the type and the depth
    /// actually reached (local profile only).
    pub label_depths: Vec<(Label, u64, u64)>,
}

fn eval_closed(t: &IndexTerm, val: &Valuation, p: &MetricProfile) -> Result<u64, IndexError> {
    // Annotation variables of generic functions default to depth 0.
    let mut v = val.clone();
    for x in free_vars(t) {
        v.entry(x).or_insert(0);
    }
    evaluate(t, &v, p)
}

/// Evaluates `main` under `val`, peeling it down to a first-order result.
pub fn run_main(program: &Program, typing: &ProgramTyping, p: &MetricProfile, val: &Valuation) -> Result<Run, HarnessError> {
    // Plan the peeling from the type alone.
    let mut steps = Vec::new();
    let mut effects = Vec::new();
    let mut ty = typing.main_type.clone();
    loop {
        match ty {
            Type::IndexAll(i, e, a) => {
                let n = *val.get(&i).ok_or_else(|| HarnessError::MissingParameter(i.clone()))?;
                let k = IndexTerm::Nat(n);
                effects.push(crate::index::substitute(&e, &k, &i));
                steps.push(Step::Index(n));
                ty = subst_type(&a, &k, &i);
            }
            Type::Bang(e, a) => {
                effects.push(e);
                steps.push(Step::Force);
                ty = *a;
            }
            Type::Arrow(f) => {
                effects.push(f.effect.clone());
                steps.push(Step::Apply(f.dom.clone()));
                ty = f.cod.clone();
            }
            _ => break,
        }
    }
    let result_type = ty;

    // Allocate every input up front, then evaluate.
    let mut circuit = Circuit::empty();
    let mut args = Vec::new();
    let mut in_depths = HashMap::new();
    for s in &steps {
        if let Step::Apply(dom) = s {
            let b = fresh_labels(dom, &mut |w| circuit.add_input(w))?;
            if p.is_local() {
                for (l, ann) in leaf_annotations(dom, &b)? {
                    in_depths.insert(l, ann.map(|a| eval_closed(&a, val, p)).transpose()?.unwrap_or(0));
                }
            }
            args.push(b);
        }
    }
    let mut machine = Machine::new(circuit, p.is_local());
    let main = program.to_term();
    let mut v = machine.eval(&main)?;
    let mut args = args.into_iter();
    for s in &steps {
        v = match s {
            Step::Index(n) => machine.eval(&Term::IndexApp(v, IndexTerm::Nat(*n)))?,
            Step::Force => machine.eval(&Term::Force(v))?,
            Step::Apply(_) => {
                let b = args.next().expect("one argument per application");
                machine.apply_function(&v, &Value::from_bundle(&b))?
            }
        };
    }

    // The bound: each step runs alongside the inputs not yet consumed.
    let mut remaining: Vec<IndexTerm> =
        steps.iter().filter_map(|s| if let Step::Apply(d) = s { Some(type_size(d)) } else { None }).collect();
    let beside = |rest: &[IndexTerm]| rest.iter().cloned().reduce(IndexTerm::par).unwrap_or(IndexTerm::Empty);
    let mut bound_term = IndexTerm::par(typing.main_effect.clone(), beside(&remaining));
    for (s, e) in steps.iter().zip(effects) {
        if matches!(s, Step::Apply(_)) {
            remaining.remove(0);
        }
        bound_term = IndexTerm::seq(bound_term, IndexTerm::par(e, beside(&remaining)));
    }
    let bound = eval_closed(&bound_term, val, p)?;

    let mut label_depths = Vec::new();
    if p.is_local() {
        let out = v.to_bundle().ok_or(HarnessError::Shape)?;
        let reached = oracle_depth(&machine.circuit, &in_depths).map_err(EvalError::from)?;
        for (l, ann) in leaf_annotations(&result_type, &out)? {
            let promised = match ann {
                Some(a) => eval_closed(&a, val, p)?,
                None => continue,
            };
            label_depths.push((l, promised, reached.get(&l).copied().unwrap_or(0)));
        }
    }
    Ok(Run { circuit: machine.circuit, result: v, bound, label_depths })
}

/// Pairs each label of `b` with the (closed) annotation of its leaf in `t`.
fn leaf_annotations(t: &Type, b: &Bundle) -> Result<Vec<(Label, Option<IndexTerm>)>, HarnessError> {
    let mut out = Vec::new();
    collect_leaves(t, b, &mut out)?;
    Ok(out)
}

fn collect_leaves(t: &Type, b: &Bundle, out: &mut Vec<(Label, Option<IndexTerm>)>) -> Result<(), HarnessError> {
    match (t, b) {
        (Type::Unit, Bundle::Unit) => Ok(()),
        (Type::Wire(_, ann), Bundle::Single(l)) => {
            out.push((*l, ann.clone()));
            Ok(())
        }
        (Type::Tensor(x, y), Bundle::Pair(bx, by)) => {
            collect_leaves(x, bx, out)?;
            collect_leaves(y, by, out)
        }
        (Type::List(..), Bundle::Nil) => Ok(()),
        (Type::List(j, _, a), Bundle::Cons(..)) => {
            let mut elems = Vec::new();
            let mut cur = b;
            while let Bundle::Cons(init, last) = cur {
                elems.push(&**last);
                cur = init;
            }
            for (k, e) in elems.into_iter().rev().enumerate() {
                collect_leaves(&subst_type(a, &IndexTerm::Nat(k as u64), j), e, out)?;
            }
            Ok(())
        }
        _ => Err(HarnessError::Shape),
    }
}

/// One row of a bound comparison.
#[derive(Clone, Debug)]
pub struct BoundRow {
    pub valuation: Valuation,
    pub bound: u64,
    pub measured: u64,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub program: String,
    pub profile: &'static str,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} under {}:", self.program, self.profile)?;
        for r in &self.rows {
            let val: Vec<String> = r.valuation.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(
                f,
                "  [{}] bound {} measured {} {}",
                val.join(", "),
                r.bound,
                r.measured,
                if r.holds { "ok" } else { "VIOLATED" }
            )?;
        }
        Ok(())
    }
}

/// Runs `main` under each valuation and compares bound with measurement.
/// Under the local profile every output wire's depth is compared with its
/// annotation; the row reports the worst case.
pub fn verify_bounds(
    name: &str,
    program: &Program,
    typing: &ProgramTyping,
    p: &'static MetricProfile,
    valuations: &[Valuation],
) -> Result<BoundReport, HarnessError> {
    let mut rows = Vec::new();
    for val in valuations {
        let run = run_main(program, typing, p, val)?;
        let row = if p.is_local() {
            let holds = run.label_depths.iter().all(|(_, promised, reached)| reached <= promised);
            let bound = run.label_depths.iter().map(|d| d.1).max().unwrap_or(0);
            let measured = run.label_depths.iter().map(|d| d.2).max().unwrap_or(0);
            BoundRow { valuation: val.clone(), bound, measured, holds }
        } else {
            let measured = p.oracle.measure(&run.circuit);
            BoundRow { valuation: val.clone(), bound: run.bound, measured, holds: measured <= run.bound }
        };
        rows.push(row);
    }
    Ok(BoundReport { program: name.to_string(), profile: p.name, rows })
}

/// Every valuation of `params` with values drawn from `range`.
pub fn valuation_grid(params: &[&str], range: std::ops::RangeInclusive<u64>) -> Vec<Valuation> {
    let mut out = vec![Valuation::new()];
    for p in params {
        out = out
            .into_iter()
            .flat_map(|v| {
                range.clone().map(move |k| {
                    let mut w = v.clone();
                    w.insert(p.to_string(), k);
                    w
                })
            })
            .collect();
    }
    out
}

/// Index parameters of a type's leading index abstractions.
pub fn leading_params(t: &Type) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Type::IndexAll(i, _, a) => {
                out.push(i.clone());
                cur = a;
            }
            Type::Bang(_, a) => cur = a,
            Type::Arrow(f) if matches!(f.scheme, Scheme::Mono) && type_free_vars(&f.dom).is_empty() => cur = &f.cod,
            _ => return out,
        }
    }
}

/// Wire types of a bundle type's leaves (for reporting).
pub fn wire_leaves(t: &Type) -> Vec<WireType> {
    match t {
        Type::Wire(w, _) => vec![*w],
        Type::Tensor(a, b) => {
            let mut v = wire_leaves(a);
            v.extend(wire_leaves(b));
            v
        }
        _ => Vec::new(),
    }
}

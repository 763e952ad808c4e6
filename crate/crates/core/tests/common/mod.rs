//! Helpers shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use pqra::circuit::WireType;
use pqra::harness::{check_source, corpus_program};
use pqra::index::{CheckStrategy, IndexTerm, Valuation};
use pqra::metrics::MetricProfile;
use pqra::syntax::ast::{ArrowType, Program, Scheme, Term, Type, Value};
use pqra::typeck::ProgramTyping;

/// Parses and checks a bundled program, panicking on failure.
pub fn checked(name: &str, p: &MetricProfile) -> (Program, ProgramTyping) {
    let prog = corpus_program(name).unwrap_or_else(|| panic!("no corpus program {name}"));
    check_source(prog.source, p, CheckStrategy::default())
        .unwrap_or_else(|e| panic!("{name} under {}: {e}", p.name))
}

pub fn valuation(pairs: &[(&str, u64)]) -> Valuation {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

// ---- random index terms --------------------------------------------------

pub const INDEX_VARS: [&str; 3] = ["a", "b", "c"];
const BINDERS: [&str; 2] = ["i", "k"];

/// Index terms over `a`, `b`, `c` mixing arithmetic, abstract resource
/// operators and bounded forms (with small bounds).
pub fn arb_index_term() -> impl Strategy<Value = IndexTerm> {
    let leaf = prop_oneof![
        (0u64..6).prop_map(IndexTerm::Nat),
        prop::sample::select(&INDEX_VARS[..]).prop_map(IndexTerm::var),
        prop::sample::select(&BINDERS[..]).prop_map(IndexTerm::var),
        Just(IndexTerm::Wire(WireType::Qubit)),
        Just(IndexTerm::Wire(WireType::Bit)),
        Just(IndexTerm::Empty),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let small_bound = prop_oneof![(0u64..4).prop_map(IndexTerm::Nat), prop::sample::select(&INDEX_VARS[..]).prop_map(IndexTerm::var)];
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| IndexTerm::Plus(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| IndexTerm::Minus(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| IndexTerm::Times(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| IndexTerm::Max(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| IndexTerm::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| IndexTerm::par(a, b)),
            (prop::sample::select(&BINDERS[..]), small_bound.clone(), inner.clone())
                .prop_map(|(i, n, b)| IndexTerm::sum(i, n, b)),
            (prop::sample::select(&BINDERS[..]), small_bound.clone(), inner.clone())
                .prop_map(|(i, n, b)| IndexTerm::big_max(i, n, b)),
            (prop::sample::select(&BINDERS[..]), small_bound.clone(), inner.clone())
                .prop_map(|(i, n, b)| IndexTerm::bounded_seq(i, n, b)),
            (prop::sample::select(&BINDERS[..]), small_bound, inner)
                .prop_map(|(i, n, b)| IndexTerm::bounded_par(i, n, b)),
        ]
    })
}

/// A valuation of `a`, `b`, `c` and the binder names (the latter matter
/// only where a binder occurs free).
pub fn arb_valuation() -> impl Strategy<Value = Valuation> {
    prop::collection::vec(0u64..6, 5).prop_map(|v| {
        INDEX_VARS.iter().chain(BINDERS.iter()).zip(v).map(|(k, n)| (k.to_string(), n)).collect()
    })
}

// ---- random syntax trees -----------------------------------------------------

const TERM_VARS: [&str; 5] = ["x", "y", "q", "f", "acc"];

/// Random source-level programs in administrative normal form: every tree
/// the parser can produce and the printer can render.
pub struct AstGen {
    pub rng: ChaCha8Rng,
}

impl AstGen {
    fn pick<'a>(&mut self, xs: &[&'a str]) -> &'a str {
        xs[self.rng.gen_range(0..xs.len())]
    }

    pub fn index(&mut self, depth: u32) -> IndexTerm {
        if depth == 0 || self.rng.gen_bool(0.4) {
            return if self.rng.gen_bool(0.5) {
                IndexTerm::Nat(self.rng.gen_range(0..5))
            } else {
                IndexTerm::var(self.pick(&["n", "m", "i"]))
            };
        }
        let a = self.index(depth - 1);
        let b = self.index(depth - 1);
        match self.rng.gen_range(0..6) {
            0 => IndexTerm::Plus(Box::new(a), Box::new(b)),
            1 => IndexTerm::Minus(Box::new(a), Box::new(b)),
            2 => IndexTerm::Times(Box::new(a), Box::new(b)),
            3 => IndexTerm::Max(Box::new(a), Box::new(b)),
            4 => IndexTerm::sum("j", a, b),
            _ => IndexTerm::par(a, b),
        }
    }

    pub fn ty(&mut self, depth: u32) -> Type {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return match self.rng.gen_range(0..4) {
                0 => Type::Unit,
                1 => Type::qubit(),
                2 => Type::bit(),
                _ => Type::wire(WireType::Qubit, Some(self.index(1))),
            };
        }
        match self.rng.gen_range(0..5) {
            0 => Type::tensor(self.ty(depth - 1), self.ty(depth - 1)),
            1 => Type::list("j", self.index(1), self.ty(depth - 1)),
            2 => Type::bang(self.index(1), self.ty(depth - 1)),
            3 => Type::Arrow(Box::new(ArrowType {
                dom: self.ty(depth - 1),
                cod: self.ty(depth - 1),
                effect: self.index(1),
                capture: if self.rng.gen_bool(0.5) { Type::Unit } else { Type::qubit() },
                scheme: Scheme::Mono,
            })),
            _ => Type::index_all("n", self.index(1), self.ty(depth - 1)),
        }
    }

    pub fn value(&mut self, depth: u32) -> Value {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return match self.rng.gen_range(0..3) {
                0 => Value::Unit,
                1 => Value::Nil,
                _ => Value::var(self.pick(&TERM_VARS)),
            };
        }
        match self.rng.gen_range(0..6) {
            0 => Value::pair(self.value(depth - 1), self.value(depth - 1)),
            1 => Value::rcons(self.value(depth - 1), self.value(depth - 1)),
            2 => {
                let x = self.pick(&TERM_VARS);
                Value::abs(x, self.ty(2), self.term(depth - 1))
            }
            3 => Value::lift(self.term(depth - 1)),
            4 => Value::index_abs(self.pick(&["n", "m"]), self.term(depth - 1)),
            _ => Value::var(self.pick(&TERM_VARS)),
        }
    }

    fn var(&mut self) -> Value {
        Value::var(self.pick(&TERM_VARS))
    }

    pub fn term(&mut self, depth: u32) -> Term {
        if depth == 0 {
            return Term::Return(self.value(0));
        }
        match self.rng.gen_range(0..10) {
            0 => Term::Return(self.value(depth - 1)),
            1 => Term::App(self.var(), self.value(depth - 1)),
            2 => {
                let x = self.pick(&TERM_VARS);
                let y = self.pick(&["u", "v"]);
                Term::Dest(x.into(), y.into(), self.var(), Box::new(self.term(depth - 1)))
            }
            3 => Term::Force(self.var()),
            4 => Term::Apply(self.var(), self.value(depth - 1)),
            5 => {
                let x = self.pick(&TERM_VARS);
                Term::Let(x.into(), Box::new(self.term(depth - 1)), Box::new(self.term(depth - 1)))
            }
            6 => Term::Fold(self.var(), self.value(depth - 1), self.var()),
            7 => Term::IndexApp(self.var(), self.index(2)),
            8 => Term::Box(vec![], self.ty(2), self.var()),
            _ => Term::Annot(Box::new(self.term(depth - 1)), self.ty(2)),
        }
    }
}

//! Index terms: natural-number arithmetic extended with the abstract
//! resource operators that annotate types, effects and circuit signatures.
//!
//! Abstract operators (`empty`, `wire`, `seq`, `par`, `id`, `append`,
//! `gate`) have no fixed meaning; a [`MetricProfile`] interprets them.
//! Semantic judgments between index terms are checked on a bounded set of
//! valuations ([`check_entailment`]); a `HoldsBounded` verdict is evidence,
//! not a proof. [`export_smtlib`] renders the same obligation for an
//! external solver.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::circuit::{gate_decl, WireType};
use crate::metrics::MetricProfile;

pub mod simplify;

pub type Valuation = BTreeMap<String, u64>;
pub type IndexVarSet = BTreeSet<String>;

/// A literal multiset of wire types, stored as counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WireMultiset {
    pub qubits: u64,
    pub bits: u64,
}

impl WireMultiset {
    pub fn from_wires(ws: impl IntoIterator<Item = WireType>) -> Self {
        let mut m = WireMultiset::default();
        for w in ws {
            m.add(w);
        }
        m
    }

    pub fn add(&mut self, w: WireType) {
        match w {
            WireType::Qubit => self.qubits += 1,
            WireType::Bit => self.bits += 1,
        }
    }

    pub fn len(&self) -> u64 {
        self.qubits + self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for WireMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec!["Qubit"; self.qubits as usize];
        parts.extend(std::iter::repeat_n("Bit", self.bits as usize));
        write!(f, "id[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexTerm {
    Nat(u64),
    Var(String),
    Plus(Box<IndexTerm>, Box<IndexTerm>),
    /// Truncated subtraction.
    Minus(Box<IndexTerm>, Box<IndexTerm>),
    Times(Box<IndexTerm>, Box<IndexTerm>),
    Max(Box<IndexTerm>, Box<IndexTerm>),
    /// Arithmetic bounded sum `sum[i<I] J`.
    Sum(String, Box<IndexTerm>, Box<IndexTerm>),
    /// Arithmetic bounded maximum `max[i<I] J` (0 when the range is empty).
    BigMax(String, Box<IndexTerm>, Box<IndexTerm>),
    Id(WireMultiset),
    Append {
        gate: String,
        global: Box<IndexTerm>,
        beside: Box<IndexTerm>,
        into: Box<IndexTerm>,
        outof: Box<IndexTerm>,
    },
    GateOp {
        gate: String,
        pos: usize,
        args: Vec<IndexTerm>,
    },
    Empty,
    Wire(WireType),
    Seq(Box<IndexTerm>, Box<IndexTerm>),
    Par(Box<IndexTerm>, Box<IndexTerm>),
    BoundedSeq(String, Box<IndexTerm>, Box<IndexTerm>),
    BoundedPar(String, Box<IndexTerm>, Box<IndexTerm>),
}

use IndexTerm as I;

fn bx(t: IndexTerm) -> Box<IndexTerm> {
    Box::new(t)
}

impl From<u64> for IndexTerm {
    fn from(n: u64) -> Self {
        I::Nat(n)
    }
}

impl From<&str> for IndexTerm {
    fn from(v: &str) -> Self {
        I::Var(v.to_string())
    }
}

impl IndexTerm {
    pub fn var(name: &str) -> Self {
        I::Var(name.to_string())
    }

    /// `a + b`, folding literals.
    pub fn plus(a: IndexTerm, b: IndexTerm) -> Self {
        match (a, b) {
            (I::Nat(x), I::Nat(y)) => I::Nat(x.saturating_add(y)),
            (I::Plus(l, r), I::Nat(y)) if matches!(*r, I::Nat(_)) => {
                let I::Nat(x) = *r else { unreachable!() };
                I::Plus(l, bx(I::Nat(x.saturating_add(y))))
            }
            (a, b) => I::Plus(bx(a), bx(b)),
        }
    }

    pub fn minus(a: IndexTerm, b: IndexTerm) -> Self {
        match (a, b) {
            (I::Nat(x), I::Nat(y)) => I::Nat(x.saturating_sub(y)),
            (a, b) => I::Minus(bx(a), bx(b)),
        }
    }

    pub fn times(a: IndexTerm, b: IndexTerm) -> Self {
        match (a, b) {
            (I::Nat(x), I::Nat(y)) => I::Nat(x.saturating_mul(y)),
            (a, b) => I::Times(bx(a), bx(b)),
        }
    }

    pub fn max(a: IndexTerm, b: IndexTerm) -> Self {
        match (a, b) {
            (I::Nat(x), I::Nat(y)) => I::Nat(x.max(y)),
            (a, b) => I::Max(bx(a), bx(b)),
        }
    }

    pub fn seq(a: IndexTerm, b: IndexTerm) -> Self {
        I::Seq(bx(a), bx(b))
    }

    pub fn par(a: IndexTerm, b: IndexTerm) -> Self {
        I::Par(bx(a), bx(b))
    }

    pub fn bounded_seq(i: &str, bound: IndexTerm, body: IndexTerm) -> Self {
        I::BoundedSeq(i.to_string(), bx(bound), bx(body))
    }

    pub fn bounded_par(i: &str, bound: IndexTerm, body: IndexTerm) -> Self {
        I::BoundedPar(i.to_string(), bx(bound), bx(body))
    }

    pub fn sum(i: &str, bound: IndexTerm, body: IndexTerm) -> Self {
        I::Sum(i.to_string(), bx(bound), bx(body))
    }

    pub fn big_max(i: &str, bound: IndexTerm, body: IndexTerm) -> Self {
        I::BigMax(i.to_string(), bx(bound), bx(body))
    }

    pub fn append(gate: &str, global: IndexTerm, beside: IndexTerm, into: IndexTerm, outof: IndexTerm) -> Self {
        I::Append { gate: gate.to_string(), global: bx(global), beside: bx(beside), into: bx(into), outof: bx(outof) }
    }

    /// True when the term uses only arithmetic (no abstract operators).
    pub fn is_arith(&self) -> bool {
        match self {
            I::Nat(_) | I::Var(_) => true,
            I::Plus(a, b) | I::Minus(a, b) | I::Times(a, b) | I::Max(a, b) => a.is_arith() && b.is_arith(),
            I::Sum(_, a, b) | I::BigMax(_, a, b) => a.is_arith() && b.is_arith(),
            _ => false,
        }
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    fn children(&self) -> Vec<&IndexTerm> {
        match self {
            I::Nat(_) | I::Var(_) | I::Id(_) | I::Empty | I::Wire(_) => vec![],
            I::Plus(a, b) | I::Minus(a, b) | I::Times(a, b) | I::Max(a, b) | I::Seq(a, b) | I::Par(a, b) => {
                vec![a, b]
            }
            I::Sum(_, a, b) | I::BigMax(_, a, b) | I::BoundedSeq(_, a, b) | I::BoundedPar(_, a, b) => vec![a, b],
            I::Append { global, beside, into, outof, .. } => vec![global, beside, into, outof],
            I::GateOp { args, .. } => args.iter().collect(),
        }
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }

    /// Operator names that have no arithmetic meaning on their own.
    pub fn mentions_abstract(&self) -> bool {
        !self.is_arith()
    }
}

/// Unbound variable names.
pub fn free_vars(t: &IndexTerm) -> IndexVarSet {
    let mut out = IndexVarSet::new();
    collect_free(t, &mut Vec::new(), &mut out);
    out
}

fn collect_free<'a>(t: &'a IndexTerm, bound: &mut Vec<&'a str>, out: &mut IndexVarSet) {
    match t {
        I::Var(v) => {
            if !bound.contains(&v.as_str()) {
                out.insert(v.clone());
            }
        }
        I::Sum(i, n, b) | I::BigMax(i, n, b) | I::BoundedSeq(i, n, b) | I::BoundedPar(i, n, b) => {
            collect_free(n, bound, out);
            bound.push(i);
            collect_free(b, bound, out);
            bound.pop();
        }
        _ => {
            for c in t.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

/// A variable name based on `base` that avoids every name in `avoid`.
pub fn fresh_name(base: &str, avoid: &IndexVarSet) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..).map(|k| format!("{stem}{k}")).find(|c| !avoid.contains(c)).expect("infinite supply")
}

/// Capture-avoiding substitution of `replacement` for `var`, folding
/// literal arithmetic on the way back up.
pub fn substitute(t: &IndexTerm, replacement: &IndexTerm, var: &str) -> IndexTerm {
    let fv = free_vars(replacement);
    subst_with(t, replacement, var, &fv)
}

fn subst_with(t: &IndexTerm, r: &IndexTerm, x: &str, fv_r: &IndexVarSet) -> IndexTerm {
    let go = |c: &IndexTerm| subst_with(c, r, x, fv_r);
    match t {
        I::Var(v) if v == x => r.clone(),
        I::Nat(_) | I::Var(_) | I::Id(_) | I::Empty | I::Wire(_) => t.clone(),
        I::Plus(a, b) => I::plus(go(a), go(b)),
        I::Minus(a, b) => I::minus(go(a), go(b)),
        I::Times(a, b) => I::times(go(a), go(b)),
        I::Max(a, b) => I::max(go(a), go(b)),
        I::Seq(a, b) => I::seq(go(a), go(b)),
        I::Par(a, b) => I::par(go(a), go(b)),
        I::Append { gate, global, beside, into, outof } => {
            I::append(gate, go(global), go(beside), go(into), go(outof))
        }
        I::GateOp { gate, pos, args } => I::GateOp { gate: gate.clone(), pos: *pos, args: args.iter().map(go).collect() },
        I::Sum(i, n, b) | I::BigMax(i, n, b) | I::BoundedSeq(i, n, b) | I::BoundedPar(i, n, b) => {
            let n2 = go(n);
            let (i2, b2) = if i == x {
                (i.clone(), (**b).clone())
            } else if fv_r.contains(i) && free_vars(b).contains(x) {
                let mut avoid = fv_r.clone();
                avoid.extend(free_vars(b));
                avoid.insert(x.to_string());
                let fresh = fresh_name(i, &avoid);
                let renamed = subst_with(b, &I::Var(fresh.clone()), i, &IndexVarSet::from([fresh.clone()]));
                (fresh, subst_with(&renamed, r, x, fv_r))
            } else {
                (i.clone(), go(b))
            };
            rebuild_bounded(t, i2, n2, b2)
        }
    }
}

fn rebuild_bounded(like: &IndexTerm, i: String, n: IndexTerm, b: IndexTerm) -> IndexTerm {
    match like {
        I::Sum(..) => I::Sum(i, bx(n), bx(b)),
        I::BigMax(..) => I::BigMax(i, bx(n), bx(b)),
        I::BoundedSeq(..) => I::BoundedSeq(i, bx(n), bx(b)),
        I::BoundedPar(..) => I::BoundedPar(i, bx(n), bx(b)),
        _ => unreachable!("not a bounded form"),
    }
}

/// Simultaneous renaming of free variables (used for alpha-conversion).
pub fn rename_vars(t: &IndexTerm, map: &BTreeMap<String, String>) -> IndexTerm {
    let mut out = t.clone();
    // Route through fresh intermediates so swaps such as {a↦b, b↦a} work.
    let mut avoid: IndexVarSet = free_vars(t);
    avoid.extend(map.values().cloned());
    let mut temps = Vec::new();
    for (from, to) in map {
        let tmp = fresh_name(&format!("{from}_tmp"), &avoid);
        avoid.insert(tmp.clone());
        out = substitute(&out, &I::Var(tmp.clone()), from);
        temps.push((tmp, to.clone()));
    }
    for (tmp, to) in temps {
        out = substitute(&out, &I::Var(to), &tmp);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("unbound index variable `{0}`")]
    Unbound(String),
    #[error("unknown gate `{0}` in index term")]
    UnknownGate(String),
    #[error("operator `{0}` cannot be expressed under profile `{1}`")]
    Unexpressible(String, String),
}

struct Evaluator<'a> {
    base: &'a Valuation,
    scope: Vec<(&'a str, u64)>,
    p: &'a MetricProfile,
}

impl<'a> Evaluator<'a> {
    fn lookup(&self, v: &str) -> Result<u64, IndexError> {
        if let Some((_, n)) = self.scope.iter().rev().find(|(name, _)| *name == v) {
            return Ok(*n);
        }
        self.base.get(v).copied().ok_or_else(|| IndexError::Unbound(v.to_string()))
    }

    fn bounded(
        &mut self,
        i: &'a str,
        n: &'a IndexTerm,
        b: &'a IndexTerm,
        init: u64,
        step: &dyn Fn(&MetricProfile, u64, u64) -> u64,
    ) -> Result<u64, IndexError> {
        let bound = self.eval(n)?;
        let mut acc = init;
        for k in 0..bound {
            self.scope.push((i, k));
            let v = self.eval(b);
            self.scope.pop();
            acc = step(self.p, acc, v?);
        }
        Ok(acc)
    }

    fn eval(&mut self, t: &'a IndexTerm) -> Result<u64, IndexError> {
        Ok(match t {
            I::Nat(n) => *n,
            I::Var(v) => self.lookup(v)?,
            I::Plus(a, b) => self.eval(a)?.saturating_add(self.eval(b)?),
            I::Minus(a, b) => self.eval(a)?.saturating_sub(self.eval(b)?),
            I::Times(a, b) => self.eval(a)?.saturating_mul(self.eval(b)?),
            I::Max(a, b) => self.eval(a)?.max(self.eval(b)?),
            I::Sum(i, n, b) => self.bounded(i, n, b, 0, &|_, a, v| a.saturating_add(v))?,
            I::BigMax(i, n, b) => self.bounded(i, n, b, 0, &|_, a, v| a.max(v))?,
            I::Empty => self.p.rmi.empty,
            I::Wire(w) => self.p.rmi.wire(*w),
            I::Seq(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                self.p.rmi.seq.apply(x, y)
            }
            I::Par(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                self.p.rmi.par.apply(x, y)
            }
            I::BoundedSeq(i, n, b) => {
                let e = self.p.rmi.empty;
                self.bounded(i, n, b, e, &|p, a, v| p.rmi.seq.apply(a, v))?
            }
            I::BoundedPar(i, n, b) => {
                let e = self.p.rmi.empty;
                self.bounded(i, n, b, e, &|p, a, v| p.rmi.par.apply(a, v))?
            }
            I::Id(ms) => self.p.cmi.id(ms),
            I::Append { gate, global, beside, into, outof } => {
                let g = gate_decl(gate).ok_or_else(|| IndexError::UnknownGate(gate.clone()))?;
                let n = self.eval(global)?;
                let l = self.eval(beside)?;
                let h = self.eval(into)?;
                let k = self.eval(outof)?;
                self.p.cmi.append(g, n, l, h, k)
            }
            I::GateOp { gate, pos, args } => {
                let g = gate_decl(gate).ok_or_else(|| IndexError::UnknownGate(gate.clone()))?;
                let vals = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
                self.p.cmi.gate(g, *pos, &vals)
            }
        })
    }
}

/// Value of `t` under valuation `v`, with abstract operators interpreted by `p`.
pub fn evaluate(t: &IndexTerm, v: &Valuation, p: &MetricProfile) -> Result<u64, IndexError> {
    Evaluator { base: v, scope: Vec::new(), p }.eval(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
        })
    }
}

/// Which valuations a bounded check visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckStrategy {
    /// Every variable ranges over `0..=grid_max` exhaustively.
    pub grid_max: u64,
    /// Number of additional pseudo-random valuations.
    pub samples: usize,
    /// Upper bound (inclusive) for random components.
    pub sample_max: u64,
}

impl Default for CheckStrategy {
    fn default() -> Self {
        CheckStrategy { grid_max: 8, samples: 256, sample_max: 1 << 10 }
    }
}

impl CheckStrategy {
    /// All valuations over `vars`, grid first, then random samples seeded by `seed`.
    pub fn valuations(&self, vars: &[String], seed: u64) -> Vec<Valuation> {
        let mut out = Vec::new();
        let k = vars.len();
        let mut digits = vec![0u64; k];
        loop {
            out.push(vars.iter().cloned().zip(digits.iter().copied()).collect());
            let mut pos = 0;
            while pos < k {
                digits[pos] += 1;
                if digits[pos] <= self.grid_max {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        if k > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..self.samples {
                out.push(vars.iter().map(|v| (v.clone(), rng.gen_range(0..=self.sample_max))).collect());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    HoldsBounded,
    Counterexample(Valuation),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsBounded)
    }
}

/// Deterministic 64-bit seed from an obligation's printed form.
pub fn content_seed(parts: &[&str]) -> u64 {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}

/// Bounded check of `lhs rel rhs` over valuations of the variables that
/// actually occur free (other members of `vars` cannot affect the result).
/// Evaluation errors count as failures.
pub fn check_entailment(
    vars: &IndexVarSet,
    lhs: &IndexTerm,
    rhs: &IndexTerm,
    rel: Relation,
    p: &MetricProfile,
    strategy: &CheckStrategy,
) -> Verdict {
    let mut occurring = free_vars(lhs);
    occurring.extend(free_vars(rhs));
    let used: Vec<String> = occurring.iter().filter(|v| vars.contains(*v)).cloned().collect();
    let seed = content_seed(&[&lhs.to_string(), &rhs.to_string(), &rel.to_string(), p.name]);
    for val in strategy.valuations(&used, seed) {
        let ok = match (evaluate(lhs, &val, p), evaluate(rhs, &val, p)) {
            (Ok(a), Ok(b)) => match rel {
                Relation::Le => a <= b,
                Relation::Eq => a == b,
            },
            _ => false,
        };
        if !ok {
            let mut full = val;
            for v in vars {
                full.entry(v.clone()).or_insert(0);
            }
            return Verdict::Counterexample(full);
        }
    }
    Verdict::HoldsBounded
}

/// SMT-LIB v2 script whose `unsat` answer establishes `lhs rel rhs` for all
/// naturals. Bounded forms are unrolled when their bound is closed.
pub fn export_smtlib(
    vars: &IndexVarSet,
    lhs: &IndexTerm,
    rhs: &IndexTerm,
    rel: Relation,
    p: &MetricProfile,
) -> Result<String, IndexError> {
    let l = p.lower(lhs)?;
    let r = p.lower(rhs)?;
    let mut s = String::new();
    s.push_str(&format!("; obligation: {lhs} {rel} {rhs} under {}\n", p.name));
    s.push_str("(set-logic ALL)\n");
    for v in vars {
        s.push_str(&format!("(declare-const {v} Int)\n(assert (>= {v} 0))\n"));
    }
    let (ls, rs) = (smt_expr(&l, p)?, smt_expr(&r, p)?);
    let op = match rel {
        Relation::Le => "<=",
        Relation::Eq => "=",
    };
    s.push_str(&format!("(assert (not ({op} {ls} {rs})))\n(check-sat)\n"));
    Ok(s)
}

fn smt_expr(t: &IndexTerm, p: &MetricProfile) -> Result<String, IndexError> {
    let go = |x: &IndexTerm| smt_expr(x, p);
    Ok(match t {
        I::Nat(n) => n.to_string(),
        I::Var(v) => v.clone(),
        I::Plus(a, b) => format!("(+ {} {})", go(a)?, go(b)?),
        I::Times(a, b) => format!("(* {} {})", go(a)?, go(b)?),
        I::Minus(a, b) => {
            let (x, y) = (go(a)?, go(b)?);
            format!("(ite (>= {x} {y}) (- {x} {y}) 0)")
        }
        I::Max(a, b) => {
            let (x, y) = (go(a)?, go(b)?);
            format!("(ite (>= {x} {y}) {x} {y})")
        }
        I::Sum(i, n, b) | I::BigMax(i, n, b) => {
            let bound = evaluate(n, &Valuation::new(), p)
                .map_err(|_| IndexError::Unexpressible(format!("bounded form over `{i}` with open bound"), p.name.into()))?;
            let sum = matches!(t, I::Sum(..));
            let mut acc = I::Nat(0);
            for k in 0..bound {
                let inst = substitute(b, &I::Nat(k), i);
                acc = if sum { I::Plus(bx(acc), bx(inst)) } else { I::Max(bx(acc), bx(inst)) };
            }
            go(&acc)?
        }
        other => return Err(IndexError::Unexpressible(operator_name(other).into(), p.name.into())),
    })
}

pub fn operator_name(t: &IndexTerm) -> &'static str {
    match t {
        I::Nat(_) => "literal",
        I::Var(_) => "variable",
        I::Plus(..) => "+",
        I::Minus(..) => "-",
        I::Times(..) => "*",
        I::Max(..) => "max",
        I::Sum(..) => "sum",
        I::BigMax(..) => "max[]",
        I::Id(_) => "id",
        I::Append { .. } => "append",
        I::GateOp { .. } => "gate",
        I::Empty => "empty",
        I::Wire(_) => "wire",
        I::Seq(..) => "seq",
        I::Par(..) => "par",
        I::BoundedSeq(..) => "seq[]",
        I::BoundedPar(..) => "par[]",
    }
}

// Printing precedence: bounded forms extend to the right and bind loosest.
const P_BOUNDED: u8 = 0;
const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_ATOM: u8 = 3;

fn prec(t: &IndexTerm) -> u8 {
    match t {
        I::Sum(..) | I::BigMax(..) | I::BoundedSeq(..) | I::BoundedPar(..) => P_BOUNDED,
        I::Plus(..) | I::Minus(..) => P_ADD,
        I::Times(..) => P_MUL,
        _ => P_ATOM,
    }
}

fn write_prec(f: &mut fmt::Formatter<'_>, t: &IndexTerm, min: u8) -> fmt::Result {
    if prec(t) < min {
        f.write_str("(")?;
        write_term(f, t)?;
        f.write_str(")")
    } else {
        write_term(f, t)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &IndexTerm) -> fmt::Result {
    match t {
        I::Nat(n) => write!(f, "{n}"),
        I::Var(v) => f.write_str(v),
        I::Plus(a, b) | I::Minus(a, b) => {
            write_prec(f, a, P_ADD)?;
            f.write_str(if matches!(t, I::Plus(..)) { "+" } else { "-" })?;
            write_prec(f, b, P_MUL)
        }
        I::Times(a, b) => {
            write_prec(f, a, P_MUL)?;
            f.write_str("*")?;
            write_prec(f, b, P_ATOM)
        }
        I::Max(a, b) => write!(f, "max({a},{b})"),
        I::Seq(a, b) => write!(f, "seq({a},{b})"),
        I::Par(a, b) => write!(f, "par({a},{b})"),
        I::Sum(i, n, b) => write!(f, "sum[{i}<{n}] {b}"),
        I::BigMax(i, n, b) => write!(f, "max[{i}<{n}] {b}"),
        I::BoundedSeq(i, n, b) => write!(f, "seq[{i}<{n}] {b}"),
        I::BoundedPar(i, n, b) => write!(f, "par[{i}<{n}] {b}"),
        I::Empty => f.write_str("empty"),
        I::Wire(w) => write!(f, "wire({w})"),
        I::Id(ms) => write!(f, "{ms}"),
        I::Append { gate, global, beside, into, outof } => {
            write!(f, "append[{gate}]({global},{beside},{into},{outof})")
        }
        I::GateOp { gate, pos, args } => {
            write!(f, "gate[{gate},{pos}](")?;
            for (k, a) in args.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")
        }
    }
}

impl fmt::Display for IndexTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self)
    }
}
